// Copyright 2026 The darkcomb Authors
// SPDX-License-Identifier: Apache-2.0

//! Block-tridiagonal elimination (block Thomas algorithm).

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{Error, Result};

type CMat = DMatrix<Complex64>;
type CVec = DVector<Complex64>;

/// Pivots smaller than this fraction of the largest pivot mark the system as
/// singular.
const PIVOT_RATIO: f64 = 1e-13;

/// `lower[k]` couples block `k` to `k − 1` (entry 0 unused), `upper[k]`
/// couples block `k` to `k + 1` (last entry unused).
#[derive(Debug, Clone)]
pub struct BlockTridiagonal {
    pub lower: Vec<CMat>,
    pub diag: Vec<CMat>,
    pub upper: Vec<CMat>,
}

impl BlockTridiagonal {
    pub fn len(&self) -> usize {
        self.diag.len()
    }

    pub fn is_empty(&self) -> bool {
        self.diag.is_empty()
    }

    /// Solves `A x = rhs`. With `check_pivots` the elimination also rejects
    /// numerically singular Schur complements.
    pub fn solve(&self, rhs: &[CVec], check_pivots: bool) -> Result<Vec<CVec>> {
        let k_total = self.len();
        if rhs.len() != k_total {
            return Err(Error::DimensionMismatch {
                expected: k_total,
                found: rhs.len(),
            });
        }
        // Forward sweep: store S_k^{-1} U_k and S_k^{-1} y_k.
        let mut x_up: Vec<Option<CMat>> = Vec::with_capacity(k_total);
        let mut z: Vec<CVec> = Vec::with_capacity(k_total);
        for k in 0..k_total {
            let (s, y) = if k == 0 {
                (self.diag[0].clone(), rhs[0].clone())
            } else {
                let l = &self.lower[k];
                let prev_x = x_up[k - 1].as_ref().expect("upper block present");
                (&self.diag[k] - l * prev_x, &rhs[k] - l * &z[k - 1])
            };
            let lu = s.lu();
            if check_pivots {
                check_lu_pivots(&lu)?;
            }
            let zk = lu.solve(&y).ok_or(Error::SingularSystem {
                context: "block elimination",
            })?;
            let xk = if k + 1 < k_total {
                Some(lu.solve(&self.upper[k]).ok_or(Error::SingularSystem {
                    context: "block elimination",
                })?)
            } else {
                None
            };
            x_up.push(xk);
            z.push(zk);
        }
        // Back substitution: x_k = z_k − (S_k^{-1} U_k) x_{k+1}.
        let mut out = z;
        for k in (0..k_total.saturating_sub(1)).rev() {
            let corr = x_up[k].as_ref().expect("upper block present") * &out[k + 1];
            out[k] -= corr;
        }
        Ok(out)
    }
}

fn check_lu_pivots(lu: &nalgebra::LU<Complex64, nalgebra::Dyn, nalgebra::Dyn>) -> Result<()> {
    let u = lu.u();
    let pivots: Vec<f64> = u.diagonal().iter().map(|z| z.norm()).collect();
    let max = pivots.iter().cloned().fold(0.0, f64::max);
    let min = pivots.iter().cloned().fold(f64::INFINITY, f64::min);
    if max == 0.0 || !(min / max > PIVOT_RATIO) {
        return Err(Error::SingularSystem {
            context: "steady-state generator",
        });
    }
    Ok(())
}
