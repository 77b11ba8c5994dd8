// Copyright 2026 The darkcomb Authors
// SPDX-License-Identifier: Apache-2.0

//! Probe susceptibility.
//!
//! To first order in the probe the coherences `ρ_xb` (x ≠ b) form a closed
//! set driven by the probe-free Floquet state `ρ₀`. [`ProbeKernel`] solves
//! that small block-tridiagonal system; it is what the spectra use.
//! [`probe_susceptibility`] instead solves the full master equation with the
//! probe included and checks linearity, and serves as the reference.

use nalgebra::{DMatrix, SMatrix, SVector};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::floquet::{floquet_steady_state, floquet_steady_state_capped, HarmonicState};
use crate::model::{
    build_liouvillian, build_periodic_hamiltonian, build_static_hamiltonian,
    build_static_liouvillian, AtomSystem, FieldSet, Level, LevelScheme, LiouvillianHarmonics,
    OperatorMatrix,
};

const I: Complex64 = Complex64::new(0.0, 1.0);
const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// Controls for the Floquet truncation of the probe-free state.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolverOptions {
    /// Edge-harmonic tolerance for choosing the truncation.
    pub floquet_tol: f64,
    pub max_truncation: usize,
    /// Extra harmonics carried by the probe response beyond those it reports.
    pub response_margin: usize,
}

impl Default for SolverOptions {
    fn default() -> Self {
        Self {
            floquet_tol: 1e-12,
            max_truncation: 48,
            response_margin: 6,
        }
    }
}

/// Time-harmonic generator for either level scheme. The static scheme has
/// no harmonics.
pub fn liouvillian_for(sys: &AtomSystem, fields: &FieldSet) -> Result<LiouvillianHarmonics> {
    match sys.scheme {
        LevelScheme::Periodic => build_liouvillian(&build_periodic_hamiltonian(sys, fields)?, sys),
        LevelScheme::Static => {
            let h = build_static_hamiltonian(sys, fields)?;
            Ok(LiouvillianHarmonics::from_static(
                sys.dim(),
                build_static_liouvillian(&h, sys)?,
            ))
        }
    }
}

/// Probe-free steady state at the Floquet truncation `n0` (0 when the
/// generator is static).
fn probe_free_state(sys: &AtomSystem, fields: &FieldSet, n0: usize) -> Result<HarmonicState> {
    let mut f = *fields;
    f.alpha_probe = 0.0;
    let l = liouvillian_for(sys, &f)?;
    if l.has_drive() {
        floquet_steady_state(&l, f.nu_rf, n0.max(1))
    } else {
        floquet_steady_state(&l, f.nu_rf, 0)
    }
}

/// Smallest Floquet truncation meeting `opts.floquet_tol` for the probe-free
/// state of `fields`.
pub fn probe_free_truncation(
    sys: &AtomSystem,
    fields: &FieldSet,
    opts: &SolverOptions,
) -> Result<usize> {
    let mut f = *fields;
    f.alpha_probe = 0.0;
    let l = liouvillian_for(sys, &f)?;
    if !l.has_drive() {
        return Ok(0);
    }
    Ok(floquet_steady_state_capped(&l, f.nu_rf, opts.floquet_tol, opts.max_truncation)?.truncation)
}

/// First-order probe response of one velocity class, for a fixed drive
/// detuning and Doppler shift. Evaluating it at another two-photon detuning
/// only shifts the diagonal, so one kernel serves a whole δ grid.
#[derive(Debug, Clone)]
pub struct ProbeKernel {
    inner: KernelBlocks,
    nu: f64,
    /// Floquet truncation of the source.
    n0: usize,
    margin: usize,
}

#[derive(Debug, Clone)]
enum KernelBlocks {
    Three(Blocks<3>),
    Four(Blocks<4>),
}

#[derive(Debug, Clone)]
struct Blocks<const D: usize> {
    r0: SMatrix<Complex64, D, D>,
    /// Couples harmonic `n` to `n − 1`.
    lower: SMatrix<Complex64, D, D>,
    /// Couples harmonic `n` to `n + 1`.
    upper: SMatrix<Complex64, D, D>,
    /// Source for harmonics `−n0..=n0`.
    source: Vec<SVector<Complex64, D>>,
    /// Row of `ρ_ab` in the restricted basis.
    a_row: usize,
}

impl ProbeKernel {
    /// Kernel for `fields` with the probe removed and the two-photon detuning
    /// set to zero. `n0` is the Floquet truncation of `ρ₀`.
    pub fn new(
        sys: &AtomSystem,
        fields: &FieldSet,
        n0: usize,
        opts: &SolverOptions,
    ) -> Result<Self> {
        sys.validate()?;
        let mut f = fields.with_two_photon_detuning(0.0);
        f.alpha_probe = 0.0;
        let l = liouvillian_for(sys, &f)?;
        let n0 = if l.has_drive() { n0.max(1) } else { 0 };
        let rho0 = probe_free_state(sys, &f, n0)?;
        Self::from_parts(sys.scheme, &l, &rho0, f.nu_rf, opts.response_margin)
    }

    /// Kernel built from a caller-supplied probe-free state.
    pub fn with_state(
        sys: &AtomSystem,
        fields: &FieldSet,
        rho0: &HarmonicState,
        opts: &SolverOptions,
    ) -> Result<Self> {
        let mut f = fields.with_two_photon_detuning(0.0);
        f.alpha_probe = 0.0;
        let l = liouvillian_for(sys, &f)?;
        if rho0.dim() != sys.dim() {
            return Err(Error::DimensionMismatch {
                expected: sys.dim(),
                found: rho0.dim(),
            });
        }
        Self::from_parts(sys.scheme, &l, rho0, f.nu_rf, opts.response_margin)
    }

    fn from_parts(
        scheme: LevelScheme,
        l: &LiouvillianHarmonics,
        rho0: &HarmonicState,
        nu: f64,
        margin: usize,
    ) -> Result<Self> {
        let inner = match scheme {
            LevelScheme::Periodic => KernelBlocks::Three(Blocks::<3>::extract(scheme, l, rho0)),
            LevelScheme::Static => KernelBlocks::Four(Blocks::<4>::extract(scheme, l, rho0)),
        };
        Ok(Self {
            inner,
            nu,
            n0: rho0.truncation,
            margin: if l.has_drive() { margin } else { 0 },
        })
    }

    pub fn source_truncation(&self) -> usize {
        self.n0
    }

    /// `ρ_ab` harmonics `−k..=k` per unit probe Rabi frequency at two-photon
    /// detuning `delta`.
    pub fn coherence(&self, delta: f64, k: usize) -> Result<Vec<Complex64>> {
        let truncation = if self.n0 == 0 {
            0
        } else {
            k.max(self.n0) + self.margin
        };
        let mut out = match &self.inner {
            KernelBlocks::Three(b) => b.solve(delta, self.nu, truncation)?,
            KernelBlocks::Four(b) => b.solve(delta, self.nu, truncation)?,
        };
        // report exactly 2k + 1 harmonics
        let mut result = vec![ZERO; 2 * k + 1];
        let t = truncation as i64;
        for n in -(k as i64)..=(k as i64) {
            if n.abs() <= t {
                result[(n + k as i64) as usize] = std::mem::take(&mut out[(n + t) as usize]);
            }
        }
        Ok(result)
    }
}

impl<const D: usize> Blocks<D> {
    fn extract(scheme: LevelScheme, l: &LiouvillianHarmonics, rho0: &HarmonicState) -> Self {
        let n = scheme.dim();
        let b = scheme.idx(Level::B);
        let a = scheme.idx(Level::A);
        let rows: Vec<usize> = (0..n).filter(|&x| x != b).collect();
        debug_assert_eq!(rows.len(), D);
        let pick = |m: &DMatrix<Complex64>| -> SMatrix<Complex64, D, D> {
            SMatrix::from_fn(|i, j| m[(rows[i] * n + b, rows[j] * n + b)])
        };
        let mut v = OperatorMatrix::zeros(n, n);
        v[(a, b)] = Complex64::new(1.0, 0.0);
        v[(b, a)] = Complex64::new(1.0, 0.0);
        let source = rho0
            .components()
            .iter()
            .map(|r| {
                let comm = &v * r - r * &v;
                SVector::from_fn(|i, _| I * comm[(rows[i], b)])
            })
            .collect();
        Self {
            r0: pick(&l.zero),
            lower: pick(&l.plus1),
            upper: pick(&l.minus1),
            source,
            a_row: rows.iter().position(|&x| x == a).expect("a is not b"),
        }
    }

    /// Block Thomas elimination over harmonics `−t..=t`; returns the `ρ_ab`
    /// entry of each harmonic.
    fn solve(&self, delta: f64, nu: f64, t: usize) -> Result<Vec<Complex64>> {
        let size = 2 * t + 1;
        let n0 = (self.source.len() / 2) as i64;
        let rhs = |n: i64| -> SVector<Complex64, D> {
            if n.abs() <= n0 {
                self.source[(n + n0) as usize]
            } else {
                SVector::zeros()
            }
        };
        let diag = |n: i64| -> SMatrix<Complex64, D, D> {
            let mut m = self.r0;
            let shift = I * (delta + n as f64 * nu);
            for i in 0..D {
                m[(i, i)] += shift;
            }
            m
        };
        let singular = || Error::SingularSystem {
            context: "probe response",
        };
        let mut c_prime: Vec<SMatrix<Complex64, D, D>> = Vec::with_capacity(size);
        let mut d_prime: Vec<SVector<Complex64, D>> = Vec::with_capacity(size);
        for k in 0..size {
            let n = k as i64 - t as i64;
            let mut m = diag(n);
            let mut r = rhs(n);
            if k > 0 {
                m -= self.lower * c_prime[k - 1];
                r -= self.lower * d_prime[k - 1];
            }
            let inv = m.try_inverse().ok_or_else(singular)?;
            c_prime.push(inv * self.upper);
            d_prime.push(inv * r);
        }
        let mut x = vec![SVector::<Complex64, D>::zeros(); size];
        x[size - 1] = d_prime[size - 1];
        for k in (0..size - 1).rev() {
            x[k] = d_prime[k] - c_prime[k] * x[k + 1];
        }
        if x.iter().any(|v| v.iter().any(|z| !z.is_finite())) {
            return Err(singular());
        }
        Ok(x.iter().map(|v| v[self.a_row]).collect())
    }
}

/// `i / ρ_ab` for the bare two-level probe transition: no drive, no RF,
/// everything resonant. Multiplying a response by it gives `χ` with
/// `Im χ₀₀ = 1` on bare resonance.
pub fn normalization(sys: &AtomSystem) -> Result<Complex64> {
    let bare = FieldSet::default();
    let kernel = ProbeKernel::new(sys, &bare, 0, &SolverOptions::default())?;
    let x = kernel.coherence(0.0, 0)?[0];
    if x.norm() == 0.0 || !x.is_finite() {
        return Err(Error::SingularSystem {
            context: "bare probe response",
        });
    }
    Ok(I / x)
}

/// Harmonic transfer matrix `χ_nm`, `|n|, |m| ≤ M`: output sideband `n`
/// driven by input sideband `m`.
#[derive(Debug, Clone, PartialEq)]
pub struct SusceptibilityResponse {
    pub truncation: usize,
    pub detuning: f64,
    pub chi: DMatrix<Complex64>,
}

impl SusceptibilityResponse {
    /// Builds `χ_nm = c_{n−m}(δ + mν)` from `column(m)`, which returns the
    /// first-column coefficients `c_k`, `|k| ≤ 2M`, at the shifted detuning.
    pub fn from_columns<F>(truncation: usize, detuning: f64, mut column: F) -> Result<Self>
    where
        F: FnMut(i64) -> Result<Vec<Complex64>>,
    {
        let m_max = truncation as i64;
        let size = 2 * truncation + 1;
        let mut chi = DMatrix::zeros(size, size);
        for m in -m_max..=m_max {
            let col = column(m)?;
            for n in -m_max..=m_max {
                chi[((n + m_max) as usize, (m + m_max) as usize)] =
                    col[(n - m + 2 * m_max) as usize];
            }
        }
        Ok(Self {
            truncation,
            detuning,
            chi,
        })
    }

    pub fn get(&self, n: i64, m: i64) -> Complex64 {
        let t = self.truncation as i64;
        if n.abs() > t || m.abs() > t {
            return ZERO;
        }
        self.chi[((n + t) as usize, (m + t) as usize)]
    }

    pub fn fundamental(&self) -> Complex64 {
        self.get(0, 0)
    }
}

/// Options for [`probe_susceptibility`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SusceptibilityOptions {
    pub solver: SolverOptions,
    /// Largest |n|, |m| of the transfer matrix.
    pub sidebands: usize,
    /// Allowed relative change of χ when the probe is halved.
    pub linearity_tol: f64,
}

impl Default for SusceptibilityOptions {
    fn default() -> Self {
        Self {
            solver: SolverOptions::default(),
            sidebands: 2,
            linearity_tol: 0.01,
        }
    }
}

/// Transfer matrix from the full master equation with the probe included.
///
/// Each input column is a separate solve at the shifted carrier; the run is
/// repeated at half the probe amplitude and rejected if χ moves by more
/// than `linearity_tol`.
pub fn probe_susceptibility(
    sys: &AtomSystem,
    fields: &FieldSet,
    delta: f64,
    opts: &SusceptibilityOptions,
) -> Result<SusceptibilityResponse> {
    if !(fields.alpha_probe > 0.0) {
        return Err(Error::invalid(
            "alpha_probe",
            "must be > 0 for a probe-included solve",
        ));
    }
    let scale = normalization(sys)?;
    let full = full_response(sys, fields, delta, opts, scale)?;
    let mut half_fields = *fields;
    half_fields.alpha_probe *= 0.5;
    let half = full_response(sys, &half_fields, delta, opts, scale)?;
    let size = full.chi.iter().map(|z| z.norm()).fold(0.0, f64::max);
    let deviation = (&full.chi - &half.chi)
        .iter()
        .map(|z| z.norm())
        .fold(0.0, f64::max)
        / size.max(1e-300);
    if deviation > opts.linearity_tol {
        return Err(Error::LinearityViolation { deviation });
    }
    Ok(full)
}

fn full_response(
    sys: &AtomSystem,
    fields: &FieldSet,
    delta: f64,
    opts: &SusceptibilityOptions,
    scale: Complex64,
) -> Result<SusceptibilityResponse> {
    let m = opts.sidebands;
    let a = sys.scheme.idx(Level::A);
    let b = sys.scheme.idx(Level::B);
    let alpha = fields.alpha_probe;
    SusceptibilityResponse::from_columns(m, delta, |shift| {
        let f = fields.with_two_photon_detuning(delta + shift as f64 * fields.nu_rf);
        let l = liouvillian_for(sys, &f)?;
        let state = if l.has_drive() {
            let auto = floquet_steady_state_capped(
                &l,
                f.nu_rf,
                opts.solver.floquet_tol,
                opts.solver.max_truncation,
            )?;
            let t = auto.truncation.max(2 * m);
            if t == auto.truncation {
                auto
            } else {
                floquet_steady_state(&l, f.nu_rf, t)?
            }
        } else {
            floquet_steady_state(&l, f.nu_rf, 0)?
        };
        let k = 2 * m as i64;
        Ok((-k..=k)
            .map(|n| state.get(n).map_or(ZERO, |r| r[(a, b)]) / alpha * scale)
            .collect())
    })
}

/// Transfer matrix from the first-order kernel.
pub fn linear_susceptibility(
    sys: &AtomSystem,
    fields: &FieldSet,
    delta: f64,
    sidebands: usize,
    opts: &SolverOptions,
) -> Result<SusceptibilityResponse> {
    let scale = normalization(sys)?;
    let n0 = probe_free_truncation(sys, fields, opts)?;
    let kernel = ProbeKernel::new(sys, fields, n0, opts)?;
    SusceptibilityResponse::from_columns(sidebands, delta, |m| {
        let col = kernel.coherence(delta + m as f64 * fields.nu_rf, 2 * sidebands)?;
        Ok(col.into_iter().map(|x| x * scale).collect())
    })
}
