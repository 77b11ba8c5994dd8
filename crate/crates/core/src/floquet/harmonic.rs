// Copyright 2026 The darkcomb Authors
// SPDX-License-Identifier: Apache-2.0

//! Periodic steady states by harmonic balance.
//!
//! With `ρ(t) = Σₙ ρ⁽ⁿ⁾ e^{−inνt}` the master equation becomes, for every
//! harmonic `|n| ≤ N`,
//!
//! ```text
//! (L₀ + inν) ρ⁽ⁿ⁾ + L₊₁ ρ⁽ⁿ⁻¹⁾ + L₋₁ ρ⁽ⁿ⁺¹⁾ = 0,     ρ⁽|n|>N⁾ = 0,
//! ```
//!
//! closed by `Tr ρ⁽⁰⁾ = 1`, which replaces the first row of the `n = 0` block.

use nalgebra::DVector;
use num_complex::Complex64;

use super::blocktri::BlockTridiagonal;
use crate::error::{Error, Result};
use crate::model::hamiltonian::OperatorMatrix;
use crate::model::liouvillian::{
    trace_functional, unvectorize, LiouvillianHarmonics, Superoperator,
};

/// Default cap on the truncation for [`floquet_steady_state_auto`].
pub const DEFAULT_MAX_TRUNCATION: usize = 32;

/// Fourier components `ρ⁽ⁿ⁾`, `n = −N..=N`, of a periodic density operator.
#[derive(Debug, Clone, PartialEq)]
pub struct HarmonicState {
    pub truncation: usize,
    pub nu_rf: f64,
    components: Vec<OperatorMatrix>,
}

impl HarmonicState {
    pub fn new(nu_rf: f64, components: Vec<OperatorMatrix>) -> Self {
        assert!(components.len() % 2 == 1, "need 2N + 1 components");
        Self {
            truncation: components.len() / 2,
            nu_rf,
            components,
        }
    }

    pub fn dim(&self) -> usize {
        self.components[0].nrows()
    }

    /// `ρ⁽ⁿ⁾`, or `None` outside the truncation.
    pub fn get(&self, n: i64) -> Option<&OperatorMatrix> {
        let idx = n + self.truncation as i64;
        if idx < 0 {
            return None;
        }
        self.components.get(idx as usize)
    }

    pub fn component(&self, n: i64) -> &OperatorMatrix {
        self.get(n)
            .unwrap_or_else(|| panic!("harmonic {n} outside truncation {}", self.truncation))
    }

    pub fn components(&self) -> &[OperatorMatrix] {
        &self.components
    }

    /// Entry `(i, j)` of every harmonic, ordered from `−N` to `N`.
    pub fn element(&self, i: usize, j: usize) -> Vec<Complex64> {
        self.components.iter().map(|m| m[(i, j)]).collect()
    }

    pub fn max_abs(&self, n: i64) -> f64 {
        self.get(n)
            .map(|m| m.iter().map(|z| z.norm()).fold(0.0, f64::max))
            .unwrap_or(0.0)
    }

    /// Largest deviation from `ρ⁽⁻ⁿ⁾ = ρ⁽ⁿ⁾†`.
    pub fn conjugation_defect(&self) -> f64 {
        let n = self.truncation as i64;
        (-n..=n)
            .map(|k| (self.component(-k) - self.component(k).adjoint()).norm())
            .fold(0.0, f64::max)
    }

    /// Norm of every harmonic, ordered from `−N` to `N`.
    pub fn harmonic_norms(&self) -> Vec<f64> {
        self.components.iter().map(|m| m.norm()).collect()
    }

    /// `ρ(t)` reassembled from the harmonics.
    pub fn at_time(&self, t: f64) -> OperatorMatrix {
        let n = self.truncation as i64;
        let mut out = OperatorMatrix::zeros(self.dim(), self.dim());
        for k in -n..=n {
            let phase = Complex64::from_polar(1.0, -(k as f64) * self.nu_rf * t);
            out += self.component(k) * phase;
        }
        out
    }
}

/// Harmonic-balance steady state at fixed truncation `N`.
pub fn floquet_steady_state(
    l: &LiouvillianHarmonics,
    nu_rf: f64,
    truncation: usize,
) -> Result<HarmonicState> {
    if l.has_drive() {
        if !(nu_rf > 0.0) {
            return Err(Error::invalid("nu_rf", "must be > 0 for a periodic drive"));
        }
        if truncation == 0 {
            return Err(Error::invalid("truncation", "N >= 1 required with RF on"));
        }
    }
    let n = l.dim;
    let d2 = n * n;
    let k_total = 2 * truncation + 1;
    let centre = truncation;
    let trace = trace_functional(n);

    let mut diag = Vec::with_capacity(k_total);
    let mut lower = Vec::with_capacity(k_total);
    let mut upper = Vec::with_capacity(k_total);
    let mut rhs = vec![DVector::<Complex64>::zeros(d2); k_total];
    for k in 0..k_total {
        let harmonic = k as f64 - truncation as f64;
        let mut d: Superoperator = l.zero.clone();
        for i in 0..d2 {
            d[(i, i)] += Complex64::new(0.0, harmonic * nu_rf);
        }
        let mut lo = l.plus1.clone();
        let mut up = l.minus1.clone();
        if k == centre {
            for c in 0..d2 {
                d[(0, c)] = trace[c];
            }
            lo.row_mut(0).fill(Complex64::default());
            up.row_mut(0).fill(Complex64::default());
            rhs[k][0] = Complex64::new(1.0, 0.0);
        }
        diag.push(d);
        lower.push(lo);
        upper.push(up);
    }
    let system = BlockTridiagonal { lower, diag, upper };
    let sol = system.solve(&rhs, true)?;
    let components = sol.iter().map(|v| unvectorize(v, n)).collect();
    Ok(HarmonicState::new(nu_rf, components))
}

/// Raises the truncation until the outermost harmonics fall below `tol` and
/// `ρ⁽⁰⁾` stops changing by more than `tol`.
pub fn floquet_steady_state_auto(
    l: &LiouvillianHarmonics,
    nu_rf: f64,
    tol: f64,
) -> Result<HarmonicState> {
    floquet_steady_state_capped(l, nu_rf, tol, DEFAULT_MAX_TRUNCATION)
}

pub fn floquet_steady_state_capped(
    l: &LiouvillianHarmonics,
    nu_rf: f64,
    tol: f64,
    max_truncation: usize,
) -> Result<HarmonicState> {
    if !(tol > 0.0) {
        return Err(Error::invalid("tol", "must be > 0"));
    }
    if !l.has_drive() {
        return floquet_steady_state(l, nu_rf, 1);
    }
    let mut previous: Option<HarmonicState> = None;
    let mut last_change = f64::INFINITY;
    for n in 1..=max_truncation {
        let state = floquet_steady_state(l, nu_rf, n)?;
        let edge = state.max_abs(n as i64).max(state.max_abs(-(n as i64)));
        if let Some(prev) = &previous {
            last_change = (state.component(0) - prev.component(0))
                .iter()
                .map(|z| z.norm())
                .fold(0.0, f64::max);
            if edge < tol && last_change < tol {
                return Ok(state);
            }
        }
        previous = Some(state);
    }
    Err(Error::NonConvergence {
        what: "Floquet truncation",
        iterations: max_truncation,
        last_change,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{build_liouvillian, build_periodic_hamiltonian, AtomSystem, FieldSet};

    fn generator(fields: &FieldSet) -> LiouvillianHarmonics {
        let sys = AtomSystem::periodic();
        let h = build_periodic_hamiltonian(&sys, fields).unwrap();
        build_liouvillian(&h, &sys).unwrap()
    }

    fn resonant() -> FieldSet {
        FieldSet {
            omega_drive: 1.0,
            alpha_probe: 0.01,
            omega_rf: 0.05,
            nu_rf: 0.07,
            ..Default::default()
        }
    }

    #[test]
    fn no_rf_gives_static_steady_state() {
        let fields = FieldSet {
            omega_rf: 0.0,
            ..resonant()
        };
        let l = generator(&fields);
        let s = floquet_steady_state(&l, 0.07, 3).unwrap();
        for n in [-3i64, -2, -1, 1, 2, 3] {
            assert_eq!(s.max_abs(n), 0.0);
        }
        // oracle: dense solve of L₀ with the trace row
        let mut m = l.zero.clone();
        let t = trace_functional(4);
        for c in 0..16 {
            m[(0, c)] = t[c];
        }
        let mut rhs = DVector::zeros(16);
        rhs[0] = Complex64::new(1.0, 0.0);
        let x = unvectorize(&m.lu().solve(&rhs).unwrap(), 4);
        assert!((s.component(0) - x).norm() < 1e-13);
    }

    #[test]
    fn trace_and_conjugation() {
        let l = generator(&resonant());
        let s = floquet_steady_state(&l, 0.07, 6).unwrap();
        assert!((s.component(0).trace() - Complex64::new(1.0, 0.0)).norm() < 1e-12);
        for n in 1..=6i64 {
            assert!(s.component(n).trace().norm() < 1e-12);
        }
        assert!(s.conjugation_defect() < 1e-12);
    }

    #[test]
    fn odd_probe_harmonics_vanish() {
        let l = generator(&resonant());
        let s = floquet_steady_state(&l, 0.07, 8).unwrap();
        let ab = s.element(0, 1);
        let even = ab.iter().step_by(2).map(|z| z.norm()).fold(0.0, f64::max);
        let odd = ab
            .iter()
            .skip(1)
            .step_by(2)
            .map(|z| z.norm())
            .fold(0.0, f64::max);
        assert!(even > 0.0);
        assert!(odd < 1e-10 * even, "odd {odd:e} even {even:e}");
    }

    #[test]
    fn leak_coupling_breaks_parity() {
        let fields = FieldSet {
            omega_leak: 0.05,
            ..resonant()
        };
        let s = floquet_steady_state(&generator(&fields), 0.07, 6).unwrap();
        let ab = s.element(0, 1);
        let odd = ab
            .iter()
            .skip(1)
            .step_by(2)
            .map(|z| z.norm())
            .fold(0.0, f64::max);
        assert!(odd > 1e-8);
    }

    #[test]
    fn auto_without_rf_equals_first_order_solve() {
        let fields = FieldSet {
            omega_rf: 0.0,
            ..resonant()
        };
        let l = generator(&fields);
        let auto = floquet_steady_state_auto(&l, 0.07, 1e-10).unwrap();
        let one = floquet_steady_state(&l, 0.07, 1).unwrap();
        assert_eq!(auto, one);
    }

    #[test]
    fn zero_decoherence_is_singular() {
        let mut sys = AtomSystem::periodic();
        sys.gamma_transit = 0.0;
        sys.gamma_deph = 0.0;
        let fields = FieldSet {
            omega_rf: 0.0,
            ..resonant()
        };
        let h = build_periodic_hamiltonian(&sys, &fields).unwrap();
        let l = build_liouvillian(&h, &sys).unwrap();
        assert!(matches!(
            floquet_steady_state(&l, 0.07, 1),
            Err(Error::SingularSystem { .. })
        ));
    }

    #[test]
    fn auto_reports_cap() {
        let fields = FieldSet {
            omega_rf: 0.5,
            ..resonant()
        };
        let l = generator(&fields);
        let err = floquet_steady_state_capped(&l, 0.07, 1e-14, 2).unwrap_err();
        assert!(matches!(err, Error::NonConvergence { iterations: 2, .. }));
    }
}
