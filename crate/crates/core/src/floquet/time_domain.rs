// Copyright 2026 The darkcomb Authors
// SPDX-License-Identifier: Apache-2.0

//! Direct time integration of the periodic master equation. Serves as an
//! independent check of the harmonic-balance solver: it never forms the
//! harmonic system and reaches the periodic attractor by brute force.

use nalgebra::DVector;
use num_complex::Complex64;

use super::harmonic::HarmonicState;
use crate::error::{Error, Result};
use crate::model::hamiltonian::OperatorMatrix;
use crate::model::liouvillian::{trace_functional, unvectorize, vectorize, LiouvillianHarmonics};

type CVec = DVector<Complex64>;

#[derive(Debug, Clone, Copy)]
pub struct TimeDomainOptions {
    /// Integration time before sampling starts; rounded up to whole periods.
    pub horizon: f64,
    /// Largest step the controller may take.
    pub max_step: f64,
    pub rtol: f64,
    pub atol: f64,
    pub samples_per_period: usize,
    /// Allowed change of any harmonic between the last two periods.
    pub settle_tol: f64,
}

impl TimeDomainOptions {
    pub fn new(horizon: f64, max_step: f64) -> Self {
        Self {
            horizon,
            max_step,
            rtol: 1e-11,
            atol: 1e-13,
            samples_per_period: 64,
            settle_tol: 1e-9,
        }
    }
}

/// Integrates `dρ/dt = (L₀ + L₊₁e^{−iνt} + L₋₁e^{iνt})ρ` from the equal
/// ground-state mixture until `horizon`, then Fourier-analyses the final
/// period into harmonics `|n| ≤ truncation`.
pub fn time_domain_steady_state(
    l: &LiouvillianHarmonics,
    nu_rf: f64,
    horizon: f64,
    dt: f64,
    truncation: usize,
) -> Result<HarmonicState> {
    time_domain_steady_state_with(
        l,
        nu_rf,
        truncation,
        &TimeDomainOptions::new(horizon, dt),
        None,
    )
}

pub fn time_domain_steady_state_with(
    l: &LiouvillianHarmonics,
    nu_rf: f64,
    truncation: usize,
    opts: &TimeDomainOptions,
    initial: Option<&OperatorMatrix>,
) -> Result<HarmonicState> {
    if !(nu_rf > 0.0) {
        return Err(Error::invalid("nu_rf", "must be > 0"));
    }
    if !(opts.max_step > 0.0) || !(opts.horizon > 0.0) {
        return Err(Error::invalid("horizon/dt", "must be > 0"));
    }
    let n = l.dim;
    let samples = opts.samples_per_period.max(4 * truncation + 4);
    let period = 2.0 * std::f64::consts::PI / nu_rf;

    let mut y = match initial {
        Some(rho) => vectorize(rho),
        None => vectorize(&ground_mixture(n)),
    };
    let mut stepper = Dopri5::new(l, nu_rf, opts);

    let periods = (opts.horizon / period).ceil().max(1.0);
    let t_settle = periods * period;
    let mut t = 0.0;
    stepper.advance(&mut y, &mut t, t_settle)?;

    // sample two further periods
    let mut traj: Vec<(f64, CVec)> = Vec::with_capacity(2 * samples);
    for k in 0..2 * samples {
        let target = t_settle + period * (k as f64) / samples as f64;
        stepper.advance(&mut y, &mut t, target)?;
        traj.push((t, y.clone()));
    }

    let first = project(&traj[..samples], nu_rf, truncation, n);
    let second = project(&traj[samples..], nu_rf, truncation, n);
    let change = first
        .iter()
        .zip(&second)
        .map(|(a, b)| (a - b).iter().map(|z| z.norm()).fold(0.0, f64::max))
        .fold(0.0, f64::max);
    if change > opts.settle_tol {
        return Err(Error::NotSettled { change });
    }
    Ok(HarmonicState::new(nu_rf, second))
}

fn ground_mixture(n: usize) -> OperatorMatrix {
    // level 0 is the excited state in every scheme
    let mut rho = OperatorMatrix::zeros(n, n);
    for i in 1..n {
        rho[(i, i)] = Complex64::new(1.0 / (n - 1) as f64, 0.0);
    }
    rho
}

/// `ρ⁽ᵏ⁾ = (1/M) Σ_j ρ(t_j) e^{ikνt_j}` over one period of samples.
fn project(samples: &[(f64, CVec)], nu: f64, truncation: usize, n: usize) -> Vec<OperatorMatrix> {
    let m = samples.len() as f64;
    let nt = truncation as i64;
    (-nt..=nt)
        .map(|k| {
            let mut acc = CVec::zeros(n * n);
            for (t, y) in samples {
                acc += y * Complex64::from_polar(1.0, k as f64 * nu * t);
            }
            unvectorize(&(acc / Complex64::new(m, 0.0)), n)
        })
        .collect()
}

/// Dormand–Prince 5(4) with proportional step-size control.
struct Dopri5<'a> {
    l: &'a LiouvillianHarmonics,
    nu: f64,
    opts: TimeDomainOptions,
    h: f64,
    trace: CVec,
}

const C: [f64; 7] = [0.0, 1.0 / 5.0, 3.0 / 10.0, 4.0 / 5.0, 8.0 / 9.0, 1.0, 1.0];
const A: [[f64; 6]; 7] = [
    [0.0; 6],
    [1.0 / 5.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [
        19372.0 / 6561.0,
        -25360.0 / 2187.0,
        64448.0 / 6561.0,
        -212.0 / 729.0,
        0.0,
        0.0,
    ],
    [
        9017.0 / 3168.0,
        -355.0 / 33.0,
        46732.0 / 5247.0,
        49.0 / 176.0,
        -5103.0 / 18656.0,
        0.0,
    ],
    [
        35.0 / 384.0,
        0.0,
        500.0 / 1113.0,
        125.0 / 192.0,
        -2187.0 / 6784.0,
        11.0 / 84.0,
    ],
];
const B5: [f64; 7] = [
    35.0 / 384.0,
    0.0,
    500.0 / 1113.0,
    125.0 / 192.0,
    -2187.0 / 6784.0,
    11.0 / 84.0,
    0.0,
];
const B4: [f64; 7] = [
    5179.0 / 57600.0,
    0.0,
    7571.0 / 16695.0,
    393.0 / 640.0,
    -92097.0 / 339200.0,
    187.0 / 2100.0,
    1.0 / 40.0,
];

impl<'a> Dopri5<'a> {
    fn new(l: &'a LiouvillianHarmonics, nu: f64, opts: &TimeDomainOptions) -> Self {
        Self {
            l,
            nu,
            opts: *opts,
            h: opts.max_step.min(0.1),
            trace: trace_functional(l.dim),
        }
    }

    fn rhs(&self, t: f64, y: &CVec) -> CVec {
        let ep = Complex64::from_polar(1.0, -self.nu * t);
        let mut out = &self.l.zero * y;
        if self.l.has_drive() {
            out += (&self.l.plus1 * y) * ep + (&self.l.minus1 * y) * ep.conj();
        }
        out
    }

    fn advance(&mut self, y: &mut CVec, t: &mut f64, t_end: f64) -> Result<()> {
        let mut guard = 0usize;
        while *t < t_end - 1e-12 * t_end.abs().max(1.0) {
            guard += 1;
            if guard > 50_000_000 {
                return Err(Error::NonConvergence {
                    what: "time integration",
                    iterations: guard,
                    last_change: self.h,
                });
            }
            let h = self.h.min(self.opts.max_step).min(t_end - *t);
            let mut k: Vec<CVec> = Vec::with_capacity(7);
            for s in 0..7 {
                let mut ys = y.clone();
                for (j, kj) in k.iter().enumerate() {
                    if A[s][j] != 0.0 {
                        ys.axpy(
                            Complex64::new(h * A[s][j], 0.0),
                            kj,
                            Complex64::new(1.0, 0.0),
                        );
                    }
                }
                k.push(self.rhs(*t + C[s] * h, &ys));
            }
            let mut y5 = y.clone();
            let mut err = CVec::zeros(y.len());
            for s in 0..7 {
                if B5[s] != 0.0 {
                    y5.axpy(
                        Complex64::new(h * B5[s], 0.0),
                        &k[s],
                        Complex64::new(1.0, 0.0),
                    );
                }
                let e = B5[s] - B4[s];
                if e != 0.0 {
                    err.axpy(Complex64::new(h * e, 0.0), &k[s], Complex64::new(1.0, 0.0));
                }
            }
            let mut norm = 0.0f64;
            for i in 0..y.len() {
                let scale = self.opts.atol + self.opts.rtol * y[i].norm().max(y5[i].norm());
                norm = norm.max(err[i].norm() / scale);
            }
            if norm <= 1.0 {
                *t += h;
                *y = y5;
                // keep the trace pinned against round-off drift
                let tr = self.trace.dot(y);
                if tr.norm() > 0.0 {
                    *y /= tr;
                }
            }
            let factor = if norm == 0.0 {
                5.0
            } else {
                (0.9 * norm.powf(-0.2)).clamp(0.2, 5.0)
            };
            self.h = (h * factor).min(self.opts.max_step);
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::floquet::harmonic::floquet_steady_state;
    use crate::model::{build_liouvillian, build_periodic_hamiltonian, AtomSystem, FieldSet};

    fn generator(sys: &AtomSystem, fields: &FieldSet) -> LiouvillianHarmonics {
        let h = build_periodic_hamiltonian(sys, fields).unwrap();
        build_liouvillian(&h, sys).unwrap()
    }

    fn fast_system() -> AtomSystem {
        let mut sys = AtomSystem::periodic();
        sys.gamma_transit = 0.05;
        sys.gamma_deph = 0.02;
        sys
    }

    #[test]
    fn fields_off_relaxes_to_ground_mixture() {
        let sys = fast_system();
        let l = generator(
            &sys,
            &FieldSet {
                nu_rf: 0.5,
                ..Default::default()
            },
        );
        let mut start = OperatorMatrix::zeros(4, 4);
        start[(0, 0)] = Complex64::new(0.5, 0.0);
        start[(1, 1)] = Complex64::new(0.5, 0.0);
        let opts = TimeDomainOptions::new(600.0, 0.5);
        let s = time_domain_steady_state_with(&l, 0.5, 2, &opts, Some(&start)).unwrap();
        for n in [-2i64, -1, 1, 2] {
            assert!(s.max_abs(n) < 1e-9);
        }
        let rho = s.component(0);
        assert!(rho[(0, 0)].norm() < 1e-9);
        for i in 1..4 {
            assert!((rho[(i, i)].re - 1.0 / 3.0).abs() < 1e-9);
        }
    }

    #[test]
    fn agrees_with_harmonic_balance() {
        let sys = fast_system();
        let fields = FieldSet {
            omega_drive: 0.8,
            alpha_probe: 0.02,
            omega_rf: 0.15,
            nu_rf: 0.3,
            delta_probe: 0.1,
            ..Default::default()
        };
        let l = generator(&sys, &fields);
        let hb = floquet_steady_state(&l, 0.3, 10).unwrap();
        let td = time_domain_steady_state(&l, 0.3, 800.0, 0.2, 10).unwrap();
        let a = hb.element(0, 1);
        let b = td.element(0, 1);
        let scale = a.iter().map(|z| z.norm()).fold(0.0, f64::max);
        let dev = a
            .iter()
            .zip(&b)
            .map(|(x, y)| (x - y).norm())
            .fold(0.0, f64::max);
        assert!(dev < 1e-6 * scale, "deviation {dev:e} scale {scale:e}");
    }

    #[test]
    fn short_horizon_is_reported() {
        let sys = AtomSystem::periodic();
        let fields = FieldSet {
            omega_drive: 0.8,
            omega_rf: 0.1,
            nu_rf: 0.3,
            ..Default::default()
        };
        let l = generator(&sys, &fields);
        let r = time_domain_steady_state(&l, 0.3, 20.0, 0.2, 4);
        assert!(matches!(r, Err(Error::NotSettled { .. })));
    }
}
