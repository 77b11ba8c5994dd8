// Copyright 2026 The darkcomb Authors
// SPDX-License-Identifier: Apache-2.0

//! Lindblad generators as matrices acting on row-major vectorised density
//! operators: `vec(ρ)[i·n + j] = ρ[(i, j)]`.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use super::atom::{AtomSystem, Level, LevelScheme};
use super::hamiltonian::{OperatorMatrix, PeriodicHamiltonian};
use crate::error::{Error, Result};

pub type Superoperator = DMatrix<Complex64>;

/// Harmonics of a time-periodic generator
/// `L(t) = L₀ + L₊₁ e^{−iνt} + L₋₁ e^{iνt}`.
#[derive(Debug, Clone, PartialEq)]
pub struct LiouvillianHarmonics {
    pub dim: usize,
    pub minus1: Superoperator,
    pub zero: Superoperator,
    pub plus1: Superoperator,
}

impl LiouvillianHarmonics {
    pub fn has_drive(&self) -> bool {
        self.plus1.iter().any(|z| *z != Complex64::default())
    }

    /// Time-independent generator (no periodic part).
    pub fn from_static(dim: usize, zero: Superoperator) -> Self {
        let z = Superoperator::zeros(dim * dim, dim * dim);
        Self {
            dim,
            minus1: z.clone(),
            zero,
            plus1: z,
        }
    }
}

/// A jump operator `L` with its rate folded in: the channel contributes
/// `L ρ L† − ½{L†L, ρ}`.
#[derive(Debug, Clone)]
pub struct Jump {
    pub op: OperatorMatrix,
}

impl Jump {
    fn single(n: usize, to: usize, from: usize, rate: f64) -> Self {
        let mut op = OperatorMatrix::zeros(n, n);
        op[(to, from)] = Complex64::new(rate.sqrt(), 0.0);
        Self { op }
    }
}

pub fn vectorize(rho: &OperatorMatrix) -> DVector<Complex64> {
    let n = rho.nrows();
    DVector::from_fn(n * n, |k, _| rho[(k / n, k % n)])
}

pub fn unvectorize(v: &DVector<Complex64>, n: usize) -> OperatorMatrix {
    OperatorMatrix::from_fn(n, n, |i, j| v[i * n + j])
}

/// `−i[H, ·]`.
pub fn commutator_superop(h: &OperatorMatrix) -> Superoperator {
    let n = h.nrows();
    let mut s = Superoperator::zeros(n * n, n * n);
    let mi = Complex64::new(0.0, -1.0);
    for i in 0..n {
        for j in 0..n {
            let row = i * n + j;
            for k in 0..n {
                // (Hρ)_ij = H_ik ρ_kj
                s[(row, k * n + j)] += mi * h[(i, k)];
                // (ρH)_ij = ρ_ik H_kj
                s[(row, i * n + k)] -= mi * h[(k, j)];
            }
        }
    }
    s
}

pub fn dissipator_superop(jump: &Jump) -> Superoperator {
    let l = &jump.op;
    let n = l.nrows();
    let ldl = l.adjoint() * l;
    let mut s = Superoperator::zeros(n * n, n * n);
    for i in 0..n {
        for j in 0..n {
            let row = i * n + j;
            for k in 0..n {
                for m in 0..n {
                    // (LρL†)_ij = L_ik ρ_km conj(L_jm)
                    let v = l[(i, k)] * l[(j, m)].conj();
                    if v != Complex64::default() {
                        s[(row, k * n + m)] += v;
                    }
                }
                s[(row, k * n + j)] -= 0.5 * ldl[(i, k)];
                s[(row, i * n + k)] -= 0.5 * ldl[(k, j)];
            }
        }
    }
    s
}

/// Jump operators for radiative decay, transit replacement and ground-state
/// dephasing.
pub fn jump_operators(sys: &AtomSystem) -> Vec<Jump> {
    let scheme = sys.scheme;
    let n = scheme.dim();
    let a = scheme.idx(Level::A);
    let mut jumps = Vec::new();

    // a → b, c, d (split evenly over d1/d2 in the static scheme)
    let br = sys.branching;
    let d_targets: Vec<(usize, f64)> = match scheme {
        LevelScheme::Periodic => vec![(scheme.idx(Level::D), br.to_d)],
        LevelScheme::Static => vec![
            (scheme.idx(Level::D1), 0.5 * br.to_d),
            (scheme.idx(Level::D2), 0.5 * br.to_d),
        ],
    };
    let targets = [
        (scheme.idx(Level::B), br.to_b),
        (scheme.idx(Level::C), br.to_c),
    ]
    .into_iter()
    .chain(d_targets);
    for (g, frac) in targets {
        if frac > 0.0 && sys.gamma_rad > 0.0 {
            jumps.push(Jump::single(n, g, a, sys.gamma_rad * frac));
        }
    }

    // transit: every level is replaced by the ground mixture at gamma_transit
    let ground = scheme.ground_weights();
    if sys.gamma_transit > 0.0 {
        for &(g, w) in &ground {
            for j in 0..n {
                jumps.push(Jump::single(n, scheme.idx(g), j, sys.gamma_transit * w));
            }
        }
    }

    // pure dephasing; d1/d2 are one physical level and dephase together
    if sys.gamma_deph > 0.0 {
        let amp = Complex64::new(sys.gamma_deph.sqrt(), 0.0);
        let mut projectors: Vec<Vec<usize>> = Vec::new();
        match scheme {
            LevelScheme::Periodic => {
                for l in [Level::B, Level::C, Level::D] {
                    projectors.push(vec![scheme.idx(l)]);
                }
            }
            LevelScheme::Static => {
                projectors.push(vec![scheme.idx(Level::B)]);
                projectors.push(vec![scheme.idx(Level::C)]);
                projectors.push(vec![scheme.idx(Level::D1), scheme.idx(Level::D2)]);
            }
        }
        for p in projectors {
            let mut op = OperatorMatrix::zeros(n, n);
            for i in p {
                op[(i, i)] = amp;
            }
            jumps.push(Jump { op });
        }
    }
    jumps
}

pub fn dissipator(sys: &AtomSystem) -> Superoperator {
    let n = sys.dim();
    jump_operators(sys)
        .iter()
        .fold(Superoperator::zeros(n * n, n * n), |acc, j| {
            acc + dissipator_superop(j)
        })
}

/// Full generator for a static Hamiltonian.
pub fn build_static_liouvillian(h: &OperatorMatrix, sys: &AtomSystem) -> Result<Superoperator> {
    check_dim(h, sys)?;
    sys.validate()?;
    Ok(commutator_superop(h) + dissipator(sys))
}

/// Harmonics of the generator: the dissipator lives in `L₀` only.
pub fn build_liouvillian(
    h: &PeriodicHamiltonian,
    sys: &AtomSystem,
) -> Result<LiouvillianHarmonics> {
    for m in [&h.minus1, &h.zero, &h.plus1] {
        check_dim(m, sys)?;
    }
    sys.validate()?;
    Ok(LiouvillianHarmonics {
        dim: sys.dim(),
        minus1: commutator_superop(&h.minus1),
        zero: commutator_superop(&h.zero) + dissipator(sys),
        plus1: commutator_superop(&h.plus1),
    })
}

fn check_dim(h: &OperatorMatrix, sys: &AtomSystem) -> Result<()> {
    if h.nrows() != sys.dim() || h.ncols() != sys.dim() {
        return Err(Error::DimensionMismatch {
            expected: sys.dim(),
            found: h.nrows(),
        });
    }
    Ok(())
}

/// Row vector `t` with `t · vec(ρ) = Tr ρ`.
pub fn trace_functional(n: usize) -> DVector<Complex64> {
    let mut t = DVector::zeros(n * n);
    for i in 0..n {
        t[i * n + i] = Complex64::new(1.0, 0.0);
    }
    t
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::fields::FieldSet;
    use crate::model::hamiltonian::build_periodic_hamiltonian;
    use rand::{Rng, SeedableRng};

    fn random_density(n: usize, rng: &mut impl Rng) -> OperatorMatrix {
        let g = OperatorMatrix::from_fn(n, n, |_, _| {
            Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
        });
        let rho = &g * g.adjoint();
        let tr = rho.trace();
        rho / tr
    }

    fn generator(fields: FieldSet) -> LiouvillianHarmonics {
        let sys = AtomSystem::periodic();
        let h = build_periodic_hamiltonian(&sys, &fields).unwrap();
        build_liouvillian(&h, &sys).unwrap()
    }

    #[test]
    fn trace_preserved_for_random_states() {
        let l = generator(FieldSet {
            omega_drive: 1.3,
            alpha_probe: 0.05,
            omega_rf: 0.2,
            nu_rf: 0.07,
            delta_probe: 0.4,
            doppler_shift: -2.0,
            ..Default::default()
        });
        let t = trace_functional(4);
        let mut rng = rand::rngs::StdRng::seed_from_u64(7);
        for _ in 0..1000 {
            let rho = vectorize(&random_density(4, &mut rng));
            for m in [&l.zero, &l.plus1, &l.minus1] {
                let d = t.dot(&(m * &rho));
                assert!(d.norm() < 1e-12, "trace drift {d}");
            }
        }
    }

    #[test]
    fn minus_harmonic_is_conjugate_partner() {
        let l = generator(FieldSet {
            omega_drive: 1.0,
            omega_rf: 0.3,
            nu_rf: 0.1,
            ..Default::default()
        });
        let mut rng = rand::rngs::StdRng::seed_from_u64(3);
        let x = OperatorMatrix::from_fn(4, 4, |_, _| Complex64::new(rng.gen(), rng.gen()));
        // (L₊₁ X)† = L₋₁ X†
        let lhs = unvectorize(&(&l.plus1 * vectorize(&x)), 4).adjoint();
        let rhs = unvectorize(&(&l.minus1 * vectorize(&x.adjoint())), 4);
        assert!((lhs - rhs).norm() < 1e-14);
    }

    #[test]
    fn excited_population_decays_exponentially() {
        let mut sys = AtomSystem::periodic();
        sys.gamma_transit = 0.0;
        let h = build_periodic_hamiltonian(&sys, &FieldSet::default()).unwrap();
        let l = build_liouvillian(&h, &sys).unwrap();
        let mut rho = OperatorMatrix::zeros(4, 4);
        rho[(0, 0)] = Complex64::new(1.0, 0.0);
        let v = vectorize(&rho);
        for t in [0.5, 1.0, 3.0] {
            let prop = (&l.zero * Complex64::new(t, 0.0)).exp();
            let aa = (&prop * &v)[0].re;
            assert!((aa - (-t).exp()).abs() < 1e-10, "t={t} ρ_aa={aa}");
        }
    }

    #[test]
    fn populations_stay_physical_during_decay() {
        let l = generator(FieldSet::default());
        let mut rng = rand::rngs::StdRng::seed_from_u64(11);
        let step = (&l.zero * Complex64::new(0.25, 0.0)).exp();
        for _ in 0..20 {
            let mut v = vectorize(&random_density(4, &mut rng));
            for _ in 0..40 {
                v = &step * v;
                let rho = unvectorize(&v, 4);
                for i in 0..4 {
                    let p = rho[(i, i)].re;
                    assert!((-1e-9..=1.0 + 1e-9).contains(&p));
                }
            }
        }
    }

    #[test]
    fn free_steady_state_is_equal_ground_mixture() {
        let l = generator(FieldSet::default());
        // oracle: direct dense solve with the trace row appended
        let n = 4;
        let mut m = l.zero.clone();
        let t = trace_functional(n);
        for k in 0..n * n {
            m[(0, k)] = t[k];
        }
        let mut rhs = DVector::zeros(n * n);
        rhs[0] = Complex64::new(1.0, 0.0);
        let x = m.lu().solve(&rhs).unwrap();
        let rho = unvectorize(&x, n);
        assert!(rho[(0, 0)].norm() < 1e-14);
        for i in 1..4 {
            assert!((rho[(i, i)].re - 1.0 / 3.0).abs() < 1e-12);
        }
        for i in 0..4 {
            for j in 0..4 {
                if i != j {
                    assert!(rho[(i, j)].norm() < 1e-14);
                }
            }
        }
    }

    #[test]
    fn ground_coherence_decay_rate() {
        let sys = AtomSystem::periodic();
        let l = dissipator(&sys);
        let mut rho = OperatorMatrix::zeros(4, 4);
        rho[(1, 2)] = Complex64::new(1.0, 0.0);
        let out = l * vectorize(&rho);
        assert!((out[6].re + sys.ground_decoherence()).abs() < 1e-15);
    }
}
