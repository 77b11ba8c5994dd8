// Copyright 2026 The darkcomb Authors
// SPDX-License-Identifier: Apache-2.0

//! Gaussian velocity averaging.
//!
//! Two rules are provided. [`gauss_average`] is adaptive Gauss–Hermite,
//! exact for polynomials and fast for smooth samplers. [`GradedRule`] is a
//! trapezoid rule in a sinh-stretched variable whose node spacing grows
//! linearly with |Δ_Dop|; it resolves the narrow light-shifted Raman
//! features that Gauss–Hermite steps over at GHz widths.

use nalgebra::DMatrix;
use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Error, Result};

pub const DEFAULT_ORDER: usize = 16;
pub const DEFAULT_MAX_ORDER: usize = 512;

/// `2·√(2·ln 2)`, the FWHM of a unit-σ Gaussian.
pub const FWHM_PER_SIGMA: f64 = 2.354_820_045_030_949_3;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DopplerDistribution {
    width_fwhm: f64,
    sigma: f64,
    order: usize,
}

impl DopplerDistribution {
    pub fn new(width_fwhm: f64) -> Result<Self> {
        if !(width_fwhm > 0.0) || !width_fwhm.is_finite() {
            return Err(Error::invalid("doppler_fwhm", "must be finite and > 0"));
        }
        Ok(Self {
            width_fwhm,
            sigma: width_fwhm / FWHM_PER_SIGMA,
            order: DEFAULT_ORDER,
        })
    }

    pub fn with_order(mut self, order: usize) -> Result<Self> {
        if order < 2 {
            return Err(Error::invalid("order", "must be >= 2"));
        }
        self.order = order;
        Ok(self)
    }

    pub fn width_fwhm(&self) -> f64 {
        self.width_fwhm
    }

    pub fn sigma(&self) -> f64 {
        self.sigma
    }

    pub fn order(&self) -> usize {
        self.order
    }

    /// Unit-mass Gaussian density.
    pub fn density(&self, doppler_shift: f64) -> f64 {
        let x = doppler_shift / self.sigma;
        (-0.5 * x * x).exp() / (self.sigma * (2.0 * std::f64::consts::PI).sqrt())
    }
}

/// Nodes and weights of the physicists' Gauss–Hermite rule
/// (`∫ f(x) e^{−x²} dx`), ascending. Weights sum to `√π`.
///
/// Nodes start from the eigenvalues of the Jacobi matrix and are polished
/// by Newton steps on the normalised Hermite recurrence, which also yields
/// the weights.
pub fn hermite_rule(order: usize) -> (Vec<f64>, Vec<f64>) {
    let n = order;
    let mut jacobi = DMatrix::<f64>::zeros(n, n);
    for k in 1..n {
        let b = (k as f64 / 2.0).sqrt();
        jacobi[(k - 1, k)] = b;
        jacobi[(k, k - 1)] = b;
    }
    let mut guesses: Vec<f64> = jacobi.symmetric_eigenvalues().iter().copied().collect();
    guesses.sort_by(f64::total_cmp);

    let pim4 = std::f64::consts::PI.powf(-0.25);
    let mut x = vec![0.0; n];
    let mut w = vec![0.0; n];
    for i in 0..n.div_ceil(2) {
        // polish the non-negative member of each symmetric pair
        let mut z = guesses[n - 1 - i].abs();
        let mut pp = 0.0;
        for iter in 0..8 {
            let mut p1 = pim4;
            let mut p2 = 0.0;
            for j in 1..=n {
                let p3 = p2;
                p2 = p1;
                p1 = z * (2.0 / j as f64).sqrt() * p2 - ((j - 1) as f64 / j as f64).sqrt() * p3;
            }
            pp = (2.0 * n as f64).sqrt() * p2;
            let step = p1 / pp;
            if iter == 7 || step.abs() <= 1e-16 * z.abs().max(1.0) {
                break;
            }
            z -= step;
        }
        if 2 * i + 1 == n {
            z = 0.0;
        }
        x[n - 1 - i] = z;
        x[i] = -z;
        w[i] = 2.0 / (pp * pp);
        w[n - 1 - i] = w[i];
    }
    (x, w)
}

/// Nodes in Δ_Dop and weights summing to one.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadratureRule {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl QuadratureRule {
    pub fn gauss_hermite(dist: &DopplerDistribution, order: usize) -> Self {
        let (x, w) = hermite_rule(order);
        let scale = std::f64::consts::SQRT_2 * dist.sigma;
        let norm = std::f64::consts::PI.sqrt();
        Self {
            nodes: x.iter().map(|xi| scale * xi).collect(),
            weights: w.iter().map(|wi| wi / norm).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Weighted sum of `sampler` over the nodes. Evaluations run in
    /// parallel; the reduction runs in node order, so the result does not
    /// depend on scheduling.
    pub fn integrate<F>(&self, sampler: F) -> Result<Vec<Complex64>>
    where
        F: Fn(f64) -> Result<Vec<Complex64>> + Sync,
    {
        const CHUNK: usize = 64;
        let mut acc: Option<Vec<Complex64>> = None;
        for (nodes, weights) in self.nodes.chunks(CHUNK).zip(self.weights.chunks(CHUNK)) {
            let values: Vec<Vec<Complex64>> = nodes
                .par_iter()
                .map(|&d| sampler(d))
                .collect::<Result<_>>()?;
            for (v, &w) in values.iter().zip(weights) {
                let sum = acc.get_or_insert_with(|| vec![Complex64::new(0.0, 0.0); v.len()]);
                if sum.len() != v.len() {
                    return Err(Error::DimensionMismatch {
                        expected: sum.len(),
                        found: v.len(),
                    });
                }
                for (s, x) in sum.iter_mut().zip(v) {
                    *s += x * w;
                }
            }
        }
        Ok(acc.unwrap_or_default())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AverageTolerance {
    pub rel: f64,
    pub abs: f64,
    pub max_order: usize,
}

impl Default for AverageTolerance {
    fn default() -> Self {
        Self {
            rel: 1e-10,
            abs: 1e-14,
            max_order: DEFAULT_MAX_ORDER,
        }
    }
}

/// Gauss–Hermite average, doubling the order from `dist.order()` until two
/// successive results agree.
pub fn gauss_average<F>(sampler: F, dist: &DopplerDistribution) -> Result<Vec<Complex64>>
where
    F: Fn(f64) -> Result<Vec<Complex64>> + Sync,
{
    gauss_average_with(sampler, dist, &AverageTolerance::default())
}

pub fn gauss_average_with<F>(
    sampler: F,
    dist: &DopplerDistribution,
    tol: &AverageTolerance,
) -> Result<Vec<Complex64>>
where
    F: Fn(f64) -> Result<Vec<Complex64>> + Sync,
{
    let mut order = dist.order;
    let mut previous = QuadratureRule::gauss_hermite(dist, order).integrate(&sampler)?;
    let mut last_change = f64::INFINITY;
    while order * 2 <= tol.max_order {
        order *= 2;
        let current = QuadratureRule::gauss_hermite(dist, order).integrate(&sampler)?;
        let size = current.iter().map(|z| z.norm()).fold(0.0, f64::max);
        last_change = current
            .iter()
            .zip(&previous)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max);
        if last_change <= tol.rel * size + tol.abs {
            return Ok(current);
        }
        previous = current;
    }
    log::warn!("Gauss-Hermite average not converged at order {order}: change {last_change:e}");
    Err(Error::NonConvergence {
        what: "Gauss-Hermite average",
        iterations: order,
        last_change,
    })
}

/// Trapezoid rule in `u` with `Δ_Dop = (step0/grading)·sinh(grading·u)` on
/// unit steps of `u`, cut at `cutoff_sigmas·σ`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GradedRule {
    /// Node spacing at Δ_Dop = 0.
    pub step0: f64,
    /// Relative growth of the node spacing per node.
    pub grading: f64,
    pub cutoff_sigmas: f64,
}

impl Default for GradedRule {
    fn default() -> Self {
        Self {
            step0: 0.02,
            grading: 0.01,
            cutoff_sigmas: 8.0,
        }
    }
}

impl GradedRule {
    pub fn validate(&self) -> Result<()> {
        if !(self.step0 > 0.0) || !(self.grading > 0.0) || !(self.cutoff_sigmas > 0.0) {
            return Err(Error::invalid(
                "graded_rule",
                "step, grading and cutoff must be > 0",
            ));
        }
        Ok(())
    }

    pub fn rule(&self, dist: &DopplerDistribution) -> Result<QuadratureRule> {
        self.validate()?;
        let a = self.step0 / self.grading;
        let cutoff = self.cutoff_sigmas * dist.sigma;
        let kmax = ((cutoff / a).asinh() / self.grading).ceil() as i64;
        let mut nodes = Vec::with_capacity(2 * kmax as usize + 1);
        let mut weights = Vec::with_capacity(2 * kmax as usize + 1);
        for k in -kmax..=kmax {
            let u = self.grading * k as f64;
            let d = a * u.sinh();
            nodes.push(d);
            weights.push(self.step0 * u.cosh() * dist.density(d));
        }
        let total: f64 = weights.iter().sum();
        for w in &mut weights {
            *w /= total;
        }
        Ok(QuadratureRule { nodes, weights })
    }
}

/// Averaging scheme used by the spectroscopy routines.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Averaging {
    GaussHermite(AverageTolerance),
    Graded(GradedRule),
}

impl Default for Averaging {
    fn default() -> Self {
        Averaging::Graded(GradedRule::default())
    }
}

impl Averaging {
    pub fn average<F>(&self, sampler: F, dist: &DopplerDistribution) -> Result<Vec<Complex64>>
    where
        F: Fn(f64) -> Result<Vec<Complex64>> + Sync,
    {
        match self {
            Averaging::GaussHermite(tol) => gauss_average_with(sampler, dist, tol),
            Averaging::Graded(rule) => rule.rule(dist)?.integrate(sampler),
        }
    }
}
