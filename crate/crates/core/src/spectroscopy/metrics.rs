// Copyright 2026 The darkcomb Authors
// SPDX-License-Identifier: Apache-2.0

//! Line positions, widths and depths.
//!
//! Features are peaks of the absorbance `−ln T` (absorption lines) or of its
//! negative (transmission lines). Each peak is characterised by its
//! topographic prominence; the width is taken at half prominence, with the
//! crossings found by linear interpolation, and the position is refined by
//! a parabola through the three highest samples.

use super::spectrum::Spectrum;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FeatureKind {
    Absorption,
    Transmission,
}

impl FeatureKind {
    pub fn label(self) -> &'static str {
        match self {
            FeatureKind::Absorption => "absorption",
            FeatureKind::Transmission => "transmission",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LineFeature {
    pub kind: FeatureKind,
    pub position: f64,
    /// Full width at half prominence.
    pub width: f64,
    /// Change of transmission between the line and its reference level.
    pub depth: f64,
    /// Prominence in absorbance units.
    pub prominence: f64,
    /// Transmission at the sample nearest the line.
    pub transmission: f64,
    pub index: usize,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MetricOptions {
    /// `None` picks transmission lines for Doppler-averaged spectra and
    /// absorption lines otherwise.
    pub kind: Option<FeatureKind>,
    /// Absolute prominence floor in absorbance units.
    pub min_prominence: f64,
    /// Prominence floor relative to the absorbance range.
    pub min_relative_prominence: f64,
    /// Only report features inside this detuning window.
    pub window: Option<(f64, f64)>,
    /// Drop boundary and unresolved features instead of failing.
    pub skip_invalid: bool,
}

impl Default for MetricOptions {
    fn default() -> Self {
        Self {
            kind: None,
            min_prominence: 1e-9,
            min_relative_prominence: 1e-3,
            window: None,
            skip_invalid: false,
        }
    }
}

/// A local maximum of a sampled curve.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Peak {
    pub index: usize,
    pub position: f64,
    pub height: f64,
    pub prominence: f64,
    pub left: f64,
    pub right: f64,
}

impl Peak {
    pub fn width(&self) -> f64 {
        self.right - self.left
    }
}

/// Vertex of the parabola through three points.
fn parabolic_vertex(x: [f64; 3], y: [f64; 3]) -> Option<f64> {
    let d1 = (y[1] - y[0]) / (x[1] - x[0]);
    let d2 = (y[2] - y[1]) / (x[2] - x[1]);
    let curvature = (d2 - d1) / (x[2] - x[0]);
    if curvature >= 0.0 || !curvature.is_finite() {
        return None;
    }
    // y = y0 + d1 (t − x0) + c (t − x0)(t − x1)
    let v = 0.5 * (x[0] + x[1]) - d1 / (2.0 * curvature);
    (v >= x[0] && v <= x[2]).then_some(v)
}

/// Interior local maxima of `y` with prominence and half-prominence width.
/// Flat tops are reported at their middle sample.
pub fn find_peaks(x: &[f64], y: &[f64]) -> Result<Vec<Peak>> {
    if x.len() != y.len() {
        return Err(Error::DimensionMismatch {
            expected: x.len(),
            found: y.len(),
        });
    }
    let n = y.len();
    let mut peaks = Vec::new();
    let mut i = 1;
    while i + 1 < n {
        if y[i] > y[i - 1] {
            let mut j = i;
            while j + 1 < n && y[j + 1] == y[i] {
                j += 1;
            }
            if j + 1 < n && y[j + 1] < y[i] {
                peaks.push(measure(x, y, (i + j) / 2));
            }
            i = j + 1;
        } else {
            i += 1;
        }
    }
    Ok(peaks)
}

fn measure(x: &[f64], y: &[f64], i: usize) -> Peak {
    let n = y.len();
    let h = y[i];
    let mut left_min = h;
    let mut j = i;
    while j > 0 && y[j - 1] <= h {
        j -= 1;
        left_min = left_min.min(y[j]);
    }
    let mut right_min = h;
    let mut k = i;
    while k + 1 < n && y[k + 1] <= h {
        k += 1;
        right_min = right_min.min(y[k]);
    }
    let prominence = h - left_min.max(right_min);
    let level = h - 0.5 * prominence;

    let mut l = i;
    while l > 0 && y[l] > level {
        l -= 1;
    }
    let left = if y[l] > level {
        x[l]
    } else {
        x[l] + (level - y[l]) / (y[l + 1] - y[l]) * (x[l + 1] - x[l])
    };
    let mut r = i;
    while r + 1 < n && y[r] > level {
        r += 1;
    }
    let right = if y[r] > level {
        x[r]
    } else {
        x[r] - (level - y[r]) / (y[r - 1] - y[r]) * (x[r] - x[r - 1])
    };
    let position = if i > 0 && i + 1 < n {
        parabolic_vertex([x[i - 1], x[i], x[i + 1]], [y[i - 1], y[i], y[i + 1]]).unwrap_or(x[i])
    } else {
        x[i]
    };
    Peak {
        index: i,
        position,
        height: h,
        prominence,
        left,
        right,
    }
}

/// End samples that are local maxima.
fn edge_maxima(y: &[f64]) -> Vec<usize> {
    let n = y.len();
    let mut out = Vec::new();
    if n >= 2 {
        if y[0] > y[1] {
            out.push(0);
        }
        if y[n - 1] > y[n - 2] {
            out.push(n - 1);
        }
    }
    out
}

/// Drop from an end sample to the lowest point before the curve rises above
/// it again.
fn edge_prominence(y: &[f64], edge: usize) -> f64 {
    let h = y[edge];
    let mut lowest = h;
    let iter: Box<dyn Iterator<Item = &f64>> = if edge == 0 {
        Box::new(y.iter())
    } else {
        Box::new(y.iter().rev())
    };
    for &v in iter {
        if v > h {
            break;
        }
        lowest = lowest.min(v);
    }
    h - lowest
}

/// Features of the fundamental transmission, sorted by position.
pub fn line_metrics(spectrum: &Spectrum, opts: &MetricOptions) -> Result<Vec<LineFeature>> {
    let kind = opts.kind.unwrap_or(if spectrum.is_doppler_averaged() {
        FeatureKind::Transmission
    } else {
        FeatureKind::Absorption
    });
    let absorbance = spectrum.absorbance();
    let sign = match kind {
        FeatureKind::Absorption => 1.0,
        FeatureKind::Transmission => -1.0,
    };
    let y: Vec<f64> = absorbance.iter().map(|a| sign * a).collect();
    let x = &spectrum.detuning;
    let range = y.iter().fold(f64::NEG_INFINITY, |a, &b| a.max(b))
        - y.iter().fold(f64::INFINITY, |a, &b| a.min(b));
    let floor = opts
        .min_prominence
        .max(opts.min_relative_prominence * range);
    for edge in edge_maxima(&y) {
        let inside = opts
            .window
            .is_none_or(|(lo, hi)| x[edge] >= lo && x[edge] <= hi);
        if inside && edge_prominence(&y, edge) >= floor {
            let e = Error::FeatureAtBoundary { position: x[edge] };
            if !opts.skip_invalid {
                return Err(e);
            }
            log::warn!("skipping feature: {e}");
        }
    }

    let mut out = Vec::new();
    for p in find_peaks(x, &y)? {
        if p.prominence < floor {
            continue;
        }
        if let Some((lo, hi)) = opts.window {
            if p.position < lo || p.position > hi {
                continue;
            }
        }
        let step = (x[p.index + 1] - x[p.index - 1]) / 2.0;
        let problem = (p.width() < 2.0 * step).then_some(Error::UnresolvedFeature {
            position: p.position,
            width: p.width(),
        });
        if let Some(e) = problem {
            if opts.skip_invalid {
                log::warn!("skipping feature: {e}");
                continue;
            }
            return Err(e);
        }
        let t_peak = spectrum.transmission[p.index];
        let reference = (-(sign * (p.height - p.prominence))).exp();
        out.push(LineFeature {
            kind,
            position: p.position,
            width: p.width(),
            depth: (reference - t_peak).abs(),
            prominence: p.prominence,
            transmission: t_peak,
            index: p.index,
        });
    }
    Ok(out)
}

/// The feature closest to `target`.
pub fn nearest_feature(features: &[LineFeature], target: f64) -> Option<&LineFeature> {
    features.iter().min_by(|a, b| {
        (a.position - target)
            .abs()
            .total_cmp(&(b.position - target).abs())
    })
}
