//! Uptilt angle that minimizes the closed-form outage probability.

use std::f64::consts::FRAC_PI_2;
use std::fmt;

use crate::analysis::outage;
use crate::error::{Error, Result};
use crate::geometry::{BeamConfig, CorridorGeometry};

/// Keeps the search away from `alpha = 0` and `alpha + beta = pi/2`, where
/// `cot` and `csc` blow up.
pub const DEFAULT_MARGIN: f64 = 0.05 * std::f64::consts::PI / 180.0;

/// Golden-section stops once the bracket is narrower than this (radians).
pub const GOLDEN_TOLERANCE: f64 = 1e-7;

/// Derivative bisection stops once the bracket is narrower than this.
pub const BISECTION_TOLERANCE: f64 = 1e-10;

/// Grid spacing of the exhaustive scan: 0.01 degree.
pub const GRID_STEP: f64 = 0.01 * std::f64::consts::PI / 180.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Method {
    #[default]
    GoldenSection,
    DerivativeBisection,
    Grid,
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Method::GoldenSection => "golden-section",
            Method::DerivativeBisection => "derivative-bisection",
            Method::Grid => "grid",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OptimizeOptions {
    pub method: Method,
    pub margin: f64,
}

impl Default for OptimizeOptions {
    fn default() -> Self {
        Self {
            method: Method::GoldenSection,
            margin: DEFAULT_MARGIN,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OptimizeResult {
    pub alpha_star: f64,
    pub outage_at_star: f64,
    pub iterations: usize,
    pub method: Method,
    /// The minimum sits on an end of the feasible interval.
    pub at_boundary: bool,
}

/// Uptilt range `[margin, pi/2 - beta - margin]` for a given beamwidth.
pub fn feasible_interval(beta: f64, margin: f64) -> Result<(f64, f64)> {
    if !(margin >= 0.0 && beta > 0.0) {
        return Err(Error::EmptyInterval(format!(
            "beamwidth {beta} rad and margin {margin} rad must be positive"
        )));
    }
    let lo = margin;
    let hi = FRAC_PI_2 - beta - margin;
    if !(hi > lo) {
        return Err(Error::EmptyInterval(format!(
            "beamwidth {:.4} deg leaves no uptilt with {:.4} deg margins",
            beta.to_degrees(),
            margin.to_degrees()
        )));
    }
    Ok((lo, hi))
}

/// Minimizes the outage probability over the uptilt, keeping the
/// beamwidth and gain of `template`.
pub fn optimize_uptilt(
    geom: &CorridorGeometry,
    template: &BeamConfig,
    options: &OptimizeOptions,
) -> Result<OptimizeResult> {
    let (lo, hi) = feasible_interval(template.beta(), options.margin)?;
    // A zero margin gives an open interval; step just inside it.
    let lo = if options.margin == 0.0 {
        lo + f64::EPSILON
    } else {
        lo
    };
    let hi = if options.margin == 0.0 {
        hi - 4.0 * f64::EPSILON
    } else {
        hi
    };

    let eval = |alpha: f64| -> Result<(f64, f64)> {
        let r = outage(geom, &template.with_alpha(alpha)?);
        Ok((r.probability, r.derivative_wrt_alpha))
    };
    let value = |alpha: f64| eval(alpha).map(|(p, _)| p);

    let (alpha_star, iterations) = match options.method {
        Method::GoldenSection => golden_section(&value, lo, hi)?,
        Method::DerivativeBisection => slope_bisection(&eval, lo, hi)?,
        Method::Grid => grid_scan(&value, lo, hi)?,
    };

    // Guard against a minimum pinned to an end of the interval.
    let mut best = (alpha_star, value(alpha_star)?);
    for end in [lo, hi] {
        let v = value(end)?;
        if v < best.1 {
            best = (end, v);
        }
    }
    let edge_tol = 10.0 * GOLDEN_TOLERANCE;
    Ok(OptimizeResult {
        alpha_star: best.0,
        outage_at_star: best.1,
        iterations,
        method: options.method,
        at_boundary: best.0 - lo <= edge_tol || hi - best.0 <= edge_tol,
    })
}

fn golden_section<F>(f: &F, mut a: f64, mut b: f64) -> Result<(f64, usize)>
where
    F: Fn(f64) -> Result<f64>,
{
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = b - inv_phi * (b - a);
    let mut d = a + inv_phi * (b - a);
    let mut fc = f(c)?;
    let mut fd = f(d)?;
    let mut iterations = 0;
    while b - a > GOLDEN_TOLERANCE {
        iterations += 1;
        if fc <= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = f(c)?;
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = f(d)?;
        }
    }
    Ok((0.5 * (a + b), iterations))
}

/// Bisects on the sign of the slope. With a unimodal objective the slope is
/// non-positive left of the minimum and positive right of it; when it never
/// changes sign the minimum is at an end.
fn slope_bisection<F>(f: &F, mut a: f64, mut b: f64) -> Result<(f64, usize)>
where
    F: Fn(f64) -> Result<(f64, f64)>,
{
    if f(a)?.1 > 0.0 {
        return Ok((a, 0));
    }
    if f(b)?.1 <= 0.0 {
        return Ok((b, 0));
    }
    let mut iterations = 0;
    while b - a > BISECTION_TOLERANCE {
        iterations += 1;
        let mid = 0.5 * (a + b);
        if f(mid)?.1 > 0.0 {
            b = mid;
        } else {
            a = mid;
        }
    }
    Ok((0.5 * (a + b), iterations))
}

fn grid_scan<F>(f: &F, lo: f64, hi: f64) -> Result<(f64, usize)>
where
    F: Fn(f64) -> Result<f64>,
{
    let steps = ((hi - lo) / GRID_STEP).floor() as usize;
    let mut best = (hi, f(hi)?);
    for i in 0..=steps {
        let alpha = (lo + i as f64 * GRID_STEP).min(hi);
        let v = f(alpha)?;
        if v < best.1 {
            best = (alpha, v);
        }
    }
    Ok((best.0, steps + 2))
}
