//! Closed-form outage probability and average SINR.
//!
//! A drone is in outage exactly when it is outside its serving beam: inside
//! the beam the SINR is at least the signal-to-interference ratio
//! `(R2 / R1)^2 >= 1`, which clears any moderate threshold. The outage
//! probability is therefore a geometric quantity, integrated over the
//! elevation density of the serving station.
//!
//! The outage closed form has three branches, chosen by where the
//! lower-edge crossing `h3 = (d1/2) tan(alpha)` falls relative to the
//! corridor:
//!
//! | branch | condition        |
//! |--------|------------------|
//! | `c12`  | `h3 < h1`        |
//! | `c34`  | `h1 <= h3 < h2`  |
//! | `c5`   | `h3 >= h2`       |
//!
//! All three assume the serving beam's upper edge still covers the corridor
//! centre at the ceiling, i.e. `h5 = (d1/2) tan(alpha + beta) >= h2`. For
//! narrow beams at low uptilt that fails and the raw formulas leave `[0, 1]`,
//! so [`outage`] switches to the same integral with the upper height limit
//! clipped at `h5`.
//!
//! Average SINR follows the five coverage regimes of
//! [`classify_case`](crate::geometry::classify_case). Regime 1 counts the
//! interference-limited ratio `(R2/R1)^2` over the served region and ignores
//! noise. Regimes 2-5 count only the served region without interference,
//! with noise as the only impairment.

use std::fmt;

use crate::error::{Error, Result};
use crate::geometry::{
    classify_case, cot, crossing_heights, gamma_angle, upper_edge_center_height, BeamConfig,
    CaseId, CorridorGeometry,
};
use crate::link_budget::RadioConfig;
use crate::quadrature::{integrate_default, Quadrature};

/// Relative slack when checking a closed form's branch condition, so that
/// formulas can be evaluated on (rounded) branch boundaries.
const BRANCH_SLACK: f64 = 1e-12;

/// Which outage closed form applies.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum OutageBranch {
    Case12,
    Case34,
    Case5,
}

impl OutageBranch {
    /// `"c12"`, `"c34"` or `"c5"`.
    pub fn label(self) -> &'static str {
        match self {
            OutageBranch::Case12 => "c12",
            OutageBranch::Case34 => "c34",
            OutageBranch::Case5 => "c5",
        }
    }
}

impl fmt::Display for OutageBranch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OutageResult {
    pub probability: f64,
    /// Slope of the outage probability in the uptilt angle, per radian.
    pub derivative_wrt_alpha: f64,
    pub branch: OutageBranch,
    /// The serving beam's upper edge drops below the ceiling at the
    /// corridor centre, so the height integral was clipped.
    pub ceiling_clipped: bool,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AvgSinrResult {
    /// Mean linear SINR over the corridor.
    pub value: f64,
    pub case: CaseId,
    pub quadrature_error_estimate: f64,
}

/// Branch of the outage closed form. Boundary ties go to the higher branch.
pub fn outage_branch(geom: &CorridorGeometry, beam: &BeamConfig) -> OutageBranch {
    let h3 = crossing_heights(geom, beam).center;
    if h3 >= geom.h2() {
        OutageBranch::Case5
    } else if h3 >= geom.h1() {
        OutageBranch::Case34
    } else {
        OutageBranch::Case12
    }
}

fn below(x: f64, bound: f64) -> bool {
    x <= bound * (1.0 + BRANCH_SLACK)
}

fn above(x: f64, bound: f64) -> bool {
    x >= bound * (1.0 - BRANCH_SLACK)
}

fn csc2(x: f64) -> f64 {
    let s = x.sin();
    1.0 / (s * s)
}

fn require_case12(geom: &CorridorGeometry, beam: &BeamConfig) -> Result<()> {
    if below(crossing_heights(geom, beam).center, geom.h1()) {
        Ok(())
    } else {
        Err(Error::BranchMisuse {
            formula: "outage_case12",
            condition: "h3 <= h1",
        })
    }
}

fn require_case34(geom: &CorridorGeometry, beam: &BeamConfig) -> Result<()> {
    let h3 = crossing_heights(geom, beam).center;
    if above(h3, geom.h1()) && below(h3, geom.h2()) {
        Ok(())
    } else {
        Err(Error::BranchMisuse {
            formula: "outage_case34",
            condition: "h1 <= h3 <= h2",
        })
    }
}

fn require_case5(geom: &CorridorGeometry, beam: &BeamConfig) -> Result<()> {
    if above(crossing_heights(geom, beam).center, geom.h2()) {
        Ok(())
    } else {
        Err(Error::BranchMisuse {
            formula: "outage_case5",
            condition: "h3 >= h2",
        })
    }
}

/// `((h1 + h2) / d1) cot(alpha + beta)`, valid for `h3 <= h1`.
pub fn outage_case12(geom: &CorridorGeometry, beam: &BeamConfig) -> Result<f64> {
    require_case12(geom, beam)?;
    Ok((geom.h1() + geom.h2()) / geom.d1() * cot(beam.upper_edge()))
}

pub fn outage_case12_slope(geom: &CorridorGeometry, beam: &BeamConfig) -> Result<f64> {
    require_case12(geom, beam)?;
    Ok(-(geom.h1() + geom.h2()) / geom.d1() * csc2(beam.upper_edge()))
}

/// Outage for `h1 <= h3 <= h2`: full beam below `h3`, centre-limited above.
pub fn outage_case34(geom: &CorridorGeometry, beam: &BeamConfig) -> Result<f64> {
    require_case34(geom, beam)?;
    let (d1, h1, h2) = (geom.d1(), geom.h1(), geom.h2());
    let span = h2 - h1;
    let tan_a = beam.alpha().tan();
    Ok(1.0 + (h1 + h2) / d1 * cot(beam.upper_edge())
        - (0.25 * d1 * d1 * tan_a * tan_a - h1 * h1) / (d1 * span) * cot(beam.alpha())
        - (h2 - 0.5 * d1 * tan_a) / span)
}

pub fn outage_case34_slope(geom: &CorridorGeometry, beam: &BeamConfig) -> Result<f64> {
    require_case34(geom, beam)?;
    let (d1, h1, h2) = (geom.d1(), geom.h1(), geom.h2());
    let span = h2 - h1;
    let cos_a = beam.alpha().cos();
    Ok(
        -(h1 + h2) / d1 * csc2(beam.upper_edge()) + d1 / (4.0 * span * cos_a * cos_a)
            - h1 * h1 / (d1 * span) * csc2(beam.alpha()),
    )
}

/// `1 + ((h1 + h2) / d1)(cot(alpha + beta) - cot(alpha))`, valid for
/// `h3 >= h2`. Independent of the ceiling clipping: the beam never reaches
/// the centre.
pub fn outage_case5(geom: &CorridorGeometry, beam: &BeamConfig) -> Result<f64> {
    require_case5(geom, beam)?;
    Ok(1.0 + (geom.h1() + geom.h2()) / geom.d1() * (cot(beam.upper_edge()) - cot(beam.alpha())))
}

pub fn outage_case5_slope(geom: &CorridorGeometry, beam: &BeamConfig) -> Result<f64> {
    require_case5(geom, beam)?;
    Ok(-(geom.h1() + geom.h2()) / geom.d1() * (csc2(beam.upper_edge()) - csc2(beam.alpha())))
}

/// Outage probability and its slope from the height integral with every
/// limit clipped to where the integrand is supported.
///
/// Below `h3` the served elevations are `(alpha, alpha + beta)`; above it
/// they start at the centre elevation `atan(2 hx / d1)` and vanish above
/// `h5`. Both pieces agree at `h3` and the second one vanishes at `h5`, so
/// the slope needs no boundary terms.
fn clipped_outage(geom: &CorridorGeometry, beam: &BeamConfig) -> (f64, f64) {
    let (d1, h1, h2) = (geom.d1(), geom.h1(), geom.h2());
    let h3 = crossing_heights(geom, beam).center;
    let h5 = upper_edge_center_height(geom, beam);
    let upper = beam.upper_edge();
    let (cot_u, csc2_u) = (cot(upper), csc2(upper));

    let mut served = 0.0;
    let mut served_slope = 0.0;

    let (lo, hi) = (h1, h2.min(h3));
    if hi > lo {
        let sq = (hi * hi - lo * lo) / d1;
        served += (cot(beam.alpha()) - cot_u) * sq;
        served_slope += (csc2_u - csc2(beam.alpha())) * sq;
    }
    let (lo, hi) = (h1.max(h3), h2.min(h5));
    if hi > lo {
        let sq = (hi * hi - lo * lo) / d1;
        served += (hi - lo) - cot_u * sq;
        served_slope += csc2_u * sq;
    }
    let span = geom.height_span();
    (1.0 - served / span, -served_slope / span)
}

/// Outage probability with its slope in the uptilt angle.
pub fn outage(geom: &CorridorGeometry, beam: &BeamConfig) -> OutageResult {
    let branch = outage_branch(geom, beam);
    let ceiling_clipped =
        branch != OutageBranch::Case5 && upper_edge_center_height(geom, beam) < geom.h2();
    let (probability, derivative_wrt_alpha) = if ceiling_clipped {
        clipped_outage(geom, beam)
    } else {
        let pair = match branch {
            OutageBranch::Case12 => (outage_case12(geom, beam), outage_case12_slope(geom, beam)),
            OutageBranch::Case34 => (outage_case34(geom, beam), outage_case34_slope(geom, beam)),
            OutageBranch::Case5 => (outage_case5(geom, beam), outage_case5_slope(geom, beam)),
        };
        match pair {
            (Ok(p), Ok(d)) => (p, d),
            _ => unreachable!("branch chosen from its own condition"),
        }
    };
    OutageResult {
        probability,
        derivative_wrt_alpha,
        branch,
        ceiling_clipped,
    }
}

fn require_case(
    geom: &CorridorGeometry,
    beam: &BeamConfig,
    want: CaseId,
    formula: &'static str,
) -> Result<()> {
    if classify_case(geom, beam) == want {
        Ok(())
    } else {
        Err(Error::BranchMisuse {
            formula,
            condition: match want {
                CaseId::Case1 => "h1 > h3 and h1 > h4",
                CaseId::Case2 => "h3 < h1 <= h4",
                CaseId::Case3 => "h1 <= h3 < h2 and h4 < h2",
                CaseId::Case4 => "h1 <= h3 < h2 and h4 >= h2",
                CaseId::Case5 => "h3 >= h2",
            },
        })
    }
}

/// `2 k G / (d1 N0 (h2 - h1))`: the served-region integrand times `hx`,
/// per radian of elevation.
fn noise_limited_scale(geom: &CorridorGeometry, beam: &BeamConfig, radio: &RadioConfig) -> f64 {
    2.0 * radio.snr_at_unit_range() * beam.gain() / (geom.d1() * geom.height_span())
}

/// Height integrand of the interference-limited regime: the elevation
/// integral of `(R2/R1)^2` times the elevation density, from the centre
/// elevation up to the upper beam edge, divided by `h2 - h1`.
pub(crate) fn interference_integrand(hx: f64, geom: &CorridorGeometry, beam: &BeamConfig) -> f64 {
    let d1 = geom.d1();
    let span = geom.height_span();
    let upper = beam.upper_edge();
    let center = (2.0 * hx / d1).atan();
    2.0 * d1 / (hx * span) * (upper - center)
        - 4.0 / span * (upper.sin().ln() - center.sin().ln())
        - 2.0 * hx / (d1 * span) * (cot(upper) - d1 / (2.0 * hx))
}

/// Regime 1: interference-limited mean of `(R2/R1)^2` over the served
/// region. Noise and transmit power drop out.
///
/// Above `h5` the served region is empty, so integration stops there.
pub fn avg_sinr_case1(
    geom: &CorridorGeometry,
    beam: &BeamConfig,
    _radio: &RadioConfig,
) -> Result<AvgSinrResult> {
    require_case(geom, beam, CaseId::Case1, "avg_sinr_case1")?;
    let top = geom.h2().min(upper_edge_center_height(geom, beam));
    let q = if top > geom.h1() {
        integrate_default(|hx| interference_integrand(hx, geom, beam), geom.h1(), top)?
    } else {
        Quadrature::ZERO
    };
    Ok(result(q, CaseId::Case1))
}

/// `scale * (alpha + beta - gamma(hx)) / hx` integrated over `[lo, hi]`.
fn gamma_limited(
    geom: &CorridorGeometry,
    beam: &BeamConfig,
    scale: f64,
    lo: f64,
    hi: f64,
) -> Result<Quadrature> {
    if hi <= lo {
        return Ok(Quadrature::ZERO);
    }
    let upper = beam.upper_edge();
    integrate_default(
        |hx| match gamma_angle(hx, geom, beam) {
            Ok(gamma) => scale * (upper - gamma) / hx,
            Err(_) => f64::NAN,
        },
        lo,
        hi,
    )
}

/// `scale * beta * ln(hi / lo)`: the full beam is interference-free.
fn full_beam(beam: &BeamConfig, scale: f64, lo: f64, hi: f64) -> f64 {
    scale * beam.beta() * (hi / lo).ln()
}

fn result(q: Quadrature, case: CaseId) -> AvgSinrResult {
    AvgSinrResult {
        value: q.value,
        case,
        quadrature_error_estimate: q.error,
    }
}

/// Regime 2: interference-free wedge `(gamma, alpha + beta)` from the floor
/// up to the side crossing `h4` (or the ceiling, if lower).
pub fn avg_sinr_case2(
    geom: &CorridorGeometry,
    beam: &BeamConfig,
    radio: &RadioConfig,
) -> Result<AvgSinrResult> {
    require_case(geom, beam, CaseId::Case2, "avg_sinr_case2")?;
    let scale = noise_limited_scale(geom, beam, radio);
    let h4 = crossing_heights(geom, beam).side;
    let q = gamma_limited(geom, beam, scale, geom.h1(), h4.min(geom.h2()))?;
    Ok(result(q, CaseId::Case2))
}

/// Regime 3: full beam from the floor to `h3`, then the `gamma` wedge up to
/// `h4`. Heights between `h4` and the ceiling carry no interference-free
/// coverage.
pub fn avg_sinr_case3(
    geom: &CorridorGeometry,
    beam: &BeamConfig,
    radio: &RadioConfig,
) -> Result<AvgSinrResult> {
    require_case(geom, beam, CaseId::Case3, "avg_sinr_case3")?;
    let scale = noise_limited_scale(geom, beam, radio);
    let heights = crossing_heights(geom, beam);
    let lower = full_beam(beam, scale, geom.h1(), heights.center);
    let q = gamma_limited(geom, beam, scale, heights.center, heights.side)?;
    Ok(result(
        q + Quadrature {
            value: lower,
            error: 0.0,
        },
        CaseId::Case3,
    ))
}

/// Regime 4: as regime 3, with the wedge running to the ceiling.
pub fn avg_sinr_case4(
    geom: &CorridorGeometry,
    beam: &BeamConfig,
    radio: &RadioConfig,
) -> Result<AvgSinrResult> {
    require_case(geom, beam, CaseId::Case4, "avg_sinr_case4")?;
    let scale = noise_limited_scale(geom, beam, radio);
    let h3 = crossing_heights(geom, beam).center;
    let lower = full_beam(beam, scale, geom.h1(), h3);
    let q = gamma_limited(geom, beam, scale, h3, geom.h2())?;
    Ok(result(
        q + Quadrature {
            value: lower,
            error: 0.0,
        },
        CaseId::Case4,
    ))
}

/// Regime 5: the whole beam is interference-free at every height,
/// `2 k G beta ln(h2/h1) / (d1 N0 (h2 - h1))`. Does not depend on the uptilt.
pub fn avg_sinr_case5(
    geom: &CorridorGeometry,
    beam: &BeamConfig,
    radio: &RadioConfig,
) -> Result<AvgSinrResult> {
    require_case(geom, beam, CaseId::Case5, "avg_sinr_case5")?;
    let scale = noise_limited_scale(geom, beam, radio);
    let value = full_beam(beam, scale, geom.h1(), geom.h2());
    Ok(result(Quadrature { value, error: 0.0 }, CaseId::Case5))
}

/// Average SINR, dispatched on the coverage regime.
pub fn avg_sinr(
    geom: &CorridorGeometry,
    beam: &BeamConfig,
    radio: &RadioConfig,
) -> Result<AvgSinrResult> {
    match classify_case(geom, beam) {
        CaseId::Case1 => avg_sinr_case1(geom, beam, radio),
        CaseId::Case2 => avg_sinr_case2(geom, beam, radio),
        CaseId::Case3 => avg_sinr_case3(geom, beam, radio),
        CaseId::Case4 => avg_sinr_case4(geom, beam, radio),
        CaseId::Case5 => avg_sinr_case5(geom, beam, radio),
    }
}
