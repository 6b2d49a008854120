//! Corridor and beam geometry.
//!
//! Both base stations are at ground level, `d1` metres apart. A drone at
//! horizontal distance `dx` from its serving station and altitude `hx` sees
//! the serving station at elevation `atan(hx / dx)` and the neighbour at
//! `atan(hx / (d1 - dx))`. Positions are always expressed relative to the
//! nearer station, so `dx` lies in `(0, d1 / 2]`; the other half-corridor is
//! the mirror image.

use std::f64::consts::FRAC_PI_2;
use std::fmt;

use crate::error::{Error, Result};

/// Horizontal station spacing and the corridor altitude band.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CorridorGeometry {
    d1: f64,
    h1: f64,
    h2: f64,
}

impl CorridorGeometry {
    pub fn new(d1: f64, h1: f64, h2: f64) -> Result<Self> {
        if !(d1.is_finite() && d1 > 0.0) {
            return Err(Error::InvalidGeometry(format!(
                "station spacing must be positive, got {d1}"
            )));
        }
        if !(h1.is_finite() && h2.is_finite() && 0.0 < h1 && h1 < h2) {
            return Err(Error::InvalidGeometry(format!(
                "need 0 < h1 < h2, got h1 = {h1}, h2 = {h2}"
            )));
        }
        Ok(Self { d1, h1, h2 })
    }

    /// Horizontal distance between the two stations.
    pub fn d1(&self) -> f64 {
        self.d1
    }

    /// Corridor floor.
    pub fn h1(&self) -> f64 {
        self.h1
    }

    /// Corridor ceiling.
    pub fn h2(&self) -> f64 {
        self.h2
    }

    pub fn height_span(&self) -> f64 {
        self.h2 - self.h1
    }

    pub fn contains_height(&self, hx: f64) -> bool {
        self.h1 <= hx && hx <= self.h2
    }
}

/// Rectangular main beam: gain `gain` for elevations strictly inside
/// `(alpha, alpha + beta)`, zero elsewhere. Both stations share it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BeamConfig {
    alpha: f64,
    beta: f64,
    gain: f64,
}

impl BeamConfig {
    /// Rejects beams that point below the horizon or past zenith
    /// (`alpha > 0`, `alpha + beta < pi/2`).
    pub fn new(alpha: f64, beta: f64, gain: f64) -> Result<Self> {
        if !(beta.is_finite() && beta > 0.0) {
            return Err(Error::InfeasibleBeam(format!(
                "beamwidth must be positive, got {beta} rad"
            )));
        }
        if !(gain.is_finite() && gain > 0.0) {
            return Err(Error::InfeasibleBeam(format!(
                "gain must be positive, got {gain}"
            )));
        }
        if !(alpha.is_finite() && alpha > 0.0 && alpha + beta < FRAC_PI_2) {
            return Err(Error::InfeasibleBeam(format!(
                "need alpha > 0 and alpha + beta < 90 deg, got alpha = {:.6} deg, beta = {:.6} deg",
                alpha.to_degrees(),
                beta.to_degrees()
            )));
        }
        Ok(Self { alpha, beta, gain })
    }

    /// Same beamwidth and gain, different uptilt.
    pub fn with_alpha(&self, alpha: f64) -> Result<Self> {
        Self::new(alpha, self.beta, self.gain)
    }

    pub fn with_gain(&self, gain: f64) -> Result<Self> {
        Self::new(self.alpha, self.beta, gain)
    }

    /// Uptilt: elevation of the lower beam edge.
    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn gain(&self) -> f64 {
        self.gain
    }

    /// Elevation of the upper beam edge, `alpha + beta`.
    pub fn upper_edge(&self) -> f64 {
        self.alpha + self.beta
    }
}

/// A drone position relative to its (nearer) serving station.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UavPosition {
    dx: f64,
    hx: f64,
}

impl UavPosition {
    pub fn new(dx: f64, hx: f64, geom: &CorridorGeometry) -> Result<Self> {
        check_position(dx, hx, geom)?;
        Ok(Self { dx, hx })
    }

    pub fn dx(&self) -> f64 {
        self.dx
    }

    pub fn hx(&self) -> f64 {
        self.hx
    }
}

fn check_position(dx: f64, hx: f64, geom: &CorridorGeometry) -> Result<()> {
    if !(dx > 0.0 && dx <= 0.5 * geom.d1) {
        return Err(Error::OutOfDomain(format!(
            "dx = {dx} outside (0, {}]",
            0.5 * geom.d1
        )));
    }
    if !geom.contains_height(hx) {
        return Err(Error::OutOfDomain(format!(
            "hx = {hx} outside [{}, {}]",
            geom.h1, geom.h2
        )));
    }
    Ok(())
}

/// Altitudes where the two beams' edges cross.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CrossingHeights {
    /// Lower edges cross above the corridor centre: `(d1/2) tan(alpha)`.
    pub center: f64,
    /// Serving upper edge meets the neighbour's lower edge:
    /// `d1 / (cot(alpha) + cot(alpha + beta))`.
    pub side: f64,
}

/// The five coverage regimes, ordered by increasing uptilt.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum CaseId {
    Case1,
    Case2,
    Case3,
    Case4,
    Case5,
}

impl CaseId {
    pub const ALL: [CaseId; 5] = [
        CaseId::Case1,
        CaseId::Case2,
        CaseId::Case3,
        CaseId::Case4,
        CaseId::Case5,
    ];

    /// Stable machine-readable label, `"case1"` .. `"case5"`.
    pub fn label(self) -> &'static str {
        match self {
            CaseId::Case1 => "case1",
            CaseId::Case2 => "case2",
            CaseId::Case3 => "case3",
            CaseId::Case4 => "case4",
            CaseId::Case5 => "case5",
        }
    }
}

impl fmt::Display for CaseId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

/// Elevations of the serving (`theta1`) and neighbouring (`theta2`)
/// stations as seen from `pos`.
pub fn elevation_angles(pos: &UavPosition, geom: &CorridorGeometry) -> Result<(f64, f64)> {
    check_position(pos.dx, pos.hx, geom)?;
    let theta1 = (pos.hx / pos.dx).atan();
    let theta2 = (pos.hx / (geom.d1 - pos.dx)).atan();
    Ok((theta1, theta2))
}

/// Support of the serving-station elevation at altitude `hx`:
/// `(atan(2 hx / d1), pi/2)`.
pub fn theta1_domain(hx: f64, geom: &CorridorGeometry) -> Result<(f64, f64)> {
    if !geom.contains_height(hx) {
        return Err(Error::OutOfDomain(format!(
            "hx = {hx} outside [{}, {}]",
            geom.h1, geom.h2
        )));
    }
    Ok(((2.0 * hx / geom.d1).atan(), FRAC_PI_2))
}

/// Density of the serving-station elevation given altitude `hx`, when `dx`
/// is uniform on `(0, d1/2)`: `(2 hx / d1) csc^2(theta1)` on the support,
/// zero outside it.
pub fn theta1_pdf(theta1: f64, hx: f64, geom: &CorridorGeometry) -> f64 {
    let lo = (2.0 * hx / geom.d1).atan();
    if theta1 < lo || theta1 > FRAC_PI_2 {
        return 0.0;
    }
    let s = theta1.sin();
    2.0 * hx / geom.d1 / (s * s)
}

pub fn crossing_heights(geom: &CorridorGeometry, beam: &BeamConfig) -> CrossingHeights {
    let center = 0.5 * geom.d1 * beam.alpha.tan();
    let side = geom.d1 / (cot(beam.alpha) + cot(beam.upper_edge()));
    CrossingHeights { center, side }
}

/// Altitude at which the upper beam edges cross above the corridor centre,
/// `(d1/2) tan(alpha + beta)`. Above it no point on the serving half is
/// inside the serving beam.
pub fn upper_edge_center_height(geom: &CorridorGeometry, beam: &BeamConfig) -> f64 {
    0.5 * geom.d1 * beam.upper_edge().tan()
}

/// Coverage regime of a (geometry, beam) pair. Ties on a regime boundary go
/// to the higher-numbered case.
pub fn classify_case(geom: &CorridorGeometry, beam: &BeamConfig) -> CaseId {
    let CrossingHeights { center, side } = crossing_heights(geom, beam);
    if center >= geom.h2 {
        CaseId::Case5
    } else if center >= geom.h1 {
        if side >= geom.h2 {
            CaseId::Case4
        } else {
            CaseId::Case3
        }
    } else if side >= geom.h1 {
        CaseId::Case2
    } else {
        CaseId::Case1
    }
}

/// Serving-station elevation at which the neighbour is seen exactly at its
/// lower beam edge, at altitude `hx`: `acot(d1/hx - cot(alpha))`.
///
/// Points on the serving side with `theta1` above this angle are outside the
/// neighbour's beam.
pub fn gamma_angle(hx: f64, geom: &CorridorGeometry, beam: &BeamConfig) -> Result<f64> {
    let ratio = geom.d1 / hx;
    let cot_alpha = cot(beam.alpha);
    let c = ratio - cot_alpha;
    if !(c > 0.0) {
        return Err(Error::NoCrossing {
            hx,
            ratio,
            cot_alpha,
        });
    }
    Ok((1.0 / c).atan())
}

/// Distances from the drone to the serving and neighbouring stations.
pub fn slant_ranges(hx: f64, theta1: f64, theta2: f64) -> (f64, f64) {
    (hx / theta1.sin(), hx / theta2.sin())
}

#[inline]
pub(crate) fn cot(x: f64) -> f64 {
    1.0 / x.tan()
}
