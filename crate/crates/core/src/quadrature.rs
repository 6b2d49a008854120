//! Globally adaptive Gauss-Kronrod (7/15) quadrature.
//!
//! The interval with the largest error estimate is bisected until the summed
//! error estimate drops below `max(abs_tol, rel_tol * |value|)`. Each
//! subinterval's error is `|K15 - G7|`, which is pessimistic for smooth
//! integrands.

use crate::error::{Error, Result};

pub const DEFAULT_REL_TOL: f64 = 1e-8;
pub const DEFAULT_ABS_TOL: f64 = 1e-12;
pub const MAX_DEPTH: u32 = 60;
const MAX_EVALUATIONS: usize = 200_000;

// Kronrod abscissae on [-1, 1]; odd indices are the Gauss points.
#[allow(clippy::excessive_precision)]
const XGK: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_329,
    0.949_107_912_342_758_524_526_189_684_047_851,
    0.864_864_423_359_769_072_789_712_788_640_926,
    0.741_531_185_599_394_439_863_864_773_280_788,
    0.586_087_235_467_691_130_294_144_845_693_013,
    0.405_845_151_377_397_166_906_606_412_076_961,
    0.207_784_955_007_898_467_600_689_403_773_245,
    0.0,
];

#[allow(clippy::excessive_precision)]
const WGK: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_970,
    0.063_092_092_629_978_553_290_700_663_189_204,
    0.104_790_010_322_250_183_839_876_322_541_518,
    0.140_653_259_715_525_918_745_189_590_510_238,
    0.169_004_726_639_267_902_826_583_426_598_550,
    0.190_350_578_064_785_409_913_256_402_421_014,
    0.204_432_940_075_298_892_414_161_999_234_649,
    0.209_482_141_084_727_828_012_999_174_891_714,
];

#[allow(clippy::excessive_precision)]
const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];

/// Integral value with its error estimate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Quadrature {
    pub value: f64,
    pub error: f64,
}

impl Quadrature {
    pub const ZERO: Quadrature = Quadrature {
        value: 0.0,
        error: 0.0,
    };
}

impl std::ops::Add for Quadrature {
    type Output = Quadrature;

    fn add(self, rhs: Quadrature) -> Quadrature {
        Quadrature {
            value: self.value + rhs.value,
            error: self.error + rhs.error,
        }
    }
}

#[derive(Debug, Clone, Copy)]
struct Segment {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
    depth: u32,
}

fn kronrod15<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> (f64, f64) {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center);
    let mut kronrod = fc * WGK[7];
    let mut gauss = fc * WG[3];
    for (j, (&x, &w)) in XGK.iter().zip(WGK.iter()).take(7).enumerate() {
        let dx = half * x;
        let pair = f(center - dx) + f(center + dx);
        kronrod += w * pair;
        if j % 2 == 1 {
            gauss += WG[j / 2] * pair;
        }
    }
    (kronrod * half, ((kronrod - gauss) * half).abs())
}

/// Integrates `f` over `[a, b]`.
///
/// Fails with [`Error::Quadrature`] when the tolerance is not met before a
/// subinterval reaches [`MAX_DEPTH`] bisections or the evaluation budget is
/// spent, or when the integrand produces a non-finite value.
pub fn integrate<F>(f: F, a: f64, b: f64, rel_tol: f64, abs_tol: f64) -> Result<Quadrature>
where
    F: Fn(f64) -> f64,
{
    if !(a.is_finite() && b.is_finite()) || a > b {
        return Err(Error::Quadrature {
            a,
            b,
            value: f64::NAN,
            error: f64::INFINITY,
        });
    }
    if a == b {
        return Ok(Quadrature::ZERO);
    }

    let (value, error) = kronrod15(&f, a, b);
    let mut segments = vec![Segment {
        a,
        b,
        value,
        error,
        depth: 0,
    }];
    let mut evaluations = 15;

    loop {
        let total: f64 = segments.iter().map(|s| s.value).sum();
        let total_err: f64 = segments.iter().map(|s| s.error).sum();
        let fail = || Error::Quadrature {
            a,
            b,
            value: total,
            error: total_err,
        };
        if !total.is_finite() || !total_err.is_finite() {
            return Err(fail());
        }
        if total_err <= abs_tol.max(rel_tol * total.abs()) {
            return Ok(Quadrature {
                value: total,
                error: total_err,
            });
        }

        let worst = segments
            .iter()
            .enumerate()
            .max_by(|x, y| x.1.error.total_cmp(&y.1.error))
            .map(|(i, _)| i)
            .expect("at least one segment");
        let seg = segments[worst];
        if seg.depth >= MAX_DEPTH || evaluations >= MAX_EVALUATIONS {
            return Err(fail());
        }

        let mid = 0.5 * (seg.a + seg.b);
        let (lv, le) = kronrod15(&f, seg.a, mid);
        let (rv, re) = kronrod15(&f, mid, seg.b);
        evaluations += 30;
        segments[worst] = Segment {
            a: seg.a,
            b: mid,
            value: lv,
            error: le,
            depth: seg.depth + 1,
        };
        segments.push(Segment {
            a: mid,
            b: seg.b,
            value: rv,
            error: re,
            depth: seg.depth + 1,
        });
    }
}

/// [`integrate`] with the default tolerances.
pub fn integrate_default<F>(f: F, a: f64, b: f64) -> Result<Quadrature>
where
    F: Fn(f64) -> f64,
{
    integrate(f, a, b, DEFAULT_REL_TOL, DEFAULT_ABS_TOL)
}
