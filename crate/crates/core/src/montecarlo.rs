//! Seeded Monte Carlo estimates of outage probability and average SINR,
//! sampled directly from the system model.
//!
//! Samples are split into fixed-size chunks. Chunk `c` draws from ChaCha8
//! stream `c` of the master seed, and chunk statistics are merged in chunk
//! order, so an estimate depends only on `(seed, samples, mode)` and not on
//! the rayon thread count.

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::geometry::{classify_case, BeamConfig, CaseId, CorridorGeometry, UavPosition};
use crate::link_budget::RadioConfig;

/// Samples per chunk (and per random stream).
pub const CHUNK_SIZE: u64 = 1 << 16;

/// Sample count for interactive runs.
pub const DEFAULT_SAMPLES: u64 = 1_000_000;

/// Sample count for pinning reference values.
pub const REFERENCE_SAMPLES: u64 = 10_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum McMode {
    /// Full SINR with interference and noise.
    #[default]
    Exact,
    /// The simplifications behind the closed forms: outage iff outside the
    /// serving beam; average SINR restricted as in the analytic regimes.
    PaperApprox,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct McConfig {
    pub samples: u64,
    pub seed: u64,
    pub mode: McMode,
}

impl McConfig {
    pub fn new(samples: u64, seed: u64, mode: McMode) -> Result<Self> {
        let cfg = Self {
            samples,
            seed,
            mode,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    fn validate(&self) -> Result<()> {
        if self.samples == 0 {
            return Err(Error::InvalidMonteCarlo(
                "at least one sample is required".into(),
            ));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct McEstimate {
    pub mean: f64,
    /// Sample standard deviation over `sqrt(samples)`.
    pub std_error: f64,
    pub samples: u64,
}

/// Running count, mean and sum of squared deviations.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
struct Moments {
    count: u64,
    mean: f64,
    m2: f64,
}

impl Moments {
    fn push(&mut self, x: f64) {
        self.count += 1;
        let delta = x - self.mean;
        self.mean += delta / self.count as f64;
        self.m2 += delta * (x - self.mean);
    }

    fn merge(self, other: Moments) -> Moments {
        if self.count == 0 {
            return other;
        }
        if other.count == 0 {
            return self;
        }
        let count = self.count + other.count;
        let (na, nb, n) = (self.count as f64, other.count as f64, count as f64);
        let delta = other.mean - self.mean;
        Moments {
            count,
            mean: self.mean + delta * nb / n,
            m2: self.m2 + other.m2 + delta * delta * na * nb / n,
        }
    }

    fn estimate(self) -> McEstimate {
        let n = self.count as f64;
        let std_error = if self.count > 1 {
            (self.m2 / (n - 1.0)).max(0.0).sqrt() / n.sqrt()
        } else {
            0.0
        };
        McEstimate {
            mean: self.mean,
            std_error,
            samples: self.count,
        }
    }
}

/// Draws a position with `dx` uniform on `(0, d1/2]` and `hx` uniform on
/// `[h1, h2]`.
pub fn sample_uav<R: Rng + ?Sized>(rng: &mut R, geom: &CorridorGeometry) -> UavPosition {
    let (dx, hx) = draw(rng, geom);
    UavPosition::new(dx, hx, geom).expect("sampled position lies in the serving half-corridor")
}

#[inline]
fn draw<R: Rng + ?Sized>(rng: &mut R, geom: &CorridorGeometry) -> (f64, f64) {
    let u: f64 = rng.random();
    let v: f64 = rng.random();
    let dx = 0.5 * geom.d1() * (1.0 - u);
    let hx = (geom.h1() + geom.height_span() * v).min(geom.h2());
    (dx, hx)
}

/// Random stream for chunk `chunk` of a run seeded with `seed`.
pub fn chunk_rng(seed: u64, chunk: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(chunk);
    rng
}

/// Per-sample quantities of one (geometry, beam, radio) point, with beam
/// membership tested on elevation slopes instead of angles.
#[derive(Debug, Clone, Copy)]
pub(crate) struct Kernel {
    d1: f64,
    tan_lower: f64,
    tan_upper: f64,
    signal_scale: f64,
    noise: f64,
    threshold: f64,
    case: CaseId,
}

impl Kernel {
    pub(crate) fn new(geom: &CorridorGeometry, beam: &BeamConfig, radio: &RadioConfig) -> Self {
        Self {
            d1: geom.d1(),
            tan_lower: beam.alpha().tan(),
            tan_upper: beam.upper_edge().tan(),
            signal_scale: radio.link_constant() * beam.gain(),
            noise: radio.noise_power(),
            threshold: radio.sinr_threshold(),
            case: classify_case(geom, beam),
        }
    }

    #[inline]
    fn in_beam(&self, hx: f64, horizontal: f64) -> bool {
        hx > self.tan_lower * horizontal && hx < self.tan_upper * horizontal
    }

    /// Serving-beam and neighbour-beam membership.
    #[inline]
    fn coverage(&self, dx: f64, hx: f64) -> (bool, bool) {
        (self.in_beam(hx, dx), self.in_beam(hx, self.d1 - dx))
    }

    #[inline]
    pub(crate) fn exact_sinr(&self, dx: f64, hx: f64) -> f64 {
        let (served, interfered) = self.coverage(dx, hx);
        if !served {
            return 0.0;
        }
        let signal = self.signal_scale / (dx * dx + hx * hx);
        let interference = if interfered {
            let far = self.d1 - dx;
            self.signal_scale / (far * far + hx * hx)
        } else {
            0.0
        };
        signal / (interference + self.noise)
    }

    #[inline]
    fn approx_sinr(&self, dx: f64, hx: f64) -> f64 {
        let (served, interfered) = self.coverage(dx, hx);
        let r1_sq = dx * dx + hx * hx;
        match (self.case, served, interfered) {
            (CaseId::Case1, true, true) => {
                let far = self.d1 - dx;
                (far * far + hx * hx) / r1_sq
            }
            (CaseId::Case1, _, _) => 0.0,
            (_, true, false) => self.signal_scale / (r1_sq * self.noise),
            _ => 0.0,
        }
    }

    #[inline]
    pub(crate) fn in_outage(&self, dx: f64, hx: f64, mode: McMode) -> bool {
        match mode {
            McMode::Exact => self.exact_sinr(dx, hx) < self.threshold,
            McMode::PaperApprox => !self.in_beam(hx, dx),
        }
    }

    #[inline]
    fn sinr(&self, dx: f64, hx: f64, mode: McMode) -> f64 {
        match mode {
            McMode::Exact => self.exact_sinr(dx, hx),
            McMode::PaperApprox => self.approx_sinr(dx, hx),
        }
    }
}

/// Outage indicator of a single position. `Exact` compares the full SINR
/// against the threshold; `PaperApprox` declares outage iff the position is
/// outside the serving beam.
pub fn outage_indicator(
    pos: &UavPosition,
    geom: &CorridorGeometry,
    beam: &BeamConfig,
    radio: &RadioConfig,
    mode: McMode,
) -> bool {
    Kernel::new(geom, beam, radio).in_outage(pos.dx(), pos.hx(), mode)
}

/// SINR sample of a single position under `mode`. In `PaperApprox` mode the
/// regime of `(geom, beam)` decides which regions contribute.
pub fn sinr_sample(
    pos: &UavPosition,
    geom: &CorridorGeometry,
    beam: &BeamConfig,
    radio: &RadioConfig,
    mode: McMode,
) -> f64 {
    Kernel::new(geom, beam, radio).sinr(pos.dx(), pos.hx(), mode)
}

fn estimate<F>(geom: &CorridorGeometry, mc: &McConfig, sample: F) -> Result<McEstimate>
where
    F: Fn(f64, f64) -> f64 + Sync,
{
    mc.validate()?;
    let chunks = mc.samples.div_ceil(CHUNK_SIZE);
    let per_chunk: Vec<Moments> = (0..chunks)
        .into_par_iter()
        .map(|chunk| {
            let start = chunk * CHUNK_SIZE;
            let len = CHUNK_SIZE.min(mc.samples - start);
            let mut rng = chunk_rng(mc.seed, chunk);
            let mut m = Moments::default();
            for _ in 0..len {
                let (dx, hx) = draw(&mut rng, geom);
                m.push(sample(dx, hx));
            }
            m
        })
        .collect();
    Ok(per_chunk
        .into_iter()
        .fold(Moments::default(), Moments::merge)
        .estimate())
}

/// Fraction of sampled positions in outage.
pub fn empirical_outage(
    geom: &CorridorGeometry,
    beam: &BeamConfig,
    radio: &RadioConfig,
    mc: &McConfig,
) -> Result<McEstimate> {
    let kernel = Kernel::new(geom, beam, radio);
    let mode = mc.mode;
    estimate(geom, mc, |dx, hx| {
        if kernel.in_outage(dx, hx, mode) {
            1.0
        } else {
            0.0
        }
    })
}

/// Sample mean of the linear SINR.
pub fn empirical_avg_sinr(
    geom: &CorridorGeometry,
    beam: &BeamConfig,
    radio: &RadioConfig,
    mc: &McConfig,
) -> Result<McEstimate> {
    let kernel = Kernel::new(geom, beam, radio);
    let mode = mc.mode;
    estimate(geom, mc, |dx, hx| kernel.sinr(dx, hx, mode))
}

/// Number of positions, out of `samples` drawn from `seed`, whose `Exact`
/// and `PaperApprox` outage indicators differ.
pub fn indicator_disagreements(
    geom: &CorridorGeometry,
    beam: &BeamConfig,
    radio: &RadioConfig,
    samples: u64,
    seed: u64,
) -> Result<u64> {
    let kernel = Kernel::new(geom, beam, radio);
    let mc = McConfig::new(samples, seed, McMode::Exact)?;
    let est = estimate(geom, &mc, |dx, hx| {
        let exact = kernel.in_outage(dx, hx, McMode::Exact);
        let approx = kernel.in_outage(dx, hx, McMode::PaperApprox);
        if exact != approx {
            1.0
        } else {
            0.0
        }
    })?;
    Ok((est.mean * est.samples as f64).round() as u64)
}
