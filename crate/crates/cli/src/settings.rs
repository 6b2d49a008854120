//! Parameter resolution: command-line flags over a config file over the
//! built-in defaults.

use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use uptilt_core::geometry::{BeamConfig, CorridorGeometry};
use uptilt_core::link_budget::{antenna_gain_from_beamwidth, GainModel, RadioConfig, RadioParams};
use uptilt_core::montecarlo::{McConfig, McMode, DEFAULT_SAMPLES};
use uptilt_core::optimizer::{Method, OptimizeOptions};

use crate::sweep::{AlphaGrid, OutputSet, SweepSpec};
use crate::CliError;

/// `dB` or `linear` reading of the gain rule.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GainChoice(pub GainModel);

impl FromStr for GainChoice {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "db" => Ok(Self(GainModel::Decibel)),
            "linear" => Ok(Self(GainModel::Linear)),
            _ => Err(format!("unknown gain model `{s}` (expected dB or linear)")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ModeChoice(pub McMode);

impl FromStr for ModeChoice {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "exact" => Ok(Self(McMode::Exact)),
            "paper" => Ok(Self(McMode::PaperApprox)),
            _ => Err(format!("unknown mode `{s}` (expected exact or paper)")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MethodChoice(pub Method);

impl FromStr for MethodChoice {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "golden" | "golden-section" => Ok(Self(Method::GoldenSection)),
            "bisection" | "derivative-bisection" => Ok(Self(Method::DerivativeBisection)),
            "grid" => Ok(Self(Method::Grid)),
            _ => Err(format!(
                "unknown method `{s}` (expected golden, bisection or grid)"
            )),
        }
    }
}

/// Sample count; accepts `1000000` as well as `1e6`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Count(pub u64);

impl FromStr for Count {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if let Ok(n) = s.parse::<u64>() {
            return Ok(Self(n));
        }
        let x: f64 = s.parse().map_err(|_| format!("`{s}` is not a count"))?;
        if x >= 0.0 && x.fract() == 0.0 && x <= u64::MAX as f64 {
            Ok(Self(x as u64))
        } else {
            Err(format!("`{s}` is not a whole non-negative count"))
        }
    }
}

/// Comma-separated list.
#[derive(Debug, Clone, PartialEq)]
pub struct List<T>(pub Vec<T>);

impl<T: FromStr> FromStr for List<T>
where
    T::Err: fmt::Display,
{
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let items = s
            .split(',')
            .map(str::trim)
            .filter(|t| !t.is_empty())
            .map(|t| t.parse::<T>().map_err(|e| format!("`{t}`: {e}")))
            .collect::<Result<Vec<_>, _>>()?;
        if items.is_empty() {
            return Err("empty list".into());
        }
        Ok(Self(items))
    }
}

/// Every tunable, each optional. Filled from flags or from a config file and
/// layered with [`Overrides::or`].
#[derive(Debug, Clone, Default, clap::Args)]
pub struct Overrides {
    /// Inter-site distance [m] (default 1000)
    #[arg(long, value_name = "M")]
    pub d1: Option<f64>,
    /// Corridor floor [m] (default 100)
    #[arg(long, value_name = "M")]
    pub h1: Option<f64>,
    /// Corridor ceiling [m] (default 300)
    #[arg(long, value_name = "M")]
    pub h2: Option<f64>,
    /// Uptilt angle [deg]
    #[arg(long, value_name = "DEG")]
    pub alpha: Option<f64>,
    /// Beamwidth [deg] (default 50)
    #[arg(long, value_name = "DEG")]
    pub beta: Option<f64>,
    /// Transmit power [dBm] (default 30)
    #[arg(long, value_name = "DBM", allow_negative_numbers = true)]
    pub tx_dbm: Option<f64>,
    /// Carrier frequency [GHz] (default 3)
    #[arg(long, value_name = "GHZ")]
    pub freq_ghz: Option<f64>,
    /// Bandwidth [MHz] (default 100)
    #[arg(long, value_name = "MHZ")]
    pub bw_mhz: Option<f64>,
    /// Receiver noise figure [dB] (default 9)
    #[arg(long, value_name = "DB", allow_negative_numbers = true)]
    pub nf_db: Option<f64>,
    /// SINR threshold [dB] (default -3)
    #[arg(long, value_name = "DB", allow_negative_numbers = true)]
    pub tau_db: Option<f64>,
    /// Reading of the 297.6/beta gain rule: dB or linear (default dB)
    #[arg(long, value_name = "MODEL")]
    pub gain_model: Option<GainChoice>,
    /// Monte Carlo samples (default 1e6)
    #[arg(long, value_name = "N")]
    pub samples: Option<Count>,
    /// Monte Carlo seed (default 0)
    #[arg(long, value_name = "U64")]
    pub seed: Option<u64>,
    /// Monte Carlo mode: exact or paper (default exact)
    #[arg(long, value_name = "MODE")]
    pub mode: Option<ModeChoice>,
    /// Output file (default stdout)
    #[arg(long, value_name = "PATH")]
    pub out: Option<PathBuf>,
    /// Sweep: first uptilt [deg] (default 1)
    #[arg(long, value_name = "DEG")]
    pub alpha_start: Option<f64>,
    /// Sweep: last uptilt [deg] (default 89 - beta)
    #[arg(long, value_name = "DEG")]
    pub alpha_stop: Option<f64>,
    /// Sweep: uptilt step [deg] (default 0.5)
    #[arg(long, value_name = "DEG")]
    pub alpha_step: Option<f64>,
    /// Sweep: beamwidths [deg], comma separated (default: --beta)
    #[arg(long, value_name = "LIST")]
    pub betas: Option<List<f64>>,
    /// Sweep: ceilings [m], comma separated (default: --h2)
    #[arg(long, value_name = "LIST")]
    pub h2s: Option<List<f64>>,
    /// Sweep: columns to fill, comma separated from outage_analytic,
    /// outage_mc, avg_sinr_analytic, avg_sinr_mc, case_id, or `all`
    #[arg(long, value_name = "LIST")]
    pub outputs: Option<OutputSet>,
    /// Optimizer: golden, bisection or grid (default golden)
    #[arg(long, value_name = "METHOD")]
    pub method: Option<MethodChoice>,
    /// Optimizer: distance kept from the ends of the uptilt range [deg]
    /// (default 0.05)
    #[arg(long, value_name = "DEG")]
    pub margin_deg: Option<f64>,
}

impl Overrides {
    /// Field-wise: values set in `self` win over `lower`.
    pub fn or(self, lower: Overrides) -> Overrides {
        Overrides {
            d1: self.d1.or(lower.d1),
            h1: self.h1.or(lower.h1),
            h2: self.h2.or(lower.h2),
            alpha: self.alpha.or(lower.alpha),
            beta: self.beta.or(lower.beta),
            tx_dbm: self.tx_dbm.or(lower.tx_dbm),
            freq_ghz: self.freq_ghz.or(lower.freq_ghz),
            bw_mhz: self.bw_mhz.or(lower.bw_mhz),
            nf_db: self.nf_db.or(lower.nf_db),
            tau_db: self.tau_db.or(lower.tau_db),
            gain_model: self.gain_model.or(lower.gain_model),
            samples: self.samples.or(lower.samples),
            seed: self.seed.or(lower.seed),
            mode: self.mode.or(lower.mode),
            out: self.out.or(lower.out),
            alpha_start: self.alpha_start.or(lower.alpha_start),
            alpha_stop: self.alpha_stop.or(lower.alpha_stop),
            alpha_step: self.alpha_step.or(lower.alpha_step),
            betas: self.betas.or(lower.betas),
            h2s: self.h2s.or(lower.h2s),
            outputs: self.outputs.or(lower.outputs),
            method: self.method.or(lower.method),
            margin_deg: self.margin_deg.or(lower.margin_deg),
        }
    }

    /// Parses config-file text: one `key = value` per line, `#` starts a
    /// comment. Keys are the long flag names; dashes and underscores are
    /// ignored, so `tx-dbm`, `tx_dbm` and `txdbm` are the same key.
    pub fn from_config_str(text: &str) -> Result<Overrides, CliError> {
        let mut o = Overrides::default();
        for (n, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let at = |msg: String| CliError::Invalid(format!("config line {}: {msg}", n + 1));
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| at(format!("expected key = value, got `{line}`")))?;
            let key: String = key
                .trim()
                .chars()
                .filter(|c| *c != '-' && *c != '_')
                .collect::<String>()
                .to_ascii_lowercase();
            let value = value.trim();
            fn parse<T: FromStr>(key: &str, value: &str) -> Result<Option<T>, String>
            where
                T::Err: fmt::Display,
            {
                value
                    .parse::<T>()
                    .map(Some)
                    .map_err(|e| format!("bad value for {key}: {e}"))
            }
            let res = match key.as_str() {
                "d1" => parse(&key, value).map(|v| o.d1 = v),
                "h1" => parse(&key, value).map(|v| o.h1 = v),
                "h2" => parse(&key, value).map(|v| o.h2 = v),
                "alpha" => parse(&key, value).map(|v| o.alpha = v),
                "beta" => parse(&key, value).map(|v| o.beta = v),
                "txdbm" => parse(&key, value).map(|v| o.tx_dbm = v),
                "freqghz" => parse(&key, value).map(|v| o.freq_ghz = v),
                "bwmhz" => parse(&key, value).map(|v| o.bw_mhz = v),
                "nfdb" => parse(&key, value).map(|v| o.nf_db = v),
                "taudb" => parse(&key, value).map(|v| o.tau_db = v),
                "gainmodel" => parse(&key, value).map(|v| o.gain_model = v),
                "samples" => parse(&key, value).map(|v| o.samples = v),
                "seed" => parse(&key, value).map(|v| o.seed = v),
                "mode" => parse(&key, value).map(|v| o.mode = v),
                "out" => parse(&key, value).map(|v| o.out = v),
                "alphastart" => parse(&key, value).map(|v| o.alpha_start = v),
                "alphastop" => parse(&key, value).map(|v| o.alpha_stop = v),
                "alphastep" => parse(&key, value).map(|v| o.alpha_step = v),
                "betas" => parse(&key, value).map(|v| o.betas = v),
                "h2s" => parse(&key, value).map(|v| o.h2s = v),
                "outputs" => parse(&key, value).map(|v| o.outputs = v),
                "method" => parse(&key, value).map(|v| o.method = v),
                "margindeg" => parse(&key, value).map(|v| o.margin_deg = v),
                _ => Err(format!("unknown key `{}`", key)),
            };
            res.map_err(at)?;
        }
        Ok(o)
    }

    pub fn from_config_file(path: &Path) -> Result<Overrides, CliError> {
        let text = std::fs::read_to_string(path).map_err(|e| {
            CliError::Invalid(format!("cannot read config {}: {e}", path.display()))
        })?;
        Self::from_config_str(&text)
    }
}

/// Fully resolved parameters.
#[derive(Debug, Clone, PartialEq)]
pub struct Settings {
    pub d1: f64,
    pub h1: f64,
    pub h2: f64,
    pub alpha_deg: Option<f64>,
    pub beta_deg: f64,
    pub radio: RadioParams,
    pub gain_model: GainModel,
    pub samples: u64,
    pub seed: u64,
    pub mode: McMode,
    pub out: Option<PathBuf>,
    pub alpha_grid: AlphaGrid,
    pub betas: Vec<f64>,
    pub h2s: Vec<f64>,
    pub outputs: OutputSet,
    pub method: Method,
    pub margin_deg: f64,
}

impl Default for Settings {
    fn default() -> Self {
        Settings::resolve(Overrides::default())
    }
}

impl Settings {
    /// Fills every unset value with its default.
    pub fn resolve(o: Overrides) -> Settings {
        let radio = RadioParams::default();
        let beta_deg = o.beta.unwrap_or(50.0);
        let h2 = o.h2.unwrap_or(300.0);
        Settings {
            d1: o.d1.unwrap_or(1000.0),
            h1: o.h1.unwrap_or(100.0),
            h2,
            alpha_deg: o.alpha,
            beta_deg,
            radio: RadioParams {
                tx_power_dbm: o.tx_dbm.unwrap_or(radio.tx_power_dbm),
                carrier_frequency_hz: o.freq_ghz.map_or(radio.carrier_frequency_hz, |f| f * 1e9),
                bandwidth_hz: o.bw_mhz.map_or(radio.bandwidth_hz, |b| b * 1e6),
                noise_figure_db: o.nf_db.unwrap_or(radio.noise_figure_db),
                sinr_threshold_db: o.tau_db.unwrap_or(radio.sinr_threshold_db),
                ..radio
            },
            gain_model: o.gain_model.map_or(GainModel::Decibel, |g| g.0),
            samples: o.samples.map_or(DEFAULT_SAMPLES, |c| c.0),
            seed: o.seed.unwrap_or(0),
            mode: o.mode.map_or(McMode::Exact, |m| m.0),
            out: o.out,
            alpha_grid: AlphaGrid {
                start: o.alpha_start.unwrap_or(1.0),
                stop: o.alpha_stop,
                step: o.alpha_step.unwrap_or(0.5),
            },
            betas: o.betas.map_or_else(|| vec![beta_deg], |l| l.0),
            h2s: o.h2s.map_or_else(|| vec![h2], |l| l.0),
            outputs: o.outputs.unwrap_or_default(),
            method: o.method.map_or(Method::GoldenSection, |m| m.0),
            margin_deg: o.margin_deg.unwrap_or(0.05),
        }
    }

    pub fn geometry(&self) -> Result<CorridorGeometry, CliError> {
        Ok(CorridorGeometry::new(self.d1, self.h1, self.h2)?)
    }

    pub fn radio(&self) -> Result<RadioConfig, CliError> {
        Ok(RadioConfig::new(self.radio)?)
    }

    /// Beam at `--alpha`/`--beta`; fails when either is missing or the pair
    /// is infeasible.
    pub fn beam(&self) -> Result<BeamConfig, CliError> {
        let alpha = self
            .alpha_deg
            .ok_or_else(|| CliError::Invalid("--alpha is required".into()))?;
        let gain = antenna_gain_from_beamwidth(self.beta_deg, self.gain_model)?;
        Ok(BeamConfig::new(
            alpha.to_radians(),
            self.beta_deg.to_radians(),
            gain,
        )?)
    }

    /// Beam template for the optimizer; the uptilt is a placeholder.
    pub fn beam_template(&self) -> Result<BeamConfig, CliError> {
        let gain = antenna_gain_from_beamwidth(self.beta_deg, self.gain_model)?;
        let beta = self.beta_deg.to_radians();
        let alpha = 0.5 * (std::f64::consts::FRAC_PI_2 - beta);
        Ok(BeamConfig::new(alpha, beta, gain)?)
    }

    pub fn mc(&self) -> Result<McConfig, CliError> {
        Ok(McConfig::new(self.samples, self.seed, self.mode)?)
    }

    pub fn optimize_options(&self) -> Result<OptimizeOptions, CliError> {
        if !(self.margin_deg >= 0.0) {
            return Err(CliError::Invalid(format!(
                "margin must be non-negative, got {} deg",
                self.margin_deg
            )));
        }
        Ok(OptimizeOptions {
            method: self.method,
            margin: self.margin_deg.to_radians(),
        })
    }

    pub fn sweep_spec(&self) -> SweepSpec {
        SweepSpec {
            alpha_grid: self.alpha_grid,
            beta_values: self.betas.clone(),
            h2_values: self.h2s.clone(),
            mc_samples: self.samples,
            mc_seed: self.seed,
            mc_mode: self.mode,
            gain_model: self.gain_model,
            outputs: self.outputs,
        }
    }
}
