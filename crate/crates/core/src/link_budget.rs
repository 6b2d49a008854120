//! Free-space link budget: radio parameters, beam gain and the SINR of a
//! drone position.
//!
//! Decibel inputs are converted once, in [`RadioConfig::new`] and the free
//! functions below. Everything downstream works in linear units.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::geometry::{elevation_angles, slant_ranges, BeamConfig, CorridorGeometry, UavPosition};

/// Speed of light in vacuum, m/s.
pub const SPEED_OF_LIGHT: f64 = 299_792_458.0;

pub fn db_to_linear(db: f64) -> f64 {
    10f64.powf(db / 10.0)
}

pub fn linear_to_db(linear: f64) -> f64 {
    10.0 * linear.log10()
}

pub fn dbm_to_watts(dbm: f64) -> f64 {
    db_to_linear(dbm - 30.0)
}

/// Thermal noise over `bandwidth` Hz with a receiver noise figure, in watts.
/// The dBm sum is `thermal_density + 10 log10(bandwidth) + noise_figure`.
pub fn noise_power(thermal_density_dbm_hz: f64, bandwidth_hz: f64, noise_figure_db: f64) -> f64 {
    dbm_to_watts(thermal_density_dbm_hz + 10.0 * bandwidth_hz.log10() + noise_figure_db)
}

/// Free-space received-power coefficient `P lambda^2 / (16 pi^2)`, in W m^2.
pub fn link_constant(tx_power_watts: f64, wavelength_m: f64) -> Result<f64> {
    if !(tx_power_watts > 0.0 && wavelength_m > 0.0) {
        return Err(Error::InvalidRadio(format!(
            "transmit power and wavelength must be positive, got {tx_power_watts} W, {wavelength_m} m"
        )));
    }
    Ok(tx_power_watts * wavelength_m * wavelength_m / (16.0 * PI * PI))
}

/// How to read the empirical "297.6 / beta" maximum-gain rule.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum GainModel {
    /// `297.6 / beta_deg` is a gain in dB.
    #[default]
    Decibel,
    /// `297.6 / beta_deg` is already a linear gain.
    Linear,
}

/// Maximum antenna gain for a beamwidth given in degrees, returned linear.
pub fn antenna_gain_from_beamwidth(beta_deg: f64, model: GainModel) -> Result<f64> {
    if !(beta_deg > 0.0 && beta_deg < 90.0) {
        return Err(Error::InfeasibleBeam(format!(
            "beamwidth must be in (0, 90) deg, got {beta_deg}"
        )));
    }
    let rule = 297.6 / beta_deg;
    Ok(match model {
        GainModel::Decibel => db_to_linear(rule),
        GainModel::Linear => rule,
    })
}

/// Rectangular pattern: full gain strictly inside `(alpha, alpha + beta)`.
pub fn beam_gain_at(theta: f64, beam: &BeamConfig) -> f64 {
    if beam.alpha() < theta && theta < beam.upper_edge() {
        beam.gain()
    } else {
        0.0
    }
}

/// Radio inputs as they are usually quoted.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RadioParams {
    pub tx_power_dbm: f64,
    pub carrier_frequency_hz: f64,
    pub bandwidth_hz: f64,
    pub noise_figure_db: f64,
    pub thermal_noise_density_dbm_hz: f64,
    pub sinr_threshold_db: f64,
}

impl Default for RadioParams {
    /// 30 dBm at 3 GHz over 100 MHz, 9 dB noise figure, -174 dBm/Hz thermal
    /// density and a -3 dB SINR threshold.
    fn default() -> Self {
        Self {
            tx_power_dbm: 30.0,
            carrier_frequency_hz: 3e9,
            bandwidth_hz: 100e6,
            noise_figure_db: 9.0,
            thermal_noise_density_dbm_hz: -174.0,
            sinr_threshold_db: -3.0,
        }
    }
}

/// Linear-domain radio configuration shared by both stations.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RadioConfig {
    params: RadioParams,
    tx_power: f64,
    wavelength: f64,
    noise_power: f64,
    sinr_threshold: f64,
    link_constant: f64,
}

impl RadioConfig {
    pub fn new(params: RadioParams) -> Result<Self> {
        if !(params.carrier_frequency_hz > 0.0 && params.carrier_frequency_hz.is_finite()) {
            return Err(Error::InvalidRadio(format!(
                "carrier frequency must be positive, got {} Hz",
                params.carrier_frequency_hz
            )));
        }
        if !(params.bandwidth_hz > 0.0 && params.bandwidth_hz.is_finite()) {
            return Err(Error::InvalidRadio(format!(
                "bandwidth must be positive, got {} Hz",
                params.bandwidth_hz
            )));
        }
        let finite = [
            params.tx_power_dbm,
            params.noise_figure_db,
            params.thermal_noise_density_dbm_hz,
            params.sinr_threshold_db,
        ];
        if finite.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidRadio(format!(
                "non-finite dB value in {params:?}"
            )));
        }
        let tx_power = dbm_to_watts(params.tx_power_dbm);
        let wavelength = SPEED_OF_LIGHT / params.carrier_frequency_hz;
        let noise_power = noise_power(
            params.thermal_noise_density_dbm_hz,
            params.bandwidth_hz,
            params.noise_figure_db,
        );
        let link_constant = link_constant(tx_power, wavelength)?;
        Ok(Self {
            params,
            tx_power,
            wavelength,
            noise_power,
            sinr_threshold: db_to_linear(params.sinr_threshold_db),
            link_constant,
        })
    }

    pub fn params(&self) -> &RadioParams {
        &self.params
    }

    /// Watts.
    pub fn tx_power(&self) -> f64 {
        self.tx_power
    }

    /// Metres.
    pub fn wavelength(&self) -> f64 {
        self.wavelength
    }

    /// Watts.
    pub fn noise_power(&self) -> f64 {
        self.noise_power
    }

    /// Linear outage threshold.
    pub fn sinr_threshold(&self) -> f64 {
        self.sinr_threshold
    }

    pub fn link_constant(&self) -> f64 {
        self.link_constant
    }

    /// `k / N0`, the linear SNR of an isotropic link at 1 m.
    pub fn snr_at_unit_range(&self) -> f64 {
        self.link_constant / self.noise_power
    }
}

impl Default for RadioConfig {
    fn default() -> Self {
        Self::new(RadioParams::default()).expect("default radio parameters are valid")
    }
}

/// Exact SINR at `pos` with the neighbouring station as the only interferer.
///
/// Returns exactly zero when the drone is outside its serving beam.
pub fn sinr(
    pos: &UavPosition,
    geom: &CorridorGeometry,
    beam: &BeamConfig,
    radio: &RadioConfig,
) -> Result<f64> {
    let (theta1, theta2) = elevation_angles(pos, geom)?;
    let g1 = beam_gain_at(theta1, beam);
    if g1 == 0.0 {
        return Ok(0.0);
    }
    let g2 = beam_gain_at(theta2, beam);
    let (r1, r2) = slant_ranges(pos.hx(), theta1, theta2);
    let k = radio.link_constant();
    let signal = k * g1 / (r1 * r1);
    let interference = k * g2 / (r2 * r2);
    Ok(signal / (interference + radio.noise_power()))
}
