//! Single-point commands. Each returns a [`Report`] of `key: value` lines.

use std::fmt;

use uptilt_core::analysis::{avg_sinr, outage};
use uptilt_core::geometry::{classify_case, crossing_heights, upper_edge_center_height};
use uptilt_core::montecarlo::{empirical_avg_sinr, empirical_outage, McMode};
use uptilt_core::optimizer::optimize_uptilt;

use crate::format::{db_std_error, sig6, to_db};
use crate::settings::Settings;
use crate::CliError;

#[derive(Debug, Clone, Default, PartialEq)]
pub struct Report(pub Vec<(&'static str, String)>);

impl Report {
    fn push(&mut self, key: &'static str, value: impl Into<String>) {
        self.0.push((key, value.into()));
    }

    fn num(&mut self, key: &'static str, value: f64) {
        self.push(key, sig6(value));
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.0
            .iter()
            .find(|(k, _)| *k == key)
            .map(|(_, v)| v.as_str())
    }
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, v) in &self.0 {
            writeln!(f, "{k}: {v}")?;
        }
        Ok(())
    }
}

fn mode_label(mode: McMode) -> &'static str {
    match mode {
        McMode::Exact => "exact",
        McMode::PaperApprox => "paper",
    }
}

/// Coverage regime and the crossing heights that decide it.
pub fn run_classify(s: &Settings) -> Result<Report, CliError> {
    let (geom, beam) = (s.geometry()?, s.beam()?);
    let c = crossing_heights(&geom, &beam);
    let mut r = Report::default();
    r.push("case", classify_case(&geom, &beam).label());
    r.push("branch", outage(&geom, &beam).branch.label());
    r.num("h3_m", c.center);
    r.num("h4_m", c.side);
    r.num("h5_m", upper_edge_center_height(&geom, &beam));
    Ok(r)
}

pub fn run_outage(s: &Settings) -> Result<Report, CliError> {
    let (geom, beam) = (s.geometry()?, s.beam()?);
    let o = outage(&geom, &beam);
    let mut r = Report::default();
    r.push("case", classify_case(&geom, &beam).label());
    r.push("branch", o.branch.label());
    r.num("pr_out", o.probability);
    r.num("d_pr_out_d_alpha_per_rad", o.derivative_wrt_alpha);
    Ok(r)
}

pub fn run_avg_sinr(s: &Settings) -> Result<Report, CliError> {
    let (geom, beam, radio) = (s.geometry()?, s.beam()?, s.radio()?);
    let a = avg_sinr(&geom, &beam, &radio)?;
    let mut r = Report::default();
    r.push("case", a.case.label());
    r.num("sinr_avg", a.value);
    r.num("sinr_avg_db", to_db(a.value));
    r.num("quadrature_error", a.quadrature_error_estimate);
    Ok(r)
}

/// Monte Carlo estimates next to the closed forms.
pub fn run_montecarlo(s: &Settings) -> Result<Report, CliError> {
    let (geom, beam, radio, mc) = (s.geometry()?, s.beam()?, s.radio()?, s.mc()?);
    let po = empirical_outage(&geom, &beam, &radio, &mc)?;
    let ps = empirical_avg_sinr(&geom, &beam, &radio, &mc)?;
    let analytic = avg_sinr(&geom, &beam, &radio)?;
    let mut r = Report::default();
    r.push("mode", mode_label(mc.mode));
    r.push("samples", mc.samples.to_string());
    r.push("seed", mc.seed.to_string());
    r.push("case", analytic.case.label());
    r.num("pr_out_mc", po.mean);
    r.num("pr_out_mc_se", po.std_error);
    r.num("pr_out_analytic", outage(&geom, &beam).probability);
    r.num("sinr_avg_mc", ps.mean);
    r.num("sinr_avg_mc_se", ps.std_error);
    r.num("sinr_avg_db_mc", to_db(ps.mean));
    r.num("sinr_avg_db_mc_se", db_std_error(ps.mean, ps.std_error));
    r.num("sinr_avg_db_analytic", to_db(analytic.value));
    Ok(r)
}

/// Optimal uptilt for `--beta`/`--h2`, confirmed by Monte Carlo at the
/// optimum.
pub fn run_optimize(s: &Settings) -> Result<Report, CliError> {
    let (geom, radio, mc) = (s.geometry()?, s.radio()?, s.mc()?);
    let template = s.beam_template()?;
    let res = optimize_uptilt(&geom, &template, &s.optimize_options()?)?;
    let beam = template.with_alpha(res.alpha_star)?;
    let est = empirical_outage(&geom, &beam, &radio, &mc)?;
    let within = (est.mean - res.outage_at_star).abs() <= 3.0 * est.std_error;

    let mut r = Report::default();
    r.push("method", res.method.to_string());
    r.num("beta_deg", s.beta_deg);
    r.num("h2_m", geom.h2());
    r.num("alpha_star_deg", res.alpha_star.to_degrees());
    r.num("pr_out_min", res.outage_at_star);
    r.push("case", classify_case(&geom, &beam).label());
    r.push("branch", outage(&geom, &beam).branch.label());
    r.push("at_boundary", res.at_boundary.to_string());
    r.push("iterations", res.iterations.to_string());
    r.push("mc_mode", mode_label(mc.mode));
    r.push("mc_samples", mc.samples.to_string());
    r.num("pr_out_mc", est.mean);
    r.num("pr_out_mc_se", est.std_error);
    r.push("mc_within_3sigma", within.to_string());
    Ok(r)
}
