//! CSV sweeps over uptilt, beamwidth and corridor ceiling.

use std::io::Write;
use std::str::FromStr;

use uptilt_core::analysis::{avg_sinr, outage};
use uptilt_core::geometry::{classify_case, BeamConfig, CorridorGeometry};
use uptilt_core::link_budget::{antenna_gain_from_beamwidth, GainModel, RadioConfig};
use uptilt_core::montecarlo::{empirical_avg_sinr, empirical_outage, McConfig, McMode};

use crate::format::{db_std_error, sig6, to_db};
use crate::CliError;

pub const HEADER: &str = "alpha_deg,beta_deg,h2_m,case,branch,pr_out_analytic,pr_out_mc,pr_out_mc_se,sinr_avg_db_analytic,sinr_avg_db_mc,sinr_avg_db_mc_se";

/// Uptilt grid in degrees. Without `stop` the grid runs to `89 - beta`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AlphaGrid {
    pub start: f64,
    pub stop: Option<f64>,
    pub step: f64,
}

impl AlphaGrid {
    pub fn points(&self, beta_deg: f64) -> Vec<f64> {
        let stop = self.stop.unwrap_or(89.0 - beta_deg);
        let slack = 1e-9 * self.step;
        let mut out = Vec::new();
        let mut i = 0u32;
        loop {
            let a = self.start + f64::from(i) * self.step;
            if a > stop + slack {
                break;
            }
            out.push(a);
            i += 1;
        }
        out
    }
}

/// Which metric columns a sweep fills in.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OutputSet {
    pub outage_analytic: bool,
    pub outage_mc: bool,
    pub avg_sinr_analytic: bool,
    pub avg_sinr_mc: bool,
    pub case_id: bool,
}

impl OutputSet {
    pub const ALL: OutputSet = OutputSet {
        outage_analytic: true,
        outage_mc: true,
        avg_sinr_analytic: true,
        avg_sinr_mc: true,
        case_id: true,
    };

    const NONE: OutputSet = OutputSet {
        outage_analytic: false,
        outage_mc: false,
        avg_sinr_analytic: false,
        avg_sinr_mc: false,
        case_id: false,
    };
}

/// Analytic columns only; Monte Carlo columns are opt-in.
impl Default for OutputSet {
    fn default() -> Self {
        OutputSet {
            outage_analytic: true,
            avg_sinr_analytic: true,
            case_id: true,
            ..OutputSet::NONE
        }
    }
}

impl FromStr for OutputSet {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut set = OutputSet::NONE;
        for name in s.split(',').map(str::trim).filter(|t| !t.is_empty()) {
            match name {
                "all" => set = OutputSet::ALL,
                "outage_analytic" => set.outage_analytic = true,
                "outage_mc" => set.outage_mc = true,
                "avg_sinr_analytic" => set.avg_sinr_analytic = true,
                "avg_sinr_mc" => set.avg_sinr_mc = true,
                "case_id" => set.case_id = true,
                other => return Err(format!("unknown output `{other}`")),
            }
        }
        if set == OutputSet::NONE {
            return Err("no outputs selected".into());
        }
        Ok(set)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepSpec {
    pub alpha_grid: AlphaGrid,
    pub beta_values: Vec<f64>,
    pub h2_values: Vec<f64>,
    pub mc_samples: u64,
    pub mc_seed: u64,
    pub mc_mode: McMode,
    pub gain_model: GainModel,
    pub outputs: OutputSet,
}

impl SweepSpec {
    fn validate(&self) -> Result<(), CliError> {
        let g = &self.alpha_grid;
        if !(g.step > 0.0 && g.step.is_finite()) {
            return Err(CliError::Invalid(format!(
                "alpha step must be positive, got {}",
                g.step
            )));
        }
        if !g.start.is_finite() || g.stop.is_some_and(|s| !s.is_finite()) {
            return Err(CliError::Invalid("alpha grid bounds must be finite".into()));
        }
        if self.beta_values.is_empty() || self.h2_values.is_empty() {
            return Err(CliError::Invalid(
                "sweep needs at least one beta and one h2".into(),
            ));
        }
        if self.beta_values.iter().any(|b| !b.is_finite()) {
            return Err(CliError::Invalid("beamwidths must be finite".into()));
        }
        if self.outputs.outage_mc || self.outputs.avg_sinr_mc {
            McConfig::new(self.mc_samples, self.mc_seed, self.mc_mode)?;
        }
        Ok(())
    }
}

/// Writes the header and one row per `(h2, beta, alpha)`, `alpha` fastest.
/// Infeasible pairs get `infeasible` in the case column and no metrics.
/// A numerical failure stops the sweep after the rows already written and
/// names the failing row. Returns the number of data rows written.
pub fn run_sweep<W: Write>(
    spec: &SweepSpec,
    base: &CorridorGeometry,
    radio: &RadioConfig,
    out: &mut W,
) -> Result<usize, CliError> {
    spec.validate()?;
    let geoms = spec
        .h2_values
        .iter()
        .map(|&h2| CorridorGeometry::new(base.d1(), base.h1(), h2))
        .collect::<Result<Vec<_>, _>>()?;

    writeln!(out, "{HEADER}")?;
    let mut rows = 0;
    for geom in &geoms {
        for &beta_deg in &spec.beta_values {
            for alpha_deg in spec.alpha_grid.points(beta_deg) {
                let cells = row(spec, geom, radio, alpha_deg, beta_deg).map_err(|e| {
                    let ctx = format!(
                        "row {} (alpha {} deg, beta {} deg, h2 {} m): {e}",
                        rows + 1,
                        sig6(alpha_deg),
                        sig6(beta_deg),
                        sig6(geom.h2())
                    );
                    match e {
                        CliError::Numerical(_) => CliError::Numerical(ctx),
                        CliError::Invalid(_) => CliError::Invalid(ctx),
                        io => io,
                    }
                });
                let cells = match cells {
                    Ok(c) => c,
                    Err(e) => {
                        out.flush()?;
                        return Err(e);
                    }
                };
                writeln!(out, "{}", cells.join(","))?;
                rows += 1;
            }
        }
    }
    out.flush()?;
    Ok(rows)
}

fn row(
    spec: &SweepSpec,
    geom: &CorridorGeometry,
    radio: &RadioConfig,
    alpha_deg: f64,
    beta_deg: f64,
) -> Result<Vec<String>, CliError> {
    let mut cells = vec![String::new(); 11];
    cells[0] = sig6(alpha_deg);
    cells[1] = sig6(beta_deg);
    cells[2] = sig6(geom.h2());

    let beam = antenna_gain_from_beamwidth(beta_deg, spec.gain_model)
        .and_then(|g| BeamConfig::new(alpha_deg.to_radians(), beta_deg.to_radians(), g));
    let Ok(beam) = beam else {
        cells[3] = "infeasible".into();
        return Ok(cells);
    };

    let o = spec.outputs;
    let analytic_outage = outage(geom, &beam);
    if o.case_id {
        cells[3] = classify_case(geom, &beam).label().into();
        cells[4] = analytic_outage.branch.label().into();
    }
    if o.outage_analytic {
        cells[5] = sig6(analytic_outage.probability);
    }
    let mc = McConfig {
        samples: spec.mc_samples,
        seed: spec.mc_seed,
        mode: spec.mc_mode,
    };
    if o.outage_mc {
        let est = empirical_outage(geom, &beam, radio, &mc)?;
        cells[6] = sig6(est.mean);
        cells[7] = sig6(est.std_error);
    }
    if o.avg_sinr_analytic {
        cells[8] = sig6(to_db(avg_sinr(geom, &beam, radio)?.value));
    }
    if o.avg_sinr_mc {
        let est = empirical_avg_sinr(geom, &beam, radio, &mc)?;
        cells[9] = sig6(to_db(est.mean));
        cells[10] = sig6(db_std_error(est.mean, est.std_error));
    }
    Ok(cells)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec(start: f64, stop: f64, beta: f64) -> SweepSpec {
        SweepSpec {
            alpha_grid: AlphaGrid {
                start,
                stop: Some(stop),
                step: 0.5,
            },
            beta_values: vec![beta],
            h2_values: vec![300.0],
            mc_samples: 10_000,
            mc_seed: 0,
            mc_mode: McMode::Exact,
            gain_model: GainModel::Decibel,
            outputs: OutputSet::default(),
        }
    }

    fn sweep(spec: &SweepSpec) -> String {
        let base = CorridorGeometry::new(1000.0, 100.0, 300.0).unwrap();
        let mut buf = Vec::new();
        run_sweep(spec, &base, &RadioConfig::default(), &mut buf).unwrap();
        String::from_utf8(buf).unwrap()
    }

    #[test]
    fn default_grid_runs_to_89_minus_beta() {
        let g = AlphaGrid {
            start: 1.0,
            stop: None,
            step: 0.5,
        };
        let p = g.points(50.0);
        assert_eq!(p.len(), 77);
        assert_eq!(p[0], 1.0);
        assert_eq!(*p.last().unwrap(), 39.0);
        // Accumulated steps would drift; indices do not.
        let g = AlphaGrid {
            start: 0.1,
            stop: Some(1.0),
            step: 0.1,
        };
        assert_eq!(g.points(10.0).len(), 10);
    }

    #[test]
    fn reference_row_values() {
        let csv = sweep(&spec(10.0, 10.0, 50.0));
        let mut lines = csv.lines();
        assert_eq!(lines.next(), Some(HEADER));
        let row: Vec<&str> = lines.next().unwrap().split(',').collect();
        assert_eq!(row[..6], ["10", "50", "300", "case2", "c12", "0.23094"]);
        assert_eq!(row[6], "");
        assert_eq!(row[8], "23.158");
        assert!(lines.next().is_none());
    }

    #[test]
    fn infeasible_rows_are_flagged() {
        let csv = sweep(&spec(39.5, 40.5, 50.0));
        let rows: Vec<&str> = csv.lines().skip(1).collect();
        assert_eq!(rows.len(), 3);
        assert!(rows[0].starts_with("39.5,50,300,case5,c5,"));
        assert_eq!(rows[1], "40,50,300,infeasible,,,,,,,");
        assert_eq!(rows[2], "40.5,50,300,infeasible,,,,,,,");
    }

    #[test]
    fn outputs_parse() {
        assert_eq!("all".parse::<OutputSet>().unwrap(), OutputSet::ALL);
        let s: OutputSet = "outage_mc, case_id".parse().unwrap();
        assert!(s.outage_mc && s.case_id && !s.outage_analytic);
        assert!("".parse::<OutputSet>().is_err());
        assert!("pr_out".parse::<OutputSet>().is_err());
    }

    #[test]
    fn bad_specs_are_rejected() {
        let base = CorridorGeometry::new(1000.0, 100.0, 300.0).unwrap();
        let radio = RadioConfig::default();
        let mut s = spec(1.0, 2.0, 50.0);
        s.alpha_grid.step = 0.0;
        assert!(matches!(
            run_sweep(&s, &base, &radio, &mut Vec::new()),
            Err(CliError::Invalid(_))
        ));
        let mut s = spec(1.0, 2.0, 50.0);
        s.h2_values = vec![50.0];
        assert!(matches!(
            run_sweep(&s, &base, &radio, &mut Vec::new()),
            Err(CliError::Invalid(_))
        ));
        let mut s = spec(1.0, 2.0, 50.0);
        s.outputs = OutputSet::ALL;
        s.mc_samples = 0;
        assert!(matches!(
            run_sweep(&s, &base, &radio, &mut Vec::new()),
            Err(CliError::Invalid(_))
        ));
    }
}
