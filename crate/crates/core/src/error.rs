use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid corridor geometry: {0}")]
    InvalidGeometry(String),

    #[error("infeasible beam: {0}")]
    InfeasibleBeam(String),

    #[error("position out of domain: {0}")]
    OutOfDomain(String),

    #[error("invalid radio parameter: {0}")]
    InvalidRadio(String),

    /// A closed form was evaluated outside the regime it was derived for.
    #[error("{formula} is only valid when {condition}")]
    BranchMisuse {
        formula: &'static str,
        condition: &'static str,
    },

    /// The lower edge of the neighbouring beam never reaches the given
    /// altitude on the serving side of the corridor.
    #[error("no crossing angle at hx = {hx}: d1/hx = {ratio} <= cot(alpha) = {cot_alpha}")]
    NoCrossing { hx: f64, ratio: f64, cot_alpha: f64 },

    #[error("quadrature did not converge on [{a}, {b}]: value {value}, error estimate {error}")]
    Quadrature {
        a: f64,
        b: f64,
        value: f64,
        error: f64,
    },

    #[error("invalid Monte Carlo configuration: {0}")]
    InvalidMonteCarlo(String),

    #[error("empty feasible uptilt interval: {0}")]
    EmptyInterval(String),
}
