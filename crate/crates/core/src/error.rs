use thiserror::Error;

/// Errors raised by the physics and optimization layers.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("negative channel rate {0}")]
    NegativeRate(f64),

    #[error("steady state is not unique (Liouvillian null space has dimension > 1)")]
    DegenerateSteadyState,

    #[error("numerical failure: {0}")]
    NumericalFailure(String),

    #[error("non-positive transition energy {0}")]
    NonPositiveEnergy(f64),

    #[error("non-positive temperature {0}")]
    NonPositiveTemperature(f64),

    #[error("invalid device: {0}")]
    InvalidSpec(String),

    #[error("invalid coupling: {0}")]
    InvalidCoupling(String),

    #[error("invalid thermal scenario: {0}")]
    InvalidScenario(String),

    #[error("no closed form for detuned device B; use the numeric engine")]
    NoAnalyticForm,

    #[error("rectification undefined: no thermal bias at any transition energy")]
    EquilibriumUndefined,

    #[error("no thermal bias: both heat currents vanish")]
    NoThermalBias,

    #[error("alpha {0} outside [0, 1]")]
    AlphaOutOfRange(f64),

    #[error("invalid parameter box: {0}")]
    InvalidBox(String),

    #[error("all {evaluated} evaluated points were infeasible")]
    AllInfeasible { evaluated: usize },

    #[error("no evaluated point reaches J >= {j_min}")]
    Infeasible { j_min: f64 },
}

impl Error {
    /// True for failures of the numerical machinery itself, as opposed to
    /// ill-posed physical input.
    pub fn is_numerical(&self) -> bool {
        matches!(self, Error::NumericalFailure(_))
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
