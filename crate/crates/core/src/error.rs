use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("strain outside weak-field regime: |h_plus| = {0:e} (must be < 0.1)")]
    WeakField(f64),

    #[error("invalid parameter `{name}` = {value:e}: must be {requirement}")]
    InvalidParameter {
        name: &'static str,
        value: f64,
        requirement: &'static str,
    },

    #[error("trap resonant with the gravitational wave (omega_t = omega_g = {0:e} rad/s)")]
    TrapResonance(f64),

    #[error("pulse sequence: {0}")]
    Sequence(String),

    #[error("open sequence in strict mode: {0}")]
    OpenSequence(String),

    #[error("potential term {term} is {actual}, expected {expected}")]
    TermKind {
        term: &'static str,
        actual: &'static str,
        expected: &'static str,
    },

    #[error("metric index ({0}, {1}) out of range 0..4")]
    MetricIndex(usize, usize),

    #[error("finite-difference step {0:e} underflows")]
    StepUnderflow(f64),

    #[error("ODE oracle did not converge: last relative change {last_change:e} after {steps} steps")]
    OdeConvergence { steps: usize, last_change: f64 },

    #[error("time grid must be sorted and finite")]
    TimeGrid,

    #[error("sensor configuration: {0}")]
    Sensor(String),

    #[error("signal amplitude oracle mismatch: two-point {two_point:e} vs grid {grid:e}")]
    AmplitudeOracle { two_point: f64, grid: f64 },
}
