use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("wave number must be positive (got {0})")]
    SingularWavenumber(f64),
    #[error("scattering amplitude evaluated at its pole k = {re} + {im}i")]
    Pole { re: f64, im: f64 },
    #[error("invalid energy {0}: must be nonnegative")]
    InvalidEnergy(f64),
    #[error("no bound state for repulsive or vanishing coupling c = {0}")]
    NoBoundState(f64),
    #[error("integration constant outside the computational box: {0}")]
    Domain(String),
    #[error("stencil step {epsilon} is below the grid spacing {spacing}")]
    Resolution { epsilon: f64, spacing: f64 },
    #[error("iteration is not contracting (estimated contraction {contraction_estimate:.3e})")]
    NonContraction { contraction_estimate: f64 },
    #[error("outer iteration did not converge after {iterations} steps")]
    OuterNotConverged { iterations: usize, trace: Vec<f64> },
    #[error("exchange-symmetry constraint on C + D is degenerate for k' = 0")]
    DegenerateConstraint,
    #[error("integration constants violate the exchange-symmetry constraint (defect {defect:.3e})")]
    SymmetryViolation { defect: f64 },
    #[error("state is not normalized: norm^2 = {norm_sq}")]
    Normalization { norm_sq: f64 },
    #[error("outside the perturbative regime: leading correction / E0 = {ratio:.3e}")]
    OutOfRegime { ratio: f64 },
    #[error("energy correction right-hand side is negative ({rhs:.6e})")]
    NonPhysicalCorrection { rhs: f64 },
    #[error("energy-correction fixed point did not converge: {reason}")]
    CorrectionNotConverged {
        reason: String,
        trace: Vec<crate::perturbation::CorrectionStep>,
    },
    #[error("particle count {0} must be even and at least 2")]
    Parity(usize),
    #[error("particle count {n} exceeds the enumeration cap {max}")]
    TooManyParticles { n: usize, max: usize },
    #[error("wavefunction vanishes at the reference configuration")]
    DegenerateConfiguration,
    #[error("relative wavefunction is not even (asymmetry {0:.3e})")]
    ExchangeSymmetry(f64),
}

pub type Result<T> = std::result::Result<T, Error>;
