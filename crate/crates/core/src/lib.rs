//! Numerics for one-dimensional bosons with a contact (delta-function) pair
//! interaction: plane-wave states, the integral-equation formulation of the
//! relative motion, perturbed states with an energy correction, and the
//! symmetrized N-boson wavefunction.

pub mod analytic;
pub mod error;
pub mod grid;
pub mod integral;
pub mod manybody;
pub mod params;
pub mod perturbation;
pub mod residual;
pub mod wave;

pub use error::{Error, Result};
pub use grid::{build_grid, BoxDomain};
pub use num_complex::Complex64;
pub use params::{make_params, PhysicalParams, RelativeMode};
pub use wave::{normalize, GridWaveFunction, PiecewisePlaneWave, PlaneWaveTerm, WaveFunction};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");
