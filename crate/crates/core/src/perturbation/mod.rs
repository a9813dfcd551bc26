//! Perturbed relative states at `k = k0 + k′²/(2k0)`, the energy expectation
//! engine and the self-consistent energy correction.

mod correction;
mod expectation;

pub use correction::{correction_gap_scan, energy_correction_solve, CorrectionReport, CorrectionStep, REGIME_FRACTION};
pub use expectation::{
    expectation_energy, matrix_element, paradox_report, EnergyDecomposition, ParadoxEntry, ParadoxReport,
    SidedSamples,
};

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::analytic::PlaneWaveCoefficients;
use crate::error::{Error, Result};
use crate::grid::BoxDomain;
use crate::integral::IntegrationConstants;
use crate::wave::{PiecewisePlaneWave, PlaneWaveTerm, WaveFunction};

const CONSTRAINT_TOLERANCE: f64 = 1e-9;

/// `C + D` for which the perturbed state is even: `-k′²(C + D)/(2k0) = 2πn`.
pub fn symmetry_constraint_cd(k0: f64, k_prime: f64, n: u32) -> Result<f64> {
    if !(k0.is_finite() && k0 > 0.0) {
        return Err(Error::SingularWavenumber(k0));
    }
    if n == 0 {
        return Err(Error::InvalidParameter("symmetry index must be at least 1".into()));
    }
    if !k_prime.is_finite() {
        return Err(Error::InvalidParameter(format!("k' must be finite, got {k_prime}")));
    }
    if k_prime == 0.0 {
        return Err(Error::DegenerateConstraint);
    }
    Ok(-4.0 * PI * n as f64 * k0 / (k_prime * k_prime))
}

/// Splits `C + D` into two negative limits. The split is symmetric when
/// `(C + D)/2` lies in the box; otherwise `C` sits at the left edge and `D`
/// takes the rest, which may lie beyond the box.
pub fn split_constraint(sum: f64, domain: &BoxDomain) -> Result<(f64, f64)> {
    if !(sum.is_finite() && sum < 0.0) {
        return Err(Error::InvalidParameter(format!("C + D must be negative, got {sum}")));
    }
    let half = 0.5 * sum;
    if domain.contains(half) {
        Ok((half, half))
    } else {
        let c = -domain.half_length();
        Ok((c, sum - c))
    }
}

/// Integration constants for the perturbed state built on `base`.
pub fn constrained_constants(
    base: &PlaneWaveCoefficients,
    k_prime: f64,
    n: u32,
    domain: &BoxDomain,
) -> Result<IntegrationConstants> {
    if k_prime == 0.0 {
        return Ok(IntegrationConstants::at_box_edge(base.a, base.b, domain));
    }
    let (c, d) = split_constraint(symmetry_constraint_cd(base.k, k_prime, n)?, domain)?;
    IntegrationConstants::new(base.a, base.b, c, d)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PerturbedState {
    pub base: PlaneWaveCoefficients,
    pub k_prime: f64,
    pub consts: IntegrationConstants,
    pub symmetry_index: u32,
    wave: PiecewisePlaneWave,
}

impl PerturbedState {
    pub fn wave(&self) -> &PiecewisePlaneWave {
        &self.wave
    }

    /// `k′²/(2k0)`.
    pub fn shift(&self) -> f64 {
        self.k_prime * self.k_prime / (2.0 * self.base.k)
    }

    /// `φ′ = φ - φ⁰`, built term by term so that it vanishes identically at `k′ = 0`.
    pub fn deviation(&self) -> PiecewisePlaneWave {
        let (a, b, k) = (self.base.a, self.base.b, self.base.k);
        if self.k_prime == 0.0 {
            return PiecewisePlaneWave::new(Vec::new(), Vec::new()).expect("empty wave is continuous");
        }
        let kk = k + self.shift();
        let e = self.phase();
        let side = |first: Complex64, second: Complex64| {
            vec![
                PlaneWaveTerm::new(-first * e, k),
                PlaneWaveTerm::new(first, kk),
                PlaneWaveTerm::new(-second * e, -k),
                PlaneWaveTerm::new(second, -kk),
            ]
        };
        PiecewisePlaneWave::new(side(a, b), side(b, a)).expect("deviation is continuous under the constraint")
    }

    /// Common value of `e^{ik′²C/(2k0)}` and `e^{-ik′²D/(2k0)}`.
    fn phase(&self) -> Complex64 {
        Complex64::new(0.0, self.shift() * self.consts.c).exp()
    }
}

impl WaveFunction for PerturbedState {
    fn value(&self, x: f64) -> Complex64 {
        self.wave.value(x)
    }
}

/// Four-bracket perturbed state; the `O(k′²)` remainder is dropped.
pub fn perturbed_solution(
    base: &PlaneWaveCoefficients,
    k_prime: f64,
    consts: &IntegrationConstants,
    n: u32,
) -> Result<PerturbedState> {
    if !(k_prime.is_finite() && k_prime >= 0.0) {
        return Err(Error::InvalidParameter(format!("k' must be non-negative, got {k_prime}")));
    }
    if n == 0 {
        return Err(Error::InvalidParameter("symmetry index must be at least 1".into()));
    }
    if k_prime == 0.0 {
        return Ok(PerturbedState {
            base: *base,
            k_prime,
            consts: *consts,
            symmetry_index: n,
            wave: base.to_wave(),
        });
    }
    let k = base.k;
    let q = k_prime * k_prime / (2.0 * k);
    let defect = (-q * (consts.c + consts.d) - 2.0 * PI * n as f64).abs();
    if !(defect <= CONSTRAINT_TOLERANCE) {
        return Err(Error::SymmetryViolation { defect });
    }
    let e = Complex64::new(0.0, q * consts.c).exp();
    let kk = k + q;
    let side = |first: Complex64, second: Complex64| {
        vec![
            PlaneWaveTerm::new(first * (1.0 - e), k),
            PlaneWaveTerm::new(first, kk),
            PlaneWaveTerm::new(second * (1.0 - e), -k),
            PlaneWaveTerm::new(second, -kk),
        ]
    };
    let wave = PiecewisePlaneWave::new(side(base.a, base.b), side(base.b, base.a))?;
    Ok(PerturbedState { base: *base, k_prime, consts: *consts, symmetry_index: n, wave })
}
