use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::expectation::matrix_element;
use super::{constrained_constants, perturbed_solution, PerturbedState};
use crate::analytic::{plane_wave_coefficients, PlaneWaveCoefficients};
use crate::error::{Error, Result};
use crate::grid::BoxDomain;
use crate::integral::{IntegrationConstants, SolverConfig};
use crate::params::PhysicalParams;
use crate::wave::{normalize, Normalizable, PiecewisePlaneWave};

/// The leading correction must stay below this fraction of `E0`.
pub const REGIME_FRACTION: f64 = 0.2;

/// One evaluation of the correction map `E′ ↦ RHS(E′)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CorrectionStep {
    pub k_prime: f64,
    pub e_prime: f64,
    pub rhs: f64,
    /// Imaginary part of the matrix-element sum, dropped from `rhs`.
    pub rhs_imag: f64,
    pub leading: f64,
    pub cross: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CorrectionReport {
    pub nominal_energy: f64,
    pub e_prime: f64,
    pub k_prime: f64,
    pub leading_term: f64,
    pub cross_terms: f64,
    pub rhs: f64,
    pub iterations: usize,
    pub converged: bool,
    pub first_iterate: f64,
    pub phi0: Complex64,
    pub consts: IntegrationConstants,
    /// `‖φ⁰ + φ′‖² - 1` on the box.
    pub norm_defect: f64,
    /// `⟨φ|H|φ⟩/⟨φ|φ⟩` of the corrected state.
    pub corrected_energy: f64,
    pub trace: Vec<CorrectionStep>,
}

struct Setup {
    base: PlaneWaveCoefficients,
    unperturbed: PiecewisePlaneWave,
    leading: f64,
}

fn evaluate(
    setup: &Setup,
    e_prime: f64,
    n: u32,
    params: &PhysicalParams,
    domain: &BoxDomain,
) -> Result<(CorrectionStep, PerturbedState)> {
    let k_prime = params.wavenumber_of(e_prime);
    let consts = constrained_constants(&setup.base, k_prime, n, domain)?;
    let state = perturbed_solution(&setup.base, k_prime, &consts, n)?;
    let cross = if k_prime == 0.0 {
        Complex64::default()
    } else {
        let dev = state.deviation();
        let w0 = &setup.unperturbed;
        matrix_element(&dev, w0, params, domain)?
            + matrix_element(w0, &dev, params, domain)?
            + matrix_element(&dev, &dev, params, domain)?
    };
    let step = CorrectionStep {
        k_prime,
        e_prime: params.energy_of(k_prime),
        rhs: setup.leading + cross.re,
        rhs_imag: cross.im,
        leading: setup.leading,
        cross: cross.re,
    };
    Ok((step, state))
}

/// Fixed point of `E′ = (c/√2)|φ⁰(0)|² + ⟨φ′|H|φ⁰⟩ + ⟨φ⁰|H|φ′⟩ + ⟨φ′|H|φ′⟩`
/// with `φ⁰` the normalized plane-wave state and `φ′` the deviation of the
/// perturbed state at `k′ = √(2mE′)/ħ`. Iteration starts from `E′ = 0`; `C`
/// and `D` are rebuilt from the exchange constraint at every step.
pub fn energy_correction_solve(
    k0: f64,
    params: &PhysicalParams,
    domain: &BoxDomain,
    n: u32,
    config: &SolverConfig,
) -> Result<CorrectionReport> {
    config.validate()?;
    let nominal_energy = params.energy_of(k0);
    let unit = plane_wave_coefficients(k0, params, Complex64::new(1.0, 0.0))?;
    let (_, phi0) = normalize(&unit.to_wave(), domain)?;
    let base = unit.scaled(phi0);
    let leading = params.relative_coupling() * phi0.norm_sqr();
    if leading.abs() >= REGIME_FRACTION * nominal_energy {
        return Err(Error::OutOfRegime { ratio: leading / nominal_energy });
    }
    let setup = Setup { base, unperturbed: base.to_wave(), leading };

    let mut trace: Vec<CorrectionStep> = Vec::new();
    let mut e_prime = 0.0;
    for iteration in 1..=config.max_iterations {
        let (step, state) = evaluate(&setup, e_prime, n, params, domain)?;
        trace.push(step.clone());
        if step.rhs < 0.0 {
            return Err(Error::NonPhysicalCorrection { rhs: step.rhs });
        }
        let gap = (step.rhs - step.e_prime).abs();
        if gap <= config.tolerance * nominal_energy.max(step.e_prime.abs()) {
            let norm_sq = state.wave().norm_squared(domain);
            let (normalized, _) = normalize(state.wave(), domain)?;
            let corrected_energy = matrix_element(&normalized, &normalized, params, domain)?.re;
            return Ok(CorrectionReport {
                nominal_energy,
                e_prime: step.e_prime,
                k_prime: step.k_prime,
                leading_term: leading,
                cross_terms: step.cross,
                rhs: step.rhs,
                iterations: iteration,
                converged: true,
                first_iterate: trace[0].rhs,
                phi0,
                consts: state.consts,
                norm_defect: norm_sq - 1.0,
                corrected_energy,
                trace,
            });
        }
        if step.rhs >= REGIME_FRACTION * nominal_energy {
            return Err(Error::CorrectionNotConverged {
                reason: format!(
                    "iterate left the perturbative regime at step {iteration} (E'/E0 = {:.3e})",
                    step.rhs / nominal_energy
                ),
                trace,
            });
        }
        e_prime = step.rhs;
    }
    Err(Error::CorrectionNotConverged {
        reason: format!("no fixed point within {} iterations", config.max_iterations),
        trace,
    })
}

/// `RHS(E′) - E′` at each requested `E′`; a fixed point is a sign change.
pub fn correction_gap_scan(
    k0: f64,
    params: &PhysicalParams,
    domain: &BoxDomain,
    n: u32,
    e_primes: &[f64],
) -> Result<Vec<CorrectionStep>> {
    let unit = plane_wave_coefficients(k0, params, Complex64::new(1.0, 0.0))?;
    let (_, phi0) = normalize(&unit.to_wave(), domain)?;
    let base = unit.scaled(phi0);
    let setup = Setup { base, unperturbed: base.to_wave(), leading: params.relative_coupling() * phi0.norm_sqr() };
    e_primes.iter().map(|&e| evaluate(&setup, e, n, params, domain).map(|(s, _)| s)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::build_grid;

    #[test]
    fn free_pair_needs_no_correction() {
        let g = build_grid(50.0, 2001).unwrap();
        let p = PhysicalParams::atomic(0.0).unwrap();
        let r = energy_correction_solve(1.0, &p, &g, 1, &SolverConfig::default()).unwrap();
        assert!(r.converged);
        assert_eq!(r.iterations, 1);
        assert_eq!(r.e_prime, 0.0);
        assert_eq!(r.k_prime, 0.0);
    }

    #[test]
    fn first_iterate_is_the_contact_term() {
        let g = build_grid(100.0, 4001).unwrap();
        let p = PhysicalParams::atomic(0.1).unwrap();
        let scan = correction_gap_scan(1.0, &p, &g, 1, &[0.0]).unwrap();
        assert_eq!(scan[0].cross, 0.0);
        assert_eq!(scan[0].rhs, scan[0].leading);
        let unit = plane_wave_coefficients(1.0, &p, Complex64::from(1.0)).unwrap();
        let (_, phi0) = normalize(&unit.to_wave(), &g).unwrap();
        assert!((scan[0].leading - 0.1 / 2f64.sqrt() * phi0.norm_sqr()).abs() < 1e-15);
    }

    #[test]
    fn strong_coupling_is_out_of_regime() {
        let g = build_grid(2.0, 401).unwrap();
        let p = PhysicalParams::atomic(1.0).unwrap();
        assert!(matches!(
            energy_correction_solve(1.0, &p, &g, 1, &SolverConfig::default()),
            Err(Error::OutOfRegime { .. })
        ));
    }

    #[test]
    fn energies_stay_consistent_along_the_trace() {
        let g = build_grid(100.0, 4001).unwrap();
        let p = PhysicalParams::atomic(0.1).unwrap();
        match energy_correction_solve(1.0, &p, &g, 1, &SolverConfig::default()) {
            Ok(r) => assert_eq!(r.e_prime, p.energy_of(r.k_prime)),
            Err(Error::CorrectionNotConverged { trace, .. }) => {
                assert!(!trace.is_empty());
                for s in trace {
                    assert_eq!(s.e_prime, p.energy_of(s.k_prime));
                }
            }
            Err(e) => panic!("{e}"),
        }
    }
}
