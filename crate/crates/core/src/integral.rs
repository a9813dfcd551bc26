//! Fixed-point solution of the relative-motion integral equation
//!
//! `φ(x) = A e^{ikx} + B e^{-ikx} - (i/2k) { e^{ikx} ∫_C^x e^{-iks} V(s) φ(s) ds
//!                                          - e^{-ikx} ∫_D^x e^{iks} V(s) φ(s) ds }`
//!
//! with `V(s) = c′δ(s) - k′²` and `k = k0`. Any fixed point solves the
//! relative Schrödinger equation at energy `E0 + E′`.
//!
//! The delta part of each running integral is taken analytically: it
//! contributes `c′φ(0)` once the path from `C` (or `D`) crosses the origin,
//! and half of that at the origin itself.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grid::BoxDomain;
use crate::params::{PhysicalParams, RelativeMode};
use crate::wave::{normalize, GridWaveFunction};
use crate::analytic::PlaneWaveCoefficients;

const DIVERGENCE_WINDOW: usize = 10;
const RELAXATION_FLOOR: f64 = 0.125;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IntegrationConstants {
    pub a: Complex64,
    pub b: Complex64,
    /// Lower limit of the `e^{-iks}` integral.
    pub c: f64,
    /// Lower limit of the `e^{iks}` integral.
    pub d: f64,
}

impl IntegrationConstants {
    pub fn new(a: Complex64, b: Complex64, c: f64, d: f64) -> Result<Self> {
        if !(c.is_finite() && c < 0.0 && d.is_finite() && d < 0.0) {
            return Err(Error::InvalidParameter(format!(
                "integration limits must be negative, got C = {c}, D = {d}"
            )));
        }
        Ok(Self { a, b, c, d })
    }

    /// `A`, `B` taken from the plane-wave coefficients.
    pub fn matched(coeffs: &PlaneWaveCoefficients, c: f64, d: f64) -> Result<Self> {
        Self::new(coeffs.a, coeffs.b, c, d)
    }

    /// Both limits at the left edge of the box.
    pub fn at_box_edge(a: Complex64, b: Complex64, domain: &BoxDomain) -> Self {
        let edge = -domain.half_length();
        Self { a, b, c: edge, d: edge }
    }

    pub fn check_domain(&self, domain: &BoxDomain) -> Result<()> {
        for (name, v) in [("C", self.c), ("D", self.d)] {
            if !domain.contains(v) {
                return Err(Error::Domain(format!(
                    "{name} = {v} lies outside [-{h}, 0)",
                    h = domain.half_length()
                )));
            }
        }
        Ok(())
    }

    pub fn scaled(&self, factor: Complex64) -> Self {
        Self { a: self.a * factor, b: self.b * factor, ..*self }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SolverConfig {
    pub tolerance: f64,
    pub max_iterations: usize,
    pub relaxation: f64,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self { tolerance: 1e-12, max_iterations: 500, relaxation: 1.0 }
    }
}

impl SolverConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.tolerance.is_finite() && self.tolerance > 0.0) {
            return Err(Error::InvalidParameter(format!("tolerance must be positive, got {}", self.tolerance)));
        }
        if self.max_iterations == 0 {
            return Err(Error::InvalidParameter("max_iterations must be at least 1".into()));
        }
        if !(self.relaxation > 0.0 && self.relaxation <= 1.0) {
            return Err(Error::InvalidParameter(format!(
                "relaxation must lie in (0, 1], got {}",
                self.relaxation
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolveReport {
    pub solution: GridWaveFunction,
    pub iterations_used: usize,
    /// `‖T[φ] - φ‖∞ / ‖φ‖∞` of the returned iterate.
    pub final_residual: f64,
    pub converged: bool,
    /// Ratio of the last two nonzero fixed-point residuals.
    pub contraction_estimate: f64,
    pub relaxation_used: f64,
    pub residual_history: Vec<f64>,
}

/// Node index of an integration limit (limits sit on grid nodes).
fn limit_index(domain: &BoxDomain, limit: f64) -> usize {
    domain.nearest_index(limit)
}

fn delta_weight(i: usize, center: usize) -> f64 {
    use std::cmp::Ordering::*;
    match i.cmp(&center) {
        Less => 0.0,
        Equal => 0.5,
        Greater => 1.0,
    }
}

fn validate(mode: &RelativeMode, consts: &IntegrationConstants, domain: &BoxDomain) -> Result<()> {
    if !(mode.k0 > 0.0) {
        return Err(Error::SingularWavenumber(mode.k0));
    }
    consts.check_domain(domain)
}

/// Running integrals `∫_C^x e^{-iks} φ` and `∫_D^x e^{iks} φ` at every node.
fn running_integrals(
    phi: &GridWaveFunction,
    k: f64,
    consts: &IntegrationConstants,
) -> (Vec<Complex64>, Vec<Complex64>) {
    let d = phi.domain();
    let nodes = d.nodes();
    let (down, up): (Vec<Complex64>, Vec<Complex64>) = nodes
        .iter()
        .zip(phi.values())
        .map(|(&x, v)| {
            let e = Complex64::new(0.0, k * x).exp();
            (v * e.inv(), v * e)
        })
        .unzip();
    let p_down = d.cumulative(&down);
    let p_up = d.cumulative(&up);
    let ic = limit_index(d, consts.c);
    let id = limit_index(d, consts.d);
    let from_c = p_down.iter().map(|p| p - p_down[ic]).collect();
    let from_d = p_up.iter().map(|p| p - p_up[id]).collect();
    (from_c, from_d)
}

/// Right-hand side `T[φ]` of the integral equation on the grid of `phi`.
pub fn apply_integral_operator(
    phi: &GridWaveFunction,
    mode: &RelativeMode,
    consts: &IntegrationConstants,
    params: &PhysicalParams,
) -> Result<GridWaveFunction> {
    let d = phi.domain();
    validate(mode, consts, d)?;
    let k = mode.k0;
    let kp2 = mode.k_prime * mode.k_prime;
    let m = d.center();
    let contact = phi.at_zero() * params.c_prime();
    let (from_c, from_d) = if kp2 > 0.0 {
        running_integrals(phi, k, consts)
    } else {
        let zeros = vec![Complex64::default(); d.n_points()];
        (zeros.clone(), zeros)
    };
    let prefactor = Complex64::new(0.0, -1.0 / (2.0 * k));
    let values = d
        .nodes()
        .iter()
        .enumerate()
        .map(|(i, &x)| {
            let e = Complex64::new(0.0, k * x).exp();
            let crossing = contact * delta_weight(i, m);
            let j1 = crossing - from_c[i] * kp2;
            let j2 = crossing - from_d[i] * kp2;
            consts.a * e + consts.b * e.inv() + prefactor * (e * j1 - e.inv() * j2)
        })
        .collect();
    GridWaveFunction::new(d.clone(), values)
}

/// Damped fixed-point iteration `φ ← (1-ω)φ + ω T[φ]`.
///
/// Convergence is declared when `‖T[φ] - φ‖∞ / ‖φ‖∞ ≤ tolerance`; that
/// confirming application is not counted in `iterations_used`. If the
/// residual grows for ten consecutive steps the iteration restarts from
/// `initial` with half the relaxation, down to 1/8.
pub fn neumann_solve(
    initial: &GridWaveFunction,
    mode: &RelativeMode,
    consts: &IntegrationConstants,
    params: &PhysicalParams,
    config: &SolverConfig,
) -> Result<SolveReport> {
    config.validate()?;
    validate(mode, consts, initial.domain())?;
    let mut relaxation = config.relaxation;
    loop {
        match iterate(initial, mode, consts, params, config, relaxation)? {
            Attempt::Done(report) => return Ok(report),
            Attempt::Diverged(estimate) => {
                if relaxation <= RELAXATION_FLOOR {
                    return Err(Error::NonContraction { contraction_estimate: estimate });
                }
                relaxation = (0.5 * relaxation).max(RELAXATION_FLOOR);
            }
        }
    }
}

enum Attempt {
    Done(SolveReport),
    Diverged(f64),
}

fn contraction(history: &[f64]) -> f64 {
    match history {
        [.., prev, last] if *prev > 0.0 => last / prev,
        _ => 0.0,
    }
}

fn iterate(
    initial: &GridWaveFunction,
    mode: &RelativeMode,
    consts: &IntegrationConstants,
    params: &PhysicalParams,
    config: &SolverConfig,
    relaxation: f64,
) -> Result<Attempt> {
    let mut phi = initial.clone();
    let mut history: Vec<f64> = Vec::new();
    let mut growth = 0;
    for n in 0..=config.max_iterations {
        let image = apply_integral_operator(&phi, mode, consts, params)?;
        let residual = image.relative_distance(&phi);
        if let Some(prev) = history.last() {
            growth = if residual > *prev { growth + 1 } else { 0 };
        }
        history.push(residual);
        if residual <= config.tolerance || n == config.max_iterations {
            let converged = residual <= config.tolerance;
            return Ok(Attempt::Done(SolveReport {
                solution: phi,
                iterations_used: n,
                final_residual: residual,
                converged,
                contraction_estimate: contraction(&history),
                relaxation_used: relaxation,
                residual_history: history,
            }));
        }
        if growth >= DIVERGENCE_WINDOW || !residual.is_finite() {
            return Ok(Attempt::Diverged(contraction(&history)));
        }
        let values = phi
            .values()
            .iter()
            .zip(image.values())
            .map(|(old, new)| old * (1.0 - relaxation) + new * relaxation)
            .collect();
        phi = GridWaveFunction::new(phi.domain().clone(), values)?;
    }
    unreachable!("loop returns on the last iteration")
}

/// Position-dependent bracket coefficients of the formal solution: at each
/// node `φ(x) = a(x) e^{ikx} + b(x) e^{-ikx}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FormalCoefficients {
    pub domain: BoxDomain,
    pub k: f64,
    pub a: Vec<Complex64>,
    pub b: Vec<Complex64>,
}

impl FormalCoefficients {
    pub fn reconstruct(&self) -> Vec<Complex64> {
        self.domain
            .nodes()
            .iter()
            .zip(self.a.iter().zip(self.b.iter()))
            .map(|(&x, (a, b))| {
                let e = Complex64::new(0.0, self.k * x).exp();
                a * e + b * e.inv()
            })
            .collect()
    }

    /// `(A_neg, B_neg)` at the left edge and `(A_pos, B_pos)` at the right
    /// edge of the box. For `k′ = 0` these are the region constants.
    pub fn region_edges(&self) -> ((Complex64, Complex64), (Complex64, Complex64)) {
        let last = self.a.len() - 1;
        ((self.a[0], self.b[0]), (self.a[last], self.b[last]))
    }

    /// Largest variation of the coefficients across the nodes of one region.
    pub fn variation(&self, positive: bool) -> f64 {
        let m = self.domain.center();
        let range = if positive { m + 1..self.a.len() } else { 0..m };
        let (a0, b0) = (self.a[range.start], self.b[range.start]);
        range
            .map(|i| (self.a[i] - a0).norm().max((self.b[i] - b0).norm()))
            .fold(0.0, f64::max)
    }
}

pub fn extract_formal_coefficients(
    report: &SolveReport,
    mode: &RelativeMode,
    consts: &IntegrationConstants,
    params: &PhysicalParams,
) -> Result<FormalCoefficients> {
    if !report.converged {
        return Err(Error::InvalidInput("formal coefficients need a converged solution".into()));
    }
    let phi = &report.solution;
    let d = phi.domain();
    validate(mode, consts, d)?;
    let k = mode.k0;
    let kp2 = mode.k_prime * mode.k_prime;
    let m = d.center();
    let contact = phi.at_zero() * params.c_prime() / Complex64::new(0.0, 2.0 * k);
    let (from_c, from_d) = running_integrals(phi, k, consts);
    let factor = Complex64::new(0.0, kp2 / (2.0 * k));
    let (a, b) = (0..d.n_points())
        .map(|i| {
            let w = delta_weight(i, m);
            (
                consts.a + contact * w + factor * from_c[i],
                consts.b - contact * w - factor * from_d[i],
            )
        })
        .unzip();
    Ok(FormalCoefficients { domain: d.clone(), k, a, b })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SelfConsistentSolution {
    pub phi0: Complex64,
    pub report: SolveReport,
    /// Constants rescaled so that the solution is normalized on the box.
    pub consts: IntegrationConstants,
    pub outer_iterations: usize,
    pub phi0_trace: Vec<Complex64>,
}

/// Outer loop on `φ(0)`: solve, normalize on the box, rescale `A`, `B`,
/// repeat until `φ(0)` is stationary.
pub fn self_consistent_phi0(
    mode: &RelativeMode,
    consts: &IntegrationConstants,
    params: &PhysicalParams,
    config: &SolverConfig,
    domain: &BoxDomain,
) -> Result<SelfConsistentSolution> {
    config.validate()?;
    validate(mode, consts, domain)?;
    let k = mode.k0;
    let mut current = *consts;
    let mut trace: Vec<Complex64> = Vec::new();
    let mut last_phi0: Option<Complex64> = None;
    for outer in 1..=config.max_iterations {
        let initial = GridWaveFunction::from_fn(domain, |x| {
            let e = Complex64::new(0.0, k * x).exp();
            current.a * e + current.b * e.inv()
        })?;
        let report = neumann_solve(&initial, mode, &current, params, config)?;
        if !report.converged {
            return Err(Error::OuterNotConverged {
                iterations: outer,
                trace: trace.iter().map(|z| z.norm()).collect(),
            });
        }
        let norm = report.solution.sup_norm();
        if norm == 0.0 {
            return Err(Error::InvalidInput("integral equation produced the zero state".into()));
        }
        let (normalized, phi0) = normalize(&report.solution, domain)?;
        trace.push(phi0);
        let scale = phi0.norm() / report.solution.at_zero().norm().max(f64::MIN_POSITIVE);
        let stationary = last_phi0.is_some_and(|prev| (phi0 - prev).norm() <= config.tolerance * phi0.norm());
        if stationary || (report.solution.relative_distance(&normalized) <= config.tolerance) {
            let report = SolveReport { solution: normalized, ..report };
            return Ok(SelfConsistentSolution {
                phi0,
                report,
                consts: current,
                outer_iterations: outer,
                phi0_trace: trace,
            });
        }
        last_phi0 = Some(phi0);
        current = current.scaled(Complex64::from(scale));
    }
    Err(Error::OuterNotConverged {
        iterations: config.max_iterations,
        trace: trace.iter().map(|z| z.norm()).collect(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analytic::plane_wave_coefficients;
    use crate::grid::build_grid;
    use crate::residual::{check_gates, GateTolerances, TestFamily};

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn plane(domain: &BoxDomain, k: f64, a: Complex64, b: Complex64) -> GridWaveFunction {
        GridWaveFunction::from_fn(domain, |x| {
            let e = c(0.0, k * x).exp();
            a * e + b * e.inv()
        })
        .unwrap()
    }

    #[test]
    fn zero_kernel_returns_free_wave() {
        let g = build_grid(10.0, 501).unwrap();
        let p = PhysicalParams::atomic(0.0).unwrap();
        let mode = RelativeMode::unperturbed(1.3, &p).unwrap();
        let consts = IntegrationConstants::at_box_edge(c(0.4, 0.1), c(0.2, -0.3), &g);
        let junk = GridWaveFunction::from_fn(&g, |x| c(x.sin(), x * x)).unwrap();
        let out = apply_integral_operator(&junk, &mode, &consts, &p).unwrap();
        let expect = plane(&g, 1.3, consts.a, consts.b);
        assert_eq!(out, expect);
    }

    #[test]
    fn plane_wave_state_is_a_fixed_point() {
        let g = build_grid(20.0, 2001).unwrap();
        let p = PhysicalParams::atomic(0.9).unwrap();
        let mode = RelativeMode::unperturbed(1.0, &p).unwrap();
        let co = plane_wave_coefficients(1.0, &p, c(0.6, 0.2)).unwrap();
        let consts = IntegrationConstants::matched(&co, -3.0, -7.0).unwrap();
        let phi = co.to_wave().sample(&g);
        let out = apply_integral_operator(&phi, &mode, &consts, &p).unwrap();
        let err = out.values().iter().zip(phi.values()).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max);
        assert!(err < 1e-8, "error {err}");
    }

    #[test]
    fn constant_state_matches_closed_form_kernel() {
        // φ ≡ 1, c = 0: ∫_C^x e^{∓iks} ds in closed form.
        let g = build_grid(6.0, 1201).unwrap();
        let p = PhysicalParams::atomic(0.0).unwrap();
        let (k, kp) = (1.1, 0.4);
        let mode = RelativeMode::new(k, kp, &p).unwrap();
        let (cc, dd) = (-3.0, -1.5);
        let consts = IntegrationConstants::new(c(0.3, 0.0), c(0.0, 0.2), cc, dd).unwrap();
        let one = GridWaveFunction::from_fn(&g, |_| c(1.0, 0.0)).unwrap();
        let out = apply_integral_operator(&one, &mode, &consts, &p).unwrap();
        for (x, v) in g.nodes().iter().zip(out.values()) {
            let e = |s: f64| c(0.0, k * s).exp();
            let i1 = (e(-*x) - e(-cc)) / c(0.0, -k);
            let i2 = (e(*x) - e(dd)) / c(0.0, k);
            let kp2 = kp * kp;
            let expect = consts.a * e(*x) + consts.b * e(-*x)
                - c(0.0, 1.0 / (2.0 * k)) * (e(*x) * (-kp2 * i1) - e(-*x) * (-kp2 * i2));
            assert!((v - expect).norm() < 1e-10, "x = {x}");
        }
    }

    #[test]
    fn limits_outside_box_are_rejected() {
        let g = build_grid(4.0, 41).unwrap();
        let p = PhysicalParams::atomic(1.0).unwrap();
        let mode = RelativeMode::unperturbed(1.0, &p).unwrap();
        let consts = IntegrationConstants::new(c(1.0, 0.0), c(1.0, 0.0), -5.0, -1.0).unwrap();
        let phi = plane(&g, 1.0, c(1.0, 0.0), c(0.0, 0.0));
        assert!(matches!(apply_integral_operator(&phi, &mode, &consts, &p), Err(Error::Domain(_))));
        assert!(IntegrationConstants::new(c(1.0, 0.0), c(1.0, 0.0), 0.5, -1.0).is_err());
        let flat = RelativeMode::unperturbed(0.0, &p).unwrap();
        let ok = IntegrationConstants::at_box_edge(c(1.0, 0.0), c(0.0, 0.0), &g);
        assert!(matches!(apply_integral_operator(&phi, &flat, &ok, &p), Err(Error::SingularWavenumber(_))));
    }

    #[test]
    fn free_solve_takes_one_iteration() {
        let g = build_grid(10.0, 501).unwrap();
        let p = PhysicalParams::atomic(0.0).unwrap();
        let mode = RelativeMode::unperturbed(1.0, &p).unwrap();
        let consts = IntegrationConstants::at_box_edge(c(0.5, 0.0), c(0.5, 0.0), &g);
        let init = GridWaveFunction::from_fn(&g, |x| c(x.cos(), 1.0)).unwrap();
        let rep = neumann_solve(&init, &mode, &consts, &p, &SolverConfig::default()).unwrap();
        assert!(rep.converged);
        assert_eq!(rep.iterations_used, 1);
        assert_eq!(rep.solution, plane(&g, 1.0, consts.a, consts.b));
    }

    #[test]
    fn strong_kernel_with_correction_converges() {
        // c′/(2k0) = 0.4, k′²L/(2k0) = 0.3
        let (k0, l) = (1.0, 20.0);
        let g = build_grid(l, 2001).unwrap();
        let p = PhysicalParams::atomic(0.8 / 2f64.sqrt()).unwrap();
        let kp = (0.3 * 2.0 * k0 / l).sqrt();
        let mode = RelativeMode::new(k0, kp, &p).unwrap();
        let co = plane_wave_coefficients(k0, &p, c(1.0, 0.0)).unwrap();
        let consts = IntegrationConstants::matched(&co, -l / 2.0, -l / 2.0).unwrap();
        let init = plane(&g, k0, c(1.0, 0.0), c(0.0, 0.0));
        let rep = neumann_solve(&init, &mode, &consts, &p, &SolverConfig::default()).unwrap();
        assert!(rep.converged, "{:?}", rep.residual_history);
        assert!(rep.contraction_estimate < 1.0);
        let gates = check_gates(
            &rep.solution,
            &p,
            mode.total_energy(),
            &TestFamily::for_domain(&g),
            g.spacing(),
            GateTolerances::GRID,
        )
        .unwrap();
        assert!(gates.passed(), "{gates:?}");
        let image = apply_integral_operator(&rep.solution, &mode, &consts, &p).unwrap();
        assert!(image.relative_distance(&rep.solution) <= 1e-12);
    }

    #[test]
    fn formal_coefficients_reduce_to_plane_wave_form() {
        let g = build_grid(20.0, 2001).unwrap();
        let p = PhysicalParams::atomic(0.3).unwrap();
        let mode = RelativeMode::unperturbed(1.0, &p).unwrap();
        let co = plane_wave_coefficients(1.0, &p, c(1.0, 0.0)).unwrap();
        let consts = IntegrationConstants::matched(&co, -10.0, -10.0).unwrap();
        let init = plane(&g, 1.0, c(1.0, 0.0), c(0.0, 0.0));
        let rep = neumann_solve(&init, &mode, &consts, &p, &SolverConfig::default()).unwrap();
        let f = extract_formal_coefficients(&rep, &mode, &consts, &p).unwrap();
        let ((an, bn), (ap, bp)) = f.region_edges();
        assert!((an - co.a).norm() < 1e-12 && (bn - co.b).norm() < 1e-12);
        // x > 0 reads B e^{ikx} + A e^{-ikx}
        assert!((ap - co.b).norm() < 1e-12 && (bp - co.a).norm() < 1e-12);
        let rebuilt = f.reconstruct();
        let err = rebuilt.iter().zip(rep.solution.values()).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max);
        assert!(err < 1e-8);
    }

    #[test]
    fn unconverged_report_is_rejected() {
        let g = build_grid(4.0, 41).unwrap();
        let p = PhysicalParams::atomic(1.0).unwrap();
        let mode = RelativeMode::unperturbed(1.0, &p).unwrap();
        let consts = IntegrationConstants::at_box_edge(c(1.0, 0.0), c(1.0, 0.0), &g);
        let init = plane(&g, 1.0, c(1.0, 0.0), c(0.0, 0.0));
        let cfg = SolverConfig { max_iterations: 1, ..SolverConfig::default() };
        let rep = neumann_solve(&init, &mode, &consts, &p, &cfg).unwrap();
        assert!(!rep.converged);
        assert!(extract_formal_coefficients(&rep, &mode, &consts, &p).is_err());
    }

    #[test]
    fn self_consistent_free_phi0() {
        let g = build_grid(10.0, 1001).unwrap();
        let p = PhysicalParams::atomic(0.0).unwrap();
        let mode = RelativeMode::unperturbed(1.0, &p).unwrap();
        let consts = IntegrationConstants::at_box_edge(c(1.0, 0.0), c(0.0, 0.0), &g);
        let sol = self_consistent_phi0(&mode, &consts, &p, &SolverConfig::default(), &g).unwrap();
        // normalized e^{ikx} on a box of length 10
        assert!((sol.phi0.norm() - 1.0 / 10f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn solves_are_deterministic() {
        let g = build_grid(10.0, 1001).unwrap();
        let p = PhysicalParams::atomic(0.5).unwrap();
        let mode = RelativeMode::new(1.0, 0.1, &p).unwrap();
        let co = plane_wave_coefficients(1.0, &p, c(1.0, 0.0)).unwrap();
        let consts = IntegrationConstants::matched(&co, -5.0, -5.0).unwrap();
        let init = plane(&g, 1.0, c(1.0, 0.0), c(0.0, 0.0));
        let a = neumann_solve(&init, &mode, &consts, &p, &SolverConfig::default()).unwrap();
        let b = neumann_solve(&init, &mode, &consts, &p, &SolverConfig::default()).unwrap();
        assert_eq!(a, b);
    }
}
