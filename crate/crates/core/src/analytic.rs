//! Closed-form states of the contact problem in the plane-wave limit `k' = 0`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::params::PhysicalParams;
use crate::wave::{PiecewisePlaneWave, PlaneWaveTerm};

/// Coefficients of the even plane-wave solution
///
/// `φ(x) = θ(x)[B e^{ikx} + A e^{-ikx}] + θ(-x)[A e^{ikx} + B e^{-ikx}]`.
///
/// Continuity gives `A + B = φ(0)`; matching the derivative jump `c′φ(0)`
/// fixes `A - B = i c′ φ(0) / (2k)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PlaneWaveCoefficients {
    pub a: Complex64,
    pub b: Complex64,
    pub phi0: Complex64,
    pub k: f64,
}

impl PlaneWaveCoefficients {
    /// Validates both coefficient relations for the given coupling.
    pub fn new(a: Complex64, b: Complex64, phi0: Complex64, k: f64, params: &PhysicalParams) -> Result<Self> {
        if !(k.is_finite() && k > 0.0) {
            return Err(Error::SingularWavenumber(k));
        }
        let scale = phi0.norm().max(a.norm()).max(b.norm()).max(f64::MIN_POSITIVE);
        let sum_defect = (a + b - phi0).norm();
        let diff_defect = (a - b - Complex64::i() * phi0 * (params.c_prime() / (2.0 * k))).norm();
        if sum_defect > 1e-12 * scale || diff_defect > 1e-12 * scale {
            return Err(Error::InvalidInput(format!(
                "coefficients violate the matching relations (defects {sum_defect:.2e}, {diff_defect:.2e})"
            )));
        }
        Ok(Self { a, b, phi0, k })
    }

    /// `A/B = (2k + i c′)/(2k - i c′)`.
    pub fn ratio(&self) -> Complex64 {
        self.a / self.b
    }

    pub fn to_wave(&self) -> PiecewisePlaneWave {
        PiecewisePlaneWave::new(
            vec![PlaneWaveTerm::new(self.a, self.k), PlaneWaveTerm::new(self.b, -self.k)],
            vec![PlaneWaveTerm::new(self.b, self.k), PlaneWaveTerm::new(self.a, -self.k)],
        )
        .expect("A + B is continuous by construction")
    }

    pub fn scaled(&self, factor: Complex64) -> Self {
        Self { a: self.a * factor, b: self.b * factor, phi0: self.phi0 * factor, k: self.k }
    }
}

pub fn plane_wave_coefficients(k: f64, params: &PhysicalParams, phi0: Complex64) -> Result<PlaneWaveCoefficients> {
    if !(k.is_finite() && k > 0.0) {
        return Err(Error::SingularWavenumber(k));
    }
    let shift = Complex64::new(0.0, params.c_prime() / (2.0 * k));
    let a = 0.5 * (1.0 + shift) * phi0;
    let b = 0.5 * (1.0 - shift) * phi0;
    Ok(PlaneWaveCoefficients { a, b, phi0, k })
}

pub fn evaluate_plane_wave(x: f64, coeffs: &PlaneWaveCoefficients) -> Complex64 {
    if x == 0.0 {
        return coeffs.a + coeffs.b;
    }
    let forward = Complex64::new(0.0, coeffs.k * x).exp();
    let backward = forward.inv();
    if x > 0.0 {
        coeffs.b * forward + coeffs.a * backward
    } else {
        coeffs.a * forward + coeffs.b * backward
    }
}

/// `S = (k_eff + i c′)/(k_eff - i c′)`, with `k_eff = k + k′²/(2k)` when a
/// correction wave number is supplied.
pub fn scattering_amplitude(k: f64, params: &PhysicalParams, k_prime: Option<f64>) -> Result<Complex64> {
    if !(k.is_finite() && k > 0.0) {
        return Err(Error::SingularWavenumber(k));
    }
    let k_eff = match k_prime {
        Some(kp) => k + kp * kp / (2.0 * k),
        None => k,
    };
    scattering_amplitude_complex(Complex64::from(k_eff), params)
}

/// Same formula continued to complex wave numbers; fails at the pole `k = i c′`.
pub fn scattering_amplitude_complex(k: Complex64, params: &PhysicalParams) -> Result<Complex64> {
    let ic = Complex64::new(0.0, params.c_prime());
    let den = k - ic;
    if den.norm() <= 1e-12 * (1.0 + k.norm()) {
        return Err(Error::Pole { re: k.re, im: k.im });
    }
    Ok((k + ic) / den)
}

pub fn scattering_pole(params: &PhysicalParams) -> Complex64 {
    Complex64::new(0.0, params.c_prime())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MassCenterState {
    pub a: Complex64,
    pub b: Complex64,
    pub k_c: f64,
    pub e_c: f64,
}

impl MassCenterState {
    pub fn value(&self, x: f64) -> Complex64 {
        let forward = Complex64::new(0.0, self.k_c * x).exp();
        self.a * forward + self.b * forward.inv()
    }

    pub fn to_wave(&self) -> PiecewisePlaneWave {
        let terms = vec![PlaneWaveTerm::new(self.a, self.k_c), PlaneWaveTerm::new(self.b, -self.k_c)];
        PiecewisePlaneWave::new(terms.clone(), terms).expect("smooth wave")
    }
}

pub fn mass_center_state(e_c: f64, a: Complex64, b: Complex64, params: &PhysicalParams) -> Result<MassCenterState> {
    if !(e_c.is_finite() && e_c >= 0.0) {
        return Err(Error::InvalidEnergy(e_c));
    }
    Ok(MassCenterState { a, b, k_c: params.wavenumber_of(e_c), e_c })
}

/// Normalized bound state `√κ e^{-κ|x|}` of an attractive contact.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BoundState {
    pub kappa: f64,
    pub energy: f64,
    pub amplitude: f64,
}

impl BoundState {
    pub fn value(&self, x: f64) -> f64 {
        self.amplitude * (-self.kappa * x.abs()).exp()
    }

    pub fn to_wave(&self) -> PiecewisePlaneWave {
        let amp = Complex64::from(self.amplitude);
        PiecewisePlaneWave::new(
            vec![PlaneWaveTerm::complex(amp, Complex64::new(0.0, -self.kappa))],
            vec![PlaneWaveTerm::complex(amp, Complex64::new(0.0, self.kappa))],
        )
        .expect("continuous by construction")
    }

    /// Closed-form `∫|φ|² dx` over `[-half, half]`.
    pub fn norm_within(&self, half: f64) -> f64 {
        self.amplitude * self.amplitude * (1.0 - (-2.0 * self.kappa * half).exp()) / self.kappa
    }
}

/// The decay rate follows from the jump condition: `-2κ = c′`.
pub fn bound_state(params: &PhysicalParams) -> Result<BoundState> {
    if params.c() >= 0.0 {
        return Err(Error::NoBoundState(params.c()));
    }
    let kappa = 0.5 * params.c_prime().abs();
    Ok(BoundState { kappa, energy: -params.energy_of(kappa), amplitude: kappa.sqrt() })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::residual::{check_gates, derivative_jump, GateTolerances, TestFamily};
    use proptest::prelude::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn free_coefficients_split_evenly() {
        let p = PhysicalParams::atomic(0.0).unwrap();
        let co = plane_wave_coefficients(2.3, &p, c(1.0, 0.0)).unwrap();
        assert_eq!(co.a, c(0.5, 0.0));
        assert_eq!(co.b, c(0.5, 0.0));
    }

    #[test]
    fn coefficients_at_unit_coupling() {
        // c′ = 1 at k = 1: A = (1 + i/2)/2, B = (1 - i/2)/2.
        let p = PhysicalParams::atomic(1.0 / 2f64.sqrt()).unwrap();
        assert!((p.c_prime() - 1.0).abs() < 1e-15);
        let co = plane_wave_coefficients(1.0, &p, c(1.0, 0.0)).unwrap();
        assert!((co.a - c(0.5, 0.25)).norm() < 1e-15);
        assert!((co.b - c(0.5, -0.25)).norm() < 1e-15);
        assert!(PlaneWaveCoefficients::new(co.a, co.b, co.phi0, co.k, &p).is_ok());
        assert!(PlaneWaveCoefficients::new(c(0.5, 0.5), c(0.5, -0.5), co.phi0, 1.0, &p).is_err());
    }

    #[test]
    fn zero_wavenumber_is_singular() {
        let p = PhysicalParams::atomic(1.0).unwrap();
        assert!(matches!(plane_wave_coefficients(0.0, &p, c(1.0, 0.0)), Err(Error::SingularWavenumber(_))));
        assert!(scattering_amplitude(0.0, &p, None).is_err());
    }

    #[test]
    fn plane_wave_at_origin_and_jump() {
        let p = PhysicalParams::atomic(1.0).unwrap();
        let co = plane_wave_coefficients(1.0, &p, c(1.0, 0.0)).unwrap();
        assert_eq!(evaluate_plane_wave(0.0, &co), co.a + co.b);
        let j = derivative_jump(&co.to_wave(), 1e-3).unwrap();
        assert!((j - c(2f64.sqrt(), 0.0)).norm() < 1e-6);
        let doubled = plane_wave_coefficients(1.0, &p.with_coupling(2.0).unwrap(), c(1.0, 0.0)).unwrap();
        let j2 = derivative_jump(&doubled.to_wave(), 1e-3).unwrap();
        assert!((j2 - 2.0 * j).norm() < 1e-6);
    }

    #[test]
    fn plane_wave_passes_gates() {
        let p = PhysicalParams::atomic(1.0).unwrap();
        let co = plane_wave_coefficients(1.0, &p, c(1.0, 0.0)).unwrap();
        let g = check_gates(&co.to_wave(), &p, 0.5, &TestFamily::new(6.0), 1e-3, GateTolerances::ANALYTIC).unwrap();
        assert!(g.passed(), "{g:?}");
    }

    #[test]
    fn amplitude_special_values() {
        let free = PhysicalParams::atomic(0.0).unwrap();
        assert_eq!(scattering_amplitude(1.0, &free, None).unwrap(), c(1.0, 0.0));
        let unit = PhysicalParams::atomic(1.0 / 2f64.sqrt()).unwrap();
        let s = scattering_amplitude(1.0, &unit, None).unwrap();
        assert!((s - c(0.0, 1.0)).norm() < 1e-12);
        let shifted = scattering_amplitude(1.0, &unit, Some(0.2)).unwrap();
        let k_eff = 1.0 + 0.02;
        assert!((shifted - c(k_eff, 1.0) / c(k_eff, -1.0)).norm() < 1e-15);
    }

    #[test]
    fn amplitude_pole() {
        let p = PhysicalParams::atomic(-1.0).unwrap();
        let pole = scattering_pole(&p);
        assert!(matches!(scattering_amplitude_complex(pole, &p), Err(Error::Pole { .. })));
        assert!(scattering_amplitude_complex(pole + 0.1, &p).is_ok());
    }

    #[test]
    fn coefficient_ratio_is_amplitude_at_half_coupling() {
        let p = PhysicalParams::atomic(0.8).unwrap();
        let half = p.with_coupling(0.4).unwrap();
        for k in [0.3, 1.0, 4.0] {
            let co = plane_wave_coefficients(k, &p, c(1.0, 0.0)).unwrap();
            let s = scattering_amplitude(k, &half, None).unwrap();
            assert!((co.ratio() - s).norm() < 1e-14);
        }
    }

    #[test]
    fn hard_core_and_free_limits() {
        let k = 1.0;
        let weak = PhysicalParams::atomic(1e-9).unwrap();
        let hard = PhysicalParams::atomic(1e9).unwrap();
        assert!((scattering_amplitude(k, &weak, None).unwrap() - 1.0).norm() < 1e-8);
        assert!((scattering_amplitude(k, &hard, None).unwrap() + 1.0).norm() < 1e-8);
        let mut last = 0.0;
        for i in 1..200 {
            let cc = 0.05 * i as f64;
            let phase = scattering_amplitude(k, &PhysicalParams::atomic(cc).unwrap(), None).unwrap().arg();
            assert!(phase > last);
            last = phase;
        }
    }

    #[test]
    fn mass_center_states() {
        let p = PhysicalParams::atomic(0.0).unwrap();
        let rest = mass_center_state(0.0, c(0.3, 0.0), c(0.2, 0.1), &p).unwrap();
        assert!((rest.value(3.7) - c(0.5, 0.1)).norm() < 1e-15);
        let moving = mass_center_state(0.5, c(1.0, 0.0), c(0.0, 0.0), &p).unwrap();
        assert!((moving.k_c - 1.0).abs() < 1e-15);
        assert!(matches!(mass_center_state(-1.0, c(1.0, 0.0), c(0.0, 0.0), &p), Err(Error::InvalidEnergy(_))));
        let r = crate::residual::schrodinger_residual(&moving.to_wave(), &p, 0.5, &TestFamily::new(5.0)).unwrap();
        assert!(r < 1e-10);
    }

    #[test]
    fn bound_state_closed_form() {
        let p = PhysicalParams::atomic(-1.0).unwrap();
        let b = bound_state(&p).unwrap();
        assert!((b.kappa - 2f64.sqrt() / 2.0).abs() < 1e-15);
        assert!((b.energy + 0.25).abs() < 1e-15);
        assert!((b.norm_within(f64::INFINITY) - 1.0).abs() < 1e-15);
        let weak = bound_state(&PhysicalParams::atomic(-1e-6).unwrap()).unwrap();
        assert!(weak.energy.abs() < 1e-12);
        assert!(matches!(bound_state(&PhysicalParams::atomic(0.0).unwrap()), Err(Error::NoBoundState(_))));
        let general = bound_state(&PhysicalParams::new(1.5, 2.0, -0.7).unwrap()).unwrap();
        assert!((general.energy + 2.0 * 0.49 / (4.0 * 2.25)).abs() < 1e-15);
    }

    #[test]
    fn bound_state_passes_gates() {
        let p = PhysicalParams::atomic(-1.0).unwrap();
        let b = bound_state(&p).unwrap();
        let g = check_gates(&b.to_wave(), &p, b.energy, &TestFamily::new(4.0), 1e-3, GateTolerances::ANALYTIC).unwrap();
        assert!(g.passed(), "{g:?}");
    }

    proptest! {
        #[test]
        fn unitarity(log_k in -3.0f64..3.0, c_prime in -20.0f64..20.0) {
            let p = PhysicalParams::atomic(c_prime / 2f64.sqrt()).unwrap();
            let s = scattering_amplitude(10f64.powf(log_k), &p, None).unwrap();
            prop_assert!((s.norm() - 1.0).abs() < 1e-12);
        }

        #[test]
        fn exchange_symmetry(x in -50.0f64..50.0, k in 0.01f64..10.0, coupling in -5.0f64..5.0) {
            let p = PhysicalParams::atomic(coupling).unwrap();
            let co = plane_wave_coefficients(k, &p, c(0.7, -0.2)).unwrap();
            let a = evaluate_plane_wave(x, &co);
            let b = evaluate_plane_wave(-x, &co);
            prop_assert!((a - b).norm() <= 1e-12 * (1.0 + a.norm()));
        }

        #[test]
        fn coefficient_relations(k in 0.01f64..100.0, coupling in -50.0f64..50.0, re in -2.0f64..2.0, im in -2.0f64..2.0) {
            let p = PhysicalParams::atomic(coupling).unwrap();
            let co = plane_wave_coefficients(k, &p, c(re, im)).unwrap();
            let scale = co.a.norm().max(co.b.norm()).max(1e-300);
            // A = B + i c′φ0/(2k) and B = A - i c′φ0/(2k) together with A + B = φ0
            let shift = Complex64::i() * co.phi0 * (p.c_prime() / (2.0 * k));
            prop_assert!((co.a - co.b - shift).norm() <= 1e-12 * scale);
            prop_assert!((co.b - (co.a - shift)).norm() <= 1e-12 * scale);
            prop_assert!((co.a + co.b - co.phi0).norm() <= 1e-12 * scale);
        }
    }
}
