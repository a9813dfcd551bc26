//! Weak-form checks of the relative-motion equation
//! `-(ħ²/2m) φ'' + (c/√2) δ(x) φ = E φ`.
//!
//! Pointwise second derivatives do not exist at the contact point, so the
//! equation is tested against a family of compactly supported bumps `w`:
//!
//! `r(w) = ∫ (ħ²/2m) φ' w' dx + (c/√2) φ(0) w(0) - E ∫ φ w dx`.
//!
//! For sampled states the kinetic term is moved onto the test function,
//! `∫ φ' w' = -∫ φ w''`, which needs only continuity of `φ`.

use gauss_quad::legendre::GaussLegendre;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::grid::BoxDomain;
use crate::params::PhysicalParams;
use crate::wave::{GridWaveFunction, PiecewisePlaneWave, Side, WaveFunction};

const BUMP_POWER: i32 = 8;
const FAMILY_SIZE: usize = 7;
const FAMILY_SEED: u64 = 0x5eed_c0de;

/// `w(x) = (1 - t²)^8`, `t = (x - center)/radius`, zero outside `|t| < 1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Bump {
    pub center: f64,
    pub radius: f64,
}

impl Bump {
    pub fn support(&self) -> (f64, f64) {
        (self.center - self.radius, self.center + self.radius)
    }

    fn t(&self, x: f64) -> Option<f64> {
        let t = (x - self.center) / self.radius;
        (t.abs() < 1.0).then_some(t)
    }

    pub fn value(&self, x: f64) -> f64 {
        self.t(x).map_or(0.0, |t| (1.0 - t * t).powi(BUMP_POWER))
    }

    pub fn first(&self, x: f64) -> f64 {
        let p = BUMP_POWER as f64;
        self.t(x)
            .map_or(0.0, |t| -2.0 * p * t * (1.0 - t * t).powi(BUMP_POWER - 1) / self.radius)
    }

    pub fn second(&self, x: f64) -> f64 {
        let p = BUMP_POWER as f64;
        self.t(x).map_or(0.0, |t| {
            let s = 1.0 - t * t;
            -2.0 * p * s.powi(BUMP_POWER - 2) * (s - 2.0 * (p - 1.0) * t * t)
                / (self.radius * self.radius)
        })
    }
}

/// Seven bumps inside `[-window, window]`: three centred on the contact
/// point, four at seeded random positions.
#[derive(Debug, Clone, PartialEq)]
pub struct TestFamily {
    bumps: Vec<Bump>,
}

impl TestFamily {
    pub fn new(window: f64) -> Self {
        assert!(window > 0.0, "test window must be positive");
        let mut rng = ChaCha8Rng::seed_from_u64(FAMILY_SEED);
        let mut bumps = vec![
            Bump { center: 0.0, radius: window },
            Bump { center: 0.0, radius: 0.5 * window },
            Bump { center: 0.0, radius: 0.25 * window },
        ];
        while bumps.len() < FAMILY_SIZE {
            let center = rng.gen_range(-0.5..0.5) * window;
            let radius = rng.gen_range(0.125..0.5) * window;
            bumps.push(Bump { center, radius });
        }
        Self { bumps }
    }

    /// Family whose supports lie inside the box.
    pub fn for_domain(domain: &BoxDomain) -> Self {
        Self::new(domain.half_length())
    }

    pub fn bumps(&self) -> &[Bump] {
        &self.bumps
    }
}

/// One weak-form evaluation: the residual `r(w)` and the sum of absolute
/// term magnitudes used to make it dimensionless.
#[derive(Debug, Clone, Copy)]
pub struct WeakTerms {
    pub residual: Complex64,
    pub scale: f64,
}

pub trait WeakState {
    fn weak_terms(&self, bump: &Bump, params: &PhysicalParams, energy: f64) -> WeakTerms;
}

fn gauss_rule() -> GaussLegendre {
    GaussLegendre::new(24).expect("degree >= 2")
}

fn panelled<F: FnMut(f64) -> (Complex64, f64)>(
    rule: &GaussLegendre,
    a: f64,
    b: f64,
    panels: usize,
    mut f: F,
) -> (Complex64, f64) {
    let mut acc = (Complex64::default(), 0.0);
    let width = (b - a) / panels as f64;
    for p in 0..panels {
        let lo = a + p as f64 * width;
        let hi = lo + width;
        let half = 0.5 * width;
        for &(node, weight) in rule.as_node_weight_pairs() {
            let x = 0.5 * (hi + lo) + half * node;
            let (v, s) = f(x);
            acc.0 += v * (weight * half);
            acc.1 += s * weight * half;
        }
    }
    acc
}

impl WeakState for PiecewisePlaneWave {
    fn weak_terms(&self, bump: &Bump, params: &PhysicalParams, energy: f64) -> WeakTerms {
        let rule = gauss_rule();
        let kin = params.kinetic_prefactor();
        let kmax = [Side::Negative, Side::Positive]
            .iter()
            .flat_map(|s| self.terms(*s).iter())
            .map(|t| t.wavevector.norm())
            .fold(0.0, f64::max);
        let (a, b) = bump.support();
        let mut pieces = Vec::new();
        if a < 0.0 && b > 0.0 {
            pieces.push((a, 0.0, Side::Negative));
            pieces.push((0.0, b, Side::Positive));
        } else {
            pieces.push((a, b, PiecewisePlaneWave::side_of(0.5 * (a + b))));
        }
        let mut residual = Complex64::default();
        let mut scale = 0.0;
        for (lo, hi, side) in pieces {
            let panels = (4.0 + kmax * (hi - lo) / 2.0).ceil() as usize;
            let (r, s) = panelled(&rule, lo, hi, panels, |x| {
                let phi = self.derivative_on(side, x, 0);
                let dphi = self.derivative_on(side, x, 1);
                let w = bump.value(x);
                let r = dphi * (kin * bump.first(x)) - phi * (energy * w);
                let s = kin * phi.norm() * bump.second(x).abs() + energy.abs() * phi.norm() * w;
                (r, s)
            });
            residual += r;
            scale += s;
        }
        let contact = self.value_at_zero() * (params.relative_coupling() * bump.value(0.0));
        WeakTerms { residual: residual + contact, scale: scale + contact.norm() }
    }
}

impl WeakState for GridWaveFunction {
    fn weak_terms(&self, bump: &Bump, params: &PhysicalParams, energy: f64) -> WeakTerms {
        let kin = params.kinetic_prefactor();
        let d = self.domain();
        let vals = self.values();
        let integrand: Vec<Complex64> = d
            .nodes()
            .iter()
            .zip(vals.iter())
            .map(|(&x, phi)| -phi * (kin * bump.second(x) + energy * bump.value(x)))
            .collect();
        let magnitude: Vec<f64> = d
            .nodes()
            .iter()
            .zip(vals.iter())
            .map(|(&x, phi)| phi.norm() * (kin * bump.second(x).abs() + energy.abs() * bump.value(x)))
            .collect();
        let contact = self.at_zero() * (params.relative_coupling() * bump.value(0.0));
        WeakTerms {
            residual: d.integrate(&integrand) + contact,
            scale: d.integrate(&magnitude) + contact.norm(),
        }
    }
}

/// Largest dimensionless weak residual over the test family.
pub fn schrodinger_residual<S: WeakState + ?Sized>(
    phi: &S,
    params: &PhysicalParams,
    energy: f64,
    family: &TestFamily,
) -> Result<f64> {
    if !energy.is_finite() {
        return Err(Error::InvalidInput(format!("energy must be finite, got {energy}")));
    }
    let mut worst: f64 = 0.0;
    let mut any_support = false;
    for bump in family.bumps() {
        let terms = phi.weak_terms(bump, params, energy);
        if terms.scale > 0.0 {
            any_support = true;
            worst = worst.max(terms.residual.norm() / terms.scale);
        }
    }
    if !any_support {
        return Err(Error::InvalidInput("state vanishes on every test function".into()));
    }
    Ok(worst)
}

/// `φ'(0+) - φ'(0-)` from fourth-order one-sided stencils with step `epsilon`.
pub fn derivative_jump<W: WaveFunction + ?Sized>(phi: &W, epsilon: f64) -> Result<Complex64> {
    if !(epsilon.is_finite() && epsilon > 0.0) {
        return Err(Error::InvalidParameter(format!("stencil step must be positive, got {epsilon}")));
    }
    let (right, left) = phi.samples_about_origin(epsilon, 5)?;
    let stencil = [-25.0, 48.0, -36.0, 16.0, -3.0];
    let forward: Complex64 = right.iter().zip(stencil).map(|(f, w)| f * w).sum();
    let backward: Complex64 = left.iter().zip(stencil).map(|(f, w)| f * w).sum();
    Ok((forward + backward) / (12.0 * epsilon))
}

/// Outcome of the two checks every solver output must pass.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct GateReport {
    pub residual: f64,
    pub jump: Complex64,
    pub expected_jump: Complex64,
    /// `|jump - c′φ(0)| / |φ(0)|`, or the absolute error when `φ(0) = 0`.
    pub jump_error: f64,
    pub residual_tolerance: f64,
    pub jump_tolerance: f64,
}

impl GateReport {
    pub fn residual_ok(&self) -> bool {
        self.residual <= self.residual_tolerance
    }

    pub fn jump_ok(&self) -> bool {
        self.jump_error <= self.jump_tolerance
    }

    pub fn passed(&self) -> bool {
        self.residual_ok() && self.jump_ok()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GateTolerances {
    pub residual: f64,
    pub jump: f64,
}

impl GateTolerances {
    pub const ANALYTIC: Self = Self { residual: 1e-8, jump: 1e-6 };
    pub const GRID: Self = Self { residual: 1e-6, jump: 1e-6 };
}

pub fn check_gates<S>(
    phi: &S,
    params: &PhysicalParams,
    energy: f64,
    family: &TestFamily,
    epsilon: f64,
    tolerances: GateTolerances,
) -> Result<GateReport>
where
    S: WeakState + WaveFunction + ?Sized,
{
    let residual = schrodinger_residual(phi, params, energy, family)?;
    let jump = derivative_jump(phi, epsilon)?;
    let at_zero = phi.value(0.0);
    let expected_jump = at_zero * params.c_prime();
    let err = (jump - expected_jump).norm();
    let jump_error = if at_zero.norm() > 0.0 { err / at_zero.norm() } else { err };
    Ok(GateReport {
        residual,
        jump,
        expected_jump,
        jump_error,
        residual_tolerance: tolerances.residual,
        jump_tolerance: tolerances.jump,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::build_grid;
    use crate::wave::PlaneWaveTerm;

    fn free_wave(k: f64) -> PiecewisePlaneWave {
        let t = vec![PlaneWaveTerm::new(Complex64::from(1.0), k)];
        PiecewisePlaneWave::new(t.clone(), t).unwrap()
    }

    // Eq. (11) form with coefficients chosen by hand.
    fn even_wave(k: f64, a: Complex64, b: Complex64) -> PiecewisePlaneWave {
        PiecewisePlaneWave::new(
            vec![PlaneWaveTerm::new(a, k), PlaneWaveTerm::new(b, -k)],
            vec![PlaneWaveTerm::new(b, k), PlaneWaveTerm::new(a, -k)],
        )
        .unwrap()
    }

    #[test]
    fn bump_derivatives_match_finite_differences() {
        let b = Bump { center: 0.3, radius: 1.7 };
        let h = 1e-5;
        for x in [-1.2, -0.1, 0.4, 1.5] {
            let d1 = (b.value(x + h) - b.value(x - h)) / (2.0 * h);
            let d2 = (b.first(x + h) - b.first(x - h)) / (2.0 * h);
            assert!((d1 - b.first(x)).abs() < 1e-8);
            assert!((d2 - b.second(x)).abs() < 1e-7);
        }
        assert_eq!(b.value(2.5), 0.0);
    }

    #[test]
    fn family_is_deterministic_and_covers_origin() {
        let a = TestFamily::new(3.0);
        let b = TestFamily::new(3.0);
        assert_eq!(a, b);
        assert_eq!(a.bumps().len(), 7);
        for bump in a.bumps() {
            let (lo, hi) = bump.support();
            assert!(lo >= -3.0 - 1e-12 && hi <= 3.0 + 1e-12);
        }
        assert!(a.bumps().iter().filter(|b| b.value(0.0) > 0.0).count() >= 3);
    }

    #[test]
    fn free_particle_has_vanishing_residual() {
        let p = PhysicalParams::atomic(0.0).unwrap();
        let k = 1.7;
        let r = schrodinger_residual(&free_wave(k), &p, p.energy_of(k), &TestFamily::new(5.0)).unwrap();
        assert!(r < 1e-10, "residual {r}");
    }

    #[test]
    fn missing_jump_is_detected() {
        let p = PhysicalParams::atomic(1.0).unwrap();
        let half = Complex64::from(0.5);
        let phi = even_wave(1.0, half, half);
        let r = schrodinger_residual(&phi, &p, 0.5, &TestFamily::new(5.0)).unwrap();
        assert!(r > 1e-3, "residual {r}");
    }

    #[test]
    fn jump_of_smooth_wave_vanishes() {
        let j = derivative_jump(&free_wave(1.0), 1e-3).unwrap();
        assert!(j.norm() < 1e-10);
    }

    #[test]
    fn jump_of_kinked_wave() {
        // φ0 = 1 and A − B = i c′/(2k): jump = c′.
        let cp = 2f64.sqrt();
        let a = Complex64::new(0.5, cp / 4.0);
        let b = Complex64::new(0.5, -cp / 4.0);
        let j = derivative_jump(&even_wave(1.0, a, b), 1e-3).unwrap();
        assert!((j - Complex64::from(cp)).norm() < 1e-6);
    }

    #[test]
    fn grid_residual_of_free_wave() {
        let g = build_grid(20.0, 2001).unwrap();
        let p = PhysicalParams::atomic(0.0).unwrap();
        let phi = free_wave(1.0).sample(&g);
        let r = schrodinger_residual(&phi, &p, 0.5, &TestFamily::for_domain(&g)).unwrap();
        assert!(r < 1e-8, "residual {r}");
    }

    #[test]
    fn zero_state_has_no_residual() {
        let g = build_grid(2.0, 21).unwrap();
        let p = PhysicalParams::atomic(1.0).unwrap();
        let phi = GridWaveFunction::from_fn(&g, |_| Complex64::default()).unwrap();
        assert!(schrodinger_residual(&phi, &p, 0.5, &TestFamily::for_domain(&g)).is_err());
    }
}
