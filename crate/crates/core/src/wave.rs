use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grid::{fd_weights, segment_derivative, BoxDomain};

/// Which one-sided limit to take at the origin.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Negative,
    Positive,
}

pub trait WaveFunction {
    fn value(&self, x: f64) -> Complex64;

    /// Samples at `±j·step`, `j = 0..count`, as `(right, left)`.
    fn samples_about_origin(&self, step: f64, count: usize) -> Result<(Vec<Complex64>, Vec<Complex64>)> {
        let right = (0..count).map(|j| self.value(j as f64 * step)).collect();
        let left = (0..count).map(|j| self.value(-(j as f64) * step)).collect();
        Ok((right, left))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PlaneWaveTerm {
    pub amplitude: Complex64,
    /// Complex wavevector; `e^{i q x}` with `Im q != 0` describes decaying states.
    pub wavevector: Complex64,
}

impl PlaneWaveTerm {
    pub fn new(amplitude: Complex64, wavevector: f64) -> Self {
        Self { amplitude, wavevector: Complex64::from(wavevector) }
    }

    pub fn complex(amplitude: Complex64, wavevector: Complex64) -> Self {
        Self { amplitude, wavevector }
    }

    fn derivative(&self, x: f64, order: u32) -> Complex64 {
        let iq = Complex64::i() * self.wavevector;
        self.amplitude * iq.powu(order) * (iq * x).exp()
    }
}

/// Sum of exponentials on each side of the origin.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PiecewisePlaneWave {
    negative: Vec<PlaneWaveTerm>,
    positive: Vec<PlaneWaveTerm>,
    value_at_zero: Complex64,
}

impl PiecewisePlaneWave {
    /// Builds the wave and checks continuity at the origin.
    pub fn new(negative: Vec<PlaneWaveTerm>, positive: Vec<PlaneWaveTerm>) -> Result<Self> {
        let left: Complex64 = negative.iter().map(|t| t.amplitude).sum();
        let right: Complex64 = positive.iter().map(|t| t.amplitude).sum();
        let scale = negative
            .iter()
            .chain(positive.iter())
            .map(|t| t.amplitude.norm())
            .fold(0.0, f64::max)
            .max(f64::MIN_POSITIVE);
        if !(left - right).norm().le(&(1e-12 * scale)) {
            return Err(Error::InvalidInput(format!(
                "piecewise wave is discontinuous at x = 0: {left} vs {right}"
            )));
        }
        Ok(Self { negative, positive, value_at_zero: 0.5 * (left + right) })
    }

    pub fn terms(&self, side: Side) -> &[PlaneWaveTerm] {
        match side {
            Side::Negative => &self.negative,
            Side::Positive => &self.positive,
        }
    }

    pub fn value_at_zero(&self) -> Complex64 {
        self.value_at_zero
    }

    pub fn side_of(x: f64) -> Side {
        if x < 0.0 {
            Side::Negative
        } else {
            Side::Positive
        }
    }

    /// `order`-th derivative using the terms of `side` (regular part only).
    pub fn derivative_on(&self, side: Side, x: f64, order: u32) -> Complex64 {
        self.terms(side).iter().map(|t| t.derivative(x, order)).sum()
    }

    pub fn derivative(&self, x: f64, order: u32) -> Complex64 {
        self.derivative_on(Self::side_of(x), x, order)
    }

    pub fn scaled(&self, factor: Complex64) -> Self {
        let scale = |ts: &[PlaneWaveTerm]| {
            ts.iter()
                .map(|t| PlaneWaveTerm::complex(t.amplitude * factor, t.wavevector))
                .collect()
        };
        Self {
            negative: scale(&self.negative),
            positive: scale(&self.positive),
            value_at_zero: self.value_at_zero * factor,
        }
    }

    /// `self - other` as a single piecewise wave.
    pub fn difference(&self, other: &Self) -> Self {
        let join = |a: &[PlaneWaveTerm], b: &[PlaneWaveTerm]| {
            a.iter()
                .copied()
                .chain(b.iter().map(|t| PlaneWaveTerm::complex(-t.amplitude, t.wavevector)))
                .collect()
        };
        Self {
            negative: join(&self.negative, &other.negative),
            positive: join(&self.positive, &other.positive),
            value_at_zero: self.value_at_zero - other.value_at_zero,
        }
    }

    /// Largest of `|φ(x) - φ(-x)| / max|φ|` over the given points.
    pub fn parity_defect(&self, points: &[f64]) -> f64 {
        let mut defect: f64 = 0.0;
        let mut scale: f64 = f64::MIN_POSITIVE;
        for &x in points {
            let a = self.value(x);
            let b = self.value(-x);
            defect = defect.max((a - b).norm());
            scale = scale.max(a.norm()).max(b.norm());
        }
        defect / scale
    }

    pub fn sample(&self, domain: &BoxDomain) -> GridWaveFunction {
        let values = domain.nodes().iter().map(|&x| self.value(x)).collect();
        GridWaveFunction { domain: domain.clone(), values }
    }
}

impl WaveFunction for PiecewisePlaneWave {
    fn value(&self, x: f64) -> Complex64 {
        if x == 0.0 {
            self.value_at_zero
        } else {
            self.derivative(x, 0)
        }
    }
}

/// Complex samples at the grid nodes of a box.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridWaveFunction {
    domain: BoxDomain,
    values: Vec<Complex64>,
}

impl GridWaveFunction {
    pub fn new(domain: BoxDomain, values: Vec<Complex64>) -> Result<Self> {
        if values.len() != domain.n_points() {
            return Err(Error::InvalidInput(format!(
                "{} samples for a grid of {} nodes",
                values.len(),
                domain.n_points()
            )));
        }
        if let Some(i) = values.iter().position(|v| !(v.re.is_finite() && v.im.is_finite())) {
            return Err(Error::InvalidInput(format!("non-finite sample at node {i}")));
        }
        Ok(Self { domain, values })
    }

    pub fn from_fn(domain: &BoxDomain, f: impl Fn(f64) -> Complex64) -> Result<Self> {
        let values = domain.nodes().into_iter().map(f).collect();
        Self::new(domain.clone(), values)
    }

    pub fn domain(&self) -> &BoxDomain {
        &self.domain
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<Complex64> {
        self.values
    }

    pub fn at_zero(&self) -> Complex64 {
        self.values[self.domain.center()]
    }

    pub fn scaled(&self, factor: Complex64) -> Self {
        Self {
            domain: self.domain.clone(),
            values: self.values.iter().map(|v| v * factor).collect(),
        }
    }

    pub fn sup_norm(&self) -> f64 {
        self.values.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }

    /// Relative sup-norm distance `‖self - other‖∞ / ‖other‖∞`.
    pub fn relative_distance(&self, other: &Self) -> f64 {
        let diff = self
            .values
            .iter()
            .zip(other.values.iter())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max);
        let scale = other.sup_norm();
        if scale > 0.0 {
            diff / scale
        } else {
            diff
        }
    }

    /// Derivative of the given order at each node; one-sided at the origin.
    /// Returns `(left, right)` where `left` covers nodes `x <= 0` (index
    /// `0..=center`) and `right` covers `x >= 0` (index `center..n`).
    pub fn one_sided_derivatives(&self, order: usize) -> (Vec<Complex64>, Vec<Complex64>) {
        let m = self.domain.center();
        let h = self.domain.spacing();
        (
            segment_derivative(&self.values[..=m], h, order),
            segment_derivative(&self.values[m..], h, order),
        )
    }

    fn interpolate(&self, x: f64) -> Complex64 {
        if !self.domain.contains(x) {
            return Complex64::default();
        }
        let h = self.domain.spacing();
        let m = self.domain.center();
        let t = x / h;
        let nearest = t.round();
        if (t - nearest).abs() < 1e-9 {
            return self.values[self.domain.nearest_index(x)];
        }
        // cubic Lagrange on the nodes of the same half
        let (lo, hi) = if x < 0.0 { (0, m) } else { (m, self.domain.n_points() - 1) };
        let count = (hi - lo + 1).min(4);
        let base = (t.floor() as isize + m as isize - 1).clamp(lo as isize, (hi + 1 - count) as isize) as usize;
        let xs: Vec<f64> = (0..count).map(|j| self.domain.node(base + j)).collect();
        let w = fd_weights(x, &xs, 0);
        (0..count).map(|j| self.values[base + j] * w[0][j]).sum()
    }
}

impl WaveFunction for GridWaveFunction {
    fn value(&self, x: f64) -> Complex64 {
        self.interpolate(x)
    }

    fn samples_about_origin(&self, step: f64, count: usize) -> Result<(Vec<Complex64>, Vec<Complex64>)> {
        let h = self.domain.spacing();
        let multiple = (step / h).round();
        if step < h * (1.0 - 1e-9) || multiple < 1.0 {
            return Err(Error::Resolution { epsilon: step, spacing: h });
        }
        let stride = multiple as usize;
        let m = self.domain.center();
        if stride * (count - 1) > m {
            return Err(Error::InvalidInput(format!(
                "stencil of {count} points at step {step} leaves the box"
            )));
        }
        let right = (0..count).map(|j| self.values[m + j * stride]).collect();
        let left = (0..count).map(|j| self.values[m - j * stride]).collect();
        Ok((right, left))
    }
}

/// States that can be rescaled to unit norm on a box.
pub trait Normalizable: Sized {
    fn norm_squared(&self, domain: &BoxDomain) -> f64;
    fn rescale(&self, factor: f64) -> Self;
    fn origin_value(&self) -> Complex64;
}

impl Normalizable for PiecewisePlaneWave {
    fn norm_squared(&self, domain: &BoxDomain) -> f64 {
        let dens: Vec<f64> = domain.nodes().iter().map(|&x| self.value(x).norm_sqr()).collect();
        domain.integrate(&dens)
    }

    fn rescale(&self, factor: f64) -> Self {
        self.scaled(Complex64::from(factor))
    }

    fn origin_value(&self) -> Complex64 {
        self.value_at_zero
    }
}

impl Normalizable for GridWaveFunction {
    fn norm_squared(&self, domain: &BoxDomain) -> f64 {
        let dens: Vec<f64> = self.values.iter().map(|v| v.norm_sqr()).collect();
        domain.integrate(&dens)
    }

    fn rescale(&self, factor: f64) -> Self {
        self.scaled(Complex64::from(factor))
    }

    fn origin_value(&self) -> Complex64 {
        self.at_zero()
    }
}

/// Scales `phi` to unit norm on `domain`; returns the state and its value at 0.
pub fn normalize<W: Normalizable>(phi: &W, domain: &BoxDomain) -> Result<(W, Complex64)> {
    let n2 = phi.norm_squared(domain);
    if !(n2.is_finite() && n2 > 0.0) {
        return Err(Error::InvalidInput("cannot normalize a zero-norm state".into()));
    }
    let out = phi.rescale(1.0 / n2.sqrt());
    let at_zero = out.origin_value();
    Ok((out, at_zero))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::build_grid;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn constant_normalizes_to_one_half() {
        let g = build_grid(4.0, 101).unwrap();
        let phi = GridWaveFunction::from_fn(&g, |_| c(1.0, 0.0)).unwrap();
        let (n, at0) = normalize(&phi, &g).unwrap();
        assert!(n.values().iter().all(|v| (v - c(0.5, 0.0)).norm() < 1e-14));
        assert!((at0 - c(0.5, 0.0)).norm() < 1e-14);
    }

    #[test]
    fn zero_function_cannot_be_normalized() {
        let g = build_grid(4.0, 101).unwrap();
        let phi = GridWaveFunction::from_fn(&g, |_| c(0.0, 0.0)).unwrap();
        assert!(matches!(normalize(&phi, &g), Err(Error::InvalidInput(_))));
    }

    #[test]
    fn grid_rejects_mismatch_and_nan() {
        let g = build_grid(4.0, 5).unwrap();
        assert!(GridWaveFunction::new(g.clone(), vec![c(0.0, 0.0); 4]).is_err());
        let mut v = vec![c(0.0, 0.0); 5];
        v[2] = c(f64::NAN, 0.0);
        assert!(GridWaveFunction::new(g, v).is_err());
    }

    #[test]
    fn discontinuous_wave_is_rejected() {
        let neg = vec![PlaneWaveTerm::new(c(1.0, 0.0), 1.0)];
        let pos = vec![PlaneWaveTerm::new(c(2.0, 0.0), 1.0)];
        assert!(PiecewisePlaneWave::new(neg, pos).is_err());
    }

    #[test]
    fn piecewise_limits_agree_at_origin() {
        let a = c(0.5, 0.3);
        let b = c(0.5, -0.3);
        let w = PiecewisePlaneWave::new(
            vec![PlaneWaveTerm::new(a, 1.0), PlaneWaveTerm::new(b, -1.0)],
            vec![PlaneWaveTerm::new(b, 1.0), PlaneWaveTerm::new(a, -1.0)],
        )
        .unwrap();
        let left = w.derivative_on(Side::Negative, 0.0, 0);
        let right = w.derivative_on(Side::Positive, 0.0, 0);
        assert!((left - right).norm() < 1e-12);
        assert!((w.value_at_zero() - left).norm() < 1e-15);
        assert!((w.value(1e-300) - w.value(0.0)).norm() < 1e-12);
    }

    #[test]
    fn grid_interpolation_is_cubic_exact_within_a_half() {
        let g = build_grid(4.0, 41).unwrap();
        let f = |x: f64| c(x * x * x - x, 2.0 * x * x);
        let phi = GridWaveFunction::from_fn(&g, |x| if x >= 0.0 { f(x) } else { f(-x) }).unwrap();
        for x in [0.013, 0.77, 1.93, -0.55, -1.999] {
            let expect = if x >= 0.0 { f(x) } else { f(-x) };
            assert!((phi.value(x) - expect).norm() < 1e-12, "x = {x}");
        }
        assert_eq!(phi.value(3.0), c(0.0, 0.0));
    }

    #[test]
    fn grid_stencil_requires_resolution() {
        let g = build_grid(2.0, 201).unwrap();
        let phi = GridWaveFunction::from_fn(&g, |x| c(x, 0.0)).unwrap();
        assert!(matches!(phi.samples_about_origin(0.001, 5), Err(Error::Resolution { .. })));
        let (r, l) = phi.samples_about_origin(0.02, 5).unwrap();
        assert!((r[4].re - 0.08).abs() < 1e-12);
        assert!((l[4].re + 0.08).abs() < 1e-12);
    }
}
