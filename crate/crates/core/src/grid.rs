//! Uniform box grids with a node at the origin.
//!
//! Every quadrature here treats `[-L/2, 0]` and `[0, L/2]` as separate
//! segments so that integrands with a kink at the origin (wavefunctions
//! obeying the contact matching condition) keep their full order.

use std::ops::{Add, Mul};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoxDomain {
    length: f64,
    n_points: usize,
}

impl BoxDomain {
    pub fn new(length: f64, n_points: usize) -> Result<Self> {
        if !(length.is_finite() && length > 0.0) {
            return Err(Error::InvalidParameter(format!("box length must be positive, got {length}")));
        }
        if n_points < 3 || n_points % 2 == 0 {
            return Err(Error::InvalidParameter(format!(
                "n_points must be odd and at least 3 so that x = 0 is a node, got {n_points}"
            )));
        }
        Ok(Self { length, n_points })
    }

    pub fn length(&self) -> f64 {
        self.length
    }

    pub fn n_points(&self) -> usize {
        self.n_points
    }

    /// Index of the x = 0 node.
    pub fn center(&self) -> usize {
        self.n_points / 2
    }

    pub fn spacing(&self) -> f64 {
        self.length / (self.n_points - 1) as f64
    }

    pub fn half_length(&self) -> f64 {
        0.5 * self.length
    }

    pub fn node(&self, i: usize) -> f64 {
        (i as f64 - self.center() as f64) * self.spacing()
    }

    pub fn nodes(&self) -> Vec<f64> {
        (0..self.n_points).map(|i| self.node(i)).collect()
    }

    pub fn contains(&self, x: f64) -> bool {
        x.abs() <= self.half_length() * (1.0 + 1e-12)
    }

    /// Nearest node index to `x` (clamped to the box).
    pub fn nearest_index(&self, x: f64) -> usize {
        let i = (x / self.spacing() + self.center() as f64).round();
        i.clamp(0.0, (self.n_points - 1) as f64) as usize
    }

    /// Weights of one half; `segment_weights()[j]` belongs to the node at
    /// distance `j·h` from the origin.
    pub fn segment_weights(&self) -> Vec<f64> {
        composite_weights(self.center(), self.spacing())
    }

    /// Combined weights for integrands continuous at the origin.
    pub fn weights(&self) -> Vec<f64> {
        let half = self.segment_weights();
        let m = self.center();
        let mut w = vec![0.0; self.n_points];
        for (j, wj) in half.iter().enumerate() {
            w[m - j] += wj;
            w[m + j] += wj;
        }
        w
    }

    pub fn integrate<T>(&self, values: &[T]) -> T
    where
        T: Copy + Default + Add<Output = T> + Mul<f64, Output = T>,
    {
        assert_eq!(values.len(), self.n_points);
        let w = self.weights();
        values
            .iter()
            .zip(w.iter())
            .fold(T::default(), |acc, (v, wi)| acc + *v * *wi)
    }

    /// Integrates a function whose left and right limits differ at the origin.
    /// `left` is evaluated on nodes `x <= 0`, `right` on `x >= 0`.
    pub fn integrate_sides<T, L, R>(&self, mut left: L, mut right: R) -> T
    where
        T: Copy + Default + Add<Output = T> + Mul<f64, Output = T>,
        L: FnMut(usize, f64) -> T,
        R: FnMut(usize, f64) -> T,
    {
        let half = self.segment_weights();
        let m = self.center();
        let mut acc = T::default();
        for (j, wj) in half.iter().enumerate().rev() {
            let i = m - j;
            acc = acc + left(i, self.node(i)) * *wj;
        }
        for (j, wj) in half.iter().enumerate() {
            let i = m + j;
            acc = acc + right(i, self.node(i)) * *wj;
        }
        acc
    }

    /// Running integral `∫_{-L/2}^{x_i} f` at every node.
    pub fn cumulative(&self, values: &[Complex64]) -> Vec<Complex64> {
        assert_eq!(values.len(), self.n_points);
        let m = self.center();
        let h = self.spacing();
        let left = cumulative_segment(&values[..=m], h);
        let right = cumulative_segment(&values[m..], h);
        let mut out = left;
        let offset = out[m];
        out.extend(right.iter().skip(1).map(|v| *v + offset));
        out
    }
}

pub fn build_grid(length: f64, n_points: usize) -> Result<BoxDomain> {
    BoxDomain::new(length, n_points)
}

/// Composite Simpson weights on `intervals` equal steps, closing with a
/// 3/8 panel when the interval count is odd.
fn composite_weights(intervals: usize, h: f64) -> Vec<f64> {
    let mut w = vec![0.0; intervals + 1];
    match intervals {
        0 => {}
        1 => {
            w[0] = 0.5 * h;
            w[1] = 0.5 * h;
        }
        _ => {
            let simpson_end = if intervals % 2 == 0 { intervals } else { intervals - 3 };
            let mut i = 0;
            while i < simpson_end {
                w[i] += h / 3.0;
                w[i + 1] += 4.0 * h / 3.0;
                w[i + 2] += h / 3.0;
                i += 2;
            }
            if simpson_end < intervals {
                let s = simpson_end;
                w[s] += 3.0 * h / 8.0;
                w[s + 1] += 9.0 * h / 8.0;
                w[s + 2] += 9.0 * h / 8.0;
                w[s + 3] += 3.0 * h / 8.0;
            }
        }
    }
    w
}

/// Fourth-order running integral over one smooth segment.
fn cumulative_segment(f: &[Complex64], h: f64) -> Vec<Complex64> {
    let n = f.len();
    let mut out = vec![Complex64::default(); n];
    if n < 2 {
        return out;
    }
    let intervals = n - 1;
    for j in 0..intervals {
        let piece = match intervals {
            1 => (f[0] + f[1]) * (0.5 * h),
            2 => {
                if j == 0 {
                    (f[0] * 5.0 + f[1] * 8.0 - f[2]) * (h / 12.0)
                } else {
                    (f[2] * 5.0 + f[1] * 8.0 - f[0]) * (h / 12.0)
                }
            }
            _ => {
                if j == 0 {
                    (f[0] * 9.0 + f[1] * 19.0 - f[2] * 5.0 + f[3]) * (h / 24.0)
                } else if j == intervals - 1 {
                    (f[j + 1] * 9.0 + f[j] * 19.0 - f[j - 1] * 5.0 + f[j - 2]) * (h / 24.0)
                } else {
                    (f[j] * 13.0 + f[j + 1] * 13.0 - f[j - 1] - f[j + 2]) * (h / 24.0)
                }
            }
        };
        out[j + 1] = out[j] + piece;
    }
    out
}

/// Finite-difference weights (Fornberg) for derivatives up to `order` at `z`
/// from samples at `x`. Row `d` holds the weights of the `d`-th derivative.
pub(crate) fn fd_weights(z: f64, x: &[f64], order: usize) -> Vec<Vec<f64>> {
    let n = x.len();
    let mut c = vec![vec![0.0; n]; order + 1];
    let mut c1 = 1.0;
    let mut c4 = x[0] - z;
    c[0][0] = 1.0;
    for i in 1..n {
        let mn = i.min(order);
        let mut c2 = 1.0;
        let c5 = c4;
        c4 = x[i] - z;
        for j in 0..i {
            let c3 = x[i] - x[j];
            c2 *= c3;
            if j == i - 1 {
                for k in (1..=mn).rev() {
                    c[k][i] = c1 * (k as f64 * c[k - 1][i - 1] - c5 * c[k][i - 1]) / c2;
                }
                c[0][i] = -c1 * c5 * c[0][i - 1] / c2;
            }
            for k in (1..=mn).rev() {
                c[k][j] = (c4 * c[k][j] - k as f64 * c[k - 1][j]) / c3;
            }
            c[0][j] = c4 * c[0][j] / c3;
        }
        c1 = c2;
    }
    c
}

/// Derivative of order `order` at every node of a smooth segment using a
/// five-point stencil kept inside the segment.
pub(crate) fn segment_derivative(f: &[Complex64], h: f64, order: usize) -> Vec<Complex64> {
    let n = f.len();
    let width = n.min(5);
    let offsets: Vec<f64> = (0..width).map(|j| j as f64).collect();
    (0..n)
        .map(|i| {
            let start = i.saturating_sub(width / 2).min(n - width);
            let z = (i - start) as f64;
            let w = fd_weights(z, &offsets, order);
            let scale = h.powi(order as i32);
            (0..width)
                .map(|j| f[start + j] * w[order][j])
                .fold(Complex64::default(), |a, b| a + b)
                / scale
        })
        .collect()
}
