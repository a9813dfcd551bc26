//! Finite-difference oracle: lowest eigenvalue of
//! `-(ħ²/2m) d²/dx² + g δ_σ(x)` on `[-half, half]` with Dirichlet ends and a
//! normalized Gaussian of width `σ` standing in for the delta.

/// Number of eigenvalues below `lambda` of the symmetric tridiagonal matrix
/// (Sturm sequence).
pub fn count_below(diag: &[f64], off: f64, lambda: f64) -> usize {
    let mut count = 0;
    let mut q = 1.0;
    for (i, d) in diag.iter().enumerate() {
        q = if i == 0 { d - lambda } else { d - lambda - off * off / q };
        if q == 0.0 {
            q = -1e-300;
        }
        if q < 0.0 {
            count += 1;
        }
    }
    count
}

pub fn lowest_eigenvalue(kinetic: f64, coupling: f64, sigma: f64, half: f64, h: f64) -> f64 {
    let intervals = (2.0 * half / h).round() as usize;
    let h = 2.0 * half / intervals as f64;
    let norm = 1.0 / (sigma * (2.0 * std::f64::consts::PI).sqrt());
    let diag: Vec<f64> = (1..intervals)
        .map(|i| {
            let x = -half + i as f64 * h;
            2.0 * kinetic / (h * h) + coupling * norm * (-0.5 * (x / sigma).powi(2)).exp()
        })
        .collect();
    let off = -kinetic / (h * h);
    let min_d = diag.iter().copied().fold(f64::INFINITY, f64::min);
    let max_d = diag.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let (mut lo, mut hi) = (min_d - 2.0 * off.abs(), max_d + 2.0 * off.abs());
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if count_below(&diag, off, mid) >= 1 {
            hi = mid;
        } else {
            lo = mid;
        }
        if hi - lo <= 1e-14 * hi.abs().max(1.0) {
            break;
        }
    }
    0.5 * (lo + hi)
}

/// Value at `σ = 0` of the quadratic through three `(σ, E)` points.
pub fn extrapolate_to_zero(points: &[(f64, f64); 3]) -> f64 {
    let mut total = 0.0;
    for (i, &(si, ei)) in points.iter().enumerate() {
        let mut basis = 1.0;
        for (j, &(sj, _)) in points.iter().enumerate() {
            if i != j {
                basis *= (0.0 - sj) / (si - sj);
            }
        }
        total += ei * basis;
    }
    total
}
