//! Pair states and the permutation-symmetrized N-boson wavefunction
//!
//! `ψ(x_1..x_N) = Σ_p Π_{odd i} φ_i(x_{p(i+1)}, x_{p(i)}) θ(x_{p(i+1)} - x_{p(i)})`
//!
//! with `θ(0) = 1/2`.

use std::f64::consts::FRAC_1_SQRT_2;

use num_complex::Complex64;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::analytic::MassCenterState;
use crate::error::{Error, Result};
use crate::perturbation::{CorrectionReport, PerturbedState};
use crate::wave::{GridWaveFunction, PiecewisePlaneWave, WaveFunction};

pub const DEFAULT_MAX_PARTICLES: usize = 8;
const EVENNESS_TOLERANCE: f64 = 1e-10;

/// `(x_c, x_r) = ((x_next + x_prev)/√2, (x_next - x_prev)/√2)`.
pub fn transform_coords(x_next: f64, x_prev: f64) -> (f64, f64) {
    ((x_next + x_prev) * FRAC_1_SQRT_2, (x_next - x_prev) * FRAC_1_SQRT_2)
}

/// Inverse of [`transform_coords`], returning `(x_next, x_prev)`.
pub fn inverse_transform(x_c: f64, x_r: f64) -> (f64, f64) {
    ((x_c + x_r) * FRAC_1_SQRT_2, (x_c - x_r) * FRAC_1_SQRT_2)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum RelativePart {
    PlaneWave(PiecewisePlaneWave),
    Perturbed(PerturbedState),
    Grid(GridWaveFunction),
}

impl RelativePart {
    pub fn value(&self, x: f64) -> Complex64 {
        match self {
            Self::PlaneWave(w) => w.value(x),
            Self::Perturbed(s) => s.value(x),
            Self::Grid(g) => g.value(x),
        }
    }

    fn probe_points(&self) -> Vec<f64> {
        match self {
            Self::Grid(g) => {
                let d = g.domain();
                (d.center()..d.n_points()).map(|i| d.node(i)).collect()
            }
            _ => (0..=256).map(|j| j as f64 * 0.1).collect(),
        }
    }

    /// `max |φ(x) - φ(-x)| / max |φ|` over a fixed set of probes.
    pub fn parity_defect(&self) -> f64 {
        let mut defect: f64 = 0.0;
        let mut scale: f64 = f64::MIN_POSITIVE;
        for x in self.probe_points() {
            let (a, b) = (self.value(x), self.value(-x));
            defect = defect.max((a - b).norm());
            scale = scale.max(a.norm()).max(b.norm());
        }
        defect / scale
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PairState {
    pub mass_center: MassCenterState,
    pub relative: RelativePart,
    /// Unperturbed relative energy `E0`.
    pub e_relative: f64,
    /// Energy correction `E′`, zero unless attached.
    pub e_correction: f64,
}

impl PairState {
    /// Rejects relative parts that are not even in `x_r`.
    pub fn new(mass_center: MassCenterState, relative: RelativePart, e_relative: f64) -> Result<Self> {
        let defect = relative.parity_defect();
        if !(defect <= EVENNESS_TOLERANCE) {
            return Err(Error::ExchangeSymmetry(defect));
        }
        Ok(Self::new_unchecked(mass_center, relative, e_relative))
    }

    pub fn new_unchecked(mass_center: MassCenterState, relative: RelativePart, e_relative: f64) -> Self {
        Self { mass_center, relative, e_relative, e_correction: 0.0 }
    }

    pub fn with_correction(mut self, report: &CorrectionReport) -> Self {
        self.e_correction = report.e_prime;
        self
    }

    pub fn energy(&self) -> f64 {
        self.mass_center.e_c + self.e_relative + self.e_correction
    }
}

pub fn pair_wavefunction(pair: &PairState, x_next: f64, x_prev: f64) -> Complex64 {
    let (xc, xr) = transform_coords(x_next, x_prev);
    pair.mass_center.value(xc) * pair.relative.value(xr)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NBosonState {
    pairs: Vec<PairState>,
}

impl NBosonState {
    pub fn new(pairs: Vec<PairState>) -> Result<Self> {
        if pairs.is_empty() {
            return Err(Error::Parity(0));
        }
        Ok(Self { pairs })
    }

    /// `n/2` copies of one pair.
    pub fn uniform(pair: PairState, n: usize) -> Result<Self> {
        if n < 2 || n % 2 != 0 {
            return Err(Error::Parity(n));
        }
        Ok(Self { pairs: vec![pair; n / 2] })
    }

    pub fn n(&self) -> usize {
        2 * self.pairs.len()
    }

    pub fn pairs(&self) -> &[PairState] {
        &self.pairs
    }
}

fn step(x: f64) -> f64 {
    if x > 0.0 {
        1.0
    } else if x == 0.0 {
        0.5
    } else {
        0.0
    }
}

/// One permutation term: pair `j` takes `(x[p[2j+1]], x[p[2j]])`.
fn sector_term(state: &NBosonState, positions: &[f64], perm: &[usize]) -> Complex64 {
    let mut term = Complex64::new(1.0, 0.0);
    for (j, pair) in state.pairs.iter().enumerate() {
        let (next, prev) = (positions[perm[2 * j + 1]], positions[perm[2 * j]]);
        let theta = step(next - prev);
        if theta == 0.0 {
            return Complex64::default();
        }
        term *= pair_wavefunction(pair, next, prev) * theta;
    }
    term
}

/// Visits every permutation of `0..n` in Heap's order.
fn for_each_permutation(n: usize, mut visit: impl FnMut(&[usize])) {
    let mut perm: Vec<usize> = (0..n).collect();
    let mut counters = vec![0usize; n];
    visit(&perm);
    let mut i = 1;
    while i < n {
        if counters[i] < i {
            if i % 2 == 0 {
                perm.swap(0, i);
            } else {
                perm.swap(counters[i], i);
            }
            visit(&perm);
            counters[i] += 1;
            i = 1;
        } else {
            counters[i] = 0;
            i += 1;
        }
    }
}

pub fn assemble_nboson(state: &NBosonState, positions: &[f64]) -> Result<Complex64> {
    assemble_nboson_capped(state, positions, DEFAULT_MAX_PARTICLES)
}

pub fn assemble_nboson_capped(state: &NBosonState, positions: &[f64], max: usize) -> Result<Complex64> {
    let n = state.n();
    if n > max {
        return Err(Error::TooManyParticles { n, max });
    }
    if positions.len() != n {
        return Err(Error::InvalidInput(format!("expected {n} positions, got {}", positions.len())));
    }
    if positions.iter().any(|x| !x.is_finite()) {
        return Err(Error::InvalidInput("positions must be finite".into()));
    }
    let mut sum = Complex64::default();
    for_each_permutation(n, |p| sum += sector_term(state, positions, p));
    Ok(sum)
}

fn relative_gap(a: Complex64, b: Complex64, reference: f64) -> f64 {
    (a - b).norm() / reference
}

/// Largest relative change of `ψ` under permutations of `positions`, and of
/// each pair function under exchange of its own two arguments. All `n!`
/// permutations are used for `n ≤ 4`; otherwise `trials` seeded random ones.
pub fn check_exchange_symmetry(state: &NBosonState, positions: &[f64], trials: usize, seed: u64) -> Result<f64> {
    let reference = assemble_nboson(state, positions)?;
    if reference.norm() == 0.0 {
        return Err(Error::DegenerateConfiguration);
    }
    let n = state.n();
    let scale = reference.norm();
    let mut worst: f64 = 0.0;
    let mut permuted = vec![0.0; n];
    let mut probe = |perm: &[usize]| -> Result<()> {
        for (slot, &src) in permuted.iter_mut().zip(perm) {
            *slot = positions[src];
        }
        worst = worst.max(relative_gap(assemble_nboson(state, &permuted)?, reference, scale));
        Ok(())
    };
    if n <= 4 {
        let mut all = Vec::new();
        for_each_permutation(n, |p| all.push(p.to_vec()));
        for p in &all {
            probe(p)?;
        }
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut p: Vec<usize> = (0..n).collect();
        for _ in 0..trials {
            p.shuffle(&mut rng);
            probe(&p)?;
        }
    }
    for (j, pair) in state.pairs.iter().enumerate() {
        let (u, v) = (positions[2 * j + 1], positions[2 * j]);
        let (a, b) = (pair_wavefunction(pair, u, v), pair_wavefunction(pair, v, u));
        let pair_scale = a.norm().max(b.norm());
        if pair_scale > 0.0 {
            worst = worst.max(relative_gap(a, b, pair_scale));
        }
    }
    Ok(worst)
}

pub fn total_energy(state: &NBosonState) -> f64 {
    state.pairs.iter().map(PairState::energy).sum()
}
