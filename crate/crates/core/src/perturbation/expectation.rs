use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::analytic::plane_wave_coefficients;
use crate::error::{Error, Result};
use crate::grid::BoxDomain;
use crate::params::PhysicalParams;
use crate::wave::{normalize, GridWaveFunction, PiecewisePlaneWave, Side};

/// Node samples of a state and its derivatives taken separately on each
/// half of the box, in the layout of
/// [`GridWaveFunction::one_sided_derivatives`].
pub trait SidedSamples {
    fn sided(&self, domain: &BoxDomain, order: u32) -> Result<(Vec<Complex64>, Vec<Complex64>)>;
    fn origin(&self) -> Complex64;
}

impl SidedSamples for PiecewisePlaneWave {
    fn sided(&self, domain: &BoxDomain, order: u32) -> Result<(Vec<Complex64>, Vec<Complex64>)> {
        let m = domain.center();
        let at = |side: Side, i: usize| {
            if order == 0 && i == m {
                self.value_at_zero()
            } else {
                self.derivative_on(side, domain.node(i), order)
            }
        };
        Ok((
            (0..=m).map(|i| at(Side::Negative, i)).collect(),
            (m..domain.n_points()).map(|i| at(Side::Positive, i)).collect(),
        ))
    }

    fn origin(&self) -> Complex64 {
        self.value_at_zero()
    }
}

impl SidedSamples for GridWaveFunction {
    fn sided(&self, domain: &BoxDomain, order: u32) -> Result<(Vec<Complex64>, Vec<Complex64>)> {
        if domain != self.domain() {
            return Err(Error::Domain("grid state lives on a different box".into()));
        }
        if order == 0 {
            let m = domain.center();
            return Ok((self.values()[..=m].to_vec(), self.values()[m..].to_vec()));
        }
        Ok(self.one_sided_derivatives(order as usize))
    }

    fn origin(&self) -> Complex64 {
        self.at_zero()
    }
}

fn sided_integral(domain: &BoxDomain, left: &[Complex64], right: &[Complex64]) -> Complex64 {
    let m = domain.center();
    domain.integrate_sides(|i, _| left[i], |i, _| right[i - m])
}

fn pointwise(a: (Vec<Complex64>, Vec<Complex64>), b: &(Vec<Complex64>, Vec<Complex64>)) -> (Vec<Complex64>, Vec<Complex64>) {
    let mul = |u: Vec<Complex64>, v: &[Complex64]| u.iter().zip(v).map(|(x, y)| x.conj() * y).collect();
    (mul(a.0, &b.0), mul(a.1, &b.1))
}

/// `⟨χ|H|ψ⟩` on the box, with `H ψ = -(ħ²/2m) ψ″ + (c/√2) δ ψ` and `ψ″` the
/// second derivative away from the origin.
pub fn matrix_element<X, Y>(chi: &X, psi: &Y, params: &PhysicalParams, domain: &BoxDomain) -> Result<Complex64>
where
    X: SidedSamples + ?Sized,
    Y: SidedSamples + ?Sized,
{
    let bra = chi.sided(domain, 0)?;
    let curvature = psi.sided(domain, 2)?;
    let (l, r) = pointwise(bra, &curvature);
    let kinetic = -sided_integral(domain, &l, &r) * params.kinetic_prefactor();
    let contact = chi.origin().conj() * psi.origin() * params.relative_coupling();
    Ok(kinetic + contact)
}

/// Energy bookkeeping for a normalized state.
///
/// `kinetic` is `-(ħ²/2m)∫φ̄φ″` over `x ≠ 0`, which leaves out the delta
/// carried by `φ″` at a kink; that piece is `contact_kinetic =
/// -(ħ²/2m)φ̄(0)[φ′(0+) - φ′(0-)]`. `kinetic_dirichlet` is `(ħ²/2m)∫|φ′|²`
/// and `form_total` is the quadratic-form energy `kinetic_dirichlet + potential`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EnergyDecomposition {
    pub kinetic: f64,
    pub potential: f64,
    pub total: f64,
    pub contact_kinetic: f64,
    pub kinetic_dirichlet: f64,
    pub form_total: f64,
    pub norm_squared: f64,
}

pub fn expectation_energy<W>(phi: &W, params: &PhysicalParams, domain: &BoxDomain) -> Result<EnergyDecomposition>
where
    W: SidedSamples + ?Sized,
{
    let values = phi.sided(domain, 0)?;
    let dens: (Vec<f64>, Vec<f64>) = (
        values.0.iter().map(|v| v.norm_sqr()).collect(),
        values.1.iter().map(|v| v.norm_sqr()).collect(),
    );
    let m = domain.center();
    let norm_squared = domain.integrate_sides(|i, _| dens.0[i], |i, _| dens.1[i - m]);
    if !((norm_squared - 1.0).abs() <= 1e-6) {
        return Err(Error::Normalization { norm_sq: norm_squared });
    }
    let kin = params.kinetic_prefactor();
    let slope = phi.sided(domain, 1)?;
    let curvature = phi.sided(domain, 2)?;

    let (l, r) = pointwise(values, &curvature);
    let kinetic = -kin * sided_integral(domain, &l, &r).re;
    let (l, r) = pointwise(slope.clone(), &slope);
    let kinetic_dirichlet = kin * sided_integral(domain, &l, &r).re;

    let phi0 = phi.origin();
    let jump = slope.1[0] - slope.0[m];
    let contact_kinetic = -kin * (phi0.conj() * jump).re;
    let potential = params.relative_coupling() * phi0.norm_sqr();
    Ok(EnergyDecomposition {
        kinetic,
        potential,
        total: kinetic + potential,
        contact_kinetic,
        kinetic_dirichlet,
        form_total: kinetic_dirichlet + potential,
        norm_squared,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ParadoxEntry {
    pub length: f64,
    pub n_points: usize,
    pub nominal_energy: f64,
    pub phi0: Complex64,
    pub energy: EnergyDecomposition,
    /// `⟨H⟩ - E0` attributed to the contact term: `(c/√2)|φ(0)|²`.
    pub discrepancy: f64,
    /// `kinetic - E0`.
    pub kinetic_defect: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ParadoxReport {
    pub entries: Vec<ParadoxEntry>,
    /// `discrepancy(L) / discrepancy(4L)`; `None` when the discrepancy vanishes.
    pub ratio_l_4l: Option<f64>,
    pub ratio_4l_16l: Option<f64>,
}

fn paradox_entry(k0: f64, params: &PhysicalParams, domain: &BoxDomain) -> Result<ParadoxEntry> {
    let coeffs = plane_wave_coefficients(k0, params, Complex64::new(1.0, 0.0))?;
    let (state, phi0) = normalize(&coeffs.to_wave(), domain)?;
    let energy = expectation_energy(&state, params, domain)?;
    let nominal_energy = params.energy_of(k0);
    Ok(ParadoxEntry {
        length: domain.length(),
        n_points: domain.n_points(),
        nominal_energy,
        phi0,
        energy,
        discrepancy: energy.potential,
        kinetic_defect: energy.kinetic - nominal_energy,
    })
}

/// Energy bookkeeping of the normalized plane-wave state at `L`, `4L` and
/// `16L` with the node spacing held fixed.
pub fn paradox_report(k0: f64, params: &PhysicalParams, length: f64, n_points: usize) -> Result<ParadoxReport> {
    let base = BoxDomain::new(length, n_points)?;
    let intervals = n_points - 1;
    let entries = [1usize, 4, 16]
        .iter()
        .map(|&f| {
            let domain =
                if f == 1 { base.clone() } else { BoxDomain::new(length * f as f64, intervals * f + 1)? };
            paradox_entry(k0, params, &domain)
        })
        .collect::<Result<Vec<_>>>()?;
    let ratio = |a: &ParadoxEntry, b: &ParadoxEntry| (b.discrepancy != 0.0).then(|| a.discrepancy / b.discrepancy);
    Ok(ParadoxReport {
        ratio_l_4l: ratio(&entries[0], &entries[1]),
        ratio_4l_16l: ratio(&entries[1], &entries[2]),
        entries,
    })
}
