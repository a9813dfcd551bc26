use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Physical constants entering the relative-motion equation.
///
/// `c_prime` is never stored; it is recomputed from `hbar`, `mass` and `c`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhysicalParams {
    hbar: f64,
    mass: f64,
    c: f64,
}

impl PhysicalParams {
    pub fn new(hbar: f64, mass: f64, c: f64) -> Result<Self> {
        if !(hbar.is_finite() && hbar > 0.0) {
            return Err(Error::InvalidParameter(format!("hbar must be positive, got {hbar}")));
        }
        if !(mass.is_finite() && mass > 0.0) {
            return Err(Error::InvalidParameter(format!("mass must be positive, got {mass}")));
        }
        if !c.is_finite() {
            return Err(Error::InvalidParameter(format!("coupling must be finite, got {c}")));
        }
        Ok(Self { hbar, mass, c })
    }

    /// Atomic units, ħ = m = 1.
    pub fn atomic(c: f64) -> Result<Self> {
        Self::new(1.0, 1.0, c)
    }

    pub fn hbar(&self) -> f64 {
        self.hbar
    }

    pub fn mass(&self) -> f64 {
        self.mass
    }

    pub fn c(&self) -> f64 {
        self.c
    }

    /// Reduced coupling √2·m·c/ħ².
    pub fn c_prime(&self) -> f64 {
        std::f64::consts::SQRT_2 * self.mass * self.c / (self.hbar * self.hbar)
    }

    /// Strength of the delta term in the relative Hamiltonian, c/√2.
    pub fn relative_coupling(&self) -> f64 {
        self.c / std::f64::consts::SQRT_2
    }

    /// ħ²/2m.
    pub fn kinetic_prefactor(&self) -> f64 {
        self.hbar * self.hbar / (2.0 * self.mass)
    }

    pub fn energy_of(&self, k: f64) -> f64 {
        self.kinetic_prefactor() * k * k
    }

    /// Inverse of [`energy_of`](Self::energy_of) for nonnegative energies.
    pub fn wavenumber_of(&self, energy: f64) -> f64 {
        (energy.max(0.0) / self.kinetic_prefactor()).sqrt()
    }

    pub fn with_coupling(&self, c: f64) -> Result<Self> {
        Self::new(self.hbar, self.mass, c)
    }
}

pub fn make_params(hbar: f64, mass: f64, c: f64) -> Result<PhysicalParams> {
    PhysicalParams::new(hbar, mass, c)
}

/// Unperturbed and correction wave numbers of one relative coordinate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RelativeMode {
    pub k0: f64,
    pub k_prime: f64,
    pub e0: f64,
    pub e_prime: f64,
}

impl RelativeMode {
    pub fn new(k0: f64, k_prime: f64, params: &PhysicalParams) -> Result<Self> {
        if !(k0.is_finite() && k0 >= 0.0) {
            return Err(Error::InvalidParameter(format!("k0 must be nonnegative, got {k0}")));
        }
        if !(k_prime.is_finite() && k_prime >= 0.0) {
            return Err(Error::InvalidParameter(format!(
                "k' must be nonnegative, got {k_prime}"
            )));
        }
        Ok(Self {
            k0,
            k_prime,
            e0: params.energy_of(k0),
            e_prime: params.energy_of(k_prime),
        })
    }

    pub fn unperturbed(k0: f64, params: &PhysicalParams) -> Result<Self> {
        Self::new(k0, 0.0, params)
    }

    pub fn total_energy(&self) -> f64 {
        self.e0 + self.e_prime
    }

    /// k² = k0² + k'².
    pub fn total_k_squared(&self) -> f64 {
        self.k0 * self.k0 + self.k_prime * self.k_prime
    }

    /// First-order effective momentum wave number k0 + k'²/(2k0).
    pub fn effective_wavenumber(&self) -> f64 {
        if self.k0 > 0.0 {
            self.k0 + self.k_prime * self.k_prime / (2.0 * self.k0)
        } else {
            self.k_prime
        }
    }

    /// Wave-number shift k'²/(2k0) carried by the perturbed harmonics.
    pub fn shift(&self) -> f64 {
        if self.k0 > 0.0 {
            self.k_prime * self.k_prime / (2.0 * self.k0)
        } else {
            0.0
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reduced_coupling_values() {
        let p = make_params(1.0, 1.0, 1.0).unwrap();
        assert!((p.c_prime() - 1.414_213_562_373_095).abs() < 1e-15);
        assert_eq!(make_params(1.0, 1.0, 0.0).unwrap().c_prime(), 0.0);
        assert!((make_params(1.0, 1.0, -1.0).unwrap().c_prime() + 2f64.sqrt()).abs() < 1e-15);
        let q = make_params(2.0, 3.0, 0.5).unwrap();
        assert!((q.c_prime() - 2f64.sqrt() * 3.0 * 0.5 / 4.0).abs() < 1e-15);
    }

    #[test]
    fn rejects_nonpositive_constants() {
        assert!(matches!(make_params(0.0, 1.0, 1.0), Err(Error::InvalidParameter(_))));
        assert!(matches!(make_params(1.0, -1.0, 1.0), Err(Error::InvalidParameter(_))));
        assert!(make_params(1.0, 1.0, f64::NAN).is_err());
    }

    #[test]
    fn params_are_pure() {
        let a = make_params(1.3, 0.7, -2.1).unwrap();
        let b = make_params(1.3, 0.7, -2.1).unwrap();
        assert_eq!(a.c_prime().to_bits(), b.c_prime().to_bits());
    }

    #[test]
    fn mode_energies() {
        let p = PhysicalParams::atomic(1.0).unwrap();
        let m = RelativeMode::new(2.0, 0.5, &p).unwrap();
        assert_eq!(m.e0, 2.0);
        assert_eq!(m.e_prime, 0.125);
        assert_eq!(m.total_k_squared(), 4.25);
        assert!((m.effective_wavenumber() - (2.0 + 0.25 / 4.0)).abs() < 1e-15);
        assert!((p.wavenumber_of(m.e0) - 2.0).abs() < 1e-15);
    }
}
