use std::path::PathBuf;

use contactwave::integral::SolverConfig;
use contactwave::{BoxDomain, PhysicalParams};
use serde::{Deserialize, Serialize};

use crate::error::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Scale {
    Linear,
    Log,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Sweep {
    pub min: f64,
    pub max: f64,
    pub count: usize,
    pub scale: Scale,
}

impl Sweep {
    pub fn validate(&self, name: &str) -> Result<(), CliError> {
        let bad = |msg: &str| Err(CliError::Config(format!("{name}: {msg}")));
        if !(self.min.is_finite() && self.max.is_finite()) || self.min > self.max {
            return bad("need finite min <= max");
        }
        if self.count == 0 {
            return bad("count must be at least 1");
        }
        if self.scale == Scale::Log && self.min <= 0.0 {
            return bad("log sweeps need min > 0");
        }
        Ok(())
    }

    pub fn points(&self) -> Vec<f64> {
        if self.count == 1 {
            return vec![self.min];
        }
        let last = (self.count - 1) as f64;
        (0..self.count)
            .map(|i| {
                if i == 0 {
                    return self.min;
                }
                if i + 1 == self.count {
                    return self.max;
                }
                let t = i as f64 / last;
                match self.scale {
                    Scale::Linear => self.min + t * (self.max - self.min),
                    Scale::Log => (self.min.ln() + t * (self.max.ln() - self.min.ln())).exp(),
                }
            })
            .map(|x| x.clamp(self.min, self.max))
            .collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct NBodyConfig {
    pub particles: usize,
    pub configurations: usize,
    pub trials: usize,
    pub seed: u64,
    /// Positions are drawn uniformly from `[-spread, spread]`.
    pub spread: f64,
    pub center_energy: f64,
}

impl Default for NBodyConfig {
    fn default() -> Self {
        Self { particles: 4, configurations: 20, trials: 100, seed: 2024, spread: 3.0, center_energy: 0.5 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ScenarioConfig {
    pub hbar: f64,
    pub mass: f64,
    pub c: f64,
    pub k0: f64,
    pub length: f64,
    pub n_points: usize,
    pub k_prime: Option<f64>,
    pub symmetry_index: u32,
    pub solver: SolverConfig,
    pub format: Format,
    pub out_dir: Option<PathBuf>,
    pub k_sweep: Sweep,
    pub length_sweep: Option<Sweep>,
    pub nbody: NBodyConfig,
}

impl Default for ScenarioConfig {
    fn default() -> Self {
        Self {
            hbar: 1.0,
            mass: 1.0,
            c: 1.0,
            k0: 1.0,
            length: 20.0,
            n_points: 2001,
            k_prime: None,
            symmetry_index: 1,
            solver: SolverConfig::default(),
            format: Format::Csv,
            out_dir: None,
            k_sweep: Sweep { min: 1e-3, max: 1e3, count: 200, scale: Scale::Log },
            length_sweep: None,
            nbody: NBodyConfig::default(),
        }
    }
}

impl ScenarioConfig {
    pub fn from_json(text: &str) -> Result<Self, CliError> {
        serde_json::from_str(text).map_err(|e| CliError::Config(format!("invalid config: {e}")))
    }

    /// Checks everything the commands rely on before any work starts.
    pub fn validate(&self) -> Result<(), CliError> {
        self.params()?;
        self.domain()?;
        self.solver.validate()?;
        if !(self.k0.is_finite() && self.k0 > 0.0) {
            return Err(CliError::Config(format!("k0 must be positive, got {}", self.k0)));
        }
        if let Some(kp) = self.k_prime {
            if !(kp.is_finite() && kp >= 0.0) {
                return Err(CliError::Config(format!("k_prime must be non-negative, got {kp}")));
            }
        }
        if self.symmetry_index == 0 {
            return Err(CliError::Config("symmetry_index must be at least 1".into()));
        }
        self.k_sweep.validate("k_sweep")?;
        if let Some(s) = &self.length_sweep {
            s.validate("length_sweep")?;
            if s.min <= 0.0 {
                return Err(CliError::Config("length_sweep: lengths must be positive".into()));
            }
        }
        let nb = &self.nbody;
        if nb.configurations == 0 {
            return Err(CliError::Config("nbody.configurations must be at least 1".into()));
        }
        if !(nb.spread.is_finite() && nb.spread > 0.0) {
            return Err(CliError::Config("nbody.spread must be positive".into()));
        }
        if !(nb.center_energy.is_finite() && nb.center_energy >= 0.0) {
            return Err(CliError::Config("nbody.center_energy must be non-negative".into()));
        }
        Ok(())
    }

    pub fn params(&self) -> Result<PhysicalParams, CliError> {
        Ok(PhysicalParams::new(self.hbar, self.mass, self.c)?)
    }

    pub fn domain(&self) -> Result<BoxDomain, CliError> {
        Ok(BoxDomain::new(self.length, self.n_points)?)
    }

    /// Box of length `length` with the node spacing of the configured box.
    pub fn domain_with_length(&self, length: f64) -> Result<BoxDomain, CliError> {
        let h = self.length / (self.n_points - 1) as f64;
        let mut intervals = (length / h).round() as usize;
        intervals += intervals % 2;
        Ok(BoxDomain::new(length, intervals.max(2) + 1)?)
    }
}
