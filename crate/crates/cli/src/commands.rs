use contactwave::analytic::{bound_state, mass_center_state, plane_wave_coefficients, scattering_amplitude};
use contactwave::integral::{extract_formal_coefficients, neumann_solve, IntegrationConstants};
use contactwave::manybody::{assemble_nboson, check_exchange_symmetry, total_energy, NBosonState, PairState, RelativePart};
use contactwave::perturbation::{
    constrained_constants, energy_correction_solve, paradox_report, perturbed_solution, CorrectionReport,
    CorrectionStep,
};
use contactwave::residual::{check_gates, derivative_jump, schrodinger_residual, GateReport, GateTolerances, TestFamily};
use contactwave::{normalize, Complex64, Error, GridWaveFunction, RelativeMode, WaveFunction};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::config::ScenarioConfig;
use crate::error::CliError;
use crate::output::{Outcome, Table};

const UNITARITY_TOLERANCE: f64 = 1e-12;
const EVEN_TOLERANCE: f64 = 1e-10;
const ANALYTIC_JUMP_STEP: f64 = 1e-3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::Subcommand)]
pub enum Command {
    /// Scattering amplitude over a wave-number sweep
    Scatter,
    /// Fixed-point solution of the relative integral equation
    Solve,
    /// Perturbed relative state at a given k'
    Perturb,
    /// Self-consistent energy correction
    Correction,
    /// Energy bookkeeping of the plane-wave state at L, 4L and 16L
    Paradox,
    /// Symmetrized N-boson wavefunction on random configurations
    Nbody,
    /// Bound state of an attractive contact
    Bound,
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Self::Scatter => "scatter",
            Self::Solve => "solve",
            Self::Perturb => "perturb",
            Self::Correction => "correction",
            Self::Paradox => "paradox",
            Self::Nbody => "nbody",
            Self::Bound => "bound",
        }
    }
}

pub fn run(command: Command, cfg: &ScenarioConfig) -> Result<Outcome, CliError> {
    let result = match command {
        Command::Scatter => cmd_scatter(cfg),
        Command::Solve => cmd_solve(cfg),
        Command::Perturb => cmd_perturb(cfg),
        Command::Correction => cmd_correction(cfg),
        Command::Paradox => cmd_paradox(cfg),
        Command::Nbody => cmd_nbody(cfg),
        Command::Bound => cmd_bound(cfg),
    };
    match result {
        Err(CliError::Numerical(msg)) => Ok(Outcome::failed(Table::default(), json!({}), msg)),
        other => other,
    }
}

fn gate_json(g: &GateReport) -> Value {
    json!({
        "residual": g.residual,
        "residual_tolerance": g.residual_tolerance,
        "jump": [g.jump.re, g.jump.im],
        "expected_jump": [g.expected_jump.re, g.expected_jump.im],
        "jump_error": g.jump_error,
        "jump_tolerance": g.jump_tolerance,
    })
}

fn samples(table: &mut Table, nodes: &[f64], values: impl Iterator<Item = Complex64>) {
    for (&x, v) in nodes.iter().zip(values) {
        table.push(vec![x, v.re, v.im]);
    }
}

fn free_wave(k: f64) -> impl Fn(f64) -> Complex64 {
    move |x| Complex64::new(0.0, k * x).exp()
}

pub fn cmd_scatter(cfg: &ScenarioConfig) -> Result<Outcome, CliError> {
    let p = cfg.params()?;
    let ks = cfg.k_sweep.points();
    let rows = ks
        .par_iter()
        .map(|&k| scattering_amplitude(k, &p, cfg.k_prime).map(|s| vec![k, s.re, s.im, s.norm(), s.arg()]))
        .collect::<Result<Vec<_>, Error>>()?;
    let defect = rows.iter().map(|r| (r[3] - 1.0).abs()).fold(0.0, f64::max);
    let mut table = Table::new(&["k", "re_s", "im_s", "abs_s", "arg_s"]);
    rows.into_iter().for_each(|r| table.push(r));
    let report = json!({
        "c_prime": p.c_prime(),
        "points": ks.len(),
        "max_unitarity_defect": defect,
    });
    Ok(Outcome::new(table, report, vec![("unitarity", defect <= UNITARITY_TOLERANCE)]))
}

pub fn cmd_solve(cfg: &ScenarioConfig) -> Result<Outcome, CliError> {
    let p = cfg.params()?;
    let d = cfg.domain()?;
    let kp = cfg.k_prime.unwrap_or(0.0);
    let mode = RelativeMode::new(cfg.k0, kp, &p)?;
    let coeffs = plane_wave_coefficients(cfg.k0, &p, Complex64::new(1.0, 0.0))?;
    let consts = IntegrationConstants::at_box_edge(coeffs.a, coeffs.b, &d);
    let initial = GridWaveFunction::from_fn(&d, free_wave(cfg.k0))?;
    let rep = neumann_solve(&initial, &mode, &consts, &p, &cfg.solver)?;
    let gates = check_gates(
        &rep.solution,
        &p,
        mode.total_energy(),
        &TestFamily::for_domain(&d),
        d.spacing(),
        GateTolerances::GRID,
    )?;
    let reconstruction_error = if rep.converged {
        let formal = extract_formal_coefficients(&rep, &mode, &consts, &p)?;
        let err = formal
            .reconstruct()
            .iter()
            .zip(rep.solution.values())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max);
        Some(err)
    } else {
        None
    };
    let nodes = d.nodes();
    let analytic_error = (kp == 0.0).then(|| {
        let w = coeffs.to_wave();
        nodes.iter().zip(rep.solution.values()).map(|(&x, v)| (v - w.value(x)).norm()).fold(0.0, f64::max)
    });
    let mut table = Table::new(&["x", "re_phi", "im_phi"]);
    samples(&mut table, &nodes, rep.solution.values().iter().copied());
    let report = json!({
        "k0": cfg.k0,
        "k_prime": kp,
        "energy": mode.total_energy(),
        "iterations_used": rep.iterations_used,
        "converged": rep.converged,
        "final_residual": rep.final_residual,
        "contraction_estimate": rep.contraction_estimate,
        "relaxation_used": rep.relaxation_used,
        "residual_history": rep.residual_history,
        "gates": gate_json(&gates),
        "analytic_max_error": analytic_error,
        "reconstruction_max_error": reconstruction_error,
    });
    Ok(Outcome::new(
        table,
        report,
        vec![("converged", rep.converged), ("weak_residual", gates.residual_ok()), ("jump", gates.jump_ok())],
    ))
}

pub fn cmd_perturb(cfg: &ScenarioConfig) -> Result<Outcome, CliError> {
    let p = cfg.params()?;
    let d = cfg.domain()?;
    let kp = cfg.k_prime.unwrap_or(0.0);
    let unit = plane_wave_coefficients(cfg.k0, &p, Complex64::new(1.0, 0.0))?;
    let (_, phi0) = normalize(&unit.to_wave(), &d)?;
    let base = unit.scaled(phi0);
    let consts = constrained_constants(&base, kp, cfg.symmetry_index, &d)?;
    let state = perturbed_solution(&base, kp, &consts, cfg.symmetry_index)?;
    let nodes = d.nodes();
    let probes: Vec<f64> = nodes.iter().copied().filter(|x| *x > 0.0).collect();
    let parity = state.wave().parity_defect(&probes);
    let energy = p.energy_of(cfg.k0) + p.energy_of(kp);
    let residual = schrodinger_residual(state.wave(), &p, energy, &TestFamily::for_domain(&d))?;
    let jump = derivative_jump(state.wave(), ANALYTIC_JUMP_STEP)?;
    let expected = state.wave().value_at_zero() * p.c_prime();
    let mut table = Table::new(&["x", "re_phi", "im_phi"]);
    samples(&mut table, &nodes, nodes.iter().map(|&x| state.value(x)));
    let report = json!({
        "k0": cfg.k0,
        "k_prime": kp,
        "energy": energy,
        "symmetry_index": cfg.symmetry_index,
        "c_limit": consts.c,
        "d_limit": consts.d,
        "parity_defect": parity,
        "weak_residual": residual,
        "jump_error": (jump - expected).norm() / expected.norm().max(f64::MIN_POSITIVE),
    });
    Ok(Outcome::new(table, report, vec![("exchange_symmetry", parity <= EVEN_TOLERANCE)]))
}

fn trace_table(trace: &[CorrectionStep]) -> Table {
    let mut table = Table::new(&["step", "k_prime", "e_prime", "rhs", "rhs_imag", "leading", "cross"]);
    for (i, s) in trace.iter().enumerate() {
        table.push(vec![(i + 1) as f64, s.k_prime, s.e_prime, s.rhs, s.rhs_imag, s.leading, s.cross]);
    }
    table
}

fn correction_json(r: &CorrectionReport) -> Value {
    json!({
        "nominal_energy": r.nominal_energy,
        "e_prime": r.e_prime,
        "k_prime": r.k_prime,
        "leading_term": r.leading_term,
        "cross_terms": r.cross_terms,
        "rhs": r.rhs,
        "first_iterate": r.first_iterate,
        "iterations": r.iterations,
        "converged": r.converged,
        "corrected_energy": r.corrected_energy,
        "norm_defect": r.norm_defect,
    })
}

/// Least-squares slope of `ln y` against `ln x`.
pub fn log_log_slope(xs: &[f64], ys: &[f64]) -> f64 {
    let lx: Vec<f64> = xs.iter().map(|x| x.ln()).collect();
    let ly: Vec<f64> = ys.iter().map(|y| y.ln()).collect();
    let n = lx.len() as f64;
    let mx = lx.iter().sum::<f64>() / n;
    let my = ly.iter().sum::<f64>() / n;
    let sxy: f64 = lx.iter().zip(&ly).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = lx.iter().map(|x| (x - mx).powi(2)).sum();
    sxy / sxx
}

pub fn cmd_correction(cfg: &ScenarioConfig) -> Result<Outcome, CliError> {
    let p = cfg.params()?;
    if let Some(sweep) = &cfg.length_sweep {
        let lengths = sweep.points();
        let domains = lengths.iter().map(|&l| cfg.domain_with_length(l)).collect::<Result<Vec<_>, _>>()?;
        let runs: Vec<Result<CorrectionReport, Error>> = domains
            .par_iter()
            .map(|d| energy_correction_solve(cfg.k0, &p, d, cfg.symmetry_index, &cfg.solver))
            .collect();
        let mut table =
            Table::new(&["length", "converged", "e_prime", "k_prime", "leading", "first_iterate", "iterations"]);
        let mut converged = Vec::new();
        let mut failures = Vec::new();
        for (d, run) in domains.iter().zip(&runs) {
            match run {
                Ok(r) => {
                    table.push(vec![
                        d.length(),
                        1.0,
                        r.e_prime,
                        r.k_prime,
                        r.leading_term,
                        r.first_iterate,
                        r.iterations as f64,
                    ]);
                    converged.push((d.length(), r.e_prime));
                }
                Err(Error::CorrectionNotConverged { trace, .. }) => {
                    let first = trace.first().map_or(f64::NAN, |s| s.rhs);
                    let leading = trace.first().map_or(f64::NAN, |s| s.leading);
                    table.push(vec![d.length(), 0.0, f64::NAN, f64::NAN, leading, first, trace.len() as f64]);
                    failures.push(d.length());
                }
                Err(e) => return Err(e.clone().into()),
            }
        }
        let slope = (converged.len() >= 2 && converged.iter().all(|(_, e)| *e > 0.0)).then(|| {
            let (ls, es): (Vec<f64>, Vec<f64>) = converged.iter().copied().unzip();
            log_log_slope(&ls, &es)
        });
        let report = json!({
            "lengths": lengths,
            "unconverged_lengths": failures,
            "e_prime_slope": slope,
        });
        return Ok(Outcome::new(table, report, vec![("converged", failures.is_empty())]));
    }
    let d = cfg.domain()?;
    match energy_correction_solve(cfg.k0, &p, &d, cfg.symmetry_index, &cfg.solver) {
        Ok(r) => {
            let mut report = correction_json(&r);
            report["energy_identity_holds"] = json!(r.e_prime == p.energy_of(r.k_prime));
            Ok(Outcome::new(trace_table(&r.trace), report, vec![("converged", r.converged)]))
        }
        Err(Error::CorrectionNotConverged { reason, trace }) => {
            let report = json!({ "nominal_energy": p.energy_of(cfg.k0), "steps": trace.len() });
            let mut out = Outcome::new(trace_table(&trace), report, vec![("converged", false)]);
            out.error = Some(reason);
            Ok(out)
        }
        Err(e) => Err(e.into()),
    }
}

pub fn cmd_paradox(cfg: &ScenarioConfig) -> Result<Outcome, CliError> {
    let p = cfg.params()?;
    let r = paradox_report(cfg.k0, &p, cfg.length, cfg.n_points)?;
    let mut table = Table::new(&["length", "n_points", "kinetic", "potential", "total", "nominal_e", "discrepancy"]);
    let mut entries = Vec::new();
    for e in &r.entries {
        table.push(vec![
            e.length,
            e.n_points as f64,
            e.energy.kinetic,
            e.energy.potential,
            e.energy.total,
            e.nominal_energy,
            e.discrepancy,
        ]);
        entries.push(json!({
            "length": e.length,
            "kinetic": e.energy.kinetic,
            "potential": e.energy.potential,
            "total": e.energy.total,
            "nominal_E": e.nominal_energy,
            "discrepancy": e.discrepancy,
            "kinetic_dirichlet": e.energy.kinetic_dirichlet,
            "contact_kinetic": e.energy.contact_kinetic,
        }));
    }
    let report = json!({
        "entries": entries,
        "ratio_l_4l": r.ratio_l_4l,
        "ratio_4l_16l": r.ratio_4l_16l,
    });
    Ok(Outcome::new(table, report, Vec::new()))
}

pub fn cmd_nbody(cfg: &ScenarioConfig) -> Result<Outcome, CliError> {
    let p = cfg.params()?;
    let nb = &cfg.nbody;
    let mc = mass_center_state(nb.center_energy, Complex64::new(1.0, 0.0), Complex64::default(), &p)?;
    let rel = plane_wave_coefficients(cfg.k0, &p, Complex64::new(1.0, 0.0))?.to_wave();
    let pair = PairState::new(mc, RelativePart::PlaneWave(rel), p.energy_of(cfg.k0))?;
    let state = NBosonState::uniform(pair, nb.particles)?;
    let rows = (0..nb.configurations)
        .into_par_iter()
        .map(|i| {
            let mut rng = ChaCha8Rng::seed_from_u64(nb.seed);
            rng.set_stream(i as u64);
            let xs: Vec<f64> = (0..state.n()).map(|_| rng.gen_range(-nb.spread..nb.spread)).collect();
            let psi = assemble_nboson(&state, &xs)?;
            let asym = check_exchange_symmetry(&state, &xs, nb.trials, nb.seed.wrapping_add(i as u64))?;
            Ok(vec![i as f64, psi.re, psi.im, asym])
        })
        .collect::<Result<Vec<_>, Error>>()?;
    let worst = rows.iter().map(|r| r[3]).fold(0.0, f64::max);
    let mut table = Table::new(&["configuration", "re_psi", "im_psi", "asymmetry"]);
    rows.into_iter().for_each(|r| table.push(r));
    let report = json!({
        "particles": state.n(),
        "configurations": nb.configurations,
        "total_energy": total_energy(&state),
        "max_asymmetry": worst,
    });
    Ok(Outcome::new(table, report, vec![("exchange_symmetry", worst <= EVEN_TOLERANCE)]))
}

pub fn cmd_bound(cfg: &ScenarioConfig) -> Result<Outcome, CliError> {
    let p = cfg.params()?;
    let d = cfg.domain()?;
    let b = bound_state(&p)?;
    let wave = b.to_wave();
    let gates =
        check_gates(&wave, &p, b.energy, &TestFamily::for_domain(&d), ANALYTIC_JUMP_STEP, GateTolerances::ANALYTIC)?;
    let nodes = d.nodes();
    let mut table = Table::new(&["x", "re_phi", "im_phi"]);
    samples(&mut table, &nodes, nodes.iter().map(|&x| wave.value(x)));
    let report = json!({
        "energy": b.energy,
        "kappa": b.kappa,
        "norm_in_box": b.norm_within(d.half_length()),
        "gates": gate_json(&gates),
    });
    Ok(Outcome::new(table, report, vec![("weak_residual", gates.residual_ok()), ("jump", gates.jump_ok())]))
}
