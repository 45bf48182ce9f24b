use std::fmt::Write as _;
use std::process::ExitCode;

use num_complex::Complex64;
use pseudoharmonic::algebra::{self, TruncationSpec};
use pseudoharmonic::nonclassical::{self, format_number as num};
use pseudoharmonic::states::{self, StateConfig};
use pseudoharmonic::verify::{self, CheckResult};
use pseudoharmonic::{identity, spectrum, Family, GridSpec};
use thiserror::Error;

use crate::args::{Command, OutArgs};

/// Largest |z| used when a GP range is clipped into the unit disk.
const GP_CLIP: f64 = 0.999;

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Core(#[from] pseudoharmonic::Error),
    #[error("cannot write output: {0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> ExitCode {
        match self {
            CliError::Core(pseudoharmonic::Error::Domain(_)) => ExitCode::from(2),
            _ => ExitCode::from(1),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Outcome {
    Pass,
    Fail,
}

impl Outcome {
    pub fn exit_code(self) -> ExitCode {
        match self {
            Outcome::Pass => ExitCode::SUCCESS,
            Outcome::Fail => ExitCode::from(1),
        }
    }
}

fn emit(out: &OutArgs, text: &str) -> Result<(), CliError> {
    match &out.out {
        Some(path) => std::fs::write(path, text)?,
        None => {
            use std::io::Write;
            std::io::stdout().lock().write_all(text.as_bytes())?;
        }
    }
    Ok(())
}

pub fn run(command: Command) -> Result<Outcome, CliError> {
    match command {
        Command::Spectrum { model, nmax, out } => {
            let p = model.params()?;
            let mut text = String::from("n,energy\n");
            for n in 0..=nmax {
                let _ = writeln!(text, "{n},{}", num(spectrum::energy(&p, n)));
            }
            emit(&out, &text)?;
            Ok(Outcome::Pass)
        }
        Command::Wavefn { model, n, grid, out } => {
            let p = model.params()?;
            let spec = grid.map_or_else(|| GridSpec::for_energy(spectrum::energy(&p, n)), |g| g.0);
            let psi = spectrum::eigenfunction(&p, n, &spec);
            let mut text = String::from("x,psi\n");
            for (x, v) in psi.nodes().iter().zip(psi.values()) {
                let _ = writeln!(text, "{},{}", num(*x), num(*v));
            }
            emit(&out, &text)?;
            Ok(Outcome::Pass)
        }
        Command::State { model, family, z, z_im, trunc, out } => {
            let p = model.params()?;
            let family = Family::from(family);
            let z = Complex64::new(z, z_im);
            let trunc = match trunc {
                Some(d) => TruncationSpec::with_dim(d)?,
                None => states::auto_truncation(family, &p, z, &StateConfig::default())?,
            };
            let v = states::coherent_state(family, &p, z, &trunc)?;
            eprintln!("dim {} tail_bound {}", v.dim(), num(v.tail_bound()));
            let mut text = String::from("n,re,im,abs2\n");
            for (n, c) in v.coefficients().iter().enumerate() {
                let _ = writeln!(text, "{n},{},{},{}", num(c.re), num(c.im), num(c.norm_sqr()));
            }
            emit(&out, &text)?;
            Ok(Outcome::Pass)
        }
        Command::MetricsScan { model, family, zmin, zmax, steps, out } => {
            let p = model.params()?;
            let family = Family::from(family);
            let (default_min, default_max) = match family {
                Family::GilmorePerelomov => (-0.95, 0.95),
                Family::BarutGirardello => (0.0, 3.0),
            };
            let mut lo = zmin.unwrap_or(default_min);
            let mut hi = zmax.unwrap_or(default_max);
            if family == Family::GilmorePerelomov && (lo <= -1.0 || hi >= 1.0) {
                lo = lo.max(-GP_CLIP);
                hi = hi.min(GP_CLIP);
                eprintln!("warning: GP range clipped to [{}, {}]", num(lo), num(hi));
            }
            let records = nonclassical::scan(family, &p, lo, hi, steps)?;
            emit(&out, &nonclassical::scan_csv(&records))?;
            let failed = records.iter().filter(|r| r.metrics.is_err()).count();
            if failed > 0 {
                eprintln!("{failed} of {} rows failed", records.len());
                return Ok(Outcome::Fail);
            }
            Ok(Outcome::Pass)
        }
        Command::IdentityCheck { model, family, nmax, tol, out } => {
            let p = model.params()?;
            let family = family.map_or(Family::GilmorePerelomov, Family::from);
            let nmax = nmax.unwrap_or(match family {
                Family::GilmorePerelomov => 10,
                Family::BarutGirardello => 8,
            });
            let tol = tol.unwrap_or(identity::default_tolerance(family));
            let report = identity::verify_identity(family, &p, nmax, tol)?;
            let mut text = String::from("n,quadrature,closed_form,rel_err\n");
            for r in &report.rows {
                let _ = writeln!(text, "{},{},{},{}", r.n, num(r.quadrature), num(r.closed_form), num(r.rel_err));
            }
            emit(&out, &text)?;
            eprintln!("max rel_err {} (tolerance {})", num(report.max_rel_err()), num(tol));
            Ok(if report.passed() { Outcome::Pass } else { Outcome::Fail })
        }
        Command::AlgebraCheck { model, trunc, nmax, out } => {
            let p = model.params()?;
            let t = TruncationSpec::with_dim(trunc)?;
            let comm = algebra::commutator_check(&p, &t);
            let mut checks = vec![
                bound(format!("[M-,M+]-2M0 D={trunc}"), comm.lower_raise, 1e-12),
                bound(format!("[M0,M+]-M+ D={trunc}"), comm.weight_raise, 1e-12),
                bound(format!("[M0,M-]+M- D={trunc}"), comm.weight_lower, 1e-12),
                bound(format!("[M-,M+]-H D={trunc}"), comm.hamiltonian, 1e-12),
            ];
            for n in 0..=nmax {
                let grid = GridSpec::for_energy(spectrum::energy(&p, n + 1));
                let r = algebra::grid_ladder_check(&p, n, &grid)?;
                checks.push(bound(format!("M+ psi_{n}"), r.raise, 1e-4));
                checks.push(bound(format!("M- psi_{n}"), r.lower, 1e-4));
                checks.push(bound(format!("A psi_{n}"), r.a_op, 1e-4));
                checks.push(bound(format!("A+ psi_{n}"), r.a_dagger, 1e-4));
            }
            report_checks(&out, &checks)
        }
        Command::VerifyAll { trunc, out } => report_checks(&out, &verify::run_all(trunc)),
    }
}

fn bound(name: String, residual: f64, tolerance: f64) -> CheckResult {
    CheckResult {
        name,
        residual,
        tolerance,
        passed: residual <= tolerance,
        detail: String::new(),
    }
}

fn report_checks(out: &OutArgs, checks: &[CheckResult]) -> Result<Outcome, CliError> {
    let mut text = String::from("check,residual,tolerance,status\n");
    for c in checks {
        let status = if c.passed { "pass" } else { "FAIL" };
        let _ = writeln!(text, "{},{},{},{status}", c.name.replace(',', ";"), num(c.residual), num(c.tolerance));
    }
    emit(out, &text)?;
    let passed = checks.iter().filter(|c| c.passed).count();
    eprintln!("{passed}/{} checks passed", checks.len());
    for c in checks.iter().filter(|c| !c.passed && !c.detail.is_empty()) {
        eprintln!("{}: {}", c.name, c.detail);
    }
    Ok(if passed == checks.len() { Outcome::Pass } else { Outcome::Fail })
}
