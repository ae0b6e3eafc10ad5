use std::fs;
use std::io::Write;
use std::path::Path;

use calogero_core::fock::{AlgebraParams, BasisKind, Coupling, Guards};
use calogero_core::gram::{
    build_gram, critical_check, positivity_scan, CriticalReport, NuGrid, DEFAULT_EIGEN_TOL, DEFAULT_MAX_SWEEPS,
};
use calogero_core::opexpr::{fit_expansion, verify_relation, FitTarget, Relation, RelationReport};
use calogero_core::scalar::Rat;
use calogero_core::singlemode::SingleModeAlgebra;
use serde::Serialize;

use crate::error::CliError;
use crate::{Command, Format};

pub struct Output {
    pub payload: String,
    /// False when a check ran to completion and found a failure.
    pub passed: bool,
}

fn json<T: Serialize>(value: &T) -> Result<String, CliError> {
    Ok(serde_json::to_string_pretty(value)?)
}

fn ok(payload: String) -> Output {
    Output { payload, passed: true }
}

pub fn emit(path: Option<&Path>, payload: &str) -> Result<(), CliError> {
    match path {
        Some(p) => {
            let mut f = fs::File::create(p).map_err(|e| CliError::invalid(format!("{}: {e}", p.display())))?;
            f.write_all(payload.as_bytes())?;
            f.write_all(b"\n")?;
        }
        None => {
            let mut out = std::io::stdout().lock();
            let written = out.write_all(payload.as_bytes()).and_then(|_| out.write_all(b"\n"));
            match written {
                Err(e) if e.kind() == std::io::ErrorKind::BrokenPipe => {}
                other => other?,
            }
        }
    }
    Ok(())
}

pub fn dispatch(cmd: &Command, guards: &Guards) -> Result<Output, CliError> {
    match cmd {
        Command::Gram {
            modes,
            particles,
            nu,
            basis,
        } => gram(*modes, *particles, nu, *basis, guards),
        Command::Spectrum {
            modes,
            particles,
            nu,
            basis,
        } => spectrum(*modes, *particles, nu, *basis, guards),
        Command::Scan {
            modes,
            particles,
            nu_min,
            nu_max,
            step,
            basis,
            format,
        } => scan(
            *modes,
            *particles,
            NuGrid {
                min: nu_min.clone(),
                max: nu_max.clone(),
                step: step.clone(),
            },
            *basis,
            *format,
            guards,
        ),
        Command::Critical { modes, max_particles } => critical(*modes, *max_particles, guards),
        Command::Single {
            which,
            terms,
            nu,
            precision,
        } => {
            let series = SingleModeAlgebra::calogero(nu).series(*which, *terms, *precision)?;
            Ok(ok(json(&series)?))
        }
        Command::Fit {
            modes,
            target,
            degree,
            nu,
        } => {
            let target: FitTarget = target.parse()?;
            let params = AlgebraParams::new(*modes, nu.clone())?;
            Ok(ok(json(&fit_expansion(target, &params, *degree, guards)?)?))
        }
        Command::Verify {
            modes,
            degree,
            relations,
            nu,
        } => verify(*modes, *degree, relations, nu, guards),
    }
}

fn gram(modes: usize, particles: usize, nu: &Coupling, basis: BasisKind, guards: &Guards) -> Result<Output, CliError> {
    let params = AlgebraParams::new(modes, nu.clone())?;
    Ok(ok(json(&build_gram(&params, particles, basis, guards)?)?))
}

fn spectrum(modes: usize, particles: usize, nu: &Rat, basis: BasisKind, guards: &Guards) -> Result<Output, CliError> {
    let params = AlgebraParams::at(modes, nu.clone())?;
    let report = build_gram(&params, particles, basis, guards)?.eigen_numeric(DEFAULT_EIGEN_TOL, DEFAULT_MAX_SWEEPS)?;
    Ok(ok(json(&report)?))
}

#[derive(Serialize)]
struct ScanRow {
    nu: Rat,
    min_eigenvalue: f64,
    rank: usize,
    multiset_dim: usize,
    positive: bool,
}

fn scan(
    modes: usize,
    particles: usize,
    grid: NuGrid,
    basis: BasisKind,
    format: Format,
    guards: &Guards,
) -> Result<Output, CliError> {
    let points = grid.points()?;
    let scan = positivity_scan(modes, particles, basis, &points, guards, DEFAULT_EIGEN_TOL, DEFAULT_MAX_SWEEPS)?;
    let rows = scan
        .into_iter()
        .map(|p| {
            let r = p.report?;
            Ok(ScanRow {
                nu: p.nu,
                min_eigenvalue: r.min_eigenvalue,
                rank: r.rank,
                multiset_dim: r.multiset_dim,
                positive: r.positivity,
            })
        })
        .collect::<Result<Vec<_>, CliError>>()?;
    let payload = match format {
        Format::Json => json(&rows)?,
        Format::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            for row in &rows {
                w.serialize(row)?;
            }
            let bytes = w.into_inner().map_err(|e| CliError::internal(e.error()))?;
            String::from_utf8(bytes).map_err(CliError::internal)?.trim_end().to_string()
        }
    };
    Ok(ok(payload))
}

#[derive(Serialize)]
struct CriticalPayload {
    passed: bool,
    #[serde(flatten)]
    report: CriticalReport,
}

fn critical(modes: usize, max_particles: usize, guards: &Guards) -> Result<Output, CliError> {
    let report = critical_check(modes, max_particles, guards)?;
    let passed = report.passed();
    Ok(Output {
        payload: json(&CriticalPayload { passed, report })?,
        passed,
    })
}

#[derive(Serialize)]
struct VerifyPayload {
    modes: usize,
    degree: usize,
    nu: Coupling,
    passed: bool,
    reports: Vec<RelationReport>,
}

fn verify(modes: usize, degree: usize, relations: &str, nu: &Coupling, guards: &Guards) -> Result<Output, CliError> {
    let relations = Relation::parse_list(relations)?;
    let params = AlgebraParams::new(modes, nu.clone())?;
    let reports = relations
        .into_iter()
        .map(|r| verify_relation(r, &params, degree, guards))
        .collect::<Result<Vec<_>, _>>()?;
    let passed = reports.iter().all(|r| r.passed);
    Ok(Output {
        payload: json(&VerifyPayload {
            modes,
            degree,
            nu: nu.clone(),
            passed,
            reports,
        })?,
        passed,
    })
}
