//! Subcommand implementations.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use coated_layer::io::{write_scalar_bin, write_scalar_csv, write_vector_bin, write_vector_csv};
use coated_layer::model::{
    incompressible_kernel, indentation as model_indentation, inextensible_kernel, uncoated_kernel,
    winkler_kernel, Coating, LayerSystem,
};
use coated_layer::oracle::{convergence_study, write_records_csv, StudyOptions};
use coated_layer::spectral::make_pressure;
use coated_layer::Error;
use serde::Serialize;

use crate::config::{Format, RunConfig};
use crate::plot::{line_chart, Series};
use crate::CliError;

pub const MANIFEST: &str = "manifest.toml";

/// Files written by a command and a human-readable summary.
#[derive(Debug, Default)]
pub struct Outcome {
    pub files: Vec<PathBuf>,
    pub summary: Vec<String>,
}

fn config_err(key: &str, reason: impl std::fmt::Display) -> CliError {
    CliError::Config(format!("{key}: {reason}"))
}

fn numerical(e: Error) -> CliError {
    match e {
        Error::Io(io) => CliError::Io(io),
        other => CliError::Numerical(other.to_string()),
    }
}

#[derive(Serialize)]
struct Provenance {
    command: String,
    version: String,
    units: Units,
    outputs: Vec<String>,
    results: toml::Table,
}

#[derive(Serialize)]
struct Units {
    length: &'static str,
    moduli: &'static str,
    pressure: &'static str,
    wavenumber: &'static str,
    deflection: &'static str,
    compliance: &'static str,
}

const UNITS: Units = Units {
    length: "m",
    moduli: "Pa",
    pressure: "Pa",
    wavenumber: "1/m",
    deflection: "m",
    compliance: "m/Pa",
};

#[derive(Serialize)]
struct ManifestTail {
    provenance: Provenance,
}

/// Writes the resolved configuration plus a `[provenance]` table. The file
/// is itself a valid configuration.
fn write_manifest(
    cfg: &RunConfig,
    command: &str,
    outcome: &mut Outcome,
    results: toml::Table,
) -> Result<(), CliError> {
    let dir = &cfg.output.directory;
    let outputs = outcome
        .files
        .iter()
        .map(|p| {
            p.file_name()
                .unwrap_or_default()
                .to_string_lossy()
                .into_owned()
        })
        .collect();
    let tail = ManifestTail {
        provenance: Provenance {
            command: command.to_string(),
            version: env!("CARGO_PKG_VERSION").to_string(),
            units: UNITS,
            outputs,
            results,
        },
    };
    let text = format!(
        "{}\n{}",
        cfg.to_toml(),
        toml::to_string(&tail).expect("manifest always serializes")
    );
    let path = dir.join(MANIFEST);
    std::fs::write(&path, text)?;
    outcome.files.push(path);
    Ok(())
}

fn create(dir: &Path, name: &str) -> Result<(PathBuf, BufWriter<File>), CliError> {
    let path = dir.join(name);
    Ok((path.clone(), BufWriter::new(File::create(path)?)))
}

fn finish(mut w: BufWriter<File>) -> Result<(), CliError> {
    w.flush()?;
    Ok(())
}

/// Surface deflection (and tangential displacement when the branch computes
/// it) for the configured load.
pub fn indent(cfg: &RunConfig) -> Result<Outcome, CliError> {
    let sys = cfg.system()?;
    let grid = cfg.grid()?;
    let load = cfg.pressure_load()?;
    let p = make_pressure(&load, grid).map_err(|e| config_err("load", e))?;
    let kind = cfg.model.branch.kind();
    let result = model_indentation(kind, &p, &sys).map_err(numerical)?;

    let dir = &cfg.output.directory;
    std::fs::create_dir_all(dir)?;
    let mut outcome = Outcome::default();
    let format = cfg.output.format;
    write_scalar(dir, "w0", &result.w0, format, &mut outcome)?;
    if let Some(v0) = &result.v0 {
        write_vector(dir, "v0", v0, format, &mut outcome)?;
    }
    let mut results = toml::Table::new();
    results.insert("model".into(), kind.name().into());
    results.insert("max_abs_w0".into(), result.w0.max_abs().into());
    outcome.summary.push(format!(
        "{}: max |w0| = {:e} m",
        kind.name(),
        result.w0.max_abs()
    ));
    write_manifest(cfg, "indent", &mut outcome, results)?;
    Ok(outcome)
}

fn write_scalar(
    dir: &Path,
    stem: &str,
    field: &coated_layer::ScalarField,
    format: Format,
    outcome: &mut Outcome,
) -> Result<(), CliError> {
    if format.csv() {
        let (path, mut w) = create(dir, &format!("{stem}.csv"))?;
        write_scalar_csv(field, &mut w).map_err(numerical)?;
        finish(w)?;
        outcome.files.push(path);
    }
    if format.bin() {
        let (path, mut w) = create(dir, &format!("{stem}.bin"))?;
        write_scalar_bin(field, &mut w).map_err(numerical)?;
        finish(w)?;
        outcome.files.push(path);
    }
    Ok(())
}

fn write_vector(
    dir: &Path,
    stem: &str,
    field: &coated_layer::VectorField,
    format: Format,
    outcome: &mut Outcome,
) -> Result<(), CliError> {
    if format.csv() {
        let (path, mut w) = create(dir, &format!("{stem}.csv"))?;
        write_vector_csv(field, &mut w).map_err(numerical)?;
        finish(w)?;
        outcome.files.push(path);
    }
    if format.bin() {
        let (path, mut w) = create(dir, &format!("{stem}.bin"))?;
        write_vector_bin(field, &mut w).map_err(numerical)?;
        finish(w)?;
        outcome.files.push(path);
    }
    Ok(())
}

/// One row of the transfer table (m/Pa).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TransferRow {
    pub k: f64,
    pub uncoated: f64,
    pub coated: f64,
    pub inextensible: f64,
}

/// Incompressible single-mode kernels on `n_points` equally spaced
/// wavenumbers. The coated column uses the configured coating.
pub fn transfer_table(
    sys: &LayerSystem,
    k_min: f64,
    k_max: f64,
    n_points: usize,
) -> Vec<TransferRow> {
    (0..n_points)
        .map(|i| {
            let k = if i + 1 == n_points {
                k_max
            } else {
                k_min + (k_max - k_min) * i as f64 / (n_points - 1) as f64
            };
            TransferRow {
                k,
                uncoated: uncoated_kernel(k, sys),
                coated: incompressible_kernel(k, sys),
                inextensible: inextensible_kernel(k, sys),
            }
        })
        .collect()
}

pub fn transfer(cfg: &RunConfig) -> Result<Outcome, CliError> {
    let sys = cfg.system()?;
    let t = cfg
        .transfer
        .ok_or_else(|| config_err("transfer", "section is required"))?;
    if !(t.k_min.is_finite() && t.k_min >= 0.0) {
        return Err(config_err(
            "transfer.k_min",
            format!("must be non-negative, got {}", t.k_min),
        ));
    }
    if !(t.k_max.is_finite() && t.k_max > t.k_min) {
        return Err(config_err(
            "transfer.k_max",
            "must be finite and exceed k_min",
        ));
    }
    if t.n_points < 2 {
        return Err(config_err("transfer.n_points", "need at least 2 points"));
    }
    let rows = transfer_table(&sys, t.k_min, t.k_max, t.n_points);

    let dir = &cfg.output.directory;
    std::fs::create_dir_all(dir)?;
    let mut outcome = Outcome::default();
    let (path, mut w) = create(dir, "transfer.csv")?;
    writeln!(w, "k,uncoated,coated,inextensible")?;
    for r in &rows {
        writeln!(w, "{},{},{},{}", r.k, r.uncoated, r.coated, r.inextensible)?;
    }
    finish(w)?;
    outcome.files.push(path);

    if t.plot {
        let k: Vec<f64> = rows.iter().map(|r| r.k).collect();
        let col = |f: fn(&TransferRow) -> f64| rows.iter().map(f).collect::<Vec<f64>>();
        let (u, c, i) = (
            col(|r| r.uncoated),
            col(|r| r.coated),
            col(|r| r.inextensible),
        );
        let svg = line_chart(
            "Incompressible surface compliance",
            "k (1/m)",
            "w / p (m/Pa)",
            &k,
            &[
                Series {
                    label: "uncoated",
                    y: &u,
                },
                Series {
                    label: "coated",
                    y: &c,
                },
                Series {
                    label: "inextensible",
                    y: &i,
                },
            ],
        );
        let path = dir.join("transfer.svg");
        std::fs::write(&path, svg)?;
        outcome.files.push(path);
    }
    outcome.summary.push(format!(
        "{} wavenumbers in [{}, {}] 1/m",
        rows.len(),
        t.k_min,
        t.k_max
    ));
    write_manifest(cfg, "transfer", &mut outcome, toml::Table::new())?;
    Ok(outcome)
}

/// Model error against the reference solver over the configured `eps`.
///
/// When the reference solver fails part way, the completed records and the
/// manifest are still written before the numerical error is returned.
pub fn converge(cfg: &RunConfig) -> Result<Outcome, CliError> {
    let sys = cfg.system()?;
    let section = cfg
        .converge
        .as_ref()
        .ok_or_else(|| config_err("converge", "section is required"))?;
    let opts = StudyOptions {
        hold_stiffness_ratio: section.hold_stiffness_ratio,
    };
    if opts.hold_stiffness_ratio.is_some() && !matches!(sys.coating(), Coating::Membrane(_)) {
        return Err(config_err(
            "converge.hold_stiffness_ratio",
            "requires coating.kind = \"membrane\"",
        ));
    }
    let kind = cfg.model.branch.kind();
    let study = convergence_study(&sys, kind, &section.eps, &opts).map_err(|e| match e {
        Error::InvalidParameter {
            name: "eps",
            reason,
        } => config_err("converge.eps", reason),
        Error::InvalidParameter { reason, .. } => {
            config_err("converge.hold_stiffness_ratio", reason)
        }
        other => numerical(other),
    })?;

    let dir = &cfg.output.directory;
    std::fs::create_dir_all(dir)?;
    let mut outcome = Outcome::default();
    let (path, mut w) = create(dir, "convergence.csv")?;
    write_records_csv(&study.records, &mut w).map_err(numerical)?;
    finish(w)?;
    outcome.files.push(path);

    let mut results = toml::Table::new();
    results.insert("model".into(), kind.name().into());
    results.insert("completed".into(), (study.records.len() as i64).into());
    match study.order {
        Some(order) => {
            results.insert("fitted_order".into(), order.into());
            outcome
                .summary
                .push(format!("{}: fitted order {order:.4}", kind.name()));
        }
        None => {
            results.insert("fitted_order".into(), "insufficient points".into());
            outcome.summary.push(format!(
                "{}: insufficient points for a fitted order",
                kind.name()
            ));
        }
    }
    for r in &study.records {
        if let Some(e) = r.relative_error() {
            outcome
                .summary
                .push(format!("eps = {}: relative error {e:.3e}", r.epsilon));
        }
    }
    if let Some(f) = &study.failure {
        results.insert("failure".into(), f.clone().into());
    }
    write_manifest(cfg, "converge", &mut outcome, results)?;
    match study.failure {
        Some(f) => Err(CliError::Numerical(format!(
            "{f} (partial results in {})",
            dir.join("convergence.csv").display()
        ))),
        None => Ok(outcome),
    }
}

/// Report on the limit cases: incompressibility indicators, the foundation
/// modulus and the uncoated and inextensible compliance coefficients.
pub fn limits_report(sys: &LayerSystem) -> Vec<String> {
    let c = sys.layer();
    let (r13, r44) = c.incompressible_limit_ratios();
    let cu = uncoated_kernel(1.0, sys);
    let ci = inextensible_kernel(1.0, sys);
    let mut lines = vec![
        format!("a13/a33 = {r13:.9} (tends to 1 when incompressible)"),
        format!("a44/a33 = {r44:.9} (tends to 0 when incompressible)"),
        format!(
            "foundation modulus a33/h = {:e} Pa/m",
            1.0 / winkler_kernel(sys)
        ),
        format!("uncoated kernel h^3 k^2 / (3 a44) = {cu:e} k^2 m/Pa"),
        format!("inextensible kernel h^3 k^2 / (12 a44) = {ci:e} k^2 m/Pa"),
        format!("inextensible / uncoated = {}", ci / cu),
    ];
    if let Coating::Membrane(m) = sys.coating() {
        let s1 = sys.stiffness_ratio(1.0);
        lines.push(format!(
            "membrane tension hhat b11 = {:e} N/m",
            m.tension_stiffness()
        ));
        lines.push(format!(
            "stiffness ratio s = {s1:e} k^2, s = 1 at k = {:e} 1/m",
            1.0 / s1.sqrt()
        ));
    }
    lines
}

pub fn limits(cfg: &RunConfig) -> Result<Outcome, CliError> {
    let sys = cfg.system()?;
    let lines = limits_report(&sys);
    let dir = &cfg.output.directory;
    std::fs::create_dir_all(dir)?;
    let mut outcome = Outcome::default();
    let path = dir.join("limits.txt");
    std::fs::write(&path, lines.join("\n") + "\n")?;
    outcome.files.push(path);
    let (r13, r44) = sys.layer().incompressible_limit_ratios();
    let mut results = toml::Table::new();
    results.insert("a13_over_a33".into(), r13.into());
    results.insert("a44_over_a33".into(), r44.into());
    results.insert(
        "uncoated_coefficient".into(),
        uncoated_kernel(1.0, &sys).into(),
    );
    results.insert(
        "inextensible_coefficient".into(),
        inextensible_kernel(1.0, &sys).into(),
    );
    outcome.summary = lines;
    write_manifest(cfg, "limits", &mut outcome, results)?;
    Ok(outcome)
}
