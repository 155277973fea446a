//! Command bodies, separated from argument parsing so the behavior is
//! directly testable. Every command returns its stdout payload; failures
//! carry the exit code (1 for domain verdicts such as invalid models,
//! 2 for unusable input) plus the payload to print.

use std::path::Path;

use serde::Serialize;

use ontoscope_core::classify::{classification_report, overlap_bound_audit, overlap_csv, ClassifyOptions};
use ontoscope_core::hilbert::standard::{
    ket0, ket1, ket_i, ket_minus_i, minus, plus, rotated, x_basis, y_basis, z_basis,
};
use ontoscope_core::hilbert::{inner_product, Measurement, PureState};
use ontoscope_core::models::{elitzur_vaidman_demo, standard_zoo};
use ontoscope_core::ontology::{check_born_reproduction, validate_model, OntologicalModel};
use ontoscope_core::optimize::{
    lp_max_symmetric_overlap, lp_max_symmetric_overlap_exact, pbr_contradiction, OverlapSolution,
};

use crate::schema::ModelDocument;

/// A command failure: what to print and how to exit.
#[derive(Debug)]
pub struct CommandError {
    pub exit_code: i32,
    pub message: String,
}

impl CommandError {
    /// Exit 1: the input parsed but the domain verdict is negative
    /// (invalid model, failed precondition).
    fn domain(message: String) -> Self {
        Self {
            exit_code: 1,
            message,
        }
    }

    /// Exit 2: unusable input (unreadable file, malformed JSON, bad flag
    /// values).
    fn usage(message: String) -> Self {
        Self {
            exit_code: 2,
            message,
        }
    }
}

pub type CommandResult = Result<String, CommandError>;

fn to_json<T: Serialize>(value: &T) -> String {
    let mut out = serde_json::to_string_pretty(value).expect("report types serialize");
    out.push('\n');
    out
}

#[derive(Serialize)]
struct LoadFailure {
    valid: bool,
    error: String,
}

/// Reads, parses, and constructs a model from a file. Parse failures exit 2
/// with the location; construction failures (bad states or effects) exit 1.
fn load_model(path: &Path) -> Result<OntologicalModel, CommandError> {
    let raw = std::fs::read_to_string(path)
        .map_err(|e| CommandError::usage(format!("cannot read {}: {e}", path.display())))?;
    let doc: ModelDocument = serde_json::from_str(&raw).map_err(|e| {
        CommandError::usage(format!(
            "{}: JSON parse error at line {}, column {}: {e}",
            path.display(),
            e.line(),
            e.column()
        ))
    })?;
    let name = path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "model".into());
    doc.into_model(name).map_err(|e| CommandError {
        exit_code: 1,
        message: to_json(&LoadFailure {
            valid: false,
            error: e.to_string(),
        }),
    })
}

/// Loads a model and refuses (exit 1, validation report on stdout) unless it
/// is valid.
fn load_valid_model(path: &Path) -> Result<OntologicalModel, CommandError> {
    let model = load_model(path)?;
    let report = validate_model(&model);
    if !report.is_valid() {
        return Err(CommandError::domain(to_json(&report)));
    }
    Ok(model)
}

/// `validate`: print the validation report; exit 0 iff no violations.
pub fn cmd_validate(path: &Path) -> CommandResult {
    let model = load_model(path)?;
    let report = validate_model(&model);
    let rendered = to_json(&report);
    if report.is_valid() {
        Ok(rendered)
    } else {
        Err(CommandError::domain(rendered))
    }
}

/// `classify`: classification verdicts plus the pairwise overlap table.
pub fn cmd_classify(
    path: &Path,
    eps_supp: f64,
    tol_eq6: f64,
    bound_tol: f64,
    csv: bool,
) -> CommandResult {
    let model = load_valid_model(path)?;
    let opts = ClassifyOptions {
        eps_supp,
        tol_eq6,
        bound_tol,
    };
    let report = classification_report(&model, &opts)
        .map_err(|e| CommandError::domain(format!("{e}\n")))?;
    if csv {
        let mut out = to_json(&report.classification);
        out.push_str(&overlap_csv(&report.overlaps));
        Ok(out)
    } else {
        Ok(to_json(&report))
    }
}

/// `overlap`: the pairwise overlap audit; refuses models that fail
/// validation or Born reproduction at `born_tol`.
pub fn cmd_overlap(
    path: &Path,
    eps_supp: f64,
    bound_tol: f64,
    born_tol: f64,
    csv: bool,
) -> CommandResult {
    let model = load_valid_model(path)?;
    let born = check_born_reproduction(&model, born_tol)
        .map_err(|e| CommandError::domain(format!("{e}\n")))?;
    if !born.pass {
        return Err(CommandError::domain(to_json(&born)));
    }
    let opts = ClassifyOptions {
        eps_supp,
        bound_tol,
        ..ClassifyOptions::default()
    };
    let reports = overlap_bound_audit(&model, &opts)
        .map_err(|e| CommandError::domain(format!("{e}\n")))?;
    if csv {
        Ok(overlap_csv(&reports))
    } else {
        Ok(to_json(&reports))
    }
}

fn parse_state(token: &str) -> Result<PureState, CommandError> {
    match token {
        "0" => Ok(ket0()),
        "1" => Ok(ket1()),
        "+" => Ok(plus()),
        "-" => Ok(minus()),
        "i" => Ok(ket_i()),
        "-i" => Ok(ket_minus_i()),
        _ => {
            if let Some(deg) = token.strip_prefix("theta:") {
                let degrees: f64 = deg.parse().map_err(|_| {
                    CommandError::usage(format!("cannot parse angle in state token `{token}`"))
                })?;
                Ok(rotated(format!("theta{degrees}"), degrees.to_radians()))
            } else {
                Err(CommandError::usage(format!(
                    "unknown state token `{token}` (try 0, 1, +, -, i, -i, theta:<degrees>)"
                )))
            }
        }
    }
}

fn parse_measurements(spec: &str) -> Result<Vec<Measurement>, CommandError> {
    spec.split(',')
        .map(|token| match token.trim() {
            "Z" => Ok(z_basis()),
            "X" => Ok(x_basis()),
            "Y" => Ok(y_basis()),
            other => Err(CommandError::usage(format!(
                "unknown measurement token `{other}` (try Z, X, Y)"
            ))),
        })
        .collect()
}

#[derive(Serialize)]
struct SearchRecord {
    psi: String,
    phi: String,
    /// Angle between the states in degrees: acos of |<psi|phi>|.
    angle_deg: f64,
    born_overlap: f64,
    solution: OverlapSolution,
}

/// `overlap-search`: maximum-overlap LP per instance, either one explicit
/// pair (`--states`) or a sweep of (|0>, cos t|0> + sin t|1>) pairs.
pub fn cmd_overlap_search(
    dim: usize,
    states: Option<&str>,
    measurements: &str,
    sweep: Option<&str>,
    tol: f64,
    exact: bool,
    csv: bool,
) -> CommandResult {
    if dim != 2 {
        return Err(CommandError::usage(
            "overlap-search currently supports --dim 2 only".to_string(),
        ));
    }
    let meas = parse_measurements(measurements)?;
    let mut instances: Vec<(PureState, PureState)> = Vec::new();
    match (states, sweep) {
        (Some(_), Some(_)) => {
            return Err(CommandError::usage(
                "pass either --states or --sweep, not both".to_string(),
            ))
        }
        (Some(spec), None) => {
            let tokens: Vec<&str> = spec.split(',').map(str::trim).collect();
            if tokens.len() != 2 {
                return Err(CommandError::usage(format!(
                    "--states wants exactly two comma-separated tokens, got {}",
                    tokens.len()
                )));
            }
            instances.push((parse_state(tokens[0])?, parse_state(tokens[1])?));
        }
        (None, Some(range)) => {
            let parts: Vec<&str> = range.split(':').collect();
            if parts.len() != 3 {
                return Err(CommandError::usage(
                    "--sweep wants start:stop:count in degrees".to_string(),
                ));
            }
            let start: f64 = parts[0]
                .parse()
                .map_err(|_| CommandError::usage("bad sweep start".to_string()))?;
            let stop: f64 = parts[1]
                .parse()
                .map_err(|_| CommandError::usage("bad sweep stop".to_string()))?;
            let count: usize = parts[2]
                .parse()
                .map_err(|_| CommandError::usage("bad sweep count".to_string()))?;
            if count == 0 {
                return Err(CommandError::usage("sweep count must be >= 1".to_string()));
            }
            for k in 0..count {
                let theta = if count == 1 {
                    start
                } else {
                    start + (stop - start) * k as f64 / (count - 1) as f64
                };
                instances.push((ket0(), rotated(format!("theta{theta}"), theta.to_radians())));
            }
        }
        (None, None) => {
            return Err(CommandError::usage(
                "pass --states or --sweep to pick instances".to_string(),
            ))
        }
    }

    let mut records = Vec::with_capacity(instances.len());
    for (psi, phi) in &instances {
        let solution = if exact {
            lp_max_symmetric_overlap_exact(psi, phi, &meas, tol)
        } else {
            lp_max_symmetric_overlap(psi, phi, &meas, tol)
        }
        .map_err(|e| CommandError::domain(format!("{e}\n")))?;
        let born_overlap = inner_product(psi, phi)
            .map_err(|e| CommandError::domain(format!("{e}\n")))?
            .norm_sqr();
        let angle_deg = born_overlap.sqrt().min(1.0).acos().to_degrees();
        records.push(SearchRecord {
            psi: psi.label().to_string(),
            phi: phi.label().to_string(),
            angle_deg,
            born_overlap,
            solution,
        });
    }

    if csv {
        let mut out = String::from("psi,phi,angle_deg,max_overlap,born_overlap,status\n");
        for r in &records {
            out.push_str(&format!(
                "{},{},{},{},{},{}\n",
                r.psi,
                r.phi,
                r.angle_deg,
                r.solution.value,
                r.born_overlap,
                match r.solution.status {
                    ontoscope_core::optimize::SolutionStatus::Optimal => "optimal",
                    ontoscope_core::optimize::SolutionStatus::Infeasible => "infeasible",
                }
            ));
        }
        Ok(out)
    } else {
        Ok(to_json(&records))
    }
}

/// `pbr`: the product-preparation contradiction certificate.
pub fn cmd_pbr(overlap_q: f64, exact: bool) -> CommandResult {
    let certificate = pbr_contradiction(overlap_q, exact)
        .map_err(|e| CommandError::usage(format!("{e}")))?;
    Ok(to_json(&certificate))
}

/// `demo-bomb`: interferometer outcome probabilities.
pub fn cmd_demo_bomb(no_bomb: bool) -> CommandResult {
    Ok(to_json(&elitzur_vaidman_demo(!no_bomb)))
}

#[derive(Serialize)]
struct ZooManifest {
    written: Vec<String>,
}

/// `zoo`: write every fixture model to `dir` as JSON documents.
pub fn cmd_zoo(dir: &Path, ks_grid: usize) -> CommandResult {
    std::fs::create_dir_all(dir)
        .map_err(|e| CommandError::usage(format!("cannot create {}: {e}", dir.display())))?;
    let mut written = Vec::new();
    for model in standard_zoo(ks_grid) {
        let doc = ModelDocument::from_model(&model)
            .map_err(|e| CommandError::domain(format!("{e}\n")))?;
        let path = dir.join(format!("{}.json", model.name));
        let mut payload = serde_json::to_string_pretty(&doc).expect("documents serialize");
        payload.push('\n');
        std::fs::write(&path, payload)
            .map_err(|e| CommandError::usage(format!("cannot write {}: {e}", path.display())))?;
        written.push(path.display().to_string());
    }
    Ok(to_json(&ZooManifest { written }))
}
