use std::fs;
use std::path::Path;

use num_complex::Complex64;
use serde::Serialize;
use shiftrad_core::blaschke::{format_complex, parse_complex, parse_zeros, BlaschkeProduct};
use shiftrad_core::ft::{ft_norm, ft_scan};
use shiftrad_core::numrange::{self, boundary_sweep, numerical_radius_with, radius_via_limit_with, EXTRAPOLATION_SPREAD};
use shiftrad_core::pick::{self, critical_gamma, is_feasible, pick_matrix, PickProblem};
use shiftrad_core::realzeros::{closed_form, numerical_radius_root_method, ORACLE_TOL};
use shiftrad_core::result::{InputsEcho, Method, NormResult};
use shiftrad_core::RunConfig;

use crate::output::{csv_row, to_json};
use crate::{auto_method, Cli, CliError, Command, NormMethod, NumradMethod};

/// Rendered stdout plus whether any cross-check missed its tolerance.
#[derive(Debug, Clone, PartialEq)]
pub struct Output {
    pub stdout: String,
    pub mismatch: bool,
}

#[derive(Serialize)]
struct Report<'a> {
    value: f64,
    method: Method,
    cross_checks: &'a std::collections::BTreeMap<Method, shiftrad_core::result::CrossCheck>,
    warnings: &'a [String],
    diagnostics: &'a std::collections::BTreeMap<String, f64>,
    inputs_echo: &'a InputsEcho,
    config_echo: &'a RunConfig,
}

fn report(result: &NormResult, cfg: &RunConfig, pretty: bool) -> Output {
    let r = Report {
        value: result.value,
        method: result.method,
        cross_checks: &result.cross_checks,
        warnings: &result.warnings,
        diagnostics: &result.diagnostics,
        inputs_echo: &result.inputs_echo,
        config_echo: cfg,
    };
    Output { stdout: to_json(&r, pretty), mismatch: result.has_mismatch() }
}

pub fn load_config(path: Option<&Path>) -> Result<RunConfig, CliError> {
    match path {
        None => Ok(RunConfig::default()),
        Some(p) => {
            let text = fs::read_to_string(p).map_err(|e| CliError::Io(format!("cannot read {}: {e}", p.display())))?;
            RunConfig::from_overrides(&text).map_err(|e| CliError::Input(format!("{}: {e}", p.display())))
        }
    }
}

fn product(zeros: &str) -> Result<BlaschkeProduct, CliError> {
    BlaschkeProduct::new(parse_zeros(zeros).map_err(CliError::input)?).map_err(CliError::input)
}

fn parse_t(t: &str) -> Result<Complex64, CliError> {
    parse_complex(t).map_err(CliError::input)
}

pub fn run(cli: &Cli) -> Result<Output, CliError> {
    let cfg = load_config(cli.config.as_deref())?;
    match &cli.command {
        Command::Numrad { zeros, method } => numrad(&product(zeros)?, *method, &cfg, cli.json),
        Command::Norm { zeros, t, method } => norm(&product(zeros)?, parse_t(t)?, *method, &cfg, cli.json),
        Command::Range { zeros, samples, out } => range(&product(zeros)?, *samples, out, &cfg, cli.json),
        Command::PickCheck { zeros, t, gamma } => pick_check(&product(zeros)?, parse_t(t)?, *gamma, cli.json),
        Command::FtTrace { zeros, t, out } => ft_trace(&product(zeros)?, parse_t(t)?, out.as_deref(), cli.json),
    }
}

pub fn numrad(b: &BlaschkeProduct, method: NumradMethod, cfg: &RunConfig, pretty: bool) -> Result<Output, CliError> {
    let resolved = match method {
        NumradMethod::Auto => auto_method(b.degree(), b.has_real_zeros()),
        m => m,
    };
    let echo = InputsEcho::zeros(b.zeros());
    let a = &b.shift_matrix().matrix;
    let oracle = || numerical_radius_with(a, cfg).map_err(CliError::input);
    let mut result = match resolved {
        NumradMethod::Closed => {
            let mut r = NormResult::new(closed_form(b).map_err(CliError::input)?, Method::ClosedForm, echo);
            if cfg.cross_check {
                r.cross_check(Method::Oracle, oracle()?.value, ORACLE_TOL);
            }
            r
        }
        NumradMethod::Roots => numerical_radius_root_method(b, cfg).map_err(CliError::input)?,
        NumradMethod::Oracle => {
            let est = oracle()?;
            let mut r = NormResult::new(est.value, Method::Oracle, echo);
            r.diagnostic("argmax_theta", est.argmax_theta);
            r.diagnostic("refinement_width", est.refinement_width);
            if cfg.cross_check {
                match radius_via_limit_with(a, cfg) {
                    Ok(l) => {
                        r.cross_check(Method::Limit, l.value, EXTRAPOLATION_SPREAD);
                    }
                    Err(e) => r.warn(format!("limit cross-check skipped: {e}")),
                }
            }
            r
        }
        NumradMethod::Limit => {
            let est = radius_via_limit_with(a, cfg).map_err(CliError::input)?;
            let mut r = NormResult::new(est.value, Method::Limit, echo);
            r.diagnostic("argmax_theta", est.argmax_theta);
            if cfg.cross_check {
                r.cross_check(Method::Oracle, oracle()?.value, EXTRAPOLATION_SPREAD);
            }
            r
        }
        NumradMethod::Pick => pick::radius_via_pick_result(b, cfg).map_err(CliError::input)?,
        NumradMethod::Auto => unreachable!("auto is resolved above"),
    };
    if method == NumradMethod::Auto {
        result.diagnostics.insert("auto".to_string(), 1.0);
    }
    Ok(report(&result, cfg, pretty))
}

fn svd_norm(b: &BlaschkeProduct, t: Complex64) -> Result<f64, CliError> {
    numrange::norm_i_plus_ta(&b.shift_matrix().matrix, t).map_err(CliError::input)
}

pub fn norm(b: &BlaschkeProduct, t: Complex64, method: NormMethod, cfg: &RunConfig, pretty: bool) -> Result<Output, CliError> {
    let echo = InputsEcho::zeros(b.zeros()).with_t(t);
    let distinct = b.min_separation() >= pick::MIN_NODE_SEPARATION;
    let result = match method {
        NormMethod::Svd => {
            let mut r = NormResult::new(svd_norm(b, t)?, Method::Oracle, echo);
            if cfg.cross_check && distinct {
                let g = pick::critical_gamma_bracket(b.zeros(), t, cfg.tol_bisect).map_err(CliError::input)?;
                r.cross_check(Method::Pick, g.gamma, pick::SVD_TOL);
            }
            r
        }
        NormMethod::Pick => critical_gamma(b.zeros(), t, cfg).map_err(CliError::input)?,
        NormMethod::Ft => {
            let f = ft_norm(b, t).map_err(CliError::input)?;
            let mut r = NormResult::new(f.norm, Method::Ft, echo);
            r.diagnostic("rho_bar", f.rho_bar);
            r.diagnostic("defect_residual", f.defect_residual);
            r.diagnostic("bracket_lo", f.bracket.0);
            r.diagnostic("bracket_hi", f.bracket.1);
            if cfg.cross_check {
                r.cross_check(Method::Oracle, svd_norm(b, t)?, pick::SVD_TOL);
            }
            r
        }
    };
    Ok(report(&result, cfg, pretty))
}

fn write_file(path: &Path, contents: &str) -> Result<(), CliError> {
    fs::write(path, contents).map_err(|e| CliError::Io(format!("cannot write {}: {e}", path.display())))
}

#[derive(Serialize)]
struct RangeSummary<'a> {
    value: f64,
    argmax_theta: f64,
    refinement_width: f64,
    max_sampled_re: f64,
    samples: usize,
    out: String,
    inputs_echo: &'a InputsEcho,
}

pub fn range(b: &BlaschkeProduct, samples: usize, out: &Path, cfg: &RunConfig, pretty: bool) -> Result<Output, CliError> {
    if samples < 8 {
        return Err(CliError::Input(format!("--samples must be at least 8, got {samples}")));
    }
    let a = &b.shift_matrix().matrix;
    let sweep = boundary_sweep(a, samples).map_err(CliError::input)?;
    let mut csv = String::from("theta,support_value,re,im\n");
    for s in &sweep {
        csv.push_str(&csv_row(&[s.theta, s.support_value, s.boundary_point.re, s.boundary_point.im]));
        csv.push('\n');
    }
    write_file(out, &csv)?;
    let est = numerical_radius_with(a, &RunConfig { theta_samples: samples, ..cfg.clone() }).map_err(CliError::input)?;
    let summary = RangeSummary {
        value: est.value,
        argmax_theta: est.argmax_theta,
        refinement_width: est.refinement_width,
        max_sampled_re: sweep.iter().map(|s| s.boundary_point.re).fold(f64::NEG_INFINITY, f64::max),
        samples,
        out: out.display().to_string(),
        inputs_echo: &InputsEcho::zeros(b.zeros()),
    };
    Ok(Output { stdout: to_json(&summary, pretty), mismatch: false })
}

#[derive(Serialize)]
struct PickCheckReport {
    feasible: bool,
    min_eigenvalue: f64,
    /// Row-major `[re, im]` pairs of the assembled Pick matrix.
    matrix: Vec<Vec<[f64; 2]>>,
    inputs_echo: InputsEcho,
}

pub fn pick_check(b: &BlaschkeProduct, t: Complex64, gamma: f64, pretty: bool) -> Result<Output, CliError> {
    let problem = PickProblem::new(b.zeros().to_vec(), t, gamma).map_err(CliError::input)?;
    let f = is_feasible(&problem).map_err(CliError::input)?;
    let m = pick_matrix(&problem).assembled;
    let matrix = (0..m.rows()).map(|i| m.row(i).iter().map(|z| [z.re + 0.0, z.im + 0.0]).collect()).collect();
    let report = PickCheckReport {
        feasible: f.feasible,
        min_eigenvalue: f.min_eigenvalue,
        matrix,
        inputs_echo: InputsEcho::zeros(b.zeros()).with_t(t).with_gamma(gamma),
    };
    Ok(Output { stdout: to_json(&report, pretty), mismatch: false })
}

#[derive(Serialize)]
struct FtTraceSummary {
    rows: usize,
    out: String,
    norm: Option<f64>,
    rho_bar: Option<f64>,
    note: Option<String>,
    inputs_echo: InputsEcho,
}

pub fn ft_trace(b: &BlaschkeProduct, t: Complex64, out: Option<&Path>, pretty: bool) -> Result<Output, CliError> {
    let states = ft_scan(b, t).map_err(CliError::input)?;
    let mut csv = String::from("rho,z1_re,z1_im,z2_re,z2_im,defect_re,defect_im\n");
    for s in &states {
        csv.push_str(&csv_row(&[s.rho, s.z1.re, s.z1.im, s.z2.re, s.z2.im, s.defect.re, s.defect.im]));
        csv.push('\n');
    }
    let Some(out) = out else {
        return Ok(Output { stdout: csv.trim_end().to_string(), mismatch: false });
    };
    write_file(out, &csv)?;
    let (norm, rho_bar, note) = match ft_norm(b, t) {
        Ok(r) => (Some(r.norm), Some(r.rho_bar), None),
        Err(e) => (None, None, Some(e.to_string())),
    };
    let summary = FtTraceSummary {
        rows: states.len(),
        out: out.display().to_string(),
        norm,
        rho_bar,
        note,
        inputs_echo: InputsEcho::zeros(b.zeros()).with_t(t),
    };
    Ok(Output { stdout: to_json(&summary, pretty), mismatch: false })
}

/// Canonical text of a zero list, as echoed in every report.
pub fn canonical_zeros(b: &BlaschkeProduct) -> Vec<String> {
    b.zeros().iter().map(|&z| format_complex(z)).collect()
}
