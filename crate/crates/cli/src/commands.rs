use serde::Serialize;
use swanson_core::numeric::compare_spectra;
use swanson_core::params::{solve_couplings, CouplingSolution};
use swanson_core::spectrum::{energy_plus, fd_z_max, numeric_levels, phi_minus, phi_plus, PhiMinusMethod};
use swanson_core::verify::{verify_forward, verify_inverse, Status, VerificationReport, VerifySettings};
use swanson_core::{Error as CoreError, FactorizationParams, ModelParams, Side};

use crate::config::{Format, Mode, RunConfig};
use crate::error::{CliError, CliResult};
use crate::output::{to_csv, to_json, Cell};

pub const SCHEMA_VERSION: u32 = 1;

/// Rendered body plus an optional failure that still lets the body be written.
#[derive(Debug)]
pub struct CommandOutput {
    pub body: String,
    pub warnings: Vec<String>,
    pub failure: Option<CliError>,
}

impl CommandOutput {
    fn ok(body: String) -> Self {
        Self { body, warnings: Vec::new(), failure: None }
    }
}

fn z_max(cfg: &RunConfig, fp: &FactorizationParams, levels: usize) -> f64 {
    cfg.z_max.unwrap_or_else(|| fd_z_max(fp, levels))
}

// solve

#[derive(Debug, Serialize)]
struct SolveDoc {
    schema_version: u32,
    command: &'static str,
    mode: Mode,
    factorization: Option<FactorizationParams>,
    model: Option<ModelParams>,
    couplings: Option<CouplingSolution>,
    constraints: Option<swanson_core::params::ConstraintReport>,
    error: Option<String>,
}

pub fn solve(cfg: &RunConfig) -> CliResult<CommandOutput> {
    let mut doc = SolveDoc {
        schema_version: SCHEMA_VERSION,
        command: "solve",
        mode: cfg.mode,
        factorization: None,
        model: None,
        couplings: None,
        constraints: None,
        error: None,
    };
    let mut failure = None;
    if cfg.mode == Mode::Inverse {
        let m = cfg.model()?;
        doc.model = Some(m);
        doc.couplings = Some(solve_couplings(&m)?);
    }
    match cfg.resolve() {
        Ok(r) => {
            doc.factorization = Some(r.fp);
            doc.constraints = r.constraints;
        }
        Err(e @ CliError::Infeasible(_)) => {
            doc.error = Some(e.to_string());
            failure = Some(e);
        }
        Err(e) => return Err(e),
    }
    let body = match cfg.format {
        Format::Json => to_json(&doc)?,
        Format::Csv => {
            let mut rows: Vec<Vec<Cell>> = Vec::new();
            let mut push = |k: &str, v: f64| rows.push(vec![k.into(), v.into()]);
            if let Some(fp) = doc.factorization {
                for (k, v) in [
                    ("omega_bar", fp.omega_bar),
                    ("rho_q", fp.rho_q),
                    ("d", fp.d),
                    ("mu", fp.mu),
                    ("lambda", fp.lambda),
                    ("omega_hat", fp.omega_hat),
                    ("gamma", fp.gamma),
                ] {
                    push(k, v);
                }
                if let Some(c) = fp.c {
                    push("c", c);
                }
            }
            if let Some(s) = doc.couplings {
                push("coupling_d", s.d);
                push("coupling_c", s.c);
                push("coupling_x", s.x);
                push("coupling_residual", s.coupling_residual);
                push("cubic_residual", s.cubic_residual);
            }
            if let Some(r) = doc.constraints {
                for (k, v) in [
                    ("residual_mu_squared", r.mu_squared),
                    ("residual_quadratic", r.quadratic),
                    ("residual_constant", r.constant),
                    ("residual_coupling", r.coupling),
                    ("residual_cubic", r.cubic),
                ] {
                    push(k, v);
                }
            }
            if let Some(e) = &doc.error {
                rows.push(vec!["error".into(), e.clone().into()]);
            }
            to_csv(&["field", "value"], &rows)
        }
    };
    Ok(CommandOutput { body, warnings: Vec::new(), failure })
}

// spectrum

#[derive(Debug, Clone, Serialize)]
pub struct SpectrumRow {
    pub n: usize,
    pub e_analytic: f64,
    pub e_plus: f64,
    pub rel_error_plus: f64,
    pub e_minus: f64,
    pub rel_error_minus: f64,
}

#[derive(Debug, Serialize)]
struct SpectrumDoc {
    schema_version: u32,
    command: &'static str,
    factorization: FactorizationParams,
    z_min: f64,
    z_max: f64,
    grids: Vec<usize>,
    rows: Vec<SpectrumRow>,
    /// Minus-side FD levels below the analytic ground state.
    unexpected_low_levels: Vec<f64>,
}

/// Analytic and Richardson-extrapolated levels `0..=n_max` on both sides.
pub fn spectrum_rows(fp: &FactorizationParams, n_max: usize, z_min: f64, z_max: f64, grids: &[usize]) -> CliResult<(Vec<SpectrumRow>, Vec<f64>)> {
    let k = n_max + 1;
    let plus = numeric_levels(fp, Side::Plus, k, z_min, z_max, grids)?;
    let minus = numeric_levels(fp, Side::Minus, k, z_min, z_max, grids)?;
    let analytic: Vec<f64> = (0..k).map(|n| energy_plus(fp, n)).collect();
    let cmp = compare_spectra(&analytic, &minus.extrapolated, 1e-6);
    let rows = (0..k)
        .map(|n| {
            let e = analytic[n];
            SpectrumRow {
                n,
                e_analytic: e,
                e_plus: plus.extrapolated[n],
                rel_error_plus: (plus.extrapolated[n] - e).abs() / e.abs(),
                e_minus: minus.extrapolated[n],
                rel_error_minus: (minus.extrapolated[n] - e).abs() / e.abs(),
            }
        })
        .collect();
    Ok((rows, cmp.unexpected_low_levels))
}

pub fn spectrum(cfg: &RunConfig) -> CliResult<CommandOutput> {
    let fp = cfg.resolve()?.fp;
    let zm = z_max(cfg, &fp, cfg.n_max + 1);
    let (rows, low) = spectrum_rows(&fp, cfg.n_max, cfg.z_min, zm, &cfg.grids)?;
    let body = match cfg.format {
        Format::Json => to_json(&SpectrumDoc {
            schema_version: SCHEMA_VERSION,
            command: "spectrum",
            factorization: fp,
            z_min: cfg.z_min,
            z_max: zm,
            grids: cfg.grids.clone(),
            rows,
            unexpected_low_levels: low,
        })?,
        Format::Csv => to_csv(
            &["n", "e_analytic", "e_plus", "rel_error_plus", "e_minus", "rel_error_minus"],
            &rows
                .iter()
                .map(|r| {
                    vec![r.n.into(), r.e_analytic.into(), r.e_plus.into(), r.rel_error_plus.into(), r.e_minus.into(), r.rel_error_minus.into()]
                })
                .collect::<Vec<_>>(),
        ),
    };
    Ok(CommandOutput::ok(body))
}

// wavefunctions

#[derive(Debug, Clone, Serialize)]
pub struct WaveRow {
    pub n: usize,
    pub z: f64,
    pub value: f64,
    pub derivative: f64,
}

#[derive(Debug, Serialize)]
struct WaveDoc {
    schema_version: u32,
    command: &'static str,
    side: Side,
    factorization: FactorizationParams,
    rows: Vec<WaveRow>,
    skipped: usize,
}

/// Parses `a,b,c` or `start:stop:count` (inclusive, evenly spaced).
pub fn parse_grid(s: &str) -> CliResult<Vec<f64>> {
    let bad = |m: String| CliError::Config(m);
    let s = s.trim();
    if s.is_empty() {
        return Ok(Vec::new());
    }
    if let [a, b, n] = s.split(':').collect::<Vec<_>>()[..] {
        let a: f64 = a.trim().parse().map_err(|e| bad(format!("grid start {a}: {e}")))?;
        let b: f64 = b.trim().parse().map_err(|e| bad(format!("grid stop {b}: {e}")))?;
        let n: usize = n.trim().parse().map_err(|e| bad(format!("grid count {n}: {e}")))?;
        return Ok(linspace(a, b, n));
    }
    s.split(',').map(|t| t.trim().parse::<f64>().map_err(|e| bad(format!("grid value {t}: {e}")))).collect()
}

pub fn linspace(a: f64, b: f64, n: usize) -> Vec<f64> {
    match n {
        0 => Vec::new(),
        1 => vec![a],
        _ => (0..n).map(|i| a + (b - a) * i as f64 / (n - 1) as f64).collect(),
    }
}

pub fn wavefunctions(cfg: &RunConfig, side: Side, n_list: &[usize], z_grid: &[f64]) -> CliResult<CommandOutput> {
    let fp = cfg.resolve()?.fp;
    let mut rows = Vec::new();
    let mut skipped = 0usize;
    for &n in n_list {
        for &z in z_grid {
            let eval = match side {
                Side::Plus => phi_plus(&fp, n, z),
                Side::Minus => phi_minus(&fp, n, z, PhiMinusMethod::Normalized),
            };
            match eval {
                Ok(w) => rows.push(WaveRow { n, z, value: w.value, derivative: w.derivative }),
                Err(CoreError::Domain(_)) => skipped += 1,
                Err(e) => return Err(e.into()),
            }
        }
    }
    let warnings = if skipped > 0 { vec![format!("skipped {skipped} samples outside z > 0")] } else { Vec::new() };
    let body = match cfg.format {
        Format::Json => to_json(&WaveDoc { schema_version: SCHEMA_VERSION, command: "wavefunctions", side, factorization: fp, rows, skipped })?,
        Format::Csv => to_csv(
            &["n", "z", "value", "derivative"],
            &rows.iter().map(|r| vec![r.n.into(), r.z.into(), r.value.into(), r.derivative.into()]).collect::<Vec<_>>(),
        ),
    };
    Ok(CommandOutput { body, warnings, failure: None })
}

// verify

pub fn verify_report(cfg: &RunConfig) -> CliResult<VerificationReport> {
    let settings = VerifySettings { n_max: cfg.n_max, tolerances: cfg.tolerances.clone(), ..Default::default() };
    Ok(match cfg.mode {
        Mode::Forward => verify_forward(&cfg.resolve()?.fp, &settings)?,
        Mode::Inverse => verify_inverse(&cfg.model()?, &settings)?,
    })
}

pub fn verify(cfg: &RunConfig) -> CliResult<CommandOutput> {
    let report = verify_report(cfg)?;
    let fails = report.failures().len();
    let body = match cfg.format {
        Format::Json => to_json(&report)?,
        Format::Csv => to_csv(
            &["section", "id", "status", "residual", "tolerance", "description"],
            &report
                .entries
                .iter()
                .map(|e| ("identity", e))
                .chain(report.errata.iter().map(|e| ("errata", e)))
                .map(|(sec, e)| {
                    let status = match e.status {
                        Status::Pass => "PASS",
                        Status::Fail => "FAIL",
                        Status::Reported => "REPORTED",
                    };
                    vec![sec.into(), e.id.clone().into(), status.into(), e.residual.into(), e.tolerance.into(), e.description.clone().into()]
                })
                .collect::<Vec<_>>(),
        ),
    };
    let failure = (fails > 0).then_some(CliError::VerifyFailed(fails));
    Ok(CommandOutput { body, warnings: Vec::new(), failure })
}

// sweep

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum SweepParam {
    RhoQ,
    D,
    OmegaBar,
}

#[derive(Debug, Clone, Serialize)]
pub struct SweepRow {
    pub index: usize,
    pub value: f64,
    pub e_analytic: Vec<f64>,
    pub e_numeric: Vec<f64>,
    pub max_identity_residual: Option<f64>,
    pub error: Option<String>,
}

pub const SWEEP_LEVELS: usize = 3;

fn sweep_step(cfg: &RunConfig, param: SweepParam, index: usize, value: f64) -> SweepRow {
    let mut row = SweepRow { index, value, e_analytic: Vec::new(), e_numeric: Vec::new(), max_identity_residual: None, error: None };
    let mut c = cfg.clone();
    match param {
        SweepParam::RhoQ => c.rho_q = value,
        SweepParam::D => c.d = value,
        SweepParam::OmegaBar => c.omega_bar = value,
    }
    let mut run = || -> CliResult<()> {
        let fp = c.resolve()?.fp;
        row.e_analytic = (0..SWEEP_LEVELS).map(|n| energy_plus(&fp, n)).collect();
        let zm = z_max(&c, &fp, SWEEP_LEVELS);
        row.e_numeric = numeric_levels(&fp, Side::Plus, SWEEP_LEVELS, c.z_min, zm, &c.grids)?.extrapolated;
        let settings = VerifySettings { n_max: SWEEP_LEVELS - 1, tolerances: c.tolerances.clone(), ..Default::default() };
        let rep = verify_forward(&fp, &settings)?;
        row.max_identity_residual = Some(rep.entries.iter().map(|e| e.residual).fold(0.0, f64::max));
        Ok(())
    };
    if let Err(e) = run() {
        row.error = Some(e.to_string());
    }
    row
}

/// Evaluates every step on a pool of `workers` threads; rows come back in
/// ascending index order.
pub fn sweep_rows(cfg: &RunConfig, param: SweepParam, range: (f64, f64), steps: usize, workers: Option<usize>) -> CliResult<Vec<SweepRow>> {
    use rayon::prelude::*;
    if cfg.mode != Mode::Forward {
        return Err(CliError::Config("sweep runs in forward mode".into()));
    }
    if steps == 0 {
        return Err(CliError::Config("sweep needs at least one step".into()));
    }
    let values = linspace(range.0, range.1, steps);
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(w) = workers {
        builder = builder.num_threads(w.max(1));
    }
    let pool = builder.build().map_err(|e| CliError::Config(format!("worker pool: {e}")))?;
    Ok(pool.install(|| values.par_iter().enumerate().map(|(i, &v)| sweep_step(cfg, param, i, v)).collect()))
}

pub fn sweep(cfg: &RunConfig, param: SweepParam, range: (f64, f64), steps: usize, workers: Option<usize>) -> CliResult<CommandOutput> {
    let rows = sweep_rows(cfg, param, range, steps, workers)?;
    let failed = rows.iter().filter(|r| r.error.is_some()).count();
    let warnings = if failed > 0 { vec![format!("{failed} sweep steps failed")] } else { Vec::new() };
    let body = match cfg.format {
        Format::Json => to_json(&serde_json::json!({
            "schema_version": SCHEMA_VERSION,
            "command": "sweep",
            "parameter": param,
            "rows": rows,
        }))?,
        Format::Csv => {
            let mut header = vec!["index".to_string(), "parameter".into(), "value".into()];
            header.extend((0..SWEEP_LEVELS).map(|n| format!("e{n}_analytic")));
            header.extend((0..SWEEP_LEVELS).map(|n| format!("e{n}_numeric")));
            header.extend(["max_identity_residual".into(), "error".into()]);
            let name = serde_json::to_value(param)?.as_str().unwrap_or_default().to_string();
            let rows: Vec<Vec<Cell>> = rows
                .iter()
                .map(|r| {
                    let mut cells: Vec<Cell> = vec![r.index.into(), name.clone().into(), r.value.into()];
                    cells.extend((0..SWEEP_LEVELS).map(|n| Cell::from(r.e_analytic.get(n).copied())));
                    cells.extend((0..SWEEP_LEVELS).map(|n| Cell::from(r.e_numeric.get(n).copied())));
                    cells.push(r.max_identity_residual.into());
                    cells.push(r.error.clone().into());
                    cells
                })
                .collect();
            to_csv(&header.iter().map(String::as_str).collect::<Vec<_>>(), &rows)
        }
    };
    Ok(CommandOutput { body, warnings, failure: None })
}

/// Parses `a,b` or `a:b`.
pub fn parse_range(s: &str) -> CliResult<(f64, f64)> {
    let (a, b) = s.split_once([',', ':']).ok_or_else(|| CliError::Config(format!("range {s}: expected START,STOP")))?;
    let p = |t: &str| t.trim().parse::<f64>().map_err(|e| CliError::Config(format!("range value {t}: {e}")));
    Ok((p(a)?, p(b)?))
}
