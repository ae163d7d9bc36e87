use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use swanson_core::numeric::{DEFAULT_GRIDS, DEFAULT_Z_MIN};
use swanson_core::params::{solve_forward, solve_inverse, ConstraintReport};
use swanson_core::verify::is_known_tolerance;
use swanson_core::{FactorizationParams, ModelParams};

use crate::error::{CliError, CliResult};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Forward,
    Inverse,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
}

/// Serialized run configuration. Missing keys take the defaults of the
/// reference point `wb = rho = d = 1`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub mode: Mode,
    pub omega_bar: f64,
    pub rho_q: f64,
    pub d: f64,
    pub omega: Option<f64>,
    pub alpha: Option<f64>,
    pub beta: Option<f64>,
    pub delta: f64,
    pub n_max: usize,
    pub z_min: f64,
    /// `None` picks twice the turning point of the highest level, at least 10.
    pub z_max: Option<f64>,
    pub grids: Vec<usize>,
    pub tolerances: BTreeMap<String, f64>,
    pub format: Format,
    pub out: Option<PathBuf>,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            mode: Mode::Forward,
            omega_bar: 1.0,
            rho_q: 1.0,
            d: 1.0,
            omega: None,
            alpha: None,
            beta: None,
            delta: 0.0,
            n_max: 5,
            z_min: DEFAULT_Z_MIN,
            z_max: None,
            grids: DEFAULT_GRIDS.to_vec(),
            tolerances: BTreeMap::new(),
            format: Format::Json,
            out: None,
        }
    }
}

/// Command-line overrides; every field wins over the config file.
#[derive(Debug, Clone, Default, PartialEq, clap::Args)]
pub struct Overrides {
    /// JSON run configuration
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    pub mode: Option<Mode>,
    #[arg(long, global = true)]
    pub omega_bar: Option<f64>,
    #[arg(long, global = true)]
    pub rho_q: Option<f64>,
    #[arg(long, global = true)]
    pub d: Option<f64>,
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub omega: Option<f64>,
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub alpha: Option<f64>,
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub beta: Option<f64>,
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub delta: Option<f64>,
    #[arg(long, global = true)]
    pub n_max: Option<usize>,
    #[arg(long, global = true)]
    pub z_min: Option<f64>,
    #[arg(long, global = true)]
    pub z_max: Option<f64>,
    /// Comma-separated point counts, each twice the previous
    #[arg(long, global = true, value_delimiter = ',')]
    pub grids: Option<Vec<usize>>,
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    /// Tolerance override NAME=VALUE; NAME is a verify entry id or `all`
    #[arg(long = "tol", global = true, value_parser = parse_tol)]
    pub tol: Vec<(String, f64)>,
}

fn parse_tol(s: &str) -> Result<(String, f64), String> {
    let (name, value) = s.split_once('=').ok_or_else(|| format!("expected NAME=VALUE, got {s}"))?;
    let value: f64 = value.trim().parse().map_err(|e| format!("tolerance {value}: {e}"))?;
    Ok((name.trim().to_string(), value))
}

impl RunConfig {
    pub fn from_file(path: &Path) -> CliResult<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
        serde_json::from_str(&text).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))
    }

    pub fn load(o: &Overrides) -> CliResult<Self> {
        let mut c = match &o.config {
            Some(p) => Self::from_file(p)?,
            None => Self::default(),
        };
        macro_rules! set {
            ($($f:ident),*) => { $(if let Some(v) = o.$f.clone() { c.$f = v; })* };
        }
        set!(mode, omega_bar, rho_q, d, delta, n_max, z_min, grids, format);
        macro_rules! set_opt {
            ($($f:ident),*) => { $(if o.$f.is_some() { c.$f = o.$f.clone(); })* };
        }
        set_opt!(omega, alpha, beta, z_max, out);
        for (k, v) in &o.tol {
            c.tolerances.insert(k.clone(), *v);
        }
        c.validate()?;
        Ok(c)
    }

    /// Checks that do not need the parameter solvers.
    pub fn validate(&self) -> CliResult<()> {
        let bad = |m: String| Err(CliError::Config(m));
        if !(self.z_min > 0.0 && self.z_min.is_finite()) {
            return bad(format!("z_min = {} must be positive", self.z_min));
        }
        if let Some(zm) = self.z_max {
            if !(zm > self.z_min && zm.is_finite()) {
                return bad(format!("z_max = {zm} must exceed z_min = {}", self.z_min));
            }
        }
        if self.grids.len() < 2 || self.grids.windows(2).any(|w| w[1] != 2 * w[0]) || self.grids[0] < 3 {
            return bad(format!("grids {:?} need at least two sizes >= 3, each twice the previous", self.grids));
        }
        for (name, v) in &self.tolerances {
            if !is_known_tolerance(name) {
                return bad(format!("unknown tolerance name {name}"));
            }
            if !(*v >= 0.0 && v.is_finite()) {
                return bad(format!("tolerance {name} = {v} must be finite and non-negative"));
            }
        }
        if self.mode == Mode::Inverse && (self.omega.is_none() || self.alpha.is_none() || self.beta.is_none()) {
            return bad("inverse mode needs omega, alpha and beta".into());
        }
        Ok(())
    }

    pub fn model(&self) -> CliResult<ModelParams> {
        match (self.omega, self.alpha, self.beta) {
            (Some(w), Some(a), Some(b)) => {
                let m = ModelParams::new(w, a, b).with_delta(self.delta);
                m.validate()?;
                Ok(m)
            }
            _ => Err(CliError::Config("inverse mode needs omega, alpha and beta".into())),
        }
    }

    pub fn resolve(&self) -> CliResult<Resolved> {
        match self.mode {
            Mode::Forward => Ok(Resolved { fp: solve_forward(self.omega_bar, self.rho_q, self.d)?, model: None, constraints: None }),
            Mode::Inverse => {
                let m = self.model()?;
                let (fp, rep) = solve_inverse(&m)?;
                Ok(Resolved { fp, model: Some(m), constraints: Some(rep) })
            }
        }
    }
}

/// Parameters after the forward or inverse solve.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Resolved {
    pub fp: FactorizationParams,
    pub model: Option<ModelParams>,
    pub constraints: Option<ConstraintReport>,
}
