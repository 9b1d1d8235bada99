pub mod design;
pub mod fractal;
pub mod levels;
pub mod norm;
pub mod page;
pub mod phase;
pub mod spectrum;

use rbment::ensemble::{finite_size_fit, FitPoint, QuadraticFit};
use rbment::output::{config_hash, fmt_f64, write_json, CsvTable};
use rbment::Error;
use serde::Serialize;
use std::fmt;
use std::path::PathBuf;

#[derive(Debug)]
pub enum CliError {
    Config(String),
    Lib(Error),
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Config(s) => write!(f, "config: {s}"),
            CliError::Lib(e) => write!(f, "{e}"),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Lib(e)
    }
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Config(_) => 2,
            CliError::Lib(Error::InvalidParameters(_) | Error::Domain(_) | Error::Json(_)) => 2,
            CliError::Lib(Error::Capacity { .. } | Error::BudgetExceeded { .. }) => 3,
            CliError::Lib(_) => 1,
        }
    }
}

pub type CliResult<T> = Result<T, CliError>;

/// Output location and overwrite policy for one subcommand run.
pub struct Ctx {
    dir: PathBuf,
    force: bool,
    seed: Option<u64>,
}

impl Ctx {
    /// Refuses to reuse a nonempty output directory unless `force`.
    pub fn new(dir: PathBuf, force: bool, seed: Option<u64>) -> CliResult<Self> {
        if !force && dir.is_dir() {
            let nonempty = std::fs::read_dir(&dir)
                .map_err(Error::from)?
                .next()
                .is_some();
            if nonempty {
                return Err(Error::OutputExists(dir.display().to_string()).into());
            }
        }
        Ok(Self { dir, force, seed })
    }

    pub fn seed(&self, configured: u64) -> u64 {
        self.seed.unwrap_or(configured)
    }

    pub fn dir(&self) -> &std::path::Path {
        &self.dir
    }

    pub fn csv(&self, name: &str, table: &CsvTable, hash: &str) -> CliResult<PathBuf> {
        let p = self.dir.join(name);
        table.write(&p, hash, self.force)?;
        Ok(p)
    }

    pub fn json<T: Serialize>(&self, name: &str, hash: &str, body: &T) -> CliResult<PathBuf> {
        let p = self.dir.join(name);
        write_json(&p, hash, body, self.force)?;
        Ok(p)
    }
}

/// Hash of the effective configuration (after command-line overrides).
pub fn hash<T: Serialize>(cfg: &T) -> CliResult<String> {
    Ok(config_hash(cfg)?)
}

pub fn f(x: f64) -> String {
    fmt_f64(x)
}

pub fn label<T: Serialize>(x: &T) -> String {
    serde_json::to_value(x)
        .ok()
        .and_then(|v| v.as_str().map(str::to_string))
        .unwrap_or_default()
}

/// Quadratic `1/N` extrapolation when at least four sizes are present.
pub fn extrapolate(points: &[(usize, f64, f64)]) -> CliResult<Option<QuadraticFit>> {
    if points.len() < 4 {
        return Ok(None);
    }
    let pts: Vec<FitPoint> = points
        .iter()
        .map(|&(n, y, sigma)| FitPoint {
            x: 1.0 / n as f64,
            y,
            sigma,
        })
        .collect();
    Ok(Some(finite_size_fit(&pts)?))
}

pub const FIT_HEADER: [&str; 9] = [
    "intercept",
    "intercept_stderr",
    "band_lo",
    "band_hi",
    "c1",
    "c2",
    "chi_squared",
    "dof",
    "points",
];

pub fn fit_cells(fit: &QuadraticFit, points: usize) -> Vec<String> {
    vec![
        f(fit.intercept),
        f(fit.intercept_stderr),
        f(fit.intercept_band.0),
        f(fit.intercept_band.1),
        f(fit.coefficients[1]),
        f(fit.coefficients[2]),
        f(fit.chi_squared),
        fit.dof.to_string(),
        points.to_string(),
    ]
}
