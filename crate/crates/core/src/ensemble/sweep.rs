use crate::entanglement::{
    ipr_fractal_dimension, renyi2_entropy, state_spectrum, von_neumann_entropy, SubregionMask,
};
use crate::error::{Error, Result};
use crate::numerics::mean_and_stderr;
use crate::rbm::{build_state_with_cap, sample_weights, RbmParams, StateVector, DEFAULT_MAX_SPINS};
use crate::rng::sample_seed;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::collections::hash_map::Entry;
use std::collections::HashMap;

/// Default cap on `Σ samples × 2^N` over a sweep.
pub const DEFAULT_BUDGET: u64 = 1 << 34;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Quantity {
    /// `S₂(A)` in nats (not divided by `N`).
    Renyi2,
    /// `S_vN(A)` in nats.
    VonNeumann,
    /// `log⟨Ψ|Ψ⟩`.
    LogNorm,
    D2,
    D3,
    D4,
}

impl Quantity {
    pub fn name(&self) -> &'static str {
        match self {
            Quantity::Renyi2 => "renyi2",
            Quantity::VonNeumann => "von_neumann",
            Quantity::LogNorm => "log_norm",
            Quantity::D2 => "d2",
            Quantity::D3 => "d3",
            Quantity::D4 => "d4",
        }
    }

    fn per_subregion(&self) -> bool {
        matches!(self, Quantity::Renyi2 | Quantity::VonNeumann)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum NamedSchedule {
    /// Every `|A|` from 1 to `N − 1`.
    Page,
    /// `|A| = ⌊N/2⌋`.
    Half,
}

/// Subregion sizes; subregions are the first `|A|` sites.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum SubregionSchedule {
    Named(NamedSchedule),
    Sizes(Vec<usize>),
}

impl Default for SubregionSchedule {
    fn default() -> Self {
        SubregionSchedule::Named(NamedSchedule::Half)
    }
}

impl SubregionSchedule {
    pub fn sizes(&self, n: usize) -> Result<Vec<usize>> {
        let sizes = match self {
            SubregionSchedule::Named(NamedSchedule::Page) => (1..n).collect(),
            SubregionSchedule::Named(NamedSchedule::Half) => vec![n / 2],
            SubregionSchedule::Sizes(s) => s.clone(),
        };
        for &a in &sizes {
            if a == 0 || a >= n {
                return Err(Error::InvalidParameters(format!(
                    "subregion size {a} invalid for N={n}"
                )));
            }
        }
        Ok(sizes)
    }
}

fn default_budget() -> u64 {
    DEFAULT_BUDGET
}

fn default_max_spins() -> usize {
    DEFAULT_MAX_SPINS
}

/// Parameter grid and recording options. Exactly one of `m` and `lambda`
/// must be given; `lambda` maps to `M = round(λN)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepConfig {
    pub n: Vec<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub m: Option<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lambda: Option<Vec<f64>>,
    pub u: Vec<f64>,
    pub v: Vec<f64>,
    pub samples: usize,
    pub master_seed: u64,
    #[serde(default)]
    pub subregions: SubregionSchedule,
    pub quantities: Vec<Quantity>,
    #[serde(default = "default_budget")]
    pub budget: u64,
    #[serde(default)]
    pub keep_raw: bool,
    #[serde(default = "default_max_spins")]
    pub max_spins: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SweepPoint {
    pub index: usize,
    pub params: RbmParams,
}

impl SweepConfig {
    pub fn validate(&self) -> Result<()> {
        if self.n.is_empty() || self.u.is_empty() || self.v.is_empty() {
            return Err(Error::InvalidParameters(
                "n, u and v must be nonempty".into(),
            ));
        }
        match (&self.m, &self.lambda) {
            (Some(m), None) if !m.is_empty() => {}
            (None, Some(l)) if !l.is_empty() => {}
            _ => {
                return Err(Error::InvalidParameters(
                    "give exactly one nonempty list of m or lambda".into(),
                ))
            }
        }
        if self.samples == 0 {
            return Err(Error::InvalidParameters("samples must be positive".into()));
        }
        if self.quantities.is_empty() {
            return Err(Error::InvalidParameters("no quantities requested".into()));
        }
        for &n in &self.n {
            if n > self.max_spins {
                return Err(Error::Capacity {
                    n,
                    cap: self.max_spins,
                });
            }
            if self.quantities.iter().any(Quantity::per_subregion) {
                self.subregions.sizes(n)?;
            }
        }
        Ok(())
    }

    /// Grid points ordered by `n`, then `m`/`lambda`, then `u`, then `v`.
    pub fn points(&self) -> Result<Vec<SweepPoint>> {
        let mut out = Vec::new();
        for &n in &self.n {
            let hidden: Vec<Box<dyn Fn(f64, f64) -> Result<RbmParams>>> =
                match (&self.m, &self.lambda) {
                    (Some(ms), _) => ms
                        .iter()
                        .map(|&m| Box::new(move |u, v| RbmParams::new(n, m, u, v)) as Box<_>)
                        .collect(),
                    (None, Some(ls)) => ls
                        .iter()
                        .map(|&l| {
                            Box::new(move |u, v| RbmParams::from_lambda(n, l, u, v)) as Box<_>
                        })
                        .collect(),
                    (None, None) => Vec::new(),
                };
            for make in &hidden {
                for &u in &self.u {
                    for &v in &self.v {
                        out.push(SweepPoint {
                            index: out.len(),
                            params: make(u, v)?,
                        });
                    }
                }
            }
        }
        Ok(out)
    }

    /// `Σ samples × 2^N` over all points.
    pub fn cost(&self) -> Result<u128> {
        Ok(self
            .points()?
            .iter()
            .map(|p| self.samples as u128 * (1u128 << p.params.n_visible))
            .sum())
    }

    fn columns(&self, n: usize) -> Result<Vec<(Quantity, Option<usize>)>> {
        let mut cols = Vec::new();
        for &q in &self.quantities {
            if q.per_subregion() {
                for a in self.subregions.sizes(n)? {
                    cols.push((q, Some(a)));
                }
            } else {
                cols.push((q, None));
            }
        }
        Ok(cols)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ColumnStats {
    pub quantity: Quantity,
    pub subregion: Option<usize>,
    pub mean: f64,
    pub stderr: f64,
    pub count: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub raw: Option<Vec<f64>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRecord {
    pub point: SweepPoint,
    pub lambda: f64,
    pub columns: Vec<ColumnStats>,
}

impl SweepRecord {
    pub fn get(&self, quantity: Quantity, subregion: Option<usize>) -> Option<&ColumnStats> {
        self.columns
            .iter()
            .find(|c| c.quantity == quantity && c.subregion == subregion)
    }
}

/// Checks that all `(point, sample)` seeds are distinct.
fn check_seeds(n_points: usize, samples: usize, seed: impl Fn(u64, u64) -> u64) -> Result<()> {
    let mut seen = HashMap::with_capacity(n_points * samples);
    for p in 0..n_points {
        for s in 0..samples {
            if seen.insert(seed(p as u64, s as u64), ()).is_some() {
                return Err(Error::SeedCollision {
                    point: p,
                    sample: s,
                });
            }
        }
    }
    Ok(())
}

fn sample_values(state: &StateVector, columns: &[(Quantity, Option<usize>)]) -> Result<Vec<f64>> {
    let n = state.n_spins();
    let mut spectra = HashMap::new();
    let mut out = Vec::with_capacity(columns.len());
    for &(q, a) in columns {
        let value = match (q, a) {
            (Quantity::Renyi2 | Quantity::VonNeumann, Some(a)) => {
                let sp = match spectra.entry(a) {
                    Entry::Occupied(e) => e.into_mut(),
                    Entry::Vacant(e) => {
                        e.insert(state_spectrum(state, &SubregionMask::contiguous(n, a)?)?)
                    }
                };
                if q == Quantity::Renyi2 {
                    renyi2_entropy(sp)
                } else {
                    von_neumann_entropy(sp)
                }
            }
            (Quantity::LogNorm, _) => state.log_norm_squared(),
            (Quantity::D2, _) => ipr_fractal_dimension(state, 2)?.dq,
            (Quantity::D3, _) => ipr_fractal_dimension(state, 3)?.dq,
            (Quantity::D4, _) => ipr_fractal_dimension(state, 4)?.dq,
            _ => unreachable!("entropy column without subregion"),
        };
        out.push(value);
    }
    Ok(out)
}

/// Applies `f` to `samples` states of one ensemble point, in parallel, with
/// seeds `sample_seed(master_seed, point, k)`. Results are in sample order.
pub fn map_samples<T, F>(
    params: &RbmParams,
    point: u64,
    samples: usize,
    master_seed: u64,
    max_spins: usize,
    f: F,
) -> Result<Vec<T>>
where
    T: Send,
    F: Fn(&StateVector) -> Result<T> + Sync,
{
    (0..samples as u64)
        .into_par_iter()
        .map(|s| {
            let w = sample_weights(params, sample_seed(master_seed, point, s))?;
            f(&build_state_with_cap(&w, max_spins)?)
        })
        .collect()
}

/// Runs every grid point. Samples of a point are evaluated in parallel and
/// reduced in sample order, so records do not depend on the thread count.
pub fn run_sweep(config: &SweepConfig) -> Result<Vec<SweepRecord>> {
    config.validate()?;
    let required = config.cost()?;
    if required > config.budget as u128 {
        return Err(Error::BudgetExceeded {
            required,
            budget: config.budget as u128,
        });
    }
    let points = config.points()?;
    check_seeds(points.len(), config.samples, |p, s| {
        sample_seed(config.master_seed, p, s)
    })?;

    let mut records = Vec::with_capacity(points.len());
    for point in points {
        let columns = config.columns(point.params.n_visible)?;
        let per_sample = map_samples(
            &point.params,
            point.index as u64,
            config.samples,
            config.master_seed,
            config.max_spins,
            |state| sample_values(state, &columns),
        )?;
        let stats = columns
            .iter()
            .enumerate()
            .map(|(k, &(quantity, subregion))| {
                let vals: Vec<f64> = per_sample.iter().map(|v| v[k]).collect();
                let (mean, stderr) = mean_and_stderr(&vals);
                ColumnStats {
                    quantity,
                    subregion,
                    mean,
                    stderr,
                    count: vals.len(),
                    raw: config.keep_raw.then_some(vals),
                }
            })
            .collect();
        records.push(SweepRecord {
            point,
            lambda: point.params.lambda(),
            columns: stats,
        });
    }
    Ok(records)
}
