//! Coupled-chain model for the swap-operator numerator.

use super::optimize::{refine_2d, symmetric_grid};
use super::{
    FreeEnergyLandscape, FreeEnergyTerms, LandscapeEntry, ModelParams, OrderParameterPoint,
    DEFAULT_GRID_STEP, REFINE_TOL,
};
use crate::error::{Error, Result};
use crate::numerics::{binary_entropy, log_cosh, log_sum_exp};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::f64::consts::LN_2;

/// Tolerance for "sitting on the boundary" in the `v = ∞` branch.
const EDGE_TOL: f64 = 1e-12;
/// `|φ_A − φ_B|` above this at `a = 1/2` is reported as broken.
const BROKEN_TOL: f64 = 1e-5;
/// At most this many grid minima are refined (lowest first).
const MAX_REFINED: usize = 48;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SymmetryLabel {
    Symmetric,
    Broken,
    /// The exchange symmetry only exists at `a = 1/2`.
    NotApplicable,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Z1Options {
    pub grid_step: f64,
}

impl Default for Z1Options {
    fn default() -> Self {
        Self {
            grid_step: DEFAULT_GRID_STEP,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Z1Minimum {
    pub point: OrderParameterPoint,
    pub free_energy: f64,
    pub symmetry: SymmetryLabel,
    /// Refined, deduplicated local minima (ascending free energy).
    pub local_minima: Vec<LandscapeEntry>,
}

fn energy(phi_a: f64, phi_b: f64, a: f64, p: &ModelParams) -> f64 {
    let b = 1.0 - a;
    let (u2, lambda) = (p.u * p.u, p.lambda);
    if p.is_v_infinite() {
        let at = |x: f64, y: f64| (x - y).abs() <= EDGE_TOL;
        let mut t = Vec::with_capacity(4);
        t.push(2.0 * u2 * (1.0 + 2.0 * (phi_a + phi_b)));
        if at(phi_a, a) {
            t.push(2.0 * u2 * (b - a - 2.0 * phi_b));
        }
        if at(phi_b, b) {
            t.push(2.0 * u2 * (a - b - 2.0 * phi_a));
        }
        if at(phi_a, -a) && at(phi_b, -b) {
            t.push(-2.0 * u2);
        }
        return lambda * (3.0 * LN_2 - 2.0 * u2 - log_sum_exp(&t));
    }
    let v2 = p.v * p.v;
    let s = u2 + v2;
    let alpha = (b + phi_a) * s;
    let beta = (a + phi_b) * s;
    let gamma = (phi_a + phi_b) * (u2 - v2);
    let log_bracket = log_sum_exp(&[
        0.0,
        2.0 * alpha - LN_2 + log_cosh(2.0 * (beta + gamma)),
        -2.0 * alpha - LN_2 + log_cosh(2.0 * (beta - gamma)),
    ]);
    -2.0 * lambda * (u2 - v2) + lambda * LN_2 - lambda * log_bracket
}

fn side_entropy(phi: f64, width: f64) -> f64 {
    if width <= 0.0 {
        0.0
    } else {
        width * binary_entropy(((width - phi) / (2.0 * width)).clamp(0.0, 1.0))
    }
}

fn entropy(phi_a: f64, phi_b: f64, a: f64) -> f64 {
    LN_2 + side_entropy(phi_a, a) + side_entropy(phi_b, 1.0 - a)
}

fn free(phi_a: f64, phi_b: f64, a: f64, p: &ModelParams) -> f64 {
    energy(phi_a, phi_b, a, p) - entropy(phi_a, phi_b, a)
}

fn terms(point: &OrderParameterPoint, p: &ModelParams) -> FreeEnergyTerms {
    FreeEnergyTerms::new(
        energy(point.phi_a, point.phi_b, point.a, p),
        entropy(point.phi_a, point.phi_b, point.a),
    )
}

/// `(𝓔, 𝓢, 𝓕)` at one point; rejects points outside the rectangle.
pub fn z1_free_energy(point: &OrderParameterPoint, p: &ModelParams) -> Result<FreeEnergyTerms> {
    point.validate()?;
    Ok(terms(point, p))
}

fn check_a(a: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&a) {
        return Err(Error::Domain(format!(
            "subregion fraction a={a} outside [0, 1]"
        )));
    }
    Ok(())
}

fn check_step(step: f64) -> Result<()> {
    if !(step > 0.0 && step <= 1.0) {
        return Err(Error::InvalidParameters(format!(
            "grid step must be in (0, 1], got {step}"
        )));
    }
    Ok(())
}

struct Grid {
    xs: Vec<f64>,
    ys: Vec<f64>,
    values: Vec<f64>,
}

impl Grid {
    fn build(a: f64, p: &ModelParams, step: f64) -> Self {
        let xs = symmetric_grid(a, step);
        let ys = symmetric_grid(1.0 - a, step);
        let values = xs
            .par_iter()
            .flat_map_iter(|&x| ys.iter().map(move |&y| free(x, y, a, p)))
            .collect();
        Self { xs, ys, values }
    }

    fn at(&self, i: usize, j: usize) -> f64 {
        self.values[i * self.ys.len() + j]
    }

    fn local_minima(&self) -> Vec<(usize, usize)> {
        let (nx, ny) = (self.xs.len() as isize, self.ys.len() as isize);
        let mut out = Vec::new();
        for i in 0..nx {
            for j in 0..ny {
                let f0 = self.at(i as usize, j as usize);
                let mut is_min = true;
                'n: for di in -1..=1 {
                    for dj in -1..=1 {
                        let (ii, jj) = (i + di, j + dj);
                        if (di, dj) == (0, 0) || ii < 0 || jj < 0 || ii >= nx || jj >= ny {
                            continue;
                        }
                        if self.at(ii as usize, jj as usize) < f0 {
                            is_min = false;
                            break 'n;
                        }
                    }
                }
                if is_min {
                    out.push((i as usize, j as usize));
                }
            }
        }
        out
    }

    fn spacing(&self) -> f64 {
        let d = |g: &[f64]| if g.len() > 1 { g[1] - g[0] } else { 0.0 };
        d(&self.xs).max(d(&self.ys))
    }
}

fn special_candidates(a: f64) -> Vec<(f64, f64)> {
    let b = 1.0 - a;
    vec![
        (0.0, 0.0),
        (a, 0.0),
        (-a, 0.0),
        (0.0, b),
        (0.0, -b),
        (a, b),
        (-a, -b),
        (a, -b),
        (-a, b),
    ]
}

/// Locates and refines minima; returns them sorted by free energy.
fn refined_minima(a: f64, p: &ModelParams, grid: &Grid) -> Vec<(f64, f64, f64)> {
    let b = 1.0 - a;
    let mut starts: Vec<(f64, f64, f64)> = grid
        .local_minima()
        .into_iter()
        .map(|(i, j)| (grid.xs[i], grid.ys[j], grid.at(i, j)))
        .collect();
    starts.sort_by(|x, y| x.2.total_cmp(&y.2));
    starts.truncate(MAX_REFINED);
    for (x, y) in special_candidates(a) {
        starts.push((x, y, free(x, y, a, p)));
    }
    let h = grid.spacing();
    let f = |x: f64, y: f64| free(x, y, a, p);
    let mut found: Vec<(f64, f64, f64)> = Vec::new();
    for (x, y, fx) in starts {
        let (rx, ry, rf) = refine_2d(&f, (x, y), a, b, h, REFINE_TOL);
        let best = if rf < fx { (rx, ry, rf) } else { (x, y, fx) };
        if !found
            .iter()
            .any(|m| (m.0 - best.0).abs() < 1e-6 && (m.1 - best.1).abs() < 1e-6)
        {
            found.push(best);
        }
    }
    found.sort_by(|x, y| x.2.total_cmp(&y.2));
    found
}

fn is_local_min(x: f64, y: f64, fx: f64, a: f64, p: &ModelParams) -> bool {
    let b = 1.0 - a;
    let h = 1e-6;
    for (dx, dy) in [(h, 0.0), (-h, 0.0), (0.0, h), (0.0, -h)] {
        let (nx, ny) = (x + dx, y + dy);
        if nx.abs() > a || ny.abs() > b {
            continue;
        }
        if free(nx, ny, a, p) < fx {
            return false;
        }
    }
    true
}

/// Canonical representative among near-degenerate global minima: prefer
/// `φ_A ≥ φ_B`, then a nonnegative sum, then the larger `φ_A`.
fn pick_global(found: &[(f64, f64, f64)]) -> (f64, f64, f64) {
    let best = found[0].2;
    let tol = 1e-10 * best.abs().max(1.0);
    found
        .iter()
        .filter(|m| m.2 <= best + tol)
        .copied()
        .max_by(|x, y| {
            let key = |m: &(f64, f64, f64)| (m.0 >= m.1 - 1e-12, m.0 + m.1 >= -1e-12);
            key(x)
                .cmp(&key(y))
                .then(x.0.total_cmp(&y.0))
                .then(x.1.total_cmp(&y.1))
        })
        .unwrap()
}

pub fn minimize_z1(a: f64, p: &ModelParams) -> Result<Z1Minimum> {
    minimize_z1_with(a, p, &Z1Options::default())
}

/// Global minimum of `𝓕(φ_A, φ_B)` over `[-a, a] × [-b, b]`.
pub fn minimize_z1_with(a: f64, p: &ModelParams, opts: &Z1Options) -> Result<Z1Minimum> {
    check_a(a)?;
    check_step(opts.grid_step)?;
    let grid = Grid::build(a, p, opts.grid_step);
    let found = refined_minima(a, p, &grid);
    let (x, y, fx) = pick_global(&found);
    let symmetry = if (a - 0.5).abs() > 1e-12 {
        SymmetryLabel::NotApplicable
    } else if (x - y).abs() > BROKEN_TOL {
        SymmetryLabel::Broken
    } else {
        SymmetryLabel::Symmetric
    };
    let local_minima = found
        .iter()
        .filter(|m| is_local_min(m.0, m.1, m.2, a, p))
        .map(|m| {
            let point = OrderParameterPoint {
                phi_a: m.0,
                phi_b: m.1,
                a,
            };
            LandscapeEntry {
                point,
                terms: terms(&point, p),
            }
        })
        .collect();
    Ok(Z1Minimum {
        point: OrderParameterPoint {
            phi_a: x,
            phi_b: y,
            a,
        },
        free_energy: fx,
        symmetry,
        local_minima,
    })
}

/// Tabulated `𝓕(φ_A, φ_B)` at the given step together with its minima.
pub fn z1_landscape(a: f64, p: &ModelParams, step: f64) -> Result<FreeEnergyLandscape> {
    check_a(a)?;
    check_step(step)?;
    let m = minimize_z1_with(a, p, &Z1Options { grid_step: step })?;
    let xs = symmetric_grid(a, step);
    let ys = symmetric_grid(1.0 - a, step);
    let grid = xs
        .iter()
        .flat_map(|&x| ys.iter().map(move |&y| (x, y)))
        .map(|(x, y)| {
            let point = OrderParameterPoint {
                phi_a: x,
                phi_b: y,
                a,
            };
            LandscapeEntry {
                point,
                terms: terms(&point, p),
            }
        })
        .collect();
    Ok(FreeEnergyLandscape {
        grid,
        minima: m.local_minima.clone(),
        global_minimum: LandscapeEntry {
            point: m.point,
            terms: terms(&m.point, p),
        },
    })
}
