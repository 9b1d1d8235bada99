use super::{f, hash, CliError, CliResult, Ctx};
use crate::config::SpectrumConfig;
use rbment::ensemble::map_samples;
use rbment::entanglement::{
    marchenko_pastur_on_edges, marchenko_pastur_reference, state_spectrum, EntanglementSpectrum,
    SubregionMask,
};
use rbment::numerics::mean_and_stderr;
use rbment::output::CsvTable;
use serde::Serialize;
use std::path::PathBuf;

#[derive(Serialize)]
struct Summary {
    n: usize,
    m: usize,
    u: f64,
    v: f64,
    subregion: usize,
    dim_a: usize,
    dim_b: usize,
    samples: usize,
    /// `2^M < d_A`: the spectrum has structural zeros.
    rank_limited: bool,
    mean_zero_eigenvalues: f64,
}

pub fn run(ctx: &Ctx, mut cfg: SpectrumConfig) -> CliResult<Vec<PathBuf>> {
    cfg.seed = ctx.seed(cfg.seed);
    let p = cfg.ensemble.params()?;
    let n = p.n_visible;
    let size = cfg.subregion.unwrap_or(n / 2);
    let mask = SubregionMask::contiguous(n, size)?;
    if cfg.samples == 0 || cfg.bins == 0 {
        return Err(CliError::Config("samples and bins must be positive".into()));
    }
    let small = size.min(n - size);
    let (dim_a, dim_b) = (1usize << small, 1usize << (n - small));
    let spectra: Vec<EntanglementSpectrum> =
        map_samples(&p, 0, cfg.samples, cfg.seed, cfg.ensemble.max_spins, |s| {
            state_spectrum(s, &mask)
        })?;
    let h = hash(&cfg)?;

    let mut mean = CsvTable::new(&["k", "xi_mean", "xi_stderr"]);
    for k in 0..dim_a {
        let col: Vec<f64> = spectra.iter().map(|s| s.xi[k]).collect();
        let (m, e) = mean_and_stderr(&col);
        mean.push(vec![(k + 1).to_string(), f(m), f(e)])?;
    }

    let eps: Vec<f64> = spectra
        .iter()
        .flat_map(|s| s.epsilon.iter().copied())
        .collect();
    let obs_lo = eps.iter().copied().fold(f64::INFINITY, f64::min);
    let obs_hi = eps.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let mp = marchenko_pastur_reference(dim_a, dim_b, 1)?;
    let (mut lo, mut hi) = (obs_lo.min(mp.edges[0]), obs_hi);
    if mp.ratio < 1.0 {
        hi = hi.max(mp.edges[1]);
    }
    if hi - lo < 1e-9 {
        (lo, hi) = (lo - 0.5, hi + 0.5);
    }
    let width = (hi - lo) / cfg.bins as f64;
    let mut counts = vec![0usize; cfg.bins];
    for e in &eps {
        let k = (((e - lo) / width) as usize).min(cfg.bins - 1);
        counts[k] += 1;
    }
    let reference = marchenko_pastur_on_edges(dim_a, dim_b, lo, hi, cfg.bins)?;
    let mut density = CsvTable::new(&["eps_lo", "eps_hi", "density", "mp_density"]);
    for k in 0..cfg.bins {
        density.push(vec![
            f(reference.edges[k]),
            f(reference.edges[k + 1]),
            f(counts[k] as f64 / (eps.len() as f64 * width)),
            f(reference.density[k]),
        ])?;
    }

    let zeros: Vec<f64> = spectra
        .iter()
        .map(|s| (s.xi.len() - s.epsilon.len()) as f64)
        .collect();
    let summary = Summary {
        n,
        m: p.n_hidden,
        u: p.u,
        v: p.v,
        subregion: size,
        dim_a,
        dim_b,
        samples: cfg.samples,
        rank_limited: p.n_hidden < 64 && (1usize << p.n_hidden) < dim_a,
        mean_zero_eigenvalues: mean_and_stderr(&zeros).0,
    };
    if summary.rank_limited {
        eprintln!("note: 2^M < d_A, the spectrum contains structural zero eigenvalues");
    }
    Ok(vec![
        ctx.csv("spectrum_mean.csv", &mean, &h)?,
        ctx.csv("spectrum_density.csv", &density, &h)?,
        ctx.json("spectrum_summary.json", &h, &summary)?,
    ])
}
