use rand::Rng;
use rayon::prelude::*;
use serde_json::json;

use super::{mul, rho, ProbeReport};
use crate::error::{Error, Result};
use crate::lie::StratifiedAlgebra;
use crate::sampling;

#[derive(Debug, Clone)]
pub struct PorosityOptions {
    /// candidate hole ratios, any order
    pub lambdas: Vec<f64>,
    /// strictly decreasing radii `r`
    pub scales: Vec<f64>,
    /// centers tried per scale, at distance in `[r/2, r]` from `a`
    pub candidates: usize,
    /// points tested inside each ball
    pub ball_samples: usize,
    pub seed: u64,
}

impl Default for PorosityOptions {
    fn default() -> Self {
        Self {
            lambdas: vec![0.05, 0.1, 0.25, 0.5, 0.75, 0.9],
            scales: (2..7).map(|k| 2f64.powi(-k)).collect(),
            candidates: 32,
            ball_samples: 256,
            seed: 0,
        }
    }
}

// rounds each coordinate of layer d to a multiple of mesh^d, so that sets
// aligned with the dyadic lattice (coordinate hyperplanes, diagonals) can be hit
fn snap(alg: &StratifiedAlgebra, z: &[f64], mesh: f64) -> Vec<f64> {
    z.iter()
        .zip(alg.degrees())
        .map(|(c, d)| {
            let h = mesh.powi(*d as i32);
            (c / h).round() * h
        })
        .collect()
}

/// For each scale `r`, the largest grid `λ` such that some sampled `x` with
/// `ρ(a, x) ∈ [r/2, r]` has no sampled member of the set in
/// `B(x, λρ(a, x))`. `0` means no `λ` passed.
///
/// Ball points are `x δ_R(w)` with `w` uniform in the unit ball, snapped to a
/// dyadic lattice of mesh about `R/8` when the snapped point stays in the
/// ball. The verdict is Monte-Carlo evidence and certifies nothing.
pub fn porosity_probe(
    alg: &StratifiedAlgebra,
    membership: &(dyn Fn(&[f64]) -> bool + Sync),
    a: &[f64],
    opts: &PorosityOptions,
) -> Result<ProbeReport> {
    if a.len() != alg.dim() {
        return Err(Error::DimensionMismatch { expected: alg.dim(), found: a.len() });
    }
    if !membership(a) {
        return Err(Error::InvalidParameter("porosity is probed at a point of the set".into()));
    }
    if opts.scales.is_empty() || opts.scales.windows(2).any(|w| w[1] >= w[0]) || opts.scales.iter().any(|s| *s <= 0.0) {
        return Err(Error::InvalidParameter("scales must be positive and strictly decreasing".into()));
    }
    if opts.lambdas.iter().any(|l| !(*l > 0.0 && *l < 1.0)) || opts.lambdas.is_empty() {
        return Err(Error::InvalidParameter("hole ratios must lie in (0, 1)".into()));
    }
    let mut lambdas = opts.lambdas.clone();
    lambdas.sort_by(|x, y| y.total_cmp(x));

    let mut values = Vec::with_capacity(opts.scales.len());
    for (k, &r) in opts.scales.iter().enumerate() {
        let mut rng = sampling::stream(opts.seed, 100 + k as u64);
        let draws: Vec<(Vec<f64>, Vec<Vec<f64>>)> = (0..opts.candidates)
            .map(|_| {
                let u = sampling::unit_sphere(alg, &mut rng);
                let dist = rng.random_range(0.5 * r..=r);
                let offset = sampling::dilate_f64(alg, &u, dist);
                let ws = (0..opts.ball_samples).map(|_| sampling::unit_ball(alg, &mut rng)).collect();
                (offset, ws)
            })
            .collect();
        let best = lambdas
            .iter()
            .copied()
            .find(|&lambda| {
                draws.par_iter().any(|(offset, ws)| {
                    let x = mul(alg, a, offset);
                    if membership(&x) {
                        return false;
                    }
                    let radius = lambda * rho(alg, a, &x);
                    let mesh = 2f64.powi(radius.log2().floor() as i32 - 3);
                    !ws.iter().any(|w| {
                        let z = mul(alg, &x, &sampling::dilate_f64(alg, w, radius));
                        let snapped = snap(alg, &z, mesh);
                        let probe = if rho(alg, &x, &snapped) <= radius { snapped } else { z };
                        membership(&probe)
                    })
                })
            })
            .unwrap_or(0.0);
        values.push(best);
    }
    let verdict = if values.iter().all(|v| *v > 0.0) {
        "porous-evidence"
    } else if values.iter().all(|v| *v == 0.0) {
        "no-holes-found"
    } else {
        "mixed"
    };
    Ok(ProbeReport {
        kind: "porosity".into(),
        point: a.to_vec(),
        metric: "hom_norm".into(),
        parameters: json!({
            "lambdas": lambdas,
            "candidates": opts.candidates,
            "ball_samples": opts.ball_samples,
            "seed": opts.seed,
        }),
        scales: opts.scales.clone(),
        values,
        verdict: verdict.into(),
        notes: vec!["Monte-Carlo, non-certifying: balls are tested against sampled points only".into()],
    })
}
