//! Carnot–Carathéodory distance upper bounds and Monte-Carlo probes of the
//! metric estimates used in the differentiability argument.
//!
//! All probe metrics are the homogeneous norm `ρ(x, y) = ‖x^{-1} y‖`. The
//! reported numbers are empirical maxima of ratios, never the existential
//! constants themselves.

use num_bigint::BigInt;
use num_traits::Zero;
use rayon::prelude::*;
use serde::Serialize;
use serde_json::json;

use crate::decompose::{decompose_scaled, path_decompose};
use crate::error::Result;
use crate::group::{hom_norm_f64, GroupPoint};
use crate::lie::{LieVector, StratifiedAlgebra};
use crate::optimize::{fd_refine, nelder_mead, NelderMeadOptions};
use crate::sampling::{self, dilate_f64};
use crate::scalar::{rational_from_f64, Rational};
use crate::word::HorizontalWord;
use std::sync::Arc;

#[derive(Debug, Clone)]
pub struct CcOptions {
    /// number of constant-control segments; `None` means `2n`
    pub segments: Option<usize>,
    /// objective evaluations per start and penalty stage
    pub budget: usize,
    /// endpoint tolerance in the homogeneous norm
    pub tolerance: f64,
    /// random starts on top of the straight-line and basis-path starts
    pub random_starts: usize,
    pub seed: u64,
    /// extra start, e.g. a dilated word from a previous solve
    pub initial: Option<HorizontalWord<f64>>,
}

impl Default for CcOptions {
    fn default() -> Self {
        Self {
            segments: None,
            budget: 1500,
            tolerance: 1e-8,
            random_starts: 2,
            seed: 0,
            initial: None,
        }
    }
}

/// Feasible horizontal word from `x` to `y` and its length.
#[derive(Debug, Clone)]
pub struct CcBound {
    /// length of `word`: an upper bound on the CC distance
    pub value: f64,
    /// the word flows from `x` to `y` exactly
    pub word: HorizontalWord<Rational>,
    /// length of the optimized segments alone
    pub optimized_length: f64,
    /// `‖(x·w_opt)^{-1} y‖` before the exact correction was appended
    pub mismatch: f64,
    pub within_tolerance: bool,
    /// length of the appended exact correction
    pub correction_length: f64,
    pub converged: bool,
    pub evals: usize,
    pub segments: usize,
}

const PENALTIES: [f64; 3] = [2.0, 10.0, 100.0];
const RESTARTS: usize = 4;

/// Upper bound on `d(x, y)` by optimizing `K` piecewise-constant controls.
///
/// The optimization runs on the unit-size element `δ_{1/ν}(x^{-1}y)` with the
/// penalty `Σ_k ω(u_k) + μ ‖F(u)^{-1} ĝ‖`. The best controls are made exact,
/// dilated back, and the remaining residual is closed with an exact basis
/// path, so the returned word always joins `x` to `y`.
pub fn cc_upper(x: &GroupPoint<f64>, y: &GroupPoint<f64>, opts: &CcOptions) -> Result<CcBound> {
    let alg = x.algebra().clone();
    let n = alg.dim();
    let m = alg.horizontal_dim();
    let k = opts.segments.unwrap_or(2 * n).max(1);
    let xr = GroupPoint::from_f64(x)?;
    let yr = GroupPoint::from_f64(y)?;
    let g = xr.relative(&yr)?;
    let nu = g.hom_norm();
    if g.is_identity() || nu == 0.0 {
        return Ok(CcBound {
            value: 0.0,
            word: HorizontalWord::empty(alg),
            optimized_length: 0.0,
            mismatch: 0.0,
            within_tolerance: true,
            correction_length: 0.0,
            converged: true,
            evals: 0,
            segments: k,
        });
    }
    let target: Vec<f64> = dilate_f64(&alg, &g.to_f64().into_coords(), 1.0 / nu);

    let objective = |u: &[f64], mu: f64| -> f64 {
        let table = alg.bch_table();
        let mut pos = vec![0.0; n];
        let mut length = 0.0;
        let mut step = vec![0.0; n];
        for seg in u.chunks(m) {
            step[..m].copy_from_slice(seg);
            length += seg.iter().map(|c| c * c).sum::<f64>().sqrt();
            pos = table.evaluate(&alg, &pos, &step);
        }
        let neg: Vec<f64> = pos.iter().map(|c| -c).collect();
        let residual = table.evaluate(&alg, &neg, &target);
        length + mu * hom_norm_f64(&alg, &residual)
    };

    let mut starts: Vec<Vec<f64>> = Vec::new();
    // straight line in the first layer
    starts.push((0..k).flat_map(|_| target[..m].iter().map(|c| c / k as f64)).collect());
    // closed polygon loops in the first two directions, both orientations
    if m >= 2 && k >= 3 {
        let chord = 2.0 * std::f64::consts::PI.sqrt() / k as f64;
        for sign in [1.0, -1.0] {
            let mut u = Vec::with_capacity(k * m);
            for i in 0..k {
                let a = sign * 2.0 * std::f64::consts::PI * i as f64 / k as f64;
                for (j, c) in target[..m].iter().enumerate() {
                    let turn = match j {
                        0 => chord * a.cos(),
                        1 => chord * a.sin(),
                        _ => 0.0,
                    };
                    u.push(c / k as f64 + turn);
                }
            }
            starts.push(u);
        }
    }
    // exact basis path of the normalized target, when it fits in K segments
    let snapped = GroupPoint::new(alg.clone(), crate::scalar::rationals_from_f64(&target)?)?;
    if let Ok(path) = path_decompose(&snapped) {
        if let Some(u) = controls_from_word(&path.word.to_f64(), k, 1.0) {
            starts.push(u);
        }
    }
    if let Some(w) = &opts.initial {
        if let Some(u) = controls_from_word(w, k, 1.0 / nu) {
            starts.push(u);
        }
    }
    let mut rng = sampling::stream(opts.seed, 0x0cc0);
    for _ in 0..opts.random_starts {
        starts.push((0..k * m).map(|_| rand::Rng::random_range(&mut rng, -1.0..1.0) * 2.0 / k as f64).collect());
    }

    let nm = NelderMeadOptions {
        max_evals: opts.budget,
        step: 0.25 / k as f64,
        ftol: 1e-13,
        xtol: 1e-11,
    };
    let final_mu = *PENALTIES.last().unwrap();
    let mut candidates: Vec<(Vec<f64>, bool)> = starts.iter().map(|u| (u.clone(), false)).collect();
    let mut evals = 0;
    for start in starts {
        let mut u = start;
        let mut converged = false;
        for &mu in &PENALTIES {
            // a fresh simplex around the incumbent escapes collapsed ones
            let mut value = f64::INFINITY;
            for _ in 0..=RESTARTS {
                let r = nelder_mead(|v| objective(v, mu), &u, &nm);
                evals += r.evals;
                converged = r.converged;
                u = r.x;
                let gain = value - r.value;
                value = r.value;
                if gain <= 1e-9 * value.abs() {
                    break;
                }
            }
        }
        let polished = fd_refine(|v| objective(v, final_mu), &u, 20, 1e-7);
        evals += polished.evals;
        candidates.push((polished.x, converged));
    }

    // every candidate becomes an exact word; the shortest one wins
    let nu_r = rational_from_f64(nu)?;
    let mut best: Option<CcBound> = None;
    for (u, converged) in candidates {
        let bound = finalize(&xr, &yr, &u, &nu_r, k, opts.tolerance, converged, evals)?;
        if best.as_ref().is_none_or(|b| bound.value < b.value) {
            best = Some(bound);
        }
    }
    let mut best = best.expect("at least one start");
    best.converged = best.converged || best.within_tolerance;
    Ok(best)
}

#[allow(clippy::too_many_arguments)]
fn finalize(
    xr: &GroupPoint<Rational>,
    yr: &GroupPoint<Rational>,
    u: &[f64],
    nu: &Rational,
    k: usize,
    tolerance: f64,
    converged: bool,
    evals: usize,
) -> Result<CcBound> {
    let alg = xr.algebra().clone();
    let m = alg.horizontal_dim();
    let mut word = HorizontalWord::empty(alg.clone());
    for seg in u.chunks(m) {
        if seg.iter().all(|c| *c == 0.0) {
            continue;
        }
        let dir = LieVector::horizontal(alg.clone(), &crate::scalar::rationals_from_f64(seg)?)?;
        word.push(nu.clone(), dir)?;
    }
    let optimized_length = word.length();
    let reached = word.flow(xr)?;
    let residual = reached.relative(yr)?;
    let mismatch = residual.hom_norm();
    let mut correction_length = 0.0;
    if !residual.is_identity() {
        let exponent = (-mismatch.log2()).round() as i32;
        let fix = decompose_scaled(&residual, &pow2(exponent))?;
        correction_length = fix.length();
        word = word.concat(&fix)?;
    }
    Ok(CcBound {
        value: word.length(),
        word,
        optimized_length,
        mismatch,
        within_tolerance: mismatch <= tolerance,
        correction_length,
        converged,
        evals,
        segments: k,
    })
}

fn pow2(e: i32) -> Rational {
    let p = num_traits::pow(BigInt::from(2), e.unsigned_abs() as usize);
    if e >= 0 {
        Rational::from_integer(p)
    } else {
        Rational::from_integer(p).recip()
    }
}

// packs a word into K segment controls (t_j E_j), scaled by `factor`
fn controls_from_word(w: &HorizontalWord<f64>, k: usize, factor: f64) -> Option<Vec<f64>> {
    if w.len() > k {
        return None;
    }
    let m = w.algebra().horizontal_dim();
    let mut u = vec![0.0; k * m];
    for (j, s) in w.steps().iter().enumerate() {
        for a in 0..m {
            u[j * m + a] = s.t * s.direction.coeffs()[a] * factor;
        }
    }
    Some(u)
}

/// Empirical constant of a metric estimate.
#[derive(Debug, Clone, Serialize)]
pub struct ConstantsReport {
    pub constant: String,
    pub metric: String,
    pub samples: usize,
    /// largest ratio at any evaluated point, including local ascent
    pub max_ratio: f64,
    /// largest ratio over the random samples alone
    pub sample_max_ratio: f64,
    pub mean_ratio: f64,
    pub seed: u64,
    pub config: serde_json::Value,
    pub note: Option<String>,
}

impl ConstantsReport {
    fn from_ratios(
        constant: &str,
        ratios: &[f64],
        refined: f64,
        seed: u64,
        config: serde_json::Value,
        note: Option<String>,
    ) -> Self {
        let sample_max_ratio = ratios.iter().copied().fold(0.0, f64::max);
        let mean_ratio = if ratios.is_empty() {
            0.0
        } else {
            ratios.iter().sum::<f64>() / ratios.len() as f64
        };
        Self {
            constant: constant.to_string(),
            metric: "hom_norm".to_string(),
            samples: ratios.len(),
            max_ratio: sample_max_ratio.max(refined),
            sample_max_ratio,
            mean_ratio,
            seed,
            config,
            note,
        }
    }
}

// samples are rounded to this dyadic lattice so exact arithmetic stays cheap
const LATTICE_BITS: i32 = 32;

fn lattice(v: &[f64]) -> Vec<f64> {
    let s = 2f64.powi(LATTICE_BITS);
    v.iter().map(|c| (c * s).round() / s).collect()
}

fn exact(alg: &Arc<StratifiedAlgebra>, coords: &[f64]) -> GroupPoint<Rational> {
    let c = crate::scalar::rationals_from_f64(coords).expect("finite samples");
    GroupPoint::new(alg.clone(), c).expect("sample has the algebra's dimension")
}

/// Local ascent settings for sharpening a Monte-Carlo maximum.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct Ascent {
    /// chains started from the best samples
    pub chains: usize,
    pub iterations: usize,
    /// initial perturbation size, halved after repeated rejections
    pub step: f64,
}

impl Default for Ascent {
    fn default() -> Self {
        Self {
            chains: 8,
            iterations: 300,
            step: 0.1,
        }
    }
}

// Random-perturbation hill climbing on the sample parameters, started from
// the best samples. Every visited point is itself a valid sample, so the
// result is still an empirical maximum.
fn ascend<R, P>(params: &[Vec<f64>], ratios: &[f64], ratio: R, propose_ok: P, ascent: &Ascent, seed: u64) -> f64
where
    R: Fn(&[f64]) -> Option<f64> + Sync,
    P: Fn(&[f64]) -> bool + Sync,
{
    let mut order: Vec<usize> = (0..ratios.len()).collect();
    order.sort_by(|a, b| ratios[*b].total_cmp(&ratios[*a]).then(a.cmp(b)));
    order
        .iter()
        .take(ascent.chains)
        .enumerate()
        .collect::<Vec<_>>()
        .par_iter()
        .map(|&(chain, &idx)| {
            let mut rng = sampling::stream(seed, 0xa5c0 + chain as u64);
            let mut p = params[idx].clone();
            let mut best = ratios[idx];
            let mut step = ascent.step;
            let mut misses = 0;
            for _ in 0..ascent.iterations {
                let q = lattice(
                    &p.iter()
                        .map(|c| c + step * rand::Rng::random_range(&mut rng, -1.0..1.0))
                        .collect::<Vec<f64>>(),
                );
                match propose_ok(&q).then(|| ratio(&q)).flatten() {
                    Some(r) if r > best => {
                        best = r;
                        p = q;
                        misses = 0;
                    }
                    _ => {
                        misses += 1;
                        if misses >= 20 {
                            step *= 0.5;
                            misses = 0;
                        }
                    }
                }
            }
            best
        })
        .reduce(|| 0.0, f64::max)
}

/// `‖x^{-1} y x‖ / (‖y‖ + ‖x‖^{1/s}‖y‖^{(s-1)/s} + ‖x‖^{(s-1)/s}‖y‖^{1/s})`
/// over pairs from the unit ball, followed by a local ascent from the best
/// pairs. Group operations are exact.
pub fn check_conjugation_bound(alg: &Arc<StratifiedAlgebra>, samples: usize, seed: u64) -> ConstantsReport {
    check_conjugation_bound_with(alg, samples, seed, &Ascent::default())
}

pub fn check_conjugation_bound_with(
    alg: &Arc<StratifiedAlgebra>,
    samples: usize,
    seed: u64,
    ascent: &Ascent,
) -> ConstantsReport {
    let n = alg.dim();
    let mut rng = sampling::stream(seed, 1);
    let params: Vec<Vec<f64>> = (0..samples)
        .map(|_| {
            let mut p = sampling::unit_ball(alg, &mut rng);
            p.extend(sampling::unit_ball(alg, &mut rng));
            lattice(&p)
        })
        .collect();
    let s = alg.step() as f64;
    let ratio = |p: &[f64]| Some(conjugation_ratio(&exact(alg, &p[..n]), &exact(alg, &p[n..]), s));
    let in_ball = |p: &[f64]| hom_norm_f64(alg, &p[..n]) <= 1.0 && hom_norm_f64(alg, &p[n..]) <= 1.0;
    let ratios: Vec<f64> = params.par_iter().map(|p| ratio(p).unwrap_or(0.0)).collect();
    let refined = ascend(&params, &ratios, ratio, in_ball, ascent, seed);
    ConstantsReport::from_ratios(
        "C",
        &ratios,
        refined,
        seed,
        json!({
            "lemma": "conjugation",
            "sampling": "unit hom-norm ball, box rejection, 2^-32 lattice",
            "samples": samples,
            "ascent": ascent,
        }),
        None,
    )
}

pub fn conjugation_ratio(x: &GroupPoint<Rational>, y: &GroupPoint<Rational>, s: f64) -> f64 {
    let ny = y.hom_norm();
    if ny == 0.0 {
        return 0.0;
    }
    let nx = x.hom_norm();
    let conj = x
        .inverse()
        .multiply(y)
        .and_then(|p| p.multiply(x))
        .expect("same algebra");
    let bound = ny + nx.powf(1.0 / s) * ny.powf((s - 1.0) / s) + nx.powf((s - 1.0) / s) * ny.powf(1.0 / s);
    conj.hom_norm() / bound
}

/// `‖(y e)^{-1} (x e)‖ / (λ^{1/s} |t| max(1, ω(U)))` with `e = exp(tU)` and
/// `‖y^{-1} x‖ ≤ λ|t|`, followed by a local ascent from the best cases.
/// `lambda = None` draws `λ` uniformly from `(0, 1)`.
pub fn check_flow_distance(
    alg: &Arc<StratifiedAlgebra>,
    samples: usize,
    seed: u64,
    lambda: Option<f64>,
) -> ConstantsReport {
    check_flow_distance_with(alg, samples, seed, lambda, &Ascent::default())
}

pub fn check_flow_distance_with(
    alg: &Arc<StratifiedAlgebra>,
    samples: usize,
    seed: u64,
    lambda: Option<f64>,
    ascent: &Ascent,
) -> ConstantsReport {
    let mut rng = sampling::stream(seed, 2);
    let n = alg.dim();
    let m = alg.horizontal_dim();
    let s = alg.step() as f64;
    // parameters: λ, t, U (m), y (n), w0 (n) with y^{-1}x = δ_{λ|t|}(w0)
    let split = |p: &[f64]| -> (f64, f64, Vec<f64>, Vec<f64>, Vec<f64>) {
        let (lam, t) = (lambda.unwrap_or(p[0]), p[1]);
        let u = p[2..2 + m].to_vec();
        let y = p[2 + m..2 + m + n].to_vec();
        let w = lattice(&dilate_f64(alg, &p[2 + m + n..], lam * t.abs()));
        (lam, t, u, y, w)
    };
    let feasible = |p: &[f64]| -> bool {
        let (lam, t, u, y, w) = split(p);
        let omega = u.iter().map(|c| c * c).sum::<f64>().sqrt();
        lam > 0.0
            && lam < 1.0
            && t != 0.0
            && t.abs() < 1.0
            && omega <= 2.0
            && hom_norm_f64(alg, &y) <= 1.0
            && hom_norm_f64(alg, &p[2 + m + n..]) <= 1.0
            // precondition as evaluated
            && hom_norm_f64(alg, &w) <= lam * t.abs()
    };
    let ratio = |p: &[f64]| -> Option<f64> {
        let (lam, t, u, y, w) = split(p);
        let yg = exact(alg, &y);
        let xg = yg.multiply(&exact(alg, &w)).expect("same algebra");
        let mut e = vec![0.0; n];
        for (a, c) in u.iter().enumerate() {
            e[a] = t * c;
        }
        let eg = exact(alg, &e);
        let left = yg.multiply(&eg).expect("same algebra");
        let right = xg.multiply(&eg).expect("same algebra");
        let lhs = left.distance(&right).expect("same algebra");
        let omega = LieVector::horizontal(alg.clone(), &u).map(|v| v.omega()).unwrap_or(0.0);
        Some(lhs / (lam.powf(1.0 / s) * t.abs() * omega.max(1.0)))
    };
    let mut params = Vec::with_capacity(samples);
    while params.len() < samples {
        let lam = lambda.unwrap_or_else(|| rand::Rng::random_range(&mut rng, f64::EPSILON..1.0));
        let t: f64 = rand::Rng::random_range(&mut rng, -1.0..1.0);
        let dir: Vec<f64> = sampling::unit_ball(alg, &mut rng)[..m].to_vec();
        let len = dir.iter().map(|c| c * c).sum::<f64>().sqrt();
        let omega_target: f64 = rand::Rng::random_range(&mut rng, 0.0..2.0);
        let y = sampling::unit_ball(alg, &mut rng);
        let w0 = sampling::unit_ball(alg, &mut rng);
        if len == 0.0 {
            continue;
        }
        let mut p = vec![lam, t];
        p.extend(dir.iter().map(|c| c / len * omega_target));
        p.extend(y);
        p.extend(w0);
        let p = lattice(&p);
        if feasible(&p) {
            params.push(p);
        }
    }
    let ratios: Vec<f64> = params.par_iter().map(|p| ratio(p).unwrap_or(0.0)).collect();
    let refined = ascend(&params, &ratios, ratio, feasible, ascent, seed);
    ConstantsReport::from_ratios(
        "C1",
        &ratios,
        refined,
        seed,
        json!({
            "lemma": "flow-distance",
            "lambda": lambda.map(|l| json!(l)).unwrap_or(json!("uniform(0,1)")),
            "t": "uniform(-1,1)",
            "omega_U": "uniform(0,2)",
            "lattice": "2^-32",
            "samples": samples,
            "ascent": ascent,
        }),
        None,
    )
}

/// `cc_upper(0, x) / ‖x‖` over samples of the unit sphere.
pub fn estimate_norm_equivalence(
    alg: &Arc<StratifiedAlgebra>,
    samples: usize,
    seed: u64,
    opts: &CcOptions,
) -> Result<ConstantsReport> {
    let mut rng = sampling::stream(seed, 3);
    let points: Vec<Vec<f64>> = (0..samples).map(|_| sampling::unit_sphere(alg, &mut rng)).collect();
    let ratios = points
        .par_iter()
        .map(|p| {
            let x = GroupPoint::new(alg.clone(), p.clone())?;
            let bound = cc_upper(&GroupPoint::identity(alg.clone()), &x, opts)?;
            Ok(bound.value / x.hom_norm())
        })
        .collect::<Result<Vec<f64>>>()?;
    Ok(ConstantsReport::from_ratios(
        "c",
        &ratios,
        0.0,
        seed,
        json!({
            "estimate": "norm-equivalence",
            "segments": opts.segments.unwrap_or(2 * alg.dim()),
            "budget": opts.budget,
            "tolerance": opts.tolerance,
            "samples": samples
        }),
        Some("upper side only: cc_upper bounds d from above, so d(x) >= ||x||/c is not certified".into()),
    ))
}

/// `‖xy‖ / (‖x‖ + ‖y‖)` over pairs from the unit ball.
pub fn quasi_triangle_constant(alg: &Arc<StratifiedAlgebra>, samples: usize, seed: u64) -> ConstantsReport {
    let mut rng = sampling::stream(seed, 4);
    let pairs: Vec<(Vec<f64>, Vec<f64>)> = (0..samples)
        .map(|_| (sampling::unit_ball(alg, &mut rng), sampling::unit_ball(alg, &mut rng)))
        .collect();
    let ratios: Vec<f64> = pairs
        .par_iter()
        .map(|(x, y)| {
            let xg = exact(alg, x);
            let yg = exact(alg, y);
            let denom = xg.hom_norm() + yg.hom_norm();
            if denom == 0.0 {
                0.0
            } else {
                xg.multiply(&yg).expect("same algebra").hom_norm() / denom
            }
        })
        .collect();
    ConstantsReport::from_ratios(
        "K",
        &ratios,
        0.0,
        seed,
        json!({"estimate": "quasi-triangle", "samples": samples}),
        None,
    )
}

/// `Σ t_j / ‖h‖` of [`path_decompose`] over random rational elements.
pub fn path_constant(alg: &Arc<StratifiedAlgebra>, samples: usize, seed: u64) -> Result<ConstantsReport> {
    let mut rng = sampling::stream(seed, 5);
    let points: Vec<Vec<Rational>> = (0..samples)
        .map(|_| sampling::rational_vector(&mut rng, alg.dim(), 20, 20))
        .collect();
    let ratios = points
        .par_iter()
        .map(|c| {
            let h = GroupPoint::new(alg.clone(), c.clone())?;
            Ok(path_decompose(&h)?.ratio)
        })
        .collect::<Result<Vec<f64>>>()?;
    Ok(ConstantsReport::from_ratios(
        "Q",
        &ratios,
        0.0,
        seed,
        json!({"estimate": "basis-path length", "inputs": "random rationals p/q, 1 <= |p|, q <= 20", "samples": samples}),
        None,
    ))
}

/// Splitting surrogate `max(N, max|ρ_i|)` over random rational `U, V`.
pub fn splitting_constant(alg: &Arc<StratifiedAlgebra>, samples: usize, seed: u64) -> Result<ConstantsReport> {
    let mut rng = sampling::stream(seed, 6);
    let m = alg.horizontal_dim();
    let inputs: Vec<(Vec<Rational>, Vec<Rational>)> = (0..samples)
        .map(|_| {
            (
                sampling::rational_vector(&mut rng, m, 20, 20),
                sampling::rational_vector(&mut rng, m, 20, 20),
            )
        })
        .collect();
    let ratios = inputs
        .par_iter()
        .map(|(u, v)| {
            let u = normalize_omega(&LieVector::horizontal(alg.clone(), u)?);
            let v = normalize_omega(&LieVector::horizontal(alg.clone(), v)?);
            Ok(crate::decompose::split_sum(&u, &v)?.constant())
        })
        .collect::<Result<Vec<f64>>>()?;
    Ok(ConstantsReport::from_ratios(
        "C2",
        &ratios,
        0.0,
        seed,
        json!({"estimate": "splitting", "inputs": "random rational U, V rescaled to omega ~ 1", "samples": samples}),
        Some("surrogate max(N, max|rho_i|)".into()),
    ))
}

// rescales by a rational close to 1/ω so that ω ≈ 1
fn normalize_omega(v: &LieVector<Rational>) -> LieVector<Rational> {
    let w = v.omega();
    if w == 0.0 {
        return v.clone();
    }
    let approx = Rational::new(BigInt::from((1024.0 / w).round() as i64), BigInt::from(1024));
    if approx.is_zero() {
        v.clone()
    } else {
        v.scale(&approx)
    }
}
