use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

use super::{directional_derivative, horizontal_gradient, mul, step, Ladder, ScalarField, Sidedness};
use crate::decompose::split_sum;
use crate::error::{Error, Result};
use crate::group::hom_norm_f64;
use crate::lie::LieVector;
use crate::sampling;
use crate::scalar::rationals_from_f64;

/// Outcome of a multi-scale probe at one point.
#[derive(Debug, Clone, Serialize)]
pub struct ProbeReport {
    pub kind: String,
    pub point: Vec<f64>,
    pub metric: String,
    pub parameters: Value,
    /// strictly decreasing
    pub scales: Vec<f64>,
    /// one nonnegative value per scale
    pub values: Vec<f64>,
    pub verdict: String,
    pub notes: Vec<String>,
}

fn check_scales(scales: &[f64]) -> Result<()> {
    if scales.is_empty() {
        return Err(Error::InvalidParameter("at least one scale is required".into()));
    }
    if scales.iter().any(|s| !(*s > 0.0 && s.is_finite())) || scales.windows(2).any(|w| w[1] >= w[0]) {
        return Err(Error::InvalidParameter("scales must be positive and strictly decreasing".into()));
    }
    Ok(())
}

fn non_increasing(values: &[f64]) -> bool {
    values.windows(2).all(|w| w[1] <= w[0] * (1.0 + 1e-9) + 1e-15)
}

#[derive(Debug, Clone)]
pub struct PansuOptions {
    pub scales: Vec<f64>,
    /// number of sampled unit elements `u`; `h = δ_r(u)`
    pub samples: usize,
    /// explicit unit elements used instead of random ones
    pub directions: Option<Vec<Vec<f64>>>,
    pub seed: u64,
    /// extrapolated residual below which the evidence counts as positive
    pub tol: f64,
    /// residual kept at this level across scales counts as negative evidence
    pub floor: f64,
    pub ladder: Ladder,
}

impl Default for PansuOptions {
    fn default() -> Self {
        Self {
            scales: (4..8).map(|k| 2f64.powi(-k)).collect(),
            samples: 64,
            directions: None,
            seed: 0,
            tol: 1e-6,
            floor: 1e-3,
            ladder: Ladder::default(),
        }
    }
}

/// `sup_h |f(xh) - f(x) - ⟨p(h), ∇_H f(x)⟩| / ‖h‖` over `‖h‖ ≈ r`, per scale.
///
/// Verdicts: `differentiable` when the last residual is below `tol`, or the
/// residuals do not increase and their linear extrapolation to `r = 0` is; `not-differentiable` when
/// the last residual keeps at least half the first and exceeds `floor`;
/// `inconclusive` otherwise.
pub fn pansu_quotient(f: &ScalarField, x: &[f64], opts: &PansuOptions) -> Result<ProbeReport> {
    check_scales(&opts.scales)?;
    let alg = f.algebra();
    let grad = horizontal_gradient(f, x, &opts.ladder)?;
    let g = grad
        .value
        .clone()
        .ok_or_else(|| Error::NonConvergent("horizontal gradient".into()))?;
    let units: Vec<Vec<f64>> = match &opts.directions {
        Some(d) => {
            for u in d {
                if u.len() != alg.dim() {
                    return Err(Error::DimensionMismatch { expected: alg.dim(), found: u.len() });
                }
            }
            d.clone()
        }
        None => {
            let mut rng = sampling::stream(opts.seed, 40);
            (0..opts.samples).map(|_| sampling::unit_sphere(alg, &mut rng)).collect()
        }
    };
    let fx = f.eval(x)?;
    let m = alg.horizontal_dim();
    let values = opts
        .scales
        .iter()
        .map(|&r| {
            let ratios = units
                .par_iter()
                .map(|u| {
                    let h = sampling::dilate_f64(alg, u, r);
                    let nh = hom_norm_f64(alg, &h);
                    if nh == 0.0 {
                        return Ok(0.0);
                    }
                    let linear: f64 = h[..m].iter().zip(&g).map(|(a, b)| a * b).sum();
                    Ok((f.eval(&mul(alg, x, &h))? - fx - linear).abs() / nh)
                })
                .collect::<Result<Vec<f64>>>()?;
            Ok(ratios.into_iter().fold(0.0, f64::max))
        })
        .collect::<Result<Vec<f64>>>()?;

    let monotone = non_increasing(&values);
    let k = values.len();
    let limit = if k >= 2 {
        let (r0, r1) = (opts.scales[k - 2], opts.scales[k - 1]);
        (values[k - 1] - r1 * (values[k - 2] - values[k - 1]) / (r0 - r1)).max(0.0)
    } else {
        values[0]
    };
    // rounding in f grows like eps / r, so tiny residuals need not be monotone
    let verdict = if values[k - 1] <= opts.tol || (monotone && limit <= opts.tol * values[0].max(1.0)) {
        "differentiable"
    } else if values[k - 1] >= 0.5 * values[0] && values[k - 1] > opts.floor {
        "not-differentiable"
    } else {
        "inconclusive"
    };
    Ok(ProbeReport {
        kind: "pansu".into(),
        point: x.to_vec(),
        metric: "hom_norm".into(),
        parameters: json!({
            "field": f.name(),
            "gradient": g,
            "candidate": "L(h) = <p(h), grad_H f(x)>",
            "samples": units.len(),
            "explicit_directions": opts.directions.is_some(),
            "seed": opts.seed,
            "tol": opts.tol,
            "floor": opts.floor,
            "ladder": opts.ladder,
            "monotone": monotone,
            "extrapolated_residual": limit,
        }),
        scales: opts.scales.clone(),
        values,
        verdict: verdict.into(),
        notes: vec!["residual measured with the homogeneous norm in place of d".into()],
    })
}

#[derive(Debug, Clone)]
pub struct RegularityOptions {
    /// scales `t` are the ladder steps
    pub ladder: Ladder,
    /// random `u` from the unit hom-norm ball
    pub samples: usize,
    /// extra `u` always included
    pub extra: Vec<Vec<f64>>,
    pub seed: u64,
    pub threshold: f64,
}

impl Default for RegularityOptions {
    fn default() -> Self {
        Self {
            ladder: Ladder::default(),
            samples: 64,
            extra: Vec::new(),
            seed: 0,
            threshold: 1e-2,
        }
    }
}

/// `sup_u |(f(x δ_t(u) exp(tE)) - f(x δ_t(u))) / t - Ef(x)|` per scale `t`.
///
/// Verdicts: `irregular-evidence` when every value exceeds `threshold`,
/// `regular-evidence` when the values do not increase and end below it,
/// `inconclusive` otherwise.
pub fn regularity_defect(f: &ScalarField, x: &[f64], e: &[f64], opts: &RegularityOptions) -> Result<ProbeReport> {
    let alg = f.algebra();
    let d = directional_derivative(f, x, e, &opts.ladder)?;
    let ef = d
        .value
        .ok_or_else(|| Error::NonConvergent("directional derivative Ef(x)".into()))?;
    let mut rng = sampling::stream(opts.seed, 41);
    let mut us: Vec<Vec<f64>> = (0..opts.samples).map(|_| sampling::unit_ball(alg, &mut rng)).collect();
    for u in &opts.extra {
        if u.len() != alg.dim() {
            return Err(Error::DimensionMismatch { expected: alg.dim(), found: u.len() });
        }
        us.push(u.clone());
    }
    let scales = opts.ladder.steps();
    let values = scales
        .iter()
        .map(|&t| {
            let defects = us
                .par_iter()
                .map(|u| {
                    let base = mul(alg, x, &sampling::dilate_f64(alg, u, t));
                    let q = (f.eval(&step(alg, &base, e, t))? - f.eval(&base)?) / t;
                    Ok((q - ef).abs())
                })
                .collect::<Result<Vec<f64>>>()?;
            Ok(defects.into_iter().fold(0.0, f64::max))
        })
        .collect::<Result<Vec<f64>>>()?;
    let verdict = if values.iter().all(|v| *v > opts.threshold) {
        "irregular-evidence"
    } else if non_increasing(&values) && values[values.len() - 1] <= opts.threshold {
        "regular-evidence"
    } else {
        "inconclusive"
    };
    Ok(ProbeReport {
        kind: "regularity".into(),
        point: x.to_vec(),
        metric: "hom_norm".into(),
        parameters: json!({
            "field": f.name(),
            "direction": e,
            "derivative": ef,
            "samples": opts.samples,
            "extra": opts.extra,
            "seed": opts.seed,
            "threshold": opts.threshold,
            "ladder": opts.ladder,
        }),
        scales,
        values,
        verdict: verdict.into(),
        notes: vec![
            "u ranges over the unit hom-norm ball in place of the CC ball d(u) <= 1; the two differ by a constant factor, which shifts thresholds rather than verdicts".into(),
        ],
    })
}

#[derive(Debug, Clone)]
pub struct MembershipOptions {
    pub delta: f64,
    pub points_per_octave: usize,
    pub octaves: usize,
    pub side: Sidedness,
    /// `None`: the splitting surrogate `max(N, max|ρ_i|)` of `split_sum(U, V)`
    pub c2: Option<f64>,
}

impl Default for MembershipOptions {
    fn default() -> Self {
        Self {
            delta: 0.5,
            points_per_octave: 4,
            octaves: 12,
            side: Sidedness::TwoSided,
            c2: None,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct MembershipA {
    pub member: bool,
    /// smallest `|t|` at which the bad-sum condition held
    pub witness: Option<f64>,
    pub c2: f64,
    pub epsilon: f64,
    pub side: Sidedness,
    /// grid values of `t`
    pub grid: Vec<f64>,
    pub u_good: Vec<bool>,
    pub v_good: Vec<bool>,
    pub uv_bad: Vec<bool>,
}

/// Whether `x` lies in the set where `U` and `V` have derivatives `y`, `z` up
/// to `ε` but `U + V` misses `y + z` by more than `2εC_2`:
///
/// * `|f(x exp(tU)) - f(x) - ty| ≤ ε|t|` at every grid `t`,
/// * the same for `V`, `z`,
/// * `|f(x exp(t(U+V))) - f(x) - t(y+z)| > 2εC_2|t|` at some `t` in every
///   octave of the grid.
///
/// The grid is `t = δ 2^{-k/p}`, `1 ≤ k ≤ p·octaves`, with signs per `side`.
#[allow(clippy::too_many_arguments)]
pub fn membership_a(
    f: &ScalarField,
    x: &[f64],
    u: &[f64],
    v: &[f64],
    y: f64,
    z: f64,
    epsilon: f64,
    opts: &MembershipOptions,
) -> Result<MembershipA> {
    if !(epsilon > 0.0 && opts.delta > 0.0) {
        return Err(Error::InvalidParameter("epsilon and delta must be positive".into()));
    }
    if opts.points_per_octave == 0 || opts.octaves == 0 {
        return Err(Error::InvalidParameter("empty t grid".into()));
    }
    let alg = f.algebra();
    let c2 = match opts.c2 {
        Some(c) => c,
        None => {
            let uu = LieVector::horizontal(alg.clone(), &rationals_from_f64(u)?)?;
            let vv = LieVector::horizontal(alg.clone(), &rationals_from_f64(v)?)?;
            split_sum(&uu, &vv)?.constant()
        }
    };
    let uv: Vec<f64> = u.iter().zip(v).map(|(a, b)| a + b).collect();
    let p = opts.points_per_octave;
    let magnitudes: Vec<f64> = (1..=p * opts.octaves)
        .map(|k| opts.delta * 2f64.powf(-(k as f64) / p as f64))
        .collect();
    let signs: &[f64] = match opts.side {
        Sidedness::TwoSided => &[1.0, -1.0],
        Sidedness::Forward => &[1.0],
        Sidedness::Backward => &[-1.0],
    };
    let grid: Vec<f64> = magnitudes.iter().flat_map(|t| signs.iter().map(move |s| s * t)).collect();
    let fx = f.eval(x)?;
    let rows = grid
        .par_iter()
        .map(|&t| {
            let du = f.eval_step(x, u, t)? - fx - t * y;
            let dv = f.eval_step(x, v, t)? - fx - t * z;
            let duv = f.eval_step(x, &uv, t)? - fx - t * (y + z);
            Ok((
                du.abs() <= epsilon * t.abs(),
                dv.abs() <= epsilon * t.abs(),
                duv.abs() > 2.0 * epsilon * c2 * t.abs(),
            ))
        })
        .collect::<Result<Vec<_>>>()?;
    let u_good: Vec<bool> = rows.iter().map(|r| r.0).collect();
    let v_good: Vec<bool> = rows.iter().map(|r| r.1).collect();
    let uv_bad: Vec<bool> = rows.iter().map(|r| r.2).collect();
    let per_octave = p * signs.len();
    let every_octave = uv_bad.chunks(per_octave).all(|c| c.iter().any(|b| *b));
    let member = u_good.iter().all(|b| *b) && v_good.iter().all(|b| *b) && every_octave;
    let witness = grid
        .iter()
        .zip(&uv_bad)
        .filter(|(_, bad)| **bad)
        .map(|(t, _)| t.abs())
        .fold(None, |acc: Option<f64>, t| Some(acc.map_or(t, |a| a.min(t))));
    Ok(MembershipA {
        member,
        witness,
        c2,
        epsilon,
        side: opts.side,
        grid,
        u_good,
        v_good,
        uv_bad,
    })
}
