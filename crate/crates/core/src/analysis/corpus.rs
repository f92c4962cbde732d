use std::f64::consts::PI;
use std::sync::Arc;

use super::{euclid, mcshane_extend, minimal_lipschitz, Provenance, Sample, ScalarField};
use crate::error::{Error, Result};
use crate::lie::{heisenberg, StratifiedAlgebra};

pub const CORPUS_NAMES: [&str; 6] = ["min2", "heis-sqrt", "linear-v", "x1", "x1sq-x1x2", "product12"];

#[derive(Debug, Clone, Default)]
pub struct CorpusOptions {
    /// coefficients of `linear-v`; default `(1, 2, …, m)`
    pub v: Option<Vec<f64>>,
    /// extra horizontal rays sampled densely by `heis-sqrt`
    pub probe_directions: Vec<Vec<f64>>,
}

/// Builtin test functions.
///
/// * `min2`: `min(x_1, x_2)`, 1-Lipschitz.
/// * `heis-sqrt`: on `H^1`, the McShane extension of `0` on the plane
///   `{t = 0}` and `√|t|` on the vertical axis, from [`heis_sqrt_samples`].
/// * `linear-v`: `⟨p(x), v⟩`, group-linear.
/// * `x1`: the first coordinate.
/// * `x1sq-x1x2`: `x_1² + x_1 x_2`, smooth.
/// * `product12`: `x_1 x_2`, smooth.
pub fn corpus(name: &str, alg: &Arc<StratifiedAlgebra>, opts: &CorpusOptions) -> Result<ScalarField> {
    let m = alg.horizontal_dim();
    let need_two = || {
        if m < 2 {
            Err(Error::InvalidParameter(format!("`{name}` needs at least two horizontal directions")))
        } else {
            Ok(())
        }
    };
    let builtin = |lip: Option<f64>, f: fn(&[f64]) -> f64| ScalarField::new(alg.clone(), name, Provenance::Builtin, lip, f);
    match name {
        "min2" => {
            need_two()?;
            Ok(builtin(Some(1.0), |x| x[0].min(x[1])))
        }
        "x1" => Ok(builtin(Some(1.0), |x| x[0])),
        "x1sq-x1x2" => {
            need_two()?;
            Ok(builtin(None, |x| x[0] * x[0] + x[0] * x[1]))
        }
        "product12" => {
            need_two()?;
            Ok(builtin(None, |x| x[0] * x[1]))
        }
        "linear-v" => {
            let v = opts.v.clone().unwrap_or_else(|| (1..=m).map(|j| j as f64).collect());
            if v.len() != m {
                return Err(Error::DimensionMismatch { expected: m, found: v.len() });
            }
            let lip = euclid(&v);
            Ok(ScalarField::new(alg.clone(), name, Provenance::Builtin, Some(lip), move |x| {
                x.iter().zip(&v).map(|(a, b)| a * b).sum()
            }))
        }
        "heis-sqrt" => {
            if **alg != heisenberg(1)? {
                return Err(Error::InvalidParameter("`heis-sqrt` is defined on heisenberg(1) only".into()));
            }
            let samples = heis_sqrt_samples(&opts.probe_directions)?;
            let l = minimal_lipschitz(alg, &samples)?;
            mcshane_extend(alg, samples, l, name)
        }
        other => Err(Error::UnknownField(other.to_string())),
    }
}

/// Finite sample of `{(x, y, 0)} ∪ {(0, 0, t)}` with `f = 0` on the plane and
/// `f(0, 0, t) = √|t|`:
///
/// * a log-polar grid of the plane: 64 angles, radii `2^{-j/8}` down to `2^{-24}`;
/// * the rays `±2^{-j} E`, `j ≤ 30`, for `E ∈ {X_1, X_2}` and every probe direction;
/// * vertical points `(0, 0, ±τ²)` for `τ = 2^{-j/4}` (`j ≤ 60`) and `τ = 10^{-k/4}` (`k ≤ 16`).
///
/// A difference quotient of the extension along `E` at the origin vanishes
/// only if the sample contains the points `tE`; a grid alone leaves an
/// angular gap whose cost in `ρ` is of order `√gap`.
pub fn heis_sqrt_samples(probe_directions: &[Vec<f64>]) -> Result<Vec<Sample>> {
    let mut samples = vec![Sample::new(vec![0.0; 3], 0.0)];
    for j in 0..=8 * 24 {
        let r = 2f64.powf(-(j as f64) / 8.0);
        for k in 0..64 {
            let a = 2.0 * PI * k as f64 / 64.0;
            samples.push(Sample::new(vec![r * a.cos(), r * a.sin(), 0.0], 0.0));
        }
    }
    let mut rays = vec![vec![1.0, 0.0], vec![0.0, 1.0]];
    for d in probe_directions {
        if d.len() != 2 {
            return Err(Error::DimensionMismatch { expected: 2, found: d.len() });
        }
        let n = euclid(d);
        if n == 0.0 {
            return Err(Error::InvalidParameter("probe direction must be nonzero".into()));
        }
        rays.push(d.clone());
    }
    for d in &rays {
        for j in 0..=30 {
            let r = 2f64.powi(-j);
            for sign in [1.0, -1.0] {
                samples.push(Sample::new(vec![sign * r * d[0], sign * r * d[1], 0.0], 0.0));
            }
        }
    }
    let taus = (0..=60)
        .map(|j| 2f64.powf(-(j as f64) / 4.0))
        .chain((0..=16).map(|k| 10f64.powf(-(k as f64) / 4.0)));
    for tau in taus {
        let s = tau * tau;
        for sign in [1.0, -1.0] {
            samples.push(Sample::new(vec![0.0, 0.0, sign * s], s.sqrt()));
        }
    }
    Ok(samples)
}
