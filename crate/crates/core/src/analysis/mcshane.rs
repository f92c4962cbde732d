use std::sync::Arc;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{rho, Provenance, ScalarField};
use crate::error::{Error, Result};
use crate::lie::StratifiedAlgebra;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Sample {
    pub point: Vec<f64>,
    pub value: f64,
}

impl Sample {
    pub fn new(point: Vec<f64>, value: f64) -> Self {
        Self { point, value }
    }
}

fn check_shapes(alg: &StratifiedAlgebra, samples: &[Sample]) -> Result<()> {
    for s in samples {
        if s.point.len() != alg.dim() {
            return Err(Error::DimensionMismatch {
                expected: alg.dim(),
                found: s.point.len(),
            });
        }
        if !s.value.is_finite() || s.point.iter().any(|c| !c.is_finite()) {
            return Err(Error::InvalidParameter("samples must be finite".into()));
        }
    }
    Ok(())
}

// |f(a_i) - f(a_j)| / ρ(a_i, a_j) over j > i; pairs with equal values are skipped
fn row_ratios<'a>(alg: &'a StratifiedAlgebra, samples: &'a [Sample], i: usize) -> impl Iterator<Item = (usize, f64)> + 'a {
    let a = &samples[i];
    samples[i + 1..]
        .iter()
        .enumerate()
        .filter(move |(_, b)| b.value != a.value)
        .map(move |(off, b)| {
            let d = rho(alg, &a.point, &b.point);
            let ratio = if d == 0.0 { f64::INFINITY } else { (a.value - b.value).abs() / d };
            (i + 1 + off, ratio)
        })
}

/// Smallest `L` with `|f(a) - f(b)| ≤ L ρ(a, b)` on the samples.
pub fn minimal_lipschitz(alg: &StratifiedAlgebra, samples: &[Sample]) -> Result<f64> {
    check_shapes(alg, samples)?;
    Ok((0..samples.len())
        .into_par_iter()
        .map(|i| row_ratios(alg, samples, i).map(|(_, r)| r).fold(0.0, f64::max))
        .reduce(|| 0.0, f64::max))
}

/// Fails with the first pair (in index order) whose quotient exceeds `l`.
pub fn check_compatible(alg: &StratifiedAlgebra, samples: &[Sample], l: f64) -> Result<()> {
    check_shapes(alg, samples)?;
    let limit = l * (1.0 + 1e-12);
    let bad = (0..samples.len())
        .into_par_iter()
        .filter_map(|i| row_ratios(alg, samples, i).find(|(_, r)| *r > limit).map(|(j, r)| (i, j, r)))
        .min_by_key(|(i, j, _)| (*i, *j));
    match bad {
        Some((first, second, ratio)) => Err(Error::IncompatibleSamples {
            first,
            second,
            ratio,
            limit: l,
        }),
        None => Ok(()),
    }
}

/// `f̃(x) = min_a (f(a) + L ρ(x, a))`, an `L`-Lipschitz extension whenever
/// `ρ` satisfies the triangle inequality.
pub fn mcshane_extend(
    alg: &Arc<StratifiedAlgebra>,
    samples: Vec<Sample>,
    l: f64,
    name: impl Into<String>,
) -> Result<ScalarField> {
    if !(l >= 0.0 && l.is_finite()) {
        return Err(Error::InvalidParameter(format!("Lipschitz constant must be finite and >= 0, got {l}")));
    }
    if samples.is_empty() {
        return Err(Error::InvalidParameter("McShane extension needs at least one sample".into()));
    }
    check_compatible(alg, &samples, l)?;
    let algebra = alg.clone();
    let samples = Arc::new(samples);
    Ok(ScalarField::new(alg.clone(), name, Provenance::McShane, Some(l), move |x| {
        // min is exact and order-independent, so splitting the scan is deterministic
        samples
            .par_iter()
            .with_min_len(1024)
            .map(|s| s.value + l * rho(&algebra, x, &s.point))
            .reduce(|| f64::INFINITY, f64::min)
    }))
}
