use std::fmt;
use std::sync::Arc;

use rand::Rng;
use serde::Serialize;

use super::{rho, step};
use crate::error::{Error, Result};
use crate::lie::StratifiedAlgebra;
use crate::sampling;

pub type Oracle = Arc<dyn Fn(&[f64]) -> f64 + Send + Sync>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Provenance {
    Builtin,
    McShane,
    User,
}

/// Real-valued function on the group, evaluated in exponential coordinates.
#[derive(Clone)]
pub struct ScalarField {
    algebra: Arc<StratifiedAlgebra>,
    name: String,
    provenance: Provenance,
    lipschitz: Option<f64>,
    oracle: Oracle,
}

impl fmt::Debug for ScalarField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ScalarField")
            .field("name", &self.name)
            .field("provenance", &self.provenance)
            .field("lipschitz", &self.lipschitz)
            .finish_non_exhaustive()
    }
}

impl ScalarField {
    pub fn new(
        algebra: Arc<StratifiedAlgebra>,
        name: impl Into<String>,
        provenance: Provenance,
        lipschitz: Option<f64>,
        oracle: impl Fn(&[f64]) -> f64 + Send + Sync + 'static,
    ) -> Self {
        Self {
            algebra,
            name: name.into(),
            provenance,
            lipschitz,
            oracle: Arc::new(oracle),
        }
    }

    pub fn algebra(&self) -> &Arc<StratifiedAlgebra> {
        &self.algebra
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn provenance(&self) -> Provenance {
        self.provenance
    }

    /// Declared Lipschitz constant with respect to `ρ`.
    pub fn lipschitz(&self) -> Option<f64> {
        self.lipschitz
    }

    pub fn eval(&self, x: &[f64]) -> Result<f64> {
        if x.len() != self.algebra.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.algebra.dim(),
                found: x.len(),
            });
        }
        let v = (self.oracle)(x);
        if v.is_finite() {
            Ok(v)
        } else {
            Err(Error::Oracle(format!("`{}` returned {v} at {x:?}", self.name)))
        }
    }

    /// `f(x · exp(tE))`.
    pub fn eval_step(&self, x: &[f64], e: &[f64], t: f64) -> Result<f64> {
        self.eval(&step(&self.algebra, x, e, t))
    }
}

/// Sampled check of a declared Lipschitz constant.
#[derive(Debug, Clone, Serialize)]
pub struct LipschitzAudit {
    pub declared: Option<f64>,
    pub pairs: usize,
    pub max_ratio: f64,
    /// pairs whose quotient exceeds the declared constant by more than `1e-12`
    pub violations: usize,
    pub metric: &'static str,
}

/// `|f(x) - f(y)| / ρ(x, y)` over pairs drawn from `δ_radius(unit ball)`.
pub fn lipschitz_audit(f: &ScalarField, pairs: usize, radius: f64, seed: u64) -> Result<LipschitzAudit> {
    let alg = f.algebra();
    let mut rng = sampling::stream(seed, 20);
    let mut max_ratio: f64 = 0.0;
    let mut violations = 0;
    for _ in 0..pairs {
        let x = sampling::dilate_f64(alg, &sampling::unit_ball(alg, &mut rng), radius);
        // half the pairs are close together, where quotients are largest for cusps
        let y = if rng.random_bool(0.5) {
            let w = sampling::dilate_f64(alg, &sampling::unit_ball(alg, &mut rng), radius * 1e-3);
            super::mul(alg, &x, &w)
        } else {
            sampling::dilate_f64(alg, &sampling::unit_ball(alg, &mut rng), radius)
        };
        let d = rho(alg, &x, &y);
        if d == 0.0 {
            continue;
        }
        let ratio = (f.eval(&x)? - f.eval(&y)?).abs() / d;
        max_ratio = max_ratio.max(ratio);
        if let Some(l) = f.lipschitz() {
            if ratio > l + 1e-12 * l.max(1.0) {
                violations += 1;
            }
        }
    }
    Ok(LipschitzAudit {
        declared: f.lipschitz(),
        pairs,
        max_ratio,
        violations,
        metric: "hom_norm",
    })
}
