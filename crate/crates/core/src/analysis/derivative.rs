use rand::Rng;
use serde::{Deserialize, Serialize};

use super::{euclid, ScalarField};
use crate::error::{Error, Result};
use crate::sampling;

/// Dyadic scales `h0, h0/2, …` at which difference quotients are taken.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Ladder {
    pub h0: f64,
    pub scales: usize,
    /// agreement required of the extrapolated limits
    pub tol: f64,
}

impl Default for Ladder {
    fn default() -> Self {
        Self {
            h0: 1.0 / 1024.0,
            scales: 4,
            tol: 1e-6,
        }
    }
}

impl Ladder {
    pub fn steps(&self) -> Vec<f64> {
        (0..self.scales).map(|k| self.h0 / (1u64 << k) as f64).collect()
    }

    fn check(&self) -> Result<()> {
        if self.scales < 4 {
            return Err(Error::InvalidParameter(format!("ladder needs at least 4 scales, got {}", self.scales)));
        }
        if !(self.h0 > 0.0 && self.h0.is_finite()) {
            return Err(Error::InvalidParameter(format!("ladder start must be positive, got {}", self.h0)));
        }
        if !(self.tol > 0.0) {
            return Err(Error::InvalidParameter(format!("ladder tolerance must be positive, got {}", self.tol)));
        }
        Ok(())
    }
}

/// Which quotients define a derivative.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Sidedness {
    TwoSided,
    /// `t → 0⁺`
    Forward,
    /// `t → 0⁻`
    Backward,
}

#[derive(Debug, Clone, Serialize)]
pub struct DerivativeEstimate {
    pub direction: Vec<f64>,
    pub scales: Vec<f64>,
    /// `(f(x exp(tE)) - f(x)) / t`
    pub forward: Vec<f64>,
    /// `(f(x exp(-tE)) - f(x)) / (-t)`
    pub backward: Vec<f64>,
    pub symmetric: Vec<f64>,
    pub forward_limit: f64,
    pub backward_limit: f64,
    pub symmetric_limit: f64,
    pub forward_converged: bool,
    pub backward_converged: bool,
    /// both one-sided ladders contract and their limits agree
    pub converged: bool,
    /// the two-sided limit, present only when `converged`
    pub value: Option<f64>,
    pub error: f64,
    pub forward_error: f64,
    pub backward_error: f64,
    /// quotients above the declared Lipschitz bound `L ω(E)`
    pub lipschitz_violations: usize,
}

impl DerivativeEstimate {
    pub fn value_for(&self, side: Sidedness) -> Option<f64> {
        match side {
            Sidedness::TwoSided => self.value,
            Sidedness::Forward => self.forward_converged.then_some(self.forward_limit),
            Sidedness::Backward => self.backward_converged.then_some(self.backward_limit),
        }
    }

    pub fn error_for(&self, side: Sidedness) -> f64 {
        match side {
            Sidedness::TwoSided => self.error,
            Sidedness::Forward => self.forward_error,
            Sidedness::Backward => self.backward_error,
        }
    }
}

// Richardson step for a quotient whose error is `c t^order`
fn extrapolate(q: &[f64], order: i32) -> Vec<f64> {
    let w = 2f64.powi(order);
    q.windows(2).map(|p| (w * p[1] - p[0]) / (w - 1.0)).collect()
}

// (limit, error estimate, contracting)
fn settle(q: &[f64], order: i32, tol: f64, noise: f64) -> (f64, f64, bool) {
    let r = extrapolate(q, order);
    let limit = *r.last().expect("at least two scales");
    let error = (r[r.len() - 1] - r[r.len() - 2]).abs();
    let deltas: Vec<f64> = q.windows(2).map(|p| (p[1] - p[0]).abs()).collect();
    let shrinking = deltas.windows(2).all(|d| d[1] <= d[0] + noise);
    (limit, error, shrinking && error <= tol * limit.abs().max(1.0) + noise)
}

/// `Ef(x)` from forward, backward and symmetric quotients on a ladder.
pub fn directional_derivative(f: &ScalarField, x: &[f64], e: &[f64], ladder: &Ladder) -> Result<DerivativeEstimate> {
    ladder.check()?;
    let m = f.algebra().horizontal_dim();
    if e.len() != m {
        return Err(Error::DimensionMismatch { expected: m, found: e.len() });
    }
    let fx = f.eval(x)?;
    let scales = ladder.steps();
    let mut forward = Vec::with_capacity(scales.len());
    let mut backward = Vec::with_capacity(scales.len());
    let mut magnitude = fx.abs();
    for &t in &scales {
        let fp = f.eval_step(x, e, t)?;
        let fm = f.eval_step(x, e, -t)?;
        magnitude = magnitude.max(fp.abs()).max(fm.abs());
        forward.push((fp - fx) / t);
        backward.push((fm - fx) / -t);
    }
    let symmetric: Vec<f64> = forward.iter().zip(&backward).map(|(a, b)| 0.5 * (a + b)).collect();
    // rounding in f, amplified by the smallest step
    let noise = 64.0 * f64::EPSILON * (1.0 + magnitude) / scales[scales.len() - 1];
    let (forward_limit, ef, forward_converged) = settle(&forward, 1, ladder.tol, noise);
    let (backward_limit, eb, backward_converged) = settle(&backward, 1, ladder.tol, noise);
    let (symmetric_limit, es, symmetric_converged) = settle(&symmetric, 2, ladder.tol, noise);
    let agree = (forward_limit - backward_limit).abs() <= ladder.tol * symmetric_limit.abs().max(1.0) + noise;
    let converged = forward_converged && backward_converged && symmetric_converged && agree;
    let lipschitz_violations = match f.lipschitz() {
        Some(l) => {
            let bound = l * euclid(e) * (1.0 + 1e-9) + noise;
            forward.iter().chain(&backward).filter(|q| q.abs() > bound).count()
        }
        None => 0,
    };
    Ok(DerivativeEstimate {
        direction: e.to_vec(),
        scales,
        forward,
        backward,
        symmetric,
        forward_limit,
        backward_limit,
        symmetric_limit,
        forward_converged,
        backward_converged,
        converged,
        value: converged.then_some(symmetric_limit),
        error: if converged { es } else { ef.max(eb).max((forward_limit - backward_limit).abs()) },
        forward_error: ef,
        backward_error: eb,
        lipschitz_violations,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct Gradient {
    pub components: Vec<DerivativeEstimate>,
    /// `(X_1 f(x), …, X_m f(x))` when every component converged
    pub value: Option<Vec<f64>>,
    pub converged: bool,
}

/// `∇_H f(x)` componentwise over `X_1, …, X_m`.
pub fn horizontal_gradient(f: &ScalarField, x: &[f64], ladder: &Ladder) -> Result<Gradient> {
    let m = f.algebra().horizontal_dim();
    let components = (0..m)
        .map(|j| {
            let mut e = vec![0.0; m];
            e[j] = 1.0;
            directional_derivative(f, x, &e, ladder)
        })
        .collect::<Result<Vec<_>>>()?;
    let converged = components.iter().all(|c| c.converged);
    let value = converged.then(|| components.iter().map(|c| c.symmetric_limit).collect());
    Ok(Gradient {
        components,
        value,
        converged,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct LinearityDefect {
    pub side: Sidedness,
    pub uf: f64,
    pub vf: f64,
    pub uvf: f64,
    /// `|(U+V)f(x) - Uf(x) - Vf(x)|`
    pub defect: f64,
    /// sum of the constituent error estimates
    pub error: f64,
}

/// Failure of additivity of `E ↦ Ef(x)` on `U, V`.
pub fn linearity_defect(
    f: &ScalarField,
    x: &[f64],
    u: &[f64],
    v: &[f64],
    ladder: &Ladder,
    side: Sidedness,
) -> Result<LinearityDefect> {
    if u.len() != v.len() {
        return Err(Error::DimensionMismatch { expected: u.len(), found: v.len() });
    }
    let uv: Vec<f64> = u.iter().zip(v).map(|(a, b)| a + b).collect();
    let mut values = [0.0; 3];
    let mut error = 0.0;
    for (slot, (label, dir)) in [("U", u), ("V", v), ("U+V", uv.as_slice())].into_iter().enumerate() {
        let d = directional_derivative(f, x, dir, ladder)?;
        values[slot] = d
            .value_for(side)
            .ok_or_else(|| Error::NonConvergent(format!("{label}f(x) with {side:?} quotients")))?;
        error += d.error_for(side);
    }
    let [uf, vf, uvf] = values;
    Ok(LinearityDefect {
        side,
        uf,
        vf,
        uvf,
        defect: (uvf - uf - vf).abs(),
        error,
    })
}

/// Fraction of random `(x, E)`, `x` in the unit ball and `ω(E) = 1`, at
/// which the two-sided derivative converged.
pub fn convergent_fraction(f: &ScalarField, samples: usize, ladder: &Ladder, seed: u64) -> Result<f64> {
    let alg = f.algebra();
    let m = alg.horizontal_dim();
    let mut rng = sampling::stream(seed, 21);
    let mut hits = 0;
    for _ in 0..samples {
        let x = sampling::unit_ball(alg, &mut rng);
        let e = loop {
            let e: Vec<f64> = (0..m).map(|_| rng.random_range(-1.0..=1.0)).collect();
            let n = euclid(&e);
            if n > 1e-3 && n <= 1.0 {
                break e.iter().map(|c| c / n).collect::<Vec<_>>();
            }
        };
        if directional_derivative(f, &x, &e, ladder)?.converged {
            hits += 1;
        }
    }
    Ok(if samples == 0 { 0.0 } else { hits as f64 / samples as f64 })
}
