//! The Carnot group in exponential coordinates.

use std::sync::Arc;

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::lie::{ensure_same, same_algebra, LieVector, StratifiedAlgebra};
use crate::scalar::{Rational, Scalar};

/// `exp(x_1 X_1 + … + x_n X_n)`, stored as `(x_1, …, x_n)`.
#[derive(Debug, Clone)]
pub struct GroupPoint<T: Scalar> {
    algebra: Arc<StratifiedAlgebra>,
    coords: Vec<T>,
}

impl<T: Scalar> PartialEq for GroupPoint<T> {
    fn eq(&self, other: &Self) -> bool {
        same_algebra(&self.algebra, &other.algebra) && self.coords == other.coords
    }
}

impl<T: Scalar> GroupPoint<T> {
    pub fn new(algebra: Arc<StratifiedAlgebra>, coords: Vec<T>) -> Result<Self> {
        if coords.len() != algebra.dim() {
            return Err(Error::DimensionMismatch {
                expected: algebra.dim(),
                found: coords.len(),
            });
        }
        Ok(Self { algebra, coords })
    }

    pub fn identity(algebra: Arc<StratifiedAlgebra>) -> Self {
        let n = algebra.dim();
        Self {
            algebra,
            coords: vec![T::zero(); n],
        }
    }

    pub fn exp(v: &LieVector<T>) -> Self {
        Self {
            algebra: v.algebra().clone(),
            coords: v.coeffs().to_vec(),
        }
    }

    pub fn log(&self) -> LieVector<T> {
        LieVector::new(self.algebra.clone(), self.coords.clone()).expect("length checked at construction")
    }

    pub fn algebra(&self) -> &Arc<StratifiedAlgebra> {
        &self.algebra
    }

    pub fn coords(&self) -> &[T] {
        &self.coords
    }

    pub fn into_coords(self) -> Vec<T> {
        self.coords
    }

    pub fn is_identity(&self) -> bool {
        self.coords.iter().all(Zero::is_zero)
    }

    pub fn multiply(&self, other: &Self) -> Result<Self> {
        ensure_same(&self.algebra, &other.algebra)?;
        Ok(self.with(self.algebra.bch_table().evaluate(&self.algebra, &self.coords, &other.coords)))
    }

    /// `exp(X)^{-1} = exp(-X)`.
    pub fn inverse(&self) -> Self {
        self.with(self.coords.iter().map(|c| -c.clone()).collect())
    }

    /// `x^{-1} y`.
    pub fn relative(&self, other: &Self) -> Result<Self> {
        self.inverse().multiply(other)
    }

    /// `δ_λ(x) = (λ^{d_1} x_1, …, λ^{d_n} x_n)`.
    pub fn dilate(&self, lambda: &T) -> Result<Self> {
        if *lambda <= T::zero() {
            return Err(Error::NonPositiveDilation);
        }
        let powers = degree_powers(lambda, self.algebra.step());
        Ok(self.with(
            self.coords
                .iter()
                .zip(self.algebra.degrees())
                .map(|(c, d)| powers[*d].clone() * c.clone())
                .collect(),
        ))
    }

    /// `(Σ_i |x^i|^{2σ/i})^{1/(2σ)}` with `σ = s!`.
    pub fn hom_norm(&self) -> f64 {
        let coords: Vec<f64> = self.coords.iter().map(Scalar::to_f64).collect();
        hom_norm_f64(&self.algebra, &coords)
    }

    /// `ρ(x, y) = ‖x^{-1} y‖`.
    pub fn distance(&self, other: &Self) -> Result<f64> {
        Ok(self.relative(other)?.hom_norm())
    }

    /// `p(x)`: the first `m` coordinates.
    pub fn project_horizontal(&self) -> Vec<T> {
        self.coords[..self.algebra.horizontal_dim()].to_vec()
    }

    /// Left-invariant field `X_j` at `x`, as the `t`-linear part of
    /// `x ⋄ t X_j` (0-based `j < m`).
    pub fn vector_field(&self, j: usize) -> Result<LieVector<T>> {
        let m = self.algebra.horizontal_dim();
        if j >= m {
            return Err(Error::IndexOutOfRange { index: j, bound: m });
        }
        let mut e = vec![T::zero(); self.algebra.dim()];
        e[j] = T::one();
        self.tangent(&e)
    }

    /// `d/dt (x ⋄ tY)` at `t = 0`.
    pub fn tangent(&self, y: &[T]) -> Result<LieVector<T>> {
        let v = self
            .algebra
            .bch_table()
            .linear_in_second(&self.algebra, &self.coords, y);
        LieVector::new(self.algebra.clone(), v)
    }

    pub fn to_f64(&self) -> GroupPoint<f64> {
        GroupPoint {
            algebra: self.algebra.clone(),
            coords: self.coords.iter().map(Scalar::to_f64).collect(),
        }
    }

    pub(crate) fn with(&self, coords: Vec<T>) -> Self {
        Self {
            algebra: self.algebra.clone(),
            coords,
        }
    }
}

impl GroupPoint<Rational> {
    /// Exact copy of a float point.
    pub fn from_f64(p: &GroupPoint<f64>) -> Result<Self> {
        let coords = crate::scalar::rationals_from_f64(p.coords())?;
        Self::new(p.algebra().clone(), coords)
    }
}

/// `[1, λ, λ², …, λ^s]`.
pub(crate) fn degree_powers<T: Scalar>(lambda: &T, s: usize) -> Vec<T> {
    let mut powers = vec![T::one()];
    for _ in 0..s {
        let next = powers.last().unwrap().clone() * lambda.clone();
        powers.push(next);
    }
    powers
}

pub(crate) fn factorial(k: usize) -> u64 {
    (1..=k as u64).product()
}

/// Homogeneous norm of float coordinates.
pub fn hom_norm_f64(alg: &StratifiedAlgebra, coords: &[f64]) -> f64 {
    let s = alg.step();
    let sigma = factorial(s);
    if coords.iter().all(|&c| c == 0.0) {
        return 0.0;
    }
    let representable = coords.iter().all(|&c| c == 0.0 || (c * c).is_normal());
    if representable {
        let direct = norm_from_squares(&layer_squares(alg, coords), sigma);
        if direct.is_normal() {
            return direct;
        }
    }
    // rescale by the homogeneous size so every power stays in range
    let nu = coords
        .iter()
        .zip(alg.degrees())
        .map(|(c, d)| c.abs().powf(1.0 / *d as f64))
        .fold(0.0_f64, f64::max);
    let scaled: Vec<f64> = coords
        .iter()
        .zip(alg.degrees())
        .map(|(c, d)| (0..*d).fold(*c, |acc, _| acc / nu))
        .collect();
    nu * norm_from_squares(&layer_squares(alg, &scaled), sigma)
}

fn layer_squares(alg: &StratifiedAlgebra, coords: &[f64]) -> Vec<f64> {
    (1..=alg.step())
        .map(|i| coords[alg.layer_range(i)].iter().map(|c| c * c).sum())
        .collect()
}

fn norm_from_squares(layer_sq: &[f64], sigma: u64) -> f64 {
    let sum: f64 = layer_sq
        .iter()
        .enumerate()
        .map(|(i, q)| q.powi((sigma / (i as u64 + 1)) as i32))
        .sum();
    sum.powf(1.0 / (2 * sigma) as f64)
}
