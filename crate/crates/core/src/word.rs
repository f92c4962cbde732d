//! Horizontal words `exp(t_1 E_1) ⋯ exp(t_N E_N)` with `E_j ∈ V_1`.

use std::sync::Arc;

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::group::GroupPoint;
use crate::lie::{ensure_same, LieVector, StratifiedAlgebra};
use crate::scalar::{Rational, Scalar};

#[derive(Debug, Clone, PartialEq)]
pub struct WordStep<T: Scalar> {
    pub t: T,
    pub direction: LieVector<T>,
}

/// Piecewise-constant horizontal control; step `j` moves `x ↦ x·exp(t_j E_j)`.
#[derive(Debug, Clone, PartialEq)]
pub struct HorizontalWord<T: Scalar> {
    algebra: Arc<StratifiedAlgebra>,
    steps: Vec<WordStep<T>>,
}

impl<T: Scalar> HorizontalWord<T> {
    pub fn new(algebra: Arc<StratifiedAlgebra>, steps: Vec<WordStep<T>>) -> Result<Self> {
        for (idx, s) in steps.iter().enumerate() {
            ensure_same(&algebra, s.direction.algebra())?;
            if !s.direction.is_horizontal() {
                return Err(Error::NonHorizontal { step: idx });
            }
        }
        Ok(Self { algebra, steps })
    }

    pub fn empty(algebra: Arc<StratifiedAlgebra>) -> Self {
        Self {
            algebra,
            steps: Vec::new(),
        }
    }

    /// Word from `(t, horizontal coefficients)` pairs.
    pub fn from_pairs(algebra: Arc<StratifiedAlgebra>, pairs: &[(T, Vec<T>)]) -> Result<Self> {
        let steps = pairs
            .iter()
            .map(|(t, dir)| {
                Ok(WordStep {
                    t: t.clone(),
                    direction: LieVector::horizontal(algebra.clone(), dir)?,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(algebra, steps)
    }

    pub fn algebra(&self) -> &Arc<StratifiedAlgebra> {
        &self.algebra
    }

    pub fn steps(&self) -> &[WordStep<T>] {
        &self.steps
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    pub fn push(&mut self, t: T, direction: LieVector<T>) -> Result<()> {
        ensure_same(&self.algebra, direction.algebra())?;
        if !direction.is_horizontal() {
            return Err(Error::NonHorizontal { step: self.steps.len() });
        }
        self.steps.push(WordStep { t, direction });
        Ok(())
    }

    /// `x·exp(t_1 E_1)⋯exp(t_N E_N)`.
    pub fn flow(&self, x: &GroupPoint<T>) -> Result<GroupPoint<T>> {
        ensure_same(&self.algebra, x.algebra())?;
        let table = self.algebra.bch_table();
        let mut cur = x.coords().to_vec();
        for s in &self.steps {
            if s.t.is_zero() {
                continue;
            }
            let v: Vec<T> = s
                .direction
                .coeffs()
                .iter()
                .map(|c| s.t.clone() * c.clone())
                .collect();
            cur = table.evaluate(&self.algebra, &cur, &v);
        }
        GroupPoint::new(self.algebra.clone(), cur)
    }

    /// `flow(identity)`.
    pub fn endpoint(&self) -> GroupPoint<T> {
        self.flow(&GroupPoint::identity(self.algebra.clone()))
            .expect("word and identity share the algebra")
    }

    /// `Σ |t_j| ω(E_j)`.
    pub fn length(&self) -> f64 {
        self.steps
            .iter()
            .map(|s| s.t.to_f64().abs() * s.direction.omega())
            .sum()
    }

    pub fn concat(&self, other: &Self) -> Result<Self> {
        ensure_same(&self.algebra, &other.algebra)?;
        let mut steps = self.steps.clone();
        steps.extend(other.steps.iter().cloned());
        Ok(Self {
            algebra: self.algebra.clone(),
            steps,
        })
    }

    pub(crate) fn extend(&mut self, other: Self) {
        self.steps.extend(other.steps);
    }

    /// Word for the inverse element: steps reversed, directions negated.
    pub fn reverse_negate(&self) -> Self {
        Self {
            algebra: self.algebra.clone(),
            steps: self
                .steps
                .iter()
                .rev()
                .map(|s| WordStep {
                    t: s.t.clone(),
                    direction: s.direction.neg(),
                })
                .collect(),
        }
    }

    /// Image under `δ_λ`: every `t_j` scaled by `λ`.
    pub fn dilate(&self, lambda: &T) -> Result<Self> {
        if *lambda <= T::zero() {
            return Err(Error::NonPositiveDilation);
        }
        Ok(Self {
            algebra: self.algebra.clone(),
            steps: self
                .steps
                .iter()
                .map(|s| WordStep {
                    t: lambda.clone() * s.t.clone(),
                    direction: s.direction.clone(),
                })
                .collect(),
        })
    }

    pub fn to_f64(&self) -> HorizontalWord<f64> {
        HorizontalWord {
            algebra: self.algebra.clone(),
            steps: self
                .steps
                .iter()
                .map(|s| WordStep {
                    t: s.t.to_f64(),
                    direction: s.direction.to_f64(),
                })
                .collect(),
        }
    }
}

impl HorizontalWord<Rational> {
    /// `Σ t_j` as an exact rational (meaningful for words with `t_j ≥ 0`).
    pub fn total_time(&self) -> Rational {
        self.steps.iter().fold(Rational::zero(), |acc, s| acc + &s.t)
    }
}
