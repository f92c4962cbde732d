//! Baker–Campbell–Hausdorff product in a nilpotent Lie algebra.
//!
//! `log(exp X exp Y)` is expanded in the free associative algebra on two
//! letters, truncated at the requested order, and each word is mapped to its
//! left-normed bracket `[[..[w1,w2],..],wk]`. By the Dynkin–Specht–Wever lemma
//! a homogeneous Lie polynomial of degree `k` equals `1/k` times the image of
//! its word expansion, so the result is exact. In a step-`s` algebra every
//! bracket of length above `s` vanishes, hence order `s` is already the full
//! series.

use num_traits::{One, Zero};

use crate::lie::StratifiedAlgebra;
use crate::scalar::{Coeff, Rational, Scalar};

/// One word of the truncated BCH series with its Dynkin-weighted coefficient.
#[derive(Debug, Clone)]
pub struct BchTerm {
    pub len: usize,
    /// letters from the most significant bit: 0 = X, 1 = Y
    pub bits: u64,
    pub coeff: Coeff,
}

#[derive(Debug, Clone)]
pub struct BchTable {
    order: usize,
    terms: Vec<BchTerm>,
}

fn word_index(len: usize, bits: u64) -> usize {
    (1usize << len) - 1 + bits as usize
}

fn factorial(k: usize) -> Rational {
    (1..=k).fold(Rational::one(), |acc, i| acc * Rational::from_integer(i.into()))
}

impl BchTable {
    /// Builds the series truncated at words of length `order`.
    pub fn new(order: usize) -> Self {
        assert!((1..24).contains(&order), "BCH order out of supported range");
        let size = (1usize << (order + 1)) - 1;

        // exp(X) exp(Y) - 1
        let mut w = vec![Rational::zero(); size];
        for a in 0..=order {
            for b in 0..=(order - a) {
                if a + b == 0 {
                    continue;
                }
                let bits = (1u64 << b) - 1;
                w[word_index(a + b, bits)] = (factorial(a) * factorial(b)).recip();
            }
        }

        // log(1 + W) = sum (-1)^{k+1} W^k / k
        let mut log = vec![Rational::zero(); size];
        let mut power = w.clone();
        for k in 1..=order {
            let c = Rational::new(if k % 2 == 1 { 1.into() } else { (-1).into() }, k.into());
            for (acc, p) in log.iter_mut().zip(&power) {
                if !p.is_zero() {
                    *acc += &c * p;
                }
            }
            if k < order {
                power = multiply(&power, &w, order);
            }
        }

        let mut terms = Vec::new();
        for len in 1..=order {
            for bits in 0..(1u64 << len) {
                let c = &log[word_index(len, bits)];
                if !c.is_zero() {
                    let weighted = c / Rational::from_integer(len.into());
                    terms.push(BchTerm {
                        len,
                        bits,
                        coeff: Coeff::new(weighted),
                    });
                }
            }
        }
        Self { order, terms }
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn terms(&self) -> &[BchTerm] {
        &self.terms
    }

    /// `X ⋄ Y` on coefficient slices.
    pub fn evaluate<T: Scalar>(&self, alg: &StratifiedAlgebra, x: &[T], y: &[T]) -> Vec<T> {
        self.evaluate_filtered(alg, x, y, None)
    }

    /// The part of `X ⋄ Y` that is linear in `Y`, i.e. `d/dt (X ⋄ tY)` at 0.
    pub fn linear_in_second<T: Scalar>(&self, alg: &StratifiedAlgebra, x: &[T], y: &[T]) -> Vec<T> {
        self.evaluate_filtered(alg, x, y, Some(1))
    }

    fn evaluate_filtered<T: Scalar>(
        &self,
        alg: &StratifiedAlgebra,
        x: &[T],
        y: &[T],
        y_letters: Option<u32>,
    ) -> Vec<T> {
        let n = alg.dim();
        let order = self.order.min(alg.step().max(1));
        let size = (1usize << (order + 1)) - 1;
        // left-normed brackets of every needed word; None = zero vector
        let mut cache: Vec<Option<Vec<T>>> = vec![None; size];
        let nonzero = |v: &[T]| v.iter().any(|c| !c.is_zero());
        if nonzero(x) {
            cache[word_index(1, 0)] = Some(x.to_vec());
        }
        if nonzero(y) {
            cache[word_index(1, 1)] = Some(y.to_vec());
        }
        for len in 2..=order {
            for bits in 0..(1u64 << len) {
                if let Some(limit) = y_letters {
                    if bits.count_ones() > limit {
                        continue;
                    }
                }
                let prefix = word_index(len - 1, bits >> 1);
                let Some(p) = cache[prefix].as_ref() else {
                    continue;
                };
                let letter = if bits & 1 == 0 { x } else { y };
                let b = alg.bracket_slices(p, letter);
                if nonzero(&b) {
                    cache[word_index(len, bits)] = Some(b);
                }
            }
        }
        let mut out = vec![T::zero(); n];
        for term in &self.terms {
            if term.len > order {
                break;
            }
            if let Some(limit) = y_letters {
                if term.bits.count_ones() != limit {
                    continue;
                }
            }
            if let Some(v) = cache[word_index(term.len, term.bits)].as_ref() {
                let c = T::from_coeff(&term.coeff);
                for (o, vi) in out.iter_mut().zip(v) {
                    if !vi.is_zero() {
                        *o = o.clone() + c.clone() * vi.clone();
                    }
                }
            }
        }
        out
    }
}

fn multiply(p: &[Rational], q: &[Rational], order: usize) -> Vec<Rational> {
    let mut out = vec![Rational::zero(); p.len()];
    for l1 in 1..=order {
        for b1 in 0..(1u64 << l1) {
            let a = &p[word_index(l1, b1)];
            if a.is_zero() {
                continue;
            }
            for l2 in 1..=(order - l1) {
                for b2 in 0..(1u64 << l2) {
                    let b = &q[word_index(l2, b2)];
                    if b.is_zero() {
                        continue;
                    }
                    out[word_index(l1 + l2, (b1 << l2) | b2)] += a * b;
                }
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::rat;

    fn coeff_of(table: &BchTable, word: &str) -> Rational {
        let bits = word
            .chars()
            .fold(0u64, |acc, c| (acc << 1) | u64::from(c == 'Y'));
        table
            .terms()
            .iter()
            .find(|t| t.len == word.len() && t.bits == bits)
            .map(|t| t.coeff.exact.clone())
            .unwrap_or_else(Rational::zero)
    }

    #[test]
    fn low_order_word_coefficients() {
        // log(e^X e^Y) = X + Y + (XY - YX)/2 + ...; Dynkin weights divide by length
        let t = BchTable::new(3);
        assert_eq!(coeff_of(&t, "X"), rat(1, 1));
        assert_eq!(coeff_of(&t, "Y"), rat(1, 1));
        assert_eq!(coeff_of(&t, "XY"), rat(1, 4));
        assert_eq!(coeff_of(&t, "YX"), rat(-1, 4));
        assert_eq!(coeff_of(&t, "XX"), rat(0, 1));
        // degree 3 of log(e^X e^Y): XXY/12 - XYX/6 + YXX/12 + XYY/12 - YXY/6 + YYX/12
        assert_eq!(coeff_of(&t, "XXY"), rat(1, 36));
        assert_eq!(coeff_of(&t, "XYX"), rat(-1, 18));
        assert_eq!(coeff_of(&t, "YYX"), rat(1, 36));
    }
}
