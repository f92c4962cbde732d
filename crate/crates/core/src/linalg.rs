//! Exact linear algebra over the rationals.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::scalar::Rational;

/// Rank of a set of row vectors, by fraction-free (Bareiss) elimination
/// after clearing denominators row by row.
pub fn rank(rows: &[Vec<Rational>]) -> usize {
    let Some(width) = rows.first().map(Vec::len) else {
        return 0;
    };
    let mut m: Vec<Vec<BigInt>> = rows.iter().map(|r| integer_row(r)).collect();
    let height = m.len();
    let mut rank = 0;
    let mut prev_pivot = BigInt::one();
    for col in 0..width {
        if rank == height {
            break;
        }
        let Some(p) = (rank..height).find(|&r| !m[r][col].is_zero()) else {
            continue;
        };
        m.swap(rank, p);
        let pivot = m[rank][col].clone();
        for r in rank + 1..height {
            let factor = m[r][col].clone();
            for c in col..width {
                let v = (&pivot * &m[r][c] - &factor * &m[rank][c]) / &prev_pivot;
                m[r][c] = v;
            }
        }
        prev_pivot = pivot;
        rank += 1;
    }
    rank
}

fn integer_row(row: &[Rational]) -> Vec<BigInt> {
    let lcm = row
        .iter()
        .fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
    row.iter()
        .map(|x| x.numer() * (&lcm / x.denom()))
        .collect()
}

/// Incrementally built set of linearly independent vectors, kept in
/// row-echelon form for membership tests.
#[derive(Debug, Clone, Default)]
pub struct IndependentSet {
    // (pivot column, normalized row with 1 at the pivot)
    echelon: Vec<(usize, Vec<Rational>)>,
}

impl IndependentSet {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn len(&self) -> usize {
        self.echelon.len()
    }

    pub fn is_empty(&self) -> bool {
        self.echelon.is_empty()
    }

    /// Adds `v` if it is independent of the vectors already present.
    pub fn try_insert(&mut self, v: &[Rational]) -> bool {
        let mut r = v.to_vec();
        for (pivot, row) in &self.echelon {
            if !r[*pivot].is_zero() {
                let f = r[*pivot].clone();
                for (x, y) in r.iter_mut().zip(row) {
                    *x -= &f * y;
                }
            }
        }
        let Some(pivot) = r.iter().position(|x| !x.is_zero()) else {
            return false;
        };
        let inv = r[pivot].recip();
        for x in r.iter_mut() {
            *x *= &inv;
        }
        self.echelon.push((pivot, r));
        true
    }
}

/// Solves `sum_j x_j * columns[j] = target` for independent `columns`.
/// Returns `None` when the target is outside their span.
pub fn solve_in_span(columns: &[Vec<Rational>], target: &[Rational]) -> Option<Vec<Rational>> {
    let rows = target.len();
    let cols = columns.len();
    if columns.iter().any(|c| c.len() != rows) {
        return None;
    }
    // augmented matrix, one row per coordinate
    let mut a: Vec<Vec<Rational>> = (0..rows)
        .map(|i| {
            let mut row: Vec<Rational> = columns.iter().map(|c| c[i].clone()).collect();
            row.push(target[i].clone());
            row
        })
        .collect();
    let mut pivots = Vec::with_capacity(cols);
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..rows).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        a.swap(r, p);
        let inv = a[r][c].recip();
        for x in a[r].iter_mut() {
            *x *= &inv;
        }
        for i in 0..rows {
            if i != r && !a[i][c].is_zero() {
                let f = a[i][c].clone();
                let (src, dst) = if i < r {
                    let (lo, hi) = a.split_at_mut(r);
                    (&hi[0], &mut lo[i])
                } else {
                    let (lo, hi) = a.split_at_mut(i);
                    (&lo[r], &mut hi[0])
                };
                for (x, y) in dst.iter_mut().zip(src.iter()) {
                    *x -= &f * y;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    // inconsistent rows
    if a[r..].iter().any(|row| !row[cols].is_zero()) {
        return None;
    }
    let mut x = vec![Rational::zero(); cols];
    for (row, &c) in pivots.iter().enumerate() {
        x[c] = a[row][cols].clone();
    }
    // free columns (dependent input) default to zero; verify
    let ok = (0..rows).all(|i| {
        let s: Rational = columns
            .iter()
            .zip(&x)
            .map(|(col, xi)| &col[i] * xi)
            .fold(Rational::zero(), |acc, v| acc + v);
        s == target[i]
    });
    ok.then_some(x)
}

pub fn max_abs(values: &[Rational]) -> Rational {
    values
        .iter()
        .map(|v| v.abs())
        .fold(Rational::zero(), |a, b| if b > a { b } else { a })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::rat;

    fn row(v: &[i64]) -> Vec<Rational> {
        v.iter().map(|&x| rat(x, 1)).collect()
    }

    #[test]
    fn rank_of_dependent_rows() {
        let rows = vec![row(&[1, 2, 3]), row(&[2, 4, 6]), row(&[0, 1, 1])];
        assert_eq!(rank(&rows), 2);
        let rows = vec![vec![rat(1, 2), rat(1, 3)], vec![rat(3, 2), rat(1, 1)]];
        assert_eq!(rank(&rows), 1);
        assert_eq!(rank(&[]), 0);
    }

    #[test]
    fn independent_set_rejects_combinations() {
        let mut s = IndependentSet::new();
        assert!(s.try_insert(&row(&[1, 1, 0])));
        assert!(s.try_insert(&row(&[0, 1, 1])));
        assert!(!s.try_insert(&row(&[1, 2, 1])));
        assert!(!s.try_insert(&row(&[0, 0, 0])));
        assert!(s.try_insert(&row(&[0, 0, 1])));
        assert_eq!(s.len(), 3);
    }

    #[test]
    fn solves_and_detects_inconsistency() {
        let cols = vec![row(&[1, 0, 1]), row(&[0, 2, 0])];
        let x = solve_in_span(&cols, &row(&[3, 4, 3])).unwrap();
        assert_eq!(x, vec![rat(3, 1), rat(2, 1)]);
        assert!(solve_in_span(&cols, &row(&[3, 4, 2])).is_none());
    }
}
