//! Constructive decompositions into horizontal words: commutator words for
//! top-layer brackets, splitting `exp(U+V)` into powers of `exp U` and
//! `exp V`, and exact basis paths to arbitrary group elements.
//!
//! Brackets are right-nested. A *shape* `[a_1, …, a_q]` (outermost first)
//! stands for `[X_{a_1}, [X_{a_2}, …, [X_{a_{q-1}}, X_{a_q}]…]]`. Entry lists
//! passed to [`bracket_word`] are ordered innermost first: entries
//! `E_1, …, E_q` denote `[E_q, …, [E_2, E_1]…]`.

use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::factor::factorize;
use crate::group::GroupPoint;
use crate::lie::{ensure_same, LieVector, StratifiedAlgebra};
use crate::linalg::{self, IndependentSet};
use crate::scalar::Rational;
use crate::word::{HorizontalWord, WordStep};

/// Basis-index shape, outermost entry first.
pub type Shape = Vec<usize>;

/// Expansion of every basis vector above layer 1 in right-nested brackets of
/// `X_1..X_m`.
#[derive(Debug, Clone)]
pub struct BracketTable {
    // shapes[i - 1]: chosen shapes of layer i
    shapes: Vec<Vec<Shape>>,
    // coefficients[k]: X_k = Σ_β coefficients[k][β] · shapes[d_k - 1][β]
    coefficients: Vec<Vec<Rational>>,
}

impl BracketTable {
    pub fn shapes(&self, layer: usize) -> &[Shape] {
        &self.shapes[layer - 1]
    }

    /// Nonzero `(shape, coefficient)` terms of `X_k` (0-based `k`).
    pub fn expansion(&self, alg: &StratifiedAlgebra, k: usize) -> Vec<(Shape, Rational)> {
        let layer = alg.degree(k);
        self.shapes[layer - 1]
            .iter()
            .zip(&self.coefficients[k])
            .filter(|(_, c)| !c.is_zero())
            .map(|(s, c)| (s.clone(), c.clone()))
            .collect()
    }

    pub(crate) fn coefficients(&self, k: usize) -> &[Rational] {
        &self.coefficients[k]
    }
}

/// `[v_1, [v_2, …, [v_{q-1}, v_q]…]]` for coefficient vectors, outermost first.
fn nested<'a>(alg: &StratifiedAlgebra, outermost_first: impl DoubleEndedIterator<Item = &'a [Rational]>) -> Vec<Rational> {
    let mut it = outermost_first.rev();
    let mut acc = it.next().expect("nonempty bracket").to_vec();
    for v in it {
        acc = alg.bracket_slices(v, &acc);
    }
    acc
}

fn unit(n: usize, k: usize) -> Vec<Rational> {
    let mut v = vec![Rational::zero(); n];
    v[k] = Rational::one();
    v
}

/// Shape expansion table, built once per algebra.
///
/// Fails with [`Error::InvalidAlgebra`] when some layer is not generated by
/// brackets with `V_1`.
pub fn basis_bracket_table(alg: &StratifiedAlgebra) -> Result<Arc<BracketTable>> {
    alg.bracket_table_cache().get_or_init(|| build_table(alg).map(Arc::new)).clone()
}

fn build_table(alg: &StratifiedAlgebra) -> Result<BracketTable> {
    let n = alg.dim();
    let m = alg.horizontal_dim();
    let units: Vec<Vec<Rational>> = (0..n).map(|k| unit(n, k)).collect();
    let mut shapes: Vec<Vec<Shape>> = vec![(0..m).map(|a| vec![a]).collect()];
    let mut coefficients = vec![Vec::new(); n];
    for layer in 2..=alg.step() {
        let range = alg.layer_range(layer);
        let mut chosen = Vec::new();
        let mut columns = Vec::new();
        let mut set = IndependentSet::new();
        'search: for a in 0..m {
            for prev in &shapes[layer - 2] {
                let mut shape = vec![a];
                shape.extend(prev);
                let v = nested(alg, shape.iter().map(|&k| units[k].as_slice()));
                if v.iter().enumerate().any(|(k, c)| !c.is_zero() && !range.contains(&k)) {
                    return Err(Error::InvalidAlgebra(format!(
                        "bracket shape {:?} leaves layer {layer}",
                        shape.iter().map(|k| k + 1).collect::<Vec<_>>()
                    )));
                }
                let top = v[range.clone()].to_vec();
                if set.try_insert(&top) {
                    chosen.push(shape);
                    columns.push(top);
                    if chosen.len() == range.len() {
                        break 'search;
                    }
                }
            }
        }
        if chosen.len() < range.len() {
            return Err(Error::InvalidAlgebra(format!(
                "layer {layer} is not generated by [V_1, V_{}]",
                layer - 1
            )));
        }
        for k in range.clone() {
            let target = unit(range.len(), k - range.start);
            coefficients[k] = linalg::solve_in_span(&columns, &target).ok_or_else(|| {
                Error::InvariantViolation(format!("X_{} is not a combination of its layer's shapes", k + 1))
            })?;
        }
        shapes.push(chosen);
    }
    Ok(BracketTable { shapes, coefficients })
}

/// Signed slot sequence of the recursive group commutator on `q` entries:
/// `w(E_1) = E_1`, `w_k = E_k · w_{k-1} · E_k^{-1} · w_{k-1}^{-1}`.
/// Slots index the entries innermost first.
pub(crate) fn commutator_slots(q: usize) -> Vec<(i8, usize)> {
    let mut w = vec![(1i8, 0usize)];
    for k in 1..q {
        let inv: Vec<(i8, usize)> = w.iter().rev().map(|&(s, e)| (-s, e)).collect();
        let mut next = Vec::with_capacity(2 * w.len() + 2);
        next.push((1, k));
        next.extend(w.iter().copied());
        next.push((-1, k));
        next.extend(inv);
        w = next;
    }
    w
}

/// Number of steps of a commutator word on `q` entries: `3·2^{q-1} - 2`.
pub fn commutator_len(q: usize) -> usize {
    3 * (1usize << (q - 1)) - 2
}

/// Word with endpoint `exp([E_q, …, [E_2, E_1]…])` for horizontal entries
/// listed innermost first. The step `q` must equal the step of the algebra,
/// where the higher-order remainder of the group commutator vanishes.
pub fn bracket_word(entries: &[LieVector<Rational>]) -> Result<HorizontalWord<Rational>> {
    let first = entries.first().ok_or(Error::BracketLength { expected: 0, found: 0 })?;
    let alg = first.algebra().clone();
    if entries.len() != alg.step() {
        return Err(Error::BracketLength {
            expected: alg.step(),
            found: entries.len(),
        });
    }
    for (idx, e) in entries.iter().enumerate() {
        ensure_same(&alg, e.algebra())?;
        if !e.is_horizontal() {
            return Err(Error::NonHorizontal { step: idx });
        }
    }
    let steps = commutator_slots(entries.len())
        .into_iter()
        .map(|(sign, slot)| WordStep {
            t: Rational::one(),
            direction: if sign > 0 { entries[slot].clone() } else { entries[slot].neg() },
        })
        .collect();
    HorizontalWord::new(alg, steps)
}

/// Operand label of a splitting step.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Operand {
    U,
    V,
}

/// `exp(U+V) = exp(ρ_1 U_1) ⋯ exp(ρ_N U_N)` with `U_i ∈ {U, V}`.
#[derive(Debug, Clone)]
pub struct Splitting {
    pub word: HorizontalWord<Rational>,
    pub operands: Vec<Operand>,
    pub rho: Vec<Rational>,
    /// `N`, the number of factors
    pub steps: usize,
    pub max_rho: Rational,
    /// `U` and `V` linearly dependent; handled without the induction
    pub degenerate: bool,
}

impl Splitting {
    /// Surrogate for the splitting constant: `max(N, max|ρ_i|)`.
    pub fn constant(&self) -> f64 {
        let rho = crate::scalar::Scalar::to_f64(&self.max_rho);
        (self.steps as f64).max(rho)
    }
}

/// Right-nested letter shapes over `{U, V}` of length `q` whose brackets are
/// independent in the free Lie algebra, in lexicographic order (`U < V`).
/// Their number is the dimension of the degree-`q` part of the free Lie
/// algebra on two generators.
pub fn free_shapes(q: usize) -> Vec<Vec<Operand>> {
    let mut set = IndependentSet::new();
    let mut out = Vec::new();
    for code in 0..(1u64 << q) {
        let letters: Vec<u64> = (0..q).map(|p| (code >> (q - 1 - p)) & 1).collect();
        let poly = free_bracket(&letters);
        let row: Vec<Rational> = poly.iter().map(|&c| Rational::from_integer(BigInt::from(c))).collect();
        if set.try_insert(&row) {
            out.push(
                letters
                    .iter()
                    .map(|&l| if l == 0 { Operand::U } else { Operand::V })
                    .collect(),
            );
        }
    }
    out
}

// right-nested bracket as a polynomial over words of the same length
fn free_bracket(letters: &[u64]) -> Vec<i64> {
    let q = letters.len();
    let mut len = 1;
    let mut poly = vec![0i64; 2];
    poly[letters[q - 1] as usize] = 1;
    for &a in letters[..q - 1].iter().rev() {
        let mut next = vec![0i64; 1 << (len + 1)];
        for (bits, &c) in poly.iter().enumerate() {
            if c == 0 {
                continue;
            }
            let left = ((a as usize) << len) | bits;
            let right = (bits << 1) | a as usize;
            next[left] += c;
            next[right] -= c;
        }
        poly = next;
        len += 1;
    }
    poly
}

/// Splits `exp(U+V)` for horizontal `U, V` exactly.
///
/// Generic inputs go through the induction on the step: split in `g/V_s`,
/// lift, and cancel the central residual `Z ∈ V_s` with commutator words
/// over `{U, V}`. Factors with a zero coefficient are kept (as zero-time
/// steps) so that `N` depends only on the algebra.
pub fn split_sum(u: &LieVector<Rational>, v: &LieVector<Rational>) -> Result<Splitting> {
    ensure_same(u.algebra(), v.algebra())?;
    if !u.is_horizontal() {
        return Err(Error::NonHorizontal { step: 0 });
    }
    if !v.is_horizontal() {
        return Err(Error::NonHorizontal { step: 1 });
    }
    let alg = u.algebra().clone();
    let m = alg.horizontal_dim();
    let degenerate = linalg::rank(&[u.coeffs()[..m].to_vec(), v.coeffs()[..m].to_vec()]) < 2;
    let factors = if degenerate {
        dependent_split(u, v)
    } else {
        split_rec(&alg, u.coeffs(), v.coeffs())?
    };
    let mut word = HorizontalWord::empty(alg.clone());
    for (rho, op) in &factors {
        let dir = match op {
            Operand::U => u.clone(),
            Operand::V => v.clone(),
        };
        word.push(rho.clone(), dir)?;
    }
    let target = GroupPoint::exp(&u.add(v)?);
    if word.endpoint() != target {
        return Err(Error::InvariantViolation("splitting word misses exp(U+V)".into()));
    }
    let max_rho = factors
        .iter()
        .map(|(r, _)| r.abs())
        .fold(Rational::zero(), |a, b| if b > a { b } else { a });
    Ok(Splitting {
        steps: factors.len(),
        operands: factors.iter().map(|(_, o)| *o).collect(),
        rho: factors.into_iter().map(|(r, _)| r).collect(),
        word,
        max_rho,
        degenerate,
    })
}

fn dependent_split(u: &LieVector<Rational>, v: &LieVector<Rational>) -> Vec<(Rational, Operand)> {
    if u.is_zero() && v.is_zero() {
        return Vec::new();
    }
    if u.is_zero() {
        return vec![(Rational::one(), Operand::V)];
    }
    // V = κU
    let pivot = u.coeffs().iter().position(|c| !c.is_zero()).expect("U is nonzero");
    let kappa = &v.coeffs()[pivot] / &u.coeffs()[pivot];
    vec![(Rational::one() + kappa, Operand::U)]
}

fn split_rec(alg: &Arc<StratifiedAlgebra>, u: &[Rational], v: &[Rational]) -> Result<Vec<(Rational, Operand)>> {
    let s = alg.step();
    if s == 1 {
        return Ok(vec![(Rational::one(), Operand::U), (Rational::one(), Operand::V)]);
    }
    let q = alg.quotient().expect("step >= 2 has a quotient");
    let nq = q.dim();
    let mut factors = split_rec(&q, &u[..nq], &v[..nq])?;

    let table = alg.bch_table();
    let mut g = vec![Rational::zero(); alg.dim()];
    for (rho, op) in &factors {
        if rho.is_zero() {
            continue;
        }
        let base = if *op == Operand::U { u } else { v };
        let step: Vec<Rational> = base.iter().map(|c| rho * c).collect();
        g = table.evaluate(alg, &g, &step);
    }
    let z: Vec<Rational> = g
        .iter()
        .zip(u.iter().zip(v))
        .map(|(gi, (ui, vi))| gi - ui - vi)
        .collect();
    let top = alg.layer_range(s);
    if z[..top.start].iter().any(|c| !c.is_zero()) {
        return Err(Error::InvariantViolation(format!(
            "lifted splitting residual leaves layer {s}"
        )));
    }

    let shapes = free_shapes(s);
    let columns: Vec<Vec<Rational>> = shapes
        .iter()
        .map(|shape| {
            let full = nested(
                alg,
                shape.iter().map(|op| if *op == Operand::U { u } else { v }),
            );
            full[top.clone()].to_vec()
        })
        .collect();
    let eta = linalg::solve_in_span(&columns, &z[top.clone()]).ok_or_else(|| {
        Error::InvariantViolation("splitting residual is not spanned by brackets of U and V".into())
    })?;

    // exp(U+V) = exp(U+V+Z) exp(-Z), and exp(-Z) = Π exp(-η_β B_β) since Z is central
    let slots = commutator_slots(s);
    for (shape, eta) in shapes.iter().zip(eta) {
        let c = -eta;
        for &(sign, slot) in &slots {
            // slot 0 is innermost, i.e. the last letter of the shape
            let op = shape[s - 1 - slot];
            let t = if c.is_zero() {
                Rational::zero()
            } else if slot == s - 1 {
                &c * Rational::from_integer(BigInt::from(sign))
            } else {
                Rational::from_integer(BigInt::from(sign))
            };
            factors.push((t, op));
        }
    }
    Ok(factors)
}

/// Exact basis path to a group element.
#[derive(Debug, Clone)]
pub struct PathDecomposition {
    pub word: HorizontalWord<Rational>,
    /// `Σ t_j`
    pub total_time: Rational,
    pub hom_norm: f64,
    /// `Σ t_j / ‖h‖` (0 for the identity)
    pub ratio: f64,
    /// dilation factor mapping `h` to the normalized element that was peeled
    pub scale: Rational,
    /// `M`, the number of steps
    pub steps: usize,
    /// construction bound on `M` for this algebra
    pub step_bound: usize,
}

/// Upper bound on the number of steps emitted by [`path_decompose`].
pub fn path_step_bound(alg: &StratifiedAlgebra) -> usize {
    (1..=alg.step())
        .map(|i| alg.layer_dims()[i - 1] * if i == 1 { 1 } else { commutator_len(i) })
        .sum()
}

/// `h = exp(t_1 E_1) ⋯ exp(t_M E_M)` with `t_j ≥ 0` and `E_j ∈ {±X_1, …, ±X_m}`.
///
/// The element is first dilated to a canonical representative of its orbit
/// under rational dilations, so the construction commutes exactly with
/// `δ_λ` for rational `λ > 0`.
pub fn path_decompose(h: &GroupPoint<Rational>) -> Result<PathDecomposition> {
    let alg = h.algebra().clone();
    let bound = path_step_bound(&alg);
    if h.is_identity() {
        return Ok(PathDecomposition {
            word: HorizontalWord::empty(alg),
            total_time: Rational::zero(),
            hom_norm: 0.0,
            ratio: 0.0,
            scale: Rational::one(),
            steps: 0,
            step_bound: bound,
        });
    }
    let scale = canonical_scale(h);
    let word = decompose_scaled(h, &scale)?;
    if word.endpoint() != *h {
        return Err(Error::InvariantViolation("path word misses its target".into()));
    }
    let total_time = word.total_time();
    let hom_norm = h.hom_norm();
    Ok(PathDecomposition {
        ratio: crate::scalar::Scalar::to_f64(&total_time) / hom_norm,
        steps: word.len(),
        word,
        total_time,
        hom_norm,
        scale,
        step_bound: bound,
    })
}

/// Peels `δ_scale(h)` layer by layer and dilates the word back.
pub(crate) fn decompose_scaled(h: &GroupPoint<Rational>, scale: &Rational) -> Result<HorizontalWord<Rational>> {
    let alg = h.algebra().clone();
    let n = alg.dim();
    let m = alg.horizontal_dim();
    let target = h.dilate(scale)?;
    let table = basis_bracket_table(&alg)?;
    let units: Vec<LieVector<Rational>> = (0..m)
        .map(|a| LieVector::basis(alg.clone(), a))
        .collect::<Result<_>>()?;

    let mut word = HorizontalWord::empty(alg.clone());
    for (a, c) in target.coords()[..m].iter().enumerate() {
        push_signed(&mut word, c.clone(), &units[a])?;
    }
    let mut reached = word.endpoint();
    for layer in 2..=alg.step() {
        let residual = reached.relative(&target)?;
        let range = alg.layer_range(layer);
        if residual.coords()[..range.start].iter().any(|c| !c.is_zero()) {
            return Err(Error::InvariantViolation(format!("residual below layer {layer} is nonzero")));
        }
        let shapes = table.shapes(layer);
        let mut eta = vec![Rational::zero(); shapes.len()];
        for k in range.clone() {
            let y = &residual.coords()[k];
            if y.is_zero() {
                continue;
            }
            for (e, c) in eta.iter_mut().zip(table.coefficients(k)) {
                *e += y * c;
            }
        }
        let slots = commutator_slots(layer);
        let mut piece = HorizontalWord::empty(alg.clone());
        for (shape, eta) in shapes.iter().zip(eta) {
            if eta.is_zero() {
                continue;
            }
            for &(sign, slot) in &slots {
                let a = shape[layer - 1 - slot];
                let sign = Rational::from_integer(BigInt::from(sign));
                let t = if slot == layer - 1 { &eta * sign } else { sign };
                push_signed(&mut piece, t, &units[a])?;
            }
        }
        reached = piece.flow(&reached)?;
        word.extend(piece);
    }
    if reached != target {
        return Err(Error::InvariantViolation("normalized path misses its target".into()));
    }
    debug_assert_eq!(reached.coords().len(), n);
    word.dilate(&scale.recip())
}

// appends exp(t X_a) as (|t|, ±X_a), skipping t = 0
fn push_signed(word: &mut HorizontalWord<Rational>, t: Rational, unit: &LieVector<Rational>) -> Result<()> {
    if t.is_zero() {
        return Ok(());
    }
    if t.is_negative() {
        word.push(-t, unit.neg())
    } else {
        word.push(t, unit.clone())
    }
}

/// Rational `λ > 0` such that `δ_λ h` depends only on the orbit of `h` under
/// rational dilations, and its homogeneous size lies in `[1, 2)`.
///
/// The distinguished coordinate `k` maximizes `|h_k|^{1/d_k}`; with
/// `i = d_k`, `λ^i |h_k|` is the `i`-th-power-free part of `|h_k|`, further
/// divided by the largest power `2^{ij}` not exceeding it.
pub fn canonical_scale(h: &GroupPoint<Rational>) -> Rational {
    let alg = h.algebra();
    let coords = h.coords();
    let mut best: Option<usize> = None;
    for (k, c) in coords.iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        best = match best {
            None => Some(k),
            Some(b) => {
                // |h_k|^{1/d_k} > |h_b|^{1/d_b}  ⇔  |h_k|^{d_b} > |h_b|^{d_k}
                let lhs = num_traits::pow(c.abs(), alg.degree(b));
                let rhs = num_traits::pow(coords[b].abs(), alg.degree(k));
                if lhs > rhs {
                    Some(k)
                } else {
                    Some(b)
                }
            }
        };
    }
    let Some(k) = best else {
        return Rational::one();
    };
    let i = alg.degree(k) as i64;
    let r = coords[k].abs();
    let mut lambda = Rational::one();
    let mut free_part = BigInt::one();
    for (value, sign) in [(r.numer().clone(), 1i64), (r.denom().clone(), -1i64)] {
        let Some(mag) = value.to_biguint() else { continue };
        for (p, e) in factorize(&mag) {
            let e = sign * i64::from(e);
            let reduced = e.mod_floor(&i);
            let shift = (reduced - e) / i;
            let p = BigInt::from(p);
            free_part *= num_traits::pow(p.clone(), reduced as usize);
            let factor = Rational::from_integer(num_traits::pow(p, shift.unsigned_abs() as usize));
            if shift >= 0 {
                lambda *= factor;
            } else {
                lambda /= factor;
            }
        }
    }
    let j = (free_part.bits().saturating_sub(1) / i as u64) as usize;
    lambda / Rational::from_integer(num_traits::pow(BigInt::from(2), j))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lie::{abelian, engel, heisenberg};
    use crate::scalar::rat;

    fn arc(a: Result<StratifiedAlgebra>) -> Arc<StratifiedAlgebra> {
        Arc::new(a.unwrap())
    }

    fn x(alg: &Arc<StratifiedAlgebra>, j: usize) -> LieVector<Rational> {
        LieVector::basis(alg.clone(), j).unwrap()
    }

    fn coords(v: &[i64]) -> Vec<Rational> {
        v.iter().map(|&c| rat(c, 1)).collect()
    }

    #[test]
    fn commutator_counts() {
        for q in 1..6 {
            assert_eq!(commutator_slots(q).len(), commutator_len(q));
        }
        assert_eq!(commutator_slots(2), vec![(1, 1), (1, 0), (-1, 1), (-1, 0)]);
    }

    #[test]
    fn heisenberg_bracket_word() {
        let h = arc(heisenberg(1));
        // entries innermost first: [X1, X2]
        let w = bracket_word(&[x(&h, 1), x(&h, 0)]).unwrap();
        assert_eq!(w.len(), 4);
        assert_eq!(w.endpoint().coords(), coords(&[0, 0, 1]).as_slice());
        let scaled = bracket_word(&[x(&h, 1), x(&h, 0).scale(&rat(3, 2))]).unwrap();
        assert_eq!(scaled.endpoint().coords(), &[rat(0, 1), rat(0, 1), rat(3, 2)]);
        assert!(matches!(bracket_word(&[x(&h, 0)]), Err(Error::BracketLength { expected: 2, found: 1 })));
        assert!(matches!(bracket_word(&[x(&h, 2), x(&h, 0)]), Err(Error::NonHorizontal { step: 0 })));
    }

    #[test]
    fn engel_bracket_word() {
        let e = arc(engel());
        let w = bracket_word(&[x(&e, 1), x(&e, 0), x(&e, 0)]).unwrap();
        assert_eq!(w.len(), 10);
        assert_eq!(w.endpoint().coords(), coords(&[0, 0, 0, 1]).as_slice());
    }

    #[test]
    fn tables() {
        let h = arc(heisenberg(1));
        let t = basis_bracket_table(&h).unwrap();
        assert_eq!(t.expansion(&h, 2), vec![(vec![0, 1], rat(1, 1))]);
        let e = arc(engel());
        let t = basis_bracket_table(&e).unwrap();
        assert_eq!(t.expansion(&e, 3), vec![(vec![0, 0, 1], rat(1, 1))]);
        let a = arc(abelian(3));
        let t = basis_bracket_table(&a).unwrap();
        assert_eq!(t.shapes(1).len(), 3);
        let flat = arc(StratifiedAlgebra::new(vec![2, 1], vec![]));
        assert!(matches!(basis_bracket_table(&flat), Err(Error::InvalidAlgebra(_))));
    }

    #[test]
    fn free_shape_counts() {
        // dimensions of the free Lie algebra on two generators: 2, 1, 2, 3, 6
        let dims: Vec<usize> = (1..=5).map(|q| free_shapes(q).len()).collect();
        assert_eq!(dims, vec![2, 1, 2, 3, 6]);
        assert_eq!(free_shapes(2), vec![vec![Operand::U, Operand::V]]);
    }

    #[test]
    fn heisenberg_split() {
        let h = arc(heisenberg(1));
        let sp = split_sum(&x(&h, 0), &x(&h, 1)).unwrap();
        assert_eq!(
            sp.rho,
            vec![rat(1, 1), rat(1, 1), rat(-1, 2), rat(1, 1), rat(1, 2), rat(-1, 1)]
        );
        assert_eq!(
            sp.operands,
            vec![Operand::U, Operand::V, Operand::U, Operand::V, Operand::U, Operand::V]
        );
        assert_eq!(sp.word.endpoint().coords(), coords(&[1, 1, 0]).as_slice());
        assert_eq!(sp.max_rho, rat(1, 1));
    }

    #[test]
    fn degenerate_and_abelian_splits() {
        let h = arc(heisenberg(1));
        let u = x(&h, 0).scale(&rat(2, 3));
        let sp = split_sum(&u, &u).unwrap();
        assert!(sp.degenerate);
        assert_eq!(sp.rho, vec![rat(2, 1)]);
        let a = arc(abelian(2));
        let sp = split_sum(&x(&a, 0), &x(&a, 1)).unwrap();
        assert_eq!(sp.rho, vec![rat(1, 1), rat(1, 1)]);
        let zero = LieVector::zero(h.clone());
        assert_eq!(split_sum(&zero, &zero).unwrap().steps, 0);
        assert_eq!(split_sum(&zero, &x(&h, 1)).unwrap().rho, vec![rat(1, 1)]);
    }

    #[test]
    fn engel_split_is_exact() {
        let e = arc(engel());
        let u = LieVector::horizontal(e.clone(), &[rat(3, 2), rat(-1, 5)]).unwrap();
        let v = LieVector::horizontal(e.clone(), &[rat(2, 7), rat(4, 1)]).unwrap();
        let sp = split_sum(&u, &v).unwrap();
        assert_eq!(sp.steps, 6 + 2 * 10);
    }

    #[test]
    fn path_examples() {
        let h = arc(heisenberg(1));
        let p = GroupPoint::new(h.clone(), vec![rat(5, 2), rat(0, 1), rat(0, 1)]).unwrap();
        let d = path_decompose(&p).unwrap();
        assert_eq!(d.word.len(), 1);
        assert_eq!(d.word.steps()[0].t, rat(5, 2));
        assert_eq!(d.word.steps()[0].direction, x(&h, 0));

        let v = GroupPoint::new(h.clone(), coords(&[0, 0, 1])).unwrap();
        let d = path_decompose(&v).unwrap();
        assert_eq!(d.total_time, rat(4, 1));
        assert_eq!(d.ratio, 4.0);
        let dirs: Vec<Vec<Rational>> = d.word.steps().iter().map(|s| s.direction.coeffs()[..2].to_vec()).collect();
        assert_eq!(dirs, vec![coords(&[1, 0]), coords(&[0, 1]), coords(&[-1, 0]), coords(&[0, -1])]);

        for (num, den) in [(1, 2), (2, 1), (5, 1)] {
            let r = rat(num, den);
            let hr = GroupPoint::new(h.clone(), vec![rat(0, 1), rat(0, 1), &r * &r]).unwrap();
            let d = path_decompose(&hr).unwrap();
            assert_eq!(d.total_time, rat(4, 1) * &r);
        }
        assert_eq!(path_decompose(&GroupPoint::identity(h)).unwrap().steps, 0);
    }

    #[test]
    fn canonical_scale_is_orbit_invariant() {
        let e = arc(engel());
        let p = GroupPoint::new(e.clone(), vec![rat(1, 3), rat(-2, 7), rat(5, 11), rat(12, 1)]).unwrap();
        let base = p.dilate(&canonical_scale(&p)).unwrap();
        for lambda in [rat(1, 2), rat(3, 1), rat(7, 5)] {
            let q = p.dilate(&lambda).unwrap();
            assert_eq!(q.dilate(&canonical_scale(&q)).unwrap(), base);
        }
    }
}
