//! Stratified nilpotent Lie algebras given by structure constants in an
//! adapted basis, bracket arithmetic, axiom validation and presets.
//!
//! Basis indices are 0-based in the Rust API. Config files and validation
//! witnesses use the 1-based numbering `X_1..X_n`.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::{Arc, OnceLock};

use num_traits::{Signed, Zero};
use serde::Serialize;

use crate::bch::BchTable;
use crate::decompose::BracketTable;
use crate::error::{Error, Result};
use crate::linalg;
use crate::scalar::{rat, Coeff, Rational, Scalar};

/// `g = V_1 ⊕ … ⊕ V_s` with `[X_i, X_j] = Σ_k c_ij^k X_k`.
pub struct StratifiedAlgebra {
    layer_dims: Vec<usize>,
    cumulative: Vec<usize>,
    degrees: Vec<usize>,
    constants: BTreeMap<(usize, usize, usize), Rational>,
    // table[i * n + j] = [(k, c_ij^k)]
    table: Vec<Vec<(usize, Coeff)>>,
    bch: OnceLock<Arc<BchTable>>,
    quotient: OnceLock<Option<Arc<StratifiedAlgebra>>>,
    brackets: OnceLock<Result<Arc<BracketTable>>>,
}

impl fmt::Debug for StratifiedAlgebra {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("StratifiedAlgebra")
            .field("layer_dims", &self.layer_dims)
            .field("constants", &self.constants.len())
            .finish()
    }
}

impl PartialEq for StratifiedAlgebra {
    fn eq(&self, other: &Self) -> bool {
        self.layer_dims == other.layer_dims && self.constants == other.constants
    }
}

impl Eq for StratifiedAlgebra {}

impl Clone for StratifiedAlgebra {
    fn clone(&self) -> Self {
        Self::build(self.layer_dims.clone(), self.constants.clone())
    }
}

impl StratifiedAlgebra {
    /// Builds an algebra from `(i, j, k, c)` entries meaning `c_ij^k = c`
    /// (0-based indices).
    ///
    /// An entry whose mirror `(j, i, k)` is absent also defines the mirror as
    /// `-c`. Entries given in both orders are kept verbatim, so inconsistent
    /// tables survive construction and are reported by [`validate`].
    pub fn new(layer_dims: Vec<usize>, entries: Vec<(usize, usize, usize, Rational)>) -> Result<Self> {
        if layer_dims.is_empty() {
            return Err(Error::InvalidAlgebra("at least one layer is required".into()));
        }
        if let Some(pos) = layer_dims.iter().position(|&m| m == 0) {
            return Err(Error::InvalidAlgebra(format!("layer {} has dimension 0", pos + 1)));
        }
        let n: usize = layer_dims.iter().sum();
        let mut explicit: BTreeMap<(usize, usize, usize), Rational> = BTreeMap::new();
        for (i, j, k, c) in entries {
            for idx in [i, j, k] {
                if idx >= n {
                    return Err(Error::IndexOutOfRange { index: idx, bound: n });
                }
            }
            if let Some(prev) = explicit.get(&(i, j, k)) {
                if *prev != c {
                    return Err(Error::InvalidAlgebra(format!(
                        "conflicting values for c_{{{},{}}}^{}",
                        i + 1,
                        j + 1,
                        k + 1
                    )));
                }
            }
            explicit.insert((i, j, k), c);
        }
        let mut constants = explicit.clone();
        for ((i, j, k), c) in &explicit {
            if !explicit.contains_key(&(*j, *i, *k)) {
                constants.insert((*j, *i, *k), -c.clone());
            }
        }
        constants.retain(|_, c| !c.is_zero());
        Ok(Self::build(layer_dims, constants))
    }

    fn build(layer_dims: Vec<usize>, constants: BTreeMap<(usize, usize, usize), Rational>) -> Self {
        let mut cumulative = vec![0];
        for m in &layer_dims {
            cumulative.push(cumulative.last().unwrap() + m);
        }
        let n = *cumulative.last().unwrap();
        let mut degrees = Vec::with_capacity(n);
        for (layer, m) in layer_dims.iter().enumerate() {
            degrees.extend(std::iter::repeat_n(layer + 1, *m));
        }
        let mut table = vec![Vec::new(); n * n];
        for ((i, j, k), c) in &constants {
            table[i * n + j].push((*k, Coeff::new(c.clone())));
        }
        Self {
            layer_dims,
            cumulative,
            degrees,
            constants,
            table,
            bch: OnceLock::new(),
            quotient: OnceLock::new(),
            brackets: OnceLock::new(),
        }
    }

    pub fn step(&self) -> usize {
        self.layer_dims.len()
    }

    pub fn dim(&self) -> usize {
        *self.cumulative.last().unwrap()
    }

    /// `m = m_1`, the number of horizontal generators.
    pub fn horizontal_dim(&self) -> usize {
        self.layer_dims[0]
    }

    pub fn layer_dims(&self) -> &[usize] {
        &self.layer_dims
    }

    /// `h_0 = 0, h_i = m_1 + … + m_i`.
    pub fn cumulative(&self) -> &[usize] {
        &self.cumulative
    }

    /// Homogeneous degree `d_j` (the 1-based layer) of basis index `j`.
    pub fn degree(&self, j: usize) -> usize {
        self.degrees[j]
    }

    pub fn degrees(&self) -> &[usize] {
        &self.degrees
    }

    /// Basis indices of layer `i` (1-based layer number).
    pub fn layer_range(&self, i: usize) -> std::ops::Range<usize> {
        self.cumulative[i - 1]..self.cumulative[i]
    }

    /// Nonzero structure constants, keyed by 0-based `(i, j, k)`.
    pub fn constants(&self) -> &BTreeMap<(usize, usize, usize), Rational> {
        &self.constants
    }

    pub fn bracket_terms(&self, i: usize, j: usize) -> &[(usize, Coeff)] {
        &self.table[i * self.dim() + j]
    }

    /// Bracket of raw coefficient slices.
    pub fn bracket_slices<T: Scalar>(&self, x: &[T], y: &[T]) -> Vec<T> {
        let n = self.dim();
        let mut out = vec![T::zero(); n];
        for (i, xi) in x.iter().enumerate() {
            if xi.is_zero() {
                continue;
            }
            for (j, yj) in y.iter().enumerate() {
                if yj.is_zero() {
                    continue;
                }
                let terms = &self.table[i * n + j];
                if terms.is_empty() {
                    continue;
                }
                let xy = xi.clone() * yj.clone();
                for (k, c) in terms {
                    out[*k] = out[*k].clone() + T::from_coeff(c) * xy.clone();
                }
            }
        }
        out
    }

    /// The exact BCH series for this step, built once.
    pub fn bch_table(&self) -> &BchTable {
        self.bch.get_or_init(|| Arc::new(BchTable::new(self.step())))
    }

    /// `g / V_s`: the same basis without the top layer, step `s - 1`.
    /// `None` for abelian algebras.
    pub fn quotient(&self) -> Option<Arc<StratifiedAlgebra>> {
        self.quotient
            .get_or_init(|| {
                let s = self.step();
                if s == 1 {
                    return None;
                }
                let keep = self.cumulative[s - 1];
                let constants = self
                    .constants
                    .iter()
                    .filter(|((i, j, k), _)| *i < keep && *j < keep && *k < keep)
                    .map(|(key, c)| (*key, c.clone()))
                    .collect();
                Some(Arc::new(Self::build(self.layer_dims[..s - 1].to_vec(), constants)))
            })
            .clone()
    }

    pub(crate) fn bracket_table_cache(&self) -> &OnceLock<Result<Arc<BracketTable>>> {
        &self.brackets
    }

    /// Entries in 1-based `[i, j, k, "p/q"]` form, as written to config files.
    pub fn bracket_entries(&self) -> Vec<(usize, usize, usize, Rational)> {
        self.constants
            .iter()
            .map(|((i, j, k), c)| (i + 1, j + 1, k + 1, c.clone()))
            .collect()
    }
}

/// Element of the Lie algebra in the adapted basis.
#[derive(Debug, Clone)]
pub struct LieVector<T: Scalar> {
    algebra: Arc<StratifiedAlgebra>,
    coeffs: Vec<T>,
}

impl<T: Scalar> PartialEq for LieVector<T> {
    fn eq(&self, other: &Self) -> bool {
        same_algebra(&self.algebra, &other.algebra) && self.coeffs == other.coeffs
    }
}

pub(crate) fn same_algebra(a: &Arc<StratifiedAlgebra>, b: &Arc<StratifiedAlgebra>) -> bool {
    Arc::ptr_eq(a, b) || **a == **b
}

pub(crate) fn ensure_same(a: &Arc<StratifiedAlgebra>, b: &Arc<StratifiedAlgebra>) -> Result<()> {
    if same_algebra(a, b) {
        Ok(())
    } else {
        Err(Error::AlgebraMismatch)
    }
}

impl<T: Scalar> LieVector<T> {
    pub fn new(algebra: Arc<StratifiedAlgebra>, coeffs: Vec<T>) -> Result<Self> {
        if coeffs.len() != algebra.dim() {
            return Err(Error::DimensionMismatch {
                expected: algebra.dim(),
                found: coeffs.len(),
            });
        }
        Ok(Self { algebra, coeffs })
    }

    pub fn zero(algebra: Arc<StratifiedAlgebra>) -> Self {
        let n = algebra.dim();
        Self {
            algebra,
            coeffs: vec![T::zero(); n],
        }
    }

    /// Basis vector `X_{j+1}`.
    pub fn basis(algebra: Arc<StratifiedAlgebra>, j: usize) -> Result<Self> {
        let n = algebra.dim();
        if j >= n {
            return Err(Error::IndexOutOfRange { index: j, bound: n });
        }
        let mut v = Self::zero(algebra);
        v.coeffs[j] = T::one();
        Ok(v)
    }

    /// A `V_1` vector from its `m` horizontal coefficients.
    pub fn horizontal(algebra: Arc<StratifiedAlgebra>, top: &[T]) -> Result<Self> {
        let m = algebra.horizontal_dim();
        if top.len() != m {
            return Err(Error::DimensionMismatch {
                expected: m,
                found: top.len(),
            });
        }
        let mut v = Self::zero(algebra);
        v.coeffs[..m].clone_from_slice(top);
        Ok(v)
    }

    pub fn algebra(&self) -> &Arc<StratifiedAlgebra> {
        &self.algebra
    }

    pub fn coeffs(&self) -> &[T] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<T> {
        self.coeffs
    }

    /// Coefficients of layer `i` (1-based).
    pub fn layer(&self, i: usize) -> &[T] {
        &self.coeffs[self.algebra.layer_range(i)]
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    /// `true` when every component outside `V_1` vanishes.
    pub fn is_horizontal(&self) -> bool {
        let m = self.algebra.horizontal_dim();
        self.coeffs[m..].iter().all(Zero::is_zero)
    }

    /// `ω(U)`: Euclidean norm of the first-layer coefficients.
    pub fn omega(&self) -> f64 {
        self.layer(1)
            .iter()
            .map(|c| {
                let v = c.to_f64();
                v * v
            })
            .sum::<f64>()
            .sqrt()
    }

    pub fn bracket(&self, other: &Self) -> Result<Self> {
        ensure_same(&self.algebra, &other.algebra)?;
        Ok(Self {
            algebra: self.algebra.clone(),
            coeffs: self.algebra.bracket_slices(&self.coeffs, &other.coeffs),
        })
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        ensure_same(&self.algebra, &other.algebra)?;
        Ok(self.with_coeffs(
            self.coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(a, b)| a.clone() + b.clone())
                .collect(),
        ))
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        ensure_same(&self.algebra, &other.algebra)?;
        Ok(self.with_coeffs(
            self.coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(a, b)| a.clone() - b.clone())
                .collect(),
        ))
    }

    pub fn scale(&self, s: &T) -> Self {
        self.with_coeffs(self.coeffs.iter().map(|c| s.clone() * c.clone()).collect())
    }

    pub fn neg(&self) -> Self {
        self.with_coeffs(self.coeffs.iter().map(|c| -c.clone()).collect())
    }

    /// `X ⋄ Y = log(exp X exp Y)`.
    pub fn bch(&self, other: &Self) -> Result<Self> {
        ensure_same(&self.algebra, &other.algebra)?;
        let z = self
            .algebra
            .bch_table()
            .evaluate(&self.algebra, &self.coeffs, &other.coeffs);
        Ok(self.with_coeffs(z))
    }

    pub fn to_f64(&self) -> LieVector<f64> {
        LieVector {
            algebra: self.algebra.clone(),
            coeffs: self.coeffs.iter().map(Scalar::to_f64).collect(),
        }
    }

    pub(crate) fn with_coeffs(&self, coeffs: Vec<T>) -> Self {
        Self {
            algebra: self.algebra.clone(),
            coeffs,
        }
    }
}

/// Which stratification axiom a check refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Axiom {
    Antisymmetry,
    Jacobi,
    Grading,
    Generation,
}

/// Witness of a failed axiom, 1-based.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Witness {
    Triple([usize; 3]),
    /// layer that is not generated by `[V_1, V_{i-1}]`
    Layer(usize),
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AxiomCheck {
    pub axiom: Axiom,
    pub passed: bool,
    pub witness: Option<Witness>,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ValidationReport {
    pub checks: Vec<AxiomCheck>,
}

impl ValidationReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn check(&self, axiom: Axiom) -> &AxiomCheck {
        self.checks.iter().find(|c| c.axiom == axiom).expect("every axiom is checked")
    }
}

/// Checks antisymmetry, Jacobi, grading and generation exactly.
pub fn validate(alg: &StratifiedAlgebra) -> ValidationReport {
    ValidationReport {
        checks: vec![
            check_antisymmetry(alg),
            check_jacobi(alg),
            check_grading(alg),
            check_generation(alg),
        ],
    }
}

fn triple(i: usize, j: usize, k: usize) -> Option<Witness> {
    Some(Witness::Triple([i + 1, j + 1, k + 1]))
}

fn pass(axiom: Axiom, detail: impl Into<String>) -> AxiomCheck {
    AxiomCheck {
        axiom,
        passed: true,
        witness: None,
        detail: detail.into(),
    }
}

fn check_antisymmetry(alg: &StratifiedAlgebra) -> AxiomCheck {
    let zero = Rational::zero();
    for ((i, j, k), c) in &alg.constants {
        let mirror = alg.constants.get(&(*j, *i, *k)).unwrap_or(&zero);
        if i == j || *mirror != -c.clone() {
            return AxiomCheck {
                axiom: Axiom::Antisymmetry,
                passed: false,
                witness: triple(*i, *j, *k),
                detail: format!("c_ij^k = {c}, c_ji^k = {mirror}"),
            };
        }
    }
    pass(Axiom::Antisymmetry, "c_ij^k = -c_ji^k for all i, j, k")
}

fn check_jacobi(alg: &StratifiedAlgebra) -> AxiomCheck {
    let n = alg.dim();
    let basis = |i: usize| {
        let mut v = vec![Rational::zero(); n];
        v[i] = rat(1, 1);
        v
    };
    let brackets: Vec<Vec<Vec<Rational>>> = (0..n)
        .map(|i| (0..n).map(|j| alg.bracket_slices(&basis(i), &basis(j))).collect())
        .collect();
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                let a = alg.bracket_slices(&basis(i), &brackets[j][k]);
                let b = alg.bracket_slices(&basis(j), &brackets[k][i]);
                let c = alg.bracket_slices(&basis(k), &brackets[i][j]);
                let bad = (0..n).find(|&r| !(a[r].clone() + b[r].clone() + c[r].clone()).is_zero());
                if let Some(r) = bad {
                    return AxiomCheck {
                        axiom: Axiom::Jacobi,
                        passed: false,
                        witness: triple(i, j, k),
                        detail: format!("cyclic sum has nonzero X_{} component", r + 1),
                    };
                }
            }
        }
    }
    pass(Axiom::Jacobi, format!("all {} basis triples", n * n * n))
}

fn check_grading(alg: &StratifiedAlgebra) -> AxiomCheck {
    for (i, j, k) in alg.constants.keys() {
        let (di, dj, dk) = (alg.degree(*i), alg.degree(*j), alg.degree(*k));
        if dk != di + dj {
            return AxiomCheck {
                axiom: Axiom::Grading,
                passed: false,
                witness: triple(*i, *j, *k),
                detail: format!("degrees {di} + {dj} != {dk}"),
            };
        }
    }
    pass(Axiom::Grading, "c_ij^k = 0 unless d_k = d_i + d_j")
}

fn check_generation(alg: &StratifiedAlgebra) -> AxiomCheck {
    let s = alg.step();
    let n = alg.dim();
    if s == 1 {
        return pass(Axiom::Generation, "vacuous for step 1");
    }
    for i in 1..s {
        let target = alg.layer_range(i + 1);
        let mut rows = Vec::new();
        for a in alg.layer_range(1) {
            for b in alg.layer_range(i) {
                let mut ea = vec![Rational::zero(); n];
                let mut eb = vec![Rational::zero(); n];
                ea[a] = rat(1, 1);
                eb[b] = rat(1, 1);
                let v = alg.bracket_slices(&ea, &eb);
                if v.iter().enumerate().any(|(k, c)| !c.is_zero() && !target.contains(&k)) {
                    return AxiomCheck {
                        axiom: Axiom::Generation,
                        passed: false,
                        witness: Some(Witness::Layer(i + 1)),
                        detail: format!("[X_{}, X_{}] leaves layer {}", a + 1, b + 1, i + 1),
                    };
                }
                rows.push(v[target.clone()].to_vec());
            }
        }
        let r = linalg::rank(&rows);
        if r != target.len() {
            return AxiomCheck {
                axiom: Axiom::Generation,
                passed: false,
                witness: Some(Witness::Layer(i + 1)),
                detail: format!("[V_1, V_{i}] has rank {r}, layer {} has dimension {}", i + 1, target.len()),
            };
        }
    }
    pass(Axiom::Generation, "[V_1, V_i] = V_{i+1} for every i < s")
}

/// `ℝ^n` with zero bracket, step 1.
pub fn abelian(n: usize) -> Result<StratifiedAlgebra> {
    if n == 0 {
        return Err(Error::InvalidPresetParams("abelian needs n >= 1".into()));
    }
    StratifiedAlgebra::new(vec![n], Vec::new())
}

/// Heisenberg algebra `H^n`: `[X_i, X_{n+i}] = X_{2n+1}`.
pub fn heisenberg(n: usize) -> Result<StratifiedAlgebra> {
    if n == 0 {
        return Err(Error::InvalidPresetParams("heisenberg needs n >= 1".into()));
    }
    let entries = (0..n).map(|i| (i, n + i, 2 * n, rat(1, 1))).collect();
    StratifiedAlgebra::new(vec![2 * n, 1], entries)
}

/// Free step-2 nilpotent algebra on `m` generators: `[X_a, X_b] = Y_ab` for
/// `a < b`, with the `Y_ab` ordered lexicographically.
pub fn free_step2(m: usize) -> Result<StratifiedAlgebra> {
    if m < 2 {
        return Err(Error::InvalidPresetParams("free_step2 needs m >= 2".into()));
    }
    let mut entries = Vec::new();
    let mut k = m;
    for a in 0..m {
        for b in a + 1..m {
            entries.push((a, b, k, rat(1, 1)));
            k += 1;
        }
    }
    StratifiedAlgebra::new(vec![m, m * (m - 1) / 2], entries)
}

/// Engel algebra: dims (2,1,1), `[X_1, X_2] = X_3`, `[X_1, X_3] = X_4`.
pub fn engel() -> Result<StratifiedAlgebra> {
    StratifiedAlgebra::new(
        vec![2, 1, 1],
        vec![(0, 1, 2, rat(1, 1)), (0, 2, 3, rat(1, 1))],
    )
}

pub const PRESET_NAMES: [&str; 4] = ["abelian", "heisenberg", "free_step2", "engel"];

/// Preset by name. `param` is `n` for abelian/heisenberg and `m` for
/// free_step2 (default 1, 1 and 2); engel takes none.
pub fn preset(name: &str, param: Option<usize>) -> Result<StratifiedAlgebra> {
    match name {
        "abelian" => abelian(param.unwrap_or(1)),
        "heisenberg" => heisenberg(param.unwrap_or(1)),
        "free_step2" => free_step2(param.unwrap_or(2)),
        "engel" => match param {
            None => engel(),
            Some(p) => Err(Error::InvalidPresetParams(format!("engel takes no parameter, got {p}"))),
        },
        other => Err(Error::UnknownPreset(other.to_string())),
    }
}

/// Largest absolute structure constant, used in reports.
pub fn max_constant(alg: &StratifiedAlgebra) -> Rational {
    alg.constants.values().map(|c| c.abs()).fold(Rational::zero(), |a, b| if b > a { b } else { a })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn arc(a: Result<StratifiedAlgebra>) -> Arc<StratifiedAlgebra> {
        Arc::new(a.unwrap())
    }

    #[test]
    fn heisenberg_bracket() {
        let h = arc(heisenberg(1));
        let x1 = LieVector::<Rational>::basis(h.clone(), 0).unwrap();
        let x2 = LieVector::<Rational>::basis(h.clone(), 1).unwrap();
        let x3 = LieVector::<Rational>::basis(h.clone(), 2).unwrap();
        assert_eq!(x1.bracket(&x2).unwrap(), x3);
        assert_eq!(x2.bracket(&x1).unwrap(), x3.neg());
        assert!(x1.bracket(&x1).unwrap().is_zero());
        assert_eq!((h.dim(), h.step()), (3, 2));
    }

    #[test]
    fn engel_double_bracket() {
        let e = arc(engel());
        let x = |j| LieVector::<Rational>::basis(e.clone(), j).unwrap();
        let inner = x(0).bracket(&x(1)).unwrap();
        assert_eq!(x(0).bracket(&inner).unwrap(), x(3));
        assert_eq!(e.step(), 3);
    }

    #[test]
    fn presets_validate() {
        for alg in [abelian(3), heisenberg(1), heisenberg(2), free_step2(3), free_step2(4), engel()] {
            let alg = alg.unwrap();
            let report = validate(&alg);
            assert!(report.passed(), "{alg:?}: {report:?}");
        }
        assert_eq!(free_step2(3).unwrap().dim(), 6);
        assert_eq!(abelian(2).unwrap().step(), 1);
        assert!(validate(&abelian(3).unwrap()).check(Axiom::Generation).detail.contains("vacuous"));
    }

    #[test]
    fn symmetric_constants_fail_antisymmetry() {
        let alg = StratifiedAlgebra::new(
            vec![2, 1],
            vec![(0, 1, 2, rat(1, 1)), (1, 0, 2, rat(1, 1))],
        )
        .unwrap();
        let r = validate(&alg);
        let c = r.check(Axiom::Antisymmetry);
        assert!(!c.passed);
        assert_eq!(c.witness, Some(Witness::Triple([1, 2, 3])));
    }

    #[test]
    fn detects_grading_and_generation_failures() {
        // [X1, X2] = X2 breaks grading
        let bad = StratifiedAlgebra::new(vec![2, 1], vec![(0, 1, 1, rat(1, 1))]).unwrap();
        let r = validate(&bad);
        assert!(!r.check(Axiom::Grading).passed);
        // layer 2 never reached
        let flat = StratifiedAlgebra::new(vec![2, 1], vec![]).unwrap();
        let r = validate(&flat);
        assert_eq!(r.check(Axiom::Generation).witness, Some(Witness::Layer(2)));
        assert!(r.check(Axiom::Grading).passed);
    }

    #[test]
    fn jacobi_failure_is_found() {
        // [X1,X2]=X1, [X1,X3]=X1, [X2,X3]=X2: cyclic sum on (1,2,3) is X1
        let alg = StratifiedAlgebra::new(
            vec![3],
            vec![(0, 1, 0, rat(1, 1)), (0, 2, 0, rat(1, 1)), (1, 2, 1, rat(1, 1))],
        )
        .unwrap();
        assert!(!validate(&alg).check(Axiom::Jacobi).passed);
    }

    #[test]
    fn quotient_drops_top_layer() {
        let e = engel().unwrap();
        let q = e.quotient().unwrap();
        assert_eq!(q.layer_dims(), &[2, 1]);
        assert_eq!(*q, heisenberg(1).unwrap());
        assert!(abelian(2).unwrap().quotient().is_none());
    }

    #[test]
    fn constructor_errors() {
        assert!(matches!(StratifiedAlgebra::new(vec![], vec![]), Err(Error::InvalidAlgebra(_))));
        assert!(matches!(
            StratifiedAlgebra::new(vec![2], vec![(0, 5, 1, rat(1, 1))]),
            Err(Error::IndexOutOfRange { index: 5, bound: 2 })
        ));
        assert!(matches!(preset("sl2", None), Err(Error::UnknownPreset(_))));
        assert!(matches!(preset("heisenberg", Some(0)), Err(Error::InvalidPresetParams(_))));
    }

    #[test]
    fn algebra_mismatch_is_an_error() {
        let a = arc(heisenberg(1));
        let b = arc(engel());
        let x = LieVector::<Rational>::basis(a, 0).unwrap();
        let y = LieVector::<Rational>::basis(b, 0).unwrap();
        assert_eq!(x.bracket(&y), Err(Error::AlgebraMismatch));
    }
}
