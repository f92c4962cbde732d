use std::sync::Arc;

use carnot_core::bch::BchTable;
use carnot_core::config::{group_hash, GroupConfig};
use carnot_core::lie::{abelian, engel, free_step2, heisenberg, preset, validate, Axiom, Witness};
use carnot_core::scalar::{parse_rational, rat};
use carnot_core::{Error, GroupPoint, LieVector, Rational, StratifiedAlgebra};
use num_traits::Zero;
use proptest::prelude::*;

fn presets() -> Vec<Arc<StratifiedAlgebra>> {
    vec![
        Arc::new(abelian(3).unwrap()),
        Arc::new(heisenberg(1).unwrap()),
        Arc::new(heisenberg(2).unwrap()),
        Arc::new(free_step2(3).unwrap()),
        Arc::new(engel().unwrap()),
    ]
}

fn vector(alg: &Arc<StratifiedAlgebra>, c: Vec<Rational>) -> LieVector<Rational> {
    LieVector::new(alg.clone(), c).unwrap()
}

// x + y + [x,y]/2 + [x,[x,y]]/12 - [y,[x,y]]/12, exact for step <= 3
fn bch3(x: &LieVector<Rational>, y: &LieVector<Rational>) -> LieVector<Rational> {
    let xy = x.bracket(y).unwrap();
    let xxy = x.bracket(&xy).unwrap();
    let yxy = y.bracket(&xy).unwrap();
    x.add(y)
        .unwrap()
        .add(&xy.scale(&rat(1, 2)))
        .unwrap()
        .add(&xxy.scale(&rat(1, 12)))
        .unwrap()
        .sub(&yxy.scale(&rat(1, 12)))
        .unwrap()
}

fn small_rational() -> impl Strategy<Value = Rational> {
    (-12i64..=12, 1i64..=6).prop_map(|(p, q)| rat(p, q))
}

fn coords(n: usize) -> impl Strategy<Value = Vec<Rational>> {
    prop::collection::vec(small_rational(), n)
}

fn preset_index() -> impl Strategy<Value = usize> {
    0usize..5
}

#[test]
fn heisenberg_bracket_and_law() {
    let h = Arc::new(heisenberg(1).unwrap());
    let x1 = LieVector::<Rational>::basis(h.clone(), 0).unwrap();
    let x2 = LieVector::<Rational>::basis(h.clone(), 1).unwrap();
    assert_eq!(x1.bracket(&x2).unwrap(), LieVector::basis(h.clone(), 2).unwrap());
    assert!(x1.bracket(&x1).unwrap().is_zero());

    let p = GroupPoint::new(h.clone(), vec![rat(1, 1), rat(2, 1), rat(3, 1)]).unwrap();
    let q = GroupPoint::new(h.clone(), vec![rat(-1, 2), rat(1, 3), rat(0, 1)]).unwrap();
    // t + t' + (x y' - x' y) / 2
    let t = rat(3, 1) + rat(1, 2) * (rat(1, 3) - rat(-1, 2) * rat(2, 1));
    assert_eq!(p.multiply(&q).unwrap().coords(), &[rat(1, 2), rat(7, 3), t]);
    assert_eq!(p.project_horizontal(), vec![rat(1, 1), rat(2, 1)]);
}

#[test]
fn engel_double_bracket() {
    let e = Arc::new(engel().unwrap());
    let x1 = LieVector::<Rational>::basis(e.clone(), 0).unwrap();
    let x2 = LieVector::<Rational>::basis(e.clone(), 1).unwrap();
    let inner = x1.bracket(&x2).unwrap();
    assert_eq!(inner, LieVector::basis(e.clone(), 2).unwrap());
    assert_eq!(x1.bracket(&inner).unwrap(), LieVector::basis(e.clone(), 3).unwrap());
    assert!(x2.bracket(&inner).unwrap().is_zero());
}

#[test]
fn preset_shapes() {
    let h = heisenberg(1).unwrap();
    assert_eq!((h.dim(), h.step(), h.layer_dims().to_vec()), (3, 2, vec![2, 1]));
    let f = free_step2(3).unwrap();
    assert_eq!((f.dim(), f.layer_dims().to_vec()), (6, vec![3, 3]));
    let e = engel().unwrap();
    assert_eq!((e.dim(), e.step()), (4, 3));
    let a = abelian(2).unwrap();
    assert_eq!(a.step(), 1);
    assert!(a.constants().is_empty());
    for alg in presets() {
        assert!(validate(&alg).passed());
    }
    assert!(matches!(preset("nilpotent", None), Err(Error::UnknownPreset(_))));
    assert!(matches!(preset("engel", Some(2)), Err(Error::InvalidPresetParams(_))));
}

#[test]
fn validation_reports_witnesses() {
    // c_12^3 = c_21^3 = 1 in 1-based indices
    let bad = StratifiedAlgebra::new(vec![2, 1], vec![(0, 1, 2, rat(1, 1)), (1, 0, 2, rat(1, 1))]);
    let report = match bad {
        Ok(alg) => validate(&alg),
        Err(e) => panic!("constructor should leave axiom checks to validate: {e}"),
    };
    let anti = report.check(Axiom::Antisymmetry);
    assert!(!anti.passed);
    assert_eq!(anti.witness, Some(Witness::Triple([1, 2, 3])));
    assert!(!report.passed());
}

#[test]
fn config_round_trip() {
    let cfg = GroupConfig::from_json(r#"{"step": 2, "layer_dims": [2, 1], "brackets": [[1, 2, 3, "1"]]}"#).unwrap();
    let explicit = cfg.build().unwrap();
    let named = GroupConfig::from_json(r#"{"preset": "heisenberg", "n": 1}"#).unwrap().build().unwrap();
    assert_eq!(*explicit, *named);
    assert_eq!(group_hash(&explicit), group_hash(&named));
    assert_ne!(group_hash(&named), group_hash(&engel().unwrap()));
    assert!(GroupConfig::from_json(r#"{"step": 3, "layer_dims": [2, 1]}"#).unwrap().build().is_err());
    assert!(GroupConfig::from_json(r#"{"step": 2, "layer_dims": [2, 1], "brackets": [[0, 2, 3, "1"]]}"#)
        .unwrap()
        .build()
        .is_err());
}

#[test]
fn rationals_parse() {
    assert_eq!(parse_rational("-3/6").unwrap(), rat(-1, 2));
    assert_eq!(parse_rational("0.25").unwrap(), rat(1, 4));
    assert!(parse_rational("1/0").is_err());
}

#[test]
fn hom_norm_examples() {
    let h = Arc::new(heisenberg(1).unwrap());
    let a = Arc::new(abelian(3).unwrap());
    let x = GroupPoint::new(a, vec![3.0, 4.0, 12.0]).unwrap();
    assert!((x.hom_norm() - 13.0).abs() < 1e-12);
    for (px, py, t) in [(1.0, 2.0, 3.0), (0.0, 0.0, 1.0), (-0.3, 0.1, -2.0)] {
        let g = GroupPoint::new(h.clone(), vec![px, py, t]).unwrap();
        let closed = ((px * px + py * py).powi(2) + t * t).powf(0.25);
        assert!((g.hom_norm() - closed).abs() <= 4.0 * f64::EPSILON * closed);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn jacobi_holds(k in preset_index(), x in coords(6), y in coords(6), z in coords(6)) {
        let alg = &presets()[k];
        let n = alg.dim();
        let x = vector(alg, x[..n].to_vec());
        let y = vector(alg, y[..n].to_vec());
        let z = vector(alg, z[..n].to_vec());
        let j = x.bracket(&y.bracket(&z).unwrap()).unwrap()
            .add(&y.bracket(&z.bracket(&x).unwrap()).unwrap()).unwrap()
            .add(&z.bracket(&x.bracket(&y).unwrap()).unwrap()).unwrap();
        prop_assert!(j.is_zero());
        prop_assert_eq!(x.bracket(&y).unwrap(), y.bracket(&x).unwrap().neg());
    }

    #[test]
    fn brackets_respect_grading(k in preset_index(), a in 0usize..6, b in 0usize..6) {
        let alg = &presets()[k];
        let (a, b) = (a % alg.dim(), b % alg.dim());
        let xa = LieVector::<Rational>::basis(alg.clone(), a).unwrap();
        let xb = LieVector::<Rational>::basis(alg.clone(), b).unwrap();
        let c = xa.bracket(&xb).unwrap();
        let want = alg.degree(a) + alg.degree(b);
        for (j, v) in c.coeffs().iter().enumerate() {
            if alg.degree(j) != want {
                prop_assert!(v.is_zero());
            }
        }
    }

    #[test]
    fn product_matches_closed_form(k in preset_index(), x in coords(6), y in coords(6)) {
        let alg = &presets()[k];
        let n = alg.dim();
        let (x, y) = (x[..n].to_vec(), y[..n].to_vec());
        let p = GroupPoint::new(alg.clone(), x.clone()).unwrap();
        let q = GroupPoint::new(alg.clone(), y.clone()).unwrap();
        let expected = bch3(&vector(alg, x), &vector(alg, y));
        let product = p.multiply(&q).unwrap();
        prop_assert_eq!(product.coords(), expected.coeffs());
    }

    #[test]
    fn group_laws(k in preset_index(), x in coords(6), y in coords(6), z in coords(6), l in 1i64..8, d in 1i64..5) {
        let alg = &presets()[k];
        let n = alg.dim();
        let p = GroupPoint::new(alg.clone(), x[..n].to_vec()).unwrap();
        let q = GroupPoint::new(alg.clone(), y[..n].to_vec()).unwrap();
        let r = GroupPoint::new(alg.clone(), z[..n].to_vec()).unwrap();
        let left = p.multiply(&q).unwrap().multiply(&r).unwrap();
        let right = p.multiply(&q.multiply(&r).unwrap()).unwrap();
        prop_assert_eq!(&left, &right);
        prop_assert!(p.multiply(&p.inverse()).unwrap().is_identity());
        prop_assert_eq!(p.multiply(&GroupPoint::identity(alg.clone())).unwrap(), p.clone());

        // p(xy) = p(x) + p(y)
        let m = alg.horizontal_dim();
        let sum: Vec<Rational> = (0..m).map(|i| &x[i] + &y[i]).collect();
        prop_assert_eq!(p.multiply(&q).unwrap().project_horizontal(), sum);

        // dilations are automorphisms
        let lam = rat(l, d);
        let lhs = p.multiply(&q).unwrap().dilate(&lam).unwrap();
        let rhs = p.dilate(&lam).unwrap().multiply(&q.dilate(&lam).unwrap()).unwrap();
        prop_assert_eq!(lhs, rhs);

        // left invariance of the relative element
        let shifted = r.multiply(&p).unwrap().relative(&r.multiply(&q).unwrap()).unwrap();
        prop_assert_eq!(shifted, p.relative(&q).unwrap());
    }

    #[test]
    fn truncation_is_idempotent(k in preset_index(), x in coords(6), y in coords(6)) {
        let alg = &presets()[k];
        let n = alg.dim();
        let s = alg.step();
        let low = BchTable::new(s).evaluate(alg, &x[..n], &y[..n]);
        let high = BchTable::new(s + 2).evaluate(alg, &x[..n], &y[..n]);
        prop_assert_eq!(low, high);
    }

    #[test]
    fn norm_symmetry_and_homogeneity(k in preset_index(), x in prop::collection::vec(-10.0f64..10.0, 6), lam in 1e-3f64..1e3) {
        let alg = &presets()[k];
        let n = alg.dim();
        let p = GroupPoint::new(alg.clone(), x[..n].to_vec()).unwrap();
        let norm = p.hom_norm();
        prop_assert!((p.inverse().hom_norm() - norm).abs() <= 1e-12 * norm.max(1.0));
        let scaled = p.dilate(&lam).unwrap().hom_norm();
        prop_assert!((scaled - lam * norm).abs() <= 1e-12 * (lam * norm).max(1e-300));
    }
}
