use std::sync::Arc;

use carnot_core::decompose::{bracket_word, commutator_len, path_decompose, split_sum, Operand};
use carnot_core::lie::{abelian, engel, free_step2, heisenberg};
use carnot_core::scalar::rat;
use carnot_core::{Error, GroupPoint, HorizontalWord, LieVector, Rational, StratifiedAlgebra};
use num_traits::{One, Signed, Zero};
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

fn horizontal(alg: &Arc<StratifiedAlgebra>, c: &[i64]) -> LieVector<Rational> {
    let c: Vec<Rational> = c.iter().map(|&v| rat(v, 1)).collect();
    LieVector::horizontal(alg.clone(), &c).unwrap()
}

fn point(alg: &Arc<StratifiedAlgebra>, c: &[Rational]) -> GroupPoint<Rational> {
    GroupPoint::new(alg.clone(), c.to_vec()).unwrap()
}

fn unit(m: usize, i: usize) -> Vec<i64> {
    let mut e = vec![0; m];
    e[i] = 1;
    e
}

fn small_rational() -> impl Strategy<Value = Rational> {
    (-9i64..=9, 1i64..=5).prop_map(|(p, q)| rat(p, q))
}

fn coords(n: usize) -> impl Strategy<Value = Vec<Rational>> {
    prop::collection::vec(small_rational(), n)
}

#[test]
fn heisenberg_six_step_split() {
    let h = Arc::new(heisenberg(1).unwrap());
    let s = split_sum(&horizontal(&h, &[1, 0]), &horizontal(&h, &[0, 1])).unwrap();
    assert_eq!(s.steps, 6);
    assert_eq!(s.word.len(), 6);
    assert_eq!(s.word.endpoint().coords(), &[rat(1, 1), rat(1, 1), rat(0, 1)]);
    assert!(!s.degenerate);
    let alternating: Vec<Operand> = (0..6).map(|i| if i % 2 == 0 { Operand::U } else { Operand::V }).collect();
    assert_eq!(s.operands, alternating);
}

#[test]
fn split_rejects_vertical_input() {
    let h = Arc::new(heisenberg(1).unwrap());
    let vertical = LieVector::<Rational>::basis(h.clone(), 2).unwrap();
    assert!(split_sum(&vertical, &horizontal(&h, &[1, 0])).is_err());
}

#[test]
fn dependent_split_is_one_step() {
    let h = Arc::new(heisenberg(1).unwrap());
    let u = horizontal(&h, &[1, 2]);
    let s = split_sum(&u, &u.scale(&rat(-3, 1))).unwrap();
    assert!(s.degenerate);
    assert_eq!(s.word.endpoint(), GroupPoint::exp(&u.scale(&rat(-2, 1))));
}

#[test]
fn commutator_word_examples() {
    let h = Arc::new(heisenberg(1).unwrap());
    let w = bracket_word(&[horizontal(&h, &[0, 1]), horizontal(&h, &[1, 0])]).unwrap();
    assert_eq!(w.len(), commutator_len(2));
    // [X_1, X_2] = X_3
    assert_eq!(w.endpoint().coords(), &[rat(0, 1), rat(0, 1), rat(1, 1)]);
    let pairs: Vec<(Rational, Vec<Rational>)> = w
        .steps()
        .iter()
        .map(|s| (s.t.clone(), s.direction.coeffs()[..2].to_vec()))
        .collect();
    let x1 = vec![rat(1, 1), rat(0, 1)];
    let x2 = vec![rat(0, 1), rat(1, 1)];
    let neg = |v: &Vec<Rational>| v.iter().map(|c| -c).collect::<Vec<_>>();
    assert_eq!(
        pairs,
        vec![
            (Rational::one(), x1.clone()),
            (Rational::one(), x2.clone()),
            (Rational::one(), neg(&x1)),
            (Rational::one(), neg(&x2)),
        ]
    );

    let e = Arc::new(engel().unwrap());
    let w = bracket_word(&[horizontal(&e, &[0, 1]), horizontal(&e, &[1, 0]), horizontal(&e, &[1, 0])]).unwrap();
    assert_eq!(w.len(), 10);
    assert_eq!(w.endpoint().coords(), &[rat(0, 1), rat(0, 1), rat(0, 1), rat(1, 1)]);
    assert!(matches!(
        bracket_word(&[horizontal(&e, &[1, 0])]),
        Err(Error::BracketLength { expected: 3, found: 1 })
    ));
}

#[test]
fn vertical_path_ratio() {
    let h = Arc::new(heisenberg(1).unwrap());
    let target = point(&h, &[rat(0, 1), rat(0, 1), rat(1, 1)]);
    let d = path_decompose(&target).unwrap();
    assert_eq!(d.word.endpoint(), target);
    assert_eq!(d.total_time, rat(4, 1));
    assert_eq!(d.ratio, 4.0);
    let steps: Vec<(Rational, Vec<Rational>)> =
        d.word.steps().iter().map(|s| (s.t.clone(), s.direction.coeffs()[..2].to_vec())).collect();
    let e = |a: i64, b: i64| vec![rat(a, 1), rat(b, 1)];
    assert_eq!(
        steps,
        vec![(rat(1, 1), e(1, 0)), (rat(1, 1), e(0, 1)), (rat(1, 1), e(-1, 0)), (rat(1, 1), e(0, -1))]
    );
    for r in [rat(1, 2), rat(2, 1), rat(5, 1)] {
        let scaled = point(&h, &[rat(0, 1), rat(0, 1), &r * &r]);
        let d = path_decompose(&scaled).unwrap();
        assert_eq!(d.word.endpoint(), scaled);
        assert_eq!(d.total_time, rat(4, 1) * &r);
    }
    assert!(path_decompose(&GroupPoint::identity(h)).unwrap().word.is_empty());
}

#[test]
fn word_lengths() {
    let h = Arc::new(heisenberg(1).unwrap());
    let w = HorizontalWord::from_pairs(h.clone(), &[(2.0, vec![3.0, 4.0]), (-1.0, vec![1.0, 0.0])]).unwrap();
    assert_eq!(w.length(), 11.0);
    let e = Arc::new(engel().unwrap());
    let one = HorizontalWord::from_pairs(e.clone(), &[(Rational::one(), vec![rat(1, 1), rat(0, 1)])]).unwrap();
    assert_eq!(one.endpoint(), GroupPoint::exp(&horizontal(&e, &[1, 0])));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn split_is_exact(k in 0usize..5, u in coords(4), v in coords(4)) {
        let alg = &presets()[k];
        let m = alg.horizontal_dim();
        let u = LieVector::horizontal(alg.clone(), &u[..m]).unwrap();
        let v = LieVector::horizontal(alg.clone(), &v[..m]).unwrap();
        let s = split_sum(&u, &v).unwrap();
        prop_assert_eq!(s.word.endpoint(), GroupPoint::exp(&u.add(&v).unwrap()));
        prop_assert_eq!(s.word.len(), s.steps);
        prop_assert_eq!(s.rho.len(), s.steps);
        for (step, (op, r)) in s.word.steps().iter().zip(s.operands.iter().zip(&s.rho)) {
            let base = match op { Operand::U => &u, Operand::V => &v };
            prop_assert_eq!(step.direction.scale(&step.t), base.scale(r));
        }
        // N depends on the algebra only
        if !s.degenerate && m >= 2 {
            let reference = split_sum(&horizontal(alg, &unit(m, 0)), &horizontal(alg, &unit(m, 1))).unwrap();
            prop_assert_eq!(s.steps, reference.steps);
        }
    }

    #[test]
    fn split_projects_to_quotient(k in 1usize..5, u in coords(4), v in coords(4)) {
        let alg = &presets()[k];
        let q = alg.quotient().unwrap();
        let m = alg.horizontal_dim();
        let uu = LieVector::horizontal(alg.clone(), &u[..m]).unwrap();
        let vv = LieVector::horizontal(alg.clone(), &v[..m]).unwrap();
        let s = split_sum(&uu, &vv).unwrap();
        let pairs: Vec<(Rational, Vec<Rational>)> =
            s.word.steps().iter().map(|st| (st.t.clone(), st.direction.coeffs()[..m].to_vec())).collect();
        let projected = HorizontalWord::from_pairs(q.clone(), &pairs).unwrap();
        let sum: Vec<Rational> = (0..m).map(|i| &u[i] + &v[i]).collect();
        let target = GroupPoint::exp(&LieVector::horizontal(q, &sum).unwrap());
        prop_assert_eq!(projected.endpoint(), target);
    }

    #[test]
    fn path_is_exact_and_homogeneous(k in 0usize..5, h in coords(6), l in 1i64..7, d in 1i64..4) {
        let alg = &presets()[k];
        let n = alg.dim();
        let h = point(alg, &h[..n]);
        let p = path_decompose(&h).unwrap();
        prop_assert_eq!(p.word.endpoint(), h.clone());
        prop_assert!(p.steps <= p.step_bound);
        for s in p.word.steps() {
            prop_assert!(s.t >= Rational::zero());
            let nonzero: Vec<&Rational> = s.direction.coeffs().iter().filter(|c| !c.is_zero()).collect();
            prop_assert_eq!(nonzero.len(), 1);
            prop_assert_eq!(nonzero[0].abs(), Rational::one());
        }
        let lam = rat(l, d);
        let scaled = path_decompose(&h.dilate(&lam).unwrap()).unwrap();
        prop_assert_eq!(scaled.total_time, &p.total_time * &lam);
        prop_assert_eq!(scaled.word.endpoint(), h.dilate(&lam).unwrap());
    }

    #[test]
    fn flow_is_a_right_action(k in 0usize..5, x in coords(6), a in coords(6), b in coords(6)) {
        let alg = &presets()[k];
        let n = alg.dim();
        let m = alg.horizontal_dim();
        let w1 = HorizontalWord::from_pairs(alg.clone(), &[(a[0].clone(), a[1..1 + m].to_vec()), (a[4].clone(), a[2..2 + m].to_vec())]).unwrap();
        let w2 = HorizontalWord::from_pairs(alg.clone(), &[(b[0].clone(), b[1..1 + m].to_vec())]).unwrap();
        let x = point(alg, &x[..n]);
        let chained = w2.flow(&w1.flow(&x).unwrap()).unwrap();
        prop_assert_eq!(chained, w1.concat(&w2).unwrap().flow(&x).unwrap());
        // the reversed, negated word undoes the flow
        prop_assert_eq!(w1.reverse_negate().flow(&w1.flow(&x).unwrap()).unwrap(), x);
    }
}
