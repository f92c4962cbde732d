use std::sync::Arc;

use carnot_core::analysis::{
    corpus, directional_derivative, heis_sqrt_samples, horizontal_gradient, linearity_defect, lipschitz_audit,
    mcshane_extend, membership_a, minimal_lipschitz, pansu_quotient, porosity_probe, CorpusOptions, Ladder,
    MembershipOptions, PansuOptions, PorosityOptions, Provenance, Sample, Sidedness,
};
use carnot_core::lie::{engel, heisenberg};
use carnot_core::Error;
use proptest::prelude::*;

// On H^1 with x · exp(sX_1) = (x + s, y, t - sy/2):
// X_1 = ∂_x - (y/2) ∂_t and X_2 = ∂_y + (x/2) ∂_t.
fn smooth_gradient(p: &[f64]) -> [f64; 2] {
    [2.0 * p[0] + p[1], p[0]]
}

#[test]
fn gradient_of_a_smooth_field() {
    let h = Arc::new(heisenberg(1).unwrap());
    let f = corpus("x1sq-x1x2", &h, &CorpusOptions::default()).unwrap();
    for p in [[0.3, -0.7, 0.2], [1.5, 2.0, -4.0], [0.0, 0.0, 0.0]] {
        let g = horizontal_gradient(&f, &p, &Ladder::default()).unwrap();
        let want = smooth_gradient(&p);
        let got = g.value.expect("smooth fields converge");
        for (a, b) in got.iter().zip(want) {
            assert!((a - b).abs() < 1e-7, "{p:?}: {got:?} vs {want:?}");
        }
    }
}

#[test]
fn product_field_sees_the_vertical_twist() {
    // x_1 x_2 does not depend on t, but on Engel x_1 x_2 moves with X_2 only through x_2
    let e = Arc::new(engel().unwrap());
    let f = corpus("product12", &e, &CorpusOptions::default()).unwrap();
    let d = directional_derivative(&f, &[0.5, -2.0, 1.0, 3.0], &[0.0, 1.0], &Ladder::default()).unwrap();
    assert!((d.value.unwrap() - 0.5).abs() < 1e-7);
}

#[test]
fn corpus_values() {
    let h = Arc::new(heisenberg(1).unwrap());
    let opts = CorpusOptions::default();
    assert_eq!(corpus("min2", &h, &opts).unwrap().eval(&[3.0, 5.0, 0.0]).unwrap(), 3.0);
    let lin = corpus("linear-v", &h, &CorpusOptions { v: Some(vec![1.0, 2.0]), ..opts.clone() }).unwrap();
    assert_eq!(lin.eval(&[3.0, -1.0, 7.0]).unwrap(), 1.0);
    assert!(matches!(corpus("nope", &h, &opts), Err(Error::UnknownField(_))));
    let e = Arc::new(engel().unwrap());
    assert!(corpus("heis-sqrt", &e, &opts).is_err());
    assert!(corpus("linear-v", &h, &CorpusOptions { v: Some(vec![1.0]), ..opts }).is_err());
}

#[test]
fn heis_sqrt_extension() {
    let h = Arc::new(heisenberg(1).unwrap());
    let f = corpus("heis-sqrt", &h, &CorpusOptions::default()).unwrap();
    assert_eq!(f.provenance(), Provenance::McShane);
    // the extension agrees with its samples
    assert!((f.eval(&[0.0, 0.0, 4.0]).unwrap() - 2.0).abs() < 1e-12);
    assert!((f.eval(&[0.0, 0.0, -0.25]).unwrap() - 0.5).abs() < 1e-12);
    assert_eq!(f.eval(&[0.5, 0.0, 0.0]).unwrap(), 0.0);

    // the horizontal gradient at the origin vanishes, yet the Pansu residual does not
    let g = horizontal_gradient(&f, &[0.0; 3], &Ladder::default()).unwrap();
    for c in g.value.unwrap() {
        assert!(c.abs() < 1e-9);
    }
    let r = pansu_quotient(&f, &[0.0; 3], &PansuOptions::default()).unwrap();
    assert_eq!(r.verdict, "not-differentiable");
    assert!(r.values.iter().all(|v| *v > 0.5), "{:?}", r.values);

    let audit = lipschitz_audit(&f, 300, 0.5, 3).unwrap();
    assert_eq!(audit.violations, 0);
    assert!(audit.max_ratio <= f.lipschitz().unwrap() * (1.0 + 1e-12));
}

#[test]
fn mcshane_on_a_small_sample() {
    let h = Arc::new(heisenberg(1).unwrap());
    let samples = vec![
        Sample::new(vec![0.0, 0.0, 0.0], 0.0),
        Sample::new(vec![1.0, 0.0, 0.0], 0.5),
        Sample::new(vec![0.0, 0.0, 1.0], 1.0),
    ];
    let l = minimal_lipschitz(&h, &samples).unwrap();
    assert!((l - 1.0).abs() < 1e-12);
    let f = mcshane_extend(&h, samples.clone(), l, "toy").unwrap();
    for s in &samples {
        assert!((f.eval(&s.point).unwrap() - s.value).abs() < 1e-12);
    }
    assert!(matches!(
        mcshane_extend(&h, samples, 0.5 * l, "tight"),
        Err(Error::IncompatibleSamples { .. })
    ));
    assert!(heis_sqrt_samples(&[vec![0.0, 0.0]]).is_err());
}

#[test]
fn linear_fields_are_pansu_differentiable() {
    let h = Arc::new(heisenberg(1).unwrap());
    let f = corpus("linear-v", &h, &CorpusOptions { v: Some(vec![1.0, 2.0]), ..Default::default() }).unwrap();
    for p in [[0.0; 3], [0.4, -1.0, 2.0]] {
        let r = pansu_quotient(&f, &p, &PansuOptions::default()).unwrap();
        assert_eq!(r.verdict, "differentiable", "{:?} {}", r.values, r.parameters);
        assert!(r.values.iter().all(|v| *v < 1e-9), "{:?}", r.values);
    }
}

#[test]
fn min_fails_linearity_on_the_diagonal() {
    let h = Arc::new(heisenberg(1).unwrap());
    let f = corpus("min2", &h, &CorpusOptions::default()).unwrap();
    let (u, v) = ([1.0, 0.0], [0.0, 1.0]);
    // forward: Uf = 0, Vf = 0, (U+V)f = 1 at the origin
    let d = linearity_defect(&f, &[0.0; 3], &u, &v, &Ladder::default(), Sidedness::Forward).unwrap();
    assert!((d.defect - 1.0).abs() < 1e-9, "{d:?}");
    // the two-sided derivatives of U and V do not exist there
    assert!(matches!(
        linearity_defect(&f, &[0.0; 3], &u, &v, &Ladder::default(), Sidedness::TwoSided),
        Err(Error::NonConvergent(_))
    ));
    let x1 = corpus("x1", &h, &CorpusOptions::default()).unwrap();
    let d = linearity_defect(&x1, &[0.2, 0.1, 0.0], &u, &v, &Ladder::default(), Sidedness::TwoSided).unwrap();
    assert!(d.defect < 1e-9);
}

#[test]
fn membership_grid_monotone_in_epsilon() {
    let h = Arc::new(heisenberg(1).unwrap());
    let f = corpus("min2", &h, &CorpusOptions::default()).unwrap();
    let opts = MembershipOptions { side: Sidedness::Forward, ..Default::default() };
    let (u, v) = ([1.0, 0.0], [0.0, 1.0]);
    let mut last: Option<carnot_core::analysis::MembershipA> = None;
    for eps in [0.01, 0.02, 0.05, 0.08] {
        let a = membership_a(&f, &[0.0; 3], &u, &v, 0.0, 0.0, eps, &opts).unwrap();
        assert!(a.member, "eps {eps}");
        assert_eq!(a.c2, 6.0);
        if let Some(prev) = &last {
            for i in 0..a.grid.len() {
                assert!(a.u_good[i] >= prev.u_good[i]);
                assert!(a.v_good[i] >= prev.v_good[i]);
                assert!(a.uv_bad[i] <= prev.uv_bad[i]);
            }
        }
        last = Some(a);
    }
    // (U+V)f = 1 misses 0 by more than 2εC_2 only while ε < 1/12
    let a = membership_a(&f, &[0.0; 3], &u, &v, 0.0, 0.0, 0.08, &opts).unwrap();
    assert!(a.uv_bad.iter().all(|b| *b));
    let a = membership_a(&f, &[0.0; 3], &u, &v, 0.0, 0.0, 0.09, &opts).unwrap();
    assert!(a.uv_bad.iter().all(|b| !*b) && !a.member);
    assert!(membership_a(&f, &[0.0; 3], &u, &v, 0.0, 0.0, 0.0, &opts).is_err());
}

#[test]
fn porosity_of_a_plane_and_a_ball() {
    let h = Arc::new(heisenberg(1).unwrap());
    let plane = |x: &[f64]| x[0] == 0.0;
    let r = porosity_probe(&h, &plane, &[0.0; 3], &PorosityOptions::default()).unwrap();
    assert_eq!(r.verdict, "porous-evidence");
    assert!(r.values.iter().all(|v| *v >= 0.5), "{:?}", r.values);

    let ball = |x: &[f64]| carnot_core::analysis::rho(&h, &[0.0; 3], x) <= 1.0;
    let r = porosity_probe(&h, &ball, &[0.0; 3], &PorosityOptions { seed: 5, ..Default::default() }).unwrap();
    assert_eq!(r.verdict, "no-holes-found");
    assert!(porosity_probe(&h, &plane, &[1.0, 0.0, 0.0], &PorosityOptions::default()).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn derivatives_scale_linearly(
        p in prop::collection::vec(-2.0f64..2.0, 3),
        e in prop::collection::vec(-1.0f64..1.0, 2),
        k in 0usize..3,
    ) {
        let s = [2.0, -1.0, 0.5][k];
        let h = Arc::new(heisenberg(1).unwrap());
        let f = corpus("x1sq-x1x2", &h, &CorpusOptions::default()).unwrap();
        let base = directional_derivative(&f, &p, &e, &Ladder::default()).unwrap();
        let scaled: Vec<f64> = e.iter().map(|c| s * c).collect();
        let d = directional_derivative(&f, &p, &scaled, &Ladder::default()).unwrap();
        let g = smooth_gradient(&p);
        let exact = g[0] * e[0] + g[1] * e[1];
        prop_assert!((base.value.unwrap() - exact).abs() < 1e-6);
        prop_assert!((d.value.unwrap() - s * exact).abs() < 1e-6);
    }
}
