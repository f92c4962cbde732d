//! Seeded random inputs. Every probe draws from its own ChaCha stream so
//! results depend only on `(seed, stream)`.

use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::group::hom_norm_f64;
use crate::lie::StratifiedAlgebra;
use crate::scalar::Rational;

pub fn stream(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Uniform point of `{‖x‖ ≤ 1}` by rejection from `[-1, 1]^n`, which
/// contains the ball since every layer satisfies `|x^i| ≤ ‖x‖^i`.
pub fn unit_ball(alg: &StratifiedAlgebra, rng: &mut impl Rng) -> Vec<f64> {
    loop {
        let x: Vec<f64> = (0..alg.dim()).map(|_| rng.random_range(-1.0..=1.0)).collect();
        if hom_norm_f64(alg, &x) <= 1.0 {
            return x;
        }
    }
}

/// Float dilation `δ_λ` of raw coordinates.
pub fn dilate_f64(alg: &StratifiedAlgebra, x: &[f64], lambda: f64) -> Vec<f64> {
    x.iter()
        .zip(alg.degrees())
        .map(|(c, d)| c * lambda.powi(*d as i32))
        .collect()
}

/// Point with `‖x‖ ≈ 1`: a nonzero ball sample pushed radially by dilation.
pub fn unit_sphere(alg: &StratifiedAlgebra, rng: &mut impl Rng) -> Vec<f64> {
    loop {
        let x = unit_ball(alg, rng);
        let r = hom_norm_f64(alg, &x);
        if r > 1e-3 {
            return dilate_f64(alg, &x, 1.0 / r);
        }
    }
}

/// Nonzero rational `±p/q` with `1 ≤ p ≤ max_num`, `1 ≤ q ≤ max_den`.
pub fn nonzero_rational(rng: &mut impl Rng, max_num: i64, max_den: i64) -> Rational {
    let p = rng.random_range(1..=max_num);
    let q = rng.random_range(1..=max_den);
    let sign = if rng.random_bool(0.5) { 1 } else { -1 };
    Rational::new(BigInt::from(sign * p), BigInt::from(q))
}

pub fn rational_vector(rng: &mut impl Rng, len: usize, max_num: i64, max_den: i64) -> Vec<Rational> {
    (0..len).map(|_| nonzero_rational(rng, max_num, max_den)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lie::heisenberg;

    #[test]
    fn streams_are_reproducible_and_distinct() {
        let a: Vec<u64> = (0..4).map(|_| stream(7, 1).random()).collect();
        let b: Vec<u64> = (0..4).map(|_| stream(7, 1).random()).collect();
        assert_eq!(a, b);
        assert_ne!(stream(7, 1).random::<u64>(), stream(7, 2).random::<u64>());
    }

    #[test]
    fn ball_and_sphere() {
        let h = heisenberg(1).unwrap();
        let mut rng = stream(1, 0);
        for _ in 0..100 {
            assert!(hom_norm_f64(&h, &unit_ball(&h, &mut rng)) <= 1.0);
            let s = unit_sphere(&h, &mut rng);
            assert!((hom_norm_f64(&h, &s) - 1.0).abs() < 1e-12);
        }
    }
}
