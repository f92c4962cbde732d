//! Numerical probes of differentiability for functions on a Carnot group.
//!
//! Every metric quantity here is the homogeneous norm `ρ(x, y) = ‖x^{-1}y‖`,
//! and group operations run in `f64`. Reports record the metric they used.

mod corpus;
mod derivative;
mod field;
mod mcshane;
mod porosity;
mod probes;

pub use corpus::{corpus, heis_sqrt_samples, CorpusOptions, CORPUS_NAMES};
pub use derivative::{
    convergent_fraction, directional_derivative, horizontal_gradient, linearity_defect, DerivativeEstimate,
    Gradient, Ladder, LinearityDefect, Sidedness,
};
pub use field::{lipschitz_audit, LipschitzAudit, Provenance, ScalarField};
pub use mcshane::{check_compatible, mcshane_extend, minimal_lipschitz, Sample};
pub use porosity::{porosity_probe, PorosityOptions};
pub use probes::{
    membership_a, pansu_quotient, regularity_defect, MembershipA, MembershipOptions, PansuOptions, ProbeReport,
    RegularityOptions,
};

use crate::lie::StratifiedAlgebra;

/// `x ⋄ y` on raw float coordinates.
pub fn mul(alg: &StratifiedAlgebra, x: &[f64], y: &[f64]) -> Vec<f64> {
    alg.bch_table().evaluate(alg, x, y)
}

/// `x · exp(tE)` for a horizontal `E` given by its first-layer coefficients.
pub fn step(alg: &StratifiedAlgebra, x: &[f64], e: &[f64], t: f64) -> Vec<f64> {
    let mut y = vec![0.0; alg.dim()];
    for (yi, ei) in y.iter_mut().zip(e) {
        *yi = t * ei;
    }
    mul(alg, x, &y)
}

/// `ρ(x, y) = ‖x^{-1} y‖`.
pub fn rho(alg: &StratifiedAlgebra, x: &[f64], y: &[f64]) -> f64 {
    let neg: Vec<f64> = x.iter().map(|c| -c).collect();
    crate::group::hom_norm_f64(alg, &mul(alg, &neg, y))
}

pub(crate) fn euclid(v: &[f64]) -> f64 {
    v.iter().map(|c| c * c).sum::<f64>().sqrt()
}
