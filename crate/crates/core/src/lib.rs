//! Exact computation in Carnot groups.
//!
//! Stratified Lie algebras by structure constants ([`lie`]), the group law in
//! exponential coordinates through the BCH series ([`group`]), horizontal
//! words and distance bounds ([`word`], [`metric`]), constructive
//! decompositions into horizontal words ([`decompose`]) and numerical probes
//! of differentiability for Lipschitz functions ([`analysis`]).

pub mod analysis;
pub mod bch;
pub mod config;
pub mod decompose;
pub mod error;
pub mod factor;
pub mod group;
pub mod lie;
pub mod linalg;
pub mod metric;
pub mod optimize;
pub mod report;
pub mod sampling;
pub mod scalar;
pub mod suite;
pub mod word;

pub use error::{Error, Result};
pub use group::GroupPoint;
pub use lie::{LieVector, StratifiedAlgebra};
pub use scalar::Rational;
pub use word::HorizontalWord;
