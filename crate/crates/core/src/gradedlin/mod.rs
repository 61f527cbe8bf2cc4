//! Explicit degreewise linear algebra over polynomial rings and their Segre products.
//!
//! Complexes of free modules over a (multi)graded polynomial ring `S` are
//! stored with polynomial matrices ([`FreeComplex`]). Restricting them to a
//! line of degrees `e(j)` gives a [`GradedComplex`] of finite dimensional
//! vector spaces, one per internal degree `j`; for the diagonal line
//! `(i + j, j)` this is the Segre-module picture where `S(-a,-b)` becomes
//! `M_{i+b-a}(-b)`. Modules over the Segre product itself are handled by
//! [`RModule`], with minimal resolutions, Hom and Ext computed degree by degree.

mod complex;
mod diffc;
pub mod field;
mod graded;
pub mod linalg;
mod module;
pub mod poly;
pub mod recipes;

pub use complex::{free_label, monomial, var, ChainMap, FreeComplex, GenMap, Summand, Term};
pub use diffc::{diff_complex, diff_free_complex};
pub use graded::{alpha_complex, segre_label, DegreePiece, GradedComplex, HomologyTable};
pub use linalg::{IntMatrix, SparseVec};
use linalg::collect_sparse;
pub use module::{
    ext_dims, generation_degrees, hom_segre_check, Composer, Element, ExtTable, HomMap, HomSpace,
    RModule, Resolution, SegreRing,
};
pub use poly::PolyRing;

use std::sync::atomic::{AtomicBool, Ordering};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GradedError {
    #[error("integer overflow in exact arithmetic")]
    Overflow,
    #[error("at most {} variables are supported, got {0}", poly::MAX_VARS)]
    TooManyVariables(usize),
    #[error("entry ({row}, {col}) of a differential is not homogeneous of the expected degree")]
    Inhomogeneous { row: usize, col: usize },
    #[error("d∘d is nonzero at position {position} ({at})")]
    NotAComplex { position: usize, at: String },
    #[error("not a chain map at position {0}")]
    NotAChainMap(usize),
    #[error("split is not contiguous: a low summand maps to a high one at position {0}")]
    NonContiguousSplit(usize),
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("certification gap: {0}")]
    CertificationGap(String),
    #[error("ring: {0}")]
    Ring(#[from] crate::hilbert::HilbertError),
    #[error("{0}")]
    Invalid(String),
}

pub type Result<T> = std::result::Result<T, GradedError>;

static PARALLEL: AtomicBool = AtomicBool::new(cfg!(feature = "parallel"));

/// Turns per-degree parallelism on or off (only effective with the `parallel` feature).
pub fn set_parallel(on: bool) {
    PARALLEL.store(on, Ordering::Relaxed);
}

pub fn parallel_enabled() -> bool {
    cfg!(feature = "parallel") && PARALLEL.load(Ordering::Relaxed)
}

/// Serializes a `(index, degree) -> dim` table as a list of `[index, degree, dim]`.
fn triples<S: serde::Serializer>(m: &std::collections::BTreeMap<(usize, i64), usize>, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_seq(m.iter().map(|(&(k, d), &v)| (k, d, v)))
}

/// Maps `f` over `items`, in parallel when enabled; output order follows input order.
pub(crate) fn par_map<T, U, F>(items: Vec<T>, f: F) -> Vec<U>
where
    T: Send,
    U: Send,
    F: Fn(T) -> U + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        if parallel_enabled() {
            use rayon::prelude::*;
            return items.into_par_iter().map(f).collect();
        }
    }
    items.into_iter().map(f).collect()
}
