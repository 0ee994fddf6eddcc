//! Higher-arity ends, coends and dinatural transformations of Set-valued functors on
//! finite categories.
//!
//! A functor of signature `(p, q)` lives on `C^{(p,q)} = (C^op)^p × C^q`; its first `p`
//! slots are contravariant. Everything is computed by exhaustive enumeration, so sizes are
//! bounded by [`Limits`].

pub mod apps;
pub mod dinat;
pub mod ends;
pub mod error;
pub mod fincat;
pub mod functor;
pub mod gen;
pub mod kusarigama;
pub mod search;
pub mod setops;
pub mod twisted;

pub use error::{Error, Result, Violation};
pub use fincat::{FinCat, Functor, Mor, Obj, Sig};
pub use functor::{Integrand, NatTransf, SetFunctor, SetFunctorPQ};
pub use setops::{FinFn, FinSet, Label, QuotResult, SubResult};

/// Default bound on the size of any intermediate set or search.
pub const DEFAULT_CAP: usize = 1_000_000;

/// Resource bounds shared by every computation.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Limits {
    pub cap: usize,
}

impl Default for Limits {
    fn default() -> Self {
        Limits { cap: DEFAULT_CAP }
    }
}

impl Limits {
    pub fn new(cap: usize) -> Self {
        Limits { cap }
    }

    /// Default limits, overridden by `HACE_CAP` when it parses as an integer.
    pub fn from_env() -> Self {
        std::env::var("HACE_CAP")
            .ok()
            .and_then(|s| s.trim().parse().ok())
            .map(Limits::new)
            .unwrap_or_default()
    }
}

/// Mixed-radix decoding, first digit most significant.
pub fn decode_into(mut idx: usize, radices: &[usize], digits: &mut [usize]) {
    for k in (0..radices.len()).rev() {
        digits[k] = idx % radices[k];
        idx /= radices[k];
    }
}

pub fn decode(idx: usize, radices: &[usize]) -> Vec<usize> {
    let mut d = vec![0; radices.len()];
    decode_into(idx, radices, &mut d);
    d
}

pub fn encode(digits: &[usize], radices: &[usize]) -> usize {
    digits
        .iter()
        .zip(radices)
        .fold(0, |acc, (&d, &r)| acc * r + d)
}
