//! Exact decision of homomorphism-density domination `H ⪰ T` between forests.
//!
//! `H ⪰ T` means `t(H,G)^{e(T)} ≥ t(T,G)^{e(H)}` for every graph `G`. For
//! forests this holds exactly when the linear program `LP(H,T)` (one weight
//! per homomorphism `H → T`, one row per vertex and edge of `T`) has value
//! `e(T)`. Every verdict comes with a certificate: a primal weighting of
//! homomorphisms when `H ⪰ T`, a dual weighting of `T` otherwise.
//!
//! ```
//! use homdom_core::{domination, tree_catalog::Forest};
//!
//! let v = domination::decide(&Forest::path(6), &Forest::path(4), domination::Mode::Auto).unwrap();
//! assert!(v.dominates());
//! assert_eq!(v.lp_value.to_string(), "3");
//! ```

pub mod certificates;
pub mod conditions;
pub mod domination;
pub mod error;
pub mod exactlp;
pub mod falsifier;
pub mod graph;
pub mod hom;
pub mod poset;
pub mod tree_catalog;

pub use num_bigint::{BigInt, BigUint};
pub use num_rational::BigRational;

/// Exact rational used throughout.
pub type Q = BigRational;

pub use certificates::{DualCertificate, PrimalCertificate, VerificationReport};
pub use domination::{decide, Method, Mode, Relation, Verdict};
pub use error::{Error, Result};
pub use graph::Graph;
pub use hom::{CostVector, Footprint, Homomorphism};
pub use tree_catalog::{catalog, CanonicalCode, Forest, Lambda, TreeInvariants};

/// Parses `a` or `a/b` into an exact rational.
pub fn parse_rational(s: &str) -> Option<Q> {
    let s = s.trim();
    match s.split_once('/') {
        Some((a, b)) => {
            let a: BigInt = a.trim().parse().ok()?;
            let b: BigInt = b.trim().parse().ok()?;
            if b == BigInt::from(0) {
                return None;
            }
            Some(Q::new(a, b))
        }
        None => s.parse::<BigInt>().ok().map(Q::from_integer),
    }
}

/// Formats a rational as `a/b`, always with a denominator.
pub fn fraction_string(q: &Q) -> String {
    format!("{}/{}", q.numer(), q.denom())
}

#[cfg(test)]
pub(crate) fn q(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

#[cfg(test)]
pub(crate) fn qf(n: i64, d: i64) -> Q {
    Q::new(BigInt::from(n), BigInt::from(d))
}
