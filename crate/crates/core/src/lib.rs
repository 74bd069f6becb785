//! Finite unary algebras and their subdirect powers.
//!
//! The crate revolves around [`UnaryAlgebra`], a finite carrier `{0, .., n-1}`
//! together with named unary operations given as value tables. On top of that
//! it provides:
//!
//! * type classification ([`UnaryAlgebra::classify_type`]): an algebra is of
//!   countable type exactly when every basic operation is a bijection or a
//!   constant, and of uncountable type otherwise;
//! * the transformation monoid generated by the basic operations
//!   ([`monoid`]), congruence lattices and subdirect irreducibility
//!   ([`congruence`]);
//! * the labelled digraph of an algebra with component, strong-component and
//!   outer-section analysis ([`digraph`]);
//! * finite powers, tuple content/format, generated subpowers and diagonals
//!   ([`powers`]);
//! * canonical forms and isomorphism testing ([`iso`]);
//! * construction and verification of families of pairwise non-isomorphic
//!   subdirect powers over an uncountable-type base ([`witness`]);
//! * a small collection of worked structures: the three-element chain
//!   algebra, cycle lengths, transposition distance and boolean powers
//!   ([`casebook`]).
//!
//! Everything is deterministic: equal inputs produce byte-equal outputs, and
//! all element orderings are fixed (lexicographic tuples, breadth-first
//! monoid words, partition blocks by least member).

pub mod algebra;
pub mod casebook;
pub mod congruence;
pub mod digraph;
pub mod error;
pub mod format;
pub mod iso;
pub mod monoid;
pub mod partition;
pub mod powers;
pub mod witness;

pub use algebra::{op_kind, OpKind, Operation, TypeVerdict, UnaryAlgebra};
pub use error::{Error, Result};
pub use partition::Partition;

/// Resource limits for the operations that can blow up combinatorially.
///
/// The defaults keep every operation comfortably inside desk-scale budgets;
/// callers (and the CLI flags `--cap-carrier` / `--cap-elements`) can raise
/// them deliberately.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Limits {
    /// Largest carrier admitted by monoid generation.
    pub max_monoid_carrier: usize,
    /// Largest carrier admitted by congruence-lattice enumeration.
    pub max_congruence_carrier: usize,
    /// Largest element count admitted by subpower closure and by the
    /// exhaustive tuple enumerations (monogenic enumeration, boolean powers).
    pub max_elements: usize,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            max_monoid_carrier: 8,
            max_congruence_carrier: 9,
            max_elements: 1_000_000,
        }
    }
}

impl Limits {
    /// Checks `requested <= self.max_elements`, reporting `what` on failure.
    pub(crate) fn check_elements(&self, what: &'static str, requested: u128) -> Result<()> {
        if requested > self.max_elements as u128 {
            return Err(Error::Capacity {
                what,
                requested,
                limit: self.max_elements as u128,
            });
        }
        Ok(())
    }
}
