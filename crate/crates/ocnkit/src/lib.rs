//! One-counter net toolkit: parsing and semantics, membership checking,
//! linear-form path canonicalization, universality deciders for
//! singleton-alphabet, deterministic, and unambiguous nets, two-counter
//! machine reduction nets, and brute-force test oracles.
//!
//! A one-counter net is a finite automaton with one non-negative integer
//! counter that transitions add to or subtract from; there is no zero
//! test, so a run is blocked exactly when the counter would go negative.

pub mod det;
pub mod forms;
pub mod ocn;
pub mod oracle;
pub mod reduction;
pub mod unamb;
pub mod unary;
pub mod verdict;
