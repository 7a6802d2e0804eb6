//! A sequent calculus for the Tamari order.
//!
//! The Tamari order is the partial order on binary trees generated by the
//! right rotation `(A*B)*C <= A*(B*C)` under monotone contexts. This crate
//! decides the order via unique focused sequent derivations, transforms
//! arbitrary derivations to focused form, counts Tamari intervals exactly
//! via generating-function recurrences, and realizes the bijection between
//! Tamari intervals and closed indecomposable beta-normal planar lambda
//! terms.

pub mod calculus;
pub mod counting;
pub mod lambda;
pub mod order;
pub mod syntax;

pub use calculus::{Derivation, Rule};
pub use syntax::{Atom, Context, Formula, Sequent, SequentClass};
