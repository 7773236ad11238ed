//! Workbench for symmetric generation of groups.
//!
//! The library builds progenitors `2^*n : N` from permutation actions of a
//! control group `N`, expands symmetric presentations into ordinary ones,
//! enumerates cosets with a Todd-Coxeter engine, analyses the resulting
//! double cosets `N w N`, and uses finished coset tables for succinct
//! `pi * w` element arithmetic.
//!
//! Module map:
//! * [`perm`], [`group`], [`action`] - permutation groups on finite point
//!   sets, stabilizer chains, induced actions.
//! * [`coset`] - single-coset Todd-Coxeter enumeration over a subgroup of a
//!   finitely presented group.
//! * [`words`] - generator maps, word-labelled stabilizer chains, and
//!   presentations derived from verified chains.
//! * [`golay`], [`matchstick`] - the binary Golay code, S(5,8,24) blocks,
//!   Mathieu groups, and the GF(2)^4 matchstick geometry.
//! * [`weyl`] - root systems of types A/D/E and their reflection groups,
//!   used as an independent oracle.
//! * [`progenitor`] - progenitors, symmetric relations, expansion,
//!   enumeration and double-coset analysis.
//! * [`catalog`] - the ledger of symmetric presentations with expected
//!   results and scale classes.
//! * [`symrep`] - canonical `pi * w` representation of target-group
//!   elements with multiplication and inversion.
//! * [`text`] - cycle notation, relation expressions and the job config
//!   grammar shared with the CLI.

pub mod action;
pub mod catalog;
pub mod coset;
pub mod golay;
pub mod group;
pub mod matchstick;
pub mod perm;
pub mod progenitor;
pub mod symrep;
pub mod text;
pub mod weyl;
pub mod words;

pub use perm::Permutation;
pub use group::PermutationGroup;
