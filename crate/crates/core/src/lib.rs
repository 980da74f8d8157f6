//! Petri nets and their word-rewriting and wire-diagram presentations.
//!
//! The crate is organised around one running idea: a place/transition net, a
//! commutative word rewriting system, and two kinds of generator-based wire
//! calculi all present the same reachability and path-equivalence data, and the
//! translations between them are exact enough to be checked mechanically.
//!
//! * [`algebra`] — finite alphabets, multisets (free commutative monoid) and
//!   words (free monoid) over interned symbols.
//! * [`net`] — place/transition nets, firing, bounded reachability graphs, and
//!   the path congruence generated by swapping independent firings.
//! * [`rws`] — commutative word rewriting systems and the structural
//!   translation to and from nets.
//! * [`slice`] — generic sliced 2-arrows (sequences of whiskered cells),
//!   interchange of independent slices, and canonical slicings.
//! * [`poly2`] — the two-dimensional presentation with explicit crossing
//!   cells: permutation lifting, the projection functor onto net paths, and
//!   path lifting.
//! * [`rewrite`] — the refined wire calculus with duplication and split
//!   cells, its rewriting engine, normal forms, and critical pairs.
//! * [`poly3`] — the three-dimensional presentation where markings collapse
//!   to multisets; triples, their canonicalisation, and the exchange
//!   congruence delegated to net paths.
//!
//! The crate is `no_std` (it allocates, but performs no IO); the companion
//! CLI crate carries file formats and command-line tooling.

#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod algebra;
pub mod net;
pub mod poly2;
pub mod poly3;
pub mod rewrite;
pub mod rws;
pub mod slice;

pub use algebra::{parikh, Alphabet, Multiset, Symbol, Word};
pub use net::{NetPath, PetriNet, ReachLimits, ReductionGraph, ReductionStep, RuleTable};
pub use rws::CommRws;
