//! Guided string rewriting over token alphabets, and the automaton
//! constructions that keep the rewritten languages regular.
//!
//! The crate has five layers:
//!
//! * [`symbols`] defines alphabets, strings, adjustment relations
//!   (equivalences on the alphabet) and guide sets, plus the system
//!   definition text format.
//! * [`rewrite`] implements the two rewriting engines: length-preserving
//!   guided rewriting and guided insertion/deletion around a distinguished
//!   zero symbol. Both come with brute-force per-string closures that the
//!   test suites use as oracles.
//! * [`slice`] is the slice-sequence calculus: per-position summaries of a
//!   rewrite history, cuts between neighbouring slices, the chunk order,
//!   and the yield-preserving translations in both directions.
//! * [`automata`] is a self-contained DFA/NFA toolkit with boolean
//!   operations, homomorphic image and preimage, bounded enumeration, a
//!   small regex front-end, and a text file format.
//! * [`closure`] compiles a DFA for a language L into an NFA for its
//!   rewrite closure, and (via run-length compression) for its
//!   insertion/deletion closure.
//!
//! The crate is `no_std` with `alloc`; all file IO lives in the companion
//! CLI crate.

#![no_std]
#![forbid(unsafe_code)]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod automata;
pub mod closure;
pub mod rewrite;
pub mod slice;
pub mod symbols;
