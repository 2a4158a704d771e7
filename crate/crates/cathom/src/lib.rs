//! Exact homological algebra over finite EI categories.
//!
//! The crate decides, at desk scale and entirely over ℚ:
//!
//! - the unique factorisation property of a finite EI category and the
//!   hereditarity of its category algebra ([`fincat`], [`catalg`]),
//! - orbit categories of finite groups and the cyclic-prime-power
//!   criterion ([`orbitcat`]),
//! - Bredon homology of cellular diagram complexes, Künneth identities,
//!   derived splitting obstructions and Chern character decompositions
//!   ([`bredon`]),
//! - the Mackey algebra on the induction–conjugation–restriction basis,
//!   its semisimplicity, the explicit projectivity isomorphism over the
//!   orbit category, Mackey extensions of orbit modules, and the infinite
//!   dihedral non-regularity witness ([`mackey`]).
//!
//! Every computation is exact; certificates (witness chains, splitting
//! maps, obstruction representatives) are returned as data and re-checked
//! by the test suite. The `cathom` binary exposes the same operations as
//! CLI subcommands emitting JSON reports; `examples/` holds one runnable
//! example per capability.

pub mod algebra;
pub mod bredon;
pub mod catalg;
pub mod catalog;
pub mod cli;
pub mod exactla;
pub mod fincat;
pub mod formats;
pub mod mackey;
pub mod orbitcat;
pub mod report;
