//! Computational toolkit for finite partially multiplicative quandles (PMQs).
//!
//! Starting from explicit tables the crate validates PMQs and PMQ-group
//! pairs, enumerates the graded completion monoid, computes the finite
//! inner-automorphism image of the enveloping group and its abelianization,
//! counts Hurwitz braid orbits, builds the invariant ring `𝒜(Q)` with its
//! grading and structure constants, and, for trivial-product PMQs, the
//! Sullivan model and the stable Betti numbers of classical Hurwitz spaces.

pub mod aq;
pub mod builtins;
pub mod cdga;
pub mod completion;
pub mod construct;
pub mod crosscheck;
pub mod enveloping;
pub mod error;
pub mod group;
pub mod hurwitz;
pub mod io;
pub mod pair;
pub mod pmq;
pub mod snf;
pub mod sullivan;

pub use error::{Error, ErrorKind, Result};
