//! Numerical toolkit for extended nonlocal games.
//!
//! An extended nonlocal game is a cooperative game in which the referee
//! holds a quantum register supplied by the two players and decides
//! win/lose by measuring it. This crate computes the standard bounds on
//! the value of such a game:
//!
//! * the unentangled value (exact, by enumeration of deterministic
//!   strategies),
//! * the non-signaling value (a semidefinite program over assemblages),
//! * upper bounds on the standard quantum value from a moment-matrix
//!   hierarchy,
//! * lower bounds from see-saw alternating optimization, together with
//!   an explicit strategy.
//!
//! Monogamy-of-entanglement games are supported as a special case,
//! including parallel repetition and the closed-form repetition bounds.
//!
//! Everything runs on an embedded dense primal-dual interior-point SDP
//! solver; there are no external numerical dependencies. The crate is
//! `no_std` (with `alloc`), so all IO lives in the companion CLI crate.

#![no_std]
#![deny(unsafe_code)]

extern crate alloc;

#[cfg(test)]
extern crate std;

pub mod bounds;
pub mod error;
pub mod games;
pub mod linalg;
pub mod monogamy;
pub mod sdp;
#[cfg(test)]
pub(crate) mod testutil;
pub mod tol;
pub mod words;

pub use error::Error;

/// Crate-wide result type.
pub type Result<T> = core::result::Result<T, Error>;
