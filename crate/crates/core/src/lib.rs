//! Exact symbolic asymptotics for Ricci-flat ALE metrics in harmonic
//! coordinates.
//!
//! The building blocks are sparse rational polynomials ([`poly`]), finite
//! sums of terms `r^sigma (log r)^i G_m` ([`expansion`]) and a termwise
//! inverse of the Laplacian ([`poisson`]). [`metric`] assembles them into the
//! order-by-order construction of the metric; [`kelvin`] and [`numeric`]
//! provide independent checks.

pub mod error;
pub mod expansion;
pub mod kelvin;
pub mod metric;
pub mod numeric;
pub mod poisson;
pub mod poly;
pub mod random;
pub mod rational;
pub mod serial;

pub use error::{Error, Result};
pub use expansion::{Expansion, Term, TermKey};
pub use poly::{HarmonicPoly, Poly};
pub use rational::Rational;
