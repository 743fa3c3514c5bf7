//! Exact arithmetic for n-monogenized cubic rings and their 2-torsion
//! class group statistics.
//!
//! The library works with four interlocking gadgets:
//!
//! * binary cubic forms `(a,b,c,d)` with the twisted GL2 action, their
//!   invariants `I`, `J`, the discriminant and the height (module [`cubic`]);
//! * pairs of integral ternary quadratic forms `(A,B)` with the cubic
//!   resolvent `4 det(Ax - By)`, sections, real splitting types and the
//!   genus invariants `kappa_p`, `kappa_infty` (module [`ternary`]);
//! * local data at a prime: splitting types, maximality, sufficient
//!   ramification, and the exact mod-p^2 densities (module [`padic`]),
//!   together with the etale-algebra mass combinatorics (module [`mass`]);
//! * height-bounded enumeration of normalized forms with fixed or bounded
//!   index (module [`enumerate`]), orbit censuses counting SL3(Z)-orbits
//!   above a fixed cubic form (modules [`quartic`], [`orbits`]), a
//!   classical class-group oracle for cross-validation (module [`oracle`]),
//!   and the statistics layer tying counts to predicted averages
//!   (module [`stats`]).
//!
//! Everything that feeds a theorem-level comparison is exact: integers are
//! `i64`/`i128` with overflow headroom derived from proven bounds, or
//! arbitrary precision where ranges are unbounded; densities and masses are
//! exact rationals. Floating point appears only to bracket search windows
//! (always widened before use) and inside the oracle's unit search (where
//! results are certified by exact re-checks).

#![cfg_attr(not(feature = "std"), no_std)]
#![deny(unsafe_code)]

extern crate alloc;

pub mod cubic;
pub mod enumerate;
pub mod int;
pub mod mass;
pub mod oracle;
pub mod orbits;
pub mod padic;
pub mod quartic;
pub mod ternary;

pub use cubic::{BinaryCubicForm, CubicInvariants, GL2Element};
pub use ternary::{PairTQF, TernaryQuadraticForm};
