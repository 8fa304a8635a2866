// SPDX-License-Identifier: Apache-2.0

//! Metric invariants of binary Reed-Muller codes.
//!
//! The crate computes covering radii, metric complements (deep holes) and
//! metric regularity of Reed-Muller codes `RM(k, m)` and of small generic
//! binary linear codes. It contains:
//!
//! * [`boolfn`]: Boolean functions as truth tables, algebraic normal forms,
//!   Walsh spectra and affine substitutions of variables.
//! * [`gf2linalg`]: bit-packed linear algebra over GF(2).
//! * [`rmcodes`]: linear codes, coset scans, covering radius, metric
//!   complement and second complement.
//! * [`syndrome`]: syndrome matrices of the punctured code `RM(m-3, m)`,
//!   minimal factors, complement generators and extended linear equivalence.
//! * [`oracle`]: brute-force reference computations used for cross-checks.
//! * [`classify15`]: the even-weight coset classes of `RM(1, 5)` and the
//!   verification tables built on them.

pub mod boolfn;
pub mod classify15;
mod error;
pub mod gf2linalg;
pub mod oracle;
pub mod parallel;
pub mod rmcodes;
pub mod syndrome;

pub use error::{Error, Result};
