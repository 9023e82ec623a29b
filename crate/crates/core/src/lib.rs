//! Exact construction and verification of U(2)-invariant Bach-flat Kähler metrics
//! on the total space of O(−m) and on Hirzebruch surfaces.
//!
//! Everything that can be decided exactly is decided in Q or Q(√d):
//! profile polynomials, root isolation, cone weights, curvature tensors at
//! rational points. Only volume-growth probes use floating point.

pub mod error;
pub mod exact;
pub mod field;
pub mod identity;
pub mod interval;
pub mod linalg;
pub mod poly;
pub mod roots;
pub mod surd;

pub mod ansatz;
pub mod classifier;
pub mod conesolver;
pub mod convexity;
pub mod curvlab;
pub mod geoprobe;
pub mod jet;
pub mod report;
pub mod suites;
pub mod verify;

pub use error::{Error, Result};
pub use exact::{int, parse_rat, rat, Rat};
pub use field::Field;
pub use poly::Poly;
pub use roots::IsolatedRoot;
pub use surd::Surd;
