//! Exact arithmetic for bounds on the minimal translation length of
//! pseudo-Anosov mapping classes acting on the curve complex.
//!
//! The crate is organised around five computational layers:
//!
//! * [`exactmat`]: arbitrary-precision integer matrices, support propagation,
//!   primitivity, Perron roots and characteristic polynomials.
//! * [`penner`]: the block transition matrix of a Penner sequence and the
//!   support-vanishing certificate behind its upper bound.
//! * [`symfun`]: partitions, Newton's identities, the partition expansion of
//!   elementary symmetric polynomials and the bounded reciprocal polynomial
//!   enumeration.
//! * [`homology`]: Dehn twists as symplectic transvections, Lefschetz
//!   numbers and the escape-iterate search.
//! * [`bounds`]: closed-form lower and upper bounds and log-log slope fits.
//!
//! Batch drivers (grids of certificates, enumeration boxes, random trials)
//! run on rayon when the `parallel` feature is enabled and fall back to a
//! sequential loop otherwise; see [`parallel`].

pub mod bounds;
pub mod error;
pub mod exactmat;
pub mod homology;
pub mod parallel;
pub mod penner;
pub mod rational;
pub mod symfun;

pub use error::{Error, Result};
