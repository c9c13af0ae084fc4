//! Partitions and symmetric-function identities: Newton's formula, the
//! partition expansion of `e_n` in power sums, the closed formula for
//! `p_{N+1}`, and the enumeration of monic reciprocal polynomials with
//! bounded power sums.
//!
//! Everything here is exact; power sums are always computed from
//! coefficients and never from numerical roots.
//!
//! Bounded power sums are read two-sidedly, `|p_k| <= δ`.

mod identities;
mod partition;
mod reciprocal;

pub use identities::{
    coefficient_bound, elementary_by_newton, elementary_from_power, newton_check, p_next, power_from_coefficients,
    power_sums, NextPowerSum,
};
pub use partition::{partitions_of, partitions_with_cap, Partition, DEFAULT_PARTITION_CAP};
pub use reciprocal::{
    enumerate_bounded_reciprocal, enumerate_bounded_reciprocal_with, ReciprocalPoly, DEFAULT_ENUMERATION_DEGREE_CAP,
};
