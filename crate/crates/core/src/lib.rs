//! Casimir-Polder interaction of a ground-state atom with a planar wall at
//! finite temperature, from the Lifshitz formula and its asymptotic limits.

// `!(x > 0.0)` is how NaN inputs get rejected along with the out-of-range ones
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod asymptotics;
pub mod atoms;
pub mod config;
pub mod lifshitz;
pub mod materials;
pub mod phenomenology;
pub mod quadrature;
pub mod selfcheck;
pub mod special;
pub mod sweep;
pub mod units;
