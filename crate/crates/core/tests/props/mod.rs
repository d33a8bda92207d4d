//! Randomized checks against brute-force oracles, shared with the
//! acceptance run.

#![allow(dead_code)]

pub mod common;
pub mod fixpoint;
pub mod musp_lattice;
pub mod pruning;
pub mod subsumption;
