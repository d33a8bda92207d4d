#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod bias;
pub mod canon;
pub mod catalog;
pub mod constraints;
pub mod eval;
pub mod flat;
pub mod generator;
pub mod learner;
pub mod musp;
pub mod subst;
pub mod subsume;
pub mod term;
