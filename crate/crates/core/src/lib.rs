//! Geometry problem generation from a symbolic deduction engine.
#![no_std]

extern crate alloc;
#[cfg(feature = "std")]
extern crate std;

pub mod formal;
pub mod numeric;
pub mod deduction;
pub mod data;
pub mod generator;
pub mod render;
pub mod table;
