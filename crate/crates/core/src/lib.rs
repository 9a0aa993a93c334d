#![no_std]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod abelian;
pub mod error;
pub mod exact;
pub mod linalg;
pub mod linking;
pub mod metab;
pub mod dfun;
pub mod obstruct;

pub use error::{Error, Result};
