//! Exact counting of non-negative solutions of `a_1 x_1 + .. + a_k x_k = n`
//! (the denumerant), Blom-Fröberg numbers, two-sided bounds for the
//! denumerant and the extended denumerant, Frobenius-number bounds, and a
//! seeded harness that checks all of it against brute force.

pub mod bfnum;
pub mod bounds;
pub mod cli;
pub mod error;
pub mod exact;
pub mod frobenius;
pub mod powersum;
pub mod rational;
pub mod tuple;
pub mod verify;

pub use error::{Error, Result};
pub use rational::ExactRational;
pub use tuple::{gcd_chain, CoefficientTuple, GcdChain};
