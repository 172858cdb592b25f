//! Exact modular data of the representation category of the quantum double of SL(2,q).

pub mod braid;
pub mod catalog;
pub mod chars;
pub mod cli;
pub mod context;
pub mod cyclo;
pub mod dw;
pub mod error;
pub mod fusion;
pub mod gf;
pub mod modular;
pub mod sl2;

pub use context::Mtc;
pub use error::{Error, Result};
