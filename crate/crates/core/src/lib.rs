pub mod cli;
pub mod csp;
pub mod dksh;
pub mod error;
pub mod experiments;
pub mod games;
pub mod info;
pub mod lp;
pub mod oracle;
pub mod rational;
pub mod rng;
pub mod rounding;
pub mod sa;
pub mod subset;

pub use error::{Error, Result};
