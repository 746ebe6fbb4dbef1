//! Counting statistics for twisted XXX spin-1/2 chains: an exact
//! finite-size oracle plus a modified-Bethe-ansatz form-factor pipeline
//! that reproduces it.

pub mod error;
pub mod num;
pub mod bethe;
pub mod oracle;
pub mod twist;

pub use error::{Error, Result};
pub use num::{c, C64, CMatrix, CPoly};
pub use twist::{CountingSpec, RhoData, Side, SideParams, Twist};
