//! Grassmann characteristic-function calculus for qubit quantum
//! channels: an exact anticommuting-variable kernel, graded hybrid
//! operators, characteristic functions, Green-function channel
//! representations, Gaussian channel classification and degradability
//! verdicts, all cross-checked against a dense-matrix oracle.

pub mod charfn;
pub mod error;
pub mod gaussian;
pub mod grassmann;
pub mod green;
pub mod hybrid;
pub mod oracle;
pub mod sample;
pub mod selftest;

pub use error::{Error, Result};

// re-exported so downstream users hit the same versions the public API uses
pub use nalgebra;
pub use num_complex;
