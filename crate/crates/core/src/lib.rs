//! Maximum-likelihood decoding of polar codes by Grover adaptive search (GAS),
//! verified end to end by classical simulation.
//!
//! The crate covers the whole pipeline: polar encoding and its CNOT-schedule
//! mirror, BPSK / Gray-coded 2^M-PAM symbol mapping over an AWGN channel,
//! multilinear binary objectives (including the conventional constraint-based
//! QUBO baseline), an exact statevector simulator for the GAS circuits, the
//! adaptive-threshold search loop itself, brute-force reference decoders, and
//! a reproducible experiment harness with a CLI front end.
//!
//! Entry points:
//! - [`polar::PolarCode`]: code model, encoding, codeword enumeration
//! - [`modem`]: symbol maps, Gray/natural bit transforms, AWGN channel
//! - [`objective`]: objective-function construction over binary variables
//! - [`sim`]: gate-level statevector simulation of the GAS circuits
//! - [`gas`]: the adaptive search loop with statevector and analytic backends
//! - [`baseline`]: exhaustive ML and brute-force QUBO references
//! - [`experiment`]: BLER and query-complexity batch drivers

pub mod baseline;
pub mod bits;
pub mod cli;
pub mod error;
pub mod experiment;
pub mod gas;
pub mod instance;
pub mod modem;
pub mod objective;
pub mod polar;
pub mod poly;
pub mod sim;

pub use error::{Error, Result};
