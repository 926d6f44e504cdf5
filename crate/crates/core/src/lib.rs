//! Numerics for the dualmon: a superconducting circuit made of a Josephson
//! junction in parallel with a quantum phase-slip wire, whose Hamiltonian is
//! periodic in both charge and flux.
//!
//! The library is generic over the floating-point scalar ([`Real`], f32 or
//! f64). The aliases at the crate root fix `f64`, which is what every
//! tolerance in the test suite assumes.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod circuit;
pub mod elementary;
pub mod error;
pub mod fock;
pub mod grid;
pub mod io;
pub mod open_system;
pub mod perturbation;
pub mod scalar;
pub mod spectroscopy;

pub use circuit::{wrap, BiasPoint, CircuitParams, Renormalized, ZakPoint};
pub use error::{Error, Result};
pub use grid::GridSpec;
pub use scalar::{Cplx, Real};

pub type Params = circuit::CircuitParams<f64>;
pub type Point = circuit::ZakPoint<f64>;
pub type Bias = circuit::BiasPoint<f64>;
pub type Noise = elementary::NoiseSpec<f64>;
pub type Operator = fock::TruncatedOperator<f64>;
pub type Bands = fock::BandGrid<f64>;
pub type Model = open_system::LindbladModel<f64>;
pub type Environment = open_system::ThermalEnvironment<f64>;
pub type Waveguide = spectroscopy::WaveguideParams<f64>;
pub type Trace = spectroscopy::TransmissionTrace<f64>;
