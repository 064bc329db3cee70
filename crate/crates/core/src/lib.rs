//! Two-qubit open-system dynamics under independent weak noises.
//!
//! A single qubit hit by amplitude and phase noise at once loses coherence
//! at the sum of the two rates. A pair of qubits does not lose entanglement
//! that way: under the same noises the concurrence of a broad class of mixed
//! states drops to exactly zero in finite time. This crate builds the noise
//! channels, evolves states with them, cross-checks the evolution against an
//! RK4 integration of the master equation and against closed forms, and
//! locates and classifies the sudden-death times.
//!
//! Numerics are generic over [`Real`] (`f32` or `f64`); the aliases at the
//! crate root fix `f64`, which is what the tolerances are written for.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod analytic;
pub mod channels;
pub mod entanglement;
pub mod error;
pub mod qmat;
pub mod scalar;
pub mod validate;

pub use error::{Error, Result};
pub use scalar::Real;

pub type Complex = num_complex::Complex<f64>;
pub type ComplexMat = qmat::ComplexMat<f64>;
pub type DensityMatrix = qmat::DensityMatrix<f64>;
pub type KrausChannel = channels::KrausChannel<f64>;
pub type NoiseSpec = channels::NoiseSpec<f64>;
pub type XState = entanglement::XState<f64>;
pub type DecayClass = entanglement::DecayClass<f64>;
pub type ConcurrenceTrace = entanglement::ConcurrenceTrace<f64>;
pub type LambdaFamily = analytic::LambdaFamily<f64>;

pub use channels::{NoiseKind, Qubit};
pub use entanglement::DiagramGrid;
