//! Simulation of non-adiabatic holonomic gates on NV-center qubits encoded in
//! decoherence-free subspaces and coupled through a shared cavity mode.
//!
//! The numeric core is generic over the real scalar ([`scalar::Real`]); the
//! aliases at the crate root fix it to `f64`, which is what the experiment
//! drivers and the CLI use. `f32` aliases exist for callers that want the
//! algebra without the accuracy.

pub mod analysis;
pub mod dynamics;
pub mod error;
pub mod hilbert;
pub mod holonomy;
pub mod model;
pub mod scalar;

pub use error::{Error, Result};
pub use scalar::Real;

pub type Operator = hilbert::Operator<f64>;
pub type Operator32 = hilbert::Operator<f32>;
pub type CMatrix = scalar::CMatrix<f64>;
pub type CVector = scalar::CVector<f64>;
pub type DensityState = dynamics::DensityState<f64>;
pub type PhysicalParams = model::PhysicalParams<f64>;
pub type GateSpec = holonomy::GateSpec<f64>;
pub type GateDrive = model::GateDrive<f64>;

#[cfg(test)]
mod properties;
