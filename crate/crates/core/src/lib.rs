//! Phase-shift-keyed quantum channels seeded by coherent and noiselessly
//! amplified coherent states.
//!
//! The pipeline is split the same way the physics is:
//!
//! - [`fock`]: truncated Fock-basis density matrices for coherent and
//!   first-order NLA-amplified coherent seeds.
//! - [`noise`]: the dephasing strength σ(t) for static and power-law
//!   Gaussian environments, and the dephasing map itself.
//! - [`povm`]: covariant phase POVMs (canonical and Husimi-Q), the bin
//!   resolution function and outcome probabilities.
//! - [`channel`]: mutual information, receiver/amplifier ratios and the
//!   amplitude-channel baseline.
//! - [`sweep`]: parameter sweeps, figure presets and CSV output used by the
//!   `psk-nla` binary.

pub mod channel;
pub mod error;
pub mod fock;
pub mod noise;
pub mod povm;
pub mod quadrature;
pub mod selftest;
pub mod sweep;

pub use channel::{
    amplification_ratio, amplitude_capacity, mutual_information, phase_vs_amplitude_ratio,
    receiver_ratio, ChannelConfig, ChannelResult, Truncation,
};
pub use error::{Error, Result};
pub use fock::{DensityMatrix, SeedSpec};
pub use noise::{DephasingFactorTable, NoiseModel, PowerLawParams};
pub use povm::{AlphabetSpec, PhasePovm, PovmKind};
