//! Exact communication protocols, Hamming-scheme spectra and Lovász theta
//! certificates.
//!
//! The crate is organised bottom-up: [`numerics`] and [`bits`] provide exact
//! arithmetic and bitstrings, [`krawtchouk`] and [`graphs`] describe the
//! Hamming scheme, [`theta`], [`linopt`] and [`orthrep`] give the spectral and
//! LP bounds, and [`qsim`] drives the protocol simulations in [`protocols`].
//! [`bounds`] collects the closed-form bound calculators.

pub mod bits;
pub mod bounds;
pub mod error;
pub mod graphs;
pub mod krawtchouk;
pub mod linopt;
pub mod numerics;
pub mod orthrep;
pub mod protocols;
pub mod qsim;
pub mod theta;

pub use bits::BitString;
pub use error::{Error, Result};
pub use graphs::{Graph, ListFamily};
pub use krawtchouk::HammingSpectrum;
pub use linopt::{LpProblem, LpSolution, LpStatus};
pub use numerics::{Rational, SymTridiag};
pub use orthrep::{MultilinearPoly, OrthRep};
pub use protocols::{ClassicalProtocol, ProtocolRun, QuantumProtocolSpec};
pub use qsim::{GroverParams, StateVector};
pub use theta::ThetaCertificate;
