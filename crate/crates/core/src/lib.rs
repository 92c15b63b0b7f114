pub mod elliptic;
pub mod error;

pub use elliptic::{EllipticValue, Lattice};
pub use error::{Error, Result};
pub use num_complex::Complex64;
pub mod jets;
pub use jets::{Jet, PairKind};
pub mod spin;
pub use spin::{ParticlePerm, PermOp, SpinField};
pub mod operators;
pub use operators::{CouplingContext, Operator};
pub mod eigen;
pub use eigen::{EigenData, WaveParams};
pub mod spectrum;
pub use spectrum::{Level, Spectrum, SpectrumOptions};
pub mod verify;
