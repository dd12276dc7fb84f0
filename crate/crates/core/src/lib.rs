//! Exact solver for the weighted maximum vanishing subspace problem (WMVSP)
//! on partitioned matrices.
//!
//! The solver runs a splitting proximal point iteration on the orthoscheme
//! complex of the product of subspace lattices, with exact rational
//! coordinates. Around it sit a quasi-DM block-triangularization, an nc-rank
//! variant, and a brute-force oracle for small finite fields.
//!
//! Everything is generic over [`Field`]; the aliases below fix the two fields
//! shipped with the crate.

pub mod bilinear;
pub mod error;
pub mod field;
pub mod format;
pub mod frame;
pub mod matrix;
pub mod oracle;
pub mod orthoscheme;
pub mod qdm;
pub mod resolvent;
pub mod sppa;
pub mod subspace;

pub use bilinear::Bilinear;
pub use error::{Error, Result};
pub use field::{Field, FieldTag, Gf, Q};
pub use frame::{AOrthFrame, FrameL, FrameM};
pub use matrix::Mat;
pub use orthoscheme::{ComplexPoint, ProductPoint};
pub use sppa::{Certificate, SolutionReport, SolverConfig, WmvspInstance};
pub use subspace::{Orientation, Subspace, SubspaceChain};

/// Exact rational used for convex-combination coefficients and cube coordinates.
pub type Rat = malachite_q::Rational;

pub type GfMat = Mat<Gf>;
pub type QMat = Mat<Q>;
pub type GfSubspace = Subspace<Gf>;
pub type QSubspace = Subspace<Q>;
pub type GfInstance = WmvspInstance<Gf>;
pub type QInstance = WmvspInstance<Q>;
