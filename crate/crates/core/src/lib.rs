//! Surface deflection of thin transversely isotropic layers bonded to a rigid
//! substrate and coated with a thin elastic membrane.
//!
//! The crate provides
//! - elastic constants and the plane-stress reduction of the coating
//!   ([`material`]),
//! - the membrane boundary operator ([`membrane`]),
//! - periodic grids, fields and spectral operators ([`spectral`], [`io`]),
//! - the asymptotic indentation models and their transfer kernels
//!   ([`model`]),
//! - an exact per-wavenumber solution of the full layer problem used as the
//!   reference for the asymptotic models ([`oracle`]).

// negated comparisons are used on purpose so that NaN fails every check
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod io;
pub mod material;
pub mod membrane;
pub mod model;
pub mod oracle;
pub mod spectral;

pub use error::{Error, Result};
pub use material::{ElasticConstants, MembraneConstants};
pub use model::{Coating, LayerSystem, ModelKind, TransferRecord};
pub use spectral::{PeriodicGrid, PressureLoad, ScalarField, VectorField};
