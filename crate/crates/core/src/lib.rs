//! Exact computations with toric blending functions, toric fiber products,
//! Horn pairs and closed-form maximum likelihood estimates.

pub mod arith;
pub mod blending;
pub mod geometry;
pub mod horn;
pub mod io;
pub mod linalg;
pub mod mle;
pub mod models;
pub mod tfp;

use thiserror::Error;

/// Any error raised by this crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error(transparent)]
    Arith(#[from] arith::ArithError),
    #[error(transparent)]
    Geometry(#[from] geometry::GeometryError),
    #[error(transparent)]
    Blending(#[from] blending::BlendingError),
    #[error(transparent)]
    Tfp(#[from] tfp::TfpError),
    #[error(transparent)]
    Horn(#[from] horn::HornError),
    #[error(transparent)]
    Mle(#[from] mle::MleError),
    #[error(transparent)]
    Io(#[from] io::IoError),
}
