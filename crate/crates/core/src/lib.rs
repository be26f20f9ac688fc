//! Desk-scale computational machinery for boundary-value problems of the
//! Laplacian on rough domains: discrete surface geometry, multiscale cube
//! structures, boundary Sobolev gradients, interior extensions, and dense
//! collocation layer-potential solvers, plus the experiment drivers built on
//! top of them.

pub mod error;
pub mod exec;
pub mod la;
pub mod rng;

pub mod domain;
pub mod mesh;
pub mod regularity;

pub use error::{Error, Result};
