// Sparse vectors expose `is_zero` rather than `is_empty`.
#![allow(clippy::len_without_is_empty)]

pub mod affine;
pub mod cartan;
pub mod classify;
pub mod error;
pub mod exact;
pub mod uea;
pub mod weights;
pub mod weylreal;
pub mod zeros;

pub use error::{Error, Result};
