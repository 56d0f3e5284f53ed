//! Exact verification of F-algebroids, pre-Lie algebroids and pre-F-algebroids
//! given by structure functions over rational-function coefficients.
//!
//! An algebroid is presented by a global frame `E_1..E_r` and the values of
//! its operations on that frame. Operations on general sections are obtained
//! by bilinear extension plus the anchor's Leibniz terms, and every defining
//! identity is checked exactly on basis tuples (with one argument scaled by a
//! coordinate where the identity is not tensorial).

pub mod algebroid;
pub mod constructions;
pub mod deformation;
pub mod duality;
pub mod error;
pub mod exprparse;
pub mod hierarchy;
pub mod report;
pub mod ring;

pub use error::{Error, Result};
