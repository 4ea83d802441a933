//! Kakimizu complexes of a family of two-bridge knots.
//!
//! The minimal genus Seifert surfaces of these knots correspond to
//! orientations of a linear tree, and simplices to vertex sets of
//! sink-reversal cycles. This crate builds the resulting complex, measures
//! its edge-path metric and produces contractibility certificates for it.

pub mod check;
pub mod complex;
pub mod cycle;
pub mod knot;
pub mod orientation;
pub mod metric;
pub mod homotopy;
pub mod io;
pub mod report;
