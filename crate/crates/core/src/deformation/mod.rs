//! Multiderivations, the deformation complex of a pre-Lie algebroid, pre-Lie
//! deformations of commutative associative algebroids and their obstructions,
//! and cohomology over a point.

mod cohomology;
mod complex;
mod formal;
mod multider;

pub use cohomology::*;
pub use complex::*;
pub use formal::*;
pub use multider::*;
