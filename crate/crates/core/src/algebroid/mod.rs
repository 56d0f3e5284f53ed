//! Frame presentations of anchored bundles and checkers for their defining identities.

mod checks;
mod presentation;
mod section;

pub use checks::*;
pub use presentation::*;
pub use section::*;
