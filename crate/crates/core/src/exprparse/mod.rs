mod expr;
mod files;

pub use expr::*;
pub use files::*;
