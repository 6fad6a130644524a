//! Command-line front end: expression parsing, evaluation and the `qcoord` driver.

pub mod eval;
pub mod parse;
pub mod run;

pub use eval::eval;
pub use parse::{parse, Expr};
pub use run::{run, EXIT_CHECK_FAILED, EXIT_OK, EXIT_USAGE};
