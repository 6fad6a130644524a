//! Exact computations in the quantum coordinate rings `O_q(M_n)`, `O_q(GL_n)`
//! and `O_q(SL_n)`, their specialisations at odd roots of unity, and the
//! Frobenius-extension structure over the classical coordinate rings.

pub mod cli;
pub mod coeff;
pub mod detloc;
pub mod error;
pub mod frobext;
pub mod monomial;
pub mod report;
pub mod rewrite;
pub mod rootspec;

pub use error::{Error, Result};
