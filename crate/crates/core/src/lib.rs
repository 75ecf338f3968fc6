//! Quadratic descent of totally decomposable algebras with orthogonal
//! involution over F_q(t), q = 2^k, and its quadratic extensions.

pub mod biforms;
pub mod brauer;
pub mod descent;
pub mod error;
pub mod field;
pub mod gf;
pub mod involution;
pub mod parse;
pub mod oracle;
pub mod par;
pub mod places;
pub mod poly;
pub mod quadext;
pub mod ratfun;
pub mod residue;
pub mod sample;
pub mod series;

pub use error::{Error, Result};
