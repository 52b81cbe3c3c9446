#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod cli;
pub mod constants;
pub mod gegenbauer;
pub mod identities;
pub mod quadrature;
pub mod series;
pub mod special;

pub use error::{Error, Result};
