//! Regulus webs in the regular spread of PG(3,q), their replacement, and
//! classification of the resulting translation planes of order q².

pub mod classify;
pub mod error;
pub mod field;
pub mod formats;
pub mod group;
pub mod linalg;
pub mod planes;
pub mod projgeom;
pub mod regression;
pub mod replace;
pub mod spreadcore;
pub mod tables;
pub mod webs;

mod context;

pub use context::Context;
pub use error::{Error, Result};
