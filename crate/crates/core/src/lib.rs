//! Exact construction and certification of Kummer quartic surfaces, with a
//! numerical theta-function cross-check.

pub mod algebra;
pub mod enriques;
pub mod error;
pub mod groups;
pub mod kummer;
pub mod picard;
pub mod segre;
pub mod theta;

pub use error::{Error, Result};
