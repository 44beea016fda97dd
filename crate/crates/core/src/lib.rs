pub mod error;
pub mod field;
pub mod linalg;
pub mod montrace;
pub mod newton;
pub mod formal;
pub mod opcore;
pub mod qde;
pub mod rh3;
pub mod stokes;

pub use error::{Error, Result};
