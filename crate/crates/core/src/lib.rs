pub mod config;
pub mod error;
pub mod graph;
pub mod io;
pub mod lie;
pub mod link;
pub mod quadrature;
pub mod quotient;
pub mod series;
pub mod tensor;
pub mod verify;
pub mod wick;

pub use config::Config;
pub use error::{Error, ErrorKind, Result};
