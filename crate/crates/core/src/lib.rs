pub mod builders;
pub mod engine;
pub mod error;
pub mod io;
pub mod linalg;
pub mod lp;
pub mod poly;
pub mod problem;
pub mod session;
pub mod setmap;
pub mod svg;

pub use error::{Error, Result};
