pub mod arith;
pub mod budget;
pub mod checker;
pub mod dsl;
pub mod error;
pub mod group;
pub mod groupoid;
pub mod info;
pub mod laws;
mod util;

pub use budget::Budget;
pub use error::{Error, Result};
