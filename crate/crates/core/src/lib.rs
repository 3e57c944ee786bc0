pub mod analysis;
pub mod chartab;
pub mod classes;
pub mod data;
pub mod error;
pub mod exec;
pub mod expr;
pub mod families;
pub mod field;
pub mod groups;
pub mod linalg;
pub mod perm;
pub mod poly;
pub mod quadratic;
pub mod rational;
pub mod bounds;
pub mod search;
pub mod spectra;
pub mod table;
pub mod verify;

pub use error::{Error, Result};
