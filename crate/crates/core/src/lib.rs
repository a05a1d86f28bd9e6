pub mod admissible;
pub mod ayoneda;
pub mod algebra;
pub mod error;
pub mod ext;
pub mod homotopy;
pub mod linalg;
pub mod modcat;
pub mod quotients;

pub use error::{Error, Result};
