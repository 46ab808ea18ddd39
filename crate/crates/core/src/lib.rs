pub mod anick;
pub mod cli;
pub mod barmorse;
pub mod error;
pub mod hochschild;
pub mod lincomb;
pub mod linalg;
pub mod model;
pub mod presentation;
pub mod report;
pub mod tensor;
pub mod verify;

pub use error::{Error, PresentationError, Result};
pub use lincomb::LinComb;
pub use presentation::{ArrowId, Monomial, Presentation, Quiver};
