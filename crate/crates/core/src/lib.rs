pub mod basis;
pub mod config;
pub mod error;
pub mod forward;
pub mod grid;
pub mod inversion;
pub mod io;
pub mod phantom;
pub mod pipeline;
pub mod poly;
pub mod quadrature;
pub mod tensor;
pub mod zernike;

pub use error::{Result, TomoError};
pub use grid::{relative_error, GridField};
pub use poly::Poly2;
pub use tensor::PolyField;
