pub mod cli;
pub mod danielewski;
pub mod endo;
pub mod equilift;
pub mod error;
pub mod linalg;
pub mod lnd;
pub mod plane;
pub mod poly;
pub mod quotient;
pub mod roots;
pub mod verify;

pub use error::{Error, Result};
