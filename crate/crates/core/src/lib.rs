//! Constant solutions of the SU(2) Yang-Mills equations in pseudo-Euclidean space.

pub mod atlas;
pub mod classify;
pub mod constants;
pub mod cubic;
pub mod error;
pub mod exec;
pub mod group;
pub mod hsvd;
pub mod linalg;
pub mod verify;

pub use error::{Error, Result};
pub use exec::Execution;
