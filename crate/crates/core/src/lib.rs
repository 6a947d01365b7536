//! Exact computations with Nichols algebras of rack-type and diagonal-type
//! braided vector spaces.

pub mod arith;
pub mod braided;
pub mod decide;
pub mod degen;
pub mod error;
pub mod groups;
pub mod linalg;
pub mod nichols;
pub mod oracle;
pub mod orders;
pub mod par;
pub mod racks;
pub mod verify;

pub use error::{Error, Result};
