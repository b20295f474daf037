//! Exact arithmetic in the Chow, mod-2 Chow, I-cohomology and Chow-Witt rings
//! of the classifying spaces `BSL_n` and `BSp_2n`.

pub mod chow;
pub mod chowwitt;
pub mod coeff;
pub mod commands;
pub mod error;
pub mod expr;
pub mod icoh;
pub mod linalg;
pub mod polyring;
pub mod presentation;
pub mod splitting;
pub mod symplectic;
pub mod verify;

pub use error::{AlgebraError, Result};
