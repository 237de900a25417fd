//! Exact computations with Segre chains, reflection identities and
//! nondegeneracy conditions for formal maps between real-analytic generic
//! submanifolds, all carried out on truncated power series over ℚ(i).

pub mod classify;
pub mod cli;
pub mod corpus;
pub mod error;
pub mod fps;
pub mod manifold;
pub mod propagate;
pub mod reflection;
pub mod segre;

pub use error::{Error, Result};
