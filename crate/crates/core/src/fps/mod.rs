//! Exact truncated multivariate power series over ℚ(i).

mod gauss;
mod implicit;
pub mod linalg;
mod parse;
mod series;

pub use gauss::Gq;
pub use implicit::implicit_solve;
pub use parse::parse_series;
pub use series::{join_vars, mono_degree, vars, Mono, Series, SeriesVector, Vars};
