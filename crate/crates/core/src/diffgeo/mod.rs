//! Exterior calculus on `R^p x R^q` with the coordinate foliation
//! `F = span{d/dy_a}` and a polynomial complement `Q`.

mod forms;
mod splitting;
mod vector;

#[cfg(test)]
mod tests;

pub use forms::{ext_d, interior, lie_derivative, KForm};
pub use splitting::{AdaptedForm, Bidegree, BigradedD, Splitting, Summand, MAX_ADAPTED_DEGREE, MAX_BIGRADED_D_DEGREE};
pub use vector::{lie_bracket, VectorField};
