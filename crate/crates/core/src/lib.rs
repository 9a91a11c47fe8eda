//! Exact symbolic Courant algebroids over a foliated local chart.
//!
//! The chart is `R^p x R^q` with transverse coordinates `x1..xp` and leaf
//! coordinates `y1..yq`; the foliation is by the `y`-slices and the normal
//! bundle is split by a polynomial complement `Q`. Over this model the crate
//! builds the big tangent algebroid, the leafwise algebroid on `F + annQ`,
//! the transverse algebroid `E`, and their extension `A0 = (F + annQ) + E`,
//! and checks the Courant axioms and related identities as exact polynomial
//! equalities.

pub mod courant;
pub mod diffgeo;
pub mod error;
pub mod extension;
pub mod models;
pub mod parse;
pub mod ratpoly;
pub mod scalar;

pub use error::{Error, Result};
pub use scalar::Scalar;

/// Exact coefficient field.
pub type Rational = num_rational::BigRational;

pub type Poly = ratpoly::Polynomial<Rational>;
pub type VectorField = diffgeo::VectorField<Rational>;
pub type KForm = diffgeo::KForm<Rational>;
pub type Splitting = diffgeo::Splitting<Rational>;
pub type Section = courant::Section<Rational>;

pub use ratpoly::{Chart, PolyBounds};
