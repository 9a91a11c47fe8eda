//! Concrete Courant structures on the chart: the big tangent bundle, the
//! leafwise algebroid `F ⊕ ann Q` and the transverse algebroid
//! `νF ⊕ ann F`.

mod big_tangent;
mod leafwise;
mod transverse;

pub use big_tangent::{big_tangent, big_tangent_bracket, BigTangent, BigTangentSection};
pub use leafwise::{q_algebroid, q_bracket_dprimeprime, q_bracket_raw, QAlgebroid, QSection};
pub use transverse::{transverse_bracket, transverse_e, ESection, TransverseE};

use crate::diffgeo::KForm;
use crate::error::Result;
use crate::ratpoly::Polynomial;
use crate::scalar::Scalar;

/// `L_{X1} α2 - L_{X2} α1 + ½ d(α1(X2) - α2(X1))`, the form part of the
/// standard bracket.
pub(crate) fn standard_form_part<S: Scalar>(
    x1: &crate::diffgeo::VectorField<S>,
    a1: &KForm<S>,
    x2: &crate::diffgeo::VectorField<S>,
    a2: &KForm<S>,
) -> Result<KForm<S>> {
    let pairing = &a1.interior(x2)?.as_function()? - &a2.interior(x1)?.as_function()?;
    let exact = KForm::function(pairing.scale(&S::half())).ext_d();
    let lie = &a2.lie_derivative(x1)? - &a1.lie_derivative(x2)?;
    lie.checked_add(&exact)
}

/// Half-pairing Gram entry between two frame blocks of size `n`:
/// `g(ε_a, ε_b) = ½` when `a` and `b` are dual, else `0`.
pub(crate) fn dual_block_metric<S: Scalar>(
    chart: crate::ratpoly::Chart,
    n: usize,
    a: usize,
    b: usize,
) -> Polynomial<S> {
    if a.abs_diff(b) == n {
        Polynomial::constant(chart, S::half())
    } else {
        Polynomial::zero(chart)
    }
}
