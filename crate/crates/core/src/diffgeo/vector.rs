use std::fmt;
use std::ops::{Add, Neg, Sub};

use crate::error::{Error, Result};
use crate::ratpoly::{Chart, Polynomial};
use crate::scalar::Scalar;

/// Tangent vector field `sum_j X^j d/du_j` with polynomial coefficients.
///
/// Components `0..p` are along `d/dx_i`, components `p..p+q` along `d/dy_a`.
#[derive(Clone, PartialEq)]
pub struct VectorField<S> {
    chart: Chart,
    comps: Vec<Polynomial<S>>,
}

impl<S: Scalar> VectorField<S> {
    pub fn zero(chart: Chart) -> Self {
        VectorField {
            chart,
            comps: vec![Polynomial::zero(chart); chart.dim()],
        }
    }

    /// The coordinate field `d/du_idx`.
    pub fn coordinate(chart: Chart, idx: usize) -> Result<Self> {
        let mut out = Self::zero(chart);
        if idx >= chart.dim() {
            return Err(Error::Dimension(format!("no coordinate field with index {idx}")));
        }
        out.comps[idx] = Polynomial::one(chart);
        Ok(out)
    }

    pub fn from_components(chart: Chart, comps: Vec<Polynomial<S>>) -> Result<Self> {
        if comps.len() != chart.dim() {
            return Err(Error::Dimension(format!(
                "vector field needs {} components, got {}",
                chart.dim(),
                comps.len()
            )));
        }
        for c in &comps {
            chart.ensure_same(&c.chart())?;
        }
        Ok(VectorField { chart, comps })
    }

    /// Field tangent to the leaves, `sum_a Y^a d/dy_a`.
    pub fn leafwise(chart: Chart, ys: &[Polynomial<S>]) -> Result<Self> {
        if ys.len() != chart.q() {
            return Err(Error::Dimension(format!(
                "expected {} leaf components, got {}",
                chart.q(),
                ys.len()
            )));
        }
        let mut comps = vec![Polynomial::zero(chart); chart.p()];
        comps.extend(ys.iter().cloned());
        Self::from_components(chart, comps)
    }

    /// Field `sum_i V^i d/dx_i`.
    pub fn transversal(chart: Chart, vs: &[Polynomial<S>]) -> Result<Self> {
        if vs.len() != chart.p() {
            return Err(Error::Dimension(format!(
                "expected {} transverse components, got {}",
                chart.p(),
                vs.len()
            )));
        }
        let mut comps: Vec<_> = vs.to_vec();
        comps.extend(std::iter::repeat_n(Polynomial::zero(chart), chart.q()));
        Self::from_components(chart, comps)
    }

    pub fn chart(&self) -> Chart {
        self.chart
    }

    pub fn component(&self, idx: usize) -> &Polynomial<S> {
        &self.comps[idx]
    }

    pub fn components(&self) -> &[Polynomial<S>] {
        &self.comps
    }

    /// The `d/dx` components.
    pub fn transverse_components(&self) -> &[Polynomial<S>] {
        &self.comps[..self.chart.p()]
    }

    /// The `d/dy` components.
    pub fn leaf_components(&self) -> &[Polynomial<S>] {
        &self.comps[self.chart.p()..]
    }

    pub fn is_zero(&self) -> bool {
        self.comps.iter().all(Polynomial::is_zero)
    }

    /// Directional derivative `X(f)`.
    pub fn apply(&self, f: &Polynomial<S>) -> Result<Polynomial<S>> {
        self.chart.ensure_same(&f.chart())?;
        let mut out = Polynomial::zero(self.chart);
        for (j, c) in self.comps.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            out += &(c * &f.partial(j)?);
        }
        Ok(out)
    }

    /// `f X`.
    pub fn scale(&self, f: &Polynomial<S>) -> Self {
        VectorField {
            chart: self.chart,
            comps: self.comps.iter().map(|c| c * f).collect(),
        }
    }

    pub fn lie_bracket(&self, other: &Self) -> Result<Self> {
        lie_bracket(self, other)
    }
}

/// `[X,Y]^i = sum_j (X^j d_j Y^i - Y^j d_j X^i)`.
pub fn lie_bracket<S: Scalar>(x: &VectorField<S>, y: &VectorField<S>) -> Result<VectorField<S>> {
    x.chart.ensure_same(&y.chart)?;
    let comps = (0..x.chart.dim())
        .map(|i| Ok(&x.apply(&y.comps[i])? - &y.apply(&x.comps[i])?))
        .collect::<Result<Vec<_>>>()?;
    Ok(VectorField { chart: x.chart, comps })
}

impl<S: Scalar> Add for &VectorField<S> {
    type Output = VectorField<S>;
    fn add(self, rhs: Self) -> VectorField<S> {
        assert_eq!(self.chart, rhs.chart, "vector field chart mismatch");
        VectorField {
            chart: self.chart,
            comps: self.comps.iter().zip(&rhs.comps).map(|(a, b)| a + b).collect(),
        }
    }
}

impl<S: Scalar> Sub for &VectorField<S> {
    type Output = VectorField<S>;
    fn sub(self, rhs: Self) -> VectorField<S> {
        assert_eq!(self.chart, rhs.chart, "vector field chart mismatch");
        VectorField {
            chart: self.chart,
            comps: self.comps.iter().zip(&rhs.comps).map(|(a, b)| a - b).collect(),
        }
    }
}

impl<S: Scalar> Neg for &VectorField<S> {
    type Output = VectorField<S>;
    fn neg(self) -> VectorField<S> {
        VectorField {
            chart: self.chart,
            comps: self.comps.iter().map(|c| -c).collect(),
        }
    }
}

pub(crate) fn write_coefficient<S: Scalar>(
    f: &mut fmt::Formatter<'_>,
    first: bool,
    coef: &Polynomial<S>,
    basis: &str,
) -> fmt::Result {
    // One-term coefficients fold their sign into the separator.
    if coef.num_terms() == 1 {
        let text = coef.to_string();
        let (neg, body) = match text.strip_prefix('-') {
            Some(rest) => (true, rest.to_string()),
            None => (false, text),
        };
        match (first, neg) {
            (true, true) => f.write_str("-")?,
            (true, false) => {}
            (false, true) => f.write_str(" - ")?,
            (false, false) => f.write_str(" + ")?,
        }
        if body == "1" {
            f.write_str(basis)
        } else {
            write!(f, "{body}*{basis}")
        }
    } else {
        if !first {
            f.write_str(" + ")?;
        }
        write!(f, "({coef})*{basis}")
    }
}

/// `x1*d/dx1 + (y1 + 1)*d/dy1`; the zero field prints as `0`.
impl<S: Scalar> fmt::Display for VectorField<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, c) in self.comps.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            write_coefficient(f, first, c, &format!("d/d{}", self.chart.variable_name(i)))?;
            first = false;
        }
        if first {
            f.write_str("0")?;
        }
        Ok(())
    }
}

impl<S: Scalar> fmt::Debug for VectorField<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "VectorField({self})")
    }
}
