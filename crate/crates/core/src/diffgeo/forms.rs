use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Neg, Sub};

use crate::diffgeo::vector::{write_coefficient, VectorField};
use crate::error::{Error, Result};
use crate::ratpoly::{Chart, Polynomial};
use crate::scalar::Scalar;

/// A degree-`k` exterior form `sum_I w_I du^I` over the coordinate coframe,
/// keyed by strictly increasing index tuples.
#[derive(Clone, PartialEq)]
pub struct KForm<S> {
    chart: Chart,
    degree: usize,
    coeffs: BTreeMap<Vec<usize>, Polynomial<S>>,
}

/// Sorts `idx` in place, returning the permutation sign, or `None` if an
/// index repeats.
fn sort_with_sign(idx: &mut [usize]) -> Option<bool> {
    let mut negative = false;
    for i in 1..idx.len() {
        let mut j = i;
        while j > 0 && idx[j - 1] > idx[j] {
            idx.swap(j - 1, j);
            negative = !negative;
            j -= 1;
        }
    }
    if idx.windows(2).any(|w| w[0] == w[1]) {
        None
    } else {
        Some(negative)
    }
}

impl<S: Scalar> KForm<S> {
    pub fn zero(chart: Chart, degree: usize) -> Self {
        KForm {
            chart,
            degree,
            coeffs: BTreeMap::new(),
        }
    }

    /// A function viewed as a 0-form.
    pub fn function(f: Polynomial<S>) -> Self {
        let mut out = Self::zero(f.chart(), 0);
        out.add_term(Vec::new(), f);
        out
    }

    /// `du^{i1} ^ ... ^ du^{ik}` for arbitrary (not necessarily sorted)
    /// indices.
    pub fn basis(chart: Chart, indices: &[usize]) -> Result<Self> {
        if let Some(&bad) = indices.iter().find(|&&i| i >= chart.dim()) {
            return Err(Error::Dimension(format!("coframe index {bad} out of range")));
        }
        let mut out = Self::zero(chart, indices.len());
        let mut idx = indices.to_vec();
        if let Some(neg) = sort_with_sign(&mut idx) {
            let one = Polynomial::one(chart);
            out.add_term(idx, if neg { -one } else { one });
        }
        Ok(out)
    }

    /// The coordinate 1-form `du^idx`.
    pub fn differential(chart: Chart, idx: usize) -> Result<Self> {
        Self::basis(chart, &[idx])
    }

    /// 1-form `sum_j c_j du^j` from all `p+q` components.
    pub fn one_form(chart: Chart, comps: &[Polynomial<S>]) -> Result<Self> {
        if comps.len() != chart.dim() {
            return Err(Error::Dimension(format!(
                "1-form needs {} components, got {}",
                chart.dim(),
                comps.len()
            )));
        }
        let mut out = Self::zero(chart, 1);
        for (j, c) in comps.iter().enumerate() {
            chart.ensure_same(&c.chart())?;
            out.add_term(vec![j], c.clone());
        }
        Ok(out)
    }

    pub fn from_terms(
        chart: Chart,
        degree: usize,
        terms: impl IntoIterator<Item = (Vec<usize>, Polynomial<S>)>,
    ) -> Result<Self> {
        let mut out = Self::zero(chart, degree);
        for (mut idx, c) in terms {
            if idx.len() != degree {
                return Err(Error::Degree(format!("index tuple {idx:?} in a {degree}-form")));
            }
            if idx.iter().any(|&i| i >= chart.dim()) {
                return Err(Error::Dimension(format!("coframe index out of range in {idx:?}")));
            }
            chart.ensure_same(&c.chart())?;
            if let Some(neg) = sort_with_sign(&mut idx) {
                out.add_term(idx, if neg { -c } else { c });
            }
        }
        Ok(out)
    }

    fn add_term(&mut self, idx: Vec<usize>, c: Polynomial<S>) {
        if c.is_zero() {
            return;
        }
        match self.coeffs.get_mut(&idx) {
            Some(existing) => {
                *existing += &c;
                if existing.is_zero() {
                    self.coeffs.remove(&idx);
                }
            }
            None => {
                self.coeffs.insert(idx, c);
            }
        }
    }

    pub fn chart(&self) -> Chart {
        self.chart
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Coefficient on a strictly increasing index tuple.
    pub fn coefficient(&self, idx: &[usize]) -> Polynomial<S> {
        self.coeffs
            .get(idx)
            .cloned()
            .unwrap_or_else(|| Polynomial::zero(self.chart))
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<usize>, &Polynomial<S>)> {
        self.coeffs.iter()
    }

    /// Component `j` of a 1-form.
    pub fn component(&self, j: usize) -> Polynomial<S> {
        self.coefficient(&[j])
    }

    /// The function of a 0-form.
    pub fn as_function(&self) -> Result<Polynomial<S>> {
        if self.degree != 0 {
            return Err(Error::Degree(format!("expected a 0-form, got degree {}", self.degree)));
        }
        Ok(self.coefficient(&[]))
    }

    pub fn scale(&self, f: &Polynomial<S>) -> Self {
        let mut out = Self::zero(self.chart, self.degree);
        for (idx, c) in &self.coeffs {
            out.add_term(idx.clone(), c * f);
        }
        out
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        self.chart.ensure_same(&other.chart)?;
        if self.degree != other.degree {
            return Err(Error::Degree(format!(
                "cannot add forms of degree {} and {}",
                self.degree, other.degree
            )));
        }
        let mut out = self.clone();
        for (idx, c) in &other.coeffs {
            out.add_term(idx.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn wedge(&self, other: &Self) -> Result<Self> {
        self.chart.ensure_same(&other.chart)?;
        let mut out = Self::zero(self.chart, self.degree + other.degree);
        for (i1, c1) in &self.coeffs {
            for (i2, c2) in &other.coeffs {
                let mut idx = i1.clone();
                idx.extend_from_slice(i2);
                if let Some(neg) = sort_with_sign(&mut idx) {
                    let c = c1 * c2;
                    out.add_term(idx, if neg { -c } else { c });
                }
            }
        }
        Ok(out)
    }

    /// Coordinate exterior derivative. Forms of top degree map to the zero
    /// form of degree `p+q+1`.
    pub fn ext_d(&self) -> Self {
        let mut out = Self::zero(self.chart, self.degree + 1);
        for (idx, c) in &self.coeffs {
            for j in 0..self.chart.dim() {
                if idx.contains(&j) {
                    continue;
                }
                let dc = c.partial(j).expect("index within chart");
                if dc.is_zero() {
                    continue;
                }
                let pos = idx.iter().take_while(|&&i| i < j).count();
                let mut new_idx = idx.clone();
                new_idx.insert(pos, j);
                out.add_term(new_idx, if pos % 2 == 1 { -dc } else { dc });
            }
        }
        out
    }

    /// Contraction `i(X)w`, alternating-sum convention:
    /// `i(X)(du^{i1}^...^du^{ik}) = sum_r (-1)^r X^{i_r} du^{I minus i_r}`.
    pub fn interior(&self, x: &VectorField<S>) -> Result<Self> {
        self.chart.ensure_same(&x.chart())?;
        if self.degree == 0 {
            return Err(Error::Degree("interior product of a 0-form".into()));
        }
        let mut out = Self::zero(self.chart, self.degree - 1);
        for (idx, c) in &self.coeffs {
            for (r, &i) in idx.iter().enumerate() {
                let xi = x.component(i);
                if xi.is_zero() {
                    continue;
                }
                let mut rest = idx.clone();
                rest.remove(r);
                let term = c * xi;
                out.add_term(rest, if r % 2 == 1 { -term } else { term });
            }
        }
        Ok(out)
    }

    /// `w(X_1, ..., X_k)`.
    pub fn evaluate(&self, vectors: &[VectorField<S>]) -> Result<Polynomial<S>> {
        if vectors.len() != self.degree {
            return Err(Error::Degree(format!(
                "{}-form evaluated on {} vectors",
                self.degree,
                vectors.len()
            )));
        }
        let mut cur = self.clone();
        for v in vectors {
            cur = cur.interior(v)?;
        }
        cur.as_function()
    }

    pub fn lie_derivative(&self, x: &VectorField<S>) -> Result<Self> {
        lie_derivative(x, self)
    }
}

/// Exterior derivative.
pub fn ext_d<S: Scalar>(w: &KForm<S>) -> KForm<S> {
    w.ext_d()
}

pub fn interior<S: Scalar>(x: &VectorField<S>, w: &KForm<S>) -> Result<KForm<S>> {
    w.interior(x)
}

/// Cartan formula `L_X w = i(X) dw + d(i(X) w)`; on functions `L_X f = X(f)`.
pub fn lie_derivative<S: Scalar>(x: &VectorField<S>, w: &KForm<S>) -> Result<KForm<S>> {
    x.chart().ensure_same(&w.chart())?;
    let first = w.ext_d().interior(x)?;
    if w.degree() == 0 {
        return Ok(first);
    }
    let second = w.interior(x)?.ext_d();
    first.checked_add(&second)
}

impl<S: Scalar> Add for &KForm<S> {
    type Output = KForm<S>;
    fn add(self, rhs: Self) -> KForm<S> {
        self.checked_add(rhs).expect("form chart or degree mismatch")
    }
}

impl<S: Scalar> Neg for &KForm<S> {
    type Output = KForm<S>;
    fn neg(self) -> KForm<S> {
        KForm {
            chart: self.chart,
            degree: self.degree,
            coeffs: self.coeffs.iter().map(|(k, c)| (k.clone(), -c)).collect(),
        }
    }
}

impl<S: Scalar> Sub for &KForm<S> {
    type Output = KForm<S>;
    fn sub(self, rhs: Self) -> KForm<S> {
        self + &(-rhs)
    }
}

/// `x1*dx1^dy1 + (x2 + 1)*dx2`; zero prints as `0`.
impl<S: Scalar> fmt::Display for KForm<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return f.write_str("0");
        }
        if self.degree == 0 {
            return write!(f, "{}", self.coefficient(&[]));
        }
        for (k, (idx, c)) in self.coeffs.iter().enumerate() {
            let basis = idx
                .iter()
                .map(|&i| format!("d{}", self.chart.variable_name(i)))
                .collect::<Vec<_>>()
                .join("^");
            write_coefficient(f, k == 0, c, &basis)?;
        }
        Ok(())
    }
}

impl<S: Scalar> fmt::Debug for KForm<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "KForm[{}]({self})", self.degree)
    }
}
