//! Sparse multivariate polynomials over a [`Scalar`] field.
//!
//! Variables are split into `p` transverse coordinates `x1..xp` followed by
//! `q` leaf coordinates `y1..yq`. A polynomial with no `y` dependence is
//! *foliated*: it is constant along the leaves of the coordinate foliation.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Dimensions of the local chart `R^p x R^q`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct Chart {
    p: usize,
    q: usize,
}

impl Chart {
    pub fn new(p: usize, q: usize) -> Result<Self> {
        if p + q == 0 {
            return Err(Error::Dimension("chart needs p + q >= 1".into()));
        }
        Ok(Chart { p, q })
    }

    /// Number of transverse coordinates.
    pub fn p(&self) -> usize {
        self.p
    }

    /// Number of leaf coordinates.
    pub fn q(&self) -> usize {
        self.q
    }

    pub fn dim(&self) -> usize {
        self.p + self.q
    }

    /// Global index of `y_{a+1}`.
    pub fn leaf_index(&self, a: usize) -> usize {
        self.p + a
    }

    pub fn is_transverse_index(&self, idx: usize) -> bool {
        idx < self.p
    }

    /// `x1`, `y2`, ... for a global variable index.
    pub fn variable_name(&self, idx: usize) -> String {
        if idx < self.p {
            format!("x{}", idx + 1)
        } else {
            format!("y{}", idx - self.p + 1)
        }
    }

    pub(crate) fn ensure_same(&self, other: &Chart) -> Result<()> {
        if self != other {
            return Err(Error::Dimension(format!(
                "chart (p={}, q={}) vs (p={}, q={})",
                self.p, self.q, other.p, other.q
            )));
        }
        Ok(())
    }
}

/// Exponent vector; ordered graded-lexicographically with
/// `x1 < ... < xp < y1 < ... < yq`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Monomial(Vec<u16>);

impl Monomial {
    pub fn one(nvars: usize) -> Self {
        Monomial(vec![0; nvars])
    }

    pub fn from_exponents(exps: Vec<u16>) -> Self {
        Monomial(exps)
    }

    pub fn exponents(&self) -> &[u16] {
        &self.0
    }

    pub fn total_degree(&self) -> u32 {
        self.0.iter().map(|&e| e as u32).sum()
    }

    pub fn is_one(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    fn mul(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.total_degree()
            .cmp(&other.total_degree())
            .then_with(|| self.0.iter().rev().cmp(other.0.iter().rev()))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Arithmetic selector for [`poly_arith`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PolyOp {
    Add,
    Sub,
    Mul,
}

/// Bounds for randomly generated polynomials.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct PolyBounds {
    pub max_degree: u32,
    pub max_terms: usize,
    pub coeff_bound: i64,
}

impl Default for PolyBounds {
    fn default() -> Self {
        PolyBounds {
            max_degree: 2,
            max_terms: 3,
            coeff_bound: 3,
        }
    }
}

impl PolyBounds {
    pub fn new(max_degree: u32, max_terms: usize, coeff_bound: i64) -> Result<Self> {
        if max_terms == 0 || coeff_bound < 1 {
            return Err(Error::Argument(
                "random polynomials need max_terms >= 1 and coeff_bound >= 1".into(),
            ));
        }
        Ok(PolyBounds {
            max_degree,
            max_terms,
            coeff_bound,
        })
    }

    pub fn with_degree(self, max_degree: u32) -> Self {
        PolyBounds { max_degree, ..self }
    }
}

/// A polynomial in canonical form: no zero coefficient is ever stored.
#[derive(Clone, PartialEq)]
pub struct Polynomial<S> {
    chart: Chart,
    terms: BTreeMap<Monomial, S>,
}

impl<S: Scalar> Polynomial<S> {
    pub fn zero(chart: Chart) -> Self {
        Polynomial {
            chart,
            terms: BTreeMap::new(),
        }
    }

    pub fn one(chart: Chart) -> Self {
        Self::constant(chart, S::one())
    }

    pub fn constant(chart: Chart, c: S) -> Self {
        let mut out = Self::zero(chart);
        if !c.is_zero() {
            out.terms.insert(Monomial::one(chart.dim()), c);
        }
        out
    }

    pub fn integer(chart: Chart, n: i64) -> Self {
        Self::constant(chart, S::from_integer(n))
    }

    pub fn variable(chart: Chart, idx: usize) -> Result<Self> {
        if idx >= chart.dim() {
            return Err(Error::Dimension(format!(
                "variable index {idx} out of range for {} variables",
                chart.dim()
            )));
        }
        let mut exps = vec![0; chart.dim()];
        exps[idx] = 1;
        let mut out = Self::zero(chart);
        out.terms.insert(Monomial(exps), S::one());
        Ok(out)
    }

    /// Builds from (monomial, coefficient) pairs, collecting like terms.
    pub fn from_terms(chart: Chart, terms: impl IntoIterator<Item = (Monomial, S)>) -> Result<Self> {
        let mut out = Self::zero(chart);
        for (m, c) in terms {
            if m.0.len() != chart.dim() {
                return Err(Error::Dimension(format!(
                    "monomial has {} exponents, chart has {} variables",
                    m.0.len(),
                    chart.dim()
                )));
            }
            out.add_term(m, c);
        }
        Ok(out)
    }

    fn add_term(&mut self, m: Monomial, c: S) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&m) {
            Some(existing) => {
                *existing = existing.clone() + c;
                if existing.is_zero() {
                    self.terms.remove(&m);
                }
            }
            None => {
                self.terms.insert(m, c);
            }
        }
    }

    pub fn chart(&self) -> Chart {
        self.chart
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(Monomial::is_one)
    }

    pub fn constant_value(&self) -> Option<S> {
        if !self.is_constant() {
            return None;
        }
        Some(self.terms.values().next().cloned().unwrap_or_else(S::zero))
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Terms in ascending monomial order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &S)> {
        self.terms.iter()
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(Monomial::total_degree).max()
    }

    /// True iff no leaf variable appears.
    pub fn is_foliated(&self) -> bool {
        let p = self.chart.p;
        self.terms.keys().all(|m| m.0[p..].iter().all(|&e| e == 0))
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        self.chart.ensure_same(&other.chart)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self> {
        self.chart.ensure_same(&other.chart)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), -c.clone());
        }
        Ok(out)
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self> {
        self.chart.ensure_same(&other.chart)?;
        let mut out = Self::zero(self.chart);
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                out.add_term(m1.mul(m2), c1.clone() * c2.clone());
            }
        }
        Ok(out)
    }

    pub fn scale(&self, c: &S) -> Self {
        if c.is_zero() {
            return Self::zero(self.chart);
        }
        Polynomial {
            chart: self.chart,
            terms: self
                .terms
                .iter()
                .map(|(m, v)| (m.clone(), v.clone() * c.clone()))
                .collect(),
        }
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut out = Self::one(self.chart);
        for _ in 0..n {
            out = &out * self;
        }
        out
    }

    pub fn partial(&self, var: usize) -> Result<Self> {
        if var >= self.chart.dim() {
            return Err(Error::Dimension(format!(
                "cannot differentiate in variable {var}: chart has {} variables",
                self.chart.dim()
            )));
        }
        let mut out = Self::zero(self.chart);
        for (m, c) in &self.terms {
            let e = m.0[var];
            if e == 0 {
                continue;
            }
            let mut exps = m.0.clone();
            exps[var] -= 1;
            out.add_term(Monomial(exps), c.clone() * S::from_integer(e as i64));
        }
        Ok(out)
    }

    /// Evaluates at a point given in global variable order.
    pub fn eval(&self, point: &[S]) -> Result<S> {
        if point.len() != self.chart.dim() {
            return Err(Error::Dimension(format!(
                "point has {} coordinates, chart has {}",
                point.len(),
                self.chart.dim()
            )));
        }
        let mut acc = S::zero();
        for (m, c) in &self.terms {
            let mut v = c.clone();
            for (x, &e) in point.iter().zip(&m.0) {
                for _ in 0..e {
                    v = v * x.clone();
                }
            }
            acc = acc + v;
        }
        Ok(acc)
    }

    /// Deterministic random polynomial; integer coefficients in
    /// `[-coeff_bound, coeff_bound]`, total degree at most `max_degree`.
    pub fn random<R: Rng + ?Sized>(chart: Chart, bounds: &PolyBounds, foliated: bool, rng: &mut R) -> Self {
        let nvars = if foliated { chart.p } else { chart.dim() };
        let nterms = rng.gen_range(1..=bounds.max_terms.max(1));
        let mut out = Self::zero(chart);
        for _ in 0..nterms {
            let mut exps = vec![0u16; chart.dim()];
            if nvars > 0 {
                let deg = rng.gen_range(0..=bounds.max_degree);
                for _ in 0..deg {
                    exps[rng.gen_range(0..nvars)] += 1;
                }
            }
            let b = bounds.coeff_bound.max(1);
            let c = rng.gen_range(-b..=b);
            // a repeated monomial overwrites, keeping coefficients within bounds
            let m = Monomial(exps);
            if c == 0 {
                out.terms.remove(&m);
            } else {
                out.terms.insert(m, S::from_integer(c));
            }
        }
        out
    }

    pub fn random_seeded(chart: Chart, bounds: &PolyBounds, foliated: bool, seed: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        Self::random(chart, bounds, foliated, &mut rng)
    }
}

/// `a op b` with chart checking.
pub fn poly_arith<S: Scalar>(a: &Polynomial<S>, b: &Polynomial<S>, op: PolyOp) -> Result<Polynomial<S>> {
    match op {
        PolyOp::Add => a.checked_add(b),
        PolyOp::Sub => a.checked_sub(b),
        PolyOp::Mul => a.checked_mul(b),
    }
}

// Operator impls assume matching charts and panic otherwise; the checked_*
// methods are the fallible entry points.
impl<S: Scalar> Add for &Polynomial<S> {
    type Output = Polynomial<S>;
    fn add(self, rhs: Self) -> Polynomial<S> {
        self.checked_add(rhs).expect("polynomial chart mismatch")
    }
}

impl<S: Scalar> Sub for &Polynomial<S> {
    type Output = Polynomial<S>;
    fn sub(self, rhs: Self) -> Polynomial<S> {
        self.checked_sub(rhs).expect("polynomial chart mismatch")
    }
}

impl<S: Scalar> Mul for &Polynomial<S> {
    type Output = Polynomial<S>;
    fn mul(self, rhs: Self) -> Polynomial<S> {
        self.checked_mul(rhs).expect("polynomial chart mismatch")
    }
}

impl<S: Scalar> Neg for &Polynomial<S> {
    type Output = Polynomial<S>;
    fn neg(self) -> Polynomial<S> {
        Polynomial {
            chart: self.chart,
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c.clone())).collect(),
        }
    }
}

impl<S: Scalar> Neg for Polynomial<S> {
    type Output = Polynomial<S>;
    fn neg(self) -> Polynomial<S> {
        -&self
    }
}

impl<S: Scalar> AddAssign<&Polynomial<S>> for Polynomial<S> {
    fn add_assign(&mut self, rhs: &Polynomial<S>) {
        assert_eq!(self.chart, rhs.chart, "polynomial chart mismatch");
        for (m, c) in &rhs.terms {
            self.add_term(m.clone(), c.clone());
        }
    }
}

impl<S: Scalar> SubAssign<&Polynomial<S>> for Polynomial<S> {
    fn sub_assign(&mut self, rhs: &Polynomial<S>) {
        assert_eq!(self.chart, rhs.chart, "polynomial chart mismatch");
        for (m, c) in &rhs.terms {
            self.add_term(m.clone(), -c.clone());
        }
    }
}

impl<S: Scalar> fmt::Debug for Polynomial<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Polynomial({self})")
    }
}

fn write_monomial(f: &mut fmt::Formatter<'_>, chart: &Chart, m: &Monomial) -> fmt::Result {
    let mut first = true;
    for (i, &e) in m.0.iter().enumerate() {
        if e == 0 {
            continue;
        }
        if !first {
            f.write_str("*")?;
        }
        first = false;
        f.write_str(&chart.variable_name(i))?;
        if e > 1 {
            write!(f, "^{e}")?;
        }
    }
    Ok(())
}

/// Canonical text: descending graded-lex order, e.g. `3*x1^2*y1 - 1/2*x2 + 1`.
impl<S: Scalar> fmt::Display for Polynomial<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (k, (m, c)) in self.terms.iter().rev().enumerate() {
            let neg = c.is_negative();
            let abs = c.abs();
            match (k, neg) {
                (0, true) => f.write_str("-")?,
                (0, false) => {}
                (_, true) => f.write_str(" - ")?,
                (_, false) => f.write_str(" + ")?,
            }
            if m.is_one() {
                write!(f, "{abs}")?;
            } else {
                if !abs.is_one() {
                    write!(f, "{abs}*")?;
                }
                write_monomial(f, &self.chart, m)?;
            }
        }
        Ok(())
    }
}
