//! Generic Courant structures on a frame of the carrier bundle, with checks
//! for the five axioms, the derived operator `∂`, and the identities used in
//! the extension proof.

mod checks;
pub mod linalg;
mod suite;

use std::fmt;
use std::ops::{Add, Neg, Sub};

use rand::RngCore;
use serde::Serialize;

use crate::diffgeo::{KForm, Splitting, VectorField};
use crate::error::{Error, Result};
use crate::parse::format_component_lists;
use crate::ratpoly::{Chart, PolyBounds, Polynomial};
use crate::scalar::Scalar;

pub use checks::{
    check_axiom, check_function_stability, check_identity, check_partial_closed_form, jacobiator, AxiomArg, Identity,
    Stability, StabilityReport,
};
pub use suite::{
    axiom_suite, identity_suite, partial_image_suite, run_trials, stability_suite, structure_suite, trial_rng,
    trial_seed, PermutedFrame, SuiteConfig,
};

/// Coefficients of a section against the carrier frame.
#[derive(Clone, PartialEq)]
pub struct Section<S>(pub Vec<Polynomial<S>>);

impl<S: Scalar> Section<S> {
    pub fn zero(chart: Chart, n: usize) -> Self {
        Section(vec![Polynomial::zero(chart); n])
    }

    /// The `k`-th frame element.
    pub fn basis(chart: Chart, n: usize, k: usize) -> Self {
        let mut s = Self::zero(chart, n);
        s.0[k] = Polynomial::one(chart);
        s
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn coeffs(&self) -> &[Polynomial<S>] {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(Polynomial::is_zero)
    }

    pub fn is_foliated(&self) -> bool {
        self.0.iter().all(Polynomial::is_foliated)
    }

    /// Multiplication by a function.
    pub fn mul_fn(&self, f: &Polynomial<S>) -> Self {
        Section(self.0.iter().map(|c| c * f).collect())
    }

    pub fn scale(&self, c: &S) -> Self {
        Section(self.0.iter().map(|p| p.scale(c)).collect())
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        if self.len() != other.len() {
            return Err(Error::Dimension(format!(
                "sections of length {} and {}",
                self.len(),
                other.len()
            )));
        }
        self.0
            .iter()
            .zip(&other.0)
            .map(|(a, b)| a.checked_add(b))
            .collect::<Result<_>>()
            .map(Section)
    }
}

impl<S: Scalar> Add for &Section<S> {
    type Output = Section<S>;
    fn add(self, rhs: Self) -> Section<S> {
        self.checked_add(rhs).expect("section length mismatch")
    }
}

impl<S: Scalar> Neg for &Section<S> {
    type Output = Section<S>;
    fn neg(self) -> Section<S> {
        Section(self.0.iter().map(|c| -c).collect())
    }
}

impl<S: Scalar> Sub for &Section<S> {
    type Output = Section<S>;
    fn sub(self, rhs: Self) -> Section<S> {
        self + &(-rhs)
    }
}

impl<S: Scalar> fmt::Debug for Section<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let items: Vec<String> = self.0.iter().map(|p| p.to_string()).collect();
        write!(f, "Section[{}]", items.join(", "))
    }
}

/// A carrier bundle with a global frame `ε_1..ε_n`, a symmetric pairing, an
/// anchor and a skew bracket. Metric and anchor are determined by their frame
/// values; the bracket is model specific.
pub trait CourantStructure<S: Scalar>: Sync {
    fn name(&self) -> &str;

    fn chart(&self) -> Chart;

    fn splitting(&self) -> Option<&Splitting<S>> {
        None
    }

    fn frame_size(&self) -> usize;

    /// Component groups of a section, as `(key, length)` in frame order.
    /// These are the keys of the text grammar.
    fn section_keys(&self) -> Vec<(&'static str, usize)>;

    fn frame_metric(&self, a: usize, b: usize) -> Polynomial<S>;

    fn frame_anchor(&self, a: usize) -> VectorField<S>;

    fn bracket(&self, a: &Section<S>, b: &Section<S>) -> Result<Section<S>>;

    /// A model-specific formula for `∂λ`, cross-checked against the Gram
    /// solve.
    fn partial_closed_form(&self, _lambda: &KForm<S>) -> Option<Result<Section<S>>> {
        None
    }

    /// Transversal structures only require the axioms on foliated sections
    /// and functions; random inputs are drawn accordingly.
    fn is_transversal(&self) -> bool {
        false
    }

    fn metric(&self, a: &Section<S>, b: &Section<S>) -> Result<Polynomial<S>> {
        self.check_section(a)?;
        self.check_section(b)?;
        let mut out = Polynomial::zero(self.chart());
        for (i, ai) in a.0.iter().enumerate().filter(|(_, c)| !c.is_zero()) {
            for (j, bj) in b.0.iter().enumerate().filter(|(_, c)| !c.is_zero()) {
                let g = self.frame_metric(i, j);
                if !g.is_zero() {
                    out += &(&(ai * bj) * &g);
                }
            }
        }
        Ok(out)
    }

    fn anchor(&self, a: &Section<S>) -> Result<VectorField<S>> {
        self.check_section(a)?;
        let mut out = VectorField::zero(self.chart());
        for (i, c) in a.0.iter().enumerate().filter(|(_, c)| !c.is_zero()) {
            out = &out + &self.frame_anchor(i).scale(c);
        }
        Ok(out)
    }

    fn check_section(&self, a: &Section<S>) -> Result<()> {
        if a.len() != self.frame_size() {
            return Err(Error::Dimension(format!(
                "{} sections have {} coefficients, got {}",
                self.name(),
                self.frame_size(),
                a.len()
            )));
        }
        Ok(())
    }

    fn random_section(&self, bounds: &PolyBounds, rng: &mut dyn RngCore) -> Section<S> {
        let foliated = self.is_transversal();
        Section(
            (0..self.frame_size())
                .map(|_| Polynomial::random(self.chart(), bounds, foliated, rng))
                .collect(),
        )
    }

    fn random_function(&self, bounds: &PolyBounds, rng: &mut dyn RngCore) -> Polynomial<S> {
        Polynomial::random(self.chart(), bounds, self.is_transversal(), rng)
    }

    /// Random 1-form; transversal structures draw foliated forms in `ann F`.
    fn random_one_form(&self, bounds: &PolyBounds, rng: &mut dyn RngCore) -> KForm<S> {
        let chart = self.chart();
        let transversal = self.is_transversal();
        let comps: Vec<Polynomial<S>> = (0..chart.dim())
            .map(|j| {
                if transversal && !chart.is_transverse_index(j) {
                    Polynomial::zero(chart)
                } else {
                    Polynomial::random(chart, bounds, transversal, rng)
                }
            })
            .collect();
        KForm::one_form(chart, &comps).expect("component count matches chart")
    }

    /// Canonical text, accepted back by the component-list parser.
    fn format_section(&self, s: &Section<S>) -> String {
        let keys = self.section_keys();
        let mut lists = Vec::new();
        let mut at = 0;
        for (_, n) in &keys {
            lists.push(&s.0[at..at + n]);
            at += n;
        }
        let names: Vec<&str> = keys.iter().map(|(k, _)| *k).collect();
        format_component_lists(&names, &lists)
    }

    /// Human-oriented rendering.
    fn render_section(&self, s: &Section<S>) -> String {
        self.format_section(s)
    }

    fn parse_section(&self, text: &str) -> Result<Section<S>> {
        let lists = crate::parse::parse_component_lists(text, self.chart(), &self.section_keys())?;
        let s = Section(lists.into_iter().flatten().collect());
        if self.is_transversal() && !s.is_foliated() {
            return Err(Error::Foliation(format!(
                "{} sections must have x-only coefficients",
                self.name()
            )));
        }
        Ok(s)
    }
}

/// `g(ε_a, ε_b)` as a matrix.
pub fn gram<S: Scalar>(structure: &dyn CourantStructure<S>) -> Vec<Vec<Polynomial<S>>> {
    let n = structure.frame_size();
    (0..n)
        .map(|a| (0..n).map(|b| structure.frame_metric(a, b)).collect())
        .collect()
}

/// The unique section `u` with `g(ε_k, u) = ½ λ(♯ε_k)` for every frame
/// element.
pub fn partial_op<S: Scalar>(structure: &dyn CourantStructure<S>, lambda: &KForm<S>) -> Result<Section<S>> {
    if lambda.degree() != 1 {
        return Err(Error::Degree(format!(
            "∂ takes a 1-form, got degree {}",
            lambda.degree()
        )));
    }
    let half = S::half();
    let rhs: Vec<Polynomial<S>> = (0..structure.frame_size())
        .map(|k| {
            let x = structure.frame_anchor(k);
            Ok(lambda.interior(&x)?.as_function()?.scale(&half))
        })
        .collect::<Result<_>>()?;
    linalg::solve(&gram(structure), &rhs).map(Section)
}

/// `∂f = ∂(df)`.
pub fn partial_fn<S: Scalar>(structure: &dyn CourantStructure<S>, f: &Polynomial<S>) -> Result<Section<S>> {
    partial_op(structure, &KForm::function(f.clone()).ext_d())
}

/// Outcome of a single check.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CheckReport {
    pub model: String,
    pub check: String,
    pub inputs: Vec<String>,
    pub pass: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub residual: Option<String>,
}

impl CheckReport {
    pub fn new(model: &str, check: impl Into<String>, inputs: Vec<String>, residual: Option<String>) -> Self {
        CheckReport {
            model: model.to_string(),
            check: check.into(),
            inputs,
            pass: residual.is_none(),
            residual,
        }
    }

    /// A check with no residual of its own (failure message instead).
    pub fn boolean(model: &str, check: impl Into<String>, inputs: Vec<String>, ok: bool, why: &str) -> Self {
        Self::new(model, check, inputs, (!ok).then(|| why.to_string()))
    }
}

pub(crate) fn residual_of<T: fmt::Display>(value: &T, zero: bool) -> Option<String> {
    (!zero).then(|| value.to_string())
}
