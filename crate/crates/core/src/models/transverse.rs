use super::{dual_block_metric, standard_form_part};
use crate::courant::{CourantStructure, Section};
use crate::diffgeo::{KForm, Splitting, VectorField};
use crate::error::{Error, Result};
use crate::ratpoly::{Chart, Polynomial};
use crate::scalar::Scalar;

/// `νF ⊕ ann F` with foliated frame `ψ∂x_1..ψ∂x_p, dx^1..dx^p` and the
/// standard bracket in the transverse variables. The anchor of `ψ∂x_i` is
/// represented by `∂x_i`; on foliated functions only its transverse class
/// matters.
#[derive(Clone, Debug)]
pub struct TransverseE<S: Scalar> {
    chart: Chart,
    splitting: Splitting<S>,
}

pub fn transverse_e<S: Scalar>(splitting: Splitting<S>) -> TransverseE<S> {
    TransverseE {
        chart: splitting.chart(),
        splitting,
    }
}

/// `V ⊕ β` with `V = Σ v_i ψ∂x_i` and `β = Σ beta_i dx^i`.
#[derive(Clone, Debug, PartialEq)]
pub struct ESection<S: Scalar> {
    pub v: Vec<Polynomial<S>>,
    pub beta: Vec<Polynomial<S>>,
}

impl<S: Scalar> ESection<S> {
    pub fn zero(chart: Chart) -> Self {
        ESection {
            v: vec![Polynomial::zero(chart); chart.p()],
            beta: vec![Polynomial::zero(chart); chart.p()],
        }
    }

    pub fn from_coeffs(coeffs: &[Polynomial<S>]) -> Self {
        let p = coeffs.len() / 2;
        ESection {
            v: coeffs[..p].to_vec(),
            beta: coeffs[p..].to_vec(),
        }
    }

    pub fn coeffs(&self) -> Vec<Polynomial<S>> {
        self.v.iter().chain(&self.beta).cloned().collect()
    }

    pub fn is_foliated(&self) -> bool {
        self.v.iter().chain(&self.beta).all(Polynomial::is_foliated)
    }

    pub fn is_zero(&self) -> bool {
        self.v.iter().chain(&self.beta).all(Polynomial::is_zero)
    }

    /// `Σ v_i ∂x_i`.
    pub fn field(&self, chart: Chart) -> Result<VectorField<S>> {
        VectorField::transversal(chart, &self.v)
    }

    /// `Σ beta_i dx^i`.
    pub fn form(&self, chart: Chart) -> Result<KForm<S>> {
        let mut comps = self.beta.clone();
        comps.resize(chart.dim(), Polynomial::zero(chart));
        KForm::one_form(chart, &comps)
    }
}

/// Bracket of foliated sections.
pub fn transverse_bracket<S: Scalar>(chart: Chart, a: &ESection<S>, b: &ESection<S>) -> Result<ESection<S>> {
    if !(a.is_foliated() && b.is_foliated()) {
        return Err(Error::Foliation(
            "the transverse bracket is defined on foliated (x-only) sections".into(),
        ));
    }
    let (v1, v2) = (a.field(chart)?, b.field(chart)?);
    let field = v1.lie_bracket(&v2)?;
    let form = standard_form_part(&v1, &a.form(chart)?, &v2, &b.form(chart)?)?;
    Ok(ESection {
        v: field.transverse_components().to_vec(),
        beta: (0..chart.p()).map(|i| form.component(i)).collect(),
    })
}

impl<S: Scalar> TransverseE<S> {
    pub fn bracket_typed(&self, a: &ESection<S>, b: &ESection<S>) -> Result<ESection<S>> {
        transverse_bracket(self.chart, a, b)
    }
}

impl<S: Scalar> CourantStructure<S> for TransverseE<S> {
    fn name(&self) -> &str {
        "E"
    }

    fn chart(&self) -> Chart {
        self.chart
    }

    fn splitting(&self) -> Option<&Splitting<S>> {
        Some(&self.splitting)
    }

    fn frame_size(&self) -> usize {
        2 * self.chart.p()
    }

    fn section_keys(&self) -> Vec<(&'static str, usize)> {
        vec![("nu", self.chart.p()), ("annF", self.chart.p())]
    }

    fn frame_metric(&self, a: usize, b: usize) -> Polynomial<S> {
        dual_block_metric(self.chart, self.chart.p(), a, b)
    }

    fn frame_anchor(&self, a: usize) -> VectorField<S> {
        if a < self.chart.p() {
            VectorField::coordinate(self.chart, a).expect("frame index in range")
        } else {
            VectorField::zero(self.chart)
        }
    }

    fn bracket(&self, a: &Section<S>, b: &Section<S>) -> Result<Section<S>> {
        self.check_section(a)?;
        self.check_section(b)?;
        let out = self.bracket_typed(&ESection::from_coeffs(&a.0), &ESection::from_coeffs(&b.0))?;
        Ok(Section(out.coeffs()))
    }

    /// `∂λ = 0 ⊕ Σ λ(∂x_i) dx^i`.
    fn partial_closed_form(&self, lambda: &KForm<S>) -> Option<Result<Section<S>>> {
        let p = self.chart.p();
        let mut out = Section::zero(self.chart, 2 * p);
        for i in 0..p {
            out.0[p + i] = lambda.component(i);
        }
        Some(Ok(out))
    }

    fn is_transversal(&self) -> bool {
        true
    }

    fn render_section(&self, s: &Section<S>) -> String {
        let t = ESection::from_coeffs(&s.0);
        match (t.field(self.chart), t.form(self.chart)) {
            (Ok(v), Ok(b)) => format!("{v} ⊕ {b}"),
            _ => self.format_section(s),
        }
    }
}
