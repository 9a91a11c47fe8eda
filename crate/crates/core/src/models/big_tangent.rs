use std::marker::PhantomData;

use super::{dual_block_metric, standard_form_part};
use crate::courant::{CourantStructure, Section};
use crate::diffgeo::{KForm, VectorField};
use crate::error::Result;
use crate::ratpoly::{Chart, Polynomial};
use crate::scalar::Scalar;

/// `TM ⊕ T*M` with frame `∂_1..∂_n, du^1..du^n` (`n = p+q`).
#[derive(Clone, Debug)]
pub struct BigTangent<S: Scalar> {
    chart: Chart,
    _scalar: PhantomData<S>,
}

pub fn big_tangent<S: Scalar>(chart: Chart) -> BigTangent<S> {
    BigTangent {
        chart,
        _scalar: PhantomData,
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct BigTangentSection<S: Scalar> {
    pub field: VectorField<S>,
    pub form: KForm<S>,
}

impl<S: Scalar> BigTangentSection<S> {
    pub fn new(field: VectorField<S>, form: KForm<S>) -> Result<Self> {
        field.chart().ensure_same(&form.chart())?;
        if form.degree() != 1 {
            return Err(crate::Error::Degree(format!(
                "big tangent sections carry a 1-form, got degree {}",
                form.degree()
            )));
        }
        Ok(BigTangentSection { field, form })
    }

    pub fn from_section(chart: Chart, s: &Section<S>) -> Result<Self> {
        let n = chart.dim();
        Ok(BigTangentSection {
            field: VectorField::from_components(chart, s.0[..n].to_vec())?,
            form: KForm::one_form(chart, &s.0[n..])?,
        })
    }

    pub fn to_section(&self) -> Section<S> {
        let n = self.field.chart().dim();
        let mut out = self.field.components().to_vec();
        out.extend((0..n).map(|j| self.form.component(j)));
        Section(out)
    }
}

/// `[X1 ⊕ α1, X2 ⊕ α2] = [X1,X2] ⊕ (L_{X1}α2 - L_{X2}α1 + ½ d(α1(X2) - α2(X1)))`.
pub fn big_tangent_bracket<S: Scalar>(
    a: &BigTangentSection<S>,
    b: &BigTangentSection<S>,
) -> Result<BigTangentSection<S>> {
    Ok(BigTangentSection {
        field: a.field.lie_bracket(&b.field)?,
        form: standard_form_part(&a.field, &a.form, &b.field, &b.form)?,
    })
}

impl<S: Scalar> CourantStructure<S> for BigTangent<S> {
    fn name(&self) -> &str {
        "bigtangent"
    }

    fn chart(&self) -> Chart {
        self.chart
    }

    fn frame_size(&self) -> usize {
        2 * self.chart.dim()
    }

    fn section_keys(&self) -> Vec<(&'static str, usize)> {
        vec![("vf", self.chart.dim()), ("form", self.chart.dim())]
    }

    fn frame_metric(&self, a: usize, b: usize) -> Polynomial<S> {
        dual_block_metric(self.chart, self.chart.dim(), a, b)
    }

    fn frame_anchor(&self, a: usize) -> VectorField<S> {
        if a < self.chart.dim() {
            VectorField::coordinate(self.chart, a).expect("frame index in range")
        } else {
            VectorField::zero(self.chart)
        }
    }

    fn bracket(&self, a: &Section<S>, b: &Section<S>) -> Result<Section<S>> {
        self.check_section(a)?;
        self.check_section(b)?;
        let a = BigTangentSection::from_section(self.chart, a)?;
        let b = BigTangentSection::from_section(self.chart, b)?;
        Ok(big_tangent_bracket(&a, &b)?.to_section())
    }

    /// `∂λ = 0 ⊕ λ`.
    fn partial_closed_form(&self, lambda: &KForm<S>) -> Option<Result<Section<S>>> {
        let n = self.chart.dim();
        let mut out = Section::zero(self.chart, 2 * n);
        for j in 0..n {
            out.0[n + j] = lambda.component(j);
        }
        Some(Ok(out))
    }

    fn render_section(&self, s: &Section<S>) -> String {
        match BigTangentSection::from_section(self.chart, s) {
            Ok(t) => format!("{} ⊕ {}", t.field, t.form),
            Err(_) => self.format_section(s),
        }
    }
}
