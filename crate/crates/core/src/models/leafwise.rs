use super::{dual_block_metric, standard_form_part};
use crate::courant::{CourantStructure, Section};
use crate::diffgeo::{KForm, Splitting, VectorField};
use crate::error::{Error, Result};
use crate::ratpoly::{Chart, Polynomial};
use crate::scalar::Scalar;

/// `F ⊕ ann Q` with frame `∂y_1..∂y_q, η^1..η^q`; anchor is the projection
/// on `F`.
#[derive(Clone, Debug)]
pub struct QAlgebroid<S: Scalar> {
    chart: Chart,
    splitting: Splitting<S>,
}

pub fn q_algebroid<S: Scalar>(splitting: Splitting<S>) -> QAlgebroid<S> {
    QAlgebroid {
        chart: splitting.chart(),
        splitting,
    }
}

/// `Y ⊕ α` with `Y = Σ y_a ∂y_a` and `α = Σ alpha_a η^a`.
#[derive(Clone, Debug, PartialEq)]
pub struct QSection<S: Scalar> {
    pub y: Vec<Polynomial<S>>,
    pub alpha: Vec<Polynomial<S>>,
}

impl<S: Scalar> QSection<S> {
    pub fn zero(chart: Chart) -> Self {
        QSection {
            y: vec![Polynomial::zero(chart); chart.q()],
            alpha: vec![Polynomial::zero(chart); chart.q()],
        }
    }

    pub fn from_section(s: &Section<S>) -> Self {
        let q = s.len() / 2;
        QSection {
            y: s.0[..q].to_vec(),
            alpha: s.0[q..].to_vec(),
        }
    }

    pub fn to_section(&self) -> Section<S> {
        Section(self.y.iter().chain(&self.alpha).cloned().collect())
    }

    pub fn field(&self, chart: Chart) -> Result<VectorField<S>> {
        VectorField::leafwise(chart, &self.y)
    }

    pub fn form(&self, splitting: &Splitting<S>) -> Result<KForm<S>> {
        splitting.ann_q_form(&self.alpha)
    }

    pub fn is_zero(&self) -> bool {
        self.y.iter().chain(&self.alpha).all(Polynomial::is_zero)
    }
}

/// The bracket for arbitrary 1-form representatives `α1`, `α2` (not
/// necessarily in `ann Q`), projected to `ann Q` at the end.
pub fn q_bracket_raw<S: Scalar>(
    splitting: &Splitting<S>,
    y1: &VectorField<S>,
    a1: &KForm<S>,
    y2: &VectorField<S>,
    a2: &KForm<S>,
) -> Result<QSection<S>> {
    if !(y1
        .transverse_components()
        .iter()
        .chain(y2.transverse_components())
        .all(Polynomial::is_zero))
    {
        return Err(Error::Argument(
            "leafwise bracket needs fields tangent to the leaves".into(),
        ));
    }
    let field = y1.lie_bracket(y2)?;
    let lambda = standard_form_part(y1, a1, y2, a2)?;
    Ok(QSection {
        y: field.leaf_components().to_vec(),
        alpha: splitting.ann_q_components(&lambda)?,
    })
}

/// Same bracket through the bigraded differential:
/// `[Y1,Y2] ⊕ (i(Y1)d''α2 - i(Y2)d''α1 + ½ d''(α2(Y1) - α1(Y2)))`.
pub fn q_bracket_dprimeprime<S: Scalar>(
    splitting: &Splitting<S>,
    a: &QSection<S>,
    b: &QSection<S>,
) -> Result<QSection<S>> {
    let chart = splitting.chart();
    let (y1, y2) = (a.field(chart)?, b.field(chart)?);
    let (a1, a2) = (a.form(splitting)?, b.form(splitting)?);
    let first = splitting.d_second(&a2)?.interior(&y1)?;
    let second = splitting.d_second(&a1)?.interior(&y2)?;
    let pairing = &a2.interior(&y1)?.as_function()? - &a1.interior(&y2)?.as_function()?;
    let exact = splitting
        .d_second(&KForm::function(pairing))?
        .scale(&Polynomial::constant(chart, S::half()));
    let lambda = (&first - &second).checked_add(&exact)?;
    Ok(QSection {
        y: y1.lie_bracket(&y2)?.leaf_components().to_vec(),
        alpha: splitting.ann_q_components(&lambda)?,
    })
}

impl<S: Scalar> QAlgebroid<S> {
    pub fn bracket_typed(&self, a: &QSection<S>, b: &QSection<S>) -> Result<QSection<S>> {
        let c = self.chart;
        q_bracket_raw(
            &self.splitting,
            &a.field(c)?,
            &a.form(&self.splitting)?,
            &b.field(c)?,
            &b.form(&self.splitting)?,
        )
    }
}

impl<S: Scalar> CourantStructure<S> for QAlgebroid<S> {
    fn name(&self) -> &str {
        "Q"
    }

    fn chart(&self) -> Chart {
        self.chart
    }

    fn splitting(&self) -> Option<&Splitting<S>> {
        Some(&self.splitting)
    }

    fn frame_size(&self) -> usize {
        2 * self.chart.q()
    }

    fn section_keys(&self) -> Vec<(&'static str, usize)> {
        vec![("F", self.chart.q()), ("annQ", self.chart.q())]
    }

    fn frame_metric(&self, a: usize, b: usize) -> Polynomial<S> {
        dual_block_metric(self.chart, self.chart.q(), a, b)
    }

    fn frame_anchor(&self, a: usize) -> VectorField<S> {
        if a < self.chart.q() {
            VectorField::coordinate(self.chart, self.chart.leaf_index(a)).expect("frame index in range")
        } else {
            VectorField::zero(self.chart)
        }
    }

    fn bracket(&self, a: &Section<S>, b: &Section<S>) -> Result<Section<S>> {
        self.check_section(a)?;
        self.check_section(b)?;
        let out = self.bracket_typed(&QSection::from_section(a), &QSection::from_section(b))?;
        Ok(out.to_section())
    }

    /// `∂λ = 0 ⊕ λ|_F`.
    fn partial_closed_form(&self, lambda: &KForm<S>) -> Option<Result<Section<S>>> {
        Some(self.splitting.ann_q_components(lambda).map(|alpha| {
            QSection {
                y: vec![Polynomial::zero(self.chart); self.chart.q()],
                alpha,
            }
            .to_section()
        }))
    }

    fn render_section(&self, s: &Section<S>) -> String {
        let t = QSection::from_section(s);
        match (t.field(self.chart), t.form(&self.splitting)) {
            (Ok(y), Ok(a)) => format!("{y} ⊕ {a}"),
            _ => self.format_section(s),
        }
    }
}
