//! The extension `A0 = (F ⊕ ann Q) ⊕ E` of the transverse algebroid `E` to a
//! Courant algebroid over the whole chart.
//!
//! Frame order is `∂y_a`, `η^a`, `ψ∂x_i`, `dx^i`. The metric is block
//! diagonal, `♯0 = pr_F + ρ` with `ρ = φ ∘ ♯_E`, and the bracket is defined on
//! generators (leafwise sections and foliated `E`-sections) and extended to
//! function multiples of the `E`-frame by the Leibniz rule.

mod foliation;
mod oracle;
mod verify;

pub use foliation::foliation_checks;
pub use oracle::{oracle_bigtangent_compare, psi_map};
pub use verify::{
    axiom3_case_values, consistency_suite, partial0_image_suite, theorem_cases, verify_extension,
    well_definedness_suite, SectionKind,
};

use crate::courant::{gram, linalg, partial_op, CheckReport, CourantStructure, Section};
use crate::diffgeo::{KForm, Splitting, VectorField};
use crate::error::{Error, Result};
use crate::models::{q_algebroid, transverse_e, ESection, QAlgebroid, QSection, TransverseE};
use crate::ratpoly::{Chart, Polynomial};
use crate::scalar::Scalar;

/// A section of `A0`: `(Y, α) ⊕ Σ e_k ε_k`.
#[derive(Clone, Debug, PartialEq)]
pub struct ExtSection<S: Scalar> {
    pub y: Vec<Polynomial<S>>,
    pub alpha: Vec<Polynomial<S>>,
    /// Coefficients against `ψ∂x_1..ψ∂x_p, dx^1..dx^p`.
    pub e: Vec<Polynomial<S>>,
}

impl<S: Scalar> ExtSection<S> {
    pub fn zero(chart: Chart) -> Self {
        ExtSection {
            y: vec![Polynomial::zero(chart); chart.q()],
            alpha: vec![Polynomial::zero(chart); chart.q()],
            e: vec![Polynomial::zero(chart); 2 * chart.p()],
        }
    }

    pub fn from_parts(q: &QSection<S>, e: &[Polynomial<S>]) -> Self {
        ExtSection {
            y: q.y.clone(),
            alpha: q.alpha.clone(),
            e: e.to_vec(),
        }
    }

    pub fn from_section(chart: Chart, s: &Section<S>) -> Result<Self> {
        let q = chart.q();
        if s.len() != 2 * q + 2 * chart.p() {
            return Err(Error::Dimension(format!(
                "A0 sections have {} coefficients, got {}",
                2 * q + 2 * chart.p(),
                s.len()
            )));
        }
        Ok(ExtSection {
            y: s.0[..q].to_vec(),
            alpha: s.0[q..2 * q].to_vec(),
            e: s.0[2 * q..].to_vec(),
        })
    }

    pub fn to_section(&self) -> Section<S> {
        Section(self.y.iter().chain(&self.alpha).chain(&self.e).cloned().collect())
    }

    pub fn q_part(&self) -> QSection<S> {
        QSection {
            y: self.y.clone(),
            alpha: self.alpha.clone(),
        }
    }

    pub fn e_part(&self) -> ESection<S> {
        ESection::from_coeffs(&self.e)
    }
}

#[derive(Clone, Debug)]
pub struct ExtAlgebroid<S: Scalar> {
    chart: Chart,
    splitting: Splitting<S>,
    q_model: QAlgebroid<S>,
    e_model: TransverseE<S>,
    /// Bracket of each ordered pair of `E`-frame elements.
    frame_brackets: Vec<Vec<Section<S>>>,
}

impl<S: Scalar> ExtAlgebroid<S> {
    /// Builds `A0` over the transverse model; fails with a soundness error if
    /// a frame bracket has a nonzero transverse correction.
    pub fn new(splitting: Splitting<S>) -> Result<Self> {
        let chart = splitting.chart();
        let mut out = ExtAlgebroid {
            chart,
            q_model: q_algebroid(splitting.clone()),
            e_model: transverse_e(splitting.clone()),
            splitting,
            frame_brackets: Vec::new(),
        };
        let n = 2 * chart.p();
        let basis = |k| ESection::from_coeffs(&Section::<S>::basis(chart, n, k).0);
        out.frame_brackets = (0..n)
            .map(|k| (0..n).map(|l| out.bracket_foliated(&basis(k), &basis(l))).collect())
            .collect::<Result<_>>()?;
        Ok(out)
    }

    pub fn splitting(&self) -> &Splitting<S> {
        &self.splitting
    }

    pub fn q_model(&self) -> &QAlgebroid<S> {
        &self.q_model
    }

    pub fn e_model(&self) -> &TransverseE<S> {
        &self.e_model
    }

    fn offset(&self) -> usize {
        2 * self.chart.q()
    }

    fn assemble(&self, q: &QSection<S>, e: &[Polynomial<S>]) -> Section<S> {
        ExtSection::from_parts(q, e).to_section()
    }

    fn field_section(&self, y: &VectorField<S>) -> Section<S> {
        let mut out = Section::zero(self.chart, self.frame_size_inner());
        out.0[..self.chart.q()].clone_from_slice(y.leaf_components());
        out
    }

    fn frame_size_inner(&self) -> usize {
        2 * self.chart.q() + 2 * self.chart.p()
    }

    /// `ρ e = φ(♯_E e) = Σ v_i e_i`.
    pub fn rho(&self, e: &ESection<S>) -> Result<VectorField<S>> {
        self.splitting.horizontal_lift(&e.v)
    }

    /// Fails unless `x` is tangent to the leaves.
    fn leafwise(&self, x: VectorField<S>, what: &str) -> Result<VectorField<S>> {
        if x.transverse_components().iter().any(|c| !c.is_zero()) {
            return Err(Error::Soundness(format!("{what} has a transverse part: {x}")));
        }
        Ok(x)
    }

    /// `∂0 λ = (0, λ|_F) ⊕ ∂_E(ᵗφ λ)`.
    pub fn partial0(&self, lambda: &KForm<S>) -> Result<Section<S>> {
        let q = QSection {
            y: vec![Polynomial::zero(self.chart); self.chart.q()],
            alpha: self.splitting.ann_q_components(lambda)?,
        };
        let pulled = self.splitting.ann_f_form(&self.splitting.ann_f_components(lambda)?)?;
        let e = partial_op(&self.e_model, &pulled)?;
        Ok(self.assemble(&q, &e.0))
    }

    pub fn partial0_fn(&self, f: &Polynomial<S>) -> Result<Section<S>> {
        self.partial0(&KForm::function(f.clone()).ext_d())
    }

    /// `½ ♯_{g_E}(λ ∘ ρ)` where `g_E(♯_{g_E} μ, u) = μ(u)`.
    pub fn half_sharp_rho(&self, lambda: &KForm<S>) -> Result<Vec<Polynomial<S>>> {
        let n = 2 * self.chart.p();
        let half = S::half();
        let rhs: Vec<Polynomial<S>> = (0..n)
            .map(|k| {
                let rho = self.frame_anchor_inner(self.offset() + k);
                Ok(lambda.interior(&rho)?.as_function()?.scale(&half))
            })
            .collect::<Result<_>>()?;
        linalg::solve(&gram(&self.e_model), &rhs)
    }

    /// `(0, λ|_F) ⊕ ½ ♯_{g_E}(λ ∘ ρ)`, the other expression for `∂0 λ`.
    pub fn partial0_via_sharp(&self, lambda: &KForm<S>) -> Result<Section<S>> {
        let q = QSection {
            y: vec![Polynomial::zero(self.chart); self.chart.q()],
            alpha: self.splitting.ann_q_components(lambda)?,
        };
        Ok(self.assemble(&q, &self.half_sharp_rho(lambda)?))
    }

    /// Leafwise generators: `([Y1,Y2] ⊕ 0) + ∂0 λ` with
    /// `λ = L_{Y1}α2 - L_{Y2}α1 + ½ d(α1(Y2) - α2(Y1))`, checked against
    /// `[·,·]_Q ⊕ ½♯_{g_E}(λ∘ρ)`.
    pub fn bracket_leafwise(&self, a: &QSection<S>, b: &QSection<S>) -> Result<Section<S>> {
        let (y1, y2) = (a.field(self.chart)?, b.field(self.chart)?);
        let (a1, a2) = (a.form(&self.splitting)?, b.form(&self.splitting)?);
        let lambda = crate::models::standard_form_part(&y1, &a1, &y2, &a2)?;
        let field = self.leafwise(y1.lie_bracket(&y2)?, "[Y1,Y2]")?;
        let second = &self.field_section(&field) + &self.partial0(&lambda)?;
        let first = self.assemble(&self.q_model.bracket_typed(a, b)?, &self.half_sharp_rho(&lambda)?);
        if first != second {
            return Err(Error::Soundness(format!(
                "the two expressions of the leafwise bracket differ by {:?}",
                &first - &second
            )));
        }
        Ok(second)
    }

    /// `[e, Y ⊕ α]0 = ([ρe, Y] ⊕ 0) + ∂0(L_{ρe} α)` for foliated `e`.
    pub fn bracket_mixed(&self, e: &ESection<S>, q: &QSection<S>) -> Result<Section<S>> {
        if !e.is_foliated() {
            return Err(Error::Precondition(
                "mixed generator bracket needs a foliated E-section".into(),
            ));
        }
        let rho = self.rho(e)?;
        let field = self.leafwise(rho.lie_bracket(&q.field(self.chart)?)?, "[ρe, Y]")?;
        let lambda = q.form(&self.splitting)?.lie_derivative(&rho)?;
        Ok(&self.field_section(&field) + &self.partial0(&lambda)?)
    }

    /// `[e1, e2]0 = (([ρe1, ρe2] - ρ[e1,e2]_E) ⊕ 0) ⊕ [e1,e2]_E` for foliated
    /// `e1`, `e2`.
    pub fn bracket_foliated(&self, e1: &ESection<S>, e2: &ESection<S>) -> Result<Section<S>> {
        let eb = self.e_model.bracket_typed(e1, e2)?;
        let corr = &self.rho(e1)?.lie_bracket(&self.rho(e2)?)? - &self.rho(&eb)?;
        let corr = self.leafwise(corr, "[ρe1, ρe2] - ρ[e1,e2]_E")?;
        let mut out = self.field_section(&corr);
        for (slot, c) in out.0[self.offset()..].iter_mut().zip(eb.coeffs()) {
            *slot = c;
        }
        Ok(out)
    }

    /// `ψ([ρe1, ρe2] - ρ[e1,e2]_E)`, which must vanish.
    pub fn correction_transverse_part(&self, e1: &ESection<S>, e2: &ESection<S>) -> Result<Vec<Polynomial<S>>> {
        let eb = self.e_model.bracket_typed(e1, e2)?;
        let corr = &self.rho(e1)?.lie_bracket(&self.rho(e2)?)? - &self.rho(&eb)?;
        Ok(self.splitting.transverse_projection(&corr))
    }

    /// The bracket on arbitrary sections.
    pub fn bracket0(&self, a: &Section<S>, b: &Section<S>) -> Result<Section<S>> {
        let (a, b) = (
            ExtSection::from_section(self.chart, a)?,
            ExtSection::from_section(self.chart, b)?,
        );
        let (p, off) = (self.chart.p(), self.offset());
        let (qa, qb) = (a.q_part(), b.q_part());
        let (ya, yb) = (qa.field(self.chart)?, qb.field(self.chart)?);
        let mut total = self.bracket_leafwise(&qa, &qb)?;

        // [qa, Σ h_k ε_k] = Σ (-h_k [ε_k, qa] + Ya(h_k) ε_k); only the vector
        // part of the frame has a nonzero anchor.
        for k in 0..p {
            let basis = self.e_basis(k);
            if !b.e[k].is_zero() {
                total = &total - &self.bracket_mixed(&basis, &qa)?.mul_fn(&b.e[k]);
            }
            if !a.e[k].is_zero() {
                total = &total + &self.bracket_mixed(&basis, &qb)?.mul_fn(&a.e[k]);
            }
        }
        for k in 0..2 * p {
            total.0[off + k] += &ya.apply(&b.e[k])?;
            total.0[off + k] -= &yb.apply(&a.e[k])?;
        }

        // [Σ f_k ε_k, Σ h_l ε_l]
        for (k, fk) in a.e.iter().enumerate().filter(|(_, f)| !f.is_zero()) {
            for (l, hl) in b.e.iter().enumerate().filter(|(_, h)| !h.is_zero()) {
                let br = &self.frame_brackets[k][l];
                if !br.is_zero() {
                    total = &total + &br.mul_fn(&(fk * hl));
                }
            }
        }
        let (rho_a, rho_b) = (self.rho(&a.e_part())?, self.rho(&b.e_part())?);
        for k in 0..2 * p {
            total.0[off + k] += &rho_a.apply(&b.e[k])?;
            total.0[off + k] -= &rho_b.apply(&a.e[k])?;
        }
        // - Σ g_kl (f_k ∂0 h_l - h_l ∂0 f_k), with g_kl = ½ on dual pairs.
        let half = S::half();
        for l in 0..2 * p {
            let dual = (l + p) % (2 * p);
            let (fd, hd) = (a.e[dual].scale(&half), b.e[dual].scale(&half));
            if !fd.is_zero() && !b.e[l].is_zero() {
                total = &total - &self.partial0_fn(&b.e[l])?.mul_fn(&fd);
            }
            if !hd.is_zero() && !a.e[l].is_zero() {
                total = &total + &self.partial0_fn(&a.e[l])?.mul_fn(&hd);
            }
        }
        Ok(total)
    }

    fn e_basis(&self, k: usize) -> ESection<S> {
        ESection::from_coeffs(&Section::<S>::basis(self.chart, 2 * self.chart.p(), k).0)
    }

    fn frame_anchor_inner(&self, a: usize) -> VectorField<S> {
        let q = self.chart.q();
        let off = self.offset();
        if a < q {
            VectorField::coordinate(self.chart, self.chart.leaf_index(a)).expect("frame index in range")
        } else if a < off || a >= off + self.chart.p() {
            VectorField::zero(self.chart)
        } else {
            self.splitting.q_frame(a - off)
        }
    }

    /// Compares the bracket of `f ε_k` with `partner`, computed once with
    /// `f ε_k` as a foliated generator and once through the Leibniz
    /// extension.
    pub fn consistency_foliated_multiplier(
        &self,
        k: usize,
        f: &Polynomial<S>,
        partner: &Section<S>,
    ) -> Result<CheckReport> {
        if !f.is_foliated() {
            return Err(Error::Precondition(format!("multiplier {f} is not foliated")));
        }
        if k >= 2 * self.chart.p() {
            return Err(Error::Argument(format!("E-frame index {k} out of range")));
        }
        let b = ExtSection::from_section(self.chart, partner)?;
        let mut e = ESection::zero(self.chart);
        let mut coeffs = e.coeffs();
        coeffs[k] = f.clone();
        e = ESection::from_coeffs(&coeffs);

        let mut direct = self.bracket_mixed(&e, &b.q_part())?;
        let rho_e = self.rho(&e)?;
        let off = self.offset();
        for (l, hl) in b.e.iter().enumerate().filter(|(_, h)| !h.is_zero()) {
            let basis = self.e_basis(l);
            direct = &direct + &self.bracket_foliated(&e, &basis)?.mul_fn(hl);
            direct.0[off + l] += &rho_e.apply(hl)?;
            let g = self
                .e_model
                .metric(&Section(coeffs.clone()), &Section(basis.coeffs()))?;
            if !g.is_zero() {
                direct = &direct - &self.partial0_fn(hl)?.mul_fn(&g);
            }
        }
        let mut generator = Section::zero(self.chart, self.frame_size_inner());
        generator.0[off..].clone_from_slice(&coeffs);
        let extended = self.bracket0(&generator, partner)?;
        let diff = &direct - &extended;
        Ok(CheckReport::new(
            "A0",
            "consistency_foliated_multiplier",
            vec![format!("k={k}"), f.to_string(), self.format_section(partner)],
            (!diff.is_zero()).then(|| self.format_section(&diff)),
        ))
    }
}

impl<S: Scalar> CourantStructure<S> for ExtAlgebroid<S> {
    fn name(&self) -> &str {
        "A0"
    }

    fn chart(&self) -> Chart {
        self.chart
    }

    fn splitting(&self) -> Option<&Splitting<S>> {
        Some(&self.splitting)
    }

    fn frame_size(&self) -> usize {
        self.frame_size_inner()
    }

    fn section_keys(&self) -> Vec<(&'static str, usize)> {
        vec![
            ("F", self.chart.q()),
            ("annQ", self.chart.q()),
            ("E", 2 * self.chart.p()),
        ]
    }

    fn frame_metric(&self, a: usize, b: usize) -> Polynomial<S> {
        let off = self.offset();
        match (a < off, b < off) {
            (true, true) => crate::models::dual_block_metric(self.chart, self.chart.q(), a, b),
            (false, false) => crate::models::dual_block_metric(self.chart, self.chart.p(), a - off, b - off),
            _ => Polynomial::zero(self.chart),
        }
    }

    fn frame_anchor(&self, a: usize) -> VectorField<S> {
        self.frame_anchor_inner(a)
    }

    fn bracket(&self, a: &Section<S>, b: &Section<S>) -> Result<Section<S>> {
        self.bracket0(a, b)
    }

    fn partial_closed_form(&self, lambda: &KForm<S>) -> Option<Result<Section<S>>> {
        Some(self.partial0(lambda))
    }

    fn render_section(&self, s: &Section<S>) -> String {
        let Ok(t) = ExtSection::from_section(self.chart, s) else {
            return self.format_section(s);
        };
        let (q, e) = (t.q_part(), t.e_part());
        match (
            q.field(self.chart),
            q.form(&self.splitting),
            e.field(self.chart),
            e.form(self.chart),
        ) {
            (Ok(y), Ok(a), Ok(v), Ok(b)) => format!("({y} ⊕ {a}) ⊕ ({v} ⊕ {b})"),
            _ => self.format_section(s),
        }
    }
}
