//! The subbundle `B = F ⊕ 0` of `A0` and the reduction `B^⊥ / B ≅ E`.

use super::ExtAlgebroid;
use crate::courant::{linalg, run_trials, trial_rng, CheckReport, CourantStructure, Section, SuiteConfig};
use crate::error::Result;
use crate::ratpoly::Polynomial;
use crate::scalar::Scalar;

fn zero_report(name: &str, inputs: Vec<String>, residual: Option<String>) -> CheckReport {
    CheckReport::new("A0", name, inputs, residual)
}

/// Frame-level facts: `B` isotropic with `♯0(B) = F`, and `B^⊥` computed as
/// a kernel equals the span of the `F`- and `E`-frames.
fn frame_checks<S: Scalar>(a: &ExtAlgebroid<S>) -> Result<Vec<CheckReport>> {
    let chart = CourantStructure::<S>::chart(a);
    let (p, q) = (chart.p(), chart.q());
    let n = a.frame_size();
    let mut out = Vec::new();

    let mut bad = Vec::new();
    for k in 0..q {
        for l in 0..q {
            let g = a.frame_metric(k, l);
            if !g.is_zero() {
                bad.push(format!("g(b{k}, b{l}) = {g}"));
            }
        }
    }
    out.push(zero_report(
        "B_isotropic",
        vec![],
        (!bad.is_empty()).then(|| bad.join("; ")),
    ));

    let mut bad = Vec::new();
    for k in 0..q {
        let x = a.frame_anchor(k);
        let expected = crate::diffgeo::VectorField::coordinate(chart, p + k)?;
        if x != expected {
            bad.push(format!("♯0 b{k} = {x}"));
        }
    }
    out.push(zero_report(
        "B_anchor_is_F",
        vec![],
        (!bad.is_empty()).then(|| bad.join("; ")),
    ));

    let pairing: Vec<Vec<Polynomial<S>>> = (0..q).map(|k| (0..n).map(|j| a.frame_metric(k, j)).collect()).collect();
    let kernel = linalg::kernel(&pairing, n, chart)?;
    let in_span = kernel.iter().all(|v| v[q..2 * q].iter().all(Polynomial::is_zero));
    let ok = kernel.len() == q + 2 * p && in_span;
    out.push(CheckReport::boolean(
        "A0",
        "C_equals_F_plus_E",
        vec![],
        ok,
        "the orthogonal of B is not spanned by the F- and E-frames",
    ));
    Ok(out)
}

/// `B` isotropic and closed under the bracket, `♯0(B) = F`, `C = B^⊥` equal
/// to `F ⊕ E`, and the metric, anchor and bracket induced on `C / B` equal
/// those of `E`, independently of the representatives.
pub fn foliation_checks<S: Scalar>(a: &ExtAlgebroid<S>, cfg: &SuiteConfig) -> Result<Vec<CheckReport>> {
    let chart = CourantStructure::<S>::chart(a);
    let (p, q) = (chart.p(), chart.q());
    let e_model = a.e_model();
    let mut out = frame_checks(a)?;
    let lift = |y: &[Polynomial<S>], e: &[Polynomial<S>]| {
        let mut s = Section::zero(chart, a.frame_size());
        s.0[..q].clone_from_slice(y);
        s.0[2 * q..].clone_from_slice(e);
        s
    };
    out.extend(run_trials(cfg.trials, |i| {
        let rng = &mut trial_rng(cfg.seed, "A0/foliation", i);
        let b = &cfg.bounds;
        let mut draw = |n: usize, foliated: bool| -> Vec<Polynomial<S>> {
            (0..n).map(|_| Polynomial::random(chart, b, foliated, rng)).collect()
        };
        let (y1, y2, y3, y4) = (draw(q, false), draw(q, false), draw(q, false), draw(q, false));
        let (e1, e2) = (draw(2 * p, true), draw(2 * p, true));
        let none = vec![Polynomial::zero(chart); 2 * p];
        let mut reports = Vec::new();

        let (b1, b2) = (lift(&y1, &none), lift(&y2, &none));
        let inputs = vec![a.format_section(&b1), a.format_section(&b2)];
        let g = a.metric(&b1, &b2)?;
        reports.push(zero_report(
            "B_isotropic_sections",
            inputs.clone(),
            (!g.is_zero()).then(|| g.to_string()),
        ));
        let br = a.bracket0(&b1, &b2)?;
        let closed = br.0[q..].iter().all(Polynomial::is_zero);
        reports.push(CheckReport::boolean(
            "A0",
            "B_closed",
            inputs.clone(),
            closed,
            "bracket of B-sections leaves B",
        ));
        let x = a.anchor(&b1)?;
        let leafwise = x.transverse_components().iter().all(Polynomial::is_zero) && x.leaf_components() == &y1[..];
        reports.push(CheckReport::boolean(
            "A0",
            "B_anchor_sections",
            vec![inputs[0].clone()],
            leafwise,
            "♯0 of a B-section differs from its F-part",
        ));

        let (c1, c2) = (
            lift(&(0..q).map(|_| Polynomial::zero(chart)).collect::<Vec<_>>(), &e1),
            lift(&y1, &e2),
        );
        let (c3, c4) = (lift(&y3, &e1), lift(&y4, &e2));
        let inputs = vec![
            e_model.format_section(&Section(e1.clone())),
            e_model.format_section(&Section(e2.clone())),
        ];
        let target_g = e_model.metric(&Section(e1.clone()), &Section(e2.clone()))?;
        for (name, s, t) in [("quotient_metric", &c1, &c2), ("quotient_metric_shifted", &c3, &c4)] {
            let g = &a.metric(s, t)? - &target_g;
            reports.push(zero_report(name, inputs.clone(), (!g.is_zero()).then(|| g.to_string())));
        }

        let target_x = e_model.anchor(&Section(e1.clone()))?;
        let x = a.anchor(&c3)?;
        let dx = crate::diffgeo::VectorField::transversal(chart, x.transverse_components())?;
        let diff = &dx - &target_x;
        reports.push(zero_report(
            "quotient_anchor",
            vec![inputs[0].clone()],
            (!diff.is_zero()).then(|| diff.to_string()),
        ));

        let target_b = e_model.bracket(&Section(e1.clone()), &Section(e2.clone()))?;
        for (name, s, t) in [("quotient_bracket", &c1, &c2), ("quotient_bracket_shifted", &c3, &c4)] {
            let br = a.bracket0(s, t)?;
            let in_c = br.0[q..2 * q].iter().all(Polynomial::is_zero);
            reports.push(CheckReport::boolean(
                "A0",
                format!("{name}_in_C"),
                inputs.clone(),
                in_c,
                "bracket of C-sections leaves C",
            ));
            let diff = &Section(br.0[2 * q..].to_vec()) - &target_b;
            reports.push(zero_report(
                name,
                inputs.clone(),
                (!diff.is_zero()).then(|| e_model.format_section(&diff)),
            ));
        }
        Ok(reports)
    })?);
    Ok(out)
}
