use super::{ExtAlgebroid, ExtSection};
use crate::courant::{run_trials, trial_rng, CheckReport, CourantStructure, Section, SuiteConfig};
use crate::diffgeo::VectorField;
use crate::error::Result;
use crate::models::{big_tangent, big_tangent_bracket, BigTangentSection};
use crate::scalar::Scalar;

/// `Ψ((Y, α) ⊕ (V, β)) = (Y + φV) ⊕ (Σ α_a η^a + Σ β_i dx^i)`.
pub fn psi_map<S: Scalar>(a: &ExtAlgebroid<S>, s: &Section<S>) -> Result<BigTangentSection<S>> {
    let chart = CourantStructure::<S>::chart(a);
    let x = ExtSection::from_section(chart, s)?;
    let e = x.e_part();
    let field = &VectorField::leafwise(chart, &x.y)? + &a.rho(&e)?;
    let form = a.splitting().ann_q_form(&x.alpha)?.checked_add(&e.form(chart)?)?;
    BigTangentSection::new(field, form)
}

/// Compares `A0` with `TM ⊕ T*M` through `Ψ`: bracket, metric, anchor and
/// `∂`, on random mixed sections.
pub fn oracle_bigtangent_compare<S: Scalar>(a: &ExtAlgebroid<S>, cfg: &SuiteConfig) -> Result<Vec<CheckReport>> {
    let chart = CourantStructure::<S>::chart(a);
    let t = big_tangent::<S>(chart);
    run_trials(cfg.trials, |i| {
        let rng = &mut trial_rng(cfg.seed, "A0/oracle", i);
        let s1 = a.random_section(&cfg.bounds, rng);
        let s2 = a.random_section(&cfg.bounds, rng);
        let lambda = a.random_one_form(&cfg.bounds, rng);
        let inputs = vec![a.format_section(&s1), a.format_section(&s2)];
        let (p1, p2) = (psi_map(a, &s1)?, psi_map(a, &s2)?);
        let mut reports = Vec::new();

        let lhs = psi_map(a, &a.bracket0(&s1, &s2)?)?.to_section();
        let rhs = big_tangent_bracket(&p1, &p2)?.to_section();
        let diff = &lhs - &rhs;
        reports.push(CheckReport::new(
            "A0",
            "oracle_bracket",
            inputs.clone(),
            (!diff.is_zero()).then(|| t.format_section(&diff)),
        ));

        let g = &a.metric(&s1, &s2)? - &t.metric(&p1.to_section(), &p2.to_section())?;
        reports.push(CheckReport::new(
            "A0",
            "oracle_metric",
            inputs.clone(),
            (!g.is_zero()).then(|| g.to_string()),
        ));

        let x = &a.anchor(&s1)? - &p1.field;
        reports.push(CheckReport::new(
            "A0",
            "oracle_anchor",
            vec![inputs[0].clone()],
            (!x.is_zero()).then(|| x.to_string()),
        ));

        let d = psi_map(a, &a.partial0(&lambda)?)?;
        let ok = d.field.is_zero() && d.form == lambda;
        reports.push(CheckReport::boolean(
            "A0",
            "oracle_partial",
            vec![lambda.to_string()],
            ok,
            "Ψ(∂0 λ) differs from 0 ⊕ λ",
        ));
        Ok(reports)
    })
}
