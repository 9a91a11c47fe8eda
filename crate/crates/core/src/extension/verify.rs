use rand::RngCore;

use super::ExtAlgebroid;
use crate::courant::{
    axiom_suite, check_axiom, identity_suite, partial_fn, partial_op, run_trials, stability_suite, trial_rng, AxiomArg,
    CheckReport, CourantStructure, Section, SuiteConfig,
};
use crate::diffgeo::{KForm, VectorField};
use crate::error::Result;
use crate::models::{ESection, QSection};
use crate::ratpoly::{PolyBounds, Polynomial};
use crate::scalar::Scalar;

/// Shape of a random argument in the case-organized suites.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SectionKind {
    /// Foliated `E`-section `(0, 0, e)`.
    E,
    /// Leafwise section `(Y, α, 0)`.
    Q,
    /// `(Y, 0, 0)`.
    Y,
    /// `(0, α, 0)`.
    Alpha,
    /// `∂0 λ` for a random 1-form `λ`.
    Partial,
    /// All coefficients random.
    Mixed,
}

impl SectionKind {
    fn label(self) -> &'static str {
        match self {
            SectionKind::E => "e",
            SectionKind::Q => "q",
            SectionKind::Y => "Y",
            SectionKind::Alpha => "a",
            SectionKind::Partial => "da",
            SectionKind::Mixed => "m",
        }
    }
}

impl<S: Scalar> ExtAlgebroid<S> {
    pub fn random_of_kind(&self, kind: SectionKind, bounds: &PolyBounds, rng: &mut dyn RngCore) -> Result<Section<S>> {
        let chart = CourantStructure::<S>::chart(self);
        let (p, q) = (chart.p(), chart.q());
        let mut draw = |n: usize, foliated: bool| -> Vec<Polynomial<S>> {
            (0..n)
                .map(|_| Polynomial::random(chart, bounds, foliated, rng))
                .collect()
        };
        let zero = |n: usize| vec![Polynomial::zero(chart); n];
        let (y, alpha, e) = match kind {
            SectionKind::E => (zero(q), zero(q), draw(2 * p, true)),
            SectionKind::Q => (draw(q, false), draw(q, false), zero(2 * p)),
            SectionKind::Y => (draw(q, false), zero(q), zero(2 * p)),
            SectionKind::Alpha => (zero(q), draw(q, false), zero(2 * p)),
            SectionKind::Mixed => (draw(q, false), draw(q, false), draw(2 * p, false)),
            SectionKind::Partial => {
                let lambda = self.random_one_form(bounds, rng);
                return self.partial0(&lambda);
            }
        };
        Ok(Section(y.into_iter().chain(alpha).chain(e).collect()))
    }
}

const AXIOM5_TRIPLES: [[SectionKind; 3]; 6] = {
    use SectionKind::{E, Q};
    [[E, E, E], [Q, E, E], [E, Q, E], [Q, Q, E], [E, Q, Q], [Q, Q, Q]]
};

const AXIOM3_CASES: [[SectionKind; 3]; 13] = {
    use SectionKind::{Alpha, Partial, E, Q, Y};
    [
        [E, E, E],
        [E, E, Q],
        [E, Q, Q],
        [Q, Q, Q],
        [E, E, Y],
        [E, E, Alpha],
        [E, Y, Y],
        [E, Alpha, Alpha],
        [E, Y, Alpha],
        [Y, Y, Y],
        [Y, Y, Alpha],
        [Y, Partial, Partial],
        [Partial, Partial, Partial],
    ]
};

fn case_name(axiom: u8, kinds: &[SectionKind; 3]) -> String {
    let labels: Vec<&str> = kinds.iter().map(|k| k.label()).collect();
    format!("axiom{axiom}({})", labels.join(","))
}

fn renamed(mut r: CheckReport, name: String) -> CheckReport {
    r.check = name;
    r
}

/// Axiom 5 on each generator triple and axiom 3 on each generator case and
/// decomposed sub-case, plus axioms 1-5 on fully mixed sections, per trial.
pub fn theorem_cases<S: Scalar>(a: &ExtAlgebroid<S>, cfg: &SuiteConfig) -> Result<Vec<CheckReport>> {
    let mut out = axiom_suite(a, cfg)?;
    let tag = "A0/cases";
    out.extend(run_trials(cfg.trials, |i| {
        let rng = &mut trial_rng(cfg.seed, tag, i);
        let mut reports = Vec::new();
        for (axiom, cases) in [(5u8, &AXIOM5_TRIPLES[..]), (3u8, &AXIOM3_CASES[..])] {
            for kinds in cases {
                let args = kinds
                    .iter()
                    .map(|&k| a.random_of_kind(k, &cfg.bounds, rng).map(AxiomArg::Section))
                    .collect::<Result<Vec<_>>>()?;
                reports.push(renamed(check_axiom(a, axiom, &args)?, case_name(axiom, kinds)));
            }
        }
        Ok(reports)
    })?);
    Ok(out)
}

fn cyclic_parts<S: Scalar>(a: &ExtAlgebroid<S>, e: [&Section<S>; 3]) -> Result<(Section<S>, Polynomial<S>)> {
    let chart = CourantStructure::<S>::chart(a);
    let mut lhs = Section::zero(chart, a.frame_size());
    let mut pairing = Polynomial::zero(chart);
    for r in 0..3 {
        let (x, y, z) = (e[r], e[(r + 1) % 3], e[(r + 2) % 3]);
        let xy = a.bracket0(x, y)?;
        lhs = &lhs + &a.bracket0(&xy, z)?;
        pairing += &a.metric(&xy, z)?;
    }
    Ok((lhs, pairing))
}

/// The common values of both sides of axiom 3 in three decomposed cases:
/// `(e1, e2, 0⊕α)`: `⅓Σ g = ½ α([ρe1, ρe2])`;
/// `(e, Y⊕0, 0⊕α)`: `⅓Σ g = ½ (α([ρe, Y]) - ½ ρe(α(Y)))`;
/// `(Y1⊕0, Y2⊕0, 0⊕α)`: `⅓Σ g = ¼ (α([Y1, Y2]) - dα(Y1, Y2))`.
/// Each side is compared with `∂0` of the value independently.
pub fn axiom3_case_values<S: Scalar>(a: &ExtAlgebroid<S>, cfg: &SuiteConfig) -> Result<Vec<CheckReport>> {
    let chart = CourantStructure::<S>::chart(a);
    let s = a.splitting();
    let third = S::one() / S::from_integer(3);
    let quarter = S::half() * S::half();
    run_trials(cfg.trials, |i| {
        let rng = &mut trial_rng(cfg.seed, "A0/case_values", i);
        let b = &cfg.bounds;
        let mut reports = Vec::new();
        for case in 0..3 {
            let alpha_sec = a.random_of_kind(SectionKind::Alpha, b, rng)?;
            let alpha = QSection::from_section(&Section(alpha_sec.0[..2 * chart.q()].to_vec())).form(s)?;
            let eval = |x: &VectorField<S>| -> Result<Polynomial<S>> { alpha.interior(x)?.as_function() };
            let (args, value, name) = match case {
                0 => {
                    let e1 = a.random_of_kind(SectionKind::E, b, rng)?;
                    let e2 = a.random_of_kind(SectionKind::E, b, rng)?;
                    let (r1, r2) = (a.anchor(&e1)?, a.anchor(&e2)?);
                    let v = eval(&r1.lie_bracket(&r2)?)?.scale(&S::half());
                    ([e1, e2, alpha_sec], v, "case_value(e,e,a)")
                }
                1 => {
                    let e = a.random_of_kind(SectionKind::E, b, rng)?;
                    let y = a.random_of_kind(SectionKind::Y, b, rng)?;
                    let (re, yv) = (a.anchor(&e)?, a.anchor(&y)?);
                    let inner = re.apply(&eval(&yv)?)?.scale(&S::half());
                    let v = (&eval(&re.lie_bracket(&yv)?)? - &inner).scale(&S::half());
                    ([e, y, alpha_sec], v, "case_value(e,Y,a)")
                }
                _ => {
                    let y1 = a.random_of_kind(SectionKind::Y, b, rng)?;
                    let y2 = a.random_of_kind(SectionKind::Y, b, rng)?;
                    let (v1, v2) = (a.anchor(&y1)?, a.anchor(&y2)?);
                    let d_alpha = alpha.ext_d().evaluate(&[v1.clone(), v2.clone()])?;
                    let v = (&eval(&v1.lie_bracket(&v2)?)? - &d_alpha).scale(&quarter);
                    ([y1, y2, alpha_sec], v, "case_value(Y,Y,a)")
                }
            };
            let (lhs, pairing) = cyclic_parts(a, [&args[0], &args[1], &args[2]])?;
            let inputs: Vec<String> = args.iter().map(|x| a.format_section(x)).collect();
            let target = a.partial0_fn(&value)?;
            let rhs = partial_fn(a, &pairing)?.scale(&third);
            let value_diff = &pairing.scale(&third) - &value;
            reports.push(CheckReport::new(
                "A0",
                format!("{name}:pairing"),
                inputs.clone(),
                (!value_diff.is_zero()).then(|| value_diff.to_string()),
            ));
            for (side, got) in [("lhs", &lhs), ("rhs", &rhs)] {
                let diff = got - &target;
                reports.push(CheckReport::new(
                    "A0",
                    format!("{name}:{side}"),
                    inputs.clone(),
                    (!diff.is_zero()).then(|| a.format_section(&diff)),
                ));
            }
        }
        Ok(reports)
    })
}

/// Image of `∂0`: `♯0 ∂0 = 0`, isotropy, vanishing bracket, agreement of
/// the two expressions of `∂0` and of `∂0` with the Gram solve, and
/// `∂0 f = (0, d''f) ⊕ ∂_E(d'f)`.
pub fn partial0_image_suite<S: Scalar>(a: &ExtAlgebroid<S>, cfg: &SuiteConfig) -> Result<Vec<CheckReport>> {
    let s = a.splitting();
    run_trials(cfg.trials, |i| {
        let rng = &mut trial_rng(cfg.seed, "A0/partial0", i);
        let b = &cfg.bounds;
        let (l1, l2) = (a.random_one_form(b, rng), a.random_one_form(b, rng));
        let f = a.random_function(b, rng);
        let (u1, u2) = (a.partial0(&l1)?, a.partial0(&l2)?);
        let inputs = vec![l1.to_string(), l2.to_string()];
        let mut reports = Vec::new();
        let (x1, x2) = (a.anchor(&u1)?, a.anchor(&u2)?);
        reports.push(CheckReport::new(
            "A0",
            "partial0_anchor",
            inputs.clone(),
            (!(x1.is_zero() && x2.is_zero())).then(|| format!("{x1}; {x2}")),
        ));
        let g = a.metric(&u1, &u2)?;
        reports.push(CheckReport::new(
            "A0",
            "partial0_isotropy",
            inputs.clone(),
            (!g.is_zero()).then(|| g.to_string()),
        ));
        let br = a.bracket0(&u1, &u2)?;
        reports.push(CheckReport::new(
            "A0",
            "partial0_bracket",
            inputs.clone(),
            (!br.is_zero()).then(|| a.format_section(&br)),
        ));
        let via_sharp = &a.partial0_via_sharp(&l1)? - &u1;
        reports.push(CheckReport::new(
            "A0",
            "partial0_two_forms",
            vec![l1.to_string()],
            (!via_sharp.is_zero()).then(|| a.format_section(&via_sharp)),
        ));
        let via_gram = &partial_op(a, &l1)? - &u1;
        reports.push(CheckReport::new(
            "A0",
            "partial0_gram",
            vec![l1.to_string()],
            (!via_gram.is_zero()).then(|| a.format_section(&via_gram)),
        ));
        let bd = s.d_bigraded(&KForm::function(f.clone()))?;
        let q = QSection {
            y: vec![Polynomial::zero(f.chart()); f.chart().q()],
            alpha: s.ann_q_components(&bd.d_second)?,
        };
        let e = partial_op(a.e_model(), &s.ann_f_form(&s.ann_f_components(&bd.d_prime)?)?)?;
        let expected = &super::ExtSection::from_parts(&q, &e.0).to_section() - &a.partial0_fn(&f)?;
        reports.push(CheckReport::new(
            "A0",
            "partial0_function",
            vec![f.to_string()],
            (!expected.is_zero()).then(|| a.format_section(&expected)),
        ));
        Ok(reports)
    })
}

/// Generator bracket of `f ε_k` against a random partner, both routes.
pub fn consistency_suite<S: Scalar>(a: &ExtAlgebroid<S>, cfg: &SuiteConfig) -> Result<Vec<CheckReport>> {
    let chart = CourantStructure::<S>::chart(a);
    run_trials(cfg.trials, |i| {
        let rng = &mut trial_rng(cfg.seed, "A0/consistency", i);
        let k = (rng.next_u32() as usize) % (2 * chart.p());
        let f = Polynomial::random(chart, &cfg.bounds, true, rng);
        let kind = [SectionKind::Q, SectionKind::E, SectionKind::Mixed][i % 3];
        let partner = a.random_of_kind(kind, &cfg.bounds, rng)?;
        Ok(vec![a.consistency_foliated_multiplier(k, &f, &partner)?])
    })
}

/// `ψ([ρe1, ρe2] - ρ[e1,e2]_E) = 0` on random foliated pairs.
pub fn well_definedness_suite<S: Scalar>(a: &ExtAlgebroid<S>, cfg: &SuiteConfig) -> Result<Vec<CheckReport>> {
    let chart = CourantStructure::<S>::chart(a);
    run_trials(cfg.trials, |i| {
        let rng = &mut trial_rng(cfg.seed, "A0/well_defined", i);
        let draw = |rng: &mut dyn RngCore| {
            ESection::from_coeffs(
                &(0..2 * chart.p())
                    .map(|_| Polynomial::random(chart, &cfg.bounds, true, rng))
                    .collect::<Vec<_>>(),
            )
        };
        let (e1, e2) = (draw(rng), draw(rng));
        let psi = a.correction_transverse_part(&e1, &e2)?;
        let inputs = vec![
            a.e_model().format_section(&Section(e1.coeffs())),
            a.e_model().format_section(&Section(e2.coeffs())),
        ];
        let nonzero = psi.iter().any(|c| !c.is_zero());
        Ok(vec![CheckReport::new(
            "A0",
            "correction_transverse_part",
            inputs,
            nonzero.then(|| psi.iter().map(|c| c.to_string()).collect::<Vec<_>>().join(", ")),
        )])
    })
}

/// Everything about `A0` as a Courant algebroid: case-organized axioms,
/// derived identities, stability lemmas, the image of `∂0`, the axiom-3
/// case values, generator consistency and well-definedness.
pub fn verify_extension<S: Scalar>(a: &ExtAlgebroid<S>, cfg: &SuiteConfig) -> Result<Vec<CheckReport>> {
    let mut out = theorem_cases(a, cfg)?;
    out.extend(identity_suite(a, cfg)?);
    for r in stability_suite(a, cfg)? {
        out.extend(r.into_reports());
    }
    out.extend(partial0_image_suite(a, cfg)?);
    out.extend(axiom3_case_values(a, cfg)?);
    out.extend(consistency_suite(a, cfg)?);
    out.extend(well_definedness_suite(a, cfg)?);
    Ok(out)
}
