use std::fmt;

use super::{partial_fn, partial_op, residual_of, CheckReport, CourantStructure, Section};
use crate::diffgeo::KForm;
use crate::error::{Error, Result};
use crate::ratpoly::Polynomial;
use crate::scalar::Scalar;

/// An argument to an axiom check.
#[derive(Clone, Debug)]
pub enum AxiomArg<S: Scalar> {
    Section(Section<S>),
    Function(Polynomial<S>),
    Form(KForm<S>),
}

impl<S: Scalar> AxiomArg<S> {
    fn describe(&self, structure: &dyn CourantStructure<S>) -> String {
        match self {
            AxiomArg::Section(s) => structure.format_section(s),
            AxiomArg::Function(f) => f.to_string(),
            AxiomArg::Form(w) => w.to_string(),
        }
    }

    fn kind(&self) -> &'static str {
        match self {
            AxiomArg::Section(_) => "section",
            AxiomArg::Function(_) => "function",
            AxiomArg::Form(_) => "1-form",
        }
    }
}

fn arity_error<S: Scalar>(n: u8, expected: &str, args: &[AxiomArg<S>]) -> Error {
    let got: Vec<&str> = args.iter().map(AxiomArg::kind).collect();
    Error::Argument(format!("axiom {n} takes ({expected}), got {got:?}"))
}

fn section_residual<S: Scalar>(structure: &dyn CourantStructure<S>, s: &Section<S>) -> Option<String> {
    (!s.is_zero()).then(|| structure.format_section(s))
}

fn third<S: Scalar>() -> S {
    S::one() / S::from_integer(3)
}

/// `Σ_cyc g([e1,e2], e3)`.
fn cyclic_pairing<S: Scalar>(structure: &dyn CourantStructure<S>, e: [&Section<S>; 3]) -> Result<Polynomial<S>> {
    let mut total = Polynomial::zero(structure.chart());
    for r in 0..3 {
        let (a, b, c) = (e[r], e[(r + 1) % 3], e[(r + 2) % 3]);
        total += &structure.metric(&structure.bracket(a, b)?, c)?;
    }
    Ok(total)
}

/// `Σ_cyc [[e1,e2],e3] - ⅓ ∂ Σ_cyc g([e1,e2],e3)`; zero iff axiom 3 holds on
/// the triple.
pub fn jacobiator<S: Scalar>(
    structure: &dyn CourantStructure<S>,
    e1: &Section<S>,
    e2: &Section<S>,
    e3: &Section<S>,
) -> Result<Section<S>> {
    let e = [e1, e2, e3];
    let mut lhs = Section::zero(structure.chart(), structure.frame_size());
    for r in 0..3 {
        let (a, b, c) = (e[r], e[(r + 1) % 3], e[(r + 2) % 3]);
        lhs = &lhs + &structure.bracket(&structure.bracket(a, b)?, c)?;
    }
    let rhs = partial_fn(structure, &cyclic_pairing(structure, e)?)?.scale(&third());
    Ok(&lhs - &rhs)
}

/// Checks axiom `n` on the given arguments:
///
/// 1. `(e1, e2)`: `♯[e1,e2] = [♯e1, ♯e2]`
/// 2. `(f)` or `(λ)`: `♯∂f = 0`, resp. `♯∂λ = 0`
/// 3. `(e1, e2, e3)`: the jacobiator vanishes
/// 4. `(e1, e2, f)`: `[e1, f e2] = f[e1,e2] + (♯e1 f) e2 - g(e1,e2) ∂f`
/// 5. `(e, e1, e2)`: `♯e g(e1,e2) = g([e,e1] + ∂g(e,e1), e2) + g(e1, [e,e2] + ∂g(e,e2))`
pub fn check_axiom<S: Scalar>(structure: &dyn CourantStructure<S>, n: u8, args: &[AxiomArg<S>]) -> Result<CheckReport> {
    use AxiomArg::{Form, Function, Section as Sec};
    let inputs: Vec<String> = args.iter().map(|a| a.describe(structure)).collect();
    let name = structure.name();
    let report = |check: &str, residual| Ok(CheckReport::new(name, check, inputs.clone(), residual));
    match (n, args) {
        (1, [Sec(a), Sec(b)]) => {
            let lhs = structure.anchor(&structure.bracket(a, b)?)?;
            let rhs = structure.anchor(a)?.lie_bracket(&structure.anchor(b)?)?;
            let diff = &lhs - &rhs;
            report("axiom1", residual_of(&diff, diff.is_zero()))
        }
        (2, [Function(f)]) => {
            let v = structure.anchor(&partial_fn(structure, f)?)?;
            report("axiom2_function", residual_of(&v, v.is_zero()))
        }
        (2, [Form(lambda)]) => {
            let v = structure.anchor(&partial_op(structure, lambda)?)?;
            report("axiom2_form", residual_of(&v, v.is_zero()))
        }
        (3, [Sec(a), Sec(b), Sec(c)]) => {
            let j = jacobiator(structure, a, b, c)?;
            report("axiom3", section_residual(structure, &j))
        }
        (4, [Sec(a), Sec(b), Function(f)]) => {
            let lhs = structure.bracket(a, &b.mul_fn(f))?;
            let ab = structure.bracket(a, b)?;
            let af = structure.anchor(a)?.apply(f)?;
            let g = structure.metric(a, b)?;
            let rhs = &(&ab.mul_fn(f) + &b.mul_fn(&af)) - &partial_fn(structure, f)?.mul_fn(&g);
            report("axiom4", section_residual(structure, &(&lhs - &rhs)))
        }
        (5, [Sec(e), Sec(a), Sec(b)]) => {
            let lhs = structure.anchor(e)?.apply(&structure.metric(a, b)?)?;
            let first = &structure.bracket(e, a)? + &partial_fn(structure, &structure.metric(e, a)?)?;
            let second = &structure.bracket(e, b)? + &partial_fn(structure, &structure.metric(e, b)?)?;
            let rhs = &structure.metric(&first, b)? + &structure.metric(a, &second)?;
            let diff = &lhs - &rhs;
            report("axiom5", residual_of(&diff, diff.is_zero()))
        }
        (1, _) => Err(arity_error(1, "section, section", args)),
        (2, _) => Err(arity_error(2, "function | 1-form", args)),
        (3, _) | (5, _) => Err(arity_error(n, "section, section, section", args)),
        (4, _) => Err(arity_error(4, "section, section, function", args)),
        _ => Err(Error::Argument(format!("there is no axiom {n}; expected 1..=5"))),
    }
}

/// Identities derived from the axioms.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Identity {
    /// `[e, ∂f] = ½ ∂(♯e f)`, arguments `(e, f)`.
    PartialFunction,
    /// `[e, ∂α] = ∂(L_{♯e} α - ½ d(α(♯e)))`, arguments `(e, α)`.
    PartialForm,
    /// `g([e1,e2],e3) + ½♯e2 g(e1,e3) - ½♯e1 g(e2,e3) = ⅓ Σ_cyc g([e1,e2],e3)`,
    /// arguments `(e1, e2, e3)`.
    CyclicPairing,
}

impl Identity {
    pub const ALL: [Identity; 3] = [
        Identity::PartialFunction,
        Identity::PartialForm,
        Identity::CyclicPairing,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Identity::PartialFunction => "bracket_with_partial_function",
            Identity::PartialForm => "bracket_with_partial_form",
            Identity::CyclicPairing => "cyclic_pairing",
        }
    }
}

impl fmt::Display for Identity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

pub fn check_identity<S: Scalar>(
    structure: &dyn CourantStructure<S>,
    which: Identity,
    args: &[AxiomArg<S>],
) -> Result<CheckReport> {
    use AxiomArg::{Form, Function, Section as Sec};
    let inputs: Vec<String> = args.iter().map(|a| a.describe(structure)).collect();
    let name = structure.name();
    let half = S::half();
    let residual = match (which, args) {
        (Identity::PartialFunction, [Sec(e), Function(f)]) => {
            let lhs = structure.bracket(e, &partial_fn(structure, f)?)?;
            let rhs = partial_fn(structure, &structure.anchor(e)?.apply(f)?)?.scale(&half);
            section_residual(structure, &(&lhs - &rhs))
        }
        (Identity::PartialForm, [Sec(e), Form(alpha)]) => {
            let x = structure.anchor(e)?;
            let lhs = structure.bracket(e, &partial_op(structure, alpha)?)?;
            let inner = alpha.interior(&x)?.ext_d();
            let lambda = alpha
                .lie_derivative(&x)?
                .checked_add(&inner.scale(&Polynomial::constant(structure.chart(), -half.clone())))?;
            let rhs = partial_op(structure, &lambda)?;
            section_residual(structure, &(&lhs - &rhs))
        }
        (Identity::CyclicPairing, [Sec(a), Sec(b), Sec(c)]) => {
            let mut lhs = structure.metric(&structure.bracket(a, b)?, c)?;
            lhs += &structure.anchor(b)?.apply(&structure.metric(a, c)?)?.scale(&half);
            lhs -= &structure.anchor(a)?.apply(&structure.metric(b, c)?)?.scale(&half);
            let rhs = cyclic_pairing(structure, [a, b, c])?.scale(&third());
            let diff = &lhs - &rhs;
            residual_of(&diff, diff.is_zero())
        }
        (Identity::PartialFunction, _) => return Err(Error::Argument("expects (section, function)".into())),
        (Identity::PartialForm, _) => return Err(Error::Argument("expects (section, 1-form)".into())),
        (Identity::CyclicPairing, _) => return Err(Error::Argument("expects three sections".into())),
    };
    Ok(CheckReport::new(name, which.name(), inputs, residual))
}

/// Cross-check of a model's closed formula for `∂λ` against the Gram solve.
/// `None` if the model has no closed formula.
pub fn check_partial_closed_form<S: Scalar>(
    structure: &dyn CourantStructure<S>,
    lambda: &KForm<S>,
) -> Result<Option<CheckReport>> {
    let Some(closed) = structure.partial_closed_form(lambda) else {
        return Ok(None);
    };
    let diff = &closed? - &partial_op(structure, lambda)?;
    Ok(Some(CheckReport::new(
        structure.name(),
        "partial_closed_form",
        vec![lambda.to_string()],
        section_residual(structure, &diff),
    )))
}

/// Which function-multiplication lemma to test.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Stability {
    /// Axiom 5 on `(f1 e, f2 e1, f3 e2)`; three multipliers.
    Axiom5,
    /// Axiom 3 on `(e1, e2, f e3)`, with the cyclic-pairing identity as
    /// prerequisite; one multiplier.
    Axiom3,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StabilityReport {
    pub base: CheckReport,
    pub prerequisite: Option<CheckReport>,
    pub multiplied: CheckReport,
}

impl StabilityReport {
    /// The lemma holds on this instance: whenever the base check and the
    /// prerequisite pass, the multiplied check passes too.
    pub fn lemma_holds(&self) -> bool {
        let premises = self.base.pass && self.prerequisite.as_ref().is_none_or(|r| r.pass);
        !premises || self.multiplied.pass
    }

    pub fn all_pass(&self) -> bool {
        self.base.pass && self.prerequisite.as_ref().is_none_or(|r| r.pass) && self.multiplied.pass
    }

    pub fn into_reports(self) -> Vec<CheckReport> {
        let mut out = vec![self.base];
        out.extend(self.prerequisite);
        out.push(self.multiplied);
        out
    }
}

pub fn check_function_stability<S: Scalar>(
    structure: &dyn CourantStructure<S>,
    which: Stability,
    base: [&Section<S>; 3],
    multipliers: &[Polynomial<S>],
) -> Result<StabilityReport> {
    let sec = |s: &Section<S>| AxiomArg::Section(s.clone());
    let base_args: Vec<AxiomArg<S>> = base.iter().map(|s| sec(s)).collect();
    match (which, multipliers) {
        (Stability::Axiom5, [f1, f2, f3]) => {
            let base_report = check_axiom(structure, 5, &base_args)?;
            let multiplied = [base[0].mul_fn(f1), base[1].mul_fn(f2), base[2].mul_fn(f3)];
            let mut report = check_axiom(structure, 5, &multiplied.iter().map(sec).collect::<Vec<_>>())?;
            report.check = "axiom5_multiplied".into();
            Ok(StabilityReport {
                base: base_report,
                prerequisite: None,
                multiplied: report,
            })
        }
        (Stability::Axiom3, [f]) => {
            let base_report = check_axiom(structure, 3, &base_args)?;
            let prerequisite = check_identity(structure, Identity::CyclicPairing, &base_args)?;
            let multiplied = [base[0].clone(), base[1].clone(), base[2].mul_fn(f)];
            let mut report = check_axiom(structure, 3, &multiplied.iter().map(sec).collect::<Vec<_>>())?;
            report.check = "axiom3_multiplied".into();
            Ok(StabilityReport {
                base: base_report,
                prerequisite: Some(prerequisite),
                multiplied: report,
            })
        }
        (Stability::Axiom5, _) => Err(Error::Argument("axiom 5 stability takes three multipliers".into())),
        (Stability::Axiom3, _) => Err(Error::Argument("axiom 3 stability takes one multiplier".into())),
    }
}
