//! Seeded randomized suites. Each trial draws its inputs from its own
//! generator, derived from the suite seed, a tag and the trial index, so
//! results do not depend on scheduling and trials can run in parallel.

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::checks::{check_axiom, check_function_stability, check_identity, check_partial_closed_form};
use super::{
    gram, linalg, partial_fn, partial_op, AxiomArg, CheckReport, CourantStructure, Identity, Section, Stability,
    StabilityReport,
};
use crate::diffgeo::{KForm, VectorField};
use crate::error::Result;
use crate::ratpoly::{Chart, PolyBounds, Polynomial};
use crate::scalar::Scalar;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SuiteConfig {
    pub trials: usize,
    pub seed: u64,
    pub bounds: PolyBounds,
}

fn splitmix(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

fn fnv1a(tag: &str) -> u64 {
    tag.bytes().fold(0xcbf2_9ce4_8422_2325, |h, b| {
        (h ^ u64::from(b)).wrapping_mul(0x0100_0000_01b3)
    })
}

/// Seed for trial `idx` of the suite tagged `tag`.
pub fn trial_seed(seed: u64, tag: &str, idx: usize) -> u64 {
    splitmix(splitmix(seed ^ fnv1a(tag)) ^ idx as u64)
}

pub fn trial_rng(seed: u64, tag: &str, idx: usize) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(trial_seed(seed, tag, idx))
}

/// Runs `trial` for every index in parallel, keeping index order.
pub fn run_trials<T, F>(trials: usize, trial: F) -> Result<Vec<T>>
where
    T: Send,
    F: Fn(usize) -> Result<Vec<T>> + Sync + Send,
{
    let per: Vec<Vec<T>> = (0..trials).into_par_iter().map(trial).collect::<Result<_>>()?;
    Ok(per.into_iter().flatten().collect())
}

fn tag(structure: &dyn CourantStructure<impl Scalar>, suite: &str) -> String {
    format!("{}/{suite}", structure.name())
}

/// Axioms 1-5 (axiom 2 both on a function and on a 1-form) per trial.
pub fn axiom_suite<S: Scalar>(structure: &dyn CourantStructure<S>, cfg: &SuiteConfig) -> Result<Vec<CheckReport>> {
    let tag = tag(structure, "axioms");
    run_trials(cfg.trials, |i| {
        let rng = &mut trial_rng(cfg.seed, &tag, i);
        let b = &cfg.bounds;
        let e: Vec<Section<S>> = (0..3).map(|_| structure.random_section(b, rng)).collect();
        let f = structure.random_function(b, rng);
        let lambda = structure.random_one_form(b, rng);
        let s = |k: usize| AxiomArg::Section(e[k].clone());
        Ok(vec![
            check_axiom(structure, 1, &[s(0), s(1)])?,
            check_axiom(structure, 2, &[AxiomArg::Function(f.clone())])?,
            check_axiom(structure, 2, &[AxiomArg::Form(lambda)])?,
            check_axiom(structure, 3, &[s(0), s(1), s(2)])?,
            check_axiom(structure, 4, &[s(0), s(1), AxiomArg::Function(f)])?,
            check_axiom(structure, 5, &[s(0), s(1), s(2)])?,
        ])
    })
}

/// The three derived identities per trial, plus agreement of the form
/// identity at `α = df` with the function identity.
pub fn identity_suite<S: Scalar>(structure: &dyn CourantStructure<S>, cfg: &SuiteConfig) -> Result<Vec<CheckReport>> {
    let tag = tag(structure, "identities");
    run_trials(cfg.trials, |i| {
        let rng = &mut trial_rng(cfg.seed, &tag, i);
        let b = &cfg.bounds;
        let e: Vec<Section<S>> = (0..3).map(|_| structure.random_section(b, rng)).collect();
        let f = structure.random_function(b, rng);
        let alpha = structure.random_one_form(b, rng);
        let s = |k: usize| AxiomArg::Section(e[k].clone());
        let by_function = check_identity(
            structure,
            Identity::PartialFunction,
            &[s(0), AxiomArg::Function(f.clone())],
        )?;
        let df = KForm::function(f).ext_d();
        let by_form = check_identity(structure, Identity::PartialForm, &[s(0), AxiomArg::Form(df)])?;
        let agree = by_function.pass == by_form.pass && by_function.residual == by_form.residual;
        let meta = CheckReport::boolean(
            structure.name(),
            "partial_form_matches_function",
            by_function.inputs.clone(),
            agree,
            "the two identities disagree at α = df",
        );
        Ok(vec![
            by_function,
            check_identity(structure, Identity::PartialForm, &[s(0), AxiomArg::Form(alpha)])?,
            check_identity(structure, Identity::CyclicPairing, &[s(0), s(1), s(2)])?,
            by_form,
            meta,
        ])
    })
}

/// Both function-multiplication lemmas per trial.
pub fn stability_suite<S: Scalar>(
    structure: &dyn CourantStructure<S>,
    cfg: &SuiteConfig,
) -> Result<Vec<StabilityReport>> {
    let tag = tag(structure, "stability");
    run_trials(cfg.trials, |i| {
        let rng = &mut trial_rng(cfg.seed, &tag, i);
        let b = &cfg.bounds;
        let e: Vec<Section<S>> = (0..3).map(|_| structure.random_section(b, rng)).collect();
        let fs: Vec<Polynomial<S>> = (0..3).map(|_| structure.random_function(b, rng)).collect();
        let triple = [&e[0], &e[1], &e[2]];
        Ok(vec![
            check_function_stability(structure, Stability::Axiom5, triple, &fs)?,
            check_function_stability(structure, Stability::Axiom3, triple, &fs[..1])?,
        ])
    })
}

/// `♯∂ = 0`, isotropy of the image of `∂` and vanishing of the bracket on it,
/// for random functions and random 1-forms.
pub fn partial_image_suite<S: Scalar>(
    structure: &dyn CourantStructure<S>,
    cfg: &SuiteConfig,
) -> Result<Vec<CheckReport>> {
    let tag = tag(structure, "partial_image");
    let name = structure.name();
    run_trials(cfg.trials, |i| {
        let rng = &mut trial_rng(cfg.seed, &tag, i);
        let b = &cfg.bounds;
        let (l1, l2) = (structure.random_one_form(b, rng), structure.random_one_form(b, rng));
        let (f, g) = (structure.random_function(b, rng), structure.random_function(b, rng));
        let (u1, u2) = (partial_op(structure, &l1)?, partial_op(structure, &l2)?);
        let (v1, v2) = (partial_fn(structure, &f)?, partial_fn(structure, &g)?);
        let mut out = Vec::new();
        for (inputs, a, c) in [
            (vec![l1.to_string(), l2.to_string()], &u1, &u2),
            (vec![f.to_string(), g.to_string()], &v1, &v2),
        ] {
            let (x1, x2) = (structure.anchor(a)?, structure.anchor(c)?);
            out.push(CheckReport::new(
                name,
                "partial_anchor",
                inputs.clone(),
                (!(x1.is_zero() && x2.is_zero())).then(|| format!("{x1}; {x2}")),
            ));
            let pairing = structure.metric(a, c)?;
            out.push(CheckReport::new(
                name,
                "partial_isotropy",
                inputs.clone(),
                (!pairing.is_zero()).then(|| pairing.to_string()),
            ));
            let bracket = structure.bracket(a, c)?;
            out.push(CheckReport::new(
                name,
                "partial_bracket",
                inputs,
                (!bracket.is_zero()).then(|| structure.format_section(&bracket)),
            ));
        }
        Ok(out)
    })
}

/// Structural invariants: metric symmetry, bracket skew-symmetry, Gram
/// nondegeneracy, frame independence of `∂` and agreement with the model's
/// closed formula for `∂`.
pub fn structure_suite<S: Scalar>(structure: &dyn CourantStructure<S>, cfg: &SuiteConfig) -> Result<Vec<CheckReport>> {
    let tag = tag(structure, "structure");
    let name = structure.name();
    let n = structure.frame_size();
    let mut out = vec![CheckReport::boolean(
        name,
        "gram_nondegenerate",
        vec![],
        linalg::rank(&gram(structure), n) == Ok(n),
        "Gram matrix is singular",
    )];
    out.extend(run_trials(cfg.trials, |i| {
        let rng = &mut trial_rng(cfg.seed, &tag, i);
        let b = &cfg.bounds;
        let (a, c) = (structure.random_section(b, rng), structure.random_section(b, rng));
        let inputs = vec![structure.format_section(&a), structure.format_section(&c)];
        let lambda = structure.random_one_form(b, rng);

        let sym = &structure.metric(&a, &c)? - &structure.metric(&c, &a)?;
        let skew = &structure.bracket(&a, &c)? + &structure.bracket(&c, &a)?;

        let mut perm: Vec<usize> = (0..n).collect();
        perm.shuffle(rng);
        let permuted = PermutedFrame::new(structure, perm);
        let via_perm = permuted.to_inner(&partial_op(&permuted, &lambda)?);
        let moved = &via_perm - &partial_op(structure, &lambda)?;

        let mut reports = vec![
            CheckReport::new(
                name,
                "metric_symmetric",
                inputs.clone(),
                (!sym.is_zero()).then(|| sym.to_string()),
            ),
            CheckReport::new(
                name,
                "bracket_skew",
                inputs,
                (!skew.is_zero()).then(|| structure.format_section(&skew)),
            ),
            CheckReport::new(
                name,
                "partial_frame_independent",
                vec![lambda.to_string()],
                (!moved.is_zero()).then(|| structure.format_section(&moved)),
            ),
        ];
        if let Some(r) = check_partial_closed_form(structure, &lambda)? {
            reports.push(r);
        }
        Ok(reports)
    })?);
    Ok(out)
}

/// The same structure presented in a reordered frame: element `k` of the new
/// frame is element `perm[k]` of the original one.
pub struct PermutedFrame<'a, S: Scalar> {
    inner: &'a dyn CourantStructure<S>,
    perm: Vec<usize>,
}

impl<'a, S: Scalar> PermutedFrame<'a, S> {
    pub fn new(inner: &'a dyn CourantStructure<S>, perm: Vec<usize>) -> Self {
        let mut sorted = perm.clone();
        sorted.sort_unstable();
        assert!(
            sorted == (0..inner.frame_size()).collect::<Vec<_>>(),
            "not a permutation of the frame"
        );
        PermutedFrame { inner, perm }
    }

    pub fn to_inner(&self, s: &Section<S>) -> Section<S> {
        let mut out = Section::zero(self.inner.chart(), s.len());
        for (k, &j) in self.perm.iter().enumerate() {
            out.0[j] = s.0[k].clone();
        }
        out
    }

    pub fn from_inner(&self, s: &Section<S>) -> Section<S> {
        Section(self.perm.iter().map(|&j| s.0[j].clone()).collect())
    }
}

impl<S: Scalar> CourantStructure<S> for PermutedFrame<'_, S> {
    fn name(&self) -> &str {
        self.inner.name()
    }

    fn chart(&self) -> Chart {
        self.inner.chart()
    }

    fn frame_size(&self) -> usize {
        self.perm.len()
    }

    fn section_keys(&self) -> Vec<(&'static str, usize)> {
        vec![("frame", self.perm.len())]
    }

    fn frame_metric(&self, a: usize, b: usize) -> Polynomial<S> {
        self.inner.frame_metric(self.perm[a], self.perm[b])
    }

    fn frame_anchor(&self, a: usize) -> VectorField<S> {
        self.inner.frame_anchor(self.perm[a])
    }

    fn bracket(&self, a: &Section<S>, b: &Section<S>) -> Result<Section<S>> {
        let inner = self.inner.bracket(&self.to_inner(a), &self.to_inner(b))?;
        Ok(self.from_inner(&inner))
    }

    fn is_transversal(&self) -> bool {
        self.inner.is_transversal()
    }
}
