use courant_core::courant::{jacobiator, CheckReport, CourantStructure, SuiteConfig};
use courant_core::diffgeo::Splitting as GSplitting;
use courant_core::extension::{
    axiom3_case_values, consistency_suite, foliation_checks, oracle_bigtangent_compare, partial0_image_suite, psi_map,
    theorem_cases, verify_extension, well_definedness_suite, ExtAlgebroid, SectionKind,
};
use courant_core::models::{big_tangent, big_tangent_bracket, BigTangent};
use courant_core::parse::{parse_form, parse_poly};
use courant_core::{Chart, Error, Poly, PolyBounds, Rational, Section, Splitting};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

type A0 = ExtAlgebroid<Rational>;

fn chart(p: usize, q: usize) -> Chart {
    Chart::new(p, q).unwrap()
}

fn poly(c: Chart, s: &str) -> Poly {
    parse_poly(s, c).unwrap()
}

fn flat(p: usize, q: usize) -> A0 {
    ExtAlgebroid::new(Splitting::flat(chart(p, q))).unwrap()
}

fn twisted() -> A0 {
    let c = chart(2, 1);
    ExtAlgebroid::new(Splitting::new(c, vec![vec![Poly::zero(c), poly(c, "x1")]]).unwrap()).unwrap()
}

fn random_a0(p: usize, q: usize, seed: u64) -> A0 {
    let s: Splitting = GSplitting::random(
        chart(p, q),
        &PolyBounds::default().with_degree(1),
        &mut ChaCha8Rng::seed_from_u64(seed),
    );
    ExtAlgebroid::new(s).unwrap()
}

fn sec(a: &A0, text: &str) -> Section {
    a.parse_section(text).unwrap()
}

fn cfg(trials: usize, seed: u64) -> SuiteConfig {
    SuiteConfig {
        trials,
        seed,
        bounds: PolyBounds::default(),
    }
}

fn assert_all_pass(reports: &[CheckReport]) {
    assert!(!reports.is_empty());
    for r in reports {
        assert!(r.pass, "{} failed on {:?}: {:?}", r.check, r.inputs, r.residual);
    }
}

#[test]
fn curvature_correction_on_frame_pair() {
    let a = twisted();
    let e1 = sec(&a, "E:[1,0,0,0]");
    let e2 = sec(&a, "E:[0,1,0,0]");
    assert_eq!(a.bracket(&e1, &e2).unwrap(), sec(&a, "F:[1]"));
    assert_eq!(a.bracket(&e2, &e1).unwrap(), sec(&a, "F:[-1]"));

    let t: BigTangent<Rational> = big_tangent(a.chart());
    let lhs = psi_map(&a, &a.bracket(&e1, &e2).unwrap()).unwrap();
    let rhs = big_tangent_bracket(&psi_map(&a, &e1).unwrap(), &psi_map(&a, &e2).unwrap()).unwrap();
    assert_eq!(lhs, rhs);
    assert_eq!(t.render_section(&rhs.to_section()), "d/dy1 ⊕ 0");
}

#[test]
fn flat_generator_brackets() {
    let a = flat(1, 1);
    let e = sec(&a, "E:[1,0]");
    assert_eq!(a.bracket(&e, &sec(&a, "E:[0,x1]")).unwrap(), sec(&a, "E:[0,1/2]"));
    assert_eq!(a.bracket(&e, &sec(&a, "annQ:[x1]")).unwrap(), sec(&a, "annQ:[1]"));
    assert_eq!(a.bracket(&sec(&a, "annQ:[x1]"), &e).unwrap(), sec(&a, "annQ:[-1]"));
    let m = sec(&a, "F:[y1]; annQ:[x1*y1]; E:[x1, y1]");
    assert!(a.bracket(&m, &m).unwrap().is_zero());
    let br = a.bracket(&e, &sec(&a, "E:[0,x1]")).unwrap();
    assert_eq!(a.render_section(&br), "(0 ⊕ 0) ⊕ (0 ⊕ 1/2*dx1)");
}

#[test]
fn leafwise_brackets_match_q() {
    let a = flat(1, 1);
    let y1 = sec(&a, "F:[1]");
    let y2 = sec(&a, "F:[x1*y1]");
    assert_eq!(a.bracket(&y1, &y2).unwrap(), sec(&a, "F:[x1]"));
    assert_eq!(a.bracket(&y1, &sec(&a, "annQ:[y1]")).unwrap(), sec(&a, "annQ:[1/2]"));
}

#[test]
fn partial0_examples() {
    let a = flat(1, 1);
    let c = a.chart();
    assert_eq!(
        a.partial0_fn(&poly(c, "x1*y1")).unwrap(),
        sec(&a, "annQ:[x1]; E:[0,y1]")
    );
    assert_eq!(a.partial0(&parse_form("dy1", c).unwrap()).unwrap(), sec(&a, "annQ:[1]"));

    let b = twisted();
    let c = b.chart();
    let lambda = parse_form("x2*dx1 + y1*dx2 + x1*dy1", c).unwrap();
    assert_eq!(b.partial0(&lambda).unwrap(), b.partial0_via_sharp(&lambda).unwrap());
    assert!(matches!(
        b.partial0(&parse_form("dx1^dx2", c).unwrap()),
        Err(Error::Degree(_))
    ));
}

#[test]
fn consistency_examples() {
    let a = twisted();
    let c = a.chart();
    let q = sec(&a, "F:[y1]; annQ:[x1*y1]");
    let m = sec(&a, "F:[x2]; annQ:[y1]; E:[y1, x1, x2*y1, 1]");
    for (k, f, partner) in [(0, "x1", &m), (1, "1", &q), (2, "x1^2", &q), (3, "x1*x2", &m)] {
        let r = a.consistency_foliated_multiplier(k, &poly(c, f), partner).unwrap();
        assert!(r.pass, "{r:?}");
    }
    assert!(matches!(
        a.consistency_foliated_multiplier(0, &poly(c, "y1"), &q),
        Err(Error::Precondition(_))
    ));
}

#[test]
fn foliation_examples() {
    let a = flat(1, 1);
    let y1 = sec(&a, "F:[y1]");
    let y2 = sec(&a, "F:[x1*y1^2]");
    assert!(a.metric(&y1, &y2).unwrap().is_zero());
    assert_eq!(a.bracket(&y1, &y2).unwrap(), sec(&a, "F:[x1*y1^2]"));
    let br = a.bracket(&sec(&a, "E:[1,0]"), &sec(&a, "E:[0,x1]")).unwrap();
    assert_eq!(br, sec(&a, "E:[0,1/2]"));
}

#[test]
fn axiom3_reduction_cases_vanish() {
    let a = twisted();
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let b = PolyBounds::default();
    for kinds in [
        [SectionKind::E, SectionKind::E, SectionKind::Y],
        [SectionKind::Y, SectionKind::Y, SectionKind::Y],
        [SectionKind::Partial, SectionKind::Partial, SectionKind::Partial],
    ] {
        let s: Vec<Section> = kinds
            .iter()
            .map(|&k| a.random_of_kind(k, &b, &mut rng).unwrap())
            .collect();
        assert!(jacobiator(&a, &s[0], &s[1], &s[2]).unwrap().is_zero());
    }
}

#[test]
fn parse_errors_and_foliation_of_sections() {
    let a = flat(1, 1);
    assert!(matches!(a.parse_section("F:[x1"), Err(Error::Parse { .. })));
    assert!(matches!(a.parse_section("F:[1,2]"), Err(Error::Dimension(_))));
    let s = sec(&a, "F:[1]; annQ:[0]; E:[0,0]");
    assert_eq!(a.render_section(&s), "(d/dy1 ⊕ 0) ⊕ (0 ⊕ 0)");
    assert_eq!(a.parse_section(&a.format_section(&s)).unwrap(), s);
}

#[test]
fn flat_verification_bundle() {
    let a = flat(1, 1);
    assert_all_pass(&verify_extension(&a, &cfg(25, 1)).unwrap());
    assert_all_pass(&foliation_checks(&a, &cfg(6, 2)).unwrap());
    assert_all_pass(&oracle_bigtangent_compare(&a, &cfg(6, 3)).unwrap());
}

#[test]
fn twisted_verification_bundle() {
    let a = twisted();
    assert_all_pass(&verify_extension(&a, &cfg(3, 4)).unwrap());
    assert_all_pass(&foliation_checks(&a, &cfg(4, 5)).unwrap());
    assert_all_pass(&oracle_bigtangent_compare(&a, &cfg(6, 6)).unwrap());
}

#[test]
fn random_splitting_suites() {
    let a = random_a0(2, 1, 17);
    assert!(!a.splitting().is_flat());
    let small = cfg(2, 8);
    assert_all_pass(&theorem_cases(&a, &small).unwrap());
    assert_all_pass(&partial0_image_suite(&a, &small).unwrap());
    assert_all_pass(&axiom3_case_values(&a, &small).unwrap());
    assert_all_pass(&consistency_suite(&a, &cfg(6, 9)).unwrap());
    assert_all_pass(&well_definedness_suite(&a, &cfg(6, 10)).unwrap());
    assert_all_pass(&oracle_bigtangent_compare(&a, &cfg(4, 11)).unwrap());
    assert_all_pass(&foliation_checks(&a, &cfg(3, 12)).unwrap());
}

#[test]
fn dropping_the_curvature_correction_is_caught() {
    struct Uncorrected(A0);
    impl CourantStructure<Rational> for Uncorrected {
        fn name(&self) -> &str {
            "uncorrected"
        }
        fn chart(&self) -> Chart {
            self.0.chart()
        }
        fn frame_size(&self) -> usize {
            self.0.frame_size()
        }
        fn section_keys(&self) -> Vec<(&'static str, usize)> {
            self.0.section_keys()
        }
        fn frame_metric(&self, a: usize, b: usize) -> Poly {
            self.0.frame_metric(a, b)
        }
        fn frame_anchor(&self, a: usize) -> courant_core::VectorField {
            self.0.frame_anchor(a)
        }
        fn bracket(&self, a: &Section, b: &Section) -> courant_core::Result<Section> {
            let c = self.chart();
            let (p, q) = (c.p(), c.q());
            let mut out = self.0.bracket(a, b)?;
            let basis = |k| courant_core::models::ESection::from_coeffs(&Section::basis(c, 2 * p, k).0);
            for k in 0..2 * p {
                for l in 0..2 * p {
                    let corr = self.0.bracket_foliated(&basis(k), &basis(l))?;
                    let f = &a.0[2 * q + k] * &b.0[2 * q + l];
                    for j in 0..q {
                        out.0[j] -= &(&f * &corr.0[j]);
                    }
                }
            }
            Ok(out)
        }
    }
    let m = Uncorrected(twisted());
    let e1 = sec(&m.0, "E:[1,0,0,0]");
    let e2 = sec(&m.0, "E:[0,1,0,0]");
    assert!(m.bracket(&e1, &e2).unwrap().is_zero());
    let reports = courant_core::courant::axiom_suite(&m, &cfg(6, 13)).unwrap();
    assert!(reports.iter().any(|r| r.check == "axiom1" && !r.pass));
}
