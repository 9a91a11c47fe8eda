use courant_core::courant::{
    axiom_suite, check_axiom, check_identity, identity_suite, jacobiator, partial_fn, partial_image_suite, partial_op,
    stability_suite, structure_suite, AxiomArg, CourantStructure, Identity, SuiteConfig,
};
use courant_core::diffgeo::Splitting as GSplitting;
use courant_core::models::BigTangent;
use courant_core::models::{big_tangent, q_algebroid, q_bracket_dprimeprime, q_bracket_raw, transverse_e, QSection};
use courant_core::parse::parse_poly;
use courant_core::{Chart, Error, KForm, Poly, PolyBounds, Rational, Section, Splitting};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn chart(p: usize, q: usize) -> Chart {
    Chart::new(p, q).unwrap()
}

fn poly(c: Chart, s: &str) -> Poly {
    parse_poly(s, c).unwrap()
}

fn sec(m: &dyn CourantStructure<Rational>, text: &str) -> Section {
    m.parse_section(text).unwrap()
}

fn bt(c: Chart) -> BigTangent<Rational> {
    big_tangent(c)
}

fn twisted() -> Splitting {
    let c = chart(2, 1);
    Splitting::new(c, vec![vec![Poly::zero(c), poly(c, "x1")]]).unwrap()
}

fn cfg(trials: usize, seed: u64) -> SuiteConfig {
    SuiteConfig {
        trials,
        seed,
        bounds: PolyBounds::default(),
    }
}

fn assert_all_pass(reports: &[courant_core::courant::CheckReport]) {
    for r in reports {
        assert!(r.pass, "{} failed on {:?}: {:?}", r.check, r.inputs, r.residual);
    }
}

#[test]
fn big_tangent_examples() {
    let c = chart(2, 0);
    let m = bt(c);
    let a = sec(&m, "vf:[1,0]; form:[0,1]");
    let b = sec(&m, "vf:[0,1]; form:[1,0]");
    assert_eq!(m.metric(&a, &b).unwrap(), Poly::one(c));

    let e = sec(&m, "vf:[1,0]");
    let w = sec(&m, "form:[x1,0]");
    let br = m.bracket(&e, &w).unwrap();
    assert_eq!(br, sec(&m, "form:[1/2,0]"));
    assert_eq!(m.render_section(&br), "0 ⊕ 1/2*dx1");

    let x = sec(&m, "vf:[x2,x1]");
    let y = sec(&m, "vf:[x1^2,0]");
    assert_eq!(m.bracket(&x, &y).unwrap(), sec(&m, "vf:[2*x1*x2 - 0, -x1^2]"));
}

#[test]
fn big_tangent_partial_is_differential() {
    let c = chart(2, 1);
    let m = bt(c);
    let f = poly(c, "x1*y1 + x2^2");
    assert_eq!(partial_fn(&m, &f).unwrap(), sec(&m, "form:[y1, 2*x2, x1]"));
    assert!(partial_fn(&m, &poly(c, "7")).unwrap().is_zero());
}

#[test]
fn big_tangent_axiom_examples() {
    let c = chart(2, 1);
    let m = bt(c);
    let e1 = sec(&m, "vf:[1,0,0]");
    let e2 = sec(&m, "form:[x1,0,0]");
    let s = |x: &Section| AxiomArg::Section(x.clone());
    assert!(check_axiom(&m, 1, &[s(&e1), s(&e2)]).unwrap().pass);
    assert!(
        check_axiom(&m, 2, &[AxiomArg::Function(poly(c, "x1*y1"))])
            .unwrap()
            .pass
    );
    assert!(check_axiom(&m, 3, &[s(&e2), s(&e2), s(&e2)]).unwrap().pass);
    let d1 = sec(&m, "vf:[0,1,0]");
    assert!(jacobiator(&m, &e1, &d1, &e1).unwrap().is_zero());
    assert!(matches!(check_axiom(&m, 3, &[s(&e1)]), Err(Error::Argument(_))));
    assert!(matches!(
        check_axiom(&m, 6, &[] as &[AxiomArg<Rational>]),
        Err(Error::Argument(_))
    ));

    let r = check_identity(
        &m,
        Identity::PartialFunction,
        &[s(&e1), AxiomArg::Function(poly(c, "x1^2"))],
    )
    .unwrap();
    assert!(r.pass);
    assert_eq!(
        m.bracket(&e1, &partial_fn(&m, &poly(c, "x1^2")).unwrap()).unwrap(),
        sec(&m, "form:[1,0,0]")
    );
}

#[test]
fn a_deliberately_broken_bracket_is_caught() {
    struct Broken(BigTangent<Rational>);
    impl CourantStructure<Rational> for Broken {
        fn name(&self) -> &str {
            "broken"
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
        // Doubles the form part.
        fn bracket(&self, a: &Section, b: &Section) -> courant_core::Result<Section> {
            let full = self.0.bracket(a, b)?;
            let n = self.chart().dim();
            let mut out = full;
            for j in 0..n {
                out.0[n + j] = out.0[n + j].scale(&"2".parse().unwrap());
            }
            Ok(out)
        }
    }
    let m = Broken(bt(chart(1, 1)));
    let reports = axiom_suite(&m, &cfg(8, 3)).unwrap();
    assert!(reports.iter().any(|r| !r.pass && r.residual.is_some()));
}

#[test]
fn big_tangent_suites() {
    for (p, q) in [(3, 0), (2, 1), (0, 2)] {
        let m = bt(chart(p, q));
        assert_all_pass(&axiom_suite(&m, &cfg(6, 11)).unwrap());
        assert_all_pass(&identity_suite(&m, &cfg(4, 12)).unwrap());
        assert_all_pass(&partial_image_suite(&m, &cfg(4, 13)).unwrap());
        assert_all_pass(&structure_suite(&m, &cfg(4, 14)).unwrap());
        for r in stability_suite(&m, &cfg(3, 15)).unwrap() {
            assert!(r.all_pass(), "{r:?}");
        }
    }
}

#[test]
fn q_examples() {
    let c = chart(1, 1);
    let m = q_algebroid(Splitting::flat(c));
    let a = sec(&m, "F:[1]");
    let b = sec(&m, "annQ:[y1]");
    assert_eq!(m.bracket(&a, &b).unwrap(), sec(&m, "annQ:[1/2]"));
    assert_eq!(m.metric(&a, &sec(&m, "annQ:[1]")).unwrap(), poly(c, "1/2"));
    let y2 = sec(&m, "F:[y1]");
    assert_eq!(m.bracket(&a, &y2).unwrap(), sec(&m, "F:[1]"));
    assert_eq!(m.render_section(&m.bracket(&a, &b).unwrap()), "0 ⊕ 1/2*dy1");
}

#[test]
fn q_bracket_forms_agree_and_ignore_ann_f() {
    let c = chart(2, 2);
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let bounds = PolyBounds::default();
    for _ in 0..6 {
        let s: Splitting = GSplitting::random(c, &bounds.with_degree(1), &mut rng);
        let m = q_algebroid(s.clone());
        let a = QSection::from_section(&m.random_section(&bounds, &mut rng));
        let b = QSection::from_section(&m.random_section(&bounds, &mut rng));
        let direct = m.bracket_typed(&a, &b).unwrap();
        assert_eq!(q_bracket_dprimeprime(&s, &a, &b).unwrap(), direct);

        let gamma = |rng: &mut ChaCha8Rng| {
            let beta: Vec<Poly> = (0..2).map(|_| Poly::random(c, &bounds, false, rng)).collect();
            s.ann_f_form(&beta).unwrap()
        };
        let a1 = &a.form(&s).unwrap() + &gamma(&mut rng);
        let a2 = &b.form(&s).unwrap() + &gamma(&mut rng);
        let raw = q_bracket_raw(&s, &a.field(c).unwrap(), &a1, &b.field(c).unwrap(), &a2).unwrap();
        assert_eq!(raw, direct);
    }
}

#[test]
fn q_suites_non_flat() {
    let c = chart(2, 2);
    let s: Splitting = GSplitting::random(
        c,
        &PolyBounds::default().with_degree(1),
        &mut ChaCha8Rng::seed_from_u64(9),
    );
    assert!(!s.is_flat());
    let m = q_algebroid(s);
    assert_all_pass(&axiom_suite(&m, &cfg(5, 21)).unwrap());
    assert_all_pass(&identity_suite(&m, &cfg(4, 22)).unwrap());
    assert_all_pass(&partial_image_suite(&m, &cfg(4, 23)).unwrap());
    assert_all_pass(&structure_suite(&m, &cfg(4, 24)).unwrap());
    for r in stability_suite(&m, &cfg(3, 25)).unwrap() {
        assert!(r.all_pass(), "{r:?}");
    }
}

#[test]
fn transverse_examples() {
    let s = twisted();
    let c = s.chart();
    let m = transverse_e(s);
    let a = sec(&m, "nu:[1,0]");
    let b = sec(&m, "annF:[x1,0]");
    assert_eq!(m.bracket(&a, &b).unwrap(), sec(&m, "annF:[1/2,0]"));
    assert!(m.bracket(&a, &b).unwrap().is_foliated());
    let bad = courant_core::courant::Section(vec![poly(c, "y1"), Poly::zero(c), Poly::zero(c), Poly::zero(c)]);
    assert!(matches!(m.bracket(&a, &bad), Err(Error::Foliation(_))));
    assert!(matches!(m.parse_section("nu:[y1,0]"), Err(Error::Foliation(_))));
    let lambda: KForm = courant_core::parse::parse_form("x2*dx1 + dy1", c).unwrap();
    assert_eq!(partial_op(&m, &lambda).unwrap(), sec(&m, "annF:[x2,0]"));
}

#[test]
fn transverse_suites() {
    let m = transverse_e(twisted());
    assert_all_pass(&axiom_suite(&m, &cfg(8, 31)).unwrap());
    assert_all_pass(&identity_suite(&m, &cfg(4, 32)).unwrap());
    assert_all_pass(&partial_image_suite(&m, &cfg(4, 33)).unwrap());
    assert_all_pass(&structure_suite(&m, &cfg(4, 34)).unwrap());
    for r in stability_suite(&m, &cfg(3, 35)).unwrap() {
        assert!(r.all_pass(), "{r:?}");
    }
}
