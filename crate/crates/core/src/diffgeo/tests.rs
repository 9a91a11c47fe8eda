use proptest::prelude::*;

use super::*;
use crate::error::Error;
use crate::ratpoly::{Chart, PolyBounds};
use crate::{Poly, Rational};

type VF = VectorField<Rational>;
type Form = KForm<Rational>;
type Split = Splitting<Rational>;

fn chart(p: usize, q: usize) -> Chart {
    Chart::new(p, q).unwrap()
}

fn var(c: Chart, idx: usize) -> Poly {
    Poly::variable(c, idx).unwrap()
}

fn int(c: Chart, n: i64) -> Poly {
    Poly::integer(c, n)
}

fn dx(c: Chart, idx: usize) -> Form {
    Form::differential(c, idx).unwrap()
}

fn field(c: Chart, idx: usize) -> VF {
    VF::coordinate(c, idx).unwrap()
}

/// p=2, q=1 with t[0][1] = x1, i.e. e2 = d/dx2 + x1 d/dy1.
fn twisted() -> Split {
    let c = chart(2, 1);
    Split::new(c, vec![vec![Poly::zero(c), var(c, 0)]]).unwrap()
}

fn rand_poly(c: Chart, seed: u64) -> Poly {
    Poly::random_seeded(c, &PolyBounds::new(2, 3, 3).unwrap(), false, seed)
}

fn rand_field(c: Chart, seed: u64) -> VF {
    let comps = (0..c.dim())
        .map(|j| rand_poly(c, seed.wrapping_mul(31).wrapping_add(j as u64)))
        .collect();
    VF::from_components(c, comps).unwrap()
}

fn tuples(n: usize, k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for t in tuples(n, k - 1) {
        let start = t.last().map_or(0, |&l| l + 1);
        for j in start..n {
            let mut next = t.clone();
            next.push(j);
            out.push(next);
        }
    }
    out
}

fn rand_form(c: Chart, degree: usize, seed: u64) -> Form {
    let mut out = Form::zero(c, degree);
    for (k, idx) in tuples(c.dim(), degree).into_iter().enumerate() {
        let coef = rand_poly(c, seed.wrapping_mul(1_000_003).wrapping_add(k as u64));
        out = &out + &Form::basis(c, &idx).unwrap().scale(&coef);
    }
    out
}

fn rand_splitting(c: Chart, seed: u64) -> Split {
    let mut rng = <rand_chacha::ChaCha8Rng as rand::SeedableRng>::seed_from_u64(seed);
    Split::random(c, &PolyBounds::new(1, 2, 2).unwrap(), &mut rng)
}

#[test]
fn lie_bracket_examples() {
    let c = chart(1, 1);
    let d_y = field(c, 1);
    let y_dy = d_y.scale(&var(c, 1));
    assert_eq!(lie_bracket(&d_y, &y_dy).unwrap(), d_y);

    let x = rand_field(c, 3);
    assert!(lie_bracket(&x, &x).unwrap().is_zero());

    assert!(matches!(
        lie_bracket(&field(c, 0), &field(chart(2, 0), 0)),
        Err(Error::Dimension(_))
    ));
}

#[test]
fn lie_bracket_against_operator_commutator() {
    let c = chart(2, 0);
    let x1 = var(c, 0);
    let x2 = var(c, 1);
    let a = field(c, 1).scale(&x1);
    let b = field(c, 0).scale(&x2);
    let expected = &field(c, 0).scale(&x1) - &field(c, 1).scale(&x2);
    let got = lie_bracket(&a, &b).unwrap();
    assert_eq!(got, expected);

    // Oracle: act on each coordinate function and evaluate at rational points.
    let points = [(1, 2), (-3, 5), (7, -1), (2, 9), (-4, -6)];
    for (num, den) in points {
        let pt = vec![Rational::new(num.into(), 3.into()), Rational::new(den.into(), 7.into())];
        for i in 0..2 {
            let u = var(c, i);
            let commutator = &a.apply(&b.apply(&u).unwrap()).unwrap() - &b.apply(&a.apply(&u).unwrap()).unwrap();
            assert_eq!(commutator.eval(&pt).unwrap(), got.component(i).eval(&pt).unwrap());
        }
    }
}

#[test]
fn ext_d_examples() {
    let c = chart(2, 1);
    let x1 = var(c, 0);
    let y1 = var(c, 2);
    let f = Form::function(&x1 * &y1);
    let expected = &dx(c, 0).scale(&y1) + &dx(c, 2).scale(&x1);
    assert_eq!(f.ext_d(), expected);

    let w = dx(c, 1).scale(&x1);
    assert_eq!(w.ext_d(), Form::basis(c, &[0, 1]).unwrap());

    for seed in 0..10 {
        assert!(Form::function(rand_poly(c, seed)).ext_d().ext_d().is_zero());
    }

    let top = Form::basis(c, &[0, 1, 2]).unwrap().scale(&x1);
    let d_top = top.ext_d();
    assert_eq!(d_top.degree(), 4);
    assert!(d_top.is_zero());
}

#[test]
fn interior_examples() {
    let c = chart(2, 0);
    let w = Form::basis(c, &[0, 1]).unwrap();
    assert_eq!(w.interior(&field(c, 0)).unwrap(), dx(c, 1));
    assert_eq!(w.interior(&field(c, 1)).unwrap(), -&dx(c, 0));
    assert!(matches!(
        Form::function(int(c, 1)).interior(&field(c, 0)),
        Err(Error::Degree(_))
    ));
    let c3 = chart(2, 1);
    for seed in 0..10 {
        let x = rand_field(c3, seed);
        let w = rand_form(c3, 2, seed + 100);
        assert!(w.interior(&x).unwrap().interior(&x).unwrap().is_zero());
    }
}

#[test]
fn wedge_sign_and_basis_normalisation() {
    let c = chart(3, 0);
    let a = Form::basis(c, &[2, 0]).unwrap();
    assert_eq!(a, -&Form::basis(c, &[0, 2]).unwrap());
    assert!(Form::basis(c, &[1, 1]).unwrap().is_zero());
    let w = dx(c, 1).wedge(&dx(c, 0)).unwrap();
    assert_eq!(w, -&Form::basis(c, &[0, 1]).unwrap());
    // (dx1^dx2)(d/dx1, d/dx2) = 1
    let e = Form::basis(c, &[0, 1])
        .unwrap()
        .evaluate(&[field(c, 0), field(c, 1)])
        .unwrap();
    assert_eq!(e, int(c, 1));
}

#[test]
fn lie_derivative_examples() {
    let c = chart(1, 1);
    let x1 = var(c, 0);
    let w = dx(c, 0).scale(&x1);
    assert_eq!(lie_derivative(&field(c, 0), &w).unwrap(), dx(c, 0));
    assert!(lie_derivative(&field(c, 1), &w).unwrap().is_zero());

    let c3 = chart(2, 1);
    for seed in 0..8 {
        let f = rand_poly(c3, seed);
        let x = rand_field(c3, seed + 1);
        let w = rand_form(c3, 1, seed + 2);
        let lhs = lie_derivative(&x, &w.scale(&f)).unwrap();
        let rhs = &w.scale(&x.apply(&f).unwrap()) + &lie_derivative(&x, &w).unwrap().scale(&f);
        assert_eq!(lhs, rhs);
    }
}

#[test]
fn adapted_decompose_examples() {
    let s = twisted();
    let c = s.chart();
    let x1 = var(c, 0);
    let parts = s.adapted_decompose(&dx(c, 2)).unwrap();
    assert_eq!(parts.len(), 2);
    assert_eq!(parts[&(0, 1)], s.eta(0));
    assert_eq!(parts[&(1, 0)], dx(c, 1).scale(&x1));
    // dy1 = eta1 + x1 dx2
    assert_eq!(&s.eta(0) + &dx(c, 1).scale(&x1), dx(c, 2));

    let parts = s.adapted_decompose(&dx(c, 0)).unwrap();
    assert_eq!(parts.keys().copied().collect::<Vec<_>>(), vec![(1, 0)]);

    let flat = Split::flat(c);
    let parts = flat.adapted_decompose(&dx(c, 2)).unwrap();
    assert_eq!(parts.keys().copied().collect::<Vec<_>>(), vec![(0, 1)]);

    let c4 = chart(2, 2);
    let w4 = Form::basis(c4, &[0, 1, 2, 3]).unwrap();
    assert!(matches!(
        Split::flat(c4).adapted_decompose(&w4),
        Err(Error::UnsupportedDegree(4, 3))
    ));
}

#[test]
fn d_bigraded_examples() {
    let s = twisted();
    let c = s.chart();
    let x1 = var(c, 0);
    let y1 = var(c, 2);

    let d = s.d_bigraded(&Form::function(y1.clone())).unwrap();
    assert_eq!(d.d_prime, dx(c, 1).scale(&x1));
    assert_eq!(d.d_second, &dx(c, 2) - &dx(c, 1).scale(&x1));
    assert_eq!(d.d_second, s.eta(0));
    assert!(d.d_curvature.is_zero());
    assert_eq!(&d.d_prime + &d.d_second, dx(c, 2));

    let flat = Split::flat(c);
    let d = flat.d_bigraded(&Form::function(&x1 * &y1)).unwrap();
    assert_eq!(d.d_prime, dx(c, 0).scale(&y1));
    assert_eq!(d.d_second, dx(c, 2).scale(&x1));

    let d = s.d_bigraded(&s.eta(0)).unwrap();
    assert_eq!(s.eta(0).ext_d(), -&Form::basis(c, &[0, 1]).unwrap());
    assert_eq!(d.d_curvature, -&Form::basis(c, &[0, 1]).unwrap());
    assert!(d.d_prime.is_zero());
    assert!(d.d_second.is_zero());

    let mixed = &dx(c, 0) + &s.eta(0);
    assert!(matches!(s.d_bigraded(&mixed), Err(Error::Bidegree(_))));
    let three = Form::basis(c, &[0, 1, 2]).unwrap();
    assert!(matches!(s.d_bigraded(&three), Err(Error::UnsupportedDegree(3, 2))));
}

#[test]
fn projection_examples() {
    let s = twisted();
    let c = s.chart();
    assert_eq!(s.project_form(&dx(c, 2), Summand::AnnQ).unwrap(), s.eta(0));
    assert_eq!(s.project_vector(&field(c, 2), Summand::F).unwrap(), field(c, 2));
    let flat = Split::flat(c);
    assert_eq!(flat.project_vector(&field(c, 0), Summand::Q).unwrap(), field(c, 0));
    assert!(matches!(
        s.project_form(&Form::basis(c, &[0, 1]).unwrap(), Summand::AnnF),
        Err(Error::Degree(_))
    ));
    assert!(s.project_vector(&field(c, 0), Summand::AnnQ).is_err());
}

#[test]
fn horizontal_lift_examples() {
    let s = twisted();
    let c = s.chart();
    let lifted = s.horizontal_lift(&[Poly::zero(c), int(c, 1)]).unwrap();
    assert_eq!(lifted, &field(c, 1) + &field(c, 2).scale(&var(c, 0)));

    let flat = Split::flat(c);
    let v = vec![rand_poly(c, 1), rand_poly(c, 2)];
    let lifted = flat.horizontal_lift(&v).unwrap();
    assert!(lifted.leaf_components().iter().all(Poly::is_zero));
    assert_eq!(s.transverse_projection(&s.horizontal_lift(&v).unwrap()), v);
    assert!(s.horizontal_lift(&v[..1]).is_err());
}

#[test]
fn generic_over_float_scalar() {
    let c = chart(2, 0);
    let x1 = crate::ratpoly::Polynomial::<f64>::variable(c, 0).unwrap();
    let x2 = crate::ratpoly::Polynomial::<f64>::variable(c, 1).unwrap();
    let a = VectorField::coordinate(c, 1).unwrap().scale(&x1);
    let b = VectorField::coordinate(c, 0).unwrap().scale(&x2);
    let got = lie_bracket(&a, &b).unwrap();
    assert_eq!(got.to_string(), "x1*d/dx1 - x2*d/dx2");
}

#[test]
fn display_forms_and_fields() {
    let c = chart(2, 1);
    let x1 = var(c, 0);
    let w = &Form::basis(c, &[0, 2]).unwrap().scale(&x1.pow(2)) + &Form::basis(c, &[1, 2]).unwrap().scale(&int(c, 3));
    assert_eq!(w.to_string(), "x1^2*dx1^dy1 + 3*dx2^dy1");
    let v = &field(c, 0).scale(&(&x1 + &int(c, 1))) - &field(c, 2);
    assert_eq!(v.to_string(), "(x1 + 1)*d/dx1 - d/dy1");
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn jacobi_identity(seed in any::<u64>()) {
        let c = chart(2, 1);
        let (x, y, z) = (rand_field(c, seed), rand_field(c, seed ^ 1), rand_field(c, seed ^ 2));
        let j = &(&lie_bracket(&lie_bracket(&x, &y).unwrap(), &z).unwrap()
            + &lie_bracket(&lie_bracket(&y, &z).unwrap(), &x).unwrap())
            + &lie_bracket(&lie_bracket(&z, &x).unwrap(), &y).unwrap();
        prop_assert!(j.is_zero());
    }

    #[test]
    fn d_squared_vanishes(seed in any::<u64>(), degree in 0usize..3) {
        let c = chart(2, 1);
        prop_assert!(rand_form(c, degree, seed).ext_d().ext_d().is_zero());
    }

    #[test]
    fn lie_derivative_commutes_with_d(seed in any::<u64>(), degree in 0usize..2) {
        let c = chart(1, 2);
        let x = rand_field(c, seed);
        let w = rand_form(c, degree, seed ^ 7);
        prop_assert_eq!(lie_derivative(&x, &w.ext_d()).unwrap(), lie_derivative(&x, &w).unwrap().ext_d());
    }

    #[test]
    fn lie_derivative_of_bracket(seed in any::<u64>()) {
        let c = chart(1, 1);
        let x = rand_field(c, seed);
        let y = rand_field(c, seed ^ 3);
        let w = rand_form(c, 1, seed ^ 5);
        let lhs = lie_derivative(&lie_bracket(&x, &y).unwrap(), &w).unwrap();
        let xy = lie_derivative(&x, &lie_derivative(&y, &w).unwrap()).unwrap();
        let yx = lie_derivative(&y, &lie_derivative(&x, &w).unwrap()).unwrap();
        prop_assert_eq!(lhs, &xy - &yx);
    }

    #[test]
    fn adapted_round_trip(seed in any::<u64>(), degree in 0usize..4) {
        let c = chart(2, 2);
        let s = rand_splitting(c, seed);
        let w = rand_form(c, degree, seed ^ 11);
        let back = s.from_adapted(&s.to_adapted(&w).unwrap()).unwrap();
        prop_assert_eq!(&back, &w);
        let mut sum = Form::zero(c, degree);
        for part in s.adapted_decompose(&w).unwrap().values() {
            sum = &sum + part;
        }
        prop_assert_eq!(sum, w);
    }

    #[test]
    fn bigraded_d_on_functions(seed in any::<u64>()) {
        let c = chart(2, 2);
        let s = rand_splitting(c, seed);
        let f = rand_poly(c, seed ^ 13);
        let d = s.d_bigraded(&Form::function(f.clone())).unwrap();
        prop_assert!(d.d_curvature.is_zero());
        prop_assert_eq!(&d.d_prime + &d.d_second, Form::function(f.clone()).ext_d());
        // d'f = sum (e_i f) dx^i, d''f = sum (d/dy_a f) eta^a
        let mut dp = Form::zero(c, 1);
        for i in 0..c.p() {
            dp = &dp + &dx(c, i).scale(&s.q_frame(i).apply(&f).unwrap());
        }
        let mut ds = Form::zero(c, 1);
        for a in 0..c.q() {
            ds = &ds + &s.eta(a).scale(&f.partial(c.leaf_index(a)).unwrap());
        }
        prop_assert_eq!(d.d_prime, dp);
        prop_assert_eq!(d.d_second, ds);
    }

    #[test]
    fn bigraded_d_sums_to_d(seed in any::<u64>()) {
        let c = chart(2, 2);
        let s = rand_splitting(c, seed);
        let w = rand_form(c, 1, seed ^ 17);
        for part in s.adapted_decompose(&w).unwrap().values() {
            let d = s.d_bigraded(part).unwrap();
            prop_assert_eq!(&(&d.d_prime + &d.d_second) + &d.d_curvature, part.ext_d());
        }
    }

    #[test]
    fn adapted_frames_are_dual(seed in any::<u64>()) {
        let c = chart(2, 2);
        let s = rand_splitting(c, seed);
        for i in 0..c.p() {
            let e = s.q_frame(i);
            for j in 0..c.p() {
                let v = dx(c, j).evaluate(std::slice::from_ref(&e)).unwrap();
                prop_assert_eq!(v, int(c, (i == j) as i64));
            }
            for a in 0..c.q() {
                prop_assert!(s.eta(a).evaluate(std::slice::from_ref(&e)).unwrap().is_zero());
            }
        }
        for a in 0..c.q() {
            for b in 0..c.q() {
                let v = s.eta(a).evaluate(&[field(c, c.leaf_index(b))]).unwrap();
                prop_assert_eq!(v, int(c, (a == b) as i64));
            }
            for i in 0..c.p() {
                prop_assert!(dx(c, i).evaluate(&[field(c, c.leaf_index(a))]).unwrap().is_zero());
            }
        }
    }

    #[test]
    fn projections_recombine(seed in any::<u64>()) {
        let c = chart(2, 2);
        let s = rand_splitting(c, seed);
        let x = rand_field(c, seed ^ 19);
        let parts = &s.project_vector(&x, Summand::F).unwrap() + &s.project_vector(&x, Summand::Q).unwrap();
        prop_assert_eq!(parts, x);
        let w = rand_form(c, 1, seed ^ 23);
        let parts = &s.project_form(&w, Summand::AnnF).unwrap() + &s.project_form(&w, Summand::AnnQ).unwrap();
        prop_assert_eq!(parts, w);
    }
}
