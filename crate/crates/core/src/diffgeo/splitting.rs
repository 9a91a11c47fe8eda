use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::diffgeo::forms::KForm;
use crate::diffgeo::vector::VectorField;
use crate::error::{Error, Result};
use crate::ratpoly::{Chart, PolyBounds, Polynomial};
use crate::scalar::Scalar;

/// Highest degree handled by the adapted decomposition.
pub const MAX_ADAPTED_DEGREE: usize = 3;
/// Highest degree accepted by [`Splitting::d_bigraded`].
pub const MAX_BIGRADED_D_DEGREE: usize = 2;

/// Summands of `TM = F + Q` and `T*M = annF + annQ`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Summand {
    F,
    Q,
    AnnF,
    AnnQ,
}

/// `(Q-degree, F-degree)`.
pub type Bidegree = (usize, usize);

/// `(X^i, Y^a)` against the adapted frame `e_i, d/dy_a`.
pub type AdaptedComponents<S> = (Vec<Polynomial<S>>, Vec<Polynomial<S>>);

type Term<S> = (Vec<usize>, Polynomial<S>);

/// A form written against the adapted coframe: index `i < p` is `dx^i`,
/// index `p + a` is `eta^a`.
#[derive(Clone, Debug, PartialEq)]
pub struct AdaptedForm<S: Scalar>(pub KForm<S>);

impl<S: Scalar> AdaptedForm<S> {
    pub fn as_kform(&self) -> &KForm<S> {
        &self.0
    }
}

/// The three pieces of `d = d' + d'' + d_{2,-1}` applied to a form of pure
/// bidegree `(a, b)`: `d'` lands in `(a+1, b)`, `d''` in `(a, b+1)` and the
/// curvature part in `(a+2, b-1)`.
#[derive(Clone, Debug, PartialEq)]
pub struct BigradedD<S: Scalar> {
    pub d_prime: KForm<S>,
    pub d_second: KForm<S>,
    pub d_curvature: KForm<S>,
}

/// A complement `Q` of the leaf distribution `F = span{d/dy_a}`, encoded by
/// the `q x p` matrix `t` with `Q = span{e_i = d/dx_i + sum_a t[a][i] d/dy_a}`.
///
/// The dual adapted coframe is `{dx^i, eta^a = dy^a - sum_i t[a][i] dx^i}`.
#[derive(Clone, Debug, PartialEq)]
pub struct Splitting<S: Scalar> {
    chart: Chart,
    t: Vec<Vec<Polynomial<S>>>,
}

impl<S: Scalar> Splitting<S> {
    /// `t = 0`: `Q = span{d/dx_i}`.
    pub fn flat(chart: Chart) -> Self {
        Splitting {
            chart,
            t: vec![vec![Polynomial::zero(chart); chart.p()]; chart.q()],
        }
    }

    pub fn new(chart: Chart, t: Vec<Vec<Polynomial<S>>>) -> Result<Self> {
        if t.len() != chart.q() || t.iter().any(|row| row.len() != chart.p()) {
            return Err(Error::Dimension(format!(
                "splitting matrix must be {} x {}",
                chart.q(),
                chart.p()
            )));
        }
        for row in &t {
            for e in row {
                chart.ensure_same(&e.chart())?;
            }
        }
        Ok(Splitting { chart, t })
    }

    /// Random entries of total degree `<= bounds.max_degree`, in all variables.
    pub fn random<R: Rng + ?Sized>(chart: Chart, bounds: &PolyBounds, rng: &mut R) -> Self {
        let t = (0..chart.q())
            .map(|_| {
                (0..chart.p())
                    .map(|_| Polynomial::random(chart, bounds, false, rng))
                    .collect()
            })
            .collect();
        Splitting { chart, t }
    }

    pub fn random_seeded(chart: Chart, bounds: &PolyBounds, seed: u64) -> Self {
        Self::random(chart, bounds, &mut ChaCha8Rng::seed_from_u64(seed))
    }

    pub fn chart(&self) -> Chart {
        self.chart
    }

    /// `t[a][i]`.
    pub fn entry(&self, a: usize, i: usize) -> &Polynomial<S> {
        &self.t[a][i]
    }

    pub fn matrix(&self) -> &[Vec<Polynomial<S>>] {
        &self.t
    }

    pub fn is_flat(&self) -> bool {
        self.t.iter().flatten().all(Polynomial::is_zero)
    }

    /// Horizontal frame field `e_i`.
    pub fn q_frame(&self, i: usize) -> VectorField<S> {
        let c = self.chart;
        let mut comps = vec![Polynomial::zero(c); c.dim()];
        comps[i] = Polynomial::one(c);
        for a in 0..c.q() {
            comps[c.leaf_index(a)] = self.t[a][i].clone();
        }
        VectorField::from_components(c, comps).expect("chart-consistent frame")
    }

    /// Adapted coframe element `eta^a`.
    pub fn eta(&self, a: usize) -> KForm<S> {
        let c = self.chart;
        let mut comps = vec![Polynomial::zero(c); c.dim()];
        for (slot, t) in comps.iter_mut().zip(&self.t[a]) {
            *slot = -t;
        }
        comps[c.leaf_index(a)] = Polynomial::one(c);
        KForm::one_form(c, &comps).expect("chart-consistent coframe")
    }

    /// `sum_a alpha_a eta^a` as a coordinate 1-form.
    pub fn ann_q_form(&self, alpha: &[Polynomial<S>]) -> Result<KForm<S>> {
        if alpha.len() != self.chart.q() {
            return Err(Error::Dimension(format!("expected {} annQ components", self.chart.q())));
        }
        let mut out = KForm::zero(self.chart, 1);
        for (a, c) in alpha.iter().enumerate() {
            if !c.is_zero() {
                out = out.checked_add(&self.eta(a).scale(c))?;
            }
        }
        Ok(out)
    }

    /// `sum_i beta_i dx^i`.
    pub fn ann_f_form(&self, beta: &[Polynomial<S>]) -> Result<KForm<S>> {
        if beta.len() != self.chart.p() {
            return Err(Error::Dimension(format!("expected {} annF components", self.chart.p())));
        }
        let mut comps: Vec<_> = beta.to_vec();
        comps.extend(std::iter::repeat_n(Polynomial::zero(self.chart), self.chart.q()));
        KForm::one_form(self.chart, &comps)
    }

    /// Components of a 1-form against `eta^a`, i.e. `w(d/dy_a)`.
    pub fn ann_q_components(&self, w: &KForm<S>) -> Result<Vec<Polynomial<S>>> {
        require_one_form(w)?;
        Ok((0..self.chart.q())
            .map(|a| w.component(self.chart.leaf_index(a)))
            .collect())
    }

    /// Components of a 1-form against `dx^i`, i.e. `w(e_i)`.
    pub fn ann_f_components(&self, w: &KForm<S>) -> Result<Vec<Polynomial<S>>> {
        require_one_form(w)?;
        let c = self.chart;
        Ok((0..c.p())
            .map(|i| {
                let mut acc = w.component(i);
                for a in 0..c.q() {
                    acc += &(&w.component(c.leaf_index(a)) * &self.t[a][i]);
                }
                acc
            })
            .collect())
    }

    /// Components of `X = sum X^i e_i + sum Y^a d/dy_a`, returned as
    /// `(X^i, Y^a)`.
    pub fn adapted_vector_components(&self, x: &VectorField<S>) -> Result<AdaptedComponents<S>> {
        self.chart.ensure_same(&x.chart())?;
        let c = self.chart;
        let hor: Vec<_> = x.transverse_components().to_vec();
        let ver = (0..c.q())
            .map(|a| {
                let mut acc = x.component(c.leaf_index(a)).clone();
                for (i, h) in hor.iter().enumerate() {
                    acc -= &(&self.t[a][i] * h);
                }
                acc
            })
            .collect();
        Ok((hor, ver))
    }

    /// Splitting-induced projection of a vector field onto `F` or `Q`.
    pub fn project_vector(&self, x: &VectorField<S>, target: Summand) -> Result<VectorField<S>> {
        let (hor, ver) = self.adapted_vector_components(x)?;
        match target {
            Summand::F => VectorField::leafwise(self.chart, &ver),
            Summand::Q => self.horizontal_lift(&hor),
            _ => Err(Error::Argument(format!("{target:?} is not a tangent summand"))),
        }
    }

    /// Projection of a 1-form onto `annF` or `annQ`.
    pub fn project_form(&self, w: &KForm<S>, target: Summand) -> Result<KForm<S>> {
        match target {
            Summand::AnnF => self.ann_f_form(&self.ann_f_components(w)?),
            Summand::AnnQ => self.ann_q_form(&self.ann_q_components(w)?),
            _ => Err(Error::Argument(format!("{target:?} is not a cotangent summand"))),
        }
    }

    /// `phi(V) = sum_i V^i e_i`.
    pub fn horizontal_lift(&self, v: &[Polynomial<S>]) -> Result<VectorField<S>> {
        if v.len() != self.chart.p() {
            return Err(Error::Dimension(format!(
                "horizontal lift needs {} components, got {}",
                self.chart.p(),
                v.len()
            )));
        }
        let mut out = VectorField::zero(self.chart);
        for (i, c) in v.iter().enumerate() {
            if !c.is_zero() {
                out = &out + &self.q_frame(i).scale(c);
            }
        }
        Ok(out)
    }

    /// `psi`: the transverse class of a vector field, read off its
    /// `d/dx` components.
    pub fn transverse_projection(&self, x: &VectorField<S>) -> Vec<Polynomial<S>> {
        x.transverse_components().to_vec()
    }

    /// Re-expresses `w` in the wedge basis of the adapted coframe.
    pub fn to_adapted(&self, w: &KForm<S>) -> Result<AdaptedForm<S>> {
        self.chart.ensure_same(&w.chart())?;
        if w.degree() > MAX_ADAPTED_DEGREE {
            return Err(Error::UnsupportedDegree(w.degree(), MAX_ADAPTED_DEGREE));
        }
        // dy^a = eta^a + sum_i t[a][i] dx^i
        let c = self.chart;
        let images: Vec<KForm<S>> = (0..c.dim())
            .map(|j| {
                let mut comps = vec![Polynomial::zero(c); c.dim()];
                comps[j] = Polynomial::one(c);
                if j >= c.p() {
                    comps[..c.p()].clone_from_slice(&self.t[j - c.p()]);
                }
                KForm::one_form(c, &comps).expect("chart-consistent")
            })
            .collect();
        substitute(w, &images).map(AdaptedForm)
    }

    /// Inverse of [`Self::to_adapted`].
    pub fn from_adapted(&self, w: &AdaptedForm<S>) -> Result<KForm<S>> {
        let images: Vec<KForm<S>> = (0..self.chart.dim())
            .map(|j| {
                if j < self.chart.p() {
                    KForm::differential(self.chart, j).expect("index in range")
                } else {
                    self.eta(j - self.chart.p())
                }
            })
            .collect();
        substitute(&w.0, &images)
    }

    /// Bigraded components of `w`, each returned in the coordinate coframe.
    /// Their sum is `w`.
    pub fn adapted_decompose(&self, w: &KForm<S>) -> Result<BTreeMap<Bidegree, KForm<S>>> {
        let adapted = self.to_adapted(w)?;
        let p = self.chart.p();
        let mut groups: BTreeMap<Bidegree, Vec<Term<S>>> = BTreeMap::new();
        for (idx, coef) in adapted.0.terms() {
            let qdeg = idx.iter().filter(|&&i| i < p).count();
            groups
                .entry((qdeg, idx.len() - qdeg))
                .or_default()
                .push((idx.clone(), coef.clone()));
        }
        groups
            .into_iter()
            .map(|(bd, terms)| {
                let part = AdaptedForm(KForm::from_terms(self.chart, w.degree(), terms)?);
                Ok((bd, self.from_adapted(&part)?))
            })
            .collect()
    }

    /// `None` for the zero form; an error if `w` mixes bidegrees.
    pub fn bidegree(&self, w: &KForm<S>) -> Result<Option<Bidegree>> {
        let parts = self.adapted_decompose(w)?;
        match parts.len() {
            0 => Ok(None),
            1 => Ok(parts.keys().next().copied()),
            _ => Err(Error::Bidegree(format!(
                "form has components of bidegrees {:?}",
                parts.keys().collect::<Vec<_>>()
            ))),
        }
    }

    /// Splits `dw` into `d'w`, `d''w` and the curvature part, for `w` of
    /// pure bidegree and degree at most 2.
    pub fn d_bigraded(&self, w: &KForm<S>) -> Result<BigradedD<S>> {
        if w.degree() > MAX_BIGRADED_D_DEGREE {
            return Err(Error::UnsupportedDegree(w.degree(), MAX_BIGRADED_D_DEGREE));
        }
        let zero = KForm::zero(self.chart, w.degree() + 1);
        let mut out = BigradedD {
            d_prime: zero.clone(),
            d_second: zero.clone(),
            d_curvature: zero,
        };
        let Some((a, b)) = self.bidegree(w)? else {
            return Ok(out);
        };
        for (bd, part) in self.adapted_decompose(&w.ext_d())? {
            if bd == (a + 1, b) {
                out.d_prime = part;
            } else if bd == (a, b + 1) {
                out.d_second = part;
            } else if b >= 1 && bd == (a + 2, b - 1) {
                out.d_curvature = part;
            } else {
                return Err(Error::Soundness(format!(
                    "d of a ({a},{b})-form has a ({},{}) component",
                    bd.0, bd.1
                )));
            }
        }
        Ok(out)
    }

    /// `d''` extended additively to forms of mixed bidegree.
    pub fn d_second(&self, w: &KForm<S>) -> Result<KForm<S>> {
        let mut out = KForm::zero(self.chart, w.degree() + 1);
        for part in self.adapted_decompose(w)?.values() {
            out = out.checked_add(&self.d_bigraded(part)?.d_second)?;
        }
        Ok(out)
    }
}

fn require_one_form<S: Scalar>(w: &KForm<S>) -> Result<()> {
    if w.degree() != 1 {
        return Err(Error::Degree(format!("expected a 1-form, got degree {}", w.degree())));
    }
    Ok(())
}

/// Replaces each basis 1-form `b_j` by `images[j]` and expands.
fn substitute<S: Scalar>(w: &KForm<S>, images: &[KForm<S>]) -> Result<KForm<S>> {
    let c = w.chart();
    let mut out = KForm::zero(c, w.degree());
    for (idx, coef) in w.terms() {
        let mut term = KForm::function(coef.clone());
        for &j in idx {
            term = term.wedge(&images[j])?;
        }
        out = out.checked_add(&term)?;
    }
    Ok(out)
}
