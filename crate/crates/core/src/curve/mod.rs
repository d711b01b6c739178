//! Smooth plane curves and their pluricanonical spaces.
//!
//! A smooth plane curve of degree `d` has `K_C = O_C(d - 3)`, so sections of
//! `mK` are adjoint forms of degree `m(d - 3)` modulo `F`. Bases are built
//! lazily per degree and cached on the curve.

mod forms;
mod local;

use std::collections::HashMap;
use std::sync::{Arc, Mutex};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub use forms::{expected_dim, FormSpace};
pub use local::{Chart, CurvePoint, LocalExpansion};

use crate::error::{Error, Result};
use crate::field::Field;
use crate::poly::{Form, Poly, UniPoly};

/// Largest prime for which smoothness is certified by a full scan of `P^2(F_p)`.
pub const EXHAUSTIVE_SCAN_LIMIT: u64 = 1009;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum SmoothnessMode {
    /// Every rational point of the plane is checked.
    Exhaustive,
    /// Found points plus random line sections are checked.
    Sampled,
    /// Smoothness is assumed.
    Trusted,
}

impl SmoothnessMode {
    pub fn as_str(&self) -> &'static str {
        match self {
            SmoothnessMode::Exhaustive => "exhaustive",
            SmoothnessMode::Sampled => "sampled",
            SmoothnessMode::Trusted => "trusted",
        }
    }
}

/// A smooth plane curve `F(x, y, z) = 0` of degree at least 4.
pub struct PlaneCurve<K: Field> {
    field: K,
    f: Form<K>,
    partials: [Form<K>; 3],
    mode: SmoothnessMode,
    /// All affine rational points, in scan order, when the scan ran.
    affine_points: Option<Vec<[K::Elem; 3]>>,
    points_at_infinity: usize,
    spaces: Mutex<HashMap<u32, Arc<FormSpace<K>>>>,
}

impl<K: Field> Clone for PlaneCurve<K> {
    fn clone(&self) -> Self {
        PlaneCurve {
            field: self.field.clone(),
            f: self.f.clone(),
            partials: self.partials.clone(),
            mode: self.mode,
            affine_points: self.affine_points.clone(),
            points_at_infinity: self.points_at_infinity,
            spaces: Mutex::new(self.spaces.lock().unwrap().clone()),
        }
    }
}

impl<K: Field> std::fmt::Debug for PlaneCurve<K> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "PlaneCurve({} over {})", self.f.to_poly(), self.field.describe())
    }
}

impl<K: Field> PlaneCurve<K> {
    /// Validates `f` and certifies smoothness according to `mode`.
    ///
    /// `None` picks `Exhaustive` for prime fields up to [`EXHAUSTIVE_SCAN_LIMIT`],
    /// `Sampled` for larger primes and `Trusted` for the rationals.
    pub fn new(f: &Poly<K>, mode: Option<SmoothnessMode>) -> Result<Self> {
        if f.vars().len() != 3 {
            return Err(Error::Precondition("curve equation must be in x, y, z".into()));
        }
        let form = f.to_form()?;
        if form.is_zero() {
            return Err(Error::Precondition("curve equation is zero".into()));
        }
        let d = form.degree();
        if d < 4 {
            return Err(Error::DegreeTooSmall(d));
        }
        let k = f.field().clone();
        let mode = mode.unwrap_or(match k.order() {
            Some(q) if q <= EXHAUSTIVE_SCAN_LIMIT => SmoothnessMode::Exhaustive,
            Some(_) => SmoothnessMode::Sampled,
            None => SmoothnessMode::Trusted,
        });
        if mode != SmoothnessMode::Trusted && k.order().is_none() {
            return Err(Error::Precondition("smoothness scans need a finite field".into()));
        }
        if mode == SmoothnessMode::Exhaustive && k.order().is_some_and(|q| q > EXHAUSTIVE_SCAN_LIMIT) {
            return Err(Error::Precondition(format!("exhaustive scan limited to p <= {EXHAUSTIVE_SCAN_LIMIT}")));
        }
        let partials = [form.partial(0), form.partial(1), form.partial(2)];
        if (d as u64) >= k.characteristic() && k.characteristic() != 0 {
            return Err(Error::Precondition("characteristic must exceed the degree".into()));
        }
        let mut curve = PlaneCurve {
            field: k,
            f: form,
            partials,
            mode,
            affine_points: None,
            points_at_infinity: 0,
            spaces: Mutex::new(HashMap::new()),
        };
        curve.irreducibility_screen()?;
        match mode {
            SmoothnessMode::Exhaustive => curve.exhaustive_scan()?,
            SmoothnessMode::Sampled => curve.sampled_check()?,
            SmoothnessMode::Trusted => {}
        }
        Ok(curve)
    }

    pub fn field(&self) -> &K {
        &self.field
    }
    pub fn equation(&self) -> &Form<K> {
        &self.f
    }
    pub fn degree(&self) -> u32 {
        self.f.degree()
    }
    pub fn genus(&self) -> usize {
        let d = self.degree() as usize;
        (d - 1) * (d - 2) / 2
    }
    pub fn smoothness_mode(&self) -> SmoothnessMode {
        self.mode
    }
    /// Number of rational points, when the exhaustive scan ran.
    pub fn rational_point_count(&self) -> Option<usize> {
        self.affine_points.as_ref().map(|p| p.len() + self.points_at_infinity)
    }

    /// Degree of the adjoint forms representing `H^0(mK)`.
    pub fn canonical_degree(&self, m: u32) -> u32 {
        m * (self.degree() - 3)
    }

    /// Basis of `H^0(O_C(D))` for the given form degree `D` (cached).
    pub fn form_space(&self, degree: u32) -> Arc<FormSpace<K>> {
        let mut cache = self.spaces.lock().unwrap();
        cache.entry(degree).or_insert_with(|| Arc::new(FormSpace::new(&self.f, degree))).clone()
    }

    /// Basis of `H^0(mK)`.
    pub fn mcanonical_basis(&self, m: u32) -> Arc<FormSpace<K>> {
        self.form_space(self.canonical_degree(m))
    }

    fn gradient_vanishes(&self, p: &[K::Elem; 3]) -> bool {
        self.partials.iter().all(|g| self.field.is_zero(&g.eval(p)))
    }

    fn singular_error(&self, p: &[K::Elem; 3]) -> Error {
        let k = &self.field;
        Error::SingularCurve {
            witness: format!("({}:{}:{})", k.format_elem(&p[0]), k.format_elem(&p[1]), k.format_elem(&p[2])),
        }
    }

    /// Restrictions to 8 random lines must be nonzero and squarefree.
    fn irreducibility_screen(&self) -> Result<()> {
        let k = &self.field;
        let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_11);
        let mut checked = 0;
        let mut attempts = 0;
        while checked < 8 {
            attempts += 1;
            if attempts > 400 {
                return Err(Error::ReducibleCurve("no line section with squarefree restriction".into()));
            }
            let p = [k.random(&mut rng), k.random(&mut rng), k.random(&mut rng)];
            let v = [k.random(&mut rng), k.random(&mut rng), k.random(&mut rng)];
            let r = self.f.restrict_to_line(&p, &v);
            if r.is_zero() {
                return Err(Error::ReducibleCurve("contains a line".into()));
            }
            if r.degree() != Some(self.degree() as usize) {
                continue;
            }
            if !r.is_squarefree() {
                // a repeated factor shows up on every line; an accidental tangency does not
                if attempts > 40 && checked == 0 {
                    return Err(Error::ReducibleCurve("restriction to lines is never squarefree".into()));
                }
                continue;
            }
            checked += 1;
        }
        Ok(())
    }

    fn exhaustive_scan(&mut self) -> Result<()> {
        let k = self.field.clone();
        let q = k.order().expect("finite field");
        let elems: Vec<K::Elem> = (0..q).map(|i| k.element(i)).collect();
        let mut affine = Vec::new();
        let (zero, one) = (k.zero(), k.one());
        for x in &elems {
            let r = self.f.restrict_to_line(&[x.clone(), zero.clone(), one.clone()], &[zero.clone(), one.clone(), zero.clone()]);
            for y in &elems {
                if k.is_zero(&r.eval(y)) {
                    let p = [x.clone(), y.clone(), one.clone()];
                    if self.gradient_vanishes(&p) {
                        return Err(self.singular_error(&p));
                    }
                    affine.push(p);
                }
            }
        }
        let mut at_infinity = 0;
        let mut line: Vec<[K::Elem; 3]> = elems.iter().map(|x| [x.clone(), one.clone(), zero.clone()]).collect();
        line.push([one.clone(), zero.clone(), zero.clone()]);
        for p in &line {
            if k.is_zero(&self.f.eval(p)) {
                if self.gradient_vanishes(p) {
                    return Err(self.singular_error(p));
                }
                at_infinity += 1;
            }
        }
        self.affine_points = Some(affine);
        self.points_at_infinity = at_infinity;
        Ok(())
    }

    fn sampled_check(&self) -> Result<()> {
        let k = &self.field;
        let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_12);
        for p in self.search_affine_points(64, &mut rng) {
            if self.gradient_vanishes(&p) {
                return Err(self.singular_error(&p));
            }
        }
        let mut tangencies = 0;
        for _ in 0..1000 {
            let p = [k.random(&mut rng), k.random(&mut rng), k.random(&mut rng)];
            let v = [k.random(&mut rng), k.random(&mut rng), k.random(&mut rng)];
            let r = self.f.restrict_to_line(&p, &v);
            if r.is_zero() {
                return Err(Error::ReducibleCurve("contains a line".into()));
            }
            if !r.is_squarefree() {
                tangencies += 1;
            }
        }
        // random lines are tangent with probability about 1/p per line; a singular
        // component forces a repeated root on a positive fraction of lines
        if tangencies > 100 {
            return Err(Error::SingularCurve { witness: format!("{tangencies}/1000 random line sections with repeated roots") });
        }
        Ok(())
    }

    /// Affine points found by evaluating random vertical sections.
    fn search_affine_points(&self, n: usize, rng: &mut ChaCha8Rng) -> Vec<[K::Elem; 3]> {
        let k = &self.field;
        let Some(q) = k.order() else { return Vec::new() };
        let mut out: Vec<[K::Elem; 3]> = Vec::new();
        let (zero, one) = (k.zero(), k.one());
        let mut xs: Vec<u64> = (0..q).collect();
        xs.shuffle(rng);
        for xi in xs {
            if out.len() >= n {
                break;
            }
            let x = k.element(xi);
            let r = self.f.restrict_to_line(&[x.clone(), zero.clone(), one.clone()], &[zero.clone(), one.clone(), zero.clone()]);
            if r.is_zero() {
                continue;
            }
            for yi in 0..q {
                let y = k.element(yi);
                if k.is_zero(&r.eval(&y)) {
                    out.push([x.clone(), y, one.clone()]);
                }
            }
        }
        out.truncate(n);
        out
    }

    /// Validates and normalizes a projective point, choosing its chart.
    pub fn point(&self, coords: [K::Elem; 3]) -> Result<CurvePoint<K>> {
        let k = &self.field;
        let show = || format!("({}:{}:{})", k.format_elem(&coords[0]), k.format_elem(&coords[1]), k.format_elem(&coords[2]));
        let zinv = k
            .inv(&coords[2])
            .ok_or_else(|| Error::ChartFailure(format!("{} lies at infinity; only the chart z=1 is supported", show())))?;
        let c = [k.mul(&coords[0], &zinv), k.mul(&coords[1], &zinv), k.one()];
        if !k.is_zero(&self.f.eval(&c)) {
            return Err(Error::PointNotOnCurve(show()));
        }
        let chart = if !k.is_zero(&self.partials[1].eval(&c)) {
            Chart::X
        } else if !k.is_zero(&self.partials[0].eval(&c)) {
            Chart::Y
        } else {
            return Err(Error::ChartFailure(show()));
        };
        Ok(CurvePoint { coords: c, chart })
    }

    /// Up to `n` distinct smooth affine rational points, deterministic in `seed`.
    pub fn find_points(&self, n: usize, seed: u64) -> Result<Vec<CurvePoint<K>>> {
        if n == 0 {
            return Ok(Vec::new());
        }
        if self.field.order().is_none() {
            return Err(Error::Precondition("points over the rationals must be supplied explicitly".into()));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let raw = match &self.affine_points {
            Some(all) => {
                let mut all = all.clone();
                all.shuffle(&mut rng);
                all.truncate(n);
                all
            }
            None => self.search_affine_points(n, &mut rng),
        };
        if raw.len() < n {
            return Err(Error::NotEnoughPoints { found: raw.len(), requested: n });
        }
        raw.into_iter().map(|c| self.point(c)).collect()
    }

    /// All affine rational points (exhaustive mode only), in scan order.
    pub fn all_affine_points(&self) -> Option<Vec<CurvePoint<K>>> {
        let pts = self.affine_points.as_ref()?;
        pts.iter().map(|c| self.point(c.clone()).ok()).collect()
    }

    pub fn local_expansion(&self, p: &CurvePoint<K>, precision: i64) -> Result<LocalExpansion<K>> {
        LocalExpansion::new(&self.f, p, precision)
    }

    /// Local coefficient `q(t)` with `ω_A = q(t) (dt)^m` at `p`.
    pub fn expand_form(&self, p: &CurvePoint<K>, a: &Form<K>, m: u32, precision: i64) -> Result<crate::series::LaurentSeries<K>> {
        if a.degree() != self.canonical_degree(m) {
            return Err(Error::Precondition(format!("form of degree {} is not an adjoint form for m = {m}", a.degree())));
        }
        Ok(self.local_expansion(p, precision)?.expand_form(a, m))
    }

    /// Evaluation of the basis of `H^0(mK)` at `p`, scaled by the chart trivialization.
    pub fn evaluate_basis(&self, p: &CurvePoint<K>, m: u32) -> Vec<K::Elem> {
        let space = self.mcanonical_basis(m);
        let k = &self.field;
        let u = if p.chart == Chart::X { self.partials[1].eval(&p.coords) } else { k.neg(&self.partials[0].eval(&p.coords)) };
        let scale = k.pow(&k.inv(&u).expect("chart derivative"), m as u64);
        space.basis_monomials().iter().map(|e| k.mul(&Form::monomial(k, *e).eval(&p.coords), &scale)).collect()
    }

    /// A random point of the plane off the curve.
    pub fn random_point_off_curve<R: Rng>(&self, rng: &mut R) -> [K::Elem; 3] {
        let k = &self.field;
        loop {
            let v = [k.random(rng), k.random(rng), k.random(rng)];
            if !k.is_zero(&self.f.eval(&v)) {
                return v;
            }
        }
    }

    /// `F(p + u v) / u` for `p` on the curve.
    pub fn residual_on_line(&self, p: &[K::Elem; 3], v: &[K::Elem; 3]) -> UniPoly<K> {
        let r = self.f.restrict_to_line(p, v);
        let c = r.coeffs();
        debug_assert!(c.is_empty() || self.field.is_zero(&c[0]));
        UniPoly::new(&self.field, c.iter().skip(1).cloned().collect())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::PrimeField;

    fn k() -> PrimeField {
        PrimeField::new(101).unwrap()
    }

    fn curve(src: &str) -> Result<PlaneCurve<PrimeField>> {
        PlaneCurve::new(&Poly::parse(&k(), &["x", "y", "z"], src)?, None)
    }

    #[test]
    fn genus_from_degree() {
        assert_eq!(curve("x^6+y^6+z^6").unwrap().genus(), 10);
        assert_eq!(curve("x^4+y^4+z^4").unwrap().genus(), 3);
    }

    #[test]
    fn singular_curve_is_rejected_with_witness() {
        match curve("x^6+y^6") {
            Err(Error::SingularCurve { witness }) => assert_eq!(witness, "(0:0:1)"),
            Err(Error::ReducibleCurve(_)) => {}
            other => panic!("expected rejection, got {other:?}"),
        }
        assert!(matches!(curve("x^3+y^3+z^3"), Err(Error::DegreeTooSmall(3))));
        assert!(matches!(curve("x^4+y^3*z+z"), Err(Error::NotHomogeneous)));
        // node at the origin
        assert!(matches!(curve("x^4+y^4+x*y*z^2"), Err(Error::SingularCurve { .. })));
    }

    #[test]
    fn fermat_point_count_matches_full_scan() {
        // for p = 2 mod 3 the sextic is the conic u^2+v^2+w^2 under u = x^3, so it has p + 1 points
        let c = curve("x^6+y^6+z^6").unwrap();
        assert_eq!(c.rational_point_count(), Some(102));
        let pts = c.find_points(20, 7).unwrap();
        assert_eq!(pts.len(), 20);
        for p in &pts {
            assert_eq!(c.equation().eval(&p.coords), 0);
        }
        let again = c.find_points(20, 7).unwrap();
        assert_eq!(pts, again);
        assert!(c.find_points(0, 1).unwrap().is_empty());
        assert!(matches!(c.find_points(500, 1), Err(Error::NotEnoughPoints { found: 100, requested: 500 })));
    }

    #[test]
    fn no_points_over_a_tiny_field() {
        // x^4 + y^4 + 2 z^4 over F_5: fourth powers are 0 or 1, so no nonzero solution
        let k5 = PrimeField::new(5).unwrap();
        let f = Poly::parse(&k5, &["x", "y", "z"], "x^4+y^4+2*z^4").unwrap();
        let c = PlaneCurve::new(&f, None).unwrap_or_else(|e| panic!("{e}"));
        assert_eq!(c.rational_point_count(), Some(0));
        assert!(matches!(c.find_points(1, 0), Err(Error::NotEnoughPoints { found: 0, requested: 1 })));
    }

    #[test]
    fn local_expansion_satisfies_equation_and_implicit_derivative() {
        let c = curve("x^6+y^6+z^6+3*x^2*y^3*z").unwrap();
        for p in c.find_points(10, 1).unwrap() {
            let e = c.local_expansion(&p, 12).unwrap();
            let g = local::eval_affine(c.equation(), &e.x, &e.y);
            assert!(g.is_zero(), "F does not vanish on the branch at {p:?}");
            let fx = e.eval_form(&c.equation().partial(0));
            let fy = e.eval_form(&c.equation().partial(1));
            match p.chart {
                Chart::X => {
                    let implicit = fx.div(&fy).unwrap().scale(&k().from_i64(-1));
                    let dy = e.y.derivative();
                    let prec = dy.precision().min(implicit.precision());
                    assert!(dy.with_precision(prec).sub(&implicit.with_precision(prec)).is_zero());
                }
                Chart::Y => {
                    let implicit = fy.div(&fx).unwrap().scale(&k().from_i64(-1));
                    let dx = e.x.derivative();
                    let prec = dx.precision().min(implicit.precision());
                    assert!(dx.with_precision(prec).sub(&implicit.with_precision(prec)).is_zero());
                }
            }
        }
    }

    #[test]
    fn expand_form_constant_term_and_multiplicativity() {
        let k = k();
        let c = curve("x^6+y^6+z^6").unwrap();
        let p = c.find_points(1, 4).unwrap().remove(0);
        let basis = c.mcanonical_basis(1);
        for i in 0..basis.dim() {
            let a = basis.basis_form(i);
            let q = c.expand_form(&p, &a, 1, 6).unwrap();
            let fy = c.equation().partial(1).eval(&p.coords);
            if p.chart == Chart::X {
                assert_eq!(q.coeff(0).unwrap(), k.div(&a.eval(&p.coords), &fy).unwrap());
            }
            for j in 0..basis.dim() {
                let b = basis.basis_form(j);
                let qb = c.expand_form(&p, &b, 1, 6).unwrap();
                let qab = c.expand_form(&p, &a.mul(&b), 2, 6).unwrap();
                assert!(qab.sub(&q.mul(&qb)).is_zero());
            }
        }
        assert_eq!(c.evaluate_basis(&p, 1).len(), 10);
    }

    #[test]
    fn expand_form_valuation_bound() {
        let k = k();
        let c = curve("x^6+y^6+z^6").unwrap();
        let p = c.find_points(5, 11).unwrap().into_iter().find(|p| p.chart == Chart::X).unwrap();
        // (x - x0 z)^2 z vanishes to order 2 in t = x - x0
        let l = Form::linear(&k, [1, 0, k.neg(p.x())]);
        let a = l.mul(&l).mul(&Form::monomial(&k, [0, 0, 1]));
        let q = c.expand_form(&p, &a, 1, 8).unwrap();
        assert!(q.valuation().unwrap() >= 2);
    }
}
