//! Mittag-Leffler problems with prescribed principal parts.
//!
//! Given a tail representative `ρ` of `ξ` and `φ ∈ W_ξ`, we look for a
//! rational function `f^φ = A / H` whose principal part at each support
//! point `p` equals that of `ρ_p · φ`. The denominator `H` is a product of
//! `m_p` random lines through each support point `p`, so `deg H = N = Σ m_p`
//! and `H` has a zero of order exactly `m_p` at `p` on the curve. For each
//! line `ℓ = {p + u v}` we have `F(p + u v) = u E(u)`; requiring `E | A(p + u v)`
//! cancels the residual zeros of `H`. The additive constant is fixed by
//! `A(aux) = 0` at an auxiliary curve point off all lines.

use std::sync::Arc;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::curve::{CurvePoint, FormSpace, PlaneCurve};
use crate::error::{Error, Result};
use crate::field::Field;
use crate::linalg::{Matrix, Vector};
use crate::poly::{Form, UniPoly};

use super::{CanonicalRing, TailRep};

#[derive(Clone, Copy, Debug)]
pub struct MlOptions {
    pub seed: u64,
    /// Random directions tried per line before giving up.
    pub line_attempts: usize,
}

impl Default for MlOptions {
    fn default() -> Self {
        MlOptions { seed: 0, line_attempts: 500 }
    }
}

#[derive(Clone, Debug)]
struct Line<K: Field> {
    support: usize,
    p: [K::Elem; 3],
    v: [K::Elem; 3],
    form: Form<K>,
    residual: UniPoly<K>,
}

/// `f = A / H` with `H` the product of `lines`.
#[derive(Clone, Debug, PartialEq)]
pub struct RationalFn<K: Field> {
    pub numerator: Form<K>,
    /// Coordinates of the numerator in the basis of `H^0(O_C(N))`.
    pub numerator_coords: Vector<K>,
    pub denominator: Form<K>,
    pub lines: Vec<Form<K>>,
    /// The point where `f` is normalized to vanish.
    pub aux: [K::Elem; 3],
}

/// Everything shared by the solves for a fixed `(C, ρ)`.
#[derive(Debug)]
pub struct MlContext<K: Field> {
    curve: Arc<PlaneCurve<K>>,
    canon: Arc<FormSpace<K>>,
    tails: TailRep<K>,
    lines: Vec<Line<K>>,
    h: Form<K>,
    aux: CurvePoint<K>,
    space: Arc<FormSpace<K>>,
    system: Matrix<K>,
    /// First row of the principal-part block.
    pp_offset: usize,
    /// Per tail entry and canonical basis form, the coefficients of `t^0..t^{m_p-1}`.
    canon_series: Vec<Vec<Vector<K>>>,
}

fn cross<K: Field>(k: &K, a: &[K::Elem; 3], b: &[K::Elem; 3]) -> [K::Elem; 3] {
    [
        k.sub(&k.mul(&a[1], &b[2]), &k.mul(&a[2], &b[1])),
        k.sub(&k.mul(&a[2], &b[0]), &k.mul(&a[0], &b[2])),
        k.sub(&k.mul(&a[0], &b[1]), &k.mul(&a[1], &b[0])),
    ]
}

fn eval_linear<K: Field>(k: &K, l: &[K::Elem; 3], x: &[K::Elem; 3]) -> K::Elem {
    k.add(&k.add(&k.mul(&l[0], &x[0]), &k.mul(&l[1], &x[1])), &k.mul(&l[2], &x[2]))
}

impl<K: Field> MlContext<K> {
    /// Chooses lines and the auxiliary point and assembles the linear system.
    pub fn new(ring: &CanonicalRing<K>, tails: &TailRep<K>, opts: MlOptions) -> Result<Self> {
        let curve = ring.curve().clone();
        let k = curve.field().clone();
        if tails.entries.is_empty() {
            return Err(Error::Precondition("Mittag-Leffler problem needs at least one tail".into()));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
        let supports: Vec<[K::Elem; 3]> = tails.entries.iter().map(|e| e.point.coords.clone()).collect();

        let aux = curve
            .find_points(tails.entries.len() + 1, opts.seed ^ 0xa0c5)?
            .into_iter()
            .find(|p| !supports.contains(&p.coords))
            .ok_or(Error::NotEnoughPoints { found: tails.entries.len(), requested: tails.entries.len() + 1 })?;

        let f = curve.equation();
        let mut lines: Vec<Line<K>> = Vec::new();
        for (si, e) in tails.entries.iter().enumerate() {
            let p = &e.point.coords;
            for _ in 0..e.order() {
                let mut found = None;
                for _ in 0..opts.line_attempts {
                    let v = curve.random_point_off_curve(&mut rng);
                    let l = cross(&k, p, &v);
                    let residual = curve.residual_on_line(p, &v);
                    if residual.degree() != Some(f.degree() as usize - 1)
                        || k.is_zero(&residual.eval(&k.zero()))
                        || !residual.is_squarefree()
                    {
                        continue;
                    }
                    if supports.iter().enumerate().any(|(j, q)| j != si && k.is_zero(&eval_linear(&k, &l, q))) {
                        continue;
                    }
                    if k.is_zero(&eval_linear(&k, &l, &aux.coords)) {
                        continue;
                    }
                    let clash = lines.iter().any(|other| {
                        let lo: [K::Elem; 3] = [other.form.coeffs()[0].clone(), other.form.coeffs()[1].clone(), other.form.coeffs()[2].clone()];
                        if other.support == si {
                            k.is_zero(&eval_linear(&k, &lo, &v))
                        } else {
                            k.is_zero(&f.eval(&cross(&k, &l, &lo)))
                        }
                    });
                    if clash {
                        continue;
                    }
                    found = Some(Line { support: si, p: p.clone(), v, form: Form::linear(&k, l), residual });
                    break;
                }
                match found {
                    Some(line) => lines.push(line),
                    None => {
                        return Err(Error::GenericityFailure(format!(
                            "no admissible line through {} after {} attempts",
                            e.point.display(&k),
                            opts.line_attempts
                        )))
                    }
                }
            }
        }

        let mut h = Form::monomial(&k, [0, 0, 0]);
        for l in &lines {
            h = h.mul(&l.form);
        }
        if k.is_zero(&h.eval(&aux.coords)) {
            return Err(Error::AuxPointIsPole);
        }
        let n = h.degree();
        let space = curve.form_space(n);
        let monos = space.basis_monomials().to_vec();
        let cols = monos.len();
        let mut rows: Vec<Vector<K>> = Vec::new();

        // (a) residual divisibility
        for line in &lines {
            let lin = |i: usize| UniPoly::new(&k, vec![line.p[i].clone(), line.v[i].clone()]);
            let pows = |l: UniPoly<K>| {
                let mut out = vec![UniPoly::new(&k, vec![k.one()])];
                for i in 0..n as usize {
                    let next = out[i].mul(&l).divrem(&line.residual).1;
                    out.push(next);
                }
                out
            };
            let (px, py, pz) = (pows(lin(0)), pows(lin(1)), pows(lin(2)));
            let r = line.residual.degree().unwrap();
            let mut block = vec![vec![k.zero(); cols]; r];
            for (c, e) in monos.iter().enumerate() {
                let rem = px[e[0] as usize].mul(&py[e[1] as usize]).mul(&pz[e[2] as usize]).divrem(&line.residual).1;
                for (i, x) in rem.coeffs().iter().enumerate() {
                    block[i][c] = x.clone();
                }
            }
            rows.extend(block);
        }

        // (b) principal parts of A/H at the support points
        let pp_offset = rows.len();
        let mut canon_series = Vec::with_capacity(tails.entries.len());
        for e in &tails.entries {
            let m = e.order() as i64;
            let exp = curve.local_expansion(&e.point, 2 * m + 4)?;
            let hs = exp.eval_form(&h);
            if hs.valuation() != Some(m) {
                return Err(Error::GenericityFailure(format!("denominator has the wrong order at {}", e.point.display(&k))));
            }
            let inv_h = hs.inv()?;
            let series = exp.monomial_series(&monos);
            let mut block = vec![vec![k.zero(); cols]; m as usize];
            for (c, s) in series.iter().enumerate() {
                let q = s.mul(&inv_h);
                for j in 1..=m {
                    block[(j - 1) as usize][c] = q.coeff(-j)?;
                }
            }
            rows.extend(block);
            let canon = ring.canonical_space();
            let cs: Vec<Vector<K>> = (0..canon.dim())
                .map(|b| {
                    let q = exp.expand_form(&canon.basis_form(b), 1);
                    (0..m).map(|i| q.coeff(i)).collect::<Result<Vec<_>>>()
                })
                .collect::<Result<_>>()?;
            canon_series.push(cs);
        }

        let homogeneous = Matrix::from_rows(&k, cols, &rows);
        let rank = homogeneous.rank();
        if rank + 1 != cols {
            return Err(Error::InvariantViolation(format!(
                "homogeneous Mittag-Leffler system has solution space of dimension {} (expected 1: the constants)",
                cols - rank
            )));
        }
        // (c) normalization
        rows.push(monos.iter().map(|e| Form::monomial(&k, *e).eval(&aux.coords)).collect());
        let system = Matrix::from_rows(&k, cols, &rows);

        Ok(MlContext {
            curve,
            canon: ring.canonical_space().clone(),
            tails: tails.clone(),
            lines,
            h,
            aux,
            space,
            system,
            pp_offset,
            canon_series,
        })
    }

    pub fn denominator(&self) -> &Form<K> {
        &self.h
    }
    pub fn numerator_space(&self) -> &Arc<FormSpace<K>> {
        &self.space
    }
    pub fn aux_point(&self) -> &CurvePoint<K> {
        &self.aux
    }
    pub fn tails(&self) -> &TailRep<K> {
        &self.tails
    }
    pub fn line_forms(&self) -> Vec<Form<K>> {
        self.lines.iter().map(|l| l.form.clone()).collect()
    }

    /// Coefficients of `t^{-1}, ..., t^{-m_p}` of `ρ_p φ` for each support point.
    pub fn target_principal_parts(&self, phi: &[K::Elem]) -> Vec<Vector<K>> {
        let k = self.curve.field();
        self.tails
            .entries
            .iter()
            .zip(&self.canon_series)
            .map(|(e, cs)| {
                let m = e.order();
                let q: Vec<K::Elem> = (0..m)
                    .map(|i| phi.iter().zip(cs).fold(k.zero(), |acc, (c, s)| k.mul_add(&acc, c, &s[i])))
                    .collect();
                (1..=m).map(|j| (j..=m).fold(k.zero(), |acc, mm| k.mul_add(&acc, &e.coeffs[mm - 1], &q[mm - j]))).collect()
            })
            .collect()
    }

    fn rhs(&self, phi: &[K::Elem]) -> Vector<K> {
        let k = self.curve.field();
        let mut b = vec![k.zero(); self.system.rows()];
        let mut r = self.pp_offset;
        for pp in self.target_principal_parts(phi) {
            for c in pp {
                b[r] = c;
                r += 1;
            }
        }
        b
    }

    /// Solves for every `φ` with one elimination; each result is re-verified.
    pub fn solve_many(&self, phis: &[Vector<K>]) -> Vec<Result<RationalFn<K>>> {
        assert!(phis.iter().all(|p| p.len() == self.canon.dim()), "phi must be a canonical vector");
        let rhs: Vec<Vector<K>> = phis.iter().map(|p| self.rhs(p)).collect();
        self.system
            .solve_many(&rhs)
            .into_iter()
            .zip(phis)
            .map(|(sol, phi)| {
                let coords = sol.ok_or(Error::NotInKernel)?;
                let f = self.rational_fn(coords);
                self.verify(&f, phi)?;
                Ok(f)
            })
            .collect()
    }

    pub fn solve(&self, phi: &[K::Elem]) -> Result<RationalFn<K>> {
        self.solve_many(&[phi.to_vec()]).pop().unwrap()
    }

    /// The rational function with numerator given by coordinates in `H^0(O_C(N))`.
    pub fn rational_fn(&self, coords: Vector<K>) -> RationalFn<K> {
        RationalFn {
            numerator: self.space.lift(&coords),
            numerator_coords: coords,
            denominator: self.h.clone(),
            lines: self.line_forms(),
            aux: self.aux.coords.clone(),
        }
    }

    /// Independent re-check: residual divisibility on every line and the
    /// principal parts by re-expanding `A / H` at every support point.
    pub fn verify(&self, f: &RationalFn<K>, phi: &[K::Elem]) -> Result<()> {
        let k = self.curve.field();
        for line in &self.lines {
            let r = f.numerator.restrict_to_line(&line.p, &line.v);
            if !r.divrem(&line.residual).1.is_zero() {
                return Err(Error::InvariantViolation("numerator does not cancel a residual zero of the denominator".into()));
            }
        }
        for (e, target) in self.tails.entries.iter().zip(self.target_principal_parts(phi)) {
            let m = e.order() as i64;
            let exp = self.curve.local_expansion(&e.point, 2 * m + 4)?;
            let q = exp.eval_form(&f.numerator).div(&exp.eval_form(&f.denominator))?;
            if q.valuation().is_some_and(|v| v < -m) {
                return Err(Error::InvariantViolation("pole order exceeds the tail order".into()));
            }
            for (j, t) in (1..=m).zip(&target) {
                if q.coeff(-j)? != *t {
                    return Err(Error::InvariantViolation(format!(
                        "principal part mismatch at {} in degree -{j}",
                        e.point.display(k)
                    )));
                }
            }
        }
        if !k.is_zero(&f.numerator.eval(&f.aux)) {
            return Err(Error::InvariantViolation("normalization at the auxiliary point failed".into()));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::super::tests::ring;
    use super::super::{cup_matrix, ks_from_tails, schiffer, TailEntry};
    use super::*;
    use crate::linalg::vec_is_zero;
    use rand::Rng;

    #[test]
    fn vanishing_phi_gives_zero_function() {
        let r = ring("x^6+y^6+z^6");
        let k = r.field().clone();
        let p = r.curve().find_points(1, 5).unwrap().remove(0);
        let xi = schiffer(&r, &p).unwrap();
        let ctx = MlContext::new(&r, xi.tails.as_ref().unwrap(), MlOptions::default()).unwrap();
        let w = cup_matrix(&r, &xi).w;
        for phi in w.basis() {
            let f = ctx.solve(&phi).unwrap();
            assert!(vec_is_zero(&k, &f.numerator_coords));
        }
    }

    #[test]
    fn membership_agrees_with_cup_matrix() {
        let r = ring("x^6+y^6+z^6+x^2*y^3*z");
        let k = r.field().clone();
        let pts = r.curve().find_points(3, 9).unwrap();
        let tails = TailRep::new(
            &k,
            vec![
                TailEntry { point: pts[0].clone(), coeffs: vec![4, 1] },
                TailEntry { point: pts[1].clone(), coeffs: vec![9] },
                TailEntry { point: pts[2].clone(), coeffs: vec![2, 0, 5] },
            ],
        )
        .unwrap();
        let xi = ks_from_tails(&r, tails.clone(), "mixed").unwrap();
        let cup = cup_matrix(&r, &xi);
        let ctx = MlContext::new(&r, &tails, MlOptions { seed: 3, ..Default::default() }).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for trial in 0..20 {
            let phi: Vec<u64> = if trial % 2 == 0 {
                let c: Vec<u64> = (0..cup.w.dim()).map(|_| rng.gen_range(0..101)).collect();
                cup.w.combine(&c)
            } else {
                (0..10).map(|_| rng.gen_range(0..101)).collect()
            };
            let in_w = vec_is_zero(&k, &cup.matrix.apply(&phi));
            match ctx.solve(&phi) {
                Ok(_) => assert!(in_w),
                Err(Error::NotInKernel) => assert!(!in_w),
                Err(e) => panic!("{e}"),
            }
        }
    }
}
