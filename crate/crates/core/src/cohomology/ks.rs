//! Kodaira-Spencer classes as functionals and as Laurent tails.

use std::collections::HashSet;

use crate::curve::{CurvePoint, PlaneCurve};
use crate::error::{Error, Result};
use crate::field::Field;
use crate::linalg::{Matrix, Subspace, Vector};

use super::CanonicalRing;

/// Principal part `(Σ_m c_m t^{-m}) (dt)^{-1}` at a point; `coeffs[m-1] = c_m`.
#[derive(Clone, Debug, PartialEq)]
pub struct TailEntry<K: Field> {
    pub point: CurvePoint<K>,
    pub coeffs: Vec<K::Elem>,
}

impl<K: Field> TailEntry<K> {
    pub fn order(&self) -> usize {
        self.coeffs.len()
    }
}

/// A repartition supported at finitely many rational points.
#[derive(Clone, Debug, PartialEq)]
pub struct TailRep<K: Field> {
    pub entries: Vec<TailEntry<K>>,
}

impl<K: Field> TailRep<K> {
    /// Checks that points are distinct and top coefficients nonzero.
    pub fn new(field: &K, entries: Vec<TailEntry<K>>) -> Result<Self> {
        let mut seen = HashSet::new();
        for e in &entries {
            if !seen.insert(e.point.coords.clone()) {
                return Err(Error::Precondition(format!("tail point {} repeated", e.point.display(field))));
            }
            match e.coeffs.last() {
                Some(c) if !field.is_zero(c) => {}
                _ => return Err(Error::Precondition(format!("tail at {} has zero top coefficient", e.point.display(field)))),
            }
        }
        Ok(TailRep { entries })
    }

    pub fn max_order(&self) -> usize {
        self.entries.iter().map(TailEntry::order).max().unwrap_or(0)
    }

    /// Total pole order `Σ m_p`.
    pub fn total_order(&self) -> usize {
        self.entries.iter().map(TailEntry::order).sum()
    }

    pub fn points(&self) -> Vec<CurvePoint<K>> {
        self.entries.iter().map(|e| e.point.clone()).collect()
    }
}

/// `ξ ∈ H^0(2K)*` with an optional tail representative.
#[derive(Clone, Debug, PartialEq)]
pub struct KSClass<K: Field> {
    pub functional: Vector<K>,
    pub tails: Option<TailRep<K>>,
    pub label: String,
}

impl<K: Field> KSClass<K> {
    pub fn from_functional(functional: Vector<K>, label: impl Into<String>) -> Self {
        KSClass { functional, tails: None, label: label.into() }
    }

    pub fn is_zero(&self, k: &K) -> bool {
        self.functional.iter().all(|c| k.is_zero(c))
    }
}

/// The residue pairing of a tail representative with the bicanonical basis.
pub fn ks_from_tails<K: Field>(ring: &CanonicalRing<K>, tails: TailRep<K>, label: impl Into<String>) -> Result<KSClass<K>> {
    let k = ring.field();
    let n2 = ring.bicanonical_dim();
    let k2 = ring.bicanonical_space();
    let mut functional = vec![k.zero(); n2];
    for e in &tails.entries {
        let exp = ring.curve().local_expansion(&e.point, e.order() as i64 + 4)?;
        for (b, out) in functional.iter_mut().enumerate() {
            let q = exp.expand_form(&k2.basis_form(b), 2);
            for (m, c) in e.coeffs.iter().enumerate() {
                *out = k.mul_add(out, c, &q.coeff(m as i64)?);
            }
        }
    }
    Ok(KSClass { functional, tails: Some(tails), label: label.into() })
}

/// The Schiffer class at `p`: a simple tail with coefficient one.
pub fn schiffer<K: Field>(ring: &CanonicalRing<K>, p: &CurvePoint<K>) -> Result<KSClass<K>> {
    let k = ring.field();
    let tails = TailRep::new(k, vec![TailEntry { point: p.clone(), coeffs: vec![k.one()] }])?;
    ks_from_tails(ring, tails, format!("schiffer{}", p.display(k)))
}

/// Writes a functional as a combination of Schiffer classes at rational points.
///
/// Points are taken in the order returned by `find_points(seed)` and kept
/// greedily while their bicanonical images are independent, until they span
/// `H^0(2K)*`; points in `avoid` are skipped.
pub fn realize_functional<K: Field>(
    ring: &CanonicalRing<K>,
    functional: &[K::Elem],
    seed: u64,
    avoid: &[CurvePoint<K>],
) -> Result<TailRep<K>> {
    let k = ring.field();
    let n2 = ring.bicanonical_dim();
    let curve: &PlaneCurve<K> = ring.curve();
    let want = 4 * n2;
    let candidates = match curve.find_points(want, seed) {
        Ok(p) => p,
        Err(Error::NotEnoughPoints { found, .. }) if found > 0 => curve.find_points(found, seed)?,
        Err(e) => return Err(e),
    };
    let mut chosen: Vec<(CurvePoint<K>, Vector<K>)> = Vec::new();
    let mut span = Subspace::zero(k, n2);
    for p in candidates {
        if chosen.len() == n2 {
            break;
        }
        if avoid.iter().any(|a| a.coords == p.coords) {
            continue;
        }
        let ev = curve.evaluate_basis(&p, 2);
        if span.contains(&ev) {
            continue;
        }
        let mut vs = span.basis();
        vs.push(ev.clone());
        span = Subspace::from_vectors(k, n2, &vs);
        chosen.push((p, ev));
    }
    if chosen.len() < n2 {
        return Err(Error::GenericityFailure(format!(
            "bicanonical images of the available rational points span only {} of {n2} dimensions",
            chosen.len()
        )));
    }
    let cols: Vec<Vector<K>> = chosen.iter().map(|(_, ev)| ev.clone()).collect();
    let coeffs = Matrix::from_cols(k, n2, &cols).solve(functional).expect("points span the dual space");
    let entries = chosen
        .into_iter()
        .zip(coeffs)
        .filter(|(_, c)| !k.is_zero(c))
        .map(|((point, _), c)| TailEntry { point, coeffs: vec![c] })
        .collect();
    TailRep::new(k, entries)
}

/// All `ξ` with `U ⊆ W_ξ`: the annihilator of `U · H^0(K)` in `H^0(2K)*`.
pub fn ks_annihilating<K: Field>(ring: &CanonicalRing<K>, u: &Subspace<K>) -> Subspace<K> {
    let k = ring.field();
    let g = ring.genus();
    let mut vs = Vec::new();
    for b in u.basis() {
        for j in 0..g {
            let mut e = vec![k.zero(); g];
            e[j] = k.one();
            vs.push(ring.multiply(&b, &e));
        }
    }
    Subspace::from_vectors(k, ring.bicanonical_dim(), &vs).annihilator()
}

#[cfg(test)]
mod tests {
    use super::super::tests::ring;
    use super::super::cup_matrix;
    use super::*;
    use crate::linalg::{dot, vec_add};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn simple_tail_is_bicanonical_evaluation() {
        let r = ring("x^6+y^6+z^6");
        for p in r.curve().find_points(5, 2).unwrap() {
            let xi = schiffer(&r, &p).unwrap();
            assert_eq!(xi.functional, r.curve().evaluate_basis(&p, 2));
        }
    }

    #[test]
    fn tails_are_linear() {
        let r = ring("x^6+y^6+z^6+2*x^3*y^2*z");
        let k = r.field().clone();
        let pts = r.curve().find_points(2, 5).unwrap();
        let a = TailEntry { point: pts[0].clone(), coeffs: vec![3, 7] };
        let b = TailEntry { point: pts[1].clone(), coeffs: vec![5] };
        let xa = ks_from_tails(&r, TailRep::new(&k, vec![a.clone()]).unwrap(), "a").unwrap();
        let xb = ks_from_tails(&r, TailRep::new(&k, vec![b.clone()]).unwrap(), "b").unwrap();
        let xab = ks_from_tails(&r, TailRep::new(&k, vec![a, b]).unwrap(), "ab").unwrap();
        assert_eq!(xab.functional, vec_add(&k, &xa.functional, &xb.functional));
    }

    #[test]
    fn order_two_tail_is_first_derivative() {
        // the t^1 coefficient of q_b equals the derivative of the evaluation along the branch
        let r = ring("x^6+y^6+z^6");
        let k = r.field().clone();
        let p = r.curve().find_points(1, 3).unwrap().remove(0);
        let xi = ks_from_tails(&r, TailRep::new(&k, vec![TailEntry { point: p.clone(), coeffs: vec![0, 1] }]).unwrap(), "d").unwrap();
        let exp = r.curve().local_expansion(&p, 6).unwrap();
        for b in 0..r.bicanonical_dim() {
            let q = exp.expand_form(&r.bicanonical_space().basis_form(b), 2);
            assert_eq!(xi.functional[b], q.derivative().coeff(0).unwrap());
        }
    }

    #[test]
    fn schiffer_class_has_rank_one_and_vanishing_kernel() {
        let r = ring("x^6+y^6+z^6");
        let p = r.curve().find_points(1, 8).unwrap().remove(0);
        let cup = cup_matrix(&r, &schiffer(&r, &p).unwrap());
        assert_eq!(cup.rank, 1);
        let canon = r.curve().evaluate_basis(&p, 1);
        for w in cup.w.basis() {
            assert_eq!(dot(r.field(), &w, &canon), 0);
        }
    }

    #[test]
    fn annihilator_examples() {
        let r = ring("x^6+y^6+z^6");
        let k = r.field().clone();
        assert_eq!(ks_annihilating(&r, &Subspace::zero(&k, 10)).dim(), 27);
        assert_eq!(ks_annihilating(&r, &Subspace::full(&k, 10)).dim(), 0);
        let p = r.curve().find_points(1, 1).unwrap().remove(0);
        let ev = r.curve().evaluate_basis(&p, 1);
        let u = Subspace::from_vectors(&k, 10, &[ev]).annihilator();
        assert_eq!(u.dim(), 9);
        let ann = ks_annihilating(&r, &u);
        assert_eq!(ann.dim(), 1);
        assert!(ann.contains(&schiffer(&r, &p).unwrap().functional));
    }

    #[test]
    fn realized_functional_reproduces_itself() {
        let r = ring("x^6+y^6+z^6");
        let k = r.field().clone();
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        let f: Vec<u64> = (0..27).map(|_| k.random(&mut rng)).collect();
        let tails = realize_functional(&r, &f, 4, &[]).unwrap();
        let xi = ks_from_tails(&r, tails, "realized").unwrap();
        assert_eq!(xi.functional, f);
    }
}
