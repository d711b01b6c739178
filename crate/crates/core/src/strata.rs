//! Rank strata, bicanonical coordinates and secant-span membership.

use crate::cohomology::{cup_matrix, ks_from_tails, CanonicalRing, KSClass, TailEntry, TailRep};
use crate::curve::CurvePoint;
use crate::error::{Error, Result};
use crate::field::Field;
use crate::linalg::{dot, projective_normalize, Matrix, Subspace, Vector};

#[derive(Clone, Debug, PartialEq)]
pub struct StratumReport<K: Field> {
    pub rank: usize,
    pub w_dim: usize,
    /// Whether `ξ` lies in `Σ_r \ Σ_{r-1}` for the queried `r`.
    pub in_open_stratum: Option<bool>,
    /// Support and orders of the tail representative, a divisor `D` with `ξ ∈ L_D`.
    pub secant_witness: Option<Vec<(CurvePoint<K>, usize)>>,
}

pub fn stratum<K: Field>(ring: &CanonicalRing<K>, xi: &KSClass<K>, query: Option<usize>) -> StratumReport<K> {
    let cup = cup_matrix(ring, xi);
    let report = StratumReport {
        rank: cup.rank,
        w_dim: cup.w.dim(),
        in_open_stratum: query.map(|r| cup.rank == r),
        secant_witness: xi.tails.as_ref().map(|t| t.entries.iter().map(|e| (e.point.clone(), e.order())).collect()),
    };
    debug_assert_eq!(report.rank + report.w_dim, ring.genus());
    report
}

/// Image of `p` under the bicanonical map, projectively normalized.
pub fn bicanonical_coords<K: Field>(ring: &CanonicalRing<K>, p: &CurvePoint<K>) -> Vector<K> {
    projective_normalize(ring.field(), &ring.curve().evaluate_basis(p, 2))
}

#[derive(Clone, Debug, PartialEq)]
pub struct SecantMembership<K: Field> {
    pub member: bool,
    /// For each point, the coefficients of its order-`1..m` tail functionals.
    pub coefficients: Option<Vec<Vector<K>>>,
}

/// Whether `ξ` lies in the span `L_D` of the tail functionals of `D = Σ m_i p_i`.
pub fn secant_membership<K: Field>(
    ring: &CanonicalRing<K>,
    xi: &KSClass<K>,
    points: &[CurvePoint<K>],
    orders: &[usize],
) -> Result<SecantMembership<K>> {
    let k = ring.field();
    if points.len() != orders.len() {
        return Err(Error::Precondition("one order per point required".into()));
    }
    let total: usize = orders.iter().sum();
    if total > ring.bicanonical_dim() {
        return Err(Error::Precondition(format!("divisor degree {total} exceeds 3g-3")));
    }
    let mut cols = Vec::with_capacity(total);
    for (p, &m) in points.iter().zip(orders) {
        for j in 1..=m {
            let mut coeffs = vec![k.zero(); j];
            coeffs[j - 1] = k.one();
            let tails = TailRep::new(k, vec![TailEntry { point: p.clone(), coeffs }])?;
            cols.push(ks_from_tails(ring, tails, "")?.functional);
        }
    }
    let a = Matrix::from_cols(k, ring.bicanonical_dim(), &cols);
    Ok(match a.solve(&xi.functional) {
        Some(sol) => {
            let mut it = sol.into_iter();
            let coefficients = orders.iter().map(|&m| it.by_ref().take(m).collect()).collect();
            SecantMembership { member: true, coefficients: Some(coefficients) }
        }
        None => SecantMembership { member: false, coefficients: None },
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct Rank1Geometry<K: Field> {
    pub base_point: CurvePoint<K>,
    /// `W_ξ` equals the forms vanishing at the base point.
    pub w_equals_delta_h0: bool,
}

/// Finds the base point of a rank-one class among the tail support,
/// the supplied points and (for scanned curves) all rational points.
pub fn rank1_geometry<K: Field>(ring: &CanonicalRing<K>, xi: &KSClass<K>, points: &[CurvePoint<K>]) -> Result<Rank1Geometry<K>> {
    let k = ring.field();
    let cup = cup_matrix(ring, xi);
    if cup.rank != 1 {
        return Err(Error::Precondition(format!("rank-one class required, rank is {}", cup.rank)));
    }
    let w = cup.w;
    let mut candidates: Vec<CurvePoint<K>> = xi.tails.as_ref().map(TailRep::points).unwrap_or_default();
    candidates.extend(points.iter().cloned());
    candidates.extend(ring.curve().all_affine_points().unwrap_or_default());
    for p in candidates {
        let ev = ring.curve().evaluate_basis(&p, 1);
        if w.basis().iter().all(|b| k.is_zero(&dot(k, b, &ev))) {
            let delta = Subspace::from_vectors(k, ring.genus(), &[ev]).annihilator();
            return Ok(Rank1Geometry { base_point: p, w_equals_delta_h0: delta == w });
        }
    }
    Err(Error::BasePointNotFound { residual_dim: w.dim() })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cohomology::schiffer;
    use crate::curve::PlaneCurve;
    use crate::field::PrimeField;
    use crate::linalg::lin_comb;
    use crate::poly::Poly;
    use std::sync::Arc;

    fn ring() -> CanonicalRing<PrimeField> {
        let k = PrimeField::new(101).unwrap();
        let c = PlaneCurve::new(&Poly::parse(&k, &["x", "y", "z"], "x^6+y^6+z^6").unwrap(), None).unwrap();
        CanonicalRing::new(Arc::new(c))
    }

    #[test]
    fn stratum_of_secant_classes() {
        let r = ring();
        let k = *r.field();
        let pts = r.curve().find_points(4, 21).unwrap();
        let zero = KSClass::from_functional(vec![0; 27], "zero");
        assert_eq!(stratum(&r, &zero, None).rank, 0);
        let s = schiffer(&r, &pts[0]).unwrap();
        assert_eq!(stratum(&r, &s, Some(1)).in_open_stratum, Some(true));
        let entries = pts.iter().zip([3u64, 5, 7, 11]).map(|(p, c)| TailEntry { point: p.clone(), coeffs: vec![c] }).collect();
        let xi = ks_from_tails(&r, TailRep::new(&k, entries).unwrap(), "secant").unwrap();
        let rep = stratum(&r, &xi, None);
        assert_eq!(rep.rank, 4);
        assert_eq!(rep.w_dim, 6);
        assert_eq!(rep.secant_witness.unwrap().len(), 4);
    }

    #[test]
    fn bicanonical_coords_separate_points() {
        let r = ring();
        let pts = r.curve().find_points(12, 2).unwrap();
        let coords: Vec<_> = pts.iter().map(|p| bicanonical_coords(&r, p)).collect();
        for i in 0..coords.len() {
            for j in i + 1..coords.len() {
                assert_ne!(coords[i], coords[j]);
            }
        }
        let s = schiffer(&r, &pts[0]).unwrap();
        assert_eq!(projective_normalize(r.field(), &s.functional), coords[0]);
    }

    #[test]
    fn membership_examples() {
        let r = ring();
        let k = *r.field();
        let pts = r.curve().find_points(2, 6).unwrap();
        let sp = schiffer(&r, &pts[0]).unwrap();
        let sq = schiffer(&r, &pts[1]).unwrap();
        let own = secant_membership(&r, &sp, &pts[..1], &[1]).unwrap();
        assert!(own.member);
        assert_eq!(own.coefficients.unwrap(), vec![vec![1]]);
        assert!(!secant_membership(&r, &sp, &pts[1..], &[1]).unwrap().member);
        let combo = lin_comb(&k, 27, &[2, 3], &[sp.functional.clone(), sq.functional.clone()]);
        let m = secant_membership(&r, &KSClass::from_functional(combo, "c"), &pts, &[1, 1]).unwrap();
        assert_eq!(m.coefficients.unwrap(), vec![vec![2], vec![3]]);
    }

    #[test]
    fn rank_one_base_point_is_the_support() {
        let r = ring();
        for p in r.curve().find_points(5, 30).unwrap() {
            let s = schiffer(&r, &p).unwrap();
            let geo = rank1_geometry(&r, &s, &[]).unwrap();
            assert_eq!(geo.base_point.coords, p.coords);
            assert!(geo.w_equals_delta_h0);
        }
        let pts = r.curve().find_points(2, 31).unwrap();
        let k = *r.field();
        let entries = pts.iter().map(|p| TailEntry { point: p.clone(), coeffs: vec![1] }).collect();
        let two = ks_from_tails(&r, TailRep::new(&k, entries).unwrap(), "two").unwrap();
        assert!(matches!(rank1_geometry(&r, &two, &[]), Err(Error::Precondition(_))));
    }
}
