//! ψ-strings, quadrics through the canonical curve with exact certificates,
//! and the Hankel matrices of a string.
//!
//! A quadric is a symmetric `g x g` matrix `Q` on the canonical basis. Its
//! certificate is the identity `Σ Q_ij ω_i ω_j = G F` of plane forms, checked
//! by exact division; when `2(d-3) < d` no cofactor exists and the sum must
//! vanish identically.

use crate::cohomology::CanonicalRing;
use crate::error::{Error, Result};
use crate::field::Field;
use crate::filtration::{quotient_basis, Alpha2Values};
use crate::linalg::{vec_is_zero, Matrix, Subspace, Vector};
use crate::poly::Form;

/// `ψ^(k), ψ^(k-1), ..., ψ^(0)` with `ψ^(i-1) = α^(2)(φ, ψ^(i))`.
///
/// The string is continued as long as its last element is a nonzero vector
/// of `W`, so `ψ^(0)` is the first element outside `W` when the string exits.
#[derive(Clone, Debug, PartialEq)]
pub struct PsiString<K: Field> {
    pub phi: Vector<K>,
    /// Descending: `psis[0] = ψ^(k)`.
    pub psis: Vec<Vector<K>>,
    pub in_w: Vec<bool>,
}

impl<K: Field> PsiString<K> {
    /// The top index `k`.
    pub fn top(&self) -> usize {
        self.psis.len() - 1
    }
    /// `ψ^(i)`.
    pub fn psi(&self, i: usize) -> &Vector<K> {
        &self.psis[self.top() - i]
    }
    fn psi_in_w(&self, i: usize) -> bool {
        self.in_w[self.top() - i]
    }
}

/// Iterates `α^(2)(φ, ·)` from `ψ_start` while the current element is a
/// nonzero vector of `W`, producing at most `max_len` elements.
pub fn psi_string<K: Field>(table: &Alpha2Values<K>, phi: &[K::Elem], start: &[K::Elem], max_len: usize) -> Result<PsiString<K>> {
    let k = table.field();
    if !table.w().contains(phi) || !table.w().contains(start) {
        return Err(Error::PhiNotInW);
    }
    let mut psis = vec![start.to_vec()];
    let mut in_w = vec![true];
    while psis.len() < max_len.max(1) && *in_w.last().unwrap() && !vec_is_zero(k, psis.last().unwrap()) {
        let next = table.pair(phi, psis.last().unwrap())?;
        in_w.push(table.w().contains(&next));
        psis.push(next);
    }
    Ok(PsiString { phi: phi.to_vec(), psis, in_w })
}

/// `(a b^T + b a^T) / 2`.
pub fn sym_product<K: Field>(k: &K, a: &[K::Elem], b: &[K::Elem]) -> Matrix<K> {
    let n = a.len();
    let half = k.inv(&k.from_i64(2)).expect("characteristic is not 2");
    let mut m = Matrix::zeros(k, n, n);
    for i in 0..n {
        for j in 0..n {
            let v = k.add(&k.mul(&a[i], &b[j]), &k.mul(&a[j], &b[i]));
            m.set(i, j, k.mul(&v, &half));
        }
    }
    m
}

/// A quadric with its ideal-membership certificate.
#[derive(Clone, Debug, PartialEq)]
pub struct QuadricCert<K: Field> {
    pub q: Matrix<K>,
    /// `G` with `Σ Q_ij ω_i ω_j = G F`; `None` when `2(d-3) < d`.
    pub cofactor: Option<Form<K>>,
    pub verified: bool,
}

impl<K: Field> QuadricCert<K> {
    /// Builds the certificate by exact division.
    pub fn new(ring: &CanonicalRing<K>, q: Matrix<K>) -> Result<Self> {
        if !q.is_symmetric() {
            return Err(Error::CertificateFailure("quadric matrix is not symmetric".into()));
        }
        let poly = evaluate(ring, &q);
        let f = ring.curve().equation();
        let cofactor = if poly.degree() < f.degree() {
            if !poly.is_zero() {
                return Err(Error::CertificateFailure("quadric does not vanish identically and has no cofactor degree".into()));
            }
            None
        } else if poly.is_zero() {
            Some(Form::zero(ring.field(), poly.degree() - f.degree()))
        } else {
            Some(poly.div_exact(f).ok_or_else(|| Error::CertificateFailure("F does not divide the quadric".into()))?)
        };
        let mut cert = QuadricCert { q, cofactor, verified: false };
        cert.verified = cert.check(ring);
        if !cert.verified {
            return Err(Error::CertificateFailure("certificate identity does not hold".into()));
        }
        Ok(cert)
    }

    /// Re-checks `Σ Q_ij ω_i ω_j = G F` from the stored data.
    pub fn check(&self, ring: &CanonicalRing<K>) -> bool {
        let poly = evaluate(ring, &self.q);
        match &self.cofactor {
            None => poly.is_zero(),
            Some(g) => poly.sub(&g.mul(ring.curve().equation())).is_zero(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.q.is_zero()
    }
}

/// `Σ Q_ij ω_i ω_j` as a plane form of degree `2(d-3)`.
fn evaluate<K: Field>(ring: &CanonicalRing<K>, q: &Matrix<K>) -> Form<K> {
    let k = ring.field();
    let g = ring.genus();
    let basis: Vec<Form<K>> = (0..g).map(|i| ring.canonical_space().basis_form(i)).collect();
    let mut acc = Form::zero(k, 2 * ring.curve().canonical_degree(1));
    for i in 0..g {
        let row: Vec<K::Elem> = (0..g).map(|j| q.get(i, j).clone()).collect();
        if vec_is_zero(k, &row) {
            continue;
        }
        let lin = Form::combination(k, ring.curve().canonical_degree(1), &row, &basis);
        acc = acc.add(&basis[i].mul(&lin));
    }
    acc
}

/// `sym(χ ⊗ G(φ,ψ)) - sym(ψ ⊗ G(φ,χ)) + sym(φ ⊗ G(ψ,χ))`, a quadric through `C`
/// by the cocycle identity.
pub fn triple_quadric<K: Field>(
    ring: &CanonicalRing<K>,
    table: &Alpha2Values<K>,
    phi: &[K::Elem],
    psi: &[K::Elem],
    chi: &[K::Elem],
) -> Result<QuadricCert<K>> {
    QuadricCert::new(ring, triple_tensor(table, phi, psi, chi)?)
}

fn triple_tensor<K: Field>(table: &Alpha2Values<K>, phi: &[K::Elem], psi: &[K::Elem], chi: &[K::Elem]) -> Result<Matrix<K>> {
    let k = table.field();
    let a = sym_product(k, chi, &table.pair(phi, psi)?);
    let b = sym_product(k, psi, &table.pair(phi, chi)?);
    let c = sym_product(k, phi, &table.pair(psi, chi)?);
    Ok(a.sub(&b).add(&c))
}

/// `Q_ij = ψ^(i) ψ^(j+1) - ψ^(j) ψ^(i+1) + φ h_ij` with `h_ij = α^(2)(ψ^(i+1), ψ^(j+1))`.
#[derive(Clone, Debug, PartialEq)]
pub struct StringQuadric<K: Field> {
    pub i: usize,
    pub j: usize,
    pub h: Vector<K>,
    pub cert: QuadricCert<K>,
    /// The ascending-index form `φ_a φ_{b+1} - φ_b φ_{a+1} - φ α^(2)(φ_a, φ_b)`
    /// with `φ_p = ψ^(k+1-p)`, `a = k-j`, `b = k-i`, equals this quadric.
    pub ascending_form_agrees: bool,
}

/// All `Q_ij` for `0 <= i < j <= k-1`.
pub fn quadrics_qij<K: Field>(ring: &CanonicalRing<K>, table: &Alpha2Values<K>, string: &PsiString<K>) -> Result<Vec<StringQuadric<K>>> {
    let top = string.top();
    let mut out = Vec::new();
    for j in 0..top {
        for i in 0..j {
            out.push(string_quadric(ring, table, string, i, j)?);
        }
    }
    Ok(out)
}

pub fn string_quadric<K: Field>(
    ring: &CanonicalRing<K>,
    table: &Alpha2Values<K>,
    string: &PsiString<K>,
    i: usize,
    j: usize,
) -> Result<StringQuadric<K>> {
    let (q, h, ascending_form_agrees) = qij_tensor(table, string, i, j)?;
    Ok(StringQuadric { i, j, h, cert: QuadricCert::new(ring, q)?, ascending_form_agrees })
}

/// `Q_ij`, `h_ij` and whether the ascending-index form agrees, without a curve.
/// Checks `Q_ij = T(φ, ψ^(i+1), ψ^(j+1))` for the triple quadric `T`.
pub fn qij_tensor<K: Field>(table: &Alpha2Values<K>, string: &PsiString<K>, i: usize, j: usize) -> Result<(Matrix<K>, Vector<K>, bool)> {
    let k = table.field();
    let top = string.top();
    if i >= j {
        return Err(Error::Precondition(format!("Q_ij needs i < j, got ({i}, {j})")));
    }
    if j + 1 > top {
        return Err(Error::IndexOutsideW(j + 1));
    }
    for idx in [i + 1, j + 1] {
        if !string.psi_in_w(idx) {
            return Err(Error::IndexOutsideW(idx));
        }
    }
    let phi = &string.phi;
    let h = table.pair(string.psi(i + 1), string.psi(j + 1))?;
    let q = sym_product(k, string.psi(i), string.psi(j + 1))
        .sub(&sym_product(k, string.psi(j), string.psi(i + 1)))
        .add(&sym_product(k, phi, &h));
    if q != triple_tensor(table, phi, string.psi(i + 1), string.psi(j + 1))? {
        return Err(Error::InvariantViolation(format!("Q_{i}{j} differs from the triple quadric")));
    }
    // ascending indexing
    let asc = |p: usize| string.psi(top + 1 - p);
    let (a, b) = (top - j, top - i);
    let eq_form = sym_product(k, asc(a), asc(b + 1))
        .sub(&sym_product(k, asc(b), asc(a + 1)))
        .sub(&sym_product(k, phi, &table.pair(asc(a), asc(b))?));
    let agrees = eq_form == q;
    Ok((q, h, agrees))
}

/// Rank of a family of quadrics as vectors in `S^2 H^0(K)`.
pub fn quadric_span_rank<K: Field>(k: &K, quadrics: &[&Matrix<K>]) -> usize {
    let rows: Vec<Vector<K>> = quadrics
        .iter()
        .map(|q| {
            let n = q.rows();
            (0..n).flat_map(|i| (i..n).map(move |j| (i, j))).map(|(i, j)| q.get(i, j).clone()).collect()
        })
        .collect();
    match rows.first() {
        Some(r) => Matrix::from_rows(k, r.len(), &rows).rank(),
        None => 0,
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct HankelData<K: Field> {
    /// `2 x k` entries in coordinates of `H^0(K) / Cφ`: top row `ψ^(k-1) .. ψ^(0)`,
    /// bottom row `ψ^(k) .. ψ^(1)`.
    pub rows: [Vec<Vector<K>>; 2],
    pub hankel_ok: bool,
    /// `{φ, ψ^(k), ..., ψ^(0)}` is linearly independent.
    pub independent: bool,
    /// Length of the longest independent prefix `φ, ψ^(k), ...`.
    pub independent_prefix: usize,
    /// Every minor of columns `(i, j)` equals `Q_ij - sym(φ ⊗ h_ij)`.
    pub minor_identity_ok: bool,
}

pub fn hankel_data<K: Field>(table: &Alpha2Values<K>, string: &PsiString<K>) -> Result<HankelData<K>> {
    let k = table.field();
    if string.psis.len() < 3 {
        return Err(Error::StringTooShort(string.psis.len()));
    }
    let g = table.ambient_dim();
    let top = string.top();
    let line = Subspace::from_vectors(k, g, &[string.phi.clone()]);
    let comp = quotient_basis(&Subspace::full(k, g), &line);
    let mod_phi = |v: &[K::Elem]| crate::filtration::quotient_coords(k, v, &comp, &line).expect("complement spans the quotient");
    let top_row: Vec<Vector<K>> = (0..top).rev().map(|i| mod_phi(string.psi(i))).collect();
    let bottom_row: Vec<Vector<K>> = (1..=top).rev().map(|i| mod_phi(string.psi(i))).collect();
    let hankel_ok = (0..top - 1).all(|c| bottom_row[c + 1] == top_row[c]);

    let mut vs = vec![string.phi.clone()];
    let mut independent_prefix = 1;
    for p in &string.psis {
        vs.push(p.clone());
        if Subspace::from_vectors(k, g, &vs).dim() == vs.len() {
            independent_prefix = vs.len();
        } else {
            break;
        }
    }
    let independent = independent_prefix == string.psis.len() + 1;

    let mut minor_identity_ok = true;
    for j in 0..top {
        for i in 0..j {
            let minor = sym_product(k, string.psi(i), string.psi(j + 1)).sub(&sym_product(k, string.psi(j), string.psi(i + 1)));
            let h = table.pair(string.psi(i + 1), string.psi(j + 1))?;
            let q = triple_tensor(table, &string.phi, string.psi(i + 1), string.psi(j + 1))?;
            if q.sub(&sym_product(k, &string.phi, &h)) != minor {
                minor_identity_ok = false;
            }
        }
    }
    Ok(HankelData { rows: [top_row, bottom_row], hankel_ok, independent, independent_prefix, minor_identity_ok })
}

/// `dim I_C(2)` and the expected `binom(g-2, 2)`.
pub fn ic2_check<K: Field>(ring: &CanonicalRing<K>) -> (usize, usize) {
    let g = ring.genus();
    let expected = if g >= 2 { (g - 2) * (g.saturating_sub(3)) / 2 } else { 0 };
    (ring.ic2_dim(), expected)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cohomology::{ks_from_tails, tests::ring, MlOptions, TailEntry, TailRep};
    use crate::filtration::{alpha2_table, synthetic_table, xi_phi_filtration};
    use crate::field::PrimeField;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;
    use std::sync::Arc;

    #[test]
    fn ic2_matches_binomial() {
        for (src, dim) in [("x^4+y^4+z^4", 0), ("x^5+y^5+z^5", 6), ("x^6+y^6+z^6", 28)] {
            let (got, expected) = ic2_check(&ring(src));
            assert_eq!((got, expected), (dim, dim));
        }
    }

    #[test]
    fn triple_quadrics_on_secant_class() {
        let r = Arc::new(ring("x^6+y^6+z^6+x^3*y*z^2"));
        let k = *r.field();
        let pts = r.curve().find_points(4, 3).unwrap();
        let entries = pts.iter().zip([1u64, 2, 3, 4]).map(|(p, c)| TailEntry { point: p.clone(), coeffs: vec![c] }).collect();
        let xi = ks_from_tails(&r, TailRep::new(&k, entries).unwrap(), "sec").unwrap();
        let t = alpha2_table(&r, &xi, None, MlOptions::default()).unwrap();
        let w = t.values.w().clone();
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for _ in 0..10 {
            let v: Vec<Vec<u64>> = (0..3).map(|_| w.combine(&(0..w.dim()).map(|_| k.random(&mut rng)).collect::<Vec<_>>())).collect();
            let c = triple_quadric(&r, &t.values, &v[0], &v[1], &v[2]).unwrap();
            assert!(c.verified && c.check(&r));
            assert_eq!(c.cofactor.as_ref().unwrap().degree(), 0);
        }
        let b = t.w_basis();
        assert!(triple_quadric(&r, &t.values, &b[0], &b[1], &b[1]).unwrap().is_zero());
    }

    #[test]
    fn quartic_quadrics_vanish_identically() {
        let r = Arc::new(ring("x^4+y^4+z^4+x*y^2*z"));
        let k = *r.field();
        let pts = r.curve().find_points(1, 1).unwrap();
        let tails = TailRep::new(&k, vec![TailEntry { point: pts[0].clone(), coeffs: vec![1] }]).unwrap();
        let xi = ks_from_tails(&r, tails, "s").unwrap();
        let t = alpha2_table(&r, &xi, None, MlOptions::default()).unwrap();
        let b = t.w_basis();
        let c = triple_quadric(&r, &t.values, &b[0], &b[1], &b[0]).unwrap();
        assert!(c.cofactor.is_none() && c.is_zero());
    }

    #[test]
    fn bad_certificate_is_rejected() {
        let r = ring("x^6+y^6+z^6");
        let mut q = Matrix::zeros(r.field(), 10, 10);
        q.set(0, 0, 1);
        assert!(matches!(QuadricCert::new(&r, q), Err(Error::CertificateFailure(_))));
    }

    #[test]
    fn synthetic_string_and_hankel() {
        let k = PrimeField::new(101).unwrap();
        let s = synthetic_table(&k, &[4], 5).unwrap();
        let f = xi_phi_filtration(&s.table, &s.phi).unwrap();
        let head = f.graded_bases[3][0].clone();
        let st = psi_string(&s.table, &s.phi, &head, 10).unwrap();
        assert_eq!(st.psis.len(), 5);
        assert_eq!(st.in_w, vec![true, true, true, true, false]);
        // strictly descending filtration levels
        for (i, lvl) in (0..=3).rev().enumerate() {
            assert!(f.chain[lvl].contains(&st.psis[i]));
            assert!(!f.chain[lvl + 1].contains(&st.psis[i]));
        }
        let h = hankel_data(&s.table, &st).unwrap();
        assert!(h.hankel_ok && h.independent && h.minor_identity_ok);
        assert_eq!(h.rows[0].len(), 4);

        let mut n = 0;
        for j in 0..st.top() {
            for i in 0..j {
                let (_, _, agrees) = qij_tensor(&s.table, &st, i, j).unwrap();
                assert!(agrees);
                n += 1;
            }
        }
        assert_eq!(n, 6);

        let short = psi_string(&s.table, &s.phi, &s.phi, 10).unwrap();
        assert_eq!(short.psis.len(), 2);
        assert!(matches!(hankel_data(&s.table, &short), Err(Error::StringTooShort(2))));
    }

    #[test]
    fn string_quadric_indices() {
        let k = PrimeField::new(101).unwrap();
        let s = synthetic_table(&k, &[3], 1).unwrap();
        let f = xi_phi_filtration(&s.table, &s.phi).unwrap();
        let st = psi_string(&s.table, &s.phi, &f.graded_bases[2][0], 10).unwrap();
        assert_eq!(st.top(), 3);
        assert_eq!(st.psi(3), &f.graded_bases[2][0]);
        // ψ^(0) leaves W, so j + 1 = 3 is the largest usable index
        let r = ring("x^6+y^6+z^6");
        assert!(matches!(string_quadric(&r, &s.table, &st, 1, 1), Err(Error::Precondition(_))));
        assert!(matches!(string_quadric(&r, &s.table, &st, 0, 3), Err(Error::IndexOutsideW(4))));
    }
}
