//! Forms of a fixed degree modulo the curve equation.
//!
//! For a smooth plane curve `C = {F = 0}` of degree `d`, restriction gives
//! `H^0(O_C(D)) = S_D / F * S_{D-d}` for every `D >= 0`. A [`FormSpace`]
//! fixes a monomial basis of this quotient: the degree-`D` monomials that
//! are not divisible by the graded-lex leading monomial of `F`. These are
//! exactly the non-pivot columns of the RREF of the `F`-multiples, so
//! reduction is ordinary normal-form division by `F`.

use crate::field::Field;
use crate::linalg::Vector;
use crate::poly::{monomial_index, monomials, num_monomials, Form};

#[derive(Clone, Debug)]
pub struct FormSpace<K: Field> {
    field: K,
    degree: u32,
    /// Monomial exponents of the complement basis, in storage order.
    basis: Vec<[u32; 3]>,
    /// For each degree-`D` monomial, its position in `basis` if it is a basis monomial.
    position: Vec<Option<usize>>,
    f_terms: Vec<([u32; 3], K::Elem)>,
    f_lead: [u32; 3],
    f_lead_inv: K::Elem,
}

impl<K: Field> FormSpace<K> {
    pub fn new(f: &Form<K>, degree: u32) -> Self {
        let k = f.field().clone();
        let (_, f_lead, lc) = f.leading_term().expect("nonzero curve equation");
        let f_lead_inv = k.inv(&lc).expect("nonzero leading coefficient");
        let f_terms = f.terms().map(|(e, c)| (e, c.clone())).collect();
        let mut basis = Vec::new();
        let mut position = Vec::with_capacity(num_monomials(degree));
        for e in monomials(degree) {
            if divides(&f_lead, &e) {
                position.push(None);
            } else {
                position.push(Some(basis.len()));
                basis.push(e);
            }
        }
        FormSpace { field: k, degree, basis, position, f_terms, f_lead, f_lead_inv }
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    /// `dim H^0(O_C(D))`.
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis_monomials(&self) -> &[[u32; 3]] {
        &self.basis
    }

    /// Basis element `i` as a form.
    pub fn basis_form(&self, i: usize) -> Form<K> {
        Form::monomial(&self.field, self.basis[i])
    }

    /// Normal form of `a` modulo `F`, as a full coefficient vector of degree `D`.
    pub fn normal_form(&self, a: &Form<K>) -> Form<K> {
        assert_eq!(a.degree(), self.degree, "form has the wrong degree");
        let k = &self.field;
        let d = self.degree;
        let mut c = a.coeffs().to_vec();
        for (i, e) in monomials(d).into_iter().enumerate() {
            if self.position[i].is_some() || k.is_zero(&c[i]) {
                continue;
            }
            let q = k.neg(&k.mul(&c[i], &self.f_lead_inv));
            let s = [e[0] - self.f_lead[0], e[1] - self.f_lead[1], e[2] - self.f_lead[2]];
            for (fe, fc) in &self.f_terms {
                let j = monomial_index(d, s[0] + fe[0], s[1] + fe[1]);
                c[j] = k.mul_add(&c[j], &q, fc);
            }
        }
        Form::from_coeffs(k, d, c)
    }

    /// Coordinates of the class of `a` in the complement basis.
    pub fn reduce(&self, a: &Form<K>) -> Vector<K> {
        let nf = self.normal_form(a);
        let c = nf.coeffs();
        self.position.iter().zip(c).filter_map(|(p, x)| p.map(|_| x.clone())).collect()
    }

    /// The form `Σ v_i m_i` over the complement basis.
    pub fn lift(&self, v: &[K::Elem]) -> Form<K> {
        assert_eq!(v.len(), self.dim());
        let k = &self.field;
        let mut c = vec![k.zero(); num_monomials(self.degree)];
        for (x, e) in v.iter().zip(&self.basis) {
            c[monomial_index(self.degree, e[0], e[1])] = x.clone();
        }
        Form::from_coeffs(k, self.degree, c)
    }
}

fn divides(a: &[u32; 3], b: &[u32; 3]) -> bool {
    a[0] <= b[0] && a[1] <= b[1] && a[2] <= b[2]
}

/// `dim H^0(O_C(D))` for a smooth plane curve of degree `d`.
pub fn expected_dim(d: u32, degree: u32) -> usize {
    let lower = if degree >= d { num_monomials(degree - d) } else { 0 };
    num_monomials(degree) - lower
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::PrimeField;
    use crate::linalg::Matrix;
    use crate::poly::Poly;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn curve(src: &str) -> (PrimeField, Form<PrimeField>) {
        let k = PrimeField::new(101).unwrap();
        let f = Poly::parse(&k, &["x", "y", "z"], src).unwrap().to_form().unwrap();
        (k, f)
    }

    #[test]
    fn pluricanonical_dimensions() {
        let (_, f6) = curve("x^6+y^6+z^6");
        assert_eq!(FormSpace::new(&f6, 3).dim(), 10);
        assert_eq!(FormSpace::new(&f6, 6).dim(), 27);
        assert_eq!(FormSpace::new(&f6, 9).dim(), 45);
        let (_, f4) = curve("x^4+y^4+z^4");
        assert_eq!(FormSpace::new(&f4, 2).dim(), 6);
        let (_, f5) = curve("x^5+y^5+z^5");
        assert_eq!(FormSpace::new(&f5, 4).dim(), 15);
    }

    #[test]
    fn f_multiples_reduce_to_zero() {
        let (k, f) = curve("x^5+3*x*y^4-y^2*z^3+z^5+2*x^2*y*z^2");
        let space = FormSpace::new(&f, 7);
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..10 {
            let cs = (0..num_monomials(2)).map(|_| k.random(&mut rng)).collect();
            let g = Form::from_coeffs(&k, 2, cs);
            assert!(space.reduce(&f.mul(&g)).iter().all(|c| *c == 0));
        }
    }

    #[test]
    fn complement_matches_rref_pivots() {
        // the complement monomials are exactly the non-pivot columns of the F-multiples
        let (k, f) = curve("2*x^4+x*y^3+y^2*z^2-z^4+x*y*z^2");
        let deg = 6;
        let rows: Vec<Vector<PrimeField>> = monomials(deg - 4)
            .into_iter()
            .map(|e| Form::monomial(&k, e).mul(&f).into_coeffs())
            .collect();
        let m = Matrix::from_rows(&k, num_monomials(deg), &rows);
        let pivots = m.rref().pivots;
        let space = FormSpace::new(&f, deg);
        let nonpivot: Vec<[u32; 3]> = monomials(deg)
            .into_iter()
            .enumerate()
            .filter(|(i, _)| !pivots.contains(i))
            .map(|(_, e)| e)
            .collect();
        assert_eq!(space.basis_monomials(), nonpivot.as_slice());
        assert_eq!(space.dim(), expected_dim(4, deg));
    }

    #[test]
    fn lift_then_reduce_is_identity() {
        let (k, f) = curve("x^6+y^6+z^6");
        let space = FormSpace::new(&f, 8);
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let v: Vec<u64> = (0..space.dim()).map(|_| k.random(&mut rng)).collect();
        assert_eq!(space.reduce(&space.lift(&v)), v);
    }
}
