//! Multiplication maps, Kodaira-Spencer classes and the cup product.
//!
//! A class `ξ ∈ H^1(Θ_C) = H^0(2K)*` is stored as a functional on the
//! bicanonical basis, optionally with a Laurent-tail representative. The
//! cup product with `ξ` is the symmetric matrix `M[i][j] = ξ(ω_i ω_j)`.

mod ks;
mod ml;

use std::sync::Arc;

pub use ks::{ks_annihilating, ks_from_tails, realize_functional, schiffer, KSClass, TailEntry, TailRep};
pub use ml::{MlContext, MlOptions, RationalFn};

use crate::curve::{FormSpace, PlaneCurve};
use crate::field::Field;
use crate::linalg::{dot, Matrix, Subspace, Vector};
use crate::poly::Form;

/// A curve together with its canonical and bicanonical bases and the
/// multiplication table `H^0(K) x H^0(K) -> H^0(2K)`.
#[derive(Debug)]
pub struct CanonicalRing<K: Field> {
    curve: Arc<PlaneCurve<K>>,
    k1: Arc<FormSpace<K>>,
    k2: Arc<FormSpace<K>>,
    /// `products[i][j]` = coordinates of `ω_i ω_j` in `H^0(2K)`.
    products: Vec<Vec<Vector<K>>>,
}

impl<K: Field> CanonicalRing<K> {
    pub fn new(curve: Arc<PlaneCurve<K>>) -> Self {
        let k1 = curve.mcanonical_basis(1);
        let k2 = curve.mcanonical_basis(2);
        let g = k1.dim();
        let forms: Vec<Form<K>> = (0..g).map(|i| k1.basis_form(i)).collect();
        let mut products = vec![vec![Vec::new(); g]; g];
        for i in 0..g {
            for j in i..g {
                let v = k2.reduce(&forms[i].mul(&forms[j]));
                products[j][i] = v.clone();
                products[i][j] = v;
            }
        }
        CanonicalRing { curve, k1, k2, products }
    }

    pub fn curve(&self) -> &Arc<PlaneCurve<K>> {
        &self.curve
    }
    pub fn field(&self) -> &K {
        self.curve.field()
    }
    pub fn genus(&self) -> usize {
        self.k1.dim()
    }
    /// `dim H^0(2K)`.
    pub fn bicanonical_dim(&self) -> usize {
        self.k2.dim()
    }
    pub fn canonical_space(&self) -> &Arc<FormSpace<K>> {
        &self.k1
    }
    pub fn bicanonical_space(&self) -> &Arc<FormSpace<K>> {
        &self.k2
    }

    /// `ω_i ω_j` in `H^0(2K)` coordinates.
    pub fn product(&self, i: usize, j: usize) -> &Vector<K> {
        &self.products[i][j]
    }

    /// Product of two canonical forms given by coordinates.
    pub fn multiply(&self, a: &[K::Elem], b: &[K::Elem]) -> Vector<K> {
        let k = self.field();
        let mut out = vec![k.zero(); self.bicanonical_dim()];
        for (i, ai) in a.iter().enumerate() {
            if k.is_zero(ai) {
                continue;
            }
            for (j, bj) in b.iter().enumerate() {
                if k.is_zero(bj) {
                    continue;
                }
                let c = k.mul(ai, bj);
                for (o, p) in out.iter_mut().zip(&self.products[i][j]) {
                    *o = k.mul_add(o, &c, p);
                }
            }
        }
        out
    }

    /// The adjoint form of a canonical vector.
    pub fn canonical_form(&self, v: &[K::Elem]) -> Form<K> {
        self.k1.lift(v)
    }

    /// Matrix of `(A, B) -> A B` from `H^0(m1 K) ⊗ H^0(m2 K)` to `H^0((m1+m2) K)`;
    /// column `a * dim(m2) + b`.
    pub fn mult_map(&self, m1: u32, m2: u32) -> Matrix<K> {
        let k = self.field();
        let (s1, s2) = (self.curve.mcanonical_basis(m1), self.curve.mcanonical_basis(m2));
        let target = self.curve.mcanonical_basis(m1 + m2);
        let mut cols = Vec::with_capacity(s1.dim() * s2.dim());
        for a in 0..s1.dim() {
            let fa = s1.basis_form(a);
            for b in 0..s2.dim() {
                cols.push(target.reduce(&fa.mul(&s2.basis_form(b))));
            }
        }
        Matrix::from_cols(k, target.dim(), &cols)
    }

    /// Matrix of `S^2 H^0(K) -> H^0(2K)` on the monomials `ω_i ω_j`, `i <= j`.
    pub fn sym2_map(&self) -> Matrix<K> {
        let g = self.genus();
        let cols: Vec<Vector<K>> = (0..g).flat_map(|i| (i..g).map(move |j| (i, j))).map(|(i, j)| self.products[i][j].clone()).collect();
        Matrix::from_cols(self.field(), self.bicanonical_dim(), &cols)
    }

    /// Matrix of `S^3 H^0(K) -> H^0(3K)` on the monomials `ω_i ω_j ω_k`, `i <= j <= k`.
    pub fn sym3_map(&self) -> Matrix<K> {
        let g = self.genus();
        let k3 = self.curve.mcanonical_basis(3);
        let mut cols = Vec::new();
        for i in 0..g {
            for j in i..g {
                let fij = self.k1.basis_form(i).mul(&self.k1.basis_form(j));
                for l in j..g {
                    cols.push(k3.reduce(&fij.mul(&self.k1.basis_form(l))));
                }
            }
        }
        Matrix::from_cols(self.field(), k3.dim(), &cols)
    }

    /// `dim I_C(2)`: the kernel dimension of `S^2 H^0(K) -> H^0(2K)`.
    pub fn ic2_dim(&self) -> usize {
        let g = self.genus();
        g * (g + 1) / 2 - self.sym2_map().rank()
    }
}

/// The cup product with `ξ` and its kernel `W_ξ`.
#[derive(Clone, Debug)]
pub struct CupMatrix<K: Field> {
    pub matrix: Matrix<K>,
    pub rank: usize,
    pub w: Subspace<K>,
}

pub fn cup_matrix<K: Field>(ring: &CanonicalRing<K>, xi: &KSClass<K>) -> CupMatrix<K> {
    let k = ring.field();
    let g = ring.genus();
    let mut m = Matrix::zeros(k, g, g);
    for i in 0..g {
        for j in 0..g {
            m.set(i, j, dot(k, &xi.functional, ring.product(i, j)));
        }
    }
    assert!(m.is_symmetric(), "cup matrix must be symmetric");
    let w = m.kernel();
    CupMatrix { rank: g - w.dim(), matrix: m, w }
}
