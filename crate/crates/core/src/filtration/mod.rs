//! The `α^(2)` pairing on `W_ξ` and the filtration it induces.
//!
//! For `φ ∈ W = W_ξ` the filtration is `W^0 = W` and
//! `W^{i+1} = {ψ ∈ W^i : α^(2)(φ, ψ) ∈ W^i}`; its length `l` is the first
//! index with `W^{l+1} = W^l`.

mod alpha2;
mod gpp;
mod sl2;
mod synthetic;

pub use alpha2::{alpha2_table, splitting_shift, verify_cocycle, Alpha2Table};
pub use gpp::{gpp_check, GppReport, GppVerdict};
pub use sl2::{nilpotent_and_sl2, MultiplicityComparison, Sl2Report};
pub use synthetic::{synthetic_table, SyntheticTable};

use crate::error::{Error, Result};
use crate::field::Field;
use crate::linalg::{lin_comb, preimage, vec_is_zero, Matrix, Subspace, Vector};

/// An antisymmetric bilinear map `W x W -> H^0(K)` given on a basis of `W`.
#[derive(Clone, Debug, PartialEq)]
pub struct Alpha2Values<K: Field> {
    field: K,
    ambient: usize,
    w: Subspace<K>,
    basis: Vec<Vector<K>>,
    /// `values[i][j] = α^(2)(basis_i, basis_j)`.
    values: Vec<Vec<Vector<K>>>,
    /// `w x ambient`: coordinates in `basis` of a vector of `W`.
    coords: Matrix<K>,
}

impl<K: Field> Alpha2Values<K> {
    pub fn new(field: &K, ambient: usize, basis: Vec<Vector<K>>, values: Vec<Vec<Vector<K>>>) -> Result<Self> {
        let w = Subspace::from_vectors(field, ambient, &basis);
        if w.dim() != basis.len() {
            return Err(Error::Precondition("basis of W is not independent".into()));
        }
        let n = basis.len();
        if values.len() != n || values.iter().any(|r| r.len() != n) {
            return Err(Error::Precondition("value table must be square".into()));
        }
        for i in 0..n {
            if !vec_is_zero(field, &values[i][i]) {
                return Err(Error::InvariantViolation(format!("α^(2) table has nonzero diagonal entry {i}")));
            }
            for j in 0..i {
                let s: Vector<K> = values[i][j].iter().zip(&values[j][i]).map(|(a, b)| field.add(a, b)).collect();
                if !vec_is_zero(field, &s) {
                    return Err(Error::InvariantViolation(format!("α^(2) table not antisymmetric at ({i}, {j})")));
                }
            }
        }
        // coordinates: restrict to the pivot entries, then invert on the basis
        let piv = w.pivots().to_vec();
        let r = Matrix::from_cols(field, n, &basis.iter().map(|b| piv.iter().map(|&p| b[p].clone()).collect()).collect::<Vec<_>>());
        let rinv = r.inverse().expect("basis restricted to pivots is invertible");
        let mut select = Matrix::zeros(field, n, ambient);
        for (row, &p) in piv.iter().enumerate() {
            select.set(row, p, field.one());
        }
        let coords = rinv.mul(&select);
        Ok(Alpha2Values { field: field.clone(), ambient, w, basis, values, coords })
    }

    pub fn field(&self) -> &K {
        &self.field
    }
    pub fn ambient_dim(&self) -> usize {
        self.ambient
    }
    pub fn w(&self) -> &Subspace<K> {
        &self.w
    }
    pub fn basis(&self) -> &[Vector<K>] {
        &self.basis
    }
    pub fn value(&self, i: usize, j: usize) -> &Vector<K> {
        &self.values[i][j]
    }

    /// Coordinates of `v ∈ W` in the table basis.
    pub fn coordinates(&self, v: &[K::Elem]) -> Option<Vector<K>> {
        self.w.contains(v).then(|| self.coords.apply(v))
    }

    /// `α^(2)(u, v)` for `u, v ∈ W`.
    pub fn pair(&self, u: &[K::Elem], v: &[K::Elem]) -> Result<Vector<K>> {
        let k = &self.field;
        let cu = self.coordinates(u).ok_or(Error::PhiNotInW)?;
        let cv = self.coordinates(v).ok_or(Error::PhiNotInW)?;
        let mut out = vec![k.zero(); self.ambient];
        for (i, a) in cu.iter().enumerate() {
            if k.is_zero(a) {
                continue;
            }
            let row = lin_comb(k, self.ambient, &cv, &self.values[i]);
            for (o, x) in out.iter_mut().zip(row) {
                *o = k.mul_add(o, a, &x);
            }
        }
        Ok(out)
    }

    /// Matrix of `ψ -> α^(2)(φ, ψ)`, valid on `W` (extended by zero off the pivots).
    pub fn phi_operator(&self, phi: &[K::Elem]) -> Result<Matrix<K>> {
        let k = &self.field;
        let c = self.coordinates(phi).ok_or(Error::PhiNotInW)?;
        let n = self.basis.len();
        let cols: Vec<Vector<K>> = (0..n)
            .map(|j| {
                let col: Vec<Vector<K>> = (0..n).map(|i| self.values[i][j].clone()).collect();
                lin_comb(k, self.ambient, &c, &col)
            })
            .collect();
        Ok(Matrix::from_cols(k, self.ambient, &cols).mul(&self.coords))
    }
}

/// A complement of `b` inside `a`, chosen greedily from the RREF basis of `a`.
pub fn quotient_basis<K: Field>(a: &Subspace<K>, b: &Subspace<K>) -> Vec<Vector<K>> {
    let mut span = b.clone();
    let mut out = Vec::new();
    for v in a.basis() {
        if span.contains(&v) {
            continue;
        }
        let mut vs = span.basis();
        vs.push(v.clone());
        span = Subspace::from_vectors(a.field(), a.ambient_dim(), &vs);
        out.push(v);
    }
    out
}

/// Coordinates of `v ∈ span(complement) ⊕ b` along `complement`.
pub(crate) fn quotient_coords<K: Field>(k: &K, v: &[K::Elem], complement: &[Vector<K>], b: &Subspace<K>) -> Option<Vector<K>> {
    let mut cols = complement.to_vec();
    cols.extend(b.basis());
    if cols.is_empty() {
        return vec_is_zero(k, v).then(Vec::new);
    }
    let m = Matrix::from_cols(k, v.len(), &cols);
    m.solve(v).map(|x| x[..complement.len()].to_vec())
}

/// The `([ξ], [φ])`-filtration of `W`.
#[derive(Clone, Debug)]
pub struct XiPhiFiltration<K: Field> {
    pub phi: Vector<K>,
    /// `W^0 ⊋ W^1 ⊋ ... ⊋ W^l` (the stationary step is not repeated).
    pub chain: Vec<Subspace<K>>,
    /// Lifts of a basis of `Gr^i = W^i / W^{i+1}` for `i < l`.
    pub graded_bases: Vec<Vec<Vector<K>>>,
    /// `gr c^(i): Gr^i -> Gr^{i-1}` for `1 <= i <= l-1`, in the graded bases; entry `i-1`.
    pub graded_maps: Vec<Matrix<K>>,
    pub length: usize,
    /// `h^i = dim Gr^i` for `i < l` and `h^l = dim W^l`.
    pub partition: Vec<usize>,
}

impl<K: Field> XiPhiFiltration<K> {
    pub fn chain_dims(&self) -> Vec<usize> {
        self.chain.iter().map(Subspace::dim).collect()
    }
}

pub fn xi_phi_filtration<K: Field>(table: &Alpha2Values<K>, phi: &[K::Elem]) -> Result<XiPhiFiltration<K>> {
    let k = table.field();
    if vec_is_zero(k, phi) {
        return Err(Error::Precondition("φ must be nonzero".into()));
    }
    let op = table.phi_operator(phi)?;
    let mut chain = vec![table.w().clone()];
    loop {
        let wi = chain.last().unwrap();
        let next = wi.intersect(&preimage(&op, wi));
        if &next == wi {
            break;
        }
        chain.push(next);
    }
    let l = chain.len() - 1;
    let graded_bases: Vec<Vec<Vector<K>>> = (0..l).map(|i| quotient_basis(&chain[i], &chain[i + 1])).collect();
    let mut graded_maps = Vec::new();
    for i in 1..l {
        let cols = graded_bases[i]
            .iter()
            .map(|v| {
                let img = op.apply(v);
                quotient_coords(k, &img, &graded_bases[i - 1], &chain[i])
                    .ok_or_else(|| Error::InvariantViolation(format!("α^(2)(φ, W^{i}) is not contained in W^{}", i - 1)))
            })
            .collect::<Result<Vec<_>>>()?;
        let m = Matrix::from_cols(k, graded_bases[i - 1].len(), &cols);
        if m.rank() != graded_bases[i].len() {
            return Err(Error::InvariantViolation(format!("gr c^({i}) is not injective")));
        }
        graded_maps.push(m);
    }
    let mut partition: Vec<usize> = graded_bases.iter().map(Vec::len).collect();
    partition.push(chain[l].dim());
    if !chain[l].contains(phi) {
        return Err(Error::InvariantViolation("φ is not in the last filtration step".into()));
    }
    if partition.iter().sum::<usize>() != table.w().dim() {
        return Err(Error::InvariantViolation("partition does not sum to dim W".into()));
    }
    for i in 0..l.saturating_sub(1) {
        if partition[i] < partition[i + 1] {
            return Err(Error::InvariantViolation(format!("h^{i} < h^{}", i + 1)));
        }
    }
    Ok(XiPhiFiltration { phi: phi.to_vec(), chain, graded_bases, graded_maps, length: l, partition })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::PrimeField;

    #[test]
    fn pairing_is_bilinear_and_antisymmetric() {
        let k = PrimeField::new(101).unwrap();
        // W = span(e0, e1) in F^3 with α(e0, e1) = e2
        let b = vec![vec![1, 0, 0], vec![1, 1, 0]];
        let v = vec![vec![vec![0, 0, 0], vec![0, 0, 1]], vec![vec![0, 0, 100], vec![0, 0, 0]]];
        let t = Alpha2Values::new(&k, 3, b, v).unwrap();
        assert_eq!(t.pair(&[1, 0, 0], &[0, 1, 0]).unwrap(), vec![0, 0, 1]);
        assert_eq!(t.pair(&[0, 1, 0], &[1, 0, 0]).unwrap(), vec![0, 0, 100]);
        assert_eq!(t.pair(&[2, 3, 0], &[2, 3, 0]).unwrap(), vec![0, 0, 0]);
        let op = t.phi_operator(&[1, 0, 0]).unwrap();
        assert_eq!(op.apply(&[0, 5, 0]), vec![0, 0, 5]);
        let f = xi_phi_filtration(&t, &[1, 0, 0]).unwrap();
        // e1 leaves W, so W^1 = span(e0) and the chain is stationary there
        assert_eq!(f.length, 1);
        assert_eq!(f.partition, vec![1, 1]);
        assert!(matches!(t.pair(&[0, 0, 1], &[1, 0, 0]), Err(Error::PhiNotInW)));
    }

    #[test]
    fn asymmetric_table_is_rejected() {
        let k = PrimeField::new(101).unwrap();
        let b = vec![vec![1, 0], vec![0, 1]];
        let v = vec![vec![vec![0, 0], vec![1, 0]], vec![vec![1, 0], vec![0, 0]]];
        assert!(matches!(Alpha2Values::new(&k, 2, b, v), Err(Error::InvariantViolation(_))));
    }
}
