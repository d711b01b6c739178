//! Dense matrices over an exact field.
//!
//! Matrices act on column vectors: `M x`. Vectors are plain `Vec<K::Elem>`.

use std::fmt;

use rand::Rng;

use crate::field::Field;

pub type Vector<K> = Vec<<K as Field>::Elem>;

#[derive(Clone, PartialEq)]
pub struct Matrix<K: Field> {
    field: K,
    rows: usize,
    cols: usize,
    data: Vec<K::Elem>,
}

/// Result of row reduction.
#[derive(Clone, Debug)]
pub struct Rref<K: Field> {
    pub rank: usize,
    pub reduced: Matrix<K>,
    pub pivots: Vec<usize>,
}

impl<K: Field> fmt::Debug for Matrix<K> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Matrix {}x{} over {}", self.rows, self.cols, self.field.describe())?;
        for r in 0..self.rows {
            let row: Vec<String> = self.row(r).iter().map(|a| self.field.format_elem(a)).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        Ok(())
    }
}

impl<K: Field> Matrix<K> {
    pub fn zeros(field: &K, rows: usize, cols: usize) -> Self {
        Matrix { field: field.clone(), rows, cols, data: vec![field.zero(); rows * cols] }
    }

    pub fn identity(field: &K, n: usize) -> Self {
        let mut m = Self::zeros(field, n, n);
        for i in 0..n {
            m.set(i, i, field.one());
        }
        m
    }

    /// Builds a matrix from row vectors; all rows must share a length.
    pub fn from_rows(field: &K, cols: usize, rows: &[Vector<K>]) -> Self {
        let mut data = Vec::with_capacity(rows.len() * cols);
        for r in rows {
            assert_eq!(r.len(), cols, "ragged rows");
            data.extend(r.iter().cloned());
        }
        Matrix { field: field.clone(), rows: rows.len(), cols, data }
    }

    /// Builds a matrix whose columns are the given vectors.
    pub fn from_cols(field: &K, rows: usize, cols: &[Vector<K>]) -> Self {
        let mut m = Self::zeros(field, rows, cols.len());
        for (j, c) in cols.iter().enumerate() {
            assert_eq!(c.len(), rows, "ragged columns");
            for (i, a) in c.iter().enumerate() {
                m.set(i, j, a.clone());
            }
        }
        m
    }

    pub fn random<R: Rng + ?Sized>(field: &K, rows: usize, cols: usize, rng: &mut R) -> Self {
        let data = (0..rows * cols).map(|_| field.random(rng)).collect();
        Matrix { field: field.clone(), rows, cols, data }
    }

    pub fn field(&self) -> &K {
        &self.field
    }
    pub fn rows(&self) -> usize {
        self.rows
    }
    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> &K::Elem {
        &self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, a: K::Elem) {
        self.data[i * self.cols + j] = a;
    }

    pub fn row(&self, i: usize) -> &[K::Elem] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn col(&self, j: usize) -> Vector<K> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn row_vectors(&self) -> Vec<Vector<K>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(&self.field, self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j).clone());
            }
        }
        t
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|a| self.field.is_zero(a))
    }

    pub fn is_symmetric(&self) -> bool {
        self.rows == self.cols
            && (0..self.rows).all(|i| (0..i).all(|j| self.get(i, j) == self.get(j, i)))
    }

    pub fn mul(&self, other: &Matrix<K>) -> Matrix<K> {
        assert_eq!(self.cols, other.rows, "dimension mismatch in product");
        let k = &self.field;
        let mut out = Self::zeros(k, self.rows, other.cols);
        for i in 0..self.rows {
            for l in 0..self.cols {
                let a = self.get(i, l);
                if k.is_zero(a) {
                    continue;
                }
                for j in 0..other.cols {
                    let v = k.mul_add(out.get(i, j), a, other.get(l, j));
                    out.set(i, j, v);
                }
            }
        }
        out
    }

    pub fn apply(&self, x: &[K::Elem]) -> Vector<K> {
        assert_eq!(x.len(), self.cols, "dimension mismatch in apply");
        let k = &self.field;
        (0..self.rows)
            .map(|i| {
                self.row(i).iter().zip(x).fold(k.zero(), |acc, (a, b)| k.mul_add(&acc, a, b))
            })
            .collect()
    }

    pub fn pow(&self, e: usize) -> Matrix<K> {
        assert_eq!(self.rows, self.cols);
        let mut acc = Self::identity(&self.field, self.rows);
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    pub fn add(&self, other: &Matrix<K>) -> Matrix<K> {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let k = &self.field;
        let data = self.data.iter().zip(&other.data).map(|(a, b)| k.add(a, b)).collect();
        Matrix { field: k.clone(), rows: self.rows, cols: self.cols, data }
    }

    pub fn sub(&self, other: &Matrix<K>) -> Matrix<K> {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let k = &self.field;
        let data = self.data.iter().zip(&other.data).map(|(a, b)| k.sub(a, b)).collect();
        Matrix { field: k.clone(), rows: self.rows, cols: self.cols, data }
    }

    /// Horizontal block `[self | other]`.
    pub fn hstack(&self, other: &Matrix<K>) -> Matrix<K> {
        assert_eq!(self.rows, other.rows);
        let mut out = Self::zeros(&self.field, self.rows, self.cols + other.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set(i, j, self.get(i, j).clone());
            }
            for j in 0..other.cols {
                out.set(i, self.cols + j, other.get(i, j).clone());
            }
        }
        out
    }

    /// Sub-matrix of the given columns.
    pub fn select_cols(&self, cols: &[usize]) -> Matrix<K> {
        let mut out = Self::zeros(&self.field, self.rows, cols.len());
        for i in 0..self.rows {
            for (jj, &j) in cols.iter().enumerate() {
                out.set(i, jj, self.get(i, j).clone());
            }
        }
        out
    }

    /// Reduced row-echelon form by Gauss-Jordan elimination.
    pub fn rref(&self) -> Rref<K> {
        let k = &self.field;
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let Some(pr) = (r..m.rows).find(|&i| !k.is_zero(m.get(i, c))) else {
                continue;
            };
            m.swap_rows(r, pr);
            let inv = k.inv(m.get(r, c)).expect("nonzero pivot");
            for j in c..m.cols {
                let v = k.mul(m.get(r, j), &inv);
                m.set(r, j, v);
            }
            for i in 0..m.rows {
                if i == r {
                    continue;
                }
                let f = m.get(i, c).clone();
                if k.is_zero(&f) {
                    continue;
                }
                let nf = k.neg(&f);
                for j in c..m.cols {
                    let v = k.mul_add(m.get(i, j), &nf, m.get(r, j));
                    m.set(i, j, v);
                }
            }
            pivots.push(c);
            r += 1;
        }
        Rref { rank: pivots.len(), reduced: m, pivots }
    }

    pub fn rank(&self) -> usize {
        self.rref().rank
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    /// Basis of `{x : M x = 0}`.
    pub fn kernel(&self) -> Subspace<K> {
        let Rref { reduced, pivots, .. } = self.rref();
        let k = &self.field;
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        let basis: Vec<Vector<K>> = free
            .iter()
            .map(|&f| {
                let mut v = vec![k.zero(); self.cols];
                v[f] = k.one();
                for (r, &pc) in pivots.iter().enumerate() {
                    v[pc] = k.neg(reduced.get(r, f));
                }
                v
            })
            .collect();
        Subspace::from_vectors(k, self.cols, &basis)
    }

    /// One solution of `M x = b`, or `None` when the system is inconsistent.
    pub fn solve(&self, b: &[K::Elem]) -> Option<Vector<K>> {
        self.solve_many(&[b.to_vec()]).pop().unwrap()
    }

    /// Solves `M x = b` for several right-hand sides with a single elimination.
    pub fn solve_many(&self, rhs: &[Vector<K>]) -> Vec<Option<Vector<K>>> {
        let k = &self.field;
        let b = Matrix::from_cols(k, self.rows, rhs);
        let aug = self.hstack(&b);
        let Rref { reduced, pivots, .. } = aug.rref();
        (0..rhs.len())
            .map(|s| {
                let col = self.cols + s;
                // rows with no pivot in M span the left kernel; they must vanish on b
                let inconsistent = pivots
                    .iter()
                    .enumerate()
                    .any(|(r, &p)| p >= self.cols && !k.is_zero(reduced.get(r, col)));
                if inconsistent {
                    return None;
                }
                let mut x = vec![k.zero(); self.cols];
                for (r, &pc) in pivots.iter().enumerate() {
                    if pc >= self.cols {
                        break;
                    }
                    x[pc] = reduced.get(r, col).clone();
                }
                Some(x)
            })
            .collect()
    }

    /// Inverse of a square matrix.
    pub fn inverse(&self) -> Option<Matrix<K>> {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        if n == 0 {
            return Some(Self::zeros(&self.field, 0, 0));
        }
        let aug = self.hstack(&Self::identity(&self.field, n));
        let Rref { rank, reduced, pivots } = aug.rref();
        if rank < n || pivots[n - 1] != n - 1 {
            return None;
        }
        let cols: Vec<usize> = (n..2 * n).collect();
        let full = reduced.select_cols(&cols);
        let mut inv = Self::zeros(&self.field, n, n);
        for i in 0..n {
            for j in 0..n {
                inv.set(i, j, full.get(i, j).clone());
            }
        }
        Some(inv)
    }
}

/// `{x : M x ∈ S}` for `S` a subspace of the codomain of `M`.
pub fn preimage<K: Field>(m: &Matrix<K>, s: &Subspace<K>) -> Subspace<K> {
    assert_eq!(m.rows(), s.ambient_dim(), "subspace must live in the codomain");
    let ann = s.annihilator_matrix();
    if ann.rows() == 0 {
        return Subspace::full(m.field(), m.cols());
    }
    ann.mul(m).kernel()
}

/// A linear subspace stored by an RREF basis.
#[derive(Clone, Debug)]
pub struct Subspace<K: Field> {
    field: K,
    ambient_dim: usize,
    basis: Matrix<K>,
    pivots: Vec<usize>,
}

impl<K: Field> PartialEq for Subspace<K> {
    fn eq(&self, other: &Self) -> bool {
        // RREF bases are canonical
        self.ambient_dim == other.ambient_dim && self.pivots == other.pivots && self.basis == other.basis
    }
}

impl<K: Field> Subspace<K> {
    pub fn zero(field: &K, n: usize) -> Self {
        Subspace { field: field.clone(), ambient_dim: n, basis: Matrix::zeros(field, 0, n), pivots: vec![] }
    }

    pub fn full(field: &K, n: usize) -> Self {
        Subspace { field: field.clone(), ambient_dim: n, basis: Matrix::identity(field, n), pivots: (0..n).collect() }
    }

    /// Span of the given vectors.
    pub fn from_vectors(field: &K, n: usize, vectors: &[Vector<K>]) -> Self {
        let m = Matrix::from_rows(field, n, vectors);
        let Rref { rank, reduced, pivots } = m.rref();
        let rows: Vec<Vector<K>> = (0..rank).map(|i| reduced.row(i).to_vec()).collect();
        Subspace { field: field.clone(), ambient_dim: n, basis: Matrix::from_rows(field, n, &rows), pivots }
    }

    pub fn field(&self) -> &K {
        &self.field
    }
    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }
    pub fn dim(&self) -> usize {
        self.pivots.len()
    }
    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }
    /// The RREF basis as a matrix whose rows span the subspace.
    pub fn basis_matrix(&self) -> &Matrix<K> {
        &self.basis
    }
    pub fn basis(&self) -> Vec<Vector<K>> {
        self.basis.row_vectors()
    }

    /// Coordinates of `v` in the RREF basis, `None` when `v` is not a member.
    pub fn coordinates(&self, v: &[K::Elem]) -> Option<Vector<K>> {
        let k = &self.field;
        let coords: Vector<K> = self.pivots.iter().map(|&p| v[p].clone()).collect();
        // reconstruct and compare
        let mut w = vec![k.zero(); self.ambient_dim];
        for (r, c) in coords.iter().enumerate() {
            if k.is_zero(c) {
                continue;
            }
            for (j, b) in self.basis.row(r).iter().enumerate() {
                w[j] = k.mul_add(&w[j], c, b);
            }
        }
        (w.as_slice() == v).then_some(coords)
    }

    pub fn contains(&self, v: &[K::Elem]) -> bool {
        self.coordinates(v).is_some()
    }

    /// Combination of the basis rows with the given coordinates.
    pub fn combine(&self, coords: &[K::Elem]) -> Vector<K> {
        let k = &self.field;
        let mut w = vec![k.zero(); self.ambient_dim];
        for (r, c) in coords.iter().enumerate() {
            for (j, b) in self.basis.row(r).iter().enumerate() {
                w[j] = k.mul_add(&w[j], c, b);
            }
        }
        w
    }

    pub fn contains_subspace(&self, other: &Subspace<K>) -> bool {
        other.basis().iter().all(|v| self.contains(v))
    }

    pub fn sum(&self, other: &Subspace<K>) -> Subspace<K> {
        let mut vs = self.basis();
        vs.extend(other.basis());
        Subspace::from_vectors(&self.field, self.ambient_dim, &vs)
    }

    pub fn intersect(&self, other: &Subspace<K>) -> Subspace<K> {
        // x in self ∩ other  <=>  annihilator(other) x = 0 for x in self
        let ann = other.annihilator_matrix();
        if ann.rows() == 0 {
            return self.clone();
        }
        let inc = self.basis.transpose(); // ambient x dim
        let ker = ann.mul(&inc).kernel();
        let vs: Vec<Vector<K>> = ker.basis().iter().map(|c| inc.apply(c)).collect();
        Subspace::from_vectors(&self.field, self.ambient_dim, &vs)
    }

    /// Rows spanning `{λ : λ·s = 0 for all s}`.
    pub fn annihilator_matrix(&self) -> Matrix<K> {
        let ker = self.basis.kernel();
        Matrix::from_rows(&self.field, self.ambient_dim, &ker.basis())
    }

    /// The annihilator as a subspace of the dual.
    pub fn annihilator(&self) -> Subspace<K> {
        self.basis.kernel()
    }

    /// Standard unit vectors on the non-pivot coordinates: a complement.
    pub fn complement_indices(&self) -> Vec<usize> {
        (0..self.ambient_dim).filter(|c| !self.pivots.contains(c)).collect()
    }

    /// Image of the subspace under a linear map.
    pub fn image_under(&self, m: &Matrix<K>) -> Subspace<K> {
        let vs: Vec<Vector<K>> = self.basis().iter().map(|v| m.apply(v)).collect();
        Subspace::from_vectors(&self.field, m.rows(), &vs)
    }
}

/// Vector helpers.
pub fn vec_add<K: Field>(k: &K, a: &[K::Elem], b: &[K::Elem]) -> Vector<K> {
    a.iter().zip(b).map(|(x, y)| k.add(x, y)).collect()
}

pub fn vec_sub<K: Field>(k: &K, a: &[K::Elem], b: &[K::Elem]) -> Vector<K> {
    a.iter().zip(b).map(|(x, y)| k.sub(x, y)).collect()
}

pub fn vec_scale<K: Field>(k: &K, c: &K::Elem, a: &[K::Elem]) -> Vector<K> {
    a.iter().map(|x| k.mul(c, x)).collect()
}

pub fn vec_is_zero<K: Field>(k: &K, a: &[K::Elem]) -> bool {
    a.iter().all(|x| k.is_zero(x))
}

pub fn dot<K: Field>(k: &K, a: &[K::Elem], b: &[K::Elem]) -> K::Elem {
    a.iter().zip(b).fold(k.zero(), |acc, (x, y)| k.mul_add(&acc, x, y))
}

/// `Σ c_i v_i`.
pub fn lin_comb<K: Field>(k: &K, n: usize, coeffs: &[K::Elem], vectors: &[Vector<K>]) -> Vector<K> {
    let mut out = vec![k.zero(); n];
    for (c, v) in coeffs.iter().zip(vectors) {
        if k.is_zero(c) {
            continue;
        }
        for (o, x) in out.iter_mut().zip(v) {
            *o = k.mul_add(o, c, x);
        }
    }
    out
}

/// Scales a nonzero vector so its first nonzero entry is one.
pub fn projective_normalize<K: Field>(k: &K, a: &[K::Elem]) -> Vector<K> {
    match a.iter().find(|x| !k.is_zero(x)) {
        Some(lead) => {
            let inv = k.inv(lead).expect("nonzero lead");
            vec_scale(k, &inv, a)
        }
        None => a.to_vec(),
    }
}
