use std::sync::Arc;

use crate::cohomology::{cup_matrix, CanonicalRing, KSClass, MlContext, MlOptions, RationalFn};
use crate::error::{Error, Result};
use crate::field::Field;
use crate::linalg::{vec_is_zero, Matrix, Subspace, Vector};
use crate::poly::Form;

use super::Alpha2Values;

/// `α^(2)` on a basis of `W_ξ`, computed from Mittag-Leffler splittings
/// `f_i = A_i / H` with a shared denominator.
///
/// `G_ij` is the unique canonical form with `A_i B_j - A_j B_i ≡ G_ij H (mod F)`,
/// i.e. `G_ij = f_i φ_j - f_j φ_i`.
#[derive(Clone, Debug)]
pub struct Alpha2Table<K: Field> {
    pub values: Alpha2Values<K>,
    pub splittings: Vec<RationalFn<K>>,
    pub denominator: Form<K>,
    ring: Arc<CanonicalRing<K>>,
}

impl<K: Field> Alpha2Table<K> {
    pub fn w_basis(&self) -> &[Vector<K>] {
        self.values.basis()
    }
    pub fn ring(&self) -> &Arc<CanonicalRing<K>> {
        &self.ring
    }
}

/// Solves every `G_ij` from the numerators with one elimination.
fn divide<K: Field>(ring: &CanonicalRing<K>, h: &Form<K>, numerators: &[Form<K>], basis: &[Vector<K>]) -> Result<Vec<Vec<Vector<K>>>> {
    let k = ring.field();
    let g = ring.genus();
    let n = basis.len();
    let deg = h.degree() + ring.curve().canonical_degree(1);
    let space = ring.curve().form_space(deg);
    let cols: Vec<Vector<K>> = (0..g).map(|m| space.reduce(&ring.canonical_space().basis_form(m).mul(h))).collect();
    let mat = Matrix::from_cols(k, space.dim(), &cols);
    let adj: Vec<Form<K>> = basis.iter().map(|b| ring.canonical_form(b)).collect();
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect();
    let rhs: Vec<Vector<K>> = pairs
        .iter()
        .map(|&(i, j)| space.reduce(&numerators[i].mul(&adj[j]).sub(&numerators[j].mul(&adj[i]))))
        .collect();
    let mut values = vec![vec![vec![k.zero(); g]; n]; n];
    for (&(i, j), sol) in pairs.iter().zip(mat.solve_many(&rhs)) {
        let gij = sol.ok_or(Error::DivisionObstruction(i, j))?;
        values[j][i] = gij.iter().map(|c| k.neg(c)).collect();
        values[i][j] = gij;
    }
    Ok(values)
}

/// Builds the table on the given basis of `W_ξ` (the RREF basis when `None`).
pub fn alpha2_table<K: Field>(
    ring: &Arc<CanonicalRing<K>>,
    xi: &KSClass<K>,
    w_basis: Option<Vec<Vector<K>>>,
    opts: MlOptions,
) -> Result<Alpha2Table<K>> {
    let k = ring.field();
    let tails = xi.tails.as_ref().ok_or(Error::NeedsTailRepresentative)?;
    let cup = cup_matrix(ring, xi);
    let basis = match w_basis {
        Some(b) => {
            if b.len() != cup.w.dim() || Subspace::from_vectors(k, ring.genus(), &b) != cup.w {
                return Err(Error::Precondition("supplied vectors are not a basis of W_ξ".into()));
            }
            b
        }
        None => cup.w.basis(),
    };
    let ctx = MlContext::new(ring, tails, opts)?;
    let splittings = ctx.solve_many(&basis).into_iter().collect::<Result<Vec<_>>>()?;
    let numerators: Vec<Form<K>> = splittings.iter().map(|f| f.numerator.clone()).collect();
    let h = ctx.denominator().clone();
    let values = divide(ring, &h, &numerators, &basis)?;
    Ok(Alpha2Table {
        values: Alpha2Values::new(k, ring.genus(), basis, values)?,
        splittings,
        denominator: h,
        ring: ring.clone(),
    })
}

/// Replaces each `f_i` by `f_i + λ_i` and recomputes the table from the new numerators.
/// The result satisfies `G'_ij = G_ij + λ_i φ_j - λ_j φ_i`.
pub fn splitting_shift<K: Field>(table: &Alpha2Table<K>, lambda: &[K::Elem]) -> Result<Alpha2Table<K>> {
    let ring = &table.ring;
    let k = ring.field();
    if lambda.len() != table.splittings.len() {
        return Err(Error::Precondition(format!("λ must have length {}", table.splittings.len())));
    }
    let h = &table.denominator;
    let space = ring.curve().form_space(h.degree());
    let splittings: Vec<RationalFn<K>> = table
        .splittings
        .iter()
        .zip(lambda)
        .map(|(f, l)| {
            let numerator = f.numerator.add(&h.scale(l));
            RationalFn { numerator_coords: space.reduce(&numerator), numerator, ..f.clone() }
        })
        .collect();
    let numerators: Vec<Form<K>> = splittings.iter().map(|f| f.numerator.clone()).collect();
    let basis = table.values.basis().to_vec();
    let values = divide(ring, h, &numerators, &basis)?;
    Ok(Alpha2Table {
        values: Alpha2Values::new(k, ring.genus(), basis, values)?,
        splittings,
        denominator: h.clone(),
        ring: ring.clone(),
    })
}

/// Checks `φ_k G_ij - φ_j G_ik + φ_i G_jk = 0` in `H^0(2K)` for all triples `i < j < k`;
/// returns the number of triples checked.
pub fn verify_cocycle<K: Field>(table: &Alpha2Table<K>) -> Result<usize> {
    let ring = &table.ring;
    let f = ring.field();
    let b = table.values.basis();
    let n = b.len();
    let mut count = 0;
    for i in 0..n {
        for j in i + 1..n {
            for l in j + 1..n {
                let t1 = ring.multiply(&b[l], table.values.value(i, j));
                let t2 = ring.multiply(&b[j], table.values.value(i, l));
                let t3 = ring.multiply(&b[i], table.values.value(j, l));
                let s: Vector<K> = t1.iter().zip(&t2).zip(&t3).map(|((a, c), e)| f.add(&f.sub(a, c), e)).collect();
                if !vec_is_zero(f, &s) {
                    return Err(Error::InvariantViolation(format!("Koszul cocycle identity fails for ({i}, {j}, {l})")));
                }
                count += 1;
            }
        }
    }
    Ok(count)
}
