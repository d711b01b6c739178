use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::field::Field;
use crate::linalg::{Matrix, Subspace, Vector};

use super::XiPhiFiltration;

/// How the partition `h` relates to the Jordan type of `N_φ`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MultiplicityComparison {
    /// `block_counts[i]` = number of blocks of size exactly `i + 1`.
    pub block_counts: Vec<usize>,
    /// `h^i` equals the number of blocks of size `i + 1` for all `i < l`.
    pub literal_reading: bool,
    /// The number of blocks of size `i + 1` equals `h^i - h^{i+1}` for `i < l - 1`
    /// and `h^{l-1}` for `i = l - 1`.
    pub difference_reading: bool,
}

#[derive(Clone, Debug)]
pub struct Sl2Report<K: Field> {
    /// `dim W / W^l`.
    pub quotient_dim: usize,
    /// `N_φ` on `⊕_{i<l} Gr^i` in the concatenated graded bases.
    pub nilpotent: Matrix<K>,
    /// Block sizes in decreasing order.
    pub jordan_blocks: Vec<usize>,
    /// Chains `v, N v, ..., N^{s-1} v` in graded coordinates, one per block.
    pub jordan_basis: Vec<Vec<Vector<K>>>,
    /// The weight operator `Y` with `[Y, N] = 2N`; `N^k v` has weight `-(s-1) + 2k`.
    pub semisimple: Matrix<K>,
    /// The lowering operator `X` with `[N, X] = Y`.
    pub lowering: Matrix<K>,
    pub sl2_relations_ok: bool,
    /// `n -> dim H^n`.
    pub weight_dims: BTreeMap<i64, usize>,
    /// `(-k, n + k) -> dim (H^n ∩ F^k) / (H^n ∩ F^{k+1})`, nonzero entries only.
    pub bigraded_dims: BTreeMap<(i64, i64), usize>,
    pub lefschetz_ok: bool,
    pub multiplicity: MultiplicityComparison,
}

fn block_diag_offsets(partition: &[usize], l: usize) -> Vec<usize> {
    let mut off = vec![0];
    for &h in &partition[..l] {
        off.push(off.last().unwrap() + h);
    }
    off
}

/// Graded nilpotent operator, Jordan type and `sl(2)` data of a filtration.
pub fn nilpotent_and_sl2<K: Field>(filt: &XiPhiFiltration<K>) -> Result<Sl2Report<K>> {
    let l = filt.length;
    let off = block_diag_offsets(&filt.partition, l);
    let n = off[l];
    let k = filt.chain[0].field().clone();
    let mut nil = Matrix::zeros(&k, n, n);
    for (i, m) in filt.graded_maps.iter().enumerate() {
        // gr c^(i+1): Gr^{i+1} -> Gr^i
        for r in 0..m.rows() {
            for c in 0..m.cols() {
                nil.set(off[i] + r, off[i + 1] + c, m.get(r, c).clone());
            }
        }
    }
    if !nil.pow(l).is_zero() {
        return Err(Error::InvariantViolation("N_φ^l is not zero".into()));
    }
    if l >= 1 && nil.pow(l - 1).is_zero() {
        return Err(Error::InvariantViolation("N_φ^(l-1) vanishes".into()));
    }

    let ranks: Vec<usize> = (0..=l + 1).map(|e| nil.pow(e).rank()).collect();
    let at_least: Vec<usize> = (0..=l).map(|e| ranks[e] - ranks[e + 1]).collect();
    let block_counts: Vec<usize> = (0..l).map(|i| at_least[i] - at_least[i + 1]).collect();

    let jordan_basis = jordan_chains(&nil, l);
    let mut jordan_blocks: Vec<usize> = jordan_basis.iter().map(Vec::len).collect();
    jordan_blocks.sort_unstable_by(|a, b| b.cmp(a));
    let mut from_ranks: Vec<usize> = block_counts.iter().enumerate().rev().flat_map(|(i, &c)| std::iter::repeat(i + 1).take(c)).collect();
    from_ranks.sort_unstable_by(|a, b| b.cmp(a));
    if jordan_blocks != from_ranks || jordan_blocks.iter().sum::<usize>() != n {
        return Err(Error::InvariantViolation("Jordan chains disagree with the ranks of powers".into()));
    }

    // change of basis P: columns are the chain vectors
    let mut cols = Vec::with_capacity(n);
    let mut weights = Vec::with_capacity(n);
    let mut lower_coeff = Vec::with_capacity(n);
    for chain in &jordan_basis {
        let s = chain.len() as i64;
        for (j, v) in chain.iter().enumerate() {
            cols.push(v.clone());
            let j = j as i64;
            weights.push(-(s - 1) + 2 * j);
            lower_coeff.push(j * (s - j));
        }
    }
    let p = Matrix::from_cols(&k, n, &cols);
    let pinv = p.inverse().ok_or_else(|| Error::InvariantViolation("Jordan chains are dependent".into()))?;
    let mut yd = Matrix::zeros(&k, n, n);
    let mut xd = Matrix::zeros(&k, n, n);
    for (c, &w) in weights.iter().enumerate() {
        yd.set(c, c, k.from_i64(w));
        if lower_coeff[c] != 0 {
            // X (N^j v) = j (s - j) N^{j-1} v; the previous column holds N^{j-1} v
            xd.set(c - 1, c, k.from_i64(lower_coeff[c]));
        }
    }
    let y = p.mul(&yd).mul(&pinv);
    let x = p.mul(&xd).mul(&pinv);
    let yn = y.mul(&nil).sub(&nil.mul(&y));
    let nx = nil.mul(&x).sub(&x.mul(&nil));
    let yx = y.mul(&x).sub(&x.mul(&y));
    let sl2_relations_ok = yn == nil.mul(&scalar(&k, n, 2))
        && nx == y
        && yx == x.mul(&scalar(&k, n, -2));

    let mut weight_spaces: BTreeMap<i64, Vec<Vector<K>>> = BTreeMap::new();
    for (v, &w) in cols.iter().zip(&weights) {
        weight_spaces.entry(w).or_default().push(v.clone());
    }
    let weight_dims: BTreeMap<i64, usize> = weight_spaces.iter().map(|(&w, vs)| (w, vs.len())).collect();

    let mut lefschetz_ok = true;
    for (&w, vs) in &weight_spaces {
        if w > 0 {
            continue;
        }
        let m = (-w) as usize;
        let target = weight_spaces.get(&-w).map(|t| Subspace::from_vectors(&k, n, t)).unwrap_or_else(|| Subspace::zero(&k, n));
        let nm = nil.pow(m);
        let images: Vec<Vector<K>> = vs.iter().map(|v| nm.apply(v)).collect();
        let img = Subspace::from_vectors(&k, n, &images);
        if img.dim() != vs.len() || target.dim() != vs.len() || !target.contains_subspace(&img) {
            lefschetz_ok = false;
        }
    }

    // F^k = ⊕_{i >= k} Gr^i in graded coordinates
    let f_space = |kk: usize| -> Subspace<K> {
        let start = off[kk.min(l)];
        let basis: Vec<Vector<K>> = (start..n)
            .map(|c| {
                let mut e = vec![k.zero(); n];
                e[c] = k.one();
                e
            })
            .collect();
        Subspace::from_vectors(&k, n, &basis)
    };
    let mut bigraded_dims = BTreeMap::new();
    for (&w, vs) in &weight_spaces {
        let hw = Subspace::from_vectors(&k, n, vs);
        for kk in 0..l {
            let a = hw.intersect(&f_space(kk)).dim();
            let b = hw.intersect(&f_space(kk + 1)).dim();
            if a > b {
                bigraded_dims.insert((-(kk as i64), w + kk as i64), a - b);
            }
        }
    }

    let h = &filt.partition;
    let literal_reading = (0..l).all(|i| h[i] == block_counts[i]);
    let difference_reading = (0..l).all(|i| {
        let expect = if i + 1 < l { h[i] - h[i + 1] } else { h[i] };
        expect == block_counts[i]
    });

    Ok(Sl2Report {
        quotient_dim: n,
        nilpotent: nil,
        jordan_blocks,
        jordan_basis,
        semisimple: y,
        lowering: x,
        sl2_relations_ok,
        weight_dims,
        bigraded_dims,
        lefschetz_ok,
        multiplicity: MultiplicityComparison { block_counts, literal_reading, difference_reading },
    })
}

fn scalar<K: Field>(k: &K, n: usize, c: i64) -> Matrix<K> {
    let mut m = Matrix::zeros(k, n, n);
    for i in 0..n {
        m.set(i, i, k.from_i64(c));
    }
    m
}

/// Jordan chains of a nilpotent matrix with `N^l = 0`, longest first.
/// Each chain is `[v, N v, ..., N^{s-1} v]` with `N^s v = 0`.
fn jordan_chains<K: Field>(nil: &Matrix<K>, l: usize) -> Vec<Vec<Vector<K>>> {
    let k = nil.field().clone();
    let n = nil.rows();
    let kernels: Vec<Subspace<K>> = (0..=l).map(|e| nil.pow(e).kernel()).collect();
    let mut chains: Vec<Vec<Vector<K>>> = Vec::new();
    for s in (1..=l).rev() {
        // vectors of existing chains lying in ker N^s: the last s of each chain
        let mut span: Vec<Vector<K>> = kernels[s - 1].basis();
        for c in &chains {
            span.extend(c[c.len() - s..].iter().cloned());
        }
        let mut current = Subspace::from_vectors(&k, n, &span);
        for v in kernels[s].basis() {
            if current.contains(&v) {
                continue;
            }
            let mut chain = vec![v];
            for _ in 1..s {
                chain.push(nil.apply(chain.last().unwrap()));
            }
            span.extend(chain.iter().cloned());
            current = Subspace::from_vectors(&k, n, &span);
            chains.push(chain);
        }
    }
    chains
}

#[cfg(test)]
mod tests {
    use super::super::{synthetic_table, xi_phi_filtration};
    use super::*;
    use crate::field::PrimeField;

    fn report(blocks: &[usize], seed: u64) -> Sl2Report<PrimeField> {
        let k = PrimeField::new(101).unwrap();
        let s = synthetic_table(&k, blocks, seed).unwrap();
        let f = xi_phi_filtration(&s.table, &s.phi).unwrap();
        nilpotent_and_sl2(&f).unwrap()
    }

    #[test]
    fn single_chain_of_length_four() {
        let r = report(&[4], 1);
        assert_eq!(r.jordan_blocks, vec![4]);
        assert_eq!(r.weight_dims, BTreeMap::from([(-3, 1), (-1, 1), (1, 1), (3, 1)]));
        assert!(r.lefschetz_ok);
        assert!(r.sl2_relations_ok);
        assert!(r.multiplicity.difference_reading);
        assert!(!r.multiplicity.literal_reading);
    }

    #[test]
    fn mixed_blocks() {
        let r = report(&[3, 1, 1, 2], 7);
        assert_eq!(r.jordan_blocks, vec![3, 2, 1, 1]);
        assert_eq!(r.quotient_dim, 7);
        assert_eq!(r.multiplicity.block_counts, vec![2, 1, 1]);
        assert!(r.lefschetz_ok && r.sl2_relations_ok);
        assert_eq!(r.weight_dims.values().sum::<usize>(), 7);
        assert_eq!(r.bigraded_dims.values().sum::<usize>(), 7);
    }

    #[test]
    fn length_one_gives_trivial_blocks() {
        let r = report(&[1, 1], 3);
        assert_eq!(r.jordan_blocks, vec![1, 1]);
        assert_eq!(r.weight_dims, BTreeMap::from([(0, 2)]));
        assert!(r.multiplicity.literal_reading && r.multiplicity.difference_reading);
    }

    #[test]
    fn empty_quotient() {
        let r = report(&[], 3);
        assert_eq!(r.quotient_dim, 0);
        assert!(r.jordan_blocks.is_empty());
        assert!(r.lefschetz_ok);
    }
}
