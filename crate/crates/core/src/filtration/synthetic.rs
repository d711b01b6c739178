use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::field::Field;
use crate::linalg::{lin_comb, Matrix, Vector};

use super::Alpha2Values;

/// A table with prescribed Jordan type, built without any curve.
#[derive(Clone, Debug)]
pub struct SyntheticTable<K: Field> {
    pub table: Alpha2Values<K>,
    pub phi: Vector<K>,
    pub expected_length: usize,
    /// Decreasing block sizes.
    pub expected_blocks: Vec<usize>,
    pub expected_partition: Vec<usize>,
}

fn random_invertible<K: Field>(k: &K, n: usize, rng: &mut ChaCha8Rng) -> Matrix<K> {
    loop {
        let m = Matrix::random(k, n, n, rng);
        if m.rank() == n {
            return m;
        }
    }
}

/// For block sizes `s_b`, `W` is spanned by `φ` and chains `e_{b,1..s_b}` with
/// `α(φ, e_{b,k}) = e_{b,k-1}` and `α(φ, e_{b,1}) = u_b ∉ W`; all other pairs
/// of basis vectors map to zero. The ambient space and the basis of `W` are
/// then scrambled by random changes of basis.
pub fn synthetic_table<K: Field>(field: &K, blocks: &[usize], seed: u64) -> Result<SyntheticTable<K>> {
    let k = field;
    if blocks.contains(&0) {
        return Err(Error::Precondition("block sizes must be positive".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let w = 1 + blocks.iter().sum::<usize>();
    let ambient = w + blocks.len();
    let t = random_invertible(k, ambient, &mut rng);
    let unit = |i: usize| t.col(i);

    // index of e_{b,j} (j >= 1) in the standard basis
    let mut start = Vec::with_capacity(blocks.len());
    let mut next = 1;
    for &s in blocks {
        start.push(next);
        next += s;
    }
    let zero = vec![k.zero(); ambient];
    let mut values = vec![vec![zero.clone(); w]; w];
    for (b, &s) in blocks.iter().enumerate() {
        for j in 1..=s {
            let idx = start[b] + j - 1;
            let img = if j == 1 { unit(w + b) } else { unit(idx - 1) };
            values[idx][0] = img.iter().map(|c| k.neg(c)).collect();
            values[0][idx] = img;
        }
    }
    let basis: Vec<Vector<K>> = (0..w).map(unit).collect();

    // scramble the basis of W and transport the values bilinearly
    let s = random_invertible(k, w, &mut rng);
    let new_basis: Vec<Vector<K>> = (0..w).map(|i| lin_comb(k, ambient, &s.col(i), &basis)).collect();
    let mut new_values = vec![vec![zero.clone(); w]; w];
    for i in 0..w {
        for j in 0..w {
            let mut acc = zero.clone();
            for a in 0..w {
                let row = lin_comb(k, ambient, &s.col(j), &values[a]);
                for (o, x) in acc.iter_mut().zip(&row) {
                    *o = k.mul_add(o, s.get(a, i), x);
                }
            }
            new_values[i][j] = acc;
        }
    }
    let table = Alpha2Values::new(k, ambient, new_basis, new_values)?;

    let l = blocks.iter().copied().max().unwrap_or(0);
    let mut expected_blocks = blocks.to_vec();
    expected_blocks.sort_unstable_by(|a, b| b.cmp(a));
    let mut expected_partition: Vec<usize> = (0..l).map(|i| blocks.iter().filter(|&&s| s > i).count()).collect();
    expected_partition.push(1);
    Ok(SyntheticTable { table, phi: unit(0), expected_length: l, expected_blocks, expected_partition })
}

#[cfg(test)]
mod tests {
    use super::super::xi_phi_filtration;
    use super::*;
    use crate::field::{PrimeField, Rationals};

    #[test]
    fn recovers_prescribed_partition() {
        let k = PrimeField::new(101).unwrap();
        for (blocks, seed) in [(vec![4], 1u64), (vec![2, 2, 1], 2), (vec![3, 1], 3), (vec![], 4)] {
            let s = synthetic_table(&k, &blocks, seed).unwrap();
            let f = xi_phi_filtration(&s.table, &s.phi).unwrap();
            assert_eq!(f.length, s.expected_length);
            assert_eq!(f.partition, s.expected_partition);
        }
    }

    #[test]
    fn works_over_rationals() {
        let s = synthetic_table(&Rationals, &[3, 2], 9).unwrap();
        let f = xi_phi_filtration(&s.table, &s.phi).unwrap();
        assert_eq!(f.partition, vec![2, 2, 1, 1]);
    }
}
