use std::sync::{Arc, OnceLock};

use proptest::prelude::*;

use ivhs_core::{
    alpha2_table, cup_matrix, ks_annihilating, ks_from_tails, nilpotent_and_sl2, realize_functional, splitting_shift,
    synthetic_table, triple_quadric, verify_cocycle, xi_phi_filtration, Alpha2Table, CanonicalRing, Field, Form, KSClass,
    MlOptions, PlaneCurve, Poly, PrimeField, Subspace, TailEntry, TailRep, Vector,
};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn sextic() -> &'static Arc<CanonicalRing<PrimeField>> {
    static RING: OnceLock<Arc<CanonicalRing<PrimeField>>> = OnceLock::new();
    RING.get_or_init(|| {
        let k = PrimeField::new(101).unwrap();
        let c = PlaneCurve::new(&Poly::parse(&k, &["x", "y", "z"], "x^6+y^6+z^6").unwrap(), None).unwrap();
        Arc::new(CanonicalRing::new(Arc::new(c)))
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn secant_rank_is_at_most_k(k in 1usize..8, seed in any::<u64>(), coeffs in prop::collection::vec(1u64..101, 8)) {
        let r = sextic();
        let f = *r.field();
        let pts = r.curve().find_points(k, seed).unwrap();
        let entries = pts.iter().zip(&coeffs).map(|(p, &c)| TailEntry { point: p.clone(), coeffs: vec![c] }).collect();
        let xi = ks_from_tails(r, TailRep::new(&f, entries).unwrap(), "s").unwrap();
        prop_assert!(cup_matrix(r, &xi).rank <= k);
    }

    #[test]
    fn synthetic_jordan_type_is_recovered(blocks in prop::collection::vec(1usize..=6, 0..4), seed in any::<u64>()) {
        let k = PrimeField::new(101).unwrap();
        let s = synthetic_table(&k, &blocks, seed).unwrap();
        let f = xi_phi_filtration(&s.table, &s.phi).unwrap();
        prop_assert_eq!(f.length, s.expected_length);
        prop_assert_eq!(&f.partition, &s.expected_partition);
        let r = nilpotent_and_sl2(&f).unwrap();
        prop_assert_eq!(&r.jordan_blocks, &s.expected_blocks);
        prop_assert!(r.lefschetz_ok && r.sl2_relations_ok);
        prop_assert!(r.multiplicity.difference_reading);
        for (w, d) in &r.weight_dims {
            prop_assert_eq!(r.weight_dims.get(&-w), Some(d));
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(4))]

    #[test]
    fn filtration_invariants_under_shifts(seed in any::<u64>(), lambda_seed in any::<u64>()) {
        let r = sextic();
        let f = *r.field();
        let pts = r.curve().find_points(3, seed).unwrap();
        let entries = vec![
            TailEntry { point: pts[0].clone(), coeffs: vec![1, 1] },
            TailEntry { point: pts[1].clone(), coeffs: vec![2, 0, 1] },
            TailEntry { point: pts[2].clone(), coeffs: vec![3] },
        ];
        let xi = ks_from_tails(r, TailRep::new(&f, entries).unwrap(), "t").unwrap();
        let t = alpha2_table(r, &xi, None, MlOptions { seed, ..Default::default() }).unwrap();
        let w = t.w_basis().len();
        let mut rng = ChaCha8Rng::seed_from_u64(lambda_seed);
        let lambda: Vec<u64> = (0..w).map(|_| f.random(&mut rng)).collect();
        let s = splitting_shift(&t, &lambda).unwrap();
        for phi in t.w_basis() {
            let a = xi_phi_filtration(&t.values, phi).unwrap();
            let b = xi_phi_filtration(&s.values, phi).unwrap();
            prop_assert!(a.chain.last().unwrap().contains(phi));
            prop_assert_eq!(a.partition.iter().sum::<usize>(), w);
            prop_assert_eq!(&a.chain, &b.chain);
        }
    }
}

/// A class killing `l * Sym^2<a, b>` for random lines `l, a, b`; these have nonzero `α^(2)`.
fn scroll_class(seed: u64) -> (KSClass<PrimeField>, Alpha2Table<PrimeField>) {
    let r = sextic();
    let k = *r.field();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut line = || Form::linear(&k, [k.random(&mut rng), k.random(&mut rng), k.random(&mut rng)]);
    let (l, a, b) = (line(), line(), line());
    let u: Vec<Vector<PrimeField>> =
        [a.mul(&a), a.mul(&b), b.mul(&b)].iter().map(|q| r.canonical_space().reduce(&l.mul(q))).collect();
    let ann = ks_annihilating(r, &Subspace::from_vectors(&k, r.genus(), &u));
    let c: Vec<u64> = (0..ann.dim()).map(|_| k.random(&mut rng)).collect();
    let tails = realize_functional(r, &ann.combine(&c), seed, &[]).unwrap();
    let xi = ks_from_tails(r, tails, "scroll").unwrap();
    let t = alpha2_table(r, &xi, None, MlOptions { seed, ..Default::default() }).unwrap();
    (xi, t)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(6))]

    #[test]
    fn alpha2_laws_on_nonsecant_classes(seed in any::<u64>()) {
        let r = sextic();
        let k = *r.field();
        let (xi, t) = scroll_class(seed);
        let cup = cup_matrix(r, &xi);
        prop_assert_eq!(cup.rank + cup.w.dim(), r.genus());
        let basis = t.w_basis().to_vec();
        let w = basis.len();
        for i in 0..w {
            prop_assert!(t.values.value(i, i).iter().all(|c| *c == k.zero()));
            for j in 0..w {
                let neg: Vec<u64> = t.values.value(j, i).iter().map(|c| k.neg(c)).collect();
                prop_assert_eq!(t.values.value(i, j), &neg);
            }
        }
        verify_cocycle(&t).unwrap();
        for (i, j, m) in [(0, 1, 2), (0, 2, 3), (1, 2, 3)].into_iter().filter(|&(_, _, m)| m < w) {
            let cert = triple_quadric(r, &t.values, &basis[i], &basis[j], &basis[m]).unwrap();
            prop_assert!(cert.check(r));
        }
    }

    #[test]
    fn partitions_are_non_increasing(seed in any::<u64>(), phi_seed in any::<u64>()) {
        let r = sextic();
        let k = *r.field();
        let (_, t) = scroll_class(seed);
        let basis = t.w_basis();
        let mut rng = ChaCha8Rng::seed_from_u64(phi_seed);
        let c: Vec<u64> = (0..basis.len()).map(|_| k.random(&mut rng)).collect();
        let phi = t.values.w().combine(&c);
        prop_assume!(phi.iter().any(|x| *x != k.zero()));
        let f = xi_phi_filtration(&t.values, &phi).unwrap();
        prop_assert_eq!(f.partition.iter().sum::<usize>(), basis.len());
        prop_assert!(f.partition[..f.length].windows(2).all(|h| h[0] >= h[1]));
        for i in 0..f.length {
            prop_assert!(f.chain[i + 1].dim() < f.chain[i].dim());
        }
        let sl2 = nilpotent_and_sl2(&f).unwrap();
        prop_assert!(sl2.lefschetz_ok && sl2.sl2_relations_ok);
        prop_assert_eq!(sl2.jordan_blocks.first().copied().unwrap_or(0), f.length);
    }
}
