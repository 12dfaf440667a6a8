mod common;

use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use common::*;
use fpk_brace::algebra::AlgebraSpec;
use fpk_brace::holomorph::{
    build_t_circ, commutator_sigma_tau, compose, conjugate_sigma_tau, sigma, tau, verify_subgroup_properties,
    AffineMap, SubgroupTable,
};
use fpk_brace::vector::{self, Vector};
use fpk_brace::{Field, MatFp};

fn setup() -> impl Strategy<Value = (AlgebraSpec, [Vector; 3])> {
    let shape = prop::sample::select(vec![
        (3u64, 1u32, 2usize),
        (3, 1, 3),
        (3, 1, 4),
        (5, 1, 3),
        (7, 1, 2),
        (3, 2, 3),
        (5, 2, 2),
    ]);
    (shape, any::<u64>()).prop_map(|((p, k, n), seed)| {
        let f = Field::new(p, k).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let d = 1 + (seed as usize % (n - 1));
        let alg = random_algebra(&f, n, d, &mut rng);
        let xs = [(); 3].map(|_| random_vector(&f, n, &mut rng));
        (alg, xs)
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn tau_is_labelled_and_multiplicative((alg, [a, b, x]) in setup()) {
        let n = alg.n();
        let ta = tau(&a, &alg).unwrap();
        prop_assert_eq!(ta.apply(&vector::zero(n)).unwrap(), a.clone());
        prop_assert_eq!(ta.label(), &a[..]);
        prop_assert_eq!(ta.apply(&x).unwrap(), theta_circle(&alg, &x, &a));
        let tb = tau(&b, &alg).unwrap();
        prop_assert_eq!(compose(&ta, &tb).unwrap(), tau(&alg.circle(&a, &b).unwrap(), &alg).unwrap());
    }

    #[test]
    fn tau_has_exponent_p((alg, [a, _, x]) in setup()) {
        let p = alg.field().characteristic() as u64;
        let ta = tau(&a, &alg).unwrap();
        prop_assert!(ta.pow(p).unwrap().is_identity());
        let inv = ta.inverse_by_power().unwrap();
        prop_assert_eq!(&inv, &ta.inverse().unwrap());
        prop_assert_eq!(inv.apply(&ta.apply(&x).unwrap()).unwrap(), x);
    }

    #[test]
    fn conjugation_and_commutator((alg, [a, b, x]) in setup()) {
        let f = alg.field();
        let conj = conjugate_sigma_tau(&a, &b, &alg).unwrap();
        // x ↦ (x + a)∘b − a
        let expected = vector::sub(f, &theta_circle(&alg, &vector::add(f, &x, &a), &b), &a);
        prop_assert_eq!(conj.apply(&x).unwrap(), expected);
        let comm = commutator_sigma_tau(&a, &b, &alg).unwrap();
        prop_assert_eq!(comm, sigma(f, &theta_product(&alg, &a, &b)));
    }
}

#[test]
fn compose_applies_left_map_first() {
    let f = Field::prime(5).unwrap();
    let m = MatFp::from_ints(f.clone(), &[&[1, 1], &[0, 1]]).unwrap();
    let g = AffineMap::new(m, vec![f.zero(), f.zero()]).unwrap();
    let s = sigma(&f, &[f.one(), f.zero()]);
    let x = vec![f.zero(), f.zero()];
    // translate then shear: (1, 0) ↦ (1, 1)
    assert_eq!(compose(&s, &g).unwrap().apply(&x).unwrap(), vec![f.one(), f.one()]);
    assert_eq!(compose(&g, &s).unwrap().apply(&x).unwrap(), vec![f.one(), f.zero()]);
}

#[test]
fn exhaustive_small_tables() {
    for (p, n) in [(3u64, 2usize), (3, 3), (5, 2)] {
        let f = Field::prime(p).unwrap();
        for d in 1..n {
            for alg in all_algebras(&f, n, d) {
                let t = build_t_circ(&alg).unwrap();
                let report = verify_subgroup_properties(&t, Some(&alg));
                assert!(report.all_pass(), "{report:?}");
                assert_eq!(
                    t.non_translations() as u64,
                    vector::space_size(&f, n).unwrap() - vector::space_size(&f, d).unwrap()
                );
                for (i, e) in t.elements().iter().enumerate() {
                    assert_eq!(vector::index(&f, e.label()), i as u64);
                }
            }
        }
    }
}

#[test]
fn translations_pass_and_tampering_is_caught() {
    let f = Field::prime(3).unwrap();
    let t = SubgroupTable::translations(f.clone(), 2).unwrap();
    assert!(verify_subgroup_properties(&t, None).all_pass());
    assert_eq!(t.non_translations(), 0);

    let alg = algebra_from_ints(3, &[&[1]]);
    let mut bad = build_t_circ(&alg).unwrap();
    let swapped = bad.get(1).clone();
    bad.replace(1, bad.get(2).clone());
    bad.replace(2, swapped);
    let report = verify_subgroup_properties(&bad, Some(&alg));
    assert!(!report.regular.pass);

    let mut broken = build_t_circ(&alg).unwrap();
    let shear = MatFp::from_ints(f.clone(), &[&[1, 2], &[0, 1]]).unwrap();
    broken.replace(1, AffineMap::new(shear, broken.get(1).translation.clone()).unwrap());
    assert!(!verify_subgroup_properties(&broken, Some(&alg)).all_pass());
}

#[test]
fn tables_are_bounded() {
    let f = Field::prime(5).unwrap();
    let alg = AlgebraSpec::new(
        f.clone(),
        5,
        1,
        fpk_brace::algebra::DefiningMatrix::from_scalar(&MatFp::identity(f, 4)).unwrap(),
    )
    .unwrap();
    assert!(build_t_circ(&alg).is_err());
}
