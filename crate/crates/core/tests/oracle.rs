mod common;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use common::*;
use fpk_brace::algebra::AlgebraSpec;
use fpk_brace::holomorph::{build_t_circ, SubgroupTable};
use fpk_brace::oracle::{
    as_permutation, brute_force_iso, dixon_conjugator, enumerate_regular_subgroups_small, enumerate_valid_theta,
    gl_order, partition_into_classes, translations, Relation, Shape,
};
use fpk_brace::vector;
use fpk_brace::{Error, Field, MatFp};

#[test]
fn valid_theta_enumeration_matches_a_determinant_scan() {
    for (p, k, m) in [(3u64, 1u32, 1usize), (3, 1, 2), (5, 1, 2), (3, 2, 2), (3, 1, 3)] {
        let f = Field::new(p, k).unwrap();
        let thetas = enumerate_valid_theta(p, k, m).unwrap();
        let slots = m * (m + 1) / 2;
        let expected = vector::all(&f, slots)
            .filter(|digits| {
                let mut t = MatFp::zeros(f.clone(), m, m);
                let mut it = digits.iter();
                for i in 0..m {
                    for j in i..m {
                        let x = *it.next().unwrap();
                        t.set(i, j, x);
                        t.set(j, i, x);
                    }
                }
                !leibniz_det(&t).is_zero()
            })
            .count();
        assert_eq!(thetas.len(), expected, "({p},{k},{m})");
        assert!(thetas.iter().all(|t| t.is_symmetric()));
    }
}

#[test]
fn both_relations_give_the_same_partition() {
    for (p, k, m) in [
        (3u64, 1u32, 1usize),
        (3, 1, 2),
        (5, 1, 1),
        (5, 1, 2),
        (3, 2, 1),
        (7, 1, 1),
    ] {
        let thetas = enumerate_valid_theta(p, k, m).unwrap();
        let a = partition_into_classes(&thetas, Relation::IsoTest).unwrap();
        let b = partition_into_classes(&thetas, Relation::BruteForce).unwrap();
        assert_eq!(a, b, "({p},{k},{m})");
    }
}

#[test]
fn brute_force_maps_are_multiplicative() {
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    for (p, k, m) in [(3u64, 1u32, 2usize), (5, 1, 2), (3, 2, 1), (7, 1, 1)] {
        let f = Field::new(p, k).unwrap();
        for _ in 0..5 {
            let a = random_algebra(&f, m + 1, 1, &mut rng);
            let b = random_algebra(&f, m + 1, 1, &mut rng);
            let unrestricted = brute_force_iso(&a, &b, Shape::Unrestricted);
            let blockdiag = brute_force_iso(&a, &b, Shape::Blockdiag);
            assert_eq!(unrestricted.is_ok(), blockdiag.is_ok());
            for map in [unrestricted, blockdiag].into_iter().flatten() {
                assert!(!leibniz_det(&map).is_zero());
                for x in vector::all(&f, m + 1).step_by(3) {
                    for y in vector::all(&f, m + 1).step_by(5) {
                        let lhs = map.vec_mul(&theta_product(&a, &x, &y)).unwrap();
                        let rhs = theta_product(&b, &map.vec_mul(&x).unwrap(), &map.vec_mul(&y).unwrap());
                        assert_eq!(lhs, rhs);
                    }
                }
            }
        }
    }
}

#[test]
fn search_limits() {
    assert_eq!(gl_order(3, 2), 48);
    assert_eq!(gl_order(5, 3), 1_488_000);
    let f = Field::prime(7).unwrap();
    let alg = AlgebraSpec::from_theta_matrix(&MatFp::identity(f, 3)).unwrap();
    assert!(matches!(
        brute_force_iso(&alg, &alg, Shape::Unrestricted),
        Err(Error::SearchSpaceTooLarge(_))
    ));
    assert!(enumerate_regular_subgroups_small(5, 3).is_err());
}

/// `P·M·P⁻¹ = γ(t·P⁻¹)` for every element, by explicit products.
fn assert_matches(table: &SubgroupTable, alg: &AlgebraSpec, basis: &MatFp) {
    let inv = basis.invert().unwrap();
    for e in table.elements() {
        let label = inv.vec_mul(&e.translation).unwrap();
        let moved = naive_mul(&naive_mul(basis, &e.linear), &inv);
        assert_eq!(moved, alg.gamma(&label).unwrap());
    }
    let f = alg.field();
    let ann = alg.annihilator();
    for (i, v) in ann.iter().enumerate() {
        assert_eq!(*v, vector::unit(f, alg.n(), alg.m() + i));
    }
}

#[test]
fn subgroup_census() {
    for (p, n, total) in [(3u64, 1usize, 1usize), (3, 2, 9), (3, 3, 339)] {
        let found = enumerate_regular_subgroups_small(p, n).unwrap();
        assert_eq!(found.len(), total, "p = {p}, n = {n}");
        let mut non_translation = 0;
        for s in &found {
            if s.table.non_translations() == 0 {
                assert!(s.matched.is_none());
                continue;
            }
            non_translation += 1;
            let m = s
                .matched
                .as_ref()
                .expect("every non-translation subgroup comes from a Θ");
            assert_matches(&s.table, &m.algebra, &m.basis);
        }
        assert_eq!(non_translation, total - 1);
    }
}

#[test]
fn census_contains_every_theta_subgroup() {
    let found = enumerate_regular_subgroups_small(3, 2).unwrap();
    let tables: Vec<&SubgroupTable> = found.iter().map(|s| &s.table).collect();
    let f = Field::prime(3).unwrap();
    for d in 1..2 {
        for alg in all_algebras(&f, 2, d) {
            let t = build_t_circ(&alg).unwrap();
            assert!(tables.contains(&&t));
        }
    }
}

fn assert_conjugates(t1: &SubgroupTable, t2: &SubgroupTable, g: &[usize]) {
    let size = g.len();
    let mut g_inv = vec![usize::MAX; size];
    for (x, &y) in g.iter().enumerate() {
        g_inv[y] = x;
    }
    assert!(g_inv.iter().all(|&x| x < size));
    let mut image: Vec<Vec<usize>> = t1
        .elements()
        .iter()
        .map(|phi| {
            let perm = as_permutation(phi).unwrap();
            (0..size).map(|y| g[perm[g_inv[y]]]).collect()
        })
        .collect();
    let mut target: Vec<Vec<usize>> = t2.elements().iter().map(|e| as_permutation(e).unwrap()).collect();
    image.sort();
    target.sort();
    assert_eq!(image, target);
}

#[test]
fn dixon_conjugators_conjugate() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for (p, n) in [(3u64, 2usize), (3, 3), (5, 2)] {
        let f = Field::prime(p).unwrap();
        let plus = translations(p, n).unwrap();
        for _ in 0..4 {
            let d = 1 + rng_index(&mut rng, n - 1);
            let a = build_t_circ(&random_algebra(&f, n, d, &mut rng)).unwrap();
            let b = build_t_circ(&random_algebra(&f, n, d, &mut rng)).unwrap();
            for (t1, t2) in [(&a, &b), (&plus, &a), (&a, &plus), (&plus, &plus)] {
                let g = dixon_conjugator(t1, t2).unwrap();
                assert_conjugates(t1, t2, &g);
            }
        }
    }
}

fn rng_index(rng: &mut ChaCha8Rng, n: usize) -> usize {
    use rand::Rng;
    rng.gen_range(0..n)
}
