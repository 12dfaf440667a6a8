//! Generators and brute-force references shared by the integration tests.
#![allow(dead_code, clippy::needless_range_loop)]

use std::collections::HashSet;
use std::sync::Arc;

use rand::Rng;

use fpk_brace::algebra::{AlgebraSpec, DefiningMatrix, StructureConstantAlgebra};
use fpk_brace::vector::{self, Vector};
use fpk_brace::{Field, FieldElement, MatFp};

pub fn random_element<R: Rng>(f: &Field, rng: &mut R) -> FieldElement {
    f.element(rng.gen_range(0..f.order())).unwrap()
}

pub fn random_nonzero<R: Rng>(f: &Field, rng: &mut R) -> FieldElement {
    f.element(rng.gen_range(1..f.order())).unwrap()
}

pub fn random_vector<R: Rng>(f: &Field, n: usize, rng: &mut R) -> Vector {
    (0..n).map(|_| random_element(f, rng)).collect()
}

pub fn random_matrix<R: Rng>(f: &Arc<Field>, r: usize, c: usize, rng: &mut R) -> MatFp {
    let data = (0..r * c).map(|_| random_element(f, rng)).collect();
    MatFp::new(f.clone(), r, c, data).unwrap()
}

pub fn random_invertible<R: Rng>(f: &Arc<Field>, n: usize, rng: &mut R) -> MatFp {
    loop {
        let m = random_matrix(f, n, n, rng);
        if !m.det().unwrap().is_zero() {
            return m;
        }
    }
}

pub fn random_symmetric<R: Rng>(f: &Arc<Field>, n: usize, rng: &mut R) -> MatFp {
    let mut m = MatFp::zeros(f.clone(), n, n);
    for i in 0..n {
        for j in i..n {
            let x = random_element(f, rng);
            m.set(i, j, x);
            m.set(j, i, x);
        }
    }
    m
}

/// A random algebra with the given shape, retried until `Θ` is valid.
pub fn random_algebra<R: Rng>(f: &Arc<Field>, n: usize, d: usize, rng: &mut R) -> AlgebraSpec {
    let m = n - d;
    loop {
        let mut cells = vec![vec![Vec::new(); m]; m];
        for i in 0..m {
            for j in i..m {
                let c = random_vector(f, d, rng);
                cells[i][j] = c.clone();
                cells[j][i] = c;
            }
        }
        let theta = DefiningMatrix::from_cells(cells).unwrap();
        if let Ok(a) = AlgebraSpec::new(f.clone(), n, d, theta) {
            return a;
        }
    }
}

/// Every valid algebra of shape `(n, d)` over `f`, by brute force over all
/// symmetric grids.
pub fn all_algebras(f: &Arc<Field>, n: usize, d: usize) -> Vec<AlgebraSpec> {
    let m = n - d;
    let slots = m * (m + 1) / 2;
    let total = vector::space_size(f, slots * d).unwrap();
    (0..total)
        .filter_map(|idx| {
            let digits = vector::from_index(f, slots * d, idx);
            let mut chunks = digits.chunks(d);
            let mut cells = vec![vec![Vec::new(); m]; m];
            for i in 0..m {
                for j in i..m {
                    let c = chunks.next().unwrap().to_vec();
                    cells[i][j] = c.clone();
                    cells[j][i] = c;
                }
            }
            AlgebraSpec::new(f.clone(), n, d, DefiningMatrix::from_cells(cells).unwrap()).ok()
        })
        .collect()
}

/// Squares of all nonzero elements, by direct multiplication.
pub fn squares(f: &Field) -> HashSet<FieldElement> {
    f.elements().skip(1).map(|x| f.mul(x, x)).collect()
}

/// Monomial algebra on a downward-closed set of positive-degree monomials
/// `x^a y^b`: products leaving the set are zero. Commutative, associative
/// and nilpotent.
pub fn monomial_algebra(f: &Arc<Field>, monomials: &[(u32, u32)]) -> StructureConstantAlgebra {
    let n = monomials.len();
    let mut sca = StructureConstantAlgebra::zero(f.clone(), n);
    for (i, &(a, b)) in monomials.iter().enumerate() {
        for (j, &(c, e)) in monomials.iter().enumerate() {
            if let Some(l) = monomials.iter().position(|&m| m == (a + c, b + e)) {
                sca.set(i, j, l, f.one());
            }
        }
    }
    sca
}

/// Downward-closed sets of positive-degree monomials in two variables with
/// at most `max` elements.
pub fn monomial_sets(max: usize) -> Vec<Vec<(u32, u32)>> {
    let all: Vec<(u32, u32)> = (0..=max as u32)
        .flat_map(|a| (0..=max as u32).map(move |b| (a, b)))
        .filter(|&(a, b)| a + b >= 1 && (a + b) as usize <= max)
        .collect();
    let closed = |s: &[(u32, u32)]| {
        s.iter().all(|&(a, b)| {
            (a == 0 || a + b == 1 || s.contains(&(a - 1, b))) && (b == 0 || a + b == 1 || s.contains(&(a, b - 1)))
        })
    };
    let mut out = Vec::new();
    for mask in 1u32..(1 << all.len()) {
        if mask.count_ones() as usize > max {
            continue;
        }
        let s: Vec<(u32, u32)> = (0..all.len()).filter(|&i| mask >> i & 1 == 1).map(|i| all[i]).collect();
        if closed(&s) {
            out.push(s);
        }
    }
    out
}

pub fn algebra_from_ints(p: u64, rows: &[&[i64]]) -> AlgebraSpec {
    let f = Field::prime(p).unwrap();
    AlgebraSpec::from_theta_matrix(&MatFp::from_ints(f, rows).unwrap()).unwrap()
}

/// `a·b` read straight off the defining matrix.
pub fn theta_product(alg: &AlgebraSpec, a: &[FieldElement], b: &[FieldElement]) -> Vector {
    let f = alg.field();
    let (n, d, m) = (alg.n(), alg.d(), alg.m());
    let mut out = vec![f.zero(); n];
    for i in 0..m {
        for j in 0..m {
            let c = f.mul(a[i], b[j]);
            if c.is_zero() {
                continue;
            }
            for (l, &t) in alg.theta().cell(i, j).iter().enumerate() {
                out[m + l] = f.add(out[m + l], f.mul(c, t));
            }
        }
    }
    debug_assert_eq!(out.len(), m + d);
    out
}

pub fn theta_circle(alg: &AlgebraSpec, a: &[FieldElement], b: &[FieldElement]) -> Vector {
    let f = alg.field();
    let ab = theta_product(alg, a, b);
    (0..a.len()).map(|i| f.add(f.add(a[i], b[i]), ab[i])).collect()
}

pub fn naive_mul(a: &MatFp, b: &MatFp) -> MatFp {
    let f = a.field();
    let mut out = MatFp::zeros(f.clone(), a.rows(), b.cols());
    for i in 0..a.rows() {
        for j in 0..b.cols() {
            let mut s = f.zero();
            for k in 0..a.cols() {
                s = f.add(s, f.mul(a.get(i, k), b.get(k, j)));
            }
            out.set(i, j, s);
        }
    }
    out
}

/// `A·B·Aᵀ` by explicit sums.
pub fn naive_congruence(a: &MatFp, b: &MatFp) -> MatFp {
    naive_mul(&naive_mul(a, b), &a.transpose())
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for pos in 0..n {
            let mut q = p.clone();
            q.insert(pos, n - 1);
            out.push(q);
        }
    }
    out
}

fn parity(p: &[usize]) -> bool {
    let mut inversions = 0;
    for i in 0..p.len() {
        for j in i + 1..p.len() {
            inversions += (p[i] > p[j]) as usize;
        }
    }
    inversions % 2 == 1
}

/// Leibniz expansion.
pub fn leibniz_det(m: &MatFp) -> FieldElement {
    let f = m.field();
    let mut det = f.zero();
    for p in permutations(m.rows()) {
        let term = (0..m.rows()).fold(f.one(), |acc, i| f.mul(acc, m.get(i, p[i])));
        det = if parity(&p) { f.sub(det, term) } else { f.add(det, term) };
    }
    det
}
