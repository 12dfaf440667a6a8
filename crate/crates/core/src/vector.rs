//! Row vectors over a field, plus the index encoding used by the exhaustive
//! checks. The encoding reads the coordinates as base-`q` digits with the
//! first coordinate least significant.

use crate::error::{dim_mismatch, Result};
use crate::gf::{Field, FieldElement};

pub type Vector = Vec<FieldElement>;

pub fn zero(n: usize) -> Vector {
    vec![FieldElement::ZERO; n]
}

pub fn unit(field: &Field, n: usize, i: usize) -> Vector {
    let mut v = zero(n);
    v[i] = field.one();
    v
}

pub fn is_zero(v: &[FieldElement]) -> bool {
    v.iter().all(|x| x.is_zero())
}

pub fn check_len(v: &[FieldElement], n: usize) -> Result<()> {
    if v.len() == n {
        Ok(())
    } else {
        Err(dim_mismatch(format!("vector of length {} where {n} expected", v.len())))
    }
}

pub fn add(field: &Field, a: &[FieldElement], b: &[FieldElement]) -> Vector {
    debug_assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(&x, &y)| field.add(x, y)).collect()
}

pub fn sub(field: &Field, a: &[FieldElement], b: &[FieldElement]) -> Vector {
    debug_assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(&x, &y)| field.sub(x, y)).collect()
}

pub fn neg(field: &Field, a: &[FieldElement]) -> Vector {
    a.iter().map(|&x| field.neg(x)).collect()
}

pub fn scale(field: &Field, c: FieldElement, a: &[FieldElement]) -> Vector {
    a.iter().map(|&x| field.mul(c, x)).collect()
}

/// `acc += c * a`
pub fn axpy(field: &Field, acc: &mut [FieldElement], c: FieldElement, a: &[FieldElement]) {
    if c.is_zero() {
        return;
    }
    for (x, &y) in acc.iter_mut().zip(a) {
        *x = field.add(*x, field.mul(c, y));
    }
}

/// Number of vectors in `F^n`, or `None` if it overflows `u64`.
pub fn space_size(field: &Field, n: usize) -> Option<u64> {
    (field.order() as u64).checked_pow(n as u32)
}

pub fn index(field: &Field, v: &[FieldElement]) -> u64 {
    let q = field.order() as u64;
    v.iter().rev().fold(0u64, |acc, x| acc * q + x.index() as u64)
}

pub fn from_index(field: &Field, n: usize, mut idx: u64) -> Vector {
    let q = field.order() as u64;
    (0..n)
        .map(|_| {
            let d = (idx % q) as u32;
            idx /= q;
            FieldElement(d)
        })
        .collect()
}

/// Every vector of `F^n` in index order.
pub fn all(field: &Field, n: usize) -> impl Iterator<Item = Vector> + '_ {
    let size = space_size(field, n).expect("space too large to enumerate");
    (0..size).map(move |i| from_index(field, n, i))
}
