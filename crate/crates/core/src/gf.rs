//! Exact arithmetic in finite fields `F_{p^k}` of odd characteristic.
//!
//! A field is modelled as `F_p[x]/(f)` for a monic irreducible `f` of degree
//! `k`. Elements are stored as their index in the canonical element order:
//! the coefficient sequence read as a base-`p` number with the constant term
//! as the least significant digit. So in `F_9 = F_3[x]/(x^2+1)` the order is
//! `0, 1, 2, x, x+1, x+2, 2x, ...`.
//!
//! Multiplication in proper extensions goes through discrete log tables built
//! once per [`Field`]; prime fields use plain modular arithmetic.

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest supported field order.
pub const MAX_ORDER: u64 = 1 << 22;

/// Parameters of a concrete model of `F_{p^k}`.
///
/// `modulus` holds `k + 1` coefficients, low degree first, leading
/// coefficient 1. For `k = 1` the modulus is `x`, so elements are just
/// residues mod `p`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FieldSpec {
    pub p: u32,
    pub k: u32,
    pub modulus: Vec<u32>,
}

/// An element of some [`Field`], identified by its canonical index.
///
/// The derived ordering is the canonical element order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct FieldElement(pub(crate) u32);

impl FieldElement {
    pub const ZERO: FieldElement = FieldElement(0);

    pub fn index(self) -> u32 {
        self.0
    }

    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

/// Class of a nonzero element in `F^× / F^{×2}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum SquareClass {
    Square,
    NonSquare,
}

impl SquareClass {
    /// Class of a product, using that `F^×/F^{×2}` has order 2.
    pub fn times(self, other: SquareClass) -> SquareClass {
        if self == other {
            SquareClass::Square
        } else {
            SquareClass::NonSquare
        }
    }
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

fn check_characteristic(p: u64) -> Result<()> {
    if p == 2 {
        return Err(Error::EvenCharacteristic(p));
    }
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    Ok(())
}

/// Remainder of `a` modulo the monic polynomial `m` (both low degree first).
fn poly_rem(mut a: Vec<u64>, m: &[u64], p: u64) -> Vec<u64> {
    let dm = m.len() - 1;
    while a.len() > dm {
        let lead = a.pop().unwrap() % p;
        if lead != 0 {
            let off = a.len() - dm;
            for (i, &c) in m[..dm].iter().enumerate() {
                a[off + i] = (a[off + i] + (p - lead) * c) % p;
            }
        }
    }
    a
}

fn is_irreducible(f: &[u64], p: u64) -> bool {
    let k = f.len() - 1;
    // monic divisors of degree 1..=k/2
    for deg in 1..=k / 2 {
        let count = p.pow(deg as u32);
        for low in 0..count {
            let mut g = digits(low, p, deg);
            g.push(1);
            if poly_rem(f.to_vec(), &g, p).iter().all(|&c| c == 0) {
                return false;
            }
        }
    }
    true
}

fn digits(mut x: u64, p: u64, len: usize) -> Vec<u64> {
    let mut out = Vec::with_capacity(len);
    for _ in 0..len {
        out.push(x % p);
        x /= p;
    }
    out
}

/// First monic irreducible polynomial of degree `k` over `F_p`.
///
/// Candidates are scanned with the lower coefficients read as a base-`p`
/// counter, constant term spinning fastest. For `k = 1` this yields `x`.
pub fn find_irreducible(p: u64, k: u32) -> Result<Vec<u32>> {
    check_characteristic(p)?;
    if k == 0 {
        return Err(Error::InvalidModulus("degree must be at least 1".into()));
    }
    let order = p
        .checked_pow(k)
        .filter(|&q| q <= MAX_ORDER)
        .ok_or(Error::FieldTooLarge(u64::MAX))?;
    for low in 0..order {
        let mut f = digits(low, p, k as usize);
        f.push(1);
        if is_irreducible(&f, p) {
            return Ok(f.into_iter().map(|c| c as u32).collect());
        }
    }
    unreachable!("irreducible polynomials exist in every degree")
}

fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            out.push(d);
            while n.is_multiple_of(d) {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// A finite field `F_{p^k}` with odd `p`.
pub struct Field {
    spec: FieldSpec,
    p: u32,
    k: u32,
    order: u32,
    // discrete log tables, only for k > 1
    exp: Vec<u32>,
    log: Vec<u32>,
    nonsquare: FieldElement,
}

impl PartialEq for Field {
    fn eq(&self, other: &Self) -> bool {
        self.spec == other.spec
    }
}

impl Eq for Field {}

impl fmt::Debug for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "F_{}^{} mod {:?}", self.p, self.k, self.spec.modulus)
    }
}

impl Field {
    /// `F_{p^k}` with the modulus chosen by [`find_irreducible`].
    pub fn new(p: u64, k: u32) -> Result<Arc<Field>> {
        let modulus = find_irreducible(p, k)?;
        Self::from_spec(FieldSpec {
            p: p as u32,
            k,
            modulus,
        })
    }

    pub fn prime(p: u64) -> Result<Arc<Field>> {
        Self::new(p, 1)
    }

    /// Builds a field from an explicit spec, checking every invariant.
    pub fn from_spec(spec: FieldSpec) -> Result<Arc<Field>> {
        let p = spec.p as u64;
        check_characteristic(p)?;
        let k = spec.k;
        if k == 0 || spec.modulus.len() != k as usize + 1 {
            return Err(Error::InvalidModulus(format!(
                "expected {} coefficients, got {}",
                k + 1,
                spec.modulus.len()
            )));
        }
        if spec.modulus.iter().any(|&c| c as u64 >= p) {
            return Err(Error::InvalidModulus("coefficient out of range".into()));
        }
        if *spec.modulus.last().unwrap() != 1 {
            return Err(Error::InvalidModulus("modulus is not monic".into()));
        }
        let order = match p.checked_pow(k) {
            Some(q) if q <= MAX_ORDER => q,
            _ => return Err(Error::FieldTooLarge(p.saturating_pow(k))),
        };
        let modulus: Vec<u64> = spec.modulus.iter().map(|&c| c as u64).collect();
        if !is_irreducible(&modulus, p) {
            return Err(Error::InvalidModulus("modulus is reducible".into()));
        }
        let mut field = Field {
            spec,
            p: p as u32,
            k,
            order: order as u32,
            exp: Vec::new(),
            log: Vec::new(),
            nonsquare: FieldElement(0),
        };
        if k > 1 {
            field.build_log_tables(&modulus);
        }
        field.nonsquare = field
            .elements()
            .skip(1)
            .find(|&a| field.is_square(a) == Ok(SquareClass::NonSquare))
            .expect("odd order fields have nonsquares");
        Ok(Arc::new(field))
    }

    fn slow_mul(&self, a: u32, b: u32, modulus: &[u64]) -> u32 {
        let p = self.p as u64;
        let k = self.k as usize;
        let x = digits(a as u64, p, k);
        let y = digits(b as u64, p, k);
        let mut prod = vec![0u64; 2 * k - 1];
        for (i, &xi) in x.iter().enumerate() {
            for (j, &yj) in y.iter().enumerate() {
                prod[i + j] = (prod[i + j] + xi * yj) % p;
            }
        }
        let r = poly_rem(prod, modulus, p);
        r.iter().rev().fold(0u64, |acc, &c| acc * p + c) as u32
    }

    fn build_log_tables(&mut self, modulus: &[u64]) {
        let q = self.order;
        let factors = prime_factors(q as u64 - 1);
        let slow_pow = |f: &Field, g: u32, mut e: u64| {
            let mut base = g;
            let mut acc = 1u32;
            while e > 0 {
                if e & 1 == 1 {
                    acc = f.slow_mul(acc, base, modulus);
                }
                base = f.slow_mul(base, base, modulus);
                e >>= 1;
            }
            acc
        };
        let generator = (2..q)
            .find(|&g| factors.iter().all(|&r| slow_pow(self, g, (q as u64 - 1) / r) != 1))
            .expect("multiplicative group is cyclic");
        let mut exp = Vec::with_capacity(q as usize - 1);
        let mut log = vec![0u32; q as usize];
        let mut x = 1u32;
        for i in 0..q - 1 {
            exp.push(x);
            log[x as usize] = i;
            x = self.slow_mul(x, generator, modulus);
        }
        self.exp = exp;
        self.log = log;
    }

    pub fn spec(&self) -> &FieldSpec {
        &self.spec
    }

    pub fn characteristic(&self) -> u32 {
        self.p
    }

    pub fn degree(&self) -> u32 {
        self.k
    }

    /// Number of elements, `p^k`.
    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn zero(&self) -> FieldElement {
        FieldElement(0)
    }

    pub fn one(&self) -> FieldElement {
        FieldElement(1)
    }

    /// All elements in canonical order.
    pub fn elements(&self) -> impl Iterator<Item = FieldElement> {
        (0..self.order).map(FieldElement)
    }

    pub fn element(&self, index: u32) -> Result<FieldElement> {
        if index < self.order {
            Ok(FieldElement(index))
        } else {
            Err(Error::InvalidInput(format!(
                "element index {index} out of range for field of order {}",
                self.order
            )))
        }
    }

    /// Image of an integer under `Z -> F_p -> F_{p^k}`.
    pub fn from_int(&self, n: i64) -> FieldElement {
        FieldElement(n.rem_euclid(self.p as i64) as u32)
    }

    pub fn from_coeffs(&self, coeffs: &[u32]) -> Result<FieldElement> {
        if coeffs.len() != self.k as usize || coeffs.iter().any(|&c| c >= self.p) {
            return Err(Error::InvalidInput(format!(
                "expected {} coefficients in [0, {})",
                self.k, self.p
            )));
        }
        Ok(FieldElement(coeffs.iter().rev().fold(0u32, |acc, &c| acc * self.p + c)))
    }

    /// Coefficient sequence, low degree first, always of length `k`.
    pub fn coeffs(&self, a: FieldElement) -> Vec<u32> {
        digits(a.0 as u64, self.p as u64, self.k as usize)
            .into_iter()
            .map(|c| c as u32)
            .collect()
    }

    pub fn add(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        let p = self.p;
        if self.k == 1 {
            let s = a.0 + b.0;
            return FieldElement(if s >= p { s - p } else { s });
        }
        let (mut x, mut y, mut pw, mut r) = (a.0, b.0, 1u32, 0u32);
        for _ in 0..self.k {
            let d = x % p + y % p;
            r += if d >= p { d - p } else { d } * pw;
            pw = pw.wrapping_mul(p);
            x /= p;
            y /= p;
        }
        FieldElement(r)
    }

    pub fn neg(&self, a: FieldElement) -> FieldElement {
        let p = self.p;
        if self.k == 1 {
            return FieldElement(if a.0 == 0 { 0 } else { p - a.0 });
        }
        let (mut x, mut pw, mut r) = (a.0, 1u32, 0u32);
        for _ in 0..self.k {
            let d = x % p;
            r += if d == 0 { 0 } else { p - d } * pw;
            pw = pw.wrapping_mul(p);
            x /= p;
        }
        FieldElement(r)
    }

    pub fn sub(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        self.add(a, self.neg(b))
    }

    pub fn mul(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        if a.0 == 0 || b.0 == 0 {
            return FieldElement(0);
        }
        if self.k == 1 {
            return FieldElement(((a.0 as u64 * b.0 as u64) % self.p as u64) as u32);
        }
        let n = self.order - 1;
        let mut e = self.log[a.0 as usize] + self.log[b.0 as usize];
        if e >= n {
            e -= n;
        }
        FieldElement(self.exp[e as usize])
    }

    /// Multiplication by an integer scalar (repeated addition).
    pub fn mul_int(&self, a: FieldElement, n: i64) -> FieldElement {
        self.mul(a, self.from_int(n))
    }

    pub fn inv(&self, a: FieldElement) -> Result<FieldElement> {
        if a.0 == 0 {
            return Err(Error::DivisionByZero);
        }
        if self.k == 1 {
            return Ok(self.pow(a, self.order as u64 - 2));
        }
        let n = self.order - 1;
        let l = self.log[a.0 as usize];
        Ok(FieldElement(self.exp[((n - l) % n) as usize]))
    }

    pub fn div(&self, a: FieldElement, b: FieldElement) -> Result<FieldElement> {
        Ok(self.mul(a, self.inv(b)?))
    }

    pub fn pow(&self, a: FieldElement, mut e: u64) -> FieldElement {
        let mut base = a;
        let mut acc = self.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    /// Euler's criterion: `a` is a square iff `a^{(q-1)/2} = 1`.
    pub fn is_square(&self, a: FieldElement) -> Result<SquareClass> {
        if a.is_zero() {
            return Err(Error::ZeroInput);
        }
        if self.pow(a, (self.order as u64 - 1) / 2) == self.one() {
            Ok(SquareClass::Square)
        } else {
            Ok(SquareClass::NonSquare)
        }
    }

    /// The first nonsquare in canonical order, fixed at construction.
    pub fn find_nonsquare(&self) -> FieldElement {
        self.nonsquare
    }

    /// The canonically smaller square root of `a`, found by exhaustive search.
    pub fn sqrt(&self, a: FieldElement) -> Result<FieldElement> {
        if self.is_square(a)? == SquareClass::NonSquare {
            return Err(Error::NotASquare);
        }
        Ok(self
            .elements()
            .skip(1)
            .find(|&r| self.mul(r, r) == a)
            .expect("Euler criterion guarantees a root"))
    }

    /// Human-readable polynomial form, e.g. `2+x`.
    pub fn format(&self, a: FieldElement) -> String {
        if self.k == 1 {
            return a.0.to_string();
        }
        let terms: Vec<String> = self
            .coeffs(a)
            .iter()
            .enumerate()
            .filter(|(_, &c)| c != 0)
            .map(|(i, &c)| match (i, c) {
                (0, c) => c.to_string(),
                (1, 1) => "x".into(),
                (1, c) => format!("{c}x"),
                (i, 1) => format!("x^{i}"),
                (i, c) => format!("{c}x^{i}"),
            })
            .collect();
        if terms.is_empty() {
            "0".into()
        } else {
            terms.join("+")
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn f9() -> Arc<Field> {
        Field::new(3, 2).unwrap()
    }

    #[test]
    fn find_irreducible_examples() {
        assert_eq!(find_irreducible(3, 1).unwrap(), vec![0, 1]);
        assert_eq!(find_irreducible(3, 2).unwrap(), vec![1, 0, 1]);
        assert_eq!(find_irreducible(2, 4), Err(Error::EvenCharacteristic(2)));
        assert_eq!(find_irreducible(9, 1), Err(Error::NotPrime(9)));
        // x^2+1 is reducible mod 5 (2^2 = -1), x^2+2 is the first hit
        assert_eq!(find_irreducible(5, 2).unwrap(), vec![2, 0, 1]);
    }

    #[test]
    fn reducible_modulus_rejected() {
        let spec = FieldSpec {
            p: 5,
            k: 2,
            modulus: vec![1, 0, 1],
        };
        assert!(matches!(Field::from_spec(spec), Err(Error::InvalidModulus(_))));
    }

    #[test]
    fn basic_arithmetic() {
        let f3 = Field::prime(3).unwrap();
        assert_eq!(f3.mul(FieldElement(2), FieldElement(2)), FieldElement(1));
        let f5 = Field::prime(5).unwrap();
        assert_eq!(f5.inv(FieldElement(3)).unwrap(), FieldElement(2));
        assert_eq!(f5.inv(FieldElement(0)), Err(Error::DivisionByZero));
        let f9 = f9();
        let x = f9.from_coeffs(&[0, 1]).unwrap();
        assert_eq!(f9.mul(x, x), FieldElement(2));
        assert_eq!(f9.format(f9.from_coeffs(&[2, 1]).unwrap()), "2+x");
    }

    #[test]
    fn square_classes() {
        let f3 = Field::prime(3).unwrap();
        assert_eq!(f3.is_square(FieldElement(2)), Ok(SquareClass::NonSquare));
        assert_eq!(f3.is_square(FieldElement(0)), Err(Error::ZeroInput));
        let f9 = f9();
        assert_eq!(f9.is_square(FieldElement(2)), Ok(SquareClass::Square));
        assert_eq!(f9.is_square(f9.one()), Ok(SquareClass::Square));
    }

    #[test]
    fn nonsquares() {
        assert_eq!(Field::prime(3).unwrap().find_nonsquare(), FieldElement(2));
        assert_eq!(Field::prime(5).unwrap().find_nonsquare(), FieldElement(2));
        let f9 = f9();
        assert_eq!(f9.coeffs(f9.find_nonsquare()), vec![1, 1]);
    }

    #[test]
    fn square_roots() {
        let f5 = Field::prime(5).unwrap();
        assert_eq!(f5.sqrt(FieldElement(4)).unwrap(), FieldElement(2));
        assert_eq!(f5.sqrt(f5.one()).unwrap(), f5.one());
        let f3 = Field::prime(3).unwrap();
        assert_eq!(f3.sqrt(FieldElement(2)), Err(Error::NotASquare));
        assert_eq!(f3.sqrt(FieldElement(0)), Err(Error::ZeroInput));
    }

    #[test]
    fn square_count_matches_half_the_group() {
        for (p, k) in [(3, 1), (3, 2), (5, 2), (7, 2), (3, 3), (11, 1)] {
            let f = Field::new(p, k).unwrap();
            let squares = f
                .elements()
                .skip(1)
                .filter(|&a| f.is_square(a) == Ok(SquareClass::Square))
                .count();
            assert_eq!(squares as u32, (f.order() - 1) / 2);
        }
    }

    fn field_strategy() -> impl Strategy<Value = Arc<Field>> {
        prop::sample::select(vec![(3u64, 1u32), (5, 1), (3, 2), (5, 2), (7, 2), (3, 3), (13, 1)])
            .prop_map(|(p, k)| Field::new(p, k).unwrap())
    }

    proptest! {
        #[test]
        fn inverse_and_frobenius(f in field_strategy(), seed in any::<u32>()) {
            let a = FieldElement(seed % f.order());
            prop_assert_eq!(f.pow(a, f.order() as u64), a);
            if !a.is_zero() {
                prop_assert_eq!(f.mul(a, f.inv(a).unwrap()), f.one());
            }
            prop_assert_eq!(f.add(a, f.neg(a)), f.zero());
        }

        #[test]
        fn ring_axioms(f in field_strategy(), x in any::<u32>(), y in any::<u32>(), z in any::<u32>()) {
            let q = f.order();
            let (a, b, c) = (FieldElement(x % q), FieldElement(y % q), FieldElement(z % q));
            prop_assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
            prop_assert_eq!(f.mul(f.mul(a, b), c), f.mul(a, f.mul(b, c)));
            prop_assert_eq!(f.sub(f.add(a, b), b), a);
        }
    }
}
