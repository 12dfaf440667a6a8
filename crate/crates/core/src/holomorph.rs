//! Affine maps `x ↦ x·L + t` on row vectors and the regular subgroups
//! `T_∘ = {τ_a = γ_a σ_a}` of `AGL(V)` built from a defining matrix.

use std::collections::HashMap;
use std::sync::Arc;

use rayon::prelude::*;

use crate::algebra::AlgebraSpec;
use crate::error::{dim_mismatch, Error, Result};
use crate::gf::Field;
use crate::matfp::{same_field, MatFp};
use crate::vector::{self, Vector};

/// Largest `|V|` for which [`build_t_circ`] materializes the table.
pub const TABLE_LIMIT: u64 = 625;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AffineMap {
    pub linear: MatFp,
    pub translation: Vector,
}

impl AffineMap {
    pub fn new(linear: MatFp, translation: Vector) -> Result<Self> {
        if !linear.is_square_matrix() {
            return Err(dim_mismatch("linear part must be square"));
        }
        vector::check_len(&translation, linear.rows())?;
        Ok(AffineMap { linear, translation })
    }

    pub fn identity(field: Arc<Field>, n: usize) -> Self {
        AffineMap {
            linear: MatFp::identity(field, n),
            translation: vector::zero(n),
        }
    }

    pub fn field(&self) -> &Arc<Field> {
        self.linear.field()
    }

    pub fn n(&self) -> usize {
        self.translation.len()
    }

    pub fn is_identity(&self) -> bool {
        self.linear.is_identity() && vector::is_zero(&self.translation)
    }

    pub fn apply(&self, x: &[crate::FieldElement]) -> Result<Vector> {
        let xl = self.linear.vec_mul(x)?;
        Ok(vector::add(self.field(), &xl, &self.translation))
    }

    /// Image of `0`, the label of the map inside a regular subgroup.
    pub fn label(&self) -> &[crate::FieldElement] {
        &self.translation
    }

    pub fn pow(&self, e: u64) -> Result<AffineMap> {
        let mut acc = AffineMap::identity(self.field().clone(), self.n());
        for _ in 0..e {
            acc = compose(&acc, self)?;
        }
        Ok(acc)
    }

    /// Inverse via matrix inversion: `y ↦ y·L⁻¹ − t·L⁻¹`.
    pub fn inverse(&self) -> Result<AffineMap> {
        let inv = self.linear.invert()?;
        let t = vector::neg(self.field(), &inv.vec_mul(&self.translation)?);
        Ok(AffineMap {
            linear: inv,
            translation: t,
        })
    }

    /// Inverse as the `(p−1)`-fold power, checked against [`AffineMap::inverse`].
    pub fn inverse_by_power(&self) -> Result<AffineMap> {
        let p = self.field().characteristic() as u64;
        let by_power = self.pow(p - 1)?;
        if by_power != self.inverse()? {
            return Err(Error::IdentityMismatch(format!(
                "{}-th power of {self:?} is not its inverse",
                p - 1
            )));
        }
        Ok(by_power)
    }

    fn key(&self) -> (Vec<u32>, Vec<u32>) {
        (
            self.linear.entries().iter().map(|x| x.index()).collect(),
            self.translation.iter().map(|x| x.index()).collect(),
        )
    }
}

/// Apply `f`, then `g`.
pub fn compose(f: &AffineMap, g: &AffineMap) -> Result<AffineMap> {
    same_field(f.field(), g.field())?;
    if f.n() != g.n() {
        return Err(dim_mismatch(format!("composing maps on F^{} and F^{}", f.n(), g.n())));
    }
    let t = g.linear.vec_mul(&f.translation)?;
    Ok(AffineMap {
        linear: f.linear.mul(&g.linear)?,
        translation: vector::add(f.field(), &t, &g.translation),
    })
}

/// `σ_a : x ↦ x + a`.
pub fn sigma(field: &Arc<Field>, a: &[crate::FieldElement]) -> AffineMap {
    AffineMap {
        linear: MatFp::identity(field.clone(), a.len()),
        translation: a.to_vec(),
    }
}

/// `τ_a = γ_a σ_a : x ↦ x·γ_a + a`, so that `b·τ_a = b∘a`.
pub fn tau(a: &[crate::FieldElement], alg: &AlgebraSpec) -> Result<AffineMap> {
    Ok(AffineMap {
        linear: alg.gamma(a)?,
        translation: a.to_vec(),
    })
}

/// `|V|` affine maps indexed by label: entry `i` should send `0` to the
/// vector with index `i`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SubgroupTable {
    field: Arc<Field>,
    n: usize,
    elements: Vec<AffineMap>,
}

impl SubgroupTable {
    pub fn new(field: Arc<Field>, n: usize, elements: Vec<AffineMap>) -> Result<Self> {
        for e in &elements {
            if e.n() != n || e.linear.rows() != n {
                return Err(dim_mismatch("table entry of the wrong dimension"));
            }
            if **e.field() != *field {
                return Err(Error::SpecMismatch);
            }
        }
        Ok(SubgroupTable { field, n, elements })
    }

    /// `T₊`, the translations.
    pub fn translations(field: Arc<Field>, n: usize) -> Result<Self> {
        let size = table_size(&field, n)?;
        let elements = (0..size)
            .map(|i| sigma(&field, &vector::from_index(&field, n, i)))
            .collect();
        Ok(SubgroupTable { field, n, elements })
    }

    pub fn field(&self) -> &Arc<Field> {
        &self.field
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn elements(&self) -> &[AffineMap] {
        &self.elements
    }

    pub fn get(&self, i: usize) -> &AffineMap {
        &self.elements[i]
    }

    /// Element with the given label, if its label matches its slot.
    pub fn by_label(&self, a: &[crate::FieldElement]) -> Option<&AffineMap> {
        let i = vector::index(&self.field, a) as usize;
        self.elements.get(i).filter(|e| e.label() == a)
    }

    pub fn replace(&mut self, i: usize, map: AffineMap) {
        self.elements[i] = map;
    }

    /// Maps whose linear part is not the identity.
    pub fn non_translations(&self) -> usize {
        self.elements.iter().filter(|e| !e.linear.is_identity()).count()
    }

    fn lookup(&self) -> HashMap<(Vec<u32>, Vec<u32>), usize> {
        self.elements.iter().enumerate().map(|(i, e)| (e.key(), i)).collect()
    }
}

fn table_size(field: &Arc<Field>, n: usize) -> Result<u64> {
    match vector::space_size(field, n) {
        Some(s) if s <= TABLE_LIMIT => Ok(s),
        Some(s) => Err(Error::TooLarge(s)),
        None => Err(Error::TooLarge(u64::MAX)),
    }
}

/// `T_∘ = {τ_a : a ∈ V}` labelled by `a`.
pub fn build_t_circ(alg: &AlgebraSpec) -> Result<SubgroupTable> {
    let f = alg.field();
    let n = alg.n();
    let size = table_size(f, n)?;
    let elements = (0..size)
        .into_par_iter()
        .map(|i| tau(&vector::from_index(f, n, i), alg))
        .collect::<Result<Vec<_>>>()?;
    Ok(SubgroupTable {
        field: f.clone(),
        n,
        elements,
    })
}

/// Outcome of one structural check; the witness lists table indices (or,
/// for normalization, the index of `a` in `V` followed by a table index).
#[derive(Debug, Clone, PartialEq, Eq, serde::Serialize)]
pub struct PropertyCheck {
    pub pass: bool,
    pub witness: Option<Vec<usize>>,
}

impl PropertyCheck {
    fn from_witness(w: Option<Vec<usize>>) -> Self {
        PropertyCheck {
            pass: w.is_none(),
            witness: w,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, serde::Serialize)]
pub struct SubgroupReport {
    pub closure: PropertyCheck,
    pub abelian: PropertyCheck,
    pub regular: PropertyCheck,
    pub exponent_p: PropertyCheck,
    pub normalized: PropertyCheck,
}

impl SubgroupReport {
    pub fn all_pass(&self) -> bool {
        [
            &self.closure,
            &self.abelian,
            &self.regular,
            &self.exponent_p,
            &self.normalized,
        ]
        .iter()
        .all(|c| c.pass)
    }
}

fn first_pair(len: usize, bad: impl Fn(usize, usize) -> bool + Sync) -> Option<Vec<usize>> {
    (0..len)
        .into_par_iter()
        .find_map_first(|i| (0..len).find(|&j| bad(i, j)).map(|j| vec![i, j]))
}

/// Checks group closure, commutativity, regularity, exponent `p` and
/// normalization by `T₊`. With `alg` given, conjugates are also compared
/// against `σ_a τ_b σ_a⁻¹ = τ_{a·γ_b + b + (p−1)a}`.
pub fn verify_subgroup_properties(t: &SubgroupTable, alg: Option<&AlgebraSpec>) -> SubgroupReport {
    let f = &t.field;
    let n = t.n;
    let len = t.len();
    let index = t.lookup();
    let contains = |m: &AffineMap| index.contains_key(&m.key());
    let el = &t.elements;

    let closure = first_pair(len, |i, j| {
        !compose(&el[i], &el[j]).map(|c| contains(&c)).unwrap_or(false)
    });
    let abelian = first_pair(len, |i, j| {
        j > i && compose(&el[i], &el[j]).ok() != compose(&el[j], &el[i]).ok()
    });

    let expected = vector::space_size(f, n).unwrap_or(u64::MAX);
    let regular = if len as u64 != expected {
        Some(vec![len])
    } else {
        let mut seen: HashMap<u64, usize> = HashMap::new();
        el.iter().enumerate().find_map(|(i, e)| {
            let label = vector::index(f, e.label()) as usize;
            if label != i {
                return Some(vec![i]);
            }
            seen.insert(label as u64, i).map(|j| vec![j, i])
        })
    };

    let p = f.characteristic() as u64;
    let exponent_p = (0..len)
        .into_par_iter()
        .find_first(|&i| !el[i].pow(p).map(|m| m.is_identity()).unwrap_or(false))
        .map(|i| vec![i]);

    let normalized = (0..expected.min(u32::MAX as u64) as usize)
        .into_par_iter()
        .find_map_first(|ai| {
            let a = vector::from_index(f, n, ai as u64);
            let s = sigma(f, &a);
            let s_inv = sigma(f, &vector::neg(f, &a));
            (0..len)
                .find(|&j| {
                    let conj = compose(&s, &el[j]).and_then(|m| compose(&m, &s_inv));
                    let Ok(conj) = conj else { return true };
                    if !contains(&conj) {
                        return true;
                    }
                    match alg {
                        Some(alg) => conjugation_label(&a, el[j].label(), alg)
                            .and_then(|c| tau(&c, alg))
                            .map(|m| m != conj)
                            .unwrap_or(true),
                        None => false,
                    }
                })
                .map(|j| vec![ai, j])
        });

    SubgroupReport {
        closure: PropertyCheck::from_witness(closure),
        abelian: PropertyCheck::from_witness(abelian),
        regular: PropertyCheck::from_witness(regular),
        exponent_p: PropertyCheck::from_witness(exponent_p),
        normalized: PropertyCheck::from_witness(normalized),
    }
}

/// `a·γ_b + b + (p−1)a`
fn conjugation_label(a: &[crate::FieldElement], b: &[crate::FieldElement], alg: &AlgebraSpec) -> Result<Vector> {
    let f = alg.field();
    let p = f.characteristic() as i64;
    let mut out = alg.gamma(b)?.vec_mul(a)?;
    out = vector::add(f, &out, b);
    vector::axpy(f, &mut out, f.from_int(p - 1), a);
    Ok(out)
}

/// `σ_a τ_b σ_a⁻¹`, checked against `τ_{a·γ_b + b + (p−1)a}`.
pub fn conjugate_sigma_tau(
    a: &[crate::FieldElement],
    b: &[crate::FieldElement],
    alg: &AlgebraSpec,
) -> Result<AffineMap> {
    let f = alg.field();
    vector::check_len(a, alg.n())?;
    let s = sigma(f, a);
    let conj = compose(&compose(&s, &tau(b, alg)?)?, &s.inverse_by_power()?)?;
    let expected = tau(&conjugation_label(a, b, alg)?, alg)?;
    if conj != expected {
        return Err(Error::IdentityMismatch(format!(
            "σ_a τ_b σ_a⁻¹ = {conj:?}, expected {expected:?}"
        )));
    }
    Ok(conj)
}

/// `σ_a⁻¹ τ_b⁻¹ σ_a τ_b`, checked against `σ_{a·b}`.
pub fn commutator_sigma_tau(
    a: &[crate::FieldElement],
    b: &[crate::FieldElement],
    alg: &AlgebraSpec,
) -> Result<AffineMap> {
    let f = alg.field();
    vector::check_len(a, alg.n())?;
    let s = sigma(f, a);
    let t = tau(b, alg)?;
    let c = [s.inverse_by_power()?, t.inverse_by_power()?, s, t]
        .into_iter()
        .try_fold(AffineMap::identity(f.clone(), alg.n()), |acc, m| compose(&acc, &m))?;
    let expected = sigma(f, &alg.product(a, b)?);
    if c != expected {
        return Err(Error::IdentityMismatch(format!(
            "[σ_a, τ_b] = {c:?}, expected {expected:?}"
        )));
    }
    Ok(c)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn alg(p: u64, rows: &[&[i64]]) -> AlgebraSpec {
        let f = Field::prime(p).unwrap();
        AlgebraSpec::from_theta_matrix(&MatFp::from_ints(f, rows).unwrap()).unwrap()
    }

    fn v(f: &Field, xs: &[i64]) -> Vector {
        xs.iter().map(|&x| f.from_int(x)).collect()
    }

    #[test]
    fn tau_examples() {
        let a = alg(3, &[&[1]]);
        let f = a.field().clone();
        assert!(tau(&vector::zero(2), &a).unwrap().is_identity());
        let t = tau(&v(&f, &[1, 0]), &a).unwrap();
        assert_eq!(t.linear, MatFp::from_ints(f.clone(), &[&[1, 1], &[0, 1]]).unwrap());
        assert_eq!(t.translation, v(&f, &[1, 0]));
        assert_eq!(t.apply(&v(&f, &[1, 0])).unwrap(), v(&f, &[2, 1]));
        let en = v(&f, &[0, 1]);
        assert_eq!(tau(&en, &a).unwrap(), sigma(&f, &en));
        assert!(matches!(tau(&v(&f, &[1]), &a), Err(Error::DimensionMismatch(_))));
    }

    #[test]
    fn compose_examples() {
        let a = alg(3, &[&[1]]);
        let f = a.field().clone();
        let id = AffineMap::identity(f.clone(), 2);
        let x = tau(&v(&f, &[2, 1]), &a).unwrap();
        assert_eq!(compose(&x, &id).unwrap(), x);
        for p in vector::all(&f, 2) {
            for q in vector::all(&f, 2) {
                let sum = vector::add(&f, &p, &q);
                assert_eq!(compose(&sigma(&f, &p), &sigma(&f, &q)).unwrap(), sigma(&f, &sum));
                let circ = a.circle(&p, &q).unwrap();
                assert_eq!(
                    compose(&tau(&p, &a).unwrap(), &tau(&q, &a).unwrap()).unwrap(),
                    tau(&circ, &a).unwrap()
                );
            }
        }
        let other = AffineMap::identity(f, 3);
        assert!(matches!(compose(&id, &other), Err(Error::DimensionMismatch(_))));
    }

    #[test]
    fn inverse_agrees_with_power() {
        let a = alg(5, &[&[1, 2], &[2, 0]]);
        for x in vector::all(a.field(), 3).step_by(7) {
            let t = tau(&x, &a).unwrap();
            assert_eq!(t.inverse_by_power().unwrap(), t.inverse().unwrap());
        }
    }

    #[test]
    fn build_examples() {
        let t = build_t_circ(&alg(3, &[&[1]])).unwrap();
        assert_eq!(t.len(), 9);
        assert_eq!(t.non_translations(), 6);
        let t = build_t_circ(&alg(3, &[&[1, 0], &[0, 1]])).unwrap();
        assert_eq!(t.len(), 27);
        let big = alg(
            3,
            &[
                &[1, 0, 0, 0, 0],
                &[0, 1, 0, 0, 0],
                &[0, 0, 1, 0, 0],
                &[0, 0, 0, 1, 0],
                &[0, 0, 0, 0, 1],
            ],
        );
        assert_eq!(build_t_circ(&big), Err(Error::TooLarge(729)));
    }

    #[test]
    fn subgroup_properties_hold() {
        for a in [
            alg(3, &[&[1]]),
            alg(3, &[&[2]]),
            alg(3, &[&[0, 1], &[1, 0]]),
            alg(3, &[&[1, 0], &[0, 2]]),
        ] {
            let t = build_t_circ(&a).unwrap();
            let r = verify_subgroup_properties(&t, Some(&a));
            assert!(r.all_pass(), "{r:?}");
        }
        let f = Field::prime(3).unwrap();
        let plus = SubgroupTable::translations(f, 2).unwrap();
        assert!(verify_subgroup_properties(&plus, None).all_pass());
    }

    #[test]
    fn corrupted_table_fails_closure() {
        let a = alg(3, &[&[1]]);
        let f = a.field().clone();
        let mut t = build_t_circ(&a).unwrap();
        let odd = AffineMap::new(
            MatFp::from_ints(f.clone(), &[&[2, 0], &[0, 1]]).unwrap(),
            v(&f, &[1, 0]),
        )
        .unwrap();
        t.replace(1, odd);
        let r = verify_subgroup_properties(&t, Some(&a));
        assert!(!r.closure.pass);
        assert!(r.closure.witness.is_some());
    }

    #[test]
    fn conjugation_examples() {
        let a = alg(3, &[&[1]]);
        let f = a.field().clone();
        let e1 = v(&f, &[1, 0]);
        let zero = vector::zero(2);
        let b = v(&f, &[2, 1]);
        assert_eq!(conjugate_sigma_tau(&zero, &b, &a).unwrap(), tau(&b, &a).unwrap());
        let ann = v(&f, &[0, 2]);
        assert_eq!(conjugate_sigma_tau(&e1, &ann, &a).unwrap(), tau(&ann, &a).unwrap());
        assert_eq!(
            conjugate_sigma_tau(&e1, &e1, &a).unwrap(),
            tau(&v(&f, &[1, 1]), &a).unwrap()
        );
    }

    #[test]
    fn commutator_examples() {
        let a = alg(3, &[&[1]]);
        let f = a.field().clone();
        let e1 = v(&f, &[1, 0]);
        let ann = v(&f, &[0, 1]);
        assert!(commutator_sigma_tau(&ann, &e1, &a).unwrap().is_identity());
        assert!(commutator_sigma_tau(&e1, &vector::zero(2), &a).unwrap().is_identity());
        assert_eq!(commutator_sigma_tau(&e1, &e1, &a).unwrap(), sigma(&f, &ann));
    }

    #[test]
    fn identities_hold_exhaustively_in_f9() {
        let f = Field::new(3, 2).unwrap();
        let x = f.element(3).unwrap();
        let theta = MatFp::new(f.clone(), 1, 1, vec![x]).unwrap();
        let a = AlgebraSpec::from_theta_matrix(&theta).unwrap();
        let elems: Vec<Vector> = vector::all(&f, 2).collect();
        for p in &elems {
            for q in elems.iter().step_by(5) {
                conjugate_sigma_tau(p, q, &a).unwrap();
                commutator_sigma_tau(p, q, &a).unwrap();
            }
        }
    }
}
