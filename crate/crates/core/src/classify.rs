//! Isomorphism testing and classification of the algebras with
//! `dim(V·V) = 1`, through congruence of their defining matrices.
//!
//! For `M = diag(A, l)` the map `x ↦ x·M` satisfies
//! `(e_i M)·₁(e_j M) = (A Θ¹ Aᵀ)_ij e_n` and `(e_i·₂e_j) M = l Θ²_ij e_n`, so
//! `A Θ¹ Aᵀ = l Θ²` makes it an algebra map from `·₂` to `·₁`. Its inverse
//! `diag(A⁻¹, l⁻¹)` goes from `·₁` to `·₂`.

use serde::{Deserialize, Serialize};

use crate::algebra::AlgebraSpec;
use crate::error::{dim_mismatch, Error, Result};
use crate::gf::{is_prime, Field, FieldElement, SquareClass};
use crate::matfp::{canonical_form, congruence, discriminant, same_field, MatFp};
use crate::vector;

/// `(A, l)` with `A Θ¹ Aᵀ = l Θ²`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IsoWitness {
    pub a: MatFp,
    pub l: FieldElement,
    /// `diag(A, l)`.
    pub block: MatFp,
}

impl IsoWitness {
    pub fn new(a: MatFp, l: FieldElement) -> Result<Self> {
        let f = a.field().clone();
        let block = MatFp::block_diag(&a, &MatFp::diagonal(f, &[l]))?;
        Ok(IsoWitness { a, l, block })
    }

    /// `diag(A⁻¹, l⁻¹)`: the isomorphism from the first algebra to the second.
    pub fn forward(&self) -> Result<MatFp> {
        let f = self.a.field();
        MatFp::block_diag(&self.a.invert()?, &MatFp::diagonal(f.clone(), &[f.inv(self.l)?]))
    }

    /// Witness for the reversed pair.
    pub fn inverse(&self) -> Result<IsoWitness> {
        let f = self.a.field();
        IsoWitness::new(self.a.invert()?, f.inv(self.l)?)
    }

    /// Given `self` for `(1, 2)` and `next` for `(2, 3)`, a witness for `(1, 3)`.
    pub fn then(&self, next: &IsoWitness) -> Result<IsoWitness> {
        let f = self.a.field();
        IsoWitness::new(next.a.mul(&self.a)?, f.mul(self.l, next.l))
    }

    /// Checks the congruence relation and, independently, that `forward()`
    /// respects products on all basis pairs and that `block` does so in the
    /// opposite direction.
    pub fn validate(&self, alg1: &AlgebraSpec, alg2: &AlgebraSpec) -> Result<()> {
        let t1 = alg1.theta_matrix()?;
        let t2 = alg2.theta_matrix()?;
        if self.l.is_zero() {
            return Err(Error::VerificationFailed("l = 0".into()));
        }
        let lhs = congruence(&self.a, &t1)?;
        if lhs != t2.scale(self.l) {
            return Err(Error::VerificationFailed(format!("A·Θ¹·Aᵀ = {lhs:?} is not l·Θ²")));
        }
        check_multiplicative(&self.forward()?, alg1, alg2)?;
        check_multiplicative(&self.block, alg2, alg1)
    }
}

/// `F(e_i·_src e_j) = F(e_i)·_dst F(e_j)` for all `i, j`, with `F(x) = x·M`.
pub fn check_multiplicative(m: &MatFp, src: &AlgebraSpec, dst: &AlgebraSpec) -> Result<()> {
    let n = src.n();
    if dst.n() != n || m.rows() != n || m.cols() != n {
        return Err(dim_mismatch("map and algebras disagree on dimension"));
    }
    let f = src.field();
    for i in 0..n {
        for j in 0..n {
            let (ei, ej) = (vector::unit(f, n, i), vector::unit(f, n, j));
            let image_of_product = m.vec_mul(&src.product(&ei, &ej)?)?;
            let product_of_images = dst.product(&m.vec_mul(&ei)?, &m.vec_mul(&ej)?)?;
            if image_of_product != product_of_images {
                return Err(Error::VerificationFailed(format!(
                    "map is not multiplicative on e_{}·e_{}",
                    i + 1,
                    j + 1
                )));
            }
        }
    }
    Ok(())
}

fn require_d1(alg: &AlgebraSpec) -> Result<()> {
    if alg.d() != 1 {
        return Err(Error::UnsupportedD(alg.d()));
    }
    Ok(())
}

/// Decides isomorphism of two `d = 1` algebras by comparing canonical forms
/// of `Θ¹` against `Θ²` and, failing that, against `q·Θ²`.
pub fn iso_test(alg1: &AlgebraSpec, alg2: &AlgebraSpec) -> Result<IsoWitness> {
    same_field(alg1.field(), alg2.field())?;
    if alg1.n() != alg2.n() {
        return Err(dim_mismatch(format!("dimensions {} and {}", alg1.n(), alg2.n())));
    }
    require_d1(alg1)?;
    require_d1(alg2)?;
    let f = alg1.field();
    let q = f.find_nonsquare();
    let t1 = alg1.theta_matrix()?;
    let t2 = alg2.theta_matrix()?;
    let c1 = canonical_form(&t1)?;
    let witness = [f.one(), q].into_iter().find_map(|l| {
        let c2 = canonical_form(&t2.scale(l)).ok()?;
        (c2.label == c1.label).then_some((c2.transform, l))
    });
    let Some((c2, l)) = witness else {
        return Err(Error::NotIsomorphic);
    };
    let w = IsoWitness::new(c2.invert()?.mul(&c1.transform)?, l)?;
    w.validate(alg1, alg2)?;
    Ok(w)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ClassForm {
    #[serde(rename = "identity")]
    IdentityForm,
    #[serde(rename = "nonsquare")]
    NonSquareForm,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ClassLabel {
    pub form: ClassForm,
    pub p: u32,
    pub k: u32,
    pub n: usize,
}

/// Class of a `d = 1` algebra. With `n − 1` odd, scaling by `q` flips the
/// discriminant, so every algebra lands in the identity class.
pub fn class_of(alg: &AlgebraSpec) -> Result<ClassLabel> {
    require_d1(alg)?;
    let f = alg.field();
    let disc = discriminant(&alg.theta_matrix()?)?;
    let form = if disc == SquareClass::Square || alg.m() % 2 == 1 {
        ClassForm::IdentityForm
    } else {
        ClassForm::NonSquareForm
    };
    Ok(ClassLabel {
        form,
        p: f.characteristic(),
        k: f.degree(),
        n: alg.n(),
    })
}

fn check_params(p: u64, n: usize) -> Result<()> {
    if p.is_multiple_of(2) {
        return Err(Error::EvenCharacteristic(p));
    }
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    if n < 2 {
        return Err(Error::InvalidInput(format!("need n ≥ 2, got {n}")));
    }
    Ok(())
}

/// Number of isomorphism classes in dimension `n` over `F_{p^k}`.
pub fn count_classes(p: u64, k: u32, n: usize) -> Result<usize> {
    check_params(p, n)?;
    if k == 0 {
        return Err(Error::InvalidInput("k must be positive".into()));
    }
    Ok(if (n - 1).is_multiple_of(2) { 2 } else { 1 })
}

/// `Θ = 1_m`, plus `diag(1, …, 1, q)` when there are two classes.
pub fn canonical_representatives(p: u64, k: u32, n: usize) -> Result<Vec<AlgebraSpec>> {
    let count = count_classes(p, k, n)?;
    let f = Field::new(p, k)?;
    representatives_over(&f, n, count)
}

fn representatives_over(f: &std::sync::Arc<Field>, n: usize, count: usize) -> Result<Vec<AlgebraSpec>> {
    let m = n - 1;
    let mut out = vec![AlgebraSpec::from_theta_matrix(&MatFp::identity(f.clone(), m))?];
    if count == 2 {
        let mut t = MatFp::identity(f.clone(), m);
        t.set(m - 1, m - 1, f.find_nonsquare());
        out.push(AlgebraSpec::from_theta_matrix(&t)?);
    }
    Ok(out)
}

/// The representative for `label`, over the given field.
pub fn representative(f: &std::sync::Arc<Field>, label: ClassLabel) -> Result<AlgebraSpec> {
    let count = count_classes(f.characteristic() as u64, f.degree(), label.n)?;
    let reps = representatives_over(f, label.n, count)?;
    Ok(match label.form {
        ClassForm::IdentityForm => reps[0].clone(),
        ClassForm::NonSquareForm => reps
            .get(1)
            .cloned()
            .ok_or_else(|| Error::InvalidInput("nonsquare class needs n − 1 even".into()))?,
    })
}
