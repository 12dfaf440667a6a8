//! Dense matrices over `F_{p^k}` and the symmetric bilinear form toolkit.
//!
//! Vectors are rows and matrices act on the right (`x ↦ xM`). A change of
//! basis acts on a Gram matrix by congruence `B ↦ A·B·Aᵀ`.

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{dim_mismatch, Error, Result};
use crate::gf::{Field, FieldElement, SquareClass};
use crate::vector::{self, Vector};

#[derive(Clone, PartialEq, Eq)]
pub struct MatFp {
    field: Arc<Field>,
    rows: usize,
    cols: usize,
    data: Vec<FieldElement>,
}

impl fmt::Debug for MatFp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, "; ")?;
            }
            let row: Vec<String> = self.row(i).iter().map(|&x| self.field.format(x)).collect();
            write!(f, "{}", row.join(" "))?;
        }
        write!(f, "]")
    }
}

pub(crate) fn same_field(a: &Arc<Field>, b: &Arc<Field>) -> Result<()> {
    if Arc::ptr_eq(a, b) || **a == **b {
        Ok(())
    } else {
        Err(Error::SpecMismatch)
    }
}

impl MatFp {
    pub fn new(field: Arc<Field>, rows: usize, cols: usize, data: Vec<FieldElement>) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(dim_mismatch("matrix dimensions must be positive"));
        }
        if data.len() != rows * cols {
            return Err(dim_mismatch(format!(
                "{} entries for a {rows}x{cols} matrix",
                data.len()
            )));
        }
        if data.iter().any(|x| x.index() >= field.order()) {
            return Err(Error::InvalidInput("matrix entry outside the field".into()));
        }
        Ok(MatFp {
            field,
            rows,
            cols,
            data,
        })
    }

    pub fn zeros(field: Arc<Field>, rows: usize, cols: usize) -> Self {
        assert!(rows > 0 && cols > 0, "matrix dimensions must be positive");
        MatFp {
            field,
            rows,
            cols,
            data: vec![FieldElement::ZERO; rows * cols],
        }
    }

    pub fn identity(field: Arc<Field>, n: usize) -> Self {
        let one = field.one();
        let mut m = Self::zeros(field, n, n);
        for i in 0..n {
            m.set(i, i, one);
        }
        m
    }

    pub fn diagonal(field: Arc<Field>, entries: &[FieldElement]) -> Self {
        let mut m = Self::zeros(field, entries.len(), entries.len());
        for (i, &d) in entries.iter().enumerate() {
            m.set(i, i, d);
        }
        m
    }

    pub fn from_rows(field: Arc<Field>, rows: Vec<Vector>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        if rows.iter().any(|row| row.len() != c) {
            return Err(dim_mismatch("ragged rows"));
        }
        Self::new(field, r, c, rows.into_iter().flatten().collect())
    }

    /// Convenience constructor from integer entries reduced into `F_p`.
    pub fn from_ints(field: Arc<Field>, rows: &[&[i64]]) -> Result<Self> {
        let rows = rows
            .iter()
            .map(|row| row.iter().map(|&x| field.from_int(x)).collect())
            .collect();
        Self::from_rows(field, rows)
    }

    pub fn field(&self) -> &Arc<Field> {
        &self.field
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square_matrix(&self) -> bool {
        self.rows == self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> FieldElement {
        self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: FieldElement) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[FieldElement] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn to_rows(&self) -> Vec<Vector> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn entries(&self) -> &[FieldElement] {
        &self.data
    }

    pub fn mul(&self, other: &MatFp) -> Result<MatFp> {
        same_field(&self.field, &other.field)?;
        if self.cols != other.rows {
            return Err(dim_mismatch(format!(
                "{}x{} times {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let f = &*self.field;
        let mut out = MatFp::zeros(self.field.clone(), self.rows, other.cols);
        for i in 0..self.rows {
            let acc = &mut out.data[i * other.cols..(i + 1) * other.cols];
            for (l, &a) in self.row(i).iter().enumerate() {
                vector::axpy(f, acc, a, other.row(l));
            }
        }
        Ok(out)
    }

    fn zip_with(&self, other: &MatFp, op: impl Fn(FieldElement, FieldElement) -> FieldElement) -> Result<MatFp> {
        same_field(&self.field, &other.field)?;
        if self.rows != other.rows || self.cols != other.cols {
            return Err(dim_mismatch("entrywise operation on different shapes"));
        }
        let data = self.data.iter().zip(&other.data).map(|(&a, &b)| op(a, b)).collect();
        Ok(MatFp { data, ..self.clone() })
    }

    pub fn add(&self, other: &MatFp) -> Result<MatFp> {
        self.zip_with(other, |a, b| self.field.add(a, b))
    }

    pub fn sub(&self, other: &MatFp) -> Result<MatFp> {
        self.zip_with(other, |a, b| self.field.sub(a, b))
    }

    pub fn scale(&self, c: FieldElement) -> MatFp {
        let data = self.data.iter().map(|&a| self.field.mul(c, a)).collect();
        MatFp { data, ..self.clone() }
    }

    pub fn transpose(&self) -> MatFp {
        let mut out = MatFp::zeros(self.field.clone(), self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set(j, i, self.get(i, j));
            }
        }
        out
    }

    pub fn is_symmetric(&self) -> bool {
        self.is_square_matrix() && (0..self.rows).all(|i| (0..i).all(|j| self.get(i, j) == self.get(j, i)))
    }

    pub fn is_diagonal(&self) -> bool {
        self.is_square_matrix() && (0..self.rows).all(|i| (0..self.cols).all(|j| i == j || self.get(i, j).is_zero()))
    }

    pub fn is_identity(&self) -> bool {
        self.is_diagonal() && (0..self.rows).all(|i| self.get(i, i) == self.field.one())
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| x.is_zero())
    }

    /// The row vector `x·M`.
    pub fn vec_mul(&self, x: &[FieldElement]) -> Result<Vector> {
        vector::check_len(x, self.rows)?;
        let mut out = vector::zero(self.cols);
        for (i, &a) in x.iter().enumerate() {
            vector::axpy(&self.field, &mut out, a, self.row(i));
        }
        Ok(out)
    }

    pub fn submatrix(&self, r0: usize, c0: usize, rows: usize, cols: usize) -> Result<MatFp> {
        if r0 + rows > self.rows || c0 + cols > self.cols {
            return Err(dim_mismatch("submatrix out of bounds"));
        }
        let data = (r0..r0 + rows)
            .flat_map(|i| self.row(i)[c0..c0 + cols].iter().copied())
            .collect();
        MatFp::new(self.field.clone(), rows, cols, data)
    }

    /// `diag(a, b)`.
    pub fn block_diag(a: &MatFp, b: &MatFp) -> Result<MatFp> {
        same_field(&a.field, &b.field)?;
        let mut out = MatFp::zeros(a.field.clone(), a.rows + b.rows, a.cols + b.cols);
        for i in 0..a.rows {
            for j in 0..a.cols {
                out.set(i, j, a.get(i, j));
            }
        }
        for i in 0..b.rows {
            for j in 0..b.cols {
                out.set(a.rows + i, a.cols + j, b.get(i, j));
            }
        }
        Ok(out)
    }

    fn swap_rows(&mut self, i: usize, j: usize) {
        if i != j {
            for c in 0..self.cols {
                self.data.swap(i * self.cols + c, j * self.cols + c);
            }
        }
    }

    fn swap_cols(&mut self, i: usize, j: usize) {
        if i != j {
            for r in 0..self.rows {
                self.data.swap(r * self.cols + i, r * self.cols + j);
            }
        }
    }

    /// row_t += c * row_s
    fn add_row(&mut self, t: usize, s: usize, c: FieldElement) {
        for col in 0..self.cols {
            let v = self.field.add(self.get(t, col), self.field.mul(c, self.get(s, col)));
            self.set(t, col, v);
        }
    }

    fn add_col(&mut self, t: usize, s: usize, c: FieldElement) {
        for r in 0..self.rows {
            let v = self.field.add(self.get(r, t), self.field.mul(c, self.get(r, s)));
            self.set(r, t, v);
        }
    }

    fn scale_row(&mut self, i: usize, c: FieldElement) {
        for col in 0..self.cols {
            let v = self.field.mul(c, self.get(i, col));
            self.set(i, col, v);
        }
    }

    fn scale_col(&mut self, j: usize, c: FieldElement) {
        for r in 0..self.rows {
            let v = self.field.mul(c, self.get(r, j));
            self.set(r, j, v);
        }
    }

    /// Reduced row echelon form and the pivot columns.
    pub fn rref(&self) -> (MatFp, Vec<usize>) {
        let f = self.field.clone();
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let Some(pr) = (r..m.rows).find(|&i| !m.get(i, c).is_zero()) else {
                continue;
            };
            m.swap_rows(r, pr);
            let inv = f.inv(m.get(r, c)).expect("pivot is nonzero");
            m.scale_row(r, inv);
            for i in 0..m.rows {
                if i != r {
                    let factor = m.get(i, c);
                    if !factor.is_zero() {
                        m.add_row(i, r, f.neg(factor));
                    }
                }
            }
            pivots.push(c);
            r += 1;
        }
        (m, pivots)
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    pub fn det(&self) -> Result<FieldElement> {
        if !self.is_square_matrix() {
            return Err(dim_mismatch("determinant of a non-square matrix"));
        }
        let f = self.field.clone();
        let mut m = self.clone();
        let mut det = f.one();
        for c in 0..m.cols {
            let Some(pr) = (c..m.rows).find(|&i| !m.get(i, c).is_zero()) else {
                return Ok(f.zero());
            };
            if pr != c {
                m.swap_rows(c, pr);
                det = f.neg(det);
            }
            let pivot = m.get(c, c);
            det = f.mul(det, pivot);
            let inv = f.inv(pivot)?;
            for i in c + 1..m.rows {
                let factor = m.get(i, c);
                if !factor.is_zero() {
                    m.add_row(i, c, f.neg(f.mul(factor, inv)));
                }
            }
        }
        Ok(det)
    }

    pub fn invert(&self) -> Result<MatFp> {
        if !self.is_square_matrix() {
            return Err(dim_mismatch("inverse of a non-square matrix"));
        }
        let n = self.rows;
        let id = MatFp::identity(self.field.clone(), n);
        let mut aug = MatFp::zeros(self.field.clone(), n, 2 * n);
        for i in 0..n {
            for j in 0..n {
                aug.set(i, j, self.get(i, j));
                aug.set(i, n + j, id.get(i, j));
            }
        }
        let (r, pivots) = aug.rref();
        if pivots.len() < n || pivots[n - 1] != n - 1 {
            return Err(Error::SingularMatrix);
        }
        r.submatrix(0, n, n, n)
    }

    /// Basis of `{x : x·M = 0}`, read off the reduced echelon form of `Mᵀ`
    /// with one basis vector per free column, in column order.
    pub fn left_kernel(&self) -> Vec<Vector> {
        let (r, pivots) = self.transpose().rref();
        let f = &self.field;
        let n = self.rows;
        (0..n)
            .filter(|c| !pivots.contains(c))
            .map(|free| {
                let mut x = vector::zero(n);
                x[free] = f.one();
                for (row, &pc) in pivots.iter().enumerate() {
                    x[pc] = f.neg(r.get(row, free));
                }
                x
            })
            .collect()
    }
}

/// `A·B·Aᵀ`
pub fn congruence(a: &MatFp, b: &MatFp) -> Result<MatFp> {
    a.mul(b)?.mul(&a.transpose())
}

/// Reduced echelon basis of the span of `vectors` inside `F^n`.
pub fn row_space_basis(field: &Arc<Field>, n: usize, vectors: &[Vector]) -> Result<Vec<Vector>> {
    let nonzero: Vec<Vector> = vectors.iter().filter(|v| !vector::is_zero(v)).cloned().collect();
    if nonzero.is_empty() {
        return Ok(Vec::new());
    }
    for v in &nonzero {
        vector::check_len(v, n)?;
    }
    let (r, pivots) = MatFp::from_rows(field.clone(), nonzero)?.rref();
    Ok((0..pivots.len()).map(|i| r.row(i).to_vec()).collect())
}

/// Rank and discriminant of a nondegenerate symmetric form; a complete
/// congruence invariant over finite fields of odd characteristic.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CanonicalFormLabel {
    pub rank: usize,
    pub disc: SquareClass,
}

/// Result of [`congruent_diagonalize`]: `transform · B · transformᵀ = diagonal`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Diagonalization {
    pub transform: MatFp,
    pub diagonal: MatFp,
}

/// Tracks `A` together with the current Gram matrix `A·B·Aᵀ` so that every
/// elementary row operation on `A` is mirrored as a congruence on the form.
struct Congruence {
    a: MatFp,
    gram: MatFp,
}

impl Congruence {
    fn swap(&mut self, i: usize, j: usize) {
        self.a.swap_rows(i, j);
        self.gram.swap_rows(i, j);
        self.gram.swap_cols(i, j);
    }

    fn add(&mut self, t: usize, s: usize, c: FieldElement) {
        self.a.add_row(t, s, c);
        self.gram.add_row(t, s, c);
        self.gram.add_col(t, s, c);
    }

    fn scale(&mut self, i: usize, c: FieldElement) {
        self.a.scale_row(i, c);
        self.gram.scale_row(i, c);
        self.gram.scale_col(i, c);
    }
}

/// Diagonalizes a symmetric matrix by congruence.
///
/// At each step the pivot is the first remaining index with a nonzero
/// diagonal entry. If every remaining diagonal entry vanishes, the first
/// nonzero off-diagonal pair `(i, j)` is used with `v = e_i + e_j`, for which
/// `b(v, v) = 2·B_ij ≠ 0` in odd characteristic. A zero trailing block is
/// left for the radical.
pub fn congruent_diagonalize(b: &MatFp) -> Result<Diagonalization> {
    if !b.is_symmetric() {
        return Err(Error::NotSymmetric);
    }
    let f = b.field().clone();
    let m = b.rows();
    let mut st = Congruence {
        a: MatFp::identity(f.clone(), m),
        gram: b.clone(),
    };
    for k in 0..m {
        let diag = (k..m).find(|&i| !st.gram.get(i, i).is_zero());
        let pivot = match diag {
            Some(i) => i,
            None => {
                let pair = (k..m)
                    .flat_map(|i| (i + 1..m).map(move |j| (i, j)))
                    .find(|&(i, j)| !st.gram.get(i, j).is_zero());
                match pair {
                    Some((i, j)) => {
                        st.add(i, j, f.one());
                        i
                    }
                    None => break,
                }
            }
        };
        st.swap(k, pivot);
        let inv = f.inv(st.gram.get(k, k))?;
        for r in k + 1..m {
            let c = st.gram.get(r, k);
            if !c.is_zero() {
                st.add(r, k, f.neg(f.mul(c, inv)));
            }
        }
    }
    debug_assert!(st.gram.is_diagonal());
    Ok(Diagonalization {
        transform: st.a,
        diagonal: st.gram,
    })
}

/// Square class of `det(B)` for a nondegenerate symmetric `B`.
pub fn discriminant(b: &MatFp) -> Result<SquareClass> {
    if !b.is_symmetric() {
        return Err(Error::NotSymmetric);
    }
    let det = b.det()?;
    if det.is_zero() {
        return Err(Error::DegenerateForm);
    }
    b.field().is_square(det)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CanonicalForm {
    pub label: CanonicalFormLabel,
    /// `A` with `A·B·Aᵀ = form`.
    pub transform: MatFp,
    /// `Identity(m)` or `diag(1, …, 1, q)` with `q` the field's fixed nonsquare.
    pub form: MatFp,
}

/// The standard shape for a label: identity, or identity with last entry `q`.
pub fn standard_form(field: &Arc<Field>, label: CanonicalFormLabel) -> MatFp {
    let mut m = MatFp::identity(field.clone(), label.rank);
    if label.disc == SquareClass::NonSquare {
        m.set(label.rank - 1, label.rank - 1, field.find_nonsquare());
    }
    m
}

/// Some `(x, y)` with `x² + y² = t`; the first `x` in canonical order wins.
fn sum_of_two_squares(f: &Field, t: FieldElement) -> (FieldElement, FieldElement) {
    for x in f.elements() {
        let r = f.sub(t, f.mul(x, x));
        if r.is_zero() {
            return (x, f.zero());
        }
        if f.is_square(r) == Ok(SquareClass::Square) {
            return (x, f.sqrt(r).expect("r is a nonzero square"));
        }
    }
    unreachable!("every element of a finite field is a sum of two squares")
}

/// Congruence to one of the two standard diagonal shapes.
///
/// Each diagonal entry `d` is rescaled to 1 if it is a square, otherwise
/// written `d = q·s²` and rescaled to `q`. Pairs of `q` entries are then
/// rotated to `1, 1` using `x² + y² = q⁻¹`, and a surviving `q` is moved to
/// the last slot.
pub fn canonical_form(b: &MatFp) -> Result<CanonicalForm> {
    let disc = discriminant(b)?;
    let f = b.field().clone();
    let q = f.find_nonsquare();
    let m = b.rows();
    let Diagonalization { transform, diagonal } = congruent_diagonalize(b)?;
    let mut st = Congruence {
        a: transform,
        gram: diagonal,
    };
    let mut nonsquare_slots = Vec::new();
    for i in 0..m {
        let d = st.gram.get(i, i);
        let root = match f.is_square(d)? {
            SquareClass::Square => f.sqrt(d)?,
            SquareClass::NonSquare => {
                nonsquare_slots.push(i);
                f.sqrt(f.div(d, q)?)?
            }
        };
        st.scale(i, f.inv(root)?);
    }
    let (x, y) = sum_of_two_squares(&f, f.inv(q)?);
    for pair in nonsquare_slots.chunks_exact(2) {
        let (i, j) = (pair[0], pair[1]);
        let ri = st.a.row(i).to_vec();
        let rj = st.a.row(j).to_vec();
        let mut new_i = vector::scale(&f, x, &ri);
        vector::axpy(&f, &mut new_i, y, &rj);
        let mut new_j = vector::scale(&f, x, &rj);
        vector::axpy(&f, &mut new_j, f.neg(y), &ri);
        for c in 0..m {
            st.a.set(i, c, new_i[c]);
            st.a.set(j, c, new_j[c]);
        }
    }
    if nonsquare_slots.len() % 2 == 1 {
        let last = *nonsquare_slots.last().unwrap();
        st.a.swap_rows(last, m - 1);
    }
    let label = CanonicalFormLabel { rank: m, disc };
    let form = congruence(&st.a, b)?;
    let expected = standard_form(&f, label);
    if form != expected {
        return Err(Error::VerificationFailed(format!(
            "canonical form {form:?} does not match {expected:?}"
        )));
    }
    Ok(CanonicalForm {
        label,
        transform: st.a,
        form,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn f(p: u64) -> Arc<Field> {
        Field::prime(p).unwrap()
    }

    #[test]
    fn determinant_and_inverse() {
        assert_eq!(MatFp::identity(f(5), 3).det().unwrap(), FieldElement(1));
        let swap = MatFp::from_ints(f(3), &[&[0, 1], &[1, 0]]).unwrap();
        assert_eq!(swap.det().unwrap(), FieldElement(2));
        let u = MatFp::from_ints(f(3), &[&[1, 1], &[0, 1]]).unwrap();
        assert_eq!(
            u.invert().unwrap(),
            MatFp::from_ints(f(3), &[&[1, 2], &[0, 1]]).unwrap()
        );
        let singular = MatFp::from_ints(f(3), &[&[1, 1], &[1, 1]]).unwrap();
        assert_eq!(singular.invert(), Err(Error::SingularMatrix));
        assert_eq!(singular.rank(), 1);
    }

    #[test]
    fn mismatched_shapes_and_fields() {
        let a = MatFp::identity(f(3), 2);
        let b = MatFp::identity(f(3), 3);
        assert!(matches!(a.mul(&b), Err(Error::DimensionMismatch(_))));
        let c = MatFp::identity(f(5), 2);
        assert_eq!(a.mul(&c), Err(Error::SpecMismatch));
        assert!(matches!(
            MatFp::new(f(3), 0, 2, vec![]),
            Err(Error::DimensionMismatch(_))
        ));
    }

    #[test]
    fn left_kernel_of_equal_rows() {
        let m = MatFp::from_ints(f(3), &[&[1, 1], &[1, 1]]).unwrap();
        let ker = m.left_kernel();
        assert_eq!(ker.len(), 1);
        assert!(vector::is_zero(&m.vec_mul(&ker[0]).unwrap()));
    }

    #[test]
    fn diagonalize_examples() {
        let id = MatFp::identity(f(3), 2);
        let d = congruent_diagonalize(&id).unwrap();
        assert_eq!(d.transform, id);
        assert_eq!(d.diagonal, id);

        let hyp = MatFp::from_ints(f(3), &[&[0, 1], &[1, 0]]).unwrap();
        let d = congruent_diagonalize(&hyp).unwrap();
        assert_eq!(d.transform, MatFp::from_ints(f(3), &[&[1, 1], &[1, 2]]).unwrap());
        assert_eq!(d.diagonal, MatFp::from_ints(f(3), &[&[2, 0], &[0, 1]]).unwrap());

        let diag = MatFp::from_ints(f(5), &[&[1, 0], &[0, 2]]).unwrap();
        let d = congruent_diagonalize(&diag).unwrap();
        assert!(d.transform.is_identity());
        assert_eq!(d.diagonal, diag);

        let not_sym = MatFp::from_ints(f(5), &[&[1, 1], &[0, 2]]).unwrap();
        assert_eq!(congruent_diagonalize(&not_sym), Err(Error::NotSymmetric));
    }

    #[test]
    fn diagonalize_degenerate_leaves_zero_block() {
        let b = MatFp::from_ints(f(3), &[&[0, 1, 0], &[1, 0, 0], &[0, 0, 0]]).unwrap();
        let d = congruent_diagonalize(&b).unwrap();
        assert_eq!(congruence(&d.transform, &b).unwrap(), d.diagonal);
        assert!(d.diagonal.get(2, 2).is_zero());
        assert!(!d.transform.det().unwrap().is_zero());
    }

    #[test]
    fn discriminant_examples() {
        assert_eq!(discriminant(&MatFp::identity(f(7), 4)), Ok(SquareClass::Square));
        let b = MatFp::from_ints(f(3), &[&[1, 0], &[0, 2]]).unwrap();
        assert_eq!(discriminant(&b), Ok(SquareClass::NonSquare));
        let hyp = MatFp::from_ints(f(3), &[&[0, 1], &[1, 0]]).unwrap();
        assert_eq!(discriminant(&hyp), Ok(SquareClass::NonSquare));
        let degenerate = MatFp::from_ints(f(3), &[&[1, 1], &[1, 1]]).unwrap();
        assert_eq!(discriminant(&degenerate), Err(Error::DegenerateForm));
    }

    #[test]
    fn canonical_form_examples() {
        let id = MatFp::identity(f(3), 2);
        let c = canonical_form(&id).unwrap();
        assert_eq!(
            c.label,
            CanonicalFormLabel {
                rank: 2,
                disc: SquareClass::Square
            }
        );
        assert!(c.transform.is_identity());

        let two = MatFp::from_ints(f(3), &[&[2, 0], &[0, 2]]).unwrap();
        let c = canonical_form(&two).unwrap();
        assert_eq!(c.label.disc, SquareClass::Square);
        assert!(congruence(&c.transform, &two).unwrap().is_identity());

        let hyp = MatFp::from_ints(f(3), &[&[0, 1], &[1, 0]]).unwrap();
        let c = canonical_form(&hyp).unwrap();
        assert_eq!(c.label.disc, SquareClass::NonSquare);
        assert_eq!(
            congruence(&c.transform, &hyp).unwrap(),
            MatFp::from_ints(f(3), &[&[1, 0], &[0, 2]]).unwrap()
        );
    }

    fn sym_strategy() -> impl Strategy<Value = MatFp> {
        (
            prop::sample::select(vec![(3u64, 1u32), (5, 1), (7, 1), (3, 2), (5, 2)]),
            1usize..6,
            any::<u64>(),
        )
            .prop_map(|((p, k), m, seed)| {
                use rand::{Rng, SeedableRng};
                let field = Field::new(p, k).unwrap();
                let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
                let mut b = MatFp::zeros(field.clone(), m, m);
                for i in 0..m {
                    for j in i..m {
                        let v = FieldElement(rng.gen_range(0..field.order()));
                        b.set(i, j, v);
                        b.set(j, i, v);
                    }
                }
                b
            })
    }

    proptest! {
        #[test]
        fn diagonalization_round_trips(b in sym_strategy()) {
            let d = congruent_diagonalize(&b).unwrap();
            prop_assert!(d.diagonal.is_diagonal());
            prop_assert_eq!(congruence(&d.transform, &b).unwrap(), d.diagonal.clone());
            prop_assert!(!d.transform.det().unwrap().is_zero());
            prop_assert_eq!(d.diagonal.rank(), b.rank());
        }

        #[test]
        fn canonical_form_is_standard(b in sym_strategy()) {
            if let Ok(c) = canonical_form(&b) {
                prop_assert_eq!(c.form.clone(), standard_form(b.field(), c.label));
                prop_assert_eq!(congruence(&c.transform, &b).unwrap(), c.form);
            } else {
                prop_assert!(b.det().unwrap().is_zero());
            }
        }
    }
}
