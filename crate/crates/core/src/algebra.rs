//! Commutative radical `F_{p^k}`-algebras of nilpotency index 3.
//!
//! An [`AlgebraSpec`] lives on `V = F^n` with `Ann(V) = span{e_{m+1}, …, e_n}`
//! and is fixed by its defining matrix `Θ`: `e_i·e_j = (0, …, 0, Θ_{i,j})` for
//! `i, j ≤ m`, all other basis products zero. [`StructureConstantAlgebra`]
//! holds arbitrary bilinear products, so the checkers can be fed algebras
//! that are not radical of index 3.

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{dim_mismatch, Error, Result};
use crate::gf::{Field, FieldElement};
use crate::matfp::{row_space_basis, MatFp};
use crate::vector::{self, Vector};

/// The `m × m` grid `Θ` with cells in `F^d`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DefiningMatrix {
    m: usize,
    d: usize,
    entries: Vec<FieldElement>,
}

impl DefiningMatrix {
    pub fn new(m: usize, d: usize, entries: Vec<FieldElement>) -> Result<Self> {
        if m == 0 || d == 0 {
            return Err(dim_mismatch("defining matrix needs m ≥ 1 and d ≥ 1"));
        }
        if entries.len() != m * m * d {
            return Err(dim_mismatch(format!(
                "{} entries for an {m}x{m} grid of length-{d} cells",
                entries.len()
            )));
        }
        Ok(DefiningMatrix { m, d, entries })
    }

    /// Builds from an `m × m` grid of length-`d` cells.
    pub fn from_cells(cells: Vec<Vec<Vector>>) -> Result<Self> {
        let m = cells.len();
        let d = cells.first().and_then(|r| r.first()).map_or(0, |c| c.len());
        if cells
            .iter()
            .any(|row| row.len() != m || row.iter().any(|c| c.len() != d))
        {
            return Err(dim_mismatch("defining matrix must be square with equal cell lengths"));
        }
        Self::new(m, d, cells.into_iter().flatten().flatten().collect())
    }

    /// The `d = 1` case: `Θ` is an ordinary `m × m` matrix.
    pub fn from_scalar(theta: &MatFp) -> Result<Self> {
        if !theta.is_square_matrix() {
            return Err(dim_mismatch("scalar defining matrix must be square"));
        }
        Self::new(theta.rows(), 1, theta.entries().to_vec())
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn cell(&self, i: usize, j: usize) -> &[FieldElement] {
        let start = (i * self.m + j) * self.d;
        &self.entries[start..start + self.d]
    }

    pub fn cells(&self) -> Vec<Vec<Vector>> {
        (0..self.m)
            .map(|i| (0..self.m).map(|j| self.cell(i, j).to_vec()).collect())
            .collect()
    }

    /// `Θ_i` flattened: row `j` of the `m × d` block is `Θ_{i,j}`.
    fn block_flat(&self, i: usize) -> Vector {
        self.entries[i * self.m * self.d..(i + 1) * self.m * self.d].to_vec()
    }

    /// The scalar matrix for `d = 1`.
    pub fn scalar_matrix(&self, field: &Arc<Field>) -> Result<MatFp> {
        if self.d != 1 {
            return Err(Error::UnsupportedD(self.d));
        }
        MatFp::new(field.clone(), self.m, self.m, self.entries.clone())
    }
}

/// Outcome of [`validate_defining_matrix`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ThetaReport {
    pub symmetric: bool,
    /// First `(i, j)` with `Θ_{i,j} ≠ Θ_{j,i}`.
    pub asymmetric_at: Option<(usize, usize)>,
    /// No nontrivial combination of the blocks `Θ_1, …, Θ_m` vanishes.
    pub independent: bool,
    /// Coefficients of a vanishing combination, first nonzero coefficient 1.
    pub vanishing_combination: Option<Vec<u32>>,
    /// For `d = 1` only: whether `Θ` is invertible.
    pub invertible: Option<bool>,
}

impl ThetaReport {
    pub fn valid(&self) -> bool {
        self.symmetric && self.independent
    }
}

pub fn validate_defining_matrix(field: &Arc<Field>, theta: &DefiningMatrix) -> ThetaReport {
    let m = theta.m;
    let asymmetric_at = (0..m)
        .flat_map(|i| (i + 1..m).map(move |j| (i, j)))
        .find(|&(i, j)| theta.cell(i, j) != theta.cell(j, i));
    let blocks = MatFp::from_rows(field.clone(), (0..m).map(|i| theta.block_flat(i)).collect())
        .expect("blocks have equal length");
    let vanishing = blocks.left_kernel().into_iter().next().map(|mut v| {
        let lead = *v.iter().find(|x| !x.is_zero()).expect("kernel vectors are nonzero");
        let inv = field.inv(lead).expect("nonzero");
        v = vector::scale(field, inv, &v);
        v.iter().map(|x| x.index()).collect()
    });
    let invertible = (theta.d == 1).then(|| {
        let s = theta.scalar_matrix(field).expect("d = 1");
        !s.det().expect("square").is_zero()
    });
    ThetaReport {
        symmetric: asymmetric_at.is_none(),
        asymmetric_at,
        independent: vanishing.is_none(),
        vanishing_combination: vanishing,
        invertible,
    }
}

/// A radical algebra `(V, +, ·)` given by `(p, k, n, d, Θ)`. Construction
/// checks that `Θ` is symmetric with independent blocks.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AlgebraSpec {
    field: Arc<Field>,
    n: usize,
    d: usize,
    theta: DefiningMatrix,
}

impl AlgebraSpec {
    pub fn new(field: Arc<Field>, n: usize, d: usize, theta: DefiningMatrix) -> Result<Self> {
        if d == 0 || d >= n {
            return Err(dim_mismatch(format!("need 1 ≤ d < n, got n = {n}, d = {d}")));
        }
        if theta.m != n - d || theta.d != d {
            return Err(dim_mismatch(format!(
                "defining matrix is {}x{} with cells of length {}, expected m = {}, d = {d}",
                theta.m,
                theta.m,
                theta.d,
                n - d
            )));
        }
        if theta.entries.iter().any(|x| x.index() >= field.order()) {
            return Err(Error::InvalidInput("defining matrix entry outside the field".into()));
        }
        let report = validate_defining_matrix(&field, &theta);
        if !report.symmetric {
            return Err(Error::InvalidDefiningMatrix(format!(
                "not symmetric at {:?}",
                report.asymmetric_at.unwrap()
            )));
        }
        if !report.independent {
            return Err(Error::InvalidDefiningMatrix(format!(
                "blocks are linearly dependent: combination {:?} vanishes",
                report.vanishing_combination.unwrap()
            )));
        }
        Ok(AlgebraSpec { field, n, d, theta })
    }

    /// `n = m + 1, d = 1` algebra from an invertible symmetric `Θ`.
    pub fn from_theta_matrix(theta: &MatFp) -> Result<Self> {
        let m = theta.rows();
        Self::new(theta.field().clone(), m + 1, 1, DefiningMatrix::from_scalar(theta)?)
    }

    /// Reads `Θ` back from the structure constants of `sca`, which must
    /// have its annihilator in the last `d` coordinates.
    pub fn from_structure_constants(sca: &StructureConstantAlgebra, d: usize) -> Result<Self> {
        let n = sca.n;
        if d == 0 || d >= n {
            return Err(dim_mismatch(format!("need 1 ≤ d < n, got n = {n}, d = {d}")));
        }
        let m = n - d;
        let mut entries = Vec::with_capacity(m * m * d);
        for i in 0..n {
            for j in 0..n {
                let prod = sca.basis_product(i, j);
                if i >= m || j >= m {
                    if !vector::is_zero(prod) {
                        return Err(Error::InvalidDefiningMatrix(format!(
                            "e_{}·e_{} ≠ 0 although one factor lies in the annihilator block",
                            i + 1,
                            j + 1
                        )));
                    }
                    continue;
                }
                if !vector::is_zero(&prod[..m]) {
                    return Err(Error::InvalidDefiningMatrix(format!(
                        "e_{}·e_{} leaves the annihilator block",
                        i + 1,
                        j + 1
                    )));
                }
                entries.extend_from_slice(&prod[m..]);
            }
        }
        Self::new(sca.field.clone(), n, d, DefiningMatrix::new(m, d, entries)?)
    }

    pub fn field(&self) -> &Arc<Field> {
        &self.field
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn m(&self) -> usize {
        self.n - self.d
    }

    pub fn theta(&self) -> &DefiningMatrix {
        &self.theta
    }

    /// `Θ` as a matrix; only for `d = 1`.
    pub fn theta_matrix(&self) -> Result<MatFp> {
        self.theta.scalar_matrix(&self.field)
    }

    fn check(&self, v: &[FieldElement]) -> Result<()> {
        vector::check_len(v, self.n)
    }

    pub fn product(&self, a: &[FieldElement], b: &[FieldElement]) -> Result<Vector> {
        self.check(a)?;
        self.check(b)?;
        let f = &*self.field;
        let m = self.m();
        let mut out = vector::zero(self.n);
        for i in (0..m).filter(|&i| !a[i].is_zero()) {
            for j in (0..m).filter(|&j| !b[j].is_zero()) {
                vector::axpy(f, &mut out[m..], f.mul(a[i], b[j]), self.theta.cell(i, j));
            }
        }
        Ok(out)
    }

    /// `a ∘ b = a + b + a·b`
    pub fn circle(&self, a: &[FieldElement], b: &[FieldElement]) -> Result<Vector> {
        let prod = self.product(a, b)?;
        let f = &*self.field;
        Ok(vector::add(f, &vector::add(f, a, b), &prod))
    }

    /// `e`-fold circle power; the empty power is `0`.
    pub fn circle_pow(&self, a: &[FieldElement], e: u64) -> Result<Vector> {
        self.check(a)?;
        let mut acc = vector::zero(self.n);
        for _ in 0..e {
            acc = self.circle(&acc, a)?;
        }
        Ok(acc)
    }

    /// Inverse for `∘`, computed as the `(p-1)`-fold circle power.
    pub fn circle_inverse(&self, a: &[FieldElement]) -> Result<Vector> {
        self.circle_pow(a, self.field.characteristic() as u64 - 1)
    }

    /// `γ_a = [[1_m, a_1Θ_1 + … + a_mΘ_m], [0, 1_d]]`.
    pub fn gamma(&self, a: &[FieldElement]) -> Result<MatFp> {
        self.check(a)?;
        let f = &*self.field;
        let (m, d) = (self.m(), self.d);
        let mut g = MatFp::identity(self.field.clone(), self.n);
        for j in 0..m {
            let mut row = vector::zero(d);
            for (i, &ai) in a[..m].iter().enumerate() {
                vector::axpy(f, &mut row, ai, self.theta.cell(i, j));
            }
            for (l, &x) in row.iter().enumerate() {
                g.set(j, m + l, x);
            }
        }
        Ok(g)
    }

    /// `δ_a = γ_a − 1`, so that `x·δ_a = x·a`.
    pub fn delta(&self, a: &[FieldElement]) -> Result<MatFp> {
        self.gamma(a)?.sub(&MatFp::identity(self.field.clone(), self.n))
    }

    pub fn to_structure_constants(&self) -> StructureConstantAlgebra {
        let mut sca = StructureConstantAlgebra::zero(self.field.clone(), self.n);
        let m = self.m();
        for i in 0..m {
            for j in 0..m {
                for (l, &x) in self.theta.cell(i, j).iter().enumerate() {
                    sca.set(i, j, m + l, x);
                }
            }
        }
        sca
    }

    pub fn annihilator(&self) -> Vec<Vector> {
        self.to_structure_constants().annihilator()
    }

    /// Reduces an algebra with `dim(V·V) = 1` to `d = 1` by factoring out a
    /// complement `H` of `V·V` inside `Ann(V)`.
    ///
    /// With `w` the first nonzero cell of `Θ` scaled so that its first
    /// nonzero coordinate `j0` is 1, `H = {y ∈ Ann(V) : y_{j0} = 0}` and the
    /// quotient keeps `e_1, …, e_m, e_{m+j0}`.
    pub fn quotient_by_complement(&self) -> Result<QuotientReduction> {
        let f = &self.field;
        let (m, d, n) = (self.m(), self.d, self.n);
        if d == 1 {
            return Ok(QuotientReduction {
                algebra: self.clone(),
                projection: MatFp::identity(f.clone(), n),
                complement: Vec::new(),
            });
        }
        let cells: Vec<Vector> = (0..m)
            .flat_map(|i| (0..m).map(move |j| (i, j)))
            .map(|(i, j)| self.theta.cell(i, j).to_vec())
            .collect();
        let dim = row_space_basis(f, d, &cells)?.len();
        if dim != 1 {
            return Err(Error::ProductNotOneDimensional(dim));
        }
        let first = cells.iter().find(|c| !vector::is_zero(c)).expect("dim is 1");
        let j0 = first.iter().position(|x| !x.is_zero()).unwrap();
        let mut scalars = Vec::with_capacity(m * m);
        for i in 0..m {
            for j in 0..m {
                scalars.push(self.theta.cell(i, j)[j0]);
            }
        }
        let algebra = AlgebraSpec::new(f.clone(), m + 1, 1, DefiningMatrix::new(m, 1, scalars)?)?;
        let mut projection = MatFp::zeros(f.clone(), n, m + 1);
        for i in 0..m {
            projection.set(i, i, f.one());
        }
        projection.set(m + j0, m, f.one());
        let complement = (0..d).filter(|&l| l != j0).map(|l| vector::unit(f, n, m + l)).collect();
        Ok(QuotientReduction {
            algebra,
            projection,
            complement,
        })
    }
}

/// Result of [`AlgebraSpec::quotient_by_complement`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuotientReduction {
    pub algebra: AlgebraSpec,
    /// `n × n'` matrix of the quotient map `V → V/H`.
    pub projection: MatFp,
    /// Basis of the complement `H` that was factored out.
    pub complement: Vec<Vector>,
}

/// Smallest `t` with `V^t = 0`, capped at "at least 4".
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum NilpotencyIndex {
    #[serde(rename = "2")]
    Two,
    #[serde(rename = "3")]
    Three,
    #[serde(rename = ">=4")]
    AtLeastFour,
}

impl NilpotencyIndex {
    /// `V³ = 0`.
    pub fn at_most_three(self) -> bool {
        self != NilpotencyIndex::AtLeastFour
    }
}

/// An arbitrary bilinear product `e_i·e_j = Σ_l c_{i,j,l} e_l`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StructureConstantAlgebra {
    field: Arc<Field>,
    n: usize,
    c: Vec<FieldElement>,
}

impl StructureConstantAlgebra {
    pub fn new(field: Arc<Field>, n: usize, c: Vec<FieldElement>) -> Result<Self> {
        if n == 0 || c.len() != n * n * n {
            return Err(dim_mismatch(format!(
                "{} structure constants for dimension {n}",
                c.len()
            )));
        }
        Ok(StructureConstantAlgebra { field, n, c })
    }

    pub fn zero(field: Arc<Field>, n: usize) -> Self {
        StructureConstantAlgebra {
            field,
            n,
            c: vec![FieldElement::ZERO; n * n * n],
        }
    }

    /// `u_i·u_j = u_{i+j}` when `i + j ≤ n` (1-based), i.e. the maximal
    /// ideal of `F[x]/(x^{n+1})`. For `n ≥ 3`, `V³ ≠ 0`.
    pub fn truncated_polynomial(field: Arc<Field>, n: usize) -> Self {
        let one = field.one();
        let mut sca = Self::zero(field, n);
        for i in 0..n {
            for j in 0..n {
                if i + j + 1 < n {
                    sca.set(i, j, i + j + 1, one);
                }
            }
        }
        sca
    }

    pub fn field(&self) -> &Arc<Field> {
        &self.field
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn set(&mut self, i: usize, j: usize, l: usize, v: FieldElement) {
        self.c[(i * self.n + j) * self.n + l] = v;
    }

    pub fn constant(&self, i: usize, j: usize, l: usize) -> FieldElement {
        self.c[(i * self.n + j) * self.n + l]
    }

    pub fn basis_product(&self, i: usize, j: usize) -> &[FieldElement] {
        let start = (i * self.n + j) * self.n;
        &self.c[start..start + self.n]
    }

    pub fn product(&self, a: &[FieldElement], b: &[FieldElement]) -> Result<Vector> {
        vector::check_len(a, self.n)?;
        vector::check_len(b, self.n)?;
        let f = &*self.field;
        let mut out = vector::zero(self.n);
        for i in (0..self.n).filter(|&i| !a[i].is_zero()) {
            for j in (0..self.n).filter(|&j| !b[j].is_zero()) {
                vector::axpy(f, &mut out, f.mul(a[i], b[j]), self.basis_product(i, j));
            }
        }
        Ok(out)
    }

    pub fn circle(&self, a: &[FieldElement], b: &[FieldElement]) -> Result<Vector> {
        let prod = self.product(a, b)?;
        let f = &*self.field;
        Ok(vector::add(f, &vector::add(f, a, b), &prod))
    }

    pub fn is_commutative(&self) -> bool {
        (0..self.n).all(|i| (0..i).all(|j| self.basis_product(i, j) == self.basis_product(j, i)))
    }

    pub fn is_associative(&self) -> bool {
        let f = &self.field;
        let e = |i| vector::unit(f, self.n, i);
        (0..self.n).all(|i| {
            (0..self.n).all(|j| {
                (0..self.n).all(|k| {
                    let left = self.product(self.basis_product(i, j), &e(k)).unwrap();
                    let right = self.product(&e(i), self.basis_product(j, k)).unwrap();
                    left == right
                })
            })
        })
    }

    /// The algebra in the basis given by the rows of `basis` (invertible):
    /// new constants satisfy `b_i·b_j = Σ_l c'_{i,j,l} b_l`.
    pub fn change_basis(&self, basis: &MatFp) -> Result<Self> {
        if basis.rows() != self.n || basis.cols() != self.n {
            return Err(dim_mismatch("change of basis must be n x n"));
        }
        let inv = basis.invert()?;
        let mut out = Self::zero(self.field.clone(), self.n);
        for i in 0..self.n {
            for j in 0..self.n {
                let prod = self.product(basis.row(i), basis.row(j))?;
                let coords = inv.vec_mul(&prod)?;
                for (l, &x) in coords.iter().enumerate() {
                    out.set(i, j, l, x);
                }
            }
        }
        Ok(out)
    }

    /// Basis of `{a : a·V = 0}`: the left kernel of `a ↦ (a·e_1, …, a·e_n)`.
    pub fn annihilator(&self) -> Vec<Vector> {
        let rows = (0..self.n)
            .map(|i| {
                (0..self.n)
                    .flat_map(|j| self.basis_product(i, j).iter().copied())
                    .collect()
            })
            .collect();
        MatFp::from_rows(self.field.clone(), rows)
            .expect("rows have length n²")
            .left_kernel()
    }

    /// Basis of `V·V`.
    pub fn square_span(&self) -> Vec<Vector> {
        let prods: Vec<Vector> = (0..self.n)
            .flat_map(|i| (0..self.n).map(move |j| (i, j)))
            .map(|(i, j)| self.basis_product(i, j).to_vec())
            .collect();
        row_space_basis(&self.field, self.n, &prods).expect("lengths match")
    }

    pub fn nilpotency_check(&self) -> NilpotencyIndex {
        let v2 = self.square_span();
        if v2.is_empty() {
            return NilpotencyIndex::Two;
        }
        let f = &self.field;
        let v3: Vec<Vector> = v2
            .iter()
            .flat_map(|v| (0..self.n).map(move |k| self.product(v, &vector::unit(f, self.n, k)).unwrap()))
            .collect();
        if row_space_basis(f, self.n, &v3).expect("lengths match").is_empty() {
            NilpotencyIndex::Three
        } else {
            NilpotencyIndex::AtLeastFour
        }
    }
}
