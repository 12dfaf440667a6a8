//! Brute-force engines used to cross-check the closed-form results:
//! exhaustive isomorphism search, enumeration of defining matrices,
//! enumeration of regular subgroups of `AGL(n, p)` and Dixon conjugators.

use std::collections::{BTreeSet, HashMap, VecDeque};
use std::sync::Arc;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::algebra::{AlgebraSpec, StructureConstantAlgebra};
use crate::classify::iso_test;
use crate::error::{dim_mismatch, Error, Result};
use crate::gf::{Field, FieldElement};
use crate::holomorph::{compose, AffineMap, SubgroupTable};
use crate::matfp::{row_space_basis, same_field, MatFp};
use crate::vector::{self, Vector};

/// Candidate budget for the block-diagonal search, `2·|GL(m)|`.
pub const BLOCKDIAG_LIMIT: u64 = 10_000_000;
/// Candidate budget for the unrestricted search, `|GL(n)|`.
pub const UNRESTRICTED_LIMIT: u64 = 2_000_000;
/// Bound on the number of symmetric matrices scanned by [`enumerate_valid_theta`].
pub const THETA_LIMIT: u64 = 1_000_000;
/// Largest `p^n` handled by [`enumerate_regular_subgroups_small`].
pub const SUBGROUP_LIMIT: u64 = 27;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Shape {
    Blockdiag,
    Unrestricted,
}

/// `|GL(n, q)|`, saturating.
pub fn gl_order(q: u64, n: usize) -> u64 {
    let qn = q.saturating_pow(n as u32);
    (0..n as u32).fold(1u64, |acc, i| acc.saturating_mul(qn - q.saturating_pow(i)))
}

/// Searches for `F` with `F(a·₁b) = F(a)·₂F(b)`, `F(x) = x·M`, and returns
/// `M`. Candidates are scanned as `1 + X` with `X` in index order, so the
/// identity is tried first.
pub fn brute_force_iso(alg1: &AlgebraSpec, alg2: &AlgebraSpec, shape: Shape) -> Result<MatFp> {
    same_field(alg1.field(), alg2.field())?;
    if alg1.n() != alg2.n() {
        return Err(dim_mismatch(format!("dimensions {} and {}", alg1.n(), alg2.n())));
    }
    match shape {
        Shape::Blockdiag => blockdiag_search(alg1, alg2),
        Shape::Unrestricted => unrestricted_search(alg1, alg2),
    }
}

fn blockdiag_search(alg1: &AlgebraSpec, alg2: &AlgebraSpec) -> Result<MatFp> {
    for alg in [alg1, alg2] {
        if alg.d() != 1 {
            return Err(Error::UnsupportedD(alg.d()));
        }
    }
    let f = alg1.field();
    let (m, n) = (alg1.m(), alg1.n());
    let q = f.order() as u64;
    let budget = gl_order(q, m).saturating_mul(2);
    if budget > BLOCKDIAG_LIMIT {
        return Err(Error::SearchSpaceTooLarge(budget));
    }
    let total = vector::space_size(f, m * m).ok_or(Error::SearchSpaceTooLarge(u64::MAX))?;
    let scalars = [f.one(), f.find_nonsquare()];
    let found = (0..total).into_par_iter().find_map_first(|idx| {
        let mut a = MatFp::identity(f.clone(), m);
        for (e, x) in vector::from_index(f, m * m, idx).into_iter().enumerate() {
            a.set(e / m, e % m, f.add(a.get(e / m, e % m), x));
        }
        if a.det().ok()?.is_zero() {
            return None;
        }
        scalars.iter().find_map(|&l| {
            let mut map = MatFp::zeros(f.clone(), n, n);
            for i in 0..m {
                for j in 0..m {
                    map.set(i, j, a.get(i, j));
                }
            }
            map.set(m, m, l);
            multiplicative(&map, alg1, alg2).then_some(map)
        })
    });
    found.ok_or(Error::NotIsomorphic)
}

fn multiplicative(map: &MatFp, src: &AlgebraSpec, dst: &AlgebraSpec) -> bool {
    let f = src.field();
    let n = src.n();
    (0..n).all(|i| {
        (0..n).all(|j| {
            let lhs = map
                .vec_mul(&src.product(&vector::unit(f, n, i), &vector::unit(f, n, j)).unwrap())
                .unwrap();
            lhs == dst.product(map.row(i), map.row(j)).unwrap()
        })
    })
}

/// Backtracking over the images of `e_n, e_{n−1}, …, e_1`. A product
/// constraint is checked as soon as every row it involves is fixed.
fn unrestricted_search(alg1: &AlgebraSpec, alg2: &AlgebraSpec) -> Result<MatFp> {
    let f = alg1.field().clone();
    let n = alg1.n();
    let budget = gl_order(f.order() as u64, n);
    if budget > UNRESTRICTED_LIMIT {
        return Err(Error::SearchSpaceTooLarge(budget));
    }
    let s1 = alg1.to_structure_constants();
    let s2 = alg2.to_structure_constants();
    let size = vector::space_size(&f, n).unwrap();
    let ctx = Backtrack {
        f: &f,
        n,
        s1: &s1,
        s2: &s2,
        size,
    };
    let top = n - 1;
    let found = (0..size).into_par_iter().find_map_first(|x| {
        let mut rows = vec![None; n];
        rows[top] = Some(ctx.candidate(top, x));
        ctx.admissible(&rows, top).then_some(())?;
        ctx.descend(&mut rows, top)
    });
    let rows = found.ok_or(Error::NotIsomorphic)?;
    MatFp::from_rows(f, rows)
}

struct Backtrack<'a> {
    f: &'a Arc<Field>,
    n: usize,
    s1: &'a StructureConstantAlgebra,
    s2: &'a StructureConstantAlgebra,
    size: u64,
}

impl Backtrack<'_> {
    fn candidate(&self, level: usize, x: u64) -> Vector {
        let mut v = vector::from_index(self.f, self.n, x);
        v[level] = self.f.add(v[level], self.f.one());
        v
    }

    /// Rows `level..n` are independent and every product among basis
    /// vectors whose constraint is fully assigned is respected.
    fn admissible(&self, rows: &[Option<Vector>], level: usize) -> bool {
        self.products_respected(rows, level) && {
            let fixed: Vec<Vector> = rows[level..].iter().map(|r| r.clone().unwrap()).collect();
            row_space_basis(self.f, self.n, &fixed).unwrap().len() == fixed.len()
        }
    }

    fn products_respected(&self, rows: &[Option<Vector>], level: usize) -> bool {
        let new = level;
        for j in level..self.n {
            for (i, k) in [(new, j), (j, new)] {
                let c = self.s1.basis_product(i, k);
                if c.iter().enumerate().any(|(l, x)| !x.is_zero() && rows[l].is_none()) {
                    continue;
                }
                let mut image = vector::zero(self.n);
                for (l, &x) in c.iter().enumerate() {
                    if !x.is_zero() {
                        vector::axpy(self.f, &mut image, x, rows[l].as_ref().unwrap());
                    }
                }
                let prod = self
                    .s2
                    .product(rows[i].as_ref().unwrap(), rows[k].as_ref().unwrap())
                    .unwrap();
                if image != prod {
                    return false;
                }
            }
        }
        // constraints that became complete through rows fixed earlier
        for i in level..self.n {
            for k in level..self.n {
                let c = self.s1.basis_product(i, k);
                let touches_new = c.iter().enumerate().any(|(l, x)| !x.is_zero() && l == new);
                if !touches_new || i == new || k == new {
                    continue;
                }
                if c.iter().enumerate().any(|(l, x)| !x.is_zero() && rows[l].is_none()) {
                    continue;
                }
                let mut image = vector::zero(self.n);
                for (l, &x) in c.iter().enumerate() {
                    if !x.is_zero() {
                        vector::axpy(self.f, &mut image, x, rows[l].as_ref().unwrap());
                    }
                }
                let prod = self
                    .s2
                    .product(rows[i].as_ref().unwrap(), rows[k].as_ref().unwrap())
                    .unwrap();
                if image != prod {
                    return false;
                }
            }
        }
        true
    }

    fn descend(&self, rows: &mut Vec<Option<Vector>>, level: usize) -> Option<Vec<Vector>> {
        if level == 0 {
            return self.complete(rows);
        }
        let next = level - 1;
        for x in 0..self.size {
            rows[next] = Some(self.candidate(next, x));
            if self.admissible(rows, next) {
                if let Some(found) = self.descend(rows, next) {
                    return Some(found);
                }
            }
        }
        rows[next] = None;
        None
    }

    /// Final check of every basis product, including those whose support
    /// reaches below the rows that were fixed when they were first seen.
    fn complete(&self, rows: &[Option<Vector>]) -> Option<Vec<Vector>> {
        let rows: Vec<Vector> = rows.iter().map(|r| r.clone().unwrap()).collect();
        for i in 0..self.n {
            for k in 0..self.n {
                let mut image = vector::zero(self.n);
                for (l, &x) in self.s1.basis_product(i, k).iter().enumerate() {
                    vector::axpy(self.f, &mut image, x, &rows[l]);
                }
                if image != self.s2.product(&rows[i], &rows[k]).unwrap() {
                    return None;
                }
            }
        }
        Some(rows)
    }
}

/// Every invertible symmetric `m × m` matrix over `F_{p^k}`. Matrices are
/// ordered by their upper triangle read row by row as base-`q` digits, the
/// first entry least significant.
pub fn enumerate_valid_theta(p: u64, k: u32, m: usize) -> Result<Vec<MatFp>> {
    let f = Field::new(p, k)?;
    enumerate_valid_theta_over(&f, m)
}

pub fn enumerate_valid_theta_over(f: &Arc<Field>, m: usize) -> Result<Vec<MatFp>> {
    if m == 0 {
        return Err(Error::InvalidInput("m must be positive".into()));
    }
    let slots = m * (m + 1) / 2;
    let total = vector::space_size(f, slots)
        .filter(|&t| t <= THETA_LIMIT)
        .ok_or_else(|| Error::SearchSpaceTooLarge((f.order() as u64).saturating_pow(slots as u32)))?;
    let found: Vec<MatFp> = (0..total)
        .into_par_iter()
        .filter_map(|idx| {
            let digits = vector::from_index(f, slots, idx);
            let mut t = MatFp::zeros(f.clone(), m, m);
            let mut it = digits.into_iter();
            for i in 0..m {
                for j in i..m {
                    let x = it.next().unwrap();
                    t.set(i, j, x);
                    t.set(j, i, x);
                }
            }
            (!t.det().ok()?.is_zero()).then_some(t)
        })
        .collect();
    Ok(found)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Relation {
    IsoTest,
    BruteForce,
}

/// Groups `thetas` into isomorphism classes. Each matrix is compared with
/// the first member of every class found so far and joins the first one it
/// is isomorphic to. Classes are listed by first member.
pub fn partition_into_classes(thetas: &[MatFp], via: Relation) -> Result<Vec<Vec<usize>>> {
    let algs = thetas
        .iter()
        .map(AlgebraSpec::from_theta_matrix)
        .collect::<Result<Vec<_>>>()?;
    let related = |a: &AlgebraSpec, b: &AlgebraSpec| -> Result<bool> {
        let r = match via {
            Relation::IsoTest => iso_test(a, b).map(|_| ()),
            Relation::BruteForce => brute_force_iso(a, b, Shape::Unrestricted).map(|_| ()),
        };
        match r {
            Ok(()) => Ok(true),
            Err(Error::NotIsomorphic) => Ok(false),
            Err(e) => Err(e),
        }
    };
    let mut classes: Vec<Vec<usize>> = Vec::new();
    for (i, alg) in algs.iter().enumerate() {
        let mut home = None;
        for (c, class) in classes.iter().enumerate() {
            if related(&algs[class[0]], alg)? {
                home = Some(c);
                break;
            }
        }
        match home {
            Some(c) => classes[c].push(i),
            None => classes.push(vec![i]),
        }
    }
    Ok(classes)
}

/// Affine map on `F_p^n`, `n ≤ 3`, stored densely for the subgroup search.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
struct Aff {
    m: [[u8; 3]; 3],
    t: [u8; 3],
}

#[derive(Clone, Copy)]
struct Small {
    p: u8,
    n: usize,
}

impl Small {
    fn identity(self) -> Aff {
        let mut m = [[0u8; 3]; 3];
        for (i, row) in m.iter_mut().enumerate().take(self.n) {
            row[i] = 1;
        }
        Aff { m, t: [0; 3] }
    }

    fn compose(self, f: &Aff, g: &Aff) -> Aff {
        let p = self.p as u16;
        let mut out = Aff {
            m: [[0; 3]; 3],
            t: [0; 3],
        };
        for i in 0..self.n {
            for j in 0..self.n {
                let s: u16 = (0..self.n).map(|k| f.m[i][k] as u16 * g.m[k][j] as u16).sum();
                out.m[i][j] = (s % p) as u8;
            }
        }
        for j in 0..self.n {
            let s: u16 = (0..self.n).map(|k| f.t[k] as u16 * g.m[k][j] as u16).sum::<u16>() + g.t[j] as u16;
            out.t[j] = (s % p) as u8;
        }
        out
    }

    fn label(self, a: &Aff) -> usize {
        (0..self.n)
            .rev()
            .fold(0, |acc, i| acc * self.p as usize + a.t[i] as usize)
    }

    fn vector(self, idx: usize) -> [u8; 3] {
        let mut t = [0u8; 3];
        let mut r = idx;
        for x in t.iter_mut().take(self.n) {
            *x = (r % self.p as usize) as u8;
            r /= self.p as usize;
        }
        t
    }

    fn has_exponent_p(self, a: &Aff) -> bool {
        let mut acc = *a;
        for _ in 1..self.p {
            acc = self.compose(&acc, a);
        }
        acc == self.identity()
    }

    fn size(self) -> usize {
        (self.p as usize).pow(self.n as u32)
    }

    /// Conjugation by `σ_{e_i}`: `σ_{e_i} · a · σ_{−e_i}`.
    fn conjugate_by_unit(self, a: &Aff, i: usize) -> Aff {
        let mut plus = self.identity();
        plus.t[i] = 1;
        let mut minus = self.identity();
        minus.t[i] = self.p - 1;
        self.compose(&self.compose(&plus, a), &minus)
    }

    fn to_affine(self, f: &Arc<Field>, a: &Aff) -> AffineMap {
        let data = (0..self.n)
            .flat_map(|i| (0..self.n).map(move |j| FieldElement(a.m[i][j] as u32)))
            .collect();
        AffineMap {
            linear: MatFp::new(f.clone(), self.n, self.n, data).unwrap(),
            translation: (0..self.n).map(|i| FieldElement(a.t[i] as u32)).collect(),
        }
    }

    fn encode(self, a: &AffineMap) -> Aff {
        let mut out = Aff {
            m: [[0; 3]; 3],
            t: [0; 3],
        };
        for i in 0..self.n {
            for j in 0..self.n {
                out.m[i][j] = a.linear.get(i, j).index() as u8;
            }
            out.t[i] = a.translation[i].index() as u8;
        }
        out
    }
}

/// Partial subgroup during the search: the element with each label, if fixed.
#[derive(Clone)]
struct Partial {
    by_label: Vec<Option<Aff>>,
    elems: Vec<Aff>,
}

impl Partial {
    fn new(s: Small) -> Self {
        let mut p = Partial {
            by_label: vec![None; s.size()],
            elems: Vec::new(),
        };
        assert!(p.close(s, s.identity()));
        p
    }

    /// Adds `x` and closes under products and `T₊`-conjugation. Fails if a
    /// label would be taken twice, or on an element that does not commute
    /// with the rest or has order other than `1` or `p`.
    fn close(&mut self, s: Small, x: Aff) -> bool {
        let mut queue = VecDeque::from([x]);
        while let Some(y) = queue.pop_front() {
            let l = s.label(&y);
            match self.by_label[l] {
                Some(z) if z == y => continue,
                Some(_) => return false,
                None => {}
            }
            if !s.has_exponent_p(&y) {
                return false;
            }
            for z in &self.elems {
                let yz = s.compose(&y, z);
                if yz != s.compose(z, &y) {
                    return false;
                }
                queue.push_back(yz);
            }
            queue.push_back(s.compose(&y, &y));
            for i in 0..s.n {
                queue.push_back(s.conjugate_by_unit(&y, i));
            }
            self.by_label[l] = Some(y);
            self.elems.push(y);
        }
        true
    }

    fn first_open(&self) -> Option<usize> {
        self.by_label.iter().position(Option::is_none)
    }
}

/// A regular subgroup found by the search, with its defining matrix when it
/// is not `T₊`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RegularSubgroup {
    pub table: SubgroupTable,
    pub matched: Option<ThetaMatch>,
}

/// `basis` has `Ann(V)` in its last rows; in those coordinates the subgroup is
/// `T_∘` of `algebra`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ThetaMatch {
    pub algebra: AlgebraSpec,
    pub basis: MatFp,
}

fn linear_candidates(s: Small) -> Vec<[[u8; 3]; 3]> {
    let cells = s.n * s.n;
    let total = (s.p as usize).pow(cells as u32);
    (0..total)
        .filter_map(|idx| {
            let mut m = [[0u8; 3]; 3];
            let mut r = idx;
            for c in 0..cells {
                m[c / s.n][c % s.n] = (r % s.p as usize) as u8;
                r /= s.p as usize;
            }
            let a = Aff { m, t: [0; 3] };
            // M^p = 1 forces M invertible
            s.has_exponent_p(&a).then_some(m)
        })
        .collect()
}

fn search(s: Small, partial: Partial, lin: &[[[u8; 3]; 3]], out: &mut Vec<Vec<Aff>>) {
    let Some(open) = partial.first_open() else {
        out.push(partial.by_label.iter().map(|x| x.unwrap()).collect());
        return;
    };
    let t = s.vector(open);
    for &m in lin {
        let mut next = partial.clone();
        if next.close(s, Aff { m, t }) {
            search(s, next, lin, out);
        }
    }
}

/// Every elementary abelian regular subgroup of `AGL(n, p)` normalized by
/// the translations, each matched to a defining matrix.
pub fn enumerate_regular_subgroups_small(p: u64, n: usize) -> Result<Vec<RegularSubgroup>> {
    let f = Field::prime(p)?;
    let size = vector::space_size(&f, n).unwrap_or(u64::MAX);
    if n == 0 || size > SUBGROUP_LIMIT {
        return Err(Error::SearchSpaceTooLarge(size));
    }
    let s = Small { p: p as u8, n };
    let lin = linear_candidates(s);
    let root = Partial::new(s);
    let Some(open) = root.first_open() else {
        unreachable!("|V| ≥ p > 1")
    };
    let t = s.vector(open);
    let mut found: Vec<Vec<Aff>> = lin
        .par_iter()
        .flat_map_iter(|&m| {
            let mut next = root.clone();
            let mut out = Vec::new();
            if next.close(s, Aff { m, t }) {
                search(s, next, &lin, &mut out);
            }
            out
        })
        .collect();
    let unique: BTreeSet<Vec<Aff>> = found.drain(..).collect();
    unique
        .into_iter()
        .map(|elems| {
            let maps = elems.iter().map(|a| s.to_affine(&f, a)).collect();
            let table = SubgroupTable::new(f.clone(), n, maps)?;
            let matched = match_to_theta(&table)?;
            Ok(RegularSubgroup { table, matched })
        })
        .collect()
}

/// Closes a generator set under products and `T₊`-conjugation and returns
/// the table if the result is an elementary abelian regular subgroup.
pub fn close_candidate_set(field: &Arc<Field>, n: usize, gens: &[AffineMap]) -> Result<SubgroupTable> {
    if field.degree() != 1 {
        return Err(Error::InvalidInput("subgroup closure needs a prime field".into()));
    }
    let size = vector::space_size(field, n).unwrap_or(u64::MAX);
    if n == 0 || size > SUBGROUP_LIMIT {
        return Err(Error::SearchSpaceTooLarge(size));
    }
    let s = Small {
        p: field.characteristic() as u8,
        n,
    };
    let mut partial = Partial::new(s);
    for g in gens {
        if g.n() != n {
            return Err(dim_mismatch("generator of the wrong dimension"));
        }
        if !partial.close(s, s.encode(g)) {
            return Err(Error::VerificationFailed(
                "closure is not regular: two elements share a label, or an element breaks commutativity or exponent p"
                    .into(),
            ));
        }
    }
    if let Some(open) = partial.first_open() {
        return Err(Error::VerificationFailed(format!(
            "closure is not regular: no element sends 0 to label {open}"
        )));
    }
    let maps = partial
        .by_label
        .iter()
        .map(|a| s.to_affine(field, &a.unwrap()))
        .collect();
    SubgroupTable::new(field.clone(), n, maps)
}

/// Reads `a·b = a∘b − a − b = a(M_b − 1)` off the table, moves `Ann(V)` to
/// the last coordinates and checks that the table is `T_∘` of the
/// resulting defining matrix. Returns `None` for `T₊`.
pub fn match_to_theta(t: &SubgroupTable) -> Result<Option<ThetaMatch>> {
    let f = t.field();
    let n = t.n();
    if t.elements().iter().all(|e| e.linear.is_identity()) {
        return Ok(None);
    }
    let linear_of = |b: &[FieldElement]| -> Result<MatFp> {
        let e = t
            .by_label(b)
            .ok_or_else(|| Error::VerificationFailed("table is not labelled".into()))?;
        e.linear.sub(&MatFp::identity(f.clone(), n))
    };
    let mut sca = StructureConstantAlgebra::zero(f.clone(), n);
    for j in 0..n {
        let dj = linear_of(&vector::unit(f, n, j))?;
        for i in 0..n {
            for (l, &x) in dj.row(i).iter().enumerate() {
                sca.set(i, j, l, x);
            }
        }
    }
    for a in vector::all(f, n) {
        for b in vector::all(f, n) {
            if linear_of(&b)?.vec_mul(&a)? != sca.product(&a, &b)? {
                return Err(Error::VerificationFailed("induced product is not bilinear".into()));
            }
        }
    }
    let ann = sca.annihilator();
    let d = ann.len();
    let mut basis_rows: Vec<Vector> = Vec::new();
    for i in 0..n {
        let mut trial = basis_rows.clone();
        trial.extend(ann.iter().cloned());
        trial.push(vector::unit(f, n, i));
        if row_space_basis(f, n, &trial)?.len() == trial.len() {
            basis_rows.push(vector::unit(f, n, i));
        }
    }
    basis_rows.extend(ann);
    let basis = MatFp::from_rows(f.clone(), basis_rows)?;
    let algebra = AlgebraSpec::from_structure_constants(&sca.change_basis(&basis)?, d)?;
    let inv = basis.invert()?;
    for e in t.elements() {
        let conj = basis.mul(&e.linear)?.mul(&inv)?;
        let label = inv.vec_mul(&e.translation)?;
        if conj != algebra.gamma(&label)? {
            return Err(Error::VerificationFailed(
                "table differs from T_∘ after change of basis".into(),
            ));
        }
    }
    Ok(Some(ThetaMatch { algebra, basis }))
}

/// Permutation of `V` (as vector indices) induced by an affine map.
pub fn as_permutation(a: &AffineMap) -> Result<Vec<usize>> {
    let f = a.field();
    vector::all(f, a.n())
        .map(|x| a.apply(&x).map(|y| vector::index(f, &y) as usize))
        .collect()
}

struct GroupTable {
    mul: Vec<Vec<usize>>,
    identity: usize,
}

impl GroupTable {
    fn new(t: &SubgroupTable) -> Result<Self> {
        let keys: HashMap<Vec<usize>, usize> = t
            .elements()
            .iter()
            .enumerate()
            .map(|(i, e)| Ok((as_permutation(e)?, i)))
            .collect::<Result<_>>()?;
        let mut mul = vec![vec![0; t.len()]; t.len()];
        for (i, a) in t.elements().iter().enumerate() {
            for (j, b) in t.elements().iter().enumerate() {
                let c = as_permutation(&compose(a, b)?)?;
                mul[i][j] = *keys
                    .get(&c)
                    .ok_or_else(|| Error::VerificationFailed("table is not closed".into()))?;
            }
        }
        let identity = t
            .elements()
            .iter()
            .position(AffineMap::is_identity)
            .ok_or_else(|| Error::VerificationFailed("table has no identity".into()))?;
        Ok(GroupTable { mul, identity })
    }

    fn order_of(&self, x: usize) -> usize {
        let mut acc = x;
        let mut k = 1;
        while acc != self.identity {
            acc = self.mul[acc][x];
            k += 1;
        }
        k
    }

    /// Greedy generating set in index order.
    fn generators(&self) -> Vec<usize> {
        let mut inside = vec![false; self.mul.len()];
        inside[self.identity] = true;
        let mut gens = Vec::new();
        for x in 0..self.mul.len() {
            if inside[x] {
                continue;
            }
            gens.push(x);
            let mut queue: VecDeque<usize> = (0..self.mul.len()).filter(|&y| inside[y]).collect();
            while let Some(y) = queue.pop_front() {
                for &g in &gens {
                    let z = self.mul[y][g];
                    if !inside[z] {
                        inside[z] = true;
                        queue.push_back(z);
                    }
                }
            }
        }
        gens
    }
}

/// Extends `images` (on `gens[..images.len()]`) to a homomorphism on the
/// generated subgroup; `None` if that is inconsistent or not injective.
fn extend_hom(g1: &GroupTable, g2: &GroupTable, gens: &[usize], images: &[usize]) -> Option<Vec<Option<usize>>> {
    let mut map = vec![None; g1.mul.len()];
    let mut used = vec![false; g2.mul.len()];
    map[g1.identity] = Some(g2.identity);
    used[g2.identity] = true;
    let mut queue = VecDeque::from([g1.identity]);
    while let Some(x) = queue.pop_front() {
        let fx = map[x].unwrap();
        for (&g, &h) in gens.iter().zip(images) {
            let y = g1.mul[x][g];
            let fy = g2.mul[fx][h];
            match map[y] {
                Some(v) if v != fy => return None,
                Some(_) => {}
                None => {
                    if used[fy] {
                        return None;
                    }
                    used[fy] = true;
                    map[y] = Some(fy);
                    queue.push_back(y);
                }
            }
        }
    }
    Some(map)
}

fn find_iso(g1: &GroupTable, g2: &GroupTable, gens: &[usize], images: &mut Vec<usize>) -> Option<Vec<usize>> {
    if images.len() == gens.len() {
        let map = extend_hom(g1, g2, gens, images)?;
        return map.into_iter().collect();
    }
    let g = gens[images.len()];
    let order = g1.order_of(g);
    // the same index first, so equal tables give the identity
    let candidates = std::iter::once(g).chain((0..g2.mul.len()).filter(|&h| h != g));
    for h in candidates {
        if h >= g2.mul.len() || g2.order_of(h) != order {
            continue;
        }
        images.push(h);
        if extend_hom(g1, g2, gens, images).is_some() {
            if let Some(found) = find_iso(g1, g2, gens, images) {
                return Some(found);
            }
        }
        images.pop();
    }
    None
}

/// A permutation `g` of `V` with `g⁻¹·φ·g ∈ t2` for every `φ ∈ t1`, built
/// from an abstract isomorphism `α` through `g(0·φ) = 0·α(φ)`. The result
/// lists `g(x)` by vector index.
pub fn dixon_conjugator(t1: &SubgroupTable, t2: &SubgroupTable) -> Result<Vec<usize>> {
    same_field(t1.field(), t2.field())?;
    if t1.n() != t2.n() || t1.len() != t2.len() {
        return Err(Error::NotIsomorphic);
    }
    let g1 = GroupTable::new(t1)?;
    let g2 = GroupTable::new(t2)?;
    let gens = g1.generators();
    let alpha = find_iso(&g1, &g2, &gens, &mut Vec::new()).ok_or(Error::NotIsomorphic)?;
    let f = t1.field();
    let size = vector::space_size(f, t1.n()).unwrap() as usize;
    let mut g = vec![usize::MAX; size];
    for (i, phi) in t1.elements().iter().enumerate() {
        let x = vector::index(f, phi.label()) as usize;
        let y = vector::index(f, t2.get(alpha[i]).label()) as usize;
        if x >= size || g[x] != usize::MAX {
            return Err(Error::VerificationFailed("first table is not regular".into()));
        }
        g[x] = y;
    }
    let mut g_inv = vec![usize::MAX; size];
    for (x, &y) in g.iter().enumerate() {
        if y >= size || g_inv[y] != usize::MAX {
            return Err(Error::VerificationFailed("second table is not regular".into()));
        }
        g_inv[y] = x;
    }
    for (i, phi) in t1.elements().iter().enumerate() {
        let perm = as_permutation(phi)?;
        let conj: Vec<usize> = (0..size).map(|y| g[perm[g_inv[y]]]).collect();
        if conj != as_permutation(t2.get(alpha[i]))? {
            return Err(Error::VerificationFailed(format!(
                "g⁻¹·φ·g differs from α(φ) for element {i}"
            )));
        }
    }
    Ok(g)
}

/// Subgroups of `Sym(V)` used as a sanity reference: `T₊` as a table.
pub fn translations(p: u64, n: usize) -> Result<SubgroupTable> {
    SubgroupTable::translations(Field::prime(p)?, n)
}
