//! Axiom checkers for left/right braces and bi-braces on `V = F^n`.
//!
//! A [`BraceCandidate`] pairs the vector-space addition with a second
//! operation `∘`, given either as a full table or as a rule
//! `a∘b = a + b + a·b` derived from a structure-constant algebra.
//! Checks run exhaustively (all tuples, scan order `a`, then `b`, then `c`,
//! ascending) or on seeded random samples; the first counterexample found is
//! reported.

use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::algebra::{AlgebraSpec, StructureConstantAlgebra};
use crate::error::{Error, Result};
use crate::gf::Field;
use crate::vector::{self, Vector};

/// Largest `|V|` accepted by exhaustive mode.
pub const EXHAUSTIVE_LIMIT: u64 = 729;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ModeKind {
    Exhaustive,
    Sampled,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    Exhaustive,
    Sampled { seed: u64, samples: usize },
}

impl Mode {
    pub fn sampled(seed: u64) -> Mode {
        Mode::Sampled { seed, samples: 2000 }
    }

    pub fn kind(self) -> ModeKind {
        match self {
            Mode::Exhaustive => ModeKind::Exhaustive,
            Mode::Sampled { .. } => ModeKind::Sampled,
        }
    }

    fn seed(self) -> Option<u64> {
        match self {
            Mode::Exhaustive => None,
            Mode::Sampled { seed, .. } => Some(seed),
        }
    }
}

/// Outcome of a check. On success `axiom` names the check that was run; on
/// failure it names the first axiom that broke and `witness` holds the
/// offending tuple.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Verdict {
    pub pass: bool,
    pub axiom: String,
    pub witness: Option<Vec<Vector>>,
    pub mode: ModeKind,
    pub seed: Option<u64>,
}

impl Verdict {
    fn passed(axiom: &str, mode: Mode) -> Verdict {
        Verdict {
            pass: true,
            axiom: axiom.into(),
            witness: None,
            mode: mode.kind(),
            seed: mode.seed(),
        }
    }
}

#[derive(Debug, Clone)]
enum CircRule {
    Addition,
    Table(Vec<u32>),
    Algebra(StructureConstantAlgebra),
}

/// `(V, +, ∘)` with `V = F^n`.
#[derive(Debug, Clone)]
pub struct BraceCandidate {
    field: Arc<Field>,
    n: usize,
    size: u64,
    rule: CircRule,
}

impl BraceCandidate {
    fn with_rule(field: Arc<Field>, n: usize, rule: CircRule) -> Result<Self> {
        let size = vector::space_size(&field, n).ok_or(Error::TooLarge(u64::MAX))?;
        Ok(BraceCandidate { field, n, size, rule })
    }

    /// The trivial brace, `∘ = +`.
    pub fn trivial(field: Arc<Field>, n: usize) -> Result<Self> {
        Self::with_rule(field, n, CircRule::Addition)
    }

    /// `a∘b = a + b + a·b`.
    pub fn from_algebra(sca: &StructureConstantAlgebra) -> Result<Self> {
        Self::with_rule(sca.field().clone(), sca.n(), CircRule::Algebra(sca.clone()))
    }

    pub fn from_spec(alg: &AlgebraSpec) -> Result<Self> {
        Self::from_algebra(&alg.to_structure_constants())
    }

    /// An explicit table: `table[a·|V| + b]` is the index of `a∘b`. Entries
    /// outside `V` are allowed and show up as a closure failure.
    pub fn from_table(field: Arc<Field>, n: usize, table: Vec<u32>) -> Result<Self> {
        let c = Self::with_rule(field, n, CircRule::Addition)?;
        if table.len() as u64 != c.size * c.size {
            return Err(Error::DimensionMismatch(format!(
                "table of length {} for |V| = {}",
                table.len(),
                c.size
            )));
        }
        Ok(BraceCandidate {
            rule: CircRule::Table(table),
            ..c
        })
    }

    pub fn field(&self) -> &Arc<Field> {
        &self.field
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn size(&self) -> u64 {
        self.size
    }

    pub fn circ(&self, a: &[crate::FieldElement], b: &[crate::FieldElement]) -> Vector {
        match &self.rule {
            CircRule::Addition => vector::add(&self.field, a, b),
            CircRule::Algebra(sca) => sca.circ_unchecked(a, b),
            CircRule::Table(t) => {
                let i = vector::index(&self.field, a) * self.size + vector::index(&self.field, b);
                vector::from_index(&self.field, self.n, t[i as usize] as u64)
            }
        }
    }

    /// The full `∘` table, indexed as in [`BraceCandidate::from_table`].
    pub fn table(&self) -> Result<Vec<u32>> {
        if self.size > EXHAUSTIVE_LIMIT {
            return Err(Error::TooLargeForExhaustive(self.size));
        }
        if let CircRule::Table(t) = &self.rule {
            return Ok(t.clone());
        }
        let elems: Vec<Vector> = vector::all(&self.field, self.n).collect();
        Ok(elems
            .par_iter()
            .flat_map_iter(|a| {
                elems
                    .iter()
                    .map(move |b| vector::index(&self.field, &self.circ(a, b)) as u32)
            })
            .collect())
    }
}

impl StructureConstantAlgebra {
    pub(crate) fn circ_unchecked(&self, a: &[crate::FieldElement], b: &[crate::FieldElement]) -> Vector {
        self.circle(a, b).expect("lengths checked by caller")
    }
}

/// Group-ish operations on element handles, shared by the table and rule
/// back ends.
trait Ops: Sync {
    fn size(&self) -> u64;
    fn in_range(&self, a: u64) -> bool;
    fn add(&self, a: u64, b: u64) -> u64;
    fn neg(&self, a: u64) -> u64;
    fn circ(&self, a: u64, b: u64) -> u64;
    /// Some `b` with `a∘b = b∘a = 0`.
    fn circ_inv(&self, a: u64) -> Option<u64>;
}

struct TableOps {
    size: u64,
    add: Vec<u32>,
    neg: Vec<u32>,
    circ: Vec<u32>,
    circ_inv: Vec<Option<u32>>,
}

impl TableOps {
    fn new(c: &BraceCandidate) -> Result<Self> {
        let circ = c.table()?;
        let size = c.size;
        let elems: Vec<Vector> = vector::all(&c.field, c.n).collect();
        let idx = |v: &Vector| vector::index(&c.field, v) as u32;
        let add = elems
            .iter()
            .flat_map(|a| elems.iter().map(move |b| idx(&vector::add(&c.field, a, b))))
            .collect();
        let neg = elems.iter().map(|a| idx(&vector::neg(&c.field, a))).collect();
        let circ_inv = (0..size)
            .map(|a| {
                (0..size)
                    .find(|&b| circ[(a * size + b) as usize] == 0 && circ[(b * size + a) as usize] == 0)
                    .map(|b| b as u32)
            })
            .collect();
        Ok(TableOps {
            size,
            add,
            neg,
            circ,
            circ_inv,
        })
    }
}

impl Ops for TableOps {
    fn size(&self) -> u64 {
        self.size
    }
    fn in_range(&self, a: u64) -> bool {
        a < self.size
    }
    fn add(&self, a: u64, b: u64) -> u64 {
        self.add[(a * self.size + b) as usize] as u64
    }
    fn neg(&self, a: u64) -> u64 {
        self.neg[a as usize] as u64
    }
    fn circ(&self, a: u64, b: u64) -> u64 {
        self.circ[(a * self.size + b) as usize] as u64
    }
    fn circ_inv(&self, a: u64) -> Option<u64> {
        self.circ_inv[a as usize].map(u64::from)
    }
}

/// Evaluates operations on demand, for spaces too large to tabulate.
struct RuleOps<'a> {
    c: &'a BraceCandidate,
}

impl RuleOps<'_> {
    fn v(&self, a: u64) -> Vector {
        vector::from_index(&self.c.field, self.c.n, a)
    }
    fn i(&self, v: &[crate::FieldElement]) -> u64 {
        vector::index(&self.c.field, v)
    }
}

impl Ops for RuleOps<'_> {
    fn size(&self) -> u64 {
        self.c.size
    }
    fn in_range(&self, a: u64) -> bool {
        a < self.c.size
    }
    fn add(&self, a: u64, b: u64) -> u64 {
        self.i(&vector::add(&self.c.field, &self.v(a), &self.v(b)))
    }
    fn neg(&self, a: u64) -> u64 {
        self.i(&vector::neg(&self.c.field, &self.v(a)))
    }
    fn circ(&self, a: u64, b: u64) -> u64 {
        self.i(&self.c.circ(&self.v(a), &self.v(b)))
    }
    fn circ_inv(&self, a: u64) -> Option<u64> {
        let is_inv = |b: u64| self.circ(a, b) == 0 && self.circ(b, a) == 0;
        // in a nilpotent algebra the inverse is the finite series -a + a² - a³ + …
        if let CircRule::Algebra(sca) = &self.c.rule {
            let f = &self.c.field;
            let x = self.v(a);
            let mut power = x.clone();
            let mut series = vector::zero(self.c.n);
            for t in 1..=self.c.n + 1 {
                let signed = if t % 2 == 1 {
                    vector::neg(f, &power)
                } else {
                    power.clone()
                };
                series = vector::add(f, &series, &signed);
                power = sca.product(&power, &x).expect("lengths match");
            }
            let b = self.i(&series);
            if is_inv(b) {
                return Some(b);
            }
        }
        if self.c.size <= 1 << 16 {
            (0..self.c.size).find(|&b| is_inv(b))
        } else {
            None
        }
    }
}

/// Identity checked by a brace-style scan; `true` means the tuple is fine.
type Law<'a> = dyn Fn(&dyn Ops, &[u64]) -> bool + Sync + 'a;

struct Axiom<'a> {
    name: &'static str,
    arity: usize,
    law: Box<Law<'a>>,
}

fn first_failure(ops: &dyn Ops, axiom: &Axiom, mode: Mode, salt: u64) -> Option<Vec<u64>> {
    let size = ops.size();
    match mode {
        Mode::Exhaustive => match axiom.arity {
            1 => (0..size).find(|&a| !(axiom.law)(ops, &[a])).map(|a| vec![a]),
            2 => (0..size)
                .into_par_iter()
                .find_map_first(|a| (0..size).find(|&b| !(axiom.law)(ops, &[a, b])).map(|b| vec![a, b])),
            _ => (0..size).into_par_iter().find_map_first(|a| {
                (0..size).find_map(|b| {
                    (0..size)
                        .find(|&c| !(axiom.law)(ops, &[a, b, c]))
                        .map(|c| vec![a, b, c])
                })
            }),
        },
        Mode::Sampled { seed, samples } => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed ^ salt.wrapping_mul(0x9e37_79b9_7f4a_7c15));
            (0..samples).find_map(|_| {
                let t: Vec<u64> = (0..axiom.arity).map(|_| rng.gen_range(0..size)).collect();
                (!(axiom.law)(ops, &t)).then_some(t)
            })
        }
    }
}

fn group_axioms<'a>() -> Vec<Axiom<'a>> {
    vec![
        Axiom {
            name: "circ-closure",
            arity: 2,
            law: Box::new(|o, t| o.in_range(o.circ(t[0], t[1]))),
        },
        Axiom {
            name: "circ-identity",
            arity: 1,
            law: Box::new(|o, t| o.circ(0, t[0]) == t[0] && o.circ(t[0], 0) == t[0]),
        },
        Axiom {
            name: "circ-inverse",
            arity: 1,
            law: Box::new(|o, t| o.circ_inv(t[0]).is_some()),
        },
        Axiom {
            name: "circ-associativity",
            arity: 3,
            law: Box::new(|o, t| o.circ(o.circ(t[0], t[1]), t[2]) == o.circ(t[0], o.circ(t[1], t[2]))),
        },
        Axiom {
            name: "circ-commutativity",
            arity: 2,
            law: Box::new(|o, t| o.circ(t[0], t[1]) == o.circ(t[1], t[0])),
        },
    ]
}

/// `a∘(b+c) = a∘b − a + a∘c`
fn left_law(o: &dyn Ops, t: &[u64]) -> bool {
    let (a, b, c) = (t[0], t[1], t[2]);
    o.circ(a, o.add(b, c)) == o.add(o.add(o.circ(a, b), o.neg(a)), o.circ(a, c))
}

/// `(a+b)∘c = a∘c − c + b∘c`
fn right_law(o: &dyn Ops, t: &[u64]) -> bool {
    let (a, b, c) = (t[0], t[1], t[2]);
    o.circ(o.add(a, b), c) == o.add(o.add(o.circ(a, c), o.neg(c)), o.circ(b, c))
}

/// Left law of `(V, ∘, +)`: `a + (b∘c) = (a+b) ∘ a⁻ ∘ (a+c)`, `a⁻` the `∘`-inverse.
fn dual_left_law(o: &dyn Ops, t: &[u64]) -> bool {
    let (a, b, c) = (t[0], t[1], t[2]);
    let Some(abar) = o.circ_inv(a) else { return false };
    o.add(a, o.circ(b, c)) == o.circ(o.circ(o.add(a, b), abar), o.add(a, c))
}

/// Right law of `(V, ∘, +)`: `(a∘b) + c = (a+c) ∘ c⁻ ∘ (b+c)`.
fn dual_right_law(o: &dyn Ops, t: &[u64]) -> bool {
    let (a, b, c) = (t[0], t[1], t[2]);
    let Some(cbar) = o.circ_inv(c) else { return false };
    o.add(o.circ(a, b), c) == o.circ(o.circ(o.add(a, c), cbar), o.add(b, c))
}

fn run(c: &BraceCandidate, name: &str, axioms: Vec<Axiom>, mode: Mode) -> Result<Verdict> {
    let table_ops;
    let rule_ops = RuleOps { c };
    let ops: &dyn Ops = match mode {
        Mode::Exhaustive => {
            table_ops = TableOps::new(c)?;
            &table_ops
        }
        Mode::Sampled { .. } => &rule_ops,
    };
    for (salt, axiom) in axioms.iter().enumerate() {
        if let Some(t) = first_failure(ops, axiom, mode, salt as u64) {
            return Ok(Verdict {
                pass: false,
                axiom: axiom.name.into(),
                witness: Some(t.iter().map(|&i| vector::from_index(&c.field, c.n, i)).collect()),
                mode: mode.kind(),
                seed: mode.seed(),
            });
        }
    }
    Ok(Verdict::passed(name, mode))
}

fn with_law<'a>(mut axioms: Vec<Axiom<'a>>, name: &'static str, law: fn(&dyn Ops, &[u64]) -> bool) -> Vec<Axiom<'a>> {
    axioms.push(Axiom {
        name,
        arity: 3,
        law: Box::new(law),
    });
    axioms
}

/// `(V, ∘)` is an abelian group and `a∘(b+c) = a∘b − a + a∘c`.
pub fn check_left_brace(c: &BraceCandidate, mode: Mode) -> Result<Verdict> {
    run(c, "left-brace", with_law(group_axioms(), "left-brace", left_law), mode)
}

/// `(V, ∘)` is an abelian group and `(a+b)∘c = a∘c − c + b∘c`.
pub fn check_right_brace(c: &BraceCandidate, mode: Mode) -> Result<Verdict> {
    run(
        c,
        "right-brace",
        with_law(group_axioms(), "right-brace", right_law),
        mode,
    )
}

/// Both `(V, +, ∘)` and `(V, ∘, +)` are two-sided braces.
pub fn check_bibrace_candidate(c: &BraceCandidate, mode: Mode) -> Result<Verdict> {
    let mut axioms = with_law(group_axioms(), "left-brace", left_law);
    axioms = with_law(axioms, "right-brace", right_law);
    axioms = with_law(axioms, "dual-left-brace", dual_left_law);
    axioms = with_law(axioms, "dual-right-brace", dual_right_law);
    run(c, "bi-brace", axioms, mode)
}

/// Bi-brace check for the circle operation of a structure-constant algebra.
pub fn check_bibrace(sca: &StructureConstantAlgebra, mode: Mode) -> Result<Verdict> {
    check_bibrace_candidate(&BraceCandidate::from_algebra(sca)?, mode)
}

/// `γ_{a+b} = γ_{a∘b} = γ_a·γ_b` over all (or sampled) pairs.
pub fn gamma_homomorphism_check(alg: &AlgebraSpec, mode: Mode) -> Result<Verdict> {
    let f = alg.field();
    let n = alg.n();
    let size = vector::space_size(f, n).ok_or(Error::TooLarge(u64::MAX))?;
    let holds = |a: u64, b: u64| -> Result<bool> {
        let (x, y) = (vector::from_index(f, n, a), vector::from_index(f, n, b));
        let sum = alg.gamma(&vector::add(f, &x, &y))?;
        let circ = alg.gamma(&alg.circle(&x, &y)?)?;
        let prod = alg.gamma(&x)?.mul(&alg.gamma(&y)?)?;
        Ok(sum == circ && circ == prod)
    };
    let failure = match mode {
        Mode::Exhaustive => {
            if size > EXHAUSTIVE_LIMIT {
                return Err(Error::TooLargeForExhaustive(size));
            }
            (0..size)
                .into_par_iter()
                .find_map_first(|a| (0..size).find(|&b| !holds(a, b).unwrap_or(false)).map(|b| (a, b)))
        }
        Mode::Sampled { seed, samples } => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            (0..samples).find_map(|_| {
                let (a, b) = (rng.gen_range(0..size), rng.gen_range(0..size));
                (!holds(a, b).unwrap_or(false)).then_some((a, b))
            })
        }
    };
    Ok(match failure {
        None => Verdict::passed("gamma-homomorphism", mode),
        Some((a, b)) => Verdict {
            pass: false,
            axiom: "gamma-homomorphism".into(),
            witness: Some(vec![vector::from_index(f, n, a), vector::from_index(f, n, b)]),
            mode: mode.kind(),
            seed: mode.seed(),
        },
    })
}
