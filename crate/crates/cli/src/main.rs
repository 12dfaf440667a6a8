use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use fpk_brace::algebra::validate_defining_matrix;
use fpk_brace::brace::{self, BraceCandidate, Mode};
use fpk_brace::classify::{self, ClassForm};
use fpk_brace::holomorph::{build_t_circ, verify_subgroup_properties};
use fpk_brace::json as j;
use fpk_brace::matfp::{canonical_form, congruent_diagonalize};
use fpk_brace::oracle::{self, Relation};
use fpk_brace::{Error, Field, Result};

#[derive(Parser)]
#[command(
    name = "fpk-brace",
    version,
    about = "Braces and radical algebras over finite fields"
)]
struct Cli {
    /// Print a plain key/value table instead of JSON.
    #[arg(long, global = true)]
    table: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Finite field construction.
    #[command(subcommand)]
    Field(FieldCmd),
    /// Defining-matrix checks.
    #[command(subcommand)]
    Theta(ThetaCmd),
    /// Brace and subgroup verification for an algebra.
    #[command(subcommand)]
    Algebra(AlgebraCmd),
    /// Isomorphism classes.
    #[command(subcommand)]
    Classify(ClassifyCmd),
    /// Symmetric bilinear forms.
    #[command(subcommand)]
    Form(FormCmd),
    /// Brute-force enumerations, one JSON object per line.
    #[command(subcommand)]
    Oracle(OracleCmd),
}

#[derive(Args)]
struct FieldParams {
    #[arg(long)]
    p: u64,
    #[arg(long, default_value_t = 1)]
    k: u32,
}

#[derive(Args)]
struct ClassParams {
    #[arg(long)]
    p: u64,
    #[arg(long, default_value_t = 1)]
    k: u32,
    #[arg(long)]
    n: usize,
}

#[derive(Subcommand)]
enum FieldCmd {
    Info(FieldParams),
}

#[derive(Subcommand)]
enum ThetaCmd {
    Validate { file: PathBuf },
}

#[derive(Subcommand)]
enum AlgebraCmd {
    Verify {
        file: PathBuf,
        /// Check every tuple instead of random samples.
        #[arg(long)]
        exhaustive: bool,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 2000)]
        samples: usize,
    },
}

#[derive(Subcommand)]
enum ClassifyCmd {
    One {
        file: PathBuf,
        /// Factor out a complement of V·V first when d > 1.
        #[arg(long)]
        reduce: bool,
    },
    Pair {
        first: PathBuf,
        second: PathBuf,
    },
    Count(ClassParams),
    Reps(ClassParams),
}

#[derive(Subcommand)]
enum FormCmd {
    Diagonalize { file: PathBuf },
}

#[derive(Clone, Copy, ValueEnum)]
enum Via {
    Iso,
    Brute,
}

#[derive(Subcommand)]
enum OracleCmd {
    Classes {
        #[arg(long)]
        p: u64,
        #[arg(long, default_value_t = 1)]
        k: u32,
        #[arg(long)]
        m: usize,
        #[arg(long, value_enum, default_value_t = Via::Iso)]
        via: Via,
        #[arg(long)]
        workers: Option<usize>,
    },
    Subgroups {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        workers: Option<usize>,
    },
}

fn read_json(path: &Path) -> Result<Value> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::InvalidInput(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| Error::InvalidInput(format!("{}: {e}", path.display())))
}

fn set_workers(workers: Option<usize>) {
    if let Some(w) = workers {
        // a second initialization only happens in tests and is harmless
        let _ = rayon::ThreadPoolBuilder::new().num_threads(w).build_global();
    }
}

fn field_info(p: &FieldParams) -> Result<Value> {
    let f = Field::new(p.p, p.k)?;
    let q = f.find_nonsquare();
    Ok(json!({
        "field": j::field_to_json(&f),
        "order": f.order(),
        "q": q.index(),
        "q_coeffs": j::element_to_json(&f, q),
        "q_display": f.format(q),
    }))
}

fn theta_validate(file: &Path) -> Result<Value> {
    let doc = read_json(file)?;
    let f = j::field_from_json(j_get(&doc, "field")?)?;
    let theta = j::theta_from_json(&f, &doc)?;
    let r = validate_defining_matrix(&f, &theta);
    Ok(json!({
        "valid": r.valid(),
        "symmetric": r.symmetric,
        "asymmetric_at": r.asymmetric_at,
        "independent": r.independent,
        "vanishing_combination": r.vanishing_combination,
        "invertible": r.invertible,
    }))
}

fn j_get<'a>(v: &'a Value, key: &str) -> Result<&'a Value> {
    v.get(key)
        .ok_or_else(|| Error::InvalidInput(format!("missing \"{key}\"")))
}

fn algebra_verify(file: &Path, exhaustive: bool, seed: u64, samples: usize) -> Result<Value> {
    let alg = j::algebra_from_json(&read_json(file)?)?;
    let f = alg.field().clone();
    let mode = if exhaustive {
        Mode::Exhaustive
    } else {
        Mode::Sampled { seed, samples }
    };
    let sca = alg.to_structure_constants();
    let c = BraceCandidate::from_spec(&alg)?;
    let subgroup = match build_t_circ(&alg) {
        Ok(t) => serde_json::to_value(verify_subgroup_properties(&t, Some(&alg))).expect("report serializes"),
        Err(Error::TooLarge(_)) => Value::Null,
        Err(e) => return Err(e),
    };
    Ok(json!({
        "left_brace": j::verdict_to_json(&f, &brace::check_left_brace(&c, mode)?),
        "right_brace": j::verdict_to_json(&f, &brace::check_right_brace(&c, mode)?),
        "bibrace": j::verdict_to_json(&f, &brace::check_bibrace(&sca, mode)?),
        "nilpotency": sca.nilpotency_check(),
        "gamma_homomorphism": j::verdict_to_json(&f, &brace::gamma_homomorphism_check(&alg, mode)?),
        "subgroup": subgroup,
    }))
}

fn class_name(form: ClassForm) -> Value {
    serde_json::to_value(form).expect("enum serializes")
}

fn classify_one(file: &Path, reduce: bool) -> Result<Value> {
    let mut alg = j::algebra_from_json(&read_json(file)?)?;
    if reduce {
        alg = alg.quotient_by_complement()?.algebra;
    }
    let label = classify::class_of(&alg)?;
    let rep = classify::representative(alg.field(), label)?;
    let w = classify::iso_test(&alg, &rep)?;
    let f = alg.field();
    let count = classify::count_classes(f.characteristic() as u64, f.degree(), alg.n())?;
    Ok(json!({"class": class_name(label.form), "witness": j::witness_to_json(&w), "count": count}))
}

fn classify_pair(a: &Path, b: &Path) -> Result<Value> {
    let a = j::algebra_from_json(&read_json(a)?)?;
    let b = j::algebra_from_json(&read_json(b)?)?;
    match classify::iso_test(&a, &b) {
        Ok(w) => Ok(json!({"isomorphic": true, "witness": j::witness_to_json(&w)})),
        Err(Error::NotIsomorphic) => Ok(json!({"isomorphic": false, "witness": null})),
        Err(e) => Err(e),
    }
}

fn classify_reps(p: &ClassParams) -> Result<Value> {
    let reps = classify::canonical_representatives(p.p, p.k, p.n)?;
    Ok(json!({
        "count": reps.len(),
        "representatives": reps.iter().map(j::algebra_to_json).collect::<Vec<_>>(),
    }))
}

fn form_diagonalize(file: &Path) -> Result<Value> {
    let b = j::matrix_from_json(&read_json(file)?)?;
    let d = congruent_diagonalize(&b)?;
    let canonical = match canonical_form(&b) {
        Ok(c) => json!({
            "rank": c.label.rank,
            "disc": c.label.disc,
            "transform": j::matrix_to_json(&c.transform)["rows"],
            "form": j::matrix_to_json(&c.form)["rows"],
        }),
        Err(Error::DegenerateForm) => Value::Null,
        Err(e) => return Err(e),
    };
    Ok(json!({
        "transform": j::matrix_to_json(&d.transform)["rows"],
        "diagonal": j::matrix_to_json(&d.diagonal)["rows"],
        "canonical": canonical,
    }))
}

fn oracle_classes(p: u64, k: u32, m: usize, via: Via) -> Result<Vec<Value>> {
    let f = Field::new(p, k)?;
    let thetas = oracle::enumerate_valid_theta_over(&f, m)?;
    let relation = match via {
        Via::Iso => Relation::IsoTest,
        Via::Brute => Relation::BruteForce,
    };
    let classes = oracle::partition_into_classes(&thetas, relation)?;
    let mut class_of = vec![0; thetas.len()];
    for (c, members) in classes.iter().enumerate() {
        for &i in members {
            class_of[i] = c;
        }
    }
    let mut lines: Vec<Value> = thetas
        .iter()
        .enumerate()
        .map(|(i, t)| json!({"index": i, "theta": j::matrix_to_json(t)["rows"], "class": class_of[i]}))
        .collect();
    lines.push(json!({
        "field": j::field_to_json(&f),
        "m": m,
        "thetas": thetas.len(),
        "classes": classes.len(),
        "sizes": classes.iter().map(Vec::len).collect::<Vec<_>>(),
        "count": classify::count_classes(p, k, m + 1)?,
    }));
    Ok(lines)
}

fn oracle_subgroups(p: u64, n: usize) -> Result<Vec<Value>> {
    let found = oracle::enumerate_regular_subgroups_small(p, n)?;
    let mut lines: Vec<Value> = found
        .iter()
        .enumerate()
        .map(|(i, s)| {
            let report = verify_subgroup_properties(&s.table, None);
            json!({
                "index": i,
                "translations": s.matched.is_none(),
                "algebra": s.matched.as_ref().map(|m| j::algebra_to_json(&m.algebra)),
                "basis": s.matched.as_ref().map(|m| j::matrix_to_json(&m.basis)["rows"].clone()),
                "properties": report,
            })
        })
        .collect();
    lines.push(json!({
        "p": p,
        "n": n,
        "subgroups": found.len(),
        "non_translation": found.iter().filter(|s| s.matched.is_some()).count(),
    }));
    Ok(lines)
}

fn run(cli: &Cli) -> Result<Vec<Value>> {
    let one = |v: Result<Value>| v.map(|v| vec![v]);
    match &cli.command {
        Command::Field(FieldCmd::Info(p)) => one(field_info(p)),
        Command::Theta(ThetaCmd::Validate { file }) => one(theta_validate(file)),
        Command::Algebra(AlgebraCmd::Verify {
            file,
            exhaustive,
            seed,
            samples,
        }) => one(algebra_verify(file, *exhaustive, *seed, *samples)),
        Command::Classify(ClassifyCmd::One { file, reduce }) => one(classify_one(file, *reduce)),
        Command::Classify(ClassifyCmd::Pair { first, second }) => one(classify_pair(first, second)),
        Command::Classify(ClassifyCmd::Count(p)) => {
            one(classify::count_classes(p.p, p.k, p.n).map(|c| json!({"count": c})))
        }
        Command::Classify(ClassifyCmd::Reps(p)) => one(classify_reps(p)),
        Command::Form(FormCmd::Diagonalize { file }) => one(form_diagonalize(file)),
        Command::Oracle(OracleCmd::Classes { p, k, m, via, workers }) => {
            set_workers(*workers);
            oracle_classes(*p, *k, *m, *via)
        }
        Command::Oracle(OracleCmd::Subgroups { p, n, workers }) => {
            set_workers(*workers);
            oracle_subgroups(*p, *n)
        }
    }
}

fn print_table(v: &Value) {
    match v {
        Value::Object(map) => {
            let width = map.keys().map(String::len).max().unwrap_or(0);
            for (k, x) in map {
                println!("{k:width$}  {x}");
            }
            println!();
        }
        other => println!("{other}"),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(lines) => {
            for v in &lines {
                if cli.table {
                    print_table(v);
                } else {
                    println!("{v}");
                }
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            println!("{}", json!({"error": e.code(), "detail": e.to_string()}));
            ExitCode::from(1)
        }
    }
}
