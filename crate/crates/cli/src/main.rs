mod report;

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Map, Value};

use jcreduce::coupling::CouplingTensor;
use jcreduce::elimination;
use jcreduce::family::{self, FamilyInstance};
use jcreduce::io::{self, Provenance, SystemFile};
use jcreduce::jacobian;
use jcreduce::qft;
use jcreduce::reduction::{self, Variant};
use jcreduce::verify::{self, DEFAULT_SEED};
use jcreduce::{PolySystem, Polynomial};

use report::{check, render_pretty, Emitter, Format};

#[derive(Parser)]
#[command(name = "jcreduce", version, about = "Exact checks for polynomial maps, partial elimination and the reduction to lower degree")]
struct Cli {
    /// Write the report to this file instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct OrderArg {
    /// θ-truncation order.
    #[arg(long, env = "JCREDUCE_ORDER", default_value_t = 5)]
    order: usize,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Oracle {
    None,
    Trees,
}

#[derive(Subcommand)]
enum Command {
    /// Is det J_F a nonzero constant?
    CheckJlin { file: PathBuf },
    /// Partial classes after eliminating the variables past n1.
    CheckPartial {
        file: PathBuf,
        /// Size of the kept block; defaults to the source dimension of a
        /// reduced system file.
        #[arg(long)]
        n1: Option<usize>,
        /// Check the constant-determinant class instead of invertibility.
        #[arg(long)]
        lin: bool,
        /// Degree cap for the inverse search.
        #[arg(long)]
        cap: Option<u32>,
    },
    /// Splits the system and reports R, its inverse and the eliminated system.
    Eliminate {
        file: PathBuf,
        #[arg(long)]
        n1: usize,
    },
    /// Emits the reduced system as a system file.
    Reduce {
        file: PathBuf,
        #[arg(long, value_enum)]
        variant: VariantArg,
    },
    /// Formal θ-graded inverse and certified polynomial inverse.
    Invert {
        file: PathBuf,
        #[command(flatten)]
        order: OrderArg,
        #[arg(long, value_enum, default_value_t = Oracle::None)]
        oracle: Oracle,
        /// Degree cap for the certified inverse.
        #[arg(long)]
        cap: Option<u32>,
    },
    /// ln Z and the identity Z · det J_F(G) = 1.
    Partition {
        file: PathBuf,
        #[command(flatten)]
        order: OrderArg,
    },
    /// The two-dimensional homogeneous family on a random corpus.
    ExampleS4 {
        #[arg(long)]
        d: u32,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        #[arg(long, default_value_t = 20)]
        count: usize,
        /// Directory receiving one system file per instance.
        #[arg(long)]
        emit: Option<PathBuf>,
    },
    /// The full acceptance suite.
    VerifyAll {
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        /// Run only these criteria (ids such as 1, 7a, 10).
        #[arg(long, value_delimiter = ',')]
        only: Vec<String>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum VariantArg {
    Algebraic,
    Qft,
}

impl From<VariantArg> for Variant {
    fn from(v: VariantArg) -> Self {
        match v {
            VariantArg::Algebraic => Variant::Algebraic,
            VariantArg::Qft => Variant::Qft,
        }
    }
}

/// Usage, IO and precondition errors; reported with exit code 2.
struct Failure(String);

impl<E: std::fmt::Display> From<E> for Failure {
    fn from(e: E) -> Self {
        Failure(e.to_string())
    }
}

/// A finished command: its output text and whether every check passed.
struct Outcome {
    text: String,
    passed: bool,
}

fn read_system_file(path: &Path) -> Result<SystemFile, Failure> {
    let text = fs::read_to_string(path).map_err(|e| Failure(format!("{}: {e}", path.display())))?;
    io::parse_system_file(&text).map_err(|e| Failure(format!("{}: {e}", path.display())))
}

fn read_system(path: &Path) -> Result<PolySystem, Failure> {
    read_system_file(path)?
        .to_system()
        .map_err(|e| Failure(format!("{}: {e}", path.display())))
}

fn finish(em: Emitter, mut body: Map<String, Value>, command: Value, passed: bool) -> Outcome {
    let mut top = Map::new();
    top.insert("command".into(), command);
    top.insert("passed".into(), json!(passed));
    top.append(&mut body);
    let v = Value::Object(top);
    let text = match em.format {
        Format::Json => {
            let mut s = serde_json::to_string_pretty(&v).expect("serializable");
            s.push('\n');
            s
        }
        Format::Pretty => render_pretty(&v),
    };
    Outcome { text, passed }
}

fn check_jlin(em: Emitter, file: &Path) -> Result<Outcome, Failure> {
    let f = read_system(file)?;
    let v = jacobian::is_jlin(&f)?;
    let mut body = Map::new();
    body.insert("nvars".into(), json!(f.nvars()));
    body.insert("result".into(), em.verdict(&v));
    let cmd = json!({ "name": "check-jlin", "file": file.display().to_string() });
    Ok(finish(em, body, cmd, v.is_member()))
}

fn check_partial(em: Emitter, file: &Path, n1: Option<usize>, lin: bool, cap: Option<u32>) -> Result<Outcome, Failure> {
    let sf = read_system_file(file)?;
    let f = sf.to_system()?;
    let n1 = match n1.or_else(|| sf.provenance.as_ref().and_then(|p| p.source_dim)) {
        Some(n) => n,
        None => return Err(Failure("--n1 is required for files without a recorded source dimension".into())),
    };
    let v = if lin {
        elimination::is_jlin_partial(&f, n1)?
    } else {
        elimination::is_j_partial(&f, n1, cap)?
    };
    let mut body = Map::new();
    body.insert("nvars".into(), json!(f.nvars()));
    body.insert("n1".into(), json!(n1));
    body.insert("class".into(), json!(if lin { "lin" } else { "invertible" }));
    body.insert("result".into(), em.verdict(&v));
    let cmd = json!({
        "name": "check-partial",
        "file": file.display().to_string(),
        "n1": n1,
        "lin": lin,
        "cap": cap,
    });
    Ok(finish(em, body, cmd, v.is_member()))
}

fn eliminate(em: Emitter, file: &Path, n1: usize) -> Result<Outcome, Failure> {
    let f = read_system(file)?;
    let s = elimination::split(&f, n1)?;
    let cmd = json!({ "name": "eliminate", "file": file.display().to_string(), "n1": n1 });
    let mut body = Map::new();
    body.insert("nvars".into(), json!(f.nvars()));
    body.insert("n1".into(), json!(n1));
    body.insert("r".into(), em.polys(s.r()));
    let det_r = s.r_jacobian_det()?;
    body.insert("r_jacobian_det".into(), em.poly(&det_r));
    let rinv = match elimination::invert_r(&s, None) {
        Ok(r) => r,
        Err(e) => {
            body.insert("r_inverse_error".into(), json!(e.to_string()));
            body.insert("checks".into(), json!([check("r_invertible", false)]));
            return Ok(finish(em, body, cmd, false));
        }
    };
    body.insert("r_inverse".into(), em.polys(&rinv.components));
    body.insert("r_inverse_closed_form".into(), json!(rinv.closed_form));
    let mut checks = vec![check("r_inverse_certified", rinv.certified)];
    let mut passed = rinv.certified;
    if rinv.certified {
        body.insert("h".into(), em.polys(&elimination::build_h(&s, &rinv)?));
        body.insert("h_at_zero".into(), em.system(&elimination::restricted_h(&s, &rinv)?));
        body.insert("det_on_variety".into(), em.poly(&elimination::det_on_variety(&s, &rinv)?));
        let schur = elimination::schur_identity_check(&s, &rinv)?;
        checks.push(check("block_determinant_identity", schur.holds));
        passed &= schur.holds;
    }
    body.insert("checks".into(), Value::Array(checks));
    Ok(finish(em, body, cmd, passed))
}

fn reduce(em: Emitter, file: &Path, variant: Variant) -> Result<Outcome, Failure> {
    let f = read_system(file)?;
    let source = match variant {
        Variant::Algebraic => jacobian::drop_degree_zero(&f)?,
        Variant::Qft => f.clone(),
    };
    let img = reduction::phi(&source, variant)?;
    let recovered = reduction::is_in_image_of_phi(&img.system, img.source_dim, variant)?;
    let passed = recovered.as_ref() == Some(&source);
    let text = match em.format {
        Format::Json => io::emit_system_file(&SystemFile::from_reduced(&img)),
        Format::Pretty => {
            let names: Vec<String> = img
                .index_map()
                .iter()
                .map(|(i, j, var)| format!("z{} = w({i},{j})", var + img.source_dim))
                .collect();
            format!(
                "variant: {variant}\nsource: {source}\nreduced: {}\nauxiliary variables: {}\nsource recovered: {passed}\n",
                img.system,
                names.join(", ")
            )
        }
    };
    Ok(Outcome { text, passed })
}

fn invert(em: Emitter, file: &Path, order: usize, oracle: Oracle, cap: Option<u32>) -> Result<Outcome, Failure> {
    let f = read_system(file)?;
    let cmd = json!({
        "name": "invert",
        "file": file.display().to_string(),
        "order": order,
        "oracle": if oracle == Oracle::Trees { "trees" } else { "none" },
        "cap": cap,
    });
    let mut body = Map::new();
    body.insert("nvars".into(), json!(f.nvars()));
    let certified = jacobian::certify_polynomial_inverse(&f, cap)?;
    body.insert("certified_inverse".into(), em.verdict(&certified));
    let mut checks = Vec::new();
    let mut passed = true;
    match CouplingTensor::from_system(&f) {
        Ok(w) => {
            body.insert("order".into(), json!(order));
            let g = qft::formal_inverse_fixed_point(&w, order)?;
            let u: Vec<Polynomial> = (0..f.nvars()).map(|i| Polynomial::var(i, f.nvars())).collect();
            let defect_zero = qft::inversion_defect(&w, &u, &g)?.is_zero();
            checks.push(check("inversion_defect_zero", defect_zero));
            passed &= defect_zero;
            if oracle == Oracle::Trees {
                let t = qft::tree_oracle_inverse(&w, order)?;
                let per_grade: Vec<bool> = (0..=order).map(|r| t.grade(r) == g.grade(r)).collect();
                let equal = per_grade.iter().all(|&b| b);
                body.insert("tree_oracle_grades_equal".into(), json!(per_grade));
                checks.push(check("tree_oracle_equal", equal));
                passed &= equal;
            }
            body.insert("formal_inverse".into(), em.series(&g));
        }
        Err(e) => {
            body.insert("formal_inverse_skipped".into(), json!(e.to_string()));
        }
    }
    body.insert("checks".into(), Value::Array(checks));
    Ok(finish(em, body, cmd, passed))
}

fn partition(em: Emitter, file: &Path, order: usize) -> Result<Outcome, Failure> {
    let f = read_system(file)?;
    let w = CouplingTensor::from_system(&f)?;
    let cmd = json!({ "name": "partition", "file": file.display().to_string(), "order": order });
    let ln_z = qft::log_partition_function(&w, order)?;
    let c = qft::z_det_identity_check(&w, order)?;
    let mut body = Map::new();
    body.insert("nvars".into(), json!(f.nvars()));
    body.insert("order".into(), json!(order));
    body.insert(
        "ln_z".into(),
        Value::Array(ln_z.grades().iter().map(|p| em.poly(p)).collect()),
    );
    let mut checks = vec![check("z_times_det_is_one", c.holds)];
    if let Some(g) = c.first_bad_grade {
        body.insert("first_bad_grade".into(), json!(g));
    }
    let mut passed = c.holds;
    for r in 1..=3.min(order.max(1)) {
        let a = qft::cycle_expansion(&w, order, r)?;
        let b = qft::trace_power_term(&w, order, r)?;
        checks.push(check(&format!("cycles_equal_trace_power_{r}"), a == b));
        passed &= a == b;
    }
    body.insert("checks".into(), Value::Array(checks));
    Ok(finish(em, body, cmd, passed))
}

fn instance_value(em: Emitter, inst: &FamilyInstance) -> Value {
    let coeffs = |a: &[jcreduce::Coefficient]| Value::Array(a.iter().map(|c| em.coeff(c)).collect());
    json!({ "a1": coeffs(&inst.a1), "a2": coeffs(&inst.a2) })
}

fn example_s4(em: Emitter, d: u32, seed: u64, count: usize, emit: Option<&Path>) -> Result<Outcome, Failure> {
    if d < 2 {
        return Err(Failure(format!("--d must be at least 2, got {d}")));
    }
    let corpus = family::corpus(d, seed, count);
    let report = family::equality_jlin_j_partial_check(d, seed, &corpus)?;
    if let Some(dir) = emit {
        fs::create_dir_all(dir).map_err(|e| Failure(format!("{}: {e}", dir.display())))?;
        for (id, inst) in corpus.iter().enumerate() {
            let mut sf = SystemFile::from_system(&family::family_system(inst));
            sf.provenance = Some(Provenance {
                generator: Some(format!("example-s4 --d {d}")),
                seed: Some(seed),
                instance: Some(id),
                ..Default::default()
            });
            let path = dir.join(format!("instance-{id:04}.json"));
            fs::write(&path, io::emit_system_file(&sf)).map_err(|e| Failure(format!("{}: {e}", path.display())))?;
        }
    }
    let instances: Vec<Value> = report
        .instances
        .iter()
        .map(|r| {
            let mut m = Map::new();
            m.insert("id".into(), json!(r.id));
            m.insert("coefficients".into(), instance_value(em, &r.instance));
            m.insert("jlin".into(), json!(r.jlin.name()));
            m.insert("jlin_closed_form".into(), json!(r.jlin_closed_form));
            m.insert("jlin_partial".into(), json!(r.jlin_partial.name()));
            m.insert("partial_closed_form".into(), json!(r.partial_closed_form));
            m.insert("j_partial".into(), json!(r.j_partial.name()));
            if let Some(p) = &r.restricted_inverse {
                m.insert("restricted_inverse".into(), em.poly(p));
            }
            if let Ok(sj) = family::specialized_jacobian(&r.instance) {
                m.insert("specialized_jacobian".into(), em.poly(&sj));
            }
            Value::Object(m)
        })
        .collect();
    let closed = report.closed_form_disagreements();
    let partial = report.partial_disagreements();
    let passed = closed.is_empty() && partial.is_empty();
    let mut body = Map::new();
    body.insert("d".into(), json!(d));
    body.insert("seed".into(), json!(seed));
    body.insert("count".into(), json!(count));
    body.insert(
        "checks".into(),
        json!([
            check("closed_forms_agree", closed.is_empty()),
            check("partial_classes_agree", partial.is_empty()),
        ]),
    );
    body.insert("closed_form_disagreements".into(), json!(closed));
    body.insert("partial_disagreements".into(), json!(partial));
    body.insert(
        "witnesses".into(),
        json!({
            "partial_only": report.partial_only_witness().map(|r| r.id),
            "classical_only": report.classical_only_witness().map(|r| r.id),
        }),
    );
    body.insert("instances".into(), Value::Array(instances));
    let cmd = json!({
        "name": "example-s4",
        "d": d,
        "seed": seed,
        "count": count,
        "emit": emit.map(|p| p.display().to_string()),
    });
    Ok(finish(em, body, cmd, passed))
}

fn verify_all(em: Emitter, seed: u64, only: &[String]) -> Result<Outcome, Failure> {
    type Runner = fn(u64) -> verify::CriterionReport;
    let all: [(&str, Runner); 11] = [
        ("1", verify::criterion_1),
        ("2", verify::criterion_2),
        ("3", verify::criterion_3),
        ("4", verify::criterion_4),
        ("5", verify::criterion_5),
        ("6", verify::criterion_6),
        ("7a", verify::criterion_7_classifiers),
        ("7b", verify::criterion_7_display),
        ("8", verify::criterion_8),
        ("9", verify::criterion_9),
        ("10", verify::criterion_10),
    ];
    if let Some(bad) = only.iter().find(|id| !all.iter().any(|(k, _)| k == id)) {
        return Err(Failure(format!("unknown criterion '{bad}'")));
    }
    let reports: Vec<verify::CriterionReport> = all
        .iter()
        .filter(|(id, _)| only.is_empty() || only.iter().any(|o| o == id))
        .map(|(_, run)| run(seed))
        .collect();
    let passed = reports.iter().all(|r| r.passed);
    let cmd = json!({ "name": "verify-all", "seed": seed, "only": only });
    let mut body = Map::new();
    body.insert("seed".into(), json!(seed));
    body.insert("summary".into(), json!(reports.iter().map(|r| r.line()).collect::<Vec<_>>()));
    body.insert("criteria".into(), serde_json::to_value(&reports)?);
    Ok(finish(em, body, cmd, passed))
}

fn run(cli: &Cli) -> Result<Outcome, Failure> {
    let em = Emitter { format: cli.format };
    match &cli.command {
        Command::CheckJlin { file } => check_jlin(em, file),
        Command::CheckPartial { file, n1, lin, cap } => check_partial(em, file, *n1, *lin, *cap),
        Command::Eliminate { file, n1 } => eliminate(em, file, *n1),
        Command::Reduce { file, variant } => reduce(em, file, (*variant).into()),
        Command::Invert { file, order, oracle, cap } => invert(em, file, order.order, *oracle, *cap),
        Command::Partition { file, order } => partition(em, file, order.order),
        Command::ExampleS4 { d, seed, count, emit } => example_s4(em, *d, *seed, *count, emit.as_deref()),
        Command::VerifyAll { seed, only } => verify_all(em, *seed, only),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let outcome = match run(&cli) {
        Ok(o) => o,
        Err(Failure(msg)) => {
            eprintln!("error: {msg}");
            return ExitCode::from(2);
        }
    };
    match &cli.out {
        Some(path) => {
            if let Err(e) = fs::write(path, &outcome.text) {
                eprintln!("error: {}: {e}", path.display());
                return ExitCode::from(2);
            }
        }
        None => print!("{}", outcome.text),
    }
    ExitCode::from(if outcome.passed { 0 } else { 1 })
}
