use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use nichols_core::arith::{Field, FieldSpec, LambdaSpec};
use nichols_core::braided::{diagonal_space, rack_space, BraidedVectorSpace, DiagonalMatrixSpec};
use nichols_core::decide::{decide, narrative, Decision};
use nichols_core::degen::{degenerate_report, DegenerateReport};
use nichols_core::nichols::{default_budget, hilbert_or_partial, EngineConfig, HilbertReport};
use nichols_core::orders::{select_target, specialize_report, OrderParams, OrderSpec, SpecializeReport, TargetSelector};
use nichols_core::par::ExecMode;
use nichols_core::racks::{affine_rack, AffineRackSpec, Rack, RackFile};
use nichols_core::verify::{self, VerifyOptions, VerifyReport};

#[derive(Parser, Debug)]
#[command(name = "nichols", version, about = "Exact Hilbert series and finiteness decisions for Nichols algebras")]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,

    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    output: Option<PathBuf>,

    /// Execution mode of the rank engine.
    #[arg(long, global = true, value_enum, default_value_t = Mode::Parallel)]
    mode: Mode,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Mode {
    Parallel,
    Sequential,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Degree-wise dimensions of the Nichols algebra of a braided vector space.
    Hilbert(HilbertArgs),
    /// Decide finiteness for Aff(p, alpha) with a given lambda.
    Decide(DecideArgs),
    /// Compare ranks over the cyclotomic field with ranks modulo a prime.
    Specialize(SpecializeArgs),
    /// The J-adic degeneration in characteristic p and its table verdict.
    Degenerate(DegenerateArgs),
    /// Run the self-check suites.
    Verify(VerifyArgs),
}

#[derive(Args, Debug)]
struct SpaceArgs {
    /// Affine rack, e.g. affine:3:2.
    #[arg(long, conflicts_with_all = ["rack_file", "diag"])]
    rack: Option<AffineRackSpec>,
    /// JSON rack file: {"type":"affine","p":3,"alpha":2} or {"type":"table","op":[[...]]}.
    #[arg(long, conflicts_with = "diag")]
    rack_file: Option<PathBuf>,
    /// Diagonal braiding, e.g. 1x1:q=-1 or 2x2:q=-1,2,3,-1 (row-major).
    #[arg(long)]
    diag: Option<String>,
    /// Rack eigenvalue: cyclo:N:e.
    #[arg(long, default_value = "cyclo:2:1")]
    lambda: LambdaSpec,
    /// QQ, cyclo:N, gf:p or gf:p:c0,c1,...; defaults to QQ, or cyclo:N when lambda is not rational.
    #[arg(long)]
    field: Option<FieldSpec>,
}

#[derive(Args, Debug)]
struct HilbertArgs {
    #[command(flatten)]
    space: SpaceArgs,
    #[arg(long, default_value_t = 6)]
    max_degree: usize,
    /// Largest admissible dim(V)^n.
    #[arg(long)]
    budget: Option<u128>,
}

#[derive(Args, Debug)]
struct DecideArgs {
    p: u64,
    alpha: u64,
    /// cyclo:N:e or nonroot.
    #[arg(long)]
    lambda: LambdaSpec,
}

#[derive(Args, Debug)]
struct SpecializeArgs {
    #[arg(long)]
    rack: AffineRackSpec,
    /// order:N=6[,e=k]
    #[arg(long)]
    order: OrderParams,
    /// at:p=3[,factor=k]
    #[arg(long)]
    at: TargetSelector,
    #[arg(long, default_value_t = 4)]
    max_degree: usize,
    #[arg(long)]
    budget: Option<u128>,
}

#[derive(Args, Debug)]
struct DegenerateArgs {
    p: u64,
    alpha: u64,
    /// Residue of lambda, as an element of the field.
    #[arg(long, default_value = "-1", allow_hyphen_values = true)]
    lambda_bar: String,
    /// Field of characteristic p; defaults to gf:p.
    #[arg(long)]
    field: Option<FieldSpec>,
}

#[derive(Args, Debug)]
struct VerifyArgs {
    /// Suites to run (comma-separated or repeated).
    #[arg(long, value_delimiter = ',')]
    only: Vec<String>,
    /// Extra racks for the corpus.
    #[arg(long)]
    rack_file: Vec<PathBuf>,
}

/// Exit status for a report that stopped at the budget.
const EXIT_PARTIAL: u8 = 2;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    if let Err(e) = init_threads() {
        eprintln!("error: {e:#}");
        return ExitCode::from(1);
    }
    match run(&cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}

fn init_threads() -> anyhow::Result<()> {
    let Ok(v) = std::env::var("NICHOLS_THREADS") else {
        return Ok(());
    };
    let n: usize = v.trim().parse().with_context(|| format!("NICHOLS_THREADS={v:?} is not a number"))?;
    #[cfg(feature = "parallel")]
    rayon::ThreadPoolBuilder::new().num_threads(n).build_global().context("thread pool")?;
    #[cfg(not(feature = "parallel"))]
    let _ = n;
    Ok(())
}

fn run(cli: &Cli) -> anyhow::Result<u8> {
    let mode = match cli.mode {
        Mode::Parallel => ExecMode::Parallel,
        Mode::Sequential => ExecMode::Sequential,
    };
    match &cli.command {
        Command::Hilbert(a) => {
            let v = build_space(&a.space)?;
            let budget = a.budget.unwrap_or_else(|| default_budget(v.field()));
            if budget < (v.dim() as u128).pow(2) {
                bail!("budget {budget} is below dim^2 = {}", v.dim() * v.dim());
            }
            let (report, hit) = hilbert_or_partial(&v, a.max_degree, &EngineConfig { budget: Some(budget), mode })?;
            emit(cli, &report, || hilbert_csv(&report), || hilbert_text(&report))?;
            Ok(if hit { EXIT_PARTIAL } else { 0 })
        }
        Command::Decide(a) => {
            let d = decide(a.p, a.alpha, a.lambda)?;
            emit(cli, &d, || decision_csv(&d), || narrative(&d))?;
            Ok(0)
        }
        Command::Specialize(a) => {
            let order = OrderSpec::new(a.order.n, a.order.e, a.rack)?;
            let target = select_target(order.n, a.at)?;
            let cfg = EngineConfig { budget: a.budget, mode };
            let rep = specialize_report(&order, &target, a.max_degree, &cfg)?;
            emit(cli, &rep, || specialize_csv(&rep), || specialize_text(&rep))?;
            Ok(if rep.budget_hit() { EXIT_PARTIAL } else { 0 })
        }
        Command::Degenerate(a) => {
            let spec = a.field.clone().unwrap_or(FieldSpec::prime(a.p));
            let field = Field::new(spec)?;
            let lb = field.parse_scalar(&a.lambda_bar)?;
            let rep = degenerate_report(a.p, a.alpha, &lb, &field)?;
            emit(cli, &rep, || degenerate_csv(&rep), || degenerate_text(&rep))?;
            Ok(0)
        }
        Command::Verify(a) => {
            let extra_racks = a.rack_file.iter().map(|p| load_rack(p)).collect::<anyhow::Result<Vec<_>>>()?;
            let rep = verify::run(&VerifyOptions { only: a.only.clone(), extra_racks, mode })?;
            emit(cli, &rep, || verify_csv(&rep), || verify_text(&rep))?;
            Ok(if rep.all_passed() { 0 } else { 1 })
        }
    }
}

fn load_rack(path: &Path) -> anyhow::Result<Rack> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let file: RackFile = serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))?;
    file.build().with_context(|| format!("rack in {}", path.display()))
}

fn build_space(a: &SpaceArgs) -> anyhow::Result<BraidedVectorSpace> {
    let field_for = |lambda: &LambdaSpec| -> anyhow::Result<Field> {
        let spec = match (&a.field, lambda.order()) {
            (Some(f), _) => f.clone(),
            (None, Some(o)) if o > 2 => FieldSpec::Cyclotomic { n: o },
            _ => FieldSpec::Rationals,
        };
        Ok(Field::new(spec)?)
    };
    if let Some(d) = &a.diag {
        let field = Field::new(a.field.clone().unwrap_or(FieldSpec::Rationals))?;
        let spec = parse_diag(d, &field)?;
        return Ok(diagonal_space(&spec, &field)?);
    }
    let (rack, label) = match (&a.rack, &a.rack_file) {
        (Some(s), _) => (affine_rack(*s), s.to_string()),
        (None, Some(p)) => (load_rack(p)?, p.display().to_string()),
        (None, None) => bail!("one of --rack, --rack-file or --diag is required"),
    };
    let field = field_for(&a.lambda)?;
    let lambda = a.lambda.to_scalar(&field)?;
    let v = rack_space(&rack, &lambda, &field)?;
    Ok(v.with_name(format!("{label} over {} with lambda={}", field.spec(), a.lambda)))
}

/// `RxC:q=a,b,...` with the entries in row-major order.
fn parse_diag(s: &str, field: &Field) -> anyhow::Result<DiagonalMatrixSpec> {
    let bad = || anyhow!("diagonal spec {s:?}; expected NxN:q=<entries, row-major>");
    let (shape, entries) = s.split_once(":q=").ok_or_else(bad)?;
    let (r, c) = shape.split_once('x').ok_or_else(bad)?;
    let (r, c): (usize, usize) = (r.parse().map_err(|_| bad())?, c.parse().map_err(|_| bad())?);
    if r != c || r == 0 {
        bail!("diagonal braiding matrix must be square and nonempty");
    }
    let vals = entries.split(',').map(|e| field.parse_scalar(e.trim())).collect::<Result<Vec<_>, _>>()?;
    if vals.len() != r * r {
        bail!("expected {} entries, got {}", r * r, vals.len());
    }
    Ok(DiagonalMatrixSpec { q: vals.chunks(r).map(<[_]>::to_vec).collect() })
}

fn emit<T: Serialize>(cli: &Cli, value: &T, csv: impl FnOnce() -> String, text: impl FnOnce() -> String) -> anyhow::Result<()> {
    let mut out = match cli.format {
        Format::Json => serde_json::to_string_pretty(value)?,
        Format::Csv => csv(),
        Format::Text => text(),
    };
    if !out.ends_with('\n') {
        out.push('\n');
    }
    match &cli.output {
        Some(p) => fs::write(p, out).with_context(|| format!("writing {}", p.display()))?,
        None => print!("{out}"),
    }
    Ok(())
}

fn hilbert_csv(r: &HilbertReport) -> String {
    let mut s = String::from("degree,rank\n");
    for (n, k) in r.ranks.iter().enumerate() {
        let _ = writeln!(s, "{n},{k}");
    }
    s
}

fn hilbert_text(r: &HilbertReport) -> String {
    let ranks: Vec<String> = r.ranks.iter().map(u64::to_string).collect();
    let mut s = format!("space: {}\nranks: {}\n", r.space, ranks.join(" "));
    match r.total {
        Some(t) => {
            let _ = writeln!(s, "terminated at degree {}; total dimension {t}", r.ranks.len() - 1);
        }
        None => {
            let _ = writeln!(s, "partial: no zero rank up to degree {}", r.ranks.len() - 1);
        }
    }
    let _ = writeln!(s, "elapsed: {} ms", r.elapsed_ms);
    s
}

fn decision_csv(d: &Decision) -> String {
    let v = serde_json::to_value(d).expect("serializable");
    format!(
        "p,alpha,lambda,verdict,branch\n{},{},{},{},{}\n",
        d.p, d.alpha, d.lambda, v["verdict"].as_str().unwrap_or(""), v["branch"].as_str().unwrap_or("")
    )
}

fn specialize_csv(r: &SpecializeReport) -> String {
    let mut s = String::from("degree,char0,charp\n");
    let n = r.char0.ranks.len().max(r.charp.ranks.len());
    let cell = |v: &[u64], i: usize| v.get(i).map(u64::to_string).unwrap_or_default();
    for i in 0..n {
        let _ = writeln!(s, "{i},{},{}", cell(&r.char0.ranks, i), cell(&r.charp.ranks, i));
    }
    s
}

fn specialize_text(r: &SpecializeReport) -> String {
    format!(
        "order: {} with lambda = zeta_{}^{}\ntarget: {}\nlambda_bar: [{}]\nchar 0 ranks: {:?}\nchar {} ranks: {:?}\ninequality holds: {}\n",
        r.order.rack,
        r.order.n,
        r.order.e,
        r.target,
        r.lambda_bar.join(", "),
        r.char0.ranks,
        r.target.p,
        r.charp.ranks,
        if r.inequality_holds { "yes" } else { "no" }
    )
}

fn yes_no(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

fn degenerate_csv(r: &DegenerateReport) -> String {
    format!(
        "p,alpha,lambda_bar,braid_equation,direct_agrees,graded_agrees,kfinite\n{},{},{},{},{},{},{}\n",
        r.p,
        r.alpha,
        r.lambda_bar.join(" "),
        r.braid_equation,
        r.direct_agrees,
        r.graded_agrees,
        r.kfinite
    )
}

fn degenerate_text(r: &DegenerateReport) -> String {
    let mut s = format!("{}\n", r.space.name);
    for i in 0..r.space.dim() {
        for j in 0..r.space.dim() {
            let terms: Vec<String> = r
                .space
                .c(i, j)
                .iter()
                .map(|(k, l, c)| format!("{} b{k}⊗b{l}", r.space.field().format(c)))
                .collect();
            let _ = writeln!(s, "c(b{i}⊗b{j}) = {}", if terms.is_empty() { "0".into() } else { terms.join(" + ") });
        }
    }
    let _ = writeln!(s, "braid equation: {}", yes_no(r.braid_equation));
    let _ = writeln!(s, "direct construction agrees: {}", yes_no(r.direct_agrees));
    let _ = writeln!(s, "J-adic associated graded agrees: {}", yes_no(r.graded_agrees));
    let _ = writeln!(s, "kfinite: {}", yes_no(r.kfinite));
    s
}

fn verify_csv(r: &VerifyReport) -> String {
    let mut s = String::from("suite,check,passed\n");
    for suite in &r.suites {
        for c in &suite.checks {
            let _ = writeln!(s, "{},\"{}\",{}", suite.suite, c.name.replace('"', "'"), c.passed);
        }
    }
    s
}

fn verify_text(r: &VerifyReport) -> String {
    let mut s = String::new();
    for suite in &r.suites {
        let _ = writeln!(s, "{}: {} passed, {} failed ({} ms)", suite.suite, suite.passed, suite.failed, suite.elapsed_ms);
        for c in suite.checks.iter().filter(|c| !c.passed) {
            let _ = writeln!(s, "  FAIL {}: {}", c.name, c.detail.as_deref().unwrap_or(""));
        }
    }
    let _ = writeln!(s, "total: {} passed, {} failed", r.passed, r.failed);
    s
}
