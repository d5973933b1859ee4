use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use autk_core::families::{self, FamilyKind, FamilySpec, VerificationOutcome, VerifyOptions};
use autk_core::fuzz::{self, FuzzSummary};
use autk_core::group::{fingerprint, IsoFingerprint};
use autk_core::oracle::AutSearchConfig;
use autk_core::semidirect::SemidirectDoc;
use autk_core::Error;
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

const SCHEMA_VERSION: u32 = 1;
const EXIT_INVALID: u8 = 2;
const EXIT_BUDGET: u8 = 3;
const EXIT_MISMATCH: u8 = 4;

#[derive(Parser)]
#[command(name = "autk", version, about = "Automorphisms of H x| K that map K onto itself")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build one family member and print its multiplication table and fingerprint.
    Build(BuildArgs),
    /// Run the structured pipeline and the oracle on one family member.
    Verify(VerifyArgs),
    /// Verify a batch of family members, one row each.
    Table(TableArgs),
    /// Random semidirect products checked against the decomposition.
    Fuzz(FuzzArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Args, Clone)]
struct SpecArgs {
    /// metacyclic_odd, metacyclic_2_i, metacyclic_2_ii, metacyclic_2_iii, G1 .. G10
    #[arg(long)]
    family: String,
    #[arg(long)]
    p: u64,
    #[arg(long)]
    m: Option<u32>,
    #[arg(long)]
    n: Option<u32>,
    #[arg(long)]
    r: Option<u32>,
    /// G8 only; defaults to 2.
    #[arg(long)]
    d: Option<u64>,
}

#[derive(Args, Clone)]
struct Common {
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
    /// Write the report here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Node budget for every backtracking search.
    #[arg(long, default_value_t = 500_000_000)]
    budget: u64,
}

#[derive(Args)]
struct BuildArgs {
    #[command(flatten)]
    spec: SpecArgs,
    #[command(flatten)]
    common: Common,
}

#[derive(Args)]
struct VerifyArgs {
    #[command(flatten)]
    spec: SpecArgs,
    #[command(flatten)]
    common: Common,
    /// Skip counting all of Aut(G).
    #[arg(long)]
    skip_aut: bool,
}

#[derive(Args)]
struct TableArgs {
    /// Comma-separated kinds; `p4` expands to G1..G10. An empty list gives
    /// an empty table.
    #[arg(long, default_value = "p4")]
    family: String,
    /// Comma-separated primes.
    #[arg(long, default_value = "5")]
    p: String,
    /// Upper bound on m in the metacyclic grid.
    #[arg(long, default_value_t = 3)]
    m: u32,
    /// Upper bound on n in the metacyclic grid.
    #[arg(long, default_value_t = 2)]
    n: u32,
    #[arg(long)]
    d: Option<u64>,
    #[command(flatten)]
    common: Common,
    #[arg(long)]
    skip_aut: bool,
}

#[derive(Args)]
struct FuzzArgs {
    #[arg(long, default_value_t = 42)]
    seed: u64,
    #[arg(long, default_value_t = 100)]
    count: u64,
    #[arg(long, default_value_t = 200)]
    max_order: u64,
    #[command(flatten)]
    common: Common,
}

#[derive(Serialize)]
struct RunManifest {
    command: &'static str,
    specs: Vec<FamilySpec>,
    #[serde(skip_serializing_if = "Option::is_none")]
    seed: Option<u64>,
    budget: u64,
    format: Format,
    tool_version: &'static str,
}

#[derive(Serialize)]
struct Envelope<'a, T: Serialize> {
    schema: u32,
    manifest: &'a RunManifest,
    result: T,
}

#[derive(Serialize)]
struct BuildReport {
    spec: FamilySpec,
    order: usize,
    fingerprint: IsoFingerprint,
    group: SemidirectDoc,
}

struct Failure {
    code: u8,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::SearchBudgetExceeded { .. } => EXIT_BUDGET,
            _ => EXIT_INVALID,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

fn invalid(message: String) -> Failure {
    Failure {
        code: EXIT_INVALID,
        message,
    }
}

fn search_config(budget: u64) -> AutSearchConfig {
    let threads = std::env::var("AUTK_THREADS").ok().and_then(|v| v.parse::<usize>().ok());
    AutSearchConfig {
        node_budget: budget,
        parallel_width: threads.unwrap_or(0),
        ..Default::default()
    }
}

fn init_threads() -> Result<(), Failure> {
    if let Ok(v) = std::env::var("AUTK_THREADS") {
        let n: usize = v
            .parse()
            .ok()
            .filter(|&n| n > 0)
            .ok_or_else(|| invalid(format!("AUTK_THREADS must be a positive integer, got {v:?}")))?;
        // Fails only when a global pool already exists, which is harmless.
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
    Ok(())
}

fn parse_kind(s: &str) -> Result<FamilyKind, Failure> {
    FamilyKind::parse(s.trim()).ok_or_else(|| invalid(format!("unknown family {s:?}")))
}

fn spec_from(a: &SpecArgs) -> Result<FamilySpec, Failure> {
    let kind = parse_kind(&a.family)?;
    let spec = FamilySpec {
        kind,
        p: a.p,
        m: a.m,
        n: a.n,
        r: a.r,
        d: a.d,
    };
    spec.validate()?;
    Ok(spec)
}

fn emit(out: &Option<PathBuf>, body: &str) -> Result<(), Failure> {
    match out {
        Some(path) => std::fs::write(path, body).map_err(|e| invalid(format!("cannot write {}: {e}", path.display()))),
        None => {
            print!("{body}");
            Ok(())
        }
    }
}

fn json<T: Serialize>(manifest: &RunManifest, result: T) -> String {
    let env = Envelope {
        schema: SCHEMA_VERSION,
        manifest,
        result,
    };
    serde_json::to_string_pretty(&env).expect("reports serialize") + "\n"
}

fn csv_line(fields: &[String]) -> String {
    let quoted: Vec<String> = fields
        .iter()
        .map(|f| {
            if f.contains([',', '"', '\n']) {
                format!("\"{}\"", f.replace('"', "\"\""))
            } else {
                f.clone()
            }
        })
        .collect();
    quoted.join(",") + "\n"
}

fn table_csv(outcomes: &[VerificationOutcome]) -> String {
    let mut s = csv_line(&families::TABLE_COLUMNS.map(String::from));
    for o in outcomes {
        s += &csv_line(&families::table_row(o));
    }
    s
}

fn outcome_text(o: &VerificationOutcome) -> String {
    let mut s = String::new();
    let ord = &o.report.orders;
    let _ = writeln!(s, "{} |G| = {}", o.spec, o.group_order);
    let _ = writeln!(
        s,
        "  |C| = {}, |E| = {}, C x| E = {}, oracle |Aut_K| = {}, expected {}",
        ord.c,
        ord.e,
        ord.autk_structured.map_or("not closed".into(), |v| v.to_string()),
        ord.autk_oracle,
        o.expected.autk_order
    );
    if let Some(a) = o.aut_order {
        let _ = writeln!(s, "  |Aut(G)| = {a}, index {}", o.index.unwrap_or(0));
    }
    let _ = writeln!(s, "  checks: {:?}", o.report.checks);
    if let Some(w) = &o.report.witness {
        let _ = writeln!(s, "  first failure: {w}");
    }
    let _ = writeln!(s, "  expected match: {:?}", o.expected_match);
    let _ = writeln!(s, "  iso verdict: {:?}", o.iso_verdict);
    for d in &o.expected.degenerate {
        let _ = writeln!(s, "  degenerate: {d}");
    }
    if let Some(w) = &o.witnesses {
        let _ = writeln!(
            s,
            "  witnesses: membership {}, relations {}, generation {} ({:?} of {})",
            w.membership, w.relations_hold, w.generates, w.generated_order, w.w_order
        );
        if let Some(f) = &w.failure {
            let _ = writeln!(s, "    {f}");
        }
    }
    let _ = writeln!(s, "  verdict: {}", if o.passed() { "pass" } else { "mismatch" });
    s
}

fn manifest(command: &'static str, specs: Vec<FamilySpec>, seed: Option<u64>, common: &Common) -> RunManifest {
    RunManifest {
        command,
        specs,
        seed,
        budget: common.budget,
        format: common.format,
        tool_version: env!("CARGO_PKG_VERSION"),
    }
}

fn cmd_build(a: &BuildArgs) -> Result<u8, Failure> {
    let spec = spec_from(&a.spec)?;
    let sd = families::build_family(&spec)?;
    let report = BuildReport {
        spec,
        order: sd.order(),
        fingerprint: fingerprint(sd.group())?,
        group: sd.to_doc(),
    };
    let m = manifest("build", vec![spec], None, &a.common);
    let body = match a.common.format {
        Format::Json => json(&m, &report),
        Format::Csv => {
            csv_line(&[
                "family".into(),
                "order".into(),
                "exponent".into(),
                "center".into(),
                "classes".into(),
            ]) + &csv_line(&[
                spec.label(),
                report.order.to_string(),
                report.fingerprint.exponent.to_string(),
                report.fingerprint.center_order.to_string(),
                report.fingerprint.conjugacy_class_count.to_string(),
            ])
        }
        Format::Text => format!(
            "{spec}\n  order {}\n  fingerprint {:?}\n",
            report.order, report.fingerprint
        ),
    };
    emit(&a.common.out, &body)?;
    Ok(0)
}

fn verify_one(spec: &FamilySpec, common: &Common, skip_aut: bool) -> Result<VerificationOutcome, Failure> {
    let opts = VerifyOptions {
        search: search_config(common.budget),
        count_aut: !skip_aut,
        iso_budget: common.budget.min(VerifyOptions::default().iso_budget),
    };
    Ok(families::verify_family(spec, &opts)?)
}

fn cmd_verify(a: &VerifyArgs) -> Result<u8, Failure> {
    let spec = spec_from(&a.spec)?;
    let o = verify_one(&spec, &a.common, a.skip_aut)?;
    let m = manifest("verify", vec![spec], None, &a.common);
    let body = match a.common.format {
        Format::Json => json(&m, &o),
        Format::Csv => table_csv(std::slice::from_ref(&o)),
        Format::Text => outcome_text(&o),
    };
    emit(&a.common.out, &body)?;
    Ok(if o.passed() { 0 } else { EXIT_MISMATCH })
}

fn table_specs(a: &TableArgs) -> Result<Vec<FamilySpec>, Failure> {
    let primes: Vec<u64> =
        a.p.split(',')
            .filter(|s| !s.trim().is_empty())
            .map(|s| s.trim().parse().map_err(|_| invalid(format!("bad prime {s:?}"))))
            .collect::<Result<_, _>>()?;
    let mut kinds = Vec::new();
    for item in a.family.split(',').map(str::trim).filter(|s| !s.is_empty()) {
        if item.eq_ignore_ascii_case("p4") {
            kinds.extend(FamilyKind::ORDER_P4);
        } else {
            kinds.push(parse_kind(item)?);
        }
    }
    let mut specs = Vec::new();
    for kind in kinds {
        for &p in &primes {
            if !kind.is_metacyclic() {
                let spec = FamilySpec {
                    d: if kind == FamilyKind::G8 { a.d } else { None },
                    ..FamilySpec::order_p4(kind, p)
                };
                spec.validate()?;
                specs.push(spec);
                continue;
            }
            // Every valid (m, n, r) within the bounds.
            for m in 2..=a.m {
                for n in 1..=a.n {
                    let rs: Vec<Option<u32>> = if kind == FamilyKind::Metacyclic2III {
                        vec![None]
                    } else {
                        (1..=m.min(n)).map(Some).collect()
                    };
                    for r in rs {
                        let spec = FamilySpec::metacyclic(kind, p, m, n, r);
                        if spec.validate().is_ok() {
                            specs.push(spec);
                        }
                    }
                }
            }
        }
    }
    Ok(specs)
}

fn cmd_table(a: &TableArgs) -> Result<u8, Failure> {
    let specs = table_specs(a)?;
    let outcomes = specs
        .iter()
        .map(|s| verify_one(s, &a.common, a.skip_aut))
        .collect::<Result<Vec<_>, _>>()?;
    let m = manifest("table", specs, None, &a.common);
    let body = match a.common.format {
        Format::Json => json(&m, &outcomes),
        Format::Csv => table_csv(&outcomes),
        Format::Text => outcomes.iter().map(outcome_text).collect(),
    };
    emit(&a.common.out, &body)?;
    Ok(if outcomes.iter().all(|o| o.passed()) {
        0
    } else {
        EXIT_MISMATCH
    })
}

fn counterexample_path(out: &Path, seed: u64, index: u64) -> PathBuf {
    let dir = out.parent().unwrap_or(Path::new("."));
    dir.join(format!("fuzz-{seed}-{index}.json"))
}

fn fuzz_text(s: &FuzzSummary) -> String {
    let mut t = format!(
        "fuzz seed {} count {} max order {}: {} passed, {} failed, {} errors ({} nontrivial actions)\n",
        s.seed, s.count, s.max_order, s.passed, s.failed, s.errors, s.nontrivial_actions
    );
    for r in s.counterexamples() {
        let _ = match &r.report {
            Some(rep) => writeln!(
                t,
                "  {} |G| = {}: |C| {}, |E| {}, oracle {}: {}",
                r.label,
                r.order,
                rep.orders.c,
                rep.orders.e,
                rep.orders.autk_oracle,
                rep.witness.as_deref().unwrap_or("")
            ),
            None => writeln!(t, "  {}: error {}", r.label, r.error.as_deref().unwrap_or("")),
        };
    }
    t
}

fn cmd_fuzz(a: &FuzzArgs) -> Result<u8, Failure> {
    let summary = fuzz::run_fuzz(a.seed, a.count, a.max_order, &search_config(a.common.budget));
    let m = manifest("fuzz", vec![], Some(a.seed), &a.common);
    let body = match a.common.format {
        Format::Json => json(&m, &summary),
        Format::Csv => {
            let mut s =
                csv_line(&["index", "label", "order", "C", "E", "autk_oracle", "passed", "error"].map(String::from));
            for r in &summary.results {
                let o = r.report.as_ref().map(|x| &x.orders);
                s += &csv_line(&[
                    r.instance.index.to_string(),
                    r.label.clone(),
                    r.order.to_string(),
                    o.map_or(String::new(), |o| o.c.to_string()),
                    o.map_or(String::new(), |o| o.e.to_string()),
                    o.map_or(String::new(), |o| o.autk_oracle.to_string()),
                    r.passed().to_string(),
                    r.error.clone().unwrap_or_default(),
                ]);
            }
            s
        }
        Format::Text => fuzz_text(&summary),
    };
    emit(&a.common.out, &body)?;
    if let Some(out) = &a.common.out {
        for r in summary.counterexamples() {
            let path = counterexample_path(out, a.seed, r.instance.index);
            #[derive(Serialize)]
            struct Counterexample<'a> {
                instance: &'a fuzz::FuzzResult,
                group: Option<SemidirectDoc>,
            }
            let doc = Counterexample {
                instance: r,
                group: r.group_doc(),
            };
            emit(&Some(path), &json(&m, doc))?;
        }
    }
    Ok(if summary.failed + summary.errors == 0 {
        0
    } else {
        EXIT_MISMATCH
    })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = init_threads().and_then(|_| match &cli.command {
        Command::Build(a) => cmd_build(a),
        Command::Verify(a) => cmd_verify(a),
        Command::Table(a) => cmd_table(a),
        Command::Fuzz(a) => cmd_fuzz(a),
    });
    match result {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
