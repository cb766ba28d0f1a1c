//! `kneser` command-line front end.
//!
//! Every subcommand except `table1 --format csv|md` prints a JSON
//! [`RunReport`]. Exit codes: 0 success, 1 a reported check failed,
//! 2 usage or input error, 3 solver timeout.

use std::ffi::OsString;
use std::fs;
use std::path::{Path, PathBuf};
use std::time::Duration;

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::json;

use kneser_core::coefficients::{to_decimal, Rounding};
use kneser_core::monotone::random_free_upward_closed;
use kneser_core::partitions::audit_kleitman;
use kneser_core::solver::{
    blow_up, chi_f_certified, emb_with_witness, entropy_limit_report, shrink_injective, solve_vex_with, Homomorphism,
    HomomorphismJson, VexOptions,
};
use kneser_core::{
    alpha, audit_good, beta, beta_via_sum, complete_multipartite, disjoint_tuple, find_copy, good_family, table1,
    ConstructionKind, ConstructionSpec, Family, PatternGraph,
};

mod report;

pub use report::{Check, RunReport, SCHEMA_VERSION};

pub const EXIT_OK: i32 = 0;
pub const EXIT_CHECK_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_TIMEOUT: i32 = 3;

const PATTERN_HELP: &str = "Pattern: kst:S,T (complete S-partite, parts of size T), k:S (clique), \
cycle:L, or edges:0-1,1-2,... (explicit edge list on vertices 0..)";

#[derive(Debug, Parser)]
#[command(name = "kneser", version, about = "Forbidden configurations in the Kneser cube")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Build one of the extremal constructions.
    Construct(ConstructArgs),
    /// Test a family for a copy of a pattern.
    Check(CheckArgs),
    /// List the good sets of a family.
    Good(GoodArgs),
    /// Audit the good-set properties of free families.
    AuditGood(AuditGoodArgs),
    /// Audit the equipartition inequalities of K_s-free families on [sm].
    AuditKleitman(AuditKleitmanArgs),
    /// Largest pattern-free family on [n] by exact search.
    SolveVex(SolveVexArgs),
    /// Largest m with the pattern inside Kn(n, m).
    Emb(EmbArgs),
    /// Fractional chromatic number with certificate.
    Chif(ChifArgs),
    /// One coefficient, exactly or as a decimal.
    Coeff(CoeffArgs),
    /// The alpha/beta comparison table.
    Table1(Table1Args),
    /// Validate, blow up and shrink a homomorphism into a Kneser graph.
    Hom(HomArgs),
}

#[derive(Debug, Args)]
pub struct ConstructArgs {
    /// kleitman-a, kleitman-b, sm1, sm-t3 or lemma22.
    #[arg(long)]
    pub kind: ConstructionKind,
    #[arg(long)]
    pub s: usize,
    #[arg(long)]
    pub m: usize,
    #[arg(long, default_value_t = 2)]
    pub t: usize,
    /// Element left out of the (m-1)-sets of sm-t3.
    #[arg(long)]
    pub fixed: Option<usize>,
    /// Write the family in text format here instead of embedding it.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct CheckArgs {
    #[arg(long)]
    pub family: PathBuf,
    #[arg(long, help = PATTERN_HELP)]
    pub pattern: PatternGraph,
    /// Also search for this many distinct pairwise-disjoint members.
    #[arg(long)]
    pub tuple: Option<usize>,
    /// Total size budget for --tuple (default: n).
    #[arg(long, requires = "tuple")]
    pub budget: Option<usize>,
    /// Write the witness JSON here when a copy exists.
    #[arg(long)]
    pub witness_out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct GoodArgs {
    #[arg(long)]
    pub family: PathBuf,
    #[arg(long)]
    pub t: usize,
}

#[derive(Debug, Args)]
#[command(group = clap::ArgGroup::new("source").required(true).args(["family", "random"]))]
pub struct AuditGoodArgs {
    #[arg(long)]
    pub family: Option<PathBuf>,
    /// Audit this many random upward-closed free families instead.
    #[arg(long, requires = "n")]
    pub random: Option<usize>,
    /// Ground set size for --random.
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long)]
    pub s: usize,
    #[arg(long)]
    pub t: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Debug, Args)]
#[command(group = clap::ArgGroup::new("source").required(true).args(["family", "random"]))]
pub struct AuditKleitmanArgs {
    #[arg(long)]
    pub family: Option<PathBuf>,
    /// Audit this many random upward-closed K_s-free families on [sm].
    #[arg(long)]
    pub random: Option<usize>,
    #[arg(long)]
    pub s: usize,
    #[arg(long)]
    pub m: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Debug, Args)]
pub struct SolveVexArgs {
    #[arg(long)]
    pub n: usize,
    #[arg(long, help = PATTERN_HELP)]
    pub pattern: PatternGraph,
    /// Seconds before giving up with bounds; 0 disables the limit.
    #[arg(long, default_value_t = 60)]
    pub timeout: u64,
    #[arg(long, default_value_t = 1)]
    pub threads: usize,
}

#[derive(Debug, Args)]
pub struct EmbArgs {
    #[arg(long)]
    pub n: usize,
    #[arg(long, help = PATTERN_HELP)]
    pub pattern: PatternGraph,
    /// Report emb(k)/k for k = FROM..=n against 1/chi_f instead.
    #[arg(long)]
    pub from: Option<usize>,
}

#[derive(Debug, Args)]
pub struct ChifArgs {
    #[arg(long, help = PATTERN_HELP)]
    pub pattern: PatternGraph,
}

#[derive(Debug, Args)]
#[command(group = clap::ArgGroup::new("which").required(true).args(["alpha", "beta", "beta_sum"]))]
pub struct CoeffArgs {
    #[arg(long)]
    pub alpha: bool,
    #[arg(long)]
    pub beta: bool,
    /// beta evaluated through the unsimplified double sum.
    #[arg(long)]
    pub beta_sum: bool,
    #[arg(long)]
    pub s: usize,
    /// Only the exact fraction.
    #[arg(long, conflicts_with = "decimal")]
    pub exact: bool,
    /// Only the 6-place decimal.
    #[arg(long)]
    pub decimal: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum TableFormat {
    Csv,
    Md,
    Json,
}

#[derive(Debug, Args)]
pub struct Table1Args {
    #[arg(long, default_value_t = 20)]
    pub max: usize,
    #[arg(long, value_enum, default_value_t = TableFormat::Csv)]
    pub format: TableFormat,
}

#[derive(Debug, Args)]
#[command(group = clap::ArgGroup::new("map").required(true).args(["images", "map_file"]))]
pub struct HomArgs {
    #[arg(long, help = PATTERN_HELP)]
    pub pattern: PatternGraph,
    /// Images as `1,2;3,4;...`, one 1-based set per vertex; needs --a and --b.
    #[arg(long, requires_all = ["a", "b"])]
    pub images: Option<String>,
    /// JSON file {a, b, images}.
    #[arg(long = "map")]
    pub map_file: Option<PathBuf>,
    #[arg(long)]
    pub a: Option<usize>,
    #[arg(long)]
    pub b: Option<usize>,
    /// Blow-up factor k.
    #[arg(long)]
    pub blow_up: Option<usize>,
    /// Shrink to an injective map into Kn(a, b-1) after any blow-up.
    #[arg(long)]
    pub shrink: bool,
}

/// Everything a finished invocation wants to print.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub stdout: String,
    pub stderr: String,
    pub code: i32,
}

enum Rendered {
    Report { report: RunReport, timed_out: bool },
    Text { text: String },
}

pub fn run<I, T>(argv: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            let (stdout, stderr) = if e.use_stderr() {
                (String::new(), text)
            } else {
                (text, String::new())
            };
            return Outcome { stdout, stderr, code };
        }
    };
    match execute(cli.command) {
        Ok(Rendered::Text { text }) => Outcome {
            stdout: text,
            stderr: String::new(),
            code: EXIT_OK,
        },
        Ok(Rendered::Report { report, timed_out }) => {
            let code = if timed_out {
                EXIT_TIMEOUT
            } else if report.all_pass() {
                EXIT_OK
            } else {
                EXIT_CHECK_FAILED
            };
            Outcome {
                stdout: report.to_json() + "\n",
                stderr: String::new(),
                code,
            }
        }
        Err(e) => Outcome {
            stdout: String::new(),
            stderr: format!("error: {e:#}\n"),
            code: EXIT_USAGE,
        },
    }
}

fn report(report: RunReport) -> anyhow::Result<Rendered> {
    Ok(Rendered::Report {
        report,
        timed_out: false,
    })
}

fn read_family(path: &Path) -> anyhow::Result<Family> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    Family::parse_text(&text).with_context(|| format!("parsing {}", path.display()))
}

fn execute(command: Command) -> anyhow::Result<Rendered> {
    match command {
        Command::Construct(a) => construct(a),
        Command::Check(a) => check(a),
        Command::Good(a) => good(a),
        Command::AuditGood(a) => audit_good_cmd(a),
        Command::AuditKleitman(a) => audit_kleitman_cmd(a),
        Command::SolveVex(a) => solve_vex_cmd(a),
        Command::Emb(a) => emb_cmd(a),
        Command::Chif(a) => chif(a),
        Command::Coeff(a) => coeff(a),
        Command::Table1(a) => table1_cmd(a),
        Command::Hom(a) => hom(a),
    }
}

fn construct(a: ConstructArgs) -> anyhow::Result<Rendered> {
    let spec = ConstructionSpec::new(a.kind, a.s, a.m, a.t, a.fixed)?;
    let family = spec.build()?;
    let formula = spec.closed_form_size()?;
    let mut rep = RunReport::new(
        "construct",
        json!({"kind": a.kind, "s": a.s, "m": a.m, "t": a.t, "fixed": a.fixed}),
    );
    let size = family.len().to_string();
    rep.checks.push(Check::compare(
        "size equals closed form",
        size == formula.to_string(),
        &size,
        &formula,
    ));
    let mut outputs = json!({"n": family.n(), "size": size, "closed_form_size": formula.to_string()});
    match &a.out {
        Some(path) => {
            fs::write(path, family.to_text()).with_context(|| format!("writing {}", path.display()))?;
            outputs["written_to"] = json!(path.display().to_string());
        }
        None => outputs["family"] = serde_json::to_value(&family)?,
    }
    rep.outputs = outputs;
    report(rep)
}

fn check(a: CheckArgs) -> anyhow::Result<Rendered> {
    let family = read_family(&a.family)?;
    let mut rep = RunReport::new(
        "check",
        json!({"family": a.family.display().to_string(), "pattern": a.pattern.to_string(), "tuple": a.tuple, "budget": a.budget}),
    );
    let witness = find_copy(&family, &a.pattern);
    let free = witness.is_none();
    let witness_json = witness.as_ref().map(|w| w.to_json(family.n(), &a.pattern));
    if let (Some(path), Some(w)) = (&a.witness_out, &witness_json) {
        fs::write(path, serde_json::to_string_pretty(w)?).with_context(|| format!("writing {}", path.display()))?;
    }
    let mut outputs = json!({"n": family.n(), "family_size": family.len(), "free": free, "witness": witness_json});
    if let Some(s) = a.tuple {
        let budget = a.budget.unwrap_or(family.n());
        let tuple = disjoint_tuple(&family, s, budget);
        outputs["tuple"] = json!(tuple.map(|ms| ms.iter().map(|m| m.elements()).collect::<Vec<_>>()));
    }
    rep.outputs = outputs;
    rep.checks.push(Check::flag("free", free));
    report(rep)
}

fn good(a: GoodArgs) -> anyhow::Result<Rendered> {
    let family = read_family(&a.family)?;
    let g = good_family(&family, a.t)?;
    let mut rep = RunReport::new("good", json!({"family": a.family.display().to_string(), "t": a.t}));
    rep.outputs = json!({"size": g.len(), "good": g});
    report(rep)
}

fn audit_good_cmd(a: AuditGoodArgs) -> anyhow::Result<Rendered> {
    let pattern = complete_multipartite(a.s, a.t)?;
    let families = match (&a.family, a.random) {
        (Some(path), _) => vec![read_family(path)?],
        (None, Some(count)) => {
            let n = a.n.context("--random needs --n")?;
            let mut rng = ChaCha8Rng::seed_from_u64(a.seed);
            (0..count)
                .map(|_| random_free_upward_closed(n, &pattern, &mut rng))
                .collect::<Result<Vec<_>, _>>()?
        }
        (None, None) => bail!("either --family or --random is required"),
    };
    let mut rep = RunReport::new(
        "audit-good",
        json!({"family": a.family.as_ref().map(|p| p.display().to_string()), "random": a.random, "n": a.n, "s": a.s, "t": a.t, "seed": a.seed}),
    );
    let mut reports = Vec::new();
    for (i, f) in families.iter().enumerate() {
        let r = audit_good(f, a.s, a.t)?;
        let tag = if families.len() == 1 {
            String::new()
        } else {
            format!(" #{i}")
        };
        rep.checks.push(Check::flag(
            format!("family{tag} upward closed"),
            r.family_upward_closed,
        ));
        rep.checks
            .push(Check::flag(format!("family{tag} free"), r.family_is_free));
        rep.checks.push(Check::flag(
            format!("good sets{tag} downward closed"),
            r.downward_closed,
        ));
        rep.checks
            .push(Check::flag(format!("non-good sets{tag} K_s-free"), r.e_is_ks_free));
        for layer in &r.counting_holds_per_layer {
            rep.checks.push(Check::compare(
                format!("layer {}{tag} counting", layer.i),
                layer.holds,
                &layer.lhs,
                &layer.rhs,
            ));
        }
        reports.push(serde_json::to_value(&r)?);
    }
    rep.outputs = json!({"audited": families.len(), "reports": reports});
    report(rep)
}

fn audit_kleitman_cmd(a: AuditKleitmanArgs) -> anyhow::Result<Rendered> {
    let n = a.s * a.m;
    let families = match (&a.family, a.random) {
        (Some(path), _) => vec![read_family(path)?],
        (None, Some(count)) => {
            let pattern = complete_multipartite(a.s, 1)?;
            let mut rng = ChaCha8Rng::seed_from_u64(a.seed);
            (0..count)
                .map(|_| random_free_upward_closed(n, &pattern, &mut rng))
                .collect::<Result<Vec<_>, _>>()?
        }
        (None, None) => bail!("either --family or --random is required"),
    };
    let mut rep = RunReport::new(
        "audit-kleitman",
        json!({"family": a.family.as_ref().map(|p| p.display().to_string()), "random": a.random, "s": a.s, "m": a.m, "seed": a.seed}),
    );
    let mut reports = Vec::new();
    for (i, f) in families.iter().enumerate() {
        let r = audit_kleitman(f, a.s, a.m)?;
        let tag = if families.len() == 1 {
            String::new()
        } else {
            format!(" #{i}")
        };
        rep.checks
            .push(Check::flag(format!("family{tag} upward closed"), r.upward_closed));
        rep.checks.push(Check::flag(format!("family{tag} K_s-free"), r.ks_free));
        for c in &r.checks {
            rep.checks.push(Check::compare(
                format!("({}) j={}{tag}", c.item, c.j),
                c.holds,
                &c.lhs,
                &c.rhs,
            ));
        }
        reports.push(serde_json::to_value(&r)?);
    }
    rep.outputs = json!({"audited": families.len(), "reports": reports});
    report(rep)
}

fn solve_vex_cmd(a: SolveVexArgs) -> anyhow::Result<Rendered> {
    let opts = VexOptions {
        timeout: (a.timeout > 0).then(|| Duration::from_secs(a.timeout)),
        threads: a.threads.max(1),
    };
    let result = solve_vex_with(a.n, &a.pattern, &opts)?;
    let mut rep = RunReport::new(
        "solve-vex",
        json!({"n": a.n, "pattern": a.pattern.to_string(), "timeout": a.timeout, "threads": a.threads}),
    );
    rep.checks.push(Check::flag(
        "witness is free",
        find_copy(&result.extremal, &a.pattern).is_none(),
    ));
    rep.checks.push(Check::compare(
        "witness size equals max_size",
        result.extremal.len().to_string() == result.max_size.to_string(),
        result.extremal.len(),
        &result.max_size,
    ));
    let timed_out = !result.is_optimal();
    rep.outputs = serde_json::to_value(&result)?;
    Ok(Rendered::Report { report: rep, timed_out })
}

fn emb_cmd(a: EmbArgs) -> anyhow::Result<Rendered> {
    let mut rep = RunReport::new(
        "emb",
        json!({"n": a.n, "pattern": a.pattern.to_string(), "from": a.from}),
    );
    match a.from {
        Some(from) => {
            let r = entropy_limit_report(&a.pattern, from, a.n)?;
            for row in &r.rows {
                rep.checks.push(Check::compare(
                    format!("chi_f * emb <= n at n={}", row.n),
                    row.bound_holds,
                    &r.chi_f * kneser_core::Rational::from_integer(row.emb.into()),
                    row.n,
                ));
            }
            rep.outputs = serde_json::to_value(&r)?;
        }
        None => {
            let (m, witness) = emb_with_witness(a.n, &a.pattern)?;
            let witness = witness.map(|w| w.to_json(a.n, &a.pattern));
            rep.outputs = json!({"emb": m, "witness": witness});
        }
    }
    report(rep)
}

fn chif(a: ChifArgs) -> anyhow::Result<Rendered> {
    let cert = chi_f_certified(&a.pattern)?;
    let mut rep = RunReport::new("chif", json!({"pattern": a.pattern.to_string()}));
    rep.checks
        .push(Check::flag("certificate verifies", cert.verify(&a.pattern)));
    rep.outputs = serde_json::to_value(&cert)?;
    report(rep)
}

fn coeff(a: CoeffArgs) -> anyhow::Result<Rendered> {
    let (name, value) = if a.alpha {
        ("alpha", alpha(a.s)?)
    } else if a.beta {
        ("beta", beta(a.s)?)
    } else {
        ("beta_sum", beta_via_sum(a.s)?)
    };
    let mut rep = RunReport::new("coeff", json!({"coefficient": name, "s": a.s}));
    let mut outputs = json!({"coefficient": name, "s": a.s});
    if !a.decimal {
        outputs["exact"] = json!(value.to_string());
    }
    if !a.exact {
        outputs["decimal"] = json!(to_decimal(&value, 6, Rounding::HalfEven));
    }
    rep.outputs = outputs;
    report(rep)
}

fn table1_cmd(a: Table1Args) -> anyhow::Result<Rendered> {
    let rows = table1(a.max)?;
    let text = match a.format {
        TableFormat::Csv => {
            let mut out = String::from("s,alpha,beta\n");
            for r in &rows {
                out.push_str(&format!("{},{},{}\n", r.s, r.alpha_decimal, r.beta_decimal));
            }
            out
        }
        TableFormat::Md => {
            let mut out = String::from("| s | alpha_s | beta_s |\n|---|---|---|\n");
            for r in &rows {
                out.push_str(&format!("| {} | {} | {} |\n", r.s, r.alpha_decimal, r.beta_decimal));
            }
            out
        }
        TableFormat::Json => {
            let mut rep = RunReport::new("table1", json!({"max": a.max}));
            for r in &rows {
                rep.checks.push(Check::flag(
                    format!("s={} rounding unambiguous", r.s),
                    !r.rounding_discrepancy,
                ));
            }
            rep.outputs = json!({"rows": rows});
            return report(rep);
        }
    };
    Ok(Rendered::Text { text })
}

fn parse_images(text: &str) -> anyhow::Result<Vec<Vec<usize>>> {
    text.split(';')
        .map(|set| {
            set.split(',')
                .filter(|x| !x.trim().is_empty())
                .map(|x| x.trim().parse::<usize>().with_context(|| format!("bad element `{x}`")))
                .collect()
        })
        .collect()
}

fn hom(a: HomArgs) -> anyhow::Result<Rendered> {
    let base = match (&a.images, &a.map_file) {
        (Some(images), _) => {
            let (Some(an), Some(bn)) = (a.a, a.b) else {
                bail!("--images needs --a and --b")
            };
            Homomorphism::new(an, bn, &parse_images(images)?)?
        }
        (None, Some(path)) => {
            let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
            let json: HomomorphismJson = serde_json::from_str(&text)?;
            Homomorphism::from_json(&json)?
        }
        (None, None) => bail!("either --images or --map is required"),
    };
    let mut rep = RunReport::new(
        "hom",
        json!({"pattern": a.pattern.to_string(), "map": base.to_json(), "blow_up": a.blow_up, "shrink": a.shrink}),
    );
    let valid = base.validate(&a.pattern);
    rep.checks.push(Check::flag("input is a homomorphism", valid.is_ok()));
    let mut outputs = json!({"input_is_embedding": base.is_embedding(&a.pattern)});
    if let Err(e) = valid {
        outputs["error"] = json!(e.to_string());
        rep.outputs = outputs;
        return report(rep);
    }
    let mut current = base;
    if let Some(k) = a.blow_up {
        current = blow_up(&current, &a.pattern, k)?;
        rep.checks.push(Check::flag(
            format!("blow-up into Kn({}, {}) is a homomorphism", current.a, current.b),
            current.validate(&a.pattern).is_ok(),
        ));
        outputs["blown_up"] = serde_json::to_value(current.to_json())?;
    }
    if a.shrink {
        match shrink_injective(&current, &a.pattern) {
            Ok(small) => {
                rep.checks.push(Check::flag(
                    format!("shrunk map into Kn({}, {}) is an embedding", small.a, small.b),
                    small.is_embedding(&a.pattern),
                ));
                outputs["shrunk"] = serde_json::to_value(small.to_json())?;
            }
            Err(e) => {
                rep.checks.push(Check::flag("shrink feasible", false));
                outputs["shrink_error"] = json!(e.to_string());
            }
        }
    }
    rep.outputs = outputs;
    report(rep)
}
