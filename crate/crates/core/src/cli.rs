//! The `subsetfactor` command line: argument parsing, dispatch and the JSON
//! report envelope.
//!
//! Exit codes: 0 when the property holds (or the subset is a factor, or
//! verification passed), 1 when it fails, 2 for usage and input errors and 3
//! when the search budget runs out.

use std::path::PathBuf;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use crate::catalog::{verify_paper, witness_catalog, Claim};
use crate::cayley::{
    ball, construct_tilde, is_connected_subset, tilde_condition, tilde_condition_two_sided,
    GeneratingSet,
};
use crate::cfs::{
    decide_cfs, decide_strong_cfs, default_budget, enumerate_lagrange_subsets, with_pool,
    StrongCfsOptions, DEFAULT_CFS_CAP,
};
use crate::error::{Error, Result};
use crate::factor::{
    all_complements, classify_factor_with, find_same_complement, ClassifyOptions, FactorReport,
};
use crate::group::{divisors, Group};
use crate::notation::{
    format_subset, group_from_spec, parse_element_word, parse_subset, split_top_level,
    subset_names, SubsetFile,
};
use crate::subset::{CanonLevel, Side, Subset};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILS: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_BUDGET: i32 = 3;

/// Upper limit on complements listed by `factor --all`.
const ALL_LIMIT: usize = 100_000;

#[derive(Debug, Parser)]
#[command(
    name = "subsetfactor",
    version,
    about = "Factorizations of finite groups into subsets"
)]
pub struct Cli {
    /// Print a JSON report instead of text.
    #[arg(long, global = true)]
    pub json: bool,

    /// Worker threads for enumeration (default: available parallelism).
    #[arg(long, global = true)]
    pub threads: Option<usize>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SideArg {
    Left,
    Right,
    Both,
    Same,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum CanonArg {
    L0,
    L1,
    L2,
    L3,
}

impl From<CanonArg> for CanonLevel {
    fn from(c: CanonArg) -> CanonLevel {
        match c {
            CanonArg::L0 => CanonLevel::L0,
            CanonArg::L1 => CanonLevel::L1,
            CanonArg::L2 => CanonLevel::L2,
            CanonArg::L3 => CanonLevel::L3,
        }
    }
}

#[derive(Debug, clap::Args)]
pub struct SetArgs {
    /// Group spec such as `C4xC2`, `D5`, `sd(7,3,2)` or `perm:[(1,2,3);(1,2)]`.
    /// May be omitted when `--set-file` names the group.
    pub group: Option<String>,

    /// Comma-separated element words, e.g. `1,a,a^2*b`.
    #[arg(long, conflicts_with = "set_file")]
    pub set: Option<String>,

    /// JSON file `{"group": ..., "elements": [...]}`.
    #[arg(long)]
    pub set_file: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Order, generators and elements of a group.
    Info { group: String },

    /// Decide whether a subset is a left, right or two-sided factor.
    Factor {
        #[command(flatten)]
        set: SetArgs,
        #[arg(long, value_enum, default_value = "both")]
        side: SideArg,
        /// Enumerate every complement and report the least.
        #[arg(long)]
        all: bool,
    },

    /// Find `B` with `G = A·B = B·A`.
    SameComplement {
        #[command(flatten)]
        set: SetArgs,
    },

    /// Decide whether every Lagrange subset is a factor.
    StrongCfs {
        group: String,
        #[arg(long, value_enum, default_value = "l1", ignore_case = true)]
        canon: CanonArg,
        /// Maximum number of factor tests.
        #[arg(long)]
        budget: Option<u64>,
    },

    /// Find left and right factors of every divisor size.
    Cfs {
        group: String,
        #[arg(long, default_value_t = DEFAULT_CFS_CAP)]
        cap: usize,
    },

    /// List canonical Lagrange subsets of a given size.
    Lagrange {
        group: String,
        #[arg(long)]
        size: usize,
        #[arg(long, value_enum, default_value = "l1", ignore_case = true)]
        canon: CanonArg,
        /// Maximum number of subsets printed.
        #[arg(long, default_value_t = 50)]
        limit: usize,
    },

    /// Ball about the identity in the Cayley graph.
    Ball {
        group: String,
        #[arg(long, default_value_t = 2)]
        radius: usize,
        /// Generators, comma-separated (default: the standard ones).
        #[arg(long)]
        gens: Option<String>,
    },

    /// Grow the radius-2 ball to `d + 1` elements and test the hole conditions.
    Tilde {
        group: String,
        #[arg(long)]
        divisor: usize,
        #[arg(long)]
        gens: Option<String>,
    },

    /// Re-check every catalog factorization, witness and elimination route.
    VerifyPaper,

    /// Print the built-in catalog.
    Catalog {
        /// Only entries for this group spec.
        #[arg(long)]
        group: Option<String>,
    },
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Info { .. } => "info",
            Command::Factor { .. } => "factor",
            Command::SameComplement { .. } => "same-complement",
            Command::StrongCfs { .. } => "strong-cfs",
            Command::Cfs { .. } => "cfs",
            Command::Lagrange { .. } => "lagrange",
            Command::Ball { .. } => "ball",
            Command::Tilde { .. } => "tilde",
            Command::VerifyPaper => "verify-paper",
            Command::Catalog { .. } => "catalog",
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct Counters {
    pub subsets_examined: u64,
    pub search_nodes: u64,
}

/// Machine-readable result of one command.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ReportEnvelope {
    pub command: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub group: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub order: Option<usize>,
    pub verdict: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Vec<String>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub complement: Option<Vec<String>>,
    pub counters: Counters,
    pub details: Value,
    pub elapsed_ms: u64,
}

/// Envelope, text rendering and exit code of a finished command.
#[derive(Debug, Clone)]
pub struct Outcome {
    pub envelope: ReportEnvelope,
    pub text: String,
    pub exit_code: i32,
}

struct Builder {
    env: ReportEnvelope,
    text: String,
    code: i32,
}

impl Builder {
    fn new(command: &Command, g: Option<&Group>) -> Builder {
        Builder {
            env: ReportEnvelope {
                command: command.name().to_string(),
                group: g.map(|g| g.name().to_string()),
                order: g.map(Group::order),
                verdict: String::new(),
                witness: None,
                complement: None,
                counters: Counters::default(),
                details: Value::Null,
                elapsed_ms: 0,
            },
            text: String::new(),
            code: EXIT_OK,
        }
    }

    fn line(&mut self, s: impl AsRef<str>) {
        self.text.push_str(s.as_ref());
        self.text.push('\n');
    }

    fn verdict(&mut self, verdict: &str, holds: bool) {
        self.env.verdict = verdict.to_string();
        self.code = if holds { EXIT_OK } else { EXIT_FAILS };
    }

    fn finish(self) -> Outcome {
        Outcome {
            envelope: self.env,
            text: self.text,
            exit_code: self.code,
        }
    }
}

fn load_set(args: &SetArgs) -> Result<(Group, Subset)> {
    match (&args.set, &args.set_file) {
        (Some(text), None) => {
            let spec = args.group.as_deref().ok_or_else(|| {
                Error::InvalidParameter("a group spec is required with --set".into())
            })?;
            let g = group_from_spec(spec)?;
            let a = parse_subset(&g, text)?;
            Ok((g, a))
        }
        (None, Some(path)) => {
            let mut file = SubsetFile::load(path)?;
            if let Some(spec) = &args.group {
                file.group = spec.clone();
            }
            file.resolve()
        }
        _ => Err(Error::InvalidParameter(
            "give exactly one of --set and --set-file".into(),
        )),
    }
}

fn parse_gens(g: &Group, gens: Option<&str>) -> Result<GeneratingSet> {
    match gens {
        None => GeneratingSet::standard(g),
        Some(text) => {
            let elems = split_top_level(text)
                .into_iter()
                .map(|w| parse_element_word(g, w))
                .collect::<Result<Vec<usize>>>()?;
            GeneratingSet::new(g, elems)
        }
    }
}

fn names(g: &Group, a: &Subset) -> Vec<String> {
    subset_names(g, a)
}

/// Runs a parsed command line.
pub fn execute(cli: &Cli) -> Result<Outcome> {
    let start = Instant::now();
    let mut out = with_pool(cli.threads, || dispatch(cli))??;
    out.envelope.elapsed_ms = start.elapsed().as_millis() as u64;
    Ok(out)
}

fn dispatch(cli: &Cli) -> Result<Outcome> {
    let cmd = &cli.command;
    match cmd {
        Command::Info { group } => {
            let g = group_from_spec(group)?;
            let mut b = Builder::new(cmd, Some(&g));
            b.verdict("ok", true);
            let gens: Vec<(String, String)> = g
                .generators()
                .iter()
                .map(|(n, x)| (n.clone(), g.element_name(*x).to_string()))
                .collect();
            b.line(format!("group      {}", g.name()));
            b.line(format!("order      {}", g.order()));
            b.line(format!(
                "generators {}",
                gens.iter()
                    .map(|(n, e)| if n == e {
                        n.clone()
                    } else {
                        format!("{n} = {e}")
                    })
                    .collect::<Vec<_>>()
                    .join(", ")
            ));
            b.line(format!("abelian    {}", g.is_abelian()));
            b.line(format!("cyclic     {}", g.is_cyclic()));
            b.line(format!("divisors   {:?}", divisors(g.order())));
            b.line(format!(
                "elements   {}",
                format_subset(&g, &Subset::full(g.order()))
            ));
            b.env.details = json!({
                "generators": gens,
                "abelian": g.is_abelian(),
                "cyclic": g.is_cyclic(),
                "divisors": divisors(g.order()),
                "elements": g.element_names(),
                "element_orders": (0..g.order()).map(|x| g.element_order(x)).collect::<Vec<_>>(),
            });
            Ok(b.finish())
        }

        Command::Factor { set, side, all } => {
            let (g, a) = load_set(set)?;
            let mut b = Builder::new(cmd, Some(&g));
            b.line(format!(
                "A = {} in {} (|A| = {}, |G| = {})",
                format_subset(&g, &a),
                g.name(),
                a.len(),
                g.order()
            ));
            if *side == SideArg::Same {
                return same_complement(b, &g, &a);
            }
            let report = classify_factor_with(&g, &a, ClassifyOptions::default())?;
            b.env.counters.search_nodes = report.nodes;
            factor_outcome(&mut b, &g, &a, &report, *side);
            if *all {
                let sides: &[Side] = match side {
                    SideArg::Left => &[Side::Left],
                    SideArg::Right => &[Side::Right],
                    _ => &[Side::Left, Side::Right],
                };
                let mut details = serde_json::Map::new();
                for &s in sides {
                    let every = all_complements(&g, &a, s, ALL_LIMIT)?;
                    let key = if s == Side::Left { "left" } else { "right" };
                    b.line(format!("{key} complements: {}", every.len()));
                    if let Some(least) = every.first() {
                        b.line(format!(
                            "least {key} complement: {}",
                            format_subset(&g, least)
                        ));
                        if b.env.complement.is_none() || sides.len() == 1 {
                            b.env.complement = Some(names(&g, least));
                        }
                    }
                    details.insert(
                        format!("{key}_complements"),
                        json!(every.iter().map(|c| names(&g, c)).collect::<Vec<_>>()),
                    );
                }
                if let Value::Object(m) = &mut b.env.details {
                    m.extend(details);
                }
            }
            Ok(b.finish())
        }

        Command::SameComplement { set } => {
            let (g, a) = load_set(set)?;
            let mut b = Builder::new(cmd, Some(&g));
            b.line(format!("A = {} in {}", format_subset(&g, &a), g.name()));
            same_complement(b, &g, &a)
        }

        Command::StrongCfs {
            group,
            canon,
            budget,
        } => {
            let g = group_from_spec(group)?;
            let mut b = Builder::new(cmd, Some(&g));
            let opts = StrongCfsOptions {
                canon: (*canon).into(),
                threads: None,
                budget: budget.unwrap_or_else(default_budget),
            };
            let r = decide_strong_cfs(&g, opts)?;
            b.env.counters = Counters {
                subsets_examined: r.subsets_examined,
                search_nodes: r.search_nodes,
            };
            b.env.details = json!({
                "divisors_checked": r.divisors_checked,
                "canon_level": r.canon_level,
            });
            if r.holds {
                b.verdict("holds", true);
                b.line(format!("{} has the strong CFS property", g.name()));
            } else {
                b.verdict("fails", false);
                let w = r.witness.as_ref().expect("failing report has a witness");
                b.env.witness = Some(names(&g, w));
                b.line(format!(
                    "{} does not have the strong CFS property",
                    g.name()
                ));
                b.line(format!(
                    "witness: {} (size {}) is not a factor",
                    format_subset(&g, w),
                    w.len()
                ));
            }
            b.line(format!(
                "divisors checked: {:?}; subsets examined: {}; search nodes: {}",
                r.divisors_checked, r.subsets_examined, r.search_nodes
            ));
            Ok(b.finish())
        }

        Command::Cfs { group, cap } => {
            let g = group_from_spec(group)?;
            let mut b = Builder::new(cmd, Some(&g));
            let r = decide_cfs(&g, *cap)?;
            let mut per = serde_json::Map::new();
            for (d, f) in &r.per_divisor {
                let show = |sf: &Option<crate::cfs::SizedFactor>| match sf {
                    Some(sf) => json!({
                        "factor": names(&g, &sf.factor),
                        "complement": names(&g, &sf.complement),
                        "route": sf.route,
                    }),
                    None => Value::Null,
                };
                per.insert(
                    d.to_string(),
                    json!({ "left": show(&f.left), "right": show(&f.right) }),
                );
                match (&f.left, &f.right) {
                    (Some(l), Some(rt)) => b.line(format!(
                        "d = {d:>3}: left {} ({:?}), right {} ({:?})",
                        format_subset(&g, &l.factor),
                        l.route,
                        format_subset(&g, &rt.factor),
                        rt.route
                    )),
                    _ => b.line(format!("d = {d:>3}: no factor found")),
                }
            }
            b.env.details = json!({ "per_divisor": per, "failed_divisor": r.failed_divisor });
            if r.holds {
                b.verdict("holds", true);
                b.line(format!("{} has the CFS property", g.name()));
            } else {
                b.verdict("fails", false);
                b.line(format!(
                    "no factor of size {} found",
                    r.failed_divisor.unwrap_or(0)
                ));
            }
            Ok(b.finish())
        }

        Command::Lagrange {
            group,
            size,
            canon,
            limit,
        } => {
            let g = group_from_spec(group)?;
            let mut b = Builder::new(cmd, Some(&g));
            let all: Vec<Subset> =
                enumerate_lagrange_subsets(&g, *size, (*canon).into())?.collect();
            b.verdict("ok", true);
            b.env.counters.subsets_examined = all.len() as u64;
            b.line(format!(
                "{} canonical subsets of size {size} ({:?})",
                all.len(),
                CanonLevel::from(*canon)
            ));
            for a in all.iter().take(*limit) {
                b.line(format_subset(&g, a));
            }
            if all.len() > *limit {
                b.line("…");
            }
            b.env.details = json!({
                "count": all.len(),
                "subsets": all.iter().take(*limit).map(|a| names(&g, a)).collect::<Vec<_>>(),
            });
            Ok(b.finish())
        }

        Command::Ball {
            group,
            radius,
            gens,
        } => {
            let g = group_from_spec(group)?;
            let gens = parse_gens(&g, gens.as_deref())?;
            let mut b = Builder::new(cmd, Some(&g));
            let ball = ball(&g, &gens, *radius);
            b.verdict("ok", true);
            b.line(format!(
                "ball of radius {radius}: {} elements",
                ball.members.len()
            ));
            b.line(format_subset(&g, &ball.members));
            b.env.details = json!({
                "radius": radius,
                "size": ball.members.len(),
                "members": names(&g, &ball.members),
            });
            Ok(b.finish())
        }

        Command::Tilde {
            group,
            divisor,
            gens,
        } => {
            let g = group_from_spec(group)?;
            let gens = parse_gens(&g, gens.as_deref())?;
            let mut b = Builder::new(cmd, Some(&g));
            let Some(at) = construct_tilde(&g, &gens, *divisor) else {
                b.verdict("inapplicable", false);
                b.line(format!(
                    "no Ã for d = {divisor}: need d | {} and |ball₂| = {} ≤ d + 1 ≤ {}",
                    g.order(),
                    ball(&g, &gens, 2).members.len(),
                    g.order()
                ));
                return Ok(b.finish());
            };
            let one_sided = tilde_condition(&g, &at)?;
            let two_sided = tilde_condition_two_sided(&g, &at)?;
            let connected = is_connected_subset(&g, &gens, &at)?;
            let mut a = at.clone();
            a.remove(g.identity());
            b.line(format!(
                "Ã = {} (|Ã| = {})",
                format_subset(&g, &at),
                at.len()
            ));
            b.line(format!("connected: {connected}; one-sided condition: {one_sided}; two-sided condition: {two_sided}"));
            b.env.details = json!({
                "tilde": names(&g, &at),
                "connected": connected,
                "one_sided": one_sided,
                "two_sided": two_sided,
            });
            if !a.is_empty() {
                let r = classify_factor_with(&g, &a, ClassifyOptions::exhaustive())?;
                b.env.counters.search_nodes = r.nodes;
                b.line(format!(
                    "A = Ã ∖ {{1}} classifies as {:?}",
                    r.classification
                ));
                if let Value::Object(m) = &mut b.env.details {
                    m.insert("classification".into(), json!(r.classification));
                }
                if !r.classification.is_factor() {
                    b.env.witness = Some(names(&g, &a));
                }
            }
            b.verdict(if two_sided { "holds" } else { "fails" }, two_sided);
            Ok(b.finish())
        }

        Command::VerifyPaper => {
            let mut b = Builder::new(cmd, None);
            let report = verify_paper();
            for item in &report.items {
                b.line(format!(
                    "{:>3} {:<28} {} {}",
                    item.part,
                    item.locus,
                    if item.passed { "pass" } else { "FAIL" },
                    item.detail
                ));
            }
            let failed = report.failures().count();
            b.line(format!("{} checks, {failed} failed", report.items.len()));
            b.env.details =
                json!({ "checks": report.items.len(), "failed": failed, "items": report.items });
            b.verdict(
                if report.passed { "passed" } else { "failed" },
                report.passed,
            );
            Ok(b.finish())
        }

        Command::Catalog { group } => {
            let mut b = Builder::new(cmd, None);
            let entries: Vec<_> = witness_catalog()
                .into_iter()
                .filter(|e| {
                    group
                        .as_ref()
                        .is_none_or(|s| s.eq_ignore_ascii_case(&e.group))
                })
                .collect();
            for e in &entries {
                let claim = match &e.claim {
                    Claim::NonFactor => "non-factor".to_string(),
                    Claim::PositiveFactorization { complement, side } => {
                        format!("factor, {side:?} complement {{{}}}", complement.join(", "))
                    }
                };
                b.line(format!(
                    "{:<28} {:<12} {{{}}}: {claim}",
                    e.locus,
                    e.group,
                    e.subset.join(", ")
                ));
            }
            b.verdict("ok", true);
            b.env.details = json!({ "entries": entries });
            Ok(b.finish())
        }
    }
}

fn factor_outcome(b: &mut Builder, g: &Group, a: &Subset, r: &FactorReport, side: SideArg) {
    let mut details = serde_json::Map::new();
    details.insert("classification".into(), json!(r.classification));
    if let Some(c) = &r.left_complement {
        details.insert("left_complement".into(), json!(names(g, c)));
        b.line(format!(
            "left factor:  G = A·B with B = {}",
            format_subset(g, c)
        ));
    }
    if let Some(c) = &r.right_complement {
        details.insert("right_complement".into(), json!(names(g, c)));
        b.line(format!(
            "right factor: G = B·A with B = {}",
            format_subset(g, c)
        ));
    }
    if let Some(ev) = &r.evidence {
        details.insert("evidence".into(), json!(ev));
        b.line(format!(
            "not a factor ({:?} on the left, {:?} on the right)",
            ev.left, ev.right
        ));
        if let Some(h) = &ev.generated {
            b.line(format!(
                "⟨A⟩ has order {}, not divisible by |A| = {}",
                h.len(),
                a.len()
            ));
            details.insert("generated_order".into(), json!(h.len()));
        }
    }
    let (holds, complement) = match side {
        SideArg::Left => (r.classification.is_left(), r.left_complement.as_ref()),
        SideArg::Right => (r.classification.is_right(), r.right_complement.as_ref()),
        _ => (
            r.classification.is_factor(),
            r.left_complement.as_ref().or(r.right_complement.as_ref()),
        ),
    };
    b.env.complement = complement.map(|c| names(g, c));
    if !holds {
        b.env.witness = Some(names(g, a));
    }
    b.line(format!("classification: {:?}", r.classification));
    b.verdict(if holds { "factor" } else { "non_factor" }, holds);
    b.env.details = Value::Object(details);
}

fn same_complement(mut b: Builder, g: &Group, a: &Subset) -> Result<Outcome> {
    if g.order() % a.len() != 0 {
        b.verdict("non_factor", false);
        b.line(format!("|A| = {} does not divide {}", a.len(), g.order()));
        b.env.witness = Some(names(g, a));
        return Ok(b.finish());
    }
    match find_same_complement(g, a)? {
        Some(c) => {
            b.verdict("factor", true);
            b.line(format!("G = A·B = B·A with B = {}", format_subset(g, &c)));
            b.env.complement = Some(names(g, &c));
        }
        None => {
            b.verdict("non_factor", false);
            b.line("no common two-sided complement");
            b.env.witness = Some(names(g, a));
        }
    }
    b.env.details = json!({});
    Ok(b.finish())
}

/// Exit code for an error.
pub fn exit_code_for(e: &Error) -> i32 {
    match e {
        Error::BudgetExceeded { .. } => EXIT_BUDGET,
        _ => EXIT_USAGE,
    }
}

/// Writes to stdout, ignoring a closed pipe.
fn emit(text: &str) {
    use std::io::Write;
    let mut out = std::io::stdout().lock();
    let _ = out.write_all(text.as_bytes()).and_then(|_| out.flush());
}

/// Parses `args`, runs the command, prints the result and returns the exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    match execute(&cli) {
        Ok(out) => {
            if cli.json {
                emit(&format!(
                    "{}\n",
                    serde_json::to_string_pretty(&out.envelope).expect("serializable")
                ));
            } else {
                emit(&out.text);
            }
            out.exit_code
        }
        Err(e) => {
            let code = exit_code_for(&e);
            if cli.json {
                let verdict = if code == EXIT_BUDGET {
                    "inconclusive"
                } else {
                    "error"
                };
                let mut v = json!({
                    "command": cli.command.name(),
                    "verdict": verdict,
                    "error": e.to_string(),
                });
                if let Error::BudgetExceeded { examined, .. } = e {
                    v["counters"] = json!({ "subsets_examined": examined });
                }
                emit(&format!(
                    "{}\n",
                    serde_json::to_string_pretty(&v).expect("serializable")
                ));
            }
            eprintln!("error: {e}");
            code
        }
    }
}
