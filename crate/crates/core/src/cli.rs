//! The `hicat` command line.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::emit::{self, ArrowPolicy, Content, Format};
use crate::error::{Error, Result};
use crate::exangle::realize;
use crate::model::{CategoryModel, FiniteCategory, ModelKind};
use crate::quiver::build_quiver;
use crate::quotient::{injproj_ideal, projinj_ideal, quotient};
use crate::rigid::{exchange_exangles, is_rigid, maximal_rigid, mutate, mutation_graph, RigidSet};
use crate::tuple::IndexTuple;
use crate::verify::{run_grid, run_theorem, verify_model_sanity, Grid, GridRun, TheoremId};

#[derive(Parser, Debug)]
#[command(name = "hicat", version, about = "Combinatorial models of higher type-A categories")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// List the objects of a model
    Objects {
        #[command(flatten)]
        model: ModelArgs,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Dimension of Hom(FROM, TO), or the whole hom table
    Hom {
        #[command(flatten)]
        model: ModelArgs,
        #[command(flatten)]
        pair: PairArgs,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Dimension of E(FROM, TO), or the whole extension table
    Ext {
        #[command(flatten)]
        model: ModelArgs,
        #[command(flatten)]
        pair: PairArgs,
        #[command(flatten)]
        out: OutArgs,
    },
    /// The exangle TO -> ... -> FROM realising E(FROM, TO)
    Exangle {
        #[command(flatten)]
        model: ModelArgs,
        #[arg(long)]
        from: IndexTuple,
        #[arg(long)]
        to: IndexTuple,
        #[command(flatten)]
        out: OutArgs,
    },
    /// The projective-injective quotient of a module model, or the
    /// shifted-projective quotient of a relative-f model
    Quotient {
        #[command(flatten)]
        model: ModelArgs,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Exhaustively check a theorem over a grid or at one point
    Verify {
        #[arg(long, value_enum)]
        theorem: TheoremArg,
        /// DMAX:NMAX:OBJMAX; defaults to HICAT_GRID, then 3:4:200
        #[arg(long)]
        grid: Option<Grid>,
        /// Check a single point instead of a grid
        #[arg(long, requires = "n")]
        d: Option<usize>,
        #[arg(long, requires = "d")]
        n: Option<usize>,
        /// With --theorem sanity at a single point, check only this model
        #[arg(long, value_enum)]
        model: Option<ModelArg>,
        #[arg(long, value_parser = parse_window)]
        window: Option<(i64, i64)>,
        #[command(flatten)]
        out: OutArgs,
    },
    /// List the maximal rigid sets, or test one set for rigidity
    Rigid {
        #[command(flatten)]
        model: ModelArgs,
        /// Summands of a set to test
        #[arg(long, num_args = 1..)]
        set: Option<Vec<IndexTuple>>,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Mutate a maximal rigid set at one summand
    Mutate {
        #[command(flatten)]
        model: ModelArgs,
        #[arg(long, num_args = 1.., required = true)]
        set: Vec<IndexTuple>,
        #[arg(long)]
        at: IndexTuple,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Write a quiver, category, mutation graph, exangle or report
    Emit {
        #[arg(long, value_enum)]
        content: ContentArg,
        #[command(flatten)]
        model: ModelArgs,
        #[arg(long, value_enum, default_value = "irreducible")]
        arrows: ArrowArg,
        #[arg(long)]
        from: Option<IndexTuple>,
        #[arg(long)]
        to: Option<IndexTuple>,
        #[arg(long, value_enum)]
        theorem: Option<TheoremArg>,
        #[arg(long)]
        grid: Option<Grid>,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Count objects or maximal rigid sets
    Count {
        #[command(flatten)]
        model: ModelArgs,
        #[arg(long, value_enum, default_value = "objects")]
        what: CountArg,
    },
}

#[derive(Args, Debug)]
struct ModelArgs {
    #[arg(long, value_enum, default_value = "module")]
    model: ModelArg,
    #[arg(long, default_value_t = 2)]
    d: usize,
    #[arg(long, default_value_t = 3)]
    n: usize,
    /// LO:HI range of a_0 for the derived model
    #[arg(long, value_parser = parse_window)]
    window: Option<(i64, i64)>,
}

#[derive(Args, Debug)]
struct PairArgs {
    #[arg(long, requires = "to")]
    from: Option<IndexTuple>,
    #[arg(long, requires = "from")]
    to: Option<IndexTuple>,
}

#[derive(Args, Debug)]
struct OutArgs {
    /// text, json, dot or tikz, depending on the subcommand
    #[arg(long)]
    format: Option<String>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum ModelArg {
    Module,
    Derived,
    Cluster,
    AlmostPositive,
    RelativeF,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum TheoremArg {
    Equiv,
    FExangles,
    Main2,
    Sanity,
    Correspondence,
}

impl From<TheoremArg> for TheoremId {
    fn from(t: TheoremArg) -> Self {
        match t {
            TheoremArg::Equiv => TheoremId::Equiv,
            TheoremArg::FExangles => TheoremId::FExangles,
            TheoremArg::Main2 => TheoremId::Main2,
            TheoremArg::Sanity => TheoremId::Sanity,
            TheoremArg::Correspondence => TheoremId::Correspondence,
        }
    }
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum ContentArg {
    Quiver,
    Category,
    MutationGraph,
    Exangle,
    Report,
}

impl From<ContentArg> for Content {
    fn from(c: ContentArg) -> Self {
        match c {
            ContentArg::Quiver => Content::Quiver,
            ContentArg::Category => Content::Category,
            ContentArg::MutationGraph => Content::MutationGraph,
            ContentArg::Exangle => Content::Exangle,
            ContentArg::Report => Content::Report,
        }
    }
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum ArrowArg {
    Irreducible,
    All,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum CountArg {
    Objects,
    Rigid,
}

fn parse_window(s: &str) -> std::result::Result<(i64, i64), String> {
    let (lo, hi) = s.split_once(':').ok_or_else(|| format!("window must look like LO:HI, got {s:?}"))?;
    let parse = |v: &str| v.trim().parse::<i64>().map_err(|e| format!("bad window bound {v:?}: {e}"));
    Ok((parse(lo)?, parse(hi)?))
}

fn build_model(kind: ModelArg, d: usize, n: usize, window: Option<(i64, i64)>) -> Result<CategoryModel> {
    if window.is_some() && !matches!(kind, ModelArg::Derived) {
        return Err(Error::InvalidParameters("--window only applies to --model derived".into()));
    }
    match kind {
        ModelArg::Module => CategoryModel::module(d, n),
        ModelArg::Derived => match window {
            Some((lo, hi)) => CategoryModel::derived_window(d, n, lo, hi),
            None => CategoryModel::derived(d, n),
        },
        ModelArg::Cluster => CategoryModel::cluster(d, n),
        ModelArg::AlmostPositive => CategoryModel::almost_positive(d, n),
        ModelArg::RelativeF => CategoryModel::relative_f(d, n),
    }
}

impl ModelArgs {
    fn build(&self) -> Result<CategoryModel> {
        build_model(self.model, self.d, self.n, self.window)
    }
}

/// What a subcommand produced: text plus whether it counts as success.
struct Outcome {
    text: String,
    success: bool,
}

impl Outcome {
    fn ok(text: String) -> Self {
        Self { text, success: true }
    }
}

fn format_of(out: &OutArgs, default: &str, allowed: &[&str]) -> Result<String> {
    let f = out.format.clone().unwrap_or_else(|| default.to_string());
    if allowed.contains(&f.as_str()) {
        Ok(f)
    } else {
        Err(Error::InvalidParameters(format!("--format must be one of {allowed:?}, got {f:?}")))
    }
}

fn json_text(v: &serde_json::Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("json values serialise");
    s.push('\n');
    s
}

fn lines<T: AsRef<str>>(items: impl IntoIterator<Item = T>) -> String {
    items.into_iter().map(|s| format!("{}\n", s.as_ref())).collect()
}

/// Parse `argv` (including the program name), run, and return the exit code:
/// 0 on success, 1 when a verification fails, 2 on usage errors.
pub fn run<I, T>(argv: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let rendered = e.render().to_string();
            let sink: &mut dyn Write = if e.use_stderr() { stderr } else { stdout };
            let _ = sink.write_all(rendered.as_bytes());
            return code;
        }
    };
    let out_path = out_path(&cli.command);
    match execute(cli.command) {
        Ok(outcome) => {
            let written = match out_path {
                Some(path) => std::fs::write(path, &outcome.text).map_err(Error::from),
                None => stdout.write_all(outcome.text.as_bytes()).map_err(Error::from),
            };
            if let Err(e) = written {
                let _ = writeln!(stderr, "error: {e}");
                return 2;
            }
            if outcome.success {
                0
            } else {
                1
            }
        }
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            2
        }
    }
}

fn out_path(command: &Command) -> Option<PathBuf> {
    let out = match command {
        Command::Objects { out, .. }
        | Command::Hom { out, .. }
        | Command::Ext { out, .. }
        | Command::Exangle { out, .. }
        | Command::Quotient { out, .. }
        | Command::Verify { out, .. }
        | Command::Rigid { out, .. }
        | Command::Mutate { out, .. }
        | Command::Emit { out, .. } => out,
        Command::Count { .. } => return None,
    };
    out.out.clone()
}

fn execute(command: Command) -> Result<Outcome> {
    match command {
        Command::Objects { model, out } => {
            let model = model.build()?;
            Ok(Outcome::ok(match format_of(&out, "text", &["text", "json"])?.as_str() {
                "json" => json_text(&model.descriptor()),
                _ => lines(model.objects().iter().map(IndexTuple::label)),
            }))
        }
        Command::Hom { model, pair, out } => table_or_pair(&model.build()?, pair, &out, true),
        Command::Ext { model, pair, out } => table_or_pair(&model.build()?, pair, &out, false),
        Command::Exangle { model, from, to, out } => {
            let model = model.build()?;
            let e = realize(&model, &from, &to)?;
            let format: Format = format_of(&out, "json", &["json", "dot", "tikz"])?.parse()?;
            Ok(Outcome::ok(emit::emit_exangle(&e, format)))
        }
        Command::Quotient { model, out } => {
            let model = model.build()?;
            let ideal = match model.kind() {
                ModelKind::Module => projinj_ideal(&model)?,
                ModelKind::RelativeF => injproj_ideal(&model)?,
                _ => {
                    return Err(Error::WrongModelKind { expected: "module or relative-f", got: model.name() });
                }
            };
            let q = quotient(&model, &ideal);
            Ok(Outcome::ok(match format_of(&out, "text", &["text", "json"])?.as_str() {
                "json" => json_text(&q.to_json()),
                _ => lines(q.objects().iter().map(IndexTuple::label)),
            }))
        }
        Command::Verify { theorem, grid, d, n, model, window, out } => {
            let theorem = TheoremId::from(theorem);
            let format = format_of(&out, "text", &["text", "json"])?;
            let run = match (d, n) {
                (Some(d), Some(n)) => {
                    let reports = match (theorem, model) {
                        (TheoremId::Sanity, Some(kind)) => {
                            vec![verify_model_sanity(&build_model(kind, d, n, window)?)?]
                        }
                        (_, Some(_)) => {
                            return Err(Error::InvalidParameters("--model only applies to --theorem sanity".into()))
                        }
                        _ => run_theorem(theorem, d, n)?,
                    };
                    GridRun { theorem, grid: grid.unwrap_or_default(), reports, skipped: Vec::new() }
                }
                _ => {
                    if model.is_some() || window.is_some() {
                        return Err(Error::InvalidParameters("--model and --window need --d and --n".into()));
                    }
                    let grid = match grid {
                        Some(g) => g,
                        None => Grid::from_env()?,
                    };
                    run_grid(theorem, &grid)?
                }
            };
            let text = if format == "json" { json_text(&run.to_json()) } else { summary_table(&run) };
            Ok(Outcome { text, success: run.passed() })
        }
        Command::Rigid { model, set, out } => {
            let model = model.build()?;
            let format = format_of(&out, "text", &["text", "json"])?;
            if let Some(set) = set {
                let rigid = is_rigid(&model, &RigidSet::new(set))?;
                return Ok(Outcome::ok(if format == "json" {
                    json_text(&serde_json::json!({ "rigid": rigid }))
                } else {
                    format!("{rigid}\n")
                }));
            }
            let sets = maximal_rigid(&model);
            Ok(Outcome::ok(if format == "json" {
                json_text(&serde_json::to_value(&sets)?)
            } else {
                lines(sets.iter().map(RigidSet::label))
            }))
        }
        Command::Mutate { model, set, at, out } => {
            let model = model.build()?;
            let t = RigidSet::new(set);
            let result = mutate(&model, &t, &at)?;
            let format = format_of(&out, "text", &["text", "json"])?;
            if format == "json" {
                let exangles: Vec<_> = exchange_exangles(&model, &t, &at)?.iter().map(|e| e.to_json()).collect();
                return Ok(Outcome::ok(json_text(&serde_json::json!({
                    "from": t,
                    "at": at,
                    "result": result,
                    "exchange_exangles": exangles,
                }))));
            }
            Ok(Outcome::ok(match result {
                Some(u) => format!("{}\n", u.label()),
                None => "none\n".to_string(),
            }))
        }
        Command::Emit { content, model, arrows, from, to, theorem, grid, out } => {
            let format: Format = format_of(&out, "dot", &["dot", "tikz", "json"])?.parse()?;
            let policy = match arrows {
                ArrowArg::Irreducible => ArrowPolicy::Irreducible,
                ArrowArg::All => ArrowPolicy::All,
            };
            let text = match Content::from(content) {
                Content::Quiver => emit::emit_quiver(&build_quiver(model.d, model.n)?, format),
                Content::Category => emit::emit_category(&model.build()?, format, policy),
                Content::MutationGraph => emit::emit_mutation_graph(&mutation_graph(&model.build()?)?, format),
                Content::Exangle => {
                    let (Some(from), Some(to)) = (from, to) else {
                        return Err(Error::InvalidEmit("exangle content needs --from and --to".into()));
                    };
                    emit::emit_exangle(&realize(&model.build()?, &from, &to)?, format)
                }
                Content::Report => {
                    let theorem = theorem.ok_or_else(|| Error::InvalidEmit("report content needs --theorem".into()))?;
                    let grid = match grid {
                        Some(g) => g,
                        None => Grid::from_env()?,
                    };
                    emit::emit_report(&run_grid(theorem.into(), &grid)?, format)?
                }
            };
            Ok(Outcome::ok(text))
        }
        Command::Count { model, what } => {
            let model = model.build()?;
            let count = match what {
                CountArg::Objects => model.len(),
                CountArg::Rigid => maximal_rigid(&model).len(),
            };
            Ok(Outcome::ok(format!("{count}\n")))
        }
    }
}

fn table_or_pair(model: &CategoryModel, pair: PairArgs, out: &OutArgs, hom: bool) -> Result<Outcome> {
    let format = format_of(out, "text", &["text", "json"])?;
    if let (Some(from), Some(to)) = (pair.from, pair.to) {
        let dim = if hom { model.hom_dim(&from, &to)? } else { model.ext_dim(&from, &to)? };
        return Ok(Outcome::ok(if format == "json" {
            json_text(&serde_json::json!({ "from": from, "to": to, "dim": dim }))
        } else {
            format!("{dim}\n")
        }));
    }
    let table = if hom { model.hom_table() } else { model.ext_table() };
    Ok(Outcome::ok(if format == "json" {
        json_text(&serde_json::to_value(&table)?)
    } else {
        lines(table.iter().map(|(k, v)| format!("{k}: {}", v.join(" "))))
    }))
}

fn summary_table(run: &GridRun) -> String {
    let width = run.reports.iter().map(|r| r.subject.len()).max().unwrap_or(7).max(7);
    let mut out =
        format!("{:<14} {:<width$} {:>2} {:>2}  {:<6} {:>9}\n", "theorem", "subject", "d", "n", "result", "seconds");
    for r in &run.reports {
        out.push_str(&format!(
            "{:<14} {:<width$} {:>2} {:>2}  {:<6} {:>9.3}\n",
            r.theorem.name(),
            r.subject,
            r.d,
            r.n,
            if r.passed { "pass" } else { "FAIL" },
            r.seconds
        ));
        if let Some(c) = &r.counterexample {
            out.push_str(&format!("    counterexample: {c}\n"));
        }
    }
    for s in &run.skipped {
        out.push_str(&format!("skipped: {s}\n"));
    }
    let passed = run.reports.iter().filter(|r| r.passed).count();
    out.push_str(&format!("{passed} of {} passed\n", run.reports.len()));
    out
}
