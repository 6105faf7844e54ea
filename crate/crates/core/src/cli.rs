//! The `dgroup` command line: `analyze`, `catalog`, `graph` and `verify`.
//!
//! Exit codes: 0 success, 1 internal error, 2 input or contract violation,
//! 3 verification failure.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

use crate::actions::{all_block_systems, DEFAULT_INDEX_CAP, DEFAULT_ORDER_CAP};
use crate::catalog::{
    build, expectation_rows, format_params, parse_params, verify_entry, CatalogEntry, EntryMetadata, Params,
    DGROUP_CORPUS, ENTRIES,
};
use crate::classifier::{analyze, AnalysisReport, AnalyzeOptions, Caps};
use crate::error::Error;
use crate::group::GroupHandle;
use crate::orbital::{orbital_graph, shape, suborbit_graphs, OrbitalGraph};
use crate::regular::{detect, verify_witness};

pub const SCHEMA_VERSION: u32 = 1;

pub const EXIT_OK: i32 = 0;
pub const EXIT_INTERNAL: i32 = 1;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_VERIFY: i32 = 3;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Input(String),
    #[error("{0}")]
    Internal(String),
    #[error("{0}")]
    Verification(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            Self::Input(_) => EXIT_INPUT,
            Self::Internal(_) => EXIT_INTERNAL,
            Self::Verification(_) => EXIT_VERIFY,
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::InvariantViolation(_) => Self::Internal(e.to_string()),
            _ => Self::Input(e.to_string()),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        Self::Input(e.to_string())
    }
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> Self {
        Self::Internal(e.to_string())
    }
}

type CliResult<T> = std::result::Result<T, CliError>;

#[derive(Parser, Debug)]
#[command(name = "dgroup", version, about = "Regular cyclic and dihedral subgroups of permutation groups")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Classify a group given in the group file format.
    Analyze(AnalyzeArgs),
    /// List or build the named example groups.
    Catalog(CatalogArgs),
    /// Orbital graphs of a group, with shape summaries and DOT export.
    Graph(GraphArgs),
    /// Run the lemma and table suites over the shipped entries.
    Verify(VerifyArgs),
}

#[derive(Args, Debug, Clone, Copy)]
pub struct CapArgs {
    /// Largest group order enumerated element by element.
    #[arg(long, default_value_t = DEFAULT_ORDER_CAP)]
    pub cap_order: u128,
    /// Largest coset index acted on.
    #[arg(long, default_value_t = DEFAULT_INDEX_CAP)]
    pub cap_index: u128,
}

impl CapArgs {
    fn caps(self) -> Caps {
        Caps {
            order: self.cap_order,
            index: self.cap_index,
        }
    }
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Json,
    Text,
}

#[derive(Args, Debug)]
pub struct AnalyzeArgs {
    pub input: PathBuf,
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Exit with status 2 unless the group contains a regular dihedral subgroup.
    #[arg(long)]
    pub require_dgroup: bool,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Record wall-clock time in the report (makes output nondeterministic).
    #[arg(long)]
    pub timing: bool,
    /// Do not read the witness from a metadata sidecar next to the input.
    #[arg(long)]
    pub ignore_sidecar: bool,
    #[command(flatten)]
    pub caps: CapArgs,
}

#[derive(Args, Debug)]
#[command(group = clap::ArgGroup::new("mode").required(true).args(["list", "build"]))]
pub struct CatalogArgs {
    #[arg(long)]
    pub list: bool,
    /// Entry id to build.
    #[arg(long, value_name = "ID")]
    pub build: Option<String>,
    /// Comma-separated `key=value` parameters.
    #[arg(long, default_value = "")]
    pub params: String,
    /// Group file to write; a `.json` metadata sidecar is written beside it.
    #[arg(long, requires = "build")]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug)]
#[command(group = clap::ArgGroup::new("which").required(true).args(["pair", "all_suborbits"]))]
pub struct GraphArgs {
    pub input: PathBuf,
    /// Base arc as two 1-based points, e.g. `1,2`.
    #[arg(long, value_name = "A,B")]
    pub pair: Option<String>,
    /// One graph per nontrivial suborbit of point 1.
    #[arg(long)]
    pub all_suborbits: bool,
    /// DOT output: a file with `--pair`, a directory with `--all-suborbits`.
    #[arg(long)]
    pub dot: Option<PathBuf>,
    #[command(flatten)]
    pub caps: CapArgs,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum Suite {
    Lemmas,
    Tables,
    All,
}

#[derive(Args, Debug)]
pub struct VerifyArgs {
    #[arg(long, value_enum, default_value_t = Suite::All)]
    pub suite: Suite,
    /// Entries of larger order are reported as skipped.
    #[arg(long)]
    pub max_order: Option<u128>,
    #[command(flatten)]
    pub caps: CapArgs,
}

/// What was analyzed.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct InputDescriptor {
    pub path: String,
    pub degree: usize,
    pub generators: usize,
    /// Metadata sidecar read next to the input, if any.
    pub sidecar: Option<String>,
    /// Whether the regular dihedral witness came from the sidecar.
    pub sidecar_witness: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Timing {
    pub analysis_micros: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReportDocument {
    pub schema_version: u32,
    pub input: InputDescriptor,
    pub report: AnalysisReport,
    pub timing: Option<Timing>,
    /// Warnings raised by the front end itself; analysis warnings live in
    /// the report.
    pub warnings: Vec<String>,
}

impl ReportDocument {
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    pub fn render_text(&self) -> String {
        let mut s = self.report.summary();
        for w in &self.warnings {
            let _ = writeln!(s, "warning: {w}");
        }
        if let Some(t) = &self.timing {
            let _ = writeln!(s, "analysis time: {} us", t.analysis_micros);
        }
        s
    }
}

/// Path of the metadata sidecar belonging to a group file.
pub fn sidecar_path(group_file: &Path) -> PathBuf {
    let mut name = group_file.as_os_str().to_owned();
    name.push(".json");
    PathBuf::from(name)
}

/// Parses arguments and runs the command. Returns the process exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                let _ = write!(err, "{text}");
                EXIT_INPUT
            } else {
                let _ = write!(out, "{text}");
                EXIT_OK
            };
        }
    };
    let result = match cli.command {
        Command::Analyze(a) => cmd_analyze(&a, out, err),
        Command::Catalog(a) => cmd_catalog(&a, out),
        Command::Graph(a) => cmd_graph(&a, out),
        Command::Verify(a) => cmd_verify(&a, out),
    };
    match result {
        Ok(()) => EXIT_OK,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.exit_code()
        }
    }
}

fn read_group(path: &Path) -> CliResult<GroupHandle> {
    let text = fs::read_to_string(path).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
    GroupHandle::from_group_file(&text).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
}

fn input_id(path: &Path) -> String {
    path.file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| path.display().to_string())
}

pub fn cmd_analyze(args: &AnalyzeArgs, out: &mut dyn Write, err: &mut dyn Write) -> CliResult<()> {
    let doc = analyze_document(args)?;
    if args.require_dgroup && !doc.report.class.is_d_group() {
        return Err(CliError::Input(format!(
            "{}: not a d-group (class {})",
            args.input.display(),
            doc.report.class.label()
        )));
    }
    let rendered = match args.format {
        Format::Json => doc.to_json(),
        Format::Text => doc.render_text(),
    };
    match &args.out {
        Some(path) => {
            fs::write(path, rendered)?;
            writeln!(err, "wrote {}", path.display())?;
        }
        None => out.write_all(rendered.as_bytes())?,
    }
    Ok(())
}

/// Runs the analysis behind `analyze` and wraps it in a document.
pub fn analyze_document(args: &AnalyzeArgs) -> CliResult<ReportDocument> {
    let group = read_group(&args.input)?;
    let mut warnings = Vec::new();
    let mut options = AnalyzeOptions {
        caps: args.caps.caps(),
        witness: None,
    };
    let mut sidecar = None;
    let side = sidecar_path(&args.input);
    if !args.ignore_sidecar && side.exists() {
        let meta: Option<EntryMetadata> = fs::read_to_string(&side).ok().and_then(|t| serde_json::from_str(&t).ok());
        match meta {
            Some(m) if m.degree == group.degree() => {
                // Only a verified dihedral witness is carried over.
                sidecar = Some(side.display().to_string());
                options.witness = m.witness.filter(|w| w.z.is_some() && verify_witness(&group, w).is_valid());
            }
            _ => warnings.push(format!("ignored unreadable or mismatched sidecar {}", side.display())),
        }
    }
    let start = Instant::now();
    let report = analyze(&group, &input_id(&args.input), &options)?;
    let elapsed = start.elapsed();
    Ok(ReportDocument {
        schema_version: SCHEMA_VERSION,
        input: InputDescriptor {
            path: args.input.display().to_string(),
            degree: group.degree(),
            generators: group.generators().len(),
            sidecar,
            sidecar_witness: options.witness.is_some(),
        },
        report,
        timing: args.timing.then(|| Timing {
            analysis_micros: elapsed.as_micros() as u64,
        }),
        warnings,
    })
}

pub fn cmd_catalog(args: &CatalogArgs, out: &mut dyn Write) -> CliResult<()> {
    if args.list {
        out.write_all(catalog_listing().as_bytes())?;
        return Ok(());
    }
    let id = args.build.as_deref().expect("clap requires --list or --build");
    let params = parse_params(&args.params)?;
    let entry = build(id, &params)?;
    let file = entry.group.to_group_file();
    match &args.out {
        Some(path) => {
            fs::write(path, &file)?;
            let side = sidecar_path(path);
            let mut meta = serde_json::to_string_pretty(&entry.metadata())?;
            meta.push('\n');
            fs::write(&side, meta)?;
            writeln!(
                out,
                "built {}: degree {}, order {}\nwrote {}\nwrote {}",
                entry.label(),
                entry.group.degree(),
                entry.group.order(),
                path.display(),
                side.display()
            )?;
        }
        None => out.write_all(file.as_bytes())?,
    }
    Ok(())
}

/// Ids, parameter schemas and expected metadata of every entry.
pub fn catalog_listing() -> String {
    let rows = expectation_rows();
    let mut s = String::new();
    for info in ENTRIES {
        let _ = writeln!(s, "{}: {}", info.id, info.summary);
        for p in info.params {
            let _ = writeln!(s, "    {} ({}), default {}", p.name, p.constraint, p.default);
        }
        for row in rows.iter().filter(|r| r.id == info.id) {
            let mut parts = Vec::new();
            if let Some(c) = row.class {
                parts.push(format!("class {}", c.label()));
            }
            if let Some(p) = row.primitive {
                parts.push(if p { "primitive".into() } else { "imprimitive".into() });
            }
            if let Some(m) = row.minimal_systems.filter(|&m| m > 0) {
                parts.push(format!("{m} minimal block system(s)"));
            }
            for sys in &row.system {
                let count = if sys.count > 1 { format!("{} x ", sys.count) } else { String::new() };
                parts.push(format!(
                    "{count}blocks of size {} with |K| = {} (cases {:?})",
                    sys.block_size, sys.kernel_order, sys.holds
                ));
            }
            let label = if row.params.is_empty() { "-".to_string() } else { format_params(&row.params) };
            let _ = writeln!(s, "    expected [{label}]: {}", parts.join(", "));
        }
    }
    s
}

fn parse_pair(text: &str, degree: usize) -> CliResult<(usize, usize)> {
    let bad = || CliError::Input(format!("--pair expects two points `a,b`, found {text:?}"));
    let (a, b) = text.split_once(',').ok_or_else(bad)?;
    let a: usize = a.trim().parse().map_err(|_| bad())?;
    let b: usize = b.trim().parse().map_err(|_| bad())?;
    for p in [a, b] {
        if p == 0 || p > degree {
            return Err(Error::PointOutOfRange { point: p, degree }.into());
        }
    }
    Ok((a - 1, b - 1))
}

/// One-line description of a graph's shape, naming the coarsest block
/// system it is a lexicographic blowup over.
pub fn describe_graph(graph: &OrbitalGraph, systems: &[crate::actions::BlockSystem]) -> String {
    let base = shape(graph, None);
    let mut parts = vec![
        if base.connected { "connected" } else { "disconnected" }.to_string(),
        if base.self_paired { "self-paired" } else { "NOT self-paired" }.to_string(),
    ];
    if let Some((m, _)) = base.complete_bipartite {
        parts.push(format!("complete bipartite K_{{{m},{m}}}"));
    }
    if let Some(sys) = systems
        .iter()
        .filter(|s| shape(graph, Some(s)).lex_blowup_of.is_some())
        .max_by_key(|s| s.block_count())
    {
        parts.push(format!("lex blowup of {}-block system", sys.block_count()));
    }
    parts.join(", ")
}

pub fn cmd_graph(args: &GraphArgs, out: &mut dyn Write) -> CliResult<()> {
    let group = read_group(&args.input)?;
    let detection = detect(&group, args.caps.cap_order)?;
    writeln!(out, "class: {}", detection.class.label())?;
    let systems: Vec<_> = all_block_systems(&group)?.into_iter().filter(|s| !s.is_trivial()).collect();
    let name = input_id(&args.input);
    if let Some(pair) = &args.pair {
        let arc = parse_pair(pair, group.degree())?;
        let graph = orbital_graph(&group, arc)?;
        writeln!(
            out,
            "pair {},{}: {} arcs; {}",
            arc.0 + 1,
            arc.1 + 1,
            graph.arc_count,
            describe_graph(&graph, &systems)
        )?;
        if let Some(path) = &args.dot {
            fs::write(path, graph.to_dot(&name))?;
            writeln!(out, "wrote {}", path.display())?;
        }
        return Ok(());
    }
    if let Some(dir) = &args.dot {
        fs::create_dir_all(dir)?;
    }
    for (suborbit, graph) in suborbit_graphs(&group, 0)? {
        writeln!(
            out,
            "suborbit of {} (size {}): {} arcs; {}",
            suborbit[0] + 1,
            suborbit.len(),
            graph.arc_count,
            describe_graph(&graph, &systems)
        )?;
        if let Some(dir) = &args.dot {
            let path = dir.join(format!("{name}_1_{}.dot", suborbit[0] + 1));
            fs::write(&path, graph.to_dot(&format!("{name}_1_{}", suborbit[0] + 1)))?;
            writeln!(out, "wrote {}", path.display())?;
        }
    }
    Ok(())
}

/// Outcome of one verify row.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RowOutcome {
    Pass(String),
    Fail(Vec<String>),
    Skipped(String),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VerifyRow {
    pub suite: &'static str,
    pub label: String,
    pub outcome: RowOutcome,
}

/// Table rows: (id, params, expected class flag checked, expected stabilizer order).
const TABLE_ROWS: &[(&str, &[(&str, u64)], TableClaim, u128)] = &[
    ("sym", &[("n", 4)], TableClaim::Dihedral, 6),
    ("alt", &[("n", 4)], TableClaim::Dihedral, 3),
    ("psl27", &[], TableClaim::Dihedral, 21),
    ("pgl2q", &[("q", 5)], TableClaim::Cyclic, 20),
    ("pgl2q", &[("q", 7)], TableClaim::Cyclic, 42),
    ("pgl2q", &[("q", 11)], TableClaim::Cyclic, 110),
    ("m11", &[], TableClaim::Cyclic, 720),
];

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum TableClaim {
    Cyclic,
    Dihedral,
}

fn table_row(id: &str, params: &Params, claim: TableClaim, stabilizer: u128, caps: Caps) -> CliResult<RowOutcome> {
    let entry = build(id, params)?;
    let g = &entry.group;
    let mut failures = Vec::new();
    let stab = g.point_stabilizer(0)?.order();
    if stab != stabilizer {
        failures.push(format!("point stabilizer order {stab}, expected {stabilizer}"));
    }
    let detection = detect(g, caps.order)?;
    let witness = match claim {
        TableClaim::Cyclic => detection.cyclic,
        TableClaim::Dihedral => detection.dihedral,
    };
    let kind = if claim == TableClaim::Cyclic { "cyclic" } else { "dihedral" };
    match witness {
        None => failures.push(format!("no regular {kind} subgroup found")),
        Some(w) => {
            let check = verify_witness(g, &w);
            if !check.is_valid() {
                failures.push(format!("witness fails: {}", check.diagnostics.join(", ")));
            }
            if w.subgroup_order != g.degree() as u128 {
                failures.push(format!("witness of order {} on {} points", w.subgroup_order, g.degree()));
            }
        }
    }
    Ok(if failures.is_empty() {
        RowOutcome::Pass(format!("regular {kind} subgroup verified, stabilizer order {stab}"))
    } else {
        RowOutcome::Fail(failures)
    })
}

fn lemma_row(entry: &CatalogEntry, caps: Caps) -> CliResult<RowOutcome> {
    let checks = verify_entry(entry, caps)?;
    let failed: Vec<String> = checks
        .iter()
        .filter(|c| !c.passed)
        .map(|c| format!("{}: {}", c.name, c.detail))
        .collect();
    Ok(if failed.is_empty() {
        RowOutcome::Pass(format!("{} checks", checks.len()))
    } else {
        RowOutcome::Fail(failed)
    })
}

fn over_cap(order: u128, max: Option<u128>) -> Option<RowOutcome> {
    max.filter(|&m| order > m)
        .map(|m| RowOutcome::Skipped(format!("order {order} exceeds --max-order {m}")))
}

/// Runs the selected suites. Rows are evaluated in parallel and reported in
/// a fixed order.
pub fn verify_rows(suite: Suite, max_order: Option<u128>, caps: Caps) -> Vec<VerifyRow> {
    type Job = Box<dyn Fn() -> (String, RowOutcome) + Send + Sync>;
    let mut jobs: Vec<(&'static str, Job)> = Vec::new();
    if matches!(suite, Suite::Tables | Suite::All) {
        for &(id, pairs, claim, stab) in TABLE_ROWS {
            jobs.push((
                "tables",
                Box::new(move || {
                    let params: Params = pairs.iter().map(|(k, v)| (k.to_string(), *v)).collect();
                    let label = if params.is_empty() { id.to_string() } else { format!("{id} {}", format_params(&params)) };
                    let outcome = match build(id, &params) {
                        Ok(e) => over_cap(e.group.order(), max_order)
                            .unwrap_or_else(|| table_row(id, &params, claim, stab, caps).unwrap_or_else(|e| RowOutcome::Fail(vec![e.to_string()]))),
                        Err(e) => RowOutcome::Fail(vec![e.to_string()]),
                    };
                    (label, outcome)
                }),
            ));
        }
    }
    if matches!(suite, Suite::Lemmas | Suite::All) {
        for &(id, pairs) in DGROUP_CORPUS {
            jobs.push((
                "lemmas",
                Box::new(move || {
                    let params: Params = pairs.iter().map(|(k, v)| (k.to_string(), *v)).collect();
                    match build(id, &params) {
                        Ok(e) => {
                            let outcome = over_cap(e.group.order(), max_order)
                                .unwrap_or_else(|| lemma_row(&e, caps).unwrap_or_else(|err| RowOutcome::Fail(vec![err.to_string()])));
                            (e.label(), outcome)
                        }
                        Err(err) => (id.to_string(), RowOutcome::Fail(vec![err.to_string()])),
                    }
                }),
            ));
        }
    }
    std::thread::scope(|scope| {
        let handles: Vec<_> = jobs
            .iter()
            .map(|(suite, job)| (*suite, scope.spawn(move || job())))
            .collect();
        handles
            .into_iter()
            .map(|(suite, h)| {
                let (label, outcome) = h
                    .join()
                    .unwrap_or_else(|_| ("?".into(), RowOutcome::Fail(vec!["verification panicked".into()])));
                VerifyRow { suite, label, outcome }
            })
            .collect()
    })
}

pub fn cmd_verify(args: &VerifyArgs, out: &mut dyn Write) -> CliResult<()> {
    let rows = verify_rows(args.suite, args.max_order, args.caps.caps());
    let (mut passed, mut failed, mut skipped) = (0, 0, 0);
    for row in &rows {
        match &row.outcome {
            RowOutcome::Pass(detail) => {
                passed += 1;
                writeln!(out, "pass     {:<7} {}: {detail}", row.suite, row.label)?;
            }
            RowOutcome::Skipped(detail) => {
                skipped += 1;
                writeln!(out, "skipped  {:<7} {}: {detail}", row.suite, row.label)?;
            }
            RowOutcome::Fail(details) => {
                failed += 1;
                writeln!(out, "FAIL     {:<7} {}", row.suite, row.label)?;
                for d in details {
                    writeln!(out, "         {d}")?;
                }
            }
        }
    }
    writeln!(out, "{passed} passed, {failed} failed, {skipped} skipped")?;
    if failed > 0 {
        return Err(CliError::Verification(format!("{failed} verification row(s) failed")));
    }
    Ok(())
}
