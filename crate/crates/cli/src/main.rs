//! Command line driver for the temporal betweenness toolkit.
//!
//! Four subcommands: `compute` writes per-vertex scores as CSV, `compare`
//! reports pairwise rank agreement between variants, `oracle-check`
//! verifies an engine against the exact enumeration oracle, and `gadget`
//! emits the reduction gadgets together with their identity reports.
//!
//! Data goes to standard output or `--output`; timings and diagnostics go
//! to standard error so the CSV streams stay machine readable. With a
//! fixed configuration and `--threads 1` the output is byte identical
//! across runs. Exit codes: 0 success, 1 usage error, 2 data error,
//! 3 verification failure.

use std::collections::HashMap;
use std::fmt::Write as _;
use std::fs;
use std::io::Read as _;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};

use tempo_btw::analysis::{histogram, kendall_tau, top_k_intersection, Ranking};
use tempo_btw::brandes::{betweenness_prefix_foremost_par_with, betweenness_shortest_par_with};
use tempo_btw::expansion::betweenness_via_expansion_par_with;
use tempo_btw::gen::random_bipartite;
use tempo_btw::io::{
    format_score, parse_edge_list, serialize_edge_list, EdgeListFormat, ParseOptions,
};
use tempo_btw::numeric::{rational_to_f64, Exact, Float64, NumMode};
use tempo_btw::oracle::{self, EnumLimits};
use tempo_btw::{Criterion, Optimality, TemporalGraph, ORACLE_TOLERANCE};

/// Environment variable overriding the oracle guards, as
/// `max_vertices,max_paths`. The `--max-paths` flag wins over it.
const LIMITS_ENV: &str = "TEMPO_BTW_LIMITS";

#[derive(Parser)]
#[command(
    name = "tempo-btw",
    version,
    about = "Temporal betweenness centrality: engines, rank comparison, oracle checks, gadgets"
)]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Compute per-vertex betweenness scores as CSV.
    Compute(ComputeArgs),
    /// Compute several variants and compare their rankings pairwise.
    Compare(CompareArgs),
    /// Check engine scores against the exact enumeration oracle.
    OracleCheck(OracleCheckArgs),
    /// Emit a reduction gadget graph plus its identity report.
    Gadget(GadgetArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum FormatArg {
    /// Lines are `u v t`.
    Uvt,
    /// Lines are `t u v`.
    Tuv,
}

impl From<FormatArg> for EdgeListFormat {
    fn from(f: FormatArg) -> EdgeListFormat {
        match f {
            FormatArg::Uvt => EdgeListFormat::Uvt,
            FormatArg::Tuv => EdgeListFormat::Tuv,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum VariantArg {
    /// Fewest transitions.
    Sh,
    /// Fewest transitions among the earliest arrivals.
    Shfm,
    /// Greedily earliest arrival along every prefix (strict labels only).
    Pfm,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum EngineArg {
    /// Appearance-level traversal of the temporal graph.
    Temporal,
    /// Layered static expansion plus weighted counting.
    Expansion,
    /// Exhaustive path enumeration in exact arithmetic (small graphs).
    Oracle,
}

impl EngineArg {
    fn token(self) -> &'static str {
        match self {
            EngineArg::Temporal => "temporal",
            EngineArg::Expansion => "expansion",
            EngineArg::Oracle => "oracle",
        }
    }
}

#[derive(Args)]
struct InputArgs {
    /// Edge list file; pass - to read standard input.
    input: PathBuf,

    /// Column order of the input triples.
    #[arg(long, value_enum, default_value_t = FormatArg::Uvt)]
    format: FormatArg,

    /// Treat repeated time edges as a data error instead of collapsing them.
    #[arg(long)]
    no_dedupe: bool,

    /// Keep raw timestamps as labels verbatim (they must be positive)
    /// instead of compacting them to 1..=T.
    #[arg(long)]
    no_normalize: bool,
}

#[derive(Args)]
struct VariantArgs {
    /// Variant to compute; repeat the flag for several. Defaults to every
    /// variant the strictness selection supports.
    #[arg(long = "variant", value_enum)]
    variants: Vec<VariantArg>,

    /// Restrict to strict labels (labels strictly increase along paths).
    #[arg(long, conflicts_with = "nonstrict")]
    strict: bool,

    /// Restrict to non-strict labels (equal consecutive labels allowed).
    #[arg(long)]
    nonstrict: bool,
}

#[derive(Args)]
struct EngineArgs {
    /// Score engine.
    #[arg(long, value_enum, default_value_t = EngineArg::Temporal)]
    engine: EngineArg,

    /// Use exact rational arithmetic internally; output stays decimal.
    #[arg(long)]
    exact: bool,

    /// Worker threads for per-source parallelism.
    #[arg(long, default_value_t = 1)]
    threads: usize,

    /// Path budget for the enumeration oracle; overrides TEMPO_BTW_LIMITS.
    #[arg(long)]
    max_paths: Option<usize>,
}

#[derive(Args)]
struct ComputeArgs {
    #[command(flatten)]
    input: InputArgs,
    #[command(flatten)]
    variants: VariantArgs,
    #[command(flatten)]
    engine: EngineArgs,
    /// Write the CSV here instead of standard output.
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct CompareArgs {
    #[command(flatten)]
    input: InputArgs,
    #[command(flatten)]
    variants: VariantArgs,
    #[command(flatten)]
    engine: EngineArgs,
    /// Ranking depth for the intersection row; clamped to the vertex count.
    #[arg(long, default_value_t = 10)]
    top_k: usize,
    /// Append a per-variant score histogram with this many buckets.
    #[arg(long)]
    buckets: Option<usize>,
    /// Compute tau over the vertices with nonzero scores in both variants
    /// of a pair (the intersection row still uses the full rankings).
    #[arg(long)]
    nonzero_only: bool,
    /// Write the CSV here instead of standard output.
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct OracleCheckArgs {
    #[command(flatten)]
    input: InputArgs,
    #[command(flatten)]
    variants: VariantArgs,
    #[command(flatten)]
    engine: EngineArgs,
    /// Write the report here instead of standard output.
    #[arg(long)]
    output: Option<PathBuf>,
    /// Perturb the first engine score before comparing (negative control
    /// for the check itself).
    #[arg(long, hide = true)]
    inject_error: bool,
}

#[derive(Args)]
struct GadgetArgs {
    #[command(subcommand)]
    kind: GadgetKind,
}

#[derive(Subcommand)]
enum GadgetKind {
    /// Temporal gadget whose strict source-sink path count equals the
    /// number of matchings of a seeded bipartite graph minus one.
    Matching(MatchingArgs),
    /// Probe-vertex gadget whose dependency statistic recovers the number
    /// of source-target paths of an input graph.
    Probe(ProbeArgs),
}

#[derive(Args)]
struct MatchingArgs {
    /// Seed for the random bipartite instance.
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// Largest side size of the bipartite instance.
    #[arg(long, default_value_t = 4)]
    max_side: usize,
    /// Column order of the emitted edge list.
    #[arg(long, value_enum, default_value_t = FormatArg::Uvt)]
    format: FormatArg,
    /// Write the gadget edge list here; the report then goes to standard
    /// output alone. Without it both are printed, separated by one blank
    /// line.
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct ProbeArgs {
    #[command(flatten)]
    input: InputArgs,
    /// Source vertex name in the input graph.
    #[arg(long)]
    source: String,
    /// Target vertex name in the input graph.
    #[arg(long)]
    target: String,
    /// Report the strict mode only.
    #[arg(long, conflicts_with = "nonstrict")]
    strict: bool,
    /// Report the non-strict mode only.
    #[arg(long)]
    nonstrict: bool,
    /// Path budget for the enumeration oracle; overrides TEMPO_BTW_LIMITS.
    #[arg(long)]
    max_paths: Option<usize>,
    /// Write the gadget edge list here; the report then goes to standard
    /// output alone.
    #[arg(long)]
    output: Option<PathBuf>,
}

/// Errors mapped to process exit codes.
#[derive(Debug)]
enum CliError {
    /// Exit 1: flags that cannot be combined or malformed settings.
    Usage(String),
    /// Exit 2: unreadable or invalid input data, or a blown resource guard.
    Data(String),
    /// Exit 3: a verification run found a real deviation.
    Verify(String),
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 1,
            CliError::Data(_) => 2,
            CliError::Verify(_) => 3,
        }
    }

    fn message(&self) -> &str {
        match self {
            CliError::Usage(m) | CliError::Data(m) | CliError::Verify(m) => m,
        }
    }
}

fn data_err(e: tempo_btw::Error) -> CliError {
    CliError::Data(e.to_string())
}

/// A fully resolved compute-style run: parsed graph, validated variant
/// list, engine selection, arithmetic mode, parallelism, oracle limits,
/// and the output target.
struct RunConfig {
    graph: TemporalGraph,
    variants: Vec<Criterion>,
    engine: EngineArg,
    exact: bool,
    threads: usize,
    limits: EnumLimits,
    output: Option<PathBuf>,
}

/// Expands the variant and strictness flags into concrete criteria, in
/// the canonical reporting order (non-strict before strict, prefix-
/// foremost last). Explicitly asking for pfm together with --nonstrict
/// is a usage error; by default pfm simply only exists on the strict
/// side.
fn resolve_variants(args: &VariantArgs) -> Result<Vec<Criterion>, CliError> {
    let modes: &[bool] = if args.strict {
        &[true]
    } else if args.nonstrict {
        &[false]
    } else {
        &[false, true]
    };
    let opts: Vec<VariantArg> = if args.variants.is_empty() {
        if args.nonstrict {
            vec![VariantArg::Sh, VariantArg::Shfm]
        } else {
            vec![VariantArg::Sh, VariantArg::Shfm, VariantArg::Pfm]
        }
    } else {
        let mut seen = Vec::new();
        for &v in &args.variants {
            if !seen.contains(&v) {
                seen.push(v);
            }
        }
        seen
    };
    if args.nonstrict && opts.contains(&VariantArg::Pfm) {
        return Err(CliError::Usage(
            "prefix-foremost scores are defined for strict labels; drop --nonstrict or the pfm variant".into(),
        ));
    }
    let mut out = Vec::new();
    for &strict in modes {
        for &o in &opts {
            match o {
                VariantArg::Sh => out.push(Criterion::shortest(strict)),
                VariantArg::Shfm => out.push(Criterion::shortest_foremost(strict)),
                VariantArg::Pfm if strict => out.push(Criterion::prefix_foremost()),
                VariantArg::Pfm => {}
            }
        }
    }
    Ok(out)
}

/// Parses a `max_vertices,max_paths` override.
fn parse_limits_spec(spec: &str) -> Result<EnumLimits, String> {
    let parts: Vec<&str> = spec.split(',').map(str::trim).collect();
    if parts.len() != 2 {
        return Err(format!("expected max_vertices,max_paths, got {spec:?}"));
    }
    let max_vertices =
        parts[0].parse().map_err(|_| format!("invalid max_vertices {:?}", parts[0]))?;
    let max_paths = parts[1].parse().map_err(|_| format!("invalid max_paths {:?}", parts[1]))?;
    Ok(EnumLimits { max_vertices, max_paths })
}

fn resolve_limits(max_paths: Option<usize>) -> Result<EnumLimits, CliError> {
    let mut limits = EnumLimits::default();
    if let Ok(spec) = std::env::var(LIMITS_ENV) {
        limits = parse_limits_spec(&spec)
            .map_err(|m| CliError::Usage(format!("{LIMITS_ENV}: {m}")))?;
    }
    if let Some(mp) = max_paths {
        limits.max_paths = mp;
    }
    Ok(limits)
}

fn load_graph(args: &InputArgs) -> Result<TemporalGraph, CliError> {
    let text = if args.input.as_os_str() == "-" {
        let mut s = String::new();
        std::io::stdin()
            .read_to_string(&mut s)
            .map_err(|e| CliError::Data(format!("reading standard input: {e}")))?;
        s
    } else {
        fs::read_to_string(&args.input)
            .map_err(|e| CliError::Data(format!("reading {}: {e}", args.input.display())))?
    };
    let options = ParseOptions { dedupe: !args.no_dedupe, normalize: !args.no_normalize };
    let outcome = parse_edge_list(&text, args.format.into(), options).map_err(data_err)?;
    if outcome.self_loops_dropped > 0 || outcome.duplicates_removed > 0 {
        eprintln!(
            "input: dropped {} self loops, collapsed {} repeated edges",
            outcome.self_loops_dropped, outcome.duplicates_removed
        );
    }
    Ok(outcome.graph)
}

/// Validates flags before any computation and loads the graph.
fn build_run_config(
    input: &InputArgs,
    variants: &VariantArgs,
    engine: &EngineArgs,
    output: Option<PathBuf>,
) -> Result<RunConfig, CliError> {
    let variants = resolve_variants(variants)?;
    if engine.threads == 0 {
        return Err(CliError::Usage("--threads must be at least 1".into()));
    }
    if engine.engine == EngineArg::Expansion
        && variants.iter().any(|c| c.optimality() == Optimality::PrefixForemost)
    {
        return Err(CliError::Usage(
            "the expansion engine covers sh and shfm; compute pfm with --engine temporal".into(),
        ));
    }
    let limits = resolve_limits(engine.max_paths)?;
    let graph = load_graph(input)?;
    Ok(RunConfig {
        graph,
        variants,
        engine: engine.engine,
        exact: engine.exact,
        threads: engine.threads,
        limits,
        output,
    })
}

fn rationals_to_f64(values: &[<Exact as NumMode>::Score]) -> Vec<f64> {
    values.iter().map(rational_to_f64).collect()
}

fn temporal_pair(cfg: &RunConfig, strict: bool) -> (Vec<f64>, Vec<f64>) {
    if cfg.exact {
        let (sh, fm) = betweenness_shortest_par_with::<Exact>(&cfg.graph, strict, cfg.threads);
        (rationals_to_f64(&sh), rationals_to_f64(&fm))
    } else {
        betweenness_shortest_par_with::<Float64>(&cfg.graph, strict, cfg.threads)
    }
}

/// Runs the configured engine for every requested variant, reporting one
/// wall-clock line per variant on standard error. The temporal engine
/// produces sh and shfm of one strictness in a single pass, so the second
/// of such a pair is served from cache and times near zero.
fn computed_scores(cfg: &RunConfig, cmd: &str) -> Result<Vec<(Criterion, Vec<f64>)>, CliError> {
    let mut pair_cache: HashMap<bool, (Vec<f64>, Vec<f64>)> = HashMap::new();
    let mut out = Vec::new();
    for &c in &cfg.variants {
        let start = Instant::now();
        let scores: Vec<f64> = match cfg.engine {
            EngineArg::Temporal => match c.optimality() {
                Optimality::PrefixForemost => {
                    if cfg.exact {
                        rationals_to_f64(&betweenness_prefix_foremost_par_with::<Exact>(
                            &cfg.graph,
                            cfg.threads,
                        ))
                    } else {
                        betweenness_prefix_foremost_par_with::<Float64>(&cfg.graph, cfg.threads)
                    }
                }
                Optimality::Shortest | Optimality::ShortestForemost => {
                    let pair = pair_cache
                        .entry(c.strict())
                        .or_insert_with(|| temporal_pair(cfg, c.strict()));
                    if c.optimality() == Optimality::Shortest {
                        pair.0.clone()
                    } else {
                        pair.1.clone()
                    }
                }
                other => {
                    return Err(CliError::Usage(format!(
                        "no engine computes {} betweenness",
                        other.token()
                    )))
                }
            },
            EngineArg::Expansion => {
                if cfg.exact {
                    rationals_to_f64(
                        &betweenness_via_expansion_par_with::<Exact>(&cfg.graph, c, cfg.threads)
                            .map_err(data_err)?,
                    )
                } else {
                    betweenness_via_expansion_par_with::<Float64>(&cfg.graph, c, cfg.threads)
                        .map_err(data_err)?
                }
            }
            EngineArg::Oracle => rationals_to_f64(
                &oracle::exact_betweenness(&cfg.graph, c, cfg.limits).map_err(data_err)?,
            ),
        };
        eprintln!(
            "timing command={cmd} variant={} engine={} seconds={:.6}",
            c.slug(),
            cfg.engine.token(),
            start.elapsed().as_secs_f64()
        );
        out.push((c, scores));
    }
    Ok(out)
}

/// One score column per variant, rows sorted by vertex name. An empty
/// graph yields the header alone.
fn cmd_compute(cfg: &RunConfig) -> Result<String, CliError> {
    let scored = computed_scores(cfg, "compute")?;
    let g = &cfg.graph;
    let mut order: Vec<usize> = (0..g.n()).collect();
    order.sort_by(|&a, &b| g.label(a).cmp(g.label(b)));
    let mut out = String::from("vertex");
    for (c, _) in &scored {
        write!(out, ",{}", c.slug()).unwrap();
    }
    out.push('\n');
    for v in order {
        out.push_str(g.label(v));
        for (_, scores) in &scored {
            write!(out, ",{}", format_score(scores[v])).unwrap();
        }
        out.push('\n');
    }
    Ok(out)
}

/// Pair matrix with one column per variant pair: rows for tau, the tied
/// fraction, and the top-k overlap, plus the mutually nonzero vertex
/// count when tau is restricted. An optional histogram block follows.
fn cmd_compare(
    cfg: &RunConfig,
    top_k: usize,
    buckets: Option<usize>,
    nonzero_only: bool,
) -> Result<String, CliError> {
    let scored = computed_scores(cfg, "compare")?;
    let n = cfg.graph.n();
    let k = top_k.min(n);
    let mut pairs = Vec::new();
    for i in 0..scored.len() {
        for j in i + 1..scored.len() {
            pairs.push((i, j));
        }
    }

    let mut header = String::from("metric");
    let mut tau_row = String::from("tau");
    let mut tie_row = String::from("tie_fraction");
    let mut top_row = format!("top{k}");
    let mut nz_row = String::from("common_nonzero");
    for &(i, j) in &pairs {
        write!(header, ",{}~{}", scored[i].0.slug(), scored[j].0.slug()).unwrap();
        let (sa, sb): (Vec<f64>, Vec<f64>) = if nonzero_only {
            let keep: Vec<usize> =
                (0..n).filter(|&v| scored[i].1[v] != 0.0 && scored[j].1[v] != 0.0).collect();
            write!(nz_row, ",{}", keep.len()).unwrap();
            (
                keep.iter().map(|&v| scored[i].1[v]).collect(),
                keep.iter().map(|&v| scored[j].1[v]).collect(),
            )
        } else {
            (scored[i].1.clone(), scored[j].1.clone())
        };
        let tr = kendall_tau(&Ranking::new(&sa), &Ranking::new(&sb)).map_err(data_err)?;
        write!(tau_row, ",{}", format_score(tr.tau)).unwrap();
        write!(tie_row, ",{}", format_score(tr.tie_fraction())).unwrap();
        let overlap =
            top_k_intersection(&Ranking::new(&scored[i].1), &Ranking::new(&scored[j].1), k)
                .map_err(data_err)?;
        write!(top_row, ",{overlap}").unwrap();
    }

    let mut out = format!("{header}\n{tau_row}\n{tie_row}\n{top_row}\n");
    if nonzero_only {
        out.push_str(&nz_row);
        out.push('\n');
    }
    if let Some(b) = buckets {
        out.push('\n');
        out.push_str("bucket");
        for (c, _) in &scored {
            write!(out, ",{}", c.slug()).unwrap();
        }
        out.push('\n');
        let hists: Vec<Vec<usize>> = scored
            .iter()
            .map(|(_, s)| histogram(s, b))
            .collect::<tempo_btw::Result<_>>()
            .map_err(data_err)?;
        for bi in 0..b {
            write!(out, "{bi}").unwrap();
            for h in &hists {
                write!(out, ",{}", h[bi]).unwrap();
            }
            out.push('\n');
        }
    }
    Ok(out)
}

/// Per-variant maximum absolute deviation between the engine and the
/// exact oracle. The report is always produced; the boolean says whether
/// every variant stayed within the pinned tolerance.
fn cmd_oracle_check(cfg: &RunConfig, inject_error: bool) -> Result<(String, bool), CliError> {
    if cfg.engine == EngineArg::Oracle {
        return Err(CliError::Usage(
            "oracle-check compares an engine against the oracle; pick --engine temporal or expansion".into(),
        ));
    }
    let mut scored = computed_scores(cfg, "oracle-check")?;
    if inject_error {
        if let Some(x) = scored.first_mut().and_then(|(_, s)| s.first_mut()) {
            *x += 1e-6;
        }
    }
    let start = Instant::now();
    let exact =
        oracle::exact_betweenness_many(&cfg.graph, &cfg.variants, cfg.limits).map_err(data_err)?;
    eprintln!(
        "timing command=oracle-check variant=all engine=oracle seconds={:.6}",
        start.elapsed().as_secs_f64()
    );
    let mut out = String::from("variant,max_abs_deviation,status\n");
    let mut all_ok = true;
    for ((c, scores), reference) in scored.iter().zip(&exact) {
        let mut worst = 0.0f64;
        for (v, s) in scores.iter().enumerate() {
            worst = worst.max((s - rational_to_f64(&reference[v])).abs());
        }
        let pass = worst <= ORACLE_TOLERANCE;
        all_ok &= pass;
        writeln!(
            out,
            "{},{},{}",
            c.slug(),
            format_score(worst),
            if pass { "pass" } else { "fail" }
        )
        .unwrap();
    }
    Ok((out, all_ok))
}

/// Builds the matching gadget for a seeded bipartite instance and checks
/// the count identity. Returns the edge list, the report, and whether the
/// identity held.
fn cmd_gadget_matching(args: &MatchingArgs) -> Result<(String, String, bool), CliError> {
    let bg = random_bipartite(args.seed, args.max_side);
    let matchings = oracle::count_matchings(&bg).map_err(data_err)?;
    let (g, source, sink) = oracle::matching_gadget(&bg).map_err(data_err)?;
    let limits = resolve_limits(None)?;
    let start = Instant::now();
    let paths = oracle::enumerate_paths(&g, source, sink, true, limits).map_err(data_err)?;
    eprintln!(
        "timing command=gadget variant=matching engine=oracle seconds={:.6}",
        start.elapsed().as_secs_f64()
    );
    let ok = paths.len() as u128 == matchings - 1;
    let edge_list = serialize_edge_list(&g, args.format.into());
    let report = format!(
        "left,right,source,sink,matchings,paths,status\n{},{},{},{},{},{},{}\n",
        bg.left(),
        bg.right(),
        g.label(source),
        g.label(sink),
        matchings,
        paths.len(),
        if ok { "pass" } else { "fail" }
    );
    Ok((edge_list, report, ok))
}

/// Builds the probe gadget around a source-target pair and reports the
/// recovery identity per strictness mode.
fn cmd_gadget_probe(args: &ProbeArgs) -> Result<(String, String, bool), CliError> {
    let g = load_graph(&args.input)?;
    let source = g
        .vertex_by_label(&args.source)
        .ok_or_else(|| CliError::Data(format!("no vertex named {:?}", args.source)))?;
    let target = g
        .vertex_by_label(&args.target)
        .ok_or_else(|| CliError::Data(format!("no vertex named {:?}", args.target)))?;
    if source == target {
        return Err(CliError::Usage("source and target must differ".into()));
    }
    let limits = resolve_limits(args.max_paths)?;
    let inst = oracle::betweenness_gadget(&g, source, target).map_err(data_err)?;
    let edge_list = serialize_edge_list(&inst.graph, args.input.format.into());
    let modes: &[bool] = if args.strict {
        &[true]
    } else if args.nonstrict {
        &[false]
    } else {
        &[false, true]
    };
    let mut report = String::from("mode,statistic,recovered,direct_count,status\n");
    let mut all_ok = true;
    for &strict in modes {
        let start = Instant::now();
        let rep = oracle::gadget_report(&g, source, target, strict, limits).map_err(data_err)?;
        eprintln!(
            "timing command=gadget variant=probe-{} engine=oracle seconds={:.6}",
            if strict { "strict" } else { "nonstrict" },
            start.elapsed().as_secs_f64()
        );
        let pass = rep.recovered == rep.direct_count;
        all_ok &= pass;
        writeln!(
            report,
            "{},{},{},{},{}",
            if strict { "strict" } else { "nonstrict" },
            rep.statistic,
            rep.recovered,
            rep.direct_count,
            if pass { "pass" } else { "fail" }
        )
        .unwrap();
    }
    Ok((edge_list, report, all_ok))
}

fn emit(output: &Option<PathBuf>, text: &str) -> Result<(), CliError> {
    match output {
        Some(path) => fs::write(path, text)
            .map_err(|e| CliError::Data(format!("writing {}: {e}", path.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

/// Edge list to the output target (or standard output, followed by one
/// blank line); the report always to standard output.
fn emit_gadget(output: &Option<PathBuf>, edge_list: &str, report: &str) -> Result<(), CliError> {
    if let Some(path) = output {
        fs::write(path, edge_list)
            .map_err(|e| CliError::Data(format!("writing {}: {e}", path.display())))?;
    } else {
        println!("{edge_list}");
    }
    print!("{report}");
    Ok(())
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Cmd::Compute(a) => {
            let cfg = build_run_config(&a.input, &a.variants, &a.engine, a.output)?;
            let csv = cmd_compute(&cfg)?;
            emit(&cfg.output, &csv)
        }
        Cmd::Compare(a) => {
            if a.buckets == Some(0) {
                return Err(CliError::Usage("--buckets must be at least 1".into()));
            }
            let cfg = build_run_config(&a.input, &a.variants, &a.engine, a.output)?;
            let csv = cmd_compare(&cfg, a.top_k, a.buckets, a.nonzero_only)?;
            emit(&cfg.output, &csv)
        }
        Cmd::OracleCheck(a) => {
            let cfg = build_run_config(&a.input, &a.variants, &a.engine, a.output)?;
            let (csv, ok) = cmd_oracle_check(&cfg, a.inject_error)?;
            emit(&cfg.output, &csv)?;
            if ok {
                Ok(())
            } else {
                Err(CliError::Verify(format!(
                    "engine deviates from the oracle beyond {ORACLE_TOLERANCE:e}"
                )))
            }
        }
        Cmd::Gadget(a) => {
            let ok = match a.kind {
                GadgetKind::Matching(m) => {
                    let (edge_list, report, ok) = cmd_gadget_matching(&m)?;
                    emit_gadget(&m.output, &edge_list, &report)?;
                    ok
                }
                GadgetKind::Probe(p) => {
                    let (edge_list, report, ok) = cmd_gadget_probe(&p)?;
                    emit_gadget(&p.output, &edge_list, &report)?;
                    ok
                }
            };
            if ok {
                Ok(())
            } else {
                Err(CliError::Verify("gadget identity check failed".into()))
            }
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let ok = matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion);
            let _ = e.print();
            return if ok { ExitCode::SUCCESS } else { ExitCode::from(1) };
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {}", e.message());
            ExitCode::from(e.code())
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn vargs(variants: &[VariantArg], strict: bool, nonstrict: bool) -> VariantArgs {
        VariantArgs { variants: variants.to_vec(), strict, nonstrict }
    }

    #[test]
    fn default_selection_is_the_canonical_five() {
        let got = resolve_variants(&vargs(&[], false, false)).unwrap();
        assert_eq!(got, Criterion::canonical_five().to_vec());
    }

    #[test]
    fn strictness_flags_narrow_the_selection() {
        let strict = resolve_variants(&vargs(&[], true, false)).unwrap();
        assert_eq!(
            strict,
            vec![
                Criterion::shortest(true),
                Criterion::shortest_foremost(true),
                Criterion::prefix_foremost(),
            ]
        );
        let loose = resolve_variants(&vargs(&[], false, true)).unwrap();
        assert_eq!(
            loose,
            vec![Criterion::shortest(false), Criterion::shortest_foremost(false)]
        );
    }

    #[test]
    fn explicit_pfm_with_nonstrict_is_a_usage_error() {
        let err = resolve_variants(&vargs(&[VariantArg::Pfm], false, true)).unwrap_err();
        assert_eq!(err.code(), 1);
    }

    #[test]
    fn repeated_variants_collapse() {
        let got =
            resolve_variants(&vargs(&[VariantArg::Sh, VariantArg::Sh], true, false)).unwrap();
        assert_eq!(got, vec![Criterion::shortest(true)]);
    }

    #[test]
    fn limits_spec_parses_and_rejects() {
        let l = parse_limits_spec("12, 3400").unwrap();
        assert_eq!((l.max_vertices, l.max_paths), (12, 3400));
        assert!(parse_limits_spec("12").is_err());
        assert!(parse_limits_spec("a,b").is_err());
        assert!(parse_limits_spec("1,2,3").is_err());
    }

    #[test]
    fn cli_parses_and_verifies() {
        use clap::CommandFactory;
        Cli::command().debug_assert();
    }
}
