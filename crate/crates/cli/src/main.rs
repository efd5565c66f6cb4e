//! `tricount`: exact triangle counting over bit-sliced adjacency
//! matrices, with compression analytics and a data-flow simulator for
//! replaying the count through a bounded in-memory compute array.

mod output;

use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};
use tricount_core::{
    capacity_for_megabytes, count_triangles_bitwise, count_triangles_oracle,
    count_triangles_trace, load_edge_list, orient, simulate, slicing::measured_metrics,
    ArrayCapacity, CompressedGraph, CostConfig, Error, Graph, ReplacementPolicy, Result,
    RowOrder, SimOptions, SimReport, SliceConfig,
};

use output::{json_on_stdout, print_kv, print_table, report, write_json, InputBlock};

/// Above this size the dense bit-matrix engines stop being sensible on a
/// desktop (two |V| x |V| bit matrices), so `count --engine bitwise`
/// refuses and points at the sorted-intersection engine instead.
const DENSE_VERTEX_LIMIT: usize = 100_000;

#[derive(Parser)]
#[command(
    name = "tricount",
    version,
    about = "Exact triangle counting with slice compression and a replay simulator for in-memory compute arrays"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Count triangles and print |V|, |E|, the count, and wall time
    Count(CountArgs),
    /// Report sparsity, compression rate, and valid-slice statistics
    CompressStats(CompressStatsArgs),
    /// Replay the counting data flow through a bounded slice buffer
    Simulate(SimulateArgs),
    /// Run LRU and farthest-next-use side by side across buffer sizes
    ComparePolicies(CompareArgs),
}

// ------------------------------------------------------------- shared args

#[derive(Clone, Copy)]
struct Synthetic {
    n: usize,
    p: f64,
}

fn parse_synthetic(text: &str) -> std::result::Result<Synthetic, String> {
    let (n, p) = text
        .split_once(',')
        .ok_or_else(|| "expected N,P (e.g. 256,0.05)".to_string())?;
    let n: usize = n.trim().parse().map_err(|e| format!("vertex count: {e}"))?;
    let p: f64 = p.trim().parse().map_err(|e| format!("edge probability: {e}"))?;
    Ok(Synthetic { n, p })
}

#[derive(Args)]
struct InputArgs {
    #[command(flatten)]
    source: SourceArgs,
    /// RNG seed used with --synthetic
    #[arg(long, default_value_t = 42, value_name = "U64")]
    seed: u64,
}

#[derive(Args)]
#[group(required = true, multiple = false)]
struct SourceArgs {
    /// Whitespace-separated edge list; '#' starts a comment line
    #[arg(long, value_name = "FILE")]
    input: Option<PathBuf>,
    /// Seeded G(N, P) random graph in place of a file
    #[arg(long, value_name = "N,P", value_parser = parse_synthetic)]
    synthetic: Option<Synthetic>,
}

impl InputArgs {
    fn load(&self) -> Result<(Graph, InputBlock)> {
        match (&self.source.input, self.source.synthetic) {
            (Some(path), None) => {
                let (graph, stats) = load_edge_list(path)?;
                let block = InputBlock::from_file(path, &graph, &stats);
                Ok((graph, block))
            }
            (None, Some(syn)) => {
                let graph = Graph::random_gnp(syn.n, syn.p, self.seed)?;
                let block = InputBlock::synthetic(syn.n, syn.p, self.seed, &graph);
                Ok((graph, block))
            }
            _ => unreachable!("clap enforces exactly one input source"),
        }
    }

    /// Config echo: enough to reproduce the run bit for bit.
    fn config(&self) -> Value {
        json!({
            "input": self.source.input.as_ref().map(|p| p.display().to_string()),
            "synthetic": self.source.synthetic.map(|s| format!("{},{}", s.n, s.p)),
            "seed": self.seed,
        })
    }
}

#[derive(Args)]
struct SliceArgs {
    /// Slice length |S| in bits
    #[arg(long, default_value_t = 64, value_name = "BITS")]
    slice_length: u32,
    /// Ordinal index width |D| in bits (affects size metrics only)
    #[arg(long, default_value_t = 32, value_name = "BITS")]
    index_width: u32,
}

impl SliceArgs {
    fn config(&self) -> Result<SliceConfig> {
        SliceConfig::new(self.slice_length, self.index_width)
    }
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum EngineArg {
    Bitwise,
    Oracle,
    Trace,
}

impl EngineArg {
    fn name(self) -> &'static str {
        match self {
            EngineArg::Bitwise => "bitwise",
            EngineArg::Oracle => "oracle",
            EngineArg::Trace => "trace",
        }
    }
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum PolicyArg {
    Lru,
    Priority,
}

impl PolicyArg {
    fn to_core(self) -> ReplacementPolicy {
        match self {
            PolicyArg::Lru => ReplacementPolicy::Lru,
            PolicyArg::Priority => ReplacementPolicy::Priority,
        }
    }

    fn name(self) -> &'static str {
        match self {
            PolicyArg::Lru => "lru",
            PolicyArg::Priority => "priority",
        }
    }
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum OrderArg {
    Sequential,
    Zigzag,
}

impl OrderArg {
    fn to_core(self) -> RowOrder {
        match self {
            OrderArg::Sequential => RowOrder::Sequential,
            OrderArg::Zigzag => RowOrder::Zigzag,
        }
    }

    fn name(self) -> &'static str {
        match self {
            OrderArg::Sequential => "sequential",
            OrderArg::Zigzag => "zigzag",
        }
    }
}

// ------------------------------------------------------------ subcommands

#[derive(Args)]
struct CountArgs {
    #[command(flatten)]
    input: InputArgs,
    /// Counting engine
    #[arg(long, value_enum, default_value_t = EngineArg::Bitwise)]
    engine: EngineArg,
    /// Write the JSON report here ('-' for stdout)
    #[arg(long, value_name = "FILE")]
    json_out: Option<PathBuf>,
}

#[derive(Args)]
struct CompressStatsArgs {
    #[command(flatten)]
    input: InputArgs,
    /// Slice lengths |S| to sweep, comma separated
    #[arg(
        long,
        value_name = "BITS[,BITS...]",
        default_value = "64",
        value_delimiter = ','
    )]
    slice_length: Vec<u32>,
    /// Ordinal index width |D| in bits
    #[arg(long, default_value_t = 32, value_name = "BITS")]
    index_width: u32,
    /// Write the JSON report here ('-' for stdout)
    #[arg(long, value_name = "FILE")]
    json_out: Option<PathBuf>,
}

#[derive(Args)]
struct SimulateArgs {
    #[command(flatten)]
    input: InputArgs,
    #[command(flatten)]
    slice: SliceArgs,
    /// Replacement policy for the column-slice buffer
    #[arg(long, value_enum, default_value_t = PolicyArg::Lru)]
    policy: PolicyArg,
    /// Row traversal order
    #[arg(long, value_enum, default_value_t = OrderArg::Sequential)]
    order: OrderArg,
    /// Column-slice buffer budget in MiB (omit both budgets for unbounded)
    #[arg(long, value_name = "MIB", conflicts_with = "capacity_slices")]
    capacity_mb: Option<f64>,
    /// Column-slice buffer budget as a slice count
    #[arg(long, value_name = "SLICES")]
    capacity_slices: Option<u64>,
    /// Charge the row buffer against the capacity budget
    #[arg(long)]
    row_buffer_in_capacity: bool,
    /// Latency/energy cost table (key = value lines)
    #[arg(long, value_name = "FILE")]
    cost_config: Option<PathBuf>,
    /// Write the JSON report here ('-' for stdout)
    #[arg(long, value_name = "FILE")]
    json_out: Option<PathBuf>,
}

#[derive(Args)]
struct CompareArgs {
    #[command(flatten)]
    input: InputArgs,
    #[command(flatten)]
    slice: SliceArgs,
    /// Row traversal order
    #[arg(long, value_enum, default_value_t = OrderArg::Sequential)]
    order: OrderArg,
    /// Buffer budgets in MiB, comma separated
    #[arg(
        long,
        value_name = "MIB[,MIB...]",
        default_value = "8,16",
        value_delimiter = ',',
        conflicts_with = "capacity_slices"
    )]
    capacity_mb: Vec<f64>,
    /// Buffer budgets as slice counts, comma separated
    #[arg(long, value_name = "SLICES[,SLICES...]", value_delimiter = ',')]
    capacity_slices: Vec<u64>,
    /// Latency/energy cost table (key = value lines)
    #[arg(long, value_name = "FILE")]
    cost_config: Option<PathBuf>,
    /// Write the JSON report here ('-' for stdout)
    #[arg(long, value_name = "FILE")]
    json_out: Option<PathBuf>,
}

// ------------------------------------------------------------------ main

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Count(args) => cmd_count(args),
        Command::CompressStats(args) => cmd_compress_stats(args),
        Command::Simulate(args) => cmd_simulate(args),
        Command::ComparePolicies(args) => cmd_compare_policies(args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(match e {
                Error::Io(_) | Error::Parse { .. } | Error::Format(_) => 3,
                Error::Config(_) | Error::Capacity(_) => 4,
            })
        }
    }
}

fn load_cost(path: Option<&Path>) -> Result<CostConfig> {
    match path {
        Some(p) => CostConfig::from_file(p),
        None => Ok(CostConfig::default()),
    }
}

fn cost_echo(cost: &CostConfig) -> Value {
    json!({
        "write_latency": cost.write_latency,
        "write_energy": cost.write_energy,
        "compute_latency": cost.compute_latency,
        "compute_energy": cost.compute_energy,
        "buffer_lookup_cost": cost.buffer_lookup_cost,
    })
}

/// Prints the shared `graph ...` header line for table output.
fn print_graph_line(input: &InputBlock) {
    println!(
        "graph  {}  (vertices {}, edges {})",
        input.source, input.vertices, input.edges
    );
}

fn emit(
    json_out: Option<&Path>,
    config: Value,
    input: &InputBlock,
    results: Value,
    wall_seconds: f64,
) -> Result<()> {
    if let Some(path) = json_out {
        let envelope = report(config, input, results, wall_seconds);
        write_json(path, &envelope)?;
    }
    Ok(())
}

fn cmd_count(args: CountArgs) -> Result<()> {
    let (graph, input) = args.input.load()?;
    let start = Instant::now();
    let triangles = match args.engine {
        EngineArg::Bitwise => {
            if graph.vertex_count() > DENSE_VERTEX_LIMIT {
                return Err(Error::Capacity(format!(
                    "bitwise engine would build two dense {0}x{0}-bit matrices; \
                     use --engine oracle for graphs over {DENSE_VERTEX_LIMIT} vertices",
                    graph.vertex_count()
                )));
            }
            count_triangles_bitwise(&orient(&graph))
        }
        EngineArg::Oracle => count_triangles_oracle(&graph),
        EngineArg::Trace => count_triangles_trace(&graph)?,
    };
    let wall = start.elapsed().as_secs_f64();

    if !json_on_stdout(args.json_out.as_deref()) {
        print_kv(&[
            ("vertices", input.vertices.to_string()),
            ("edges", input.edges.to_string()),
            ("triangles", triangles.to_string()),
            ("wall time", format!("{wall:.3} s")),
            ("engine", args.engine.name().to_string()),
        ]);
    }
    let mut config = args.input.config();
    config["command"] = json!("count");
    config["engine"] = json!(args.engine.name());
    emit(
        args.json_out.as_deref(),
        config,
        &input,
        json!({ "triangles": triangles }),
        wall,
    )
}

fn cmd_compress_stats(args: CompressStatsArgs) -> Result<()> {
    let (graph, input) = args.input.load()?;
    let start = Instant::now();
    let mut json_rows = Vec::new();
    let mut table_rows = Vec::new();
    for &slice_length in &args.slice_length {
        let cfg = SliceConfig::new(slice_length, args.index_width)?;
        let cg = CompressedGraph::from_graph(&graph, cfg)?;
        let m = measured_metrics(&cg);
        json_rows.push(json!({
            "slice_length": slice_length,
            "index_width": args.index_width,
            "alpha": m.alpha,
            "analytic_cr": m.analytic_cr,
            "measured_cr": m.measured_cr,
            "row_valid_slices": m.row_valid_slices,
            "col_valid_slices": m.col_valid_slices,
            "valid_pair_count": m.valid_pair_count,
            "valid_pair_ratio": m.valid_pair_ratio,
            "row_store_bits": m.row_store_bits,
        }));
        table_rows.push(vec![
            slice_length.to_string(),
            format!("{:.5}%", m.alpha * 100.0),
            format!("{:.3}%", m.analytic_cr * 100.0),
            format!("{:.3}%", m.measured_cr * 100.0),
            (m.row_valid_slices + m.col_valid_slices).to_string(),
            format!("{:.3}%", m.valid_pair_ratio * 100.0),
        ]);
    }
    let wall = start.elapsed().as_secs_f64();

    if !json_on_stdout(args.json_out.as_deref()) {
        print_graph_line(&input);
        print_table(
            &[
                "|S|",
                "sparsity",
                "model CR",
                "measured CR",
                "valid slices",
                "valid-pair ratio",
            ],
            &table_rows,
        );
    }
    let mut config = args.input.config();
    config["command"] = json!("compress-stats");
    config["slice_length"] = json!(args.slice_length);
    config["index_width"] = json!(args.index_width);
    emit(
        args.json_out.as_deref(),
        config,
        &input,
        json!({ "sweeps": json_rows }),
        wall,
    )
}

fn resolve_capacity(
    mb: Option<f64>,
    slices: Option<u64>,
    cfg: SliceConfig,
) -> Result<ArrayCapacity> {
    match (mb, slices) {
        (Some(mb), None) => capacity_for_megabytes(mb, cfg),
        (None, Some(count)) => Ok(ArrayCapacity::Bounded(count)),
        (None, None) => Ok(ArrayCapacity::Unbounded),
        (Some(_), Some(_)) => unreachable!("clap rejects both budgets at once"),
    }
}

fn capacity_echo(capacity: ArrayCapacity) -> Value {
    match capacity {
        ArrayCapacity::Bounded(n) => json!(n),
        ArrayCapacity::Unbounded => Value::Null,
    }
}

fn report_rows(r: &SimReport) -> Vec<(&'static str, String)> {
    vec![
        ("tasks", r.tasks.to_string()),
        ("triangles", r.triangles.to_string()),
        ("row writes", r.row_writes.to_string()),
        ("column loads", r.column_loads_requested.to_string()),
        ("hits", r.hits.to_string()),
        ("misses", r.misses.to_string()),
        ("replacements", r.replacements.to_string()),
        ("column writes", r.column_writes.to_string()),
        ("hit ratio", format!("{:.2}%", r.hit_ratio * 100.0)),
        (
            "write ops saved",
            format!("{:.2}%", r.write_ops_saved_ratio * 100.0),
        ),
        ("total latency", format!("{}", r.total_latency)),
        ("total energy", format!("{}", r.total_energy)),
    ]
}

fn cmd_simulate(args: SimulateArgs) -> Result<()> {
    let (graph, input) = args.input.load()?;
    let cfg = args.slice.config()?;
    let capacity = resolve_capacity(args.capacity_mb, args.capacity_slices, cfg)?;
    let cost = load_cost(args.cost_config.as_deref())?;
    let start = Instant::now();
    let cg = CompressedGraph::from_graph(&graph, cfg)?;
    let opts = SimOptions {
        policy: args.policy.to_core(),
        capacity,
        order: args.order.to_core(),
        row_buffer_in_capacity: args.row_buffer_in_capacity,
    };
    let sim = simulate(&cg, opts, &cost)?;
    let wall = start.elapsed().as_secs_f64();

    if !json_on_stdout(args.json_out.as_deref()) {
        print_graph_line(&input);
        let mut rows = vec![
            ("policy", args.policy.name().to_string()),
            ("order", args.order.name().to_string()),
            (
                "capacity",
                match capacity {
                    ArrayCapacity::Bounded(n) => format!("{n} slices"),
                    ArrayCapacity::Unbounded => "unbounded".to_string(),
                },
            ),
        ];
        rows.extend(report_rows(&sim));
        print_kv(&rows);
    }
    let mut config = args.input.config();
    config["command"] = json!("simulate");
    config["slice_length"] = json!(args.slice.slice_length);
    config["index_width"] = json!(args.slice.index_width);
    config["policy"] = json!(args.policy.name());
    config["order"] = json!(args.order.name());
    config["capacity_mb"] = json!(args.capacity_mb);
    config["capacity_slices"] = capacity_echo(capacity);
    config["row_buffer_in_capacity"] = json!(args.row_buffer_in_capacity);
    config["cost"] = cost_echo(&cost);
    emit(
        args.json_out.as_deref(),
        config,
        &input,
        serde_json::to_value(sim).expect("report serializes"),
        wall,
    )
}

fn cmd_compare_policies(args: CompareArgs) -> Result<()> {
    let (graph, input) = args.input.load()?;
    let cfg = args.slice.config()?;
    let cost = load_cost(args.cost_config.as_deref())?;

    // (label, capacity) pairs in the order they will be simulated.
    let budgets: Vec<(String, ArrayCapacity)> = if args.capacity_slices.is_empty() {
        args.capacity_mb
            .iter()
            .map(|&mb| {
                capacity_for_megabytes(mb, cfg).map(|c| (format!("{mb} MiB"), c))
            })
            .collect::<Result<_>>()?
    } else {
        args.capacity_slices
            .iter()
            .map(|&n| (format!("{n} slices"), ArrayCapacity::Bounded(n)))
            .collect()
    };

    let start = Instant::now();
    let cg = CompressedGraph::from_graph(&graph, cfg)?;
    let mut runs = Vec::new();
    let mut reductions = Vec::new();
    let mut table_rows = Vec::new();
    for (label, capacity) in &budgets {
        let mut per_policy = Vec::new();
        for policy in [PolicyArg::Lru, PolicyArg::Priority] {
            let opts = SimOptions {
                policy: policy.to_core(),
                capacity: *capacity,
                order: args.order.to_core(),
                row_buffer_in_capacity: false,
            };
            let sim = simulate(&cg, opts, &cost)?;
            table_rows.push(vec![
                label.clone(),
                policy.name().to_string(),
                sim.tasks.to_string(),
                sim.hits.to_string(),
                sim.misses.to_string(),
                sim.replacements.to_string(),
                format!("{:.2}%", sim.hit_ratio * 100.0),
                format!("{:.2}%", sim.write_ops_saved_ratio * 100.0),
            ]);
            let mut run = serde_json::to_value(sim).expect("report serializes");
            run["capacity"] = json!(label);
            run["policy"] = json!(policy.name());
            runs.push(run);
            per_policy.push(sim);
        }
        let (lru, priority) = (&per_policy[0], &per_policy[1]);
        let reduction = if lru.replacements > 0 {
            1.0 - priority.replacements as f64 / lru.replacements as f64
        } else {
            0.0
        };
        reductions.push(json!({
            "capacity": label,
            "lru_replacements": lru.replacements,
            "priority_replacements": priority.replacements,
            "replacement_reduction": reduction,
        }));
    }
    let wall = start.elapsed().as_secs_f64();

    if !json_on_stdout(args.json_out.as_deref()) {
        print_graph_line(&input);
        print_table(
            &[
                "capacity",
                "policy",
                "tasks",
                "hits",
                "misses",
                "replacements",
                "hit ratio",
                "writes saved",
            ],
            &table_rows,
        );
        for r in &reductions {
            println!(
                "replacement reduction at {}: {:.1}%",
                r["capacity"].as_str().unwrap(),
                r["replacement_reduction"].as_f64().unwrap() * 100.0
            );
        }
    }
    let mut config = args.input.config();
    config["command"] = json!("compare-policies");
    config["slice_length"] = json!(args.slice.slice_length);
    config["index_width"] = json!(args.slice.index_width);
    config["order"] = json!(args.order.name());
    config["capacity_mb"] = if args.capacity_slices.is_empty() {
        json!(args.capacity_mb)
    } else {
        Value::Null
    };
    config["capacity_slices"] = if args.capacity_slices.is_empty() {
        Value::Null
    } else {
        json!(args.capacity_slices)
    };
    config["cost"] = cost_echo(&cost);
    emit(
        args.json_out.as_deref(),
        config,
        &input,
        json!({ "runs": runs, "replacement_reduction": reductions }),
        wall,
    )
}
