//! Command-line surface over the infodyn library: entropy and synergy
//! reports from CSV data, map trajectories, bifurcation scans, and
//! network position analysis.

mod render;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use infodyn::lattice::{self, LatticeError};
use infodyn::maps::{self, BranchPolicy, MapKind, MapSpec, ScanConfig};
use infodyn::network::{self, Graph, SimilarityMeasure};
use infodyn::prob::{self, EntropyValue, JointDistribution, ProbError};
use infodyn::tabular::{self, BinMethod, BinningSpec, MissingPolicy, TabularError};
use render::{Format, Style};

#[derive(Parser)]
#[command(
    name = "infodyn",
    version,
    about = "Entropy, synergy, anticipatory maps, and network positions for discrete data"
)]
struct Cli {
    /// Output format for reports.
    #[arg(long, global = true, value_enum, default_value_t = Format::Tsv)]
    format: Format,
    /// Decimal places for rendered numbers.
    #[arg(long, global = true, default_value_t = 6, value_parser = clap::value_parser!(u8).range(1..=15))]
    precision: u8,
    /// Seed for randomized branch policies.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Report entropy quantities in nats instead of bits.
    #[arg(long, global = true)]
    nats: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Joint entropy, maximum entropy, and redundancy of selected columns.
    Entropy(EntropyArgs),
    /// Subset mutual informations and the redundancy decomposition.
    Synergy(SynergyArgs),
    /// Iterate one map and list its trajectory.
    Map(MapArgs),
    /// Sweep the control parameter and emit a bifurcation scan.
    Bifurcate(BifurcateArgs),
    /// Geodesics, positional similarity, and triads of an edge list.
    Structure(StructureArgs),
}

#[derive(Args)]
struct TableArgs {
    /// Input CSV file with a header row (.tsv extension switches to tabs).
    file: PathBuf,
    /// Comma-separated column names (default: every column, file order).
    #[arg(long, value_delimiter = ',')]
    vars: Vec<String>,
    /// Bin a numeric column before tabulating (repeatable). METHOD is
    /// equal_width or equal_frequency.
    #[arg(long = "bin", value_name = "COLUMN:METHOD:K")]
    bins: Vec<String>,
    /// Additive pseudo-count applied to every contingency cell.
    #[arg(long, default_value_t = 0.0)]
    smooth: f64,
    /// Drop rows with missing cells instead of labeling them "∅".
    #[arg(long)]
    drop_missing: bool,
}

#[derive(Args)]
struct EntropyArgs {
    #[command(flatten)]
    table: TableArgs,
}

#[derive(Args)]
struct SynergyArgs {
    #[command(flatten)]
    table: TableArgs,
    /// Variable cap guarding the exponential subset lattice.
    #[arg(long, default_value_t = 16)]
    max_vars: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
#[value(rename_all = "snake_case")]
enum KindArg {
    Recursive,
    Incursive,
    HyperIncursive,
}

impl From<KindArg> for MapKind {
    fn from(kind: KindArg) -> MapKind {
        match kind {
            KindArg::Recursive => MapKind::Recursive,
            KindArg::Incursive => MapKind::Incursive,
            KindArg::HyperIncursive => MapKind::HyperIncursive,
        }
    }
}

impl KindArg {
    fn name(self) -> &'static str {
        match self {
            KindArg::Recursive => "recursive",
            KindArg::Incursive => "incursive",
            KindArg::HyperIncursive => "hyper_incursive",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
#[value(rename_all = "snake_case")]
enum PolicyArg {
    AlwaysPlus,
    AlwaysMinus,
    Alternate,
    Random,
}

#[derive(Args)]
struct MapArgs {
    /// Map kind.
    #[arg(long, value_enum)]
    kind: KindArg,
    /// Control parameter.
    #[arg(long)]
    a: f64,
    /// Initial state.
    #[arg(long, default_value_t = 0.3)]
    x0: f64,
    /// Number of iterations.
    #[arg(long, default_value_t = 100)]
    steps: usize,
    /// Branch policy for the hyper_incursive kind (default: random).
    #[arg(long, value_enum)]
    policy: Option<PolicyArg>,
    /// Plus-branch probability under the random policy.
    #[arg(long, default_value_t = 0.5)]
    p_plus: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum OutKind {
    Csv,
    Svg,
}

#[derive(Args)]
struct BifurcateArgs {
    /// Map kind.
    #[arg(long, value_enum)]
    kind: KindArg,
    /// Lower end of the parameter grid.
    #[arg(long)]
    a_min: f64,
    /// Upper end of the parameter grid.
    #[arg(long)]
    a_max: f64,
    /// Number of grid points, both endpoints included.
    #[arg(long, default_value_t = maps::DEFAULT_GRID)]
    grid: usize,
    /// Initial state at every grid point.
    #[arg(long, default_value_t = 0.3)]
    x0: f64,
    /// Warm-up iterations discarded per grid point.
    #[arg(long, default_value_t = maps::DEFAULT_TRANSIENT)]
    transient: usize,
    /// States recorded per grid point.
    #[arg(long, default_value_t = maps::DEFAULT_SAMPLES)]
    samples: usize,
    /// Branch policy for the hyper_incursive kind (default: random).
    #[arg(long, value_enum)]
    policy: Option<PolicyArg>,
    /// Plus-branch probability under the random policy.
    #[arg(long, default_value_t = 0.5)]
    p_plus: f64,
    /// Output kind: csv rows or an svg scatter plot.
    #[arg(long, value_enum, default_value_t = OutKind::Csv)]
    out: OutKind,
    /// Output file (standard output when omitted).
    #[arg(long)]
    path: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum MeasureArg {
    Pearson,
    Cosine,
}

#[derive(Args)]
struct StructureArgs {
    /// Edge list CSV with header "source,target".
    file: PathBuf,
    /// Treat edges as directed arcs (also enables the triad census).
    #[arg(long)]
    directed: bool,
    /// Positional similarity measure.
    #[arg(long, value_enum, default_value_t = MeasureArg::Pearson)]
    measure: MeasureArg,
}

/// A failed run: message for standard error plus the process exit code.
struct Failure {
    message: String,
    code: u8,
}

impl Failure {
    fn input(message: String) -> Failure {
        Failure { message, code: 2 }
    }
}

impl From<TabularError> for Failure {
    fn from(e: TabularError) -> Failure {
        Failure::input(e.to_string())
    }
}

impl From<ProbError> for Failure {
    fn from(e: ProbError) -> Failure {
        Failure::input(e.to_string())
    }
}

impl From<maps::MapError> for Failure {
    fn from(e: maps::MapError) -> Failure {
        Failure::input(e.to_string())
    }
}

impl From<network::NetworkError> for Failure {
    fn from(e: network::NetworkError) -> Failure {
        Failure::input(e.to_string())
    }
}

impl From<LatticeError> for Failure {
    fn from(e: LatticeError) -> Failure {
        let code = match e {
            LatticeError::TooManyVariables { .. } => 3,
            _ => 2,
        };
        Failure {
            message: e.to_string(),
            code,
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let style = Style {
        format: cli.format,
        precision: cli.precision as usize,
        nats: cli.nats,
    };
    let result = match cli.command {
        Command::Entropy(args) => cmd_entropy(&args, style),
        Command::Synergy(args) => cmd_synergy(&args, style),
        Command::Map(args) => cmd_map(&args, style, cli.seed),
        Command::Bifurcate(args) => cmd_bifurcate(&args, style, cli.seed),
        Command::Structure(args) => cmd_structure(&args, style),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(failure) => {
            eprintln!("{}", failure.message);
            ExitCode::from(failure.code)
        }
    }
}

fn parse_bin_spec(text: &str) -> Result<BinningSpec, Failure> {
    let parts: Vec<&str> = text.rsplitn(3, ':').collect();
    let (column, method, bins) = match parts.as_slice() {
        [k, method, column] => (column, method, k),
        _ => {
            return Err(Failure::input(format!(
                "InvalidBinSpec: expected COLUMN:METHOD:K, got {text:?}"
            )))
        }
    };
    let method = match *method {
        "equal_width" => BinMethod::EqualWidth,
        "equal_frequency" => BinMethod::EqualFrequency,
        other => {
            return Err(Failure::input(format!(
                "InvalidBinSpec: method must be equal_width or equal_frequency, got {other:?}"
            )))
        }
    };
    let bins = bins.parse().map_err(|_| {
        Failure::input(format!("InvalidBinSpec: bin count {bins:?} is not an integer"))
    })?;
    Ok(BinningSpec {
        column: column.to_string(),
        method,
        bins,
    })
}

/// Shared ingestion pipeline: load, bin, select, tabulate, normalize.
fn load_distribution(args: &TableArgs) -> Result<JointDistribution, Failure> {
    let mut table = tabular::load_table_path(&args.file)?;
    for spec_text in &args.bins {
        let spec = parse_bin_spec(spec_text)?;
        tabular::bin_column(&mut table, &spec)?;
    }
    let names: Vec<&str> = if args.vars.is_empty() {
        table.headers.iter().map(String::as_str).collect()
    } else {
        args.vars.iter().map(String::as_str).collect()
    };
    let policy = if args.drop_missing {
        MissingPolicy::DropRows
    } else {
        MissingPolicy::Label
    };
    let counts = tabular::contingency(&table, &names, policy)?;
    let dist = if args.smooth > 0.0 {
        counts.to_distribution_smoothed(args.smooth)?
    } else {
        counts.to_distribution()?
    };
    Ok(dist)
}

fn cmd_entropy(args: &EntropyArgs, style: Style) -> Result<(), Failure> {
    let dist = load_distribution(&args.table)?;
    let h_system = dist.entropy();
    let h_max_bits: f64 = dist.shape().iter().map(|&k| (k as f64).log2()).sum();
    let h_max = EntropyValue::new(h_max_bits);
    let redundancy = prob::redundancy(h_system, h_max)?;
    let h_system = style.units(h_system.bits());
    let h_max = style.units(h_max_bits);
    let text = match style.format {
        Format::Json => render::json_document(render::object(vec![
            ("h_system", style.json_number(h_system)),
            ("h_max", style.json_number(h_max)),
            ("redundancy", style.json_number(redundancy)),
        ])),
        format => render::table(
            &["quantity", "value"],
            &[
                vec!["H_system".to_string(), style.number(h_system)],
                vec!["H_max".to_string(), style.number(h_max)],
                vec!["R".to_string(), style.number(redundancy)],
            ],
            format,
        ),
    };
    print!("{text}");
    Ok(())
}

fn cmd_synergy(args: &SynergyArgs, style: Style) -> Result<(), Failure> {
    let dist = load_distribution(&args.table)?;
    let lattice = lattice::entropy_lattice_with_cap(&dist, args.max_vars)?;
    let report = lattice.mutual_redundancy()?;
    let n = lattice.variable_count();
    let redundancy = style.units(report.mutual_redundancy);
    let verdict = if redundancy.abs() < 10f64.powi(-(style.precision as i32)) {
        "balanced"
    } else if redundancy < 0.0 {
        "evolutionary"
    } else {
        "historical"
    };
    let subset_label = |s: &lattice::Subset| lattice.subset_names(*s).join(",");
    let text = match style.format {
        Format::Json => {
            let t_values: Vec<Value> = report
                .t_values
                .iter()
                .map(|(s, t)| {
                    render::object(vec![
                        ("subset", json!(subset_label(s))),
                        ("t", style.json_number(style.units(*t))),
                    ])
                })
                .collect();
            render::json_document(render::object(vec![
                ("n", json!(n)),
                ("t_values", Value::Array(t_values)),
                (
                    "total_correlation",
                    style.json_number(style.units(report.total_correlation)),
                ),
                (
                    "term_negative",
                    style.json_number(style.units(report.term_negative)),
                ),
                (
                    "term_interaction",
                    style.json_number(style.units(report.term_interaction)),
                ),
                ("mutual_redundancy", style.json_number(redundancy)),
                ("verdict", json!(verdict)),
            ]))
        }
        format => {
            let mut rows: Vec<Vec<String>> = report
                .t_values
                .iter()
                .map(|(s, t)| {
                    vec![
                        format!("T({})", subset_label(s)),
                        style.number(style.units(*t)),
                    ]
                })
                .collect();
            rows.push(vec![
                "total_correlation".to_string(),
                style.number(style.units(report.total_correlation)),
            ]);
            rows.push(vec![
                "term_negative".to_string(),
                style.number(style.units(report.term_negative)),
            ]);
            rows.push(vec![
                "term_interaction".to_string(),
                style.number(style.units(report.term_interaction)),
            ]);
            rows.push(vec![format!("R_{n}"), style.number(redundancy)]);
            rows.push(vec!["verdict".to_string(), verdict.to_string()]);
            render::table(&["quantity", "value"], &rows, format)
        }
    };
    print!("{text}");
    Ok(())
}

fn resolve_policy(
    kind: KindArg,
    policy: Option<PolicyArg>,
    seed: u64,
    p_plus: f64,
) -> Option<BranchPolicy> {
    let to_lib = |p: PolicyArg| match p {
        PolicyArg::AlwaysPlus => BranchPolicy::AlwaysPlus,
        PolicyArg::AlwaysMinus => BranchPolicy::AlwaysMinus,
        PolicyArg::Alternate => BranchPolicy::Alternate,
        PolicyArg::Random => BranchPolicy::Random { seed, p_plus },
    };
    match kind {
        KindArg::HyperIncursive => Some(to_lib(policy.unwrap_or(PolicyArg::Random))),
        _ => policy.map(to_lib),
    }
}

fn cmd_map(args: &MapArgs, style: Style, seed: u64) -> Result<(), Failure> {
    let policy = resolve_policy(args.kind, args.policy, seed, args.p_plus);
    let spec = MapSpec::new(args.kind.into(), args.a, args.x0, policy)?;
    let traj = maps::trajectory(&spec, args.steps)?;
    let text = match style.format {
        Format::Json => {
            let states: Vec<Value> =
                traj.states.iter().map(|&x| style.json_number(x)).collect();
            render::json_document(render::object(vec![
                ("kind", json!(args.kind.name())),
                ("a", style.json_number(args.a)),
                ("x0", style.json_number(args.x0)),
                ("steps", json!(args.steps)),
                ("states", Value::Array(states)),
            ]))
        }
        format => {
            let rows: Vec<Vec<String>> = traj
                .states
                .iter()
                .enumerate()
                .map(|(t, &x)| vec![t.to_string(), style.number(x)])
                .collect();
            render::table(&["t", "x"], &rows, format)
        }
    };
    print!("{text}");
    Ok(())
}

fn cmd_bifurcate(args: &BifurcateArgs, style: Style, seed: u64) -> Result<(), Failure> {
    let cfg = ScanConfig {
        kind: args.kind.into(),
        a_min: args.a_min,
        a_max: args.a_max,
        a_steps: args.grid,
        x0: args.x0,
        transient: args.transient,
        samples: args.samples,
        policy: resolve_policy(args.kind, args.policy, seed, args.p_plus),
    };
    let scan = maps::bifurcation_scan(&cfg)?;
    let content = match args.out {
        OutKind::Csv => maps::scan_to_csv(&scan, style.precision),
        OutKind::Svg => maps::scan_to_svg(&scan),
    };
    match &args.path {
        Some(path) => std::fs::write(path, content)
            .map_err(|e| Failure::input(format!("Io: {}: {e}", path.display())))?,
        None => print!("{content}"),
    }
    Ok(())
}

/// Reads an edge list: a two-column CSV headered "source,target".
fn load_edges(path: &PathBuf, directed: bool) -> Result<Graph, Failure> {
    let table = tabular::load_table_path(path)?;
    if table.headers != ["source", "target"] {
        return Err(Failure::input(format!(
            "InvalidEdgeList: expected header \"source,target\", got {:?}",
            table.headers.join(",")
        )));
    }
    let mut edges = Vec::with_capacity(table.rows.len());
    for (i, row) in table.rows.iter().enumerate() {
        match (&row[0], &row[1]) {
            (Some(from), Some(to)) => edges.push((from.as_str(), to.as_str())),
            _ => {
                return Err(Failure::input(format!(
                    "InvalidEdgeList: row {} is missing an endpoint",
                    i + 2
                )))
            }
        }
    }
    Ok(Graph::from_edge_list(&edges, directed)?)
}

fn cmd_structure(args: &StructureArgs, style: Style) -> Result<(), Failure> {
    let graph = load_edges(&args.file, args.directed)?;
    let measure = match args.measure {
        MeasureArg::Pearson => SimilarityMeasure::Pearson,
        MeasureArg::Cosine => SimilarityMeasure::Cosine,
    };
    let distances = graph.geodesic_distances();
    let similarity = network::positional_correlation(&graph, measure)?;
    let census = if args.directed {
        Some(network::triad_census(&graph)?)
    } else {
        None
    };
    let nodes = graph.nodes().to_vec();
    let text = match style.format {
        Format::Json => {
            let geodesic: Vec<Value> = distances
                .iter()
                .map(|row| {
                    Value::Array(row.iter().map(|d| json!(d)).collect())
                })
                .collect();
            let sim: Vec<Value> = similarity
                .values
                .iter()
                .map(|row| {
                    Value::Array(
                        row.iter()
                            .map(|v| match v {
                                Some(x) => style.json_number(*x),
                                None => Value::Null,
                            })
                            .collect(),
                    )
                })
                .collect();
            let mut entries = vec![
                ("nodes", json!(nodes)),
                ("geodesic", Value::Array(geodesic)),
                ("similarity", Value::Array(sim)),
            ];
            if let Some(c) = census {
                entries.push((
                    "census",
                    render::object(vec![
                        ("transitive", json!(c.transitive)),
                        ("cyclic", json!(c.cyclic)),
                        ("other", json!(c.other)),
                    ]),
                ));
            }
            render::json_document(render::object(entries))
        }
        format => {
            let mut out = render::matrix("geodesic", &nodes, &distances, format, |d| {
                match d {
                    Some(steps) => steps.to_string(),
                    None => "inf".to_string(),
                }
            });
            out.push('\n');
            out.push_str(&render::matrix(
                "similarity",
                &nodes,
                &similarity.values,
                format,
                |v| match v {
                    Some(x) => style.number(*x),
                    None => "undefined".to_string(),
                },
            ));
            if let Some(c) = census {
                out.push('\n');
                out.push_str("# census\n");
                out.push_str(&render::table(
                    &["pattern", "count"],
                    &[
                        vec!["transitive".to_string(), c.transitive.to_string()],
                        vec!["cyclic".to_string(), c.cyclic.to_string()],
                        vec!["other".to_string(), c.other.to_string()],
                    ],
                    format,
                ));
            }
            out
        }
    };
    print!("{text}");
    Ok(())
}
