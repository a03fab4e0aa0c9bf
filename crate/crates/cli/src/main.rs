//! `graphmine` command-line interface.
//!
//! Results go to `--out` when given, otherwise to stdout; diagnostics go to
//! stderr. Exit codes: 0 success, 2 input or validation error, 3 graph
//! contract violation (disconnected graph, isolated node).

use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use graphmine::community::modularity;
use graphmine::eval::{classification_auc, nmi};
use graphmine::graph::connected_erdos_renyi_gnm;
use graphmine::graph::erdos_renyi_gnm;
use graphmine::io;
use graphmine::node_embedding::generate_walks;
use graphmine::{
    CommunityDetector, DeepWalkModel, Error, Graph, GraphEmbedder, LabelPropagationModel, NetLsdModel, NetMfModel,
    NodeEmbedder, RandomSource, ScdModel, SfModel, SymNmfModel, WalkletsModel, WlSvdModel,
};

#[derive(Parser)]
#[command(name = "graphmine", version, about = "Community detection and graph embedding")]
struct Cli {
    /// Worker threads for parallel stages (results do not depend on it).
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Sample an Erdős–Rényi G(n, m) graph as an edge list.
    Generate(GenerateArgs),
    /// Detect communities and write membership JSON.
    Cluster(ClusterArgs),
    /// Embed the nodes of a graph and write an embedding CSV.
    EmbedNodes(EmbedNodesArgs),
    /// Embed every graph of a JSONL corpus and write an embedding CSV.
    EmbedGraphs(EmbedGraphsArgs),
    /// Compute an evaluation metric.
    #[command(subcommand)]
    Eval(EvalCommand),
    /// Time model fitting on generated graphs and write CSV timings.
    Bench(BenchArgs),
}

#[derive(Args)]
struct GenerateArgs {
    #[arg(long)]
    nodes: usize,
    #[arg(long)]
    edges: usize,
    #[arg(long, default_value_t = 42)]
    seed: u64,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum ClusterAlgo {
    LabelPropagation,
    Scd,
    Symnmf,
}

#[derive(Args)]
struct ClusterArgs {
    #[arg(long, value_enum)]
    algo: ClusterAlgo,
    /// Edge-list file.
    #[arg(long)]
    graph: PathBuf,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, default_value_t = 42)]
    seed: u64,
    /// Label propagation sweeps.
    #[arg(long, default_value_t = 100)]
    max_iterations: usize,
    /// SCD hill-climbing rounds.
    #[arg(long, default_value_t = 25)]
    refinement_rounds: usize,
    /// SymNMF latent communities.
    #[arg(long, default_value_t = 32)]
    dimensions: usize,
    /// SymNMF update count.
    #[arg(long, default_value_t = 200)]
    iterations: usize,
    /// SymNMF relative loss-change stopping threshold.
    #[arg(long, default_value_t = 1e-6)]
    tolerance: f64,
}

#[derive(Clone, Copy, ValueEnum)]
enum NodeAlgo {
    Deepwalk,
    Walklets,
    Netmf,
}

#[derive(Args)]
struct EmbedNodesArgs {
    #[arg(long, value_enum)]
    algo: NodeAlgo,
    #[arg(long)]
    graph: PathBuf,
    #[arg(long)]
    out: Option<PathBuf>,
    /// Output width (per scale for walklets). Defaults: deepwalk 128, walklets 32, netmf 32.
    #[arg(long)]
    dimensions: Option<usize>,
    #[arg(long, default_value_t = 42)]
    seed: u64,
    #[arg(long, default_value_t = 10)]
    walk_number: usize,
    #[arg(long, default_value_t = 80)]
    walk_length: usize,
    /// Skip-gram window (deepwalk) or number of scales (walklets). Defaults: 5 and 4.
    #[arg(long)]
    window_size: Option<usize>,
    /// NetMF window `T`.
    #[arg(long, default_value_t = 2)]
    order: usize,
}

#[derive(Clone, Copy, ValueEnum)]
enum GraphAlgo {
    Sf,
    Netlsd,
    WlSvd,
}

#[derive(Args)]
struct EmbedGraphsArgs {
    #[arg(long, value_enum)]
    algo: GraphAlgo,
    /// JSONL corpus file.
    #[arg(long)]
    corpus: PathBuf,
    #[arg(long)]
    out: Option<PathBuf>,
    /// Output width for sf and wl-svd. Defaults: sf 32, wl-svd 128.
    #[arg(long)]
    dimensions: Option<usize>,
    #[arg(long, default_value_t = 2)]
    wl_iterations: usize,
    #[arg(long, default_value_t = 42)]
    seed: u64,
}

#[derive(Subcommand)]
enum EvalCommand {
    /// NMI between two membership JSON files.
    Nmi { a: PathBuf, b: PathBuf },
    /// Modularity of a membership JSON on an edge-list graph.
    Modularity { graph: PathBuf, memberships: PathBuf },
    /// Test AUC of softmax regression on an embedding CSV and labels file.
    Classify {
        embedding: PathBuf,
        labels: PathBuf,
        #[arg(long, default_value_t = 0.8)]
        ratio: f64,
        #[arg(long, default_value_t = 42)]
        seed: u64,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum BenchTask {
    Cluster,
    EmbedNodes,
}

#[derive(Args)]
struct BenchArgs {
    #[arg(long, value_enum)]
    task: BenchTask,
    /// Cluster: label-propagation, scd, symnmf. Embed-nodes: deepwalk,
    /// walklets, netmf, or walks (random-walk generation alone).
    #[arg(long)]
    algo: String,
    /// Ascending node counts. Default 4096.
    #[arg(long, value_delimiter = ',')]
    sizes: Option<Vec<usize>>,
    /// Mean degrees; m = degree·n/2. Default 10 when --sizes is given,
    /// otherwise the densification grid 5,10,20,40.
    #[arg(long, value_delimiter = ',')]
    degree: Option<Vec<usize>>,
    #[arg(long, default_value_t = 3)]
    repeats: usize,
    #[arg(long, default_value_t = 42)]
    seed: u64,
    #[arg(long)]
    out: Option<PathBuf>,
}

const DENSIFICATION_NODES: usize = 1 << 12;
const DENSIFICATION_DEGREES: [usize; 4] = [5, 10, 20, 40];

fn read(path: &Path) -> Result<String, Error> {
    fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}

fn emit(out: Option<&Path>, payload: &str) -> Result<(), Error> {
    match out {
        Some(path) => fs::write(path, payload).map_err(|e| Error::Io(format!("{}: {e}", path.display()))),
        None => write_stdout(payload),
    }
}

/// A reader that closes the pipe early (`| head`) is not an error.
fn write_stdout(payload: &str) -> Result<(), Error> {
    let mut stdout = std::io::stdout().lock();
    match stdout.write_all(payload.as_bytes()).and_then(|()| stdout.flush()) {
        Err(e) if e.kind() != std::io::ErrorKind::BrokenPipe => Err(Error::Io(format!("stdout: {e}"))),
        _ => Ok(()),
    }
}

fn cluster_model(args: &ClusterArgs) -> Box<dyn CommunityDetector> {
    match args.algo {
        ClusterAlgo::LabelPropagation => Box::new(LabelPropagationModel::new(args.seed, args.max_iterations)),
        ClusterAlgo::Scd => Box::new(ScdModel::new(args.refinement_rounds)),
        ClusterAlgo::Symnmf => Box::new(SymNmfModel::new(args.dimensions, args.iterations, args.tolerance, args.seed)),
    }
}

fn node_model(args: &EmbedNodesArgs) -> Box<dyn NodeEmbedder> {
    match args.algo {
        NodeAlgo::Deepwalk => {
            let mut m = DeepWalkModel::default();
            m.dimensions = args.dimensions.unwrap_or(m.dimensions);
            m.window_size = args.window_size.unwrap_or(m.window_size);
            m.walk_number = args.walk_number;
            m.walk_length = args.walk_length;
            m.seed = args.seed;
            Box::new(m)
        }
        NodeAlgo::Walklets => {
            let mut m = WalkletsModel::default();
            m.dimensions = args.dimensions.unwrap_or(m.dimensions);
            m.window_size = args.window_size.unwrap_or(m.window_size);
            m.walk_number = args.walk_number;
            m.walk_length = args.walk_length;
            m.seed = args.seed;
            Box::new(m)
        }
        NodeAlgo::Netmf => {
            let mut m = NetMfModel::default();
            m.dimensions = args.dimensions.unwrap_or(m.dimensions);
            m.order = args.order;
            m.seed = args.seed;
            Box::new(m)
        }
    }
}

fn graph_model(args: &EmbedGraphsArgs) -> Box<dyn GraphEmbedder> {
    match args.algo {
        GraphAlgo::Sf => Box::new(SfModel::new(args.dimensions.unwrap_or(SfModel::default().dimensions))),
        GraphAlgo::Netlsd => Box::new(NetLsdModel::new()),
        GraphAlgo::WlSvd => Box::new(WlSvdModel::new(
            args.wl_iterations,
            args.dimensions.unwrap_or(WlSvdModel::default().dimensions),
            args.seed,
        )),
    }
}

fn generate(args: &GenerateArgs) -> Result<(), Error> {
    let g = erdos_renyi_gnm(args.nodes, args.edges, RandomSource::from_seed(args.seed))?;
    emit(args.out.as_deref(), &io::format_edge_list(&g))
}

fn cluster(args: &ClusterArgs) -> Result<(), Error> {
    let g = io::parse_edge_list(&read(&args.graph)?)?;
    let mut model = cluster_model(args);
    model.fit(&g)?;
    emit(args.out.as_deref(), &io::format_membership_json(model.get_memberships()?))
}

fn embed_nodes(args: &EmbedNodesArgs) -> Result<(), Error> {
    let g = io::parse_edge_list(&read(&args.graph)?)?;
    let mut model = node_model(args);
    model.fit(&g)?;
    emit(args.out.as_deref(), &io::format_embedding_csv(model.get_embedding()?))
}

fn embed_graphs(args: &EmbedGraphsArgs) -> Result<(), Error> {
    let corpus = io::parse_corpus_jsonl(&read(&args.corpus)?)?;
    let mut model = graph_model(args);
    model.fit(&corpus)?;
    emit(args.out.as_deref(), &io::format_embedding_csv(model.get_embedding()?))
}

fn evaluate(command: &EvalCommand) -> Result<(), Error> {
    let value = match command {
        EvalCommand::Nmi { a, b } => {
            let a = io::parse_membership_json(&read(a)?)?;
            let b = io::parse_membership_json(&read(b)?)?;
            nmi(a.assignments(), b.assignments())?
        }
        EvalCommand::Modularity { graph, memberships } => {
            let g = io::parse_edge_list(&read(graph)?)?;
            modularity(&g, &io::parse_membership_json(&read(memberships)?)?)?
        }
        EvalCommand::Classify { embedding, labels, ratio, seed } => {
            let e = io::parse_embedding_csv(&read(embedding)?)?;
            classification_auc(&e, &io::parse_labels(&read(labels)?)?, *ratio, *seed)?
        }
    };
    write_stdout(&format!("{value:?}\n"))
}

/// A fit routine timed by the benchmark; graph generation is excluded.
type BenchFit = Box<dyn Fn(&Graph) -> Result<(), Error>>;

fn bench_fit(task: BenchTask, algo: &str, seed: u64) -> Result<BenchFit, Error> {
    let fit: BenchFit = match (task, algo) {
        (BenchTask::Cluster, "label-propagation") => {
            Box::new(move |g| LabelPropagationModel::new(seed, 100).fit(g))
        }
        (BenchTask::Cluster, "scd") => Box::new(|g| ScdModel::default().fit(g)),
        (BenchTask::Cluster, "symnmf") => Box::new(move |g| SymNmfModel::new(32, 200, 1e-6, seed).fit(g)),
        (BenchTask::EmbedNodes, "deepwalk") => Box::new(move |g| {
            let mut m = DeepWalkModel::default();
            m.seed = seed;
            m.fit(g)
        }),
        (BenchTask::EmbedNodes, "walklets") => Box::new(move |g| {
            let mut m = WalkletsModel::default();
            m.seed = seed;
            m.fit(g)
        }),
        (BenchTask::EmbedNodes, "netmf") => Box::new(move |g| {
            let mut m = NetMfModel::default();
            m.seed = seed;
            m.fit(g)
        }),
        (BenchTask::EmbedNodes, "walks") => Box::new(move |g| {
            let d = DeepWalkModel::default();
            generate_walks(g, d.walk_number, d.walk_length, RandomSource::new(seed, 0)).map(|_| ())
        }),
        _ => return Err(Error::InvalidParameter(format!("unknown benchmark algorithm {algo:?} for this task"))),
    };
    Ok(fit)
}

fn bench(args: &BenchArgs) -> Result<(), Error> {
    let (sizes, degrees) = match (&args.sizes, &args.degree) {
        (Some(s), Some(d)) => (s.clone(), d.clone()),
        (Some(s), None) => (s.clone(), vec![10]),
        (None, Some(d)) => (vec![DENSIFICATION_NODES], d.clone()),
        (None, None) => (vec![DENSIFICATION_NODES], DENSIFICATION_DEGREES.to_vec()),
    };
    if sizes.is_empty() || sizes.windows(2).any(|w| w[1] <= w[0]) || sizes[0] < 2 {
        return Err(Error::InvalidParameter("--sizes must be strictly ascending and at least 2".into()));
    }
    if args.repeats < 3 {
        return Err(Error::InvalidParameter("--repeats must be at least 3".into()));
    }
    let fit = bench_fit(args.task, &args.algo, args.seed)?;
    let mut csv = String::from("algo,n,m,repeat,seconds\n");
    for &degree in &degrees {
        for &n in &sizes {
            if degree == 0 || (degree * n) % 2 != 0 {
                return Err(Error::InvalidParameter(format!("degree {degree} on {n} nodes gives a fractional edge count")));
            }
            let m = degree * n / 2;
            let g = connected_erdos_renyi_gnm(n, m, RandomSource::new(args.seed, 0))?;
            // Untimed warm-up so allocator and cache state do not bias the first repeat.
            fit(&g)?;
            let mut total = 0.0;
            for repeat in 0..args.repeats {
                let start = Instant::now();
                fit(&g)?;
                let seconds = start.elapsed().as_secs_f64().max(f64::MIN_POSITIVE);
                total += seconds;
                csv.push_str(&format!("{},{n},{m},{repeat},{seconds:.9}\n", args.algo));
            }
            csv.push_str(&format!("{},{n},{m},mean,{:.9}\n", args.algo, total / args.repeats as f64));
        }
    }
    emit(args.out.as_deref(), &csv)
}

fn run(cli: &Cli) -> Result<(), Error> {
    if let Some(threads) = cli.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build_global()
            .map_err(|e| Error::InvalidParameter(format!("thread pool: {e}")))?;
    }
    match &cli.command {
        Command::Generate(a) => generate(a),
        Command::Cluster(a) => cluster(a),
        Command::EmbedNodes(a) => embed_nodes(a),
        Command::EmbedGraphs(a) => embed_graphs(a),
        Command::Eval(c) => evaluate(c),
        Command::Bench(a) => bench(a),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(if e.is_graph_contract() { 3 } else { 2 })
        }
    }
}
