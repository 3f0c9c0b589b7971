use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use gls_core::eval::{brute_force_opt, eval_graph_objective, eval_tree_objective};
use gls_core::select::{decompose, gls_pipeline_with_clock, PhaseTimings};
use gls_core::{
    BisectMethod, DecompTree, Importance, ImportanceSpec, Objective, Partitioner, PipelineOptions, WeightedGraph,
};

use gls::bench::{run_bench, BenchConfig};
use gls::edgelist::load_graph;
use gls::labels::{dense_importance, format_labels, format_summary, ms, read_importance, read_labels, to_dense};
use gls::partitioner::ExternalPartitioner;
use gls::treefile::{read_tree, save_tree};
use gls::{CliError, Result};

/// Graph label selection: choose k vertices to label so that no unlabeled
/// region is poorly connected to the labels.
#[derive(Parser)]
#[command(name = "gls", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build a decomposition tree and write it as a .dt file
    Decompose {
        #[arg(long)]
        input: PathBuf,
        #[command(flatten)]
        method: MethodArgs,
        #[arg(long)]
        output: PathBuf,
    },
    /// Pick labels on an existing decomposition tree
    Select {
        #[arg(long)]
        tree: PathBuf,
        #[arg(long)]
        k: usize,
        #[command(flatten)]
        importance: ImportanceArgs,
        /// Edge list to evaluate the labels on
        #[arg(long)]
        graph: Option<PathBuf>,
        #[arg(long)]
        labels_out: Option<PathBuf>,
        #[arg(long)]
        summary_out: Option<PathBuf>,
    },
    /// Decompose, select and evaluate in one go
    Run {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        k: usize,
        #[command(flatten)]
        method: MethodArgs,
        #[command(flatten)]
        importance: ImportanceArgs,
        #[arg(long)]
        tree_out: Option<PathBuf>,
        #[arg(long)]
        labels_out: Option<PathBuf>,
        #[arg(long)]
        summary_out: Option<PathBuf>,
    },
    /// Exact objective of a given label set
    Evaluate {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        labels: PathBuf,
        /// Also report the tree objective on this decomposition
        #[arg(long)]
        tree: Option<PathBuf>,
        #[command(flatten)]
        importance: ImportanceArgs,
    },
    /// Brute-force optimum on small graphs
    Oracle {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        k: usize,
        #[command(flatten)]
        importance: ImportanceArgs,
    },
    /// Seeded k-sweeps over several methods, appended to a CSV
    Bench {
        #[arg(long)]
        input: PathBuf,
        #[arg(long, value_delimiter = ',', required = true)]
        k_list: Vec<usize>,
        /// fiedler, fiedler-balanced:<beta>, sampled:<samples>
        #[arg(long, value_delimiter = ',', default_value = "fiedler")]
        methods: Vec<String>,
        #[arg(long, default_value_t = 1)]
        repeats: usize,
        #[arg(long, default_value_t = 0)]
        seed_base: u64,
        #[arg(long)]
        csv: PathBuf,
        /// Dataset column; defaults to the input file stem
        #[arg(long)]
        dataset: Option<String>,
        #[arg(long)]
        partitioner_cmd: Option<String>,
        /// Store the labels behind every row here
        #[arg(long)]
        labels_dir: Option<PathBuf>,
        #[command(flatten)]
        importance: ImportanceArgs,
    },
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Bisect {
    Fiedler,
    FiedlerBalanced,
    Sampled,
}

#[derive(Args)]
struct MethodArgs {
    #[arg(long, value_enum, default_value_t = Bisect::Fiedler)]
    bisect: Bisect,
    /// Balance fraction in (0, 0.5), fiedler-balanced only
    #[arg(long)]
    beta: Option<f64>,
    /// Number of partitioner calls per split, sampled only
    #[arg(long)]
    samples: Option<usize>,
    /// Command template with {input} and {fraction}, sampled only
    #[arg(long)]
    partitioner_cmd: Option<String>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

impl MethodArgs {
    fn method(&self) -> Result<(BisectMethod, Option<ExternalPartitioner>)> {
        let usage = |m: &str| Err(CliError::Usage(m.to_string()));
        if self.beta.is_some() && self.bisect != Bisect::FiedlerBalanced {
            return usage("--beta requires --bisect fiedler-balanced");
        }
        if self.samples.is_some() && self.bisect != Bisect::Sampled {
            return usage("--samples requires --bisect sampled");
        }
        if self.partitioner_cmd.is_some() && self.bisect != Bisect::Sampled {
            return usage("--partitioner-cmd requires --bisect sampled");
        }
        let bad = |e: gls_core::Error| CliError::Usage(e.to_string());
        match self.bisect {
            Bisect::Fiedler => Ok((BisectMethod::fiedler(self.seed), None)),
            Bisect::FiedlerBalanced => {
                let Some(beta) = self.beta else { return usage("fiedler-balanced needs --beta") };
                Ok((BisectMethod::fiedler_balanced(beta, self.seed).map_err(bad)?, None))
            }
            Bisect::Sampled => {
                let (Some(samples), Some(cmd)) = (self.samples, &self.partitioner_cmd) else {
                    return usage("sampled needs --samples and --partitioner-cmd");
                };
                let method = BisectMethod::sampled(samples, self.seed).map_err(bad)?;
                Ok((method, Some(ExternalPartitioner::new(cmd.as_str()).map_err(bad)?)))
            }
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ImportanceKind {
    Uniform,
    Degree,
    File,
}

#[derive(Args)]
struct ImportanceArgs {
    #[arg(long, value_enum, default_value_t = ImportanceKind::Uniform)]
    importance: ImportanceKind,
    /// `<vertex id> <value>` lines; unlisted vertices get 0
    #[arg(long)]
    importance_file: Option<PathBuf>,
}

impl ImportanceArgs {
    /// The spec in the dense order of `ids`.
    fn spec(&self, ids: &[u64]) -> Result<ImportanceSpec> {
        match (self.importance, &self.importance_file) {
            (ImportanceKind::Uniform, None) => Ok(ImportanceSpec::Uniform),
            (ImportanceKind::Degree, None) => Ok(ImportanceSpec::Degree),
            (ImportanceKind::File, Some(path)) => {
                Ok(ImportanceSpec::Values(dense_importance(&read_importance(path)?, ids)?))
            }
            (ImportanceKind::File, None) => {
                Err(CliError::Usage(String::from("--importance file needs --importance-file")))
            }
            (_, Some(_)) => Err(CliError::Usage(String::from("--importance-file requires --importance file"))),
        }
    }

    fn resolve(&self, g: &WeightedGraph) -> Result<Importance> {
        Ok(self.spec(g.orig_ids())?.resolve(g)?)
    }
}

fn check_k(k: usize, n: usize) -> Result<()> {
    if k < 1 || k > n {
        return Err(CliError::Usage(format!("--k {k} outside 1..={n}")));
    }
    Ok(())
}

fn write_file(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text).map_err(|e| CliError::io(path, e))
}

fn show(name: &str, v: Objective) {
    println!("{name}={v}");
    if let Objective::Finite(_) = v {
        println!("{name}_decimal={}", v.to_decimal());
    }
}

fn emit_selection(sel: &gls_core::Selection, labels_out: Option<&Path>, summary_out: Option<&Path>) -> Result<()> {
    let summary = format_summary(sel);
    print!("{summary}");
    let ids: Vec<String> = sel.labels.iter().map(u64::to_string).collect();
    println!("labels={}", ids.join(" "));
    if let Some(p) = labels_out {
        write_file(p, &format_labels(&sel.labels))?;
    }
    if let Some(p) = summary_out {
        write_file(p, &summary)?;
    }
    Ok(())
}

fn load_tree_for(path: &Path, g: Option<&WeightedGraph>) -> Result<DecompTree> {
    let tree = read_tree(path)?;
    match g {
        Some(g) => tree.align_to_graph(g).map_err(|e| CliError::Data(format!("{}: {e}", path.display()))),
        None => Ok(tree),
    }
}

fn execute(cmd: Command) -> Result<()> {
    match cmd {
        Command::Decompose { input, method, output } => {
            let (method, mut external) = method.method()?;
            let g = load_graph(&input)?;
            let start = Instant::now();
            let tree = decompose(&g, &method, external.as_mut().map(|p| p as &mut dyn Partitioner))?;
            let wall = start.elapsed();
            save_tree(&tree, &output)?;
            println!("nodes={}", tree.len());
            println!("leaves={}", tree.num_leaves());
            println!("wall_ms={:.3}", ms(wall));
        }
        Command::Select { tree, k, importance, graph, labels_out, summary_out } => {
            let g = graph.as_deref().map(load_graph).transpose()?;
            let tree = load_tree_for(&tree, g.as_ref())?;
            check_k(k, tree.num_leaves())?;
            let f = match &g {
                Some(g) => importance.resolve(g)?,
                None => match importance.spec(tree.vertex_ids())? {
                    ImportanceSpec::Uniform => Importance::Uniform,
                    ImportanceSpec::Values(v) => Importance::PerVertex(v),
                    ImportanceSpec::Degree => {
                        return Err(CliError::Usage(String::from("--importance degree needs --graph")))
                    }
                },
            };
            let t0 = Instant::now();
            let mut sel = gls_core::select_labels(&tree, k, &f)?;
            let t1 = Instant::now();
            if let Some(g) = &g {
                sel.graph_value = Some(eval_graph_objective(g, &sel.label_vertices, &f)?);
            }
            sel.timings = PhaseTimings { decompose: Default::default(), select: t1 - t0, evaluate: t1.elapsed() };
            emit_selection(&sel, labels_out.as_deref(), summary_out.as_deref())?;
        }
        Command::Run { input, k, method, importance, tree_out, labels_out, summary_out } => {
            let (method, mut external) = method.method()?;
            let g = load_graph(&input)?;
            check_k(k, g.n())?;
            let spec = importance.spec(g.orig_ids())?;
            if let Some(path) = &tree_out {
                let mut again = external.clone();
                save_tree(&decompose(&g, &method, again.as_mut().map(|p| p as &mut dyn Partitioner))?, path)?;
            }
            let start = Instant::now();
            let opts = PipelineOptions {
                k,
                method,
                importance: spec,
                evaluate_graph: true,
                partitioner: external.as_mut().map(|p| p as &mut dyn Partitioner),
            };
            let sel = gls_pipeline_with_clock(&g, opts, &|| start.elapsed())?;
            emit_selection(&sel, labels_out.as_deref(), summary_out.as_deref())?;
        }
        Command::Evaluate { input, labels, tree, importance } => {
            let g = load_graph(&input)?;
            let set = to_dense(&read_labels(&labels)?, g.orig_ids())?;
            let f = importance.resolve(&g)?;
            show("psi_graph", eval_graph_objective(&g, &set, &f)?);
            if let Some(path) = tree {
                let tree = load_tree_for(&path, Some(&g))?;
                show("psi_tree", eval_tree_objective(&tree, &set, &f)?);
            }
        }
        Command::Oracle { input, k, importance } => {
            let g = load_graph(&input)?;
            if k > g.n() {
                return Err(CliError::Usage(format!("--k {k} exceeds {} vertices", g.n())));
            }
            let f = importance.resolve(&g)?;
            let (set, value) = brute_force_opt(&g, k, &f)?;
            show("opt", value);
            let ids: Vec<String> = set.iter().map(|v| g.orig_id(v).to_string()).collect();
            println!("labels={}", ids.join(" "));
        }
        Command::Bench {
            input,
            k_list,
            methods,
            repeats,
            seed_base,
            csv,
            dataset,
            partitioner_cmd,
            labels_dir,
            importance,
        } => {
            let g = load_graph(&input)?;
            let dataset = dataset.unwrap_or_else(|| {
                input.file_stem().map_or_else(|| String::from("graph"), |s| s.to_string_lossy().into_owned())
            });
            let cfg = BenchConfig {
                dataset,
                k_list,
                methods,
                repeats,
                seed_base,
                importance: importance.spec(g.orig_ids())?,
                partitioner_cmd,
                labels_dir,
            };
            let report = run_bench(&g, &cfg, &csv)?;
            println!("rows_written={}", report.written);
            println!("rows_skipped={}", report.skipped);
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    match execute(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
