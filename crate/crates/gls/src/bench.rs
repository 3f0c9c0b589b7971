//! Repeated, seeded k-sweeps written to CSV one row at a time.
//!
//! Columns: `dataset,method,k,psi_graph,psi_tree,labels_used,decompose_ms,
//! select_ms,evaluate_ms,seed,repeat_index`. Objective values are six-decimal
//! round-half-even strings or `inf`; times are milliseconds. Rows already in
//! the file are skipped, so an interrupted run resumes where it stopped.

use std::collections::HashSet;
use std::fs::{self, OpenOptions};
use std::path::{Path, PathBuf};
use std::time::Instant;

use gls_core::eval::eval_graph_objective;
use gls_core::select::{decompose, select_labels};
use gls_core::{BisectMethod, ImportanceSpec, WeightedGraph};
use serde::{Deserialize, Serialize};

use crate::error::{CliError, Result};
use crate::labels::{format_labels, ms};
use crate::partitioner::ExternalPartitioner;

pub const COLUMNS: [&str; 11] = [
    "dataset",
    "method",
    "k",
    "psi_graph",
    "psi_tree",
    "labels_used",
    "decompose_ms",
    "select_ms",
    "evaluate_ms",
    "seed",
    "repeat_index",
];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchRow {
    pub dataset: String,
    pub method: String,
    pub k: usize,
    pub psi_graph: String,
    pub psi_tree: String,
    pub labels_used: usize,
    pub decompose_ms: f64,
    pub select_ms: f64,
    pub evaluate_ms: f64,
    pub seed: u64,
    pub repeat_index: usize,
}

/// Parses `fiedler`, `fiedler-balanced:<beta>` or `sampled:<samples>`.
pub fn parse_method(name: &str, seed: u64) -> Result<BisectMethod> {
    let bad = |msg: String| CliError::Usage(format!("method `{name}`: {msg}"));
    let (kind, arg) = match name.split_once(':') {
        Some((k, a)) => (k, Some(a)),
        None => (name, None),
    };
    match (kind, arg) {
        ("fiedler", None) => Ok(BisectMethod::fiedler(seed)),
        ("fiedler-balanced", Some(a)) => {
            let beta = a.parse().map_err(|_| bad(format!("bad beta `{a}`")))?;
            BisectMethod::fiedler_balanced(beta, seed).map_err(|e| bad(e.to_string()))
        }
        ("sampled", Some(a)) => {
            let samples = a.parse().map_err(|_| bad(format!("bad sample count `{a}`")))?;
            BisectMethod::sampled(samples, seed).map_err(|e| bad(e.to_string()))
        }
        ("fiedler-balanced", None) => Err(bad(String::from("expected fiedler-balanced:<beta>"))),
        ("sampled", None) => Err(bad(String::from("expected sampled:<samples>"))),
        _ => Err(bad(String::from("unknown method; use fiedler, fiedler-balanced:<beta> or sampled:<samples>"))),
    }
}

#[derive(Debug, Clone)]
pub struct BenchConfig {
    pub dataset: String,
    pub k_list: Vec<usize>,
    pub methods: Vec<String>,
    pub repeats: usize,
    pub seed_base: u64,
    pub importance: ImportanceSpec,
    pub partitioner_cmd: Option<String>,
    /// Where to store the labels behind each row, if anywhere.
    pub labels_dir: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct BenchReport {
    pub written: usize,
    pub skipped: usize,
}

pub fn read_rows(path: &Path) -> Result<Vec<BenchRow>> {
    let mut reader = csv::Reader::from_path(path)?;
    let header: Vec<String> = reader.headers()?.iter().map(str::to_string).collect();
    if header != COLUMNS {
        return Err(CliError::Data(format!("{}: unexpected CSV header {}", path.display(), header.join(","))));
    }
    reader.deserialize().map(|r| r.map_err(CliError::from)).collect()
}

pub fn labels_file_name(dataset: &str, method: &str, k: usize, repeat: usize) -> String {
    let clean = |s: &str| {
        s.chars().map(|c| if c.is_ascii_alphanumeric() || c == '.' || c == '-' { c } else { '_' }).collect::<String>()
    };
    format!("{}__{}__k{k}__r{repeat}.labels", clean(dataset), clean(method))
}

/// Runs every `(method, repeat, k)` not yet present in `csv_path`.
pub fn run_bench(g: &WeightedGraph, cfg: &BenchConfig, csv_path: &Path) -> Result<BenchReport> {
    if cfg.k_list.is_empty() || cfg.methods.is_empty() || cfg.repeats == 0 {
        return Err(CliError::Usage(String::from("need at least one k, one method and one repeat")));
    }
    if let Some(&k) = cfg.k_list.iter().find(|&&k| k < 1 || k > g.n()) {
        return Err(CliError::Usage(format!("k = {k} outside 1..={}", g.n())));
    }
    for name in &cfg.methods {
        let m = parse_method(name, cfg.seed_base)?;
        if matches!(m.variant, gls_core::bisect::BisectVariant::Sampled { .. }) && cfg.partitioner_cmd.is_none() {
            return Err(CliError::Usage(format!("method `{name}` needs --partitioner-cmd")));
        }
    }
    let f = cfg.importance.resolve(g)?;
    if let Some(dir) = &cfg.labels_dir {
        fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))?;
    }

    let exists = fs::metadata(csv_path).map(|m| m.len() > 0).unwrap_or(false);
    let done: HashSet<(String, usize, usize)> = if exists {
        read_rows(csv_path)?.into_iter().map(|r| (r.method, r.k, r.repeat_index)).collect()
    } else {
        HashSet::new()
    };
    let file = OpenOptions::new().create(true).append(true).open(csv_path).map_err(|e| CliError::io(csv_path, e))?;
    let mut writer = csv::WriterBuilder::new().has_headers(!exists).from_writer(file);

    let mut report = BenchReport::default();
    for name in &cfg.methods {
        for repeat in 0..cfg.repeats {
            let seed = cfg.seed_base + repeat as u64;
            let method = parse_method(name, seed)?;
            let descriptor = method.descriptor();
            let todo: Vec<usize> =
                cfg.k_list.iter().copied().filter(|&k| !done.contains(&(descriptor.clone(), k, repeat))).collect();
            report.skipped += cfg.k_list.len() - todo.len();
            if todo.is_empty() {
                continue;
            }
            let mut external = cfg.partitioner_cmd.as_deref().map(ExternalPartitioner::new).transpose()?;
            let t0 = Instant::now();
            let tree = decompose(g, &method, external.as_mut().map(|p| p as &mut dyn gls_core::Partitioner))?;
            let decompose_ms = ms(t0.elapsed());
            for k in todo {
                let t1 = Instant::now();
                let sel = select_labels(&tree, k, &f)?;
                let select_ms = ms(t1.elapsed());
                let t2 = Instant::now();
                let psi_graph = eval_graph_objective(g, &sel.label_vertices, &f)?;
                let evaluate_ms = ms(t2.elapsed());
                if let Some(dir) = &cfg.labels_dir {
                    let path = dir.join(labels_file_name(&cfg.dataset, &descriptor, k, repeat));
                    fs::write(&path, format_labels(&sel.labels)).map_err(|e| CliError::io(&path, e))?;
                }
                writer.serialize(BenchRow {
                    dataset: cfg.dataset.clone(),
                    method: descriptor.clone(),
                    k,
                    psi_graph: psi_graph.to_decimal(),
                    psi_tree: sel.tree_value.to_decimal(),
                    labels_used: sel.k_used,
                    decompose_ms,
                    select_ms,
                    evaluate_ms,
                    seed,
                    repeat_index: repeat,
                })?;
                writer.flush().map_err(|e| CliError::io(csv_path, e))?;
                report.written += 1;
            }
        }
    }
    Ok(report)
}
