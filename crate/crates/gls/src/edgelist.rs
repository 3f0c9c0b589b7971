//! Whitespace-separated edge lists: `u v [w]` per line, `#` comments.

use std::fs::File;
use std::io::{BufRead, BufReader, Write};
use std::path::Path;

use gls_core::graph::{preprocess, GraphBuilder};
use gls_core::WeightedGraph;

use crate::error::{CliError, Result};

fn parse_id(tok: &str, line: usize) -> Result<u64> {
    tok.parse().map_err(|_| CliError::parse(line, format!("vertex id `{tok}` is not a nonnegative integer")))
}

fn parse_weight(tok: &str, line: usize) -> Result<u64> {
    if let Ok(w) = tok.parse::<u64>() {
        if w == 0 {
            return Err(CliError::parse(line, "edge weight must be positive"));
        }
        return Ok(w);
    }
    match tok.parse::<f64>() {
        Ok(x) if x.is_finite() && x > 0.0 => Err(CliError::parse(
            line,
            format!("fractional weight `{tok}`; weights must be integers, pre-scale the input"),
        )),
        Ok(_) => Err(CliError::parse(line, format!("edge weight `{tok}` must be positive"))),
        Err(_) => Err(CliError::parse(line, format!("edge weight `{tok}` is not an integer"))),
    }
}

/// Parses an edge list without preprocessing. Ids are densified in order of
/// first appearance, parallel edges are summed and self-loops kept.
pub fn parse_edge_list(reader: impl BufRead) -> Result<WeightedGraph> {
    let mut builder = GraphBuilder::new();
    let mut edges = 0usize;
    for (i, line) in reader.lines().enumerate() {
        let no = i + 1;
        let line = line.map_err(|e| CliError::parse(no, e.to_string()))?;
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = line.split_whitespace().collect();
        let (u, v, w) = match fields.as_slice() {
            [u, v] => (parse_id(u, no)?, parse_id(v, no)?, 1),
            [u, v, w] => (parse_id(u, no)?, parse_id(v, no)?, parse_weight(w, no)?),
            _ => return Err(CliError::parse(no, format!("expected `u v [w]`, found {} fields", fields.len()))),
        };
        builder.add_edge(u, v, w)?;
        edges += 1;
    }
    if edges == 0 {
        return Err(CliError::Data(String::from("edge list contains no edges")));
    }
    Ok(builder.build()?)
}

pub fn write_edge_list(g: &WeightedGraph, mut out: impl Write) -> std::io::Result<()> {
    writeln!(out, "# {} vertices, {} edges", g.n(), g.num_edges())?;
    for (u, v, w) in g.edges() {
        writeln!(out, "{} {} {}", g.orig_id(u), g.orig_id(v), w)?;
    }
    Ok(())
}

pub fn read_graph(path: &Path) -> Result<WeightedGraph> {
    let file = File::open(path).map_err(|e| CliError::io(path, e))?;
    parse_edge_list(BufReader::new(file)).map_err(|e| match e {
        CliError::Parse { line, msg } => CliError::Data(format!("{}:{line}: {msg}", path.display())),
        other => other,
    })
}

/// Reads and preprocesses: self-loops dropped, largest component kept.
pub fn load_graph(path: &Path) -> Result<WeightedGraph> {
    let raw = read_graph(path)?;
    let g = preprocess(&raw)?;
    if g.n() < raw.n() {
        eprintln!("kept the largest component: {} of {} vertices", g.n(), raw.n());
    }
    Ok(g)
}
