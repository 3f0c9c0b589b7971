//! Labels files, importance files and selection summaries.

use std::collections::HashMap;
use std::fmt::Write as _;
use std::fs;
use std::io::{BufRead, BufReader};
use std::path::Path;
use std::time::Duration;

use gls_core::{Objective, Ratio, Selection, VertexSet};

use crate::error::{CliError, Result};

fn content_lines(reader: impl BufRead) -> impl Iterator<Item = Result<(usize, String)>> {
    reader.lines().enumerate().filter_map(|(i, l)| match l {
        Err(e) => Some(Err(CliError::parse(i + 1, e.to_string()))),
        Ok(l) => {
            let t = l.trim();
            (!t.is_empty() && !t.starts_with('#')).then(|| Ok((i + 1, t.to_string())))
        }
    })
}

/// One original vertex id per line.
pub fn parse_labels(reader: impl BufRead) -> Result<Vec<u64>> {
    content_lines(reader)
        .map(|item| {
            let (no, line) = item?;
            line.parse().map_err(|_| CliError::parse(no, format!("bad vertex id `{line}`")))
        })
        .collect()
}

pub fn format_labels(ids: &[u64]) -> String {
    ids.iter().fold(String::new(), |mut s, id| {
        let _ = writeln!(s, "{id}");
        s
    })
}

/// `<vertex id> <value>` per line; values are nonnegative integers.
pub fn parse_importance(reader: impl BufRead) -> Result<HashMap<u64, u64>> {
    let mut out = HashMap::new();
    for item in content_lines(reader) {
        let (no, line) = item?;
        let fields: Vec<&str> = line.split_whitespace().collect();
        let [id, value] = fields.as_slice() else {
            return Err(CliError::parse(no, "expected `<vertex id> <value>`"));
        };
        let id: u64 = id.parse().map_err(|_| CliError::parse(no, format!("bad vertex id `{id}`")))?;
        let value: u64 = value
            .parse()
            .map_err(|_| CliError::parse(no, format!("importance `{value}` is not a nonnegative integer")))?;
        if out.insert(id, value).is_some() {
            return Err(CliError::parse(no, format!("vertex {id} listed twice")));
        }
    }
    Ok(out)
}

fn with_path<T>(path: &Path, r: Result<T>) -> Result<T> {
    r.map_err(|e| match e {
        CliError::Parse { line, msg } => CliError::Data(format!("{}:{line}: {msg}", path.display())),
        other => other,
    })
}

pub fn read_labels(path: &Path) -> Result<Vec<u64>> {
    let file = fs::File::open(path).map_err(|e| CliError::io(path, e))?;
    with_path(path, parse_labels(BufReader::new(file)))
}

pub fn read_importance(path: &Path) -> Result<HashMap<u64, u64>> {
    let file = fs::File::open(path).map_err(|e| CliError::io(path, e))?;
    with_path(path, parse_importance(BufReader::new(file)))
}

/// Maps original ids to dense positions in `ids`; unknown or repeated ids are
/// data errors.
pub fn to_dense(labels: &[u64], ids: &[u64]) -> Result<VertexSet> {
    let index: HashMap<u64, usize> = ids.iter().copied().zip(0..).collect();
    let mut dense = Vec::with_capacity(labels.len());
    for id in labels {
        let &v = index.get(id).ok_or_else(|| CliError::Data(format!("label {id} is not a vertex")))?;
        dense.push(v);
    }
    let set = VertexSet::new(dense);
    if set.len() != labels.len() {
        return Err(CliError::Data(String::from("labels file repeats a vertex")));
    }
    Ok(set)
}

/// Importance values in the dense order of `ids`; vertices missing from the
/// map get 0.
pub fn dense_importance(values: &HashMap<u64, u64>, ids: &[u64]) -> Result<Vec<u64>> {
    let known: std::collections::HashSet<u64> = ids.iter().copied().collect();
    if let Some(id) = values.keys().find(|id| !known.contains(id)) {
        return Err(CliError::Data(format!("importance given for unknown vertex {id}")));
    }
    Ok(ids.iter().map(|id| values.get(id).copied().unwrap_or(0)).collect())
}

pub fn ms(d: Duration) -> f64 {
    (d.as_secs_f64() * 1e6).round() / 1e3
}

pub fn parse_objective(s: &str) -> Option<Objective> {
    if s == "inf" {
        return Some(Objective::Infinite);
    }
    let (n, d) = s.split_once('/')?;
    let (n, d): (i128, i128) = (n.parse().ok()?, d.parse().ok()?);
    (d > 0).then(|| Objective::Finite(Ratio::new(n, d)))
}

/// `key=value` lines describing a selection.
pub fn format_summary(sel: &Selection) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "k_requested={}", sel.k_requested);
    let _ = writeln!(s, "k_used={}", sel.k_used);
    let _ = writeln!(s, "tree_value={}", sel.tree_value);
    let _ = writeln!(s, "tree_value_decimal={}", sel.tree_value.to_decimal());
    match sel.graph_value {
        Some(v) => {
            let _ = writeln!(s, "graph_value={v}");
            let _ = writeln!(s, "graph_value_decimal={}", v.to_decimal());
        }
        None => {
            let _ = writeln!(s, "graph_value=none");
        }
    }
    let _ = writeln!(s, "method={}", sel.method.as_deref().unwrap_or("none"));
    match sel.seed {
        Some(seed) => {
            let _ = writeln!(s, "seed={seed}");
        }
        None => {
            let _ = writeln!(s, "seed=none");
        }
    }
    let _ = writeln!(s, "decompose_ms={:.3}", ms(sel.timings.decompose));
    let _ = writeln!(s, "select_ms={:.3}", ms(sel.timings.select));
    let _ = writeln!(s, "evaluate_ms={:.3}", ms(sel.timings.evaluate));
    s
}

/// Parses `key=value` lines into a map, rejecting anything else.
pub fn parse_summary(text: &str) -> Result<HashMap<String, String>> {
    let mut out = HashMap::new();
    for (i, line) in text.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let (k, v) = line.split_once('=').ok_or_else(|| CliError::parse(i + 1, "expected key=value"))?;
        out.insert(k.to_string(), v.to_string());
    }
    Ok(out)
}
