//! The `.dt` decomposition tree format.
//!
//! ```text
//! glstree 1 <num_nodes> <num_leaves>
//! <node_id> <parent_id|-1> <parent_edge_weight|inf> <leaf_vertex_orig_id|-1>
//! ```
//!
//! Node 0 is the root and every parent precedes its children. The root's
//! weight column is written as `inf` and ignored on read.

use std::collections::HashSet;
use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;

use gls_core::{DecompTree, Weight};

use crate::error::{CliError, Result};

const MAGIC: &str = "glstree";
const VERSION: &str = "1";

pub fn write_tree(tree: &DecompTree, out: impl Write) -> std::io::Result<()> {
    let t = tree.canonical();
    let mut out = BufWriter::new(out);
    writeln!(out, "{MAGIC} {VERSION} {} {}", t.len(), t.num_leaves())?;
    for (i, node) in t.nodes().iter().enumerate() {
        let parent = node.parent.map_or(-1, |p| p as i64);
        let weight = if node.parent.is_none() { Weight::Inf } else { node.parent_edge_weight };
        match node.leaf_label {
            Some(v) => writeln!(out, "{i} {parent} {weight} {}", t.vertex_ids()[v])?,
            None => writeln!(out, "{i} {parent} {weight} -1")?,
        }
    }
    out.flush()
}

fn field<'a>(it: &mut impl Iterator<Item = &'a str>, line: usize, what: &str) -> Result<&'a str> {
    it.next().ok_or_else(|| CliError::parse(line, format!("missing {what}")))
}

fn number<T: std::str::FromStr>(tok: &str, line: usize, what: &str) -> Result<T> {
    tok.parse().map_err(|_| CliError::parse(line, format!("bad {what} `{tok}`")))
}

pub fn parse_tree(reader: impl BufRead) -> Result<DecompTree> {
    let mut lines = reader
        .lines()
        .enumerate()
        .map(|(i, l)| l.map(|l| (i + 1, l)).map_err(|e| CliError::parse(i + 1, e.to_string())))
        .filter(|r| r.as_ref().map_or(true, |(_, l)| !l.trim().is_empty() && !l.trim_start().starts_with('#')));
    let (hl, header) = lines.next().ok_or_else(|| CliError::Data(String::from("empty tree file")))??;
    let mut it = header.split_whitespace();
    if field(&mut it, hl, "magic")? != MAGIC {
        return Err(CliError::parse(hl, "not a glstree file"));
    }
    let version = field(&mut it, hl, "version")?;
    if version != VERSION {
        return Err(CliError::parse(hl, format!("unsupported version {version}")));
    }
    let count: usize = number(field(&mut it, hl, "node count")?, hl, "node count")?;
    let leaves: usize = number(field(&mut it, hl, "leaf count")?, hl, "leaf count")?;

    let mut parents = Vec::with_capacity(count);
    let mut vertex_ids = Vec::with_capacity(leaves);
    let mut seen = HashSet::new();
    for item in lines {
        let (no, line) = item?;
        let mut it = line.split_whitespace();
        let id: usize = number(field(&mut it, no, "node id")?, no, "node id")?;
        if id != parents.len() {
            return Err(CliError::parse(no, format!("expected node {}, found {id}", parents.len())));
        }
        let parent: i64 = number(field(&mut it, no, "parent")?, no, "parent")?;
        let parent = match parent {
            -1 if id == 0 => None,
            -1 => return Err(CliError::parse(no, "only node 0 may be the root")),
            p if p < 0 || p as usize >= id => {
                return Err(CliError::parse(no, format!("parent {p} does not precede node {id}")))
            }
            p => Some(p as usize),
        };
        if id == 0 && parent.is_some() {
            return Err(CliError::parse(no, "node 0 must be the root"));
        }
        let wtok = field(&mut it, no, "weight")?;
        let weight = match (wtok, parent) {
            (_, None) => Weight::Inf,
            ("inf", _) => Weight::Inf,
            (w, _) => match number::<u64>(w, no, "weight")? {
                0 => return Err(CliError::parse(no, "edge weight must be positive")),
                w => Weight::Finite(w),
            },
        };
        let leaf: i64 = number(field(&mut it, no, "leaf id")?, no, "leaf id")?;
        let label = match leaf {
            -1 => None,
            x if x < 0 => return Err(CliError::parse(no, format!("bad leaf id {x}"))),
            x => {
                if !seen.insert(x as u64) {
                    return Err(CliError::parse(no, format!("vertex {x} appears on two leaves")));
                }
                vertex_ids.push(x as u64);
                Some(vertex_ids.len() - 1)
            }
        };
        if it.next().is_some() {
            return Err(CliError::parse(no, "trailing fields"));
        }
        parents.push((parent, weight, label));
    }
    if parents.len() != count {
        return Err(CliError::Data(format!("header promises {count} nodes, found {}", parents.len())));
    }
    if vertex_ids.len() != leaves {
        return Err(CliError::Data(format!("header promises {leaves} leaves, found {}", vertex_ids.len())));
    }
    Ok(DecompTree::from_parents(parents, vertex_ids)?)
}

pub fn read_tree(path: &Path) -> Result<DecompTree> {
    let file = File::open(path).map_err(|e| CliError::io(path, e))?;
    parse_tree(BufReader::new(file)).map_err(|e| match e {
        CliError::Parse { line, msg } => CliError::Data(format!("{}:{line}: {msg}", path.display())),
        other => other,
    })
}

pub fn save_tree(tree: &DecompTree, path: &Path) -> Result<()> {
    let file = File::create(path).map_err(|e| CliError::io(path, e))?;
    write_tree(tree, file).map_err(|e| CliError::io(path, e))
}
