//! Runs an external graph partitioner as a shell command.

use std::io::Write;
use std::process::Command;

use gls_core::{Error, Partitioner, WeightedGraph};

/// A command template such as `kahip-wrapper {input} {fraction}`.
///
/// `{input}` becomes the path of a temporary edge list over dense ids
/// `0..n`, `{fraction}` the target weight fraction of the smaller side. The
/// command must print two lines of space-separated vertex ids.
#[derive(Debug, Clone)]
pub struct ExternalPartitioner {
    template: String,
    pub calls: usize,
}

impl ExternalPartitioner {
    pub fn new(template: impl Into<String>) -> Result<Self, Error> {
        let template = template.into();
        if !template.contains("{input}") {
            return Err(Error::InvalidParameter(String::from("partitioner command must mention {input}")));
        }
        Ok(ExternalPartitioner { template, calls: 0 })
    }

    fn command_line(&self, input: &str, fraction: f64) -> String {
        self.template.replace("{input}", input).replace("{fraction}", &format!("{fraction:.6}"))
    }
}

fn quote(path: &str) -> String {
    format!("'{}'", path.replace('\'', r"'\''"))
}

fn parse_side(line: &str, n: usize) -> Result<Vec<usize>, Error> {
    line.split_whitespace()
        .map(|tok| match tok.parse::<usize>() {
            Ok(v) if v < n => Ok(v),
            _ => Err(Error::Partitioner(format!("bad vertex id `{tok}` in partitioner output"))),
        })
        .collect()
}

impl Partitioner for ExternalPartitioner {
    fn partition(&mut self, g: &WeightedGraph, target_fraction: f64) -> Result<(Vec<usize>, Vec<usize>), Error> {
        let fail = |e: std::io::Error| Error::Partitioner(e.to_string());
        let mut file = tempfile::Builder::new().prefix("gls-part-").suffix(".txt").tempfile().map_err(fail)?;
        writeln!(file, "# {} vertices", g.n()).map_err(fail)?;
        for (u, v, w) in g.edges() {
            writeln!(file, "{u} {v} {w}").map_err(fail)?;
        }
        file.flush().map_err(fail)?;
        let path = file.path().to_string_lossy().into_owned();
        let cmd = self.command_line(&quote(&path), target_fraction);
        self.calls += 1;
        let out = Command::new("sh").arg("-c").arg(&cmd).output().map_err(fail)?;
        if !out.status.success() {
            let stderr = String::from_utf8_lossy(&out.stderr);
            return Err(Error::Partitioner(format!("`{cmd}` exited with {}: {}", out.status, stderr.trim())));
        }
        let stdout = String::from_utf8_lossy(&out.stdout);
        let mut lines = stdout.lines().filter(|l| !l.trim().is_empty());
        let (Some(a), Some(b)) = (lines.next(), lines.next()) else {
            return Err(Error::Partitioner(String::from("expected two lines of vertex ids")));
        };
        Ok((parse_side(a, g.n())?, parse_side(b, g.n())?))
    }
}
