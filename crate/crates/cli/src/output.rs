//! Report assembly: the JSON envelope with its provenance block, plus
//! small helpers for the human-readable tables printed to stdout.

use std::fs;
use std::io::Write as _;
use std::path::Path;

use serde::Serialize;
use serde_json::{json, Value};
use sha2::{Digest, Sha256};
use tricount_core::{Graph, LoadStats, Result};

/// Where the graph came from, echoed into every report.
#[derive(Serialize)]
pub struct InputBlock {
    pub source: String,
    pub vertices: u64,
    pub edges: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub load: Option<LoadBlock>,
}

#[derive(Serialize)]
pub struct LoadBlock {
    pub lines_total: u64,
    pub comment_lines: u64,
    pub self_loops_dropped: u64,
    pub duplicates_collapsed: u64,
}

impl InputBlock {
    pub fn from_file(path: &Path, graph: &Graph, stats: &LoadStats) -> Self {
        InputBlock {
            source: format!("file:{}", path.display()),
            vertices: graph.vertex_count() as u64,
            edges: graph.edge_count() as u64,
            load: Some(LoadBlock {
                lines_total: stats.lines_total as u64,
                comment_lines: stats.comment_lines as u64,
                self_loops_dropped: stats.self_loops_dropped as u64,
                duplicates_collapsed: stats.duplicates_collapsed as u64,
            }),
        }
    }

    pub fn synthetic(n: usize, p: f64, seed: u64, graph: &Graph) -> Self {
        InputBlock {
            source: format!("synthetic:G({n},{p}) seed={seed}"),
            vertices: graph.vertex_count() as u64,
            edges: graph.edge_count() as u64,
            load: None,
        }
    }
}

/// Assembles the report envelope. The provenance hash covers the config
/// block only, so two runs over the same input with the same settings
/// carry the same hash regardless of timing.
pub fn report(config: Value, input: &InputBlock, results: Value, wall_seconds: f64) -> Value {
    let config_text = config.to_string();
    let digest = Sha256::digest(config_text.as_bytes());
    let mut hex = String::with_capacity(64);
    for byte in digest {
        hex.push_str(&format!("{byte:02x}"));
    }
    json!({
        "provenance": {
            "tool": env!("CARGO_BIN_NAME"),
            "version": env!("CARGO_PKG_VERSION"),
            "config_sha256": hex,
        },
        "config": config,
        "input": serde_json::to_value(input).expect("input block serializes"),
        "results": results,
        "timing": { "wall_seconds": wall_seconds },
    })
}

/// Writes the JSON report to `path`, or to stdout when `path` is `-`.
pub fn write_json(path: &Path, report: &Value) -> Result<()> {
    let text = serde_json::to_string_pretty(report).expect("report serializes");
    if path.as_os_str() == "-" {
        println!("{text}");
    } else {
        fs::write(path, text + "\n")?;
    }
    Ok(())
}

/// True when the human-readable table should be suppressed because the
/// JSON report itself goes to stdout.
pub fn json_on_stdout(json_out: Option<&Path>) -> bool {
    json_out.is_some_and(|p| p.as_os_str() == "-")
}

/// Prints `label  value` rows with the labels left-aligned to a common
/// width.
pub fn print_kv(rows: &[(&str, String)]) {
    let width = rows.iter().map(|(k, _)| k.len()).max().unwrap_or(0);
    let mut out = std::io::stdout().lock();
    for (key, value) in rows {
        let _ = writeln!(out, "{key:<width$}  {value}");
    }
}

/// Prints a table with right-aligned columns (first column left-aligned).
pub fn print_table(header: &[&str], rows: &[Vec<String>]) {
    let mut widths: Vec<usize> = header.iter().map(|h| h.len()).collect();
    for row in rows {
        for (i, cell) in row.iter().enumerate() {
            widths[i] = widths[i].max(cell.len());
        }
    }
    let mut out = std::io::stdout().lock();
    let mut line = String::new();
    for (i, h) in header.iter().enumerate() {
        if i > 0 {
            line.push_str("  ");
        }
        if i == 0 {
            line.push_str(&format!("{h:<w$}", w = widths[i]));
        } else {
            line.push_str(&format!("{h:>w$}", w = widths[i]));
        }
    }
    let _ = writeln!(out, "{}", line.trim_end());
    for row in rows {
        line.clear();
        for (i, cell) in row.iter().enumerate() {
            if i > 0 {
                line.push_str("  ");
            }
            if i == 0 {
                line.push_str(&format!("{cell:<w$}", w = widths[i]));
            } else {
                line.push_str(&format!("{cell:>w$}", w = widths[i]));
            }
        }
        let _ = writeln!(out, "{}", line.trim_end());
    }
}
