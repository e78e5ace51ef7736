//! Network, attribute and result files.
//!
//! Arc lists use the Pajek layout with 1-based node ids:
//!
//! ```text
//! *vertices 3
//! *arcs
//! 1 2
//! 2 3
//! ```
//!
//! Lines starting with `%` or `#` are comments. Vertex lines between the
//! header and `*arcs` are allowed and ignored.
//!
//! Attribute files have a header of column names and one whitespace
//! separated row per node; `NA` marks a missing value.

use std::fmt::Write as _;
use std::fs::{self, File};
use std::io::{BufWriter, Write};
use std::path::Path;

use rustc_hash::FxHashMap;

use crate::attributes::{AttributeKind, AttributeSet};
use crate::estimator::ThetaTrace;
use crate::graph::Digraph;
use crate::inference::{PooledEstimate, RunEstimate};
use crate::simulate::Simulation;
use crate::{Error, Result};

pub const MISSING: &str = "NA";

fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(k, l)| (k + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('%') && !l.starts_with('#'))
}

pub fn read_to_string(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| Error::io(path, e))
}

/// Parses a Pajek arc list. `source` names the input in error messages.
pub fn parse_arclist(text: &str, source: &str) -> Result<Digraph> {
    let mut lines = content_lines(text);
    let (line, header) = lines
        .next()
        .ok_or_else(|| Error::parse(source, 0, "empty file, expected '*vertices N'"))?;
    let mut tok = header.split_whitespace();
    if !tok.next().is_some_and(|t| t.eq_ignore_ascii_case("*vertices")) {
        return Err(Error::parse(source, line, "expected '*vertices N'"));
    }
    let n: usize = tok
        .next()
        .and_then(|t| t.parse().ok())
        .ok_or_else(|| Error::parse(source, line, "expected a node count after *vertices"))?;
    if tok.next().is_some() {
        return Err(Error::parse(source, line, "unexpected tokens after node count"));
    }
    let mut in_arcs = false;
    let mut g = Digraph::new(n);
    for (line, l) in lines {
        if l.starts_with('*') {
            let section = l.split_whitespace().next().unwrap_or(l);
            if section.eq_ignore_ascii_case("*arcs") && !in_arcs {
                in_arcs = true;
                continue;
            }
            return Err(Error::parse(source, line, format!("unexpected section '{section}'")));
        }
        if !in_arcs {
            continue;
        }
        let ids: Vec<&str> = l.split_whitespace().collect();
        if ids.len() != 2 {
            return Err(Error::parse(source, line, format!("expected 'tail head', got '{l}'")));
        }
        let node = |t: &str| -> Result<usize> {
            let id: usize = t
                .parse()
                .map_err(|_| Error::parse(source, line, format!("bad node id '{t}'")))?;
            if id == 0 || id > n {
                return Err(Error::parse(source, line, format!("node id {id} outside 1..={n}")));
            }
            Ok(id - 1)
        };
        let (i, j) = (node(ids[0])?, node(ids[1])?);
        if i == j {
            return Err(Error::parse(
                source,
                line,
                format!("self-loop {} -> {}", ids[0], ids[1]),
            ));
        }
        if g.is_arc(i, j) {
            return Err(Error::parse(
                source,
                line,
                format!("duplicate arc {} -> {}", ids[0], ids[1]),
            ));
        }
        g.insert_arc(i, j)
            .map_err(|e| Error::parse(source, line, e.to_string()))?;
    }
    if !in_arcs {
        return Err(Error::parse(source, 0, "missing '*arcs' section"));
    }
    Ok(g)
}

pub fn read_arclist(path: &Path) -> Result<Digraph> {
    parse_arclist(&read_to_string(path)?, &path.display().to_string())
}

/// Writes `g` as a Pajek arc list, arcs sorted.
pub fn write_arclist<W: Write>(g: &Digraph, mut w: W) -> std::io::Result<()> {
    writeln!(w, "*vertices {}", g.num_nodes())?;
    writeln!(w, "*arcs")?;
    for (i, j) in g.sorted_arcs() {
        writeln!(w, "{} {}", i + 1, j + 1)?;
    }
    w.flush()
}

pub fn save_arclist(g: &Digraph, path: &Path) -> Result<()> {
    let f = File::create(path).map_err(|e| Error::io(path, e))?;
    write_arclist(g, BufWriter::new(f)).map_err(|e| Error::io(path, e))
}

/// Parses an attribute table of one kind for `n` nodes.
///
/// Binary values are `0`/`1`; categorical tokens are coded densely per
/// column in order of first appearance; continuous values must be finite.
pub fn parse_attributes(text: &str, kind: AttributeKind, n: usize, source: &str) -> Result<AttributeSet> {
    let mut lines = content_lines(text);
    let (_, header) = lines
        .next()
        .ok_or_else(|| Error::parse(source, 0, "empty file, expected a header"))?;
    let names: Vec<&str> = header.split_whitespace().collect();
    let mut columns: Vec<Vec<&str>> = vec![Vec::with_capacity(n); names.len()];
    let mut last_line = 1;
    for (line, l) in lines {
        let row: Vec<&str> = l.split_whitespace().collect();
        if row.len() != names.len() {
            return Err(Error::parse(
                source,
                line,
                format!("{} values for {} columns", row.len(), names.len()),
            ));
        }
        for (c, v) in row.into_iter().enumerate() {
            columns[c].push(v);
        }
        last_line = line;
        if columns[0].len() > n {
            return Err(Error::parse(source, line, format!("more than {n} rows")));
        }
    }
    if columns.first().map_or(0, Vec::len) != n {
        return Err(Error::parse(
            source,
            last_line,
            format!("{} rows for {n} nodes", columns.first().map_or(0, Vec::len)),
        ));
    }
    // data rows start after the header; recover line numbers for errors
    let data_lines: Vec<usize> = content_lines(text).skip(1).map(|(l, _)| l).collect();
    let mut attrs = AttributeSet::new(n);
    for (name, col) in names.iter().zip(columns) {
        let bad = |row: usize, tok: &str| {
            Error::parse(
                source,
                data_lines[row],
                format!("bad {kind} value '{tok}' in column {name}"),
            )
        };
        match kind {
            AttributeKind::Binary => {
                let values = col
                    .iter()
                    .enumerate()
                    .map(|(r, &t)| match t {
                        MISSING => Ok(None),
                        "0" => Ok(Some(false)),
                        "1" => Ok(Some(true)),
                        _ => Err(bad(r, t)),
                    })
                    .collect::<Result<_>>()?;
                attrs.add_binary(name, values)?;
            }
            AttributeKind::Categorical => {
                let mut codes: FxHashMap<&str, u32> = FxHashMap::default();
                let values = col
                    .iter()
                    .map(|&t| {
                        (t != MISSING).then(|| {
                            let next = codes.len() as u32;
                            *codes.entry(t).or_insert(next)
                        })
                    })
                    .collect();
                attrs.add_categorical(name, values)?;
            }
            AttributeKind::Continuous => {
                let values = col
                    .iter()
                    .enumerate()
                    .map(|(r, &t)| {
                        if t == MISSING {
                            return Ok(None);
                        }
                        match t.parse::<f64>() {
                            Ok(v) if v.is_finite() => Ok(Some(v)),
                            _ => Err(bad(r, t)),
                        }
                    })
                    .collect::<Result<_>>()?;
                attrs.add_continuous(name, values)?;
            }
        }
    }
    Ok(attrs)
}

pub fn read_attributes(path: &Path, kind: AttributeKind, n: usize) -> Result<AttributeSet> {
    parse_attributes(&read_to_string(path)?, kind, n, &path.display().to_string())
}

/// Writes all columns of one kind; categorical columns are written as codes.
pub fn write_attributes<W: Write>(attrs: &AttributeSet, kind: AttributeKind, mut w: W) -> std::io::Result<()> {
    let cols: Vec<(&str, Vec<String>)> = match kind {
        AttributeKind::Binary => attrs
            .binary
            .iter()
            .map(|c| {
                (
                    c.name.as_str(),
                    c.values
                        .iter()
                        .map(|v| v.map_or(MISSING.into(), |b| (b as u8).to_string()))
                        .collect(),
                )
            })
            .collect(),
        AttributeKind::Categorical => attrs
            .categorical
            .iter()
            .map(|c| {
                (
                    c.name.as_str(),
                    c.values
                        .iter()
                        .map(|v| v.map_or(MISSING.into(), |x| x.to_string()))
                        .collect(),
                )
            })
            .collect(),
        AttributeKind::Continuous => attrs
            .continuous
            .iter()
            .map(|c| {
                (
                    c.name.as_str(),
                    c.values
                        .iter()
                        .map(|v| v.map_or(MISSING.into(), |x| x.to_string()))
                        .collect(),
                )
            })
            .collect(),
    };
    let header: Vec<&str> = cols.iter().map(|(n, _)| *n).collect();
    writeln!(w, "{}", header.join(" "))?;
    for r in 0..attrs.num_nodes() {
        let row: Vec<&str> = cols.iter().map(|(_, v)| v[r].as_str()).collect();
        writeln!(w, "{}", row.join(" "))?;
    }
    w.flush()
}

fn create_csv(path: &Path) -> Result<csv::Writer<File>> {
    csv::Writer::from_path(path).map_err(Error::from)
}

/// Shortest representation that parses back to the same value.
fn num(x: f64) -> String {
    format!("{x}")
}

/// `pooled_estimates.csv`: effect, estimate, std_error, t_ratio, significant.
pub fn write_pooled(pooled: &PooledEstimate, path: &Path) -> Result<()> {
    let mut w = create_csv(path)?;
    w.write_record(["effect", "estimate", "std_error", "t_ratio", "significant"])?;
    for k in 0..pooled.names.len() {
        w.write_record([
            pooled.names[k].clone(),
            num(pooled.theta[k]),
            num(pooled.se[k]),
            num(pooled.t_ratio[k]),
            pooled.significant[k].to_string(),
        ])?;
    }
    w.flush().map_err(|e| Error::io(path, e))
}

#[derive(Clone, Debug, PartialEq)]
pub struct PooledRow {
    pub effect: String,
    pub estimate: f64,
    pub std_error: f64,
    pub t_ratio: f64,
    pub significant: bool,
}

pub fn read_pooled(path: &Path) -> Result<Vec<PooledRow>> {
    let mut r = csv::Reader::from_path(path)?;
    let source = path.display().to_string();
    let mut rows = Vec::new();
    for (k, rec) in r.records().enumerate() {
        let rec = rec?;
        let line = k + 2;
        let field = |c: usize| rec.get(c).ok_or_else(|| Error::parse(&source, line, "missing field"));
        let float = |c: usize| -> Result<f64> {
            let t = field(c)?;
            t.parse()
                .map_err(|_| Error::parse(&source, line, format!("bad number '{t}'")))
        };
        rows.push(PooledRow {
            effect: field(0)?.to_string(),
            estimate: float(1)?,
            std_error: float(2)?,
            t_ratio: float(3)?,
            significant: field(4)?
                .parse()
                .map_err(|_| Error::parse(&source, line, "bad boolean"))?,
        });
    }
    Ok(rows)
}

/// `theta_trace_<r>.csv`: t, parameters, acceptance rate and V per outer iteration.
pub fn write_theta_trace(trace: &ThetaTrace, path: &Path) -> Result<()> {
    let mut w = create_csv(path)?;
    let mut header = vec!["t".to_string()];
    header.extend(trace.parameter_names());
    header.extend(["acceptance_rate".into(), "V".into()]);
    w.write_record(&header)?;
    for rec in &trace.records {
        let mut row = vec![rec.t.to_string()];
        row.extend(trace.parameters(rec).into_iter().map(num));
        row.push(num(rec.acceptance_rate));
        row.push(num(rec.v));
        w.write_record(&row)?;
    }
    w.flush().map_err(|e| Error::io(path, e))
}

/// `dzA_trace_<r>.csv`: t and `z(chain) − z(observed)` per outer iteration.
pub fn write_dz_trace(trace: &ThetaTrace, path: &Path) -> Result<()> {
    let mut w = create_csv(path)?;
    let mut header = vec!["t".to_string()];
    header.extend(trace.effect_names.iter().cloned());
    w.write_record(&header)?;
    for rec in &trace.records {
        let mut row = vec![rec.t.to_string()];
        row.extend(rec.dz.iter().map(|&x| num(x)));
        w.write_record(&row)?;
    }
    w.flush().map_err(|e| Error::io(path, e))
}

/// Human-readable estimate table; `*` marks significance at the 5% level.
pub fn format_summary(pooled: &PooledEstimate, runs: &[RunEstimate]) -> String {
    let width = pooled.names.iter().map(String::len).max().unwrap_or(6).max(6);
    let mut s = String::new();
    let converged = runs.iter().filter(|r| r.converged).count();
    let _ = writeln!(s, "Pooled over {} of {} runs", pooled.n_runs_used, runs.len());
    if converged != pooled.n_runs_used {
        let _ = writeln!(s, "({converged} runs converged)");
    }
    let _ = writeln!(
        s,
        "{:<width$} {:>12} {:>12} {:>9}",
        "Effect", "Estimate", "Std. error", "t-ratio"
    );
    for k in 0..pooled.names.len() {
        let _ = writeln!(
            s,
            "{:<width$} {:>12.6} {:>12.6} {:>9.3} {}",
            pooled.names[k],
            pooled.theta[k],
            pooled.se[k],
            pooled.t_ratio[k],
            if pooled.significant[k] { "*" } else { "" }
        );
    }
    for (r, run) in runs.iter().enumerate() {
        if let Some(reason) = &run.diverged_reason {
            let _ = writeln!(s, "run {r} excluded: {reason}");
        }
    }
    s
}

/// Writes `pooled_estimates.csv`, `summary.txt` and per-run traces into `dir`.
pub fn emit_results(
    pooled: Option<&PooledEstimate>,
    runs: &[RunEstimate],
    traces: &[ThetaTrace],
    dir: &Path,
) -> Result<()> {
    fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    for trace in traces {
        write_theta_trace(trace, &dir.join(format!("theta_trace_{}.csv", trace.run_index)))?;
        write_dz_trace(trace, &dir.join(format!("dzA_trace_{}.csv", trace.run_index)))?;
    }
    let summary_path = dir.join("summary.txt");
    let summary = match pooled {
        Some(p) => {
            write_pooled(p, &dir.join("pooled_estimates.csv"))?;
            format_summary(p, runs)
        }
        None => {
            let mut s = format!("No converged runs out of {}\n", runs.len());
            for (r, run) in runs.iter().enumerate() {
                let _ = writeln!(s, "run {r}: {}", run.diverged_reason.as_deref().unwrap_or("?"));
            }
            s
        }
    };
    fs::write(&summary_path, summary).map_err(|e| Error::io(&summary_path, e))
}

/// `sim_stats.csv`: one row of summary and model statistics per sample.
pub fn write_sim_stats(sim: &Simulation, model_names: &[String], path: &Path) -> Result<()> {
    let mut w = create_csv(path)?;
    let mut header: Vec<String> = [
        "sample",
        "nodes",
        "arcs",
        "components",
        "giant_component",
        "mean_degree",
        "density",
        "global_clustering",
        "mean_local_clustering",
        "reciprocity",
    ]
    .iter()
    .map(|s| s.to_string())
    .collect();
    header.extend(model_names.iter().cloned());
    w.write_record(&header)?;
    for (k, (s, z)) in sim.summaries.iter().zip(&sim.statistics).enumerate() {
        let mut row = vec![
            k.to_string(),
            s.nodes.to_string(),
            s.arcs.to_string(),
            s.components.to_string(),
            s.giant_component.to_string(),
            num(s.mean_degree),
            num(s.density),
            num(s.global_clustering),
            num(s.mean_local_clustering),
            num(s.reciprocity),
        ];
        row.extend(z.iter().map(|&x| num(x)));
        w.write_record(&row)?;
    }
    w.flush().map_err(|e| Error::io(path, e))
}

/// Degree histograms as `degree,in_count,out_count`.
pub fn write_degree_histogram(summary: &crate::simulate::GraphSummary, path: &Path) -> Result<()> {
    let mut w = create_csv(path)?;
    w.write_record(["degree", "in_count", "out_count"])?;
    let len = summary.in_degree_hist.len().max(summary.out_degree_hist.len());
    for d in 0..len {
        w.write_record([
            d.to_string(),
            summary.in_degree_hist.get(d).copied().unwrap_or(0).to_string(),
            summary.out_degree_hist.get(d).copied().unwrap_or(0).to_string(),
        ])?;
    }
    w.flush().map_err(|e| Error::io(path, e))
}
