//! Text formats: instances, paths, edge lists and sweep reports.
//!
//! Instances are line-oriented:
//!
//! ```text
//! n=5
//! x=00000
//! y=00001
//! M: 01100-01110 10000-10001
//! ```
//!
//! Vertices are fixed-width bit strings, coordinate 1 leftmost. `M:` may
//! repeat; `#` starts a comment. Paths are one vertex per line. Reports are
//! flat `key=value` documents with a fixed key order.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use thiserror::Error;

use crate::cube::{Dim, Edge, Vertex};
use crate::forest::{Instance, InstanceError};
use crate::verify::SweepReport;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("line {line}, column {col}: {msg}")]
    Syntax { line: usize, col: usize, msg: String },
    #[error("{0}")]
    Semantic(#[from] InstanceError),
}

fn syntax(line: usize, col: usize, msg: impl Into<String>) -> ParseError {
    ParseError::Syntax { line, col, msg: msg.into() }
}

/// Columns are 1-based and count characters.
fn col_of(line: &str, part: &str) -> usize {
    let offset = part.as_ptr() as usize - line.as_ptr() as usize;
    line[..offset].chars().count() + 1
}

fn parse_vertex(s: &str, n: Option<Dim>, line_no: usize, col: usize) -> Result<Vertex, ParseError> {
    let (v, d) = Vertex::parse_bits(s).map_err(|e| syntax(line_no, col, format!("bad vertex {s:?}: {e}")))?;
    if let Some(n) = n {
        if d != n {
            return Err(syntax(line_no, col, format!("vertex {s:?} has {} bits, expected {n}", d.get())));
        }
    }
    Ok(v)
}

fn parse_edge(s: &str, n: Option<Dim>, line_no: usize, col: usize) -> Result<Edge, ParseError> {
    let Some((a, b)) = s.split_once('-') else {
        return Err(syntax(line_no, col, format!("edge {s:?} must be written a-b")));
    };
    let va = parse_vertex(a, n, line_no, col)?;
    let vb = parse_vertex(b, n, line_no, col + a.chars().count() + 1)?;
    if a.len() != b.len() {
        return Err(syntax(line_no, col, format!("edge {s:?} mixes widths")));
    }
    Edge::between(va, vb).map_err(|_| syntax(line_no, col, format!("{s:?} is not an edge of the cube")))
}

/// Parses and validates an instance.
pub fn parse_instance(text: &str) -> Result<Instance, ParseError> {
    let mut n: Option<Dim> = None;
    let mut x = None;
    let mut y = None;
    let mut seed = None;
    // width checks wait until n is known, so keep positions
    let mut pending: Vec<(String, usize, usize)> = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line_no = i + 1;
        let line = raw.split('#').next().unwrap_or("");
        let trimmed = line.trim();
        if trimmed.is_empty() {
            continue;
        }
        let col = col_of(raw, trimmed);
        if let Some(rest) = trimmed.strip_prefix("M:") {
            for tok in rest.split(|c: char| c.is_whitespace() || c == ',').filter(|t| !t.is_empty()) {
                pending.push((tok.to_string(), line_no, col_of(raw, tok)));
            }
            continue;
        }
        let Some((key, value)) = trimmed.split_once('=') else {
            return Err(syntax(line_no, col, format!("expected key=value or M:, found {trimmed:?}")));
        };
        let (key, value) = (key.trim(), value.trim());
        let vcol = col_of(raw, value);
        match key {
            "n" => {
                let k: u32 = value.parse().map_err(|_| syntax(line_no, vcol, format!("bad dimension {value:?}")))?;
                n = Some(Dim::new(k).map_err(|e| syntax(line_no, vcol, e.to_string()))?);
            }
            "x" => x = Some((value.to_string(), line_no, vcol)),
            "y" => y = Some((value.to_string(), line_no, vcol)),
            "seed" => {
                seed = Some(value.parse::<u64>().map_err(|_| syntax(line_no, vcol, format!("bad seed {value:?}")))?)
            }
            other => return Err(syntax(line_no, col, format!("unknown key {other:?}"))),
        }
    }
    let last = text.lines().count().max(1);
    let n = n.ok_or_else(|| syntax(last, 1, "missing n="))?;
    let (xs, xl, xc) = x.ok_or_else(|| syntax(last, 1, "missing x="))?;
    let (ys, yl, yc) = y.ok_or_else(|| syntax(last, 1, "missing y="))?;
    let xv = parse_vertex(&xs, Some(n), xl, xc)?;
    let yv = parse_vertex(&ys, Some(n), yl, yc)?;
    let mut m = Vec::with_capacity(pending.len());
    for (tok, l, c) in &pending {
        m.push(parse_edge(tok, Some(n), *l, *c)?);
    }
    let mut inst = Instance::new(n, m, xv, yv)?;
    inst.seed = seed;
    Ok(inst)
}

pub fn emit_instance(inst: &Instance) -> String {
    let mut out = String::new();
    let n = inst.n;
    let _ = writeln!(out, "n={n}");
    let _ = writeln!(out, "x={}", inst.x.to_bits(n));
    let _ = writeln!(out, "y={}", inst.y.to_bits(n));
    if let Some(s) = inst.seed {
        let _ = writeln!(out, "seed={s}");
    }
    let edges: Vec<String> = inst.m.iter().map(|e| e.to_bits(n)).collect();
    if edges.is_empty() {
        out.push_str("M:\n");
    } else {
        let _ = writeln!(out, "M: {}", edges.join(" "));
    }
    out
}

/// One vertex per line.
pub fn emit_path(n: Dim, path: &[Vertex]) -> String {
    path.iter().map(|v| v.to_bits(n) + "\n").collect()
}

/// Reads a path written by [`emit_path`]; the dimension is the bit width.
pub fn parse_path(text: &str) -> Result<(Dim, Vec<Vertex>), ParseError> {
    let mut n = None;
    let mut out = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let t = raw.split('#').next().unwrap_or("").trim();
        if t.is_empty() {
            continue;
        }
        let col = col_of(raw, t);
        let (v, d) = Vertex::parse_bits(t).map_err(|e| syntax(i + 1, col, format!("bad vertex {t:?}: {e}")))?;
        if *n.get_or_insert(d) != d {
            return Err(syntax(i + 1, col, "vertex width changes"));
        }
        out.push(v);
    }
    let n = n.ok_or_else(|| syntax(1, 1, "empty path"))?;
    Ok((n, out))
}

/// One edge `a-b` per line, endpoints in lexicographic order.
pub fn emit_edges(n: Dim, edges: &[Edge]) -> String {
    let mut sorted: Vec<String> = edges.iter().map(|e| e.to_bits(n)).collect();
    sorted.sort();
    sorted.into_iter().map(|s| s + "\n").collect()
}

pub fn emit_report(r: &SweepReport) -> String {
    let mut out = String::new();
    let mut kv = |k: &str, v: String| {
        let _ = writeln!(out, "{k}={v}");
    };
    kv("kind", r.kind.clone());
    kv("n", r.n.to_string());
    kv("m", r.m.to_string());
    kv("seed", r.seed.map_or("none".into(), |s| s.to_string()));
    kv("n_base", r.n_base.to_string());
    kv("strict", r.strict.to_string());
    kv("symmetry_reduction", r.symmetry_reduction.to_string());
    kv("instances", r.instances.to_string());
    kv("success", r.success.to_string());
    kv("fallback", r.fallback.to_string());
    kv("unsat", r.unsat.to_string());
    kv("budget_exhausted", r.budget_exhausted.to_string());
    kv("violations", r.violations.to_string());
    kv("errors", r.errors.to_string());
    kv("disagreements", r.disagreements.to_string());
    kv("bound_violations", r.bound_violations.to_string());
    kv("depth_violations", r.depth_violations.to_string());
    if let Some(ms) = r.max_runtime_ms {
        kv("max_runtime_ms", ms.to_string());
    }
    for (label, c) in &r.cases {
        kv(&format!("case.{label}"), c.to_string());
    }
    for (i, f) in r.failures.iter().enumerate() {
        kv(&format!("failure.{i}"), f.clone());
    }
    out
}

pub fn parse_report(text: &str) -> Result<SweepReport, ParseError> {
    let mut r = SweepReport::default();
    let mut failures: BTreeMap<usize, String> = BTreeMap::new();
    for (i, raw) in text.lines().enumerate() {
        if raw.trim().is_empty() {
            continue;
        }
        let line_no = i + 1;
        // case labels may contain '=', failure texts always do
        let split = if raw.starts_with("case.") { raw.rsplit_once('=') } else { raw.split_once('=') };
        let Some((k, v)) = split else {
            return Err(syntax(line_no, 1, "expected key=value"));
        };
        let vcol = k.chars().count() + 2;
        let num = |v: &str| v.parse::<u64>().map_err(|_| syntax(line_no, vcol, format!("bad number {v:?}")));
        let flag = |v: &str| v.parse::<bool>().map_err(|_| syntax(line_no, vcol, format!("bad flag {v:?}")));
        match k {
            "kind" => r.kind = v.to_string(),
            "n" => r.n = num(v)? as u32,
            "m" => r.m = num(v)? as usize,
            "seed" => r.seed = if v == "none" { None } else { Some(num(v)?) },
            "n_base" => r.n_base = num(v)? as u32,
            "strict" => r.strict = flag(v)?,
            "symmetry_reduction" => r.symmetry_reduction = flag(v)?,
            "instances" => r.instances = num(v)?,
            "success" => r.success = num(v)?,
            "fallback" => r.fallback = num(v)?,
            "unsat" => r.unsat = num(v)?,
            "budget_exhausted" => r.budget_exhausted = num(v)?,
            "violations" => r.violations = num(v)?,
            "errors" => r.errors = num(v)?,
            "disagreements" => r.disagreements = num(v)?,
            "bound_violations" => r.bound_violations = num(v)?,
            "depth_violations" => r.depth_violations = num(v)?,
            "max_runtime_ms" => r.max_runtime_ms = Some(num(v)?),
            _ => {
                if let Some(label) = k.strip_prefix("case.") {
                    r.cases.insert(label.to_string(), num(v)?);
                } else if let Some(idx) = k.strip_prefix("failure.") {
                    let idx = idx.parse().map_err(|_| syntax(line_no, 9, "bad failure index"))?;
                    failures.insert(idx, v.to_string());
                } else {
                    return Err(syntax(line_no, 1, format!("unknown key {k:?}")));
                }
            }
        }
    }
    r.failures = failures.into_values().collect();
    Ok(r)
}
