//! Edge-list and score-table text formats.
//!
//! Edge lists are whitespace-separated triples, one per line, in either
//! `u v t` or `t u v` column order. Lines whose first non-blank character
//! is `#` are comments. Vertex names are arbitrary tokens; numeric ids are
//! assigned in order of first appearance. Self-loops are dropped (counted),
//! mirrored and repeated triples are deduplicated by default.
//!
//! Score tables are CSV with a `vertex,score` header, one row per vertex.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::graph::{TemporalGraph, TimeLabel};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EdgeListFormat {
    /// `u v t`
    Uvt,
    /// `t u v`
    Tuv,
}

impl std::str::FromStr for EdgeListFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<EdgeListFormat> {
        match s {
            "uvt" => Ok(EdgeListFormat::Uvt),
            "tuv" => Ok(EdgeListFormat::Tuv),
            other => Err(Error::Value(format!(
                "unknown edge list format {other:?}; expected uvt or tuv"
            ))),
        }
    }
}

#[derive(Debug, Clone, Copy)]
pub struct ParseOptions {
    /// Silently collapse repeated time edges. When off, a repeat is a
    /// parse error: the model has no parallel edges, so an unexpected
    /// duplicate means the data does not match the declared format.
    pub dedupe: bool,
    /// Remap the distinct raw timestamps to the dense labels `1..=T`
    /// (order-preserving) and keep the original values for duration
    /// reporting. When off, raw timestamps are used as labels verbatim
    /// and must already be positive.
    pub normalize: bool,
}

impl Default for ParseOptions {
    fn default() -> ParseOptions {
        ParseOptions { dedupe: true, normalize: true }
    }
}

#[derive(Debug)]
pub struct ParseOutcome {
    pub graph: TemporalGraph,
    pub duplicates_removed: usize,
    pub self_loops_dropped: usize,
}

pub fn parse_edge_list(
    text: &str,
    format: EdgeListFormat,
    options: ParseOptions,
) -> Result<ParseOutcome> {
    let mut labels: Vec<String> = Vec::new();
    let mut index: HashMap<String, usize> = HashMap::new();
    let mut intern = |token: &str, labels: &mut Vec<String>| -> usize {
        if let Some(&id) = index.get(token) {
            return id;
        }
        let id = labels.len();
        labels.push(token.to_string());
        index.insert(token.to_string(), id);
        id
    };

    let mut triples: Vec<(usize, usize, u64)> = Vec::new();
    let mut seen: HashMap<(usize, usize, u64), usize> = HashMap::new();
    let mut duplicates_removed = 0;
    let mut self_loops_dropped = 0;

    for (lineno, raw_line) in text.lines().enumerate() {
        let line = raw_line.trim();
        let lineno = lineno + 1;
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = line.split_whitespace().collect();
        if fields.len() != 3 {
            return Err(Error::Parse {
                line: lineno,
                message: format!("expected 3 fields, found {}", fields.len()),
            });
        }
        let (u_tok, v_tok, t_tok) = match format {
            EdgeListFormat::Uvt => (fields[0], fields[1], fields[2]),
            EdgeListFormat::Tuv => (fields[1], fields[2], fields[0]),
        };
        let t: u64 = t_tok.parse().map_err(|_| Error::Parse {
            line: lineno,
            message: format!("invalid timestamp {t_tok:?}"),
        })?;
        if !options.normalize && (t == 0 || t > TimeLabel::MAX as u64) {
            return Err(Error::Parse {
                line: lineno,
                message: format!(
                    "timestamp {t} unusable as a label; labels must be in 1..={} (use normalization)",
                    TimeLabel::MAX
                ),
            });
        }
        let u = intern(u_tok, &mut labels);
        let v = intern(v_tok, &mut labels);
        if u == v {
            self_loops_dropped += 1;
            continue;
        }
        let key = (u.min(v), u.max(v), t);
        if let Some(&first) = seen.get(&key) {
            if options.dedupe {
                duplicates_removed += 1;
                continue;
            }
            return Err(Error::Parse {
                line: lineno,
                message: format!(
                    "time edge {} {} {} repeats line {} and deduplication is off",
                    u_tok, v_tok, t, first
                ),
            });
        }
        seen.insert(key, lineno);
        triples.push((key.0, key.1, t));
    }

    let (edges, raw_times) = if options.normalize {
        let mut raw: Vec<u64> = triples.iter().map(|&(_, _, t)| t).collect();
        raw.sort_unstable();
        raw.dedup();
        let rank: HashMap<u64, TimeLabel> = raw
            .iter()
            .enumerate()
            .map(|(i, &t)| (t, (i + 1) as TimeLabel))
            .collect();
        let edges: Vec<(usize, usize, TimeLabel)> = triples
            .iter()
            .map(|&(u, v, t)| (u, v, rank[&t]))
            .collect();
        (edges, Some(raw))
    } else {
        let edges = triples
            .iter()
            .map(|&(u, v, t)| (u, v, t as TimeLabel))
            .collect();
        (edges, None)
    };

    let graph = TemporalGraph::from_parts(labels, edges, raw_times)?;
    Ok(ParseOutcome { graph, duplicates_removed, self_loops_dropped })
}

/// Writes the graph back out, one edge per line in `(t, u, v)` order of the
/// canonical edge list. Normalized graphs emit their original timestamps.
pub fn serialize_edge_list(g: &TemporalGraph, format: EdgeListFormat) -> String {
    let mut out = String::new();
    for e in g.edges() {
        let u = g.label(e.u);
        let v = g.label(e.v);
        let t = g.raw_time(e.t);
        match format {
            EdgeListFormat::Uvt => out.push_str(&format!("{u} {v} {t}\n")),
            EdgeListFormat::Tuv => out.push_str(&format!("{t} {u} {v}\n")),
        }
    }
    out
}

/// Formats a score with 12 significant digits, trailing zeros trimmed.
/// Exact zero prints as `0`.
pub fn format_score(x: f64) -> String {
    if x == 0.0 {
        return "0".to_string();
    }
    if !x.is_finite() {
        return format!("{x}");
    }
    let sci = format!("{:.*e}", 11, x);
    let (mantissa, exp) = sci.split_once('e').expect("exponent in sci notation");
    let exp: i32 = exp.parse().expect("integer exponent");
    let neg = mantissa.starts_with('-');
    let digits: String = mantissa.chars().filter(|c| c.is_ascii_digit()).collect();
    let mut body = if exp >= 0 {
        let point = exp as usize + 1;
        if point >= digits.len() {
            let mut s = digits.clone();
            s.push_str(&"0".repeat(point - digits.len()));
            s
        } else {
            format!("{}.{}", &digits[..point], &digits[point..])
        }
    } else {
        format!("0.{}{}", "0".repeat((-exp - 1) as usize), digits)
    };
    if body.contains('.') {
        body = body.trim_end_matches('0').trim_end_matches('.').to_string();
    }
    if neg {
        format!("-{body}")
    } else {
        body
    }
}

/// Serializes per-vertex scores as `vertex,score` CSV, rows sorted by
/// vertex name.
pub fn serialize_scores(labels: &[String], scores: &[f64]) -> String {
    assert_eq!(labels.len(), scores.len(), "one score per vertex");
    let mut order: Vec<usize> = (0..labels.len()).collect();
    order.sort_by(|&a, &b| labels[a].cmp(&labels[b]));
    let mut out = String::from("vertex,score\n");
    for v in order {
        out.push_str(&format!("{},{}\n", labels[v], format_score(scores[v])));
    }
    out
}

/// Parses a `vertex,score` CSV produced by `serialize_scores`.
pub fn parse_scores(text: &str) -> Result<Vec<(String, f64)>> {
    let mut lines = text.lines().enumerate();
    match lines.next() {
        Some((_, head)) if head.trim() == "vertex,score" => {}
        _ => {
            return Err(Error::Parse {
                line: 1,
                message: "missing vertex,score header".into(),
            })
        }
    }
    let mut rows = Vec::new();
    for (lineno, line) in lines {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let (name, score) = line.rsplit_once(',').ok_or(Error::Parse {
            line: lineno + 1,
            message: "expected vertex,score row".into(),
        })?;
        let score: f64 = score.parse().map_err(|_| Error::Parse {
            line: lineno + 1,
            message: format!("invalid score {score:?}"),
        })?;
        rows.push((name.to_string(), score));
    }
    Ok(rows)
}
