//! File formats: edge lists, DOT export and the lineage sidecar.
//!
//! Edge list: a header line `n m`, then `m` lines `u v` with `u < v`,
//! 0-based, sorted lexicographically. Output is byte-stable.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{Graph, Lineage};

pub fn write_edge_list(g: &Graph) -> String {
    let mut out = String::with_capacity(16 + g.edge_count() * 12);
    let _ = writeln!(out, "{} {}", g.n(), g.edge_count());
    for (u, v) in g.edges() {
        let _ = writeln!(out, "{u} {v}");
    }
    out
}

pub fn parse_edge_list(text: &str) -> Result<Graph> {
    let mut lines = text
        .lines()
        .map(str::trim)
        .enumerate()
        .filter(|(_, l)| !l.is_empty());
    let (_, header) = lines
        .next()
        .ok_or_else(|| Error::parse("edge list is empty"))?;
    let (n, m) = parse_pair(header, 1)?;
    let mut edges = Vec::with_capacity(m);
    for (idx, line) in lines {
        let (u, v) = parse_pair(line, idx + 1)?;
        edges.push((u, v));
    }
    if edges.len() != m {
        return Err(Error::parse(format!(
            "header declares {m} edges but {} were listed",
            edges.len()
        )));
    }
    let g = Graph::from_edges(n, &edges)?;
    if g.edge_count() != m {
        return Err(Error::parse("edge list contains duplicate edges"));
    }
    Ok(g)
}

fn parse_pair(line: &str, lineno: usize) -> Result<(usize, usize)> {
    let mut it = line.split_whitespace();
    let mut next = || -> Result<usize> {
        it.next()
            .and_then(|s| s.parse().ok())
            .ok_or_else(|| Error::parse(format!("line {lineno}: expected two integers")))
    };
    let a = next()?;
    let b = next()?;
    if it.next().is_some() {
        return Err(Error::parse(format!("line {lineno}: trailing tokens")));
    }
    Ok((a, b))
}

/// Graphviz DOT; originals are drawn as boxes, transitive clones as circles
/// and anti-clones as diamonds.
pub fn write_dot(g: &Graph) -> String {
    let mut out = String::from("graph ilm {\n");
    for (v, l) in g.lineage().iter().enumerate() {
        let shape = match l {
            Lineage::Original(_) => "box",
            Lineage::TransitiveClone { .. } => "circle",
            Lineage::AntiClone { .. } => "diamond",
        };
        let _ = writeln!(out, "  {v} [shape={shape}];");
    }
    for (u, v) in g.edges() {
        let _ = writeln!(out, "  {u} -- {v};");
    }
    out.push_str("}\n");
    out
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LineageRecord {
    pub id: usize,
    pub kind: String,
    pub parent: Option<usize>,
    pub step: usize,
}

pub fn lineage_records(g: &Graph) -> Vec<LineageRecord> {
    g.lineage()
        .iter()
        .enumerate()
        .map(|(id, l)| LineageRecord {
            id,
            kind: l.kind().to_string(),
            parent: l.parent(),
            step: l.step(),
        })
        .collect()
}

pub fn write_lineage_json(g: &Graph) -> Result<String> {
    let mut s = serde_json::to_string_pretty(&lineage_records(g))?;
    s.push('\n');
    Ok(s)
}

pub fn parse_lineage_json(text: &str) -> Result<Vec<Lineage>> {
    let records: Vec<LineageRecord> = serde_json::from_str(text)?;
    records
        .into_iter()
        .enumerate()
        .map(|(i, r)| {
            if r.id != i {
                return Err(Error::parse(format!("lineage record {i} has id {}", r.id)));
            }
            let need_parent = || {
                r.parent
                    .ok_or_else(|| Error::parse(format!("lineage record {i} lacks a parent")))
            };
            match r.kind.as_str() {
                "original" => Ok(Lineage::Original(i)),
                "transitive" => Ok(Lineage::TransitiveClone {
                    parent: need_parent()?,
                    step: r.step,
                }),
                "anti" => Ok(Lineage::AntiClone {
                    parent: need_parent()?,
                    step: r.step,
                }),
                other => Err(Error::parse(format!("unknown lineage kind {other:?}"))),
            }
        })
        .collect()
}

/// Fixed float formatting for exported files: rounded to 12 significant
/// digits, then printed in shortest round-trip form.
pub fn fmt_float(x: f64) -> String {
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    let rounded: f64 = format!("{x:.11e}").parse().expect("valid float");
    // -0 and 0 print identically.
    if rounded == 0.0 {
        return "0".into();
    }
    format!("{rounded}")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ilm;
    use crate::named;

    #[test]
    fn edge_list_is_sorted_and_exact() {
        let g = named::cycle(4);
        assert_eq!(write_edge_list(&g), "4 4\n0 1\n0 3\n1 2\n2 3\n");
    }

    #[test]
    fn edge_list_round_trip() {
        let g = ilm::lat_step(&named::petersen()).unwrap();
        let back = parse_edge_list(&write_edge_list(&g)).unwrap();
        assert_eq!(back.edges().collect::<Vec<_>>(), g.edges().collect::<Vec<_>>());
    }

    #[test]
    fn edge_list_rejects_malformed() {
        assert!(parse_edge_list("").is_err());
        assert!(parse_edge_list("3 2\n0 1\n").is_err());
        assert!(parse_edge_list("3 1\n0 x\n").is_err());
        assert!(parse_edge_list("3 2\n0 1\n1 0\n").is_err());
        assert!(parse_edge_list("2 1\n0 2\n").is_err());
    }

    #[test]
    fn lineage_round_trip() {
        let g = ilm::lt_step(&ilm::lat_step(&named::complete(2)).unwrap()).unwrap();
        let text = write_lineage_json(&g).unwrap();
        let back = parse_lineage_json(&text).unwrap();
        assert_eq!(back, g.lineage());
        assert!(text.contains("\"kind\": \"anti\""));
    }

    #[test]
    fn float_format_is_fixed() {
        assert_eq!(fmt_float(0.1 + 0.2), "0.3");
        assert_eq!(fmt_float(13705.0 / 13797.052631578947), "0.993328094482");
        assert_eq!(fmt_float(-0.0), "0");
        assert_eq!(fmt_float(f64::INFINITY), "inf");
        assert_eq!(fmt_float(2.0), "2");
    }

    #[test]
    fn dot_mentions_every_edge() {
        let g = ilm::lt_step(&named::complete(1)).unwrap();
        let dot = write_dot(&g);
        assert!(dot.contains("0 -- 1;"));
        assert!(dot.contains("1 [shape=circle]"));
    }
}
