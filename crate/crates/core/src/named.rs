//! Small named graphs and seeded random graphs used as initial graphs.
//!
//! Names follow the usual notation: `K5`, `C4`, `P4`, `K1,3`, `2K1`,
//! `Petersen`, `E3` (three isolated vertices), and disjoint unions written
//! with `+` such as `K2+K3`. TeX-ish spellings like `K_{1,3}` are accepted.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::graph::Graph;

pub fn complete(n: usize) -> Graph {
    let edges: Vec<_> = (0..n)
        .flat_map(|u| (u + 1..n).map(move |v| (u, v)))
        .collect();
    Graph::from_edges(n, &edges).expect("valid edges")
}

pub fn cycle(n: usize) -> Graph {
    assert!(n >= 3, "cycle needs at least 3 vertices");
    let edges: Vec<_> = (0..n).map(|i| (i, (i + 1) % n)).collect();
    Graph::from_edges(n, &edges).expect("valid edges")
}

pub fn path(n: usize) -> Graph {
    let edges: Vec<_> = (1..n).map(|i| (i - 1, i)).collect();
    Graph::from_edges(n, &edges).expect("valid edges")
}

pub fn complete_bipartite(a: usize, b: usize) -> Graph {
    let edges: Vec<_> = (0..a)
        .flat_map(|u| (a..a + b).map(move |v| (u, v)))
        .collect();
    Graph::from_edges(a + b, &edges).expect("valid edges")
}

/// `K_{1,leaves}` with the center at id 0.
pub fn star(leaves: usize) -> Graph {
    complete_bipartite(1, leaves)
}

pub fn petersen() -> Graph {
    let mut edges = Vec::new();
    for i in 0..5 {
        edges.push((i, (i + 1) % 5));
        edges.push((i, i + 5));
        edges.push((5 + i, 5 + (i + 2) % 5));
    }
    Graph::from_edges(10, &edges).expect("valid edges")
}

/// Binomial random graph `G(n, p)`, reproducible from `seed`.
pub fn random_gnp(n: usize, p: f64, seed: u64) -> Graph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut edges = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            if rng.random_bool(p) {
                edges.push((u, v));
            }
        }
    }
    Graph::from_edges(n, &edges).expect("valid edges")
}

fn parse_usize(s: &str, whole: &str) -> Result<usize> {
    s.parse()
        .map_err(|_| Error::parse(format!("bad number {s:?} in graph name {whole:?}")))
}

fn parse_base(base: &str, whole: &str) -> Result<Graph> {
    if base.eq_ignore_ascii_case("petersen") {
        return Ok(petersen());
    }
    let (head, rest) = base.split_at(1);
    let g = match head {
        "G" => {
            let inner = rest
                .strip_prefix('(')
                .and_then(|r| r.strip_suffix(')'))
                .ok_or_else(|| Error::parse(format!("expected G(n,p,seed) in {whole:?}")))?;
            let parts: Vec<&str> = inner.split(',').collect();
            let [n, p, seed] = parts[..] else {
                return Err(Error::parse(format!("expected G(n,p,seed) in {whole:?}")));
            };
            let p: f64 = p
                .parse()
                .ok()
                .filter(|p| (0.0..=1.0).contains(p))
                .ok_or_else(|| Error::parse(format!("bad probability in {whole:?}")))?;
            random_gnp(parse_usize(n, whole)?, p, parse_usize(seed, whole)? as u64)
        }
        "K" => match rest.split_once(',') {
            Some((a, b)) => complete_bipartite(parse_usize(a, whole)?, parse_usize(b, whole)?),
            None => complete(parse_usize(rest, whole)?),
        },
        "C" => {
            let n = parse_usize(rest, whole)?;
            if n < 3 {
                return Err(Error::parse(format!("cycle C{n} needs n >= 3")));
            }
            cycle(n)
        }
        "P" => path(parse_usize(rest, whole)?),
        "E" => Graph::empty(parse_usize(rest, whole)?),
        _ => return Err(Error::parse(format!("unknown graph name {whole:?}"))),
    };
    Ok(g)
}

/// Parses a graph name such as `C4`, `2K1`, `K_{1,3}`, `K2+K3` or the seeded
/// random graph `G(12,0.3,7)`.
pub fn parse(name: &str) -> Result<Graph> {
    let cleaned: String = name
        .chars()
        .filter(|c| !matches!(c, '_' | '{' | '}' | ' '))
        .map(|c| if c == '∪' { '+' } else { c })
        .collect();
    if cleaned.is_empty() {
        return Err(Error::parse("empty graph name"));
    }
    let mut acc: Option<Graph> = None;
    for term in cleaned.split('+') {
        let digits = term.chars().take_while(|c| c.is_ascii_digit()).count();
        let (mult, base) = term.split_at(digits);
        if base.is_empty() {
            return Err(Error::parse(format!("bad graph name {name:?}")));
        }
        let mult = if mult.is_empty() { 1 } else { parse_usize(mult, name)? };
        let g = parse_base(base, name)?;
        for _ in 0..mult {
            acc = Some(match acc {
                None => g.clone(),
                Some(a) => a.disjoint_union(&g),
            });
        }
    }
    acc.ok_or_else(|| Error::parse(format!("bad graph name {name:?}")))
}
