use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::bitset::ones;
use crate::error::{Error, Result};
use crate::graph::Graph;

/// A graph distance; `Infinite` sorts above every finite value.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Distance {
    Finite(u32),
    Infinite,
}

impl Distance {
    pub fn finite(self) -> Option<u32> {
        match self {
            Distance::Finite(d) => Some(d),
            Distance::Infinite => None,
        }
    }

    pub fn is_finite(self) -> bool {
        matches!(self, Distance::Finite(_))
    }
}

impl fmt::Display for Distance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Distance::Finite(d) => write!(f, "{d}"),
            Distance::Infinite => f.write_str("inf"),
        }
    }
}

/// Finite distances serialize as integers, infinite ones as `"inf"`.
impl Serialize for Distance {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Distance::Finite(d) => s.serialize_u32(*d),
            Distance::Infinite => s.serialize_str("inf"),
        }
    }
}

impl<'de> Deserialize<'de> for Distance {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Repr {
            Num(u32),
            Str(String),
        }
        match Repr::deserialize(d)? {
            Repr::Num(n) => Ok(Distance::Finite(n)),
            Repr::Str(s) if s == "inf" => Ok(Distance::Infinite),
            Repr::Str(s) => Err(serde::de::Error::custom(format!("bad distance {s:?}"))),
        }
    }
}

/// Level-synchronous BFS where each frontier expands by OR-ing adjacency rows.
fn bfs_levels(g: &Graph, v: usize) -> Vec<Distance> {
    let n = g.n();
    let words = g.row(v).len();
    let mut dist = vec![Distance::Infinite; n];
    let mut seen = vec![0u64; words];
    seen[v / 64] |= 1 << (v % 64);
    dist[v] = Distance::Finite(0);
    let mut frontier = vec![v];
    let mut next = vec![0u64; words];
    let mut level = 0u32;
    while !frontier.is_empty() {
        level += 1;
        next.fill(0);
        for &u in &frontier {
            for (w, r) in next.iter_mut().zip(g.row(u)) {
                *w |= r;
            }
        }
        for (w, s) in next.iter_mut().zip(seen.iter_mut()) {
            *w &= !*s;
            *s |= *w;
        }
        frontier.clear();
        frontier.extend(ones(&next));
        for &u in &frontier {
            dist[u] = Distance::Finite(level);
        }
    }
    dist
}

/// BFS distances from `v`; unreachable vertices are `Infinite`.
pub fn distances(g: &Graph, v: usize) -> Result<Vec<Distance>> {
    if v >= g.n() {
        return Err(Error::VertexOutOfRange { vertex: v, n: g.n() });
    }
    Ok(bfs_levels(g, v))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DiameterRadius {
    pub diameter: Distance,
    /// Minimum eccentricity; `Infinite` when the graph is disconnected.
    pub radius: Distance,
    pub components: usize,
    /// Per component, ordered by smallest vertex id.
    pub component_diameters: Vec<u32>,
    pub component_radii: Vec<u32>,
}

/// Exact diameter and radius from all-sources BFS.
pub fn diameter_radius(g: &Graph) -> DiameterRadius {
    let comps = g.components();
    let mut comp_of = vec![0usize; g.n()];
    for (i, c) in comps.iter().enumerate() {
        for v in c.iter() {
            comp_of[v] = i;
        }
    }
    let mut diam = vec![0u32; comps.len()];
    let mut rad = vec![u32::MAX; comps.len()];
    for v in 0..g.n() {
        // Within its own component every distance is finite.
        let ecc = bfs_levels(g, v)
            .into_iter()
            .filter_map(Distance::finite)
            .max()
            .unwrap_or(0);
        let c = comp_of[v];
        diam[c] = diam[c].max(ecc);
        rad[c] = rad[c].min(ecc);
    }
    let (diameter, radius) = match comps.len() {
        0 => (Distance::Finite(0), Distance::Finite(0)),
        1 => (Distance::Finite(diam[0]), Distance::Finite(rad[0])),
        _ => (Distance::Infinite, Distance::Infinite),
    };
    DiameterRadius {
        diameter,
        radius,
        components: comps.len(),
        component_diameters: diam,
        component_radii: rad,
    }
}
