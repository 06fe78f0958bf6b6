//! Named graphs. Six-vertex entries are built as `base + β` so the labels of
//! the worked examples carry over unchanged.

use crate::error::{Error, Result};
use crate::graph::{EdgeSet, Graph, Pair};

/// How a catalog graph was obtained.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CatalogInfo {
    pub name: String,
    pub construction: String,
    /// The adjacency was read off a drawing rather than an explicit construction.
    pub figure_derived: bool,
}

pub fn path(n: usize) -> Result<Graph> {
    positive(n)?;
    Graph::new(n, (1..n).map(|i| (i, i + 1)))
}

pub fn cycle(n: usize) -> Result<Graph> {
    if n < 3 {
        return Err(Error::InvalidParameter(format!("cycle needs n >= 3, got {n}")));
    }
    Graph::new(n, (1..n).map(|i| (i, i + 1)).chain([(1, n)]))
}

pub fn complete(n: usize) -> Result<Graph> {
    positive(n)?;
    Graph::new(n, (1..=n).flat_map(|i| (i + 1..=n).map(move |j| (i, j))))
}

/// `K_{s,t}` with parts `1..=s` and `s+1..=s+t`. `K_{1,n}` is centered at 1.
pub fn complete_bipartite(s: usize, t: usize) -> Result<Graph> {
    positive(s)?;
    positive(t)?;
    Graph::new(s + t, (1..=s).flat_map(|i| (s + 1..=s + t).map(move |j| (i, j))))
}

/// Star with `leaves` leaves centered at vertex 1.
pub fn star(leaves: usize) -> Result<Graph> {
    complete_bipartite(1, leaves)
}

fn positive(n: usize) -> Result<()> {
    if n == 0 {
        Err(Error::InvalidParameter("graph order must be positive".into()))
    } else {
        Ok(())
    }
}

fn plus(g: Graph, beta: &[(usize, usize)]) -> Result<Graph> {
    let pairs = beta.iter().map(|&(a, b)| Pair::new(a, b)).collect::<Result<Vec<_>>>()?;
    g.add_edges(&EdgeSet::new(g.order(), pairs)?)
}

/// The generalized star with leaves 1, 4, 5 (center 3, path 1-2-3-4, edge 3-5).
fn g30() -> Result<Graph> {
    Graph::new(5, [(1, 2), (2, 3), (3, 4), (3, 5)])
}

/// `G30` plus the edge 4-5.
fn g36() -> Result<Graph> {
    Graph::new(5, [(1, 2), (2, 3), (3, 4), (3, 5), (4, 5)])
}

/// `G129` labeling: path 1-2-3-4 with pendant 6 at 2, vertex 5 joined to the
/// leaves 1, 4, 6.
fn g129() -> Result<Graph> {
    let g30 = Graph::new(6, [(1, 2), (2, 3), (3, 4), (2, 6)])?;
    plus(g30, &[(1, 5), (4, 5), (5, 6)])
}

fn c5_plus_apex(extra: &[(usize, usize)]) -> Result<Graph> {
    let c5k1 = cycle(5)?.disjoint_union(&Graph::empty(1));
    let mut beta = vec![(1, 6), (3, 6), (4, 6), (5, 6)];
    beta.extend_from_slice(extra);
    plus(c5k1, &beta)
}

/// Parses `"K3,3"`, `"K1,4"`, etc.
fn parse_bipartite(args: &str) -> Option<(usize, usize)> {
    let (s, t) = args.split_once(',')?;
    Some((s.trim().parse().ok()?, t.trim().parse().ok()?))
}

/// Looks up a graph by name.
///
/// Accepted names: `Pn`, `Cn`, `Kn`, `Ks,t`, `nK1`, the six-vertex entries
/// `G100 G127 G129 G145 G151 G153 G163 G169 G171 G175 G187`, `G30`, `G36`,
/// `G151-base` (`K1,3 ∪ K2`), `prism`, and composites `AxB` (Cartesian
/// product) and `AuB` (disjoint union), e.g. `P3xP4`, `K4uK1`.
pub fn catalog(name: &str) -> Result<Graph> {
    let name = name.trim();
    let unknown = || Error::UnknownGraph(name.to_string());
    if let Some((a, b)) = name.split_once('x') {
        return Ok(catalog(a)?.cartesian_product(&catalog(b)?));
    }
    if let Some((a, b)) = name.split_once('u') {
        return Ok(catalog(a)?.disjoint_union(&catalog(b)?));
    }
    match name {
        "G30" => return g30(),
        "G36" => return g36(),
        "G100" => return plus(star(3)?.disjoint_union(&path(2)?), &[(4, 5), (4, 6)]),
        "G127" => return plus(complete(3)?.disjoint_union(&path(3)?), &[(1, 6), (3, 4)]),
        "G129" => return g129(),
        "G145" => return plus(g129()?, &[(2, 5)]),
        "G151-base" => return Ok(star(3)?.disjoint_union(&complete(2)?)),
        "G151" => {
            return plus(star(3)?.disjoint_union(&complete(2)?), &[(3, 5), (4, 5), (2, 6), (4, 6)])
        }
        "G153" => return plus(g129()?, &[(1, 6)]),
        "G163" => {
            return plus(complete(3)?.disjoint_union(&path(3)?), &[(1, 6), (1, 5), (3, 5), (3, 4)])
        }
        "G169" => return plus(complete(4)?.disjoint_union(&complete(2)?), &[(2, 6), (4, 5)]),
        "G171" => return c5_plus_apex(&[]),
        "G175" => return complete_bipartite(3, 3)?.relabel(&[1, 3, 5, 2, 4, 6]),
        "G187" => return c5_plus_apex(&[(2, 6)]),
        "prism" => {
            return plus(cycle(4)?.disjoint_union(&path(2)?), &[(1, 5), (2, 5), (3, 6), (4, 6)])
        }
        _ => {}
    }
    if let Some(count) = name.strip_suffix("K1").filter(|c| !c.is_empty()) {
        let n: usize = count.parse().map_err(|_| unknown())?;
        positive(n)?;
        return Ok(Graph::empty(n));
    }
    let (head, args) = name.split_at(name.chars().next().map_or(0, char::len_utf8));
    match head {
        "P" => path(args.parse().map_err(|_| unknown())?),
        "C" => cycle(args.parse().map_err(|_| unknown())?),
        "K" => match parse_bipartite(args) {
            Some((s, t)) => complete_bipartite(s, t),
            None => complete(args.parse().map_err(|_| unknown())?),
        },
        _ => Err(unknown()),
    }
}

/// Provenance for the named six-vertex entries.
pub fn catalog_info(name: &str) -> Option<CatalogInfo> {
    let (construction, figure_derived) = match name {
        "G100" => ("K1,3 ∪ P2 + {4-5, 4-6}", false),
        "G127" => ("K3 ∪ P3 + {1-6, 3-4}", false),
        "G129" => ("G30 (1-2-3-4, 2-6) ∪ K1 (vertex 5) + {1-5, 4-5, 5-6}", true),
        "G145" => ("G129 + {2-5}", true),
        "G151" => ("K1,3 ∪ K2 + {3-5, 4-5, 2-6, 4-6}", false),
        "G153" => ("G129 + {1-6}", true),
        "G163" => ("K3 ∪ P3 + {1-6, 1-5, 3-5, 3-4}", false),
        "G169" => ("K4 ∪ K2 + {2-6, 4-5}", false),
        "G171" => ("C5 ∪ K1 + {1-6, 3-6, 4-6, 5-6}", true),
        "G175" => ("K3,3 with parts {1,3,5} and {2,4,6}", false),
        "G187" => ("G171 + {2-6}", true),
        "prism" => ("C4 ∪ P2 + {1-5, 2-5, 3-6, 4-6}", false),
        "G30" => ("path 1-2-3-4 plus 3-5", false),
        "G36" => ("G30 + {4-5}", false),
        "G151-base" => ("K1,3 ∪ K2", false),
        _ => return None,
    };
    Some(CatalogInfo { name: name.to_string(), construction: construction.to_string(), figure_derived })
}

/// The six-vertex graphs whose multiplicity lists are reproduced.
pub const SIX_VERTEX: [&str; 11] =
    ["G100", "G127", "G129", "G145", "G151", "G153", "G163", "G169", "G171", "G175", "G187"];
