//! Simple undirected graphs on vertices `1..=n`, edge sets, and the basic
//! graph operations (complement, disjoint union, edge addition, Cartesian
//! product).

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// An unordered vertex pair stored as `(i, j)` with `i < j`, 1-based.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Pair(pub usize, pub usize);

impl Pair {
    /// Normalizes the order of the endpoints. Loops are rejected.
    pub fn new(a: usize, b: usize) -> Result<Self> {
        match a.cmp(&b) {
            std::cmp::Ordering::Less => Ok(Pair(a, b)),
            std::cmp::Ordering::Greater => Ok(Pair(b, a)),
            std::cmp::Ordering::Equal => Err(Error::LoopEdge(a)),
        }
    }

    pub fn lo(self) -> usize {
        self.0
    }

    pub fn hi(self) -> usize {
        self.1
    }

    /// Position of `(i, j)` in the lexicographic list of all pairs of `[n]`.
    pub fn lex_index(self, n: usize) -> usize {
        let i = self.0 - 1;
        let j = self.1 - 1;
        // pairs with first coordinate < i: sum_{r<i} (n-1-r)
        i * (2 * n - i - 1) / 2 + (j - i - 1)
    }

    pub fn contains(self, v: usize) -> bool {
        self.0 == v || self.1 == v
    }
}

impl fmt::Display for Pair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}-{}", self.0, self.1)
    }
}

impl FromStr for Pair {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let (a, b) = s
            .trim()
            .split_once('-')
            .ok_or_else(|| Error::Parse(format!("expected i-j, got {s:?}")))?;
        let a: usize = a.trim().parse().map_err(|_| Error::Parse(format!("bad vertex in {s:?}")))?;
        let b: usize = b.trim().parse().map_err(|_| Error::Parse(format!("bad vertex in {s:?}")))?;
        if a == 0 || b == 0 {
            return Err(Error::Parse("vertices are 1-based".into()));
        }
        Pair::new(a, b)
    }
}

/// All pairs of `[n]` in lexicographic order.
pub fn all_pairs(n: usize) -> Vec<Pair> {
    let mut out = Vec::with_capacity(n * n.saturating_sub(1) / 2);
    for i in 1..=n {
        for j in i + 1..=n {
            out.push(Pair(i, j));
        }
    }
    out
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum EdgeSetTag {
    /// A subset of the nonedges of a graph on `n` vertices.
    Nonedges,
    /// Pairs `{u, v}` with `u <= left < v`, joining the two blocks of a
    /// disjoint union whose first block has `left` vertices.
    Bridging { left: usize },
}

/// A canonically ordered set of vertex pairs over the universe `1..=n`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EdgeSet {
    n: usize,
    pairs: Vec<Pair>,
    tag: EdgeSetTag,
}

impl EdgeSet {
    pub fn new(n: usize, pairs: impl IntoIterator<Item = Pair>) -> Result<Self> {
        let mut seen = BTreeSet::new();
        for p in pairs {
            if p.1 > n || p.0 == 0 {
                return Err(Error::VertexOutOfRange { vertex: p.1.max(p.0), n });
            }
            if !seen.insert(p) {
                return Err(Error::DuplicateEdge(p.0, p.1));
            }
        }
        Ok(EdgeSet { n, pairs: seen.into_iter().collect(), tag: EdgeSetTag::Nonedges })
    }

    /// A set of pairs joining `1..=left` to `left+1..=n`.
    pub fn bridging(n: usize, left: usize, pairs: impl IntoIterator<Item = Pair>) -> Result<Self> {
        let mut set = Self::new(n, pairs)?;
        if let Some(p) = set.pairs.iter().find(|p| !(p.0 <= left && p.1 > left)) {
            return Err(Error::InvalidParameter(format!(
                "pair {p} does not join 1..={left} to {}..={n}",
                left + 1
            )));
        }
        set.tag = EdgeSetTag::Bridging { left };
        Ok(set)
    }

    /// Parses the CLI syntax `"i-j,k-l"`.
    pub fn parse(n: usize, s: &str) -> Result<Self> {
        let pairs = s
            .split(',')
            .filter(|t| !t.trim().is_empty())
            .map(Pair::from_str)
            .collect::<Result<Vec<_>>>()?;
        Self::new(n, pairs)
    }

    pub fn universe(&self) -> usize {
        self.n
    }

    pub fn tag(&self) -> EdgeSetTag {
        self.tag
    }

    pub fn pairs(&self) -> &[Pair] {
        &self.pairs
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    pub fn contains(&self, p: Pair) -> bool {
        self.pairs.binary_search(&p).is_ok()
    }

    /// The set with its `k`-th element removed.
    pub fn without(&self, k: usize) -> EdgeSet {
        let mut pairs = self.pairs.clone();
        pairs.remove(k);
        EdgeSet { n: self.n, pairs, tag: self.tag }
    }
}

impl fmt::Display for EdgeSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.pairs.iter().map(ToString::to_string).collect();
        write!(f, "{}", parts.join(","))
    }
}

/// A simple graph on vertices `1..=n`.
#[derive(Clone, PartialEq, Eq, Serialize)]
pub struct Graph {
    n: usize,
    edges: Vec<Pair>,
    #[serde(skip)]
    nonedges: Vec<Pair>,
    #[serde(skip)]
    adj: Vec<Vec<usize>>,
}

impl Graph {
    pub fn new(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        let mut set = BTreeSet::new();
        for (a, b) in edges {
            let p = Pair::new(a, b)?;
            if p.0 == 0 || p.1 > n {
                return Err(Error::VertexOutOfRange { vertex: if p.0 == 0 { 0 } else { p.1 }, n });
            }
            if !set.insert(p) {
                return Err(Error::DuplicateEdge(p.0, p.1));
            }
        }
        Ok(Self::from_sorted(n, set.into_iter().collect()))
    }

    fn from_sorted(n: usize, edges: Vec<Pair>) -> Self {
        let mut adj = vec![Vec::new(); n + 1];
        for &Pair(i, j) in &edges {
            adj[i].push(j);
            adj[j].push(i);
        }
        for list in &mut adj {
            list.sort_unstable();
        }
        let nonedges = all_pairs(n).into_iter().filter(|p| edges.binary_search(p).is_err()).collect();
        Graph { n, edges, nonedges, adj }
    }

    /// Edgeless graph `n K_1`.
    pub fn empty(n: usize) -> Self {
        Self::from_sorted(n, Vec::new())
    }

    pub fn order(&self) -> usize {
        self.n
    }

    pub fn edges(&self) -> &[Pair] {
        &self.edges
    }

    pub fn nonedges(&self) -> &[Pair] {
        &self.nonedges
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn has_edge(&self, a: usize, b: usize) -> bool {
        a != b && self.adj.get(a).is_some_and(|l| l.binary_search(&b).is_ok())
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adj[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    pub fn degree_sequence(&self) -> Vec<usize> {
        let mut d: Vec<usize> = (1..=self.n).map(|v| self.degree(v)).collect();
        d.sort_unstable();
        d
    }

    /// All nonedges as an [`EdgeSet`].
    pub fn nonedge_set(&self) -> EdgeSet {
        EdgeSet { n: self.n, pairs: self.nonedges.clone(), tag: EdgeSetTag::Nonedges }
    }

    pub fn complement(&self) -> Graph {
        Self::from_sorted(self.n, self.nonedges.clone())
    }

    /// `G ∪ H` with the vertices of `H` shifted by `|V(G)|`.
    pub fn disjoint_union(&self, other: &Graph) -> Graph {
        let off = self.n;
        let mut edges = self.edges.clone();
        edges.extend(other.edges.iter().map(|p| Pair(p.0 + off, p.1 + off)));
        Self::from_sorted(self.n + other.n, edges)
    }

    /// `G + β`; every pair of `β` must be a nonedge of `G`.
    pub fn add_edges(&self, beta: &EdgeSet) -> Result<Graph> {
        self.add_pairs(beta.pairs())
    }

    pub fn add_pairs(&self, pairs: &[Pair]) -> Result<Graph> {
        let mut edges = self.edges.clone();
        for &p in pairs {
            if p.1 > self.n {
                return Err(Error::VertexOutOfRange { vertex: p.1, n: self.n });
            }
            if self.has_edge(p.0, p.1) {
                return Err(Error::EdgeAlreadyPresent(p.0, p.1));
            }
            edges.push(p);
        }
        edges.sort_unstable();
        if let Some(w) = edges.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::DuplicateEdge(w[0].0, w[0].1));
        }
        Ok(Self::from_sorted(self.n, edges))
    }

    /// `G □ H`; vertex `(u, v)` is flattened to `(u-1)|V(H)| + v`.
    pub fn cartesian_product(&self, other: &Graph) -> Graph {
        let m = other.n;
        let flat = |u: usize, v: usize| (u - 1) * m + v;
        let mut edges = Vec::new();
        for u in 1..=self.n {
            for &Pair(v1, v2) in &other.edges {
                edges.push(Pair(flat(u, v1), flat(u, v2)));
            }
        }
        for &Pair(u1, u2) in &self.edges {
            for v in 1..=m {
                edges.push(Pair(flat(u1, v), flat(u2, v)));
            }
        }
        edges.sort_unstable();
        Self::from_sorted(self.n * m, edges)
    }

    /// Graph induced on `keep` (1-based), relabeled `1..=keep.len()` in the given order.
    pub fn induced(&self, keep: &[usize]) -> Graph {
        let mut pos = vec![0usize; self.n + 1];
        for (k, &v) in keep.iter().enumerate() {
            pos[v] = k + 1;
        }
        let mut edges: Vec<Pair> = self
            .edges
            .iter()
            .filter(|p| pos[p.0] != 0 && pos[p.1] != 0)
            .map(|p| Pair::new(pos[p.0], pos[p.1]).expect("distinct positions"))
            .collect();
        edges.sort_unstable();
        Self::from_sorted(keep.len(), edges)
    }

    /// Relabels vertex `v` as `perm[v-1]`.
    pub fn relabel(&self, perm: &[usize]) -> Result<Graph> {
        if perm.len() != self.n {
            return Err(Error::DimensionMismatch("permutation length".into()));
        }
        let mut edges: Vec<Pair> =
            self.edges.iter().map(|p| Pair::new(perm[p.0 - 1], perm[p.1 - 1])).collect::<Result<_>>()?;
        edges.sort_unstable();
        Ok(Self::from_sorted(self.n, edges))
    }

    /// True when `self` and `other` share the vertex set and `E(self) ⊆ E(other)`.
    pub fn is_spanning_subgraph_of(&self, other: &Graph) -> bool {
        self.n == other.n && self.edges.iter().all(|p| other.has_edge(p.0, p.1))
    }

    pub fn is_connected(&self) -> bool {
        if self.n == 0 {
            return true;
        }
        let mut seen = vec![false; self.n + 1];
        let mut stack = vec![1];
        seen[1] = true;
        let mut count = 1;
        while let Some(v) = stack.pop() {
            for &w in &self.adj[v] {
                if !seen[w] {
                    seen[w] = true;
                    count += 1;
                    stack.push(w);
                }
            }
        }
        count == self.n
    }

    /// Text format: `n m` then one `i j` line per edge.
    pub fn to_text(&self) -> String {
        let mut s = format!("{} {}\n", self.n, self.edges.len());
        for p in &self.edges {
            s.push_str(&format!("{} {}\n", p.0, p.1));
        }
        s
    }

    pub fn parse_text(text: &str) -> Result<Graph> {
        let mut nums = text
            .split_whitespace()
            .map(|t| t.parse::<usize>().map_err(|_| Error::Parse(format!("bad integer {t:?}"))));
        let mut next = |what: &str| nums.next().unwrap_or_else(|| Err(Error::Parse(format!("missing {what}"))));
        let n = next("vertex count")?;
        let m = next("edge count")?;
        let mut edges = Vec::with_capacity(m);
        for _ in 0..m {
            edges.push((next("edge endpoint")?, next("edge endpoint")?));
        }
        if nums.next().is_some() {
            return Err(Error::Parse("trailing data after edge list".into()));
        }
        Graph::new(n, edges)
    }
}

impl fmt::Debug for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let e: Vec<String> = self.edges.iter().map(ToString::to_string).collect();
        write!(f, "Graph(n={}, [{}])", self.n, e.join(","))
    }
}
