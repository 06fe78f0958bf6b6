//! Zero forcing and local zero forcing on Cartesian products, and the
//! translation of covers into bridging edge sets for direct sums.

use std::fmt;
use std::str::FromStr;

use itertools::Itertools;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{EdgeSet, Graph, Pair};
use crate::liberation::directsum::{directsum_liberation, DirectSumCertificate};
use crate::numeric::SymMatrix;
use crate::par;
use crate::strong::Kind;

/// Largest graph accepted by [`zero_forcing_number`] unless told otherwise.
pub const DEFAULT_BOUND: usize = 16;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Rule {
    Standard,
    GLocal,
    HLocal,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Force {
    pub from: usize,
    pub to: usize,
    pub rule: Rule,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ColorState {
    pub initial: Vec<usize>,
    pub blue: Vec<usize>,
    pub log: Vec<Force>,
    pub complete: bool,
}

/// Vertex `(u, v)` of `G □ H`, both 1-based in their own factor.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct ProductVertex(pub usize, pub usize);

impl fmt::Display for ProductVertex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.0, self.1)
    }
}

impl FromStr for ProductVertex {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let (u, v) = s.trim().split_once(':').ok_or_else(|| Error::Parse(format!("expected `u:v`, got `{s}`")))?;
        let num = |x: &str| x.trim().parse::<usize>().map_err(|_| Error::Parse(format!("bad vertex `{x}`")));
        Ok(ProductVertex(num(u)?, num(v)?))
    }
}

/// `"1:1,2:1,3:2"` as product vertices.
pub fn parse_product_set(s: &str) -> Result<Vec<ProductVertex>> {
    s.split(',').filter(|t| !t.trim().is_empty()).map(str::parse).collect()
}

/// `G □ H` with the row-major vertex map `(u, v) ↦ (u - 1)|H| + v`.
#[derive(Clone, Debug)]
pub struct Product {
    pub g: Graph,
    pub h: Graph,
    pub graph: Graph,
}

impl Product {
    pub fn new(g: &Graph, h: &Graph) -> Self {
        Product { g: g.clone(), h: h.clone(), graph: g.cartesian_product(h) }
    }

    pub fn flat(&self, p: ProductVertex) -> Result<usize> {
        let (m, k) = (self.g.order(), self.h.order());
        if p.0 == 0 || p.0 > m || p.1 == 0 || p.1 > k {
            return Err(Error::InvalidParameter(format!("{p} is not a vertex of a {m}x{k} product")));
        }
        Ok((p.0 - 1) * k + p.1)
    }

    pub fn unflat(&self, x: usize) -> ProductVertex {
        let k = self.h.order();
        ProductVertex((x - 1) / k + 1, (x - 1) % k + 1)
    }

    pub fn flatten(&self, f: &[ProductVertex]) -> Result<Vec<usize>> {
        f.iter().map(|&p| self.flat(p)).collect()
    }

    /// Neighbors of `x` inside its copy of `G` (`rule = GLocal`) or of `H`.
    fn copy_neighbors(&self, x: usize, rule: Rule) -> Vec<usize> {
        let ProductVertex(u, v) = self.unflat(x);
        let k = self.h.order();
        match rule {
            Rule::GLocal => self.g.neighbors(u).iter().map(|&w| (w - 1) * k + v).collect(),
            Rule::HLocal => self.h.neighbors(v).iter().map(|&w| (u - 1) * k + w).collect(),
            Rule::Standard => self.graph.neighbors(x).to_vec(),
        }
    }
}

fn check_vertices(n: usize, f: &[usize]) -> Result<()> {
    match f.iter().find(|&&v| v == 0 || v > n) {
        Some(v) => Err(Error::InvalidParameter(format!("vertex {v} outside 1..={n}"))),
        None => Ok(()),
    }
}

fn only_white(neighbors: &[usize], blue: &[bool]) -> Option<usize> {
    let mut white = neighbors.iter().filter(|&&w| !blue[w]);
    match (white.next(), white.next()) {
        (Some(&w), None) => Some(w),
        _ => None,
    }
}

/// Runs forces until none applies. `next` picks a force among the legal
/// ones; `rules` lists the neighborhoods a force may be judged in.
fn run<N, P>(n: usize, f: &[usize], rules: &[Rule], neighbors: N, mut pick: P) -> ColorState
where
    N: Fn(usize, Rule) -> Vec<usize>,
    P: FnMut(&[Force]) -> usize,
{
    let mut blue = vec![false; n + 1];
    for &v in f {
        blue[v] = true;
    }
    let mut log = Vec::new();
    loop {
        let mut legal = Vec::new();
        for u in (1..=n).filter(|&u| blue[u]) {
            for &rule in rules {
                if let Some(w) = only_white(&neighbors(u, rule), &blue) {
                    legal.push(Force { from: u, to: w, rule });
                }
            }
        }
        if legal.is_empty() {
            break;
        }
        let force = legal[pick(&legal)];
        blue[force.to] = true;
        log.push(force);
    }
    let mut initial = f.to_vec();
    initial.sort_unstable();
    initial.dedup();
    let blue: Vec<usize> = (1..=n).filter(|&v| blue[v]).collect();
    ColorState { complete: blue.len() == n, initial, blue, log }
}

/// Closure of `f` under the color change rule, forcing from the smallest
/// blue vertex first.
pub fn closure(g: &Graph, f: &[usize]) -> Result<ColorState> {
    check_vertices(g.order(), f)?;
    Ok(run(g.order(), f, &[Rule::Standard], |u, _| g.neighbors(u).to_vec(), |_| 0))
}

/// Closure with the force at each step chosen by `pick` from the legal ones.
pub fn closure_scheduled<P: FnMut(&[Force]) -> usize>(g: &Graph, f: &[usize], pick: P) -> Result<ColorState> {
    check_vertices(g.order(), f)?;
    Ok(run(g.order(), f, &[Rule::Standard], |u, _| g.neighbors(u).to_vec(), pick))
}

/// Closure on `G □ H` where `u` forces `v` when `v` is its only white
/// neighbor within the copy of `G` or of `H` through `u`.
pub fn local_closure(p: &Product, f: &[ProductVertex]) -> Result<ColorState> {
    let flat = p.flatten(f)?;
    Ok(run(p.graph.order(), &flat, &[Rule::GLocal, Rule::HLocal], |u, r| p.copy_neighbors(u, r), |_| 0))
}

pub fn is_zero_forcing_set(g: &Graph, f: &[usize]) -> Result<bool> {
    Ok(closure(g, f)?.complete)
}

/// Replays `state.log` from `state.initial`, checking each force was legal
/// when made.
pub fn replay(g: &Graph, product: Option<&Product>, state: &ColorState) -> bool {
    let n = g.order();
    let mut blue = vec![false; n + 1];
    for &v in &state.initial {
        blue[v] = true;
    }
    for force in &state.log {
        let nbrs = match (force.rule, product) {
            (Rule::Standard, _) => g.neighbors(force.from).to_vec(),
            (rule, Some(p)) => p.copy_neighbors(force.from, rule),
            (_, None) => return false,
        };
        if !blue[force.from] || only_white(&nbrs, &blue) != Some(force.to) {
            return false;
        }
        blue[force.to] = true;
    }
    (1..=n).filter(|&v| blue[v]).eq(state.blue.iter().copied())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ZeroForcingNumber {
    pub value: usize,
    pub witness: Vec<usize>,
}

/// `Z(G)` by search over sets of increasing size.
pub fn zero_forcing_number(g: &Graph, bound: usize) -> Result<ZeroForcingNumber> {
    let n = g.order();
    if n > bound {
        return Err(Error::InvalidParameter(format!("{n} vertices exceeds the search bound {bound}")));
    }
    for size in 0..=n {
        let sets: Vec<Vec<usize>> = (1..=n).combinations(size).collect();
        let found = par::find_map_first(&sets, |s| closure(g, s).ok().filter(|c| c.complete).map(|_| s.clone()));
        if let Some(witness) = found {
            return Ok(ZeroForcingNumber { value: size, witness });
        }
    }
    unreachable!("the full vertex set forces")
}

fn all_but_one<F: Fn(&[usize]) -> bool + Sync>(f: &[usize], forces: F) -> bool {
    if f.is_empty() {
        return false;
    }
    let idx: Vec<usize> = (0..f.len()).collect();
    par::all(&idx, |&k| {
        let rest: Vec<usize> = f.iter().enumerate().filter(|&(j, _)| j != k).map(|(_, &v)| v).collect();
        forces(&rest)
    })
}

/// Every subset of `f` missing one vertex is a zero forcing set.
pub fn is_zf_cover(g: &Graph, f: &[usize]) -> Result<bool> {
    check_vertices(g.order(), f)?;
    Ok(all_but_one(f, |s| closure(g, s).map(|c| c.complete).unwrap_or(false)))
}

/// Every subset of `f` missing one vertex is a local zero forcing set.
pub fn is_local_zf_cover(p: &Product, f: &[ProductVertex]) -> Result<bool> {
    let flat = p.flatten(f)?;
    Ok(all_but_one(&flat, |s| {
        let pv: Vec<ProductVertex> = s.iter().map(|&x| p.unflat(x)).collect();
        local_closure(p, &pv).map(|c| c.complete).unwrap_or(false)
    }))
}

/// `(u, v) ↦ {u, v + |V(G)|}` in the labeling of `G ∪ H`.
pub fn cover_to_bridge(m: usize, k: usize, f: &[ProductVertex]) -> Result<EdgeSet> {
    let pairs = f
        .iter()
        .map(|&ProductVertex(u, v)| {
            if u == 0 || u > m || v == 0 || v > k {
                return Err(Error::InvalidParameter(format!("{u}:{v} is not a vertex of a {m}x{k} product")));
            }
            Ok(Pair(u, v + m))
        })
        .collect::<Result<Vec<_>>>()?;
    EdgeSet::bridging(m + k, m, pairs)
}

#[derive(Clone, Debug, Serialize)]
pub struct ZfLiberation {
    pub kind: Kind,
    pub cover: Vec<ProductVertex>,
    /// The combinatorial verdict: a zero forcing cover for SSP, a local one
    /// for SAP.
    pub is_cover: bool,
    pub beta: String,
    pub certificate: DirectSumCertificate,
}

impl ZfLiberation {
    /// Cover implies liberation; the converse need not hold.
    pub fn consistent(&self) -> bool {
        !self.is_cover || !self.certificate.hypotheses.strong_a || !self.certificate.hypotheses.strong_b || self.certificate.verdict
    }
}

/// Checks `f` combinatorially on `G □ H` (patterns of `a` and `b`) and
/// certifies the translated edge set for `A ⊕ B` algebraically.
pub fn zf_liberation(a: &SymMatrix, b: &SymMatrix, f: &[ProductVertex], kind: Kind, tol: f64) -> Result<ZfLiberation> {
    let g = crate::patterns::pattern_of(a.matrix(), 0.0)?;
    let h = crate::patterns::pattern_of(b.matrix(), 0.0)?;
    let p = Product::new(&g, &h);
    let is_cover = match kind {
        Kind::Ssp => is_zf_cover(&p.graph, &p.flatten(f)?)?,
        Kind::Sap => is_local_zf_cover(&p, f)?,
    };
    let beta = cover_to_bridge(g.order(), h.order(), f)?;
    let certificate = directsum_liberation(a, b, &beta, kind, tol)?;
    Ok(ZfLiberation { kind, cover: f.to_vec(), is_cover, beta: beta.to_string(), certificate })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::{catalog, cycle, path};
    use proptest::prelude::{prop_assert, prop_assert_eq, proptest, ProptestConfig};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn pv(list: &[(usize, usize)]) -> Vec<ProductVertex> {
        list.iter().map(|&(u, v)| ProductVertex(u, v)).collect()
    }

    #[test]
    fn paths_and_cycles() {
        for n in 2..=8 {
            let p = path(n).unwrap();
            assert!(closure(&p, &[1]).unwrap().complete);
            assert_eq!(zero_forcing_number(&p, DEFAULT_BOUND).unwrap().value, 1);
        }
        for n in 3..=8 {
            let c = cycle(n).unwrap();
            assert!(closure(&c, &[1, 2]).unwrap().complete);
            let stalled = closure(&c, &[1]).unwrap();
            assert!(stalled.log.is_empty() && !stalled.complete);
            assert_eq!(zero_forcing_number(&c, DEFAULT_BOUND).unwrap().value, 2);
        }
    }

    #[test]
    fn products() {
        let z = |g: &Graph, h: &Graph| zero_forcing_number(&g.cartesian_product(h), DEFAULT_BOUND).unwrap().value;
        assert_eq!(z(&path(3).unwrap(), &path(4).unwrap()), 3);
        assert_eq!(z(&cycle(4).unwrap(), &path(2).unwrap()), 4);
        assert_eq!(z(&cycle(3).unwrap(), &cycle(3).unwrap()), 5);
        assert!(zero_forcing_number(&path(17).unwrap(), DEFAULT_BOUND).is_err());
    }

    #[test]
    fn smallest_index_first_log() {
        let s = closure(&path(4).unwrap(), &[2, 1]).unwrap();
        assert_eq!(s.initial, vec![1, 2]);
        assert_eq!(s.log.iter().map(|f| (f.from, f.to)).collect::<Vec<_>>(), vec![(2, 3), (3, 4)]);
        assert!(replay(&path(4).unwrap(), None, &s));
    }

    #[test]
    fn star_leaves_cover() {
        let k13 = catalog("K1,3").unwrap();
        let leaves: Vec<usize> = (1..=4).filter(|&v| k13.degree(v) == 1).collect();
        assert!(is_zf_cover(&k13, &leaves).unwrap());
        assert!(!is_zf_cover(&k13, &leaves[..2]).unwrap());
    }

    #[test]
    fn prism_local_cover() {
        let p = Product::new(&cycle(4).unwrap(), &path(2).unwrap());
        let f = pv(&[(1, 1), (2, 1), (3, 2), (4, 2)]);
        assert!(is_local_zf_cover(&p, &f).unwrap());
        let state = local_closure(&p, &f[..2]).unwrap();
        assert!(state.complete);
        assert!(replay(&p.graph, Some(&p), &state));
        // it is not a standard cover: Z(C4 □ P2) = 4
        assert!(!is_zf_cover(&p.graph, &p.flatten(&f).unwrap()).unwrap());
        assert_eq!(cover_to_bridge(4, 2, &f).unwrap().to_string(), EdgeSet::parse(6, "1-5,2-5,3-6,4-6").unwrap().to_string());
        assert!(cover_to_bridge(4, 2, &[]).unwrap().is_empty());
    }

    #[test]
    fn local_equals_standard_over_k1() {
        let c5 = cycle(5).unwrap();
        let p = Product::new(&c5, &Graph::empty(1));
        for f in (1..=5).combinations(4) {
            let pf: Vec<ProductVertex> = f.iter().map(|&u| ProductVertex(u, 1)).collect();
            assert!(is_zf_cover(&c5, &f).unwrap());
            assert!(is_local_zf_cover(&p, &pf).unwrap());
        }
    }

    #[test]
    fn standard_forces_inside_a_copy_are_local() {
        for (g, h) in [(cycle(4).unwrap(), path(2).unwrap()), (path(3).unwrap(), path(4).unwrap()), (cycle(3).unwrap(), cycle(3).unwrap())] {
            let p = Product::new(&g, &h);
            let mut rng = ChaCha8Rng::seed_from_u64(4);
            for _ in 0..20 {
                let f: Vec<usize> = (1..=p.graph.order()).filter(|_| rng.gen_bool(0.4)).collect();
                let s = closure(&p.graph, &f).unwrap();
                let mut blue = vec![false; p.graph.order() + 1];
                for &v in &s.initial {
                    blue[v] = true;
                }
                for force in &s.log {
                    let (a, b) = (p.unflat(force.from), p.unflat(force.to));
                    let rule = if a.1 == b.1 { Rule::GLocal } else { Rule::HLocal };
                    assert_eq!(only_white(&p.copy_neighbors(force.from, rule), &blue), Some(force.to));
                    blue[force.to] = true;
                }
            }
        }
    }

    #[test]
    fn cycle_products() {
        // Z(C3 □ C3) = 2·3 - 1, Z(C3 □ C4) = 2·min(3, 4)
        let z = |s, t| zero_forcing_number(&cycle(s).unwrap().cartesian_product(&cycle(t).unwrap()), DEFAULT_BOUND).unwrap().value;
        assert_eq!(z(3, 3), 5);
        assert_eq!(z(3, 4), 6);
    }

    fn random_graph(seed: u64, n: usize) -> Graph {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let edges: Vec<(usize, usize)> =
            crate::graph::all_pairs(n).into_iter().filter(|_| rng.gen_bool(0.4)).map(|p| (p.0, p.1)).collect();
        Graph::new(n, edges).unwrap()
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn schedule_does_not_matter(seed in 0u64..10_000, n in 2usize..=10) {
            let g = random_graph(seed, n);
            let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0xabc);
            let f: Vec<usize> = (1..=n).filter(|_| rng.gen_bool(0.3)).collect();
            let base = closure(&g, &f).unwrap();
            prop_assert!(replay(&g, None, &base));
            for _ in 0..50 {
                let s = closure_scheduled(&g, &f, |legal| rng.gen_range(0..legal.len())).unwrap();
                prop_assert!(replay(&g, None, &s));
                prop_assert_eq!(&s.blue, &base.blue);
            }
        }

        #[test]
        fn disjoint_forcing_sets_make_a_cover(seed in 0u64..10_000, n in 2usize..=10) {
            let g = random_graph(seed, n);
            let z = zero_forcing_number(&g, DEFAULT_BOUND).unwrap();
            let rest: Vec<usize> = (1..=n).filter(|v| !z.witness.contains(v)).collect();
            let second = (1..=rest.len()).find_map(|k| {
                rest.iter().copied().combinations(k).find(|s| is_zero_forcing_set(&g, s).unwrap())
            });
            if let Some(second) = second {
                let union: Vec<usize> = z.witness.iter().chain(&second).copied().collect();
                prop_assert!(is_zf_cover(&g, &union).unwrap());
            }
        }
    }
}
