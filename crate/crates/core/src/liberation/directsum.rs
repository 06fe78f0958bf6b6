//! Direct sums `A ⊕ B` joined by a set `β` of bridging edges: the solution
//! space `R(A, B)` of `AY = YB`, generic eigenspaces, and liberation sets
//! built from grids and rows.

use std::collections::BTreeMap;

use itertools::Itertools;
use num::Zero;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exact;
use crate::graph::{EdgeSet, EdgeSetTag, Graph, Pair};
use crate::matrix::RatMatrix;
use crate::numeric::{clusters, det, orthonormalize_columns, svd, Mat, SymMatrix};
use crate::par;
use crate::patterns::pattern_of;
use crate::strong::{has_strong_property_f64, has_strong_property_wrt_f64, Kind};

/// Rank and genericity threshold relative to the largest singular value.
pub const RANK_TOL: f64 = 1e-9;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CommonEigenvalue {
    pub value: f64,
    pub mult_a: usize,
    pub mult_b: usize,
}

/// A basis of `R(A, B)` (or, for the SAP, of `{Y : AY = O = YB}`).
#[derive(Clone, Debug)]
pub struct SylvesterSpace {
    pub basis: Vec<Mat>,
    pub common: Vec<CommonEigenvalue>,
    /// Clustering within one of the spectra was close to the tolerance.
    pub ambiguous: bool,
}

impl SylvesterSpace {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    /// `Σ a_i b_i` over the common eigenvalues.
    pub fn expected_dim(&self) -> usize {
        self.common.iter().map(|c| c.mult_a * c.mult_b).sum()
    }
}

struct Clustered {
    values: Vec<f64>,
    ranges: Vec<std::ops::Range<usize>>,
    ambiguous: bool,
}

fn clustered(m: &SymMatrix, tol: f64) -> Clustered {
    let (list, ranges) = clusters(m.spectrum(), tol);
    Clustered { values: list.values, ranges, ambiguous: list.ambiguous }
}

fn outer_products(a: &SymMatrix, ra: &std::ops::Range<usize>, b: &SymMatrix, rb: &std::ops::Range<usize>) -> Vec<Mat> {
    let (qa, qb) = (&a.eigen().vectors, &b.eigen().vectors);
    let mut out = Vec::new();
    for i in ra.clone() {
        for j in rb.clone() {
            out.push(Mat::from_fn(a.order(), b.order(), |r, c| qa[(r, i)] * qb[(c, j)]));
        }
    }
    out
}

fn residual_check(a: &SymMatrix, b: &SymMatrix, basis: &[Mat], kind: Kind) -> Result<()> {
    let scale = a.matrix().norm_inf().max(b.matrix().norm_inf()).max(1.0);
    for y in basis {
        let ay = a.matrix().mul(y)?;
        let yb = y.mul(b.matrix())?;
        let res = match kind {
            Kind::Ssp => ay.sub(&yb)?.max_abs(),
            Kind::Sap => ay.max_abs().max(yb.max_abs()),
        };
        if res > 1e-9 * scale {
            return Err(Error::NonConvergence(format!("basis element of R(A, B) has residual {res:.3e}")));
        }
    }
    Ok(())
}

/// `R(A, B) = span{u vᵀ : Au = λu, Bv = λv}` from eigenvector outer products
/// over the common eigenvalues (matched within `tol`).
pub fn sylvester_space(a: &SymMatrix, b: &SymMatrix, tol: f64) -> Result<SylvesterSpace> {
    let (ca, cb) = (clustered(a, tol), clustered(b, tol));
    let mut basis = Vec::new();
    let mut common = Vec::new();
    for (i, &la) in ca.values.iter().enumerate() {
        for (j, &lb) in cb.values.iter().enumerate() {
            let gap = (la - lb).abs();
            if gap > tol && gap <= 10.0 * tol {
                return Err(Error::AmbiguousClustering(tol));
            }
            if gap <= tol {
                common.push(CommonEigenvalue {
                    value: 0.5 * (la + lb),
                    mult_a: ca.ranges[i].len(),
                    mult_b: cb.ranges[j].len(),
                });
                basis.extend(outer_products(a, &ca.ranges[i], b, &cb.ranges[j]));
            }
        }
    }
    residual_check(a, b, &basis, Kind::Ssp)?;
    Ok(SylvesterSpace { basis, common, ambiguous: ca.ambiguous || cb.ambiguous })
}

/// `{Y : AY = O = YB}`, spanned by outer products of kernel vectors.
pub fn sap_space(a: &SymMatrix, b: &SymMatrix, tol: f64) -> Result<SylvesterSpace> {
    let (ca, cb) = (clustered(a, tol), clustered(b, tol));
    let zero = |c: &Clustered| -> Result<Option<usize>> {
        for (i, &v) in c.values.iter().enumerate() {
            if v.abs() > tol && v.abs() <= 10.0 * tol {
                return Err(Error::AmbiguousClustering(tol));
            }
            if v.abs() <= tol {
                return Ok(Some(i));
            }
        }
        Ok(None)
    };
    let mut basis = Vec::new();
    let mut common = Vec::new();
    if let (Some(i), Some(j)) = (zero(&ca)?, zero(&cb)?) {
        common.push(CommonEigenvalue { value: 0.0, mult_a: ca.ranges[i].len(), mult_b: cb.ranges[j].len() });
        basis = outer_products(a, &ca.ranges[i], b, &cb.ranges[j]);
    }
    residual_check(a, b, &basis, Kind::Sap)?;
    Ok(SylvesterSpace { basis, common, ambiguous: ca.ambiguous || cb.ambiguous })
}

/// Every `d×d` row-submatrix of the `n×d` basis `W` is invertible. The
/// columns are orthonormalized first, so every minor is at most 1 in size and
/// counts as invertible when `|det| > tol`.
pub fn is_generic(w: &Mat, tol: f64) -> Result<bool> {
    let d = w.cols();
    if d == 0 {
        return Ok(true);
    }
    if svd(w).rank(RANK_TOL) < d {
        return Err(Error::RankDeficient);
    }
    let q = orthonormalize_columns(w).ok_or(Error::RankDeficient)?;
    let subsets: Vec<Vec<usize>> = (0..w.rows()).combinations(d).collect();
    Ok(par::all(&subsets, |rows| {
        det(&q.select_rows(rows)).abs() > tol
    }))
}

/// Exact version of [`is_generic`].
pub fn is_generic_rat(w: &RatMatrix) -> Result<bool> {
    let d = w.cols();
    if exact::rank(w) < d {
        return Err(Error::RankDeficient);
    }
    let subsets: Vec<Vec<usize>> = (0..w.rows()).combinations(d).collect();
    Ok(par::all(&subsets, |rows| exact::det(&w.select_rows(rows)).is_ok_and(|v| !v.is_zero())))
}

/// `(u, v)` with `u` a vertex of the first block and `v` of the second, both
/// 1-based within their block.
fn split_pair(p: Pair, m: usize) -> Result<(usize, usize)> {
    if p.0 <= m && p.1 > m {
        Ok((p.0, p.1 - m))
    } else {
        Err(Error::InvalidParameter(format!("pair {p} does not bridge the two blocks")))
    }
}

fn check_bridging(beta: &EdgeSet, m: usize, n: usize) -> Result<()> {
    if beta.universe() != m + n {
        return Err(Error::DimensionMismatch(format!("edge set over {} vertices, blocks {m} + {n}", beta.universe())));
    }
    if let EdgeSetTag::Bridging { left } = beta.tag() {
        if left != m {
            return Err(Error::DimensionMismatch(format!("bridging set splits at {left}, first block has {m}")));
        }
    }
    beta.pairs().iter().try_for_each(|&p| split_pair(p, m).map(|_| ()))
}

/// Evaluation of each basis element at the positions of `β` (rows) .
pub fn evaluation_matrix(space: &SylvesterSpace, pairs: &[Pair], m: usize) -> Result<Mat> {
    let pos = pairs.iter().map(|&p| split_pair(p, m)).collect::<Result<Vec<_>>>()?;
    Ok(Mat::from_fn(pos.len(), space.dim(), |r, c| space.basis[c][(pos[r].0 - 1, pos[r].1 - 1)]))
}

fn space_for(a: &SymMatrix, b: &SymMatrix, kind: Kind, tol: f64) -> Result<SylvesterSpace> {
    match kind {
        Kind::Ssp => sylvester_space(a, b, tol),
        Kind::Sap => sap_space(a, b, tol),
    }
}

fn trivial_on(space: &SylvesterSpace, pairs: &[Pair], m: usize) -> Result<bool> {
    if space.dim() == 0 {
        return Ok(true);
    }
    if pairs.is_empty() {
        return Ok(false);
    }
    Ok(svd(&evaluation_matrix(space, pairs, m)?).rank(RANK_TOL) == space.dim())
}

/// Whether `Y = O` is the only element of the solution space vanishing on
/// `β`. Together with the strong property of `A` and `B` this gives the
/// strong property of `A ⊕ B` with respect to `G ∪ H + β`.
pub fn directsum_wrt(a: &SymMatrix, b: &SymMatrix, beta: &EdgeSet, kind: Kind, tol: f64) -> Result<bool> {
    check_bridging(beta, a.order(), b.order())?;
    trivial_on(&space_for(a, b, kind, tol)?, beta.pairs(), a.order())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum BetaShape {
    /// `V_G × V_H` with sizes `(k, ℓ+1)` or `(k+1, ℓ)`.
    Grid { rows: usize, cols: usize },
    /// `ℓ = 1` and two elements in each of `k` rows.
    TwoPerRow,
    /// `ℓ = 1` and `k + 1` elements in one column.
    Column,
    /// `k = ℓ = 1` and exactly two elements.
    AnyPair,
    Other,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Hypotheses {
    pub strong_a: bool,
    pub strong_b: bool,
    pub one_common_eigenvalue: bool,
    pub multiplicities: Option<(usize, usize)>,
    pub generic_a: Option<bool>,
    pub generic_b: Option<bool>,
    pub shape: BetaShape,
}

impl Hypotheses {
    /// All hypotheses of the grid / row theorems hold.
    pub fn satisfied(&self) -> bool {
        self.strong_a
            && self.strong_b
            && self.one_common_eigenvalue
            && self.generic_a == Some(true)
            && self.generic_b == Some(true)
            && self.shape != BetaShape::Other
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DirectSumCheck {
    pub removed: Pair,
    /// Only the zero element of the solution space vanishes on `β'`.
    pub holds: bool,
    /// Numeric rank test of the full verification matrix of `A ⊕ B`.
    pub full_matrix: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DirectSumCertificate {
    pub kind: Kind,
    pub beta: Vec<Pair>,
    pub verdict: bool,
    pub dim: usize,
    pub common: Vec<CommonEigenvalue>,
    pub ambiguous: bool,
    pub checks: Vec<DirectSumCheck>,
    pub hypotheses: Hypotheses,
}

pub fn classify_shape(pairs: &[Pair], m: usize, k: usize, l: usize) -> Result<BetaShape> {
    let pos = pairs.iter().map(|&p| split_pair(p, m)).collect::<Result<Vec<_>>>()?;
    let mut rows: BTreeMap<usize, usize> = BTreeMap::new();
    let mut cols: BTreeMap<usize, usize> = BTreeMap::new();
    for &(u, v) in &pos {
        *rows.entry(u).or_default() += 1;
        *cols.entry(v).or_default() += 1;
    }
    let full_grid = pos.len() == rows.len() * cols.len();
    if full_grid && ((rows.len() == k && cols.len() == l + 1) || (rows.len() == k + 1 && cols.len() == l)) {
        return Ok(BetaShape::Grid { rows: rows.len(), cols: cols.len() });
    }
    if l == 1 {
        if k == 1 && pos.len() == 2 {
            return Ok(BetaShape::AnyPair);
        }
        if rows.values().filter(|&&c| c == 2).count() >= k {
            return Ok(BetaShape::TwoPerRow);
        }
        if cols.values().any(|&c| c > k) {
            return Ok(BetaShape::Column);
        }
    }
    Ok(BetaShape::Other)
}

/// `A ⊕ B` is checked against every `β'` (one element of `β` removed), both
/// through the solution space and through the full verification matrix of
/// the direct sum. The hypotheses of the grid and row theorems are reported
/// separately; the verdict does not depend on them.
pub fn directsum_liberation(
    a: &SymMatrix,
    b: &SymMatrix,
    beta: &EdgeSet,
    kind: Kind,
    tol: f64,
) -> Result<DirectSumCertificate> {
    if beta.is_empty() {
        return Err(Error::EmptyBeta);
    }
    let (m, n) = (a.order(), b.order());
    check_bridging(beta, m, n)?;
    let g = pattern_of(a.matrix(), 0.0)?;
    let h = pattern_of(b.matrix(), 0.0)?;
    let space = space_for(a, b, kind, tol)?;

    let union = g.disjoint_union(&h);
    let sum = SymMatrix::new(a.matrix().direct_sum(b.matrix()))?;
    let jobs: Vec<usize> = (0..beta.len()).collect();
    let checks = par::map(jobs, |k| -> Result<DirectSumCheck> {
        let rest = beta.without(k);
        let holds = trivial_on(&space, rest.pairs(), m)?;
        let target = union.add_edges(&rest)?;
        let full_matrix = has_strong_property_wrt_f64(sum.matrix(), &union, &target, kind, RANK_TOL)?;
        Ok(DirectSumCheck { removed: beta.pairs()[k], holds, full_matrix })
    })
    .into_iter()
    .collect::<Result<Vec<_>>>()?;

    let hypotheses = hypotheses(a, b, &g, &h, &space, beta, kind, tol)?;
    Ok(DirectSumCertificate {
        kind,
        beta: beta.pairs().to_vec(),
        verdict: checks.iter().all(|c| c.holds),
        dim: space.dim(),
        common: space.common.clone(),
        ambiguous: space.ambiguous,
        checks,
        hypotheses,
    })
}

#[allow(clippy::too_many_arguments)]
fn hypotheses(
    a: &SymMatrix,
    b: &SymMatrix,
    g: &Graph,
    h: &Graph,
    space: &SylvesterSpace,
    beta: &EdgeSet,
    kind: Kind,
    tol: f64,
) -> Result<Hypotheses> {
    let strong_a = has_strong_property_f64(a.matrix(), g, kind, RANK_TOL)?;
    let strong_b = has_strong_property_f64(b.matrix(), h, kind, RANK_TOL)?;
    let one = space.common.len() == 1;
    let (mut generic_a, mut generic_b, mut multiplicities) = (None, None, None);
    let mut shape = BetaShape::Other;
    if let Some(c) = space.common.first().filter(|_| one) {
        multiplicities = Some((c.mult_a, c.mult_b));
        generic_a = Some(is_generic(&a.eigen().eigenspace(c.value, tol), RANK_TOL)?);
        generic_b = Some(is_generic(&b.eigen().eigenspace(c.value, tol), RANK_TOL)?);
        shape = classify_shape(beta.pairs(), a.order(), c.mult_a, c.mult_b)?;
    }
    Ok(Hypotheses { strong_a, strong_b, one_common_eigenvalue: one, multiplicities, generic_a, generic_b, shape })
}

/// `V_G × V_H` as a bridging set on `m + n` vertices (block-local labels).
pub fn grid(m: usize, n: usize, rows: &[usize], cols: &[usize]) -> Result<EdgeSet> {
    let pairs = rows.iter().flat_map(|&u| cols.iter().map(move |&v| Pair::new(u, m + v)));
    EdgeSet::bridging(m + n, m, pairs.collect::<Result<Vec<_>>>()?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::random_orthogonal;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn sym(rows: Vec<Vec<f64>>) -> SymMatrix {
        SymMatrix::new(Mat::from_rows(rows).unwrap()).unwrap()
    }

    #[test]
    fn space_dimensions() {
        let i2 = sym(vec![vec![1.0, 0.0], vec![0.0, 1.0]]);
        let s = sylvester_space(&i2, &i2, 1e-8).unwrap();
        assert_eq!((s.dim(), s.expected_dim()), (4, 4));
        let d = sym(vec![vec![3.0, 0.0], vec![0.0, 5.0]]);
        assert_eq!(sylvester_space(&i2, &d, 1e-8).unwrap().dim(), 0);
        let near = sym(vec![vec![1.0 + 5e-8]]);
        assert_eq!(sylvester_space(&i2, &near, 1e-8).unwrap_err(), Error::AmbiguousClustering(1e-8));
    }

    #[test]
    fn genericity() {
        let v = Mat::from_rows(vec![vec![1.0], vec![-2.0], vec![0.5]]).unwrap();
        assert!(is_generic(&v, RANK_TOL).unwrap());
        let z = Mat::from_rows(vec![vec![1.0], vec![0.0], vec![0.5]]).unwrap();
        assert!(!is_generic(&z, RANK_TOL).unwrap());
        let e = Mat::from_rows(vec![vec![1.0, 0.0], vec![0.0, 1.0], vec![0.0, 0.0]]).unwrap();
        assert!(!is_generic(&e, RANK_TOL).unwrap());
        let dep = Mat::from_rows(vec![vec![1.0, 2.0], vec![2.0, 4.0], vec![3.0, 6.0]]).unwrap();
        assert_eq!(is_generic(&dep, RANK_TOL), Err(Error::RankDeficient));
        assert!(is_generic_rat(&exact::int_matrix(&[&[1, 1], &[1, 2], &[1, 3]])).unwrap());
        assert!(!is_generic_rat(&exact::int_matrix(&[&[1, 0], &[0, 1], &[0, 0]])).unwrap());
    }

    #[test]
    fn genericity_ignores_the_basis() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for _ in 0..20 {
            let w = crate::numeric::gaussian_matrix(5, 2, &mut rng);
            let mut z = w.clone();
            z[(3, 0)] = 0.0;
            z[(3, 1)] = 0.0;
            let q = crate::numeric::gaussian_matrix(2, 2, &mut rng);
            assert_eq!(is_generic(&w, RANK_TOL).unwrap(), is_generic(&w.mul(&q).unwrap(), RANK_TOL).unwrap());
            assert!(!is_generic(&z.mul(&q).unwrap(), RANK_TOL).unwrap());
        }
    }

    #[test]
    fn shapes() {
        let g = grid(3, 2, &[1, 2], &[1, 2]).unwrap();
        assert_eq!(classify_shape(g.pairs(), 3, 2, 1).unwrap(), BetaShape::Grid { rows: 2, cols: 2 });
        let pair = EdgeSet::bridging(5, 3, [Pair(1, 4), Pair(3, 5)]).unwrap();
        assert_eq!(classify_shape(pair.pairs(), 3, 1, 1).unwrap(), BetaShape::AnyPair);
        // two rows share vertex 1: only one row has two elements
        let bad = EdgeSet::bridging(5, 3, [Pair(1, 4), Pair(1, 5), Pair(2, 4)]).unwrap();
        assert_eq!(classify_shape(bad.pairs(), 3, 2, 1).unwrap(), BetaShape::Other);
        let col = EdgeSet::bridging(5, 3, [Pair(1, 4), Pair(2, 4), Pair(3, 4)]).unwrap();
        assert_eq!(classify_shape(col.pairs(), 3, 2, 1).unwrap(), BetaShape::Grid { rows: 3, cols: 1 });
        let col = EdgeSet::bridging(6, 4, [Pair(1, 5), Pair(2, 5), Pair(3, 5), Pair(4, 5)]).unwrap();
        assert_eq!(classify_shape(col.pairs(), 4, 2, 1).unwrap(), BetaShape::Column);
    }

    #[test]
    fn complete_graph_blocks_share_an_eigenvalue() {
        // K3 with spectrum {1, 1, 4} conjugated into general position, K2 with {1, 3}
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let q = random_orthogonal(3, &mut rng);
        let a = SymMatrix::new(crate::numeric::from_eigen(&[1.0, 1.0, 4.0], &q)).unwrap();
        let b = sym(vec![vec![2.0, 1.0], vec![1.0, 2.0]]);
        let beta = EdgeSet::bridging(5, 3, [Pair(1, 4), Pair(1, 5), Pair(2, 4), Pair(2, 5)]).unwrap();
        let cert = directsum_liberation(&a, &b, &beta, Kind::Ssp, 1e-8).unwrap();
        assert_eq!(cert.dim, 2);
        assert!(cert.verdict);
        assert!(cert.hypotheses.satisfied(), "{:?}", cert.hypotheses);
        assert!(cert.checks.iter().all(|c| c.full_matrix == c.holds));
        // a single bridging edge cannot kill a two-dimensional space
        let one = EdgeSet::bridging(5, 3, [Pair(1, 4), Pair(2, 4)]).unwrap();
        assert!(!directsum_liberation(&a, &b, &one, Kind::Ssp, 1e-8).unwrap().verdict);
    }
}
