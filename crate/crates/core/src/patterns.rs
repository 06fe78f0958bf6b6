//! Pattern classes `S(G)`, `S^cl(G)`, `S^cl_0(G)`, flattenings, the basis
//! matrices `X^{i,j}` and `K^{i,j}`, and random members of `S(G)`.

use num::{BigRational, Signed, Zero};
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::{int, rat};
use crate::graph::{Graph, Pair};
use crate::matrix::{DenseMatrix, RatMatrix, Scalar};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum PatternClass {
    /// Off-diagonal entry nonzero exactly on edges.
    S,
    /// Off-diagonal entries vanish off the edges.
    Closure,
    /// As `Closure`, with zero diagonal.
    ClosureZeroDiag,
}

/// Zero test used for pattern membership: exact for rationals, `|x| ≤ tol`
/// for floats.
pub trait Entry: Scalar {
    fn negligible(&self, tol: f64) -> bool;
}

impl Entry for BigRational {
    fn negligible(&self, _tol: f64) -> bool {
        self.is_zero()
    }
}

impl Entry for f64 {
    fn negligible(&self, tol: f64) -> bool {
        self.abs() <= tol
    }
}

fn check_order<T: Scalar>(a: &DenseMatrix<T>, g: &Graph) -> Result<()> {
    if a.rows() != g.order() || a.cols() != g.order() {
        return Err(Error::DimensionMismatch(format!(
            "{}x{} matrix for a graph on {} vertices",
            a.rows(),
            a.cols(),
            g.order()
        )));
    }
    Ok(())
}

pub fn in_class<T: Entry>(a: &DenseMatrix<T>, g: &Graph, class: PatternClass, tol: f64) -> Result<bool> {
    check_order(a, g)?;
    let n = g.order();
    for i in 0..n {
        for j in i + 1..n {
            if !(a[(i, j)].clone() - a[(j, i)].clone()).negligible(tol) {
                return Ok(false);
            }
            let edge = g.has_edge(i + 1, j + 1);
            let zero = a[(i, j)].negligible(tol);
            let ok = match class {
                PatternClass::S => edge != zero,
                PatternClass::Closure | PatternClass::ClosureZeroDiag => edge || zero,
            };
            if !ok {
                return Ok(false);
            }
        }
        if class == PatternClass::ClosureZeroDiag && !a[(i, i)].negligible(tol) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Off-diagonal support graph.
pub fn pattern_of<T: Entry>(a: &DenseMatrix<T>, tol: f64) -> Result<Graph> {
    if !a.is_square() {
        return Err(Error::DimensionMismatch("pattern of a non-square matrix".into()));
    }
    let n = a.rows();
    let edges = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).filter(|&(i, j)| !a[(i, j)].negligible(tol));
    Graph::new(n, edges.map(|(i, j)| (i + 1, j + 1)).collect::<Vec<_>>())
}

/// Strictly upper triangular part in lexicographic order, length `C(n,2)`.
pub fn vec_wedge<T: Scalar>(k: &DenseMatrix<T>) -> Vec<T> {
    let n = k.rows();
    (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).map(|(i, j)| k[(i, j)].clone()).collect()
}

/// Upper triangular part including the diagonal, length `C(n+1,2)`.
pub fn vec_triangle<T: Scalar>(a: &DenseMatrix<T>) -> Vec<T> {
    let n = a.rows();
    (0..n).flat_map(|i| (i..n).map(move |j| (i, j))).map(|(i, j)| a[(i, j)].clone()).collect()
}

/// All entries in row-major order, length `n²`.
pub fn vec_square<T: Scalar>(a: &DenseMatrix<T>) -> Vec<T> {
    a.data().to_vec()
}

fn checked_pair(n: usize, i: usize, j: usize) -> Result<()> {
    if i >= j {
        return Err(Error::InvalidParameter(format!("basis index needs i < j, got ({i}, {j})")));
    }
    if i == 0 || j > n {
        return Err(Error::VertexOutOfRange { vertex: j.max(i), n });
    }
    Ok(())
}

/// `X^{i,j} = E^{i,j} + E^{j,i}` (1-based).
pub fn basis_x<T: Scalar>(n: usize, i: usize, j: usize) -> Result<DenseMatrix<T>> {
    checked_pair(n, i, j)?;
    let mut x = DenseMatrix::zeros(n, n);
    x[(i - 1, j - 1)] = T::one();
    x[(j - 1, i - 1)] = T::one();
    Ok(x)
}

/// `K^{i,j} = E^{i,j} - E^{j,i}` (1-based).
pub fn basis_k<T: Scalar>(n: usize, i: usize, j: usize) -> Result<DenseMatrix<T>> {
    checked_pair(n, i, j)?;
    let mut k = DenseMatrix::zeros(n, n);
    k[(i - 1, j - 1)] = T::one();
    k[(j - 1, i - 1)] = -T::one();
    Ok(k)
}

/// Symmetric matrix with `value` at the positions of `p`.
pub fn sym_unit<T: Scalar>(n: usize, p: Pair, value: T) -> DenseMatrix<T> {
    let mut x = DenseMatrix::zeros(n, n);
    x[(p.0 - 1, p.1 - 1)] = value.clone();
    x[(p.1 - 1, p.0 - 1)] = value;
    x
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SamplingMode {
    /// Unit off-diagonal entries, zero diagonal.
    UnitOffDiagonal,
    /// Independent random rationals everywhere on the pattern.
    RandomRational,
    /// Random off-diagonal entries with a diagonal drawn from a tiny pool so
    /// that equal diagonal entries are common.
    RandomDiagonalCollisions,
}

impl SamplingMode {
    pub const ALL: [SamplingMode; 3] =
        [SamplingMode::UnitOffDiagonal, SamplingMode::RandomRational, SamplingMode::RandomDiagonalCollisions];
}

/// `k/d` with `k ∈ [-99, 99] \ {0}` and `d ∈ [1, 9]`.
pub fn random_rational<R: Rng>(rng: &mut R) -> BigRational {
    let mut k = rng.gen_range(-99i64..=98);
    if k >= 0 {
        k += 1;
    }
    rat(k, rng.gen_range(1..=9))
}

pub fn sample_s<R: Rng>(g: &Graph, mode: SamplingMode, rng: &mut R) -> RatMatrix {
    let n = g.order();
    let mut a = RatMatrix::zeros(n, n);
    let pool_size = (n / 2).max(1) as i64;
    for i in 0..n {
        a[(i, i)] = match mode {
            SamplingMode::UnitOffDiagonal => int(0),
            SamplingMode::RandomRational => random_rational(rng),
            SamplingMode::RandomDiagonalCollisions => int(rng.gen_range(0..pool_size)),
        };
    }
    for p in g.edges() {
        let v = match mode {
            SamplingMode::UnitOffDiagonal => int(1),
            _ => random_rational(rng),
        };
        a[(p.0 - 1, p.1 - 1)] = v.clone();
        a[(p.1 - 1, p.0 - 1)] = v;
    }
    a
}

/// Random member of `S(G)` with floating entries in `±[0.5, 1.5]` and
/// diagonal in `[-1, 1]`.
pub fn sample_s_f64<R: Rng>(g: &Graph, rng: &mut R) -> DenseMatrix<f64> {
    let n = g.order();
    let mut a = DenseMatrix::zeros(n, n);
    for i in 0..n {
        a[(i, i)] = rng.gen_range(-1.0..1.0);
    }
    for p in g.edges() {
        let mag: f64 = rng.gen_range(0.5..1.5);
        let v = if rng.gen_bool(0.5) { mag } else { -mag };
        a[(p.0 - 1, p.1 - 1)] = v;
        a[(p.1 - 1, p.0 - 1)] = v;
    }
    a
}

/// Largest absolute entry among the positions of `pairs`.
pub fn max_abs_on(a: &RatMatrix, pairs: &[Pair]) -> BigRational {
    pairs.iter().map(|p| a[(p.0 - 1, p.1 - 1)].abs()).max().unwrap_or_else(BigRational::zero)
}
