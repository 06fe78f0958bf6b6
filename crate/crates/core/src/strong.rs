//! Verification matrices and the strong spectral / strong Arnold properties,
//! absolute and relative to a spanning supergraph.

use num::{BigRational, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::{self, rank};
use crate::graph::{Graph, Pair};
use crate::matrix::{DenseMatrix, RatMatrix, Scalar};
use crate::numeric::{svd, Mat};
use crate::patterns::{sym_unit, vec_square, vec_wedge};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Kind {
    Ssp,
    Sap,
}

impl std::str::FromStr for Kind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "ssp" => Ok(Kind::Ssp),
            "sap" => Ok(Kind::Sap),
            other => Err(Error::Parse(format!("unknown property `{other}`"))),
        }
    }
}

impl std::fmt::Display for Kind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Kind::Ssp => "SSP",
            Kind::Sap => "SAP",
        })
    }
}

/// Column count of Ψ for an `n×n` matrix.
pub fn psi_width(n: usize, kind: Kind) -> usize {
    match kind {
        Kind::Ssp => n * n.saturating_sub(1) / 2,
        Kind::Sap => n * n,
    }
}

/// One row of Ψ: `vec_∧([A, X^e])` or `vec_□(A X^e)`, computed entrywise.
pub fn psi_row<T: Scalar>(a: &DenseMatrix<T>, e: Pair, kind: Kind) -> Vec<T> {
    let n = a.rows();
    let (p, q) = (e.0 - 1, e.1 - 1);
    match kind {
        Kind::Ssp => {
            let mut row = Vec::with_capacity(psi_width(n, kind));
            for i in 0..n {
                for j in i + 1..n {
                    // ([A, X])_{ij} = A_{ip}[j=q] + A_{iq}[j=p] - [i=p]A_{qj} - [i=q]A_{pj}
                    let mut v = T::zero();
                    if j == q {
                        v = v + a[(i, p)].clone();
                    }
                    if j == p {
                        v = v + a[(i, q)].clone();
                    }
                    if i == p {
                        v = v - a[(q, j)].clone();
                    }
                    if i == q {
                        v = v - a[(p, j)].clone();
                    }
                    row.push(v);
                }
            }
            row
        }
        Kind::Sap => {
            let mut row = vec![T::zero(); n * n];
            for i in 0..n {
                row[i * n + q] = a[(i, p)].clone();
                row[i * n + p] = a[(i, q)].clone();
            }
            row
        }
    }
}

/// Ψ with rows indexed by `rows` in the given order.
pub fn psi_rows<T: Scalar>(a: &DenseMatrix<T>, rows: &[Pair], kind: Kind) -> DenseMatrix<T> {
    let n = a.rows();
    let width = psi_width(n, kind);
    let mut data = Vec::with_capacity(rows.len() * width);
    for &e in rows {
        data.extend(psi_row(a, e, kind));
    }
    DenseMatrix::from_vec(rows.len(), width, data).expect("row width is psi_width")
}

fn check_square<T: Scalar>(a: &DenseMatrix<T>, g: &Graph) -> Result<()> {
    if !a.is_square() || a.rows() != g.order() {
        return Err(Error::DimensionMismatch(format!(
            "{}x{} matrix for a graph on {} vertices",
            a.rows(),
            a.cols(),
            g.order()
        )));
    }
    Ok(())
}

/// Ψ over any scalar type, rows in lexicographic nonedge order.
pub fn psi<T: Scalar>(a: &DenseMatrix<T>, g: &Graph, kind: Kind) -> Result<DenseMatrix<T>> {
    check_square(a, g)?;
    Ok(psi_rows(a, g.nonedges(), kind))
}

#[derive(Clone, Debug, PartialEq)]
pub struct VerificationMatrix {
    pub kind: Kind,
    pub rows: Vec<Pair>,
    pub matrix: RatMatrix,
}

impl VerificationMatrix {
    pub fn new(a: &RatMatrix, g: &Graph, kind: Kind) -> Result<Self> {
        Ok(VerificationMatrix { kind, rows: g.nonedges().to_vec(), matrix: psi(a, g, kind)? })
    }

    /// Position of the row for nonedge `e`.
    pub fn row_of(&self, e: Pair) -> Option<usize> {
        self.rows.binary_search(&e).ok()
    }

    /// Row positions of `pairs`; errors if some pair is not a row.
    pub fn rows_of(&self, pairs: &[Pair]) -> Result<Vec<usize>> {
        pairs
            .iter()
            .map(|&e| self.row_of(e).ok_or(Error::BetaIntersectsEdges(e.0, e.1)))
            .collect()
    }
}

/// `X = Σ y_e X^e` over the given nonedges.
pub fn reassemble<T: Scalar>(n: usize, rows: &[Pair], y: &[T]) -> DenseMatrix<T> {
    let mut x = DenseMatrix::zeros(n, n);
    for (&e, v) in rows.iter().zip(y) {
        x = x.add(&sym_unit(n, e, v.clone())).expect("same order");
    }
    x
}

/// `[A, X]` for SSP, `A X` for SAP.
pub fn action<T: Scalar>(a: &DenseMatrix<T>, x: &DenseMatrix<T>, kind: Kind) -> Result<DenseMatrix<T>> {
    match kind {
        Kind::Ssp => a.commutator(x),
        Kind::Sap => a.mul(x),
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct StrongReport {
    pub kind: Kind,
    pub answer: bool,
    pub rank: usize,
    pub nullity: usize,
    /// Nonzero `X ∈ S^cl_0(Ḡ)` with `[A,X] = O` (or `AX = O`), one per
    /// left-kernel basis vector of Ψ.
    #[serde(skip)]
    pub certificate: Vec<RatMatrix>,
}

/// Decides the strong property from the rows of Ψ. When false, every
/// left-kernel vector is reassembled into `X` and checked against the
/// defining equation.
pub fn has_strong_property(a: &RatMatrix, g: &Graph, kind: Kind) -> Result<StrongReport> {
    let vm = VerificationMatrix::new(a, g, kind)?;
    let r = rank(&vm.matrix);
    let m = vm.rows.len();
    let mut certificate = Vec::new();
    if r < m {
        let left = exact::left_kernel_basis(&vm.matrix);
        for k in 0..left.rows() {
            let x = reassemble(g.order(), &vm.rows, left.row(k));
            let image = action(a, &x, kind)?;
            if x.is_zero_matrix() || !image.is_zero_matrix() {
                return Err(Error::CriteriaDisagreement(format!(
                    "left-kernel vector {k} of Ψ does not reassemble into a valid X"
                )));
            }
            certificate.push(x);
        }
    }
    Ok(StrongReport { kind, answer: r == m, rank: r, nullity: m - r, certificate })
}

fn check_spanning(g: &Graph, h: &Graph) -> Result<()> {
    if g.order() != h.order() || !g.is_spanning_subgraph_of(h) {
        return Err(Error::NotSpanningSubgraph);
    }
    Ok(())
}

/// Strong property with respect to `H`: `Ψ[E(H̄), :]` has full row rank.
pub fn has_strong_property_wrt(a: &RatMatrix, g: &Graph, h: &Graph, kind: Kind) -> Result<bool> {
    check_square(a, g)?;
    check_spanning(g, h)?;
    Ok(exact::full_row_rank(&psi_rows(a, h.nonedges(), kind)))
}

/// Independent oracle for [`has_strong_property_wrt`]: builds the map
/// `X ↦ [A,X]` (or `AX`) on `S^cl_0(H̄)` from full matrix products and tests
/// that its kernel is trivial.
pub fn wrt_by_kernel(a: &RatMatrix, h: &Graph, kind: Kind) -> Result<bool> {
    check_square(a, h)?;
    let n = h.order();
    let basis = h.nonedges();
    if basis.is_empty() {
        return Ok(true);
    }
    let mut cols = Vec::with_capacity(basis.len());
    for &e in basis {
        let x = sym_unit(n, e, BigRational::from_integer(1.into()));
        cols.push(vec_square(&action(a, &x, kind)?));
    }
    let map = RatMatrix::from_rows(cols)?.transpose();
    Ok(exact::kernel_basis(&map).cols() == 0)
}

/// Numerical rank of Ψ[E(H̄), :] compared against `|E(H̄)|`.
pub fn has_strong_property_wrt_f64(a: &Mat, g: &Graph, h: &Graph, kind: Kind, tol: f64) -> Result<bool> {
    check_square(a, g)?;
    check_spanning(g, h)?;
    let m = psi_rows(a, h.nonedges(), kind);
    if m.rows() == 0 {
        return Ok(true);
    }
    Ok(svd(&m.transpose()).rank(tol) == m.rows())
}

pub fn has_strong_property_f64(a: &Mat, g: &Graph, kind: Kind, tol: f64) -> Result<bool> {
    has_strong_property_wrt_f64(a, g, g, kind, tol)
}

/// `vec_∧` of a skew matrix or `vec_□` of any matrix, matching Ψ's columns.
pub fn flatten<T: Scalar>(m: &DenseMatrix<T>, kind: Kind) -> Vec<T> {
    match kind {
        Kind::Ssp => vec_wedge(m),
        Kind::Sap => vec_square(m),
    }
}

/// Whether the rows of Ψ for `pairs` are all zero, i.e. `[A, X^e] = O` for
/// each.
pub fn zero_rows(a: &RatMatrix, pairs: &[Pair], kind: Kind) -> Vec<Pair> {
    pairs.iter().copied().filter(|&e| psi_row(a, e, kind).iter().all(Zero::is_zero)).collect()
}
