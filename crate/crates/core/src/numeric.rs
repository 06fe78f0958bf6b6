//! Floating point utilities: a cyclic Jacobi eigensolver for symmetric
//! matrices, multiplicity clustering, numeric rank and kernels, random
//! orthogonal matrices, and Lanczos reduction to Jacobi form.

use std::sync::OnceLock;

use rand::Rng;
use rand_distr::StandardNormal;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::matrix::{to_f64, DenseMatrix, RatMatrix};

pub type Mat = DenseMatrix<f64>;

pub const DEFAULT_CLUSTER_TOL: f64 = 1e-8;
const MAX_SWEEPS: usize = 100;

/// Eigenvalues ascending with matching orthonormal eigenvector columns.
#[derive(Clone, Debug)]
pub struct Eigen {
    pub values: Vec<f64>,
    pub vectors: Mat,
}

impl Eigen {
    /// Columns of `vectors` whose eigenvalue lies within `tol` of `lambda`.
    pub fn eigenspace(&self, lambda: f64, tol: f64) -> Mat {
        let idx: Vec<usize> = (0..self.values.len()).filter(|&k| (self.values[k] - lambda).abs() <= tol).collect();
        self.vectors.select_cols(&idx)
    }
}

/// Symmetric matrix with a lazily computed eigensystem.
#[derive(Clone, Debug)]
pub struct SymMatrix {
    m: Mat,
    eig: OnceLock<Eigen>,
}

impl SymMatrix {
    /// Accepts `m` if it is symmetric up to rounding and stores its exact
    /// symmetrization.
    pub fn new(mut m: Mat) -> Result<Self> {
        if !m.is_square() {
            return Err(Error::DimensionMismatch(format!("{}x{} is not square", m.rows(), m.cols())));
        }
        let scale = m.max_abs().max(1.0);
        for i in 0..m.rows() {
            for j in 0..i {
                if (m[(i, j)] - m[(j, i)]).abs() > 1e-12 * scale {
                    return Err(Error::InvalidParameter(format!("matrix is not symmetric at ({}, {})", i + 1, j + 1)));
                }
            }
        }
        m.symmetrize();
        Ok(SymMatrix { m, eig: OnceLock::new() })
    }

    pub fn from_rat(m: &RatMatrix) -> Result<Self> {
        Self::new(to_f64(m))
    }

    pub fn order(&self) -> usize {
        self.m.rows()
    }

    pub fn matrix(&self) -> &Mat {
        &self.m
    }

    pub fn into_matrix(self) -> Mat {
        self.m
    }

    pub fn eigen(&self) -> &Eigen {
        self.eig.get_or_init(|| sym_eigen(&self.m).expect("Jacobi iteration on a symmetric matrix"))
    }

    pub fn spectrum(&self) -> &[f64] {
        &self.eigen().values
    }

    pub fn multiplicities(&self, tol: f64) -> MultiplicityList {
        multiplicity_list(self.spectrum(), tol)
    }

    pub fn shifted(&self, s: f64) -> SymMatrix {
        SymMatrix { m: self.m.shifted(&s), eig: OnceLock::new() }
    }
}

/// Cyclic Jacobi rotations until the off-diagonal mass is negligible.
pub fn sym_eigen(a: &Mat) -> Result<Eigen> {
    let n = a.rows();
    if !a.is_square() {
        return Err(Error::DimensionMismatch("eigenvalues of a non-square matrix".into()));
    }
    let mut m = a.clone();
    m.symmetrize();
    let mut v = Mat::identity(n);
    let scale = m.frobenius();
    let mut converged = n < 2;
    for _ in 0..MAX_SWEEPS {
        let off: f64 = (0..n).flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j))).map(|(i, j)| m[(i, j)].powi(2)).sum();
        if off.sqrt() <= f64::EPSILON * scale * 1e-2 || off == 0.0 {
            converged = true;
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                let apq = m[(p, q)];
                if apq == 0.0 {
                    continue;
                }
                let (app, aqq) = (m[(p, p)], m[(q, q)]);
                if apq.abs() < f64::EPSILON * 1e-3 * (app.abs() + aqq.abs()) {
                    m[(p, q)] = 0.0;
                    m[(q, p)] = 0.0;
                    continue;
                }
                let theta = (aqq - app) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..n {
                    let (mkp, mkq) = (m[(k, p)], m[(k, q)]);
                    m[(k, p)] = c * mkp - s * mkq;
                    m[(k, q)] = s * mkp + c * mkq;
                }
                for k in 0..n {
                    let (mpk, mqk) = (m[(p, k)], m[(q, k)]);
                    m[(p, k)] = c * mpk - s * mqk;
                    m[(q, k)] = s * mpk + c * mqk;
                }
                m[(p, q)] = 0.0;
                m[(q, p)] = 0.0;
                for k in 0..n {
                    let (vkp, vkq) = (v[(k, p)], v[(k, q)]);
                    v[(k, p)] = c * vkp - s * vkq;
                    v[(k, q)] = s * vkp + c * vkq;
                }
            }
        }
    }
    if !converged {
        return Err(Error::NonConvergence(format!("Jacobi eigensolver after {MAX_SWEEPS} sweeps")));
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| m[(i, i)].total_cmp(&m[(j, j)]));
    let values = order.iter().map(|&i| m[(i, i)]).collect();
    let vectors = v.select_cols(&order);
    Ok(Eigen { values, vectors })
}

/// Distinct eigenvalues with multiplicities.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MultiplicityList {
    pub values: Vec<f64>,
    pub multiplicities: Vec<usize>,
    pub tol: f64,
    /// Some gap between consecutive values lies in `(tol, 10 tol]`.
    pub ambiguous: bool,
}

impl MultiplicityList {
    pub fn ordered(&self) -> &[usize] {
        &self.multiplicities
    }

    pub fn unordered(&self) -> Vec<usize> {
        let mut m = self.multiplicities.clone();
        m.sort_unstable_by(|a, b| b.cmp(a));
        m
    }

    pub fn total(&self) -> usize {
        self.multiplicities.iter().sum()
    }

    pub fn multiplicity_of(&self, lambda: f64, tol: f64) -> usize {
        self.values
            .iter()
            .zip(&self.multiplicities)
            .find(|(v, _)| (*v - lambda).abs() <= tol)
            .map_or(0, |(_, m)| *m)
    }
}

/// Clusters ascending values: consecutive values within `tol` merge and the
/// cluster value is their mean.
pub fn multiplicity_list(values: &[f64], tol: f64) -> MultiplicityList {
    let mut out = MultiplicityList { values: Vec::new(), multiplicities: Vec::new(), tol, ambiguous: false };
    let mut start = 0;
    for k in 1..=values.len() {
        let split = k == values.len() || values[k] - values[k - 1] > tol;
        if k < values.len() {
            let gap = values[k] - values[k - 1];
            if gap > tol && gap <= 10.0 * tol {
                out.ambiguous = true;
            }
        }
        if split {
            let chunk = &values[start..k];
            out.values.push(chunk.iter().sum::<f64>() / chunk.len() as f64);
            out.multiplicities.push(chunk.len());
            start = k;
        }
    }
    out
}

/// Rank by Gaussian elimination with complete pivoting; pivots at or below
/// `tol · ‖M‖∞` count as zero.
pub fn numeric_rank(m: &Mat, tol: f64) -> usize {
    let mut a = m.clone();
    let (rows, cols) = (a.rows(), a.cols());
    let threshold = tol * m.norm_inf();
    let mut rank = 0;
    let mut col_perm: Vec<usize> = (0..cols).collect();
    while rank < rows.min(cols) {
        let mut best = (0.0, rank, rank);
        for i in rank..rows {
            for j in rank..cols {
                let v = a[(i, col_perm[j])].abs();
                if v > best.0 {
                    best = (v, i, j);
                }
            }
        }
        if best.0 <= threshold || best.0 == 0.0 {
            break;
        }
        a.swap_rows(rank, best.1);
        col_perm.swap(rank, best.2);
        let pc = col_perm[rank];
        let piv = a[(rank, pc)];
        for i in rank + 1..rows {
            let f = a[(i, pc)] / piv;
            if f == 0.0 {
                continue;
            }
            for &j in &col_perm[rank..] {
                let v = a[(rank, j)];
                a[(i, j)] -= f * v;
            }
        }
        rank += 1;
    }
    rank
}

/// Thin singular value decomposition by one-sided Jacobi rotations.
#[derive(Clone, Debug)]
pub struct Svd {
    /// `m × n`; column `j` is `σ_j u_j`.
    pub us: Mat,
    pub sigma: Vec<f64>,
    /// `n × n` orthogonal.
    pub v: Mat,
}

pub fn svd(m: &Mat) -> Svd {
    let (rows, n) = (m.rows(), m.cols());
    let mut u = m.clone();
    let mut v = Mat::identity(n);
    for _ in 0..60 {
        let mut rotated = false;
        for p in 0..n {
            for q in p + 1..n {
                let (mut alpha, mut beta, mut gamma) = (0.0, 0.0, 0.0);
                for i in 0..rows {
                    alpha += u[(i, p)] * u[(i, p)];
                    beta += u[(i, q)] * u[(i, q)];
                    gamma += u[(i, p)] * u[(i, q)];
                }
                if gamma.abs() <= 1e-15 * (alpha * beta).sqrt() || gamma == 0.0 {
                    continue;
                }
                rotated = true;
                let zeta = (beta - alpha) / (2.0 * gamma);
                let t = zeta.signum() / (zeta.abs() + (1.0 + zeta * zeta).sqrt());
                let t = if zeta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = c * t;
                for i in 0..rows {
                    let (a, b) = (u[(i, p)], u[(i, q)]);
                    u[(i, p)] = c * a - s * b;
                    u[(i, q)] = s * a + c * b;
                }
                for i in 0..n {
                    let (a, b) = (v[(i, p)], v[(i, q)]);
                    v[(i, p)] = c * a - s * b;
                    v[(i, q)] = s * a + c * b;
                }
            }
        }
        if !rotated {
            break;
        }
    }
    let sigma = (0..n).map(|j| (0..rows).map(|i| u[(i, j)].powi(2)).sum::<f64>().sqrt()).collect();
    Svd { us: u, sigma, v }
}

impl Svd {
    fn cutoff(&self, tol: f64) -> f64 {
        tol * self.sigma.iter().cloned().fold(0.0, f64::max).max(f64::MIN_POSITIVE)
    }

    /// Orthonormal basis (columns) of the numerical kernel: right singular
    /// vectors with `σ ≤ tol · σ_max`.
    pub fn kernel(&self, tol: f64) -> Mat {
        let cut = self.cutoff(tol);
        let idx: Vec<usize> = (0..self.sigma.len()).filter(|&j| self.sigma[j] <= cut).collect();
        self.v.select_cols(&idx)
    }

    pub fn rank(&self, tol: f64) -> usize {
        let cut = self.cutoff(tol);
        self.sigma.iter().filter(|&&s| s > cut).count()
    }

    /// Minimum-norm least-squares solution of `Mx = b`.
    pub fn solve(&self, b: &[f64], tol: f64) -> Vec<f64> {
        let cut = self.cutoff(tol);
        let n = self.sigma.len();
        let mut x = vec![0.0; n];
        for j in 0..n {
            let s = self.sigma[j];
            if s <= cut {
                continue;
            }
            let coef: f64 = (0..self.us.rows()).map(|i| self.us[(i, j)] * b[i]).sum::<f64>() / (s * s);
            for (k, xk) in x.iter_mut().enumerate() {
                *xk += coef * self.v[(k, j)];
            }
        }
        x
    }
}

/// Orthonormal basis (columns) of the numerical kernel of `m`.
pub fn numeric_kernel(m: &Mat, tol: f64) -> Mat {
    svd(m).kernel(tol)
}

/// Orthonormal basis (rows) of the numerical left kernel of `m`.
pub fn numeric_left_kernel(m: &Mat, tol: f64) -> Mat {
    svd(&m.transpose()).kernel(tol).transpose()
}

pub fn pinv_solve(m: &Mat, b: &[f64], tol: f64) -> Vec<f64> {
    svd(m).solve(b, tol)
}

pub fn gaussian_matrix<R: Rng>(rows: usize, cols: usize, rng: &mut R) -> Mat {
    Mat::from_fn(rows, cols, |_, _| rng.sample(StandardNormal))
}

/// Orthonormalizes the columns of `a` (modified Gram-Schmidt, two passes).
/// Returns `None` if the columns are numerically dependent.
pub fn orthonormalize_columns(a: &Mat) -> Option<Mat> {
    let mut q = a.clone();
    for j in 0..q.cols() {
        for _ in 0..2 {
            for k in 0..j {
                let dot: f64 = (0..q.rows()).map(|i| q[(i, k)] * q[(i, j)]).sum();
                for i in 0..q.rows() {
                    let v = q[(i, k)];
                    q[(i, j)] -= dot * v;
                }
            }
        }
        let norm: f64 = (0..q.rows()).map(|i| q[(i, j)].powi(2)).sum::<f64>().sqrt();
        if norm < 1e-12 {
            return None;
        }
        for i in 0..q.rows() {
            q[(i, j)] /= norm;
        }
    }
    Some(q)
}

/// Haar-distributed orthogonal matrix from orthonormalized Gaussian samples.
pub fn random_orthogonal<R: Rng>(n: usize, rng: &mut R) -> Mat {
    loop {
        if let Some(q) = orthonormalize_columns(&gaussian_matrix(n, n, rng)) {
            return q;
        }
    }
}

/// Symmetric tridiagonal matrix with spectrum `values` obtained by Lanczos on
/// `diag(values)` started from the unit vector along `weights`. With distinct
/// values and nowhere-zero weights every off-diagonal entry is nonzero.
pub fn lanczos_jacobi(values: &[f64], weights: &[f64]) -> Result<Mat> {
    let n = values.len();
    if weights.len() != n {
        return Err(Error::DimensionMismatch("weights and values differ in length".into()));
    }
    let norm: f64 = weights.iter().map(|w| w * w).sum::<f64>().sqrt();
    if norm == 0.0 {
        return Err(Error::InvalidParameter("zero Lanczos seed".into()));
    }
    let mut qs: Vec<Vec<f64>> = vec![weights.iter().map(|w| w / norm).collect()];
    let mut t = Mat::zeros(n, n);
    for k in 0..n {
        let q = &qs[k];
        let mut w: Vec<f64> = q.iter().zip(values).map(|(x, l)| x * l).collect();
        let alpha: f64 = w.iter().zip(q).map(|(a, b)| a * b).sum();
        t[(k, k)] = alpha;
        if k + 1 == n {
            break;
        }
        for _ in 0..2 {
            for p in &qs {
                let dot: f64 = w.iter().zip(p).map(|(a, b)| a * b).sum();
                for (wi, pi) in w.iter_mut().zip(p) {
                    *wi -= dot * pi;
                }
            }
        }
        let beta: f64 = w.iter().map(|x| x * x).sum::<f64>().sqrt();
        if beta < 1e-12 {
            return Err(Error::Infeasible("Lanczos breakdown: repeated values or zero weight".into()));
        }
        t[(k, k + 1)] = beta;
        t[(k + 1, k)] = beta;
        qs.push(w.into_iter().map(|x| x / beta).collect());
    }
    Ok(t)
}

/// `Q diag(values) Qᵀ`.
pub fn from_eigen(values: &[f64], q: &Mat) -> Mat {
    let n = values.len();
    let mut out = Mat::from_fn(n, n, |i, j| (0..n).map(|k| q[(i, k)] * values[k] * q[(j, k)]).sum());
    out.symmetrize();
    out
}

/// `max |(QᵀQ - I)_{ij}|`.
pub fn orthogonality_defect(q: &Mat) -> f64 {
    let qtq = q.transpose().mul(q).expect("square");
    qtq.sub(&Mat::identity(q.cols())).expect("square").max_abs()
}

/// `‖AQ - QΛ‖∞`.
pub fn eigen_residual(a: &Mat, e: &Eigen) -> f64 {
    let aq = a.mul(&e.vectors).expect("conformal");
    let ql = Mat::from_fn(a.rows(), e.values.len(), |i, j| e.vectors[(i, j)] * e.values[j]);
    aq.sub(&ql).expect("conformal").norm_inf()
}

/// Determinant by Gaussian elimination with partial pivoting.
pub fn det(m: &Mat) -> f64 {
    let n = m.rows();
    let mut a = m.clone();
    let mut d = 1.0;
    for k in 0..n {
        let p = (k..n).max_by(|&i, &j| a[(i, k)].abs().total_cmp(&a[(j, k)].abs())).unwrap_or(k);
        if a[(p, k)] == 0.0 {
            return 0.0;
        }
        if p != k {
            a.swap_rows(p, k);
            d = -d;
        }
        d *= a[(k, k)];
        for i in k + 1..n {
            let f = a[(i, k)] / a[(k, k)];
            for j in k..n {
                let v = a[(k, j)];
                a[(i, j)] -= f * v;
            }
        }
    }
    d
}

/// Inverse by Gauss-Jordan elimination with partial pivoting.
pub fn inverse(m: &Mat) -> Result<Mat> {
    let n = m.rows();
    if !m.is_square() {
        return Err(Error::DimensionMismatch("inverse of a non-square matrix".into()));
    }
    let mut a = m.clone();
    let mut inv = Mat::identity(n);
    let scale = m.norm_inf().max(f64::MIN_POSITIVE);
    for k in 0..n {
        let p = (k..n).max_by(|&i, &j| a[(i, k)].abs().total_cmp(&a[(j, k)].abs())).unwrap_or(k);
        if a[(p, k)].abs() <= 1e-14 * scale {
            return Err(Error::RankDeficient);
        }
        a.swap_rows(p, k);
        inv.swap_rows(p, k);
        let piv = a[(k, k)];
        for j in 0..n {
            a[(k, j)] /= piv;
            inv[(k, j)] /= piv;
        }
        for i in 0..n {
            if i == k {
                continue;
            }
            let f = a[(i, k)];
            if f == 0.0 {
                continue;
            }
            for j in 0..n {
                let (ak, ik) = (a[(k, j)], inv[(k, j)]);
                a[(i, j)] -= f * ak;
                inv[(i, j)] -= f * ik;
            }
        }
    }
    Ok(inv)
}

/// Cayley transform `(I - S)⁻¹(I + S)`, orthogonal when `S` is skew.
pub fn cayley(s: &Mat) -> Result<Mat> {
    let n = s.rows();
    let id = Mat::identity(n);
    inverse(&id.sub(s)?)?.mul(&id.add(s)?)
}

/// Index ranges of the clusters of an ascending spectrum, with the cluster
/// means.
pub fn clusters(values: &[f64], tol: f64) -> (MultiplicityList, Vec<std::ops::Range<usize>>) {
    let list = multiplicity_list(values, tol);
    let mut start = 0;
    let ranges = list
        .multiplicities
        .iter()
        .map(|&m| {
            start += m;
            start - m..start
        })
        .collect();
    (list, ranges)
}

/// Expands `(value, multiplicity)` pairs into a sorted spectrum.
pub fn expand_spectrum(pairs: &[(f64, usize)]) -> Vec<f64> {
    let mut v: Vec<f64> = pairs.iter().flat_map(|&(x, m)| std::iter::repeat_n(x, m)).collect();
    v.sort_by(f64::total_cmp);
    v
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn random_symmetric(n: usize, rng: &mut ChaCha8Rng) -> Mat {
        let mut g = gaussian_matrix(n, n, rng);
        g.symmetrize();
        g
    }

    #[test]
    fn diagonal_spectrum() {
        let a = Mat::from_rows(vec![vec![3.0, 0.0, 0.0], vec![0.0, 1.0, 0.0], vec![0.0, 0.0, 2.0]]).unwrap();
        let e = sym_eigen(&a).unwrap();
        assert_eq!(e.values, vec![1.0, 2.0, 3.0]);
        assert!(sym_eigen(&Mat::zeros(0, 0)).unwrap().values.is_empty());
    }

    #[test]
    fn cycle_six_spectrum() {
        let mut a = Mat::zeros(6, 6);
        for i in 0..5 {
            a[(i, i + 1)] = 1.0;
            a[(i + 1, i)] = 1.0;
        }
        a[(0, 5)] = -1.0;
        a[(5, 0)] = -1.0;
        let s = SymMatrix::new(a).unwrap();
        let r3 = 3f64.sqrt();
        let expect = [-r3, -r3, 0.0, 0.0, r3, r3];
        for (x, y) in s.spectrum().iter().zip(expect) {
            assert!((x - y).abs() < 1e-9);
        }
        assert_eq!(s.multiplicities(1e-8).ordered(), &[2, 2, 2]);
    }

    #[test]
    fn eigen_invariants_on_random_matrices() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for k in 0..200 {
            let n = 1 + k % 20;
            let a = random_symmetric(n, &mut rng);
            let e = sym_eigen(&a).unwrap();
            let norm = a.norm_inf().max(1.0);
            assert!(orthogonality_defect(&e.vectors) <= 1e-10);
            assert!(eigen_residual(&a, &e) <= 1e-9 * norm);
            let trace: f64 = (0..n).map(|i| a[(i, i)]).sum();
            assert!((e.values.iter().sum::<f64>() - trace).abs() <= 1e-9 * n as f64 * norm);
            let fro2 = a.frobenius().powi(2);
            assert!((e.values.iter().map(|x| x * x).sum::<f64>() - fro2).abs() <= 1e-9 * n as f64 * norm * norm);
            assert!(e.values.windows(2).all(|w| w[0] <= w[1]));
        }
    }

    #[test]
    fn clustering() {
        let m = multiplicity_list(&[0.0, 0.0, 0.0, 4.0, 4.0], 1e-8);
        assert_eq!(m.values, vec![0.0, 4.0]);
        assert_eq!(m.ordered(), &[3, 2]);
        let m = multiplicity_list(&[1.0, 2.0, 3.0, 4.0], 1e-8);
        assert_eq!(m.ordered(), &[1, 1, 1, 1]);
        let m = multiplicity_list(&[1.0, 1.0 + 1e-12, 2.0], 1e-9);
        assert_eq!(m.ordered(), &[2, 1]);
        assert!(!m.ambiguous);
        let m = multiplicity_list(&[1.0, 1.0 + 5e-9, 2.0], 1e-9);
        assert!(m.ambiguous);
        assert_eq!(m.unordered(), vec![1, 1, 1]);
        let diag = Mat::from_fn(5, 5, |i, j| if i == j { [2.0, 7.0, 2.0, 7.0, 2.0][i] } else { 0.0 });
        assert_eq!(SymMatrix::new(diag).unwrap().multiplicities(1e-8).ordered(), &[3, 2]);
    }

    #[test]
    fn ranks_and_kernels() {
        assert_eq!(numeric_rank(&Mat::identity(3), 1e-10), 3);
        let u = [1.0, 2.0, -1.0];
        let v = [3.0, 0.5, 1.0, 2.0];
        let outer = Mat::from_fn(3, 4, |i, j| u[i] * v[j]);
        assert_eq!(numeric_rank(&outer, 1e-10), 1);
        let k = numeric_kernel(&outer, 1e-10);
        assert_eq!(k.cols(), 3);
        assert!(outer.mul(&k).unwrap().max_abs() < 1e-12);
        let lk = numeric_left_kernel(&outer, 1e-10);
        assert_eq!(lk.rows(), 2);
        assert!(lk.mul(&outer).unwrap().max_abs() < 1e-12);

        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let m = gaussian_matrix(4, 6, &mut rng);
        let b = [1.0, -2.0, 0.5, 3.0];
        let x = pinv_solve(&m, &b, 1e-12);
        let r = m.mul_vec(&x).unwrap();
        for (ri, bi) in r.iter().zip(b) {
            assert!((ri - bi).abs() < 1e-10);
        }
    }

    #[test]
    fn rank_monotone_in_tolerance() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let mut m = gaussian_matrix(5, 5, &mut rng);
        let noise = gaussian_matrix(1, 5, &mut rng);
        for j in 0..5 {
            m[(4, j)] = m[(0, j)] - m[(1, j)] + 1e-7 * noise[(0, j)];
        }
        let r: Vec<usize> = [1e-14, 1e-10, 1e-6, 1e-2, 10.0].iter().map(|&t| numeric_rank(&m, t)).collect();
        assert!(r.windows(2).all(|w| w[0] >= w[1]));
        assert_eq!(r[0], 5);
        assert_eq!(r[2], 4);
    }

    #[test]
    fn orthogonal_and_lanczos() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for n in 1..10 {
            assert!(orthogonality_defect(&random_orthogonal(n, &mut rng)) <= 1e-12);
        }
        let t = lanczos_jacobi(&[1.0, 2.0, 3.0], &[1.0, 1.0, 1.0]).unwrap();
        assert_eq!(t[(0, 2)], 0.0);
        assert!(t[(0, 1)].abs() > 1e-6 && t[(1, 2)].abs() > 1e-6);
        let e = sym_eigen(&t).unwrap();
        for (x, y) in e.values.iter().zip([1.0, 2.0, 3.0]) {
            assert!((x - y).abs() < 1e-10);
        }
        assert!(lanczos_jacobi(&[1.0, 1.0], &[1.0, 1.0]).is_err());
    }
}
