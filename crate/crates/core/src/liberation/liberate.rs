//! Spectrum-preserving perturbation of `A ∈ S(G)` into `S(G + β)`.
//!
//! For the SSP the iterates stay on the orbit `U A Uᵀ` of orthogonal
//! conjugations, parametrized by Cayley transforms of skew matrices, so the
//! spectrum is kept exactly and only the off-pattern entries have to be
//! driven to zero. A predictor step moves along a tangent direction that
//! keeps the entries of `α = E(Ḡ) \ β` fixed to first order while making
//! every entry of `β` nonzero; Newton's method then removes the second-order
//! drift on `α`. For the SAP the orbit is the congruence class `Uᵀ A U`,
//! which keeps the nullity.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{EdgeSet, Graph, Pair};
use crate::matrix::{charpoly, to_f64, RatMatrix};
use crate::numeric::{cayley, svd, Mat, SymMatrix};
use crate::strong::{has_strong_property_f64, Kind};

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LiberateOptions {
    /// Relative tolerance on characteristic polynomial coefficients.
    pub tol: f64,
    /// Predictor directions tried per step size.
    pub max_iter: usize,
    pub steps: Vec<f64>,
    /// Smallest admissible magnitude of a pattern entry.
    pub min_entry: f64,
    pub seed: u64,
}

impl Default for LiberateOptions {
    fn default() -> Self {
        LiberateOptions { tol: 1e-10, max_iter: 8, steps: vec![1e-2, 1e-3, 1e-4], min_entry: 1e-6, seed: 0 }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Liberated {
    #[serde(skip)]
    pub matrix: Mat,
    #[serde(skip)]
    pub graph: Graph,
    pub kind: Kind,
    /// Largest coefficient change of the characteristic polynomial relative
    /// to the largest coefficient (SSP), or the change in nullity (SAP).
    pub invariant_error: f64,
    pub step: f64,
    pub attempts: usize,
    pub newton_steps: usize,
    pub min_pattern_entry: f64,
    /// The output has the strong property (numerically, relative 1e-8).
    pub strong: bool,
}

const NULL_TOL: f64 = 1e-8;
const NEWTON_STEPS: usize = 40;

fn positions(pairs: &[Pair]) -> Vec<(usize, usize)> {
    pairs.iter().map(|p| (p.0 - 1, p.1 - 1)).collect()
}

fn param_count(n: usize, kind: Kind) -> usize {
    match kind {
        Kind::Ssp => n * (n - 1) / 2,
        Kind::Sap => n * n,
    }
}

/// Generator for parameter vector `y`: skew `K` with upper entries `y`, or
/// `Y` with row-major entries `y`.
fn generator(n: usize, y: &[f64], kind: Kind) -> Mat {
    let mut m = Mat::zeros(n, n);
    match kind {
        Kind::Ssp => {
            let mut k = 0;
            for i in 0..n {
                for j in i + 1..n {
                    m[(i, j)] = y[k];
                    m[(j, i)] = -y[k];
                    k += 1;
                }
            }
        }
        Kind::Sap => {
            for (k, v) in y.iter().enumerate() {
                m[(k / n, k % n)] = *v;
            }
        }
    }
    m
}

/// `A` moved along the orbit by `h · y`.
fn step(a: &Mat, y: &[f64], h: f64, kind: Kind) -> Result<Mat> {
    let n = a.rows();
    let g = generator(n, y, kind).scale(&h);
    let mut out = match kind {
        Kind::Ssp => {
            let u = cayley(&g.scale(&0.5))?;
            u.mul(a)?.mul(&u.transpose())?
        }
        Kind::Sap => {
            let u = Mat::identity(n).add(&g)?;
            u.transpose().mul(a)?.mul(&u)?
        }
    };
    out.symmetrize();
    Ok(out)
}

/// Derivative of the entries at `pos` with respect to the orbit parameters:
/// `[K, A]` for the SSP and `YᵀA + AY` for the SAP.
fn tangent(a: &Mat, pos: &[(usize, usize)], kind: Kind) -> Mat {
    let n = a.rows();
    let cols = param_count(n, kind);
    let mut t = Mat::zeros(pos.len(), cols);
    match kind {
        Kind::Ssp => {
            // ([K^{pq}, A])_{ij} = δ_{ip}A_{qj} - δ_{iq}A_{pj} - A_{ip}δ_{qj} + A_{iq}δ_{pj}
            let mut c = 0;
            for p in 0..n {
                for q in p + 1..n {
                    for (r, &(i, j)) in pos.iter().enumerate() {
                        let mut v = 0.0;
                        if i == p {
                            v += a[(q, j)];
                        }
                        if i == q {
                            v -= a[(p, j)];
                        }
                        if j == q {
                            v -= a[(i, p)];
                        }
                        if j == p {
                            v += a[(i, q)];
                        }
                        t[(r, c)] = v;
                    }
                    c += 1;
                }
            }
        }
        Kind::Sap => {
            // (YᵀA + AY)_{ij} for Y = E^{pq}: δ_{iq}A_{pj} + A_{ip}δ_{qj}
            for p in 0..n {
                for q in 0..n {
                    let c = p * n + q;
                    for (r, &(i, j)) in pos.iter().enumerate() {
                        let mut v = 0.0;
                        if i == q {
                            v += a[(p, j)];
                        }
                        if j == q {
                            v += a[(i, p)];
                        }
                        t[(r, c)] = v;
                    }
                }
            }
        }
    }
    t
}

fn entries(a: &Mat, pos: &[(usize, usize)]) -> Vec<f64> {
    pos.iter().map(|&(i, j)| a[(i, j)]).collect()
}

fn max_abs(v: &[f64]) -> f64 {
    v.iter().fold(0.0, |m, x| m.max(x.abs()))
}

/// Newton iteration on the orbit driving the entries at `alpha` to zero.
fn correct(mut a: Mat, alpha: &[(usize, usize)], kind: Kind, scale: f64) -> Result<(Mat, usize)> {
    for it in 0..NEWTON_STEPS {
        let r = entries(&a, alpha);
        if max_abs(&r) <= 1e-14 * scale {
            return Ok((a, it));
        }
        let rhs: Vec<f64> = r.iter().map(|x| -x).collect();
        let y = svd(&tangent(&a, alpha, kind)).solve(&rhs, 1e-12);
        a = step(&a, &y, 1.0, kind)?;
    }
    Err(Error::NonConvergence("Newton correction on the off-pattern entries".into()))
}

fn nullity(a: &Mat) -> Result<usize> {
    let s = SymMatrix::new(a.clone())?;
    let scale = a.max_abs().max(1.0);
    Ok(s.spectrum().iter().filter(|v| v.abs() <= NULL_TOL * scale).count())
}

fn charpoly_gap(a: &Mat, b: &Mat) -> Result<f64> {
    let (pa, pb) = (charpoly(a)?, charpoly(b)?);
    let scale = pa.iter().fold(1.0f64, |m, x| m.max(x.abs()));
    Ok(pa.iter().zip(&pb).fold(0.0f64, |m, (x, y)| m.max((x - y).abs())) / scale)
}

/// Moves `A ∈ S(G)` to a matrix in `S(G + β)` with the same spectrum (SSP)
/// or the same nullity (SAP). Requires `β` to be a liberation set of `A`,
/// which is re-checked numerically.
pub fn liberate(a: &Mat, g: &Graph, beta: &EdgeSet, kind: Kind, opts: &LiberateOptions) -> Result<Liberated> {
    let n = g.order();
    if a.rows() != n || !a.is_square() {
        return Err(Error::DimensionMismatch(format!("{}x{} matrix for {n} vertices", a.rows(), a.cols())));
    }
    if beta.is_empty() {
        return Err(Error::EmptyBeta);
    }
    if let Some(p) = beta.pairs().iter().find(|p| g.has_edge(p.0, p.1)) {
        return Err(Error::BetaIntersectsEdges(p.0, p.1));
    }
    let target = g.add_edges(beta)?;
    let alpha = positions(target.nonedges());
    let beta_pos = positions(beta.pairs());
    let edges = positions(g.edges());
    let scale = a.max_abs().max(1.0);

    let t_alpha = tangent(a, &alpha, kind);
    let dec = svd(&t_alpha.transpose());
    if !alpha.is_empty() && dec.rank(1e-10) < alpha.len() {
        return Err(Error::Infeasible("the off-pattern rows of Ψ are dependent".into()));
    }
    let kernel = if alpha.is_empty() {
        Mat::identity(param_count(n, kind))
    } else {
        svd(&t_alpha).kernel(1e-10)
    };
    let image = tangent(a, &beta_pos, kind).mul(&kernel)?;
    let row_norms: Vec<f64> =
        (0..image.rows()).map(|i| image.row(i).iter().map(|v| v * v).sum::<f64>().sqrt()).collect();
    if row_norms.iter().any(|&r| r <= 1e-10 * scale) {
        return Err(Error::Infeasible(format!("β = {beta} is not a liberation set of this matrix")));
    }

    let original_nullity = if kind == Kind::Sap { nullity(a)? } else { 0 };
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let mut attempts = 0;
    let mut last = String::from("no attempt");
    for &h in &opts.steps {
        for _ in 0..opts.max_iter {
            attempts += 1;
            let c: Vec<f64> = (0..kernel.cols()).map(|_| rng.sample(StandardNormal)).collect();
            let mut y = kernel.mul_vec(&c)?;
            let x = image.mul_vec(&c)?;
            let c_norm = c.iter().map(|v| v * v).sum::<f64>().sqrt();
            // each entry against its own row, so small but certified directions survive
            if x.iter().zip(&row_norms).any(|(v, r)| v.abs() < 1e-3 * r * c_norm) {
                last = "predictor direction nearly vanishes on β".into();
                continue;
            }
            let norm = y.iter().map(|v| v * v).sum::<f64>().sqrt();
            y.iter_mut().for_each(|v| *v /= norm);
            let (mut out, newton_steps) = match step(a, &y, h, kind).and_then(|p| correct(p, &alpha, kind, scale)) {
                Ok(v) => v,
                Err(e) => {
                    last = e.to_string();
                    continue;
                }
            };
            for &(i, j) in &alpha {
                out[(i, j)] = 0.0;
                out[(j, i)] = 0.0;
            }
            let min_pattern_entry =
                edges.iter().chain(&beta_pos).map(|&(i, j)| out[(i, j)].abs()).fold(f64::INFINITY, f64::min);
            if min_pattern_entry < opts.min_entry {
                last = format!("pattern entry {min_pattern_entry:.2e} below {:.0e}", opts.min_entry);
                continue;
            }
            let invariant_error = match kind {
                Kind::Ssp => charpoly_gap(a, &out)?,
                Kind::Sap => (nullity(&out)? as f64 - original_nullity as f64).abs(),
            };
            let bound = if kind == Kind::Ssp { opts.tol } else { 0.0 };
            if invariant_error > bound {
                last = format!("invariant drifted by {invariant_error:.2e}");
                continue;
            }
            let strong = has_strong_property_f64(&out, &target, kind, 1e-8)?;
            return Ok(Liberated {
                matrix: out,
                graph: target,
                kind,
                invariant_error,
                step: h,
                attempts,
                newton_steps,
                min_pattern_entry,
                strong,
            });
        }
    }
    Err(Error::NonConvergence(format!("liberation failed after {attempts} attempts: {last}")))
}

pub fn liberate_rat(a: &RatMatrix, g: &Graph, beta: &EdgeSet, kind: Kind, opts: &LiberateOptions) -> Result<Liberated> {
    liberate(&to_f64(a), g, beta, kind, opts)
}
