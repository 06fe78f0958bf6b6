//! Matrices with a prescribed spectrum and pattern: Jacobi matrices for
//! paths, bordered diagonal (arrowhead) matrices for stars, rotated diagonal
//! matrices for complete graphs, and a Gauss-Newton solver for arbitrary
//! graphs.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::catalog;
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::numeric::{cayley, expand_spectrum, from_eigen, lanczos_jacobi, random_orthogonal, svd, Mat, SymMatrix};
use crate::patterns::sample_s_f64;

use super::directsum::{is_generic, RANK_TOL};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Shape {
    Path,
    /// `K_{1,m}` centered at vertex 1.
    Star,
    Complete,
    Diagonal,
}

impl std::str::FromStr for Shape {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "path" => Ok(Shape::Path),
            "star" => Ok(Shape::Star),
            "complete" => Ok(Shape::Complete),
            "diagonal" => Ok(Shape::Diagonal),
            _ => Err(Error::Parse(format!("unknown shape `{s}`"))),
        }
    }
}

fn check_target(target: &[(f64, usize)]) -> Result<Vec<(f64, usize)>> {
    let mut t = target.to_vec();
    t.sort_by(|a, b| a.0.total_cmp(&b.0));
    if t.is_empty() || t.iter().any(|&(v, m)| m == 0 || !v.is_finite()) {
        return Err(Error::InvalidParameter("target needs finite values with positive multiplicities".into()));
    }
    if t.windows(2).any(|w| w[1].0 - w[0].0 <= 1e-9 * (1.0 + w[0].0.abs())) {
        return Err(Error::InvalidParameter("target values must be distinct".into()));
    }
    Ok(t)
}

/// The graph the output of [`realize_spectrum`] will have.
pub fn shape_graph(shape: Shape, n: usize) -> Result<Graph> {
    match shape {
        Shape::Path => catalog::path(n),
        Shape::Star if n >= 2 => catalog::star(n - 1),
        Shape::Star => Err(Error::Infeasible("a star needs at least two vertices".into())),
        Shape::Complete => catalog::complete(n),
        Shape::Diagonal => Ok(Graph::empty(n)),
    }
}

/// A matrix with spectrum `target` (distinct values with multiplicities) in
/// `S(shape)`.
pub fn realize_spectrum<R: Rng>(target: &[(f64, usize)], shape: Shape, rng: &mut R) -> Result<SymMatrix> {
    let t = check_target(target)?;
    let values = expand_spectrum(&t);
    let n = values.len();
    let m = match shape {
        Shape::Path => {
            if t.iter().any(|&(_, k)| k > 1) {
                return Err(Error::Infeasible("path matrices have simple eigenvalues".into()));
            }
            let weights: Vec<f64> = (0..n).map(|_| rng.gen_range(0.5..1.5)).collect();
            lanczos_jacobi(&values, &weights)?
        }
        Shape::Star => arrowhead(&t, rng)?,
        Shape::Complete => rotated(&t, &values, rng)?,
        Shape::Diagonal => {
            if t.iter().any(|&(_, k)| k > 1) {
                return Err(Error::Infeasible("diagonal targets are taken with distinct values".into()));
            }
            Mat::from_fn(n, n, |i, j| if i == j { values[i] } else { 0.0 })
        }
    };
    let out = SymMatrix::new(m)?;
    verify_spectrum(&out, &values, 1e-9)?;
    Ok(out)
}

fn verify_spectrum(m: &SymMatrix, values: &[f64], tol: f64) -> Result<()> {
    let scale = values.iter().fold(1.0f64, |s, v| s.max(v.abs()));
    let err = m.spectrum().iter().zip(values).fold(0.0f64, |e, (a, b)| e.max((a - b).abs()));
    if err > tol * scale {
        return Err(Error::NonConvergence(format!("spectrum off by {err:.2e}")));
    }
    Ok(())
}

/// Bordered diagonal matrix `[[c, wᵀ], [w, D]]`. An eigenvalue of
/// multiplicity `k ≥ 2` becomes `k + 1` equal leaves; the simple eigenvalues
/// strictly interlace the distinct leaf values, and gaps without a multiple
/// eigenvalue receive one extra leaf at the midpoint.
fn arrowhead<R: Rng>(t: &[(f64, usize)], rng: &mut R) -> Result<Mat> {
    let simple: Vec<f64> = t.iter().filter(|p| p.1 == 1).map(|p| p.0).collect();
    let multiple: Vec<(f64, usize)> = t.iter().copied().filter(|p| p.1 > 1).collect();
    if simple.len() < 2 {
        return Err(Error::Infeasible("a star matrix has simple extreme eigenvalues".into()));
    }
    let mut poles: Vec<(f64, usize)> = Vec::new();
    for w in simple.windows(2) {
        let inside: Vec<&(f64, usize)> = multiple.iter().filter(|p| p.0 > w[0] && p.0 < w[1]).collect();
        match inside.as_slice() {
            [] => poles.push((0.5 * (w[0] + w[1]), 1)),
            [(theta, k)] => poles.push((*theta, k + 1)),
            _ => return Err(Error::Infeasible("two multiple eigenvalues without a simple one between them".into())),
        }
    }
    if multiple.iter().any(|p| p.0 < simple[0] || p.0 > simple[simple.len() - 1]) {
        return Err(Error::Infeasible("a multiple eigenvalue lies outside the simple ones".into()));
    }
    let leaves: usize = poles.iter().map(|p| p.1).sum();
    let n = leaves + 1;
    let mut a = Mat::zeros(n, n);
    a[(0, 0)] = simple.iter().sum::<f64>() - poles.iter().map(|p| p.0).sum::<f64>();
    let mut leaf = 1;
    for (j, &(d, r)) in poles.iter().enumerate() {
        let num: f64 = simple.iter().map(|nu| d - nu).product();
        let den: f64 = poles.iter().enumerate().filter(|(l, _)| *l != j).map(|(_, p)| d - p.0).product();
        let total = -num / den;
        if total <= 0.0 {
            return Err(Error::NonConvergence("non-positive arrowhead weight".into()));
        }
        let shares: Vec<f64> = (0..r).map(|_| rng.gen_range(0.5..1.5)).collect();
        let sum: f64 = shares.iter().sum();
        for s in shares {
            let w = (total * s / sum).sqrt();
            a[(leaf, leaf)] = d;
            a[(0, leaf)] = w;
            a[(leaf, 0)] = w;
            leaf += 1;
        }
    }
    Ok(a)
}

/// `Q Λ Qᵀ` for random orthogonal `Q`, resampled until every entry is
/// nonzero and every eigenspace is generic.
fn rotated<R: Rng>(t: &[(f64, usize)], values: &[f64], rng: &mut R) -> Result<Mat> {
    let n = values.len();
    for _ in 0..200 {
        let q = random_orthogonal(n, rng);
        let a = from_eigen(values, &q);
        let scale = a.max_abs().max(1.0);
        if (0..n).any(|i| (0..n).any(|j| i != j && a[(i, j)].abs() < 1e-3 * scale)) {
            continue;
        }
        let mut start = 0;
        let mut generic = true;
        for &(_, k) in t {
            let cols: Vec<usize> = (start..start + k).collect();
            generic &= is_generic(&q.select_cols(&cols), 1e-6)?;
            start += k;
        }
        if generic {
            return Ok(a);
        }
    }
    Err(Error::NonConvergence("no generic rotation found".into()))
}

#[derive(Clone, Debug)]
pub struct RealizeOptions {
    pub restarts: usize,
    pub newton_steps: usize,
    /// Smallest admissible edge entry.
    pub min_entry: f64,
    pub seed: u64,
}

impl Default for RealizeOptions {
    fn default() -> Self {
        RealizeOptions { restarts: 200, newton_steps: 200, min_entry: 1e-3, seed: 0 }
    }
}

/// Free entries of `S^cl(G)`: the diagonal, then the edges.
fn free_positions(g: &Graph) -> Vec<(usize, usize)> {
    (0..g.order()).map(|i| (i, i)).chain(g.edges().iter().map(|p| (p.0 - 1, p.1 - 1))).collect()
}

fn assemble(n: usize, pos: &[(usize, usize)], a: &[f64]) -> Mat {
    let mut m = Mat::zeros(n, n);
    for (&(i, j), &v) in pos.iter().zip(a) {
        m[(i, j)] = v;
        m[(j, i)] = v;
    }
    m
}

fn residual(n: usize, m: &Mat, q: &Mat, lambda: &[f64]) -> Vec<f64> {
    let target = from_eigen(lambda, q);
    (0..n).flat_map(|i| (i..n).map(move |j| (i, j))).map(|(i, j)| m[(i, j)] - target[(i, j)]).collect()
}

fn norm(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

/// One Gauss-Newton run for `A(a) = Q Λ Qᵀ` from the eigenvectors of a
/// random member of `S(G)`.
fn gauss_newton<R: Rng>(g: &Graph, lambda: &[f64], opts: &RealizeOptions, rng: &mut R) -> Option<Mat> {
    let n = g.order();
    let pos = free_positions(g);
    let seed = SymMatrix::new(sample_s_f64(g, rng)).ok()?;
    let mut q = seed.eigen().vectors.clone();
    let start = from_eigen(lambda, &q);
    let mut a: Vec<f64> = pos.iter().map(|&(i, j)| start[(i, j)]).collect();
    let scale = lambda.iter().fold(1.0f64, |s, v| s.max(v.abs()));
    let uppers: Vec<(usize, usize)> = (0..n).flat_map(|i| (i..n).map(move |j| (i, j))).collect();
    let skew: Vec<(usize, usize)> = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect();
    let mut r = residual(n, &assemble(n, &pos, &a), &q, lambda);
    for _ in 0..opts.newton_steps {
        if norm(&r) <= 1e-13 * scale {
            return Some(assemble(n, &pos, &a));
        }
        // Jacobian of A(a) - Q Λ Qᵀ in (a, K) with Q ← Q(I + K).
        let cols = pos.len() + skew.len();
        let mut jac = Mat::zeros(uppers.len(), cols);
        for (row, &(i, j)) in uppers.iter().enumerate() {
            if let Some(c) = pos.iter().position(|&p| p == (i, j)) {
                jac[(row, c)] = 1.0;
            }
        }
        for (c, &(p, s)) in skew.iter().enumerate() {
            // Q [K, Λ] Qᵀ with K = E^{ps} - E^{sp}: entries (λ_s - λ_p)(q_p q_sᵀ + q_s q_pᵀ)
            let d = lambda[s] - lambda[p];
            if d == 0.0 {
                continue;
            }
            for (row, &(i, j)) in uppers.iter().enumerate() {
                let v = d * (q[(i, p)] * q[(j, s)] + q[(i, s)] * q[(j, p)]);
                jac[(row, pos.len() + c)] = -v;
            }
        }
        let rhs: Vec<f64> = r.iter().map(|x| -x).collect();
        let delta = svd(&jac).solve(&rhs, 1e-12);
        let mut t = 1.0;
        let mut accepted = false;
        for _ in 0..12 {
            let a_new: Vec<f64> = a.iter().zip(&delta).map(|(x, d)| x + t * d).collect();
            let mut k = Mat::zeros(n, n);
            for (c, &(p, s)) in skew.iter().enumerate() {
                k[(p, s)] = 0.5 * t * delta[pos.len() + c];
                k[(s, p)] = -0.5 * t * delta[pos.len() + c];
            }
            let q_new = q.mul(&cayley(&k).ok()?).ok()?;
            let r_new = residual(n, &assemble(n, &pos, &a_new), &q_new, lambda);
            if norm(&r_new) < norm(&r) {
                a = a_new;
                q = q_new;
                r = r_new;
                accepted = true;
                break;
            }
            t *= 0.5;
        }
        if !accepted {
            return None;
        }
    }
    None
}

/// A matrix in `S(G)` with the given (expanded) spectrum, accepted by
/// `accept`. Restarts from fresh random seeds.
pub fn realize_on_graph_with<F>(g: &Graph, spectrum: &[f64], opts: &RealizeOptions, accept: F) -> Result<Mat>
where
    F: Fn(&Mat) -> bool,
{
    let n = g.order();
    if spectrum.len() != n {
        return Err(Error::DimensionMismatch(format!("{} eigenvalues for {n} vertices", spectrum.len())));
    }
    let mut lambda = spectrum.to_vec();
    lambda.sort_by(f64::total_cmp);
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    for _ in 0..opts.restarts {
        let Some(m) = gauss_newton(g, &lambda, opts, &mut rng) else { continue };
        let scale = m.max_abs().max(1.0);
        if g.edges().iter().any(|p| m[(p.0 - 1, p.1 - 1)].abs() < opts.min_entry * scale) {
            continue;
        }
        let Ok(sym) = SymMatrix::new(m.clone()) else { continue };
        if verify_spectrum(&sym, &lambda, 1e-9).is_err() {
            continue;
        }
        if accept(&m) {
            return Ok(m);
        }
    }
    Err(Error::NonConvergence(format!("no realization after {} restarts", opts.restarts)))
}

pub fn realize_on_graph(g: &Graph, spectrum: &[f64], opts: &RealizeOptions) -> Result<Mat> {
    realize_on_graph_with(g, spectrum, opts, |_| true)
}

/// Every eigenspace of `m` (clustered at `tol`) is generic.
pub fn eigenspaces_generic(m: &SymMatrix, tol: f64) -> Result<Vec<bool>> {
    let (list, ranges) = crate::numeric::clusters(m.spectrum(), tol);
    let _ = list;
    ranges.into_iter().map(|r| is_generic(&m.eigen().vectors.select_cols(&r.collect::<Vec<_>>()), RANK_TOL)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::multiplicity_list;
    use crate::patterns::{in_class, PatternClass};
    use crate::strong::{has_strong_property_f64, Kind};

    fn rng() -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(17)
    }

    #[test]
    fn path_round_trip() {
        let m = realize_spectrum(&[(1.0, 1), (2.0, 1), (3.0, 1)], Shape::Path, &mut rng()).unwrap();
        for (x, y) in m.spectrum().iter().zip([1.0, 2.0, 3.0]) {
            assert!((x - y).abs() < 1e-10);
        }
        assert!(in_class(m.matrix(), &catalog::path(3).unwrap(), PatternClass::S, 0.0).unwrap());
        assert!(realize_spectrum(&[(1.0, 2), (2.0, 1)], Shape::Path, &mut rng()).is_err());
    }

    #[test]
    fn star_with_a_double_eigenvalue() {
        let m = realize_spectrum(&[(-1.0, 1), (0.5, 2), (2.0, 1)], Shape::Star, &mut rng()).unwrap();
        assert_eq!(m.order(), 4);
        assert!(in_class(m.matrix(), &catalog::star(3).unwrap(), PatternClass::S, 0.0).unwrap());
        assert_eq!(multiplicity_list(m.spectrum(), 1e-8).ordered(), &[1, 2, 1]);
        assert!(has_strong_property_f64(m.matrix(), &catalog::star(3).unwrap(), Kind::Ssp, 1e-9).unwrap());
        // simple extreme eigenvalues only
        assert!(realize_spectrum(&[(-1.0, 2), (2.0, 1)], Shape::Star, &mut rng()).is_err());
        // two multiple eigenvalues need a simple one between them
        let two = realize_spectrum(&[(0.0, 1), (1.0, 2), (2.0, 1), (3.0, 2), (4.0, 1)], Shape::Star, &mut rng());
        assert_eq!(two.unwrap().order(), 7);
        assert!(realize_spectrum(&[(0.0, 1), (1.0, 2), (3.0, 2), (4.0, 1)], Shape::Star, &mut rng()).is_err());
    }

    #[test]
    fn simple_star_adds_midpoint_leaves() {
        let m = realize_spectrum(&[(0.0, 1), (1.0, 1), (5.0, 1)], Shape::Star, &mut rng()).unwrap();
        assert!(in_class(m.matrix(), &catalog::star(2).unwrap(), PatternClass::S, 0.0).unwrap());
    }

    #[test]
    fn complete_generic() {
        let m = realize_spectrum(&[(0.0, 2), (3.0, 1)], Shape::Complete, &mut rng()).unwrap();
        assert!(in_class(m.matrix(), &catalog::complete(3).unwrap(), PatternClass::S, 0.0).unwrap());
        assert!(eigenspaces_generic(&m, 1e-8).unwrap().iter().all(|&g| g));
    }

    #[test]
    fn cycle_with_double_eigenvalues() {
        let c5 = catalog::cycle(5).unwrap();
        // periodic Jacobi spectra interlace as λ1 < λ2 ≤ λ3 < λ4 ≤ λ5 or λ1 ≤ λ2 < λ3 ≤ λ4 < λ5
        for spec in [[-2.0, 0.0, 0.0, 1.0, 1.0], [-1.0, -1.0, 0.5, 0.5, 2.0], [-3.0, -1.0, 0.0, 0.0, 2.0]] {
            let opts = RealizeOptions { seed: 3, ..Default::default() };
            let m = realize_on_graph(&c5, &spec, &opts).unwrap();
            assert!(in_class(&m, &c5, PatternClass::S, 0.0).unwrap());
            let s = SymMatrix::new(m).unwrap();
            let want = multiplicity_list(&spec, 1e-8);
            assert_eq!(multiplicity_list(s.spectrum(), 1e-8).ordered(), want.ordered());
        }
    }
}
