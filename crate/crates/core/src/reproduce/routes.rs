//! How each six-vertex graph reaches each of its multiplicity lists: seed
//! blocks with prescribed spectra, placed on the graph's labels, then one or
//! two liberation steps.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::{liberate_step, place};
use crate::catalog::cycle;
use crate::error::{Error, Result};
use crate::liberation::directsum::RANK_TOL;
use crate::liberation::realize::{eigenspaces_generic, realize_on_graph_with, realize_spectrum, RealizeOptions, Shape};
use crate::numeric::{expand_spectrum, Mat, SymMatrix};
use crate::report::RunReport;
use crate::strong::{has_strong_property_f64, Kind};

/// Graph name and its ordered multiplicity lists.
pub const TABLE: [(&str, &[&[usize]]); 11] = [
    ("G100", &[&[1, 2, 2, 1]]),
    ("G127", &[&[2, 1, 1, 2]]),
    ("G129", &[&[1, 1, 3, 1], &[1, 3, 1, 1]]),
    ("G145", &[&[1, 1, 3, 1], &[1, 3, 1, 1]]),
    ("G151", &[&[1, 1, 3, 1], &[1, 3, 1, 1], &[1, 2, 3], &[3, 2, 1], &[1, 3, 2], &[2, 3, 1]]),
    ("G153", &[&[1, 1, 3, 1], &[1, 3, 1, 1]]),
    ("G163", &[&[1, 1, 3, 1], &[1, 3, 1, 1]]),
    ("G169", &[&[1, 3, 2], &[2, 3, 1]]),
    ("G171", &[&[1, 1, 3, 1], &[1, 3, 1, 1], &[1, 2, 3], &[3, 2, 1], &[1, 3, 2], &[2, 3, 1]]),
    ("G175", &[&[1, 3, 2], &[2, 3, 1]]),
    ("G187", &[&[1, 1, 3, 1], &[1, 3, 1, 1], &[1, 2, 3], &[3, 2, 1], &[1, 3, 2], &[2, 3, 1]]),
];

/// A matrix in `S(graph)` with eigenvalues `values` and multiplicities
/// `list`, built by liberation.
pub fn route(r: &mut RunReport, graph: &str, list: &[usize], values: &[f64], seed: u64) -> Result<Mat> {
    if list.len() != values.len() || list.iter().sum::<usize>() != 6 {
        return Err(Error::InvalidParameter(format!("{list:?} with {} values", values.len())));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let rng = &mut rng;
    match graph {
        "G100" => g100(r, list, values, rng, seed),
        "G127" => g127(r, list, values, rng, seed),
        "G129" => g129(r, list, values, rng, seed),
        "G145" => {
            let m = g129(r, list, values, rng, seed)?;
            liberate_step(r, "G129 + {2-5}", &m, "2-5", Kind::Ssp, seed)
        }
        "G153" => {
            let m = g129(r, list, values, rng, seed)?;
            liberate_step(r, "G129 + {1-6}", &m, "1-6", Kind::Ssp, seed)
        }
        "G151" if list == [1, 2, 3] || list == [3, 2, 1] => {
            c5_apex(r, list, values, &[1, 2, 6, 5, 3], 4, "1-4,4-5,4-6", seed)
        }
        "G151" => g151_family(r, list, values, seed),
        "G163" => g163(r, list, values, rng, seed),
        "G169" => g169(r, list, values, rng, seed),
        "G171" => c5_apex(r, list, values, &[1, 2, 3, 4, 5], 6, "1-6,3-6,4-6,5-6", seed),
        "G175" => g175(r, list, values, rng, seed),
        "G187" => {
            let m = c5_apex(r, list, values, &[1, 2, 3, 4, 5], 6, "1-6,3-6,4-6,5-6", seed)?;
            liberate_step(r, "G171 + {2-6}", &m, "2-6", Kind::Ssp, seed)
        }
        _ => Err(Error::InvalidParameter(format!("no route for {graph}"))),
    }
}

fn unsupported(graph: &str, list: &[usize]) -> Error {
    Error::InvalidParameter(format!("no route for {list:?} on {graph}"))
}

fn index_of(list: &[usize], m: usize) -> Option<usize> {
    list.iter().position(|&x| x == m)
}

/// `K_{1,3}`-type block `{a, θ^(2), b}`; the center comes first.
fn star(a: f64, theta: f64, b: f64, rng: &mut ChaCha8Rng) -> Result<Mat> {
    Ok(realize_spectrum(&[(a, 1), (theta, 2), (b, 1)], Shape::Star, rng)?.into_matrix())
}

fn complete(target: &[(f64, usize)], rng: &mut ChaCha8Rng) -> Result<Mat> {
    let mut t = target.to_vec();
    t.sort_by(|x, y| x.0.total_cmp(&y.0));
    Ok(realize_spectrum(&t, Shape::Complete, rng)?.into_matrix())
}

fn path(values: &[f64], rng: &mut ChaCha8Rng) -> Result<Mat> {
    let mut t: Vec<(f64, usize)> = values.iter().map(|&v| (v, 1)).collect();
    t.sort_by(|x, y| x.0.total_cmp(&y.0));
    Ok(realize_spectrum(&t, Shape::Path, rng)?.into_matrix())
}

fn scalar(v: f64) -> Mat {
    Mat::from_fn(1, 1, |_, _| v)
}

/// Star `{v1, v2^(2), v3}` on 1-4 and `P2 {v3, v4}` on 5-6, joined by 4-5, 4-6.
fn g100(r: &mut RunReport, list: &[usize], v: &[f64], rng: &mut ChaCha8Rng, seed: u64) -> Result<Mat> {
    if list != [1, 2, 2, 1] {
        return Err(unsupported("G100", list));
    }
    let a = star(v[0], v[1], v[2], rng)?;
    let b = path(&[v[2], v[3]], rng)?;
    let m = place(6, &[(&a, &[1, 2, 3, 4]), (&b, &[5, 6])])?;
    liberate_step(r, "K1,3 ⊕ P2", &m, "4-5,4-6", Kind::Ssp, seed)
}

/// `K3 {v1, v4^(2)}` ⊕ `P3 {v1, v2, v3}`, joined by 1-6, 3-4.
fn g127(r: &mut RunReport, list: &[usize], v: &[f64], rng: &mut ChaCha8Rng, seed: u64) -> Result<Mat> {
    if list != [2, 1, 1, 2] {
        return Err(unsupported("G127", list));
    }
    let a = complete(&[(v[0], 1), (v[3], 2)], rng)?;
    let b = path(&[v[0], v[1], v[2]], rng)?;
    let m = place(6, &[(&a, &[1, 2, 3]), (&b, &[4, 5, 6])])?;
    liberate_step(r, "K3 ⊕ P3", &m, "1-6,3-4", Kind::Ssp, seed)
}

/// Star on center 2 with leaves 1, 3, 6 holding `θ^(2)`, a vertex 4 joined
/// to leaf 3, then vertex 5 with value θ joined to the leaves 1, 4, 6 of
/// the resulting generalized star.
fn g129(r: &mut RunReport, list: &[usize], v: &[f64], rng: &mut ChaCha8Rng, seed: u64) -> Result<Mat> {
    let (a, theta, b, mu) = match list {
        [1, 3, 1, 1] => (v[0], v[1], v[2], v[3]),
        [1, 1, 3, 1] => (v[1], v[2], v[3], v[0]),
        _ => return Err(unsupported("G129", list)),
    };
    let s = star(a, theta, b, rng)?;
    // local labels: G129 vertices 1, 2, 3, 4, 6 become 1..5
    let first = place(5, &[(&s, &[2, 1, 3, 5]), (&scalar(mu), &[4])])?;
    let g30 = liberate_step(r, "K1,3 ⊕ K1", &first, "3-4", Kind::Ssp, seed)?;
    let second = place(6, &[(&g30, &[1, 2, 3, 4, 6]), (&scalar(theta), &[5])])?;
    liberate_step(r, "G30 ⊕ K1", &second, "1-5,4-5,5-6", Kind::Ssp, seed)
}

/// Members of `b e1e1ᵀ + t(e1 1ᵀ + 1 e1ᵀ) ⊕ a J2` shifted by the triple
/// eigenvalue, joined by 3-5, 4-5, 2-6, 4-6.
fn g151_family(r: &mut RunReport, list: &[usize], v: &[f64], seed: u64) -> Result<Mat> {
    let t = index_of(list, 3).ok_or_else(|| unsupported("G151", list))?;
    let w: Vec<f64> = v.iter().map(|x| x - v[t]).collect();
    // star part {r1, 0^(2), r2}, block part {0, 2a}
    let (r1, r2, two_a) = match list {
        [1, 3, 1, 1] => {
            let (x, y) = (w[2], w[3]);
            if (w[0] + x).abs() >= (w[0] + y).abs() {
                (w[0], x, y)
            } else {
                (w[0], y, x)
            }
        }
        [1, 1, 3, 1] => {
            let (x, y) = (w[0], w[1]);
            if (x + w[3]).abs() >= (y + w[3]).abs() {
                (x, w[3], y)
            } else {
                (y, w[3], x)
            }
        }
        [1, 3, 2] => (w[0], w[2], w[2]),
        [2, 3, 1] => (w[0], w[2], w[0]),
        _ => return Err(unsupported("G151", list)),
    };
    let b = r1 + r2;
    let tt = (-r1 * r2 / 3.0).sqrt();
    if b.abs() < 1e-6 || !tt.is_finite() {
        return Err(Error::Infeasible("family parameters degenerate for this draw".into()));
    }
    let mut m = Mat::zeros(6, 6);
    m[(0, 0)] = b;
    for leaf in 1..4 {
        m[(0, leaf)] = tt;
        m[(leaf, 0)] = tt;
    }
    for i in 4..6 {
        for j in 4..6 {
            m[(i, j)] = two_a / 2.0;
        }
    }
    let m = m.shifted(&v[t]);
    liberate_step(r, "K1,3 ∪ K2 family", &m, "3-5,4-5,2-6,4-6", Kind::Ssp, seed)
}

/// `C5` realizing the list with one copy of the triple eigenvalue removed,
/// placed along `cycle`, and an apex holding that eigenvalue joined by
/// `beta`.
fn c5_apex(
    r: &mut RunReport,
    list: &[usize],
    v: &[f64],
    cycle_labels: &[usize],
    apex: usize,
    beta: &str,
    seed: u64,
) -> Result<Mat> {
    let t = index_of(list, 3).ok_or_else(|| unsupported("C5 + apex", list))?;
    let mut reduced = list.to_vec();
    reduced[t] = 2;
    let spectrum = expand_spectrum(&super::target(v, &reduced));
    let c5 = cycle(5)?;
    let opts = RealizeOptions { seed, ..Default::default() };
    let a = realize_on_graph_with(&c5, &spectrum, &opts, |m| {
        has_strong_property_f64(m, &c5, Kind::Ssp, RANK_TOL).unwrap_or(false)
            && SymMatrix::new(m.clone())
                .and_then(|s| eigenspaces_generic(&s, 1e-8))
                .map(|g| g.iter().all(|&x| x))
                .unwrap_or(false)
    })?;
    r.stage("C5 seed", true, format!("multiplicities {reduced:?} with the SSP and generic eigenspaces"));
    let m = place(6, &[(&a, cycle_labels), (&scalar(v[t]), &[apex])])?;
    liberate_step(r, "C5 ⊕ K1", &m, beta, Kind::Ssp, seed)
}

/// `K3 {θ^(2), μ}` ⊕ `P3 {θ, λ1, λ2}`, two bridging edges at 1 and two at 3.
fn g163(r: &mut RunReport, list: &[usize], v: &[f64], rng: &mut ChaCha8Rng, seed: u64) -> Result<Mat> {
    if list != [1, 1, 3, 1] && list != [1, 3, 1, 1] {
        return Err(unsupported("G163", list));
    }
    let t = index_of(list, 3).expect("checked above");
    let rest: Vec<f64> = (0..4).filter(|&i| i != t).map(|i| v[i]).collect();
    let a = complete(&[(v[t], 2), (rest[0], 1)], rng)?;
    let b = path(&[v[t], rest[1], rest[2]], rng)?;
    let m = place(6, &[(&a, &[1, 2, 3]), (&b, &[4, 5, 6])])?;
    liberate_step(r, "K3 ⊕ P3", &m, "1-6,1-5,3-5,3-4", Kind::Ssp, seed)
}

/// `K4 {θ, x^(3)}` ⊕ `K2 {θ, y}`, joined by 4-5, 2-6.
fn g169(r: &mut RunReport, list: &[usize], v: &[f64], rng: &mut ChaCha8Rng, seed: u64) -> Result<Mat> {
    let (Some(i2), Some(i3), Some(i1)) = (index_of(list, 2), index_of(list, 3), index_of(list, 1)) else {
        return Err(unsupported("G169", list));
    };
    if list.len() != 3 {
        return Err(unsupported("G169", list));
    }
    let a = complete(&[(v[i2], 1), (v[i3], 3)], rng)?;
    let b = complete(&[(v[i2], 1), (v[i1], 1)], rng)?;
    let m = place(6, &[(&a, &[1, 2, 3, 4]), (&b, &[5, 6])])?;
    liberate_step(r, "K4 ⊕ K2", &m, "4-5,2-6", Kind::Ssp, seed)
}

/// Star `{v1, v2^(2), v3}` centered at 6 with leaves 1, 3, 5, and
/// `diag(v2, ·)` on 2, 4 joined to every leaf.
fn g175(r: &mut RunReport, list: &[usize], v: &[f64], rng: &mut ChaCha8Rng, seed: u64) -> Result<Mat> {
    let other = match list {
        [1, 3, 2] => v[2],
        [2, 3, 1] => v[0],
        _ => return Err(unsupported("G175", list)),
    };
    let s = star(v[0], v[1], v[2], rng)?;
    let m = place(6, &[(&s, &[6, 1, 3, 5]), (&scalar(v[1]), &[2]), (&scalar(other), &[4])])?;
    liberate_step(r, "K1,3 ⊕ 2K1", &m, "1-2,2-3,2-5,1-4,3-4,4-5", Kind::Ssp, seed)
}
