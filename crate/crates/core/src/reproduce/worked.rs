//! The worked examples, each rebuilt from its matrices and re-verified.

use num::{BigRational, Zero};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::{liberate_edges, table_rows, LIST_TOL};
use crate::catalog::{catalog, cycle, path};
use crate::error::{Error, Result};
use crate::exact::{self, int, int_matrix, rat};
use crate::graph::{EdgeSet, Graph, Pair};
use crate::liberation::directsum::{directsum_liberation, grid, is_generic, sylvester_space, RANK_TOL};
use crate::liberation::liberate::{liberate, liberate_rat, LiberateOptions};
use crate::liberation::realize::{eigenspaces_generic, realize_on_graph_with, realize_spectrum, RealizeOptions, Shape};
use crate::liberation::{
    definition_holds, is_graph_liberation_set, is_graph_liberation_set_with, is_liberation_set, CheckMode,
    GraphVerdict,
};
use crate::matrix::{charpoly, to_f64, RatMatrix};
use crate::numeric::{multiplicity_list, numeric_rank, Mat, SymMatrix};
use crate::patterns::{pattern_of, random_rational};
use crate::report::RunReport;
use crate::strong::{has_strong_property, has_strong_property_f64, psi_rows, Kind};
use crate::zeroforcing::{cover_to_bridge, is_zf_cover, zf_liberation, Product, ProductVertex};

fn pairs(n: usize, s: &str) -> Result<EdgeSet> {
    EdgeSet::parse(n, s)
}

fn ordered_list(m: &Mat) -> Result<Vec<usize>> {
    Ok(SymMatrix::new(m.clone())?.multiplicities(LIST_TOL).ordered().to_vec())
}

/// Off-pattern entries exactly zero, pattern entries at least `min` in size.
fn pattern_report(m: &Mat, g: &Graph) -> (bool, f64) {
    let n = m.rows();
    let mut off_zero = true;
    let mut smallest = f64::INFINITY;
    for i in 0..n {
        for j in i + 1..n {
            if g.has_edge(i + 1, j + 1) {
                smallest = smallest.min(m[(i, j)].abs());
            } else {
                off_zero &= m[(i, j)] == 0.0 && m[(j, i)] == 0.0;
            }
        }
    }
    (off_zero, smallest)
}

pub fn k4k1_matrix() -> RatMatrix {
    let mut a = int_matrix(&[&[1, 1, 1, 1, 0], &[1, 1, 1, 1, 0], &[1, 1, 1, 1, 0], &[1, 1, 1, 1, 0], &[0, 0, 0, 0, 0]]);
    a[(4, 4)] = int(4);
    a
}

pub fn k4k1(r: &mut RunReport, seed: u64) -> Result<()> {
    let a = k4k1_matrix();
    let g = catalog("K4uK1")?;
    let beta = pairs(5, "3-5,4-5")?;
    let cert = is_liberation_set(&a, &g, &beta, Kind::Ssp, CheckMode::Full, seed)?;
    r.stage(
        "certify {3-5,4-5}",
        cert.verdict,
        format!("all four criteria agree: {:?}", cert.criteria),
    );
    r.certificate("liberation", &cert);
    let single = is_liberation_set(&a, &g, &pairs(5, "4-5")?, Kind::Ssp, CheckMode::Full, seed)?;
    r.stage("{4-5} alone is not enough", !single.verdict, format!("rank test {}", single.criteria.rank_test));

    let out = liberate_rat(&a, &g, &beta, Kind::Ssp, &LiberateOptions { seed, ..Default::default() })?;
    let target = g.add_edges(&beta)?;
    let want: Vec<f64> = exact::charpoly(&a)?.iter().map(|c| c.to_string().parse::<f64>().unwrap_or(f64::NAN)).collect();
    let got = charpoly(&out.matrix)?;
    let coef_err = want.iter().zip(&got).fold(0.0f64, |e, (x, y)| e.max((x - y).abs()));
    let (off_zero, smallest) = pattern_report(&out.matrix, &target);
    r.stage(
        "liberate",
        out.graph == target && coef_err <= 1e-9 && smallest >= 1e-6 && off_zero,
        format!("char-poly error {coef_err:.1e}, smallest pattern entry {smallest:.2e}, off-pattern zero {off_zero}"),
    );
    r.claim("K4 ∪ K1 with the spectrum {0^(3), 4^(2)} liberates into K4 ∪ K1 + {3-5, 4-5}", r.verdict);
    Ok(())
}

/// `b e1e1ᵀ + t(e1 1ᵀ + 1 e1ᵀ)` on the star (center 1, leaves 2-4) plus
/// `a J2` on 5, 6.
pub fn g151_member(a: &BigRational, b: &BigRational, t: &BigRational) -> RatMatrix {
    let mut m = RatMatrix::zeros(6, 6);
    m[(0, 0)] = b.clone();
    for leaf in 1..4 {
        m[(0, leaf)] = t.clone();
        m[(leaf, 0)] = t.clone();
    }
    for i in 4..6 {
        for j in 4..6 {
            m[(i, j)] = a.clone();
        }
    }
    m
}

pub const G151_BETA: &str = "3-5,4-5,2-6,4-6";

/// Star-plus-K2 matrices in which an eigenvalue `r` of the star block is
/// shared with the K2 block: weights `w` on the star edges, center
/// `(r² - |w|²) / r`, zero leaves, and `(r/2) J2`.
pub fn g151_candidates() -> Vec<RatMatrix> {
    let mut out = Vec::new();
    for w1 in 1..=5i64 {
        for w2 in 1..=5i64 {
            for w3 in 1..=5i64 {
                let total = w1 * w1 + w2 * w2 + w3 * w3;
                for r0 in (-10i64..=10).filter(|&x| x != 0) {
                    if r0 * r0 == total {
                        continue;
                    }
                    let mut m = RatMatrix::zeros(6, 6);
                    m[(0, 0)] = rat(r0 * r0 - total, r0);
                    for (leaf, w) in [(1, w1), (2, w2), (3, w3)] {
                        m[(0, leaf)] = int(w);
                        m[(leaf, 0)] = int(w);
                    }
                    for i in 4..6 {
                        for j in 4..6 {
                            m[(i, j)] = rat(r0, 2);
                        }
                    }
                    out.push(m);
                }
            }
        }
    }
    out
}

pub fn g151(r: &mut RunReport, seed: u64) -> Result<()> {
    let base = catalog("G151-base")?;
    let beta = pairs(6, G151_BETA)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut certified = 0;
    for k in 0..50 {
        let (a, b, t) = (random_rational(&mut rng), random_rational(&mut rng), random_rational(&mut rng));
        let m = g151_member(&a, &b, &t);
        if is_liberation_set(&m, &base, &beta, Kind::Ssp, CheckMode::default(), seed ^ k)?.verdict {
            certified += 1;
        }
    }
    r.stage("family members", certified == 50, format!("{certified} of 50 random members certified"));
    r.claim("β is a liberation set of every sampled member of the family", certified == 50);

    let verdict = is_graph_liberation_set_with(&base, &beta, Kind::Ssp, 50, seed, &g151_candidates())?;
    let found = match &verdict {
        GraphVerdict::CertifiedCounterexample { matrix, source } => {
            let fails = !definition_holds(matrix, &base, &beta, Kind::Ssp)?;
            let in_pattern = pattern_of(matrix, 0.0)? == base;
            r.stage(
                "counterexample",
                fails && in_pattern,
                format!("{source}; definition fails {fails}, in S(K1,3 ∪ K2) {in_pattern}"),
            );
            fails && in_pattern
        }
        GraphVerdict::ProbabilisticYes { trials } => {
            r.stage("counterexample", false, format!("none among the structured candidates and {trials} samples"));
            false
        }
    };
    r.certificate("graph_verdict", &verdict);
    r.claim("β is not a liberation set of every matrix in S(K1,3 ∪ K2)", found);
    table_rows(r, &["G151"], seed, 2)?;
    Ok(())
}

/// `C6` adjacency with the sign of the 1-6 entry flipped.
pub fn c6_matrix() -> Result<Mat> {
    Ok(to_f64(&c6_exact()))
}

pub fn c6_exact() -> RatMatrix {
    let mut m = adjacency(&cycle(6).expect("C6"));
    m[(0, 5)] = int(-1);
    m[(5, 0)] = int(-1);
    m
}

/// `C8` adjacency with `√(5/3)` on 4-5 and `-√(5/3)` on 1-8.
pub fn c8_matrix() -> Result<Mat> {
    let mut m = to_f64(&adjacency(&cycle(8)?));
    let w = (5.0f64 / 3.0).sqrt();
    m[(3, 4)] = w;
    m[(4, 3)] = w;
    m[(0, 7)] = -w;
    m[(7, 0)] = -w;
    Ok(m)
}

pub fn adjacency(g: &Graph) -> RatMatrix {
    let n = g.order();
    let mut m = RatMatrix::zeros(n, n);
    for p in g.edges() {
        m[(p.0 - 1, p.1 - 1)] = int(1);
        m[(p.1 - 1, p.0 - 1)] = int(1);
    }
    m
}

fn spectrum_error(s: &SymMatrix, want: &[f64]) -> f64 {
    s.spectrum().iter().zip(want).fold(0.0f64, |e, (x, y)| e.max((x - y).abs()))
}

/// Position (1-based) of the multiplicity 4 in the ordered list of
/// `(A + sI) ⊕ B`, when the list is four followed or preceded by doubles.
fn position_of_four(a: &[f64], b: &[f64], s: f64) -> Option<usize> {
    let mut all: Vec<f64> = a.iter().map(|x| x + s).chain(b.iter().copied()).collect();
    all.sort_by(f64::total_cmp);
    let list = multiplicity_list(&all, 1e-8);
    let ordered = list.ordered();
    let fours: Vec<usize> = (0..ordered.len()).filter(|&i| ordered[i] == 4).collect();
    (ordered.len() == 6 && fours.len() == 1 && ordered.iter().all(|&m| m == 2 || m == 4)).then(|| fours[0] + 1)
}

pub fn c6c8(r: &mut RunReport, seed: u64) -> Result<()> {
    let a = SymMatrix::new(c6_matrix()?)?;
    let b = SymMatrix::new(c8_matrix()?)?;
    let s3 = 3f64.sqrt();
    let t = (2.0f64 / 3.0).sqrt();
    let want_a = [-s3, -s3, 0.0, 0.0, s3, s3];
    let want_b = [-2.0, -2.0, -t, -t, t, t, 2.0, 2.0];
    let (ea, eb) = (spectrum_error(&a, &want_a), spectrum_error(&b, &want_b));
    r.stage("closed-form spectra", ea <= 1e-9 && eb <= 1e-9, format!("errors {ea:.1e} (C6), {eb:.1e} (C8)"));
    let ga = eigenspaces_generic(&a, 1e-8)?;
    let gb = eigenspaces_generic(&b, 1e-8)?;
    let generic_ok = ga == [true, false, true] && gb.iter().all(|&x| x);
    r.stage("genericity", generic_ok, format!("C6 {ga:?}, C8 {gb:?}"));
    r.claim("every eigenspace of the two matrices is generic except the kernel of the C6 matrix", generic_ok);

    let shift = s3 - 2.0;
    let a_shift = a.shifted(shift);
    let space = sylvester_space(&a_shift, &b, 1e-8)?;
    r.stage("Sylvester space", space.dim() == 4, format!("dimension {} after shifting by √3 - 2", space.dim()));

    let exact_a = has_strong_property(&c6_exact(), &cycle(6)?, Kind::Ssp)?;
    r.stage(
        "SSP of the C6 matrix",
        exact_a.answer,
        format!("exact Ψ has rank {} with {} left-kernel vector(s)", exact_a.rank, exact_a.nullity),
    );
    let displayed = grids(r, "displayed pair", &a_shift, &b, seed)?;
    r.claim("both grids liberate the displayed pair, shifted, to the ordered list (4,2,2,2,2,2)", displayed);

    // A member of S(C6) with the same spectrum that does have the SSP.
    let c6 = cycle(6)?;
    let opts = RealizeOptions { seed, ..Default::default() };
    let sub = realize_on_graph_with(&c6, &want_a, &opts, |m| {
        has_strong_property_f64(m, &c6, Kind::Ssp, RANK_TOL).unwrap_or(false)
            && SymMatrix::new(m.clone()).and_then(|s| eigenspaces_generic(&s, 1e-8)).is_ok_and(|g| g[0])
    })?;
    let sub = SymMatrix::new(sub)?.shifted(shift);
    r.stage("substitute C6 matrix", true, "same spectrum, SSP, generic eigenspace at -√3".to_string());
    let substitute = grids(r, "substitute pair", &sub, &b, seed)?;
    r.claim("with a C6 matrix of the same spectrum that has the SSP, both grids give (4,2,2,2,2,2)", substitute);

    let (da, db) = (distinct(a.spectrum()), distinct(b.spectrum()));
    let mut positions: Vec<usize> = [0usize, 2]
        .iter()
        .flat_map(|&i| {
            let base = da[i];
            db.iter().map(move |&mu| mu - base)
        })
        .filter_map(|s| position_of_four(a.spectrum(), b.spectrum(), s))
        .collect();
    positions.sort_unstable();
    positions.dedup();
    let covered = positions == [1, 2, 3, 4, 5, 6];
    r.stage("shift family", covered, format!("the multiplicity 4 reaches positions {positions:?}"));
    r.claim("shifting the C6 matrix moves the multiplicity 4 to any of the six positions", covered);
    Ok(())
}

/// The 2×3 and 3×2 grids: certify against every β' on the full matrix,
/// then liberate and read off the ordered list.
fn grids(r: &mut RunReport, label: &str, a: &SymMatrix, b: &SymMatrix, seed: u64) -> Result<bool> {
    let sum = a.matrix().direct_sum(b.matrix());
    let union = pattern_of(&sum, 0.0)?;
    let mut all_ok = true;
    for (name, rows, cols) in [("2x3 grid", vec![2, 3], vec![2, 3, 4]), ("3x2 grid", vec![2, 3, 6], vec![3, 7])] {
        let beta = grid(6, 8, &rows, &cols)?;
        let cert = directsum_liberation(a, b, &beta, Kind::Ssp, 1e-8)?;
        let full = cert.checks.iter().all(|c| c.full_matrix);
        let certified = cert.verdict && full;
        r.stage(
            format!("{label}, {name}: certify {beta}"),
            certified,
            format!(
                "Sylvester space trivial on every β' {}, full Ψ check {full}, hypotheses {:?}",
                cert.verdict, cert.hypotheses
            ),
        );
        if !certified {
            all_ok = false;
            continue;
        }
        let out = liberate(&sum, &union, &beta, Kind::Ssp, &LiberateOptions { seed, ..Default::default() })?;
        let list = ordered_list(&out.matrix)?;
        let ok = list == [4, 2, 2, 2, 2, 2] && out.graph == union.add_edges(&beta)? && out.strong;
        r.stage(format!("{label}, {name}: liberate"), ok, format!("ordered multiplicity list {list:?}, SSP {}", out.strong));
        all_ok &= ok;
    }
    Ok(all_ok)
}

fn distinct(values: &[f64]) -> Vec<f64> {
    let mut out: Vec<f64> = Vec::new();
    for &v in values {
        if out.last().is_none_or(|&l| v - l > 1e-6) {
            out.push(v);
        }
    }
    out
}

/// `Ψ[α, γ]` of the K1,4 example: rows 1-4, 2-3, 2-4, 3-4, columns of the
/// star edges.
pub fn k14_minor(a: &RatMatrix) -> Result<BigRational> {
    let rows = [Pair(1, 4), Pair(2, 3), Pair(2, 4), Pair(3, 4)];
    let cols: Vec<usize> = (1..=4).map(|i| Pair(i, 5).lex_index(5)).collect();
    exact::det(&psi_rows(a, &rows, Kind::Ssp).select_cols(&cols))
}

pub fn k14(r: &mut RunReport, seed: u64) -> Result<()> {
    let g = catalog("K1,4")?.relabel(&[5, 1, 2, 3, 4])?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut matches = 0;
    for _ in 0..20 {
        let mut a = RatMatrix::zeros(5, 5);
        for i in 0..5 {
            a[(i, i)] = random_rational(&mut rng);
        }
        for leaf in 0..4 {
            let w = random_rational(&mut rng);
            a[(leaf, 4)] = w.clone();
            a[(4, leaf)] = w;
        }
        let want = -int(2) * &a[(1, 4)] * &a[(2, 4)] * &a[(3, 4)] * &a[(3, 4)];
        if k14_minor(&a)? == want && !want.is_zero() {
            matches += 1;
        }
    }
    r.stage("determinant", matches == 20, format!("{matches} of 20 random matrices match -2·a25·a35·a45²"));
    r.claim("the minor is -2·a25·a35·a45², so it never vanishes", matches == 20);

    let mut both = true;
    for (name, beta) in [("β1", "1-2,2-3,1-3"), ("β2", "1-2,1-3,1-4")] {
        let verdict = is_graph_liberation_set(&g, &pairs(5, beta)?, Kind::Ssp, 30, seed)?;
        let yes = verdict.is_yes();
        r.stage(format!("{name} = {{{beta}}}"), yes, format!("{verdict:?}"));
        both &= yes;
    }
    r.claim("both three-element sets of leaf nonedges liberate K1,4", both);

    // four equal leaves force a triple eigenvalue
    let mut t = RatMatrix::zeros(5, 5);
    for leaf in 0..4 {
        t[(leaf, 4)] = int(1);
        t[(4, leaf)] = int(1);
    }
    let report = has_strong_property(&t, &g, Kind::Ssp)?;
    let triple = SymMatrix::from_rat(&t)?.multiplicities(1e-8).unordered().contains(&3);
    r.stage("triple eigenvalue", triple && !report.answer, format!("multiplicity 3 {triple}, SSP {}", report.answer));
    r.claim("a K1,4 matrix with a triple eigenvalue lacks the SSP", triple && !report.answer);
    Ok(())
}

pub fn k13k13(r: &mut RunReport, seed: u64) -> Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (l1, m1, theta, m2, l2) = (-2.0, -1.0, 0.0, 1.0, 2.0);
    let a = realize_spectrum(&[(l1, 1), (theta, 2), (l2, 1)], Shape::Star, &mut rng)?;
    let b = realize_spectrum(&[(m1, 1), (theta, 2), (m2, 1)], Shape::Star, &mut rng)?;
    let mut ok = true;
    for (name, s) in [("A", &a), ("B", &b)] {
        let space = s.eigen().eigenspace(theta, 1e-8);
        let full = is_generic(&space, RANK_TOL)?;
        let leaves = is_generic(&space.select_rows(&[1, 2, 3]), RANK_TOL)?;
        r.stage(format!("{name} eigenspace"), !full && leaves, format!("whole space generic {full}, leaf rows {leaves}"));
        ok &= !full && leaves;
    }
    let beta = grid(4, 4, &[2, 3], &[2, 3, 4])?;
    let cert = directsum_liberation(&a, &b, &beta, Kind::Ssp, 1e-8)?;
    r.stage(format!("certify {beta}"), cert.verdict, format!("Sylvester dimension {}", cert.dim));
    let sum = a.matrix().direct_sum(b.matrix());
    let union = pattern_of(&sum, 0.0)?;
    let m = liberate_edges(r, "K1,3 ⊕ K1,3", &sum, &beta, Kind::Ssp, seed)?;
    let list = ordered_list(&m)?;
    let done = list == [1, 1, 4, 1, 1] && pattern_of(&m, 0.0)? == union.add_edges(&beta)?;
    r.stage("liberated list", done, format!("{list:?}"));
    r.claim(
        "the grid liberates two stars sharing a double eigenvalue although neither eigenspace is generic",
        ok && cert.verdict && done,
    );
    Ok(())
}

/// The cover of `P_s □ P_t`: all of the first `H`-column, the second column
/// at rows 2, 3 mod 4, and `(s-1, 2)`.
pub fn path_cover(s: usize) -> Vec<ProductVertex> {
    let mut f: Vec<ProductVertex> = (1..=s).map(|i| ProductVertex(i, 1)).collect();
    f.extend((1..=s).filter(|i| i % 4 == 2 || i % 4 == 3).map(|i| ProductVertex(i, 2)));
    if s >= 2 && !f.contains(&ProductVertex(s - 1, 2)) {
        f.push(ProductVertex(s - 1, 2));
    }
    f
}

pub fn pmpn(r: &mut RunReport, seed: u64) -> Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut all = true;
    for (s, t) in [(2, 3), (3, 4), (4, 5), (5, 5)] {
        let label = format!("P{s} ∪ P{t}");
        let (g, h) = (path(s)?, path(t)?);
        let f = path_cover(s);
        let p = Product::new(&g, &h);
        let cover = is_zf_cover(&p.graph, &p.flatten(&f)?)?;
        let beta = cover_to_bridge(s, t, &f)?;
        let union = g.disjoint_union(&h);
        let graph_yes = is_graph_liberation_set(&union, &beta, Kind::Ssp, 10, seed)?.is_yes();
        r.stage(format!("{label}: cover"), cover && graph_yes, format!("β = {beta}, graph-level {graph_yes}"));

        let shared: Vec<f64> = (0..s).map(|k| k as f64 - 2.0).collect();
        let extra: Vec<f64> = (0..t - s).map(|k| k as f64 - 1.5).collect();
        let a = realize_spectrum(&shared.iter().map(|&v| (v, 1)).collect::<Vec<_>>(), Shape::Path, &mut rng)?;
        let mut bt: Vec<(f64, usize)> = shared.iter().chain(&extra).map(|&v| (v, 1)).collect();
        bt.sort_by(|x, y| x.0.total_cmp(&y.0));
        let b = realize_spectrum(&bt, Shape::Path, &mut rng)?;
        let m = liberate_edges(r, &label, &a.matrix().direct_sum(b.matrix()), &beta, Kind::Ssp, seed)?;
        let list = ordered_list(&m)?;
        let doubles = list.iter().filter(|&&k| k == 2).count();
        let ok = cover && graph_yes && doubles == s && list.iter().all(|&k| k <= 2);
        r.stage(format!("{label}: liberated"), ok, format!("ordered list {list:?}"));
        all &= ok;
    }
    r.claim("the path covers liberate P_s ∪ P_t into a graph carrying s double eigenvalues", all);
    Ok(())
}

pub const PRISM_COVER: &str = "1:1,2:1,3:2,4:2";

pub fn prism(r: &mut RunReport, seed: u64) -> Result<()> {
    let a = SymMatrix::from_rat(&adjacency(&cycle(4)?))?;
    let b = SymMatrix::new(Mat::from_fn(2, 2, |_, _| 1.0))?;
    let f = crate::zeroforcing::parse_product_set(PRISM_COVER)?;
    let z = zf_liberation(&a, &b, &f, Kind::Sap, 1e-8)?;
    let every = z.certificate.checks.iter().all(|c| c.holds && c.full_matrix);
    r.stage("local cover", z.is_cover, format!("F = {{{PRISM_COVER}}}, β = {}", z.beta));
    r.stage("SAP certificate", z.certificate.verdict && every, "every F minus one vertex keeps the SAP".to_string());
    let sum = a.matrix().direct_sum(b.matrix());
    let union = pattern_of(&sum, 0.0)?;
    let beta = EdgeSet::parse(6, &z.beta)?;
    let out = liberate(&sum, &union, &beta, Kind::Sap, &LiberateOptions { seed, ..Default::default() })?;
    let nullity = 6 - numeric_rank(&out.matrix, 1e-9);
    let prism = catalog("prism")?;
    let sap = has_strong_property_f64(&out.matrix, &prism, Kind::Sap, 1e-8)?;
    let ok = out.graph == prism && nullity == 3 && sap;
    r.stage("liberate", ok, format!("{0}x{0}, nullity {nullity}, SAP {sap}", out.matrix.rows()));
    r.claim("the prism carries a nullity-3 matrix with the SAP", z.is_cover && z.certificate.verdict && ok);
    if !(z.is_cover && z.certificate.verdict) {
        return Err(Error::Infeasible("prism cover was not certified".into()));
    }
    Ok(())
}
