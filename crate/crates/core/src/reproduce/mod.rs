//! End-to-end reproductions of the worked examples and the six-vertex
//! table. Each target builds its matrices, certifies liberation sets,
//! liberates, and re-verifies pattern and spectrum, recording every stage
//! in a [`RunReport`].

pub mod routes;
pub mod worked;

use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::catalog::catalog;
use crate::error::{Error, Result};
use crate::graph::{EdgeSet, Graph};
use crate::liberation::directsum::RANK_TOL;
use crate::liberation::is_liberation_set_f64;
use crate::liberation::liberate::{liberate, LiberateOptions};
use crate::numeric::{expand_spectrum, multiplicity_list, Mat, SymMatrix};
use crate::par;
use crate::patterns::pattern_of;
use crate::report::RunReport;
use crate::strong::{has_strong_property_f64, Kind};

pub use routes::{route, TABLE};

pub const TARGETS: [&str; 14] = [
    "k4k1", "g151", "g100", "g127g169", "g163", "c6c8", "k14", "k13k13", "g129", "g171", "g175", "pmpn", "prism",
    "table6",
];

/// Clustering tolerance for multiplicity lists of liberated matrices.
pub const LIST_TOL: f64 = 1e-6;

/// Runs one target. Pipeline errors become a failed `error` stage, so the
/// report always says where things stopped.
pub fn reproduce(name: &str, seed: u64) -> Result<RunReport> {
    reproduce_with(name, seed, false)
}

/// As [`reproduce`], optionally recording wall-clock time.
pub fn reproduce_with(name: &str, seed: u64, timings: bool) -> Result<RunReport> {
    if !TARGETS.contains(&name) {
        return Err(Error::InvalidParameter(format!("unknown target `{name}`; known: {}", TARGETS.join(", "))));
    }
    let mut r = RunReport::new("reproduce", seed);
    r.input("target", name);
    let start = Instant::now();
    let outcome = match name {
        "k4k1" => worked::k4k1(&mut r, seed),
        "g151" => worked::g151(&mut r, seed),
        "g100" => table_rows(&mut r, &["G100"], seed, 2).map(|_| ()),
        "g127g169" => table_rows(&mut r, &["G127", "G169"], seed, 2).map(|_| ()),
        "g163" => table_rows(&mut r, &["G163"], seed, 2).map(|_| ()),
        "c6c8" => worked::c6c8(&mut r, seed),
        "k14" => worked::k14(&mut r, seed),
        "k13k13" => worked::k13k13(&mut r, seed),
        "g129" => table_rows(&mut r, &["G129", "G145", "G153"], seed, 2).map(|_| ()),
        "g171" => table_rows(&mut r, &["G171", "G187"], seed, 2).map(|_| ()),
        "g175" => table_rows(&mut r, &["G175"], seed, 2).map(|_| ()),
        "pmpn" => worked::pmpn(&mut r, seed),
        "prism" => worked::prism(&mut r, seed),
        "table6" => table6(&mut r, seed, 2).map(|_| ()),
        _ => unreachable!(),
    };
    if let Err(e) = outcome {
        r.stage("error", false, e.to_string());
    }
    if timings {
        r.time("total", start);
    }
    Ok(r)
}

/// Writes square blocks onto the given 1-based vertices of an `n × n` matrix.
pub fn place(n: usize, blocks: &[(&Mat, &[usize])]) -> Result<Mat> {
    let mut m = Mat::zeros(n, n);
    for (b, idx) in blocks {
        if b.rows() != idx.len() || idx.iter().any(|&v| v == 0 || v > n) {
            return Err(Error::DimensionMismatch(format!("{}x{} block on {idx:?}", b.rows(), b.cols())));
        }
        for (i, &u) in idx.iter().enumerate() {
            for (j, &v) in idx.iter().enumerate() {
                m[(u - 1, v - 1)] = b[(i, j)];
            }
        }
    }
    Ok(m)
}

/// `count` sorted values in `[-3, 3]`, pairwise at least 0.4 apart.
pub fn draw_values<R: Rng>(rng: &mut R, count: usize) -> Vec<f64> {
    loop {
        let mut v: Vec<f64> = (0..count).map(|_| rng.gen_range(-3.0..3.0)).collect();
        v.sort_by(f64::total_cmp);
        if v.windows(2).all(|w| w[1] - w[0] > 0.4) {
            return v;
        }
    }
}

pub fn target(values: &[f64], list: &[usize]) -> Vec<(f64, usize)> {
    values.iter().copied().zip(list.iter().copied()).collect()
}

/// Certifies `beta` for `a` numerically, then liberates.
pub(crate) fn liberate_step(r: &mut RunReport, label: &str, a: &Mat, beta: &str, kind: Kind, seed: u64) -> Result<Mat> {
    let beta = EdgeSet::parse(a.rows(), beta)?;
    liberate_edges(r, label, a, &beta, kind, seed)
}

pub(crate) fn liberate_edges(r: &mut RunReport, label: &str, a: &Mat, beta: &EdgeSet, kind: Kind, seed: u64) -> Result<Mat> {
    let g = pattern_of(a, 0.0)?;
    let certified = is_liberation_set_f64(a, &g, beta, kind, RANK_TOL)?;
    r.stage(format!("{label}: certify {beta}"), certified, format!("{kind} with respect to G + β' for each β'"));
    if !certified {
        return Err(Error::Infeasible(format!("{beta} is not a liberation set in {label}")));
    }
    let out = liberate(a, &g, beta, kind, &LiberateOptions { seed, ..Default::default() })?;
    r.stage(
        format!("{label}: liberate"),
        out.strong,
        format!(
            "step {:.0e}, {} Newton steps, invariant error {:.1e}, smallest pattern entry {:.2e}, {kind} {}",
            out.step, out.newton_steps, out.invariant_error, out.min_pattern_entry, out.strong
        ),
    );
    Ok(out.matrix)
}

#[derive(Clone, Debug, Serialize)]
pub struct Realized {
    pub pattern_ok: bool,
    pub list: Vec<usize>,
    pub spectrum_error: f64,
    pub strong: bool,
}

impl Realized {
    pub fn passed(&self, list: &[usize]) -> bool {
        self.pattern_ok && self.list == list && self.spectrum_error <= 1e-8 && self.strong
    }
}

/// Pattern, spectrum, ordered multiplicity list and strong property of a
/// final matrix.
pub fn inspect(m: &Mat, graph: &Graph, target: &[(f64, usize)], kind: Kind) -> Result<Realized> {
    let pattern_ok = pattern_of(m, 0.0)? == *graph;
    let s = SymMatrix::new(m.clone())?;
    let want = expand_spectrum(target);
    let scale = want.iter().fold(1.0f64, |a, v| a.max(v.abs()));
    let spectrum_error = s.spectrum().iter().zip(&want).fold(0.0f64, |e, (x, y)| e.max((x - y).abs())) / scale;
    let list = multiplicity_list(s.spectrum(), LIST_TOL).ordered().to_vec();
    let strong = has_strong_property_f64(m, graph, kind, 1e-8)?;
    Ok(Realized { pattern_ok, list, spectrum_error, strong })
}

pub(crate) fn check_final(
    r: &mut RunReport,
    label: &str,
    m: &Mat,
    graph: &Graph,
    target: &[(f64, usize)],
) -> Result<bool> {
    let out = inspect(m, graph, target, Kind::Ssp)?;
    let list: Vec<usize> = target.iter().map(|t| t.1).collect();
    let ok = out.passed(&list);
    r.stage(
        format!("{label}: verify"),
        ok,
        format!(
            "pattern {}, list {:?}, spectrum error {:.1e}, SSP {}",
            if out.pattern_ok { "matches" } else { "differs" },
            out.list,
            out.spectrum_error,
            out.strong
        ),
    );
    Ok(ok)
}

#[derive(Clone, Debug, Serialize)]
pub struct CaseOutcome {
    pub graph: String,
    pub list: Vec<usize>,
    pub draw: usize,
    pub values: Vec<f64>,
    pub passed: bool,
    pub achieved: Option<Vec<usize>>,
    pub failure: Option<String>,
}

fn case_seed(seed: u64, row: usize, list: usize, draw: usize) -> u64 {
    seed.wrapping_mul(0x9e37_79b9_7f4a_7c15) ^ ((row as u64) << 32) ^ ((list as u64) << 16) ^ draw as u64
}

/// One table entry: random target values, the graph's route, verification.
pub fn run_case(graph: &str, list: &[usize], draw: usize, seed: u64) -> CaseOutcome {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let values = draw_values(&mut rng, list.len());
    let mut r = RunReport::new("case", seed);
    let result = (|| -> Result<Realized> {
        let m = route(&mut r, graph, list, &values, seed)?;
        let g = catalog(graph)?;
        let t = target(&values, list);
        let out = inspect(&m, &g, &t, Kind::Ssp)?;
        check_final(&mut r, graph, &m, &g, &t)?;
        Ok(out)
    })();
    let (achieved, failure) = match result {
        Ok(out) => (Some(out.list), r.first_failure()),
        Err(e) => (None, Some(r.first_failure().unwrap_or_else(|| e.to_string()))),
    };
    CaseOutcome {
        graph: graph.to_string(),
        list: list.to_vec(),
        draw,
        values,
        passed: failure.is_none() && achieved.as_deref() == Some(list),
        achieved,
        failure,
    }
}

/// Every row of the table, every listed list, `draws` random spectra each.
pub fn table6(r: &mut RunReport, seed: u64, draws: usize) -> Result<Vec<CaseOutcome>> {
    let all: Vec<&str> = TABLE.iter().map(|t| t.0).collect();
    table_rows(r, &all, seed, draws)
}

/// The named rows of the table, fanned out across threads. Case seeds depend
/// only on the row, so a row gives the same draws whichever target runs it.
pub fn table_rows(r: &mut RunReport, graphs: &[&str], seed: u64, draws: usize) -> Result<Vec<CaseOutcome>> {
    if let Some(g) = graphs.iter().find(|g| !TABLE.iter().any(|t| t.0 == **g)) {
        return Err(Error::InvalidParameter(format!("{g} is not a table row")));
    }
    let jobs: Vec<(usize, usize, usize)> = TABLE
        .iter()
        .enumerate()
        .filter(|(_, (g, _))| graphs.contains(g))
        .flat_map(|(row, (_, lists))| (0..lists.len()).flat_map(move |l| (0..draws).map(move |d| (row, l, d))))
        .collect();
    let outcomes = par::map(jobs, |(row, l, d)| {
        let (graph, lists) = TABLE[row];
        run_case(graph, lists[l], d, case_seed(seed, row, l, d))
    });
    for (graph, lists) in TABLE.iter().filter(|(g, _)| graphs.contains(g)) {
        let mine: Vec<&CaseOutcome> = outcomes.iter().filter(|c| c.graph == *graph).collect();
        for c in &mine {
            let values: Vec<String> = c.values.iter().map(|v| format!("{v:.3}")).collect();
            r.stage(
                format!("{graph} {:?} draw {}", c.list, c.draw),
                c.passed,
                c.failure.clone().unwrap_or_else(|| format!("realized on values [{}]", values.join(", "))),
            );
        }
        let shown: Vec<String> = lists.iter().map(|l| format!("{l:?}")).collect();
        r.claim(
            format!("{graph} realizes {} with the SSP for random eigenvalue choices", shown.join(", ")),
            mine.iter().all(|c| c.passed),
        );
    }
    r.certificate("cases", &outcomes);
    Ok(outcomes)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn placing_blocks() {
        let b = Mat::from_rows(vec![vec![1.0, 2.0], vec![2.0, 3.0]]).unwrap();
        let m = place(3, &[(&b, &[3, 1])]).unwrap();
        assert_eq!((m[(2, 2)], m[(2, 0)], m[(0, 0)], m[(1, 1)]), (1.0, 2.0, 3.0, 0.0));
        assert!(place(3, &[(&b, &[1])]).is_err());
    }

    #[test]
    fn drawn_values_are_separated() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for n in 1..=6 {
            let v = draw_values(&mut rng, n);
            assert_eq!(v.len(), n);
            assert!(v.windows(2).all(|w| w[1] - w[0] > 0.4));
        }
    }

    #[test]
    fn unknown_target() {
        assert!(reproduce("nope", 0).is_err());
    }
}
