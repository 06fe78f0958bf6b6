//! Acceptance run: one PASS/FAIL line per criterion with its tolerance and
//! time budget. Budgets are enforced in optimized builds only.

use std::process::ExitCode;
use std::time::Instant;

use num::{BigRational, One, Zero};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use liberatrix::catalog::{catalog, cycle, path};
use liberatrix::exact::{self, col_space_contains, int, int_matrix, poly_gcd};
use liberatrix::graph::{EdgeSet, Graph};
use liberatrix::liberation::directsum::{directsum_liberation, grid, sylvester_space};
use liberatrix::liberation::liberate::{liberate, liberate_rat, LiberateOptions};
use liberatrix::liberation::realize::eigenspaces_generic;
use liberatrix::liberation::{
    definition_holds, is_graph_liberation_set_with, is_liberation_set, CheckMode, GraphVerdict,
};
use liberatrix::matrix::{charpoly, RatMatrix};
use liberatrix::numeric::{numeric_rank, Mat, SymMatrix};
use liberatrix::patterns::{pattern_of, random_rational, sample_s, SamplingMode};
use liberatrix::reproduce::worked::{
    adjacency, c6_matrix, c8_matrix, g151_candidates, g151_member, k14_minor, k4k1_matrix, G151_BETA, PRISM_COVER,
};
use liberatrix::reproduce::{reproduce, TABLE};
use liberatrix::strong::{has_strong_property, has_strong_property_f64, psi, psi_rows, Kind, VerificationMatrix};
use liberatrix::zeroforcing::{parse_product_set, zero_forcing_number, zf_liberation, DEFAULT_BOUND};
use liberatrix::Pair;

const SEED: u64 = 20_240_101;

type Criterion = (&'static str, f64, fn() -> Outcome);

struct Outcome {
    pass: bool,
    detail: String,
    /// Set when a failure is expected and documented.
    known: Option<&'static str>,
}

fn pass(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome { pass, detail: detail.into(), known: None }
}

fn random_graph(rng: &mut ChaCha8Rng, n: usize, p: f64) -> Graph {
    let edges: Vec<(usize, usize)> =
        (1..=n).flat_map(|i| (i + 1..=n).map(move |j| (i, j))).filter(|_| rng.gen_bool(p)).collect();
    Graph::new(n, edges).expect("valid edges")
}

fn c1() -> Outcome {
    let expected = int_matrix(&[
        &[0, 0, 0, -3, 0, 0, 1, 0, 1, 1],
        &[0, 0, 0, 1, 0, 0, -3, 0, 1, 1],
        &[0, 0, 0, 1, 0, 0, 1, 0, -3, 1],
        &[0, 0, 0, 1, 0, 0, 1, 0, 1, -3],
    ]);
    let got = psi(&k4k1_matrix(), &catalog("K4uK1").unwrap(), Kind::Ssp).unwrap();
    pass(got == expected, format!("{}x{} exact, entrywise equal {}", got.rows(), got.cols(), got == expected))
}

fn c2() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let (mut yes, mut no, mut bad) = (0, 0, Vec::new());
    let mut k = 0u64;
    while yes + no + bad.len() < 300 {
        k += 1;
        let n = rng.gen_range(3..=7);
        let p = rng.gen_range(0.3..0.8);
        let g = random_graph(&mut rng, n, p);
        let nonedges = g.nonedges().to_vec();
        if nonedges.is_empty() {
            continue;
        }
        let mode = SamplingMode::ALL[(k % 3) as usize];
        let kind = if k.is_multiple_of(4) { Kind::Sap } else { Kind::Ssp };
        let a = sample_s(&g, mode, &mut rng);
        let size = rng.gen_range(1..=nonedges.len().min(4));
        let beta = EdgeSet::new(n, nonedges.choose_multiple(&mut rng, size).copied()).unwrap();
        match is_liberation_set(&a, &g, &beta, kind, CheckMode::Full, k) {
            Err(e) => bad.push(format!("instance {k}: {e}")),
            Ok(cert) => {
                let c = &cert.criteria;
                let agree = [c.definition, c.witness, c.echelon].iter().all(|v| *v == Some(c.rank_test));
                // the witness lives in Col(Ψ) and is supported exactly on β
                let witness_ok = match &cert.witness {
                    None => !cert.verdict,
                    Some(w) => {
                        let vm = VerificationMatrix::new(&a, &g, kind).unwrap();
                        let mut x = vec![BigRational::zero(); vm.rows.len()];
                        for (p, v) in beta.pairs().iter().zip(w) {
                            x[vm.row_of(*p).unwrap()] = v.clone();
                        }
                        w.iter().all(|v| !v.is_zero()) && col_space_contains(&vm.matrix, &x).unwrap()
                    }
                };
                if !(agree && witness_ok) {
                    bad.push(format!("instance {k}: {c:?}, witness ok {witness_ok}"));
                } else if cert.verdict {
                    yes += 1;
                } else {
                    no += 1;
                }
            }
        }
    }
    pass(bad.is_empty(), format!("300 instances, {yes} liberation sets, {no} not, {} disagreements {:?}", bad.len(), bad.first()))
}

fn c3() -> Outcome {
    let a = k4k1_matrix();
    let g = catalog("K4uK1").unwrap();
    let beta = EdgeSet::parse(5, "3-5,4-5").unwrap();
    let out = liberate_rat(&a, &g, &beta, Kind::Ssp, &LiberateOptions { seed: SEED, ..Default::default() }).unwrap();
    // t^3 (t - 4)^2, lowest degree first
    let want = [0.0, 0.0, 0.0, 16.0, -8.0, 1.0];
    let got = charpoly(&out.matrix).unwrap();
    let coef = want.iter().zip(&got).fold(0.0f64, |e, (x, y)| e.max((x - y).abs()));
    let target = g.add_edges(&beta).unwrap();
    let m = &out.matrix;
    let (mut smallest, mut off_zero) = (f64::INFINITY, true);
    for i in 0..5 {
        for j in i + 1..5 {
            if target.has_edge(i + 1, j + 1) {
                smallest = smallest.min(m[(i, j)].abs());
            } else {
                off_zero &= m[(i, j)] == 0.0 && m[(j, i)] == 0.0;
            }
        }
    }
    pass(
        coef <= 1e-9 && smallest >= 1e-6 && off_zero && pattern_of(m, 0.0).unwrap() == target,
        format!("char-poly |Δ| {coef:.1e} (≤ 1e-9), smallest pattern entry {smallest:.2e} (≥ 1e-6), off-pattern exactly 0 {off_zero}"),
    )
}

fn c4() -> Outcome {
    let base = catalog("G151-base").unwrap();
    let beta = EdgeSet::parse(6, G151_BETA).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let mut certified = 0;
    for k in 0..50 {
        let m = g151_member(&random_rational(&mut rng), &random_rational(&mut rng), &random_rational(&mut rng));
        assert_eq!(pattern_of(&m, 0.0).unwrap(), base);
        if is_liberation_set(&m, &base, &beta, Kind::Ssp, CheckMode::Full, k).unwrap().verdict {
            certified += 1;
        }
    }
    let verdict = is_graph_liberation_set_with(&base, &beta, Kind::Ssp, 50, SEED, &g151_candidates()).unwrap();
    let counter = match &verdict {
        GraphVerdict::CertifiedCounterexample { matrix, .. } => {
            pattern_of(matrix, 0.0).unwrap() == base && !definition_holds(matrix, &base, &beta, Kind::Ssp).unwrap()
        }
        GraphVerdict::ProbabilisticYes { .. } => false,
    };
    pass(certified == 50 && counter, format!("{certified}/50 family members certified, counterexample found and re-checked {counter}"))
}

fn c5() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let mut ok = 0;
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
        let e = |i: usize| -a[(i - 1, 4)].clone();
        // expected 4x4 block, rows 1-4, 2-3, 2-4, 3-4
        let z = BigRational::zero;
        let expected = RatMatrix::from_rows(vec![
            vec![e(4), z(), z(), e(1)],
            vec![z(), e(3), e(2), z()],
            vec![z(), e(4), z(), e(2)],
            vec![z(), z(), e(4), e(3)],
        ])
        .unwrap();
        let rows = [Pair(1, 4), Pair(2, 3), Pair(2, 4), Pair(3, 4)];
        let cols: Vec<usize> = (1..=4).map(|i| Pair(i, 5).lex_index(5)).collect();
        let block = psi_rows(&a, &rows, Kind::Ssp).select_cols(&cols);
        let formula = -int(2) * &a[(1, 4)] * &a[(2, 4)] * &a[(3, 4)] * &a[(3, 4)];
        if block == expected && k14_minor(&a).unwrap() == formula && exact::det(&expected).unwrap() == formula {
            ok += 1;
        }
    }
    pass(ok == 20, format!("{ok}/20 samples: block matches the expected form and det = -2·a25·a35·a45² exactly"))
}

fn c6() -> Outcome {
    let a = SymMatrix::new(c6_matrix().unwrap()).unwrap();
    let b = SymMatrix::new(c8_matrix().unwrap()).unwrap();
    let s3 = 3f64.sqrt();
    let t = (2.0f64 / 3.0).sqrt();
    let err = |s: &SymMatrix, w: &[f64]| s.spectrum().iter().zip(w).fold(0.0f64, |e, (x, y)| e.max((x - y).abs()));
    let ea = err(&a, &[-s3, -s3, 0.0, 0.0, s3, s3]);
    let eb = err(&b, &[-2.0, -2.0, -t, -t, t, t, 2.0, 2.0]);
    let ga = eigenspaces_generic(&a, 1e-8).unwrap();
    let gb = eigenspaces_generic(&b, 1e-8).unwrap();
    let generic = ga == [true, false, true] && gb.iter().all(|&x| x);
    // s = μ1 - λ1
    let shifted = a.shifted(-2.0 + s3);
    let dim = sylvester_space(&shifted, &b, 1e-8).unwrap().dim();
    let mut certified = true;
    let mut lists = Vec::new();
    let sum = shifted.matrix().direct_sum(b.matrix());
    let union = pattern_of(&sum, 0.0).unwrap();
    for (rows, cols) in [(vec![2, 3], vec![2, 3, 4]), (vec![2, 3, 6], vec![3, 7])] {
        let beta = grid(6, 8, &rows, &cols).unwrap();
        let cert = directsum_liberation(&shifted, &b, &beta, Kind::Ssp, 1e-8).unwrap();
        let ok = cert.verdict && cert.checks.iter().all(|c| c.full_matrix);
        certified &= ok;
        if ok {
            let out = liberate(&sum, &union, &beta, Kind::Ssp, &LiberateOptions { seed: SEED, ..Default::default() });
            lists.push(out.map(|o| SymMatrix::new(o.matrix).unwrap().multiplicities(1e-6).ordered().to_vec()).ok());
        }
    }
    let a_ssp = has_strong_property(&liberatrix::reproduce::worked::c6_exact(), &cycle(6).unwrap(), Kind::Ssp).unwrap();
    let report = reproduce("c6c8", SEED).unwrap();
    let substitute = report.claims.iter().any(|c| c.statement.starts_with("with a C6 matrix") && c.passed);
    let rest = ea <= 1e-9 && eb <= 1e-9 && generic && dim == 4;
    let detail = format!(
        "spectra |Δ| {ea:.1e}, {eb:.1e} (≤ 1e-9), genericity {ga:?}/{gb:?}, Sylvester dim {dim}, grids certified {certified}, lists {lists:?}, same-spectrum SSP substitute {substitute}"
    );
    let all = rest && certified && lists.iter().all(|l| l.as_deref() == Some(&[4, 2, 2, 2, 2, 2][..]));
    if !all && rest && !certified && !a_ssp.answer && substitute {
        return Outcome {
            pass: false,
            detail,
            known: Some("the closed-form C6 matrix lacks the SSP (exact Ψ nullity 1), so the grids are not liberation sets of that pair"),
        };
    }
    pass(all, detail)
}

fn c7() -> Outcome {
    let z = |name: &str| zero_forcing_number(&catalog(name).unwrap(), DEFAULT_BOUND).unwrap().value;
    let paths = (2..=8).all(|n| zero_forcing_number(&path(n).unwrap(), DEFAULT_BOUND).unwrap().value == 1);
    let cycles = (3..=8).all(|n| zero_forcing_number(&cycle(n).unwrap(), DEFAULT_BOUND).unwrap().value == 2);
    let (a, b, c) = (z("P3xP4"), z("C4xP2"), z("C3xC3"));
    pass(
        paths && cycles && a == 3 && b == 4 && c == 5,
        format!("Z(Pn)=1 {paths}, Z(Cn)=2 {cycles}, Z(P3□P4)={a}, Z(C4□P2)={b}, Z(C3□C3)={c}"),
    )
}

fn c8() -> Outcome {
    let a = SymMatrix::from_rat(&adjacency(&cycle(4).unwrap())).unwrap();
    let b = SymMatrix::new(Mat::from_fn(2, 2, |_, _| 1.0)).unwrap();
    let z = zf_liberation(&a, &b, &parse_product_set(PRISM_COVER).unwrap(), Kind::Sap, 1e-8).unwrap();
    let every = z.certificate.checks.iter().all(|c| c.holds && c.full_matrix);
    let sum = a.matrix().direct_sum(b.matrix());
    let union = pattern_of(&sum, 0.0).unwrap();
    let beta = EdgeSet::parse(6, &z.beta).unwrap();
    let out = liberate(&sum, &union, &beta, Kind::Sap, &LiberateOptions { seed: SEED, ..Default::default() }).unwrap();
    let prism = catalog("prism").unwrap();
    let order = out.matrix.rows();
    let nullity = order - numeric_rank(&out.matrix, 1e-9);
    let sap = has_strong_property_f64(&out.matrix, &prism, Kind::Sap, 1e-8).unwrap();
    let six = z.is_cover && every && out.graph == prism && nullity == 3 && sap;
    let detail = format!(
        "local cover {}, SAP certificate on every F minus one {every}, liberated {order}x{order} nullity {nullity} SAP {sap}",
        z.is_cover
    );
    if order == 8 {
        return pass(six, detail);
    }
    Outcome {
        pass: false,
        detail,
        known: six.then_some("the prism has 6 vertices, so S(prism) has no 8x8 members; the 6x6 nullity-3 SAP matrix is produced"),
    }
}

fn c9() -> Outcome {
    let r = reproduce("table6", SEED).unwrap();
    let rows = r.claims.iter().filter(|c| c.passed).count();
    let cases = r.stages.len();
    pass(
        r.verdict && rows == TABLE.len(),
        format!("{rows}/{} rows pass, {cases} cases (two draws per list), first failure {:?}", TABLE.len(), r.first_failure()),
    )
}

fn c10() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let (mut pairs, mut agree, mut coprime) = (0, 0, 0);
    while pairs < 100 {
        let (na, nb) = (rng.gen_range(2..=4), rng.gen_range(1..=3));
        let (ga, gb) = (random_graph(&mut rng, na, 0.6), random_graph(&mut rng, nb, 0.6));
        let a = sample_s(&ga, SamplingMode::RandomRational, &mut rng);
        let b = match pairs % 3 {
            // a relabeled copy shares every eigenvalue
            0 => {
                let mut perm: Vec<usize> = (0..a.rows()).collect();
                perm.shuffle(&mut rng);
                a.permuted(&perm).unwrap()
            }
            1 => a.shifted(&int(rng.gen_range(-2..=2))),
            _ => sample_s(&gb, SamplingMode::RandomRational, &mut rng),
        };
        let gb = pattern_of(&b, 0.0).unwrap();
        if !has_strong_property(&a, &ga, Kind::Ssp).unwrap().answer || !has_strong_property(&b, &gb, Kind::Ssp).unwrap().answer {
            continue;
        }
        pairs += 1;
        let sum = a.direct_sum(&b);
        let ssp = has_strong_property(&sum, &ga.disjoint_union(&gb), Kind::Ssp).unwrap().answer;
        let gcd = poly_gcd(&exact::charpoly(&a).unwrap(), &exact::charpoly(&b).unwrap());
        let one = gcd.len() == 1 && gcd[0].is_one();
        coprime += usize::from(one);
        agree += usize::from(ssp == one);
    }
    pass(agree == 100, format!("{agree}/100 pairs agree ({coprime} coprime, {} sharing an eigenvalue)", 100 - coprime))
}

fn c11() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let mut same = 0;
    for k in 0..50 {
        let n = rng.gen_range(2..=6);
        let g = random_graph(&mut rng, n, 0.5);
        let a = sample_s(&g, SamplingMode::ALL[k % 3], &mut rng);
        let s = random_rational(&mut rng);
        if psi(&a.shifted(&s), &g, Kind::Ssp).unwrap() == psi(&a, &g, Kind::Ssp).unwrap() {
            same += 1;
        }
    }
    pass(same == 50, format!("{same}/50 exact equalities"))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 11] = [
        ("Ψ fidelity on K4 ∪ K1", 1.0, c1),
        ("four liberation criteria agree", 60.0, c2),
        ("k4k1 liberation", 5.0, c3),
        ("G151 family and counterexample", 30.0, c4),
        ("K1,4 determinant", 2.0, c5),
        ("C6/C8 direct sum", 60.0, c6),
        ("zero forcing numbers", 120.0, c7),
        ("prism SAP", 30.0, c8),
        ("six-vertex table", 600.0, c9),
        ("direct sums and coprime char-polys", 60.0, c10),
        ("shift invariance of Ψ", 5.0, c11),
    ];
    let enforce_time = !cfg!(debug_assertions);
    let mut failed = Vec::new();
    for (k, (name, budget, f)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let out = f();
        let secs = start.elapsed().as_secs_f64();
        let on_time = secs <= *budget;
        let pass = out.pass && (on_time || !enforce_time);
        let status = match (pass, out.known) {
            (true, _) => "PASS".to_string(),
            (false, Some(why)) => format!("FAIL (known: {why})"),
            (false, None) => "FAIL".to_string(),
        };
        let clock = if on_time { "" } else { " over budget" };
        println!("criterion {:>2} {status}: {name}; {}; {secs:.2}s of {budget}s{clock}", k + 1, out.detail);
        if !pass && out.known.is_none() {
            failed.push(k + 1);
        }
    }
    if failed.is_empty() {
        ExitCode::SUCCESS
    } else {
        println!("unexpected failures: {failed:?}");
        ExitCode::FAILURE
    }
}
