//! Liberation sets of matrices and graphs.
//!
//! A nonempty set `β` of nonedges is a liberation set of `A ∈ S(G)` when `A`
//! has the strong property with respect to `G + β'` for every `β'` obtained
//! from `β` by deleting one element. Four equivalent tests are implemented
//! and cross-checked:
//!
//! 1. the definition, through the kernel of `X ↦ [A, X]` on `S^cl_0`;
//! 2. `Ψ[α ∪ {e}, :]` has full row rank for each `e ∈ β`, `α = E(Ḡ) \ β`;
//! 3. `Ψ[α, :]` has full row rank and some `x ∈ Col(Ψ)` has support `β`;
//! 4. with the rows of `β` moved to the bottom, the column reduced echelon
//!    form of `Ψ` has no zero row in its lower right block.

pub mod directsum;
pub mod liberate;
pub mod realize;

use itertools::Itertools;
use num::{BigRational, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exact::{self, int, rank, serialize_opt_rats};
use crate::graph::{EdgeSet, Graph, Pair};
use crate::matrix::RatMatrix;
use crate::par;
use crate::patterns::{sample_s, SamplingMode};
use crate::numeric::Mat;
use crate::strong::{has_strong_property_wrt, has_strong_property_wrt_f64, psi_rows, wrt_by_kernel, Kind, VerificationMatrix};

/// How much of the criteria battery to run.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum CheckMode {
    /// All four criteria, with agreement asserted.
    Full,
    /// The rank test only, plus the witness when it passes.
    Fast,
}

impl Default for CheckMode {
    fn default() -> Self {
        if cfg!(debug_assertions) {
            CheckMode::Full
        } else {
            CheckMode::Fast
        }
    }
}

/// Verdict of each criterion; `None` when not evaluated.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Criteria {
    pub definition: Option<bool>,
    pub rank_test: bool,
    pub witness: Option<bool>,
    pub echelon: Option<bool>,
}

impl Criteria {
    fn agree(&self) -> bool {
        [self.definition, self.witness, self.echelon].iter().flatten().all(|&v| v == self.rank_test)
    }
}

/// Result of the check with respect to `G + (β \ {removed})`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BetaPrimeCheck {
    pub removed: Pair,
    /// Rank of `Ψ[α ∪ {removed}, :]`.
    pub rank: usize,
    pub holds: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LiberationCertificate {
    pub kind: Kind,
    pub beta: Vec<Pair>,
    pub alpha_len: usize,
    pub verdict: bool,
    pub mode: CheckMode,
    pub beta_primes: Vec<BetaPrimeCheck>,
    pub criteria: Criteria,
    /// Values of the witness `x ∈ Col(Ψ)` on the rows of `β`, in `β`'s
    /// order. It vanishes on `α`.
    #[serde(serialize_with = "serialize_opt_rats")]
    pub witness: Option<Vec<BigRational>>,
    pub seed: u64,
}

fn validate_beta(g: &Graph, beta: &EdgeSet) -> Result<()> {
    if beta.is_empty() {
        return Err(Error::EmptyBeta);
    }
    if beta.universe() != g.order() {
        return Err(Error::DimensionMismatch(format!(
            "edge set over {} vertices for a graph on {}",
            beta.universe(),
            g.order()
        )));
    }
    if let Some(p) = beta.pairs().iter().find(|p| g.has_edge(p.0, p.1)) {
        return Err(Error::BetaIntersectsEdges(p.0, p.1));
    }
    Ok(())
}

/// Criterion (3) by elimination: `x = Ψ K c` with `K` a kernel basis of
/// `Ψ[α, :]` and `c` random positive integers. Returns the verdict and, when
/// positive, the witness on the `β` rows.
fn witness_criterion(
    vm: &VerificationMatrix,
    alpha_rows: &[usize],
    beta_rows: &[usize],
    rng: &mut ChaCha8Rng,
) -> Result<(bool, Option<Vec<BigRational>>)> {
    let top = vm.matrix.select_rows(alpha_rows);
    if !exact::full_row_rank(&top) {
        return Ok((false, None));
    }
    let k = exact::kernel_basis(&top);
    let image = vm.matrix.select_rows(beta_rows).mul(&k)?;
    if (0..image.rows()).any(|i| image.row(i).iter().all(Zero::is_zero)) {
        return Ok((false, None));
    }
    for attempt in 0..64 {
        let hi = 10i64 << attempt.min(40);
        let c: Vec<BigRational> = (0..k.cols()).map(|_| int(rng.gen_range(1..=hi))).collect();
        let y = k.mul_vec(&c)?;
        let x = vm.matrix.mul_vec(&y)?;
        let vanishes = alpha_rows.iter().all(|&r| x[r].is_zero());
        let full = beta_rows.iter().all(|&r| !x[r].is_zero());
        if vanishes && full {
            if !exact::col_space_contains(&vm.matrix, &x)? {
                return Err(Error::CriteriaDisagreement("witness is not in Col(Ψ)".into()));
            }
            return Ok((true, Some(beta_rows.iter().map(|&r| x[r].clone()).collect())));
        }
    }
    Err(Error::CriteriaDisagreement("no nowhere-zero combination found in 64 attempts".into()))
}

/// Certifies whether `β` is a liberation set of `A ∈ S(G)`.
pub fn is_liberation_set(
    a: &RatMatrix,
    g: &Graph,
    beta: &EdgeSet,
    kind: Kind,
    mode: CheckMode,
    seed: u64,
) -> Result<LiberationCertificate> {
    validate_beta(g, beta)?;
    let vm = VerificationMatrix::new(a, g, kind)?;
    let beta_rows = vm.rows_of(beta.pairs())?;
    let alpha_rows: Vec<usize> = (0..vm.rows.len()).filter(|r| !beta_rows.contains(r)).collect();

    let mut beta_primes = Vec::with_capacity(beta.len());
    for (k, &e) in beta.pairs().iter().enumerate() {
        let mut rows = alpha_rows.clone();
        rows.push(beta_rows[k]);
        let r = rank(&vm.matrix.select_rows(&rows));
        beta_primes.push(BetaPrimeCheck { removed: e, rank: r, holds: r == rows.len() });
    }
    let rank_test = beta_primes.iter().all(|c| c.holds);

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut criteria = Criteria { definition: None, rank_test, witness: None, echelon: None };
    let mut witness = None;
    if mode == CheckMode::Full {
        let mut definition = true;
        for k in 0..beta.len() {
            let h = g.add_edges(&beta.without(k))?;
            definition &= wrt_by_kernel(a, &h, kind)?;
        }
        criteria.definition = Some(definition);
        let ce = exact::column_echelon(&vm.matrix, &beta_rows)?;
        criteria.echelon = Some(ce.criterion_holds());
    }
    if mode == CheckMode::Full || rank_test {
        let (holds, x) = witness_criterion(&vm, &alpha_rows, &beta_rows, &mut rng)?;
        criteria.witness = Some(holds);
        witness = x;
    }
    if !criteria.agree() {
        return Err(Error::CriteriaDisagreement(format!("{criteria:?} for β = {beta}")));
    }
    Ok(LiberationCertificate {
        kind,
        beta: beta.pairs().to_vec(),
        alpha_len: alpha_rows.len(),
        verdict: rank_test,
        mode,
        beta_primes,
        criteria,
        witness,
        seed,
    })
}

/// The rank test alone, for searches.
pub fn rank_test(a: &RatMatrix, g: &Graph, beta: &[Pair], kind: Kind) -> bool {
    let alpha: Vec<Pair> = g.nonedges().iter().copied().filter(|p| !beta.contains(p)).collect();
    let top = psi_rows(a, &alpha, kind);
    if !exact::full_row_rank(&top) {
        return false;
    }
    let base = top.rows();
    beta.iter().all(|&e| {
        let mut rows = alpha.clone();
        rows.push(e);
        rank(&psi_rows(a, &rows, kind)) == base + 1
    })
}

/// All inclusion-minimal liberation sets with at most `max_size` elements,
/// in order of size and then lexicographically.
pub fn enumerate_minimal_liberation_sets(
    a: &RatMatrix,
    g: &Graph,
    kind: Kind,
    max_size: usize,
) -> Result<Vec<EdgeSet>> {
    let nonedges = g.nonedges();
    if max_size > nonedges.len() {
        return Err(Error::InvalidParameter(format!(
            "max_size {max_size} exceeds the {} nonedges",
            nonedges.len()
        )));
    }
    let mut found: Vec<Vec<Pair>> = Vec::new();
    for size in 1..=max_size {
        let candidates: Vec<Vec<Pair>> = nonedges
            .iter()
            .copied()
            .combinations(size)
            .filter(|c| !found.iter().any(|f| f.iter().all(|p| c.contains(p))))
            .collect();
        let hits = par::map(candidates, |c| rank_test(a, g, &c, kind).then_some(c));
        found.extend(hits.into_iter().flatten());
    }
    found.into_iter().map(|c| EdgeSet::new(g.order(), c)).collect()
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "verdict", rename_all = "kebab-case")]
pub enum GraphVerdict {
    CertifiedCounterexample {
        #[serde(serialize_with = "serialize_matrix")]
        matrix: RatMatrix,
        source: String,
    },
    ProbabilisticYes {
        trials: usize,
    },
}

impl GraphVerdict {
    pub fn is_yes(&self) -> bool {
        matches!(self, GraphVerdict::ProbabilisticYes { .. })
    }
}

pub fn serialize_matrix<S: serde::Serializer>(m: &RatMatrix, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_seq((0..m.rows()).map(|i| m.row(i).iter().map(|x| x.to_string()).collect::<Vec<_>>()))
}

/// Graph-level check: `β` against `trials` samples in each sampling mode.
/// A failing sample is returned as a certified counterexample; otherwise the
/// answer is only probabilistic.
pub fn is_graph_liberation_set(g: &Graph, beta: &EdgeSet, kind: Kind, trials: usize, seed: u64) -> Result<GraphVerdict> {
    is_graph_liberation_set_with(g, beta, kind, trials, seed, &[])
}

/// As [`is_graph_liberation_set`], trying the supplied `candidates` first.
pub fn is_graph_liberation_set_with(
    g: &Graph,
    beta: &EdgeSet,
    kind: Kind,
    trials: usize,
    seed: u64,
    candidates: &[RatMatrix],
) -> Result<GraphVerdict> {
    if trials == 0 {
        return Err(Error::InvalidParameter("trials must be at least 1".into()));
    }
    validate_beta(g, beta)?;
    let check = |a: &RatMatrix| rank_test(a, g, beta.pairs(), kind);
    for (k, a) in candidates.iter().enumerate() {
        if a.rows() != g.order() {
            return Err(Error::DimensionMismatch(format!("candidate {k} has order {}", a.rows())));
        }
        if !check(a) {
            return Ok(GraphVerdict::CertifiedCounterexample { matrix: a.clone(), source: format!("candidate {k}") });
        }
    }
    let jobs: Vec<(SamplingMode, usize)> =
        SamplingMode::ALL.iter().flat_map(|&m| (0..trials).map(move |t| (m, t))).collect();
    let hit = par::find_map_first(&jobs, |&(mode, t)| {
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ ((t as u64) << 8) ^ mode as u64);
        let a = sample_s(g, mode, &mut rng);
        (!check(&a)).then_some((a, mode, t))
    });
    match hit {
        Some((matrix, mode, t)) => {
            Ok(GraphVerdict::CertifiedCounterexample { matrix, source: format!("{mode:?} sample {t}") })
        }
        None => Ok(GraphVerdict::ProbabilisticYes { trials: trials * SamplingMode::ALL.len() }),
    }
}

/// `true` when `A` has the strong property with respect to `G + β'` for every
/// one-element deletion `β'`, straight from the definition.
/// Floating-point version of the definition: `A` has the strong property
/// with respect to `G + β'` for every `β'`, by SVD rank at relative `tol`.
pub fn is_liberation_set_f64(a: &Mat, g: &Graph, beta: &EdgeSet, kind: Kind, tol: f64) -> Result<bool> {
    validate_beta(g, beta)?;
    for k in 0..beta.len() {
        let h = g.add_edges(&beta.without(k))?;
        if !has_strong_property_wrt_f64(a, g, &h, kind, tol)? {
            return Ok(false);
        }
    }
    Ok(true)
}

pub fn definition_holds(a: &RatMatrix, g: &Graph, beta: &EdgeSet, kind: Kind) -> Result<bool> {
    validate_beta(g, beta)?;
    for k in 0..beta.len() {
        let h = g.add_edges(&beta.without(k))?;
        if !has_strong_property_wrt(a, g, &h, kind)? {
            return Ok(false);
        }
    }
    Ok(true)
}
