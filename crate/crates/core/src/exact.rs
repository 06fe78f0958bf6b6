//! Exact rational linear algebra: reduced echelon forms, rank, kernels and
//! column-space membership. Pivots are the first nonzero entry in column
//! order, so echelon forms are reproducible.

use num::{BigInt, BigRational, One, Signed, Zero};
use rand::Rng;

use crate::error::{Error, Result};
use crate::matrix::{DenseMatrix, RatMatrix};

pub fn int(k: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(k))
}

/// `p/q` in lowest terms. Panics on `q == 0`.
pub fn rat(p: i64, q: i64) -> BigRational {
    BigRational::new(BigInt::from(p), BigInt::from(q))
}

/// Matrix from integer rows (test and example convenience).
pub fn int_matrix(rows: &[&[i64]]) -> RatMatrix {
    let rows = rows.iter().map(|r| r.iter().map(|&x| int(x)).collect()).collect();
    DenseMatrix::from_rows(rows).expect("rectangular literal")
}

#[derive(Clone, Debug, PartialEq)]
pub struct Rref {
    pub r: RatMatrix,
    pub pivots: Vec<usize>,
}

impl Rref {
    pub fn rank(&self) -> usize {
        self.pivots.len()
    }
}

pub fn rref(m: &RatMatrix) -> Rref {
    let mut r = m.clone();
    let (rows, cols) = (r.rows(), r.cols());
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..cols {
        if row == rows {
            break;
        }
        let Some(p) = (row..rows).find(|&i| !r[(i, col)].is_zero()) else {
            continue;
        };
        r.swap_rows(row, p);
        let inv = r[(row, col)].recip();
        for x in r.row_mut(row) {
            *x = &*x * &inv;
        }
        let pivot_row = r.row(row).to_vec();
        for i in 0..rows {
            if i == row || r[(i, col)].is_zero() {
                continue;
            }
            let f = r[(i, col)].clone();
            for (x, p) in r.row_mut(i).iter_mut().zip(&pivot_row).skip(col) {
                if !p.is_zero() {
                    *x = &*x - &f * p;
                }
            }
        }
        pivots.push(col);
        row += 1;
    }
    Rref { r, pivots }
}

pub fn rank(m: &RatMatrix) -> usize {
    if m.rows() == 0 || m.cols() == 0 {
        return 0;
    }
    // Eliminating along the shorter side is cheaper.
    if m.rows() > m.cols() {
        rref(&m.transpose()).rank()
    } else {
        rref(m).rank()
    }
}

pub fn full_row_rank(m: &RatMatrix) -> bool {
    rank(m) == m.rows()
}

/// Columns span `{x : Mx = 0}`; returned as a `cols × nullity` matrix.
pub fn kernel_basis(m: &RatMatrix) -> RatMatrix {
    let Rref { r, pivots } = rref(m);
    let n = m.cols();
    let free: Vec<usize> = (0..n).filter(|c| !pivots.contains(c)).collect();
    let mut k = RatMatrix::zeros(n, free.len());
    for (t, &f) in free.iter().enumerate() {
        k[(f, t)] = BigRational::one();
        for (i, &p) in pivots.iter().enumerate() {
            k[(p, t)] = -r[(i, f)].clone();
        }
    }
    k
}

/// Basis of `{y : yᵀM = 0}` as the rows of the result.
pub fn left_kernel_basis(m: &RatMatrix) -> RatMatrix {
    kernel_basis(&m.transpose()).transpose()
}

/// One solution of `My = x`, or `None` when `x ∉ Col(M)`.
pub fn solve(m: &RatMatrix, x: &[BigRational]) -> Result<Option<Vec<BigRational>>> {
    if x.len() != m.rows() {
        return Err(Error::DimensionMismatch(format!("{} rows vs vector of length {}", m.rows(), x.len())));
    }
    let aug = DenseMatrix::from_fn(m.rows(), m.cols() + 1, |i, j| {
        if j < m.cols() {
            m[(i, j)].clone()
        } else {
            x[i].clone()
        }
    });
    let Rref { r, pivots } = rref(&aug);
    if pivots.last() == Some(&m.cols()) {
        return Ok(None);
    }
    let mut y = vec![BigRational::zero(); m.cols()];
    for (i, &p) in pivots.iter().enumerate() {
        y[p] = r[(i, m.cols())].clone();
    }
    Ok(Some(y))
}

/// `x ∈ Col(M)` decided by `rank([M | x]) = rank(M)`.
pub fn col_space_contains(m: &RatMatrix, x: &[BigRational]) -> Result<bool> {
    if x.len() != m.rows() {
        return Err(Error::DimensionMismatch(format!("{} rows vs vector of length {}", m.rows(), x.len())));
    }
    let aug = DenseMatrix::from_fn(m.rows(), m.cols() + 1, |i, j| {
        if j < m.cols() {
            m[(i, j)].clone()
        } else {
            x[i].clone()
        }
    });
    Ok(rank(&aug) == rank(m))
}

/// Column reduced echelon form of `M` after moving `bottom_rows` to the bottom.
#[derive(Clone, Debug)]
pub struct ColumnEchelon {
    /// Row `k` of `e` is row `row_order[k]` of the input.
    pub row_order: Vec<usize>,
    pub e: RatMatrix,
    pub top: usize,
    /// The top rows are independent, so `e` has the `[[I, O], [?, B]]` shape.
    pub top_independent: bool,
    pub block_b: RatMatrix,
}

impl ColumnEchelon {
    /// Indices (into the bottom rows) of zero rows of `B`.
    pub fn zero_rows_of_b(&self) -> Vec<usize> {
        (0..self.block_b.rows())
            .filter(|&i| self.block_b.row(i).iter().all(Zero::is_zero))
            .collect()
    }

    /// The criterion: top rows independent and no zero row in `B`.
    pub fn criterion_holds(&self) -> bool {
        self.top_independent && self.zero_rows_of_b().is_empty()
    }
}

pub fn column_echelon(m: &RatMatrix, bottom_rows: &[usize]) -> Result<ColumnEchelon> {
    if let Some(&bad) = bottom_rows.iter().find(|&&r| r >= m.rows()) {
        return Err(Error::DimensionMismatch(format!("row {bad} out of range for {} rows", m.rows())));
    }
    let mut row_order: Vec<usize> = (0..m.rows()).filter(|r| !bottom_rows.contains(r)).collect();
    let top = row_order.len();
    row_order.extend_from_slice(bottom_rows);
    let w = m.select_rows(&row_order);
    let Rref { r, pivots } = rref(&w.transpose());
    let e = r.transpose();
    let top_independent = pivots.len() >= top && pivots[..top].iter().enumerate().all(|(k, &p)| k == p);
    let bottom: Vec<usize> = (top..m.rows()).collect();
    let right: Vec<usize> = (top.min(e.cols())..e.cols()).collect();
    let block_b = e.submatrix(&bottom, &right);
    Ok(ColumnEchelon { row_order, e, top, top_independent, block_b })
}

/// A vector in `Col(M)` that vanishes on the top rows and is nowhere zero on
/// the bottom rows, from a random positive integer combination of the columns
/// of `B`. Coordinates are in the original row order. `None` when the
/// criterion fails or no attempt succeeds.
pub fn witness_from_echelon<R: Rng>(ce: &ColumnEchelon, rng: &mut R, attempts: usize) -> Option<Vec<BigRational>> {
    if !ce.criterion_holds() {
        return None;
    }
    let b = &ce.block_b;
    for attempt in 0..attempts {
        let hi = 10i64 << attempt.min(20);
        let c: Vec<BigRational> = (0..b.cols()).map(|_| int(rng.gen_range(1..=hi))).collect();
        let xb = b.mul_vec(&c).ok()?;
        if xb.iter().all(|v| !v.is_zero()) {
            let mut x = vec![BigRational::zero(); ce.row_order.len()];
            for (k, v) in xb.into_iter().enumerate() {
                x[ce.row_order[ce.top + k]] = v;
            }
            return Some(x);
        }
    }
    None
}

pub fn det(m: &RatMatrix) -> Result<BigRational> {
    if !m.is_square() {
        return Err(Error::DimensionMismatch("determinant of a non-square matrix".into()));
    }
    let mut a = m.clone();
    let n = a.rows();
    let mut d = BigRational::one();
    for col in 0..n {
        let Some(p) = (col..n).find(|&i| !a[(i, col)].is_zero()) else {
            return Ok(BigRational::zero());
        };
        if p != col {
            a.swap_rows(p, col);
            d = -d;
        }
        let piv = a[(col, col)].clone();
        d *= &piv;
        for i in col + 1..n {
            if a[(i, col)].is_zero() {
                continue;
            }
            let f = &a[(i, col)] / &piv;
            for j in col..n {
                let v = &a[(i, j)] - &f * &a[(col, j)];
                a[(i, j)] = v;
            }
        }
    }
    Ok(d)
}

/// Polynomials are coefficient vectors, lowest degree first, without
/// trailing zeros (the zero polynomial is empty).
pub type RatPoly = Vec<BigRational>;

fn trim(p: &mut RatPoly) {
    while p.last().is_some_and(Zero::is_zero) {
        p.pop();
    }
}

fn poly_rem(a: &RatPoly, b: &RatPoly) -> RatPoly {
    let mut r = a.clone();
    trim(&mut r);
    let lead = b.last().expect("nonzero divisor").clone();
    while r.len() >= b.len() {
        let shift = r.len() - b.len();
        let f = r.last().expect("nonempty") / &lead;
        for (k, c) in b.iter().enumerate() {
            r[shift + k] = &r[shift + k] - &f * c;
        }
        trim(&mut r);
    }
    r
}

/// Monic greatest common divisor.
pub fn poly_gcd(a: &RatPoly, b: &RatPoly) -> RatPoly {
    let (mut x, mut y) = (a.clone(), b.clone());
    trim(&mut x);
    trim(&mut y);
    while !y.is_empty() {
        let r = poly_rem(&x, &y);
        x = y;
        y = r;
    }
    if let Some(lead) = x.last().cloned() {
        for c in &mut x {
            *c = &*c / &lead;
        }
    }
    x
}

/// Characteristic polynomial `det(tI - M)`, lowest degree first.
pub fn charpoly(m: &RatMatrix) -> Result<RatPoly> {
    let mut p = crate::matrix::charpoly(m)?;
    trim(&mut p);
    Ok(p)
}

pub fn parse_rational(s: &str) -> Result<BigRational> {
    let s = s.trim();
    let bad = || Error::Parse(format!("bad rational {s:?}"));
    if let Some((p, q)) = s.split_once('/') {
        let p: BigInt = p.trim().parse().map_err(|_| bad())?;
        let q: BigInt = q.trim().parse().map_err(|_| bad())?;
        if q.is_zero() {
            return Err(bad());
        }
        return Ok(BigRational::new(p, q));
    }
    if let Some((whole, frac)) = s.split_once('.') {
        let negative = whole.trim_start().starts_with('-');
        let digits = format!("{}{}", whole.trim_start_matches(['-', '+']), frac);
        if digits.is_empty() || !digits.chars().all(|c| c.is_ascii_digit()) {
            return Err(bad());
        }
        let mut v = BigRational::new(digits.parse().map_err(|_| bad())?, num::pow(BigInt::from(10), frac.len()));
        if negative {
            v = -v;
        }
        return Ok(v);
    }
    Ok(BigRational::from_integer(s.parse().map_err(|_| bad())?))
}

/// Matrix text format: `r c` header then `r` lines of `c` entries
/// (`p/q`, integers or decimals).
pub fn parse_rat_matrix(text: &str) -> Result<RatMatrix> {
    let mut tokens = text.split_whitespace();
    let mut dim = |what: &str| -> Result<usize> {
        tokens
            .next()
            .ok_or_else(|| Error::Parse(format!("missing {what}")))?
            .parse()
            .map_err(|_| Error::Parse(format!("bad {what}")))
    };
    let r = dim("row count")?;
    let c = dim("column count")?;
    let entries = tokens.map(parse_rational).collect::<Result<Vec<_>>>()?;
    if entries.len() != r * c {
        return Err(Error::Parse(format!("expected {} entries, found {}", r * c, entries.len())));
    }
    DenseMatrix::from_vec(r, c, entries)
}

/// Exact-size check used by callers that need nonzero entries to be nonzero.
pub fn is_nowhere_zero(v: &[BigRational]) -> bool {
    v.iter().all(|x| !x.is_zero())
}

pub fn max_abs(v: &[BigRational]) -> BigRational {
    v.iter().map(|x| x.abs()).max().unwrap_or_else(BigRational::zero)
}

/// Serializes rationals as `"p/q"` (or `"p"`) strings.
pub fn serialize_rats<S: serde::Serializer>(v: &[BigRational], s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_seq(v.iter().map(|x| x.to_string()))
}

pub fn serialize_opt_rats<S: serde::Serializer>(
    v: &Option<Vec<BigRational>>,
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    match v {
        Some(v) => serialize_rats(v, s),
        None => s.serialize_none(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn k4k1_psi() -> RatMatrix {
        int_matrix(&[
            &[0, 0, 0, -3, 0, 0, 1, 0, 1, 1],
            &[0, 0, 0, 1, 0, 0, -3, 0, 1, 1],
            &[0, 0, 0, 1, 0, 0, 1, 0, -3, 1],
            &[0, 0, 0, 1, 0, 0, 1, 0, 1, -3],
        ])
    }

    /// Rank as the largest nonvanishing minor, by brute force.
    fn minor_rank(m: &RatMatrix) -> usize {
        fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
            if k == 0 {
                return vec![vec![]];
            }
            if n < k {
                return vec![];
            }
            let mut out = subsets(n - 1, k);
            for mut s in subsets(n - 1, k - 1) {
                s.push(n - 1);
                out.push(s);
            }
            out
        }
        let top = m.rows().min(m.cols());
        for k in (1..=top).rev() {
            for rs in subsets(m.rows(), k) {
                for cs in subsets(m.cols(), k) {
                    if !det(&m.submatrix(&rs, &cs)).unwrap().is_zero() {
                        return k;
                    }
                }
            }
        }
        0
    }

    #[test]
    fn basic_ranks() {
        let i3 = RatMatrix::identity(3);
        let r = rref(&i3);
        assert_eq!(r.r, i3);
        assert_eq!(r.rank(), 3);
        assert_eq!(rank(&RatMatrix::zeros(3, 4)), 0);
        let psi = k4k1_psi();
        assert_eq!(rank(&psi), 3);
        assert_eq!(minor_rank(&psi), 3);
    }

    #[test]
    fn kernel_and_membership() {
        let m = int_matrix(&[&[1, 1]]);
        let k = kernel_basis(&m);
        assert_eq!(k.cols(), 1);
        assert_eq!(k[(0, 0)], -k[(1, 0)].clone());
        assert!(col_space_contains(&RatMatrix::identity(2), &[int(1), int(1)]).unwrap());
        let x = [int(0), int(0), int(1), int(-1)];
        assert!(col_space_contains(&k4k1_psi(), &x).unwrap());
        assert!(!col_space_contains(&k4k1_psi(), &[int(1), int(0), int(0), int(0)]).unwrap());
        assert!(col_space_contains(&k4k1_psi(), &[int(1)]).is_err());
    }

    #[test]
    fn k4k1_column_echelon() {
        let ce = column_echelon(&k4k1_psi(), &[2, 3]).unwrap();
        assert!(ce.top_independent);
        assert!(ce.criterion_holds());
        // Matches the displayed column echelon form with α on top.
        let expect = int_matrix(&[
            &[1, 0, 0, 0, 0, 0, 0, 0, 0, 0],
            &[0, 1, 0, 0, 0, 0, 0, 0, 0, 0],
            &[0, 0, 1, 0, 0, 0, 0, 0, 0, 0],
            &[-1, -1, -1, 0, 0, 0, 0, 0, 0, 0],
        ]);
        assert_eq!(ce.e, expect);
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let x = witness_from_echelon(&ce, &mut rng, 10).unwrap();
        assert!(x[0].is_zero() && x[1].is_zero() && !x[2].is_zero() && !x[3].is_zero());
        assert!(col_space_contains(&k4k1_psi(), &x).unwrap());
    }

    #[test]
    fn echelon_small_cases() {
        let ce = column_echelon(&RatMatrix::identity(2), &[1]).unwrap();
        assert!(ce.criterion_holds());
        let m = int_matrix(&[&[1, 0], &[0, 0]]);
        let ce = column_echelon(&m, &[1]).unwrap();
        assert_eq!(ce.zero_rows_of_b(), vec![0]);
        assert!(!ce.criterion_holds());
    }

    #[test]
    fn determinants_and_polynomials() {
        let m = int_matrix(&[&[2, 1], &[1, 2]]);
        assert_eq!(det(&m).unwrap(), int(3));
        // t^2 - 4t + 3
        assert_eq!(charpoly(&m).unwrap(), vec![int(3), int(-4), int(1)]);
        let g = poly_gcd(&vec![int(3), int(-4), int(1)], &vec![int(-1), int(1)]);
        assert_eq!(g, vec![int(-1), int(1)]);
        let g = poly_gcd(&vec![int(3), int(-4), int(1)], &vec![int(2), int(1)]);
        assert_eq!(g, vec![int(1)]);
    }

    #[test]
    fn parsing() {
        assert_eq!(parse_rational("-3/6").unwrap(), rat(-1, 2));
        assert_eq!(parse_rational("-1.25").unwrap(), rat(-5, 4));
        assert_eq!(parse_rational("7").unwrap(), int(7));
        assert!(parse_rational("1/0").is_err());
        let m = parse_rat_matrix("2 2\n1 1/2\n0.5 -3\n").unwrap();
        assert_eq!(m[(0, 1)], rat(1, 2));
        assert_eq!(m[(1, 0)], rat(1, 2));
        assert!(parse_rat_matrix("2 2\n1 2 3").is_err());
    }

    fn arb_matrix(max_r: usize, max_c: usize) -> impl Strategy<Value = RatMatrix> {
        (1..=max_r, 1..=max_c).prop_flat_map(|(r, c)| {
            proptest::collection::vec((-3i64..=3, 1i64..=3), r * c).prop_map(move |v| {
                let data = v.into_iter().map(|(p, q)| rat(p, q)).collect();
                RatMatrix::from_vec(r, c, data).unwrap()
            })
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(500))]
        #[test]
        fn rank_of_transpose(m in arb_matrix(8, 12)) {
            prop_assert_eq!(rank(&m), rank(&m.transpose()));
        }
    }

    proptest! {
        #[test]
        fn rref_is_idempotent(m in arb_matrix(6, 8)) {
            let once = rref(&m);
            prop_assert_eq!(rref(&once.r).r, once.r);
        }

        #[test]
        fn kernel_is_annihilated(m in arb_matrix(5, 7)) {
            let k = kernel_basis(&m);
            prop_assert_eq!(k.cols(), m.cols() - rank(&m));
            prop_assert!(m.mul(&k).unwrap().is_zero_matrix());
        }

        #[test]
        fn membership_agrees_with_solver(m in arb_matrix(5, 4), x in proptest::collection::vec(-2i64..=2, 5)) {
            let x: Vec<BigRational> = x.into_iter().take(m.rows()).map(int).collect();
            prop_assume!(x.len() == m.rows());
            let by_rank = col_space_contains(&m, &x).unwrap();
            let sol = solve(&m, &x).unwrap();
            prop_assert_eq!(by_rank, sol.is_some());
            if let Some(y) = sol {
                prop_assert_eq!(m.mul_vec(&y).unwrap(), x);
            }
        }

        // Full row rank of M[α ∪ {k}] for every k outside α, the echelon
        // criterion, and the existence of a witness all agree.
        #[test]
        fn row_criteria_agree(m in arb_matrix(6, 5), mask in proptest::collection::vec(any::<bool>(), 6), seed in 0u64..1000) {
            let rows = m.rows();
            let alpha: Vec<usize> = (0..rows).filter(|&i| mask[i]).collect();
            let beta: Vec<usize> = (0..rows).filter(|&i| !mask[i]).collect();
            prop_assume!(!beta.is_empty());
            let c1 = beta.iter().all(|&k| {
                let mut idx = alpha.clone();
                idx.push(k);
                full_row_rank(&m.select_rows(&idx))
            });
            let ce = column_echelon(&m, &beta).unwrap();
            let c3 = ce.criterion_holds();
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let w = witness_from_echelon(&ce, &mut rng, 30);
            let c2 = match &w {
                Some(x) => {
                    col_space_contains(&m, x).unwrap()
                        && beta.iter().all(|&k| !x[k].is_zero())
                        && alpha.iter().all(|&k| x[k].is_zero())
                        && full_row_rank(&m.select_rows(&alpha))
                }
                None => false,
            };
            prop_assert_eq!(c1, c3);
            prop_assert_eq!(c1, c2);
        }
    }
}
