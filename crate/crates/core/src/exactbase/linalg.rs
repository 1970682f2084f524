//! Exact linear algebra over the rationals and over polynomial fraction fields.

use std::collections::{BTreeMap, HashMap};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::matrix::SparseMatrix;
use super::poly::{Poly, VarId};
use super::Rational;
use crate::error::{Error, Result};

/// A sparse rational row: column index to nonzero value.
pub type QRow = BTreeMap<usize, Rational>;

/// Rank of a set of sparse rational rows by incremental elimination.
pub fn rank_rows(rows: impl IntoIterator<Item = QRow>) -> usize {
    let mut rows: Vec<QRow> = rows.into_iter().filter(|r| !r.is_empty()).collect();
    rows.sort_by_key(|r| r.len());
    let mut pivots: HashMap<usize, QRow> = HashMap::new();
    for mut row in rows {
        loop {
            let Some((&c, v)) = row.iter().next() else { break };
            match pivots.get(&c) {
                Some(p) => {
                    let f = v.clone();
                    for (k, pv) in p {
                        let e = row.entry(*k).or_default();
                        *e -= &f * pv;
                        if e.is_zero() {
                            row.remove(k);
                        }
                    }
                }
                None => {
                    let inv = v.recip();
                    for val in row.values_mut() {
                        *val *= &inv;
                    }
                    pivots.insert(c, row);
                    break;
                }
            }
        }
    }
    pivots.len()
}

/// Rank of a dense rational matrix.
pub fn rank_rational(m: &[Vec<Rational>]) -> usize {
    rank_rows(m.iter().map(|row| {
        row.iter()
            .enumerate()
            .filter(|(_, v)| !v.is_zero())
            .map(|(j, v)| (j, v.clone()))
            .collect::<QRow>()
    }))
}

/// Clears denominators of a rational row.
fn integer_row(row: &[Rational]) -> Vec<BigInt> {
    let l = row.iter().fold(BigInt::one(), |acc, v| acc.lcm(v.denom()));
    row.iter().map(|v| v.numer() * (&l / v.denom())).collect()
}

fn content(row: &[BigInt]) -> BigInt {
    row.iter().fold(BigInt::zero(), |g, v| g.gcd(v))
}

/// Divides out the content and makes the first nonzero entry positive.
pub fn primitive(mut v: Vec<BigInt>) -> Vec<BigInt> {
    let g = content(&v);
    if !g.is_zero() && !g.is_one() {
        for x in v.iter_mut() {
            *x /= &g;
        }
    }
    if v.iter().find(|x| !x.is_zero()).map(|x| x.is_negative()).unwrap_or(false) {
        for x in v.iter_mut() {
            *x = -x.clone();
        }
    }
    v
}

/// Fraction-free Gauss-Jordan elimination over the integers.
/// Returns the reduced rows and their pivot columns.
pub fn integer_echelon(mut rows: Vec<Vec<BigInt>>, ncols: usize) -> (Vec<Vec<BigInt>>, Vec<usize>) {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        if r == rows.len() {
            break;
        }
        let Some(p) = (r..rows.len())
            .filter(|&i| !rows[i][c].is_zero())
            .min_by_key(|&i| rows[i][c].bits())
        else {
            continue;
        };
        rows.swap(r, p);
        let piv_row = rows[r].clone();
        let piv = piv_row[c].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i == r || row[c].is_zero() {
                continue;
            }
            let f = row[c].clone();
            for j in 0..ncols {
                row[j] = &piv * &row[j] - &f * &piv_row[j];
            }
            let g = content(row);
            if !g.is_zero() && !g.is_one() {
                for x in row.iter_mut() {
                    *x /= &g;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    rows.truncate(r);
    (rows, pivots)
}

/// Right kernel of a constant matrix, as primitive integer vectors with
/// positive leading entry, one per free column in increasing order.
pub fn exact_kernel(m: &SparseMatrix) -> Result<Vec<Vec<BigInt>>> {
    let q = m.to_rational()?;
    Ok(kernel_of_rational(&q, m.cols()))
}

pub fn kernel_of_rational(q: &[Vec<Rational>], ncols: usize) -> Vec<Vec<BigInt>> {
    let rows: Vec<Vec<BigInt>> = q.iter().map(|r| integer_row(r)).collect();
    let (red, pivots) = integer_echelon(rows, ncols);
    let free: Vec<usize> = (0..ncols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![Rational::zero(); ncols];
            v[f] = Rational::one();
            for (k, &p) in pivots.iter().enumerate() {
                v[p] = -Rational::new(red[k][f].clone(), red[k][p].clone());
            }
            primitive(integer_row(&v))
        })
        .collect()
}

/// Reduced row echelon form over the rationals; returns rows and pivot columns.
pub fn rref(m: &[Vec<Rational>], ncols: usize) -> (Vec<Vec<Rational>>, Vec<usize>) {
    let rows: Vec<Vec<BigInt>> = m.iter().map(|r| integer_row(r)).collect();
    let (red, pivots) = integer_echelon(rows, ncols);
    let out = red
        .iter()
        .zip(&pivots)
        .map(|(row, &p)| row.iter().map(|v| Rational::new(v.clone(), row[p].clone())).collect())
        .collect();
    (out, pivots)
}

/// Reduced echelon basis of the span of `vectors`, each row scaled to a
/// primitive integer vector with positive pivot.
pub fn canonical_basis(vectors: &[Vec<Rational>], ncols: usize) -> Vec<Vec<BigInt>> {
    let (red, _) = rref(vectors, ncols);
    red.iter().map(|r| primitive(integer_row(r))).collect()
}

/// Determinant by fraction-free (Bareiss) elimination with exact division.
pub fn det_bareiss(m: &SparseMatrix) -> Result<Poly> {
    if m.rows() != m.cols() {
        return Err(Error::Shape(format!("determinant of {}x{}", m.rows(), m.cols())));
    }
    let n = m.rows();
    let mut a = m.dense();
    let mut prev = Poly::one();
    let mut sign = false;
    for k in 0..n {
        let Some(p) = (k..n).filter(|&i| !a[i][k].is_zero()).min_by_key(|&i| a[i][k].len()) else {
            return Ok(Poly::zero());
        };
        if p != k {
            a.swap(p, k);
            sign = !sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let num = &(&a[k][k] * &a[i][j]) - &(&a[i][k] * &a[k][j]);
                a[i][j] = num
                    .exact_div(&prev)
                    .ok_or_else(|| Error::Internal("inexact Bareiss division".into()))?;
            }
            a[i][k] = Poly::zero();
        }
        prev = a[k][k].clone();
    }
    let d = a[n - 1][n - 1].clone();
    Ok(if n == 0 { Poly::one() } else if sign { -d } else { d })
}

/// Determinant by cofactor expansion with memoization on column subsets.
/// Division-free; intended for small matrices and as an independent check.
pub fn det_cofactor(m: &SparseMatrix) -> Result<Poly> {
    if m.rows() != m.cols() {
        return Err(Error::Shape(format!("determinant of {}x{}", m.rows(), m.cols())));
    }
    let n = m.rows();
    if n > 20 {
        return Err(Error::Shape("cofactor expansion limited to 20x20".into()));
    }
    let a = m.dense();
    let mut memo: HashMap<u32, Poly> = HashMap::new();
    fn rec(a: &[Vec<Poly>], row: usize, cols: u32, memo: &mut HashMap<u32, Poly>) -> Poly {
        if cols == 0 {
            return Poly::one();
        }
        if let Some(p) = memo.get(&cols) {
            return p.clone();
        }
        let mut acc = Poly::zero();
        let mut pos = 0;
        for j in 0..a.len() {
            if cols & (1 << j) == 0 {
                continue;
            }
            if !a[row][j].is_zero() {
                let minor = rec(a, row + 1, cols & !(1 << j), memo);
                let term = &a[row][j] * &minor;
                if pos % 2 == 0 {
                    acc.add_assign_ref(&term);
                } else {
                    acc = &acc - &term;
                }
            }
            pos += 1;
        }
        memo.insert(cols, acc.clone());
        acc
    }
    Ok(rec(&a, 0, if n == 0 { 0 } else { (1u32 << n) - 1 }, &mut memo))
}

/// `(det M, Adj M)` with `M * Adj M = det(M) * I`.
pub fn det_and_adjugate(m: &SparseMatrix) -> Result<(Poly, SparseMatrix)> {
    if m.rows() != m.cols() {
        return Err(Error::Shape(format!("adjugate of {}x{}", m.rows(), m.cols())));
    }
    let n = m.rows();
    let det = det_bareiss(m)?;
    if n == 1 {
        return Ok((det, SparseMatrix::identity(1)));
    }
    let idx: Vec<usize> = (0..n).collect();
    let cells: Vec<(usize, usize)> = (0..n).flat_map(|i| (0..n).map(move |j| (i, j))).collect();
    use rayon::prelude::*;
    let cof: Vec<Result<(usize, usize, Poly)>> = cells
        .par_iter()
        .map(|&(i, j)| {
            let rows: Vec<usize> = idx.iter().copied().filter(|&r| r != j).collect();
            let cols: Vec<usize> = idx.iter().copied().filter(|&c| c != i).collect();
            let minor = det_bareiss(&m.submatrix(&rows, &cols))?;
            Ok((i, j, if (i + j) % 2 == 0 { minor } else { -minor }))
        })
        .collect();
    let mut adj = SparseMatrix::zeros(n, n);
    for c in cof {
        let (i, j, p) = c?;
        adj.set(i, j, p);
    }
    Ok((det, adj))
}

/// Rank over the fraction field by Bareiss elimination.
pub fn rank_bareiss(m: &SparseMatrix) -> Result<usize> {
    let (rows, cols) = (m.rows(), m.cols());
    let mut a = m.dense();
    let mut prev = Poly::one();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).filter(|&i| !a[i][c].is_zero()).min_by_key(|&i| a[i][c].len()) else {
            continue;
        };
        a.swap(p, r);
        for i in r + 1..rows {
            if a[i][c].is_zero() {
                for j in c + 1..cols {
                    if !a[i][j].is_zero() {
                        a[i][j] = (&a[r][c] * &a[i][j])
                            .exact_div(&prev)
                            .ok_or_else(|| Error::Internal("inexact Bareiss division".into()))?;
                    }
                }
                continue;
            }
            for j in c + 1..cols {
                let num = &(&a[r][c] * &a[i][j]) - &(&a[i][c] * &a[r][j]);
                a[i][j] = num
                    .exact_div(&prev)
                    .ok_or_else(|| Error::Internal("inexact Bareiss division".into()))?;
            }
            a[i][c] = Poly::zero();
        }
        prev = a[r][c].clone();
        r += 1;
    }
    Ok(r)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RankMode {
    Exact,
    /// Evaluation at random rationals; lower bound, escalated to exact on disagreement.
    Probabilistic { seed: u64 },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RankResult {
    pub rank: usize,
    /// "exact" or "probabilistic(seed=..)" or "escalated-exact".
    pub mode: String,
}

/// Substitutes random rationals with 16-bit numerators for every variable.
pub fn random_evaluation(m: &SparseMatrix, rng: &mut ChaCha8Rng) -> Result<Vec<Vec<Rational>>> {
    let mut vars: Vec<VarId> = m.entries().flat_map(|(_, p)| p.variables()).collect();
    vars.sort();
    vars.dedup();
    let vals: BTreeMap<VarId, Poly> = vars
        .into_iter()
        .map(|v| {
            let num: i64 = rng.gen_range(-(1 << 15)..(1 << 15));
            let den: i64 = rng.gen_range(1..(1 << 8));
            (v, Poly::constant(Rational::new(num.into(), den.into())))
        })
        .collect();
    m.substitute(&|v: &VarId| vals.get(v).cloned()).to_rational()
}

pub fn rank_over_fraction_field(m: &SparseMatrix, mode: RankMode) -> Result<RankResult> {
    match mode {
        RankMode::Exact => Ok(RankResult { rank: rank_bareiss(m)?, mode: "exact".into() }),
        RankMode::Probabilistic { seed } => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mut ranks = Vec::new();
            for _ in 0..3 {
                ranks.push(rank_rational(&random_evaluation(m, &mut rng)?));
            }
            if ranks.iter().all(|&r| r == ranks[0]) {
                Ok(RankResult { rank: ranks[0], mode: format!("probabilistic(seed={seed})") })
            } else {
                Ok(RankResult { rank: rank_bareiss(m)?, mode: "escalated-exact".into() })
            }
        }
    }
}

/// Solves `A x = b` for constant square invertible `A`.
pub fn solve_rational(a: &[Vec<Rational>], b: &[Rational]) -> Result<Vec<Rational>> {
    let n = a.len();
    let aug: Vec<Vec<Rational>> = a
        .iter()
        .zip(b)
        .map(|(row, v)| row.iter().cloned().chain(std::iter::once(v.clone())).collect())
        .collect();
    let (red, piv) = rref(&aug, n + 1);
    if piv.len() != n || piv.iter().any(|&p| p >= n) {
        return Err(Error::Singular("system is singular or inconsistent".into()));
    }
    Ok(red.iter().map(|row| row[n].clone()).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(v: i64) -> Rational {
        Rational::from_integer(v.into())
    }

    fn pm(rows: &[&[&str]]) -> SparseMatrix {
        SparseMatrix::from_dense(
            rows.iter().map(|r| r.iter().map(|s| s.parse().unwrap()).collect()).collect(),
        )
        .unwrap()
    }

    #[test]
    fn kernel_trivial_cases() {
        assert!(exact_kernel(&SparseMatrix::identity(3)).unwrap().is_empty());
        let k = exact_kernel(&SparseMatrix::zeros(2, 3)).unwrap();
        assert_eq!(k.len(), 3);
        for (i, v) in k.iter().enumerate() {
            for (j, x) in v.iter().enumerate() {
                assert_eq!(*x, BigInt::from((i == j) as i64));
            }
        }
    }

    #[test]
    fn kernel_is_primitive_and_positive() {
        let m = vec![vec![q(2), q(4), q(-6)]];
        let k = kernel_of_rational(&m, 3);
        assert_eq!(k, vec![vec![(-2).into(), 1.into(), 0.into()], vec![3.into(), 0.into(), 1.into()]]
            .into_iter()
            .map(primitive)
            .collect::<Vec<_>>());
        assert!(k.iter().all(|v| v.iter().find(|x| !x.is_zero()).unwrap().is_positive()));
    }

    #[test]
    fn det_small_cases() {
        // direct 3x3 cofactor expansion of [[0,1,0],[1,0,0],[0,0,-1]]: 0 - 1*(1*(-1) - 0) + 0 = 1
        let m = pm(&[&["0", "1", "0"], &["1", "0", "0"], &["0", "0", "-1"]]);
        assert_eq!(det_bareiss(&m).unwrap(), Poly::one());
        let one = pm(&[&["x1 + 3"]]);
        let (d, adj) = det_and_adjugate(&one).unwrap();
        assert_eq!(d, "x1 + 3".parse().unwrap());
        assert_eq!(adj, SparseMatrix::identity(1));
    }

    #[test]
    fn generic_two_by_two_adjugate() {
        let m = pm(&[&["a", "b"], &["c", "d"]]);
        let (d, adj) = det_and_adjugate(&m).unwrap();
        assert_eq!(d, "a*d - b*c".parse().unwrap());
        assert_eq!(adj, pm(&[&["d", "-b"], &["-c", "a"]]));
    }

    #[test]
    fn bareiss_agrees_with_cofactor_on_symbolic_matrix() {
        let m = pm(&[
            &["a", "b", "x1", "0"],
            &["b", "c", "x2", "1"],
            &["x1", "x2", "d", "a"],
            &["0", "1", "a", "b*c"],
        ]);
        assert_eq!(det_bareiss(&m).unwrap(), det_cofactor(&m).unwrap());
    }

    #[test]
    fn rank_modes_agree() {
        let m = pm(&[&["x1", "x2", "x3"], &["x1^2", "x1*x2", "x1*x3"], &["1", "0", "x2"]]);
        assert_eq!(rank_bareiss(&m).unwrap(), 2);
        let r = rank_over_fraction_field(&m, RankMode::Probabilistic { seed: 7 }).unwrap();
        assert_eq!(r.rank, 2);
        assert!(r.mode.starts_with("probabilistic"));
        assert_eq!(rank_bareiss(&SparseMatrix::zeros(3, 4)).unwrap(), 0);
    }

    fn int_matrix(rows: usize, cols: usize, vals: &[i64]) -> SparseMatrix {
        SparseMatrix::from_dense(
            (0..rows).map(|i| (0..cols).map(|j| Poly::int(vals[i * cols + j])).collect()).collect(),
        )
        .unwrap()
    }

    proptest::proptest! {
        #![proptest_config(proptest::prelude::ProptestConfig::with_cases(48))]
        #[test]
        fn adjugate_identity_on_random_matrices(n in 1usize..=6, vals in proptest::collection::vec(-4i64..=4, 36)) {
            let m = int_matrix(n, n, &vals);
            let (det, adj) = det_and_adjugate(&m).unwrap();
            let mut want = SparseMatrix::identity(n).scale(&det);
            if det.is_zero() {
                want = SparseMatrix::zeros(n, n);
            }
            proptest::prop_assert_eq!(m.mul(&adj).unwrap(), want.clone());
            proptest::prop_assert_eq!(adj.mul(&m).unwrap(), want);
        }

        #[test]
        fn kernel_is_annihilated_and_counts_match(
            rows in 1usize..=5,
            cols in 1usize..=6,
            vals in proptest::collection::vec(-2i64..=2, 30),
        ) {
            let m = int_matrix(rows, cols, &vals);
            let ker = exact_kernel(&m).unwrap();
            let k = SparseMatrix::from_columns(
                cols,
                ker.iter().map(|v| v.iter().enumerate().map(|(i, c)| (i, Poly::constant(Rational::from_integer(c.clone())))).collect()).collect(),
            );
            proptest::prop_assert!(m.mul(&k).unwrap().is_zero());
            proptest::prop_assert_eq!(rank_bareiss(&m).unwrap() + ker.len(), cols);
        }

        #[test]
        fn exact_rank_ignores_permutations(
            vals in proptest::collection::vec(-2i64..=2, 20),
            shift in 0usize..5,
            flip in proptest::bool::ANY,
        ) {
            let m = int_matrix(4, 5, &vals);
            let order: Vec<usize> = (0..5).map(|j| (j + shift) % 5).collect();
            let rows: Vec<usize> = if flip { vec![3, 2, 1, 0] } else { vec![1, 0, 2, 3] };
            let permuted = m.submatrix(&rows, &order);
            let r = |x: &SparseMatrix| rank_over_fraction_field(x, RankMode::Exact).unwrap().rank;
            proptest::prop_assert_eq!(r(&m), r(&permuted));
        }
    }
}
