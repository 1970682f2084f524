//! Checks on complexes: `d² = 0`, monomiality, exactness of graded strands,
//! the Euler characteristic of Hilbert series, rank conditions, and the ideal
//! presented in position 0.
//!
//! Strands of a specialized complex over `k[x_1..x_d]` take the generator of
//! twist `(a, b)` to sit in internal degree `-a`.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::Zero;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::exactbase::linalg::{kernel_of_rational, rank_over_fraction_field, rank_rows, QRow, RankMode};
use crate::exactbase::{Poly, Rational, VarId};
use crate::inversesys::{ann_slice, ideal_slice, GradedIdealSlice, InverseSystem};
use crate::multilinear::{sym_basis, sym_dim};
use crate::rescomplex::{FreeComplex, ModuleLabel};

/// Outcome of one check, with located failures.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Report {
    pub check: String,
    pub passed: bool,
    pub notes: Vec<String>,
    pub failures: Vec<String>,
}

impl Report {
    fn new(check: &str) -> Self {
        Report { check: check.into(), passed: true, notes: Vec::new(), failures: Vec::new() }
    }

    pub fn fail(&mut self, msg: String) {
        self.passed = false;
        self.failures.push(msg);
    }

    pub fn note(&mut self, msg: String) {
        self.notes.push(msg);
    }
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{}: {}", self.check, if self.passed { "pass" } else { "FAIL" })?;
        for n in &self.notes {
            writeln!(f, "  {n}")?;
        }
        for x in &self.failures {
            writeln!(f, "  ! {x}")?;
        }
        Ok(())
    }
}

/// `d_i ∘ d_{i+1} = 0` entry by entry.
pub fn check_square_zero(c: &FreeComplex) -> Result<Report> {
    let mut r = Report::new("square_zero");
    for (i, prod) in c.compositions()?.iter().enumerate() {
        for ((row, col), e) in prod.entries() {
            r.fail(format!("d{}·d{} has ({row},{col}) = {e}", i + 1, i + 2));
        }
    }
    r.note(format!("{} compositions checked", c.length().saturating_sub(1)));
    Ok(r)
}

/// Every entry is `±` one monomial, and entries involving `t`-variables are
/// `±` a single `t`-variable.
pub fn check_monomiality(c: &FreeComplex) -> Report {
    let mut r = Report::new("monomiality");
    for (i, m) in c.diffs.iter().enumerate() {
        for ((row, col), e) in m.entries() {
            if !e.is_signed_monomial() {
                r.fail(format!("d{} ({row},{col}) = {e} is not a signed monomial", i + 1));
                continue;
            }
            let (_, mono) = e.as_term().expect("single term");
            let has_t = mono.pairs().iter().any(|(v, _)| matches!(v, VarId::Coefficient(_)));
            if has_t && !(mono.pairs().len() == 1 && mono.pairs()[0].1 == 1) {
                r.fail(format!("d{} ({row},{col}) = {e} is not a single t-variable", i + 1));
            }
        }
    }
    r
}

fn generator_degrees(c: &FreeComplex) -> Vec<Vec<i64>> {
    c.modules.iter().map(|m| m.twists.iter().map(|t| -t.0).collect()).collect()
}

/// Structural exponent vector of a monomial, or an error naming the offender.
fn x_exponents(mono: &crate::exactbase::Monomial, d: usize) -> Result<Vec<u32>> {
    let mut exps = vec![0u32; d];
    for (v, k) in mono.pairs() {
        match v {
            VarId::Structural(i) if (1..=d).contains(&(*i as usize)) => exps[*i as usize - 1] = *k,
            other => return Err(Error::Unsupported(format!("strands need entries in x1..x{d}, found {other}"))),
        }
    }
    Ok(exps)
}

/// The degree-`e` strand of `d_i` as sparse rational columns, plus its row count.
fn strand_columns(c: &FreeComplex, i: usize, e: i64) -> Result<(Vec<QRow>, usize)> {
    let d = c.meta.d;
    let degs = generator_degrees(c);
    let block = |pos: usize, k: usize| sym_dim(d, e - degs[pos][k]);
    let mut offsets = Vec::new();
    let mut total = 0;
    let mut index: Vec<BTreeMap<Vec<u32>, usize>> = Vec::new();
    for k in 0..degs[i - 1].len() {
        offsets.push(total);
        let deg = e - degs[i - 1][k];
        let basis = if deg >= 0 { sym_basis(d, deg as u32) } else { Vec::new() };
        index.push(basis.into_iter().enumerate().map(|(j, m)| (m.0, j)).collect());
        total += block(i - 1, k);
    }
    let cols_by_gen = c.d(i).columns();
    let mut cols = Vec::new();
    for (j, col) in cols_by_gen.iter().enumerate() {
        let deg = e - degs[i][j];
        if deg < 0 {
            continue;
        }
        for m in sym_basis(d, deg as u32) {
            let mut out = QRow::new();
            for (k, p) in col {
                for (mono, coef) in p.terms() {
                    let mut exps = x_exponents(mono, d)?;
                    for (a, b) in exps.iter_mut().zip(&m.0) {
                        *a += b;
                    }
                    let pos = index[*k].get(&exps).ok_or_else(|| {
                        Error::Range(format!("d{i} entry ({k},{j}) = {p} is not homogeneous for the twists"))
                    })?;
                    let slot = out.entry(offsets[*k] + pos).or_insert_with(Rational::zero);
                    *slot += coef;
                    if slot.is_zero() {
                        out.remove(&(offsets[*k] + pos));
                    }
                }
            }
            cols.push(out);
        }
    }
    Ok((cols, total))
}

/// Per-degree strand data: `dims[i]` and `ranks[i]` (rank of `d_i`, index 0 unused).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Strand {
    pub degree: i64,
    pub dims: Vec<usize>,
    pub ranks: Vec<usize>,
}

impl Strand {
    pub fn h0(&self) -> usize {
        self.dims[0].saturating_sub(self.ranks.get(1).copied().unwrap_or(0))
    }

    /// `dim ker d_i - rank d_{i+1}`; negative when the strand is not a complex.
    pub fn homology(&self, i: usize) -> i64 {
        let out = if i == 0 { 0 } else { self.ranks.get(i).copied().unwrap_or(0) };
        let inc = self.ranks.get(i + 1).copied().unwrap_or(0);
        self.dims[i] as i64 - out as i64 - inc as i64
    }
}

pub fn strand(c: &FreeComplex, e: i64) -> Result<Strand> {
    let degs = generator_degrees(c);
    let dims: Vec<usize> = degs.iter().map(|g| g.iter().map(|&k| sym_dim(c.meta.d, e - k)).sum()).collect();
    let mut ranks = vec![0];
    for i in 1..=c.length() {
        let (cols, _) = strand_columns(c, i, e)?;
        ranks.push(rank_rows(cols));
    }
    Ok(Strand { degree: e, dims, ranks })
}

/// Exactness of every strand of degree `0..=max_degree` in positions `>= 1`,
/// and `dim H_0` equal to `expected_h0[e]` (zero past the end of the list).
pub fn strand_exactness(c: &FreeComplex, max_degree: i64, expected_h0: &[usize]) -> Result<Report> {
    let mut r = Report::new("strand_exactness");
    let strands: Vec<Strand> = (0..=max_degree).into_par_iter().map(|e| strand(c, e)).collect::<Result<_>>()?;
    for s in &strands {
        for i in 1..c.modules.len() {
            let h = s.homology(i);
            if h != 0 {
                r.fail(format!("degree {}: H_{i} has dimension {h}", s.degree));
            }
        }
        let want = expected_h0.get(s.degree as usize).copied().unwrap_or(0);
        if s.h0() != want {
            r.fail(format!("degree {}: H_0 has dimension {}, expected {want}", s.degree, s.h0()));
        }
    }
    r.note(format!("strands 0..={max_degree}; H_0 dims {:?}", strands.iter().map(Strand::h0).collect::<Vec<_>>()));
    Ok(r)
}

/// `Σ_i (-1)^i Σ_gens t^deg = H(t) (1-t)^d` as integer polynomials.
pub fn euler_hilbert_identity(c: &FreeComplex, hilbert: &[i64]) -> Report {
    let mut r = Report::new("euler_hilbert_identity");
    let mut lhs: BTreeMap<i64, i64> = BTreeMap::new();
    for (i, degs) in generator_degrees(c).iter().enumerate() {
        let sign = if i % 2 == 0 { 1 } else { -1 };
        for &k in degs {
            *lhs.entry(k).or_default() += sign;
        }
    }
    let d = c.meta.d as i64;
    let mut rhs: BTreeMap<i64, i64> = BTreeMap::new();
    for (k, &h) in hilbert.iter().enumerate() {
        for j in 0..=d {
            let b = crate::exactbase::binomial(d, j);
            let b = i64::try_from(b).expect("small binomial");
            *rhs.entry(k as i64 + j).or_default() += h * b * if j % 2 == 0 { 1 } else { -1 };
        }
    }
    lhs.retain(|_, v| *v != 0);
    rhs.retain(|_, v| *v != 0);
    if lhs != rhs {
        r.fail(format!("numerator {lhs:?} differs from H(t)(1-t)^{d} = {rhs:?}"));
    }
    r.note(format!("numerator {lhs:?}"));
    r
}

/// `rank d_i + rank d_{i+1} = rank F_i` over the fraction field for `i >= 1`.
pub fn rank_conditions(c: &FreeComplex, mode: RankMode) -> Result<Report> {
    let mut r = Report::new("rank_conditions");
    let mut ranks = vec![0];
    for i in 1..=c.length() {
        let res = rank_over_fraction_field(c.d(i), mode)?;
        r.note(format!("rank d{i} = {} ({})", res.rank, res.mode));
        ranks.push(res.rank);
    }
    ranks.push(0);
    for i in 1..=c.length() {
        let f = c.modules[i].rank();
        if ranks[i] + ranks[i + 1] != f {
            r.fail(format!("rank d{i} + rank d{} = {} but rank F_{i} = {f}", i + 1, ranks[i] + ranks[i + 1]));
        }
    }
    Ok(r)
}

/// `[I]_e` for `e = 0..=up_to`, where `H_0 = R/I`: the degree-`e` elements
/// `f` of the unit summand with `(f, 0)` in the image of `d_1`.
pub fn extract_h0_ideal(c: &FreeComplex, up_to: usize) -> Result<Vec<GradedIdealSlice>> {
    let unit = c.modules[0]
        .labels
        .iter()
        .position(|l| *l == ModuleLabel::Unit)
        .ok_or_else(|| Error::Range("position 0 has no unit summand".into()))?;
    let d = c.meta.d;
    let degs = generator_degrees(c);
    if degs[0][unit] != 0 {
        return Err(Error::Range("the unit summand is not in degree 0".into()));
    }
    (0..=up_to)
        .into_par_iter()
        .map(|e| {
            let (cols, rows) = strand_columns(c, 1, e as i64)?;
            let before: usize = (0..unit).map(|k| sym_dim(d, e as i64 - degs[0][k])).sum();
            let width = sym_dim(d, e as i64);
            let unit_rows = before..before + width;
            // kernel of the non-unit rows, then its image in the unit rows
            let other: Vec<Vec<Rational>> = (0..rows)
                .filter(|i| !unit_rows.contains(i))
                .map(|i| cols.iter().map(|col| col.get(&i).cloned().unwrap_or_else(Rational::zero)).collect())
                .collect();
            let ker = kernel_of_rational(&other, cols.len());
            let image: Vec<Vec<Rational>> = ker
                .iter()
                .map(|z| {
                    unit_rows
                        .clone()
                        .map(|i| {
                            cols.iter()
                                .zip(z)
                                .filter(|(_, zc)| !zc.is_zero())
                                .fold(Rational::zero(), |acc, (col, zc)| {
                                    acc + col.get(&i).cloned().unwrap_or_else(Rational::zero) * Rational::from_integer(zc.clone())
                                })
                        })
                        .collect()
                })
                .collect();
            Ok(GradedIdealSlice::from_vectors(d, e, &image))
        })
        .collect()
}

/// `H_0` dimensions `dim Sym_e - dim [ann φ]_e` for `e = 0..=max_degree`.
pub fn expected_h0_compressed(phi: &InverseSystem, max_degree: usize) -> Vec<usize> {
    (0..=max_degree).map(|e| sym_dim(phi.d(), e as i64) - ann_slice(phi, e).dim()).collect()
}

/// `H_0` dimensions of `P / (P_ρ · [ann φ]_n)`.
pub fn expected_h0_truncation(phi: &InverseSystem, rho: usize, max_degree: usize) -> Result<Vec<usize>> {
    let (d, n) = (phi.d(), phi.n());
    let base = ann_slice(phi, n).polys();
    let gens: Vec<Poly> = sym_basis(d, rho as u32)
        .iter()
        .flat_map(|m| base.iter().map(move |g| g * &m.to_poly()))
        .collect();
    (0..=max_degree).map(|e| Ok(sym_dim(d, e as i64) - ideal_slice(&gens, d, e)?.dim())).collect()
}
