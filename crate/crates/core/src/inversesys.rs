//! Macaulay inverse systems over ℚ: catalecticants, annihilator slices,
//! explicit generators, ideals from slices, colon ideals and Betti numbers.
//!
//! A form `φ = Σ c_E x*^(E)` of degree `2n-2` evaluates on a monomial by
//! `φ(x^E) = c_E`, and a monomial `x^m` contracts `x*^(E)` to `x*^(E-m)`.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use rand::Rng;

use crate::error::{Error, Result};
use crate::exactbase::linalg::{canonical_basis, kernel_of_rational, rank_rational, rref};
use crate::exactbase::{binomial, det_and_adjugate, det_bareiss, rat, Monomial, Poly, Rational, SparseMatrix, VarId};
use crate::multilinear::{div_basis, sym_basis, sym_dim, SymMonomial};
use crate::rescomplex::PhiSource;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InverseSystem {
    d: usize,
    n: usize,
    coeffs: BTreeMap<Vec<u32>, Rational>,
}

impl InverseSystem {
    /// Validates exponent vectors (length `d`, sum `2n-2`) and drops zero coefficients.
    pub fn new(d: usize, n: usize, coeffs: impl IntoIterator<Item = (Vec<u32>, Rational)>) -> Result<Self> {
        if d == 0 || n == 0 {
            return Err(Error::Range(format!("inverse system needs d, n >= 1, got d={d}, n={n}")));
        }
        let deg = 2 * n as u32 - 2;
        let mut map: BTreeMap<Vec<u32>, Rational> = BTreeMap::new();
        for (e, c) in coeffs {
            if e.len() != d || e.iter().sum::<u32>() != deg {
                return Err(Error::Range(format!("exponent {e:?} is not of length {d} and degree {deg}")));
            }
            *map.entry(e).or_insert_with(Rational::zero) += c;
        }
        map.retain(|_, c| !c.is_zero());
        if map.is_empty() {
            return Err(Error::Range("inverse system has no nonzero coefficient".into()));
        }
        Ok(InverseSystem { d, n, coeffs: map })
    }

    /// Coefficients drawn uniformly from `-bound..=bound`, redrawn until nonzero.
    pub fn random(d: usize, n: usize, bound: i64, rng: &mut impl Rng) -> Self {
        loop {
            let coeffs = sym_basis(d, 2 * n as u32 - 2)
                .into_iter()
                .map(|m| (m.0, rat(rng.gen_range(-bound..=bound))))
                .collect::<Vec<_>>();
            if let Ok(phi) = InverseSystem::new(d, n, coeffs) {
                return phi;
            }
        }
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn coeffs(&self) -> &BTreeMap<Vec<u32>, Rational> {
        &self.coeffs
    }

    pub fn coeff(&self, e: &[u32]) -> Rational {
        self.coeffs.get(e).cloned().unwrap_or_default()
    }

    pub fn scale(&self, c: &Rational) -> Result<InverseSystem> {
        InverseSystem::new(self.d, self.n, self.coeffs.iter().map(|(e, v)| (e.clone(), v * c)))
    }

    /// Values on the degree-`(2n-2)` monomial basis, in canonical order.
    pub fn coefficient_vector(&self) -> Vec<Rational> {
        sym_basis(self.d, 2 * self.n as u32 - 2).iter().map(|m| self.coeff(&m.0)).collect()
    }
}

impl PhiSource for InverseSystem {
    fn d(&self) -> usize {
        self.d
    }
    fn n(&self) -> usize {
        self.n
    }
    fn value(&self, m: &SymMonomial) -> Poly {
        Poly::constant(self.coeff(&m.0))
    }
}

impl fmt::Display for InverseSystem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (e, c) in &self.coeffs {
            let (sign, abs) = if c.is_negative() { ("-", -c.clone()) } else { ("+", c.clone()) };
            if first {
                if sign == "-" {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            first = false;
            let dual: Vec<String> = e
                .iter()
                .enumerate()
                .filter(|(_, &a)| a > 0)
                .map(|(i, &a)| format!("x{}*^({a})", i + 1))
                .collect();
            if dual.is_empty() {
                write!(f, "{}", crate::exactbase::format_rational(&abs))?;
            } else if abs.is_one() {
                write!(f, "{}", dual.join("*"))?;
            } else {
                write!(f, "{}*{}", crate::exactbase::format_rational(&abs), dual.join("*"))?;
            }
        }
        Ok(())
    }
}

/// Matrix of `p_i^φ: Sym_i → D_{2n-2-i}`: rows are dual monomials `w`,
/// columns monomials `m`, and the entry is `φ(m·w)`.
pub fn p_map(phi: &InverseSystem, i: usize) -> Result<SparseMatrix> {
    let top = 2 * phi.n - 2;
    if i > top {
        return Err(Error::Range(format!("p_{i} needs 0 <= i <= {top}")));
    }
    let rows = div_basis(phi.d, (top - i) as u32);
    let cols = sym_basis(phi.d, i as u32);
    let mut out = SparseMatrix::zeros(rows.len(), cols.len());
    for (r, w) in rows.iter().enumerate() {
        for (c, m) in cols.iter().enumerate() {
            let v = phi.coeff(&m.add(&w.dual()).0);
            if !v.is_zero() {
                out.set(r, c, Poly::constant(v));
            }
        }
    }
    Ok(out)
}

/// The catalecticant `T_φ = [φ(m_i m_j)]` over degree-`(n-1)` monomials.
pub fn t_matrix(phi: &InverseSystem) -> SparseMatrix {
    p_map(phi, phi.n - 1).expect("n-1 is in range")
}

pub fn delta(phi: &InverseSystem) -> Rational {
    det_bareiss(&t_matrix(phi)).expect("square").as_constant().expect("constant")
}

/// Membership in `𝕀_n`: `δ(φ) ≠ 0`.
pub fn in_in(phi: &InverseSystem) -> bool {
    !delta(phi).is_zero()
}

/// `Adj(T_φ)`, which is the matrix of `δ σ_{n-1}` in monomial bases.
pub fn sigma_adjugate(phi: &InverseSystem) -> SparseMatrix {
    det_and_adjugate(&t_matrix(phi)).expect("square").1
}

/// A homogeneous slice `[I]_e` as a reduced basis of primitive integer vectors
/// over the degree-`e` monomials.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GradedIdealSlice {
    pub d: usize,
    pub degree: usize,
    pub basis: Vec<Vec<BigInt>>,
}

impl GradedIdealSlice {
    pub fn from_vectors(d: usize, degree: usize, vectors: &[Vec<Rational>]) -> Self {
        let ncols = sym_dim(d, degree as i64);
        GradedIdealSlice { d, degree, basis: canonical_basis(vectors, ncols) }
    }

    pub fn from_polys(d: usize, degree: usize, polys: &[Poly]) -> Result<Self> {
        let vecs = polys.iter().map(|p| poly_to_vector(p, d, degree)).collect::<Result<Vec<_>>>()?;
        Ok(GradedIdealSlice::from_vectors(d, degree, &vecs))
    }

    pub fn full(d: usize, degree: usize) -> Self {
        let n = sym_dim(d, degree as i64);
        let basis = (0..n).map(|i| (0..n).map(|j| BigInt::from((i == j) as i64)).collect()).collect();
        GradedIdealSlice { d, degree, basis }
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn ambient_dim(&self) -> usize {
        sym_dim(self.d, self.degree as i64)
    }

    pub fn is_full(&self) -> bool {
        self.dim() == self.ambient_dim()
    }

    pub fn rational_basis(&self) -> Vec<Vec<Rational>> {
        self.basis.iter().map(|v| v.iter().map(|x| Rational::from_integer(x.clone())).collect()).collect()
    }

    pub fn polys(&self) -> Vec<Poly> {
        self.rational_basis().iter().map(|v| vector_to_poly(v, self.d, self.degree)).collect()
    }

    pub fn contains(&self, p: &Poly) -> Result<bool> {
        let v = poly_to_vector(p, self.d, self.degree)?;
        let mut rows = self.rational_basis();
        let before = rank_rational(&rows);
        rows.push(v);
        Ok(rank_rational(&rows) == before)
    }

    /// Whether `self ⊆ other`.
    pub fn is_subspace_of(&self, other: &GradedIdealSlice) -> bool {
        let mut rows = other.rational_basis();
        let before = rows.len();
        rows.extend(self.rational_basis());
        rank_rational(&rows) == before
    }
}

/// Coordinates of a homogeneous degree-`e` polynomial in the `x` variables.
pub fn poly_to_vector(p: &Poly, d: usize, e: usize) -> Result<Vec<Rational>> {
    let basis = sym_basis(d, e as u32);
    let pos: BTreeMap<Vec<u32>, usize> = basis.iter().enumerate().map(|(i, m)| (m.0.clone(), i)).collect();
    let mut out = vec![Rational::zero(); basis.len()];
    for (m, c) in p.terms() {
        let mut exps = vec![0u32; d];
        for (v, k) in m.pairs() {
            match v {
                VarId::Structural(i) if (*i as usize) >= 1 && (*i as usize) <= d => exps[*i as usize - 1] = *k,
                _ => return Err(Error::Range(format!("{p} is not a form in x1..x{d}"))),
            }
        }
        let idx = pos
            .get(&exps)
            .ok_or_else(|| Error::Range(format!("{p} is not homogeneous of degree {e}")))?;
        out[*idx] = c.clone();
    }
    Ok(out)
}

pub fn vector_to_poly(v: &[Rational], d: usize, e: usize) -> Poly {
    Poly::from_terms(
        sym_basis(d, e as u32)
            .into_iter()
            .zip(v)
            .filter(|(_, c)| !c.is_zero())
            .map(|(m, c)| (Monomial::structural(&m.0), c.clone())),
    )
}

/// `[ann φ]_e`: the kernel of `p_e^φ`, or everything once `e > 2n-2`.
pub fn ann_slice(phi: &InverseSystem, e: usize) -> GradedIdealSlice {
    if e > 2 * phi.n - 2 {
        return GradedIdealSlice::full(phi.d, e);
    }
    let p = p_map(phi, e).expect("in range").to_rational().expect("constant");
    let ncols = sym_dim(phi.d, e as i64);
    let ker: Vec<Vec<Rational>> = kernel_of_rational(&p, ncols)
        .into_iter()
        .map(|v| v.into_iter().map(Rational::from_integer).collect())
        .collect();
    GradedIdealSlice::from_vectors(phi.d, e, &ker)
}

/// The degree-`n` generators `x_i δσ(w + e_i) - x_j δσ(w + e_j)` (`|w| = n-2`,
/// `i < j`) and `x_i δσ(w)` (`|w| = n-1`, `w_i = 0`).
pub fn ann_generators_explicit(phi: &InverseSystem) -> Result<Vec<Poly>> {
    let (d, n) = (phi.d, phi.n);
    let t = t_matrix(phi);
    let (det, adj) = det_and_adjugate(&t)?;
    if det.is_zero() {
        return Err(Error::NotCompressed);
    }
    let basis = sym_basis(d, n as u32 - 1);
    let pos: BTreeMap<Vec<u32>, usize> = basis.iter().enumerate().map(|(i, m)| (m.0.clone(), i)).collect();
    // δσ(w*) = Σ_i Adj[i][col(w)] m_i
    let dsigma = |w: &[u32]| -> Poly {
        let j = pos[w];
        let mut out = Poly::zero();
        for (i, m) in basis.iter().enumerate() {
            let c = adj.get(i, j);
            if !c.is_zero() {
                out.add_assign_ref(&(&c * &m.to_poly()));
            }
        }
        out
    };
    let mut gens = Vec::new();
    if n >= 2 {
        for w in sym_basis(d, n as u32 - 2) {
            for i in 1..=d {
                for j in i + 1..=d {
                    let wi = w.times_var(i);
                    let wj = w.times_var(j);
                    let g = &(&Poly::x(i) * &dsigma(&wi.0)) - &(&Poly::x(j) * &dsigma(&wj.0));
                    if !g.is_zero() {
                        gens.push(g);
                    }
                }
            }
        }
    }
    for w in sym_basis(d, n as u32 - 1) {
        for i in 1..=d {
            if w.0[i - 1] == 0 {
                let g = &Poly::x(i) * &dsigma(&w.0);
                if !g.is_zero() {
                    gens.push(g);
                }
            }
        }
    }
    Ok(gens)
}

/// `[(gens)]_e`: the span of all monomial multiples of the homogeneous generators.
pub fn ideal_slice(gens: &[Poly], d: usize, e: usize) -> Result<GradedIdealSlice> {
    let mut vecs = Vec::new();
    for g in gens {
        let k = g.terms().next().map(|(m, _)| m.total_degree() as usize).unwrap_or(0);
        if g.is_zero() || k > e {
            continue;
        }
        for m in sym_basis(d, (e - k) as u32) {
            vecs.push(poly_to_vector(&(g * &m.to_poly()), d, e)?);
        }
    }
    Ok(GradedIdealSlice::from_vectors(d, e, &vecs))
}

/// The unique-up-to-scalar `φ` of degree `2n-2` vanishing on the slice,
/// as a primitive integer form with positive leading coefficient.
pub fn inverse_system_from_ideal(slice: &GradedIdealSlice, d: usize, n: usize) -> Result<InverseSystem> {
    if slice.d != d || slice.degree + 2 != 2 * n {
        return Err(Error::Range(format!("slice of degree {} does not match 2n-2 = {}", slice.degree, 2 * n - 2)));
    }
    let ker = kernel_of_rational(&slice.rational_basis(), slice.ambient_dim());
    if ker.len() != 1 {
        return Err(Error::NotGorenstein(ker.len()));
    }
    let coeffs = sym_basis(d, slice.degree as u32)
        .into_iter()
        .zip(&ker[0])
        .map(|(m, c)| (m.0, Rational::from_integer(c.clone())));
    InverseSystem::new(d, n, coeffs)
}

/// Degreewise slices of `((f) : g)` for degrees `0..=up_to`.
pub fn colon_ideal_slices(f: &[Poly], g: &Poly, d: usize, up_to: usize) -> Result<Vec<GradedIdealSlice>> {
    let k = g
        .terms()
        .next()
        .map(|(m, _)| m.total_degree() as usize)
        .ok_or_else(|| Error::Range("colon by the zero polynomial".into()))?;
    let mut out = Vec::new();
    for e in 0..=up_to {
        let target = ideal_slice(f, d, e + k)?;
        let ncols = sym_dim(d, (e + k) as i64);
        let (red, pivots) = rref(&target.rational_basis(), ncols);
        let free: Vec<usize> = (0..ncols).filter(|c| !pivots.contains(c)).collect();
        // column m of `m` = the image of m·g in Sym_{e+k} / [(f)]_{e+k}
        let source = sym_basis(d, e as u32);
        let mut cols = Vec::with_capacity(source.len());
        for m in &source {
            let mut v = poly_to_vector(&(g * &m.to_poly()), d, e + k)?;
            for (row, &p) in red.iter().zip(&pivots) {
                if !v[p].is_zero() {
                    let c = v[p].clone();
                    for (x, r) in v.iter_mut().zip(row) {
                        *x -= &c * r;
                    }
                }
            }
            cols.push(free.iter().map(|&j| v[j].clone()).collect::<Vec<_>>());
        }
        let rows: Vec<Vec<Rational>> =
            (0..free.len()).map(|i| cols.iter().map(|c| c[i].clone()).collect()).collect();
        let ker: Vec<Vec<Rational>> = kernel_of_rational(&rows, source.len())
            .into_iter()
            .map(|v| v.into_iter().map(Rational::from_integer).collect())
            .collect();
        out.push(GradedIdealSlice::from_vectors(d, e, &ker));
    }
    Ok(out)
}

/// Minimal generators read off consecutive slices: a basis of `[J]_e` modulo
/// `P_1 · [J]_{e-1}`, chosen greedily from the reduced basis.
pub fn minimal_generators(slices: &[GradedIdealSlice]) -> Result<Vec<Poly>> {
    let mut out = Vec::new();
    for (k, s) in slices.iter().enumerate() {
        let lower = if k == 0 || slices[k - 1].dim() == 0 {
            Vec::new()
        } else {
            ideal_slice(&slices[k - 1].polys(), s.d, s.degree)?.rational_basis()
        };
        let mut rows = lower;
        let mut r = rank_rational(&rows);
        for v in s.rational_basis() {
            rows.push(v.clone());
            let r2 = rank_rational(&rows);
            if r2 > r {
                out.push(vector_to_poly(&v, s.d, s.degree));
                r = r2;
            } else {
                rows.pop();
            }
        }
    }
    Ok(out)
}

/// Hilbert function of a compressed algebra with socle degree `2n-2`.
pub fn hilbert_compressed(d: usize, n: usize) -> Vec<usize> {
    let top = 2 * n - 2;
    (0..=top).map(|i| sym_dim(d, i.min(top - i) as i64)).collect()
}

/// `β_i = (2n+d-2)/(n+i-1) · C(n+d-2, i-1) · C(n+d-i-2, n-1)`, checked against
/// `C(d+n-1, n+i-1) C(i+n-2, i-1) - C(d+n-2, i-1) C(d-i+n-2, d-i)`.
pub fn betti_linear(d: usize, n: usize, i: usize) -> Result<BigInt> {
    if i < 1 || i + 1 > d || n < 1 {
        return Err(Error::Range(format!("betti_linear needs 1 <= i <= d-1, got d={d}, i={i}")));
    }
    let a = betti_linear_quotient(d, n, i);
    let b = betti_linear_difference(d, n, i);
    if a != b {
        return Err(Error::Internal(format!("β_{i} formulas disagree: {a} vs {b}")));
    }
    Ok(a)
}

pub fn betti_linear_quotient(d: usize, n: usize, i: usize) -> BigInt {
    let (d, n, i) = (d as i64, n as i64, i as i64);
    let num = BigInt::from(2 * n + d - 2) * binomial(n + d - 2, i - 1) * binomial(n + d - i - 2, n - 1);
    let den = BigInt::from(n + i - 1);
    debug_assert!((&num % &den).is_zero());
    num / den
}

pub fn betti_linear_difference(d: usize, n: usize, i: usize) -> BigInt {
    let (d, n, i) = (d as i64, n as i64, i as i64);
    binomial(d + n - 1, n + i - 1) * binomial(i + n - 2, i - 1)
        - binomial(d + n - 2, i - 1) * binomial(d - i + n - 2, d - i)
}
