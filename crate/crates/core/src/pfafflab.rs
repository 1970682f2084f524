//! Pfaffians, the Buchsbaum–Eisenbud matrices `H_n`, their maximal-order
//! Pfaffians in closed form, and the Catalan inverse systems `φ_{n,μ}`.

use std::collections::HashMap;

use itertools::Itertools;
use num_bigint::BigInt;
use num_traits::One;

use crate::error::{Error, Result};
use crate::exactbase::{binomial, multinomial, Monomial, Poly, Rational, SparseMatrix, VarId};
use crate::inversesys::{colon_ideal_slices, GradedIdealSlice, InverseSystem};
use crate::multilinear::{sort_sign, DivElement, DivMonomial};

/// A square matrix with zero diagonal and `z_{j,i} = -z_{i,j}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AltMatrix {
    entries: SparseMatrix,
}

impl AltMatrix {
    pub fn new(entries: SparseMatrix) -> Result<Self> {
        if entries.rows() != entries.cols() {
            return Err(Error::NotAlternating(format!("{}x{} is not square", entries.rows(), entries.cols())));
        }
        for i in 0..entries.rows() {
            if !entries.get(i, i).is_zero() {
                return Err(Error::NotAlternating(format!("nonzero diagonal entry at {i}")));
            }
        }
        if entries.transpose() != entries.neg() {
            return Err(Error::NotAlternating("matrix is not skew-symmetric".into()));
        }
        Ok(AltMatrix { entries })
    }

    /// Builds the matrix from its strictly upper triangle, `upper[(i, j)]` with `i < j`.
    pub fn from_upper(size: usize, upper: impl IntoIterator<Item = ((usize, usize), Poly)>) -> Result<Self> {
        let mut m = SparseMatrix::zeros(size, size);
        for ((i, j), p) in upper {
            if i >= j || j >= size {
                return Err(Error::Range(format!("({i},{j}) is not strictly upper in size {size}")));
            }
            m.set(j, i, -&p);
            m.set(i, j, p);
        }
        Ok(AltMatrix { entries: m })
    }

    pub fn size(&self) -> usize {
        self.entries.rows()
    }

    pub fn entries(&self) -> &SparseMatrix {
        &self.entries
    }

    pub fn get(&self, i: usize, j: usize) -> Poly {
        self.entries.get(i, j)
    }
}

/// `Pf` of the principal submatrix on `keep` (ascending), expanded along its
/// first row, memoized on index subsets.
fn pf_rec(z: &AltMatrix, keep: u64, memo: &mut HashMap<u64, Poly>) -> Poly {
    if keep == 0 {
        return Poly::one();
    }
    if keep.count_ones() % 2 == 1 {
        return Poly::zero();
    }
    if let Some(p) = memo.get(&keep) {
        return p.clone();
    }
    let i = keep.trailing_zeros() as usize;
    let rest = keep & !(1u64 << i);
    let mut acc = Poly::zero();
    for (pos, j) in (0..64).filter(|&j| rest >> j & 1 == 1).enumerate() {
        let e = z.get(i, j);
        if e.is_zero() {
            continue;
        }
        let sub = pf_rec(z, rest & !(1u64 << j), memo);
        if sub.is_zero() {
            continue;
        }
        let term = &e * &sub;
        if pos % 2 == 0 {
            acc.add_assign_ref(&term);
        } else {
            acc.add_assign_ref(&-term);
        }
    }
    memo.insert(keep, acc.clone());
    acc
}

fn full_mask(n: usize) -> Result<u64> {
    if n > 63 {
        return Err(Error::Range(format!("Pfaffian of size {n} exceeds the supported 63")));
    }
    Ok((1u64 << n) - 1)
}

/// `Pf(Z)`: zero in odd size, `z_{1,2}` in size 2.
pub fn pfaffian(z: &AltMatrix) -> Result<Poly> {
    Ok(pf_rec(z, full_mask(z.size())?, &mut HashMap::new()))
}

/// `Z_{a_1,…,a_s}`: `σ(a)` times the Pfaffian with rows and columns `a`
/// (1-based) deleted.
pub fn pfaffian_minor(z: &AltMatrix, deleted: &[usize]) -> Result<Poly> {
    let mut idx = deleted.to_vec();
    let Some(sign) = sort_sign(&mut idx) else {
        return Ok(Poly::zero());
    };
    let mut mask = full_mask(z.size())?;
    for &a in &idx {
        if a < 1 || a > z.size() {
            return Err(Error::Range(format!("index {a} outside 1..={}", z.size())));
        }
        mask &= !(1u64 << (a - 1));
    }
    let p = pf_rec(z, mask, &mut HashMap::new());
    Ok(if sign < 0 { -p } else { p })
}

/// `Z_1, …, Z_m`, sharing one memo table.
pub fn maximal_pfaffians(z: &AltMatrix) -> Result<Vec<Poly>> {
    let full = full_mask(z.size())?;
    let mut memo = HashMap::new();
    Ok((0..z.size()).map(|i| pf_rec(z, full & !(1u64 << i), &mut memo)).collect())
}

/// `H_n(x, y, z)` for arbitrary ring elements.
pub fn build_hn_with(n: usize, x: &Poly, y: &Poly, z: &Poly) -> Result<AltMatrix> {
    if n < 1 {
        return Err(Error::Range("H_n needs n >= 1".into()));
    }
    let size = 2 * n + 1;
    let mut upper = Vec::new();
    for i in 1..size {
        upper.push(((i - 1, i), if i % 2 == 1 { x.clone() } else { y.clone() }));
    }
    for i in 1..=size {
        let j = 2 * n + 2 - i;
        if i < j {
            upper.push(((i - 1, j - 1), z.clone()));
        }
    }
    AltMatrix::from_upper(size, upper)
}

/// `H_n` in the variables `x = x1`, `y = x2`, `z = x3`.
pub fn build_hn(n: usize) -> Result<AltMatrix> {
    build_hn_with(n, &Poly::x(1), &Poly::x(2), &Poly::x(3))
}

fn xyz_monomial(a: u32, b: u32, c: u32) -> Monomial {
    Monomial::structural(&[a, b, c])
}

/// `s_i = Σ_j C(i-j, j) x^j y^j z^(i-2j)`.
pub fn s_poly(i: usize) -> Poly {
    let i = i as u32;
    Poly::from_terms((0..=i / 2).map(|j| {
        (xyz_monomial(j, j, i - 2 * j), Rational::from_integer(binomial((i - j) as i64, j as i64)))
    }))
}

/// Closed form of the maximal-order Pfaffians `B_1, …, B_{2n+1}` of `H_n`.
pub fn be_generators(n: usize) -> Result<Vec<Poly>> {
    if n < 1 {
        return Err(Error::Range("BE_n needs n >= 1".into()));
    }
    let mut out = vec![Poly::zero(); 2 * n + 1];
    let power = |v: usize, e: usize| Poly::monomial(Monomial::structural(&{
        let mut ex = [0u32; 3];
        ex[v] = e as u32;
        ex
    }));
    for i in 1..=n + 1 {
        let s = s_poly(i - 1);
        let (xp, yp) = (&power(0, n + 1 - i) * &s, &power(1, n + 1 - i) * &s);
        let (front, back) = if i % 2 == 0 { (xp, yp) } else { (yp, xp) };
        out[i - 1] = front;
        out[2 * n + 1 - i] = back;
    }
    Ok(out)
}

/// The `i`-th Catalan number.
pub fn catalan(i: usize) -> BigInt {
    binomial(2 * i as i64, i as i64) / BigInt::from(i + 1)
}

/// `φ_n = Σ_i (-1)^i c_i x*^(n-1-i) y*^(n-1-i) z*^(2i)`.
pub fn catalan_phi(n: usize) -> Result<InverseSystem> {
    phi_mu(n, 2)
}

/// `φ_{n,μ} = φ_n + χ(μ ≤ 1) x*^(2n-2) + 2χ(μ = 0) y*^(2n-2)`.
pub fn phi_mu(n: usize, mu: u8) -> Result<InverseSystem> {
    if n < 1 {
        return Err(Error::Range("φ_n needs n >= 1".into()));
    }
    if mu > 2 {
        return Err(Error::Range(format!("μ must be 0, 1 or 2, got {mu}")));
    }
    let top = 2 * n as u32 - 2;
    let mut terms: Vec<(Vec<u32>, Rational)> = (0..n as u32)
        .map(|i| {
            let c = Rational::from_integer(catalan(i as usize));
            let e = n as u32 - 1 - i;
            (vec![e, e, 2 * i], if i % 2 == 0 { c } else { -c })
        })
        .collect();
    if mu <= 1 {
        terms.push((vec![top, 0, 0], Rational::one()));
    }
    if mu == 0 {
        terms.push((vec![0, top, 0], Rational::from_integer(2.into())));
    }
    InverseSystem::new(3, n, terms)
}

pub fn inverse_system_element(phi: &InverseSystem) -> DivElement {
    let mut out = DivElement::default();
    for (e, c) in phi.coeffs() {
        out.add_term(DivMonomial(e.clone()), &Poly::constant(c.clone()));
    }
    out
}

/// `ℓ^n(φ)` for `ℓ = αx + βy + γz` with `α, β, γ` the auxiliary symbols
/// `alpha`, `beta`, `gamma`.
pub fn ell_power_contraction(n: usize, phi: &InverseSystem) -> Result<DivElement> {
    if phi.d() != 3 {
        return Err(Error::Range(format!("ℓ^n contraction needs d = 3, got {}", phi.d())));
    }
    let sym = [VarId::Auxiliary("alpha".into()), VarId::Auxiliary("beta".into()), VarId::Auxiliary("gamma".into())];
    let ell_n = Poly::from_terms(
        (0..=n as u32)
            .flat_map(|a| (0..=n as u32 - a).map(move |b| (a, b, n as u32 - a - b)))
            .map(|(a, b, c)| {
                let coef = multinomial(n as i64, &[a as i64, b as i64, c as i64]);
                let m = Monomial::from_pairs(
                    [(VarId::Structural(1), a), (VarId::Structural(2), b), (VarId::Structural(3), c)]
                        .into_iter()
                        .chain([(sym[0].clone(), a), (sym[1].clone(), b), (sym[2].clone(), c)]),
                );
                (m, Rational::from_integer(coef))
            }),
    );
    Ok(inverse_system_element(phi).contract_by_poly(&ell_n, 3))
}

/// Whether `ℓ^n ∈ ann φ` for the rational linear form `ℓ = (α, β, γ)`.
pub fn mu_membership(phi: &InverseSystem, ell: &[Rational; 3], n: usize) -> Result<bool> {
    let table = ell_power_contraction(n, phi)?;
    let value = |v: &VarId| match v {
        VarId::Auxiliary(s) => match s.as_str() {
            "alpha" => Some(Poly::constant(ell[0].clone())),
            "beta" => Some(Poly::constant(ell[1].clone())),
            "gamma" => Some(Poly::constant(ell[2].clone())),
            _ => None,
        },
        _ => None,
    };
    Ok(table.coeffs.values().all(|c| c.substitute(&value).is_zero()))
}

/// Linear forms with integer coefficients in `-bound..=bound`, first nonzero
/// coefficient positive and gcd one, whose `n`-th power annihilates `φ`.
pub fn grid_membership_search(phi: &InverseSystem, n: usize, bound: i64) -> Result<Vec<[i64; 3]>> {
    let table = ell_power_contraction(n, phi)?;
    let mut out = Vec::new();
    for v in (0..3).map(|_| -bound..=bound).multi_cartesian_product() {
        let Some(first) = v.iter().find(|c| **c != 0) else {
            continue;
        };
        let g = v.iter().fold(0i64, |g, &c| num_integer::gcd(g, c));
        if *first < 0 || g != 1 {
            continue;
        }
        let value = |var: &VarId| match var {
            VarId::Auxiliary(s) => {
                let k = ["alpha", "beta", "gamma"].iter().position(|x| x == s)?;
                Some(Poly::int(v[k]))
            }
            _ => None,
        };
        if table.coeffs.values().all(|c| c.substitute(&value).is_zero()) {
            out.push([v[0], v[1], v[2]]);
        }
    }
    Ok(out)
}

/// Slices of `J_{a,b} = (x^a, y^a, z^a) : (x+y+z)^b` in degrees `0..=up_to`.
pub fn wlp_colon_ideal(a: usize, b: usize, up_to: usize) -> Result<Vec<GradedIdealSlice>> {
    let gens: Vec<Poly> = (1..=3).map(|i| Poly::x(i).pow(a as u32)).collect();
    let ell = &(&Poly::x(1) + &Poly::x(2)) + &Poly::x(3);
    colon_ideal_slices(&gens, &ell.pow(b as u32), 3, up_to)
}
