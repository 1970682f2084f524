//! Sparse polynomials over the bigraded generic ring.
//!
//! Variables come in three kinds: structural `x_i` of bidegree (1,0),
//! coefficient variables `t_E` of bidegree (0,1) indexed by an exponent
//! vector, and auxiliary symbols of bidegree (0,0).

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use super::Rational;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum VarId {
    /// `x_i`, with `i` counted from 1.
    Structural(u16),
    /// `t_E` for an exponent vector `E`.
    Coefficient(Vec<u8>),
    Auxiliary(String),
}

impl VarId {
    fn kind_rank(&self) -> u8 {
        match self {
            VarId::Structural(_) => 0,
            VarId::Coefficient(_) => 1,
            VarId::Auxiliary(_) => 2,
        }
    }
}

impl Ord for VarId {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (VarId::Structural(a), VarId::Structural(b)) => a.cmp(b),
            // x1-major: the vector with the larger leading exponent comes first
            (VarId::Coefficient(a), VarId::Coefficient(b)) => b.cmp(a),
            (VarId::Auxiliary(a), VarId::Auxiliary(b)) => a.cmp(b),
            _ => self.kind_rank().cmp(&other.kind_rank()),
        }
    }
}

impl PartialOrd for VarId {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for VarId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            VarId::Structural(i) => write!(f, "x{i}"),
            VarId::Coefficient(e) => {
                write!(f, "t[")?;
                for (k, v) in e.iter().enumerate() {
                    if k > 0 {
                        write!(f, ",")?;
                    }
                    write!(f, "{v}")?;
                }
                write!(f, "]")
            }
            VarId::Auxiliary(s) => write!(f, "{s}"),
        }
    }
}

/// A power product, stored as `(variable, exponent)` pairs sorted by variable.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct Monomial(Vec<(VarId, u32)>);

impl Monomial {
    pub fn one() -> Self {
        Monomial(Vec::new())
    }

    pub fn var(v: VarId) -> Self {
        Monomial(vec![(v, 1)])
    }

    pub fn from_pairs(pairs: impl IntoIterator<Item = (VarId, u32)>) -> Self {
        let mut acc: BTreeMap<VarId, u32> = BTreeMap::new();
        for (v, e) in pairs {
            if e > 0 {
                *acc.entry(v).or_insert(0) += e;
            }
        }
        Monomial(acc.into_iter().collect())
    }

    /// Monomial in the structural variables with the given exponent vector.
    pub fn structural(exps: &[u32]) -> Self {
        Monomial(
            exps.iter()
                .enumerate()
                .filter(|(_, &e)| e > 0)
                .map(|(i, &e)| (VarId::Structural(i as u16 + 1), e))
                .collect(),
        )
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn pairs(&self) -> &[(VarId, u32)] {
        &self.0
    }

    pub fn exponent(&self, v: &VarId) -> u32 {
        self.0
            .binary_search_by(|(w, _)| w.cmp(v))
            .map(|k| self.0[k].1)
            .unwrap_or(0)
    }

    /// (structural degree, coefficient degree).
    pub fn bidegree(&self) -> (u32, u32) {
        let mut s = 0;
        let mut c = 0;
        for (v, e) in &self.0 {
            match v {
                VarId::Structural(_) => s += e,
                VarId::Coefficient(_) => c += e,
                VarId::Auxiliary(_) => {}
            }
        }
        (s, c)
    }

    pub fn total_degree(&self) -> u32 {
        self.0.iter().map(|(_, e)| e).sum()
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let (a, b) = (&self.0, &other.0);
        let mut out = Vec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        while i < a.len() && j < b.len() {
            match a[i].0.cmp(&b[j].0) {
                Ordering::Less => {
                    out.push(a[i].clone());
                    i += 1;
                }
                Ordering::Greater => {
                    out.push(b[j].clone());
                    j += 1;
                }
                Ordering::Equal => {
                    out.push((a[i].0.clone(), a[i].1 + b[j].1));
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&a[i..]);
        out.extend_from_slice(&b[j..]);
        Monomial(out)
    }

    /// `self / other` when `other` divides `self`.
    pub fn div(&self, other: &Monomial) -> Option<Monomial> {
        let mut out = Vec::with_capacity(self.0.len());
        let mut j = 0;
        for (v, e) in &self.0 {
            if j < other.0.len() && other.0[j].0 < *v {
                return None;
            }
            if j < other.0.len() && other.0[j].0 == *v {
                let f = other.0[j].1;
                j += 1;
                match e.cmp(&f) {
                    Ordering::Less => return None,
                    Ordering::Equal => {}
                    Ordering::Greater => out.push((v.clone(), e - f)),
                }
            } else {
                out.push((v.clone(), *e));
            }
        }
        if j < other.0.len() {
            return None;
        }
        Some(Monomial(out))
    }
}

/// Term order: bidegree descending, then lexicographic with `x1` most
/// significant and larger exponents first. Iterating a map keyed by
/// `Monomial` therefore yields leading terms first.
impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        let bd = other.bidegree().cmp(&self.bidegree());
        if bd != Ordering::Equal {
            return bd;
        }
        let (a, b) = (&self.0, &other.0);
        let mut i = 0;
        loop {
            match (a.get(i), b.get(i)) {
                (None, None) => return Ordering::Equal,
                (Some(_), None) => return Ordering::Less,
                (None, Some(_)) => return Ordering::Greater,
                (Some((va, ea)), Some((vb, eb))) => match va.cmp(vb) {
                    Ordering::Less => return Ordering::Less,
                    Ordering::Greater => return Ordering::Greater,
                    Ordering::Equal => match eb.cmp(ea) {
                        Ordering::Equal => i += 1,
                        o => return o,
                    },
                },
            }
        }
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "1");
        }
        for (k, (v, e)) in self.0.iter().enumerate() {
            if k > 0 {
                write!(f, "*")?;
            }
            if *e == 1 {
                write!(f, "{v}")?;
            } else {
                write!(f, "{v}^{e}")?;
            }
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct Poly {
    terms: BTreeMap<Monomial, Rational>,
}

impl Poly {
    pub fn zero() -> Self {
        Poly::default()
    }

    pub fn one() -> Self {
        Poly::constant(Rational::one())
    }

    pub fn constant(c: Rational) -> Self {
        Poly::term(c, Monomial::one())
    }

    pub fn int(c: i64) -> Self {
        Poly::constant(Rational::from_integer(BigInt::from(c)))
    }

    pub fn term(c: Rational, m: Monomial) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        Poly { terms }
    }

    pub fn monomial(m: Monomial) -> Self {
        Poly::term(Rational::one(), m)
    }

    pub fn var(v: VarId) -> Self {
        Poly::monomial(Monomial::var(v))
    }

    /// The structural variable `x_i` (1-based).
    pub fn x(i: usize) -> Self {
        Poly::var(VarId::Structural(i as u16))
    }

    /// The coefficient variable `t_E`.
    pub fn t(exps: &[u32]) -> Self {
        Poly::var(VarId::Coefficient(exps.iter().map(|&e| e as u8).collect()))
    }

    pub fn aux(name: &str) -> Self {
        Poly::var(VarId::Auxiliary(name.to_string()))
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (Monomial, Rational)>) -> Self {
        let mut p = Poly::zero();
        for (m, c) in terms {
            p.add_term(m, c);
        }
        p
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Rational)> {
        self.terms.iter()
    }

    pub fn into_terms(self) -> impl Iterator<Item = (Monomial, Rational)> {
        self.terms.into_iter()
    }

    pub fn coeff(&self, m: &Monomial) -> Rational {
        self.terms.get(m).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn leading(&self) -> Option<(&Monomial, &Rational)> {
        self.terms.iter().next()
    }

    pub fn add_term(&mut self, m: Monomial, c: Rational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let s = e.get() + c;
                if s.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = s;
                }
            }
        }
    }

    pub fn add_assign_ref(&mut self, other: &Poly) {
        for (m, c) in &other.terms {
            self.add_term(m.clone(), c.clone());
        }
    }

    /// `self += c * m * other`.
    pub fn add_scaled(&mut self, c: &Rational, m: &Monomial, other: &Poly) {
        if c.is_zero() {
            return;
        }
        for (om, oc) in &other.terms {
            self.add_term(m.mul(om), c * oc);
        }
    }

    pub fn scale(&self, c: &Rational) -> Poly {
        if c.is_zero() {
            return Poly::zero();
        }
        Poly {
            terms: self.terms.iter().map(|(m, v)| (m.clone(), v * c)).collect(),
        }
    }

    pub fn mul_monomial(&self, m: &Monomial) -> Poly {
        Poly {
            terms: self.terms.iter().map(|(k, v)| (k.mul(m), v.clone())).collect(),
        }
    }

    pub fn pow(&self, e: u32) -> Poly {
        let mut acc = Poly::one();
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    /// The constant value if the polynomial has bidegree (0,0) and no auxiliary symbols.
    pub fn as_constant(&self) -> Option<Rational> {
        match self.terms.len() {
            0 => Some(Rational::zero()),
            1 => {
                let (m, c) = self.terms.iter().next().unwrap();
                m.is_one().then(|| c.clone())
            }
            _ => None,
        }
    }

    /// `Some((c, m))` when the polynomial is a single term.
    pub fn as_term(&self) -> Option<(&Rational, &Monomial)> {
        if self.terms.len() == 1 {
            let (m, c) = self.terms.iter().next().unwrap();
            Some((c, m))
        } else {
            None
        }
    }

    /// True when the polynomial is `+m` or `-m` for one monomial `m`.
    pub fn is_signed_monomial(&self) -> bool {
        self.as_term()
            .map(|(c, _)| c.is_integer() && c.abs().is_one())
            .unwrap_or(false)
    }

    /// Bidegree shared by all terms, or the first two terms that disagree.
    pub fn bihomogeneity(&self) -> Result<Option<(u32, u32)>, (Monomial, Monomial)> {
        let mut it = self.terms.keys();
        let Some(first) = it.next() else {
            return Ok(None);
        };
        let bd = first.bidegree();
        for m in it {
            if m.bidegree() != bd {
                return Err((first.clone(), m.clone()));
            }
        }
        Ok(Some(bd))
    }

    pub fn variables(&self) -> Vec<VarId> {
        let mut vs: Vec<VarId> = self
            .terms
            .keys()
            .flat_map(|m| m.0.iter().map(|(v, _)| v.clone()))
            .collect();
        vs.sort();
        vs.dedup();
        vs
    }

    /// Substitute polynomials for variables; variables mapped to `None` stay.
    pub fn substitute(&self, f: &impl Fn(&VarId) -> Option<Poly>) -> Poly {
        let mut cache: BTreeMap<VarId, Option<Poly>> = BTreeMap::new();
        let mut out = Poly::zero();
        for (m, c) in &self.terms {
            let mut acc = Poly::constant(c.clone());
            let mut kept = Vec::new();
            for (v, e) in &m.0 {
                let img = cache.entry(v.clone()).or_insert_with(|| f(v));
                match img {
                    Some(p) => acc = &acc * &p.pow(*e),
                    None => kept.push((v.clone(), *e)),
                }
            }
            if !kept.is_empty() {
                acc = acc.mul_monomial(&Monomial(kept));
            }
            out.add_assign_ref(&acc);
        }
        out
    }

    /// Exact quotient `self / d`, or `None` if `d` does not divide `self`.
    pub fn exact_div(&self, d: &Poly) -> Option<Poly> {
        let (dm, dc) = d.leading()?;
        let (dm, dc) = (dm.clone(), dc.clone());
        let mut rem = self.clone();
        let mut q = Poly::zero();
        while let Some((rm, rc)) = rem.leading() {
            let qm = rm.div(&dm)?;
            let qc = rc / &dc;
            rem.add_scaled(&-qc.clone(), &qm, d);
            q.add_term(qm, qc);
        }
        Some(q)
    }

    /// Content-normalize: divide by the leading coefficient.
    pub fn monic(&self) -> Poly {
        match self.leading() {
            Some((_, c)) => self.scale(&c.recip()),
            None => Poly::zero(),
        }
    }
}

impl From<Rational> for Poly {
    fn from(c: Rational) -> Self {
        Poly::constant(c)
    }
}

impl Add for &Poly {
    type Output = Poly;
    fn add(self, rhs: &Poly) -> Poly {
        let mut out = self.clone();
        out.add_assign_ref(rhs);
        out
    }
}

impl Add for Poly {
    type Output = Poly;
    fn add(mut self, rhs: Poly) -> Poly {
        for (m, c) in rhs.terms {
            self.add_term(m, c);
        }
        self
    }
}

impl Sub for &Poly {
    type Output = Poly;
    fn sub(self, rhs: &Poly) -> Poly {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), -c.clone());
        }
        out
    }
}

impl Sub for Poly {
    type Output = Poly;
    fn sub(self, rhs: Poly) -> Poly {
        &self - &rhs
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        Poly {
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c.clone())).collect(),
        }
    }
}

impl Neg for Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        -&self
    }
}

impl Mul for &Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        let mut out = Poly::zero();
        let (small, big) = if self.len() <= rhs.len() { (self, rhs) } else { (rhs, self) };
        for (m, c) in &small.terms {
            out.add_scaled(c, m, big);
        }
        out
    }
}

impl Mul for Poly {
    type Output = Poly;
    fn mul(self, rhs: Poly) -> Poly {
        &self * &rhs
    }
}

/// Exact fraction text: `n` or `n/d`.
pub fn format_rational(c: &Rational) -> String {
    if c.is_integer() {
        c.numer().to_string()
    } else {
        format!("{}/{}", c.numer(), c.denom())
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (k, (m, c)) in self.terms.iter().enumerate() {
            let neg = c.is_negative();
            let a = c.abs();
            if k == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else if neg {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            if m.is_one() {
                write!(f, "{}", format_rational(&a))?;
            } else if a.is_one() {
                write!(f, "{m}")?;
            } else {
                write!(f, "{}*{m}", format_rational(&a))?;
            }
        }
        Ok(())
    }
}
