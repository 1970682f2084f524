//! Bases and actions for `Sym_b(U)`, `D_b(U*)` and `⋀^a U` over the ordered
//! variables `x_1..x_d`.
//!
//! Divided powers only appear through dual exponent vectors and the two
//! contraction rules; no divided-power multiplication is needed.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use itertools::Itertools;
use num_bigint::BigInt;

use crate::exactbase::{binomial, Monomial, Poly, Rational};

/// Exponent vector ordered x1-major: `x^2 < xy < xz < y^2 < ...`.
fn cmp_x1_major(a: &[u32], b: &[u32]) -> Ordering {
    b.cmp(a)
}

/// Monomial `x_1^{e_1} ... x_d^{e_d}` of `Sym(U)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SymMonomial(pub Vec<u32>);

/// Dual monomial `x_1*^{(e_1)} ... x_d*^{(e_d)}` of `D(U*)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct DivMonomial(pub Vec<u32>);

macro_rules! exponent_monomial {
    ($t:ident) => {
        impl $t {
            pub fn degree(&self) -> u32 {
                self.0.iter().sum()
            }

            pub fn dim(&self) -> usize {
                self.0.len()
            }

            pub fn one(d: usize) -> Self {
                $t(vec![0; d])
            }

            pub fn unit(d: usize, i: usize) -> Self {
                let mut e = vec![0; d];
                e[i - 1] = 1;
                $t(e)
            }

            /// Weakly increasing 1-based index list, e.g. `x1^2 x3 -> [1,1,3]`.
            pub fn indices(&self) -> Vec<usize> {
                self.0
                    .iter()
                    .enumerate()
                    .flat_map(|(i, &e)| std::iter::repeat(i + 1).take(e as usize))
                    .collect()
            }

            pub fn from_indices(d: usize, idx: &[usize]) -> Self {
                let mut e = vec![0; d];
                for &i in idx {
                    e[i - 1] += 1;
                }
                $t(e)
            }

            pub fn min_index(&self) -> Option<usize> {
                self.0.iter().position(|&e| e > 0).map(|i| i + 1)
            }

            pub fn times_var(&self, i: usize) -> Self {
                let mut e = self.0.clone();
                e[i - 1] += 1;
                $t(e)
            }

            pub fn without_var(&self, i: usize) -> Option<Self> {
                if self.0[i - 1] == 0 {
                    return None;
                }
                let mut e = self.0.clone();
                e[i - 1] -= 1;
                Some($t(e))
            }

            pub fn add(&self, other: &Self) -> Self {
                $t(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
            }
        }

        impl Ord for $t {
            fn cmp(&self, other: &Self) -> Ordering {
                self.degree()
                    .cmp(&other.degree())
                    .then_with(|| cmp_x1_major(&self.0, &other.0))
            }
        }

        impl PartialOrd for $t {
            fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
                Some(self.cmp(other))
            }
        }
    };
}

exponent_monomial!(SymMonomial);
exponent_monomial!(DivMonomial);

impl SymMonomial {
    pub fn to_poly(&self) -> Poly {
        Poly::monomial(self.to_monomial())
    }

    pub fn to_monomial(&self) -> Monomial {
        Monomial::structural(&self.0)
    }

    pub fn dual(&self) -> DivMonomial {
        DivMonomial(self.0.clone())
    }
}

impl DivMonomial {
    pub fn dual(&self) -> SymMonomial {
        SymMonomial(self.0.clone())
    }
}

impl fmt::Display for SymMonomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_monomial())
    }
}

impl fmt::Display for DivMonomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.degree() == 0 {
            return write!(f, "1");
        }
        let parts: Vec<String> = self
            .0
            .iter()
            .enumerate()
            .filter(|(_, &e)| e > 0)
            .map(|(i, &e)| if e == 1 { format!("x{}*", i + 1) } else { format!("x{}*^({e})", i + 1) })
            .collect();
        write!(f, "{}", parts.join("*"))
    }
}

/// Exterior monomial `x_{t_1} ∧ ... ∧ x_{t_a}` with strictly increasing 1-based indices.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ExtMonomial(pub Vec<usize>);

impl ExtMonomial {
    pub fn new(mut idx: Vec<usize>) -> Option<(i32, ExtMonomial)> {
        let sign = sort_sign(&mut idx)?;
        Some((sign, ExtMonomial(idx)))
    }

    pub fn degree(&self) -> usize {
        self.0.len()
    }

    pub fn top(d: usize) -> Self {
        ExtMonomial((1..=d).collect())
    }

    pub fn complement(&self, d: usize) -> ExtMonomial {
        ExtMonomial((1..=d).filter(|i| !self.0.contains(i)).collect())
    }

    pub fn without(&self, pos: usize) -> ExtMonomial {
        let mut v = self.0.clone();
        v.remove(pos);
        ExtMonomial(v)
    }
}

impl fmt::Display for ExtMonomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "1");
        }
        write!(f, "{}", self.0.iter().map(|i| format!("x{i}")).join("^"))
    }
}

/// Sorts in place and returns the permutation sign, or `None` on a repeated index.
pub fn sort_sign(idx: &mut [usize]) -> Option<i32> {
    let mut sign = 1;
    for i in 1..idx.len() {
        let mut j = i;
        while j > 0 && idx[j - 1] > idx[j] {
            idx.swap(j - 1, j);
            sign = -sign;
            j -= 1;
        }
        if j > 0 && idx[j - 1] == idx[j] {
            return None;
        }
    }
    if idx.windows(2).any(|w| w[0] == w[1]) {
        return None;
    }
    Some(sign)
}

/// All degree-`deg` monomials in `d` variables, in canonical order.
pub fn sym_basis(d: usize, deg: u32) -> Vec<SymMonomial> {
    (1..=d)
        .combinations_with_replacement(deg as usize)
        .map(|idx| SymMonomial::from_indices(d, &idx))
        .collect()
}

pub fn div_basis(d: usize, deg: u32) -> Vec<DivMonomial> {
    sym_basis(d, deg).into_iter().map(|m| m.dual()).collect()
}

pub fn ext_basis(d: usize, a: usize) -> Vec<ExtMonomial> {
    (1..=d).combinations(a).map(ExtMonomial).collect()
}

/// Dimension of `Sym_deg` in `d` variables.
pub fn sym_dim(d: usize, deg: i64) -> usize {
    if deg < 0 {
        return 0;
    }
    if d == 0 {
        return (deg == 0) as usize;
    }
    let v = binomial(deg + d as i64 - 1, deg);
    usize::try_from(v).expect("dimension fits in usize")
}

/// `u(w)`: a monomial acting on a dual monomial.
pub fn contract_sym_on_div(u: &SymMonomial, w: &DivMonomial) -> Option<DivMonomial> {
    let mut out = Vec::with_capacity(w.0.len());
    for (a, b) in u.0.iter().zip(&w.0) {
        if a > b {
            return None;
        }
        out.push(b - a);
    }
    Some(DivMonomial(out))
}

/// `w(u)`: a dual monomial acting on a monomial, with binomial weights.
pub fn contract_div_on_sym(w: &DivMonomial, u: &SymMonomial) -> Option<(BigInt, SymMonomial)> {
    let mut out = Vec::with_capacity(u.0.len());
    let mut c = BigInt::from(1);
    for (b, a) in w.0.iter().zip(&u.0) {
        if b > a {
            return None;
        }
        c *= binomial(*a as i64, *b as i64);
        out.push(a - b);
    }
    Some((c, SymMonomial(out)))
}

/// The diagonal pairs `(m, m*)` of `ev*_j(1)`.
pub fn ev_dual(d: usize, j: u32) -> Vec<(SymMonomial, DivMonomial)> {
    sym_basis(d, j).into_iter().map(|m| {
        let w = m.dual();
        (m, w)
    }).collect()
}

/// The `⋀^1 ⊗ ⋀^{a-1}` component of comultiplication: term `i` is
/// `(-1)^{i+1} x_{t_i} ⊗ (t without t_i)`.
pub fn comultiply(t: &ExtMonomial) -> Vec<(i32, usize, ExtMonomial)> {
    (0..t.degree())
        .map(|k| (if k % 2 == 0 { 1 } else { -1 }, t.0[k], t.without(k)))
        .collect()
}

/// The `⋀^{a-1} ⊗ ⋀^1` component, obtained from [`comultiply`] by the graded
/// swap: the sign becomes `(-1)^{a-i}`.
pub fn comultiply_right(t: &ExtMonomial) -> Vec<(i32, usize, ExtMonomial)> {
    let a = t.degree();
    comultiply(t)
        .into_iter()
        .map(|(s, i, rest)| (if (a - 1) % 2 == 0 { s } else { -s }, i, rest))
        .collect()
}

/// `Kos^Ψ(t) = Σ_i (-1)^{i+1} Ψ(x_{t_i}) · (t without t_i)`.
pub fn koszul_contract(psi: &[Poly], t: &ExtMonomial) -> Vec<(Poly, ExtMonomial)> {
    comultiply(t)
        .into_iter()
        .map(|(s, i, rest)| (psi[i - 1].scale(&Rational::from_integer(s.into())), rest))
        .collect()
}

/// An element of `D_b(U*)` with polynomial coefficients.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct DivElement {
    pub coeffs: BTreeMap<DivMonomial, Poly>,
}

impl DivElement {
    pub fn add_term(&mut self, w: DivMonomial, c: &Poly) {
        if c.is_zero() {
            return;
        }
        let e = self.coeffs.entry(w.clone()).or_default();
        e.add_assign_ref(c);
        if e.is_zero() {
            self.coeffs.remove(&w);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `u(self)` for a monomial `u`.
    pub fn contract_by(&self, u: &SymMonomial) -> DivElement {
        let mut out = DivElement::default();
        for (w, c) in &self.coeffs {
            if let Some(w2) = contract_sym_on_div(u, w) {
                out.add_term(w2, c);
            }
        }
        out
    }

    /// `f(self)` for a polynomial `f` in the structural variables, whose other
    /// variables are treated as scalars.
    pub fn contract_by_poly(&self, f: &Poly, d: usize) -> DivElement {
        let mut out = DivElement::default();
        for (m, c) in f.terms() {
            let mut exps = vec![0u32; d];
            let mut scalar = Vec::new();
            for (v, e) in m.pairs() {
                match v {
                    crate::exactbase::VarId::Structural(i) => exps[*i as usize - 1] = *e,
                    other => scalar.push((other.clone(), *e)),
                }
            }
            let coef = Poly::term(c.clone(), Monomial::from_pairs(scalar));
            for (w, wc) in &self.contract_by(&SymMonomial(exps)).coeffs {
                out.add_term(w.clone(), &(wc * &coef));
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn contraction_examples() {
        // x^2 y acting on x*^(3) y*^(1): subtract exponents componentwise
        let u = SymMonomial(vec![2, 1, 0]);
        let w = DivMonomial(vec![3, 1, 0]);
        assert_eq!(contract_sym_on_div(&u, &w), Some(DivMonomial(vec![1, 0, 0])));
        assert_eq!(contract_sym_on_div(&SymMonomial(vec![1, 0, 0]), &DivMonomial(vec![0, 2, 0])), None);
        assert_eq!(contract_sym_on_div(&SymMonomial::one(3), &w), Some(w.clone()));
        // x*(x^3) = C(3,1) x^2
        let (c, m) = contract_div_on_sym(&DivMonomial(vec![1, 0, 0]), &SymMonomial(vec![3, 0, 0])).unwrap();
        assert_eq!(c, BigInt::from(3));
        assert_eq!(m, SymMonomial(vec![2, 0, 0]));
        assert!(contract_div_on_sym(&DivMonomial(vec![2, 0, 0]), &SymMonomial(vec![1, 0, 0])).is_none());
    }

    #[test]
    fn ev_dual_sizes() {
        assert_eq!(ev_dual(3, 0), vec![(SymMonomial::one(3), DivMonomial::one(3))]);
        let e1: Vec<_> = ev_dual(3, 1).into_iter().map(|(m, _)| m.indices()).collect();
        assert_eq!(e1, vec![vec![1], vec![2], vec![3]]);
        assert_eq!(ev_dual(3, 2).len(), 6);
        for d in 1..5 {
            for j in 0..5 {
                assert_eq!(ev_dual(d, j).len(), sym_dim(d, j as i64));
            }
        }
    }

    #[test]
    fn sym_basis_order_is_x1_major() {
        let b: Vec<Vec<usize>> = sym_basis(3, 2).iter().map(|m| m.indices()).collect();
        assert_eq!(b, vec![vec![1, 1], vec![1, 2], vec![1, 3], vec![2, 2], vec![2, 3], vec![3, 3]]);
    }

    #[test]
    fn comultiply_signs() {
        let t = ExtMonomial(vec![1, 2]);
        assert_eq!(
            comultiply(&t),
            vec![(1, 1, ExtMonomial(vec![2])), (-1, 2, ExtMonomial(vec![1]))]
        );
        assert_eq!(comultiply(&ExtMonomial(vec![3])), vec![(1, 3, ExtMonomial(vec![]))]);
        let s: Vec<i32> = comultiply(&ExtMonomial(vec![1, 2, 3])).iter().map(|x| x.0).collect();
        assert_eq!(s, vec![1, -1, 1]);
        // right component on x1^x2: x2 is last so it carries +, x1 carries -
        let r: Vec<i32> = comultiply_right(&t).iter().map(|x| x.0).collect();
        assert_eq!(r, vec![-1, 1]);
    }

    fn kos_vec(psi: &[Poly], v: &BTreeMap<ExtMonomial, Poly>) -> BTreeMap<ExtMonomial, Poly> {
        let mut out: BTreeMap<ExtMonomial, Poly> = BTreeMap::new();
        for (t, c) in v {
            for (p, rest) in koszul_contract(psi, t) {
                out.entry(rest).or_default().add_assign_ref(&(&p * c));
            }
        }
        out.retain(|_, p| !p.is_zero());
        out
    }

    #[test]
    fn koszul_on_two_form() {
        let psi: Vec<Poly> = (1..=3).map(Poly::x).collect();
        let k = koszul_contract(&psi, &ExtMonomial(vec![1, 2]));
        assert_eq!(k, vec![(Poly::x(1), ExtMonomial(vec![2])), (-Poly::x(2), ExtMonomial(vec![1]))]);
    }

    #[test]
    fn koszul_squares_to_zero() {
        for d in 1..=4 {
            let psi: Vec<Poly> = (1..=d).map(Poly::x).collect();
            for a in 0..=d {
                for t in ext_basis(d, a) {
                    let v = BTreeMap::from([(t, Poly::one())]);
                    assert!(kos_vec(&psi, &kos_vec(&psi, &v)).is_empty());
                }
            }
        }
    }

    fn small_exps() -> impl Strategy<Value = Vec<u32>> {
        prop::collection::vec(0u32..4, 3)
    }

    proptest! {
        #[test]
        fn duality_is_kronecker(a in small_exps(), b in small_exps()) {
            let (u, w) = (SymMonomial(a.clone()), DivMonomial(b.clone()));
            if u.degree() == w.degree() {
                let val = contract_div_on_sym(&w, &u).map(|(c, _)| c).unwrap_or_default();
                prop_assert_eq!(val, BigInt::from((a == b) as i64));
            }
        }

        #[test]
        fn module_action_composes(a in small_exps(), b in small_exps(), c in prop::collection::vec(0u32..8, 3)) {
            let (u1, u2, w) = (SymMonomial(a), SymMonomial(b), DivMonomial(c));
            let lhs = contract_sym_on_div(&u2, &w).and_then(|w2| contract_sym_on_div(&u1, &w2));
            let rhs = contract_sym_on_div(&u1.add(&u2), &w);
            prop_assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn ev_dual_reproduces_identity() {
        // Σ_m m*(...) pairing: w ↦ Σ_m <m, w> m* recovers w
        for j in 0..4 {
            for w in div_basis(3, j) {
                let mut hits = Vec::new();
                for (m, ms) in ev_dual(3, j) {
                    if let Some((c, rest)) = contract_div_on_sym(&w, &m) {
                        assert_eq!(rest.degree(), 0);
                        hits.push((c, ms));
                    }
                }
                assert_eq!(hits, vec![(BigInt::from(1), w.clone())]);
            }
        }
    }
}
