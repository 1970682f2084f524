//! Standard bases, ranks, straightening and the maps κ, η for the hook
//! modules `L_{p,q} ⊂ ⋀^p ⊗ Sym_q` and `K_{p,q} ⊂ ⋀^p ⊗ D_q`.
//!
//! `ℓ_{a;b} = κ(x_a ⊗ x_b)` with `|a| = p+1`, `|b| = q-1`, standard when `a_1 <= b_1`.
//! `k_{a;b} = η((x*_a)(ω) ⊗ x*^(b))` with `|a| = d-p-1`, `|b| = q+1`, standard when `b_1 < a_1`.
//! Both κ and η use the `⋀^{a-1} ⊗ ⋀^1` component of comultiplication, so
//! `Kos ⊗ 1` commutes with them and `(1 ⊗ p) ∘ κ = η ∘ (1 ⊗ p)`.
//! `(x*_a)(ω) = ε_a x_A` where `A` is the complement of `a`; the product
//! `x*_{a_1} ∧ ... ∧ x*_{a_k}` acts as the composite of interior products
//! `ι_{a_1} ∘ ... ∘ ι_{a_k}`, so the innermost contraction uses `a_k`.

use std::collections::BTreeMap;
use std::fmt;

use itertools::Itertools;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::exactbase::{binomial, rat, Poly, Rational, SparseMatrix};
use crate::multilinear::{
    comultiply_right, contract_sym_on_div, div_basis, ext_basis, sort_sign, sym_basis,
    DivMonomial, ExtMonomial, SymMonomial,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum HookKind {
    L,
    K,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct HookIndex {
    pub kind: HookKind,
    pub d: usize,
    pub p: usize,
    pub q: usize,
    /// Strictly increasing.
    pub a: Vec<usize>,
    /// Weakly increasing.
    pub b: Vec<usize>,
}

impl HookIndex {
    pub fn is_standard(&self) -> bool {
        match (self.kind, self.a.first(), self.b.first()) {
            (HookKind::L, Some(a1), Some(b1)) => a1 <= b1,
            (HookKind::K, Some(a1), Some(b1)) => b1 < a1,
            _ => true,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let (na, nb) = match self.kind {
            HookKind::L => (self.p + 1, self.q.checked_sub(1)),
            HookKind::K => (self.d.checked_sub(self.p + 1).unwrap_or(usize::MAX), Some(self.q + 1)),
        };
        let ok = self.a.len() == na
            && Some(self.b.len()) == nb
            && self.a.windows(2).all(|w| w[0] < w[1])
            && self.b.windows(2).all(|w| w[0] <= w[1])
            && self.a.iter().chain(&self.b).all(|&i| 1 <= i && i <= self.d);
        if ok {
            Ok(())
        } else {
            Err(Error::Range(format!("invalid hook label {self}")))
        }
    }
}

impl fmt::Display for HookIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let k = match self.kind {
            HookKind::L => "l",
            HookKind::K => "k",
        };
        write!(f, "{k}[{};{}]", self.a.iter().join(","), self.b.iter().join(","))
    }
}

/// Coordinates in a standard hook basis.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct HookVector {
    pub coords: BTreeMap<HookIndex, Poly>,
}

impl HookVector {
    pub fn single(idx: HookIndex, c: Poly) -> Self {
        let mut v = HookVector::default();
        v.add(idx, &c);
        v
    }

    pub fn add(&mut self, idx: HookIndex, c: &Poly) {
        if c.is_zero() {
            return;
        }
        let e = self.coords.entry(idx.clone()).or_default();
        e.add_assign_ref(c);
        if e.is_zero() {
            self.coords.remove(&idx);
        }
    }

    pub fn add_scaled(&mut self, other: &HookVector, c: &Poly) {
        for (k, v) in &other.coords {
            self.add(k.clone(), &(v * c));
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coords.is_empty()
    }
}

fn check_range(kind: HookKind, d: usize, p: usize, q: usize) -> Result<()> {
    let ok = d >= 1 && p < d && (kind == HookKind::K || q >= 1);
    if ok {
        Ok(())
    } else {
        Err(Error::Range(format!("{kind:?} hook module with d={d}, p={p}, q={q}")))
    }
}

/// All standard labels, lexicographic on the concatenation `(a; b)`.
pub fn hook_basis(kind: HookKind, d: usize, p: usize, q: usize) -> Result<Vec<HookIndex>> {
    check_range(kind, d, p, q)?;
    let (na, nb) = match kind {
        HookKind::L => (p + 1, q - 1),
        HookKind::K => (d - p - 1, q + 1),
    };
    let mut out = Vec::new();
    for a in (1..=d).combinations(na) {
        for b in (1..=d).combinations_with_replacement(nb) {
            let idx = HookIndex { kind, d, p, q, a: a.clone(), b };
            if idx.is_standard() {
                out.push(idx);
            }
        }
    }
    Ok(out)
}

/// `L`: `C(d+q-1, p+q) C(p+q-1, p)`; `K`: `C(d+q, p) C(d+q-p-1, q)`.
pub fn rank_formula(kind: HookKind, d: usize, p: usize, q: usize) -> usize {
    let (d, p, q) = (d as i64, p as i64, q as i64);
    let v = match kind {
        HookKind::L => binomial(d + q - 1, p + q) * binomial(p + q - 1, p),
        HookKind::K => binomial(d + q, p) * binomial(d + q - p - 1, q),
    };
    usize::try_from(v).expect("rank fits in usize")
}

/// `ε_a` with `(x*_a)(ω) = ε_a x_A`, equivalently `ω = ε_a x_{a_k} ∧ ... ∧ x_{a_1} ∧ x_A`.
pub fn omega_sign(a: &[usize], d: usize) -> i32 {
    let comp = ExtMonomial(a.to_vec()).complement(d);
    let mut seq: Vec<usize> = a.iter().rev().copied().chain(comp.0).collect();
    sort_sign(&mut seq).expect("a has distinct entries")
}

fn l_label(d: usize, a: &ExtMonomial, m: &SymMonomial) -> HookIndex {
    let p = a.degree() - 1;
    HookIndex { kind: HookKind::L, d, p, q: m.degree() as usize + 1, a: a.0.clone(), b: m.indices() }
}

fn k_label(d: usize, a: &ExtMonomial, w: &DivMonomial) -> HookIndex {
    let p = d - a.degree() - 1;
    HookIndex { kind: HookKind::K, d, p, q: w.degree() as usize - 1, a: a.0.clone(), b: w.indices() }
}

/// Expresses `κ(x_t ⊗ m)` in the standard basis of `L_{p,q}` (`|t| = p+1`, `deg m = q-1`).
///
/// A non-standard pair (`m_1 < t_1`) is rewritten with `κκ(x_c ⊗ m') = 0`
/// where `c = m_1 ∪ t` and `m = x_{m_1} m'`. Every term of the rewrite has
/// first exterior index `m_1 < t_1`, so the leading exterior index strictly
/// decreases and the recursion stops after at most `t_1 - 1` rounds.
pub fn straighten_l(d: usize, t: &ExtMonomial, m: &SymMonomial) -> HookVector {
    let label = l_label(d, t, m);
    if label.is_standard() {
        return HookVector::single(label, Poly::one());
    }
    let b1 = m.min_index().expect("non-standard label has nonempty b");
    let rest = m.without_var(b1).expect("b1 divides m");
    let mut c = t.0.clone();
    c.insert(0, b1);
    let c = ExtMonomial(c);
    let terms = comultiply_right(&c);
    let s0 = terms[0].0;
    let mut out = HookVector::default();
    for (s, i, sub) in terms.into_iter().skip(1) {
        let coef = Poly::constant(rat(-(s * s0) as i64));
        out.add_scaled(&straighten_l(d, &sub, &rest.times_var(i)), &coef);
    }
    out
}

/// Expresses `η((x*_t)(ω) ⊗ w)` in the standard basis of `K_{p,q}`
/// (`|t| = d-p-1`, `deg w = q+1`).
///
/// A non-standard pair (`t_1 <= w_1`) is rewritten with
/// `ηη((x*_{t_2..})(ω) ⊗ x*_{t_1} w) = 0`. The rewritten labels have
/// `b_1 <= t_1 < a_1`, so they are standard and the recursion depth is one.
pub fn straighten_k(d: usize, t: &ExtMonomial, w: &DivMonomial) -> HookVector {
    let label = k_label(d, t, w);
    if label.is_standard() {
        return HookVector::single(label, Poly::one());
    }
    let a1 = t.0[0];
    let tail = ExtMonomial(t.0[1..].to_vec());
    let big_c = tail.complement(d);
    let w_up = w.times_var(a1);
    // η((x*_tail)(ω) ⊗ w_up) = ε_tail Σ_j s_j x_{C∖j} ⊗ x_j(w_up), and
    // x_{C∖j} = ε_{a'} (x*_{a'})(ω) with a' = tail ∪ {j}.
    let mut rel: Vec<(i32, ExtMonomial, DivMonomial)> = Vec::new();
    for (s, j, rest) in comultiply_right(&big_c) {
        let Some(wj) = w_up.without_var(j) else { continue };
        let a_prime = rest.complement(d);
        rel.push((s * omega_sign(&a_prime.0, d), a_prime, wj));
    }
    let pos = rel.iter().position(|(_, a, _)| a == t).expect("target term present");
    let s0 = rel[pos].0;
    let mut out = HookVector::default();
    for (k, (s, a_prime, wj)) in rel.iter().enumerate() {
        if k == pos {
            continue;
        }
        let coef = Poly::constant(rat(-(s * s0) as i64));
        out.add_scaled(&straighten_k(d, a_prime, wj), &coef);
    }
    out
}

/// Ambient key for `⋀^p ⊗ Sym_q`.
pub type SymKey = (ExtMonomial, SymMonomial);
/// Ambient key for `⋀^p ⊗ D_q`.
pub type DivKey = (ExtMonomial, DivMonomial);

/// `κ(x_t ⊗ m)` in the ambient tensor basis.
pub fn kappa_apply(t: &ExtMonomial, m: &SymMonomial) -> Vec<(i32, SymKey)> {
    comultiply_right(t)
        .into_iter()
        .map(|(s, i, rest)| (s, (rest, m.times_var(i))))
        .collect()
}

/// `η(x_t ⊗ w)` in the ambient tensor basis.
pub fn eta_apply(t: &ExtMonomial, w: &DivMonomial) -> Vec<(i32, DivKey)> {
    comultiply_right(t)
        .into_iter()
        .filter_map(|(s, i, rest)| w.without_var(i).map(|w2| (s, (rest, w2))))
        .collect()
}

/// Ambient vector of a standard (or any) label.
pub fn l_ambient(idx: &HookIndex) -> BTreeMap<SymKey, Rational> {
    let mut out = BTreeMap::new();
    let m = SymMonomial::from_indices(idx.d, &idx.b);
    for (s, key) in kappa_apply(&ExtMonomial(idx.a.clone()), &m) {
        *out.entry(key).or_insert_with(Rational::zero) += rat(s as i64);
    }
    out.retain(|_, v| !v.is_zero());
    out
}

pub fn k_ambient(idx: &HookIndex) -> BTreeMap<DivKey, Rational> {
    let mut out = BTreeMap::new();
    let a = ExtMonomial(idx.a.clone());
    let eps = omega_sign(&idx.a, idx.d);
    let w = DivMonomial::from_indices(idx.d, &idx.b);
    for (s, key) in eta_apply(&a.complement(idx.d), &w) {
        *out.entry(key).or_insert_with(Rational::zero) += rat((s * eps) as i64);
    }
    out.retain(|_, v| !v.is_zero());
    out
}

fn ambient_sym_basis(d: usize, p: usize, q: usize) -> Vec<SymKey> {
    ext_basis(d, p)
        .into_iter()
        .cartesian_product(sym_basis(d, q as u32))
        .collect()
}

fn ambient_div_basis(d: usize, p: usize, q: usize) -> Vec<DivKey> {
    ext_basis(d, p)
        .into_iter()
        .cartesian_product(div_basis(d, q as u32))
        .collect()
}

/// Matrix of `κ: ⋀^p ⊗ Sym_q → ⋀^{p-1} ⊗ Sym_{q+1}` in the ambient bases
/// (ordered by exterior part, then monomial).
pub fn kappa_matrix(d: usize, p: usize, q: usize) -> SparseMatrix {
    let src = ambient_sym_basis(d, p, q);
    let tgt = if p == 0 { Vec::new() } else { ambient_sym_basis(d, p - 1, q + 1) };
    let pos: BTreeMap<&SymKey, usize> = tgt.iter().enumerate().map(|(i, k)| (k, i)).collect();
    let mut m = SparseMatrix::zeros(tgt.len(), src.len());
    for (j, (t, mono)) in src.iter().enumerate() {
        for (s, key) in kappa_apply(t, mono) {
            m.add_to(pos[&key], j, &Poly::int(s as i64));
        }
    }
    m
}

/// Matrix of `η: ⋀^p ⊗ D_q → ⋀^{p-1} ⊗ D_{q-1}` in the ambient bases.
pub fn eta_matrix(d: usize, p: usize, q: usize) -> SparseMatrix {
    let src = ambient_div_basis(d, p, q);
    let tgt = if p == 0 || q == 0 { Vec::new() } else { ambient_div_basis(d, p - 1, q - 1) };
    let pos: BTreeMap<&DivKey, usize> = tgt.iter().enumerate().map(|(i, k)| (k, i)).collect();
    let mut m = SparseMatrix::zeros(tgt.len(), src.len());
    for (j, (t, w)) in src.iter().enumerate() {
        for (s, key) in eta_apply(t, w) {
            m.add_to(pos[&key], j, &Poly::int(s as i64));
        }
    }
    m
}

/// `u(w)` for a structural monomial acting on a dual monomial, exposed for
/// callers that build vertical maps.
pub fn sym_on_div(u: &SymMonomial, w: &DivMonomial) -> Option<DivMonomial> {
    contract_sym_on_div(u, w)
}

/// Re-exports used when building matrices from label images.
pub fn label_position(basis: &[HookIndex]) -> BTreeMap<HookIndex, usize> {
    basis.iter().cloned().enumerate().map(|(i, k)| (k, i)).collect()
}

/// `Kos(ℓ)` for a standard `L` label, in the standard basis of `L_{p-1,q}`.
pub fn kos_l(idx: &HookIndex) -> HookVector {
    let mut out = HookVector::default();
    let m = SymMonomial::from_indices(idx.d, &idx.b);
    for (k, &ai) in idx.a.iter().enumerate() {
        let sign = if k % 2 == 0 { 1 } else { -1 };
        let sub = ExtMonomial(idx.a.iter().copied().filter(|&x| x != ai).collect());
        out.add_scaled(&straighten_l(idx.d, &sub, &m), &Poly::x(ai).scale(&rat(sign)));
    }
    out
}

/// `Kos(k)` for a standard `K` label, in the standard basis of `K_{p-1,q}`.
pub fn kos_k(idx: &HookIndex) -> HookVector {
    let d = idx.d;
    let a = ExtMonomial(idx.a.clone());
    let big_a = a.complement(d);
    let eps = omega_sign(&idx.a, d);
    let w = DivMonomial::from_indices(d, &idx.b);
    let mut out = HookVector::default();
    // Kos commutes with η: Kos(η(ε_a x_A ⊗ w)) = ε_a Σ_k (-1)^{k+1} x_{A_k} η(x_{A∖A_k} ⊗ w)
    for (k, &ak) in big_a.0.iter().enumerate() {
        let sign = if k % 2 == 0 { 1 } else { -1 };
        let sub = big_a.without(k);
        let a_prime = sub.complement(d);
        let c = sign * eps * omega_sign(&a_prime.0, d);
        out.add_scaled(&straighten_k(d, &a_prime, &w), &Poly::x(ak).scale(&rat(c as i64)));
    }
    out
}
