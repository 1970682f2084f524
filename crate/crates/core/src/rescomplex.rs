//! The complexes `𝕃(Ψ,r)` and `𝕂(Ψ,r)`, the vertical maps `1 ⊗ p_r^Φ` and the
//! generic mapping cone `𝔾(r)`.
//!
//! Modules are stored `F_0` first and `diffs[i]` is `d_{i+1}: F_{i+1} → F_i`.
//! A twist `(a, b)` is the pair printed in the bigraded degree table: the
//! generator sits in `x`-degree `-a` and `t`-degree `b`.

use std::fmt;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::exactbase::{Poly, SparseMatrix};
use crate::hookmods::{
    hook_basis, kos_k, kos_l, label_position, omega_sign, straighten_k, HookIndex, HookKind,
};
use crate::multilinear::{sym_basis, DivMonomial, ExtMonomial, SymMonomial};

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ModuleLabel {
    /// The free generator of `R` in position 0.
    Unit,
    /// The generator `x_1 ∧ ... ∧ x_d` of `⋀^d`.
    Top,
    Hook(HookIndex),
    /// A basis vector with no structural meaning (minimized or reordered complexes).
    Plain(usize),
}

impl fmt::Display for ModuleLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ModuleLabel::Unit => write!(f, "1"),
            ModuleLabel::Top => write!(f, "omega"),
            ModuleLabel::Hook(h) => write!(f, "{h}"),
            ModuleLabel::Plain(i) => write!(f, "e{i}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct GradedFreeModule {
    pub labels: Vec<ModuleLabel>,
    pub twists: Vec<(i64, i64)>,
}

impl GradedFreeModule {
    pub fn new(labels: Vec<ModuleLabel>, twists: Vec<(i64, i64)>) -> Result<Self> {
        if labels.len() != twists.len() {
            return Err(Error::Shape(format!("{} labels vs {} twists", labels.len(), twists.len())));
        }
        Ok(GradedFreeModule { labels, twists })
    }

    fn uniform(labels: Vec<ModuleLabel>, twist: (i64, i64)) -> Self {
        let twists = vec![twist; labels.len()];
        GradedFreeModule { labels, twists }
    }

    pub fn rank(&self) -> usize {
        self.labels.len()
    }

    pub fn direct_sum(&self, other: &GradedFreeModule) -> GradedFreeModule {
        GradedFreeModule {
            labels: self.labels.iter().chain(&other.labels).cloned().collect(),
            twists: self.twists.iter().chain(&other.twists).copied().collect(),
        }
    }

    /// Bidegree `(x, t)` of generator `i`.
    pub fn generator_degree(&self, i: usize) -> (i64, i64) {
        let (a, b) = self.twists[i];
        (-a, b)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ComplexKind {
    LComplex,
    KComplex,
    Generic,
    /// The minimal complex `𝔾'(r)` over `R̃_δ`, with generic coefficients.
    Localized,
    Specialized,
    Minimal,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ComplexMeta {
    pub d: usize,
    pub n: Option<usize>,
    pub r: usize,
    pub kind: ComplexKind,
}

#[derive(Clone, Debug, PartialEq)]
pub struct FreeComplex {
    pub modules: Vec<GradedFreeModule>,
    pub diffs: Vec<SparseMatrix>,
    pub meta: ComplexMeta,
}

impl FreeComplex {
    pub fn new(modules: Vec<GradedFreeModule>, diffs: Vec<SparseMatrix>, meta: ComplexMeta) -> Result<Self> {
        if modules.len() != diffs.len() + 1 {
            return Err(Error::Shape(format!("{} modules for {} maps", modules.len(), diffs.len())));
        }
        for (i, m) in diffs.iter().enumerate() {
            if m.rows() != modules[i].rank() || m.cols() != modules[i + 1].rank() {
                return Err(Error::Shape(format!(
                    "d_{} is {}x{} between ranks {} and {}",
                    i + 1,
                    m.rows(),
                    m.cols(),
                    modules[i + 1].rank(),
                    modules[i].rank()
                )));
            }
        }
        Ok(FreeComplex { modules, diffs, meta })
    }

    /// Index of the last module.
    pub fn length(&self) -> usize {
        self.diffs.len()
    }

    pub fn ranks(&self) -> Vec<usize> {
        self.modules.iter().map(|m| m.rank()).collect()
    }

    /// `d_i: F_i → F_{i-1}` for `1 <= i <= length`.
    pub fn d(&self, i: usize) -> &SparseMatrix {
        &self.diffs[i - 1]
    }

    /// Products `d_i d_{i+1}`, each of which should vanish.
    pub fn compositions(&self) -> Result<Vec<SparseMatrix>> {
        self.diffs.par_windows(2).map(|w| w[0].mul(&w[1])).collect()
    }

    pub fn is_complex(&self) -> Result<bool> {
        Ok(self.compositions()?.iter().all(|m| m.is_zero()))
    }

    /// Substitutes every entry.
    pub fn map_entries(&self, f: &(impl Fn(&crate::exactbase::VarId) -> Option<Poly> + Sync)) -> FreeComplex {
        FreeComplex {
            modules: self.modules.clone(),
            diffs: self.diffs.iter().map(|m| m.substitute(f)).collect(),
            meta: self.meta.clone(),
        }
    }
}

/// Anything that supplies the value of `Φ` (or `φ`) on a degree-`(2n-2)` monomial.
pub trait PhiSource: Sync {
    fn d(&self) -> usize;
    fn n(&self) -> usize;
    fn value(&self, m: &SymMonomial) -> Poly;
}

/// `Φ = Σ_E t_E ⊗ E*` over all exponent vectors `E` of degree `2n-2`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct GenericPhi {
    pub d: usize,
    pub n: usize,
}

impl GenericPhi {
    pub fn new(d: usize, n: usize) -> Result<Self> {
        if d == 0 || n == 0 {
            return Err(Error::Range(format!("generic inverse system with d={d}, n={n}")));
        }
        Ok(GenericPhi { d, n })
    }

    /// Number of `t`-variables.
    pub fn num_variables(&self) -> usize {
        crate::multilinear::sym_dim(self.d, 2 * self.n as i64 - 2)
    }
}

impl PhiSource for GenericPhi {
    fn d(&self) -> usize {
        self.d
    }
    fn n(&self) -> usize {
        self.n
    }
    fn value(&self, m: &SymMonomial) -> Poly {
        Poly::t(&m.0)
    }
}

fn hook_module(kind: HookKind, d: usize, p: usize, q: usize, twist: (i64, i64)) -> Result<GradedFreeModule> {
    let labels = hook_basis(kind, d, p, q)?.into_iter().map(ModuleLabel::Hook).collect();
    Ok(GradedFreeModule::uniform(labels, twist))
}

fn hook_labels(m: &GradedFreeModule) -> Vec<HookIndex> {
    m.labels
        .iter()
        .filter_map(|l| match l {
            ModuleLabel::Hook(h) => Some(h.clone()),
            _ => None,
        })
        .collect()
}

fn matrix_from_images(
    target: &[HookIndex],
    source: &[HookIndex],
    image: impl Fn(&HookIndex) -> crate::hookmods::HookVector + Sync,
) -> SparseMatrix {
    let pos = label_position(target);
    let columns: Vec<Vec<(usize, Poly)>> = source
        .par_iter()
        .map(|s| image(s).coords.into_iter().map(|(k, c)| (pos[&k], c)).collect())
        .collect();
    SparseMatrix::from_columns(target.len(), columns)
}

/// `L_{0,r} → R`: `ℓ_{a;b} ↦ x_a x_b`.
fn rightmost_map(l0: &[HookIndex]) -> SparseMatrix {
    let columns = l0
        .iter()
        .map(|h| {
            let mut idx = h.a.clone();
            idx.extend(&h.b);
            vec![(0, SymMonomial::from_indices(h.d, &idx).to_poly())]
        })
        .collect();
    SparseMatrix::from_columns(1, columns)
}

/// `⋀^d → K_{d-1,q}`: `ω ↦ Σ_m m · k_{;m}` over monomials `m` of degree `q+1`.
fn leftmost_map(d: usize, target: &[HookIndex]) -> SparseMatrix {
    let pos = label_position(target);
    let mut col = Vec::new();
    for m in sym_basis(d, (target[0].q + 1) as u32) {
        let v = straighten_k(d, &ExtMonomial(Vec::new()), &m.dual());
        for (k, c) in v.coords {
            col.push((pos[&k], &c * &m.to_poly()));
        }
    }
    SparseMatrix::from_columns(target.len(), vec![col])
}

/// `0 → L_{d-1,r} → ... → L_{0,r} → R`, with `R` in position 0.
pub fn build_l_complex(d: usize, r: usize) -> Result<FreeComplex> {
    if r < 1 || d < 1 {
        return Err(Error::Range(format!("L complex needs d >= 1 and r >= 1, got d={d}, r={r}")));
    }
    let ri = r as i64;
    let mut modules = vec![GradedFreeModule::uniform(vec![ModuleLabel::Unit], (0, 0))];
    for p in 0..d {
        modules.push(hook_module(HookKind::L, d, p, r, (-ri - p as i64, 0))?);
    }
    let mut diffs = vec![rightmost_map(&hook_labels(&modules[1]))];
    for p in 1..d {
        diffs.push(matrix_from_images(&hook_labels(&modules[p]), &hook_labels(&modules[p + 1]), kos_l));
    }
    FreeComplex::new(modules, diffs, ComplexMeta { d, n: None, r, kind: ComplexKind::LComplex })
}

/// `0 → ⋀^d → K_{d-1,q} → ... → K_{0,q}` with `q = 2n-2-r`, `K_{0,q}` in position 0.
pub fn build_k_complex(d: usize, n: usize, r: usize) -> Result<FreeComplex> {
    if d < 1 || r < 1 || 2 * n < r + 2 {
        return Err(Error::Range(format!("K complex needs 1 <= r <= 2n-2, got n={n}, r={r}")));
    }
    let q = 2 * n - 2 - r;
    let ri = r as i64;
    let mut modules = Vec::new();
    for p in 0..d {
        modules.push(hook_module(HookKind::K, d, p, q, (-ri - p as i64, -1))?);
    }
    modules.push(GradedFreeModule::uniform(vec![ModuleLabel::Top], (-2 * n as i64 - d as i64 + 2, -1)));
    let mut diffs = Vec::new();
    for p in 1..d {
        diffs.push(matrix_from_images(&hook_labels(&modules[p - 1]), &hook_labels(&modules[p]), kos_k));
    }
    diffs.push(leftmost_map(d, &hook_labels(&modules[d - 1])));
    FreeComplex::new(modules, diffs, ComplexMeta { d, n: Some(n), r, kind: ComplexKind::KComplex })
}

/// `v(ℓ_{a;b}) = Σ_c Φ(x_b x_c) · η(x_a ⊗ c*)` over `|c| = 2n-1-r`.
fn vertical_image(phi: &dyn PhiSource, r: usize, l: &HookIndex) -> crate::hookmods::HookVector {
    let d = l.d;
    let n = phi.n();
    let xb = SymMonomial::from_indices(d, &l.b);
    let a = ExtMonomial(l.a.clone());
    let big = a.complement(d);
    let eps = omega_sign(&big.0, d);
    let mut out = crate::hookmods::HookVector::default();
    for c in sym_basis(d, (2 * n - 1 - r) as u32) {
        let coef = phi.value(&xb.add(&c));
        if coef.is_zero() {
            continue;
        }
        let coef = coef.scale(&crate::exactbase::rat(eps as i64));
        let w: DivMonomial = c.dual();
        out.add_scaled(&straighten_k(d, &big, &w), &coef);
    }
    out
}

/// Matrices of `1 ⊗ p_r^Φ: L_{p,r} → K_{p,2n-2-r}` for `p = 0..d-1`.
pub fn vertical_maps(d: usize, r: usize, phi: &dyn PhiSource) -> Result<Vec<SparseMatrix>> {
    let n = phi.n();
    if phi.d() != d || r < 1 || 2 * n < r + 2 {
        return Err(Error::Range(format!("vertical maps need 1 <= r <= 2n-2 and matching d, got d={d}, n={n}, r={r}")));
    }
    let q = 2 * n - 2 - r;
    (0..d)
        .map(|p| {
            let src = hook_basis(HookKind::L, d, p, r)?;
            let tgt = hook_basis(HookKind::K, d, p, q)?;
            Ok(matrix_from_images(&tgt, &src, |l| vertical_image(phi, r, l)))
        })
        .collect()
}

/// Mapping cone with `𝔾_i = T_i ⊕ B_i` and `m_i = [[h_i, 0], [v_i, -h'_i]]`,
/// where `T` is `𝕃(Ψ,r)` and `B` is `𝕂(Ψ,r)`.
pub fn build_generic_g(d: usize, n: usize, r: usize) -> Result<FreeComplex> {
    build_g(d, n, r, &GenericPhi::new(d, n)?)
}

/// Same as [`build_generic_g`] with an arbitrary source for `Φ`.
pub fn build_g(d: usize, n: usize, r: usize, phi: &dyn PhiSource) -> Result<FreeComplex> {
    if phi.n() != n {
        return Err(Error::Range(format!("inverse system has n={}, expected {n}", phi.n())));
    }
    let top = build_l_complex(d, r)?;
    let bottom = build_k_complex(d, n, r)?;
    let v = vertical_maps(d, r, phi)?;
    let modules: Vec<GradedFreeModule> =
        top.modules.iter().zip(&bottom.modules).map(|(t, b)| t.direct_sum(b)).collect();
    let mut diffs = Vec::new();
    for i in 1..=d {
        let h = top.d(i);
        let hp = bottom.d(i).neg();
        let zero = SparseMatrix::zeros(h.rows(), hp.cols());
        diffs.push(SparseMatrix::block(h, &zero, &v[i - 1], &hp)?);
    }
    let kind = if phi_is_generic(phi) { ComplexKind::Generic } else { ComplexKind::Specialized };
    FreeComplex::new(modules, diffs, ComplexMeta { d, n: Some(n), r, kind })
}

pub(crate) fn phi_is_generic(phi: &dyn PhiSource) -> bool {
    let probe = SymMonomial::from_indices(phi.d(), &vec![1; 2 * phi.n() - 2]);
    phi.value(&probe).variables().iter().any(|v| matches!(v, crate::exactbase::VarId::Coefficient(_)))
}

/// Substitutes `t_E ↦ φ(E)` in a generic complex.
pub fn specialize(c: &FreeComplex, phi: &dyn PhiSource) -> Result<FreeComplex> {
    let n = c.meta.n.ok_or_else(|| Error::Range("complex carries no n".into()))?;
    if phi.d() != c.meta.d || phi.n() != n {
        return Err(Error::Range(format!(
            "inverse system (d={}, n={}) does not match complex (d={}, n={n})",
            phi.d(),
            phi.n(),
            c.meta.d
        )));
    }
    let d = c.meta.d;
    let sub = |v: &crate::exactbase::VarId| match v {
        crate::exactbase::VarId::Coefficient(e) => {
            let m = SymMonomial(e.iter().map(|&x| x as u32).collect());
            (m.0.len() == d).then(|| phi.value(&m))
        }
        _ => None,
    };
    let mut out = c.map_entries(&sub);
    out.meta.kind = ComplexKind::Specialized;
    Ok(out)
}
