//! The complex `𝔾'(r)` over `R̃_δ` and minimization of specialized complexes.
//!
//! After inverting `δ = det T`, each vertical map `v_p: L_{p,r} → K_{p,q}` is
//! split by a column operation `J = diag(Adj T, …, Adj T, I)` acting on the
//! labels `ℓ_{1a';x_1^ρ m}` (`ρ = r - n`, `m` of degree `n-1`). Then `v_p J`
//! has the shape `[δE | N]` with `E` constant, and the kernel `X_{p,r}` of
//! `v_p` has an explicit basis with polynomial entries.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::exactbase::linalg::{det_and_adjugate, rref};
use crate::exactbase::{binomial, Poly, Rational, SparseMatrix};
use crate::hookmods::{hook_basis, HookKind};
use crate::rescomplex::{
    build_l_complex, vertical_maps, ComplexKind, ComplexMeta, FreeComplex, GenericPhi, GradedFreeModule,
    ModuleLabel, PhiSource,
};
use crate::multilinear::{sym_basis, SymMonomial};

/// The catalecticant `T = [Φ(m_i m_j)]` over degree-`(n-1)` monomials.
pub fn catalecticant(phi: &dyn PhiSource) -> SparseMatrix {
    let basis = sym_basis(phi.d(), (phi.n() - 1) as u32);
    let rows = basis.iter().map(|a| basis.iter().map(|b| phi.value(&a.add(b))).collect()).collect();
    SparseMatrix::from_dense(rows).expect("square")
}

/// `T`, `Q = Adj T`, `δ = det T` and the splitting `δσ` built from them.
#[derive(Clone, Debug)]
pub struct Splitting {
    pub d: usize,
    pub n: usize,
    pub r: usize,
    pub t: SparseMatrix,
    pub q: SparseMatrix,
    pub delta: Poly,
    index: BTreeMap<SymMonomial, usize>,
}

impl Splitting {
    pub fn new(r: usize, phi: &dyn PhiSource) -> Result<Self> {
        let (d, n) = (phi.d(), phi.n());
        if r < n || r + 2 > 2 * n {
            return Err(Error::Range(format!("splitting needs n <= r <= 2n-2, got n={n}, r={r}")));
        }
        let t = catalecticant(phi);
        let (delta, q) = det_and_adjugate(&t)?;
        if delta.is_zero() {
            return Err(Error::NotCompressed);
        }
        let index = sym_basis(d, (n - 1) as u32).into_iter().enumerate().map(|(i, m)| (m, i)).collect();
        Ok(Splitting { d, n, r, t, q, delta, index })
    }

    pub fn rho(&self) -> usize {
        self.r - self.n
    }

    /// Position in `Sym_{n-1}` of `m` with `ρ` copies of `x_1` removed.
    fn strip(&self, b: &[usize]) -> Option<usize> {
        let rho = self.rho();
        if b.len() < rho || b[..rho].iter().any(|&i| i != 1) {
            return None;
        }
        Some(self.index[&SymMonomial::from_indices(self.d, &b[rho..])])
    }

    /// Coefficient of `x^b` (`|b| = r-1`) in `δσ(m*)` (`|m| = 2n-1-r`), where
    /// `δσ(x*^(a)) = x_1^ρ · Adj(T)(x*^(a + ρe_1))`.
    pub fn sigma_coeff(&self, b: &[usize], m: &SymMonomial) -> Poly {
        let Some(i) = self.strip(b) else {
            return Poly::zero();
        };
        let mut shifted = m.clone();
        shifted.0[0] += self.rho() as u32;
        self.q.get(i, self.index[&shifted])
    }
}

/// Which natural kernel vector a basis column is: `Free(f)` is `e_f` plus
/// pivot terms, `Scaled(c)` is `δe_c` plus pivot terms. Positions are `L_{p,r}`
/// label positions.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Lead {
    Free(usize),
    Scaled(usize),
}

impl Lead {
    pub fn position(&self) -> usize {
        match *self {
            Lead::Free(p) | Lead::Scaled(p) => p,
        }
    }
}

/// An explicit `R̃_δ`-basis of `X_{p,r} = ker v_p`.
#[derive(Clone, Debug)]
pub struct LocalizedBasis {
    pub d: usize,
    pub n: usize,
    pub r: usize,
    pub p: usize,
    /// Basis vectors as columns in `L_{p,r}` label coordinates.
    pub columns: SparseMatrix,
    pub leads: Vec<(Lead, i64)>,
    /// `L_{p,r}` positions of each `Adj T` block, in `T` order.
    pub groups: Vec<Vec<usize>>,
    pub delta: Poly,
    t: SparseMatrix,
}

impl LocalizedBasis {
    pub fn len(&self) -> usize {
        self.leads.len()
    }

    pub fn is_empty(&self) -> bool {
        self.leads.is_empty()
    }

    /// `J⁻¹ = diag(T/δ, …, T/δ, I)` as `(row, col, numerator, power of δ)`.
    pub fn certificate(&self) -> Vec<(usize, usize, Poly, u32)> {
        let mut out = Vec::new();
        let mut grouped = vec![false; self.columns.rows()];
        for g in &self.groups {
            for (i, &gi) in g.iter().enumerate() {
                grouped[gi] = true;
                for (j, &gj) in g.iter().enumerate() {
                    let e = self.t.get(i, j);
                    if !e.is_zero() {
                        out.push((gi, gj, e, 1));
                    }
                }
            }
        }
        for (i, g) in grouped.iter().enumerate() {
            if !g {
                out.push((i, i, Poly::one(), 0));
            }
        }
        out.sort_by_key(|e| (e.0, e.1));
        out
    }

    /// Reorders the basis: entry `k` of `order` is `(L position of a lead, sign)`.
    pub fn present(&mut self, order: &[(usize, i64)]) -> Result<()> {
        if order.len() != self.len() {
            return Err(Error::Shape(format!("presentation of length {} for rank {}", order.len(), self.len())));
        }
        let mut cols = Vec::new();
        let mut leads = Vec::new();
        for &(pos, sign) in order {
            let k = self
                .leads
                .iter()
                .position(|(l, _)| l.position() == pos)
                .ok_or_else(|| Error::Range(format!("no basis vector leads at position {pos}")))?;
            let s = sign * self.leads[k].1;
            let c = Poly::int(sign);
            cols.push(self.columns.column(k).into_iter().map(|(i, e)| (i, &e * &c)).collect());
            leads.push((self.leads[k].0, s));
        }
        self.columns = SparseMatrix::from_columns(self.columns.rows(), cols);
        self.leads = leads;
        Ok(())
    }

    /// Coordinates of `u ∈ X_{p,r}` (given in `L_{p,r}` coordinates) in this
    /// basis; fails unless they are polynomial and reproduce `u`.
    pub fn coordinates(&self, u: &[Poly]) -> Result<Vec<Poly>> {
        let mut group_of = BTreeMap::new();
        for (gi, g) in self.groups.iter().enumerate() {
            for (k, &pos) in g.iter().enumerate() {
                group_of.insert(pos, (gi, k));
            }
        }
        let divide = |p: Poly| {
            p.exact_div(&self.delta)
                .ok_or_else(|| Error::Reduction("coordinate is not polynomial over the localization".into()))
        };
        let mut out = Vec::with_capacity(self.len());
        for &(lead, sign) in &self.leads {
            let raw = match lead {
                Lead::Free(f) => {
                    let (gi, k) = group_of[&f];
                    let mut acc = Poly::zero();
                    for (i, &pos) in self.groups[gi].iter().enumerate() {
                        acc.add_assign_ref(&(&self.t.get(k, i) * &u[pos]));
                    }
                    divide(acc)?
                }
                Lead::Scaled(c) => divide(u[c].clone())?,
            };
            out.push(if sign < 0 { -raw } else { raw });
        }
        let mut back = vec![Poly::zero(); u.len()];
        for (k, c) in out.iter().enumerate() {
            for (i, e) in self.columns.column(k) {
                back[i].add_assign_ref(&(&e * c));
            }
        }
        if back.as_slice() != u {
            return Err(Error::Reduction("vector is not in the span of the kernel basis".into()));
        }
        Ok(out)
    }
}

/// Explicit basis of `X_{p,r}` for the given `Φ` (generic or specialized).
pub fn kernel_basis_x(p: usize, r: usize, phi: &dyn PhiSource) -> Result<LocalizedBasis> {
    let (d, n) = (phi.d(), phi.n());
    let split = Splitting::new(r, phi)?;
    let labels = hook_basis(HookKind::L, d, p, r)?;
    let v = vertical_maps(d, r, phi)?.swap_remove(p);
    let nsym = split.t.rows();

    let mut groups: BTreeMap<Vec<usize>, Vec<usize>> = BTreeMap::new();
    for (pos, l) in labels.iter().enumerate() {
        if l.a[0] != 1 {
            continue;
        }
        if let Some(k) = split.strip(&l.b) {
            groups.entry(l.a[1..].to_vec()).or_insert_with(|| vec![usize::MAX; nsym])[k] = pos;
        }
    }
    let groups: Vec<Vec<usize>> = groups.into_values().collect();
    let mut in_group = vec![false; labels.len()];
    groups.iter().flatten().for_each(|&g| in_group[g] = true);

    let rows = v.rows();
    let vd = v.dense();
    let mut e = vec![vec![Rational::zero(); labels.len()]; rows];
    for g in &groups {
        for (k, &pos) in g.iter().enumerate() {
            for row in 0..rows {
                let mut acc = Poly::zero();
                for (i, &pi) in g.iter().enumerate() {
                    acc.add_assign_ref(&(&vd[row][pi] * &split.q.get(i, k)));
                }
                let c = acc
                    .exact_div(&split.delta)
                    .and_then(|c| if c.is_zero() { Some(Rational::zero()) } else { c.as_constant() })
                    .ok_or_else(|| Error::Reduction(format!("v_{p} J is not δ times a constant on the split block")))?;
                e[row][pos] = c;
            }
        }
    }

    let mut aug: Vec<Vec<Rational>> = e.clone();
    for (i, row) in aug.iter_mut().enumerate() {
        row.extend((0..rows).map(|j| if i == j { Rational::one() } else { Rational::zero() }));
    }
    let (red, pivots) = rref(&aug, labels.len() + rows);
    if pivots.len() != rows || pivots.iter().any(|&c| c >= labels.len()) {
        return Err(Error::Reduction(format!("v_{p} is not split by the adjugate block (rank {} < {rows})", pivots.len())));
    }
    let g: Vec<Vec<Rational>> = red.iter().map(|row| row[labels.len()..].to_vec()).collect();

    let mut cols: Vec<Vec<Poly>> = Vec::new();
    let mut leads = Vec::new();
    for f in (0..labels.len()).filter(|&f| in_group[f] && !pivots.contains(&f)) {
        let mut z = vec![Poly::zero(); labels.len()];
        z[f] = Poly::one();
        for (k, &pc) in pivots.iter().enumerate() {
            z[pc] = Poly::constant(-red[k][f].clone());
        }
        cols.push(z);
        leads.push((Lead::Free(f), 1));
    }
    for c in (0..labels.len()).filter(|&c| !in_group[c]) {
        let mut z = vec![Poly::zero(); labels.len()];
        z[c] = split.delta.clone();
        for (k, &pc) in pivots.iter().enumerate() {
            let mut acc = Poly::zero();
            for (j, gj) in g[k].iter().enumerate() {
                if !gj.is_zero() {
                    acc.add_assign_ref(&vd[j][c].scale(gj));
                }
            }
            z[pc] = -acc;
        }
        cols.push(z);
        leads.push((Lead::Scaled(c), 1));
    }

    let columns: Vec<Vec<(usize, Poly)>> = cols
        .into_iter()
        .map(|mut z| {
            for grp in &groups {
                let old: Vec<Poly> = grp.iter().map(|&pos| z[pos].clone()).collect();
                for (i, &pos) in grp.iter().enumerate() {
                    let mut acc = Poly::zero();
                    for (k, o) in old.iter().enumerate() {
                        if !o.is_zero() {
                            acc.add_assign_ref(&(&split.q.get(i, k) * o));
                        }
                    }
                    z[pos] = acc;
                }
            }
            z.into_iter().enumerate().filter(|(_, e)| !e.is_zero()).collect()
        })
        .collect();
    Ok(LocalizedBasis {
        d,
        n,
        r,
        p,
        columns: SparseMatrix::from_columns(labels.len(), columns),
        leads,
        groups,
        delta: split.delta.clone(),
        t: split.t,
    })
}

/// `𝔏_r(ω)` in `L_{d-2,r}` coordinates: `Kos ∘ κ` applied to
/// `ω ⊗ Σ_m m · δσ(m*)` over monomials `m` of degree `2n-1-r`.
pub fn snake_map(r: usize, phi: &dyn PhiSource) -> Result<SparseMatrix> {
    let d = phi.d();
    if d < 2 {
        return Err(Error::Range("the snake map needs d >= 2".into()));
    }
    let split = Splitting::new(r, phi)?;
    let top = hook_basis(HookKind::L, d, d - 1, r)?;
    let ms = sym_basis(d, (2 * phi.n() - 1 - r) as u32);
    let u: Vec<Poly> = top
        .iter()
        .map(|l| {
            let mut acc = Poly::zero();
            for m in &ms {
                let c = split.sigma_coeff(&l.b, m);
                if !c.is_zero() {
                    acc.add_assign_ref(&(&c * &m.to_poly()));
                }
            }
            acc
        })
        .collect();
    let lc = build_l_complex(d, r)?;
    let kos = lc.d(d);
    let mut out = vec![Poly::zero(); kos.rows()];
    for ((i, j), e) in kos.entries() {
        if !u[*j].is_zero() {
            out[*i].add_assign_ref(&(e * &u[*j]));
        }
    }
    Ok(SparseMatrix::from_columns(out.len(), vec![out.into_iter().enumerate().filter(|(_, e)| !e.is_zero()).collect()]))
}

/// `𝔾'(r)` together with the kernel bases its middle modules are written in.
#[derive(Clone, Debug)]
pub struct GPrime {
    pub complex: FreeComplex,
    pub bases: Vec<LocalizedBasis>,
}

/// Signed orders matching the hand-chosen bases for `(d, n, r) = (3, 2, 2)`.
fn presentation(d: usize, n: usize, r: usize, p: usize) -> Option<Vec<(usize, i64)>> {
    match (d, n, r, p) {
        (3, 2, 2, 0) => Some(vec![(5, 1), (3, 1), (4, 1), (1, 1), (2, 1)]),
        (3, 2, 2, 1) => Some(vec![(2, 1), (4, -1), (5, -1), (6, 1), (7, 1)]),
        _ => None,
    }
}

/// `0 → X_{d-1,r} ⊕ ⋀^d → X_{d-2,r} → ... → X_{0,r} → R` over `R̃_δ`, with
/// maps `h_1`, `δ·Kos` and `[δ·Kos, δ·𝔏_r]` written in the kernel bases.
pub fn build_gprime(r: usize, phi: &dyn PhiSource) -> Result<GPrime> {
    let (d, n) = (phi.d(), phi.n());
    if d < 2 {
        return Err(Error::Range("G' needs d >= 2".into()));
    }
    if r < n || r + 2 > 2 * n {
        return Err(Error::Range(format!("G' needs n <= r <= 2n-2, got n={n}, r={r}")));
    }
    let lc = build_l_complex(d, r)?;
    let mut bases = Vec::new();
    for p in 0..d {
        let mut b = kernel_basis_x(p, r, phi)?;
        if let Some(order) = presentation(d, n, r, p) {
            b.present(&order)?;
        }
        bases.push(b);
    }
    let delta = bases[0].delta.clone();
    let kos_coords = |p: usize| -> Result<Vec<Vec<(usize, Poly)>>> {
        let images = lc.d(p + 1).mul(&bases[p].columns)?.scale(&delta).dense();
        (0..bases[p].len())
            .map(|j| {
                let u: Vec<Poly> = images.iter().map(|row| row[j].clone()).collect();
                Ok(bases[p - 1].coordinates(&u)?.into_iter().enumerate().collect())
            })
            .collect()
    };

    let mut diffs = vec![lc.d(1).mul(&bases[0].columns)?];
    for p in 1..d - 1 {
        diffs.push(SparseMatrix::from_columns(bases[p - 1].len(), kos_coords(p)?));
    }
    let mut last = kos_coords(d - 1)?;
    let snake: Vec<Poly> = snake_map(r, phi)?.column(0).into_iter().fold(
        vec![Poly::zero(); bases[d - 2].columns.rows()],
        |mut acc, (i, e)| {
            acc[i] = &e * &delta;
            acc
        },
    );
    last.push(bases[d - 2].coordinates(&snake)?.into_iter().enumerate().collect());
    diffs.push(SparseMatrix::from_columns(bases[d - 2].len(), last));

    let mut modules = vec![GradedFreeModule::new(vec![ModuleLabel::Unit], vec![(0, 0)])?];
    for (p, b) in bases.iter().enumerate() {
        let mut labels: Vec<ModuleLabel> = (0..b.len()).map(ModuleLabel::Plain).collect();
        let mut twists = vec![(-((r + p) as i64), 0); b.len()];
        if p == d - 1 {
            labels.push(ModuleLabel::Top);
            twists.push((-((2 * n + d - 2) as i64), 0));
        }
        modules.push(GradedFreeModule::new(labels, twists)?);
    }
    let kind = if crate::rescomplex::phi_is_generic(phi) { ComplexKind::Localized } else { ComplexKind::Specialized };
    let complex = FreeComplex::new(modules, diffs, ComplexMeta { d, n: Some(n), r, kind })?;
    Ok(GPrime { complex, bases })
}

/// [`build_gprime`] for the generic `Φ`.
pub fn build_generic_gprime(d: usize, n: usize, r: usize) -> Result<GPrime> {
    build_gprime(r, &GenericPhi::new(d, n)?)
}

/// Expected rank of position `i` (`1 <= i <= d-1`) of `𝔾'(r)`:
/// `rank L_{i-1,r} - rank K_{i-1,2n-2-r}`.
pub fn betti_truncation(d: usize, n: usize, r: usize, i: usize) -> BigInt {
    let (d, n, r, i) = (d as i64, n as i64, r as i64, i as i64);
    binomial(d + r - 1, i - 1 + r) * binomial(i + r - 2, i - 1)
        - binomial(d + 2 * n - r - 2, i - 1) * binomial(d + 2 * n - r - i - 2, d - i)
}

/// Splits off every unit entry of a complex over `k[x]` until none remain.
/// Pivots are taken at the lowest-indexed map, then row-major within it.
pub fn minimize_complex(c: &FreeComplex) -> Result<FreeComplex> {
    if c.diffs.iter().flat_map(|m| m.entries()).any(|(_, e)| {
        e.variables().iter().any(|v| matches!(v, crate::exactbase::VarId::Coefficient(_)))
    }) {
        return Err(Error::Unsupported("minimization needs a complex with constant coefficients".into()));
    }
    let mut mats: Vec<Vec<Vec<Poly>>> = c.diffs.iter().map(|m| m.dense()).collect();
    let mut shapes: Vec<usize> = c.modules.iter().map(|m| m.rank()).collect();
    let mut modules = c.modules.clone();
    while let Some((i, r, col, u)) = find_unit(&mats) {
        let m = &mats[i];
        let uinv = Poly::constant(Rational::one() / u);
        let mut next = Vec::with_capacity(m.len() - 1);
        for (ri, row) in m.iter().enumerate().filter(|(ri, _)| *ri != r) {
            let factor = &row[col] * &uinv;
            let mut new_row = Vec::with_capacity(row.len() - 1);
            for (cj, e) in row.iter().enumerate().filter(|(cj, _)| *cj != col) {
                if factor.is_zero() || m[r][cj].is_zero() {
                    new_row.push(e.clone());
                } else {
                    new_row.push(e - &(&factor * &m[r][cj]));
                }
            }
            let _ = ri;
            next.push(new_row);
        }
        mats[i] = next;
        if i + 1 < mats.len() {
            mats[i + 1].remove(col);
        }
        if i > 0 {
            for row in mats[i - 1].iter_mut() {
                row.remove(r);
            }
        }
        shapes[i + 1] -= 1;
        shapes[i] -= 1;
        remove_basis(&mut modules[i + 1], col);
        remove_basis(&mut modules[i], r);
    }
    while modules.len() > 1 && modules.last().is_some_and(|m| m.rank() == 0) {
        modules.pop();
        mats.pop();
    }
    let diffs = mats
        .iter()
        .zip(modules.windows(2))
        .map(|(m, w)| {
            if m.is_empty() || m[0].is_empty() {
                Ok(SparseMatrix::zeros(w[0].rank(), w[1].rank()))
            } else {
                SparseMatrix::from_dense(m.clone())
            }
        })
        .collect::<Result<Vec<_>>>()?;
    FreeComplex::new(modules, diffs, ComplexMeta { kind: ComplexKind::Minimal, ..c.meta.clone() })
}

fn find_unit(mats: &[Vec<Vec<Poly>>]) -> Option<(usize, usize, usize, Rational)> {
    for (i, m) in mats.iter().enumerate() {
        for (r, row) in m.iter().enumerate() {
            for (c, e) in row.iter().enumerate() {
                if let Some(u) = e.as_constant() {
                    if !u.is_zero() {
                        return Some((i, r, c, u));
                    }
                }
            }
        }
    }
    None
}

fn remove_basis(m: &mut GradedFreeModule, k: usize) {
    m.labels.remove(k);
    m.twists.remove(k);
}
