//! Sparse matrices with polynomial entries.

use std::collections::BTreeMap;
use std::fmt;

use rayon::prelude::*;

use super::poly::{Poly, VarId};
use super::Rational;
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct SparseMatrix {
    rows: usize,
    cols: usize,
    entries: BTreeMap<(usize, usize), Poly>,
}

impl SparseMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        SparseMatrix { rows, cols, entries: BTreeMap::new() }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = SparseMatrix::zeros(n, n);
        for i in 0..n {
            m.set(i, i, Poly::one());
        }
        m
    }

    pub fn from_dense(rows: Vec<Vec<Poly>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map(|v| v.len()).unwrap_or(0);
        let mut m = SparseMatrix::zeros(r, c);
        for (i, row) in rows.into_iter().enumerate() {
            if row.len() != c {
                return Err(Error::Shape(format!("ragged row {i}: {} vs {c}", row.len())));
            }
            for (j, p) in row.into_iter().enumerate() {
                m.set(i, j, p);
            }
        }
        Ok(m)
    }

    /// Builds a matrix from columns given as sparse `(row, entry)` lists.
    pub fn from_columns(rows: usize, columns: Vec<Vec<(usize, Poly)>>) -> Self {
        let mut m = SparseMatrix::zeros(rows, columns.len());
        for (j, col) in columns.into_iter().enumerate() {
            for (i, p) in col {
                m.add_to(i, j, &p);
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn nnz(&self) -> usize {
        self.entries.len()
    }

    pub fn get(&self, i: usize, j: usize) -> Poly {
        self.entries.get(&(i, j)).cloned().unwrap_or_default()
    }

    pub fn get_ref(&self, i: usize, j: usize) -> Option<&Poly> {
        self.entries.get(&(i, j))
    }

    pub fn set(&mut self, i: usize, j: usize, p: Poly) {
        assert!(i < self.rows && j < self.cols, "index ({i},{j}) out of bounds");
        if p.is_zero() {
            self.entries.remove(&(i, j));
        } else {
            self.entries.insert((i, j), p);
        }
    }

    pub fn add_to(&mut self, i: usize, j: usize, p: &Poly) {
        if p.is_zero() {
            return;
        }
        let cur = self.get(i, j);
        self.set(i, j, &cur + p);
    }

    pub fn entries(&self) -> impl Iterator<Item = (&(usize, usize), &Poly)> {
        self.entries.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn column(&self, j: usize) -> Vec<(usize, Poly)> {
        self.entries
            .iter()
            .filter(|((_, c), _)| *c == j)
            .map(|((r, _), p)| (*r, p.clone()))
            .collect()
    }

    pub fn columns(&self) -> Vec<Vec<(usize, Poly)>> {
        let mut out = vec![Vec::new(); self.cols];
        for ((r, c), p) in &self.entries {
            out[*c].push((*r, p.clone()));
        }
        out
    }

    pub fn row_lists(&self) -> Vec<Vec<(usize, Poly)>> {
        let mut out = vec![Vec::new(); self.rows];
        for ((r, c), p) in &self.entries {
            out[*r].push((*c, p.clone()));
        }
        out
    }

    pub fn transpose(&self) -> SparseMatrix {
        SparseMatrix {
            rows: self.cols,
            cols: self.rows,
            entries: self.entries.iter().map(|((r, c), p)| ((*c, *r), p.clone())).collect(),
        }
    }

    pub fn scale(&self, p: &Poly) -> SparseMatrix {
        let mut out = SparseMatrix::zeros(self.rows, self.cols);
        for ((r, c), q) in &self.entries {
            out.set(*r, *c, q * p);
        }
        out
    }

    pub fn neg(&self) -> SparseMatrix {
        self.scale(&Poly::int(-1))
    }

    pub fn add(&self, other: &SparseMatrix) -> Result<SparseMatrix> {
        if (self.rows, self.cols) != (other.rows, other.cols) {
            return Err(Error::Shape(format!(
                "add {}x{} + {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = self.clone();
        for ((r, c), p) in &other.entries {
            out.add_to(*r, *c, p);
        }
        Ok(out)
    }

    pub fn mul(&self, other: &SparseMatrix) -> Result<SparseMatrix> {
        if self.cols != other.rows {
            return Err(Error::Shape(format!(
                "mul {}x{} * {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let left_rows = self.row_lists();
        let right_rows = other.row_lists();
        let rows: Vec<BTreeMap<usize, Poly>> = left_rows
            .par_iter()
            .map(|lrow| {
                let mut acc: BTreeMap<usize, Poly> = BTreeMap::new();
                for (k, a) in lrow {
                    for (j, b) in &right_rows[*k] {
                        let prod = a * b;
                        acc.entry(*j).or_default().add_assign_ref(&prod);
                    }
                }
                acc
            })
            .collect();
        let mut out = SparseMatrix::zeros(self.rows, other.cols);
        for (i, row) in rows.into_iter().enumerate() {
            for (j, p) in row {
                out.set(i, j, p);
            }
        }
        Ok(out)
    }

    pub fn map(&self, f: impl Fn(&Poly) -> Poly) -> SparseMatrix {
        let mut out = SparseMatrix::zeros(self.rows, self.cols);
        for ((r, c), p) in &self.entries {
            out.set(*r, *c, f(p));
        }
        out
    }

    pub fn substitute(&self, f: &(impl Fn(&VarId) -> Option<Poly> + Sync)) -> SparseMatrix {
        let done: Vec<((usize, usize), Poly)> = self
            .entries
            .par_iter()
            .map(|(k, p)| (*k, p.substitute(f)))
            .collect();
        let mut out = SparseMatrix::zeros(self.rows, self.cols);
        for ((r, c), p) in done {
            out.set(r, c, p);
        }
        out
    }

    pub fn submatrix(&self, rows: &[usize], cols: &[usize]) -> SparseMatrix {
        let mut out = SparseMatrix::zeros(rows.len(), cols.len());
        for (i, &r) in rows.iter().enumerate() {
            for (j, &c) in cols.iter().enumerate() {
                if let Some(p) = self.entries.get(&(r, c)) {
                    out.set(i, j, p.clone());
                }
            }
        }
        out
    }

    pub fn dense(&self) -> Vec<Vec<Poly>> {
        let mut out = vec![vec![Poly::zero(); self.cols]; self.rows];
        for ((r, c), p) in &self.entries {
            out[*r][*c] = p.clone();
        }
        out
    }

    /// Entries as rationals, failing if some entry is not constant.
    pub fn to_rational(&self) -> Result<Vec<Vec<Rational>>> {
        let mut out = vec![vec![Rational::default(); self.cols]; self.rows];
        for ((r, c), p) in &self.entries {
            out[*r][*c] = p
                .as_constant()
                .ok_or_else(|| Error::NotConstant(format!("entry ({r},{c}) = {p}")))?;
        }
        Ok(out)
    }

    pub fn from_rational(m: &[Vec<Rational>]) -> SparseMatrix {
        let r = m.len();
        let c = m.first().map(|v| v.len()).unwrap_or(0);
        let mut out = SparseMatrix::zeros(r, c);
        for (i, row) in m.iter().enumerate() {
            for (j, v) in row.iter().enumerate() {
                out.set(i, j, Poly::constant(v.clone()));
            }
        }
        out
    }

    /// Stacks `[self | other]`.
    pub fn hcat(&self, other: &SparseMatrix) -> Result<SparseMatrix> {
        if self.rows != other.rows {
            return Err(Error::Shape("hcat row mismatch".into()));
        }
        let mut out = SparseMatrix::zeros(self.rows, self.cols + other.cols);
        for ((r, c), p) in &self.entries {
            out.set(*r, *c, p.clone());
        }
        for ((r, c), p) in &other.entries {
            out.set(*r, self.cols + *c, p.clone());
        }
        Ok(out)
    }

    /// Block matrix `[[a, b], [c, d]]`.
    pub fn block(
        a: &SparseMatrix,
        b: &SparseMatrix,
        c: &SparseMatrix,
        d: &SparseMatrix,
    ) -> Result<SparseMatrix> {
        if a.rows != b.rows || c.rows != d.rows || a.cols != c.cols || b.cols != d.cols {
            return Err(Error::Shape(format!(
                "block shapes {}x{} {}x{} / {}x{} {}x{}",
                a.rows, a.cols, b.rows, b.cols, c.rows, c.cols, d.rows, d.cols
            )));
        }
        let mut out = SparseMatrix::zeros(a.rows + c.rows, a.cols + b.cols);
        let place = |out: &mut SparseMatrix, m: &SparseMatrix, r0: usize, c0: usize| {
            for ((r, c), p) in &m.entries {
                out.set(r0 + r, c0 + c, p.clone());
            }
        };
        place(&mut out, a, 0, 0);
        place(&mut out, b, 0, a.cols);
        place(&mut out, c, a.rows, 0);
        place(&mut out, d, a.rows, a.cols);
        Ok(out)
    }

    pub fn permute_columns(&self, order: &[usize]) -> SparseMatrix {
        let rows: Vec<usize> = (0..self.rows).collect();
        self.submatrix(&rows, order)
    }
}

impl fmt::Display for SparseMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, row) in self.dense().iter().enumerate() {
            if i > 0 {
                writeln!(f)?;
            }
            write!(f, "[")?;
            for (j, p) in row.iter().enumerate() {
                if j > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{p}")?;
            }
            write!(f, "]")?;
        }
        Ok(())
    }
}
