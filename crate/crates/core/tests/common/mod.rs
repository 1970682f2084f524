//! Fixture loading shared by the integration tests.

#![allow(dead_code)]

use std::collections::BTreeMap;
use std::path::PathBuf;

use linres::exactbase::linalg::det_and_adjugate;
use linres::minimalize::catalecticant;
use linres::rescomplex::{FreeComplex, GenericPhi};
use linres::{Poly, SparseMatrix, VarId};

pub fn fixture_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests").join("fixtures").join(name)
}

/// Reads blocks of the form `name rows cols` followed by `rows` lines of `;`-separated entries.
pub fn load_matrices(name: &str) -> BTreeMap<String, SparseMatrix> {
    let text = std::fs::read_to_string(fixture_path(name)).expect("fixture readable");
    let mut lines = text.lines().filter(|l| !l.trim().is_empty() && !l.starts_with('#'));
    let mut out = BTreeMap::new();
    while let Some(head) = lines.next() {
        let parts: Vec<&str> = head.split_whitespace().collect();
        let (rows, cols): (usize, usize) = (parts[1].parse().unwrap(), parts[2].parse().unwrap());
        let mut dense = Vec::with_capacity(rows);
        for _ in 0..rows {
            let row: Vec<Poly> = lines
                .next()
                .expect("row present")
                .split(';')
                .map(|e| e.trim().parse().expect("entry parses"))
                .collect();
            assert_eq!(row.len(), cols, "row width in block {}", parts[0]);
            dense.push(row);
        }
        out.insert(parts[0].to_string(), SparseMatrix::from_dense(dense).unwrap());
    }
    out
}

/// Lists differing entries, for assertion messages.
pub fn diff_report(got: &SparseMatrix, want: &SparseMatrix) -> String {
    if (got.rows(), got.cols()) != (want.rows(), want.cols()) {
        return format!("shape {}x{} vs {}x{}", got.rows(), got.cols(), want.rows(), want.cols());
    }
    let mut out = String::new();
    for i in 0..got.rows() {
        for j in 0..got.cols() {
            let (g, w) = (got.get(i, j), want.get(i, j));
            if g != w {
                out.push_str(&format!("({i},{j}): got {g}, want {w}\n"));
            }
        }
    }
    out
}

fn block(m: &SparseMatrix, rows: std::ops::Range<usize>, cols: std::ops::Range<usize>) -> SparseMatrix {
    m.submatrix(&rows.collect::<Vec<_>>(), &cols.collect::<Vec<_>>())
}

/// Splits each cone differential into `h_i`, `v_i` and `h'_i`.
pub fn cone_blocks(g: &FreeComplex, top: &[usize], bottom: &[usize]) -> BTreeMap<String, SparseMatrix> {
    let mut out = BTreeMap::new();
    for i in 1..top.len() {
        let m = g.d(i);
        let (ti, tj, bi, bj) = (top[i - 1], top[i], bottom[i - 1], bottom[i]);
        out.insert(format!("h{i}"), block(m, 0..ti, 0..tj));
        out.insert(format!("v{i}"), block(m, ti..ti + bi, 0..tj));
        out.insert(format!("h{i}p"), block(m, ti..ti + bi, tj..tj + bj).neg());
    }
    out
}

/// Replaces the auxiliary symbols of the fixtures by their generic values.
pub fn expand_aux(m: &SparseMatrix) -> SparseMatrix {
    let t = catalecticant(&GenericPhi::new(3, 2).unwrap());
    let (delta, q) = det_and_adjugate(&t).unwrap();
    let mut table: BTreeMap<String, Poly> = BTreeMap::new();
    table.insert("delta".into(), delta);
    for i in 0..3 {
        for j in 0..3 {
            table.insert(format!("Q{}{}", i + 1, j + 1), q.get(i, j));
        }
        let lam = (0..3).fold(Poly::zero(), |acc, j| &acc + &(&Poly::x(j + 1) * &q.get(j, i)));
        table.insert(format!("lam{}", i + 1), lam);
    }
    m.substitute(&|v: &VarId| match v {
        VarId::Auxiliary(s) => Some(table[s].clone()),
        _ => None,
    })
}
