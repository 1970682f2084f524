//! JSON forms of complexes, inverse systems and reports.
//!
//! Polynomials travel as strings in the library's text grammar and exact
//! rationals as `"num/den"` strings, so no value ever passes through a float.

use std::collections::BTreeMap;

use linres::exactbase::{format_rational, parse_rational};
use linres::hookmods::{HookIndex, HookKind};
use linres::inversesys::InverseSystem;
use linres::rescomplex::{ComplexKind, ComplexMeta, FreeComplex, GradedFreeModule, ModuleLabel};
use linres::verify::Report;
use linres::{Error, Poly, Rational, Result, SparseMatrix};
use serde::{Deserialize, Serialize};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MetaJson {
    pub d: usize,
    pub n: Option<usize>,
    pub r: usize,
    pub generic: bool,
    pub kind: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ModuleJson {
    pub labels: Vec<String>,
    pub twists: Vec<[i64; 2]>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MatrixJson {
    pub rows: usize,
    pub cols: usize,
    pub entries: Vec<(usize, usize, String)>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComplexJson {
    pub meta: MetaJson,
    pub modules: Vec<ModuleJson>,
    pub diffs: Vec<MatrixJson>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct InverseSystemJson {
    pub d: usize,
    pub n: usize,
    /// Exponent vector `"e1,...,ed"` to coefficient.
    pub coeffs: BTreeMap<String, Coefficient>,
}

/// A coefficient written either as a JSON integer or as a `"num/den"` string.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Coefficient {
    Int(i64),
    Text(String),
}

impl Coefficient {
    fn value(&self) -> Result<Rational> {
        match self {
            Coefficient::Int(i) => Ok(Rational::from_integer((*i).into())),
            Coefficient::Text(s) => parse_rational(s),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReportJson {
    pub check: String,
    pub passed: bool,
    pub notes: Vec<String>,
    pub failures: Vec<String>,
}

impl From<&Report> for ReportJson {
    fn from(r: &Report) -> Self {
        ReportJson { check: r.check.clone(), passed: r.passed, notes: r.notes.clone(), failures: r.failures.clone() }
    }
}

fn kind_name(k: ComplexKind) -> &'static str {
    match k {
        ComplexKind::LComplex => "l-complex",
        ComplexKind::KComplex => "k-complex",
        ComplexKind::Generic => "generic",
        ComplexKind::Localized => "localized",
        ComplexKind::Specialized => "specialized",
        ComplexKind::Minimal => "minimal",
    }
}

fn parse_kind(s: &str) -> Result<ComplexKind> {
    Ok(match s {
        "l-complex" => ComplexKind::LComplex,
        "k-complex" => ComplexKind::KComplex,
        "generic" => ComplexKind::Generic,
        "localized" => ComplexKind::Localized,
        "specialized" => ComplexKind::Specialized,
        "minimal" => ComplexKind::Minimal,
        other => return Err(Error::Parse(format!("unknown complex kind {other:?}"))),
    })
}

fn parse_indices(s: &str) -> Result<Vec<usize>> {
    if s.is_empty() {
        return Ok(Vec::new());
    }
    s.split(',')
        .map(|x| x.trim().parse().map_err(|_| Error::Parse(format!("bad index {x:?}"))))
        .collect()
}

/// Inverse of the label display: `1`, `omega`, `e<i>`, `l[a;b]`, `k[a;b]`.
pub fn parse_label(s: &str, d: usize) -> Result<ModuleLabel> {
    match s {
        "1" => return Ok(ModuleLabel::Unit),
        "omega" => return Ok(ModuleLabel::Top),
        _ => {}
    }
    if let Some(i) = s.strip_prefix('e') {
        return i.parse().map(ModuleLabel::Plain).map_err(|_| Error::Parse(format!("bad label {s:?}")));
    }
    let bad = || Error::Parse(format!("bad label {s:?}"));
    let kind = match s.chars().next() {
        Some('l') => HookKind::L,
        Some('k') => HookKind::K,
        _ => return Err(bad()),
    };
    let body = s[1..].strip_prefix('[').and_then(|x| x.strip_suffix(']')).ok_or_else(bad)?;
    let (a, b) = body.split_once(';').ok_or_else(bad)?;
    let (a, b) = (parse_indices(a)?, parse_indices(b)?);
    let (p, q) = match kind {
        HookKind::L => (a.len().checked_sub(1).ok_or_else(bad)?, b.len() + 1),
        HookKind::K => (d.checked_sub(a.len() + 1).ok_or_else(bad)?, b.len().checked_sub(1).ok_or_else(bad)?),
    };
    let h = HookIndex { kind, d, p, q, a, b };
    h.validate()?;
    Ok(ModuleLabel::Hook(h))
}

pub fn matrix_to_json(m: &SparseMatrix) -> MatrixJson {
    MatrixJson {
        rows: m.rows(),
        cols: m.cols(),
        entries: m.entries().map(|((i, j), p)| (*i, *j, p.to_string())).collect(),
    }
}

pub fn matrix_from_json(m: &MatrixJson) -> Result<SparseMatrix> {
    let mut out = SparseMatrix::zeros(m.rows, m.cols);
    for (i, j, s) in &m.entries {
        if *i >= m.rows || *j >= m.cols {
            return Err(Error::Shape(format!("entry ({i},{j}) outside {}x{}", m.rows, m.cols)));
        }
        out.set(*i, *j, s.parse::<Poly>()?);
    }
    Ok(out)
}

pub fn complex_to_json(c: &FreeComplex) -> ComplexJson {
    let generic = c.diffs.iter().any(|m| {
        m.entries().any(|(_, p)| p.variables().iter().any(|v| matches!(v, linres::VarId::Coefficient(_))))
    });
    ComplexJson {
        meta: MetaJson { d: c.meta.d, n: c.meta.n, r: c.meta.r, generic, kind: kind_name(c.meta.kind).into() },
        modules: c
            .modules
            .iter()
            .map(|m| ModuleJson {
                labels: m.labels.iter().map(ToString::to_string).collect(),
                twists: m.twists.iter().map(|&(a, b)| [a, b]).collect(),
            })
            .collect(),
        diffs: c.diffs.iter().map(matrix_to_json).collect(),
    }
}

pub fn complex_from_json(j: &ComplexJson) -> Result<FreeComplex> {
    let d = j.meta.d;
    let modules = j
        .modules
        .iter()
        .map(|m| {
            let labels = m.labels.iter().map(|s| parse_label(s, d)).collect::<Result<Vec<_>>>()?;
            GradedFreeModule::new(labels, m.twists.iter().map(|t| (t[0], t[1])).collect())
        })
        .collect::<Result<Vec<_>>>()?;
    let diffs = j.diffs.iter().map(matrix_from_json).collect::<Result<Vec<_>>>()?;
    let meta = ComplexMeta { d, n: j.meta.n, r: j.meta.r, kind: parse_kind(&j.meta.kind)? };
    FreeComplex::new(modules, diffs, meta)
}

pub fn invsys_to_json(phi: &InverseSystem) -> InverseSystemJson {
    InverseSystemJson {
        d: phi.d(),
        n: phi.n(),
        coeffs: phi
            .coeffs()
            .iter()
            .map(|(e, c)| {
                let key = e.iter().map(ToString::to_string).collect::<Vec<_>>().join(",");
                let val = match i64::try_from(c.numer()) {
                    Ok(i) if c.is_integer() => Coefficient::Int(i),
                    _ => Coefficient::Text(format_rational(c)),
                };
                (key, val)
            })
            .collect(),
    }
}

pub fn invsys_from_json(j: &InverseSystemJson) -> Result<InverseSystem> {
    let coeffs = j
        .coeffs
        .iter()
        .map(|(k, v)| {
            let e = k
                .split(',')
                .map(|x| x.trim().parse::<u32>().map_err(|_| Error::Parse(format!("bad exponent key {k:?}"))))
                .collect::<Result<Vec<_>>>()?;
            Ok((e, v.value()?))
        })
        .collect::<Result<Vec<_>>>()?;
    InverseSystem::new(j.d, j.n, coeffs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use linres::pfafflab::catalan_phi;
    use linres::rescomplex::{build_g, build_generic_g};

    #[test]
    fn labels_round_trip() {
        let g = build_generic_g(3, 3, 3).unwrap();
        for m in &g.modules {
            for l in &m.labels {
                assert_eq!(&parse_label(&l.to_string(), 3).unwrap(), l);
            }
        }
    }

    #[test]
    fn complexes_round_trip() {
        for c in [build_generic_g(3, 2, 2).unwrap(), build_g(3, 3, 3, &catalan_phi(3).unwrap()).unwrap()] {
            let j = complex_to_json(&c);
            let text = serde_json::to_string(&j).unwrap();
            let back = complex_from_json(&serde_json::from_str(&text).unwrap()).unwrap();
            assert_eq!(back, c);
        }
    }

    #[test]
    fn catalan_phi3_keys() {
        let j = invsys_to_json(&catalan_phi(3).unwrap());
        assert_eq!(j.coeffs["2,2,0"], Coefficient::Int(1));
        assert_eq!(j.coeffs["1,1,2"], Coefficient::Int(-1));
        assert_eq!(j.coeffs["0,0,4"], Coefficient::Int(2));
        assert_eq!(invsys_from_json(&j).unwrap(), catalan_phi(3).unwrap());
    }

    #[test]
    fn fractional_coefficients_survive() {
        let phi = InverseSystem::new(2, 2, [(vec![1, 1], Rational::new(3.into(), 7.into()))]).unwrap();
        let j = invsys_to_json(&phi);
        assert_eq!(j.coeffs["1,1"], Coefficient::Text("3/7".into()));
        assert_eq!(invsys_from_json(&j).unwrap(), phi);
    }
}
