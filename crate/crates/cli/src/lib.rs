//! The `linres` command line: builds complexes, specializes and minimizes
//! them, runs the verification suite, and prints the Pfaffian and colon-ideal
//! tables.

pub mod json;

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};
use linres::exactbase::{RankMode, VarId};
use linres::inversesys::{ideal_slice, inverse_system_from_ideal, minimal_generators, InverseSystem};
use linres::minimalize::{build_generic_gprime, minimize_complex};
use linres::pfafflab::{be_generators, build_hn, catalan_phi, ell_power_contraction, maximal_pfaffians, phi_mu, wlp_colon_ideal};
use linres::rescomplex::{build_g, build_generic_g, specialize, ComplexKind, FreeComplex};
use linres::verify::{
    check_monomiality, check_square_zero, euler_hilbert_identity, expected_h0_truncation, rank_conditions,
    strand_exactness, Report,
};
use linres::{Error, Poly};
use serde::Serialize;

use json::{complex_from_json, complex_to_json, invsys_from_json, invsys_to_json, ReportJson};

#[derive(Debug, Parser)]
#[command(name = "linres", version, about = "Generic linear resolutions of Gorenstein algebras")]
pub struct Cli {
    /// Seed for the probabilistic rank test.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// The generic mapping cone G(r).
    Generic {
        #[arg(long)]
        d: usize,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        r: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// The generic minimal complex G'(r) over the localization at delta.
    Gprime {
        #[arg(long)]
        d: usize,
        #[arg(long)]
        n: usize,
        /// Defaults to n.
        #[arg(long)]
        r: Option<usize>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Substitute an inverse system into a generic complex.
    Specialize {
        #[arg(long)]
        complex: PathBuf,
        #[arg(long)]
        phi: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Build G(r) at an inverse system, optionally minimized.
    Resolve {
        #[arg(long)]
        phi: PathBuf,
        #[arg(long)]
        minimal: bool,
        /// Defaults to n.
        #[arg(long)]
        r: Option<usize>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Inverse systems: the Catalan form or one recovered from ideal generators.
    #[command(subcommand)]
    Invsys(InvsysCommand),
    /// Pfaffian ideals H_n in three variables.
    #[command(subcommand)]
    Pfaffian(PfaffianCommand),
    /// Minimal generators of (x^a, y^a, z^a) : (x+y+z)^b by degree.
    Colon {
        #[arg(long)]
        a: usize,
        #[arg(long)]
        b: usize,
        #[arg(long)]
        upto: usize,
    },
    /// Orbit separators for the three-variable family phi_mu.
    #[command(subcommand)]
    Mu(MuCommand),
    /// Run the verification suite on a complex at an inverse system.
    Verify {
        #[arg(long)]
        complex: PathBuf,
        #[arg(long)]
        phi: PathBuf,
        /// Highest strand degree; defaults to 2n + d + 2.
        #[arg(long)]
        max_degree: Option<i64>,
        #[arg(long)]
        exact_rank: bool,
    },
    /// Write a Macaulay2 script restating the matrices.
    ExportCas {
        #[arg(long)]
        complex: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Debug, Subcommand)]
pub enum InvsysCommand {
    /// The Catalan inverse system, or the orbit representative for `--mu`.
    Catalan {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        mu: Option<u8>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// The inverse system dual to the degree 2n-2 slice of an ideal.
    FromIdeal {
        /// One generator per line; `#` starts a comment.
        #[arg(long)]
        gens: PathBuf,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 3)]
        d: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Debug, Subcommand)]
pub enum PfaffianCommand {
    /// The alternating matrix H_n.
    Hn {
        #[arg(long)]
        n: usize,
    },
    /// Closed-form generators of the ideal of maximal Pfaffians of H_n.
    Gens {
        #[arg(long)]
        n: usize,
        /// Compare against the Pfaffian minors computed directly.
        #[arg(long)]
        check_direct: bool,
    },
}

#[derive(Debug, Subcommand)]
pub enum MuCommand {
    /// Coefficients of the contraction by l^n, with l = alpha x + beta y + gamma z.
    Table {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        mu: u8,
    },
}

/// Why a run did not succeed.
#[derive(Debug)]
pub enum Failure {
    /// Bad input or a library error: exit code 1.
    Invalid { kind: String, message: String },
    /// A check ran and failed: exit code 2.
    Verification,
}

impl Failure {
    pub fn exit_code(&self) -> i32 {
        match self {
            Failure::Invalid { .. } => 1,
            Failure::Verification => 2,
        }
    }

    /// Machine-readable form for stderr.
    pub fn to_json(&self) -> String {
        match self {
            Failure::Invalid { kind, message } => {
                serde_json::json!({ "error": { "kind": kind, "message": message } }).to_string()
            }
            Failure::Verification => serde_json::json!({ "error": { "kind": "Verification" } }).to_string(),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let kind = format!("{e:?}");
        let kind = kind.split('(').next().unwrap_or("Error").to_string();
        Failure::Invalid { kind, message: e.to_string() }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Invalid { kind: "Io".into(), message: e.to_string() }
    }
}

impl From<serde_json::Error> for Failure {
    fn from(e: serde_json::Error) -> Self {
        Failure::Invalid { kind: "Json".into(), message: e.to_string() }
    }
}

type Outcome = std::result::Result<(), Failure>;

fn emit(text: &str, out: Option<&Path>, stdout: &mut dyn Write) -> Outcome {
    match out {
        Some(p) => fs::write(p, text)?,
        None => stdout.write_all(text.as_bytes())?,
    }
    Ok(())
}

fn emit_json(value: &impl Serialize, out: Option<&Path>, stdout: &mut dyn Write) -> Outcome {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    emit(&text, out, stdout)
}

pub fn read_complex(path: &Path) -> std::result::Result<FreeComplex, Failure> {
    Ok(complex_from_json(&serde_json::from_str(&fs::read_to_string(path)?)?)?)
}

pub fn read_invsys(path: &Path) -> std::result::Result<InverseSystem, Failure> {
    Ok(invsys_from_json(&serde_json::from_str(&fs::read_to_string(path)?)?)?)
}

/// `x1, x2, x3` printed as `x, y, z`.
pub fn xyz(p: &Poly) -> String {
    p.to_string().replace("x1", "x").replace("x2", "y").replace("x3", "z")
}

fn poly_degree(p: &Poly) -> u32 {
    p.terms().next().map(|(m, _)| m.total_degree()).unwrap_or(0)
}

pub fn run(cli: Cli, stdout: &mut dyn Write) -> Outcome {
    match cli.command {
        Command::Generic { d, n, r, out } => emit_json(&complex_to_json(&build_generic_g(d, n, r)?), out.as_deref(), stdout),
        Command::Gprime { d, n, r, out } => {
            let g = build_generic_gprime(d, n, r.unwrap_or(n))?;
            emit_json(&complex_to_json(&g.complex), out.as_deref(), stdout)
        }
        Command::Specialize { complex, phi, out } => {
            let c = specialize(&read_complex(&complex)?, &read_invsys(&phi)?)?;
            emit_json(&complex_to_json(&c), out.as_deref(), stdout)
        }
        Command::Resolve { phi, minimal, r, out } => {
            let phi = read_invsys(&phi)?;
            let mut c = build_g(phi.d(), phi.n(), r.unwrap_or(phi.n()), &phi)?;
            if minimal {
                c = minimize_complex(&c)?;
            }
            emit_json(&complex_to_json(&c), out.as_deref(), stdout)
        }
        Command::Invsys(InvsysCommand::Catalan { n, mu, out }) => {
            let phi = match mu {
                Some(m) => phi_mu(n, m)?,
                None => catalan_phi(n)?,
            };
            emit_json(&invsys_to_json(&phi), out.as_deref(), stdout)
        }
        Command::Invsys(InvsysCommand::FromIdeal { gens, n, d, out }) => {
            let text = fs::read_to_string(gens)?;
            let polys = text
                .lines()
                .map(|l| l.split('#').next().unwrap_or("").trim())
                .filter(|l| !l.is_empty())
                .map(str::parse::<Poly>)
                .collect::<linres::Result<Vec<_>>>()?;
            if n == 0 {
                return Err(Error::Range("n must be positive".into()).into());
            }
            let slice = ideal_slice(&polys, d, 2 * n - 2)?;
            emit_json(&invsys_to_json(&inverse_system_from_ideal(&slice, d, n)?), out.as_deref(), stdout)
        }
        Command::Pfaffian(PfaffianCommand::Hn { n }) => {
            let h = build_hn(n)?;
            let cells: Vec<Vec<String>> = h.entries().dense().iter().map(|row| row.iter().map(xyz).collect()).collect();
            let width = cells.iter().flatten().map(String::len).max().unwrap_or(1);
            let mut text = String::new();
            for row in cells {
                let line: Vec<String> = row.iter().map(|c| format!("{c:>width$}")).collect();
                text.push_str(line.join("  ").trim_end());
                text.push('\n');
            }
            emit(&text, None, stdout)
        }
        Command::Pfaffian(PfaffianCommand::Gens { n, check_direct }) => {
            let gens = be_generators(n)?;
            let mut text: String = gens.iter().map(|g| xyz(g) + "\n").collect();
            let mut agree = true;
            if check_direct {
                agree = maximal_pfaffians(&build_hn(n)?)? == gens;
                text.push_str(&format!("# direct Pfaffian minors {}\n", if agree { "agree" } else { "DISAGREE" }));
            }
            emit(&text, None, stdout)?;
            if agree {
                Ok(())
            } else {
                Err(Failure::Verification)
            }
        }
        Command::Colon { a, b, upto } => {
            let gens = minimal_generators(&wlp_colon_ideal(a, b, upto)?)?;
            let mut text = String::new();
            for e in 0..=upto as u32 {
                let here: Vec<String> = gens.iter().filter(|g| poly_degree(g) == e).map(xyz).collect();
                if !here.is_empty() {
                    text.push_str(&format!("degree {e}: {}\n", here.join(", ")));
                }
            }
            emit(&text, None, stdout)
        }
        Command::Mu(MuCommand::Table { n, mu }) => {
            let table = ell_power_contraction(n, &phi_mu(n, mu)?)?;
            let text: String = table.coeffs.iter().map(|(w, c)| format!("{w}: {c}\n")).collect();
            emit(&text, None, stdout)
        }
        Command::Verify { complex, phi, max_degree, exact_rank } => {
            let c = read_complex(&complex)?;
            let phi = read_invsys(&phi)?;
            let reports = verify_suite(&c, &phi, max_degree, if exact_rank { RankMode::Exact } else { RankMode::Probabilistic { seed: cli.seed } })?;
            let passed = reports.iter().all(|r| r.passed);
            let body = serde_json::json!({
                "passed": passed,
                "reports": reports.iter().map(ReportJson::from).collect::<Vec<_>>(),
            });
            emit_json(&body, None, stdout)?;
            if passed {
                Ok(())
            } else {
                Err(Failure::Verification)
            }
        }
        Command::ExportCas { complex, out } => emit(&macaulay2_script(&read_complex(&complex)?), out.as_deref(), stdout),
    }
}

/// Monomiality (for a generic cone), then `d² = 0`, strand exactness, the
/// Euler identity and rank conditions on the complex specialized at `phi`.
pub fn verify_suite(
    c: &FreeComplex,
    phi: &InverseSystem,
    max_degree: Option<i64>,
    mode: RankMode,
) -> std::result::Result<Vec<Report>, Failure> {
    let mut reports = Vec::new();
    let special = match c.meta.kind {
        ComplexKind::Generic => {
            reports.push(check_monomiality(c));
            specialize(c, phi)?
        }
        ComplexKind::Localized => specialize(c, phi)?,
        _ => c.clone(),
    };
    let n = phi.n();
    let (d, r) = (c.meta.d, c.meta.r);
    let top = max_degree.unwrap_or((2 * n + d + 2) as i64);
    let h0 = expected_h0_truncation(phi, r.saturating_sub(n), top.max(0) as usize)?;
    reports.push(check_square_zero(&special)?);
    reports.push(strand_exactness(&special, top, &h0)?);
    let series: Vec<i64> = h0.iter().map(|&x| x as i64).collect();
    let mut euler = euler_hilbert_identity(&special, &series);
    if h0.last().is_some_and(|&x| x != 0) {
        euler.note(format!("H_0 series truncated at degree {top}"));
    }
    reports.push(euler);
    reports.push(rank_conditions(&special, mode)?);
    Ok(reports)
}

fn cas_name(v: &VarId) -> String {
    match v {
        VarId::Coefficient(e) => format!("t_{}", e.iter().map(ToString::to_string).collect::<Vec<_>>().join("_")),
        other => other.to_string(),
    }
}

/// A Macaulay2 script defining the ring, the differentials, and `d² = 0` assertions.
pub fn macaulay2_script(c: &FreeComplex) -> String {
    let mut vars: Vec<VarId> = (1..=c.meta.d as u16).map(VarId::Structural).collect();
    for m in &c.diffs {
        for (_, p) in m.entries() {
            for v in p.variables() {
                if !vars.contains(&v) {
                    vars.push(v);
                }
            }
        }
    }
    let render = |p: &Poly| {
        let mut s = p.to_string();
        for v in &vars {
            if let VarId::Coefficient(_) = v {
                s = s.replace(&v.to_string(), &cas_name(&v));
            }
        }
        s
    };
    let mut out = format!(
        "-- linres export: d={} n={} r={} kind={:?}\nR = QQ[{}];\n",
        c.meta.d,
        c.meta.n.map(|n| n.to_string()).unwrap_or_else(|| "-".into()),
        c.meta.r,
        c.meta.kind,
        vars.iter().map(cas_name).collect::<Vec<_>>().join(", ")
    );
    for (i, m) in c.diffs.iter().enumerate() {
        let rows: Vec<String> = m
            .dense()
            .iter()
            .map(|row| format!("{{{}}}", row.iter().map(&render).collect::<Vec<_>>().join(", ")))
            .collect();
        out.push_str(&format!("d{} = matrix(R, {{{}}});\n", i + 1, rows.join(", ")));
    }
    for i in 1..c.diffs.len() {
        out.push_str(&format!("assert(d{i} * d{} == 0);\n", i + 1));
    }
    out
}
