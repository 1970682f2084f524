//! The generic complex `𝔾'(2)` for `d = 3`, `n = 2` against hand-typed fixtures
//! written in `Q = Adj T`, `λ = [x1,x2,x3] Q` and `δ = det T`.

mod common;

use common::{diff_report, expand_aux, load_matrices};
use linres::minimalize::{build_generic_gprime, snake_map, GPrime};
use linres::rescomplex::GenericPhi;
use linres::SparseMatrix;
use std::collections::BTreeMap;
use std::sync::OnceLock;

fn gprime() -> &'static GPrime {
    static G: OnceLock<GPrime> = OnceLock::new();
    G.get_or_init(|| build_generic_gprime(3, 2, 2).unwrap())
}

fn fixture(name: &str) -> SparseMatrix {
    static F: OnceLock<BTreeMap<String, SparseMatrix>> = OnceLock::new();
    expand_aux(&F.get_or_init(|| load_matrices("gprime_322.txt"))[name])
}

#[test]
fn kernel_bases_match_hand_chosen_bases() {
    let g = gprime();
    assert_eq!(g.bases[0].columns, fixture("B"), "{}", diff_report(&g.bases[0].columns, &fixture("B")));
    assert_eq!(g.bases[1].columns, fixture("Bp"), "{}", diff_report(&g.bases[1].columns, &fixture("Bp")));
    assert!(g.bases[2].is_empty());
}

#[test]
fn snake_matches_lambda_expansion() {
    let s = snake_map(2, &GenericPhi::new(3, 2).unwrap()).unwrap();
    assert_eq!(s, fixture("snake"), "{}", diff_report(&s, &fixture("snake")));
}

#[test]
fn differentials_match() {
    let c = &gprime().complex;
    assert_eq!(c.ranks(), vec![1, 5, 5, 1]);
    assert_eq!(c.d(1), &fixture("d1"), "{}", diff_report(c.d(1), &fixture("d1")));
    assert_eq!(c.d(3).transpose(), fixture("d1"), "{}", diff_report(&c.d(3).transpose(), &fixture("d1")));
    assert_eq!(c.d(2), &fixture("d2"), "{}", diff_report(c.d(2), &fixture("d2")));
    assert_eq!(c.d(2).transpose(), c.d(2).neg());
    assert!(c.is_complex().unwrap());
}

/// The signed maximal Pfaffians `(-1)^(i+1) Pf_i(d₂)` equal `-δ · d₁`, so `d₁` is
/// `-δ⁻¹` times them; the factor is a unit of the localization either way.
#[test]
fn signed_pfaffians_of_d2_are_minus_delta_times_d1() {
    let c = &gprime().complex;
    let z = linres::pfafflab::AltMatrix::new(c.d(2).clone()).unwrap();
    let pf = linres::pfafflab::maximal_pfaffians(&z).unwrap();
    let delta = &gprime().bases[0].delta;
    for (i, p) in pf.iter().enumerate() {
        let signed = if i % 2 == 0 { p.clone() } else { -p };
        assert_eq!(signed, -(delta * &c.d(1).get(0, i)), "Pfaffian {}", i + 1);
    }
}
