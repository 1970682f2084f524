mod common;

use std::collections::BTreeMap;

use common::cone_blocks;
use linres::rescomplex::build_generic_g;
use linres::SparseMatrix;

fn mismatches(got: &BTreeMap<String, SparseMatrix>, want: &BTreeMap<String, SparseMatrix>) -> String {
    let mut report = String::new();
    for (name, w) in want {
        let r = common::diff_report(&got[name], w);
        if !r.is_empty() {
            report.push_str(&format!("== {name}\n{r}"));
        }
    }
    report
}

#[test]
fn generic_333_matches_printed_matrices() {
    let want = common::load_matrices("generic_333.txt");
    let g = build_generic_g(3, 3, 3).unwrap();
    let got = cone_blocks(&g, &[1, 10, 15, 6], &[3, 8, 6, 1]);
    assert_eq!(want.len(), 9);
    let report = mismatches(&got, &want);
    assert!(report.is_empty(), "{report}");
}

/// The printed `v_1` for `(3,2,2)` has the opposite sign of what the other
/// printed blocks force: with `h_2`, `h'_1`, `v_2` as printed, the square
/// `v_1 h_2 = h'_1 v_2` only commutes for `-v_1`.
#[test]
fn generic_322_matches_printed_matrices_up_to_v1_sign() {
    let mut want = common::load_matrices("generic_322.txt");
    let g = build_generic_g(3, 2, 2).unwrap();
    let got = cone_blocks(&g, &[1, 6, 8, 3], &[1, 3, 3, 1]);

    let printed_v1 = want.remove("v1").unwrap();
    let report = mismatches(&got, &want);
    assert!(report.is_empty(), "{report}");
    assert_eq!(got["v1"], printed_v1.neg());

    let lhs = printed_v1.mul(&want["h2"]).unwrap();
    let rhs = want["h1p"].mul(&want["v2"]).unwrap();
    assert_eq!(lhs, rhs.neg());
    assert!(!lhs.is_zero());
    let rhs3 = want["h2p"].mul(&want["v3"]).unwrap();
    assert_eq!(want["v2"].mul(&want["h3"]).unwrap(), rhs3);
}
