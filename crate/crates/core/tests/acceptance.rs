//! Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any
//! failure. Run with `cargo test --test acceptance`.

mod common;

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

use linres::exactbase::linalg::{det_bareiss, RankMode};
use linres::exactbase::{binomial, multinomial, rat, Rational};
use linres::inversesys::{
    ann_slice, betti_linear, delta, hilbert_compressed, ideal_slice, inverse_system_from_ideal, t_matrix,
    InverseSystem,
};
use linres::minimalize::{betti_truncation, build_generic_gprime, minimize_complex};
use linres::multilinear::{sym_basis, sym_dim, DivMonomial, SymMonomial};
use linres::pfafflab::{
    be_generators, build_hn, catalan, catalan_phi, ell_power_contraction, grid_membership_search,
    inverse_system_element, mu_membership, pfaffian, pfaffian_minor, phi_mu, wlp_colon_ideal, AltMatrix,
};
use linres::rescomplex::{build_g, build_generic_g, FreeComplex};
use linres::verify::{
    check_monomiality, check_square_zero, euler_hilbert_identity, expected_h0_compressed, expected_h0_truncation,
    rank_conditions, strand_exactness,
};
use linres::Poly;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Check = std::result::Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> std::result::Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn p(s: &str) -> Poly {
    s.parse().expect("test polynomial parses")
}

fn c1_golden_333() -> Check {
    let want = common::load_matrices("generic_333.txt");
    let g = build_generic_g(3, 3, 3).map_err(|e| e.to_string())?;
    let got = common::cone_blocks(&g, &[1, 10, 15, 6], &[3, 8, 6, 1]);
    ensure(want.len() == 9, || format!("fixture has {} blocks", want.len()))?;
    for (name, w) in &want {
        let r = common::diff_report(&got[name], w);
        ensure(r.is_empty(), || format!("{name}: {r}"))?;
    }
    Ok("h1..h3, v1..v3, h1'..h3' match entry for entry".into())
}

fn c2_golden_gprime() -> Check {
    let want = common::load_matrices("gprime_322.txt");
    let g = build_generic_gprime(3, 2, 2).map_err(|e| e.to_string())?;
    let c = &g.complex;
    ensure(c.ranks() == [1, 5, 5, 1], || format!("ranks {:?}", c.ranks()))?;
    let d1 = common::expand_aux(&want["d1"]);
    let d2 = common::expand_aux(&want["d2"]);
    ensure(c.d(1) == &d1, || format!("d1: {}", common::diff_report(c.d(1), &d1)))?;
    ensure(c.d(2) == &d2, || format!("d2: {}", common::diff_report(c.d(2), &d2)))?;
    ensure(c.d(3).transpose() == d1, || "d3 is not d1 transposed".into())?;
    let z = AltMatrix::new(c.d(2).clone()).map_err(|e| e.to_string())?;
    let delta = &g.bases[0].delta;
    for i in 1..=5 {
        let signed = if i % 2 == 1 { pfaffian_minor(&z, &[i]) } else { pfaffian_minor(&z, &[i]).map(|x| -x) }
            .map_err(|e| e.to_string())?;
        ensure(signed == -(delta * &c.d(1).get(0, i - 1)), || format!("Pfaffian {i}"))?;
    }
    Ok("d1, d2, d3 = d1^T match; the signed Pfaffians (-1)^(i+1) Pf_i(d2) equal -delta*d1_i, \
        so d1 is -delta^-1 times them (a unit multiple)"
        .into())
}

fn sweep() -> Vec<(usize, usize, usize)> {
    let mut out = Vec::new();
    for d in 1..=3 {
        for n in 2..=4 {
            for r in n..=2 * n - 2 {
                out.push((d, n, r));
            }
        }
    }
    out.push((4, 2, 2));
    out
}

fn sweep_complexes() -> std::result::Result<Vec<((usize, usize, usize), FreeComplex)>, String> {
    use rayon::prelude::*;
    sweep()
        .into_par_iter()
        .map(|(d, n, r)| build_generic_g(d, n, r).map(|g| ((d, n, r), g)).map_err(|e| format!("({d},{n},{r}): {e}")))
        .collect()
}

fn c3_square_zero(all: &[((usize, usize, usize), FreeComplex)]) -> Check {
    for (k, g) in all {
        let r = check_square_zero(g).map_err(|e| e.to_string())?;
        ensure(r.passed, || format!("{k:?}: {:?}", r.failures.first()))?;
    }
    Ok(format!("{} complexes", all.len()))
}

fn c4_monomiality(all: &[((usize, usize, usize), FreeComplex)]) -> Check {
    let mut entries = 0;
    for (k, g) in all {
        let r = check_monomiality(g);
        ensure(r.passed, || format!("{k:?}: {:?}", r.failures.first()))?;
        entries += g.diffs.iter().map(|m| m.nnz()).sum::<usize>();
    }
    Ok(format!("{entries} nonzero entries over {} complexes", all.len()))
}

fn c5_pfaffians() -> Check {
    for n in 1..=5 {
        let h = build_hn(n).map_err(|e| e.to_string())?;
        let direct: Vec<Poly> = (1..=2 * n + 1).map(|i| pfaffian_minor(&h, &[i]).unwrap()).collect();
        ensure(direct == be_generators(n).unwrap(), || format!("n={n}"))?;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut count = 0;
    for size in 1..=8 {
        for _ in 0..6 {
            let upper = (0..size).flat_map(|i| (i + 1..size).map(move |j| (i, j))).map(|ij| (ij, Poly::int(rng.gen_range(-9..=9))));
            let z = AltMatrix::from_upper(size, upper.collect::<Vec<_>>()).map_err(|e| e.to_string())?;
            let pf = pfaffian(&z).map_err(|e| e.to_string())?;
            ensure(&pf * &pf == det_bareiss(z.entries()).unwrap(), || format!("size {size}"))?;
            count += 1;
        }
    }
    Ok(format!("closed form = direct minors for n <= 5; Pf^2 = det on {count} random matrices up to size 8"))
}

fn c6_catalan() -> Check {
    for n in 1..=6 {
        let phi = inverse_system_element(&catalan_phi(n).map_err(|e| e.to_string())?);
        for (i, g) in be_generators(n).unwrap().iter().enumerate() {
            ensure(phi.contract_by_poly(g, 3).is_zero(), || format!("n={n}: B_{} does not annihilate", i + 1))?;
        }
    }
    for n in 2..=4 {
        let slice = ideal_slice(&be_generators(n).unwrap(), 3, 2 * n - 2).map_err(|e| e.to_string())?;
        let got = inverse_system_from_ideal(&slice, 3, n).map_err(|e| e.to_string())?;
        let want = catalan_phi(n).unwrap();
        ensure(got == want || got == want.scale(&rat(-1)).unwrap(), || format!("n={n}: recovered {got}"))?;
    }
    Ok("annihilation for n <= 6; inverse system recovered up to sign for n <= 4".into())
}

fn numerator_from_betti(ranks: &[usize], degrees: &[i64]) -> Vec<i64> {
    let top = *degrees.iter().max().unwrap() as usize;
    let mut out = vec![0i64; top + 1];
    for (i, (&r, &k)) in ranks.iter().zip(degrees).enumerate() {
        out[k as usize] += if i % 2 == 0 { r as i64 } else { -(r as i64) };
    }
    out
}

fn resolution_suite(n: usize, max_degree: i64) -> Check {
    let phi = catalan_phi(n).map_err(|e| e.to_string())?;
    let g = build_g(3, n, n, &phi).map_err(|e| e.to_string())?;
    let h = expected_h0_compressed(&phi, max_degree as usize);
    let hc = hilbert_compressed(3, n);
    ensure(h[..hc.len()] == hc[..] && h[hc.len()..].iter().all(|&x| x == 0), || format!("H_0 dims {h:?}"))?;
    for r in [
        check_square_zero(&g).map_err(|e| e.to_string())?,
        strand_exactness(&g, max_degree, &h).map_err(|e| e.to_string())?,
        euler_hilbert_identity(&g, &hc.iter().map(|&x| x as i64).collect::<Vec<_>>()),
        rank_conditions(&g, RankMode::Exact).map_err(|e| e.to_string())?,
    ] {
        ensure(r.passed, || format!("{}: {:?}", r.check, r.failures))?;
    }
    let m = minimize_complex(&g).map_err(|e| e.to_string())?;
    let b: Vec<usize> = (1..=2).map(|i| betti_linear(3, n, i).unwrap().try_into().unwrap()).collect();
    let t: Vec<usize> = (1..=2).map(|i| betti_truncation(3, n, n, i).try_into().unwrap()).collect();
    ensure(b == t, || format!("betti_linear {b:?} vs betti_truncation {t:?}"))?;
    let want_ranks = vec![1, b[0], b[1], 1];
    ensure(m.ranks() == want_ranks, || format!("minimal ranks {:?}, expected {want_ranks:?}", m.ranks()))?;
    let shifts = [0, n as i64, n as i64 + 1, 2 * n as i64 + 1];
    for (i, module) in m.modules.iter().enumerate() {
        ensure(module.twists.iter().all(|t| t.0 == -shifts[i]), || format!("F_{i} twists {:?}", module.twists))?;
    }
    let num = numerator_from_betti(&want_ranks, &shifts);
    ensure(euler_hilbert_identity(&m, &hc.iter().map(|&x| x as i64).collect::<Vec<_>>()).passed, || "minimal Euler".into())?;
    ensure(strand_exactness(&m, max_degree, &h).map_err(|e| e.to_string())?.passed, || "minimal strands".into())?;
    Ok(format!("phi_{n}: H_0 {hc:?}, minimal ranks {want_ranks:?}, twists -{shifts:?}, numerator {num:?}"))
}

fn c7_resolutions() -> Check {
    let a = resolution_suite(2, 10)?;
    let b = resolution_suite(3, 12)?;
    Ok(format!("{a}; {b}"))
}

fn c8_truncation() -> Check {
    let phi = catalan_phi(3).map_err(|e| e.to_string())?;
    let g = build_g(3, 3, 4, &phi).map_err(|e| e.to_string())?;
    let h = expected_h0_truncation(&phi, 1, 12).map_err(|e| e.to_string())?;
    let r = strand_exactness(&g, 12, &h).map_err(|e| e.to_string())?;
    ensure(r.passed, || format!("{:?}", r.failures))?;
    let r = check_square_zero(&g).map_err(|e| e.to_string())?;
    ensure(r.passed, || format!("{:?}", r.failures))?;
    Ok(format!("G(4) at phi_3 resolves P/(P_1 [ann]_3): H_0 dims {h:?}"))
}

fn c9_criteria_equivalence() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let (mut nonzero, mut zero) = (0, 0);
    for k in 0..50 {
        let n = 2 + k % 2;
        let mut phi = InverseSystem::random(3, n, 3, &mut rng);
        if k % 3 == 2 {
            // drop every monomial involving x3, or keep only two-variable support in x2, x3
            let keep: Box<dyn Fn(&Vec<u32>) -> bool> =
                if k % 2 == 0 { Box::new(|e: &Vec<u32>| e[2] == 0) } else { Box::new(|e: &Vec<u32>| e[0] == 0) };
            let coeffs: Vec<_> = phi.coeffs().iter().filter(|(e, _)| keep(e)).map(|(e, c)| (e.clone(), c.clone())).collect();
            match InverseSystem::new(3, n, coeffs) {
                Ok(p) => phi = p,
                Err(_) => continue,
            }
        }
        let lhs = delta(&phi) != Rational::from_integer(0.into());
        let low = ann_slice(&phi, n - 1).dim() == 0;
        let high = ann_slice(&phi, 2 * n - 1).is_full();
        ensure(lhs == (low && high), || format!("sample {k}: delta != 0 is {lhs}, ann conditions {low} {high}"))?;
        if lhs {
            nonzero += 1;
        } else {
            zero += 1;
        }
    }
    ensure(nonzero > 0 && zero > 0, || format!("one-sided sample: {nonzero} vs {zero}"))?;
    Ok(format!("{nonzero} samples with delta != 0, {zero} with delta = 0, no counterexamples"))
}

fn aux(name: &str) -> Poly {
    Poly::aux(name)
}

fn big(x: num_bigint::BigInt) -> Poly {
    Poly::constant(Rational::from_integer(x))
}

fn c10_orbit_separators() -> Check {
    let (a, b, g) = (aux("alpha"), aux("beta"), aux("gamma"));
    let chi = |c: bool| Poly::int(c as i64);
    let pw = |x: &Poly, e: usize| x.pow(e as u32);
    for n in 2..=5 {
        let basis = sym_basis(3, n as u32 - 1);
        let ix = basis.iter().position(|m| m.0 == [n as u32 - 1, 0, 0]).unwrap();
        let iy = basis.iter().position(|m| m.0 == [0, n as u32 - 1, 0]).unwrap();
        let mut tails = Vec::new();
        for (mu, want) in [(2u8, [[0, 1], [1, 0]]), (1, [[1, 1], [1, 0]]), (0, [[1, 1], [1, 2]])] {
            let phi = phi_mu(n, mu).map_err(|e| e.to_string())?;
            let t = t_matrix(&phi);
            let idx = [ix, iy];
            for (r, row) in want.iter().enumerate() {
                for (c, &w) in row.iter().enumerate() {
                    ensure(t.get(idx[r], idx[c]) == Poly::int(w), || format!("n={n} mu={mu}: M entry ({r},{c})"))?;
                }
            }
            for &i in &idx {
                for j in (0..basis.len()).filter(|j| !idx.contains(j)) {
                    ensure(t.get(i, j).is_zero(), || format!("n={n} mu={mu}: off-block entry ({i},{j})"))?;
                }
            }
            let rest: Vec<usize> = (0..basis.len()).filter(|j| !idx.contains(j)).collect();
            tails.push(t.submatrix(&rest, &rest));
            ensure(delta(&phi) != rat(0), || format!("n={n} mu={mu}: delta = 0"))?;
        }
        ensure(tails.windows(2).all(|w| w[0] == w[1]), || format!("n={n}: M' depends on mu"))?;
    }
    let mut table = Vec::new();
    for n in 3..=5 {
        for mu in 0..=2u8 {
            let phi = phi_mu(n, mu).unwrap();
            let x = mu_membership(&phi, &[rat(1), rat(0), rat(0)], n).map_err(|e| e.to_string())?;
            let y = mu_membership(&phi, &[rat(0), rat(1), rat(0)], n).map_err(|e| e.to_string())?;
            ensure((x, y) == (mu == 2, mu >= 1), || format!("n={n} mu={mu}: x^n in I is {x}, y^n in I is {y}"))?;
            let found = grid_membership_search(&phi, n, 2).map_err(|e| e.to_string())?;
            let axes: Vec<[i64; 3]> = [[1, 0, 0]].into_iter().filter(|_| mu == 2).chain([[0, 1, 0]].into_iter().filter(|_| mu >= 1)).collect();
            let mut found_sorted = found.clone();
            found_sorted.sort();
            let mut axes_sorted = axes.clone();
            axes_sorted.sort();
            ensure(found_sorted == axes_sorted, || format!("n={n} mu={mu}: grid search found {found:?}"))?;
            table.push(format!("n{n}mu{mu}:{}{}", if x { "x" } else { "-" }, if y { "y" } else { "-" }));
        }
    }
    for n in [4usize, 5] {
        let ni = n as i64;
        for mu in 0..=2u8 {
            let lt = ell_power_contraction(n, &phi_mu(n, mu).unwrap()).map_err(|e| e.to_string())?;
            let coef = |e: [u32; 3]| lt.coeffs.get(&DivMonomial(e.to_vec())).cloned().unwrap_or_default();
            let want_x = &(&pw(&b, n - 2) * &(&(&big(binomial(ni, 1)) * &(&a * &b)) - &(&big(binomial(ni, 2)) * &pw(&g, 2))))
                + &(&chi(mu <= 1) * &pw(&a, n));
            let want_y = &(&pw(&a, n - 2) * &(&(&big(binomial(ni, 1)) * &(&a * &b)) - &(&big(binomial(ni, 2)) * &pw(&g, 2))))
                + &(&(&chi(mu == 0) * &Poly::int(2)) * &pw(&b, n));
            let want_xz = &(&pw(&b, n - 3) * &g)
                * &(&(&big(2 * binomial(ni, 3)) * &pw(&g, 2)) - &(&big(multinomial(ni, &[1, ni - 2, 1])) * &(&a * &b)));
            let inner7 = &(&(&big(2 * binomial(ni, 4)) * &pw(&g, 4))
                - &(&big(multinomial(ni, &[ni - 3, 1, 2])) * &(&(&a * &b) * &pw(&g, 2))))
                + &(&big(binomial(ni, 2)) * &(&pw(&a, 2) * &pw(&b, 2)));
            let want_xy = &pw(&a, n - 4) * &inner7;
            let m = n as u32;
            ensure(coef([m - 2, 0, 0]) == want_x, || format!("n={n} mu={mu}: coefficient of x*^(n-2) is {}", coef([m - 2, 0, 0])))?;
            ensure(coef([0, m - 2, 0]) == want_y, || format!("n={n} mu={mu}: coefficient of y*^(n-2)"))?;
            ensure(coef([m - 3, 0, 1]) == want_xz, || format!("n={n} mu={mu}: coefficient of x*^(n-3) z*"))?;
            ensure(coef([1, m - 3, 0]) == want_xy, || format!("n={n} mu={mu}: coefficient of x* y*^(n-3)"))?;
            let z_coef = coef([0, 0, m - 2]);
            let lead = big(if (n - 1) % 2 == 0 { catalan(n - 1) } else { -catalan(n - 1) }) * pw(&g, n);
            let rest = &z_coef - &lead;
            let divisible = rest.terms().all(|(mono, _)| {
                let e = |name: &str| mono.pairs().iter().find(|(v, _)| v.to_string() == name).map_or(0, |(_, k)| *k);
                e("alpha") >= 1 && e("beta") >= 1
            });
            ensure(divisible, || format!("n={n} mu={mu}: coefficient of z*^(n-2) has remainder {rest} not divisible by alpha*beta"))?;
        }
    }
    for mu in 0..=2u8 {
        let lt = ell_power_contraction(3, &phi_mu(3, mu).unwrap()).map_err(|e| e.to_string())?;
        let coef = |e: [u32; 3]| lt.coeffs.get(&DivMonomial(e.to_vec())).cloned().unwrap_or_default();
        let want2 = &(&(&Poly::int(3) * &(&a * &pw(&b, 2))) - &(&Poly::int(3) * &(&b * &pw(&g, 2)))) + &(&chi(mu <= 1) * &pw(&a, 3));
        let want5 =
            &(&(&Poly::int(3) * &(&pw(&a, 2) * &b)) - &(&Poly::int(3) * &(&a * &pw(&g, 2)))) + &(&(&chi(mu == 0) * &Poly::int(2)) * &pw(&b, 3));
        let want1 = &(&Poly::int(-6) * &(&(&a * &b) * &g)) + &(&Poly::int(2) * &pw(&g, 3));
        ensure(coef([1, 0, 0]) == want2, || format!("n=3 mu={mu}: coefficient of x*"))?;
        ensure(coef([0, 1, 0]) == want5, || format!("n=3 mu={mu}: coefficient of y*"))?;
        ensure(coef([0, 0, 1]) == want1, || format!("n=3 mu={mu}: coefficient of z*"))?;
    }
    Ok(format!("M_mu blocks and delta != 0 for n <= 5; membership {}; contraction coefficients at n = 3, 4, 5", table.join(" ")))
}

fn c11_colon() -> Check {
    let check_exact = |a: usize, b: usize, gens: &[&str], up_to: usize| -> std::result::Result<(), String> {
        let slices = wlp_colon_ideal(a, b, up_to).map_err(|e| e.to_string())?;
        let gens: Vec<Poly> = gens.iter().map(|s| p(s)).collect();
        for (e, s) in slices.iter().enumerate() {
            let want = ideal_slice(&gens, 3, e).map_err(|e| e.to_string())?;
            ensure(*s == want, || format!("J_{{{a},{b}}} degree {e}: dim {} vs {}", s.dim(), want.dim()))?;
        }
        Ok(())
    };
    check_exact(1, 0, &["x1", "x2", "x3"], 4)?;
    check_exact(2, 1, &["x1^2", "x2^2", "x3^2", "x1*x3 - x2*x3", "x1*x2 - x2*x3"], 6)?;
    for n in [3usize, 4] {
        let slices = wlp_colon_ideal(n, n - 1, 2 * n - 1).map_err(|e| e.to_string())?;
        for i in 1..=3 {
            let mut e = vec![0u32; 3];
            e[i - 1] = n as u32;
            let power = SymMonomial(e).to_poly();
            ensure(slices[n].contains(&power).unwrap(), || format!("J_{{{n},{}}} misses x{i}^{n}", n - 1))?;
        }
        ensure(slices[n - 1].dim() == 0, || format!("J_{{{n},{}}} has degree {} elements", n - 1, n - 1))?;
        ensure(slices[2 * n - 1].is_full(), || format!("[P/J_{{{n},{}}}]_{} is nonzero", n - 1, 2 * n - 1))?;
        ensure(sym_dim(3, 2 * n as i64 - 1) == slices[2 * n - 1].dim(), || "dimension".into())?;
    }
    Ok("J_{1,0} = (x,y,z), J_{2,1} = (x^2,y^2,z^2,z(x-y),y(x-z)) degreewise; J_{3,2}, J_{4,3} checks hold".into())
}

fn run(number: usize, name: &str, limit: Duration, f: impl FnOnce() -> Check) -> bool {
    let start = Instant::now();
    let outcome = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|e| {
        let msg = e.downcast_ref::<String>().cloned().or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()));
        Err(format!("panic: {}", msg.unwrap_or_default()))
    });
    let took = start.elapsed();
    let outcome = match outcome {
        Ok(msg) if took > limit => Err(format!("{msg}; runtime {took:.1?} exceeds {limit:?}")),
        other => other,
    };
    let (tag, msg) = match &outcome {
        Ok(m) => ("PASS", m),
        Err(m) => ("FAIL", m),
    };
    println!("{tag} {number:>2} {name} [{took:.2?}] {msg}");
    outcome.is_ok()
}

fn main() {
    let mut ok = true;
    ok &= run(1, "golden generic G(3) for (3,3,3)", Duration::from_secs(10), c1_golden_333);
    ok &= run(2, "golden generic minimal resolution (3,2)", Duration::from_secs(30), c2_golden_gprime);
    let start = Instant::now();
    let all = sweep_complexes();
    let build = start.elapsed();
    let limit = Duration::from_secs(300).saturating_sub(build);
    match &all {
        Ok(all) => {
            ok &= run(3, "d^2 = 0 sweep", limit, || c3_square_zero(all));
            ok &= run(4, "monomiality sweep", limit, || c4_monomiality(all));
        }
        Err(e) => {
            for (k, name) in [(3, "d^2 = 0 sweep"), (4, "monomiality sweep")] {
                ok &= run(k, name, limit, || Err(e.clone()));
            }
        }
    }
    ok &= run(5, "Pfaffian closed form and Pf^2 = det", Duration::from_secs(60), c5_pfaffians);
    ok &= run(6, "Catalan annihilation and inverse system recovery", Duration::from_secs(60), c6_catalan);
    ok &= run(7, "specialized resolutions of BE_2 and BE_3", Duration::from_secs(240), c7_resolutions);
    ok &= run(8, "truncation G(4) at phi_3", Duration::from_secs(120), c8_truncation);
    ok &= run(9, "delta criterion vs annihilator criterion", Duration::from_secs(60), c9_criteria_equivalence);
    ok &= run(10, "orbit separators phi_{n,mu}", Duration::from_secs(120), c10_orbit_separators);
    ok &= run(11, "colon ideals J_{a,b}", Duration::from_secs(60), c11_colon);
    println!("sweep build time {build:.2?}");
    if !ok {
        std::process::exit(1);
    }
}
