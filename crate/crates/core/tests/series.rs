mod common;

use bbpert::io::series_to_json;
use bbpert::series::{closure_roots, riccati_order_residual, solve_zeroth_order};
use bbpert::{run_series, AnsatzSpec, Error, PotentialSpec, Scalar, Term};
use common::{cbrt12, series, D};
use proptest::prelude::*;

/// Exact E_j / 12^(1/3) for the quartic with p = 1, from a symbolic solve of
/// the hierarchy.
const QUARTIC_EXACT: [(&str, &str); 5] = [
    ("1515", "153664"),
    ("-2091835", "783071744"),
    ("8171189983", "10247879204864"),
    ("-9230936576027", "38368059743010816"),
    ("50889610028747466425", "769620437411895531012096"),
];

#[test]
fn quartic_orders_two_to_six_match_exact_values() {
    let s = series(2, 1, 6, D);
    let c = cbrt12(D);
    for (i, (num, den)) in QUARTIC_EXACT.iter().enumerate() {
        let want = Scalar::parse(num, D).unwrap() / Scalar::parse(den, D).unwrap() * &c;
        let got = &s.terms[i + 2].energy;
        assert!(
            Scalar::rel_diff(got, &want) < Scalar::pow10(10 - D as i32, D),
            "E{} = {got} want {want}",
            i + 2
        );
    }
    assert!(s.terms[2].energy.to_decimal().starts_with("2.2571872103658602922339"));
}

#[test]
fn first_order_x3_coefficient_follows_the_derivation() {
    let s = series(2, 1, 1, D);
    let f1 = &s.terms[1].f;
    let want = &f1.coeff(1) * &cbrt12(D).div_int(3);
    assert!(Scalar::rel_diff(&f1.coeff(3), &want) < Scalar::pow10(10 - D as i32, D));
}

#[test]
fn harmonic_series_terminates_exactly() {
    let s = series(1, 0, 15, D);
    assert_eq!(s.terms[0].energy, Scalar::one(D));
    for t in &s.terms[1..] {
        assert!(t.energy.is_zero() && t.f.is_zero() && t.w.is_zero(), "order {}", t.j);
    }
}

#[test]
fn sextic_zeroth_order_pure_power_closure() {
    let v = PotentialSpec::pure_power(3, D).unwrap();
    let t = solve_zeroth_order(&v, AnsatzSpec::new(2), D).unwrap();
    let c1 = Scalar::from_ratio(45, 17, D).root(4).unwrap();
    let tol = Scalar::pow10(10 - D as i32, D);
    assert!(Scalar::rel_diff(&t.energy, &c1) < tol.clone());
    assert!(Scalar::rel_diff(&t.f.coeff(3), &(&c1 * &c1).div_int(3)) < tol.clone());
    let c5 = c1.powi(3).mul_int(2).div_int(15);
    assert!(Scalar::rel_diff(&t.f.coeff(5), &c5) < tol.clone());
    let w8 = -(t.f.coeff(3) * &c5).mul_int(2);
    assert!(Scalar::rel_diff(&t.w.coeff(8), &w8) < tol.clone());
    assert!(Scalar::rel_diff(&t.w.coeff(10), &-(&c5 * &c5)) < tol);
}

/// gamma_0 = 1, gamma_m = (sum_{u+v=m-1} gamma_u gamma_v) / (2m+1).
fn gammas(n: usize) -> Vec<Scalar> {
    let mut g = vec![Scalar::one(D)];
    for m in 1..n {
        let s: Scalar = (0..m).map(|u| &g[u] * &g[m - 1 - u]).sum();
        g.push(s.div_int(2 * m as i64 + 1));
    }
    g
}

#[test]
fn pure_power_scaling_closure() {
    for k in 1..=5u32 {
        let v = PotentialSpec::pure_power(k, D).unwrap();
        let p = k - 1;
        let t = solve_zeroth_order(&v, AnsatzSpec::new(p), D).unwrap();
        let c1 = t.f.coeff(1);
        for (m, g) in gammas(p as usize + 1).iter().enumerate() {
            let want = g * &c1.powi(m + 1);
            let got = t.f.coeff(2 * m as u32 + 1);
            assert!(
                Scalar::rel_diff(&got, &want) < Scalar::pow10(10 - D as i32, D),
                "K={k} m={m}"
            );
        }
        assert!(t.energy.is_positive());
        assert!(t.f.coeff(2 * p + 1).is_positive());
    }
}

#[test]
fn w_support_stays_in_band() {
    for (k, p, j) in [(1u32, 0u32, 6usize), (2, 1, 12), (3, 2, 10), (4, 3, 8)] {
        let s = series(k, p, j, 40);
        for t in &s.terms {
            let (lo, hi) = s.ansatz.w_band(t.j);
            for term in t.w.nonzero_terms() {
                assert!(term.power >= lo && term.power <= hi, "K={k} j={} power {}", t.j, term.power);
            }
            assert!(t.f.degree().unwrap_or(1) <= 2 * (t.j as u32 + p) + 1);
        }
    }
}

#[test]
fn residuals_vanish_for_every_order() {
    let s = series(3, 2, 12, D);
    for j in 0..s.len() {
        let r = riccati_order_residual(&s, j).unwrap();
        assert!(r.max_abs_coeff() < Scalar::pow10(5 - D as i32, D), "order {j}");
    }
}

#[test]
fn nonzero_angular_factor_is_rejected() {
    let v = PotentialSpec::pure_power(2, D).unwrap().with_angular_factor(1);
    let err = run_series(&v, AnsatzSpec::new(1), 3, D).unwrap_err();
    assert!(matches!(err, Error::UnsupportedAngularFactor(1)));
    assert!(err.to_string().contains("only ground-state s=0 supported"));
}

#[test]
fn offset_below_k_minus_one_is_rejected() {
    let v = PotentialSpec::pure_power(3, D).unwrap();
    let err = run_series(&v, AnsatzSpec::new(1), 3, D).unwrap_err();
    assert!(err.to_string().contains("order 0"), "{err}");
}

#[test]
fn sextic_with_p3_has_no_admissible_root() {
    let v = PotentialSpec::pure_power(3, D).unwrap();
    let roots = closure_roots(&v, AnsatzSpec::new(3), D).unwrap();
    assert!(roots.admissible.is_empty());
    match run_series(&v, AnsatzSpec::new(3), 2, D).unwrap_err() {
        Error::AtOrder { order: 0, source } => {
            assert!(matches!(*source, Error::NoAdmissibleRoot { ref candidates } if candidates.len() == 1))
        }
        e => panic!("unexpected {e:?}"),
    }
}

#[test]
fn invalid_potentials_are_rejected() {
    let t = |power, v: i64| Term { power, value: Scalar::from_int(v, D) };
    assert!(PotentialSpec::new(&[t(3, 1)], 0).is_err());
    assert!(PotentialSpec::new(&[t(0, 1)], 0).is_err());
    assert!(PotentialSpec::new(&[t(4, -1)], 0).is_err());
    assert!(PotentialSpec::new(&[t(4, 1), t(4, -1)], 0).is_err());
    assert!(PotentialSpec::new(&[], 0).is_err());
    assert!(PotentialSpec::pure_power(0, D).is_err());
}

#[test]
fn finite_coupling_quartic_is_solvable() {
    let v = PotentialSpec::anharmonic(2, Scalar::from_ratio(1, 10, D)).unwrap();
    let s = run_series(&v, AnsatzSpec::canonical(&v), 10, D).unwrap();
    assert!(s.terms[0].energy > Scalar::one(D));
    assert_eq!(v.coeff(1), Scalar::one(D));
}

#[test]
fn serialized_output_is_deterministic() {
    let a = series_to_json(&series(4, 3, 8, D)).unwrap();
    let b = series_to_json(&series(4, 3, 8, D)).unwrap();
    assert_eq!(a, b);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn every_order_passes_the_residual_check(k in 1u32..=4, extra in 0u32..2, j in 1usize..8) {
        let d = 40;
        let v = PotentialSpec::pure_power(k, d).unwrap();
        let p = k - 1 + extra;
        // K=3 and K=4 with p one above canonical can lack admissible roots
        if let Ok(s) = run_series(&v, AnsatzSpec::new(p), j, d) {
            for i in 0..s.len() {
                let (r, scale) = bbpert::series::order_residual_with_scale(&s, i).unwrap();
                prop_assert!(r.max_abs_coeff() <= scale * Scalar::pow10(10 - d as i32, d));
            }
            prop_assert!(s.terms[0].energy.is_positive());
        }
    }
}
