use nalgebra::DMatrix;
use proptest::prelude::*;
use rmt_core::coulomb_gas::partition_gaussian;
use rmt_core::determinants::*;
use rmt_core::quad::GaussLegendre;
use std::f64::consts::PI;

fn skew(n: usize, vals: &[f64]) -> DMatrix<f64> {
    let mut a = DMatrix::zeros(n, n);
    let mut k = 0;
    for i in 0..n {
        for j in i + 1..n {
            a[(i, j)] = vals[k % vals.len()];
            a[(j, i)] = -a[(i, j)];
            k += 1;
        }
    }
    a
}

#[test]
fn vandermonde_hermite_form_random_points() {
    for pts in [[0.4, -1.3, 2.2], [3.0, 0.1, -0.7]] {
        let d = vandermonde(&pts);
        assert!((vandermonde_poly_form(&pts, RowFamily::HermitePhysicists) - d).abs() < 1e-10);
        assert!((vandermonde_poly_form(&pts, RowFamily::Laguerre(0.0)) - d).abs() < 1e-10);
    }
}

#[test]
fn pfaffian_4x4_formula() {
    let a = skew(4, &[1.3, -0.4, 2.1, 0.7, -1.9, 0.5]);
    let f = a[(0, 1)] * a[(2, 3)] - a[(0, 2)] * a[(1, 3)] + a[(0, 3)] * a[(1, 2)];
    assert!((pfaffian(&a).unwrap() - f).abs() < 1e-14);
    assert!((pfaffian_elimination(&a).unwrap() - f).abs() < 1e-12);
    assert!(pfaffian(&DMatrix::zeros(3, 3)).is_err());
}

#[test]
fn pairing_and_elimination_agree() {
    let vals: Vec<f64> = (0..28).map(|k| ((k * 37 % 11) as f64 - 5.0) / 3.0).collect();
    for n in [2usize, 4, 6, 8] {
        let a = skew(n, &vals);
        let (p, e) = (pfaffian_pairings(&a).unwrap(), pfaffian_elimination(&a).unwrap());
        assert!((p - e).abs() <= 1e-10 * p.abs().max(1.0), "n={n}");
    }
}

#[test]
fn andreief_monomials_gaussian() {
    let one = |_: f64| 1.0;
    let id = |x: f64| x;
    let sq = |x: f64| x * x;
    let fs: [Func; 3] = [&one, &id, &sq];
    let mu = Measure::gaussian();
    for n in 1..=2 {
        let a = andreief(&fs, &fs, &mu, n).unwrap();
        let b = andreief_bruteforce(&fs, &fs, &mu, n).unwrap();
        assert!((a - b).abs() <= 1e-8 * a.abs(), "n={n}");
    }
}

#[test]
fn andreief_gue_partition_function() {
    let mons: Vec<Box<dyn Fn(f64) -> f64>> = (0..8).map(|k| Box::new(move |x: f64| x.powi(k)) as Box<dyn Fn(f64) -> f64>).collect();
    let fs: Vec<Func> = mons.iter().map(|b| b.as_ref()).collect();
    let mu = Measure::gaussian();
    for n in 1..=8 {
        let a = andreief(&fs, &fs, &mu, n).unwrap().ln();
        let z = partition_gaussian(n, 2).unwrap();
        assert!((a - z).exp_m1().abs() < 1e-8, "n={n}");
        assert!((gue_partition_hankel_ln(n).unwrap() - z).exp_m1().abs() < 1e-8);
    }
}

#[test]
fn de_bruijn_identities() {
    for n in 1..=3 {
        assert!(de_bruijn_check_1(n).unwrap() <= 1e-6, "n={n}");
    }
    assert!(de_bruijn_check_2(1).unwrap() <= 1e-8);
    assert!(de_bruijn_check_2(2).unwrap() <= 1e-6);
}

#[test]
fn goe_two_by_two_partition() {
    // ∬ |x − y| e^{−(x²+y²)/2} = 4√π by the rotation u = (x−y)/√2
    let gl = GaussLegendre::new(40);
    let direct = (2.0 * PI).sqrt() * 2.0f64.sqrt() * gl.integrate_panels(-12.0, 12.0, 48, |u: f64| u.abs() * (-0.5 * u * u).exp());
    assert!((direct - 4.0 * PI.sqrt()).abs() < 1e-10);
    assert!((goe_partition_two_by_two().unwrap() - 4.0 * PI.sqrt()).abs() < 1e-8);
    assert!((partition_gaussian(2, 1).unwrap() - (4.0 * PI.sqrt()).ln()).abs() < 1e-10);
}

#[test]
fn sign_count_examples() {
    for n in 1..=10 {
        assert!((sign_count_gf(n, 1.0).unwrap() - 1.0).abs() < 1e-10);
    }
    let p = sign_count_prob(9, 7).unwrap();
    assert!((p / 5.67686e-6 - 1.0).abs() < 1e-4, "{p:e}");
    assert!((sign_count_prob(1, 1).unwrap() - 0.5).abs() < 1e-14);
}

#[test]
fn sign_count_n2_exact() {
    // N = 2 GUE: P(both positive) = ∬_{x,y>0}(x−y)² w w / ∬(x−y)² w w
    let gl = GaussLegendre::new(40);
    let w = |x: f64| (-0.5 * x * x).exp();
    let f = |x: f64, y: f64| (x - y).powi(2) * w(x) * w(y);
    let pos = gl.integrate_panels(0.0, 12.0, 24, |x| gl.integrate_panels(0.0, 12.0, 24, |y| f(x, y)));
    let all = gl.integrate_panels(-12.0, 12.0, 48, |x| gl.integrate_panels(-12.0, 12.0, 48, |y| f(x, y)));
    assert!((sign_count_prob(2, 2).unwrap() - pos / all).abs() < 1e-10);
}

#[test]
fn sign_count_printed_exact_value() {
    let p = PI;
    let exact = (161229045760.0 - 20942589825.0 * p * p - 9172989000.0 * p.powi(3) + 3386880000.0 * p.powi(4))
        / (48168960000.0 * p.powi(4));
    assert!((sign_count_prob(9, 7).unwrap() / exact - 1.0).abs() < 1e-9);
}

#[test]
fn toda_relation() {
    let s = TodaSeed::Exponentials(vec![1.0, 2.0]);
    for x in [0.0, 0.5, 1.0] {
        assert!(toda_check(&s, 3, x) <= 1e-6, "x={x}");
    }
    let e = TodaSeed::Exponentials(vec![1.0]);
    for n in 2..=4 {
        assert!(tau(&e, n, 0.3).abs() < 1e-9);
    }
    // τ_n ∝ (1 − x)^{−n²}; the 5-point stencil error grows with n
    assert!(toda_check(&TodaSeed::Pole, 1, 0.2) <= 1e-10);
    assert!(toda_check(&TodaSeed::Pole, 2, 0.2) <= 1e-5);
    assert_eq!(tau(&s, 0, 0.3), 1.0);
    assert_eq!(tau(&s, -1, 0.3), 0.0);
}

#[test]
fn dyson_gaudin_lemma() {
    for n in 1..=3 {
        assert!(dyson_gaudin_check(n, 5).unwrap() <= 1e-6, "n={n}");
    }
    // one step at n = 2 by hand: ∫ det J₂ dx₂ = (q − 1) K(x₁, x₁)
    let (q, x1) = (4usize, 0.37);
    let gl = GaussLegendre::new(40);
    let lhs = gl.integrate_panels(-20.0, 20.0, 40, |y| {
        rmt_core::exact_density::kernel(q, x1, x1) * rmt_core::exact_density::kernel(q, y, y)
            - rmt_core::exact_density::kernel(q, x1, y).powi(2)
    });
    assert!((lhs - (q as f64 - 1.0) * rmt_core::exact_density::kernel(q, x1, x1)).abs() < 1e-10);
}

#[test]
fn two_point_marginal_symmetric_nonnegative() {
    for i in 0..25 {
        for j in 0..25 {
            let (x, y) = (-3.0 + 0.25 * i as f64, -3.0 + 0.25 * j as f64);
            let (a, b) = (two_point_marginal(6, x, y), two_point_marginal(6, y, x));
            assert!((a - b).abs() < 1e-15 && a >= -1e-15);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn pfaffian_squared_is_det(n in 1usize..7, vals in prop::collection::vec(-2.0f64..2.0, 66)) {
        let a = skew(2 * n, &vals);
        let p = pfaffian(&a).unwrap();
        let d = a.clone().determinant();
        prop_assert!((p * p - d).abs() <= 1e-10 * d.abs().max(1e-300) + 1e-12);
    }

    #[test]
    fn vandermonde_forms_agree(xs in prop::collection::vec(-2.0f64..2.0, 1..=8), alpha in 0.0f64..2.0) {
        let d = vandermonde(&xs);
        let tol = 1e-9 * (1.0 + d.abs());
        prop_assert!((vandermonde_poly_form(&xs, RowFamily::Monomial) - d).abs() <= tol);
        prop_assert!((vandermonde_poly_form(&xs, RowFamily::HermiteMonic) - d).abs() <= tol);
        prop_assert!((vandermonde_poly_form(&xs, RowFamily::HermitePhysicists) - d).abs() <= tol);
        prop_assert!((vandermonde_poly_form(&xs, RowFamily::Laguerre(alpha)) - d).abs() <= tol);
    }
}

#[test]
fn sign_count_symmetry_and_mass() {
    for n in 1..=10 {
        let p = sign_count_distribution(n).unwrap();
        assert!((p.iter().sum::<f64>() - 1.0).abs() < 1e-8);
        for k in 0..=n {
            assert!((p[k] - p[n - k]).abs() < 1e-8, "n={n} k={k}");
        }
    }
}

#[test]
fn double_double_decimal_rendering() {
    use rmt_core::determinants::ddouble::Dd;
    assert_eq!(format!("{:.27}", Dd::PI), "3.141592653589793238462643383e0");
    let third = Dd::ONE / Dd::new(3.0);
    assert_eq!(format!("{:.20}", third), "3.33333333333333333333e-1");
    assert_eq!(format!("{:.3}", -Dd::new(1234.5)), "-1.234e3");
    let p = sign_count_distribution_dd(9).unwrap()[7];
    assert!(format!("{p}").starts_with("5.67686227199824"));
}
