use proptest::prelude::*;
use rmt_core::common::{build_histogram, chebyshev_grid, sup_distance_binned, GridFunction, HistogramSpec};
use rmt_core::coulomb_gas::*;
use rmt_core::determinants::gue_partition_hankel_ln;
use rmt_core::exact_density::{marchenko_pastur, mp_edges, semicircle};
use rmt_core::RngSeed;
use std::f64::consts::{PI, SQRT_2};

fn semicircle_grid(m: usize) -> GridFunction {
    GridFunction::from_fn(chebyshev_grid(-SQRT_2, SQRT_2, m), semicircle).unwrap()
}

#[test]
fn f0_of_semicircle() {
    let f0 = functional_f0(&semicircle_grid(2001)).unwrap();
    assert!((f0 - (0.375 + 2f64.ln() / 4.0)).abs() < 1e-5, "{f0}");
}

#[test]
fn f1_of_semicircle() {
    let f1 = functional_f1(&semicircle_grid(2001)).unwrap();
    assert!((f1 - 0.5 * (1.0 - 2f64.ln() - 2.0 * PI.ln())).abs() < 1e-6, "{f1}");
}

#[test]
fn f0_of_uniform_matches_hand_integral() {
    // uniform on [0,1]: ½·⅓ − ½·(−3/2)
    let g = GridFunction::from_fn(chebyshev_grid(0.0, 1.0, 801), |_| 1.0).unwrap();
    let f0 = functional_f0(&g).unwrap();
    assert!((f0 - (1.0 / 6.0 + 0.75)).abs() < 1e-6, "{f0}");
}

#[test]
fn tricomi_reproduces_semicircle() {
    let g = tricomi_solve(|t| t, -SQRT_2, SQRT_2, 1.0).unwrap();
    let err = g.xs.iter().zip(&g.ys).map(|(x, y)| (y - semicircle(*x)).abs()).fold(0.0, f64::max);
    assert!(err < 1e-6, "{err}");
}

#[test]
fn tricomi_general_support_matches_closed_form() {
    for (a, b) in [(-1.3, 1.5), (-1.6, 1.2), (-1.4, 1.45)] {
        let sol = tricomi(|t| t, a, b, 1.0).unwrap();
        for k in 1..40 {
            let x = a + (b - a) * k as f64 / 40.0;
            let want = gaussian_equilibrium_density(a, b, x).unwrap();
            assert!((sol.eval(x) - want).abs() < 1e-6, "({a},{b}) x={x}");
        }
    }
}

#[test]
fn tricomi_wishart_support_and_density() {
    let sol = equilibrium(&PotentialSpec::wishart(0.5).unwrap()).unwrap();
    let (lo, hi) = mp_edges(0.5).unwrap();
    assert!((sol.a - lo).abs() < 1e-8 && (sol.b - hi).abs() < 1e-8, "{sol:?}");
    for k in 1..60 {
        let x = lo + (hi - lo) * k as f64 / 60.0;
        assert!((sol.eval(x) - marchenko_pastur(x, 0.5).unwrap()).abs() < 1e-5, "x={x}");
    }
}

#[test]
fn tricomi_flags_unphysical_support() {
    // far too wide for the quadratic well
    assert!(matches!(tricomi_solve(|t| t, -3.0, 3.0, 1.0), Err(rmt_core::Error::Unphysical { .. })));
}

#[test]
fn tricomi_residual_on_interior_nodes() {
    for (a, b) in [(-SQRT_2, SQRT_2), (-1.3, 1.5)] {
        let sol = tricomi(|t| t + 0.2 * t * t * t, a, b, 1.0).unwrap();
        assert!(sol.max_residual(25) < 1e-5);
    }
}

#[test]
fn closed_form_density_solves_integral_equation() {
    // Pr∫ n*(t)/(x − t) dt = x, with t = m + h cos θ and the singular part subtracted
    for (a, b) in [(-1.3, 1.5), (-2.0, 0.5), (-SQRT_2, SQRT_2)] {
        let m = 0.5 * (a + b);
        let h = 0.5 * (b - a);
        let num = |t: f64| 1.0 - t * t + 0.5 * (a + b) * t + 0.125 * (b - a).powi(2);
        let k = 4000;
        for x in [m - 0.5 * h, m + 0.1 * h, m + 0.7 * h] {
            let mut s = 0.0;
            for j in 0..k {
                let th = PI * (j as f64 + 0.5) / k as f64;
                let t = m + h * th.cos();
                s += (num(t) - num(x)) / (x - t);
            }
            let pv = s / k as f64;
            assert!((pv - x).abs() < 1e-6, "({a},{b}) x={x}: {pv}");
        }
    }
}

#[test]
fn closed_form_density_normalized() {
    for (a, b) in [(-1.3, 1.5), (-2.0, 0.5)] {
        let m = 0.5 * (a + b);
        let h = 0.5 * (b - a);
        let k = 2000;
        let s: f64 = (0..k)
            .map(|j| {
                let th = PI * (j as f64 + 0.5) / k as f64;
                let x = m + h * th.cos();
                gaussian_equilibrium_density(a, b, x).unwrap() * h * th.sin() * PI / k as f64
            })
            .sum();
        assert!((s - 1.0).abs() < 1e-8, "{s}");
    }
}

#[test]
fn free_energy_closed_form_vs_quadrature() {
    for (a, b) in [(-1.3, 1.5), (-2.0, 0.7), (-0.5, 1.9), (-1.0, 1.0), (-1.8, 1.1)] {
        let f = free_energy_ab(a, b).unwrap();
        let q = free_energy_ab_quadrature(a, b).unwrap();
        assert!((f - q).abs() < 1e-5, "({a},{b}): {f} vs {q}");
    }
}

#[test]
fn free_energy_minimum() {
    let (a, b) = optimize_edges().unwrap();
    assert!((a + SQRT_2).abs() < 1e-4 && (b - SQRT_2).abs() < 1e-4, "{a} {b}");
    assert!((free_energy_ab(-SQRT_2, SQRT_2).unwrap() - (0.375 + 2f64.ln() / 4.0)).abs() < 1e-10);
}

#[test]
fn f0_minimal_at_tricomi_solution() {
    let sol = tricomi_solve(|t| t, -SQRT_2, SQRT_2, 1.0).unwrap();
    let base = functional_f0(&sol).unwrap();
    let mut rng = 0x2545F4914F6CDD1Du64;
    let mut next = || {
        rng ^= rng << 13;
        rng ^= rng >> 7;
        rng ^= rng << 17;
        (rng >> 11) as f64 / (1u64 << 53) as f64 - 0.5
    };
    for _ in 0..10 {
        let (c1, c2, c3) = (next(), next(), next());
        // zero-mass perturbations ρ·q with ∫ρq = 0
        let q = |x: f64| c1 * x + c2 * (x * x - 0.5) + c3 * (x * x * x * x - 0.5);
        let ys: Vec<f64> = sol.xs.iter().zip(&sol.ys).map(|(x, y)| y * (1.0 + 0.3 * q(*x))).collect();
        let mass = GridFunction::new(sol.xs.clone(), ys.clone()).unwrap().integral();
        let pert = GridFunction::new(sol.xs.clone(), ys.iter().map(|y| y / mass).collect()).unwrap();
        assert!(pert.ys.iter().all(|y| *y >= 0.0));
        assert!(functional_f0(&pert).unwrap() >= base);
    }
}

#[test]
fn partition_matches_barnes_and_hankel() {
    for n in 1..=12 {
        assert!(partition_barnes_check(n).unwrap() < 1e-10, "n={n}");
    }
    for n in 1..=8 {
        let z = partition_gaussian(n, 2).unwrap();
        let h = gue_partition_hankel_ln(n).unwrap();
        assert!(((z - h).exp_m1()).abs() < 1e-8, "n={n}");
    }
}

#[test]
fn partition_small_cases_by_hand() {
    // N = 1: √(2π) for every β; N = 2, β = 1: 4√π
    for beta in [1, 2, 4] {
        assert!((partition_gaussian(1, beta).unwrap() - (2.0 * PI).sqrt().ln()).abs() < 1e-14);
    }
    assert!((partition_gaussian(2, 1).unwrap() - (4.0 * PI.sqrt()).ln()).abs() < 1e-14);
}

#[test]
fn ln_c_asymptotics() {
    let exact = ln_c_exact(100, 2.0);
    let asym = ln_c_asymptotic(100, 2.0);
    assert!(((asym - exact) / exact).abs() < 0.01);
}

#[test]
fn barnes_large_n_leading_terms() {
    // ln Z_{N,2} − [½N² ln N − ¾N² + N ln N] = O(N)
    let n = 12.0f64;
    let z = partition_gaussian(12, 2).unwrap();
    let lead = 0.5 * n * n * n.ln() - 0.75 * n * n + n * n.ln();
    assert!(((z - lead) / n).abs() < 2.0);
}

#[test]
fn metropolis_two_particles_cold() {
    let run = metropolis_run(&PotentialSpec::gaussian(), 2, 400.0, 4000, RngSeed(3)).unwrap();
    let mut p = run.state.positions.clone();
    p.sort_by(f64::total_cmp);
    assert!((p[0] + 0.5).abs() < 0.05 && (p[1] - 0.5).abs() < 0.05, "{p:?}");
}

#[test]
fn metropolis_acceptance_in_band() {
    let run = metropolis_run(&PotentialSpec::gaussian(), 50, 2.0, 500, RngSeed(1)).unwrap();
    let r = run.state.acceptance_rate();
    assert!((0.2..=0.6).contains(&r), "{r}");
    let m = running_min(&run.energy_trace);
    assert!(m.windows(2).all(|w| w[1] <= w[0]));
}

#[test]
fn metropolis_semicircle_histogram() {
    let run = metropolis_run(&PotentialSpec::gaussian(), 200, 2.0, 6000, RngSeed(11)).unwrap();
    let h = build_histogram(&run.samples, &HistogramSpec::new(-1.6, 1.6, 40, true)).unwrap();
    let d = sup_distance_binned(&h, semicircle);
    assert!(d < 0.03, "{d}");
}

#[test]
fn metropolis_marchenko_pastur_histogram() {
    let p = PotentialSpec::wishart(0.5).unwrap();
    let run = metropolis_run(&p, 200, 1.0, 6000, RngSeed(5)).unwrap();
    assert!(run.state.positions.iter().all(|x| *x > 0.0));
    let h = build_histogram(&run.samples, &HistogramSpec::new(0.0, 6.5, 40, true)).unwrap();
    let d = sup_distance_binned(&h, |x| marchenko_pastur(x, 0.5).unwrap());
    assert!(d < 0.04, "{d}");
}

#[test]
fn metropolis_independent_of_start() {
    let p = PotentialSpec::gaussian();
    let spec = HistogramSpec::new(-1.6, 1.6, 32, true);
    let hists: Vec<GridFunction> = metropolis_chains(&p, 100, 2.0, 6000, RngSeed(21), 2)
        .unwrap()
        .iter()
        .map(|r| build_histogram(&r.samples, &spec).unwrap())
        .collect();
    let d = hists[0].ys.iter().zip(&hists[1].ys).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
    assert!(d <= 0.02, "{d}");
}

#[test]
fn equilibrated_energy_near_f0() {
    let p = PotentialSpec::gaussian();
    let run = metropolis_run(&p, 500, 2.0, 400, RngSeed(8)).unwrap();
    let e = gas_energy(&run.state.positions, &p).unwrap();
    let f0 = 0.375 + 2f64.ln() / 4.0;
    assert!(((e - f0) / f0).abs() < 0.02, "{e}");
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn tricomi_residual_small(a in -2.0f64..-0.8, w in 1.6f64..3.0, c3 in 0.0f64..0.3) {
        let b = a + w;
        let sol = tricomi(move |t| t + c3 * t * t * t, a, b, 1.0).unwrap();
        prop_assert!(sol.max_residual(9) < 1e-5);
    }

    #[test]
    fn closed_form_free_energy_minimal_at_semicircle(a in -2.5f64..-0.5, b in 0.5f64..2.5) {
        prop_assume!(edges_admissible(a, b));
        prop_assert!(free_energy_ab(a, b).unwrap() >= free_energy_ab(-SQRT_2, SQRT_2).unwrap() - 1e-15);
    }

    #[test]
    fn two_particle_energy_symmetric(x in -3.0f64..3.0, d in 0.01f64..3.0) {
        let p = PotentialSpec::gaussian();
        let e1 = gas_energy(&[x, x + d], &p).unwrap();
        let e2 = gas_energy(&[-x - d, -x], &p).unwrap();
        prop_assert!((e1 - e2).abs() < 1e-12);
    }
}
