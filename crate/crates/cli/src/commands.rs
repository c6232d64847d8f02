use crate::args::*;
use crate::error::{invalid, CliError};
use crate::output::{bin_average, emit_overlay, Cell, Report, Table};
use rmt_core::common::{build_histogram, ks_unsorted, mean_var, sup_distance_binned, HistogramSpec};
use rmt_core::coulomb_gas::{equilibrium, metropolis_run, PotentialSpec};
use rmt_core::determinants::{sign_count_distribution_dd, sign_count_gf};
use rmt_core::eigenvectors::{component_samples, p_component_cdf};
use rmt_core::exact_density::*;
use rmt_core::resolvent_free::{free_sum_eigenvalues, FreeSum};
use rmt_core::sampling::{gaussian_spectra, iid_gap_samples, wishart_spectra, Parent};
use rmt_core::{GridFunction, RngSeed};
use std::f64::consts::SQRT_2;

type Out = Result<Report, CliError>;

pub fn need_seed(seed: Option<u64>) -> Result<RngSeed, CliError> {
    seed.map(RngSeed).ok_or_else(|| CliError::Validation {
        field: "seed".into(),
        reason: "required for stochastic commands".into(),
    })
}

fn positive(field: &str, v: usize) -> Result<(), CliError> {
    if v == 0 {
        return invalid(field, "must be positive");
    }
    Ok(())
}

/// Critical KS distance at the 1% level.
fn ks_critical(m: usize) -> f64 {
    1.63 / (m as f64).sqrt()
}

pub fn sample(a: &SampleArgs, seed: Option<u64>) -> Out {
    let s = need_seed(seed)?;
    positive("n", a.n)?;
    positive("count", a.count)?;
    positive("bins", a.bins)?;
    let (beta, spectra) = match a.ensemble {
        SampleEnsemble::Wishart => {
            let m = a.m.ok_or_else(|| CliError::Validation { field: "m".into(), reason: "required for wishart".into() })?;
            positive("m", m)?;
            let beta = a.beta.unwrap_or(1);
            (beta, wishart_spectra(a.n, m, beta, a.count, s)?)
        }
        e => {
            let beta = match e {
                SampleEnsemble::Goe => 1,
                SampleEnsemble::Gue => 2,
                _ => 4,
            };
            if let Some(b) = a.beta.filter(|b| *b != beta) {
                return invalid("beta", format!("{b} conflicts with ensemble (β = {beta})"));
            }
            (beta, gaussian_spectra(beta, a.n, a.count, s)?)
        }
    };
    let wishart = a.ensemble == SampleEnsemble::Wishart;
    let scale = match (a.rescale, wishart) {
        (false, _) => 1.0,
        (true, false) => (beta as f64 * a.n as f64).sqrt(),
        (true, true) => beta as f64 * a.n as f64,
    };

    let mut table = Table::new(&["draw", "index", "eigenvalue"]);
    let mut all = Vec::with_capacity(a.count * a.n);
    for (d, sp) in spectra.iter().enumerate() {
        for (i, v) in sp.values.iter().enumerate() {
            let x = v / scale;
            all.push(x);
            table.push(vec![d.into(), i.into(), x.into()]);
        }
    }
    let mut r = Report::new("sample", a, seed);
    let (m, v) = mean_var(&all);
    r.metric("beta", beta);
    r.metric("eigenvalues", all.len());
    r.metric_f("mean", m);
    r.metric_f("variance", v);

    if let Some(path) = &a.overlay {
        let sd = v.sqrt();
        let hist = build_histogram(&all, &HistogramSpec::new(m - 5.0 * sd, m + 5.0 * sd, a.bins, true))?;
        let theory: Box<dyn Fn(f64) -> f64> = if wishart {
            let c = a.n as f64 / a.m.unwrap_or(a.n) as f64;
            let f = if a.rescale { 1.0 } else { beta as f64 * a.n as f64 };
            rmt_core::exact_density::mp_edges(c)?;
            Box::new(move |x| marchenko_pastur(x / f, c).unwrap_or(0.0) / f)
        } else {
            gaussian_density_finite(beta, a.n, 0.0)?;
            let (n, f) = (a.n, scale);
            Box::new(move |x| f * gaussian_density_finite(beta, n, f * x).unwrap_or(f64::NAN))
        };
        let curve = GridFunction::new(hist.xs.clone(), bin_average(&hist.xs, theory))?;
        let stats = emit_overlay(&hist, &curve, path)?;
        r.metric_f("overlay_sup_distance", stats.sup_distance);
        r.metric_f("overlay_ks", stats.ks);
    }
    r.table = Some(table);
    Ok(r)
}

pub fn density(a: &DensityArgs) -> Out {
    positive("n", a.n)?;
    let beta = a.ensemble.beta();
    let f = (beta as f64 * a.n as f64).sqrt();
    let grid = a.grid.unwrap_or_else(|| {
        let edge = if a.rescale { SQRT_2 } else { SQRT_2 * f };
        let w = 1.25 * edge + if a.rescale { 0.5 } else { 2.0 };
        Grid { lo: -w, hi: w, steps: 401 }
    });
    let xs = grid.points();
    let mut table = Table::new(&["x", "density"]);
    let mut ys = Vec::with_capacity(xs.len());
    for &x in &xs {
        let y = if a.rescale { f * gaussian_density_finite(beta, a.n, f * x)? } else { gaussian_density_finite(beta, a.n, x)? };
        ys.push(y);
        table.push(vec![x.into(), y.into()]);
    }
    let g = GridFunction::new(xs, ys)?;
    let min = g.ys.iter().copied().fold(f64::INFINITY, f64::min);
    let mut r = Report::new("density", a, None);
    r.metric_f("integral", g.integral());
    r.metric_f("min", min);
    r.pass = min >= -1e-12;
    r.table = Some(table);
    Ok(r)
}

pub fn law(a: &LawArgs) -> Out {
    let grid = match (a.grid, a.law) {
        (Some(g), _) => g,
        (None, Law::Semicircle) => Grid { lo: -2.0, hi: 2.0, steps: 401 },
        (None, Law::Mp) => {
            let (_, hi) = mp_edges(a.c)?;
            Grid { lo: 0.0, hi: hi + 1.0, steps: 401 }
        }
        (None, Law::Surmise) => Grid { lo: 0.0, hi: 6.0, steps: 601 },
    };
    let f: Box<dyn Fn(f64) -> rmt_core::Result<f64>> = match a.law {
        Law::Semicircle => Box::new(|x| Ok(semicircle(x))),
        Law::Mp => {
            mp_edges(a.c)?;
            let c = a.c;
            Box::new(move |y| marchenko_pastur(y, c))
        }
        Law::Surmise if a.rescale => Box::new(|s: f64| if s < 0.0 { Ok(0.0) } else { wigner_surmise_rescaled(s) }),
        Law::Surmise => Box::new(|s: f64| if s < 0.0 { Ok(0.0) } else { wigner_surmise(s) }),
    };
    let xs = grid.points();
    let mut table = Table::new(&["x", "density"]);
    let mut ys = Vec::with_capacity(xs.len());
    for &x in &xs {
        let y = f(x)?;
        ys.push(y);
        table.push(vec![x.into(), y.into()]);
    }
    let g = GridFunction::new(xs, ys)?;
    let mut r = Report::new("law", a, None);
    r.metric_f("integral", g.integral());
    r.pass = g.ys.iter().all(|y| y.is_finite() && *y >= 0.0);
    r.table = Some(table);
    Ok(r)
}

pub fn spacing(a: &SpacingArgs, seed: Option<u64>) -> Out {
    let s = need_seed(seed)?;
    positive("count", a.count)?;
    let (gaps, reference): (Vec<f64>, &str) = match a.ensemble {
        SpacingEnsemble::Goe => {
            if a.n != 2 {
                return invalid("n", "the surmise is the 2×2 law; use --n 2");
            }
            let sp = gaussian_spectra(1, 2, a.count, s)?;
            (sp.iter().map(|x| x.values[1] - x.values[0]).collect(), "wigner-surmise")
        }
        SpacingEnsemble::Poisson => (iid_gap_samples(a.n, a.count, Parent::Uniform { a: 0.0, b: 1.0 }, s)?, "exponential"),
    };
    let mut table = Table::new(&["index", "spacing"]);
    for (i, g) in gaps.iter().enumerate() {
        table.push(vec![i.into(), (*g).into()]);
    }
    let m = gaps.len();
    let (mean, _) = mean_var(&gaps);
    let ks = match a.ensemble {
        SpacingEnsemble::Goe => ks_unsorted(gaps, wigner_surmise_cdf)?,
        SpacingEnsemble::Poisson => ks_unsorted(gaps, |x| 1.0 - (-x.max(0.0)).exp())?,
    };
    let mut r = Report::new("spacing", a, seed);
    r.metric("reference", reference);
    r.metric("spacings", m);
    r.metric_f("mean", mean);
    r.metric_f("ks", ks);
    r.metric_f("ks_critical_1pct", ks_critical(m));
    r.pass = ks <= ks_critical(m);
    r.table = Some(table);
    Ok(r)
}

fn potential(p: Potential, c: f64) -> Result<PotentialSpec, CliError> {
    Ok(match p {
        Potential::Gaussian => PotentialSpec::gaussian(),
        Potential::Wishart => PotentialSpec::wishart(c)?,
    })
}

pub fn coulomb(a: &CoulombArgs, seed: Option<u64>) -> Out {
    let s = need_seed(seed)?;
    positive("steps", a.steps)?;
    positive("bins", a.bins)?;
    if !(a.beta > 0.0 && a.beta.is_finite()) {
        return invalid("beta", "must be positive");
    }
    let pot = potential(a.potential, a.c)?;
    let run = metropolis_run(&pot, a.n, a.beta, a.steps, s)?;
    let eq = equilibrium(&pot)?;
    let lo = run.samples.iter().copied().fold(f64::INFINITY, f64::min).min(eq.a);
    let hi = run.samples.iter().copied().fold(f64::NEG_INFINITY, f64::max).max(eq.b);
    let hist = build_histogram(&run.samples, &HistogramSpec::new(lo, hi, a.bins, true))?;
    let theory = bin_average(&hist.xs, |x| eq.eval(x));
    let mut table = Table::new(&["x", "hist", "theory"]);
    for ((x, h), t) in hist.xs.iter().zip(&hist.ys).zip(&theory) {
        table.push(vec![(*x).into(), (*h).into(), (*t).into()]);
    }
    let sup = hist.ys.iter().zip(&theory).map(|(h, t)| (h - t).abs()).fold(0.0, f64::max);
    let mut r = Report::new("coulomb", a, seed);
    r.metric_f("acceptance_rate", run.state.acceptance_rate());
    r.metric_f("final_energy", run.energy_trace.last().copied().unwrap_or(f64::NAN));
    r.metric_f("support_lo", eq.a);
    r.metric_f("support_hi", eq.b);
    r.metric_f("sup_distance", sup);
    r.metric("samples", run.samples.len());
    r.pass = run.state.accepted > 0;
    r.table = Some(table);
    Ok(r)
}

pub fn tricomi(a: &TricomiArgs) -> Out {
    if a.points < 2 {
        return invalid("points", "need at least 2");
    }
    let pot = potential(a.potential, a.c)?;
    let sol = equilibrium(&pot)?;
    let g = sol.to_grid(a.points)?;
    let mut table = Table::new(&["x", "density"]);
    for (x, y) in g.xs.iter().zip(&g.ys) {
        table.push(vec![(*x).into(), (*y).into()]);
    }
    let res = sol.max_residual(32);
    let mut r = Report::new("tricomi", a, None);
    r.metric_f("a", sol.a);
    r.metric_f("b", sol.b);
    r.metric_f("max_residual", res);
    r.metric_f("integral", g.integral());
    r.pass = res <= 1e-5;
    r.table = Some(table);
    Ok(r)
}

pub fn free_add(a: &FreeAddArgs, seed: Option<u64>) -> Out {
    let sum = FreeSum::new(a.p, a.c)?;
    let grid = a.grid.unwrap_or(Grid { lo: -2.5, hi: 7.5, steps: 501 });
    let xs = grid.points();
    let ys: Vec<f64> = rmt_core::par::map_slice(&xs, |&x| sum.density(x));
    let g = GridFunction::new(xs, ys)?;
    let mut r = Report::new("free-add", a, seed);
    r.metric_f("integral", g.integral());
    r.pass = g.ys.iter().all(|y| *y >= 0.0);
    let mut table;
    if let Some((n, t)) = a.mc_check {
        let s = need_seed(seed)?;
        positive("mc-check N", n)?;
        positive("mc-check T", t)?;
        let ev = free_sum_eigenvalues(a.p, a.c, n, t, s)?;
        let lo = ev.iter().copied().fold(f64::INFINITY, f64::min);
        let hi = ev.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let h60 = build_histogram(&ev, &HistogramSpec::new(lo, hi, 60, true))?;
        let sup = sup_distance_binned(&h60, |x| sum.density(x));
        // histogram column on the output grid, bins centred on the points
        let dx = g.xs[1] - g.xs[0];
        let hg = build_histogram(&ev, &HistogramSpec::new(grid.lo - 0.5 * dx, grid.hi + 0.5 * dx, grid.steps, true))?;
        table = Table::new(&["x", "density", "hist"]);
        for ((x, y), h) in g.xs.iter().zip(&g.ys).zip(&hg.ys) {
            table.push(vec![(*x).into(), (*y).into(), (*h).into()]);
        }
        r.metric_f("mc_sup_distance", sup);
        r.pass &= sup <= 0.03;
    } else {
        table = Table::new(&["x", "density"]);
        for (x, y) in g.xs.iter().zip(&g.ys) {
            table.push(vec![(*x).into(), (*y).into()]);
        }
    }
    r.table = Some(table);
    Ok(r)
}

pub fn signprob(a: &SignArgs) -> Out {
    let dist = sign_count_distribution_dd(a.n)?;
    if let Some(k) = a.k.filter(|k| *k > a.n) {
        return invalid("k", format!("{k} > n = {}", a.n));
    }
    let resid = (sign_count_gf(a.n, 1.0)? - 1.0).abs();
    let ks: Vec<usize> = match a.k {
        Some(k) => vec![k],
        None => (0..=a.n).collect(),
    };
    let mut table = Table::new(&["n", "k", "probability", "gf_residual"]);
    let mut r = Report::new("signprob", a, None);
    for &k in &ks {
        let p = if a.exact { Cell::S(format!("{}", dist[k])) } else { Cell::F(dist[k].to_f64()) };
        table.push(vec![a.n.into(), k.into(), p, resid.into()]);
    }
    if let Some(k) = a.k {
        r.metric_f("probability", dist[k].to_f64());
        if a.exact {
            r.metric("probability_exact", format!("{}", dist[k]));
        }
    }
    r.metric_f("gf_residual", resid);
    r.pass = resid <= 1e-10;
    r.table = Some(table);
    Ok(r)
}

pub fn eigvec(a: &EigvecArgs, seed: Option<u64>) -> Out {
    let s = need_seed(seed)?;
    positive("count", a.count)?;
    if a.n < 2 {
        return invalid("n", "need N ≥ 2");
    }
    let beta = match a.ensemble {
        VecEnsemble::Goe => 1,
        VecEnsemble::Gue => 2,
    };
    let ys = component_samples(beta, a.n, a.count, a.component, s)?;
    let mut table = Table::new(&["vector", "component_sq"]);
    for (i, y) in ys.iter().enumerate() {
        table.push(vec![i.into(), (*y).into()]);
    }
    let m = ys.len();
    let (mean, _) = mean_var(&ys);
    let n = a.n;
    let ks = ks_unsorted(ys, |y| p_component_cdf(y, n, beta).unwrap_or(f64::NAN))?;
    let mut r = Report::new("eigvec", a, seed);
    r.metric("samples", m);
    r.metric_f("mean", mean);
    r.metric_f("ks", ks);
    r.metric_f("ks_critical_1pct", ks_critical(m));
    r.pass = ks <= ks_critical(m);
    r.table = Some(table);
    Ok(r)
}
