use rmt_cli::output::{emit_overlay, overlay_stats};
use rmt_core::GridFunction;
use std::path::PathBuf;
use std::process::{Command, Output};

fn rmt(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_rmt")).args(args).output().unwrap()
}

fn tmp(name: &str) -> PathBuf {
    let d = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join("rmt-cli-tests");
    std::fs::create_dir_all(&d).unwrap();
    d.join(name)
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn json(o: &Output) -> serde_json::Value {
    serde_json::from_slice(&o.stdout).unwrap()
}

#[test]
fn semicircle_law_rows() {
    let o = rmt(&["law", "semicircle", "--grid", "-2:2:401"]);
    assert!(o.status.success());
    let text = stdout(&o);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "x,density");
    assert_eq!(lines.len(), 402);
    // values parse back to the exact doubles
    let mid: Vec<f64> = lines[201].split(',').map(|v| v.parse().unwrap()).collect();
    assert_eq!(mid, vec![0.0, rmt_core::exact_density::semicircle(0.0)]);
}

#[test]
fn sample_is_byte_identical_across_runs() {
    let (a, b) = (tmp("gue_a.csv"), tmp("gue_b.csv"));
    for p in [&a, &b] {
        let o = rmt(&["sample", "--ensemble", "gue", "--n", "8", "--count", "50000", "--seed", "1", "--out", p.to_str().unwrap()]);
        assert!(o.status.success(), "{}", stderr(&o));
    }
    let (x, y) = (std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
    assert_eq!(x, y);
    assert_eq!(String::from_utf8_lossy(&x).lines().count(), 1 + 8 * 50_000);
    let other = rmt(&["sample", "--ensemble", "gue", "--n", "8", "--count", "3", "--seed", "2"]);
    assert!(!x.starts_with(&other.stdout[..60]));
}

#[test]
fn thread_count_does_not_change_output() {
    let one = rmt(&["sample", "--ensemble", "goe", "--n", "6", "--count", "200", "--seed", "9", "--threads", "1"]);
    let two = rmt(&["sample", "--ensemble", "goe", "--n", "6", "--count", "200", "--seed", "9", "--threads", "3"]);
    assert!(one.status.success() && two.status.success());
    assert_eq!(one.stdout, two.stdout);
}

#[test]
fn usage_and_validation_exit_two() {
    let o = rmt(&["bogus"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("Usage"));

    let o = rmt(&["sample", "--ensemble", "gue", "--n", "4"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("`seed`"));

    let o = rmt(&["law", "mp", "--c", "2"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("`c`"));

    let o = rmt(&["density", "--ensemble", "goe", "--n", "3"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("`n`"));

    let o = rmt(&["law", "semicircle", "--grid", "2:-2:10"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("--grid"));

    let o = rmt(&["sample", "--ensemble", "goe", "--n", "x", "--seed", "1"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("--n"));

    let o = rmt(&["sample", "--ensemble", "gue", "--beta", "1", "--n", "4", "--seed", "1"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("`beta`"));
}

#[test]
fn check_all_passes() {
    let o = rmt(&["check", "all", "--seed", "7"]);
    assert_eq!(o.status.code(), Some(0), "{}{}", stdout(&o), stderr(&o));
    let text = stdout(&o);
    assert_eq!(text.lines().count(), 27);
    assert!(text.lines().skip(1).all(|l| l.ends_with(",true")));
    for module in ["core", "sampling", "exact-density", "coulomb-gas", "resolvent-free", "determinants", "eigenvectors"] {
        assert!(text.lines().any(|l| l.starts_with(module)), "{module}");
    }
}

#[test]
fn check_single_suite_json() {
    let o = rmt(&["check", "determinants", "--seed", "3", "--format", "json"]);
    assert!(o.status.success());
    let v = json(&o);
    assert_eq!(v["command"], "check");
    assert_eq!(v["seed"], 3);
    assert_eq!(v["pass"], true);
    assert_eq!(v["metrics"]["checks"], 4);
}

#[test]
fn json_report_shape() {
    let o = rmt(&["spacing", "--ensemble", "goe", "--count", "20000", "--seed", "4", "--format", "json"]);
    assert!(o.status.success());
    let v = json(&o);
    let keys: Vec<&str> = v.as_object().unwrap().keys().map(|k| k.as_str()).collect();
    assert_eq!(keys, vec!["command", "params", "seed", "metrics", "pass"]);
    assert_eq!(v["params"]["count"], 20000);
    assert_eq!(v["pass"], true);
    assert!(v["metrics"]["ks"].as_f64().unwrap() < 0.02);
}

#[test]
fn config_file_below_flags() {
    let cfg = tmp("run.conf");
    std::fs::write(&cfg, "# shared settings\nseed = 5\nn = 4\nensemble = goe\ncount = 3\nsteps = 10\n").unwrap();
    let c = cfg.to_str().unwrap();
    let from_cfg = rmt(&["sample", "--config", c]);
    assert!(from_cfg.status.success(), "{}", stderr(&from_cfg));
    let direct = rmt(&["sample", "--ensemble", "goe", "--n", "4", "--count", "3", "--seed", "5"]);
    assert_eq!(from_cfg.stdout, direct.stdout);

    // a flag overrides the file, wherever it appears
    let a = rmt(&["--seed", "6", "sample", "--config", c, "--n", "2"]);
    let b = rmt(&["sample", "--ensemble", "goe", "--n", "2", "--count", "3", "--seed", "6"]);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);

    std::fs::write(&cfg, "seed = 5\nnot_a_key = 1\n").unwrap();
    let o = rmt(&["sample", "--config", c]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("not-a-key"));
}

#[test]
fn gue_overlay_sidecar() {
    let p = tmp("gue8_overlay.csv");
    let o = rmt(&["sample", "--ensemble", "gue", "--n", "8", "--count", "50000", "--seed", "11", "--overlay", p.to_str().unwrap(), "--out", tmp("gue8.csv").to_str().unwrap()]);
    assert!(o.status.success(), "{}", stderr(&o));
    let csv = std::fs::read_to_string(&p).unwrap();
    assert!(csv.starts_with("x,hist,theory\n"));
    assert_eq!(csv.lines().count(), 61);
    let side: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(p.with_extension("json")).unwrap()).unwrap();
    assert!(side["sup_distance"].as_f64().unwrap() <= 0.01, "{side}");
    assert!(side["ks"].as_f64().unwrap() <= 0.01);
}

#[test]
fn overlay_edge_cases() {
    let g = GridFunction::new(vec![0.0, 1.0, 2.0], vec![0.2, 0.6, 0.2]).unwrap();
    let (_, s) = overlay_stats(&g, &g).unwrap();
    assert_eq!((s.sup_distance, s.ks), (0.0, 0.0));
    let empty = GridFunction::new(vec![0.0, 1.0], vec![0.0, 0.0]).unwrap();
    assert!(emit_overlay(&empty, &g, &tmp("never.csv")).is_err());
    let far = GridFunction::new(vec![5.0, 6.0], vec![1.0, 1.0]).unwrap();
    assert!(overlay_stats(&g, &far).is_err());
}

#[test]
fn signprob_prints_probability_and_residual() {
    let o = rmt(&["signprob", "--n", "9", "--k", "7"]);
    assert!(o.status.success());
    let text = stdout(&o);
    assert_eq!(text.lines().next(), Some("n,k,probability,gf_residual"));
    let row: Vec<&str> = text.lines().nth(1).unwrap().split(',').collect();
    let p: f64 = row[2].parse().unwrap();
    assert!((p / 5.67686e-6 - 1.0).abs() < 1e-4);
    assert!(row[3].parse::<f64>().unwrap() <= 1e-10);

    let exact = stdout(&rmt(&["signprob", "--n", "9", "--k", "7", "--exact"]));
    let digits = exact.lines().nth(1).unwrap().split(',').nth(2).unwrap().to_string();
    assert!(digits.len() > 30 && digits.starts_with("5.676862271998"));

    let all = stdout(&rmt(&["signprob", "--n", "4"]));
    let total: f64 = all.lines().skip(1).map(|l| l.split(',').nth(2).unwrap().parse::<f64>().unwrap()).sum();
    assert!((total - 1.0).abs() < 1e-12);
    assert_eq!(rmt(&["signprob", "--n", "4", "--k", "5"]).status.code(), Some(2));
}

#[test]
fn densities_and_laws_integrate_to_one() {
    for args in [
        vec!["density", "--ensemble", "gse", "--n", "4", "--format", "json"],
        vec!["density", "--ensemble", "goe", "--n", "6", "--rescale", "--format", "json"],
        vec!["law", "surmise", "--grid", "0:12:2401", "--format", "json"],
        vec!["law", "surmise", "--rescale", "--grid", "0:12:2401", "--format", "json"],
    ] {
        let o = rmt(&args);
        assert!(o.status.success(), "{args:?}");
        let v = json(&o);
        assert!((v["metrics"]["integral"].as_f64().unwrap() - 1.0).abs() < 1e-4, "{args:?}: {v}");
        assert_eq!(v["pass"], true);
    }
}

#[test]
fn module_commands_run() {
    let o = rmt(&["tricomi", "--potential", "wishart", "--c", "0.5", "--format", "json"]);
    let v = json(&o);
    assert_eq!(v["pass"], true);
    let (a, b) = rmt_core::exact_density::mp_edges(0.5).unwrap();
    assert!((v["metrics"]["a"].as_f64().unwrap() - a).abs() < 1e-6);
    assert!((v["metrics"]["b"].as_f64().unwrap() - b).abs() < 1e-6);

    let o = rmt(&["coulomb", "--potential", "gaussian", "--n", "60", "--steps", "800", "--seed", "2", "--format", "json"]);
    let v = json(&o);
    assert_eq!(v["pass"], true, "{v}");
    let rate = v["metrics"]["acceptance_rate"].as_f64().unwrap();
    assert!(rate > 0.2 && rate < 0.5);

    let o = rmt(&["free-add", "--p", "0.5", "--c", "0.5", "--mc-check", "200,40", "--seed", "3"]);
    assert!(o.status.success(), "{}", stderr(&o));
    assert!(stdout(&o).starts_with("x,density,hist\n"));
    assert_eq!(rmt(&["free-add", "--p", "0.5", "--mc-check", "200,40"]).status.code(), Some(2));
    assert_eq!(rmt(&["free-add", "--p", "1.5"]).status.code(), Some(2));

    let o = rmt(&["eigvec", "--ensemble", "gue", "--n", "16", "--count", "300", "--seed", "5", "--format", "json"]);
    let v = json(&o);
    assert_eq!(v["pass"], true, "{v}");
    assert!((v["metrics"]["mean"].as_f64().unwrap() - 1.0 / 16.0).abs() < 0.005);

    let o = rmt(&["spacing", "--ensemble", "poisson", "--n", "1000", "--count", "20", "--seed", "8", "--format", "json"]);
    assert_eq!(json(&o)["pass"], true);
    assert_eq!(rmt(&["spacing", "--ensemble", "goe", "--n", "5", "--count", "10", "--seed", "1"]).status.code(), Some(2));
}

#[test]
fn wishart_sample_rescaled_overlay() {
    let p = tmp("mp_overlay.csv");
    let o = rmt(&["sample", "--ensemble", "wishart", "--n", "50", "--m", "100", "--beta", "2", "--count", "200", "--rescale", "--seed", "4", "--overlay", p.to_str().unwrap(), "--format", "json"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let v = json(&o);
    assert!((v["metrics"]["mean"].as_f64().unwrap() - 2.0).abs() < 0.05, "{v}");
    assert!(v["metrics"]["overlay_sup_distance"].as_f64().unwrap() < 0.05);
    assert_eq!(rmt(&["sample", "--ensemble", "wishart", "--n", "5", "--seed", "1"]).status.code(), Some(2));
}

#[test]
fn grid_and_config_parsing() {
    use rmt_cli::args::{parse_grid, parse_pair};
    let g = parse_grid("-2:2:401").unwrap();
    assert_eq!((g.lo, g.hi, g.steps), (-2.0, 2.0, 401));
    assert_eq!(g.points().len(), 401);
    for bad in ["1:2", "2:1:5", "0:1:1", "a:1:5", "0:inf:5"] {
        assert!(parse_grid(bad).is_err(), "{bad}");
    }
    assert_eq!(parse_pair("500, 200").unwrap(), (500, 200));
    assert!(parse_pair("500").is_err());

    let kv = rmt_cli::config::parse("a_b = 1 # trailing\n\n# only comment\nc=x\n").unwrap();
    assert_eq!(kv, vec![("a-b".to_string(), "1".to_string()), ("c".to_string(), "x".to_string())]);
    assert!(rmt_cli::config::parse("novalue\n").is_err());
}
