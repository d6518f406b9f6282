use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use fmdp::lp::exchange::{parse_certificate, parse_lp, write_certificate};
use fmdp::lp::Certificate;
use fmdp::model_file::to_json;
use fmdp::num::{parse_rational, ratio};
use fmdp::ring::ring_definition;
use tempfile::TempDir;

fn fmdp(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_fmdp")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn ring_file(dir: &TempDir, n: usize) -> PathBuf {
    let path = dir.path().join(format!("ring{n}.json"));
    std::fs::write(&path, to_json(&ring_definition(n).unwrap())).unwrap();
    path
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn reports_are_byte_identical_without_timing() {
    let dir = TempDir::new().unwrap();
    let model = ring_file(&dir, 2);
    let a = fmdp(&["solve", "--model", s(&model), "--no-timing"]);
    let b = fmdp(&["solve", "--model", s(&model), "--no-timing", "--order", "identity"]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let text = stdout(&a);
    assert!(text.contains("w_eq=true"));
    assert!(text.contains("weights 135/8 25/16 25/16"));
    assert!(text.contains("bound"));
    assert!(!text.lines().any(|l| l.starts_with("time")));
}

#[test]
fn report_file_matches_stdout() {
    let dir = TempDir::new().unwrap();
    let model = ring_file(&dir, 2);
    let report = dir.path().join("report.txt");
    let o = fmdp(&["solve", "--model", s(&model), "--no-timing", "--report", s(&report)]);
    assert_eq!(o.status.code(), Some(0));
    assert!(o.stdout.is_empty());
    let direct = fmdp(&["solve", "--model", s(&model), "--no-timing"]);
    assert_eq!(std::fs::read_to_string(&report).unwrap(), stdout(&direct));
}

#[test]
fn timing_lines_appear_by_default() {
    let dir = TempDir::new().unwrap();
    let o = fmdp(&["solve", "--model", s(&ring_file(&dir, 1))]);
    assert!(stdout(&o).lines().any(|l| l.starts_with("time")));
}

#[test]
fn invalid_model_names_the_violation() {
    let dir = TempDir::new().unwrap();
    let mut def = ring_definition(2).unwrap();
    def.discount = ratio(1, 1);
    let path = dir.path().join("bad.json");
    std::fs::write(&path, to_json(&def)).unwrap();
    let o = fmdp(&["solve", "--model", s(&path)]);
    assert_eq!(o.status.code(), Some(1));
    let err = String::from_utf8_lossy(&o.stderr);
    assert!(err.contains("disc_lt_one"), "{err}");
}

#[test]
fn unreadable_inputs_exit_one() {
    assert_eq!(fmdp(&["solve", "--model", "/nonexistent/model.json"]).status.code(), Some(1));
    let dir = TempDir::new().unwrap();
    let path = dir.path().join("garbage.json");
    std::fs::write(&path, "{ not json").unwrap();
    assert_eq!(fmdp(&["solve", "--model", s(&path)]).status.code(), Some(1));
    assert_eq!(fmdp(&["solve", "--model", s(&path), "--order", "sideways"]).status.code(), Some(1));
    assert_eq!(fmdp(&["frobnicate"]).status.code(), Some(1));
}

#[test]
fn iteration_budget_shows_as_timeout() {
    let dir = TempDir::new().unwrap();
    let o = fmdp(&["solve", "--model", s(&ring_file(&dir, 2)), "--t-max", "1", "--no-timing"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("timeout=true"));
}

#[test]
fn discount_flag_overrides_the_model() {
    let dir = TempDir::new().unwrap();
    let o = fmdp(&["solve", "--model", s(&ring_file(&dir, 1)), "--discount", "1/2", "--no-timing"]);
    assert!(stdout(&o).contains("discount=1/2"));
    let bad = fmdp(&["solve", "--model", s(&ring_file(&dir, 1)), "--discount", "3/2"]);
    assert_eq!(bad.status.code(), Some(1));
}

#[test]
fn oracle_check_passes_on_small_rings() {
    let dir = TempDir::new().unwrap();
    for n in [2, 3] {
        let o = fmdp(&["oracle-check", "--model", s(&ring_file(&dir, n))]);
        assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
        let text = stdout(&o);
        assert_eq!(text.lines().filter(|l| l.starts_with("PASS")).count(), 4);
        assert!(!text.contains("FAIL"));
    }
    let o = fmdp(&["oracle-check", "--model", s(&ring_file(&dir, 3)), "--oracle-limit", "4"]);
    assert_eq!(o.status.code(), Some(1));
}

/// Dumps the final weight LP of ring 2 and solves it; returns (lp, certificate) paths.
fn lp_and_certificate(dir: &TempDir) -> (PathBuf, PathBuf) {
    let lp = dir.path().join("ring2.lp");
    let cert = dir.path().join("ring2.cert");
    assert_eq!(fmdp(&["dump-lp", "--model", s(&ring_file(dir, 2)), "--out", s(&lp)]).status.code(), Some(0));
    assert_eq!(fmdp(&["solve-lp", "--lp", s(&lp), "--out", s(&cert)]).status.code(), Some(0));
    (lp, cert)
}

#[test]
fn dumped_lp_reproduces_the_reported_phi() {
    let dir = TempDir::new().unwrap();
    let (lp, cert) = lp_and_certificate(&dir);
    let report = stdout(&fmdp(&["solve", "--model", s(&ring_file(&dir, 2)), "--no-timing"]));
    let phi = report.lines().rfind(|l| l.starts_with("iter")).unwrap();
    let phi = phi.split_whitespace().find_map(|w| w.strip_prefix("phi=")).unwrap();
    let named = parse_lp(&std::fs::read_to_string(&lp).unwrap()).unwrap();
    let Certificate::Optimal { primal, .. } = parse_certificate(&std::fs::read_to_string(&cert).unwrap()).unwrap()
    else {
        panic!("weight LPs are optimal")
    };
    let phi_index = named.vars.iter().position(|v| v == "phi").unwrap();
    assert_eq!(primal[phi_index], parse_rational(phi).unwrap());
}

#[test]
fn certify_accepts_and_rejects() {
    let dir = TempDir::new().unwrap();
    let (lp, cert) = lp_and_certificate(&dir);
    for extra in [&[][..], &["--unnormalized"][..]] {
        let mut args = vec!["certify", "--lp", s(&lp), "--certificate", s(&cert)];
        args.extend_from_slice(extra);
        let o = fmdp(&args);
        assert_eq!(o.status.code(), Some(0));
        assert!(stdout(&o).contains("valid"));
    }

    let Certificate::Optimal { primal, mut dual } =
        parse_certificate(&std::fs::read_to_string(&cert).unwrap()).unwrap()
    else {
        panic!("weight LPs are optimal")
    };
    let k = dual.iter().position(|y| *y != ratio(0, 1)).unwrap();
    dual[k] += ratio(1, 1_000_000);
    let perturbed = dir.path().join("perturbed.cert");
    std::fs::write(&perturbed, write_certificate(&Certificate::Optimal { primal, dual: dual.clone() })).unwrap();
    assert_eq!(fmdp(&["certify", "--lp", s(&lp), "--certificate", s(&perturbed)]).status.code(), Some(4));

    // A feasible LP has no Farkas certificate.
    let farkas = dir.path().join("farkas.cert");
    let y = vec![ratio(1, 1); dual.len()];
    std::fs::write(&farkas, write_certificate(&Certificate::Infeasible { farkas: y })).unwrap();
    assert_eq!(fmdp(&["certify", "--lp", s(&lp), "--certificate", s(&farkas)]).status.code(), Some(4));

    let short = dir.path().join("short.cert");
    std::fs::write(&short, write_certificate(&Certificate::Infeasible { farkas: vec![ratio(1, 1)] })).unwrap();
    assert_eq!(fmdp(&["certify", "--lp", s(&lp), "--certificate", s(&short)]).status.code(), Some(4));

    let garbage = dir.path().join("garbage.cert");
    std::fs::write(&garbage, "optimal\nprimal 1/0\n").unwrap();
    assert_eq!(fmdp(&["certify", "--lp", s(&lp), "--certificate", s(&garbage)]).status.code(), Some(1));
}

#[test]
fn bench_prints_one_row_per_size() {
    let o = fmdp(&["bench", "1", "2", "3", "--no-timing"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let rows: Vec<&str> = text.lines().skip(1).collect();
    assert_eq!(rows.len(), 3);
    assert!(rows.iter().all(|r| r.split_whitespace().nth(4) == Some("true")));
    assert_eq!(fmdp(&["bench", "0"]).status.code(), Some(1));
}

#[test]
fn gen_ring_writes_a_loadable_model() {
    let dir = TempDir::new().unwrap();
    let path = dir.path().join("ring4.json");
    assert_eq!(fmdp(&["gen-ring", "4", "--discount", "1/2", "--out", s(&path)]).status.code(), Some(0));
    let m = fmdp::model_file::load_mdp(&path).unwrap();
    assert_eq!((m.n(), m.discount().clone()), (4, ratio(1, 2)));
    assert_eq!(fmdp(&["gen-ring", "0"]).status.code(), Some(1));
}

#[test]
fn help_exits_zero() {
    assert_eq!(fmdp(&["--help"]).status.code(), Some(0));
}
