//! The commands behind the `fmdp` binary, as plain functions returning exit codes.
//!
//! Exit codes: 0 success, 1 invalid input (validation, parse, scale, I/O), 2 an internal LP
//! contract failure, 3 an oracle cross-check failure, 4 an invalid certificate.

use std::fmt::Write as _;
use std::io::Write;
use std::path::Path;
use std::time::{Duration, Instant};

use crate::api::{api, posterior_bound, ApiConfig, ApiResult, PosteriorBound};
use crate::bellman::factored_bellman_err;
use crate::elim::ElimOrder;
use crate::error::{Error, Result};
use crate::lp::exchange::{parse_certificate, parse_lp, write_certificate, write_lp};
use crate::lp::{check_certificate, solve_lp, to_standard_form, update_weights, weight_lp, Arith, Certificate};
use crate::model::{FactoredMdp, Weights};
use crate::model_file::{parse_definition, to_json};
use crate::num::{format_rational, int, ratio, Rational};
use crate::oracle::{explicit_bellman_err_with, explicit_q, explicit_weight_lp, ExplicitMdp, DEFAULT_STATE_LIMIT};
use crate::policy::greedy_decision_list;
use crate::ring::ring_definition;

pub const EXIT_OK: i32 = 0;
pub const EXIT_INVALID: i32 = 1;
pub const EXIT_LP: i32 = 2;
pub const EXIT_ORACLE: i32 = 3;
pub const EXIT_CERTIFICATE: i32 = 4;

pub fn exit_code(err: &Error) -> i32 {
    match err {
        Error::Contract(_) | Error::Lp(_) => EXIT_LP,
        Error::InvalidInput(_)
        | Error::Validation(_)
        | Error::Parse { .. }
        | Error::UnsupportedScale(_)
        | Error::Io(_) => EXIT_INVALID,
    }
}

/// Settings shared by the model commands.
#[derive(Debug, Clone, PartialEq)]
pub struct Options {
    pub epsilon: Rational,
    pub t_max: usize,
    pub order: ElimOrder,
    pub discount: Option<Rational>,
    pub oracle_limit: usize,
    pub timing: bool,
}

impl Default for Options {
    fn default() -> Self {
        Options {
            epsilon: int(0),
            t_max: 30,
            order: ElimOrder::Identity,
            discount: None,
            oracle_limit: DEFAULT_STATE_LIMIT,
            timing: true,
        }
    }
}

impl Options {
    fn api_config(&self) -> ApiConfig {
        ApiConfig {
            epsilon: self.epsilon.clone(),
            t_max: self.t_max,
            order: self.order.clone(),
            ..ApiConfig::default()
        }
    }
}

pub fn parse_order(text: &str) -> Result<ElimOrder> {
    match text {
        "identity" => Ok(ElimOrder::Identity),
        "min-degree" => Ok(ElimOrder::MinDegree),
        other => Err(Error::InvalidInput(format!("unknown elimination order `{other}`"))),
    }
}

fn order_name(order: &ElimOrder) -> String {
    match order {
        ElimOrder::Identity => "identity".into(),
        ElimOrder::MinDegree => "min-degree".into(),
        ElimOrder::Fixed(p) => format!("{p:?}"),
    }
}

/// Reads a model file, applying a discount override before validation.
pub fn load_model(path: &Path, discount: Option<&Rational>) -> Result<FactoredMdp> {
    let mut def = parse_definition(&std::fs::read_to_string(path)?)?;
    if let Some(d) = discount {
        def.discount = d.clone();
    }
    FactoredMdp::new(def)
}

/// A solver run: model summary, per-iteration records, the final result and optionally the
/// a-posteriori bound.
#[derive(Debug, Clone)]
pub struct RunReport {
    pub n: usize,
    pub actions: usize,
    pub basis: usize,
    pub discount: Rational,
    pub epsilon: Rational,
    pub t_max: usize,
    pub order: ElimOrder,
    pub result: ApiResult,
    pub bound: Option<PosteriorBound>,
    pub total_time: Duration,
}

fn secs(d: Duration) -> String {
    format!("{:.3}", d.as_secs_f64())
}

fn rat(r: &Rational) -> String {
    format_rational(r)
}

impl RunReport {
    pub fn render(&self, mdp: &FactoredMdp, timing: bool) -> String {
        let mut out = String::new();
        let r = &self.result;
        let _ = writeln!(
            out,
            "model n={} actions={} basis={} discount={}",
            self.n,
            self.actions,
            self.basis,
            rat(&self.discount)
        );
        let _ = writeln!(
            out,
            "config epsilon={} t_max={} order={}",
            rat(&self.epsilon),
            self.t_max,
            order_name(&self.order)
        );
        for it in &r.iterations {
            let _ = write!(
                out,
                "iter t={} phi={} err={} constraints={} variables={} branches={}",
                it.t,
                rat(&it.phi),
                rat(&it.err),
                it.constraints,
                it.variables,
                it.branches
            );
            if timing {
                let _ = write!(out, " lp_time={} time={}", secs(it.lp_time), secs(it.total_time));
            }
            out.push('\n');
        }
        let _ = writeln!(
            out,
            "result t={} iterations={} w_eq={} err_le={} timeout={} err={}",
            r.t,
            r.iterations.len(),
            r.w_eq,
            r.err_le,
            r.timeout,
            rat(&r.err)
        );
        let _ = writeln!(out, "weights {}", r.w.0.iter().map(rat).collect::<Vec<_>>().join(" "));
        let _ = writeln!(out, "policy branches={}", r.pol.len());
        for line in r.pol.to_text(mdp).lines() {
            let _ = writeln!(out, "  {line}");
        }
        if let Some(b) = &self.bound {
            let _ = writeln!(
                out,
                "bound lhs={} rhs={} holds={} policy_lhs={} policy_holds={}",
                rat(&b.lhs),
                rat(&b.rhs),
                b.holds,
                rat(&b.policy_lhs),
                b.policy_holds
            );
        }
        if timing {
            let _ = writeln!(out, "time total={}", secs(self.total_time));
        }
        out
    }
}

/// Runs the solver and, when the weights converged on a small enough model, the bound.
pub fn solve(mdp: &FactoredMdp, opts: &Options) -> Result<RunReport> {
    let start = Instant::now();
    let result = api(mdp, &opts.api_config())?;
    let total_time = start.elapsed();
    let bound = match result.converged() {
        true => match posterior_bound(mdp, &result, opts.oracle_limit) {
            Ok(b) => Some(b),
            Err(Error::UnsupportedScale(_)) => None,
            Err(e) => return Err(e),
        },
        false => None,
    };
    Ok(RunReport {
        n: mdp.n(),
        actions: mdp.num_actions(),
        basis: mdp.h_dim(),
        discount: mdp.discount().clone(),
        epsilon: opts.epsilon.clone(),
        t_max: opts.t_max,
        order: opts.order.clone(),
        result,
        bound,
        total_time,
    })
}

/// Reports `err` on stderr and maps it to an exit code.
fn fail(err: &Error) -> i32 {
    eprintln!("error: {err}");
    exit_code(err)
}

fn emit(out: &mut dyn Write, text: &str, report: Option<&Path>) -> Result<()> {
    match report {
        Some(path) => std::fs::write(path, text)?,
        None => out.write_all(text.as_bytes())?,
    }
    Ok(())
}

pub fn cmd_solve(model: &Path, opts: &Options, report: Option<&Path>, out: &mut dyn Write) -> i32 {
    let result = (|| -> Result<()> {
        let mdp = load_model(model, opts.discount.as_ref())?;
        let rep = solve(&mdp, opts)?;
        emit(out, &rep.render(&mdp, opts.timing), report)
    })();
    match result {
        Ok(()) => EXIT_OK,
        Err(e) => fail(&e),
    }
}

/// One named cross-check between a factored computation and its brute-force counterpart.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CheckOutcome {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

/// Compares the factored computations against the explicit oracle on `mdp`.
pub fn oracle_checks(mdp: &FactoredMdp, opts: &Options) -> Result<Vec<CheckOutcome>> {
    let ex = ExplicitMdp::build(mdp, opts.oracle_limit)?;
    let result = api(mdp, &opts.api_config())?;
    let probes = probe_weights(mdp.h_dim(), &result.w);
    let mut out = Vec::new();

    let mut q_bad = None;
    'q: for w in &probes {
        for x in &ex.states {
            for a in mdp.actions() {
                let (f, e) = (mdp.q_value(w, a, x)?, explicit_q(mdp, w, a, x)?);
                if f != e {
                    q_bad = Some(format!("action {} at {x}: {} vs {}", mdp.action_name(a), rat(&f), rat(&e)));
                    break 'q;
                }
            }
        }
    }
    out.push(CheckOutcome {
        name: "q_value".into(),
        passed: q_bad.is_none(),
        detail: q_bad.unwrap_or_else(|| format!("{} weight vectors, {} states", probes.len(), ex.num_states())),
    });

    let mut err_bad = None;
    for w in &probes {
        let pol = greedy_decision_list(mdp, w)?;
        let (f, e) = (factored_bellman_err(mdp, w, &pol, &opts.order)?, explicit_bellman_err_with(&ex, mdp, w, &pol)?);
        if f != e {
            err_bad = Some(format!("factored {} vs explicit {}", rat(&f), rat(&e)));
            break;
        }
    }
    out.push(CheckOutcome {
        name: "bellman_error".into(),
        passed: err_bad.is_none(),
        detail: err_bad.unwrap_or_else(|| format!("{} weight vectors", probes.len())),
    });

    let mut lp_bad = None;
    for w in &probes {
        let pol = greedy_decision_list(mdp, w)?;
        let factored = update_weights(mdp, &pol, &opts.order)?.phi;
        let explicit = match solve_lp(&to_standard_form(&explicit_weight_lp(mdp, &pol)?))? {
            Certificate::Optimal { primal, .. } => primal[0].clone(),
            other => return Err(Error::Lp(format!("the explicit weight LP came back {}", other.kind()))),
        };
        if factored != explicit {
            lp_bad = Some(format!("factored phi {} vs explicit {}", rat(&factored), rat(&explicit)));
            break;
        }
    }
    out.push(CheckOutcome {
        name: "weight_lp".into(),
        passed: lp_bad.is_none(),
        detail: lp_bad.unwrap_or_else(|| format!("{} policies", probes.len())),
    });

    let bound = if result.converged() {
        let b = posterior_bound(mdp, &result, opts.oracle_limit)?;
        CheckOutcome {
            name: "posterior_bound".into(),
            passed: b.holds,
            detail: format!("{} <= {}", rat(&b.lhs), rat(&b.rhs)),
        }
    } else {
        CheckOutcome { name: "posterior_bound".into(), passed: false, detail: "the weights did not converge".into() }
    };
    out.push(bound);
    Ok(out)
}

/// Fixed weight vectors for the cross-checks: zero, the converged weights and two mixed-sign
/// patterns.
fn probe_weights(m: usize, converged: &Weights) -> Vec<Weights> {
    let pattern = |f: &dyn Fn(usize) -> Rational| Weights((0..m).map(f).collect());
    vec![
        Weights::zeros(m),
        converged.clone(),
        pattern(&|i| ratio(i as i64 * 3 + 1, 2) * if i % 2 == 0 { int(1) } else { int(-1) }),
        pattern(&|i| ratio(7 - i as i64 * 2, 3)),
    ]
}

pub fn cmd_oracle_check(model: &Path, opts: &Options, out: &mut dyn Write) -> i32 {
    let checks = match load_model(model, opts.discount.as_ref()).and_then(|mdp| oracle_checks(&mdp, opts)) {
        Ok(c) => c,
        Err(e) => return fail(&e),
    };
    let mut first_failure = None;
    for c in &checks {
        let _ = writeln!(out, "{} {} {}", if c.passed { "PASS" } else { "FAIL" }, c.name, c.detail);
        if !c.passed && first_failure.is_none() {
            first_failure = Some(c.name.clone());
        }
    }
    match first_failure {
        None => EXIT_OK,
        Some(name) => {
            eprintln!("error: oracle check `{name}` failed");
            EXIT_ORACLE
        }
    }
}

pub fn cmd_certify(lp_path: &Path, cert_path: &Path, arith: Arith, out: &mut dyn Write) -> i32 {
    let result = (|| -> Result<bool> {
        let lp = parse_lp(&std::fs::read_to_string(lp_path)?)?;
        let cert = parse_certificate(&std::fs::read_to_string(cert_path)?)?;
        let std = lp.to_std();
        std.check_shape()?;
        match check_certificate(&std, &cert, arith) {
            Ok(valid) => Ok(valid),
            // Vector lengths that do not fit the LP make the certificate invalid, not the input.
            Err(Error::InvalidInput(msg)) => {
                let _ = writeln!(out, "mismatch: {msg}");
                Ok(false)
            }
            Err(e) => Err(e),
        }
    })();
    match result {
        Ok(true) => {
            let _ = writeln!(out, "valid");
            EXIT_OK
        }
        Ok(false) => {
            let _ = writeln!(out, "invalid");
            EXIT_CERTIFICATE
        }
        Err(e) => fail(&e),
    }
}

/// One Table-1-shaped row: sizes of the final weight LP and the run's timings.
#[derive(Debug, Clone)]
pub struct BenchRow {
    pub n: usize,
    pub states: u128,
    pub actions: usize,
    pub iterations: usize,
    pub converged: bool,
    pub constraints: usize,
    pub variables: usize,
    pub total_time: Duration,
    pub lp_time: Duration,
}

impl BenchRow {
    pub const HEADER: &'static str = "n states actions iterations converged constraints variables total_s lp_s";

    pub fn render(&self, timing: bool) -> String {
        let times = if timing { format!("{} {}", secs(self.total_time), secs(self.lp_time)) } else { "- -".into() };
        format!(
            "{} {} {} {} {} {} {} {times}",
            self.n, self.states, self.actions, self.iterations, self.converged, self.constraints, self.variables
        )
    }
}

pub fn bench(n: usize, opts: &Options) -> Result<BenchRow> {
    let mut def = ring_definition(n)?;
    if let Some(d) = &opts.discount {
        def.discount = d.clone();
    }
    let mdp = FactoredMdp::new(def)?;
    let start = Instant::now();
    let r = api(&mdp, &opts.api_config())?;
    let total_time = start.elapsed();
    let last = r.iterations.last().expect("at least one iteration");
    Ok(BenchRow {
        n,
        states: 1u128 << n.min(127),
        actions: mdp.num_actions(),
        iterations: r.iterations.len(),
        converged: r.converged(),
        constraints: last.constraints,
        variables: last.variables,
        total_time,
        lp_time: r.iterations.iter().map(|i| i.lp_time).sum(),
    })
}

pub fn cmd_bench(ns: &[usize], opts: &Options, out: &mut dyn Write) -> i32 {
    let _ = writeln!(out, "{}", BenchRow::HEADER);
    for &n in ns {
        match bench(n, opts) {
            Ok(row) => {
                let _ = writeln!(out, "{}", row.render(opts.timing));
            }
            Err(e) => return fail(&e),
        }
    }
    EXIT_OK
}

/// Writes the ring model with `n` machines.
pub fn cmd_gen_ring(n: usize, discount: Option<&Rational>, path: Option<&Path>, out: &mut dyn Write) -> i32 {
    let result = (|| -> Result<()> {
        let mut def = ring_definition(n)?;
        if let Some(d) = discount {
            def.discount = d.clone();
        }
        FactoredMdp::new(def.clone())?;
        emit(out, &(to_json(&def) + "\n"), path)
    })();
    match result {
        Ok(()) => EXIT_OK,
        Err(e) => fail(&e),
    }
}

/// Writes the weight LP of the policy the solver ends with, in the LP exchange format.
pub fn cmd_dump_lp(model: &Path, opts: &Options, path: Option<&Path>, out: &mut dyn Write) -> i32 {
    let result = (|| -> Result<()> {
        let mdp = load_model(model, opts.discount.as_ref())?;
        let r = api(&mdp, &opts.api_config())?;
        let lp = weight_lp(&mdp, &r.pol, &opts.order)?;
        emit(out, &write_lp(&lp.to_named()), path)
    })();
    match result {
        Ok(()) => EXIT_OK,
        Err(e) => fail(&e),
    }
}

/// Solves an LP file with the built-in simplex and writes its certificate.
pub fn cmd_solve_lp(lp_path: &Path, path: Option<&Path>, out: &mut dyn Write) -> i32 {
    let result = (|| -> Result<()> {
        let std = parse_lp(&std::fs::read_to_string(lp_path)?)?.to_std();
        std.check_shape()?;
        emit(out, &write_certificate(&solve_lp(&std)?), path)
    })();
    match result {
        Ok(()) => EXIT_OK,
        Err(e) => fail(&e),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exit_codes_by_class() {
        assert_eq!(exit_code(&Error::Parse { location: "x".into(), message: "y".into() }), EXIT_INVALID);
        assert_eq!(exit_code(&Error::UnsupportedScale("big".into())), EXIT_INVALID);
        assert_eq!(exit_code(&Error::Lp("bad".into())), EXIT_LP);
        assert_eq!(exit_code(&Error::Contract("bad".into())), EXIT_LP);
    }

    #[test]
    fn orders_parse() {
        assert_eq!(parse_order("identity").unwrap(), ElimOrder::Identity);
        assert_eq!(parse_order("min-degree").unwrap(), ElimOrder::MinDegree);
        assert!(parse_order("random").is_err());
    }

    #[test]
    fn bench_rejects_empty_ring() {
        let mut out = Vec::new();
        assert_eq!(cmd_bench(&[0], &Options::default(), &mut out), EXIT_INVALID);
    }
}
