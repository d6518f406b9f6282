//! Solving small LPs exactly and checking their certificates.
//!
//! ```bash
//! cargo run --example certify_lp
//! ```

use fmdp::lp::exchange::write_certificate;
use fmdp::lp::{check_certificate, solve_lp, Arith, Certificate, StdLp};
use fmdp::num::{int, ratio, Rational};

fn rows(a: &[&[i64]]) -> Vec<Vec<Rational>> {
    a.iter().map(|r| r.iter().map(|&v| int(v)).collect()).collect()
}

fn report(name: &str, lp: &StdLp) -> fmdp::Result<Certificate> {
    let cert = solve_lp(lp)?;
    let ok = check_certificate(lp, &cert, Arith::Normalized)?;
    println!("== {name}: {} (checker: {ok})", cert.kind());
    print!("{}", write_certificate(&cert));
    Ok(cert)
}

fn main() -> fmdp::Result<()> {
    // min -x - y  s.t.  x + 2y <= 4,  3x + y <= 6,  x, y >= 0
    let a = rows(&[&[1, 2], &[3, 1], &[-1, 0], &[0, -1]]);
    let optimal = StdLp::from_dense(&a, vec![int(4), int(6), int(0), int(0)], vec![int(-1), int(-1)]);
    let cert = report("optimal", &optimal)?;

    // x <= 1 and -x <= -2 cannot both hold.
    let infeasible = StdLp::from_dense(&rows(&[&[1], &[-1]]), vec![int(1), int(-2)], vec![int(0)]);
    report("infeasible", &infeasible)?;

    // min -x  s.t.  -x <= 0
    let unbounded = StdLp::from_dense(&rows(&[&[-1]]), vec![int(0)], vec![int(-1)]);
    report("unbounded", &unbounded)?;

    // A nudged dual no longer balances the objective.
    if let Certificate::Optimal { primal, mut dual } = cert {
        dual[0] += ratio(1, 1_000_000);
        let nudged = Certificate::Optimal { primal, dual };
        println!("nudged dual accepted: {}", check_certificate(&optimal, &nudged, Arith::Unnormalized)?);
    }
    Ok(())
}
