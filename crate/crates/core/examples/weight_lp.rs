//! Building the factored weight LP, exporting it, and certifying its solution.
//!
//! ```bash
//! cargo run --release --example weight_lp -- /tmp/ring2.lp
//! ```

use fmdp::elim::ElimOrder;
use fmdp::lp::exchange::{parse_lp, write_certificate, write_lp};
use fmdp::lp::{check_optimality, solve_lp, to_standard_form, weight_lp, Certificate, ConstraintKind};
use fmdp::model::Weights;
use fmdp::num::format_rational;
use fmdp::policy::greedy_decision_list;
use fmdp::ring::make_ring;

fn main() -> fmdp::Result<()> {
    let mdp = make_ring(2)?;
    let pol = greedy_decision_list(&mdp, &Weights::zeros(mdp.h_dim()))?;
    let lp = weight_lp(&mdp, &pol, &ElimOrder::MinDegree)?;
    let eq = lp.constraints.iter().filter(|c| c.kind == ConstraintKind::Eq).count();
    println!("{} constraints ({eq} equalities) over {} variables", lp.num_constraints(), lp.variables().len());

    let text = write_lp(&lp.to_named());
    if let Some(path) = std::env::args().nth(1) {
        std::fs::write(&path, &text)?;
        println!("wrote {path}");
    }

    // Anything read back from the file format checks the same way.
    let std = parse_lp(&text)?.to_std();
    assert_eq!(std, to_standard_form(&lp));
    match solve_lp(&std)? {
        Certificate::Optimal { primal, dual } => {
            println!("phi = {}", format_rational(&primal[0]));
            println!("certificate valid: {}", check_optimality(&std, &primal, &dual)?);
            let cert = write_certificate(&Certificate::Optimal { primal, dual });
            println!("certificate is {} bytes", cert.len());
        }
        other => println!("unexpected {}", other.kind()),
    }
    Ok(())
}
