//! Per-branch Bellman errors of a decision list.
//!
//! ```bash
//! cargo run --example bellman_error
//! ```

use fmdp::bellman::{branch_errors, factored_bellman_err};
use fmdp::elim::ElimOrder;
use fmdp::model::Weights;
use fmdp::num::{format_rational, int};
use fmdp::policy::greedy_decision_list;
use fmdp::ring::make_ring;

fn main() -> fmdp::Result<()> {
    let mdp = make_ring(3)?;
    let w = Weights(vec![int(20), int(2), int(2), int(2)]);
    let pol = greedy_decision_list(&mdp, &w)?;
    let errs = branch_errors(&mdp, &w, &pol, &ElimOrder::MinDegree)?;
    for (br, e) in pol.branches.iter().zip(&errs) {
        // Branches shadowed by earlier ones report -inf.
        println!("{:<12} {:<10} {e}", br.t.to_string(), mdp.action_name(br.action));
    }
    let total = factored_bellman_err(&mdp, &w, &pol, &ElimOrder::MinDegree)?;
    println!("max over branches: {}", format_rational(&total));
    Ok(())
}
