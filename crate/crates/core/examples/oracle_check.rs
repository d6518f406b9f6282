//! Cross-checking the factored computations against brute-force enumeration.
//!
//! ```bash
//! cargo run --release --example oracle_check
//! ```

use fmdp::bellman::factored_bellman_err;
use fmdp::elim::ElimOrder;
use fmdp::lp::update_weights;
use fmdp::model::Weights;
use fmdp::num::{format_rational, ratio};
use fmdp::oracle::{explicit_bellman_err, explicit_weight_lp, optimal_value};
use fmdp::policy::greedy_decision_list;
use fmdp::ring::make_ring;

fn main() -> fmdp::Result<()> {
    let mdp = make_ring(3)?;
    let w = Weights(vec![ratio(5, 1), ratio(-1, 2), ratio(3, 4), ratio(1, 1)]);
    let pol = greedy_decision_list(&mdp, &w)?;

    let factored = factored_bellman_err(&mdp, &w, &pol, &ElimOrder::MinDegree)?;
    let explicit = explicit_bellman_err(&mdp, &w, &pol)?;
    println!("bellman error: factored {} explicit {}", format_rational(&factored), format_rational(&explicit));

    let update = update_weights(&mdp, &pol, &ElimOrder::Identity)?;
    let per_state = explicit_weight_lp(&mdp, &pol)?;
    println!(
        "weight LP: factored phi {} with {} rows, per-state LP has {} rows",
        format_rational(&update.phi),
        update.constraints,
        per_state.num_constraints()
    );

    let opt = optimal_value(&mdp)?;
    println!("optimal values after {} policy-iteration rounds:", opt.iterations);
    for ((x, v), a) in mdp.states().iter().zip(&opt.values).zip(&opt.actions) {
        println!("  {:<18} {} ({})", x.to_string(), format_rational(v), mdp.action_name(*a));
    }
    Ok(())
}
