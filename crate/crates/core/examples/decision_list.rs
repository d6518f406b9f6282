//! Greedy decision-list policies and their branch bonuses.
//!
//! ```bash
//! cargo run --example decision_list
//! ```

use fmdp::model::Weights;
use fmdp::num::{format_rational, ratio};
use fmdp::policy::{bonus, greedy_decision_list, DecisionList};
use fmdp::ring::make_ring;
use fmdp::state::PartialState;

fn main() -> fmdp::Result<()> {
    let mdp = make_ring(3)?;
    let w = Weights(vec![ratio(10, 1), ratio(2, 1), ratio(3, 1), ratio(1, 2)]);

    let pol = greedy_decision_list(&mdp, &w)?;
    let text = pol.to_text(&mdp);
    print!("{text}");
    assert_eq!(DecisionList::from_text(&mdp, &text)?, pol);

    let restart_0 = mdp.action_by_name("restart_0").expect("ring action");
    let b = bonus(&mdp, &w, restart_0)?;
    println!("bonus of restart_0 over scope {:?}:", b.scope());
    for (k, v) in b.table().iter().enumerate() {
        println!("  entry {k}: {}", format_rational(v));
    }

    for x in mdp.states() {
        let a = pol.select_action(&x)?;
        println!("{:<18} -> {}", x.to_string(), mdp.action_name(a));
    }
    let all_broken = PartialState::full(&[1, 1, 1]);
    println!("all broken: {}", mdp.action_name(pol.select_action(&all_broken)?));
    Ok(())
}
