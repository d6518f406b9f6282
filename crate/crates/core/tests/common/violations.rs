//! One injected violation per named structural assumption, each applied to the valid 2-ring.

use fmdp::model::MdpDefinition;
use fmdp::num::{int, ratio, Rational};
use fmdp::ring::ring_definition;
use fmdp::scoped::ScopedFn;

fn dist(p: Rational) -> Vec<Rational> {
    vec![p.clone(), int(1) - p]
}

type Inject = fn(&mut MdpDefinition);

/// `(assumption, injection)` pairs. Some assumptions have more than one injection.
pub fn cases() -> Vec<(&'static str, Inject)> {
    vec![
        ("transitions_closed", |d| {
            let short = ScopedFn::new(vec![0], vec![2], vec![vec![int(1)], vec![int(1)]]).unwrap();
            for a in &mut d.actions {
                a.transitions[0] = short.clone();
            }
        }),
        ("transitions_closed/normalization", |d| {
            let bad = ScopedFn::new(vec![1], vec![2], vec![dist(ratio(1, 2)), vec![ratio(1, 2), ratio(1, 3)]]).unwrap();
            for a in &mut d.actions {
                a.transitions[1] = bad.clone();
            }
        }),
        ("transitions_scope", |d| {
            d.actions[1].transitions.pop();
        }),
        ("transitions_scope", |d| {
            d.actions[2].transitions[0] = ScopedFn::new(vec![0], vec![3], vec![dist(int(1)); 3]).unwrap();
        }),
        ("transitions_scope_dims", |d| {
            d.actions[1].transitions[0] = ScopedFn::new(vec![5], vec![2], vec![dist(int(1)); 2]).unwrap();
        }),
        ("actions_ne", |d| {
            d.actions.clear();
            d.default_action = None;
        }),
        ("doms_ne", |d| d.domains[1].clear()),
        ("dims_pos", |d| {
            d.domains.clear();
            for a in &mut d.actions {
                a.transitions.clear();
                a.rewards.clear();
                a.effects.clear();
            }
            d.basis.truncate(1);
        }),
        ("reward_scope", |d| {
            let bad = ScopedFn::new(vec![0], vec![3], vec![int(0); 3]).unwrap();
            for a in &mut d.actions {
                a.rewards[0] = bad.clone();
            }
        }),
        ("reward_scope_dims", |d| {
            let bad = ScopedFn::new(vec![2], vec![2], vec![int(0); 2]).unwrap();
            for a in &mut d.actions {
                a.rewards[0] = bad.clone();
            }
        }),
        ("h_scope", |d| d.basis[1] = ScopedFn::new(vec![1], vec![4], vec![int(1); 4]).unwrap()),
        ("h_scope_dims", |d| d.basis[1] = ScopedFn::new(vec![7], vec![2], vec![int(1); 2]).unwrap()),
        ("disc_lt_one", |d| d.discount = int(1)),
        ("disc_nonneg", |d| d.discount = ratio(-1, 10)),
        ("default_act", |d| d.default_action = None),
        ("default_act", |d| d.default_action = Some(9)),
        // restart_0 changes variable 1 without declaring it.
        ("effects", |d| {
            d.actions[1].transitions[1] = ScopedFn::new(vec![1], vec![2], vec![dist(int(1)); 2]).unwrap();
        }),
        ("effects_default", |d| {
            d.actions[0].effects.insert(0);
        }),
        ("rewards_default_dim", |d| {
            d.actions[2].rewards.pop();
        }),
        ("rewards_eq", |d| d.actions[1].rewards[0] = ScopedFn::new(vec![0], vec![2], vec![int(2), int(0)]).unwrap()),
        ("reward_scope_eq", |d| {
            d.actions[1].rewards[0] = ScopedFn::new(vec![1], vec![2], vec![int(1), int(0)]).unwrap()
        }),
        ("actions_distinct", |d| d.actions[2].name = d.actions[1].name.clone()),
    ]
}

/// Assumptions that a finite, in-memory definition satisfies by construction.
pub const BY_CONSTRUCTION: [&str; 2] = ["actions_fin", "doms_fin"];

/// Applies every injection for `assumption` and returns the validator's names for each.
pub fn detected(assumption: &str) -> Vec<Vec<&'static str>> {
    cases()
        .into_iter()
        .filter(|(name, _)| *name == assumption)
        .map(|(_, inject)| {
            let mut def = ring_definition(2).unwrap();
            inject(&mut def);
            def.validate().iter().map(|v| v.assumption).collect()
        })
        .collect()
}
