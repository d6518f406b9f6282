//! The ring network benchmark: `n` machines in a cycle, each working or broken.
//!
//! Machine `i` is variable `i` and its predecessor is `i − 1 mod n`. Actions are `noop`
//! (the default) and one `restart_i` per machine. Basis function 0 is the constant 1 and
//! basis function `i + 1` indicates that machine `i` works.

use std::collections::BTreeSet;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::model::{ActionDef, Distribution, FactoredMdp, MdpDefinition};
use crate::num::{ratio, Rational};
use crate::scoped::ScopedFn;
use crate::state::VarSet;

pub const W: usize = 0;
pub const B: usize = 1;

/// Probability that a machine works next step under `noop`, given its own state and its
/// predecessor's state.
pub fn works_next(own: usize, pred: usize) -> Rational {
    match (own, pred) {
        (W, W) => ratio(9, 10),
        (B, W) => ratio(2, 10),
        (W, B) => ratio(7, 10),
        _ => ratio(1, 10),
    }
}

fn binary(p_work: Rational) -> Distribution {
    let p_broken = Rational::one() - &p_work;
    vec![p_work, p_broken]
}

pub fn ring_definition(n: usize) -> Result<MdpDefinition> {
    if n == 0 {
        return Err(Error::InvalidInput("a ring needs at least one machine".into()));
    }
    let sizes = vec![2; n];
    let noop_transition = |i: usize| {
        let pred = (i + n - 1) % n;
        let scope: VarSet = [i, pred].into_iter().collect();
        ScopedFn::from_fn(&sizes, &scope, |x| binary(works_next(x.get(i).unwrap(), x.get(pred).unwrap())))
    };
    let noop: Vec<ScopedFn<Distribution>> = (0..n).map(noop_transition).collect();
    let rewards: Vec<ScopedFn<Rational>> =
        (0..n).map(|i| ScopedFn::new(vec![i], vec![2], vec![Rational::one(), Rational::zero()]).unwrap()).collect();

    let mut actions = vec![ActionDef {
        name: "noop".into(),
        transitions: noop.clone(),
        rewards: rewards.clone(),
        effects: BTreeSet::new(),
    }];
    for i in 0..n {
        let mut transitions = noop.clone();
        transitions[i] =
            ScopedFn::new(vec![i], vec![2], vec![binary(Rational::one()), binary(Rational::one())]).unwrap();
        actions.push(ActionDef {
            name: format!("restart_{i}"),
            transitions,
            rewards: rewards.clone(),
            effects: [i].into_iter().collect(),
        });
    }

    let mut basis = vec![ScopedFn::constant(Rational::one())];
    basis.extend(rewards.iter().cloned());

    Ok(MdpDefinition {
        domains: vec![vec!["W".to_string(), "B".to_string()]; n],
        actions,
        default_action: Some(0),
        discount: ratio(9, 10),
        basis,
    })
}

pub fn make_ring(n: usize) -> Result<FactoredMdp> {
    FactoredMdp::new(ring_definition(n)?)
}
