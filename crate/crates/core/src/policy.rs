//! Greedy decision-list policies.
//!
//! A branch `(t, a, δ)` says: in any state consistent with `t`, action `a` beats the default
//! by `δ`. Branches are sorted by decreasing bonus, so the first match is a greedy choice.

use std::fmt::Write as _;

use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::model::{ActionId, FactoredMdp, Weights};
use crate::num::{format_rational, parse_rational, Rational};
use crate::scoped::ScopedFn;
use crate::state::{assignments, PartialState, VarSet};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Branch {
    pub t: PartialState,
    pub action: ActionId,
    pub bonus: Rational,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DecisionList {
    pub branches: Vec<Branch>,
}

/// `I_a`: basis functions whose scope meets the effects of `a`.
pub fn relevant_basis(mdp: &FactoredMdp, a: ActionId) -> Vec<usize> {
    let effects = mdp.effects(a);
    (0..mdp.h_dim()).filter(|&i| mdp.basis(i).scope().iter().any(|v| effects.contains(v))).collect()
}

fn extra_rewards(mdp: &FactoredMdp, a: ActionId) -> &[ScopedFn<Rational>] {
    &mdp.rewards(a)[mdp.reward_dim(mdp.default_action())..]
}

/// `T_a`: the scope of the bonus function of `a`.
pub fn scope_t(mdp: &FactoredMdp, a: ActionId) -> VarSet {
    let d = mdp.default_action();
    let mut t: VarSet = extra_rewards(mdp, a).iter().flat_map(|r| r.scope().iter().copied()).collect();
    for i in relevant_basis(mdp, a) {
        t.extend(mdp.g(i, a).scope());
        t.extend(mdp.g(i, d).scope());
    }
    t
}

/// `δ_a = Q^a_w − Q^d_w`, tabulated over `T_a`.
pub fn bonus(mdp: &FactoredMdp, w: &Weights, a: ActionId) -> Result<ScopedFn<Rational>> {
    mdp.check_weights(w)?;
    let d = mdp.default_action();
    let rel = relevant_basis(mdp, a);
    let extra = extra_rewards(mdp, a);
    let gamma = mdp.discount();
    Ok(ScopedFn::from_fn(mdp.domain_sizes(), &scope_t(mdp, a), |t| {
        let r: Rational = extra.iter().map(|r| r.eval(t).expect("T_a covers reward scopes").clone()).sum();
        let diff: Rational = rel
            .iter()
            .map(|&i| {
                &w[i]
                    * (mdp.g(i, a).eval(t).expect("T_a covers Γ^a_i") - mdp.g(i, d).eval(t).expect("T_a covers Γ^d_i"))
            })
            .sum();
        r + gamma * diff
    }))
}

/// The branches of `a` with strictly positive bonus, in assignment order.
pub fn dec_list_act(mdp: &FactoredMdp, w: &Weights, a: ActionId) -> Result<Vec<Branch>> {
    let delta = bonus(mdp, w, a)?;
    let scope = delta.scope_set();
    Ok(assignments(mdp.domain_sizes(), &scope)
        .into_iter()
        .zip(delta.into_table())
        .filter(|(_, b)| b.is_positive())
        .map(|(t, bonus)| Branch { t, action: a, bonus })
        .collect())
}

/// The greedy policy for `ν_w`: the default branch followed by every positive-bonus
/// branch, stably sorted by decreasing bonus.
pub fn greedy_decision_list(mdp: &FactoredMdp, w: &Weights) -> Result<DecisionList> {
    let d = mdp.default_action();
    let mut branches = vec![Branch { t: PartialState::empty(), action: d, bonus: Rational::zero() }];
    for a in mdp.actions().filter(|&a| a != d) {
        branches.extend(dec_list_act(mdp, w, a)?);
    }
    branches.sort_by(|x, y| y.bonus.cmp(&x.bonus));
    Ok(DecisionList { branches })
}

impl DecisionList {
    /// The list `[(⊥, d, 0)]`.
    pub fn default_only(mdp: &FactoredMdp) -> Self {
        DecisionList {
            branches: vec![Branch { t: PartialState::empty(), action: mdp.default_action(), bonus: Rational::zero() }],
        }
    }

    pub fn len(&self) -> usize {
        self.branches.len()
    }

    pub fn is_empty(&self) -> bool {
        self.branches.is_empty()
    }

    /// Position of the first branch consistent with `x`.
    pub fn select_branch(&self, x: &PartialState) -> Result<usize> {
        self.branches
            .iter()
            .position(|b| x.consistent_with(&b.t))
            .ok_or_else(|| Error::Contract(format!("no branch of the decision list matches {x}")))
    }

    pub fn select_action(&self, x: &PartialState) -> Result<ActionId> {
        Ok(self.branches[self.select_branch(x)?].action)
    }

    /// One line per branch: `var=value ... ; action ; bonus`, with `*` for the empty state.
    pub fn to_text(&self, mdp: &FactoredMdp) -> String {
        let domains = &mdp.definition().domains;
        let mut out = String::new();
        for b in &self.branches {
            let t = if b.t.is_empty() {
                "*".to_string()
            } else {
                b.t.iter().map(|(v, x)| format!("{v}={}", domains[v][x])).collect::<Vec<_>>().join(" ")
            };
            let _ = writeln!(out, "{t} ; {} ; {}", mdp.action_name(b.action), format_rational(&b.bonus));
        }
        out
    }

    pub fn from_text(mdp: &FactoredMdp, text: &str) -> Result<Self> {
        let domains = &mdp.definition().domains;
        let mut branches = Vec::new();
        for (k, line) in text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty()) {
            let loc = format!("line {}", k + 1);
            let parts: Vec<&str> = line.split(';').map(str::trim).collect();
            let [t, action, bonus] = parts[..] else {
                return Err(Error::parse(loc, "expected `state ; action ; bonus`"));
            };
            let mut state = PartialState::empty();
            if t != "*" {
                for pair in t.split_whitespace() {
                    let (v, x) =
                        pair.split_once('=').ok_or_else(|| Error::parse(&loc, format!("bad assignment `{pair}`")))?;
                    let v: usize = v.parse().map_err(|_| Error::parse(&loc, format!("bad variable `{v}`")))?;
                    let x = domains
                        .get(v)
                        .and_then(|d| d.iter().position(|name| name == x))
                        .ok_or_else(|| Error::parse(&loc, format!("unknown value `{pair}`")))?;
                    state.insert(v, x);
                }
            }
            let action =
                mdp.action_by_name(action).ok_or_else(|| Error::parse(&loc, format!("unknown action `{action}`")))?;
            let bonus = parse_rational(bonus).map_err(|e| Error::parse(&loc, e))?;
            branches.push(Branch { t: state, action, bonus });
        }
        Ok(DecisionList { branches })
    }
}
