//! Brute-force reference computations over the full state space.
//!
//! Everything here enumerates all `∏|X_i|` states, so it is only usable on small models
//! and refuses to build beyond a state limit.

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::lp::{Constraint, ConstraintKind, Lp, LpVar};
use crate::model::{ActionId, FactoredMdp, Weights};
use crate::num::{int, Rational};
use crate::policy::DecisionList;
use crate::state::PartialState;

pub const DEFAULT_STATE_LIMIT: usize = 4096;

/// All full states in mixed-radix order, or an error beyond `limit` states.
pub fn enumerate_states(mdp: &FactoredMdp, limit: usize) -> Result<Vec<PartialState>> {
    let count = mdp.domain_sizes().iter().try_fold(1usize, |acc, &s| acc.checked_mul(s));
    match count {
        Some(c) if c <= limit => Ok(mdp.states()),
        _ => Err(Error::UnsupportedScale(format!(
            "{} states exceed the oracle limit of {limit}",
            count.map_or_else(|| "too many".to_string(), |c| c.to_string())
        ))),
    }
}

/// The flat MDP: rewards and successor distributions per state and action.
#[derive(Debug, Clone, PartialEq)]
pub struct ExplicitMdp {
    pub states: Vec<PartialState>,
    pub discount: Rational,
    /// `reward[s][a]`.
    pub reward: Vec<Vec<Rational>>,
    /// `successors[s][a][s']`, summing to 1.
    pub successors: Vec<Vec<Vec<Rational>>>,
}

impl ExplicitMdp {
    pub fn build(mdp: &FactoredMdp, limit: usize) -> Result<Self> {
        let states = enumerate_states(mdp, limit)?;
        let n = mdp.n();
        let dense: Vec<Vec<usize>> = states.iter().map(|x| x.to_dense(n).expect("full state")).collect();
        let mut reward = Vec::with_capacity(states.len());
        let mut successors = Vec::with_capacity(states.len());
        for (x, xs) in states.iter().zip(&dense) {
            let mut r_row = Vec::with_capacity(mdp.num_actions());
            let mut p_row = Vec::with_capacity(mdp.num_actions());
            for a in mdp.actions() {
                r_row.push(mdp.reward(a, x)?);
                let dists: Vec<&Vec<Rational>> = (0..n).map(|i| mdp.transition(a, i).eval_dense(xs)).collect();
                let p: Vec<Rational> =
                    dense.iter().map(|ys| ys.iter().enumerate().map(|(i, &y)| dists[i][y].clone()).product()).collect();
                if p.iter().sum::<Rational>() != Rational::one() {
                    return Err(Error::Contract(format!(
                        "successor distribution of {x} under action {} does not sum to 1",
                        a.0
                    )));
                }
                p_row.push(p);
            }
            reward.push(r_row);
            successors.push(p_row);
        }
        Ok(ExplicitMdp { states, discount: mdp.discount().clone(), reward, successors })
    }

    pub fn num_states(&self) -> usize {
        self.states.len()
    }

    pub fn num_actions(&self) -> usize {
        self.reward.first().map_or(0, Vec::len)
    }

    /// `R^a(s) + γ Σ_{s'} P^a(s, s') v(s')`.
    pub fn q(&self, v: &[Rational], s: usize, a: ActionId) -> Rational {
        let future: Rational =
            self.successors[s][a.0].iter().zip(v).filter(|(p, _)| !p.is_zero()).map(|(p, v)| p * v).sum();
        &self.reward[s][a.0] + &self.discount * future
    }

    /// Greedy action for every state, lowest index among ties.
    pub fn greedy(&self, v: &[Rational]) -> Vec<ActionId> {
        (0..self.num_states())
            .map(|s| {
                let mut best = ActionId(0);
                let mut best_q = self.q(v, s, best);
                for a in 1..self.num_actions() {
                    let q = self.q(v, s, ActionId(a));
                    if q > best_q {
                        best = ActionId(a);
                        best_q = q;
                    }
                }
                best
            })
            .collect()
    }

    /// Solves `(I − γ P_π) v = R_π` for the deterministic policy `actions`.
    pub fn evaluate(&self, actions: &[ActionId]) -> Result<Vec<Rational>> {
        let k = self.num_states();
        let mut a: Vec<Vec<Rational>> = (0..k)
            .map(|s| {
                let mut row: Vec<Rational> =
                    self.successors[s][actions[s].0].iter().map(|p| -(&self.discount * p)).collect();
                row[s] += Rational::one();
                row
            })
            .collect();
        let mut b: Vec<Rational> = (0..k).map(|s| self.reward[s][actions[s].0].clone()).collect();
        solve_linear(&mut a, &mut b)?;
        Ok(b)
    }

    /// Index of a full state in [`ExplicitMdp::states`].
    pub fn index_of(&self, x: &PartialState) -> Option<usize> {
        self.states.binary_search(x).ok()
    }
}

/// Gauss-Jordan elimination in place; on success `b` holds the solution.
pub fn solve_linear(a: &mut [Vec<Rational>], b: &mut [Rational]) -> Result<()> {
    let k = b.len();
    for col in 0..k {
        let pivot =
            (col..k).find(|&r| !a[r][col].is_zero()).ok_or_else(|| Error::Contract("singular linear system".into()))?;
        a.swap(col, pivot);
        b.swap(col, pivot);
        let inv = a[col][col].recip();
        for v in a[col].iter_mut().skip(col) {
            *v *= &inv;
        }
        b[col] *= &inv;
        let (head, tail) = a.split_at_mut(col);
        let (pivot_row, rest) = tail.split_first_mut().expect("col < k");
        for (r, row) in head.iter_mut().chain(rest.iter_mut()).enumerate() {
            let r = if r < col { r } else { r + 1 };
            let factor = row[col].clone();
            if factor.is_zero() {
                continue;
            }
            for (v, p) in row.iter_mut().zip(pivot_row.iter()).skip(col) {
                *v -= &factor * p;
            }
            let delta = &factor * &b[col];
            b[r] -= delta;
        }
    }
    Ok(())
}

fn nu_table(mdp: &FactoredMdp, w: &Weights, states: &[PartialState]) -> Result<Vec<Rational>> {
    states.iter().map(|x| mdp.nu_w(w, x)).collect()
}

/// `R^a(x) + γ Σ_{x'} P^a(x, x') ν_w(x')` by summing over every successor state.
pub fn explicit_q(mdp: &FactoredMdp, w: &Weights, a: ActionId, x: &PartialState) -> Result<Rational> {
    let mut future = Rational::zero();
    for y in mdp.states() {
        let p = mdp.transition_prob(a, x, &y)?;
        if !p.is_zero() {
            future += p * mdp.nu_w(w, &y)?;
        }
    }
    Ok(mdp.reward(a, x)? + mdp.discount() * future)
}

/// `max_x |Q_w^{π(x)}(x) − ν_w(x)|`.
pub fn explicit_bellman_err(mdp: &FactoredMdp, w: &Weights, pol: &DecisionList) -> Result<Rational> {
    explicit_bellman_err_with(&ExplicitMdp::build(mdp, DEFAULT_STATE_LIMIT)?, mdp, w, pol)
}

pub fn explicit_bellman_err_with(
    ex: &ExplicitMdp,
    mdp: &FactoredMdp,
    w: &Weights,
    pol: &DecisionList,
) -> Result<Rational> {
    let nu = nu_table(mdp, w, &ex.states)?;
    let mut worst = Rational::zero();
    for (s, x) in ex.states.iter().enumerate() {
        let e = (ex.q(&nu, s, pol.select_action(x)?) - &nu[s]).abs();
        worst = worst.max(e);
    }
    Ok(worst)
}

/// The weight LP with one constraint pair per state:
/// `φ ≥ ±(Σ_i w_i (h_i(x) − γ g^a_i(x)) − R^a(x))` with `a = π(x)`.
pub fn explicit_weight_lp(mdp: &FactoredMdp, pol: &DecisionList) -> Result<Lp> {
    let ex = ExplicitMdp::build(mdp, DEFAULT_STATE_LIMIT)?;
    let m = mdp.h_dim();
    let basis: Vec<Vec<Rational>> =
        (0..m).map(|i| ex.states.iter().map(|x| mdp.basis(i).eval(x).expect("full state").clone()).collect()).collect();
    let mut constraints = Vec::with_capacity(2 * ex.num_states());
    for (s, x) in ex.states.iter().enumerate() {
        let a = pol.select_action(x)?;
        let coeffs: Vec<Rational> = basis
            .iter()
            .map(|h| {
                let g: Rational = ex.successors[s][a.0].iter().zip(h).map(|(p, v)| p * v).sum();
                &h[s] - &ex.discount * g
            })
            .collect();
        let r = &ex.reward[s][a.0];
        for sign in [int(1), int(-1)] {
            let terms = std::iter::once((LpVar::Phi, int(-1)))
                .chain(coeffs.iter().enumerate().map(|(i, c)| (LpVar::Weight(i), &sign * c)));
            constraints.push(Constraint::new(ConstraintKind::Le, terms, &sign * r));
        }
    }
    Ok(Lp { num_weights: m, constraints })
}

/// `ν_π` in [`enumerate_states`] order.
pub fn policy_value(mdp: &FactoredMdp, pol: &DecisionList) -> Result<Vec<Rational>> {
    let ex = ExplicitMdp::build(mdp, DEFAULT_STATE_LIMIT)?;
    let actions = ex.states.iter().map(|x| pol.select_action(x)).collect::<Result<Vec<_>>>()?;
    ex.evaluate(&actions)
}

#[derive(Debug, Clone, PartialEq)]
pub struct OptimalSolution {
    pub values: Vec<Rational>,
    pub actions: Vec<ActionId>,
    pub iterations: usize,
}

/// `ν*` by policy iteration from the default action everywhere.
pub fn optimal_value(mdp: &FactoredMdp) -> Result<OptimalSolution> {
    optimal_value_with(&ExplicitMdp::build(mdp, DEFAULT_STATE_LIMIT)?, mdp.default_action())
}

pub fn optimal_value_with(ex: &ExplicitMdp, start: ActionId) -> Result<OptimalSolution> {
    let mut actions = vec![start; ex.num_states()];
    let mut values = ex.evaluate(&actions)?;
    let mut iterations = 0;
    loop {
        iterations += 1;
        let next = ex.greedy(&values);
        // Keep the current action where it is still greedy-optimal so the loop cannot cycle.
        let next: Vec<ActionId> = next
            .into_iter()
            .enumerate()
            .map(|(s, a)| if ex.q(&values, s, actions[s]) == ex.q(&values, s, a) { actions[s] } else { a })
            .collect();
        if next == actions {
            return Ok(OptimalSolution { values, actions, iterations });
        }
        let next_values = ex.evaluate(&next)?;
        if next_values.iter().zip(&values).any(|(new, old)| new < old) {
            return Err(Error::Contract("policy iteration decreased a state value".into()));
        }
        actions = next;
        values = next_values;
    }
}
