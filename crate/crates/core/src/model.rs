//! Factored MDPs: per-variable transition functions, scoped rewards and a linear value
//! function basis.

use std::ops::Index;

use num_traits::{One, Zero};

use crate::error::{Error, Result, Violation};
use crate::num::Rational;
use crate::scoped::ScopedFn;
use crate::state::{assignments, PartialState, VarSet};

/// Index of an action in model order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ActionId(pub usize);

/// Distribution over the domain of one state variable, one probability per value.
pub type Distribution = Vec<Rational>;

#[derive(Debug, Clone, PartialEq)]
pub struct ActionDef {
    pub name: String,
    /// One transition function per state variable.
    pub transitions: Vec<ScopedFn<Distribution>>,
    pub rewards: Vec<ScopedFn<Rational>>,
    /// Variables on which this action may behave differently from the default.
    pub effects: VarSet,
}

/// Unvalidated model data, as read from a file or assembled by a generator.
#[derive(Debug, Clone, PartialEq)]
pub struct MdpDefinition {
    /// Value names of each variable's domain.
    pub domains: Vec<Vec<String>>,
    pub actions: Vec<ActionDef>,
    pub default_action: Option<usize>,
    pub discount: Rational,
    pub basis: Vec<ScopedFn<Rational>>,
}

impl MdpDefinition {
    pub fn n(&self) -> usize {
        self.domains.len()
    }

    pub fn domain_sizes(&self) -> Vec<usize> {
        self.domains.iter().map(Vec::len).collect()
    }

    /// Checks every structural assumption and reports each broken one by name.
    pub fn validate(&self) -> Vec<Violation> {
        let mut out = Vec::new();
        let n = self.n();
        let sizes = self.domain_sizes();
        if n == 0 {
            out.push(Violation::new("dims_pos", "the model has no state variables"));
        }
        for (i, d) in self.domains.iter().enumerate() {
            if d.is_empty() {
                out.push(Violation::new("doms_ne", format!("domain of variable {i} is empty")));
            }
        }
        if self.actions.is_empty() {
            out.push(Violation::new("actions_ne", "the action set is empty"));
        }
        for (k, a) in self.actions.iter().enumerate() {
            if self.actions[..k].iter().any(|b| b.name == a.name) {
                out.push(Violation::new("actions_distinct", format!("action name `{}` is repeated", a.name)));
            }
        }
        let default = match self.default_action {
            Some(d) if d < self.actions.len() => Some(d),
            Some(d) => {
                out.push(Violation::new("default_act", format!("default action index {d} is not an action")));
                None
            }
            None => {
                out.push(Violation::new("default_act", "no default action is designated"));
                None
            }
        };
        if self.discount < Rational::zero() {
            out.push(Violation::new("disc_nonneg", format!("discount {} is negative", self.discount)));
        }
        if self.discount >= Rational::one() {
            out.push(Violation::new("disc_lt_one", format!("discount {} is not below 1", self.discount)));
        }

        let check_shape = |out: &mut Vec<Violation>,
                           dims: &'static str,
                           scope: &'static str,
                           what: String,
                           radices: &[usize],
                           f_scope: &[usize]|
         -> bool {
            if let Some(&v) = f_scope.iter().find(|&&v| v >= n) {
                out.push(Violation::new(dims, format!("{what} mentions variable {v} outside 0..{n}")));
                return false;
            }
            let expected: Vec<usize> = f_scope.iter().map(|&v| sizes[v]).collect();
            if expected != radices {
                out.push(Violation::new(scope, format!("{what} table does not match the domains of its scope")));
                return false;
            }
            true
        };

        for a in &self.actions {
            if a.transitions.len() != n {
                out.push(Violation::new(
                    "transitions_scope",
                    format!("action `{}` has {} transition functions for {n} variables", a.name, a.transitions.len()),
                ));
            }
            for (i, p) in a.transitions.iter().enumerate().take(n) {
                let what = format!("transition of action `{}` for variable {i}", a.name);
                if !check_shape(
                    &mut out,
                    "transitions_scope_dims",
                    "transitions_scope",
                    what.clone(),
                    p.radices(),
                    p.scope(),
                ) {
                    continue;
                }
                for (row, dist) in p.table().iter().enumerate() {
                    if dist.len() != sizes[i] {
                        out.push(Violation::new(
                            "transitions_closed",
                            format!(
                                "{what}, row {row}: distribution has {} entries for a domain of {}",
                                dist.len(),
                                sizes[i]
                            ),
                        ));
                        continue;
                    }
                    let in_range = dist.iter().all(|q| *q >= Rational::zero() && *q <= Rational::one());
                    let total: Rational = dist.iter().sum();
                    if !in_range || !total.is_one() {
                        out.push(Violation::new(
                            "transitions_closed/normalization",
                            format!("{what}, row {row}: probabilities sum to {total}"),
                        ));
                    }
                }
            }
            for (j, r) in a.rewards.iter().enumerate() {
                let what = format!("reward {j} of action `{}`", a.name);
                check_shape(&mut out, "reward_scope_dims", "reward_scope", what, r.radices(), r.scope());
            }
            if let Some(&v) = a.effects.iter().find(|&&v| v >= n) {
                out.push(Violation::new(
                    "effects",
                    format!("effects of `{}` mention variable {v} outside 0..{n}", a.name),
                ));
            }
        }
        for (i, h) in self.basis.iter().enumerate() {
            check_shape(&mut out, "h_scope_dims", "h_scope", format!("basis function {i}"), h.radices(), h.scope());
        }

        if let Some(d) = default {
            let dact = &self.actions[d];
            if !dact.effects.is_empty() {
                out.push(Violation::new(
                    "effects_default",
                    format!("default action `{}` has effects {:?}", dact.name, dact.effects),
                ));
            }
            let rd = dact.rewards.len();
            for a in &self.actions {
                for i in 0..n.min(a.transitions.len()).min(dact.transitions.len()) {
                    if !a.effects.contains(&i) && a.transitions[i] != dact.transitions[i] {
                        out.push(Violation::new(
                            "effects",
                            format!("action `{}` differs from the default on variable {i} outside its effects", a.name),
                        ));
                    }
                }
                if a.rewards.len() < rd {
                    out.push(Violation::new(
                        "rewards_default_dim",
                        format!("action `{}` has {} rewards, fewer than the default's {rd}", a.name, a.rewards.len()),
                    ));
                }
                for (i, (ra, rdi)) in a.rewards.iter().zip(&dact.rewards).enumerate() {
                    if ra.scope() != rdi.scope() {
                        out.push(Violation::new(
                            "reward_scope_eq",
                            format!("reward {i} of `{}` has a different scope than the default's", a.name),
                        ));
                    } else if ra != rdi {
                        out.push(Violation::new(
                            "rewards_eq",
                            format!("reward {i} of `{}` differs from the default's", a.name),
                        ));
                    }
                }
            }
        }
        out
    }
}

/// Weights of the basis functions.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Weights(pub Vec<Rational>);

impl Weights {
    pub fn zeros(m: usize) -> Self {
        Weights(vec![Rational::zero(); m])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_slice(&self) -> &[Rational] {
        &self.0
    }
}

impl Index<usize> for Weights {
    type Output = Rational;
    fn index(&self, i: usize) -> &Rational {
        &self.0[i]
    }
}

/// A validated factored MDP with the basis expectations `g` precomputed.
#[derive(Debug, Clone)]
pub struct FactoredMdp {
    def: MdpDefinition,
    default: ActionId,
    sizes: Vec<usize>,
    /// `expectations[a][i]` is `g^a_i`.
    expectations: Vec<Vec<ScopedFn<Rational>>>,
}

impl FactoredMdp {
    pub fn new(def: MdpDefinition) -> Result<Self> {
        let violations = def.validate();
        if !violations.is_empty() {
            return Err(Error::Validation(violations));
        }
        let sizes = def.domain_sizes();
        let default = ActionId(def.default_action.expect("validated"));
        let expectations = def
            .actions
            .iter()
            .map(|a| def.basis.iter().map(|h| expectation(&sizes, &a.transitions, h)).collect())
            .collect();
        Ok(FactoredMdp { def, default, sizes, expectations })
    }

    pub fn definition(&self) -> &MdpDefinition {
        &self.def
    }

    pub fn into_definition(self) -> MdpDefinition {
        self.def
    }

    pub fn n(&self) -> usize {
        self.sizes.len()
    }

    pub fn domain_sizes(&self) -> &[usize] {
        &self.sizes
    }

    pub fn num_actions(&self) -> usize {
        self.def.actions.len()
    }

    pub fn actions(&self) -> impl Iterator<Item = ActionId> {
        (0..self.def.actions.len()).map(ActionId)
    }

    pub fn default_action(&self) -> ActionId {
        self.default
    }

    pub fn action(&self, a: ActionId) -> &ActionDef {
        &self.def.actions[a.0]
    }

    pub fn action_name(&self, a: ActionId) -> &str {
        &self.def.actions[a.0].name
    }

    pub fn action_by_name(&self, name: &str) -> Option<ActionId> {
        self.def.actions.iter().position(|a| a.name == name).map(ActionId)
    }

    pub fn discount(&self) -> &Rational {
        &self.def.discount
    }

    pub fn h_dim(&self) -> usize {
        self.def.basis.len()
    }

    pub fn basis(&self, i: usize) -> &ScopedFn<Rational> {
        &self.def.basis[i]
    }

    pub fn transition(&self, a: ActionId, i: usize) -> &ScopedFn<Distribution> {
        &self.def.actions[a.0].transitions[i]
    }

    pub fn rewards(&self, a: ActionId) -> &[ScopedFn<Rational>] {
        &self.def.actions[a.0].rewards
    }

    pub fn reward_dim(&self, a: ActionId) -> usize {
        self.def.actions[a.0].rewards.len()
    }

    pub fn effects(&self, a: ActionId) -> &VarSet {
        &self.def.actions[a.0].effects
    }

    fn check_action(&self, a: ActionId) -> Result<()> {
        if a.0 < self.num_actions() {
            Ok(())
        } else {
            Err(Error::InvalidInput(format!("unknown action index {}", a.0)))
        }
    }

    fn check_full(&self, x: &PartialState) -> Result<Vec<usize>> {
        let dense = x
            .to_dense(self.n())
            .filter(|_| x.len() == self.n())
            .ok_or_else(|| Error::InvalidInput(format!("{x} is not a full state")))?;
        if dense.iter().zip(&self.sizes).any(|(v, s)| v >= s) {
            return Err(Error::InvalidInput(format!("{x} assigns a value outside a domain")));
        }
        Ok(dense)
    }

    /// All full states, in mixed-radix order.
    pub fn states(&self) -> Vec<PartialState> {
        assignments(&self.sizes, &(0..self.n()).collect())
    }

    /// `P^a(x, x') = ∏_i P^a_i(x, x'_i)` for full states.
    pub fn transition_prob(&self, a: ActionId, x: &PartialState, next: &PartialState) -> Result<Rational> {
        self.check_action(a)?;
        let xs = self.check_full(x)?;
        let ys = self.check_full(next)?;
        Ok(self.def.actions[a.0]
            .transitions
            .iter()
            .enumerate()
            .map(|(i, p)| p.eval_dense(&xs)[ys[i]].clone())
            .product())
    }

    /// `R^a(x)`, the sum of the action's reward functions.
    pub fn reward(&self, a: ActionId, x: &PartialState) -> Result<Rational> {
        self.check_action(a)?;
        self.rewards(a)
            .iter()
            .map(|r| {
                r.eval(x)
                    .cloned()
                    .ok_or_else(|| Error::InvalidInput(format!("{x} does not cover reward scope {:?}", r.scope())))
            })
            .sum()
    }

    /// `g^a_i`, the expected value of `h_i` after taking `a`, with scope `Γ^a_i`.
    pub fn g(&self, i: usize, a: ActionId) -> &ScopedFn<Rational> {
        &self.expectations[a.0][i]
    }

    /// `Γ^a_I = ⋃_{j ∈ vars} scope(P^a_j)`.
    pub fn gamma(&self, a: ActionId, vars: impl IntoIterator<Item = usize>) -> VarSet {
        vars.into_iter().flat_map(|j| self.transition(a, j).scope().iter().copied()).collect()
    }

    /// `ν_w(x) = Σ_i w_i h_i(x)`.
    pub fn nu_w(&self, w: &Weights, x: &PartialState) -> Result<Rational> {
        self.check_weights(w)?;
        let xs = self.check_full(x)?;
        Ok(self.def.basis.iter().zip(&w.0).map(|(h, wi)| wi * h.eval_dense(&xs)).sum())
    }

    /// `Q^a_w(x) = R^a(x) + γ Σ_i w_i g^a_i(x)`.
    pub fn q_value(&self, w: &Weights, a: ActionId, x: &PartialState) -> Result<Rational> {
        self.check_action(a)?;
        self.check_weights(w)?;
        let xs = self.check_full(x)?;
        let r: Rational = self.rewards(a).iter().map(|r| r.eval_dense(&xs).clone()).sum();
        let future: Rational = (0..self.h_dim()).map(|i| &w.0[i] * self.g(i, a).eval_dense(&xs)).sum();
        Ok(r + self.discount() * future)
    }

    pub fn check_weights(&self, w: &Weights) -> Result<()> {
        if w.len() == self.h_dim() {
            Ok(())
        } else {
            Err(Error::InvalidInput(format!("{} weights for {} basis functions", w.len(), self.h_dim())))
        }
    }
}

/// Tabulates `x ↦ Σ_{x' over scope(h)} ∏_{j ∈ scope(h)} P_j(x, x'_j) · h(x')` over
/// `⋃_{j ∈ scope(h)} scope(P_j)`.
fn expectation(sizes: &[usize], transitions: &[ScopedFn<Distribution>], h: &ScopedFn<Rational>) -> ScopedFn<Rational> {
    let gamma: VarSet = h.scope().iter().flat_map(|&j| transitions[j].scope().iter().copied()).collect();
    let successors = assignments(sizes, &h.scope_set());
    ScopedFn::from_fn(sizes, &gamma, |x| {
        let rows: Vec<&Distribution> =
            h.scope().iter().map(|&j| transitions[j].eval(x).expect("gamma covers transition scope")).collect();
        successors
            .iter()
            .map(|next| {
                let p: Rational =
                    h.scope().iter().zip(&rows).map(|(&j, row)| row[next.get(j).unwrap()].clone()).product();
                if p.is_zero() {
                    p
                } else {
                    p * h.eval(next).unwrap()
                }
            })
            .sum()
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::num::{int, ratio};
    use crate::ring::{make_ring, ring_definition, B, W};

    fn st(v: &[usize]) -> PartialState {
        PartialState::full(v)
    }

    #[test]
    fn transition_prob_ring2() {
        let m = make_ring(2).unwrap();
        let d = m.default_action();
        assert_eq!(m.transition_prob(d, &st(&[W, W]), &st(&[W, W])).unwrap(), ratio(81, 100));
        let restart1 = m.action_by_name("restart_1").unwrap();
        for x in m.states() {
            let next = st(&[W, B]);
            assert_eq!(m.transition_prob(restart1, &x, &next).unwrap(), int(0));
        }
        assert!(m.transition_prob(d, &PartialState::empty().with(0, W), &st(&[W, W])).is_err());
        assert!(m.transition_prob(ActionId(17), &st(&[W, W]), &st(&[W, W])).is_err());
    }

    #[test]
    fn transitions_normalize_exactly() {
        for n in 1..=3 {
            let m = make_ring(n).unwrap();
            let states = m.states();
            for a in m.actions() {
                for x in &states {
                    let total: Rational = states.iter().map(|y| m.transition_prob(a, x, y).unwrap()).sum();
                    assert_eq!(total, int(1));
                }
            }
        }
    }

    #[test]
    fn reward_examples() {
        let m = make_ring(2).unwrap();
        let d = m.default_action();
        assert_eq!(m.reward(d, &st(&[W, W])).unwrap(), int(2));
        assert_eq!(m.reward(d, &st(&[B, B])).unwrap(), int(0));
        assert_eq!(m.reward(d, &st(&[W, B])).unwrap(), int(1));
        assert!(m.reward(d, &PartialState::empty().with(0, W)).is_err());
    }

    #[test]
    fn g_examples() {
        let m = make_ring(2).unwrap();
        let d = m.default_action();
        let g0 = m.g(0, d);
        assert!(g0.scope().is_empty());
        assert_eq!(g0.table(), &[int(1)]);
        // h_2 tracks machine 1, whose predecessor is machine 0
        let g2 = m.g(2, d);
        assert_eq!(g2.scope(), &[0, 1]);
        assert_eq!(g2.eval(&st(&[W, W])).unwrap(), &ratio(9, 10));
        let r1 = m.action_by_name("restart_1").unwrap();
        assert!(m.g(2, r1).table().iter().all(|v| *v == int(1)));
    }

    #[test]
    fn g_matches_full_enumeration() {
        for n in 1..=3 {
            let m = make_ring(n).unwrap();
            let states = m.states();
            for a in m.actions() {
                for i in 0..m.h_dim() {
                    let g = m.g(i, a);
                    let expected_scope = m.gamma(a, m.basis(i).scope().iter().copied());
                    assert_eq!(g.scope_set(), expected_scope);
                    for x in &states {
                        let brute: Rational = states
                            .iter()
                            .map(|y| m.transition_prob(a, x, y).unwrap() * m.basis(i).eval(y).unwrap())
                            .sum();
                        assert_eq!(g.eval(x).unwrap(), &brute);
                    }
                }
            }
        }
    }

    #[test]
    fn nu_and_q_examples() {
        let m = make_ring(2).unwrap();
        let d = m.default_action();
        let w = Weights(vec![int(0), int(1), int(1)]);
        assert_eq!(m.nu_w(&w, &st(&[W, B])).unwrap(), int(1));
        assert_eq!(m.nu_w(&Weights::zeros(3), &st(&[W, W])).unwrap(), int(0));
        assert_eq!(m.nu_w(&Weights(vec![int(1), int(0), int(0)]), &st(&[B, B])).unwrap(), int(1));
        assert_eq!(m.q_value(&w, d, &st(&[W, W])).unwrap(), ratio(181, 50));
        for x in m.states() {
            for a in m.actions() {
                assert_eq!(m.q_value(&Weights::zeros(3), a, &x).unwrap(), m.reward(a, &x).unwrap());
            }
        }
        let mut def = ring_definition(2).unwrap();
        def.discount = int(0);
        let myopic = FactoredMdp::new(def).unwrap();
        for x in myopic.states() {
            assert_eq!(myopic.q_value(&w, d, &x).unwrap(), myopic.reward(d, &x).unwrap());
        }
    }
}
