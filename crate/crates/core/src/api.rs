//! Approximate policy iteration.
//!
//! Starting from `w⁰ = 0` and its greedy policy, each iteration fits weights to the current
//! policy, takes the greedy policy of the new weights, and measures its Bellman error. The
//! loop stops when the weights repeat exactly, the error drops to `ε`, or the iteration
//! budget runs out.

use std::time::{Duration, Instant};

use num_traits::{One, Signed, Zero};

use crate::bellman::factored_bellman_err;
use crate::elim::ElimOrder;
use crate::error::{Error, Result};
use crate::lp::{update_weights_with, LpBackend};
use crate::model::{FactoredMdp, Weights};
use crate::num::{int, Rational};
use crate::oracle::{optimal_value_with, ExplicitMdp};
use crate::policy::{greedy_decision_list, DecisionList};

#[derive(Debug, Clone, PartialEq)]
pub struct ApiConfig {
    pub epsilon: Rational,
    pub t_max: usize,
    pub order: ElimOrder,
    pub backend: LpBackend,
}

impl Default for ApiConfig {
    fn default() -> Self {
        ApiConfig { epsilon: Rational::zero(), t_max: 30, order: ElimOrder::Identity, backend: LpBackend::default() }
    }
}

impl ApiConfig {
    pub fn validate(&self) -> Result<()> {
        if self.t_max == 0 {
            return Err(Error::InvalidInput("t_max must be at least 1".into()));
        }
        if self.epsilon.is_negative() {
            return Err(Error::InvalidInput("epsilon must be nonnegative".into()));
        }
        Ok(())
    }
}

/// One pass of the loop.
#[derive(Debug, Clone, PartialEq)]
pub struct IterationRecord {
    pub t: usize,
    /// Optimum of the weight LP, the projection error of the policy being evaluated.
    pub phi: Rational,
    /// Bellman error of the new weights under their greedy policy.
    pub err: Rational,
    pub constraints: usize,
    pub variables: usize,
    pub branches: usize,
    pub lp_time: Duration,
    pub total_time: Duration,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ApiResult {
    /// Iteration counter before the final increment; `t + 1` iterations ran.
    pub t: usize,
    pub pol: DecisionList,
    pub w: Weights,
    pub err: Rational,
    pub w_eq: bool,
    pub err_le: bool,
    pub timeout: bool,
    pub phi_history: Vec<Rational>,
    pub iterations: Vec<IterationRecord>,
}

impl ApiResult {
    /// The weights repeated, or they fit exactly so that `ν_w` is the optimal value.
    pub fn converged(&self) -> bool {
        self.w_eq || self.err.is_zero()
    }

    /// Everything except timings, for comparing runs.
    pub fn same_outcome(&self, other: &ApiResult) -> bool {
        let strip = |r: &ApiResult| {
            (
                r.t,
                r.pol.clone(),
                r.w.clone(),
                r.err.clone(),
                (r.w_eq, r.err_le, r.timeout),
                r.phi_history.clone(),
                r.iterations
                    .iter()
                    .map(|i| (i.err.clone(), i.constraints, i.variables, i.branches))
                    .collect::<Vec<_>>(),
            )
        };
        strip(self) == strip(other)
    }
}

pub fn api(mdp: &FactoredMdp, config: &ApiConfig) -> Result<ApiResult> {
    config.validate()?;
    let mut w = Weights::zeros(mdp.h_dim());
    let mut pol = greedy_decision_list(mdp, &w)?;
    let mut t = 0;
    let mut phi_history = Vec::new();
    let mut iterations = Vec::new();
    loop {
        let start = Instant::now();
        let update = update_weights_with(mdp, &pol, &config.order, config.backend)?;
        let lp_time = start.elapsed();
        let new_pol = greedy_decision_list(mdp, &update.weights)?;
        let err = factored_bellman_err(mdp, &update.weights, &new_pol, &config.order)?;
        phi_history.push(update.phi.clone());
        iterations.push(IterationRecord {
            t,
            phi: update.phi,
            err: err.clone(),
            constraints: update.constraints,
            variables: update.variables,
            branches: new_pol.len(),
            lp_time,
            total_time: start.elapsed(),
        });
        let w_eq = update.weights == w;
        let err_le = err <= config.epsilon;
        let timeout = t + 1 >= config.t_max;
        if w_eq || err_le || timeout {
            return Ok(ApiResult {
                t,
                pol: new_pol,
                w: update.weights,
                err,
                w_eq,
                err_le,
                timeout,
                phi_history,
                iterations,
            });
        }
        w = update.weights;
        pol = new_pol;
        t += 1;
    }
}

/// The a-posteriori check for a converged run, against the exact optimal values.
#[derive(Debug, Clone, PartialEq)]
pub struct PosteriorBound {
    /// `(1 − γ)·‖ν* − ν_w‖_∞`.
    pub lhs: Rational,
    /// `2γ·err`.
    pub rhs: Rational,
    pub holds: bool,
    /// `(1 − γ)·‖ν* − ν_π‖_∞` for the returned policy `π`.
    pub policy_lhs: Rational,
    pub policy_holds: bool,
}

/// Applies to runs whose weights converged, and to runs stopped at zero error, where `ν_w`
/// is already the fixed point.
pub fn posterior_bound(mdp: &FactoredMdp, result: &ApiResult, state_limit: usize) -> Result<PosteriorBound> {
    if !result.converged() {
        return Err(Error::Contract("the bound needs a run whose weights converged".into()));
    }
    let ex = ExplicitMdp::build(mdp, state_limit)?;
    let opt = optimal_value_with(&ex, mdp.default_action())?;
    let gamma = mdp.discount();
    let scale = Rational::one() - gamma;
    let mut value_gap = Rational::zero();
    let mut actions = Vec::with_capacity(ex.num_states());
    for (x, star) in ex.states.iter().zip(&opt.values) {
        value_gap = value_gap.max((star - mdp.nu_w(&result.w, x)?).abs());
        actions.push(result.pol.select_action(x)?);
    }
    let nu_pol = ex.evaluate(&actions)?;
    let policy_gap = opt.values.iter().zip(&nu_pol).map(|(a, b)| (a - b).abs()).max().unwrap_or_default();
    let lhs = &scale * value_gap;
    let rhs = int(2) * gamma * &result.err;
    let policy_lhs = scale * policy_gap;
    Ok(PosteriorBound { holds: lhs <= rhs, policy_holds: policy_lhs <= rhs, lhs, rhs, policy_lhs })
}
