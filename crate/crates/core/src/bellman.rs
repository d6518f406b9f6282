//! Factored Bellman error of a decision-list policy.
//!
//! The states handled by branch `k` are those consistent with `t_k` and with none of the
//! earlier branches. Earlier branches are masked out by indicator functions that are `−∞`
//! on their states, so each branch error is one pair of variable eliminations.

use crate::elim::{max_sum, ElimOrder};
use crate::error::{Error, Result};
use crate::model::{ActionId, FactoredMdp, Weights};
use crate::num::{int, ExtReal, Rational};
use crate::policy::DecisionList;
use crate::scoped::ScopedFn;
use crate::state::PartialState;

/// `𝕀_{t'}` instantiated by `t` for every `t'` in `ts`: `−∞` on states consistent with `t'`.
pub fn indicator_fns(domain_sizes: &[usize], ts: &[PartialState], t: &PartialState) -> Vec<ScopedFn<ExtReal>> {
    ts.iter()
        .map(|tp| {
            ScopedFn::from_fn(domain_sizes, &tp.domain(), |x| {
                if x.consistent_with(tp) {
                    ExtReal::NegInf
                } else {
                    ExtReal::zero()
                }
            })
            .instantiate(t)
        })
        .collect()
}

/// `h_i − γ g^a_i` for every basis function, so that `ν_w − Q^a_w = Σ_i w_i C_i − R^a`.
pub fn basis_residuals(mdp: &FactoredMdp, a: ActionId) -> Vec<ScopedFn<Rational>> {
    let gamma = mdp.discount();
    (0..mdp.h_dim()).map(|i| mdp.basis(i).combine(mdp.g(i, a), mdp.domain_sizes(), |h, g| h - gamma * g)).collect()
}

fn finite(f: &ScopedFn<Rational>, scale: &Rational) -> ScopedFn<ExtReal> {
    f.map(|v| ExtReal::Finite(v * scale))
}

/// `sup |Q^a_w(x) − ν_w(x)|` over full states consistent with `t` and with no state of
/// `ts`; `−∞` when there is no such state.
pub fn branch_error(
    mdp: &FactoredMdp,
    w: &Weights,
    t: &PartialState,
    a: ActionId,
    ts: &[PartialState],
    order: &ElimOrder,
) -> Result<ExtReal> {
    mdp.check_weights(w)?;
    let sizes = mdp.domain_sizes();
    let c: Vec<ScopedFn<Rational>> = basis_residuals(mdp, a).iter().map(|f| f.instantiate(t)).collect();
    let b: Vec<ScopedFn<Rational>> = mdp.rewards(a).iter().map(|r| r.instantiate(t)).collect();
    let masks = indicator_fns(sizes, ts, t);
    let side = |sign: &Rational| -> Result<ExtReal> {
        let neg = -sign;
        let fs: Vec<ScopedFn<ExtReal>> = c
            .iter()
            .zip(&w.0)
            .map(|(ci, wi)| finite(ci, &(wi * sign)))
            .chain(b.iter().map(|bj| finite(bj, &neg)))
            .chain(masks.iter().cloned())
            .collect();
        max_sum(sizes, &fs, order)
    };
    let one = int(1);
    Ok(side(&one)?.max(side(&-one)?))
}

/// Per-branch errors of `pol`, each branch masked by all earlier ones.
pub fn branch_errors(mdp: &FactoredMdp, w: &Weights, pol: &DecisionList, order: &ElimOrder) -> Result<Vec<ExtReal>> {
    let mut ts = Vec::with_capacity(pol.len());
    let mut out = Vec::with_capacity(pol.len());
    for br in &pol.branches {
        out.push(branch_error(mdp, w, &br.t, br.action, &ts, order)?);
        ts.push(br.t.clone());
    }
    Ok(out)
}

/// `max_x |Q^{π(x)}_w(x) − ν_w(x)|` for the decision-list policy `π`.
pub fn factored_bellman_err(mdp: &FactoredMdp, w: &Weights, pol: &DecisionList, order: &ElimOrder) -> Result<Rational> {
    branch_errors(mdp, w, pol, order)?
        .into_iter()
        .max()
        .and_then(ExtReal::into_finite)
        .ok_or_else(|| Error::Contract("every branch of the decision list has an empty state set".into()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::{make_ring, B, W};

    #[test]
    fn indicator_cases() {
        let sizes = [2, 2, 2];
        assert!(indicator_fns(&sizes, &[], &PartialState::empty()).is_empty());
        let t = PartialState::empty().with(0, B).with(1, W);
        let sub = PartialState::empty().with(0, B);
        let conflict = PartialState::empty().with(0, W).with(2, B);
        let fs = indicator_fns(&sizes, &[sub, conflict], &t);
        assert_eq!(fs[0], ScopedFn::constant(ExtReal::NegInf));
        assert_eq!(fs[1].scope(), &[2]);
        assert!(fs[1].table().iter().all(|v| *v == ExtReal::zero()));
    }

    #[test]
    fn zero_weights_default_policy() {
        let m = make_ring(2).unwrap();
        let w = Weights::zeros(3);
        let e = branch_error(&m, &w, &PartialState::empty(), ActionId(0), &[], &ElimOrder::Identity).unwrap();
        assert_eq!(e, ExtReal::Finite(int(2)));
        let pol = DecisionList::default_only(&m);
        assert_eq!(factored_bellman_err(&m, &w, &pol, &ElimOrder::Identity).unwrap(), int(2));
    }

    #[test]
    fn shadowed_branch_is_neg_inf() {
        let m = make_ring(2).unwrap();
        let w = Weights::zeros(3);
        let t = PartialState::empty().with(0, B);
        let e = branch_error(&m, &w, &t, ActionId(0), &[PartialState::empty()], &ElimOrder::Identity).unwrap();
        assert_eq!(e, ExtReal::NegInf);
    }
}
