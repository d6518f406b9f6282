//! Value determination: the weights minimizing the worst per-state error of a policy.
//!
//! The weight LP has one block of rows per branch half, linked only through `φ` and the
//! weights. [`LpBackend::Structured`] solves the small LP over `(φ, w)` with one row per
//! state that is added lazily: variable elimination finds the most violated state of every
//! half until none is violated. The optimal multipliers of that small LP are then spread
//! along the factored rows that derive each state's bound, and the resulting primal/dual
//! pair is verified against the full weight LP. [`LpBackend::Simplex`], the default, hands
//! the full LP to the general simplex.

use std::collections::HashMap;

use num_traits::{One, Signed, Zero};

use super::factored::{branch_halves, weight_lp, Emitter};
use super::{check_optimality, solve_lp, to_standard_form, Certificate, ConstraintKind, Lp, LpVar, StdLp};
use crate::elim::{argmax_sum, ElimOrder};
use crate::error::{Error, Result};
use crate::model::{FactoredMdp, Weights};
use crate::num::{int, ExtReal, Rational};
use crate::policy::DecisionList;
use crate::scoped::ScopedFn;
use crate::state::Odometer;

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub enum LpBackend {
    #[default]
    Simplex,
    Structured,
}

#[derive(Debug, Clone, PartialEq)]
pub struct WeightUpdate {
    pub weights: Weights,
    pub phi: Rational,
    /// Size of the weight LP before splitting equalities.
    pub constraints: usize,
    pub variables: usize,
    /// The verified certificate, over `to_standard_form(weight_lp)`.
    pub primal: Vec<Rational>,
    pub dual: Vec<Rational>,
}

/// Solves the weight LP of `pol` and verifies its optimality certificate.
pub fn update_weights(mdp: &FactoredMdp, pol: &DecisionList, order: &ElimOrder) -> Result<WeightUpdate> {
    update_weights_with(mdp, pol, order, LpBackend::default())
}

pub fn update_weights_with(
    mdp: &FactoredMdp,
    pol: &DecisionList,
    order: &ElimOrder,
    backend: LpBackend,
) -> Result<WeightUpdate> {
    let lp = weight_lp(mdp, pol, order)?;
    let vars = lp.variables();
    let std = to_standard_form(&lp);
    let (primal, dual) = match backend {
        LpBackend::Simplex => match solve_lp(&std)? {
            Certificate::Optimal { primal, dual } => (primal, dual),
            other => return Err(Error::Lp(format!("the weight LP came back {}", other.kind()))),
        },
        LpBackend::Structured => structured(mdp, pol, order, &lp, &vars, &std)?,
    };
    if !check_optimality(&std, &primal, &dual)? {
        return Err(Error::Lp("the optimality certificate of the weight LP was rejected".into()));
    }
    let index = |v: &LpVar| vars.binary_search(v).expect("weights and phi are always variables");
    Ok(WeightUpdate {
        weights: Weights((0..mdp.h_dim()).map(|i| primal[index(&LpVar::Weight(i))].clone()).collect()),
        phi: primal[index(&LpVar::Phi)].clone(),
        constraints: lp.num_constraints(),
        variables: vars.len(),
        primal,
        dual,
    })
}

struct Cut {
    half: usize,
    state: Vec<usize>,
}

/// Small LP over `(φ, w)`: box rows `±w_i ≤ M`, `−φ ≤ M`, then one row per cut.
fn cut_lp(m: usize, bound: &Rational, halves: &[Emitter], cuts: &[Cut]) -> StdLp {
    let mut a: Vec<Vec<Rational>> = Vec::new();
    let mut b = Vec::new();
    for i in 0..m {
        for sign in [1, -1] {
            let mut row = vec![Rational::zero(); m + 1];
            row[1 + i] = int(sign);
            a.push(row);
            b.push(bound.clone());
        }
    }
    let mut row = vec![Rational::zero(); m + 1];
    row[0] = int(-1);
    a.push(row);
    b.push(bound.clone());
    for cut in cuts {
        let e = &halves[cut.half];
        let mut row = vec![int(-1)];
        row.extend(e.c.iter().map(|f| f.eval_dense(&cut.state).clone()));
        a.push(row);
        let rhs: Rational =
            e.b.iter().map(|f| f.eval_dense(&cut.state).finite().expect("cut states are unmasked").clone()).sum();
        b.push(-rhs);
    }
    let mut c = vec![Rational::zero(); m + 1];
    c[0] = Rational::one();
    StdLp::from_dense(&a, b, c)
}

fn structured(
    mdp: &FactoredMdp,
    pol: &DecisionList,
    order: &ElimOrder,
    lp: &Lp,
    vars: &[LpVar],
    std: &StdLp,
) -> Result<(Vec<Rational>, Vec<Rational>)> {
    let m = mdp.h_dim();
    let sizes = mdp.domain_sizes();
    let mut inputs = Vec::new();
    let mut ts = Vec::new();
    for br in &pol.branches {
        inputs.extend(branch_halves(mdp, &br.t, br.action, &ts));
        ts.push(br.t.clone());
    }
    let halves: Vec<Emitter> =
        inputs.iter().map(|(tag, c, b)| Emitter::new(mdp, tag.clone(), c, b, order)).collect::<Result<_>>()?;

    let mut bound = Rational::from_integer(1_000_000.into());
    let mut cuts: Vec<Cut> = Vec::new();
    let box_rows = 2 * m + 1;
    let (phi, w, multipliers) = loop {
        let small = cut_lp(m, &bound, &halves, &cuts);
        let Certificate::Optimal { primal, dual } = solve_lp(&small)? else {
            return Err(Error::Lp("the restricted weight LP is not optimal".into()));
        };
        let phi = primal[0].clone();
        let w: Vec<Rational> = primal[1..].to_vec();
        let mut added = false;
        for (h, e) in halves.iter().enumerate() {
            let fs: Vec<ScopedFn<ExtReal>> =
                e.c.iter()
                    .zip(&w)
                    .map(|(f, wi)| f.map(|v| ExtReal::Finite(v * wi)))
                    .chain(e.b.iter().cloned())
                    .collect();
            let (value, state) = argmax_sum(sizes, &fs, order)?;
            if let (Some(v), Some(state)) = (value.finite(), state) {
                if *v > phi {
                    cuts.push(Cut { half: h, state });
                    added = true;
                }
            }
        }
        if added {
            continue;
        }
        if dual[..box_rows].iter().all(Zero::is_zero) {
            break (phi, w, dual[box_rows..].to_vec());
        }
        bound *= Rational::from_integer(1_000_000.into());
        if bound.numer().bits() > 400 {
            return Err(Error::Lp("the weight LP needs weights beyond any tried bound".into()));
        }
    };

    let index = |v: &LpVar| vars.binary_search(v).ok();
    let mut primal = vec![Rational::zero(); vars.len()];
    primal[index(&LpVar::Phi).unwrap()] = phi.clone();
    for (i, wi) in w.iter().enumerate() {
        primal[index(&LpVar::Weight(i)).unwrap()] = wi.clone();
    }
    for e in &halves {
        lift_primal(e, &w, &phi, sizes, &mut |v, value| {
            if let Some(j) = index(&v) {
                primal[j] = value;
            }
        });
    }

    let mut row_start = Vec::with_capacity(lp.constraints.len());
    let mut next = 0;
    for c in &lp.constraints {
        row_start.push(next);
        next += if c.kind == ConstraintKind::Eq { 2 } else { 1 };
    }
    let position: HashMap<&super::Constraint, usize> = lp.constraints.iter().enumerate().map(|(k, c)| (c, k)).collect();
    let mut dual = vec![Rational::zero(); std.num_rows()];
    for (cut, y) in cuts.iter().zip(&multipliers) {
        if y.is_zero() {
            continue;
        }
        for (con, negated) in halves[cut.half].chain(&cut.state) {
            let k = *position
                .get(&con)
                .ok_or_else(|| Error::Lp("a derivation row is missing from the weight LP".into()))?;
            dual[row_start[k] + usize::from(negated)] += y;
        }
    }
    Ok((primal, dual))
}

/// Mixed-radix strides of a scope, lowest variable most significant.
fn strides(scope: &[usize], sizes: &[usize]) -> Vec<usize> {
    let mut out = vec![1; scope.len()];
    for k in (0..scope.len().saturating_sub(1)).rev() {
        out[k] = out[k + 1] * sizes[scope[k + 1]];
    }
    out
}

/// Assigns every function variable of one half its tightest value: inputs from the
/// weights, eliminated functions as the maximum over the eliminated variable. Entries that
/// are `−∞` become a finite value low enough to stay below `φ`.
fn lift_primal(e: &Emitter, w: &[Rational], phi: &Rational, sizes: &[usize], set: &mut dyn FnMut(LpVar, Rational)) {
    let plan = &e.plan;
    let mut tables: Vec<Vec<Rational>> = Vec::with_capacity(plan.fns.len());
    let mut spread = Rational::zero();
    for (f, wi) in e.c.iter().zip(w) {
        let t: Vec<Rational> = f.table().iter().map(|v| v * wi).collect();
        spread += t.iter().map(Signed::abs).max().unwrap_or_default();
        tables.push(t);
    }
    for f in e.b {
        spread += f.table().iter().filter_map(ExtReal::finite).map(Signed::abs).max().unwrap_or_default();
    }
    let low = -(spread + phi.abs() + Rational::one());
    for f in e.b {
        tables.push(f.table().iter().map(|v| v.finite().cloned().unwrap_or_else(|| low.clone())).collect());
    }
    for step in &plan.steps {
        let out_scope = &plan.fns[step.output].scope;
        let strides: Vec<(Vec<usize>, usize)> = step
            .inputs
            .iter()
            .map(|&f| {
                let s = strides(&plan.fns[f].scope, sizes);
                let pos = |v: usize| plan.fns[f].scope.iter().position(|&u| u == v).map_or(0, |p| s[p]);
                (out_scope.iter().map(|&v| pos(v)).collect(), pos(step.var))
            })
            .collect();
        let mut table = Vec::new();
        let mut odo = Odometer::new(out_scope.iter().map(|&v| sizes[v]).collect());
        while !odo.is_done() {
            let d = odo.digits();
            let best = (0..sizes[step.var])
                .map(|y| {
                    step.inputs
                        .iter()
                        .zip(&strides)
                        .map(|(&f, (s, sv))| &tables[f][d.iter().zip(s).map(|(a, b)| a * b).sum::<usize>() + y * sv])
                        .sum::<Rational>()
                })
                .max()
                .expect("domains are nonempty");
            table.push(best);
            odo.advance();
        }
        tables.push(table);
    }
    for (f, table) in tables.into_iter().enumerate() {
        let scope = &plan.fns[f].scope;
        let mut odo = Odometer::new(scope.iter().map(|&v| sizes[v]).collect());
        for value in table {
            let z = scope.iter().copied().zip(odo.digits().iter().copied()).collect();
            set(e.var(f, z), value);
            odo.advance();
        }
    }
}
