//! Factored LP construction.
//!
//! `min_lp` encodes `φ ≥ max_x Σ_i w_i C_i(x) + Σ_j b_j(x)` without enumerating states: one
//! variable per table entry of every function, equalities tying the input functions to the
//! weights, and for each eliminated variable a new function bounded below by the sum of the
//! functions it replaces. Entries of `b` equal to `−∞` get no defining equality, which leaves
//! their variable free and switches the corresponding states off.

use std::collections::BTreeSet;
use std::sync::Arc;

use super::{Constraint, ConstraintKind, FnId, Lp, LpVar, Tag};
use crate::bellman::{basis_residuals, indicator_fns};
use crate::elim::ElimOrder;
use crate::error::{Error, Result};
use crate::model::{ActionId, FactoredMdp};
use crate::num::{int, ExtReal, Rational};
use crate::policy::DecisionList;
use crate::scoped::ScopedFn;
use crate::state::{Odometer, PartialState};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PlanFn {
    pub id: FnId,
    pub scope: Vec<usize>,
}

/// Elimination of `var`: `output ≥ Σ inputs` at every extension.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PlanStep {
    pub var: usize,
    pub inputs: Vec<usize>,
    pub output: usize,
}

/// The function scopes produced by running variable elimination symbolically.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Plan {
    pub fns: Vec<PlanFn>,
    pub steps: Vec<PlanStep>,
    /// Functions left once every variable is eliminated; all have empty scope.
    pub finals: Vec<usize>,
}

impl Plan {
    pub fn new(c_scopes: &[&[usize]], b_scopes: &[&[usize]], perm: &[usize]) -> Self {
        let mut fns: Vec<PlanFn> = c_scopes
            .iter()
            .enumerate()
            .map(|(i, s)| PlanFn { id: FnId::C(i), scope: s.to_vec() })
            .chain(b_scopes.iter().enumerate().map(|(j, s)| PlanFn { id: FnId::B(j), scope: s.to_vec() }))
            .collect();
        let mut worklist: Vec<usize> = (0..fns.len()).collect();
        let mut steps = Vec::with_capacity(perm.len());
        for &var in perm {
            let (inputs, rest): (Vec<usize>, Vec<usize>) =
                worklist.into_iter().partition(|&f| fns[f].scope.contains(&var));
            let scope: BTreeSet<usize> =
                inputs.iter().flat_map(|&f| fns[f].scope.iter().copied()).filter(|&v| v != var).collect();
            let output = fns.len();
            fns.push(PlanFn { id: FnId::E(var), scope: scope.into_iter().collect() });
            steps.push(PlanStep { var, inputs, output });
            worklist = std::iter::once(output).chain(rest).collect();
        }
        Plan { fns, steps, finals: worklist }
    }
}

/// Everything needed to emit the rows of one generator invocation.
pub(crate) struct Emitter<'a> {
    pub tag: Arc<Tag>,
    pub plan: Plan,
    pub c: &'a [ScopedFn<Rational>],
    pub b: &'a [ScopedFn<ExtReal>],
    pub sizes: &'a [usize],
}

fn sub_state(x: &[Option<usize>], scope: &[usize]) -> PartialState {
    scope.iter().map(|&v| (v, x[v].expect("assignment covers scope"))).collect()
}

impl Emitter<'_> {
    pub fn new<'a>(
        mdp: &'a FactoredMdp,
        tag: Tag,
        c: &'a [ScopedFn<Rational>],
        b: &'a [ScopedFn<ExtReal>],
        order: &ElimOrder,
    ) -> Result<Emitter<'a>> {
        if c.len() != mdp.h_dim() {
            return Err(Error::InvalidInput(format!("{} C functions for {} basis functions", c.len(), mdp.h_dim())));
        }
        let c_scopes: Vec<&[usize]> = c.iter().map(|f| f.scope()).collect();
        let b_scopes: Vec<&[usize]> = b.iter().map(|f| f.scope()).collect();
        let all: Vec<&[usize]> = c_scopes.iter().chain(&b_scopes).copied().collect();
        if all.iter().flat_map(|s| s.iter()).any(|&v| v >= mdp.n()) {
            return Err(Error::InvalidInput("a function scope lies outside the state variables".into()));
        }
        let perm = order.resolve(mdp.n(), &all)?;
        Ok(Emitter {
            tag: Arc::new(tag),
            plan: Plan::new(&c_scopes, &b_scopes, &perm),
            c,
            b,
            sizes: mdp.domain_sizes(),
        })
    }

    pub fn var(&self, f: usize, z: PartialState) -> LpVar {
        LpVar::Fn { tag: self.tag.clone(), id: self.plan.fns[f].id, z }
    }

    /// `−F(c_i, z) + C_i(z)·w_i = 0`.
    pub fn c_def(&self, i: usize, x: &[Option<usize>]) -> Constraint {
        let z = sub_state(x, self.c[i].scope());
        let value = self.c[i].eval(&z).unwrap().clone();
        Constraint::new(ConstraintKind::Eq, [(self.var(i, z), int(-1)), (LpVar::Weight(i), value)], int(0))
    }

    /// `F(b_j, z) = b_j(z)`, or nothing when `b_j(z) = −∞`.
    pub fn b_def(&self, j: usize, x: &[Option<usize>]) -> Option<Constraint> {
        let z = sub_state(x, self.b[j].scope());
        let value = self.b[j].eval(&z).unwrap().finite()?.clone();
        Some(Constraint::new(ConstraintKind::Eq, [(self.var(self.c.len() + j, z), int(1))], value))
    }

    /// `−F(e, z) + Σ_{f ∈ E} F(f, z[var ↦ x_var]) ≤ 0` for step `k`.
    pub fn elim_row(&self, k: usize, x: &[Option<usize>]) -> Constraint {
        let step = &self.plan.steps[k];
        let out = self.var(step.output, sub_state(x, &self.plan.fns[step.output].scope));
        let terms = std::iter::once((out, int(-1)))
            .chain(step.inputs.iter().map(|&f| (self.var(f, sub_state(x, &self.plan.fns[f].scope)), int(1))));
        Constraint::new(ConstraintKind::Le, terms, int(0))
    }

    /// `Σ_{f final} F(f, ∅) − φ ≤ 0`.
    pub fn gen_row(&self) -> Constraint {
        let terms = self
            .plan
            .finals
            .iter()
            .map(|&f| (self.var(f, PartialState::empty()), int(1)))
            .chain(std::iter::once((LpVar::Phi, int(-1))));
        Constraint::new(ConstraintKind::Le, terms, int(0))
    }

    fn for_each_assignment(&self, scope: &[usize], extra: Option<usize>, mut f: impl FnMut(&[Option<usize>])) {
        let vars: Vec<usize> = scope.iter().copied().chain(extra).collect();
        let mut x = vec![None; self.sizes.len()];
        let mut odo = Odometer::new(vars.iter().map(|&v| self.sizes[v]).collect());
        while !odo.is_done() {
            for (v, d) in vars.iter().zip(odo.digits()) {
                x[*v] = Some(*d);
            }
            f(&x);
            odo.advance();
        }
    }

    /// All rows, deduplicated.
    pub fn constraints(&self) -> BTreeSet<Constraint> {
        let mut out = BTreeSet::new();
        for i in 0..self.c.len() {
            self.for_each_assignment(self.c[i].scope(), None, |x| {
                out.insert(self.c_def(i, x));
            });
        }
        for j in 0..self.b.len() {
            self.for_each_assignment(self.b[j].scope(), None, |x| {
                out.extend(self.b_def(j, x));
            });
        }
        for (k, step) in self.plan.steps.iter().enumerate() {
            self.for_each_assignment(&self.plan.fns[step.output].scope, Some(step.var), |x| {
                out.insert(self.elim_row(k, x));
            });
        }
        out.insert(self.gen_row());
        out
    }

    /// The rows whose sum is `Σ_i C_i(x) w_i − φ ≤ −Σ_j b_j(x)` for the full state `x`, with
    /// the side of each equality that makes the sum telescope (`true` = negated half).
    pub fn chain(&self, x: &[usize]) -> Vec<(Constraint, bool)> {
        let x: Vec<Option<usize>> = x.iter().map(|&v| Some(v)).collect();
        let mut out = vec![(self.gen_row(), false)];
        out.extend((0..self.plan.steps.len()).map(|k| (self.elim_row(k, &x), false)));
        out.extend((0..self.c.len()).map(|i| (self.c_def(i, &x), false)));
        out.extend((0..self.b.len()).filter_map(|j| self.b_def(j, &x)).map(|c| (c, true)));
        out
    }
}

/// The rows of the factored LP for `φ ≥ max_x Σ_i w_i C_i(x) + Σ_j b_j(x)`.
pub fn min_lp(
    mdp: &FactoredMdp,
    tag: Tag,
    c: &[ScopedFn<Rational>],
    b: &[ScopedFn<ExtReal>],
    order: &ElimOrder,
) -> Result<BTreeSet<Constraint>> {
    Ok(Emitter::new(mdp, tag, c, b, order)?.constraints())
}

/// `(tag, C, b)` inputs of one `min_lp` call.
pub type Half = (Tag, Vec<ScopedFn<Rational>>, Vec<ScopedFn<ExtReal>>);

/// Inputs of the two halves of a branch LP, bounding `ν_w − Q^a_w` and `Q^a_w − ν_w` on
/// the branch's states.
pub fn branch_halves(mdp: &FactoredMdp, t: &PartialState, a: ActionId, ts: &[PartialState]) -> [Half; 2] {
    let c: Vec<ScopedFn<Rational>> = basis_residuals(mdp, a).iter().map(|f| f.instantiate(t)).collect();
    let neg_c: Vec<ScopedFn<Rational>> = c.iter().map(|f| f.map(|v| -v)).collect();
    let masks = indicator_fns(mdp.domain_sizes(), ts, t);
    let rewards: Vec<ScopedFn<Rational>> = mdp.rewards(a).iter().map(|r| r.instantiate(t)).collect();
    let b_pos: Vec<ScopedFn<ExtReal>> =
        rewards.iter().map(|r| r.map(|v| ExtReal::Finite(-v))).chain(masks.iter().cloned()).collect();
    let b_neg: Vec<ScopedFn<ExtReal>> =
        rewards.iter().map(|r| r.map(|v| ExtReal::Finite(v.clone()))).chain(masks).collect();
    [(Tag { t: t.clone(), a, pos: true }, c, b_pos), (Tag { t: t.clone(), a, pos: false }, neg_c, b_neg)]
}

/// Rows bounding `φ ≥ |Q^a_w(x) − ν_w(x)|` on the states of branch `(t, a)` not covered by `ts`.
pub fn branch_lp(
    mdp: &FactoredMdp,
    t: &PartialState,
    a: ActionId,
    ts: &[PartialState],
    order: &ElimOrder,
) -> Result<BTreeSet<Constraint>> {
    let mut out = BTreeSet::new();
    for (tag, c, b) in branch_halves(mdp, t, a, ts) {
        out.extend(min_lp(mdp, tag, &c, &b, order)?);
    }
    Ok(out)
}

/// The union of all branch LPs of `pol`, each branch masked by the earlier ones.
pub fn weight_lp(mdp: &FactoredMdp, pol: &DecisionList, order: &ElimOrder) -> Result<Lp> {
    let mut lp = Lp { num_weights: mdp.h_dim(), constraints: Vec::new() };
    let mut ts = Vec::with_capacity(pol.len());
    for br in &pol.branches {
        lp.constraints.extend(branch_lp(mdp, &br.t, br.action, &ts, order)?);
        ts.push(br.t.clone());
    }
    Ok(lp)
}
