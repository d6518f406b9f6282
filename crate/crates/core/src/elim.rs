//! Maximizing a sum of scoped functions over all full states by variable elimination.

use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::num::ExtReal;
use crate::scoped::ScopedFn;
use crate::state::Odometer;

/// How to choose the order in which variables are eliminated.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub enum ElimOrder {
    /// `0, 1, …, n−1`.
    #[default]
    Identity,
    /// Greedy: repeatedly eliminate the variable whose elimination creates the smallest
    /// scope, lowest index on ties.
    MinDegree,
    /// An explicit permutation of `0..n`.
    Fixed(Vec<usize>),
}

impl ElimOrder {
    /// The concrete permutation for a list of function scopes over `n` variables.
    pub fn resolve(&self, n: usize, scopes: &[&[usize]]) -> Result<Vec<usize>> {
        match self {
            ElimOrder::Identity => Ok((0..n).collect()),
            ElimOrder::Fixed(p) => {
                let mut seen = vec![false; n];
                if p.len() != n || p.iter().any(|&v| v >= n || std::mem::replace(&mut seen[v], true)) {
                    return Err(Error::InvalidInput(format!("{p:?} is not a permutation of 0..{n}")));
                }
                Ok(p.clone())
            }
            ElimOrder::MinDegree => {
                let mut work: Vec<BTreeSet<usize>> = scopes.iter().map(|s| s.iter().copied().collect()).collect();
                let mut remaining: BTreeSet<usize> = (0..n).collect();
                let mut order = Vec::with_capacity(n);
                while let Some(best) = remaining.iter().copied().min_by_key(|&v| {
                    (work.iter().filter(|s| s.contains(&v)).fold(BTreeSet::new(), |acc, s| &acc | s).len(), v)
                }) {
                    let (dep, rest): (Vec<_>, Vec<_>) = work.into_iter().partition(|s| s.contains(&best));
                    let mut merged: BTreeSet<usize> = dep.into_iter().flatten().collect();
                    merged.remove(&best);
                    work = rest;
                    work.push(merged);
                    remaining.remove(&best);
                    order.push(best);
                }
                Ok(order)
            }
        }
    }
}

/// Progress of variable elimination: the number of variables eliminated so far and the
/// functions still to be maximized.
#[derive(Debug, Clone, PartialEq)]
pub struct ElimState {
    pub iteration: usize,
    pub worklist: Vec<ScopedFn<ExtReal>>,
}

fn sum_ext<'a>(values: impl Iterator<Item = &'a ExtReal>) -> ExtReal {
    let mut acc = ExtReal::zero();
    for v in values {
        match (&mut acc, v) {
            (ExtReal::Finite(a), ExtReal::Finite(b)) => *a += b,
            _ => return ExtReal::NegInf,
        }
    }
    acc
}

/// Eliminates variable `order[state.iteration]`: the functions depending on it are
/// replaced by their pointwise maximum over its values. An empty dependent set yields the
/// constant 0.
pub fn elim_step(domain_sizes: &[usize], order: &[usize], state: ElimState) -> ElimState {
    let var = order[state.iteration];
    let (dependent, mut rest): (Vec<_>, Vec<_>) = state.worklist.into_iter().partition(|f| f.depends_on(var));
    let scope: Vec<usize> = dependent
        .iter()
        .flat_map(|f| f.scope().iter().copied())
        .filter(|&v| v != var)
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();
    let strides: Vec<(Vec<usize>, usize)> = dependent
        .iter()
        .map(|f| {
            let s = f.strides_in(&scope);
            (s, f.strides_in(&[var])[0])
        })
        .collect();
    let e = ScopedFn::from_digits(domain_sizes, scope, |digits| {
        let bases: Vec<usize> = strides.iter().map(|(s, _)| digits.iter().zip(s).map(|(d, s)| d * s).sum()).collect();
        (0..domain_sizes[var])
            .map(|y| {
                sum_ext(
                    dependent.iter().zip(&bases).zip(&strides).map(|((f, base), (_, sl))| &f.table()[base + y * sl]),
                )
            })
            .max()
            .unwrap_or(ExtReal::NegInf)
    });
    rest.insert(0, e);
    ElimState { iteration: state.iteration + 1, worklist: rest }
}

fn check_inputs(domain_sizes: &[usize], fs: &[ScopedFn<ExtReal>]) -> Result<()> {
    let n = domain_sizes.len();
    for (k, f) in fs.iter().enumerate() {
        if let Some(v) = f.scope().iter().find(|&&v| v >= n) {
            return Err(Error::InvalidInput(format!("function {k} mentions variable {v} outside 0..{n}")));
        }
        if f.scope().iter().zip(f.radices()).any(|(&v, &r)| domain_sizes[v] != r) {
            return Err(Error::InvalidInput(format!("function {k} does not match the variable domains")));
        }
    }
    Ok(())
}

/// `max_x Σ_f f(x)` over all full states, by eliminating the variables in `order`.
pub fn max_sum(domain_sizes: &[usize], fs: &[ScopedFn<ExtReal>], order: &ElimOrder) -> Result<ExtReal> {
    check_inputs(domain_sizes, fs)?;
    let scopes: Vec<&[usize]> = fs.iter().map(|f| f.scope()).collect();
    let perm = order.resolve(domain_sizes.len(), &scopes)?;
    let mut state = ElimState { iteration: 0, worklist: fs.to_vec() };
    while state.iteration < domain_sizes.len() {
        state = elim_step(domain_sizes, &perm, state);
    }
    Ok(sum_ext(state.worklist.iter().map(|f| &f.table()[0])))
}

/// Like [`max_sum`], and also returns a maximizing full state (dense values) when the
/// maximum is finite. Ties go to the lowest value of each variable, decided in reverse
/// elimination order.
pub fn argmax_sum(
    domain_sizes: &[usize],
    fs: &[ScopedFn<ExtReal>],
    order: &ElimOrder,
) -> Result<(ExtReal, Option<Vec<usize>>)> {
    check_inputs(domain_sizes, fs)?;
    let n = domain_sizes.len();
    let scopes: Vec<&[usize]> = fs.iter().map(|f| f.scope()).collect();
    let perm = order.resolve(n, &scopes)?;
    let mut worklist = fs.to_vec();
    let mut steps: Vec<Vec<ScopedFn<ExtReal>>> = Vec::with_capacity(n);
    for &var in &perm {
        let (dependent, rest): (Vec<_>, Vec<_>) = worklist.into_iter().partition(|f| f.depends_on(var));
        let next = elim_step(domain_sizes, &[var], ElimState { iteration: 0, worklist: dependent.clone() });
        worklist = next.worklist;
        worklist.extend(rest);
        steps.push(dependent);
    }
    let best = sum_ext(worklist.iter().map(|f| &f.table()[0]));
    if !best.is_finite() {
        return Ok((best, None));
    }
    let mut x = vec![0; n];
    for (k, &var) in perm.iter().enumerate().rev() {
        let mut chosen = 0;
        let mut top = ExtReal::NegInf;
        for y in 0..domain_sizes[var] {
            x[var] = y;
            let v = sum_ext(steps[k].iter().map(|f| f.eval_dense(&x)));
            if v > top {
                top = v;
                chosen = y;
            }
        }
        x[var] = chosen;
    }
    Ok((best, Some(x)))
}

/// `max_x Σ_f f(x)` by enumerating every full state.
pub fn explicit_max(domain_sizes: &[usize], fs: &[ScopedFn<ExtReal>]) -> ExtReal {
    explicit_max_over(domain_sizes, &(0..domain_sizes.len()).collect::<Vec<_>>(), fs)
}

/// Maximum of the sum over all assignments to `vars`, which must cover every scope.
pub fn explicit_max_over(domain_sizes: &[usize], vars: &[usize], fs: &[ScopedFn<ExtReal>]) -> ExtReal {
    let strides: Vec<Vec<usize>> = fs.iter().map(|f| f.strides_in(vars)).collect();
    let mut odo = Odometer::new(vars.iter().map(|&v| domain_sizes[v]).collect());
    let mut best = ExtReal::NegInf;
    while !odo.is_done() {
        let d = odo.digits();
        let total = sum_ext(
            fs.iter().zip(&strides).map(|(f, s)| &f.table()[d.iter().zip(s).map(|(a, b)| a * b).sum::<usize>()]),
        );
        best = best.max(total);
        odo.advance();
    }
    best
}
