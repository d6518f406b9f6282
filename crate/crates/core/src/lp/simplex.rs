//! Exact sparse-tableau simplex for `min cᵀx s.t. Ax ≤ b`, `x` free.
//!
//! Every row gets a slack, `Ax + s = b`, `s ≥ 0`. Free variables are pivoted into the basis
//! first and their rows set aside, since a basic free variable never limits a step. A single
//! artificial variable then repairs negative right-hand sides (phase 1), and phase 2
//! optimizes. Both phases use Bland's rule. Equalities arrive as pairs of opposite rows;
//! once one half is pivoted on, the other reads `s_a + s_b = 0` and both slacks are held at
//! zero.

use std::collections::{BTreeMap, BTreeSet};

use num_traits::{Signed, Zero};

use super::{Certificate, StdLp};
use crate::error::Result;
use crate::num::Rational;

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct SolveStats {
    /// Pivots spent moving free variables into the basis.
    pub free_pivots: usize,
    /// Pivots of phases 1 and 2.
    pub pivots: usize,
}

type Entries = Vec<(usize, Rational)>;

#[derive(Debug, Clone)]
struct Row {
    basic: usize,
    /// Nonbasic columns, sorted; the row reads `x_basic + Σ v·x_j = rhs`.
    entries: Entries,
    rhs: Rational,
}

impl Row {
    fn coef(&self, col: usize) -> Option<&Rational> {
        self.entries.binary_search_by_key(&col, |(j, _)| *j).ok().map(|k| &self.entries[k].1)
    }
}

/// Reduced costs: `z = z0 + Σ d_j x_j` over nonbasic columns.
#[derive(Debug, Clone, Default)]
struct Objective {
    d: BTreeMap<usize, Rational>,
    z0: Rational,
}

struct Tableau {
    n: usize,
    m: usize,
    rows: Vec<Row>,
    active: Vec<bool>,
    /// Active rows containing each column.
    cols: Vec<BTreeSet<usize>>,
    fixed: Vec<bool>,
    frozen: Vec<usize>,
    pairs: Vec<(usize, usize)>,
    phase1: Option<Objective>,
    phase2: Objective,
    stats: SolveStats,
}

fn axpy(target: &[(usize, Rational)], f: &Rational, src: &[(usize, Rational)], drop: usize) -> Entries {
    let mut out = Vec::with_capacity(target.len() + src.len());
    let (mut i, mut k) = (0, 0);
    while i < target.len() || k < src.len() {
        let ti = target.get(i).map(|e| e.0).unwrap_or(usize::MAX);
        let sk = src.get(k).map(|e| e.0).unwrap_or(usize::MAX);
        if ti < sk {
            if ti != drop {
                out.push(target[i].clone());
            }
            i += 1;
        } else if sk < ti {
            out.push((sk, -(f * &src[k].1)));
            k += 1;
        } else {
            let v = &target[i].1 - f * &src[k].1;
            if !v.is_zero() && ti != drop {
                out.push((ti, v));
            }
            i += 1;
            k += 1;
        }
    }
    out
}

impl Tableau {
    fn new(std: &StdLp) -> Self {
        let n = std.num_vars();
        let m = std.num_rows();
        let mut cols = vec![BTreeSet::new(); n + m + 1];
        let rows: Vec<Row> = std
            .rows
            .iter()
            .zip(&std.b)
            .enumerate()
            .map(|(k, (r, b))| {
                let mut entries: Entries = r.iter().filter(|(_, v)| !v.is_zero()).cloned().collect();
                entries.sort_by_key(|(j, _)| *j);
                for (j, _) in &entries {
                    cols[*j].insert(k);
                }
                Row { basic: n + k, entries, rhs: b.clone() }
            })
            .collect();
        let phase2 = Objective {
            d: std.c.iter().enumerate().filter(|(_, c)| !c.is_zero()).map(|(j, c)| (j, c.clone())).collect(),
            z0: Rational::zero(),
        };
        Tableau {
            n,
            m,
            rows,
            active: vec![true; m],
            cols,
            fixed: vec![false; n + m + 1],
            frozen: Vec::new(),
            pairs: Vec::new(),
            phase1: None,
            phase2,
            stats: SolveStats::default(),
        }
    }

    fn art(&self) -> usize {
        self.n + self.m
    }

    fn freeze(&mut self, r: usize) {
        self.active[r] = false;
        for (j, _) in &self.rows[r].entries {
            self.cols[*j].remove(&r);
        }
        self.frozen.push(r);
    }

    fn pivot(&mut self, r: usize, q: usize) {
        let row = &self.rows[r];
        let a = row.coef(q).expect("pivot element present").clone();
        let old_basic = row.basic;
        let mut entries: Entries = row.entries.iter().filter(|(j, _)| *j != q).map(|(j, v)| (*j, v / &a)).collect();
        let pos = entries.partition_point(|(j, _)| *j < old_basic);
        entries.insert(pos, (old_basic, a.recip()));
        let rhs = &row.rhs / &a;
        self.cols[q].remove(&r);
        self.cols[old_basic].insert(r);

        let others: Vec<usize> = self.cols[q].iter().copied().collect();
        for i in others {
            let f = self.rows[i].coef(q).expect("column index is exact").clone();
            let before: BTreeSet<usize> = self.rows[i].entries.iter().map(|(j, _)| *j).collect();
            let updated = axpy(&self.rows[i].entries, &f, &entries, q);
            for (j, _) in &updated {
                if !before.contains(j) {
                    self.cols[*j].insert(i);
                }
            }
            let after: BTreeSet<usize> = updated.iter().map(|(j, _)| *j).collect();
            for j in before.difference(&after) {
                self.cols[*j].remove(&i);
            }
            let row_i = &mut self.rows[i];
            row_i.entries = updated;
            row_i.rhs -= &f * &rhs;
        }
        for obj in self.phase1.iter_mut().chain(std::iter::once(&mut self.phase2)) {
            if let Some(dq) = obj.d.remove(&q) {
                for (j, v) in &entries {
                    let e = obj.d.entry(*j).or_default();
                    *e -= &dq * v;
                    if e.is_zero() {
                        obj.d.remove(j);
                    }
                }
                obj.z0 += &dq * &rhs;
            }
        }
        let row = &mut self.rows[r];
        row.entries = entries;
        row.rhs = rhs;
        row.basic = q;
    }

    /// Pivots every free variable that occurs in an active row into the basis and sets its
    /// row aside.
    fn pivot_free(&mut self) {
        let mut order: Vec<usize> = (0..self.n).collect();
        order.sort_by_key(|&j| (self.cols[j].len(), j));
        for j in order {
            let Some(&r) = self.cols[j].iter().min_by_key(|&&r| (self.rows[r].entries.len(), r)) else {
                continue;
            };
            self.pivot(r, j);
            self.stats.free_pivots += 1;
            self.freeze(r);
        }
        for r in 0..self.m {
            if !self.active[r] {
                continue;
            }
            let row = &self.rows[r];
            if let [(b, one)] = &row.entries[..] {
                if row.rhs.is_zero() && *b >= self.n && *b < self.art() && *one == Rational::from_integer(1.into()) {
                    let pair = (row.basic - self.n, b - self.n);
                    self.fixed[*b] = true;
                    self.pairs.push(pair);
                    self.freeze(r);
                }
            }
        }
    }

    fn entering(&self, obj: &Objective) -> Option<usize> {
        obj.d.iter().find(|(j, v)| v.is_negative() && **j >= self.n && !self.fixed[**j]).map(|(j, _)| *j)
    }

    /// Minimum-ratio row for entering column `q`, ties to the smallest basic index.
    fn leaving(&self, q: usize) -> Option<usize> {
        let mut best: Option<(Rational, usize, usize)> = None;
        for &i in &self.cols[q] {
            let a = self.rows[i].coef(q).unwrap();
            if !a.is_positive() {
                continue;
            }
            let ratio = &self.rows[i].rhs / a;
            let key = (ratio, self.rows[i].basic, i);
            if best.as_ref().is_none_or(|b| (&key.0, key.1) < (&b.0, b.1)) {
                best = Some(key);
            }
        }
        best.map(|(_, _, i)| i)
    }

    /// Runs Bland's rule on the phase-1 objective when `phase1`, else on the phase-2 one.
    /// Returns the entering column of an unbounded direction, if any.
    fn optimize(&mut self, phase1: bool) -> Option<usize> {
        loop {
            let obj = if phase1 { self.phase1.as_ref().unwrap() } else { &self.phase2 };
            let q = self.entering(obj)?;
            let Some(r) = self.leaving(q) else {
                return Some(q);
            };
            self.pivot(r, q);
            self.stats.pivots += 1;
        }
    }

    /// Values of all columns given values of the nonbasic ones (`seed`), propagated through
    /// active and set-aside rows. With `homogeneous`, right-hand sides count as zero.
    fn propagate(&self, seed: &[(usize, Rational)], homogeneous: bool) -> Vec<Rational> {
        let mut vals = vec![Rational::zero(); self.n + self.m + 1];
        for (j, v) in seed {
            vals[*j] = v.clone();
        }
        let solve = |row: &Row, vals: &[Rational]| -> Rational {
            let base = if homogeneous { Rational::zero() } else { row.rhs.clone() };
            row.entries.iter().fold(base, |acc, (j, v)| acc - v * &vals[*j])
        };
        for (r, row) in self.rows.iter().enumerate() {
            if self.active[r] {
                vals[row.basic] = solve(row, &vals);
            }
        }
        for &r in self.frozen.iter().rev() {
            let v = solve(&self.rows[r], &vals);
            vals[self.rows[r].basic] = v;
        }
        vals
    }

    fn slack_multipliers(&self, obj: &Objective) -> Vec<Rational> {
        let mut y: Vec<Rational> = (0..self.m).map(|k| obj.d.get(&(self.n + k)).cloned().unwrap_or_default()).collect();
        for &(a, b) in &self.pairs {
            let u = &y[b] - &y[a];
            if u.is_negative() {
                y[a] = -u;
                y[b] = Rational::zero();
            } else {
                y[a] = Rational::zero();
                y[b] = u;
            }
        }
        y
    }

    fn unbounded(&self, q: usize, dir: Rational) -> Certificate {
        let point = self.propagate(&[], false)[..self.n].to_vec();
        let ray = self.propagate(&[(q, dir)], true)[..self.n].to_vec();
        Certificate::Unbounded { point, ray }
    }

    fn solve(&mut self) -> Certificate {
        self.pivot_free();

        let negative: Vec<usize> = (0..self.m).filter(|&r| self.active[r] && self.rows[r].rhs.is_negative()).collect();
        if let Some(&worst) = negative.iter().min_by(|&&a, &&b| self.rows[a].rhs.cmp(&self.rows[b].rhs).then(a.cmp(&b)))
        {
            let art = self.art();
            for &r in &negative {
                self.rows[r].entries.push((art, Rational::from_integer((-1).into())));
                self.cols[art].insert(r);
            }
            self.phase1 = Some(Objective { d: [(art, Rational::from_integer(1.into()))].into(), z0: Rational::zero() });
            self.pivot(worst, art);
            self.stats.pivots += 1;
            let stuck = self.optimize(true);
            debug_assert!(stuck.is_none(), "phase 1 is bounded below by zero");
            let p1 = self.phase1.take().unwrap();
            if p1.z0.is_positive() {
                return Certificate::Infeasible { farkas: self.slack_multipliers(&p1) };
            }
            if let Some(r) = (0..self.m).find(|&r| self.active[r] && self.rows[r].basic == art) {
                let candidate = self.rows[r].entries.iter().map(|(j, _)| *j).find(|&j| j >= self.n && !self.fixed[j]);
                match candidate {
                    Some(j) => {
                        self.pivot(r, j);
                        self.stats.pivots += 1;
                    }
                    None => self.freeze(r),
                }
            }
            for r in self.cols[art].clone() {
                self.rows[r].entries.retain(|(j, _)| *j != art);
            }
            self.cols[art].clear();
            self.fixed[art] = true;
            self.phase2.d.remove(&art);
        }

        let free_direction =
            self.phase2.d.iter().find(|(j, v)| **j < self.n && !v.is_zero()).map(|(j, v)| (*j, v.clone()));
        if let Some((j, d)) = free_direction {
            let dir =
                if d.is_positive() { -Rational::from_integer(1.into()) } else { Rational::from_integer(1.into()) };
            return self.unbounded(j, dir);
        }

        if let Some(q) = self.optimize(false) {
            return self.unbounded(q, Rational::from_integer(1.into()));
        }
        let primal = self.propagate(&[], false)[..self.n].to_vec();
        let dual = self.slack_multipliers(&self.phase2);
        Certificate::Optimal { primal, dual }
    }
}

/// Solves `min cᵀx s.t. Ax ≤ b` exactly and returns a certificate of the outcome.
pub fn solve_lp(std: &StdLp) -> Result<Certificate> {
    Ok(solve_lp_with_stats(std)?.0)
}

pub fn solve_lp_with_stats(std: &StdLp) -> Result<(Certificate, SolveStats)> {
    std.check_shape()?;
    let mut t = Tableau::new(std);
    let cert = t.solve();
    Ok((cert, t.stats))
}
