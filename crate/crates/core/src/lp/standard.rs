use num_traits::Zero;

use super::{ConstraintKind, Lp, LpVar};
use crate::error::{Error, Result};
use crate::num::Rational;

/// A constraint over indexed variables.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NamedConstraint {
    pub kind: ConstraintKind,
    pub coeffs: Vec<(usize, Rational)>,
    pub rhs: Rational,
}

/// An LP with named variables: minimize `objective` subject to `constraints`, all variables
/// free.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct NamedLp {
    pub vars: Vec<String>,
    pub objective: Vec<(usize, Rational)>,
    pub constraints: Vec<NamedConstraint>,
}

/// Where a standard-form row came from: its constraint, and whether it is the negated half
/// of an equality.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RowOrigin {
    pub constraint: usize,
    pub negated: bool,
}

/// `min cᵀx s.t. Ax ≤ b`, `x` free, with sparse rows.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct StdLp {
    pub names: Vec<String>,
    pub rows: Vec<Vec<(usize, Rational)>>,
    pub b: Vec<Rational>,
    pub c: Vec<Rational>,
    pub origin: Vec<RowOrigin>,
}

impl StdLp {
    /// Builds a standard-form LP from dense data, naming variables `x0, x1, …`.
    pub fn from_dense(a: &[Vec<Rational>], b: Vec<Rational>, c: Vec<Rational>) -> Self {
        let rows: Vec<Vec<(usize, Rational)>> = a
            .iter()
            .map(|r| r.iter().enumerate().filter(|(_, v)| !v.is_zero()).map(|(j, v)| (j, v.clone())).collect())
            .collect();
        StdLp {
            names: (0..c.len()).map(|j| format!("x{j}")).collect(),
            origin: (0..rows.len()).map(|k| RowOrigin { constraint: k, negated: false }).collect(),
            rows,
            b,
            c,
        }
    }

    pub fn num_vars(&self) -> usize {
        self.c.len()
    }

    pub fn num_rows(&self) -> usize {
        self.rows.len()
    }

    pub fn nnz(&self) -> usize {
        self.rows.iter().map(Vec::len).sum()
    }

    pub fn row_dot(&self, k: usize, x: &[Rational]) -> Rational {
        self.rows[k].iter().map(|(j, a)| a * &x[*j]).sum()
    }

    pub fn objective(&self, x: &[Rational]) -> Rational {
        self.c.iter().zip(x).map(|(c, x)| c * x).sum()
    }

    /// `Aᵀy`.
    pub fn transpose_dot(&self, y: &[Rational]) -> Vec<Rational> {
        let mut out = vec![Rational::zero(); self.num_vars()];
        for (row, yk) in self.rows.iter().zip(y) {
            if yk.is_zero() {
                continue;
            }
            for (j, a) in row {
                out[*j] += a * yk;
            }
        }
        out
    }

    /// Checks that every row and the objective only mention declared variables.
    pub fn check_shape(&self) -> Result<()> {
        let n = self.num_vars();
        if self.names.len() != n || self.b.len() != self.rows.len() || self.origin.len() != self.rows.len() {
            return Err(Error::InvalidInput("standard-form dimensions disagree".into()));
        }
        if self.rows.iter().flatten().any(|(j, _)| *j >= n) {
            return Err(Error::InvalidInput("a row mentions an undeclared variable".into()));
        }
        Ok(())
    }
}

impl NamedLp {
    /// Each equality becomes the row itself followed by its negation; the objective is
    /// carried over and variables keep their order.
    pub fn to_std(&self) -> StdLp {
        let n = self.vars.len();
        let mut c = vec![Rational::zero(); n];
        for (j, v) in &self.objective {
            c[*j] += v;
        }
        let mut std = StdLp { names: self.vars.clone(), c, ..StdLp::default() };
        for (k, con) in self.constraints.iter().enumerate() {
            let mut row: Vec<(usize, Rational)> = Vec::with_capacity(con.coeffs.len());
            let mut sorted = con.coeffs.clone();
            sorted.sort_by_key(|(j, _)| *j);
            for (j, v) in sorted {
                match row.last_mut() {
                    Some((lj, lv)) if *lj == j => *lv += v,
                    _ => row.push((j, v)),
                }
            }
            row.retain(|(_, v)| !v.is_zero());
            if con.kind == ConstraintKind::Eq {
                let neg: Vec<(usize, Rational)> = row.iter().map(|(j, v)| (*j, -v)).collect();
                std.rows.push(row);
                std.b.push(con.rhs.clone());
                std.origin.push(RowOrigin { constraint: k, negated: false });
                std.rows.push(neg);
                std.b.push(-&con.rhs);
                std.origin.push(RowOrigin { constraint: k, negated: true });
            } else {
                std.rows.push(row);
                std.b.push(con.rhs.clone());
                std.origin.push(RowOrigin { constraint: k, negated: false });
            }
        }
        std
    }
}

impl Lp {
    /// Names every variable (in [`Lp::variables`] order) and sets the objective to `phi`.
    pub fn to_named(&self) -> NamedLp {
        let vars = self.variables();
        let index = |v: &LpVar| vars.binary_search(v).expect("variable collected");
        NamedLp {
            vars: vars.iter().map(LpVar::name).collect(),
            objective: vec![(index(&LpVar::Phi), Rational::from_integer(1.into()))],
            constraints: self
                .constraints
                .iter()
                .map(|c| NamedConstraint {
                    kind: c.kind,
                    coeffs: c.coeffs.iter().map(|(v, a)| (index(v), a.clone())).collect(),
                    rhs: c.rhs.clone(),
                })
                .collect(),
        }
    }
}

/// Standard form of a factored LP; variable `j` is `lp.variables()[j]`.
pub fn to_standard_form(lp: &Lp) -> StdLp {
    lp.to_named().to_std()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lp::Constraint;
    use crate::num::int;

    #[test]
    fn equality_splits_into_two_rows() {
        let lp = Lp {
            num_weights: 1,
            constraints: vec![Constraint::new(ConstraintKind::Eq, [(LpVar::Weight(0), int(1))], int(3))],
        };
        let std = to_standard_form(&lp);
        assert_eq!(std.names, vec!["phi", "w0"]);
        assert_eq!(std.rows, vec![vec![(1, int(1))], vec![(1, int(-1))]]);
        assert_eq!(std.b, vec![int(3), int(-3)]);
        assert_eq!(std.c, vec![int(1), int(0)]);
    }

    #[test]
    fn le_rows_are_kept() {
        let lp = Lp {
            num_weights: 1,
            constraints: vec![Constraint::new(
                ConstraintKind::Le,
                [(LpVar::Phi, int(-1)), (LpVar::Weight(0), int(2))],
                int(0),
            )],
        };
        let std = to_standard_form(&lp);
        assert_eq!(std.rows, vec![vec![(0, int(-1)), (1, int(2))]]);
        assert_eq!(std.b, vec![int(0)]);
    }
}
