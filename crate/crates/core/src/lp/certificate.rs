//! Solver-independent certificate checks for `min cᵀx s.t. Ax ≤ b`.

use super::StdLp;
use crate::error::{Error, Result};
use crate::num::{Field, Rational, RawPair};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Certificate {
    /// `primal` is feasible, `dual ≥ 0` satisfies `Aᵀdual = −c`, and the objectives agree.
    Optimal { primal: Vec<Rational>, dual: Vec<Rational> },
    /// `farkas ≥ 0`, `Aᵀfarkas = 0`, `bᵀfarkas < 0`.
    Infeasible { farkas: Vec<Rational> },
    /// `point` is feasible, `A·ray ≤ 0`, `cᵀray < 0`.
    Unbounded { point: Vec<Rational>, ray: Vec<Rational> },
}

impl Certificate {
    pub fn kind(&self) -> &'static str {
        match self {
            Certificate::Optimal { .. } => "optimal",
            Certificate::Infeasible { .. } => "infeasible",
            Certificate::Unbounded { .. } => "unbounded",
        }
    }
}

/// Arithmetic used by the checkers: reduced rationals, or numerator/denominator pairs that
/// are never reduced.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Arith {
    #[default]
    Normalized,
    Unnormalized,
}

struct Data<F> {
    rows: Vec<Vec<(usize, F)>>,
    b: Vec<F>,
    c: Vec<F>,
}

impl<F: Field> Data<F> {
    fn new(std: &StdLp) -> Self {
        Data {
            rows: std.rows.iter().map(|r| r.iter().map(|(j, a)| (*j, F::from_rational(a))).collect()).collect(),
            b: std.b.iter().map(F::from_rational).collect(),
            c: std.c.iter().map(F::from_rational).collect(),
        }
    }

    fn dot(a: &[F], b: &[F]) -> F {
        a.iter().zip(b).fold(F::fzero(), |acc, (x, y)| acc.fadd(&x.fmul(y)))
    }

    fn row_dot(&self, k: usize, x: &[F]) -> F {
        self.rows[k].iter().fold(F::fzero(), |acc, (j, a)| acc.fadd(&a.fmul(&x[*j])))
    }

    /// `Ax ≤ rhs` row by row, with `rhs` either `b` or zero.
    fn rows_le(&self, x: &[F], homogeneous: bool) -> bool {
        (0..self.rows.len()).all(|k| {
            let lhs = self.row_dot(k, x);
            let d = if homogeneous { lhs } else { lhs.fsub(&self.b[k]) };
            d.signum() <= 0
        })
    }

    fn transpose_dot(&self, y: &[F]) -> Vec<F> {
        let mut out = vec![F::fzero(); self.c.len()];
        for (row, yk) in self.rows.iter().zip(y) {
            if yk.signum() == 0 {
                continue;
            }
            for (j, a) in row {
                out[*j] = out[*j].fadd(&a.fmul(yk));
            }
        }
        out
    }

    fn optimal(&self, x: &[F], y: &[F]) -> bool {
        self.rows_le(x, false)
            && y.iter().all(|v| v.signum() >= 0)
            && self.transpose_dot(y).iter().zip(&self.c).all(|(ay, c)| ay.fadd(c).signum() == 0)
            && Self::dot(&self.c, x).fadd(&Self::dot(&self.b, y)).signum() == 0
    }

    fn infeasible(&self, y: &[F]) -> bool {
        y.iter().all(|v| v.signum() >= 0)
            && self.transpose_dot(y).iter().all(|v| v.signum() == 0)
            && Self::dot(&self.b, y).signum() < 0
    }

    fn unbounded(&self, x: &[F], r: &[F]) -> bool {
        self.rows_le(x, false) && self.rows_le(r, true) && Self::dot(&self.c, r).signum() < 0
    }
}

fn lift<F: Field>(v: &[Rational]) -> Vec<F> {
    v.iter().map(F::from_rational).collect()
}

fn expect_len(what: &str, got: usize, want: usize) -> Result<()> {
    if got == want {
        Ok(())
    } else {
        Err(Error::InvalidInput(format!("{what} has {got} entries, expected {want}")))
    }
}

pub fn check_optimality_with(std: &StdLp, primal: &[Rational], dual: &[Rational], arith: Arith) -> Result<bool> {
    std.check_shape()?;
    expect_len("primal", primal.len(), std.num_vars())?;
    expect_len("dual", dual.len(), std.num_rows())?;
    Ok(match arith {
        Arith::Normalized => Data::<Rational>::new(std).optimal(&lift(primal), &lift(dual)),
        Arith::Unnormalized => Data::<RawPair>::new(std).optimal(&lift(primal), &lift(dual)),
    })
}

pub fn check_infeasible_with(std: &StdLp, farkas: &[Rational], arith: Arith) -> Result<bool> {
    std.check_shape()?;
    expect_len("farkas", farkas.len(), std.num_rows())?;
    Ok(match arith {
        Arith::Normalized => Data::<Rational>::new(std).infeasible(&lift(farkas)),
        Arith::Unnormalized => Data::<RawPair>::new(std).infeasible(&lift(farkas)),
    })
}

pub fn check_unbounded_with(std: &StdLp, point: &[Rational], ray: &[Rational], arith: Arith) -> Result<bool> {
    std.check_shape()?;
    expect_len("point", point.len(), std.num_vars())?;
    expect_len("ray", ray.len(), std.num_vars())?;
    Ok(match arith {
        Arith::Normalized => Data::<Rational>::new(std).unbounded(&lift(point), &lift(ray)),
        Arith::Unnormalized => Data::<RawPair>::new(std).unbounded(&lift(point), &lift(ray)),
    })
}

pub fn check_optimality(std: &StdLp, primal: &[Rational], dual: &[Rational]) -> Result<bool> {
    check_optimality_with(std, primal, dual, Arith::Normalized)
}

pub fn check_infeasible(std: &StdLp, farkas: &[Rational]) -> Result<bool> {
    check_infeasible_with(std, farkas, Arith::Normalized)
}

pub fn check_unbounded(std: &StdLp, point: &[Rational], ray: &[Rational]) -> Result<bool> {
    check_unbounded_with(std, point, ray, Arith::Normalized)
}

/// Dispatches on the certificate kind.
pub fn check_certificate(std: &StdLp, cert: &Certificate, arith: Arith) -> Result<bool> {
    match cert {
        Certificate::Optimal { primal, dual } => check_optimality_with(std, primal, dual, arith),
        Certificate::Infeasible { farkas } => check_infeasible_with(std, farkas, arith),
        Certificate::Unbounded { point, ray } => check_unbounded_with(std, point, ray, arith),
    }
}
