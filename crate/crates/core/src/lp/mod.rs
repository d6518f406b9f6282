//! Linear programs over exact rationals.
//!
//! Sign convention everywhere: the primal is `min cᵀx s.t. Ax ≤ b, x free` and its dual is
//! `max −bᵀy s.t. Aᵀy = −c, y ≥ 0`.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use sha2::{Digest, Sha256};

use crate::model::ActionId;
use crate::num::Rational;
use crate::state::PartialState;

pub mod certificate;
pub mod exchange;
pub mod factored;
pub mod simplex;
pub mod standard;
pub mod weights;

pub use certificate::{check_certificate, check_infeasible, check_optimality, check_unbounded, Arith, Certificate};
pub use factored::{branch_lp, min_lp, weight_lp};
pub use simplex::{solve_lp, SolveStats};
pub use standard::{to_standard_form, NamedConstraint, NamedLp, StdLp};
pub use weights::{update_weights, update_weights_with, LpBackend, WeightUpdate};

/// Identifies one invocation of the factored LP generator: a branch and a sign.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Tag {
    pub t: PartialState,
    pub a: ActionId,
    pub pos: bool,
}

impl Tag {
    /// Short stable hash of the canonical tag text, used in variable names.
    pub fn hash_hex(&self) -> String {
        let digest = Sha256::digest(format!("{}|{}|{}", self.t, self.a.0, self.pos).as_bytes());
        digest.iter().take(6).map(|b| format!("{b:02x}")).collect()
    }
}

/// The generated functions of the factored LP: the `C` inputs, the `b` inputs, and one new
/// function per eliminated variable.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum FnId {
    C(usize),
    B(usize),
    E(usize),
}

impl fmt::Display for FnId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FnId::C(i) => write!(f, "c{i}"),
            FnId::B(j) => write!(f, "b{j}"),
            FnId::E(l) => write!(f, "e{l}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum LpVar {
    Phi,
    Weight(usize),
    Fn { tag: Arc<Tag>, id: FnId, z: PartialState },
}

impl LpVar {
    /// `phi`, `w<i>` or `f<taghash>_<fnid>_<z>` with `z` as `var.value` pairs joined by `-`.
    pub fn name(&self) -> String {
        match self {
            LpVar::Phi => "phi".into(),
            LpVar::Weight(i) => format!("w{i}"),
            LpVar::Fn { tag, id, z } => {
                let z = if z.is_empty() {
                    "e".to_string()
                } else {
                    z.iter().map(|(v, x)| format!("{v}.{x}")).collect::<Vec<_>>().join("-")
                };
                format!("f{}_{id}_{z}", tag.hash_hex())
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ConstraintKind {
    Le,
    Eq,
}

/// `Σ coeffs · vars (≤ | =) rhs`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Constraint {
    pub kind: ConstraintKind,
    pub coeffs: BTreeMap<LpVar, Rational>,
    pub rhs: Rational,
}

impl Constraint {
    /// Builds a constraint, summing repeated variables and dropping zero coefficients.
    pub fn new(kind: ConstraintKind, terms: impl IntoIterator<Item = (LpVar, Rational)>, rhs: Rational) -> Self {
        let mut coeffs: BTreeMap<LpVar, Rational> = BTreeMap::new();
        for (v, c) in terms {
            *coeffs.entry(v).or_default() += c;
        }
        coeffs.retain(|_, c| *c != Rational::default());
        Constraint { kind, coeffs, rhs }
    }
}

/// A factored LP over `num_weights` weights: minimize `phi` subject to `constraints`.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Lp {
    pub num_weights: usize,
    pub constraints: Vec<Constraint>,
}

impl Lp {
    pub fn num_constraints(&self) -> usize {
        self.constraints.len()
    }

    /// `phi`, every weight, and every other variable mentioned, in sorted order.
    pub fn variables(&self) -> Vec<LpVar> {
        let mut vars: std::collections::BTreeSet<LpVar> =
            self.constraints.iter().flat_map(|c| c.coeffs.keys().cloned()).collect();
        vars.insert(LpVar::Phi);
        vars.extend((0..self.num_weights).map(LpVar::Weight));
        vars.into_iter().collect()
    }
}
