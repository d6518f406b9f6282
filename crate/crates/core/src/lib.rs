//! Approximate policy iteration for factored MDPs, exact end to end.
//!
//! Values, weights and LP data are rationals; every weight LP is solved by an exact simplex
//! and accepted only with a checked optimality certificate.
//!
//! ## Examples
//!
//! ```text
//! examples/
//! ├── ring_api.rs              full solver run on the ring network, with the exact bound
//! ├── model_file.rs            JSON models and validator output
//! ├── variable_elimination.rs  max of a sum of scoped functions, under several orders
//! ├── decision_list.rs         greedy decision lists and branch bonuses
//! ├── bellman_error.rs         per-branch Bellman errors
//! ├── weight_lp.rs             the factored weight LP, its file format and certificate
//! ├── certify_lp.rs            optimal, infeasible and unbounded certificates
//! └── oracle_check.rs          factored results against brute-force enumeration
//! ```
//!
//! ```bash
//! cargo run --release --example ring_api -- 4
//! ```
//!
//! The `fmdp` binary wraps [`cli`] for use from the shell.

pub mod api;
pub mod bellman;
pub mod cli;
pub mod elim;
pub mod error;
pub mod lp;
pub mod model;
pub mod model_file;
pub mod num;
pub mod oracle;
pub mod policy;
pub mod ring;
pub mod scoped;
pub mod state;

pub use error::{Error, Result};
