#![allow(dead_code)]

pub mod violations;

use fmdp::lp::StdLp;
use fmdp::model::Weights;
use fmdp::num::{ratio, ExtReal, Rational};
use fmdp::scoped::ScopedFn;
use rand::seq::SliceRandom;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn small_rational(rng: &mut impl Rng) -> Rational {
    ratio(rng.gen_range(-9..=9), rng.gen_range(1..=4))
}

pub fn random_weights(rng: &mut impl Rng, m: usize) -> Weights {
    Weights((0..m).map(|_| small_rational(rng)).collect())
}

/// A function over a random scope of at most `max_scope` variables; entries are `−∞` with
/// probability `neg_inf`.
pub fn random_fn(rng: &mut impl Rng, sizes: &[usize], max_scope: usize, neg_inf: f64) -> ScopedFn<ExtReal> {
    let mut vars: Vec<usize> = (0..sizes.len()).collect();
    vars.shuffle(rng);
    let k = rng.gen_range(0..=max_scope.min(sizes.len()));
    let mut scope: Vec<usize> = vars[..k].to_vec();
    scope.sort_unstable();
    let radices: Vec<usize> = scope.iter().map(|&v| sizes[v]).collect();
    let len: usize = radices.iter().product();
    let table = (0..len)
        .map(|_| if rng.gen_bool(neg_inf) { ExtReal::NegInf } else { ExtReal::Finite(small_rational(rng)) })
        .collect();
    ScopedFn::new(scope, radices, table).unwrap()
}

pub fn random_sizes(rng: &mut impl Rng, n: usize, max_size: usize) -> Vec<usize> {
    (0..n).map(|_| rng.gen_range(1..=max_size)).collect()
}

/// The kind of LP a generator call is built to be.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LpKind {
    Optimal,
    Infeasible,
    Unbounded,
}

fn int_vec(rng: &mut impl Rng, n: usize, lo: i64, hi: i64) -> Vec<Rational> {
    (0..n).map(|_| Rational::from_integer(rng.gen_range(lo..=hi).into())).collect()
}

fn dot(a: &[Rational], b: &[Rational]) -> Rational {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// A random dense LP of the requested kind with at most 20 variables and 40 rows.
pub fn random_lp(rng: &mut impl Rng, kind: LpKind) -> StdLp {
    let n = rng.gen_range(1..=20usize);
    let mut a: Vec<Vec<Rational>> = Vec::new();
    let mut b: Vec<Rational> = Vec::new();
    let x0 = int_vec(rng, n, -5, 5);
    let extra = rng.gen_range(0..=(40 - 2 * n).min(12));
    let sparse_row = |rng: &mut ChaCha8Rng| -> Vec<Rational> {
        (0..n).map(|_| if rng.gen_bool(0.4) { small_rational(rng) } else { Rational::default() }).collect()
    };
    let mut local = rng_from(rng);
    match kind {
        LpKind::Optimal => {
            for _ in 0..extra {
                let row = sparse_row(&mut local);
                let slack = Rational::from_integer(local.gen_range(0..=3).into());
                b.push(dot(&row, &x0) + slack);
                a.push(row);
            }
            // A box keeps the problem bounded.
            for j in 0..n {
                for sign in [1i64, -1] {
                    let mut row = vec![Rational::default(); n];
                    row[j] = Rational::from_integer(sign.into());
                    b.push(Rational::from_integer(local.gen_range(5..=9).into()));
                    a.push(row);
                }
            }
            let c = int_vec(&mut local, n, -4, 4);
            shuffle_rows(&mut local, &mut a, &mut b);
            StdLp::from_dense(&a, b, c)
        }
        LpKind::Infeasible => {
            let k = local.gen_range(1..=extra.clamp(1, 39));
            for _ in 0..k {
                let row = sparse_row(&mut local);
                let slack = Rational::from_integer(local.gen_range(0..=3).into());
                b.push(dot(&row, &x0) + slack);
                a.push(row);
            }
            let y: Vec<Rational> = (0..k).map(|_| ratio(local.gen_range(0..=3), local.gen_range(1..=2))).collect();
            let mut comb = vec![Rational::default(); n];
            for (row, yk) in a.iter().zip(&y) {
                for (c, v) in comb.iter_mut().zip(row) {
                    *c += yk * v;
                }
            }
            let rhs: Rational = b.iter().zip(&y).map(|(bk, yk)| bk * yk).sum();
            a.push(comb.iter().map(|v| -v).collect());
            b.push(-rhs - ratio(local.gen_range(1..=3), local.gen_range(1..=3)));
            let c = int_vec(&mut local, n, -4, 4);
            shuffle_rows(&mut local, &mut a, &mut b);
            StdLp::from_dense(&a, b, c)
        }
        LpKind::Unbounded => {
            let d = loop {
                let d = int_vec(&mut local, n, -2, 2);
                if d.iter().any(|v| *v != Rational::default()) {
                    break d;
                }
            };
            for _ in 0..extra.max(1) {
                let mut row = sparse_row(&mut local);
                if dot(&row, &d) > Rational::default() {
                    row.iter_mut().for_each(|v| *v = -v.clone());
                }
                let slack = Rational::from_integer(local.gen_range(0..=3).into());
                b.push(dot(&row, &x0) + slack);
                a.push(row);
            }
            let mut c = int_vec(&mut local, n, -4, 4);
            let cd = dot(&c, &d);
            let dd = dot(&d, &d);
            // Shift c so that c·d = −1.
            let shift = (cd + Rational::from_integer(1.into())) / dd;
            for (cj, dj) in c.iter_mut().zip(&d) {
                *cj -= &shift * dj;
            }
            shuffle_rows(&mut local, &mut a, &mut b);
            StdLp::from_dense(&a, b, c)
        }
    }
}

fn rng_from(rng: &mut impl Rng) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(rng.gen())
}

fn shuffle_rows(rng: &mut impl Rng, a: &mut Vec<Vec<Rational>>, b: &mut Vec<Rational>) {
    let mut idx: Vec<usize> = (0..a.len()).collect();
    idx.shuffle(rng);
    *a = idx.iter().map(|&k| a[k].clone()).collect();
    *b = idx.iter().map(|&k| b[k].clone()).collect();
}

/// Independent certificate conditions computed from dense data, for cross-checking the
/// library checker.
pub fn dense_rows(std: &StdLp) -> Vec<Vec<Rational>> {
    std.rows
        .iter()
        .map(|row| {
            let mut dense = vec![Rational::default(); std.num_vars()];
            for (j, v) in row {
                dense[*j] += v;
            }
            dense
        })
        .collect()
}

pub fn reference_optimal(std: &StdLp, x: &[Rational], y: &[Rational]) -> bool {
    let a = dense_rows(std);
    if x.len() != std.num_vars() || y.len() != a.len() {
        return false;
    }
    let zero = Rational::default();
    let primal_ok = a.iter().zip(&std.b).all(|(row, bk)| dot(row, x) <= *bk);
    let dual_ok = y.iter().all(|v| *v >= zero);
    let stationary =
        (0..std.num_vars()).all(|j| a.iter().zip(y).map(|(row, yk)| &row[j] * yk).sum::<Rational>() == -&std.c[j]);
    let gap = dot(&std.c, x) == -dot(&std.b, y);
    primal_ok && dual_ok && stationary && gap
}

pub fn reference_infeasible(std: &StdLp, y: &[Rational]) -> bool {
    let a = dense_rows(std);
    if y.len() != a.len() {
        return false;
    }
    let zero = Rational::default();
    y.iter().all(|v| *v >= zero)
        && (0..std.num_vars()).all(|j| a.iter().zip(y).map(|(row, yk)| &row[j] * yk).sum::<Rational>() == zero)
        && dot(&std.b, y) < zero
}

pub fn reference_unbounded(std: &StdLp, x: &[Rational], r: &[Rational]) -> bool {
    let a = dense_rows(std);
    if x.len() != std.num_vars() || r.len() != std.num_vars() {
        return false;
    }
    let zero = Rational::default();
    a.iter().zip(&std.b).all(|(row, bk)| dot(row, x) <= *bk)
        && a.iter().all(|row| dot(row, r) <= zero)
        && dot(&std.c, r) < zero
}

/// A single-action model over `sizes` whose variables never change, with `m` constant basis
/// functions. Useful as a carrier for domain sizes and the basis dimension.
pub fn carrier_mdp(sizes: &[usize], m: usize) -> fmdp::model::FactoredMdp {
    use fmdp::model::{ActionDef, MdpDefinition};
    let transitions = sizes
        .iter()
        .enumerate()
        .map(|(i, &s)| {
            let table =
                (0..s).map(|v| (0..s).map(|u| Rational::from_integer(i64::from(u == v).into())).collect()).collect();
            ScopedFn::new(vec![i], vec![s], table).unwrap()
        })
        .collect();
    let def = MdpDefinition {
        domains: sizes.iter().map(|&s| (0..s).map(|v| format!("v{v}")).collect()).collect(),
        actions: vec![ActionDef { name: "stay".into(), transitions, rewards: vec![], effects: Default::default() }],
        default_action: Some(0),
        discount: Rational::default(),
        basis: (0..m).map(|_| ScopedFn::constant(Rational::from_integer(1.into()))).collect(),
    };
    fmdp::model::FactoredMdp::new(def).unwrap()
}

/// Every permutation of `0..n`.
pub fn permutations(n: usize) -> Vec<Vec<usize>> {
    fn go(prefix: &mut Vec<usize>, rest: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if rest.is_empty() {
            out.push(prefix.clone());
            return;
        }
        for k in 0..rest.len() {
            let v = rest.remove(k);
            prefix.push(v);
            go(prefix, rest, out);
            prefix.pop();
            rest.insert(k, v);
        }
    }
    let mut out = Vec::new();
    go(&mut Vec::new(), &mut (0..n).collect(), &mut out);
    out
}

/// Every single-entry perturbation of `cert` by `±delta`.
pub fn perturbations(cert: &fmdp::lp::Certificate, delta: &Rational) -> Vec<fmdp::lp::Certificate> {
    use fmdp::lp::Certificate;
    let bump = |v: &[Rational]| -> Vec<Vec<Rational>> {
        let mut out = Vec::with_capacity(2 * v.len());
        for k in 0..v.len() {
            for sign in [1i64, -1] {
                let mut p = v.to_vec();
                p[k] += delta * Rational::from_integer(sign.into());
                out.push(p);
            }
        }
        out
    };
    match cert {
        Certificate::Optimal { primal, dual } => bump(primal)
            .into_iter()
            .map(|p| Certificate::Optimal { primal: p, dual: dual.clone() })
            .chain(bump(dual).into_iter().map(|d| Certificate::Optimal { primal: primal.clone(), dual: d }))
            .collect(),
        Certificate::Infeasible { farkas } => {
            bump(farkas).into_iter().map(|f| Certificate::Infeasible { farkas: f }).collect()
        }
        Certificate::Unbounded { point, ray } => bump(point)
            .into_iter()
            .map(|p| Certificate::Unbounded { point: p, ray: ray.clone() })
            .chain(bump(ray).into_iter().map(|r| Certificate::Unbounded { point: point.clone(), ray: r }))
            .collect(),
    }
}

pub fn reference_check(std: &StdLp, cert: &fmdp::lp::Certificate) -> bool {
    use fmdp::lp::Certificate;
    match cert {
        Certificate::Optimal { primal, dual } => reference_optimal(std, primal, dual),
        Certificate::Infeasible { farkas } => reference_infeasible(std, farkas),
        Certificate::Unbounded { point, ray } => reference_unbounded(std, point, ray),
    }
}

pub fn kind_of(cert: &fmdp::lp::Certificate) -> LpKind {
    use fmdp::lp::Certificate;
    match cert {
        Certificate::Optimal { .. } => LpKind::Optimal,
        Certificate::Infeasible { .. } => LpKind::Infeasible,
        Certificate::Unbounded { .. } => LpKind::Unbounded,
    }
}

/// `min phi` of a factored LP: `Some(φ)` when optimal, `None` when unbounded.
pub fn solve_phi(lp: &fmdp::lp::Lp) -> Option<Rational> {
    use fmdp::lp::{solve_lp, to_standard_form, Certificate, LpVar};
    let std = to_standard_form(lp);
    match solve_lp(&std).unwrap() {
        Certificate::Optimal { primal, .. } => {
            let vars = lp.variables();
            Some(primal[vars.binary_search(&LpVar::Phi).unwrap()].clone())
        }
        Certificate::Unbounded { .. } => None,
        Certificate::Infeasible { .. } => panic!("a min-phi LP is always feasible"),
    }
}
