//! Maximizing a sum of small functions without enumerating the joint space.
//!
//! ```bash
//! cargo run --example variable_elimination
//! ```

use fmdp::elim::{argmax_sum, explicit_max, max_sum, ElimOrder};
use fmdp::num::{int, ExtReal};
use fmdp::scoped::ScopedFn;

fn f(scope: Vec<usize>, radices: Vec<usize>, values: &[i64]) -> ScopedFn<ExtReal> {
    ScopedFn::new(scope, radices, values.iter().map(|&v| ExtReal::Finite(int(v))).collect()).unwrap()
}

fn main() -> fmdp::Result<()> {
    // A chain x0 - x1 - x2 - x3 over ternary variables.
    let sizes = [3, 3, 3, 3];
    let mut fs = vec![
        f(vec![0, 1], vec![3, 3], &[1, 0, 2, 0, 3, 1, 2, 2, 0]),
        f(vec![1, 2], vec![3, 3], &[0, 4, 1, 1, 0, 0, 2, 1, 3]),
        f(vec![2, 3], vec![3, 3], &[2, 0, 0, 1, 1, 5, 0, 3, 1]),
    ];
    // Forbid x3 = 2 outright.
    fs.push(ScopedFn::new(vec![3], vec![3], vec![ExtReal::zero(), ExtReal::zero(), ExtReal::NegInf]).unwrap());

    for (label, order) in [
        ("identity", ElimOrder::Identity),
        ("min-degree", ElimOrder::MinDegree),
        ("reversed", ElimOrder::Fixed(vec![3, 2, 1, 0])),
    ] {
        println!("{label:>10}: {}", max_sum(&sizes, &fs, &order)?);
    }
    println!("enumerated: {}", explicit_max(&sizes, &fs));

    let (value, state) = argmax_sum(&sizes, &fs, &ElimOrder::MinDegree)?;
    println!("argmax {:?} attains {}", state.expect("a finite maximum has a witness"), value);
    Ok(())
}
