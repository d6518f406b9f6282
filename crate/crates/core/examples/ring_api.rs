//! Approximate policy iteration on the ring network.
//!
//! ```bash
//! cargo run --release --example ring_api -- 4
//! ```

use fmdp::api::{api, posterior_bound, ApiConfig};
use fmdp::num::format_rational;
use fmdp::oracle::DEFAULT_STATE_LIMIT;
use fmdp::ring::make_ring;

fn main() -> fmdp::Result<()> {
    let n: usize = std::env::args().nth(1).map_or(Ok(3), |s| s.parse()).expect("ring size");
    let mdp = make_ring(n)?;
    let result = api(&mdp, &ApiConfig::default())?;

    for it in &result.iterations {
        println!(
            "t={} phi={} err={} constraints={} branches={} lp={:.3}s",
            it.t,
            format_rational(&it.phi),
            format_rational(&it.err),
            it.constraints,
            it.branches,
            it.lp_time.as_secs_f64()
        );
    }
    println!("w_eq={} err_le={} timeout={}", result.w_eq, result.err_le, result.timeout);
    let w: Vec<String> = result.w.0.iter().map(format_rational).collect();
    println!("weights: {}", w.join(" "));
    print!("{}", result.pol.to_text(&mdp));

    // The exact check needs every state, so it only runs on small rings.
    match posterior_bound(&mdp, &result, DEFAULT_STATE_LIMIT) {
        Ok(b) => println!(
            "(1-g)|v* - v_w| = {} <= 2g err = {}: {}",
            format_rational(&b.lhs),
            format_rational(&b.rhs),
            b.holds
        ),
        Err(e) => println!("bound skipped: {e}"),
    }
    Ok(())
}
