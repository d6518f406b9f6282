//! Loading a model from JSON, and what validation reports for a broken one.
//!
//! ```bash
//! cargo run --example model_file
//! ```

use fmdp::api::{api, ApiConfig};
use fmdp::model_file::{parse_definition, parse_mdp, to_json};
use fmdp::num::format_rational;
use fmdp::Error;

/// One pump that fails with probability 1/5 unless serviced.
const PUMP: &str = r#"{
  "n": 1,
  "domains": [["ok", "failed"]],
  "actions": [
    { "name": "wait",
      "transitions": [ { "scope": [0], "table": [["4/5", "1/5"], [0, 1]] } ],
      "rewards": [ { "scope": [0], "table": [1, 0] } ] },
    { "name": "service",
      "transitions": [ { "scope": [], "table": [[1, 0]] } ],
      "rewards": [ { "scope": [0], "table": [1, 0] } ] }
  ],
  "default": "wait",
  "effects": { "service": [0] },
  "discount": "0.9",
  "basis": [ { "scope": [], "table": [1] }, { "scope": [0], "table": [1, 0] } ]
}"#;

fn main() -> fmdp::Result<()> {
    let mdp = parse_mdp(PUMP)?;
    let result = api(&mdp, &ApiConfig::default())?;
    let w: Vec<String> = result.w.0.iter().map(format_rational).collect();
    println!("weights {} after {} iterations", w.join(" "), result.iterations.len());
    print!("{}", result.pol.to_text(&mdp));

    // Round trip through the writer.
    let again = parse_definition(&to_json(mdp.definition()))?;
    assert_eq!(&again, mdp.definition());

    // Service claims no effects but changes the pump: the validator names the assumption.
    let broken = PUMP.replace(r#""effects": { "service": [0] }"#, r#""effects": {}"#);
    match parse_mdp(&broken) {
        Err(Error::Validation(vs)) => vs.iter().for_each(|v| println!("rejected: {v}")),
        other => println!("unexpected: {other:?}"),
    }
    Ok(())
}
