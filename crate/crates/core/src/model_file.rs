//! JSON model files.
//!
//! ```json
//! {
//!   "n": 1,
//!   "domains": [["W", "B"]],
//!   "actions": [
//!     { "name": "noop",
//!       "transitions": [ { "scope": [0], "table": [["9/10", "1/10"], ["1/10", "9/10"]] } ],
//!       "rewards": [ { "scope": [0], "table": [1, 0] } ] }
//!   ],
//!   "default": "noop",
//!   "effects": { "noop": [] },
//!   "discount": "9/10",
//!   "basis": [ { "scope": [], "table": [1] } ]
//! }
//! ```
//!
//! Tables are flat in mixed-radix order over the scope, lowest variable most significant.
//! Rationals are `"p/q"` strings, integers, or decimal literals read as exact fractions.

use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::error::{Error, Result, Violation};
use crate::model::{ActionDef, Distribution, FactoredMdp, MdpDefinition};
use crate::num::{format_rational, parse_rational, Rational};
use crate::scoped::ScopedFn;

#[derive(Debug, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
struct RawModel {
    n: usize,
    domains: Vec<Vec<String>>,
    actions: Vec<RawAction>,
    #[serde(default)]
    default: Option<String>,
    #[serde(default)]
    effects: BTreeMap<String, Vec<usize>>,
    discount: Value,
    basis: Vec<RawFn>,
}

#[derive(Debug, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
struct RawAction {
    name: String,
    transitions: Vec<RawFn>,
    #[serde(default)]
    rewards: Vec<RawFn>,
}

#[derive(Debug, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
struct RawFn {
    scope: Vec<usize>,
    table: Vec<Value>,
}

fn rational_at(v: &Value, path: &str) -> Result<Rational> {
    let text = match v {
        Value::String(s) => s.clone(),
        Value::Number(n) => n.to_string(),
        other => return Err(Error::parse(path, format!("expected a rational, found {other}"))),
    };
    parse_rational(&text).map_err(|e| Error::parse(path, e))
}

struct Builder<'a> {
    sizes: &'a [usize],
    violations: Vec<Violation>,
}

impl Builder<'_> {
    /// Builds a scoped function, or records a violation when the scope or table shape is
    /// inconsistent with the declared domains.
    fn scoped<V>(
        &mut self,
        raw: &RawFn,
        path: &str,
        names: (&'static str, &'static str),
        mut cell: impl FnMut(&Value, &str) -> Result<V>,
    ) -> Result<Option<ScopedFn<V>>> {
        if raw.scope.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::parse(format!("{path}.scope"), "scope must be strictly increasing"));
        }
        if let Some(&v) = raw.scope.iter().find(|&&v| v >= self.sizes.len()) {
            self.violations
                .push(Violation::new(names.0, format!("{path} mentions variable {v} outside 0..{}", self.sizes.len())));
            return Ok(None);
        }
        let radices: Vec<usize> = raw.scope.iter().map(|&v| self.sizes[v]).collect();
        let expected: usize = radices.iter().product();
        if raw.table.len() != expected {
            self.violations.push(Violation::new(
                names.1,
                format!("{path} has {} table entries, its scope needs {expected}", raw.table.len()),
            ));
            return Ok(None);
        }
        let table = raw
            .table
            .iter()
            .enumerate()
            .map(|(k, v)| cell(v, &format!("{path}.table[{k}]")))
            .collect::<Result<Vec<V>>>()?;
        Ok(Some(ScopedFn::new(raw.scope.clone(), radices, table).expect("shape checked")))
    }
}

/// Parses a model document without validating its structural assumptions.
pub fn parse_definition(text: &str) -> Result<MdpDefinition> {
    let raw: RawModel =
        serde_json::from_str(text).map_err(|e| Error::parse(format!("line {} column {}", e.line(), e.column()), e))?;
    if raw.n != raw.domains.len() {
        return Err(Error::parse("n", format!("n = {} but {} domains are listed", raw.n, raw.domains.len())));
    }
    let sizes: Vec<usize> = raw.domains.iter().map(Vec::len).collect();
    let mut b = Builder { sizes: &sizes, violations: Vec::new() };
    let mut actions = Vec::new();
    for (k, ra) in raw.actions.iter().enumerate() {
        let mut transitions = Vec::new();
        for (i, t) in ra.transitions.iter().enumerate() {
            let path = format!("actions[{k}].transitions[{i}]");
            let f = b.scoped(t, &path, ("transitions_scope_dims", "transitions_scope"), |v, p| {
                let row = v.as_array().ok_or_else(|| Error::parse(p, "expected a distribution array"))?;
                row.iter()
                    .enumerate()
                    .map(|(j, q)| rational_at(q, &format!("{p}[{j}]")))
                    .collect::<Result<Distribution>>()
            })?;
            if let Some(f) = f {
                transitions.push(f);
            }
        }
        let mut rewards = Vec::new();
        for (i, r) in ra.rewards.iter().enumerate() {
            let path = format!("actions[{k}].rewards[{i}]");
            if let Some(f) = b.scoped(r, &path, ("reward_scope_dims", "reward_scope"), rational_at)? {
                rewards.push(f);
            }
        }
        let effects = raw.effects.get(&ra.name).map(|e| e.iter().copied().collect()).unwrap_or_default();
        actions.push(ActionDef { name: ra.name.clone(), transitions, rewards, effects });
    }
    for name in raw.effects.keys() {
        if !raw.actions.iter().any(|a| &a.name == name) {
            return Err(Error::parse(format!("effects.{name}"), "effects listed for an unknown action"));
        }
    }
    let mut basis = Vec::new();
    for (i, h) in raw.basis.iter().enumerate() {
        if let Some(f) = b.scoped(h, &format!("basis[{i}]"), ("h_scope_dims", "h_scope"), rational_at)? {
            basis.push(f);
        }
    }
    let default_action = match &raw.default {
        Some(name) => match raw.actions.iter().position(|a| &a.name == name) {
            Some(k) => Some(k),
            None => return Err(Error::parse("default", format!("default action `{name}` is not declared"))),
        },
        None => None,
    };
    let discount = rational_at(&raw.discount, "discount")?;
    if !b.violations.is_empty() {
        return Err(Error::Validation(b.violations));
    }
    Ok(MdpDefinition { domains: raw.domains, actions, default_action, discount, basis })
}

/// Parses and validates a model document.
pub fn parse_mdp(text: &str) -> Result<FactoredMdp> {
    FactoredMdp::new(parse_definition(text)?)
}

pub fn load_mdp(path: impl AsRef<Path>) -> Result<FactoredMdp> {
    parse_mdp(&std::fs::read_to_string(path)?)
}

fn fn_json<V>(f: &ScopedFn<V>, cell: impl Fn(&V) -> Value) -> Value {
    json!({ "scope": f.scope(), "table": f.table().iter().map(cell).collect::<Vec<_>>() })
}

fn rat_json(r: &Rational) -> Value {
    Value::String(format_rational(r))
}

/// Serializes a model definition to the JSON document format.
pub fn to_json(def: &MdpDefinition) -> String {
    let actions: Vec<Value> = def
        .actions
        .iter()
        .map(|a| {
            json!({
                "name": a.name,
                "transitions": a.transitions.iter().map(|t| fn_json(t, |d| Value::Array(d.iter().map(rat_json).collect()))).collect::<Vec<_>>(),
                "rewards": a.rewards.iter().map(|r| fn_json(r, rat_json)).collect::<Vec<_>>(),
            })
        })
        .collect();
    let effects: BTreeMap<&str, Vec<usize>> =
        def.actions.iter().map(|a| (a.name.as_str(), a.effects.iter().copied().collect())).collect();
    let mut doc = json!({
        "n": def.n(),
        "domains": def.domains,
        "actions": actions,
        "effects": effects,
        "discount": rat_json(&def.discount),
        "basis": def.basis.iter().map(|h| fn_json(h, rat_json)).collect::<Vec<_>>(),
    });
    if let Some(d) = def.default_action.and_then(|d| def.actions.get(d)) {
        doc["default"] = Value::String(d.name.clone());
    }
    serde_json::to_string_pretty(&doc).expect("json values serialize")
}

pub fn save_mdp(def: &MdpDefinition, path: impl AsRef<Path>) -> Result<()> {
    std::fs::write(path, to_json(def))?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::ring_definition;

    #[test]
    fn ring_round_trips() {
        let def = ring_definition(2).unwrap();
        let text = to_json(&def);
        let back = parse_definition(&text).unwrap();
        assert_eq!(back, def);
        assert!(parse_mdp(&text).is_ok());
    }

    #[test]
    fn zero_denominator_is_a_parse_error() {
        let text = to_json(&ring_definition(1).unwrap()).replacen("\"9/10\"", "\"9/0\"", 1);
        match parse_definition(&text) {
            Err(Error::Parse { location, .. }) => assert!(location.contains("table"), "{location}"),
            other => panic!("expected a parse error, got {other:?}"),
        }
    }

    #[test]
    fn missing_default_fails_validation() {
        let mut doc: Value = serde_json::from_str(&to_json(&ring_definition(1).unwrap())).unwrap();
        doc.as_object_mut().unwrap().remove("default");
        match parse_mdp(&doc.to_string()) {
            Err(Error::Validation(v)) => assert!(v.iter().any(|x| x.assumption == "default_act")),
            other => panic!("expected a validation error, got {other:?}"),
        }
    }

    #[test]
    fn decimals_and_integers_are_exact() {
        let mut doc: Value = serde_json::from_str(&to_json(&ring_definition(1).unwrap())).unwrap();
        doc["discount"] = json!(0.9);
        let def = parse_definition(&doc.to_string()).unwrap();
        assert_eq!(def.discount, crate::num::ratio(9, 10));
    }

    #[test]
    fn out_of_range_scope_is_named() {
        let mut doc: Value = serde_json::from_str(&to_json(&ring_definition(1).unwrap())).unwrap();
        doc["basis"][1]["scope"] = json!([4]);
        match parse_mdp(&doc.to_string()) {
            Err(Error::Validation(v)) => assert_eq!(v[0].assumption, "h_scope_dims"),
            other => panic!("expected a validation error, got {other:?}"),
        }
    }

    #[test]
    fn syntax_errors_report_position() {
        match parse_definition("{\"n\": 1,\n \"domains\": [") {
            Err(Error::Parse { location, .. }) => assert!(location.starts_with("line 2")),
            other => panic!("expected a parse error, got {other:?}"),
        }
    }
}
