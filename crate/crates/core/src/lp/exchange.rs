//! Text formats for LPs and certificates.
//!
//! LP file:
//!
//! ```text
//! # min c^T x s.t. A x <= b, x free; dual: max -b^T y s.t. A^T y = -c, y >= 0
//! # certificate vectors index rows in file order, each eq line giving two rows (+, -)
//! vars phi w0 w1
//! min phi:1
//! le phi:-1 w0:1/2 0
//! eq w1:1 3
//! ```
//!
//! Certificate file: a kind line `optimal`, `infeasible` or `unbounded`, then labelled
//! vectors (`primal`/`dual`, `farkas`, or `point`/`ray`), each one line of rationals.

use std::collections::HashMap;
use std::fmt::Write as _;

use super::{Certificate, ConstraintKind, NamedConstraint, NamedLp};
use crate::error::{Error, Result};
use crate::num::{format_rational, parse_rational, Rational};

const HEADER: &str = "# min c^T x s.t. A x <= b, x free; dual: max -b^T y s.t. A^T y = -c, y >= 0\n\
# certificate vectors index rows in file order, each eq line giving two rows (+, -)\n";

fn term(name: &str, v: &Rational) -> String {
    format!("{name}:{}", format_rational(v))
}

pub fn write_lp(lp: &NamedLp) -> String {
    let mut out = String::from(HEADER);
    let _ = writeln!(out, "vars {}", lp.vars.join(" "));
    let obj: Vec<String> = lp.objective.iter().map(|(j, v)| term(&lp.vars[*j], v)).collect();
    let _ = writeln!(out, "min {}", obj.join(" "));
    for c in &lp.constraints {
        let kind = match c.kind {
            ConstraintKind::Le => "le",
            ConstraintKind::Eq => "eq",
        };
        let _ = write!(out, "{kind}");
        for (j, v) in &c.coeffs {
            let _ = write!(out, " {}", term(&lp.vars[*j], v));
        }
        let _ = writeln!(out, " {}", format_rational(&c.rhs));
    }
    out
}

fn parse_terms<'a>(
    tokens: impl Iterator<Item = &'a str>,
    index: &HashMap<&str, usize>,
    loc: &str,
) -> Result<Vec<(usize, Rational)>> {
    tokens
        .map(|tok| {
            let (name, coef) =
                tok.rsplit_once(':').ok_or_else(|| Error::parse(loc, format!("expected var:coef, found `{tok}`")))?;
            let j = *index.get(name).ok_or_else(|| Error::parse(loc, format!("undeclared variable `{name}`")))?;
            Ok((j, parse_rational(coef).map_err(|e| Error::parse(loc, e))?))
        })
        .collect()
}

pub fn parse_lp(text: &str) -> Result<NamedLp> {
    let mut lp = NamedLp::default();
    let mut index: HashMap<&str, usize> = HashMap::new();
    let mut seen_vars = false;
    let mut seen_min = false;
    for (k, line) in text.lines().enumerate() {
        let loc = format!("line {}", k + 1);
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let mut tokens = line.split_whitespace();
        let head = tokens.next().unwrap();
        match head {
            "vars" => {
                if seen_vars {
                    return Err(Error::parse(loc, "duplicate vars line"));
                }
                seen_vars = true;
                for name in tokens {
                    if index.insert(name, lp.vars.len()).is_some() {
                        return Err(Error::parse(&loc, format!("variable `{name}` declared twice")));
                    }
                    lp.vars.push(name.to_string());
                }
            }
            _ if !seen_vars => return Err(Error::parse(loc, "the vars line must come first")),
            "min" => {
                if seen_min {
                    return Err(Error::parse(loc, "duplicate objective"));
                }
                seen_min = true;
                lp.objective = parse_terms(tokens, &index, &loc)?;
            }
            "le" | "eq" => {
                let rest: Vec<&str> = tokens.collect();
                let Some((rhs, terms)) = rest.split_last() else {
                    return Err(Error::parse(loc, "missing right-hand side"));
                };
                lp.constraints.push(NamedConstraint {
                    kind: if head == "le" { ConstraintKind::Le } else { ConstraintKind::Eq },
                    coeffs: parse_terms(terms.iter().copied(), &index, &loc)?,
                    rhs: parse_rational(rhs).map_err(|e| Error::parse(&loc, e))?,
                });
            }
            other => return Err(Error::parse(loc, format!("unknown line kind `{other}`"))),
        }
    }
    if !seen_vars {
        return Err(Error::parse("end of file", "missing vars line"));
    }
    Ok(lp)
}

fn vector_line(out: &mut String, label: &str, v: &[Rational]) {
    let _ = write!(out, "{label}");
    for x in v {
        let _ = write!(out, " {}", format_rational(x));
    }
    out.push('\n');
}

pub fn write_certificate(cert: &Certificate) -> String {
    let mut out = String::from(HEADER);
    let _ = writeln!(out, "{}", cert.kind());
    match cert {
        Certificate::Optimal { primal, dual } => {
            vector_line(&mut out, "primal", primal);
            vector_line(&mut out, "dual", dual);
        }
        Certificate::Infeasible { farkas } => vector_line(&mut out, "farkas", farkas),
        Certificate::Unbounded { point, ray } => {
            vector_line(&mut out, "point", point);
            vector_line(&mut out, "ray", ray);
        }
    }
    out
}

pub fn parse_certificate(text: &str) -> Result<Certificate> {
    let mut kind: Option<String> = None;
    let mut vectors: HashMap<String, Vec<Rational>> = HashMap::new();
    for (k, line) in text.lines().enumerate() {
        let loc = format!("line {}", k + 1);
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let mut tokens = line.split_whitespace();
        let head = tokens.next().unwrap();
        if kind.is_none() {
            if tokens.next().is_some() {
                return Err(Error::parse(loc, "the kind line takes no values"));
            }
            kind = Some(head.to_string());
            continue;
        }
        let values =
            tokens.map(|t| parse_rational(t).map_err(|e| Error::parse(&loc, e))).collect::<Result<Vec<_>>>()?;
        if vectors.insert(head.to_string(), values).is_some() {
            return Err(Error::parse(loc, format!("duplicate vector `{head}`")));
        }
    }
    let mut take = |label: &str| {
        vectors.remove(label).ok_or_else(|| Error::parse("end of file", format!("missing `{label}` vector")))
    };
    let cert = match kind.as_deref() {
        Some("optimal") => Certificate::Optimal { primal: take("primal")?, dual: take("dual")? },
        Some("infeasible") => Certificate::Infeasible { farkas: take("farkas")? },
        Some("unbounded") => Certificate::Unbounded { point: take("point")?, ray: take("ray")? },
        Some(other) => return Err(Error::parse("kind line", format!("unknown certificate kind `{other}`"))),
        None => return Err(Error::parse("end of file", "empty certificate")),
    };
    if let Some(extra) = vectors.keys().next() {
        return Err(Error::parse("certificate", format!("unexpected vector `{extra}`")));
    }
    Ok(cert)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::num::{int, ratio};

    #[test]
    fn lp_round_trip() {
        let lp = NamedLp {
            vars: vec!["phi".into(), "w0".into()],
            objective: vec![(0, int(1))],
            constraints: vec![
                NamedConstraint { kind: ConstraintKind::Le, coeffs: vec![(0, int(-1)), (1, ratio(1, 2))], rhs: int(0) },
                NamedConstraint { kind: ConstraintKind::Eq, coeffs: vec![(1, int(1))], rhs: ratio(-7, 3) },
            ],
        };
        let text = write_lp(&lp);
        assert!(text.contains("le phi:-1 w0:1/2 0"));
        assert_eq!(parse_lp(&text).unwrap(), lp);
    }

    #[test]
    fn lp_parse_errors() {
        assert!(matches!(parse_lp("min x:1\n"), Err(Error::Parse { .. })));
        assert!(parse_lp("vars x\nle y:1 0\n").is_err());
        assert!(parse_lp("vars x\nle x:1/0 0\n").is_err());
        assert!(parse_lp("vars x\nge x:1 0\n").is_err());
    }

    #[test]
    fn certificate_round_trip() {
        for cert in [
            Certificate::Optimal { primal: vec![int(3)], dual: vec![ratio(1, 2), int(0)] },
            Certificate::Infeasible { farkas: vec![int(1), int(1)] },
            Certificate::Unbounded { point: vec![int(3)], ray: vec![int(-1)] },
        ] {
            assert_eq!(parse_certificate(&write_certificate(&cert)).unwrap(), cert);
        }
        assert!(parse_certificate("optimal\nprimal 1\n").is_err());
        assert!(parse_certificate("bogus\n").is_err());
    }
}
