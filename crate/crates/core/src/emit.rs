//! LaTeX and JSON emitters, plus the JSON reader that closes the
//! round trip. JSON objects are built on `serde_json`'s default ordered
//! map, so emission is byte-deterministic.

use num::{One, Signed};
use serde_json::{json, Value};

use crate::diffpoly::{DiffPoly, Monomial};
use crate::error::{Error, Result};
use crate::jet::JetVar;
use crate::liesym::{InvExpr, Invariant, Kind, Provenance};
use crate::ratfunc::RatFunc;
use crate::Rat;

fn latex_var(v: &JetVar) -> String {
    let jet = |base: String, k: u32| -> String {
        match k {
            0 => base,
            1 => format!("{base}'"),
            2 => format!("{base}''"),
            _ => format!("{base}^{{({k})}}"),
        }
    };
    match v {
        JetVar::Indep => "x".into(),
        JetVar::Z => "z".into(),
        JetVar::Param(s) => {
            if s.len() > 1 {
                let (head, tail) = s.split_at(1);
                if tail.chars().all(|c| c.is_ascii_digit()) {
                    return format!("{head}_{tail}");
                }
                format!("\\{s}")
            } else {
                s.clone()
            }
        }
        JetVar::Coef(j, k) => jet(format!("a_{j}"), *k),
        JetVar::CompCoef(j, k) => jet(format!("\\bar{{a}}_{j}"), *k),
        JetVar::XiJet(k) => jet("\\xi".into(), *k),
        JetVar::EtaJet(k) => jet("\\eta".into(), *k),
    }
}

fn latex_rat(c: &Rat) -> String {
    if c.denom().is_one() {
        format!("{}", c.numer())
    } else {
        let mag = c.abs();
        let sign = if c.is_negative() { "-" } else { "" };
        format!("{sign}\\frac{{{}}}{{{}}}", mag.numer(), mag.denom())
    }
}

/// LaTeX form of a polynomial in the paper's display conventions.
pub fn poly_to_latex(p: &DiffPoly) -> String {
    if p.is_zero() {
        return "0".into();
    }
    let mut out = String::new();
    for (i, (m, c)) in p.terms().enumerate() {
        let neg = c.is_negative();
        let mag = c.abs();
        if i == 0 {
            if neg {
                out.push('-');
            }
        } else {
            out.push_str(if neg { " - " } else { " + " });
        }
        if m.is_one() {
            out.push_str(&latex_rat(&mag));
        } else {
            if !mag.is_one() {
                out.push_str(&latex_rat(&mag));
                out.push(' ');
            }
            let vars: Vec<(JetVar, u32)> =
                m.iter().cloned().collect::<Vec<_>>().into_iter().rev().collect();
            for (k, (v, e)) in vars.iter().enumerate() {
                if k > 0 {
                    out.push(' ');
                }
                out.push_str(&latex_var(v));
                if *e > 1 {
                    out.push_str(&format!("^{{{e}}}"));
                }
            }
        }
    }
    out
}

pub fn rat_to_latex(r: &RatFunc) -> String {
    if r.is_polynomial() {
        poly_to_latex(r.num())
    } else {
        format!(
            "\\frac{{{}}}{{{}}}",
            poly_to_latex(r.num()),
            poly_to_latex(r.den())
        )
    }
}

fn rat_pair(c: &Rat) -> Value {
    json!([c.numer().to_string(), c.denom().to_string()])
}

/// JSON form of a polynomial:
/// `{"terms":[{"coeff":["num","den"],"vars":[["a3",1],["a3'",2]]}]}`.
pub fn poly_to_json(p: &DiffPoly) -> Value {
    let terms: Vec<Value> = p
        .terms()
        .map(|(m, c)| {
            let vars: Vec<Value> = m
                .iter()
                .map(|(v, e)| json!([v.to_string(), e]))
                .collect();
            json!({ "coeff": rat_pair(c), "vars": vars })
        })
        .collect();
    json!({ "terms": terms })
}

pub fn rat_to_json(r: &RatFunc) -> Value {
    json!({ "den": poly_to_json(r.den()), "num": poly_to_json(r.num()) })
}

pub fn invariant_to_json(inv: &Invariant) -> Value {
    json!({
        "expr": rat_to_json(&inv.expr.as_rat()),
        "index": rat_pair(&inv.index),
        "kind": match inv.kind { Kind::Relative => "relative", Kind::Absolute => "absolute" },
        "name": inv.name,
        "order": inv.order,
        "provenance": match inv.provenance {
            Provenance::Printed => "printed",
            Provenance::Ansatz => "ansatz",
            Provenance::Sequence => "sequence",
            Provenance::Quotient => "quotient",
        },
        "weight": inv.weight,
    })
}

/// Parse a variable spelling produced by the text emitter.
pub fn parse_var_name(name: &str) -> Result<JetVar> {
    let err = || Error::Parse {
        offset: 0,
        msg: format!("bad variable name {name:?}"),
    };
    let split_jet = |rest: &str| -> Result<(String, u32)> {
        if let Some(base) = rest.strip_suffix("''") {
            Ok((base.to_string(), 2))
        } else if let Some(base) = rest.strip_suffix('\'') {
            Ok((base.to_string(), 1))
        } else if let Some(open) = rest.find("^(") {
            let base = &rest[..open];
            let inner = rest[open + 2..].strip_suffix(')').ok_or_else(err)?;
            Ok((base.to_string(), inner.parse().map_err(|_| err())?))
        } else {
            Ok((rest.to_string(), 0))
        }
    };
    match name {
        "x" => return Ok(JetVar::Indep),
        "z" => return Ok(JetVar::Z),
        _ => {}
    }
    let (base, k) = split_jet(name)?;
    if base == "xi" {
        return Ok(JetVar::XiJet(k));
    }
    if base == "eta" {
        return Ok(JetVar::EtaJet(k));
    }
    if let Some(j) = base.strip_prefix("ab") {
        return Ok(JetVar::CompCoef(j.parse().map_err(|_| err())?, k));
    }
    if let Some(j) = base.strip_prefix('a') {
        if j.chars().all(|c| c.is_ascii_digit()) && !j.is_empty() {
            return Ok(JetVar::Coef(j.parse().map_err(|_| err())?, k));
        }
    }
    if k == 0 && base.chars().next().is_some_and(|c| c.is_ascii_alphabetic()) {
        return Ok(JetVar::param(&base));
    }
    Err(err())
}

fn rat_from_pair(v: &Value) -> Result<Rat> {
    let err = || Error::Parse {
        offset: 0,
        msg: "bad rational pair".into(),
    };
    let arr = v.as_array().ok_or_else(err)?;
    if arr.len() != 2 {
        return Err(err());
    }
    let n: num::BigInt = arr[0].as_str().ok_or_else(err)?.parse().map_err(|_| err())?;
    let d: num::BigInt = arr[1].as_str().ok_or_else(err)?.parse().map_err(|_| err())?;
    Ok(Rat::new(n, d))
}

pub fn poly_from_json(v: &Value) -> Result<DiffPoly> {
    let err = |msg: &str| Error::Parse {
        offset: 0,
        msg: msg.to_string(),
    };
    let terms = v
        .get("terms")
        .and_then(|t| t.as_array())
        .ok_or_else(|| err("missing terms"))?;
    let mut pairs = Vec::new();
    for t in terms {
        let coeff = rat_from_pair(t.get("coeff").ok_or_else(|| err("missing coeff"))?)?;
        let vars = t
            .get("vars")
            .and_then(|x| x.as_array())
            .ok_or_else(|| err("missing vars"))?;
        let mut mono = Vec::new();
        for pair in vars {
            let arr = pair.as_array().ok_or_else(|| err("bad var pair"))?;
            let name = arr[0].as_str().ok_or_else(|| err("bad var name"))?;
            let e = arr[1].as_u64().ok_or_else(|| err("bad exponent"))? as u32;
            mono.push((parse_var_name(name)?, e));
        }
        pairs.push((Monomial::from_pairs(mono), coeff));
    }
    Ok(DiffPoly::from_terms(pairs))
}

pub fn rat_from_json(v: &Value) -> Result<RatFunc> {
    let err = |msg: &str| Error::Parse {
        offset: 0,
        msg: msg.to_string(),
    };
    let num = poly_from_json(v.get("num").ok_or_else(|| err("missing num"))?)?;
    let den = poly_from_json(v.get("den").ok_or_else(|| err("missing den"))?)?;
    RatFunc::new(num, den)
}

pub fn invariant_from_json(v: &Value) -> Result<Invariant> {
    let err = |msg: &str| Error::Parse {
        offset: 0,
        msg: msg.to_string(),
    };
    let name = v
        .get("name")
        .and_then(|x| x.as_str())
        .ok_or_else(|| err("missing name"))?;
    let kind = match v.get("kind").and_then(|x| x.as_str()) {
        Some("relative") => Kind::Relative,
        Some("absolute") => Kind::Absolute,
        _ => return Err(err("bad kind")),
    };
    let index = rat_from_pair(v.get("index").ok_or_else(|| err("missing index"))?)?;
    let weight = match v.get("weight") {
        Some(Value::Null) | None => None,
        Some(w) => Some(w.as_i64().ok_or_else(|| err("bad weight"))?),
    };
    let order = v
        .get("order")
        .and_then(|x| x.as_u64())
        .ok_or_else(|| err("missing order"))? as u32;
    let provenance = match v.get("provenance").and_then(|x| x.as_str()) {
        Some("printed") => Provenance::Printed,
        Some("ansatz") => Provenance::Ansatz,
        Some("sequence") => Provenance::Sequence,
        Some("quotient") => Provenance::Quotient,
        _ => return Err(err("bad provenance")),
    };
    let rat = rat_from_json(v.get("expr").ok_or_else(|| err("missing expr"))?)?;
    let expr = if rat.is_polynomial() {
        InvExpr::Poly(rat.num().clone())
    } else {
        InvExpr::Rat(rat)
    };
    Ok(Invariant {
        name: name.to_string(),
        expr,
        kind,
        index,
        weight,
        order,
        provenance,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::parse;
    use crate::halphen::Catalog;

    #[test]
    fn latex_spellings() {
        let p = parse("3*a5*a3 - a4^2").unwrap();
        assert_eq!(poly_to_latex(&p), "3 a_5 a_3 - a_4^{2}");
        let q = parse("a3'' - 1/2*a3^(3)").unwrap();
        assert_eq!(poly_to_latex(&q), "-\\frac{1}{2} a_3^{(3)} + a_3''");
    }

    #[test]
    fn json_roundtrip_is_byte_identical() {
        let cat = Catalog::standard();
        for inv in &cat.entries {
            let v = invariant_to_json(inv);
            let text = serde_json::to_string(&v).unwrap();
            let back = invariant_from_json(&serde_json::from_str(&text).unwrap()).unwrap();
            let again = serde_json::to_string(&invariant_to_json(&back)).unwrap();
            assert_eq!(text, again, "round trip drifted for {}", inv.name);
        }
    }

    #[test]
    fn var_names_roundtrip() {
        for v in [
            JetVar::Indep,
            JetVar::Z,
            JetVar::param("k2"),
            JetVar::Coef(3, 0),
            JetVar::Coef(3, 1),
            JetVar::Coef(4, 2),
            JetVar::Coef(5, 3),
            JetVar::CompCoef(3, 2),
            JetVar::XiJet(1),
            JetVar::EtaJet(4),
        ] {
            assert_eq!(parse_var_name(&v.to_string()).unwrap(), v);
        }
    }
}
