//! Deterministic catalog report: every printed entry is checked under
//! both the printed generator and the independently induced (arbiter)
//! generator; entries the arbiter rejects are repaired by the ansatz
//! solver over the same (weight, order) space, restricted to the
//! documented support. Nothing is altered silently - both verdicts and
//! all residual certificates are part of the report.

use num::Zero;
use serde_json::{json, Value};

use crate::diffpoly::{DiffPoly, Weight};
use crate::emit;
use crate::error::Result;
use crate::expr::parse;
use crate::halphen::{Catalog, I9_SUPPORT_TEXTS};
use crate::liesym::{
    builtin_generator_order5, multiplier, solve_ansatz, InvExpr, Invariant, Kind,
    Provenance, Verdict, VectorField,
};
use crate::ratfunc::RatFunc;
use crate::transform::arbiter_generator_order5;
use crate::{Rat, DEFAULT_MAX_JET_ORDER};

/// Per-entry record of the catalog report.
#[derive(Clone, Debug)]
pub struct EntryReport {
    pub name: String,
    pub printed_expr: String,
    pub kind: Kind,
    pub claimed_index: Rat,
    pub numerator_weight: Weight,
    pub order: u32,
    /// Verdict under the arbiter (induced) generator - the headline.
    pub verdict: Verdict,
    /// Verdict under the printed generator of Eq-style `X^0`.
    pub verdict_printed_generator: Verdict,
    /// Repaired entry when the arbiter rejects it, together with the
    /// ansatz generator it was rebuilt from.
    pub repair: Option<Invariant>,
    pub repair_generator: Option<DiffPoly>,
    /// For verified relative entries: the scalar `c` with
    /// `printed = c * canonical ansatz generator`.
    pub matches_ansatz_up_to: Option<Rat>,
    pub provenance: Provenance,
}

#[derive(Clone, Debug)]
pub struct CatalogReport {
    pub entries: Vec<EntryReport>,
    /// Componentwise difference `printed X^0 - induced X^0` per slot,
    /// empty when the two generators agree.
    pub generator_discrepancies: Vec<(u32, DiffPoly)>,
    pub verified_under_arbiter: usize,
    pub verified_under_printed: usize,
}

/// The two generators the report compares.
pub struct Generators {
    pub printed: VectorField,
    pub printed_mu: DiffPoly,
    pub arbiter: VectorField,
    pub arbiter_mu: DiffPoly,
}

impl Generators {
    pub fn standard() -> Result<Generators> {
        let printed = builtin_generator_order5();
        let printed_mu = multiplier(&printed)?;
        let arbiter = arbiter_generator_order5();
        let arbiter_mu = multiplier(&arbiter)?;
        Ok(Generators {
            printed,
            printed_mu,
            arbiter,
            arbiter_mu,
        })
    }
}

fn check_entry(inv: &Invariant, v: &VectorField, mu: &DiffPoly) -> Result<Verdict> {
    inv.check(v, mu)
}

/// Numerator weight and jet order of the ansatz space an entry lives in.
fn entry_space(inv: &Invariant) -> Option<(u32, u32)> {
    match (&inv.kind, &inv.expr) {
        (Kind::Relative, InvExpr::Poly(p)) => match p.weight() {
            Weight::Isobaric(w) if w > 0 => Some((w as u32, p.max_order())),
            _ => None,
        },
        _ => None,
    }
}

/// Repair a rejected entry inside the documented monomial support.
fn repair_entry(
    name: &str,
    gens: &Generators,
) -> Result<Option<(Invariant, DiffPoly)>> {
    if name != "I9" {
        return Ok(None);
    }
    // The (weight 20, order 3) space restricted to the support of the
    // bracket-corrected printed reading.
    let monos: Vec<_> = I9_SUPPORT_TEXTS
        .iter()
        .map(|t| parse(t).unwrap().leading().unwrap().0.clone())
        .collect();
    let basis = solve_ansatz(
        &monos,
        &crate::int(20),
        &gens.arbiter,
        &gens.arbiter_mu,
        DEFAULT_MAX_JET_ORDER,
    )?;
    if basis.len() != 1 {
        return Ok(None);
    }
    let generator = basis[0].clone();
    let num = generator.pow(3);
    let den = parse("5832*a3^20").unwrap();
    Ok(Some((
        Invariant::absolute("I9", RatFunc::new(num, den)?, Provenance::Ansatz),
        generator,
    )))
}

/// Scalar `c` such that `printed = c * generator`, when the two span the
/// same line.
fn scalar_match(printed: &DiffPoly, generator: &DiffPoly) -> Option<Rat> {
    if printed.is_zero() || generator.is_zero() {
        return None;
    }
    let (lm, lc) = generator.leading().unwrap();
    let pc = printed.coeff_of(lm);
    if pc.is_zero() {
        return None;
    }
    let c = pc / lc;
    if printed.sub(&generator.scale(&c)).is_zero() {
        Some(c)
    } else {
        None
    }
}

/// Build the full catalog report under both generators.
pub fn catalog_report(gens: &Generators) -> Result<CatalogReport> {
    let cat = Catalog::standard();
    let mut entries = Vec::new();
    let mut ok_arb = 0usize;
    let mut ok_pr = 0usize;
    for inv in &cat.entries {
        let verdict = check_entry(inv, &gens.arbiter, &gens.arbiter_mu)?;
        let verdict_printed = check_entry(inv, &gens.printed, &gens.printed_mu)?;
        if verdict.is_verified() {
            ok_arb += 1;
        }
        if verdict_printed.is_verified() {
            ok_pr += 1;
        }
        let (repair, repair_generator) = if verdict.is_verified() {
            (None, None)
        } else {
            match repair_entry(&inv.name, gens)? {
                Some((inv, generator)) => (Some(inv), Some(generator)),
                None => (None, None),
            }
        };
        let matches_ansatz_up_to = if verdict.is_verified() {
            entry_space(inv).and_then(|(w, r)| {
                let basis = crate::liesym::find_relative_invariants(
                    w,
                    r,
                    &gens.arbiter,
                    &gens.arbiter_mu,
                    DEFAULT_MAX_JET_ORDER,
                )
                .ok()?;
                basis
                    .iter()
                    .find_map(|b| scalar_match(inv.expr.as_poly()?, b))
            })
        } else {
            None
        };
        let r = inv.expr.as_rat();
        entries.push(EntryReport {
            name: inv.name.clone(),
            printed_expr: crate::halphen::printed_source(&inv.name)
                .unwrap_or_else(|| match &inv.expr {
                    InvExpr::Poly(p) => p.to_string(),
                    InvExpr::Rat(r) => r.to_string(),
                }),
            kind: inv.kind,
            claimed_index: inv.index.clone(),
            numerator_weight: r.num().weight(),
            order: inv.order,
            verdict,
            verdict_printed_generator: verdict_printed,
            repair,
            repair_generator,
            matches_ansatz_up_to,
            provenance: inv.provenance,
        });
    }

    let mut discrepancies = Vec::new();
    for j in [3u32, 4, 5] {
        let d = gens.printed.phis[&j].sub(&gens.arbiter.phis[&j]);
        if !d.is_zero() {
            discrepancies.push((j, d));
        }
    }
    Ok(CatalogReport {
        entries,
        generator_discrepancies: discrepancies,
        verified_under_arbiter: ok_arb,
        verified_under_printed: ok_pr,
    })
}

fn verdict_json(v: &Verdict) -> Value {
    match v {
        Verdict::Verified => json!({ "residual": Value::Null, "verified": true }),
        Verdict::Residual(r) => {
            json!({ "residual": r.to_string(), "verified": false })
        }
    }
}

fn weight_json(w: &Weight) -> Value {
    match w {
        Weight::Isobaric(n) => json!(n),
        Weight::NotIsobaric => json!("not isobaric"),
        Weight::Undefined => json!("undefined"),
    }
}

impl CatalogReport {
    pub fn to_json(&self) -> Value {
        let entries: Vec<Value> = self
            .entries
            .iter()
            .map(|e| {
                json!({
                    "index": [e.claimed_index.numer().to_string(),
                              e.claimed_index.denom().to_string()],
                    "kind": match e.kind { Kind::Relative => "relative", Kind::Absolute => "absolute" },
                    "matches_ansatz_up_to": e.matches_ansatz_up_to.as_ref()
                        .map(|c| c.to_string()),
                    "name": e.name,
                    "numerator_weight": weight_json(&e.numerator_weight),
                    "order": e.order,
                    "printed": e.printed_expr,
                    "provenance": "printed",
                    "repair": e.repair.as_ref().map(emit::invariant_to_json),
                    "repair_generator": e.repair_generator.as_ref().map(|g| g.to_string()),
                    "verdict_induced": verdict_json(&e.verdict),
                    "verdict_printed_generator": verdict_json(&e.verdict_printed_generator),
                })
            })
            .collect();
        let disc: Vec<Value> = self
            .generator_discrepancies
            .iter()
            .map(|(j, d)| json!({ "difference": d.to_string(), "slot": j }))
            .collect();
        json!({
            "entries": entries,
            "generator_discrepancies": disc,
            "verified_under_arbiter": self.verified_under_arbiter,
            "verified_under_printed": self.verified_under_printed,
        })
    }

    pub fn to_text(&self) -> String {
        // long residual certificates are abbreviated in text output; the
        // JSON report carries them in full
        let show = |v: &Verdict| -> String {
            match v {
                Verdict::Verified => "verified".to_string(),
                Verdict::Residual(r) => {
                    let s = r.to_string();
                    if s.len() > 160 {
                        format!(
                            "rejected (residual with {} terms: {}...)",
                            r.num_terms(),
                            &s[..120]
                        )
                    } else {
                        format!("rejected (residual {s})")
                    }
                }
            }
        };
        let mut out = String::new();
        out.push_str("catalog report (order 5 canonical form)\n");
        for e in &self.entries {
            let v1 = show(&e.verdict);
            let v2 = show(&e.verdict_printed_generator);
            out.push_str(&format!(
                "{:>3}  kind={:?} index={} weight={:?} order={}\n",
                e.name, e.kind, e.claimed_index, e.numerator_weight, e.order
            ));
            out.push_str(&format!("     printed: {}\n", e.printed_expr));
            out.push_str(&format!("     induced generator: {v1}\n"));
            out.push_str(&format!("     printed generator: {v2}\n"));
            if let Some(c) = &e.matches_ansatz_up_to {
                out.push_str(&format!(
                    "     matches the canonical ansatz generator up to the scalar {c}\n"
                ));
            }
            if let Some(generator) = &e.repair_generator {
                out.push_str(&format!(
                    "     repaired from the bracket-corrected support (ansatz): \
                     generator {generator}\n     repaired {} = generator^3 / (5832*a3^20)\n",
                    e.name
                ));
            }
        }
        for (j, d) in &self.generator_discrepancies {
            out.push_str(&format!(
                "generator discrepancy at slot {j}: printed phi - induced phi = {d}\n"
            ));
        }
        out.push_str(&format!(
            "verified: {}/15 under the induced generator, {}/15 under the printed generator\n",
            self.verified_under_arbiter, self.verified_under_printed
        ));
        out
    }

    pub fn to_latex(&self) -> String {
        let mut out = String::new();
        out.push_str("\\begin{align*}\n");
        for e in &self.entries {
            let expr = match e.kind {
                Kind::Relative => emit::poly_to_latex(
                    &parse(&e.printed_expr).unwrap_or_else(|_| DiffPoly::zero()),
                ),
                Kind::Absolute => e
                    .repair
                    .as_ref()
                    .map(|r| emit::rat_to_latex(&r.expr.as_rat()))
                    .unwrap_or_else(|| e.printed_expr.clone()),
            };
            out.push_str(&format!("{} &= {expr} \\\\\n", e.name));
        }
        out.push_str("\\end{align*}\n");
        out
    }

    /// The catalog after repair: printed entries where the arbiter
    /// verifies them, repaired entries elsewhere.
    pub fn repaired_catalog(&self) -> Vec<Invariant> {
        let cat = Catalog::standard();
        self.entries
            .iter()
            .filter_map(|e| {
                if e.verdict.is_verified() {
                    cat.get(&e.name).ok().cloned()
                } else {
                    e.repair.clone()
                }
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn report_is_deterministic_and_complete() {
        let gens = Generators::standard().unwrap();
        let a = catalog_report(&gens).unwrap();
        let b = catalog_report(&gens).unwrap();
        assert_eq!(a.entries.len(), 15);
        assert_eq!(
            serde_json::to_string(&a.to_json()).unwrap(),
            serde_json::to_string(&b.to_json()).unwrap()
        );
    }

    #[test]
    fn arbiter_verifies_everything_but_the_defective_i9() {
        let gens = Generators::standard().unwrap();
        let rep = catalog_report(&gens).unwrap();
        assert_eq!(rep.verified_under_arbiter, 14);
        for e in &rep.entries {
            if e.name == "I9" {
                assert!(!e.verdict.is_verified());
                let repaired = e.repair.as_ref().expect("I9 must be repaired");
                assert_eq!(repaired.provenance, Provenance::Ansatz);
            } else {
                assert!(e.verdict.is_verified(), "{} rejected", e.name);
            }
        }
        // only S0 survives under the printed generator
        assert_eq!(rep.verified_under_printed, 1);
        // the phi_4 slot is the single generator discrepancy
        assert_eq!(rep.generator_discrepancies.len(), 1);
        assert_eq!(rep.generator_discrepancies[0].0, 4);
    }

    #[test]
    fn repaired_i9_has_the_expected_coefficients() {
        let gens = Generators::standard().unwrap();
        let rep = catalog_report(&gens).unwrap();
        let i9 = rep
            .entries
            .iter()
            .find(|e| e.name == "I9")
            .and_then(|e| e.repair.clone())
            .unwrap();
        // the inner generator, recovered from the cube root structure:
        // check against the hand-derived reading of the printed display
        let expected_inner = parse(
            "35*a4^5 + 45*a4^4*a3' - 10*a4^3*a3*(11*a5 + 11*a4' + 3*a3'') \
             + 18*a3^4*a5^(3) - 12*a4*a3^3*(9*a5'' + a4^(3)) \
             + 6*a4^2*a3^2*(33*a5' + 11*a4'' + a3^(3))",
        )
        .unwrap();
        let expected = RatFunc::new(
            expected_inner.pow(3),
            parse("5832*a3^20").unwrap(),
        )
        .unwrap();
        assert!(i9.expr.as_rat().equals(&expected));
    }
}
