//! Generative machinery for invariant sequences: the phi/chi
//! constructions, indefinite sequences of relative and absolute
//! invariants, the printed order-5 catalog, power products for the
//! common-index sets, fundamental sets, and invariant differentiation.



use num::{One, Zero};

use crate::diffpoly::{Deriv, DiffPoly, Weight};
use crate::error::{Error, Result};
use crate::expr::parse;
use crate::jet::JetVar;
use crate::liesym::{
    check_absolute, jacobian_rank, prolong, Invariant, Kind, Provenance,
    Verdict, VectorField,
};
use crate::ratfunc::RatFunc;
use crate::{int, Rat, DEFAULT_MAX_JET_ORDER};

/// Formal product of named invariants with rational exponents; the index
/// is always available symbolically, the expansion only when every
/// exponent is an integer.
#[derive(Clone, Debug)]
pub struct PowerProduct {
    pub factors: Vec<(String, Rat)>,
    pub index: Rat,
}

impl PowerProduct {
    pub fn new(factors: Vec<(String, Rat)>, catalog: &Catalog) -> Result<PowerProduct> {
        let mut index = Rat::zero();
        for (name, e) in &factors {
            let inv = catalog.get(name)?;
            index += &inv.index * e;
        }
        Ok(PowerProduct { factors, index })
    }

    pub fn is_integral(&self) -> bool {
        self.factors.iter().all(|(_, e)| e.denom().is_one())
    }

    /// Expand to a rational function when every exponent is integral.
    pub fn expand(&self, catalog: &Catalog) -> Result<Option<RatFunc>> {
        if !self.is_integral() {
            return Ok(None);
        }
        let mut out = RatFunc::one();
        for (name, e) in &self.factors {
            let inv = catalog.get(name)?;
            let e: i64 = e.numer().try_into().map_err(|_| {
                Error::Domain(format!("exponent of {name} too large to expand"))
            })?;
            out = out.mul(&inv.expr.as_rat().pow(e)?);
        }
        Ok(Some(out))
    }
}

fn relative_poly<'a>(inv: &'a Invariant) -> Result<(&'a DiffPoly, i64)> {
    let p = inv
        .expr
        .as_poly()
        .ok_or_else(|| Error::NotRelative(inv.name.clone()))?;
    if inv.kind != Kind::Relative {
        return Err(Error::NotRelative(inv.name.clone()));
    }
    let m: i64 = inv
        .index
        .numer()
        .try_into()
        .map_err(|_| Error::NotRelative(inv.name.clone()))?;
    if !inv.index.denom().is_one() {
        return Err(Error::NotRelative(inv.name.clone()));
    }
    Ok((p, m))
}

/// `phi(R1, R2) = m1 R1 R2' - m2 R2 R1'`, a relative invariant of index
/// `m1 + m2 + 1`.
pub fn phi(r1: &Invariant, r2: &Invariant) -> Result<Invariant> {
    let (p1, m1) = relative_poly(r1)?;
    let (p2, m2) = relative_poly(r2)?;
    let expr = p1
        .mul(&p2.derivative(Deriv::X)?)
        .scale(&int(m1))
        .sub(&p2.mul(&p1.derivative(Deriv::X)?).scale(&int(m2)));
    Ok(Invariant::relative(
        &format!("phi({},{})", r1.name, r2.name),
        expr,
        m1 + m2 + 1,
        Provenance::Sequence,
    ))
}

/// `chi(R1, R2) = phi(R1, R2)^m2 / R2^(m1 + m2 + 1)`, an absolute
/// invariant.
pub fn chi(r1: &Invariant, r2: &Invariant) -> Result<Invariant> {
    let (_, m1) = relative_poly(r1)?;
    let (p2, m2) = relative_poly(r2)?;
    let ph = phi(r1, r2)?;
    let num = ph.expr.as_poly().unwrap().pow(m2 as u32);
    let den = p2.pow((m1 + m2 + 1) as u32);
    Ok(Invariant::absolute(
        &format!("chi({},{})", r1.name, r2.name),
        RatFunc::new(num, den)?,
        Provenance::Sequence,
    ))
}

/// `chi_0(R1, R2) = R1^m2 / R2^m1`.
pub fn chi0(r1: &Invariant, r2: &Invariant) -> Result<Invariant> {
    let (p1, m1) = relative_poly(r1)?;
    let (p2, m2) = relative_poly(r2)?;
    Ok(Invariant::absolute(
        &format!("chi0({},{})", r1.name, r2.name),
        RatFunc::new(p1.pow(m2 as u32), p2.pow(m1 as u32))?,
        Provenance::Sequence,
    ))
}

/// Index of the `q`-th iterate: `theta(q) = m + q (sigma + 1)`.
pub fn theta(m: i64, sigma: i64, q: u32) -> i64 {
    m + (q as i64) * (sigma + 1)
}

/// The indefinite sequence `phi_q(S) = theta(q-1) phi^(q-1)(S) S0'
/// - sigma S0 (phi^(q-1)(S))'` of relative invariants, `q = 1..steps`.
/// The undetermined coefficient printed as `r` is taken to be `sigma`.
pub fn phi_seq(
    seed: &Invariant,
    steps: u32,
    s0: &Invariant,
    max_jet: u32,
) -> Result<Vec<Invariant>> {
    let (_, m) = relative_poly(seed)?;
    let (p0, sigma) = relative_poly(s0)?;
    let s0p = p0.derivative(Deriv::X)?;
    let mut out = Vec::new();
    let mut cur = seed.expr.as_poly().unwrap().clone();
    let base_order = seed.order;
    for q in 1..=steps {
        if base_order + q > max_jet {
            return Err(Error::JetOrderLimit {
                requested: base_order + q,
                max: max_jet,
            });
        }
        let next = cur
            .mul(&s0p)
            .scale(&int(theta(m, sigma, q - 1)))
            .sub(&p0.mul(&cur.derivative(Deriv::X)?).scale(&int(sigma)));
        let inv = Invariant::relative(
            &format!("phi_{q}({})", seed.name),
            next.clone(),
            theta(m, sigma, q),
            Provenance::Sequence,
        );
        out.push(inv);
        cur = next;
    }
    Ok(out)
}

/// The companion absolute sequence `chi_q(S) = phi_q(S)^sigma / S0^theta(q)`.
pub fn chi_seq(
    seed: &Invariant,
    steps: u32,
    s0: &Invariant,
    max_jet: u32,
) -> Result<Vec<Invariant>> {
    let (_, m) = relative_poly(seed)?;
    let (p0, sigma) = relative_poly(s0)?;
    let phis = phi_seq(seed, steps, s0, max_jet)?;
    let mut out = Vec::new();
    for (q, ph) in phis.iter().enumerate() {
        let q = q as u32 + 1;
        let t = theta(m, sigma, q);
        let num = ph.expr.as_poly().unwrap().pow(sigma as u32);
        let den = p0.pow(t as u32);
        out.push(Invariant::absolute(
            &format!("chi_{q}({})", seed.name),
            RatFunc::new(num, den)?,
            Provenance::Sequence,
        ));
    }
    Ok(out)
}

/// Absolute quotient of two relative invariants: exponents are the
/// gcd-reduced pair `(index of the other)`, so the index cancels exactly.
pub fn quotient_absolute(s1: &Invariant, s2: &Invariant) -> Result<(Invariant, PowerProduct)> {
    let (p1, m1) = relative_poly(s1)?;
    let (p2, m2) = relative_poly(s2)?;
    let g = num::integer::gcd(m1, m2).max(1);
    let (e1, e2) = (m2 / g, m1 / g);
    let expr = RatFunc::new(p1.pow(e1 as u32), p2.pow(e2 as u32))?;
    let pp = PowerProduct {
        factors: vec![
            (s1.name.clone(), int(e1)),
            (s2.name.clone(), int(-e2)),
        ],
        index: Rat::zero(),
    };
    Ok((
        Invariant::absolute(
            &format!("{}^{}/{}^{}", s1.name, e1, s2.name, e2),
            expr,
            Provenance::Quotient,
        ),
        pp,
    ))
}

/// The printed order-5 catalog: `S0, R0, S1, S2, S3` and `I0..I9`,
/// verbatim as typeset (including the defective `I9`).
pub struct Catalog {
    pub entries: Vec<Invariant>,
}

fn printed_relative(name: &str, text: &str, index: i64) -> Invariant {
    Invariant::relative(name, parse(text).unwrap(), index, Provenance::Printed)
}

fn printed_absolute(name: &str, num: &str, den: &str) -> Invariant {
    let expr = RatFunc::new(parse(num).unwrap(), parse(den).unwrap()).unwrap();
    Invariant::absolute(name, expr, Provenance::Printed)
}

pub const RELATIVE_NAMES: [&str; 5] = ["S0", "R0", "S1", "S2", "S3"];
pub const ABSOLUTE_NAMES: [&str; 10] =
    ["I0", "I1", "I2", "I3", "I4", "I5", "I6", "I7", "I8", "I9"];

pub const S0_TEXT: &str = "a3";
pub const R0_TEXT: &str = "3*a5*a3 - a4^2";
pub const S1_TEXT: &str = "-a4 + a3'";
pub const S2_TEXT: &str = "6*a3*a4' - a4^2 - 6*a4*a3'";
pub const S3_TEXT: &str = "5*a4^3 + 9*a3^2*a5' - 3*a4*a3*(5*a5 + 2*a4') + 3*a4^2*a3'";
pub const I6_NUM_TEXT: &str = "(-18*a4^4 - 18*a4^3*a3' + 18*a3^3*a5'' - 6*a4*a3^2*(11*a5' + 2*a4'') + a4^2*a3*(55*a5 + 40*a4' + 6*a3''))^3";
pub const I8_NUM_TEXT: &str = "(-2*a4^4 - 12*a4^3*a3' + 3*a4^2*a3*(5*a4' + 3*a3'') + 2*a3^3*a4^(3) - 2*a4*a3^2*(5*a4'' + a3^(3)))^3";
/// The literal typeset `(S_91 + S_92)^3`, including the stray cube and
/// misplaced parenthesis inside `S_92`.
pub const I9_NUM_TEXT: &str = "(35*a4^5 + 45*a4^4*a3' - 10*a4^3*a3*(11*a5 + 11*a4' + 3*a3'') + 18*a3^4*a5^(3) - 12*a4*a3^3*(9*a5'' + a4^(3) + 6*a4^2*a3^2*(33*a5' + 11*a4'' + a3^(3))^3))^3";

/// Monomial support of the bracket-corrected reading of the `I9`
/// numerator (the repair hint documented in the report):
/// `S_92 = -12 a4 a3^3 (9 a5'' + a4''') + 6 a4^2 a3^2 (33 a5' + 11 a4'' + a3''')`.
pub const I9_SUPPORT_TEXTS: [&str; 11] = [
    "a4^5",
    "a4^4*a3'",
    "a4^3*a3*a5",
    "a4^3*a3*a4'",
    "a4^3*a3*a3''",
    "a3^4*a5^(3)",
    "a4*a3^3*a5''",
    "a4*a3^3*a4^(3)",
    "a4^2*a3^2*a5'",
    "a4^2*a3^2*a4''",
    "a4^2*a3^2*a3^(3)",
];

/// Literal typeset source of each catalog entry, for report fidelity.
pub fn printed_source(name: &str) -> Option<String> {
    let rel = |t: &str| Some(t.to_string());
    let abs = |num: &str, den: &str| Some(format!("({num})/({den})"));
    match name {
        "S0" => rel(S0_TEXT),
        "R0" => rel(R0_TEXT),
        "S1" => rel(S1_TEXT),
        "S2" => rel(S2_TEXT),
        "S3" => rel(S3_TEXT),
        "I0" => abs(&format!("({R0_TEXT})^3"), "27*a3^8"),
        "I1" => abs(&format!("({S1_TEXT})^3"), "a3^4"),
        "I2" => abs(&format!("({S2_TEXT})^3"), "216*a3^8"),
        "I3" => abs(S3_TEXT, "9*a3^4"),
        "I4" => abs("(7*a4^2 - 14*a4*a3' + 6*a3*a3'')^3", "216*a3^8"),
        "I5" => abs(
            "4*a4^3 + 24*a4^2*a3' + 9*a3^2*a4'' - 9*a4*a3*(3*a4' + a3'')",
            "9*a3^4",
        ),
        "I6" => abs(I6_NUM_TEXT, "5832*a3^16"),
        "I7" => abs(
            "-14*a4^3 + 42*a4^2*a3' - 36*a4*a3*a3'' + 9*a3^2*a3^(3)",
            "9*a3^4",
        ),
        "I8" => abs(I8_NUM_TEXT, "8*a3^16"),
        "I9" => abs(I9_NUM_TEXT, "5832*a3^20"),
        _ => None,
    }
}

impl Catalog {
    pub fn standard() -> Catalog {
        let entries = vec![
            printed_relative("S0", S0_TEXT, 3),
            printed_relative("R0", R0_TEXT, 8),
            printed_relative("S1", S1_TEXT, 4),
            printed_relative("S2", S2_TEXT, 8),
            printed_relative("S3", S3_TEXT, 12),
            printed_absolute("I0", &format!("({R0_TEXT})^3"), "27*a3^8"),
            printed_absolute("I1", &format!("({S1_TEXT})^3"), "a3^4"),
            printed_absolute("I2", &format!("({S2_TEXT})^3"), "216*a3^8"),
            printed_absolute("I3", S3_TEXT, "9*a3^4"),
            printed_absolute("I4", "(7*a4^2 - 14*a4*a3' + 6*a3*a3'')^3", "216*a3^8"),
            printed_absolute(
                "I5",
                "4*a4^3 + 24*a4^2*a3' + 9*a3^2*a4'' - 9*a4*a3*(3*a4' + a3'')",
                "9*a3^4",
            ),
            printed_absolute("I6", I6_NUM_TEXT, "5832*a3^16"),
            printed_absolute(
                "I7",
                "-14*a4^3 + 42*a4^2*a3' - 36*a4*a3*a3'' + 9*a3^2*a3^(3)",
                "9*a3^4",
            ),
            printed_absolute("I8", I8_NUM_TEXT, "8*a3^16"),
            printed_absolute("I9", I9_NUM_TEXT, "5832*a3^20"),
        ];
        Catalog { entries }
    }

    pub fn get(&self, name: &str) -> Result<&Invariant> {
        self.entries
            .iter()
            .find(|e| e.name == name)
            .ok_or_else(|| Error::UnknownName(name.to_string()))
    }

    /// Structural check at load: isobaric numerator/denominator weights of
    /// every entry. The defective printed `I9` fails this check.
    pub fn structural_weights(&self) -> Vec<(String, Weight, Weight)> {
        self.entries
            .iter()
            .map(|e| {
                let r = e.expr.as_rat();
                (e.name.clone(), r.num().weight(), r.den().weight())
            })
            .collect()
    }
}

/// The fundamental set `I0, chi_k(S1), chi_k(S2), chi_k(S3)` for
/// `k = 0..p-1`: `3p + 1` checker-verified absolute invariants whose
/// functional independence is validated by an exact Jacobian rank.
pub fn fundamental_set(
    p: u32,
    v: &VectorField,
    seed: u64,
    trials: u32,
    max_jet: u32,
) -> Result<Vec<Invariant>> {
    if p < 1 {
        return Err(Error::Domain("fundamental_set requires p >= 1".into()));
    }
    let cat = Catalog::standard();
    let s0 = cat.get("S0")?;
    let mut out = vec![cat.get("I0")?.clone()];
    for name in ["S1", "S2", "S3"] {
        let sj = cat.get(name)?;
        out.push(chi0(sj, s0)?);
        if p >= 2 {
            out.extend(chi_seq(sj, p - 1, s0, max_jet)?);
        }
    }
    for inv in &out {
        let verdict = check_absolute(&inv.expr.as_rat(), v)?;
        if let Verdict::Residual(r) = verdict {
            return Err(Error::VerificationFailed(format!(
                "fundamental set member {} has residual {r}",
                inv.name
            )));
        }
    }
    let vars: Vec<JetVar> = {
        let mut vs = vec![JetVar::Indep];
        for j in [3u32, 4, 5] {
            for k in 0..=p {
                vs.push(JetVar::Coef(j, k));
            }
        }
        vs
    };
    let rats: Vec<RatFunc> = out.iter().map(|i| i.expr.as_rat()).collect();
    let rank = jacobian_rank(&rats, &vars, trials, seed)?;
    if rank != out.len() {
        return Err(Error::VerificationFailed(format!(
            "fundamental set of order {p} has Jacobian rank {rank}, expected {}",
            out.len()
        )));
    }
    Ok(out)
}

/// Verified entry of the order-two relative family, with its index.
#[derive(Clone, Debug)]
pub struct RelativeSetEntry {
    pub invariant: Invariant,
    pub verdict: Verdict,
}

/// The relative invariants of order up to two:
/// `phi_k(S_j, S0)` for `j = 1..3, k = 0..1` and
/// `phi_k(R0, S0), phi_k(S0, R0)` for `k = 0..2`, all checker-verified;
/// plus, when `m` is given, the common-index power-product set
/// `{S0^(m/sigma), S_j^(m/m_j)}`.
pub fn relative_set(
    m: Option<Rat>,
    v: &VectorField,
    mu: &DiffPoly,
    max_jet: u32,
) -> Result<(Vec<RelativeSetEntry>, Vec<PowerProduct>)> {
    let cat = Catalog::standard();
    let s0 = cat.get("S0")?.clone();
    let r0 = cat.get("R0")?.clone();
    let mut seeds: Vec<(Invariant, Invariant, u32)> = Vec::new();
    for name in ["S1", "S2", "S3"] {
        seeds.push((cat.get(name)?.clone(), s0.clone(), 1));
    }
    seeds.push((r0.clone(), s0.clone(), 2));
    seeds.push((s0.clone(), r0.clone(), 2));

    let mut entries = Vec::new();
    for (seed, second, kmax) in seeds {
        // k = 0 is the seed itself
        let verdict = seed.check(v, mu)?;
        entries.push(RelativeSetEntry {
            invariant: seed.clone(),
            verdict,
        });
        let mut cur = seed.clone();
        for _k in 1..=kmax {
            cur = phi(&cur, &second)?;
            if cur.order > max_jet {
                return Err(Error::JetOrderLimit {
                    requested: cur.order,
                    max: max_jet,
                });
            }
            let verdict = cur.check(v, mu)?;
            entries.push(RelativeSetEntry {
                invariant: cur.clone(),
                verdict,
            });
        }
    }

    let mut products = Vec::new();
    if let Some(m) = m {
        for name in ["S0", "S1", "S2", "S3"] {
            let inv = cat.get(name)?;
            products.push(PowerProduct {
                factors: vec![(name.to_string(), &m / &inv.index)],
                index: m.clone(),
            });
        }
    }
    Ok((entries, products))
}

/// Report of an invariant differentiation `zeta D_x` with
/// `zeta = 1/I0'`.
#[derive(Clone, Debug)]
pub struct InvariantDerivativeReport {
    pub result: Invariant,
    pub verdict: Verdict,
    /// Exact comparison against the printed closed form for `I1* =
    /// zeta D_x I1` (with the undetermined `r` read as `sigma`); `None`
    /// when the pair is not `(I1, I0)`.
    pub closed_form_confirmed: Option<bool>,
}

/// `D_x(I) / D_x(I0)`, checker-verified absolute. For the catalog pair
/// `(I1, I0)` the printed closed form is compared exactly.
pub fn invariant_derivative(
    i: &Invariant,
    i0: &Invariant,
    v: &VectorField,
) -> Result<InvariantDerivativeReport> {
    let di = i.expr.as_rat().derivative(Deriv::X)?;
    let di0 = i0.expr.as_rat().derivative(Deriv::X)?;
    if di0.is_zero() {
        return Err(Error::Domain(format!(
            "{} has zero derivative; not an invariant differential operator",
            i0.name
        )));
    }
    let result = di.div(&di0)?;
    let verdict = check_absolute(&result, v)?;

    let closed_form_confirmed = if i.name == "I1" && i0.name == "I0" {
        let cat = Catalog::standard();
        let s0 = cat.get("S0")?.expr.as_poly().unwrap().clone();
        let s1 = cat.get("S1")?.expr.as_poly().unwrap().clone();
        let r0 = cat.get("R0")?.expr.as_poly().unwrap().clone();
        let (m, k, sigma) = (int(4), int(8), int(3));
        let s0p = s0.derivative(Deriv::X)?;
        let num_lin = s1
            .mul(&s0p)
            .scale(&m)
            .sub(&s0.mul(&s1.derivative(Deriv::X)?).scale(&sigma));
        let den_lin = r0
            .mul(&s0p)
            .scale(&k)
            .sub(&s0.mul(&r0.derivative(Deriv::X)?).scale(&sigma));
        // (I1 / I0) (R0 / S1) (num_lin / den_lin)
        let closed = i
            .expr
            .as_rat()
            .div(&i0.expr.as_rat())?
            .mul(&RatFunc::new(r0, s1)?)
            .mul(&RatFunc::new(num_lin, den_lin)?);
        Some(result.equals(&closed))
    } else {
        None
    };

    Ok(InvariantDerivativeReport {
        result: Invariant::absolute(
            &format!("({})*/({})", i.name, i0.name),
            result,
            Provenance::Sequence,
        ),
        verdict,
        closed_form_confirmed,
    })
}

/// Check that an absolute invariant is a ratio of isobaric polynomials of
/// equal weight.
pub fn equal_weight_ratio(r: &RatFunc) -> bool {
    match (r.num().weight(), r.den().weight()) {
        (Weight::Isobaric(a), Weight::Isobaric(b)) => a == b,
        _ => false,
    }
}

/// Verify `X F + m mu F = 0` and additionally that applying the prolonged
/// field commutes as expected; convenience wrapper used by reports.
pub fn verify_relative_entry(
    inv: &Invariant,
    v: &VectorField,
    mu: &DiffPoly,
) -> Result<Verdict> {
    inv.check(v, mu)
}

/// Apply a prolonged field to an invariant's expression (used by tests).
pub fn annihilates(inv: &Invariant, v: &VectorField) -> Result<bool> {
    let r = inv.expr.as_rat();
    let pv = prolong(v, r.max_order(), DEFAULT_MAX_JET_ORDER)?;
    Ok(pv.apply_rat(&r)?.is_zero())
}

#[cfg(test)]
mod tests {
    use std::collections::BTreeMap;

    use super::*;
    use crate::liesym::multiplier;
    use crate::transform::arbiter_generator_order5;

    fn arbiter() -> (VectorField, DiffPoly) {
        let v = arbiter_generator_order5();
        let mu = multiplier(&v).unwrap();
        (v, mu)
    }

    #[test]
    fn catalog_structural_weights() {
        let cat = Catalog::standard();
        let weights: BTreeMap<String, (Weight, Weight)> = cat
            .structural_weights()
            .into_iter()
            .map(|(n, a, b)| (n, (a, b)))
            .collect();
        assert_eq!(weights["S0"].0, Weight::Isobaric(3));
        assert_eq!(weights["R0"].0, Weight::Isobaric(8));
        assert_eq!(weights["S1"].0, Weight::Isobaric(4));
        assert_eq!(weights["S2"].0, Weight::Isobaric(8));
        assert_eq!(weights["S3"].0, Weight::Isobaric(12));
        assert_eq!(weights["I4"].0, Weight::Isobaric(24));
        assert_eq!(weights["I5"].0, Weight::Isobaric(12));
        assert_eq!(weights["I7"].0, Weight::Isobaric(12));
        assert_eq!(weights["I6"].0, Weight::Isobaric(48));
        assert_eq!(weights["I8"].0, Weight::Isobaric(48));
        // the literal printed I9 is not isobaric
        assert_eq!(weights["I9"].0, Weight::NotIsobaric);
        assert_eq!(weights["I9"].1, Weight::Isobaric(60));
    }

    #[test]
    fn phi_of_equal_arguments_vanishes() {
        let cat = Catalog::standard();
        let r0 = cat.get("R0").unwrap();
        let p = phi(r0, r0).unwrap();
        assert!(p.expr.as_poly().unwrap().is_zero());
    }

    #[test]
    fn phi_s1_matches_the_printed_display_up_to_sign() {
        let cat = Catalog::standard();
        let s1 = cat.get("S1").unwrap();
        let s0 = cat.get("S0").unwrap();
        let p = phi(s1, s0).unwrap();
        // printed: 4 (a4 - a3') a3' + 3 a3 (-a4' + a3'')
        let printed = parse("4*(a4 - a3')*a3' + 3*a3*(-a4' + a3'')").unwrap();
        assert_eq!(p.expr.as_poly().unwrap(), &printed.neg());
        assert_eq!(p.index, int(8));
    }

    #[test]
    fn phi2_s1_matches_the_printed_display_up_to_sign() {
        let cat = Catalog::standard();
        let s1 = cat.get("S1").unwrap();
        let s0 = cat.get("S0").unwrap();
        let seq = phi_seq(s1, 2, s0, 12).unwrap();
        let printed = parse(
            "32*(a4 - a3')*a3'^2 - 3*a3*(9*a4'*a3' + (4*a4 - 13*a3')*a3'') + 9*a3^2*(a4'' - a3^(3))",
        )
        .unwrap();
        assert_eq!(seq[1].expr.as_poly().unwrap(), &printed.neg());
        assert_eq!(seq[0].index, int(8));
        assert_eq!(seq[1].index, int(12));
    }

    #[test]
    fn phi_and_chi_verify_under_the_arbiter() {
        let (v, mu) = arbiter();
        let cat = Catalog::standard();
        let s1 = cat.get("S1").unwrap();
        let s0 = cat.get("S0").unwrap();
        let p = phi(s1, s0).unwrap();
        assert!(p.check(&v, &mu).unwrap().is_verified());
        let c = chi(s1, s0).unwrap();
        assert!(c.check(&v, &mu).unwrap().is_verified());
        // chi(S1, S0) = phi^3 / a3^8
        let expect = RatFunc::new(
            p.expr.as_poly().unwrap().pow(3),
            parse("a3^8").unwrap(),
        )
        .unwrap();
        assert!(c.expr.as_rat().equals(&expect));
    }

    #[test]
    fn chi0_reproduces_i1() {
        let cat = Catalog::standard();
        let c = chi0(cat.get("S1").unwrap(), cat.get("S0").unwrap()).unwrap();
        assert!(c.expr.as_rat().equals(&cat.get("I1").unwrap().expr.as_rat()));
    }

    #[test]
    fn theta_values() {
        assert_eq!(theta(4, 3, 1), 8);
        assert_eq!(theta(4, 3, 2), 12);
    }

    #[test]
    fn sequence_orders_grow_by_one() {
        let cat = Catalog::standard();
        let s1 = cat.get("S1").unwrap();
        let s0 = cat.get("S0").unwrap();
        let seq = phi_seq(s1, 3, s0, 12).unwrap();
        for (q, inv) in seq.iter().enumerate() {
            assert_eq!(inv.order, s1.order + q as u32 + 1);
        }
        let chis = chi_seq(s1, 3, s0, 12).unwrap();
        for (q, inv) in chis.iter().enumerate() {
            assert_eq!(inv.order, 1 + q as u32 + 1);
        }
    }

    #[test]
    fn sequence_respects_jet_cap() {
        let cat = Catalog::standard();
        let s1 = cat.get("S1").unwrap();
        let s0 = cat.get("S0").unwrap();
        assert!(matches!(
            phi_seq(s1, 5, s0, 4),
            Err(Error::JetOrderLimit { .. })
        ));
    }

    #[test]
    fn quotient_absolute_examples() {
        let cat = Catalog::standard();
        let (i1, pp) = quotient_absolute(cat.get("S1").unwrap(), cat.get("S0").unwrap()).unwrap();
        assert!(i1
            .expr
            .as_rat()
            .equals(&cat.get("I1").unwrap().expr.as_rat()));
        assert!(pp.index.is_zero());
        // R0^3 / S0^8 = 27 I0
        let (i0, _) = quotient_absolute(cat.get("R0").unwrap(), cat.get("S0").unwrap()).unwrap();
        assert!(i0
            .expr
            .as_rat()
            .equals(&cat.get("I0").unwrap().expr.as_rat().scale(&int(27))));
        // same invariant twice expands to 1
        let (one, _) = quotient_absolute(cat.get("R0").unwrap(), cat.get("R0").unwrap()).unwrap();
        assert!(one.expr.as_rat().equals(&RatFunc::one()));
    }

    #[test]
    fn power_products_expand_only_when_integral() {
        let cat = Catalog::standard();
        let pp = PowerProduct::new(vec![("S0".into(), crate::rat(8, 3))], &cat).unwrap();
        assert_eq!(pp.index, int(8));
        assert!(!pp.is_integral());
        assert!(pp.expand(&cat).unwrap().is_none());
        let pp2 = PowerProduct::new(vec![("S0".into(), int(2))], &cat).unwrap();
        assert!(pp2.expand(&cat).unwrap().is_some());
    }

    #[test]
    fn fundamental_set_sizes_and_rank() {
        let (v, _) = arbiter();
        for p in [1u32, 2] {
            let set = fundamental_set(p, &v, 0, 8, 12).unwrap();
            assert_eq!(set.len(), (3 * p + 1) as usize);
        }
    }

    #[test]
    fn relative_set_indices() {
        let (v, mu) = arbiter();
        let (entries, products) = relative_set(Some(int(24)), &v, &mu, 12).unwrap();
        // phi_1(R0, S0) and phi_1(S0, R0) both have index 8 + 3 + 1 = 12
        let idx: BTreeMap<String, Rat> = entries
            .iter()
            .map(|e| (e.invariant.name.clone(), e.invariant.index.clone()))
            .collect();
        assert_eq!(idx["phi(R0,S0)"], int(12));
        assert_eq!(idx["phi(S0,R0)"], int(12));
        for e in &entries {
            assert!(
                e.verdict.is_verified(),
                "{} failed verification",
                e.invariant.name
            );
        }
        // every entry has order <= 2
        assert!(entries.iter().all(|e| e.invariant.order <= 2));
        // common-index set at m = 24: exponents 8, 6, 3, 2
        let exps: Vec<Rat> = products.iter().map(|p| p.factors[0].1.clone()).collect();
        assert_eq!(exps, vec![int(8), int(6), int(3), int(2)]);
    }

    #[test]
    fn invariant_derivative_identity() {
        let (v, _) = arbiter();
        let cat = Catalog::standard();
        let i0 = cat.get("I0").unwrap();
        let rep = invariant_derivative(i0, i0, &v).unwrap();
        assert!(rep.result.expr.as_rat().equals(&RatFunc::one()));
        assert!(rep.verdict.is_verified());
    }

    #[test]
    fn invariant_derivative_of_i1_confirms_the_closed_form() {
        let (v, _) = arbiter();
        let cat = Catalog::standard();
        let rep =
            invariant_derivative(cat.get("I1").unwrap(), cat.get("I0").unwrap(), &v).unwrap();
        assert!(rep.verdict.is_verified());
        assert_eq!(rep.closed_form_confirmed, Some(true));
        assert_eq!(rep.result.expr.max_order(), 2);
        assert!(equal_weight_ratio(&rep.result.expr.as_rat()));
    }

    #[test]
    fn homogeneity_of_phi() {
        let cat = Catalog::standard();
        let s1 = cat.get("S1").unwrap();
        let s0 = cat.get("S0").unwrap();
        let mut scaled = s1.clone();
        scaled.expr = crate::liesym::InvExpr::Poly(s1.expr.as_poly().unwrap().scale(&crate::rat(7, 2)));
        let a = phi(&scaled, s0).unwrap();
        let b = phi(s1, s0).unwrap();
        assert_eq!(
            a.expr.as_poly().unwrap(),
            &b.expr.as_poly().unwrap().scale(&crate::rat(7, 2))
        );
    }
}
