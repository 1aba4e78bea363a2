//! Finite structure-preserving transformations `x = xi(z), y = eta(z) w`
//! of `y^(n) + sum_j a_j y^(n-j) = 0`: symbolic transformed coefficients,
//! the Schwarzian derivative, the transformation-law verifier over the
//! symbolic Mobius family, and the infinitesimal generator induced by
//! first-order expansion of the finite action.
//!
//! Composition `a_j o xi` is kept inside the differential ring through the
//! `CompCoef` variables and their chain rule `D_z ab_j^(k) = xi' ab_j^(k+1)`;
//! no closed-form substitution of `xi` into `a_j` is ever attempted.

use std::collections::BTreeMap;

use num::One;

use crate::diffpoly::{Deriv, DiffPoly, Monomial};
use crate::error::{Error, Result};
use crate::jet::JetVar;
use crate::liesym::VectorField;
use crate::ratfunc::RatFunc;
use crate::{int, rat, Rat};

/// How the scaling function `eta` enters the computation.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum EtaMode {
    /// Keep `eta` as its own jet family.
    Symbolic,
    /// Eliminate `eta` early via the canonical-form constraint
    /// `eta = (xi')^((n-1)/2)`; supported for odd `n` (the constant factor
    /// cancels in the monic normalization and is dropped).
    CanonicalPower,
}

/// Transformed equation `w^(n) + A_1 w^(n-1) + ... + A_n w = 0`: each
/// `A_j` is a rational function of the jets of `xi` (and `eta`) and the
/// composed coefficients `ab_j`.
#[derive(Clone, Debug)]
pub struct TransformedEquation {
    pub n: u32,
    pub a: BTreeMap<u32, RatFunc>,
}

fn xi_prime() -> RatFunc {
    RatFunc::var(JetVar::XiJet(1))
}

/// Coefficients `C[k][i]` with `y^(k) = sum_i C[k][i] w^(i)` where
/// `y = eta w` and `d/dx = (1/xi') d/dz`.
fn derivative_table(n: u32, eta: EtaMode) -> Result<Vec<Vec<RatFunc>>> {
    let eta0 = match eta {
        EtaMode::Symbolic => RatFunc::var(JetVar::EtaJet(0)),
        EtaMode::CanonicalPower => {
            if n % 2 == 0 {
                return Err(Error::UnsupportedOrder(n));
            }
            xi_prime().pow(((n - 1) / 2) as i64)?
        }
    };
    let inv_xi = xi_prime().recip()?;
    let mut table: Vec<Vec<RatFunc>> = vec![vec![eta0]];
    for k in 1..=n {
        let prev = &table[(k - 1) as usize];
        let mut row = Vec::with_capacity(k as usize + 1);
        for i in 0..=k as usize {
            let mut c = RatFunc::zero();
            if i < prev.len() {
                c = c.add(&prev[i].derivative(Deriv::Z)?);
            }
            if i > 0 {
                c = c.add(&prev[i - 1]);
            }
            row.push(c.mul(&inv_xi));
        }
        table.push(row);
    }
    Ok(table)
}

/// Symbolic transformed coefficients of the monic equation with the given
/// coefficient slots. Supported for `n <= 6`.
pub fn transform_coefficients(
    n: u32,
    slots: &[u32],
    eta: EtaMode,
) -> Result<TransformedEquation> {
    if n == 0 || n > 6 {
        return Err(Error::UnsupportedOrder(n));
    }
    let table = derivative_table(n, eta)?;
    // B_i = coefficient of w^(i) across y^(n) + sum_j ab_j y^(n-j)
    let mut b: Vec<RatFunc> = table[n as usize].clone();
    for j in slots {
        if *j == 0 || *j > n {
            return Err(Error::Domain(format!("slot {j} out of range for order {n}")));
        }
        let abj = RatFunc::var(JetVar::CompCoef(*j, 0));
        let row = &table[(n - j) as usize];
        for (i, c) in row.iter().enumerate() {
            b[i] = b[i].add(&abj.mul(c));
        }
    }
    let lead = b[n as usize].clone();
    if lead.is_zero() {
        return Err(Error::DivisionByZero);
    }
    let mut a = BTreeMap::new();
    for j in 1..=n {
        a.insert(j, b[(n - j) as usize].div(&lead)?);
    }
    Ok(TransformedEquation { n, a })
}

/// The Schwarzian derivative `(xi' xi''' - (3/2) xi''^2) / xi'^2` as a
/// rational function of the `xi` jets.
pub fn schwarzian_formula() -> RatFunc {
    let x1 = DiffPoly::var(JetVar::XiJet(1));
    let x2 = DiffPoly::var(JetVar::XiJet(2));
    let x3 = DiffPoly::var(JetVar::XiJet(3));
    RatFunc::new(
        x1.mul(&x3).sub(&x2.pow(2).scale(&rat(3, 2))),
        x1.pow(2),
    )
    .expect("xi' is formally nonzero")
}

/// Schwarzian derivative of a concrete function of `z`, computed by
/// differentiating it three times and substituting into the formula.
pub fn schwarzian_of(xi: &RatFunc) -> Result<RatFunc> {
    let d1 = xi.derivative(Deriv::Z)?;
    if d1.is_zero() {
        return Err(Error::DivisionByZero);
    }
    let d2 = d1.derivative(Deriv::Z)?;
    let d3 = d2.derivative(Deriv::Z)?;
    let map = BTreeMap::from([
        (JetVar::XiJet(1), d1),
        (JetVar::XiJet(2), d2),
        (JetVar::XiJet(3), d3),
    ]);
    schwarzian_formula().substitute(&map)
}

/// Jets of the Mobius map `xi = (alpha z + beta)/(gamma z + delta)` as
/// `(numerator, power of u)` pairs over the denominator `u = gamma z + delta`:
/// `xi^(k) = (-1)^(k-1) k! gamma^(k-1) (alpha delta - beta gamma) / u^(k+1)`.
fn mobius_jets(max_k: u32) -> BTreeMap<JetVar, (DiffPoly, u32)> {
    let z = DiffPoly::var(JetVar::Z);
    let alpha = DiffPoly::param("alpha");
    let beta = DiffPoly::param("beta");
    let gamma = DiffPoly::param("gamma");
    let delta = DiffPoly::param("delta");
    let det = alpha.mul(&delta).sub(&beta.mul(&gamma));
    let mut map = BTreeMap::new();
    map.insert(JetVar::XiJet(0), (alpha.mul(&z).add(&beta), 1));
    let mut factorial = Rat::one();
    for k in 1..=max_k {
        factorial *= int(k as i64);
        let sign = if k % 2 == 0 { int(-1) } else { int(1) };
        let num = gamma.pow(k - 1).mul(&det).scale(&(sign * &factorial));
        map.insert(JetVar::XiJet(k), (num, k + 1));
    }
    map
}

/// Substitute `(numerator, u-power)` values for a subset of variables and
/// clear the common power of `u`; returns the numerator polynomial and the
/// overall `u` exponent. Zero input substitutions stay exact.
fn substitute_upow(
    p: &DiffPoly,
    map: &BTreeMap<JetVar, (DiffPoly, u32)>,
    u: &DiffPoly,
) -> (DiffPoly, u32) {
    let mut parts: Vec<(DiffPoly, u32)> = Vec::new();
    let mut max_pow = 0u32;
    for (m, c) in p.terms() {
        let mut num = DiffPoly::constant(c.clone());
        let mut upow = 0u32;
        for (v, e) in m.iter() {
            match map.get(v) {
                Some((n, up)) => {
                    num = num.mul(&n.pow(*e));
                    upow += up * e;
                }
                None => {
                    num = num.mul(&DiffPoly::from_terms([(
                        Monomial::from_pairs([(v.clone(), *e)]),
                        Rat::one(),
                    )]));
                }
            }
        }
        max_pow = max_pow.max(upow);
        parts.push((num, upow));
    }
    let mut out = DiffPoly::zero();
    for (num, upow) in parts {
        out = out.add(&num.mul(&u.pow(max_pow - upow)));
    }
    (out, max_pow)
}

/// Which exponent base makes the transformation law hold.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum LawBase {
    /// `S(A-jets) = (d xi/d z)^m * S(composed jets)`.
    XiPrime,
    /// `S(A-jets) = xi^m * S(composed jets)`.
    Xi,
    Neither,
}

#[derive(Clone, Debug)]
pub struct LawReport {
    pub invariant: String,
    pub index: i64,
    pub base: LawBase,
    /// Whether the undifferentiated base `xi^m` also satisfies the law
    /// (it never does for nonzero index; recorded to settle the
    /// quotient-theorem notation).
    pub xi_base_also_holds: bool,
    /// `A_1 = A_2 = 0` identically on the canonical-preserving family.
    pub normal_form_preserved: bool,
}

/// Verify the finite transformation law for a relative invariant of
/// integer index `m` over the symbolic Mobius family
/// `xi = (alpha z + beta)/(gamma z + delta)`, `eta = (xi')^2`, for the
/// order-5 canonical equation.
pub fn verify_transformation_law(
    name: &str,
    s: &DiffPoly,
    m: i64,
    te: &TransformedEquation,
) -> Result<LawReport> {
    // S at the transformed coefficient jets: Coef(j,k) -> D_z^k A_j.
    let mut lhs_map: BTreeMap<JetVar, RatFunc> = BTreeMap::new();
    let order = s.max_order();
    for (j, a) in &te.a {
        let mut d = a.clone();
        lhs_map.insert(JetVar::Coef(*j, 0), d.clone());
        for k in 1..=order {
            d = d.derivative(Deriv::Z)?;
            lhs_map.insert(JetVar::Coef(*j, k), d.clone());
        }
    }
    let lhs = RatFunc::from_poly(s.clone()).substitute(&lhs_map)?;
    // S at the composed source jets.
    let comp_map: BTreeMap<JetVar, DiffPoly> = s
        .vars()
        .into_iter()
        .filter_map(|v| match v {
            JetVar::Coef(j, k) => {
                Some((JetVar::Coef(j, k), DiffPoly::var(JetVar::CompCoef(j, k))))
            }
            _ => None,
        })
        .collect();
    let s_comp = s.substitute_polys(&comp_map);

    let max_k = deepest_xi_jet(&lhs).max(1);
    let jets = mobius_jets(max_k);
    let u = DiffPoly::param("gamma")
        .mul(&DiffPoly::var(JetVar::Z))
        .add(&DiffPoly::param("delta"));

    let holds = |factor: &RatFunc| -> Result<bool> {
        let diff = lhs.sub(&factor.mul(&RatFunc::from_poly(s_comp.clone())));
        let (num, _) = substitute_upow(diff.num(), &jets, &u);
        Ok(num.is_zero())
    };

    let prime_holds = holds(&xi_prime().pow(m)?)?;
    let xi_holds = holds(&RatFunc::var(JetVar::XiJet(0)).pow(m)?)?;
    let base = if prime_holds {
        LawBase::XiPrime
    } else if xi_holds {
        LawBase::Xi
    } else {
        LawBase::Neither
    };

    let mut preserved = true;
    for j in [1u32, 2] {
        let (num, _) = substitute_upow(te.a[&j].num(), &jets, &u);
        if !num.is_zero() {
            preserved = false;
        }
    }
    Ok(LawReport {
        invariant: name.to_string(),
        index: m,
        base,
        xi_base_also_holds: xi_holds,
        normal_form_preserved: preserved,
    })
}

fn deepest_xi_jet(r: &RatFunc) -> u32 {
    r.num()
        .vars()
        .into_iter()
        .chain(r.den().vars())
        .filter_map(|v| match v {
            JetVar::XiJet(k) => Some(k),
            _ => None,
        })
        .max()
        .unwrap_or(0)
}

/// First-order jet `a + eps b` with `eps^2 = 0`; the truncation is a
/// property of the value, not of the ring.
#[derive(Clone, Debug)]
pub struct Dual {
    pub re: RatFunc,
    pub eps: RatFunc,
}

impl Dual {
    pub fn new(re: RatFunc, eps: RatFunc) -> Dual {
        Dual { re, eps }
    }

    pub fn constant(re: RatFunc) -> Dual {
        Dual {
            re,
            eps: RatFunc::zero(),
        }
    }

    pub fn add(&self, o: &Dual) -> Dual {
        Dual {
            re: self.re.add(&o.re),
            eps: self.eps.add(&o.eps),
        }
    }

    pub fn mul(&self, o: &Dual) -> Dual {
        Dual {
            re: self.re.mul(&o.re),
            eps: self.re.mul(&o.eps).add(&self.eps.mul(&o.re)),
        }
    }

    pub fn div(&self, o: &Dual) -> Result<Dual> {
        let re = self.re.div(&o.re)?;
        // (b c - a d) / c^2
        let eps = self
            .eps
            .mul(&o.re)
            .sub(&self.re.mul(&o.eps))
            .div(&o.re.mul(&o.re))?;
        Ok(Dual { re, eps })
    }

    pub fn derivative(&self, d: Deriv) -> Result<Dual> {
        Ok(Dual {
            re: self.re.derivative(d)?,
            eps: self.eps.derivative(d)?,
        })
    }
}

/// Infinitesimal generator induced by the finite action to first order:
/// expands the transformed coefficients under `xi = z + eps f`,
/// `eta = (1 + eps f')^((n-1)/2)` for the order-5 canonical family and
/// reads off the vertical components `phi_j = f a_j' - (d/d eps)|0 A_j`.
///
/// `f` must be a polynomial in `x` (and parameters) of degree <= 2.
pub fn induced_generator(f: &DiffPoly) -> Result<VectorField> {
    let n = 5u32;
    let slots = [3u32, 4, 5];
    for v in f.vars() {
        match v {
            JetVar::Indep | JetVar::Param(_) => {}
            other => {
                return Err(Error::Domain(format!(
                    "generator seed must be a polynomial in x, found {other}"
                )))
            }
        }
    }
    let d3 = f
        .derivative(Deriv::X)?
        .derivative(Deriv::X)?
        .derivative(Deriv::X)?;
    if !d3.is_zero() {
        return Err(Error::Domain(
            "generator seed must have degree <= 2 in x".into(),
        ));
    }
    let fp = f.derivative(Deriv::X)?;

    // xi' = 1 + eps f'; eta = (xi')^2 = 1 + 2 eps f' at first order.
    let one = Dual::constant(RatFunc::one());
    let xi_p = Dual::new(RatFunc::one(), RatFunc::from_poly(fp.clone()));
    let eta = Dual::new(
        RatFunc::one(),
        RatFunc::from_poly(fp.scale(&int(((n - 1) / 2) as i64))),
    );
    let inv_xi_p = one.div(&xi_p)?;

    // y^(k) = sum C[k][i] w^(i) over dual scalars in the x-jet ring;
    // composed coefficients enter as a_j + eps f a_j'.
    let mut table: Vec<Vec<Dual>> = vec![vec![eta]];
    for k in 1..=n as usize {
        let prev = &table[k - 1];
        let mut row = Vec::with_capacity(k + 1);
        for i in 0..=k {
            let mut c = Dual::constant(RatFunc::zero());
            if i < prev.len() {
                c = c.add(&prev[i].derivative(Deriv::X)?);
            }
            if i > 0 {
                c = c.add(&prev[i - 1]);
            }
            row.push(c.mul(&inv_xi_p));
        }
        table.push(row);
    }
    let mut b: Vec<Dual> = table[n as usize].clone();
    for j in slots {
        let aj = DiffPoly::coef(j, 0);
        let abj = Dual::new(
            RatFunc::from_poly(aj.clone()),
            RatFunc::from_poly(f.mul(&aj.derivative(Deriv::X)?)),
        );
        let row = &table[(n - j) as usize];
        for (i, c) in row.iter().enumerate() {
            b[i] = b[i].add(&abj.mul(c));
        }
    }
    let lead = b[n as usize].clone();
    let mut phis = BTreeMap::new();
    for j in slots {
        let a = b[(n - j) as usize].div(&lead)?;
        let aj = RatFunc::from_poly(DiffPoly::coef(j, 0));
        if !a.re.equals(&aj) {
            return Err(Error::Domain(format!(
                "unexpected zeroth-order coefficient for slot {j}"
            )));
        }
        // vertical component, oriented to match the printed generator
        let psi = a.eps;
        let phi = RatFunc::from_poly(
            f.mul(&DiffPoly::coef(j, 1)),
        )
        .sub(&psi);
        if !phi.is_polynomial() {
            return Err(Error::Domain(format!(
                "induced phi_{j} is not polynomial"
            )));
        }
        phis.insert(j, phi.num().clone());
    }
    Ok(VectorField::new(f.clone(), phis, n))
}

/// The induced generator for the full residual family
/// `f = k1 + k2 x + k3 x^2`; this is the arbiter generator used by the
/// catalog report.
pub fn arbiter_generator_order5() -> VectorField {
    let f = DiffPoly::param("k1")
        .add(&DiffPoly::param("k2").mul(&DiffPoly::x()))
        .add(&DiffPoly::param("k3").mul(&DiffPoly::x().pow(2)));
    induced_generator(&f).expect("degree-2 seed is always admissible")
}
