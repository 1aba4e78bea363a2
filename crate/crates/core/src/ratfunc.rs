//! Rational differential functions: quotients of [`DiffPoly`]s with a
//! canonical normalization. Equality is decided exactly by
//! cross-multiplication; no multivariate GCD is attempted beyond content
//! and common monomial factors.

use std::collections::BTreeMap;
use std::fmt;

use num::{One, Signed, Zero};

use crate::diffpoly::{Deriv, DiffPoly, Monomial};
use crate::error::{Error, Result};
use crate::jet::JetVar;
use crate::Rat;

#[derive(Clone, Debug)]
pub struct RatFunc {
    num: DiffPoly,
    den: DiffPoly,
}

impl RatFunc {
    /// Build `num / den`, normalizing. Errors when `den = 0`.
    pub fn new(num: DiffPoly, den: DiffPoly) -> Result<RatFunc> {
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let mut r = RatFunc { num, den };
        r.normalize();
        Ok(r)
    }

    pub fn from_poly(p: DiffPoly) -> RatFunc {
        RatFunc {
            num: p,
            den: DiffPoly::one(),
        }
    }

    pub fn zero() -> RatFunc {
        RatFunc::from_poly(DiffPoly::zero())
    }

    pub fn one() -> RatFunc {
        RatFunc::from_poly(DiffPoly::one())
    }

    pub fn constant(c: Rat) -> RatFunc {
        RatFunc::from_poly(DiffPoly::constant(c))
    }

    pub fn var(v: JetVar) -> RatFunc {
        RatFunc::from_poly(DiffPoly::var(v))
    }

    pub fn num(&self) -> &DiffPoly {
        &self.num
    }

    pub fn den(&self) -> &DiffPoly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.is_one()
    }

    /// Canonical form: zero has denominator 1; common monomial factors and
    /// the denominator's rational content are removed; the leading
    /// denominator coefficient is positive.
    fn normalize(&mut self) {
        if self.num.is_zero() {
            self.den = DiffPoly::one();
            return;
        }
        // Common monomial factor across numerator and denominator.
        let gcd_mono = |p: &DiffPoly| -> BTreeMap<JetVar, u32> {
            let mut acc: Option<BTreeMap<JetVar, u32>> = None;
            for (m, _) in p.terms() {
                let cur: BTreeMap<JetVar, u32> =
                    m.iter().map(|(v, e)| (v.clone(), *e)).collect();
                acc = Some(match acc {
                    None => cur,
                    Some(prev) => prev
                        .into_iter()
                        .filter_map(|(v, e)| {
                            cur.get(&v).map(|e2| (v, e.min(*e2)))
                        })
                        .filter(|(_, e)| *e > 0)
                        .collect(),
                });
            }
            acc.unwrap_or_default()
        };
        let gn = gcd_mono(&self.num);
        let gd = gcd_mono(&self.den);
        let common: Vec<(JetVar, u32)> = gn
            .into_iter()
            .filter_map(|(v, e)| gd.get(&v).map(|e2| (v.clone(), e.min(*e2))))
            .filter(|(_, e)| *e > 0)
            .collect();
        if !common.is_empty() {
            let g = DiffPoly::from_terms([(Monomial::from_pairs(common), Rat::one())]);
            self.num = self.num.exact_div(&g).unwrap();
            self.den = self.den.exact_div(&g).unwrap();
        }
        // Scale so the denominator is integer-primitive with positive
        // leading coefficient.
        let mut c = self.den.content();
        if self.den.leading().unwrap().1.is_negative() {
            c = -c;
        }
        let inv = c.recip();
        self.num = self.num.scale(&inv);
        self.den = self.den.scale(&inv);
    }

    pub fn add(&self, other: &RatFunc) -> RatFunc {
        RatFunc::new(
            self.num
                .mul(&other.den)
                .add(&other.num.mul(&self.den)),
            self.den.mul(&other.den),
        )
        .expect("nonzero denominators")
    }

    pub fn neg(&self) -> RatFunc {
        RatFunc {
            num: self.num.neg(),
            den: self.den.clone(),
        }
    }

    pub fn sub(&self, other: &RatFunc) -> RatFunc {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &RatFunc) -> RatFunc {
        RatFunc::new(self.num.mul(&other.num), self.den.mul(&other.den))
            .expect("nonzero denominators")
    }

    pub fn div(&self, other: &RatFunc) -> Result<RatFunc> {
        if other.is_zero() {
            return Err(Error::DivisionByZero);
        }
        RatFunc::new(self.num.mul(&other.den), self.den.mul(&other.num))
    }

    pub fn recip(&self) -> Result<RatFunc> {
        RatFunc::one().div(self)
    }

    pub fn scale(&self, c: &Rat) -> RatFunc {
        RatFunc::new(self.num.scale(c), self.den.clone()).expect("nonzero denominator")
    }

    /// Integer power; negative exponents invert (error on zero).
    pub fn pow(&self, e: i64) -> Result<RatFunc> {
        let base = if e < 0 { self.recip()? } else { self.clone() };
        let e = e.unsigned_abs() as u32;
        Ok(RatFunc::new(base.num.pow(e), base.den.pow(e)).expect("nonzero denominator"))
    }

    /// Quotient rule along the given derivation.
    pub fn derivative(&self, d: Deriv) -> Result<RatFunc> {
        let dn = self.num.derivative(d)?;
        let dd = self.den.derivative(d)?;
        RatFunc::new(
            dn.mul(&self.den).sub(&self.num.mul(&dd)),
            self.den.mul(&self.den),
        )
    }

    /// Exact equality by cross-multiplication.
    pub fn equals(&self, other: &RatFunc) -> bool {
        self.num
            .mul(&other.den)
            .sub(&other.num.mul(&self.den))
            .is_zero()
    }

    pub fn max_order(&self) -> u32 {
        self.num.max_order().max(self.den.max_order())
    }

    /// Evaluate at a point; the denominator must not vanish there.
    pub fn evaluate(&self, point: &BTreeMap<JetVar, Rat>) -> Result<Rat> {
        let d = self.den.evaluate(point)?;
        if d.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(self.num.evaluate(point)? / d)
    }

    /// Substitute rational functions for a subset of variables.
    pub fn substitute(&self, map: &BTreeMap<JetVar, RatFunc>) -> Result<RatFunc> {
        let sub_poly = |p: &DiffPoly| -> Result<RatFunc> {
            let mut out = RatFunc::zero();
            for (m, c) in p.terms() {
                let mut term = RatFunc::constant(c.clone());
                for (v, e) in m.iter() {
                    let factor = match map.get(v) {
                        Some(r) => r.pow(*e as i64)?,
                        None => RatFunc::from_poly(DiffPoly::from_terms([(
                            Monomial::from_pairs([(v.clone(), *e)]),
                            Rat::one(),
                        )])),
                    };
                    term = term.mul(&factor);
                }
                out = out.add(&term);
            }
            Ok(out)
        };
        sub_poly(&self.num)?.div(&sub_poly(&self.den)?)
    }
}

impl PartialEq for RatFunc {
    fn eq(&self, other: &Self) -> bool {
        self.equals(other)
    }
}

impl fmt::Display for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({})/({})", self.num, self.den)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::int;

    fn a(j: u32) -> DiffPoly {
        DiffPoly::coef(j, 0)
    }

    fn rf(n: DiffPoly, d: DiffPoly) -> RatFunc {
        RatFunc::new(n, d).unwrap()
    }

    #[test]
    fn reciprocal_product_is_one() {
        let r = rf(a(3), a(4)).mul(&rf(a(4), a(3)));
        assert!(r.equals(&RatFunc::one()));
        assert!(r.is_polynomial());
    }

    #[test]
    fn printed_i1_from_catalog_pieces() {
        // S1^3 / S0^4 with S0 = a3 equals the printed I1.
        let s1 = DiffPoly::coef(3, 1).sub(&a(4));
        let i1 = rf(s1.pow(3), a(3).pow(4));
        let printed = rf(DiffPoly::coef(3, 1).sub(&a(4)).pow(3), a(3).pow(4));
        assert!(i1.equals(&printed));
    }

    #[test]
    fn division_by_zero_function() {
        assert!(RatFunc::from_poly(a(3)).div(&RatFunc::zero()).is_err());
        assert!(RatFunc::new(a(3), DiffPoly::zero()).is_err());
    }

    #[test]
    fn derivative_quotient_rule() {
        let r = rf(DiffPoly::one(), a(3));
        let d = r.derivative(Deriv::X).unwrap();
        let expect = rf(DiffPoly::coef(3, 1).neg(), a(3).pow(2));
        assert!(d.equals(&expect));

        let poly = rf(a(3), DiffPoly::one()).derivative(Deriv::X).unwrap();
        assert!(poly.equals(&RatFunc::from_poly(DiffPoly::coef(3, 1))));
    }

    #[test]
    fn is_zero_cases() {
        // a3*a4/a4 - a3 = 0
        let r = rf(a(3).mul(&a(4)), a(4)).sub(&RatFunc::from_poly(a(3)));
        assert!(r.is_zero());
        assert!(rf(DiffPoly::zero(), a(3)).is_zero());
    }

    #[test]
    fn i0_differs_from_i1() {
        let r0 = a(5).mul(&a(3)).scale(&int(3)).sub(&a(4).pow(2));
        let i0 = rf(r0.pow(3), a(3).pow(8).scale(&int(27)));
        let s1 = DiffPoly::coef(3, 1).sub(&a(4));
        let i1 = rf(s1.pow(3), a(3).pow(4));
        assert!(!i0.sub(&i1).is_zero());
    }

    #[test]
    fn normalization_sign_and_monomial_reduction() {
        // (-a3 a4) / (-2 a4^2): the shared a4 cancels and the denominator
        // becomes integer-primitive with positive leading coefficient.
        let r = rf(a(3).mul(&a(4)).neg(), a(4).pow(2).scale(&int(-2)));
        assert_eq!(r.num().to_string(), "1/2*a3");
        assert_eq!(r.den().to_string(), "a4");
        assert!(r.equals(&rf(a(3), a(4).scale(&int(2)))));
    }
}
