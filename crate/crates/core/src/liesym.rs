//! Equivalence-group machinery: vector fields on the coefficient space,
//! Lie prolongation to jet coordinates, the semi-invariance checker,
//! index inference, the linear-algebra ansatz that finds invariants from
//! scratch, and rank-based invariant counting.

use std::collections::{BTreeMap, BTreeSet};

use num::{One, Zero};
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::diffpoly::{Deriv, DiffPoly, Monomial, Weight};
use crate::error::{Error, Result};
use crate::jet::JetVar;
use crate::linalg;
use crate::ratfunc::RatFunc;
use crate::{int, Rat, DEFAULT_MAX_JET_ORDER};

/// Generator of the equivalence group action:
/// `f d/dx + sum_j phi_j d/da_j`.
#[derive(Clone, Debug)]
pub struct VectorField {
    /// Coefficient of `d/dx`; a polynomial in `x` and parameters.
    pub f: DiffPoly,
    /// Coefficient of `d/da_j` per slot; polynomials in `x`, parameters and
    /// order-0 coefficients.
    pub phis: BTreeMap<u32, DiffPoly>,
    /// Order of the underlying equation.
    pub n: u32,
    /// Coefficient indices present in the equation.
    pub slots: Vec<u32>,
}

impl VectorField {
    pub fn new(f: DiffPoly, phis: BTreeMap<u32, DiffPoly>, n: u32) -> VectorField {
        let slots = phis.keys().copied().collect();
        VectorField { f, phis, n, slots }
    }

    /// Pointwise sum of two fields over the same slots.
    pub fn add(&self, other: &VectorField) -> VectorField {
        let mut phis = self.phis.clone();
        for (j, p) in &other.phis {
            let entry = phis.entry(*j).or_insert_with(DiffPoly::zero);
            *entry = entry.add(p);
        }
        VectorField::new(self.f.add(&other.f), phis, self.n)
    }

    /// Multiply every component by a parameter polynomial.
    pub fn scale(&self, c: &DiffPoly) -> VectorField {
        VectorField::new(
            self.f.mul(c),
            self.phis
                .iter()
                .map(|(j, p)| (*j, p.mul(c)))
                .collect(),
            self.n,
        )
    }

    /// Split a parametric field into its components along each parameter
    /// appearing in it (unit value for one parameter, zero for the rest).
    /// A parameter-free field is returned unchanged.
    pub fn param_components(&self) -> Vec<VectorField> {
        let mut params: BTreeSet<JetVar> = BTreeSet::new();
        for v in self.f.vars() {
            if matches!(v, JetVar::Param(_)) {
                params.insert(v);
            }
        }
        for p in self.phis.values() {
            for v in p.vars() {
                if matches!(v, JetVar::Param(_)) {
                    params.insert(v);
                }
            }
        }
        if params.is_empty() {
            return vec![self.clone()];
        }
        params
            .iter()
            .map(|unit| {
                let map: BTreeMap<JetVar, Rat> = params
                    .iter()
                    .map(|p| (p.clone(), if p == unit { int(1) } else { int(0) }))
                    .collect();
                VectorField::new(
                    self.f.substitute_vals(&map),
                    self.phis
                        .iter()
                        .map(|(j, p)| (*j, p.substitute_vals(&map)))
                        .collect(),
                    self.n,
                )
            })
            .collect()
    }
}

/// A vector field extended to jet coordinates `a_j^(k)`, `k <= order`,
/// via the standard recursion
/// `zeta(j, k) = D_x zeta(j, k-1) - a_j^(k) D_x f`.
#[derive(Clone, Debug)]
pub struct ProlongedField {
    pub base: VectorField,
    pub order: u32,
    pub zetas: BTreeMap<(u32, u32), DiffPoly>,
}

/// Prolong a field to jet order `p` (capped by `max_jet`).
pub fn prolong(v: &VectorField, p: u32, max_jet: u32) -> Result<ProlongedField> {
    if p > max_jet {
        return Err(Error::JetOrderLimit {
            requested: p,
            max: max_jet,
        });
    }
    let df = v.f.derivative(Deriv::X)?;
    let mut zetas = BTreeMap::new();
    for (j, phi) in &v.phis {
        zetas.insert((*j, 0), phi.clone());
        let mut prev = phi.clone();
        for k in 1..=p {
            let z = prev
                .derivative(Deriv::X)?
                .sub(&DiffPoly::coef(*j, k).mul(&df));
            zetas.insert((*j, k), z.clone());
            prev = z;
        }
    }
    Ok(ProlongedField {
        base: v.clone(),
        order: p,
        zetas,
    })
}

impl ProlongedField {
    /// The derivation `f dF/dx + sum zeta(j,k) dF/da_j^(k)` on polynomials.
    pub fn apply(&self, poly: &DiffPoly) -> Result<DiffPoly> {
        for v in poly.vars() {
            match v {
                JetVar::Indep | JetVar::Param(_) => {}
                JetVar::Coef(_, k) => {
                    if k > self.order {
                        return Err(Error::InsufficientProlongation {
                            need: k,
                            have: self.order,
                        });
                    }
                }
                other => {
                    return Err(Error::Domain(format!(
                        "cannot apply an equivalence field to a polynomial containing {other}"
                    )))
                }
            }
        }
        let mut out = poly.partial(&JetVar::Indep).mul(&self.base.f);
        for ((j, k), zeta) in &self.zetas {
            let pd = poly.partial(&JetVar::Coef(*j, *k));
            if !pd.is_zero() {
                out = out.add(&pd.mul(zeta));
            }
        }
        Ok(out)
    }

    /// Same derivation on rational functions.
    pub fn apply_rat(&self, r: &RatFunc) -> Result<RatFunc> {
        let xn = self.apply(r.num())?;
        let xd = self.apply(r.den())?;
        RatFunc::new(
            xn.mul(r.den()).sub(&r.num().mul(&xd)),
            r.den().mul(r.den()),
        )
    }
}

/// Outcome of a semi-invariance check: either the identity holds or a
/// nonzero residual polynomial certifies the failure.
#[derive(Clone, Debug)]
pub enum Verdict {
    Verified,
    Residual(DiffPoly),
}

impl Verdict {
    pub fn is_verified(&self) -> bool {
        matches!(self, Verdict::Verified)
    }

    pub fn residual(&self) -> Option<&DiffPoly> {
        match self {
            Verdict::Verified => None,
            Verdict::Residual(r) => Some(r),
        }
    }
}

/// The printed infinitesimal generator of the order-5 canonical equation
/// `y^(5) + a3 y'' + a4 y' + a5 y = 0`, with parameters `k1, k2, k3`.
pub fn builtin_generator_order5() -> VectorField {
    let x = DiffPoly::x();
    let k1 = DiffPoly::param("k1");
    let k2 = DiffPoly::param("k2");
    let k3 = DiffPoly::param("k3");
    let a3 = DiffPoly::coef(3, 0);
    let a4 = DiffPoly::coef(4, 0);
    let a5 = DiffPoly::coef(5, 0);
    // k2 + 2 k3 x
    let lin = k2.add(&k3.mul(&x).scale(&int(2)));
    // f = k1 + x (k2 + k3 x)
    let f = k1.add(&x.mul(&k2.add(&k3.mul(&x))));
    let phi3 = a3.mul(&lin).scale(&int(-3));
    // -2 [ -3 a3 k3 + 2 a4 (k2 + 2 k3 x) ]
    let phi4 = a3
        .mul(&k3)
        .scale(&int(6))
        .sub(&a4.mul(&lin).scale(&int(4)));
    let phi5 = a4
        .mul(&k3)
        .scale(&int(-4))
        .sub(&a5.mul(&lin).scale(&int(5)));
    VectorField::new(f, BTreeMap::from([(3, phi3), (4, phi4), (5, phi5)]), 5)
}

/// The fundamental relative invariant slot of a field: the lowest slot
/// `j0`, with `S0 = a_{j0}` of index `sigma = j0`.
pub fn fundamental_slot(v: &VectorField) -> Result<u32> {
    v.slots
        .iter()
        .min()
        .copied()
        .ok_or_else(|| Error::Domain("vector field has no coefficient slots".into()))
}

/// The normalized multiplier `mu = -(X S0) / (sigma S0)`. A configuration
/// error when the quotient is not a polynomial.
pub fn multiplier(v: &VectorField) -> Result<DiffPoly> {
    let j0 = fundamental_slot(v)?;
    let s0 = DiffPoly::coef(j0, 0);
    let pv = prolong(v, 0, DEFAULT_MAX_JET_ORDER)?;
    let xs0 = pv.apply(&s0)?;
    let denom = s0.scale(&int(j0 as i64));
    xs0.neg()
        .exact_div(&denom)
        .ok_or(Error::NonPolynomialMultiplier)
}

/// Check `X F + m mu F = 0` identically in `x` and all parameters.
pub fn check_relative(
    f: &DiffPoly,
    m: &Rat,
    v: &VectorField,
    mu: &DiffPoly,
) -> Result<Verdict> {
    let pv = prolong(v, f.max_order(), DEFAULT_MAX_JET_ORDER)?;
    let residual = pv.apply(f)?.add(&mu.mul(f).scale(m));
    if residual.is_zero() {
        Ok(Verdict::Verified)
    } else {
        Ok(Verdict::Residual(residual))
    }
}

/// Check `X F = 0` for a rational function; the residual certificate is
/// the numerator of `X F`.
pub fn check_absolute(f: &RatFunc, v: &VectorField) -> Result<Verdict> {
    let pv = prolong(v, f.max_order(), DEFAULT_MAX_JET_ORDER)?;
    let xf = pv.apply_rat(f)?;
    if xf.is_zero() {
        Ok(Verdict::Verified)
    } else {
        Ok(Verdict::Residual(xf.num().clone()))
    }
}

/// Find the unique index `m` with `X F + m mu F = 0`, if any.
///
/// The candidate is read off by exact division on the leading term of
/// `mu F` and then verified globally.
pub fn infer_index(f: &DiffPoly, v: &VectorField, mu: &DiffPoly) -> Result<Option<Rat>> {
    if f.is_zero() {
        return Err(Error::Domain("cannot infer the index of zero".into()));
    }
    let pv = prolong(v, f.max_order(), DEFAULT_MAX_JET_ORDER)?;
    let xf = pv.apply(f)?;
    let muf = mu.mul(f);
    if muf.is_zero() {
        // degenerate multiplier; every m works iff X F = 0
        return Ok(if xf.is_zero() { Some(Rat::zero()) } else { None });
    }
    let (lead_m, lead_c) = muf.leading().unwrap();
    let m = -(xf.coeff_of(lead_m) / lead_c);
    if xf.add(&muf.scale(&m)).is_zero() {
        Ok(Some(m))
    } else {
        Ok(None)
    }
}

/// All monomials of the given weight in the jets `a_j^(k)`, `j` in
/// `slots`, `k <= max_order`, in descending canonical order.
pub fn isobaric_monomials(weight: u32, max_order: u32, slots: &[u32]) -> Vec<Monomial> {
    let mut vars: Vec<(JetVar, u32)> = Vec::new();
    for j in slots {
        for k in 0..=max_order {
            vars.push((JetVar::Coef(*j, k), j + k));
        }
    }
    let mut out: Vec<Monomial> = Vec::new();
    let mut stack: Vec<(JetVar, u32)> = Vec::new();
    fn rec(
        vars: &[(JetVar, u32)],
        remaining: u32,
        stack: &mut Vec<(JetVar, u32)>,
        out: &mut Vec<Monomial>,
    ) {
        if remaining == 0 {
            out.push(Monomial::from_pairs(stack.iter().cloned()));
            return;
        }
        if vars.is_empty() {
            return;
        }
        let (v, w) = &vars[0];
        let max_e = remaining / w;
        for e in 0..=max_e {
            if e > 0 {
                stack.push((v.clone(), e));
            }
            rec(&vars[1..], remaining - e * w, stack, out);
            if e > 0 {
                stack.pop();
            }
        }
    }
    rec(&vars, weight, &mut stack, &mut out);
    out.sort_by(|a, b| b.cmp(a));
    out
}

/// Basis of the space of relative invariants of the given weight built
/// from jets of order at most `max_order`, found by solving the exact
/// linear system `X (sum c_i M_i) + w mu (sum c_i M_i) = 0` as a
/// polynomial identity in `x` and all parameters.
///
/// Basis vectors are scaled to coprime integer coefficients with the
/// first nonzero coefficient (in the canonical monomial order) positive.
pub fn find_relative_invariants(
    weight: u32,
    max_order: u32,
    v: &VectorField,
    mu: &DiffPoly,
    max_jet: u32,
) -> Result<Vec<DiffPoly>> {
    let monos = isobaric_monomials(weight, max_order, &v.slots);
    Ok(solve_ansatz(&monos, &int(weight as i64), v, mu, max_jet)?
        .into_iter()
        .collect())
}

/// Solve the relative-invariance system over an explicit monomial support.
pub fn solve_ansatz(
    monos: &[Monomial],
    index: &Rat,
    v: &VectorField,
    mu: &DiffPoly,
    max_jet: u32,
) -> Result<Vec<DiffPoly>> {
    if monos.is_empty() {
        return Ok(Vec::new());
    }
    let order = monos
        .iter()
        .flat_map(|m| m.iter())
        .filter_map(|(v, _)| v.coef_order())
        .max()
        .unwrap_or(0);
    let pv = prolong(v, order, max_jet)?;
    // Rows are indexed by the full monomials (in x, parameters and jets)
    // of the combined residual; columns by the ansatz monomials.
    let mut row_index: BTreeMap<Monomial, usize> = BTreeMap::new();
    let mut rows: Vec<Vec<(usize, Rat)>> = Vec::new();
    for (col, m) in monos.iter().enumerate() {
        let mp = DiffPoly::from_terms([(m.clone(), Rat::one())]);
        let residual = pv.apply(&mp)?.add(&mu.mul(&mp).scale(index));
        for (rm, c) in residual.terms() {
            let next = row_index.len();
            let ri = *row_index.entry(rm.clone()).or_insert(next);
            if ri == rows.len() {
                rows.push(Vec::new());
            }
            rows[ri].push((col, c.clone()));
        }
    }
    let basis = linalg::nullspace(rows, monos.len());
    Ok(basis
        .into_iter()
        .map(|coeffs| {
            DiffPoly::from_terms(
                monos
                    .iter()
                    .cloned()
                    .zip(coeffs)
                    .filter(|(_, c)| !c.is_zero()),
            )
        })
        .collect())
}

/// Result of the rank-based invariant count.
#[derive(Clone, Debug)]
pub struct CountReport {
    pub prolongation_order: u32,
    pub jet_vars: usize,
    pub rank: usize,
    /// `jet_vars - rank`.
    pub count: usize,
    /// The printed closed-form count `n + 4 - p (n - 2)`.
    pub gamma_formula: i64,
    pub consistent_with_formula: bool,
}

/// Number of functionally independent absolute invariants of the `p`-th
/// prolongation: `N - max rank` of the basis fields' component matrix at
/// seeded random rational points, with `N = 1 + #slots * (p + 1)`.
pub fn invariant_count(
    v: &VectorField,
    p: u32,
    trials: u32,
    seed: u64,
    max_jet: u32,
) -> Result<CountReport> {
    let fields = v.param_components();
    let mut prolonged = Vec::new();
    for f in &fields {
        prolonged.push(prolong(f, p, max_jet)?);
    }
    let mut vars: Vec<JetVar> = vec![JetVar::Indep];
    for j in &v.slots {
        for k in 0..=p {
            vars.push(JetVar::Coef(*j, k));
        }
    }
    let n_vars = vars.len();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut best = 0usize;
    for _ in 0..trials.max(1) {
        let point = sample_point(&mut rng, &vars);
        let mut matrix = Vec::new();
        for pf in &prolonged {
            let mut row = Vec::with_capacity(n_vars);
            row.push(pf.base.f.evaluate_or_zero(&point));
            for j in &v.slots {
                for k in 0..=p {
                    let z = pf
                        .zetas
                        .get(&(*j, k))
                        .cloned()
                        .unwrap_or_else(DiffPoly::zero);
                    row.push(z.evaluate_or_zero(&point));
                }
            }
            matrix.push(row);
        }
        best = best.max(linalg::rank(matrix));
    }
    let n = v.n as i64;
    let gamma = n + 4 - (p as i64) * (n - 2);
    let count = n_vars - best;
    Ok(CountReport {
        prolongation_order: p,
        jet_vars: n_vars,
        rank: best,
        count,
        gamma_formula: gamma,
        consistent_with_formula: gamma == count as i64,
    })
}

impl DiffPoly {
    /// Evaluation used by the samplers: unassigned variables are treated
    /// as zero (the component polynomials are total in the sampled vars).
    fn evaluate_or_zero(&self, point: &BTreeMap<JetVar, Rat>) -> Rat {
        let mut total = Rat::zero();
        'term: for (m, c) in self.terms() {
            let mut val = c.clone();
            for (v, e) in m.iter() {
                match point.get(v) {
                    Some(x) => {
                        for _ in 0..*e {
                            val *= x;
                        }
                    }
                    None => continue 'term,
                }
            }
            total += val;
        }
        total
    }
}

/// Small random rational point; `a3` (the lowest order-0 slot present)
/// is kept away from zero.
fn sample_point(rng: &mut ChaCha8Rng, vars: &[JetVar]) -> BTreeMap<JetVar, Rat> {
    let mut point = BTreeMap::new();
    for v in vars {
        let guard_nonzero = matches!(v, JetVar::Coef(3, 0));
        let val = loop {
            let n = rng.random_range(-9i64..=9);
            if guard_nonzero && n == 0 {
                continue;
            }
            break n;
        };
        point.insert(v.clone(), int(val));
    }
    point
}

/// Maximum exact rank over seeded trials of the Jacobian of the given
/// rational functions with respect to `vars`, at random rational points
/// avoiding `a3 = 0` and all denominator zeros.
pub fn jacobian_rank(
    invs: &[RatFunc],
    vars: &[JetVar],
    trials: u32,
    seed: u64,
) -> Result<usize> {
    if invs.is_empty() {
        return Ok(0);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut best = 0usize;
    let mut produced = 0u32;
    let mut attempts = 0u32;
    let max_attempts = trials.saturating_mul(100).max(100);
    while produced < trials.max(1) {
        if attempts >= max_attempts {
            return Err(Error::SamplingFailed);
        }
        attempts += 1;
        let point = sample_point(&mut rng, vars);
        let mut matrix: Vec<Vec<Rat>> = Vec::new();
        let mut singular = false;
        'inv: for r in invs {
            let dval = match r.den().evaluate(&point) {
                Ok(v) if !v.is_zero() => v,
                _ => {
                    singular = true;
                    break 'inv;
                }
            };
            let nval = match r.num().evaluate(&point) {
                Ok(v) => v,
                Err(_) => {
                    singular = true;
                    break 'inv;
                }
            };
            let mut row = Vec::with_capacity(vars.len());
            for v in vars {
                // d(n/d) = (n_v d - n d_v) / d^2
                let nv = r.num().partial(v).evaluate_or_zero(&point);
                let dv = r.den().partial(v).evaluate_or_zero(&point);
                row.push((nv * &dval - &nval * dv) / (&dval * &dval));
            }
            matrix.push(row);
        }
        if singular {
            continue;
        }
        produced += 1;
        best = best.max(linalg::rank(matrix));
    }
    Ok(best)
}

/// Classification of an invariant record.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Kind {
    Relative,
    Absolute,
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Provenance {
    Printed,
    Ansatz,
    Sequence,
    Quotient,
}

/// Expression payload of an invariant.
#[derive(Clone, Debug)]
pub enum InvExpr {
    Poly(DiffPoly),
    Rat(RatFunc),
}

impl InvExpr {
    pub fn as_rat(&self) -> RatFunc {
        match self {
            InvExpr::Poly(p) => RatFunc::from_poly(p.clone()),
            InvExpr::Rat(r) => r.clone(),
        }
    }

    pub fn as_poly(&self) -> Option<&DiffPoly> {
        match self {
            InvExpr::Poly(p) => Some(p),
            InvExpr::Rat(_) => None,
        }
    }

    pub fn max_order(&self) -> u32 {
        match self {
            InvExpr::Poly(p) => p.max_order(),
            InvExpr::Rat(r) => r.max_order(),
        }
    }
}

/// Named invariant record.
#[derive(Clone, Debug)]
pub struct Invariant {
    pub name: String,
    pub expr: InvExpr,
    pub kind: Kind,
    pub index: Rat,
    pub weight: Option<i64>,
    pub order: u32,
    pub provenance: Provenance,
}

impl Invariant {
    pub fn relative(name: &str, expr: DiffPoly, index: i64, provenance: Provenance) -> Invariant {
        let weight = match expr.weight() {
            Weight::Isobaric(w) => Some(w),
            _ => None,
        };
        let order = expr.max_order();
        Invariant {
            name: name.to_string(),
            expr: InvExpr::Poly(expr),
            kind: Kind::Relative,
            index: int(index),
            weight,
            order,
            provenance,
        }
    }

    pub fn absolute(name: &str, expr: RatFunc, provenance: Provenance) -> Invariant {
        let order = expr.max_order();
        Invariant {
            name: name.to_string(),
            expr: InvExpr::Rat(expr),
            kind: Kind::Absolute,
            index: Rat::zero(),
            weight: None,
            order,
            provenance,
        }
    }

    /// Run the appropriate checker for this record.
    pub fn check(&self, v: &VectorField, mu: &DiffPoly) -> Result<Verdict> {
        match (&self.kind, &self.expr) {
            (Kind::Relative, InvExpr::Poly(p)) => check_relative(p, &self.index, v, mu),
            (Kind::Relative, InvExpr::Rat(r)) => {
                // relative with rational expression: X r + m mu r = 0
                let pv = prolong(v, r.max_order(), DEFAULT_MAX_JET_ORDER)?;
                let xr = pv.apply_rat(r)?;
                let rhs = r
                    .mul(&RatFunc::from_poly(mu.clone()))
                    .scale(&self.index);
                let res = xr.add(&rhs);
                Ok(if res.is_zero() {
                    Verdict::Verified
                } else {
                    Verdict::Residual(res.num().clone())
                })
            }
            (Kind::Absolute, e) => check_absolute(&e.as_rat(), v),
        }
    }
}
