//! Python bindings for the differential-invariant engine.
//!
//! Exposes the exact polynomial ring, the relative-invariance checkers
//! and the report-level operations. Structured reports cross the boundary
//! as JSON strings; polynomials as a `DiffPoly` class with exact
//! arithmetic.

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

use difinv_core::diffpoly::{Deriv, Weight};
use difinv_core::emit;
use difinv_core::error::Error;
use difinv_core::expr::parse as parse_text;
use difinv_core::halphen::{
    chi_seq, fundamental_set, invariant_derivative, phi_seq, Catalog,
};
use difinv_core::liesym::{
    builtin_generator_order5, check_relative, find_relative_invariants, infer_index,
    invariant_count, multiplier, VectorField,
};
use difinv_core::report::{catalog_report, Generators};
use difinv_core::transform::{
    arbiter_generator_order5, transform_coefficients, verify_transformation_law,
    EtaMode, LawBase,
};
use difinv_core::{int, DEFAULT_MAX_JET_ORDER};

fn err(e: Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

/// Exact differential polynomial in the coefficient jets a_j^(k) and x.
#[pyclass(frozen, from_py_object)]
#[derive(Clone)]
struct DiffPoly {
    inner: difinv_core::DiffPoly,
}

#[pymethods]
impl DiffPoly {
    /// Parse from the expression grammar, e.g. "3*a5*a3 - a4^2".
    #[new]
    fn new(text: &str) -> PyResult<Self> {
        Ok(DiffPoly {
            inner: parse_text(text).map_err(err)?,
        })
    }

    fn __add__(&self, other: &Self) -> Self {
        DiffPoly {
            inner: self.inner.add(&other.inner),
        }
    }

    fn __sub__(&self, other: &Self) -> Self {
        DiffPoly {
            inner: self.inner.sub(&other.inner),
        }
    }

    fn __mul__(&self, other: &Self) -> Self {
        DiffPoly {
            inner: self.inner.mul(&other.inner),
        }
    }

    fn __pow__(&self, e: u32, _modulo: Option<u32>) -> Self {
        DiffPoly {
            inner: self.inner.pow(e),
        }
    }

    fn __neg__(&self) -> Self {
        DiffPoly {
            inner: self.inner.neg(),
        }
    }

    fn __eq__(&self, other: &Self) -> bool {
        self.inner == other.inner
    }

    fn __str__(&self) -> String {
        self.inner.to_string()
    }

    fn __repr__(&self) -> String {
        format!("DiffPoly({:?})", self.inner.to_string())
    }

    /// Total derivative d/dx.
    fn dx(&self) -> PyResult<Self> {
        Ok(DiffPoly {
            inner: self.inner.derivative(Deriv::X).map_err(err)?,
        })
    }

    /// Weight of an isobaric polynomial; None when not isobaric or when
    /// the grading is undefined.
    fn weight(&self) -> Option<i64> {
        match self.inner.weight() {
            Weight::Isobaric(w) => Some(w),
            _ => None,
        }
    }

    fn is_isobaric(&self) -> bool {
        matches!(self.inner.weight(), Weight::Isobaric(_))
    }

    fn max_order(&self) -> u32 {
        self.inner.max_order()
    }

    fn is_zero(&self) -> bool {
        self.inner.is_zero()
    }

    fn num_terms(&self) -> usize {
        self.inner.num_terms()
    }

    fn to_latex(&self) -> String {
        emit::poly_to_latex(&self.inner)
    }

    fn to_json(&self) -> String {
        serde_json::to_string(&emit::poly_to_json(&self.inner)).unwrap()
    }
}

/// Generator of the equivalence group action for the order-5 canonical
/// equation, with its normalized multiplier.
#[pyclass(frozen)]
struct Generator {
    field: VectorField,
    mu: difinv_core::DiffPoly,
    label: &'static str,
}

#[pymethods]
impl Generator {
    /// (verified, residual): residual is None when the identity holds.
    fn check_relative(&self, poly: &DiffPoly, index: i64) -> PyResult<(bool, Option<String>)> {
        let verdict =
            check_relative(&poly.inner, &int(index), &self.field, &self.mu).map_err(err)?;
        Ok(match verdict.residual() {
            None => (true, None),
            Some(r) => (false, Some(r.to_string())),
        })
    }

    /// The unique index making the polynomial a relative invariant, as an
    /// exact "p/q" string; None when there is none.
    fn infer_index(&self, poly: &DiffPoly) -> PyResult<Option<String>> {
        Ok(infer_index(&poly.inner, &self.field, &self.mu)
            .map_err(err)?
            .map(|m| m.to_string()))
    }

    /// Canonical basis of relative invariants of one weight and bounded
    /// jet order.
    fn find_relative_invariants(&self, weight: u32, max_order: u32) -> PyResult<Vec<DiffPoly>> {
        Ok(find_relative_invariants(
            weight,
            max_order,
            &self.field,
            &self.mu,
            DEFAULT_MAX_JET_ORDER,
        )
        .map_err(err)?
        .into_iter()
        .map(|inner| DiffPoly { inner })
        .collect())
    }

    /// Multiplier -(X S0)/(sigma S0) as text.
    fn multiplier(&self) -> String {
        self.mu.to_string()
    }

    fn __repr__(&self) -> String {
        format!("Generator({})", self.label)
    }
}

fn make_generator(field: VectorField, label: &'static str) -> PyResult<Generator> {
    let mu = multiplier(&field).map_err(err)?;
    Ok(Generator { field, mu, label })
}

/// The generator exactly as printed (carries a sign defect in phi_4).
#[pyfunction]
fn printed_generator() -> PyResult<Generator> {
    make_generator(builtin_generator_order5(), "printed")
}

/// The arbiter generator induced from the finite transformations.
#[pyfunction]
fn induced_generator() -> PyResult<Generator> {
    make_generator(arbiter_generator_order5(), "induced")
}

/// Names of the printed catalog entries.
#[pyfunction]
fn catalog_names() -> Vec<String> {
    Catalog::standard()
        .entries
        .iter()
        .map(|e| e.name.clone())
        .collect()
}

/// Full catalog report (verdicts under both generators, repairs) as JSON.
#[pyfunction]
fn catalog_report_json() -> PyResult<String> {
    let gens = Generators::standard().map_err(err)?;
    let rep = catalog_report(&gens).map_err(err)?;
    Ok(serde_json::to_string(&rep.to_json()).unwrap())
}

/// Halphen sequence phi_1..phi_q (and chi_1..chi_q) from a named seed,
/// as a JSON list of invariant records.
#[pyfunction]
fn sequence_json(seed: &str, steps: u32) -> PyResult<String> {
    let cat = Catalog::standard();
    let seed_inv = cat.get(seed).map_err(err)?;
    let s0 = cat.get("S0").map_err(err)?;
    let mut out = Vec::new();
    for inv in phi_seq(seed_inv, steps, s0, DEFAULT_MAX_JET_ORDER).map_err(err)? {
        out.push(emit::invariant_to_json(&inv));
    }
    for inv in chi_seq(seed_inv, steps, s0, DEFAULT_MAX_JET_ORDER).map_err(err)? {
        out.push(emit::invariant_to_json(&inv));
    }
    Ok(serde_json::to_string(&out).unwrap())
}

/// The fundamental set of 3p + 1 absolute invariants, verified and
/// rank-checked, as a JSON list.
#[pyfunction]
#[pyo3(signature = (order, seed = 0))]
fn fundamental_set_json(order: u32, seed: u64) -> PyResult<String> {
    let v = arbiter_generator_order5();
    let set = fundamental_set(order, &v, seed, 16, DEFAULT_MAX_JET_ORDER).map_err(err)?;
    let out: Vec<_> = set.iter().map(emit::invariant_to_json).collect();
    Ok(serde_json::to_string(&out).unwrap())
}

/// Rank-based invariant count at one prolongation order:
/// (count, rank, jet_variables, printed_formula_value).
#[pyfunction]
#[pyo3(signature = (order, seed = 0))]
fn count_invariants(order: u32, seed: u64) -> PyResult<(usize, usize, usize, i64)> {
    let v = builtin_generator_order5();
    let rep = invariant_count(&v, order, 8, seed, DEFAULT_MAX_JET_ORDER).map_err(err)?;
    Ok((rep.count, rep.rank, rep.jet_vars, rep.gamma_formula))
}

/// Mobius-family transformation-law check for a named relative catalog
/// entry: (base, xi_base_also_holds, normal_form_preserved).
#[pyfunction]
fn transform_check(name: &str) -> PyResult<(String, bool, bool)> {
    let te = transform_coefficients(5, &[3, 4, 5], EtaMode::CanonicalPower).map_err(err)?;
    let cat = Catalog::standard();
    let inv = cat.get(name).map_err(err)?;
    let poly = inv
        .expr
        .as_poly()
        .ok_or_else(|| PyValueError::new_err(format!("{name} is not a relative entry")))?;
    let m: i64 = inv
        .index
        .numer()
        .try_into()
        .map_err(|_| PyValueError::new_err("index out of range"))?;
    let rep = verify_transformation_law(name, poly, m, &te).map_err(err)?;
    let base = match rep.base {
        LawBase::XiPrime => "xi'",
        LawBase::Xi => "xi",
        LawBase::Neither => "neither",
    };
    Ok((
        base.to_string(),
        rep.xi_base_also_holds,
        rep.normal_form_preserved,
    ))
}

/// Invariant differentiation D_x(of)/D_x(wrt):
/// (verified, closed_form_confirmed, record_json).
#[pyfunction]
fn invariant_derivative_json(of: &str, wrt: &str) -> PyResult<(bool, Option<bool>, String)> {
    let cat = Catalog::standard();
    let v = arbiter_generator_order5();
    let rep = invariant_derivative(
        cat.get(of).map_err(err)?,
        cat.get(wrt).map_err(err)?,
        &v,
    )
    .map_err(err)?;
    Ok((
        rep.verdict.is_verified(),
        rep.closed_form_confirmed,
        serde_json::to_string(&emit::invariant_to_json(&rep.result)).unwrap(),
    ))
}

#[pymodule]
fn difinv_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<DiffPoly>()?;
    m.add_class::<Generator>()?;
    m.add_function(wrap_pyfunction!(printed_generator, m)?)?;
    m.add_function(wrap_pyfunction!(induced_generator, m)?)?;
    m.add_function(wrap_pyfunction!(catalog_names, m)?)?;
    m.add_function(wrap_pyfunction!(catalog_report_json, m)?)?;
    m.add_function(wrap_pyfunction!(sequence_json, m)?)?;
    m.add_function(wrap_pyfunction!(fundamental_set_json, m)?)?;
    m.add_function(wrap_pyfunction!(count_invariants, m)?)?;
    m.add_function(wrap_pyfunction!(transform_check, m)?)?;
    m.add_function(wrap_pyfunction!(invariant_derivative_json, m)?)?;
    Ok(())
}
