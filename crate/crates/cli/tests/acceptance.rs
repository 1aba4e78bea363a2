//! Acceptance suite: one test per criterion, every check exact
//! (tolerance zero). Each test prints a single PASS line on success;
//! failures carry the offending certificate in the panic message.
//!
//! Run with `cargo test -p difinv-cli --test acceptance -- --nocapture`.

use std::collections::BTreeMap;
use std::process::Command;

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use difinv_core::diffpoly::{Deriv, DiffPoly, Monomial, Weight};
use difinv_core::emit;
use difinv_core::expr::parse;
use difinv_core::halphen::{
    chi_seq, invariant_derivative, phi_seq, theta, Catalog, ABSOLUTE_NAMES,
    RELATIVE_NAMES,
};
use difinv_core::jet::JetVar;
use difinv_core::liesym::{
    builtin_generator_order5, check_absolute, check_relative, infer_index,
    invariant_count, isobaric_monomials, jacobian_rank, multiplier, Kind,
};
use difinv_core::ratfunc::RatFunc;
use difinv_core::report::{catalog_report, Generators};
use difinv_core::transform::{
    arbiter_generator_order5, induced_generator, transform_coefficients,
    verify_transformation_law, EtaMode, LawBase,
};
use difinv_core::{int, Rat};

fn rand_rat(rng: &mut ChaCha8Rng) -> Rat {
    Rat::new(
        rng.random_range(-6i64..=6).into(),
        rng.random_range(1i64..=3).into(),
    )
}

fn rand_poly(rng: &mut ChaCha8Rng, vars: &[JetVar]) -> DiffPoly {
    let nterms = rng.random_range(0..4);
    let mut terms = Vec::new();
    for _ in 0..nterms {
        let nvars = rng.random_range(0..3);
        let mono = Monomial::from_pairs((0..nvars).map(|_| {
            (
                vars[rng.random_range(0..vars.len())].clone(),
                rng.random_range(1u32..=2),
            )
        }));
        terms.push((mono, rand_rat(rng)));
    }
    DiffPoly::from_terms(terms)
}

fn rand_isobaric(rng: &mut ChaCha8Rng, weight: u32) -> DiffPoly {
    let monos = isobaric_monomials(weight, 2, &[3, 4, 5]);
    DiffPoly::from_terms(
        monos
            .into_iter()
            .map(|m| (m, int(rng.random_range(-5i64..=5)))),
    )
}

fn x_vars() -> Vec<JetVar> {
    vec![
        JetVar::Indep,
        JetVar::param("k1"),
        JetVar::Coef(3, 0),
        JetVar::Coef(3, 1),
        JetVar::Coef(4, 0),
        JetVar::Coef(5, 2),
    ]
}

fn z_vars() -> Vec<JetVar> {
    vec![
        JetVar::Z,
        JetVar::XiJet(1),
        JetVar::EtaJet(0),
        JetVar::CompCoef(3, 0),
        JetVar::CompCoef(4, 1),
    ]
}

fn difinv(args: &[&str]) -> (i32, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_difinv"))
        .args(args)
        .output()
        .expect("binary runs");
    (
        out.status.code().unwrap_or(-1),
        String::from_utf8_lossy(&out.stdout).to_string(),
    )
}

/// Criterion 1: 1000 randomized exact property cases for ring/field
/// axioms, Leibniz (both derivations) and the weight grading.
#[test]
fn acceptance_1_algebra_laws() {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let xs = x_vars();
    let zs = z_vars();
    for case in 0..1000 {
        let p = rand_poly(&mut rng, &xs);
        let q = rand_poly(&mut rng, &xs);
        let r = rand_poly(&mut rng, &xs);
        // ring axioms
        assert_eq!(p.add(&q).add(&r), p.add(&q.add(&r)), "case {case}");
        assert_eq!(p.add(&q), q.add(&p), "case {case}");
        assert_eq!(p.mul(&q).mul(&r), p.mul(&q.mul(&r)), "case {case}");
        assert_eq!(p.mul(&q), q.mul(&p), "case {case}");
        assert_eq!(
            p.mul(&q.add(&r)),
            p.mul(&q).add(&p.mul(&r)),
            "case {case}"
        );
        // Leibniz along d/dx
        let lhs = p.mul(&q).derivative(Deriv::X).unwrap();
        let rhs = p
            .derivative(Deriv::X)
            .unwrap()
            .mul(&q)
            .add(&p.mul(&q.derivative(Deriv::X).unwrap()));
        assert_eq!(lhs, rhs, "case {case}");
        // Leibniz along d/dz
        let pz = rand_poly(&mut rng, &zs);
        let qz = rand_poly(&mut rng, &zs);
        let lhs = pz.mul(&qz).derivative(Deriv::Z).unwrap();
        let rhs = pz
            .derivative(Deriv::Z)
            .unwrap()
            .mul(&qz)
            .add(&pz.mul(&qz.derivative(Deriv::Z).unwrap()));
        assert_eq!(lhs, rhs, "case {case}");
        // grading
        let w1 = 5 + (case % 3) as u32;
        let w2 = 3 + (case % 4) as u32;
        let iso1 = rand_isobaric(&mut rng, w1);
        let iso2 = rand_isobaric(&mut rng, w2);
        if !iso1.is_zero() && !iso2.is_zero() {
            assert_eq!(iso1.weight(), Weight::Isobaric(w1 as i64));
            assert_eq!(
                iso1.mul(&iso2).weight(),
                Weight::Isobaric((w1 + w2) as i64)
            );
            let d = iso1.derivative(Deriv::X).unwrap();
            assert!(!d.is_zero());
            assert_eq!(d.weight(), Weight::Isobaric(w1 as i64 + 1));
        }
        // field axioms on nonzero rational functions
        if !p.is_zero() && !q.is_zero() && !r.is_zero() {
            let r1 = RatFunc::new(p.clone(), q.clone()).unwrap();
            let r2 = RatFunc::new(q.clone(), r.clone()).unwrap();
            let r3 = RatFunc::new(r.clone(), p.clone()).unwrap();
            assert!(r1.mul(&r2).mul(&r3).equals(&r1.mul(&r2.mul(&r3))));
            assert!(r1
                .mul(&r2.add(&r3))
                .equals(&r1.mul(&r2).add(&r1.mul(&r3))));
            assert!(r1.mul(&r1.recip().unwrap()).equals(&RatFunc::one()));
            assert!(r1.div(&r1).unwrap().equals(&RatFunc::one()));
        }
    }
    println!("ACCEPTANCE 1: PASS - 1000 exact algebra/grading/Leibniz cases");
}

/// Criterion 2: `verify "a3" --index 3` passes under the printed
/// generator and the multiplier extraction yields k2 + 2 k3 x.
#[test]
fn acceptance_2_fundamental_invariant() {
    let (code, _) = difinv(&["verify", "a3", "--index", "3"]);
    assert_eq!(code, 0, "verify a3 --index 3 must exit 0");
    let v = builtin_generator_order5();
    let mu = multiplier(&v).unwrap();
    let k2 = DiffPoly::param("k2");
    let k3 = DiffPoly::param("k3");
    let lin = k2.add(&k3.mul(&DiffPoly::x()).scale(&int(2)));
    assert_eq!(mu, lin, "multiplier must be k2 + 2 k3 x");
    println!("ACCEPTANCE 2: PASS - a3 verifies at index 3; mu = k2 + 2*k3*x");
}

/// Criterion 3: deterministic verdicts for all 15 printed entries; every
/// rejected entry is repaired inside the same (weight, order) ansatz
/// space; nothing is silently altered.
#[test]
fn acceptance_3_catalog_report() {
    let gens = Generators::standard().unwrap();
    let rep1 = catalog_report(&gens).unwrap();
    let rep2 = catalog_report(&gens).unwrap();
    assert_eq!(
        serde_json::to_string(&rep1.to_json()).unwrap(),
        serde_json::to_string(&rep2.to_json()).unwrap(),
        "the catalog report must be deterministic"
    );
    assert_eq!(rep1.entries.len(), 15);
    let mut rejected = Vec::new();
    for e in &rep1.entries {
        // the printed expression is carried verbatim next to the verdicts
        assert!(!e.printed_expr.is_empty());
        if !e.verdict.is_verified() {
            rejected.push(e.name.clone());
            let repaired = e
                .repair
                .as_ref()
                .unwrap_or_else(|| panic!("{} rejected with no repair", e.name));
            // checker-verified repair
            assert!(check_absolute(&repaired.expr.as_rat(), &gens.arbiter)
                .unwrap()
                .is_verified());
            // the repair generator lives in the same (weight, order) space
            let g = e.repair_generator.as_ref().unwrap();
            assert_eq!(g.weight(), Weight::Isobaric(20));
            assert!(g.max_order() <= 3);
            assert!(check_relative(g, &int(20), &gens.arbiter, &gens.arbiter_mu)
                .unwrap()
                .is_verified());
        }
    }
    // the known-risk signs on S1/R0 resolve in favour of the catalog:
    // both verify under the induced generator and both carry residual
    // certificates under the printed generator.
    for name in ["S1", "R0"] {
        let e = rep1.entries.iter().find(|e| e.name == name).unwrap();
        assert!(e.verdict.is_verified());
        assert!(e.verdict_printed_generator.residual().is_some());
    }
    assert_eq!(rejected, vec!["I9".to_string()]);
    println!(
        "ACCEPTANCE 3: PASS - 15 deterministic verdicts; rejected = {rejected:?}, each repaired in its (weight, order) space"
    );
}

/// Criterion 4: the generator induced from f = 1, x, x^2 is a single
/// self-consistent generator: a3 has index 3, every repaired catalog
/// entry verifies at its stated index, the I entries annihilate, and the
/// discrepancy with the printed generator is listed.
#[test]
fn acceptance_4_cross_route_consistency() {
    // assemble the generator from the three seeds
    let parts = [
        induced_generator(&DiffPoly::one())
            .unwrap()
            .scale(&DiffPoly::param("k1")),
        induced_generator(&DiffPoly::x())
            .unwrap()
            .scale(&DiffPoly::param("k2")),
        induced_generator(&DiffPoly::x().pow(2))
            .unwrap()
            .scale(&DiffPoly::param("k3")),
    ];
    let v = parts[0].add(&parts[1]).add(&parts[2]);
    let mu = multiplier(&v).unwrap();
    // (a) the fundamental invariant
    assert_eq!(
        infer_index(&DiffPoly::coef(3, 0), &v, &mu).unwrap(),
        Some(int(3))
    );
    // (b) the repaired catalog under this generator
    let gens = Generators::standard().unwrap();
    let rep = catalog_report(&gens).unwrap();
    let repaired = rep.repaired_catalog();
    assert_eq!(repaired.len(), 15);
    let expected_indices: BTreeMap<&str, i64> =
        [("S0", 3), ("R0", 8), ("S1", 4), ("S2", 8), ("S3", 12)]
            .into_iter()
            .collect();
    for inv in &repaired {
        match inv.kind {
            Kind::Relative => {
                let m = expected_indices[inv.name.as_str()];
                assert_eq!(inv.index, int(m));
                assert!(
                    check_relative(inv.expr.as_poly().unwrap(), &int(m), &v, &mu)
                        .unwrap()
                        .is_verified(),
                    "{} must verify at index {m}",
                    inv.name
                );
            }
            Kind::Absolute => {
                assert!(
                    check_absolute(&inv.expr.as_rat(), &v).unwrap().is_verified(),
                    "{} must annihilate",
                    inv.name
                );
            }
        }
    }
    // the printed-generator discrepancy is listed: exactly the phi_4 slot
    assert_eq!(rep.generator_discrepancies.len(), 1);
    let (slot, diff) = &rep.generator_discrepancies[0];
    assert_eq!(*slot, 4);
    assert_eq!(
        diff,
        &DiffPoly::coef(3, 0)
            .mul(&DiffPoly::param("k3"))
            .scale(&int(12))
    );
    println!(
        "ACCEPTANCE 4: PASS - induced generator self-consistent; printed phi_4 differs by 12*a3*k3"
    );
}

/// Criterion 5: phi_q carries index theta(q) = m + q(sigma + 1) and
/// chi_q is absolute, for q = 1..3 over the verified seeds; orders grow
/// by exactly one per step.
#[test]
fn acceptance_5_sequences() {
    let v = arbiter_generator_order5();
    let mu = multiplier(&v).unwrap();
    let cat = Catalog::standard();
    let s0 = cat.get("S0").unwrap();
    for name in ["S1", "S2", "S3", "R0"] {
        let seed = cat.get(name).unwrap();
        let m: i64 = seed.index.numer().try_into().unwrap();
        let phis = phi_seq(seed, 3, s0, 12).unwrap();
        let chis = chi_seq(seed, 3, s0, 12).unwrap();
        for (qm1, (ph, ch)) in phis.iter().zip(&chis).enumerate() {
            let q = qm1 as u32 + 1;
            assert_eq!(ph.index, int(theta(m, 3, q)), "{name} phi_{q} index");
            assert_eq!(ph.order, seed.order + q, "{name} phi_{q} order");
            assert!(
                check_relative(
                    ph.expr.as_poly().unwrap(),
                    &ph.index,
                    &v,
                    &mu
                )
                .unwrap()
                .is_verified(),
                "{name} phi_{q}"
            );
            assert!(
                check_absolute(&ch.expr.as_rat(), &v).unwrap().is_verified(),
                "{name} chi_{q}"
            );
            assert_eq!(ch.order, seed.order + q, "{name} chi_{q} order");
            // every absolute produced here is a ratio of isobaric
            // polynomials of equal weight
            assert!(
                difinv_core::halphen::equal_weight_ratio(&ch.expr.as_rat()),
                "{name} chi_{q} weight ratio"
            );
        }
    }
    println!("ACCEPTANCE 5: PASS - phi_q/chi_q verified for q = 1..3 over S1, S2, S3, R0");
}

/// Criterion 6: rank-based counts 4, 7, 10 at p = 1, 2, 3; the printed
/// closed-form count (6, 3, 0) is flagged as inconsistent.
#[test]
fn acceptance_6_counting() {
    let v = builtin_generator_order5();
    let expected = [(1u32, 4usize, 6i64), (2, 7, 3), (3, 10, 0)];
    for (p, count, gamma) in expected {
        let rep = invariant_count(&v, p, 8, 0, 12).unwrap();
        assert_eq!(rep.count, count, "count at p = {p}");
        assert_eq!(rep.gamma_formula, gamma, "formula at p = {p}");
        assert!(
            !rep.consistent_with_formula,
            "the printed formula must be flagged at p = {p}"
        );
    }
    println!("ACCEPTANCE 6: PASS - counts 4/7/10 at p = 1/2/3; printed formula 6/3/0 flagged");
}

/// Criterion 7: the verified first-prolongation quadruple is
/// functionally independent - Jacobian rank 4 at 100 seeded points.
#[test]
fn acceptance_7_functional_independence() {
    let cat = Catalog::standard();
    let invs: Vec<RatFunc> = ["I0", "I1", "I2", "I3"]
        .iter()
        .map(|n| cat.get(n).unwrap().expr.as_rat())
        .collect();
    let mut vars = vec![JetVar::Indep];
    for j in [3u32, 4, 5] {
        for k in 0..=1 {
            vars.push(JetVar::Coef(j, k));
        }
    }
    let rank = jacobian_rank(&invs, &vars, 100, 0).unwrap();
    assert_eq!(rank, 4);
    println!("ACCEPTANCE 7: PASS - Jacobian rank 4 over 100 seeded points with a3 != 0");
}

/// Criterion 8: over the symbolic Mobius family every verified relative
/// invariant of index m transforms with exactly (d xi/d z)^m, the
/// undifferentiated base fails, and A1 = A2 = 0 identically.
#[test]
fn acceptance_8_transformation_law() {
    let te = transform_coefficients(5, &[3, 4, 5], EtaMode::CanonicalPower).unwrap();
    let cat = Catalog::standard();
    for name in RELATIVE_NAMES {
        let inv = cat.get(name).unwrap();
        let m: i64 = inv.index.numer().try_into().unwrap();
        let rep =
            verify_transformation_law(name, inv.expr.as_poly().unwrap(), m, &te).unwrap();
        assert_eq!(rep.base, LawBase::XiPrime, "{name} law base");
        assert!(
            !rep.xi_base_also_holds,
            "{name}: the undifferentiated base xi^m must fail"
        );
        assert!(rep.normal_form_preserved, "{name}: A1 = A2 = 0");
    }
    println!(
        "ACCEPTANCE 8: PASS - factor is (d xi/d z)^m for all verified relatives; A1 = A2 = 0"
    );
}

/// Criterion 9: D_x(I)/D_x(I0) is checker-verified absolute for
/// I in {I1, I2, I3}, and the printed closed form for I1* (with r read
/// as sigma) is confirmed by exact comparison.
#[test]
fn acceptance_9_invariant_differentiation() {
    let v = arbiter_generator_order5();
    let cat = Catalog::standard();
    let i0 = cat.get("I0").unwrap();
    for name in ["I1", "I2", "I3"] {
        let rep = invariant_derivative(cat.get(name).unwrap(), i0, &v).unwrap();
        assert!(rep.verdict.is_verified(), "{name}* must verify");
        if name == "I1" {
            assert_eq!(
                rep.closed_form_confirmed,
                Some(true),
                "the printed closed form must be confirmed"
            );
        }
    }
    println!(
        "ACCEPTANCE 9: PASS - zeta D_x produces verified absolutes; printed I1* closed form confirmed"
    );
}

/// Criterion 10: byte-stable JSON round trip, the exit-code scenario
/// matrix, and parse/print inversion on 500 random polynomials.
#[test]
fn acceptance_10_interface() {
    // JSON round trip over every catalog record plus derived entries
    let cat = Catalog::standard();
    let mut records: Vec<_> = RELATIVE_NAMES
        .iter()
        .chain(ABSOLUTE_NAMES.iter())
        .map(|n| cat.get(n).unwrap().clone())
        .collect();
    let s0 = cat.get("S0").unwrap();
    records.extend(phi_seq(cat.get("S1").unwrap(), 2, s0, 12).unwrap());
    for inv in &records {
        let text = serde_json::to_string(&emit::invariant_to_json(inv)).unwrap();
        let back =
            emit::invariant_from_json(&serde_json::from_str(&text).unwrap()).unwrap();
        let again = serde_json::to_string(&emit::invariant_to_json(&back)).unwrap();
        assert_eq!(text, again, "round trip drifted for {}", inv.name);
    }
    // exit-code matrix
    let (code, _) = difinv(&["verify", "a3", "--index", "3"]);
    assert_eq!(code, 0, "verified entry exits 0");
    let (code, _) = difinv(&["verify", "a3", "--index", "2"]);
    assert_eq!(code, 1, "wrong index exits 1");
    let (code, _) = difinv(&["verify", "a3 +* a4"]);
    assert_eq!(code, 2, "malformed expression exits 2");
    let (code, _) = difinv(&["--max-jet-order", "3", "generate", "--seed", "S1", "--steps", "9"]);
    assert_eq!(code, 3, "jet-order limit exits 3");
    let (code, _) = difinv(&["no-such-command"]);
    assert_eq!(code, 2, "usage error exits 2");
    // parse/print inversion on 500 random polynomials
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    let vars = vec![
        JetVar::Indep,
        JetVar::Coef(3, 0),
        JetVar::Coef(3, 1),
        JetVar::Coef(4, 0),
        JetVar::Coef(4, 3),
        JetVar::Coef(5, 2),
    ];
    for case in 0..500 {
        let p = rand_poly(&mut rng, &vars);
        let reparsed = parse(&p.to_string()).unwrap();
        assert_eq!(reparsed, p, "case {case}: parse(print(p)) != p");
    }
    println!(
        "ACCEPTANCE 10: PASS - byte-stable JSON, exit codes 0/1/2/3, 500 parse/print inversions"
    );
}
