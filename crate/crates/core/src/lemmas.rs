//! Executable energy identities and inequalities.
//!
//! Algebraic statements are checked exactly on big integers, usually after
//! raising both sides to a power that clears fractional exponents. Anything
//! involving `E_{3/2}` is an interval comparison. Asymptotic statements carry
//! a configured constant and report the constant-free ratio `lhs / rhs`.
//!
//! Inputs lacking a statement's hypothesis (convexity, usually) still run;
//! the result is flagged as a negative control.

use std::ops::Mul;

use num_bigint::BigUint;
use serde_json::json;
use thiserror::Error;

use crate::check::{CheckResult, Quantity, Relation};
use crate::energy::{
    additive_energy, energy_fractional, restricted_energy_sum, shifted_energy_sum, EnergyError,
};
use crate::interval::Interval;
use crate::rep::{level_count, rep_function, RepKind};
use crate::scalar::Rational;
use crate::set::FiniteSet;

/// Relative error allowed for `powf`/`log2` based right-hand sides.
const POWER_LAW_REL_ERROR: f64 = 1e-12;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CheckError {
    #[error("A_s is empty for s = {0}")]
    EmptyRestriction(Rational),
    #[error("product-set statements need positive elements")]
    NonpositiveElements,
    #[error("statement needs |A| >= 2 (log|A| in a denominator), got {0}")]
    SetTooSmall(usize),
    #[error(transparent)]
    Energy(#[from] EnergyError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    fn combine(self, a: &FiniteSet, b: &FiniteSet) -> FiniteSet {
        match self {
            Sign::Plus => a.sumset(b),
            Sign::Minus => a.diffset(b),
        }
    }

    fn suffix(self) -> &'static str {
        match self {
            Sign::Plus => "plus",
            Sign::Minus => "minus",
        }
    }
}

fn big(x: usize) -> BigUint {
    BigUint::from(x)
}

fn non_convex(a: &FiniteSet) -> bool {
    a.is_convex().is_none()
}

fn f64_to_rational(c: f64) -> Rational {
    Rational::from_f64(c).expect("finite constant")
}

/// `n^{14/9} / (log2 n)^{2/9}`.
pub fn sumset_lower_bound(n: usize) -> f64 {
    let n = n as f64;
    n.powf(14.0 / 9.0) / n.log2().powf(2.0 / 9.0)
}

/// `n^{8/5} / (log2 n)^{2/5}`.
pub fn diffset_lower_bound(n: usize) -> f64 {
    let n = n as f64;
    n.powf(8.0 / 5.0) / n.log2().powf(2.0 / 5.0)
}

fn power_law(x: f64) -> Quantity {
    Quantity::approx(Interval::with_relative_error(x, POWER_LAW_REL_ERROR))
}

/// `E_3(A) = Σ_{s ∈ A-A} E(A, A_s)`, exact.
pub fn check_energy_identity(a: &FiniteSet) -> CheckResult {
    let e3 = a.self_difference_rep().power_sum(3);
    let rhs = shifted_energy_sum(a);
    CheckResult::compare(
        "energy_identity",
        Relation::Eq,
        Quantity::from_biguint(&e3),
        Quantity::from_u128(rhs),
        None,
    )
}

/// `|(A+A) ∩ (A+A+s)| >= |A + A_s|`, together with the inclusion
/// `A + A_s ⊆ (A+A)_s` that implies it.
pub fn check_inclusion_sumset(a: &FiniteSet, s: &Rational) -> CheckResult {
    let aa = a.sumset(a);
    let big_side = aa.shift_intersect(s);
    let small_side = a.sumset(&a.shift_intersect(s));
    let missing = small_side.first_not_in(&big_side).cloned();
    let mut c = CheckResult::compare(
        "inclusion_sumset",
        Relation::Ge,
        Quantity::exact(big_side.len() as i64),
        Quantity::exact(small_side.len() as i64),
        None,
    );
    let mut w = json!({ "s": s });
    if let Some(x) = &missing {
        w["missing"] = json!(x);
        c = c.fail();
    }
    c.with_witness(w)
}

/// `A_s + B ⊆ (A+B)_s`, element by element.
pub fn check_as_inclusion(a: &FiniteSet, b: &FiniteSet, s: &Rational) -> CheckResult {
    let lhs = a.shift_intersect(s).sumset(b);
    let rhs = a.sumset(b).shift_intersect(s);
    let missing = lhs.first_not_in(&rhs).cloned();
    let mut c = CheckResult::subset("as_inclusion", lhs.len(), rhs.len(), missing.as_ref());
    let mut w = c.witness.take().unwrap_or_else(|| json!({}));
    w["s"] = json!(s);
    c.with_witness(w)
}

/// `(Σ_s E(A_s,B))^3 <= E_3(A)^2 E_3(B)`, the cubed form of
/// `Σ_s E(A_s,B) <= E_3(A)^{2/3} E_3(B)^{1/3}`.
pub fn check_lemma_24(a: &FiniteSet, b: &FiniteSet) -> Result<CheckResult, CheckError> {
    let sum = restricted_energy_sum(a, b)?;
    let e3a = a.self_difference_rep().power_sum(3);
    let e3b = b.self_difference_rep().power_sum(3);
    let lhs = sum.pow(3);
    let rhs = &e3a * &e3a * &e3b;
    Ok(CheckResult::compare(
        "lemma_24",
        Relation::Le,
        Quantity::from_biguint(&lhs),
        Quantity::from_biguint(&rhs),
        None,
    )
    .with_witness(json!({
        "restrictedSum": sum.to_string(),
        "E3A": e3a.to_string(),
        "E3B": e3b.to_string(),
        "equality": lhs == rhs,
    })))
}

/// `E_{3/2}(A)^2 |B|^2 <= (Σ_s E(A_s,B)) · E(A, A+B)`.
pub fn check_lemma_25(a: &FiniteSet, b: &FiniteSet) -> Result<CheckResult, CheckError> {
    let e15 = energy_fractional(a);
    let lhs = e15
        .interval()
        .powi(2)
        .mul(Interval::from_u128((b.len() * b.len()) as u128));
    let sum = restricted_energy_sum(a, b)?;
    let cross = additive_energy(a, &a.sumset(b));
    let rhs = &sum * BigUint::from(cross);
    Ok(CheckResult::compare(
        "lemma_25",
        Relation::Le,
        Quantity::approx(lhs),
        Quantity::from_biguint(&rhs),
        None,
    )
    .with_witness(json!({
        "E15": e15,
        "restrictedSum": sum.to_string(),
        "energyAWithSumset": cross.to_string(),
    })))
}

/// Per-shift Cauchy–Schwarz step, squared:
/// `|A_s|^3 |B|^2 <= E(A_s,B) · |A_s+B| · |A_s|`.
pub fn check_cs_step(
    a: &FiniteSet,
    b: &FiniteSet,
    s: &Rational,
) -> Result<CheckResult, CheckError> {
    let a_s = a.shift_intersect(s);
    if a_s.is_empty() {
        return Err(CheckError::EmptyRestriction(s.clone()));
    }
    let k = big(a_s.len());
    let lhs = k.pow(3) * big(b.len()).pow(2);
    let e = BigUint::from(additive_energy(&a_s, b));
    let rhs = &e * big(a_s.sumset(b).len()) * &k;
    Ok(CheckResult::compare(
        "cs_step",
        Relation::Le,
        Quantity::from_biguint(&lhs),
        Quantity::from_biguint(&rhs),
        None,
    )
    .with_witness(json!({ "s": s, "restrictedSize": a_s.len(), "energy": e.to_string() })))
}

/// `E(A,B)^2 <= C^2 |A|^2 |B|^3`, the squared form of `E(A,B) ≪ |A||B|^{3/2}`.
pub fn check_lemma_23(a: &FiniteSet, b: &FiniteSet, constant: f64) -> CheckResult {
    let e = BigUint::from(additive_energy(a, b));
    let lhs = e.pow(2);
    let rhs = big(a.len()).pow(2) * big(b.len()).pow(3);
    let c = f64_to_rational(constant);
    let c2 = &c * &c;
    CheckResult::compare(
        "lemma_23",
        Relation::Le,
        Quantity::from_biguint(&lhs),
        Quantity::from_biguint(&rhs),
        Some(&c2),
    )
    .with_constant(constant)
    .with_witness(json!({ "energy": e.to_string() }))
    .negative_control(non_convex(a))
}

/// Dyadic sweep `τ = 1, 2, 4, … <= min(|A|,|B|)` of
/// `|{x : δ_{A,B}(x) >= τ}| <= C · M^3 |A||B|^2 / τ^3`, with `M = 1` unless a
/// doubling constant is supplied. Reports the worst `τ`.
pub fn check_tail_bound(
    a: &FiniteSet,
    b: &FiniteSet,
    constant: f64,
    doubling: Option<&Rational>,
) -> CheckResult {
    let delta = rep_function(a, b, RepKind::Difference);
    let m = doubling.cloned().unwrap_or_else(Rational::one);
    let m3 = m.pow(3);
    let base = &m3 * &Rational::from((a.len() * b.len() * b.len()) as i64);
    let c = f64_to_rational(constant);
    let top = a.len().min(b.len()).max(1);
    let mut sweep = Vec::new();
    let mut worst: Option<(Rational, Rational, Rational)> = None; // (ratio, lhs, rhs)
    let mut all_hold = true;
    let mut tau = 1usize;
    while tau <= top {
        let tau_q = Rational::from(tau as i64);
        let count = Rational::from(level_count(&delta, &tau_q) as i64);
        let bound = base.div(&tau_q.pow(3)).expect("tau >= 1");
        let ratio = count.div(&bound).expect("bound > 0");
        if count > &bound * &c {
            all_hold = false;
        }
        sweep.push(json!({ "tau": tau, "count": count, "bound": bound, "ratio": ratio.to_f64() }));
        if worst.as_ref().is_none_or(|w| ratio > w.0) {
            worst = Some((ratio, count, bound));
        }
        tau *= 2;
    }
    let (_, lhs, rhs) = worst.expect("sweep has at least tau = 1");
    let name = if doubling.is_some() {
        "tail_bound_doubling"
    } else {
        "tail_bound"
    };
    let mut result = CheckResult::compare(
        name,
        Relation::Le,
        Quantity::Exact(lhs),
        Quantity::Exact(rhs),
        Some(&c),
    )
    .with_constant(constant)
    .with_witness(json!({ "M": m, "sweep": sweep }))
    .negative_control(doubling.is_none() && non_convex(a));
    if !all_hold {
        result = result.fail();
    }
    result
}

/// `E_2(A)^3 <= C |A|^3 E_{3/2}(A)^2`, plus the convexity-free split step
/// `Σ_{δ<Δ} δ^2 <= √Δ · E_{3/2}(A)` (squared) for `Δ = 1, 2, 4, …` past the
/// largest multiplicity.
pub fn check_e2_e15(a: &FiniteSet, constant: f64) -> CheckResult {
    let delta = a.self_difference_rep();
    let e2 = delta.power_sum(2);
    let e15 = energy_fractional(a).interval();
    let n3 = Interval::from_u128((a.len() as u128).pow(3));
    let rhs = n3.mul(e15.powi(2));
    let c = f64_to_rational(constant);
    let mut result = CheckResult::compare(
        "e2_e15",
        Relation::Le,
        Quantity::from_biguint(&e2.pow(3)),
        Quantity::approx(rhs),
        Some(&c),
    )
    .with_constant(constant)
    .negative_control(non_convex(a));

    let mut splits = Vec::new();
    let mut split_failed = false;
    let max = delta.max_multiplicity();
    let mut threshold = 1u64;
    loop {
        let low: u128 = delta
            .counts()
            .iter()
            .filter(|&&d| d < threshold)
            .map(|&d| d as u128 * d as u128)
            .sum();
        let split = CheckResult::compare(
            "e2_e15_split",
            Relation::Le,
            Quantity::from_biguint(&BigUint::from(low).pow(2)),
            Quantity::approx(e15.powi(2).mul(Interval::from_u128(threshold as u128))),
            None,
        );
        if !split.passed() {
            split_failed = true;
        }
        splits
            .push(json!({ "delta": threshold, "low": low.to_string(), "verdict": split.verdict }));
        if threshold > max {
            break;
        }
        threshold *= 2;
    }
    result = result.with_witness(
        json!({ "E2": e2.to_string(), "E15": energy_fractional(a), "splits": splits }),
    );
    if split_failed {
        result = result.fail();
    }
    result
}

/// `|A+A| >= c · |A|^{14/9} / (log2 |A|)^{2/9}`.
pub fn check_theorem_11(a: &FiniteSet, constant: f64) -> Result<CheckResult, CheckError> {
    if a.len() < 2 {
        return Err(CheckError::SetTooSmall(a.len()));
    }
    let lhs = a.doubling_stats().sumset_size;
    let c = f64_to_rational(constant);
    Ok(CheckResult::compare(
        "theorem_11",
        Relation::Ge,
        Quantity::exact(lhs as i64),
        power_law(sumset_lower_bound(a.len())),
        Some(&c),
    )
    .with_constant(constant)
    .negative_control(non_convex(a)))
}

/// Both sumset and difference-set bounds for a positive set, with the
/// multiplicative doubling `M = |AA|/|A|` recorded. Constants depend on `M`,
/// so the margins are reported per `M`.
pub fn check_theorem_12(a: &FiniteSet, constant: f64) -> Result<Vec<CheckResult>, CheckError> {
    if a.min().is_some_and(|m| !m.is_positive()) {
        return Err(CheckError::NonpositiveElements);
    }
    if a.len() < 2 {
        return Err(CheckError::SetTooSmall(a.len()));
    }
    let stats = a.doubling_stats();
    let c = f64_to_rational(constant);
    let witness = json!({ "M": stats.multiplicative, "productsetSize": stats.productset_size });
    let plus = CheckResult::compare(
        "theorem_12_plus",
        Relation::Ge,
        Quantity::exact(stats.sumset_size as i64),
        power_law(sumset_lower_bound(a.len())),
        Some(&c),
    );
    let minus = CheckResult::compare(
        "theorem_12_minus",
        Relation::Ge,
        Quantity::exact(a.self_difference_rep().len() as i64),
        power_law(diffset_lower_bound(a.len())),
        Some(&c),
    );
    Ok(vec![
        plus.with_constant(constant).with_witness(witness.clone()),
        minus.with_constant(constant).with_witness(witness),
    ])
}

/// Mixed-summand bound
/// `|A±B|^9 >= c |A|^6 |B|^8 / ((log|A|)^{4/3} (log|B|)^{8/3})` and its two
/// premises: `|A|^2|B|^2 <= E(A,B) |A±B|` (exact) and
/// `E(A,B)^3 <= E_{3/2}(A)^2 E_3(B)` (interval).
pub fn check_remark_mixed(
    a: &FiniteSet,
    b: &FiniteSet,
    sign: Sign,
    constant: f64,
) -> Result<Vec<CheckResult>, CheckError> {
    if a.len() < 2 || b.len() < 2 {
        return Err(CheckError::SetTooSmall(a.len().min(b.len())));
    }
    let combined = sign.combine(a, b).len();
    let control = non_convex(a) || non_convex(b);
    let (na, nb) = (a.len() as f64, b.len() as f64);
    let rhs = na.powi(6) * nb.powi(8) / (na.log2().powf(4.0 / 3.0) * nb.log2().powf(8.0 / 3.0));
    let c = f64_to_rational(constant);
    let final_check = CheckResult::compare(
        format!("remark_mixed_{}", sign.suffix()),
        Relation::Ge,
        Quantity::from_biguint(&big(combined).pow(9)),
        power_law(rhs),
        Some(&c),
    )
    .with_constant(constant)
    .negative_control(control);

    let e = BigUint::from(additive_energy(a, b));
    let cs = CheckResult::compare(
        format!("remark_mixed_{}_cs_premise", sign.suffix()),
        Relation::Le,
        Quantity::from_biguint(&(big(a.len()).pow(2) * big(b.len()).pow(2))),
        Quantity::from_biguint(&(&e * big(combined))),
        None,
    );
    let e3b = b.self_difference_rep().power_sum(3);
    let holder_rhs = energy_fractional(a)
        .interval()
        .powi(2)
        .mul(Interval::from_biguint(&e3b));
    let holder = CheckResult::compare(
        "remark_mixed_holder_premise",
        Relation::Le,
        Quantity::from_biguint(&e.pow(3)),
        Quantity::approx(holder_rhs),
        None,
    )
    .with_witness(json!({ "energy": e.to_string(), "E3B": e3b.to_string() }));
    Ok(vec![final_check, cs, holder])
}

/// `|A-A|^2 |A±B|^3 >= c |A|^6 |B|^2 / ((log|A|)^{4/3} (log|B|)^{2/3})` and
/// its Hölder premise `|A|^6 <= E_{3/2}(A)^2 |A-A|`.
pub fn check_remark_diff(
    a: &FiniteSet,
    b: &FiniteSet,
    sign: Sign,
    constant: f64,
) -> Result<Vec<CheckResult>, CheckError> {
    let premise = check_holder_premise(a);
    if a.len() < 2 || b.len() < 2 {
        return Err(CheckError::SetTooSmall(a.len().min(b.len())));
    }
    let diff = a.self_difference_rep().len();
    let combined = sign.combine(a, b).len();
    let (na, nb) = (a.len() as f64, b.len() as f64);
    let rhs = na.powi(6) * nb.powi(2) / (na.log2().powf(4.0 / 3.0) * nb.log2().powf(2.0 / 3.0));
    let c = f64_to_rational(constant);
    let final_check = CheckResult::compare(
        format!("remark_diff_{}", sign.suffix()),
        Relation::Ge,
        Quantity::from_biguint(&(big(diff).pow(2) * big(combined).pow(3))),
        power_law(rhs),
        Some(&c),
    )
    .with_constant(constant)
    .negative_control(non_convex(a) || non_convex(b));
    Ok(vec![final_check, premise])
}

/// `|A|^6 <= E_{3/2}(A)^2 |A-A|` (Hölder).
pub fn check_holder_premise(a: &FiniteSet) -> CheckResult {
    let lhs = big(a.len()).pow(6);
    let rhs = energy_fractional(a)
        .interval()
        .powi(2)
        .mul(Interval::from_u128(a.self_difference_rep().len() as u128));
    CheckResult::compare(
        "remark_diff_holder_premise",
        Relation::Le,
        Quantity::from_biguint(&lhs),
        Quantity::approx(rhs),
        None,
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::check::Verdict;

    fn set(v: &[i64]) -> FiniteSet {
        FiniteSet::from_ints(v).unwrap()
    }

    fn q(s: &str) -> Rational {
        s.parse().unwrap()
    }

    fn exact_str(x: &Quantity) -> String {
        match x {
            Quantity::Exact(r) => r.to_string(),
            Quantity::Approx(_) => panic!("expected exact quantity"),
        }
    }

    #[test]
    fn energy_identity_examples() {
        let c = check_energy_identity(&set(&[1, 2, 4]));
        assert!(c.holds() && c.exact);
        assert_eq!(exact_str(&c.lhs), "33");
        assert_eq!(exact_str(&c.rhs), "33");
        let c = check_energy_identity(&set(&[5]));
        assert_eq!(exact_str(&c.lhs), "1");
        assert!(c.holds());
    }

    #[test]
    fn inclusion_examples() {
        let a = set(&[1, 2, 4]);
        let c = check_inclusion_sumset(&a, &q("1"));
        assert!(c.holds());
        assert_eq!(
            (exact_str(&c.lhs), exact_str(&c.rhs)),
            ("4".into(), "3".into())
        );
        let c = check_inclusion_sumset(&a, &q("0"));
        assert_eq!(exact_str(&c.lhs), exact_str(&c.rhs));
        assert!(c.holds());
        let ap = set(&[1, 2, 3]);
        // (A+A)_2 = {4,5,6}, A + A_2 = A + {3} = {4,5,6}
        let c = check_inclusion_sumset(&ap, &q("2"));
        assert!(c.holds());
        assert_eq!(
            (exact_str(&c.lhs), exact_str(&c.rhs)),
            ("3".into(), "3".into())
        );
    }

    #[test]
    fn as_inclusion_examples() {
        let a = set(&[1, 2, 4]);
        let c = check_as_inclusion(&a, &a, &q("1"));
        assert!(c.holds());
        assert_eq!(exact_str(&c.lhs), "3");
        let c = check_as_inclusion(&a, &a, &q("0"));
        assert!(c.holds());
        assert_eq!(c.ratio, 1.0);
    }

    #[test]
    fn lemma_24_examples() {
        let a = set(&[1, 2, 4]);
        let c = check_lemma_24(&a, &a).unwrap();
        assert!(c.holds());
        assert_eq!(exact_str(&c.lhs), (33u64.pow(3)).to_string());
        assert_eq!(exact_str(&c.lhs), exact_str(&c.rhs));
        let c = check_lemma_24(&a, &set(&[1, 2, 3])).unwrap();
        assert!(c.holds());
        let b = set(&[3, 5, 6, 20]);
        let c = check_lemma_24(&set(&[1]), &b).unwrap();
        assert!(c.holds());
        assert_eq!(exact_str(&c.lhs), "64");
    }

    #[test]
    fn lemma_25_worked_instance() {
        let a = set(&[1, 2, 4]);
        let c = check_lemma_25(&a, &a).unwrap();
        assert_eq!(c.verdict, Verdict::Holds);
        assert_eq!(exact_str(&c.rhs), "1320");
        let lhs = match &c.lhs {
            Quantity::Approx(e) => *e,
            Quantity::Exact(_) => panic!(),
        };
        let closed = (3.0 * 3f64.sqrt() + 6.0).powi(2) * 9.0;
        assert!((lhs.value - closed).abs() < 1e-9);
        assert!((lhs.value - 1128.18).abs() < 5e-3);
        let c = check_lemma_25(&set(&[5]), &set(&[1, 2])).unwrap();
        assert_eq!(c.verdict, Verdict::Holds);
        assert_eq!(exact_str(&c.rhs), "4");
    }

    #[test]
    fn cs_step_examples() {
        let a = set(&[1, 2, 4]);
        let c = check_cs_step(&a, &a, &q("1")).unwrap();
        assert!(c.holds());
        assert_eq!(
            (exact_str(&c.lhs), exact_str(&c.rhs)),
            ("9".into(), "9".into())
        );
        let c = check_cs_step(&a, &a, &q("0")).unwrap();
        assert_eq!(
            (exact_str(&c.lhs), exact_str(&c.rhs)),
            ("243".into(), "270".into())
        );
        let c = check_cs_step(&set(&[3]), &set(&[8]), &q("0")).unwrap();
        assert_eq!(
            (exact_str(&c.lhs), exact_str(&c.rhs)),
            ("1".into(), "1".into())
        );
        assert_eq!(
            check_cs_step(&a, &a, &q("5")).unwrap_err(),
            CheckError::EmptyRestriction(q("5"))
        );
    }

    #[test]
    fn lemma_23_examples() {
        let sq = set(&[1, 4, 9, 16]);
        let c = check_lemma_23(&sq, &sq, 1.0);
        assert!(c.holds() && !c.negative_control);
        assert_eq!(
            (exact_str(&c.lhs), exact_str(&c.rhs)),
            ("784".into(), "1024".into())
        );
        let c = check_lemma_23(&set(&[5]), &sq, 1.0);
        assert!(c.holds());
        assert_eq!(exact_str(&c.rhs), "64");
        let ap = FiniteSet::from_ints(&(1..=64).collect::<Vec<_>>()).unwrap();
        let c = check_lemma_23(&ap, &ap, 1.0);
        assert!(c.negative_control);
        assert_eq!(c.verdict, Verdict::Fails);
    }

    #[test]
    fn tail_bound_examples() {
        let sq = set(&[1, 4, 9, 16]);
        let c = check_tail_bound(&sq, &sq, 1.0, None);
        assert!(c.holds());
        let sweep = c.witness.as_ref().unwrap()["sweep"]
            .as_array()
            .unwrap()
            .clone();
        assert_eq!(sweep.len(), 3);
        assert_eq!(sweep[1]["count"], "1");
        assert_eq!(sweep[1]["bound"], "8");
        assert_eq!(sweep[1]["ratio"], 0.125);
        // τ = 1: |A-B| vs |A||B|^2
        assert_eq!(sweep[0]["count"], "13");
        assert_eq!(sweep[0]["bound"], "64");
    }

    #[test]
    fn e2_e15_examples() {
        let c = check_e2_e15(&set(&[1, 2, 4]), 1.0);
        assert_eq!(c.verdict, Verdict::Holds);
        assert_eq!(exact_str(&c.lhs), "3375");
        let rhs = c.rhs.approx_value();
        assert!((rhs - 27.0 * (3.0 * 3f64.sqrt() + 6.0).powi(2)).abs() < 1e-9);
        let c = check_e2_e15(&set(&[5]), 1.0);
        assert!(c.holds());
    }

    #[test]
    fn theorem_11_examples() {
        let two = set(&[1, 2]);
        let c = check_theorem_11(&two, 1.0).unwrap();
        assert!(c.holds());
        assert!((c.rhs.approx_value() - 2f64.powf(14.0 / 9.0)).abs() < 1e-12);
        assert_eq!(
            check_theorem_11(&set(&[3]), 1.0).unwrap_err(),
            CheckError::SetTooSmall(1)
        );
    }

    #[test]
    fn theorem_12_examples() {
        let g = FiniteSet::from_ints(&(0..32).map(|i| 1i64 << i).collect::<Vec<_>>()).unwrap();
        let res = check_theorem_12(&g, 1.0).unwrap();
        assert_eq!(res.len(), 2);
        assert!(res.iter().all(CheckResult::holds));
        assert_eq!(exact_str(&res[0].lhs), "528");
        assert_eq!(res[0].witness.as_ref().unwrap()["M"], "63/32");
        let c = check_theorem_12(&set(&[1, 2]), 1.0).unwrap();
        assert_eq!(c[0].witness.as_ref().unwrap()["M"], "3/2");
        assert_eq!(
            check_theorem_12(&set(&[0, 2]), 1.0).unwrap_err(),
            CheckError::NonpositiveElements
        );
    }

    #[test]
    fn remark_examples() {
        let a = set(&[1, 2, 4]);
        let r = check_remark_mixed(&a, &a, Sign::Plus, 1.0).unwrap();
        assert_eq!(
            (exact_str(&r[1].lhs), exact_str(&r[1].rhs)),
            ("81".into(), "90".into())
        );
        assert!(r[1].holds());
        assert_eq!(exact_str(&r[2].lhs), "3375");
        assert!((r[2].rhs.approx_value() - (3.0 * 3f64.sqrt() + 6.0).powi(2) * 33.0).abs() < 1e-9);
        assert!(r[2].holds());
        let d = check_remark_diff(&a, &a, Sign::Minus, 1.0).unwrap();
        assert_eq!(exact_str(&d[1].lhs), "729");
        assert!((d[1].rhs.approx_value() - 877.4).abs() < 0.1);
        assert!(d[1].holds());
        let single = check_holder_premise(&set(&[5]));
        assert!(single.holds());
        assert_eq!(single.rhs.approx_value(), 1.0);
    }
}
