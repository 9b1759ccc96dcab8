//! Additive energies `E(A,B)`, moments `E_k(A)`, the fractional moment
//! `E_{3/2}`, restricted energy sums and quadruple intersections.

use num_bigint::BigUint;
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::interval::{Estimate, NeumaierSum};
use crate::rep::{rep_function, RepKind};
use crate::scalar::Rational;
use crate::set::FiniteSet;

/// Default size cap for the always-on quartic oracle of
/// [`restricted_energy_sum`].
pub const ORACLE_THRESHOLD: usize = 24;

const UNIT_ROUNDOFF: f64 = f64::EPSILON / 2.0;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum EnergyError {
    /// Two independent routes disagreed. This is an engine bug.
    #[error("internal mismatch in {what}: {left} != {right}")]
    InternalMismatch {
        what: &'static str,
        left: String,
        right: String,
    },
}

/// `E(A,B) = Σ_s δ_{A,B}(s)^2` by one route only.
pub fn additive_energy(a: &FiniteSet, b: &FiniteSet) -> u128 {
    rep_function(a, b, RepKind::Difference).sum_squares()
}

/// `E(A,B)` computed three ways: `Σ δ_A δ_B`, `Σ δ_{A,B}^2` and
/// `Σ r_{A+B}^2`. All three must agree.
pub fn energy_cross(a: &FiniteSet, b: &FiniteSet) -> Result<BigUint, EnergyError> {
    let via_self_reps = a
        .self_difference_rep()
        .inner_product(b.self_difference_rep());
    let via_difference = rep_function(a, b, RepKind::Difference).sum_squares();
    let via_sum = rep_function(a, b, RepKind::Sum).sum_squares();
    if via_self_reps != via_difference {
        return Err(EnergyError::InternalMismatch {
            what: "Σδ_Aδ_B vs Σδ_{A,B}^2",
            left: via_self_reps.to_string(),
            right: via_difference.to_string(),
        });
    }
    if via_difference != via_sum {
        return Err(EnergyError::InternalMismatch {
            what: "Σδ_{A,B}^2 vs Σr_{A+B}^2",
            left: via_difference.to_string(),
            right: via_sum.to_string(),
        });
    }
    Ok(BigUint::from(via_sum))
}

/// `E_k(A) = Σ_s δ_A(s)^k`. `k = 1` gives `|A|^2`, `k = 2` the energy.
pub fn energy_k(a: &FiniteSet, k: u32) -> BigUint {
    a.self_difference_rep().power_sum(k)
}

/// `E_{3/2}(A)` in binary64 with a rigorous absolute error bound.
///
/// Terms are summed in increasing order of the difference value with
/// Neumaier compensation, so the result does not depend on scheduling.
pub fn energy_fractional(a: &FiniteSet) -> Estimate {
    let counts = a.self_difference_rep().counts();
    let u = UNIT_ROUNDOFF;
    let mut sum = NeumaierSum::default();
    let mut term_error = 0.0f64;
    let mut abs_total = 0.0f64;
    let mut all_exact = true;
    for &c in counts {
        let d = c as f64;
        let root = d.sqrt();
        let term = d * root;
        // sqrt and the product are each correctly rounded
        let exact = root.fract() == 0.0 && root * root == d && term < 9.0e15;
        if !exact {
            all_exact = false;
            term_error += 3.0 * u * term;
        }
        abs_total += term;
        sum.add(term);
    }
    let value = sum.value();
    if all_exact && value < 9.0e15 {
        return Estimate::exact(value);
    }
    let n = counts.len() as f64;
    let summation = (2.0 * u + 4.0 * (n * u) * (n * u)) * abs_total;
    // one more ulp of slack for the bound arithmetic itself
    let bound = (term_error * (1.0 + 4.0 * u) + summation) * (1.0 + 8.0 * u) + value.abs() * u;
    Estimate { value, bound }
}

/// `|A ∩ (A+s) ∩ (A+t) ∩ (A+s+t)|`, which equals both `δ_{A_s}(t)` and
/// `δ_{A_t}(s)`.
pub fn quad_intersection(a: &FiniteSet, s: &Rational, t: &Rational) -> usize {
    let st = s + t;
    a.iter()
        .filter(|x| a.contains(&(*x - s)) && a.contains(&(*x - t)) && a.contains(&(*x - &st)))
        .count()
}

/// Result of [`restricted_energy_sum_with`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RestrictedEnergy {
    pub value: BigUint,
    /// Whether the quartic per-shift oracle ran and agreed.
    pub oracle_checked: bool,
}

/// `Σ_{s ∈ A-A} E(A_s, B)` through `Σ_t δ_A(t)^2 δ_B(t)`, cross-checked
/// against the literal per-shift expansion when both sets have at most
/// [`ORACLE_THRESHOLD`] elements.
pub fn restricted_energy_sum(a: &FiniteSet, b: &FiniteSet) -> Result<BigUint, EnergyError> {
    restricted_energy_sum_with(a, b, ORACLE_THRESHOLD).map(|r| r.value)
}

pub fn restricted_energy_sum_with(
    a: &FiniteSet,
    b: &FiniteSet,
    oracle_threshold: usize,
) -> Result<RestrictedEnergy, EnergyError> {
    let mut fast = 0u128;
    a.self_difference_rep()
        .merge_join(b.self_difference_rep(), |da, db| {
            fast += (da as u128) * (da as u128) * (db as u128)
        });
    let oracle_checked = a.len() <= oracle_threshold && b.len() <= oracle_threshold;
    if oracle_checked {
        let slow = restricted_energy_oracle(a, b);
        if slow != fast {
            return Err(EnergyError::InternalMismatch {
                what: "restricted energy fast form vs per-shift expansion",
                left: fast.to_string(),
                right: slow.to_string(),
            });
        }
    }
    Ok(RestrictedEnergy {
        value: BigUint::from(fast),
        oracle_checked,
    })
}

/// Literal `Σ_{s ∈ A-A} E(A_s, B)`, each `E(A_s, B)` counted as the number of
/// quadruples `(x, y, b, b')` in `A_s^2 × B^2` with `x - y = b - b'`.
pub fn restricted_energy_oracle(a: &FiniteSet, b: &FiniteSet) -> u128 {
    let shifts = a.self_difference_rep();
    // sorted multiset of differences b - b' for binary-search counting
    let mut b_diffs: Vec<Rational> = Vec::with_capacity(b.len() * b.len());
    for x in b {
        for y in b {
            b_diffs.push(x - y);
        }
    }
    b_diffs.sort_unstable();
    let count_of = |d: &Rational| -> u128 {
        let lo = b_diffs.partition_point(|v| v < d);
        let hi = b_diffs.partition_point(|v| v <= d);
        (hi - lo) as u128
    };
    (0..shifts.len())
        .map(|i| {
            let a_s = a.shift_intersect(&shifts.value(i));
            let mut e = 0u128;
            for x in &a_s {
                for y in &a_s {
                    e += count_of(&(x - y));
                }
            }
            e
        })
        .sum()
}

/// `Σ_{s ∈ A-A} E(A, A_s)`, the right side of the cubic energy identity,
/// computed shift by shift.
pub fn shifted_energy_sum(a: &FiniteSet) -> u128 {
    let shifts = a.self_difference_rep();
    if a.int_view().is_none() {
        return shifted_energy_sum_rat(a);
    }
    (0..shifts.len())
        .into_par_iter()
        .map(|i| additive_energy(a, &a.shift_intersect(&shifts.value(i))))
        .sum()
}

/// Rational sets: `A_s` read off the pairs grouped by difference, and each
/// `E(A, A_s) = Σ_{u,v ∈ A_s} δ_A(u - v)`.
fn shifted_energy_sum_rat(a: &FiniteSet) -> u128 {
    let delta = a.self_difference_rep();
    let el = a.elements();
    let mut pairs: Vec<(Rational, usize)> = Vec::with_capacity(el.len() * el.len());
    for (i, x) in el.iter().enumerate() {
        for y in el {
            pairs.push((x - y, i));
        }
    }
    pairs.sort_unstable();
    let groups: Vec<&[(Rational, usize)]> = pairs.chunk_by(|p, q| p.0 == q.0).collect();
    groups
        .par_iter()
        .map(|g| {
            let mut e = 0u128;
            for (_, u) in g.iter() {
                for (_, v) in g.iter() {
                    e += delta.get(&(&el[*u] - &el[*v])) as u128;
                }
            }
            e
        })
        .sum()
}

pub(crate) mod bigstr {
    use num_bigint::BigUint;
    use serde::Serializer;

    pub fn serialize<S: Serializer>(x: &BigUint, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&x.to_string())
    }
}

/// Energies of one set. `E2`/`E3` serialize as decimal strings.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EnergyReport {
    pub n: usize,
    #[serde(rename = "diffsetSize")]
    pub diffset_size: usize,
    #[serde(rename = "sumsetSize")]
    pub sumset_size: usize,
    #[serde(rename = "E2", with = "bigstr")]
    pub e2: BigUint,
    #[serde(rename = "E3", with = "bigstr")]
    pub e3: BigUint,
    #[serde(rename = "E15")]
    pub e15: Estimate,
    /// `E2 / n^3`
    #[serde(rename = "E2OverN3")]
    pub e2_over_n3: f64,
    /// `E3 / (n^3 log2 n)`; absent for `n = 1`.
    #[serde(rename = "E3OverN3LogN")]
    pub e3_over_n3_log: Option<f64>,
}

impl EnergyReport {
    pub fn compute(a: &FiniteSet) -> Self {
        let n = a.len();
        let delta = a.self_difference_rep();
        let e2 = delta.power_sum(2);
        let e3 = delta.power_sum(3);
        let n3 = (n as f64).powi(3);
        let to_f = |x: &BigUint| crate::interval::Interval::from_biguint(x).mid();
        EnergyReport {
            n,
            diffset_size: delta.len(),
            sumset_size: a.doubling_stats().sumset_size,
            e15: energy_fractional(a),
            e2_over_n3: to_f(&e2) / n3,
            e3_over_n3_log: (n >= 2).then(|| to_f(&e3) / (n3 * (n as f64).log2())),
            e2,
            e3,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set(v: &[i64]) -> FiniteSet {
        FiniteSet::from_ints(v).unwrap()
    }

    fn q(s: &str) -> Rational {
        s.parse().unwrap()
    }

    /// Quadruple loop: #{(a, b, a', b') : a - b = a' - b'}.
    fn energy_brute(a: &[i64], b: &[i64]) -> u64 {
        let mut n = 0;
        for &x in a {
            for &y in b {
                for &x2 in a {
                    for &y2 in b {
                        if x - y == x2 - y2 {
                            n += 1;
                        }
                    }
                }
            }
        }
        n
    }

    /// Sextuple loop: #{(a..f) : a - b = c - d = e - f}.
    fn e3_brute(a: &[i64]) -> u64 {
        let mut n = 0;
        for &p in a {
            for &q in a {
                for &r in a {
                    for &s in a {
                        if p - q != r - s {
                            continue;
                        }
                        for &t in a {
                            for &u in a {
                                if t - u == p - q {
                                    n += 1;
                                }
                            }
                        }
                    }
                }
            }
        }
        n
    }

    #[test]
    fn cross_energy_examples() {
        assert_eq!(energy_brute(&[1, 2, 4], &[1, 2, 4]), 15);
        assert_eq!(energy_brute(&[1, 2, 3], &[1, 2, 3]), 19);
        let a = set(&[1, 2, 4]);
        assert_eq!(energy_cross(&a, &a).unwrap(), BigUint::from(15u32));
        let ap = set(&[1, 2, 3]);
        assert_eq!(energy_cross(&ap, &ap).unwrap(), BigUint::from(19u32));
        assert_eq!(energy_cross(&set(&[1]), &ap).unwrap(), BigUint::from(3u32));
    }

    #[test]
    fn moment_examples() {
        assert_eq!(e3_brute(&[1, 2, 4]), 33);
        assert_eq!(e3_brute(&[1, 2, 3]), 45);
        assert_eq!(energy_k(&set(&[1, 2, 4]), 3), BigUint::from(33u32));
        assert_eq!(energy_k(&set(&[1, 2, 3]), 3), BigUint::from(45u32));
        let a = set(&[3, 10, 11, 40]);
        assert_eq!(energy_k(&a, 1), BigUint::from(16u32));
        assert_eq!(energy_k(&a, 2), energy_cross(&a, &a).unwrap());
    }

    #[test]
    fn fractional_energy_examples() {
        let one = energy_fractional(&set(&[5]));
        assert_eq!(one, Estimate::exact(1.0));
        let a = energy_fractional(&set(&[1, 2, 4]));
        assert!(a.contains(3.0 * 3f64.sqrt() + 6.0));
        assert!((a.value - 11.196152422706632).abs() < 1e-12);
        assert!(a.bound > 0.0 && a.bound < 1e-12);
        let b = energy_fractional(&set(&[1, 2, 3]));
        assert!(b.contains(3.0 * 3f64.sqrt() + 4.0 * 2f64.sqrt() + 2.0));
        assert!((b.value - 12.853006).abs() < 1e-6);
        // Sidon set of size 4: δ(0) = 4 and every other δ is 1, all perfect squares
        let sidon = energy_fractional(&set(&[1, 4, 9, 16]));
        assert_eq!(sidon, Estimate::exact(8.0 + 12.0));
    }

    #[test]
    fn quad_intersection_examples() {
        let a = set(&[1, 2, 4]);
        assert_eq!(quad_intersection(&a, &q("0"), &q("0")), 3);
        assert_eq!(quad_intersection(&a, &q("1"), &q("3")), 0);
        let ap = set(&[1, 2, 3]);
        assert_eq!(quad_intersection(&ap, &q("1"), &q("1")), 1);
    }

    #[test]
    fn restricted_energy_examples() {
        let a = set(&[1, 2, 4]);
        let r = restricted_energy_sum_with(&a, &a, ORACLE_THRESHOLD).unwrap();
        assert_eq!(r.value, BigUint::from(33u32));
        assert!(r.oracle_checked);
        assert_eq!(
            restricted_energy_sum(&a, &set(&[5])).unwrap(),
            BigUint::from(9u32)
        );
        let b = set(&[2, 7, 8, 20]);
        assert_eq!(
            restricted_energy_sum(&set(&[1]), &b).unwrap(),
            BigUint::from(4u32)
        );
        let big = FiniteSet::from_ints(&(0..30).collect::<Vec<_>>()).unwrap();
        assert!(
            !restricted_energy_sum_with(&big, &a, ORACLE_THRESHOLD)
                .unwrap()
                .oracle_checked
        );
    }

    #[test]
    fn energy_identity_small() {
        let a = set(&[1, 2, 4]);
        assert_eq!(shifted_energy_sum(&a), 33);
        assert_eq!(shifted_energy_sum(&set(&[5])), 1);
    }

    #[test]
    fn report_serializes_big_integers_as_strings() {
        let r = EnergyReport::compute(&set(&[1, 2, 4]));
        let v = serde_json::to_value(&r).unwrap();
        assert_eq!(v["E2"], "15");
        assert_eq!(v["E3"], "33");
        assert_eq!(v["diffsetSize"], 7);
    }
}
