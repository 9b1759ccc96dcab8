//! Canonical finite sets of rationals and their set algebra.

use std::fmt;
use std::sync::OnceLock;

use serde::de::{self, Deserializer};
use serde::ser::{SerializeSeq, Serializer};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::rep::{rep_function, RepFunction, RepKind};
use crate::scalar::Rational;

/// Largest magnitude kept in the `i64` view. Sums and differences of two such
/// values still fit in an `i64`.
pub(crate) const INT_LIMIT: i64 = (1 << 62) - 1;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SetError {
    #[error("empty input: analytic sets must be nonempty")]
    EmptyInput,
    #[error("duplicate element {0} in strict mode")]
    DuplicateInStrictMode(Rational),
    #[error("dilation by zero")]
    ZeroDilation,
    #[error("malformed set file: {0}")]
    Format(String),
}

/// Consecutive gaps `a[i+1] - a[i]` of a convex set; strictly increasing.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ConvexWitness {
    pub gaps: Vec<Rational>,
}

/// Doubling statistics, cached after the first request.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DoublingStats {
    pub sumset_size: usize,
    pub productset_size: usize,
    /// `|A+A| / |A|`
    pub additive: Rational,
    /// `|AA| / |A|`
    pub multiplicative: Rational,
}

/// Strictly increasing, duplicate-free sequence of rationals.
///
/// Only [`FiniteSet::shift_intersect`] and [`FiniteSet::intersect`] may return
/// an empty set; every constructor rejects empty input.
#[derive(Clone)]
pub struct FiniteSet {
    elems: Vec<Rational>,
    ints: Option<Vec<i64>>,
    convex: OnceLock<Option<ConvexWitness>>,
    stats: OnceLock<DoublingStats>,
    delta: OnceLock<RepFunction>,
}

/// `make_set`: canonicalize `values` into a set.
pub fn make_set(
    values: impl IntoIterator<Item = Rational>,
    strict: bool,
) -> Result<FiniteSet, SetError> {
    FiniteSet::new(values, strict)
}

#[derive(Clone, Copy)]
enum PairOp {
    Add,
    Sub,
    Mul,
}

impl FiniteSet {
    /// Sorts and deduplicates. In strict mode any repeated value is an error.
    pub fn new(values: impl IntoIterator<Item = Rational>, strict: bool) -> Result<Self, SetError> {
        let mut v: Vec<Rational> = values.into_iter().collect();
        if v.is_empty() {
            return Err(SetError::EmptyInput);
        }
        v.sort_unstable();
        if strict {
            if let Some(w) = v.windows(2).find(|w| w[0] == w[1]) {
                return Err(SetError::DuplicateInStrictMode(w[0].clone()));
            }
        }
        v.dedup();
        Ok(Self::from_sorted(v))
    }

    pub fn from_ints(values: &[i64]) -> Result<Self, SetError> {
        Self::new(values.iter().map(|&x| Rational::from(x)), false)
    }

    /// Parses each entry with [`Rational::from_str`](std::str::FromStr).
    pub fn parse(values: &[&str]) -> Result<Self, SetError> {
        let v = values
            .iter()
            .map(|s| {
                s.parse::<Rational>()
                    .map_err(|e| SetError::Format(e.to_string()))
            })
            .collect::<Result<Vec<_>, _>>()?;
        Self::new(v, false)
    }

    /// Caller guarantees strictly increasing order; may be empty.
    pub(crate) fn from_sorted(elems: Vec<Rational>) -> Self {
        debug_assert!(elems.windows(2).all(|w| w[0] < w[1]));
        let ints = elems
            .iter()
            .map(|r| r.to_i64().filter(|x| x.abs() <= INT_LIMIT))
            .collect::<Option<Vec<i64>>>();
        FiniteSet {
            elems,
            ints,
            convex: OnceLock::new(),
            stats: OnceLock::new(),
            delta: OnceLock::new(),
        }
    }

    pub(crate) fn from_sorted_i128(values: Vec<i128>) -> Self {
        let ints = if values.iter().all(|x| x.unsigned_abs() <= INT_LIMIT as u128) {
            Some(values.iter().map(|&x| x as i64).collect())
        } else {
            None
        };
        FiniteSet {
            elems: values.into_iter().map(Rational::from).collect(),
            ints,
            convex: OnceLock::new(),
            stats: OnceLock::new(),
            delta: OnceLock::new(),
        }
    }

    pub fn len(&self) -> usize {
        self.elems.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elems.is_empty()
    }

    pub fn elements(&self) -> &[Rational] {
        &self.elems
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Rational> {
        self.elems.iter()
    }

    /// The elements as machine integers, when every element is an integer of
    /// magnitude at most 2^62 - 1.
    pub fn int_view(&self) -> Option<&[i64]> {
        self.ints.as_deref()
    }

    pub fn min(&self) -> Option<&Rational> {
        self.elems.first()
    }

    pub fn max(&self) -> Option<&Rational> {
        self.elems.last()
    }

    pub fn contains(&self, x: &Rational) -> bool {
        match (&self.ints, x.to_i64()) {
            (Some(ints), Some(v)) => ints.binary_search(&v).is_ok(),
            // every element is a small integer, x is not
            (Some(_), None) => false,
            (None, _) => self.elems.binary_search(x).is_ok(),
        }
    }

    pub fn is_subset(&self, other: &FiniteSet) -> bool {
        self.first_not_in(other).is_none()
    }

    /// First element of `self` missing from `other`.
    pub fn first_not_in(&self, other: &FiniteSet) -> Option<&Rational> {
        self.elems.iter().find(|x| !other.contains(x))
    }

    fn pairwise(&self, other: &FiniteSet, op: PairOp) -> FiniteSet {
        if let (Some(x), Some(y)) = (&self.ints, &other.ints) {
            let mut v: Vec<i128> = Vec::with_capacity(x.len() * y.len());
            for &a in x {
                let a = a as i128;
                match op {
                    PairOp::Add => v.extend(y.iter().map(|&b| a + b as i128)),
                    PairOp::Sub => v.extend(y.iter().map(|&b| a - b as i128)),
                    PairOp::Mul => v.extend(y.iter().map(|&b| a * b as i128)),
                }
            }
            v.sort_unstable();
            v.dedup();
            return FiniteSet::from_sorted_i128(v);
        }
        let mut v: Vec<Rational> = Vec::with_capacity(self.len() * other.len());
        for a in &self.elems {
            for b in &other.elems {
                v.push(match op {
                    PairOp::Add => a + b,
                    PairOp::Sub => a - b,
                    PairOp::Mul => a * b,
                });
            }
        }
        v.sort_unstable();
        v.dedup();
        FiniteSet::from_sorted(v)
    }

    /// `{a + b : a in self, b in other}`
    pub fn sumset(&self, other: &FiniteSet) -> FiniteSet {
        self.pairwise(other, PairOp::Add)
    }

    /// `{a - b : a in self, b in other}`
    pub fn diffset(&self, other: &FiniteSet) -> FiniteSet {
        self.pairwise(other, PairOp::Sub)
    }

    /// `{a * b : a in self, b in other}`
    pub fn productset(&self, other: &FiniteSet) -> FiniteSet {
        self.pairwise(other, PairOp::Mul)
    }

    /// `A_s = A ∩ (A + s)`. Its size is the multiplicity of `s` as a
    /// difference of two elements of `A`.
    pub fn shift_intersect(&self, s: &Rational) -> FiniteSet {
        if let (Some(ints), Some(shift)) = (&self.ints, s.to_i64()) {
            let out: Vec<Rational> = ints
                .iter()
                .zip(&self.elems)
                .filter(|(&a, _)| {
                    a.checked_sub(shift)
                        .is_some_and(|b| ints.binary_search(&b).is_ok())
                })
                .map(|(_, r)| r.clone())
                .collect();
            return FiniteSet::from_sorted(out);
        }
        let out: Vec<Rational> = self
            .elems
            .iter()
            .filter(|a| self.contains(&(*a - s)))
            .cloned()
            .collect();
        FiniteSet::from_sorted(out)
    }

    pub fn intersect(&self, other: &FiniteSet) -> FiniteSet {
        let out: Vec<Rational> = self
            .elems
            .iter()
            .filter(|a| other.contains(a))
            .cloned()
            .collect();
        FiniteSet::from_sorted(out)
    }

    /// Convex iff consecutive gaps strictly increase; sets of size at most 2
    /// are convex. The witness is cached.
    pub fn is_convex(&self) -> Option<&ConvexWitness> {
        self.convex
            .get_or_init(|| {
                let gaps: Vec<Rational> = self.elems.windows(2).map(|w| &w[1] - &w[0]).collect();
                if gaps.windows(2).all(|g| g[0] < g[1]) {
                    Some(ConvexWitness { gaps })
                } else {
                    None
                }
            })
            .as_ref()
    }

    pub fn translate(&self, c: &Rational) -> FiniteSet {
        FiniteSet::from_sorted(self.elems.iter().map(|a| a + c).collect())
    }

    pub fn dilate(&self, lambda: &Rational) -> Result<FiniteSet, SetError> {
        if lambda.is_zero() {
            return Err(SetError::ZeroDilation);
        }
        let mut v: Vec<Rational> = self.elems.iter().map(|a| a * lambda).collect();
        if lambda.is_negative() {
            v.reverse();
        }
        Ok(FiniteSet::from_sorted(v))
    }

    pub fn negate(&self) -> FiniteSet {
        FiniteSet::from_sorted(self.elems.iter().rev().map(|a| -a).collect())
    }

    /// `|A+A|/|A|` and `|AA|/|A|`, computed once.
    pub fn doubling_stats(&self) -> &DoublingStats {
        self.stats.get_or_init(|| {
            let n = self.len() as i64;
            let s = self.sumset(self).len();
            let p = self.productset(self).len();
            DoublingStats {
                sumset_size: s,
                productset_size: p,
                additive: Rational::new(s as i64, n.max(1)).expect("nonzero"),
                multiplicative: Rational::new(p as i64, n.max(1)).expect("nonzero"),
            }
        })
    }

    /// The difference representation function `δ_A`, computed once.
    pub fn self_difference_rep(&self) -> &RepFunction {
        self.delta
            .get_or_init(|| rep_function(self, self, RepKind::Difference))
    }

    /// Full-form JSON: `{"elements": [["num","den"], ...]}`.
    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("set serialization is infallible")
    }

    /// Shorthand JSON `{"elements": [1, 2, 4]}` when every element is an
    /// integer that fits an `i64`; full form otherwise.
    pub fn to_json_shorthand(&self) -> String {
        match self
            .elems
            .iter()
            .map(Rational::to_i64)
            .collect::<Option<Vec<i64>>>()
        {
            Some(ints) => serde_json::json!({ "elements": ints }).to_string(),
            None => self.to_json(),
        }
    }

    pub fn from_json(s: &str) -> Result<Self, SetError> {
        serde_json::from_str(s).map_err(|e| SetError::Format(e.to_string()))
    }
}

impl PartialEq for FiniteSet {
    fn eq(&self, other: &Self) -> bool {
        self.elems == other.elems
    }
}

impl Eq for FiniteSet {}

impl fmt::Debug for FiniteSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.elems.iter()).finish()
    }
}

impl<'a> IntoIterator for &'a FiniteSet {
    type Item = &'a Rational;
    type IntoIter = std::slice::Iter<'a, Rational>;
    fn into_iter(self) -> Self::IntoIter {
        self.elems.iter()
    }
}

struct FullForm<'a>(&'a [Rational]);

impl Serialize for FullForm<'_> {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut seq = serializer.serialize_seq(Some(self.0.len()))?;
        for r in self.0 {
            seq.serialize_element(&[r.numer().to_string(), r.denom().to_string()])?;
        }
        seq.end()
    }
}

impl Serialize for FiniteSet {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Doc<'a> {
            elements: FullForm<'a>,
        }
        Doc {
            elements: FullForm(&self.elems),
        }
        .serialize(serializer)
    }
}

#[derive(Deserialize)]
#[serde(untagged)]
enum ElementRepr {
    Int(i64),
    Text(String),
    Pair([String; 2]),
}

impl ElementRepr {
    fn into_rational(self) -> Result<Rational, String> {
        match self {
            ElementRepr::Int(n) => Ok(Rational::from(n)),
            ElementRepr::Text(s) => s
                .parse()
                .map_err(|e: crate::scalar::ParseRationalError| e.to_string()),
            ElementRepr::Pair([n, d]) => {
                let n: num_bigint::BigInt = n
                    .trim()
                    .parse()
                    .map_err(|_| format!("bad numerator {n:?}"))?;
                let d: num_bigint::BigInt = d
                    .trim()
                    .parse()
                    .map_err(|_| format!("bad denominator {d:?}"))?;
                Rational::new(n, d).map_err(|e| e.to_string())
            }
        }
    }
}

impl<'de> Deserialize<'de> for FiniteSet {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(deny_unknown_fields)]
        struct Doc {
            elements: Vec<ElementRepr>,
        }
        let doc = Doc::deserialize(deserializer)?;
        let values = doc
            .elements
            .into_iter()
            .map(ElementRepr::into_rational)
            .collect::<Result<Vec<_>, _>>()
            .map_err(de::Error::custom)?;
        FiniteSet::new(values, false).map_err(de::Error::custom)
    }
}
