//! One verified identity or inequality.

use std::ops::Mul;

use serde::ser::SerializeMap;
use serde::{Serialize, Serializer};

use crate::interval::{Estimate, Interval};
use crate::scalar::Rational;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Holds,
    Fails,
    /// Interval comparison whose enclosures straddle the boundary.
    Marginal,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Relation {
    /// `lhs <= constant * rhs`
    Le,
    /// `lhs >= constant * rhs`
    Ge,
    /// `lhs == rhs`
    Eq,
    /// `lhs ⊆ rhs` as sets; the quantities are the set sizes.
    Subset,
}

/// An exact rational or a binary64 enclosure.
#[derive(Clone, Debug, PartialEq)]
pub enum Quantity {
    Exact(Rational),
    Approx(Estimate),
}

impl Quantity {
    pub fn exact(x: impl Into<Rational>) -> Self {
        Quantity::Exact(x.into())
    }

    pub fn from_biguint(x: &num_bigint::BigUint) -> Self {
        Quantity::Exact(Rational::from(num_bigint::BigInt::from(x.clone())))
    }

    pub fn from_u128(x: u128) -> Self {
        Quantity::Exact(Rational::from(x as i128))
    }

    pub fn approx(iv: Interval) -> Self {
        Quantity::Approx(Estimate::from(iv))
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, Quantity::Exact(_))
    }

    pub fn interval(&self) -> Interval {
        match self {
            Quantity::Exact(r) => rational_interval(r),
            Quantity::Approx(e) => e.interval(),
        }
    }

    pub fn approx_value(&self) -> f64 {
        match self {
            Quantity::Exact(r) => r.to_f64(),
            Quantity::Approx(e) => e.value,
        }
    }
}

/// Enclosure of an exact rational.
pub fn rational_interval(r: &Rational) -> Interval {
    if let Some(k) = r.to_i64() {
        if k.unsigned_abs() < (1u64 << 53) {
            return Interval::point(k as f64);
        }
    }
    let x = r.to_f64();
    Interval::around(x, x.abs() * 2.0 * f64::EPSILON)
}

impl Serialize for Quantity {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            Quantity::Exact(r) => s.collect_str(r),
            Quantity::Approx(e) => {
                let mut m = s.serialize_map(Some(2))?;
                m.serialize_entry("value", &e.value)?;
                m.serialize_entry("bound", &e.bound)?;
                m.end()
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CheckResult {
    pub name: String,
    pub relation: Relation,
    pub lhs: Quantity,
    pub rhs: Quantity,
    /// `lhs / rhs`, constant-free.
    pub ratio: f64,
    pub verdict: Verdict,
    /// Both sides exact and compared without rounding.
    pub exact: bool,
    /// Configured constant of an asymptotic statement, if any.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub constant: Option<f64>,
    pub witness: Option<serde_json::Value>,
    /// Input lacks the hypothesis the statement needs (e.g. convexity).
    #[serde(rename = "negativeControl")]
    pub negative_control: bool,
}

fn ratio_of(lhs: &Quantity, rhs: &Quantity) -> f64 {
    if let (Quantity::Exact(l), Quantity::Exact(r)) = (lhs, rhs) {
        return match l.div(r) {
            Some(q) => q.to_f64(),
            None if l.is_zero() => 1.0,
            None => f64::INFINITY,
        };
    }
    lhs.approx_value() / rhs.approx_value()
}

impl CheckResult {
    /// Compares `lhs` against `scale * rhs` under `relation`. Exact when both
    /// sides are exact; otherwise an interval comparison that may come out
    /// marginal. `scale` defaults to one.
    pub fn compare(
        name: impl Into<String>,
        relation: Relation,
        lhs: Quantity,
        rhs: Quantity,
        scale: Option<&Rational>,
    ) -> Self {
        let one = Rational::one();
        let scale = scale.unwrap_or(&one);
        let ratio = ratio_of(&lhs, &rhs);
        let (verdict, exact) = match (&lhs, &rhs) {
            (Quantity::Exact(l), Quantity::Exact(r)) => {
                let scaled = r * scale;
                let ok = match relation {
                    Relation::Le => *l <= scaled,
                    Relation::Ge => *l >= scaled,
                    Relation::Eq | Relation::Subset => *l == *r,
                };
                (if ok { Verdict::Holds } else { Verdict::Fails }, true)
            }
            _ => {
                let l = lhs.interval();
                let r = rhs.interval().mul(rational_interval(scale));
                let verdict = match relation {
                    Relation::Le => {
                        if l.hi <= r.lo {
                            Verdict::Holds
                        } else if l.lo > r.hi {
                            Verdict::Fails
                        } else {
                            Verdict::Marginal
                        }
                    }
                    Relation::Ge => {
                        if l.lo >= r.hi {
                            Verdict::Holds
                        } else if l.hi < r.lo {
                            Verdict::Fails
                        } else {
                            Verdict::Marginal
                        }
                    }
                    Relation::Eq | Relation::Subset => {
                        if l.hi < r.lo || l.lo > r.hi {
                            Verdict::Fails
                        } else if l.is_point() && r.is_point() && l.lo == r.lo {
                            Verdict::Holds
                        } else {
                            Verdict::Marginal
                        }
                    }
                };
                (verdict, false)
            }
        };
        CheckResult {
            name: name.into(),
            relation,
            lhs,
            rhs,
            ratio,
            verdict,
            exact,
            constant: None,
            witness: None,
            negative_control: false,
        }
    }

    /// Set inclusion with sizes as the reported quantities. `missing` is the
    /// first element of the smaller set absent from the larger one.
    pub fn subset(
        name: impl Into<String>,
        lhs_size: usize,
        rhs_size: usize,
        missing: Option<&Rational>,
    ) -> Self {
        let lhs = Quantity::exact(lhs_size as i64);
        let rhs = Quantity::exact(rhs_size as i64);
        CheckResult {
            name: name.into(),
            relation: Relation::Subset,
            ratio: ratio_of(&lhs, &rhs),
            lhs,
            rhs,
            verdict: if missing.is_none() {
                Verdict::Holds
            } else {
                Verdict::Fails
            },
            exact: true,
            constant: None,
            witness: missing.map(|x| serde_json::json!({ "missing": x })),
            negative_control: false,
        }
    }

    pub fn with_constant(mut self, c: f64) -> Self {
        self.constant = Some(c);
        self
    }

    pub fn with_witness(mut self, w: serde_json::Value) -> Self {
        self.witness = Some(w);
        self
    }

    pub fn negative_control(mut self, flag: bool) -> Self {
        self.negative_control = flag;
        self
    }

    /// Force a failure (e.g. a premise inside a compound check failed).
    pub fn fail(mut self) -> Self {
        self.verdict = Verdict::Fails;
        self
    }

    pub fn passed(&self) -> bool {
        self.verdict != Verdict::Fails
    }

    pub fn holds(&self) -> bool {
        self.verdict == Verdict::Holds
    }
}
