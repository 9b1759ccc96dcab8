//! Closed binary64 intervals with outward rounding.
//!
//! Operations on integer-valued endpoints whose result magnitude stays
//! below 2^53 are exact and stay point intervals; everything else is widened
//! by one ulp per rounding, which covers round-to-nearest.

use std::fmt;
use std::ops::{Add, Mul};

use num_bigint::BigUint;
use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};

const EXACT_LIMIT: f64 = 9_007_199_254_740_992.0; // 2^53

fn is_exact_int(x: f64) -> bool {
    x.fract() == 0.0 && x.abs() < EXACT_LIMIT
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
}

impl Interval {
    pub fn point(x: f64) -> Self {
        Interval { lo: x, hi: x }
    }

    pub fn new(lo: f64, hi: f64) -> Self {
        debug_assert!(lo <= hi);
        Interval { lo, hi }
    }

    /// Encloses an exact nonnegative integer.
    pub fn from_u128(x: u128) -> Self {
        let f = x as f64;
        if f < EXACT_LIMIT {
            Interval::point(f)
        } else {
            Interval::new(f.next_down(), f.next_up())
        }
    }

    pub fn from_biguint(x: &BigUint) -> Self {
        match x.to_u128() {
            Some(v) => Interval::from_u128(v),
            None => {
                let f = x.to_f64().unwrap_or(f64::INFINITY);
                Interval::new(f.next_down(), f.next_up())
            }
        }
    }

    /// `value ± bound`, rounded outward.
    pub fn around(value: f64, bound: f64) -> Self {
        if bound == 0.0 {
            return Interval::point(value);
        }
        Interval::new((value - bound).next_down(), (value + bound).next_up())
    }

    /// `x` with relative uncertainty `rel`.
    pub fn with_relative_error(x: f64, rel: f64) -> Self {
        Interval::around(x, x.abs() * rel)
    }

    pub fn is_point(&self) -> bool {
        self.lo == self.hi
    }

    pub fn mid(&self) -> f64 {
        if self.is_point() {
            self.lo
        } else {
            self.lo / 2.0 + self.hi / 2.0
        }
    }

    fn rounded(exact_inputs: bool, lo: f64, hi: f64) -> Self {
        if exact_inputs && is_exact_int(lo) && is_exact_int(hi) {
            Interval::new(lo, hi)
        } else {
            Interval::new(lo.next_down(), hi.next_up())
        }
    }

    fn int_endpoints(&self) -> bool {
        is_exact_int(self.lo) && is_exact_int(self.hi)
    }

    /// Integer power by repeated multiplication.
    pub fn powi(self, k: u32) -> Interval {
        (0..k).fold(Interval::point(1.0), |acc, _| acc.mul(self))
    }

    pub fn scale(self, c: f64) -> Interval {
        self.mul(Interval::point(c))
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_point() {
            write!(f, "{}", self.lo)
        } else {
            write!(f, "[{}, {}]", self.lo, self.hi)
        }
    }
}

/// A binary64 value with an absolute error bound on the true quantity.
impl Add for Interval {
    type Output = Interval;

    fn add(self, o: Interval) -> Interval {
        let exact = self.int_endpoints() && o.int_endpoints();
        Interval::rounded(exact, self.lo + o.lo, self.hi + o.hi)
    }
}

impl Mul for Interval {
    type Output = Interval;

    fn mul(self, o: Interval) -> Interval {
        let exact = self.int_endpoints() && o.int_endpoints();
        let c = [
            self.lo * o.lo,
            self.lo * o.hi,
            self.hi * o.lo,
            self.hi * o.hi,
        ];
        let lo = c.iter().copied().fold(f64::INFINITY, f64::min);
        let hi = c.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        Interval::rounded(exact, lo, hi)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Estimate {
    pub value: f64,
    pub bound: f64,
}

impl Estimate {
    pub fn exact(value: f64) -> Self {
        Estimate { value, bound: 0.0 }
    }

    pub fn interval(&self) -> Interval {
        Interval::around(self.value, self.bound)
    }

    pub fn contains(&self, x: f64) -> bool {
        let iv = self.interval();
        iv.lo <= x && x <= iv.hi
    }
}

impl From<Interval> for Estimate {
    fn from(iv: Interval) -> Self {
        if iv.is_point() {
            return Estimate::exact(iv.lo);
        }
        let value = iv.mid();
        let bound = ((value - iv.lo).max(iv.hi - value)).next_up();
        Estimate { value, bound }
    }
}

/// Neumaier's compensated summation.
#[derive(Clone, Copy, Debug, Default)]
pub struct NeumaierSum {
    sum: f64,
    compensation: f64,
}

impl NeumaierSum {
    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.compensation += (self.sum - t) + x;
        } else {
            self.compensation += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        self.sum + self.compensation
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn integer_products_stay_exact() {
        let a = Interval::point(15.0).powi(3);
        assert_eq!(a, Interval::point(3375.0));
        let b = Interval::from_u128(1u128 << 52);
        assert!(b.is_point());
        let c = Interval::from_u128((1u128 << 60) + 1);
        assert!(c.lo < c.hi);
    }

    #[test]
    fn inexact_ops_widen() {
        let x = Interval::point(0.1).mul(Interval::point(3.0));
        assert!(x.lo < x.hi);
        assert!(x.lo <= 0.1 * 3.0 && 0.1 * 3.0 <= x.hi);
    }

    #[test]
    fn neumaier_recovers_cancellation() {
        let mut s = NeumaierSum::default();
        for x in [1.0, 1e100, 1.0, -1e100] {
            s.add(x);
        }
        assert_eq!(s.value(), 2.0);
    }

    #[test]
    fn estimate_round_trip_encloses() {
        let iv = Interval::new(1.0, 1.5);
        let e = Estimate::from(iv);
        let back = e.interval();
        assert!(back.lo <= 1.0 && back.hi >= 1.5);
    }
}
