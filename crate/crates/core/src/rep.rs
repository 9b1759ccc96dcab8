//! Representation functions `δ_{A,B}` and `r_{A+B}`.
//!
//! Two backends compute the same multiplicity map:
//!
//! * **sparse**: materialize all `|A||B|` pair values, sort, run-length
//!   encode. Works for every rational input and is the reference.
//! * **dense**: for integer inputs whose result span is at most
//!   [`DENSE_SPAN_LIMIT`], count into an offset-indexed array.
//!
//! Both produce bit-identical [`RepFunction`]s on integer inputs.

use std::cmp::Ordering;

use num_bigint::BigUint;
use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::scalar::Rational;
use crate::set::FiniteSet;

/// Largest result span (max - min + 1) the dense backend will allocate.
pub const DENSE_SPAN_LIMIT: u64 = 1 << 24;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RepError {
    #[error("dense backend needs integer inputs with result span <= 2^24")]
    DenseUnavailable,
    #[error("threshold must be positive, got {0}")]
    NonPositiveThreshold(Rational),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RepKind {
    /// `δ_{A,B}(s) = #{(a,b) : a - b = s}`
    Difference,
    /// `r_{A+B}(s) = #{(a,b) : a + b = s}`
    Sum,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Backend {
    #[default]
    Auto,
    Sparse,
    Dense,
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Support {
    Int(Vec<i64>),
    Rat(Vec<Rational>),
}

/// Sparse multiplicity map, sorted by value. Every stored count is positive.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RepFunction {
    kind: RepKind,
    sizes: (usize, usize),
    support: Support,
    counts: Vec<u64>,
}

/// Computes `δ_{A,B}` or `r_{A+B}` with the automatic backend choice.
pub fn rep_function(a: &FiniteSet, b: &FiniteSet, kind: RepKind) -> RepFunction {
    rep_function_with(a, b, kind, Backend::Auto).expect("auto backend always succeeds")
}

pub fn rep_function_with(
    a: &FiniteSet,
    b: &FiniteSet,
    kind: RepKind,
    backend: Backend,
) -> Result<RepFunction, RepError> {
    let sizes = (a.len(), b.len());
    if a.is_empty() || b.is_empty() {
        return Ok(RepFunction {
            kind,
            sizes,
            support: Support::Int(Vec::new()),
            counts: Vec::new(),
        });
    }
    let ints = a.int_view().zip(b.int_view());
    match backend {
        Backend::Dense => {
            let (x, y) = ints.ok_or(RepError::DenseUnavailable)?;
            dense(x, y, kind).ok_or(RepError::DenseUnavailable)
        }
        Backend::Sparse => Ok(match ints {
            Some((x, y)) => sparse_int(x, y, kind),
            None => sparse_rat(a, b, kind),
        }),
        Backend::Auto => Ok(match ints {
            Some((x, y)) => {
                let pairs = (x.len() * y.len()) as u64;
                match result_span(x, y, kind) {
                    Some(span) if span <= 16 * pairs + 4096 => {
                        dense(x, y, kind).unwrap_or_else(|| sparse_int(x, y, kind))
                    }
                    _ => sparse_int(x, y, kind),
                }
            }
            None => sparse_rat(a, b, kind),
        }),
    }
}

fn bounds(x: &[i64], y: &[i64], kind: RepKind) -> (i64, i64) {
    let (x0, x1) = (x[0], x[x.len() - 1]);
    let (y0, y1) = (y[0], y[y.len() - 1]);
    match kind {
        RepKind::Difference => (x0 - y1, x1 - y0),
        RepKind::Sum => (x0 + y0, x1 + y1),
    }
}

fn result_span(x: &[i64], y: &[i64], kind: RepKind) -> Option<u64> {
    let (lo, hi) = bounds(x, y, kind);
    let span = (hi as i128 - lo as i128 + 1) as u128;
    (span <= DENSE_SPAN_LIMIT as u128).then_some(span as u64)
}

fn dense(x: &[i64], y: &[i64], kind: RepKind) -> Option<RepFunction> {
    let span = result_span(x, y, kind)? as usize;
    let (lo, _) = bounds(x, y, kind);
    let mut tally = vec![0u32; span];
    match kind {
        RepKind::Difference => {
            for &a in x {
                let base = a - lo;
                for &b in y {
                    tally[(base - b) as usize] += 1;
                }
            }
        }
        RepKind::Sum => {
            for &a in x {
                let base = a - lo;
                for &b in y {
                    tally[(base + b) as usize] += 1;
                }
            }
        }
    }
    let mut values = Vec::new();
    let mut counts = Vec::new();
    for (i, &c) in tally.iter().enumerate() {
        if c > 0 {
            values.push(lo + i as i64);
            counts.push(c as u64);
        }
    }
    Some(RepFunction {
        kind,
        sizes: (x.len(), y.len()),
        support: Support::Int(values),
        counts,
    })
}

fn run_length<T: PartialEq>(sorted: Vec<T>) -> (Vec<T>, Vec<u64>) {
    let mut values: Vec<T> = Vec::new();
    let mut counts: Vec<u64> = Vec::new();
    for v in sorted {
        match values.last() {
            Some(last) if *last == v => *counts.last_mut().expect("parallel vecs") += 1,
            _ => {
                values.push(v);
                counts.push(1);
            }
        }
    }
    (values, counts)
}

fn sparse_int(x: &[i64], y: &[i64], kind: RepKind) -> RepFunction {
    let mut all = Vec::with_capacity(x.len() * y.len());
    for &a in x {
        match kind {
            RepKind::Difference => all.extend(y.iter().map(|&b| a - b)),
            RepKind::Sum => all.extend(y.iter().map(|&b| a + b)),
        }
    }
    all.sort_unstable();
    let (values, counts) = run_length(all);
    RepFunction {
        kind,
        sizes: (x.len(), y.len()),
        support: Support::Int(values),
        counts,
    }
}

fn sparse_rat(a: &FiniteSet, b: &FiniteSet, kind: RepKind) -> RepFunction {
    let mut all = Vec::with_capacity(a.len() * b.len());
    for x in a {
        for y in b {
            all.push(match kind {
                RepKind::Difference => x - y,
                RepKind::Sum => x + y,
            });
        }
    }
    all.sort_unstable();
    let (values, counts) = run_length(all);
    RepFunction {
        kind,
        sizes: (a.len(), b.len()),
        support: Support::Rat(values),
        counts,
    }
}

impl RepFunction {
    pub fn kind(&self) -> RepKind {
        self.kind
    }

    /// `(|A|, |B|)` of the sets it was built from.
    pub fn sizes(&self) -> (usize, usize) {
        self.sizes
    }

    /// Number of distinct values in the support.
    pub fn len(&self) -> usize {
        self.counts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.counts.is_empty()
    }

    pub fn counts(&self) -> &[u64] {
        &self.counts
    }

    /// Support values as machine integers, if they were computed that way.
    pub fn int_values(&self) -> Option<&[i64]> {
        match &self.support {
            Support::Int(v) => Some(v),
            Support::Rat(_) => None,
        }
    }

    pub fn value(&self, i: usize) -> Rational {
        match &self.support {
            Support::Int(v) => Rational::from(v[i]),
            Support::Rat(v) => v[i].clone(),
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = (Rational, u64)> + '_ {
        (0..self.len()).map(move |i| (self.value(i), self.counts[i]))
    }

    fn position(&self, x: &Rational) -> Option<usize> {
        match &self.support {
            Support::Int(v) => x.to_i64().and_then(|k| v.binary_search(&k).ok()),
            Support::Rat(v) => v.binary_search(x).ok(),
        }
    }

    /// Multiplicity of `x` (zero off the support).
    pub fn get(&self, x: &Rational) -> u64 {
        self.position(x).map_or(0, |i| self.counts[i])
    }

    /// Sum of all multiplicities, always `|A||B|`.
    pub fn total(&self) -> u64 {
        self.counts.iter().sum()
    }

    pub fn max_multiplicity(&self) -> u64 {
        self.counts.iter().copied().max().unwrap_or(0)
    }

    /// The support as a set (the difference set or sumset).
    pub fn support(&self) -> FiniteSet {
        match &self.support {
            Support::Int(v) => FiniteSet::from_sorted_i128(v.iter().map(|&x| x as i128).collect()),
            Support::Rat(v) => FiniteSet::from_sorted(v.clone()),
        }
    }

    /// `Σ c^2` over the support.
    pub fn sum_squares(&self) -> u128 {
        self.counts.iter().map(|&c| (c as u128) * (c as u128)).sum()
    }

    /// `Σ c^k` over the support, exact.
    pub fn power_sum(&self, k: u32) -> BigUint {
        let mut acc: u128 = 0;
        for (i, &c) in self.counts.iter().enumerate() {
            match (c as u128).checked_pow(k).and_then(|t| acc.checked_add(t)) {
                Some(next) => acc = next,
                None => {
                    let mut big = BigUint::from(acc);
                    for &c in &self.counts[i..] {
                        big += num_traits::pow(BigUint::from(c), k as usize);
                    }
                    return big;
                }
            }
        }
        BigUint::from(acc)
    }

    /// Calls `f(c_self, c_other)` for every value in both supports, in
    /// increasing value order.
    pub fn merge_join(&self, other: &RepFunction, mut f: impl FnMut(u64, u64)) {
        match (&self.support, &other.support) {
            (Support::Int(x), Support::Int(y)) => merge_sorted(
                x,
                y,
                |a, b| a.cmp(b),
                |i, j| f(self.counts[i], other.counts[j]),
            ),
            _ => {
                let x: Vec<Rational> = (0..self.len()).map(|i| self.value(i)).collect();
                let y: Vec<Rational> = (0..other.len()).map(|j| other.value(j)).collect();
                merge_sorted(
                    &x,
                    &y,
                    |a, b| a.cmp(b),
                    |i, j| f(self.counts[i], other.counts[j]),
                )
            }
        }
    }

    /// `Σ_s c_self(s) * c_other(s)`.
    pub fn inner_product(&self, other: &RepFunction) -> u128 {
        let mut acc = 0u128;
        self.merge_join(other, |x, y| acc += x as u128 * y as u128);
        acc
    }

    /// JSON dump `{"kind":"difference","entries":[[value,count],...]}`.
    /// Integer values are JSON numbers, others `"p/q"` strings.
    pub fn to_json(&self) -> serde_json::Value {
        let entries: Vec<serde_json::Value> = self
            .iter()
            .map(|(v, c)| {
                let value = match v.to_i64() {
                    Some(k) => serde_json::Value::from(k),
                    None => serde_json::Value::from(v.to_string()),
                };
                serde_json::json!([value, c])
            })
            .collect();
        serde_json::json!({
            "kind": self.kind,
            "sizes": [self.sizes.0, self.sizes.1],
            "entries": entries,
        })
    }
}

fn merge_sorted<T>(
    x: &[T],
    y: &[T],
    cmp: impl Fn(&T, &T) -> Ordering,
    mut hit: impl FnMut(usize, usize),
) {
    let (mut i, mut j) = (0, 0);
    while i < x.len() && j < y.len() {
        match cmp(&x[i], &y[j]) {
            Ordering::Less => i += 1,
            Ordering::Greater => j += 1,
            Ordering::Equal => {
                hit(i, j);
                i += 1;
                j += 1;
            }
        }
    }
}

/// Smallest integer multiplicity `c` with `c >= tau`.
fn count_threshold(tau: &Rational) -> u64 {
    if !tau.is_positive() {
        return 0;
    }
    tau.ceil().to_u64().unwrap_or(u64::MAX)
}

/// `{x : rep(x) >= tau}`; empty when `tau` exceeds every multiplicity.
pub fn level_set(rep: &RepFunction, tau: &Rational) -> FiniteSet {
    let t = count_threshold(tau);
    match &rep.support {
        Support::Int(v) => FiniteSet::from_sorted_i128(
            v.iter()
                .zip(&rep.counts)
                .filter(|(_, &c)| c >= t)
                .map(|(&x, _)| x as i128)
                .collect(),
        ),
        Support::Rat(v) => FiniteSet::from_sorted(
            v.iter()
                .zip(&rep.counts)
                .filter(|(_, &c)| c >= t)
                .map(|(x, _)| x.clone())
                .collect(),
        ),
    }
}

/// `|level_set(rep, tau)|` without building the set.
pub fn level_count(rep: &RepFunction, tau: &Rational) -> usize {
    let t = count_threshold(tau);
    rep.counts.iter().filter(|&&c| c >= t).count()
}

/// One band of a dyadic decomposition. `index` 0 is the low band
/// `{δ < Δ}`; band `j >= 1` holds `Δ·2^(j-1) <= δ < Δ·2^j`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Band {
    pub index: u32,
    pub lower: Rational,
    pub upper: Rational,
    /// Number of support values in the band.
    pub count: usize,
    /// `Σ δ^2` over the band.
    pub mass: u128,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DyadicLevels {
    pub delta: Rational,
    pub low: Band,
    /// Bands `j = 1..=J`, including empty ones, where `J` is the band
    /// holding the largest multiplicity.
    pub bands: Vec<Band>,
}

impl DyadicLevels {
    /// Sum of all band masses; equals `Σ δ^2` over the whole support.
    pub fn total_mass(&self) -> u128 {
        self.low.mass + self.bands.iter().map(|b| b.mass).sum::<u128>()
    }
}

/// Splits the support of `rep` by the threshold `delta` and dyadic bands
/// above it.
pub fn dyadic_levels(rep: &RepFunction, delta: &Rational) -> Result<DyadicLevels, RepError> {
    if !delta.is_positive() {
        return Err(RepError::NonPositiveThreshold(delta.clone()));
    }
    let mut low = Band {
        index: 0,
        lower: Rational::zero(),
        upper: delta.clone(),
        count: 0,
        mass: 0,
    };
    // (band index, count, mass) for multiplicities at or above delta
    let mut placed: Vec<(u32, usize, u128)> = Vec::new();
    let mut max_band = 0u32;
    for &c in &rep.counts {
        let sq = c as u128 * c as u128;
        let ratio = Rational::from(c as i64)
            .div(delta)
            .expect("delta is nonzero");
        if ratio < Rational::one() {
            low.count += 1;
            low.mass += sq;
            continue;
        }
        let j = ratio.floor_log2().expect("ratio >= 1") as u32 + 1;
        max_band = max_band.max(j);
        placed.push((j, 1, sq));
    }
    let two = Rational::from(2i64);
    let mut bands: Vec<Band> = (1..=max_band)
        .map(|j| Band {
            index: j,
            lower: delta * &two.pow(j as i32 - 1),
            upper: delta * &two.pow(j as i32),
            count: 0,
            mass: 0,
        })
        .collect();
    for (j, count, mass) in placed {
        let band = &mut bands[(j - 1) as usize];
        band.count += count;
        band.mass += mass;
    }
    Ok(DyadicLevels {
        delta: delta.clone(),
        low,
        bands,
    })
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

    fn entries(r: &RepFunction) -> Vec<(i64, u64)> {
        r.iter().map(|(v, c)| (v.to_i64().unwrap(), c)).collect()
    }

    #[test]
    fn difference_examples() {
        let a = set(&[1, 2, 4]);
        let d = rep_function(&a, &a, RepKind::Difference);
        assert_eq!(
            entries(&d),
            vec![(-3, 1), (-2, 1), (-1, 1), (0, 3), (1, 1), (2, 1), (3, 1)]
        );
        let ap = set(&[1, 2, 3]);
        let d = rep_function(&ap, &ap, RepKind::Difference);
        assert_eq!(entries(&d), vec![(-2, 1), (-1, 2), (0, 3), (1, 2), (2, 1)]);
    }

    #[test]
    fn sum_example() {
        let a = set(&[1, 2, 4]);
        let r = rep_function(&a, &a, RepKind::Sum);
        assert_eq!(
            entries(&r),
            vec![(2, 1), (3, 2), (4, 1), (5, 2), (6, 2), (8, 1)]
        );
        assert_eq!(r.total(), 9);
    }

    #[test]
    fn backends_agree_on_small_inputs() {
        let a = set(&[-7, 0, 3, 11, 12]);
        let b = set(&[2, 5, 9]);
        for kind in [RepKind::Difference, RepKind::Sum] {
            let s = rep_function_with(&a, &b, kind, Backend::Sparse).unwrap();
            let d = rep_function_with(&a, &b, kind, Backend::Dense).unwrap();
            assert_eq!(s, d);
        }
    }

    #[test]
    fn dense_refuses_rationals_and_wide_spans() {
        let r = FiniteSet::parse(&["1/2", "3"]).unwrap();
        assert_eq!(
            rep_function_with(&r, &r, RepKind::Difference, Backend::Dense).unwrap_err(),
            RepError::DenseUnavailable
        );
        let wide = set(&[0, 1 << 40]);
        assert_eq!(
            rep_function_with(&wide, &wide, RepKind::Sum, Backend::Dense).unwrap_err(),
            RepError::DenseUnavailable
        );
        // sparse still handles both
        let d = rep_function_with(&r, &r, RepKind::Difference, Backend::Sparse).unwrap();
        assert_eq!(d.get(&q("5/2")), 1);
        assert_eq!(d.get(&q("0")), 2);
    }

    #[test]
    fn level_sets() {
        let sidon = set(&[1, 4, 9, 16]);
        let d = rep_function(&sidon, &sidon, RepKind::Difference);
        assert_eq!(level_set(&d, &q("2")), set(&[0]));
        assert_eq!(level_set(&d, &q("1")), sidon.diffset(&sidon));
        let ap = set(&[1, 2, 3]);
        let d = rep_function(&ap, &ap, RepKind::Difference);
        assert_eq!(level_set(&d, &q("2")), set(&[-1, 0, 1]));
        assert_eq!(level_set(&d, &q("3/2")), set(&[-1, 0, 1]));
        assert!(level_set(&d, &q("4")).is_empty());
        assert_eq!(level_count(&d, &q("2")), 3);
    }

    #[test]
    fn dyadic_bands_for_small_set() {
        let a = set(&[1, 2, 4]);
        let d = rep_function(&a, &a, RepKind::Difference);
        let lv = dyadic_levels(&d, &q("2")).unwrap();
        assert_eq!(lv.low.mass, 6);
        assert_eq!(lv.low.count, 6);
        // δ(0) = 3 lies in [2, 4), band j = 1
        assert_eq!(lv.bands.len(), 1);
        assert_eq!(
            (lv.bands[0].lower.clone(), lv.bands[0].upper.clone()),
            (q("2"), q("4"))
        );
        assert_eq!(lv.bands[0].mass, 9);
        assert_eq!(lv.total_mass(), 15);

        let big = dyadic_levels(&d, &q("10")).unwrap();
        assert!(big.bands.is_empty());
        assert_eq!(big.low.mass, 15);

        let half = dyadic_levels(&d, &q("1/2")).unwrap();
        assert_eq!(half.low.count, 0);
        assert_eq!(half.total_mass(), 15);
        // δ = 1 lies in [1, 2) (j = 2), δ = 3 in [2, 4) (j = 3)
        assert_eq!(
            half.bands.iter().map(|b| b.mass).collect::<Vec<_>>(),
            vec![0, 6, 9]
        );

        assert!(dyadic_levels(&d, &q("0")).is_err());
    }

    #[test]
    fn power_sums_overflow_to_bigint() {
        let a = set(&[1, 2, 4]);
        let d = rep_function(&a, &a, RepKind::Difference);
        assert_eq!(d.power_sum(3), BigUint::from(33u32));
        // 3^90 overflows u128
        let expected = num_traits::pow(BigUint::from(3u32), 90) + BigUint::from(6u32);
        assert_eq!(d.power_sum(90), expected);
    }

    #[test]
    fn json_dump_sorted() {
        let a = set(&[1, 2]);
        let d = rep_function(&a, &a, RepKind::Difference);
        assert_eq!(
            d.to_json().to_string(),
            r#"{"entries":[[-1,1],[0,2],[1,1]],"kind":"difference","sizes":[2,2]}"#
        );
    }
}
