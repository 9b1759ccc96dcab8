//! Seeded set families and the standard corpus.
//!
//! Every family is a pure function of its parameters, `n` and a 64-bit seed.
//! Corpus member `i` is generated with seed `seed ^ i`.

use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use serde_json::json;
use thiserror::Error;

use crate::scalar::Rational;
use crate::set::FiniteSet;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GenError {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("f is not injective on Z: f({}) = f({})", .0.0, .0.1)]
    NonInjective(Box<(Rational, Rational)>),
    #[error("f is not strictly convex on Z: {0}")]
    NotConvexOnDomain(String),
}

fn invalid(msg: impl Into<String>) -> GenError {
    GenError::InvalidParameter(msg.into())
}

/// A strictly convex function with exact evaluation on rationals.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum ConvexFunctionSpec {
    /// `x^p` for `p` in `{2, 3}`; the cube is convex only on `x >= 0`.
    Power { p: u32 },
    /// `a x^2 + b x + c` with `a > 0`.
    Quadratic {
        a: Rational,
        b: Rational,
        c: Rational,
    },
    /// Explicit `(x, f(x))` pairs.
    Table { points: Vec<(Rational, Rational)> },
}

impl ConvexFunctionSpec {
    pub fn validate(&self) -> Result<(), GenError> {
        match self {
            ConvexFunctionSpec::Power { p } if *p == 2 || *p == 3 => Ok(()),
            ConvexFunctionSpec::Power { p } => {
                Err(invalid(format!("power must be 2 or 3, got {p}")))
            }
            ConvexFunctionSpec::Quadratic { a, .. } if a.is_positive() => Ok(()),
            ConvexFunctionSpec::Quadratic { a, .. } => {
                Err(invalid(format!("quadratic needs a > 0, got {a}")))
            }
            ConvexFunctionSpec::Table { points } => {
                let mut xs: Vec<&Rational> = points.iter().map(|(x, _)| x).collect();
                xs.sort();
                if xs.windows(2).any(|w| w[0] == w[1]) {
                    return Err(invalid("table has a repeated abscissa"));
                }
                Ok(())
            }
        }
    }

    pub fn eval(&self, x: &Rational) -> Result<Rational, GenError> {
        match self {
            ConvexFunctionSpec::Power { p } => Ok(x.pow(*p as i32)),
            ConvexFunctionSpec::Quadratic { a, b, c } => Ok(&(&(a * &(x * x)) + &(b * x)) + c),
            ConvexFunctionSpec::Table { points } => points
                .iter()
                .find(|(px, _)| px == x)
                .map(|(_, y)| y.clone())
                .ok_or_else(|| invalid(format!("table has no value at {x}"))),
        }
    }
}

/// A set `A = f(Z)` together with the `(f, Z)` it came from.
#[derive(Clone, Debug)]
pub struct FOfZ {
    pub set: FiniteSet,
    pub f: ConvexFunctionSpec,
    pub z: FiniteSet,
}

/// `f(Z)`, after checking that `f` is injective and strictly convex on the
/// points of `Z` (slopes of consecutive chords strictly increase).
pub fn generate_f_of_z(f: &ConvexFunctionSpec, z: &FiniteSet) -> Result<FOfZ, GenError> {
    f.validate()?;
    let values: Vec<Rational> = z.iter().map(|x| f.eval(x)).collect::<Result<_, _>>()?;
    let mut sorted: Vec<(&Rational, &Rational)> = values.iter().zip(z.iter()).collect();
    sorted.sort();
    if let Some(w) = sorted.windows(2).find(|w| w[0].0 == w[1].0) {
        return Err(GenError::NonInjective(Box::new((
            w[0].1.clone(),
            w[1].1.clone(),
        ))));
    }
    if matches!(f, ConvexFunctionSpec::Power { p: 3 }) && z.min().is_some_and(Rational::is_negative)
    {
        return Err(GenError::NotConvexOnDomain("x^3 needs Z >= 0".into()));
    }
    let xs = z.elements();
    let slopes: Vec<Rational> = (1..xs.len())
        .map(|i| {
            (&values[i] - &values[i - 1])
                .div(&(&xs[i] - &xs[i - 1]))
                .expect("distinct points")
        })
        .collect();
    if let Some(i) = (1..slopes.len()).find(|&i| slopes[i] <= slopes[i - 1]) {
        return Err(GenError::NotConvexOnDomain(format!(
            "chord slopes do not increase at {}",
            xs[i]
        )));
    }
    let set = FiniteSet::new(values, true).expect("injective and nonempty");
    Ok(FOfZ {
        set,
        f: f.clone(),
        z: z.clone(),
    })
}

/// Family parameters. Serialized with a `family` tag, e.g.
/// `{"family":"ap","start":"1","step":"1"}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "kebab-case")]
pub enum Family {
    /// `i^2`, `i = 1..=n`.
    Squares,
    /// `i^3`, `i = 1..=n`.
    Cubes,
    /// `a i^2 + b i + c`, `i = 1..=n`, `a > 0`.
    Quadratic {
        a: Rational,
        b: Rational,
        c: Rational,
    },
    /// Partial sums starting at 1 of gaps `g_1 ~ U[1,4]`,
    /// `g_{i+1} = g_i + U[1,4]`.
    RandomConvexGaps,
    /// `start + i * step`, `i = 0..n`.
    Ap { start: Rational, step: Rational },
    /// `ratio^i`, `i = 0..n`, `ratio > 1`.
    Gp { ratio: Rational },
    /// `{∏ r_j^{i_j} : 0 <= i_j < k_j}`; `n` must equal `∏ k_j`.
    Ggp {
        ratios: Vec<Rational>,
        dims: Vec<usize>,
    },
    /// `f` applied to a set drawn from another family of the same size.
    FOfZ {
        f: ConvexFunctionSpec,
        z: Box<Family>,
    },
    /// `n` distinct integers drawn uniformly from `[lo, hi]`.
    Random { lo: i64, hi: i64 },
    /// Greedy (Mian–Chowla) Sidon sequence `1, 2, 4, 8, 13, …`.
    Sidon,
}

impl Family {
    /// Short name used in labels and the CSV `family` column.
    pub fn name(&self) -> String {
        match self {
            Family::Squares => "squares".into(),
            Family::Cubes => "cubes".into(),
            Family::Quadratic { a, b, c } => format!("quadratic({a},{b},{c})"),
            Family::RandomConvexGaps => "random-convex-gaps".into(),
            Family::Ap { start, step } => format!("ap({start},{step})"),
            Family::Gp { ratio } => format!("gp({ratio})"),
            Family::Ggp { ratios, dims } => {
                let r: Vec<String> = ratios.iter().map(|r| r.to_string()).collect();
                let d: Vec<String> = dims.iter().map(|d| d.to_string()).collect();
                format!("ggp({};{})", r.join(","), d.join(","))
            }
            Family::FOfZ { f, z } => {
                let f = match f {
                    ConvexFunctionSpec::Power { p } => format!("x^{p}"),
                    ConvexFunctionSpec::Quadratic { a, b, c } => format!("{a}x^2+{b}x+{c}"),
                    ConvexFunctionSpec::Table { .. } => "table".into(),
                };
                format!("f-of-z({f};{})", z.name())
            }
            Family::Random { lo, hi } => format!("random({lo},{hi})"),
            Family::Sidon => "sidon".into(),
        }
    }

    /// Families whose output is convex by construction.
    pub fn is_convex_family(&self) -> bool {
        matches!(
            self,
            Family::Squares
                | Family::Cubes
                | Family::Quadratic { .. }
                | Family::RandomConvexGaps
                | Family::Gp { .. }
        )
    }

    /// Size forced by the parameters, if any.
    pub fn fixed_size(&self) -> Option<usize> {
        match self {
            Family::Ggp { dims, .. } => Some(dims.iter().product()),
            _ => None,
        }
    }

    fn uses_seed(&self) -> bool {
        match self {
            Family::RandomConvexGaps | Family::Random { .. } => true,
            Family::FOfZ { z, .. } => z.uses_seed(),
            _ => false,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FamilySpec {
    #[serde(flatten)]
    pub family: Family,
    pub n: usize,
    #[serde(default)]
    pub seed: u64,
}

impl FamilySpec {
    pub fn new(family: Family, n: usize, seed: u64) -> Self {
        FamilySpec { family, n, seed }
    }
}

fn ints(v: impl IntoIterator<Item = i128>) -> Vec<Rational> {
    v.into_iter().map(Rational::from).collect()
}

fn check_size(set: FiniteSet, n: usize, what: &str) -> Result<FiniteSet, GenError> {
    if set.len() == n {
        Ok(set)
    } else {
        Err(invalid(format!(
            "{what} produced {} distinct elements, expected {n}",
            set.len()
        )))
    }
}

/// Greedy Sidon sequence: each term is the least integer whose differences
/// with all earlier terms are new.
pub fn mian_chowla(n: usize) -> Vec<i64> {
    let mut terms: Vec<i64> = Vec::with_capacity(n);
    let mut seen = std::collections::HashSet::new();
    let mut candidate = 1i64;
    while terms.len() < n {
        if terms.iter().all(|&t| !seen.contains(&(candidate - t))) {
            for &t in &terms {
                seen.insert(candidate - t);
            }
            terms.push(candidate);
        }
        candidate += 1;
    }
    terms
}

/// Generates a set of exactly `spec.n` elements.
pub fn generate(spec: &FamilySpec) -> Result<FiniteSet, GenError> {
    let n = spec.n;
    if n == 0 {
        return Err(invalid("n must be at least 1"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let values = match &spec.family {
        Family::Squares => ints((1..=n as i128).map(|i| i * i)),
        Family::Cubes => ints((1..=n as i128).map(|i| i * i * i)),
        Family::Quadratic { a, b, c } => {
            let f = ConvexFunctionSpec::Quadratic {
                a: a.clone(),
                b: b.clone(),
                c: c.clone(),
            };
            f.validate()?;
            (1..=n as i64)
                .map(|i| f.eval(&Rational::from(i)))
                .collect::<Result<_, _>>()?
        }
        Family::RandomConvexGaps => {
            let mut out = Vec::with_capacity(n);
            let (mut x, mut gap) = (1i128, 0i128);
            out.push(x);
            for _ in 1..n {
                gap += rng.random_range(1..=4) as i128;
                x += gap;
                out.push(x);
            }
            ints(out)
        }
        Family::Ap { start, step } => {
            if step.is_zero() {
                return Err(invalid("ap step must be nonzero"));
            }
            (0..n as i64)
                .map(|i| start + &(step * &Rational::from(i)))
                .collect()
        }
        Family::Gp { ratio } => {
            if *ratio <= Rational::one() {
                return Err(invalid(format!("gp ratio must exceed 1, got {ratio}")));
            }
            (0..n as i32).map(|i| ratio.pow(i)).collect()
        }
        Family::Ggp { ratios, dims } => {
            if ratios.len() != dims.len() || ratios.is_empty() {
                return Err(invalid("ggp needs one dimension per ratio"));
            }
            if ratios.iter().any(|r| *r <= Rational::one()) || dims.contains(&0) {
                return Err(invalid("ggp ratios must exceed 1 and dims be positive"));
            }
            if dims.iter().product::<usize>() != n {
                return Err(invalid(format!(
                    "ggp box has {} points, n = {n}",
                    dims.iter().product::<usize>()
                )));
            }
            let mut out = vec![Rational::one()];
            for (r, &k) in ratios.iter().zip(dims) {
                out = out
                    .iter()
                    .flat_map(|x| (0..k as i32).map(move |i| x * &r.pow(i)))
                    .collect();
            }
            out
        }
        Family::FOfZ { f, z } => {
            let z = generate(&FamilySpec::new((**z).clone(), n, spec.seed))?;
            return generate_f_of_z(f, &z).map(|r| r.set);
        }
        Family::Random { lo, hi } => {
            if hi < lo {
                return Err(invalid("random range is empty"));
            }
            let width = (*hi as i128 - *lo as i128 + 1) as u128;
            if width < n as u128 || width > usize::MAX as u128 {
                return Err(invalid(format!(
                    "random range holds {width} integers, need {n}"
                )));
            }
            sample(&mut rng, width as usize, n)
                .into_iter()
                .map(|k| Rational::from(*lo as i128 + k as i128))
                .collect()
        }
        Family::Sidon => mian_chowla(n).into_iter().map(Rational::from).collect(),
    };
    check_size(
        FiniteSet::new(values, false).expect("n >= 1"),
        n,
        &spec.family.name(),
    )
}

/// One family at one or more sizes in the corpus.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CorpusEntry {
    #[serde(flatten)]
    pub family: Family,
    pub sizes: Vec<usize>,
    /// Independent draws per size; only meaningful for seeded families.
    #[serde(default = "one")]
    pub replicates: usize,
}

fn one() -> usize {
    1
}

impl CorpusEntry {
    pub fn new(family: Family, sizes: &[usize]) -> Self {
        CorpusEntry {
            family,
            sizes: sizes.to_vec(),
            replicates: 1,
        }
    }

    pub fn replicated(mut self, k: usize) -> Self {
        self.replicates = k;
        self
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CorpusConfig {
    pub seed: u64,
    pub entries: Vec<CorpusEntry>,
    /// Replaces every entry's sizes, except for families with a fixed size.
    #[serde(default, rename = "nGrid")]
    pub n_grid: Option<Vec<usize>>,
}

fn q(n: i64) -> Rational {
    Rational::from(n)
}

fn frac(n: i64, d: i64) -> Rational {
    Rational::new(n, d).expect("nonzero denominator")
}

impl Default for CorpusConfig {
    fn default() -> Self {
        CorpusConfig {
            seed: 0,
            n_grid: None,
            entries: vec![
                CorpusEntry::new(Family::Squares, &[16, 64, 256]),
                CorpusEntry::new(Family::Cubes, &[16, 64, 256]),
                CorpusEntry::new(
                    Family::Quadratic {
                        a: frac(1, 2),
                        b: frac(1, 2),
                        c: q(0),
                    },
                    &[16, 64],
                ),
                CorpusEntry::new(Family::RandomConvexGaps, &[16, 64, 256]),
                CorpusEntry::new(
                    Family::FOfZ {
                        f: ConvexFunctionSpec::Power { p: 2 },
                        z: Box::new(Family::Random { lo: 1, hi: 1024 }),
                    },
                    &[64],
                ),
                CorpusEntry::new(
                    Family::Ap {
                        start: q(1),
                        step: q(1),
                    },
                    &[64, 512],
                ),
                CorpusEntry::new(Family::Gp { ratio: q(2) }, &[32]),
                CorpusEntry::new(Family::Gp { ratio: frac(3, 2) }, &[32]),
                CorpusEntry::new(
                    Family::Ggp {
                        ratios: vec![q(2), q(3)],
                        dims: vec![8, 8],
                    },
                    &[64],
                ),
                CorpusEntry::new(Family::Random { lo: 1, hi: 4096 }, &[16, 64]),
                CorpusEntry::new(Family::Sidon, &[32]),
            ],
        }
    }
}

#[derive(Clone, Debug)]
pub struct CorpusMember {
    pub index: usize,
    pub spec: FamilySpec,
    /// e.g. `"squares/n=64"`, with `"#k"` appended for replicates.
    pub label: String,
    /// Structural tags: `convex` or `control`, then any of `small-product`,
    /// `sidon`, `f-of-z`, `random`.
    pub tags: Vec<String>,
    pub set: FiniteSet,
}

impl CorpusMember {
    pub fn is_convex(&self) -> bool {
        self.set.is_convex().is_some()
    }

    pub fn to_manifest(&self) -> serde_json::Value {
        json!({
            "index": self.index,
            "label": self.label,
            "spec": self.spec,
            "tags": self.tags,
        })
    }
}

fn tags_for(family: &Family, set: &FiniteSet) -> Vec<String> {
    let mut tags = Vec::new();
    if set.is_convex().is_some() {
        tags.push("convex");
    } else {
        tags.push("control");
    }
    match family {
        Family::Gp { .. } | Family::Ggp { .. } => tags.push("small-product"),
        Family::Sidon => tags.push("sidon"),
        Family::FOfZ { .. } => tags.push("f-of-z"),
        _ => {}
    }
    if family.uses_seed() {
        tags.push("random");
    }
    tags.into_iter().map(String::from).collect()
}

/// Materializes the corpus in configuration order.
pub fn corpus(config: &CorpusConfig) -> Result<Vec<CorpusMember>, GenError> {
    let mut members = Vec::new();
    for entry in &config.entries {
        let sizes = match (entry.family.fixed_size(), &config.n_grid) {
            (Some(k), _) => vec![k],
            (None, Some(grid)) => grid.clone(),
            (None, None) => entry.sizes.clone(),
        };
        for &n in &sizes {
            for rep in 0..entry.replicates.max(1) {
                let index = members.len();
                let spec = FamilySpec::new(entry.family.clone(), n, config.seed ^ index as u64);
                let set = generate(&spec)?;
                let mut label = format!("{}/n={n}", entry.family.name());
                if entry.replicates > 1 {
                    label.push_str(&format!("#{rep}"));
                }
                members.push(CorpusMember {
                    index,
                    tags: tags_for(&spec.family, &set),
                    spec,
                    label,
                    set,
                });
            }
        }
    }
    Ok(members)
}

/// `{"seed":…,"members":[{"index","label","spec","tags"},…]}`
pub fn corpus_manifest(config: &CorpusConfig, members: &[CorpusMember]) -> serde_json::Value {
    json!({
        "seed": config.seed,
        "members": members.iter().map(CorpusMember::to_manifest).collect::<Vec<_>>(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gen(family: Family, n: usize, seed: u64) -> FiniteSet {
        generate(&FamilySpec::new(family, n, seed)).unwrap()
    }

    fn ints_of(s: &FiniteSet) -> Vec<i64> {
        s.int_view().unwrap().to_vec()
    }

    #[test]
    fn fixed_families() {
        assert_eq!(ints_of(&gen(Family::Squares, 4, 0)), vec![1, 4, 9, 16]);
        assert_eq!(ints_of(&gen(Family::Cubes, 3, 0)), vec![1, 8, 27]);
        let g = gen(Family::Gp { ratio: q(2) }, 5, 0);
        assert_eq!(ints_of(&g), vec![1, 2, 4, 8, 16]);
        assert_eq!(g.doubling_stats().productset_size, 9);
        assert_eq!(
            ints_of(&gen(Family::Sidon, 8, 0)),
            vec![1, 2, 4, 8, 13, 21, 31, 45]
        );
        let ap = gen(
            Family::Ap {
                start: q(3),
                step: frac(1, 2),
            },
            3,
            0,
        );
        assert_eq!(ap.elements(), &[q(3), frac(7, 2), q(4)]);
    }

    #[test]
    fn random_convex_gaps_are_convex() {
        let s = gen(Family::RandomConvexGaps, 16, 7);
        assert_eq!(s.len(), 16);
        let w = s.is_convex().expect("convex by construction");
        let v = ints_of(&s);
        assert!((1..=4).contains(&(v[1] - v[0])));
        for i in 1..w.gaps.len() {
            let step = &w.gaps[i] - &w.gaps[i - 1];
            assert!(step >= q(1) && step <= q(4));
        }
    }

    #[test]
    fn seeds_are_deterministic() {
        let a = gen(Family::Random { lo: 0, hi: 1000 }, 50, 9);
        let b = gen(Family::Random { lo: 0, hi: 1000 }, 50, 9);
        let c = gen(Family::Random { lo: 0, hi: 1000 }, 50, 10);
        assert_eq!(a.to_json(), b.to_json());
        assert_ne!(a.to_json(), c.to_json());
        assert_eq!(gen(Family::Random { lo: 0, hi: 9 }, 10, 3).len(), 10);
    }

    #[test]
    fn gp_small_product_set() {
        for ratio in [q(2), frac(3, 2), q(5)] {
            let n = 20;
            let g = gen(Family::Gp { ratio }, n, 0);
            assert!(g.is_convex().is_some());
            assert_eq!(g.doubling_stats().productset_size, 2 * n - 1);
        }
    }

    #[test]
    fn ggp_box_bound() {
        let g = gen(
            Family::Ggp {
                ratios: vec![q(2), q(3)],
                dims: vec![4, 5],
            },
            20,
            0,
        );
        assert_eq!(g.len(), 20);
        assert_eq!(g.doubling_stats().productset_size, 7 * 9);
        let err = generate(&FamilySpec::new(
            Family::Ggp {
                ratios: vec![q(2)],
                dims: vec![4],
            },
            5,
            0,
        ));
        assert!(matches!(err, Err(GenError::InvalidParameter(_))));
        // 4 = 2^2 collides with the ratio-4 axis
        let err = generate(&FamilySpec::new(
            Family::Ggp {
                ratios: vec![q(2), q(4)],
                dims: vec![3, 2],
            },
            6,
            0,
        ));
        assert!(matches!(err, Err(GenError::InvalidParameter(_))));
    }

    #[test]
    fn f_of_z_cases() {
        let z = FiniteSet::from_ints(&[1, 2, 3]).unwrap();
        let r = generate_f_of_z(&ConvexFunctionSpec::Power { p: 2 }, &z).unwrap();
        assert_eq!(ints_of(&r.set), vec![1, 4, 9]);
        let z = FiniteSet::parse(&["1", "3/2", "2"]).unwrap();
        let r = generate_f_of_z(&ConvexFunctionSpec::Power { p: 3 }, &z).unwrap();
        assert_eq!(r.set.elements(), &[q(1), frac(27, 8), q(8)]);
        let sym = FiniteSet::from_ints(&[-1, 0, 1]).unwrap();
        assert!(matches!(
            generate_f_of_z(&ConvexFunctionSpec::Power { p: 2 }, &sym),
            Err(GenError::NonInjective(_))
        ));
        let neg = FiniteSet::from_ints(&[-2, -1, 1]).unwrap();
        assert!(matches!(
            generate_f_of_z(&ConvexFunctionSpec::Power { p: 3 }, &neg),
            Err(GenError::NotConvexOnDomain(_))
        ));
        let table = ConvexFunctionSpec::Table {
            points: vec![(q(0), q(0)), (q(1), q(1)), (q(2), q(2))],
        };
        assert!(matches!(
            generate_f_of_z(&table, &FiniteSet::from_ints(&[0, 1, 2]).unwrap()),
            Err(GenError::NotConvexOnDomain(_))
        ));
        let squares = gen(
            Family::FOfZ {
                f: ConvexFunctionSpec::Power { p: 2 },
                z: Box::new(Family::Ap {
                    start: q(1),
                    step: q(1),
                }),
            },
            10,
            0,
        );
        assert_eq!(squares.to_json(), gen(Family::Squares, 10, 0).to_json());
    }

    #[test]
    fn spec_json_round_trip() {
        let spec = FamilySpec::new(
            Family::Ap {
                start: q(1),
                step: q(1),
            },
            64,
            3,
        );
        let text = serde_json::to_string(&spec).unwrap();
        assert_eq!(
            text,
            r#"{"family":"ap","start":"1","step":"1","n":64,"seed":3}"#
        );
        let back: FamilySpec = serde_json::from_str(r#"{"family":"squares","n":4}"#).unwrap();
        assert_eq!(back, FamilySpec::new(Family::Squares, 4, 0));
        let nested: FamilySpec = serde_json::from_str(
            r#"{"family":"f-of-z","f":{"kind":"power","p":3},"z":{"family":"ap","start":1,"step":"1/2"},"n":3}"#,
        )
        .unwrap();
        assert_eq!(
            generate(&nested).unwrap().elements(),
            &[q(1), frac(27, 8), q(8)]
        );
    }

    #[test]
    fn default_corpus() {
        let cfg = CorpusConfig::default();
        let members = corpus(&cfg).unwrap();
        let labels: Vec<&str> = members.iter().map(|m| m.label.as_str()).collect();
        for want in [
            "squares/n=16",
            "squares/n=64",
            "squares/n=256",
            "ap(1,1)/n=64",
            "ap(1,1)/n=512",
            "gp(2)/n=32",
        ] {
            assert!(labels.contains(&want), "{want} missing");
        }
        for m in &members {
            assert_eq!(m.set.len(), m.spec.n);
            if m.spec.family.is_convex_family() {
                assert!(m.is_convex(), "{}", m.label);
            }
        }
        let other = corpus(&CorpusConfig {
            seed: 99,
            ..cfg.clone()
        })
        .unwrap();
        for (a, b) in members.iter().zip(&other) {
            if a.tags.iter().any(|t| t == "random") {
                assert_ne!(a.set.to_json(), b.set.to_json(), "{}", a.label);
            } else {
                assert_eq!(a.set.to_json(), b.set.to_json(), "{}", a.label);
            }
        }
        let grid = corpus(&CorpusConfig {
            n_grid: Some(vec![8]),
            ..cfg
        })
        .unwrap();
        assert!(grid
            .iter()
            .all(|m| m.set.len() == 8 || m.spec.family.fixed_size().is_some()));
    }
}
