//! Translates of one convex graph as a pseudo-line system.
//!
//! `L_{z,b} = G(f) + (z, -b)`, so the point `(s, x)` lies on `L_{z,b}` iff
//! `x = f(s - z) - b`. Points live on the grid `(Z+Z) × (A-B)` with
//! `A = f(Z)`. All incidences are decided by exact rational equality.

use std::ops::Add;
use std::sync::OnceLock;

use rayon::prelude::*;
use serde::Serialize;
use serde_json::json;
use thiserror::Error;

use crate::check::{CheckResult, Quantity, Relation, Verdict};
use crate::generators::{generate_f_of_z, ConvexFunctionSpec, GenError};
use crate::interval::Interval;
use crate::lemmas::check_tail_bound;
use crate::scalar::Rational;
use crate::set::FiniteSet;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum IncidenceError {
    #[error(transparent)]
    Function(#[from] GenError),
    #[error("f has no exact value at {0}")]
    NotEvaluable(Rational),
    #[error("delta_{{A,B}}({x}) = {delta} < tau = {tau}")]
    InsufficientMultiplicity {
        x: Rational,
        delta: usize,
        tau: usize,
    },
    #[error("tau must be at least 1")]
    ZeroTau,
}

/// Per-point incidence counts, sparse, sorted by `(s index, x index)`.
#[derive(Clone, Debug, Default)]
pub struct Tally {
    cells: Vec<(u32, u32, u32)>,
    total: u64,
}

impl Tally {
    pub fn total(&self) -> u64 {
        self.total
    }

    /// Number of grid points on at least one curve.
    pub fn occupied(&self) -> usize {
        self.cells.len()
    }

    pub fn at(&self, si: usize, xi: usize) -> u32 {
        self.cells
            .binary_search_by_key(&(si as u32, xi as u32), |&(s, x, _)| (s, x))
            .map_or(0, |k| self.cells[k].2)
    }

    pub fn cells(&self) -> impl Iterator<Item = (usize, usize, u32)> + '_ {
        self.cells
            .iter()
            .map(|&(s, x, c)| (s as usize, x as usize, c))
    }

    /// `|P_τ|`.
    pub fn rich_count(&self, tau: u32) -> usize {
        self.cells.iter().filter(|c| c.2 >= tau).count()
    }

    pub fn max_multiplicity(&self) -> u32 {
        self.cells.iter().map(|c| c.2).max().unwrap_or(0)
    }
}

#[derive(Debug)]
pub struct PseudoLineSystem {
    pub f: ConvexFunctionSpec,
    pub z: FiniteSet,
    pub b: FiniteSet,
    /// `f(Z)`
    pub a: FiniteSet,
    /// `Z + Z`
    pub s_grid: FiniteSet,
    /// `A - B`
    pub x_grid: FiniteSet,
    /// `|Z+Z| / |Z|`
    pub m: Rational,
    tally: OnceLock<Tally>,
}

/// Builds `L = {L_{z,b}}` and the grid. A value table must cover every
/// argument `s - z` the count will evaluate.
pub fn build_system(
    f: &ConvexFunctionSpec,
    z: &FiniteSet,
    b: &FiniteSet,
) -> Result<PseudoLineSystem, IncidenceError> {
    let a = generate_f_of_z(f, z)?.set;
    let s_grid = z.sumset(z);
    if let ConvexFunctionSpec::Table { .. } = f {
        for s in &s_grid {
            for t in z {
                let arg = s - t;
                if f.eval(&arg).is_err() {
                    return Err(IncidenceError::NotEvaluable(arg));
                }
            }
        }
    }
    let x_grid = a.diffset(b);
    let m = Rational::new(s_grid.len() as i64, z.len() as i64).expect("Z nonempty");
    Ok(PseudoLineSystem {
        f: f.clone(),
        z: z.clone(),
        b: b.clone(),
        a,
        s_grid,
        x_grid,
        m,
        tally: OnceLock::new(),
    })
}

impl PseudoLineSystem {
    pub fn curve_count(&self) -> usize {
        self.z.len() * self.b.len()
    }

    pub fn point_count(&self) -> usize {
        self.s_grid.len() * self.x_grid.len()
    }

    fn eval(&self, x: &Rational) -> Rational {
        self.f.eval(x).expect("evaluability checked at build time")
    }

    fn x_index(&self, x: &Rational) -> Option<usize> {
        self.x_grid.elements().binary_search(x).ok()
    }

    /// Curve-major sweep over `(z, b)`, one sorted hit list per curve,
    /// merged in curve order.
    pub fn tally(&self) -> &Tally {
        self.tally.get_or_init(|| {
            let curves: Vec<(usize, usize)> = (0..self.z.len())
                .flat_map(|i| (0..self.b.len()).map(move |j| (i, j)))
                .collect();
            let mut hits: Vec<(u32, u32)> = curves
                .par_iter()
                .flat_map_iter(|&(i, j)| {
                    let z = &self.z.elements()[i];
                    let b = &self.b.elements()[j];
                    self.s_grid
                        .iter()
                        .enumerate()
                        .filter_map(|(si, s)| {
                            let x = &self.eval(&(s - z)) - b;
                            self.x_index(&x).map(|xi| (si as u32, xi as u32))
                        })
                        .collect::<Vec<_>>()
                })
                .collect();
            hits.sort_unstable();
            let total = hits.len() as u64;
            let mut cells: Vec<(u32, u32, u32)> = Vec::new();
            for (s, x) in hits {
                match cells.last_mut() {
                    Some(last) if last.0 == s && last.1 == x => last.2 += 1,
                    _ => cells.push((s, x, 1)),
                }
            }
            Tally { cells, total }
        })
    }

    /// `#{(z, b) : f(z) - b = x}`.
    pub fn representation_pairs(&self, x: &Rational) -> Vec<(Rational, Rational)> {
        self.z
            .iter()
            .zip(self.a_values())
            .filter_map(|(z, fz)| {
                let b = &fz - x;
                self.b.contains(&b).then(|| (z.clone(), b))
            })
            .collect()
    }

    fn a_values(&self) -> impl Iterator<Item = Rational> + '_ {
        self.z.iter().map(|z| self.eval(z))
    }
}

/// Exact number of incident (point, curve) pairs.
pub fn count_incidences(sys: &PseudoLineSystem) -> u64 {
    sys.tally().total()
}

#[derive(Clone, Debug, Serialize)]
pub struct RichPointReport {
    pub tau: u32,
    #[serde(rename = "richPoints")]
    pub rich_points: Vec<(Rational, Rational)>,
    pub count: usize,
    /// `C |Z|^2 |B|^2 / τ^3`
    pub bound: Rational,
    pub ratio: f64,
}

pub fn rich_points(
    sys: &PseudoLineSystem,
    tau: u32,
    constant: f64,
) -> Result<RichPointReport, IncidenceError> {
    if tau == 0 {
        return Err(IncidenceError::ZeroTau);
    }
    let tally = sys.tally();
    let rich_points: Vec<(Rational, Rational)> = tally
        .cells()
        .filter(|c| c.2 >= tau)
        .map(|(si, xi, _)| {
            (
                sys.s_grid.elements()[si].clone(),
                sys.x_grid.elements()[xi].clone(),
            )
        })
        .collect();
    let (nz, nb) = (sys.z.len() as i64, sys.b.len() as i64);
    let c = Rational::from_f64(constant).expect("finite constant");
    let base = Rational::from(nz * nz * nb * nb)
        .div(&Rational::from(tau as i64).pow(3))
        .expect("tau >= 1");
    let bound = &c * &base;
    let count = rich_points.len();
    let ratio = Rational::from(count as i64)
        .div(&bound)
        .map_or(f64::INFINITY, |r| r.to_f64());
    Ok(RichPointReport {
        tau,
        rich_points,
        count,
        bound,
        ratio,
    })
}

fn dyadic_taus(top: u32) -> Vec<u32> {
    std::iter::successors(Some(1u32), |t| t.checked_mul(2))
        .take_while(|&t| t <= top.max(1))
        .collect()
}

/// Szemerédi–Trotter profile over `τ = 1, 2, 4, … <= |L|`:
/// `τ|P_τ| <= C ((|P_τ||Z||B|)^{2/3} + |Z||B| + |P_τ|)`.
pub fn st_profile(sys: &PseudoLineSystem, constant: f64) -> CheckResult {
    let tally = sys.tally();
    let lines = sys.curve_count() as f64;
    let c = Rational::from_f64(constant).expect("finite constant");
    let mut rows = Vec::new();
    let mut worst: Option<CheckResult> = None;
    let mut verdict = Verdict::Holds;
    for tau in dyadic_taus(sys.curve_count() as u32) {
        let p = tally.rich_count(tau) as f64;
        let cross = Interval::with_relative_error((p * lines).powf(2.0 / 3.0), 1e-12);
        let rhs = cross.add(Interval::point(lines)).add(Interval::point(p));
        let step = CheckResult::compare(
            "st_profile",
            Relation::Le,
            Quantity::exact(tau as i64 * p as i64),
            Quantity::approx(rhs),
            Some(&c),
        );
        rows.push(
            json!({ "tau": tau, "rich": p as u64, "ratio": step.ratio, "verdict": step.verdict }),
        );
        verdict = match (verdict, step.verdict) {
            (Verdict::Fails, _) | (_, Verdict::Fails) => Verdict::Fails,
            (Verdict::Marginal, _) | (_, Verdict::Marginal) => Verdict::Marginal,
            _ => Verdict::Holds,
        };
        if worst.as_ref().is_none_or(|w| step.ratio > w.ratio) {
            worst = Some(step);
        }
    }
    let mut out = worst.expect("at least tau = 1");
    out.verdict = verdict;
    out.with_constant(constant)
        .with_witness(json!({ "profile": rows }))
}

/// Checks the popularity step for one `x` with `δ_{A,B}(x) >= τ`, using the
/// `τ` lexicographically smallest representation pairs `(z_i, b_i)`:
/// `Σ_s M_x(s) = τ|Z|`, each `(s, x)` is on at least `M_x(s)` curves, and
/// `|{s : M_x(s) >= τ/(2M)}| >= |Z|/2`. The result reports the last
/// inequality; the other two force a failure if violated.
pub fn verify_popularity(
    sys: &PseudoLineSystem,
    x: &Rational,
    tau: usize,
) -> Result<CheckResult, IncidenceError> {
    if tau == 0 {
        return Err(IncidenceError::ZeroTau);
    }
    let pairs = sys.representation_pairs(x);
    if pairs.len() < tau {
        return Err(IncidenceError::InsufficientMultiplicity {
            x: x.clone(),
            delta: pairs.len(),
            tau,
        });
    }
    let chosen = &pairs[..tau];
    let profile: Vec<u32> = sys
        .s_grid
        .iter()
        .map(|s| {
            chosen
                .iter()
                .filter(|(zi, _)| sys.z.contains(&(s - zi)))
                .count() as u32
        })
        .collect();
    let sum: u64 = profile.iter().map(|&m| m as u64).sum();
    let sum_ok = sum == (tau * sys.z.len()) as u64;

    let tally = sys.tally();
    let xi = sys.x_index(x).expect("x in A - B");
    let mut membership_ok = true;
    for (si, &m) in profile.iter().enumerate() {
        if m == 0 {
            continue;
        }
        let s = &sys.s_grid.elements()[si];
        let on_curves = chosen.iter().filter(|(zi, bi)| {
            let z = s - zi;
            sys.z.contains(&z) && &(&sys.eval(&(s - &z)) - bi) == x
        });
        if (on_curves.count() as u32) < m || tally.at(si, xi) < m {
            membership_ok = false;
        }
    }

    let threshold = Rational::from(tau as i64)
        .div(&(&Rational::from(2i64) * &sys.m))
        .expect("M > 0");
    let popular = profile
        .iter()
        .filter(|&&m| Rational::from(m as i64) >= threshold)
        .count();
    let half = Rational::new(sys.z.len() as i64, 2).expect("nonzero");
    let mut result = CheckResult::compare(
        "popularity",
        Relation::Ge,
        Quantity::exact(popular as i64),
        Quantity::Exact(half),
        None,
    )
    .with_witness(json!({
        "x": x,
        "tau": tau,
        "pairs": chosen,
        "profile": profile,
        "sum": sum,
        "sumIdentity": sum_ok,
        "threshold": threshold,
        "M": sys.m,
        "membership": membership_ok,
    }));
    if !sum_ok || !membership_ok {
        result = result.fail();
    }
    Ok(result)
}

/// Dyadic-τ sweep of `|{x : δ_{A,B}(x) >= τ}| <= C M^3 |A||B|^2 / τ^3` with
/// `A = f(Z)` and exact `M = |Z+Z|/|Z|`.
pub fn check_lemma_41(
    f: &ConvexFunctionSpec,
    z: &FiniteSet,
    b: &FiniteSet,
    constant: f64,
) -> Result<CheckResult, IncidenceError> {
    let a = generate_f_of_z(f, z)?.set;
    let m = Rational::new(z.sumset(z).len() as i64, z.len() as i64).expect("Z nonempty");
    let mut result = check_tail_bound(&a, b, constant, Some(&m));
    result.name = "lemma_41".into();
    Ok(result)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rep::{rep_function, RepKind};

    fn set(v: &[i64]) -> FiniteSet {
        FiniteSet::from_ints(v).unwrap()
    }

    const SQUARE: ConvexFunctionSpec = ConvexFunctionSpec::Power { p: 2 };

    /// Points × curves, the literal definition.
    fn oracle_tally(sys: &PseudoLineSystem) -> Vec<Vec<u32>> {
        sys.s_grid
            .iter()
            .map(|s| {
                sys.x_grid
                    .iter()
                    .map(|x| {
                        let mut k = 0;
                        for z in &sys.z {
                            for b in &sys.b {
                                if &(&SQUARE.eval(&(s - z)).unwrap() - b) == x {
                                    k += 1;
                                }
                            }
                        }
                        k
                    })
                    .collect()
            })
            .collect()
    }

    #[test]
    fn fixture_system() {
        let sys = build_system(&SQUARE, &set(&[1, 2, 3]), &set(&[0, 1])).unwrap();
        assert_eq!(sys.curve_count(), 6);
        assert_eq!(sys.s_grid.int_view().unwrap(), &[2, 3, 4, 5, 6]);
        assert_eq!(sys.x_grid.int_view().unwrap(), &[0, 1, 3, 4, 8, 9]);
        assert_eq!(sys.point_count(), 30);
        assert_eq!(count_incidences(&sys), 22);
        let oracle = oracle_tally(&sys);
        let total: u32 = oracle.iter().flatten().sum();
        assert_eq!(total, 22);
        for (si, row) in oracle.iter().enumerate() {
            for (xi, &k) in row.iter().enumerate() {
                assert_eq!(sys.tally().at(si, xi), k);
            }
        }
        let mut hist = [0usize; 4];
        for (_, _, c) in sys.tally().cells() {
            hist[c as usize] += 1;
        }
        assert_eq!(hist, [0, 15, 2, 1]);
    }

    #[test]
    fn rich_point_nesting_and_conservation() {
        let sys = build_system(&SQUARE, &set(&[1, 2, 3, 5, 8]), &set(&[0, 1, 3, 4])).unwrap();
        let top = sys.tally().max_multiplicity();
        let mut weighted = 0u64;
        for tau in 1..=top + 1 {
            let now = rich_points(&sys, tau, 1.0).unwrap();
            let next = rich_points(&sys, tau + 1, 1.0).unwrap();
            assert!(next.rich_points.iter().all(|p| now.rich_points.contains(p)));
            weighted += ((now.count - next.count) as u64) * tau as u64;
        }
        assert_eq!(weighted, count_incidences(&sys));
        assert_eq!(
            rich_points(&sys, sys.curve_count() as u32 + 1, 1.0)
                .unwrap()
                .count,
            0
        );
        assert_eq!(
            rich_points(&sys, 1, 1.0).unwrap().count,
            sys.tally().occupied()
        );
        assert!(rich_points(&sys, 0, 1.0).is_err());
    }

    #[test]
    fn fixture_rich_points_tau3() {
        let sys = build_system(&SQUARE, &set(&[1, 2, 3]), &set(&[0, 1])).unwrap();
        let r = rich_points(&sys, 3, 1.0).unwrap();
        assert_eq!(r.count, 1);
        assert_eq!(r.bound, Rational::new(36, 27).unwrap());
    }

    #[test]
    fn delta_matches_curve_count() {
        let z = set(&[1, 2, 4, 7, 11]);
        let b = set(&[0, 2, 3, 9]);
        let sys = build_system(&SQUARE, &z, &b).unwrap();
        let delta = rep_function(&sys.a, &b, RepKind::Difference);
        for (x, d) in delta.iter() {
            assert_eq!(sys.representation_pairs(&x).len() as u64, d);
        }
    }

    #[test]
    fn degenerate_systems() {
        let sys = build_system(&SQUARE, &set(&[1]), &set(&[0])).unwrap();
        assert_eq!(sys.curve_count(), 1);
        assert_eq!(sys.s_grid.len(), 1);
        assert_eq!(count_incidences(&sys), 1);
        let two = build_system(&SQUARE, &set(&[1, 2, 3]), &set(&[0, 1, 5, 6])).unwrap();
        // additivity over the b-partition of the curves, on the shared grid
        let direct: u64 = two.tally().total();
        let split = |bs: &[i64]| -> u64 {
            let mut k = 0;
            for s in &two.s_grid {
                for z in &two.z {
                    for &b in bs {
                        let x = &SQUARE.eval(&(s - z)).unwrap() - &Rational::from(b);
                        if two.x_grid.contains(&x) {
                            k += 1;
                        }
                    }
                }
            }
            k
        };
        assert_eq!(direct, split(&[0, 1]) + split(&[5, 6]));
    }

    #[test]
    fn fixture_popularity() {
        let sys = build_system(&SQUARE, &set(&[1, 2, 3]), &set(&[0, 1, 3, 5])).unwrap();
        let r = verify_popularity(&sys, &Rational::from(1i64), 2).unwrap();
        assert!(r.holds());
        let w = r.witness.as_ref().unwrap();
        assert_eq!(w["profile"], json!([1, 2, 2, 1, 0]));
        assert_eq!(w["sum"], 6);
        assert_eq!(w["threshold"], "3/5");
        assert_eq!(r.lhs, Quantity::exact(4));
        assert_eq!(r.rhs, Quantity::Exact(Rational::new(3, 2).unwrap()));
        let single = verify_popularity(&sys, &Rational::from(1i64), 1).unwrap();
        assert_eq!(single.witness.unwrap()["sum"], 3);
        assert_eq!(
            verify_popularity(&sys, &Rational::from(1i64), 3).unwrap_err(),
            IncidenceError::InsufficientMultiplicity {
                x: Rational::from(1i64),
                delta: 2,
                tau: 3
            }
        );
    }

    #[test]
    fn popularity_on_every_admissible_pair() {
        let sys = build_system(
            &SQUARE,
            &set(&[1, 2, 3, 4, 6, 9]),
            &set(&[0, 1, 3, 5, 8, 15]),
        )
        .unwrap();
        let delta = rep_function(&sys.a, &sys.b, RepKind::Difference);
        for (x, d) in delta.iter() {
            for tau in 1..=d as usize {
                let r = verify_popularity(&sys, &x, tau).unwrap();
                assert!(r.witness.as_ref().unwrap()["sumIdentity"]
                    .as_bool()
                    .unwrap());
                assert!(r.witness.as_ref().unwrap()["membership"].as_bool().unwrap());
                assert!(r.holds(), "x={x} tau={tau}");
            }
        }
    }

    #[test]
    fn st_profile_fixture() {
        let sys = build_system(&SQUARE, &set(&[1, 2, 3]), &set(&[0, 1])).unwrap();
        assert!(st_profile(&sys, 3.0).holds());
    }

    #[test]
    fn lemma_41_small() {
        let z = set(&(1..=16).collect::<Vec<_>>());
        let r = check_lemma_41(&SQUARE, &z, &set(&[1, 4, 9, 16]), 1.0).unwrap();
        assert_eq!(r.name, "lemma_41");
        assert!(r.holds());
        assert_eq!(r.witness.unwrap()["M"], "31/16");
    }

    #[test]
    fn table_must_cover_arguments() {
        let f = ConvexFunctionSpec::Table {
            points: vec![
                (Rational::from(1i64), Rational::from(1i64)),
                (Rational::from(2i64), Rational::from(4i64)),
            ],
        };
        assert!(matches!(
            build_system(&f, &set(&[1, 2]), &set(&[0])),
            Err(IncidenceError::NotEvaluable(_))
        ));
    }
}
