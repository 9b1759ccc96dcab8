//! Simulated annealing over convex gap sequences.
//!
//! The state is a strictly increasing sequence of positive integer gaps; the
//! set is its partial sums starting at 1. A move changes one gap by ±1 and
//! is rejected outright if the gaps stop increasing strictly, so every
//! visited set is convex. The objective is minimized.

use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::lemmas::{diffset_lower_bound, sumset_lower_bound};
use crate::set::FiniteSet;

const PROBE_MOVES: usize = 100;
pub const DEFAULT_COOLING: f64 = 0.999;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SearchError {
    #[error("unknown objective {0:?} (expected plus-ratio or minus-ratio)")]
    InvalidObjective(String),
    #[error("search needs n >= 3, got {0}")]
    SizeTooSmall(usize),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Objective {
    /// `|A+A| (log2 n)^{2/9} / n^{14/9}`
    PlusRatio,
    /// `|A-A| (log2 n)^{2/5} / n^{8/5}`
    MinusRatio,
}

impl FromStr for Objective {
    type Err = SearchError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "plus-ratio" | "plus" => Ok(Objective::PlusRatio),
            "minus-ratio" | "minus" => Ok(Objective::MinusRatio),
            other => Err(SearchError::InvalidObjective(other.to_string())),
        }
    }
}

impl Objective {
    pub fn eval(self, set: &FiniteSet) -> f64 {
        let n = set.len();
        match self {
            Objective::PlusRatio => set.sumset(set).len() as f64 / sumset_lower_bound(n),
            Objective::MinusRatio => set.diffset(set).len() as f64 / diffset_lower_bound(n),
        }
    }
}

/// Temperature schedule `T_k = T_0 · cooling^k`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Schedule {
    /// `None` picks `T_0` so that about half of the uphill moves in a
    /// 100-move probe would be accepted; `Some(0.0)` is a hill climb.
    pub t0: Option<f64>,
    pub cooling: f64,
}

impl Default for Schedule {
    fn default() -> Self {
        Schedule {
            t0: None,
            cooling: DEFAULT_COOLING,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TraceEntry {
    pub iter: u64,
    pub index: usize,
    pub step: i64,
    pub objective: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct SearchState {
    pub n: usize,
    #[serde(rename = "objectiveKind")]
    pub objective_kind: Objective,
    pub gaps: Vec<i64>,
    pub objective: f64,
    #[serde(rename = "initialObjective")]
    pub initial_objective: f64,
    #[serde(rename = "bestGaps")]
    pub best_gaps: Vec<i64>,
    #[serde(rename = "bestObjective")]
    pub best_objective: f64,
    /// Best-so-far objective after each iteration.
    #[serde(skip)]
    pub best_history: Vec<f64>,
    pub t0: f64,
    pub iterations: u64,
    pub accepted: u64,
    pub seed: u64,
    /// ChaCha word position at the end of the run.
    #[serde(rename = "rngWordPos")]
    pub rng_word_pos: String,
    pub trace: Vec<TraceEntry>,
}

impl SearchState {
    pub fn best_set(&self) -> FiniteSet {
        set_from_gaps(&self.best_gaps)
    }

    pub fn current_set(&self) -> FiniteSet {
        set_from_gaps(&self.gaps)
    }
}

/// Partial sums of `gaps` starting from 1.
pub fn set_from_gaps(gaps: &[i64]) -> FiniteSet {
    let mut v = Vec::with_capacity(gaps.len() + 1);
    let mut x = 1i64;
    v.push(x);
    for g in gaps {
        x += g;
        v.push(x);
    }
    FiniteSet::from_ints(&v).expect("nonempty")
}

/// Gaps `3, 5, 7, …` of the squares `1, 4, 9, …`.
pub fn seed_gaps(n: usize) -> Vec<i64> {
    (1..n as i64).map(|i| 2 * i + 1).collect()
}

fn move_is_valid(gaps: &[i64], i: usize, step: i64) -> bool {
    let g = gaps[i] + step;
    g >= 1 && (i == 0 || gaps[i - 1] < g) && (i + 1 == gaps.len() || g < gaps[i + 1])
}

fn propose(rng: &mut ChaCha8Rng, len: usize) -> (usize, i64) {
    let i = rng.random_range(0..len);
    let step = if rng.random_bool(0.5) { 1 } else { -1 };
    (i, step)
}

fn evaluate(objective: Objective, gaps: &[i64]) -> f64 {
    objective.eval(&set_from_gaps(gaps))
}

pub fn extremal_search(
    n: usize,
    objective: Objective,
    iters: u64,
    seed: u64,
    schedule: Schedule,
) -> Result<SearchState, SearchError> {
    if n < 3 {
        return Err(SearchError::SizeTooSmall(n));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut gaps = seed_gaps(n);
    let mut current = evaluate(objective, &gaps);
    let initial = current;

    let t0 = match schedule.t0 {
        Some(t) => t.max(0.0),
        None if iters == 0 => 0.0,
        None => {
            let mut uphill = Vec::new();
            for _ in 0..PROBE_MOVES {
                let (i, step) = propose(&mut rng, gaps.len());
                if move_is_valid(&gaps, i, step) {
                    gaps[i] += step;
                    let d = evaluate(objective, &gaps) - current;
                    gaps[i] -= step;
                    if d > 0.0 {
                        uphill.push(d);
                    }
                }
            }
            if uphill.is_empty() {
                0.0
            } else {
                let mean = uphill.iter().sum::<f64>() / uphill.len() as f64;
                mean / std::f64::consts::LN_2
            }
        }
    };

    let mut best = (gaps.clone(), current);
    let mut history = Vec::with_capacity(iters as usize);
    let mut trace = Vec::new();
    let mut accepted = 0u64;
    let mut temp = t0;
    for k in 0..iters {
        let (i, step) = propose(&mut rng, gaps.len());
        let u: f64 = rng.random();
        if move_is_valid(&gaps, i, step) {
            gaps[i] += step;
            let cand = evaluate(objective, &gaps);
            let d = cand - current;
            let accept = d < 0.0 || (temp > 0.0 && u < (-d / temp).exp() && d > 0.0);
            if accept {
                current = cand;
                accepted += 1;
                trace.push(TraceEntry {
                    iter: k,
                    index: i,
                    step,
                    objective: cand,
                });
                if cand < best.1 {
                    best = (gaps.clone(), cand);
                }
            } else {
                gaps[i] -= step;
            }
        }
        history.push(best.1);
        temp *= schedule.cooling;
    }

    Ok(SearchState {
        n,
        objective_kind: objective,
        gaps,
        objective: current,
        initial_objective: initial,
        best_gaps: best.0,
        best_objective: best.1,
        best_history: history,
        t0,
        iterations: iters,
        accepted,
        seed,
        rng_word_pos: rng.get_word_pos().to_string(),
        trace,
    })
}
