//! Runs the checks over a corpus and assembles a deterministic report.

use std::collections::BTreeMap;
use std::str::FromStr;
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::json;
use thiserror::Error;

use crate::check::{CheckResult, Relation, Verdict};
use crate::energy::EnergyError;
use crate::generators::{
    corpus, corpus_manifest, generate, CorpusConfig, CorpusMember, Family, FamilySpec, GenError,
};
use crate::incidence::{check_lemma_41, IncidenceError};
use crate::lemmas::{self, CheckError, Sign};
use crate::scalar::Rational;
use crate::set::FiniteSet;

pub const EXIT_EXACT_FAILURE: i32 = 2;
pub const EXIT_CONSTANT_FAILURE: i32 = 3;

#[derive(Debug, Error)]
pub enum SuiteError {
    #[error(transparent)]
    Corpus(#[from] GenError),
    #[error(transparent)]
    Check(#[from] CheckError),
    #[error(transparent)]
    Energy(#[from] EnergyError),
    #[error(transparent)]
    Incidence(#[from] IncidenceError),
    #[error("unknown check {0:?}")]
    UnknownCheck(String),
    #[error("thread pool: {0}")]
    Pool(String),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CheckKind {
    EnergyIdentity,
    InclusionSumset,
    AsInclusion,
    CsStep,
    Lemma23,
    Lemma24,
    Lemma25,
    TailBound,
    E2E15,
    Theorem11,
    Theorem12,
    RemarkMixed,
    RemarkDiff,
    Lemma41,
}

impl CheckKind {
    pub const ALL: [CheckKind; 14] = [
        CheckKind::EnergyIdentity,
        CheckKind::InclusionSumset,
        CheckKind::AsInclusion,
        CheckKind::CsStep,
        CheckKind::Lemma23,
        CheckKind::Lemma24,
        CheckKind::Lemma25,
        CheckKind::TailBound,
        CheckKind::E2E15,
        CheckKind::Theorem11,
        CheckKind::Theorem12,
        CheckKind::RemarkMixed,
        CheckKind::RemarkDiff,
        CheckKind::Lemma41,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            CheckKind::EnergyIdentity => "energy-identity",
            CheckKind::InclusionSumset => "inclusion-sumset",
            CheckKind::AsInclusion => "as-inclusion",
            CheckKind::CsStep => "cs-step",
            CheckKind::Lemma23 => "lemma23",
            CheckKind::Lemma24 => "lemma24",
            CheckKind::Lemma25 => "lemma25",
            CheckKind::TailBound => "tail-bound",
            CheckKind::E2E15 => "e2-e15",
            CheckKind::Theorem11 => "theorem11",
            CheckKind::Theorem12 => "theorem12",
            CheckKind::RemarkMixed => "remark-mixed",
            CheckKind::RemarkDiff => "remark-diff",
            CheckKind::Lemma41 => "lemma41",
        }
    }

    /// `"all"` or a comma-separated list of names.
    pub fn parse_list(s: &str) -> Result<Vec<CheckKind>, SuiteError> {
        if s.trim() == "all" {
            return Ok(CheckKind::ALL.to_vec());
        }
        let mut out: Vec<CheckKind> = s
            .split(',')
            .map(str::trim)
            .filter(|t| !t.is_empty())
            .map(CheckKind::from_str)
            .collect::<Result<_, _>>()?;
        out.sort();
        out.dedup();
        Ok(out)
    }
}

impl FromStr for CheckKind {
    type Err = SuiteError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        CheckKind::ALL
            .into_iter()
            .find(|k| k.as_str() == s)
            .ok_or_else(|| SuiteError::UnknownCheck(s.to_string()))
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct Constants {
    pub theorem: f64,
    pub tail: f64,
    pub lemma23: f64,
    pub e2_e15: f64,
}

impl Default for Constants {
    fn default() -> Self {
        Constants {
            theorem: 1.0,
            tail: 16.0,
            lemma23: 1.0,
            e2_e15: 1.0,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SuiteConfig {
    pub checks: Vec<CheckKind>,
    pub constants: Constants,
    /// Worker threads; `None` uses the global pool.
    pub workers: Option<usize>,
    /// Shifts `s >= 0` from `A - A` sampled per member for the per-shift checks.
    #[serde(rename = "maxShifts")]
    pub max_shifts: usize,
    /// Adds wall-clock timing to the report (which then is no longer
    /// reproducible byte for byte).
    #[serde(rename = "recordTiming")]
    pub record_timing: bool,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig {
            checks: CheckKind::ALL.to_vec(),
            constants: Constants::default(),
            workers: None,
            max_shifts: 32,
            record_timing: false,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Pairing {
    /// `B = A`
    #[serde(rename = "self")]
    SelfPair,
    /// `B` is the next corpus member (cyclically).
    Next,
}

#[derive(Clone, Debug, Serialize)]
pub struct SuiteEntry {
    pub member: usize,
    pub label: String,
    pub pairing: Pairing,
    #[serde(flatten)]
    pub result: CheckResult,
}

impl SuiteEntry {
    pub fn is_expected_failure(&self) -> bool {
        self.result.negative_control && !self.result.passed()
    }

    pub fn is_unexpected_failure(&self) -> bool {
        !self.result.negative_control && !self.result.passed()
    }
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct Summary {
    pub total: usize,
    pub holds: usize,
    pub marginal: usize,
    pub fails: usize,
    #[serde(rename = "expectedFailures")]
    pub expected_failures: usize,
    #[serde(rename = "exitCode")]
    pub exit_code: i32,
}

#[derive(Clone, Debug, Serialize)]
pub struct SuiteReport {
    pub corpus: serde_json::Value,
    pub checks: Vec<SuiteEntry>,
    /// Largest `lhs/rhs` per check name over `<=` checks outside the
    /// negative controls.
    #[serde(rename = "maxRatios")]
    pub max_ratios: BTreeMap<String, f64>,
    /// Smallest `lhs/rhs` per check name over `>=` checks outside the
    /// negative controls.
    #[serde(rename = "minRatios")]
    pub min_ratios: BTreeMap<String, f64>,
    #[serde(rename = "expectedFailures")]
    pub expected_failures: Vec<String>,
    pub summary: Summary,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timing: Option<serde_json::Value>,
}

impl SuiteReport {
    pub fn exit_code(&self) -> i32 {
        self.summary.exit_code
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn unexpected_failures(&self) -> impl Iterator<Item = &SuiteEntry> {
        self.checks.iter().filter(|e| e.is_unexpected_failure())
    }
}

/// Up to `k` nonnegative shifts from `A - A`, evenly spaced in sorted order
/// and always including 0.
pub fn sample_shifts(a: &FiniteSet, k: usize) -> Vec<Rational> {
    let delta = a.self_difference_rep();
    let nonneg: Vec<Rational> = (0..delta.len())
        .map(|i| delta.value(i))
        .filter(|s| !s.is_negative())
        .collect();
    if nonneg.len() <= k {
        return nonneg;
    }
    if k <= 1 {
        return nonneg.into_iter().take(k).collect();
    }
    let last = nonneg.len() - 1;
    let mut idx: Vec<usize> = (0..k).map(|j| j * last / (k - 1)).collect();
    idx.dedup();
    idx.into_iter().map(|i| nonneg[i].clone()).collect()
}

fn f_of_z_source(spec: &FamilySpec) -> Option<(crate::generators::ConvexFunctionSpec, FiniteSet)> {
    match &spec.family {
        Family::FOfZ { f, z } => {
            let z = generate(&FamilySpec::new((**z).clone(), spec.n, spec.seed)).ok()?;
            Some((f.clone(), z))
        }
        _ => None,
    }
}

fn run_member(
    a: &CorpusMember,
    b: &CorpusMember,
    config: &SuiteConfig,
) -> Result<Vec<SuiteEntry>, SuiteError> {
    let k = &config.constants;
    let on = |kind: CheckKind| config.checks.contains(&kind);
    let mut out: Vec<(Pairing, CheckResult)> = Vec::new();
    let shifts =
        if on(CheckKind::InclusionSumset) || on(CheckKind::AsInclusion) || on(CheckKind::CsStep) {
            sample_shifts(&a.set, config.max_shifts)
        } else {
            Vec::new()
        };
    let pairs = [(Pairing::SelfPair, &a.set), (Pairing::Next, &b.set)];

    if on(CheckKind::EnergyIdentity) {
        out.push((Pairing::SelfPair, lemmas::check_energy_identity(&a.set)));
    }
    if on(CheckKind::InclusionSumset) {
        for s in &shifts {
            out.push((Pairing::SelfPair, lemmas::check_inclusion_sumset(&a.set, s)));
        }
    }
    for (pairing, bset) in pairs {
        if on(CheckKind::AsInclusion) {
            for s in &shifts {
                out.push((pairing, lemmas::check_as_inclusion(&a.set, bset, s)));
            }
        }
        if on(CheckKind::CsStep) {
            for s in &shifts {
                out.push((pairing, lemmas::check_cs_step(&a.set, bset, s)?));
            }
        }
        if on(CheckKind::Lemma23) {
            out.push((pairing, lemmas::check_lemma_23(&a.set, bset, k.lemma23)));
        }
        if on(CheckKind::Lemma24) {
            out.push((pairing, lemmas::check_lemma_24(&a.set, bset)?));
        }
        if on(CheckKind::Lemma25) {
            out.push((pairing, lemmas::check_lemma_25(&a.set, bset)?));
        }
        if on(CheckKind::TailBound) {
            out.push((
                pairing,
                lemmas::check_tail_bound(&a.set, bset, k.tail, None),
            ));
        }
    }
    if on(CheckKind::E2E15) {
        out.push((Pairing::SelfPair, lemmas::check_e2_e15(&a.set, k.e2_e15)));
    }
    if on(CheckKind::Theorem11) && a.set.len() >= 2 {
        out.push((
            Pairing::SelfPair,
            lemmas::check_theorem_11(&a.set, k.theorem)?,
        ));
    }
    if on(CheckKind::Theorem12)
        && a.set.len() >= 2
        && a.set.min().is_some_and(Rational::is_positive)
    {
        let control = !a.tags.iter().any(|t| t == "small-product");
        for r in lemmas::check_theorem_12(&a.set, k.theorem)? {
            out.push((Pairing::SelfPair, r.negative_control(control)));
        }
    }
    if a.set.len() >= 2 && b.set.len() >= 2 {
        for sign in [Sign::Plus, Sign::Minus] {
            if on(CheckKind::RemarkMixed) {
                for r in lemmas::check_remark_mixed(&a.set, &b.set, sign, k.theorem)? {
                    out.push((Pairing::Next, r));
                }
            }
            if on(CheckKind::RemarkDiff) {
                for r in lemmas::check_remark_diff(&a.set, &b.set, sign, k.theorem)? {
                    out.push((Pairing::Next, r));
                }
            }
        }
    }
    if on(CheckKind::Lemma41) {
        if let Some((f, z)) = f_of_z_source(&a.spec) {
            for (pairing, bset) in pairs {
                out.push((pairing, check_lemma_41(&f, &z, bset, k.tail)?));
            }
        }
    }
    Ok(out
        .into_iter()
        .map(|(pairing, result)| SuiteEntry {
            member: a.index,
            label: a.label.clone(),
            pairing,
            result,
        })
        .collect())
}

fn assemble(members: &[CorpusMember], config: &SuiteConfig) -> Result<Vec<SuiteEntry>, SuiteError> {
    if members.is_empty() || config.checks.is_empty() {
        return Ok(Vec::new());
    }
    let per_member: Vec<Result<Vec<SuiteEntry>, SuiteError>> = (0..members.len())
        .into_par_iter()
        .map(|i| run_member(&members[i], &members[(i + 1) % members.len()], config))
        .collect();
    let mut entries = Vec::new();
    for r in per_member {
        entries.extend(r?);
    }
    entries.sort_by(|x, y| (x.member, &x.result.name).cmp(&(y.member, &y.result.name)));
    Ok(entries)
}

/// Runs `config.checks` on `members`. Every member is paired with itself and
/// with the next member for the two-set checks.
pub fn run_suite_on(
    manifest: serde_json::Value,
    members: &[CorpusMember],
    config: &SuiteConfig,
) -> Result<SuiteReport, SuiteError> {
    let start = Instant::now();
    let entries = match config.workers {
        Some(w) => rayon::ThreadPoolBuilder::new()
            .num_threads(w.max(1))
            .build()
            .map_err(|e| SuiteError::Pool(e.to_string()))?
            .install(|| assemble(members, config))?,
        None => assemble(members, config)?,
    };

    let mut max_ratios: BTreeMap<String, f64> = BTreeMap::new();
    let mut min_ratios: BTreeMap<String, f64> = BTreeMap::new();
    let mut summary = Summary::default();
    let mut expected = Vec::new();
    let (mut exact_fail, mut constant_fail) = (false, false);
    for e in &entries {
        let r = &e.result;
        summary.total += 1;
        match r.verdict {
            Verdict::Holds => summary.holds += 1,
            Verdict::Marginal => summary.marginal += 1,
            Verdict::Fails => summary.fails += 1,
        }
        if e.is_expected_failure() {
            summary.expected_failures += 1;
            expected.push(format!(
                "{}:{}:{}",
                e.label,
                r.name,
                json!(e.pairing).as_str().unwrap_or("")
            ));
        } else if e.is_unexpected_failure() {
            if r.constant.is_some() {
                constant_fail = true;
            } else {
                exact_fail = true;
            }
        }
        if r.negative_control || !r.ratio.is_finite() {
            continue;
        }
        match r.relation {
            Relation::Le => {
                let v = max_ratios.entry(r.name.clone()).or_insert(r.ratio);
                *v = v.max(r.ratio);
            }
            Relation::Ge => {
                let v = min_ratios.entry(r.name.clone()).or_insert(r.ratio);
                *v = v.min(r.ratio);
            }
            _ => {}
        }
    }
    summary.exit_code = if exact_fail {
        EXIT_EXACT_FAILURE
    } else if constant_fail {
        EXIT_CONSTANT_FAILURE
    } else {
        0
    };
    let timing = config
        .record_timing
        .then(|| json!({ "elapsedMs": start.elapsed().as_millis() as u64 }));
    Ok(SuiteReport {
        corpus: manifest,
        checks: entries,
        max_ratios,
        min_ratios,
        expected_failures: expected,
        summary,
        timing,
    })
}

pub fn run_suite(
    corpus_config: &CorpusConfig,
    config: &SuiteConfig,
) -> Result<SuiteReport, SuiteError> {
    let members = corpus(corpus_config)?;
    run_suite_on(corpus_manifest(corpus_config, &members), &members, config)
}
