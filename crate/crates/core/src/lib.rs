//! Exact engine for sumsets, difference sets and additive energies of finite
//! rational sets, with executable checks of the energy inequalities behind
//! sumset lower bounds for convex sets and sets of small multiplicative
//! doubling.
//!
//! Module map:
//!
//! * [`scalar`], [`set`]: exact rationals and canonical finite sets.
//! * [`rep`], [`energy`]: representation functions and energies.
//! * [`check`], [`lemmas`], [`suite`]: inequality checks and the suite runner.
//! * [`generators`]: seeded set families and the standard corpus.
//! * [`incidence`]: translated convex curves, rich points and popularity.
//! * [`scan`], [`search`]: growth scans, exponent fits, extremal search.

pub mod check;
pub mod energy;
pub mod generators;
pub mod incidence;
pub mod interval;
pub mod lemmas;
pub mod rep;
pub mod scalar;
pub mod scan;
pub mod search;
pub mod set;
pub mod suite;

pub use check::{CheckResult, Quantity, Relation, Verdict};
pub use energy::{
    additive_energy, energy_cross, energy_fractional, energy_k, quad_intersection,
    restricted_energy_sum, EnergyError, EnergyReport,
};
pub use generators::{
    corpus, generate, generate_f_of_z, ConvexFunctionSpec, CorpusConfig, CorpusEntry, CorpusMember,
    Family, FamilySpec, GenError,
};
pub use incidence::{
    build_system, check_lemma_41, count_incidences, rich_points, st_profile, verify_popularity,
    IncidenceError, PseudoLineSystem, RichPointReport,
};
pub use interval::{Estimate, Interval};
pub use lemmas::{CheckError, Sign};
pub use rep::{dyadic_levels, level_set, rep_function, Backend, RepFunction, RepKind};
pub use scalar::Rational;
pub use scan::{
    fit_exponent, fit_power_law, read_csv, scan_growth, write_csv, Fit, ScanError, ScanRow,
};
pub use search::{extremal_search, Objective, Schedule, SearchError, SearchState};
pub use set::{make_set, ConvexWitness, FiniteSet, SetError};
pub use suite::{run_suite, run_suite_on, CheckKind, SuiteConfig, SuiteError, SuiteReport};
