mod config;

use std::fmt;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand};
use serde_json::{json, Map, Value};
use sumset_core::generators::corpus_manifest;
use sumset_core::incidence::{
    build_system, check_lemma_41, count_incidences, rich_points, st_profile, verify_popularity,
};
use sumset_core::scan::{self, DEFAULT_N_CAP};
use sumset_core::suite::{Constants, EXIT_CONSTANT_FAILURE, EXIT_EXACT_FAILURE};
use sumset_core::{
    corpus, energy_cross, energy_fractional, energy_k, extremal_search, generate, CheckKind,
    ConvexFunctionSpec, CorpusConfig, CorpusEntry, EnergyReport, Family, FamilySpec, FiniteSet,
    Objective, Rational, Schedule, SuiteConfig,
};

use config::Config;

const EXIT_USAGE: u8 = 64;

/// An error in the invocation itself (bad flag value, bad config, invalid
/// family parameters). Exits with status 64.
#[derive(Debug)]
pub struct Usage(pub String);

impl fmt::Display for Usage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for Usage {}

fn usage<E: fmt::Display>(e: E) -> anyhow::Error {
    Usage(e.to_string()).into()
}

#[derive(Parser)]
#[command(
    name = "sumset",
    version,
    about = "Sumsets, additive energies and energy inequalities of finite sets"
)]
struct Cli {
    /// JSON file whose keys mirror the long flags; flags take precedence.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Seed for every random choice.
    #[arg(long, global = true)]
    seed: Option<u64>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a set from a family, or the corpus manifest.
    Gen(GenArgs),
    /// Energies of a set.
    Energy(EnergyArgs),
    /// Run the check suite and print the report.
    Verify(VerifyArgs),
    /// Incidences of the translated-graph system over (Z+Z) x (f(Z)-B).
    Incidence(IncidenceArgs),
    /// Growth scan over a size grid, as CSV.
    Scan(ScanArgs),
    /// Least-squares exponent fit on a scan CSV.
    Fit(FitArgs),
    /// Annealing search for convex sets with small sumset or difference set.
    Search(SearchArgs),
}

#[derive(Args, Default)]
struct FamilyArgs {
    /// squares, cubes, quadratic, random-convex-gaps, ap, gp, ggp, f-of-z, random, sidon
    #[arg(long)]
    family: Option<String>,
    /// Full family as JSON, e.g. '{"family":"ap","start":"1","step":"1/2"}'.
    #[arg(long)]
    family_json: Option<String>,
    #[arg(long)]
    start: Option<String>,
    #[arg(long)]
    step: Option<String>,
    #[arg(long)]
    ratio: Option<String>,
    /// Comma-separated ratios for ggp.
    #[arg(long)]
    ratios: Option<String>,
    /// Comma-separated box dimensions for ggp.
    #[arg(long)]
    dims: Option<String>,
    /// Quadratic coefficients.
    #[arg(long = "qa")]
    qa: Option<String>,
    #[arg(long = "qb")]
    qb: Option<String>,
    #[arg(long = "qc")]
    qc: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    lo: Option<i64>,
    #[arg(long, allow_hyphen_values = true)]
    hi: Option<i64>,
    /// Convex function for f-of-z: square or cube.
    #[arg(long)]
    f: Option<String>,
    /// Family of Z for f-of-z.
    #[arg(long)]
    z_family: Option<String>,
}

#[derive(Args)]
struct GenArgs {
    #[command(flatten)]
    family: FamilyArgs,
    #[arg(long)]
    n: Option<usize>,
    /// Write the default corpus manifest instead of one set.
    #[arg(long)]
    corpus: bool,
    /// Integer shorthand `{"elements":[1,4,9]}` when possible.
    #[arg(long)]
    shorthand: bool,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct EnergyArgs {
    /// Set file (`{"elements":[...]}` or a bare JSON array).
    #[arg(long)]
    set: Option<PathBuf>,
    /// Inline elements, e.g. `1,2,4` or `1/2,3`.
    #[arg(long)]
    elements: Option<String>,
    /// Second set for the cross energy E(A,B).
    #[arg(long = "with")]
    with: Option<PathBuf>,
    /// Moment: a positive integer or 1.5.
    #[arg(long)]
    k: Option<String>,
    /// Print the full energy report as JSON.
    #[arg(long)]
    report: bool,
}

#[derive(Args)]
struct VerifyArgs {
    /// `all` or a comma-separated list of checks.
    #[arg(long)]
    suite: Option<String>,
    #[command(flatten)]
    family: FamilyArgs,
    /// Sizes for --family (comma-separated).
    #[arg(long, value_delimiter = ',')]
    n: Vec<usize>,
    #[arg(long)]
    workers: Option<usize>,
    #[arg(long)]
    max_shifts: Option<usize>,
    #[arg(long)]
    c_theorem: Option<f64>,
    #[arg(long)]
    c_tail: Option<f64>,
    #[arg(long)]
    c_lemma23: Option<f64>,
    #[arg(long)]
    c_e2e15: Option<f64>,
    /// Include wall-clock timing in the report.
    #[arg(long)]
    timing: bool,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct IncidenceArgs {
    /// square or cube
    #[arg(long)]
    f: Option<String>,
    #[arg(long = "Z")]
    z: Option<PathBuf>,
    #[arg(long = "B")]
    b: Option<PathBuf>,
    /// Report the rich points for this τ (default: dyadic counts only).
    #[arg(long)]
    tau: Option<u32>,
    /// Run the popularity check at this x (needs --tau).
    #[arg(long, allow_hyphen_values = true)]
    x: Option<String>,
    /// Constant for the Szemerédi–Trotter profile.
    #[arg(long)]
    st_constant: Option<f64>,
    /// Constant for the level-set bound.
    #[arg(long)]
    constant: Option<f64>,
    #[arg(long)]
    report: Option<PathBuf>,
}

#[derive(Args)]
struct ScanArgs {
    #[command(flatten)]
    family: FamilyArgs,
    #[arg(long, value_delimiter = ',')]
    grid: Vec<usize>,
    #[arg(long)]
    cap: Option<usize>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct FitArgs {
    /// Scan CSV (`-` for stdin).
    #[arg(long)]
    csv: Option<PathBuf>,
    #[arg(long)]
    x: Option<String>,
    #[arg(long)]
    y: Option<String>,
    /// Only rows of this family name.
    #[arg(long)]
    family: Option<String>,
}

#[derive(Args)]
struct SearchArgs {
    #[arg(long)]
    n: Option<usize>,
    /// plus-ratio or minus-ratio
    #[arg(long)]
    objective: Option<String>,
    #[arg(long)]
    iters: Option<u64>,
    /// Initial temperature; 0 is a hill climb, absent means automatic.
    #[arg(long)]
    t0: Option<f64>,
    #[arg(long)]
    cooling: Option<f64>,
    #[arg(long)]
    out: Option<PathBuf>,
}

fn emit(out: Option<&Path>, text: &str) -> Result<()> {
    match out {
        Some(p) => std::fs::write(p, text).with_context(|| format!("writing {}", p.display())),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(text.as_bytes())?;
            if !text.ends_with('\n') {
                stdout.write_all(b"\n")?;
            }
            Ok(())
        }
    }
}

fn read_set(path: &Path) -> Result<FiniteSet> {
    let text =
        std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    parse_set_json(&text).map_err(|e| usage(format!("{}: {e}", path.display())))
}

fn parse_set_json(text: &str) -> Result<FiniteSet> {
    let trimmed = text.trim_start();
    let doc = if trimmed.starts_with('[') {
        format!("{{\"elements\":{trimmed}}}")
    } else {
        trimmed.to_string()
    };
    FiniteSet::from_json(&doc).map_err(usage)
}

fn convex_function(name: &str) -> Result<ConvexFunctionSpec> {
    match name {
        "square" | "x^2" => Ok(ConvexFunctionSpec::Power { p: 2 }),
        "cube" | "x^3" => Ok(ConvexFunctionSpec::Power { p: 3 }),
        other => Err(usage(format!(
            "unknown function {other:?} (square or cube)"
        ))),
    }
}

fn csv_list(s: &str) -> Vec<Value> {
    s.split(',')
        .map(|t| Value::String(t.trim().to_string()))
        .collect()
}

/// Builds a family from flags, falling back to config keys of the same name.
fn family_from(args: &FamilyArgs, cfg: &Config, n_hint: usize) -> Result<Option<Family>> {
    if let Some(text) = &args.family_json {
        return serde_json::from_str(text)
            .map(Some)
            .map_err(|e| usage(format!("--family-json: {e}")));
    }
    if args.family.is_none() {
        if let Some(v @ Value::Object(_)) = cfg.raw("family") {
            return serde_json::from_value(v.clone())
                .map(Some)
                .map_err(|e| usage(format!("config family: {e}")));
        }
    }
    let Some(name) = cfg.pick_opt(args.family.clone(), "family")? else {
        return Ok(None);
    };
    let text = |flag: &Option<String>, key: &str, default: &str| -> Result<Value> {
        Ok(Value::String(cfg.pick(
            flag.clone(),
            key,
            default.to_string(),
        )?))
    };
    let simple = |name: &str| -> Result<Value> {
        let mut obj = Map::new();
        obj.insert("family".into(), Value::String(name.to_string()));
        match name {
            "ap" => {
                obj.insert("start".into(), text(&args.start, "start", "1")?);
                obj.insert("step".into(), text(&args.step, "step", "1")?);
            }
            "gp" => {
                obj.insert("ratio".into(), text(&args.ratio, "ratio", "2")?);
            }
            "quadratic" => {
                obj.insert("a".into(), text(&args.qa, "qa", "1")?);
                obj.insert("b".into(), text(&args.qb, "qb", "0")?);
                obj.insert("c".into(), text(&args.qc, "qc", "0")?);
            }
            "ggp" => {
                let ratios: String = cfg.pick(args.ratios.clone(), "ratios", "2,3".to_string())?;
                let dims: Option<String> = cfg.pick_opt(args.dims.clone(), "dims")?;
                let dims = dims.ok_or_else(|| usage("ggp needs --dims"))?;
                let dims: Vec<Value> = dims
                    .split(',')
                    .map(|d| {
                        d.trim()
                            .parse::<u64>()
                            .map(Value::from)
                            .map_err(|_| usage(format!("bad dim {d:?}")))
                    })
                    .collect::<Result<_>>()?;
                obj.insert("ratios".into(), Value::Array(csv_list(&ratios)));
                obj.insert("dims".into(), Value::Array(dims));
            }
            "random" => {
                obj.insert("lo".into(), json!(cfg.pick(args.lo, "lo", 1)?));
                obj.insert(
                    "hi".into(),
                    json!(cfg.pick(args.hi, "hi", (4 * n_hint).max(16) as i64)?),
                );
            }
            _ => {}
        }
        Ok(Value::Object(obj))
    };
    let value = if name == "f-of-z" {
        let f: String = cfg.pick(args.f.clone(), "f", "square".to_string())?;
        let z: String = cfg.pick(args.z_family.clone(), "z-family", "ap".to_string())?;
        json!({ "family": "f-of-z", "f": convex_function(&f)?, "z": simple(&z)? })
    } else {
        simple(&name)?
    };
    serde_json::from_value(value)
        .map(Some)
        .map_err(|e| usage(format!("family {name:?}: {e}")))
}

fn cmd_gen(args: GenArgs, cfg: &Config, seed: u64) -> Result<u8> {
    let out: Option<PathBuf> = cfg.pick_opt(args.out, "out")?;
    if args.corpus || cfg.get::<bool>("corpus")?.unwrap_or(false) {
        let config = CorpusConfig {
            seed,
            ..CorpusConfig::default()
        };
        let members = corpus(&config).map_err(usage)?;
        emit(
            out.as_deref(),
            &serde_json::to_string_pretty(&corpus_manifest(&config, &members))?,
        )?;
        return Ok(0);
    }
    let n: usize = cfg
        .pick_opt(args.n, "n")?
        .ok_or_else(|| usage("gen needs --n"))?;
    let family = family_from(&args.family, cfg, n)?.ok_or_else(|| usage("gen needs --family"))?;
    let set = generate(&FamilySpec::new(family, n, seed)).map_err(usage)?;
    let text = if args.shorthand {
        set.to_json_shorthand()
    } else {
        set.to_json()
    };
    emit(out.as_deref(), &text)?;
    Ok(0)
}

fn cmd_energy(args: EnergyArgs, cfg: &Config) -> Result<u8> {
    let a = match (
        cfg.pick_opt(args.set, "set")?,
        cfg.pick_opt(args.elements, "elements")?,
    ) {
        (Some(path), _) => read_set(&path)?,
        (None, Some(list)) => {
            let parts: Vec<&str> = list.split(',').map(str::trim).collect();
            FiniteSet::parse(&parts).map_err(usage)?
        }
        (None, None) => return Err(usage("energy needs --set or --elements")),
    };
    if args.report {
        emit(
            None,
            &serde_json::to_string_pretty(&EnergyReport::compute(&a))?,
        )?;
        return Ok(0);
    }
    if let Some(path) = cfg.pick_opt::<PathBuf>(args.with, "with")? {
        let b = read_set(&path)?;
        emit(None, &energy_cross(&a, &b)?.to_string())?;
        return Ok(0);
    }
    let k: String = cfg.pick(args.k, "k", "2".to_string())?;
    let line = if k == "1.5" || k == "3/2" {
        let e = energy_fractional(&a);
        json!({ "value": e.value, "bound": e.bound }).to_string()
    } else {
        let k: u32 = k
            .parse()
            .ok()
            .filter(|&k| k >= 1)
            .ok_or_else(|| usage(format!("bad --k {k:?}")))?;
        energy_k(&a, k).to_string()
    };
    emit(None, &line)?;
    Ok(0)
}

fn cmd_verify(args: VerifyArgs, cfg: &Config, seed: u64) -> Result<u8> {
    let suite: String = cfg.pick(args.suite, "suite", "all".to_string())?;
    let checks = CheckKind::parse_list(&suite).map_err(usage)?;
    let defaults = Constants::default();
    let constants = Constants {
        theorem: cfg.pick(args.c_theorem, "c-theorem", defaults.theorem)?,
        tail: cfg.pick(args.c_tail, "c-tail", defaults.tail)?,
        lemma23: cfg.pick(args.c_lemma23, "c-lemma23", defaults.lemma23)?,
        e2_e15: cfg.pick(args.c_e2e15, "c-e2e15", defaults.e2_e15)?,
    };
    let suite_config = SuiteConfig {
        checks,
        constants,
        workers: cfg.pick_opt(args.workers, "workers")?,
        max_shifts: cfg.pick(
            args.max_shifts,
            "max-shifts",
            SuiteConfig::default().max_shifts,
        )?,
        record_timing: args.timing || cfg.get::<bool>("timing")?.unwrap_or(false),
    };
    let sizes: Vec<usize> = if args.n.is_empty() {
        cfg.get("n")?.unwrap_or_default()
    } else {
        args.n
    };
    let n_hint = sizes.iter().copied().max().unwrap_or(16);
    let corpus_config = match family_from(&args.family, cfg, n_hint)? {
        Some(family) => {
            if sizes.is_empty() {
                return Err(usage("--family needs --n"));
            }
            CorpusConfig {
                seed,
                n_grid: None,
                entries: vec![CorpusEntry::new(family, &sizes)],
            }
        }
        None => match cfg.get::<CorpusConfig>("corpus")? {
            Some(c) => c,
            None => CorpusConfig {
                seed,
                ..CorpusConfig::default()
            },
        },
    };
    let report = sumset_core::run_suite(&corpus_config, &suite_config).map_err(|e| match e {
        sumset_core::SuiteError::Corpus(_) | sumset_core::SuiteError::UnknownCheck(_) => usage(e),
        other => other.into(),
    })?;
    let out: Option<PathBuf> = cfg.pick_opt(args.out, "out")?;
    emit(out.as_deref(), &report.to_json())?;
    for e in report.unexpected_failures() {
        eprintln!("failed: {} {} ({:?})", e.label, e.result.name, e.pairing);
    }
    Ok(report.exit_code() as u8)
}

fn cmd_incidence(args: IncidenceArgs, cfg: &Config) -> Result<u8> {
    let f = convex_function(&cfg.pick(args.f, "f", "square".to_string())?)?;
    let z_path: PathBuf = cfg
        .pick_opt(args.z, "Z")?
        .ok_or_else(|| usage("incidence needs --Z"))?;
    let b_path: PathBuf = cfg
        .pick_opt(args.b, "B")?
        .ok_or_else(|| usage("incidence needs --B"))?;
    let (z, b) = (read_set(&z_path)?, read_set(&b_path)?);
    let sys = build_system(&f, &z, &b).map_err(usage)?;
    let st_c: f64 = cfg.pick(args.st_constant, "st-constant", 3.0)?;
    let c: f64 = cfg.pick(args.constant, "constant", 16.0)?;
    let tau: Option<u32> = cfg.pick_opt(args.tau, "tau")?;

    let mut levels = Vec::new();
    let mut t = 1u32;
    while t as usize <= sys.curve_count() {
        let r = rich_points(&sys, t, 1.0)?;
        levels.push(json!({ "tau": t, "count": r.count, "bound": r.bound, "ratio": r.ratio }));
        t *= 2;
    }
    let st = st_profile(&sys, st_c);
    let lemma = check_lemma_41(&f, &z, &b, c)?;
    let mut code = 0u8;
    if !st.passed() || !lemma.passed() {
        code = EXIT_CONSTANT_FAILURE as u8;
    }
    let mut report = json!({
        "curves": sys.curve_count(),
        "points": sys.point_count(),
        "incidences": count_incidences(&sys),
        "M": sys.m,
        "richLevels": levels,
        "stProfile": st,
        "lemma41": lemma,
    });
    if let Some(tau) = tau {
        report["richPoints"] = serde_json::to_value(rich_points(&sys, tau, 1.0).map_err(usage)?)?;
    }
    if let Some(x) = cfg.pick_opt::<String>(args.x, "x")? {
        let x: Rational = x.parse().map_err(usage)?;
        let tau = tau.ok_or_else(|| usage("--x needs --tau"))?;
        let pop = verify_popularity(&sys, &x, tau as usize).map_err(usage)?;
        if !pop.passed() {
            code = EXIT_EXACT_FAILURE as u8;
        }
        report["popularity"] = serde_json::to_value(pop)?;
    }
    let out: Option<PathBuf> = cfg.pick_opt(args.report, "report")?;
    emit(out.as_deref(), &serde_json::to_string_pretty(&report)?)?;
    Ok(code)
}

fn cmd_scan(args: ScanArgs, cfg: &Config, seed: u64) -> Result<u8> {
    let grid: Vec<usize> = if args.grid.is_empty() {
        cfg.get("grid")?.unwrap_or_default()
    } else {
        args.grid
    };
    if grid.is_empty() {
        return Err(usage("scan needs --grid"));
    }
    let n_hint = grid.iter().copied().max().unwrap_or(16);
    let family =
        family_from(&args.family, cfg, n_hint)?.ok_or_else(|| usage("scan needs --family"))?;
    let cap: usize = cfg.pick(args.cap, "cap", DEFAULT_N_CAP)?;
    let rows = scan::scan_growth(&family, &grid, seed, cap).map_err(usage)?;
    let mut buf = Vec::new();
    scan::write_csv(&rows, &mut buf)?;
    let out: Option<PathBuf> = cfg.pick_opt(args.out, "out")?;
    emit(out.as_deref(), &String::from_utf8(buf)?)?;
    Ok(0)
}

fn cmd_fit(args: FitArgs, cfg: &Config) -> Result<u8> {
    let path: PathBuf = cfg
        .pick_opt(args.csv, "csv")?
        .ok_or_else(|| usage("fit needs --csv"))?;
    let rows = if path.as_os_str() == "-" {
        scan::read_csv(std::io::stdin().lock())
    } else {
        scan::read_csv(
            std::fs::File::open(&path).with_context(|| format!("reading {}", path.display()))?,
        )
    }
    .map_err(usage)?;
    let family: Option<String> = cfg.pick_opt(args.family, "family")?;
    let rows: Vec<_> = rows
        .into_iter()
        .filter(|r| family.as_ref().is_none_or(|f| &r.family == f))
        .collect();
    let x: String = cfg.pick(args.x, "x", "n".to_string())?;
    let y: String = cfg.pick(args.y, "y", "sumset".to_string())?;
    let fit = scan::fit_exponent(&rows, &x, &y).map_err(usage)?;
    emit(None, &serde_json::to_string_pretty(&fit)?)?;
    Ok(0)
}

fn cmd_search(args: SearchArgs, cfg: &Config, seed: u64) -> Result<u8> {
    let n: usize = cfg.pick(args.n, "n", 64)?;
    let objective: Objective = cfg
        .pick(args.objective, "objective", "plus-ratio".to_string())?
        .parse()
        .map_err(usage)?;
    let iters: u64 = cfg.pick(args.iters, "iters", 10_000)?;
    let schedule = Schedule {
        t0: cfg.pick_opt(args.t0, "t0")?,
        cooling: cfg.pick(
            args.cooling,
            "cooling",
            sumset_core::search::DEFAULT_COOLING,
        )?,
    };
    let state = extremal_search(n, objective, iters, seed, schedule).map_err(usage)?;
    let out: Option<PathBuf> = cfg.pick_opt(args.out, "out")?;
    emit(out.as_deref(), &serde_json::to_string_pretty(&state)?)?;
    Ok(0)
}

fn run(cli: Cli) -> Result<u8> {
    let name = match &cli.command {
        Command::Gen(_) => "gen",
        Command::Energy(_) => "energy",
        Command::Verify(_) => "verify",
        Command::Incidence(_) => "incidence",
        Command::Scan(_) => "scan",
        Command::Fit(_) => "fit",
        Command::Search(_) => "search",
    };
    let cfg = Config::load(cli.config.as_deref(), name)?;
    let seed = cfg.pick(cli.seed, "seed", 0u64)?;
    match cli.command {
        Command::Gen(a) => cmd_gen(a, &cfg, seed),
        Command::Energy(a) => cmd_energy(a, &cfg),
        Command::Verify(a) => cmd_verify(a, &cfg, seed),
        Command::Incidence(a) => cmd_incidence(a, &cfg),
        Command::Scan(a) => cmd_scan(a, &cfg, seed),
        Command::Fit(a) => cmd_fit(a, &cfg),
        Command::Search(a) => cmd_search(a, &cfg, seed),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            if e.is::<Usage>() {
                ExitCode::from(EXIT_USAGE)
            } else {
                ExitCode::FAILURE
            }
        }
    }
}
