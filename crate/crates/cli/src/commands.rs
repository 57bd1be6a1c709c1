use crate::census::{read_census, read_quotas, resolve_lower_bound};
use crate::error::{CliError, Result};
use crate::report::{decimal, exact, AllocationRow, Document, Format, PLACES};
use apportion_core::divisor::paradox::{
    detect_alabama, detect_new_state_paradox, detect_population_paradox, new_state_pairs, population_pairs,
    random_corpus, ParadoxReport,
};
use apportion_core::lowerbound::{
    classify, equal_representation_quota, iterate_lower_bound, lower_bound_apportion, lower_bound_distribution,
    violation_probability_bound, IterationTrace,
};
use apportion_core::montecarlo::{fairness_test, simulate, SimMethod};
use apportion_core::problem::Audit;
use apportion_core::rational::{self, Rational};
use apportion_core::rng::{SeededSource, UNIFORM_BITS};
use apportion_core::stochastic::{exact_distribution_of, stochastic_apportion, DEFAULT_ENUMERATION_LIMIT};
use apportion_core::{compute_quota, divisor_with_lower_bound, Allocation, Error as CoreError, LowerBound, Method, Problem, QuotaVector};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::json;
use std::io::Write;
use std::path::{Path, PathBuf};

#[derive(Debug, Parser)]
#[command(name = "apportion", version, about = "Exact and randomized apportionment of seats")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Allocate seats and print the allocation with its audit record.
    Apportion(ApportionArgs),
    /// Exact law of the randomized scheme.
    Distribution(DistributionArgs),
    /// Seeded Monte Carlo fairness check.
    Simulate(SimulateArgs),
    /// Search a seeded random corpus for paradoxes.
    ParadoxScan(ParadoxArgs),
    /// Lower-bound analysis of a quota vector.
    BoundCheck(BoundArgs),
    /// Offender table over a directory of census files.
    Table1(Table1Args),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum MethodArg {
    Stochastic,
    Hamilton,
    Adams,
    Dean,
    Hill,
    Webster,
    Jefferson,
}

impl MethodArg {
    fn deterministic(self) -> Option<Method> {
        match self {
            MethodArg::Stochastic => None,
            other => Method::from_name(other.to_possible_value().expect("named").get_name()),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum SimMethodArg {
    Stochastic,
    ConditionalSampling,
    Hamilton,
    Adams,
    Dean,
    Hill,
    Webster,
    Jefferson,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum DeterministicArg {
    Hamilton,
    Adams,
    Dean,
    Hill,
    Webster,
    Jefferson,
}

impl DeterministicArg {
    fn method(self) -> Method {
        Method::from_name(self.to_possible_value().expect("named").get_name()).expect("known method")
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum ParadoxArg {
    Alabama,
    Population,
    NewState,
}

#[derive(Debug, Args)]
pub struct ApportionArgs {
    #[arg(long, value_name = "FILE")]
    pub data: PathBuf,
    #[arg(long, value_name = "R")]
    pub seats: u64,
    #[arg(long, value_enum)]
    pub method: MethodArg,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// A uniform bound K or a `state,bound` file.
    #[arg(long, value_name = "K|FILE")]
    pub lower_bound: Option<String>,
    #[arg(long, value_enum, default_value_t = Format::Table)]
    pub format: Format,
}

#[derive(Debug, Args)]
pub struct DistributionArgs {
    #[arg(long, value_name = "FILE")]
    pub data: PathBuf,
    #[arg(long, value_name = "R")]
    pub seats: u64,
    #[arg(long, value_name = "K|FILE")]
    pub lower_bound: Option<String>,
    /// Most states with fractional quota to enumerate over.
    #[arg(long, default_value_t = DEFAULT_ENUMERATION_LIMIT)]
    pub limit: usize,
    #[arg(long, value_enum, default_value_t = Format::Table)]
    pub format: Format,
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    #[arg(long, value_name = "FILE")]
    pub data: PathBuf,
    #[arg(long, value_name = "R")]
    pub seats: u64,
    #[arg(long, value_enum)]
    pub method: SimMethodArg,
    #[arg(long, value_name = "N")]
    pub n: u64,
    #[arg(long, value_name = "S")]
    pub seed: u64,
    #[arg(long, value_name = "K|FILE")]
    pub lower_bound: Option<String>,
    #[arg(long, default_value_t = apportion_core::montecarlo::DEFAULT_Z)]
    pub z: f64,
    #[arg(long, value_enum, default_value_t = Format::Table)]
    pub format: Format,
}

#[derive(Debug, Args)]
pub struct ParadoxArgs {
    #[arg(long, value_enum)]
    pub kind: ParadoxArg,
    #[arg(long, value_enum)]
    pub method: DeterministicArg,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 200)]
    pub count: usize,
    #[arg(long, default_value_t = 5)]
    pub max_states: usize,
    #[arg(long, default_value_t = 100)]
    pub max_population: u64,
    #[arg(long, default_value_t = 30)]
    pub max_seats: u64,
    #[arg(long, value_enum, default_value_t = Format::Table)]
    pub format: Format,
}

#[derive(Debug, Args)]
pub struct BoundArgs {
    /// `state,quota` rows; quotas as decimals or `num/den`.
    #[arg(long, value_name = "FILE")]
    pub quotas: PathBuf,
    #[arg(long, value_name = "K|FILE")]
    pub lower_bound: String,
    /// Decimal places in the rendered values.
    #[arg(long, default_value_t = PLACES)]
    pub places: usize,
    #[arg(long, value_enum, default_value_t = Format::Table)]
    pub format: Format,
}

#[derive(Debug, Args)]
pub struct Table1Args {
    /// Directory of `state,population` files, one per census.
    #[arg(long, value_name = "CENSUSDIR")]
    pub data: PathBuf,
    #[arg(long, default_value_t = 435)]
    pub seats: u64,
    #[arg(long, value_name = "K|FILE", default_value = "1")]
    pub lower_bound: String,
    #[arg(long, default_value_t = 3)]
    pub places: usize,
    #[arg(long, value_enum, default_value_t = Format::Table)]
    pub format: Format,
}

/// A rendered report and its exit status.
pub struct Outcome {
    pub doc: Document,
    pub format: Format,
    pub code: i32,
}

impl Outcome {
    fn ok(doc: Document, format: Format) -> Self {
        Outcome { doc, format, code: 0 }
    }
}

/// Parses `args` (program name first), runs the command and returns the
/// exit status.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            let _ = if code == 0 { out.write_all(text.as_bytes()) } else { err.write_all(text.as_bytes()) };
            return code;
        }
    };
    match execute(&cli.command) {
        Ok(outcome) => {
            let _ = out.write_all(outcome.doc.render(outcome.format).as_bytes());
            outcome.code
        }
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            for line in diagnostics(&e) {
                let _ = writeln!(err, "  {line}");
            }
            e.exit_code()
        }
    }
}

fn diagnostics(e: &CliError) -> Vec<String> {
    match e {
        CliError::Core(CoreError::InfeasibleBound(v)) => v.iter().map(|d| d.to_string()).collect(),
        CliError::Core(CoreError::InfeasibleTrace(t)) => t.diagnostics.iter().map(|d| d.to_string()).collect(),
        _ => Vec::new(),
    }
}

pub fn execute(command: &Command) -> Result<Outcome> {
    match command {
        Command::Apportion(a) => apportion(a),
        Command::Distribution(a) => distribution(a),
        Command::Simulate(a) => simulate_cmd(a),
        Command::ParadoxScan(a) => paradox_scan(a),
        Command::BoundCheck(a) => bound_check(a),
        Command::Table1(a) => table1(a),
    }
}

fn load(data: &Path, seats: u64, bound: Option<&str>) -> Result<(Problem, Option<LowerBound>)> {
    let census = read_census(data)?;
    let problem = census.problem(seats)?;
    let bound = bound.map(|b| resolve_lower_bound(b, problem.labels())).transpose()?;
    Ok((problem, bound))
}

fn allocation_rows(doc: &mut Document, problem: &Problem, quota: &QuotaVector, seats: &[u64]) {
    for i in 0..problem.num_states() {
        let row = AllocationRow {
            state: problem.labels()[i].clone(),
            population: problem.populations()[i],
            quota: quota.quotas()[i].clone(),
            quota_decimal: decimal(&quota.quotas()[i], PLACES),
            seats: seats[i],
        };
        doc.row(row.cells());
        doc.record("allocation", &row);
    }
}

fn join_labels(problem: &Problem, states: &[usize]) -> String {
    let names: Vec<&str> = states.iter().map(|&i| problem.labels()[i].as_str()).collect();
    if names.is_empty() {
        "-".into()
    } else {
        names.join(" ")
    }
}

fn describe_trace(doc: &mut Document, problem: &Problem, trace: &IterationTrace) {
    for (k, round) in trace.rounds.iter().enumerate() {
        doc.meta(
            &format!("round {} gamma", k + 1),
            format!("{} ({})", exact(&round.gamma), decimal(&round.gamma, PLACES)),
        );
        doc.meta(&format!("round {} fixed", k + 1), join_labels(problem, &round.fixed));
    }
    doc.meta("feasible", trace.feasible);
}

fn apportion(a: &ApportionArgs) -> Result<Outcome> {
    let (problem, bound) = load(&a.data, a.seats, a.lower_bound.as_deref())?;
    let quota = compute_quota(&problem);
    let alloc: Allocation = match (a.method.deterministic(), &bound) {
        (None, None) => stochastic_apportion(&problem, &mut SeededSource::new(a.seed)),
        (None, Some(l)) => lower_bound_apportion(&problem, l, &mut SeededSource::new(a.seed))?,
        (Some(m), None) => m.apportion(&problem)?,
        (Some(Method::Divisor(rule)), Some(l)) => divisor_with_lower_bound(&problem, rule, l)?,
        (Some(Method::Hamilton), Some(_)) => {
            return Err(CliError::Usage("--lower-bound is not supported with hamilton".into()))
        }
    };
    let mut doc = Document::new(&AllocationRow::COLUMNS);
    doc.meta("method", &alloc.method);
    doc.meta("seats", problem.seats());
    if let Some(seed) = alloc.seed {
        doc.meta("seed", seed);
    }
    if let Some(l) = &bound {
        doc.meta("lower bound", join_numbers(&l.0));
    }
    match &alloc.audit {
        Some(Audit::Systematic(draw)) => describe_draw(&mut doc, &problem, draw),
        Some(Audit::LowerBound { draw, trace }) => {
            describe_trace(&mut doc, &problem, trace);
            describe_draw(&mut doc, &problem, draw);
        }
        Some(Audit::Divisor(d)) => {
            if let Some(l) = &d.lambda {
                let key = if d.squared { "lambda^2" } else { "lambda" };
                doc.meta(key, format!("{} ({})", exact(l), decimal(l, PLACES)));
            }
            doc.meta("tied seats", d.tied_seats);
        }
        None => {}
    }
    allocation_rows(&mut doc, &problem, &quota, &alloc.seats);
    doc.record(
        "audit",
        &json!({ "method": alloc.method, "seed": alloc.seed, "audit": alloc.audit }),
    );
    Ok(Outcome::ok(doc, a.format))
}

fn describe_draw(doc: &mut Document, problem: &Problem, draw: &apportion_core::stochastic::SystematicAudit) {
    doc.meta("permutation", join_labels(problem, &draw.permutation));
    doc.meta(
        "u",
        format!("{}/2^{UNIFORM_BITS} ({})", draw.u_numerator, decimal(&draw.u(), PLACES)),
    );
}

fn join_numbers(xs: &[u64]) -> String {
    xs.iter().map(u64::to_string).collect::<Vec<_>>().join(" ")
}

#[derive(Serialize)]
struct OutcomeRecord<'a> {
    seats: &'a [u64],
    #[serde(with = "rational::serde_rational")]
    probability: Rational,
    probability_decimal: String,
}

#[derive(Serialize)]
struct MarginalRecord<'a> {
    state: &'a str,
    #[serde(with = "rational::serde_rational")]
    quota: Rational,
    #[serde(with = "rational::serde_rational")]
    expectation: Rational,
    expectation_decimal: String,
}

fn distribution(a: &DistributionArgs) -> Result<Outcome> {
    let (problem, bound) = load(&a.data, a.seats, a.lower_bound.as_deref())?;
    let quota = compute_quota(&problem);
    let law = match &bound {
        Some(l) => lower_bound_distribution(&quota, l, a.limit)?,
        None => exact_distribution_of(&quota, a.limit)?,
    };
    let mut columns: Vec<&str> = problem.labels().iter().map(String::as_str).collect();
    columns.extend(["probability", "probability_decimal"]);
    let mut doc = Document::new(&columns);
    doc.meta("seats", problem.seats());
    doc.meta("outcomes", law.support().len());
    for (seats, p) in law.support() {
        let mut cells: Vec<String> = seats.iter().map(u64::to_string).collect();
        cells.push(exact(p));
        cells.push(decimal(p, PLACES));
        doc.row(cells);
        doc.record(
            "outcome",
            &OutcomeRecord {
                seats,
                probability: p.clone(),
                probability_decimal: decimal(p, PLACES),
            },
        );
    }
    for (i, e) in law.expectations().iter().enumerate() {
        let label = &problem.labels()[i];
        doc.meta(&format!("E[{label}]"), format!("{} ({})", exact(e), decimal(e, PLACES)));
        doc.record(
            "marginal",
            &MarginalRecord {
                state: label,
                quota: quota.quotas()[i].clone(),
                expectation: e.clone(),
                expectation_decimal: decimal(e, PLACES),
            },
        );
    }
    Ok(Outcome::ok(doc, a.format))
}

#[derive(Serialize)]
struct EstimateRecord<'a> {
    state: &'a str,
    #[serde(with = "rational::serde_rational")]
    quota: Rational,
    mean: f64,
    std_error: f64,
    pass: bool,
}

fn simulate_cmd(a: &SimulateArgs) -> Result<Outcome> {
    let (problem, bound) = load(&a.data, a.seats, a.lower_bound.as_deref())?;
    let method = match (a.method, bound) {
        (SimMethodArg::Stochastic, None) => SimMethod::Stochastic,
        (SimMethodArg::Stochastic, Some(l)) => SimMethod::LowerBound(l),
        (SimMethodArg::ConditionalSampling, None) => SimMethod::ConditionalSampling,
        (other, None) => SimMethod::Deterministic(
            Method::from_name(other.to_possible_value().expect("named").get_name()).expect("known method"),
        ),
        (_, Some(_)) => return Err(CliError::Usage("--lower-bound requires --method stochastic".into())),
    };
    let report = simulate(&method, &problem, a.seed, a.n)?;
    let quota = compute_quota(&problem);
    // A lower bound moves the target from q to the composite quota.
    let targets = match &method {
        SimMethod::LowerBound(l) => iterate_lower_bound(&quota, l)?.final_quota,
        _ => quota.quotas().to_vec(),
    };
    let verdicts = fairness_test(&report, &targets, a.z)?;
    let mut doc = Document::new(&["state", "target", "target_decimal", "mean", "std_error", "pass"]);
    doc.meta("method", &report.method);
    doc.meta("master seed", report.master_seed);
    doc.meta("replicates", report.replicates);
    doc.meta("z", a.z);
    doc.meta("quota violations", report.quota_violations);
    doc.meta("lower-bound violations", report.lower_bound_violations);
    let (means, errors) = (report.means(), report.std_errors());
    for i in 0..problem.num_states() {
        let label = &problem.labels()[i];
        doc.row(vec![
            label.clone(),
            exact(&targets[i]),
            decimal(&targets[i], PLACES),
            format!("{:.6}", means[i]),
            format!("{:.6}", errors[i]),
            verdicts[i].to_string(),
        ]);
        doc.record(
            "estimate",
            &EstimateRecord {
                state: label,
                quota: targets[i].clone(),
                mean: means[i],
                std_error: errors[i],
                pass: verdicts[i],
            },
        );
    }
    doc.record("summary", &json!({ "z": a.z, "report": report }));
    Ok(Outcome::ok(doc, a.format))
}

fn paradox_scan(a: &ParadoxArgs) -> Result<Outcome> {
    if a.max_states == 0 || a.max_population == 0 || a.max_seats == 0 {
        return Err(CliError::Usage("corpus limits must be positive".into()));
    }
    let method = a.method.method();
    let mut reports: Vec<ParadoxReport> = Vec::new();
    let scanned = a.count;
    match a.kind {
        ParadoxArg::Alabama => {
            for p in random_corpus(a.seed, a.count, a.max_states, a.max_population, a.max_seats) {
                reports.extend(detect_alabama(&p, method, 1..=a.max_seats)?);
            }
        }
        ParadoxArg::Population => {
            for (before, after) in population_pairs(a.seed, a.count, a.max_states, a.max_population, a.max_seats) {
                if method.apportion(&before).is_err() {
                    continue;
                }
                reports.extend(detect_population_paradox(&before, &after, method)?);
            }
        }
        ParadoxArg::NewState => {
            for (base, ext) in new_state_pairs(a.seed, a.count, a.max_states, a.max_population, a.max_seats) {
                if method.apportion(&base).is_err() || method.apportion(&ext).is_err() {
                    continue;
                }
                reports.extend(detect_new_state_paradox(&base, &ext, method)?);
            }
        }
    }
    let mut doc = Document::new(&[
        "kind",
        "before_populations",
        "before_seats",
        "after_populations",
        "after_seats",
        "states",
    ]);
    doc.meta("kind", a.kind.to_possible_value().expect("named").get_name());
    doc.meta("method", method.name());
    doc.meta("seed", a.seed);
    doc.meta("instances", scanned);
    doc.meta("reports", reports.len());
    for r in &reports {
        doc.row(vec![
            r.kind.name().into(),
            format!("{} | r={}", join_numbers(r.before.populations()), r.before.seats()),
            join_numbers(&r.before_seats),
            format!("{} | r={}", join_numbers(r.after.populations()), r.after.seats()),
            join_numbers(&r.after_seats),
            join_labels(&r.before, &r.states),
        ]);
        doc.record("paradox", r);
    }
    Ok(Outcome::ok(doc, a.format))
}

#[derive(Serialize)]
struct OffenderRecord<'a> {
    state: &'a str,
    #[serde(with = "rational::serde_rational")]
    quota: Rational,
    quota_decimal: String,
    #[serde(with = "rational::serde_rational")]
    adjusted: Rational,
    adjusted_decimal: String,
    #[serde(with = "rational::serde_rational")]
    gap: Rational,
    gap_decimal: String,
}

fn bound_check(a: &BoundArgs) -> Result<Outcome> {
    let (labels, quota) = read_quotas(&a.quotas)?;
    let bound = resolve_lower_bound(&a.lower_bound, &labels)?;
    let p = a.places;
    let mut doc = Document::new(&[
        "state",
        "quota",
        "quota_decimal",
        "adjusted",
        "adjusted_decimal",
        "gap",
        "gap_decimal",
    ]);
    doc.meta("states", labels.len());
    doc.meta("seats", quota.seats());
    let cls = match classify(&quota, &bound) {
        Ok(cls) => cls,
        Err(CoreError::InfeasibleBound(violations)) => {
            doc.meta("feasible", false);
            for v in &violations {
                doc.meta("violation", v);
                doc.record("violation", v);
            }
            return Ok(Outcome { doc, format: a.format, code: 1 });
        }
        Err(e) => return Err(e.into()),
    };
    let names = |idx: &[usize]| -> String {
        if idx.is_empty() {
            "-".into()
        } else {
            idx.iter().map(|&i| labels[i].as_str()).collect::<Vec<_>>().join(" ")
        }
    };
    doc.meta("small", names(&cls.small));
    doc.meta("exact", names(&cls.exact));
    doc.meta("surplus states", cls.surplus.len());
    doc.meta("remaining seats", cls.remaining_seats);
    let trace = iterate_lower_bound(&quota, &bound)?;
    let mut summary = json!({ "classification": cls, "trace": trace });
    if !cls.surplus.is_empty() {
        let adjusted = equal_representation_quota(&cls, &quota)?;
        let vb = violation_probability_bound(&adjusted);
        doc.meta("gamma", format!("{} ({})", exact(&adjusted.gamma), decimal(&adjusted.gamma, p)));
        doc.meta("condition holds", adjusted.condition_c_holds);
        doc.meta("offenders", names(&adjusted.offenders));
        doc.meta("bound", format!("{} ({})", exact(&vb.bound), decimal(&vb.bound, p)));
        doc.meta("gap sum", format!("{} ({})", exact(&vb.gap_sum), decimal(&vb.gap_sum, p)));
        for g in &vb.gaps {
            let k = adjusted.indices.iter().position(|&i| i == g.state).expect("offender is active");
            let record = OffenderRecord {
                state: &labels[g.state],
                quota: adjusted.quotas[k].clone(),
                quota_decimal: decimal(&adjusted.quotas[k], p),
                adjusted: adjusted.values[k].clone(),
                adjusted_decimal: decimal(&adjusted.values[k], p),
                gap: g.gap.clone(),
                gap_decimal: decimal(&g.gap, p),
            };
            doc.row(vec![
                record.state.into(),
                exact(&record.quota),
                record.quota_decimal.clone(),
                exact(&record.adjusted),
                record.adjusted_decimal.clone(),
                exact(&record.gap),
                record.gap_decimal.clone(),
            ]);
            doc.record("offender", &record);
        }
        summary["adjusted"] = serde_json::to_value(&adjusted).expect("serializable");
        summary["bound"] = serde_json::to_value(&vb).expect("serializable");
    }
    doc.meta("iterated rounds", trace.rounds.len());
    doc.meta("feasible", trace.feasible);
    for v in &trace.diagnostics {
        doc.meta("violation", v);
    }
    doc.record("summary", &summary);
    let code = if trace.feasible { 0 } else { 1 };
    Ok(Outcome { doc, format: a.format, code })
}

fn table1(a: &Table1Args) -> Result<Outcome> {
    let mut files: Vec<PathBuf> = std::fs::read_dir(&a.data)
        .map_err(|source| CliError::Io {
            path: a.data.clone(),
            source,
        })?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|x| x == "csv"))
        .collect();
    files.sort();
    if files.is_empty() {
        return Err(CliError::Input(format!("{}: no .csv census files", a.data.display())));
    }
    let p = a.places;
    let mut doc = Document::new(&["census", "small_states", "state", "quota", "adjusted"]);
    doc.meta("seats", a.seats);
    doc.meta("lower bound", &a.lower_bound);
    for path in files {
        let name = path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
        let problem = read_census(&path)?.problem(a.seats)?;
        let quota = compute_quota(&problem);
        let bound = resolve_lower_bound(&a.lower_bound, problem.labels())?;
        let cls = match classify(&quota, &bound) {
            Ok(cls) => cls,
            Err(CoreError::InfeasibleBound(_)) => {
                doc.row(vec![name.clone(), "-".into(), "infeasible".into(), String::new(), String::new()]);
                doc.record("census", &json!({ "census": name, "feasible": false }));
                continue;
            }
            Err(e) => return Err(e.into()),
        };
        let adjusted = equal_representation_quota(&cls, &quota)?;
        let small = cls.small.len().to_string();
        if adjusted.offenders.is_empty() {
            doc.row(vec![name.clone(), small.clone(), "none".into(), String::new(), String::new()]);
        }
        let mut offenders = Vec::new();
        for (k, &i) in adjusted.indices.iter().enumerate() {
            if !adjusted.offenders.contains(&i) {
                continue;
            }
            doc.row(vec![
                name.clone(),
                small.clone(),
                problem.labels()[i].clone(),
                decimal(&adjusted.quotas[k], p),
                decimal(&adjusted.values[k], p),
            ]);
            offenders.push(json!({
                "state": problem.labels()[i],
                "quota": exact(&adjusted.quotas[k]),
                "adjusted": exact(&adjusted.values[k]),
            }));
        }
        doc.record(
            "census",
            &json!({ "census": name, "small_states": cls.small.len(), "gamma": exact(&adjusted.gamma), "offenders": offenders }),
        );
    }
    Ok(Outcome::ok(doc, a.format))
}
