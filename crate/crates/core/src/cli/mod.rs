//! Command-line driver: scenario files in, JSON or TSV reports out.
//!
//! Exit codes: 0 when every check passes, 1 when a verified property fails, 2 on invalid
//! input, 3 when `--strict` is set and a hypothesis does not hold.

pub mod corpus;
pub mod report;
pub mod scenario;
pub mod suite;

use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::descent::{descent_check, descent_spectral_sequence, tower_consistency, HomologyFunctor};
use crate::error::{Error, Result};
use crate::fincat::CoverMode;
use crate::homalg::{is_quasi_iso, RingSpec};
use crate::simplicial::{cech_nerve, coskeleton, coskeleton_oracle, is_hypercover, oracle_agreement};

use report::{homology_tsv, Report};
use scenario::{Resolved, Scenario, SimplicialSpec};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILED: i32 = 1;
pub const EXIT_INVALID: i32 = 2;
pub const EXIT_HYPOTHESIS: i32 = 3;

#[derive(Parser, Debug)]
#[command(name = "hyperdescent", version, about = "Coskeleta, hypercovers and homological descent over finite (G-)sets")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Resolve and validate every structure in a scenario.
    Validate(Common),
    /// Coskeleton levels with the limit-oracle cross-check.
    Cosk(Common),
    /// The Čech nerve of a morphism, as a simplicial-object entry.
    Nerve(Common),
    /// Per-level cover report.
    Hypercover(Common),
    /// The coskeletal tower and its consistency with the descent verdict.
    Tower(Common),
    /// Descent report for the scenario's functor.
    Descent(Common),
    /// Descent spectral sequence over a field.
    Ss(Common),
    /// Homology of the total complex, the base and the cone.
    Homology(Common),
    /// Randomized property suites.
    Suite(SuiteArgs),
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, ValueEnum)]
pub enum Format {
    #[default]
    Json,
    Tsv,
}

#[derive(Args, Debug, Clone)]
pub struct Common {
    #[arg(long)]
    pub input: PathBuf,
    /// Which simplicial object or morphism to use when the scenario has several.
    #[arg(long)]
    pub name: Option<String>,
    /// `cdh` or `ldh:<l>`.
    #[arg(long)]
    pub mode: Option<CoverMode>,
    /// `int`, `int-local:<l>`, `q` or `fp:<p>`.
    #[arg(long)]
    pub ring: Option<RingSpec>,
    #[arg(long)]
    pub truncation: Option<usize>,
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long)]
    pub upto: Option<usize>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long = "r-max")]
    pub r_max: Option<usize>,
    /// Exit with 3 when a hypothesis of the checked statement fails.
    #[arg(long)]
    pub strict: bool,
    #[arg(long, value_enum, default_value_t)]
    pub format: Format,
}

#[derive(Args, Debug, Clone)]
pub struct SuiteArgs {
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Run only these criteria (1–9); all by default.
    #[arg(long = "criterion")]
    pub criteria: Vec<u8>,
    /// Instances per criterion; the defaults meet the acceptance thresholds.
    #[arg(long)]
    pub count: Option<usize>,
}

/// What a command printed and how it exits.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

impl Outcome {
    fn invalid(msg: impl Into<String>) -> Self {
        Outcome { code: EXIT_INVALID, stdout: String::new(), stderr: msg.into() }
    }
}

/// Parses `args` (with the program name first) and runs the command.
pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INVALID } else { EXIT_OK };
            let text = e.render().to_string();
            return if code == EXIT_OK { Outcome { code, stdout: text, stderr: String::new() } } else { Outcome::invalid(text) };
        }
    };
    execute(&cli.command)
}

pub fn execute(cmd: &Command) -> Outcome {
    let common = match cmd {
        Command::Suite(s) => return run_suite(s),
        Command::Validate(c)
        | Command::Cosk(c)
        | Command::Nerve(c)
        | Command::Hypercover(c)
        | Command::Tower(c)
        | Command::Descent(c)
        | Command::Ss(c)
        | Command::Homology(c) => c,
    };
    let text = match std::fs::read_to_string(&common.input) {
        Ok(t) => t,
        Err(e) => return Outcome::invalid(format!("cannot read {}: {e}\n", common.input.display())),
    };
    let scenario = match Scenario::parse(&text) {
        Ok(s) => s,
        Err(e) => return Outcome::invalid(format!("invalid scenario: {e}\n")),
    };
    let resolved = match scenario.resolve() {
        Ok(r) => r,
        Err(e) => return Outcome::invalid(format!("invalid scenario: {e}\n")),
    };
    let ctx = Ctx { scenario: &scenario, resolved: &resolved, args: common };
    let result = match cmd {
        Command::Validate(_) => ctx.validate(),
        Command::Cosk(_) => ctx.cosk(),
        Command::Nerve(_) => ctx.nerve(),
        Command::Hypercover(_) => ctx.hypercover(),
        Command::Tower(_) => ctx.tower(),
        Command::Descent(_) => ctx.descent(),
        Command::Ss(_) => ctx.ss(),
        Command::Homology(_) => ctx.homology(),
        Command::Suite(_) => unreachable!("handled above"),
    };
    match result {
        Ok((code, report)) => match report.render(common.format) {
            Ok(stdout) => Outcome { code, stdout, stderr: String::new() },
            Err(e) => Outcome::invalid(format!("{e}\n")),
        },
        Err(e) => Outcome::invalid(format!("error: {e}\n")),
    }
}

struct Ctx<'a> {
    scenario: &'a Scenario,
    resolved: &'a Resolved,
    args: &'a Common,
}

#[derive(Serialize)]
struct ValidateReport {
    command: &'static str,
    valid: bool,
    groups: Vec<(String, usize)>,
    objects: Vec<(String, usize)>,
    morphisms: Vec<String>,
    simplicial: Vec<(String, Vec<usize>)>,
    squares: Vec<String>,
    functor: Option<String>,
}

#[derive(Serialize)]
struct CoskReport {
    command: &'static str,
    object: String,
    n: usize,
    upto: usize,
    level_sizes: Vec<usize>,
    oracle: Vec<(usize, bool)>,
    oracle_agreement: bool,
}

#[derive(Serialize)]
struct NerveReport {
    command: &'static str,
    morphism: String,
    truncation: usize,
    level_sizes: Vec<usize>,
    simplicial: SimplicialSpec,
}

#[derive(Serialize)]
struct HomologyReport {
    command: &'static str,
    object: String,
    functor: String,
    truncation: usize,
    quasi_iso: crate::homalg::QuasiIsoReport,
}

#[derive(Serialize)]
struct Wrapped<'a, T: Serialize> {
    command: &'static str,
    object: &'a str,
    #[serde(flatten)]
    report: T,
}

impl Ctx<'_> {
    fn mode(&self) -> CoverMode {
        self.args.mode.or(self.scenario.params.mode).unwrap_or(CoverMode::Cdh)
    }

    fn functor(&self) -> Result<Box<dyn HomologyFunctor>> {
        self.resolved.functor(self.args.ring)
    }

    fn truncation(&self, available: usize) -> Result<usize> {
        let n = self.args.truncation.or(self.scenario.params.truncation).unwrap_or(available);
        if n > available {
            return Err(Error::OutOfTruncation(format!("--truncation {n} above the object's truncation {available}")));
        }
        Ok(n)
    }

    fn strict_code(&self, hypotheses: bool) -> i32 {
        if self.args.strict && !hypotheses {
            EXIT_HYPOTHESIS
        } else {
            EXIT_OK
        }
    }

    fn validate(&self) -> Result<(i32, Report)> {
        let r = self.resolved;
        let report = ValidateReport {
            command: "validate",
            valid: true,
            groups: r.groups.iter().map(|(n, g)| (n.clone(), g.order())).collect(),
            objects: r.objects.iter().map(|(n, x)| (n.clone(), x.size())).collect(),
            morphisms: r.morphisms.keys().cloned().collect(),
            simplicial: r.simplicial.iter().map(|(n, x)| (n.clone(), x.body().level_sizes())).collect(),
            squares: r.squares.keys().cloned().collect(),
            functor: r.functor.as_ref().map(|f| f.name.clone()),
        };
        Ok((EXIT_OK, Report::json(&report)?))
    }

    fn cosk(&self) -> Result<(i32, Report)> {
        let (name, x) = self.resolved.simplicial_object(self.args.name.as_deref())?;
        let n = self.args.n.or(self.scenario.params.n).unwrap_or(0);
        let upto = self.args.upto.or(self.scenario.params.upto).unwrap_or(x.truncation().max(n + 1));
        let c = coskeleton(x, n, upto)?;
        let mut oracle = Vec::new();
        for m in n + 1..=upto {
            let (full, lim) = coskeleton_oracle(x, n, m)?;
            oracle.push((m, oracle_agreement(&c, &full, &lim, m)));
        }
        let agreement = c.object.validate().valid && oracle.iter().all(|o| o.1);
        let report = CoskReport {
            command: "cosk",
            object: name.into(),
            n,
            upto,
            level_sizes: c.object.body().level_sizes(),
            oracle,
            oracle_agreement: agreement,
        };
        let mut tsv = String::from("level\tsize\n");
        for (m, k) in report.level_sizes.iter().enumerate() {
            tsv.push_str(&format!("{m}\t{k}\n"));
        }
        tsv.push_str(&format!("oracle agreement: {agreement}\n"));
        Ok((if agreement { EXIT_OK } else { EXIT_FAILED }, Report::with_tsv(&report, tsv)?))
    }

    fn nerve(&self) -> Result<(i32, Report)> {
        let (name, f) = self.resolved.morphism(self.args.name.as_deref())?;
        let t = self.args.truncation.or(self.scenario.params.truncation).unwrap_or(3);
        let x = cech_nerve(f, t);
        let group = self.resolved.group_name(&f.source().context());
        let report = NerveReport {
            command: "nerve",
            morphism: name.into(),
            truncation: t,
            level_sizes: x.body().level_sizes(),
            simplicial: SimplicialSpec::from_object(&x, group),
        };
        Ok((EXIT_OK, Report::json(&report)?))
    }

    fn hypercover(&self) -> Result<(i32, Report)> {
        let (name, x) = self.resolved.simplicial_object(self.args.name.as_deref())?;
        let n = self.truncation(x.truncation())?;
        let rep = is_hypercover(x, self.mode(), n)?;
        let code = self.strict_code(rep.is_hypercover);
        Ok((code, Report::json(&Wrapped { command: "hypercover", object: name, report: rep })?))
    }

    fn tower(&self) -> Result<(i32, Report)> {
        let (name, x) = self.resolved.simplicial_object(self.args.name.as_deref())?;
        let n = self.truncation(x.truncation())?;
        let f = self.functor()?;
        let rep = tower_consistency(f.as_ref(), x, n)?;
        let code = if rep.consistent { EXIT_OK } else { EXIT_FAILED };
        Ok((code, Report::json(&Wrapped { command: "tower", object: name, report: rep })?))
    }

    fn descent(&self) -> Result<(i32, Report)> {
        let (name, x) = self.resolved.simplicial_object(self.args.name.as_deref())?;
        let n = self.truncation(x.truncation())?;
        let f = self.functor()?;
        let rep = descent_check(f.as_ref(), x, self.mode(), n)?;
        let code = if rep.contradicts_theorem() { EXIT_FAILED } else { self.strict_code(rep.theorem_applies) };
        let tsv = homology_tsv(&rep.table);
        Ok((code, Report::with_tsv(&Wrapped { command: "descent", object: name, report: rep }, tsv)?))
    }

    fn ss(&self) -> Result<(i32, Report)> {
        let (name, x) = self.resolved.simplicial_object(self.args.name.as_deref())?;
        let n = self.truncation(x.truncation())?;
        let field = self.args.ring.or(self.resolved.functor.as_ref().map(|f| f.ring)).unwrap_or(RingSpec::Rationals);
        if !field.is_field() {
            return Err(Error::InvalidInput(format!("ss needs a field; got {field}")));
        }
        let f = self.functor()?;
        let r_max = self.args.r_max.or(self.scenario.params.r_max).unwrap_or(n + 1);
        let rep = descent_spectral_sequence(f.as_ref(), &x.restrict(n), field, r_max)?;
        let ss = &rep.spectral_sequence;
        let ok = ss.squares_to_zero && ss.pages_consistent && ss.converges && rep.e1_matches_columns && rep.matches_base != Some(false);
        Ok((if ok { EXIT_OK } else { EXIT_FAILED }, Report::json(&Wrapped { command: "ss", object: name, report: rep })?))
    }

    fn homology(&self) -> Result<(i32, Report)> {
        let (name, x) = self.resolved.simplicial_object(self.args.name.as_deref())?;
        let n = self.truncation(x.truncation())?;
        if n == 0 {
            return Err(Error::OutsideWindow { degree: 0, window: None });
        }
        let f = self.functor()?;
        let applied = crate::descent::apply_functor(f.as_ref(), x, n)?;
        let upto = self.args.upto.unwrap_or(n - 1);
        let q = is_quasi_iso(&applied.augmentation, upto, f.ring())?;
        let tsv = homology_tsv(&q.table);
        let report = HomologyReport { command: "homology", object: name.into(), functor: f.name(), truncation: n, quasi_iso: q };
        Ok((EXIT_OK, Report::with_tsv(&report, tsv)?))
    }
}

#[derive(Serialize)]
struct SuiteReport {
    command: &'static str,
    seed: u64,
    passed: bool,
    criteria: Vec<suite::CriterionOutcome>,
}

fn run_suite(args: &SuiteArgs) -> Outcome {
    let ids: Vec<u8> = if args.criteria.is_empty() { (1..=9).collect() } else { args.criteria.clone() };
    let mut criteria = Vec::with_capacity(ids.len());
    for id in ids {
        let count = args.count.unwrap_or_else(|| suite::DEFAULT_COUNTS.get(usize::from(id).wrapping_sub(1)).copied().unwrap_or(0));
        match suite::run_criterion(id, args.seed, count) {
            Some(o) => criteria.push(o),
            None => return Outcome::invalid(format!("unknown criterion {id}; expected 1 to 9\n")),
        }
    }
    let passed = criteria.iter().all(suite::CriterionOutcome::passed);
    let report = SuiteReport { command: "suite", seed: args.seed, passed, criteria };
    match Report::json(&report) {
        Ok(r) => Outcome { code: if passed { EXIT_OK } else { EXIT_FAILED }, stdout: r.json, stderr: String::new() },
        Err(e) => Outcome::invalid(format!("{e}\n")),
    }
}
