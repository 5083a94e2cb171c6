//! Command-line front end: input parsing, dispatch and rendering.

pub mod input;
pub mod output;

use std::ffi::OsString;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use thiserror::Error;

use crate::localring::{LocalRingError, LocalRingModel, RingSource, StabilityReport};
use crate::series::Rational;
use crate::valuesemigroup::SemigroupData;
use crate::zeta::{
    cartier_local_factor, cartier_local_factor_symbolic, run_report, specialize_symbolic, specialize_u, CheckResult,
    CheckSelection, CheckStatus, ReportInput, ZetaError, ZetaReport,
};
pub use input::{parse_input, InputDescription, InputError, InputSource};
pub use output::{CheckDoc, OutputDocument, SemigroupDoc, SpecializationDoc, ZetaDoc};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INPUT: i32 = 1;
pub const EXIT_CHECK: i32 = 2;
pub const EXIT_PRECISION: i32 = 3;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("input error: {0}")]
    Input(String),
    #[error("insufficient precision: {0}")]
    Precision(String),
    #[error("internal check failed: {0}")]
    Check(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Input(_) => EXIT_INPUT,
            CliError::Check(_) => EXIT_CHECK,
            CliError::Precision(_) => EXIT_PRECISION,
        }
    }
}

impl From<InputError> for CliError {
    fn from(e: InputError) -> Self {
        CliError::Input(e.to_string())
    }
}

impl From<LocalRingError> for CliError {
    fn from(e: LocalRingError) -> Self {
        match e {
            LocalRingError::InsufficientTruncation(_)
            | LocalRingError::Unstable { .. }
            | LocalRingError::ConditionBeyondTruncation { .. }
            | LocalRingError::ZeroDivisor { .. } => CliError::Precision(e.to_string()),
            _ => CliError::Input(e.to_string()),
        }
    }
}

impl From<ZetaError> for CliError {
    fn from(e: ZetaError) -> Self {
        match e {
            ZetaError::ZeroSpecialization => CliError::Input(e.to_string()),
            _ => CliError::Check(e.to_string()),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Parser, Debug)]
#[command(name = "curvezeta", version, about = "Universal zeta functions of curve singularities")]
pub struct Cli {
    /// Output format
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    pub format: Format,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// The universal zeta function
    Zeta {
        /// JSON input file, or `-` for standard input
        input: PathBuf,
        /// Set all T_i equal to T
        #[arg(long)]
        single: bool,
    },
    /// Conductor, delta invariant, value semigroup box and Gorenstein flag
    Semigroup { input: PathBuf },
    /// The motivic Poincaré series
    Poincare {
        input: PathBuf,
        #[arg(long)]
        single: bool,
    },
    /// Substitute U = 1, U = <rational> or a symbolic U = q
    Specialize {
        input: PathBuf,
        /// `1`, `q=<rational>` or `q`
        #[arg(long, value_name = "1|q=<r>|q")]
        u: String,
        /// One-variable counting factor: U = q, then T -> qT
        #[arg(long)]
        cartier: bool,
        #[arg(long)]
        single: bool,
    },
    /// Run consistency checks; all applicable ones when no flag is given
    Check {
        input: PathBuf,
        #[arg(long)]
        functional_equation: bool,
        #[arg(long)]
        symmetry: bool,
        #[arg(long)]
        kiyek: bool,
        #[arg(long)]
        eles: bool,
        #[arg(long)]
        monodromy: bool,
        #[arg(long)]
        structural: bool,
        /// Compare against the series-sum oracle up to this total degree
        #[arg(long, value_name = "D")]
        oracle_degree: Option<u64>,
        /// Count ideals over F_p (repeatable)
        #[arg(long, value_name = "p")]
        finite_field: Vec<u64>,
    },
}

impl Command {
    fn input(&self) -> &Path {
        match self {
            Command::Zeta { input, .. }
            | Command::Semigroup { input }
            | Command::Poincare { input, .. }
            | Command::Specialize { input, .. }
            | Command::Check { input, .. } => input,
        }
    }

    fn name(&self) -> &'static str {
        match self {
            Command::Zeta { .. } => "zeta",
            Command::Semigroup { .. } => "semigroup",
            Command::Poincare { .. } => "poincare",
            Command::Specialize { .. } => "specialize",
            Command::Check { .. } => "check",
        }
    }
}

/// An input resolved to a semigroup, with the ring model if there is one.
#[derive(Debug, Clone)]
pub struct Prepared {
    pub description: InputDescription,
    pub report_input: ReportInput,
    pub stability: Option<StabilityReport>,
}

/// Builds the semigroup (and model) an input describes. An explicit
/// truncation is used as given and must pass the stability check.
pub fn prepare(description: InputDescription, name: &str) -> Result<Prepared, CliError> {
    let name = description.description.clone().unwrap_or_else(|| name.to_string());
    let source = match &description.source {
        InputSource::NumericalSemigroup { generators } => {
            let s = SemigroupData::from_numerical_generators(generators).map_err(|e| CliError::Input(e.to_string()))?;
            return Ok(finish(description, ReportInput::from_semigroup(&name, s), None));
        }
        InputSource::SemigroupBox { conductor, elements } => {
            let s = SemigroupData::from_box(conductor.clone(), elements).map_err(|e| CliError::Input(e.to_string()))?;
            return Ok(finish(description, ReportInput::from_semigroup(&name, s), None));
        }
        InputSource::Parametrization { generators } => RingSource::Generators(generators.clone()),
        InputSource::LinearConditions { rows } => RingSource::Conditions {
            d: description.branches,
            rows: rows.clone(),
        },
    };
    let model = match &description.truncation {
        Some(n) => source.build(n)?,
        None => LocalRingModel::auto(&source)?,
    };
    let stability = model.stability_check()?;
    if !stability.is_stable() {
        return Err(CliError::Precision(stability.to_string()));
    }
    let input = ReportInput::from_model(&name, model)?;
    Ok(finish(description, input, Some(stability)))
}

fn finish(description: InputDescription, mut input: ReportInput, stability: Option<StabilityReport>) -> Prepared {
    input.expect_gorenstein = description.expect_gorenstein;
    input.plane_origin = description.plane_origin;
    Prepared {
        description,
        report_input: input,
        stability,
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum USpec {
    Value(Rational),
    Symbolic,
}

fn parse_u(text: &str) -> Result<USpec, CliError> {
    let text = text.trim();
    if text == "q" {
        return Ok(USpec::Symbolic);
    }
    let value = text.strip_prefix("q=").unwrap_or(text);
    value
        .trim()
        .parse::<Rational>()
        .map(USpec::Value)
        .map_err(|_| CliError::Input(format!("--u: expected 1, q=<rational> or q, got {text:?}")))
}

fn base_document(command: &str, p: &Prepared, r: &ZetaReport) -> OutputDocument {
    OutputDocument {
        command: command.into(),
        input: r.descriptor.clone(),
        mode: p.description.source.mode().into(),
        d: r.d,
        conductor: r.conductor.entries().to_vec(),
        delta: r.delta,
        gorenstein: r.gorenstein,
        truncation: p.report_input.model.as_ref().map(|m| m.truncation().entries().to_vec()),
        stability: p.stability.as_ref().map(|s| s.to_string()),
        zeta: None,
        poincare: None,
        specialization: None,
        semigroup: None,
        checks: None,
    }
}

fn selection(command: &Command) -> CheckSelection {
    let Command::Check {
        functional_equation,
        symmetry,
        kiyek,
        eles,
        monodromy,
        structural,
        oracle_degree,
        finite_field,
        ..
    } = command
    else {
        return CheckSelection::none();
    };
    let any = *functional_equation || *symmetry || *kiyek || *eles || *monodromy || *structural || oracle_degree.is_some();
    let mut sel = if any {
        CheckSelection {
            functional_equation: *functional_equation,
            symmetry: *symmetry,
            kiyek: *kiyek,
            eles: *eles,
            monodromy: *monodromy,
            structural: *structural,
            oracle_degree: *oracle_degree,
            run_oracle: oracle_degree.is_some(),
            finite_field: Vec::new(),
        }
    } else {
        CheckSelection::default()
    };
    sel.finite_field = finite_field.clone();
    sel
}

/// Computes the output document for a parsed command line.
pub fn dispatch(command: &Command, prepared: &Prepared) -> Result<OutputDocument, CliError> {
    let sel = selection(command);
    let report = run_report(&prepared.report_input, &sel)?;
    let mut doc = base_document(command.name(), prepared, &report);
    match command {
        Command::Zeta { single, .. } => {
            let z = if *single { &report.single } else { &report.zeta };
            doc.zeta = Some(ZetaDoc::new(z).map_err(CliError::Check)?);
        }
        Command::Poincare { single, .. } => {
            let p = if *single {
                report.poincare.single_variable()
            } else {
                report.poincare.clone()
            };
            doc.poincare = Some(ZetaDoc::new(&p).map_err(CliError::Check)?);
        }
        Command::Semigroup { .. } => {
            let s = &prepared.report_input.semigroup;
            doc.semigroup = Some(SemigroupDoc {
                elements: s.box_elements().iter().map(|m| m.entries().to_vec()).collect(),
                l_table: s.l_table().iter().map(|(m, l)| (m.key(), *l)).collect(),
            });
        }
        Command::Specialize { u, cartier, single, .. } => {
            let base = if *single || *cartier { &report.single } else { &report.zeta };
            let spec = match parse_u(u)? {
                USpec::Symbolic => {
                    let f = if *cartier {
                        cartier_local_factor_symbolic(&report.zeta)
                    } else {
                        specialize_symbolic(base)
                    };
                    let label = if *cartier { "cartier local factor" } else { "U=q" };
                    SpecializationDoc::new(&f, "q", *cartier, label, "q")
                }
                USpec::Value(q) => {
                    let f = if *cartier {
                        cartier_local_factor(&report.zeta, &q)?
                    } else {
                        specialize_u(base, &q)?
                    };
                    let one = q == Rational::from_integer(1.into());
                    let label = match (*cartier, one && base.d() == 1) {
                        (true, _) => "cartier local factor".to_string(),
                        (false, true) => report.chi_label().to_string(),
                        (false, false) => format!("U={q}"),
                    };
                    SpecializationDoc::new(&f, &q.to_string(), *cartier, &label, "")
                }
            };
            doc.specialization = Some(spec);
        }
        Command::Check { .. } => {
            let mut checks: Vec<CheckResult> = Vec::new();
            if let (Some(st), true) = (&prepared.stability, sel == CheckSelection::default() || sel.structural) {
                checks.push(CheckResult {
                    name: "precision_stability".into(),
                    status: CheckStatus::Pass,
                    detail: st.to_string(),
                });
            }
            checks.extend(report.checks.iter().cloned());
            doc.checks = Some(checks.iter().map(CheckDoc::from).collect());
        }
    }
    Ok(doc)
}

/// Plain-text rendering.
pub fn render_text(doc: &OutputDocument) -> String {
    let mut out = String::new();
    if let Some(z) = &doc.zeta {
        let _ = writeln!(out, "Z = {}", z.text);
    }
    if let Some(p) = &doc.poincare {
        let _ = writeln!(out, "P = {}", p.text);
    }
    if let Some(s) = &doc.specialization {
        let _ = writeln!(out, "{}", s.text);
    }
    if let Some(s) = &doc.semigroup {
        let tuple = |v: &[u64]| format!("({})", v.iter().map(u64::to_string).collect::<Vec<_>>().join(","));
        let _ = writeln!(out, "branches: {}", doc.d);
        let _ = writeln!(out, "conductor: {}", tuple(&doc.conductor));
        let _ = writeln!(out, "delta: {}", doc.delta);
        let _ = writeln!(out, "gorenstein: {}", doc.gorenstein);
        let elems: Vec<String> = s.elements.iter().map(|e| tuple(e)).collect();
        let _ = writeln!(out, "elements: {}", elems.join(" "));
        if let Some(n) = &doc.truncation {
            let _ = writeln!(out, "truncation: {}", tuple(n));
        }
        if let Some(st) = &doc.stability {
            let _ = writeln!(out, "precision: {st}");
        }
    }
    if let Some(checks) = &doc.checks {
        for c in checks {
            if c.detail.is_empty() {
                let _ = writeln!(out, "{}: {}", c.name, c.status);
            } else {
                let _ = writeln!(out, "{}: {} ({})", c.name, c.status, c.detail);
            }
        }
    }
    out
}

pub fn render(doc: &OutputDocument, format: Format) -> String {
    match format {
        Format::Text => render_text(doc),
        Format::Json => doc.to_json(),
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Execution {
    pub stdout: String,
    pub stderr: String,
    pub code: i32,
}

fn read_input(path: &Path) -> Result<(String, String), CliError> {
    if path == Path::new("-") {
        let text = std::io::read_to_string(std::io::stdin()).map_err(|e| CliError::Input(format!("stdin: {e}")))?;
        return Ok((text, "stdin".into()));
    }
    let text = std::fs::read_to_string(path).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
    let name = path.file_stem().map_or_else(|| path.display().to_string(), |s| s.to_string_lossy().into_owned());
    Ok((text, name))
}

pub fn run(cli: &Cli) -> Result<OutputDocument, CliError> {
    let (text, name) = read_input(cli.command.input())?;
    let prepared = prepare(parse_input(&text)?, &name)?;
    dispatch(&cli.command, &prepared)
}

/// Parses arguments, runs, and reports the exit code.
pub fn execute<I, T>(args: I) -> Execution
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
            let text = e.render().to_string();
            let (stdout, stderr) = if e.use_stderr() { (String::new(), text) } else { (text, String::new()) };
            return Execution { stdout, stderr, code };
        }
    };
    match run(&cli) {
        Ok(doc) => Execution {
            stdout: render(&doc, cli.format),
            stderr: String::new(),
            code: if doc.has_failure() { EXIT_CHECK } else { EXIT_OK },
        },
        Err(e) => Execution {
            stdout: String::new(),
            stderr: format!("error: {e}\n"),
            code: e.exit_code(),
        },
    }
}
