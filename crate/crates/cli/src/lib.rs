//! Command dispatch behind the `dispersia` binary.
//!
//! Every command builds a [`Table`] which is then written as CSV or JSON.
//! Data goes to the output stream only; notes go to the error stream.

use std::fmt;
use std::io::{self, Write};

use rayon::prelude::*;
use serde::Serialize;
use serde_json::{Map, Value};

use dispersia::asymptotics::{
    default_schedule, infinite_beta_diagnostic, verify_limit, AsymptoticScenario, Branch,
    LIMIT_CSV_HEADER,
};
use dispersia::catalog::{
    all_entries, lookup_with, CatalogEntry, ParameterMap, ShapeParams, TableStatus,
};
use dispersia::deviance::{
    check_regularity, check_unit_deviance, diagonal_derivative_fd, saddlepoint_log_pdf,
};
use dispersia::quadrature::integrate;
use dispersia::{Error, DEFAULT_LIMIT_TOLERANCE};

pub const VERIFY_HEADER: &str = "entry,check,status,detail";

/// Tolerance on |∫f − 1| for `normalize` and `verify-all`.
pub const NORMALIZATION_TOLERANCE: f64 = 1e-6;
const NORMALIZATION_SIGMA2: f64 = 0.1;
const DERIVATIVE_TOLERANCE: f64 = 1e-5;
const AXIOM_GRID: usize = 50;
const VERIFY_BETA: f64 = 1.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    CatalogList,
    CatalogDescribe,
    Pdf,
    Normalize,
    Limit,
    VerifyAll,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Format {
    #[default]
    Csv,
    Json,
}

/// σ² given directly or through the entry's native parameter.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Dispersion {
    Sigma2(f64),
    Lambda(f64),
    Dof(f64),
    R(f64),
}

impl Dispersion {
    fn flag(self) -> &'static str {
        match self {
            Dispersion::Sigma2(_) => "--sigma2",
            Dispersion::Lambda(_) => "--lambda",
            Dispersion::Dof(_) => "--dof",
            Dispersion::R(_) => "--r",
        }
    }

    /// Converts to σ² through the entry's parameter map.
    pub fn sigma2(self, entry: &CatalogEntry) -> Result<f64, CliError> {
        let map = entry.parameter_map();
        let native = match (self, map) {
            (Dispersion::Sigma2(v), _) => return check_sigma2(v),
            (Dispersion::Lambda(v), ParameterMap::Precision | ParameterMap::HalfPrecision) => v,
            (Dispersion::Dof(v), ParameterMap::DegreesOfFreedom) => v,
            (Dispersion::R(v), ParameterMap::ShapeR) => v,
            _ => {
                return Err(CliError::Usage(format!(
                "{} does not apply to {}, whose native parameter is {} ({}); use --sigma2 instead",
                self.flag(),
                entry.name(),
                map.native_symbol(),
                map.description()
            )))
            }
        };
        Ok(map.sigma2_from_native(native)?)
    }
}

fn check_sigma2(v: f64) -> Result<f64, CliError> {
    if v > 0.0 && v.is_finite() {
        Ok(v)
    } else {
        Err(CliError::Usage(format!(
            "--sigma2 {v} must be finite and positive"
        )))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub command: Command,
    pub entry: Option<String>,
    pub shapes: ShapeParams,
    pub mu: f64,
    pub mu0: Option<f64>,
    pub dispersion: Option<Dispersion>,
    /// Evaluation points for `pdf`.
    pub y: Vec<f64>,
    pub k: Option<u32>,
    /// May be +∞, which selects the divergence diagnostic.
    pub beta: f64,
    pub schedule: Option<Vec<f64>>,
    pub tolerance: f64,
    pub branch: Branch,
    pub only: Vec<String>,
    /// `None` picks the command default: JSON for `catalog-describe`, CSV otherwise.
    pub format: Option<Format>,
}

impl RunConfig {
    pub fn new(command: Command) -> Self {
        Self {
            command,
            entry: None,
            shapes: ShapeParams::default(),
            mu: 0.0,
            mu0: None,
            dispersion: None,
            y: Vec::new(),
            k: None,
            beta: 1.0,
            schedule: None,
            tolerance: DEFAULT_LIMIT_TOLERANCE,
            branch: Branch::Upper,
            only: Vec::new(),
            format: None,
        }
    }

    pub fn format(&self) -> Format {
        self.format.unwrap_or(match self.command {
            Command::CatalogDescribe => Format::Json,
            _ => Format::Csv,
        })
    }

    fn entry(&self) -> Result<CatalogEntry, CliError> {
        let name = self
            .entry
            .as_deref()
            .ok_or_else(|| CliError::Usage("this command needs an entry name".into()))?;
        Ok(lookup_with(name, self.shapes)?)
    }

    fn mu0(&self, entry: &CatalogEntry) -> f64 {
        self.mu0.unwrap_or_else(|| entry.default_mu0())
    }

    fn sigma2(&self, entry: &CatalogEntry) -> Result<f64, CliError> {
        self.dispersion
            .ok_or_else(|| {
                CliError::Usage("one of --sigma2, --lambda, --dof or --r is required".into())
            })?
            .sigma2(entry)
    }
}

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Model(Error),
    Io(io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        2
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(msg) => write!(f, "usage error: {msg}"),
            CliError::Model(e) => write!(f, "{e}"),
            CliError::Io(e) => write!(f, "output error: {e}"),
        }
    }
}

impl std::error::Error for CliError {}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::UnknownEntry { .. } => CliError::Usage(e.to_string()),
            other => CliError::Model(other),
        }
    }
}

impl From<io::Error> for CliError {
    fn from(e: io::Error) -> Self {
        CliError::Io(e)
    }
}

impl From<csv::Error> for CliError {
    fn from(e: csv::Error) -> Self {
        CliError::Io(e.into())
    }
}

/// Outcome of a command that ran to completion.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub verified: bool,
    /// Notes for the error stream.
    pub notes: Vec<String>,
}

impl Outcome {
    fn ok() -> Self {
        Self {
            verified: true,
            notes: Vec::new(),
        }
    }

    pub fn exit_code(&self) -> i32 {
        if self.verified {
            0
        } else {
            1
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Num(f64),
    Int(u64),
    Bool(bool),
    Text(String),
}

impl Cell {
    fn text(s: impl Into<String>) -> Self {
        Cell::Text(s.into())
    }

    fn csv(&self) -> String {
        match self {
            Cell::Num(v) => fmt_num(*v),
            Cell::Int(v) => v.to_string(),
            Cell::Bool(v) => v.to_string(),
            Cell::Text(s) => s.clone(),
        }
    }

    fn json(&self) -> Value {
        match self {
            // Round through the 15-digit text form so JSON and CSV agree.
            Cell::Num(v) if v.is_finite() => {
                serde_json::Number::from_f64(fmt_num(*v).parse().expect("formatted number parses"))
                    .map_or(Value::Null, Value::Number)
            }
            Cell::Num(_) => Value::Null,
            Cell::Int(v) => Value::from(*v),
            Cell::Bool(v) => Value::Bool(*v),
            Cell::Text(s) => Value::String(s.clone()),
        }
    }
}

/// 15 significant digits.
pub fn fmt_num(v: f64) -> String {
    format!("{v:.14e}")
}

#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub header: Vec<&'static str>,
    pub rows: Vec<Vec<Cell>>,
    /// Emit JSON as a single object instead of an array of rows.
    pub single: bool,
}

impl Table {
    fn new(header: &[&'static str]) -> Self {
        Self {
            header: header.to_vec(),
            rows: Vec::new(),
            single: false,
        }
    }

    fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    pub fn write(&self, format: Format, out: &mut dyn Write) -> Result<(), CliError> {
        match format {
            Format::Csv => {
                let mut w = csv::Writer::from_writer(out);
                w.write_record(&self.header)?;
                for row in &self.rows {
                    w.write_record(row.iter().map(Cell::csv))?;
                }
                w.flush()?;
            }
            Format::Json => {
                let objects: Vec<Value> = self
                    .rows
                    .iter()
                    .map(|row| {
                        let map: Map<String, Value> = self
                            .header
                            .iter()
                            .zip(row)
                            .map(|(h, c)| (h.to_string(), c.json()))
                            .collect();
                        Value::Object(map)
                    })
                    .collect();
                let value = match (self.single, objects.len()) {
                    (true, 1) => objects.into_iter().next().expect("one row"),
                    _ => Value::Array(objects),
                };
                serde_json::to_writer_pretty(&mut *out, &value).map_err(io::Error::from)?;
                writeln!(out)?;
            }
        }
        Ok(())
    }
}

/// Runs one command and writes its data to `out`.
pub fn run(config: &RunConfig, out: &mut dyn Write) -> Result<Outcome, CliError> {
    let (table, outcome) = build(config)?;
    table.write(config.format(), out)?;
    Ok(outcome)
}

/// Builds the output table without writing it.
pub fn build(config: &RunConfig) -> Result<(Table, Outcome), CliError> {
    match config.command {
        Command::CatalogList => Ok((catalog_list(), Outcome::ok())),
        Command::CatalogDescribe => Ok((catalog_describe(config)?, Outcome::ok())),
        Command::Pdf => Ok((pdf(config)?, Outcome::ok())),
        Command::Normalize => normalize(config),
        Command::Limit => limit(config),
        Command::VerifyAll => {
            let rows = verify_all(&config.only)?;
            let mut table = Table::new(&VERIFY_HEADER.split(',').collect::<Vec<_>>());
            let mut outcome = Outcome::ok();
            let mut discrepancies = 0;
            for r in &rows {
                match r.status {
                    CheckStatus::Fail => outcome.verified = false,
                    CheckStatus::Discrepancy => discrepancies += 1,
                    CheckStatus::Pass => {}
                }
                table.push(vec![
                    Cell::text(&r.entry),
                    Cell::text(r.check),
                    Cell::text(r.status.to_string()),
                    Cell::text(&r.detail),
                ]);
            }
            if discrepancies > 0 {
                outcome.notes.push(format!(
                    "{discrepancies} DISCREPANCY row(s): the printed constant differs from the one derived from the deviance"
                ));
            }
            let failed = rows
                .iter()
                .filter(|r| r.status == CheckStatus::Fail)
                .count();
            if failed > 0 {
                outcome.notes.push(format!("{failed} check(s) failed"));
            }
            Ok((table, outcome))
        }
    }
}

fn catalog_list() -> Table {
    let mut t = Table::new(&[
        "name",
        "support",
        "parameter_map",
        "variance",
        "k",
        "proper_dm",
        "exponential_dm",
    ]);
    for e in all_entries() {
        let flags = e.class_flags();
        t.push(vec![
            Cell::text(e.name()),
            Cell::text(e.support().to_string()),
            Cell::text(e.parameter_map().description()),
            Cell::text(e.variance_formula_text()),
            Cell::Int(u64::from(e.limit_order())),
            Cell::Bool(flags.proper_dm),
            Cell::Bool(flags.exponential_dm),
        ]);
    }
    t
}

fn catalog_describe(config: &RunConfig) -> Result<Table, CliError> {
    let e = config.entry()?;
    let mu0 = config.mu0(&e);
    if !e.omega().contains(mu0) {
        return Err(Error::domain(
            "catalog-describe",
            format!("mu0 = {mu0} is outside {}", e.omega()),
        )
        .into());
    }
    let c = e.limit_constant(mu0, 1.0)?;
    let flags = e.class_flags();
    let shapes = e
        .fixed_shape_params()
        .iter()
        .map(|(s, v)| format!("{s}={}", fmt_num(*v)))
        .collect::<Vec<_>>()
        .join(";");
    let mut t = Table::new(&[
        "name",
        "support",
        "omega",
        "parameter_map",
        "shape_params",
        "mu0",
        "variance_formula",
        "variance",
        "d2",
        "d3",
        "d4",
        "k",
        "elevated",
        "constant_formula",
        "printed_formula",
        "proper_dm",
        "exponential_dm",
    ]);
    t.single = true;
    t.push(vec![
        Cell::text(e.name()),
        Cell::text(e.support().to_string()),
        Cell::text(e.omega().to_string()),
        Cell::text(e.parameter_map().description()),
        Cell::text(shapes),
        Cell::Num(mu0),
        Cell::text(e.variance_formula_text()),
        Cell::Num(e.variance(mu0)),
        Cell::Num(e.d2(mu0)),
        Cell::Num(e.d3(mu0)),
        Cell::Num(e.d4(mu0)),
        Cell::Int(u64::from(c.k)),
        Cell::Bool(c.elevated),
        Cell::text(e.derived_formula()),
        Cell::text(e.printed_formula().unwrap_or("")),
        Cell::Bool(flags.proper_dm),
        Cell::Bool(flags.exponential_dm),
    ]);
    Ok(t)
}

fn pdf(config: &RunConfig) -> Result<Table, CliError> {
    let e = config.entry()?;
    let mu0 = config.mu0(&e);
    let s2 = config.sigma2(&e)?;
    if config.y.is_empty() {
        return Err(CliError::Usage("pdf needs at least one --y value".into()));
    }
    let mut t = Table::new(&[
        "y",
        "mu0",
        "sigma2",
        "log_pdf",
        "pdf",
        "saddlepoint_log_pdf",
    ]);
    for &y in &config.y {
        let log_pdf = e.exact_log_pdf(y, mu0, s2)?;
        let saddle = if e.omega().contains(y) {
            Cell::Num(saddlepoint_log_pdf(e.deviance(), y, mu0, s2)?)
        } else {
            // The saddlepoint form needs V(y), which is only defined on Ω.
            Cell::text("")
        };
        t.push(vec![
            Cell::Num(y),
            Cell::Num(mu0),
            Cell::Num(s2),
            Cell::Num(log_pdf),
            Cell::Num(log_pdf.exp()),
            saddle,
        ]);
    }
    Ok(t)
}

/// ∫ exp(exact_log_pdf) over the support.
fn normalization_integral(
    e: &CatalogEntry,
    mu0: f64,
    s2: f64,
) -> Result<(f64, f64, bool), CliError> {
    if !e.omega().contains(mu0) {
        return Err(
            Error::domain("normalize", format!("mu0 = {mu0} is outside {}", e.omega())).into(),
        );
    }
    // Surface domain errors before they turn into non-finite samples.
    e.exact_log_pdf(mu0, mu0, s2)?;
    let f = |y: f64| {
        e.exact_log_pdf(y, mu0, s2)
            .map(f64::exp)
            .unwrap_or(f64::NAN)
    };
    let r = integrate(f, e.integration_interval(), 1e-12, 1e-10)?;
    Ok((r.value, r.error_estimate, r.converged))
}

fn normalize(config: &RunConfig) -> Result<(Table, Outcome), CliError> {
    let e = config.entry()?;
    let mu0 = config.mu0(&e);
    let s2 = config.sigma2(&e)?;
    let (value, err, converged) = normalization_integral(&e, mu0, s2)?;
    let mut t = Table::new(&[
        "entry",
        "mu0",
        "sigma2",
        "value",
        "error_estimate",
        "converged",
    ]);
    t.push(vec![
        Cell::text(e.name()),
        Cell::Num(mu0),
        Cell::Num(s2),
        Cell::Num(value),
        Cell::Num(err),
        Cell::Bool(converged),
    ]);
    let mut outcome = Outcome::ok();
    if !converged || (value - 1.0).abs() > NORMALIZATION_TOLERANCE {
        outcome.verified = false;
        outcome.notes.push(format!(
            "integral {} misses 1 by more than {NORMALIZATION_TOLERANCE:e}",
            fmt_num(value)
        ));
    }
    Ok((t, outcome))
}

fn limit(config: &RunConfig) -> Result<(Table, Outcome), CliError> {
    let e = config.entry()?;
    let mu0 = config.mu0(&e);
    let schedule = config.schedule.clone().unwrap_or_else(default_schedule);
    if config.beta == f64::INFINITY {
        let d = infinite_beta_diagnostic(&e, config.mu, mu0, &schedule)?;
        let mut t = Table::new(&["sigma2", "x_sigma", "log_ratio"]);
        for &(s2, x, lr) in &d.rows {
            t.push(vec![Cell::Num(s2), Cell::Num(x), Cell::Num(lr)]);
        }
        let verified = d.expected == d.observed;
        let notes = vec![format!(
            "beta = inf: expected ratio {:?}, observed {:?}",
            d.expected, d.observed
        )];
        return Ok((t, Outcome { verified, notes }));
    }
    let k = match config.k {
        Some(k) => k,
        None => e.limit_constant(mu0, config.beta.max(0.0))?.k,
    };
    let scenario = AsymptoticScenario::new(k, config.beta, config.mu, mu0, schedule)?
        .with_branch(config.branch);
    let report = verify_limit(&e, &scenario, config.tolerance)?;
    let mut t = Table::new(&LIMIT_CSV_HEADER.split(',').collect::<Vec<_>>());
    for r in &report.rows {
        t.push(vec![
            Cell::Num(r.sigma2),
            Cell::Num(r.x_sigma),
            Cell::Num(r.ratio),
            Cell::Num(r.predicted),
            Cell::Num(r.abs_log_gap),
        ]);
    }
    let mut notes = Vec::new();
    if config.branch == Branch::Lower {
        notes.push("lower branch: this extension is unverified".to_string());
    }
    if !report.converged {
        notes.push(format!(
            "not converged: final relative gap {} (tolerance {}), last-4 trend monotone: {}",
            fmt_num(report.final_relative_gap),
            config.tolerance,
            report.trend
        ));
    }
    Ok((
        t,
        Outcome {
            verified: report.converged,
            notes,
        },
    ))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum CheckStatus {
    Pass,
    Fail,
    Discrepancy,
}

impl fmt::Display for CheckStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CheckStatus::Pass => "PASS",
            CheckStatus::Fail => "FAIL",
            CheckStatus::Discrepancy => "DISCREPANCY",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct VerifyRow {
    pub entry: String,
    pub check: &'static str,
    pub status: CheckStatus,
    pub detail: String,
}

pub const CHECKS: [&str; 5] = [
    "deviance",
    "derivatives",
    "normalization",
    "printed_table",
    "limit",
];

/// Runs the five checks on every selected entry at its default μ₀ and
/// shapes. Rows come back in catalog order.
pub fn verify_all(only: &[String]) -> Result<Vec<VerifyRow>, CliError> {
    let entries: Vec<CatalogEntry> = if only.is_empty() {
        all_entries()
    } else {
        let mut selected = Vec::new();
        for e in all_entries() {
            if only.iter().any(|n| n == e.name()) {
                selected.push(e);
            }
        }
        if let Some(bad) = only
            .iter()
            .find(|n| !selected.iter().any(|e| e.name() == n.as_str()))
        {
            return Err(Error::UnknownEntry {
                name: bad.clone(),
                valid: all_entries()
                    .iter()
                    .map(|e| e.name())
                    .collect::<Vec<_>>()
                    .join(", "),
            }
            .into());
        }
        selected
    };
    Ok(entries
        .par_iter()
        .map(verify_entry)
        .collect::<Vec<_>>()
        .concat())
}

fn row(e: &CatalogEntry, check: &'static str, status: CheckStatus, detail: String) -> VerifyRow {
    VerifyRow {
        entry: e.name().to_string(),
        check,
        status,
        detail,
    }
}

fn pass_fail(ok: bool) -> CheckStatus {
    if ok {
        CheckStatus::Pass
    } else {
        CheckStatus::Fail
    }
}

fn verify_entry(e: &CatalogEntry) -> Vec<VerifyRow> {
    vec![
        check_deviance(e),
        check_derivatives(e),
        check_normalization(e),
        check_printed_table(e),
        check_limit(e),
    ]
}

fn check_deviance(e: &CatalogEntry) -> VerifyRow {
    let (a, b) = e.family().compact();
    let pts: Vec<f64> = (0..AXIOM_GRID)
        .map(|i| a + (b - a) * i as f64 / (AXIOM_GRID - 1) as f64)
        .collect();
    let grid: Vec<(f64, f64)> = pts
        .iter()
        .flat_map(|&y| pts.iter().map(move |&m| (y, m)))
        .collect();
    let axioms = match check_unit_deviance(e.deviance(), &grid) {
        Ok(r) if r.passed() => Ok(r.checked),
        Ok(r) => Err(format!("{} axiom violations", r.violations.len())),
        Err(err) => Err(err.to_string()),
    };
    let mut worst: f64 = 0.0;
    let mut regularity = Ok(());
    for mu0 in e.family().interior_mu0_grid() {
        match check_regularity(e.deviance(), mu0) {
            Ok(r) => worst = worst.max(r.max_relative_gap),
            Err(err) => {
                regularity = Err(err.to_string());
                break;
            }
        }
    }
    match (axioms, regularity) {
        (Ok(n), Ok(())) => row(
            e,
            "deviance",
            CheckStatus::Pass,
            format!("{n} pairs; max regularity gap {}", fmt_num(worst)),
        ),
        (Err(msg), _) | (_, Err(msg)) => row(e, "deviance", CheckStatus::Fail, msg),
    }
}

fn check_derivatives(e: &CatalogEntry) -> VerifyRow {
    let mut worst: f64 = 0.0;
    for mu0 in e.family().interior_mu0_grid() {
        let d2 = e.d2(mu0);
        for (order, closed) in [(2, d2), (3, e.d3(mu0)), (4, e.d4(mu0))] {
            let scale = closed.abs().max(d2.powf(f64::from(order) / 2.0));
            match diagonal_derivative_fd(e.deviance(), mu0, order) {
                Ok(fd) => worst = worst.max((fd - closed).abs() / scale),
                Err(err) => {
                    return row(
                        e,
                        "derivatives",
                        CheckStatus::Fail,
                        format!("order {order} at {mu0}: {err}"),
                    )
                }
            }
        }
    }
    row(
        e,
        "derivatives",
        pass_fail(worst <= DERIVATIVE_TOLERANCE),
        format!("max relative gap {}", fmt_num(worst)),
    )
}

fn check_normalization(e: &CatalogEntry) -> VerifyRow {
    let mu0 = e.default_mu0();
    match normalization_integral(e, mu0, NORMALIZATION_SIGMA2) {
        Ok((value, _, converged)) => row(
            e,
            "normalization",
            pass_fail(converged && (value - 1.0).abs() <= NORMALIZATION_TOLERANCE),
            format!(
                "integral {} at sigma2 = {NORMALIZATION_SIGMA2}",
                fmt_num(value)
            ),
        ),
        Err(err) => row(e, "normalization", CheckStatus::Fail, err.to_string()),
    }
}

fn check_printed_table(e: &CatalogEntry) -> VerifyRow {
    let mu0 = e.default_mu0();
    match e.verify_against_printed_table(mu0, VERIFY_BETA) {
        Ok(c) => match c.status {
            TableStatus::Match => row(
                e,
                "printed_table",
                CheckStatus::Pass,
                format!("{} = {}", c.derived_formula, fmt_num(c.derived.value)),
            ),
            TableStatus::NotTabulated => row(
                e,
                "printed_table",
                CheckStatus::Pass,
                format!(
                    "not tabulated; derived constant {} = {}",
                    c.derived_formula,
                    fmt_num(c.derived.value)
                ),
            ),
            TableStatus::Discrepancy => row(
                e,
                "printed_table",
                CheckStatus::Discrepancy,
                format!(
                    "derived {} = {}; printed {} = {}",
                    c.derived_formula,
                    fmt_num(c.derived.value),
                    c.printed_formula.unwrap_or_default(),
                    c.printed_value.map(fmt_num).unwrap_or_default()
                ),
            ),
        },
        Err(err) => row(e, "printed_table", CheckStatus::Fail, err.to_string()),
    }
}

fn check_limit(e: &CatalogEntry) -> VerifyRow {
    let mu0 = e.default_mu0();
    let result = e.limit_constant(mu0, VERIFY_BETA).and_then(|c| {
        let scenario = AsymptoticScenario::new(c.k, VERIFY_BETA, 0.0, mu0, default_schedule())?;
        verify_limit(e, &scenario, DEFAULT_LIMIT_TOLERANCE)
    });
    match result {
        Ok(r) => row(
            e,
            "limit",
            pass_fail(r.converged),
            format!(
                "k = {}, beta = {VERIFY_BETA}: final ratio {} vs {}; relative gap {}",
                r.predicted.k,
                fmt_num(r.rows.last().map_or(f64::NAN, |x| x.ratio)),
                fmt_num(r.predicted.value),
                fmt_num(r.final_relative_gap)
            ),
        ),
        Err(err) => row(e, "limit", CheckStatus::Fail, err.to_string()),
    }
}
