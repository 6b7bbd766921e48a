//! The `cas` command line: `generate`, `verify` and `examples`.
//!
//! Exit codes: 0 success, 1 a verification check failed, 2 invalid
//! configuration, 3 a domain error while sampling (singular edge, profile
//! domain, projection pole), 4 an I/O failure. Every error is reported as a
//! single `error: <field>: <reason>` line on stderr.

mod config;

use std::ffi::OsString;
use std::fmt;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::error::{ContextKind, ContextValue, ErrorKind};
use clap::{Args, Parser, Subcommand};
use serde::Serialize;

pub use config::{parse_range, Resolved, RunConfig};

use crate::error::Error;
use crate::generators::worked_example;
use crate::geom::Tolerances;
use crate::mesh::{project4d, report_csv, sample_grid, write_atomic, write_csv, write_obj, Mesh};
use crate::verify::{run_suite, GridSpec, SuiteReport};

pub const EXIT_OK: i32 = 0;
pub const EXIT_CHECK_FAILED: i32 = 1;
pub const EXIT_CONFIG: i32 = 2;
pub const EXIT_DOMAIN: i32 = 3;
pub const EXIT_IO: i32 = 4;

/// File name of the combined report written by `examples`.
pub const EXAMPLES_REPORT: &str = "examples_report.json";

#[derive(Debug, Parser)]
#[command(
    name = "cas",
    version,
    about = "Constant angle surfaces: generate meshes, verify identities, rebuild the worked examples"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Sample a chart and write OBJ and CSV meshes
    Generate(RunConfig),
    /// Run the verification suite and print the JSON report
    Verify(RunConfig),
    /// Rebuild the four worked examples with a combined report
    Examples(ExamplesArgs),
}

#[derive(Debug, Args)]
struct ExamplesArgs {
    /// 1, 2, 3, 4 or all
    which: String,
    #[arg(long, default_value = ".")]
    out_dir: PathBuf,
    #[arg(long)]
    nu: Option<usize>,
    #[arg(long)]
    nv: Option<usize>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CliError {
    pub field: String,
    pub reason: String,
    pub code: i32,
}

impl CliError {
    pub fn new(field: impl Into<String>, reason: impl Into<String>, code: i32) -> Self {
        let reason: String = reason.into();
        let reason = reason.lines().map(str::trim).filter(|l| !l.is_empty()).collect::<Vec<_>>().join("; ");
        CliError { field: field.into(), reason, code }
    }

    pub fn config(field: &str, reason: String) -> Self {
        CliError::new(field, reason, EXIT_CONFIG)
    }

    /// Classifies a library error raised while doing the work.
    fn runtime(field: &str, e: Error) -> Self {
        match e {
            Error::PoleInRange { .. } => CliError::new("project", e.to_string(), EXIT_DOMAIN),
            Error::SingularPoint { .. }
            | Error::OutOfDomain { .. }
            | Error::DegeneratePoint { .. }
            | Error::EmptyGrid => CliError::new("grid", e.to_string(), EXIT_DOMAIN),
            Error::Io(_) | Error::Csv { .. } => CliError::new(field, e.to_string(), EXIT_IO),
            _ => CliError::new(field, e.to_string(), EXIT_CONFIG),
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "error: {}: {}", self.field, self.reason)
    }
}

fn from_clap(e: &clap::Error) -> CliError {
    let field = match e.get(ContextKind::InvalidArg) {
        Some(ContextValue::String(arg)) => {
            arg.trim_start_matches('-').split([' ', '=']).next().unwrap_or("args").to_string()
        }
        _ => match e.kind() {
            ErrorKind::InvalidSubcommand | ErrorKind::MissingSubcommand => "command".to_string(),
            _ => "args".to_string(),
        },
    };
    let rendered = e.render().to_string();
    let first = rendered.lines().next().unwrap_or("invalid arguments").trim_start_matches("error: ").to_string();
    CliError::config(&field, first)
}

/// Runs the CLI on `args` (including the program name) and returns the
/// exit code.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e)
            if matches!(
                e.kind(),
                ErrorKind::DisplayHelp
                    | ErrorKind::DisplayVersion
                    | ErrorKind::DisplayHelpOnMissingArgumentOrSubcommand
            ) =>
        {
            let _ = write!(stdout, "{}", e.render());
            return if e.kind() == ErrorKind::DisplayHelpOnMissingArgumentOrSubcommand { EXIT_CONFIG } else { EXIT_OK };
        }
        Err(e) => {
            let _ = writeln!(stderr, "{}", from_clap(&e));
            return EXIT_CONFIG;
        }
    };
    let result = match cli.command {
        Command::Generate(cfg) => cmd_generate(cfg, stdout),
        Command::Verify(cfg) => cmd_verify(cfg, stdout),
        Command::Examples(args) => cmd_examples(&args, stdout),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(stderr, "{e}");
            e.code
        }
    }
}

fn io_err(field: &str, e: std::io::Error) -> CliError {
    CliError::new(field, e.to_string(), EXIT_IO)
}

/// Writes `<stem>.obj` and `<stem>.csv`; 4D meshes are projected for the
/// OBJ and kept whole in the CSV.
fn write_mesh_pair(
    mesh: &Mesh,
    stem: &Path,
    resolved_project: crate::mesh::Projection,
) -> Result<Vec<PathBuf>, CliError> {
    let obj = stem.with_extension("obj");
    let csv = stem.with_extension("csv");
    let viewable = if mesh.dim == 4 {
        project4d(mesh, resolved_project).map_err(|e| CliError::runtime("project", e))?
    } else {
        mesh.clone()
    };
    write_obj(&viewable, &obj).map_err(|e| CliError::runtime("out", e))?;
    write_csv(mesh, &csv).map_err(|e| CliError::runtime("out", e))?;
    Ok(vec![obj, csv])
}

fn cmd_generate(cfg: RunConfig, stdout: &mut dyn Write) -> Result<i32, CliError> {
    let cfg = cfg.merged()?;
    let run = cfg.resolve()?;
    let out = run.out.clone().ok_or_else(|| CliError::config("out", "required".to_string()))?;
    let mesh = sample_grid(&run.chart, &run.grid).map_err(|e| CliError::runtime("grid", e))?;
    for path in write_mesh_pair(&mesh, &out, run.project)? {
        writeln!(stdout, "wrote {}", path.display()).map_err(|e| io_err("stdout", e))?;
    }
    Ok(EXIT_OK)
}

fn write_report(report: &SuiteReport, path: &Path) -> Result<(), CliError> {
    let bytes = if path.extension().is_some_and(|e| e == "csv") {
        report_csv(report).map_err(|e| CliError::runtime("report", e))?
    } else {
        let mut json = report.to_json();
        json.push('\n');
        json.into_bytes()
    };
    write_atomic(path, &bytes).map_err(|e| CliError::runtime("report", e))
}

fn cmd_verify(cfg: RunConfig, stdout: &mut dyn Write) -> Result<i32, CliError> {
    let cfg = cfg.merged()?;
    let run = cfg.resolve()?;
    let report = run_suite(&run.chart, &run.grid, &run.tols);
    if let Some(path) = &run.report {
        write_report(&report, path)?;
    }
    writeln!(stdout, "{}", report.to_json()).map_err(|e| io_err("stdout", e))?;
    Ok(if report.pass { EXIT_OK } else { EXIT_CHECK_FAILED })
}

#[derive(Serialize)]
struct ExamplesReport<'a> {
    examples: Vec<ExampleEntry<'a>>,
    pass: bool,
}

#[derive(Serialize)]
struct ExampleEntry<'a> {
    example: u32,
    obj: String,
    csv: String,
    report: &'a SuiteReport,
}

fn cmd_examples(args: &ExamplesArgs, stdout: &mut dyn Write) -> Result<i32, CliError> {
    let which: Vec<u32> = match args.which.as_str() {
        "all" => vec![1, 2, 3, 4],
        s => match s.parse::<u32>() {
            Ok(n) if (1..=4).contains(&n) => vec![n],
            _ => return Err(CliError::config("example", format!("unknown example `{s}` (expected 1|2|3|4|all)"))),
        },
    };
    let base = GridSpec::default();
    let grid = GridSpec { nu: args.nu.unwrap_or(base.nu), nv: args.nv.unwrap_or(base.nv), ..base };
    grid.validate().map_err(|e| CliError::config("grid", e.to_string()))?;
    std::fs::create_dir_all(&args.out_dir).map_err(|e| io_err("out-dir", e))?;

    let tols = Tolerances::default();
    let mut written = Vec::new();
    let mut reports = Vec::new();
    for &n in &which {
        let chart = worked_example(n).map_err(|e| CliError::config("example", e.to_string()))?;
        let mesh = sample_grid(&chart, &grid).map_err(|e| CliError::runtime("grid", e))?;
        let paths = write_mesh_pair(&mesh, &args.out_dir.join(format!("ex{n}")), crate::mesh::Projection::DropT)?;
        reports.push((n, paths.clone(), run_suite(&chart, &grid, &tols)));
        written.extend(paths);
    }
    let pass = reports.iter().all(|r| r.2.pass);
    let file_name = |p: &Path| p.file_name().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
    let combined = ExamplesReport {
        examples: reports
            .iter()
            .map(|(n, paths, report)| ExampleEntry {
                example: *n,
                obj: file_name(&paths[0]),
                csv: file_name(&paths[1]),
                report,
            })
            .collect(),
        pass,
    };
    let report_path = args.out_dir.join(EXAMPLES_REPORT);
    let mut json = serde_json::to_string_pretty(&combined).expect("report serializes");
    json.push('\n');
    write_atomic(&report_path, json.as_bytes()).map_err(|e| CliError::runtime("out-dir", e))?;
    written.push(report_path);

    for path in &written {
        writeln!(stdout, "wrote {}", path.display()).map_err(|e| io_err("stdout", e))?;
    }
    for (n, _, report) in &reports {
        let status = if report.pass { "pass" } else { "FAIL" };
        writeln!(stdout, "example {n}: {status}").map_err(|e| io_err("stdout", e))?;
    }
    Ok(if pass { EXIT_OK } else { EXIT_CHECK_FAILED })
}
