//! Command-line interface: problem files in, JSON reports, CSV curve traces
//! and SVG figures out.
//!
//! Exit codes: 0 success, 1 input error, 2 no equipartition found,
//! 3 refutation (an equipartition exists), 4 grid too coarse.

pub mod problem;
pub mod report;
pub mod svg;

use std::ffi::OsString;
use std::io::{Read, Write};
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Parser, Subcommand};
use thiserror::Error;

use crate::certify::{
    build_arbitrary_4fan, build_fig1_4fan, build_gaussian_pair, build_polygon_2kfan, default_blob_radius,
    verify_with, CertifyError, Verdict, VerifyOptions,
};
use crate::geom::{fan_from_degrees, Vector2};
use crate::halving::{curve_point_in, CurveFrame, HalvingError};
use crate::measures::Measure;
use crate::solver::{check_theorem4_hypothesis, solve_equipartition, SolverError};

use problem::{Problem, ProblemFile};
use report::{CommandEcho, Diagnostic, Outcome, RunReport};

pub const FAMILIES: [&str; 4] = ["fig1", "polygon-2kfan", "arb4fan", "gaussian-pair"];

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{path}: {message}")]
    Input { path: String, message: String },
    #[error("{0}")]
    Io(String),
    #[error("{0}")]
    Run(String),
}

impl CliError {
    pub fn input(path: impl Into<String>, message: impl Into<String>) -> Self {
        CliError::Input { path: path.into(), message: message.into() }
    }
}

#[derive(Debug, Parser)]
#[command(name = "fan-sandwich", version, about = "Equipartition of two planar measures by a translated fan angle")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Search for a wedge that halves both measures.
    Solve {
        /// Problem file, or - for standard input.
        input: PathBuf,
        /// Root-finding tolerance; overrides options.tol.
        #[arg(long)]
        tol: Option<f64>,
        /// Output file instead of standard output.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Record wall-clock time in the report.
        #[arg(long)]
        timing: bool,
    },
    /// Certify that no wedge halves both measures, or find a witness.
    Certify {
        /// Problem file, or - for standard input.
        input: PathBuf,
        /// Finest grid cell side; overrides options.grid_step.
        #[arg(long)]
        grid_step: Option<f64>,
        /// Root-finding tolerance; overrides options.tol.
        #[arg(long)]
        tol: Option<f64>,
        /// Output file instead of standard output.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Record wall-clock time in the report.
        #[arg(long)]
        timing: bool,
    },
    /// Sample the halving curve of one measure for one wedge as CSV.
    Trace {
        /// Problem file, or - for standard input.
        input: PathBuf,
        /// Which measure, 1 or 2.
        #[arg(long, value_parser = clap::value_parser!(u8).range(1..=2))]
        measure: u8,
        /// Wedge index, 0-based.
        #[arg(long)]
        j: usize,
        #[arg(long, default_value_t = 101)]
        samples: usize,
        /// Output file instead of standard output.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Check that no line parallel to a fan ray halves both measures.
    Hypothesis {
        /// Problem file, or - for standard input.
        input: PathBuf,
        /// Root-finding tolerance; overrides options.tol.
        #[arg(long)]
        tol: Option<f64>,
        /// Output file instead of standard output.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Counterexample families.
    Examples {
        #[command(subcommand)]
        action: ExamplesAction,
    },
    /// Render a problem file or run report as SVG.
    Plot {
        /// Problem file or run report, or - for standard input.
        input: PathBuf,
        /// Output file instead of standard output.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Curve CSV from `trace` to overlay.
        #[arg(long)]
        curve: Option<PathBuf>,
    },
}

#[derive(Debug, Subcommand)]
enum ExamplesAction {
    /// Write a family's problem file.
    Build {
        /// One of fig1, polygon-2kfan, arb4fan, gaussian-pair.
        family: String,
        #[arg(long, default_value_t = 1.0)]
        scale: f64,
        /// Defaults to scale/200.
        #[arg(long)]
        blob_radius: Option<f64>,
        /// Half the number of rays for polygon-2kfan.
        #[arg(long, default_value_t = 2)]
        k: usize,
        /// Polar angles in degrees for arb4fan.
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true, default_value = "0,80,170,250")]
        angles: Vec<f64>,
        /// Output file instead of standard output.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

/// Runs the command line `args` (program name first) and returns the exit
/// code.
pub fn run<I, T>(args: I, stdin: &mut dyn Read, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let text = e.render().to_string();
            return if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                let _ = write!(stdout, "{text}");
                0
            } else {
                let _ = write!(stderr, "{text}");
                1
            };
        }
    };
    match dispatch(cli.command, stdin, stdout, stderr) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            1
        }
    }
}

fn dispatch(cmd: Command, stdin: &mut dyn Read, stdout: &mut dyn Write, stderr: &mut dyn Write) -> Result<i32, CliError> {
    match cmd {
        Command::Solve { input, tol, out, timing } => {
            let (file, problem) = load_problem(&input, stdin)?;
            let tol = tol.unwrap_or(problem.tol);
            let start = Instant::now();
            let outcome = match solve_equipartition(&problem.fan, &problem.m1, &problem.m2, tol) {
                Ok(r) => Outcome::Result(r),
                Err(SolverError::NoEquipartitionFound(d)) => {
                    writeln!(stderr, "no equipartition found: {}", d.message).map_err(io)?;
                    Outcome::Diagnostic(Diagnostic::NoEquipartition(*d))
                }
                Err(e) => return Err(CliError::Run(e.to_string())),
            };
            let echo = CommandEcho { name: "solve".into(), tol, grid_step: None, problem: file };
            finish_report(echo, outcome, timing.then(|| start.elapsed().as_secs_f64()), out.as_deref(), stdout)
        }
        Command::Certify { input, grid_step, tol, out, timing } => {
            let (file, problem) = load_problem(&input, stdin)?;
            let tol = tol.unwrap_or(problem.tol);
            let grid_step = grid_step.unwrap_or(problem.grid_step);
            let start = Instant::now();
            let opts = VerifyOptions::new(grid_step, tol);
            let outcome = match verify_with(&problem.fan, &problem.m1, &problem.m2, &opts) {
                Ok(Verdict::Certificate(c)) => Outcome::Certificate(c),
                Ok(Verdict::Refutation(r)) => {
                    writeln!(stderr, "refuted: wedge {} at ({}, {}) halves both measures", r.j, r.t.x, r.t.y).map_err(io)?;
                    Outcome::Refutation(r)
                }
                Err(CertifyError::GridTooCoarse { indices, bound, grid_step }) => {
                    writeln!(stderr, "grid too coarse: certified bound {bound} at grid_step {grid_step}; refine").map_err(io)?;
                    Outcome::Diagnostic(Diagnostic::GridTooCoarse { indices, bound, grid_step })
                }
                Err(e @ CertifyError::InvalidParameter(_)) => return Err(CliError::input("--grid-step", e.to_string())),
                Err(e @ CertifyError::UnsupportedMeasure { index }) => {
                    return Err(CliError::input(format!("measures[{index}]"), e.to_string()))
                }
                Err(e) => return Err(CliError::Run(e.to_string())),
            };
            let echo = CommandEcho { name: "certify".into(), tol, grid_step: Some(grid_step), problem: file };
            finish_report(echo, outcome, timing.then(|| start.elapsed().as_secs_f64()), out.as_deref(), stdout)
        }
        Command::Trace { input, measure, j, samples, out } => {
            let (_, problem) = load_problem(&input, stdin)?;
            let m = if measure == 1 { &problem.m1 } else { &problem.m2 };
            let csv = trace_csv(&problem, m, j, samples, stderr)?;
            emit(csv.as_bytes(), out.as_deref(), stdout)?;
            Ok(0)
        }
        Command::Hypothesis { input, tol, out } => {
            let (file, problem) = load_problem(&input, stdin)?;
            let tol = tol.unwrap_or(problem.tol);
            let r = check_theorem4_hypothesis(&problem.fan, &problem.m1, &problem.m2, tol);
            if !r.holds {
                writeln!(stderr, "hypothesis fails for directions {:?} (min gap {})", r.violating, r.min_gap).map_err(io)?;
            }
            let echo = CommandEcho { name: "hypothesis".into(), tol, grid_step: None, problem: file };
            finish_report(echo, Outcome::Hypothesis(r), None, out.as_deref(), stdout)
        }
        Command::Examples { action: ExamplesAction::Build { family, scale, blob_radius, k, angles, out } } => {
            let file = build_example(&family, scale, blob_radius, k, &angles)?;
            emit(format!("{}\n", file.to_json()).as_bytes(), out.as_deref(), stdout)?;
            Ok(0)
        }
        Command::Plot { input, out, curve } => {
            let text = read_input(&input, stdin)?;
            let (file, solution) = match RunReport::parse(&text) {
                Ok(report) => {
                    let solution = report.solution();
                    (report.command.problem, solution)
                }
                Err(_) => (ProblemFile::parse(&text)?, None),
            };
            let problem = file.build()?;
            let curve = match curve {
                Some(p) => Some(read_curve(&p)?),
                None => None,
            };
            let svg = svg::render(
                &problem.fan,
                &problem.m1,
                &problem.m2,
                solution.map(|(j, t)| (j, t.into())),
                curve.as_deref(),
            );
            emit(svg.as_bytes(), out.as_deref(), stdout)?;
            Ok(0)
        }
    }
}

fn io(e: std::io::Error) -> CliError {
    CliError::Io(e.to_string())
}

fn read_input(path: &Path, stdin: &mut dyn Read) -> Result<String, CliError> {
    if path == Path::new("-") {
        let mut s = String::new();
        stdin.read_to_string(&mut s).map_err(io)?;
        Ok(s)
    } else {
        std::fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
    }
}

fn load_problem(path: &Path, stdin: &mut dyn Read) -> Result<(ProblemFile, Problem), CliError> {
    let file = ProblemFile::parse(&read_input(path, stdin)?)?;
    let problem = file.build()?;
    Ok((file, problem))
}

fn emit(bytes: &[u8], out: Option<&Path>, stdout: &mut dyn Write) -> Result<(), CliError> {
    match out {
        Some(p) => std::fs::write(p, bytes).map_err(|e| CliError::Io(format!("{}: {e}", p.display()))),
        None => stdout.write_all(bytes).map_err(io),
    }
}

fn finish_report(
    echo: CommandEcho,
    outcome: Outcome,
    timing: Option<f64>,
    out: Option<&Path>,
    stdout: &mut dyn Write,
) -> Result<i32, CliError> {
    let mut report = RunReport::new(echo, outcome);
    report.timing = timing;
    emit(format!("{}\n", report.to_json()).as_bytes(), out, stdout)?;
    Ok(report.exit_code())
}

/// Samples the halving curve at `n` evenly spaced `s` in `c·u ± 10R`,
/// where `c` and `R` are the center and radius of the measure's support.
pub fn trace_rows(m: &Measure, problem: &Problem, j: usize, n: usize) -> Result<Vec<[f64; 4]>, CliError> {
    if j >= problem.fan.len() {
        return Err(CliError::input("--j", format!("wedge index {j} out of range for a {}-fan", problem.fan.len())));
    }
    if n == 0 {
        return Err(CliError::input("--samples", "need at least one sample"));
    }
    let frame = CurveFrame::new(&problem.fan, j).map_err(|e| CliError::input("--j", e.to_string()))?;
    let sb = m.support_bounds();
    let mid = sb.center.dot(frame.u);
    let half = 10.0 * sb.radius;
    let tol = problem.tol.min(1e-10);
    (0..n)
        .map(|i| {
            let s = if n == 1 { mid } else { mid - half + 2.0 * half * i as f64 / (n - 1) as f64 };
            match curve_point_in(m, &frame, s, tol) {
                Ok(p) => Ok([s, p.apex.x, p.apex.y, p.mass_check]),
                Err(HalvingError::NoBracket { .. }) => Ok([s, f64::NAN, f64::NAN, f64::NAN]),
                Err(e) => Err(CliError::Run(e.to_string())),
            }
        })
        .collect()
}

fn trace_csv(problem: &Problem, m: &Measure, j: usize, n: usize, stderr: &mut dyn Write) -> Result<String, CliError> {
    let rows = trace_rows(m, problem, j, n)?;
    let failed = rows.iter().filter(|r| r[1].is_nan()).count();
    if failed > 0 {
        writeln!(stderr, "warning: {failed} of {n} samples found no bracket; their rows are NaN").map_err(io)?;
    }
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["s", "apex_x", "apex_y", "mass_check"]).map_err(|e| CliError::Io(e.to_string()))?;
    for r in rows {
        w.write_record(r.iter().map(|x| format!("{x:?}"))).map_err(|e| CliError::Io(e.to_string()))?;
    }
    let bytes = w.into_inner().map_err(|e| CliError::Io(e.to_string()))?;
    Ok(String::from_utf8(bytes).expect("csv output is ASCII"))
}

fn read_curve(path: &Path) -> Result<Vec<Vector2>, CliError> {
    let mut r = csv::Reader::from_path(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
    let mut pts = Vec::new();
    for (i, rec) in r.deserialize::<(f64, f64, f64, f64)>().enumerate() {
        let (_, x, y, _) = rec.map_err(|e| CliError::input(format!("{}:row {}", path.display(), i + 1), e.to_string()))?;
        pts.push(Vector2::new(x, y));
    }
    Ok(pts)
}

pub fn build_example(family: &str, scale: f64, blob_radius: Option<f64>, k: usize, angles: &[f64]) -> Result<ProblemFile, CliError> {
    let r = blob_radius.unwrap_or_else(|| default_blob_radius(scale));
    let fail = |e: CertifyError| CliError::input(family.to_string(), e.to_string());
    let cfg = match family {
        "fig1" => build_fig1_4fan(scale, r).map_err(fail)?,
        "polygon-2kfan" => build_polygon_2kfan(k, scale, r).map_err(fail)?,
        "arb4fan" => {
            let fan = fan_from_degrees(angles).map_err(|e| CliError::input("--angles", e.to_string()))?;
            build_arbitrary_4fan(&fan, scale, r).map_err(fail)?
        }
        "gaussian-pair" => build_gaussian_pair(),
        other => {
            return Err(CliError::input(
                "family",
                format!("unknown family '{other}'; known families: {}", FAMILIES.join(", ")),
            ))
        }
    };
    Ok(ProblemFile::from_config(&cfg))
}
