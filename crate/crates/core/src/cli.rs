//! `hfgeo` command dispatch.
//!
//! Exit codes: 0 success, 1 a check ran and failed, 2 bad input or usage.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::document::{parse_spec, LoadedSpec};
use crate::error::{Error, Result};
use crate::geodesic::ResidualSource;
use crate::lie::AlgebraVector;
use crate::oracle::{audit_closed_forms, OracleScheme};
use crate::report::{EquivalencePayload, Payload, RunReport, ValidatePayload};

pub const EXIT_OK: i32 = 0;
pub const EXIT_CHECK_FAILED: i32 = 1;
pub const EXIT_INPUT: i32 = 2;

#[derive(Debug, Parser)]
#[command(
    name = "hfgeo",
    version,
    about = "Geodesic vectors of homogeneous Finsler spaces"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct Common {
    /// Input document (JSON).
    spec: PathBuf,
    /// Write the JSON report here.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Omit wall time so reports are byte-identical across runs.
    #[arg(long)]
    no_timing: bool,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum SourceArg {
    ClosedForm,
    Oracle,
    Riemannian,
}

impl From<SourceArg> for ResidualSource {
    fn from(s: SourceArg) -> Self {
        match s {
            SourceArg::ClosedForm => ResidualSource::ClosedForm,
            SourceArg::Oracle => ResidualSource::Oracle,
            SourceArg::Riemannian => ResidualSource::Riemannian,
        }
    }
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum SchemeArg {
    DualNumber,
    CentralDifference,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Load and validate a document.
    Validate {
        #[command(flatten)]
        common: Common,
    },
    /// Shen's condition on a grid.
    Shen {
        #[command(flatten)]
        common: Common,
        /// `b` to test; defaults to ‖X‖.
        #[arg(long)]
        b: Option<f64>,
        #[arg(long, default_value_t = 10_001)]
        grid: usize,
    },
    /// Compare the printed closed-form tensor against the oracle.
    Audit {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value_t = 200)]
        samples: usize,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long, value_enum)]
        scheme: Option<SchemeArg>,
        /// Central-difference step (implies `--scheme central-difference`).
        #[arg(long)]
        step: Option<f64>,
    },
    /// Decide whether one vector of g is a geodesic vector.
    CheckVector {
        #[command(flatten)]
        common: Common,
        /// Comma-separated coordinates in the basis of g.
        #[arg(long, allow_hyphen_values = true)]
        y: String,
        #[arg(long, value_enum)]
        source: Option<SourceArg>,
        #[arg(long)]
        tol: Option<f64>,
    },
    /// Search for geodesic vectors from random seeds.
    Search {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value_t = 32)]
        seeds: usize,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long, value_enum)]
        source: Option<SourceArg>,
        #[arg(long)]
        tol: Option<f64>,
    },
    /// Estimate how many directions of m are projections of geodesic vectors.
    GoCheck {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value_t = 200)]
        directions: usize,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long, value_enum)]
        source: Option<SourceArg>,
        #[arg(long)]
        tol: Option<f64>,
    },
    /// Riemannian vs Finsler geodesic status at X and, with `--y`, at y.
    Equivalence {
        #[command(flatten)]
        common: Common,
        #[arg(long, allow_hyphen_values = true)]
        y: Option<String>,
        #[arg(long)]
        tol: Option<f64>,
    },
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Validate { .. } => "validate",
            Command::Shen { .. } => "shen",
            Command::Audit { .. } => "audit",
            Command::CheckVector { .. } => "check-vector",
            Command::Search { .. } => "search",
            Command::GoCheck { .. } => "go-check",
            Command::Equivalence { .. } => "equivalence",
        }
    }

    fn common(&self) -> &Common {
        match self {
            Command::Validate { common }
            | Command::Shen { common, .. }
            | Command::Audit { common, .. }
            | Command::CheckVector { common, .. }
            | Command::Search { common, .. }
            | Command::GoCheck { common, .. }
            | Command::Equivalence { common, .. } => common,
        }
    }
}

/// Result of one invocation.
#[derive(Debug)]
pub struct Outcome {
    pub exit_code: i32,
    pub report: Option<RunReport>,
}

fn parse_vector(raw: &str, dim: usize) -> Result<AlgebraVector> {
    let coords = raw
        .split(',')
        .map(|t| {
            t.trim()
                .parse::<f64>()
                .map_err(|_| Error::input(format!("--y: cannot parse {t:?} as a number")))
        })
        .collect::<Result<Vec<_>>>()?;
    if coords.len() != dim {
        return Err(Error::input(format!(
            "--y: expected {dim} coordinates, got {}",
            coords.len()
        )));
    }
    AlgebraVector::new(coords)
}

fn yes_no(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

/// Runs `hfgeo` with `argv` (including the program name). The human
/// summary goes to `out`, diagnostics to `err`.
pub fn run_command<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{e}");
                    EXIT_OK
                }
                _ => {
                    let _ = write!(err, "{e}");
                    EXIT_INPUT
                }
            };
            return Outcome {
                exit_code: code,
                report: None,
            };
        }
    };
    match execute(&cli.command, out) {
        Ok((exit_code, report)) => {
            if let Some(path) = &cli.command.common().out {
                if let Err(e) = report.write(path) {
                    let _ = writeln!(err, "error: {e}");
                    return Outcome {
                        exit_code: EXIT_INPUT,
                        report: Some(report),
                    };
                }
            }
            Outcome {
                exit_code,
                report: Some(report),
            }
        }
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            Outcome {
                exit_code: EXIT_INPUT,
                report: None,
            }
        }
    }
}

fn execute(cmd: &Command, out: &mut dyn Write) -> Result<(i32, RunReport)> {
    let common = cmd.common();
    let loaded = parse_spec(&common.spec)?;
    let start = Instant::now();
    let (code, payload) = dispatch(cmd, &loaded, out)?;
    let elapsed = start.elapsed().as_secs_f64() * 1e3;
    let report = RunReport {
        command: cmd.name().to_string(),
        toolkit_version: crate::VERSION.to_string(),
        inputs_digest: loaded.digest.clone(),
        wall_time_ms: (!common.no_timing).then_some(elapsed),
        payload,
    };
    Ok((code, report))
}

fn pick_source(loaded: &LoadedSpec, flag: Option<SourceArg>) -> ResidualSource {
    flag.map(Into::into)
        .unwrap_or_else(|| loaded.space.default_source())
}

fn dispatch(cmd: &Command, loaded: &LoadedSpec, out: &mut dyn Write) -> Result<(i32, Payload)> {
    let space = &loaded.space;
    let opts = &loaded.options;
    let w = |out: &mut dyn Write, s: String| {
        let _ = writeln!(out, "{s}");
    };
    match cmd {
        Command::Validate { .. } => {
            let metric = space.metric();
            let shen = metric.shen_check(metric.b(), 10_001)?;
            let invariance = space.invariance(opts.jacobi_tol);
            let payload = ValidatePayload {
                dim: space.dim(),
                h_dim: space.split().h_indices().len(),
                m_dim: space.split().m_dim(),
                metric: metric.kind().name().to_string(),
                b: metric.b(),
                b0: metric.b0(),
                structure: space.structure().clone(),
                invariance,
                shen,
                default_source: space.default_source(),
            };
            w(
                out,
                format!(
                    "algebra: dim {}, h {}, m {}; metric {} with b = {}",
                    payload.dim, payload.h_dim, payload.m_dim, payload.metric, payload.b
                ),
            );
            w(
                out,
                format!("structure checks: pass (tol {:e})", payload.structure.tol),
            );
            w(
                out,
                format!(
                    "Ad(H)-invariance: {} (skew {:e}, X {:e})",
                    if payload.invariance.pass {
                        "pass"
                    } else {
                        "FAIL"
                    },
                    payload.invariance.skew_residual,
                    payload.invariance.x_residual
                ),
            );
            w(
                out,
                format!(
                    "Shen at b: {} (min E = {})",
                    if payload.shen.pass { "pass" } else { "FAIL" },
                    payload.shen.min_e
                ),
            );
            let ok = payload.invariance.pass && payload.shen.pass;
            Ok((exit(ok), Payload::Validate(payload)))
        }
        Command::Shen { b, grid, .. } => {
            let b = b.unwrap_or_else(|| space.metric().b());
            let r = space.metric().shen_check(b, *grid)?;
            w(out, format!(
                "Shen's condition for {} at b = {}: {} (min E = {} at s = {}, {} points on [{}, {}])",
                r.metric,
                r.b,
                if r.pass { "pass" } else { "FAIL" },
                r.min_e,
                r.argmin_s,
                r.n_grid,
                r.interval[0],
                r.interval[1]
            ));
            Ok((exit(r.pass), Payload::Shen(r)))
        }
        Command::Audit {
            samples,
            seed,
            scheme,
            step,
            ..
        } => {
            let scheme = match (scheme, step) {
                (Some(SchemeArg::DualNumber), Some(_)) => {
                    return Err(Error::input(
                        "--step requires the central-difference scheme",
                    ))
                }
                (Some(SchemeArg::DualNumber), None) => OracleScheme::DualNumber,
                (Some(SchemeArg::CentralDifference), s) | (None, s @ Some(_)) => {
                    OracleScheme::central(*s)?
                }
                (None, None) => opts.oracle,
            };
            let seed = seed.unwrap_or(opts.seed);
            let r = audit_closed_forms(space.metric(), *samples, seed, scheme)?;
            w(out, format!(
                "{} closed form vs {} oracle over {} samples (seed {}): max rel discrepancy {:e}, max abs {:e}",
                r.metric,
                r.scheme.name(),
                r.samples,
                r.seed,
                r.max_rel_discrepancy,
                r.max_abs_discrepancy
            ));
            w(
                out,
                format!(
                    "agreement within {:e}: {}; worst sample #{}",
                    r.agreement_tol,
                    yes_no(r.agrees),
                    r.worst_case.index
                ),
            );
            Ok((exit(r.agrees), Payload::Audit(r)))
        }
        Command::CheckVector { y, source, tol, .. } => {
            let y = parse_vector(y, space.dim())?;
            let source = pick_source(loaded, *source);
            let tol = tol.unwrap_or_else(|| opts.criterion_tol_for(source));
            let r = space.check_vector(&y, tol, source)?;
            w(
                out,
                format!(
                    "y = {}: residual {:e} vs threshold {:e} (source {}): {}",
                    r.y,
                    r.residual.norm,
                    r.threshold,
                    source.name(),
                    if r.geodesic {
                        "geodesic"
                    } else {
                        "not geodesic"
                    }
                ),
            );
            Ok((EXIT_OK, Payload::CheckVector(r)))
        }
        Command::Search {
            seeds,
            seed,
            source,
            tol,
            ..
        } => {
            let source = pick_source(loaded, *source);
            let tol = tol.unwrap_or_else(|| opts.criterion_tol_for(source));
            let seed = seed.unwrap_or(opts.seed);
            let r = space.find_geodesic_vectors(*seeds, seed, tol, source)?;
            let conv = r.candidates.iter().filter(|c| c.converged).count();
            w(
                out,
                format!(
                    "{conv} of {} seeds converged (source {}, tol {:e}); {} distinct solutions",
                    r.n_seeds,
                    source.name(),
                    tol,
                    r.distinct_count
                ),
            );
            for &i in r.distinct_indices.iter().take(10) {
                let c = &r.candidates[i];
                w(out, format!("  {}  residual {:e}", c.y, c.residual_norm));
            }
            Ok((EXIT_OK, Payload::Search(r)))
        }
        Command::GoCheck {
            directions,
            seed,
            source,
            tol,
            ..
        } => {
            let source = pick_source(loaded, *source);
            let tol = tol.unwrap_or_else(|| opts.criterion_tol_for(source));
            let seed = seed.unwrap_or(opts.seed);
            let r = space.go_coverage(*directions, seed, tol, source)?;
            w(
                out,
                format!(
                    "{} of {} directions covered (ratio {}, source {}, tol {:e})",
                    r.directions_covered,
                    r.directions_sampled,
                    r.coverage_ratio,
                    source.name(),
                    tol
                ),
            );
            Ok((EXIT_OK, Payload::GoCheck(r)))
        }
        Command::Equivalence { y, tol, .. } => {
            let tol = tol.unwrap_or_else(|| opts.criterion_tol_for(ResidualSource::Oracle));
            let corollary = match y {
                Some(raw) => {
                    let y = parse_vector(raw, space.dim())?;
                    Some(space.corollary_equivalence_check(&y, tol)?)
                }
                None => None,
            };
            let (theorem_x, theorem_x_skipped) = match space.theorem_x_check(tol) {
                Ok(r) => (Some(r), None),
                Err(Error::Domain(m)) => (None, Some(m)),
                Err(e) => return Err(e),
            };
            let mut ok = true;
            if let Some(r) = &corollary {
                w(
                    out,
                    format!(
                    "corollary at y = {}: hypothesis {} (residual {:e}); riemannian {}, finsler {}",
                    r.y,
                    if r.hypothesis_holds { "holds" } else { "fails" },
                    r.hypothesis_residual.unwrap_or(f64::NAN),
                    yes_no(r.riemannian_geodesic),
                    yes_no(r.finsler_geodesic)
                ),
                );
                ok &= r.equivalence_respected != Some(false);
            }
            match (&theorem_x, &theorem_x_skipped) {
                (Some(r), _) => {
                    w(
                        out,
                        format!(
                            "X = {}: riemannian {}, finsler {}; equivalence {}",
                            r.y,
                            yes_no(r.riemannian_geodesic),
                            yes_no(r.finsler_geodesic),
                            if r.equivalence_respected == Some(true) {
                                "holds"
                            } else {
                                "VIOLATED"
                            }
                        ),
                    );
                    ok &= r.equivalence_respected == Some(true);
                }
                (None, Some(m)) => w(out, format!("X check skipped: {m}")),
                (None, None) => {}
            }
            let payload = EquivalencePayload {
                corollary,
                theorem_x,
                theorem_x_skipped,
            };
            Ok((exit(ok), Payload::Equivalence(payload)))
        }
    }
}

fn exit(ok: bool) -> i32 {
    if ok {
        EXIT_OK
    } else {
        EXIT_CHECK_FAILED
    }
}
