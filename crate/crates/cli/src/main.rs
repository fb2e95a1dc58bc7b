//! Command-line front end for the simulability decision engine.
//!
//! Exit codes: 0 = simulable (or success for non-decide commands),
//! 1 = not simulable, 2 = usage or parse error, 3 = computation error
//! (budget exceeded, oracle disagreement, invalid instance).

mod instance_file;
mod report;

use std::path::PathBuf;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use sha2::{Digest, Sha256};

use symsim_core::{
    central_spin_qubit, commutant, coupling_pattern, decide, decompose, example_fixture_qubit,
    lie_closure, oracle_verdict, quadratic_commutant, quadratic_commutant_dims, CouplingCase,
    EngineOptions, FixtureName, OracleReport, ProblemInstance, QubitInstance, RankMode,
    RankOptions, Rational, SymmetryKind, Verdict,
};

use instance_file::{parse_instance_file, render_qubit_instance, ParsedInstance};
use report::OutputFormat;

const EXIT_SIMULABLE: i32 = 0;
const EXIT_NOT_SIMULABLE: i32 = 1;
const EXIT_USAGE: i32 = 2;
const EXIT_COMPUTE: i32 = 3;

#[derive(Parser)]
#[command(
    name = "symsim",
    version,
    about = "Decide whether target Hamiltonians can be simulated by a set of control Hamiltonians"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ModeArg {
    Exact,
    Modular,
    Auto,
}

impl From<ModeArg> for RankMode {
    fn from(m: ModeArg) -> Self {
        match m {
            ModeArg::Exact => RankMode::Exact,
            ModeArg::Modular => RankMode::Modular,
            ModeArg::Auto => RankMode::Auto,
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum FormatArg {
    Human,
    Json,
}

impl From<FormatArg> for OutputFormat {
    fn from(f: FormatArg) -> Self {
        match f {
            FormatArg::Human => OutputFormat::Human,
            FormatArg::Json => OutputFormat::Json,
        }
    }
}

#[derive(Args)]
struct CommonOpts {
    /// Rank arithmetic: exact, modular (Monte-Carlo), or size-based auto.
    #[arg(long, value_enum, default_value = "auto")]
    mode: ModeArg,
    /// Cell-count threshold where auto mode switches to modular ranks.
    #[arg(long, default_value_t = symsim_core::DEFAULT_AUTO_THRESHOLD_CELLS)]
    threshold: usize,
    /// Seed for the modular path's randomness (reproducible runs).
    #[arg(long)]
    seed: Option<u64>,
    /// Output format.
    #[arg(long, value_enum, default_value = "human")]
    format: FormatArg,
}

impl CommonOpts {
    fn rank_options(&self) -> RankOptions {
        RankOptions {
            mode: self.mode.into(),
            auto_threshold_cells: self.threshold,
            seed: self.seed,
        }
    }

    fn mode_name(&self) -> &'static str {
        match self.mode {
            ModeArg::Exact => "exact",
            ModeArg::Modular => "modular",
            ModeArg::Auto => "auto",
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Decide whether the targets Q of an instance file can be simulated by
    /// its controls P.
    Decide {
        /// Instance file path.
        path: PathBuf,
        #[command(flatten)]
        common: CommonOpts,
        /// Cross-check the verdict against the brute-force Lie closure and
        /// fail (exit 3) on disagreement.
        #[arg(long)]
        oracle: bool,
        /// Dimension budget for the oracle closure.
        #[arg(long)]
        max_dim: Option<usize>,
        /// Evaluate condition (B) even when condition (A) already failed.
        #[arg(long)]
        force_condition_b: bool,
    },
    /// Compute the Lie closure, its decomposition, symmetry dimensions and
    /// central-projection ranks for an instance file.
    Closure {
        path: PathBuf,
        #[command(flatten)]
        common: CommonOpts,
        /// Dimension budget for the closure.
        #[arg(long)]
        max_dim: Option<usize>,
    },
    /// Print a canonical symmetry basis of the instance's controls.
    Symmetries {
        path: PathBuf,
        #[command(flatten)]
        common: CommonOpts,
        /// Linear symmetries (the commutant of P u Q).
        #[arg(long, conflicts_with_all = ["quadratic", "center"])]
        linear: bool,
        /// Quadratic symmetries (tensor-square commutant of P u Q).
        #[arg(long, conflicts_with_all = ["linear", "center"])]
        quadratic: bool,
        /// Center of the commutant of P u Q.
        #[arg(long, conflicts_with_all = ["linear", "quadratic"])]
        center: bool,
    },
    /// Emit an instance file for a built-in family.
    Generate {
        /// One of: ex1, ex2a, ex2b, central-spin.
        kind: String,
        /// Spin count for central-spin.
        #[arg(long)]
        n: Option<usize>,
        /// Coupling pattern for central-spin: a (all 1) or b (2 on even sites).
        #[arg(long)]
        case: Option<String>,
        /// Explicit central-spin couplings J2,J3,... as rationals.
        #[arg(long, value_delimiter = ',')]
        couplings: Option<Vec<String>>,
        /// Write to a file instead of stdout.
        #[arg(long, short)]
        output: Option<PathBuf>,
    },
}

fn main() {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { 0 };
            let _ = e.print();
            std::process::exit(code);
        }
    };
    let code = match cli.command {
        Command::Decide {
            path,
            common,
            oracle,
            max_dim,
            force_condition_b,
        } => cmd_decide(&path, &common, oracle, max_dim, force_condition_b),
        Command::Closure {
            path,
            common,
            max_dim,
        } => cmd_closure(&path, &common, max_dim),
        Command::Symmetries {
            path,
            common,
            linear,
            quadratic,
            center,
        } => cmd_symmetries(&path, &common, linear, quadratic, center),
        Command::Generate {
            kind,
            n,
            case,
            couplings,
            output,
        } => cmd_generate(&kind, n, case.as_deref(), couplings.as_deref(), output.as_deref()),
    };
    std::process::exit(code);
}

fn fail_usage(msg: impl std::fmt::Display) -> i32 {
    eprintln!("error: {msg}");
    EXIT_USAGE
}

fn fail_compute(msg: impl std::fmt::Display) -> i32 {
    eprintln!("error: {msg}");
    EXIT_COMPUTE
}

fn load_instance(path: &std::path::Path) -> Result<(ParsedInstance, ProblemInstance, String), i32> {
    let bytes = std::fs::read(path)
        .map_err(|e| fail_usage(format_args!("cannot read {}: {e}", path.display())))?;
    let digest: String = Sha256::digest(&bytes).iter().map(|b| format!("{b:02x}")).collect();
    let text = String::from_utf8(bytes)
        .map_err(|_| fail_usage(format_args!("{} is not valid UTF-8", path.display())))?;
    let parsed = parse_instance_file(&text)
        .map_err(|e| fail_usage(format_args!("{}: {e}", path.display())))?;
    let problem = parsed
        .to_problem()
        .map_err(|e| fail_compute(format_args!("{}: {e}", path.display())))?;
    Ok((parsed, problem, digest))
}

fn cmd_decide(
    path: &std::path::Path,
    common: &CommonOpts,
    oracle: bool,
    max_dim: Option<usize>,
    force_condition_b: bool,
) -> i32 {
    let start = Instant::now();
    let (_, problem, digest) = match load_instance(path) {
        Ok(v) => v,
        Err(code) => return code,
    };
    let opts = EngineOptions {
        rank: common.rank_options(),
        force_condition_b,
    };
    let report = match decide(&problem, &opts) {
        Ok(r) => r,
        Err(e) => return fail_compute(e),
    };

    let oracle_report: Option<OracleReport> = if oracle {
        match oracle_verdict(&problem, max_dim) {
            Ok(o) => {
                let engine_simulable = report.verdict == Verdict::Simulable;
                if o.simulable != engine_simulable {
                    return fail_compute(format_args!(
                        "oracle disagreement: engine says {:?} but closure dims are ({}, {})",
                        report.verdict, o.closure_dim_p, o.closure_dim_union
                    ));
                }
                Some(o)
            }
            Err(e) => return fail_compute(e),
        }
    } else {
        None
    };

    let doc = report::decide_document(digest, common.mode_name(), &report, oracle_report);
    match OutputFormat::from(common.format) {
        OutputFormat::Json => print!("{}", report::to_json(&doc)),
        OutputFormat::Human => print!("{}", report::render_decide_human(&doc, start.elapsed().as_millis())),
    }
    match report.verdict {
        Verdict::Simulable => EXIT_SIMULABLE,
        Verdict::NotSimulable => EXIT_NOT_SIMULABLE,
    }
}

fn cmd_closure(path: &std::path::Path, common: &CommonOpts, max_dim: Option<usize>) -> i32 {
    let start = Instant::now();
    let (_, problem, digest) = match load_instance(path) {
        Ok(v) => v,
        Err(code) => return code,
    };
    let rank_opts = common.rank_options();
    let d = problem.dim();
    let union = problem.union();

    let closed_p = match lie_closure(problem.p_set(), max_dim) {
        Ok(c) => c,
        Err(e) => return fail_compute(e),
    };
    let closed_union = match lie_closure(&union, max_dim) {
        Ok(c) => c,
        Err(e) => return fail_compute(e),
    };
    let decomposition = match decompose(&closed_union) {
        Ok(x) => x,
        Err(e) => return fail_compute(e),
    };

    let quad_p = match quadratic_commutant_dims(problem.p_set(), d, &rank_opts) {
        Ok(x) => x,
        Err(e) => return fail_compute(e),
    };
    let quad_union = match quadratic_commutant_dims(&union, d, &rank_opts) {
        Ok(x) => x,
        Err(e) => return fail_compute(e),
    };
    let lin_p = match commutant(problem.p_set(), d) {
        Ok(x) => x,
        Err(e) => return fail_compute(e),
    };
    let lin_union = match commutant(&union, d) {
        Ok(x) => x,
        Err(e) => return fail_compute(e),
    };
    let center = symsim_core::center_from_commutant(&union, &lin_union, d);
    let proj = match symsim_core::central_projections(
        &center,
        problem.p_set(),
        problem.q_set(),
        &rank_opts,
    ) {
        Ok(x) => x,
        Err(e) => return fail_compute(e),
    };

    let mut primes: Vec<u64> = quad_p.primes();
    primes.extend(quad_union.primes());
    primes.extend(proj.rank_full.prime.iter().copied());
    primes.extend(proj.rank_restricted.prime.iter().copied());
    primes.sort_unstable();
    primes.dedup();
    let used_modular = quad_p.used_modular()
        || quad_union.used_modular()
        || proj.rank_full.prime.is_some()
        || proj.rank_restricted.prime.is_some();

    let doc = report::ClosureDocument {
        format_version: report::FORMAT_VERSION,
        tool_version: report::tool_version(),
        command: "closure".to_string(),
        input_sha256: digest,
        lie_dim_p: closed_p.dim,
        lie_dim_union: closed_union.dim,
        generation_depth: closed_union.generation_depth,
        semisimple_dim: decomposition.semisimple_dim,
        center_dim: decomposition.center_dim,
        quadratic_dim_p: quad_p.dim,
        quadratic_dim_union: quad_union.dim,
        linear_dim_p: lin_p.dim,
        linear_dim_union: lin_union.dim,
        commutant_center_dim: center.len(),
        central_rank_full: proj.rank_full,
        central_rank_restricted: proj.rank_restricted,
        simulable: closed_p.dim == closed_union.dim,
        arithmetic: report::ArithmeticMeta {
            mode: common.mode_name().to_string(),
            used_modular,
            modular_primes: primes,
        },
    };
    match OutputFormat::from(common.format) {
        OutputFormat::Json => print!("{}", report::to_json(&doc)),
        OutputFormat::Human => print!("{}", report::render_closure_human(&doc, start.elapsed().as_millis())),
    }
    EXIT_SIMULABLE
}

fn cmd_symmetries(
    path: &std::path::Path,
    common: &CommonOpts,
    linear: bool,
    quadratic: bool,
    center: bool,
) -> i32 {
    let start = Instant::now();
    if !(linear || quadratic || center) {
        return fail_usage("choose one of --linear, --quadratic or --center");
    }
    let (_, problem, digest) = match load_instance(path) {
        Ok(v) => v,
        Err(code) => return code,
    };
    let d = problem.dim();
    let union = problem.union();

    let (kind, dim, basis_doc) = if linear {
        match commutant(&union, d) {
            Ok(b) => ("linear", b.dim, report::basis_document(&b)),
            Err(e) => return fail_compute(e),
        }
    } else if quadratic {
        match quadratic_commutant(&union, d) {
            Ok(b) => {
                debug_assert_eq!(b.kind, SymmetryKind::Quadratic);
                ("quadratic", b.dim, report::basis_document(&b))
            }
            Err(e) => return fail_compute(e),
        }
    } else {
        match symsim_core::center_of_commutant(&union, d) {
            Ok(c) => ("center", c.len(), report::matrices_document(&c)),
            Err(e) => return fail_compute(e),
        }
    };

    let doc = report::SymmetriesDocument {
        format_version: report::FORMAT_VERSION,
        tool_version: report::tool_version(),
        command: "symmetries".to_string(),
        input_sha256: digest,
        kind: kind.to_string(),
        dim,
        basis: basis_doc,
    };
    match OutputFormat::from(common.format) {
        OutputFormat::Json => print!("{}", report::to_json(&doc)),
        OutputFormat::Human => print!(
            "{}",
            report::render_symmetries_human(&doc, start.elapsed().as_millis())
        ),
    }
    EXIT_SIMULABLE
}

fn parse_couplings(raw: &[String]) -> Result<Vec<Rational>, String> {
    raw.iter()
        .map(|s| {
            s.trim()
                .parse::<Rational>()
                .map_err(|e| format!("bad coupling {s:?}: {e}"))
        })
        .collect()
}

fn cmd_generate(
    kind: &str,
    n: Option<usize>,
    case: Option<&str>,
    couplings: Option<&[String]>,
    output: Option<&std::path::Path>,
) -> i32 {
    let (instance, header): (QubitInstance, String) = match kind {
        "ex1" | "ex2a" | "ex2b" => {
            let name: FixtureName = kind.parse().expect("matched above");
            (
                example_fixture_qubit(name),
                format!("{kind} two-qubit fixture"),
            )
        }
        "central-spin" => {
            let Some(n) = n else {
                return fail_usage("central-spin requires --n <spins>");
            };
            let couplings = match (couplings, case) {
                (Some(raw), _) => match parse_couplings(raw) {
                    Ok(c) => c,
                    Err(e) => return fail_usage(e),
                },
                (None, Some(c)) => match c.parse::<CouplingCase>() {
                    Ok(cc) => coupling_pattern(cc, n),
                    Err(_) => return fail_usage(format_args!("case must be a or b, got {c:?}")),
                },
                (None, None) => coupling_pattern(CouplingCase::A, n),
            };
            match central_spin_qubit(n, &couplings) {
                Ok(inst) => (
                    inst,
                    format!("central-spin model on {n} spins"),
                ),
                Err(e) => return fail_usage(e),
            }
        }
        other => {
            return fail_usage(format_args!(
                "unknown kind {other:?}; available: ex1, ex2a, ex2b, central-spin"
            ))
        }
    };
    let text = render_qubit_instance(&instance, Some(&header));
    match output {
        Some(path) => {
            if let Err(e) = std::fs::write(path, text) {
                return fail_compute(format_args!("cannot write {}: {e}", path.display()));
            }
        }
        None => print!("{text}"),
    }
    EXIT_SIMULABLE
}
