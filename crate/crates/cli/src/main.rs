use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use gaussrr::cycles::{self, CycleError, LagrangianCycle};
use gaussrr::euler::{self, ChiMethod, ChiReport, EulerError, Nondegeneracy};
use gaussrr::gauss::{self, GaussConfig, GaussDegreeReport};
use gaussrr::laurent::{parse, LaurentPolynomial};

mod verify;

const SCHEMA_VERSION: u32 = 1;

#[derive(Parser, Debug)]
#[command(
    name = "gaussrr",
    version,
    about = "Gaussian degrees of torus subvarieties and Euler characteristics"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    run: RunArgs,
}

#[derive(clap::Args, Debug, Clone)]
struct RunArgs {
    /// Ambient dimension (number of variables x, y, z).
    #[arg(short = 'n', global = true)]
    n: Option<usize>,
    #[arg(long, global = true, default_value_t = 42)]
    seed: u64,
    /// Covector samples per Gaussian degree (at least 3).
    #[arg(long, global = true, default_value_t = 3)]
    samples: usize,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Relative residual an endpoint must reach to count as a solution.
    #[arg(long, global = true)]
    tol: Option<f64>,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
enum Format {
    Text,
    Structured,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Gaussian degree of the hypersurface V(f).
    Gdeg { poly: String },
    /// Euler characteristic of V(f) from its Newton polytope.
    Chi { poly: String },
    /// Checks gdeg against the Euler characteristic for every corpus entry.
    Verify { corpus: PathBuf },
    /// Euler characteristic of a characteristic cycle document.
    Cycle { file: PathBuf },
}

/// Failure with its exit code: 1 for usage and input errors, 2 when the
/// numerics did not agree.
struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn usage(message: impl ToString) -> Self {
        Self {
            code: 1,
            message: message.to_string(),
        }
    }
}

pub(crate) struct Settings {
    n: Option<usize>,
    seed: u64,
    samples: usize,
    format: Format,
    gauss: GaussConfig,
}

impl Settings {
    fn from_args(args: &RunArgs) -> Result<Self, Failure> {
        if args.samples < 3 {
            return Err(Failure::usage(format!(
                "--samples must be at least 3, got {}",
                args.samples
            )));
        }
        if matches!(args.n, Some(0)) {
            return Err(Failure::usage("-n must be positive"));
        }
        let mut gauss = GaussConfig::with_seed(args.seed);
        gauss.samples = args.samples;
        if let Some(tol) = args.tol {
            if !(tol.is_finite() && tol > 0.0 && tol < 1.0) {
                return Err(Failure::usage(format!(
                    "--tol must lie in (0, 1), got {tol}"
                )));
            }
            gauss.tracker.endpoint_tolerance = tol;
        }
        Ok(Self {
            n: args.n,
            seed: args.seed,
            samples: args.samples,
            format: args.format,
            gauss,
        })
    }

    fn dimension(&self) -> usize {
        self.n.unwrap_or(2)
    }

    fn parse(&self, text: &str) -> Result<LaurentPolynomial, Failure> {
        parse(text, self.dimension())
            .map_err(|e| Failure::usage(format!("cannot parse {text:?}: {e}")))
    }
}

#[derive(Serialize)]
struct Envelope<'a, T: Serialize> {
    schema_version: u32,
    command: &'a str,
    n: usize,
    seed: u64,
    samples: usize,
    #[serde(flatten)]
    body: T,
}

pub(crate) fn emit_structured<T: Serialize>(settings: &Settings, command: &str, n: usize, body: T) {
    let envelope = Envelope {
        schema_version: SCHEMA_VERSION,
        command,
        n,
        seed: settings.seed,
        samples: settings.samples,
        body,
    };
    println!(
        "{}",
        serde_json::to_string_pretty(&envelope).expect("reports serialize")
    );
}

#[derive(Serialize)]
struct GdegBody<'a> {
    input: &'a str,
    report: &'a GaussDegreeReport,
}

fn cmd_gdeg(settings: &Settings, text: &str) -> Result<u8, Failure> {
    let f = settings.parse(text)?;
    let report = if f.is_monomial() {
        GaussDegreeReport {
            gdeg: 0,
            samples: Vec::new(),
            agreed: true,
            bkk: 0,
            path_stats: Default::default(),
            warnings: vec!["input is a monomial: V(f) is empty in the torus".into()],
        }
    } else {
        gauss::gaussian_degree_hypersurface(&f, &settings.gauss).map_err(Failure::usage)?
    };
    match settings.format {
        Format::Structured => emit_structured(
            settings,
            "gdeg",
            f.dimension(),
            GdegBody {
                input: text,
                report: &report,
            },
        ),
        Format::Text => {
            println!("gdeg {}", report.gdeg);
            if !report.samples.is_empty() {
                let counts: Vec<String> =
                    report.samples.iter().map(|s| s.count.to_string()).collect();
                println!(
                    "samples {} ({})",
                    counts.join(" "),
                    if report.agreed {
                        "agreed"
                    } else {
                        "not agreed"
                    }
                );
                println!("bkk {}", report.bkk);
                let p = &report.path_stats;
                println!(
                    "paths converged {} diverged {} failed {}",
                    p.converged, p.diverged, p.failed
                );
            }
            for w in &report.warnings {
                println!("warning: {w}");
            }
        }
    }
    Ok(if report.agreed { 0 } else { 2 })
}

#[derive(Serialize)]
struct ChiBody<'a> {
    input: &'a str,
    report: Option<ChiReport>,
    nondegeneracy: Option<Nondegeneracy>,
    warnings: Vec<String>,
}

fn cmd_chi(settings: &Settings, text: &str) -> Result<u8, Failure> {
    let f = settings.parse(text)?;
    let mut warnings = Vec::new();
    let (report, nondegeneracy) = match euler::chi_nondegenerate_hypersurface(&f) {
        Ok(report) => {
            let check = if report.method == ChiMethod::OneDim {
                None
            } else {
                Some(
                    euler::nondegeneracy_check(&f, &settings.gauss.tracker)
                        .map_err(Failure::usage)?,
                )
            };
            (Some(report), check)
        }
        Err(EulerError::Monomial) => {
            warnings.push("input is a monomial: V(f) is empty in the torus".into());
            (
                Some(ChiReport {
                    chi: 0,
                    method: ChiMethod::Khovanskii,
                    nondegenerate: None,
                }),
                None,
            )
        }
        Err(e) => return Err(Failure::usage(e)),
    };
    let degenerate = report.as_ref().and_then(|r| r.nondegenerate) == Some(false)
        || matches!(nondegeneracy, Some(Nondegeneracy::Degenerate { .. }));
    if degenerate {
        warnings.push(
            "f is degenerate: the volume formula need not give the Euler characteristic".into(),
        );
    }
    if let Some(Nondegeneracy::Inconclusive { reason }) = &nondegeneracy {
        warnings.push(format!("nondegeneracy inconclusive: {reason}"));
    }
    match settings.format {
        Format::Structured => emit_structured(
            settings,
            "chi",
            f.dimension(),
            ChiBody {
                input: text,
                report,
                nondegeneracy,
                warnings,
            },
        ),
        Format::Text => {
            if let Some(r) = &report {
                let method = match r.method {
                    ChiMethod::Khovanskii => "volume",
                    ChiMethod::Pick => "lattice points",
                    ChiMethod::OneDim => "root count",
                };
                println!("chi {} ({method})", r.chi);
            }
            match &nondegeneracy {
                Some(Nondegeneracy::Nondegenerate) => println!("nondegenerate"),
                Some(Nondegeneracy::Degenerate { face, witness, .. }) => {
                    println!("degenerate on face {face:?}");
                    let w: Vec<String> = witness.iter().map(|z| format!("{z:.6}")).collect();
                    println!("critical zero ({})", w.join(", "));
                }
                Some(Nondegeneracy::Inconclusive { .. }) | None => {}
            }
            for w in &warnings {
                println!("warning: {w}");
            }
        }
    }
    Ok(0)
}

fn read(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| Failure::usage(format!("{}: {e}", path.display())))
}

fn cmd_cycle(settings: &Settings, path: &Path) -> Result<u8, Failure> {
    let cycle: LagrangianCycle = cycles::parse_cycle(&read(path)?).map_err(Failure::usage)?;
    if let Some(n) = settings.n {
        if n != cycle.dimension() {
            return Err(Failure::usage(format!(
                "-n {n} disagrees with the cycle dimension {}",
                cycle.dimension()
            )));
        }
    }
    let report = match cycles::chi_via_cc(&cycle, &settings.gauss) {
        Ok(r) => r,
        Err(e @ CycleError::NotAgreed(_)) => {
            return Err(Failure {
                code: 2,
                message: e.to_string(),
            })
        }
        Err(e) => return Err(Failure::usage(e)),
    };
    match settings.format {
        Format::Structured => emit_structured(settings, "cycle", cycle.dimension(), &report),
        Format::Text => {
            for c in &report.components {
                println!(
                    "{:>4} x gdeg {:>3}  {}",
                    c.multiplicity, c.gdeg, c.component
                );
                for w in &c.warnings {
                    println!("       warning: {w}");
                }
            }
            println!("chi {}", report.chi);
        }
    }
    Ok(0)
}

fn run(cli: Cli) -> Result<u8, Failure> {
    let settings = Settings::from_args(&cli.run)?;
    match &cli.command {
        Command::Gdeg { poly } => cmd_gdeg(&settings, poly),
        Command::Chi { poly } => cmd_chi(&settings, poly),
        Command::Verify { corpus } => verify::cmd_verify(&settings, &read(corpus)?),
        Command::Cycle { file } => cmd_cycle(&settings, file),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(failure) => {
            eprintln!("error: {}", failure.message);
            ExitCode::from(failure.code)
        }
    }
}
