use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use sobolev::experiments::{self, AlthammerRoots, CompareSolvers, LaguerreRoots, LeastSquares, Penta};
use sobolev::instrument::JsonLines;
use sobolev::plot::least_squares_svg;
use sobolev::spectral_json::parse_many;
use sobolev::{AppError, AppResult, ExperimentReport};
use sobolev_core::hiep::Solver;

#[derive(Parser)]
#[command(name = "sobolev", version, about = "Sobolev orthonormal polynomials from Jordan spectral data")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    common: Common,
}

#[derive(Args)]
struct Common {
    #[arg(long, value_enum, default_value_t = SolverArg::UpdateRot, global = true)]
    solver: SolverArg,
    /// Output file (default: stdout).
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Csv, global = true)]
    format: Format,
    /// Write the spectral data as JSON lines (default: stderr).
    #[arg(long, global = true, num_args = 0..=1, default_missing_value = "-", value_name = "PATH")]
    dump_spectral: Option<String>,
    /// Write solver progress as JSON lines (default: stderr).
    #[arg(long, global = true, num_args = 0..=1, default_missing_value = "-", value_name = "PATH")]
    trace: Option<String>,
}

#[derive(Clone, Copy, ValueEnum)]
enum SolverArg {
    Arnoldi,
    UpdateHh,
    UpdateRot,
}

impl From<SolverArg> for Solver {
    fn from(s: SolverArg) -> Self {
        match s {
            SolverArg::Arnoldi => Solver::Arnoldi,
            SolverArg::UpdateHh => Solver::UpdateHouseholder,
            SolverArg::UpdateRot => Solver::UpdateRotations,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Smallest roots of Laguerre-Sobolev orthonormal polynomials.
    LaguerreRoots {
        #[arg(long, default_value_t = 1.0)]
        gamma: f64,
        #[arg(long, default_value_t = -0.5, allow_negative_numbers = true)]
        alpha: f64,
        #[arg(long, default_value_t = 10)]
        n_quad: usize,
        #[arg(long, default_value_t = 10)]
        k_max: usize,
    },
    /// All roots of one Althammer polynomial, with qualitative checks.
    AlthammerRoots {
        #[arg(long, default_value_t = 60)]
        n: usize,
        #[arg(long, default_value_t = 100.0)]
        gamma: f64,
        #[arg(long, default_value_t = 60)]
        n_quad: usize,
    },
    /// Hermite least-squares errors in the Legendre and Sobolev bases.
    LeastSquares {
        #[arg(long, default_value_t = 0.01)]
        gamma: f64,
        #[arg(long, default_value_t = 201)]
        m: usize,
        /// Comma-separated degrees (default: 1,11,...,201).
        #[arg(long, value_delimiter = ',')]
        degrees: Option<Vec<usize>>,
        /// Write an SVG plot of the error curves.
        #[arg(long, num_args = 0..=1, default_missing_value = "least-squares.svg", value_name = "PATH")]
        plot: Option<PathBuf>,
    },
    /// Five-term recurrence matrix of a discrete Laguerre-Sobolev product.
    Penta {
        #[arg(long, default_value_t = 5)]
        m: usize,
        #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
        alpha: f64,
        /// Location of the point masses.
        #[arg(long, default_value_t = -1.0, allow_negative_numbers = true)]
        c: f64,
        /// Mass on function values at `c`.
        #[arg(long = "mass", default_value_t = 1.0)]
        mass: f64,
        /// Mass on derivative values at `c`.
        #[arg(long = "derivative-mass", default_value_t = 1.0)]
        derivative_mass: f64,
    },
    /// Cross-check all solvers on random or supplied spectral data.
    CompareSolvers {
        #[arg(long, default_value_t = 100)]
        cases: usize,
        #[arg(long, default_value_t = 40)]
        max_dim: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        /// Spectral data as JSON (one document, an array, or JSON lines).
        #[arg(long)]
        input: Option<PathBuf>,
    },
}

fn sink(target: &Option<String>) -> AppResult<Option<Box<dyn Write>>> {
    Ok(match target.as_deref() {
        None => None,
        Some("-") => Some(Box::new(io::stderr())),
        Some(path) => Some(Box::new(BufWriter::new(File::create(path)?))),
    })
}

fn run(cli: Cli) -> AppResult<()> {
    let solver: Solver = cli.common.solver.into();
    let mut inst = JsonLines::new(sink(&cli.common.dump_spectral)?, sink(&cli.common.trace)?);
    let mut plot_target = None;
    let report: ExperimentReport = match cli.command {
        Command::LaguerreRoots {
            gamma,
            alpha,
            n_quad,
            k_max,
        } => experiments::laguerre_roots(
            &LaguerreRoots {
                gamma,
                alpha,
                n_quad,
                k_max,
                solver,
            },
            &mut inst,
        )?,
        Command::AlthammerRoots { n, gamma, n_quad } => {
            experiments::althammer_roots(&AlthammerRoots { n, gamma, n_quad, solver }, &mut inst)?
        }
        Command::LeastSquares {
            gamma,
            m,
            degrees,
            plot,
        } => {
            plot_target = plot;
            let mut cfg = LeastSquares {
                gamma,
                m,
                solver,
                ..Default::default()
            };
            if let Some(d) = degrees {
                cfg.degrees = d;
            }
            experiments::least_squares(&cfg, &mut inst)?
        }
        Command::Penta {
            m,
            alpha,
            c,
            mass,
            derivative_mass,
        } => experiments::penta(
            &Penta {
                m,
                alpha,
                c,
                mass,
                derivative_mass,
                solver,
            },
            &mut inst,
        )?,
        Command::CompareSolvers {
            cases,
            max_dim,
            seed,
            input,
        } => {
            let instances = match &input {
                Some(path) => Some(
                    parse_many(&std::fs::read_to_string(path)?)?
                        .iter()
                        .map(|d| d.to_data())
                        .collect::<AppResult<Vec<_>>>()?,
                ),
                None => None,
            };
            let cfg = CompareSolvers {
                cases,
                max_dim,
                seed,
                input: input.map(|p| p.display().to_string()),
            };
            experiments::compare_solvers(&cfg, instances, &mut inst)?
        }
    };
    inst.finish()?;

    let mut out: Box<dyn Write> = match &cli.common.out {
        Some(path) => Box::new(BufWriter::new(File::create(path)?)),
        None => Box::new(io::stdout().lock()),
    };
    match cli.common.format {
        Format::Csv => report.write_csv(&mut out)?,
        Format::Json => report.write_json(&mut out)?,
    }
    out.flush()?;
    if let Some(path) = plot_target {
        std::fs::write(&path, least_squares_svg(&report))?;
    }

    let mut err = io::stderr().lock();
    writeln!(err, "{}: {:.3} s", report.experiment, report.wall_time_secs)?;
    for (k, v) in &report.diagnostics {
        writeln!(err, "  {k} = {v:e}")?;
    }
    Ok(())
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            if matches!(e, AppError::Config(_)) {
                ExitCode::from(2)
            } else {
                ExitCode::FAILURE
            }
        }
    }
}
