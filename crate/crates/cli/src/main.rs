use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use polymg::fem::{assemble_poisson_q1, GridSpec};
use polymg::linalg::{write_matrix_market, PowerOptions};
use polymg::multigrid::{build_hierarchy, measure_c, CMethod, HierarchyOptions, TwoLevel};
use polymg_cli::experiment::{run_experiment, CMode, ExperimentConfig, NamedSmoother};
use polymg_cli::tables::{bounds_table, gamma_table, opt_poly_table, OptPolyEmit, DEFAULT_GAMMA_KS};
use polymg_cli::{parse_counts, parse_reals, CliResult};

const FULL_SCALE_M: u32 = 10;

#[derive(Parser)]
#[command(name = "polymg", version, about = "Polynomial-smoother multigrid experiments")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum CModeArg {
    Analytic,
    Measured,
}

#[derive(Clone, Copy, ValueEnum)]
enum MethodArg {
    Power,
    Dense,
}

#[derive(Clone, Copy, ValueEnum)]
enum EmitArg {
    Table,
    Betas,
}

#[derive(Subcommand)]
enum Command {
    /// Write the Q1 stiffness matrix in Matrix Market format.
    Assemble {
        #[arg(long, default_value_t = 5)]
        m: u32,
        #[arg(long, default_value_t = 1.0)]
        aspect: f64,
        /// Output file; stdout if omitted.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Measure V-cycle contraction factors and write data and bound files.
    Run {
        #[arg(long, default_value_t = 8)]
        m: u32,
        /// Use m = 10.
        #[arg(long)]
        full_scale: bool,
        /// Comma-separated aspect ratios.
        #[arg(long, default_value = "1,2,4,8")]
        aspect: String,
        /// Degrees, e.g. `1..6` or `1,2,5`.
        #[arg(long, default_value = "1..6")]
        k: String,
        /// Comma-separated smoothers from w43, w32, cheb, opt, simple.
        #[arg(long, default_value = "w43,w32,cheb,opt")]
        smoother: String,
        /// Damping for the `simple` smoother.
        #[arg(long, default_value_t = 1.0)]
        omega: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Relative change at which a contraction estimate is accepted.
        #[arg(long, default_value_t = 1e-8)]
        tol: f64,
        #[arg(long, default_value_t = 500)]
        max_cycles: usize,
        /// Multiplies every estimated ρ(BA).
        #[arg(long, default_value_t = 1.0)]
        rho_scale: f64,
        #[arg(long, value_enum, default_value_t = CModeArg::Analytic)]
        c_mode: CModeArg,
        #[arg(long, default_value = "out")]
        out: PathBuf,
    },
    /// Tabulate every bound variant.
    Bounds {
        /// Comma-separated values of C.
        #[arg(long = "C", default_value = "2,8,32,128")]
        c: String,
        #[arg(long, default_value = "1..6")]
        k: String,
    },
    /// Print the optimal polynomial of degree k.
    OptPoly {
        #[arg(long)]
        k: usize,
        #[arg(long, value_enum, default_value_t = EmitArg::Table)]
        emit: EmitArg,
    },
    /// Tabulate optimal γ⁻¹ against its asymptotic estimate.
    GammaTable {
        #[arg(long)]
        k: Option<String>,
    },
    /// Measure the approximation constant C on the finest two-level pair.
    MeasureC {
        #[arg(long, default_value_t = 5)]
        m: u32,
        #[arg(long, default_value_t = 1.0)]
        aspect: f64,
        #[arg(long, value_enum, default_value_t = MethodArg::Power)]
        method: MethodArg,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 1e-10)]
        tol: f64,
    },
}

fn emit(text: &str) -> CliResult<()> {
    let mut out = io::stdout().lock();
    out.write_all(text.as_bytes())?;
    out.flush()?;
    Ok(())
}

fn dispatch(cmd: Command) -> CliResult<()> {
    match cmd {
        Command::Assemble { m, aspect, out } => {
            let a = assemble_poisson_q1(&GridSpec::new(m, aspect)?);
            match out {
                Some(path) => write_matrix_market(&a, true, BufWriter::new(File::create(path)?))?,
                None => write_matrix_market(&a, true, io::stdout().lock())?,
            }
        }
        Command::Run {
            m,
            full_scale,
            aspect,
            k,
            smoother,
            omega,
            seed,
            tol,
            max_cycles,
            rho_scale,
            c_mode,
            out,
        } => {
            let m = if full_scale { FULL_SCALE_M } else { m };
            let mut cfg = ExperimentConfig::new(m, parse_reals(&aspect)?, parse_counts(&k, 1..=200)?);
            cfg.smoothers = smoother
                .split(',')
                .map(|s| NamedSmoother::parse(s.trim(), omega))
                .collect::<CliResult<_>>()?;
            cfg.seed = seed;
            cfg.tol = tol;
            cfg.max_cycles = max_cycles;
            cfg.hierarchy.rho_scale = rho_scale;
            cfg.c_mode = match c_mode {
                CModeArg::Analytic => CMode::Analytic,
                CModeArg::Measured => CMode::Measured,
            };
            for p in run_experiment(&cfg, &out)? {
                println!("{}", p.display());
            }
        }
        Command::Bounds { c, k } => emit(&bounds_table(&parse_reals(&c)?, &parse_counts(&k, 1..=200)?)?)?,
        Command::OptPoly { k, emit: e } => {
            let mode = match e {
                EmitArg::Table => OptPolyEmit::Table,
                EmitArg::Betas => OptPolyEmit::Betas,
            };
            emit(&opt_poly_table(k, mode)?)?
        }
        Command::GammaTable { k } => {
            let ks = match k {
                Some(s) => parse_counts(&s, 1..=200)?,
                None => DEFAULT_GAMMA_KS.to_vec(),
            };
            emit(&gamma_table(&ks)?)?
        }
        Command::MeasureC {
            m,
            aspect,
            method,
            seed,
            tol,
        } => {
            let h = build_hierarchy(&GridSpec::new(m, aspect)?, &HierarchyOptions::default())?.truncated(2)?;
            let tl = TwoLevel::from_hierarchy(&h)?;
            let method = match method {
                MethodArg::Power => CMethod::Power,
                MethodArg::Dense => CMethod::Dense,
            };
            let opts = PowerOptions {
                tol,
                seed,
                max_iter: 20_000,
            };
            let est = measure_c(&tl, method, opts)?;
            if !est.converged {
                eprintln!("warning: C estimate did not reach tol {tol}");
            }
            println!("{:.6}", est.value);
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
