use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use log::error;

use ifd6::harness::{
    emit_table, load_problem, run_convergence, solve_level, ConvergenceRow, SolveOptions, TableFormat,
};
use ifd6::solver::{ConditionNorm, Method, DEFAULT_TOL};
use ifd6::Error;

#[derive(Parser, Debug)]
#[command(
    name = "ifd6",
    version,
    about = "Sixth-order compact finite differences for the 2-D Poisson interface problem"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Solve on one grid and print its errors.
    Solve {
        #[command(flatten)]
        common: Common,
        /// Refinement level, N1 = 2^J.
        #[arg(long = "J", value_name = "n")]
        level: u32,
        /// Write the grid solution to FILE.
        #[arg(long, value_name = "FILE")]
        dump_solution: Option<PathBuf>,
    },
    /// Refinement study over J = Jmin..=Jmax.
    Converge {
        #[command(flatten)]
        common: Common,
        #[arg(long = "Jmin", value_name = "a")]
        jmin: u32,
        #[arg(long = "Jmax", value_name = "b")]
        jmax: u32,
    },
}

#[derive(Args, Debug)]
struct Common {
    #[arg(long, value_name = "FILE")]
    problem: PathBuf,
    /// Accuracy order M in 3..=6.
    #[arg(long, default_value_t = 6, value_parser = clap::value_parser!(u8).range(3..=6))]
    order: u8,
    /// Linear solver; direct up to N1 = 256 and cg beyond when omitted.
    #[arg(long)]
    solver: Option<Method>,
    /// Relative residual tolerance for cg.
    #[arg(long, default_value_t = DEFAULT_TOL)]
    tol: f64,
    #[arg(long, default_value = "csv")]
    out: TableFormat,
    /// Report the condition number of the coefficient matrix.
    #[arg(long)]
    kappa: bool,
    /// Use the 2-norm condition number instead of the 1-norm.
    #[arg(long, requires = "kappa")]
    kappa2: bool,
}

impl Common {
    fn options(&self) -> SolveOptions {
        SolveOptions {
            method: self.solver,
            tol: self.tol,
            kappa: self.kappa,
            kappa_norm: if self.kappa2 { ConditionNorm::Two } else { ConditionNorm::One },
        }
    }
}

fn fail(e: &Error) -> ExitCode {
    error!("{e}");
    eprintln!("error: {e}");
    ExitCode::from(if e.is_numerical() { 2 } else { 1 })
}

fn run(cli: Cli) -> ExitCode {
    match cli.command {
        Command::Solve { common, level, dump_solution } => {
            if !(1..=12).contains(&level) {
                eprintln!("error: --J must be in 1..=12");
                return ExitCode::from(1);
            }
            let spec = match load_problem(&common.problem) {
                Ok(s) => s,
                Err(e) => return fail(&e),
            };
            let sol = match solve_level(&spec, level, common.order as usize, &common.options()) {
                Ok(s) => s,
                Err(e) => return fail(&e),
            };
            let exact = match sol.exact_errors(&spec).transpose() {
                Ok(v) => v,
                Err(e) => return fail(&e),
            };
            let row = ConvergenceRow {
                level,
                e2_exact: exact.map(|e| e.0),
                einf_exact: exact.map(|e| e.1),
                kappa: sol.kappa,
                ..Default::default()
            };
            print!("{}", emit_table(&[row], common.out));
            if let Some(path) = dump_solution {
                let text = match sol.dump(&spec) {
                    Ok(t) => t,
                    Err(e) => return fail(&e),
                };
                if let Err(source) = std::fs::write(&path, text) {
                    return fail(&Error::Io { path, source });
                }
            }
            ExitCode::SUCCESS
        }
        Command::Converge { common, jmin, jmax } => {
            if jmin < 2 || jmax > 9 || jmin > jmax {
                eprintln!("error: need 2 <= Jmin <= Jmax <= 9");
                return ExitCode::from(1);
            }
            let spec = match load_problem(&common.problem) {
                Ok(s) => s,
                Err(e) => return fail(&e),
            };
            let outcome = run_convergence(&spec, jmin, jmax, common.order as usize, &common.options());
            print!("{}", emit_table(&outcome.rows, common.out));
            match outcome.failure {
                Some(e) => fail(&e),
                None => ExitCode::SUCCESS,
            }
        }
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    match Cli::try_parse() {
        Ok(cli) => run(cli),
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            ExitCode::from(code)
        }
    }
}
