use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use fmdp::cli::{self, Options};
use fmdp::elim::ElimOrder;
use fmdp::lp::Arith;
use fmdp::num::{parse_rational, Rational};

#[derive(Parser)]
#[command(name = "fmdp", version, about = "Approximate policy iteration for factored MDPs with exact, certified LPs")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Common {
    /// Target Bellman error, as p/q.
    #[arg(long, default_value = "0", value_parser = rational)]
    epsilon: Rational,
    #[arg(long = "t-max", default_value_t = 30)]
    t_max: usize,
    /// identity or min-degree.
    #[arg(long, default_value = "identity", value_parser = order)]
    order: ElimOrder,
    /// Overrides the discount stored in the model, as p/q.
    #[arg(long, value_parser = rational)]
    discount: Option<Rational>,
    #[arg(long = "oracle-limit", default_value_t = fmdp::oracle::DEFAULT_STATE_LIMIT)]
    oracle_limit: usize,
    /// Leave timings out so reports compare byte for byte.
    #[arg(long = "no-timing")]
    no_timing: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Run approximate policy iteration and write a report.
    Solve {
        #[arg(long)]
        model: PathBuf,
        #[arg(long)]
        report: Option<PathBuf>,
        #[command(flatten)]
        common: Common,
    },
    /// Compare factored results against brute force on a small model.
    OracleCheck {
        #[arg(long)]
        model: PathBuf,
        #[command(flatten)]
        common: Common,
    },
    /// Check a certificate against an LP file.
    Certify {
        #[arg(long)]
        lp: PathBuf,
        #[arg(long)]
        certificate: PathBuf,
        /// Check with unreduced numerator/denominator pairs.
        #[arg(long)]
        unnormalized: bool,
    },
    /// Solve ring networks and print one row per size.
    Bench {
        /// Ring sizes to run.
        #[arg(required = true)]
        n: Vec<usize>,
        #[command(flatten)]
        common: Common,
    },
    /// Write the ring model with N machines.
    GenRing {
        n: usize,
        #[arg(long, value_parser = rational)]
        discount: Option<Rational>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Write the final weight LP of a solver run.
    DumpLp {
        #[arg(long)]
        model: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
        #[command(flatten)]
        common: Common,
    },
    /// Solve an LP file and write its certificate.
    SolveLp {
        #[arg(long)]
        lp: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn rational(s: &str) -> Result<Rational, String> {
    parse_rational(s).map_err(|e| e.to_string())
}

fn order(s: &str) -> Result<ElimOrder, String> {
    cli::parse_order(s).map_err(|e| e.to_string())
}

fn options(c: Common) -> Options {
    Options {
        epsilon: c.epsilon,
        t_max: c.t_max,
        order: c.order,
        discount: c.discount,
        oracle_limit: c.oracle_limit,
        timing: !c.no_timing,
    }
}

fn main() -> ExitCode {
    let args = match Cli::try_parse() {
        Ok(args) => args,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { cli::EXIT_INVALID as u8 } else { 0 });
        }
    };
    let mut out = std::io::stdout().lock();
    let code = match args.command {
        Command::Solve { model, report, common } => {
            cli::cmd_solve(&model, &options(common), report.as_deref(), &mut out)
        }
        Command::OracleCheck { model, common } => cli::cmd_oracle_check(&model, &options(common), &mut out),
        Command::Certify { lp, certificate, unnormalized } => {
            let arith = if unnormalized { Arith::Unnormalized } else { Arith::Normalized };
            cli::cmd_certify(&lp, &certificate, arith, &mut out)
        }
        Command::Bench { n, common } => cli::cmd_bench(&n, &options(common), &mut out),
        Command::GenRing { n, discount, out: path } => {
            cli::cmd_gen_ring(n, discount.as_ref(), path.as_deref(), &mut out)
        }
        Command::DumpLp { model, out: path, common } => {
            cli::cmd_dump_lp(&model, &options(common), path.as_deref(), &mut out)
        }
        Command::SolveLp { lp, out: path } => cli::cmd_solve_lp(&lp, path.as_deref(), &mut out),
    };
    ExitCode::from(code as u8)
}
