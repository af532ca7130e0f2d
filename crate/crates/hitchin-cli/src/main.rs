use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use hitchin_cli::{
    cmd_analyze, cmd_gen, cmd_suite, cmd_verify, GenConfig, SuiteConfig, VerifyConfig,
};

/// Exact-arithmetic verifier for the spectral correspondence of Hitchin
/// pairs on the projective line and its Poisson structures.
#[derive(Parser)]
#[command(name = "hitchin", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a certified-stable pair with a random Poisson section.
    Gen {
        /// PRNG seed (ChaCha20).
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Rank of the bundle.
        #[arg(long, default_value_t = 2)]
        r: usize,
        /// Twist degree (N = O(n), n >= 1).
        #[arg(long, default_value_t = 1)]
        n: i64,
        /// Coefficient bound for sampled entries.
        #[arg(long, default_value_t = 5)]
        bound: i64,
        /// Give up after this many rejected draws.
        #[arg(long, default_value_t = 10_000)]
        retries: u64,
        /// Output path (stdout if omitted).
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Report the invariants of a pair file.
    Analyze {
        /// Pair JSON produced by `gen`.
        #[arg(long)]
        input: PathBuf,
        /// Output path (stdout if omitted).
        #[arg(long)]
        out: Option<PathBuf>,
        /// Extra margin for the windowed-solver cross-check.
        #[arg(long, default_value_t = 0)]
        window_extra: i64,
    },
    /// Verify the Poisson comparison at one moduli point.
    Verify {
        /// Pair JSON; omit to generate from the seed flags.
        #[arg(long)]
        input: Option<PathBuf>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 2)]
        r: usize,
        #[arg(long, default_value_t = 1)]
        n: i64,
        #[arg(long, default_value_t = 5)]
        bound: i64,
        /// Comma-separated coefficients of sigma0 (overrides the file).
        #[arg(long)]
        sigma0: Option<String>,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Extra margin for the windowed-solver cross-check.
        #[arg(long, default_value_t = 0)]
        window_extra: i64,
        /// Negate the Hitchin-side map before comparing (negative testing).
        #[arg(long, default_value_t = false)]
        inject_sign_fault: bool,
    },
    /// Run every check over a seeded grid of sample points.
    Suite {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Largest rank in the grid (r = 1..=R).
        #[arg(long, default_value_t = 2)]
        r: usize,
        /// Largest twist in the grid (n = 1..=N).
        #[arg(long, default_value_t = 2)]
        n: i64,
        /// Sample points per (r, n) cell.
        #[arg(long, default_value_t = 5)]
        samples: u64,
        #[arg(long, default_value_t = 5)]
        bound: i64,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, default_value_t = 0)]
        window_extra: i64,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Gen {
            seed,
            r,
            n,
            bound,
            retries,
            out,
        } => cmd_gen(&GenConfig {
            seed,
            r,
            n,
            bound,
            retries,
            out,
        })
        .map(|_| true),
        Command::Analyze {
            input,
            out,
            window_extra,
        } => cmd_analyze(&input, out.as_deref(), window_extra).map(|rep| rep.pass),
        Command::Verify {
            input,
            seed,
            r,
            n,
            bound,
            sigma0,
            out,
            window_extra,
            inject_sign_fault,
        } => cmd_verify(&VerifyConfig {
            input,
            seed,
            r,
            n,
            bound,
            sigma0,
            out,
            window_extra,
            inject_sign_fault,
        })
        .map(|rep| rep.pass),
        Command::Suite {
            seed,
            r,
            n,
            samples,
            bound,
            out,
            window_extra,
        } => cmd_suite(
            &SuiteConfig {
                seed,
                r_max: r,
                n_max: n,
                samples,
                bound,
                window_extra,
            },
            out.as_deref(),
        )
        .map(|rep| rep.all_pass),
    };
    match outcome {
        Ok(true) => ExitCode::from(0),
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
