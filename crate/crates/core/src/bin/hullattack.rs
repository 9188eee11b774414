use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use hullattack::cli::{self, AttackOutput, ErrorInfo, Level, EXIT_BAD_INPUT, EXIT_OK, EXIT_UNVERIFIED};
use hullattack::Error;

#[derive(Parser)]
#[command(version, about = "Hull attack on rotated Construction A lattices")]
struct Args {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Generate an instance with its secret rotations.
    Gen {
        #[arg(long)]
        k: u64,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        m: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Number of Givens factors; defaults to 2n.
        #[arg(long)]
        depth: Option<usize>,
        #[arg(long)]
        out: PathBuf,
    },
    /// Recover an isomorphism between the two public lattices.
    Attack {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        out: PathBuf,
        #[arg(long)]
        k: Option<u64>,
    },
    /// Attack many instances in parallel, writing results into a directory.
    Batch {
        #[arg(required = true)]
        inputs: Vec<PathBuf>,
        #[arg(long)]
        out_dir: PathBuf,
        #[arg(long)]
        k: Option<u64>,
        #[arg(long, default_value_t = 1)]
        jobs: usize,
    },
    /// Check a result file against an instance.
    Verify {
        #[arg(long)]
        instance: PathBuf,
        #[arg(long)]
        result: PathBuf,
    },
    /// Run the oracle suites.
    Selftest {
        #[arg(long, value_enum, default_value_t = Level::Quick)]
        level: Level,
    },
}

fn fail(e: &Error) -> i32 {
    let record = serde_json::json!({ "error": ErrorInfo::from(e) });
    eprintln!("{record}");
    EXIT_BAD_INPUT
}

fn main() -> ExitCode {
    let code = match Args::parse().cmd {
        Cmd::Gen { k, n, m, seed, depth, out } => match cli::cmd_gen(k, n, m, seed, depth.unwrap_or(2 * n), &out) {
            Ok(_) => EXIT_OK,
            Err(e) => fail(&e),
        },
        Cmd::Attack { input, out, k } => match cli::cmd_attack(&input, &out, k) {
            Ok(o) => {
                if let AttackOutput::Error(rec) = &o {
                    eprintln!("{}: {}", rec.error.kind, rec.error.message);
                }
                o.exit_code()
            }
            Err(e) => fail(&e),
        },
        Cmd::Batch { inputs, out_dir, k, jobs } => match cli::cmd_attack_batch(&inputs, &out_dir, k, jobs) {
            Ok(codes) => {
                for (p, c) in &codes {
                    println!("{c} {}", p.display());
                }
                codes.iter().map(|(_, c)| *c).max().unwrap_or(EXIT_OK)
            }
            Err(e) => fail(&e),
        },
        Cmd::Verify { instance, result } => match cli::cmd_verify(&instance, &result) {
            Ok(true) => EXIT_OK,
            Ok(false) => EXIT_UNVERIFIED,
            Err(e) => fail(&e),
        },
        Cmd::Selftest { level } => {
            let report = cli::cmd_selftest(level);
            print!("{report}");
            report.exit_code()
        }
    };
    ExitCode::from(code as u8)
}
