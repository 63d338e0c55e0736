mod commands;
mod report;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand};
use psts::sequencer::DEFAULT_BUDGET;

use commands::Ctx;
use report::{digest, Output, RunReport, Status};

#[derive(Parser)]
#[command(
    name = "psts",
    version,
    about = "Sequencing partial Steiner triple systems"
)]
struct Cli {
    /// Print a JSON report instead of text
    #[arg(long, global = true)]
    json: bool,

    /// Seed for random generation
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,

    /// Node budget for searches
    #[arg(long, global = true, default_value_t = DEFAULT_BUDGET)]
    budget: u64,

    /// Worker threads for decide and hunt
    #[arg(long, global = true, default_value_t = 1)]
    parallel: usize,

    /// Force sequential search (overrides --parallel)
    #[arg(long, global = true)]
    deterministic: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Parse a system and report its size
    Validate { file: PathBuf },
    /// Check a sequence against a system, listing inadmissible segments
    CheckSeq { system: PathBuf, sequence: PathBuf },
    /// Decide sequenceability by exhaustive search
    Decide { file: PathBuf },
    /// Build an admissible sequence directly
    Construct { file: PathBuf },
    /// Generate a system in .psts format
    Gen {
        #[command(subcommand)]
        kind: Gen,
    },
    /// Maximum number of pairwise disjoint blocks
    Pack { file: PathBuf },
    /// Sets of n-9 points whose complement is three disjoint blocks
    BadSets { file: PathBuf },
    /// Whether a set of n-9 points is good
    GoodSet {
        file: PathBuf,
        /// Comma-separated point labels
        #[arg(long)]
        points: String,
    },
    /// Upper bound on the number of blocks for an order
    Bound { n: usize },
    /// Check the certificate that cyclic STS(13) is not sequenceable
    #[command(name = "verify-sts13")]
    VerifySts13,
    /// Decide random systems over a seed range, streaming JSON lines
    Hunt {
        #[arg(long)]
        order: usize,
        /// Seed range A..B (B exclusive)
        #[arg(long)]
        seeds: String,
        /// Blocks to request per system (default: the upper bound)
        #[arg(long)]
        blocks: Option<usize>,
    },
}

#[derive(Subcommand)]
enum Gen {
    /// Develop base blocks modulo n
    Cyclic {
        #[arg(long)]
        n: usize,
        /// Base block as "a,b,c"; repeat for more
        #[arg(long = "base", required = true)]
        bases: Vec<String>,
    },
    /// m triangles sharing one point
    Friendship {
        #[arg(long)]
        m: usize,
    },
    /// Friendship graphs glued in a chain, e.g. --sizes 2,2,2
    Chain {
        #[arg(long, value_delimiter = ',', required = true)]
        sizes: Vec<usize>,
    },
    /// Random system with up to --blocks blocks (uses --seed)
    Random {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        blocks: usize,
    },
}

fn run(cli: Cli, ctx: &mut Ctx) -> anyhow::Result<Output> {
    match cli.command {
        Command::Validate { file } => commands::validate(ctx, &file),
        Command::CheckSeq { system, sequence } => commands::check_seq(ctx, &system, &sequence),
        Command::Decide { file } => commands::decide(ctx, &file),
        Command::Construct { file } => commands::construct(ctx, &file),
        Command::Gen { kind } => match kind {
            Gen::Cyclic { n, bases } => commands::gen_cyclic(n, &bases),
            Gen::Friendship { m } => commands::gen_friendship(m),
            Gen::Chain { sizes } => commands::gen_chain(&sizes),
            Gen::Random { n, blocks } => commands::gen_random(ctx, n, blocks),
        },
        Command::Pack { file } => commands::pack(ctx, &file),
        Command::BadSets { file } => commands::bad_sets_cmd(ctx, &file),
        Command::GoodSet { file, points } => commands::good_set(ctx, &file, &points),
        Command::Bound { n } => Ok(commands::bound(n)),
        Command::VerifySts13 => commands::verify_sts13(),
        Command::Hunt {
            order,
            seeds,
            blocks,
        } => {
            let range = commands::parse_range(&seeds)?;
            commands::hunt(ctx, order, range, blocks, &mut std::io::stdout())
        }
    }
}

fn main() -> ExitCode {
    let argv: Vec<String> = std::env::args().collect();
    let cli = match Cli::try_parse_from(&argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() {
                Status::InputError.code()
            } else {
                0
            };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let json = cli.json;
    let mut ctx = Ctx {
        json,
        seed: cli.seed,
        budget: cli.budget,
        workers: if cli.deterministic {
            1
        } else {
            cli.parallel.max(1)
        },
        inputs: Vec::new(),
    };
    let start = Instant::now();
    let result = run(cli, &mut ctx);
    let elapsed_ms = start.elapsed().as_millis() as u64;
    let out = match result {
        Ok(o) => o,
        Err(e) => {
            let message = format!("{e:#}");
            Output::new(
                Status::InputError,
                "error",
                serde_json::json!({ "error": message }),
                format!("error: {message}"),
            )
        }
    };
    let code = out.status.code();
    // a closed pipe (e.g. `| head`) is not an error worth reporting
    let mut stdout = std::io::stdout().lock();
    if ctx.json {
        let report = RunReport {
            command: argv[1..].to_vec(),
            input_digest: digest(&ctx.inputs),
            outcome: out.outcome.to_string(),
            exit_code: code,
            details: out.details,
            nodes: out.nodes,
            elapsed_ms,
            version: env!("CARGO_PKG_VERSION"),
        };
        let _ = writeln!(
            stdout,
            "{}",
            serde_json::to_string_pretty(&report).expect("report serializes")
        );
    } else if out.status == Status::InputError {
        eprintln!("{}", out.text);
    } else {
        let _ = writeln!(stdout, "{}", out.text);
    }
    ExitCode::from(code)
}
