use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use marked_groups::circle_product::Variant;
use marked_groups_cli::{self as cmd, CliError, ConvergeFamily, Family, Outcome, DEFAULT_SEED};

/// Experiments on Grigorchuk groups, lamplighter groups and the space of
/// marked groups.
#[derive(Parser)]
#[command(name = "mgroups", version)]
struct Cli {
    /// Worker threads; results do not depend on this.
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Seed for sampled words.
    #[arg(long, global = true, default_value_t = DEFAULT_SEED)]
    seed: u64,
    /// Write the report here instead of standard output.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Decide whether a word is trivial.
    Wp {
        #[arg(long, value_enum)]
        family: Family,
        /// Sequence written `pre(period)` over 0, 1, 2.
        #[arg(long)]
        omega: Option<String>,
        #[arg(long)]
        word: String,
        #[arg(long, default_value_t = 2)]
        modulus: u32,
        #[arg(long, default_value_t = 2)]
        rank: usize,
    },
    /// Growth function as CSV `n,gamma`.
    Growth {
        #[arg(long, value_enum)]
        family: Family,
        #[arg(long)]
        omega: Option<String>,
        #[arg(long, default_value_t = 4)]
        n_max: usize,
        #[arg(long, default_value_t = 2)]
        modulus: u32,
        #[arg(long, default_value_t = 2)]
        rank: usize,
    },
    /// Agreement radius of `0^j (012)^∞` approximants with the limit, as CSV
    /// `j,agree_N,exact`.
    Converge {
        #[arg(long, value_enum, default_value = "l")]
        family: ConvergeFamily,
        #[arg(long, default_value_t = 1)]
        j_from: usize,
        #[arg(long, default_value_t = 6)]
        j_to: usize,
        #[arg(long, default_value_t = 4)]
        n_max: usize,
    },
    /// Shortest words telling two sequences apart, as JSON.
    Separate {
        #[arg(long)]
        omega1: String,
        #[arg(long)]
        omega2: String,
        #[arg(long, default_value_t = 16)]
        l_max: usize,
    },
    /// Limit triviality against the `L ⋊ ℤ₂` model on random words, as JSON.
    Thm2Check {
        #[arg(long, default_value_t = 14)]
        max_len: usize,
        #[arg(long, default_value_t = 1000)]
        samples: usize,
        #[arg(long, default_value_t = 8)]
        k_min: usize,
        #[arg(long, default_value_t = 12)]
        k_max: usize,
    },
    /// Minimality of the lamplighter presentation through the circle product,
    /// as JSON.
    Minimality {
        #[arg(long, default_value_t = 2)]
        n: u32,
        #[arg(long, default_value_t = 2)]
        m: u32,
        #[arg(long, default_value_t = 12)]
        window: i64,
        #[arg(long, default_value = "corrected", value_parser = parse_variant)]
        variant: Variant,
    },
    /// Structure checks in the lamplighter model, as JSON.
    Structure {
        #[arg(long, default_value_t = 20)]
        window: i64,
        /// Run with the twist replaced by the identity; succeeds only if
        /// the checks catch it.
        #[arg(long)]
        negative_control: bool,
    },
}

fn parse_variant(s: &str) -> Result<Variant, String> {
    s.parse().map_err(|e: marked_groups::Error| e.to_string())
}

fn run(cli: &Cli) -> Result<Outcome, CliError> {
    cmd::startup_check()?;
    match &cli.command {
        Command::Wp { family, omega, word, modulus, rank } => cmd::wp(*family, omega.as_deref(), word, *modulus, *rank),
        Command::Growth { family, omega, n_max, modulus, rank } => {
            cmd::growth(*family, omega.as_deref(), *modulus, *rank, *n_max)
        }
        Command::Converge { family, j_from, j_to, n_max } => cmd::converge(*family, *j_from, *j_to, *n_max),
        Command::Separate { omega1, omega2, l_max } => cmd::separate(omega1, omega2, *l_max),
        Command::Thm2Check { max_len, samples, k_min, k_max } => {
            cmd::thm2_check(*max_len, *samples, cli.seed, *k_min, *k_max)
        }
        Command::Minimality { n, m, window, variant } => cmd::minimality(*n, *m, *window, *variant),
        Command::Structure { window, negative_control } => cmd::structure(*window, *negative_control, cli.seed),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = cli.threads {
        if n == 0 || n > 1024 {
            eprintln!("error: threads = {n} outside 1..=1024");
            return ExitCode::from(2);
        }
        rayon::ThreadPoolBuilder::new().num_threads(n).build_global().expect("thread pool set once");
    }
    let outcome = match run(&cli) {
        Ok(o) => o,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(e.exit_code() as u8);
        }
    };
    match &cli.out {
        Some(path) => {
            if let Err(e) = std::fs::write(path, &outcome.body) {
                eprintln!("error: cannot write {}: {e}", path.display());
                return ExitCode::from(2);
            }
        }
        None => print!("{}", outcome.body),
    }
    if outcome.violation {
        eprintln!("property violation; see report");
        ExitCode::from(1)
    } else {
        ExitCode::SUCCESS
    }
}
