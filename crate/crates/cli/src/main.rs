//! Command-line interface for the exactgt engine.

use clap::{Parser, Subcommand};
use exactgt_cli::parser::{parse, Document};
use exactgt_cli::runner::{self, CliError, Format};
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(
    name = "exactgt",
    about = "Exact-arithmetic solvers for finite games",
    disable_help_subcommand = true
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Candidate cap for bounded searches and enumerations.
    #[arg(long, global = true, default_value_t = 10_000)]
    cap: usize,
    /// Output format for structural commands.
    #[arg(long, global = true, default_value = "text")]
    format: String,
}

#[derive(Subcommand)]
enum Command {
    /// Check structural invariants (exit 2 on failure); `--format dot` draws.
    Validate { file: PathBuf },
    /// Pure Nash equilibria of a strategic (or induced) game.
    Nash { file: PathBuf },
    /// Mixed equilibria of a two-player game by support enumeration.
    MixedNash { file: PathBuf },
    /// Dominance relations and a dominating-mixture or belief certificate.
    Dominate {
        file: PathBuf,
        #[arg(long)]
        player: String,
        #[arg(long)]
        strategy: String,
    },
    /// Backward-induction solutions of a perfect-information game.
    Bi { file: PathBuf },
    /// Subgame-perfect equilibria.
    Spe { file: PathBuf },
    /// Proper subgames and minimality.
    Subgames { file: PathBuf },
    /// Solve a two-player win/lose/draw game.
    Zermelo { file: PathBuf },
    /// Weak sequential equilibrium check for the embedded assessment.
    Wse { file: PathBuf },
    /// Perfect Bayesian equilibrium check for the embedded assessment.
    Pbe { file: PathBuf },
    /// Sequential equilibrium check for the embedded assessment.
    Seqeq { file: PathBuf },
    /// Knowledge operator: states where the agent knows the event.
    Know {
        file: PathBuf,
        #[arg(long)]
        agent: String,
        #[arg(long)]
        event: String,
    },
    /// Common-knowledge partition and operator.
    Ck {
        file: PathBuf,
        #[arg(long)]
        event: Option<String>,
    },
    /// Common prior of a knowledge-belief structure or type space.
    Prior { file: PathBuf },
    /// Agreement check for an event under the stored beliefs.
    Agree {
        file: PathBuf,
        #[arg(long)]
        event: String,
    },
    /// Belief revision from a plausibility order.
    Revise {
        file: PathBuf,
        /// Order levels, most plausible first: "b g | c k m | ...".
        #[arg(long)]
        order: String,
        /// Items of information, one per flag: --info "a e".
        #[arg(long)]
        info: Vec<String>,
        /// Optional full-support prior "a:1/9 b:2/9 ..." for probabilistic
        /// revision.
        #[arg(long)]
        p0: Option<String>,
    },
    /// Build the common-knowledge-of-rationality model of a game.
    Ckr { file: PathBuf },
    /// Transform an incomplete-information scenario; reports Nature's
    /// probabilities and the Bayesian Nash equilibria.
    Harsanyi { file: PathBuf },
    /// Convert a scenario to a type space.
    Totypes { file: PathBuf },
    /// Convert a type space to a scenario.
    Tostates { file: PathBuf },
    /// Expected value / utility of a lottery document.
    Lottery { file: PathBuf },
    /// Run the bundled fixture corpus (or one from a directory).
    Fixtures {
        #[arg(long)]
        fixture_dir: Option<PathBuf>,
    },
}

fn load(file: &PathBuf) -> Result<Document, CliError> {
    let text = std::fs::read_to_string(file)
        .map_err(|e| CliError::usage(format!("cannot read {}: {e}", file.display())))?;
    parse(&text).map_err(|e| CliError::invalid(format!("{e}")))
}

fn dispatch(cli: &Cli) -> Result<String, CliError> {
    let format = match cli.format.as_str() {
        "text" => Format::Text,
        "dot" => Format::Dot,
        other => return Err(CliError::usage(format!("unknown format `{other}`"))),
    };
    match &cli.command {
        Command::Validate { file } => runner::cmd_validate(&load(file)?, format),
        Command::Nash { file } => runner::cmd_nash(&load(file)?),
        Command::MixedNash { file } => runner::cmd_mixed_nash(&load(file)?),
        Command::Dominate {
            file,
            player,
            strategy,
        } => runner::cmd_dominate(&load(file)?, player, strategy),
        Command::Bi { file } => runner::cmd_bi(&load(file)?, cli.cap),
        Command::Spe { file } => runner::cmd_spe(&load(file)?, cli.cap),
        Command::Subgames { file } => runner::cmd_subgames(&load(file)?),
        Command::Zermelo { file } => runner::cmd_zermelo(&load(file)?),
        Command::Wse { file } => runner::cmd_wse(&load(file)?),
        Command::Pbe { file } => runner::cmd_pbe(&load(file)?, cli.cap),
        Command::Seqeq { file } => runner::cmd_seqeq(&load(file)?),
        Command::Know { file, agent, event } => runner::cmd_know(&load(file)?, agent, event),
        Command::Ck { file, event } => runner::cmd_ck(&load(file)?, event.as_deref()),
        Command::Prior { file } => runner::cmd_prior(&load(file)?),
        Command::Agree { file, event } => runner::cmd_agree(&load(file)?, event),
        Command::Revise {
            file,
            order,
            info,
            p0,
        } => runner::cmd_revise(&load(file)?, order, info, p0.as_deref()),
        Command::Ckr { file } => runner::cmd_ckr(&load(file)?),
        Command::Harsanyi { file } => runner::cmd_harsanyi(&load(file)?, format),
        Command::Totypes { file } => runner::cmd_totypes(&load(file)?),
        Command::Tostates { file } => runner::cmd_tostates(&load(file)?),
        Command::Lottery { file } => runner::cmd_lottery(&load(file)?),
        Command::Fixtures { fixture_dir } => {
            let fixtures = match fixture_dir {
                None => runner::builtin_fixtures(),
                Some(dir) => {
                    let mut out = Vec::new();
                    let entries = std::fs::read_dir(dir).map_err(|e| {
                        CliError::usage(format!("cannot read {}: {e}", dir.display()))
                    })?;
                    let mut paths: Vec<PathBuf> =
                        entries.filter_map(|e| e.ok().map(|e| e.path())).collect();
                    paths.sort();
                    for path in paths {
                        if path.extension().map(|x| x == "fix").unwrap_or(false) {
                            let name = path
                                .file_name()
                                .map(|n| n.to_string_lossy().to_string())
                                .unwrap_or_default();
                            let text = std::fs::read_to_string(&path).map_err(|e| {
                                CliError::usage(format!("cannot read {}: {e}", path.display()))
                            })?;
                            out.push((name, text));
                        }
                    }
                    out
                }
            };
            let (report, ok) = runner::run_fixtures(&fixtures, cli.cap);
            if ok {
                Ok(report)
            } else {
                Err(CliError {
                    code: 2,
                    message: report,
                })
            }
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // help/version requests are not usage errors
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = e.print();
            return ExitCode::from(code as u8);
        }
    };
    match dispatch(&cli) {
        Ok(report) => {
            println!("{report}");
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("{}", e.message);
            ExitCode::from(e.code as u8)
        }
    }
}
