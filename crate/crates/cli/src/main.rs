//! `consultrt`: build recommendation tables, evaluate lassos, run the
//! advisory loop, simulate controllers, query the oracle and serve
//! sessions.
//!
//! Exit codes: 0 ok, 2 cap exceeded, 64 usage, 65 data format, 66 input or
//! output file unusable, 69 server could not bind.

mod commands;

use std::fmt;
use std::path::PathBuf;
use std::process::ExitCode;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand};
use lasso_values::ValueKind;
use oracle::OracleBounds;
use rc_build::{Caps, Mode};

pub const EXIT_CAP: u8 = 2;
pub const EXIT_USAGE: u8 = 64;
pub const EXIT_DATA: u8 = 65;
pub const EXIT_IO: u8 = 66;
pub const EXIT_UNAVAILABLE: u8 = 69;

#[derive(Debug)]
pub enum Failure {
    Usage(String),
    Data(String),
    Cap(String),
    Io(String),
    Unavailable(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Usage(_) => EXIT_USAGE,
            Failure::Data(_) => EXIT_DATA,
            Failure::Cap(_) => EXIT_CAP,
            Failure::Io(_) => EXIT_IO,
            Failure::Unavailable(_) => EXIT_UNAVAILABLE,
        }
    }
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Failure::Usage(m) | Failure::Data(m) | Failure::Cap(m) | Failure::Io(m) | Failure::Unavailable(m) => {
                f.write_str(m)
            }
        }
    }
}

/// Oracle bounds as `spoke,period,trail`.
#[derive(Clone, Copy, Debug)]
pub struct Bounds(pub OracleBounds);

impl FromStr for Bounds {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let parts: Vec<&str> = s.split(',').map(str::trim).collect();
        let num = |x: &str| match x.parse::<usize>() {
            Ok(n) if n > 0 => Ok(n),
            _ => Err(format!("invalid bound `{x}`")),
        };
        match parts.as_slice() {
            [a, b, c] => Ok(Bounds(OracleBounds { max_spoke: num(a)?, max_period: num(b)?, max_trail: num(c)? })),
            _ => Err(format!("bounds must be `spoke,period,trail`, got `{s}`")),
        }
    }
}

#[derive(Parser, Debug)]
#[command(
    name = "consultrt",
    version,
    about = "Runtime consultants over quantitative automata",
    after_help = "Exit codes: 0 ok, 2 cap exceeded, 64 usage, 65 data format, 66 input or output file unusable, 69 server could not bind."
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct Common {
    /// Automaton JSON file.
    pub automaton: PathBuf,
    /// Value kind: sup, inf, limsup, liminf, limavg, parity, robustness, custom.
    #[arg(long)]
    pub kind: ValueKind,
    /// Start state (default: the automaton's initial state).
    #[arg(long)]
    pub start: Option<String>,
    /// Machine-readable output.
    #[arg(long)]
    pub json: bool,
}

#[derive(Args, Debug, Clone)]
pub struct TableArgs {
    /// Table files; both modes are built on the fly when none are given.
    #[arg(long = "table")]
    pub tables: Vec<PathBuf>,
    /// Enumeration caps for on-the-fly builds, as `cycles,trails`.
    #[arg(long, env = "CONSULTRT_CAPS")]
    pub caps: Option<Caps>,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Compile a recommendation table.
    Build {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        mode: Mode,
        /// Enumeration caps as `cycles,trails`.
        #[arg(long, env = "CONSULTRT_CAPS")]
        caps: Option<Caps>,
        /// Write the table here; otherwise to stdout (the report then goes to stderr).
        #[arg(long, short)]
        out: Option<PathBuf>,
    },
    /// Value of the lasso `spoke · period^ω`.
    Eval {
        #[command(flatten)]
        common: Common,
        /// Letters separated by spaces or commas; `ε` or empty for none.
        #[arg(long, default_value = "")]
        spoke: String,
        #[arg(long)]
        period: String,
    },
    /// Read letters from stdin and print recommendations after each.
    Advise {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        tables: TableArgs,
    },
    /// Run partially obedient controllers and report statistics.
    Simulate {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        tables: TableArgs,
        /// Probability of following the any-recommendation at each step.
        #[arg(long, default_value_t = 1.0)]
        p_any: f64,
        /// Follow the cyclic recommendation from this step on.
        #[arg(long, default_value_t = 0, conflicts_with_all = ["never_cyclic", "ignore_cyclic"])]
        cyclic_from: u64,
        /// Avoid the cyclic recommendation whenever possible.
        #[arg(long)]
        never_cyclic: bool,
        /// Disregard the cyclic recommendation.
        #[arg(long, conflicts_with = "never_cyclic")]
        ignore_cyclic: bool,
        /// Leave the any-recommendation at this step (repeatable).
        #[arg(long = "deviate-at")]
        deviate_at: Vec<u64>,
        /// Pick the smallest letter instead of a uniform draw.
        #[arg(long)]
        lex: bool,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 100)]
        trials: usize,
        #[arg(long, default_value_t = 50)]
        horizon: usize,
        /// Skip the comparison with the oracle's best value.
        #[arg(long)]
        no_oracle: bool,
        /// Instead of trials, list every run that follows the given mode's
        /// recommendation, branching over ties.
        #[arg(long)]
        enumerate: Option<Mode>,
        /// Oracle bounds as `spoke,period,trail`.
        #[arg(long)]
        bounds: Option<Bounds>,
    },
    /// Best extension values and letters after a prefix.
    Oracle {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value = "")]
        prefix: String,
        /// Oracle bounds as `spoke,period,trail`.
        #[arg(long)]
        bounds: Option<Bounds>,
    },
    /// Serve sessions over websockets at /ws.
    Serve {
        #[arg(long, default_value_t = 8765)]
        port: u16,
        /// Static console assets served at /.
        #[arg(long)]
        assets: Option<PathBuf>,
        /// Directory for relative paths in load messages.
        #[arg(long, default_value = ".")]
        root: PathBuf,
        #[arg(long, env = "CONSULTRT_CAPS")]
        caps: Option<Caps>,
    },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(EXIT_USAGE) } else { ExitCode::SUCCESS };
        }
    };
    let mut stdout = std::io::stdout().lock();
    match commands::run(cli.command, &mut stdout) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {f}");
            ExitCode::from(f.code())
        }
    }
}
