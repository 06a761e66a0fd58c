//! Command-line front end. [`run`] is the whole program minus process
//! plumbing, so tests can drive it with in-memory streams.

mod commands;
mod emit;

use std::ffi::OsString;
use std::io::Write;

use clap::{Args, Parser, Subcommand, ValueEnum};

pub use emit::Format;

#[derive(Debug)]
pub enum CliError {
    /// Bad flags or values, or parameters outside a documented range.
    Invalid(String),
    /// A verification, comparison or audit did not pass.
    Failed(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Failed(_) => 1,
            CliError::Invalid(_) => 2,
        }
    }
}

impl From<rostmot_core::Error> for CliError {
    fn from(e: rostmot_core::Error) -> CliError {
        use rostmot_core::Error as E;
        match e {
            E::RecurrenceInconsistency { .. } => CliError::Failed(e.to_string()),
            _ => CliError::Invalid(e.to_string()),
        }
    }
}

pub type CliResult<T> = Result<T, CliError>;

#[derive(Parser, Debug)]
#[command(name = "rostmot", version, about = "Exact computations with Rost motives in a split model")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone)]
struct Symbol {
    /// The prime.
    #[arg(short = 'p')]
    p: u64,
    /// The symbol degree; the norm variety has dimension p^n - 1.
    #[arg(short = 'n')]
    n: u32,
}

#[derive(Args, Debug, Clone)]
struct Degree {
    /// deg(H^(p-1)), a p-local unit such as 1, 4 or 7/2.
    #[arg(short = 'e', default_value = "1")]
    e: String,
}

#[derive(Args, Debug, Clone, Copy)]
struct Output {
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Method {
    Closed,
    Recurrence,
    Both,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Row {
    Even,
    Odd,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum SuiteArg {
    Correspondences,
    Symmpow,
    Endalg,
    Motcoh,
    Chow,
    Steenrod,
    All,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Print b, c and d for the given symbol.
    Params {
        #[command(flatten)]
        symbol: Symbol,
        #[command(flatten)]
        degree: Degree,
        #[command(flatten)]
        output: Output,
    },
    /// Chow groups CH^j of the Rost motive for 0 <= j <= d.
    Chow {
        #[command(flatten)]
        symbol: Symbol,
        #[arg(long, value_enum, default_value_t = Method::Both)]
        method: Method,
        /// Include the recurrence derivation.
        #[arg(long)]
        trace: bool,
        #[command(flatten)]
        output: Output,
    },
    /// A motivic cohomology group of the Čech simplicial scheme.
    Motcoh {
        #[command(flatten)]
        symbol: Symbol,
        #[arg(long, value_enum, requires = "j", conflicts_with = "bidegree")]
        row: Option<Row>,
        #[arg(long, requires = "row")]
        j: Option<i64>,
        #[arg(long, num_args = 2, value_names = ["I", "J"], allow_negative_numbers = true)]
        bidegree: Option<Vec<i64>>,
        #[command(flatten)]
        output: Output,
    },
    /// Run verification suites; exits 1 if any check fails.
    Verify {
        #[command(flatten)]
        symbol: Symbol,
        #[command(flatten)]
        degree: Degree,
        #[arg(long, value_enum)]
        suite: SuiteArg,
        #[command(flatten)]
        output: Output,
    },
    /// Evaluate an expression over correspondences and classes.
    Eval {
        #[command(flatten)]
        symbol: Symbol,
        #[command(flatten)]
        degree: Degree,
        expr: String,
        #[command(flatten)]
        output: Output,
    },
    /// Audit the p-adic valuations in a Steenrod expansion.
    Audit {
        #[command(flatten)]
        symbol: Symbol,
        /// Audit the leading term of S^s(x_0).
        #[arg(long = "mainsi", conflicts_with = "generators", required_unless_present = "generators", requires = "s")]
        leading: bool,
        #[arg(long, requires = "r")]
        generators: bool,
        #[arg(short = 'm', allow_negative_numbers = true)]
        m: i64,
        #[arg(short = 's')]
        s: Option<u64>,
        #[arg(short = 'r')]
        r: Option<u32>,
        /// List every audited product.
        #[arg(long)]
        cases: bool,
        #[command(flatten)]
        output: Output,
    },
}

/// Runs the program on `args` (including the program name) and returns the
/// exit code. The payload goes to `out`, diagnostics to `err`.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            let _ = if code == 0 { out.write_all(text.as_bytes()) } else { err.write_all(text.as_bytes()) };
            return code;
        }
    };
    let mut payload = Vec::new();
    let result = dispatch(cli.command, &mut payload);
    let _ = out.write_all(&payload);
    match result {
        Ok(()) => 0,
        Err(e) => {
            let (CliError::Invalid(msg) | CliError::Failed(msg)) = &e;
            let _ = writeln!(err, "error: {msg}");
            e.exit_code()
        }
    }
}

fn dispatch(command: Command, out: &mut Vec<u8>) -> CliResult<()> {
    match command {
        Command::Params { symbol, degree, output } => {
            commands::params(&commands::symbol(&symbol, Some(&degree))?, output.format, out)
        }
        Command::Chow { symbol, method, trace, output } => {
            commands::chow(&commands::symbol(&symbol, None)?, method, trace, output.format, out)
        }
        Command::Motcoh { symbol, row, j, bidegree, output } => {
            let params = commands::symbol(&symbol, None)?;
            let (i, j) = match (row, j, bidegree) {
                (Some(Row::Even), Some(j), None) => (2 * j, j),
                (Some(Row::Odd), Some(j), None) => (2 * j + 1, j),
                (None, None, Some(ij)) => (ij[0], ij[1]),
                _ => return Err(CliError::Invalid("give either --row and --j, or --bidegree I J".into())),
            };
            commands::motcoh(&params, row.is_some(), i, j, output.format, out)
        }
        Command::Verify { symbol, degree, suite, output } => {
            commands::verify(&commands::symbol(&symbol, Some(&degree))?, suite, output.format, out)
        }
        Command::Eval { symbol, degree, expr, output } => {
            commands::eval(&commands::symbol(&symbol, Some(&degree))?, &expr, output.format, out)
        }
        Command::Audit { symbol, leading, generators: _, m, s, r, cases, output } => {
            let params = commands::symbol(&symbol, None)?;
            if leading {
                commands::audit_leading_term(&params, m, s.expect("required by clap"), cases, output.format, out)
            } else {
                let m = u32::try_from(m).map_err(|_| CliError::Invalid(format!("m = {m} must be positive")))?;
                commands::audit_generators(&params, m, r.expect("required by clap"), cases, output.format, out)
            }
        }
    }
}
