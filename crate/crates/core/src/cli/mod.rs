//! The `minibabel` command-line front end.
//!
//! Exit codes: 0 success, 1 usage or I/O error, 2 parse error, 3 illformed,
//! 4 type error, 5 step budget exhausted.

mod repl;

use std::ffi::OsString;
use std::fs;
use std::io::{self, BufRead, IsTerminal, Write};
use std::num::NonZeroU64;
use std::path::PathBuf;

use clap::{Parser, Subcommand};

use crate::checker::check_program;
use crate::error::{Error, ErrorKind};
use crate::semantics::{Halted, Hooks, Interpreter, Interrupt, Value};
use crate::syntax::{parse_program, Statement};

pub use repl::Session;

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_PARSE: i32 = 2;
pub const EXIT_ILLFORMED: i32 = 3;
pub const EXIT_TYPE: i32 = 4;
pub const EXIT_BUDGET: i32 = 5;

// Deeply nested applications recurse on the native stack.
const EVAL_STACK_SIZE: usize = 1 << 30;

#[derive(Debug, Parser)]
#[command(
    name = "minibabel",
    version,
    about = "Run, check and explore Mini Babel-17 programs"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Evaluate a program and print its value
    Run {
        /// Source file, or `-` for standard input
        input: PathBuf,
        /// Print every evaluated statement to standard error
        #[arg(long)]
        trace: bool,
        /// Abort after this many statement evaluations
        #[arg(long, value_name = "N")]
        steps: Option<NonZeroU64>,
        /// Skip the static linear-scope check
        #[arg(long)]
        no_check: bool,
    },
    /// Statically check a program for linear-scope violations
    Check {
        /// Source file, or `-` for standard input
        input: PathBuf,
    },
    /// Interactive session; inputs extend one top-level block
    Repl {
        /// Abort an input after this many statement evaluations
        #[arg(long, value_name = "N")]
        steps: Option<NonZeroU64>,
        /// Skip the static linear-scope check
        #[arg(long)]
        no_check: bool,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CommandKind {
    Run,
    Check,
    Repl,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CliConfig {
    pub command: CommandKind,
    /// `None` only for the REPL; `-` means standard input.
    pub input: Option<PathBuf>,
    pub step_budget: Option<NonZeroU64>,
    pub trace: bool,
    pub check_before_run: bool,
}

impl From<Command> for CliConfig {
    fn from(cmd: Command) -> Self {
        match cmd {
            Command::Run {
                input,
                trace,
                steps,
                no_check,
            } => CliConfig {
                command: CommandKind::Run,
                input: Some(input),
                step_budget: steps,
                trace,
                check_before_run: !no_check,
            },
            Command::Check { input } => CliConfig {
                command: CommandKind::Check,
                input: Some(input),
                step_budget: None,
                trace: false,
                check_before_run: true,
            },
            Command::Repl { steps, no_check } => CliConfig {
                command: CommandKind::Repl,
                input: None,
                step_budget: steps,
                trace: false,
                check_before_run: !no_check,
            },
        }
    }
}

/// Standard streams of one CLI invocation.
pub struct Io<'a> {
    pub stdin: &'a mut dyn BufRead,
    pub stdout: &'a mut dyn Write,
    pub stderr: &'a mut dyn Write,
    /// Show prompts in the REPL.
    pub interactive: bool,
}

/// Entry point of the binary.
pub fn main() -> i32 {
    std::thread::Builder::new()
        .name("minibabel".into())
        .stack_size(EVAL_STACK_SIZE)
        .spawn(|| {
            let stdin = io::stdin();
            let interactive = stdin.is_terminal();
            let mut stdin = stdin.lock();
            let mut stdout = io::stdout().lock();
            let mut stderr = io::stderr().lock();
            run(
                std::env::args_os(),
                &mut Io {
                    stdin: &mut stdin,
                    stdout: &mut stdout,
                    stderr: &mut stderr,
                    interactive,
                },
            )
        })
        .expect("spawn interpreter thread")
        .join()
        .unwrap_or(EXIT_USAGE)
}

pub fn run<I, T>(args: I, io: &mut Io<'_>) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(err) => {
            let code = if err.use_stderr() {
                EXIT_USAGE
            } else {
                EXIT_OK
            };
            let rendered = err.render().to_string();
            if err.use_stderr() {
                let _ = write!(io.stderr, "{rendered}");
            } else {
                let _ = write!(io.stdout, "{rendered}");
            }
            return code;
        }
    };
    execute(&CliConfig::from(cli.command), io)
}

pub fn execute(config: &CliConfig, io: &mut Io<'_>) -> i32 {
    match config.command {
        CommandKind::Run => cmd_run(config, io),
        CommandKind::Check => cmd_check(config, io),
        CommandKind::Repl => repl::cmd_repl(config, io),
    }
}

pub fn exit_code(kind: ErrorKind) -> i32 {
    match kind {
        ErrorKind::Parse => EXIT_PARSE,
        ErrorKind::Illformed => EXIT_ILLFORMED,
        ErrorKind::Type => EXIT_TYPE,
    }
}

fn read_input(config: &CliConfig, io: &mut Io<'_>) -> Result<String, i32> {
    let Some(path) = &config.input else {
        let _ = writeln!(io.stderr, "error: no input file given");
        return Err(EXIT_USAGE);
    };
    let result = if path.as_os_str() == "-" {
        let mut text = String::new();
        io.stdin.read_to_string(&mut text).map(|_| text)
    } else {
        fs::read_to_string(path)
    };
    result.map_err(|err| {
        let _ = writeln!(io.stderr, "error: cannot read {}: {err}", path.display());
        EXIT_USAGE
    })
}

fn report(err: &Error, io: &mut Io<'_>) -> i32 {
    let _ = writeln!(io.stderr, "{err}");
    exit_code(err.kind)
}

/// Counts statement evaluations against an optional budget and optionally
/// traces each evaluated statement.
pub struct CliHooks<'w> {
    budget: Option<u64>,
    steps: u64,
    trace: Option<&'w mut dyn Write>,
}

impl<'w> CliHooks<'w> {
    pub fn new(budget: Option<NonZeroU64>, trace: Option<&'w mut dyn Write>) -> Self {
        CliHooks {
            budget: budget.map(NonZeroU64::get),
            steps: 0,
            trace,
        }
    }

    pub fn steps(&self) -> u64 {
        self.steps
    }

    fn step(&mut self) -> Result<(), Halted> {
        if let Some(budget) = self.budget {
            if self.steps >= budget {
                return Err(Halted(format!("step budget of {budget} exhausted")));
            }
        }
        self.steps += 1;
        Ok(())
    }
}

impl Hooks for CliHooks<'_> {
    fn before_statement(&mut self, _: &Statement) -> Result<(), Halted> {
        self.step()
    }

    fn before_loop_iteration(&mut self, _: &Statement) -> Result<(), Halted> {
        self.step()
    }

    fn after_statement(&mut self, stmt: &Statement, values: &[Value]) {
        if let Some(out) = self.trace.as_mut() {
            let rendered = Value::List(values.to_vec());
            let _ = writeln!(out, "{}: {} yields {rendered}", stmt.pos, stmt.kind_name());
        }
    }
}

pub fn cmd_run(config: &CliConfig, io: &mut Io<'_>) -> i32 {
    let source = match read_input(config, io) {
        Ok(s) => s,
        Err(code) => return code,
    };
    let program = match parse_program(&source) {
        Ok(p) => p,
        Err(err) => return report(&err, io),
    };
    if config.check_before_run {
        if let Some(err) = check_program(&program).into_error() {
            return report(&err, io);
        }
    }
    let trace: Option<&mut dyn Write> = if config.trace {
        Some(&mut *io.stderr)
    } else {
        None
    };
    let mut interp = Interpreter::with_hooks(CliHooks::new(config.step_budget, trace));
    let result = interp.run(&program);
    drop(interp);
    match result {
        Ok(value) => {
            let _ = writeln!(io.stdout, "{value}");
            EXIT_OK
        }
        Err(Interrupt::Raised(err)) => report(&err, io),
        Err(Interrupt::Halted(Halted(msg))) => {
            let _ = writeln!(io.stderr, "error: {msg}");
            EXIT_BUDGET
        }
    }
}

pub fn cmd_check(config: &CliConfig, io: &mut Io<'_>) -> i32 {
    let source = match read_input(config, io) {
        Ok(s) => s,
        Err(code) => return code,
    };
    let program = match parse_program(&source) {
        Ok(p) => p,
        Err(err) => return report(&err, io),
    };
    match check_program(&program).into_error() {
        None => {
            let _ = writeln!(io.stdout, "wellformed");
            EXIT_OK
        }
        Some(err) => report(&err, io),
    }
}
