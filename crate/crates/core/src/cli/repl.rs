use super::{exit_code, CliConfig, CliHooks, Io, EXIT_OK};
use crate::checker::{check_block_in, CheckEnv};
use crate::error::Error;
use crate::semantics::{Env, Halted, Interpreter, Interrupt, Store, Value};
use crate::syntax::parse_program;
use crate::syntax::{tokenize, Keyword, TokenKind};

const PROMPT: &str = "mb> ";
const CONTINUE_PROMPT: &str = "..> ";

/// What one REPL input produced.
#[derive(Clone, Debug, PartialEq)]
pub enum InputResult {
    /// Evaluated; `None` when the input yielded nothing.
    Value(Option<Value>),
    Error(Error),
    Halted(String),
}

/// A REPL session: one top-level block that grows with every accepted input.
#[derive(Clone, Debug)]
pub struct Session {
    env: Env,
    check_env: CheckEnv,
    store: Store,
    check: bool,
    step_budget: Option<std::num::NonZeroU64>,
}

impl Default for Session {
    fn default() -> Self {
        Session::new(true, None)
    }
}

impl Session {
    pub fn new(check: bool, step_budget: Option<std::num::NonZeroU64>) -> Self {
        Session {
            env: Env::new(),
            check_env: CheckEnv::new(),
            store: Store::new(),
            check,
            step_budget,
        }
    }

    pub fn env(&self) -> &Env {
        &self.env
    }

    pub fn store(&self) -> &Store {
        &self.store
    }

    /// Current bindings rendered as `name = value`, in name order.
    pub fn bindings(&self) -> Vec<String> {
        self.env
            .bindings(&self.store)
            .into_iter()
            .map(|(id, v)| format!("{id} = {v}"))
            .collect()
    }

    /// Parses, checks and evaluates one input. A failed input leaves the
    /// session exactly as it was.
    pub fn eval_input(&mut self, source: &str) -> InputResult {
        let block = match parse_program(source) {
            Ok(b) => b,
            Err(err) => return InputResult::Error(err),
        };
        if self.check {
            if let Err(err) = check_block_in(&self.check_env, &block) {
                return InputResult::Error(err);
            }
        }
        let hooks = CliHooks::new(self.step_budget, None);
        let mut interp = Interpreter::from_parts(self.store.clone(), hooks);
        match interp.eval_block(&self.env, &block) {
            Ok((env, mut values)) => {
                self.check_env = CheckEnv::of(&env);
                self.env = env;
                self.store = interp.into_parts().0;
                InputResult::Value(match values.len() {
                    0 => None,
                    1 => values.pop(),
                    _ => Some(Value::List(values)),
                })
            }
            Err(Interrupt::Raised(err)) => InputResult::Error(err),
            Err(Interrupt::Halted(Halted(msg))) => InputResult::Halted(msg),
        }
    }
}

/// Whether `text` still has an unclosed block construct or bracket, or ends
/// in a token that needs a right operand.
pub fn needs_more_input(text: &str) -> bool {
    let Ok(tokens) = tokenize(text) else {
        return false;
    };
    let mut depth: i64 = 0;
    for tok in &tokens {
        match &tok.kind {
            TokenKind::Keyword(Keyword::If | Keyword::While | Keyword::For | Keyword::Begin)
            | TokenKind::LParen
            | TokenKind::LBracket => depth += 1,
            TokenKind::Keyword(Keyword::End) | TokenKind::RParen | TokenKind::RBracket => {
                depth -= 1
            }
            _ => {}
        }
    }
    if depth > 0 {
        return true;
    }
    let last = tokens
        .iter()
        .rev()
        .find(|t| !matches!(t.kind, TokenKind::Separator));
    matches!(
        last.map(|t| &t.kind),
        Some(TokenKind::Op(_) | TokenKind::Equals | TokenKind::Arrow | TokenKind::Comma)
    )
}

pub fn cmd_repl(config: &CliConfig, io: &mut Io<'_>) -> i32 {
    let mut session = Session::new(config.check_before_run, config.step_budget);
    let mut buffer = String::new();
    loop {
        if io.interactive {
            let prompt = if buffer.is_empty() {
                PROMPT
            } else {
                CONTINUE_PROMPT
            };
            let _ = write!(io.stdout, "{prompt}");
            let _ = io.stdout.flush();
        }
        let mut line = String::new();
        let eof = match io.stdin.read_line(&mut line) {
            Ok(0) => true,
            Ok(_) => false,
            Err(err) => {
                let _ = writeln!(io.stderr, "error: cannot read input: {err}");
                true
            }
        };
        if eof {
            if !buffer.trim().is_empty() {
                report(session.eval_input(&buffer), io);
            }
            return EXIT_OK;
        }
        if buffer.is_empty() {
            let command = line.trim();
            if command.starts_with(':') {
                match command {
                    ":quit" | ":q" => return EXIT_OK,
                    ":env" => {
                        for binding in session.bindings() {
                            let _ = writeln!(io.stdout, "{binding}");
                        }
                    }
                    other => {
                        let _ = writeln!(
                            io.stderr,
                            "error: unknown command `{other}` (try :env or :quit)"
                        );
                    }
                }
                let _ = io.stdout.flush();
                continue;
            }
        }
        buffer.push_str(&line);
        if needs_more_input(&buffer) {
            continue;
        }
        if !buffer.trim().is_empty() {
            report(session.eval_input(&buffer), io);
        }
        buffer.clear();
    }
}

fn report(result: InputResult, io: &mut Io<'_>) {
    match result {
        InputResult::Value(Some(v)) => {
            let _ = writeln!(io.stdout, "{v}");
        }
        InputResult::Value(None) => {}
        InputResult::Error(err) => {
            debug_assert!(exit_code(err.kind) > EXIT_OK);
            let _ = writeln!(io.stderr, "{err}");
        }
        InputResult::Halted(msg) => {
            let _ = writeln!(io.stderr, "error: {msg}");
        }
    }
    let _ = io.stdout.flush();
}
