use std::fmt;

use super::{generate_program, shrink, GeneratorConfig};
use crate::checker::check_program;
use crate::error::{ErrorKind, SourcePos};
use crate::semantics::{Halted, Hooks, Interpreter, Interrupt, Store, Value};
use crate::syntax::{pretty_print, Block, Statement};

const STACK_SIZE: usize = 256 * 1024 * 1024;

/// Instrumentation for fuzzed evaluations: a budget on statements and
/// function applications, a cap on nesting of applications, and a check
/// that no simple-expression writes a store cell that existed when it
/// started.
#[derive(Debug)]
pub struct FuzzHooks {
    pub max_steps: u64,
    pub max_apply_depth: u32,
    steps: u64,
    apply_depth: u32,
    snapshots: Vec<Vec<Value>>,
    purity_violation: Option<String>,
}

impl Default for FuzzHooks {
    fn default() -> Self {
        FuzzHooks::new(20_000, 64)
    }
}

impl FuzzHooks {
    pub fn new(max_steps: u64, max_apply_depth: u32) -> Self {
        FuzzHooks {
            max_steps,
            max_apply_depth,
            steps: 0,
            apply_depth: 0,
            snapshots: Vec::new(),
            purity_violation: None,
        }
    }

    pub fn purity_violation(&self) -> Option<&str> {
        self.purity_violation.as_deref()
    }

    fn step(&mut self) -> Result<(), Halted> {
        self.steps += 1;
        if self.steps > self.max_steps {
            Err(Halted(format!(
                "step budget of {} exhausted",
                self.max_steps
            )))
        } else {
            Ok(())
        }
    }
}

impl Hooks for FuzzHooks {
    fn before_statement(&mut self, _: &Statement) -> Result<(), Halted> {
        self.step()
    }

    fn before_loop_iteration(&mut self, _: &Statement) -> Result<(), Halted> {
        self.step()
    }

    fn before_apply(&mut self) -> Result<(), Halted> {
        self.step()?;
        self.apply_depth += 1;
        if self.apply_depth > self.max_apply_depth {
            return Err(Halted("application nesting limit reached".into()));
        }
        Ok(())
    }

    fn after_apply(&mut self) {
        self.apply_depth -= 1;
    }

    fn enter_simple(&mut self, store: &Store) {
        self.snapshots.push(store.cells().to_vec());
    }

    fn exit_simple(&mut self, store: &Store) {
        let before = self.snapshots.pop().expect("balanced enter/exit");
        if self.purity_violation.is_some() {
            return;
        }
        if let Some(i) = (0..before.len()).find(|&i| store.cells()[i] != before[i]) {
            self.purity_violation = Some(format!(
                "cell {i} changed from {} to {} inside a simple-expression",
                before[i],
                store.cells()[i]
            ));
        }
    }
}

/// Compares two results of independent evaluations. Functions are compared
/// by applying both to a fixed set of probe arguments.
pub fn observably_equal(a: &Value, b: &Value) -> bool {
    observably_equal_at(a, b, 2)
}

fn observably_equal_at(a: &Value, b: &Value, fuel: u32) -> bool {
    match (a, b) {
        (Value::Fun(_), Value::Fun(_)) => {
            if fuel == 0 {
                return true;
            }
            probes().into_iter().all(|probe| {
                let ra = probe_apply(a, probe.clone());
                let rb = probe_apply(b, probe);
                match (ra, rb) {
                    (Ok(x), Ok(y)) => observably_equal_at(&x, &y, fuel - 1),
                    (Err(x), Err(y)) => x == y,
                    _ => false,
                }
            })
        }
        (Value::List(xs), Value::List(ys)) => {
            xs.len() == ys.len()
                && xs
                    .iter()
                    .zip(ys)
                    .all(|(x, y)| observably_equal_at(x, y, fuel))
        }
        _ => a == b,
    }
}

fn probes() -> Vec<Value> {
    vec![
        Value::from(0),
        Value::from(3),
        Value::from(true),
        Value::list([]),
    ]
}

fn probe_apply(f: &Value, arg: Value) -> Result<Value, Interrupt> {
    let mut interp = Interpreter::with_hooks(FuzzHooks::default());
    interp.apply(f, arg, SourcePos::default())
}

fn outcomes_agree(a: &Result<Value, Interrupt>, b: &Result<Value, Interrupt>) -> bool {
    match (a, b) {
        (Ok(x), Ok(y)) => observably_equal(x, y),
        (Err(x), Err(y)) => x == y,
        _ => false,
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ViolationKind {
    /// The checker accepted a program whose evaluation raised `illformed`.
    Soundness,
    Nondeterminism,
    /// A simple-expression wrote to a pre-existing store cell.
    Purity,
}

#[derive(Clone, Debug)]
pub struct Violation {
    pub kind: ViolationKind,
    /// Replaying `generate_program` with this seed gives the original program.
    pub seed: u64,
    pub message: String,
    /// The shrunk counterexample.
    pub program: Block,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{:?} (seed {}): {}", self.kind, self.seed, self.message)?;
        f.write_str(&pretty_print(&self.program))
    }
}

#[derive(Clone, Debug, Default)]
pub struct FuzzReport {
    pub generated: u64,
    pub well_formed: u64,
    pub rejected: u64,
    pub evaluated_ok: u64,
    pub type_errors: u64,
    /// Evaluations stopped by the step budget or nesting cap.
    pub halted: u64,
    pub violations: Vec<Violation>,
}

/// Evaluates `program` twice under [`FuzzHooks`] and reports the first
/// property it breaks, if any. Programs the checker rejects are skipped.
fn find_violation(program: &Block) -> Option<(ViolationKind, String, Result<Value, Interrupt>)> {
    if !check_program(program).is_well_formed() {
        return None;
    }
    let mut first = Interpreter::with_hooks(FuzzHooks::default());
    let a = first.run(program);
    let mut second = Interpreter::with_hooks(FuzzHooks::default());
    let b = second.run(program);
    if let Err(Interrupt::Raised(err)) = &a {
        if err.kind == ErrorKind::Illformed {
            return Some((ViolationKind::Soundness, err.to_string(), a));
        }
    }
    if let Some(msg) = first.hooks().purity_violation() {
        return Some((ViolationKind::Purity, msg.to_string(), a));
    }
    if !outcomes_agree(&a, &b) {
        let msg = format!("first run {a:?}, second run {b:?}");
        return Some((ViolationKind::Nondeterminism, msg, a));
    }
    None
}

/// Generates `iterations` programs with seeds `config.seed`,
/// `config.seed + 1`, ... and checks every well-formed one for soundness,
/// determinism and simple-expression purity.
pub fn run_soundness_fuzz(config: &GeneratorConfig, iterations: u64) -> FuzzReport {
    let config = config.clone();
    std::thread::Builder::new()
        .name("soundness-fuzz".into())
        .stack_size(STACK_SIZE)
        .spawn(move || fuzz_loop(&config, iterations))
        .expect("spawn fuzz thread")
        .join()
        .expect("fuzz thread panicked")
}

fn fuzz_loop(config: &GeneratorConfig, iterations: u64) -> FuzzReport {
    let mut report = FuzzReport::default();
    for i in 0..iterations {
        let seed = config.seed.wrapping_add(i);
        let program = generate_program(&config.with_seed(seed));
        report.generated += 1;
        if !check_program(&program).is_well_formed() {
            report.rejected += 1;
            continue;
        }
        report.well_formed += 1;
        match find_violation(&program) {
            Some((kind, message, _)) => {
                let small = shrink(
                    &program,
                    |p| matches!(find_violation(p), Some((k, _, _)) if k == kind),
                );
                report.violations.push(Violation {
                    kind,
                    seed,
                    message,
                    program: small,
                });
            }
            None => {
                let mut interp = Interpreter::with_hooks(FuzzHooks::default());
                match interp.run(&program) {
                    Ok(_) => report.evaluated_ok += 1,
                    Err(Interrupt::Raised(_)) => report.type_errors += 1,
                    Err(Interrupt::Halted(_)) => report.halted += 1,
                }
            }
        }
    }
    report
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::parse_program;

    fn run(src: &str) -> (Result<Value, Interrupt>, FuzzHooks) {
        let mut interp = Interpreter::with_hooks(FuzzHooks::default());
        let r = interp.run(&parse_program(src).unwrap());
        (r, interp.into_parts().1)
    }

    #[test]
    fn self_application_is_cut_off() {
        let (r, _) = run("val w = x => x x\nw w");
        assert!(matches!(r, Err(Interrupt::Halted(_))));
    }

    #[test]
    fn linear_writes_in_statements_are_not_purity_violations() {
        let (r, hooks) = run("val x = 1\nbegin x = 2 end\nval y = begin x = 3; x end\nx + y");
        assert_eq!(r.unwrap(), Value::from(6));
        assert!(hooks.purity_violation().is_none());
    }

    #[test]
    fn fresh_cells_inside_simple_expressions_may_change() {
        let (r, hooks) = run("(x => begin x = x + 1; x end) 1 + begin val z = 0; z = 5; z end");
        assert_eq!(r.unwrap(), Value::from(7));
        assert!(hooks.purity_violation().is_none());
    }

    #[test]
    fn probes_distinguish_functions() {
        let a = run("x => x + 1").0.unwrap();
        let b = run("x => x + 1").0.unwrap();
        let c = run("x => x + 2").0.unwrap();
        assert!(observably_equal(&a, &b));
        assert!(!observably_equal(&a, &c));
    }

    #[test]
    fn small_fuzz_run_is_clean_and_reproducible() {
        let cfg = GeneratorConfig::default().with_seed(7);
        let report = run_soundness_fuzz(&cfg, 300);
        assert_eq!(report.generated, 300);
        assert!(report.well_formed > 0);
        assert!(report.violations.is_empty(), "{}", report.violations[0]);
        let again = run_soundness_fuzz(&cfg, 300);
        assert_eq!(again.well_formed, report.well_formed);
        assert_eq!(again.evaluated_ok, report.evaluated_ok);
    }

    #[test]
    fn while_mode_treats_budget_as_no_verdict() {
        let cfg = GeneratorConfig {
            include_while: true,
            ..GeneratorConfig::default()
        };
        let report = run_soundness_fuzz(&cfg, 300);
        assert!(report.violations.is_empty(), "{}", report.violations[0]);
    }
}
