#![allow(dead_code)]

use std::fs;
use std::path::PathBuf;

use minibabel::cli::{self, Io};
use minibabel::conformance::{generate_program, observably_equal, FuzzHooks, GeneratorConfig};
use minibabel::semantics::{Env, Interpreter, Interrupt, Store, Value};
use minibabel::syntax::{parse_program, pretty_print, Block, Ident, Statement, StatementKind};

pub fn corpus_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("corpus")
}

pub fn corpus_source(name: &str) -> String {
    fs::read_to_string(corpus_dir().join(format!("{name}.mb17"))).expect("corpus file")
}

/// The corpus program with its last line (the probe) replaced.
pub fn with_probe(name: &str, probe: &str) -> String {
    let source = corpus_source(name);
    let body = source
        .trim_end()
        .rsplit_once('\n')
        .map_or("", |(head, _)| head);
    format!("{body}\n{probe}\n")
}

pub fn big_stack<T: Send + 'static>(f: impl FnOnce() -> T + Send + 'static) -> T {
    std::thread::Builder::new()
        .stack_size(256 * 1024 * 1024)
        .spawn(f)
        .expect("spawn")
        .join()
        .expect("test thread panicked")
}

pub fn generated(seed: u64) -> Block {
    generate_program(&GeneratorConfig::default().with_seed(seed))
}

pub fn run_budgeted(program: &Block) -> Result<Value, Interrupt> {
    Interpreter::with_hooks(FuzzHooks::default()).run(program)
}

pub fn agree(a: &Result<Value, Interrupt>, b: &Result<Value, Interrupt>) -> bool {
    match (a, b) {
        (Ok(x), Ok(y)) => observably_equal(x, y),
        (Err(x), Err(y)) => x == y,
        _ => false,
    }
}

/// Runs the CLI in-process and returns exit code, stdout and stderr.
pub fn cli(args: &[&str], stdin: &str) -> (i32, String, String) {
    let mut input = stdin.as_bytes();
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let code = cli::run(
        std::iter::once("minibabel").chain(args.iter().copied()),
        &mut Io {
            stdin: &mut input,
            stdout: &mut out,
            stderr: &mut err,
            interactive: false,
        },
    );
    (
        code,
        String::from_utf8(out).unwrap(),
        String::from_utf8(err).unwrap(),
    )
}

// ---- environment operations ----

#[derive(Clone, Debug)]
pub enum EnvOp {
    Bind(usize, i64),
    Rebind(usize, i64),
    Nonlinear(usize, i64),
    Freeze,
}

pub const ENV_POOL: [&str; 4] = ["a", "b", "c", "d"];

fn pool_ident(i: usize) -> Ident {
    Ident::new(ENV_POOL[i % ENV_POOL.len()]).unwrap()
}

/// Applies `ops` in order, checking after each step that the two parts of
/// the environment stay disjoint, that freezing is idempotent and that
/// freezing preserves every lookup.
pub fn env_ops_hold(ops: &[EnvOp]) -> Result<(), String> {
    let mut store = Store::new();
    let mut env = Env::new();
    for op in ops {
        match op {
            EnvOp::Bind(i, v) => env = env.bind(&mut store, pool_ident(*i), Value::from(*v)),
            EnvOp::Rebind(i, v) => {
                let before = env.clone();
                let id = pool_ident(*i);
                let linear = env.linear().contains_key(&id);
                match env.rebind(&mut store, &id, Value::from(*v)) {
                    Ok(()) if !linear => return Err(format!("rebind of non-linear `{id}`")),
                    Err(_) if linear => return Err(format!("rebind of linear `{id}` failed")),
                    _ => {}
                }
                if env != before {
                    return Err("rebind changed the environment map".into());
                }
            }
            EnvOp::Nonlinear(i, v) => env = env.with_nonlinear(pool_ident(*i), Value::from(*v)),
            EnvOp::Freeze => env = env.freeze(&store),
        }
        if !env.is_split() {
            return Err(format!("domains overlap after {op:?}"));
        }
        let cells = store.cells().to_vec();
        let frozen = env.freeze(&store);
        if store.cells() != &cells[..] {
            return Err("freeze wrote to the store".into());
        }
        if frozen.freeze(&store) != frozen {
            return Err("freeze is not idempotent".into());
        }
        if !frozen.linear().is_empty() {
            return Err("frozen environment has linear bindings".into());
        }
        for i in 0..ENV_POOL.len() {
            let id = pool_ident(i);
            if env.lookup(&store, &id) != frozen.lookup(&store, &id) {
                return Err(format!("freeze changed lookup of `{id}`"));
            }
        }
    }
    Ok(())
}

// ---- block-level properties over generated programs ----

const PRELUDE: &str = "val x = 1\nval y = [2, 3]";

fn prelude() -> (Interpreter<FuzzHooks>, Env) {
    let mut interp = Interpreter::with_hooks(FuzzHooks::default());
    let (env, _) = interp
        .eval_block(&Env::new(), &parse_program(PRELUDE).unwrap())
        .expect("prelude evaluates");
    (interp, env)
}

/// A nested block hands back exactly the environment it was given.
pub fn nested_block_isolated(body: &Block) -> Result<(), String> {
    let (mut interp, env) = prelude();
    let stmt = Statement::new(StatementKind::Begin(body.clone()));
    match interp.eval_statement(&env, &stmt) {
        Ok((after, _)) if after != env => Err(format!(
            "nested block changed the environment:\n{}",
            pretty_print(body)
        )),
        _ => Ok(()),
    }
}

/// Evaluating `first ++ second` equals evaluating `first`, then `second`
/// in the resulting environment, with the value sequences concatenated.
pub fn concatenation_holds(first: &Block, second: &Block) -> Result<(), String> {
    let (mut split, env) = prelude();
    let piecewise = split.eval_block(&env, first).and_then(|(mid, mut v1)| {
        let (end, v2) = split.eval_block(&mid, second)?;
        v1.extend(v2);
        Ok((end, v1))
    });
    let (mut joined, env) = prelude();
    let mut statements = first.statements.clone();
    statements.extend(second.statements.iter().cloned());
    let whole = joined.eval_block(&env, &Block::new(statements));
    let same = match (&piecewise, &whole) {
        (Ok((e1, v1)), Ok((e2, v2))) => {
            observably_equal(&Value::List(v1.clone()), &Value::List(v2.clone()))
                && e1.linear() == e2.linear()
                && bindings_agree(e1, split.store(), e2, joined.store())
        }
        (Err(a), Err(b)) => a == b,
        _ => false,
    };
    if same {
        Ok(())
    } else {
        Err(format!(
            "concatenation differs\n--- first\n{}--- second\n{}",
            pretty_print(first),
            pretty_print(second)
        ))
    }
}

fn bindings_agree(a: &Env, sa: &Store, b: &Env, sb: &Store) -> bool {
    let (ba, bb) = (a.bindings(sa), b.bindings(sb));
    ba.len() == bb.len()
        && ba
            .iter()
            .zip(&bb)
            .all(|((ia, va), (ib, vb))| ia == ib && observably_equal(va, vb))
}

// ---- while unrolling ----

/// Terminating programs, each with a top-level `while` loop.
pub const LOOP_CORPUS: [&str; 20] = [
    "val i = 0\nwhile i < 5 do\n  i = i + 1\nend\ni",
    "val i = 0\nval s = 0\nwhile i < 10 do\n  i = i + 1\n  s = s + i\nend\ns",
    "val n = 6\nval acc = 1\nwhile n > 0 do\n  acc = acc * n\n  n = n - 1\nend\nacc",
    "val i = 9\nwhile i < 5 do\n  i = i + 1\nend\ni",
    "val i = 0\nwhile i < 4 do\n  yield i * i\n  i = i + 1\nend",
    "val i = 0\nval s = 0\nwhile i < 3 do\n  val j = i * 10\n  s = s + j\n  i = i + 1\nend\ns",
    "val i = 0\nval log = 0\nwhile i < 3 do\n  i = i + 1\n  val i = 100\n  log = log + i\nend\n[i, log]",
    "val a = 0\nval b = 1\nval n = 10\nwhile n > 0 do\n  val t = a + b\n  a = b\n  b = t\n  n = n - 1\nend\na",
    "val a = 48\nval b = 18\nwhile b != 0 do\n  if a > b then\n    a = a - b\n  else\n    b = b - a\n  end\nend\na",
    "val i = 0\nval c = 0\nwhile i < 3 do\n  val j = 0\n  while j < i do\n    c = c + 1\n    j = j + 1\n  end\n  i = i + 1\nend\nc",
    "val i = 0\nval s = 0\nwhile i < 3 do\n  for k in [1, 2] do\n    s = s + k * i\n  end\n  i = i + 1\nend\ns",
    "val i = 0\nwhile i < 3 do\n  val f = d => i * 10\n  yield f 0\n  i = i + 1\nend",
    "val i = 3\nwhile i > -3 do\n  yield i\n  i = i - 2\nend",
    "val go = true\nval n = 0\nwhile go do\n  n = n + 1\n  go = n < 7\nend\nn",
    "val xs = [1]\nval k = 0\nwhile xs == [1] do\n  k = k + 1\n  if k > 2 then\n    xs = []\n  else\n  end\nend\nk",
    "val p = 1\nval e = 0\nwhile p < 1000 do\n  p = p * 2\n  e = e + 1\nend\n[p, e]",
    "val p = 1\nval i = 0\nwhile i < 70 do\n  p = p * 3\n  i = i + 1\nend\np",
    "val i = 0\nwhile i < 3 do\n  begin\n    val i = i + 100\n    yield i\n  end\n  i = i + 1\nend",
    "val sq = x => x * x\nval i = 0\nval s = 0\nwhile i < 5 do\n  s = s + sq i\n  i = i + 1\nend\ns",
    "val i = 0\nwhile begin i end < 4 do\n  i = i + 2\nend\ni",
];

/// Replaces the first top-level `while c do b end` with
/// `if c then begin b end; while c do b end else end`.
pub fn unroll_first_while(program: &Block) -> Option<Block> {
    let mut statements = program.statements.clone();
    let index = statements
        .iter()
        .position(|s| matches!(s.kind, StatementKind::While(..)))?;
    let StatementKind::While(cond, body) = statements[index].kind.clone() else {
        unreachable!()
    };
    let unrolled = vec![
        Statement::new(StatementKind::Begin(body.clone())),
        Statement::new(StatementKind::While(cond.clone(), body)),
    ];
    statements[index] = Statement::new(StatementKind::If(
        cond,
        Block::new(unrolled),
        Block::new(Vec::new()),
    ));
    Some(Block::new(statements))
}

pub fn while_unrolling_holds(source: &str) -> Result<(), String> {
    let program = parse_program(source).map_err(|e| format!("{e}\n{source}"))?;
    let unrolled = unroll_first_while(&program).ok_or("no top-level while")?;
    let (a, b) = (run_budgeted(&program), run_budgeted(&unrolled));
    if a.is_ok() && agree(&a, &b) {
        Ok(())
    } else {
        Err(format!("{a:?} vs {b:?} for\n{source}"))
    }
}

// ---- alpha renaming ----

/// Pairs of programs that differ only by a consistent renaming of
/// `val`-bound identifiers or parameters.
pub fn alpha_pairs() -> Vec<(String, String)> {
    let mut pairs = Vec::new();
    for arg in [2, 3] {
        pairs.push((
            format!("(x => begin val y = x*x; val z = y*y; z*z end) {arg}"),
            format!("(n => begin val u = n*n; val v = u*u; v*v end) {arg}"),
        ));
        pairs.push((
            format!("(x => begin val x = x*x; val x = x*x; x*x end) {arg}"),
            format!("(x => begin val a = x*x; val b = a*a; b*b end) {arg}"),
        ));
        pairs.push((
            format!("(x => begin x = x*x; x = x*x; x*x end) {arg}"),
            format!("(q => begin q = q*q; q = q*q; q*q end) {arg}"),
        ));
        pairs.push((
            with_probe("closure-pow6", &format!("f {arg}")),
            format!(
                "val g = n => begin\n  val k = n*n\n  val h2 = d => k\n  k = k*k\n  h2 0 * k\nend\ng {arg}"
            ),
        ));
    }
    pairs.push((
        corpus_source("triple-left"),
        "val x = 2\nbegin\n  val t = x*x\n  val w = t\nend\nx+x".into(),
    ));
    pairs.push((
        corpus_source("triple-middle"),
        "val x = 2\nbegin\n  val t = x*x\n  x = t\nend\nx+x".into(),
    ));
    pairs.push((
        corpus_source("triple-right"),
        "val x = 2\nbegin\n  val t = x*x\n  val w = 0\n  w = t\nend\nx+x".into(),
    ));
    pairs.push((
        corpus_source("triple-middle"),
        "val r = 2\nbegin\n  val t = r*r\n  r = t\nend\nr+r".into(),
    ));
    pairs
}

pub fn alpha_pair_agrees(original: &str, renamed: &str) -> Result<(), String> {
    let a = run_budgeted(&parse_program(original).map_err(|e| e.to_string())?);
    let b = run_budgeted(&parse_program(renamed).map_err(|e| e.to_string())?);
    if a.is_ok() && agree(&a, &b) {
        Ok(())
    } else {
        Err(format!("{a:?} vs {b:?}\n{original}\n--\n{renamed}"))
    }
}

// ---- round trip ----

pub fn round_trips(program: &Block) -> Result<(), String> {
    let printed = pretty_print(program);
    let reparsed = parse_program(&printed).map_err(|e| format!("{e}\n{printed}"))?;
    if reparsed.without_positions() == program.without_positions() {
        Ok(())
    } else {
        Err(format!("round trip changed the program:\n{printed}"))
    }
}
