//! An interpreter for Mini Babel-17, a small dynamically typed language that
//! is purely functional yet written in structured-programming style.
//!
//! Bindings introduced with `val` are in *linear scope*: until they are
//! shadowed they can be rebound with a bare `x = e`, and the new value is
//! seen by every later lookup in the binding's lexical scope, including
//! those after the end of a nested block. Simple-expressions (arithmetic,
//! application, lambdas) only ever see a frozen snapshot of the environment,
//! so closures never observe later rebinding.
//!
//! ```
//! use minibabel::{eval_source, Value};
//!
//! let src = "val x = 2\nbegin\n  val y = x*x\n  x = y\nend\nx+x";
//! assert_eq!(eval_source(src).unwrap().to_string(), "8");
//! ```

pub mod checker;
pub mod cli;
pub mod conformance;
pub mod error;
pub mod semantics;
pub mod syntax;

pub use checker::{check_program, CheckReport};
pub use error::{Error, ErrorKind, SourcePos};
pub use semantics::{eval_program, Env, Interpreter, Outcome, Store, Value};
pub use syntax::{parse_program, pretty_print, Block};

/// Parses and evaluates `source` without running the static checker.
pub fn eval_source(source: &str) -> Outcome {
    eval_program(&parse_program(source)?)
}
