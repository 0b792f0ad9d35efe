//! Evaluation of Mini Babel-17 programs.
//!
//! Blocks and statements evaluate to a *sequence* of values (everything they
//! yield); a statement in expression position evaluates to its single
//! yielded value, or to the list of all of them otherwise. Linear bindings
//! live in a [`Store`] owned by the [`Interpreter`], so rebinding a variable
//! inside a nested block is visible after the block, while the nested
//! block's own `val` bindings are dropped with its environment.

mod env;
mod eval;
mod value;

pub use env::{Env, Location, Store};
pub use eval::{eval_program, Halted, Hooks, Interpreter, Interrupt, Outcome};
pub use value::{apply_binop, Closure, Value};
