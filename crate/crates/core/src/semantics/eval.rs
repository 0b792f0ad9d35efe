use std::sync::Arc;

use super::{apply_binop, Closure, Env, Store, Value};
use crate::error::{Error, SourcePos};
use crate::syntax::{Block, Expr, Ident, SimpleExpr, SimpleExprKind, Statement, StatementKind};

/// Result of evaluating a whole program.
pub type Outcome = Result<Value, Error>;

/// Raised by a [`Hooks`] implementation to stop evaluation early, e.g. when a
/// step budget runs out.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Halted(pub String);

/// Why an evaluation did not produce a value.
#[derive(Clone, Debug, PartialEq)]
pub enum Interrupt {
    Raised(Error),
    Halted(Halted),
}

impl From<Error> for Interrupt {
    fn from(err: Error) -> Self {
        Interrupt::Raised(err)
    }
}

impl From<Halted> for Interrupt {
    fn from(h: Halted) -> Self {
        Interrupt::Halted(h)
    }
}

type EvalResult<T> = Result<T, Interrupt>;

/// Observation points inside the evaluator. Every method defaults to a
/// no-op; `before_*` methods may halt evaluation.
pub trait Hooks {
    fn before_statement(&mut self, _stmt: &Statement) -> Result<(), Halted> {
        Ok(())
    }

    fn after_statement(&mut self, _stmt: &Statement, _values: &[Value]) {}

    /// A `while` loop is about to re-test its condition after an iteration.
    /// Each re-test is a recursive evaluation of the loop statement.
    fn before_loop_iteration(&mut self, _stmt: &Statement) -> Result<(), Halted> {
        Ok(())
    }

    fn before_apply(&mut self) -> Result<(), Halted> {
        Ok(())
    }

    fn after_apply(&mut self) {}

    /// Called after the environment is frozen for a simple-expression and
    /// before anything inside it is evaluated.
    fn enter_simple(&mut self, _store: &Store) {}

    /// Pairs with `enter_simple`, also on the error path.
    fn exit_simple(&mut self, _store: &Store) {}

    /// An identifier occurrence is resolved: an `Id` expression or the
    /// target of an assignment.
    fn on_lookup(&mut self, _id: &Ident, _pos: SourcePos) {}
}

impl Hooks for () {}

impl<H: Hooks + ?Sized> Hooks for &mut H {
    fn before_statement(&mut self, stmt: &Statement) -> Result<(), Halted> {
        (**self).before_statement(stmt)
    }

    fn after_statement(&mut self, stmt: &Statement, values: &[Value]) {
        (**self).after_statement(stmt, values)
    }

    fn before_loop_iteration(&mut self, stmt: &Statement) -> Result<(), Halted> {
        (**self).before_loop_iteration(stmt)
    }

    fn before_apply(&mut self) -> Result<(), Halted> {
        (**self).before_apply()
    }

    fn after_apply(&mut self) {
        (**self).after_apply()
    }

    fn enter_simple(&mut self, store: &Store) {
        (**self).enter_simple(store)
    }

    fn exit_simple(&mut self, store: &Store) {
        (**self).exit_simple(store)
    }

    fn on_lookup(&mut self, id: &Ident, pos: SourcePos) {
        (**self).on_lookup(id, pos)
    }
}

/// Evaluates a program over the empty environment: one yielded value is the
/// result, any other number of values is returned as a list.
pub fn eval_program(block: &Block) -> Outcome {
    match Interpreter::new().run(block) {
        Ok(v) => Ok(v),
        Err(Interrupt::Raised(err)) => Err(err),
        Err(Interrupt::Halted(_)) => unreachable!("no hooks installed"),
    }
}

/// A tree-walking evaluator owning the store of one program run.
#[derive(Debug, Default)]
pub struct Interpreter<H = ()> {
    store: Store,
    hooks: H,
}

impl Interpreter {
    pub fn new() -> Self {
        Interpreter::default()
    }
}

impl<H: Hooks> Interpreter<H> {
    pub fn with_hooks(hooks: H) -> Self {
        Interpreter {
            store: Store::new(),
            hooks,
        }
    }

    pub fn from_parts(store: Store, hooks: H) -> Self {
        Interpreter { store, hooks }
    }

    pub fn store(&self) -> &Store {
        &self.store
    }

    pub fn hooks(&self) -> &H {
        &self.hooks
    }

    pub fn hooks_mut(&mut self) -> &mut H {
        &mut self.hooks
    }

    pub fn into_parts(self) -> (Store, H) {
        (self.store, self.hooks)
    }

    /// Evaluates `block` as the program: as a `begin` statement in
    /// expression position over the empty environment.
    pub fn run(&mut self, block: &Block) -> EvalResult<Value> {
        let values = self.eval_nested(&Env::new(), block)?;
        Ok(collapse(values))
    }

    pub fn eval_block(&mut self, env: &Env, block: &Block) -> EvalResult<(Env, Vec<Value>)> {
        let mut env = env.clone();
        let mut values = Vec::new();
        for stmt in &block.statements {
            let (next, yielded) = self.eval_statement(&env, stmt)?;
            env = next;
            values.extend(yielded);
        }
        Ok((env, values))
    }

    /// A nested block keeps its bindings to itself; only store updates
    /// escape.
    fn eval_nested(&mut self, env: &Env, block: &Block) -> EvalResult<Vec<Value>> {
        Ok(self.eval_block(env, block)?.1)
    }

    pub fn eval_statement(&mut self, env: &Env, stmt: &Statement) -> EvalResult<(Env, Vec<Value>)> {
        self.hooks.before_statement(stmt)?;
        let (env, values) = match &stmt.kind {
            StatementKind::Val(id, rhs) => {
                let value = self.eval_expr(env, rhs)?;
                (env.bind(&mut self.store, id.clone(), value), Vec::new())
            }
            StatementKind::Assign(id, rhs) => {
                let value = self.eval_expr(env, rhs)?;
                self.hooks.on_lookup(id, stmt.pos);
                env.rebind(&mut self.store, id, value)
                    .map_err(|e| e.or_at(stmt.pos))?;
                (env.clone(), Vec::new())
            }
            StatementKind::Yield(e) => {
                let value = self.eval_expr(env, e)?;
                (env.clone(), vec![value])
            }
            StatementKind::Begin(block) => (env.clone(), self.eval_nested(env, block)?),
            StatementKind::If(cond, yes, no) => {
                let branch = if self.eval_condition(env, cond)? {
                    yes
                } else {
                    no
                };
                (env.clone(), self.eval_nested(env, branch)?)
            }
            StatementKind::While(cond, body) => {
                let mut values = Vec::new();
                while self.eval_condition(env, cond)? {
                    values.extend(self.eval_nested(env, body)?);
                    self.hooks.before_loop_iteration(stmt)?;
                }
                (env.clone(), values)
            }
            StatementKind::For(binder, source, body) => {
                let items = match self.eval_simple_expr(env, source)? {
                    Value::List(items) => items,
                    other => {
                        return Err(Error::type_error(
                            format!("`for` expects a list, found {}", other.type_name()),
                            Some(source.pos),
                        )
                        .into())
                    }
                };
                let mut values = Vec::new();
                for item in items {
                    let inner = env.bind(&mut self.store, binder.clone(), item);
                    values.extend(self.eval_nested(&inner, body)?);
                }
                (env.clone(), values)
            }
        };
        self.hooks.after_statement(stmt, &values);
        Ok((env, values))
    }

    fn eval_condition(&mut self, env: &Env, cond: &SimpleExpr) -> EvalResult<bool> {
        match self.eval_simple_expr(env, cond)? {
            Value::Bool(b) => Ok(b),
            other => Err(Error::type_error(
                format!("condition must be a bool, found {}", other.type_name()),
                Some(cond.pos),
            )
            .into()),
        }
    }

    pub fn eval_expr(&mut self, env: &Env, expr: &Expr) -> EvalResult<Value> {
        match expr {
            Expr::Simple(se) => self.eval_simple_expr(env, se),
            Expr::Stmt(stmt) => {
                let (_, values) = self.eval_statement(env, stmt)?;
                Ok(collapse(values))
            }
        }
    }

    /// Evaluates a simple-expression under the frozen form of `env`; linear
    /// scope never reaches inside.
    pub fn eval_simple_expr(&mut self, env: &Env, se: &SimpleExpr) -> EvalResult<Value> {
        let frozen = env.freeze(&self.store);
        self.hooks.enter_simple(&self.store);
        let result = self.eval_frozen(&frozen, se);
        self.hooks.exit_simple(&self.store);
        result
    }

    fn eval_frozen(&mut self, env: &Env, se: &SimpleExpr) -> EvalResult<Value> {
        match &se.kind {
            SimpleExprKind::Int(n) => Ok(Value::Int(n.clone())),
            SimpleExprKind::Bool(b) => Ok(Value::Bool(*b)),
            SimpleExprKind::Id(id) => {
                self.hooks.on_lookup(id, se.pos);
                Ok(env.lookup(&self.store, id).map_err(|e| e.or_at(se.pos))?)
            }
            SimpleExprKind::Lambda(param, body) => Ok(Value::Fun(Arc::new(Closure {
                param: param.clone(),
                body: Arc::clone(body),
                env: env.clone(),
            }))),
            SimpleExprKind::App(func, arg) => {
                let func = self.eval_expr(env, func)?;
                let arg = self.eval_expr(env, arg)?;
                self.apply(&func, arg, se.pos)
            }
            SimpleExprKind::BinOp(op, lhs, rhs) => {
                let lhs = self.eval_expr(env, lhs)?;
                let rhs = self.eval_expr(env, rhs)?;
                Ok(apply_binop(*op, &lhs, &rhs).map_err(|e| e.or_at(se.pos))?)
            }
            SimpleExprKind::List(items) => {
                let mut values = Vec::with_capacity(items.len());
                for item in items {
                    values.push(self.eval_expr(env, item)?);
                }
                Ok(Value::List(values))
            }
            SimpleExprKind::Neg(operand) => match self.eval_expr(env, operand)? {
                Value::Int(n) => Ok(Value::Int(-n)),
                other => Err(Error::type_error(
                    format!("`-` is not defined on {}", other.type_name()),
                    Some(se.pos),
                )
                .into()),
            },
        }
    }

    /// Applies a function value: the parameter is bound linearly on top of
    /// the closure's captured environment.
    pub fn apply(&mut self, func: &Value, arg: Value, pos: SourcePos) -> EvalResult<Value> {
        let Value::Fun(closure) = func else {
            return Err(Error::type_error(
                format!("cannot apply {} as a function", func.type_name()),
                Some(pos),
            )
            .into());
        };
        self.hooks.before_apply()?;
        let env = closure
            .env
            .bind(&mut self.store, closure.param.clone(), arg);
        let result = self.eval_expr(&env, &closure.body);
        self.hooks.after_apply();
        result
    }
}

fn collapse(mut values: Vec<Value>) -> Value {
    if values.len() == 1 {
        values.pop().unwrap()
    } else {
        Value::List(values)
    }
}
