//! Static linear-scope check.
//!
//! The checker walks the program the way the evaluator would, but tracks
//! only which identifiers are bound and whether they are in linear scope.
//! Every identifier lookup and assignment the evaluator can ever perform is
//! visited here at least once (loop bodies once, both `if` branches, lambda
//! bodies at their definition), so a program that passes never raises
//! `illformed` at run time.

use std::collections::BTreeSet;

use crate::error::{Error, Result, SourcePos};
use crate::semantics::Env;
use crate::syntax::{Block, Expr, Ident, SimpleExpr, SimpleExprKind, Statement, StatementKind};

/// Binding shape of an environment: which identifiers are bound and which of
/// them are in linear scope. The two sets are disjoint.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct CheckEnv {
    nonlinear: BTreeSet<Ident>,
    linear: BTreeSet<Ident>,
}

impl CheckEnv {
    pub fn new() -> Self {
        CheckEnv::default()
    }

    /// The shape of a runtime environment.
    pub fn of(env: &Env) -> Self {
        CheckEnv {
            nonlinear: env.nonlinear().keys().cloned().collect(),
            linear: env.linear().keys().cloned().collect(),
        }
    }

    pub fn nonlinear(&self) -> &BTreeSet<Ident> {
        &self.nonlinear
    }

    pub fn linear(&self) -> &BTreeSet<Ident> {
        &self.linear
    }

    pub fn is_split(&self) -> bool {
        self.nonlinear.is_disjoint(&self.linear)
    }

    pub fn freeze(&self) -> CheckEnv {
        CheckEnv {
            nonlinear: self.nonlinear.union(&self.linear).cloned().collect(),
            linear: BTreeSet::new(),
        }
    }

    pub fn bind(&self, id: &Ident) -> CheckEnv {
        let mut env = self.clone();
        env.nonlinear.remove(id);
        env.linear.insert(id.clone());
        env
    }

    pub fn rebind(&self, id: &Ident, pos: SourcePos) -> Result<()> {
        if self.linear.contains(id) {
            Ok(())
        } else {
            Err(Error::illformed(
                format!("`{id}` is not in linear scope"),
                Some(pos),
            ))
        }
    }

    pub fn lookup(&self, id: &Ident, pos: SourcePos) -> Result<()> {
        if self.linear.contains(id) || self.nonlinear.contains(id) {
            Ok(())
        } else {
            Err(Error::illformed(format!("`{id}` is not bound"), Some(pos)))
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CheckReport {
    WellFormed,
    /// The first offending identifier occurrence.
    Illformed {
        message: String,
        pos: Option<SourcePos>,
    },
}

impl CheckReport {
    pub fn is_well_formed(&self) -> bool {
        matches!(self, CheckReport::WellFormed)
    }

    pub fn into_error(self) -> Option<Error> {
        match self {
            CheckReport::WellFormed => None,
            CheckReport::Illformed { message, pos } => Some(Error::illformed(message, pos)),
        }
    }
}

impl From<Result<()>> for CheckReport {
    fn from(r: Result<()>) -> Self {
        match r {
            Ok(()) => CheckReport::WellFormed,
            Err(e) => CheckReport::Illformed {
                message: e.message,
                pos: e.pos,
            },
        }
    }
}

pub fn check_program(block: &Block) -> CheckReport {
    Checker::default().program(block).into()
}

/// Like [`check_program`], also returning every identifier occurrence the
/// checker resolved, in traversal order.
pub fn check_program_logged(block: &Block) -> (CheckReport, Vec<(Ident, SourcePos)>) {
    let mut checker = Checker {
        log: Some(Vec::new()),
    };
    let report = checker.program(block).into();
    (report, checker.log.unwrap_or_default())
}

/// Checks `block` as a continuation of a block whose bindings so far are
/// `env`, returning the bindings after it. This is how a REPL session is
/// checked input by input.
pub fn check_block_in(env: &CheckEnv, block: &Block) -> Result<CheckEnv> {
    Checker::default().block(env, block)
}

#[derive(Default)]
struct Checker {
    log: Option<Vec<(Ident, SourcePos)>>,
}

impl Checker {
    fn record(&mut self, id: &Ident, pos: SourcePos) {
        if let Some(log) = &mut self.log {
            log.push((id.clone(), pos));
        }
    }

    fn program(&mut self, block: &Block) -> Result<()> {
        self.block(&CheckEnv::new(), block).map(|_| ())
    }

    fn block(&mut self, env: &CheckEnv, block: &Block) -> Result<CheckEnv> {
        let mut env = env.clone();
        for stmt in &block.statements {
            env = self.statement(&env, stmt)?;
        }
        Ok(env)
    }

    fn statement(&mut self, env: &CheckEnv, stmt: &Statement) -> Result<CheckEnv> {
        match &stmt.kind {
            StatementKind::Val(id, rhs) => {
                self.expr(env, rhs)?;
                Ok(env.bind(id))
            }
            StatementKind::Assign(id, rhs) => {
                self.expr(env, rhs)?;
                env.rebind(id, stmt.pos)?;
                self.record(id, stmt.pos);
                Ok(env.clone())
            }
            StatementKind::Yield(e) => {
                self.expr(env, e)?;
                Ok(env.clone())
            }
            StatementKind::Begin(body) => {
                self.block(env, body)?;
                Ok(env.clone())
            }
            StatementKind::If(cond, yes, no) => {
                self.simple(env, cond)?;
                self.block(env, yes)?;
                self.block(env, no)?;
                Ok(env.clone())
            }
            StatementKind::While(cond, body) => {
                self.simple(env, cond)?;
                self.block(env, body)?;
                Ok(env.clone())
            }
            StatementKind::For(binder, source, body) => {
                self.simple(env, source)?;
                self.block(&env.bind(binder), body)?;
                Ok(env.clone())
            }
        }
    }

    fn expr(&mut self, env: &CheckEnv, expr: &Expr) -> Result<()> {
        match expr {
            Expr::Simple(se) => self.simple(env, se),
            Expr::Stmt(stmt) => self.statement(env, stmt).map(|_| ()),
        }
    }

    fn simple(&mut self, env: &CheckEnv, se: &SimpleExpr) -> Result<()> {
        self.frozen(&env.freeze(), se)
    }

    fn frozen(&mut self, env: &CheckEnv, se: &SimpleExpr) -> Result<()> {
        match &se.kind {
            SimpleExprKind::Int(_) | SimpleExprKind::Bool(_) => Ok(()),
            SimpleExprKind::Id(id) => {
                env.lookup(id, se.pos)?;
                self.record(id, se.pos);
                Ok(())
            }
            SimpleExprKind::Lambda(param, body) => self.expr(&env.bind(param), body),
            SimpleExprKind::App(a, b) | SimpleExprKind::BinOp(_, a, b) => {
                self.expr(env, a)?;
                self.expr(env, b)
            }
            SimpleExprKind::List(items) => items.iter().try_for_each(|e| self.expr(env, e)),
            SimpleExprKind::Neg(e) => self.expr(env, e),
        }
    }
}
