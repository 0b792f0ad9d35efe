//! Abstract syntax of Mini Babel-17 together with its lexer, parser and
//! pretty-printer.
//!
//! Every statement and simple-expression carries the [`SourcePos`] it was
//! parsed at. Positions participate in `==`; use [`Block::without_positions`]
//! to compare trees by shape only.

mod lexer;
mod parser;
mod pretty;

use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;

pub use crate::error::SourcePos;
use crate::error::{Error, Result};

pub use lexer::{tokenize, Keyword, Token, TokenKind};
pub use parser::{parse, parse_program};
pub use pretty::pretty_print;

pub const KEYWORDS: &[&str] = &[
    "val", "yield", "if", "then", "else", "end", "while", "do", "for", "in", "begin", "true",
    "false",
];

/// An identifier: `[A-Za-z_][A-Za-z0-9_]*`, never a keyword.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Ident(Arc<str>);

impl Ident {
    pub fn new(name: &str) -> Result<Ident> {
        if is_identifier(name) {
            Ok(Ident(Arc::from(name)))
        } else {
            Err(Error::parse(
                format!("`{name}` is not a valid identifier"),
                SourcePos::default(),
            ))
        }
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

pub fn is_identifier(name: &str) -> bool {
    let mut chars = name.chars();
    let head_ok = matches!(chars.next(), Some(c) if c.is_ascii_alphabetic() || c == '_');
    head_ok && chars.all(|c| c.is_ascii_alphanumeric() || c == '_') && !KEYWORDS.contains(&name)
}

impl fmt::Debug for Ident {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl fmt::Display for Ident {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Block {
    pub statements: Vec<Statement>,
}

impl Block {
    pub fn new(statements: Vec<Statement>) -> Self {
        Block { statements }
    }

    pub fn is_empty(&self) -> bool {
        self.statements.is_empty()
    }

    /// Copy of this tree with every position reset to the default.
    pub fn without_positions(&self) -> Block {
        Block::new(
            self.statements
                .iter()
                .map(Statement::without_positions)
                .collect(),
        )
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Statement {
    pub kind: StatementKind,
    pub pos: SourcePos,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum StatementKind {
    Val(Ident, Expr),
    Assign(Ident, Expr),
    Yield(Expr),
    If(SimpleExpr, Block, Block),
    While(SimpleExpr, Block),
    For(Ident, SimpleExpr, Block),
    Begin(Block),
}

impl Statement {
    pub fn new(kind: StatementKind) -> Self {
        Statement {
            kind,
            pos: SourcePos::default(),
        }
    }

    pub fn at(kind: StatementKind, pos: SourcePos) -> Self {
        Statement { kind, pos }
    }

    /// Short name of the statement's variant, as shown in traces.
    pub fn kind_name(&self) -> &'static str {
        match self.kind {
            StatementKind::Val(..) => "val",
            StatementKind::Assign(..) => "assign",
            StatementKind::Yield(..) => "yield",
            StatementKind::If(..) => "if",
            StatementKind::While(..) => "while",
            StatementKind::For(..) => "for",
            StatementKind::Begin(..) => "begin",
        }
    }

    /// Whether this statement may appear in expression position.
    pub fn is_expression_statement(&self) -> bool {
        matches!(
            self.kind,
            StatementKind::If(..)
                | StatementKind::While(..)
                | StatementKind::For(..)
                | StatementKind::Begin(..)
        )
    }

    pub fn without_positions(&self) -> Statement {
        use StatementKind::*;
        let kind = match &self.kind {
            Val(id, e) => Val(id.clone(), e.without_positions()),
            Assign(id, e) => Assign(id.clone(), e.without_positions()),
            Yield(e) => Yield(e.without_positions()),
            If(c, t, f) => If(
                c.without_positions(),
                t.without_positions(),
                f.without_positions(),
            ),
            While(c, b) => While(c.without_positions(), b.without_positions()),
            For(id, s, b) => For(id.clone(), s.without_positions(), b.without_positions()),
            Begin(b) => Begin(b.without_positions()),
        };
        Statement::new(kind)
    }
}

/// Either a simple-expression or one of the statements allowed in
/// expression position (`if`, `while`, `for`, `begin`).
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Expr {
    Simple(SimpleExpr),
    Stmt(Box<Statement>),
}

impl Expr {
    pub fn without_positions(&self) -> Expr {
        match self {
            Expr::Simple(se) => Expr::Simple(se.without_positions()),
            Expr::Stmt(s) => Expr::Stmt(Box::new(s.without_positions())),
        }
    }

    pub fn pos(&self) -> SourcePos {
        match self {
            Expr::Simple(se) => se.pos,
            Expr::Stmt(s) => s.pos,
        }
    }
}

impl From<SimpleExpr> for Expr {
    fn from(se: SimpleExpr) -> Self {
        Expr::Simple(se)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SimpleExpr {
    pub kind: SimpleExprKind,
    pub pos: SourcePos,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SimpleExprKind {
    Int(BigInt),
    Bool(bool),
    Id(Ident),
    /// The body is shared with every closure built from this lambda.
    Lambda(Ident, Arc<Expr>),
    App(Box<Expr>, Box<Expr>),
    BinOp(Operator, Box<Expr>, Box<Expr>),
    List(Vec<Expr>),
    Neg(Box<Expr>),
}

impl SimpleExpr {
    pub fn new(kind: SimpleExprKind) -> Self {
        SimpleExpr {
            kind,
            pos: SourcePos::default(),
        }
    }

    pub fn at(kind: SimpleExprKind, pos: SourcePos) -> Self {
        SimpleExpr { kind, pos }
    }

    pub fn without_positions(&self) -> SimpleExpr {
        use SimpleExprKind::*;
        let strip = |e: &Expr| Box::new(e.without_positions());
        let kind = match &self.kind {
            Int(n) => Int(n.clone()),
            Bool(b) => Bool(*b),
            Id(id) => Id(id.clone()),
            Lambda(p, body) => Lambda(p.clone(), Arc::new(body.without_positions())),
            App(f, a) => App(strip(f), strip(a)),
            BinOp(op, l, r) => BinOp(*op, strip(l), strip(r)),
            List(items) => List(items.iter().map(Expr::without_positions).collect()),
            Neg(e) => Neg(strip(e)),
        };
        SimpleExpr::new(kind)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Operator {
    Mul,
    Add,
    Sub,
    Eq,
    Neq,
    Lt,
    Le,
    Gt,
    Ge,
}

impl Operator {
    pub const ALL: [Operator; 9] = [
        Operator::Mul,
        Operator::Add,
        Operator::Sub,
        Operator::Eq,
        Operator::Neq,
        Operator::Lt,
        Operator::Le,
        Operator::Gt,
        Operator::Ge,
    ];

    pub fn symbol(self) -> &'static str {
        match self {
            Operator::Mul => "*",
            Operator::Add => "+",
            Operator::Sub => "-",
            Operator::Eq => "==",
            Operator::Neq => "!=",
            Operator::Lt => "<",
            Operator::Le => "<=",
            Operator::Gt => ">",
            Operator::Ge => ">=",
        }
    }

    pub fn is_comparison(self) -> bool {
        !matches!(self, Operator::Mul | Operator::Add | Operator::Sub)
    }
}

impl fmt::Display for Operator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.symbol())
    }
}

/// Terse AST constructors, mostly for tests and the program generator.
/// All nodes get the default position.
pub mod build {
    use super::*;

    pub fn ident(name: &str) -> Ident {
        Ident::new(name).expect("valid identifier")
    }

    pub fn int(n: i64) -> Expr {
        SimpleExpr::new(SimpleExprKind::Int(BigInt::from(n))).into()
    }

    pub fn boolean(b: bool) -> Expr {
        SimpleExpr::new(SimpleExprKind::Bool(b)).into()
    }

    pub fn var(name: &str) -> Expr {
        SimpleExpr::new(SimpleExprKind::Id(ident(name))).into()
    }

    pub fn lambda(param: &str, body: Expr) -> Expr {
        SimpleExpr::new(SimpleExprKind::Lambda(ident(param), Arc::new(body))).into()
    }

    pub fn app(f: Expr, arg: Expr) -> Expr {
        SimpleExpr::new(SimpleExprKind::App(Box::new(f), Box::new(arg))).into()
    }

    pub fn binop(op: Operator, lhs: Expr, rhs: Expr) -> Expr {
        SimpleExpr::new(SimpleExprKind::BinOp(op, Box::new(lhs), Box::new(rhs))).into()
    }

    pub fn list(items: Vec<Expr>) -> Expr {
        SimpleExpr::new(SimpleExprKind::List(items)).into()
    }

    pub fn neg(e: Expr) -> Expr {
        SimpleExpr::new(SimpleExprKind::Neg(Box::new(e))).into()
    }

    pub fn stmt_expr(s: Statement) -> Expr {
        Expr::Stmt(Box::new(s))
    }

    /// Unwraps a simple expression; panics on a statement-expression.
    pub fn simple(e: Expr) -> SimpleExpr {
        match e {
            Expr::Simple(se) => se,
            Expr::Stmt(_) => panic!("expected a simple expression"),
        }
    }

    pub fn val(name: &str, e: Expr) -> Statement {
        Statement::new(StatementKind::Val(ident(name), e))
    }

    pub fn assign(name: &str, e: Expr) -> Statement {
        Statement::new(StatementKind::Assign(ident(name), e))
    }

    pub fn yield_(e: Expr) -> Statement {
        Statement::new(StatementKind::Yield(e))
    }

    pub fn if_(cond: Expr, yes: Vec<Statement>, no: Vec<Statement>) -> Statement {
        Statement::new(StatementKind::If(
            simple(cond),
            Block::new(yes),
            Block::new(no),
        ))
    }

    pub fn while_(cond: Expr, body: Vec<Statement>) -> Statement {
        Statement::new(StatementKind::While(simple(cond), Block::new(body)))
    }

    pub fn for_(binder: &str, source: Expr, body: Vec<Statement>) -> Statement {
        Statement::new(StatementKind::For(
            ident(binder),
            simple(source),
            Block::new(body),
        ))
    }

    pub fn begin(body: Vec<Statement>) -> Statement {
        Statement::new(StatementKind::Begin(Block::new(body)))
    }

    pub fn block(statements: Vec<Statement>) -> Block {
        Block::new(statements)
    }
}
