//! Canonical source rendering: one statement per line, two-space indent,
//! explicit `yield` everywhere and the minimum parentheses the precedence
//! ladder needs. `parse_program(&pretty_print(b))` reproduces `b` up to
//! positions for every tree the parser can produce.

use std::fmt::Write;

use super::{Block, Expr, Operator, SimpleExpr, SimpleExprKind, Statement, StatementKind};

const LAMBDA: u8 = 0;
const COMPARISON: u8 = 1;
const ADDITIVE: u8 = 2;
const MULTIPLICATIVE: u8 = 3;
const UNARY: u8 = 4;
const APPLICATION: u8 = 5;
const ATOM: u8 = 6;

pub fn pretty_print(block: &Block) -> String {
    let mut out = String::new();
    Printer { out: &mut out }.block(block, 0);
    out
}

struct Printer<'a> {
    out: &'a mut String,
}

impl Printer<'_> {
    fn line_start(&mut self, indent: usize) {
        for _ in 0..indent {
            self.out.push_str("  ");
        }
    }

    fn block(&mut self, block: &Block, indent: usize) {
        for stmt in &block.statements {
            self.line_start(indent);
            self.statement(stmt, indent);
            self.out.push('\n');
        }
    }

    fn statement(&mut self, stmt: &Statement, indent: usize) {
        match &stmt.kind {
            StatementKind::Val(id, e) => {
                write!(self.out, "val {id} = ").unwrap();
                self.expr(e, LAMBDA, indent);
            }
            StatementKind::Assign(id, e) => {
                write!(self.out, "{id} = ").unwrap();
                self.expr(e, LAMBDA, indent);
            }
            StatementKind::Yield(e) => {
                self.out.push_str("yield ");
                self.expr(e, LAMBDA, indent);
            }
            StatementKind::If(cond, yes, no) => {
                self.out.push_str("if ");
                self.simple(cond, LAMBDA, indent);
                self.out.push_str(" then\n");
                self.block(yes, indent + 1);
                self.line_start(indent);
                self.out.push_str("else\n");
                self.block(no, indent + 1);
                self.line_start(indent);
                self.out.push_str("end");
            }
            StatementKind::While(cond, body) => {
                self.out.push_str("while ");
                self.simple(cond, LAMBDA, indent);
                self.out.push_str(" do\n");
                self.block(body, indent + 1);
                self.line_start(indent);
                self.out.push_str("end");
            }
            StatementKind::For(binder, source, body) => {
                write!(self.out, "for {binder} in ").unwrap();
                self.simple(source, LAMBDA, indent);
                self.out.push_str(" do\n");
                self.block(body, indent + 1);
                self.line_start(indent);
                self.out.push_str("end");
            }
            StatementKind::Begin(body) => {
                self.out.push_str("begin\n");
                self.block(body, indent + 1);
                self.line_start(indent);
                self.out.push_str("end");
            }
        }
    }

    fn expr(&mut self, e: &Expr, min_level: u8, indent: usize) {
        match e {
            Expr::Simple(se) => self.simple(se, min_level, indent),
            Expr::Stmt(stmt) => self.statement(stmt, indent),
        }
    }

    fn simple(&mut self, se: &SimpleExpr, min_level: u8, indent: usize) {
        let level = level_of(se);
        let parens = level < min_level;
        if parens {
            self.out.push('(');
        }
        match &se.kind {
            SimpleExprKind::Int(n) => write!(self.out, "{n}").unwrap(),
            SimpleExprKind::Bool(b) => write!(self.out, "{b}").unwrap(),
            SimpleExprKind::Id(id) => self.out.push_str(id.as_str()),
            SimpleExprKind::Lambda(param, body) => {
                write!(self.out, "{param} => ").unwrap();
                self.expr(body, LAMBDA, indent);
            }
            SimpleExprKind::App(func, arg) => {
                self.expr(func, APPLICATION, indent);
                self.out.push(' ');
                self.expr(arg, ATOM, indent);
            }
            SimpleExprKind::BinOp(op, lhs, rhs) => {
                let (left, right) = match op {
                    Operator::Mul => (MULTIPLICATIVE, UNARY),
                    Operator::Add | Operator::Sub => (ADDITIVE, MULTIPLICATIVE),
                    _ => (ADDITIVE, ADDITIVE),
                };
                self.expr(lhs, left, indent);
                write!(self.out, " {op} ").unwrap();
                self.expr(rhs, right, indent);
            }
            SimpleExprKind::List(items) => {
                self.out.push('[');
                for (i, item) in items.iter().enumerate() {
                    if i > 0 {
                        self.out.push_str(", ");
                    }
                    self.expr(item, LAMBDA, indent);
                }
                self.out.push(']');
            }
            SimpleExprKind::Neg(operand) => {
                self.out.push('-');
                self.expr(operand, UNARY, indent);
            }
        }
        if parens {
            self.out.push(')');
        }
    }
}

fn level_of(se: &SimpleExpr) -> u8 {
    match &se.kind {
        SimpleExprKind::Int(n) if n.sign() == num_bigint::Sign::Minus => UNARY,
        SimpleExprKind::Int(_)
        | SimpleExprKind::Bool(_)
        | SimpleExprKind::Id(_)
        | SimpleExprKind::List(_) => ATOM,
        SimpleExprKind::Lambda(..) => LAMBDA,
        SimpleExprKind::App(..) => APPLICATION,
        SimpleExprKind::Neg(_) => UNARY,
        SimpleExprKind::BinOp(op, ..) => match op {
            Operator::Mul => MULTIPLICATIVE,
            Operator::Add | Operator::Sub => ADDITIVE,
            _ => COMPARISON,
        },
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::build::*;
    use crate::syntax::parse_program;
    use Operator::*;

    fn round_trips(b: &Block) {
        let text = pretty_print(b);
        let back = parse_program(&text).unwrap_or_else(|e| panic!("{e}\n{text}"));
        assert_eq!(back.without_positions(), b.without_positions(), "\n{text}");
    }

    #[test]
    fn canonical_layout() {
        let b = block(vec![
            val("x", int(2)),
            begin(vec![
                val("y", binop(Mul, var("x"), var("x"))),
                assign("x", var("y")),
            ]),
            yield_(binop(Add, var("x"), var("x"))),
        ]);
        assert_eq!(
            pretty_print(&b),
            "val x = 2\nbegin\n  val y = x * x\n  x = y\nend\nyield x + x\n"
        );
        round_trips(&b);
    }

    #[test]
    fn parenthesizes_by_precedence() {
        let e = binop(
            Mul,
            binop(Add, int(1), int(2)),
            app(lambda("x", var("x")), neg(int(3))),
        );
        let b = block(vec![yield_(e)]);
        assert_eq!(pretty_print(&b), "yield (1 + 2) * (x => x) (-3)\n");
        round_trips(&b);
    }

    #[test]
    fn associativity() {
        round_trips(&block(vec![yield_(binop(
            Sub,
            var("a"),
            binop(Sub, var("b"), var("c")),
        ))]));
        round_trips(&block(vec![yield_(app(var("f"), app(var("g"), var("x"))))]));
        round_trips(&block(vec![yield_(binop(
            Eq,
            binop(Lt, int(1), int(2)),
            boolean(true),
        ))]));
        round_trips(&block(vec![yield_(neg(neg(var("x"))))]));
        round_trips(&block(vec![yield_(binop(Sub, var("x"), neg(int(1))))]));
    }

    #[test]
    fn statement_expressions_inside_expressions() {
        let b = block(vec![
            val(
                "z",
                binop(
                    Mul,
                    stmt_expr(begin(vec![yield_(int(1))])),
                    app(stmt_expr(if_(boolean(true), vec![], vec![])), int(1)),
                ),
            ),
            yield_(stmt_expr(while_(
                binop(Eq, stmt_expr(begin(vec![])), list(vec![])),
                vec![],
            ))),
            for_(
                "i",
                list(vec![int(1), lambda("q", var("q"))]),
                vec![yield_(var("i"))],
            ),
        ]);
        round_trips(&b);
    }
}
