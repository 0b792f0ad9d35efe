//! Recursive descent parser. Expressions are parsed by precedence climbing,
//! loosest to tightest:
//!
//! ```text
//! lambda `=>`  <  comparison  <  `+` `-`  <  `*`  <  unary `-`  <  application  <  atom
//! ```
//!
//! `if`, `while`, `for` and `begin` are atoms in expression position. At the
//! start of a statement they are statements, unless the tokens that follow
//! their `end` continue an expression (`begin ... end * 2`), in which case
//! the whole line is a bare trailing expression.

use std::sync::Arc;

use super::lexer::{Keyword, Token, TokenKind};
use super::{
    tokenize, Block, Expr, Ident, Operator, SimpleExpr, SimpleExprKind, SourcePos, Statement,
    StatementKind,
};
use crate::error::{Error, Result};

/// Parses a complete program from source text.
pub fn parse_program(source: &str) -> Result<Block> {
    parse(&tokenize(source)?)
}

/// Parses a token stream produced by [`tokenize`] into the program block.
pub fn parse(tokens: &[Token]) -> Result<Block> {
    let mut parser = Parser { tokens, cursor: 0 };
    let block = parser.block()?;
    match parser.peek() {
        None => Ok(block),
        Some(tok) => Err(parser.unexpected(tok)),
    }
}

struct Parser<'t> {
    tokens: &'t [Token],
    cursor: usize,
}

impl<'t> Parser<'t> {
    fn peek(&self) -> Option<&'t TokenKind> {
        self.tokens.get(self.cursor).map(|t| &t.kind)
    }

    fn peek_nth(&self, n: usize) -> Option<&'t TokenKind> {
        self.tokens.get(self.cursor + n).map(|t| &t.kind)
    }

    fn pos(&self) -> SourcePos {
        match self.tokens.get(self.cursor) {
            Some(tok) => tok.pos,
            None => self
                .tokens
                .last()
                .map(|t| SourcePos::new(t.pos.line, t.pos.column + 1))
                .unwrap_or(SourcePos::new(1, 1)),
        }
    }

    fn advance(&mut self) {
        self.cursor += 1;
    }

    fn skip_separators(&mut self) {
        while self.peek() == Some(&TokenKind::Separator) {
            self.advance();
        }
    }

    fn unexpected(&self, found: &TokenKind) -> Error {
        Error::parse(format!("unexpected {found}"), self.pos())
    }

    fn expected(&self, what: &str) -> Error {
        let found = match self.peek() {
            Some(tok) => tok.to_string(),
            None => "end of input".to_string(),
        };
        Error::parse(format!("expected {what}, found {found}"), self.pos())
    }

    fn expect(&mut self, kind: &TokenKind) -> Result<()> {
        if self.peek() == Some(kind) {
            self.advance();
            Ok(())
        } else {
            Err(self.expected(&kind.to_string()))
        }
    }

    fn expect_keyword(&mut self, kw: Keyword) -> Result<()> {
        self.skip_separators();
        self.expect(&TokenKind::Keyword(kw))
    }

    fn ident(&mut self) -> Result<Ident> {
        match self.peek() {
            Some(TokenKind::Ident(id)) => {
                self.advance();
                Ok(id.clone())
            }
            _ => Err(self.expected("an identifier")),
        }
    }

    /// A statement ends at a separator, at `end`/`else`, or at end of input.
    fn at_statement_end(&self) -> bool {
        matches!(
            self.peek(),
            None | Some(TokenKind::Separator)
                | Some(TokenKind::Keyword(Keyword::End | Keyword::Else))
        )
    }

    /// Statements up to (not including) the next `end`, `else` or end of input.
    fn block(&mut self) -> Result<Block> {
        let mut statements = Vec::new();
        loop {
            self.skip_separators();
            if matches!(
                self.peek(),
                None | Some(TokenKind::Keyword(Keyword::End | Keyword::Else))
            ) {
                break;
            }
            let (stmt, bare) = self.statement()?;
            statements.push(stmt);
            if !self.at_statement_end() {
                return Err(self.expected("end of statement"));
            }
            if bare {
                self.skip_separators();
                if !matches!(
                    self.peek(),
                    None | Some(TokenKind::Keyword(Keyword::End | Keyword::Else))
                ) {
                    return Err(Error::parse(
                        "an expression without `yield` must be the last statement of its block",
                        self.pos(),
                    ));
                }
            }
        }
        Ok(Block::new(statements))
    }

    /// Returns the statement and whether it was a bare expression (a
    /// `yield` with the keyword dropped).
    fn statement(&mut self) -> Result<(Statement, bool)> {
        let pos = self.pos();
        let kind = match self.peek() {
            Some(TokenKind::Keyword(Keyword::Val)) => {
                self.advance();
                let id = self.ident()?;
                self.expect(&TokenKind::Equals)?;
                StatementKind::Val(id, self.expr()?)
            }
            Some(TokenKind::Keyword(Keyword::Yield)) => {
                self.advance();
                StatementKind::Yield(self.expr()?)
            }
            Some(TokenKind::Ident(id)) if self.peek_nth(1) == Some(&TokenKind::Equals) => {
                self.advance();
                self.advance();
                StatementKind::Assign(id.clone(), self.expr()?)
            }
            Some(TokenKind::Keyword(
                kw @ (Keyword::If | Keyword::While | Keyword::For | Keyword::Begin),
            )) => {
                let stmt = self.control(*kw)?;
                if self.at_statement_end() {
                    return Ok((stmt, false));
                }
                let expr = self.comparison(Some(Expr::Stmt(Box::new(stmt))))?;
                return Ok((Statement::at(StatementKind::Yield(expr), pos), true));
            }
            _ => {
                let expr = self.expr()?;
                return Ok((Statement::at(StatementKind::Yield(expr), pos), true));
            }
        };
        Ok((Statement::at(kind, pos), false))
    }

    /// `if`/`while`/`for`/`begin` through the matching `end`.
    fn control(&mut self, kw: Keyword) -> Result<Statement> {
        let pos = self.pos();
        self.advance();
        let kind = match kw {
            Keyword::If => {
                let cond = self.condition()?;
                self.expect_keyword(Keyword::Then)?;
                let yes = self.block()?;
                self.expect_keyword(Keyword::Else)?;
                let no = self.block()?;
                self.expect_keyword(Keyword::End)?;
                StatementKind::If(cond, yes, no)
            }
            Keyword::While => {
                let cond = self.condition()?;
                self.expect_keyword(Keyword::Do)?;
                let body = self.block()?;
                self.expect_keyword(Keyword::End)?;
                StatementKind::While(cond, body)
            }
            Keyword::For => {
                self.skip_separators();
                let binder = self.ident()?;
                self.expect_keyword(Keyword::In)?;
                let source = self.condition()?;
                self.expect_keyword(Keyword::Do)?;
                let body = self.block()?;
                self.expect_keyword(Keyword::End)?;
                StatementKind::For(binder, source, body)
            }
            Keyword::Begin => {
                let body = self.block()?;
                self.expect_keyword(Keyword::End)?;
                StatementKind::Begin(body)
            }
            _ => unreachable!("not a control keyword"),
        };
        Ok(Statement::at(kind, pos))
    }

    fn condition(&mut self) -> Result<SimpleExpr> {
        match self.expr()? {
            Expr::Simple(se) => Ok(se),
            Expr::Stmt(s) => Err(Error::parse(
                format!(
                    "a `{}` statement cannot be used as a condition",
                    s.kind_name()
                ),
                s.pos,
            )),
        }
    }

    fn expr(&mut self) -> Result<Expr> {
        self.skip_separators();
        if let (Some(TokenKind::Ident(param)), Some(TokenKind::Arrow)) =
            (self.peek(), self.peek_nth(1))
        {
            let pos = self.pos();
            self.advance();
            self.advance();
            let body = self.expr()?;
            return Ok(simple(
                SimpleExprKind::Lambda(param.clone(), Arc::new(body)),
                pos,
            ));
        }
        self.comparison(None)
    }

    fn comparison(&mut self, first: Option<Expr>) -> Result<Expr> {
        let lhs = self.additive(first)?;
        match self.peek() {
            Some(TokenKind::Op(op)) if op.is_comparison() => {
                let pos = self.pos();
                self.advance();
                let rhs = self.additive(None)?;
                if let Some(TokenKind::Op(next)) = self.peek() {
                    if next.is_comparison() {
                        return Err(Error::parse(
                            "comparison operators cannot be chained",
                            self.pos(),
                        ));
                    }
                }
                Ok(binary(*op, lhs, rhs, pos))
            }
            _ => Ok(lhs),
        }
    }

    fn additive(&mut self, first: Option<Expr>) -> Result<Expr> {
        let mut lhs = self.multiplicative(first)?;
        while let Some(TokenKind::Op(op @ (Operator::Add | Operator::Sub))) = self.peek() {
            let pos = self.pos();
            self.advance();
            let rhs = self.multiplicative(None)?;
            lhs = binary(*op, lhs, rhs, pos);
        }
        Ok(lhs)
    }

    fn multiplicative(&mut self, first: Option<Expr>) -> Result<Expr> {
        let mut lhs = self.unary(first)?;
        while let Some(TokenKind::Op(Operator::Mul)) = self.peek() {
            let pos = self.pos();
            self.advance();
            let rhs = self.unary(None)?;
            lhs = binary(Operator::Mul, lhs, rhs, pos);
        }
        Ok(lhs)
    }

    fn unary(&mut self, first: Option<Expr>) -> Result<Expr> {
        if first.is_none() {
            self.skip_separators();
            if let Some(TokenKind::Op(Operator::Sub)) = self.peek() {
                let pos = self.pos();
                self.advance();
                let operand = self.unary(None)?;
                return Ok(simple(SimpleExprKind::Neg(Box::new(operand)), pos));
            }
        }
        self.application(first)
    }

    fn application(&mut self, first: Option<Expr>) -> Result<Expr> {
        let mut func = match first {
            Some(e) => e,
            None => self.atom()?,
        };
        while self.at_atom_start() {
            let pos = func.pos();
            let arg = self.atom()?;
            func = simple(SimpleExprKind::App(Box::new(func), Box::new(arg)), pos);
        }
        Ok(func)
    }

    fn at_atom_start(&self) -> bool {
        matches!(
            self.peek(),
            Some(
                TokenKind::Int(_)
                    | TokenKind::Bool(_)
                    | TokenKind::Ident(_)
                    | TokenKind::LParen
                    | TokenKind::LBracket
                    | TokenKind::Keyword(
                        Keyword::If | Keyword::While | Keyword::For | Keyword::Begin
                    )
            )
        )
    }

    fn atom(&mut self) -> Result<Expr> {
        self.skip_separators();
        let pos = self.pos();
        let Some(tok) = self.peek() else {
            return Err(self.expected("an expression"));
        };
        let kind = match tok {
            TokenKind::Int(n) => SimpleExprKind::Int(n.clone()),
            TokenKind::Bool(b) => SimpleExprKind::Bool(*b),
            TokenKind::Ident(id) => SimpleExprKind::Id(id.clone()),
            TokenKind::LParen => {
                self.advance();
                let inner = self.expr()?;
                self.skip_separators();
                self.expect(&TokenKind::RParen)?;
                return Ok(inner);
            }
            TokenKind::LBracket => {
                self.advance();
                let items = self.list_items()?;
                return Ok(simple(SimpleExprKind::List(items), pos));
            }
            TokenKind::Keyword(
                kw @ (Keyword::If | Keyword::While | Keyword::For | Keyword::Begin),
            ) => {
                return Ok(Expr::Stmt(Box::new(self.control(*kw)?)));
            }
            _ => return Err(self.expected("an expression")),
        };
        self.advance();
        Ok(simple(kind, pos))
    }

    fn list_items(&mut self) -> Result<Vec<Expr>> {
        let mut items = Vec::new();
        self.skip_separators();
        if self.peek() == Some(&TokenKind::RBracket) {
            self.advance();
            return Ok(items);
        }
        loop {
            items.push(self.expr()?);
            self.skip_separators();
            match self.peek() {
                Some(TokenKind::Comma) => self.advance(),
                Some(TokenKind::RBracket) => {
                    self.advance();
                    return Ok(items);
                }
                _ => return Err(self.expected("`,` or `]`")),
            }
        }
    }
}

fn simple(kind: SimpleExprKind, pos: SourcePos) -> Expr {
    Expr::Simple(SimpleExpr::at(kind, pos))
}

fn binary(op: Operator, lhs: Expr, rhs: Expr, pos: SourcePos) -> Expr {
    simple(SimpleExprKind::BinOp(op, Box::new(lhs), Box::new(rhs)), pos)
}
