use std::sync::Arc;

use num_bigint::BigInt;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::syntax::{
    Block, Expr, Ident, Operator, SimpleExpr, SimpleExprKind, Statement, StatementKind,
};

#[derive(Clone, Debug)]
pub struct GeneratorConfig {
    pub max_depth: u32,
    /// Identifiers are drawn from here with no regard to scope.
    pub identifier_pool: Vec<Ident>,
    /// Maximum length of generated list literals, and so of `for` loops.
    pub loop_bound: usize,
    /// `while` loops may diverge; callers enabling them need a step budget.
    pub include_while: bool,
    pub seed: u64,
}

impl Default for GeneratorConfig {
    fn default() -> Self {
        GeneratorConfig {
            max_depth: 6,
            identifier_pool: ["x", "y"].iter().map(|n| Ident::new(n).unwrap()).collect(),
            loop_bound: 3,
            include_while: false,
            seed: 0,
        }
    }
}

impl GeneratorConfig {
    pub fn with_seed(&self, seed: u64) -> Self {
        GeneratorConfig {
            seed,
            ..self.clone()
        }
    }
}

/// Builds a random program from the grammar. The same config always gives
/// the same program. Depth 0 gives a single integer yield.
pub fn generate_program(config: &GeneratorConfig) -> Block {
    assert!(!config.identifier_pool.is_empty(), "empty identifier pool");
    let mut gen = Generator {
        rng: ChaCha8Rng::seed_from_u64(config.seed),
        config,
    };
    if config.max_depth == 0 {
        let n = gen.rng.gen_range(0..10);
        return Block::new(vec![Statement::new(StatementKind::Yield(int(n)))]);
    }
    let mut statements = Vec::new();
    if gen.rng.gen_bool(0.5) {
        for id in &config.identifier_pool {
            let rhs = gen.expr(1);
            statements.push(Statement::new(StatementKind::Val(id.clone(), rhs)));
        }
    }
    statements.extend(gen.block(config.max_depth).statements);
    Block::new(statements)
}

struct Generator<'c> {
    rng: ChaCha8Rng,
    config: &'c GeneratorConfig,
}

fn int(n: i64) -> Expr {
    Expr::Simple(SimpleExpr::new(SimpleExprKind::Int(BigInt::from(n))))
}

impl Generator<'_> {
    fn ident(&mut self) -> Ident {
        self.config
            .identifier_pool
            .choose(&mut self.rng)
            .expect("nonempty pool")
            .clone()
    }

    fn block(&mut self, depth: u32) -> Block {
        let len = self.rng.gen_range(0..=3);
        Block::new((0..len).map(|_| self.statement(depth)).collect())
    }

    fn statement(&mut self, depth: u32) -> Statement {
        let inner = depth.saturating_sub(1);
        let choices = if depth == 0 {
            3
        } else if self.config.include_while {
            7
        } else {
            6
        };
        let kind = match self.rng.gen_range(0..choices) {
            0 => StatementKind::Val(self.ident(), self.expr(inner)),
            1 => StatementKind::Assign(self.ident(), self.expr(inner)),
            2 => StatementKind::Yield(self.expr(inner)),
            3 => StatementKind::If(self.simple(inner), self.block(inner), self.block(inner)),
            4 => StatementKind::For(self.ident(), self.for_source(inner), self.block(inner)),
            5 => StatementKind::Begin(self.block(inner)),
            _ => StatementKind::While(self.simple(inner), self.block(inner)),
        };
        Statement::new(kind)
    }

    fn for_source(&mut self, depth: u32) -> SimpleExpr {
        if self.rng.gen_bool(0.8) {
            self.list(depth)
        } else {
            self.simple(depth)
        }
    }

    fn list(&mut self, depth: u32) -> SimpleExpr {
        let len = self.rng.gen_range(0..=self.config.loop_bound);
        SimpleExpr::new(SimpleExprKind::List(
            (0..len)
                .map(|_| self.expr(depth.saturating_sub(1)))
                .collect(),
        ))
    }

    fn expr(&mut self, depth: u32) -> Expr {
        if depth > 0 && self.rng.gen_bool(0.15) {
            let mut stmt = self.statement(depth);
            while !stmt.is_expression_statement() {
                stmt = self.statement(depth);
            }
            Expr::Stmt(Box::new(stmt))
        } else {
            Expr::Simple(self.simple(depth))
        }
    }

    fn leaf(&mut self) -> SimpleExpr {
        let kind = match self.rng.gen_range(0..5) {
            0 | 1 => SimpleExprKind::Int(BigInt::from(self.rng.gen_range(0..10))),
            2 => SimpleExprKind::Bool(self.rng.gen_bool(0.5)),
            _ => SimpleExprKind::Id(self.ident()),
        };
        SimpleExpr::new(kind)
    }

    fn simple(&mut self, depth: u32) -> SimpleExpr {
        if depth == 0 || self.rng.gen_bool(0.3) {
            return self.leaf();
        }
        let inner = depth - 1;
        let boxed = |e: Expr| Box::new(e);
        let kind = match self.rng.gen_range(0..5) {
            0 => SimpleExprKind::Lambda(self.ident(), Arc::new(self.expr(inner))),
            1 => SimpleExprKind::App(boxed(self.expr(inner)), boxed(self.expr(inner))),
            2 => {
                let op = *Operator::ALL.choose(&mut self.rng).unwrap();
                SimpleExprKind::BinOp(op, boxed(self.expr(inner)), boxed(self.expr(inner)))
            }
            3 => return self.list(depth),
            _ => SimpleExprKind::Neg(boxed(self.expr(inner))),
        };
        SimpleExpr::new(kind)
    }
}
