use std::sync::Arc;

use crate::syntax::{Block, Expr, SimpleExpr, SimpleExprKind, Statement, StatementKind};

/// Greedily deletes statements, anywhere in the tree, while `fails` keeps
/// holding. The result is locally minimal: deleting any single further
/// statement makes `fails` false.
pub fn shrink(program: &Block, mut fails: impl FnMut(&Block) -> bool) -> Block {
    let mut current = program.clone();
    'outer: loop {
        for candidate in one_statement_removals(&current) {
            if fails(&candidate) {
                current = candidate;
                continue 'outer;
            }
        }
        return current;
    }
}

/// Every program obtained by deleting exactly one statement, including
/// statements nested in expressions and lambda bodies.
pub fn one_statement_removals(block: &Block) -> Vec<Block> {
    block_variants(block)
}

fn block_variants(block: &Block) -> Vec<Block> {
    let stmts = &block.statements;
    let mut out = Vec::new();
    for i in 0..stmts.len() {
        let mut without = stmts.clone();
        without.remove(i);
        out.push(Block::new(without));
    }
    for (i, stmt) in stmts.iter().enumerate() {
        for variant in statement_variants(stmt) {
            let mut replaced = stmts.clone();
            replaced[i] = variant;
            out.push(Block::new(replaced));
        }
    }
    out
}

fn statement_variants(stmt: &Statement) -> Vec<Statement> {
    let with = |kind| Statement::at(kind, stmt.pos);
    match &stmt.kind {
        StatementKind::Val(id, e) => expr_variants(e)
            .into_iter()
            .map(|e| with(StatementKind::Val(id.clone(), e)))
            .collect(),
        StatementKind::Assign(id, e) => expr_variants(e)
            .into_iter()
            .map(|e| with(StatementKind::Assign(id.clone(), e)))
            .collect(),
        StatementKind::Yield(e) => expr_variants(e)
            .into_iter()
            .map(|e| with(StatementKind::Yield(e)))
            .collect(),
        StatementKind::If(c, yes, no) => {
            let mut out: Vec<Statement> = simple_variants(c)
                .into_iter()
                .map(|c| with(StatementKind::If(c, yes.clone(), no.clone())))
                .collect();
            out.extend(
                block_variants(yes)
                    .into_iter()
                    .map(|y| with(StatementKind::If(c.clone(), y, no.clone()))),
            );
            out.extend(
                block_variants(no)
                    .into_iter()
                    .map(|n| with(StatementKind::If(c.clone(), yes.clone(), n))),
            );
            out
        }
        StatementKind::While(c, body) => {
            let mut out: Vec<Statement> = simple_variants(c)
                .into_iter()
                .map(|c| with(StatementKind::While(c, body.clone())))
                .collect();
            out.extend(
                block_variants(body)
                    .into_iter()
                    .map(|b| with(StatementKind::While(c.clone(), b))),
            );
            out
        }
        StatementKind::For(id, src, body) => {
            let mut out: Vec<Statement> = simple_variants(src)
                .into_iter()
                .map(|s| with(StatementKind::For(id.clone(), s, body.clone())))
                .collect();
            out.extend(
                block_variants(body)
                    .into_iter()
                    .map(|b| with(StatementKind::For(id.clone(), src.clone(), b))),
            );
            out
        }
        StatementKind::Begin(body) => block_variants(body)
            .into_iter()
            .map(|b| with(StatementKind::Begin(b)))
            .collect(),
    }
}

fn expr_variants(expr: &Expr) -> Vec<Expr> {
    match expr {
        Expr::Simple(se) => simple_variants(se).into_iter().map(Expr::Simple).collect(),
        Expr::Stmt(s) => statement_variants(s)
            .into_iter()
            .map(|s| Expr::Stmt(Box::new(s)))
            .collect(),
    }
}

fn simple_variants(se: &SimpleExpr) -> Vec<SimpleExpr> {
    let with = |kind| SimpleExpr::at(kind, se.pos);
    let boxed = |e: &Expr| Box::new(e.clone());
    match &se.kind {
        SimpleExprKind::Int(_) | SimpleExprKind::Bool(_) | SimpleExprKind::Id(_) => Vec::new(),
        SimpleExprKind::Lambda(p, body) => expr_variants(body)
            .into_iter()
            .map(|b| with(SimpleExprKind::Lambda(p.clone(), Arc::new(b))))
            .collect(),
        SimpleExprKind::App(f, a) => {
            let mut out: Vec<SimpleExpr> = expr_variants(f)
                .into_iter()
                .map(|f| with(SimpleExprKind::App(Box::new(f), boxed(a))))
                .collect();
            out.extend(
                expr_variants(a)
                    .into_iter()
                    .map(|a| with(SimpleExprKind::App(boxed(f), Box::new(a)))),
            );
            out
        }
        SimpleExprKind::BinOp(op, l, r) => {
            let mut out: Vec<SimpleExpr> = expr_variants(l)
                .into_iter()
                .map(|l| with(SimpleExprKind::BinOp(*op, Box::new(l), boxed(r))))
                .collect();
            out.extend(
                expr_variants(r)
                    .into_iter()
                    .map(|r| with(SimpleExprKind::BinOp(*op, boxed(l), Box::new(r)))),
            );
            out
        }
        SimpleExprKind::List(items) => {
            let mut out = Vec::new();
            for (i, item) in items.iter().enumerate() {
                for variant in expr_variants(item) {
                    let mut replaced = items.clone();
                    replaced[i] = variant;
                    out.push(with(SimpleExprKind::List(replaced)));
                }
            }
            out
        }
        SimpleExprKind::Neg(e) => expr_variants(e)
            .into_iter()
            .map(|e| with(SimpleExprKind::Neg(Box::new(e))))
            .collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::conformance::{generate_program, GeneratorConfig};
    use crate::syntax::{parse_program, pretty_print};

    fn count_statements(b: &Block) -> usize {
        // Each statement line in the canonical print starts a statement,
        // except the `else`/`end` lines.
        pretty_print(b)
            .lines()
            .map(str::trim_start)
            .filter(|l| *l != "else" && !l.starts_with("end"))
            .count()
    }

    #[test]
    fn removals_cover_nested_statements() {
        let b = parse_program("val f = x => begin yield 1; yield 2 end\nif true then 3 else end")
            .unwrap();
        let variants = one_statement_removals(&b);
        // 2 top-level + 2 inside the lambda body + 1 in the then-branch
        assert_eq!(variants.len(), 5);
        let total = count_statements(&b);
        let single: Vec<usize> = variants.iter().map(count_statements).collect();
        // Deleting the `val` or the `if` also deletes what is nested in them.
        assert_eq!(
            single,
            vec![total - 3, total - 2, total - 1, total - 1, total - 1]
        );
    }

    #[test]
    fn shrunk_counterexample_is_locally_minimal() {
        let has_assign = |b: &Block| {
            pretty_print(b).lines().any(|l| {
                let l = l.trim_start();
                l.starts_with("x = ") || l.starts_with("y = ")
            })
        };
        let cfg = GeneratorConfig::default();
        let mut shrunk_some = 0;
        for seed in 0..200 {
            let program = generate_program(&cfg.with_seed(seed));
            if !has_assign(&program) {
                continue;
            }
            let small = shrink(&program, has_assign);
            assert!(has_assign(&small));
            for candidate in one_statement_removals(&small) {
                assert!(!has_assign(&candidate));
            }
            shrunk_some += 1;
        }
        assert!(shrunk_some > 10);
    }
}
