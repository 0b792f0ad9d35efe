use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;

use super::Env;
use crate::error::{Error, Result};
use crate::syntax::{Expr, Ident, Operator};

/// A runtime value.
///
/// Equality is structural on integers, booleans and lists; a function value
/// is only equal to itself (the same closure allocation).
#[derive(Clone, Debug)]
pub enum Value {
    Int(BigInt),
    Bool(bool),
    Fun(Arc<Closure>),
    List(Vec<Value>),
}

/// A function value. The captured environment is always frozen.
#[derive(Debug)]
pub struct Closure {
    pub param: Ident,
    pub body: Arc<Expr>,
    pub env: Env,
}

impl Value {
    pub fn int(n: impl Into<BigInt>) -> Value {
        Value::Int(n.into())
    }

    pub fn list(items: impl IntoIterator<Item = Value>) -> Value {
        Value::List(items.into_iter().collect())
    }

    pub fn type_name(&self) -> &'static str {
        match self {
            Value::Int(_) => "int",
            Value::Bool(_) => "bool",
            Value::Fun(_) => "function",
            Value::List(_) => "list",
        }
    }

    pub fn as_int(&self) -> Option<&BigInt> {
        match self {
            Value::Int(n) => Some(n),
            _ => None,
        }
    }

    fn contains_function(&self) -> bool {
        match self {
            Value::Fun(_) => true,
            Value::List(items) => items.iter().any(Value::contains_function),
            _ => false,
        }
    }
}

impl PartialEq for Value {
    fn eq(&self, other: &Value) -> bool {
        match (self, other) {
            (Value::Int(a), Value::Int(b)) => a == b,
            (Value::Bool(a), Value::Bool(b)) => a == b,
            (Value::Fun(a), Value::Fun(b)) => Arc::ptr_eq(a, b),
            (Value::List(a), Value::List(b)) => a == b,
            _ => false,
        }
    }
}

impl From<i64> for Value {
    fn from(n: i64) -> Value {
        Value::Int(BigInt::from(n))
    }
}

impl From<bool> for Value {
    fn from(b: bool) -> Value {
        Value::Bool(b)
    }
}

/// Canonical rendering: decimal integers, `true`/`false`, `[a, b]` lists and
/// `<fun>` for closures.
impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::Int(n) => write!(f, "{n}"),
            Value::Bool(b) => write!(f, "{b}"),
            Value::Fun(_) => f.write_str("<fun>"),
            Value::List(items) => {
                f.write_str("[")?;
                for (i, item) in items.iter().enumerate() {
                    if i > 0 {
                        f.write_str(", ")?;
                    }
                    write!(f, "{item}")?;
                }
                f.write_str("]")
            }
        }
    }
}

/// Applies a binary operator to two evaluated operands. Errors carry no
/// position; the evaluator attaches the operator's.
pub fn apply_binop(op: Operator, lhs: &Value, rhs: &Value) -> Result<Value> {
    use Operator::*;
    match (op, lhs, rhs) {
        (Mul, Value::Int(a), Value::Int(b)) => Ok(Value::Int(a * b)),
        (Add, Value::Int(a), Value::Int(b)) => Ok(Value::Int(a + b)),
        (Sub, Value::Int(a), Value::Int(b)) => Ok(Value::Int(a - b)),
        (Lt, Value::Int(a), Value::Int(b)) => Ok(Value::Bool(a < b)),
        (Le, Value::Int(a), Value::Int(b)) => Ok(Value::Bool(a <= b)),
        (Gt, Value::Int(a), Value::Int(b)) => Ok(Value::Bool(a > b)),
        (Ge, Value::Int(a), Value::Int(b)) => Ok(Value::Bool(a >= b)),
        (Eq, _, _) => structural_eq(op, lhs, rhs).map(Value::Bool),
        (Neq, _, _) => structural_eq(op, lhs, rhs).map(|eq| Value::Bool(!eq)),
        _ => Err(operand_error(op, lhs, rhs)),
    }
}

fn operand_error(op: Operator, lhs: &Value, rhs: &Value) -> Error {
    Error::type_error(
        format!(
            "`{op}` is not defined on {} and {}",
            lhs.type_name(),
            rhs.type_name()
        ),
        None,
    )
}

// Lists of different lengths are unequal; equal-length lists compare
// elementwise and every pair must be of matching shape.
fn structural_eq(op: Operator, lhs: &Value, rhs: &Value) -> Result<bool> {
    if lhs.contains_function() || rhs.contains_function() {
        return Err(operand_error(op, lhs, rhs));
    }
    match (lhs, rhs) {
        (Value::Int(a), Value::Int(b)) => Ok(a == b),
        (Value::Bool(a), Value::Bool(b)) => Ok(a == b),
        (Value::List(a), Value::List(b)) => {
            if a.len() != b.len() {
                return Ok(false);
            }
            let mut all = true;
            for (x, y) in a.iter().zip(b) {
                all &= structural_eq(op, x, y)?;
            }
            Ok(all)
        }
        _ => Err(operand_error(op, lhs, rhs)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::error::ErrorKind;
    use crate::syntax::build;

    fn fun() -> Value {
        Value::Fun(Arc::new(Closure {
            param: build::ident("x"),
            body: Arc::new(build::var("x")),
            env: Env::new(),
        }))
    }

    fn type_error(op: Operator, a: &Value, b: &Value) {
        let err = apply_binop(op, a, b).unwrap_err();
        assert_eq!(err.kind, ErrorKind::Type, "{op} {a} {b}");
    }

    #[test]
    fn arithmetic() {
        assert_eq!(
            apply_binop(Operator::Mul, &16.into(), &16.into()).unwrap(),
            Value::from(256)
        );
        assert_eq!(
            apply_binop(Operator::Sub, &3.into(), &5.into()).unwrap(),
            Value::from(-2)
        );
        let big = Value::Int(BigInt::from(u64::MAX));
        let sq = apply_binop(Operator::Mul, &big, &big).unwrap();
        assert_eq!(sq.to_string(), "340282366920938463426481119284349108225");
    }

    #[test]
    fn comparisons() {
        assert_eq!(
            apply_binop(Operator::Le, &2.into(), &2.into()).unwrap(),
            Value::Bool(true)
        );
        assert_eq!(
            apply_binop(Operator::Gt, &1.into(), &2.into()).unwrap(),
            Value::Bool(false)
        );
        type_error(Operator::Gt, &true.into(), &1.into());
        type_error(Operator::Lt, &Value::list([]), &Value::list([]));
    }

    #[test]
    fn structural_equality() {
        let l12 = Value::list([1.into(), 2.into()]);
        assert_eq!(
            apply_binop(Operator::Eq, &l12, &l12.clone()).unwrap(),
            Value::Bool(true)
        );
        assert_eq!(
            apply_binop(Operator::Eq, &l12, &Value::list([1.into()])).unwrap(),
            Value::Bool(false)
        );
        assert_eq!(
            apply_binop(Operator::Neq, &true.into(), &false.into()).unwrap(),
            Value::Bool(true)
        );
        type_error(Operator::Eq, &fun(), &fun());
        type_error(Operator::Eq, &1.into(), &true.into());
        type_error(Operator::Neq, &Value::list([fun()]), &Value::list([fun()]));
        type_error(
            Operator::Eq,
            &Value::list([1.into()]),
            &Value::list([true.into()]),
        );
        type_error(Operator::Add, &1.into(), &Value::list([]));
    }

    #[test]
    fn rendering() {
        let v = Value::list([
            1.into(),
            Value::from(-7),
            true.into(),
            Value::list([]),
            fun(),
        ]);
        assert_eq!(v.to_string(), "[1, -7, true, [], <fun>]");
    }

    #[test]
    fn closures_equal_only_to_themselves() {
        let f = fun();
        assert_eq!(f, f.clone());
        assert_ne!(f, fun());
    }
}
