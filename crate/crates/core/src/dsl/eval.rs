use std::fmt;

use serde_json::{json, Value as Json};

use super::lexer::Pos;
use super::parser::{Expr, Node};
use crate::env::{to_pair, Binding, Env};
use crate::error::{Error, Result};
use crate::hilbert::{inner, Bra, Complex, Ket, Operator};
use crate::operator::tern_op;
use crate::vector::{tern_dual, tern_vec};

#[derive(Clone, Debug, PartialEq)]
pub enum Value {
    Scalar(Complex),
    Ket(Ket),
    Bra(Bra),
    Op(Operator),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Kind {
    Scalar,
    Ket,
    Bra,
    Op,
}

impl Kind {
    pub fn name(self) -> &'static str {
        match self {
            Kind::Scalar => "scalar",
            Kind::Ket => "ket",
            Kind::Bra => "bra",
            Kind::Op => "op",
        }
    }
}

impl fmt::Display for Kind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl Value {
    pub fn kind(&self) -> Kind {
        match self {
            Value::Scalar(_) => Kind::Scalar,
            Value::Ket(_) => Kind::Ket,
            Value::Bra(_) => Kind::Bra,
            Value::Op(_) => Kind::Op,
        }
    }

    /// `None` for scalars.
    pub fn dim(&self) -> Option<usize> {
        match self {
            Value::Scalar(_) => None,
            Value::Ket(k) => Some(k.dim()),
            Value::Bra(b) => Some(b.dim()),
            Value::Op(a) => Some(a.dim()),
        }
    }

    /// Modulus for scalars, Euclidean norm for kets and bras, max-entry
    /// norm for operators.
    pub fn norm(&self) -> f64 {
        match self {
            Value::Scalar(z) => z.norm(),
            Value::Ket(k) => k.norm(),
            Value::Bra(b) => b.norm(),
            Value::Op(a) => a.max_norm(),
        }
    }

    /// Distance in the norm of [`Value::norm`]; kinds and dims must agree.
    pub fn distance(&self, other: &Value) -> Result<f64> {
        match (self, other) {
            (Value::Scalar(a), Value::Scalar(b)) => Ok((a - b).norm()),
            (Value::Ket(a), Value::Ket(b)) => a.distance(b),
            (Value::Bra(a), Value::Bra(b)) => a.distance(b),
            (Value::Op(a), Value::Op(b)) => a.max_distance(b),
            _ => Err(Error::KindMismatch {
                lhs: self.kind().to_string(),
                rhs: other.kind().to_string(),
            }),
        }
    }

    /// `{"kind": ..., "value": ...}` with complex numbers as `[re, im]`.
    pub fn to_json(&self) -> Json {
        let value = match self {
            Value::Scalar(z) => json!(to_pair(*z)),
            Value::Ket(k) => json!(k.entries().iter().copied().map(to_pair).collect::<Vec<_>>()),
            Value::Bra(b) => json!(b.entries().iter().copied().map(to_pair).collect::<Vec<_>>()),
            Value::Op(a) => json!(a
                .as_matrix()
                .row_vecs()
                .into_iter()
                .map(|row| row.into_iter().map(to_pair).collect::<Vec<_>>())
                .collect::<Vec<_>>()),
        };
        json!({"kind": self.kind().name(), "value": value})
    }
}

impl<'a> From<Binding<'a>> for Value {
    fn from(b: Binding<'a>) -> Self {
        match b {
            Binding::Ket(k) => Value::Ket(k.clone()),
            Binding::Bra(b) => Value::Bra(b.clone()),
            Binding::Op(a) => Value::Op(a.clone()),
            Binding::Scalar(z) => Value::Scalar(z),
        }
    }
}

fn type_error(pos: Pos, op: &str, kinds: &[Kind]) -> Error {
    Error::Type {
        line: pos.line,
        column: pos.column,
        op: op.to_string(),
        operands: kinds.iter().map(|k| k.name()).collect::<Vec<_>>().join(", "),
    }
}

fn same_dim(pos: Pos, op: &str, values: &[&Value]) -> Result<()> {
    let dims: Vec<usize> = values.iter().filter_map(|v| v.dim()).collect();
    if dims.windows(2).any(|w| w[0] != w[1]) {
        return Err(Error::DimMismatchAt {
            line: pos.line,
            column: pos.column,
            detail: format!(
                "{op} operands have dimensions {}",
                dims.iter().map(|d| d.to_string()).collect::<Vec<_>>().join(", ")
            ),
        });
    }
    Ok(())
}

// Module errors past the dimension guard are still attributed to the node.
fn at<T>(pos: Pos, r: Result<T>) -> Result<T> {
    r.map_err(|e| match e {
        Error::DimMismatch { expected, found } => Error::DimMismatchAt {
            line: pos.line,
            column: pos.column,
            detail: format!("expected dimension {expected}, found {found}"),
        },
        other => other,
    })
}

fn add_values(pos: Pos, op: &str, a: Value, b: Value, negate_b: bool) -> Result<Value> {
    same_dim(pos, op, &[&a, &b])?;
    let sign = if negate_b { -1.0 } else { 1.0 };
    let s = Complex::new(sign, 0.0);
    Ok(match (a, b) {
        (Value::Scalar(x), Value::Scalar(y)) => Value::Scalar(x + s * y),
        (Value::Ket(x), Value::Ket(y)) => Value::Ket(if negate_b { &x - &y } else { &x + &y }),
        (Value::Bra(x), Value::Bra(y)) => Value::Bra(if negate_b { &x - &y } else { &x + &y }),
        (Value::Op(x), Value::Op(y)) => Value::Op(if negate_b { &x - &y } else { &x + &y }),
        (a, b) => return Err(type_error(pos, op, &[a.kind(), b.kind()])),
    })
}

fn mul_values(pos: Pos, a: Value, b: Value) -> Result<Value> {
    same_dim(pos, "*", &[&a, &b])?;
    Ok(match (a, b) {
        (Value::Scalar(x), Value::Scalar(y)) => Value::Scalar(x * y),
        (Value::Scalar(z), Value::Ket(k)) | (Value::Ket(k), Value::Scalar(z)) => Value::Ket(z * &k),
        (Value::Scalar(z), Value::Bra(b)) | (Value::Bra(b), Value::Scalar(z)) => Value::Bra(z * &b),
        (Value::Scalar(z), Value::Op(a)) | (Value::Op(a), Value::Scalar(z)) => Value::Op(z * &a),
        (Value::Op(a), Value::Ket(k)) => Value::Ket(at(pos, a.apply(&k))?),
        (Value::Op(a), Value::Op(b)) => Value::Op(at(pos, a.matmul(&b))?),
        (Value::Bra(b), Value::Ket(k)) => Value::Scalar(at(pos, b.pair(&k))?),
        (Value::Ket(k), Value::Bra(b)) => Value::Op(at(pos, b.outer_with(&k))?),
        (Value::Bra(b), Value::Op(a)) => Value::Bra(at(pos, b.apply(&a))?),
        (a, b) => return Err(type_error(pos, "*", &[a.kind(), b.kind()])),
    })
}

/// Evaluates `e` against `env` per the typing rules of the language.
pub fn eval(e: &Expr, env: &Env) -> Result<Value> {
    let pos = e.pos;
    match &e.node {
        Node::Scalar(z) => Ok(Value::Scalar(*z)),
        Node::Var(name) => env.lookup(name).map(Value::from).ok_or_else(|| Error::Unbound {
            line: pos.line,
            column: pos.column,
            name: name.clone(),
        }),
        Node::Neg(a) => Ok(match eval(a, env)? {
            Value::Scalar(z) => Value::Scalar(-z),
            Value::Ket(k) => Value::Ket(-&k),
            Value::Bra(b) => Value::Bra(-&b),
            Value::Op(a) => Value::Op(-&a),
        }),
        Node::Add(a, b) => add_values(pos, "+", eval(a, env)?, eval(b, env)?, false),
        Node::Sub(a, b) => add_values(pos, "-", eval(a, env)?, eval(b, env)?, true),
        Node::Mul(a, b) => mul_values(pos, eval(a, env)?, eval(b, env)?),
        Node::Adj(a) => Ok(match eval(a, env)? {
            Value::Scalar(z) => Value::Scalar(z.conj()),
            Value::Ket(k) => Value::Bra(k.adjoint()),
            Value::Bra(b) => Value::Ket(b.adjoint()),
            Value::Op(a) => Value::Op(a.adjoint()),
        }),
        Node::Inner(a, b) => match (eval(a, env)?, eval(b, env)?) {
            (Value::Ket(x), Value::Ket(y)) => {
                same_dim(pos, "<|>", &[&Value::Ket(x.clone()), &Value::Ket(y.clone())])?;
                Ok(Value::Scalar(at(pos, inner(&x, &y))?))
            }
            (x, y) => Err(type_error(pos, "<|>", &[x.kind(), y.kind()])),
        },
        Node::Ternary(a, b, c) => {
            let (x, y, z) = (eval(a, env)?, eval(b, env)?, eval(c, env)?);
            same_dim(pos, "[,,]", &[&x, &y, &z])?;
            match (x, y, z) {
                (Value::Ket(x), Value::Ket(y), Value::Ket(z)) => Ok(Value::Ket(at(pos, tern_vec(&x, &y, &z))?)),
                (Value::Op(x), Value::Op(y), Value::Op(z)) => Ok(Value::Op(at(pos, tern_op(&x, &y, &z))?)),
                (Value::Bra(x), Value::Bra(y), Value::Bra(z)) => Ok(Value::Bra(at(pos, tern_dual(&x, &y, &z))?)),
                (x, y, z) => Err(type_error(pos, "[,,]", &[x.kind(), y.kind(), z.kind()])),
            }
        }
    }
}

/// Parses and evaluates `text`.
pub fn eval_str(text: &str, env: &Env) -> Result<Value> {
    eval(&super::parser::parse(text)?, env)
}
