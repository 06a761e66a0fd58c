use std::fmt;

use num_traits::ToPrimitive;

use super::lexer::Pos;
use super::parser::{Ast, AstKind, AtomKind};
use crate::arith::LocalInt;
use crate::correspondences::Corr;
use crate::end_algebra::EndTuple;
use crate::error::Error;
use crate::split_algebra::{ChowClass, SymbolParams};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Value {
    Corr(Corr),
    Class(ChowClass),
    Scalar(LocalInt),
    Tuple(EndTuple),
    Bool(bool),
}

impl Value {
    pub fn type_name(&self) -> &'static str {
        match self {
            Value::Corr(_) => "corr",
            Value::Class(_) => "class",
            Value::Scalar(_) => "scalar",
            Value::Tuple(_) => "tuple",
            Value::Bool(_) => "bool",
        }
    }
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::Corr(c) => write!(f, "{c}"),
            Value::Class(c) => write!(f, "{c}"),
            Value::Scalar(x) => write!(f, "{x}"),
            Value::Tuple(t) => write!(f, "{t}"),
            Value::Bool(b) => write!(f, "{b}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum EvalError {
    #[error("{pos}: type error: {message}")]
    Type { pos: Pos, message: String },
    #[error("{pos}: {source}")]
    Domain { pos: Pos, source: Error },
}

impl EvalError {
    pub fn pos(&self) -> Pos {
        match self {
            EvalError::Type { pos, .. } | EvalError::Domain { pos, .. } => *pos,
        }
    }
}

fn type_error(pos: Pos, message: impl Into<String>) -> EvalError {
    EvalError::Type { pos, message: message.into() }
}

trait At<T> {
    fn at(self, pos: Pos) -> Result<T, EvalError>;
}

impl<T> At<T> for crate::Result<T> {
    fn at(self, pos: Pos) -> Result<T, EvalError> {
        self.map_err(|source| EvalError::Domain { pos, source })
    }
}

fn small_exponent(k: u64, pos: Pos) -> Result<u32, EvalError> {
    u32::try_from(k).map_err(|_| EvalError::Domain { pos, source: Error::Overflow(format!("exponent {k}")) })
}

fn binary_mismatch(op: &str, a: &Value, b: &Value, pos: Pos) -> EvalError {
    type_error(pos, format!("'{op}' is not defined for {} and {}", a.type_name(), b.type_name()))
}

pub fn eval(ast: &Ast, params: &SymbolParams) -> Result<Value, EvalError> {
    let pos = ast.pos;
    let p = params.prime();
    Ok(match &ast.kind {
        AstKind::Atom(atom) => match atom {
            AtomKind::Sigma => Value::Corr(Corr::sigma(params)),
            AtomKind::Rho => Value::Corr(Corr::rho(params)),
            AtomKind::Pi => Value::Corr(Corr::rost_projector(params)),
            AtomKind::Basis(i, j) => Value::Corr(Corr::basis(params, *i, *j).at(pos)?),
            AtomKind::HPower(k) => Value::Class(ChowClass::h_power(params, *k).at(pos)?),
            AtomKind::Literal(x) => {
                x.check_local(p).at(pos)?;
                Value::Scalar(x.clone())
            }
        },
        AstKind::Add(a, b) | AstKind::Sub(a, b) => {
            let sub = matches!(ast.kind, AstKind::Sub(..));
            let (x, y) = (eval(a, params)?, eval(b, params)?);
            match (&x, &y) {
                (Value::Corr(u), Value::Corr(v)) => {
                    Value::Corr(if sub { u.sub(v) } else { u.add(v) }.at(pos)?)
                }
                (Value::Class(u), Value::Class(v)) => {
                    Value::Class(if sub { u.sub(v) } else { u.add(v) }.at(pos)?)
                }
                (Value::Scalar(u), Value::Scalar(v)) => Value::Scalar(if sub { u - v } else { u + v }),
                (Value::Tuple(u), Value::Tuple(v)) => {
                    Value::Tuple(if sub { u.sub(v) } else { u.add(v) }.at(pos)?)
                }
                _ => return Err(binary_mismatch(if sub { "-" } else { "+" }, &x, &y, pos)),
            }
        }
        AstKind::Neg(a) => match eval(a, params)? {
            Value::Corr(c) => Value::Corr(c.neg()),
            Value::Class(c) => Value::Class(c.neg()),
            Value::Scalar(x) => Value::Scalar(-x),
            Value::Tuple(t) => Value::Tuple(t.scale(&-LocalInt::one())),
            v @ Value::Bool(_) => return Err(type_error(pos, format!("cannot negate {}", v.type_name()))),
        },
        AstKind::IntersectMul(a, b) => {
            let (x, y) = (eval(a, params)?, eval(b, params)?);
            match (x, y) {
                (Value::Corr(u), Value::Corr(v)) => Value::Corr(u.intersect(&v).at(pos)?),
                (Value::Class(u), Value::Class(v)) => Value::Class(u.mul(&v).at(pos)?),
                (Value::Tuple(u), Value::Tuple(v)) => Value::Tuple(u.mul(&v).at(pos)?),
                (Value::Scalar(s), Value::Scalar(t)) => Value::Scalar(s * t),
                (Value::Scalar(s), Value::Corr(c)) | (Value::Corr(c), Value::Scalar(s)) => Value::Corr(c.scale(&s)),
                (Value::Scalar(s), Value::Class(c)) | (Value::Class(c), Value::Scalar(s)) => {
                    Value::Class(c.scale(&s))
                }
                (Value::Scalar(s), Value::Tuple(t)) | (Value::Tuple(t), Value::Scalar(s)) => {
                    Value::Tuple(t.scale(&s))
                }
                (x, y) => return Err(binary_mismatch("*", &x, &y, pos)),
            }
        }
        AstKind::Compose(a, b) => {
            let (x, y) = (eval(a, params)?, eval(b, params)?);
            match (&x, &y) {
                (Value::Corr(beta), Value::Corr(alpha)) => Value::Corr(beta.compose(alpha).at(pos)?),
                _ => return Err(binary_mismatch("@", &x, &y, pos)),
            }
        }
        AstKind::IntersectPow(a, k) => {
            let k = small_exponent(*k, pos)?;
            match eval(a, params)? {
                Value::Corr(c) => Value::Corr(c.ring_power(k)),
                Value::Class(c) => Value::Class(c.pow(k)),
                Value::Scalar(x) => Value::Scalar(x.pow(k)),
                Value::Tuple(t) => {
                    let mut acc = EndTuple::identity(p);
                    for _ in 0..k {
                        acc = acc.mul(&t).at(pos)?;
                    }
                    Value::Tuple(acc)
                }
                v => return Err(type_error(pos, format!("'^' is not defined for {}", v.type_name()))),
            }
        }
        AstKind::ComposePow(a, k) => match eval(a, params)? {
            Value::Corr(c) => Value::Corr(c.compose_power(*k).at(pos)?),
            v => return Err(type_error(pos, format!("'^@' requires corr, got {}", v.type_name()))),
        },
        AstKind::Call(name, args) => call(name, args, params, pos)?,
    })
}

fn call(name: &str, args: &[Ast], params: &SymbolParams, pos: Pos) -> Result<Value, EvalError> {
    let arity = match name {
        "t" | "mult" | "diag" | "deg" | "tuple" | "inv" | "rational" => 1,
        "act" => 2,
        _ => return Err(type_error(pos, format!("unknown function '{name}'"))),
    };
    if args.len() != arity {
        return Err(type_error(pos, format!("{name} takes {arity} argument(s), got {}", args.len())));
    }
    let arg = eval(&args[0], params)?;
    let want = |ty: &str| type_error(args[0].pos, format!("{name} requires {ty}, got {}", arg.type_name()));
    Ok(match (name, &arg) {
        ("t", Value::Corr(c)) => Value::Corr(c.transpose()),
        ("mult", Value::Corr(c)) => Value::Scalar(c.mult()),
        ("diag", Value::Corr(c)) => Value::Class(c.diag_pullback()),
        ("deg", Value::Class(c)) => Value::Scalar(c.degree()),
        ("tuple", Value::Corr(c)) => Value::Tuple(c.to_tuple().at(pos)?),
        ("inv", Value::Tuple(t)) => Value::Tuple(t.invert().at(pos)?),
        ("rational", Value::Tuple(t)) => Value::Bool(t.is_rational()),
        ("act", Value::Corr(c)) => {
            let k = match eval(&args[1], params)? {
                Value::Scalar(x) if x.is_integer() && !x.is_negative() => x.numer().to_u32(),
                _ => None,
            }
            .ok_or_else(|| type_error(args[1].pos, "act requires a nonnegative integer exponent"))?;
            Value::Class(c.action_on_class(k).at(pos)?)
        }
        ("deg", _) => return Err(want("class")),
        ("inv" | "rational", _) => return Err(want("tuple")),
        _ => return Err(want("corr")),
    })
}

#[cfg(test)]
mod tests {
    use super::super::parse;
    use super::*;

    fn run(src: &str, p: u64, e: i64) -> Result<Value, EvalError> {
        let params = SymbolParams::new(p, 2, LocalInt::from(e)).unwrap();
        eval(&parse(src).unwrap(), &params)
    }

    fn show(src: &str, p: u64) -> String {
        run(src, p, 1).unwrap().to_string()
    }

    #[test]
    fn examples() {
        assert_eq!(show("t(sigma)+sigma", 3), "0");
        assert_eq!(show("sigma @ sigma^2", 3), "E(0,1) + 2*E(1,0)");
        for p in [2, 3, 5, 7] {
            assert_eq!(show("deg(diag(pi))", p), p.to_string());
        }
        assert_eq!(show("rational(tuple(pi))", 3), "true");
        assert_eq!(show("mult(pi)", 5), "1");
        assert_eq!(show("act(pi, 0)", 3), "H^0");
    }

    #[test]
    fn type_errors_carry_positions() {
        let err = run("sigma @ H^1", 3, 1).unwrap_err();
        assert!(matches!(err, EvalError::Type { .. }));
        assert_eq!(err.pos(), Pos { line: 1, col: 7 });
        let err = run("deg(sigma)", 3, 1).unwrap_err();
        assert_eq!(err.pos(), Pos { line: 1, col: 5 });
        assert!(run("frob(sigma)", 3, 1).is_err());
        assert!(run("act(pi)", 3, 1).is_err());
    }

    #[test]
    fn domain_errors_propagate() {
        assert!(matches!(run("1/3 * sigma", 3, 1), Err(EvalError::Domain { source: Error::NotLocal { .. }, .. })));
        assert!(matches!(run("E(5,0)", 3, 1), Err(EvalError::Domain { .. })));
        assert!(matches!(run("tuple(E(0,0))", 3, 1), Err(EvalError::Domain { .. })));
        assert!(matches!(run("sigma^@0", 3, 1), Err(EvalError::Domain { .. })));
    }
}
