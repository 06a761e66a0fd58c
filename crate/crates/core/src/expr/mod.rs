//! A small expression language over correspondences, classes on `X` and
//! endomorphism tuples.
//!
//! `*` is the intersection product, `@` composition, `^k` the intersection
//! power and `^@k` the composition power. Rationals are literals `q/r`.

mod eval;
mod lexer;
mod parser;

pub use eval::{eval, EvalError, Value};
pub use lexer::{tokenize, LexError, Pos, Token, TokenKind};
pub use parser::{parse, Ast, AstKind, AtomKind, ParseError};

#[derive(Debug, thiserror::Error)]
pub enum ExprError {
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error(transparent)]
    Eval(#[from] EvalError),
}

pub fn evaluate(src: &str, params: &crate::split_algebra::SymbolParams) -> Result<Value, ExprError> {
    Ok(eval(&parse(src)?, params)?)
}
