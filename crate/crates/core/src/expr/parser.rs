use std::fmt;

use super::lexer::{tokenize, Pos, Token, TokenKind};
use crate::arith::LocalInt;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum AtomKind {
    Sigma,
    Rho,
    Pi,
    Basis(u32, u32),
    HPower(u32),
    Literal(LocalInt),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum AstKind {
    Add(Box<Ast>, Box<Ast>),
    Sub(Box<Ast>, Box<Ast>),
    Neg(Box<Ast>),
    IntersectMul(Box<Ast>, Box<Ast>),
    Compose(Box<Ast>, Box<Ast>),
    IntersectPow(Box<Ast>, u64),
    ComposePow(Box<Ast>, u64),
    Atom(AtomKind),
    Call(String, Vec<Ast>),
}

/// Equality ignores positions.
#[derive(Clone, Debug, Eq)]
pub struct Ast {
    pub kind: AstKind,
    pub pos: Pos,
}

impl PartialEq for Ast {
    fn eq(&self, other: &Ast) -> bool {
        self.kind == other.kind
    }
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
#[error("{pos}: syntax error: {message}")]
pub struct ParseError {
    pub pos: Pos,
    pub message: String,
    pub expected: Vec<String>,
}

impl ParseError {
    fn expected(tok: &Token, expected: &[&str]) -> ParseError {
        let found = if tok.kind == TokenKind::Eof { "end of input".to_string() } else { format!("{:?}", tok.lexeme) };
        ParseError {
            pos: tok.pos,
            message: format!("found {found}, expected one of {{{}}}", expected.join(", ")),
            expected: expected.iter().map(|s| s.to_string()).collect(),
        }
    }
}

struct Parser {
    toks: Vec<Token>,
    at: usize,
}

const ATOM_START: [&str; 9] = ["sigma", "rho", "pi", "E", "H", "INT", "RATIONAL", "IDENT", "("];

impl Parser {
    fn peek(&self) -> &Token {
        &self.toks[self.at]
    }

    fn bump(&mut self) -> Token {
        let t = self.toks[self.at].clone();
        if t.kind != TokenKind::Eof {
            self.at += 1;
        }
        t
    }

    fn is_punct(&self, p: &str) -> bool {
        let t = self.peek();
        t.kind == TokenKind::Punct && t.lexeme == p
    }

    fn expect_punct(&mut self, p: &str) -> Result<Token, ParseError> {
        if self.is_punct(p) {
            Ok(self.bump())
        } else {
            Err(ParseError::expected(self.peek(), &[p]))
        }
    }

    fn expect_int<T: std::str::FromStr>(&mut self) -> Result<T, ParseError> {
        let t = self.peek().clone();
        if t.kind != TokenKind::Int {
            return Err(ParseError::expected(&t, &["INT"]));
        }
        let v = t.lexeme.parse().map_err(|_| ParseError {
            pos: t.pos,
            message: format!("integer {} is too large", t.lexeme),
            expected: vec!["INT".into()],
        })?;
        self.bump();
        Ok(v)
    }

    fn expr(&mut self) -> Result<Ast, ParseError> {
        let mut lhs = self.mul()?;
        loop {
            let pos = self.peek().pos;
            let kind = if self.is_punct("+") {
                self.bump();
                AstKind::Add(Box::new(lhs), Box::new(self.mul()?))
            } else if self.is_punct("-") {
                self.bump();
                AstKind::Sub(Box::new(lhs), Box::new(self.mul()?))
            } else {
                return Ok(lhs);
            };
            lhs = Ast { kind, pos };
        }
    }

    fn mul(&mut self) -> Result<Ast, ParseError> {
        let mut lhs = self.unary()?;
        loop {
            let pos = self.peek().pos;
            let kind = if self.is_punct("*") {
                self.bump();
                AstKind::IntersectMul(Box::new(lhs), Box::new(self.unary()?))
            } else if self.is_punct("@") {
                self.bump();
                AstKind::Compose(Box::new(lhs), Box::new(self.unary()?))
            } else {
                return Ok(lhs);
            };
            lhs = Ast { kind, pos };
        }
    }

    fn unary(&mut self) -> Result<Ast, ParseError> {
        if self.is_punct("-") {
            let pos = self.bump().pos;
            return Ok(Ast { kind: AstKind::Neg(Box::new(self.unary()?)), pos });
        }
        self.postfix()
    }

    fn postfix(&mut self) -> Result<Ast, ParseError> {
        let mut base = self.atom()?;
        loop {
            let pos = self.peek().pos;
            let kind = if self.is_punct("^") {
                self.bump();
                AstKind::IntersectPow(Box::new(base), self.expect_int()?)
            } else if self.is_punct("^@") {
                self.bump();
                AstKind::ComposePow(Box::new(base), self.expect_int()?)
            } else {
                return Ok(base);
            };
            base = Ast { kind, pos };
        }
    }

    fn atom(&mut self) -> Result<Ast, ParseError> {
        let t = self.peek().clone();
        let pos = t.pos;
        let atom = |k| Ok(Ast { kind: AstKind::Atom(k), pos });
        match t.kind {
            TokenKind::Int | TokenKind::Rational => {
                self.bump();
                let value: LocalInt = t.lexeme.parse().map_err(|_| ParseError {
                    pos,
                    message: format!("bad literal {}", t.lexeme),
                    expected: Vec::new(),
                })?;
                atom(AtomKind::Literal(value))
            }
            TokenKind::Ident => {
                self.bump();
                match t.lexeme.as_str() {
                    "sigma" => atom(AtomKind::Sigma),
                    "rho" => atom(AtomKind::Rho),
                    "pi" => atom(AtomKind::Pi),
                    "E" => {
                        self.expect_punct("(")?;
                        let i = self.expect_int()?;
                        self.expect_punct(",")?;
                        let j = self.expect_int()?;
                        self.expect_punct(")")?;
                        atom(AtomKind::Basis(i, j))
                    }
                    "H" => {
                        if self.is_punct("^") {
                            self.bump();
                            atom(AtomKind::HPower(self.expect_int()?))
                        } else {
                            atom(AtomKind::HPower(1))
                        }
                    }
                    name => {
                        self.expect_punct("(")?;
                        let mut args = Vec::new();
                        if !self.is_punct(")") {
                            args.push(self.expr()?);
                            while self.is_punct(",") {
                                self.bump();
                                args.push(self.expr()?);
                            }
                        }
                        if !self.is_punct(")") {
                            return Err(ParseError::expected(self.peek(), &[",", ")"]));
                        }
                        self.bump();
                        Ok(Ast { kind: AstKind::Call(name.to_string(), args), pos })
                    }
                }
            }
            TokenKind::Punct if t.lexeme == "(" => {
                self.bump();
                let inner = self.expr()?;
                self.expect_punct(")")?;
                Ok(inner)
            }
            _ => Err(ParseError::expected(&t, &ATOM_START)),
        }
    }
}

pub fn parse(src: &str) -> Result<Ast, ParseError> {
    let toks = tokenize(src).map_err(|e| ParseError {
        pos: e.pos,
        message: format!("unexpected character {:?}", e.ch),
        expected: Vec::new(),
    })?;
    let mut parser = Parser { toks, at: 0 };
    let ast = parser.expr()?;
    if parser.peek().kind != TokenKind::Eof {
        return Err(ParseError::expected(parser.peek(), &["+", "-", "*", "@", "^", "^@", "end of input"]));
    }
    Ok(ast)
}

fn precedence(ast: &Ast) -> u8 {
    match ast.kind {
        AstKind::Add(..) | AstKind::Sub(..) => 1,
        AstKind::IntersectMul(..) | AstKind::Compose(..) => 2,
        AstKind::Neg(_) => 3,
        AstKind::IntersectPow(..) | AstKind::ComposePow(..) => 4,
        AstKind::Atom(_) | AstKind::Call(..) => 5,
    }
}

struct Child<'a>(&'a Ast, u8);

impl fmt::Display for Child<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if precedence(self.0) < self.1 {
            write!(f, "({})", self.0)
        } else {
            write!(f, "{}", self.0)
        }
    }
}

/// Prints with the fewest parentheses that reparse to the same tree.
impl fmt::Display for Ast {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.kind {
            AstKind::Add(a, b) => write!(f, "{} + {}", Child(a, 1), Child(b, 2)),
            AstKind::Sub(a, b) => write!(f, "{} - {}", Child(a, 1), Child(b, 2)),
            AstKind::IntersectMul(a, b) => write!(f, "{} * {}", Child(a, 2), Child(b, 3)),
            AstKind::Compose(a, b) => write!(f, "{} @ {}", Child(a, 2), Child(b, 3)),
            AstKind::Neg(a) => write!(f, "-{}", Child(a, 3)),
            AstKind::IntersectPow(a, k) => write!(f, "{}^{k}", Child(a, 4)),
            AstKind::ComposePow(a, k) => write!(f, "{}^@{k}", Child(a, 4)),
            AstKind::Atom(AtomKind::Sigma) => f.write_str("sigma"),
            AstKind::Atom(AtomKind::Rho) => f.write_str("rho"),
            AstKind::Atom(AtomKind::Pi) => f.write_str("pi"),
            AstKind::Atom(AtomKind::Basis(i, j)) => write!(f, "E({i},{j})"),
            AstKind::Atom(AtomKind::HPower(k)) => write!(f, "H^{k}"),
            AstKind::Atom(AtomKind::Literal(v)) => {
                if v.is_negative() {
                    write!(f, "(-{})", v.abs())
                } else {
                    write!(f, "{v}")
                }
            }
            AstKind::Call(name, args) => {
                let args: Vec<String> = args.iter().map(|a| a.to_string()).collect();
                write!(f, "{name}({})", args.join(", "))
            }
        }
    }
}
