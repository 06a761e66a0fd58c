use std::fmt;

use serde::Serialize;

/// 1-based line and column (in characters).
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct Pos {
    pub line: u32,
    pub col: u32,
}

impl fmt::Display for Pos {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.line, self.col)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum TokenKind {
    Ident,
    Int,
    Rational,
    Punct,
    Eof,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Token {
    pub kind: TokenKind,
    pub lexeme: String,
    pub pos: Pos,
    /// Byte offset of the lexeme in the source.
    pub offset: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
#[error("{pos}: unexpected character {ch:?}")]
pub struct LexError {
    pub pos: Pos,
    pub ch: char,
}

const PUNCT: [&str; 9] = ["^@", "+", "-", "*", "@", "^", "(", ")", ","];

pub fn tokenize(src: &str) -> Result<Vec<Token>, LexError> {
    let mut out = Vec::new();
    let mut pos = Pos { line: 1, col: 1 };
    let mut rest = src;
    let mut offset = 0;
    let advance = |pos: &mut Pos, text: &str| {
        for ch in text.chars() {
            if ch == '\n' {
                pos.line += 1;
                pos.col = 1;
            } else {
                pos.col += 1;
            }
        }
    };
    while let Some(ch) = rest.chars().next() {
        let (kind, len) = if ch.is_whitespace() {
            let len = rest.find(|c: char| !c.is_whitespace()).unwrap_or(rest.len());
            advance(&mut pos, &rest[..len]);
            offset += len;
            rest = &rest[len..];
            continue;
        } else if ch.is_ascii_alphabetic() || ch == '_' {
            let len = rest
                .find(|c: char| !(c.is_ascii_alphanumeric() || c == '_'))
                .unwrap_or(rest.len());
            (TokenKind::Ident, len)
        } else if ch.is_ascii_digit() {
            let digits = |s: &str| s.find(|c: char| !c.is_ascii_digit()).unwrap_or(s.len());
            let len = digits(rest);
            let tail = &rest[len..];
            match tail.strip_prefix('/') {
                Some(den) if den.starts_with(|c: char| c.is_ascii_digit()) => {
                    (TokenKind::Rational, len + 1 + digits(den))
                }
                _ => (TokenKind::Int, len),
            }
        } else if let Some(p) = PUNCT.iter().find(|p| rest.starts_with(*p)) {
            (TokenKind::Punct, p.len())
        } else {
            return Err(LexError { pos, ch });
        };
        let lexeme = &rest[..len];
        out.push(Token { kind, lexeme: lexeme.to_string(), pos, offset });
        advance(&mut pos, lexeme);
        offset += len;
        rest = &rest[len..];
    }
    out.push(Token { kind: TokenKind::Eof, lexeme: String::new(), pos, offset });
    Ok(out)
}
