use std::fmt;

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TokenKind {
    Number,
    ImagUnit,
    Ident,
    Plus,
    Minus,
    Star,
    LBrack,
    RBrack,
    LParen,
    RParen,
    LAngle,
    RAngle,
    Pipe,
    Comma,
    Adj,
}

impl TokenKind {
    pub fn name(self) -> &'static str {
        match self {
            TokenKind::Number => "NUMBER",
            TokenKind::ImagUnit => "IMAG_UNIT",
            TokenKind::Ident => "IDENT",
            TokenKind::Plus => "PLUS",
            TokenKind::Minus => "MINUS",
            TokenKind::Star => "STAR",
            TokenKind::LBrack => "LBRACK",
            TokenKind::RBrack => "RBRACK",
            TokenKind::LParen => "LPAREN",
            TokenKind::RParen => "RPAREN",
            TokenKind::LAngle => "LANGLE",
            TokenKind::RAngle => "RANGLE",
            TokenKind::Pipe => "PIPE",
            TokenKind::Comma => "COMMA",
            TokenKind::Adj => "ADJ_KEYWORD",
        }
    }
}

impl fmt::Display for TokenKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// 1-based source position.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord)]
pub struct Pos {
    pub line: usize,
    pub column: usize,
}

impl Pos {
    pub fn new(line: usize, column: usize) -> Self {
        Pos { line, column }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Token {
    pub kind: TokenKind,
    pub lexeme: String,
    pub pos: Pos,
    /// Parsed value of a `Number` token.
    pub value: f64,
}

impl fmt::Display for Token {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} `{}`", self.kind, self.lexeme)
    }
}

fn is_ident_start(c: char) -> bool {
    c.is_ascii_alphabetic() || c == '_'
}

fn is_ident_char(c: char) -> bool {
    c.is_ascii_alphanumeric() || c == '_'
}

/// Longest-match lexer. `i` on its own is the imaginary unit, so `3i` lexes
/// as `NUMBER IMAG_UNIT`; `adj` is a keyword.
pub fn tokenize(text: &str) -> Result<Vec<Token>> {
    let chars: Vec<char> = text.chars().collect();
    let mut tokens = Vec::new();
    let (mut line, mut column) = (1, 1);
    let mut k = 0;
    while k < chars.len() {
        let c = chars[k];
        let pos = Pos::new(line, column);
        if c == '\n' {
            line += 1;
            column = 1;
            k += 1;
            continue;
        }
        if c.is_whitespace() {
            column += 1;
            k += 1;
            continue;
        }
        let start = k;
        let kind = if c.is_ascii_digit() {
            while k < chars.len() && chars[k].is_ascii_digit() {
                k += 1;
            }
            if k + 1 < chars.len() && chars[k] == '.' && chars[k + 1].is_ascii_digit() {
                k += 1;
                while k < chars.len() && chars[k].is_ascii_digit() {
                    k += 1;
                }
            }
            TokenKind::Number
        } else if is_ident_start(c) {
            while k < chars.len() && is_ident_char(chars[k]) {
                k += 1;
            }
            match chars[start..k].iter().collect::<String>().as_str() {
                "i" => TokenKind::ImagUnit,
                "adj" => TokenKind::Adj,
                _ => TokenKind::Ident,
            }
        } else {
            k += 1;
            match c {
                '+' => TokenKind::Plus,
                '-' => TokenKind::Minus,
                '*' => TokenKind::Star,
                '[' => TokenKind::LBrack,
                ']' => TokenKind::RBrack,
                '(' => TokenKind::LParen,
                ')' => TokenKind::RParen,
                '<' => TokenKind::LAngle,
                '>' => TokenKind::RAngle,
                '|' => TokenKind::Pipe,
                ',' => TokenKind::Comma,
                _ => {
                    return Err(Error::Lex {
                        line,
                        column,
                        found: c,
                    })
                }
            }
        };
        let lexeme: String = chars[start..k].iter().collect();
        let value = if kind == TokenKind::Number {
            let v: f64 = lexeme.parse().map_err(|e| Error::LexNumber {
                line,
                column,
                detail: format!("bad number `{lexeme}`: {e}"),
            })?;
            if !v.is_finite() {
                return Err(Error::LexNumber {
                    line,
                    column,
                    detail: format!("number `{}...` is out of range", &lexeme[..lexeme.len().min(16)]),
                });
            }
            v
        } else {
            0.0
        };
        column += k - start;
        tokens.push(Token {
            kind,
            lexeme,
            pos,
            value,
        });
    }
    Ok(tokens)
}
