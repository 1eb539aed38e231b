use std::collections::BTreeSet;
use std::fmt;

use super::lexer::{tokenize, Pos, Token, TokenKind};
use crate::error::{Error, Result};
use crate::hilbert::Complex;

/// Nesting deeper than this is rejected rather than risking the stack.
pub const MAX_DEPTH: usize = 128;

#[derive(Clone, Debug)]
pub enum Node {
    Scalar(Complex),
    Var(String),
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Adj(Box<Expr>),
    Ternary(Box<Expr>, Box<Expr>, Box<Expr>),
    Inner(Box<Expr>, Box<Expr>),
}

/// An expression node with the position of the token that introduced it
/// (the operator for binary nodes).
#[derive(Clone, Debug)]
pub struct Expr {
    pub node: Node,
    pub pos: Pos,
}

// Structural equality; positions are ignored.
impl PartialEq for Expr {
    fn eq(&self, other: &Self) -> bool {
        use Node::*;
        match (&self.node, &other.node) {
            (Scalar(a), Scalar(b)) => a == b,
            (Var(a), Var(b)) => a == b,
            (Neg(a), Neg(b)) | (Adj(a), Adj(b)) => a == b,
            (Add(a, b), Add(c, d)) | (Sub(a, b), Sub(c, d)) | (Mul(a, b), Mul(c, d)) | (Inner(a, b), Inner(c, d)) => {
                a == c && b == d
            }
            (Ternary(a, b, c), Ternary(d, e, f)) => a == d && b == e && c == f,
            _ => false,
        }
    }
}

impl Expr {
    pub fn new(node: Node) -> Self {
        Expr { node, pos: Pos::default() }
    }

    pub fn scalar(z: Complex) -> Self {
        Expr::new(Node::Scalar(z))
    }

    pub fn var(name: &str) -> Self {
        Expr::new(Node::Var(name.to_string()))
    }

    pub fn neg(a: Expr) -> Self {
        Expr::new(Node::Neg(Box::new(a)))
    }

    pub fn add(a: Expr, b: Expr) -> Self {
        Expr::new(Node::Add(Box::new(a), Box::new(b)))
    }

    pub fn sub(a: Expr, b: Expr) -> Self {
        Expr::new(Node::Sub(Box::new(a), Box::new(b)))
    }

    pub fn mul(a: Expr, b: Expr) -> Self {
        Expr::new(Node::Mul(Box::new(a), Box::new(b)))
    }

    pub fn adj(a: Expr) -> Self {
        Expr::new(Node::Adj(Box::new(a)))
    }

    pub fn ternary(a: Expr, b: Expr, c: Expr) -> Self {
        Expr::new(Node::Ternary(Box::new(a), Box::new(b), Box::new(c)))
    }

    pub fn inner(a: Expr, b: Expr) -> Self {
        Expr::new(Node::Inner(Box::new(a), Box::new(b)))
    }

    /// Free variable names.
    pub fn vars(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_vars(&mut out);
        out
    }

    /// First occurrence of each variable, by position.
    pub fn var_positions(&self) -> Vec<(String, Pos)> {
        let mut out = Vec::new();
        self.walk(&mut |e| {
            if let Node::Var(name) = &e.node {
                out.push((name.clone(), e.pos));
            }
        });
        out
    }

    fn collect_vars(&self, out: &mut BTreeSet<String>) {
        self.walk(&mut |e| {
            if let Node::Var(name) = &e.node {
                out.insert(name.clone());
            }
        });
    }

    fn walk(&self, f: &mut dyn FnMut(&Expr)) {
        f(self);
        match &self.node {
            Node::Scalar(_) | Node::Var(_) => {}
            Node::Neg(a) | Node::Adj(a) => a.walk(f),
            Node::Add(a, b) | Node::Sub(a, b) | Node::Mul(a, b) | Node::Inner(a, b) => {
                a.walk(f);
                b.walk(f);
            }
            Node::Ternary(a, b, c) => {
                a.walk(f);
                b.walk(f);
                c.walk(f);
            }
        }
    }
}

fn fmt_real(x: f64) -> String {
    if x.is_sign_negative() {
        format!("(-{})", -x)
    } else {
        format!("{x}")
    }
}

/// Canonical, fully parenthesized form. Printing then parsing then printing
/// gives the same text.
impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.node {
            Node::Scalar(z) => match (z.re, z.im) {
                (re, im) if im == 0.0 => f.write_str(&fmt_real(re)),
                (re, im) if re == 0.0 && im > 0.0 => write!(f, "{im}i"),
                (re, im) if re == 0.0 => write!(f, "(-{}i)", -im),
                (re, im) if im < 0.0 => write!(f, "({} - {}i)", fmt_real(re), -im),
                (re, im) => write!(f, "({} + {im}i)", fmt_real(re)),
            },
            Node::Var(name) => f.write_str(name),
            Node::Neg(a) => write!(f, "(-{a})"),
            Node::Add(a, b) => write!(f, "({a} + {b})"),
            Node::Sub(a, b) => write!(f, "({a} - {b})"),
            Node::Mul(a, b) => write!(f, "({a} * {b})"),
            Node::Adj(a) => write!(f, "adj({a})"),
            Node::Ternary(a, b, c) => write!(f, "[{a}, {b}, {c}]"),
            Node::Inner(a, b) => write!(f, "<{a}|{b}>"),
        }
    }
}

struct Parser {
    tokens: Vec<Token>,
    at: usize,
    depth: usize,
    end: Pos,
}

const ATOM_START: &str = "NUMBER, IMAG_UNIT, IDENT, ADJ_KEYWORD, LPAREN, LBRACK, LANGLE or MINUS";

impl Parser {
    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.at)
    }

    fn peek_kind(&self) -> Option<TokenKind> {
        self.peek().map(|t| t.kind)
    }

    fn here(&self) -> Pos {
        self.peek().map_or(self.end, |t| t.pos)
    }

    fn error(&self, expected: &str) -> Error {
        let pos = self.here();
        Error::Parse {
            line: pos.line,
            column: pos.column,
            expected: expected.to_string(),
            found: self.peek().map_or_else(|| "end of input".to_string(), |t| t.to_string()),
        }
    }

    fn next(&mut self) -> Token {
        let t = self.tokens[self.at].clone();
        self.at += 1;
        t
    }

    fn expect(&mut self, kind: TokenKind) -> Result<Token> {
        if self.peek_kind() == Some(kind) {
            Ok(self.next())
        } else {
            Err(self.error(kind.name()))
        }
    }

    fn enter(&mut self) -> Result<()> {
        self.depth += 1;
        if self.depth > MAX_DEPTH {
            return Err(self.error(&format!("at most {MAX_DEPTH} levels of nesting")));
        }
        Ok(())
    }

    fn expr(&mut self) -> Result<Expr> {
        self.enter()?;
        let e = self.add();
        self.depth -= 1;
        e
    }

    fn add(&mut self) -> Result<Expr> {
        let mut lhs = self.mul()?;
        while let Some(kind @ (TokenKind::Plus | TokenKind::Minus)) = self.peek_kind() {
            let pos = self.next().pos;
            let rhs = self.mul()?;
            let node = if kind == TokenKind::Plus {
                Node::Add(Box::new(lhs), Box::new(rhs))
            } else {
                Node::Sub(Box::new(lhs), Box::new(rhs))
            };
            lhs = Expr { node, pos };
        }
        Ok(lhs)
    }

    fn mul(&mut self) -> Result<Expr> {
        let mut lhs = self.unary()?;
        while self.peek_kind() == Some(TokenKind::Star) {
            let pos = self.next().pos;
            let rhs = self.unary()?;
            lhs = Expr {
                node: Node::Mul(Box::new(lhs), Box::new(rhs)),
                pos,
            };
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<Expr> {
        if self.peek_kind() == Some(TokenKind::Minus) {
            let pos = self.next().pos;
            self.enter()?;
            let inner = self.unary();
            self.depth -= 1;
            return Ok(Expr {
                node: Node::Neg(Box::new(inner?)),
                pos,
            });
        }
        self.atom()
    }

    fn atom(&mut self) -> Result<Expr> {
        let Some(kind) = self.peek_kind() else {
            return Err(self.error(ATOM_START));
        };
        let pos = self.here();
        let node = match kind {
            TokenKind::Number => {
                let value = self.next().value;
                if self.peek_kind() == Some(TokenKind::ImagUnit) {
                    self.next();
                    Node::Scalar(Complex::new(0.0, value))
                } else {
                    Node::Scalar(Complex::new(value, 0.0))
                }
            }
            TokenKind::ImagUnit => {
                self.next();
                Node::Scalar(Complex::new(0.0, 1.0))
            }
            TokenKind::Ident => Node::Var(self.next().lexeme),
            TokenKind::Adj => {
                self.next();
                self.expect(TokenKind::LParen)?;
                let a = self.expr()?;
                self.expect(TokenKind::RParen)?;
                Node::Adj(Box::new(a))
            }
            TokenKind::LBrack => {
                self.next();
                let a = self.expr()?;
                self.expect(TokenKind::Comma)?;
                let b = self.expr()?;
                self.expect(TokenKind::Comma)?;
                let c = self.expr()?;
                self.expect(TokenKind::RBrack)?;
                Node::Ternary(Box::new(a), Box::new(b), Box::new(c))
            }
            TokenKind::LAngle => {
                self.next();
                let a = self.expr()?;
                self.expect(TokenKind::Pipe)?;
                let b = self.expr()?;
                self.expect(TokenKind::RAngle)?;
                Node::Inner(Box::new(a), Box::new(b))
            }
            TokenKind::LParen => {
                self.next();
                let a = self.expr()?;
                self.expect(TokenKind::RParen)?;
                return Ok(a);
            }
            _ => return Err(self.error(ATOM_START)),
        };
        Ok(Expr { node, pos })
    }
}

/// Recursive descent over the token stream; the whole stream must be
/// consumed.
pub fn parse_tokens(tokens: Vec<Token>) -> Result<Expr> {
    let end = tokens.last().map_or(Pos::new(1, 1), |t| {
        Pos::new(t.pos.line, t.pos.column + t.lexeme.chars().count())
    });
    let mut p = Parser {
        tokens,
        at: 0,
        depth: 0,
        end,
    };
    let e = p.expr()?;
    if p.peek().is_some() {
        return Err(p.error("end of input"));
    }
    Ok(e)
}

pub fn parse(text: &str) -> Result<Expr> {
    parse_tokens(tokenize(text)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(n: &str) -> Expr {
        Expr::var(n)
    }

    #[test]
    fn grammar_examples() {
        assert_eq!(
            parse("[[a,b,c],d,e]").unwrap(),
            Expr::ternary(Expr::ternary(v("a"), v("b"), v("c")), v("d"), v("e"))
        );
        assert_eq!(parse("<u|X*v>").unwrap(), Expr::inner(v("u"), Expr::mul(v("X"), v("v"))));
        match parse("[a,b]").unwrap_err() {
            Error::Parse { expected, .. } => assert_eq!(expected, "COMMA"),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn precedence_and_associativity() {
        assert_eq!(parse("-a*b").unwrap(), Expr::mul(Expr::neg(v("a")), v("b")));
        assert_eq!(parse("a-b-c").unwrap(), Expr::sub(Expr::sub(v("a"), v("b")), v("c")));
        assert_eq!(parse("a+b*c").unwrap(), Expr::add(v("a"), Expr::mul(v("b"), v("c"))));
        assert_eq!(parse("a*b*c").unwrap(), Expr::mul(Expr::mul(v("a"), v("b")), v("c")));
        assert_eq!(
            parse("2+3i").unwrap(),
            Expr::add(Expr::scalar(Complex::new(2.0, 0.0)), Expr::scalar(Complex::new(0.0, 3.0)))
        );
        assert_eq!(parse("adj(A)*v").unwrap(), Expr::mul(Expr::adj(v("A")), v("v")));
    }

    #[test]
    fn errors_carry_positions() {
        let err = parse("a +\n  * b").unwrap_err();
        assert_eq!(err.position(), Some((2, 3)));
        let err = parse("[a, b, c").unwrap_err();
        assert_eq!(err.position(), Some((1, 9)));
        assert!(parse("a b").is_err());
        assert!(parse("").is_err());
        assert!(parse("adj A").is_err());
    }

    #[test]
    fn deep_nesting_is_an_error_not_a_crash() {
        let deep = format!("{}a{}", "(".repeat(10_000), ")".repeat(10_000));
        assert_eq!(parse(&deep).unwrap_err().code(), "parse-error");
        let minus = format!("{}a", "-".repeat(10_000));
        assert_eq!(parse(&minus).unwrap_err().code(), "parse-error");
        let ok = format!("{}a{}", "(".repeat(100), ")".repeat(100));
        assert_eq!(parse(&ok).unwrap(), v("a"));
    }

    #[test]
    fn printing_is_canonical() {
        let e = parse("-a*b + [x, y, adj(z)] - <u|2.5i*v>").unwrap();
        let text = e.to_string();
        assert_eq!(text, "((((-a) * b) + [x, y, adj(z)]) - <u|(2.5i * v)>)");
        let printed = parse(&text).unwrap().to_string();
        assert_eq!(printed, text);
        assert_eq!(Expr::scalar(Complex::new(1.5, -2.0)).to_string(), "(1.5 - 2i)");
        assert_eq!(parse("(1.5 - 2i)").unwrap().to_string(), "(1.5 - 2i)");
    }

    #[test]
    fn vars_are_collected() {
        let e = parse("[a, b*c, <a|d>]").unwrap();
        let names: Vec<String> = e.vars().into_iter().collect();
        assert_eq!(names, vec!["a", "b", "c", "d"]);
    }
}
