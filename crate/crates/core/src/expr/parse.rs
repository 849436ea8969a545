//! Recursive-descent parser.
//!
//! ```text
//! expr  := term (('+'|'-') term)*
//! term  := unary (('*'|'/') unary)*
//! unary := '-' unary | power
//! power := atom ('^' '-'? integer)?
//! atom  := number | ident | '(' expr ')' | fn '(' expr ')'
//! fn    := exp | log | sin | cos | sinh | cosh
//! ```

use std::fmt;

use num_complex::Complex64;

use super::{Context, ExprNode, Func};

#[derive(Debug, thiserror::Error, Clone, PartialEq)]
pub enum ParseError {
    #[error("syntax error at byte {offset}: found {found}, expected one of {}", .expected.join(", "))]
    Syntax {
        offset: usize,
        found: String,
        expected: Vec<&'static str>,
    },
    #[error("unknown identifier `{name}` at byte {offset}")]
    UnknownIdentifier { name: String, offset: usize },
    #[error("invalid number `{text}` at byte {offset}")]
    InvalidNumber { text: String, offset: usize },
}

impl ParseError {
    pub fn offset(&self) -> usize {
        match self {
            ParseError::Syntax { offset, .. }
            | ParseError::UnknownIdentifier { offset, .. }
            | ParseError::InvalidNumber { offset, .. } => *offset,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Number { value: f64, integer: bool },
    Ident(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
    End,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Number { value, .. } => write!(f, "number {value}"),
            Tok::Ident(name) => write!(f, "identifier `{name}`"),
            Tok::Plus => f.write_str("'+'"),
            Tok::Minus => f.write_str("'-'"),
            Tok::Star => f.write_str("'*'"),
            Tok::Slash => f.write_str("'/'"),
            Tok::Caret => f.write_str("'^'"),
            Tok::LParen => f.write_str("'('"),
            Tok::RParen => f.write_str("')'"),
            Tok::End => f.write_str("end of input"),
        }
    }
}

const EXPECT_OPERAND: &[&str] = &["number", "identifier", "'('", "'-'"];

fn tokenize(src: &str) -> Result<Vec<(Tok, usize)>, ParseError> {
    let bytes = src.as_bytes();
    let mut toks = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let b = bytes[i];
        let start = i;
        let single = match b {
            b'+' => Some(Tok::Plus),
            b'-' => Some(Tok::Minus),
            b'*' => Some(Tok::Star),
            b'/' => Some(Tok::Slash),
            b'^' => Some(Tok::Caret),
            b'(' => Some(Tok::LParen),
            b')' => Some(Tok::RParen),
            _ => None,
        };
        if let Some(tok) = single {
            toks.push((tok, start));
            i += 1;
            continue;
        }
        if b.is_ascii_whitespace() {
            i += 1;
        } else if b.is_ascii_digit() || b == b'.' {
            let mut integer = true;
            while i < bytes.len() && bytes[i].is_ascii_digit() {
                i += 1;
            }
            if i < bytes.len() && bytes[i] == b'.' {
                integer = false;
                i += 1;
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
            }
            // Exponent only when digits follow, so `2e` lexes as `2` then `e`.
            if i < bytes.len() && (bytes[i] == b'e' || bytes[i] == b'E') {
                let mut j = i + 1;
                if j < bytes.len() && (bytes[j] == b'+' || bytes[j] == b'-') {
                    j += 1;
                }
                if j < bytes.len() && bytes[j].is_ascii_digit() {
                    while j < bytes.len() && bytes[j].is_ascii_digit() {
                        j += 1;
                    }
                    integer = false;
                    i = j;
                }
            }
            let text = &src[start..i];
            let value: f64 = text.parse().map_err(|_| ParseError::InvalidNumber {
                text: text.to_string(),
                offset: start,
            })?;
            if !value.is_finite() {
                return Err(ParseError::InvalidNumber { text: text.to_string(), offset: start });
            }
            toks.push((Tok::Number { value, integer }, start));
        } else if b.is_ascii_alphabetic() || b == b'_' {
            while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                i += 1;
            }
            toks.push((Tok::Ident(src[start..i].to_string()), start));
        } else {
            let ch = src[start..].chars().next().unwrap_or('?');
            return Err(ParseError::Syntax {
                offset: start,
                found: format!("character {ch:?}"),
                expected: vec!["number", "identifier", "operator", "'('", "')'"],
            });
        }
    }
    toks.push((Tok::End, src.len()));
    Ok(toks)
}

struct Parser<'a> {
    toks: Vec<(Tok, usize)>,
    pos: usize,
    var: &'a str,
    context: Context,
}

impl Parser<'_> {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].0
    }

    fn offset(&self) -> usize {
        self.toks[self.pos].1
    }

    fn bump(&mut self) -> (Tok, usize) {
        let tok = self.toks[self.pos].clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        tok
    }

    fn unexpected(&self, expected: &[&'static str]) -> ParseError {
        ParseError::Syntax {
            offset: self.offset(),
            found: self.peek().to_string(),
            expected: expected.to_vec(),
        }
    }

    fn expect(&mut self, tok: Tok, name: &'static str) -> Result<(), ParseError> {
        if *self.peek() == tok {
            self.bump();
            Ok(())
        } else {
            Err(self.unexpected(&[name]))
        }
    }

    fn expr(&mut self) -> Result<ExprNode, ParseError> {
        let mut lhs = self.term()?;
        loop {
            match self.peek() {
                Tok::Plus => {
                    self.bump();
                    lhs = ExprNode::Add(Box::new(lhs), Box::new(self.term()?));
                }
                Tok::Minus => {
                    self.bump();
                    lhs = ExprNode::Sub(Box::new(lhs), Box::new(self.term()?));
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn term(&mut self) -> Result<ExprNode, ParseError> {
        let mut lhs = self.unary()?;
        loop {
            match self.peek() {
                Tok::Star => {
                    self.bump();
                    lhs = ExprNode::Mul(Box::new(lhs), Box::new(self.unary()?));
                }
                Tok::Slash => {
                    self.bump();
                    lhs = ExprNode::Div(Box::new(lhs), Box::new(self.unary()?));
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn unary(&mut self) -> Result<ExprNode, ParseError> {
        if *self.peek() == Tok::Minus {
            self.bump();
            return Ok(ExprNode::Neg(Box::new(self.unary()?)));
        }
        self.power()
    }

    fn power(&mut self) -> Result<ExprNode, ParseError> {
        let base = self.atom()?;
        if *self.peek() != Tok::Caret {
            return Ok(base);
        }
        self.bump();
        let negative = if *self.peek() == Tok::Minus {
            self.bump();
            true
        } else {
            false
        };
        let offset = self.offset();
        match self.peek().clone() {
            Tok::Number { value, integer: true } => {
                self.bump();
                let signed = if negative { -value } else { value };
                if signed.abs() > i32::MAX as f64 {
                    return Err(ParseError::InvalidNumber { text: value.to_string(), offset });
                }
                Ok(ExprNode::Pow(Box::new(base), signed as i32))
            }
            _ => Err(self.unexpected(&["integer exponent"])),
        }
    }

    fn atom(&mut self) -> Result<ExprNode, ParseError> {
        let (tok, offset) = self.bump();
        match tok {
            Tok::Number { value, .. } => Ok(ExprNode::real(value)),
            Tok::LParen => {
                let inner = self.expr()?;
                self.expect(Tok::RParen, "')'")?;
                Ok(inner)
            }
            Tok::Ident(name) => self.identifier(name, offset),
            _ => Err(ParseError::Syntax { offset, found: tok.to_string(), expected: EXPECT_OPERAND.to_vec() }),
        }
    }

    fn identifier(&mut self, name: String, offset: usize) -> Result<ExprNode, ParseError> {
        if name == self.var {
            return Ok(ExprNode::Var);
        }
        if let Some(func) = Func::from_name(&name) {
            self.expect(Tok::LParen, "'('")?;
            let arg = self.expr()?;
            self.expect(Tok::RParen, "')'")?;
            return Ok(ExprNode::Apply(func, Box::new(arg)));
        }
        match (name.as_str(), self.context) {
            ("pi", _) => Ok(ExprNode::real(std::f64::consts::PI)),
            ("e", _) => Ok(ExprNode::real(std::f64::consts::E)),
            ("i", Context::Complex) => Ok(ExprNode::Const(Complex64::new(0.0, 1.0))),
            _ => Err(ParseError::UnknownIdentifier { name, offset }),
        }
    }
}

/// Parse `source` as an expression in the single variable `variable_name`.
///
/// The variable shadows the constants `e`, `pi` and `i`. In a real context
/// `i` is an unknown identifier.
pub fn parse_expr(source: &str, variable_name: &str, context: Context) -> Result<ExprNode, ParseError> {
    let toks = tokenize(source)?;
    let mut parser = Parser { toks, pos: 0, var: variable_name, context };
    let node = parser.expr()?;
    if *parser.peek() != Tok::End {
        return Err(parser.unexpected(&["operator", "end of input"]));
    }
    Ok(node)
}
