//! Expression parser.
//!
//! Grammar (whitespace insensitive):
//!
//! ```text
//! expr   := term (('+'|'-') term)*
//! term   := unary (('*'|'/') unary)*
//! unary  := '-'? factor
//! factor := base ('^' ratlit)?
//! base   := ratlit | 'x' | 'Y' | '(' expr ')'
//!         | ('exp'|'log'|'diff'|'int') '(' expr ')'
//! ratlit := integer | integer '/' positive-integer
//! ```
//!
//! Rational literals are greedy: `x^2/3` is x^(2/3), and the slash of a
//! literal must be adjacent (no spaces). Decimal literals are rejected —
//! coefficients are exact rationals. Unary minus binds looser than `^`.

use std::fmt;

use transs_core::rational::{parse_rat, Rat};

#[derive(Debug, Clone, PartialEq)]
pub enum Expr {
    Number(Rat),
    VarX,
    VarY,
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, Rat),
    Exp(Box<Expr>),
    Log(Box<Expr>),
    Diff(Box<Expr>),
    Int(Box<Expr>),
    Neg(Box<Expr>),
}

#[derive(Debug, Clone, PartialEq)]
pub struct ParseError {
    pub offset: usize,
    pub message: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "syntax error at byte {}: {}", self.offset, self.message)
    }
}

impl std::error::Error for ParseError {}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

pub fn parse(text: &str) -> Result<Expr, ParseError> {
    let mut p = Parser {
        src: text.as_bytes(),
        pos: 0,
    };
    let e = p.expr()?;
    p.skip_ws();
    if p.pos != p.src.len() {
        return Err(p.err("unexpected trailing input"));
    }
    Ok(e)
}

impl<'a> Parser<'a> {
    fn err(&self, message: &str) -> ParseError {
        ParseError {
            offset: self.pos,
            message: message.into(),
        }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn eat(&mut self, b: u8) -> bool {
        if self.peek() == Some(b) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> Result<Expr, ParseError> {
        let mut acc = self.term()?;
        loop {
            if self.eat(b'+') {
                acc = Expr::Add(Box::new(acc), Box::new(self.term()?));
            } else if self.eat(b'-') {
                acc = Expr::Sub(Box::new(acc), Box::new(self.term()?));
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<Expr, ParseError> {
        let mut acc = self.unary()?;
        loop {
            if self.eat(b'*') {
                acc = Expr::Mul(Box::new(acc), Box::new(self.unary()?));
            } else if self.eat(b'/') {
                acc = Expr::Div(Box::new(acc), Box::new(self.unary()?));
            } else {
                return Ok(acc);
            }
        }
    }

    fn unary(&mut self) -> Result<Expr, ParseError> {
        if self.eat(b'-') {
            Ok(Expr::Neg(Box::new(self.factor()?)))
        } else {
            self.factor()
        }
    }

    fn factor(&mut self) -> Result<Expr, ParseError> {
        let base = self.base()?;
        if self.eat(b'^') {
            self.skip_ws();
            let e = self.ratlit()?;
            Ok(Expr::Pow(Box::new(base), e))
        } else {
            Ok(base)
        }
    }

    /// An adjacent rational literal: integer, optionally '/' positive-integer.
    fn ratlit(&mut self) -> Result<Rat, ParseError> {
        let start = self.pos;
        if self.src.get(self.pos) == Some(&b'-') {
            self.pos += 1;
        }
        let digits_start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if self.pos == digits_start {
            self.pos = start;
            return Err(self.err("expected a rational literal"));
        }
        if self.src.get(self.pos) == Some(&b'.') {
            return Err(self.err("decimal literals are not accepted; use p/q"));
        }
        // slash must be adjacent and followed by a positive integer
        if self.src.get(self.pos) == Some(&b'/')
            && self
                .src
                .get(self.pos + 1)
                .is_some_and(|c| c.is_ascii_digit() && *c != b'0')
        {
            let slash = self.pos;
            self.pos += 1;
            while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
                self.pos += 1;
            }
            let text = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
            return parse_rat(text).ok_or_else(|| ParseError {
                offset: slash,
                message: "malformed rational literal".into(),
            });
        }
        let text = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
        parse_rat(text).ok_or_else(|| ParseError {
            offset: start,
            message: "malformed integer literal".into(),
        })
    }

    fn ident(&mut self) -> Option<&'a str> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_alphabetic() {
            self.pos += 1;
        }
        if self.pos == start {
            None
        } else {
            Some(std::str::from_utf8(&self.src[start..self.pos]).unwrap())
        }
    }

    fn base(&mut self) -> Result<Expr, ParseError> {
        match self.peek() {
            Some(c) if c.is_ascii_digit() || c == b'-' => {
                // a '-' here belongs to unary, not a literal
                if c == b'-' {
                    return Err(self.err("expected a value"));
                }
                self.ratlit().map(Expr::Number)
            }
            Some(b'(') => {
                self.pos += 1;
                let e = self.expr()?;
                if !self.eat(b')') {
                    return Err(self.err("expected ')'"));
                }
                Ok(e)
            }
            Some(c) if c.is_ascii_alphabetic() => {
                let at = self.pos;
                let name = self.ident().unwrap();
                match name {
                    "x" => Ok(Expr::VarX),
                    "Y" => Ok(Expr::VarY),
                    "exp" | "log" | "diff" | "int" => {
                        if !self.eat(b'(') {
                            return Err(self.err("expected '(' after function name"));
                        }
                        let arg = Box::new(self.expr()?);
                        if !self.eat(b')') {
                            return Err(self.err("expected ')'"));
                        }
                        Ok(match name {
                            "exp" => Expr::Exp(arg),
                            "log" => Expr::Log(arg),
                            "diff" => Expr::Diff(arg),
                            _ => Expr::Int(arg),
                        })
                    }
                    _ => Err(ParseError {
                        offset: at,
                        message: format!("unknown name '{name}'"),
                    }),
                }
            }
            _ => Err(self.err("expected a value")),
        }
    }
}
