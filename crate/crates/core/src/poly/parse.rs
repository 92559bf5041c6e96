//! Recursive-descent parser for polynomial text.
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := factor ('*' factor)*
//! factor := ('+' | '-') factor | power
//! power  := atom ('^' integer)?
//! atom   := integer ('/' integer)? | 'x' index | '(' expr ')'
//! ```
//!
//! Multiplication must be written explicitly: `x1x2` and `2x1` are rejected.

use alloc::format;
use alloc::string::String;

use num_bigint::BigInt;
use num_traits::Zero;

use super::{Polynomial, Rational};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq)]
enum Token {
    Int(BigInt),
    Var(usize),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
    End,
}

struct Lexer<'a> {
    src: &'a [u8],
    pos: usize,
}

impl<'a> Lexer<'a> {
    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn digits(&mut self) -> &'a str {
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        core::str::from_utf8(&self.src[start..self.pos]).unwrap_or("")
    }

    /// Returns the token and its starting byte offset.
    fn next(&mut self) -> Result<(Token, usize)> {
        self.skip_ws();
        let start = self.pos;
        let Some(&c) = self.src.get(self.pos) else {
            return Ok((Token::End, start));
        };
        let tok = match c {
            b'+' => Token::Plus,
            b'-' => Token::Minus,
            b'*' => Token::Star,
            b'/' => Token::Slash,
            b'^' => Token::Caret,
            b'(' => Token::LParen,
            b')' => Token::RParen,
            b'0'..=b'9' => {
                let text = self.digits();
                let value = text.parse::<BigInt>().map_err(|_| err(start, "bad integer"))?;
                return Ok((Token::Int(value), start));
            }
            b'x' => {
                self.pos += 1;
                let text = self.digits();
                if text.is_empty() {
                    return Err(err(start, "expected variable index after 'x'"));
                }
                let index = text
                    .parse::<usize>()
                    .map_err(|_| err(start, "variable index too large"))?;
                return Ok((Token::Var(index), start));
            }
            other => {
                return Err(err(start, &format!("unexpected character {:?}", other as char)));
            }
        };
        self.pos += 1;
        Ok((tok, start))
    }
}

fn err(position: usize, message: &str) -> Error {
    Error::Parse {
        position,
        message: String::from(message),
    }
}

struct Parser<'a> {
    lexer: Lexer<'a>,
    current: Token,
    position: usize,
    arity: usize,
}

impl<'a> Parser<'a> {
    fn bump(&mut self) -> Result<()> {
        let (tok, pos) = self.lexer.next()?;
        self.current = tok;
        self.position = pos;
        Ok(())
    }

    fn expr(&mut self) -> Result<Polynomial> {
        let mut acc = self.term()?;
        loop {
            match self.current {
                Token::Plus => {
                    self.bump()?;
                    acc = &acc + &self.term()?;
                }
                Token::Minus => {
                    self.bump()?;
                    acc = &acc - &self.term()?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<Polynomial> {
        let mut acc = self.factor()?;
        loop {
            match self.current {
                Token::Star => {
                    self.bump()?;
                    acc = &acc * &self.factor()?;
                }
                Token::Int(_) | Token::Var(_) | Token::LParen => {
                    return Err(err(self.position, "implicit multiplication is not allowed; use '*'"));
                }
                _ => return Ok(acc),
            }
        }
    }

    fn factor(&mut self) -> Result<Polynomial> {
        match self.current {
            Token::Minus => {
                self.bump()?;
                Ok(-&self.factor()?)
            }
            Token::Plus => {
                self.bump()?;
                self.factor()
            }
            _ => self.power(),
        }
    }

    fn power(&mut self) -> Result<Polynomial> {
        let base = self.atom()?;
        if self.current != Token::Caret {
            return Ok(base);
        }
        self.bump()?;
        let Token::Int(ref e) = self.current else {
            return Err(err(self.position, "expected a non-negative integer exponent"));
        };
        let exp = u32::try_from(e).map_err(|_| err(self.position, "exponent too large"))?;
        self.bump()?;
        if self.current == Token::Caret {
            return Err(err(self.position, "chained '^' is ambiguous; use parentheses"));
        }
        Ok(base.pow(exp))
    }

    fn atom(&mut self) -> Result<Polynomial> {
        match self.current.clone() {
            Token::Int(n) => {
                self.bump()?;
                let mut value = Rational::from_integer(n);
                if self.current == Token::Slash {
                    self.bump()?;
                    let Token::Int(d) = self.current.clone() else {
                        return Err(err(self.position, "expected an integer denominator after '/'"));
                    };
                    if d.is_zero() {
                        return Err(err(self.position, "zero denominator"));
                    }
                    value /= Rational::from_integer(d);
                    self.bump()?;
                }
                Ok(Polynomial::constant(self.arity, value))
            }
            Token::Var(i) => {
                if i == 0 || i > self.arity {
                    return Err(Error::VariableOutOfRange {
                        index: i,
                        arity: self.arity,
                    });
                }
                self.bump()?;
                Ok(Polynomial::var(self.arity, i - 1))
            }
            Token::LParen => {
                self.bump()?;
                let inner = self.expr()?;
                if self.current != Token::RParen {
                    return Err(err(self.position, "expected ')'"));
                }
                self.bump()?;
                Ok(inner)
            }
            Token::End => Err(err(self.position, "unexpected end of input")),
            _ => Err(err(self.position, "expected a number, variable or '('")),
        }
    }
}

/// Parses polynomial text over variables `x1 .. x<arity>`.
pub fn parse(text: &str, arity: usize) -> Result<Polynomial> {
    let mut parser = Parser {
        lexer: Lexer {
            src: text.as_bytes(),
            pos: 0,
        },
        current: Token::End,
        position: 0,
        arity,
    };
    parser.bump()?;
    let p = parser.expr()?;
    match parser.current {
        Token::End => Ok(p),
        Token::Slash => Err(err(parser.position, "'/' is only allowed between integer literals")),
        _ => Err(err(parser.position, "unexpected trailing input")),
    }
}
