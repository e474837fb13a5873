//! Polynomial text parser.
//!
//! Grammar (whitespace-insensitive):
//!
//! ```text
//! expr    := term (('+' | '-') term)*
//! term    := factor ('*' factor)*
//! factor  := '-' factor | power
//! power   := atom ('^' INT)?
//! atom    := INT ('/' INT)? | 'x' | 'y' | '(' expr ')'
//! ```
//!
//! Implicit multiplication is rejected, as are decimal literals.

use std::fmt;

use num_bigint::BigInt;
use num_traits::Zero;
use thiserror::Error;

use super::Poly;
use crate::Rational;

const MAX_EXPONENT: u32 = 4096;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{kind} at column {column} (token {token})")]
pub struct ParseError {
    pub kind: ParseErrorKind,
    /// Byte offset into the input.
    pub column: usize,
    /// Zero-based index of the offending lexical token.
    pub token: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ParseErrorKind {
    UnexpectedChar(char),
    UnexpectedToken(String),
    UnexpectedEnd,
    NonRationalLiteral,
    ZeroDenominator,
    BadExponent(String),
}

impl fmt::Display for ParseErrorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::UnexpectedChar(c) => write!(f, "syntax error: unexpected character `{c}`"),
            Self::UnexpectedToken(t) => write!(f, "syntax error: unexpected `{t}`"),
            Self::UnexpectedEnd => write!(f, "syntax error: unexpected end of input"),
            Self::NonRationalLiteral => write!(f, "non-rational literal (use p/q)"),
            Self::ZeroDenominator => write!(f, "zero denominator"),
            Self::BadExponent(e) => write!(f, "exponent must be a nonnegative integer: {e}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Int(BigInt),
    X,
    Y,
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Int(n) => write!(f, "{n}"),
            Tok::X => write!(f, "x"),
            Tok::Y => write!(f, "y"),
            Tok::Plus => write!(f, "+"),
            Tok::Minus => write!(f, "-"),
            Tok::Star => write!(f, "*"),
            Tok::Slash => write!(f, "/"),
            Tok::Caret => write!(f, "^"),
            Tok::LParen => write!(f, "("),
            Tok::RParen => write!(f, ")"),
        }
    }
}

fn lex(text: &str) -> Result<Vec<(Tok, usize)>, ParseError> {
    let mut toks = Vec::new();
    let bytes = text.as_bytes();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i] as char;
        let start = i;
        let tok = match c {
            c if c.is_ascii_whitespace() => {
                i += 1;
                continue;
            }
            '0'..='9' => {
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                if i < bytes.len() && matches!(bytes[i], b'.' | b'e' | b'E') {
                    return Err(ParseError {
                        kind: ParseErrorKind::NonRationalLiteral,
                        column: start,
                        token: toks.len(),
                    });
                }
                toks.push((Tok::Int(text[start..i].parse().expect("digits")), start));
                continue;
            }
            '.' => {
                return Err(ParseError {
                    kind: ParseErrorKind::NonRationalLiteral,
                    column: start,
                    token: toks.len(),
                })
            }
            'x' => Tok::X,
            'y' => Tok::Y,
            '+' => Tok::Plus,
            '-' => Tok::Minus,
            '*' => Tok::Star,
            '/' => Tok::Slash,
            '^' => Tok::Caret,
            '(' => Tok::LParen,
            ')' => Tok::RParen,
            _ => {
                let ch = text[start..].chars().next().unwrap_or('?');
                return Err(ParseError {
                    kind: ParseErrorKind::UnexpectedChar(ch),
                    column: start,
                    token: toks.len(),
                });
            }
        };
        i += 1;
        toks.push((tok, start));
    }
    Ok(toks)
}

struct Parser<'a> {
    toks: &'a [(Tok, usize)],
    pos: usize,
    len: usize,
}

impl Parser<'_> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(t, _)| t)
    }

    fn error(&self, kind: ParseErrorKind) -> ParseError {
        let column = self.toks.get(self.pos).map_or(self.len, |(_, c)| *c);
        ParseError {
            kind,
            column,
            token: self.pos,
        }
    }

    fn unexpected(&self) -> ParseError {
        match self.peek() {
            Some(t) => self.error(ParseErrorKind::UnexpectedToken(t.to_string())),
            None => self.error(ParseErrorKind::UnexpectedEnd),
        }
    }

    fn expr(&mut self) -> Result<Poly, ParseError> {
        let mut acc = self.term()?;
        loop {
            match self.peek() {
                Some(Tok::Plus) => {
                    self.pos += 1;
                    acc = &acc + &self.term()?;
                }
                Some(Tok::Minus) => {
                    self.pos += 1;
                    acc = &acc - &self.term()?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<Poly, ParseError> {
        let mut acc = self.factor()?;
        while let Some(Tok::Star) = self.peek() {
            self.pos += 1;
            acc = &acc * &self.factor()?;
        }
        Ok(acc)
    }

    fn factor(&mut self) -> Result<Poly, ParseError> {
        if let Some(Tok::Minus) = self.peek() {
            self.pos += 1;
            return Ok(-&self.factor()?);
        }
        self.power()
    }

    fn power(&mut self) -> Result<Poly, ParseError> {
        let base = self.atom()?;
        if let Some(Tok::Caret) = self.peek() {
            self.pos += 1;
            let e = match self.peek() {
                Some(Tok::Int(n)) => n.clone(),
                Some(Tok::Minus) => {
                    return Err(self.error(ParseErrorKind::BadExponent("negative".into())))
                }
                _ => return Err(self.unexpected()),
            };
            let e: u32 = u32::try_from(&e)
                .ok()
                .filter(|&e| e <= MAX_EXPONENT)
                .ok_or_else(|| self.error(ParseErrorKind::BadExponent(format!("{e} is too large"))))?;
            self.pos += 1;
            if let Some(Tok::Slash) = self.peek() {
                return Err(self.error(ParseErrorKind::BadExponent("rational".into())));
            }
            return Ok(base.pow(e));
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Poly, ParseError> {
        match self.peek() {
            Some(Tok::Int(n)) => {
                let num = n.clone();
                self.pos += 1;
                if let Some(Tok::Slash) = self.peek() {
                    self.pos += 1;
                    let den = match self.peek() {
                        Some(Tok::Int(d)) => d.clone(),
                        _ => return Err(self.unexpected()),
                    };
                    if den.is_zero() {
                        return Err(self.error(ParseErrorKind::ZeroDenominator));
                    }
                    self.pos += 1;
                    return Ok(Poly::constant(Rational::new(num, den)));
                }
                Ok(Poly::constant(Rational::from_integer(num)))
            }
            Some(Tok::X) => {
                self.pos += 1;
                Ok(Poly::x())
            }
            Some(Tok::Y) => {
                self.pos += 1;
                Ok(Poly::y())
            }
            Some(Tok::LParen) => {
                self.pos += 1;
                let inner = self.expr()?;
                match self.peek() {
                    Some(Tok::RParen) => {
                        self.pos += 1;
                        Ok(inner)
                    }
                    _ => Err(self.unexpected()),
                }
            }
            _ => Err(self.unexpected()),
        }
    }
}

/// Parses a polynomial in `x`, `y` exactly.
pub fn parse_poly(text: &str) -> Result<Poly, ParseError> {
    let toks = lex(text)?;
    let mut parser = Parser {
        toks: &toks,
        pos: 0,
        len: text.len(),
    };
    let poly = parser.expr()?;
    if parser.pos != toks.len() {
        return Err(parser.unexpected());
    }
    Ok(poly)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::{int, rational};

    #[test]
    fn reads_supports() {
        let f = parse_poly("x^4 + y^3").unwrap();
        assert_eq!(f.support().collect::<Vec<_>>(), vec![(0, 3), (4, 0)]);
        let g = parse_poly("x^3*y + x*y^5").unwrap();
        assert_eq!(g.coeff(3, 1), int(1));
        assert_eq!(g.coeff(1, 5), int(1));
        assert_eq!(g.len(), 2);
    }

    #[test]
    fn rational_literals_are_exact() {
        let f = parse_poly("3/2*x^4 - x*y^2").unwrap();
        assert_eq!(f.coeff(4, 0), rational(3, 2));
        assert_eq!(f.coeff(1, 2), int(-1));
        let g = parse_poly(" - 2/6 * y ").unwrap();
        assert_eq!(g.coeff(0, 1), rational(-1, 3));
    }

    #[test]
    fn double_plus_is_a_syntax_error() {
        let err = parse_poly("x^2 + + y").unwrap_err();
        assert_eq!(err.kind, ParseErrorKind::UnexpectedToken("+".into()));
        assert_eq!(err.column, 6);
        assert_eq!(err.token, 4);
    }

    #[test]
    fn rejects_bad_input() {
        assert_eq!(parse_poly("1.5*x").unwrap_err().kind, ParseErrorKind::NonRationalLiteral);
        assert_eq!(parse_poly("1e3*x").unwrap_err().kind, ParseErrorKind::NonRationalLiteral);
        assert_eq!(parse_poly("x/0").unwrap_err().kind, ParseErrorKind::UnexpectedToken("/".into()));
        assert_eq!(parse_poly("1/0*x").unwrap_err().kind, ParseErrorKind::ZeroDenominator);
        assert_eq!(parse_poly("2x").unwrap_err().kind, ParseErrorKind::UnexpectedToken("x".into()));
        assert_eq!(parse_poly("x y").unwrap_err().kind, ParseErrorKind::UnexpectedToken("y".into()));
        assert!(matches!(parse_poly("x^-1").unwrap_err().kind, ParseErrorKind::BadExponent(_)));
        assert!(matches!(parse_poly("x^1/2").unwrap_err().kind, ParseErrorKind::BadExponent(_)));
        assert!(matches!(parse_poly("z").unwrap_err().kind, ParseErrorKind::UnexpectedChar('z')));
        assert_eq!(parse_poly("(x + y").unwrap_err().kind, ParseErrorKind::UnexpectedEnd);
        assert_eq!(parse_poly("").unwrap_err().kind, ParseErrorKind::UnexpectedEnd);
    }

    #[test]
    fn cancellation_yields_zero() {
        assert!(parse_poly("x*y - y*x").unwrap().is_zero());
    }
}
