//! Recursive-descent parser for element expressions.
//!
//! ```text
//! sum    := term (('+' | '-') term)*
//! term   := unary (('*' | <whitespace>) unary)*
//! unary  := '-' unary | power
//! power  := atom ('^' '-'? INT)?
//! atom   := INT | 'q' | 'D' | 't' '[' INT ',' INT ']' | '(' sum ')'
//! ```

use num_bigint::BigInt;

use crate::error::{Error, Result};
use crate::monomial::GenIndex;
use crate::rewrite::Variant;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Expr {
    Int(BigInt),
    Q,
    D,
    Gen(GenIndex),
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, i64),
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Int(BigInt),
    Q,
    D,
    T,
    Plus,
    Minus,
    Star,
    Caret,
    LParen,
    RParen,
    LBracket,
    RBracket,
    Comma,
    End,
}

#[derive(Clone, Debug)]
struct Token {
    tok: Tok,
    offset: usize,
    spaced: bool,
}

const FACTOR_START: &[&str] = &["integer", "q", "D", "t[i,j]", "(", "-"];

fn parse_error(offset: usize, message: impl Into<String>, expected: &[&str]) -> Error {
    Error::Parse {
        offset,
        message: message.into(),
        expected: expected.iter().map(|s| s.to_string()).collect(),
    }
}

fn lex(src: &str) -> Result<Vec<Token>> {
    let bytes = src.as_bytes();
    let mut out = Vec::new();
    let mut pos = 0;
    let mut spaced = false;
    while pos < bytes.len() {
        let c = bytes[pos];
        if c.is_ascii_whitespace() {
            spaced = true;
            pos += 1;
            continue;
        }
        let start = pos;
        let tok = match c {
            b'0'..=b'9' => {
                while pos < bytes.len() && bytes[pos].is_ascii_digit() {
                    pos += 1;
                }
                Tok::Int(src[start..pos].parse().expect("digits"))
            }
            b'q' => {
                pos += 1;
                Tok::Q
            }
            b'D' => {
                pos += 1;
                Tok::D
            }
            b't' => {
                pos += 1;
                Tok::T
            }
            b'+' | b'-' | b'*' | b'^' | b'(' | b')' | b'[' | b']' | b',' => {
                pos += 1;
                match c {
                    b'+' => Tok::Plus,
                    b'-' => Tok::Minus,
                    b'*' => Tok::Star,
                    b'^' => Tok::Caret,
                    b'(' => Tok::LParen,
                    b')' => Tok::RParen,
                    b'[' => Tok::LBracket,
                    b']' => Tok::RBracket,
                    _ => Tok::Comma,
                }
            }
            _ => {
                let ch = src[start..].chars().next().expect("nonempty");
                return Err(parse_error(
                    start,
                    format!("unexpected character {ch:?}"),
                    FACTOR_START,
                ));
            }
        };
        out.push(Token {
            tok,
            offset: start,
            spaced,
        });
        spaced = false;
    }
    out.push(Token {
        tok: Tok::End,
        offset: bytes.len(),
        spaced,
    });
    Ok(out)
}

struct Parser {
    toks: Vec<Token>,
    pos: usize,
    n: usize,
    variant: Variant,
}

/// Parses `src` for an algebra of size `n` and the given variant.
pub fn parse(src: &str, n: usize, variant: Variant) -> Result<Expr> {
    let mut p = Parser {
        toks: lex(src)?,
        pos: 0,
        n,
        variant,
    };
    let e = p.sum()?;
    let t = p.peek();
    if t.tok != Tok::End {
        let msg = if t.tok == Tok::RParen {
            "unmatched ')'"
        } else {
            "expected an operator"
        };
        return Err(parse_error(t.offset, msg, &["+", "-", "*", "end of input"]));
    }
    Ok(e)
}

impl Parser {
    fn peek(&self) -> &Token {
        &self.toks[self.pos]
    }

    fn bump(&mut self) -> Token {
        let t = self.toks[self.pos].clone();
        if t.tok != Tok::End {
            self.pos += 1;
        }
        t
    }

    fn expect(&mut self, tok: Tok, name: &str) -> Result<Token> {
        let t = self.bump();
        if t.tok != tok {
            return Err(parse_error(t.offset, format!("expected {name}"), &[name]));
        }
        Ok(t)
    }

    fn sum(&mut self) -> Result<Expr> {
        let mut lhs = self.term()?;
        loop {
            match self.peek().tok {
                Tok::Plus => {
                    self.bump();
                    lhs = Expr::Add(Box::new(lhs), Box::new(self.term()?));
                }
                Tok::Minus => {
                    self.bump();
                    lhs = Expr::Sub(Box::new(lhs), Box::new(self.term()?));
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn starts_atom(tok: &Tok) -> bool {
        matches!(tok, Tok::Int(_) | Tok::Q | Tok::D | Tok::T | Tok::LParen)
    }

    fn term(&mut self) -> Result<Expr> {
        let mut lhs = self.unary()?;
        loop {
            let t = self.peek();
            if t.tok == Tok::Star {
                self.bump();
                lhs = Expr::Mul(Box::new(lhs), Box::new(self.unary()?));
            } else if Self::starts_atom(&t.tok) {
                if !t.spaced {
                    return Err(parse_error(
                        t.offset,
                        "factors must be separated by '*' or whitespace",
                        &["*", "whitespace"],
                    ));
                }
                lhs = Expr::Mul(Box::new(lhs), Box::new(self.unary()?));
            } else {
                return Ok(lhs);
            }
        }
    }

    fn unary(&mut self) -> Result<Expr> {
        if self.peek().tok == Tok::Minus {
            self.bump();
            return Ok(Expr::Neg(Box::new(self.unary()?)));
        }
        self.power()
    }

    fn power(&mut self) -> Result<Expr> {
        let atom_offset = self.peek().offset;
        let base = self.atom()?;
        if self.peek().tok != Tok::Caret {
            return Ok(base);
        }
        self.bump();
        let negative = self.peek().tok == Tok::Minus;
        if negative {
            self.bump();
        }
        let t = self.bump();
        let Tok::Int(k) = t.tok else {
            return Err(parse_error(
                t.offset,
                "expected an integer exponent",
                &["integer"],
            ));
        };
        let k: i64 = k
            .try_into()
            .map_err(|_| parse_error(t.offset, "exponent too large", &["integer"]))?;
        if k > u32::MAX as i64 {
            return Err(parse_error(t.offset, "exponent too large", &["integer"]));
        }
        if negative && !matches!(base, Expr::Q | Expr::D) {
            let what = match base {
                Expr::Gen(_) => "negative power of a generator",
                _ => "negative powers are allowed only on q and D",
            };
            return Err(parse_error(atom_offset, what, &[]));
        }
        if self.peek().tok == Tok::Caret {
            return Err(parse_error(
                self.peek().offset,
                "chained powers need parentheses",
                &["*", "+", "-"],
            ));
        }
        Ok(Expr::Pow(Box::new(base), if negative { -k } else { k }))
    }

    fn index(&mut self) -> Result<usize> {
        let t = self.bump();
        match t.tok {
            Tok::Int(v) => {
                let v: usize = v.try_into().unwrap_or(usize::MAX);
                if v == 0 || v > self.n {
                    return Err(parse_error(
                        t.offset,
                        format!("index {v} out of range 1..={}", self.n),
                        &[],
                    ));
                }
                Ok(v)
            }
            _ => Err(parse_error(t.offset, "expected an index", &["integer"])),
        }
    }

    fn atom(&mut self) -> Result<Expr> {
        let t = self.bump();
        match t.tok {
            Tok::Int(v) => Ok(Expr::Int(v)),
            Tok::Q => Ok(Expr::Q),
            Tok::D => {
                if self.variant == Variant::Mn {
                    return Err(parse_error(
                        t.offset,
                        "D is not available in the M_n variant",
                        &[],
                    ));
                }
                Ok(Expr::D)
            }
            Tok::T => {
                self.expect(Tok::LBracket, "[")?;
                let i = self.index()?;
                self.expect(Tok::Comma, ",")?;
                let j = self.index()?;
                self.expect(Tok::RBracket, "]")?;
                Ok(Expr::Gen(GenIndex::new(i, j)))
            }
            Tok::LParen => {
                let e = self.sum()?;
                self.expect(Tok::RParen, ")")?;
                Ok(e)
            }
            Tok::End => Err(parse_error(
                t.offset,
                "unexpected end of input",
                FACTOR_START,
            )),
            _ => Err(parse_error(t.offset, "expected a factor", FACTOR_START)),
        }
    }
}

/// `src` with a caret under `offset`, for diagnostics.
pub fn caret_line(src: &str, offset: usize) -> String {
    let col = src[..offset.min(src.len())].chars().count();
    format!("  {src}\n  {}^", " ".repeat(col))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> Result<Expr> {
        parse(s, 2, Variant::GLn)
    }

    fn offset(e: Error) -> usize {
        match e {
            Error::Parse { offset, .. } => offset,
            other => panic!("not a parse error: {other}"),
        }
    }

    #[test]
    fn precedence() {
        let e = p("q + t[1,1]^2 * t[2,2]").unwrap();
        let t11 = Expr::Gen(GenIndex::new(1, 1));
        let t22 = Expr::Gen(GenIndex::new(2, 2));
        assert_eq!(
            e,
            Expr::Add(
                Box::new(Expr::Q),
                Box::new(Expr::Mul(
                    Box::new(Expr::Pow(Box::new(t11), 2)),
                    Box::new(t22)
                ))
            )
        );
        assert_eq!(p("q t[1,1]").unwrap(), p("q*t[1,1]").unwrap());
        assert_eq!(
            p("-q^-1").unwrap(),
            Expr::Neg(Box::new(Expr::Pow(Box::new(Expr::Q), -1)))
        );
    }

    #[test]
    fn errors() {
        assert_eq!(offset(p("()").unwrap_err()), 1);
        assert!(
            matches!(p("t[1,2]^-1"), Err(Error::Parse { message, .. }) if message.contains("generator"))
        );
        assert_eq!(offset(p("t[1,3]").unwrap_err()), 4);
        assert_eq!(offset(p("t[1,1]2").unwrap_err()), 6);
        assert_eq!(offset(parse("D", 2, Variant::Mn).unwrap_err()), 0);
        assert_eq!(offset(p("q ^ 2 ^ 3").unwrap_err()), 6);
        assert_eq!(offset(p("1 +").unwrap_err()), 3);
        assert_eq!(offset(p("x").unwrap_err()), 0);
        assert_eq!(offset(p("(q").unwrap_err()), 2);
        assert_eq!(offset(p("q)").unwrap_err()), 1);
        assert!(p("(q + 1)^-2").is_err());
        assert!(p("D^-3 q^-2").is_ok());
    }

    #[test]
    fn expected_sets_are_reported() {
        let Err(Error::Parse { expected, .. }) = p("()") else {
            panic!()
        };
        assert!(expected.contains(&"t[i,j]".to_string()));
    }
}
