//! Text front-end for differential polynomials.
//!
//! Grammar: variables `x` and `aJ` (J >= 1); derivative suffixes `'`
//! (repeated), `aJ^(K)` or `D(aJ, K)`; integer and rational (`P/Q`)
//! literals; operators `+ - * ^`; parentheses. `print . parse` is the
//! canonicalization map and `parse . print` is the identity on canonical
//! forms.

use num::BigInt;

use crate::diffpoly::DiffPoly;
use crate::error::{Error, Result};
use crate::jet::JetVar;
use crate::Rat;

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Int(BigInt),
    Coef(u32),
    X,
    D,
    Quote,
    Plus,
    Minus,
    Star,
    Caret,
    Slash,
    LParen,
    RParen,
    Comma,
}

struct Lexer<'a> {
    src: &'a [u8],
    pos: usize,
}

impl<'a> Lexer<'a> {
    fn new(src: &'a str) -> Self {
        Lexer {
            src: src.as_bytes(),
            pos: 0,
        }
    }

    fn err<T>(&self, at: usize, msg: &str) -> Result<T> {
        Err(Error::Parse {
            offset: at,
            msg: msg.to_string(),
        })
    }

    fn tokens(mut self) -> Result<Vec<(usize, Tok)>> {
        let mut out = Vec::new();
        while self.pos < self.src.len() {
            let at = self.pos;
            let c = self.src[self.pos];
            match c {
                b' ' | b'\t' | b'\n' | b'\r' => {
                    self.pos += 1;
                }
                b'0'..=b'9' => {
                    let start = self.pos;
                    while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
                        self.pos += 1;
                    }
                    let text = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
                    out.push((at, Tok::Int(text.parse().unwrap())));
                }
                b'a' => {
                    self.pos += 1;
                    let start = self.pos;
                    while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
                        self.pos += 1;
                    }
                    if start == self.pos {
                        return self.err(at, "expected a coefficient index after 'a'");
                    }
                    let j: u32 = std::str::from_utf8(&self.src[start..self.pos])
                        .unwrap()
                        .parse()
                        .map_err(|_| Error::Parse {
                            offset: at,
                            msg: "coefficient index out of range".into(),
                        })?;
                    if j == 0 {
                        return self.err(at, "coefficient index must be >= 1");
                    }
                    out.push((at, Tok::Coef(j)));
                }
                b'x' => {
                    self.pos += 1;
                    out.push((at, Tok::X));
                }
                b'D' => {
                    self.pos += 1;
                    out.push((at, Tok::D));
                }
                b'\'' => {
                    self.pos += 1;
                    out.push((at, Tok::Quote));
                }
                b'+' => {
                    self.pos += 1;
                    out.push((at, Tok::Plus));
                }
                b'-' => {
                    self.pos += 1;
                    out.push((at, Tok::Minus));
                }
                b'*' => {
                    self.pos += 1;
                    out.push((at, Tok::Star));
                }
                b'^' => {
                    self.pos += 1;
                    out.push((at, Tok::Caret));
                }
                b'/' => {
                    self.pos += 1;
                    out.push((at, Tok::Slash));
                }
                b'(' => {
                    self.pos += 1;
                    out.push((at, Tok::LParen));
                }
                b')' => {
                    self.pos += 1;
                    out.push((at, Tok::RParen));
                }
                b',' => {
                    self.pos += 1;
                    out.push((at, Tok::Comma));
                }
                _ => return self.err(at, &format!("unexpected character '{}'", c as char)),
            }
        }
        Ok(out)
    }
}

struct Parser {
    toks: Vec<(usize, Tok)>,
    pos: usize,
    end: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(_, t)| t)
    }

    fn at(&self) -> usize {
        self.toks
            .get(self.pos)
            .map(|(o, _)| *o)
            .unwrap_or(self.end)
    }

    fn bump(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.pos).map(|(_, t)| t.clone());
        if t.is_some() {
            self.pos += 1;
        }
        t
    }

    fn err<T>(&self, msg: &str) -> Result<T> {
        Err(Error::Parse {
            offset: self.at(),
            msg: msg.to_string(),
        })
    }

    fn expect(&mut self, tok: Tok, what: &str) -> Result<()> {
        if self.peek() == Some(&tok) {
            self.pos += 1;
            Ok(())
        } else {
            self.err(&format!("expected {what}"))
        }
    }

    fn expr(&mut self) -> Result<DiffPoly> {
        let mut acc = self.term()?;
        loop {
            match self.peek() {
                Some(Tok::Plus) => {
                    self.pos += 1;
                    acc = acc.add(&self.term()?);
                }
                Some(Tok::Minus) => {
                    self.pos += 1;
                    acc = acc.sub(&self.term()?);
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<DiffPoly> {
        let mut acc = self.factor()?;
        while self.peek() == Some(&Tok::Star) {
            self.pos += 1;
            acc = acc.mul(&self.factor()?);
        }
        Ok(acc)
    }

    fn factor(&mut self) -> Result<DiffPoly> {
        if self.peek() == Some(&Tok::Minus) {
            self.pos += 1;
            return Ok(self.factor()?.neg());
        }
        self.power()
    }

    fn small_uint(&mut self, what: &str) -> Result<u32> {
        match self.bump() {
            Some(Tok::Int(n)) => {
                let (sign, digits) = n.to_u32_digits();
                if sign == num::bigint::Sign::NoSign {
                    Ok(0)
                } else if digits.len() == 1 {
                    Ok(digits[0])
                } else {
                    self.err(&format!("{what} out of range"))
                }
            }
            _ => {
                self.pos = self.pos.saturating_sub(1);
                self.err(&format!("expected {what}"))
            }
        }
    }

    fn power(&mut self) -> Result<DiffPoly> {
        let base = self.atom()?;
        if self.peek() == Some(&Tok::Caret) {
            self.pos += 1;
            // parenthesized exponents are reserved for the jet suffix,
            // which atom() consumes; a power exponent is a bare integer
            let e = self.small_uint("a nonnegative integer exponent")?;
            return Ok(base.pow(e));
        }
        Ok(base)
    }

    /// Parse a coefficient symbol's derivative suffixes: a run of quotes
    /// or a single `^(K)`.
    fn jet_order(&mut self) -> Result<u32> {
        if self.peek() == Some(&Tok::Quote) {
            let mut k = 0;
            while self.peek() == Some(&Tok::Quote) {
                self.pos += 1;
                k += 1;
            }
            return Ok(k);
        }
        // lookahead: ^( K )
        if self.peek() == Some(&Tok::Caret)
            && self.toks.get(self.pos + 1).map(|(_, t)| t) == Some(&Tok::LParen)
        {
            self.pos += 2;
            let k = self.small_uint("a jet order")?;
            self.expect(Tok::RParen, "')'")?;
            return Ok(k);
        }
        Ok(0)
    }

    fn atom(&mut self) -> Result<DiffPoly> {
        match self.peek().cloned() {
            Some(Tok::Int(n)) => {
                self.pos += 1;
                // rational literal P/Q
                if self.peek() == Some(&Tok::Slash) {
                    self.pos += 1;
                    match self.bump() {
                        Some(Tok::Int(d)) => {
                            if d == BigInt::from(0) {
                                self.pos -= 1;
                                return self.err("zero denominator in rational literal");
                            }
                            Ok(DiffPoly::constant(Rat::new(n, d)))
                        }
                        _ => {
                            self.pos = self.pos.saturating_sub(1);
                            self.err("expected an integer denominator")
                        }
                    }
                } else {
                    Ok(DiffPoly::constant(Rat::from_integer(n)))
                }
            }
            Some(Tok::X) => {
                self.pos += 1;
                Ok(DiffPoly::x())
            }
            Some(Tok::Coef(j)) => {
                self.pos += 1;
                let k = self.jet_order()?;
                Ok(DiffPoly::var(JetVar::Coef(j, k)))
            }
            Some(Tok::D) => {
                self.pos += 1;
                self.expect(Tok::LParen, "'(' after D")?;
                let j = match self.bump() {
                    Some(Tok::Coef(j)) => j,
                    _ => {
                        self.pos = self.pos.saturating_sub(1);
                        return self.err("expected a coefficient symbol in D(...)");
                    }
                };
                self.expect(Tok::Comma, "','")?;
                let k = self.small_uint("a jet order")?;
                self.expect(Tok::RParen, "')'")?;
                Ok(DiffPoly::var(JetVar::Coef(j, k)))
            }
            Some(Tok::LParen) => {
                self.pos += 1;
                let inner = self.expr()?;
                self.expect(Tok::RParen, "')'")?;
                Ok(inner)
            }
            _ => self.err("expected an operand"),
        }
    }
}

/// Parse a differential polynomial in the coefficient jets and `x`.
pub fn parse(text: &str) -> Result<DiffPoly> {
    let toks = Lexer::new(text).tokens()?;
    let mut p = Parser {
        toks,
        pos: 0,
        end: text.len(),
    };
    let poly = p.expr()?;
    if p.pos != p.toks.len() {
        return p.err("unexpected trailing input");
    }
    Ok(poly)
}
