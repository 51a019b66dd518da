//! Parser for class expressions such as `hz - 3*hd^2` or `(h + i)^2`.
//!
//! Symbols are `h`, `hd`, `i` and `z`; adjacent factors multiply, so a run
//! of letters like `hdz` reads as `hd·z`. Coefficients are integers or
//! `p/q` rationals.

use num_bigint::BigInt;
use num_traits::Zero;

use crate::chow::ChowClass;
use crate::error::{Error, Result};
use crate::poly::Rational;

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(BigInt),
    H,
    Hd,
    I,
    Z,
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
}

fn lex(src: &str) -> Result<Vec<(usize, Tok)>> {
    let bytes = src.as_bytes();
    let mut out = Vec::new();
    let mut pos = 0;
    while pos < bytes.len() {
        let c = bytes[pos];
        let tok = match c {
            b' ' | b'\t' | b'\n' | b'\r' => {
                pos += 1;
                continue;
            }
            b'0'..=b'9' => {
                let start = pos;
                while pos < bytes.len() && bytes[pos].is_ascii_digit() {
                    pos += 1;
                }
                let n: BigInt = src[start..pos].parse().expect("ascii digits");
                out.push((start, Tok::Num(n)));
                continue;
            }
            b'h' if bytes.get(pos + 1) == Some(&b'd') => {
                out.push((pos, Tok::Hd));
                pos += 2;
                continue;
            }
            b'h' => Tok::H,
            b'i' => Tok::I,
            b'z' => Tok::Z,
            b'+' => Tok::Plus,
            b'-' => Tok::Minus,
            b'*' => Tok::Star,
            b'/' => Tok::Slash,
            b'^' => Tok::Caret,
            b'(' => Tok::LParen,
            b')' => Tok::RParen,
            _ => {
                return Err(Error::Parse {
                    pos,
                    msg: format!(
                        "unexpected character {:?}",
                        src[pos..].chars().next().unwrap()
                    ),
                })
            }
        };
        out.push((pos, tok));
        pos += 1;
    }
    Ok(out)
}

struct Parser {
    toks: Vec<(usize, Tok)>,
    at: usize,
    end: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.at).map(|(_, t)| t)
    }

    fn pos(&self) -> usize {
        self.toks.get(self.at).map_or(self.end, |(p, _)| *p)
    }

    fn err<T>(&self, msg: impl Into<String>) -> Result<T> {
        Err(Error::Parse {
            pos: self.pos(),
            msg: msg.into(),
        })
    }

    fn bump(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.at).map(|(_, t)| t.clone());
        self.at += 1;
        t
    }

    fn expr(&mut self) -> Result<ChowClass> {
        let mut acc = match self.peek() {
            Some(Tok::Minus) => {
                self.bump();
                self.term()?.scale(&Rational::from_integer((-1).into()))
            }
            Some(Tok::Plus) => {
                self.bump();
                self.term()?
            }
            _ => self.term()?,
        };
        loop {
            match self.peek() {
                Some(Tok::Plus) => {
                    self.bump();
                    acc = acc.add(&self.term()?);
                }
                Some(Tok::Minus) => {
                    self.bump();
                    acc = acc.sub(&self.term()?);
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<ChowClass> {
        let mut acc = self.factor()?;
        loop {
            match self.peek() {
                Some(Tok::Star) => {
                    self.bump();
                    acc = acc.mul(&self.factor()?);
                }
                Some(Tok::Num(_) | Tok::H | Tok::Hd | Tok::I | Tok::Z | Tok::LParen) => {
                    acc = acc.mul(&self.factor()?);
                }
                _ => return Ok(acc),
            }
        }
    }

    fn factor(&mut self) -> Result<ChowClass> {
        if self.peek() == Some(&Tok::Minus) {
            self.bump();
            return Ok(self.factor()?.scale(&Rational::from_integer((-1).into())));
        }
        let base = self.atom()?;
        if self.peek() == Some(&Tok::Caret) {
            self.bump();
            match self.bump() {
                Some(Tok::Num(n)) => {
                    let e: u32 = match u32::try_from(&n) {
                        Ok(e) if e <= 64 => e,
                        _ => return self.err("exponent out of range"),
                    };
                    return Ok(base.pow(e));
                }
                _ => {
                    self.at -= 1;
                    return self.err("expected an integer exponent after '^'");
                }
            }
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<ChowClass> {
        match self.bump() {
            Some(Tok::Num(n)) => {
                let mut q = Rational::from_integer(n);
                if self.peek() == Some(&Tok::Slash) {
                    self.bump();
                    match self.bump() {
                        Some(Tok::Num(d)) if !d.is_zero() => q /= Rational::from_integer(d),
                        _ => {
                            self.at -= 1;
                            return self.err("expected a nonzero integer denominator");
                        }
                    }
                }
                Ok(ChowClass::one().scale(&q))
            }
            Some(Tok::H) => Ok(ChowClass::h()),
            Some(Tok::Hd) => Ok(ChowClass::hd()),
            Some(Tok::I) => Ok(ChowClass::i()),
            Some(Tok::Z) => Ok(ChowClass::z()),
            Some(Tok::LParen) => {
                let inner = self.expr()?;
                if self.bump() != Some(Tok::RParen) {
                    self.at -= 1;
                    return self.err("expected ')'");
                }
                Ok(inner)
            }
            Some(_) => {
                self.at -= 1;
                self.err("expected a number, symbol or '('")
            }
            None => self.err("unexpected end of expression"),
        }
    }
}

/// Parse and evaluate a class expression to its z-basis normal form.
pub fn parse_class(src: &str) -> Result<ChowClass> {
    let toks = lex(src)?;
    let mut p = Parser {
        toks,
        at: 0,
        end: src.len(),
    };
    let v = p.expr()?;
    if p.peek().is_some() {
        return p.err("trailing input");
    }
    Ok(v)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::rat;
    use proptest::prelude::*;

    #[test]
    fn relations_evaluate_to_zero() {
        assert!(parse_class("i*z").unwrap().is_zero());
        assert!(parse_class("iz").unwrap().is_zero());
        assert!(parse_class("h^3").unwrap().is_zero());
        assert!(parse_class("h^2 - h*hd + hd^2").unwrap().is_zero());
        assert!(parse_class("i^2 - 3(h - hd)i").unwrap().is_zero());
    }

    #[test]
    fn juxtaposition_and_integrals() {
        assert!(parse_class("h^2*hd*z").unwrap().integrate() == rat(1));
        assert_eq!(
            parse_class("h^2hdz").unwrap(),
            parse_class("h^2*hd*z").unwrap()
        );
        assert_eq!(
            parse_class("hz - 3*hd^2").unwrap().to_i_basis().to_string(),
            "hi"
        );
        assert_eq!(parse_class("3/2 h").unwrap().to_string(), "3/2*h");
        assert_eq!(parse_class("-(h)").unwrap().to_string(), "-h");
        assert_eq!(parse_class("2hd").unwrap().to_string(), "2hd");
    }

    #[test]
    fn errors_carry_positions() {
        match parse_class("h + x") {
            Err(Error::Parse { pos, .. }) => assert_eq!(pos, 4),
            other => panic!("{other:?}"),
        }
        assert!(matches!(parse_class("(h"), Err(Error::Parse { .. })));
        assert!(matches!(parse_class("h^"), Err(Error::Parse { .. })));
        assert!(matches!(parse_class("1/0"), Err(Error::Parse { .. })));
        assert!(matches!(parse_class(""), Err(Error::Parse { .. })));
        assert!(matches!(parse_class("h )"), Err(Error::Parse { .. })));
    }

    proptest! {
        #[test]
        fn display_parses_back(v in prop::collection::vec(-9i64..10, 12)) {
            let c = crate::chow::ChowClass::from_coords(std::array::from_fn(|k| rat(v[k])));
            prop_assert_eq!(parse_class(&c.to_string()).unwrap(), c.clone());
        }
    }
}
