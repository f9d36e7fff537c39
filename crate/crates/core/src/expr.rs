//! Text form of elements.
//!
//! ```text
//! element := term (('+' | '-') term)*
//! term    := [coeff '*'] atom | coeff
//! coeff   := int ['/' posint]
//! atom    := 'L[' int ']' | 'I[' int ']' | 'C_L' | 'C_LI' | 'C_I'
//! ```
//!
//! Whitespace is ignored between tokens. A bare coefficient term has no basis
//! symbol, so only `0` is accepted there. Printing is the `Display` impl of
//! [`Element`](crate::algebra::Element).

use std::fmt;

use num_bigint::BigInt;
use num_traits::Zero;
use thiserror::Error;

use crate::algebra::Basis;
use crate::{Coefficient, Element};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub struct ParseError {
    /// Byte offset into the source text.
    pub offset: usize,
    pub expected: Vec<&'static str>,
    pub message: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "at byte {}: {}", self.offset, self.message)?;
        if !self.expected.is_empty() {
            write!(f, " (expected one of: {})", self.expected.join(", "))?;
        }
        Ok(())
    }
}

struct Parser<'a> {
    src: &'a str,
    pos: usize,
}

impl<'a> Parser<'a> {
    fn skip_ws(&mut self) {
        while let Some(c) = self.src[self.pos..].chars().next() {
            if !c.is_whitespace() {
                break;
            }
            self.pos += c.len_utf8();
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.as_bytes().get(self.pos).copied()
    }

    fn error(
        &self,
        offset: usize,
        expected: &[&'static str],
        message: impl Into<String>,
    ) -> ParseError {
        ParseError {
            offset,
            expected: expected.to_vec(),
            message: message.into(),
        }
    }

    fn expect(&mut self, c: u8, name: &'static str) -> Result<(), ParseError> {
        match self.peek() {
            Some(got) if got == c => {
                self.pos += 1;
                Ok(())
            }
            _ => Err(self.error(self.pos, &[name], "unexpected input")),
        }
    }

    fn minus_then_digit(&self) -> bool {
        self.src[self.pos + 1..]
            .trim_start()
            .as_bytes()
            .first()
            .is_some_and(u8::is_ascii_digit)
    }

    fn digits(&mut self) -> Option<BigInt> {
        let bytes = self.src.as_bytes();
        let start = self.pos;
        while self.pos < bytes.len() && bytes[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        (self.pos > start).then(|| self.src[start..self.pos].parse().expect("ascii digits"))
    }

    fn int(&mut self) -> Result<BigInt, ParseError> {
        let negative = if self.peek() == Some(b'-') {
            self.pos += 1;
            self.skip_ws();
            true
        } else {
            false
        };
        let at = self.pos;
        let v = self
            .digits()
            .ok_or_else(|| self.error(at, &["integer"], "expected digits"))?;
        Ok(if negative { -v } else { v })
    }

    fn index(&mut self) -> Result<i64, ParseError> {
        self.peek();
        let at = self.pos;
        let v = self.int()?;
        i64::try_from(v).map_err(|_| self.error(at, &["integer"], "index out of range"))
    }

    fn coeff(&mut self) -> Result<Coefficient, ParseError> {
        let numer = self.int()?;
        if self.peek() != Some(b'/') {
            return Ok(Coefficient::from_integer(numer));
        }
        self.pos += 1;
        self.skip_ws();
        let at = self.pos;
        let denom = self
            .digits()
            .ok_or_else(|| self.error(at, &["positive integer"], "expected denominator"))?;
        if denom.is_zero() {
            return Err(self.error(at, &["positive integer"], "zero denominator"));
        }
        Ok(Coefficient::new(numer, denom))
    }

    fn atom(&mut self) -> Result<Basis, ParseError> {
        const ATOMS: &[&str] = &["L[", "I[", "C_L", "C_LI", "C_I"];
        self.skip_ws();
        let rest = &self.src[self.pos..];
        let at = self.pos;
        if rest.starts_with("C_LI") {
            self.pos += 4;
            return Ok(Basis::CLI);
        }
        if rest.starts_with("C_L") {
            self.pos += 3;
            return Ok(Basis::CL);
        }
        if rest.starts_with("C_I") {
            self.pos += 3;
            return Ok(Basis::CI);
        }
        let ctor: fn(i64) -> Basis = match rest.as_bytes().first() {
            Some(b'L') => Basis::L,
            Some(b'I') => Basis::I,
            _ => return Err(self.error(at, ATOMS, "expected basis symbol")),
        };
        self.pos += 1;
        self.expect(b'[', "[")?;
        let n = self.index()?;
        self.expect(b']', "]")?;
        Ok(ctor(n))
    }

    fn term(&mut self) -> Result<(Coefficient, Option<Basis>), ParseError> {
        match self.peek() {
            Some(b'L' | b'I' | b'C') => {
                Ok((Coefficient::from_integer(1.into()), Some(self.atom()?)))
            }
            Some(b'-') if !self.minus_then_digit() => {
                self.pos += 1;
                Ok((Coefficient::from_integer((-1).into()), Some(self.atom()?)))
            }
            Some(b'-' | b'0'..=b'9') => {
                let at = self.pos;
                let c = self.coeff()?;
                if self.peek() == Some(b'*') {
                    self.pos += 1;
                    Ok((c, Some(self.atom()?)))
                } else if c.is_zero() {
                    Ok((c, None))
                } else {
                    Err(self.error(at, &["*"], "nonzero coefficient without a basis symbol"))
                }
            }
            _ => Err(self.error(
                self.pos,
                &["coefficient", "L[", "I[", "C_L", "C_LI", "C_I"],
                "expected term",
            )),
        }
    }

    fn element(&mut self) -> Result<Element, ParseError> {
        let mut out = Element::zero();
        let mut negate = false;
        loop {
            let (c, atom) = self.term()?;
            let c = if negate { -c } else { c };
            if let Some(b) = atom {
                out.add_term(b, c);
            }
            match self.peek() {
                None => return Ok(out),
                Some(b'+') => negate = false,
                Some(b'-') => negate = true,
                Some(_) => {
                    return Err(self.error(
                        self.pos,
                        &["+", "-", "end of input"],
                        "unexpected input",
                    ))
                }
            }
            self.pos += 1;
        }
    }
}

/// Parses an element expression into canonical form.
pub fn parse_element(text: &str) -> Result<Element, ParseError> {
    Parser { src: text, pos: 0 }.element()
}

/// Parses a single basis symbol such as `L[-2]` or `C_LI`.
pub fn parse_basis(text: &str) -> Result<Basis, ParseError> {
    let mut p = Parser { src: text, pos: 0 };
    let b = p.atom()?;
    if p.peek().is_some() {
        return Err(p.error(
            p.pos,
            &["end of input"],
            "trailing input after basis symbol",
        ));
    }
    Ok(b)
}

/// Parses a coefficient such as `-3/4`.
pub fn parse_coefficient(text: &str) -> Result<Coefficient, ParseError> {
    let mut p = Parser { src: text, pos: 0 };
    let c = p.coeff()?;
    if p.peek().is_some() {
        return Err(p.error(p.pos, &["end of input"], "trailing input after coefficient"));
    }
    Ok(c)
}
