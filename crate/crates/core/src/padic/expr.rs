//! Tiny expression language for layer arguments: integers, `p`, `pi`,
//! `+ - * ^` and parentheses, evaluated in a given field.

use crate::error::{Error, Result};
use crate::padic::{LocalField, LocalFieldElement};

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
    offset: usize,
    field: &'a LocalField,
}

pub(crate) fn eval(field: &LocalField, s: &str, offset: usize) -> Result<LocalFieldElement> {
    let mut parser = Parser {
        src: s.as_bytes(),
        pos: 0,
        offset,
        field,
    };
    let v = parser.expr()?;
    parser.skip_ws();
    if parser.pos != parser.src.len() {
        return Err(parser.err("unexpected trailing input"));
    }
    Ok(v)
}

impl Parser<'_> {
    fn err(&self, msg: &str) -> Error {
        Error::parse(self.offset + self.pos, msg)
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

    fn expr(&mut self) -> Result<LocalFieldElement> {
        let mut acc = self.term()?;
        while let Some(c) = self.peek() {
            match c {
                b'+' => {
                    self.pos += 1;
                    acc = acc.add(&self.term()?);
                }
                b'-' => {
                    self.pos += 1;
                    acc = acc.sub(&self.term()?);
                }
                _ => break,
            }
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<LocalFieldElement> {
        let mut acc = self.unary()?;
        while self.peek() == Some(b'*') {
            self.pos += 1;
            acc = acc.mul(&self.unary()?);
        }
        Ok(acc)
    }

    fn unary(&mut self) -> Result<LocalFieldElement> {
        if self.peek() == Some(b'-') {
            self.pos += 1;
            return Ok(self.unary()?.neg());
        }
        let base = self.atom()?;
        if self.peek() == Some(b'^') {
            self.pos += 1;
            self.skip_ws();
            let start = self.pos;
            let k = self.integer()?;
            if !(0..=64).contains(&k) {
                self.pos = start;
                return Err(self.err("exponent must be in 0..=64"));
            }
            return base.pow(k);
        }
        Ok(base)
    }

    fn integer(&mut self) -> Result<i64> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.err("expected an integer"));
        }
        std::str::from_utf8(&self.src[start..self.pos])
            .unwrap()
            .parse()
            .map_err(|_| {
                self.pos = start;
                self.err("integer out of range")
            })
    }

    fn atom(&mut self) -> Result<LocalFieldElement> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let v = self.expr()?;
                if self.peek() != Some(b')') {
                    return Err(self.err("expected `)`"));
                }
                self.pos += 1;
                Ok(v)
            }
            Some(c) if c.is_ascii_digit() => {
                let n = self.integer()?;
                Ok(self.field.from_int(n))
            }
            Some(b'p') => {
                if self.src[self.pos..].starts_with(b"pi") {
                    self.pos += 2;
                    Ok(self.field.uniformizer())
                } else {
                    self.pos += 1;
                    Ok(self.field.from_int(self.field.p() as i64))
                }
            }
            _ => Err(self.err("expected a number, `p`, `pi` or `(`")),
        }
    }
}
