//! Recursive-descent parser for germs such as `y^3 * (x^2 - y)`.
//!
//! ```text
//! germ   := factor ('*' factor)*
//! factor := term ('^' int)?
//! term   := 'x' | 'y' | '(' mono '-' mono ')'
//! mono   := ('x' | 'y') ('^' int)?
//! ```
//! The binomial must read `x^a - y^b`; `(x - y)` is the diagonal. A lone
//! binomial may drop its parentheses.

use super::{Branch, GermIntegral};
use crate::error::{Error, Result};

struct Cursor<'a> {
    src: &'a [u8],
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn err<T>(&self, msg: impl Into<String>) -> Result<T> {
        Err(Error::Parse { pos: self.pos, msg: msg.into() })
    }

    fn expect(&mut self, c: u8) -> Result<()> {
        if self.peek() == Some(c) {
            self.pos += 1;
            Ok(())
        } else {
            self.err(format!("expected '{}'", c as char))
        }
    }

    fn int(&mut self) -> Result<u32> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return self.err("expected an exponent");
        }
        let s = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii digits");
        match s.parse::<u32>() {
            Ok(0) => Err(Error::Parse { pos: start, msg: "exponent must be positive".into() }),
            Ok(v) => Ok(v),
            Err(_) => Err(Error::Parse { pos: start, msg: "exponent out of range".into() }),
        }
    }

    fn opt_exp(&mut self) -> Result<u32> {
        if self.peek() == Some(b'^') {
            self.pos += 1;
            self.int()
        } else {
            Ok(1)
        }
    }

    fn var(&mut self, want: u8) -> Result<u32> {
        self.expect(want)?;
        self.opt_exp()
    }

    fn term(&mut self) -> Result<Branch> {
        match self.peek() {
            Some(b'x') => {
                self.pos += 1;
                Ok(Branch::X)
            }
            Some(b'y') => {
                self.pos += 1;
                Ok(Branch::Y)
            }
            Some(b'(') => {
                self.pos += 1;
                let at = self.pos;
                let a = self.var(b'x')?;
                self.expect(b'-')?;
                let b = self.var(b'y')?;
                self.expect(b')')?;
                Branch::binom(a, b).map_err(|_| Error::Parse { pos: at, msg: format!("x^{a} - y^{b} is reducible") })
            }
            Some(c) => self.err(format!("unexpected '{}'", c as char)),
            None => self.err("unexpected end of input"),
        }
    }
}

/// Byte offset of a `-` outside parentheses, if any.
fn bare_minus(s: &str) -> Option<usize> {
    let mut depth = 0i32;
    for (i, ch) in s.bytes().enumerate() {
        match ch {
            b'(' => depth += 1,
            b')' => depth -= 1,
            b'-' if depth == 0 => return Some(i),
            _ => {}
        }
    }
    None
}

pub fn parse_germ(s: &str) -> Result<GermIntegral> {
    if let Some(at) = bare_minus(s) {
        if s.contains('*') || s.contains('(') {
            return Err(Error::Parse { pos: at, msg: "a binomial inside a product needs parentheses".into() });
        }
        return parse_product(&format!("({s})")).map_err(|e| match e {
            Error::Parse { pos, msg } => Error::Parse { pos: pos.saturating_sub(1), msg },
            e => e,
        });
    }
    parse_product(s)
}

fn parse_product(s: &str) -> Result<GermIntegral> {
    let mut c = Cursor { src: s.as_bytes(), pos: 0 };
    let mut factors: Vec<(Branch, u32)> = Vec::new();
    loop {
        let at = {
            c.skip_ws();
            c.pos
        };
        let b = c.term()?;
        let k = c.opt_exp()?;
        if factors.iter().any(|(d, _)| *d == b) {
            return Err(Error::Parse { pos: at, msg: format!("branch {b} repeated") });
        }
        factors.push((b, k));
        match c.peek() {
            Some(b'*') => c.pos += 1,
            None => break,
            Some(ch) => return c.err(format!("unexpected '{}'", ch as char)),
        }
    }
    Ok(GermIntegral { factors })
}
