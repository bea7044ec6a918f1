//! Parser for products of linear forms such as `xyzt(x + y)(y - z + 2t)`.
//!
//! Grammar (whitespace and `*` between factors are ignored):
//!
//! ```text
//! product := factor+
//! factor  := var | '(' linear ')'
//! linear  := ['+' | '-'] term (('+' | '-') term)*
//! term    := [integer] var
//! var     := 'x' | 'y' | 'z' | 't'
//! ```
//!
//! A bare run of variables outside parentheses (`xyzt`) is four factors.

use num_traits::Zero;

use super::{Arrangement, VARS};
use crate::error::{Error, Result};
use crate::exact::{parse_rational, q, Vec4, Q};

struct Parser<'a> {
    src: &'a str,
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> Parser<'a> {
    fn new(src: &'a str) -> Self {
        Self { src, bytes: src.as_bytes(), pos: 0 }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.bytes.get(self.pos).copied()
    }

    fn syntax(&self, msg: impl Into<String>) -> Error {
        Error::Syntax { pos: self.pos, msg: msg.into() }
    }

    fn var_index(c: u8) -> Option<usize> {
        VARS.iter().position(|&v| v as u8 == c)
    }

    fn product(&mut self) -> Result<Vec<Vec4>> {
        let mut factors = Vec::new();
        loop {
            match self.peek() {
                None => break,
                Some(b'*') => self.pos += 1,
                Some(b'(') => {
                    self.pos += 1;
                    let start = self.pos;
                    let form = self.linear()?;
                    if self.peek() != Some(b')') {
                        return Err(self.syntax("expected `)`"));
                    }
                    if form.iter().all(Q::is_zero) {
                        return Err(Error::NotLinear(self.src[start..self.pos].trim().to_string()));
                    }
                    self.pos += 1;
                    factors.push(form);
                }
                Some(c) if Self::var_index(c).is_some() => {
                    let mut v: Vec4 = std::array::from_fn(|_| Q::zero());
                    v[Self::var_index(c).unwrap()] = q(1);
                    factors.push(v);
                    self.pos += 1;
                }
                Some(b'^') => {
                    return Err(Error::NotLinear(self.src[..=self.pos].trim().to_string()));
                }
                Some(c) => return Err(self.syntax(format!("unexpected `{}`", c as char))),
            }
        }
        Ok(factors)
    }

    fn linear(&mut self) -> Result<Vec4> {
        let start = self.pos;
        let mut form: Vec4 = std::array::from_fn(|_| Q::zero());
        let mut first = true;
        loop {
            let sign = match self.peek() {
                Some(b'+') => {
                    self.pos += 1;
                    1
                }
                Some(b'-') => {
                    self.pos += 1;
                    -1
                }
                Some(b')') if !first => break,
                _ if first => 1,
                Some(c) => return Err(self.syntax(format!("expected `+`, `-` or `)`, found `{}`", c as char))),
                None => return Err(self.syntax("unterminated factor")),
            };
            first = false;
            let coeff = self.integer()?;
            if self.peek() == Some(b'*') {
                self.pos += 1;
            }
            let var = match self.peek() {
                Some(c) if Self::var_index(c).is_some() => {
                    self.pos += 1;
                    Self::var_index(c).unwrap()
                }
                _ if coeff.is_some() => {
                    return Err(Error::NotLinear(self.excerpt(start)));
                }
                Some(c) => return Err(self.syntax(format!("expected a variable, found `{}`", c as char))),
                None => return Err(self.syntax("unterminated factor")),
            };
            // `xy`, `x^2`, `x*y` inside a factor
            match self.bytes.get(self.pos) {
                Some(&c) if Self::var_index(c).is_some() || c == b'^' || c == b'*' => {
                    return Err(Error::NotLinear(self.excerpt(start)));
                }
                _ => {}
            }
            form[var] += coeff.unwrap_or_else(|| q(1)) * q(sign);
        }
        Ok(form)
    }

    fn integer(&mut self) -> Result<Option<Q>> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Ok(None);
        }
        parse_rational(&self.src[start..self.pos])
            .map(Some)
            .ok_or_else(|| self.syntax("bad integer"))
    }

    fn excerpt(&self, start: usize) -> String {
        let end = self.src[start..].find(')').map_or(self.src.len(), |i| start + i);
        self.src[start..end].trim().to_string()
    }
}

/// Splits a product expression into its linear factors, in order.
pub fn parse_product(text: &str) -> Result<Vec<Vec4>> {
    let text = text.replace('\u{2212}', "-");
    let factors = Parser::new(&text).product()?;
    if factors.len() != 8 {
        return Err(Error::FactorCount(factors.len()));
    }
    Ok(factors)
}

pub fn parse_arrangement(label: &str, text: &str, lambda: Q) -> Result<Arrangement> {
    Arrangement::new(label, &parse_product(text)?, lambda)
}

/// Reads the `key = value` arrangement format. Either an `equation` key or
/// eight lines of four integers give the planes.
pub fn parse_arrangement_file(text: &str) -> Result<Arrangement> {
    let bad = |m: String| Error::ArrangementFile(m);
    let mut label = None;
    let mut lambda = None;
    let mut b2 = None;
    let mut equation = None;
    let mut rows: Vec<Vec4> = Vec::new();
    for (no, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        if let Some((key, value)) = line.split_once('=') {
            let value = value.trim();
            match key.trim() {
                "label" => label = Some(value.to_string()),
                "lambda" => {
                    lambda = Some(parse_rational(value).ok_or_else(|| bad(format!("line {}: bad lambda `{value}`", no + 1)))?)
                }
                "b2" => b2 = Some(value.parse().map_err(|_| bad(format!("line {}: bad b2 `{value}`", no + 1)))?),
                "equation" => equation = Some(value.to_string()),
                k => return Err(bad(format!("line {}: unknown key `{k}`", no + 1))),
            }
        } else {
            let nums: Vec<Q> = line
                .split_whitespace()
                .map(|s| s.parse::<i64>().map(q))
                .collect::<std::result::Result<_, _>>()
                .map_err(|_| bad(format!("line {}: expected four integers", no + 1)))?;
            let row: Vec4 = nums
                .try_into()
                .map_err(|_| bad(format!("line {}: expected four integers", no + 1)))?;
            rows.push(row);
        }
    }
    let label = label.ok_or_else(|| bad("missing `label`".into()))?;
    let lambda = lambda.ok_or_else(|| bad("missing `lambda`".into()))?;
    let mut arr = match (equation, rows.is_empty()) {
        (Some(eq), true) => parse_arrangement(&label, &eq, lambda)?,
        (None, false) => Arrangement::new(label, &rows, lambda)?,
        (Some(_), false) => return Err(bad("both `equation` and a matrix given".into())),
        (None, true) => return Err(bad("no planes given".into())),
    };
    arr.b2 = b2;
    Ok(arr)
}
