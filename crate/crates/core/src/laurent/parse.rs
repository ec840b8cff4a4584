//! Recursive-descent parser for the polynomial text format.
//!
//! ```text
//! expr   := ['+'|'-'] term (('+'|'-') term)*
//! term   := factor ('*'? factor)*
//! factor := number | var ('^' int)? | '(' expr ')' ('^' int)?
//! number := decimal ['i'] | 'i'
//! var    := 'x' | 'y' | 'z' | 'w' | 'x' digit+
//! ```
//!
//! Letters map to axes in the order x, y, z, w. In dimension one any single
//! letter names the only axis, so `z^2 - 3z + 2` is accepted with `n = 1`.

use num_complex::Complex64;
use thiserror::Error;

use super::{ExponentVector, LaurentPolynomial};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ParseError {
    #[error("syntax error at position {position}: {message}")]
    Syntax { position: usize, message: String },
    #[error("unknown variable '{name}' at position {position}")]
    UnknownVariable { name: String, position: usize },
    #[error("variable '{name}' at position {position} does not exist in dimension {dimension}")]
    DimensionMismatch {
        name: String,
        position: usize,
        dimension: usize,
    },
}

/// Parses `text` as a Laurent polynomial in `dimension` variables.
pub fn parse(text: &str, dimension: usize) -> Result<LaurentPolynomial, ParseError> {
    let mut parser = Parser {
        chars: text.chars().collect(),
        pos: 0,
        dimension,
        letter_seen: None,
    };
    let poly = parser.expr()?;
    parser.skip_ws();
    if parser.pos < parser.chars.len() {
        return Err(parser.error(format!("unexpected '{}'", parser.chars[parser.pos])));
    }
    Ok(poly)
}

struct Parser {
    chars: Vec<char>,
    pos: usize,
    dimension: usize,
    // dimension-one mode: the single letter in use
    letter_seen: Option<char>,
}

impl Parser {
    fn error(&self, message: impl Into<String>) -> ParseError {
        ParseError::Syntax {
            position: self.pos,
            message: message.into(),
        }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.chars.len() && self.chars[self.pos].is_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.chars.get(self.pos).copied()
    }

    fn expr(&mut self) -> Result<LaurentPolynomial, ParseError> {
        let mut acc = LaurentPolynomial::zero(self.dimension);
        let mut negate = match self.peek() {
            Some('-') => {
                self.pos += 1;
                true
            }
            Some('+') => {
                self.pos += 1;
                false
            }
            _ => false,
        };
        loop {
            let t = self.term()?;
            acc = acc.add(&if negate { t.neg() } else { t });
            match self.peek() {
                Some('+') => {
                    self.pos += 1;
                    negate = false;
                }
                Some('-') => {
                    self.pos += 1;
                    negate = true;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<LaurentPolynomial, ParseError> {
        let mut acc = self.factor()?;
        loop {
            match self.peek() {
                Some('*') => {
                    self.pos += 1;
                    acc = acc.mul(&self.factor()?);
                }
                Some(c) if starts_factor(c) => acc = acc.mul(&self.factor()?),
                _ => return Ok(acc),
            }
        }
    }

    fn factor(&mut self) -> Result<LaurentPolynomial, ParseError> {
        match self.peek() {
            None => Err(self.error("unexpected end of input")),
            Some('(') => {
                self.pos += 1;
                let inner = self.expr()?;
                if self.peek() != Some(')') {
                    return Err(self.error("expected ')'"));
                }
                self.pos += 1;
                if self.peek() == Some('^') {
                    self.pos += 1;
                    let at = self.pos;
                    let k = self.int()?;
                    return self.power(&inner, k, at);
                }
                Ok(inner)
            }
            Some(c) if c.is_ascii_digit() || c == '.' => self.number(),
            Some('i') => {
                self.pos += 1;
                Ok(LaurentPolynomial::constant(
                    self.dimension,
                    Complex64::new(0.0, 1.0),
                ))
            }
            Some(c) if c.is_ascii_alphabetic() => self.variable(),
            Some(c) => Err(self.error(format!("unexpected '{c}'"))),
        }
    }

    fn power(
        &self,
        base: &LaurentPolynomial,
        k: i32,
        at: usize,
    ) -> Result<LaurentPolynomial, ParseError> {
        if k >= 0 {
            return Ok(base.pow(k as u32));
        }
        match base.terms().next() {
            Some((e, c)) if base.is_monomial() => {
                let m = k.unsigned_abs();
                let e: Vec<i32> = e.entries().iter().map(|&x| -x * m as i32).collect();
                let c = Complex64::new(1.0, 0.0) / c.powu(m);
                Ok(LaurentPolynomial::monomial(ExponentVector::new(e), c))
            }
            _ => Err(ParseError::Syntax {
                position: at,
                message: "negative power of a non-monomial".into(),
            }),
        }
    }

    fn number(&mut self) -> Result<LaurentPolynomial, ParseError> {
        let start = self.pos;
        while self.pos < self.chars.len()
            && (self.chars[self.pos].is_ascii_digit() || self.chars[self.pos] == '.')
        {
            self.pos += 1;
        }
        // optional exponent part: e.g. 1.5e-3
        if self.pos < self.chars.len() && matches!(self.chars[self.pos], 'e' | 'E') {
            let save = self.pos;
            self.pos += 1;
            if self.pos < self.chars.len() && matches!(self.chars[self.pos], '+' | '-') {
                self.pos += 1;
            }
            if self.pos < self.chars.len() && self.chars[self.pos].is_ascii_digit() {
                while self.pos < self.chars.len() && self.chars[self.pos].is_ascii_digit() {
                    self.pos += 1;
                }
            } else {
                self.pos = save;
            }
        }
        let text: String = self.chars[start..self.pos].iter().collect();
        let value: f64 = text.parse().map_err(|_| ParseError::Syntax {
            position: start,
            message: format!("malformed number '{text}'"),
        })?;
        let c = if self.pos < self.chars.len() && self.chars[self.pos] == 'i' {
            self.pos += 1;
            Complex64::new(0.0, value)
        } else {
            Complex64::new(value, 0.0)
        };
        Ok(LaurentPolynomial::constant(self.dimension, c))
    }

    fn variable(&mut self) -> Result<LaurentPolynomial, ParseError> {
        let start = self.pos;
        let letter = self.chars[self.pos];
        self.pos += 1;
        let axis = if letter == 'x'
            && self.pos < self.chars.len()
            && self.chars[self.pos].is_ascii_digit()
        {
            let dstart = self.pos;
            while self.pos < self.chars.len() && self.chars[self.pos].is_ascii_digit() {
                self.pos += 1;
            }
            let digits: String = self.chars[dstart..self.pos].iter().collect();
            let name = format!("x{digits}");
            let index: usize = digits.parse().unwrap_or(0);
            if index == 0 {
                return Err(ParseError::UnknownVariable {
                    name,
                    position: start,
                });
            }
            if index > self.dimension {
                return Err(ParseError::DimensionMismatch {
                    name,
                    position: start,
                    dimension: self.dimension,
                });
            }
            index - 1
        } else {
            let slot = match letter {
                'x' => 0,
                'y' => 1,
                'z' => 2,
                'w' => 3,
                _ => {
                    return Err(ParseError::UnknownVariable {
                        name: letter.to_string(),
                        position: start,
                    })
                }
            };
            if self.dimension == 1 {
                match self.letter_seen {
                    Some(seen) if seen != letter => {
                        return Err(ParseError::DimensionMismatch {
                            name: letter.to_string(),
                            position: start,
                            dimension: 1,
                        })
                    }
                    _ => self.letter_seen = Some(letter),
                }
                0
            } else if slot >= self.dimension {
                return Err(ParseError::DimensionMismatch {
                    name: letter.to_string(),
                    position: start,
                    dimension: self.dimension,
                });
            } else {
                slot
            }
        };
        let mut power = 1;
        if self.peek() == Some('^') {
            self.pos += 1;
            power = self.int()?;
        }
        let mut e = vec![0; self.dimension];
        e[axis] = power;
        Ok(LaurentPolynomial::monomial(
            ExponentVector::new(e),
            Complex64::new(1.0, 0.0),
        ))
    }

    fn int(&mut self) -> Result<i32, ParseError> {
        let paren = self.peek() == Some('(');
        if paren {
            self.pos += 1;
        }
        let mut sign = 1;
        match self.peek() {
            Some('-') => {
                sign = -1;
                self.pos += 1;
            }
            Some('+') => self.pos += 1,
            _ => {}
        }
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.chars.len() && self.chars[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.error("expected integer exponent"));
        }
        let digits: String = self.chars[start..self.pos].iter().collect();
        let value: i32 = digits.parse().map_err(|_| ParseError::Syntax {
            position: start,
            message: "exponent out of range".into(),
        })?;
        if paren {
            if self.peek() != Some(')') {
                return Err(self.error("expected ')'"));
            }
            self.pos += 1;
        }
        Ok(sign * value)
    }
}

fn starts_factor(c: char) -> bool {
    c == '(' || c == '.' || c.is_ascii_alphanumeric()
}
