//! Recursive-descent parser for polynomial expressions and matrix literals.
//!
//! Accepted tokens: signed integer literals (with optional `/q` rational
//! part), variable identifiers, `+ - * ^`, parentheses, and for matrices
//! `[[...],[...]]` with comma-separated entries.  Errors carry line/column.

use crate::error::{Error, Result};
use crate::field::FieldElement;
use crate::poly::{Polynomial, RingRc};

pub struct Cursor<'a> {
    src: &'a str,
    bytes: &'a [u8],
    pos: usize,
    line: usize,
    col: usize,
}

impl<'a> Cursor<'a> {
    pub fn new(src: &'a str, line: usize, col: usize) -> Self {
        Cursor { src, bytes: src.as_bytes(), pos: 0, line, col }
    }

    fn peek(&self) -> Option<u8> {
        self.bytes.get(self.pos).copied()
    }

    fn bump(&mut self) -> Option<u8> {
        let b = self.peek()?;
        self.pos += 1;
        if b == b'\n' {
            self.line += 1;
            self.col = 1;
        } else {
            self.col += 1;
        }
        Some(b)
    }

    pub fn skip_ws(&mut self) {
        while matches!(self.peek(), Some(b' ') | Some(b'\t') | Some(b'\n') | Some(b'\r')) {
            self.bump();
        }
    }

    pub fn at_end(&mut self) -> bool {
        self.skip_ws();
        self.peek().is_none()
    }

    fn err(&self, msg: impl Into<String>) -> Error {
        Error::parse_at(self.line, self.col, msg)
    }

    fn expect(&mut self, b: u8) -> Result<()> {
        self.skip_ws();
        if self.peek() == Some(b) {
            self.bump();
            Ok(())
        } else {
            Err(self.err(format!(
                "expected '{}', found {}",
                b as char,
                self.describe_here()
            )))
        }
    }

    fn describe_here(&self) -> String {
        match self.peek() {
            None => "end of input".to_string(),
            Some(b) => format!("'{}'", b as char),
        }
    }

    fn eat(&mut self, b: u8) -> bool {
        self.skip_ws();
        if self.peek() == Some(b) {
            self.bump();
            true
        } else {
            false
        }
    }

    fn uint(&mut self) -> Result<i64> {
        self.skip_ws();
        let start = self.pos;
        while matches!(self.peek(), Some(b'0'..=b'9')) {
            self.bump();
        }
        if start == self.pos {
            return Err(self.err(format!("expected a number, found {}", self.describe_here())));
        }
        self.src[start..self.pos]
            .parse::<i64>()
            .map_err(|_| self.err("integer literal out of range"))
    }

    fn ident(&mut self) -> Result<String> {
        self.skip_ws();
        let start = self.pos;
        while matches!(self.peek(), Some(b'a'..=b'z') | Some(b'A'..=b'Z') | Some(b'_'))
            || (self.pos > start && matches!(self.peek(), Some(b'0'..=b'9')))
        {
            self.bump();
        }
        if start == self.pos {
            return Err(self.err(format!("expected an identifier, found {}", self.describe_here())));
        }
        Ok(self.src[start..self.pos].to_string())
    }

    // expr := ['-'] term (('+'|'-') term)*
    fn expr(&mut self, ring: &RingRc) -> Result<Polynomial> {
        let mut acc = if self.eat(b'-') {
            self.term(ring)?.neg()
        } else {
            self.term(ring)?
        };
        loop {
            if self.eat(b'+') {
                acc = acc.add(&self.term(ring)?)?;
            } else if self.eat(b'-') {
                acc = acc.sub(&self.term(ring)?)?;
            } else {
                return Ok(acc);
            }
        }
    }

    // term := factor ('*' factor)*
    fn term(&mut self, ring: &RingRc) -> Result<Polynomial> {
        let mut acc = self.factor(ring)?;
        while self.eat(b'*') {
            acc = acc.mul(&self.factor(ring)?)?;
        }
        Ok(acc)
    }

    // factor := atom ('^' uint)?
    fn factor(&mut self, ring: &RingRc) -> Result<Polynomial> {
        let a = self.atom(ring)?;
        if self.eat(b'^') {
            let e = self.uint()?;
            if e < 0 || e > u16::MAX as i64 {
                return Err(self.err("exponent out of range"));
            }
            a.pow(e as u32)
        } else {
            Ok(a)
        }
    }

    fn atom(&mut self, ring: &RingRc) -> Result<Polynomial> {
        self.skip_ws();
        match self.peek() {
            Some(b'(') => {
                self.bump();
                let inner = self.expr(ring)?;
                self.expect(b')')?;
                Ok(inner)
            }
            Some(b'0'..=b'9') => {
                let n = self.uint()?;
                let c = if self.eat(b'/') {
                    let (line, col) = (self.line, self.col);
                    let d = self.uint()?;
                    ring.field
                        .from_fraction(n, d)
                        .map_err(|e| Error::parse_at(line, col, e.to_string()))?
                } else {
                    ring.field.from_i64(n)
                };
                Ok(Polynomial::constant(ring, c))
            }
            Some(b'a'..=b'z') | Some(b'A'..=b'Z') | Some(b'_') => {
                let (line, col) = (self.line, self.col);
                let name = self.ident()?;
                match ring.var_index(&name) {
                    Some(i) => Ok(Polynomial::var(ring, i)),
                    None => Err(Error::parse_at(
                        line,
                        col,
                        format!("unknown variable '{name}'"),
                    )),
                }
            }
            _ => Err(self.err(format!(
                "expected a polynomial atom, found {}",
                self.describe_here()
            ))),
        }
    }

    /// `[[e, e, ...], [e, ...], ...]`; all rows must have equal length.
    pub fn matrix(&mut self, ring: &RingRc) -> Result<Vec<Vec<Polynomial>>> {
        self.expect(b'[')?;
        let mut rows = Vec::new();
        loop {
            self.expect(b'[')?;
            let mut row = Vec::new();
            if !self.eat(b']') {
                loop {
                    row.push(self.expr(ring)?);
                    if self.eat(b']') {
                        break;
                    }
                    self.expect(b',')?;
                }
            }
            rows.push(row);
            if self.eat(b']') {
                break;
            }
            self.expect(b',')?;
        }
        let width = rows.first().map(|r| r.len()).unwrap_or(0);
        if rows.iter().any(|r| r.len() != width) {
            return Err(self.err("matrix rows have unequal lengths"));
        }
        Ok(rows)
    }

    /// `(c, c, ...)` of field scalars.
    pub fn scalar_tuple(&mut self, ring: &RingRc) -> Result<Vec<FieldElement>> {
        self.expect(b'(')?;
        let mut out = Vec::new();
        if !self.eat(b')') {
            loop {
                let p = self.expr(ring)?;
                if !p.is_constant() {
                    return Err(self.err("expected a scalar, found a non-constant polynomial"));
                }
                let c = p
                    .terms()
                    .first()
                    .map(|(_, c)| c.clone())
                    .unwrap_or_else(|| ring.field.zero());
                out.push(c);
                if self.eat(b')') {
                    break;
                }
                self.expect(b',')?;
            }
        }
        Ok(out)
    }

    fn finish(&mut self) -> Result<()> {
        if self.at_end() {
            Ok(())
        } else {
            Err(self.err(format!("unexpected trailing input: {}", self.describe_here())))
        }
    }
}

pub fn parse_poly(src: &str, ring: &RingRc, line: usize, col: usize) -> Result<Polynomial> {
    let mut c = Cursor::new(src, line, col);
    let p = c.expr(ring)?;
    c.finish()?;
    Ok(p)
}

pub fn parse_matrix(
    src: &str,
    ring: &RingRc,
    line: usize,
    col: usize,
) -> Result<Vec<Vec<Polynomial>>> {
    let mut c = Cursor::new(src, line, col);
    let m = c.matrix(ring)?;
    c.finish()?;
    Ok(m)
}

pub fn parse_tuple(
    src: &str,
    ring: &RingRc,
    line: usize,
    col: usize,
) -> Result<Vec<FieldElement>> {
    let mut c = Cursor::new(src, line, col);
    let t = c.scalar_tuple(ring)?;
    c.finish()?;
    Ok(t)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::FieldSpec;
    use crate::poly::PolyRing;

    fn r2() -> RingRc {
        PolyRing::default_grevlex(FieldSpec::Rational, &["x", "y"]).unwrap()
    }

    #[test]
    fn parse_and_print_round_trip() {
        let r = r2();
        for src in ["x^2 + 2*y", "-x + 1", "3*x*y - y^2", "1/2*x - 2/3", "0"] {
            let p = parse_poly(src, &r, 1, 1).unwrap();
            let q = parse_poly(&p.to_string(), &r, 1, 1).unwrap();
            assert_eq!(p, q, "round trip failed for {src}");
        }
    }

    #[test]
    fn parenthesized_expression() {
        let r = r2();
        let p = parse_poly("(x + y)^2 - (x - y)^2", &r, 1, 1).unwrap();
        assert_eq!(p.to_string(), "4*x*y");
    }

    #[test]
    fn error_positions() {
        let r = r2();
        let e = parse_poly("x + z", &r, 3, 1).unwrap_err();
        match e {
            Error::Parse { line, col, msg } => {
                assert_eq!(line, 3);
                assert_eq!(col, 5);
                assert!(msg.contains("unknown variable 'z'"), "{msg}");
            }
            other => panic!("unexpected error {other:?}"),
        }
    }

    #[test]
    fn matrices_and_tuples() {
        let r = r2();
        let m = parse_matrix("[[x, y], [0, -x]]", &r, 1, 1).unwrap();
        assert_eq!(m.len(), 2);
        assert_eq!(m[1][1].to_string(), "-x");
        assert!(parse_matrix("[[x], [y, 0]]", &r, 1, 1).is_err());
        let t = parse_tuple("(1, -2, 3)", &r, 1, 1).unwrap();
        assert_eq!(t.len(), 3);
        assert_eq!(t[1], r.field.from_i64(-2));
    }
}
