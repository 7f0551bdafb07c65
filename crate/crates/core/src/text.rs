//! Text formats: p-adic literals, polynomials, disks and regions.
//!
//! Expressions use `+ - * / ^` and parentheses over integers, the prime
//! `p`, little-endian digit strings `d0.d1.d2` and (in polynomials) `z`.
//! So `-7/36+1`, `1.2.0*p^-1`, `1/3*z^2 - 1/3*z` and `(z^2 - z)/p` all
//! parse. Division is by constants only; `z` takes non-negative powers.

use num_bigint::BigInt;

use crate::disk::{Disk, Region};
use crate::error::{Error, Result};
use crate::padic::{PadicNumber, Prime, GUARD_DIGITS};
use crate::poly::Polynomial;
use crate::radius::Radius;

#[derive(Clone, Debug, PartialEq)]
enum Token {
    Int(BigInt),
    Digits(Vec<u64>),
    P,
    Z,
    Op(char),
}

fn tokenize(s: &str) -> Result<Vec<Token>> {
    let mut out = Vec::new();
    let chars: Vec<char> = s.chars().collect();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() {
            let start = i;
            while i < chars.len() && (chars[i].is_ascii_digit() || chars[i] == '.') {
                i += 1;
            }
            let lit: String = chars[start..i].iter().collect();
            if lit.contains('.') {
                let digits = lit
                    .split('.')
                    .map(|d| {
                        d.parse::<u64>()
                            .map_err(|_| Error::Parse(format!("bad digit '{d}' in '{lit}'")))
                    })
                    .collect::<Result<Vec<u64>>>()?;
                out.push(Token::Digits(digits));
            } else {
                out.push(Token::Int(lit.parse().expect("ascii digits")));
            }
        } else {
            out.push(match c {
                'p' => Token::P,
                'z' => Token::Z,
                '+' | '-' | '*' | '/' | '^' | '(' | ')' => Token::Op(c),
                _ => return Err(Error::Parse(format!("unexpected '{c}' in '{s}'"))),
            });
            i += 1;
        }
    }
    Ok(out)
}

/// Coefficient lists, lowest degree first.
type Poly = Vec<PadicNumber>;

struct Parser<'a> {
    tokens: Vec<Token>,
    pos: usize,
    prime: Prime,
    precision: u32,
    allow_z: bool,
    src: &'a str,
}

impl Parser<'_> {
    fn err(&self, msg: &str) -> Error {
        Error::Parse(format!("{msg} in '{}'", self.src))
    }

    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.pos)
    }

    fn eat(&mut self, op: char) -> bool {
        if self.peek() == Some(&Token::Op(op)) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn constant(&self, x: PadicNumber) -> Poly {
        vec![x]
    }

    fn expr(&mut self) -> Result<Poly> {
        let mut acc = self.term()?;
        loop {
            if self.eat('+') {
                acc = add(&acc, &self.term()?, self.prime);
            } else if self.eat('-') {
                let t = self.term()?;
                acc = add(&acc, &neg(&t), self.prime);
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<Poly> {
        let mut acc = self.unary()?;
        loop {
            if self.eat('*') {
                acc = mul(&acc, &self.unary()?, self.prime);
            } else if self.eat('/') {
                let d = self.unary()?;
                if d.len() != 1 {
                    return Err(self.err("division by a non-constant"));
                }
                acc = acc
                    .iter()
                    .map(|c| c.checked_div(&d[0]))
                    .collect::<Result<_>>()?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn unary(&mut self) -> Result<Poly> {
        if self.eat('-') {
            return Ok(neg(&self.unary()?));
        }
        if self.eat('+') {
            return self.unary();
        }
        self.power()
    }

    fn power(&mut self) -> Result<Poly> {
        let base = self.atom()?;
        if !self.eat('^') {
            return Ok(base);
        }
        let k = self.exponent()?;
        if k >= 0 {
            let mut out = self.constant(PadicNumber::one(self.prime, self.precision));
            for _ in 0..k {
                out = mul(&out, &base, self.prime);
            }
            return Ok(out);
        }
        if base.len() != 1 {
            return Err(self.err("negative power of a non-constant"));
        }
        let inv = base[0].inverse()?;
        Ok(self.constant(inv.pow((-k) as u32)))
    }

    fn exponent(&mut self) -> Result<i64> {
        let paren = self.eat('(');
        let negative = self.eat('-');
        let k = match self.tokens.get(self.pos) {
            Some(Token::Int(n)) => i64::try_from(n).map_err(|_| self.err("exponent too large"))?,
            _ => return Err(self.err("expected an integer exponent")),
        };
        self.pos += 1;
        if paren && !self.eat(')') {
            return Err(self.err("unclosed exponent"));
        }
        Ok(if negative { -k } else { k })
    }

    fn atom(&mut self) -> Result<Poly> {
        let tok = self
            .peek()
            .cloned()
            .ok_or_else(|| self.err("unexpected end"))?;
        self.pos += 1;
        match tok {
            Token::Op('(') => {
                let e = self.expr()?;
                if !self.eat(')') {
                    return Err(self.err("unbalanced parentheses"));
                }
                Ok(e)
            }
            Token::Int(n) => {
                Ok(self.constant(PadicNumber::from_bigint(&n, self.prime, self.precision)))
            }
            Token::Digits(d) => Ok(self.constant(PadicNumber::from_digits(&d, 0, self.prime)?)),
            Token::P => Ok(self.constant(PadicNumber::from_i64(
                self.prime.get() as i64,
                self.prime,
                self.precision,
            ))),
            Token::Z if self.allow_z => Ok(vec![
                PadicNumber::zero(self.prime),
                PadicNumber::one(self.prime, self.precision),
            ]),
            Token::Z => Err(self.err("'z' is not allowed in a number")),
            Token::Op(c) => Err(self.err(&format!("unexpected '{c}'"))),
        }
    }
}

fn add(a: &Poly, b: &Poly, p: Prime) -> Poly {
    (0..a.len().max(b.len()))
        .map(|k| match (a.get(k), b.get(k)) {
            (Some(x), Some(y)) => x.add(y),
            (Some(x), None) | (None, Some(x)) => x.clone(),
            (None, None) => PadicNumber::zero(p),
        })
        .collect()
}

fn neg(a: &Poly) -> Poly {
    a.iter().map(PadicNumber::neg).collect()
}

fn mul(a: &Poly, b: &Poly, p: Prime) -> Poly {
    let mut out = vec![PadicNumber::zero(p); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_exact_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] = out[i + j].add(&x.mul(y));
        }
    }
    out
}

fn parse_expr(s: &str, prime: Prime, precision: u32, allow_z: bool) -> Result<Poly> {
    let mut parser = Parser {
        tokens: tokenize(s)?,
        pos: 0,
        prime,
        precision,
        allow_z,
        src: s,
    };
    if parser.tokens.is_empty() {
        return Err(Error::Parse("empty expression".into()));
    }
    let out = parser.expr()?;
    if parser.pos != parser.tokens.len() {
        return Err(parser.err("trailing input"));
    }
    Ok(out)
}

/// Parses a p-adic literal with `precision` known digits for rational parts.
pub fn parse_number(s: &str, prime: Prime, precision: u32) -> Result<PadicNumber> {
    Ok(parse_expr(s, prime, precision, false)?.swap_remove(0))
}

/// Parses a polynomial in `z`; rational coefficients get guard digits.
pub fn parse_polynomial(s: &str, prime: Prime, precision: u32) -> Result<Polynomial<PadicNumber>> {
    Polynomial::from_padic(parse_expr(s, prime, precision + GUARD_DIGITS, true)?)
}

/// `p^q` with rational `q`, or `0`.
pub fn parse_radius(s: &str) -> Result<Radius> {
    s.trim().parse()
}

/// `(center, p^q)`.
pub fn parse_disk(s: &str, prime: Prime, precision: u32) -> Result<Disk> {
    let inner = s
        .trim()
        .strip_prefix('(')
        .and_then(|r| r.strip_suffix(')'))
        .ok_or_else(|| Error::Parse(format!("disk '{s}' must look like (center, p^q)")))?;
    let (c, r) = inner
        .rsplit_once(',')
        .ok_or_else(|| Error::Parse(format!("disk '{s}' needs a radius")))?;
    Ok(Disk::new(
        parse_number(c, prime, precision)?,
        parse_radius(r)?,
    ))
}

/// `disks: [(center, p^q), ...]` or `sphere: p^q`.
pub fn parse_region(s: &str, prime: Prime, precision: u32) -> Result<Region> {
    let s = s.trim();
    if let Some(r) = s.strip_prefix("sphere:") {
        return Region::sphere(parse_radius(r)?);
    }
    let list = s
        .strip_prefix("disks:")
        .map(str::trim)
        .and_then(|r| r.strip_prefix('['))
        .and_then(|r| r.strip_suffix(']'))
        .ok_or_else(|| {
            Error::Parse(format!(
                "region '{s}' must start with 'disks: [' or 'sphere:'"
            ))
        })?;
    let mut disks = Vec::new();
    let mut rest = list.trim();
    while !rest.is_empty() {
        let close =
            matching_paren(rest).ok_or_else(|| Error::Parse(format!("unclosed disk in '{s}'")))?;
        disks.push(parse_disk(&rest[..=close], prime, precision)?);
        rest = rest[close + 1..]
            .trim_start()
            .trim_start_matches(',')
            .trim_start();
    }
    Region::union_of_disks(disks)
}

fn matching_paren(s: &str) -> Option<usize> {
    let mut depth = 0;
    for (i, c) in s.char_indices() {
        match c {
            '(' => depth += 1,
            ')' => {
                depth -= 1;
                if depth == 0 {
                    return Some(i);
                }
            }
            _ => {}
        }
    }
    None
}
