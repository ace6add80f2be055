//! Text front end for polynomials.
//!
//! ```text
//! expr   := ['+'|'-'] term (('+'|'-') term)*
//! term   := factor (['*'] factor)*
//! factor := number | 'x'<k> | '[' expr ',' expr ']' | '(' expr ')'
//!         | 'St'<k> | 'comm' | 'twocomm(' number ')'
//! number := digits ['/' digits]
//! ```
//! Products are expanded into words; the result must be multilinear.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::scalar::{FieldSpec, Scalar};

use super::MultilinearPoly;

/// A word in the variables, zero-based.
pub type Word = Vec<usize>;

/// A general noncommutative polynomial with rational coefficients.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct WordPoly {
    terms: BTreeMap<Word, BigRational>,
}

impl WordPoly {
    fn constant(c: BigRational) -> Self {
        let mut p = WordPoly::default();
        p.add_term(Vec::new(), c);
        p
    }

    fn var(k: usize) -> Self {
        let mut p = WordPoly::default();
        p.add_term(vec![k], BigRational::one());
        p
    }

    fn add_term(&mut self, w: Word, c: BigRational) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(w.clone()).or_insert_with(BigRational::zero);
        *entry += c;
        if entry.is_zero() {
            self.terms.remove(&w);
        }
    }

    fn add(mut self, other: &WordPoly) -> Self {
        for (w, c) in &other.terms {
            self.add_term(w.clone(), c.clone());
        }
        self
    }

    fn neg(&self) -> Self {
        WordPoly { terms: self.terms.iter().map(|(w, c)| (w.clone(), -c)).collect() }
    }

    fn mul(&self, other: &WordPoly) -> Self {
        let mut out = WordPoly::default();
        for (u, a) in &self.terms {
            for (v, b) in &other.terms {
                let mut w = u.clone();
                w.extend(v);
                out.add_term(w, a * b);
            }
        }
        out
    }

    fn bracket(&self, other: &WordPoly) -> Self {
        self.mul(other).add(&other.mul(self).neg())
    }

    fn from_multilinear(f: &MultilinearPoly<BigRational>) -> Self {
        let mut p = WordPoly::default();
        for (w, c) in f.terms() {
            p.add_term(w.clone(), c.clone());
        }
        p
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Word, &BigRational)> {
        self.terms.iter()
    }

    /// Converts to a multilinear polynomial in `x_1..x_m`, where `m` is the
    /// largest variable index seen (`max_var + 1`).
    pub fn to_multilinear(&self, max_var: Option<usize>) -> Result<MultilinearPoly<BigRational>> {
        let m = self
            .terms
            .keys()
            .flat_map(|w| w.iter().copied())
            .max()
            .map(|k| k + 1)
            .into_iter()
            .chain(max_var.map(|k| k + 1))
            .max()
            .unwrap_or(0);
        if m == 0 {
            return Err(Error::NotMultilinear("no variables".into()));
        }
        for w in self.terms.keys() {
            let mut seen = vec![false; m];
            for &k in w {
                if seen[k] {
                    return Err(Error::NotMultilinear(format!("x{} repeated in a monomial", k + 1)));
                }
                seen[k] = true;
            }
            if let Some(miss) = seen.iter().position(|s| !s) {
                return Err(Error::NotMultilinear(format!("x{} missing from a monomial", miss + 1)));
            }
        }
        MultilinearPoly::from_terms(m, self.terms.iter().map(|(w, c)| (w.clone(), c.clone())))
    }
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
    max_var: Option<usize>,
}

impl<'a> Parser<'a> {
    fn err<T>(&self, msg: &str) -> Result<T> {
        Err(Error::Syntax(format!("{msg} at offset {}", self.pos)))
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

    fn eat(&mut self, c: u8) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: u8) -> Result<()> {
        if self.eat(c) {
            Ok(())
        } else {
            self.err(&format!("expected '{}'", c as char))
        }
    }

    fn starts_with(&mut self, s: &str) -> bool {
        self.skip_ws();
        self.src[self.pos..].starts_with(s.as_bytes())
    }

    fn digits(&mut self) -> Result<BigInt> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return self.err("expected digits");
        }
        let text = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
        Ok(text.parse().unwrap())
    }

    fn number(&mut self) -> Result<BigRational> {
        let num = self.digits()?;
        if self.eat(b'/') {
            let den = self.digits()?;
            if den.is_zero() {
                return Err(Error::DivisionByZero);
            }
            Ok(BigRational::new(num, den))
        } else {
            Ok(BigRational::from_integer(num))
        }
    }

    fn signed_number(&mut self) -> Result<BigRational> {
        if self.eat(b'-') {
            Ok(-self.number()?)
        } else {
            self.eat(b'+');
            self.number()
        }
    }

    fn expr(&mut self) -> Result<WordPoly> {
        let mut acc = if self.eat(b'-') {
            self.term()?.neg()
        } else {
            self.eat(b'+');
            self.term()?
        };
        loop {
            if self.eat(b'+') {
                acc = acc.add(&self.term()?);
            } else if self.eat(b'-') {
                acc = acc.add(&self.term()?.neg());
            } else {
                return Ok(acc);
            }
        }
    }

    fn starts_factor(&mut self) -> bool {
        matches!(self.peek(), Some(c) if c.is_ascii_digit() || matches!(c, b'x' | b'[' | b'(' | b'S' | b'c' | b't'))
    }

    fn term(&mut self) -> Result<WordPoly> {
        let mut acc = self.factor()?;
        loop {
            if self.eat(b'*') || self.starts_factor() {
                acc = acc.mul(&self.factor()?);
            } else {
                return Ok(acc);
            }
        }
    }

    fn builtin(&mut self, f: MultilinearPoly<BigRational>) -> WordPoly {
        let top = f.degree() - 1;
        self.max_var = Some(self.max_var.map_or(top, |m| m.max(top)));
        WordPoly::from_multilinear(&f)
    }

    fn factor(&mut self) -> Result<WordPoly> {
        match self.peek() {
            Some(c) if c.is_ascii_digit() => Ok(WordPoly::constant(self.number()?)),
            Some(b'x') => {
                self.pos += 1;
                let k = self.digits()?;
                let k: usize = match usize::try_from(k) {
                    Ok(k) if (1..=64).contains(&k) => k,
                    _ => return self.err("variable index must be between 1 and 64"),
                };
                self.max_var = Some(self.max_var.map_or(k - 1, |m| m.max(k - 1)));
                Ok(WordPoly::var(k - 1))
            }
            Some(b'[') => {
                self.pos += 1;
                let a = self.expr()?;
                self.expect(b',')?;
                let b = self.expr()?;
                self.expect(b']')?;
                Ok(a.bracket(&b))
            }
            Some(b'(') => {
                self.pos += 1;
                let a = self.expr()?;
                self.expect(b')')?;
                Ok(a)
            }
            _ if self.starts_with("St") => {
                self.pos += 2;
                let k = self.digits()?;
                match usize::try_from(k) {
                    Ok(k) if (1..=8).contains(&k) => Ok(self.builtin(super::standard_poly(k))),
                    _ => self.err("standard polynomial degree must be between 1 and 8"),
                }
            }
            _ if self.starts_with("twocomm") => {
                self.pos += "twocomm".len();
                self.expect(b'(')?;
                let lambda = self.signed_number()?;
                self.expect(b')')?;
                Ok(self.builtin(super::two_commutator_poly(&lambda)))
            }
            _ if self.starts_with("comm") => {
                self.pos += "comm".len();
                Ok(self.builtin(super::commutator_poly()))
            }
            Some(_) => self.err("unexpected character"),
            None => self.err("unexpected end of input"),
        }
    }
}

/// Parses and expands a polynomial into a general word polynomial.
pub fn parse_words(text: &str) -> Result<(WordPoly, Option<usize>)> {
    let normalized = text.replace('\u{2212}', "-");
    let mut p = Parser { src: normalized.as_bytes(), pos: 0, max_var: None };
    let poly = p.expr()?;
    if p.peek().is_some() {
        return p.err("trailing input");
    }
    Ok((poly, p.max_var))
}

/// Parses a multilinear polynomial with rational coefficients.
pub fn parse_poly(text: &str) -> Result<MultilinearPoly<BigRational>> {
    let (words, max_var) = parse_words(text)?;
    words.to_multilinear(max_var)
}

/// Parses and maps the coefficients into `field`.
pub fn parse_poly_in(text: &str, field: &FieldSpec) -> Result<MultilinearPoly<Scalar>> {
    let f = parse_poly(text)?;
    let mut terms = Vec::new();
    for (p, c) in f.terms() {
        terms.push((p.clone(), Scalar::Rat(c.clone()).in_field(field)?));
    }
    MultilinearPoly::from_terms(f.degree(), terms)
}

impl<F: crate::field::Field> MultilinearPoly<F> {
    /// Text form that [`parse_poly`] reads back.
    pub fn to_text(&self) -> String {
        if self.is_zero() {
            // keep the degree visible: 0 * x1 ... xm
            let vars: Vec<String> = (1..=self.m).map(|k| format!("x{k}")).collect();
            return format!("0*{}", vars.join("*"));
        }
        let mut out = String::new();
        for (i, (p, c)) in self.terms().enumerate() {
            let word: Vec<String> = p.iter().map(|k| format!("x{}", k + 1)).collect();
            let word = word.join("*");
            let cs = c.to_string();
            if i > 0 {
                out.push_str(" + ");
            }
            if cs == "1" {
                out.push_str(&word);
            } else {
                out.push_str(&format!("({cs})*{word}"));
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(v: i64) -> BigRational {
        BigRational::from_integer(BigInt::from(v))
    }

    #[test]
    fn commutator_expansion() {
        let f = parse_poly("x1*x2 - x2*x1").unwrap();
        assert_eq!(f.degree(), 2);
        assert_eq!(f.coeff(&[0, 1]), q(1));
        assert_eq!(f.coeff(&[1, 0]), q(-1));
        assert_eq!(f, parse_poly("[x1,x2]").unwrap());
        assert_eq!(f, parse_poly("comm").unwrap());
    }

    #[test]
    fn product_of_commutators_signs() {
        let f = parse_poly("[x1,x2]*[x3,x4]").unwrap();
        assert_eq!(f.num_terms(), 4);
        assert_eq!(f.coeff(&[0, 1, 2, 3]), q(1));
        assert_eq!(f.coeff(&[0, 1, 3, 2]), q(-1));
        assert_eq!(f.coeff(&[1, 0, 2, 3]), q(-1));
        assert_eq!(f.coeff(&[1, 0, 3, 2]), q(1));
        assert_eq!(parse_poly("[x1,x2][x3,x4]").unwrap(), f);
    }

    #[test]
    fn repeated_or_missing_variables() {
        assert!(matches!(parse_poly("x1*x1"), Err(Error::NotMultilinear(_))));
        assert!(matches!(parse_poly("x1*x2 + x1"), Err(Error::NotMultilinear(_))));
        assert!(matches!(parse_poly("x1*x3"), Err(Error::NotMultilinear(_))));
        assert!(matches!(parse_poly("[x1,x2]*[x1,x2]"), Err(Error::NotMultilinear(_))));
    }

    #[test]
    fn syntax_errors() {
        assert!(matches!(parse_poly("x1 +"), Err(Error::Syntax(_))));
        assert!(matches!(parse_poly("[x1 x2"), Err(Error::Syntax(_))));
        assert!(matches!(parse_poly("x1 ) "), Err(Error::Syntax(_))));
    }

    #[test]
    fn coefficients_and_builtins() {
        let f = parse_poly("2x1x2x3 + 3*x3*x2*x1").unwrap();
        assert_eq!(f.coefficient_sum(), q(5));
        let g = parse_poly("1/2*[x1,x2] \u{2212} 1/2*x1x2").unwrap();
        assert_eq!(g.coeff(&[1, 0]), BigRational::new(BigInt::from(-1), BigInt::from(2)));
        assert_eq!(g.coeff(&[0, 1]), q(0));
        assert_eq!(parse_poly("St4").unwrap().num_terms(), 24);
        let t = parse_poly("twocomm(-1/2)").unwrap();
        assert_eq!(t.degree(), 4);
        assert_eq!(t.coeff(&[2, 3, 0, 1]), BigRational::new(BigInt::from(-1), BigInt::from(2)));
    }

    #[test]
    fn zero_polynomial_keeps_degree() {
        let f = parse_poly("x1*x2 - x1*x2").unwrap();
        assert!(f.is_zero());
        assert_eq!(f.degree(), 2);
        assert_eq!(parse_poly(&f.to_text()).unwrap(), f);
    }

    #[test]
    fn text_round_trip() {
        let f = parse_poly("3*[x1,x2]*x3 - 1/4*x3*x1*x2").unwrap();
        assert_eq!(parse_poly(&f.to_text()).unwrap(), f);
    }
}
