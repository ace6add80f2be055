//! Dynamically tagged exact scalars: rationals, one adjoined square root, prime fields.
//!
//! [`Scalar`] is the value type used wherever the field of a computation is
//! only known at run time (file formats, the command line, witness
//! constructions that may need to adjoin a square root). It implements
//! [`Field`], so every generic routine accepts it.
//!
//! Mixed arithmetic follows the embeddings `Q -> Q(sqrt d)` and `Q -> F_p`:
//! a rational operand is promoted into the other operand's field. Combining
//! two genuinely different extensions, or two different primes, is a field
//! mismatch. The panicking operators (`+`, `-`, `*`) are meant for values
//! already known to share a field; the `try_*` methods report mismatches.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::{is_prime, mul_mod, pow_mod, rational_mod, Field};

/// Descriptor of the field a scalar lives in.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum FieldSpec {
    Rationals,
    /// `Q(sqrt d)` with `d` square-free and different from 0 and 1.
    Quadratic { d: i64 },
    Prime { p: u64 },
}

impl FieldSpec {
    pub fn quadratic(d: i64) -> Result<Self> {
        if d == 0 || d == 1 || !is_square_free(d.unsigned_abs()) {
            return Err(Error::InvalidField(format!("{d} is not a square-free non-square")));
        }
        Ok(FieldSpec::Quadratic { d })
    }

    pub fn prime(p: u64) -> Result<Self> {
        if !is_prime(p) || p >= 1 << 32 {
            return Err(Error::InvalidField(format!("{p} is not a prime below 2^32")));
        }
        Ok(FieldSpec::Prime { p })
    }

    pub fn characteristic(&self) -> u64 {
        match self {
            FieldSpec::Prime { p } => *p,
            _ => 0,
        }
    }

    /// Smallest field containing both, if any.
    pub fn join(&self, other: &FieldSpec) -> Result<FieldSpec> {
        match (self, other) {
            (FieldSpec::Rationals, x) | (x, FieldSpec::Rationals) => Ok(*x),
            (a, b) if a == b => Ok(*a),
            _ => Err(Error::FieldMismatch(format!("{self} vs {other}"))),
        }
    }

    pub fn validate(&self) -> Result<()> {
        match *self {
            FieldSpec::Rationals => Ok(()),
            FieldSpec::Quadratic { d } => FieldSpec::quadratic(d).map(|_| ()),
            FieldSpec::Prime { p } => FieldSpec::prime(p).map(|_| ()),
        }
    }

    pub fn zero(&self) -> Scalar {
        self.from_i64(0)
    }

    pub fn one(&self) -> Scalar {
        self.from_i64(1)
    }

    pub fn from_i64(&self, v: i64) -> Scalar {
        Scalar::from_i64(v).in_field(self).expect("integers embed in every field")
    }
}

impl fmt::Display for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldSpec::Rationals => write!(f, "Q"),
            FieldSpec::Quadratic { d } => write!(f, "Q(sqrt({d}))"),
            FieldSpec::Prime { p } => write!(f, "F{p}"),
        }
    }
}

impl FromStr for FieldSpec {
    type Err = Error;

    /// Accepts `Q`, `rationals`, `Q(sqrt(d))`, `F7` and `GF(7)`.
    fn from_str(s: &str) -> Result<Self> {
        let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        let lower = t.to_ascii_lowercase();
        if lower == "q" || lower == "qq" || lower == "rationals" {
            return Ok(FieldSpec::Rationals);
        }
        if let Some(inner) = lower.strip_prefix("q(sqrt(").and_then(|r| r.strip_suffix("))")) {
            let d = inner
                .parse::<i64>()
                .map_err(|_| Error::InvalidField(s.to_string()))?;
            return FieldSpec::quadratic(d);
        }
        let prime_text = lower
            .strip_prefix("gf(")
            .and_then(|r| r.strip_suffix(')'))
            .or_else(|| lower.strip_prefix('f'));
        if let Some(p) = prime_text {
            let p = p.parse::<u64>().map_err(|_| Error::InvalidField(s.to_string()))?;
            return FieldSpec::prime(p);
        }
        Err(Error::InvalidField(s.to_string()))
    }
}

/// An exact field element tagged with its field.
#[derive(Clone, Debug)]
pub enum Scalar {
    Rat(BigRational),
    /// `a + b sqrt(d)`.
    Quad { a: BigRational, b: BigRational, d: i64 },
    /// Residue `r` in `[0, p)`.
    Mod { r: u64, p: u64 },
}

/// Two operands brought into a common field.
enum Pair {
    Rat(BigRational, BigRational),
    Quad((BigRational, BigRational), (BigRational, BigRational), i64),
    Mod(u64, u64, u64),
}

fn rat(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

impl Scalar {
    pub fn from_i64(v: i64) -> Self {
        Scalar::Rat(rat(v))
    }

    pub fn from_ratio(n: i64, d: i64) -> Self {
        Scalar::Rat(BigRational::new(BigInt::from(n), BigInt::from(d)))
    }

    /// `a + b sqrt(d)`; `d` must be a square-free non-square.
    pub fn quad(a: BigRational, b: BigRational, d: i64) -> Self {
        Scalar::Quad { a, b, d }
    }

    pub fn field_spec(&self) -> FieldSpec {
        match self {
            Scalar::Rat(_) => FieldSpec::Rationals,
            Scalar::Quad { d, .. } => FieldSpec::Quadratic { d: *d },
            Scalar::Mod { p, .. } => FieldSpec::Prime { p: *p },
        }
    }

    pub fn is_zero_value(&self) -> bool {
        match self {
            Scalar::Rat(x) => x.is_zero(),
            Scalar::Quad { a, b, .. } => a.is_zero() && b.is_zero(),
            Scalar::Mod { r, .. } => *r == 0,
        }
    }

    /// The rational value, if this element is rational.
    pub fn to_rational(&self) -> Option<BigRational> {
        match self {
            Scalar::Rat(x) => Some(x.clone()),
            Scalar::Quad { a, b, .. } if b.is_zero() => Some(a.clone()),
            _ => None,
        }
    }

    /// Embeds this value into `spec`.
    pub fn in_field(&self, spec: &FieldSpec) -> Result<Scalar> {
        match (self, spec) {
            (Scalar::Rat(x), FieldSpec::Rationals) => Ok(Scalar::Rat(x.clone())),
            (Scalar::Quad { a, b, .. }, FieldSpec::Rationals) if b.is_zero() => Ok(Scalar::Rat(a.clone())),
            (Scalar::Rat(x), FieldSpec::Quadratic { d }) => Ok(Scalar::Quad {
                a: x.clone(),
                b: BigRational::zero(),
                d: *d,
            }),
            (Scalar::Quad { a, b, d }, FieldSpec::Quadratic { d: e }) if d == e || b.is_zero() => {
                Ok(Scalar::Quad { a: a.clone(), b: b.clone(), d: *e })
            }
            (Scalar::Rat(x), FieldSpec::Prime { p }) => rational_mod(x, *p)
                .map(|r| Scalar::Mod { r, p: *p })
                .ok_or(Error::DivisionByZero),
            (Scalar::Quad { a, b, .. }, FieldSpec::Prime { p }) if b.is_zero() => rational_mod(a, *p)
                .map(|r| Scalar::Mod { r, p: *p })
                .ok_or(Error::DivisionByZero),
            (Scalar::Mod { r, p }, FieldSpec::Prime { p: q }) if p == q => Ok(Scalar::Mod { r: *r, p: *p }),
            _ => Err(Error::FieldMismatch(format!("{} does not embed in {spec}", self.field_spec()))),
        }
    }

    fn unify(&self, other: &Scalar) -> Result<Pair> {
        use Scalar::*;
        let zero = BigRational::zero;
        Ok(match (self, other) {
            (Rat(x), Rat(y)) => Pair::Rat(x.clone(), y.clone()),
            (Rat(x), Quad { a, b, d }) => Pair::Quad((x.clone(), zero()), (a.clone(), b.clone()), *d),
            (Quad { a, b, d }, Rat(y)) => Pair::Quad((a.clone(), b.clone()), (y.clone(), zero()), *d),
            (Quad { a, b, d }, Quad { a: c, b: e, d: f }) => {
                if d == f || e.is_zero() {
                    Pair::Quad((a.clone(), b.clone()), (c.clone(), e.clone()), *d)
                } else if b.is_zero() {
                    Pair::Quad((a.clone(), b.clone()), (c.clone(), e.clone()), *f)
                } else {
                    return Err(Error::FieldMismatch(format!("Q(sqrt({d})) vs Q(sqrt({f}))")));
                }
            }
            (Mod { r, p }, Mod { r: s, p: q }) => {
                if p != q {
                    return Err(Error::FieldMismatch(format!("F{p} vs F{q}")));
                }
                Pair::Mod(*r, *s, *p)
            }
            (Mod { r, p }, other) => {
                let Scalar::Mod { r: s, .. } = other.in_field(&FieldSpec::Prime { p: *p })? else {
                    unreachable!()
                };
                Pair::Mod(*r, s, *p)
            }
            (this, Mod { r, p }) => {
                let Scalar::Mod { r: s, .. } = this.in_field(&FieldSpec::Prime { p: *p })? else {
                    unreachable!()
                };
                Pair::Mod(s, *r, *p)
            }
        })
    }

    pub fn try_add(&self, other: &Scalar) -> Result<Scalar> {
        Ok(match self.unify(other)? {
            Pair::Rat(x, y) => Scalar::Rat(x + y),
            Pair::Quad((a, b), (c, e), d) => Scalar::Quad { a: a + c, b: b + e, d },
            Pair::Mod(r, s, p) => Scalar::Mod { r: (r + s) % p, p },
        })
    }

    pub fn try_sub(&self, other: &Scalar) -> Result<Scalar> {
        self.try_add(&other.neg_ref())
    }

    pub fn try_mul(&self, other: &Scalar) -> Result<Scalar> {
        Ok(match self.unify(other)? {
            Pair::Rat(x, y) => Scalar::Rat(x * y),
            Pair::Quad((a, b), (c, e), d) => {
                let dd = rat(d);
                Scalar::Quad {
                    a: &a * &c + &b * &e * dd,
                    b: a * e + b * c,
                    d,
                }
            }
            Pair::Mod(r, s, p) => Scalar::Mod { r: mul_mod(r, s, p), p },
        })
    }

    pub fn try_div(&self, other: &Scalar) -> Result<Scalar> {
        let inv = other.inv().ok_or(Error::DivisionByZero)?;
        self.try_mul(&inv)
    }

    fn neg_ref(&self) -> Scalar {
        match self {
            Scalar::Rat(x) => Scalar::Rat(-x),
            Scalar::Quad { a, b, d } => Scalar::Quad { a: -a, b: -b, d: *d },
            Scalar::Mod { r, p } => Scalar::Mod { r: (p - r) % p, p: *p },
        }
    }

    /// Square root inside the current field, if one exists.
    ///
    /// Prime-field square roots are not supported and return `None`.
    pub fn sqrt_in_field(&self) -> Option<Scalar> {
        match self {
            Scalar::Rat(x) => rational_sqrt(x).map(Scalar::Rat),
            Scalar::Quad { a, b, d } if b.is_zero() => {
                if let Some(s) = rational_sqrt(a) {
                    return Some(Scalar::Quad { a: s, b: BigRational::zero(), d: *d });
                }
                // a = d t^2 gives sqrt(a) = t sqrt(d)
                let t = rational_sqrt(&(a / rat(*d)))?;
                Some(Scalar::Quad { a: BigRational::zero(), b: t, d: *d })
            }
            Scalar::Quad { a, b, d } => {
                // (x + y sqrt d)^2 = a + b sqrt d  =>  x^2 = (a +- sqrt(a^2 - d b^2)) / 2
                let norm = a * a - b * b * rat(*d);
                let r = rational_sqrt(&norm)?;
                let two = rat(2);
                for cand in [(a + &r) / &two, (a - &r) / &two] {
                    if let Some(x) = rational_sqrt(&cand) {
                        if x.is_zero() {
                            continue;
                        }
                        let y = b / (&two * &x);
                        return Some(Scalar::Quad { a: x, b: y, d: *d });
                    }
                }
                None
            }
            Scalar::Mod { .. } => None,
        }
    }

    /// Square root, adjoining `sqrt` of a square-free integer when the
    /// argument is a rational non-square.
    pub fn sqrt_adjoining(&self) -> Result<Scalar> {
        if let Some(s) = self.sqrt_in_field() {
            return Ok(s);
        }
        match self {
            Scalar::Rat(x) => Ok(adjoin_rational_sqrt(x)),
            _ => Err(Error::Unsupported(format!(
                "square root of {self} needs a second extension of {}",
                self.field_spec()
            ))),
        }
    }

    /// Conjugate `a - b sqrt(d)`; identity on rationals and residues.
    pub fn conjugate(&self) -> Scalar {
        match self {
            Scalar::Quad { a, b, d } => Scalar::Quad { a: a.clone(), b: -b, d: *d },
            other => other.clone(),
        }
    }

    /// Parses `text` as an element of `field`.
    pub fn parse(text: &str, field: &FieldSpec) -> Result<Scalar> {
        parse_scalar(text, field)
    }
}

impl PartialEq for Scalar {
    fn eq(&self, other: &Self) -> bool {
        match self.unify(other) {
            Ok(Pair::Rat(x, y)) => x == y,
            Ok(Pair::Quad(x, y, _)) => x == y,
            Ok(Pair::Mod(r, s, _)) => r == s,
            Err(_) => false,
        }
    }
}

impl Add for Scalar {
    type Output = Scalar;
    fn add(self, rhs: Scalar) -> Scalar {
        self.try_add(&rhs).expect("scalar field mismatch")
    }
}

impl Sub for Scalar {
    type Output = Scalar;
    fn sub(self, rhs: Scalar) -> Scalar {
        self.try_sub(&rhs).expect("scalar field mismatch")
    }
}

impl Mul for Scalar {
    type Output = Scalar;
    fn mul(self, rhs: Scalar) -> Scalar {
        self.try_mul(&rhs).expect("scalar field mismatch")
    }
}

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        self.neg_ref()
    }
}

impl Zero for Scalar {
    fn zero() -> Self {
        Scalar::Rat(BigRational::zero())
    }
    fn is_zero(&self) -> bool {
        self.is_zero_value()
    }
}

impl One for Scalar {
    fn one() -> Self {
        Scalar::Rat(BigRational::one())
    }
}

impl Field for Scalar {
    fn inv(&self) -> Option<Self> {
        match self {
            Scalar::Rat(x) => (!x.is_zero()).then(|| Scalar::Rat(x.recip())),
            Scalar::Quad { a, b, d } => {
                let norm = a * a - b * b * rat(*d);
                if norm.is_zero() {
                    return None;
                }
                Some(Scalar::Quad { a: a / &norm, b: -b / &norm, d: *d })
            }
            Scalar::Mod { r, p } => (*r != 0).then(|| Scalar::Mod { r: pow_mod(*r, p - 2, *p), p: *p }),
        }
    }

    fn from_i64(v: i64) -> Self {
        Scalar::from_i64(v)
    }

    fn from_rational(r: &BigRational) -> Option<Self> {
        Some(Scalar::Rat(r.clone()))
    }

    fn characteristic(&self) -> u64 {
        self.field_spec().characteristic()
    }

    fn to_scalar(&self) -> Scalar {
        self.clone()
    }

    fn compatible(&self, other: &Self) -> bool {
        self.unify(other).is_ok()
    }
}

fn fmt_rational(x: &BigRational) -> String {
    if x.is_integer() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Rat(x) => write!(f, "{}", fmt_rational(x)),
            Scalar::Quad { a, b, d } => {
                if b.is_zero() {
                    return write!(f, "{}", fmt_rational(a));
                }
                let surd = if b.abs().is_one() {
                    format!("sqrt({d})")
                } else {
                    format!("{}*sqrt({d})", fmt_rational(&b.abs()))
                };
                let sign = if b.is_negative() { "-" } else { "+" };
                if a.is_zero() {
                    write!(f, "{}{surd}", if b.is_negative() { "-" } else { "" })
                } else {
                    write!(f, "{}{sign}{surd}", fmt_rational(a))
                }
            }
            Scalar::Mod { r, .. } => write!(f, "{r}"),
        }
    }
}

impl Serialize for Scalar {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

fn parse_rational(text: &str) -> Result<BigRational> {
    let err = || Error::Syntax(format!("bad rational '{text}'"));
    if text.is_empty() {
        return Err(err());
    }
    let (num, den) = match text.split_once('/') {
        Some((n, d)) => (n, d),
        None => (text, "1"),
    };
    let ok = |s: &str| {
        let digits = s.strip_prefix('-').unwrap_or(s);
        !digits.is_empty() && digits.bytes().all(|b| b.is_ascii_digit())
    };
    if !ok(num) || !ok(den) || den.starts_with('-') {
        return Err(err());
    }
    let n: BigInt = num.parse().map_err(|_| err())?;
    let d: BigInt = den.parse().map_err(|_| err())?;
    if d.is_zero() {
        return Err(Error::DivisionByZero);
    }
    Ok(BigRational::new(n, d))
}

/// Parses one summand: a rational, `sqrt(d)`, or `rat*sqrt(d)`.
fn parse_part(text: &str) -> Result<(BigRational, Option<(BigRational, i64)>)> {
    if let Some(idx) = text.find("sqrt(") {
        let coef_text = &text[..idx];
        let rest = &text[idx + 5..];
        let inner = rest
            .strip_suffix(')')
            .ok_or_else(|| Error::Syntax(format!("unclosed sqrt in '{text}'")))?;
        let d: i64 = inner
            .parse()
            .map_err(|_| Error::Syntax(format!("bad radicand '{inner}'")))?;
        let coef = match coef_text {
            "" => BigRational::one(),
            "-" => -BigRational::one(),
            c => parse_rational(
                c.strip_suffix('*')
                    .ok_or_else(|| Error::Syntax(format!("expected '*' before sqrt in '{text}'")))?,
            )?,
        };
        Ok((BigRational::zero(), Some((coef, d))))
    } else {
        Ok((parse_rational(text)?, None))
    }
}

/// Parses the scalar grammar `int | int/int | rat (+|-) rat*sqrt(d)`.
///
/// Both `-` and the Unicode minus sign are accepted.
pub fn parse_scalar(text: &str, field: &FieldSpec) -> Result<Scalar> {
    let t: String = text
        .chars()
        .filter(|c| !c.is_whitespace())
        .map(|c| if c == '\u{2212}' { '-' } else { c })
        .collect();
    if t.is_empty() {
        return Err(Error::Syntax("empty scalar".into()));
    }
    // split at a top-level sign that is not the leading one
    let bytes = t.as_bytes();
    let mut split = None;
    let mut depth = 0;
    for (i, &c) in bytes.iter().enumerate() {
        match c {
            b'(' => depth += 1,
            b')' => depth -= 1,
            b'+' | b'-' if i > 0 && depth == 0 && bytes[i - 1] != b'/' => {
                if split.is_some() {
                    return Err(Error::Syntax(format!("too many terms in '{text}'")));
                }
                split = Some(i);
            }
            _ => {}
        }
    }
    let mut rational = BigRational::zero();
    let mut surd: Option<(BigRational, i64)> = None;
    let parts: Vec<String> = match split {
        None => vec![t.clone()],
        Some(i) => {
            let second = if bytes[i] == b'+' { t[i + 1..].to_string() } else { t[i..].to_string() };
            vec![t[..i].to_string(), second]
        }
    };
    for p in parts {
        let (r, s) = parse_part(&p)?;
        rational += r;
        if let Some(s) = s {
            if surd.is_some() {
                return Err(Error::Syntax(format!("two surds in '{text}'")));
            }
            surd = Some(s);
        }
    }
    match (surd, field) {
        (None, f) => Scalar::Rat(rational).in_field(f),
        (Some((b, d)), FieldSpec::Quadratic { d: e }) if d == *e => Ok(Scalar::Quad { a: rational, b, d }),
        (Some((_, d)), f) => Err(Error::FieldMismatch(format!("sqrt({d}) is not an element of {f}"))),
    }
}

impl<'de> Deserialize<'de> for Scalar {
    /// Without a field context, strings parse as rationals or, when they
    /// contain `sqrt(d)`, as elements of `Q(sqrt d)`.
    fn deserialize<D: serde::Deserializer<'de>>(de: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(de)?;
        parse_scalar_infer(&s).map_err(serde::de::Error::custom)
    }
}

/// Parses a scalar, inferring `Q(sqrt d)` from the radicand when present.
pub fn parse_scalar_infer(text: &str) -> Result<Scalar> {
    let field = match text.find("sqrt(") {
        Some(i) => {
            let rest = &text[i + 5..];
            let end = rest.find(')').ok_or_else(|| Error::Syntax(text.to_string()))?;
            let d: i64 = rest[..end]
                .trim()
                .parse()
                .map_err(|_| Error::Syntax(text.to_string()))?;
            FieldSpec::quadratic(d)?
        }
        None => FieldSpec::Rationals,
    };
    parse_scalar(text, &field)
}

/// Exact integer arithmetic on two scalars of the same field.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
    Div,
}

pub fn scalar_arith(a: &Scalar, b: &Scalar, op: ArithOp) -> Result<Scalar> {
    match op {
        ArithOp::Add => a.try_add(b),
        ArithOp::Sub => a.try_sub(b),
        ArithOp::Mul => a.try_mul(b),
        ArithOp::Div => a.try_div(b),
    }
}

/// Square root of a nonnegative rational when it is rational.
pub fn rational_sqrt(x: &BigRational) -> Option<BigRational> {
    if x.is_negative() {
        return None;
    }
    let n = x.numer().sqrt();
    let d = x.denom().sqrt();
    (&n * &n == *x.numer() && &d * &d == *x.denom()).then(|| BigRational::new(n, d))
}

/// Writes `k = s^2 * f` with `f` square-free (sign carried by `f`).
pub fn square_free_part(k: &BigInt) -> (BigInt, BigInt) {
    assert!(!k.is_zero(), "square-free part of zero");
    let mut f = BigInt::one();
    let mut s = BigInt::one();
    let mut rest = k.abs();
    let mut q = BigInt::from(2u32);
    let limit = BigInt::from(1_000_000u32);
    while &q * &q <= rest && q <= limit {
        let mut e = 0u32;
        while rest.is_multiple_of(&q) {
            rest /= &q;
            e += 1;
        }
        for _ in 0..e / 2 {
            s *= &q;
        }
        if e % 2 == 1 {
            f *= &q;
        }
        q += 1;
    }
    let r = rest.sqrt();
    if &r * &r == rest {
        s *= r;
    } else {
        f *= rest;
    }
    if k.is_negative() {
        f = -f;
    }
    (s, f)
}

fn adjoin_rational_sqrt(x: &BigRational) -> Scalar {
    // sqrt(n/d) = sqrt(n d) / d
    let prod = x.numer() * x.denom();
    let (s, f) = square_free_part(&prod);
    let coef = BigRational::new(s, x.denom().clone());
    let d = f.to_i64().expect("radicand fits in i64");
    if d == 1 {
        Scalar::Rat(coef)
    } else {
        Scalar::Quad { a: BigRational::zero(), b: coef, d }
    }
}

fn is_square_free(k: u64) -> bool {
    if k == 0 {
        return false;
    }
    let mut q = 2u64;
    while q * q <= k {
        if k.is_multiple_of(q * q) {
            return false;
        }
        q += 1;
    }
    true
}

/// How `sqrt(n (n - 2))` is represented exactly.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SqrtPlan {
    pub field: FieldSpec,
    /// `sqrt(n (n - 2)) = scale * sqrt(d)`, or `= scale` over the rationals.
    pub scale: BigInt,
}

impl SqrtPlan {
    /// `sqrt(n (n - 2))` as a scalar.
    pub fn root(&self) -> Scalar {
        let scale = BigRational::from_integer(self.scale.clone());
        match self.field {
            FieldSpec::Quadratic { d } => Scalar::Quad { a: BigRational::zero(), b: scale, d },
            _ => Scalar::Rat(scale),
        }
    }
}

/// Smallest field holding `sqrt(n (n - 2))`, for `n >= 3`.
pub fn sqrt_needed(n: usize) -> SqrtPlan {
    assert!(n >= 3, "sqrt_needed requires n >= 3");
    let k = BigInt::from(n as u64 * (n as u64 - 2));
    let (s, f) = square_free_part(&k);
    if f.is_one() {
        SqrtPlan { field: FieldSpec::Rationals, scale: s }
    } else {
        let d = f.to_i64().expect("small radicand");
        SqrtPlan { field: FieldSpec::Quadratic { d }, scale: s }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> Scalar {
        Scalar::from_ratio(n, d)
    }

    #[test]
    fn rational_addition() {
        assert_eq!(scalar_arith(&q(1, 2), &q(1, 3), ArithOp::Add).unwrap(), q(5, 6));
    }

    #[test]
    fn sqrt3_squared_is_three() {
        let s = parse_scalar("0+1*sqrt(3)", &FieldSpec::Quadratic { d: 3 }).unwrap();
        let sq = scalar_arith(&s, &s, ArithOp::Mul).unwrap();
        assert_eq!(sq, Scalar::from_i64(3));
        match sq {
            Scalar::Quad { b, .. } => assert!(b.is_zero()),
            other => panic!("expected quadratic element, got {other:?}"),
        }
    }

    #[test]
    fn prime_field_division() {
        let f5 = FieldSpec::Prime { p: 5 };
        let a = f5.from_i64(2);
        let b = f5.from_i64(3);
        assert_eq!(scalar_arith(&a, &b, ArithOp::Div).unwrap(), f5.from_i64(4));
    }

    #[test]
    fn division_by_zero_and_mismatch() {
        assert_eq!(
            scalar_arith(&q(1, 1), &q(0, 1), ArithOp::Div),
            Err(Error::DivisionByZero)
        );
        let a = Scalar::Mod { r: 1, p: 5 };
        let b = Scalar::Mod { r: 1, p: 7 };
        assert!(matches!(a.try_add(&b), Err(Error::FieldMismatch(_))));
        let s2 = parse_scalar_infer("sqrt(2)").unwrap();
        let s3 = parse_scalar_infer("sqrt(3)").unwrap();
        assert!(matches!(s2.try_mul(&s3), Err(Error::FieldMismatch(_))));
    }

    #[test]
    fn parse_examples() {
        let q3 = FieldSpec::Quadratic { d: 3 };
        assert_eq!(parse_scalar("\u{2212}3/4", &FieldSpec::Rationals).unwrap(), q(-3, 4));
        let x = parse_scalar("1/2+1/2*sqrt(3)", &q3).unwrap();
        match &x {
            Scalar::Quad { a, b, d } => {
                assert_eq!(Scalar::Rat(a.clone()), q(1, 2));
                assert_eq!(Scalar::Rat(b.clone()), q(1, 2));
                assert_eq!(*d, 3);
            }
            other => panic!("{other:?}"),
        }
        assert_eq!(
            parse_scalar("7", &FieldSpec::Prime { p: 5 }).unwrap(),
            Scalar::Mod { r: 2, p: 5 }
        );
        assert_eq!(parse_scalar("-1/2-sqrt(3)", &q3).unwrap().to_string(), "-1/2-sqrt(3)");
        assert!(parse_scalar("1+sqrt(2)", &q3).is_err());
        assert!(parse_scalar("1//2", &FieldSpec::Rationals).is_err());
        assert!(parse_scalar("abc", &FieldSpec::Rationals).is_err());
    }

    #[test]
    fn field_spec_text() {
        for s in ["Q", "Q(sqrt(3))", "F7", "Q(sqrt(-1))"] {
            let f: FieldSpec = s.parse().unwrap();
            assert_eq!(f.to_string(), s);
        }
        assert_eq!("GF(5)".parse::<FieldSpec>().unwrap(), FieldSpec::Prime { p: 5 });
        assert!("F6".parse::<FieldSpec>().is_err());
        assert!("Q(sqrt(4))".parse::<FieldSpec>().is_err());
        assert!("Q(sqrt(12))".parse::<FieldSpec>().is_err());
    }

    #[test]
    fn sqrt_needed_examples() {
        let p3 = sqrt_needed(3);
        assert_eq!(p3.field, FieldSpec::Quadratic { d: 3 });
        assert_eq!(p3.scale, BigInt::from(1));
        let p4 = sqrt_needed(4);
        assert_eq!(p4.field, FieldSpec::Quadratic { d: 2 });
        assert_eq!(p4.scale, BigInt::from(2));
        let p6 = sqrt_needed(6);
        assert_eq!(p6.field, FieldSpec::Quadratic { d: 6 });
        assert_eq!(p6.scale, BigInt::from(2));
        for n in 3..40usize {
            let r = sqrt_needed(n).root();
            assert_eq!(r.clone() * r, Scalar::from_i64((n * (n - 2)) as i64));
        }
    }

    #[test]
    fn square_roots() {
        assert_eq!(q(9, 4).sqrt_in_field(), Some(q(3, 2)));
        assert_eq!(q(2, 1).sqrt_in_field(), None);
        let r = q(8, 9).sqrt_adjoining().unwrap();
        assert_eq!(r.clone() * r.clone(), q(8, 9));
        assert_eq!(r.field_spec(), FieldSpec::Quadratic { d: 2 });
        let neg = q(-3, 1).sqrt_adjoining().unwrap();
        assert_eq!(neg.clone() * neg, q(-3, 1));
        // (1 + sqrt 2)^2 = 3 + 2 sqrt 2
        let x = parse_scalar_infer("3+2*sqrt(2)").unwrap();
        let s = x.sqrt_in_field().unwrap();
        assert_eq!(s.clone() * s, x);
    }
}
