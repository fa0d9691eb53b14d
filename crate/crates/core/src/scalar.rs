//! Two-level scalar tower: exact elements of a quadratic extension of the
//! rationals, and approximate complex numbers.
//!
//! An exact scalar is `a + b*sqrt(d)` with arbitrary-precision rational
//! coefficients over a fixed radicand `d` (squarefree, not 0 or 1; negative
//! `d` gives exact complex arithmetic). The radicand `None` means plain
//! rationals. All scalars taking part in one computation must share one
//! context; mixing contexts is reported as an error by the checked
//! operations.
//!
//! The approximate variant is a complex double with an absolute comparison
//! tolerance, for matrices whose entries lie outside any single quadratic
//! extension (roots of unity of order five and up, for instance).

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Default absolute tolerance for approximate-mode comparisons.
pub const DEFAULT_TOL: f64 = 1e-9;

/// The radicand of the quadratic extension, or `None` for plain rationals.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub enum Radicand {
    None,
    Sqrt(i64),
}

impl Radicand {
    /// A context for plain rational arithmetic.
    pub fn plain() -> Self {
        Radicand::None
    }

    /// The extension by `sqrt(d)`. Fails unless `d` is squarefree and
    /// differs from 0 and 1. Negative `d` is allowed and means the
    /// square root is imaginary.
    pub fn sqrt(d: i64) -> Result<Self> {
        if d == 0 || d == 1 || !is_squarefree(d.unsigned_abs()) {
            return Err(Error::InvalidRadicand(d));
        }
        Ok(Radicand::Sqrt(d))
    }

    pub fn value(&self) -> Option<i64> {
        match self {
            Radicand::None => None,
            Radicand::Sqrt(d) => Some(*d),
        }
    }

    fn as_rational(&self) -> BigRational {
        match self {
            Radicand::None => BigRational::zero(),
            Radicand::Sqrt(d) => BigRational::from_integer(BigInt::from(*d)),
        }
    }
}

fn is_squarefree(mut m: u64) -> bool {
    let mut f = 2u64;
    while f.saturating_mul(f) <= m {
        if m % f == 0 {
            m /= f;
            if m % f == 0 {
                return false;
            }
        }
        f += 1;
    }
    true
}

/// Arithmetic context a scalar lives in: an exact quadratic extension, or
/// approximate complex doubles with a comparison tolerance.
#[derive(Clone, Copy, PartialEq, Debug)]
pub enum ScalarContext {
    Exact(Radicand),
    Approx { tol: f64 },
}

impl ScalarContext {
    pub fn exact(radicand: Radicand) -> Self {
        ScalarContext::Exact(radicand)
    }

    pub fn approx(tol: f64) -> Self {
        ScalarContext::Approx { tol }
    }

    pub fn approx_default() -> Self {
        ScalarContext::Approx { tol: DEFAULT_TOL }
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, ScalarContext::Exact(_))
    }

    /// Two contexts are compatible when both are exact over the same
    /// radicand, or both approximate (tolerances combine by maximum).
    pub fn compatible(&self, other: &ScalarContext) -> bool {
        match (self, other) {
            (ScalarContext::Exact(a), ScalarContext::Exact(b)) => a == b,
            (ScalarContext::Approx { .. }, ScalarContext::Approx { .. }) => true,
            _ => false,
        }
    }

    pub fn merge(&self, other: &ScalarContext) -> Result<ScalarContext> {
        match (self, other) {
            (ScalarContext::Exact(a), ScalarContext::Exact(b)) if a == b => Ok(*self),
            (ScalarContext::Approx { tol: t1 }, ScalarContext::Approx { tol: t2 }) => {
                Ok(ScalarContext::Approx { tol: t1.max(*t2) })
            }
            _ => Err(Error::ContextMismatch(format!("{self:?} vs {other:?}"))),
        }
    }
}

/// Exact element `a + b*sqrt(d)` of the quadratic extension.
///
/// The rational coefficients are kept in lowest terms with positive
/// denominators, so equality of values is equality of representations.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ExactScalar {
    a: BigRational,
    b: BigRational,
    radicand: Radicand,
}

impl ExactScalar {
    pub fn new(a: BigRational, b: BigRational, radicand: Radicand) -> Result<Self> {
        if radicand == Radicand::None && !b.is_zero() {
            return Err(Error::RadicandRequired);
        }
        Ok(ExactScalar { a, b, radicand })
    }

    pub fn rational_part(&self) -> &BigRational {
        &self.a
    }

    pub fn radical_part(&self) -> &BigRational {
        &self.b
    }

    pub fn radicand(&self) -> Radicand {
        self.radicand
    }

    fn add(&self, rhs: &ExactScalar) -> ExactScalar {
        ExactScalar {
            a: &self.a + &rhs.a,
            b: &self.b + &rhs.b,
            radicand: self.radicand,
        }
    }

    fn sub(&self, rhs: &ExactScalar) -> ExactScalar {
        ExactScalar {
            a: &self.a - &rhs.a,
            b: &self.b - &rhs.b,
            radicand: self.radicand,
        }
    }

    fn mul(&self, rhs: &ExactScalar) -> ExactScalar {
        let d = self.radicand.as_rational();
        ExactScalar {
            a: &self.a * &rhs.a + &self.b * &rhs.b * &d,
            b: &self.a * &rhs.b + &self.b * &rhs.a,
            radicand: self.radicand,
        }
    }

    /// Multiplicative inverse: `1/(a + b*sqrt(d)) = (a - b*sqrt(d)) / (a^2 - b^2 d)`.
    /// The norm is nonzero for nonzero elements because `d` is squarefree.
    fn inv(&self) -> Result<ExactScalar> {
        let d = self.radicand.as_rational();
        let norm = &self.a * &self.a - &self.b * &self.b * &d;
        if norm.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(ExactScalar {
            a: &self.a / &norm,
            b: -(&self.b / &norm),
            radicand: self.radicand,
        })
    }

    fn neg(&self) -> ExactScalar {
        ExactScalar {
            a: -self.a.clone(),
            b: -self.b.clone(),
            radicand: self.radicand,
        }
    }

    fn conj(&self) -> ExactScalar {
        // Complex conjugation: only an imaginary sqrt(d) flips sign.
        match self.radicand {
            Radicand::Sqrt(d) if d < 0 => ExactScalar {
                a: self.a.clone(),
                b: -self.b.clone(),
                radicand: self.radicand,
            },
            _ => self.clone(),
        }
    }

    fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }
}

/// Approximate complex scalar with an absolute comparison tolerance.
#[derive(Clone, Copy, PartialEq, Debug)]
pub struct ApproxScalar {
    re: f64,
    im: f64,
    tol: f64,
}

impl ApproxScalar {
    pub fn new(re: f64, im: f64, tol: f64) -> Self {
        ApproxScalar { re, im, tol }
    }

    pub fn re(&self) -> f64 {
        self.re
    }

    pub fn im(&self) -> f64 {
        self.im
    }

    pub fn tol(&self) -> f64 {
        self.tol
    }

    fn add(&self, rhs: &ApproxScalar) -> ApproxScalar {
        ApproxScalar::new(self.re + rhs.re, self.im + rhs.im, self.tol.max(rhs.tol))
    }

    fn sub(&self, rhs: &ApproxScalar) -> ApproxScalar {
        ApproxScalar::new(self.re - rhs.re, self.im - rhs.im, self.tol.max(rhs.tol))
    }

    fn mul(&self, rhs: &ApproxScalar) -> ApproxScalar {
        ApproxScalar::new(
            self.re * rhs.re - self.im * rhs.im,
            self.re * rhs.im + self.im * rhs.re,
            self.tol.max(rhs.tol),
        )
    }

    fn div(&self, rhs: &ApproxScalar) -> Result<ApproxScalar> {
        let nsq = rhs.re * rhs.re + rhs.im * rhs.im;
        if nsq == 0.0 {
            return Err(Error::DivisionByZero);
        }
        Ok(ApproxScalar::new(
            (self.re * rhs.re + self.im * rhs.im) / nsq,
            (self.im * rhs.re - self.re * rhs.im) / nsq,
            self.tol.max(rhs.tol),
        ))
    }

    fn eq_within_tol(&self, rhs: &ApproxScalar) -> bool {
        let tol = self.tol.max(rhs.tol);
        (self.re - rhs.re).abs() <= tol && (self.im - rhs.im).abs() <= tol
    }
}

/// A scalar value: exact over a quadratic extension, or approximate complex.
#[derive(Clone, PartialEq, Debug)]
pub enum Scalar {
    Exact(ExactScalar),
    Approx(ApproxScalar),
}

impl Scalar {
    pub fn zero(ctx: &ScalarContext) -> Scalar {
        Scalar::from_rational(BigRational::zero(), ctx)
    }

    pub fn one(ctx: &ScalarContext) -> Scalar {
        Scalar::from_rational(BigRational::one(), ctx)
    }

    pub fn from_integer(k: i64, ctx: &ScalarContext) -> Scalar {
        Scalar::from_rational(BigRational::from_integer(BigInt::from(k)), ctx)
    }

    pub fn from_bigint(k: &BigInt, ctx: &ScalarContext) -> Scalar {
        Scalar::from_rational(BigRational::from_integer(k.clone()), ctx)
    }

    pub fn from_rational(r: BigRational, ctx: &ScalarContext) -> Scalar {
        match ctx {
            ScalarContext::Exact(rad) => Scalar::Exact(ExactScalar {
                a: r,
                b: BigRational::zero(),
                radicand: *rad,
            }),
            ScalarContext::Approx { tol } => {
                Scalar::Approx(ApproxScalar::new(rational_to_f64(&r), 0.0, *tol))
            }
        }
    }

    /// The element `b*sqrt(d)` of an exact context with a radicand.
    pub fn radical(b: BigRational, radicand: Radicand) -> Result<Scalar> {
        Ok(Scalar::Exact(ExactScalar::new(BigRational::zero(), b, radicand)?))
    }

    pub fn context(&self) -> ScalarContext {
        match self {
            Scalar::Exact(x) => ScalarContext::Exact(x.radicand),
            Scalar::Approx(x) => ScalarContext::Approx { tol: x.tol },
        }
    }

    pub fn as_exact(&self) -> Option<&ExactScalar> {
        match self {
            Scalar::Exact(x) => Some(x),
            Scalar::Approx(_) => None,
        }
    }

    pub fn as_approx(&self) -> Option<&ApproxScalar> {
        match self {
            Scalar::Approx(x) => Some(x),
            Scalar::Exact(_) => None,
        }
    }

    fn check_context(&self, rhs: &Scalar) -> Result<()> {
        self.context().merge(&rhs.context()).map(|_| ())
    }

    pub fn checked_add(&self, rhs: &Scalar) -> Result<Scalar> {
        self.check_context(rhs)?;
        Ok(match (self, rhs) {
            (Scalar::Exact(x), Scalar::Exact(y)) => Scalar::Exact(x.add(y)),
            (Scalar::Approx(x), Scalar::Approx(y)) => Scalar::Approx(x.add(y)),
            _ => unreachable!(),
        })
    }

    pub fn checked_sub(&self, rhs: &Scalar) -> Result<Scalar> {
        self.check_context(rhs)?;
        Ok(match (self, rhs) {
            (Scalar::Exact(x), Scalar::Exact(y)) => Scalar::Exact(x.sub(y)),
            (Scalar::Approx(x), Scalar::Approx(y)) => Scalar::Approx(x.sub(y)),
            _ => unreachable!(),
        })
    }

    pub fn checked_mul(&self, rhs: &Scalar) -> Result<Scalar> {
        self.check_context(rhs)?;
        Ok(match (self, rhs) {
            (Scalar::Exact(x), Scalar::Exact(y)) => Scalar::Exact(x.mul(y)),
            (Scalar::Approx(x), Scalar::Approx(y)) => Scalar::Approx(x.mul(y)),
            _ => unreachable!(),
        })
    }

    pub fn checked_div(&self, rhs: &Scalar) -> Result<Scalar> {
        self.check_context(rhs)?;
        match (self, rhs) {
            (Scalar::Exact(x), Scalar::Exact(y)) => Ok(Scalar::Exact(x.mul(&y.inv()?))),
            (Scalar::Approx(x), Scalar::Approx(y)) => Ok(Scalar::Approx(x.div(y)?)),
            _ => unreachable!(),
        }
    }

    pub fn neg(&self) -> Scalar {
        match self {
            Scalar::Exact(x) => Scalar::Exact(x.neg()),
            Scalar::Approx(x) => Scalar::Approx(ApproxScalar::new(-x.re, -x.im, x.tol)),
        }
    }

    /// Complex conjugate. Identity for real scalars (plain rationals and
    /// positive radicands); flips the radical part for negative radicands
    /// and the imaginary part in approximate mode.
    pub fn conj(&self) -> Scalar {
        match self {
            Scalar::Exact(x) => Scalar::Exact(x.conj()),
            Scalar::Approx(x) => Scalar::Approx(ApproxScalar::new(x.re, -x.im, x.tol)),
        }
    }

    /// `x^k` for `k >= 0`, with the convention `0^0 = 1`.
    pub fn pow_nonneg(&self, k: usize) -> Scalar {
        let ctx = self.context();
        let mut acc = Scalar::one(&ctx);
        let mut base = self.clone();
        let mut e = k;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.checked_mul(&base).expect("same context");
            }
            e >>= 1;
            if e > 0 {
                base = base.checked_mul(&base).expect("same context");
            }
        }
        acc
    }

    /// Multiply by an exact rational factor (exactly in exact mode, via the
    /// nearest double in approximate mode).
    pub fn scale(&self, r: &BigRational) -> Scalar {
        match self {
            Scalar::Exact(x) => Scalar::Exact(ExactScalar {
                a: &x.a * r,
                b: &x.b * r,
                radicand: x.radicand,
            }),
            Scalar::Approx(x) => {
                let f = rational_to_f64(r);
                Scalar::Approx(ApproxScalar::new(x.re * f, x.im * f, x.tol))
            }
        }
    }

    /// Zero test: exact structural zero, or within tolerance componentwise
    /// in approximate mode.
    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Exact(x) => x.is_zero(),
            Scalar::Approx(x) => x.re.abs() <= x.tol && x.im.abs() <= x.tol,
        }
    }

    /// Bit-exact zero test, used to skip terms that contribute nothing.
    pub(crate) fn is_strict_zero(&self) -> bool {
        match self {
            Scalar::Exact(x) => x.is_zero(),
            Scalar::Approx(x) => x.re == 0.0 && x.im == 0.0,
        }
    }

    /// Value equality: exact representations compare exactly, approximate
    /// ones within the (combined) tolerance. Scalars from incompatible
    /// contexts never compare equal.
    pub fn eq_value(&self, rhs: &Scalar) -> bool {
        match (self, rhs) {
            (Scalar::Exact(x), Scalar::Exact(y)) => x.radicand == y.radicand && x == y,
            (Scalar::Approx(x), Scalar::Approx(y)) => x.eq_within_tol(y),
            _ => false,
        }
    }

    /// Magnitude of an approximate scalar; `None` in exact mode.
    pub fn approx_magnitude(&self) -> Option<f64> {
        match self {
            Scalar::Approx(x) => Some(x.re.hypot(x.im)),
            Scalar::Exact(_) => None,
        }
    }

    /// Parse a scalar literal.
    ///
    /// Exact contexts use the grammar
    /// `scalar := term [('+'|'-') (rat '*' 'r' | 'r')]` with
    /// `term := rat | rat '*' 'r' | 'r' | '-' 'r'` and
    /// `rat := ['-'] digits ['/' digits]`, where `r` stands for the square
    /// root of the context radicand; whitespace is insignificant.
    /// Approximate contexts accept `re` or `re,im` as doubles.
    pub fn parse(text: &str, ctx: &ScalarContext) -> Result<Scalar> {
        match ctx {
            ScalarContext::Exact(rad) => parse_exact(text, *rad),
            ScalarContext::Approx { tol } => parse_approx(text, *tol),
        }
    }
}

fn rational_to_f64(r: &BigRational) -> f64 {
    r.to_f64().unwrap_or_else(|| {
        // Out of double range; overflow to the signed infinity.
        if r.is_negative() {
            f64::NEG_INFINITY
        } else {
            f64::INFINITY
        }
    })
}

impl std::ops::Add for &Scalar {
    type Output = Scalar;
    fn add(self, rhs: &Scalar) -> Scalar {
        self.checked_add(rhs).expect("scalar context mismatch")
    }
}

impl std::ops::Sub for &Scalar {
    type Output = Scalar;
    fn sub(self, rhs: &Scalar) -> Scalar {
        self.checked_sub(rhs).expect("scalar context mismatch")
    }
}

impl std::ops::Mul for &Scalar {
    type Output = Scalar;
    fn mul(self, rhs: &Scalar) -> Scalar {
        self.checked_mul(rhs).expect("scalar context mismatch")
    }
}

impl std::ops::Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        Scalar::neg(self)
    }
}

fn fmt_rational(r: &BigRational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

impl fmt::Display for Scalar {
    /// Canonical literal form; `parse` of the output reproduces the value.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Exact(x) => {
                if x.b.is_zero() {
                    return write!(f, "{}", fmt_rational(&x.a));
                }
                let b_abs = x.b.abs();
                let radical = if b_abs.is_one() {
                    "r".to_string()
                } else {
                    format!("{}*r", fmt_rational(&b_abs))
                };
                if x.a.is_zero() {
                    let sign = if x.b.is_negative() { "-" } else { "" };
                    write!(f, "{sign}{radical}")
                } else {
                    let sign = if x.b.is_negative() { "-" } else { "+" };
                    write!(f, "{}{sign}{radical}", fmt_rational(&x.a))
                }
            }
            Scalar::Approx(x) => {
                if x.im == 0.0 {
                    write!(f, "{}", x.re)
                } else {
                    write!(f, "{},{}", x.re, x.im)
                }
            }
        }
    }
}

struct Parser<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> Parser<'a> {
    fn new(text: &'a str) -> Self {
        Parser { bytes: text.as_bytes(), pos: 0 }
    }

    fn err(&self, msg: &str) -> Error {
        Error::Parse { pos: self.pos, msg: msg.to_string() }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&self) -> Option<u8> {
        self.bytes.get(self.pos).copied()
    }

    fn eat(&mut self, c: u8) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn digits(&mut self) -> Result<BigInt> {
        let start = self.pos;
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if self.pos == start {
            return Err(self.err("expected digits"));
        }
        let text = std::str::from_utf8(&self.bytes[start..self.pos]).expect("ascii digits");
        Ok(text.parse::<BigInt>().expect("digit run"))
    }

    /// `rat := ['-'] digits ['/' digits]`, denominator must be nonzero.
    fn rational(&mut self) -> Result<BigRational> {
        self.skip_ws();
        let negative = self.eat(b'-');
        self.skip_ws();
        let numer = self.digits()?;
        self.skip_ws();
        let denom = if self.eat(b'/') {
            self.skip_ws();
            let at = self.pos;
            let d = self.digits()?;
            if d.is_zero() {
                return Err(Error::Parse { pos: at, msg: "zero denominator".to_string() });
            }
            d
        } else {
            BigInt::one()
        };
        let signed = if negative { -numer } else { numer };
        Ok(BigRational::new(signed, denom))
    }
}

fn parse_exact(text: &str, radicand: Radicand) -> Result<Scalar> {
    let mut p = Parser::new(text);
    let mut a = BigRational::zero();
    let mut b = BigRational::zero();

    p.skip_ws();
    // First term: 'r', '-r', rat, or rat '*' 'r'.
    if p.eat(b'r') {
        b += BigRational::one();
    } else {
        let save = p.pos;
        if p.eat(b'-') {
            p.skip_ws();
            if p.eat(b'r') {
                b -= BigRational::one();
            } else {
                p.pos = save;
            }
        }
        if b.is_zero() && p.pos == save {
            let value = p.rational()?;
            p.skip_ws();
            if p.eat(b'*') {
                p.skip_ws();
                if !p.eat(b'r') {
                    return Err(p.err("expected 'r' after '*'"));
                }
                b += value;
            } else {
                a = value;
            }
        }
    }

    // Optional second term, always a radical part.
    p.skip_ws();
    if let Some(sep) = p.peek() {
        if sep == b'+' || sep == b'-' {
            p.pos += 1;
            let sign = if sep == b'-' { -BigRational::one() } else { BigRational::one() };
            p.skip_ws();
            if p.eat(b'r') {
                b += sign;
            } else {
                let value = p.rational()?;
                p.skip_ws();
                if !p.eat(b'*') {
                    return Err(p.err("expected '*' in radical term"));
                }
                p.skip_ws();
                if !p.eat(b'r') {
                    return Err(p.err("expected 'r' after '*'"));
                }
                b += sign * value;
            }
        }
    }

    p.skip_ws();
    if p.pos != p.bytes.len() {
        return Err(p.err("unexpected trailing input"));
    }
    if radicand == Radicand::None && !b.is_zero() {
        return Err(Error::RadicandRequired);
    }
    Ok(Scalar::Exact(ExactScalar { a, b, radicand }))
}

fn parse_approx(text: &str, tol: f64) -> Result<Scalar> {
    let trimmed = text.trim();
    if trimmed.is_empty() {
        return Err(Error::Parse { pos: 0, msg: "empty scalar literal".to_string() });
    }
    let (re_text, im_text) = match trimmed.split_once(',') {
        Some((r, i)) => (r, Some(i)),
        None => (trimmed, None),
    };
    let re: f64 = re_text.trim().parse().map_err(|_| Error::Parse {
        pos: 0,
        msg: format!("invalid float literal '{}'", re_text.trim()),
    })?;
    let im: f64 = match im_text {
        Some(i) => i.trim().parse().map_err(|_| Error::Parse {
            pos: re_text.len() + 1,
            msg: format!("invalid float literal '{}'", i.trim()),
        })?,
        None => 0.0,
    };
    Ok(Scalar::Approx(ApproxScalar::new(re, im, tol)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn sqrt3() -> ScalarContext {
        ScalarContext::Exact(Radicand::sqrt(3).unwrap())
    }

    fn sqrt_neg3() -> ScalarContext {
        ScalarContext::Exact(Radicand::sqrt(-3).unwrap())
    }

    fn s(text: &str, ctx: &ScalarContext) -> Scalar {
        Scalar::parse(text, ctx).unwrap()
    }

    #[test]
    fn radicand_validation() {
        assert!(Radicand::sqrt(3).is_ok());
        assert!(Radicand::sqrt(-1).is_ok());
        assert!(Radicand::sqrt(-3).is_ok());
        assert!(Radicand::sqrt(6).is_ok());
        assert!(Radicand::sqrt(0).is_err());
        assert!(Radicand::sqrt(1).is_err());
        assert!(Radicand::sqrt(4).is_err());
        assert!(Radicand::sqrt(12).is_err());
        assert!(Radicand::sqrt(-18).is_err());
    }

    #[test]
    fn addition_in_quadratic_field() {
        let ctx = sqrt3();
        let x = s("1/2", &ctx);
        let y = s("1/2+r", &ctx);
        assert!(x.checked_add(&y).unwrap().eq_value(&s("1+r", &ctx)));

        // Row-sum component of the 3x3 example matrix: the two conjugate
        // entries add to 1.
        let u = s("1/2-1/2*r", &ctx);
        let v = s("1/2+1/2*r", &ctx);
        assert!(u.checked_add(&v).unwrap().eq_value(&s("1", &ctx)));

        let zero = Scalar::zero(&ctx);
        assert!(x.checked_add(&zero).unwrap().eq_value(&x));
    }

    #[test]
    fn multiplication_in_quadratic_field() {
        let ctx = sqrt3();
        let r = s("r", &ctx);
        assert!(r.checked_mul(&r).unwrap().eq_value(&s("3", &ctx)));

        let u = s("1/2-1/2*r", &ctx);
        let v = s("1/2+1/2*r", &ctx);
        assert!(u.checked_mul(&v).unwrap().eq_value(&s("-1/2", &ctx)));

        let ctx_i = sqrt_neg3();
        let ri = s("r", &ctx_i);
        assert!(ri.checked_mul(&ri).unwrap().eq_value(&s("-3", &ctx_i)));
    }

    #[test]
    fn conjugation() {
        let ctx = sqrt_neg3();
        let omega = s("-1/2+1/2*r", &ctx);
        assert!(omega.conj().eq_value(&s("-1/2-1/2*r", &ctx)));

        let plain = ScalarContext::Exact(Radicand::plain());
        let x = s("5/7", &plain);
        assert!(x.conj().eq_value(&x));

        let real = sqrt3();
        let y = s("1+r", &real);
        assert!(y.conj().eq_value(&y));
    }

    #[test]
    fn powers() {
        let plain = ScalarContext::Exact(Radicand::plain());
        let zero = Scalar::zero(&plain);
        assert!(zero.pow_nonneg(0).eq_value(&Scalar::one(&plain)));
        assert!(zero.pow_nonneg(3).eq_value(&zero));

        let minus_one = Scalar::from_integer(-1, &plain);
        assert!(minus_one.pow_nonneg(5).eq_value(&minus_one));

        let ctx = sqrt3();
        let x = s("1/2+1/2*r", &ctx);
        assert!(x.pow_nonneg(2).eq_value(&s("1+1/2*r", &ctx)));
    }

    #[test]
    fn parsing_canonicalizes() {
        let plain = ScalarContext::Exact(Radicand::plain());
        assert_eq!(s("3/6", &plain).to_string(), "1/2");
        assert_eq!(s("-1", &plain).to_string(), "-1");
        assert_eq!(s(" - 4 / 6 ", &plain).to_string(), "-2/3");

        let ctx = sqrt3();
        assert_eq!(s("1/2-1/2*r", &ctx).to_string(), "1/2-1/2*r");
        assert_eq!(s("r", &ctx).to_string(), "r");
        assert_eq!(s("-r", &ctx).to_string(), "-r");
        assert_eq!(s("0*r", &ctx).to_string(), "0");
        assert_eq!(s("2*r", &ctx).to_string(), "2*r");
        assert_eq!(s("1 + r", &ctx).to_string(), "1+r");
    }

    #[test]
    fn parse_errors() {
        let plain = ScalarContext::Exact(Radicand::plain());
        let ctx = sqrt3();
        assert!(matches!(s_err("", &plain), Error::Parse { .. }));
        assert!(matches!(s_err("1//2", &plain), Error::Parse { .. }));
        assert!(matches!(s_err("1/0", &plain), Error::Parse { .. }));
        assert!(matches!(s_err("1+2", &ctx), Error::Parse { .. }));
        assert!(matches!(s_err("1+r junk", &ctx), Error::Parse { .. }));
        assert!(matches!(s_err("r", &plain), Error::RadicandRequired));
    }

    fn s_err(text: &str, ctx: &ScalarContext) -> Error {
        Scalar::parse(text, ctx).unwrap_err()
    }

    #[test]
    fn context_mismatch_is_rejected() {
        let a = s("1", &sqrt3());
        let b = s("1", &sqrt_neg3());
        assert!(matches!(a.checked_add(&b), Err(Error::ContextMismatch(_))));
        assert!(matches!(a.checked_mul(&b), Err(Error::ContextMismatch(_))));
        let c = Scalar::parse("1", &ScalarContext::approx_default()).unwrap();
        assert!(matches!(a.checked_add(&c), Err(Error::ContextMismatch(_))));
    }

    #[test]
    fn approx_literals_and_tolerance() {
        let ctx = ScalarContext::approx(1e-6);
        let x = Scalar::parse("1.5,-2.25", &ctx).unwrap();
        assert_eq!(x.to_string(), "1.5,-2.25");
        let y = Scalar::parse("1.5000001,-2.2499996", &ctx).unwrap();
        assert!(x.eq_value(&y));
        let z = Scalar::parse("1.51", &ctx).unwrap();
        assert!(!x.eq_value(&z));
        assert!(Scalar::parse("0.25", &ctx).unwrap().conj().eq_value(&Scalar::parse("0.25", &ctx).unwrap()));
    }

    #[test]
    fn division() {
        let ctx = sqrt3();
        let x = s("1/2+1/2*r", &ctx);
        let y = s("2-r", &ctx);
        let q = x.checked_div(&y).unwrap();
        assert!(q.checked_mul(&y).unwrap().eq_value(&x));
        assert!(matches!(
            x.checked_div(&Scalar::zero(&ctx)),
            Err(Error::DivisionByZero)
        ));
    }

    prop_compose! {
        fn arb_rational()(n in -50i64..=50, d in 1i64..=20) -> BigRational {
            BigRational::new(BigInt::from(n), BigInt::from(d))
        }
    }

    prop_compose! {
        fn arb_exact(d: i64)(a in arb_rational(), b in arb_rational()) -> Scalar {
            Scalar::Exact(ExactScalar::new(a, b, Radicand::sqrt(d).unwrap()).unwrap())
        }
    }

    fn arb_scalar() -> impl Strategy<Value = Scalar> {
        prop_oneof![arb_exact(-3), arb_exact(-1), arb_exact(2), arb_exact(3), arb_exact(5)]
    }

    fn arb_triple() -> impl Strategy<Value = (Scalar, Scalar, Scalar)> {
        proptest::sample::select(vec![-3i64, -1, 2, 3, 5])
            .prop_flat_map(|d| (arb_exact(d), arb_exact(d), arb_exact(d)))
    }

    proptest! {
        #[test]
        fn field_axioms((x, y, z) in arb_triple()) {
            let add = |a: &Scalar, b: &Scalar| a.checked_add(b).unwrap();
            let mul = |a: &Scalar, b: &Scalar| a.checked_mul(b).unwrap();

            prop_assert!(add(&add(&x, &y), &z).eq_value(&add(&x, &add(&y, &z))));
            prop_assert!(mul(&mul(&x, &y), &z).eq_value(&mul(&x, &mul(&y, &z))));
            prop_assert!(add(&x, &y).eq_value(&add(&y, &x)));
            prop_assert!(mul(&x, &y).eq_value(&mul(&y, &x)));
            prop_assert!(mul(&x, &add(&y, &z)).eq_value(&add(&mul(&x, &y), &mul(&x, &z))));

            let ctx = x.context();
            prop_assert!(add(&x, &x.neg()).eq_value(&Scalar::zero(&ctx)));
            if !x.is_zero() {
                let inv = Scalar::one(&ctx).checked_div(&x).unwrap();
                prop_assert!(mul(&x, &inv).eq_value(&Scalar::one(&ctx)));
            }
        }

        #[test]
        fn conj_is_involution_and_homomorphism((x, y, _z) in arb_triple()) {
            prop_assert!(x.conj().conj().eq_value(&x));
            prop_assert!(x.checked_mul(&y).unwrap().conj()
                .eq_value(&x.conj().checked_mul(&y.conj()).unwrap()));
            prop_assert!(x.checked_add(&y).unwrap().conj()
                .eq_value(&x.conj().checked_add(&y.conj()).unwrap()));
        }

        #[test]
        fn norm_is_rational_for_imaginary_radicands(x in arb_exact(-3)) {
            let norm = x.checked_mul(&x.conj()).unwrap();
            let exact = norm.as_exact().unwrap();
            prop_assert!(exact.radical_part().is_zero());
        }

        #[test]
        fn print_parse_round_trip(x in arb_scalar()) {
            let reparsed = Scalar::parse(&x.to_string(), &x.context()).unwrap();
            prop_assert!(reparsed.eq_value(&x));
            prop_assert_eq!(reparsed.to_string(), x.to_string());
        }
    }
}
