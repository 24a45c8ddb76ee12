//! Exact coefficient fields.
//!
//! Two families are provided: arbitrary-precision rationals ([`Rational`]) and
//! prime fields [`Fp<P>`] with a compile-time modulus. Characteristics 2 and 3
//! are rejected, since the Jordan constructions need 1/2 and the Lie axioms
//! are only used with 1/6 available.

use std::fmt;
use std::hash::Hash;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// An exact field usable as the coefficient domain of every algebra here.
pub trait Field:
    Clone
    + PartialEq
    + Eq
    + Hash
    + fmt::Debug
    + fmt::Display
    + Send
    + Sync
    + 'static
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
{
    /// 0 for the rationals, `p` for `F_p`.
    const CHARACTERISTIC: u64;

    fn zero() -> Self;
    fn one() -> Self;
    fn from_i64(v: i64) -> Self;
    fn is_zero(&self) -> bool;
    /// Multiplicative inverse; `None` for zero.
    fn inv(&self) -> Option<Self>;
    /// Parse the textual form (`p/q`, `-7`, ...).
    fn parse(s: &str) -> Result<Self>;
    /// Short field label used in reports, e.g. `Q` or `F7`.
    fn label() -> String;

    fn is_one(&self) -> bool {
        *self == Self::one()
    }

    /// True when the value is printed with a leading minus sign.
    fn is_negative_display(&self) -> bool {
        false
    }
}

/// Arbitrary-precision rational number.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Rational(pub BigRational);

impl Rational {
    pub fn new(num: i64, den: i64) -> Self {
        Rational(BigRational::new(BigInt::from(num), BigInt::from(den)))
    }
}

impl fmt::Debug for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.denom().is_one() {
            write!(f, "{}", self.0.numer())
        } else {
            write!(f, "{}/{}", self.0.numer(), self.0.denom())
        }
    }
}

impl Add for Rational {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        Rational(self.0 + o.0)
    }
}
impl Sub for Rational {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        Rational(self.0 - o.0)
    }
}
impl Mul for Rational {
    type Output = Self;
    fn mul(self, o: Self) -> Self {
        Rational(self.0 * o.0)
    }
}
impl Neg for Rational {
    type Output = Self;
    fn neg(self) -> Self {
        Rational(-self.0)
    }
}

fn parse_ratio(s: &str) -> Result<(BigInt, BigInt)> {
    let s = s.trim();
    let bad = || Error::Parse(format!("invalid scalar `{s}`"));
    let (n, d) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let valid = |t: &str| {
        let digits = t.strip_prefix('-').or_else(|| t.strip_prefix('+')).unwrap_or(t);
        !digits.is_empty() && digits.bytes().all(|b| b.is_ascii_digit())
    };
    if !valid(n) || !valid(d) || d.starts_with('-') || d.starts_with('+') {
        return Err(bad());
    }
    let num = BigInt::from_str(n.trim_start_matches('+')).map_err(|_| bad())?;
    let den = BigInt::from_str(d).map_err(|_| bad())?;
    if den.is_zero() {
        return Err(Error::Parse(format!("zero denominator in `{s}`")));
    }
    Ok((num, den))
}

impl Field for Rational {
    const CHARACTERISTIC: u64 = 0;

    fn zero() -> Self {
        Rational(BigRational::zero())
    }
    fn one() -> Self {
        Rational(BigRational::one())
    }
    fn from_i64(v: i64) -> Self {
        Rational(BigRational::from_integer(BigInt::from(v)))
    }
    fn is_zero(&self) -> bool {
        self.0.is_zero()
    }
    fn inv(&self) -> Option<Self> {
        if self.0.is_zero() {
            None
        } else {
            Some(Rational(self.0.recip()))
        }
    }
    fn parse(s: &str) -> Result<Self> {
        let (n, d) = parse_ratio(s)?;
        Ok(Rational(BigRational::new(n, d)))
    }
    fn label() -> String {
        "Q".to_string()
    }
    fn is_one(&self) -> bool {
        self.0.is_one()
    }
    fn is_negative_display(&self) -> bool {
        self.0.is_negative()
    }
}

const fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= p {
        if p % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// Element of the prime field `F_P`, stored as its least non-negative residue.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Fp<const P: u64>(u64);

impl<const P: u64> Fp<P> {
    const VALID: () = assert!(
        P >= 5 && P < (1 << 32) && is_prime(P),
        "modulus must be a prime between 5 and 2^32"
    );

    pub fn new(v: i64) -> Self {
        #[allow(clippy::let_unit_value)]
        let _ = Self::VALID;
        Fp(v.rem_euclid(P as i64) as u64)
    }

    pub fn value(self) -> u64 {
        self.0
    }

    fn pow(self, mut e: u64) -> Self {
        let mut base = self.0;
        let mut acc = 1u64;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * base % P;
            }
            base = base * base % P;
            e >>= 1;
        }
        Fp(acc)
    }
}

impl<const P: u64> fmt::Debug for Fp<P> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}
impl<const P: u64> fmt::Display for Fp<P> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl<const P: u64> Add for Fp<P> {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        Fp((self.0 + o.0) % P)
    }
}
impl<const P: u64> Sub for Fp<P> {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        Fp((self.0 + P - o.0) % P)
    }
}
impl<const P: u64> Mul for Fp<P> {
    type Output = Self;
    fn mul(self, o: Self) -> Self {
        Fp(self.0 * o.0 % P)
    }
}
impl<const P: u64> Neg for Fp<P> {
    type Output = Self;
    fn neg(self) -> Self {
        Fp((P - self.0) % P)
    }
}

impl<const P: u64> Field for Fp<P> {
    const CHARACTERISTIC: u64 = P;

    fn zero() -> Self {
        Fp::new(0)
    }
    fn one() -> Self {
        Fp::new(1)
    }
    fn from_i64(v: i64) -> Self {
        Fp::new(v)
    }
    fn is_zero(&self) -> bool {
        self.0 == 0
    }
    fn inv(&self) -> Option<Self> {
        if self.0 == 0 {
            None
        } else {
            Some(self.pow(P - 2))
        }
    }
    fn parse(s: &str) -> Result<Self> {
        let (n, d) = parse_ratio(s)?;
        let p = BigInt::from(P);
        let reduce = |v: BigInt| -> u64 {
            let r = ((v % &p) + &p) % &p;
            u64::try_from(r).expect("residue fits in u64")
        };
        let den = Fp::<P>(reduce(d));
        let inv = den
            .inv()
            .ok_or_else(|| Error::Parse(format!("denominator of `{s}` vanishes mod {P}")))?;
        Ok(Fp::<P>(reduce(n)) * inv)
    }
    fn label() -> String {
        format!("F{P}")
    }
}

/// Runtime description of a coefficient field, as chosen on the command line.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FieldSpec {
    Rationals,
    Prime(u64),
}

/// Moduli for which `Fp` is instantiated by [`with_field!`](crate::with_field).
pub const SUPPORTED_PRIMES: &[u64] = &[5, 7, 11, 13, 17, 19, 23, 29, 31, 101, 32003, 65521, 2147483647];

impl FieldSpec {
    pub fn label(&self) -> String {
        match self {
            FieldSpec::Rationals => "Q".into(),
            FieldSpec::Prime(p) => format!("F{p}"),
        }
    }
}

impl FromStr for FieldSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim();
        if t.eq_ignore_ascii_case("q") || t.eq_ignore_ascii_case("rationals") {
            return Ok(FieldSpec::Rationals);
        }
        let digits = t
            .strip_prefix('F')
            .or_else(|| t.strip_prefix('f'))
            .or_else(|| t.strip_prefix("GF"))
            .ok_or_else(|| Error::Config(format!("unknown field `{s}` (use Q or Fp)")))?;
        let p: u64 = digits
            .parse()
            .map_err(|_| Error::Config(format!("unknown field `{s}`")))?;
        if p == 2 || p == 3 {
            return Err(Error::Config(format!(
                "characteristic {p} is not supported; need characteristic 0 or p >= 5"
            )));
        }
        if !is_prime(p) {
            return Err(Error::Config(format!("{p} is not prime")));
        }
        if !SUPPORTED_PRIMES.contains(&p) {
            return Err(Error::Config(format!(
                "F{p} is not instantiated; supported primes: {SUPPORTED_PRIMES:?}"
            )));
        }
        Ok(FieldSpec::Prime(p))
    }
}

/// Run `$body` with the type alias `$F` bound to the field chosen by `$spec`.
#[macro_export]
macro_rules! with_field {
    ($spec:expr, $F:ident => $body:expr) => {{
        use $crate::scalar::{FieldSpec, Fp, Rational};
        match $spec {
            FieldSpec::Rationals => {
                type $F = Rational;
                $body
            }
            FieldSpec::Prime(5) => { type $F = Fp<5>; $body }
            FieldSpec::Prime(7) => { type $F = Fp<7>; $body }
            FieldSpec::Prime(11) => { type $F = Fp<11>; $body }
            FieldSpec::Prime(13) => { type $F = Fp<13>; $body }
            FieldSpec::Prime(17) => { type $F = Fp<17>; $body }
            FieldSpec::Prime(19) => { type $F = Fp<19>; $body }
            FieldSpec::Prime(23) => { type $F = Fp<23>; $body }
            FieldSpec::Prime(29) => { type $F = Fp<29>; $body }
            FieldSpec::Prime(31) => { type $F = Fp<31>; $body }
            FieldSpec::Prime(101) => { type $F = Fp<101>; $body }
            FieldSpec::Prime(32003) => { type $F = Fp<32003>; $body }
            FieldSpec::Prime(65521) => { type $F = Fp<65521>; $body }
            FieldSpec::Prime(2147483647) => { type $F = Fp<2147483647>; $body }
            FieldSpec::Prime(p) => panic!("F{p} is not instantiated"),
        }
    }};
}
