//! Exact rationals with an allocation-free fast path for machine integers.

use alloc::string::String;
use core::cmp::Ordering;
use core::fmt;
use core::hash::{Hash, Hasher};
use core::ops::{Add, AddAssign, Div, Mul, Neg, Sub, SubAssign};
use core::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::Error;

/// A rational number in lowest terms with positive denominator.
///
/// Integers that fit in an `i64` are stored inline, larger integers as a
/// `BigInt` (so integer arithmetic never computes a gcd), and everything
/// else as a `BigRational`. The representation is canonical.
#[derive(Clone)]
pub struct Rational(Repr);

#[derive(Clone)]
enum Repr {
    Small(i64),
    Int(BigInt),
    Frac(BigRational),
}

impl Rational {
    pub fn zero() -> Self {
        Rational(Repr::Small(0))
    }

    pub fn one() -> Self {
        Rational(Repr::Small(1))
    }

    pub fn from_int(n: i64) -> Self {
        Rational(Repr::Small(n))
    }

    /// `num/den`; panics if `den == 0`.
    pub fn new(num: i64, den: i64) -> Self {
        assert!(den != 0, "zero denominator");
        Self::from_big(BigRational::new(BigInt::from(num), BigInt::from(den)))
    }

    pub fn from_bigint(n: BigInt) -> Self {
        match n.to_i64() {
            Some(v) => Rational(Repr::Small(v)),
            None => Rational(Repr::Int(n)),
        }
    }

    pub fn from_big(r: BigRational) -> Self {
        if r.is_integer() {
            return Self::from_bigint(r.to_integer());
        }
        Rational(Repr::Frac(r))
    }

    pub fn to_big(&self) -> BigRational {
        match &self.0 {
            Repr::Small(v) => BigRational::from_integer(BigInt::from(*v)),
            Repr::Int(n) => BigRational::from_integer(n.clone()),
            Repr::Frac(r) => r.clone(),
        }
    }

    fn int_part(&self) -> Option<BigInt> {
        match &self.0 {
            Repr::Small(v) => Some(BigInt::from(*v)),
            Repr::Int(n) => Some(n.clone()),
            Repr::Frac(_) => None,
        }
    }

    pub fn numer(&self) -> BigInt {
        match &self.0 {
            Repr::Frac(r) => r.numer().clone(),
            _ => self.int_part().expect("integer"),
        }
    }

    pub fn denom(&self) -> BigInt {
        match &self.0 {
            Repr::Frac(r) => r.denom().clone(),
            _ => BigInt::one(),
        }
    }

    pub fn is_zero(&self) -> bool {
        matches!(self.0, Repr::Small(0))
    }

    pub fn is_one(&self) -> bool {
        matches!(self.0, Repr::Small(1))
    }

    pub fn is_integer(&self) -> bool {
        !matches!(self.0, Repr::Frac(_))
    }

    /// The value as an `i64` when it is an integer in range.
    pub fn as_i64(&self) -> Option<i64> {
        match self.0 {
            Repr::Small(v) => Some(v),
            _ => None,
        }
    }

    pub fn signum(&self) -> i32 {
        let s = match &self.0 {
            Repr::Small(v) => return v.signum() as i32,
            Repr::Int(n) => n.sign(),
            Repr::Frac(r) => r.numer().sign(),
        };
        match s {
            num_bigint::Sign::Minus => -1,
            num_bigint::Sign::NoSign => 0,
            num_bigint::Sign::Plus => 1,
        }
    }

    pub fn abs(&self) -> Self {
        if self.signum() < 0 {
            -self
        } else {
            self.clone()
        }
    }

    /// Multiplicative inverse; `None` for zero.
    pub fn recip(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        Some(Self::from_big(self.to_big().recip()))
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Rational::one();
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    /// Integer power allowing negative exponents; panics on `0^-k`.
    pub fn powi(&self, e: i32) -> Self {
        if e >= 0 {
            self.pow(e as u32)
        } else {
            self.recip().expect("zero to a negative power").pow(e.unsigned_abs())
        }
    }

    pub fn to_f64(&self) -> f64 {
        ratio_to_f64(&self.numer(), &self.denom())
    }

    /// Binomial coefficient `C(n, k)`.
    pub fn binomial(n: u32, k: u32) -> Self {
        let mut acc = BigInt::one();
        for i in 0..k {
            acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
        }
        Self::from_bigint(acc)
    }
}

fn ratio_to_f64(n: &BigInt, d: &BigInt) -> f64 {
    // Scale so both parts fit comfortably in f64 before dividing.
    let shift = (n.bits().max(d.bits()) as i64 - 900).max(0) as usize;
    let nf = (n >> shift).to_f64().unwrap_or(0.0);
    let df = (d >> shift).to_f64().unwrap_or(1.0);
    if df == 0.0 {
        return if nf.is_sign_negative() { f64::NEG_INFINITY } else { f64::INFINITY };
    }
    nf / df
}

impl Default for Rational {
    fn default() -> Self {
        Rational::zero()
    }
}

impl From<i64> for Rational {
    fn from(v: i64) -> Self {
        Rational::from_int(v)
    }
}

impl PartialEq for Rational {
    fn eq(&self, other: &Self) -> bool {
        match (&self.0, &other.0) {
            (Repr::Small(a), Repr::Small(b)) => a == b,
            (Repr::Int(a), Repr::Int(b)) => a == b,
            (Repr::Frac(a), Repr::Frac(b)) => a == b,
            _ => false,
        }
    }
}

impl Eq for Rational {}

impl Hash for Rational {
    fn hash<H: Hasher>(&self, state: &mut H) {
        match &self.0 {
            Repr::Small(v) => {
                0u8.hash(state);
                v.hash(state);
            }
            Repr::Int(n) => {
                1u8.hash(state);
                n.hash(state);
            }
            Repr::Frac(r) => {
                2u8.hash(state);
                r.numer().hash(state);
                r.denom().hash(state);
            }
        }
    }
}

impl PartialOrd for Rational {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Rational {
    fn cmp(&self, other: &Self) -> Ordering {
        match (&self.0, &other.0) {
            (Repr::Small(a), Repr::Small(b)) => a.cmp(b),
            _ => match (self.int_part(), other.int_part()) {
                (Some(a), Some(b)) => a.cmp(&b),
                _ => self.to_big().cmp(&other.to_big()),
            },
        }
    }
}

impl<'a> Add<&'a Rational> for &'a Rational {
    type Output = Rational;
    fn add(self, rhs: &Rational) -> Rational {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl<'a> Sub<&'a Rational> for &'a Rational {
    type Output = Rational;
    fn sub(self, rhs: &Rational) -> Rational {
        let mut out = self.clone();
        out -= rhs;
        out
    }
}

impl<'a> Mul<&'a Rational> for &'a Rational {
    type Output = Rational;
    fn mul(self, rhs: &Rational) -> Rational {
        match (&self.0, &rhs.0) {
            (Repr::Small(a), Repr::Small(b)) => match a.checked_mul(*b) {
                Some(p) => Rational(Repr::Small(p)),
                None => Rational::from_bigint(BigInt::from(*a) * BigInt::from(*b)),
            },
            (Repr::Small(0), _) | (_, Repr::Small(0)) => Rational::zero(),
            (Repr::Small(a), Repr::Int(b)) | (Repr::Int(b), Repr::Small(a)) => Rational::from_bigint(b * *a),
            (Repr::Int(a), Repr::Int(b)) => Rational::from_bigint(a * b),
            _ => Rational::from_big(self.to_big() * rhs.to_big()),
        }
    }
}

impl<'a> Div<&'a Rational> for &'a Rational {
    type Output = Rational;
    fn div(self, rhs: &Rational) -> Rational {
        assert!(!rhs.is_zero(), "division by zero");
        if rhs.is_one() {
            return self.clone();
        }
        if let (Repr::Small(a), Repr::Small(b)) = (&self.0, &rhs.0) {
            if a % b == 0 {
                if let Some(q) = a.checked_div(*b) {
                    return Rational(Repr::Small(q));
                }
            }
        }
        Rational::from_big(self.to_big() / rhs.to_big())
    }
}

impl Neg for &Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        match &self.0 {
            Repr::Small(v) => match v.checked_neg() {
                Some(n) => Rational(Repr::Small(n)),
                None => Rational::from_bigint(-BigInt::from(*v)),
            },
            Repr::Int(n) => Rational::from_bigint(-n),
            Repr::Frac(r) => Rational(Repr::Frac(-r.clone())),
        }
    }
}

impl Neg for Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        -&self
    }
}

macro_rules! owned_binop {
    ($tr:ident, $f:ident) => {
        impl $tr<Rational> for Rational {
            type Output = Rational;
            fn $f(self, rhs: Rational) -> Rational {
                (&self).$f(&rhs)
            }
        }
        impl<'a> $tr<&'a Rational> for Rational {
            type Output = Rational;
            fn $f(self, rhs: &'a Rational) -> Rational {
                (&self).$f(rhs)
            }
        }
    };
}
owned_binop!(Add, add);
owned_binop!(Sub, sub);
owned_binop!(Mul, mul);
owned_binop!(Div, div);

impl Rational {
    /// Restores the canonical variant after in-place integer arithmetic.
    fn normalize_int(&mut self) {
        if let Repr::Int(n) = &self.0 {
            if let Some(v) = n.to_i64() {
                self.0 = Repr::Small(v);
            }
        }
    }

    fn add_signed(&mut self, rhs: &Rational, negate: bool) {
        match (&mut self.0, &rhs.0) {
            (Repr::Small(a), Repr::Small(b)) => {
                let r = if negate { a.checked_sub(*b) } else { a.checked_add(*b) };
                match r {
                    Some(s) => *a = s,
                    None => {
                        let (x, y) = (BigInt::from(*a), BigInt::from(*b));
                        *self = Rational::from_bigint(if negate { x - y } else { x + y });
                    }
                }
            }
            (Repr::Int(a), Repr::Small(b)) => {
                if negate {
                    *a -= *b;
                } else {
                    *a += *b;
                }
                self.normalize_int();
            }
            (Repr::Int(a), Repr::Int(b)) => {
                if negate {
                    *a -= b;
                } else {
                    *a += b;
                }
                self.normalize_int();
            }
            (Repr::Small(a), Repr::Int(b)) => {
                let x = BigInt::from(*a);
                *self = Rational::from_bigint(if negate { x - b } else { x + b });
            }
            _ => {
                let (x, y) = (self.to_big(), rhs.to_big());
                *self = Rational::from_big(if negate { x - y } else { x + y });
            }
        }
    }

    /// `self += a * b`, allocation-free when everything is a small integer.
    #[inline]
    pub fn add_product(&mut self, a: &Rational, b: &Rational) {
        if let (Repr::Small(s), Repr::Small(x), Repr::Small(y)) = (&mut self.0, &a.0, &b.0) {
            if let Some(p) = x.checked_mul(*y) {
                if let Some(t) = s.checked_add(p) {
                    *s = t;
                    return;
                }
            }
        }
        let p = a * b;
        *self += &p;
    }
}

impl AddAssign<&Rational> for Rational {
    fn add_assign(&mut self, rhs: &Rational) {
        self.add_signed(rhs, false);
    }
}

impl SubAssign<&Rational> for Rational {
    fn sub_assign(&mut self, rhs: &Rational) {
        self.add_signed(rhs, true);
    }
}

impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.0 {
            Repr::Small(v) => write!(f, "{v}"),
            Repr::Int(n) => write!(f, "{n}"),
            Repr::Frac(r) => write!(f, "{}/{}", r.numer(), r.denom()),
        }
    }
}

impl fmt::Debug for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for Rational {
    type Err = Error;

    /// Accepts `p`, `-p`, `p/q` with decimal integers.
    fn from_str(s: &str) -> Result<Self, Error> {
        let bad = || Error::BadScalar(String::from(s));
        let t = s.trim();
        let (n, d) = match t.split_once('/') {
            Some((n, d)) => (n.trim(), Some(d.trim())),
            None => (t, None),
        };
        let num = BigInt::from_str(n).map_err(|_| bad())?;
        let den = match d {
            Some(d) => {
                if d.starts_with(['+', '-']) {
                    return Err(bad());
                }
                BigInt::from_str(d).map_err(|_| bad())?
            }
            None => BigInt::one(),
        };
        if den.is_zero() {
            return Err(bad());
        }
        Ok(Rational::from_big(BigRational::new(num, den)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reduced_and_canonical() {
        let a = Rational::new(6, -4);
        assert_eq!(a.numer(), BigInt::from(-3));
        assert_eq!(a.denom(), BigInt::from(2));
        assert_eq!(Rational::new(4, 2), Rational::from_int(2));
        assert_eq!(Rational::new(0, 5), Rational::zero());
    }

    #[test]
    fn overflow_promotes() {
        let m = Rational::from_int(i64::MAX);
        let s = &m + &Rational::one();
        assert_eq!(s.numer(), BigInt::from(i64::MAX) + 1);
        let back = &s - &Rational::one();
        assert_eq!(back, m);
        assert_eq!(back.as_i64(), Some(i64::MAX));
        let p = &m * &m;
        assert_eq!(&p / &m, m);
        assert_eq!(-Rational::from_int(i64::MIN), Rational::from_bigint(-BigInt::from(i64::MIN)));
    }

    #[test]
    fn parse_and_print() {
        for s in ["0", "7", "-3/2", "12345678901234567890123/7"] {
            let r: Rational = s.parse().unwrap();
            assert_eq!(alloc::format!("{r}"), s);
        }
        assert_eq!("4/6".parse::<Rational>().unwrap(), Rational::new(2, 3));
        assert!("1/0".parse::<Rational>().is_err());
        assert!("1/-2".parse::<Rational>().is_err());
        assert!("x".parse::<Rational>().is_err());
    }

    #[test]
    fn add_product_matches_plain_ops() {
        let mut acc = Rational::from_int(i64::MAX - 1);
        acc.add_product(&Rational::from_int(2), &Rational::from_int(3));
        assert_eq!(acc, &Rational::from_int(i64::MAX - 1) + &Rational::from_int(6));
        let mut q = Rational::new(1, 3);
        q.add_product(&Rational::new(1, 2), &Rational::new(2, 3));
        assert_eq!(q, Rational::new(2, 3));
    }

    #[test]
    fn big_integer_path() {
        let big = Rational::from_bigint(BigInt::from(10).pow(30));
        let mut acc = big.clone();
        acc.add_product(&big, &Rational::from_int(-1));
        assert!(acc.is_zero());
        assert_eq!(acc.as_i64(), Some(0));
        let half = Rational::new(1, 2);
        assert_eq!(&(&big * &half) * &Rational::from_int(2), big);
        assert!(Rational::from_bigint(BigInt::from(-5)).as_i64() == Some(-5));
        assert!(big > Rational::from_int(i64::MAX) && -&big < Rational::new(-1, 3));
        assert_eq!(alloc::format!("{}", -&big), "-1000000000000000000000000000000");
    }

    #[test]
    fn binomials() {
        assert_eq!(Rational::binomial(5, 2), Rational::from_int(10));
        assert_eq!(Rational::binomial(7, 0), Rational::one());
    }
}
