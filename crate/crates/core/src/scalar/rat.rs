//! Arbitrary-precision rationals.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

/// An exact rational number in lowest terms with positive denominator.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Rat(BigRational);

impl Rat {
    pub fn zero() -> Rat {
        Rat(BigRational::zero())
    }

    pub fn one() -> Rat {
        Rat(BigRational::one())
    }

    pub fn int(n: i64) -> Rat {
        Rat(BigRational::from_integer(BigInt::from(n)))
    }

    /// `n / d`; panics if `d == 0`.
    pub fn frac(n: i64, d: i64) -> Rat {
        Rat(BigRational::new(BigInt::from(n), BigInt::from(d)))
    }

    pub fn from_bigint(n: BigInt) -> Rat {
        Rat(BigRational::from_integer(n))
    }

    pub fn from_parts(n: BigInt, d: BigInt) -> Rat {
        Rat(BigRational::new(n, d))
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.0.is_one()
    }

    pub fn is_integer(&self) -> bool {
        self.0.is_integer()
    }

    pub fn is_negative(&self) -> bool {
        self.0.is_negative()
    }

    pub fn is_positive(&self) -> bool {
        self.0.is_positive()
    }

    pub fn numer(&self) -> &BigInt {
        self.0.numer()
    }

    pub fn denom(&self) -> &BigInt {
        self.0.denom()
    }

    pub fn abs(&self) -> Rat {
        Rat(self.0.abs())
    }

    pub fn signum(&self) -> i32 {
        if self.0.is_zero() {
            0
        } else if self.0.is_positive() {
            1
        } else {
            -1
        }
    }

    /// `None` when `self == 0`.
    pub fn recip(&self) -> Option<Rat> {
        if self.is_zero() {
            None
        } else {
            Some(Rat(self.0.recip()))
        }
    }

    pub fn pow(&self, e: i32) -> Rat {
        Rat(num_traits::Pow::pow(&self.0, e))
    }

    /// Exact square root when `self` is the square of a rational.
    pub fn sqrt_exact(&self) -> Option<Rat> {
        if self.is_negative() {
            return None;
        }
        let n = self.numer().sqrt();
        let d = self.denom().sqrt();
        if &(&n * &n) == self.numer() && &(&d * &d) == self.denom() {
            Some(Rat::from_parts(n, d))
        } else {
            None
        }
    }

    /// Splits `self = s^2 * k` with `k` a squarefree integer and `s > 0` rational.
    /// Trial division only: large prime factors stay in `k`.
    pub fn squarefree_split(&self) -> (Rat, BigInt) {
        if self.is_zero() {
            return (Rat::zero(), BigInt::zero());
        }
        // x = n/d = (n*d)/d^2
        let mut m = (self.numer() * self.denom()).abs();
        let sign = if self.is_negative() { -1 } else { 1 };
        let mut out = BigInt::one();
        let mut p = BigInt::from(2u32);
        let limit = BigInt::from(100_000u32);
        while &p * &p <= m && p < limit {
            let sq = &p * &p;
            while (&m % &sq).is_zero() {
                m /= &sq;
                out *= &p;
            }
            p += 1u32;
        }
        let s = Rat::from_parts(out, self.denom().clone());
        (s, m * sign)
    }

    pub fn to_f64(&self) -> f64 {
        self.0.to_f64().unwrap_or(f64::NAN)
    }

    pub fn lcm_denoms<'a>(it: impl IntoIterator<Item = &'a Rat>) -> BigInt {
        it.into_iter().fold(BigInt::one(), |acc, r| acc.lcm(r.denom()))
    }

    pub fn gcd_numers<'a>(it: impl IntoIterator<Item = &'a Rat>) -> BigInt {
        it.into_iter().fold(BigInt::zero(), |acc, r| acc.gcd(r.numer()))
    }

    /// Parses `n`, `-n`, or `n/d`.
    pub fn parse(s: &str) -> Option<Rat> {
        let s = s.trim();
        let (n, d) = match s.split_once('/') {
            Some((n, d)) => (n.trim(), d.trim()),
            None => (s, "1"),
        };
        let n: BigInt = n.parse().ok()?;
        let d: BigInt = d.parse().ok()?;
        if d.is_zero() {
            return None;
        }
        Some(Rat::from_parts(n, d))
    }
}

impl From<i64> for Rat {
    fn from(n: i64) -> Rat {
        Rat::int(n)
    }
}

impl fmt::Display for Rat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_integer() {
            write!(f, "{}", self.0.numer())
        } else {
            write!(f, "{}/{}", self.0.numer(), self.0.denom())
        }
    }
}

impl fmt::Debug for Rat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

macro_rules! binop {
    ($tr:ident, $m:ident) => {
        impl $tr<&Rat> for &Rat {
            type Output = Rat;
            fn $m(self, o: &Rat) -> Rat {
                Rat((&self.0).$m(&o.0))
            }
        }
        impl $tr<Rat> for Rat {
            type Output = Rat;
            fn $m(self, o: Rat) -> Rat {
                Rat(self.0.$m(o.0))
            }
        }
        impl $tr<&Rat> for Rat {
            type Output = Rat;
            fn $m(self, o: &Rat) -> Rat {
                Rat(self.0.$m(&o.0))
            }
        }
    };
}

binop!(Add, add);
binop!(Sub, sub);
binop!(Mul, mul);
binop!(Div, div);

impl Neg for Rat {
    type Output = Rat;
    fn neg(self) -> Rat {
        Rat(-self.0)
    }
}

impl Neg for &Rat {
    type Output = Rat;
    fn neg(self) -> Rat {
        Rat(-&self.0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn squarefree_split_examples() {
        let (s, k) = Rat::int(8).squarefree_split();
        assert_eq!((s, k), (Rat::int(2), BigInt::from(2)));
        let (s, k) = Rat::frac(-9, 2).squarefree_split();
        // -9/2 = (3/2)^2 * (-2)
        assert_eq!((s, k), (Rat::frac(3, 2), BigInt::from(-2)));
    }

    #[test]
    fn sqrt_exact_examples() {
        assert_eq!(Rat::frac(9, 4).sqrt_exact(), Some(Rat::frac(3, 2)));
        assert_eq!(Rat::int(2).sqrt_exact(), None);
        assert_eq!(Rat::int(-4).sqrt_exact(), None);
    }

    #[test]
    fn parse_and_display() {
        assert_eq!(Rat::parse("-3/6").unwrap().to_string(), "-1/2");
        assert_eq!(Rat::parse(" 4 ").unwrap().to_string(), "4");
        assert!(Rat::parse("1/0").is_none());
    }
}
