//! Rational functions in normal form.

use super::poly::Poly;
use super::rat::Rat;
use super::var::Var;
use num_bigint::BigInt;
use std::collections::HashMap;
use std::fmt;

/// `num / den` with `gcd(num, den) = 1` and `den` an integer polynomial of
/// unit content and positive leading coefficient. Zero is `0 / 1`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RatFunc {
    num: Poly,
    den: Poly,
}

impl Default for RatFunc {
    fn default() -> RatFunc {
        RatFunc::zero()
    }
}

impl RatFunc {
    pub fn zero() -> RatFunc {
        RatFunc { num: Poly::zero(), den: Poly::one() }
    }

    pub fn one() -> RatFunc {
        RatFunc::from_poly(Poly::one())
    }

    pub fn from_rat(c: Rat) -> RatFunc {
        RatFunc::from_poly(Poly::constant(c))
    }

    pub fn int(n: i64) -> RatFunc {
        RatFunc::from_rat(Rat::int(n))
    }

    pub fn var(v: Var) -> RatFunc {
        RatFunc::from_poly(Poly::var(v))
    }

    pub fn from_poly(p: Poly) -> RatFunc {
        RatFunc { num: p, den: Poly::one() }
    }

    /// `None` when `den == 0`.
    pub fn new(num: Poly, den: Poly) -> Option<RatFunc> {
        if den.is_zero() {
            return None;
        }
        if num.is_zero() {
            return Some(RatFunc::zero());
        }
        if let Some(c) = den.constant_value() {
            return Some(RatFunc::from_poly(num.scale(&c.recip().unwrap())));
        }
        let g = num.gcd(&den);
        let (num, den) = if g.is_one() { (num, den) } else { (num.div_exact(&g).unwrap(), den.div_exact(&g).unwrap()) };
        let (c, den) = den.integer_primitive();
        let num = num.scale(&c.recip().unwrap());
        if let Some(k) = den.constant_value() {
            return Some(RatFunc::from_poly(num.scale(&k.recip().unwrap())));
        }
        Some(RatFunc { num, den })
    }

    pub fn num(&self) -> &Poly {
        &self.num
    }

    pub fn den(&self) -> &Poly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.den.is_one() && self.num.is_one()
    }

    pub fn is_poly(&self) -> bool {
        self.den.is_one()
    }

    pub fn constant_value(&self) -> Option<Rat> {
        if self.den.is_one() {
            self.num.constant_value()
        } else {
            None
        }
    }

    pub fn contains_var(&self, v: Var) -> bool {
        self.num.contains_var(v) || self.den.contains_var(v)
    }

    pub fn vars(&self) -> std::collections::BTreeSet<Var> {
        let mut s = self.num.vars();
        s.extend(self.den.vars());
        s
    }

    pub fn add(&self, o: &RatFunc) -> RatFunc {
        if self.is_zero() {
            return o.clone();
        }
        if o.is_zero() {
            return self.clone();
        }
        if self.den.is_one() && o.den.is_one() {
            return RatFunc::from_poly(self.num.add(&o.num));
        }
        if self.den == o.den {
            return RatFunc::new(self.num.add(&o.num), self.den.clone()).unwrap();
        }
        RatFunc::new(self.num.mul(&o.den).add(&o.num.mul(&self.den)), self.den.mul(&o.den)).unwrap()
    }

    pub fn neg(&self) -> RatFunc {
        RatFunc { num: self.num.neg(), den: self.den.clone() }
    }

    pub fn sub(&self, o: &RatFunc) -> RatFunc {
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &RatFunc) -> RatFunc {
        if self.is_zero() || o.is_zero() {
            return RatFunc::zero();
        }
        if self.den.is_one() && o.den.is_one() {
            return RatFunc::from_poly(self.num.mul(&o.num));
        }
        RatFunc::new(self.num.mul(&o.num), self.den.mul(&o.den)).unwrap()
    }

    pub fn scale(&self, c: &Rat) -> RatFunc {
        if c.is_zero() {
            return RatFunc::zero();
        }
        RatFunc { num: self.num.scale(c), den: self.den.clone() }
    }

    /// `None` when `self == 0`.
    pub fn inv(&self) -> Option<RatFunc> {
        if self.is_zero() {
            return None;
        }
        RatFunc::new(self.den.clone(), self.num.clone())
    }

    pub fn div(&self, o: &RatFunc) -> Option<RatFunc> {
        Some(self.mul(&o.inv()?))
    }

    pub fn pow(&self, e: i32) -> Option<RatFunc> {
        if e < 0 {
            return self.inv()?.pow(-e);
        }
        let e = e as u32;
        Some(RatFunc { num: self.num.pow(e), den: self.den.pow(e) })
    }

    /// Binds variables to rationals. Errors when the denominator vanishes.
    pub fn eval_partial(&self, vals: &HashMap<Var, Rat>) -> Option<RatFunc> {
        RatFunc::new(self.num.eval_partial(vals), self.den.eval_partial(vals))
    }

    /// Replaces `v` by a rational function.
    pub fn substitute(&self, v: Var, val: &RatFunc) -> Option<RatFunc> {
        if !self.contains_var(v) {
            return Some(self.clone());
        }
        let n = compose(&self.num, v, val);
        let d = compose(&self.den, v, val);
        n.div(&d)
    }

    /// Factor `l` such that `l * num` has integer coefficients.
    fn num_denominator_lcm(&self) -> BigInt {
        Rat::lcm_denoms(self.num.terms().map(|(_, c)| c))
    }
}

fn compose(p: &Poly, v: Var, val: &RatFunc) -> RatFunc {
    let cs = p.coeffs_in(v);
    let mut r = RatFunc::zero();
    for c in cs.iter().rev() {
        r = r.mul(val).add(&RatFunc::from_poly(c.clone()));
    }
    r
}

fn paren(p: &Poly, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    if p.is_atomic() {
        write!(f, "{p}")
    } else {
        write!(f, "({p})")
    }
}

impl fmt::Display for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            return write!(f, "{}", self.num);
        }
        let l = Rat::from_bigint(self.num_denominator_lcm());
        let n = self.num.scale(&l);
        let d = self.den.scale(&l);
        if n.leading_is_negative() && n.len() == 1 {
            f.write_str("-")?;
            paren(&n.neg(), f)?;
        } else {
            paren(&n, f)?;
        }
        f.write_str("/")?;
        paren(&d, f)
    }
}

impl fmt::Debug for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reduces_and_normalises() {
        let x = Poly::var(Var::new("rf_x"));
        let one = Poly::one();
        let num = x.mul(&x).sub(&one);
        let den = x.sub(&one).scale(&Rat::int(-2));
        let r = RatFunc::new(num, den).unwrap();
        assert!(r.is_poly());
        assert_eq!(r.num(), &x.add(&one).scale(&Rat::frac(-1, 2)));
    }

    #[test]
    fn display_clears_fractions() {
        let p = Var::new("rf_p");
        let r = RatFunc::one().div(&RatFunc::var(p).scale(&Rat::int(2))).unwrap();
        assert_eq!(r.to_string(), "1/(2*rf_p)");
    }

    #[test]
    fn zero_denominator_rejected() {
        assert!(RatFunc::new(Poly::one(), Poly::zero()).is_none());
        assert!(RatFunc::zero().inv().is_none());
    }
}
