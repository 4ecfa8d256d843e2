//! Exact scalars: rational functions in the parameters, optionally extended
//! by one square root.

mod context;
mod poly;
mod rat;
mod ratfunc;
mod var;

pub use context::{random_rat, Bindings, Constraint, Domain, Param, ParamContext, Relation};
pub use poly::{Monomial, Poly};
pub use rat::Rat;
pub use ratfunc::RatFunc;
pub use var::Var;

use crate::error::{Error, Result};
use std::collections::HashMap;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

/// A square root `r` of `radicand`. Two radicals are equal when their
/// radicands are; the name only matters for printing and binding.
#[derive(Clone)]
pub struct Radical {
    name: Option<Arc<str>>,
    radicand: RatFunc,
}

impl Radical {
    pub fn name(&self) -> Option<&str> {
        self.name.as_deref()
    }

    pub fn radicand(&self) -> &RatFunc {
        &self.radicand
    }
}

impl PartialEq for Radical {
    fn eq(&self, o: &Radical) -> bool {
        self.radicand == o.radicand
    }
}

impl Eq for Radical {}

impl Hash for Radical {
    fn hash<H: Hasher>(&self, h: &mut H) {
        self.radicand.hash(h)
    }
}

impl fmt::Debug for Radical {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for Radical {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.name {
            Some(n) => f.write_str(n),
            None => write!(f, "sqrt({})", self.radicand),
        }
    }
}

/// `a + b*r`. Invariant: `b == 0` iff there is no radical.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Scalar {
    a: RatFunc,
    b: RatFunc,
    r: Option<Arc<Radical>>,
}

impl Scalar {
    pub fn zero() -> Scalar {
        Scalar::default()
    }

    pub fn one() -> Scalar {
        Scalar::from_ratfunc(RatFunc::one())
    }

    pub fn int(n: i64) -> Scalar {
        Scalar::from_rat(Rat::int(n))
    }

    pub fn frac(n: i64, d: i64) -> Scalar {
        Scalar::from_rat(Rat::frac(n, d))
    }

    pub fn from_rat(c: Rat) -> Scalar {
        Scalar::from_ratfunc(RatFunc::from_rat(c))
    }

    pub fn from_ratfunc(a: RatFunc) -> Scalar {
        Scalar { a, b: RatFunc::zero(), r: None }
    }

    pub fn from_poly(p: Poly) -> Scalar {
        Scalar::from_ratfunc(RatFunc::from_poly(p))
    }

    pub fn var(v: Var) -> Scalar {
        Scalar::from_ratfunc(RatFunc::var(v))
    }

    /// The square root of `radicand`, simplified when the radicand is a
    /// rational constant: `sqrt(s^2*k) = s*sqrt(k)` and perfect squares fold
    /// to their non-negative root. A name is kept only when no rescaling occurs.
    pub fn sqrt(radicand: RatFunc, name: Option<&str>) -> Result<Scalar> {
        if let Some(c) = radicand.constant_value() {
            if c.is_zero() {
                return Ok(Scalar::zero());
            }
            if let Some(s) = c.sqrt_exact() {
                return Ok(Scalar::from_rat(s));
            }
            let (s, k) = c.squarefree_split();
            let k = Rat::from_bigint(k);
            let name = if s.is_one() { name } else { None };
            return Ok(Scalar::radical_part(
                RatFunc::from_rat(s),
                Radical { name: name.map(Arc::from), radicand: RatFunc::from_rat(k) },
            ));
        }
        Ok(Scalar::radical_part(RatFunc::one(), Radical { name: name.map(Arc::from), radicand }))
    }

    fn radical_part(b: RatFunc, r: Radical) -> Scalar {
        Scalar::build(RatFunc::zero(), b, Some(Arc::new(r)))
    }

    fn build(a: RatFunc, b: RatFunc, r: Option<Arc<Radical>>) -> Scalar {
        if b.is_zero() || r.is_none() {
            Scalar { a, b: RatFunc::zero(), r: None }
        } else {
            Scalar { a, b, r }
        }
    }

    /// Rational part `a`.
    pub fn rational_part(&self) -> &RatFunc {
        &self.a
    }

    /// Coefficient `b` of the radical.
    pub fn radical_coeff(&self) -> &RatFunc {
        &self.b
    }

    pub fn radical(&self) -> Option<&Radical> {
        self.r.as_deref()
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.b.is_zero() && self.a.is_one()
    }

    /// The value when `self` is a rational constant.
    pub fn as_rat(&self) -> Option<Rat> {
        if self.b.is_zero() {
            self.a.constant_value()
        } else {
            None
        }
    }

    /// True when no parameter occurs (a radical of a constant is allowed).
    pub fn is_constant(&self) -> bool {
        self.a.constant_value().is_some()
            && self.b.constant_value().is_some()
            && self.r.as_ref().is_none_or(|r| r.radicand.constant_value().is_some())
    }

    pub fn vars(&self) -> std::collections::BTreeSet<Var> {
        let mut s = self.a.vars();
        s.extend(self.b.vars());
        if let Some(r) = &self.r {
            s.extend(r.radicand.vars());
        }
        s
    }

    fn join(&self, o: &Scalar) -> Option<Arc<Radical>> {
        match (&self.r, &o.r) {
            (None, None) => None,
            (Some(r), None) | (None, Some(r)) => Some(r.clone()),
            (Some(r), Some(s)) => {
                assert!(r == s, "scalars over different quadratic extensions: {r} and {s}");
                Some(r.clone())
            }
        }
    }

    pub fn add(&self, o: &Scalar) -> Scalar {
        let r = self.join(o);
        Scalar::build(self.a.add(&o.a), self.b.add(&o.b), r)
    }

    pub fn sub(&self, o: &Scalar) -> Scalar {
        let r = self.join(o);
        Scalar::build(self.a.sub(&o.a), self.b.sub(&o.b), r)
    }

    pub fn neg(&self) -> Scalar {
        Scalar { a: self.a.neg(), b: self.b.neg(), r: self.r.clone() }
    }

    pub fn mul(&self, o: &Scalar) -> Scalar {
        if self.r.is_none() && o.r.is_none() {
            return Scalar::from_ratfunc(self.a.mul(&o.a));
        }
        let r = self.join(o);
        let q = &r.as_ref().unwrap().radicand;
        let a = self.a.mul(&o.a).add(&self.b.mul(&o.b).mul(q));
        let b = self.a.mul(&o.b).add(&self.b.mul(&o.a));
        Scalar::build(a, b, r)
    }

    pub fn scale(&self, c: &Rat) -> Scalar {
        Scalar::build(self.a.scale(c), self.b.scale(c), self.r.clone())
    }

    /// `(a - b r) / (a^2 - b^2 q)`.
    pub fn inv(&self) -> Result<Scalar> {
        match &self.r {
            None => Ok(Scalar::from_ratfunc(self.a.inv().ok_or(Error::DivisionByZero)?)),
            Some(r) => {
                let norm = self.a.mul(&self.a).sub(&self.b.mul(&self.b).mul(&r.radicand));
                let ni = norm.inv().ok_or(Error::DivisionByZero)?;
                Ok(Scalar::build(self.a.mul(&ni), self.b.neg().mul(&ni), self.r.clone()))
            }
        }
    }

    pub fn div(&self, o: &Scalar) -> Result<Scalar> {
        Ok(self.mul(&o.inv()?))
    }

    pub fn pow(&self, e: i32) -> Result<Scalar> {
        if e < 0 {
            return self.inv()?.pow(-e);
        }
        let mut r = Scalar::one();
        for _ in 0..e {
            r = r.mul(self);
        }
        Ok(r)
    }

    /// Binds variables by value. Radical names in `vals` bind the radical,
    /// which must then satisfy `v^2 = radicand`. A radicand that becomes a
    /// rational constant is simplified as in [`Scalar::sqrt`].
    pub fn substitute(&self, vals: &HashMap<Var, Rat>) -> Result<Scalar> {
        if vals.is_empty() {
            return Ok(self.clone());
        }
        let a = self.a.eval_partial(vals).ok_or(Error::DivisionByZero)?;
        let Some(r) = &self.r else {
            return Ok(Scalar::from_ratfunc(a));
        };
        let b = self.b.eval_partial(vals).ok_or(Error::DivisionByZero)?;
        let q = r.radicand.eval_partial(vals).ok_or(Error::DivisionByZero)?;
        let bound = r.name.as_ref().and_then(|n| vals.get(&Var::new(n)));
        let root = match bound {
            Some(v) => {
                let qc = q
                    .constant_value()
                    .ok_or_else(|| Error::InconsistentRadical(format!("{r} bound while radicand {q} is unbound")))?;
                if (v * v) != qc {
                    return Err(Error::InconsistentRadical(format!("{r} = {v} but radicand is {qc}")));
                }
                Scalar::from_rat(v.clone())
            }
            None if q == r.radicand => Scalar::radical_part(RatFunc::one(), (**r).clone()),
            None => Scalar::sqrt(q, r.name.as_deref())?,
        };
        Ok(Scalar::from_ratfunc(a).add(&Scalar::from_ratfunc(b).mul(&root)))
    }

    /// Replaces a variable by a scalar (which may carry the same radical).
    pub fn compose(&self, v: Var, val: &Scalar) -> Result<Scalar> {
        let a = compose_ratfunc(&self.a, v, val)?;
        match &self.r {
            None => Ok(a),
            Some(r) => {
                let b = compose_ratfunc(&self.b, v, val)?;
                let root = if r.radicand.contains_var(v) {
                    let q = compose_ratfunc(&r.radicand, v, val)?;
                    if q.radical().is_some() {
                        return Err(Error::InconsistentRadical(format!("nested radical in radicand of {r}")));
                    }
                    Scalar::sqrt(q.a, r.name.as_deref())?
                } else {
                    Scalar::radical_part(RatFunc::one(), (**r).clone())
                };
                Ok(a.add(&b.mul(&root)))
            }
        }
    }

    /// Writes `self` as polynomial equations over Q: numerators of the
    /// rational and radical parts.
    pub fn zero_conditions(&self) -> Vec<Poly> {
        let mut out = Vec::new();
        if !self.a.is_zero() {
            out.push(self.a.num().clone());
        }
        if !self.b.is_zero() {
            out.push(self.b.num().clone());
        }
        out
    }

    /// Numeric approximation at bound values; radicals of negative numbers give NaN.
    pub fn to_f64(&self) -> Option<f64> {
        let a = self.a.constant_value()?.to_f64();
        if self.b.is_zero() {
            return Some(a);
        }
        let b = self.b.constant_value()?.to_f64();
        let q = self.r.as_ref()?.radicand.constant_value()?.to_f64();
        Some(a + b * q.sqrt())
    }

    /// Sign of a constant scalar, exact for the quadratic case.
    pub fn sign(&self) -> Option<i32> {
        let a = self.a.constant_value()?;
        if self.b.is_zero() {
            return Some(a.signum());
        }
        let b = self.b.constant_value()?;
        let q = self.r.as_ref()?.radicand.constant_value()?;
        if q.is_negative() {
            return None;
        }
        // sign(a + b*sqrt(q)) with sqrt(q) > 0
        let sa = a.signum();
        let sb = b.signum();
        if sa == 0 {
            return Some(sb);
        }
        if sa == sb {
            return Some(sa);
        }
        let cmp = (&a * &a).cmp(&(&b * &b * &q));
        Some(match cmp {
            std::cmp::Ordering::Greater => sa,
            std::cmp::Ordering::Less => sb,
            std::cmp::Ordering::Equal => 0,
        })
    }
}

fn compose_ratfunc(f: &RatFunc, v: Var, val: &Scalar) -> Result<Scalar> {
    if !f.contains_var(v) {
        return Ok(Scalar::from_ratfunc(f.clone()));
    }
    let n = compose_poly(f.num(), v, val);
    let d = compose_poly(f.den(), v, val);
    n.div(&d)
}

fn compose_poly(p: &Poly, v: Var, val: &Scalar) -> Scalar {
    let cs = p.coeffs_in(v);
    let mut r = Scalar::zero();
    for c in cs.iter().rev() {
        r = r.mul(val).add(&Scalar::from_poly(c.clone()));
    }
    r
}

impl From<i64> for Scalar {
    fn from(n: i64) -> Scalar {
        Scalar::int(n)
    }
}

impl From<Rat> for Scalar {
    fn from(c: Rat) -> Scalar {
        Scalar::from_rat(c)
    }
}

impl Add for &Scalar {
    type Output = Scalar;
    fn add(self, o: &Scalar) -> Scalar {
        Scalar::add(self, o)
    }
}

impl Sub for &Scalar {
    type Output = Scalar;
    fn sub(self, o: &Scalar) -> Scalar {
        Scalar::sub(self, o)
    }
}

impl Mul for &Scalar {
    type Output = Scalar;
    fn mul(self, o: &Scalar) -> Scalar {
        Scalar::mul(self, o)
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        Scalar::neg(self)
    }
}

fn is_simple(f: &RatFunc) -> bool {
    f.is_poly() && f.num().is_atomic()
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let Some(r) = &self.r else {
            return write!(f, "{}", self.a);
        };
        let mut b = self.b.clone();
        if !self.a.is_zero() {
            write!(f, "{}", self.a)?;
            let neg = b.is_poly() && b.num().len() == 1 && b.num().leading_is_negative();
            if neg {
                f.write_str(" - ")?;
                b = b.neg();
            } else {
                f.write_str(" + ")?;
            }
        }
        if b.is_one() {
            write!(f, "{r}")
        } else if b.neg().is_one() {
            write!(f, "-{r}")
        } else if is_simple(&b) || (b.is_poly() && b.num().len() == 1) {
            write!(f, "{b}*{r}")
        } else {
            write!(f, "({b})*{r}")
        }
    }
}

impl fmt::Debug for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(n: &str) -> Scalar {
        Scalar::var(Var::new(n))
    }

    #[test]
    fn common_denominator_cancels() {
        let beta = v("beta");
        let p1 = &v("p") + &Scalar::one();
        let s = &beta.div(&p1).unwrap() + &(&beta * &v("p")).div(&p1).unwrap();
        assert_eq!(s, beta);
    }

    #[test]
    fn radical_squares_to_radicand() {
        let q = &(&v("kappa") * &v("kappa")) - &(&v("lambda") * &v("gamma"));
        let rho = Scalar::sqrt(q.rational_part().clone(), Some("rho")).unwrap();
        assert_eq!(&rho * &rho, q);
    }

    #[test]
    fn inverse_of_linear_term() {
        let two_p = Scalar::int(2).mul(&v("p"));
        let i = two_p.inv().unwrap();
        assert_eq!(i.to_string(), "1/(2*p)");
        assert_eq!(Scalar::zero().inv(), Err(Error::DivisionByZero));
    }

    #[test]
    fn radical_inverse() {
        let r = Scalar::sqrt(RatFunc::int(2), None).unwrap();
        let x = &Scalar::one() + &r;
        assert!((&x * &x.inv().unwrap()).is_one());
        assert_eq!(x.to_string(), "1 + sqrt(2)");
    }

    #[test]
    fn constant_radicands_normalise() {
        let r8 = Scalar::sqrt(RatFunc::int(8), None).unwrap();
        let r2 = Scalar::sqrt(RatFunc::int(2), None).unwrap();
        assert_eq!(r8, r2.scale(&Rat::int(2)));
        assert_eq!(Scalar::sqrt(RatFunc::int(9), None).unwrap(), Scalar::int(3));
    }

    #[test]
    fn substitute_binds_radical() {
        let q = &(&v("kappa") * &v("kappa")) - &(&v("lambda") * &v("gamma"));
        let rho = Scalar::sqrt(q.rational_part().clone(), Some("rho")).unwrap();
        let mut b = HashMap::new();
        b.insert(Var::new("kappa"), Rat::int(5));
        b.insert(Var::new("lambda"), Rat::int(3));
        b.insert(Var::new("gamma"), Rat::int(3));
        b.insert(Var::new("rho"), Rat::int(4));
        assert_eq!(rho.substitute(&b).unwrap(), Scalar::int(4));
        b.insert(Var::new("kappa"), Rat::int(1));
        b.insert(Var::new("lambda"), Rat::int(1));
        b.insert(Var::new("gamma"), Rat::int(1));
        b.insert(Var::new("rho"), Rat::int(1));
        assert!(matches!(rho.substitute(&b), Err(Error::InconsistentRadical(_))));
    }

    #[test]
    fn exact_sign_in_quadratic_field() {
        let r2 = Scalar::sqrt(RatFunc::int(2), None).unwrap();
        let x = &Scalar::frac(3, 2) - &r2; // 1.5 - 1.414 > 0
        assert_eq!(x.sign(), Some(1));
        let y = &Scalar::frac(7, 5) - &r2;
        assert_eq!(y.sign(), Some(-1));
    }
}
