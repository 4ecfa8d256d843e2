//! Sparse multivariate polynomials over the rationals.

use super::rat::Rat;
use super::var::Var;
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::Zero;
use std::cmp::{Ordering, Reverse};
use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

/// A power product, sorted by variable with positive exponents.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Monomial(Vec<(Var, u32)>);

impl Monomial {
    pub fn one() -> Monomial {
        Monomial(Vec::new())
    }

    pub fn var(v: Var, e: u32) -> Monomial {
        if e == 0 {
            Monomial::one()
        } else {
            Monomial(vec![(v, e)])
        }
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn factors(&self) -> &[(Var, u32)] {
        &self.0
    }

    pub fn degree(&self, v: Var) -> u32 {
        self.0.iter().find(|(w, _)| *w == v).map(|(_, e)| *e).unwrap_or(0)
    }

    pub fn total_degree(&self) -> u32 {
        self.0.iter().map(|(_, e)| e).sum()
    }

    pub fn mul(&self, o: &Monomial) -> Monomial {
        let mut out = Vec::with_capacity(self.0.len() + o.0.len());
        let (mut i, mut j) = (0, 0);
        while i < self.0.len() && j < o.0.len() {
            let (a, b) = (self.0[i], o.0[j]);
            match a.0.cmp(&b.0) {
                Ordering::Less => {
                    out.push(a);
                    i += 1;
                }
                Ordering::Greater => {
                    out.push(b);
                    j += 1;
                }
                Ordering::Equal => {
                    out.push((a.0, a.1 + b.1));
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&self.0[i..]);
        out.extend_from_slice(&o.0[j..]);
        Monomial(out)
    }

    /// `self / o` when `o` divides `self`.
    pub fn div(&self, o: &Monomial) -> Option<Monomial> {
        let mut out = Vec::with_capacity(self.0.len());
        let mut j = 0;
        for &(v, e) in &self.0 {
            if j < o.0.len() && o.0[j].0 < v {
                return None;
            }
            if j < o.0.len() && o.0[j].0 == v {
                let f = o.0[j].1;
                j += 1;
                match e.cmp(&f) {
                    Ordering::Less => return None,
                    Ordering::Equal => {}
                    Ordering::Greater => out.push((v, e - f)),
                }
            } else {
                out.push((v, e));
            }
        }
        if j < o.0.len() {
            return None;
        }
        Some(Monomial(out))
    }

    /// Removes `v`, returning its exponent and the cofactor.
    pub fn split_var(&self, v: Var) -> (u32, Monomial) {
        let mut e = 0;
        let rest = self
            .0
            .iter()
            .filter(|(w, d)| {
                if *w == v {
                    e = *d;
                    false
                } else {
                    true
                }
            })
            .copied()
            .collect();
        (e, Monomial(rest))
    }

    fn display_key(&self) -> (Reverse<u32>, Vec<(String, Reverse<u32>)>) {
        let mut k: Vec<(String, Reverse<u32>)> =
            self.0.iter().map(|(v, e)| (v.name().to_string(), Reverse(*e))).collect();
        k.sort();
        (Reverse(self.total_degree()), k)
    }
}

/// Lexicographic order: variables with smaller id are more significant.
impl Ord for Monomial {
    fn cmp(&self, o: &Monomial) -> Ordering {
        let (mut i, mut j) = (0, 0);
        loop {
            match (self.0.get(i), o.0.get(j)) {
                (None, None) => return Ordering::Equal,
                (Some(_), None) => return Ordering::Greater,
                (None, Some(_)) => return Ordering::Less,
                (Some(a), Some(b)) => match a.0.cmp(&b.0) {
                    Ordering::Less => return Ordering::Greater,
                    Ordering::Greater => return Ordering::Less,
                    Ordering::Equal => {
                        if a.1 != b.1 {
                            return a.1.cmp(&b.1);
                        }
                        i += 1;
                        j += 1;
                    }
                },
            }
        }
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, o: &Monomial) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut fs: Vec<(String, u32)> = self.0.iter().map(|(v, e)| (v.name().to_string(), *e)).collect();
        fs.sort();
        for (i, (n, e)) in fs.iter().enumerate() {
            if i > 0 {
                f.write_str("*")?;
            }
            if *e == 1 {
                write!(f, "{n}")?;
            } else {
                write!(f, "{n}^{e}")?;
            }
        }
        Ok(())
    }
}

/// A polynomial in normal form: no zero coefficients.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Poly {
    terms: BTreeMap<Monomial, Rat>,
}

impl Poly {
    pub fn zero() -> Poly {
        Poly::default()
    }

    pub fn one() -> Poly {
        Poly::constant(Rat::one())
    }

    pub fn constant(c: Rat) -> Poly {
        let mut p = Poly::zero();
        if !c.is_zero() {
            p.terms.insert(Monomial::one(), c);
        }
        p
    }

    pub fn var(v: Var) -> Poly {
        Poly::term(Rat::one(), Monomial::var(v, 1))
    }

    pub fn term(c: Rat, m: Monomial) -> Poly {
        let mut p = Poly::zero();
        if !c.is_zero() {
            p.terms.insert(m, c);
        }
        p
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.constant_value().is_some_and(|c| c.is_one())
    }

    pub fn is_constant(&self) -> bool {
        self.terms.is_empty() || (self.terms.len() == 1 && self.terms.contains_key(&Monomial::one()))
    }

    /// The value when the polynomial is constant.
    pub fn constant_value(&self) -> Option<Rat> {
        if self.terms.is_empty() {
            Some(Rat::zero())
        } else if self.is_constant() {
            self.terms.values().next().cloned()
        } else {
            None
        }
    }

    /// The constant term.
    pub fn constant_term(&self) -> Rat {
        self.terms.get(&Monomial::one()).cloned().unwrap_or_default()
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &Rat)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn leading(&self) -> Option<(&Monomial, &Rat)> {
        self.terms.iter().next_back()
    }

    pub fn vars(&self) -> BTreeSet<Var> {
        self.terms.keys().flat_map(|m| m.0.iter().map(|(v, _)| *v)).collect()
    }

    pub fn contains_var(&self, v: Var) -> bool {
        self.terms.keys().any(|m| m.degree(v) > 0)
    }

    pub fn degree(&self, v: Var) -> u32 {
        self.terms.keys().map(|m| m.degree(v)).max().unwrap_or(0)
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.keys().map(|m| m.total_degree()).max().unwrap_or(0)
    }

    fn add_term(&mut self, m: Monomial, c: Rat) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let s = e.get() + &c;
                if s.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = s;
                }
            }
        }
    }

    pub fn add(&self, o: &Poly) -> Poly {
        let mut r = self.clone();
        for (m, c) in &o.terms {
            r.add_term(m.clone(), c.clone());
        }
        r
    }

    pub fn sub(&self, o: &Poly) -> Poly {
        let mut r = self.clone();
        for (m, c) in &o.terms {
            r.add_term(m.clone(), -c);
        }
        r
    }

    pub fn neg(&self) -> Poly {
        Poly { terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect() }
    }

    pub fn scale(&self, c: &Rat) -> Poly {
        if c.is_zero() {
            return Poly::zero();
        }
        Poly { terms: self.terms.iter().map(|(m, a)| (m.clone(), a * c)).collect() }
    }

    pub fn mul_term(&self, c: &Rat, mono: &Monomial) -> Poly {
        if c.is_zero() {
            return Poly::zero();
        }
        Poly { terms: self.terms.iter().map(|(m, a)| (m.mul(mono), a * c)).collect() }
    }

    pub fn mul(&self, o: &Poly) -> Poly {
        if self.is_zero() || o.is_zero() {
            return Poly::zero();
        }
        if let Some(c) = self.constant_value() {
            return o.scale(&c);
        }
        if let Some(c) = o.constant_value() {
            return self.scale(&c);
        }
        let mut r = Poly::zero();
        for (m1, c1) in &self.terms {
            for (m2, c2) in &o.terms {
                r.add_term(m1.mul(m2), c1 * c2);
            }
        }
        r
    }

    pub fn pow(&self, e: u32) -> Poly {
        let mut r = Poly::one();
        let mut b = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                r = r.mul(&b);
            }
            e >>= 1;
            if e > 0 {
                b = b.mul(&b);
            }
        }
        r
    }

    /// Coefficients with respect to `v`, indexed by power.
    pub fn coeffs_in(&self, v: Var) -> Vec<Poly> {
        let mut out = vec![Poly::zero(); self.degree(v) as usize + 1];
        for (m, c) in &self.terms {
            let (e, rest) = m.split_var(v);
            out[e as usize].add_term(rest, c.clone());
        }
        out
    }

    pub fn from_coeffs_in(v: Var, cs: &[Poly]) -> Poly {
        let mut r = Poly::zero();
        for (e, c) in cs.iter().enumerate() {
            r = r.add(&c.mul_term(&Rat::one(), &Monomial::var(v, e as u32)));
        }
        r
    }

    /// Replaces `v` by `val`.
    pub fn substitute(&self, v: Var, val: &Poly) -> Poly {
        if !self.contains_var(v) {
            return self.clone();
        }
        let cs = self.coeffs_in(v);
        // Horner
        let mut r = Poly::zero();
        for c in cs.iter().rev() {
            r = r.mul(val).add(c);
        }
        r
    }

    /// Replaces every bound variable by its rational value.
    pub fn eval_partial(&self, vals: &HashMap<Var, Rat>) -> Poly {
        let mut r = Poly::zero();
        for (m, c) in &self.terms {
            let mut coef = c.clone();
            let mut rest = Vec::new();
            for &(v, e) in &m.0 {
                match vals.get(&v) {
                    Some(x) => coef = coef * x.pow(e as i32),
                    None => rest.push((v, e)),
                }
            }
            r.add_term(Monomial(rest), coef);
        }
        r
    }

    /// `self / d` when the division is exact.
    pub fn div_exact(&self, d: &Poly) -> Option<Poly> {
        if d.is_zero() {
            return None;
        }
        if let Some(c) = d.constant_value() {
            return Some(self.scale(&c.recip()?));
        }
        let (dm, dc) = d.leading().map(|(m, c)| (m.clone(), c.clone()))?;
        let mut q = Poly::zero();
        let mut r = self.clone();
        while let Some((rm, rc)) = r.leading().map(|(m, c)| (m.clone(), c.clone())) {
            let tm = rm.div(&dm)?;
            let tc = &rc / &dc;
            r = r.sub(&d.mul_term(&tc, &tm));
            q.add_term(tm, tc);
        }
        Some(q)
    }

    /// The rational content: gcd of numerators over lcm of denominators, positive.
    pub fn rat_content(&self) -> Rat {
        if self.is_zero() {
            return Rat::one();
        }
        let g = Rat::gcd_numers(self.terms.values());
        let l = Rat::lcm_denoms(self.terms.values());
        Rat::from_parts(g, l)
    }

    /// Scales to integer coefficients with unit content and positive leading coefficient.
    /// Returns the factor `c` with `self = c * result`.
    pub fn integer_primitive(&self) -> (Rat, Poly) {
        if self.is_zero() {
            return (Rat::one(), Poly::zero());
        }
        let mut c = self.rat_content();
        if self.leading().unwrap().1.is_negative() {
            c = -c;
        }
        let inv = c.recip().unwrap();
        (c, self.scale(&inv))
    }

    /// Pseudo-remainder with respect to `v`.
    pub fn prem(&self, b: &Poly, v: Var) -> Poly {
        let n = b.degree(v);
        let bc = b.coeffs_in(v);
        let lb = bc[n as usize].clone();
        let mut r = self.clone();
        loop {
            if r.is_zero() {
                return r;
            }
            let m = r.degree(v);
            if m < n {
                return r;
            }
            let lr = r.coeffs_in(v).pop().unwrap();
            let t = lr.mul_term(&Rat::one(), &Monomial::var(v, m - n));
            r = r.mul(&lb).sub(&t.mul(b));
        }
    }

    /// Greatest common divisor, normalised by [`Poly::integer_primitive`].
    pub fn gcd(&self, o: &Poly) -> Poly {
        if self.is_zero() {
            return o.integer_primitive().1;
        }
        if o.is_zero() {
            return self.integer_primitive().1;
        }
        if self.is_constant() || o.is_constant() {
            return Poly::one();
        }
        let vs: BTreeSet<Var> = self.vars().union(&o.vars()).copied().collect();
        let v = *vs.iter().next_back().unwrap();
        let (a_has, b_has) = (self.contains_var(v), o.contains_var(v));
        if !a_has {
            return self.gcd(&o.content_in(v));
        }
        if !b_has {
            return self.content_in(v).gcd(o);
        }
        let ca = self.content_in(v);
        let cb = o.content_in(v);
        let mut r0 = self.div_exact(&ca).expect("content divides");
        let mut r1 = o.div_exact(&cb).expect("content divides");
        let c = ca.gcd(&cb);
        if r0.degree(v) < r1.degree(v) {
            std::mem::swap(&mut r0, &mut r1);
        }
        let g = loop {
            let r = r0.prem(&r1, v);
            if r.is_zero() {
                break r1;
            }
            if r.degree(v) == 0 {
                break Poly::one();
            }
            r0 = r1;
            r1 = r.primitive_in(v);
        };
        let g = g.primitive_in(v);
        c.mul(&g).integer_primitive().1
    }

    /// Gcd of the coefficients in `v`.
    pub fn content_in(&self, v: Var) -> Poly {
        let cs = self.coeffs_in(v);
        let mut g = Poly::zero();
        for c in cs.iter().filter(|c| !c.is_zero()) {
            g = g.gcd(c);
            if g.is_one() {
                break;
            }
        }
        g
    }

    pub fn primitive_in(&self, v: Var) -> Poly {
        let c = self.content_in(v);
        self.div_exact(&c).expect("content divides").integer_primitive().1
    }

    /// Integer coefficient gcd, for squarefree checks.
    pub fn integer_content(&self) -> BigInt {
        self.terms.values().fold(BigInt::zero(), |acc, r| acc.gcd(r.numer()))
    }

    pub fn is_integral(&self) -> bool {
        self.terms.values().all(|c| c.is_integer())
    }

    pub fn leading_is_negative(&self) -> bool {
        self.leading().is_some_and(|(_, c)| c.is_negative())
    }

    /// Terms in printing order.
    pub fn display_terms(&self) -> Vec<(&Monomial, &Rat)> {
        let mut ts: Vec<_> = self.terms.iter().collect();
        ts.sort_by_cached_key(|(m, _)| m.display_key());
        ts
    }

    /// Whether the printed form needs parentheses as a factor.
    pub fn is_atomic(&self) -> bool {
        match self.terms.len() {
            0 => true,
            1 => {
                let (m, c) = self.terms.iter().next().unwrap();
                if m.is_one() {
                    c.is_integer() && !c.is_negative()
                } else {
                    c.is_one()
                }
            }
            _ => false,
        }
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        for (i, (m, c)) in self.display_terms().into_iter().enumerate() {
            let neg = c.is_negative();
            let a = c.abs();
            if i == 0 {
                if neg {
                    f.write_str("-")?;
                }
            } else if neg {
                f.write_str(" - ")?;
            } else {
                f.write_str(" + ")?;
            }
            if m.is_one() {
                write!(f, "{a}")?;
            } else if a.is_one() {
                write!(f, "{m}")?;
            } else {
                write!(f, "{a}*{m}")?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn x() -> Poly {
        Poly::var(Var::new("poly_x"))
    }
    fn y() -> Poly {
        Poly::var(Var::new("poly_y"))
    }

    #[test]
    fn monomial_order_is_total_and_multiplicative() {
        let a = Monomial::var(Var::new("poly_x"), 2);
        let b = Monomial::var(Var::new("poly_y"), 5);
        let c = Monomial::var(Var::new("poly_x"), 1).mul(&b);
        assert_eq!(a.cmp(&b), a.cmp(&b).reverse().reverse());
        // multiplying by a common factor preserves order
        assert_eq!(a.cmp(&c), a.mul(&b).cmp(&c.mul(&b)));
        assert!(a.div(&Monomial::var(Var::new("poly_x"), 1)).is_some());
        assert!(b.div(&Monomial::var(Var::new("poly_x"), 1)).is_none());
    }

    #[test]
    fn gcd_recovers_common_factor() {
        let g = x().add(&y()).add(&Poly::one());
        let a = g.mul(&x().sub(&y()));
        let b = g.mul(&x().mul(&x()).add(&y()));
        let h = a.gcd(&b);
        assert_eq!(h, g.integer_primitive().1);
    }

    #[test]
    fn exact_division() {
        let a = x().mul(&x()).sub(&y().mul(&y()));
        let b = x().add(&y());
        assert_eq!(a.div_exact(&b).unwrap(), x().sub(&y()));
        assert!(a.div_exact(&x()).is_none());
    }

    #[test]
    fn display_is_readable() {
        let p = x().mul(&x()).scale(&Rat::frac(-1, 2)).add(&y()).add(&Poly::constant(Rat::int(3)));
        assert_eq!(p.to_string(), "-1/2*poly_x^2 + poly_y + 3");
    }
}
