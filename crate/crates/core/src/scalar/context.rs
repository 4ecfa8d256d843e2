//! Parameter domains, side conditions and the context radical.

use super::{Radical, Rat, Scalar, Var};
use crate::error::{Error, Result};
use std::collections::{BTreeMap, HashMap};
use std::fmt;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Domain {
    Real,
    /// Exactly `+1` and `-1`.
    Sign,
    /// A finite set of admissible values.
    Discrete(Vec<Rat>),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Relation {
    Ne,
    Gt,
    Ge,
    Lt,
    Le,
}

impl Relation {
    pub fn holds(self, sign: i32) -> bool {
        match self {
            Relation::Ne => sign != 0,
            Relation::Gt => sign > 0,
            Relation::Ge => sign >= 0,
            Relation::Lt => sign < 0,
            Relation::Le => sign <= 0,
        }
    }

    pub fn symbol(self) -> &'static str {
        match self {
            Relation::Ne => "!=",
            Relation::Gt => ">",
            Relation::Ge => ">=",
            Relation::Lt => "<",
            Relation::Le => "<=",
        }
    }
}

/// `lhs rel rhs`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Constraint {
    pub lhs: Scalar,
    pub rel: Relation,
    pub rhs: Scalar,
}

impl Constraint {
    /// `Some(true/false)` once the difference is a constant, `None` otherwise.
    pub fn decide(&self, vals: &HashMap<Var, Rat>) -> Result<Option<bool>> {
        let d = self.lhs.sub(&self.rhs).substitute(vals)?;
        Ok(d.sign().map(|s| self.rel.holds(s)))
    }
}

impl fmt::Display for Constraint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {} {}", self.lhs, self.rel.symbol(), self.rhs)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Param {
    pub name: String,
    pub domain: Domain,
}

impl Param {
    pub fn var(&self) -> Var {
        Var::new(&self.name)
    }
}

/// Concrete parameter values by name.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Bindings(pub BTreeMap<String, Rat>);

impl Bindings {
    pub fn new() -> Bindings {
        Bindings::default()
    }

    pub fn with(mut self, name: &str, v: Rat) -> Bindings {
        self.0.insert(name.to_string(), v);
        self
    }

    pub fn insert(&mut self, name: &str, v: Rat) {
        self.0.insert(name.to_string(), v);
    }

    pub fn get(&self, name: &str) -> Option<&Rat> {
        self.0.get(name)
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn vars(&self) -> HashMap<Var, Rat> {
        self.0.iter().map(|(k, v)| (Var::new(k), v.clone())).collect()
    }

    /// `self` extended by `o`; entries of `o` win.
    pub fn merged(&self, o: &Bindings) -> Bindings {
        let mut m = self.clone();
        m.0.extend(o.0.iter().map(|(k, v)| (k.clone(), v.clone())));
        m
    }

    /// Only the names in `keep`.
    pub fn restricted<'a>(&self, keep: impl IntoIterator<Item = &'a str>) -> Bindings {
        let mut out = Bindings::new();
        for k in keep {
            if let Some(v) = self.0.get(k) {
                out.insert(k, v.clone());
            }
        }
        out
    }
}

impl fmt::Display for Bindings {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, (k, v)) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{k}={v}")?;
        }
        Ok(())
    }
}

/// Parameters with their domains, side conditions, and at most one radical.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ParamContext {
    pub params: Vec<Param>,
    pub constraints: Vec<Constraint>,
    radical: Option<(String, Scalar)>,
}

impl ParamContext {
    pub fn new() -> ParamContext {
        ParamContext::default()
    }

    pub fn add_param(&mut self, name: &str, domain: Domain) -> Result<()> {
        if self.param(name).is_some() || self.radical_name() == Some(name) {
            return Err(Error::ConstraintViolation(format!("duplicate parameter {name}")));
        }
        self.params.push(Param { name: name.to_string(), domain });
        Ok(())
    }

    pub fn add_constraint(&mut self, c: Constraint) {
        self.constraints.push(c);
    }

    /// Declares the context radical `name = sqrt(radicand)`.
    pub fn set_radical(&mut self, name: &str, radicand: Scalar) -> Result<()> {
        if radicand.radical().is_some() {
            return Err(Error::InconsistentRadical(format!("radicand of {name} contains a radical")));
        }
        if let Some((n, q)) = &self.radical {
            if q != &radicand {
                return Err(Error::InconsistentRadical(format!("second radical {name} besides {n}")));
            }
        }
        if self.param(name).is_some() {
            return Err(Error::ConstraintViolation(format!("duplicate parameter {name}")));
        }
        self.radical = Some((name.to_string(), radicand));
        Ok(())
    }

    pub fn radical_name(&self) -> Option<&str> {
        self.radical.as_ref().map(|(n, _)| n.as_str())
    }

    pub fn radical_decl(&self) -> Option<(&str, &Scalar)> {
        self.radical.as_ref().map(|(n, q)| (n.as_str(), q))
    }

    /// The radical as a scalar `1 * r`.
    pub fn radical_scalar(&self) -> Option<Scalar> {
        let (n, q) = self.radical.as_ref()?;
        Scalar::sqrt(q.rational_part().clone(), Some(n)).ok()
    }

    pub fn radical_of(s: &Scalar) -> Option<&Radical> {
        s.radical()
    }

    pub fn param(&self, name: &str) -> Option<&Param> {
        self.params.iter().find(|p| p.name == name)
    }

    pub fn is_empty(&self) -> bool {
        self.params.is_empty() && self.radical.is_none()
    }

    pub fn names(&self) -> impl Iterator<Item = &str> {
        self.params.iter().map(|p| p.name.as_str())
    }

    /// Checks names, domains and every constraint that the binding decides.
    pub fn validate(&self, b: &Bindings) -> Result<()> {
        for (k, v) in &b.0 {
            if self.radical_name() == Some(k.as_str()) {
                continue;
            }
            let p = self.param(k).ok_or_else(|| Error::UnknownName(k.clone()))?;
            match &p.domain {
                Domain::Real => {}
                Domain::Sign => {
                    if !(v.is_one() || (-v).is_one()) {
                        return Err(Error::ConstraintViolation(format!("{k} = {v} is not a sign")));
                    }
                }
                Domain::Discrete(vals) => {
                    if !vals.contains(v) {
                        return Err(Error::ConstraintViolation(format!(
                            "{k} = {v} outside {}",
                            vals.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",")
                        )));
                    }
                }
            }
        }
        let vals = b.vars();
        for c in &self.constraints {
            match c.decide(&vals) {
                Ok(Some(false)) => return Err(Error::ConstraintViolation(format!("{c} fails at {b}"))),
                Ok(_) => {}
                Err(Error::DivisionByZero) => return Err(Error::ConstraintViolation(format!("{c} undefined at {b}"))),
                Err(e) => return Err(e),
            }
        }
        if let Some((n, q)) = &self.radical {
            if let Some(v) = b.get(n) {
                let qv = q.substitute(&vals)?;
                match qv.as_rat() {
                    Some(qc) if (v * v) == qc => {}
                    Some(qc) => return Err(Error::InconsistentRadical(format!("{n} = {v} but radicand is {qc}"))),
                    None => return Err(Error::InconsistentRadical(format!("{n} bound with radicand unbound"))),
                }
            }
        }
        Ok(())
    }

    /// Validates, then substitutes.
    pub fn substitute(&self, s: &Scalar, b: &Bindings) -> Result<Scalar> {
        self.validate(b)?;
        s.substitute(&b.vars())
    }

    /// The context left after binding `b`: bound parameters removed, decided
    /// constraints dropped.
    pub fn restrict(&self, b: &Bindings) -> Result<ParamContext> {
        self.validate(b)?;
        let vals = b.vars();
        let mut out = ParamContext::new();
        for p in &self.params {
            if b.get(&p.name).is_none() {
                out.params.push(p.clone());
            }
        }
        for c in &self.constraints {
            if c.decide(&vals)?.is_none() {
                out.constraints.push(Constraint {
                    lhs: c.lhs.substitute(&vals)?,
                    rel: c.rel,
                    rhs: c.rhs.substitute(&vals)?,
                });
            }
        }
        if let Some((n, q)) = &self.radical {
            if b.get(n).is_none() {
                let q = q.substitute(&vals)?;
                if q.as_rat().is_none() {
                    out.radical = Some((n.clone(), q));
                }
            }
        }
        Ok(out)
    }

    /// Every assignment of the sign and discrete parameters that is not
    /// ruled out by a decided constraint. One empty binding when there are none.
    pub fn branches(&self) -> Vec<Bindings> {
        let mut out = vec![Bindings::new()];
        for p in &self.params {
            let vals = match &p.domain {
                Domain::Real => continue,
                Domain::Sign => vec![Rat::one(), -Rat::one()],
                Domain::Discrete(v) => v.clone(),
            };
            out = out.into_iter().flat_map(|b| vals.iter().map(move |v| b.clone().with(&p.name, v.clone()))).collect();
        }
        out.retain(|b| {
            let vals = b.vars();
            self.constraints.iter().all(|c| !matches!(c.decide(&vals), Ok(Some(false))))
        });
        out
    }

    pub fn has_branches(&self) -> bool {
        self.params.iter().any(|p| p.domain != Domain::Real)
    }

    /// Random valid binding of every parameter; `None` after `tries` misses.
    pub fn sample<R: rand::Rng>(&self, rng: &mut R, tries: usize) -> Option<Bindings> {
        'outer: for _ in 0..tries {
            let mut b = Bindings::new();
            for p in &self.params {
                let v = match &p.domain {
                    Domain::Real => random_rat(rng),
                    Domain::Sign => {
                        if rng.gen_bool(0.5) {
                            Rat::one()
                        } else {
                            -Rat::one()
                        }
                    }
                    Domain::Discrete(v) => v[rng.gen_range(0..v.len())].clone(),
                };
                b.insert(&p.name, v);
            }
            let vals = b.vars();
            for c in &self.constraints {
                if !matches!(c.decide(&vals), Ok(Some(true))) {
                    continue 'outer;
                }
            }
            if let Some((n, q)) = &self.radical {
                match q.substitute(&vals).ok().and_then(|q| q.as_rat()) {
                    Some(qc) if !qc.is_negative() => {
                        if let Some(r) = qc.sqrt_exact() {
                            b.insert(n, r);
                        }
                    }
                    _ => continue 'outer,
                }
            }
            return Some(b);
        }
        None
    }
}

/// Small nonzero rationals with denominators up to 4.
pub fn random_rat<R: rand::Rng>(rng: &mut R) -> Rat {
    loop {
        let n: i64 = rng.gen_range(-9..=9);
        let d: i64 = rng.gen_range(1..=4);
        if n != 0 {
            return Rat::frac(n, d);
        }
    }
}
