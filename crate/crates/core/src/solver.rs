//! Exact branch-and-propagate search for rational (or single-radical)
//! solutions of polynomial systems over Q.

use crate::scalar::{Poly, Rat, RatFunc, Scalar, Var};
use std::collections::{BTreeMap, HashMap, HashSet};

/// `equations = 0`, `nonzero != 0`, unknowns with optional finite domains.
#[derive(Clone, Debug, Default)]
pub struct Problem {
    pub unknowns: Vec<Var>,
    pub equations: Vec<Poly>,
    pub nonzero: Vec<Scalar>,
    pub domains: HashMap<Var, Vec<Rat>>,
}

#[derive(Clone, Debug)]
pub struct SolverOptions {
    /// Values tried for unknowns that propagation leaves open.
    pub grid: Vec<Rat>,
    pub budget: usize,
    /// Admit one square root of a rational constant.
    pub allow_radical: bool,
    pub max_solutions: usize,
}

/// `{0, 1, -1, 1/2, -1/2, 2, -2}`.
pub fn default_grid() -> Vec<Rat> {
    [(0, 1), (1, 1), (-1, 1), (1, 2), (-1, 2), (2, 1), (-2, 1)].iter().map(|&(n, d)| Rat::frac(n, d)).collect()
}

impl Default for SolverOptions {
    fn default() -> SolverOptions {
        SolverOptions { grid: default_grid(), budget: 200_000, allow_radical: false, max_solutions: 1 }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Solution {
    pub values: BTreeMap<Var, Scalar>,
}

impl Solution {
    pub fn get(&self, v: Var) -> Option<&Scalar> {
        self.values.get(&v)
    }
}

#[derive(Clone, Debug)]
pub struct SolveOutcome {
    pub solutions: Vec<Solution>,
    pub nodes: usize,
    pub budget_hit: bool,
    /// No branch was cut by the grid, the budget or an unsupported root.
    pub complete: bool,
}

#[derive(Clone)]
struct State {
    eqs: Vec<Poly>,
    nonzero: Vec<Scalar>,
    /// `v = expr`; expressions never mention eliminated unknowns.
    elim: Vec<(Var, Poly)>,
    fixed: Vec<(Var, Scalar)>,
    /// Fixed to a value involving the radical; still symbolic in `elim`.
    deferred: Vec<(Var, Scalar)>,
    radicand: Option<Rat>,
    done: HashSet<Var>,
}

struct Search<'a> {
    p: &'a Problem,
    opts: &'a SolverOptions,
    accept: &'a mut dyn FnMut(&Solution) -> bool,
    nodes: usize,
    budget_hit: bool,
    complete: bool,
    solutions: Vec<Solution>,
}

/// Runs the search; `accept` filters fully determined candidates.
pub fn solve(p: &Problem, opts: &SolverOptions, accept: &mut dyn FnMut(&Solution) -> bool) -> SolveOutcome {
    let st = State {
        eqs: p.equations.iter().filter(|e| !e.is_zero()).cloned().collect(),
        nonzero: p.nonzero.clone(),
        elim: Vec::new(),
        fixed: Vec::new(),
        deferred: Vec::new(),
        radicand: None,
        done: HashSet::new(),
    };
    let mut s = Search { p, opts, accept, nodes: 0, budget_hit: false, complete: true, solutions: Vec::new() };
    s.run(st);
    SolveOutcome {
        solutions: s.solutions,
        nodes: s.nodes,
        budget_hit: s.budget_hit,
        complete: s.complete && !s.budget_hit,
    }
}

/// Scaled so that the leading coefficient is 1.
fn monic(p: &Poly) -> Poly {
    match p.leading() {
        Some((_, c)) if !c.is_one() => p.scale(&c.recip().unwrap()),
        _ => p.clone(),
    }
}

fn in_domain(p: &Problem, v: Var, c: &Rat) -> bool {
    p.domains.get(&v).is_none_or(|d| d.contains(c))
}

impl State {
    fn assign_rat(&mut self, v: Var, c: Rat) -> bool {
        let vals: HashMap<Var, Rat> = [(v, c.clone())].into_iter().collect();
        for e in self.eqs.iter_mut() {
            if e.contains_var(v) {
                *e = e.eval_partial(&vals);
            }
        }
        for (_, e) in self.elim.iter_mut() {
            if e.contains_var(v) {
                *e = e.eval_partial(&vals);
            }
        }
        for s in self.nonzero.iter_mut() {
            match s.substitute(&vals) {
                Ok(x) => *s = x,
                Err(_) => return false,
            }
        }
        self.fixed.push((v, Scalar::from_rat(c)));
        self.done.insert(v);
        true
    }

    fn eliminate(&mut self, v: Var, expr: Poly) -> bool {
        for e in self.eqs.iter_mut() {
            if e.contains_var(v) {
                *e = e.substitute(v, &expr);
            }
        }
        for (_, e) in self.elim.iter_mut() {
            if e.contains_var(v) {
                *e = e.substitute(v, &expr);
            }
        }
        let val = Scalar::from_poly(expr.clone());
        for s in self.nonzero.iter_mut() {
            match s.compose(v, &val) {
                Ok(x) => *s = x,
                Err(_) => return false,
            }
        }
        self.elim.push((v, expr));
        self.done.insert(v);
        true
    }

    /// `v = val` with `val` carrying the radical: each equation splits into
    /// its rational and radical parts.
    fn assign_radical(&mut self, v: Var, val: Scalar) -> bool {
        let mut eqs = Vec::new();
        for e in &self.eqs {
            if !e.contains_var(v) {
                eqs.push(e.clone());
                continue;
            }
            match Scalar::from_poly(e.clone()).compose(v, &val) {
                Ok(s) => eqs.extend(s.zero_conditions()),
                Err(_) => return false,
            }
        }
        self.eqs = eqs;
        for s in self.nonzero.iter_mut() {
            match s.compose(v, &val) {
                Ok(x) => *s = x,
                Err(_) => return false,
            }
        }
        self.deferred.push((v, val));
        self.done.insert(v);
        true
    }

    /// Linear propagation until a fixpoint. `false` on contradiction.
    fn propagate(&mut self, p: &Problem) -> bool {
        loop {
            let mut seen = HashSet::new();
            let mut eqs = Vec::new();
            for e in self.eqs.drain(..) {
                if e.is_zero() {
                    continue;
                }
                if e.is_constant() {
                    return false;
                }
                let m = monic(&e);
                if seen.insert(m.clone()) {
                    eqs.push(m);
                }
            }
            self.eqs = eqs;
            if self.nonzero.iter().any(|s| s.is_zero()) {
                return false;
            }
            let mut best: Option<(usize, usize, Var)> = None;
            for (i, e) in self.eqs.iter().enumerate() {
                if best.is_some_and(|(_, n, _)| n <= e.len()) {
                    continue;
                }
                for v in e.vars() {
                    if e.degree(v) != 1 {
                        continue;
                    }
                    let cs = e.coeffs_in(v);
                    if !cs[1].is_constant() {
                        continue;
                    }
                    if p.domains.contains_key(&v) && !cs[0].is_constant() {
                        continue;
                    }
                    best = Some((i, e.len(), v));
                    break;
                }
            }
            let Some((i, _, v)) = best else {
                return true;
            };
            let e = self.eqs.swap_remove(i);
            let cs = e.coeffs_in(v);
            let c = cs[1].constant_value().unwrap();
            let expr = cs[0].scale(&(-c.recip().unwrap()));
            let ok = match expr.constant_value() {
                Some(x) => in_domain(p, v, &x) && self.assign_rat(v, x),
                None => self.eliminate(v, expr),
            };
            if !ok {
                return false;
            }
        }
    }
}

impl Search<'_> {
    fn stop(&self) -> bool {
        self.budget_hit || self.solutions.len() >= self.opts.max_solutions
    }

    fn run(&mut self, mut st: State) {
        if self.stop() {
            return;
        }
        self.nodes += 1;
        if self.nodes > self.opts.budget {
            self.budget_hit = true;
            return;
        }
        if !st.propagate(self.p) {
            return;
        }
        if st.eqs.is_empty() {
            return self.leaf(st);
        }
        // univariate equations first
        if let Some(e) = st.eqs.iter().filter(|e| e.vars().len() == 1).min_by_key(|e| e.total_degree()).cloned() {
            let v = *e.vars().iter().next().unwrap();
            for (val, rad) in self.roots(&e, v, &st) {
                if self.stop() {
                    return;
                }
                let mut child = st.clone();
                let ok = match rad {
                    None => child.assign_rat(v, val.as_rat().unwrap()),
                    Some(q) => {
                        child.radicand = Some(q);
                        child.assign_radical(v, val)
                    }
                };
                if ok {
                    self.run(child);
                }
            }
            return;
        }
        // a product of unknowns vanishes only if a factor does
        if let Some(e) = st.eqs.iter().find(|e| e.len() == 1) {
            let (m, _) = e.terms().next().unwrap();
            let vars: Vec<Var> = m.factors().iter().map(|(v, _)| *v).collect();
            for v in vars {
                if self.stop() {
                    return;
                }
                if !in_domain(self.p, v, &Rat::zero()) {
                    continue;
                }
                let mut child = st.clone();
                if child.assign_rat(v, Rat::zero()) {
                    self.run(child);
                }
            }
            return;
        }
        let mut count: HashMap<Var, usize> = HashMap::new();
        for e in &st.eqs {
            for v in e.vars() {
                *count.entry(v).or_default() += 1;
            }
        }
        let v = *count
            .iter()
            .max_by(|a, b| {
                let fa = self.p.domains.contains_key(a.0);
                let fb = self.p.domains.contains_key(b.0);
                fa.cmp(&fb).then(a.1.cmp(b.1)).then(b.0.cmp(a.0))
            })
            .unwrap()
            .0;
        self.branch(st, v);
    }

    fn branch(&mut self, st: State, v: Var) {
        let vals = match self.p.domains.get(&v) {
            Some(d) => d.clone(),
            None => {
                self.complete = false;
                self.opts.grid.clone()
            }
        };
        for c in vals {
            if self.stop() {
                return;
            }
            let mut child = st.clone();
            if child.assign_rat(v, c) {
                self.run(child);
            }
        }
    }

    /// Roots of a univariate equation, each with the radicand it introduces.
    fn roots(&mut self, e: &Poly, v: Var, st: &State) -> Vec<(Scalar, Option<Rat>)> {
        let cs: Vec<Rat> = e.coeffs_in(v).iter().map(|c| c.constant_value().unwrap()).collect();
        let mut out: Vec<(Scalar, Option<Rat>)> = Vec::new();
        let mut lo = 0;
        while lo < cs.len() && cs[lo].is_zero() {
            lo += 1;
        }
        if lo > 0 {
            out.push((Scalar::zero(), None));
        }
        let cs = &cs[lo..];
        match cs.len() {
            0 | 1 => {}
            2 => out.push((Scalar::from_rat(-&cs[0] / &cs[1]), None)),
            3 => {
                let (c, b, a) = (&cs[0], &cs[1], &cs[2]);
                let disc = b * b - Rat::int(4) * a * c;
                let two_a = Rat::int(2) * a;
                if let Some(s) = disc.sqrt_exact() {
                    out.push((Scalar::from_rat((-b + &s) / &two_a), None));
                    if !s.is_zero() {
                        out.push((Scalar::from_rat((-b - &s) / &two_a), None));
                    }
                } else if disc.is_negative() {
                } else if !self.opts.allow_radical {
                    self.complete = false;
                } else {
                    let (_, k) = disc.squarefree_split();
                    let k = Rat::from_bigint(k);
                    if st.radicand.as_ref().is_some_and(|q| q != &k) {
                        self.complete = false;
                    } else {
                        let r = Scalar::sqrt(RatFunc::from_rat(disc), None).unwrap();
                        let base = Scalar::from_rat(-b / &two_a);
                        let inv = two_a.recip().unwrap();
                        out.push((base.add(&r.scale(&inv)), Some(k.clone())));
                        out.push((base.sub(&r.scale(&inv)), Some(k)));
                    }
                }
            }
            _ => {
                self.complete = false;
                let poly = Poly::from_coeffs_in(v, &cs.iter().map(|c| Poly::constant(c.clone())).collect::<Vec<_>>());
                for g in &self.opts.grid {
                    if g.is_zero() {
                        continue;
                    }
                    let vals: HashMap<Var, Rat> = [(v, g.clone())].into_iter().collect();
                    if poly.eval_partial(&vals).is_zero() {
                        out.push((Scalar::from_rat(g.clone()), None));
                    }
                }
            }
        }
        out.retain(|(x, _)| x.as_rat().is_none_or(|c| in_domain(self.p, v, &c)));
        out
    }

    fn leaf(&mut self, st: State) {
        if let Some(&v) = self.p.unknowns.iter().find(|v| !st.done.contains(v)) {
            return self.branch(st, v);
        }
        let mut values = BTreeMap::new();
        for (v, c) in &st.fixed {
            values.insert(*v, c.clone());
        }
        for (v, c) in &st.deferred {
            values.insert(*v, c.clone());
        }
        for (v, e) in &st.elim {
            let mut s = Scalar::from_poly(e.clone());
            for (w, c) in &st.deferred {
                match s.compose(*w, c) {
                    Ok(x) => s = x,
                    Err(_) => return,
                }
            }
            values.insert(*v, s);
        }
        let sol = Solution { values };
        if (self.accept)(&sol) {
            self.solutions.push(sol);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(n: &str) -> Var {
        Var::new(n)
    }

    fn pv(n: &str) -> Poly {
        Poly::var(v(n))
    }

    #[test]
    fn linear_chain() {
        // x + y = 3, x - y = 1
        let p = Problem {
            unknowns: vec![v("sx"), v("sy")],
            equations: vec![
                pv("sx").add(&pv("sy")).sub(&Poly::constant(Rat::int(3))),
                pv("sx").sub(&pv("sy")).sub(&Poly::one()),
            ],
            ..Default::default()
        };
        let out = solve(&p, &SolverOptions::default(), &mut |_| true);
        assert_eq!(out.solutions.len(), 1);
        assert_eq!(out.solutions[0].get(v("sx")), Some(&Scalar::int(2)));
        assert!(out.complete);
    }

    #[test]
    fn quadratic_with_radical() {
        // x^2 = 2, y = x + 1
        let x2 = pv("qx").mul(&pv("qx")).sub(&Poly::constant(Rat::int(2)));
        let p = Problem {
            unknowns: vec![v("qx"), v("qy")],
            equations: vec![x2, pv("qy").sub(&pv("qx")).sub(&Poly::one())],
            ..Default::default()
        };
        let opts = SolverOptions { allow_radical: true, max_solutions: 4, ..Default::default() };
        let out = solve(&p, &opts, &mut |_| true);
        assert_eq!(out.solutions.len(), 2);
        for s in &out.solutions {
            let x = s.get(v("qx")).unwrap();
            assert_eq!(x.mul(x), Scalar::int(2));
            assert_eq!(s.get(v("qy")).unwrap(), &x.add(&Scalar::one()));
        }
        let out = solve(&p, &SolverOptions { max_solutions: 4, ..Default::default() }, &mut |_| true);
        assert!(out.solutions.is_empty());
        assert!(!out.complete);
    }

    #[test]
    fn product_branching_and_nonzero() {
        // x*y = 0, x + y = 1, x != 0
        let p = Problem {
            unknowns: vec![v("px"), v("py")],
            equations: vec![pv("px").mul(&pv("py")), pv("px").add(&pv("py")).sub(&Poly::one())],
            nonzero: vec![Scalar::var(v("px"))],
            ..Default::default()
        };
        let out = solve(&p, &SolverOptions { max_solutions: 5, ..Default::default() }, &mut |_| true);
        assert_eq!(out.solutions.len(), 1);
        assert_eq!(out.solutions[0].get(v("px")), Some(&Scalar::one()));
    }

    #[test]
    fn budget_is_reported() {
        let p = Problem {
            unknowns: vec![v("bx"), v("by"), v("bz")],
            equations: vec![pv("bx").mul(&pv("by")).add(&pv("bz").mul(&pv("bz"))).sub(&Poly::constant(Rat::int(7)))],
            ..Default::default()
        };
        let out = solve(&p, &SolverOptions { budget: 3, ..Default::default() }, &mut |_| false);
        assert!(out.budget_hit);
        assert!(!out.complete);
    }
}
