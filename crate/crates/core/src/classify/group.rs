//! Grouping concrete triples into isomorphism classes of their doubles.

use super::claims::sample_values;
use crate::algebra::{commutant_series, CommutantFingerprint};
use crate::catalog::Catalog;
use crate::error::{Error, Result};
use crate::iso::{check_instance, search_iso, ExhaustReason, IsoCertificate, SearchOptions, SearchOutcome, Strategy};
use crate::scalar::{Bindings, Domain, Rat};
use crate::solver::{solve, Problem, SolverOptions};
use crate::triple::{build_double, ManinTriple};
use std::collections::HashMap;
use std::fmt;

/// A catalog triple at one binding of all its parameters.
#[derive(Clone, Debug)]
pub struct Node {
    pub id: String,
    pub bindings: Bindings,
    pub triple: ManinTriple,
    pub fingerprint: CommutantFingerprint,
    key: Vec<Rat>,
    order: Vec<(bool, bool, Rat, bool)>,
}

impl Node {
    /// `triple` must have every parameter bound.
    pub fn new(id: &str, bindings: Bindings, triple: ManinTriple) -> Result<Node> {
        let key = tensor_key(&triple)
            .ok_or_else(|| Error::ConstraintViolation(format!("{id} at {bindings} still has parameters")))?;
        let fingerprint = commutant_series(&build_double(&triple)?.algebra, &Bindings::new())?;
        let order = normalized_key(&key);
        Ok(Node { id: id.to_string(), bindings, triple, fingerprint, key, order })
    }

    pub fn label(&self) -> String {
        if self.bindings.is_empty() {
            self.id.clone()
        } else {
            format!("{}({})", self.id, self.bindings)
        }
    }

    /// Entries of both halves; the representative of a class minimises
    /// their [`normalized_key`].
    pub fn key(&self) -> &[Rat] {
        &self.key
    }
}

/// Entrywise order: zeros, then entries of absolute value one, then by size,
/// positive before negative.
pub fn normalized_key(entries: &[Rat]) -> Vec<(bool, bool, Rat, bool)> {
    entries.iter().map(|r| (!r.is_zero(), !r.abs().is_one(), r.abs(), r.is_negative())).collect()
}

fn tensor_key(t: &ManinTriple) -> Option<Vec<Rat>> {
    t.left.tensor.entries().iter().chain(t.right.tensor.entries()).map(|x| x.as_rat()).collect()
}

/// Cartesian product of default or overridden values of the continuous
/// parameters, times every admissible sign and discrete branch.
pub fn sample_bindings(id: &str, t: &ManinTriple, overrides: &Bindings) -> Vec<Bindings> {
    let fixed = overrides.restricted(t.ctx.names());
    let mut out = vec![fixed.clone()];
    for p in &t.ctx.params {
        if p.domain != Domain::Real || fixed.get(&p.name).is_some() {
            continue;
        }
        let vals = sample_values(id, &p.name);
        out = out.into_iter().flat_map(|b| vals.iter().map(move |v| b.clone().with(&p.name, v.clone()))).collect();
    }
    let mut full = Vec::new();
    for b in out {
        let Ok(rest) = t.ctx.restrict(&b) else { continue };
        for br in rest.branches() {
            let m = b.merged(&br);
            if t.ctx.validate(&m).is_ok() {
                full.push(m);
            }
        }
    }
    full
}

/// Every triple of a catalog file at its sampled bindings, in file order.
pub fn sample_nodes(catalog: &Catalog, file: &str, overrides: &Bindings) -> Result<Vec<Node>> {
    let mut nodes = Vec::new();
    for e in catalog.triples_in(file) {
        for b in sample_bindings(&e.name, &e.value, overrides) {
            let t = e.value.substitute(&b)?;
            nodes.push(Node::new(&e.name, b, t)?);
        }
    }
    Ok(nodes)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Evidence {
    Catalog(String),
    Search { strategy: Strategy, nodes: usize },
}

impl fmt::Display for Evidence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Evidence::Catalog(id) => write!(f, "catalog:{id}"),
            Evidence::Search { strategy, nodes } => write!(f, "search:{strategy}:{nodes}"),
        }
    }
}

/// A verified certificate from the double of node `source` to that of `target`.
#[derive(Clone, Debug)]
pub struct Edge {
    pub source: usize,
    pub target: usize,
    pub cert: IsoCertificate,
    pub evidence: Evidence,
}

/// Why two classes were kept apart.
#[derive(Clone, Debug)]
pub struct Separation {
    pub a: usize,
    pub b: usize,
    pub reason: ExhaustReason,
    pub nodes: usize,
    pub budget: usize,
}

#[derive(Clone, Debug)]
pub struct ClassificationReport {
    pub nodes: Vec<Node>,
    pub edges: Vec<Edge>,
    /// Node indices per class; each class starts with its representative.
    pub classes: Vec<Vec<usize>>,
    /// Between class representatives, only for pairs in different classes.
    pub separations: Vec<Separation>,
}

impl ClassificationReport {
    pub fn class_of(&self, node: usize) -> Option<usize> {
        self.classes.iter().position(|c| c.contains(&node))
    }

    /// Separation record for two different classes, if any.
    pub fn separation(&self, x: usize, y: usize) -> Option<&Separation> {
        self.separations.iter().find(|s| {
            let (cx, cy) = (self.class_of(s.a), self.class_of(s.b));
            (cx == Some(x) && cy == Some(y)) || (cx == Some(y) && cy == Some(x))
        })
    }

    /// Re-checks every edge certificate on the stored node triples.
    pub fn edges_verified(&self) -> bool {
        self.edges.iter().all(|e| {
            check_instance(&e.cert.matrix, &self.nodes[e.source].triple, &self.nodes[e.target].triple, Bindings::new())
                .passed()
        })
    }
}

#[derive(Clone, Debug, Default)]
pub struct ClassifyOptions {
    /// Node budget per pairwise search; a per-superdimension default when `None`.
    pub budget: Option<usize>,
}

/// Search budget used when none is given, by the superdimension of a half:
/// `(2,1)` halves make doubles with 36 unknowns and get a smaller budget.
pub fn default_budget(dims: (usize, usize)) -> usize {
    if dims.0 > dims.1 {
        2_000
    } else {
        20_000
    }
}

struct UnionFind(Vec<usize>);

impl UnionFind {
    fn find(&mut self, x: usize) -> usize {
        let mut r = x;
        while self.0[r] != r {
            r = self.0[r];
        }
        let mut y = x;
        while self.0[y] != r {
            let n = self.0[y];
            self.0[y] = r;
            y = n;
        }
        r
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.0[ra.max(rb)] = ra.min(rb);
        }
    }
}

/// Unifies one side of `cert` with `node` over the certificate parameters
/// and looks up the other side among `index`.
fn unify(
    cert: &IsoCertificate,
    target_side: bool,
    n: usize,
    nodes: &[Node],
    index: &HashMap<Vec<Rat>, usize>,
) -> Option<Edge> {
    let side = if target_side { &cert.target } else { &cert.source };
    let node = &nodes[n];
    if side.super_dim() != node.triple.super_dim() {
        return None;
    }
    let mut equations = Vec::new();
    let pairs = side.left.tensor.entries().iter().chain(side.right.tensor.entries());
    for (x, v) in pairs.zip(node.key.iter()) {
        let d = x.sub(&crate::scalar::Scalar::from_rat(v.clone()));
        if d.is_constant() && !d.is_zero() {
            return None;
        }
        equations.extend(d.zero_conditions());
    }
    let mut problem = Problem { equations, ..Default::default() };
    for p in &cert.ctx.params {
        let v = p.var();
        problem.unknowns.push(v);
        match &p.domain {
            Domain::Real => {}
            Domain::Sign => {
                problem.domains.insert(v, vec![Rat::one(), -Rat::one()]);
            }
            Domain::Discrete(vals) => {
                problem.domains.insert(v, vals.clone());
            }
        }
    }
    let mut edge = None;
    let mut accept = |sol: &crate::solver::Solution| {
        let mut b = Bindings::new();
        for p in &cert.ctx.params {
            match sol.get(p.var()).and_then(|x| x.as_rat()) {
                Some(r) => b.insert(&p.name, r),
                None => return false,
            }
        }
        let Ok(c) = cert.substitute(&b) else { return false };
        let other = if target_side { &c.source } else { &c.target };
        let Some(m) = tensor_key(other).and_then(|k| index.get(&k).copied()) else { return false };
        if m == n {
            return false;
        }
        let (s, t) = if target_side { (m, n) } else { (n, m) };
        if !check_instance(&c.matrix, &nodes[s].triple, &nodes[t].triple, Bindings::new()).passed() {
            return false;
        }
        let mut cert = c;
        cert.source = nodes[s].triple.clone();
        cert.target = nodes[t].triple.clone();
        edge = Some(Edge { source: s, target: t, evidence: Evidence::Catalog(cert.label()), cert });
        true
    };
    let opts = SolverOptions { budget: 5_000, ..Default::default() };
    solve(&problem, &opts, &mut accept);
    edge
}

/// Groups `nodes` by catalog certificates, then by pairwise search between
/// class representatives that share a fingerprint.
pub fn classify_doubles(
    nodes: Vec<Node>,
    certs: &[&IsoCertificate],
    opts: &ClassifyOptions,
) -> Result<ClassificationReport> {
    let mut index = HashMap::new();
    for (i, n) in nodes.iter().enumerate() {
        index.entry(n.key.clone()).or_insert(i);
    }
    let mut uf = UnionFind((0..nodes.len()).collect());
    let mut edges = Vec::new();
    for cert in certs {
        for n in 0..nodes.len() {
            for side in [true, false] {
                if let Some(e) = unify(cert, side, n, &nodes, &index) {
                    if uf.find(e.source) != uf.find(e.target) {
                        uf.union(e.source, e.target);
                        edges.push(e);
                    }
                }
            }
        }
    }
    let reps = |uf: &mut UnionFind| {
        let mut best: HashMap<usize, usize> = HashMap::new();
        for i in 0..nodes.len() {
            let r = uf.find(i);
            let e = best.entry(r).or_insert(i);
            if nodes[i].order < nodes[*e].order {
                *e = i;
            }
        }
        let mut v: Vec<usize> = best.into_values().collect();
        v.sort_by(|&a, &b| nodes[a].order.cmp(&nodes[b].order).then(a.cmp(&b)));
        v
    };
    let mut separations = Vec::new();
    let initial = reps(&mut uf);
    for (i, &a) in initial.iter().enumerate() {
        for &b in &initial[i + 1..] {
            if uf.find(a) == uf.find(b) {
                continue;
            }
            if nodes[a].fingerprint != nodes[b].fingerprint {
                separations.push(Separation {
                    a,
                    b,
                    reason: ExhaustReason::Fingerprint(nodes[a].fingerprint, nodes[b].fingerprint),
                    nodes: 0,
                    budget: 0,
                });
                continue;
            }
            let budget = opts.budget.unwrap_or_else(|| default_budget(nodes[a].triple.super_dim()));
            let sopts = SearchOptions { budget, ..Default::default() };
            match search_iso(&nodes[a].triple, &nodes[b].triple, &sopts)? {
                SearchOutcome::Found { cert, strategy, nodes: k } => {
                    uf.union(a, b);
                    edges.push(Edge {
                        source: a,
                        target: b,
                        cert: *cert,
                        evidence: Evidence::Search { strategy, nodes: k },
                    });
                }
                SearchOutcome::Exhausted { budget, nodes: k, reason, .. } => {
                    separations.push(Separation { a, b, reason, nodes: k, budget });
                }
            }
        }
    }
    let mut classes: Vec<Vec<usize>> = Vec::new();
    for r in reps(&mut uf) {
        let root = uf.find(r);
        let mut c = vec![r];
        c.extend((0..nodes.len()).filter(|&i| i != r && uf.find(i) == root));
        classes.push(c);
    }
    classes.sort_by_key(|c| c.iter().copied().min());
    separations.retain(|s| uf.find(s.a) != uf.find(s.b));
    Ok(ClassificationReport { nodes, edges, classes, separations })
}
