//! Dual structures compatible with a seed algebra, and their reduction by
//! the seed's automorphisms.

use super::group::normalized_key;
use crate::algebra::{transport_tensor, AutomorphismFamily, Grading, IndexRole, StructureTensor, SuperAlgebra};
use crate::error::{Error, Result};
use crate::iso::{intertwining_residuals, search_iso, Mask, SearchOptions};
use crate::linalg::Matrix;
use crate::scalar::{Bindings, Domain, ParamContext, Rat, Scalar, Var};
use crate::solver::{default_grid, solve, Problem, SolverOptions};
use crate::triple::{check_compatibility, t_dual, ManinTriple};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::collections::HashMap;

/// Unknown dual structure constants `F~^{IJ}_K` on independent slots:
/// `I < J`, or `I = J` odd, with `K` of parity `|I| + |J|`.
#[derive(Clone, Debug)]
pub struct DualAnsatz {
    pub grading: Grading,
    pub slots: Vec<(usize, usize, usize)>,
    pub unknowns: Vec<Var>,
}

impl DualAnsatz {
    pub fn new(m: usize, n: usize) -> DualAnsatz {
        let grading = Grading::standard(m, n);
        let d = grading.dim();
        let mut slots = Vec::new();
        for i in 0..d {
            for j in i..d {
                if i == j && !grading.is_odd(i) {
                    continue;
                }
                for k in 0..d {
                    if grading.admissible(i, j, k) {
                        slots.push((i, j, k));
                    }
                }
            }
        }
        let unknowns = (0..slots.len()).map(|s| Var::new(&format!("u{s}"))).collect();
        DualAnsatz { grading, slots, unknowns }
    }

    fn tensor_with(&self, value: impl Fn(usize) -> Scalar) -> StructureTensor {
        let mut t = StructureTensor::zero(self.grading.dim());
        t.role = IndexRole::Raised;
        for (s, &(i, j, k)) in self.slots.iter().enumerate() {
            let v = value(s);
            if i != j {
                let w = if self.grading.sign(i, j) == 1 { v.neg() } else { v.clone() };
                t.set(j, i, k, w);
            }
            t.set(i, j, k, v);
        }
        t
    }

    /// The dual with every slot an indeterminate.
    pub fn symbolic(&self) -> SuperAlgebra {
        let t = self.tensor_with(|s| Scalar::var(self.unknowns[s]));
        SuperAlgebra::new(self.grading.clone(), t, ParamContext::new())
    }

    /// The dual at slot values `vals`.
    pub fn instantiate(&self, vals: &[Rat]) -> SuperAlgebra {
        let t = self.tensor_with(|s| Scalar::from_rat(vals[s].clone()));
        SuperAlgebra::new(self.grading.clone(), t, ParamContext::new())
    }
}

#[derive(Clone, Debug)]
pub struct EnumerateOptions {
    pub grid: Vec<Rat>,
    pub budget: usize,
}

impl Default for EnumerateOptions {
    fn default() -> EnumerateOptions {
        EnumerateOptions { grid: default_grid(), budget: 200_000 }
    }
}

#[derive(Clone, Debug)]
pub struct Enumeration {
    pub solutions: Vec<SuperAlgebra>,
    pub nodes: usize,
    /// Whether no branch was cut by the grid.
    pub complete: bool,
}

/// Every grid point of the ansatz at which `(seed | dual)` is a Manin triple.
/// Mixed conditions are linear in the unknowns and are eliminated exactly
/// before any grid value is tried.
pub fn enumerate_duals(seed: &SuperAlgebra, ansatz: &DualAnsatz, opts: &EnumerateOptions) -> Result<Enumeration> {
    if seed.grading != ansatz.grading {
        return Err(Error::DimensionMismatch("seed and ansatz differ in superdimension".into()));
    }
    if seed.tensor.entries().iter().any(|x| !x.is_constant()) {
        return Err(Error::ConstraintViolation(format!("seed {} has unbound parameters", seed.label())));
    }
    let dual = ansatz.symbolic();
    let t = ManinTriple::new(seed.clone(), dual, ParamContext::new())?;
    let mut equations: Vec<_> = check_compatibility(&t)?.iter().flat_map(|r| r.value.zero_conditions()).collect();
    equations.sort_by_key(|p| p.total_degree());
    let problem = Problem { unknowns: ansatz.unknowns.clone(), equations, ..Default::default() };
    let sopts =
        SolverOptions { grid: opts.grid.clone(), budget: opts.budget, allow_radical: false, max_solutions: usize::MAX };
    let mut seen: HashMap<Vec<Rat>, ()> = HashMap::new();
    let mut solutions = Vec::new();
    let out = solve(&problem, &sopts, &mut |sol| {
        let Some(vals) =
            ansatz.unknowns.iter().map(|v| sol.get(*v).and_then(|x| x.as_rat())).collect::<Option<Vec<_>>>()
        else {
            return false;
        };
        if seen.contains_key(&vals) {
            return false;
        }
        let d = ansatz.instantiate(&vals);
        let ok = ManinTriple::new(seed.clone(), d.clone(), ParamContext::new())
            .and_then(|t| check_compatibility(&t))
            .is_ok_and(|r| r.is_empty());
        if ok {
            seen.insert(vals, ());
            solutions.push(d);
        }
        ok
    });
    if out.budget_hit {
        return Err(Error::BudgetExceeded(out.nodes));
    }
    Ok(Enumeration { solutions, nodes: out.nodes, complete: out.complete })
}

#[derive(Clone, Debug)]
pub struct OrbitSampling {
    /// Random instantiations per automorphism family.
    pub samples: usize,
    pub seed: u64,
    /// Also solve for an automorphism between every remaining pair.
    pub targeted: bool,
}

impl Default for OrbitSampling {
    fn default() -> OrbitSampling {
        OrbitSampling { samples: 200, seed: 0, targeted: true }
    }
}

/// `dual_to = A~ . dual_from` with `A~ = (A^{-1})^T` for the seed automorphism `A`.
#[derive(Clone, Debug)]
pub struct OrbitEdge {
    pub from: usize,
    pub to: usize,
    pub automorphism: Matrix,
}

#[derive(Clone, Debug)]
pub struct Orbit {
    pub representative: usize,
    pub members: Vec<usize>,
}

#[derive(Clone, Debug)]
pub struct OrbitReduction {
    pub orbits: Vec<Orbit>,
    pub edges: Vec<OrbitEdge>,
}

impl OrbitReduction {
    pub fn representatives(&self) -> Vec<usize> {
        self.orbits.iter().map(|o| o.representative).collect()
    }
}

fn entries_key(t: &StructureTensor) -> Option<Vec<Rat>> {
    t.entries().iter().map(|x| x.as_rat()).collect()
}

/// The dual action of `a` on `t`.
pub fn dual_action(t: &StructureTensor, a: &Matrix) -> Result<StructureTensor> {
    transport_tensor(t, &a.inverse()?.transpose(), &a.transpose())
}

fn root(p: &mut [usize], x: usize) -> usize {
    let mut r = x;
    while p[r] != r {
        r = p[r];
    }
    p[x] = r;
    r
}

/// Solves for a family member `A` with `A~ . from = to`, written without
/// inverses as `(A^T (x) A^T) to = from A^T`.
fn targeted(fam: &AutomorphismFamily, from: &StructureTensor, to: &StructureTensor) -> Option<Matrix> {
    let at = fam.matrix.transpose();
    let equations: Vec<_> =
        intertwining_residuals(to, from, &at).iter().flat_map(|r| r.value.zero_conditions()).collect();
    let mut problem = Problem { equations, nonzero: fam.nonzero.clone(), ..Default::default() };
    for p in &fam.ctx.params {
        problem.unknowns.push(p.var());
        match &p.domain {
            Domain::Real => {}
            Domain::Sign => {
                problem.domains.insert(p.var(), vec![Rat::one(), -Rat::one()]);
            }
            Domain::Discrete(v) => {
                problem.domains.insert(p.var(), v.clone());
            }
        }
    }
    let mut found = None;
    let sopts = SolverOptions { budget: 5_000, allow_radical: true, ..Default::default() };
    solve(&problem, &sopts, &mut |sol| {
        let mut b = Bindings::new();
        let mut radical = Vec::new();
        for p in &fam.ctx.params {
            match sol.get(p.var()) {
                Some(x) => match x.as_rat() {
                    Some(v) => b.insert(&p.name, v),
                    None => radical.push((p.var(), x.clone())),
                },
                None => return false,
            }
        }
        if fam.ctx.validate(&b).is_err() {
            return false;
        }
        let vals = b.vars();
        let bind = |x: &Scalar| -> Result<Scalar> {
            let mut y = x.substitute(&vals)?;
            for (v, r) in &radical {
                y = y.compose(*v, r)?;
            }
            Ok(y)
        };
        if fam.nonzero.iter().any(|c| bind(c).map_or(true, |x| x.is_zero())) {
            return false;
        }
        let Ok(a) = fam.matrix.map(bind) else { return false };
        let ok = dual_action(from, &a).is_ok_and(|t| t.entries() == to.entries());
        if ok {
            found = Some(a);
        }
        ok
    });
    found
}

/// Partitions `solutions` into orbits of the dual action. Orbits are merged
/// only through an explicit automorphism, so they can be over-split but
/// never wrongly merged. Each orbit is represented by the member with the
/// smallest [`normalized_key`].
pub fn reduce_orbits(
    solutions: &[SuperAlgebra],
    families: &[AutomorphismFamily],
    sampling: &OrbitSampling,
) -> Result<OrbitReduction> {
    let n = solutions.len();
    let keys: Vec<Vec<Rat>> = solutions
        .iter()
        .map(|s| entries_key(&s.tensor).ok_or_else(|| Error::ConstraintViolation("symbolic dual".into())))
        .collect::<Result<_>>()?;
    let index: HashMap<&Vec<Rat>, usize> = keys.iter().enumerate().map(|(i, k)| (k, i)).collect();
    let mut parent: Vec<usize> = (0..n).collect();
    let mut edges = Vec::new();
    let mut rng = ChaCha8Rng::seed_from_u64(sampling.seed);
    for fam in families {
        let branches = fam.ctx.branches();
        for s in 0..sampling.samples {
            let Some(b) = fam.ctx.sample(&mut rng, 50) else { break };
            let b = b.merged(&branches[s % branches.len()]);
            let Ok(a) = fam.instantiate(&b) else { continue };
            for i in 0..n {
                let Ok(t) = dual_action(&solutions[i].tensor, &a) else { continue };
                let Some(j) = entries_key(&t).and_then(|k| index.get(&k).copied()) else { continue };
                let (ri, rj) = (root(&mut parent, i), root(&mut parent, j));
                if ri != rj {
                    parent[ri.max(rj)] = ri.min(rj);
                    edges.push(OrbitEdge { from: i, to: j, automorphism: a.clone() });
                }
            }
        }
    }
    if sampling.targeted {
        for i in 0..n {
            for j in i + 1..n {
                if root(&mut parent, i) == root(&mut parent, j) {
                    continue;
                }
                if let Some(a) = families.iter().find_map(|f| targeted(f, &solutions[i].tensor, &solutions[j].tensor)) {
                    let (ri, rj) = (root(&mut parent, i), root(&mut parent, j));
                    parent[ri.max(rj)] = ri.min(rj);
                    edges.push(OrbitEdge { from: i, to: j, automorphism: a });
                }
            }
        }
    }
    let order: Vec<_> = keys.iter().map(|k| normalized_key(k)).collect();
    let mut groups: Vec<Vec<usize>> = Vec::new();
    let mut at: HashMap<usize, usize> = HashMap::new();
    for i in 0..n {
        let r = root(&mut parent, i);
        let g = *at.entry(r).or_insert_with(|| {
            groups.push(Vec::new());
            groups.len() - 1
        });
        groups[g].push(i);
    }
    let mut orbits: Vec<Orbit> = groups
        .into_iter()
        .map(|members| {
            let representative = *members.iter().min_by(|&&a, &&b| order[a].cmp(&order[b])).unwrap();
            Orbit { representative, members }
        })
        .collect();
    orbits.sort_by(|a, b| order[a.representative].cmp(&order[b.representative]));
    Ok(OrbitReduction { orbits, edges })
}

/// One orbit representative of a seed and the reference triples it is
/// isomorphic to.
#[derive(Clone, Debug)]
pub struct RecoveredDual {
    pub seed: String,
    pub dual: SuperAlgebra,
    pub orbit_size: usize,
    pub matches: Vec<String>,
}

#[derive(Clone, Debug)]
pub struct Recovery {
    pub duals: Vec<RecoveredDual>,
    /// Reference labels, identical triples merged as `a=b`.
    pub references: Vec<String>,
    pub solutions: usize,
}

impl Recovery {
    /// Every reference matched by exactly one representative and every
    /// representative matching exactly one reference.
    pub fn passed(&self) -> bool {
        self.duals.iter().all(|d| d.matches.len() == 1)
            && self.references.iter().all(|r| self.duals.iter().filter(|d| d.matches.contains(r)).count() == 1)
    }
}

/// Enumerates duals for each seed, reduces them by the seed automorphisms and
/// matches the representatives against `references` and their T-duals up to
/// isomorphism of triples.
pub fn recover_triples(
    seeds: &[(String, SuperAlgebra, Vec<AutomorphismFamily>)],
    references: &[(String, ManinTriple)],
    opts: &EnumerateOptions,
    sampling: &OrbitSampling,
    budget: usize,
) -> Result<Recovery> {
    let mut refs: Vec<(String, ManinTriple)> = Vec::new();
    for (name, t) in references {
        for (label, r) in [(name.clone(), t.clone()), (format!("T({name})"), t_dual(t))] {
            let key = entries_key(&r.left.tensor).zip(entries_key(&r.right.tensor));
            match refs.iter_mut().find(|(_, x)| entries_key(&x.left.tensor).zip(entries_key(&x.right.tensor)) == key) {
                Some(e) => e.0 = format!("{}={label}", e.0),
                None => refs.push((label, r)),
            }
        }
    }
    let sopts = SearchOptions { budget, mask: Mask::SplitPreserving, ..Default::default() };
    let mut duals = Vec::new();
    let mut total = 0;
    for (name, seed, fams) in seeds {
        let ans = DualAnsatz::new(seed.grading.super_dim().0, seed.grading.super_dim().1);
        let e = enumerate_duals(seed, &ans, opts)?;
        total += e.solutions.len();
        let red = reduce_orbits(&e.solutions, fams, sampling)?;
        for o in &red.orbits {
            let dual = e.solutions[o.representative].clone();
            let t = ManinTriple::new(seed.clone(), dual.clone(), ParamContext::new())?;
            let mut matches = Vec::new();
            for (label, r) in &refs {
                if r.left.grading != t.left.grading {
                    continue;
                }
                if search_iso(&t, r, &sopts)?.certificate().is_some() {
                    matches.push(label.clone());
                }
            }
            duals.push(RecoveredDual { seed: name.clone(), dual, orbit_size: o.members.len(), matches });
        }
    }
    Ok(Recovery { duals, references: refs.into_iter().map(|(l, _)| l).collect(), solutions: total })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::Catalog;

    #[test]
    fn ansatz_slot_count() {
        // (1,1): [b,f]^f and [f,f]^b
        assert_eq!(DualAnsatz::new(1, 1).slots.len(), 2);
        // (2,1): [b1,b2]^{b1,b2}, [b_i,f]^f, [f,f]^{b1,b2}
        assert_eq!(DualAnsatz::new(2, 1).slots.len(), 6);
    }

    #[test]
    fn abelian_seed_keeps_every_jacobi_solution() {
        let cat = Catalog::builtin().unwrap();
        let a11 = cat.algebra("A11", &Bindings::new()).unwrap();
        let ans = DualAnsatz::new(1, 1);
        let grid = vec![Rat::zero(), Rat::one(), Rat::int(-1)];
        let e = enumerate_duals(&a11, &ans, &EnumerateOptions { grid, budget: 10_000 }).unwrap();
        // x*y = 0 over {0, 1, -1}
        assert_eq!(e.solutions.len(), 5);
        for s in &e.solutions {
            assert!(s.check_jacobi().is_empty());
        }
    }

    #[test]
    fn scaling_merges_n_type_duals() {
        let cat = Catalog::builtin().unwrap();
        let ans = DualAnsatz::new(1, 1);
        let one = ans.instantiate(&[Rat::zero(), Rat::one()]);
        let four = ans.instantiate(&[Rat::zero(), Rat::int(4)]);
        let fams = cat.automorphisms("A11").unwrap();
        let r = reduce_orbits(&[one, four], fams, &OrbitSampling::default()).unwrap();
        assert_eq!(r.orbits.len(), 1);
        assert_eq!(r.edges.len(), 1);
    }

    #[test]
    fn signs_stay_apart_for_s11() {
        let cat = Catalog::builtin().unwrap();
        let ans = DualAnsatz::new(1, 1);
        let plus = ans.instantiate(&[Rat::zero(), Rat::one()]);
        let minus = ans.instantiate(&[Rat::zero(), Rat::int(-1)]);
        let fams = cat.automorphisms("S11").unwrap();
        let r = reduce_orbits(&[plus.clone(), minus], fams, &OrbitSampling::default()).unwrap();
        assert_eq!(r.orbits.len(), 2);
        let single = reduce_orbits(&[plus], fams, &OrbitSampling::default()).unwrap();
        assert_eq!(single.representatives(), vec![0]);
    }
}
