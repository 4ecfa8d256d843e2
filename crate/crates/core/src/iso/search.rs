//! Bounded search for isomorphisms between concrete doubles.

use super::certificate::{check_instance, t_duality, IsoCertificate};
use super::rsolve::{dual_form, odd_action, r_to_certificate, solve_r};
use crate::algebra::{commutant_series, CommutantFingerprint, Grading, StructureTensor, SuperAlgebra};
use crate::error::{Error, Result};
use crate::form::canonical_form;
use crate::linalg::Matrix;
use crate::scalar::{Bindings, Monomial, Poly, Rat, Scalar, Var};
use crate::solver::{default_grid, solve, Problem, SolverOptions};
use crate::triple::{build_double, t_dual, ManinTriple};
use std::fmt;

/// Which entries of `C` are unknowns.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mask {
    /// Every parity-preserving entry.
    Even,
    /// Even and block diagonal across the two halves: isomorphisms of triples.
    SplitPreserving,
}

#[derive(Clone, Debug)]
pub struct SearchOptions {
    pub budget: usize,
    pub grid: Vec<Rat>,
    pub allow_radical: bool,
    pub mask: Mask,
    /// Try identity, T-duality and shear before the grid.
    pub shortcuts: bool,
}

impl Default for SearchOptions {
    fn default() -> SearchOptions {
        SearchOptions { budget: 20_000, grid: default_grid(), allow_radical: false, mask: Mask::Even, shortcuts: true }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Strategy {
    Identity,
    TDuality,
    Shear,
    Grid,
}

impl fmt::Display for Strategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Strategy::Identity => "identity",
            Strategy::TDuality => "T-duality",
            Strategy::Shear => "shear",
            Strategy::Grid => "grid",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ExhaustReason {
    /// Commutant series differ, so no isomorphism exists.
    Fingerprint(CommutantFingerprint, CommutantFingerprint),
    /// The node budget ran out.
    Budget,
    /// The bounded space was searched without a hit.
    Space,
}

#[derive(Clone, Debug)]
pub enum SearchOutcome {
    Found { cert: Box<IsoCertificate>, strategy: Strategy, nodes: usize },
    Exhausted { budget: usize, nodes: usize, complete: bool, reason: ExhaustReason },
}

impl SearchOutcome {
    pub fn certificate(&self) -> Option<&IsoCertificate> {
        match self {
            SearchOutcome::Found { cert, .. } => Some(cert),
            SearchOutcome::Exhausted { .. } => None,
        }
    }
}

fn concrete(t: &StructureTensor) -> Result<Vec<Rat>> {
    t.entries()
        .iter()
        .map(|x| {
            x.as_rat().ok_or_else(|| Error::ConstraintViolation(format!("search needs bound parameters, found {x}")))
        })
        .collect()
}

fn allowed(g: &Grading, mask: Mask, a: usize, p: usize) -> bool {
    let half = g.dim() / 2;
    g.parity(a) == g.parity(p) && (mask == Mask::Even || (a < half) == (p < half))
}

/// Unknown entries `c_a_p` of `C` together with conditions (i) and (ii)
/// as polynomials over Q.
pub fn iso_equations(
    f: &StructureTensor,
    g: &StructureTensor,
    grading: &Grading,
    form: &Matrix,
    mask: Mask,
) -> Result<(Vec<Var>, Vec<Poly>, Vec<Vec<Option<Var>>>)> {
    let d = f.dim();
    let fv = concrete(f)?;
    let gv = concrete(g)?;
    let bv: Vec<Rat> = form.entries().iter().map(|x| x.as_rat().unwrap()).collect();
    let mut unknowns = Vec::new();
    let mut cells = vec![vec![None; d]; d];
    for (a, row) in cells.iter_mut().enumerate() {
        for (p, cell) in row.iter_mut().enumerate() {
            if allowed(grading, mask, a, p) {
                let v = Var::new(&format!("c{a}_{p}"));
                unknowns.push(v);
                *cell = Some(v);
            }
        }
    }
    let term = |c: Rat, vs: &[Var]| {
        let mut m = Monomial::one();
        for &v in vs {
            m = m.mul(&Monomial::var(v, 1));
        }
        Poly::term(c, m)
    };
    let mut eqs = Vec::new();
    for a in 0..d {
        for b in a..d {
            let mut e = Poly::constant(-bv[a * d + b].clone());
            for p in 0..d {
                let Some(x) = cells[a][p] else { continue };
                for q in 0..d {
                    let bpq = &bv[p * d + q];
                    if bpq.is_zero() {
                        continue;
                    }
                    let Some(y) = cells[b][q] else { continue };
                    e = e.add(&term(bpq.clone(), &[x, y]));
                }
            }
            eqs.push(e);
        }
    }
    let nz: Vec<(usize, usize, usize, Rat)> = (0..d)
        .flat_map(|p| (0..d).flat_map(move |q| (0..d).map(move |r| (p, q, r))))
        .filter_map(|(p, q, r)| {
            let x = &fv[(p * d + q) * d + r];
            (!x.is_zero()).then(|| (p, q, r, x.clone()))
        })
        .collect();
    for a in 0..d {
        for b in a..d {
            let mut v = vec![Poly::zero(); d];
            for (p, q, r, x) in &nz {
                let (Some(s), Some(t)) = (cells[a][*p], cells[b][*q]) else { continue };
                v[*r] = v[*r].add(&term(x.clone(), &[s, t]));
            }
            for k in 0..d {
                let y = &gv[(a * d + b) * d + k];
                if y.is_zero() {
                    continue;
                }
                for (r, vr) in v.iter_mut().enumerate() {
                    if let Some(s) = cells[k][r] {
                        *vr = vr.sub(&term(y.clone(), &[s]));
                    }
                }
            }
            eqs.extend(v.into_iter().filter(|e| !e.is_zero()));
        }
    }
    Ok((unknowns, eqs, cells))
}

/// Whether `t` is `(C | N)` with `C` of superdimension `(1,n)` and `N`
/// carrying only `[f~^j, f~^k] = G^{jk} b~^1`.
fn shear_shape(t: &ManinTriple) -> bool {
    let (m, n) = t.super_dim();
    if m != 1 || n == 0 {
        return false;
    }
    let mut rest = t.right.tensor.clone();
    for j in 0..n {
        for k in 0..n {
            rest.set(1 + j, 1 + k, 0, Scalar::zero());
        }
    }
    rest.is_zero()
}

/// `(left | abelian) -> t` through the symmetric shear.
fn shear_from_abelian(t: &ManinTriple) -> Option<IsoCertificate> {
    if !shear_shape(t) {
        return None;
    }
    let h = odd_action(&t.left).ok()?;
    let g = dual_form(&t.right).ok()?;
    let r = solve_r(&h, &g).ok()?.ok()?;
    let (m, n) = t.super_dim();
    let mut base = t.clone();
    base.id = None;
    base.right = SuperAlgebra::abelian(m, n);
    base.right.tensor.role = crate::algebra::IndexRole::Raised;
    r_to_certificate(&r, &base).ok()
}

fn verified(c: &Matrix, src: &ManinTriple, tgt: &ManinTriple) -> bool {
    check_instance(c, src, tgt, Bindings::new()).passed()
}

fn found(matrix: Matrix, src: &ManinTriple, tgt: &ManinTriple, strategy: Strategy, nodes: usize) -> SearchOutcome {
    let cert = IsoCertificate { id: None, matrix, source: src.clone(), target: tgt.clone(), ctx: src.ctx.clone() };
    SearchOutcome::Found { cert: Box::new(cert), strategy, nodes }
}

/// Fingerprint filter, then identity, T-duality and shear shortcuts, then
/// the exact grid search over the masked ansatz.
pub fn search_iso(src: &ManinTriple, tgt: &ManinTriple, opts: &SearchOptions) -> Result<SearchOutcome> {
    let ds = build_double(src)?.algebra;
    let dt = build_double(tgt)?.algebra;
    if ds.dim() != dt.dim() || src.super_dim() != tgt.super_dim() {
        return Err(Error::DimensionMismatch("doubles of different superdimension".into()));
    }
    concrete(&ds.tensor)?;
    concrete(&dt.tensor)?;
    let fs = commutant_series(&ds, &Bindings::new())?;
    let ft = commutant_series(&dt, &Bindings::new())?;
    if fs != ft {
        return Ok(SearchOutcome::Exhausted {
            budget: opts.budget,
            nodes: 0,
            complete: true,
            reason: ExhaustReason::Fingerprint(fs, ft),
        });
    }
    let n = ds.dim();
    if opts.shortcuts {
        let id = Matrix::identity(n);
        if verified(&id, src, tgt) {
            return Ok(found(id, src, tgt, Strategy::Identity, 0));
        }
        if opts.mask == Mask::Even {
            let tc = t_duality(src);
            if verified(&tc.matrix, src, tgt) {
                return Ok(found(tc.matrix, src, tgt, Strategy::TDuality, 0));
            }
        }
        if let Some(c) = shear_between(src, tgt, opts.mask) {
            if verified(&c, src, tgt) {
                return Ok(found(c, src, tgt, Strategy::Shear, 0));
            }
        }
    }
    let (m, k) = src.super_dim();
    let form = canonical_form(m, k).matrix;
    let (unknowns, equations, cells) = iso_equations(&ds.tensor, &dt.tensor, &ds.grading, &form, opts.mask)?;
    let build = |sol: &crate::solver::Solution| {
        let mut c = Matrix::zeros(n, n);
        for (a, row) in cells.iter().enumerate() {
            for (p, cell) in row.iter().enumerate() {
                if let Some(v) = cell {
                    c.set(a, p, sol.get(*v).cloned().unwrap_or_default());
                }
            }
        }
        c
    };
    let problem = Problem { unknowns, equations, ..Default::default() };
    let sopts = SolverOptions {
        grid: opts.grid.clone(),
        budget: opts.budget,
        allow_radical: opts.allow_radical,
        max_solutions: 1,
    };
    let out = solve(&problem, &sopts, &mut |sol| {
        let c = build(sol);
        c.det().is_ok_and(|d| !d.is_zero()) && verified(&c, src, tgt)
    });
    if let Some(sol) = out.solutions.first() {
        return Ok(found(build(sol), src, tgt, Strategy::Grid, out.nodes));
    }
    Ok(SearchOutcome::Exhausted {
        budget: opts.budget,
        nodes: out.nodes,
        complete: out.complete,
        reason: if out.budget_hit { ExhaustReason::Budget } else { ExhaustReason::Space },
    })
}

/// Shear certificates composed through `(left | abelian)`, also across T-duality.
/// Shears are never split, so none are offered under `Mask::SplitPreserving`.
fn shear_between(src: &ManinTriple, tgt: &ManinTriple, mask: Mask) -> Option<Matrix> {
    if mask == Mask::SplitPreserving {
        return None;
    }
    let same_left = src.left.tensor.entries() == tgt.left.tensor.entries();
    if same_left {
        let a = shear_from_abelian(src)?;
        let b = shear_from_abelian(tgt)?;
        return b.matrix.mul(&a.matrix.inverse().ok()?).ok();
    }
    let ts = t_dual(src);
    if ts.left.tensor.entries() == tgt.left.tensor.entries() {
        let a = shear_from_abelian(&ts)?;
        let b = shear_from_abelian(tgt)?;
        let tc = t_duality(src).matrix;
        return b.matrix.mul(&a.matrix.inverse().ok()?).ok()?.mul(&tc).ok();
    }
    None
}
