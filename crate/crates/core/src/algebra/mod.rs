//! Lie superalgebras as dense structure-constant tensors.

mod automorphism;
mod commutant;

pub use automorphism::AutomorphismFamily;
pub use commutant::{commutant_series, CommutantFingerprint};

use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::scalar::{Bindings, ParamContext, Rat, Scalar, Var};
use std::collections::HashMap;
use std::fmt;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Parity {
    Even,
    Odd,
}

impl Parity {
    pub fn bit(self) -> u8 {
        match self {
            Parity::Even => 0,
            Parity::Odd => 1,
        }
    }

    pub fn add(self, o: Parity) -> Parity {
        if self.bit() ^ o.bit() == 0 {
            Parity::Even
        } else {
            Parity::Odd
        }
    }
}

/// Parity of each basis vector.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Grading {
    parities: Vec<Parity>,
}

impl Grading {
    /// `b_1..b_m, f_1..f_n`.
    pub fn standard(m: usize, n: usize) -> Grading {
        let mut parities = vec![Parity::Even; m];
        parities.extend(std::iter::repeat_n(Parity::Odd, n));
        Grading { parities }
    }

    /// Two copies of `g` side by side, as in a double.
    pub fn double(g: &Grading) -> Grading {
        let mut parities = g.parities.clone();
        parities.extend_from_slice(&g.parities);
        Grading { parities }
    }

    pub fn from_parities(parities: Vec<Parity>) -> Grading {
        Grading { parities }
    }

    pub fn dim(&self) -> usize {
        self.parities.len()
    }

    pub fn parity(&self, i: usize) -> Parity {
        self.parities[i]
    }

    pub fn parities(&self) -> &[Parity] {
        &self.parities
    }

    pub fn is_odd(&self, i: usize) -> bool {
        self.parities[i] == Parity::Odd
    }

    /// `(#even, #odd)`.
    pub fn super_dim(&self) -> (usize, usize) {
        let n = self.parities.iter().filter(|p| **p == Parity::Odd).count();
        (self.dim() - n, n)
    }

    /// `(-1)^{|i||j|}`.
    pub fn sign(&self, i: usize, j: usize) -> i64 {
        if self.is_odd(i) && self.is_odd(j) {
            -1
        } else {
            1
        }
    }

    /// Whether `F_{ij}^k` may be nonzero.
    pub fn admissible(&self, i: usize, j: usize, k: usize) -> bool {
        self.parity(i).add(self.parity(j)) == self.parity(k)
    }

    pub fn indices(&self, p: Parity) -> Vec<usize> {
        (0..self.dim()).filter(|&i| self.parity(i) == p).collect()
    }

    /// Whether a matrix preserves parity (an even map).
    pub fn is_even_matrix(&self, m: &Matrix) -> bool {
        (0..self.dim()).all(|i| (0..self.dim()).all(|j| self.parity(i) == self.parity(j) || m.get(i, j).is_zero()))
    }
}

/// Which side of a pairing the indices refer to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Default)]
pub enum IndexRole {
    /// `F_{IJ}^K`.
    #[default]
    Lower,
    /// `F~^{IJ}_K`, the dual algebra in the dual basis.
    Raised,
}

/// Dense `dim^3` tensor `F[i][j][k]` with `[X_i, X_j] = sum_k F[i][j][k] X_k`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct StructureTensor {
    dim: usize,
    data: Vec<Scalar>,
    pub role: IndexRole,
}

impl StructureTensor {
    pub fn zero(dim: usize) -> StructureTensor {
        StructureTensor { dim, data: vec![Scalar::zero(); dim * dim * dim], role: IndexRole::Lower }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    fn idx(&self, i: usize, j: usize, k: usize) -> usize {
        (i * self.dim + j) * self.dim + k
    }

    pub fn get(&self, i: usize, j: usize, k: usize) -> &Scalar {
        &self.data[self.idx(i, j, k)]
    }

    pub fn set(&mut self, i: usize, j: usize, k: usize, v: Scalar) {
        let x = self.idx(i, j, k);
        self.data[x] = v;
    }

    pub fn add_to(&mut self, i: usize, j: usize, k: usize, v: &Scalar) {
        let x = self.idx(i, j, k);
        self.data[x] = self.data[x].add(v);
    }

    /// `[X_i, X_j]` as a coefficient vector.
    pub fn row(&self, i: usize, j: usize) -> &[Scalar] {
        let s = self.idx(i, j, 0);
        &self.data[s..s + self.dim]
    }

    pub fn entries(&self) -> &[Scalar] {
        &self.data
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| x.is_zero())
    }

    pub fn map(&self, f: impl Fn(&Scalar) -> Result<Scalar>) -> Result<StructureTensor> {
        Ok(StructureTensor { dim: self.dim, data: self.data.iter().map(f).collect::<Result<_>>()?, role: self.role })
    }
}

/// `(i, j, k)` with the offending value.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TensorResidual {
    pub i: usize,
    pub j: usize,
    pub k: usize,
    pub value: Scalar,
}

/// A nonzero component of the graded Jacobi sum on `(x, y, z)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct JacobiResidual {
    pub x: usize,
    pub y: usize,
    pub z: usize,
    pub k: usize,
    pub value: Scalar,
    /// The sign branch in which the residual appears.
    pub branch: Bindings,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SuperAlgebra {
    pub name: Option<String>,
    pub grading: Grading,
    pub tensor: StructureTensor,
    pub ctx: ParamContext,
    pub basis: Vec<String>,
}

pub fn standard_basis_names(m: usize, n: usize) -> Vec<String> {
    (1..=m).map(|i| format!("b{i}")).chain((1..=n).map(|i| format!("f{i}"))).collect()
}

impl SuperAlgebra {
    pub fn new(grading: Grading, tensor: StructureTensor, ctx: ParamContext) -> SuperAlgebra {
        let (m, n) = grading.super_dim();
        let basis = if grading == Grading::standard(m, n) {
            standard_basis_names(m, n)
        } else {
            (0..grading.dim()).map(|i| format!("e{}", i + 1)).collect()
        };
        SuperAlgebra { name: None, grading, tensor, ctx, basis }
    }

    pub fn abelian(m: usize, n: usize) -> SuperAlgebra {
        SuperAlgebra::new(Grading::standard(m, n), StructureTensor::zero(m + n), ParamContext::new())
    }

    pub fn with_name(mut self, name: &str) -> SuperAlgebra {
        self.name = Some(name.to_string());
        self
    }

    pub fn dim(&self) -> usize {
        self.grading.dim()
    }

    pub fn label(&self) -> String {
        self.name.clone().unwrap_or_else(|| "<anonymous>".into())
    }

    pub fn bracket(&self, u: &[Scalar], v: &[Scalar]) -> Vec<Scalar> {
        let d = self.dim();
        let mut out = vec![Scalar::zero(); d];
        for i in 0..d {
            if u[i].is_zero() {
                continue;
            }
            for j in 0..d {
                if v[j].is_zero() {
                    continue;
                }
                let c = u[i].mul(&v[j]);
                for (k, o) in out.iter_mut().enumerate() {
                    let f = self.tensor.get(i, j, k);
                    if !f.is_zero() {
                        *o = o.add(&c.mul(f));
                    }
                }
            }
        }
        out
    }

    /// Entries violating the parity rule.
    pub fn check_grading(&self) -> Vec<TensorResidual> {
        let d = self.dim();
        let mut out = Vec::new();
        for i in 0..d {
            for j in 0..d {
                for k in 0..d {
                    let v = self.tensor.get(i, j, k);
                    if !self.grading.admissible(i, j, k) && !v.is_zero() {
                        out.push(TensorResidual { i, j, k, value: v.clone() });
                    }
                }
            }
        }
        out
    }

    /// `F_ij^k + (-1)^{|i||j|} F_ji^k` wherever it is nonzero.
    pub fn check_antisymmetry(&self) -> Vec<TensorResidual> {
        let d = self.dim();
        let mut out = Vec::new();
        for i in 0..d {
            for j in i..d {
                for k in 0..d {
                    let a = self.tensor.get(i, j, k);
                    let b = self.tensor.get(j, i, k);
                    let v = if self.grading.sign(i, j) == 1 { a.add(b) } else { a.sub(b) };
                    if !v.is_zero() {
                        out.push(TensorResidual { i, j, k, value: v });
                    }
                }
            }
        }
        out
    }

    /// Graded Jacobi sums without branching on sign parameters.
    pub fn jacobi_residuals(&self) -> Vec<JacobiResidual> {
        jacobi_of(&self.grading, &self.tensor, &Bindings::new())
    }

    /// Graded Jacobi sums, split over every sign and discrete branch of the context.
    pub fn check_jacobi(&self) -> Vec<JacobiResidual> {
        if !self.ctx.has_branches() {
            return self.jacobi_residuals();
        }
        let mut out = Vec::new();
        for b in self.ctx.branches() {
            let vals = b.vars();
            match self.tensor.map(|x| x.substitute(&vals)) {
                Ok(t) => out.extend(jacobi_of(&self.grading, &t, &b)),
                Err(_) => out.push(JacobiResidual { x: 0, y: 0, z: 0, k: 0, value: Scalar::one(), branch: b }),
            }
        }
        out
    }

    pub fn is_lie_superalgebra(&self) -> bool {
        self.check_grading().is_empty() && self.check_antisymmetry().is_empty() && self.check_jacobi().is_empty()
    }

    /// Binds parameters after validating them against the context.
    pub fn substitute(&self, b: &Bindings) -> Result<SuperAlgebra> {
        let ctx = self.ctx.restrict(b)?;
        let vals = b.vars();
        Ok(SuperAlgebra { tensor: self.tensor.map(|x| x.substitute(&vals))?, ctx, ..self.clone() })
    }

    /// Binds parameters without consulting the context.
    pub fn substitute_unchecked(&self, vals: &HashMap<Var, Rat>) -> Result<SuperAlgebra> {
        Ok(SuperAlgebra { tensor: self.tensor.map(|x| x.substitute(vals))?, ..self.clone() })
    }

    /// Structure constants in the basis `Y_a = sum_p M[a][p] X_p`.
    pub fn transport(&self, m: &Matrix) -> Result<SuperAlgebra> {
        let minv = m.inverse()?;
        Ok(SuperAlgebra { tensor: transport_tensor(&self.tensor, m, &minv)?, ..self.clone() })
    }

    /// Whether the rows of `a` define an automorphism (`a` invertible and
    /// `[a X_i, a X_j] = sum_k F_ij^k a X_k`).
    pub fn is_automorphism(&self, a: &Matrix) -> Result<bool> {
        if a.rows() != self.dim() || a.cols() != self.dim() {
            return Err(Error::DimensionMismatch("automorphism size".into()));
        }
        if a.det()?.is_zero() {
            return Ok(false);
        }
        Ok(automorphism_residuals(&self.tensor, a).is_empty())
    }

    pub fn is_abelian(&self) -> bool {
        self.tensor.is_zero()
    }

    /// Nonzero brackets `[X_i, X_j]` with `i <= j`, as `(i, j, vector)`.
    pub fn nonzero_brackets(&self) -> Vec<(usize, usize, Vec<Scalar>)> {
        let d = self.dim();
        let mut out = Vec::new();
        for i in 0..d {
            for j in i..d {
                let r = self.tensor.row(i, j);
                if r.iter().any(|x| !x.is_zero()) {
                    out.push((i, j, r.to_vec()));
                }
            }
        }
        out
    }

    /// Text for one linear combination of basis vectors.
    pub fn format_vector(&self, v: &[Scalar]) -> String {
        format_combination(v, &self.basis)
    }
}

pub fn format_combination(v: &[Scalar], names: &[String]) -> String {
    let mut s = String::new();
    for (k, c) in v.iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        let name = &names[k];
        let (neg, body) = if c.is_one() {
            (false, name.clone())
        } else if c.neg().is_one() {
            (true, name.clone())
        } else {
            let txt = c.to_string();
            let simple = c.as_rat().is_some() || !(txt.contains(' ') || txt.contains('+'));
            match c.as_rat() {
                Some(r) if r.is_negative() => (true, format!("{}*{name}", r.abs())),
                _ if simple => (false, format!("{txt}*{name}")),
                _ => (false, format!("({txt})*{name}")),
            }
        };
        if s.is_empty() {
            if neg {
                s.push('-');
            }
        } else {
            s.push_str(if neg { " - " } else { " + " });
        }
        s.push_str(&body);
    }
    if s.is_empty() {
        s.push('0');
    }
    s
}

impl fmt::Display for SuperAlgebra {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let bs = self.nonzero_brackets();
        if bs.is_empty() {
            return f.write_str("abelian");
        }
        for (n, (i, j, v)) in bs.iter().enumerate() {
            if n > 0 {
                f.write_str(", ")?;
            }
            write!(f, "[{},{}] = {}", self.basis[*i], self.basis[*j], self.format_vector(v))?;
        }
        Ok(())
    }
}

fn jacobi_of(g: &Grading, t: &StructureTensor, branch: &Bindings) -> Vec<JacobiResidual> {
    let d = g.dim();
    // nz[a][b] = nonzero (m, F_ab^m)
    let nz: Vec<Vec<Vec<(usize, Scalar)>>> = (0..d)
        .map(|a| {
            (0..d)
                .map(|b| (0..d).filter(|&m| !t.get(a, b, m).is_zero()).map(|m| (m, t.get(a, b, m).clone())).collect())
                .collect()
        })
        .collect();
    let mut out = Vec::new();
    // [x,[y,z]] with sign
    let nested = |x: usize, y: usize, z: usize, s: i64, acc: &mut Vec<Scalar>| {
        for (m, c) in &nz[y][z] {
            for (k, e) in &nz[x][*m] {
                let v = c.mul(e);
                acc[*k] = if s == 1 { acc[*k].add(&v) } else { acc[*k].sub(&v) };
            }
        }
    };
    for x in 0..d {
        for y in 0..d {
            for z in 0..d {
                let mut acc = vec![Scalar::zero(); d];
                nested(x, y, z, g.sign(x, z), &mut acc);
                nested(y, z, x, g.sign(y, x), &mut acc);
                nested(z, x, y, g.sign(z, y), &mut acc);
                for (k, v) in acc.into_iter().enumerate() {
                    if !v.is_zero() {
                        out.push(JacobiResidual { x, y, z, k, value: v, branch: branch.clone() });
                    }
                }
            }
        }
    }
    out
}

/// `F'_ab^c` with `Y = M X`: `F' = (M (x) M) F M^{-1}`.
pub fn transport_tensor(t: &StructureTensor, m: &Matrix, minv: &Matrix) -> Result<StructureTensor> {
    let d = t.dim();
    if m.rows() != d || m.cols() != d {
        return Err(Error::DimensionMismatch(format!("basis change of size {} on dimension {d}", m.rows())));
    }
    let mut out = StructureTensor::zero(d);
    out.role = t.role;
    for a in 0..d {
        for b in 0..d {
            // v_r = sum_pq M_ap M_bq F_pq^r
            let mut v = vec![Scalar::zero(); d];
            for p in 0..d {
                let map = m.get(a, p);
                if map.is_zero() {
                    continue;
                }
                for q in 0..d {
                    let mbq = m.get(b, q);
                    if mbq.is_zero() {
                        continue;
                    }
                    let c = map.mul(mbq);
                    for (r, x) in v.iter_mut().enumerate() {
                        let f = t.get(p, q, r);
                        if !f.is_zero() {
                            *x = x.add(&c.mul(f));
                        }
                    }
                }
            }
            for c in 0..d {
                let mut s = Scalar::zero();
                for (r, x) in v.iter().enumerate() {
                    let e = minv.get(r, c);
                    if !x.is_zero() && !e.is_zero() {
                        s = s.add(&x.mul(e));
                    }
                }
                out.set(a, b, c, s);
            }
        }
    }
    Ok(out)
}

/// Components of `A_I^p A_J^q F_pq^r - F_IJ^K A_K^r` that do not vanish.
pub fn automorphism_residuals(t: &StructureTensor, a: &Matrix) -> Vec<TensorResidual> {
    let d = t.dim();
    let mut out = Vec::new();
    for i in 0..d {
        for j in 0..d {
            for r in 0..d {
                let mut lhs = Scalar::zero();
                for p in 0..d {
                    let aip = a.get(i, p);
                    if aip.is_zero() {
                        continue;
                    }
                    for q in 0..d {
                        let f = t.get(p, q, r);
                        if f.is_zero() {
                            continue;
                        }
                        lhs = lhs.add(&aip.mul(a.get(j, q)).mul(f));
                    }
                }
                let mut rhs = Scalar::zero();
                for k in 0..d {
                    let f = t.get(i, j, k);
                    if !f.is_zero() {
                        rhs = rhs.add(&f.mul(a.get(k, r)));
                    }
                }
                let v = lhs.sub(&rhs);
                if !v.is_zero() {
                    out.push(TensorResidual { i, j, k: r, value: v });
                }
            }
        }
    }
    out
}

/// Builds a tensor from brackets given on ordered pairs, filling the partner
/// entry by graded antisymmetry.
pub fn tensor_from_brackets(g: &Grading, brackets: &[(usize, usize, Vec<Scalar>)]) -> StructureTensor {
    let mut t = StructureTensor::zero(g.dim());
    for (i, j, v) in brackets {
        for (k, c) in v.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            t.set(*i, *j, k, c.clone());
            if i != j {
                let partner = if g.sign(*i, *j) == 1 { c.neg() } else { c.clone() };
                t.set(*j, *i, k, partner);
            }
        }
    }
    t
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f_algebra(b1f1: Scalar) -> SuperAlgebra {
        let g = Grading::standard(2, 1);
        let e = |k: usize, c: Scalar| {
            let mut v = vec![Scalar::zero(); 3];
            v[k] = c;
            v
        };
        let t =
            tensor_from_brackets(&g, &[(0, 1, e(1, Scalar::one())), (0, 2, e(2, b1f1)), (2, 2, e(1, Scalar::one()))]);
        SuperAlgebra::new(g, t, ParamContext::new())
    }

    #[test]
    fn f_satisfies_jacobi() {
        let a = f_algebra(Scalar::frac(1, 2));
        assert!(a.check_antisymmetry().is_empty());
        assert!(a.check_jacobi().is_empty());
    }

    #[test]
    fn mutant_of_f_fails_on_b1_f1_f1() {
        let a = f_algebra(Scalar::one());
        let r = a.check_jacobi();
        let hit = r.iter().find(|r| (r.x, r.y, r.z) == (0, 2, 2)).expect("residual on (b1,f1,f1)");
        assert_eq!((hit.k, hit.value.clone()), (1, Scalar::int(-1)));
    }

    #[test]
    fn even_self_bracket_breaks_antisymmetry() {
        let g = Grading::standard(1, 0);
        let mut t = StructureTensor::zero(1);
        t.set(0, 0, 0, Scalar::one());
        let a = SuperAlgebra::new(g, t, ParamContext::new());
        assert!(!a.check_antisymmetry().is_empty());
    }

    #[test]
    fn odd_self_bracket_is_symmetric() {
        let g = Grading::standard(1, 1);
        let mut t = StructureTensor::zero(2);
        t.set(1, 1, 0, Scalar::one());
        let a = SuperAlgebra::new(g, t, ParamContext::new());
        assert!(a.check_antisymmetry().is_empty());
        assert!(a.check_jacobi().is_empty());
    }

    #[test]
    fn transport_by_automorphism_is_identity() {
        let a = f_algebra(Scalar::frac(1, 2));
        // rows of diag(1, d^2, d) with b in the corner, d = 3, b = 5
        let m = Matrix::from_ints(&[&[1, 5, 0], &[0, 9, 0], &[0, 0, 3]]);
        assert!(a.is_automorphism(&m).unwrap());
        assert_eq!(a.transport(&m).unwrap().tensor, a.tensor);
    }
}
