//! The shear construction for triples `(C | N)` with `C` of superdimension
//! `(1,n)`: `f~^j' = f~^j + R^{jk} f_k` with `R` symmetric.

use super::certificate::IsoCertificate;
use crate::algebra::{Grading, StructureTensor, SuperAlgebra};
use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::scalar::{ParamContext, Scalar};
use crate::triple::ManinTriple;
use std::fmt;

/// A symmetric solution of `R H + (R H)^T = G`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RSolution {
    pub h: Matrix,
    pub g: Matrix,
    pub r: Matrix,
}

/// A linear form in the entries of `G` that must vanish but does not.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RObstruction {
    /// `(j, k, coefficient)` over the upper triangle of `G`, first coefficient 1.
    pub form: Vec<(usize, usize, Scalar)>,
    pub value: Scalar,
    pub n: usize,
}

/// Names for the upper triangle of a 2x2 `G`.
const G_NAMES: [&str; 3] = ["alpha", "beta", "gamma"];

fn g_name(n: usize, j: usize, k: usize) -> String {
    if n == 2 {
        G_NAMES[j + k].to_string()
    } else {
        format!("G{}{}", j + 1, k + 1)
    }
}

impl fmt::Display for RObstruction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let n = self.n;
        let mut first = true;
        for (j, k, c) in &self.form {
            let name = g_name(n, *j, *k);
            let s = if c.is_one() {
                name
            } else if c.neg().is_one() {
                format!("-{name}")
            } else {
                format!("({c})*{name}")
            };
            if first {
                f.write_str(&s)?;
                first = false;
            } else if let Some(rest) = s.strip_prefix('-') {
                write!(f, " - {rest}")?;
            } else {
                write!(f, " + {s}")?;
            }
        }
        write!(f, " != 0")
    }
}

/// `H_j^k` from `[b1, f_j] = H_j^k f_k`.
pub fn odd_action(a: &SuperAlgebra) -> Result<Matrix> {
    let (m, n) = a.grading.super_dim();
    if m != 1 {
        return Err(Error::DimensionMismatch(format!("odd action needs one even generator, found {m}")));
    }
    let mut h = Matrix::zeros(n, n);
    for j in 0..n {
        for k in 0..n {
            h.set(j, k, a.tensor.get(0, 1 + j, 1 + k).clone());
        }
    }
    Ok(h)
}

/// `G^{jk}` from `[f~^j, f~^k] = G^{jk} b~^1`.
pub fn dual_form(a: &SuperAlgebra) -> Result<Matrix> {
    let (m, n) = a.grading.super_dim();
    if m != 1 {
        return Err(Error::DimensionMismatch(format!("dual form needs one even generator, found {m}")));
    }
    let mut g = Matrix::zeros(n, n);
    for j in 0..n {
        for k in 0..n {
            g.set(j, k, a.tensor.get(1 + j, 1 + k, 0).clone());
        }
    }
    Ok(g)
}

/// The `(1,n)` dual with `[f~^j, f~^k] = G^{jk} b~^1` and nothing else.
pub fn n_type_dual(g: &Matrix) -> SuperAlgebra {
    let n = g.rows();
    let gr = Grading::standard(1, n);
    let mut t = StructureTensor::zero(1 + n);
    for j in 0..n {
        for k in 0..n {
            t.set(1 + j, 1 + k, 0, g.get(j, k).clone());
        }
    }
    SuperAlgebra::new(gr, t, ParamContext::new())
}

/// Solves for symmetric `R` by elimination over the unknowns `R^{jk}`,
/// `j <= k`, taken from the last. Free unknowns are set to zero.
pub fn solve_r(h: &Matrix, g: &Matrix) -> Result<std::result::Result<RSolution, RObstruction>> {
    let n = h.rows();
    if h.cols() != n || g.rows() != n || g.cols() != n {
        return Err(Error::DimensionMismatch("H and G must be square of equal size".into()));
    }
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|j| (j..n).map(move |k| (j, k))).collect();
    let np = pairs.len();
    let idx = |j: usize, k: usize| pairs.iter().position(|&p| p == (j.min(k), j.max(k))).unwrap();
    // column c of the system is unknown pairs[np-1-c]
    let col = |j: usize, k: usize| np - 1 - idx(j, k);
    // each row: coefficients of the unknowns, then of the G entries
    let mut rows: Vec<Vec<Scalar>> = Vec::new();
    for (e, &(j, k)) in pairs.iter().enumerate() {
        let mut row = vec![Scalar::zero(); 2 * np];
        for l in 0..n {
            let c = col(j, l);
            row[c] = row[c].add(h.get(l, k));
            let c = col(k, l);
            row[c] = row[c].add(h.get(l, j));
        }
        row[np + e] = Scalar::one();
        rows.push(row);
    }
    let mut pivots = Vec::new();
    let mut r0 = 0;
    for c in 0..np {
        let Some(p) = (r0..np).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(r0, p);
        let inv = rows[r0][c].inv()?;
        for x in rows[r0].iter_mut() {
            *x = x.mul(&inv);
        }
        for i in 0..np {
            if i != r0 && !rows[i][c].is_zero() {
                let f = rows[i][c].clone();
                let piv = rows[r0].clone();
                for (x, y) in rows[i].iter_mut().zip(&piv) {
                    if !y.is_zero() {
                        *x = x.sub(&f.mul(y));
                    }
                }
            }
        }
        pivots.push((r0, c));
        r0 += 1;
    }
    let gval = |e: usize| g.get(pairs[e].0, pairs[e].1).clone();
    for row in &rows[r0..] {
        let mut value = Scalar::zero();
        for e in 0..np {
            if !row[np + e].is_zero() {
                value = value.add(&row[np + e].mul(&gval(e)));
            }
        }
        if value.is_zero() {
            continue;
        }
        let lead = (0..np).find(|&e| !row[np + e].is_zero()).unwrap();
        let s = row[np + lead].inv()?;
        let form = (0..np)
            .filter(|&e| !row[np + e].is_zero())
            .map(|e| (pairs[e].0, pairs[e].1, row[np + e].mul(&s)))
            .collect();
        return Ok(Err(RObstruction { form, value: value.mul(&s), n }));
    }
    let mut r = Matrix::zeros(n, n);
    for &(ri, c) in &pivots {
        let mut v = Scalar::zero();
        for e in 0..np {
            if !rows[ri][np + e].is_zero() {
                v = v.add(&rows[ri][np + e].mul(&gval(e)));
            }
        }
        let (j, k) = pairs[np - 1 - c];
        r.set(j, k, v.clone());
        r.set(k, j, v);
    }
    Ok(Ok(RSolution { h: h.clone(), g: g.clone(), r }))
}

/// Like [`solve_r`], with an obstruction reported as `NoSolution`.
pub fn solve_r_or_err(h: &Matrix, g: &Matrix) -> Result<RSolution> {
    solve_r(h, g)?.map_err(|o| Error::NoSolution(format!("witness {o}")))
}

impl RSolution {
    /// Entries of `R H + (R H)^T - G`.
    pub fn residual(&self) -> Result<Matrix> {
        let rh = self.r.mul(&self.h)?;
        let s = rh.transpose();
        let n = self.r.rows();
        let mut out = Matrix::zeros(n, n);
        for j in 0..n {
            for k in 0..n {
                // (R H)^{jk} = R^{jl} H_l^k
                out.set(j, k, rh.get(j, k).add(s.get(j, k)).sub(self.g.get(j, k)));
            }
        }
        Ok(out)
    }
}

/// From `(C | abelian)` to `(C | N^G)`: identity except the rows
/// `f~^j -> f~^j + R^{jk} f_k`.
pub fn r_to_certificate(r: &RSolution, t: &ManinTriple) -> Result<IsoCertificate> {
    let h = odd_action(&t.left)?;
    if h != r.h {
        return Err(Error::DimensionMismatch("R was solved for a different odd action".into()));
    }
    if !t.right.tensor.is_zero() {
        return Err(Error::DimensionMismatch("shear source must have an abelian dual".into()));
    }
    let n = r.r.rows();
    let d = 1 + n;
    let mut c = Matrix::identity(2 * d);
    for j in 0..n {
        for k in 0..n {
            c.set(d + 1 + j, 1 + k, r.r.get(j, k).clone());
        }
    }
    let mut right = n_type_dual(&r.g);
    right.ctx = t.ctx.clone();
    let target = ManinTriple::new(SuperAlgebra { ctx: t.ctx.clone(), ..t.left.clone() }, right, t.ctx.clone())?;
    IsoCertificate::new(c, t.clone(), target, t.ctx.clone())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Var;

    fn sym() -> Matrix {
        let (a, b, c) = (Scalar::var(Var::new("alpha")), Scalar::var(Var::new("beta")), Scalar::var(Var::new("gamma")));
        Matrix::from_rows(vec![vec![a, b.clone()], vec![b, c]]).unwrap()
    }

    #[test]
    fn c4_solution() {
        let h = Matrix::from_ints(&[&[1, 0], &[1, 1]]);
        let s = solve_r_or_err(&h, &sym()).unwrap();
        assert!(s.residual().unwrap().is_zero());
        assert_eq!(s.r.get(1, 1).to_string(), "1/2*gamma");
    }

    #[test]
    fn c2_0_obstruction() {
        let h = Matrix::from_ints(&[&[1, 0], &[0, 0]]);
        let o = solve_r(&h, &sym()).unwrap().unwrap_err();
        assert_eq!(o.to_string(), "gamma != 0");
        let g = Matrix::from_ints(&[&[3, 1], &[1, 0]]);
        assert!(solve_r(&h, &g).unwrap().is_ok());
    }

    #[test]
    fn identity_halves() {
        let h = Matrix::identity(2);
        let s = solve_r_or_err(&h, &sym()).unwrap();
        assert_eq!(s.r, sym().map(|x| Ok(x.scale(&crate::scalar::Rat::frac(1, 2)))).unwrap());
    }
}
