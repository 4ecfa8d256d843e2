//! Dense matrices over [`Scalar`] and exact elimination.

use crate::error::{Error, Result};
use crate::scalar::{Rat, Scalar, Var};
use std::collections::HashMap;
use std::fmt;

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<Scalar>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Matrix {
        Matrix { rows, cols, data: vec![Scalar::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Matrix {
        let mut m = Matrix::zeros(n, n);
        for i in 0..n {
            m.set(i, i, Scalar::one());
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Scalar>>) -> Result<Matrix> {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        if rows.iter().any(|x| x.len() != c) {
            return Err(Error::DimensionMismatch("ragged matrix rows".into()));
        }
        Ok(Matrix { rows: r, cols: c, data: rows.into_iter().flatten().collect() })
    }

    pub fn from_ints(rows: &[&[i64]]) -> Matrix {
        Matrix::from_rows(rows.iter().map(|r| r.iter().map(|&x| Scalar::int(x)).collect()).collect())
            .expect("rectangular")
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &Scalar {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Scalar) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[Scalar] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn entries(&self) -> &[Scalar] {
        &self.data
    }

    pub fn to_rows(&self) -> Vec<Vec<Scalar>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn transpose(&self) -> Matrix {
        let mut t = Matrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j).clone());
            }
        }
        t
    }

    pub fn mul(&self, o: &Matrix) -> Result<Matrix> {
        if self.cols != o.rows {
            return Err(Error::DimensionMismatch(format!("{}x{} times {}x{}", self.rows, self.cols, o.rows, o.cols)));
        }
        let mut m = Matrix::zeros(self.rows, o.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..o.cols {
                    let b = o.get(k, j);
                    if !b.is_zero() {
                        let v = m.get(i, j).add(&a.mul(b));
                        m.set(i, j, v);
                    }
                }
            }
        }
        Ok(m)
    }

    pub fn sub(&self, o: &Matrix) -> Result<Matrix> {
        if (self.rows, self.cols) != (o.rows, o.cols) {
            return Err(Error::DimensionMismatch("matrix difference".into()));
        }
        Ok(Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&o.data).map(|(a, b)| a.sub(b)).collect(),
        })
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| x.is_zero())
    }

    pub fn is_identity(&self) -> bool {
        self.is_square()
            && (0..self.rows).all(|i| {
                (0..self.cols).all(|j| {
                    let x = self.get(i, j);
                    if i == j {
                        x.is_one()
                    } else {
                        x.is_zero()
                    }
                })
            })
    }

    pub fn block_diag(a: &Matrix, b: &Matrix) -> Matrix {
        let mut m = Matrix::zeros(a.rows + b.rows, a.cols + b.cols);
        for i in 0..a.rows {
            for j in 0..a.cols {
                m.set(i, j, a.get(i, j).clone());
            }
        }
        for i in 0..b.rows {
            for j in 0..b.cols {
                m.set(a.rows + i, a.cols + j, b.get(i, j).clone());
            }
        }
        m
    }

    /// Submatrix of the given rows and columns.
    pub fn select(&self, rows: &[usize], cols: &[usize]) -> Matrix {
        let mut m = Matrix::zeros(rows.len(), cols.len());
        for (a, &i) in rows.iter().enumerate() {
            for (b, &j) in cols.iter().enumerate() {
                m.set(a, b, self.get(i, j).clone());
            }
        }
        m
    }

    pub fn substitute(&self, vals: &HashMap<Var, Rat>) -> Result<Matrix> {
        Ok(Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|x| x.substitute(vals)).collect::<Result<_>>()?,
        })
    }

    pub fn map(&self, f: impl Fn(&Scalar) -> Result<Scalar>) -> Result<Matrix> {
        Ok(Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(f).collect::<Result<_>>()? })
    }

    /// Gauss-Jordan inverse; `DivisionByZero` when singular.
    pub fn inverse(&self) -> Result<Matrix> {
        if !self.is_square() {
            return Err(Error::DimensionMismatch("inverse of a non-square matrix".into()));
        }
        let n = self.rows;
        let mut a = self.to_rows();
        let mut inv = Matrix::identity(n).to_rows();
        for c in 0..n {
            let p = (c..n).find(|&r| !a[r][c].is_zero()).ok_or(Error::DivisionByZero)?;
            a.swap(c, p);
            inv.swap(c, p);
            let pinv = a[c][c].inv()?;
            for j in 0..n {
                a[c][j] = a[c][j].mul(&pinv);
                inv[c][j] = inv[c][j].mul(&pinv);
            }
            for r in 0..n {
                if r == c || a[r][c].is_zero() {
                    continue;
                }
                let f = a[r][c].clone();
                for j in 0..n {
                    let x = a[r][j].sub(&f.mul(&a[c][j]));
                    a[r][j] = x;
                    let y = inv[r][j].sub(&f.mul(&inv[c][j]));
                    inv[r][j] = y;
                }
            }
        }
        Matrix::from_rows(inv)
    }

    /// Determinant by fraction-free cofactor expansion on small sizes and
    /// elimination otherwise.
    pub fn det(&self) -> Result<Scalar> {
        if !self.is_square() {
            return Err(Error::DimensionMismatch("determinant of a non-square matrix".into()));
        }
        let n = self.rows;
        if n == 0 {
            return Ok(Scalar::one());
        }
        if n <= 3 {
            return Ok(cofactor_det(&self.to_rows()));
        }
        let mut a = self.to_rows();
        let mut det = Scalar::one();
        for c in 0..n {
            let Some(p) = (c..n).find(|&r| !a[r][c].is_zero()) else {
                return Ok(Scalar::zero());
            };
            if p != c {
                a.swap(c, p);
                det = det.neg();
            }
            det = det.mul(&a[c][c]);
            let pinv = a[c][c].inv()?;
            for r in c + 1..n {
                if a[r][c].is_zero() {
                    continue;
                }
                let f = a[r][c].mul(&pinv);
                for j in c..n {
                    let x = a[r][j].sub(&f.mul(&a[c][j]));
                    a[r][j] = x;
                }
            }
        }
        Ok(det)
    }
}

fn cofactor_det(a: &[Vec<Scalar>]) -> Scalar {
    match a.len() {
        1 => a[0][0].clone(),
        2 => a[0][0].mul(&a[1][1]).sub(&a[0][1].mul(&a[1][0])),
        _ => {
            let mut s = Scalar::zero();
            for j in 0..a.len() {
                if a[0][j].is_zero() {
                    continue;
                }
                let minor: Vec<Vec<Scalar>> = a[1..]
                    .iter()
                    .map(|r| r.iter().enumerate().filter(|(k, _)| *k != j).map(|(_, x)| x.clone()).collect())
                    .collect();
                let t = a[0][j].mul(&cofactor_det(&minor));
                s = if j % 2 == 0 { s.add(&t) } else { s.sub(&t) };
            }
            s
        }
    }
}

/// Reduced row echelon basis of the span of `vectors`; the entries must be
/// constants so that zero tests are exact.
pub fn row_basis(vectors: &[Vec<Scalar>]) -> Vec<Vec<Scalar>> {
    let mut rows: Vec<Vec<Scalar>> = vectors.iter().filter(|v| v.iter().any(|x| !x.is_zero())).cloned().collect();
    if rows.is_empty() {
        return rows;
    }
    let cols = rows[0].len();
    let mut rank = 0;
    for c in 0..cols {
        let Some(p) = (rank..rows.len()).find(|&r| !rows[r][c].is_zero()) else {
            continue;
        };
        rows.swap(rank, p);
        let pinv = rows[rank][c].inv().expect("nonzero pivot");
        for j in 0..cols {
            rows[rank][j] = rows[rank][j].mul(&pinv);
        }
        for r in 0..rows.len() {
            if r == rank || rows[r][c].is_zero() {
                continue;
            }
            let f = rows[r][c].clone();
            for j in 0..cols {
                let x = rows[r][j].sub(&f.mul(&rows[rank][j]));
                rows[r][j] = x;
            }
        }
        rank += 1;
        if rank == rows.len() {
            break;
        }
    }
    rows.truncate(rank);
    rows
}

pub fn rank(vectors: &[Vec<Scalar>]) -> usize {
    row_basis(vectors).len()
}

impl fmt::Display for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[")?;
        for i in 0..self.rows {
            if i > 0 {
                f.write_str(", ")?;
            }
            f.write_str("[")?;
            for j in 0..self.cols {
                if j > 0 {
                    f.write_str(", ")?;
                }
                write!(f, "{}", self.get(i, j))?;
            }
            f.write_str("]")?;
        }
        f.write_str("]")
    }
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn inverse_round_trip() {
        let m = Matrix::from_ints(&[&[2, 1, 0], &[1, 1, 0], &[0, 3, 1]]);
        let i = m.inverse().unwrap();
        assert!(m.mul(&i).unwrap().is_identity());
        assert_eq!(m.det().unwrap(), Scalar::one());
    }

    #[test]
    fn singular_detected() {
        let m = Matrix::from_ints(&[&[1, 2], &[2, 4]]);
        assert_eq!(m.inverse(), Err(Error::DivisionByZero));
        assert!(m.det().unwrap().is_zero());
    }

    #[test]
    fn det_by_elimination_matches_cofactors() {
        let m = Matrix::from_ints(&[&[0, 1, 2, 3], &[1, 0, 1, 1], &[2, 1, 0, 5], &[1, 1, 1, 0]]);
        // frozen from an independent cofactor expansion
        let cof = {
            let rows = m.to_rows();
            let mut s = Scalar::zero();
            for j in 0..4 {
                let minor: Vec<Vec<Scalar>> = rows[1..]
                    .iter()
                    .map(|r| r.iter().enumerate().filter(|(k, _)| *k != j).map(|(_, x)| x.clone()).collect())
                    .collect();
                let t = rows[0][j].mul(&cofactor_det(&minor));
                s = if j % 2 == 0 { s.add(&t) } else { s.sub(&t) };
            }
            s
        };
        assert_eq!(m.det().unwrap(), cof);
    }

    #[test]
    fn rank_of_dependent_rows() {
        let v = |xs: &[i64]| xs.iter().map(|&x| Scalar::int(x)).collect::<Vec<_>>();
        assert_eq!(rank(&[v(&[1, 2, 3]), v(&[2, 4, 6]), v(&[0, 1, 1])]), 2);
        assert_eq!(rank(&[v(&[0, 0])]), 0);
    }
}
