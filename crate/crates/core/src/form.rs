//! Graded bilinear forms on doubles.

use crate::algebra::{Grading, SuperAlgebra, TensorResidual};
use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::scalar::Scalar;

/// `B[a][b] = <X_a, X_b>` in the basis `(b, f, b~, f~)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BilinearForm {
    pub grading: Grading,
    pub matrix: Matrix,
}

/// `[[0,0,1,0],[0,0,0,1],[1,0,0,0],[0,-1,0,0]]` in `m`/`n` blocks.
pub fn canonical_form(m: usize, n: usize) -> BilinearForm {
    let d = m + n;
    let mut b = Matrix::zeros(2 * d, 2 * d);
    for i in 0..d {
        b.set(i, d + i, Scalar::one());
        b.set(d + i, i, if i < m { Scalar::one() } else { Scalar::int(-1) });
    }
    BilinearForm { grading: Grading::double(&Grading::standard(m, n)), matrix: b }
}

impl BilinearForm {
    /// Entries with `B_ab != (-1)^{|a||b|} B_ba`.
    pub fn symmetry_residuals(&self) -> Vec<(usize, usize)> {
        let d = self.grading.dim();
        let mut out = Vec::new();
        for a in 0..d {
            for b in 0..d {
                let x = self.matrix.get(a, b);
                let y = self.matrix.get(b, a);
                let ok = if self.grading.sign(a, b) == 1 { x == y } else { x == &y.neg() };
                if !ok {
                    out.push((a, b));
                }
            }
        }
        out
    }

    pub fn is_nondegenerate(&self) -> bool {
        self.matrix.det().map(|d| !d.is_zero()).unwrap_or(false)
    }

    /// Whether the coordinate span of `idx` is isotropic of dimension `d/2`.
    pub fn check_isotropic(&self, idx: &[usize]) -> bool {
        let mut s: Vec<usize> = idx.to_vec();
        s.sort_unstable();
        s.dedup();
        if 2 * s.len() != self.grading.dim() {
            return false;
        }
        s.iter().all(|&u| s.iter().all(|&v| self.matrix.get(u, v).is_zero()))
    }
}

/// `<[x,y],z> + (-1)^{|x||y|} <y,[x,z]>` over basis triples, nonzero entries only.
/// The `k` field of each residual holds `z`.
pub fn check_ad_invariance(a: &SuperAlgebra, b: &BilinearForm) -> Result<Vec<TensorResidual>> {
    let d = a.dim();
    if b.grading.dim() != d {
        return Err(Error::DimensionMismatch(format!("form of size {} on algebra of dimension {d}", b.grading.dim())));
    }
    let t = &a.tensor;
    let m = &b.matrix;
    let mut out = Vec::new();
    for x in 0..d {
        for y in 0..d {
            for z in 0..d {
                let mut v = Scalar::zero();
                for k in 0..d {
                    let f = t.get(x, y, k);
                    if !f.is_zero() {
                        v = v.add(&f.mul(m.get(k, z)));
                    }
                    let g = t.get(x, z, k);
                    if !g.is_zero() {
                        let w = m.get(y, k).mul(g);
                        v = if a.grading.sign(x, y) == 1 { v.add(&w) } else { v.sub(&w) };
                    }
                }
                if !v.is_zero() {
                    out.push(TensorResidual { i: x, j: y, k: z, value: v });
                }
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonical_shapes() {
        let b = canonical_form(1, 0);
        assert_eq!(b.matrix, Matrix::from_ints(&[&[0, 1], &[1, 0]]));
        let b = canonical_form(1, 1);
        assert_eq!(b.matrix, Matrix::from_ints(&[&[0, 0, 1, 0], &[0, 0, 0, 1], &[1, 0, 0, 0], &[0, -1, 0, 0]]));
        assert!(b.symmetry_residuals().is_empty());
        assert!(b.is_nondegenerate());
    }

    #[test]
    fn square_is_graded_identity() {
        let b = canonical_form(2, 1);
        let sq = b.matrix.mul(&b.matrix).unwrap();
        let mut expect = Matrix::identity(6);
        expect.set(2, 2, Scalar::int(-1));
        expect.set(5, 5, Scalar::int(-1));
        assert_eq!(sq, expect);
    }

    #[test]
    fn isotropy() {
        let b = canonical_form(1, 1);
        assert!(b.check_isotropic(&[0, 1]));
        assert!(b.check_isotropic(&[2, 3]));
        assert!(!b.check_isotropic(&[0, 2]));
        assert!(!b.check_isotropic(&[0]));
    }
}
