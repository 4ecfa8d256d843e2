use super::{automorphism_residuals, Grading, SuperAlgebra, TensorResidual};
use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::scalar::{Bindings, ParamContext, Scalar};

/// One connected piece of an automorphism group: a matrix of scalars in the
/// family parameters, valid wherever every `nonzero` entry is nonzero.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AutomorphismFamily {
    pub grading: Grading,
    pub matrix: Matrix,
    pub ctx: ParamContext,
    pub nonzero: Vec<Scalar>,
}

impl AutomorphismFamily {
    /// Adds the determinant to the nonzero list when absent.
    pub fn new(
        grading: Grading,
        matrix: Matrix,
        ctx: ParamContext,
        mut nonzero: Vec<Scalar>,
    ) -> Result<AutomorphismFamily> {
        let det = matrix.det()?;
        if !nonzero.contains(&det) {
            nonzero.push(det);
        }
        let fam = AutomorphismFamily { grading, matrix, ctx, nonzero };
        if !fam.grading.is_even_matrix(&fam.matrix) {
            return Err(Error::NotAutomorphism("family mixes parities".into()));
        }
        Ok(fam)
    }

    /// The family matrix at `b`; fails when a nonzero condition is violated.
    pub fn instantiate(&self, b: &Bindings) -> Result<Matrix> {
        self.ctx.validate(b)?;
        let vals = b.vars();
        for c in &self.nonzero {
            if c.substitute(&vals)?.is_zero() {
                return Err(Error::ConstraintViolation(format!("{c} vanishes at {b}")));
            }
        }
        self.matrix.substitute(&vals)
    }

    /// Residuals of the automorphism condition for the symbolic family,
    /// after binding the algebra parameters in `alg`.
    pub fn residuals(&self, alg: &SuperAlgebra) -> Vec<TensorResidual> {
        automorphism_residuals(&alg.tensor, &self.matrix)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::tensor_from_brackets;
    use crate::scalar::{Domain, Rat, Var};

    #[test]
    fn s21_family_preserves_brackets() {
        let g = Grading::standard(2, 1);
        let t = tensor_from_brackets(&g, &[(0, 2, vec![Scalar::zero(), Scalar::zero(), Scalar::one()])]);
        let s21 = SuperAlgebra::new(g.clone(), t, ParamContext::new());
        let mut ctx = ParamContext::new();
        for n in ["b", "c", "d"] {
            ctx.add_param(n, Domain::Real).unwrap();
        }
        let v = |n: &str| Scalar::var(Var::new(n));
        let m = Matrix::from_rows(vec![
            vec![Scalar::one(), v("b"), Scalar::zero()],
            vec![Scalar::zero(), v("c"), Scalar::zero()],
            vec![Scalar::zero(), Scalar::zero(), v("d")],
        ])
        .unwrap();
        let fam = AutomorphismFamily::new(g, m, ctx, vec![v("c"), v("d")]).unwrap();
        assert!(fam.residuals(&s21).is_empty());
        let b = Bindings::new().with("b", Rat::zero()).with("c", Rat::int(2)).with("d", Rat::one());
        assert!(s21.is_automorphism(&fam.instantiate(&b).unwrap()).unwrap());
        let bad = Bindings::new().with("b", Rat::zero()).with("c", Rat::zero()).with("d", Rat::one());
        assert!(fam.instantiate(&bad).is_err());
    }
}
