//! Manin supertriples and their Drinfel'd doubles.

use crate::algebra::{Grading, IndexRole, JacobiResidual, StructureTensor, SuperAlgebra};
use crate::error::{Error, Result};
use crate::form::{canonical_form, check_ad_invariance, BilinearForm};
use crate::scalar::{Bindings, ParamContext, Rat, Var};
use std::collections::HashMap;

/// `(S | S~)`: an algebra and a dual structure on the dual space.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ManinTriple {
    pub id: Option<String>,
    pub left: SuperAlgebra,
    pub right: SuperAlgebra,
    pub ctx: ParamContext,
}

/// A double on the basis `(b, f, b~, f~)` with the triple it came from.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DoubleAlgebra {
    pub algebra: SuperAlgebra,
    pub triple: ManinTriple,
}

impl ManinTriple {
    pub fn new(left: SuperAlgebra, right: SuperAlgebra, ctx: ParamContext) -> Result<ManinTriple> {
        let mut right = right;
        right.tensor.role = IndexRole::Raised;
        if left.grading != right.grading {
            return Err(Error::DimensionMismatch(format!(
                "halves of superdimension {:?} and {:?}",
                left.grading.super_dim(),
                right.grading.super_dim()
            )));
        }
        Ok(ManinTriple { id: None, left, right, ctx })
    }

    pub fn with_id(mut self, id: &str) -> ManinTriple {
        self.id = Some(id.to_string());
        self
    }

    pub fn label(&self) -> String {
        self.id.clone().unwrap_or_else(|| format!("({}|{})", self.left.label(), self.right.label()))
    }

    pub fn super_dim(&self) -> (usize, usize) {
        self.left.grading.super_dim()
    }

    /// Binds parameters in both halves after validating against the triple context.
    pub fn substitute(&self, b: &Bindings) -> Result<ManinTriple> {
        let ctx = self.ctx.restrict(b)?;
        let vals = b.vars();
        Ok(ManinTriple {
            id: self.id.clone(),
            left: half(&self.left, &vals, &ctx)?,
            right: half(&self.right, &vals, &ctx)?,
            ctx,
        })
    }

    /// Binds parameters without consulting the context.
    pub fn substitute_unchecked(&self, vals: &HashMap<Var, Rat>) -> Result<ManinTriple> {
        Ok(ManinTriple {
            id: self.id.clone(),
            left: self.left.substitute_unchecked(vals)?,
            right: self.right.substitute_unchecked(vals)?,
            ctx: self.ctx.clone(),
        })
    }

    pub fn canonical_form(&self) -> BilinearForm {
        let (m, n) = self.super_dim();
        canonical_form(m, n)
    }
}

fn half(a: &SuperAlgebra, vals: &HashMap<Var, Rat>, ctx: &ParamContext) -> Result<SuperAlgebra> {
    let mut a = a.substitute_unchecked(vals)?;
    a.ctx = ctx.clone();
    Ok(a)
}

/// Basis labels `b1.., f1.., bt1.., ft1..` of a double.
pub fn double_basis_names(m: usize, n: usize) -> Vec<String> {
    let mut v: Vec<String> = (1..=m).map(|i| format!("b{i}")).collect();
    v.extend((1..=n).map(|i| format!("f{i}")));
    v.extend((1..=m).map(|i| format!("bt{i}")));
    v.extend((1..=n).map(|i| format!("ft{i}")));
    v
}

/// Assembles the double: both halves plus the mixed brackets
/// `[X_I, X~^J] = F~^{JK}_I X_K + F_{KI}^J X~^K`.
pub fn build_double(t: &ManinTriple) -> Result<DoubleAlgebra> {
    let g = &t.left.grading;
    if t.right.grading != *g {
        return Err(Error::DimensionMismatch("halves differ in superdimension".into()));
    }
    let d = g.dim();
    let s = &t.left.tensor;
    let r = &t.right.tensor;
    let gd = Grading::double(g);
    let mut f = StructureTensor::zero(2 * d);
    for i in 0..d {
        for j in 0..d {
            for k in 0..d {
                f.set(i, j, k, s.get(i, j, k).clone());
                f.set(d + i, d + j, d + k, r.get(i, j, k).clone());
            }
        }
    }
    for i in 0..d {
        for j in 0..d {
            for k in 0..d {
                let a = r.get(j, k, i);
                if !a.is_zero() {
                    f.add_to(i, d + j, k, a);
                }
                let b = s.get(k, i, j);
                if !b.is_zero() {
                    f.add_to(i, d + j, d + k, b);
                }
            }
            // [X~^J, X_I] = -(-1)^{|I||J|} [X_I, X~^J]
            let odd = g.is_odd(i) && g.is_odd(j);
            for k in 0..2 * d {
                let v = f.get(i, d + j, k).clone();
                if !v.is_zero() {
                    f.set(d + j, i, k, if odd { v } else { v.neg() });
                }
            }
        }
    }
    let (m, n) = g.super_dim();
    let mut algebra = SuperAlgebra::new(gd, f, t.ctx.clone());
    algebra.basis = double_basis_names(m, n);
    algebra.name = t.id.as_ref().map(|id| format!("D({id})"));
    Ok(DoubleAlgebra { algebra, triple: t.clone() })
}

/// Graded Jacobi residuals of the double, split over sign branches.
pub fn check_compatibility(t: &ManinTriple) -> Result<Vec<JacobiResidual>> {
    Ok(build_double(t)?.algebra.check_jacobi())
}

/// `(S~ | S)`; the double of the result is isomorphic to the original via `C = B`.
pub fn t_dual(t: &ManinTriple) -> ManinTriple {
    let mut left = t.right.clone();
    let mut right = t.left.clone();
    left.tensor.role = IndexRole::Lower;
    right.tensor.role = IndexRole::Raised;
    ManinTriple { id: t.id.as_ref().map(|i| format!("T({i})")), left, right, ctx: t.ctx.clone() }
}

impl DoubleAlgebra {
    pub fn dim(&self) -> usize {
        self.algebra.dim()
    }

    /// The entries of the double restricted to the given index block.
    pub fn restriction(&self, offset: usize, len: usize) -> StructureTensor {
        let mut t = StructureTensor::zero(len);
        for i in 0..len {
            for j in 0..len {
                for k in 0..len {
                    t.set(i, j, k, self.algebra.tensor.get(offset + i, offset + j, offset + k).clone());
                }
            }
        }
        t
    }

    /// Ad-invariance residuals against the canonical form.
    pub fn ad_invariance(&self) -> Result<Vec<crate::algebra::TensorResidual>> {
        check_ad_invariance(&self.algebra, &self.triple.canonical_form())
    }

    /// Binds parameters in the double and its provenance.
    pub fn substitute(&self, b: &Bindings) -> Result<DoubleAlgebra> {
        build_double(&self.triple.substitute(b)?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::tensor_from_brackets;
    use crate::scalar::Scalar;

    fn e(d: usize, k: usize) -> Vec<Scalar> {
        let mut v = vec![Scalar::zero(); d];
        v[k] = Scalar::one();
        v
    }

    fn s11() -> SuperAlgebra {
        let g = Grading::standard(1, 1);
        SuperAlgebra::new(g.clone(), tensor_from_brackets(&g, &[(0, 1, e(2, 1))]), ParamContext::new())
    }

    fn n11() -> SuperAlgebra {
        let g = Grading::standard(1, 1);
        SuperAlgebra::new(g.clone(), tensor_from_brackets(&g, &[(1, 1, e(2, 0))]), ParamContext::new())
    }

    #[test]
    fn s11_a11_double_brackets() {
        let t = ManinTriple::new(s11(), SuperAlgebra::abelian(1, 1), ParamContext::new()).unwrap();
        let d = build_double(&t).unwrap();
        let txt = d.algebra.to_string();
        assert_eq!(txt, "[b1,f1] = f1, [b1,ft1] = -ft1, [f1,ft1] = bt1");
        assert!(check_compatibility(&t).unwrap().is_empty());
        assert!(d.ad_invariance().unwrap().is_empty());
    }

    #[test]
    fn n11_a11_double_brackets() {
        let t = ManinTriple::new(n11(), SuperAlgebra::abelian(1, 1), ParamContext::new()).unwrap();
        let d = build_double(&t).unwrap();
        assert_eq!(d.algebra.to_string(), "[f1,f1] = b1, [f1,bt1] = ft1");
    }

    #[test]
    fn n11_n11_is_incompatible() {
        let t = ManinTriple::new(n11(), n11(), ParamContext::new()).unwrap();
        assert!(!check_compatibility(&t).unwrap().is_empty());
    }

    #[test]
    fn restriction_recovers_halves() {
        let t = ManinTriple::new(s11(), n11(), ParamContext::new()).unwrap();
        let d = build_double(&t).unwrap();
        assert_eq!(d.restriction(0, 2), t.left.tensor);
        assert_eq!(d.restriction(2, 2).entries(), t.right.tensor.entries());
        assert_eq!(d.algebra.grading.super_dim(), (2, 2));
    }
}
