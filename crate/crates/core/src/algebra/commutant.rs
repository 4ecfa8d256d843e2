use super::{Parity, SuperAlgebra};
use crate::error::{Error, Result};
use crate::linalg::row_basis;
use crate::scalar::{Bindings, Scalar};
use std::fmt;

/// Superdimensions of `C1 = [D,D]`, `C2 = [C1,C1]`, `C3 = [C2,C2]`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CommutantFingerprint {
    pub series: [(usize, usize); 3],
}

impl CommutantFingerprint {
    pub fn dims(&self) -> [usize; 3] {
        self.series.map(|(m, n)| m + n)
    }
}

impl fmt::Display for CommutantFingerprint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let d = self.dims();
        write!(f, "{},{},{}", d[0], d[1], d[2])?;
        for (m, n) in self.series {
            if m + n > 0 {
                write!(f, " ({m},{n})")?;
            }
        }
        Ok(())
    }
}

/// Homogeneous basis of the span of all brackets of `basis` vectors.
fn derived_span(a: &SuperAlgebra, basis: &[(Parity, Vec<Scalar>)]) -> Vec<(Parity, Vec<Scalar>)> {
    let mut even = Vec::new();
    let mut odd = Vec::new();
    for (i, (pu, u)) in basis.iter().enumerate() {
        for (pv, v) in &basis[i..] {
            let w = a.bracket(u, v);
            if w.iter().all(|x| x.is_zero()) {
                continue;
            }
            match pu.add(*pv) {
                Parity::Even => even.push(w),
                Parity::Odd => odd.push(w),
            }
        }
    }
    let mut out: Vec<_> = row_basis(&even).into_iter().map(|v| (Parity::Even, v)).collect();
    out.extend(row_basis(&odd).into_iter().map(|v| (Parity::Odd, v)));
    out
}

/// The derived series of `a` at `b`; every parameter must be bound.
pub fn commutant_series(a: &SuperAlgebra, b: &Bindings) -> Result<CommutantFingerprint> {
    let a = if b.is_empty() { a.clone() } else { a.substitute(b)? };
    if let Some(x) = a.tensor.entries().iter().find(|x| !x.is_constant()) {
        return Err(Error::ConstraintViolation(format!("unbound parameters in {x}")));
    }
    let d = a.dim();
    let mut basis: Vec<(Parity, Vec<Scalar>)> = (0..d)
        .map(|i| {
            let mut e = vec![Scalar::zero(); d];
            e[i] = Scalar::one();
            (a.grading.parity(i), e)
        })
        .collect();
    let mut series = [(0, 0); 3];
    for s in series.iter_mut() {
        basis = derived_span(&a, &basis);
        let n = basis.iter().filter(|(p, _)| *p == Parity::Odd).count();
        *s = (basis.len() - n, n);
    }
    Ok(CommutantFingerprint { series })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{tensor_from_brackets, Grading};
    use crate::scalar::ParamContext;

    #[test]
    fn s11_series() {
        let g = Grading::standard(1, 1);
        let t = tensor_from_brackets(&g, &[(0, 1, vec![Scalar::zero(), Scalar::one()])]);
        let a = SuperAlgebra::new(g, t, ParamContext::new());
        let fp = commutant_series(&a, &Bindings::new()).unwrap();
        // [S,S] = <f1>, then [f1,f1] = 0
        assert_eq!(fp.series, [(0, 1), (0, 0), (0, 0)]);
    }
}
