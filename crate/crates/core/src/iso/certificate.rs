//! Isomorphism certificates between doubles and their verification.

use crate::algebra::{transport_tensor, StructureTensor, TensorResidual};
use crate::error::{Error, Result};
use crate::form::canonical_form;
use crate::linalg::Matrix;
use crate::scalar::{Bindings, ParamContext, Rat, Scalar, Var};
use crate::triple::{build_double, t_dual, ManinTriple};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::collections::HashMap;

/// `C` with `X'_a = C_a^p X_p`: row `a` writes the target basis vector `a`
/// in the source basis of the double of `source`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IsoCertificate {
    pub id: Option<String>,
    pub matrix: Matrix,
    pub source: ManinTriple,
    pub target: ManinTriple,
    pub ctx: ParamContext,
}

/// Outcome of checking one concrete or symbolic instance of a certificate.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InstanceReport {
    pub binding: Bindings,
    pub even: bool,
    pub invertible: bool,
    /// Entries of `C B C^T - B`.
    pub form_residuals: Vec<(usize, usize, Scalar)>,
    /// `C_a^p C_b^q F_pq^r - F'_ab^c C_c^r`, with `k` holding `r`.
    pub bracket_residuals: Vec<TensorResidual>,
    /// Set when the instance could not be evaluated.
    pub error: Option<String>,
}

impl InstanceReport {
    pub fn passed(&self) -> bool {
        self.error.is_none()
            && self.even
            && self.invertible
            && self.form_residuals.is_empty()
            && self.bracket_residuals.is_empty()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CertificateReport {
    pub id: String,
    /// One symbolic instance per sign or discrete branch.
    pub branches: Vec<InstanceReport>,
    /// Random admissible bindings of every parameter.
    pub samples: Vec<InstanceReport>,
}

impl CertificateReport {
    pub fn passed(&self) -> bool {
        !self.branches.is_empty()
            && self.branches.iter().all(InstanceReport::passed)
            && self.samples.iter().all(InstanceReport::passed)
    }

    pub fn form_ok(&self) -> bool {
        self.all().all(|r| r.form_residuals.is_empty())
    }

    pub fn brackets_ok(&self) -> bool {
        self.all().all(|r| r.bracket_residuals.is_empty())
    }

    pub fn invertible(&self) -> bool {
        self.all().all(|r| r.invertible)
    }

    fn all(&self) -> impl Iterator<Item = &InstanceReport> {
        self.branches.iter().chain(self.samples.iter())
    }
}

impl IsoCertificate {
    pub fn new(matrix: Matrix, source: ManinTriple, target: ManinTriple, ctx: ParamContext) -> Result<IsoCertificate> {
        let d = 2 * source.left.dim();
        if target.left.dim() * 2 != d || matrix.rows() != d || matrix.cols() != d {
            return Err(Error::DimensionMismatch(format!(
                "certificate of size {}x{} between doubles of dimension {d} and {}",
                matrix.rows(),
                matrix.cols(),
                2 * target.left.dim()
            )));
        }
        Ok(IsoCertificate { id: None, matrix, source, target, ctx })
    }

    pub fn label(&self) -> String {
        self.id.clone().unwrap_or_else(|| format!("{} -> {}", self.source.label(), self.target.label()))
    }

    /// The certificate at a binding of its parameters.
    pub fn substitute(&self, b: &Bindings) -> Result<IsoCertificate> {
        let ctx = self.ctx.restrict(b)?;
        let vals = b.vars();
        let mut source = self.source.substitute_unchecked(&vals)?;
        let mut target = self.target.substitute_unchecked(&vals)?;
        source.ctx = ctx.clone();
        target.ctx = ctx.clone();
        Ok(IsoCertificate { id: self.id.clone(), matrix: self.matrix.substitute(&vals)?, source, target, ctx })
    }

    /// Maps target to source.
    pub fn inverse(&self) -> Result<IsoCertificate> {
        Ok(IsoCertificate {
            id: self.id.as_ref().map(|i| format!("inv({i})")),
            matrix: self.matrix.inverse()?,
            source: self.target.clone(),
            target: self.source.clone(),
            ctx: self.ctx.clone(),
        })
    }

    /// `self` followed by `next`; the intermediate doubles must agree.
    pub fn then(&self, next: &IsoCertificate) -> Result<IsoCertificate> {
        let a = build_double(&self.target)?.algebra.tensor;
        let b = build_double(&next.source)?.algebra.tensor;
        if a.entries() != b.entries() {
            return Err(Error::DimensionMismatch(format!(
                "cannot compose: {} differs from {}",
                self.target.label(),
                next.source.label()
            )));
        }
        let mut ctx = self.ctx.clone();
        for p in &next.ctx.params {
            if ctx.param(&p.name).is_none() {
                ctx.params.push(p.clone());
            }
        }
        for c in &next.ctx.constraints {
            if !ctx.constraints.contains(c) {
                ctx.constraints.push(c.clone());
            }
        }
        Ok(IsoCertificate {
            id: None,
            matrix: next.matrix.mul(&self.matrix)?,
            source: self.source.clone(),
            target: next.target.clone(),
            ctx,
        })
    }
}

/// `C = B` from `t` to its T-dual.
pub fn t_duality(t: &ManinTriple) -> IsoCertificate {
    let (m, n) = t.super_dim();
    IsoCertificate {
        id: Some(format!("T-duality({})", t.label())),
        matrix: canonical_form(m, n).matrix,
        source: t.clone(),
        target: t_dual(t),
        ctx: t.ctx.clone(),
    }
}

/// `C = diag(A, A~)` with `A~ = (A^{-1})^T`, from `t` to the triple with the
/// dual transported by `A~`. `A` must be an automorphism of the left half.
pub fn from_automorphism(t: &ManinTriple, a: &Matrix) -> Result<IsoCertificate> {
    if !t.left.is_automorphism(a)? {
        return Err(Error::NotAutomorphism(format!("matrix does not preserve {}", t.left.label())));
    }
    let ainv = a.inverse()?;
    let at = ainv.transpose();
    let mut target = t.clone();
    target.id = None;
    target.right.tensor = transport_tensor(&t.right.tensor, &at, &a.transpose())?;
    Ok(IsoCertificate { id: None, matrix: Matrix::block_diag(a, &at), source: t.clone(), target, ctx: t.ctx.clone() })
}

/// `C_a^p C_b^q F_pq^r - F'_ab^c C_c^r` for every nonzero component.
pub fn intertwining_residuals(f: &StructureTensor, g: &StructureTensor, c: &Matrix) -> Vec<TensorResidual> {
    let d = f.dim();
    let mut nz: Vec<(usize, usize, usize, &Scalar)> = Vec::new();
    for p in 0..d {
        for q in 0..d {
            for r in 0..d {
                let x = f.get(p, q, r);
                if !x.is_zero() {
                    nz.push((p, q, r, x));
                }
            }
        }
    }
    let mut out = Vec::new();
    for a in 0..d {
        for b in 0..d {
            let mut v = vec![Scalar::zero(); d];
            for &(p, q, r, x) in &nz {
                let cap = c.get(a, p);
                if cap.is_zero() {
                    continue;
                }
                let cbq = c.get(b, q);
                if cbq.is_zero() {
                    continue;
                }
                v[r] = v[r].add(&cap.mul(cbq).mul(x));
            }
            for k in 0..d {
                let y = g.get(a, b, k);
                if y.is_zero() {
                    continue;
                }
                for (r, vr) in v.iter_mut().enumerate() {
                    let ckr = c.get(k, r);
                    if !ckr.is_zero() {
                        *vr = vr.sub(&y.mul(ckr));
                    }
                }
            }
            for (r, value) in v.into_iter().enumerate() {
                if !value.is_zero() {
                    out.push(TensorResidual { i: a, j: b, k: r, value });
                }
            }
        }
    }
    out
}

/// Both conditions on one instance with every needed value already in place.
pub fn check_instance(c: &Matrix, source: &ManinTriple, target: &ManinTriple, binding: Bindings) -> InstanceReport {
    let mut rep = InstanceReport {
        binding,
        even: false,
        invertible: false,
        form_residuals: Vec::new(),
        bracket_residuals: Vec::new(),
        error: None,
    };
    let run = |rep: &mut InstanceReport| -> Result<()> {
        let f = build_double(source)?.algebra;
        let g = build_double(target)?.algebra;
        if c.rows() != f.dim() || c.cols() != f.dim() || g.dim() != f.dim() {
            return Err(Error::DimensionMismatch("certificate size".into()));
        }
        rep.even = f.grading.is_even_matrix(c);
        rep.invertible = !c.det()?.is_zero();
        let (m, n) = source.super_dim();
        let b = canonical_form(m, n).matrix;
        let cbct = c.mul(&b)?.mul(&c.transpose())?;
        let diff = cbct.sub(&b)?;
        for i in 0..diff.rows() {
            for j in 0..diff.cols() {
                let v = diff.get(i, j);
                if !v.is_zero() {
                    rep.form_residuals.push((i, j, v.clone()));
                }
            }
        }
        rep.bracket_residuals = intertwining_residuals(&f.tensor, &g.tensor, c);
        Ok(())
    };
    if let Err(e) = run(&mut rep) {
        rep.error = Some(e.to_string());
    }
    rep
}

fn instance(cert: &IsoCertificate, vals: &HashMap<Var, Rat>, binding: Bindings) -> InstanceReport {
    let sub = || -> Result<(Matrix, ManinTriple, ManinTriple)> {
        Ok((
            cert.matrix.substitute(vals)?,
            cert.source.substitute_unchecked(vals)?,
            cert.target.substitute_unchecked(vals)?,
        ))
    };
    match sub() {
        Ok((c, s, t)) => check_instance(&c, &s, &t, binding),
        Err(e) => InstanceReport {
            binding,
            even: false,
            invertible: false,
            form_residuals: Vec::new(),
            bracket_residuals: Vec::new(),
            error: Some(e.to_string()),
        },
    }
}

/// Number of random bindings checked for certificates with continuous parameters.
pub const SAMPLE_CHECKS: usize = 10;

/// Checks evenness, invertibility, `C B C^T = B` and the bracket condition,
/// symbolically on every sign branch and at random admissible bindings.
pub fn verify_certificate(cert: &IsoCertificate) -> Result<CertificateReport> {
    verify_certificate_with(cert, SAMPLE_CHECKS, 0)
}

pub fn verify_certificate_with(cert: &IsoCertificate, samples: usize, seed: u64) -> Result<CertificateReport> {
    let d = 2 * cert.source.left.dim();
    if cert.matrix.rows() != d || cert.matrix.cols() != d {
        return Err(Error::DimensionMismatch(format!(
            "certificate of size {} on doubles of dimension {d}",
            cert.matrix.rows()
        )));
    }
    let mut rep = CertificateReport { id: cert.label(), branches: Vec::new(), samples: Vec::new() };
    for b in cert.ctx.branches() {
        rep.branches.push(instance(cert, &b.vars(), b));
    }
    let continuous = cert.ctx.params.iter().any(|p| p.domain == crate::scalar::Domain::Real);
    if continuous && samples > 0 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut misses = 0;
        while rep.samples.len() < samples && misses < 20 * samples {
            let Some(b) = cert.ctx.sample(&mut rng, 200) else {
                break;
            };
            let r = instance(cert, &b.vars(), b);
            // bindings where an entry is undefined lie outside the certificate
            if r.error.as_deref().is_some_and(|e| e.contains("division by zero")) {
                misses += 1;
                continue;
            }
            rep.samples.push(r);
        }
    }
    Ok(rep)
}
