//! The shipped catalog: algebras, triples, certificates and automorphism
//! groups, elaborated from the text format.

use crate::algebra::{standard_basis_names, AutomorphismFamily, Grading, StructureTensor, SuperAlgebra};
use crate::error::{Error, Result};
use crate::iso::IsoCertificate;
use crate::linalg::Matrix;
use crate::scalar::{Bindings, Constraint, Domain, ParamContext, Rat, Scalar, Var};
use crate::text::ast::*;
use crate::text::parse_file;
use crate::triple::ManinTriple;
use std::collections::{BTreeMap, HashMap};
use std::path::Path;

/// Directories searched instead of the embedded files, separated by `:`.
pub const CATALOG_ENV: &str = "SUPERDOUBLE_CATALOG";

/// Embedded catalog files in load order; later files refer to earlier ones.
pub const BUILTIN: &[(&str, &str)] = &[
    ("table1.sd", include_str!("../data/table1.sd")),
    ("table3.sd", include_str!("../data/table3.sd")),
    ("table6.sd", include_str!("../data/table6.sd")),
    ("duals.sd", include_str!("../data/duals.sd")),
    ("table2.sd", include_str!("../data/table2.sd")),
    ("table4.sd", include_str!("../data/table4.sd")),
    ("table7.sd", include_str!("../data/table7.sd")),
    ("appendix_a.sd", include_str!("../data/appendix_a.sd")),
    ("appendix_b.sd", include_str!("../data/appendix_b.sd")),
];

/// A named catalog object and the file that defined it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Entry<T> {
    pub name: String,
    pub file: String,
    pub value: T,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Catalog {
    algebras: Vec<Entry<SuperAlgebra>>,
    triples: Vec<Entry<ManinTriple>>,
    certificates: Vec<Entry<IsoCertificate>>,
    automorphisms: Vec<Entry<Vec<AutomorphismFamily>>>,
    index: HashMap<(u8, String), usize>,
}

const ALG: u8 = 0;
const TRI: u8 = 1;
const CERT: u8 = 2;
const AUT: u8 = 3;

impl Catalog {
    pub fn new() -> Catalog {
        Catalog::default()
    }

    /// The embedded files, or the directories named by [`CATALOG_ENV`].
    pub fn load() -> Result<Catalog> {
        match std::env::var(CATALOG_ENV) {
            Ok(dirs) if !dirs.trim().is_empty() => {
                let mut c = Catalog::new();
                for d in dirs.split(':').filter(|d| !d.is_empty()) {
                    c.add_dir(Path::new(d))?;
                }
                Ok(c)
            }
            _ => Catalog::builtin(),
        }
    }

    pub fn builtin() -> Result<Catalog> {
        let mut c = Catalog::new();
        for (name, src) in BUILTIN {
            c.add_source(name, src)?;
        }
        Ok(c)
    }

    /// Loads every `.sd` file of a directory, builtin names first in their
    /// usual order, then the rest alphabetically.
    pub fn add_dir(&mut self, dir: &Path) -> Result<()> {
        let rd = std::fs::read_dir(dir)
            .map_err(|e| Error::UnknownName(format!("catalog directory {}: {e}", dir.display())))?;
        let mut files: Vec<_> =
            rd.filter_map(|e| e.ok().map(|e| e.path())).filter(|p| p.extension().is_some_and(|x| x == "sd")).collect();
        let rank = |p: &Path| {
            let n = p.file_name().and_then(|n| n.to_str()).unwrap_or("");
            BUILTIN.iter().position(|(b, _)| *b == n).unwrap_or(BUILTIN.len())
        };
        files.sort_by(|a, b| rank(a).cmp(&rank(b)).then_with(|| a.cmp(b)));
        for f in files {
            self.add_file(&f)?;
        }
        Ok(())
    }

    pub fn add_file(&mut self, path: &Path) -> Result<()> {
        let src = std::fs::read_to_string(path)
            .map_err(|e| Error::UnknownName(format!("catalog file {}: {e}", path.display())))?;
        let name = path.file_name().and_then(|n| n.to_str()).unwrap_or("<file>").to_string();
        self.add_source(&name, &src)
    }

    /// Parses and elaborates one file against what is already loaded.
    pub fn add_source(&mut self, file: &str, src: &str) -> Result<()> {
        let items = parse_file(src).map_err(|e| in_file(file, e))?;
        self.add_items(file, &items)
    }

    pub fn add_items(&mut self, file: &str, items: &[Item]) -> Result<()> {
        for it in items {
            self.add_item(file, it).map_err(|e| in_file(file, e))?;
        }
        Ok(())
    }

    fn add_item(&mut self, file: &str, it: &Item) -> Result<()> {
        match it {
            Item::Algebra(a) => {
                let name = a.name.clone().unwrap_or_default();
                let mut ctx = ParamContext::new();
                let alg = self.algebra_syn(a, &mut ctx)?.with_name(&name);
                let alg = SuperAlgebra { ctx, ..alg };
                self.insert(ALG, file, &name, a.pos, |c| &mut c.algebras, alg)
            }
            Item::Triple(t) => {
                let mut ctx = ParamContext::new();
                declare(&t.header, &mut ctx, None)?;
                let left = self.alg_ref(&t.left, &mut ctx)?;
                let right = self.alg_ref(&t.right, &mut ctx)?;
                constrain(&t.header, &mut ctx)?;
                let tr = finish_triple(left, right, ctx)?.with_id(&t.id);
                self.insert(TRI, file, &t.id, t.pos, |c| &mut c.triples, tr)
            }
            Item::Cert(c) => {
                let mut ctx = ParamContext::new();
                declare(&c.header, &mut ctx, None)?;
                let source = self.triple_ref(&c.from, &mut ctx)?;
                let target = self.triple_ref(&c.to, &mut ctx)?;
                constrain(&c.header, &mut ctx)?;
                let matrix = eval_matrix(&c.matrix, &mut ctx, None)?;
                let source = ManinTriple { ctx: ctx.clone(), ..source };
                let target = ManinTriple { ctx: ctx.clone(), ..target };
                let mut cert = IsoCertificate::new(matrix, source, target, ctx).map_err(|e| at(c.pos, e))?;
                cert.id = Some(c.id.clone());
                self.insert(CERT, file, &c.id, c.pos, |c| &mut c.certificates, cert)
            }
            Item::Automorphisms(a) => {
                let alg = self.algebra_def(&a.algebra, a.pos)?.clone();
                let mut fams = Vec::new();
                for comp in &a.components {
                    let mut ctx = ParamContext::new();
                    declare(&comp.header, &mut ctx, Some(&alg.ctx))?;
                    constrain(&comp.header, &mut ctx)?;
                    let matrix = eval_matrix(&comp.matrix, &mut ctx, Some(&alg.ctx))?;
                    let mut nonzero = Vec::new();
                    for e in &comp.nonzero {
                        nonzero.push(scalar(e, &mut ctx, Some(&alg.ctx))?);
                    }
                    if matrix.rows() != alg.dim() || matrix.cols() != alg.dim() {
                        return Err(at(
                            a.pos,
                            Error::DimensionMismatch(format!(
                                "automorphism of {} has size {}",
                                a.algebra,
                                matrix.rows()
                            )),
                        ));
                    }
                    fams.push(
                        AutomorphismFamily::new(alg.grading.clone(), matrix, ctx, nonzero).map_err(|e| at(a.pos, e))?,
                    );
                }
                self.insert(AUT, file, &a.algebra, a.pos, |c| &mut c.automorphisms, fams)
            }
        }
    }

    fn insert<T>(
        &mut self,
        kind: u8,
        file: &str,
        name: &str,
        pos: Pos,
        list: impl Fn(&mut Catalog) -> &mut Vec<Entry<T>>,
        value: T,
    ) -> Result<()> {
        let key = (kind, name.to_string());
        if self.index.contains_key(&key) {
            return Err(Error::Parse { line: pos.line, col: pos.col, msg: format!("duplicate definition of {name}") });
        }
        let l = list(self);
        l.push(Entry { name: name.to_string(), file: file.to_string(), value });
        let n = l.len() - 1;
        self.index.insert(key, n);
        Ok(())
    }

    fn algebra_def(&self, name: &str, pos: Pos) -> Result<&SuperAlgebra> {
        self.index
            .get(&(ALG, name.to_string()))
            .map(|&i| &self.algebras[i].value)
            .ok_or_else(|| Error::UnknownName(format!("algebra {name} at {}:{}", pos.line, pos.col)))
    }

    fn triple_def(&self, id: &str, pos: Pos) -> Result<&ManinTriple> {
        self.index
            .get(&(TRI, id.to_string()))
            .map(|&i| &self.triples[i].value)
            .ok_or_else(|| Error::UnknownId(format!("triple {id} at {}:{}", pos.line, pos.col)))
    }

    /// An algebra body elaborated in `ctx`, which receives its parameters.
    fn algebra_syn(&self, a: &AlgebraSyn, ctx: &mut ParamContext) -> Result<SuperAlgebra> {
        declare(&a.header, ctx, None)?;
        let g = Grading::standard(a.m, a.n);
        let basis = standard_basis_names(a.m, a.n);
        let d = g.dim();
        let mut acc: BTreeMap<(usize, usize), Vec<Scalar>> = BTreeMap::new();
        for b in &a.brackets {
            let idx = |n: &str| {
                basis
                    .iter()
                    .position(|x| x == n)
                    .ok_or_else(|| Error::UnknownName(format!("basis vector {n} at {}:{}", b.pos.line, b.pos.col)))
            };
            let (i, j) = (idx(&b.left)?, idx(&b.right)?);
            let v = match eval(&b.rhs, ctx, Some(&basis), None)? {
                Value::V(v) => v,
                Value::S(s) if s.is_zero() => vec![Scalar::zero(); d],
                Value::S(_) => return Err(parse_err(b.pos, "bracket value must be a vector")),
            };
            for (k, c) in v.iter().enumerate() {
                if !c.is_zero() && !g.admissible(i, j, k) {
                    return Err(parse_err(b.pos, &format!("[{},{}] cannot contain {}", b.left, b.right, basis[k])));
                }
            }
            let ((i, j), v) = if i <= j {
                ((i, j), v)
            } else if g.sign(i, j) == 1 {
                ((j, i), v.iter().map(|x| x.neg()).collect())
            } else {
                ((j, i), v)
            };
            let e = acc.entry((i, j)).or_insert_with(|| vec![Scalar::zero(); d]);
            for (x, y) in e.iter_mut().zip(v) {
                *x = x.add(&y);
            }
        }
        constrain(&a.header, ctx)?;
        let list: Vec<_> = acc.into_iter().map(|((i, j), v)| (i, j, v)).collect();
        let t = crate::algebra::tensor_from_brackets(&g, &list);
        Ok(SuperAlgebra::new(g, t, ctx.clone()))
    }

    fn alg_ref(&self, r: &AlgRefSyn, ctx: &mut ParamContext) -> Result<SuperAlgebra> {
        match r {
            AlgRefSyn::Inline(a) => self.algebra_syn(a, ctx),
            AlgRefSyn::Named { name, args, pos } => {
                let def = self.algebra_def(name, *pos)?;
                let mut t = instantiate(&def.ctx, &[&def.tensor], args, ctx, name, *pos)?;
                let mut a = def.clone();
                a.tensor = t.remove(0);
                Ok(a)
            }
        }
    }

    fn triple_ref(&self, r: &TripleRefSyn, ctx: &mut ParamContext) -> Result<ManinTriple> {
        match r {
            TripleRefSyn::Inline { left, right } => {
                let l = self.alg_ref(left, ctx)?;
                let rt = self.alg_ref(right, ctx)?;
                finish_triple(l, rt, ctx.clone())
            }
            TripleRefSyn::Named { id, args, pos } => {
                let def = self.triple_def(id, *pos)?;
                let mut t = instantiate(&def.ctx, &[&def.left.tensor, &def.right.tensor], args, ctx, id, *pos)?;
                let mut tr = def.clone();
                tr.right.tensor = t.pop().unwrap();
                tr.left.tensor = t.pop().unwrap();
                if !args.is_empty() {
                    tr.id = Some(format!("{id}({})", format_args_syn(args)));
                }
                Ok(tr)
            }
        }
    }

    /// The algebra `name` with `b` bound.
    pub fn algebra(&self, name: &str, b: &Bindings) -> Result<SuperAlgebra> {
        let a = self
            .index
            .get(&(ALG, name.to_string()))
            .map(|&i| &self.algebras[i].value)
            .ok_or_else(|| Error::UnknownName(name.to_string()))?;
        if b.is_empty() {
            Ok(a.clone())
        } else {
            a.substitute(b)
        }
    }

    /// The triple `id` with `b` bound.
    pub fn triple(&self, id: &str, b: &Bindings) -> Result<ManinTriple> {
        let t = self
            .index
            .get(&(TRI, id.to_string()))
            .map(|&i| &self.triples[i].value)
            .ok_or_else(|| Error::UnknownId(id.to_string()))?;
        if b.is_empty() {
            Ok(t.clone())
        } else {
            t.substitute(b)
        }
    }

    pub fn certificate(&self, id: &str) -> Result<&IsoCertificate> {
        self.index
            .get(&(CERT, id.to_string()))
            .map(|&i| &self.certificates[i].value)
            .ok_or_else(|| Error::UnknownId(id.to_string()))
    }

    pub fn automorphisms(&self, name: &str) -> Result<&[AutomorphismFamily]> {
        self.index
            .get(&(AUT, name.to_string()))
            .map(|&i| self.automorphisms[i].value.as_slice())
            .ok_or_else(|| Error::UnknownName(format!("automorphisms of {name}")))
    }

    pub fn algebras(&self) -> &[Entry<SuperAlgebra>] {
        &self.algebras
    }

    pub fn triples(&self) -> &[Entry<ManinTriple>] {
        &self.triples
    }

    pub fn certificates(&self) -> &[Entry<IsoCertificate>] {
        &self.certificates
    }

    pub fn automorphism_groups(&self) -> &[Entry<Vec<AutomorphismFamily>>] {
        &self.automorphisms
    }

    /// Triples from one file, in file order.
    pub fn triples_in<'a>(&'a self, file: &'a str) -> impl Iterator<Item = &'a Entry<ManinTriple>> + 'a {
        self.triples.iter().filter(move |e| e.file == file)
    }

    pub fn certificates_in<'a>(&'a self, file: &'a str) -> impl Iterator<Item = &'a Entry<IsoCertificate>> + 'a {
        self.certificates.iter().filter(move |e| e.file == file)
    }
}

fn format_args_syn(args: &[(String, Expr)]) -> String {
    args.iter().map(|(k, e)| format!("{k}={}", crate::text::format_expr(e))).collect::<Vec<_>>().join(",")
}

fn finish_triple(left: SuperAlgebra, right: SuperAlgebra, ctx: ParamContext) -> Result<ManinTriple> {
    let left = SuperAlgebra { ctx: ctx.clone(), ..left };
    let right = SuperAlgebra { ctx: ctx.clone(), ..right };
    ManinTriple::new(left, right, ctx)
}

fn in_file(file: &str, e: Error) -> Error {
    match e {
        Error::Parse { line, col, msg } => Error::Parse { line, col, msg: format!("{file}: {msg}") },
        Error::UnknownName(m) => Error::UnknownName(format!("{m} in {file}")),
        Error::UnknownId(m) => Error::UnknownId(format!("{m} in {file}")),
        Error::ConstraintViolation(m) => Error::ConstraintViolation(format!("{m} in {file}")),
        other => other,
    }
}

fn at(pos: Pos, e: Error) -> Error {
    match e {
        Error::DimensionMismatch(m) => Error::DimensionMismatch(format!("{m} at {}:{}", pos.line, pos.col)),
        Error::NotAutomorphism(m) => Error::NotAutomorphism(format!("{m} at {}:{}", pos.line, pos.col)),
        other => other,
    }
}

fn parse_err(pos: Pos, msg: &str) -> Error {
    Error::Parse { line: pos.line, col: pos.col, msg: msg.to_string() }
}

/// Declares header parameters; names already in scope keep their outer declaration.
fn declare(h: &Header, ctx: &mut ParamContext, fallback: Option<&ParamContext>) -> Result<()> {
    for d in &h.params {
        match d {
            Decl::Param { name, domain, pos } => {
                if ctx.param(name).is_some() {
                    continue;
                }
                let dom = match domain {
                    DomainSyn::Real => Domain::Real,
                    DomainSyn::Sign => Domain::Sign,
                    DomainSyn::Set(es) => {
                        let mut vals = Vec::new();
                        for e in es {
                            let s = scalar(e, ctx, fallback)?;
                            vals.push(
                                s.as_rat().ok_or_else(|| parse_err(*pos, "value sets must be rational constants"))?,
                            );
                        }
                        Domain::Discrete(vals)
                    }
                };
                ctx.add_param(name, dom).map_err(|_| parse_err(*pos, &format!("duplicate parameter {name}")))?;
            }
            Decl::Radical { name, radicand, pos } => {
                let q = scalar(radicand, ctx, fallback)?;
                ctx.set_radical(name, q).map_err(|e| match e {
                    Error::InconsistentRadical(m) => {
                        Error::InconsistentRadical(format!("{m} at {}:{}", pos.line, pos.col))
                    }
                    other => other,
                })?;
            }
        }
    }
    Ok(())
}

fn constrain(h: &Header, ctx: &mut ParamContext) -> Result<()> {
    for c in &h.constraints {
        let lhs = scalar(&c.lhs, ctx, None)?;
        let rhs = scalar(&c.rhs, ctx, None)?;
        add_constraint(ctx, Constraint { lhs, rel: c.rel, rhs }, c.lhs.pos)?;
    }
    Ok(())
}

/// Decided constraints are checked and dropped, the rest kept once.
fn add_constraint(ctx: &mut ParamContext, c: Constraint, pos: Pos) -> Result<()> {
    match c.decide(&HashMap::new()) {
        Ok(Some(true)) => Ok(()),
        Ok(Some(false)) => Err(Error::ConstraintViolation(format!("{c} fails at {}:{}", pos.line, pos.col))),
        _ => {
            if !ctx.constraints.contains(&c) {
                ctx.add_constraint(c);
            }
            Ok(())
        }
    }
}

/// Binds the parameters of a definition: given arguments are evaluated in
/// `ctx`, omitted ones are passed through under the same name.
fn instantiate(
    def: &ParamContext,
    tensors: &[&StructureTensor],
    args: &[(String, Expr)],
    ctx: &mut ParamContext,
    what: &str,
    pos: Pos,
) -> Result<Vec<StructureTensor>> {
    for (k, _) in args {
        if def.param(k).is_none() {
            return Err(Error::UnknownName(format!("{k} is not a parameter of {what} at {}:{}", pos.line, pos.col)));
        }
    }
    let mut map: Vec<(Var, Scalar)> = Vec::new();
    for p in &def.params {
        match args.iter().find(|(k, _)| k == &p.name) {
            Some((_, e)) => {
                let v = scalar(e, ctx, None)?;
                if let Some(c) = v.as_rat() {
                    let ok = match &p.domain {
                        Domain::Real => true,
                        Domain::Sign => c.is_one() || (-&c).is_one(),
                        Domain::Discrete(vals) => vals.contains(&c),
                    };
                    if !ok {
                        return Err(Error::ConstraintViolation(format!(
                            "{what}: {} = {c} outside its domain at {}:{}",
                            p.name, pos.line, pos.col
                        )));
                    }
                }
                map.push((p.var(), v));
            }
            None => {
                if ctx.param(&p.name).is_none() {
                    ctx.add_param(&p.name, p.domain.clone())?;
                }
            }
        }
    }
    let out = tensors.iter().map(|t| t.map(|x| substitute_all(x, &map))).collect::<Result<Vec<_>>>()?;
    for c in &def.constraints {
        let c = Constraint { lhs: substitute_all(&c.lhs, &map)?, rel: c.rel, rhs: substitute_all(&c.rhs, &map)? };
        add_constraint(ctx, c, pos).map_err(|e| match e {
            Error::ConstraintViolation(m) => Error::ConstraintViolation(format!("{what} requires {m}")),
            other => other,
        })?;
    }
    if let Some((n, q)) = def.radical_decl() {
        ctx.set_radical(n, substitute_all(q, &map)?)?;
    }
    Ok(out)
}

/// Simultaneous substitution through fresh intermediates.
fn substitute_all(s: &Scalar, map: &[(Var, Scalar)]) -> Result<Scalar> {
    let live: Vec<&(Var, Scalar)> = map.iter().filter(|(v, x)| x != &Scalar::var(*v)).collect();
    let vars = s.vars();
    if live.iter().all(|(v, _)| !vars.contains(v)) {
        return Ok(s.clone());
    }
    let mut r = s.clone();
    let tmp: Vec<Var> = (0..live.len()).map(|i| Var::new(&format!("#{i}"))).collect();
    for ((v, _), t) in live.iter().zip(&tmp) {
        r = r.compose(*v, &Scalar::var(*t))?;
    }
    for ((_, x), t) in live.iter().zip(&tmp) {
        r = r.compose(*t, x)?;
    }
    Ok(r)
}

enum Value {
    S(Scalar),
    V(Vec<Scalar>),
}

fn scalar(e: &Expr, ctx: &mut ParamContext, fallback: Option<&ParamContext>) -> Result<Scalar> {
    match eval(e, ctx, None, fallback)? {
        Value::S(s) => Ok(s),
        Value::V(_) => Err(parse_err(e.pos, "expected a scalar")),
    }
}

fn eval_matrix(rows: &[Vec<Expr>], ctx: &mut ParamContext, fallback: Option<&ParamContext>) -> Result<Matrix> {
    let mut out = Vec::new();
    for r in rows {
        let mut row = Vec::new();
        for e in r {
            row.push(scalar(e, ctx, fallback)?);
        }
        out.push(row);
    }
    let pos = rows.first().and_then(|r| r.first()).map(|e| e.pos).unwrap_or_default();
    Matrix::from_rows(out).map_err(|e| at(pos, e))
}

fn eval(e: &Expr, ctx: &mut ParamContext, basis: Option<&[String]>, fallback: Option<&ParamContext>) -> Result<Value> {
    use Value::*;
    let zero_div = |_| Error::ConstraintViolation(format!("division by zero at {}:{}", e.pos.line, e.pos.col));
    Ok(match &e.kind {
        ExprKind::Int(n) => S(Scalar::from_rat(Rat::from_bigint(n.clone()))),
        ExprKind::Ident(name) => {
            if let Some(k) = basis.and_then(|b| b.iter().position(|x| x == name)) {
                let mut v = vec![Scalar::zero(); basis.unwrap().len()];
                v[k] = Scalar::one();
                V(v)
            } else if ctx.param(name).is_some() {
                S(Scalar::var(Var::new(name)))
            } else if ctx.radical_name() == Some(name.as_str()) {
                S(ctx.radical_scalar().ok_or_else(|| parse_err(e.pos, "malformed radical"))?)
            } else if let Some(p) = fallback.and_then(|f| f.param(name)) {
                ctx.add_param(name, p.domain.clone())?;
                S(Scalar::var(Var::new(name)))
            } else {
                return Err(Error::UnknownName(format!("{name} at {}:{}", e.pos.line, e.pos.col)));
            }
        }
        ExprKind::Neg(x) => match eval(x, ctx, basis, fallback)? {
            S(s) => S(s.neg()),
            V(v) => V(v.iter().map(|c| c.neg()).collect()),
        },
        ExprKind::Add(a, b) | ExprKind::Sub(a, b) => {
            let sub = matches!(e.kind, ExprKind::Sub(..));
            let x = eval(a, ctx, basis, fallback)?;
            let y = eval(b, ctx, basis, fallback)?;
            let op = |p: &Scalar, q: &Scalar| if sub { p.sub(q) } else { p.add(q) };
            match (x, y) {
                (S(p), S(q)) => S(op(&p, &q)),
                (V(p), V(q)) => V(p.iter().zip(&q).map(|(p, q)| op(p, q)).collect()),
                (S(s), V(v)) if s.is_zero() => V(if sub { v.iter().map(|c| c.neg()).collect() } else { v }),
                (V(v), S(s)) if s.is_zero() => V(v),
                _ => return Err(parse_err(e.pos, "cannot add a scalar to a vector")),
            }
        }
        ExprKind::Mul(a, b) => {
            let x = eval(a, ctx, basis, fallback)?;
            let y = eval(b, ctx, basis, fallback)?;
            match (x, y) {
                (S(p), S(q)) => S(p.mul(&q)),
                (S(s), V(v)) | (V(v), S(s)) => V(v.iter().map(|c| c.mul(&s)).collect()),
                _ => return Err(parse_err(e.pos, "cannot multiply two vectors")),
            }
        }
        ExprKind::Div(a, b) => {
            let x = eval(a, ctx, basis, fallback)?;
            let S(q) = eval(b, ctx, basis, fallback)? else {
                return Err(parse_err(e.pos, "cannot divide by a vector"));
            };
            let qi = q.inv().map_err(zero_div)?;
            match x {
                S(p) => S(p.mul(&qi)),
                V(v) => V(v.iter().map(|c| c.mul(&qi)).collect()),
            }
        }
        ExprKind::Pow(a, k) => {
            let S(s) = eval(a, ctx, basis, fallback)? else {
                return Err(parse_err(e.pos, "cannot raise a vector to a power"));
            };
            S(s.pow(*k as i32).map_err(zero_div)?)
        }
        ExprKind::Sqrt(a) => {
            let q = scalar(a, ctx, fallback)?;
            if q.radical().is_some() {
                return Err(Error::InconsistentRadical(format!("nested radical at {}:{}", e.pos.line, e.pos.col)));
            }
            if q.is_constant() {
                S(Scalar::sqrt(q.rational_part().clone(), None)?)
            } else {
                match ctx.radical_decl() {
                    Some((_, r)) if r == &q => {}
                    Some((n, _)) => {
                        return Err(Error::InconsistentRadical(format!(
                            "sqrt({q}) besides {n} at {}:{}",
                            e.pos.line, e.pos.col
                        )))
                    }
                    None => ctx.set_radical(&format!("sqrt({q})"), q)?,
                }
                S(ctx.radical_scalar().ok_or_else(|| parse_err(e.pos, "malformed radical"))?)
            }
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::iso::verify_certificate;
    use crate::text::write_items;
    use crate::triple::{build_double, check_compatibility};

    #[test]
    fn builtin_loads() {
        let c = Catalog::builtin().unwrap();
        assert_eq!(c.triples_in("table2.sd").count(), 5);
        assert_eq!(c.triples_in("table4.sd").count(), 14);
        assert_eq!(c.triples_in("table7.sd").count(), 31);
    }

    #[test]
    fn algebras_satisfy_axioms() {
        let c = Catalog::builtin().unwrap();
        for e in c.algebras() {
            let a = &e.value;
            assert!(a.check_grading().is_empty(), "{}", e.name);
            assert!(a.check_antisymmetry().is_empty(), "{}", e.name);
            assert!(a.check_jacobi().is_empty(), "{}: {:?}", e.name, a.check_jacobi());
        }
    }

    #[test]
    fn triples_are_compatible_and_invariant() {
        let c = Catalog::builtin().unwrap();
        for e in c.triples() {
            let r = check_compatibility(&e.value).unwrap();
            assert!(r.is_empty(), "{}: {:?}", e.name, r.first());
            assert!(build_double(&e.value).unwrap().ad_invariance().unwrap().is_empty(), "{}", e.name);
        }
    }

    #[test]
    fn automorphism_families_hold() {
        let c = Catalog::builtin().unwrap();
        for e in c.automorphism_groups() {
            let a = c.algebra(&e.name, &Bindings::new()).unwrap();
            for (k, f) in e.value.iter().enumerate() {
                for b in f.ctx.branches() {
                    let m = f.matrix.substitute(&b.vars()).unwrap();
                    let a = a.substitute_unchecked(&b.vars()).unwrap();
                    let r = crate::algebra::automorphism_residuals(&a.tensor, &m);
                    assert!(r.is_empty(), "{} component {k} at {b}: {:?}", e.name, r.first());
                }
            }
        }
    }

    #[test]
    fn certificates_verify() {
        let c = Catalog::builtin().unwrap();
        let mut bad = Vec::new();
        for e in c.certificates() {
            let r = verify_certificate(&e.value).unwrap();
            if !r.passed() {
                bad.push((
                    e.name.clone(),
                    r.form_ok(),
                    r.brackets_ok(),
                    r.invertible(),
                    r.branches.iter().find_map(|b| b.error.clone()),
                ));
            }
        }
        assert!(bad.is_empty(), "{bad:#?}");
        assert_eq!(c.certificates().len(), 26);
        assert!(c.certificates().iter().any(|e| !verify_certificate(&e.value).unwrap().samples.is_empty()));
    }

    #[test]
    fn tampered_certificate_fails() {
        let c = Catalog::builtin().unwrap();
        let mut cert = c.certificate("appendixA/DD42_III_2").unwrap().clone();
        cert.matrix.set(3, 1, Scalar::int(2));
        let r = verify_certificate(&cert).unwrap();
        assert!(!r.passed());
        assert!(!r.brackets_ok());
    }

    #[test]
    fn round_trip() {
        let mut a = Catalog::new();
        let mut b = Catalog::new();
        for (name, src) in BUILTIN {
            let items = parse_file(src).unwrap();
            let text = write_items(&items);
            let again = parse_file(&text).unwrap();
            assert_eq!(write_items(&again), text, "{name}");
            a.add_items(name, &items).unwrap();
            b.add_items(name, &again).unwrap();
        }
        assert_eq!(a, b);
    }
}
