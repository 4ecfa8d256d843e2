//! Serialises catalog items back to the text format.

use super::ast::*;
use std::fmt::Write;

fn prec(e: &Expr) -> u8 {
    match e.kind {
        ExprKind::Add(..) | ExprKind::Sub(..) => 1,
        ExprKind::Mul(..) | ExprKind::Div(..) => 2,
        ExprKind::Neg(..) => 3,
        ExprKind::Pow(..) => 4,
        ExprKind::Int(..) | ExprKind::Ident(..) | ExprKind::Sqrt(..) => 5,
    }
}

fn wrap(e: &Expr, min: u8, out: &mut String) {
    if prec(e) < min {
        out.push('(');
        expr(e, out);
        out.push(')');
    } else {
        expr(e, out);
    }
}

fn expr(e: &Expr, out: &mut String) {
    match &e.kind {
        ExprKind::Int(n) => write!(out, "{n}").unwrap(),
        ExprKind::Ident(s) => out.push_str(s),
        ExprKind::Neg(x) => {
            out.push('-');
            wrap(x, 3, out);
        }
        ExprKind::Add(a, b) => {
            wrap(a, 1, out);
            out.push_str(" + ");
            wrap(b, 2, out);
        }
        ExprKind::Sub(a, b) => {
            wrap(a, 1, out);
            out.push_str(" - ");
            wrap(b, 2, out);
        }
        ExprKind::Mul(a, b) => {
            wrap(a, 2, out);
            out.push('*');
            wrap(b, 3, out);
        }
        ExprKind::Div(a, b) => {
            wrap(a, 2, out);
            out.push('/');
            wrap(b, 3, out);
        }
        ExprKind::Pow(a, k) => {
            wrap(a, 5, out);
            write!(out, "^{k}").unwrap();
        }
        ExprKind::Sqrt(a) => {
            out.push_str("sqrt(");
            expr(a, out);
            out.push(')');
        }
    }
}

pub fn format_expr(e: &Expr) -> String {
    let mut s = String::new();
    expr(e, &mut s);
    s
}

fn header(h: &Header, out: &mut String, indent: &str) {
    if !h.params.is_empty() {
        write!(out, "{indent}params {{").unwrap();
        for d in &h.params {
            match d {
                Decl::Param { name, domain, .. } => {
                    let dom = match domain {
                        DomainSyn::Real => "real".to_string(),
                        DomainSyn::Sign => "sign".to_string(),
                        DomainSyn::Set(v) => {
                            format!("{{{}}}", v.iter().map(format_expr).collect::<Vec<_>>().join(", "))
                        }
                    };
                    write!(out, " {name}: {dom};").unwrap();
                }
                Decl::Radical { name, radicand, .. } => {
                    write!(out, " {name} = sqrt({});", format_expr(radicand)).unwrap();
                }
            }
        }
        out.push_str(" }\n");
    }
    if !h.constraints.is_empty() {
        write!(out, "{indent}where {{").unwrap();
        for c in &h.constraints {
            write!(out, " {} {} {};", format_expr(&c.lhs), c.rel.symbol(), format_expr(&c.rhs)).unwrap();
        }
        out.push_str(" }\n");
    }
}

fn algebra_body(a: &AlgebraSyn, out: &mut String, indent: &str) {
    writeln!(out, "super_dim ({},{})", a.m, a.n).unwrap();
    header(&a.header, out, indent);
    if !a.brackets.is_empty() {
        write!(out, "{indent}brackets {{").unwrap();
        for b in &a.brackets {
            write!(out, " [{},{}] = {};", b.left, b.right, format_expr(&b.rhs)).unwrap();
        }
        out.push_str(" }\n");
    }
}

fn args(a: &[(String, Expr)]) -> String {
    if a.is_empty() {
        return String::new();
    }
    let inner: Vec<String> = a.iter().map(|(k, e)| format!("{k} = {}", format_expr(e))).collect();
    format!("({})", inner.join(", "))
}

fn alg_ref(r: &AlgRefSyn, out: &mut String) {
    match r {
        AlgRefSyn::Named { name, args: a, .. } => {
            out.push_str(name);
            out.push_str(&args(a));
        }
        AlgRefSyn::Inline(a) => {
            out.push_str("{ ");
            algebra_body(a, out, "    ");
            out.push_str("  }");
        }
    }
}

fn sides(l: &AlgRefSyn, r: &AlgRefSyn, out: &mut String) {
    out.push_str("  left = ");
    alg_ref(l, out);
    out.push_str(";\n  right = ");
    alg_ref(r, out);
    out.push_str(";\n");
}

fn triple_ref(r: &TripleRefSyn, out: &mut String) {
    match r {
        TripleRefSyn::Named { id, args: a, .. } => {
            out.push_str(id);
            out.push_str(&args(a));
        }
        TripleRefSyn::Inline { left, right } => {
            out.push_str("{\n");
            sides(left, right, out);
            out.push('}');
        }
    }
}

fn matrix(m: &[Vec<Expr>], out: &mut String, indent: &str) {
    write!(out, "{indent}matrix [").unwrap();
    for (i, row) in m.iter().enumerate() {
        if i > 0 {
            out.push(',');
        }
        write!(out, "\n{indent}  [{}]", row.iter().map(format_expr).collect::<Vec<_>>().join(", ")).unwrap();
    }
    out.push_str("]\n");
}

/// Text that parses back to the same items, up to source positions.
pub fn write_items(items: &[Item]) -> String {
    let mut out = String::new();
    for (n, it) in items.iter().enumerate() {
        if n > 0 {
            out.push('\n');
        }
        match it {
            Item::Algebra(a) => {
                write!(out, "algebra {} ", a.name.as_deref().unwrap_or("_")).unwrap();
                algebra_body(a, &mut out, "  ");
            }
            Item::Triple(t) => {
                writeln!(out, "triple {} {{", t.id).unwrap();
                header(&t.header, &mut out, "  ");
                sides(&t.left, &t.right, &mut out);
                out.push_str("}\n");
            }
            Item::Cert(c) => {
                write!(out, "cert {} from ", c.id).unwrap();
                triple_ref(&c.from, &mut out);
                out.push_str(" to ");
                triple_ref(&c.to, &mut out);
                out.push('\n');
                header(&c.header, &mut out, "  ");
                matrix(&c.matrix, &mut out, "  ");
            }
            Item::Automorphisms(a) => {
                writeln!(out, "automorphisms {} {{", a.algebra).unwrap();
                for comp in &a.components {
                    out.push_str("  component {\n");
                    header(&comp.header, &mut out, "    ");
                    if !comp.nonzero.is_empty() {
                        out.push_str("    nonzero {");
                        for e in &comp.nonzero {
                            write!(out, " {};", format_expr(e)).unwrap();
                        }
                        out.push_str(" }\n");
                    }
                    matrix(&comp.matrix, &mut out, "    ");
                    out.push_str("  }\n");
                }
                out.push_str("}\n");
            }
        }
    }
    out
}
