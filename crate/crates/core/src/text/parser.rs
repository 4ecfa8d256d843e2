use super::ast::*;
use super::lexer::{lex, Tok, Token};
use crate::error::{Error, Result};
use crate::scalar::Relation;
use num_traits::ToPrimitive;

pub struct Parser {
    toks: Vec<Token>,
    i: usize,
}

/// Parses a whole catalog file.
pub fn parse_file(src: &str) -> Result<Vec<Item>> {
    let mut p = Parser::new(src)?;
    let mut items = Vec::new();
    while !p.at_eof() {
        items.push(p.item()?);
    }
    Ok(items)
}

/// Parses a standalone expression.
pub fn parse_expr(src: &str) -> Result<Expr> {
    let mut p = Parser::new(src)?;
    let e = p.expr()?;
    if !p.at_eof() {
        return Err(p.err("trailing input after expression"));
    }
    Ok(e)
}

impl Parser {
    pub fn new(src: &str) -> Result<Parser> {
        Ok(Parser { toks: lex(src)?, i: 0 })
    }

    fn peek(&self) -> &Tok {
        &self.toks[self.i].tok
    }

    fn pos(&self) -> Pos {
        let t = &self.toks[self.i];
        Pos { line: t.line, col: t.col }
    }

    fn at_eof(&self) -> bool {
        matches!(self.peek(), Tok::Eof)
    }

    fn err(&self, msg: &str) -> Error {
        let t = &self.toks[self.i];
        let found = match &t.tok {
            Tok::Ident(s) => format!("`{s}`"),
            Tok::Int(n) => format!("`{n}`"),
            Tok::Sym(s) => format!("`{s}`"),
            Tok::Eof => "end of file".to_string(),
        };
        Error::Parse { line: t.line, col: t.col, msg: format!("{msg}, found {found}") }
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.i].tok.clone();
        if self.i + 1 < self.toks.len() {
            self.i += 1;
        }
        t
    }

    fn is_sym(&self, s: &str) -> bool {
        matches!(self.peek(), Tok::Sym(x) if *x == s)
    }

    fn is_kw(&self, k: &str) -> bool {
        matches!(self.peek(), Tok::Ident(x) if x == k)
    }

    fn eat_sym(&mut self, s: &str) -> bool {
        if self.is_sym(s) {
            self.bump();
            true
        } else {
            false
        }
    }

    fn sym(&mut self, s: &str) -> Result<()> {
        if self.eat_sym(s) {
            Ok(())
        } else {
            Err(self.err(&format!("expected `{s}`")))
        }
    }

    fn kw(&mut self, k: &str) -> Result<()> {
        if self.is_kw(k) {
            self.bump();
            Ok(())
        } else {
            Err(self.err(&format!("expected `{k}`")))
        }
    }

    fn ident(&mut self) -> Result<String> {
        match self.peek().clone() {
            Tok::Ident(s) => {
                self.bump();
                Ok(s)
            }
            _ => Err(self.err("expected identifier")),
        }
    }

    /// `seg ('/' seg)*`, segments being identifiers or integers.
    fn path(&mut self) -> Result<String> {
        let mut s = self.ident()?;
        while self.is_sym("/") {
            self.bump();
            match self.bump() {
                Tok::Ident(x) => s.push_str(&format!("/{x}")),
                Tok::Int(n) => s.push_str(&format!("/{n}")),
                _ => return Err(self.err("expected identifier after `/`")),
            }
        }
        Ok(s)
    }

    fn usize(&mut self) -> Result<usize> {
        match self.peek().clone() {
            Tok::Int(n) => {
                self.bump();
                n.to_usize().ok_or_else(|| self.err("integer too large"))
            }
            _ => Err(self.err("expected integer")),
        }
    }

    fn item(&mut self) -> Result<Item> {
        let pos = self.pos();
        let kw = self.ident()?;
        match kw.as_str() {
            "algebra" => {
                let name = self.ident()?;
                let mut a = self.algebra_body(pos)?;
                a.name = Some(name);
                Ok(Item::Algebra(a))
            }
            "triple" => self.triple(pos).map(Item::Triple),
            "cert" => self.cert(pos).map(Item::Cert),
            "automorphisms" => self.automorphisms(pos).map(Item::Automorphisms),
            _ => {
                self.i -= 1;
                Err(self.err("expected `algebra`, `triple`, `cert` or `automorphisms`"))
            }
        }
    }

    /// `super_dim (m,n)` followed by `params`, `where` and `brackets` sections.
    fn algebra_body(&mut self, pos: Pos) -> Result<AlgebraSyn> {
        self.kw("super_dim")?;
        self.sym("(")?;
        let m = self.usize()?;
        self.sym(",")?;
        let n = self.usize()?;
        self.sym(")")?;
        let mut header = Header::default();
        let mut brackets = Vec::new();
        loop {
            if self.header_section(&mut header)? {
                continue;
            }
            if self.is_kw("brackets") {
                self.bump();
                self.sym("{")?;
                while !self.eat_sym("}") {
                    let bpos = self.pos();
                    self.sym("[")?;
                    let left = self.ident()?;
                    self.sym(",")?;
                    let right = self.ident()?;
                    self.sym("]")?;
                    self.sym("=")?;
                    let rhs = self.expr()?;
                    self.sym(";")?;
                    brackets.push(BracketSyn { left, right, rhs, pos: bpos });
                }
                continue;
            }
            break;
        }
        Ok(AlgebraSyn { name: None, m, n, header, brackets, pos })
    }

    /// Parses a `params { .. }` or `where { .. }` section if one starts here.
    fn header_section(&mut self, h: &mut Header) -> Result<bool> {
        if self.is_kw("params") {
            self.bump();
            self.sym("{")?;
            while !self.eat_sym("}") {
                let pos = self.pos();
                let name = self.ident()?;
                if self.eat_sym("=") {
                    self.kw("sqrt")?;
                    self.sym("(")?;
                    let radicand = self.expr()?;
                    self.sym(")")?;
                    h.params.push(Decl::Radical { name, radicand, pos });
                } else {
                    self.sym(":")?;
                    let domain = if self.eat_sym("{") {
                        let mut v = vec![self.expr()?];
                        while self.eat_sym(",") {
                            v.push(self.expr()?);
                        }
                        self.sym("}")?;
                        DomainSyn::Set(v)
                    } else {
                        match self.ident()?.as_str() {
                            "real" => DomainSyn::Real,
                            "sign" => DomainSyn::Sign,
                            _ => {
                                self.i -= 1;
                                return Err(self.err("expected `real`, `sign` or a value set"));
                            }
                        }
                    };
                    h.params.push(Decl::Param { name, domain, pos });
                }
                self.sym(";")?;
            }
            return Ok(true);
        }
        if self.is_kw("where") {
            self.bump();
            self.sym("{")?;
            while !self.eat_sym("}") {
                let lhs = self.expr()?;
                let rel = match self.bump() {
                    Tok::Sym("!=") => Relation::Ne,
                    Tok::Sym(">") => Relation::Gt,
                    Tok::Sym(">=") => Relation::Ge,
                    Tok::Sym("<") => Relation::Lt,
                    Tok::Sym("<=") => Relation::Le,
                    _ => {
                        self.i -= 1;
                        return Err(self.err("expected a relation"));
                    }
                };
                let rhs = self.expr()?;
                self.sym(";")?;
                h.constraints.push(ConstraintSyn { lhs, rel, rhs });
            }
            return Ok(true);
        }
        Ok(false)
    }

    fn args(&mut self) -> Result<Vec<(String, Expr)>> {
        let mut args = Vec::new();
        if self.eat_sym("(") && !self.eat_sym(")") {
            loop {
                let k = self.ident()?;
                self.sym("=")?;
                args.push((k, self.expr()?));
                if self.eat_sym(")") {
                    break;
                }
                self.sym(",")?;
            }
        }
        Ok(args)
    }

    fn alg_ref(&mut self) -> Result<AlgRefSyn> {
        let pos = self.pos();
        if self.eat_sym("{") {
            let a = self.algebra_body(pos)?;
            self.sym("}")?;
            return Ok(AlgRefSyn::Inline(Box::new(a)));
        }
        let name = self.ident()?;
        let args = self.args()?;
        Ok(AlgRefSyn::Named { name, args, pos })
    }

    fn sides(&mut self, header: Option<&mut Header>) -> Result<(AlgRefSyn, AlgRefSyn)> {
        let mut header = header;
        let (mut left, mut right) = (None, None);
        while !self.eat_sym("}") {
            if let Some(h) = header.as_deref_mut() {
                if self.header_section(h)? {
                    continue;
                }
            }
            let side = self.ident()?;
            self.sym("=")?;
            let r = self.alg_ref()?;
            self.sym(";")?;
            match side.as_str() {
                "left" => left = Some(r),
                "right" => right = Some(r),
                _ => return Err(self.err("expected `left` or `right`")),
            }
        }
        match (left, right) {
            (Some(l), Some(r)) => Ok((l, r)),
            _ => Err(self.err("triple needs both `left` and `right`")),
        }
    }

    fn triple(&mut self, pos: Pos) -> Result<TripleSyn> {
        let id = self.path()?;
        self.sym("{")?;
        let mut header = Header::default();
        let (left, right) = self.sides(Some(&mut header))?;
        Ok(TripleSyn { id, header, left, right, pos })
    }

    fn triple_ref(&mut self) -> Result<TripleRefSyn> {
        let pos = self.pos();
        if self.eat_sym("{") {
            let (left, right) = self.sides(None)?;
            return Ok(TripleRefSyn::Inline { left, right });
        }
        let id = self.path()?;
        let args = self.args()?;
        Ok(TripleRefSyn::Named { id, args, pos })
    }

    fn matrix(&mut self) -> Result<Vec<Vec<Expr>>> {
        self.sym("[")?;
        let mut rows = Vec::new();
        loop {
            self.sym("[")?;
            let mut row = vec![self.expr()?];
            while self.eat_sym(",") {
                row.push(self.expr()?);
            }
            self.sym("]")?;
            rows.push(row);
            if self.eat_sym("]") {
                break;
            }
            self.sym(",")?;
        }
        Ok(rows)
    }

    fn cert(&mut self, pos: Pos) -> Result<CertSyn> {
        let id = self.path()?;
        self.kw("from")?;
        let from = self.triple_ref()?;
        self.kw("to")?;
        let to = self.triple_ref()?;
        let mut header = Header::default();
        let mut matrix = None;
        loop {
            if self.header_section(&mut header)? {
                continue;
            }
            if self.is_kw("matrix") {
                self.bump();
                matrix = Some(self.matrix()?);
                continue;
            }
            break;
        }
        let matrix = matrix.ok_or_else(|| self.err("certificate needs a `matrix`"))?;
        Ok(CertSyn { id, from, to, header, matrix, pos })
    }

    fn automorphisms(&mut self, pos: Pos) -> Result<AutSyn> {
        let algebra = self.ident()?;
        self.sym("{")?;
        let mut components = Vec::new();
        while !self.eat_sym("}") {
            self.kw("component")?;
            self.sym("{")?;
            let mut header = Header::default();
            let mut nonzero = Vec::new();
            let mut matrix = None;
            while !self.eat_sym("}") {
                if self.header_section(&mut header)? {
                    continue;
                }
                if self.is_kw("nonzero") {
                    self.bump();
                    self.sym("{")?;
                    while !self.eat_sym("}") {
                        nonzero.push(self.expr()?);
                        self.sym(";")?;
                    }
                    continue;
                }
                if self.is_kw("matrix") {
                    self.bump();
                    matrix = Some(self.matrix()?);
                    continue;
                }
                return Err(self.err("expected `params`, `where`, `nonzero` or `matrix`"));
            }
            let matrix = matrix.ok_or_else(|| self.err("component needs a `matrix`"))?;
            components.push(AutComponentSyn { header, nonzero, matrix });
        }
        Ok(AutSyn { algebra, components, pos })
    }

    pub fn expr(&mut self) -> Result<Expr> {
        let mut e = self.term()?;
        loop {
            let pos = self.pos();
            if self.eat_sym("+") {
                let r = self.term()?;
                e = Expr { kind: ExprKind::Add(Box::new(e), Box::new(r)), pos };
            } else if self.eat_sym("-") {
                let r = self.term()?;
                e = Expr { kind: ExprKind::Sub(Box::new(e), Box::new(r)), pos };
            } else {
                return Ok(e);
            }
        }
    }

    fn term(&mut self) -> Result<Expr> {
        let mut e = self.unary()?;
        loop {
            let pos = self.pos();
            if self.eat_sym("*") {
                let r = self.unary()?;
                e = Expr { kind: ExprKind::Mul(Box::new(e), Box::new(r)), pos };
            } else if self.is_sym("/") {
                self.bump();
                let r = self.unary()?;
                e = Expr { kind: ExprKind::Div(Box::new(e), Box::new(r)), pos };
            } else {
                return Ok(e);
            }
        }
    }

    fn unary(&mut self) -> Result<Expr> {
        let pos = self.pos();
        if self.eat_sym("-") {
            let e = self.unary()?;
            return Ok(Expr { kind: ExprKind::Neg(Box::new(e)), pos });
        }
        if self.eat_sym("+") {
            return self.unary();
        }
        self.power()
    }

    fn power(&mut self) -> Result<Expr> {
        let base = self.atom()?;
        let pos = self.pos();
        if self.eat_sym("^") {
            let neg = self.eat_sym("-");
            let e = self.usize()? as i64;
            let e = if neg { -e } else { e };
            return Ok(Expr { kind: ExprKind::Pow(Box::new(base), e), pos });
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Expr> {
        let pos = self.pos();
        match self.peek().clone() {
            Tok::Int(n) => {
                self.bump();
                Ok(Expr { kind: ExprKind::Int(n), pos })
            }
            Tok::Ident(s) => {
                self.bump();
                if s == "sqrt" && self.is_sym("(") {
                    self.bump();
                    let e = self.expr()?;
                    self.sym(")")?;
                    return Ok(Expr { kind: ExprKind::Sqrt(Box::new(e)), pos });
                }
                Ok(Expr { kind: ExprKind::Ident(s), pos })
            }
            Tok::Sym("(") => {
                self.bump();
                let e = self.expr()?;
                self.sym(")")?;
                Ok(e)
            }
            _ => Err(self.err("expected expression")),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_algebra_item() {
        let src = "algebra C1_p super_dim (2,1)\n params { p: real; }\n brackets { [b1,b2] = b2; [b1,f1] = p*f1; }";
        let items = parse_file(src).unwrap();
        match &items[0] {
            Item::Algebra(a) => {
                assert_eq!(a.name.as_deref(), Some("C1_p"));
                assert_eq!((a.m, a.n), (2, 1));
                assert_eq!(a.brackets.len(), 2);
            }
            _ => panic!(),
        }
    }

    #[test]
    fn parses_cert_with_paths() {
        let src = "cert appendixA/DD42_V from t1(p=0, eps=1) to t1(p = 0, eps = -1) matrix [[1,0],[0,1]] params { eps: sign; }";
        let items = parse_file(src).unwrap();
        match &items[0] {
            Item::Cert(c) => {
                assert_eq!(c.id, "appendixA/DD42_V");
                assert_eq!(c.matrix.len(), 2);
                assert_eq!(c.header.params.len(), 1);
            }
            _ => panic!(),
        }
    }

    #[test]
    fn malformed_file_reports_line_and_column() {
        let src = "algebra X super_dim (1,1)\n brackets { [b1,f1] = ; }";
        match parse_file(src) {
            Err(Error::Parse { line, col, .. }) => assert_eq!((line, col), (2, 23)),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn precedence() {
        let e = parse_expr("-1/2*p^2 + q").unwrap();
        assert!(matches!(e.kind, ExprKind::Add(_, _)));
    }
}
