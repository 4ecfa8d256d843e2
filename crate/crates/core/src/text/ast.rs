use crate::scalar::Relation;
use num_bigint::BigInt;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub struct Pos {
    pub line: usize,
    pub col: usize,
}

#[derive(Clone, Debug, PartialEq)]
pub enum ExprKind {
    Int(BigInt),
    Ident(String),
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, i64),
    Sqrt(Box<Expr>),
}

#[derive(Clone, Debug, PartialEq)]
pub struct Expr {
    pub kind: ExprKind,
    pub pos: Pos,
}

#[derive(Clone, Debug, PartialEq)]
pub enum DomainSyn {
    Real,
    Sign,
    Set(Vec<Expr>),
}

#[derive(Clone, Debug, PartialEq)]
pub enum Decl {
    Param { name: String, domain: DomainSyn, pos: Pos },
    Radical { name: String, radicand: Expr, pos: Pos },
}

#[derive(Clone, Debug, PartialEq)]
pub struct ConstraintSyn {
    pub lhs: Expr,
    pub rel: Relation,
    pub rhs: Expr,
}

#[derive(Clone, Debug, PartialEq, Default)]
pub struct Header {
    pub params: Vec<Decl>,
    pub constraints: Vec<ConstraintSyn>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct BracketSyn {
    pub left: String,
    pub right: String,
    pub rhs: Expr,
    pub pos: Pos,
}

#[derive(Clone, Debug, PartialEq)]
pub struct AlgebraSyn {
    pub name: Option<String>,
    pub m: usize,
    pub n: usize,
    pub header: Header,
    pub brackets: Vec<BracketSyn>,
    pub pos: Pos,
}

#[derive(Clone, Debug, PartialEq)]
pub enum AlgRefSyn {
    Named { name: String, args: Vec<(String, Expr)>, pos: Pos },
    Inline(Box<AlgebraSyn>),
}

#[derive(Clone, Debug, PartialEq)]
pub enum TripleRefSyn {
    Named { id: String, args: Vec<(String, Expr)>, pos: Pos },
    Inline { left: AlgRefSyn, right: AlgRefSyn },
}

#[derive(Clone, Debug, PartialEq)]
pub struct TripleSyn {
    pub id: String,
    pub header: Header,
    pub left: AlgRefSyn,
    pub right: AlgRefSyn,
    pub pos: Pos,
}

#[derive(Clone, Debug, PartialEq)]
pub struct CertSyn {
    pub id: String,
    pub from: TripleRefSyn,
    pub to: TripleRefSyn,
    pub header: Header,
    pub matrix: Vec<Vec<Expr>>,
    pub pos: Pos,
}

#[derive(Clone, Debug, PartialEq)]
pub struct AutComponentSyn {
    pub header: Header,
    pub nonzero: Vec<Expr>,
    pub matrix: Vec<Vec<Expr>>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct AutSyn {
    pub algebra: String,
    pub components: Vec<AutComponentSyn>,
    pub pos: Pos,
}

#[derive(Clone, Debug, PartialEq)]
pub enum Item {
    Algebra(AlgebraSyn),
    Triple(TripleSyn),
    Cert(CertSyn),
    Automorphisms(AutSyn),
}
