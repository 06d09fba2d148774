use serde::{Deserialize, Serialize};

/// Byte range `start..end` into the source.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Default, Serialize, Deserialize)]
pub struct Span {
    pub start: usize,
    pub end: usize,
}

impl Span {
    pub fn new(start: usize, end: usize) -> Self {
        Span { start, end }
    }

    pub fn to(self, other: Span) -> Span {
        Span::new(self.start.min(other.start), self.end.max(other.end))
    }
}

#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct Program {
    pub stmts: Vec<Stmt>,
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Ident {
    pub name: String,
    pub span: Span,
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum Stmt {
    Let { name: Ident, expr: Expr, span: Span },
    Query(Query),
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum QueryKind {
    Card,
    Entropy,
    Diversity,
    Dist,
    Relent,
    Check,
}

impl QueryKind {
    pub fn keyword(self) -> &'static str {
        match self {
            QueryKind::Card => "card",
            QueryKind::Entropy => "entropy",
            QueryKind::Diversity => "diversity",
            QueryKind::Dist => "dist",
            QueryKind::Relent => "relent",
            QueryKind::Check => "check",
        }
    }
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Query {
    pub kind: QueryKind,
    /// The identity name of a `check` query.
    pub check: Option<Ident>,
    pub args: Vec<Expr>,
    pub span: Span,
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Expr {
    pub kind: ExprKind,
    pub span: Span,
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum ExprKind {
    Cyclic(u64),
    Sym(u64),
    Dihedral(u64),
    Product(Box<Expr>, Box<Expr>),
    Table(Vec<Vec<u64>>),
    Perms(Vec<Vec<u64>>),
    B(Box<Expr>),
    Pt,
    Empty,
    Set(u64),
    Sum(Box<Expr>, Box<Expr>),
    Times(Box<Expr>, Box<Expr>),
    Fun(Box<Expr>, Box<Expr>),
    Sigma(Box<Expr>),
    Conj(Box<Expr>),
    Const(Box<Expr>, Box<Expr>),
    Family(Box<Expr>, Vec<FiberSpec>),
    Var(String),
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct FiberSpec {
    pub source: FiberSource,
    pub actions: Vec<Action>,
    pub span: Span,
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum FiberSource {
    Expr(Box<Expr>),
    /// A string literal: inline dump JSON when it starts with `{`, else a
    /// path relative to the source file.
    Json(String),
}

/// Images of one generator: an object permutation and optionally a
/// morphism permutation.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Action {
    pub objects: Vec<u64>,
    pub morphisms: Option<Vec<u64>>,
    pub span: Span,
}

/// Names that cannot be bound by `let`.
pub const RESERVED: &[&str] = &[
    "let", "cyclic", "sym", "dihedral", "product", "table", "perms", "B", "pt", "empty", "set", "Fun", "Sigma",
    "conj", "const", "family", "fiber", "act", "card", "entropy", "diversity", "dist", "relent", "check",
];

impl Program {
    /// The same program with every span zeroed, for structural comparison.
    pub fn without_spans(&self) -> Program {
        Program {
            stmts: self.stmts.iter().map(Stmt::without_spans).collect(),
        }
    }
}

impl Ident {
    fn without_spans(&self) -> Ident {
        Ident {
            name: self.name.clone(),
            span: Span::default(),
        }
    }
}

impl Stmt {
    fn without_spans(&self) -> Stmt {
        match self {
            Stmt::Let { name, expr, .. } => Stmt::Let {
                name: name.without_spans(),
                expr: expr.without_spans(),
                span: Span::default(),
            },
            Stmt::Query(q) => Stmt::Query(q.without_spans()),
        }
    }
}

impl Query {
    pub fn without_spans(&self) -> Query {
        Query {
            kind: self.kind,
            check: self.check.as_ref().map(Ident::without_spans),
            args: self.args.iter().map(Expr::without_spans).collect(),
            span: Span::default(),
        }
    }
}

impl Expr {
    pub fn new(kind: ExprKind, span: Span) -> Self {
        Expr { kind, span }
    }

    pub fn without_spans(&self) -> Expr {
        let b = |e: &Expr| Box::new(e.without_spans());
        use ExprKind::*;
        let kind = match &self.kind {
            Product(x, y) => Product(b(x), b(y)),
            B(x) => B(b(x)),
            Sum(x, y) => Sum(b(x), b(y)),
            Times(x, y) => Times(b(x), b(y)),
            Fun(x, y) => Fun(b(x), b(y)),
            Sigma(x) => Sigma(b(x)),
            Conj(x) => Conj(b(x)),
            Const(x, y) => Const(b(x), b(y)),
            Family(x, specs) => Family(b(x), specs.iter().map(FiberSpec::without_spans).collect()),
            other => other.clone(),
        };
        Expr {
            kind,
            span: Span::default(),
        }
    }

    /// Replaces variables by the expressions they are bound to.
    pub fn substitute(&self, lookup: &impl Fn(&str) -> Option<Expr>) -> Expr {
        let s = |e: &Expr| Box::new(e.substitute(lookup));
        use ExprKind::*;
        let kind = match &self.kind {
            Var(name) => match lookup(name) {
                Some(e) => return e,
                None => Var(name.clone()),
            },
            Product(x, y) => Product(s(x), s(y)),
            B(x) => B(s(x)),
            Sum(x, y) => Sum(s(x), s(y)),
            Times(x, y) => Times(s(x), s(y)),
            Fun(x, y) => Fun(s(x), s(y)),
            Sigma(x) => Sigma(s(x)),
            Conj(x) => Conj(s(x)),
            Const(x, y) => Const(s(x), s(y)),
            Family(x, specs) => Family(
                s(x),
                specs
                    .iter()
                    .map(|f| FiberSpec {
                        source: match &f.source {
                            FiberSource::Expr(e) => FiberSource::Expr(s(e)),
                            json => json.clone(),
                        },
                        actions: f.actions.clone(),
                        span: f.span,
                    })
                    .collect(),
            ),
            other => other.clone(),
        };
        Expr { kind, span: self.span }
    }
}

impl FiberSpec {
    fn without_spans(&self) -> FiberSpec {
        FiberSpec {
            source: match &self.source {
                FiberSource::Expr(e) => FiberSource::Expr(Box::new(e.without_spans())),
                json => json.clone(),
            },
            actions: self
                .actions
                .iter()
                .map(|a| Action {
                    objects: a.objects.clone(),
                    morphisms: a.morphisms.clone(),
                    span: Span::default(),
                })
                .collect(),
            span: Span::default(),
        }
    }
}
