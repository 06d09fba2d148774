use std::collections::HashMap;

use super::ast::*;
use super::lexer::{tokenize, Token, TokenKind};
use super::Diagnostic;
use crate::checker::IdentityId;

/// Nesting beyond this is rejected rather than risking the stack.
pub const MAX_DEPTH: usize = 128;

const STATEMENT_STARTS: &[&str] = &["let", "card", "entropy", "diversity", "dist", "relent", "check"];
const STATEMENT_EXPECTED: &[&str] = &["`let`", "`card`", "`entropy`", "`diversity`", "`dist`", "`relent`", "`check`"];

pub fn parse(src: &str) -> Result<Program, Diagnostic> {
    let tokens = tokenize(src)?;
    let mut p = Parser {
        src,
        tokens,
        pos: 0,
        depth: 0,
        bound: HashMap::new(),
    };
    let mut stmts = Vec::new();
    while p.peek().kind != TokenKind::Eof {
        stmts.push(p.stmt()?);
    }
    Ok(Program { stmts })
}

struct Parser<'s> {
    src: &'s str,
    tokens: Vec<Token>,
    pos: usize,
    depth: usize,
    bound: HashMap<String, Span>,
}

type PResult<T> = Result<T, Diagnostic>;

impl<'s> Parser<'s> {
    fn peek(&self) -> &Token {
        &self.tokens[self.pos]
    }

    fn bump(&mut self) -> Token {
        let t = self.tokens[self.pos].clone();
        if t.kind != TokenKind::Eof {
            self.pos += 1;
        }
        t
    }

    fn error_here(&self, expected: &[&str]) -> Diagnostic {
        let t = self.peek();
        let what = if expected.len() == 1 {
            expected[0].to_string()
        } else {
            format!("one of {}", expected.join(", "))
        };
        Diagnostic::new(self.src, t.span, format!("expected {what}, found {}", t.kind))
            .with_expected(expected.iter().map(|s| s.to_string()).collect())
    }

    fn expect(&mut self, kind: TokenKind) -> PResult<Token> {
        if self.peek().kind == kind {
            Ok(self.bump())
        } else {
            Err(self.error_here(&[&kind.to_string()]))
        }
    }

    fn ident_text(&self) -> Option<&str> {
        match &self.peek().kind {
            TokenKind::Ident(s) => Some(s),
            _ => None,
        }
    }

    fn stmt(&mut self) -> PResult<Stmt> {
        match self.ident_text() {
            Some("let") => self.let_stmt(),
            Some(kw) if STATEMENT_STARTS.contains(&kw) => {
                let q = self.query()?;
                self.expect(TokenKind::Semi)?;
                Ok(Stmt::Query(q))
            }
            _ => Err(self
                .error_here(STATEMENT_EXPECTED)
            .with_note("a statement is a `let` binding or a query, each ended by `;`")),
        }
    }

    fn let_stmt(&mut self) -> PResult<Stmt> {
        let start = self.bump().span;
        let t = self.bump();
        let name = match t.kind {
            TokenKind::Ident(name) => name,
            other => {
                return Err(Diagnostic::new(self.src, t.span, format!("expected a name to bind, found {other}"))
                    .with_expected(vec!["identifier".into()]))
            }
        };
        if RESERVED.contains(&name.as_str()) {
            return Err(Diagnostic::new(self.src, t.span, format!("`{name}` is reserved and cannot be bound")));
        }
        if let Some(&prev) = self.bound.get(&name) {
            let (line, column) = super::line_col(self.src, prev.start);
            return Err(Diagnostic::new(self.src, t.span, format!("`{name}` is already bound"))
                .with_note(format!("first bound at {line}:{column}; bindings cannot be redefined")));
        }
        self.expect(TokenKind::Eq)?;
        let expr = self.expr()?;
        let end = self.expect(TokenKind::Semi)?.span;
        self.bound.insert(name.clone(), t.span);
        Ok(Stmt::Let {
            name: Ident { name, span: t.span },
            expr,
            span: start.to(end),
        })
    }

    fn query(&mut self) -> PResult<Query> {
        let kw = self.bump();
        let kind = match &kw.kind {
            TokenKind::Ident(s) => match s.as_str() {
                "card" => QueryKind::Card,
                "entropy" => QueryKind::Entropy,
                "diversity" => QueryKind::Diversity,
                "dist" => QueryKind::Dist,
                "relent" => QueryKind::Relent,
                _ => QueryKind::Check,
            },
            _ => unreachable!("queries start with a keyword"),
        };
        self.expect(TokenKind::LParen)?;
        let mut check = None;
        let mut args = Vec::new();
        match kind {
            QueryKind::Check => {
                let t = self.bump();
                let TokenKind::Ident(name) = t.kind else {
                    return Err(Diagnostic::new(self.src, t.span, format!("expected an identity name, found {}", t.kind))
                        .with_expected(vec!["identity name".into()]));
                };
                if name.parse::<IdentityId>().is_err() {
                    let names: Vec<&str> = IdentityId::ALL.iter().map(|i| i.name()).collect();
                    let mut d = Diagnostic::new(self.src, t.span, format!("unknown identity `{name}`"));
                    d = match suggest(&name, names.iter().copied()) {
                        Some(s) => d.with_note(format!("did you mean `{s}`?")),
                        None => d.with_note(format!("known identities: {}", names.join(", "))),
                    };
                    return Err(d);
                }
                check = Some(Ident { name, span: t.span });
                while self.peek().kind == TokenKind::Comma {
                    self.bump();
                    args.push(self.expr()?);
                }
            }
            QueryKind::Relent => {
                args.push(self.expr()?);
                self.expect(TokenKind::Comma)?;
                args.push(self.expr()?);
            }
            _ => args.push(self.expr()?),
        }
        let end = self.expect(TokenKind::RParen)?.span;
        Ok(Query {
            kind,
            check,
            args,
            span: kw.span.to(end),
        })
    }

    fn expr(&mut self) -> PResult<Expr> {
        self.depth += 1;
        if self.depth > MAX_DEPTH {
            let span = self.peek().span;
            return Err(Diagnostic::new(self.src, span, format!("expression nested deeper than {MAX_DEPTH} levels")));
        }
        let mut lhs = self.term()?;
        while self.peek().kind == TokenKind::Plus {
            self.bump();
            let rhs = self.term()?;
            let span = lhs.span.to(rhs.span);
            lhs = Expr::new(ExprKind::Sum(Box::new(lhs), Box::new(rhs)), span);
        }
        self.depth -= 1;
        Ok(lhs)
    }

    fn term(&mut self) -> PResult<Expr> {
        let mut lhs = self.atom()?;
        while self.peek().kind == TokenKind::Star {
            self.bump();
            let rhs = self.atom()?;
            let span = lhs.span.to(rhs.span);
            lhs = Expr::new(ExprKind::Times(Box::new(lhs), Box::new(rhs)), span);
        }
        Ok(lhs)
    }

    fn int_arg(&mut self) -> PResult<u64> {
        let t = self.bump();
        match t.kind {
            TokenKind::Int(n) => Ok(n),
            other => Err(Diagnostic::new(self.src, t.span, format!("expected integer, found {other}"))
                .with_expected(vec!["integer".into()])),
        }
    }

    fn int_list(&mut self) -> PResult<(Vec<u64>, Span)> {
        let start = self.expect(TokenKind::LBracket)?.span;
        let mut out = Vec::new();
        if self.peek().kind != TokenKind::RBracket {
            out.push(self.int_arg()?);
            while self.peek().kind == TokenKind::Comma {
                self.bump();
                out.push(self.int_arg()?);
            }
        }
        let end = self.expect(TokenKind::RBracket)?.span;
        Ok((out, start.to(end)))
    }

    fn list_args(&mut self) -> PResult<Vec<Vec<u64>>> {
        let mut rows = vec![self.int_list()?.0];
        while self.peek().kind == TokenKind::Comma {
            self.bump();
            rows.push(self.int_list()?.0);
        }
        Ok(rows)
    }

    fn atom(&mut self) -> PResult<Expr> {
        let t = self.peek().clone();
        let name = match &t.kind {
            TokenKind::LParen => {
                self.bump();
                let inner = self.expr()?;
                self.expect(TokenKind::RParen)?;
                return Ok(inner);
            }
            TokenKind::Ident(name) => name.clone(),
            _ => return Err(self.error_here(&["expression"])),
        };
        self.bump();
        use ExprKind::*;
        let kind = match name.as_str() {
            "pt" => return Ok(Expr::new(Pt, t.span)),
            "empty" => return Ok(Expr::new(Empty, t.span)),
            "cyclic" | "sym" | "dihedral" | "set" => {
                self.expect(TokenKind::LParen)?;
                let n = self.int_arg()?;
                match name.as_str() {
                    "cyclic" => Cyclic(n),
                    "sym" => Sym(n),
                    "dihedral" => Dihedral(n),
                    _ => Set(n),
                }
            }
            "product" | "Fun" | "const" => {
                self.expect(TokenKind::LParen)?;
                let a = Box::new(self.expr()?);
                self.expect(TokenKind::Comma)?;
                let b = Box::new(self.expr()?);
                match name.as_str() {
                    "product" => Product(a, b),
                    "Fun" => Fun(a, b),
                    _ => Const(a, b),
                }
            }
            "table" | "perms" => {
                self.expect(TokenKind::LParen)?;
                let rows = self.list_args()?;
                if name == "table" {
                    Table(rows)
                } else {
                    Perms(rows)
                }
            }
            "B" | "Sigma" | "conj" => {
                self.expect(TokenKind::LParen)?;
                let a = Box::new(self.expr()?);
                match name.as_str() {
                    "B" => B(a),
                    "Sigma" => Sigma(a),
                    _ => Conj(a),
                }
            }
            "family" => {
                self.expect(TokenKind::LParen)?;
                let base = Box::new(self.expr()?);
                let mut specs = Vec::new();
                while self.peek().kind == TokenKind::Comma {
                    self.bump();
                    specs.push(self.fiber_spec()?);
                }
                Family(base, specs)
            }
            "fiber" | "act" => {
                return Err(Diagnostic::new(self.src, t.span, format!("`{name}(...)` is only allowed inside `family(...)`")))
            }
            kw if RESERVED.contains(&kw) => {
                return Err(Diagnostic::new(self.src, t.span, format!("`{kw}` is a statement keyword, not an expression"))
                    .with_expected(vec!["expression".into()]))
            }
            _ => {
                if !self.bound.contains_key(&name) {
                    return Err(self.undefined(&name, t.span));
                }
                return Ok(Expr::new(Var(name), t.span));
            }
        };
        let end = self.expect(TokenKind::RParen)?.span;
        Ok(Expr::new(kind, t.span.to(end)))
    }

    fn fiber_spec(&mut self) -> PResult<FiberSpec> {
        let t = self.bump();
        if t.kind != TokenKind::Ident("fiber".into()) {
            return Err(Diagnostic::new(self.src, t.span, format!("expected `fiber`, found {}", t.kind))
                .with_expected(vec!["`fiber`".into()]));
        }
        self.expect(TokenKind::LParen)?;
        let source = match &self.peek().kind {
            TokenKind::Str(s) => {
                let s = s.clone();
                self.bump();
                FiberSource::Json(s)
            }
            _ => FiberSource::Expr(Box::new(self.expr()?)),
        };
        let mut actions = Vec::new();
        while self.peek().kind == TokenKind::Comma {
            self.bump();
            let a = self.bump();
            if a.kind != TokenKind::Ident("act".into()) {
                return Err(Diagnostic::new(self.src, a.span, format!("expected `act`, found {}", a.kind))
                    .with_expected(vec!["`act`".into()]));
            }
            self.expect(TokenKind::LParen)?;
            let (objects, _) = self.int_list()?;
            let morphisms = if self.peek().kind == TokenKind::Comma {
                self.bump();
                Some(self.int_list()?.0)
            } else {
                None
            };
            let end = self.expect(TokenKind::RParen)?.span;
            actions.push(Action {
                objects,
                morphisms,
                span: a.span.to(end),
            });
        }
        let end = self.expect(TokenKind::RParen)?.span;
        Ok(FiberSpec {
            source,
            actions,
            span: t.span.to(end),
        })
    }

    fn undefined(&self, name: &str, span: Span) -> Diagnostic {
        let d = Diagnostic::new(self.src, span, format!("undefined identifier `{name}`"));
        match suggest(name, self.bound.keys().map(String::as_str)) {
            Some(s) => {
                let (line, column) = super::line_col(self.src, self.bound[s].start);
                d.with_note(format!("did you mean `{s}` (bound at {line}:{column})?"))
            }
            None if self.bound.is_empty() => d.with_note("nothing is bound yet; use `let NAME = ...;` first"),
            None => {
                let mut names: Vec<&str> = self.bound.keys().map(String::as_str).collect();
                names.sort_unstable();
                d.with_note(format!("bound names: {}", names.join(", ")))
            }
        }
    }
}

fn suggest<'a>(name: &str, candidates: impl Iterator<Item = &'a str>) -> Option<&'a str> {
    candidates
        .map(|c| (strsim::jaro_winkler(&name.to_lowercase(), &c.to_lowercase()), c))
        .filter(|(score, _)| *score >= 0.8)
        .max_by(|a, b| a.0.total_cmp(&b.0).then_with(|| b.1.cmp(a.1)))
        .map(|(_, c)| c)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_bindings_and_queries() {
        let p = parse("let X = B(sym(3)); card(X);").unwrap();
        assert_eq!(p.stmts.len(), 2);
        assert!(matches!(&p.stmts[1], Stmt::Query(q) if q.kind == QueryKind::Card));
        let p = parse("let P = conj(sym(3)); entropy(Sigma(P));").unwrap();
        assert_eq!(p.stmts.len(), 2);
    }

    #[test]
    fn precedence() {
        let p = parse("card(pt + pt * B(cyclic(2)) + empty);").unwrap();
        let Stmt::Query(q) = &p.stmts[0] else { panic!() };
        let ExprKind::Sum(l, r) = &q.args[0].kind else { panic!() };
        assert!(matches!(r.kind, ExprKind::Empty));
        let ExprKind::Sum(_, m) = &l.kind else { panic!() };
        assert!(matches!(m.kind, ExprKind::Times(_, _)));
    }

    #[test]
    fn diagnostics() {
        let e = parse("card(").unwrap_err();
        assert_eq!((e.line, e.column), (1, 6));
        assert!(e.message.contains("expected expression"));
        let e = parse("let Base1 = pt;\ncard(Base2);").unwrap_err();
        assert_eq!((e.line, e.column), (2, 6));
        assert!(e.note.as_deref().unwrap().contains("`Base1` (bound at 1:5)"));
        assert!(parse("let X = pt; let X = pt;").is_err());
        assert!(parse("let pt = pt;").is_err());
        let e = parse("check(CARD_FNU, pt, pt);").unwrap_err();
        assert!(e.note.as_deref().unwrap().contains("CARD_FUN"));
        assert!(parse("card(fiber(pt));").is_err());
        let e = parse("card(pt)").unwrap_err();
        assert!(e.message.contains("`;`"));
    }

    #[test]
    fn families_and_lists() {
        let p = parse(r#"let F = family(B(cyclic(2)), fiber(set(2), act([1,0])), fiber("{}")); card(Sigma(F));"#).unwrap();
        let Stmt::Let { expr, .. } = &p.stmts[0] else { panic!() };
        let ExprKind::Family(_, specs) = &expr.kind else { panic!() };
        assert_eq!(specs.len(), 2);
        assert_eq!(specs[0].actions[0].objects, vec![1, 0]);
        assert!(matches!(specs[1].source, FiberSource::Json(_)));
        assert!(parse("card(B(table([0,1],[1,0])));").is_ok());
        assert!(parse("card(B(perms([1,0,2],[])));").is_ok());
    }

    #[test]
    fn depth_limit() {
        let deep = format!("card({}pt{});", "(".repeat(500), ")".repeat(500));
        let e = parse(&deep).unwrap_err();
        assert!(e.message.contains("nested"));
        let ok = format!("card({}pt{});", "(".repeat(100), ")".repeat(100));
        assert!(parse(&ok).is_ok());
    }
}
