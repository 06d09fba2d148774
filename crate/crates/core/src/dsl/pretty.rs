use std::fmt::Write;

use super::ast::*;

/// Canonical source text; parsing it gives back the same program up to spans.
pub fn pretty(program: &Program) -> String {
    let mut out = String::new();
    for stmt in &program.stmts {
        match stmt {
            Stmt::Let { name, expr, .. } => {
                let _ = writeln!(out, "let {} = {};", name.name, expr_to_string(expr));
            }
            Stmt::Query(q) => {
                let _ = writeln!(out, "{};", query_to_string(q));
            }
        }
    }
    out
}

pub fn query_to_string(q: &Query) -> String {
    let mut parts: Vec<String> = q.check.iter().map(|c| c.name.clone()).collect();
    parts.extend(q.args.iter().map(expr_to_string));
    format!("{}({})", q.kind.keyword(), parts.join(", "))
}

pub fn expr_to_string(e: &Expr) -> String {
    let mut out = String::new();
    write_expr(&mut out, e, 0);
    out
}

fn precedence(e: &Expr) -> u8 {
    match e.kind {
        ExprKind::Sum(..) => 1,
        ExprKind::Times(..) => 2,
        _ => 3,
    }
}

fn write_expr(out: &mut String, e: &Expr, min: u8) {
    let parens = precedence(e) < min;
    if parens {
        out.push('(');
    }
    use ExprKind::*;
    match &e.kind {
        Cyclic(n) => write_call(out, "cyclic", n),
        Sym(n) => write_call(out, "sym", n),
        Dihedral(n) => write_call(out, "dihedral", n),
        Set(n) => write_call(out, "set", n),
        Pt => out.push_str("pt"),
        Empty => out.push_str("empty"),
        Var(name) => out.push_str(name),
        Product(a, b) => write_binary(out, "product", a, b),
        Fun(a, b) => write_binary(out, "Fun", a, b),
        Const(a, b) => write_binary(out, "const", a, b),
        B(a) => write_unary(out, "B", a),
        Sigma(a) => write_unary(out, "Sigma", a),
        Conj(a) => write_unary(out, "conj", a),
        Table(rows) => write_lists(out, "table", rows),
        Perms(rows) => write_lists(out, "perms", rows),
        Sum(a, b) => {
            write_expr(out, a, 1);
            out.push_str(" + ");
            write_expr(out, b, 2);
        }
        Times(a, b) => {
            write_expr(out, a, 2);
            out.push_str(" * ");
            write_expr(out, b, 3);
        }
        Family(base, specs) => {
            out.push_str("family(");
            write_expr(out, base, 0);
            for s in specs {
                out.push_str(", fiber(");
                match &s.source {
                    FiberSource::Expr(e) => write_expr(out, e, 0),
                    FiberSource::Json(text) => write_string(out, text),
                }
                for a in &s.actions {
                    out.push_str(", act(");
                    write_list(out, &a.objects);
                    if let Some(m) = &a.morphisms {
                        out.push_str(", ");
                        write_list(out, m);
                    }
                    out.push(')');
                }
                out.push(')');
            }
            out.push(')');
        }
    }
    if parens {
        out.push(')');
    }
}

fn write_call(out: &mut String, name: &str, n: &u64) {
    let _ = write!(out, "{name}({n})");
}

fn write_unary(out: &mut String, name: &str, a: &Expr) {
    out.push_str(name);
    out.push('(');
    write_expr(out, a, 0);
    out.push(')');
}

fn write_binary(out: &mut String, name: &str, a: &Expr, b: &Expr) {
    out.push_str(name);
    out.push('(');
    write_expr(out, a, 0);
    out.push_str(", ");
    write_expr(out, b, 0);
    out.push(')');
}

fn write_list(out: &mut String, xs: &[u64]) {
    let items: Vec<String> = xs.iter().map(u64::to_string).collect();
    let _ = write!(out, "[{}]", items.join(", "));
}

fn write_lists(out: &mut String, name: &str, rows: &[Vec<u64>]) {
    out.push_str(name);
    out.push('(');
    for (i, r) in rows.iter().enumerate() {
        if i > 0 {
            out.push_str(", ");
        }
        write_list(out, r);
    }
    out.push(')');
}

fn write_string(out: &mut String, s: &str) {
    out.push('"');
    for c in s.chars() {
        match c {
            '"' => out.push_str("\\\""),
            '\\' => out.push_str("\\\\"),
            '\n' => out.push_str("\\n"),
            '\t' => out.push_str("\\t"),
            c => out.push(c),
        }
    }
    out.push('"');
}

#[cfg(test)]
mod tests {
    use super::super::parse;
    use super::*;

    fn round_trip(src: &str) {
        let a = parse(src).unwrap();
        let text = pretty(&a);
        let b = parse(&text).unwrap_or_else(|e| panic!("{text}: {e}"));
        assert_eq!(a.without_spans(), b.without_spans(), "{text}");
        assert_eq!(pretty(&b), text);
    }

    #[test]
    fn minimal_parentheses() {
        let p = parse("card((pt + pt) * (pt * pt) + (pt + pt));").unwrap();
        assert_eq!(pretty(&p), "card((pt + pt) * (pt * pt) + (pt + pt));\n");
    }

    #[test]
    fn round_trips() {
        round_trip("let X = B(sym(3)); card(X);");
        round_trip(r#"let F = family(B(cyclic(2)), fiber(set(2), act([1, 0], [1, 0])), fiber("a\"b\\")); card(Sigma(F));"#);
        round_trip("let G = product(cyclic(2), table([0])); check(CARD_FUN, B(G), Fun(pt, set(3) * B(perms([1, 0]))));");
        round_trip("relent(Sigma(conj(sym(3))), B(cyclic(2)) + B(cyclic(2))); dist(const(set(2), empty));");
    }
}
