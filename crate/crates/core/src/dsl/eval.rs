use std::collections::HashMap;
use std::fmt;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use super::ast::*;
use super::pretty::query_to_string;
use super::{line_col, parse, Diagnostic};
use crate::arith::{ExtendedLog, ExtendedValue, Rational};
use crate::budget::Budget;
use crate::checker::{self, CheckReport, IdentityId};
use crate::error::Error;
use crate::group::FiniteGroup;
use crate::groupoid::{
    functor_groupoid, grothendieck_sum, DependentGroupoid, Fiber, FullGroupoid, Functor, SkeletalGroupoid,
};
use crate::info::{
    cross_diversity, cross_entropy, relative_diversity, relative_entropy, Distribution, EntropyReport,
    ProbabilityGroupoid, ProductWithApprox, RandomVariable,
};

/// The value of an expression.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum Value {
    Group(FiniteGroup),
    Groupoid(SkeletalGroupoid),
    Family(DependentGroupoid),
}

impl Value {
    pub fn kind_name(&self) -> &'static str {
        match self {
            Value::Group(_) => "group",
            Value::Groupoid(_) => "groupoid",
            Value::Family(_) => "family",
        }
    }
}

#[derive(Clone, PartialEq, Serialize, Deserialize, Debug)]
pub struct RelativeReport {
    pub cross_entropy: ExtendedLog,
    pub cross_diversity: ExtendedValue,
    pub relative_entropy: ExtendedLog,
    pub relative_diversity: ExtendedValue,
    pub approx: f64,
}

#[derive(Clone, PartialEq, Serialize, Deserialize, Debug)]
#[serde(tag = "kind", content = "value", rename_all = "snake_case")]
pub enum Answer {
    Cardinality(Rational),
    Entropy(EntropyReport),
    Diversity(ProductWithApprox),
    Distribution(Distribution),
    Relative(RelativeReport),
    Check(CheckReport),
}

impl fmt::Display for Answer {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Answer::Cardinality(q) => write!(f, "{q}"),
            Answer::Entropy(r) => write!(
                f,
                "H = {} ≈ {:.10} bits; 2^H = {} ≈ {:.10}",
                r.entropy.terms, r.entropy.approx, r.diversity.factors, r.diversity.approx
            ),
            Answer::Diversity(d) => write!(f, "{} ≈ {:.10}", d.factors, d.approx),
            Answer::Distribution(d) => write!(f, "{d}"),
            Answer::Relative(r) => write!(
                f,
                "D = {} ≈ {:.10} bits; 2^D = {}; H(p,q) = {}",
                r.relative_entropy, r.approx, r.relative_diversity, r.cross_entropy
            ),
            Answer::Check(r) => {
                let side = |v: &Option<checker::ExactValue>| v.as_ref().map_or("-".to_string(), |v| v.to_string());
                write!(f, "{} {}: lhs = {}, rhs = {}", r.id, r.verdict, side(&r.lhs), side(&r.rhs))
            }
        }
    }
}

#[derive(Clone, PartialEq, Serialize, Deserialize, Debug)]
pub struct QueryResult {
    /// Canonical text of the query as written.
    pub query: String,
    pub line: usize,
    pub answer: Answer,
}

/// An evaluation failure, located at the offending node.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct EvalError {
    pub message: String,
    pub span: Span,
    pub line: usize,
    pub column: usize,
    pub resource: bool,
}

impl fmt::Display for EvalError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}: {}", self.line, self.column, self.message)
    }
}

impl std::error::Error for EvalError {}

/// Evaluates statements in order, keeping `let` bindings between calls.
pub struct Evaluator {
    budget: Budget,
    base_dir: PathBuf,
    env: HashMap<String, (Value, Expr)>,
}

/// Parses and evaluates `src`. Parse errors come back as the outer `Err`.
pub fn evaluate(src: &str, budget: &Budget, base_dir: &Path) -> Result<Result<Vec<QueryResult>, EvalError>, Diagnostic> {
    let program = parse(src)?;
    Ok(Evaluator::new(*budget, base_dir).run(&program, src))
}

impl Evaluator {
    pub fn new(budget: Budget, base_dir: &Path) -> Self {
        Evaluator {
            budget,
            base_dir: base_dir.to_path_buf(),
            env: HashMap::new(),
        }
    }

    /// The value bound to `name` by an earlier `let`.
    pub fn value(&self, name: &str) -> Option<&Value> {
        self.env.get(name).map(|(v, _)| v)
    }

    pub fn run(&mut self, program: &Program, src: &str) -> Result<Vec<QueryResult>, EvalError> {
        let mut out = Vec::new();
        for stmt in &program.stmts {
            match stmt {
                Stmt::Let { name, expr, .. } => {
                    let v = self.eval(expr, src)?;
                    let inlined = self.inline(expr);
                    self.env.insert(name.name.clone(), (v, inlined));
                }
                Stmt::Query(q) => {
                    let answer = self.query(q, src)?;
                    out.push(QueryResult {
                        query: query_to_string(q),
                        line: line_col(src, q.span.start).0,
                        answer,
                    });
                }
            }
        }
        Ok(out)
    }

    fn inline(&self, e: &Expr) -> Expr {
        e.substitute(&|name| self.env.get(name).map(|(_, e)| e.clone()))
    }

    fn error(&self, src: &str, span: Span, message: impl Into<String>) -> EvalError {
        let (line, column) = line_col(src, span.start);
        EvalError {
            message: message.into(),
            span,
            line,
            column,
            resource: false,
        }
    }

    fn lift(&self, src: &str, span: Span, e: Error) -> EvalError {
        let mut err = self.error(src, span, e.to_string());
        err.resource = e.is_resource();
        err
    }

    fn query(&mut self, q: &Query, src: &str) -> Result<Answer, EvalError> {
        let mut args = Vec::with_capacity(q.args.len());
        for a in &q.args {
            args.push(self.eval(a, src)?);
        }
        let lift = |e: Error| self.lift(src, q.span, e);
        Ok(match q.kind {
            QueryKind::Card => match &args[0] {
                Value::Groupoid(x) => Answer::Cardinality(x.cardinality()),
                Value::Family(p) => Answer::Cardinality(grothendieck_sum(p, &self.budget).map_err(lift)?.cardinality()),
                Value::Group(_) => {
                    return Err(self.error(src, q.args[0].span, "card expects a groupoid or family, got a group; use B(...)"))
                }
            },
            QueryKind::Entropy | QueryKind::Diversity | QueryKind::Dist => {
                let (p, provenance) = self.distribution(&args[0], q.args[0].span, src)?;
                match q.kind {
                    QueryKind::Entropy => Answer::Entropy(EntropyReport::new(&p, provenance)),
                    QueryKind::Diversity => Answer::Diversity(EntropyReport::new(&p, provenance).diversity),
                    _ => Answer::Distribution(p),
                }
            }
            QueryKind::Relent => {
                let (p, _) = self.distribution(&args[0], q.args[0].span, src)?;
                let (qd, _) = self.distribution(&args[1], q.args[1].span, src)?;
                let d = relative_entropy(&p, &qd).map_err(lift)?;
                Answer::Relative(RelativeReport {
                    cross_entropy: cross_entropy(&p, &qd).map_err(lift)?,
                    cross_diversity: cross_diversity(&p, &qd).map_err(lift)?,
                    relative_diversity: relative_diversity(&p, &qd).map_err(lift)?,
                    approx: d.approx(),
                    relative_entropy: d,
                })
            }
            QueryKind::Check => {
                let name = q.check.as_ref().expect("check queries carry a name");
                let id: IdentityId = name.name.parse().map_err(|e: String| self.error(src, name.span, e))?;
                let inlined = Query {
                    args: q.args.iter().map(|a| self.inline(a)).collect(),
                    ..q.clone()
                };
                let text = format!("{};", query_to_string(&inlined));
                let report = checker::check(id, &args, text, &self.budget)
                    .map_err(|e| self.error(src, q.span, e.to_string()))?;
                Answer::Check(report)
            }
        })
    }

    fn distribution(&self, v: &Value, span: Span, src: &str) -> Result<(Distribution, String), EvalError> {
        match v {
            Value::Groupoid(x) => {
                let p = ProbabilityGroupoid::new(x.clone()).map_err(|e| self.lift(src, span, e))?;
                Ok((p.probabilities(), "p_x = 1/|x = x| over the components of a probability groupoid".into()))
            }
            Value::Family(f) => {
                let r = RandomVariable::new(f.clone(), &self.budget).map_err(|e| self.lift(src, span, e))?;
                Ok((r.distribution(), "p_x = |P_x|/|x = x| over the base of a random variable".into()))
            }
            Value::Group(_) => Err(self.error(src, span, "expected a probability groupoid or random variable, got a group")),
        }
    }

    fn usize_arg(&self, n: u64, span: Span, src: &str) -> Result<usize, EvalError> {
        usize::try_from(n).map_err(|_| self.error(src, span, format!("{n} is too large")))
    }

    fn group(&self, e: &Expr, src: &str) -> Result<FiniteGroup, EvalError> {
        match self.eval(e, src)? {
            Value::Group(g) => Ok(g),
            other => Err(self.error(src, e.span, format!("expected a group, got a {}", other.kind_name()))),
        }
    }

    fn groupoid(&self, e: &Expr, src: &str) -> Result<SkeletalGroupoid, EvalError> {
        match self.eval(e, src)? {
            Value::Groupoid(x) => Ok(x),
            Value::Group(_) => Err(self.error(src, e.span, "expected a groupoid, got a group; use B(...)")),
            Value::Family(_) => Err(self.error(src, e.span, "expected a groupoid, got a family; use Sigma(...)")),
        }
    }

    fn eval(&self, e: &Expr, src: &str) -> Result<Value, EvalError> {
        let lift = |err: Error| self.lift(src, e.span, err);
        let b = &self.budget;
        use ExprKind::*;
        Ok(match &e.kind {
            Cyclic(n) => Value::Group(FiniteGroup::cyclic(self.usize_arg(*n, e.span, src)?, b).map_err(lift)?),
            Sym(n) => {
                let n = self.usize_arg(*n, e.span, src)?;
                if n > 12 {
                    return Err(lift(Error::resource("symmetric group degree", n, 12)));
                }
                Value::Group(FiniteGroup::symmetric(n, b).map_err(lift)?)
            }
            Dihedral(n) => Value::Group(FiniteGroup::dihedral(self.usize_arg(*n, e.span, src)?, b).map_err(lift)?),
            Product(x, y) => {
                let (g, h) = (self.group(x, src)?, self.group(y, src)?);
                Value::Group(FiniteGroup::direct_product(&g, &h, b).map_err(lift)?)
            }
            Table(rows) => {
                if rows.len() > b.max_group_order {
                    return Err(lift(Error::resource("group order", rows.len(), b.max_group_order)));
                }
                let rows = to_usize_rows(rows).ok_or_else(|| self.error(src, e.span, "table entry is too large"))?;
                Value::Group(FiniteGroup::from_table(&rows).map_err(lift)?)
            }
            Perms(gens) => {
                let gens = to_usize_rows(gens).ok_or_else(|| self.error(src, e.span, "permutation entry is too large"))?;
                Value::Group(FiniteGroup::from_permutations(&gens, b).map_err(lift)?)
            }
            B(g) => Value::Groupoid(SkeletalGroupoid::classifying(self.group(g, src)?)),
            Pt => Value::Groupoid(SkeletalGroupoid::unit()),
            Empty => Value::Groupoid(SkeletalGroupoid::empty()),
            Set(n) => {
                let n = self.usize_arg(*n, e.span, src)?;
                if n > b.max_objects {
                    return Err(lift(Error::resource("set size", n, b.max_objects)));
                }
                Value::Groupoid(SkeletalGroupoid::set(n))
            }
            Sum(x, y) => {
                let (x, y) = (self.groupoid(x, src)?, self.groupoid(y, src)?);
                if x.len() + y.len() > b.max_objects {
                    return Err(lift(Error::resource("sum components", x.len() + y.len(), b.max_objects)));
                }
                Value::Groupoid(x.sum(&y))
            }
            Times(x, y) => {
                let (x, y) = (self.groupoid(x, src)?, self.groupoid(y, src)?);
                Value::Groupoid(x.product(&y, b).map_err(lift)?)
            }
            Fun(x, y) => {
                let (x, y) = (self.groupoid(x, src)?, self.groupoid(y, src)?);
                Value::Groupoid(functor_groupoid(&x, &y, b).map_err(lift)?)
            }
            Sigma(p) => match self.eval(p, src)? {
                Value::Family(p) => Value::Groupoid(grothendieck_sum(&p, b).map_err(lift)?.skeletalize()),
                other => {
                    return Err(self.error(src, e.span, format!("Sigma expects a family, got a {}", other.kind_name())))
                }
            },
            Conj(x) => match self.eval(x, src)? {
                Value::Group(g) => Value::Family(DependentGroupoid::loop_family(&SkeletalGroupoid::classifying(g))),
                Value::Groupoid(x) => {
                    self.check_fiber_total(&x, src, e.span)?;
                    Value::Family(DependentGroupoid::loop_family(&x))
                }
                Value::Family(_) => return Err(self.error(src, e.span, "conj expects a group or groupoid, got a family")),
            },
            Const(x, y) => {
                let (x, y) = (self.groupoid(x, src)?, self.groupoid(y, src)?);
                let fiber = FullGroupoid::from_skeletal(&y);
                if x.len().saturating_mul(fiber.morphism_count()) > b.max_objects {
                    return Err(lift(Error::resource("constant family size", x.len() * fiber.morphism_count(), b.max_objects)));
                }
                Value::Family(DependentGroupoid::constant(&x, &fiber))
            }
            Family(base, specs) => Value::Family(self.family(base, specs, src, e.span)?),
            Var(name) => self
                .env
                .get(name)
                .map(|(v, _)| v.clone())
                .ok_or_else(|| self.error(src, e.span, format!("undefined identifier `{name}`")))?,
        })
    }

    fn check_fiber_total(&self, x: &SkeletalGroupoid, src: &str, span: Span) -> Result<(), EvalError> {
        let total: usize = x.components().iter().map(|c| c.aut.order()).sum();
        if total > self.budget.max_objects {
            return Err(self.lift(src, span, Error::resource("conjugation fiber objects", total, self.budget.max_objects)));
        }
        Ok(())
    }

    fn family(&self, base: &Expr, specs: &[FiberSpec], src: &str, span: Span) -> Result<DependentGroupoid, EvalError> {
        let x = self.groupoid(base, src)?;
        if specs.len() != x.len() {
            return Err(self.error(
                src,
                span,
                format!(
                    "the base has {} components but {} fibers were given (one per component, in order of increasing automorphism group)",
                    x.len(),
                    specs.len()
                ),
            ));
        }
        let mut fibers = Vec::with_capacity(specs.len());
        for (c, spec) in x.components().iter().zip(specs) {
            let lift = |err: Error| self.lift(src, spec.span, err);
            let fiber = match &spec.source {
                FiberSource::Expr(e) => FullGroupoid::from_skeletal(&self.groupoid(e, src)?),
                FiberSource::Json(text) => {
                    let json = if text.trim_start().starts_with('{') {
                        text.clone()
                    } else {
                        let path = self.base_dir.join(text);
                        std::fs::read_to_string(&path)
                            .map_err(|err| self.error(src, spec.span, format!("cannot read {}: {err}", path.display())))?
                    };
                    FullGroupoid::from_json(&json, &self.budget).map_err(lift)?
                }
            };
            if spec.actions.is_empty() {
                fibers.push(Fiber::trivial(c.label.clone(), c.aut.clone(), fiber));
                continue;
            }
            let gens = c.aut.generators().len();
            if spec.actions.len() != gens {
                return Err(self.error(
                    src,
                    spec.span,
                    format!(
                        "component `{}` has a group with {gens} generators but {} act(...) clauses were given",
                        c.label,
                        spec.actions.len()
                    ),
                ));
            }
            let mut images = Vec::with_capacity(gens);
            for a in &spec.actions {
                images.push(self.action_image(&fiber, a, src)?);
            }
            fibers.push(
                Fiber::from_generator_images(c.label.clone(), c.aut.clone(), fiber, images)
                    .map_err(|err| self.lift(src, spec.span, err))?,
            );
        }
        DependentGroupoid::new(fibers).map_err(|err| self.lift(src, span, err))
    }

    /// Without an explicit morphism map, the `k`-th morphism `a → b` goes
    /// to the `k`-th morphism `σa → σb`.
    fn action_image(&self, fiber: &FullGroupoid, a: &Action, src: &str) -> Result<Functor, EvalError> {
        let bad = |msg: String| self.error(src, a.span, msg);
        let objects = to_usize(&a.objects).ok_or_else(|| bad("object index is too large".into()))?;
        if objects.len() != fiber.object_count() || objects.iter().any(|&o| o >= fiber.object_count()) {
            return Err(bad(format!(
                "object map must list an image in 0..{n} for each of the {n} fiber objects",
                n = fiber.object_count()
            )));
        }
        let morphisms = match &a.morphisms {
            Some(m) => to_usize(m).ok_or_else(|| bad("morphism index is too large".into()))?,
            None => {
                let mut out = Vec::with_capacity(fiber.morphism_count());
                for f in 0..fiber.morphism_count() {
                    let (s, t) = (fiber.source(f), fiber.target(f));
                    let k = fiber.hom(s, t).iter().position(|&g| g == f).expect("f lies in its own hom-set");
                    let target = fiber.hom(objects[s], objects[t]);
                    match target.get(k) {
                        Some(&g) => out.push(g),
                        None => {
                            return Err(bad(format!(
                                "hom-set sizes differ between objects {s}→{t} and their images; give the morphism map explicitly"
                            )))
                        }
                    }
                }
                out
            }
        };
        Ok(Functor { objects, morphisms })
    }
}

fn to_usize(xs: &[u64]) -> Option<Vec<usize>> {
    xs.iter().map(|&x| usize::try_from(x).ok()).collect()
}

fn to_usize_rows(rows: &[Vec<u64>]) -> Option<Vec<Vec<usize>>> {
    rows.iter().map(|r| to_usize(r)).collect()
}
