//! The identity ledger: each identity compares a semantic construction, or
//! an analytic formula, against the value a cardinality law predicts.

mod gen;
pub mod oracle;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::arith::{ExtendedLog, ExtendedValue, PowerProduct, Rational};
use crate::budget::Budget;
use crate::dsl::Value;
use crate::error::{Error, Result};
use crate::groupoid::{
    dependent_product_cardinality, functor_groupoid, grothendieck_sum, nat_trans_cardinality, oracle_cardinality,
    DependentGroupoid, FullGroupoid, SkeletalGroupoid,
};
use crate::info::{
    diversity, relative_diversity, relative_entropy, Distribution, ProbabilityGroupoid, RandomVariable,
};
use crate::laws;

pub use gen::{catalog, fixture_sources, run_fixtures, run_suite, trial_instances, GenConfig, Suite, SuiteError, SuiteSummary, Tally};

macro_rules! identities {
    ($($variant:ident => $name:literal, $theorem:literal;)*) => {
        #[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, PartialOrd, Ord, Serialize, Deserialize)]
        pub enum IdentityId {
            $(#[serde(rename = $name)] $variant,)*
        }

        impl IdentityId {
            pub const ALL: &'static [IdentityId] = &[$(IdentityId::$variant,)*];

            pub fn name(self) -> &'static str {
                match self {
                    $(IdentityId::$variant => $name,)*
                }
            }

            /// Theorems must hold on every instance; the rest are conjectures
            /// whose verdicts are informational.
            pub fn is_theorem(self) -> bool {
                match self {
                    $(IdentityId::$variant => $theorem,)*
                }
            }
        }
    };
}

identities! {
    CardSum => "CARD_SUM", true;
    CardProd => "CARD_PROD", true;
    CardFun => "CARD_FUN", false;
    CardSigma => "CARD_SIGMA", true;
    CardPi => "CARD_PI", false;
    DiversityAlgebraic => "DIVERSITY_ALGEBRAIC", true;
    DiversitySemantic => "DIVERSITY_SEMANTIC", false;
    RvIdentityConj => "RV_IDENTITY_CONJ", true;
    CrossIdentityConj => "CROSS_IDENTITY_CONJ", true;
    RelIdentityConj => "REL_IDENTITY_CONJ", true;
    RvIdentitySemantic => "RV_IDENTITY_SEMANTIC", false;
    Gibbs => "GIBBS", true;
    ConjActionUnit => "CONJ_ACTION_UNIT", true;
    OracleCard => "ORACLE_CARD", true;
    OracleFun => "ORACLE_FUN", true;
}

impl fmt::Display for IdentityId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for IdentityId {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        IdentityId::ALL
            .iter()
            .copied()
            .find(|i| i.name() == s)
            .ok_or_else(|| format!("unknown identity `{s}`"))
    }
}

/// An exact value as it appears in a report.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
#[serde(tag = "kind", content = "value", rename_all = "snake_case")]
pub enum ExactValue {
    Rational(Rational),
    PowerProduct(PowerProduct),
    Extended(ExtendedValue),
    Log(ExtendedLog),
}

impl ExactValue {
    /// Extended-real view for comparison, when `self` is not a log.
    fn as_extended(&self) -> Option<ExtendedValue> {
        match self {
            ExactValue::Rational(q) => ExtendedValue::from_rational(q).ok(),
            ExactValue::PowerProduct(p) => Some(ExtendedValue::Finite(p.clone())),
            ExactValue::Extended(e) => Some(e.clone()),
            ExactValue::Log(_) => None,
        }
    }

    pub fn approx(&self) -> f64 {
        match self {
            ExactValue::Rational(q) => q.to_f64(),
            ExactValue::PowerProduct(p) => p.approx(),
            ExactValue::Extended(e) => e.approx(),
            ExactValue::Log(l) => l.approx(),
        }
    }
}

impl fmt::Display for ExactValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExactValue::Rational(q) => write!(f, "{q}"),
            ExactValue::PowerProduct(p) => write!(f, "{p}"),
            ExactValue::Extended(e) => write!(f, "{e}"),
            ExactValue::Log(l) => write!(f, "{l} bits"),
        }
    }
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
#[serde(tag = "status", content = "cause", rename_all = "snake_case")]
pub enum Verdict {
    Holds,
    Fails,
    /// An undefined `0 · ∞` product; neither side has a finite value.
    Infinite,
    Skipped(String),
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Verdict::Holds => f.write_str("holds"),
            Verdict::Fails => f.write_str("fails"),
            Verdict::Infinite => f.write_str("infinite"),
            Verdict::Skipped(_) => f.write_str("skipped"),
        }
    }
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct CheckReport {
    pub id: IdentityId,
    pub instance_dsl: String,
    pub lhs: Option<ExactValue>,
    pub rhs: Option<ExactValue>,
    pub verdict: Verdict,
    pub witness: String,
    pub budget: String,
}

impl CheckReport {
    pub fn is_theorem_violation(&self) -> bool {
        self.id.is_theorem() && self.verdict == Verdict::Fails
    }
}

const STRICT: &str = "actions are strict";

struct Outcome {
    lhs: ExactValue,
    rhs: ExactValue,
    verdict: Verdict,
    witness: String,
}

fn compare(lhs: ExactValue, rhs: ExactValue, witness: String) -> Outcome {
    let equal = match (&lhs, &rhs) {
        (ExactValue::Log(a), ExactValue::Log(b)) => a == b,
        (a, b) => a.as_extended() == b.as_extended(),
    };
    Outcome {
        lhs,
        rhs,
        verdict: if equal { Verdict::Holds } else { Verdict::Fails },
        witness,
    }
}

/// Operands of the wrong kind or an ill-formed instance.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct CheckError(pub String);

impl fmt::Display for CheckError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for CheckError {}

fn kinds(args: &[Value]) -> String {
    args.iter().map(Value::kind_name).collect::<Vec<_>>().join(", ")
}

fn signature(id: IdentityId) -> &'static str {
    use IdentityId::*;
    match id {
        CardSum | CardProd | CardFun | OracleFun => "two groupoids",
        CardSigma | CardPi | RvIdentityConj | RvIdentitySemantic => "one family",
        DiversityAlgebraic | DiversitySemantic => "one probability groupoid",
        CrossIdentityConj | RelIdentityConj => "two families over the same base",
        Gibbs => "two probability groupoids or random variables",
        ConjActionUnit => "one group",
        OracleCard => "one groupoid or family",
    }
}

fn two_groupoids(args: &[Value]) -> Option<(&SkeletalGroupoid, &SkeletalGroupoid)> {
    match args {
        [Value::Groupoid(x), Value::Groupoid(y)] => Some((x, y)),
        _ => None,
    }
}

fn distribution_of(v: &Value, budget: &Budget) -> Result<Option<Distribution>> {
    Ok(match v {
        Value::Groupoid(x) => Some(ProbabilityGroupoid::new(x.clone())?.probabilities()),
        Value::Family(p) => Some(RandomVariable::new(p.clone(), budget)?.distribution()),
        Value::Group(_) => None,
    })
}

/// Runs one identity on the given operands.
pub fn check(id: IdentityId, args: &[Value], instance_dsl: impl Into<String>, budget: &Budget) -> Result<CheckReport, CheckError> {
    let instance_dsl = instance_dsl.into();
    let report = |lhs, rhs, verdict, witness| CheckReport {
        id,
        instance_dsl: instance_dsl.clone(),
        lhs,
        rhs,
        verdict,
        witness,
        budget: budget.to_string(),
    };
    match run(id, args, budget) {
        Ok(Some(o)) => Ok(report(Some(o.lhs), Some(o.rhs), o.verdict, o.witness)),
        Ok(None) => Err(CheckError(format!(
            "{id} expects {}, got [{}]",
            signature(id),
            kinds(args)
        ))),
        Err(e) if e.is_resource() => Ok(report(None, None, Verdict::Skipped(e.to_string()), format!("skipped: {e}"))),
        Err(e) => Err(CheckError(format!("{id}: {e}"))),
    }
}

fn run(id: IdentityId, args: &[Value], budget: &Budget) -> Result<Option<Outcome>> {
    use IdentityId::*;
    Ok(Some(match id {
        CardSum => {
            let Some((x, y)) = two_groupoids(args) else { return Ok(None) };
            let s = x.sum(y);
            compare(
                ExactValue::Rational(s.cardinality()),
                ExactValue::Rational(laws::sum(x, y)),
                format!("X + Y has {} components", s.len()),
            )
        }
        CardProd => {
            let Some((x, y)) = two_groupoids(args) else { return Ok(None) };
            let p = x.product(y, budget)?;
            compare(
                ExactValue::Rational(p.cardinality()),
                ExactValue::Rational(laws::product(x, y)),
                format!("X × Y has {} components", p.len()),
            )
        }
        CardFun => {
            let Some((x, y)) = two_groupoids(args) else { return Ok(None) };
            let f = functor_groupoid(x, y, budget)?;
            compare(
                ExactValue::Rational(f.cardinality()),
                ExactValue::Extended(laws::function(x, y)?),
                format!(
                    "lhs: Fun(X, Y) has {} classes of functors; rhs: |Y|^|X| with |X| = {}, |Y| = {}",
                    f.len(),
                    x.cardinality(),
                    y.cardinality()
                ),
            )
        }
        CardSigma => {
            let [Value::Family(p)] = args else { return Ok(None) };
            let total = grothendieck_sum(p, budget)?.skeletalize();
            compare(
                ExactValue::Rational(total.cardinality()),
                ExactValue::Rational(laws::dependent_sum(p)),
                format!("lhs: skeleton of the explicit total groupoid, {} components; {STRICT}", total.len()),
            )
        }
        CardPi => {
            let [Value::Family(p)] = args else { return Ok(None) };
            compare(
                ExactValue::Rational(dependent_product_cardinality(p, budget)?),
                ExactValue::Extended(laws::dependent_product(p)?),
                format!(
                    "lhs: product over {} base components of homotopy fixed-point cardinalities; rhs: Π |P_x|^(1/|x=x|); {STRICT}",
                    p.base().len()
                ),
            )
        }
        DiversityAlgebraic => {
            let [Value::Groupoid(x)] = args else { return Ok(None) };
            let p = ProbabilityGroupoid::new(x.clone())?;
            let predicted: PowerProduct = x
                .components()
                .iter()
                .map(|c| {
                    let n = Rational::from(c.aut.order());
                    PowerProduct::from_rational(&n).map(|pp| pp.pow(&n.recip().expect("orders are positive")))
                })
                .collect::<Result<Vec<_>>>()?
                .into_iter()
                .product();
            compare(
                ExactValue::PowerProduct(diversity(&p.probabilities())),
                ExactValue::PowerProduct(predicted),
                "lhs: 2^H(p) with p_x = 1/|x=x|; rhs: Π |x=x|^(1/|x=x|)".into(),
            )
        }
        DiversitySemantic => {
            let [Value::Groupoid(x)] = args else { return Ok(None) };
            let p = ProbabilityGroupoid::new(x.clone())?;
            let sections = dependent_product_cardinality(&DependentGroupoid::loop_family(x), budget)?;
            compare(
                ExactValue::Rational(sections),
                ExactValue::PowerProduct(diversity(&p.probabilities())),
                "lhs: |Π_x (x = x)| over the conjugation family, the product of the centers' orders; rhs: 2^H(p)".into(),
            )
        }
        RvIdentityConj => {
            let [Value::Family(p)] = args else { return Ok(None) };
            let r = RandomVariable::new(p.clone(), budget)?;
            let d = ExtendedValue::Finite(diversity(&r.distribution()));
            let lhs = d.mul(&laws::nat_trans(p, p)?)?;
            compare(
                ExactValue::Extended(lhs),
                ExactValue::Extended(laws::nat_trans_loops(p)?),
                "lhs: 2^H(p)·|P⇒P|, rhs: |P⇒(·=·)|, both through the conjectured laws".into(),
            )
        }
        CrossIdentityConj | RelIdentityConj => {
            let [Value::Family(p), Value::Family(q)] = args else { return Ok(None) };
            let (rp, rq) = (RandomVariable::new(p.clone(), budget)?, RandomVariable::new(q.clone(), budget)?);
            let (dp, dq) = (rp.distribution(), rq.distribution());
            if !p.same_base(q) {
                return Err(Error::LabelMismatch("the two families live over different bases".into()));
            }
            let pq = laws::nat_trans(p, q)?;
            let (factor, rhs, text) = if id == CrossIdentityConj {
                (
                    crate::info::cross_diversity(&dp, &dq)?,
                    laws::nat_trans_loops(p)?,
                    "lhs: 2^H(p,q)·|P⇒Q|, rhs: |P⇒(·=·)|",
                )
            } else {
                (relative_diversity(&dp, &dq)?, laws::nat_trans(p, p)?, "lhs: 2^D(p‖q)·|P⇒Q|, rhs: |P⇒P|")
            };
            match factor.mul(&pq) {
                Ok(lhs) => compare(ExactValue::Extended(lhs), ExactValue::Extended(rhs), format!("{text}, both through the conjectured laws")),
                Err(_) => Outcome {
                    lhs: ExactValue::Extended(factor),
                    rhs: ExactValue::Extended(rhs),
                    verdict: Verdict::Infinite,
                    witness: format!("{text}; some q_x = 0 where p_x > 0, so the lhs is ∞ · 0 (lhs shows the infinite factor)"),
                },
            }
        }
        RvIdentitySemantic => {
            let [Value::Family(p)] = args else { return Ok(None) };
            let r = RandomVariable::new(p.clone(), budget)?;
            let pp = nat_trans_cardinality(p, p, budget)?;
            let loops = nat_trans_cardinality(p, &DependentGroupoid::loop_family(p.base()), budget)?;
            let d = ExtendedValue::Finite(diversity(&r.distribution()));
            let lhs = d.mul(&ExtendedValue::from_rational(&pp)?)?;
            compare(
                ExactValue::Extended(lhs),
                ExactValue::Rational(loops),
                format!("lhs: 2^H(p)·|P⇒P| with P⇒P built fiber by fiber from explicit functor groupoids; rhs: |P⇒(·=·)| read as natural transformations into the conjugation family; {STRICT}"),
            )
        }
        Gibbs => {
            let [a, b] = args else { return Ok(None) };
            let (Some(p), Some(q)) = (distribution_of(a, budget)?, distribution_of(b, budget)?) else {
                return Ok(None);
            };
            let d = relative_entropy(&p, &q)?;
            let ratio = relative_diversity(&p, &q)?;
            let nonnegative = match &d {
                ExtendedLog::Infinite => true,
                ExtendedLog::Finite(l) => l.signum()? != std::cmp::Ordering::Less,
            };
            let zero = d == ExtendedLog::Finite(crate::arith::ExactLog::zero());
            let ratio_one = ratio == ExtendedValue::one();
            let same = p == q;
            let holds = nonnegative && zero == ratio_one && ratio_one == same;
            Outcome {
                lhs: ExactValue::Log(d),
                rhs: ExactValue::Extended(ratio),
                verdict: if holds { Verdict::Holds } else { Verdict::Fails },
                witness: format!(
                    "lhs: D(p‖q), rhs: 2^D; D ≥ 0: {nonnegative}, D = 0: {zero}, 2^D = 1: {ratio_one}, p = q: {same}"
                ),
            }
        }
        ConjActionUnit => {
            let [Value::Group(g)] = args else { return Ok(None) };
            let x = SkeletalGroupoid::classifying(g.clone());
            let conj = grothendieck_sum(&DependentGroupoid::loop_family(&x), budget)?.skeletalize();
            let translation = grothendieck_sum(&DependentGroupoid::translation_family(&x), budget)?.cardinality();
            let mut o = compare(
                ExactValue::Rational(conj.cardinality()),
                ExactValue::Rational(Rational::one()),
                format!(
                    "conjugation action groupoid has {} components (conjugacy classes); left translation total has cardinality {translation}",
                    conj.len()
                ),
            );
            if !translation.is_one() {
                o.verdict = Verdict::Fails;
            }
            o
        }
        OracleCard => {
            let explicit = match args {
                [Value::Groupoid(x)] => FullGroupoid::from_skeletal(x),
                [Value::Family(p)] => grothendieck_sum(p, budget)?,
                _ => return Ok(None),
            };
            compare(
                ExactValue::Rational(explicit.cardinality()),
                ExactValue::Rational(oracle_cardinality(&explicit)),
                format!(
                    "lhs: skeleton; rhs: per-object sum over {} objects and {} morphisms",
                    explicit.object_count(),
                    explicit.morphism_count()
                ),
            )
        }
        OracleFun => {
            let Some((x, y)) = two_groupoids(args) else { return Ok(None) };
            let skeletal = functor_groupoid(x, y, budget)?.cardinality();
            let naive = oracle::naive_functor_cardinality(
                &FullGroupoid::from_skeletal(x),
                &FullGroupoid::from_skeletal(y),
                budget,
            )?;
            compare(
                ExactValue::Rational(skeletal),
                ExactValue::Rational(naive.cardinality),
                format!(
                    "lhs: homomorphism classes; rhs: {} functors found by brute force in {} isomorphism classes",
                    naive.functors, naive.classes
                ),
            )
        }
    }))
}
