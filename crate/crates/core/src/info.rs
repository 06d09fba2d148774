//! Probability groupoids, random variables and the entropy layer.

use std::collections::HashSet;

use serde::{Deserialize, Serialize};

use crate::arith::{ExactLog, ExtendedLog, ExtendedValue, PowerProduct, Rational};
use crate::budget::Budget;
use crate::error::{Error, Result};
use crate::groupoid::{grothendieck_sum, DependentGroupoid, SkeletalGroupoid};
use crate::laws;
use crate::util::natural_cmp;

/// A finite distribution with exact rational masses summing to 1.
///
/// Outcomes are sorted by natural label order, so two distributions over
/// the same labels line up position by position.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
#[serde(try_from = "Vec<Outcome>", into = "Vec<Outcome>")]
pub struct Distribution {
    outcomes: Vec<(String, Rational)>,
}

#[derive(Serialize, Deserialize)]
struct Outcome {
    label: String,
    p: Rational,
}

impl TryFrom<Vec<Outcome>> for Distribution {
    type Error = Error;
    fn try_from(v: Vec<Outcome>) -> Result<Self> {
        Distribution::new(v.into_iter().map(|o| (o.label, o.p)).collect())
    }
}

impl From<Distribution> for Vec<Outcome> {
    fn from(d: Distribution) -> Self {
        d.outcomes.into_iter().map(|(label, p)| Outcome { label, p }).collect()
    }
}

impl Distribution {
    pub fn new(mut outcomes: Vec<(String, Rational)>) -> Result<Self> {
        let mut seen = HashSet::new();
        for (label, p) in &outcomes {
            if !seen.insert(label.as_str()) {
                return Err(Error::InvalidDistribution(format!("duplicate outcome `{label}`")));
            }
            if p.is_negative() {
                return Err(Error::InvalidDistribution(format!("outcome `{label}` has negative mass {p}")));
            }
        }
        let total: Rational = outcomes.iter().map(|(_, p)| p.clone()).sum();
        if !total.is_one() {
            return Err(Error::InvalidDistribution(format!("masses sum to {total}, not 1")));
        }
        outcomes.sort_by(|a, b| natural_cmp(&a.0, &b.0));
        Ok(Distribution { outcomes })
    }

    pub fn outcomes(&self) -> &[(String, Rational)] {
        &self.outcomes
    }

    pub fn len(&self) -> usize {
        self.outcomes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.outcomes.is_empty()
    }

    pub fn masses(&self) -> impl Iterator<Item = &Rational> {
        self.outcomes.iter().map(|(_, p)| p)
    }

    pub fn get(&self, label: &str) -> Option<&Rational> {
        self.outcomes.iter().find(|(l, _)| l == label).map(|(_, p)| p)
    }

    fn aligned<'a>(&'a self, q: &'a Distribution) -> Result<impl Iterator<Item = (&'a Rational, &'a Rational)>> {
        let same = self.len() == q.len() && self.outcomes.iter().zip(&q.outcomes).all(|(a, b)| a.0 == b.0);
        if !same {
            let names = |d: &Distribution| d.outcomes.iter().map(|(l, _)| l.as_str()).collect::<Vec<_>>().join(", ");
            return Err(Error::LabelMismatch(format!(
                "outcomes [{}] versus [{}]",
                names(self),
                names(q)
            )));
        }
        Ok(self.masses().zip(q.masses()))
    }
}

impl std::fmt::Display for Distribution {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let parts: Vec<String> = self.outcomes.iter().map(|(l, p)| format!("{l}: {p}")).collect();
        write!(f, "({})", parts.join(", "))
    }
}

/// A skeletal groupoid of cardinality exactly 1.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ProbabilityGroupoid(SkeletalGroupoid);

impl ProbabilityGroupoid {
    pub fn new(x: SkeletalGroupoid) -> Result<Self> {
        let card = x.cardinality();
        if !card.is_one() {
            return Err(Error::NotProbability(card.to_string()));
        }
        Ok(ProbabilityGroupoid(x))
    }

    pub fn groupoid(&self) -> &SkeletalGroupoid {
        &self.0
    }

    /// `p_x = 1 / |x = x|`.
    pub fn probabilities(&self) -> Distribution {
        Distribution::new(
            self.0
                .components()
                .iter()
                .map(|c| (c.label.clone(), Rational::new(1, c.aut.order() as i64)))
                .collect(),
        )
        .expect("masses of a probability groupoid sum to 1")
    }
}

/// A family whose total groupoid has cardinality exactly 1.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct RandomVariable {
    family: DependentGroupoid,
}

impl RandomVariable {
    /// Normalization is checked on the skeleton of the explicit total
    /// groupoid, not through the dependent-sum formula.
    pub fn new(family: DependentGroupoid, budget: &Budget) -> Result<Self> {
        let card = grothendieck_sum(&family, budget)?.cardinality();
        if !card.is_one() {
            return Err(Error::NotProbability(card.to_string()));
        }
        Ok(RandomVariable { family })
    }

    pub fn family(&self) -> &DependentGroupoid {
        &self.family
    }

    /// `p_x = |P_x| / |x = x|`, over the base components.
    pub fn distribution(&self) -> Distribution {
        let base = self.family.base();
        Distribution::new(
            base.components()
                .iter()
                .zip(self.family.fiber_cardinalities())
                .map(|(c, card)| (c.label.clone(), card / Rational::from(c.aut.order())))
                .collect(),
        )
        .expect("normalization was checked on construction")
    }
}

fn surprisal(p: &Rational) -> ExactLog {
    let inv = p.recip().expect("only called on positive masses");
    PowerProduct::from_rational(&inv)
        .expect("reciprocal of a positive mass is positive")
        .log2()
}

/// `H(p) = Σ p_x log2(1/p_x)`, with `0 · log 0 = 0`.
pub fn shannon_entropy(p: &Distribution) -> ExactLog {
    p.masses()
        .filter(|m| m.is_positive())
        .map(|m| surprisal(m).scale(m))
        .sum()
}

/// `2^H(p) = Π (1/p_x)^p_x`.
pub fn diversity(p: &Distribution) -> PowerProduct {
    shannon_entropy(p).exp2()
}

/// `H(p, q) = Σ p_x log2(1/q_x)`; infinite when some `p_x > 0` has `q_x = 0`.
pub fn cross_entropy(p: &Distribution, q: &Distribution) -> Result<ExtendedLog> {
    let mut acc = ExactLog::zero();
    for (pm, qm) in p.aligned(q)? {
        if !pm.is_positive() {
            continue;
        }
        if qm.is_zero() {
            return Ok(ExtendedLog::Infinite);
        }
        acc = &acc + &surprisal(qm).scale(pm);
    }
    Ok(ExtendedLog::Finite(acc))
}

pub fn cross_diversity(p: &Distribution, q: &Distribution) -> Result<ExtendedValue> {
    Ok(cross_entropy(p, q)?.exp2())
}

/// `D(p ‖ q) = H(p, q) − H(p)`.
pub fn relative_entropy(p: &Distribution, q: &Distribution) -> Result<ExtendedLog> {
    Ok(match cross_entropy(p, q)? {
        ExtendedLog::Finite(h) => ExtendedLog::Finite(&h - &shannon_entropy(p)),
        ExtendedLog::Infinite => ExtendedLog::Infinite,
    })
}

/// `2^D = 2^H(p,q) / 2^H(p)`.
pub fn relative_diversity(p: &Distribution, q: &Distribution) -> Result<ExtendedValue> {
    cross_diversity(p, q)?.div(&ExtendedValue::Finite(diversity(p)))
}

#[derive(Clone, PartialEq, Serialize, Deserialize, Debug)]
pub struct LogWithApprox {
    pub terms: ExactLog,
    pub approx: f64,
}

#[derive(Clone, PartialEq, Serialize, Deserialize, Debug)]
pub struct ProductWithApprox {
    pub factors: PowerProduct,
    pub approx: f64,
}

/// Entropy and diversity of one distribution, each kept exactly.
#[derive(Clone, PartialEq, Serialize, Deserialize, Debug)]
pub struct EntropyReport {
    pub entropy: LogWithApprox,
    pub diversity: ProductWithApprox,
    pub formula_provenance: String,
    /// Outcomes of mass zero, skipped under `0 · log 0 = 0`.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub zero_outcomes: Vec<String>,
}

impl EntropyReport {
    pub fn new(p: &Distribution, provenance: impl Into<String>) -> Self {
        let h = shannon_entropy(p);
        let d = diversity(p);
        debug_assert_eq!(d.log2(), h);
        EntropyReport {
            entropy: LogWithApprox {
                approx: h.approx(),
                terms: h,
            },
            diversity: ProductWithApprox {
                approx: d.approx(),
                factors: d,
            },
            formula_provenance: provenance.into(),
            zero_outcomes: p
                .outcomes()
                .iter()
                .filter(|(_, m)| m.is_zero())
                .map(|(l, _)| l.clone())
                .collect(),
        }
    }
}

/// Values of `|P⇒P|`, `|P⇒Q|` and `|P⇒(·=·)|` predicted by the conjectured
/// laws.
#[derive(Clone, PartialEq, Eq, Serialize, Deserialize, Debug)]
pub struct ConjecturedCardinalities {
    pub pp_pp: ExtendedValue,
    pub pq: ExtendedValue,
    pub p_loop: ExtendedValue,
}

pub fn conjectured_cardinalities(p: &RandomVariable, q: &RandomVariable) -> Result<ConjecturedCardinalities> {
    let (pf, qf) = (p.family(), q.family());
    if !pf.same_base(qf) {
        return Err(Error::LabelMismatch(format!(
            "random variables live over different bases: {} versus {}",
            pf.base(),
            qf.base()
        )));
    }
    Ok(ConjecturedCardinalities {
        pp_pp: laws::nat_trans(pf, pf)?,
        pq: laws::nat_trans(pf, qf)?,
        p_loop: laws::nat_trans_loops(pf)?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::FiniteGroup;
    use crate::groupoid::FullGroupoid;

    fn d(ps: &[(i64, i64)]) -> Distribution {
        Distribution::new(
            ps.iter()
                .enumerate()
                .map(|(i, &(n, m))| (i.to_string(), Rational::new(n, m)))
                .collect(),
        )
        .unwrap()
    }

    fn log(terms: &[(u64, i64, i64)]) -> ExactLog {
        PowerProduct::from_factors(terms.iter().map(|&(p, n, m)| (p, Rational::new(n, m))))
            .unwrap()
            .log2()
    }

    #[test]
    fn validation() {
        assert!(Distribution::new(vec![("a".into(), Rational::new(1, 2))]).is_err());
        assert!(Distribution::new(vec![
            ("a".into(), Rational::new(3, 2)),
            ("b".into(), Rational::new(-1, 2))
        ])
        .is_err());
        let p = Distribution::new(vec![("10".into(), Rational::new(1, 2)), ("9".into(), Rational::new(1, 2))]).unwrap();
        assert_eq!(p.outcomes()[0].0, "9");
        assert!(ProbabilityGroupoid::new(SkeletalGroupoid::set(2)).is_err());
    }

    #[test]
    fn entropy_examples() {
        assert_eq!(shannon_entropy(&d(&[(1, 2), (1, 2)])), log(&[(2, 1, 1)]));
        assert!(shannon_entropy(&d(&[(1, 1)])).is_zero());
        let s3 = d(&[(1, 6), (1, 2), (1, 3)]);
        assert_eq!(shannon_entropy(&s3), log(&[(2, 2, 3), (3, 1, 2)]));
        assert!((shannon_entropy(&s3).approx() - 1.459_147_917_027_245).abs() < 1e-12);
        assert_eq!(diversity(&s3).log2(), shannon_entropy(&s3));
        assert!(diversity(&d(&[(1, 1), (0, 1)])).is_one());
    }

    #[test]
    fn cross_and_relative_examples() {
        let p = d(&[(1, 2), (1, 2)]);
        let q = d(&[(1, 4), (3, 4)]);
        assert_eq!(cross_entropy(&p, &p).unwrap(), ExtendedLog::Finite(shannon_entropy(&p)));
        assert_eq!(cross_entropy(&p, &q).unwrap(), ExtendedLog::Finite(log(&[(2, 2, 1), (3, -1, 2)])));
        assert_eq!(relative_entropy(&p, &q).unwrap(), ExtendedLog::Finite(log(&[(2, 1, 1), (3, -1, 2)])));
        assert!((relative_diversity(&p, &q).unwrap().approx() - 1.154_700_538_379_251_7).abs() < 1e-12);
        assert_eq!(relative_diversity(&p, &p).unwrap(), ExtendedValue::one());
        let a = d(&[(1, 1), (0, 1)]);
        let b = d(&[(0, 1), (1, 1)]);
        assert_eq!(cross_entropy(&a, &b).unwrap(), ExtendedLog::Infinite);
        assert_eq!(relative_entropy(&a, &b).unwrap(), ExtendedLog::Infinite);
        assert_eq!(relative_diversity(&a, &b).unwrap(), ExtendedValue::Infinite);
        let other = Distribution::new(vec![("x".into(), Rational::one())]).unwrap();
        assert!(matches!(cross_entropy(&a, &other), Err(Error::LabelMismatch(_))));
    }

    #[test]
    fn probability_groupoids() {
        let b = Budget::default();
        let s3 = FiniteGroup::symmetric(3, &b).unwrap();
        let conj = grothendieck_sum(&DependentGroupoid::loop_family(&SkeletalGroupoid::classifying(s3)), &b).unwrap();
        let x = ProbabilityGroupoid::new(conj.skeletalize()).unwrap();
        let mut masses: Vec<Rational> = x.probabilities().masses().cloned().collect();
        masses.sort();
        assert_eq!(masses, vec![Rational::new(1, 6), Rational::new(1, 3), Rational::new(1, 2)]);
    }

    #[test]
    fn random_variables() {
        let b = Budget::default();
        let z2 = FiniteGroup::cyclic(2, &b).unwrap();
        let fib = FullGroupoid::from_skeletal(&SkeletalGroupoid::classifying(z2));
        let r = RandomVariable::new(DependentGroupoid::constant(&SkeletalGroupoid::set(2), &fib), &b).unwrap();
        assert_eq!(r.distribution(), d(&[(1, 2), (1, 2)]));
        let c = conjectured_cardinalities(&r, &r).unwrap();
        assert_eq!(c.p_loop, ExtendedValue::one());
        assert_eq!(
            ExtendedValue::Finite(diversity(&r.distribution())).mul(&c.pp_pp).unwrap(),
            c.p_loop
        );
        assert!(RandomVariable::new(DependentGroupoid::constant(&SkeletalGroupoid::set(2), &FullGroupoid::unit()), &b).is_err());
    }

    #[test]
    fn json_round_trip() {
        let p = d(&[(1, 6), (1, 2), (1, 3)]);
        let r = EntropyReport::new(&p, "test");
        let back: EntropyReport = serde_json::from_str(&serde_json::to_string(&r).unwrap()).unwrap();
        assert_eq!(back, r);
        let back: Distribution = serde_json::from_str(&serde_json::to_string(&p).unwrap()).unwrap();
        assert_eq!(back, p);
        assert!(serde_json::from_str::<Distribution>(r#"[{"label":"a","p":"1/2"}]"#).is_err());
    }
}
