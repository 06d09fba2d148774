//! Deterministic instance streams for the identity ledger, and the curated
//! fixtures.

use std::collections::BTreeMap;
use std::fmt;
use std::path::Path;
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{CheckReport, IdentityId, Verdict};
use crate::budget::Budget;
use crate::dsl::{evaluate, Answer};
use crate::group::{FiniteGroup, GroupSpec};
use crate::groupoid::SkeletalGroupoid;

#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct GenConfig {
    pub seed: u64,
    pub trials: usize,
    pub max_group_order: usize,
    pub max_components: usize,
    pub max_fiber_objects: usize,
}

impl Default for GenConfig {
    fn default() -> Self {
        GenConfig {
            seed: 7,
            trials: 200,
            max_group_order: 8,
            max_components: 3,
            max_fiber_objects: 3,
        }
    }
}

impl GenConfig {
    pub fn validate(&self) -> Result<(), String> {
        let bounds = [
            ("trials", self.trials),
            ("max group order", self.max_group_order),
            ("max components", self.max_components),
            ("max fiber objects", self.max_fiber_objects),
        ];
        match bounds.iter().find(|(_, v)| *v == 0) {
            Some((name, _)) => Err(format!("{name} must be positive")),
            None => Ok(()),
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Suite {
    Theorems,
    Conjectures,
    All,
}

impl Suite {
    pub fn ids(self) -> Vec<IdentityId> {
        IdentityId::ALL
            .iter()
            .copied()
            .filter(|id| match self {
                Suite::Theorems => id.is_theorem(),
                Suite::Conjectures => !id.is_theorem(),
                Suite::All => true,
            })
            .collect()
    }

    /// Whether the curated fixtures belong to this suite.
    pub fn has_fixtures(self) -> bool {
        self != Suite::Theorems
    }
}

impl FromStr for Suite {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "theorems" => Ok(Suite::Theorems),
            "conjectures" => Ok(Suite::Conjectures),
            "all" => Ok(Suite::All),
            _ => Err(format!("unknown suite `{s}` (expected theorems, conjectures or all)")),
        }
    }
}

/// A generated or curated instance that could not be evaluated.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct SuiteError {
    pub instance: String,
    pub message: String,
}

impl fmt::Display for SuiteError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.instance, self.message)
    }
}

impl std::error::Error for SuiteError {}

fn q8_rows() -> Vec<Vec<usize>> {
    // Element 2u + s is (-1)^s times unit u of {1, i, j, k}.
    const UNIT: [[(usize, usize); 4]; 4] = [
        [(0, 0), (1, 0), (2, 0), (3, 0)],
        [(1, 0), (0, 1), (3, 0), (2, 1)],
        [(2, 0), (3, 1), (0, 1), (1, 0)],
        [(3, 0), (2, 0), (1, 1), (0, 1)],
    ];
    (0..8)
        .map(|x| {
            (0..8)
                .map(|y| {
                    let (u, s) = UNIT[x / 2][y / 2];
                    2 * u + (s ^ (x % 2) ^ (y % 2))
                })
                .collect()
        })
        .collect()
}

/// The named groups of order at most `max_order`, by increasing order.
pub fn catalog(max_order: usize) -> Vec<(String, GroupSpec)> {
    let mut out: Vec<(String, GroupSpec, usize)> = (1..=8)
        .map(|n| (format!("Z{n}"), GroupSpec::Cyclic(n), n))
        .collect();
    let c2 = || Box::new(GroupSpec::Cyclic(2));
    out.push(("Klein".into(), GroupSpec::Product(c2(), c2()), 4));
    out.push(("S3".into(), GroupSpec::Symmetric(3), 6));
    out.push(("D4".into(), GroupSpec::Dihedral(4), 8));
    out.push(("Q8".into(), GroupSpec::Table(q8_rows()), 8));
    out.sort_by_key(|e| e.2);
    out.into_iter()
        .filter(|e| e.2 <= max_order)
        .map(|(name, spec, _)| (name, spec))
        .collect()
}

fn spec_order(spec: &GroupSpec) -> usize {
    match spec {
        GroupSpec::Cyclic(n) => *n,
        GroupSpec::Symmetric(n) => (1..=*n).product(),
        GroupSpec::Dihedral(n) => 2 * n,
        GroupSpec::Product(a, b) => spec_order(a) * spec_order(b),
        GroupSpec::Table(rows) => rows.len(),
        GroupSpec::Perms(_) => unreachable!("the catalog has no permutation groups"),
    }
}

/// Decompositions `1 = 1/a_1 + ... + 1/a_k` with `a_1 <= ... <= a_k <= max_den`.
fn egyptian(max_terms: usize, max_den: u64) -> Vec<Vec<u64>> {
    fn go(num: u64, den: u64, min: u64, left: usize, max_den: u64, acc: &mut Vec<u64>, out: &mut Vec<Vec<u64>>) {
        if num == 0 {
            out.push(acc.clone());
            return;
        }
        if left == 0 {
            return;
        }
        // 1/a <= num/den and left/a >= num/den.
        let lo = min.max(den.div_ceil(num));
        let hi = max_den.min(left as u64 * den / num);
        for a in lo..=hi {
            let (n, d) = (num * a - den, den * a);
            let g = num_integer::gcd(n, d);
            acc.push(a);
            go(n / g, d / g, a, left - 1, max_den, acc, out);
            acc.pop();
        }
    }
    let mut out = Vec::new();
    go(1, 1, 1, max_terms, max_den, &mut Vec::new(), &mut out);
    out
}

struct Gen<'a> {
    rng: ChaCha8Rng,
    config: &'a GenConfig,
    groups: Vec<GroupSpec>,
    budget: Budget,
}

impl Gen<'_> {
    fn new(config: &GenConfig, trial: usize) -> Gen<'_> {
        let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
        rng.set_stream(trial as u64);
        Gen {
            rng,
            config,
            groups: catalog(config.max_group_order).into_iter().map(|(_, s)| s).collect(),
            budget: Budget::default(),
        }
    }

    fn build(&self, spec: &GroupSpec) -> FiniteGroup {
        spec.build(&self.budget).expect("catalog groups are valid")
    }

    /// A catalog group, or a direct product of two nontrivial ones.
    fn group(&mut self) -> GroupSpec {
        if self.rng.gen_bool(0.25) {
            let pairs: Vec<(usize, usize)> = (1..self.groups.len())
                .flat_map(|i| (i..self.groups.len()).map(move |j| (i, j)))
                .filter(|&(i, j)| spec_order(&self.groups[i]) * spec_order(&self.groups[j]) <= self.config.max_group_order)
                .collect();
            if let Some(&(i, j)) = pairs.choose(&mut self.rng) {
                return GroupSpec::Product(Box::new(self.groups[i].clone()), Box::new(self.groups[j].clone()));
            }
        }
        self.groups.choose(&mut self.rng).expect("catalog has the trivial group").clone()
    }

    fn small_group(&mut self, max_order: usize) -> GroupSpec {
        let small: Vec<&GroupSpec> = self.groups.iter().filter(|g| spec_order(g) <= max_order).collect();
        (*small.choose(&mut self.rng).expect("catalog has the trivial group")).clone()
    }

    fn groupoid_with(&mut self, max_components: usize, mut group: impl FnMut(&mut Self) -> GroupSpec) -> String {
        let k = self.rng.gen_range(0..=max_components);
        if k == 0 {
            return "empty".into();
        }
        let terms: Vec<String> = (0..k)
            .map(|_| match self.rng.gen_range(0..4) {
                0 => "pt".to_string(),
                1 => format!("set({})", self.rng.gen_range(1..=2)),
                2 => format!("set({}) * B({})", self.rng.gen_range(1..=2), group(self)),
                _ => format!("B({})", group(self)),
            })
            .collect();
        terms.join(" + ")
    }

    fn groupoid(&mut self) -> String {
        self.groupoid_with(self.config.max_components, |g| g.group())
    }

    /// Base groupoids for families: a sum of `B(G)` terms, mirrored in Rust
    /// so the fibers can be written in the evaluator's component order.
    fn base(&mut self, min: usize) -> (String, SkeletalGroupoid) {
        let k = self.rng.gen_range(min..=self.config.max_components.max(min));
        let specs: Vec<GroupSpec> = (0..k).map(|_| self.group()).collect();
        let text = if specs.is_empty() {
            "empty".to_string()
        } else {
            specs.iter().map(|s| format!("B({s})")).collect::<Vec<_>>().join(" + ")
        };
        let base = specs
            .iter()
            .map(|s| SkeletalGroupoid::classifying(self.build(s)))
            .reduce(|a, b| a.sum(&b))
            .unwrap_or_else(SkeletalGroupoid::empty);
        (text, base)
    }

    /// A fiber over a component with group `g`: `m` copies of `B(h)` permuted
    /// as `g` permutes the cosets of a subgroup `k`, cyclic or all of `g`, of mass
    /// `1/(|k||h|)`. `mass_den` forces that denominator when given.
    fn fiber(&mut self, g: &FiniteGroup, mass_den: Option<usize>) -> Option<String> {
        let mut choices = Vec::new();
        let whole: Vec<usize> = g.elements().collect();
        let subgroups = g.elements().map(|x| g.closure(&[x])).chain(std::iter::once(whole));
        for k in subgroups {
            let (m, order) = (g.order() / k.len(), k.len());
            if m > self.config.max_fiber_objects {
                continue;
            }
            match mass_den {
                Some(d) if d % order == 0 && d / order <= self.config.max_group_order => {
                    choices.push((k, Some(d / order)))
                }
                Some(_) => {}
                None => choices.push((k, None)),
            }
        }
        let (k, h_order) = choices.choose(&mut self.rng)?.clone();
        let h = match h_order {
            Some(n) => {
                let fitting: Vec<GroupSpec> = self.groups.iter().filter(|s| spec_order(s) == n).cloned().collect();
                fitting.choose(&mut self.rng).cloned().unwrap_or(GroupSpec::Cyclic(n))
            }
            None => self.small_group(4),
        };
        let m = g.order() / k.len();
        let fiber = if spec_order(&h) == 1 {
            format!("set({m})")
        } else {
            format!("set({m}) * B({h})")
        };
        // Cosets x·k, by smallest representative.
        let mut coset_of = vec![usize::MAX; g.order()];
        let mut reps = Vec::new();
        for x in g.elements() {
            if coset_of[x] == usize::MAX {
                for &y in &k {
                    coset_of[g.mul(x, y)] = reps.len();
                }
                reps.push(x);
            }
        }
        let twisted = m > 1 && self.rng.gen_bool(0.75);
        if !twisted || g.generators().is_empty() {
            return Some(format!("fiber({fiber})"));
        }
        let acts: Vec<String> = g
            .generators()
            .iter()
            .map(|&s| {
                let images: Vec<String> = reps.iter().map(|&r| coset_of[g.mul(s, r)].to_string()).collect();
                format!("act([{}])", images.join(", "))
            })
            .collect();
        Some(format!("fiber({fiber}, {})", acts.join(", ")))
    }

    fn family(&mut self) -> String {
        match self.rng.gen_range(0..6) {
            0 => format!("conj({})", self.group()),
            1 => {
                let x = self.groupoid_with(2, |g| g.small_group(4));
                let y = self.groupoid_with(2, |g| g.small_group(4));
                format!("const({x}, {y})")
            }
            _ => {
                let (text, base) = self.base(0);
                let fibers: Vec<String> = base
                    .components()
                    .iter()
                    .map(|c| {
                        if self.rng.gen_bool(0.1) {
                            "fiber(empty)".to_string()
                        } else {
                            self.fiber(&c.aut, None).expect("the whole group is a subgroup of index 1")
                        }
                    })
                    .collect();
                wrap_family(&text, &fibers)
            }
        }
    }

    /// Fibers over `base` whose masses sum to one; `None` when the drawn
    /// decomposition cannot be realized.
    fn rv_fibers(&mut self, base: &SkeletalGroupoid) -> Option<Vec<String>> {
        let n = base.len();
        let max_den = (self.config.max_group_order * self.config.max_group_order) as u64;
        let decompositions: Vec<Vec<u64>> = egyptian(n, max_den).into_iter().filter(|d| d.len() <= n).collect();
        let mut dens: Vec<Option<u64>> = decompositions.choose(&mut self.rng)?.iter().map(|&d| Some(d)).collect();
        dens.resize(n, None);
        dens.shuffle(&mut self.rng);
        base.components()
            .iter()
            .zip(dens)
            .map(|(c, d)| match d {
                Some(d) => self.fiber(&c.aut, Some(d as usize)),
                None => Some("fiber(empty)".to_string()),
            })
            .collect()
    }

    /// Random variables over one shared base; `count` of them.
    fn random_variables(&mut self, count: usize) -> Vec<String> {
        for _ in 0..16 {
            let (text, base) = self.base(1);
            let mut out: Vec<String> = Vec::with_capacity(count);
            for i in 0..count {
                if i > 0 && self.rng.gen_bool(0.25) {
                    out.push(out[0].clone());
                    continue;
                }
                match self.rv_fibers(&base) {
                    Some(f) => out.push(wrap_family(&text, &f)),
                    None => break,
                }
            }
            if out.len() == count {
                return out;
            }
        }
        let g = self.group();
        vec![format!("conj({g})"); count]
    }

    fn probability_groupoid(&mut self) -> String {
        if self.rng.gen_bool(0.5) {
            return format!("Sigma(conj({}))", self.group());
        }
        let dens = egyptian(self.config.max_components, self.config.max_group_order as u64);
        let mut d = dens.choose(&mut self.rng).expect("1 = 1/1").clone();
        d.shuffle(&mut self.rng);
        d.iter()
            .map(|&n| {
                let fitting: Vec<&GroupSpec> = self.groups.iter().filter(|s| spec_order(s) == n as usize).collect();
                match fitting.choose(&mut self.rng) {
                    Some(s) if n > 1 => format!("B({s})"),
                    _ if n == 1 => "pt".to_string(),
                    _ => format!("B(cyclic({n}))"),
                }
            })
            .collect::<Vec<_>>()
            .join(" + ")
    }

    /// Operands for `id`, as DSL expressions.
    fn instance(&mut self, id: IdentityId) -> Vec<String> {
        use IdentityId::*;
        match id {
            CardSum | CardProd => vec![self.groupoid(), self.groupoid()],
            CardFun => {
                let k = self.config.max_components.min(2);
                vec![self.groupoid_with(k, |g| g.group()), self.groupoid_with(k, |g| g.group())]
            }
            OracleFun => {
                let k = self.config.max_components.min(2);
                let tiny = |g: &mut Self| g.small_group(6);
                vec![self.groupoid_with(k, tiny), self.groupoid_with(k, tiny)]
            }
            CardSigma | CardPi => vec![self.family()],
            OracleCard => {
                if self.rng.gen_bool(0.5) {
                    vec![self.groupoid()]
                } else {
                    vec![self.family()]
                }
            }
            DiversityAlgebraic | DiversitySemantic => vec![self.probability_groupoid()],
            RvIdentityConj | RvIdentitySemantic => self.random_variables(1),
            CrossIdentityConj | RelIdentityConj | Gibbs => self.random_variables(2),
            ConjActionUnit => vec![self.group().to_string()],
        }
    }
}

fn wrap_family(base: &str, fibers: &[String]) -> String {
    let mut parts = vec![base.to_string()];
    parts.extend(fibers.iter().cloned());
    format!("family({})", parts.join(", "))
}

fn check_reports(src: &str, budget: &Budget) -> Result<Vec<CheckReport>, SuiteError> {
    let fail = |message: String| SuiteError {
        instance: src.trim().to_string(),
        message,
    };
    let results = evaluate(src, budget, Path::new("."))
        .map_err(|d| fail(d.to_string()))?
        .map_err(|e| fail(e.to_string()))?;
    Ok(results
        .into_iter()
        .filter_map(|r| match r.answer {
            Answer::Check(report) => Some(report),
            _ => None,
        })
        .collect())
}

/// The generated instance sources of one trial, one `check` per identity.
pub fn trial_instances(config: &GenConfig, suite: Suite, trial: usize) -> Vec<String> {
    let mut gen = Gen::new(config, trial);
    suite
        .ids()
        .into_iter()
        .map(|id| format!("check({id}, {});", gen.instance(id).join(", ")))
        .collect()
}

/// One report per trial and identity of `suite`, ordered by trial index.
pub fn run_suite(config: &GenConfig, suite: Suite, budget: &Budget) -> Result<Vec<CheckReport>, SuiteError> {
    config.validate().map_err(|message| SuiteError {
        instance: String::new(),
        message,
    })?;
    let per_trial: Vec<Result<Vec<CheckReport>, SuiteError>> = (0..config.trials)
        .into_par_iter()
        .map(|trial| {
            let mut out = Vec::new();
            for src in trial_instances(config, suite, trial) {
                out.extend(check_reports(&src, budget)?);
            }
            Ok(out)
        })
        .collect();
    let mut reports = Vec::new();
    for r in per_trial {
        reports.extend(r?);
    }
    Ok(reports)
}

/// The curated instances, as `(file name, source)`.
pub fn fixture_sources() -> Vec<(&'static str, &'static str)> {
    vec![
        ("card_fun.hott", include_str!("../../fixtures/card_fun.hott")),
        ("card_pi.hott", include_str!("../../fixtures/card_pi.hott")),
        ("diversity_semantic.hott", include_str!("../../fixtures/diversity_semantic.hott")),
        ("rv_identity_semantic.hott", include_str!("../../fixtures/rv_identity_semantic.hott")),
        ("theorems.hott", include_str!("../../fixtures/theorems.hott")),
    ]
}

pub fn run_fixtures(budget: &Budget) -> Result<Vec<CheckReport>, SuiteError> {
    let mut out = Vec::new();
    for (_, src) in fixture_sources() {
        out.extend(check_reports(src, budget)?);
    }
    Ok(out)
}

#[derive(Clone, Copy, PartialEq, Eq, Default, Debug, Serialize, Deserialize)]
pub struct Tally {
    pub holds: usize,
    pub fails: usize,
    pub infinite: usize,
    pub skipped: usize,
}

/// Verdict counts per identity.
#[derive(Clone, PartialEq, Eq, Default, Debug, Serialize, Deserialize)]
pub struct SuiteSummary {
    pub tallies: BTreeMap<IdentityId, Tally>,
}

impl SuiteSummary {
    pub fn new(reports: &[CheckReport]) -> Self {
        let mut tallies: BTreeMap<IdentityId, Tally> = BTreeMap::new();
        for r in reports {
            let t = tallies.entry(r.id).or_default();
            match r.verdict {
                Verdict::Holds => t.holds += 1,
                Verdict::Fails => t.fails += 1,
                Verdict::Infinite => t.infinite += 1,
                Verdict::Skipped(_) => t.skipped += 1,
            }
        }
        SuiteSummary { tallies }
    }

    pub fn theorem_failures(&self) -> usize {
        self.tallies.iter().filter(|(id, _)| id.is_theorem()).map(|(_, t)| t.fails).sum()
    }

    pub fn get(&self, id: IdentityId) -> Tally {
        self.tallies.get(&id).copied().unwrap_or_default()
    }
}

impl fmt::Display for SuiteSummary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "{:<22} {:<10} {:>6} {:>6} {:>8} {:>7}",
            "identity", "kind", "holds", "fails", "infinite", "skipped"
        )?;
        for (id, t) in &self.tallies {
            let kind = if id.is_theorem() { "theorem" } else { "conjecture" };
            writeln!(
                f,
                "{:<22} {:<10} {:>6} {:>6} {:>8} {:>7}",
                id.name(),
                kind,
                t.holds,
                t.fails,
                t.infinite,
                t.skipped
            )?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn catalog_orders() {
        let b = Budget::default();
        let orders: Vec<usize> = catalog(8).iter().map(|(_, s)| s.build(&b).unwrap().order()).collect();
        assert_eq!(orders, vec![1, 2, 3, 4, 4, 5, 6, 6, 7, 8, 8, 8]);
        let q8 = GroupSpec::Table(q8_rows()).build(&b).unwrap();
        assert!(!q8.is_abelian());
        assert_eq!(q8.center_elements().len(), 2);
        assert_eq!(q8.elements().filter(|&x| q8.element_order(x) == 4).count(), 6);
        assert_eq!(catalog(3).len(), 3);
    }

    #[test]
    fn egyptian_decompositions() {
        let all = egyptian(3, 6);
        assert!(all.contains(&vec![1]));
        assert!(all.contains(&vec![2, 2]));
        assert!(all.contains(&vec![2, 3, 6]));
        assert!(all.contains(&vec![3, 3, 3]));
        assert!(!all.iter().any(|d| d.iter().any(|&a| a > 6)));
        for d in &all {
            let sum: crate::arith::Rational = d.iter().map(|&a| crate::arith::Rational::new(1, a as i64)).sum();
            assert!(sum.is_one());
        }
    }

    #[test]
    fn generated_instances_parse_and_evaluate() {
        let config = GenConfig {
            trials: 6,
            ..GenConfig::default()
        };
        let reports = run_suite(&config, Suite::All, &Budget::default()).unwrap();
        assert_eq!(reports.len(), 6 * IdentityId::ALL.len());
        let again = run_suite(&config, Suite::All, &Budget::default()).unwrap();
        assert_eq!(reports, again);
    }

    #[test]
    fn suite_parsing() {
        assert_eq!("theorems".parse::<Suite>(), Ok(Suite::Theorems));
        assert!("some".parse::<Suite>().is_err());
        assert!(GenConfig {
            trials: 0,
            ..GenConfig::default()
        }
        .validate()
        .is_err());
    }
}
