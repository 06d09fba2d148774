//! One line per acceptance criterion. Runs without the libtest harness so
//! the lines are printed on every run, not only on failure.

use std::panic;
use std::path::Path;
use std::process::Command;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use hocard::arith::{ExactLog, ExtendedLog, ExtendedValue, PowerProduct, Rational};
use hocard::checker::oracle::naive_functor_cardinality;
use hocard::checker::{catalog, run_fixtures, run_suite, ExactValue, GenConfig, IdentityId, Suite, SuiteSummary, Verdict};
use hocard::dsl::{evaluate, parse, parse_bytes, pretty, Answer};
use hocard::group::GroupSpec;
use hocard::groupoid::{functor_groupoid, FullGroupoid, SkeletalGroupoid};
use hocard::info::{relative_diversity, relative_entropy, Distribution};
use hocard::Budget;

const APPROX_TOL: f64 = 1e-9;
const THEOREM_LIMIT: Duration = Duration::from_secs(120);
const ORACLE_LIMIT: Duration = Duration::from_secs(60);
const FUZZ_INPUTS: usize = 100_000;

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn pp(factors: &[(u64, (i64, i64))]) -> PowerProduct {
    PowerProduct::from_factors(factors.iter().map(|&(p, (n, d))| (p, Rational::new(n, d)))).unwrap()
}

fn answers(src: &str) -> Vec<Answer> {
    evaluate(src, &Budget::default(), Path::new("."))
        .unwrap_or_else(|d| panic!("{d}"))
        .unwrap_or_else(|e| panic!("{e}"))
        .into_iter()
        .map(|r| r.answer)
        .collect()
}

fn theorem_suite() -> Outcome {
    let config = GenConfig {
        seed: 7,
        trials: 200,
        max_group_order: 8,
        ..GenConfig::default()
    };
    let start = Instant::now();
    let reports = run_suite(&config, Suite::Theorems, &Budget::default()).map_err(|e| e.to_string())?;
    let elapsed = start.elapsed();
    let summary = SuiteSummary::new(&reports);
    use IdentityId::*;
    let listed = [
        CardSum,
        CardProd,
        CardSigma,
        DiversityAlgebraic,
        RvIdentityConj,
        CrossIdentityConj,
        RelIdentityConj,
        Gibbs,
        ConjActionUnit,
        OracleCard,
        OracleFun,
    ];
    let mut skipped = 0;
    for id in listed {
        let t = summary.get(id);
        ensure(t.fails == 0, || format!("{id}: {} failures", t.fails))?;
        ensure(t.holds + t.infinite + t.skipped == 200, || format!("{id}: {t:?} does not cover 200 trials"))?;
        ensure(t.holds > 0, || format!("{id}: no instance held"))?;
        skipped += t.skipped;
    }
    ensure(elapsed < THEOREM_LIMIT, || format!("took {elapsed:?}"))?;
    Ok(format!(
        "{} reports, 0 failures, {skipped} skipped on budget, {:.2?}",
        reports.len(),
        elapsed
    ))
}

fn counterexamples() -> Outcome {
    let reports = run_fixtures(&Budget::default()).map_err(|e| e.to_string())?;
    let find = |dsl: &str| reports.iter().find(|r| r.instance_dsl == dsl).ok_or_else(|| format!("no fixture `{dsl}`"));
    let expect = |dsl: &str, lhs: ExactValue, rhs: ExactValue| -> Result<(), String> {
        let r = find(dsl)?;
        ensure(r.verdict == Verdict::Fails, || format!("{dsl}: verdict {}", r.verdict))?;
        ensure(r.lhs.as_ref() == Some(&lhs), || format!("{dsl}: lhs {:?}", r.lhs))?;
        ensure(r.rhs.as_ref() == Some(&rhs), || format!("{dsl}: rhs {:?}", r.rhs))
    };
    expect(
        "check(CARD_FUN, B(cyclic(2)), B(cyclic(2)));",
        ExactValue::Rational(Rational::one()),
        ExactValue::Extended(ExtendedValue::Finite(pp(&[(2, (-1, 2))]))),
    )?;
    expect(
        "check(CARD_PI, family(B(cyclic(2)), fiber(set(2))));",
        ExactValue::Rational(Rational::from_integer(2)),
        ExactValue::Extended(ExtendedValue::Finite(pp(&[(2, (1, 2))]))),
    )?;
    expect(
        "check(DIVERSITY_SEMANTIC, B(cyclic(2)) + B(cyclic(2)));",
        ExactValue::Rational(Rational::from_integer(4)),
        ExactValue::PowerProduct(pp(&[(2, (1, 1))])),
    )?;
    // The same three through the command line, which must still exit 0.
    let out = Command::new(env!("CARGO_BIN_EXE_hocard"))
        .args(["check", "--suite", "conjectures", "--trials", "3", "--seed", "7", "--format", "json"])
        .output()
        .map_err(|e| e.to_string())?;
    ensure(out.status.code() == Some(0), || format!("exit {:?}", out.status.code()))?;
    let doc: serde_json::Value = serde_json::from_slice(&out.stdout).map_err(|e| e.to_string())?;
    let wanted = [
        "check(CARD_FUN, B(cyclic(2)), B(cyclic(2)));",
        "check(CARD_PI, family(B(cyclic(2)), fiber(set(2))));",
        "check(DIVERSITY_SEMANTIC, B(cyclic(2)) + B(cyclic(2)));",
    ];
    let reports = doc["reports"].as_array().ok_or("no reports array")?;
    let fails = wanted
        .iter()
        .filter(|w| reports.iter().any(|r| r["verdict"]["status"] == "fails" && r["instance_dsl"] == **w))
        .count();
    ensure(fails == 3, || format!("{fails} of the 3 counterexamples in the CLI run"))?;
    Ok("CARD_FUN 1 vs 2^(-1/2), CARD_PI 2 vs 2^(1/2), DIVERSITY_SEMANTIC 4 vs 2; CLI exit 0".into())
}

fn s3_pipeline() -> Outcome {
    let a = answers("let P = conj(sym(3)); entropy(Sigma(P)); diversity(Sigma(P)); dist(Sigma(P));");
    let expected = pp(&[(2, (2, 3)), (3, (1, 2))]);
    let log: ExactLog = expected.log2();
    // Independent float references.
    let h_ref = 2.0 / 3.0 + 0.5 * 3f64.log2();
    let d_ref = 2f64.powf(2.0 / 3.0) * 3f64.sqrt();
    let Answer::Entropy(r) = &a[0] else { return Err("entropy query gave another answer".into()) };
    ensure(r.entropy.terms == log, || format!("entropy {}", r.entropy.terms))?;
    ensure(r.entropy.terms.terms().len() == 2, || "entropy has extra terms".into())?;
    ensure((r.entropy.approx - h_ref).abs() < APPROX_TOL, || format!("entropy approx {}", r.entropy.approx))?;
    ensure((r.entropy.approx - 1.4591).abs() < 1e-4, || "entropy is not about 1.4591".into())?;
    let Answer::Diversity(d) = &a[1] else { return Err("diversity query gave another answer".into()) };
    ensure(d.factors == expected, || format!("diversity {}", d.factors))?;
    ensure((d.approx - d_ref).abs() < APPROX_TOL, || format!("diversity approx {}", d.approx))?;
    ensure((d.approx - 2.7495).abs() < 1e-4, || "diversity is not about 2.7495".into())?;
    let Answer::Distribution(p) = &a[2] else { return Err("dist query gave another answer".into()) };
    let mut masses: Vec<Rational> = p.masses().cloned().collect();
    masses.sort();
    let want = vec![Rational::new(1, 6), Rational::new(1, 3), Rational::new(1, 2)];
    ensure(masses == want, || format!("distribution {p}"))?;
    Ok(format!("H = {} ≈ {:.10}, 2^H = {} ≈ {:.10}, p = {p}", r.entropy.terms, r.entropy.approx, d.factors, d.approx))
}

fn unit_cardinality() -> Outcome {
    let groups = catalog(8);
    for (name, spec) in &groups {
        let a = answers(&format!("card(Sigma(conj({spec})));"));
        ensure(a == vec![Answer::Cardinality(Rational::one())], || format!("{name}: {a:?}"))?;
    }
    Ok(format!("{} catalog groups, all exactly 1", groups.len()))
}

fn oracle_equivalence() -> Outcome {
    let b = Budget::default();
    let c2 = || Box::new(GroupSpec::Cyclic(2));
    let specs = [
        GroupSpec::Cyclic(1),
        GroupSpec::Cyclic(2),
        GroupSpec::Cyclic(3),
        GroupSpec::Cyclic(4),
        GroupSpec::Product(c2(), c2()),
        GroupSpec::Symmetric(3),
    ];
    let groupoids: Vec<SkeletalGroupoid> = specs
        .iter()
        .map(|s| SkeletalGroupoid::classifying(s.build(&b).unwrap()))
        .collect();
    let start = Instant::now();
    let mut pairs = 0;
    for (x, sx) in groupoids.iter().zip(&specs) {
        for (y, sy) in groupoids.iter().zip(&specs) {
            let skeletal = functor_groupoid(x, y, &b).map_err(|e| e.to_string())?.cardinality();
            let naive = naive_functor_cardinality(&FullGroupoid::from_skeletal(x), &FullGroupoid::from_skeletal(y), &b)
                .map_err(|e| e.to_string())?
                .cardinality;
            ensure(skeletal == naive, || format!("Fun(B {sx}, B {sy}): {skeletal} vs {naive}"))?;
            pairs += 1;
        }
    }
    let elapsed = start.elapsed();
    ensure(elapsed < ORACLE_LIMIT, || format!("took {elapsed:?}"))?;
    Ok(format!("{pairs} ordered pairs agree exactly, {elapsed:.2?}"))
}

fn random_distribution(rng: &mut ChaCha8Rng, n: usize) -> Distribution {
    let weights: Vec<i64> = (0..n).map(|_| rng.gen_range(0..=6)).collect();
    let weights = if weights.iter().all(|&w| w == 0) { vec![1; n] } else { weights };
    let total: i64 = weights.iter().sum();
    Distribution::new(
        weights
            .iter()
            .enumerate()
            .map(|(i, &w)| (format!("x{i}"), Rational::new(w, total)))
            .collect(),
    )
    .unwrap()
}

fn relative_entropy_behavior() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let (mut equal, mut infinite) = (0, 0);
    for _ in 0..100 {
        let n = rng.gen_range(1..=5);
        let p = random_distribution(&mut rng, n);
        let q = if rng.gen_bool(0.2) { p.clone() } else { random_distribution(&mut rng, n) };
        let d = relative_entropy(&p, &q).map_err(|e| e.to_string())?;
        let ratio = relative_diversity(&p, &q).map_err(|e| e.to_string())?;
        let nonnegative = match &d {
            ExtendedLog::Infinite => {
                infinite += 1;
                true
            }
            ExtendedLog::Finite(l) => l.signum().map_err(|e| e.to_string())? != std::cmp::Ordering::Less,
        };
        ensure(nonnegative, || format!("D({p} || {q}) = {d} is negative"))?;
        let zero = ratio == ExtendedValue::one();
        ensure(zero == (p == q), || format!("2^D = {ratio} for p = {p}, q = {q}"))?;
        ensure((d == ExtendedLog::Finite(ExactLog::zero())) == (p == q), || format!("D = {d} for p = {p}, q = {q}"))?;
        equal += usize::from(p == q);
    }
    let half = Rational::new(1, 2);
    let p = Distribution::new(vec![("a".into(), half.clone()), ("b".into(), half)]).unwrap();
    let q = Distribution::new(vec![("a".into(), Rational::new(1, 4)), ("b".into(), Rational::new(3, 4))]).unwrap();
    let d = relative_entropy(&p, &q).map_err(|e| e.to_string())?;
    let want = pp(&[(2, (1, 1)), (3, (-1, 2))]).log2();
    ensure(d == ExtendedLog::Finite(want), || format!("worked pair gives {d}"))?;
    Ok(format!("100 pairs ({equal} equal, {infinite} infinite), worked pair D = {d}"))
}

fn fuzz_input(rng: &mut ChaCha8Rng) -> Vec<u8> {
    const WORDS: &[&str] = &[
        "let", "card", "entropy", "dist", "relent", "check", "B", "cyclic", "sym", "family", "fiber", "act", "Sigma",
        "conj", "const", "Fun", "set", "pt", "(", ")", "[", "]", ",", ";", "=", "+", "*", "\"", "//", "7", "x", "\n",
        "CARD_FUN", "18446744073709551616", "é",
    ];
    let len = rng.gen_range(0..48);
    if rng.gen_bool(0.5) {
        (0..len).map(|_| rng.gen()).collect()
    } else {
        (0..len)
            .flat_map(|_| WORDS[rng.gen_range(0..WORDS.len())].bytes().chain(std::iter::once(b' ')))
            .collect()
    }
}

fn parser_robustness() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(77);
    let mut errors = 0;
    for i in 0..FUZZ_INPUTS {
        let input = fuzz_input(&mut rng);
        let result = panic::catch_unwind(|| parse_bytes(&input)).map_err(|_| format!("input {i} {input:?} panicked"))?;
        if let Err(d) = result {
            errors += 1;
            ensure(d.span.start <= d.span.end && d.span.end <= input.len().max(d.span.start), || {
                format!("input {i}: bad span {:?}", d.span)
            })?;
            ensure(d.line >= 1 && d.column >= 1, || format!("input {i}: bad position"))?;
        }
    }
    let mut files = 0;
    for (name, src) in hocard::checker::fixture_sources() {
        let a = parse(src).map_err(|d| format!("{name}: {d}"))?;
        let text = pretty(&a);
        let b = parse(&text).map_err(|d| format!("{name} reprinted: {d}"))?;
        ensure(a.without_spans() == b.without_spans(), || format!("{name} changes on round trip"))?;
        ensure(pretty(&b) == text, || format!("{name} printing is not stable"))?;
        files += 1;
    }
    Ok(format!("{FUZZ_INPUTS} inputs, {errors} diagnostics, no panics; {files} fixture files round-trip"))
}

fn main() {
    panic::set_hook(Box::new(|_| {}));
    let criteria: [(&str, fn() -> Outcome); 7] = [
        ("theorem suite", theorem_suite),
        ("counterexample reproduction", counterexamples),
        ("S3 conjugation pipeline", s3_pipeline),
        ("unit cardinality of conjugation groupoids", unit_cardinality),
        ("oracle equivalence", oracle_equivalence),
        ("relative entropy behavior", relative_entropy_behavior),
        ("parser robustness", parser_robustness),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let outcome = panic::catch_unwind(run).unwrap_or_else(|e| {
            Err(e
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "panicked".into()))
        });
        match outcome {
            Ok(detail) => println!("criterion {}: PASS {name}: {detail}", i + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {}: FAIL {name}: {why}", i + 1);
            }
        }
    }
    if failed > 0 {
        std::process::exit(1);
    }
}
