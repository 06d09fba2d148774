//! Derived values checked against references computed here from scratch.

use std::path::Path;

use num_integer::Integer;

use hocard::arith::Rational;
use hocard::checker::catalog;
use hocard::checker::oracle::naive_homomorphisms;
use hocard::dsl::{evaluate, Answer};
use hocard::group::{enumerate_homomorphisms, hom_classes, FiniteGroup, GroupSpec};
use hocard::groupoid::{dependent_product_cardinality, functor_groupoid, DependentGroupoid, FullGroupoid, SkeletalGroupoid};
use hocard::Budget;

fn b() -> Budget {
    Budget::default()
}

fn eval_one(src: &str) -> Answer {
    let mut r = evaluate(src, &b(), Path::new("."))
        .unwrap_or_else(|d| panic!("{d}"))
        .unwrap_or_else(|e| panic!("{e}"));
    assert_eq!(r.len(), 1);
    r.remove(0).answer
}

fn card(src: &str) -> Rational {
    match eval_one(&format!("card({src});")) {
        Answer::Cardinality(q) => q,
        other => panic!("{other:?}"),
    }
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for i in 0..n {
            let mut q = p.clone();
            q.insert(i, n - 1);
            out.push(q);
        }
    }
    out
}

fn compose(a: &[usize], b: &[usize]) -> Vec<usize> {
    b.iter().map(|&i| a[i]).collect()
}

#[test]
fn s3_class_masses_from_raw_permutations() {
    // p(class of x) = |class| / |G| = 1 / |centralizer of x|.
    let g = permutations(3);
    let mut masses: Vec<Rational> = Vec::new();
    let mut seen: Vec<Vec<usize>> = Vec::new();
    for x in &g {
        if seen.contains(x) {
            continue;
        }
        let centralizer = g.iter().filter(|y| compose(x, y) == compose(y, x)).count();
        for y in &g {
            let mut y_inv = vec![0; 3];
            for (i, &v) in y.iter().enumerate() {
                y_inv[v] = i;
            }
            let c = compose(&compose(y, x), &y_inv);
            if !seen.contains(&c) {
                seen.push(c);
            }
        }
        masses.push(Rational::new(1, centralizer as i64));
    }
    masses.sort();
    let Answer::Distribution(p) = eval_one("dist(Sigma(conj(sym(3))));") else { panic!() };
    let mut got: Vec<Rational> = p.masses().cloned().collect();
    got.sort();
    assert_eq!(got, masses);
    assert_eq!(masses, vec![Rational::new(1, 6), Rational::new(1, 3), Rational::new(1, 2)]);
}

#[test]
fn cyclic_hom_counts_are_gcds() {
    for m in 1..=8 {
        for n in 1..=8 {
            let zm = FiniteGroup::cyclic(m, &b()).unwrap();
            let zn = FiniteGroup::cyclic(n, &b()).unwrap();
            let homs = enumerate_homomorphisms(&zm, &zn, &b()).unwrap();
            assert_eq!(homs.len(), m.gcd(&n), "Hom(Z{m}, Z{n})");
        }
    }
}

#[test]
fn hom_counts_match_exhaustive_maps() {
    let s3 = FiniteGroup::symmetric(3, &b()).unwrap();
    assert_eq!(enumerate_homomorphisms(&s3, &s3, &b()).unwrap().len(), 10);
    let groups: Vec<(String, FiniteGroup)> =
        catalog(6).into_iter().map(|(name, spec)| (name, spec.build(&b()).unwrap())).collect();
    for (gn, g) in &groups {
        for (hn, h) in &groups {
            let fast = enumerate_homomorphisms(g, h, &b()).unwrap();
            let slow = naive_homomorphisms(g, h, &b()).unwrap();
            let mut fast: Vec<Vec<usize>> = fast.iter().map(|f| f.image().to_vec()).collect();
            fast.sort();
            assert_eq!(fast, slow, "Hom({gn}, {hn})");
        }
    }
}

#[test]
fn functor_cardinality_is_hom_count_over_target_order() {
    // Fun(BG, BH) is the action groupoid Hom(G, H) // H.
    let groups: Vec<(String, FiniteGroup)> =
        catalog(7).into_iter().map(|(name, spec)| (name, spec.build(&b()).unwrap())).collect();
    for (gn, g) in &groups {
        for (hn, h) in &groups {
            let homs = naive_homomorphisms(g, h, &b()).unwrap().len();
            let fun = functor_groupoid(
                &SkeletalGroupoid::classifying(g.clone()),
                &SkeletalGroupoid::classifying(h.clone()),
                &b(),
            )
            .unwrap();
            assert_eq!(fun.cardinality(), Rational::new(homs as i64, h.order() as i64), "Fun(B {gn}, B {hn})");
            assert_eq!(fun.len(), hom_classes(g, h, &b()).unwrap().len());
        }
    }
}

#[test]
fn cyclic_functor_cardinality() {
    for m in 1..=6 {
        for n in 1..=6 {
            let q = card(&format!("Fun(B(cyclic({m})), B(cyclic({n})))"));
            assert_eq!(q, Rational::new(m.gcd(&n) as i64, n as i64), "m = {m}, n = {n}");
        }
    }
}

#[test]
fn class_counts_and_element_orders() {
    let expect: &[(&str, usize, &[usize])] = &[
        // name, classes, number of elements of order 1, 2, 3, 4, ...
        ("S3", 3, &[1, 3, 2]),
        ("D4", 5, &[1, 5, 0, 2]),
        ("Q8", 5, &[1, 1, 0, 6]),
        ("Klein", 4, &[1, 3]),
        ("Z6", 6, &[1, 1, 2, 0, 0, 2]),
    ];
    let groups = catalog(8);
    for &(name, classes, orders) in expect {
        let spec = &groups.iter().find(|(n, _)| n == name).unwrap().1;
        let g = spec.build(&b()).unwrap();
        assert_eq!(g.conjugacy_classes().len(), classes, "{name}");
        let mut counts = vec![0usize; orders.len()];
        for x in g.elements() {
            counts[g.element_order(x) - 1] += 1;
        }
        assert_eq!(counts, orders, "{name}");
        // One component per class.
        let Answer::Distribution(p) = eval_one(&format!("dist(Sigma(conj({spec})));")) else { panic!() };
        assert_eq!(p.len(), classes, "{name}");
    }
    assert_eq!(FiniteGroup::symmetric(4, &b()).unwrap().conjugacy_classes().len(), 5);
}

#[test]
fn counterexample_values() {
    // |Fun(BZ2, BZ2)| = |Hom(Z2, Z2)| / 2 = 1, while |BZ2|^|BZ2| = 2^(-1/2).
    assert_eq!(card("Fun(B(cyclic(2)), B(cyclic(2)))"), Rational::one());
    let half: f64 = 0.5;
    assert!((half.powf(half) - 2f64.powf(-0.5)).abs() < 1e-15);

    let z2 = || SkeletalGroupoid::classifying(FiniteGroup::cyclic(2, &b()).unwrap());
    let two = FullGroupoid::from_skeletal(&SkeletalGroupoid::set(2));
    // A trivial action on a discrete fiber fixes every point: Π = 2.
    let constant = DependentGroupoid::constant(&z2(), &two);
    assert_eq!(dependent_product_cardinality(&constant, &b()).unwrap(), Rational::from_integer(2));

    // Loops over BZ2 + BZ2: each component contributes its two loops.
    let x = z2().sum(&z2());
    let loops = DependentGroupoid::loop_family(&x);
    assert_eq!(dependent_product_cardinality(&loops, &b()).unwrap(), Rational::from_integer(4));
    assert_eq!(x.cardinality(), Rational::one());
}

#[test]
fn product_groups_have_product_orders() {
    let spec = GroupSpec::Product(Box::new(GroupSpec::Symmetric(3)), Box::new(GroupSpec::Cyclic(4)));
    let g = spec.build(&b()).unwrap();
    assert_eq!(g.order(), 24);
    assert_eq!(g.conjugacy_classes().len(), 12);
}
