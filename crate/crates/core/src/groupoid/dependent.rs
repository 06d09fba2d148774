use std::collections::HashMap;

use super::full::{Checks, FullGroupoid, Functor};
use super::skeletal::{canonical_order, Component, SkeletalGroupoid};
use crate::arith::Rational;
use crate::budget::Budget;
use crate::error::{Error, Result};
use crate::group::FiniteGroup;

/// The fiber over one base component: a groupoid with a strict action of
/// the component's automorphism group.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Fiber {
    label: String,
    group: FiniteGroup,
    fiber: FullGroupoid,
    action: Vec<Functor>,
}

impl Fiber {
    /// `action[g]` is the automorphism by which `g` acts. Checked to be a
    /// strict homomorphism into the automorphisms of `fiber`.
    pub fn new(label: impl Into<String>, group: FiniteGroup, fiber: FullGroupoid, action: Vec<Functor>) -> Result<Self> {
        let f = Fiber {
            label: label.into(),
            group,
            fiber,
            action,
        };
        f.check(true)?;
        Ok(f)
    }

    /// Construction whose functoriality follows from its inputs; only the
    /// homomorphism law and bijectivity are rechecked.
    pub(crate) fn assume_functorial(
        label: impl Into<String>,
        group: FiniteGroup,
        fiber: FullGroupoid,
        action: Vec<Functor>,
    ) -> Result<Self> {
        let f = Fiber {
            label: label.into(),
            group,
            fiber,
            action,
        };
        f.check(false)?;
        Ok(f)
    }

    pub fn trivial(label: impl Into<String>, group: FiniteGroup, fiber: FullGroupoid) -> Self {
        let id = Functor::identity(&fiber);
        let action = vec![id; group.order()];
        Fiber {
            label: label.into(),
            group,
            fiber,
            action,
        }
    }

    /// Extends automorphisms given for the group's generators (in the
    /// order of [`FiniteGroup::generators`]) to the whole group.
    pub fn from_generator_images(
        label: impl Into<String>,
        group: FiniteGroup,
        fiber: FullGroupoid,
        images: Vec<Functor>,
    ) -> Result<Self> {
        if images.len() != group.generators().len() {
            return Err(Error::InvalidAction(format!(
                "group has {} generators but {} images were given",
                group.generators().len(),
                images.len()
            )));
        }
        for (k, img) in images.iter().enumerate() {
            img.check(&fiber, &fiber)
                .map_err(|e| Error::InvalidAction(format!("generator image {k}: {e}")))?;
            if !img.is_bijective() {
                return Err(Error::InvalidAction(format!("generator image {k} is not invertible")));
            }
        }
        let action = group.extend_along_words(Functor::identity(&fiber), |parent, _, pos| {
            parent.after(&images[pos])
        });
        let f = Fiber {
            label: label.into(),
            group,
            fiber,
            action,
        };
        for (pos, &s) in f.group.generators().iter().enumerate() {
            for x in f.group.elements() {
                if f.action[f.group.mul(x, s)] != f.action[x].after(&images[pos]) {
                    return Err(Error::InvalidAction(format!(
                        "generator images violate a relation of the group (at element {x}, generator {s})"
                    )));
                }
            }
        }
        f.check(false)?;
        Ok(f)
    }

    fn check(&self, functoriality: bool) -> Result<()> {
        let g = &self.group;
        if self.action.len() != g.order() {
            return Err(Error::InvalidAction(format!(
                "{} automorphisms given for a group of order {}",
                self.action.len(),
                g.order()
            )));
        }
        for (x, a) in self.action.iter().enumerate() {
            a.check_shape(&self.fiber, &self.fiber)
                .map_err(|e| Error::InvalidAction(format!("element {x}: {e}")))?;
            if functoriality {
                a.check(&self.fiber, &self.fiber)
                    .map_err(|e| Error::InvalidAction(format!("element {x}: {e}")))?;
            }
            if !a.is_bijective() {
                return Err(Error::InvalidAction(format!("element {x} does not act invertibly")));
            }
        }
        if self.action[g.identity()] != Functor::identity(&self.fiber) {
            return Err(Error::InvalidAction("the identity element does not act trivially".into()));
        }
        for x in g.elements() {
            for y in g.elements() {
                if self.action[g.mul(x, y)] != self.action[x].after(&self.action[y]) {
                    return Err(Error::InvalidAction(format!(
                        "action is not a homomorphism at ({x}, {y})"
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn group(&self) -> &FiniteGroup {
        &self.group
    }

    pub fn fiber(&self) -> &FullGroupoid {
        &self.fiber
    }

    pub fn action(&self, g: usize) -> &Functor {
        &self.action[g]
    }

    /// Objects moved to `g·u`.
    #[inline]
    pub fn act_object(&self, g: usize, u: usize) -> usize {
        self.action[g].objects[u]
    }

    #[inline]
    pub fn act_morphism(&self, g: usize, m: usize) -> usize {
        self.action[g].morphisms[m]
    }
}

/// A family of groupoids over a skeletal base: one fiber per component.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct DependentGroupoid {
    fibers: Vec<Fiber>,
    base: SkeletalGroupoid,
}

impl DependentGroupoid {
    /// Fibers are put into the base's canonical component order.
    pub fn new(mut fibers: Vec<Fiber>) -> Result<Self> {
        fibers.sort_by(|a, b| canonical_order((&a.label, &a.group), (&b.label, &b.group)));
        let base = SkeletalGroupoid::new(
            fibers
                .iter()
                .map(|f| Component::new(f.label.clone(), f.group.clone()))
                .collect(),
        )?;
        Ok(DependentGroupoid { fibers, base })
    }

    pub fn base(&self) -> &SkeletalGroupoid {
        &self.base
    }

    pub fn fibers(&self) -> &[Fiber] {
        &self.fibers
    }

    /// `|P_x|` for every base component, in base order.
    pub fn fiber_cardinalities(&self) -> Vec<Rational> {
        self.fibers.iter().map(|f| f.fiber.cardinality()).collect()
    }

    /// Whether `other` lives over the same base (labels and groups).
    pub fn same_base(&self, other: &DependentGroupoid) -> bool {
        self.base == other.base
    }

    /// The constant family with fiber `y` and trivial actions.
    pub fn constant(x: &SkeletalGroupoid, y: &FullGroupoid) -> Self {
        DependentGroupoid {
            fibers: x
                .components()
                .iter()
                .map(|c| Fiber::trivial(c.label.clone(), c.aut.clone(), y.clone()))
                .collect(),
            base: x.clone(),
        }
    }

    /// Fiber over a component with group `G` is the discrete groupoid on the
    /// elements of `G`, acted on by conjugation.
    pub fn loop_family(x: &SkeletalGroupoid) -> Self {
        let fibers = x
            .components()
            .iter()
            .map(|c| {
                let g = &c.aut;
                let fiber = FullGroupoid::discrete(g.elements().map(|h| h.to_string()).collect());
                let action = g
                    .elements()
                    .map(|k| {
                        let map: Vec<usize> = g.elements().map(|h| g.conjugate(k, h)).collect();
                        Functor {
                            objects: map.clone(),
                            morphisms: map,
                        }
                    })
                    .collect();
                Fiber {
                    label: c.label.clone(),
                    group: g.clone(),
                    fiber,
                    action,
                }
            })
            .collect();
        DependentGroupoid {
            fibers,
            base: x.clone(),
        }
    }

    /// Left translation of each component group on its own elements.
    pub fn translation_family(x: &SkeletalGroupoid) -> Self {
        let fibers = x
            .components()
            .iter()
            .map(|c| {
                let g = &c.aut;
                let fiber = FullGroupoid::discrete(g.elements().map(|h| h.to_string()).collect());
                let action = g
                    .elements()
                    .map(|k| {
                        let map: Vec<usize> = g.elements().map(|h| g.mul(k, h)).collect();
                        Functor {
                            objects: map.clone(),
                            morphisms: map,
                        }
                    })
                    .collect();
                Fiber {
                    label: c.label.clone(),
                    group: g.clone(),
                    fiber,
                    action,
                }
            })
            .collect();
        DependentGroupoid {
            fibers,
            base: x.clone(),
        }
    }
}

/// The total groupoid `Σ_x P_x` (Grothendieck construction).
///
/// Over a component with group `G`, objects are the fiber objects `u`; a
/// morphism `u → u'` is a pair `(g, m)` with `m : g·u → u'`, and
/// `(g', m') ∘ (g, m) = (g'g, m' ∘ g'·m)`.
pub fn grothendieck_sum(p: &DependentGroupoid, budget: &Budget) -> Result<FullGroupoid> {
    let object_total: usize = p.fibers.iter().map(|f| f.fiber.object_count()).sum();
    if object_total > budget.max_objects {
        return Err(Error::resource("total groupoid objects", object_total, budget.max_objects));
    }
    let morphism_total: u64 = p
        .fibers
        .iter()
        .map(|f| f.group.order() as u64 * f.fiber.morphism_count() as u64)
        .sum();
    if morphism_total > budget.max_candidates {
        return Err(Error::resource("total groupoid morphisms", morphism_total, budget.max_candidates));
    }
    let mut objects = Vec::with_capacity(object_total);
    let mut ends = Vec::with_capacity(morphism_total as usize);
    let mut identity = Vec::with_capacity(object_total);
    // Per morphism: (fiber index, group element, fiber morphism).
    let mut parts = Vec::with_capacity(morphism_total as usize);
    let mut object_offset = Vec::new();
    let mut morphism_offset = Vec::new();
    for (x, f) in p.fibers.iter().enumerate() {
        let (g, fib) = (&f.group, &f.fiber);
        let o_off = objects.len();
        object_offset.push(o_off);
        morphism_offset.push(ends.len());
        for u in 0..fib.object_count() {
            objects.push(format!("({},{})", f.label, fib.label(u)));
        }
        for k in g.elements() {
            let kinv = g.inv(k);
            for m in 0..fib.morphism_count() {
                let u = f.act_object(kinv, fib.source(m));
                ends.push((o_off + u, o_off + fib.target(m)));
                parts.push((x, k, m));
            }
        }
        for u in 0..fib.object_count() {
            identity.push(ends.len() - g.order() * fib.morphism_count() + g.identity() * fib.morphism_count() + fib.identity(u));
        }
    }
    FullGroupoid::assemble(
        objects,
        ends,
        identity,
        |second, first| {
            let (x, k1, m1) = parts[first];
            let (_, k2, m2) = parts[second];
            let f = &p.fibers[x];
            let k = f.group.mul(k2, k1);
            let m = f.fiber.compose(m2, f.act_morphism(k2, m1));
            Ok(morphism_offset[x] + k * f.fiber.morphism_count() + m)
        },
        Checks::Structural,
        budget,
    )
}

/// Homotopy fixed points of one fiber: objects `(u, η)` with
/// `η_g : g·u → u`, `η_gh = η_g ∘ g·η_h`; morphisms are fiber morphisms
/// `f : u → u'` with `f ∘ η_g = η'_g ∘ g·f`.
pub fn homotopy_fixed_points(fiber: &Fiber, budget: &Budget) -> Result<FullGroupoid> {
    let g = &fiber.group;
    let fib = &fiber.fiber;
    let gens = g.generators();
    let mut candidates_total: u64 = 0;
    for u in 0..fib.object_count() {
        let per_object = gens.iter().try_fold(1u64, |acc, &s| {
            acc.checked_mul(fib.hom(fiber.act_object(s, u), u).len() as u64)
        });
        candidates_total = per_object
            .and_then(|c| candidates_total.checked_add(c))
            .unwrap_or(u64::MAX);
    }
    if candidates_total > budget.max_candidates {
        return Err(Error::resource("cocycle candidates", candidates_total, budget.max_candidates));
    }

    let mut objects: Vec<(usize, Vec<usize>)> = Vec::new();
    for u in 0..fib.object_count() {
        let lists: Vec<&[usize]> = gens.iter().map(|&s| fib.hom(fiber.act_object(s, u), u)).collect();
        if lists.iter().any(|l| l.is_empty()) {
            continue;
        }
        let mut choice = vec![0usize; gens.len()];
        'assignments: loop {
            let picked: Vec<usize> = choice.iter().zip(&lists).map(|(&c, l)| l[c]).collect();
            let eta = g.extend_along_words(fib.identity(u), |&parent, parent_elem, pos| {
                fib.compose(parent, fiber.act_morphism(parent_elem, picked[pos]))
            });
            let generator_consistent = g.elements().all(|x| {
                gens.iter().zip(&picked).all(|(&s, &es)| {
                    eta[g.mul(x, s)] == fib.compose(eta[x], fiber.act_morphism(x, es))
                })
            });
            if generator_consistent {
                debug_assert!(g.elements().all(|x| g.elements().all(|y| {
                    eta[g.mul(x, y)] == fib.compose(eta[x], fiber.act_morphism(x, eta[y]))
                })));
                objects.push((u, eta));
                if objects.len() > budget.max_objects {
                    return Err(Error::resource("fixed-point objects", objects.len(), budget.max_objects));
                }
            }
            let mut i = choice.len();
            loop {
                if i == 0 {
                    break 'assignments;
                }
                i -= 1;
                choice[i] += 1;
                if choice[i] < lists[i].len() {
                    break;
                }
                choice[i] = 0;
            }
        }
    }

    let index: HashMap<(usize, &[usize]), usize> = objects
        .iter()
        .enumerate()
        .map(|(i, (u, eta))| ((*u, eta.as_slice()), i))
        .collect();
    let gen_positions: Vec<usize> = gens.to_vec();
    let labels: Vec<String> = objects
        .iter()
        .map(|(u, eta)| {
            let on_gens: Vec<String> = gen_positions.iter().map(|&s| eta[s].to_string()).collect();
            format!("{}@[{}]", fib.label(*u), on_gens.join(","))
        })
        .collect();

    // Morphisms out of (u, η) correspond to all f : u → u'; the target
    // cocycle is forced to be f ∘ η_g ∘ (g·f)⁻¹.
    let mut ends = Vec::new();
    let mut underlying = Vec::new();
    let mut morphism_index: HashMap<(usize, usize), usize> = HashMap::new();
    for (a, (u, eta)) in objects.iter().enumerate() {
        for &f in fib.outgoing(*u) {
            let target_eta: Vec<usize> = g
                .elements()
                .map(|x| {
                    let gf_inv = fib.inverse(fiber.act_morphism(x, f));
                    fib.compose(fib.compose(f, eta[x]), gf_inv)
                })
                .collect();
            let b = index[&(fib.target(f), target_eta.as_slice())];
            morphism_index.insert((a, f), ends.len());
            ends.push((a, b));
            underlying.push(f);
        }
        if ends.len() as u64 > budget.max_candidates {
            return Err(Error::resource("fixed-point morphisms", ends.len(), budget.max_candidates));
        }
    }
    let identity: Vec<usize> = objects
        .iter()
        .enumerate()
        .map(|(a, (u, _))| morphism_index[&(a, fib.identity(*u))])
        .collect();
    FullGroupoid::assemble(
        labels,
        ends.clone(),
        identity,
        |second, first| {
            let composite = fib.compose(underlying[second], underlying[first]);
            Ok(morphism_index[&(ends[first].0, composite)])
        },
        Checks::Structural,
        budget,
    )
}

/// The dependent product `Π_x P_x`: the product over base components of
/// the homotopy fixed-point groupoids.
pub fn dependent_product(p: &DependentGroupoid, budget: &Budget) -> Result<FullGroupoid> {
    let mut acc: Option<FullGroupoid> = None;
    for f in &p.fibers {
        let fixed = homotopy_fixed_points(f, budget)?;
        acc = Some(match acc {
            None => fixed,
            Some(prev) => prev.product(&fixed, budget)?,
        });
    }
    Ok(acc.unwrap_or_else(FullGroupoid::unit))
}

/// `|Π_x P_x|` as the product of the fixed-point cardinalities, without
/// forming the product groupoid, whose size is exponential in the base.
pub fn dependent_product_cardinality(p: &DependentGroupoid, budget: &Budget) -> Result<Rational> {
    let mut acc = Rational::one();
    for f in &p.fibers {
        acc = acc * homotopy_fixed_points(f, budget)?.cardinality();
        if acc.is_zero() {
            break;
        }
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn b() -> Budget {
        Budget::default()
    }

    fn cyclic(n: usize) -> FiniteGroup {
        FiniteGroup::cyclic(n, &b()).unwrap()
    }

    fn two_points() -> FullGroupoid {
        FullGroupoid::discrete(vec!["a".into(), "b".into()])
    }

    fn swap_fiber() -> Fiber {
        let swap = Functor {
            objects: vec![1, 0],
            morphisms: vec![1, 0],
        };
        Fiber::from_generator_images("*", cyclic(2), two_points(), vec![swap]).unwrap()
    }

    #[test]
    fn rejects_non_homomorphic_actions() {
        let swap = Functor {
            objects: vec![1, 0],
            morphisms: vec![1, 0],
        };
        // Z3 cannot act on two points by a swap.
        assert!(Fiber::from_generator_images("*", cyclic(3), two_points(), vec![swap.clone()]).is_err());
        let id = Functor::identity(&two_points());
        assert!(Fiber::new("*", cyclic(2), two_points(), vec![swap.clone(), swap.clone()]).is_err());
        assert!(Fiber::new("*", cyclic(2), two_points(), vec![id, swap]).is_ok());
    }

    #[test]
    fn swap_action_groupoid_is_contractible() {
        let p = DependentGroupoid::new(vec![swap_fiber()]).unwrap();
        let total = grothendieck_sum(&p, &b()).unwrap();
        let skel = total.skeletalize();
        assert_eq!(skel.len(), 1);
        assert_eq!(skel.components()[0].aut.order(), 1);
        assert!(total.cardinality().is_one());
        assert_eq!(total.cardinality(), super::super::oracle_cardinality(&total));
    }

    #[test]
    fn constant_family_sums_to_product() {
        let x = SkeletalGroupoid::classifying(cyclic(3)).sum(&SkeletalGroupoid::set(1));
        let y = FullGroupoid::from_skeletal(&SkeletalGroupoid::classifying(cyclic(2)).sum(&SkeletalGroupoid::unit()));
        let total = grothendieck_sum(&DependentGroupoid::constant(&x, &y), &b()).unwrap();
        assert_eq!(total.cardinality(), x.cardinality() * y.cardinality());
    }

    #[test]
    fn conjugation_totals_have_unit_cardinality() {
        let s3 = FiniteGroup::symmetric(3, &b()).unwrap();
        let total = grothendieck_sum(&DependentGroupoid::loop_family(&SkeletalGroupoid::classifying(s3)), &b()).unwrap();
        let mut orders: Vec<usize> = total.skeletalize().components().iter().map(|c| c.aut.order()).collect();
        orders.sort_unstable();
        assert_eq!(orders, vec![2, 3, 6]);
        assert!(total.cardinality().is_one());
        for x in [SkeletalGroupoid::classifying(cyclic(4)), SkeletalGroupoid::set(2)] {
            let p = DependentGroupoid::translation_family(&x);
            assert_eq!(grothendieck_sum(&p, &b()).unwrap().cardinality(), x.cardinality() * Rational::from(x.components()[0].aut.order()));
        }
    }

    #[test]
    fn fixed_points_of_trivial_action() {
        let f = Fiber::trivial("*", cyclic(2), two_points());
        let fixed = homotopy_fixed_points(&f, &b()).unwrap();
        assert_eq!(fixed.object_count(), 2);
        assert!(fixed.is_discrete());
        assert_eq!(fixed.cardinality(), Rational::from(2i64));
    }

    #[test]
    fn fixed_points_of_swap_are_empty() {
        let fixed = homotopy_fixed_points(&swap_fiber(), &b()).unwrap();
        assert_eq!(fixed.object_count(), 0);
    }

    #[test]
    fn fixed_points_of_conjugation_are_the_center() {
        for g in [
            FiniteGroup::symmetric(3, &b()).unwrap(),
            cyclic(4),
            FiniteGroup::dihedral(4, &b()).unwrap(),
        ] {
            let p = DependentGroupoid::loop_family(&SkeletalGroupoid::classifying(g.clone()));
            let fixed = dependent_product(&p, &b()).unwrap();
            assert!(fixed.is_discrete());
            assert_eq!(fixed.object_count(), g.center_elements().len());
        }
    }

    #[test]
    fn fixed_points_of_a_classifying_fiber() {
        // Trivial Z2 action on B(Z3): cocycles are homomorphisms Z2 → Z3.
        let fib = FullGroupoid::from_skeletal(&SkeletalGroupoid::classifying(cyclic(3)));
        let f = Fiber::trivial("*", cyclic(2), fib);
        let fixed = homotopy_fixed_points(&f, &b()).unwrap();
        assert_eq!(fixed.object_count(), 1);
        assert_eq!(fixed.cardinality(), Rational::new(1, 3));
        let fib = FullGroupoid::from_skeletal(&SkeletalGroupoid::classifying(cyclic(2)));
        let fixed = homotopy_fixed_points(&Fiber::trivial("*", cyclic(2), fib), &b()).unwrap();
        assert_eq!(fixed.cardinality(), Rational::one());
    }

    #[test]
    fn discrete_base_product_is_plain_product() {
        let y = FullGroupoid::from_skeletal(&SkeletalGroupoid::classifying(cyclic(2)).sum(&SkeletalGroupoid::set(1)));
        let p = DependentGroupoid::constant(&SkeletalGroupoid::set(3), &y);
        let prod = dependent_product(&p, &b()).unwrap();
        let expect = y.cardinality() * y.cardinality() * y.cardinality();
        assert_eq!(prod.cardinality(), expect);
        assert_eq!(dependent_product_cardinality(&p, &b()).unwrap(), expect);
        let twisted = DependentGroupoid::translation_family(&SkeletalGroupoid::classifying(cyclic(3)).sum(&SkeletalGroupoid::unit()));
        assert_eq!(
            dependent_product(&twisted, &b()).unwrap().cardinality(),
            dependent_product_cardinality(&twisted, &b()).unwrap()
        );
        assert!(dependent_product(&DependentGroupoid::constant(&SkeletalGroupoid::empty(), &y), &b())
            .unwrap()
            .cardinality()
            .is_one());
    }

    #[test]
    fn budgets_are_reported() {
        let tight = Budget {
            max_objects: 1,
            ..Budget::default()
        };
        let f = Fiber::trivial("*", cyclic(2), two_points());
        assert!(homotopy_fixed_points(&f, &tight).unwrap_err().is_resource());
    }
}
