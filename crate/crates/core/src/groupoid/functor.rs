use std::collections::{HashMap, VecDeque};

use super::dependent::{dependent_product, dependent_product_cardinality, DependentGroupoid, Fiber};
use super::full::{Checks, FullGroupoid, Functor};
use super::skeletal::{Component, SkeletalGroupoid};
use crate::arith::Rational;
use crate::budget::Budget;
use crate::error::{Error, Result};
use crate::group::{enumerate_homomorphisms, hom_classes};

/// The skeletal functor groupoid `Fun(X, Y)`.
///
/// For connected `X = B(G)` its components are conjugacy classes of
/// homomorphisms `G → H` into each component `B(H)` of `Y`, with the
/// centralizer of the image as automorphism group. A sum on the left
/// becomes a product.
pub fn functor_groupoid(x: &SkeletalGroupoid, y: &SkeletalGroupoid, budget: &Budget) -> Result<SkeletalGroupoid> {
    let mut acc = SkeletalGroupoid::unit();
    for (i, c) in x.components().iter().enumerate() {
        let mut options = Vec::new();
        for d in y.components() {
            for (hom, stabilizer) in hom_classes(&c.aut, &d.aut, budget)? {
                options.push(Component::new(
                    format!("{}:{:?}", d.label, hom.generator_images()),
                    stabilizer,
                ));
                if options.len() > budget.max_objects {
                    return Err(Error::resource("functor classes", options.len(), budget.max_objects));
                }
            }
        }
        let factor = SkeletalGroupoid::new(options)?;
        acc = if i == 0 { factor } else { acc.product(&factor, budget)? };
    }
    Ok(acc)
}

/// Explicit groupoid of functors and natural isomorphisms between two
/// explicit groupoids. Object `i` is the functor `functors()[i]`,
/// labelled `f{i}`; a morphism out of functor `i` is a family of
/// components, one `α_u ∈ out(φ(u))` per source object.
#[derive(Clone, Debug)]
pub struct FunctorGroupoid {
    groupoid: FullGroupoid,
    functors: Vec<Functor>,
    functor_index: HashMap<Functor, usize>,
    components: Vec<Vec<usize>>,
    morphism_index: HashMap<(usize, Vec<usize>), usize>,
}

impl FunctorGroupoid {
    pub fn groupoid(&self) -> &FullGroupoid {
        &self.groupoid
    }

    pub fn functors(&self) -> &[Functor] {
        &self.functors
    }

    pub fn functor_index(&self, f: &Functor) -> Option<usize> {
        self.functor_index.get(f).copied()
    }

    /// Components of natural isomorphism `m`.
    pub fn components(&self, m: usize) -> &[usize] {
        &self.components[m]
    }

    /// The natural isomorphism out of functor `source` with these components.
    pub fn morphism(&self, source: usize, components: &[usize]) -> Option<usize> {
        self.morphism_index.get(&(source, components.to_vec())).copied()
    }
}

/// Every functor out of one connected component of `a`, as partial maps
/// on that component's objects and on morphisms starting there.
///
/// With root `r` and tree morphisms `t_u : r → u`, a functor is fixed by
/// `w = φ(r)`, a homomorphism `ρ : Aut(r) → Aut(w)` and `m_u = φ(t_u)`;
/// then `φ(f : u → v) = m_v ∘ ρ(t_v⁻¹ ∘ f ∘ t_u) ∘ m_u⁻¹`.
fn component_functors(
    a: &FullGroupoid,
    b: &FullGroupoid,
    class: &[usize],
    budget: &Budget,
) -> Result<Vec<(Vec<(usize, usize)>, Vec<(usize, usize)>)>> {
    let root = class[0];
    let mut tree: HashMap<usize, usize> = HashMap::from([(root, a.identity(root))]);
    let mut queue = VecDeque::from([root]);
    let mut order = vec![root];
    while let Some(u) = queue.pop_front() {
        for &f in a.outgoing(u) {
            let v = a.target(f);
            if !tree.contains_key(&v) {
                tree.insert(v, a.compose(f, tree[&u]));
                order.push(v);
                queue.push_back(v);
            }
        }
    }
    let others = &order[1..];
    let arrows: Vec<usize> = class.iter().flat_map(|&u| a.outgoing(u).iter().copied()).collect();
    let root_loops = a.hom(root, root);
    let root_local: HashMap<usize, usize> = root_loops.iter().enumerate().map(|(i, &m)| (m, i)).collect();
    let ga = a.automorphism_group(root);
    // Each arrow f : u → v as the loop t_v⁻¹ ∘ f ∘ t_u at the root.
    let arrow_loops: Vec<usize> = arrows
        .iter()
        .map(|&f| {
            let (u, v) = (a.source(f), a.target(f));
            root_local[&a.compose(a.inverse(tree[&v]), a.compose(f, tree[&u]))]
        })
        .collect();

    let mut out = Vec::new();
    for w in 0..b.object_count() {
        let out_w = b.outgoing(w);
        let choices = (out_w.len() as u64).checked_pow(others.len() as u32);
        match choices {
            Some(c) if c <= budget.max_candidates => {}
            _ => {
                return Err(Error::resource(
                    "functor object assignments",
                    choices.map_or_else(|| "overflow".to_string(), |c| c.to_string()),
                    budget.max_candidates,
                ))
            }
        }
        let gb = b.automorphism_group(w);
        let w_loops = b.hom(w, w);
        for rho in enumerate_homomorphisms(&ga, &gb, budget)? {
            let mut choice = vec![0usize; others.len()];
            loop {
                let mut m: HashMap<usize, usize> = HashMap::from([(root, b.identity(w))]);
                for (&u, &c) in others.iter().zip(&choice) {
                    m.insert(u, out_w[c]);
                }
                let objects: Vec<(usize, usize)> = class.iter().map(|&u| (u, b.target(m[&u]))).collect();
                let morphisms: Vec<(usize, usize)> = arrows
                    .iter()
                    .zip(&arrow_loops)
                    .map(|(&f, &l)| {
                        let (u, v) = (a.source(f), a.target(f));
                        let core = w_loops[rho.apply(l)];
                        (f, b.compose(m[&v], b.compose(core, b.inverse(m[&u]))))
                    })
                    .collect();
                out.push((objects, morphisms));
                if out.len() > budget.max_objects {
                    return Err(Error::resource("functors", out.len(), budget.max_objects));
                }
                let mut i = choice.len();
                loop {
                    if i == 0 {
                        break;
                    }
                    i -= 1;
                    choice[i] += 1;
                    if choice[i] < out_w.len() {
                        break;
                    }
                    choice[i] = 0;
                }
                if choice.iter().all(|&c| c == 0) {
                    break;
                }
            }
        }
    }
    Ok(out)
}

/// Enumerates `Fun(a, b)` explicitly.
pub fn functor_category(a: &FullGroupoid, b: &FullGroupoid, budget: &Budget) -> Result<FunctorGroupoid> {
    let mut functors = vec![Functor {
        objects: vec![usize::MAX; a.object_count()],
        morphisms: vec![usize::MAX; a.morphism_count()],
    }];
    for class in a.iso_classes() {
        let partial = component_functors(a, b, &class, budget)?;
        let total = functors.len().saturating_mul(partial.len());
        if total > budget.max_objects {
            return Err(Error::resource("functors", total, budget.max_objects));
        }
        let mut next = Vec::with_capacity(total);
        for f in &functors {
            for (objects, morphisms) in &partial {
                let mut g = f.clone();
                for &(u, x) in objects {
                    g.objects[u] = x;
                }
                for &(m, y) in morphisms {
                    g.morphisms[m] = y;
                }
                next.push(g);
            }
        }
        functors = next;
    }
    debug_assert!(functors.iter().all(|f| f.check(a, b).is_ok()));
    let functor_index: HashMap<Functor, usize> =
        functors.iter().enumerate().map(|(i, f)| (f.clone(), i)).collect();

    let mut total: u64 = 0;
    for f in &functors {
        let per = f
            .objects
            .iter()
            .try_fold(1u64, |acc, &x| acc.checked_mul(b.outgoing(x).len() as u64))
            .unwrap_or(u64::MAX);
        total = total.saturating_add(per);
    }
    if total > budget.max_candidates {
        return Err(Error::resource("natural isomorphisms", total, budget.max_candidates));
    }

    // Natural isomorphisms out of φ are arbitrary families α_u ∈ out(φ(u));
    // the target is ψ(f) = α_v ∘ φ(f) ∘ α_u⁻¹.
    let n = a.object_count();
    let mut ends = Vec::with_capacity(total as usize);
    let mut components = Vec::with_capacity(total as usize);
    let mut morphism_index = HashMap::with_capacity(total as usize);
    for (i, phi) in functors.iter().enumerate() {
        let lists: Vec<&[usize]> = phi.objects.iter().map(|&x| b.outgoing(x)).collect();
        let mut choice = vec![0usize; n];
        loop {
            let alpha: Vec<usize> = choice.iter().zip(&lists).map(|(&c, l)| l[c]).collect();
            let psi = Functor {
                objects: alpha.iter().map(|&m| b.target(m)).collect(),
                morphisms: phi
                    .morphisms
                    .iter()
                    .enumerate()
                    .map(|(f, &pf)| {
                        let (u, v) = (a.source(f), a.target(f));
                        b.compose(alpha[v], b.compose(pf, b.inverse(alpha[u])))
                    })
                    .collect(),
            };
            let j = functor_index[&psi];
            morphism_index.insert((i, alpha.clone()), ends.len());
            ends.push((i, j));
            components.push(alpha);
            let mut k = n;
            loop {
                if k == 0 {
                    break;
                }
                k -= 1;
                choice[k] += 1;
                if choice[k] < lists[k].len() {
                    break;
                }
                choice[k] = 0;
            }
            if choice.iter().all(|&c| c == 0) {
                break;
            }
        }
    }
    let identity: Vec<usize> = functors
        .iter()
        .enumerate()
        .map(|(i, phi)| {
            let ids: Vec<usize> = phi.objects.iter().map(|&x| b.identity(x)).collect();
            morphism_index[&(i, ids)]
        })
        .collect();
    let labels = (0..functors.len()).map(|i| format!("f{i}")).collect();
    let groupoid = FullGroupoid::assemble(
        labels,
        ends.clone(),
        identity,
        |second, first| {
            let comps: Vec<usize> = components[second]
                .iter()
                .zip(&components[first])
                .map(|(&beta, &alpha)| b.compose(beta, alpha))
                .collect();
            Ok(morphism_index[&(ends[first].0, comps)])
        },
        Checks::Structural,
        budget,
    )?;
    Ok(FunctorGroupoid {
        groupoid,
        functors,
        functor_index,
        components,
        morphism_index,
    })
}

/// The family `x ↦ Fun(P_x, Q_x)` with `g·φ = Q(g) ∘ φ ∘ P(g)⁻¹` and
/// `(g·α)_u = Q(g)(α_{P(g)⁻¹ u})`.
pub fn nat_trans_family(p: &DependentGroupoid, q: &DependentGroupoid, budget: &Budget) -> Result<DependentGroupoid> {
    if !p.same_base(q) {
        return Err(Error::LabelMismatch(format!(
            "families live over different bases: {} versus {}",
            p.base(),
            q.base()
        )));
    }
    let mut fibers = Vec::with_capacity(p.fibers().len());
    for (pf, qf) in p.fibers().iter().zip(q.fibers()) {
        let g = pf.group();
        let fc = functor_category(pf.fiber(), qf.fiber(), budget)?;
        let mut action = Vec::with_capacity(g.order());
        for k in g.elements() {
            let pinv = pf.action(g.inv(k));
            let qk = qf.action(k);
            let objects: Vec<usize> = fc
                .functors
                .iter()
                .map(|phi| fc.functor_index[&qk.after(&phi.after(pinv))])
                .collect();
            let morphisms: Vec<usize> = (0..fc.groupoid.morphism_count())
                .map(|m| {
                    let source = objects[fc.groupoid.source(m)];
                    let alpha = &fc.components[m];
                    let moved: Vec<usize> = (0..pf.fiber().object_count())
                        .map(|u| qk.morphisms[alpha[pinv.objects[u]]])
                        .collect();
                    fc.morphism_index[&(source, moved)]
                })
                .collect();
            action.push(Functor { objects, morphisms });
        }
        fibers.push(Fiber::assume_functorial(pf.label(), g.clone(), fc.groupoid, action)?);
    }
    DependentGroupoid::new(fibers)
}

/// `P ⇒ Q`: the dependent product of the fiberwise functor groupoids.
pub fn nat_trans_groupoid(p: &DependentGroupoid, q: &DependentGroupoid, budget: &Budget) -> Result<FullGroupoid> {
    dependent_product(&nat_trans_family(p, q, budget)?, budget)
}

/// `|P ⇒ Q|`, fiber by fiber.
pub fn nat_trans_cardinality(p: &DependentGroupoid, q: &DependentGroupoid, budget: &Budget) -> Result<Rational> {
    dependent_product_cardinality(&nat_trans_family(p, q, budget)?, budget)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::Rational;
    use crate::group::FiniteGroup;
    use crate::groupoid::full::tests::interval;

    fn b() -> Budget {
        Budget::default()
    }

    fn bg(n: usize) -> SkeletalGroupoid {
        SkeletalGroupoid::classifying(FiniteGroup::cyclic(n, &b()).unwrap())
    }

    #[test]
    fn skeletal_functor_groupoids() {
        let f = functor_groupoid(&bg(2), &bg(2), &b()).unwrap();
        assert_eq!(f.len(), 2);
        assert!(f.components().iter().all(|c| c.aut.order() == 2));
        assert!(f.cardinality().is_one());
        let f = functor_groupoid(&bg(3), &bg(2), &b()).unwrap();
        assert_eq!(f.len(), 1);
        assert_eq!(f.cardinality(), Rational::new(1, 2));
        let y = bg(4).sum(&SkeletalGroupoid::set(2));
        let f = functor_groupoid(&SkeletalGroupoid::unit(), &y, &b()).unwrap();
        assert_eq!(f.cardinality(), y.cardinality());
        assert!(functor_groupoid(&SkeletalGroupoid::empty(), &y, &b()).unwrap().cardinality().is_one());
        // Sums on the left become products.
        let f = functor_groupoid(&SkeletalGroupoid::set(2), &bg(2), &b()).unwrap();
        assert_eq!(f.cardinality(), Rational::new(1, 4));
    }

    #[test]
    fn explicit_functor_categories() {
        let two = FullGroupoid::discrete(vec!["a".into(), "b".into()]);
        let fc = functor_category(&two, &two, &b()).unwrap();
        assert_eq!(fc.functors().len(), 4);
        assert!(fc.groupoid().is_discrete());
        let i = interval();
        let fc = functor_category(&i, &i, &b()).unwrap();
        assert_eq!(fc.groupoid().object_count(), 4);
        assert!(fc.groupoid().cardinality().is_one());
        let fc = functor_category(&FullGroupoid::unit(), &i, &b()).unwrap();
        assert_eq!(fc.groupoid().cardinality(), Rational::one());
        for (m, n) in [(2, 2), (3, 2), (2, 4), (4, 2)] {
            let x = FullGroupoid::from_skeletal(&bg(m));
            let y = FullGroupoid::from_skeletal(&bg(n));
            let fc = functor_category(&x, &y, &b()).unwrap();
            assert_eq!(
                fc.groupoid().cardinality(),
                functor_groupoid(&bg(m), &bg(n), &b()).unwrap().cardinality()
            );
            for f in fc.functors() {
                f.check(&x, &y).unwrap();
            }
        }
    }

    #[test]
    fn nat_trans_examples() {
        let pt = FullGroupoid::unit();
        let p = DependentGroupoid::constant(&bg(2), &pt);
        assert!(nat_trans_groupoid(&p, &p, &b()).unwrap().cardinality().is_one());

        let two = FullGroupoid::discrete(vec!["a".into(), "b".into()]);
        let p = DependentGroupoid::constant(&bg(2), &two);
        let n = nat_trans_groupoid(&p, &p, &b()).unwrap();
        assert_eq!(n.object_count(), 4);
        assert!(n.is_discrete());

        let fib = FullGroupoid::from_skeletal(&bg(2));
        let p = DependentGroupoid::constant(&SkeletalGroupoid::set(2), &fib);
        assert!(nat_trans_groupoid(&p, &p, &b()).unwrap().cardinality().is_one());

        let q = DependentGroupoid::constant(&bg(3), &two);
        assert!(matches!(nat_trans_groupoid(&p, &q, &b()), Err(Error::LabelMismatch(_))));
    }
}
