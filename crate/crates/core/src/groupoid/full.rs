use std::collections::HashMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use super::skeletal::{Component, SkeletalGroupoid};
use crate::arith::Rational;
use crate::budget::Budget;
use crate::error::{Error, Result};
use crate::group::FiniteGroup;

/// A finite groupoid given by explicit objects, morphisms and composition.
///
/// Morphism `f` runs from `source(f)` to `target(f)`; `compose(g, f)` is
/// `g ∘ f` (apply `f` first) and is defined iff `target(f) == source(g)`.
#[derive(Clone, PartialEq, Eq)]
pub struct FullGroupoid {
    objects: Vec<String>,
    ends: Vec<(usize, usize)>,
    identity: Vec<usize>,
    inverse: Vec<usize>,
    outgoing: Vec<Vec<usize>>,
    incoming: Vec<Vec<usize>>,
    hom: HashMap<(usize, usize), Vec<usize>>,
    /// Position of each morphism in its source's `outgoing` list.
    out_pos: Vec<usize>,
    /// `g ∘ f` sits at `comp_offset[f] + out_pos[g]`.
    comp_offset: Vec<usize>,
    composition: Vec<u32>,
}

/// A functor between explicit groupoids, as object and morphism maps.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Functor {
    pub objects: Vec<usize>,
    pub morphisms: Vec<usize>,
}

impl Functor {
    pub fn identity(g: &FullGroupoid) -> Self {
        Functor {
            objects: (0..g.object_count()).collect(),
            morphisms: (0..g.morphism_count()).collect(),
        }
    }

    /// `self ∘ other`: apply `other` first.
    pub fn after(&self, other: &Functor) -> Functor {
        Functor {
            objects: other.objects.iter().map(|&o| self.objects[o]).collect(),
            morphisms: other.morphisms.iter().map(|&m| self.morphisms[m]).collect(),
        }
    }

    pub fn is_bijective(&self) -> bool {
        fn bij(v: &[usize]) -> bool {
            let mut seen = vec![false; v.len()];
            v.iter()
                .all(|&x| x < v.len() && !std::mem::replace(&mut seen[x], true))
        }
        bij(&self.objects) && bij(&self.morphisms)
    }

    /// Checks that the maps have the right shape and preserve endpoints.
    pub fn check_shape(&self, source: &FullGroupoid, target: &FullGroupoid) -> Result<()> {
        if self.objects.len() != source.object_count() || self.morphisms.len() != source.morphism_count() {
            return Err(Error::InvalidGroupoid("functor maps have the wrong length".into()));
        }
        if self.objects.iter().any(|&o| o >= target.object_count())
            || self.morphisms.iter().any(|&m| m >= target.morphism_count())
        {
            return Err(Error::InvalidGroupoid("functor maps point outside the target".into()));
        }
        for (f, &(a, b)) in source.ends.iter().enumerate() {
            let (x, y) = target.ends[self.morphisms[f]];
            if x != self.objects[a] || y != self.objects[b] {
                return Err(Error::InvalidGroupoid(format!(
                    "functor does not preserve the endpoints of morphism {f}"
                )));
            }
        }
        Ok(())
    }

    /// Full functoriality: endpoints, identities and every composite.
    pub fn check(&self, source: &FullGroupoid, target: &FullGroupoid) -> Result<()> {
        self.check_shape(source, target)?;
        for (o, &id) in source.identity.iter().enumerate() {
            if self.morphisms[id] != target.identity[self.objects[o]] {
                return Err(Error::InvalidGroupoid(format!(
                    "functor does not preserve the identity of object {o}"
                )));
            }
        }
        for (g, f, gf) in source.composable_triples() {
            if target.compose(self.morphisms[g], self.morphisms[f]) != self.morphisms[gf] {
                return Err(Error::InvalidGroupoid(format!(
                    "functor does not preserve the composite {g} ∘ {f}"
                )));
            }
        }
        Ok(())
    }
}

/// How much checking [`FullGroupoid::assemble`] performs.
#[derive(Clone, Copy, PartialEq, Eq)]
pub(crate) enum Checks {
    /// Everything, including associativity over all composable triples.
    Full,
    /// Endpoints, identity laws and inverses; for constructions whose
    /// associativity follows from their inputs'.
    Structural,
}

impl FullGroupoid {
    /// Builds from objects, morphism endpoints, identity morphisms and a
    /// composition rule, which is called once per composable pair.
    pub(crate) fn assemble(
        objects: Vec<String>,
        ends: Vec<(usize, usize)>,
        identity: Vec<usize>,
        mut compose: impl FnMut(usize, usize) -> Result<usize>,
        checks: Checks,
        budget: &Budget,
    ) -> Result<Self> {
        let n = objects.len();
        if n > budget.max_objects {
            return Err(Error::resource("groupoid objects", n, budget.max_objects));
        }
        if identity.len() != n {
            return Err(Error::InvalidGroupoid("every object needs an identity".into()));
        }
        let mut labels = std::collections::HashSet::with_capacity(n);
        if let Some(dup) = objects.iter().find(|o| !labels.insert(o.as_str())) {
            return Err(Error::InvalidGroupoid(format!("duplicate object label `{dup}`")));
        }
        let mut outgoing = vec![Vec::new(); n];
        let mut incoming = vec![Vec::new(); n];
        let mut hom: HashMap<(usize, usize), Vec<usize>> = HashMap::new();
        for (f, &(a, b)) in ends.iter().enumerate() {
            if a >= n || b >= n {
                return Err(Error::InvalidGroupoid(format!("morphism {f} has an unknown endpoint")));
            }
            outgoing[a].push(f);
            incoming[b].push(f);
            hom.entry((a, b)).or_default().push(f);
        }
        for (o, &id) in identity.iter().enumerate() {
            if ends.get(id) != Some(&(o, o)) {
                return Err(Error::InvalidGroupoid(format!("identity of object {o} is not a loop at {o}")));
            }
        }
        let pairs: u64 = (0..n)
            .map(|b| incoming[b].len() as u64 * outgoing[b].len() as u64)
            .sum();
        if pairs > budget.max_candidates {
            return Err(Error::resource("composable pairs", pairs, budget.max_candidates));
        }
        if ends.len() > u32::MAX as usize {
            return Err(Error::resource("morphisms", ends.len(), u32::MAX));
        }
        let mut out_pos = vec![0; ends.len()];
        for out in &outgoing {
            for (i, &g) in out.iter().enumerate() {
                out_pos[g] = i;
            }
        }
        let mut comp_offset = Vec::with_capacity(ends.len());
        let mut next = 0;
        for &(_, b) in &ends {
            comp_offset.push(next);
            next += outgoing[b].len();
        }
        let mut composition = vec![0u32; next];
        for (f, &(a, b)) in ends.iter().enumerate() {
            for &g in &outgoing[b] {
                let gf = compose(g, f)?;
                if ends.get(gf) != Some(&(a, ends[g].1)) {
                    return Err(Error::InvalidGroupoid(format!(
                        "composite {g} ∘ {f} has the wrong endpoints"
                    )));
                }
                composition[comp_offset[f] + out_pos[g]] = gf as u32;
            }
        }
        let mut groupoid = FullGroupoid {
            objects,
            ends,
            identity,
            inverse: Vec::new(),
            outgoing,
            incoming,
            hom,
            out_pos,
            comp_offset,
            composition,
        };
        groupoid.check_identities()?;
        groupoid.inverse = groupoid.find_inverses()?;
        if checks == Checks::Full {
            groupoid.check_associativity(budget)?;
        }
        Ok(groupoid)
    }

    fn check_identities(&self) -> Result<()> {
        for (f, &(a, b)) in self.ends.iter().enumerate() {
            if self.compose(f, self.identity[a]) != f || self.compose(self.identity[b], f) != f {
                return Err(Error::InvalidGroupoid(format!("identity law fails for morphism {f}")));
            }
        }
        Ok(())
    }

    fn find_inverses(&self) -> Result<Vec<usize>> {
        self.ends
            .iter()
            .enumerate()
            .map(|(f, &(a, b))| {
                self.hom(b, a)
                    .iter()
                    .copied()
                    .find(|&g| self.compose(g, f) == self.identity[a] && self.compose(f, g) == self.identity[b])
                    .ok_or_else(|| Error::InvalidGroupoid(format!("morphism {f} is not invertible")))
            })
            .collect()
    }

    fn check_associativity(&self, budget: &Budget) -> Result<()> {
        let triples: u64 = self
            .composable_triples()
            .map(|(g, _, _)| self.outgoing[self.ends[g].1].len() as u64)
            .sum();
        if triples > budget.max_candidates {
            return Err(Error::resource("associativity triples", triples, budget.max_candidates));
        }
        for (g, f, gf) in self.composable_triples() {
            for &h in &self.outgoing[self.ends[g].1] {
                if self.compose(h, gf) != self.compose(self.compose(h, g), f) {
                    return Err(Error::InvalidGroupoid(format!(
                        "associativity fails for ({h}, {g}, {f})"
                    )));
                }
            }
        }
        Ok(())
    }

    /// Runs every check, associativity included.
    pub fn validate(&self, budget: &Budget) -> Result<()> {
        self.check_identities()?;
        self.check_associativity(budget)
    }

    /// Builds from composition triples `(g, f, g ∘ f)`; identities and
    /// inverses are derived. Every groupoid law is checked.
    pub fn new(
        objects: Vec<String>,
        ends: Vec<(usize, usize)>,
        triples: &[(usize, usize, usize)],
        budget: &Budget,
    ) -> Result<Self> {
        let mut table = HashMap::new();
        for &(g, f, gf) in triples {
            if table.insert((g, f), gf).is_some_and(|old| old != gf) {
                return Err(Error::InvalidGroupoid(format!("composite {g} ∘ {f} given twice")));
            }
        }
        let n = objects.len();
        let identity = (0..n)
            .map(|o| {
                ends.iter()
                    .enumerate()
                    .find(|&(e, &ends_e)| ends_e == (o, o) && table.get(&(e, e)) == Some(&e))
                    .map(|(e, _)| e)
                    .ok_or_else(|| Error::InvalidGroupoid(format!("object {o} has no identity morphism")))
            })
            .collect::<Result<Vec<_>>>()?;
        FullGroupoid::assemble(
            objects,
            ends,
            identity,
            |g, f| {
                table
                    .get(&(g, f))
                    .copied()
                    .ok_or_else(|| Error::InvalidGroupoid(format!("composite {g} ∘ {f} is missing")))
            },
            Checks::Full,
            budget,
        )
    }

    pub fn unit() -> Self {
        FullGroupoid::discrete(vec!["*".to_string()])
    }

    /// Only identity morphisms; morphism `i` is the identity of object `i`.
    pub fn discrete(labels: Vec<String>) -> Self {
        let n = labels.len();
        FullGroupoid::assemble(
            labels,
            (0..n).map(|i| (i, i)).collect(),
            (0..n).collect(),
            |g, _| Ok(g),
            Checks::Structural,
            &Budget {
                max_objects: usize::MAX,
                max_candidates: u64::MAX,
                ..Budget::default()
            },
        )
        .expect("discrete groupoids are valid")
    }

    /// One object per component; the morphisms at component `c` are the
    /// elements of its group, numbered consecutively in component order.
    pub fn from_skeletal(x: &SkeletalGroupoid) -> Self {
        let mut objects = Vec::new();
        let mut ends = Vec::new();
        let mut identity = Vec::new();
        let mut owner = Vec::new();
        let mut offsets = Vec::new();
        for (c, comp) in x.components().iter().enumerate() {
            objects.push(comp.label.clone());
            offsets.push(ends.len());
            identity.push(ends.len() + comp.aut.identity());
            for _ in comp.aut.elements() {
                ends.push((c, c));
                owner.push(c);
            }
        }
        let comps = x.components();
        FullGroupoid::assemble(
            objects,
            ends,
            identity,
            |g, f| {
                let c = owner[f];
                let (off, aut) = (offsets[c], &comps[c].aut);
                Ok(off + aut.mul(g - off, f - off))
            },
            Checks::Structural,
            &Budget {
                max_objects: usize::MAX,
                max_candidates: u64::MAX,
                ..Budget::default()
            },
        )
        .expect("presentations of skeletal groupoids are valid")
    }

    /// Objects and morphisms are pairs; `(a, b)` has index `a·|right| + b`.
    pub fn product(&self, other: &FullGroupoid, budget: &Budget) -> Result<Self> {
        let (no, mo) = (other.object_count(), other.morphism_count());
        let objects_needed = self.object_count().saturating_mul(no);
        if objects_needed > budget.max_objects {
            return Err(Error::resource("product objects", objects_needed, budget.max_objects));
        }
        let morphisms_needed = (self.morphism_count() as u64).saturating_mul(mo as u64);
        if morphisms_needed > budget.max_candidates {
            return Err(Error::resource("product morphisms", morphisms_needed, budget.max_candidates));
        }
        let mut objects = Vec::with_capacity(objects_needed);
        for a in &self.objects {
            for b in &other.objects {
                objects.push(format!("({a},{b})"));
            }
        }
        let mut ends = Vec::with_capacity(morphisms_needed as usize);
        for &(a1, a2) in &self.ends {
            for &(b1, b2) in &other.ends {
                ends.push((a1 * no + b1, a2 * no + b2));
            }
        }
        let mut identity = Vec::with_capacity(objects_needed);
        for &ia in &self.identity {
            for &ib in &other.identity {
                identity.push(ia * mo + ib);
            }
        }
        FullGroupoid::assemble(
            objects,
            ends,
            identity,
            |g, f| {
                let left = self.compose(g / mo, f / mo);
                let right = other.compose(g % mo, f % mo);
                Ok(left * mo + right)
            },
            Checks::Structural,
            budget,
        )
    }

    pub fn object_count(&self) -> usize {
        self.objects.len()
    }

    pub fn morphism_count(&self) -> usize {
        self.ends.len()
    }

    pub fn object_labels(&self) -> &[String] {
        &self.objects
    }

    pub fn label(&self, object: usize) -> &str {
        &self.objects[object]
    }

    pub fn source(&self, f: usize) -> usize {
        self.ends[f].0
    }

    pub fn target(&self, f: usize) -> usize {
        self.ends[f].1
    }

    pub fn identity(&self, object: usize) -> usize {
        self.identity[object]
    }

    pub fn inverse(&self, f: usize) -> usize {
        self.inverse[f]
    }

    pub fn is_identity(&self, f: usize) -> bool {
        self.identity[self.ends[f].0] == f
    }

    /// `g ∘ f`. Panics unless `target(f) == source(g)`.
    pub fn compose(&self, g: usize, f: usize) -> usize {
        match self.try_compose(g, f) {
            Some(gf) => gf,
            None => panic!("morphisms {g} and {f} are not composable"),
        }
    }

    pub fn try_compose(&self, g: usize, f: usize) -> Option<usize> {
        if g >= self.ends.len() || f >= self.ends.len() || self.ends[f].1 != self.ends[g].0 {
            return None;
        }
        Some(self.composition[self.comp_offset[f] + self.out_pos[g]] as usize)
    }

    /// Every `(g, f, g ∘ f)`, ordered by `f` and then by `g`'s position
    /// among the arrows out of `target(f)`.
    pub fn composable_triples(&self) -> impl Iterator<Item = (usize, usize, usize)> + '_ {
        self.ends.iter().enumerate().flat_map(move |(f, &(_, b))| {
            self.outgoing[b].iter().map(move |&g| (g, f, self.compose(g, f)))
        })
    }

    /// Morphisms `a → b`, in increasing index order.
    pub fn hom(&self, a: usize, b: usize) -> &[usize] {
        self.hom.get(&(a, b)).map_or(&[], Vec::as_slice)
    }

    pub fn outgoing(&self, a: usize) -> &[usize] {
        &self.outgoing[a]
    }

    pub fn incoming(&self, a: usize) -> &[usize] {
        &self.incoming[a]
    }

    pub fn is_discrete(&self) -> bool {
        self.ends.len() == self.objects.len()
    }

    /// The automorphism group of `object`, with local index `i` standing
    /// for `hom(object, object)[i]`.
    pub fn automorphism_group(&self, object: usize) -> FiniteGroup {
        let loops = self.hom(object, object);
        let local: HashMap<usize, usize> = loops.iter().enumerate().map(|(i, &m)| (m, i)).collect();
        let rows: Vec<Vec<usize>> = loops
            .iter()
            .map(|&a| loops.iter().map(|&b| local[&self.compose(a, b)]).collect())
            .collect();
        FiniteGroup::from_trusted_rows(&rows)
    }

    /// Isomorphism classes as sorted object lists, ordered by least member.
    pub fn iso_classes(&self) -> Vec<Vec<usize>> {
        let n = self.objects.len();
        let mut parent: Vec<usize> = (0..n).collect();
        fn find(parent: &mut [usize], mut x: usize) -> usize {
            while parent[x] != x {
                parent[x] = parent[parent[x]];
                x = parent[x];
            }
            x
        }
        for &(a, b) in &self.ends {
            let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
            if ra != rb {
                parent[ra.max(rb)] = ra.min(rb);
            }
        }
        let mut classes: Vec<Vec<usize>> = Vec::new();
        let mut slot: HashMap<usize, usize> = HashMap::new();
        for o in 0..n {
            let r = find(&mut parent, o);
            let i = *slot.entry(r).or_insert_with(|| {
                classes.push(Vec::new());
                classes.len() - 1
            });
            classes[i].push(o);
        }
        classes
    }

    /// One component per isomorphism class, represented by its least
    /// object, with that object's automorphism group.
    pub fn skeletalize(&self) -> SkeletalGroupoid {
        let components = self
            .iso_classes()
            .into_iter()
            .map(|class| {
                let rep = class[0];
                Component::new(self.objects[rep].clone(), self.automorphism_group(rep))
            })
            .collect();
        SkeletalGroupoid::new(components).expect("object labels are unique")
    }

    /// Homotopy cardinality through the skeleton.
    pub fn cardinality(&self) -> Rational {
        self.skeletalize().cardinality()
    }

    pub fn to_dump(&self) -> GroupoidDump {
        let mut composition: Vec<(usize, usize, usize)> = self.composable_triples().collect();
        composition.sort_unstable();
        GroupoidDump {
            objects: self.objects.clone(),
            morphisms: self
                .ends
                .iter()
                .enumerate()
                .map(|(id, &(source, target))| MorphismDump { id, source, target })
                .collect(),
            composition,
        }
    }

    pub fn from_dump(dump: &GroupoidDump, budget: &Budget) -> Result<Self> {
        for (i, m) in dump.morphisms.iter().enumerate() {
            if m.id != i {
                return Err(Error::InvalidGroupoid(format!(
                    "morphism ids must be 0, 1, 2, ... in order; found {} at position {i}",
                    m.id
                )));
            }
        }
        FullGroupoid::new(
            dump.objects.clone(),
            dump.morphisms.iter().map(|m| (m.source, m.target)).collect(),
            &dump.composition,
            budget,
        )
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&self.to_dump()).expect("dumps serialize")
    }

    pub fn from_json(text: &str, budget: &Budget) -> Result<Self> {
        let dump: GroupoidDump = serde_json::from_str(text)
            .map_err(|e| Error::InvalidGroupoid(format!("malformed groupoid JSON: {e}")))?;
        FullGroupoid::from_dump(&dump, budget)
    }
}

impl fmt::Debug for FullGroupoid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "FullGroupoid({} objects, {} morphisms)",
            self.object_count(),
            self.morphism_count()
        )
    }
}

/// Direct sum over objects of `1 / (|iso class| · |aut|)`, without building
/// a skeleton.
pub fn oracle_cardinality(g: &FullGroupoid) -> Rational {
    (0..g.object_count())
        .map(|o| {
            let mut reachable: Vec<usize> = g.outgoing(o).iter().map(|&f| g.target(f)).collect();
            reachable.sort_unstable();
            reachable.dedup();
            let aut = g.hom(o, o).len();
            Rational::new(1, (reachable.len() * aut) as i64)
        })
        .sum()
}

/// JSON form of an explicit groupoid.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroupoidDump {
    pub objects: Vec<String>,
    pub morphisms: Vec<MorphismDump>,
    /// Triples `(g, f, g ∘ f)`.
    pub composition: Vec<(usize, usize, usize)>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MorphismDump {
    pub id: usize,
    pub source: usize,
    pub target: usize,
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;

    fn b() -> Budget {
        Budget::default()
    }

    /// Two objects with a single isomorphism between them.
    pub(crate) fn interval() -> FullGroupoid {
        // 0 = id_a, 1 = id_b, 2 = a → b, 3 = b → a.
        FullGroupoid::new(
            vec!["a".into(), "b".into()],
            vec![(0, 0), (1, 1), (0, 1), (1, 0)],
            &[
                (0, 0, 0),
                (1, 1, 1),
                (2, 0, 2),
                (1, 2, 2),
                (3, 1, 3),
                (0, 3, 3),
                (3, 2, 0),
                (2, 3, 1),
            ],
            &b(),
        )
        .unwrap()
    }

    #[test]
    fn oracle_examples() {
        let z2 = SkeletalGroupoid::classifying(FiniteGroup::cyclic(2, &b()).unwrap());
        assert_eq!(oracle_cardinality(&FullGroupoid::from_skeletal(&z2)), Rational::new(1, 2));
        assert!(oracle_cardinality(&interval()).is_one());
        assert!(interval().cardinality().is_one());
    }

    #[test]
    fn skeletalize_examples() {
        let d = FullGroupoid::discrete(vec!["x".into(), "y".into(), "z".into()]);
        let s = d.skeletalize();
        assert_eq!(s.len(), 3);
        assert!(s.components().iter().all(|c| c.aut.order() == 1));
        let s3 = SkeletalGroupoid::classifying(FiniteGroup::symmetric(3, &b()).unwrap());
        let back = FullGroupoid::from_skeletal(&s3).skeletalize();
        assert_eq!(back.len(), 1);
        assert_eq!(back.components()[0].aut.order(), 6);
        let i = interval().skeletalize();
        assert_eq!(i.len(), 1);
        assert_eq!(i.components()[0].label, "a");
    }

    #[test]
    fn broken_groupoids_are_rejected() {
        // Missing composite.
        assert!(FullGroupoid::new(
            vec!["a".into(), "b".into()],
            vec![(0, 0), (1, 1), (0, 1)],
            &[(0, 0, 0), (1, 1, 1), (2, 0, 2), (1, 2, 2)],
            &b()
        )
        .is_err());
        // Non-invertible arrow: composites exist but no inverse.
        assert!(FullGroupoid::new(
            vec!["a".into()],
            vec![(0, 0), (0, 0)],
            &[(0, 0, 0), (1, 0, 1), (0, 1, 1), (1, 1, 1)],
            &b()
        )
        .is_err());
    }

    #[test]
    fn products_multiply_cardinality() {
        let z2 = SkeletalGroupoid::classifying(FiniteGroup::cyclic(2, &b()).unwrap());
        let p = FullGroupoid::from_skeletal(&z2).product(&interval(), &b()).unwrap();
        p.validate(&b()).unwrap();
        assert_eq!(p.cardinality(), Rational::new(1, 2));
        assert_eq!(oracle_cardinality(&p), Rational::new(1, 2));
    }

    #[test]
    fn json_dump_round_trips() {
        let g = interval();
        let back = FullGroupoid::from_json(&g.to_json(), &b()).unwrap();
        assert_eq!(back, g);
        assert!(FullGroupoid::from_json("{\"objects\": 3}", &b()).is_err());
    }

    #[test]
    fn functor_checks() {
        let g = interval();
        let swap = Functor {
            objects: vec![1, 0],
            morphisms: vec![1, 0, 3, 2],
        };
        swap.check(&g, &g).unwrap();
        assert!(swap.is_bijective());
        assert_eq!(swap.after(&swap), Functor::identity(&g));
        let bad = Functor {
            objects: vec![1, 0],
            morphisms: vec![1, 0, 2, 3],
        };
        assert!(bad.check(&g, &g).is_err());
    }
}
