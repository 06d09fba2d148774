//! Brute-force references that share no code path with the structural
//! enumerations they cross-check.

use crate::arith::Rational;
use crate::budget::Budget;
use crate::error::{Error, Result};
use crate::group::FiniteGroup;
use crate::groupoid::{FullGroupoid, Functor};

/// Explicit-groupoid size limits for the brute-force functor oracle.
pub const MAX_ORACLE_OBJECTS: usize = 6;
pub const MAX_ORACLE_AUT: usize = 6;

/// Every map `g → h` that satisfies the homomorphism law, in
/// lexicographic order of the image vector.
pub fn naive_homomorphisms(g: &FiniteGroup, h: &FiniteGroup, budget: &Budget) -> Result<Vec<Vec<usize>>> {
    let total = (h.order() as u64).checked_pow(g.order() as u32);
    if total.map_or(true, |t| t > budget.max_candidates) {
        return Err(Error::resource(
            "naive maps",
            total.map_or_else(|| "overflow".to_string(), |t| t.to_string()),
            budget.max_candidates,
        ));
    }
    let mut out = Vec::new();
    let mut image = vec![0usize; g.order()];
    loop {
        if g
            .elements()
            .all(|a| g.elements().all(|b| image[g.mul(a, b)] == h.mul(image[a], image[b])))
        {
            out.push(image.clone());
        }
        let mut i = image.len();
        loop {
            if i == 0 {
                return Ok(out);
            }
            i -= 1;
            image[i] += 1;
            if image[i] < h.order() {
                break;
            }
            image[i] = 0;
        }
    }
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct NaiveFunctors {
    pub cardinality: Rational,
    pub functors: usize,
    pub classes: usize,
}

fn check_size(g: &FullGroupoid, which: &str) -> Result<()> {
    if g.object_count() > MAX_ORACLE_OBJECTS {
        return Err(Error::resource(format!("{which} objects for the functor oracle"), g.object_count(), MAX_ORACLE_OBJECTS));
    }
    for o in 0..g.object_count() {
        let n = g.hom(o, o).len();
        if n > MAX_ORACLE_AUT {
            return Err(Error::resource(format!("{which} automorphisms for the functor oracle"), n, MAX_ORACLE_AUT));
        }
    }
    Ok(())
}

struct Search<'a> {
    a: &'a FullGroupoid,
    b: &'a FullGroupoid,
    /// Composable triples `(g, f, g∘f)` of `a`, grouped by largest index.
    ready: Vec<Vec<(usize, usize, usize)>>,
    steps: u64,
    limit: u64,
    found: Vec<Functor>,
}

impl Search<'_> {
    fn tick(&mut self) -> Result<()> {
        self.steps += 1;
        if self.steps > self.limit {
            return Err(Error::resource("functor oracle steps", self.steps, self.limit));
        }
        Ok(())
    }

    fn objects(&mut self, objects: &mut Vec<usize>) -> Result<()> {
        if objects.len() == self.a.object_count() {
            let mut morphisms = Vec::with_capacity(self.a.morphism_count());
            return self.morphisms(objects, &mut morphisms);
        }
        for x in 0..self.b.object_count() {
            self.tick()?;
            objects.push(x);
            self.objects(objects)?;
            objects.pop();
        }
        Ok(())
    }

    fn morphisms(&mut self, objects: &[usize], morphisms: &mut Vec<usize>) -> Result<()> {
        let k = morphisms.len();
        if k == self.a.morphism_count() {
            self.found.push(Functor {
                objects: objects.to_vec(),
                morphisms: morphisms.clone(),
            });
            return Ok(());
        }
        let (u, v) = (self.a.source(k), self.a.target(k));
        let candidates = self.b.hom(objects[u], objects[v]).to_vec();
        for m in candidates {
            self.tick()?;
            morphisms.push(m);
            let b = self.b;
            let ok = self.ready[k]
                .iter()
                .all(|&(g, f, gf)| b.compose(morphisms[g], morphisms[f]) == morphisms[gf]);
            if ok {
                self.morphisms(objects, morphisms)?;
            }
            morphisms.pop();
        }
        Ok(())
    }
}

/// Natural isomorphisms `f ⇒ g`: families `α_u : f(u) → g(u)` with
/// `g(m) ∘ α_u = α_v ∘ f(m)`. Counts them, stopping after `stop_after`.
fn count_nat_isos(a: &FullGroupoid, b: &FullGroupoid, f: &Functor, g: &Functor, stop_after: usize) -> usize {
    fn go(a: &FullGroupoid, b: &FullGroupoid, f: &Functor, g: &Functor, alpha: &mut Vec<usize>, count: &mut usize, stop: usize) {
        if *count >= stop {
            return;
        }
        let u = alpha.len();
        if u == a.object_count() {
            *count += 1;
            return;
        }
        for &c in b.hom(f.objects[u], g.objects[u]) {
            alpha.push(c);
            // Every arrow between objects already assigned, touching u.
            let natural = (0..a.morphism_count()).all(|m| {
                let (s, t) = (a.source(m), a.target(m));
                if s.max(t) != u {
                    return true;
                }
                b.compose(g.morphisms[m], alpha[s]) == b.compose(alpha[t], f.morphisms[m])
            });
            if natural {
                go(a, b, f, g, alpha, count, stop);
            }
            alpha.pop();
        }
    }
    let mut count = 0;
    go(a, b, f, g, &mut Vec::new(), &mut count, stop_after);
    count
}

/// `|Fun(a, b)|` by enumerating every object map and morphism map that is
/// functorial, then grouping functors by natural isomorphism.
pub fn naive_functor_cardinality(a: &FullGroupoid, b: &FullGroupoid, budget: &Budget) -> Result<NaiveFunctors> {
    check_size(a, "source")?;
    check_size(b, "target")?;
    let mut ready = vec![Vec::new(); a.morphism_count()];
    for f in 0..a.morphism_count() {
        for g in 0..a.morphism_count() {
            if let Some(gf) = a.try_compose(g, f) {
                ready[f.max(g).max(gf)].push((g, f, gf));
            }
        }
    }
    let mut search = Search {
        a,
        b,
        ready,
        steps: 0,
        limit: budget.max_candidates,
        found: Vec::new(),
    };
    search.objects(&mut Vec::new())?;
    let functors = search.found;
    let n = functors.len();
    let pairs = (n as u64).saturating_mul(n as u64);
    if pairs > budget.max_candidates {
        return Err(Error::resource("functor pairs for the oracle", pairs, budget.max_candidates));
    }

    let mut class_of = vec![usize::MAX; n];
    let mut cardinality = Rational::zero();
    let mut classes = 0;
    for i in 0..n {
        if class_of[i] != usize::MAX {
            continue;
        }
        class_of[i] = classes;
        for j in i + 1..n {
            if class_of[j] == usize::MAX && count_nat_isos(a, b, &functors[i], &functors[j], 1) > 0 {
                class_of[j] = classes;
            }
        }
        let aut = count_nat_isos(a, b, &functors[i], &functors[i], usize::MAX);
        cardinality = cardinality + Rational::new(1, aut as i64);
        classes += 1;
    }
    Ok(NaiveFunctors {
        cardinality,
        functors: n,
        classes,
    })
}
