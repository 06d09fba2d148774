//! Finite groups as closed multiplication tables, with the combinatorial
//! subroutines the groupoid constructions need.

use std::collections::{HashMap, HashSet, VecDeque};
use std::fmt;

use crate::budget::Budget;
use crate::error::{Error, Result};

/// A finite group over the element indices `0..order`.
///
/// Tables coming from outside are validated (Latin square, identity,
/// inverses, associativity). Derived groups such as subgroups and direct
/// products are built straight from a parent that is already valid.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct FiniteGroup {
    order: usize,
    table: Vec<u32>,
    identity: usize,
    inverse: Vec<usize>,
    generators: Vec<usize>,
}

/// Constructor syntax shared with the DSL.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GroupSpec {
    Cyclic(usize),
    Symmetric(usize),
    Dihedral(usize),
    Product(Box<GroupSpec>, Box<GroupSpec>),
    Table(Vec<Vec<usize>>),
    Perms(Vec<Vec<usize>>),
}

impl GroupSpec {
    pub fn build(&self, budget: &Budget) -> Result<FiniteGroup> {
        match self {
            GroupSpec::Cyclic(n) => FiniteGroup::cyclic(*n, budget),
            GroupSpec::Symmetric(n) => FiniteGroup::symmetric(*n, budget),
            GroupSpec::Dihedral(n) => FiniteGroup::dihedral(*n, budget),
            GroupSpec::Product(a, b) => {
                let a = a.build(budget)?;
                let b = b.build(budget)?;
                FiniteGroup::direct_product(&a, &b, budget)
            }
            GroupSpec::Table(rows) => FiniteGroup::from_table(rows),
            GroupSpec::Perms(gens) => FiniteGroup::from_permutations(gens, budget),
        }
    }
}

impl fmt::Display for GroupSpec {
    /// DSL syntax; parses back to the same group.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fn lists(f: &mut fmt::Formatter<'_>, name: &str, rows: &[Vec<usize>]) -> fmt::Result {
            let rows: Vec<String> = rows
                .iter()
                .map(|r| format!("[{}]", r.iter().map(usize::to_string).collect::<Vec<_>>().join(", ")))
                .collect();
            write!(f, "{name}({})", rows.join(", "))
        }
        match self {
            GroupSpec::Cyclic(n) => write!(f, "cyclic({n})"),
            GroupSpec::Symmetric(n) => write!(f, "sym({n})"),
            GroupSpec::Dihedral(n) => write!(f, "dihedral({n})"),
            GroupSpec::Product(a, b) => write!(f, "product({a}, {b})"),
            GroupSpec::Table(rows) => lists(f, "table", rows),
            GroupSpec::Perms(gens) => lists(f, "perms", gens),
        }
    }
}

fn check_order(n: usize, budget: &Budget) -> Result<()> {
    if n == 0 {
        return Err(Error::InvalidGroup("group order must be at least 1".into()));
    }
    if n > budget.max_group_order {
        return Err(Error::resource("group order", n, budget.max_group_order));
    }
    Ok(())
}

impl FiniteGroup {
    /// Build from a table whose group axioms are already known to hold.
    fn trusted(order: usize, table: Vec<u32>, identity: usize) -> Self {
        debug_assert_eq!(table.len(), order * order);
        let mut inverse = vec![usize::MAX; order];
        for a in 0..order {
            for b in 0..order {
                if table[a * order + b] as usize == identity {
                    inverse[a] = b;
                    break;
                }
            }
        }
        let mut group = FiniteGroup {
            order,
            table,
            identity,
            inverse,
            generators: Vec::new(),
        };
        group.generators = group.greedy_generators();
        group
    }

    pub fn trivial() -> Self {
        FiniteGroup::trusted(1, vec![0], 0)
    }

    /// Rows of a table known to be a group, such as the loops at one object
    /// of a valid groupoid.
    pub(crate) fn from_trusted_rows(rows: &[Vec<usize>]) -> Self {
        let n = rows.len();
        let identity = (0..n)
            .find(|&e| (0..n).all(|x| rows[e][x] == x))
            .expect("a group table has an identity row");
        let table = rows.iter().flatten().map(|&x| x as u32).collect();
        FiniteGroup::trusted(n, table, identity)
    }

    /// Validates the table and reports the first violation found.
    pub fn from_table(rows: &[Vec<usize>]) -> Result<Self> {
        let n = rows.len();
        if n == 0 {
            return Err(Error::InvalidGroup("empty multiplication table".into()));
        }
        for (i, row) in rows.iter().enumerate() {
            if row.len() != n {
                return Err(Error::InvalidGroup(format!(
                    "row {i} has {} entries, expected {n}",
                    row.len()
                )));
            }
            if let Some(&x) = row.iter().find(|&&x| x >= n) {
                return Err(Error::InvalidGroup(format!("row {i} contains out-of-range entry {x}")));
            }
        }
        for i in 0..n {
            let mut seen_row = vec![false; n];
            let mut seen_col = vec![false; n];
            for j in 0..n {
                if std::mem::replace(&mut seen_row[rows[i][j]], true) {
                    return Err(Error::InvalidGroup(format!(
                        "not a Latin square: row {i} repeats {}",
                        rows[i][j]
                    )));
                }
                if std::mem::replace(&mut seen_col[rows[j][i]], true) {
                    return Err(Error::InvalidGroup(format!(
                        "not a Latin square: column {i} repeats {}",
                        rows[j][i]
                    )));
                }
            }
        }
        let identity = (0..n)
            .find(|&e| (0..n).all(|x| rows[e][x] == x && rows[x][e] == x))
            .ok_or_else(|| Error::InvalidGroup("no two-sided identity element".into()))?;
        for a in 0..n {
            if !(0..n).any(|b| rows[a][b] == identity && rows[b][a] == identity) {
                return Err(Error::InvalidGroup(format!("element {a} has no two-sided inverse")));
            }
        }
        for a in 0..n {
            for b in 0..n {
                let ab = rows[a][b];
                for c in 0..n {
                    if rows[ab][c] != rows[a][rows[b][c]] {
                        return Err(Error::InvalidGroup(format!(
                            "associativity fails for ({a}, {b}, {c}): ({a}·{b})·{c} = {} but {a}·({b}·{c}) = {}",
                            rows[ab][c],
                            rows[a][rows[b][c]]
                        )));
                    }
                }
            }
        }
        let table = rows.iter().flatten().map(|&x| x as u32).collect();
        Ok(FiniteGroup::trusted(n, table, identity))
    }

    /// Integers mod `n` under addition.
    pub fn cyclic(n: usize, budget: &Budget) -> Result<Self> {
        check_order(n, budget)?;
        let table = (0..n)
            .flat_map(|a| (0..n).map(move |b| ((a + b) % n) as u32))
            .collect();
        Ok(FiniteGroup::trusted(n, table, 0))
    }

    /// Symmetries of the regular `n`-gon, order `2n`. Element `k + n·b` is
    /// `r^k s^b`.
    pub fn dihedral(n: usize, budget: &Budget) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidGroup("dihedral(n) needs n >= 1".into()));
        }
        let order = 2 * n;
        check_order(order, budget)?;
        let mut table = Vec::with_capacity(order * order);
        for x in 0..order {
            let (a, b) = (x % n, x / n);
            for y in 0..order {
                let (c, d) = (y % n, y / n);
                let k = if b == 0 { (a + c) % n } else { (a + n - c) % n };
                table.push((k + n * (b ^ d)) as u32);
            }
        }
        Ok(FiniteGroup::trusted(order, table, 0))
    }

    /// All permutations of `0..n` in lexicographic order of their image
    /// lists; index 0 is the identity.
    pub fn symmetric(n: usize, budget: &Budget) -> Result<Self> {
        let order = (1..=n).try_fold(1usize, |acc, k| acc.checked_mul(k));
        match order {
            Some(o) if o <= budget.max_group_order => {}
            _ => {
                return Err(Error::resource(
                    format!("sym({n}) order"),
                    order.map_or_else(|| "overflow".to_string(), |o| o.to_string()),
                    budget.max_group_order,
                ))
            }
        }
        let mut perms = Vec::new();
        let mut current: Vec<usize> = (0..n).collect();
        loop {
            perms.push(current.clone());
            if !next_permutation(&mut current) {
                break;
            }
        }
        Ok(FiniteGroup::from_sorted_permutations(perms))
    }

    /// The subgroup of `Sym(m)` generated by the given permutations in image
    /// notation (`p[i]` is the image of `i`).
    pub fn from_permutations(generators: &[Vec<usize>], budget: &Budget) -> Result<Self> {
        let m = generators.first().map_or(0, Vec::len);
        for (k, p) in generators.iter().enumerate() {
            if p.len() != m {
                return Err(Error::InvalidGroup(format!(
                    "permutation {k} has length {}, expected {m}",
                    p.len()
                )));
            }
            let mut seen = vec![false; m];
            for &x in p {
                if x >= m || std::mem::replace(&mut seen[x], true) {
                    return Err(Error::InvalidGroup(format!(
                        "permutation {k} {p:?} is not a bijection of 0..{m}"
                    )));
                }
            }
        }
        let identity: Vec<usize> = (0..m).collect();
        let mut seen: HashSet<Vec<usize>> = HashSet::from([identity.clone()]);
        let mut queue = VecDeque::from([identity]);
        while let Some(x) = queue.pop_front() {
            for g in generators {
                let y = compose_perm(&x, g);
                if !seen.contains(&y) {
                    if seen.len() >= budget.max_group_order {
                        return Err(Error::resource(
                            "permutation group order",
                            format!("> {}", budget.max_group_order),
                            budget.max_group_order,
                        ));
                    }
                    seen.insert(y.clone());
                    queue.push_back(y);
                }
            }
        }
        let mut perms: Vec<Vec<usize>> = seen.into_iter().collect();
        perms.sort();
        Ok(FiniteGroup::from_sorted_permutations(perms))
    }

    fn from_sorted_permutations(perms: Vec<Vec<usize>>) -> Self {
        let index: HashMap<&[usize], usize> =
            perms.iter().enumerate().map(|(i, p)| (p.as_slice(), i)).collect();
        let n = perms.len();
        let mut table = Vec::with_capacity(n * n);
        for a in &perms {
            for b in &perms {
                table.push(index[compose_perm(a, b).as_slice()] as u32);
            }
        }
        FiniteGroup::trusted(n, table, 0)
    }

    /// Element `(a, b)` has index `a·|B| + b`.
    pub fn direct_product(a: &FiniteGroup, b: &FiniteGroup, budget: &Budget) -> Result<Self> {
        let order = a
            .order
            .checked_mul(b.order)
            .ok_or_else(|| Error::resource("direct product order", "overflow", budget.max_group_order))?;
        check_order(order, budget)?;
        let mut table = Vec::with_capacity(order * order);
        for x in 0..order {
            let (xa, xb) = (x / b.order, x % b.order);
            for y in 0..order {
                let (ya, yb) = (y / b.order, y % b.order);
                table.push((a.mul(xa, ya) * b.order + b.mul(xb, yb)) as u32);
            }
        }
        Ok(FiniteGroup::trusted(order, table, a.identity * b.order + b.identity))
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn identity(&self) -> usize {
        self.identity
    }

    pub fn generators(&self) -> &[usize] {
        &self.generators
    }

    pub fn elements(&self) -> std::ops::Range<usize> {
        0..self.order
    }

    #[inline]
    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a * self.order + b] as usize
    }

    #[inline]
    pub fn inv(&self, a: usize) -> usize {
        self.inverse[a]
    }

    pub fn conjugate(&self, g: usize, x: usize) -> usize {
        self.mul(self.mul(g, x), self.inv(g))
    }

    pub fn table_rows(&self) -> Vec<Vec<usize>> {
        (0..self.order)
            .map(|a| (0..self.order).map(|b| self.mul(a, b)).collect())
            .collect()
    }

    pub fn element_order(&self, a: usize) -> usize {
        let mut k = 1;
        let mut x = a;
        while x != self.identity {
            x = self.mul(x, a);
            k += 1;
        }
        k
    }

    pub fn is_abelian(&self) -> bool {
        self.elements()
            .all(|a| (0..a).all(|b| self.mul(a, b) == self.mul(b, a)))
    }

    pub fn exponent(&self) -> usize {
        self.elements()
            .map(|a| self.element_order(a))
            .fold(1, num_integer::lcm)
    }

    /// Sorted elements of the subgroup generated by `gens`.
    pub fn closure(&self, gens: &[usize]) -> Vec<usize> {
        let mut seen = vec![false; self.order];
        seen[self.identity] = true;
        let mut queue = VecDeque::from([self.identity]);
        while let Some(x) = queue.pop_front() {
            for &s in gens {
                let y = self.mul(x, s);
                if !seen[y] {
                    seen[y] = true;
                    queue.push_back(y);
                }
            }
        }
        (0..self.order).filter(|&x| seen[x]).collect()
    }

    fn greedy_generators(&self) -> Vec<usize> {
        let mut gens: Vec<usize> = Vec::new();
        let mut covered = vec![false; self.order];
        covered[self.identity] = true;
        let mut size = 1;
        while size < self.order {
            let mut best: Option<(usize, Vec<usize>)> = None;
            for g in self.elements().filter(|&g| !covered[g]) {
                gens.push(g);
                let span = self.closure(&gens);
                gens.pop();
                if best.as_ref().map_or(true, |(_, b)| span.len() > b.len()) {
                    best = Some((g, span));
                }
            }
            let (g, span) = best.expect("an uncovered element exists");
            gens.push(g);
            size = span.len();
            for x in span {
                covered[x] = true;
            }
        }
        if gens.is_empty() {
            gens.push(self.identity);
        }
        gens
    }

    /// The subgroup on `elements` (sorted, closed under multiplication),
    /// re-indexed as a standalone group, together with its embedding.
    pub fn subgroup(&self, elements: &[usize]) -> (FiniteGroup, Vec<usize>) {
        let position: HashMap<usize, usize> =
            elements.iter().enumerate().map(|(i, &x)| (x, i)).collect();
        let n = elements.len();
        let mut table = Vec::with_capacity(n * n);
        for &a in elements {
            for &b in elements {
                table.push(position[&self.mul(a, b)] as u32);
            }
        }
        let identity = position[&self.identity];
        (FiniteGroup::trusted(n, table, identity), elements.to_vec())
    }

    /// Orbits of the conjugation action, each sorted, ordered by least
    /// element. The identity's class comes first when it is index 0.
    pub fn conjugacy_classes(&self) -> Vec<Vec<usize>> {
        let mut class_of = vec![usize::MAX; self.order];
        let mut classes = Vec::new();
        for x in self.elements() {
            if class_of[x] != usize::MAX {
                continue;
            }
            let mut class: Vec<usize> = self.elements().map(|g| self.conjugate(g, x)).collect();
            class.sort_unstable();
            class.dedup();
            for &y in &class {
                class_of[y] = classes.len();
            }
            classes.push(class);
        }
        classes
    }

    pub fn centralizer_elements(&self, s: usize) -> Vec<usize> {
        self.elements()
            .filter(|&h| self.mul(h, s) == self.mul(s, h))
            .collect()
    }

    pub fn centralizer(&self, s: usize) -> FiniteGroup {
        self.subgroup(&self.centralizer_elements(s)).0
    }

    pub fn center_elements(&self) -> Vec<usize> {
        self.elements()
            .filter(|&z| self.elements().all(|g| self.mul(z, g) == self.mul(g, z)))
            .collect()
    }

    pub fn center(&self) -> FiniteGroup {
        self.subgroup(&self.center_elements()).0
    }

    /// For every non-identity element, a `(parent, generator position)`
    /// with `x = parent · generators[pos]`, plus the breadth-first order.
    fn word_tree(&self) -> (Vec<Option<(usize, usize)>>, Vec<usize>) {
        let mut parent = vec![None; self.order];
        let mut seen = vec![false; self.order];
        seen[self.identity] = true;
        let mut order = vec![self.identity];
        let mut i = 0;
        while i < order.len() {
            let x = order[i];
            i += 1;
            for (pos, &s) in self.generators.iter().enumerate() {
                let y = self.mul(x, s);
                if !seen[y] {
                    seen[y] = true;
                    parent[y] = Some((x, pos));
                    order.push(y);
                }
            }
        }
        (parent, order)
    }

    /// Extend a map on generators multiplicatively along the word tree.
    /// `combine(image_of_parent, generator_position)` returns the image of
    /// the child. The result is only meaningful after a consistency check.
    pub fn extend_along_words<T: Clone>(
        &self,
        root: T,
        mut combine: impl FnMut(&T, usize, usize) -> T,
    ) -> Vec<T> {
        let (parent, order) = self.word_tree();
        let mut out: Vec<Option<T>> = vec![None; self.order];
        out[self.identity] = Some(root);
        for &x in order.iter().skip(1) {
            let (p, pos) = parent[x].expect("non-root has a parent");
            let v = combine(out[p].as_ref().expect("parent visited first"), p, pos);
            out[x] = Some(v);
        }
        out.into_iter().map(|v| v.expect("generators span the group")).collect()
    }

    /// Order, commutativity and exponent, for report labels.
    pub fn summary(&self) -> String {
        format!(
            "order {}, {}, exponent {}",
            self.order,
            if self.is_abelian() { "abelian" } else { "nonabelian" },
            self.exponent()
        )
    }
}

impl fmt::Debug for FiniteGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FiniteGroup({})", self.summary())
    }
}

/// `(a ∘ b)(i) = a(b(i))`.
pub fn compose_perm(a: &[usize], b: &[usize]) -> Vec<usize> {
    b.iter().map(|&i| a[i]).collect()
}

fn next_permutation(v: &mut [usize]) -> bool {
    if v.len() < 2 {
        return false;
    }
    let mut i = v.len() - 1;
    while i > 0 && v[i - 1] >= v[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = v.len() - 1;
    while v[j] <= v[i - 1] {
        j -= 1;
    }
    v.swap(i - 1, j);
    v[i..].reverse();
    true
}

/// A homomorphism between two finite groups, stored as its full image map.
#[derive(Clone, PartialEq, Eq)]
pub struct GroupHom<'g> {
    pub source: &'g FiniteGroup,
    pub target: &'g FiniteGroup,
    image: Vec<usize>,
}

impl<'g> GroupHom<'g> {
    /// Checks the homomorphism law on the full table.
    pub fn new(source: &'g FiniteGroup, target: &'g FiniteGroup, image: Vec<usize>) -> Result<Self> {
        let hom = GroupHom { source, target, image };
        if hom.image.len() != source.order() || hom.image.iter().any(|&y| y >= target.order()) {
            return Err(Error::InvalidGroup("image map has the wrong shape".into()));
        }
        if let Some((a, b)) = hom.first_violation() {
            return Err(Error::InvalidGroup(format!("not a homomorphism at ({a}, {b})")));
        }
        Ok(hom)
    }

    fn first_violation(&self) -> Option<(usize, usize)> {
        if self.image[self.source.identity()] != self.target.identity() {
            return Some((self.source.identity(), self.source.identity()));
        }
        for a in self.source.elements() {
            for b in self.source.elements() {
                let lhs = self.image[self.source.mul(a, b)];
                let rhs = self.target.mul(self.image[a], self.image[b]);
                if lhs != rhs {
                    return Some((a, b));
                }
            }
        }
        None
    }

    pub fn apply(&self, x: usize) -> usize {
        self.image[x]
    }

    pub fn image(&self) -> &[usize] {
        &self.image
    }

    /// Images of the source's generators.
    pub fn generator_images(&self) -> Vec<usize> {
        self.source.generators().iter().map(|&s| self.image[s]).collect()
    }
}

impl fmt::Debug for GroupHom<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GroupHom{:?}", self.image)
    }
}

/// Every homomorphism `g → h`, in lexicographic order of generator images.
///
/// Only generator images are chosen; the rest follows along words, and
/// assignments that violate a relation are discarded.
pub fn enumerate_homomorphisms<'g>(
    g: &'g FiniteGroup,
    h: &'g FiniteGroup,
    budget: &Budget,
) -> Result<Vec<GroupHom<'g>>> {
    let gens = g.generators();
    let worst = (h.order() as u64).checked_pow(gens.len() as u32);
    match worst {
        Some(c) if c <= budget.max_candidates => {}
        _ => {
            return Err(Error::resource(
                "homomorphism candidates",
                worst.map_or_else(|| "overflow".to_string(), |c| c.to_string()),
                budget.max_candidates,
            ))
        }
    }
    let candidates: Vec<Vec<usize>> = gens
        .iter()
        .map(|&s| {
            let k = g.element_order(s);
            h.elements().filter(|&y| k % h.element_order(y) == 0).collect()
        })
        .collect();
    if candidates.iter().any(Vec::is_empty) {
        return Ok(Vec::new());
    }
    let mut out = Vec::new();
    let mut choice = vec![0usize; gens.len()];
    loop {
        let images: Vec<usize> = choice.iter().zip(&candidates).map(|(&c, cs)| cs[c]).collect();
        let image = g.extend_along_words(h.identity(), |&parent, _, pos| h.mul(parent, images[pos]));
        let consistent = g.elements().all(|x| {
            images
                .iter()
                .zip(gens)
                .all(|(&y, &s)| image[g.mul(x, s)] == h.mul(image[x], y))
        });
        if consistent {
            let hom = GroupHom { source: g, target: h, image };
            debug_assert!(hom.first_violation().is_none());
            if hom.first_violation().is_none() {
                out.push(hom);
            }
        }
        // Odometer over candidate lists.
        let mut i = choice.len();
        loop {
            if i == 0 {
                return Ok(out);
            }
            i -= 1;
            choice[i] += 1;
            if choice[i] < candidates[i].len() {
                break;
            }
            choice[i] = 0;
        }
    }
}

/// Conjugacy classes of homomorphisms `g → h` under post-conjugation by
/// `h`, each with its stabilizer (the centralizer of the image).
pub fn hom_classes<'g>(
    g: &'g FiniteGroup,
    h: &'g FiniteGroup,
    budget: &Budget,
) -> Result<Vec<(GroupHom<'g>, FiniteGroup)>> {
    let homs = enumerate_homomorphisms(g, h, budget)?;
    let index: HashMap<&[usize], usize> =
        homs.iter().enumerate().map(|(i, f)| (f.image(), i)).collect();
    let mut visited = vec![false; homs.len()];
    let mut out = Vec::new();
    let mut accounted = 0usize;
    for (i, f) in homs.iter().enumerate() {
        if visited[i] {
            continue;
        }
        let mut orbit = 0usize;
        for k in h.elements() {
            let conj: Vec<usize> = f.image().iter().map(|&y| h.conjugate(k, y)).collect();
            let j = index[conj.as_slice()];
            if !visited[j] {
                visited[j] = true;
                orbit += 1;
            }
        }
        let gen_images = f.generator_images();
        let stab: Vec<usize> = h
            .elements()
            .filter(|&k| gen_images.iter().all(|&y| h.mul(k, y) == h.mul(y, k)))
            .collect();
        assert_eq!(orbit * stab.len(), h.order(), "orbit-stabilizer");
        accounted += orbit;
        out.push((f.clone(), h.subgroup(&stab).0));
    }
    assert_eq!(accounted, homs.len(), "hom classes partition the homomorphisms");
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn b() -> Budget {
        Budget::default()
    }

    #[test]
    fn basic_orders() {
        let c4 = FiniteGroup::cyclic(4, &b()).unwrap();
        assert_eq!(c4.order(), 4);
        assert!(c4.is_abelian());
        let s3 = FiniteGroup::symmetric(3, &b()).unwrap();
        assert_eq!(s3.order(), 6);
        assert!(!s3.is_abelian());
        assert_eq!(FiniteGroup::dihedral(4, &b()).unwrap().order(), 8);
        assert_eq!(FiniteGroup::symmetric(0, &b()).unwrap().order(), 1);
    }

    #[test]
    fn klein_has_exponent_two() {
        let c2 = FiniteGroup::cyclic(2, &b()).unwrap();
        let v = FiniteGroup::direct_product(&c2, &c2, &b()).unwrap();
        assert_eq!(v.order(), 4);
        for x in v.elements().filter(|&x| x != v.identity()) {
            assert_eq!(v.mul(x, x), v.identity());
        }
    }

    #[test]
    fn invalid_tables_are_rejected() {
        assert!(FiniteGroup::from_table(&[]).is_err());
        assert!(FiniteGroup::from_table(&[vec![0, 1], vec![0, 1]]).is_err());
        // A Latin square with identity 0 that is not associative.
        let loop5 = vec![
            vec![0, 1, 2, 3, 4],
            vec![1, 0, 3, 4, 2],
            vec![2, 4, 0, 1, 3],
            vec![3, 2, 4, 0, 1],
            vec![4, 3, 1, 2, 0],
        ];
        let err = FiniteGroup::from_table(&loop5).unwrap_err().to_string();
        assert!(err.contains("associativity fails for ("), "{err}");
        assert!(FiniteGroup::from_permutations(&[vec![0, 0]], &b()).is_err());
        assert!(FiniteGroup::from_permutations(&[vec![1, 0], vec![0, 1, 2]], &b()).is_err());
    }

    #[test]
    fn permutations_generate_s3() {
        let g = FiniteGroup::from_permutations(&[vec![1, 0, 2], vec![1, 2, 0]], &b()).unwrap();
        assert_eq!(g, FiniteGroup::symmetric(3, &b()).unwrap());
    }

    #[test]
    fn symmetric_index_layout() {
        let s3 = FiniteGroup::symmetric(3, &b()).unwrap();
        // 0 = id, 1 = (1 2), 2 = (0 1), 3 and 4 are 3-cycles, 5 = (0 2).
        assert_eq!(s3.element_order(1), 2);
        assert_eq!(s3.element_order(2), 2);
        assert_eq!(s3.element_order(3), 3);
        assert_eq!(s3.element_order(4), 3);
        assert_eq!(s3.element_order(5), 2);
    }

    #[test]
    fn generators_generate() {
        for g in [
            FiniteGroup::symmetric(4, &b()).unwrap(),
            FiniteGroup::dihedral(5, &b()).unwrap(),
            FiniteGroup::trivial(),
        ] {
            assert!(!g.generators().is_empty());
            assert_eq!(g.closure(g.generators()).len(), g.order());
        }
        assert_eq!(FiniteGroup::cyclic(6, &b()).unwrap().generators(), &[1]);
    }

    #[test]
    fn class_and_centralizer_examples() {
        let s3 = FiniteGroup::symmetric(3, &b()).unwrap();
        let sizes: Vec<usize> = s3.conjugacy_classes().iter().map(Vec::len).collect();
        assert_eq!(sizes, vec![1, 3, 2]);
        assert_eq!(s3.centralizer(1).order(), 2);
        assert_eq!(s3.centralizer(3).order(), 3);
        assert_eq!(s3.centralizer(0).order(), 6);
        assert_eq!(s3.center().order(), 1);
        assert_eq!(FiniteGroup::cyclic(4, &b()).unwrap().center().order(), 4);
        assert_eq!(FiniteGroup::dihedral(4, &b()).unwrap().center().order(), 2);
        assert_eq!(FiniteGroup::cyclic(5, &b()).unwrap().conjugacy_classes().len(), 5);
    }

    #[test]
    fn homomorphism_counts() {
        let z2 = FiniteGroup::cyclic(2, &b()).unwrap();
        let z3 = FiniteGroup::cyclic(3, &b()).unwrap();
        let s3 = FiniteGroup::symmetric(3, &b()).unwrap();
        assert_eq!(enumerate_homomorphisms(&z2, &z2, &b()).unwrap().len(), 2);
        assert_eq!(enumerate_homomorphisms(&z2, &s3, &b()).unwrap().len(), 4);
        assert_eq!(enumerate_homomorphisms(&s3, &z3, &b()).unwrap().len(), 1);
        let t = FiniteGroup::trivial();
        assert_eq!(enumerate_homomorphisms(&s3, &t, &b()).unwrap().len(), 1);
        assert_eq!(enumerate_homomorphisms(&t, &s3, &b()).unwrap().len(), 1);
    }

    #[test]
    fn hom_class_examples() {
        let z2 = FiniteGroup::cyclic(2, &b()).unwrap();
        let z3 = FiniteGroup::cyclic(3, &b()).unwrap();
        let s3 = FiniteGroup::symmetric(3, &b()).unwrap();
        let c = hom_classes(&z2, &z2, &b()).unwrap();
        assert_eq!(c.iter().map(|(_, s)| s.order()).collect::<Vec<_>>(), vec![2, 2]);
        let c = hom_classes(&z3, &z2, &b()).unwrap();
        assert_eq!(c.iter().map(|(_, s)| s.order()).collect::<Vec<_>>(), vec![2]);
        let c = hom_classes(&z2, &s3, &b()).unwrap();
        assert_eq!(c.iter().map(|(_, s)| s.order()).collect::<Vec<_>>(), vec![6, 2]);
    }

    #[test]
    fn budget_refuses_large_enumerations() {
        let tight = Budget {
            max_candidates: 10,
            ..Budget::default()
        };
        let g = FiniteGroup::cyclic(2, &b()).unwrap();
        let v = FiniteGroup::direct_product(&g, &g, &b()).unwrap();
        let s4 = FiniteGroup::symmetric(4, &b()).unwrap();
        let err = enumerate_homomorphisms(&v, &s4, &tight).unwrap_err();
        assert!(err.is_resource());
        assert!(FiniteGroup::cyclic(10_000, &b()).unwrap_err().is_resource());
    }
}
