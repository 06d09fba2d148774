use std::collections::HashSet;
use std::fmt;

use crate::arith::Rational;
use crate::budget::Budget;
use crate::error::{Error, Result};
use crate::group::FiniteGroup;
use crate::util::natural_cmp;

/// One isomorphism class of objects together with its automorphism group.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Component {
    pub label: String,
    pub aut: FiniteGroup,
}

impl Component {
    pub fn new(label: impl Into<String>, aut: FiniteGroup) -> Self {
        Component {
            label: label.into(),
            aut,
        }
    }
}

/// A groupoid with one object per isomorphism class.
///
/// Components are kept in canonical order: increasing automorphism group
/// order (so decreasing mass `1/|aut|`), ties broken by natural label order.
#[derive(Clone, PartialEq, Eq, Default)]
pub struct SkeletalGroupoid {
    components: Vec<Component>,
}

pub(crate) fn canonical_order(a: (&str, &FiniteGroup), b: (&str, &FiniteGroup)) -> std::cmp::Ordering {
    a.1.order()
        .cmp(&b.1.order())
        .then_with(|| natural_cmp(a.0, b.0))
}

impl SkeletalGroupoid {
    /// Rejects duplicate labels.
    pub fn new(mut components: Vec<Component>) -> Result<Self> {
        let mut seen = HashSet::new();
        for c in &components {
            if !seen.insert(c.label.as_str()) {
                return Err(Error::InvalidGroupoid(format!("duplicate component label `{}`", c.label)));
            }
        }
        components.sort_by(|a, b| canonical_order((&a.label, &a.aut), (&b.label, &b.aut)));
        Ok(SkeletalGroupoid { components })
    }

    /// The empty groupoid `0`.
    pub fn empty() -> Self {
        SkeletalGroupoid::default()
    }

    /// The unit groupoid `1`: one object, trivial automorphisms.
    pub fn unit() -> Self {
        SkeletalGroupoid::classifying(FiniteGroup::trivial())
    }

    /// `B(G)`: one object with automorphism group `G`.
    pub fn classifying(group: FiniteGroup) -> Self {
        SkeletalGroupoid {
            components: vec![Component::new("*", group)],
        }
    }

    /// The discrete groupoid on `n` points labelled `0..n`.
    pub fn set(n: usize) -> Self {
        SkeletalGroupoid {
            components: (0..n)
                .map(|i| Component::new(i.to_string(), FiniteGroup::trivial()))
                .collect(),
        }
    }

    pub fn components(&self) -> &[Component] {
        &self.components
    }

    pub fn len(&self) -> usize {
        self.components.len()
    }

    pub fn is_empty(&self) -> bool {
        self.components.is_empty()
    }

    /// `Σ 1/|aut|` over components.
    pub fn cardinality(&self) -> Rational {
        self.components
            .iter()
            .map(|c| Rational::new(1, c.aut.order() as i64))
            .sum()
    }

    /// Disjoint union; labels are prefixed with `l:` and `r:`.
    pub fn sum(&self, other: &SkeletalGroupoid) -> SkeletalGroupoid {
        let left = self
            .components
            .iter()
            .map(|c| Component::new(format!("l:{}", c.label), c.aut.clone()));
        let right = other
            .components
            .iter()
            .map(|c| Component::new(format!("r:{}", c.label), c.aut.clone()));
        SkeletalGroupoid::new(left.chain(right).collect()).expect("prefixed labels are unique")
    }

    /// Pairs of components with direct-product automorphism groups.
    pub fn product(&self, other: &SkeletalGroupoid, budget: &Budget) -> Result<SkeletalGroupoid> {
        let count = self.len().saturating_mul(other.len());
        if count > budget.max_objects {
            return Err(Error::resource("product components", count, budget.max_objects));
        }
        // Each pair costs a multiplication table of (|a||b|)² entries.
        let squares = |x: &SkeletalGroupoid| -> u64 { x.components.iter().map(|c| (c.aut.order() as u64).pow(2)).sum() };
        let entries = squares(self).saturating_mul(squares(other));
        if entries > budget.max_candidates {
            return Err(Error::resource("product table entries", entries, budget.max_candidates));
        }
        let mut components = Vec::with_capacity(count);
        for a in &self.components {
            for b in &other.components {
                components.push(Component::new(
                    format!("({},{})", a.label, b.label),
                    FiniteGroup::direct_product(&a.aut, &b.aut, budget)?,
                ));
            }
        }
        SkeletalGroupoid::new(components)
    }

    pub fn is_probability(&self) -> bool {
        self.cardinality().is_one()
    }

    /// Whether the two have the same automorphism group orders, component
    /// by component in canonical order.
    pub fn same_shape(&self, other: &SkeletalGroupoid) -> bool {
        self.len() == other.len()
            && self
                .components
                .iter()
                .zip(&other.components)
                .all(|(a, b)| a.aut.order() == b.aut.order())
    }
}

impl fmt::Debug for SkeletalGroupoid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list()
            .entries(self.components.iter().map(|c| (&c.label, c.aut.order())))
            .finish()
    }
}

impl fmt::Display for SkeletalGroupoid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.components.is_empty() {
            return f.write_str("0");
        }
        let parts: Vec<String> = self
            .components
            .iter()
            .map(|c| format!("{} (|aut| = {})", c.label, c.aut.order()))
            .collect();
        f.write_str(&parts.join(" + "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn b() -> Budget {
        Budget::default()
    }

    fn bg(n: usize) -> SkeletalGroupoid {
        SkeletalGroupoid::classifying(FiniteGroup::cyclic(n, &b()).unwrap())
    }

    #[test]
    fn cardinality_examples() {
        let s3 = FiniteGroup::symmetric(3, &b()).unwrap();
        assert_eq!(SkeletalGroupoid::classifying(s3).cardinality(), Rational::new(1, 6));
        let x = SkeletalGroupoid::set(2).sum(&bg(2));
        assert_eq!(x.cardinality(), Rational::new(5, 2));
        assert!(SkeletalGroupoid::empty().cardinality().is_zero());
        assert!(SkeletalGroupoid::unit().cardinality().is_one());
    }

    #[test]
    fn sums_and_products() {
        assert!(bg(2).sum(&bg(2)).cardinality().is_one());
        let p = bg(2).product(&bg(3), &b()).unwrap();
        assert_eq!(p.len(), 1);
        assert_eq!(p.components()[0].aut.order(), 6);
        assert!(p.components()[0].aut.is_abelian());
        assert_eq!(p.cardinality(), Rational::new(1, 6));
        let x = SkeletalGroupoid::set(2).sum(&bg(4));
        let xu = x.product(&SkeletalGroupoid::unit(), &b()).unwrap();
        assert!(x.same_shape(&xu));
    }

    #[test]
    fn canonical_order_and_labels() {
        let x = bg(4).sum(&SkeletalGroupoid::unit()).sum(&bg(2));
        let orders: Vec<usize> = x.components().iter().map(|c| c.aut.order()).collect();
        assert_eq!(orders, vec![1, 2, 4]);
        let labels: Vec<&str> = x.components().iter().map(|c| c.label.as_str()).collect();
        assert_eq!(labels, vec!["l:r:*", "r:*", "l:l:*"]);
        assert!(SkeletalGroupoid::new(vec![
            Component::new("a", FiniteGroup::trivial()),
            Component::new("a", FiniteGroup::trivial()),
        ])
        .is_err());
    }
}
