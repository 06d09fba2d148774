//! Cardinalities predicted by the conjectured algebraic laws, computed from
//! component data only and never from a semantic construction.

use crate::arith::{ExtendedValue, Rational};
use crate::error::Result;
use crate::groupoid::{DependentGroupoid, SkeletalGroupoid};

/// `|X + Y| = |X| + |Y|`.
pub fn sum(x: &SkeletalGroupoid, y: &SkeletalGroupoid) -> Rational {
    x.cardinality() + y.cardinality()
}

/// `|X × Y| = |X| · |Y|`.
pub fn product(x: &SkeletalGroupoid, y: &SkeletalGroupoid) -> Rational {
    x.cardinality() * y.cardinality()
}

/// `|X → Y| = |Y|^|X|`.
pub fn function(x: &SkeletalGroupoid, y: &SkeletalGroupoid) -> Result<ExtendedValue> {
    Ok(ExtendedValue::from_rational(&y.cardinality())?.pow(&x.cardinality()))
}

/// `|Σ_x P_x| = Σ_x |P_x| / |x = x|`.
pub fn dependent_sum(p: &DependentGroupoid) -> Rational {
    p.base()
        .components()
        .iter()
        .zip(p.fiber_cardinalities())
        .map(|(c, card)| card / Rational::from(c.aut.order()))
        .sum()
}

/// `|Π_x P_x| = Π_x |P_x|^(1/|x = x|)`.
pub fn dependent_product(p: &DependentGroupoid) -> Result<ExtendedValue> {
    let mut acc = ExtendedValue::one();
    for (c, card) in p.base().components().iter().zip(p.fiber_cardinalities()) {
        let factor = ExtendedValue::from_rational(&card)?.pow(&Rational::new(1, c.aut.order() as i64));
        acc = acc.mul(&factor)?;
    }
    Ok(acc)
}

/// `|P ⇒ Q| = Π_x (|Q_x|^|P_x|)^(1/|x = x|)`.
pub fn nat_trans(p: &DependentGroupoid, q: &DependentGroupoid) -> Result<ExtendedValue> {
    let mut acc = ExtendedValue::one();
    for ((c, pc), qc) in p
        .base()
        .components()
        .iter()
        .zip(p.fiber_cardinalities())
        .zip(q.fiber_cardinalities())
    {
        let e = pc / Rational::from(c.aut.order());
        acc = acc.mul(&ExtendedValue::from_rational(&qc)?.pow(&e))?;
    }
    Ok(acc)
}

/// `|P ⇒ (· = ·)| = Π_x (|x = x|^|P_x|)^(1/|x = x|)`.
pub fn nat_trans_loops(p: &DependentGroupoid) -> Result<ExtendedValue> {
    let mut acc = ExtendedValue::one();
    for (c, pc) in p.base().components().iter().zip(p.fiber_cardinalities()) {
        let order = Rational::from(c.aut.order());
        let e = pc / order.clone();
        acc = acc.mul(&ExtendedValue::from_rational(&order)?.pow(&e))?;
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::PowerProduct;
    use crate::budget::Budget;
    use crate::group::FiniteGroup;
    use crate::groupoid::{Fiber, FullGroupoid, Functor};

    fn bg(n: usize) -> SkeletalGroupoid {
        SkeletalGroupoid::classifying(FiniteGroup::cyclic(n, &Budget::default()).unwrap())
    }

    fn pp(q: Rational) -> ExtendedValue {
        ExtendedValue::Finite(PowerProduct::from_rational(&q).unwrap())
    }

    #[test]
    fn function_law_values() {
        assert_eq!(function(&bg(2), &bg(2)).unwrap(), pp(Rational::new(1, 2)).pow(&Rational::new(1, 2)));
        assert_eq!(function(&SkeletalGroupoid::empty(), &SkeletalGroupoid::empty()).unwrap(), ExtendedValue::one());
        assert_eq!(function(&bg(2), &SkeletalGroupoid::empty()).unwrap(), ExtendedValue::Zero);
    }

    #[test]
    fn nat_trans_law_values() {
        let two = FullGroupoid::discrete(vec!["a".into(), "b".into()]);
        let swap = Functor {
            objects: vec![1, 0],
            morphisms: vec![1, 0],
        };
        let g = FiniteGroup::cyclic(2, &Budget::default()).unwrap();
        let p = DependentGroupoid::new(vec![Fiber::from_generator_images("*", g, two, vec![swap]).unwrap()]).unwrap();
        assert_eq!(nat_trans(&p, &p).unwrap(), pp(Rational::from(2i64)));
        assert_eq!(nat_trans_loops(&p).unwrap(), pp(Rational::from(2i64)));
        assert!(dependent_sum(&p).is_one());

        let fib = FullGroupoid::from_skeletal(&bg(2));
        let p = DependentGroupoid::constant(&SkeletalGroupoid::set(2), &fib);
        assert_eq!(nat_trans(&p, &p).unwrap(), pp(Rational::new(1, 2)));
        assert_eq!(nat_trans_loops(&p).unwrap(), ExtendedValue::one());
    }
}
