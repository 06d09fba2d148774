//! Finite groupoids: skeletal and explicit presentations, families over a
//! skeletal base, and functor groupoids.

mod dependent;
mod full;
mod functor;
mod skeletal;

pub use dependent::{dependent_product, dependent_product_cardinality, grothendieck_sum, homotopy_fixed_points, DependentGroupoid, Fiber};
pub use full::{oracle_cardinality, FullGroupoid, Functor, GroupoidDump, MorphismDump};
pub use functor::{functor_category, functor_groupoid, nat_trans_cardinality, nat_trans_family, nat_trans_groupoid, FunctorGroupoid};
pub use skeletal::{Component, SkeletalGroupoid};
