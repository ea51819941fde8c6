//! Composition series and Jordan-Hölder factors of finite permutation groups,
//! and their profinite analogues along inverse systems of finite groups.

mod chain;
pub mod corpus;
pub mod description;
pub mod error;
pub mod group;
pub mod hom;
pub mod iso;
pub mod perm;
pub mod sections;
pub mod series;
pub mod simple;
pub mod tower;

pub use description::{load_group, GroupDescription};
pub use error::{Error, Result};
pub use group::{FiniteGroup, Subgroup};
pub use hom::{quotient, GroupHom};
pub use perm::Permutation;
pub use series::{composition_series, factor_multiset, FactorMultiset, SeriesStep};
pub use simple::{identify, same_type, SimpleType};
pub use tower::{ClosedSubgroup, Tower};
