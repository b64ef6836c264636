//! Exact computation of multiplicative genera, elliptic genera and the
//! Witten genus from characteristic numbers, with the supporting modular,
//! analytic and covering-space tooling.

pub mod bounds;
pub mod catalog;
pub mod charpoly;
pub mod covering;
pub mod elliptic;
pub mod error;
pub mod genus;
pub mod manifold;
pub mod modular;
pub mod partition;
pub mod ring;
pub mod series;

pub use charpoly::{CharClassPoly, GeneratorKind};
pub use error::{Error, Result};
pub use genus::{
    chern_to_pontryagin, connected_sum, genus_value, hypersurface_todd, multiplicative_class, product, GenusValue,
};
pub use manifold::{builtin, builtin_by_name, Builtin, GenusKind, ManifoldData};
pub use partition::Partition;
pub use ring::{format_rational, parse_rational, Coeff, PowerSeries, Rational};
pub use series::{QSeries, SeriesOp};

pub use bounds::{berard_dim_bound, c_of_b, index_bound_report, moser_constant, BoundParams, BoundReport};
pub use catalog::Catalog;
pub use covering::{cover_diameter, l2_betti_ratio, tower, CoverDiameter, TorusQuotientGraph, Tower};
pub use elliptic::{elliptic_genus, twisted_index, twisted_indices, EllipticKind, GenusSeries, IndexFamily};
pub use modular::{eisenstein, modular_relation_check, witten_fit, EisensteinKind, ModularCheck, ModularFit};
