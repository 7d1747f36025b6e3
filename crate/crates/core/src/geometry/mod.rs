//! Concrete polar spaces over small fields and their dual polar graphs.

pub mod cache;
pub mod enumerate;
pub mod field;
pub mod form;
pub mod graph;
pub mod subspace;

pub use cache::{load_graph, load_or_build, save_graph, GraphFile, CACHE_ENV, SCHEMA_VERSION};
pub use enumerate::{enumerate_generators, enumerate_generators_capped, PolarSpace, DEFAULT_CAP};
pub use field::{make_field, Elem, FieldSpec};
pub use form::{is_totally_isotropic, standard_form, FormKind, FormSpec};
pub use graph::{build_graph, build_graph_capped, DualPolarGraph};
pub use subspace::{intersection_dim, Subspace};
