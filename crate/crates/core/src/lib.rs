//! Exact-arithmetic engine for the bounded octahedron recurrence and the
//! bounded cube recurrence over semifields.
//!
//! The crate evolves states on rectangular space-time boxes, evaluates the
//! non-recursive perfect-matching formula for single values, and checks the
//! periodicity and symmetry identities those recurrences satisfy.

pub mod cube;
pub mod document;
pub mod engine;
pub mod error;
pub mod gen;
pub mod lattice;
pub mod matchings;
pub mod semifield;
pub mod variants;

pub use error::{Error, Result};
pub use lattice::{BoundaryPath, CellTag, Domain, Point, Section, SectionState, SiteKind};
pub use semifield::{HalfInt, MaxPlus, PosRational, Semifield, SemifieldKind, SemifieldValue};
