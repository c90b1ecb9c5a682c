//! Light cones, cell complexes and the matching formula for single values.

pub mod complex;
pub mod cone;
pub mod enumerate;
pub mod formula;

pub use complex::{build_wbar, CellComplex, Edge, Face};
pub use cone::{ConeStratum, EdgeKind, LightCone, Pole, StratumTag};
pub use enumerate::{enumerate_matchings, for_each_matching, Matching};
pub use formula::{
    clip_to_cone, count_matchings, epsilon_bar, evaluate_formula, prepare, prepare_general, prepare_wbar,
    FormulaOutcome, FormulaPath, PathOutcome, Prepared,
};
