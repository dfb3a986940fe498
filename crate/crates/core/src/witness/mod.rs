//! Tree decompositions as first-class objects, plus generators that emit
//! graphs together with a certified treelength bound.

mod decomposition;
mod generators;

pub use decomposition::{
    bag_half_separator, decomposition_length, exact_treelength, validate_decomposition, DecompositionJson,
    TreeDecomposition, ValidityReport, Violation, EXACT_TREELENGTH_MAX_N,
};
pub use generators::{
    gen_bounded_treelength, gen_chordal, gen_chordal_capped, gen_cycle, gen_grid, gen_random_tree, generate, Family,
    GeneratedInstance, InstanceParams,
};
