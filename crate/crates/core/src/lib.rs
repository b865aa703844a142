//! Singular fibers of genus-2 fibrations: dual graphs, enumeration,
//! Camacho-Sad indices, local singularities, pencil resolution and holonomy.

pub mod canon;
pub mod enumerate;
pub mod dualgraph;
pub mod error;
pub mod fixtures;
pub mod format;
pub mod holonomy;
pub mod indices;
pub mod localsing;
pub mod rational;
pub mod resolve;

pub use dualgraph::{
    arithmetic_genus, blow_down, blow_up, classify_component, cycle_rank, normal_crossings, validate_fiber,
    BlowUpLocus, BranchRef, Component, FiberGraph, Geom, IntersectionPoint, PairMult, TypeLabel, ValidationReport,
    Violation,
};
pub use enumerate::{enumerate_catalog, legal_partitions, multiplicity_search, CatalogBounds, CatalogEntry, SearchTree};
pub use error::{Error, Result};
pub use rational::Q;
pub use holonomy::{
    elliptic_invariants, generated_holonomy_order, holonomy_report, isotrivial_admissibility, local_holonomy_order,
    monodromy_order, total_holonomy_order, HolonomyReport, IsotrivialVerdict,
};
pub use indices::{
    indices_from_multiplicities, match_normal_form, multiplicities_from_eigenpairs, solve_indices, solve_system,
    IndexAssignment, IndexSystem, UniquenessCertificate,
};
pub use localsing::{
    admissible_over_minus_one, blow_up_germ, classify_germ, enumerate_generation_one, parse_germ, separatrix_index,
    Branch, GermIntegral,
};
pub use resolve::{assemble_global_example, collapse_all, resolve_pencil, Fiber, PencilGerm, ResolutionGraph};
