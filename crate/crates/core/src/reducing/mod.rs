//! Reducing dimensions: Ext¹ enumeration, bounded searches for reducing
//! sequences, growth estimates and the inequalities tying them together.

pub mod checks;
pub mod ext1;
pub mod growth;
pub mod search;

pub use checks::{
    complexity_check, gorenstein_side_check, ComplexityReport, GorensteinSideReport,
    InequalityCheck,
};
pub use ext1::{middle_term, Enumeration, Ext1Space, Extension};
pub use growth::{
    growth_estimate, reducible_complexity_search, ComplexityChain, ComplexityStep, GrowthEstimate,
    GrowthKind, GrowthVerdict,
};
pub use search::{
    search_reducing, verify_witness, Mode, ReductionWitness, SearchLimits, SearchOutcome, Target,
    WitnessStep,
};
