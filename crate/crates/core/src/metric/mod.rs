//! Matrices of expansions and the bootstrap for `g - delta`.

mod bootstrap;
mod geometry;
mod inverse;
mod matrix;

pub use bootstrap::{
    all_terms_in_index_set, audit, bootstrap_step, early_terms_harmonic, log_inventory, order_laws_hold,
    run_bootstrap, BootstrapOptions, BootstrapState, ComponentOrder, EntryOrder, InvariantCheck, LeadingOrder,
    LogInventory, Report, SeedData, SeedEntry, StageReport,
};
pub use geometry::{
    christoffel, christoffel_first, gauge_residual, matrix_partials, q_term, rhs, symbolic_residual, Christoffel,
    Fields, Tensor3,
};
pub use inverse::{adjugate_inverse, metric_inverse, reciprocal};
pub use matrix::{ExpMatrix, MetricExpansion};
