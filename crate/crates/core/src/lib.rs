//! Combinatorial models of higher Auslander algebras of type A, their
//! derived and cluster categories, and the exact structures between them.

pub mod cli;
pub mod emit;
pub mod error;
pub mod exangle;
pub mod matrix;
pub mod model;
pub mod quiver;
pub mod quotient;
pub mod rigid;
pub mod tuple;
pub mod verify;

pub use error::{Error, Result};
pub use exangle::{realize, ExactnessReport, Exangle};
pub use matrix::{compose_matrices, MorphismMatrix};
pub use model::{BasisMorphism, CategoryModel, Classification, FiniteCategory, ModelKind};
pub use quiver::{build_quiver, Arrow, Quiver, Relation};
pub use quotient::{factors_through, injproj_ideal, projinj_ideal, quotient, IdealSpec, QuotientModel};
pub use rigid::{
    correspondence_check, exchange_exangles, is_maximal_rigid, is_rigid, maximal_rigid, mutate, mutation_graph,
    MutationGraph, RigidSet, Rigidity,
};
pub use tuple::IndexTuple;
pub use verify::{
    run_grid, run_theorem, verify_equiv_module_ap, verify_f_exangles, verify_main2, verify_model_sanity, Grid, GridRun,
    TheoremId, VerificationReport,
};
