//! Real Bott manifolds: Bott matrices, the `(Z2)^n` torus actions they
//! define, Seifert normal forms, fixed-point profiles and an exhaustive
//! classifier into diffeomorphism classes for sizes up to 8.
//!
//! Library indices are 0-based throughout; the text and JSON formats use
//! 1-based coordinates where they name positions.

pub mod action;
pub mod classifier;
pub mod equivalence;
pub mod error;
pub mod gf2;
pub mod matrix;
pub mod seifert;
mod tables;

pub use action::{
    action_profile, affine_lift, compose_subset, deck_element, fixed_components, fixed_points,
    generator_action, induced_action, ActionProfile, AffineLift, CoordinateMap, CoordinateOp,
    ElementProfile, FixedComponent, FixedPointProfile, PatternEntry, ProfileEntry, Root4,
    SubtorusPattern,
};
pub use classifier::{
    classify, family_count, subcase_counts, verify_reference_tables, Classification,
    ClassificationReport, ClassifyOptions, FamilySpec, OrbitSummary, TableReport,
};
pub use equivalence::{
    equivalent, invariant_key, orbit, quarter_move, swap_move, twin_merge_move, InvariantKey, Move,
    Verdict,
};
pub use error::{Error, Result};
pub use matrix::{enumerate, enumerate_shard, matrix_count, BottMatrix, MAX_SIZE};
pub use seifert::{block_type, normal_form, BlockType, SeifertForm};
