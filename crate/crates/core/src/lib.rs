//! Partition-valued dynamic signals, the exact value of information in
//! extended dynamic decision problems, and the dynamic reveal-or-refine
//! criterion for strong dominance.
//!
//! Everything is exact: probabilities are Lebesgue measures of finite unions
//! of rational intervals, and all arithmetic uses [`Rational`].

pub mod cli;
pub mod decision;
pub mod dominance;
pub mod dynamic;
pub mod error;
pub mod fixtures;
pub mod gen;
pub mod interval;
pub mod json;
pub mod rational;
pub mod render;
pub mod signal;

pub use decision::{
    expected_utility, value, value_as, value_bruteforce, value_nonrobust, AdaptedStrategy,
    ExtendedDecisionProblem, Utility, ValueResult,
};
pub use dynamic::{
    build_history_tree, dynamic_join, to_experiment, validate_dynamic, DynamicExperiment,
    DynamicSignal, HistoryTree,
};
pub use error::{Error, Result};
pub use interval::IntervalSet;
pub use rational::Rational;
pub use signal::{
    cell_probability, is_revealing, join, refines, reveal_or_refines, validate, Cell, Prior,
    Signal, StateSpace,
};
