//! Series, reductions, the normal-closures tower and its stable member.

pub mod bound;
pub mod build;
pub mod series;
pub mod subnormal;

pub use bound::{bound_g, least_prime_divisor, within_bound, BOUND_TOLERANCE};
pub use build::{
    build_tower, inverse_limit, reduce, LimitChecks, LimitOptions, LimitResult, LimitSummary, Reduction,
    ReductionSummary, StageSummary, Tower, TowerOptions, TowerRecord, TowerSummary, DEFAULT_MAX_STAGES,
};
pub use series::{
    kernel_commutator_series, lower_central_record, subnormal_closure_series, upper_central_record, SeriesKind,
    SeriesRecord, SeriesSummary,
};
pub use subnormal::{verify_subnormal_chain, SubnormalChain, SubnormalChainReport};
