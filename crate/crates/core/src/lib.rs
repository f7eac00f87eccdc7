//! Computable symbolic dynamics on primitive subshifts of finite type:
//! word counting and entropy, the measure of maximal entropy, zero-run
//! statistics with eventually-always hitting experiments, and explicit
//! Cantor constructions with their dimension formulas.

pub mod bigmath;
pub mod cantor;
pub mod gibbs;
pub mod hitting;
pub mod rng;
pub mod sft;
pub mod target;

pub use cantor::{
    build_sequences, dim_hea, dim_level_set, dim_u_a, BuildParams, CantorError, DimensionValue,
    LevelSequences, Levels, UaResult, Variant, DEFAULT_DEPTH_BUDGET,
};
pub use gibbs::{perron, GibbsError, ParryMeasure, PerronData};
pub use hitting::{
    dichotomy_experiment, ea_survives, geometric_checkpoints, hitting_counts,
    liminf_limsup_estimate, limit_ratio_experiment, sample_uncensored, CensorMode,
    CheckpointStats, DichotomyResult, HittingError, LimitRatioResult, RatioRow, RunLengths,
    SurvivalReport,
};
pub use rng::{derive_seed, seed_sequence};
pub use sft::{format_word, parse_word, CylinderDiameter, Sft, SftError, WordCount};
pub use target::TargetFunction;
