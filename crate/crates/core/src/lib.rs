//! Requirement smell detection and testability measurement.
//!
//! The crate is organised around the lexical pipeline in [`text`], the smell
//! detector in [`smell`], the clarity/testability model in [`testability`],
//! the embedding-based smelly-word dictionary builder in [`dictionary`] and
//! the evaluation kernels in [`eval`]. [`dataset`] holds the annotated CSV
//! wire format shared by the evaluation code and the workbench service.

pub mod dataset;
pub mod dictionary;
pub mod eval;
pub mod smell;
pub mod testability;
pub mod text;

pub use dictionary::{build_dictionary, DictError, RankedDictionary, TrainerConfig};
pub use dataset::{DatasetError, GroundTruthRecord, RowError};
pub use eval::{evaluate_project, EvalError, EvaluationReport};
pub use smell::{
    detect_smells, LexiconError, PosSmellMap, SmellDetector, SmellFinding, SmellLexicon,
    SmellTable, SmellType, Source,
};
pub use testability::{
    clarity, compute_alpha, score_requirement, testability, AlphaConfig, AlphaProfile,
    ClarityInput, Criticality, DomainRef, ModelError, Policy, RequirementType, Template,
    TestabilityResult,
};
pub use text::{Analysis, Analyzer, Span, StopWordList, TextError, Token};
