//! Expert-core extraction and expert-aware answer aggregation for
//! crowdsourced multiple-choice questions.
//!
//! Workers are vertices of a complete graph whose edge weights measure how
//! surprising their pairwise agreement is under a null of independent
//! guessing. Peeling that graph yields a reliability order and the expert
//! core, the subset maximizing its minimum induced degree. Aggregators
//! (majority vote, Top-2, Hyper-MV and GLAD) can run on the whole crowd or
//! on the core only.
//!
//! ```
//! use expert_core::{aggregate, Algorithm, AggregationConfig, generate, SyntheticSpec, accuracy};
//!
//! let spec = SyntheticSpec { n: 30, m: 40, s: 4, n_ex: 5, p_ex: 0.9, seed: 7 };
//! let (matrix, truth) = generate(&spec).unwrap();
//! let result = aggregate(Algorithm::Top2, &matrix, &AggregationConfig::default()).unwrap();
//! assert!(accuracy(&result, &truth).unwrap() > 0.5);
//! ```

pub mod aggregate;
pub mod binomial;
pub mod error;
pub mod glad;
pub mod graph;
pub mod harness;
pub mod peeling;
pub mod response;
pub mod seeding;
pub mod synthetic;

pub use aggregate::{aggregate, aggregate_with, AggregationConfig, Algorithm, HyperParams, TiePolicy};
pub use error::{Error, Result};
pub use glad::{glad_aggregate, glad_fit, GladConfig, GladInit, GladModel};
pub use graph::{build_graph, AgreementGraph, SymMatrix};
pub use peeling::{expert_core, extract, peel, Extraction, PeelingTrace};
pub use response::{
    accuracy, load_ground_truth, load_response_matrix, worker_accuracy, AggregationResult, CandidateCatalog,
    GroundTruth, ResponseMatrix,
};
pub use synthetic::{generate, SyntheticSpec};
