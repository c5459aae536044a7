//! Frequent pattern mining over conceptual-graph databases.
//!
//! The pipeline translates each conceptual graph into a taxonomy-labelled
//! graph (optionally of elementary bricks, one per relation and its
//! arguments), mines frequent generalized patterns with a gSpan-style
//! enumerator and homomorphism support, specializes labels down the type
//! hierarchy, applies extension rules, prunes signature-only patterns and
//! translates the results back into conceptual graphs.

pub mod cggen;
pub mod error;
pub mod eval;
pub mod graph;
pub mod miner;
pub mod postprocess;
pub mod rule;
pub mod tlg;
pub mod translate;
pub mod vocab;

pub use error::{Error, Result};
pub use graph::{validate_graph, Concept, ConceptualGraph, Relation, Violation};
pub use rule::LambdaRule;
pub use vocab::{parse_vocabulary, Vocabulary};

pub use miner::{mine, MineOutput, MiningConfig, Modules, PatternRecord, Provenance};
