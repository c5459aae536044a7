//! Generalized frequent pattern mining over translated CG databases.
//!
//! The pipeline runs specialization rules, translates every graph, mines
//! frequent structures over root-generalized labels and specializes each one
//! down to its frequency frontier. Frontier patterns are translated back to
//! CGs, with one brick pattern kept per CG. Extension rules are then applied
//! once and signature-only patterns pruned.

pub mod dfs;
pub mod extend;
pub mod gspan;
pub mod lattice;
pub mod matcher;

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use log::{info, warn};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{projects_into, validate_graph, ConceptualGraph};
use crate::postprocess::{self, CompressedPattern};
use crate::rule::LambdaRule;
use crate::tlg::{PatternGraph, Symbols};
use crate::translate::{apply_specialization_rules, translate_database, TranslateOptions};
use crate::vocab::Vocabulary;

pub use dfs::{min_dfs_code, DfsCode, DfsTuple};
pub use gspan::{mine_structural, Structural, StructuralConfig};
pub use lattice::{specialize, Specialized};
pub use matcher::{pattern_embeds, Matcher};

/// Optional pipeline stages.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Modules {
    pub bricks: bool,
    pub signatures: bool,
    pub rules: bool,
}

impl Modules {
    pub const NONE: Modules = Modules {
        bricks: false,
        signatures: false,
        rules: false,
    };
    pub const ALL: Modules = Modules {
        bricks: true,
        signatures: true,
        rules: true,
    };
}

impl FromStr for Modules {
    type Err = Error;

    /// Accepts `all`, `none`, or a comma-separated subset of
    /// `bricks,signatures,rules` in any order.
    fn from_str(s: &str) -> Result<Self> {
        let mut m = Modules::NONE;
        for item in s.split(',').map(str::trim).filter(|x| !x.is_empty()) {
            match item {
                "all" => m = Modules::ALL,
                "none" => {}
                "bricks" => m.bricks = true,
                "signatures" => m.signatures = true,
                "rules" => m.rules = true,
                other => return Err(Error::Config(format!("unknown module `{other}`"))),
            }
        }
        Ok(m)
    }
}

impl fmt::Display for Modules {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: Vec<&str> = [
            (self.bricks, "bricks"),
            (self.signatures, "signatures"),
            (self.rules, "rules"),
        ]
        .into_iter()
        .filter_map(|(on, n)| on.then_some(n))
        .collect();
        if names.is_empty() {
            write!(f, "none")
        } else {
            write!(f, "{}", names.join(","))
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MiningConfig {
    /// Absolute number of supporting graphs.
    pub minsup: usize,
    pub modules: Modules,
    /// Cap on relation-bearing nodes per pattern.
    pub max_size: Option<usize>,
    /// Recorded for reproducibility; mining itself draws no random numbers.
    pub seed: u64,
    /// Count injective embeddings instead of homomorphisms.
    pub injective: bool,
    pub strict_markers: bool,
    /// Worker threads; `None` uses the global pool.
    pub workers: Option<usize>,
}

impl Default for MiningConfig {
    fn default() -> Self {
        MiningConfig {
            minsup: 1,
            modules: Modules::ALL,
            max_size: None,
            seed: 0,
            injective: false,
            strict_markers: false,
            workers: None,
        }
    }
}

impl MiningConfig {
    pub fn validate(&self) -> Result<()> {
        if self.minsup == 0 {
            return Err(Error::Config("minsup must be at least 1".into()));
        }
        if self.max_size == Some(0) {
            return Err(Error::Config("max size must be at least 1".into()));
        }
        if self.workers == Some(0) {
            return Err(Error::Config("worker count must be at least 1".into()));
        }
        Ok(())
    }

    pub fn translate_options(&self) -> TranslateOptions {
        TranslateOptions {
            bricks: self.modules.bricks,
            signatures: self.modules.signatures,
            strict_markers: self.strict_markers,
        }
    }
}

/// Converts a relative frequency in (0, 1] to an absolute count, rounding up.
pub fn absolute_minsup(relative: f64, graphs: usize) -> Result<usize> {
    if !(relative > 0.0 && relative <= 1.0) {
        return Err(Error::Config(format!(
            "relative minsup {relative} is outside (0, 1]"
        )));
    }
    Ok(((relative * graphs as f64) - 1e-9).ceil().max(1.0) as usize)
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Provenance {
    Mined,
    RuleExtended { rule: String },
}

impl Provenance {
    pub fn is_rule(&self) -> bool {
        matches!(self, Provenance::RuleExtended { .. })
    }
}

/// A frequent pattern in mining form together with its back-translation.
#[derive(Debug, Clone)]
pub struct MinedPattern {
    /// Vertices in canonical discovery order.
    pub graph: PatternGraph,
    pub code: DfsCode,
    pub canonical: String,
    pub cg: ConceptualGraph,
    pub supporters: Vec<u32>,
    pub provenance: Provenance,
}

impl MinedPattern {
    pub fn new(
        graph: PatternGraph,
        code: DfsCode,
        supporters: Vec<u32>,
        provenance: Provenance,
        symbols: &Symbols,
        v: &Vocabulary,
    ) -> Result<Self> {
        let cg = crate::translate::back_translate(&graph, symbols, v)?.graph;
        Ok(MinedPattern {
            canonical: code.render(symbols),
            graph,
            code,
            cg,
            supporters,
            provenance,
        })
    }

    pub fn support(&self) -> usize {
        self.supporters.len()
    }
}

/// One entry of the pattern output file.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PatternRecord {
    pub pattern: CompressedPattern,
    pub support: usize,
    pub provenance: Provenance,
    pub canonical_code: String,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct Timings {
    pub translate_ms: f64,
    pub structural_ms: f64,
    pub specialize_ms: f64,
    pub rules_ms: f64,
    pub postprocess_ms: f64,
    pub total_ms: f64,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct MineStats {
    pub graphs: usize,
    pub structural: usize,
    pub frontier: usize,
    /// Frontier patterns dropped because another one has an isomorphic CG.
    #[serde(default)]
    pub merged: usize,
    pub rule_extended: usize,
    pub rule_suppressed: usize,
    pub signature_pruned: usize,
    pub returned: usize,
    /// Patterns withheld by rules or signature pruning.
    pub pruned: usize,
    pub timings: Timings,
}

#[derive(Debug, Clone)]
pub struct MineOutput {
    /// Returned patterns in output order.
    pub patterns: Vec<MinedPattern>,
    pub records: Vec<PatternRecord>,
    pub stats: MineStats,
    pub warnings: Vec<String>,
}

fn elapsed_ms(since: Instant) -> f64 {
    since.elapsed().as_secs_f64() * 1000.0
}

/// Output order: larger CGs first, then higher support, then canonical code.
pub fn output_order(a: &MinedPattern, b: &MinedPattern) -> std::cmp::Ordering {
    b.cg.node_count()
        .cmp(&a.cg.node_count())
        .then(b.support().cmp(&a.support()))
        .then_with(|| a.canonical.cmp(&b.canonical))
}

/// Runs the full pipeline on a database.
pub fn mine(
    db: &[ConceptualGraph],
    v: &Vocabulary,
    rules: &[LambdaRule],
    cfg: &MiningConfig,
) -> Result<MineOutput> {
    cfg.validate()?;
    match cfg.workers {
        Some(n) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build()
                .map_err(|e| Error::Config(e.to_string()))?;
            pool.install(|| mine_inner(db, v, rules, cfg))
        }
        None => mine_inner(db, v, rules, cfg),
    }
}

fn mine_inner(
    db: &[ConceptualGraph],
    v: &Vocabulary,
    rules: &[LambdaRule],
    cfg: &MiningConfig,
) -> Result<MineOutput> {
    let start = Instant::now();
    let mut warnings = Vec::new();

    let violations: Vec<String> = db
        .iter()
        .flat_map(|g| validate_graph(g, v))
        .map(|x| x.to_string())
        .collect();
    if !violations.is_empty() {
        let shown: Vec<&str> = violations.iter().take(5).map(String::as_str).collect();
        return Err(Error::InvalidDatabase(format!(
            "{} violation(s): {}",
            violations.len(),
            shown.join("; ")
        )));
    }

    let rules: &[LambdaRule] = if cfg.modules.rules {
        for r in rules {
            r.validate(v)?;
        }
        rules
    } else {
        if !rules.is_empty() {
            let msg = format!(
                "{} rule(s) ignored because the rules module is off",
                rules.len()
            );
            warn!("{msg}");
            warnings.push(msg);
        }
        &[]
    };

    let t = Instant::now();
    let specialized_db: Vec<ConceptualGraph> = if rules.is_empty() {
        db.to_vec()
    } else {
        let results: Vec<_> = db
            .par_iter()
            .map(|g| apply_specialization_rules(g, rules, v))
            .collect();
        let mut out = Vec::with_capacity(results.len());
        for (g, report) in results {
            for w in report.warnings {
                warn!("{w}");
                warnings.push(w);
            }
            out.push(g);
        }
        out
    };
    let symbols = Symbols::new(v);
    let opts = cfg.translate_options();
    let targets = translate_database(&specialized_db, v, opts, &symbols)?;
    let translate_ms = elapsed_ms(t);

    let t = Instant::now();
    let structural = mine_structural(
        &targets,
        StructuralConfig {
            minsup: cfg.minsup,
            max_size: cfg.max_size,
            injective: cfg.injective,
        },
    );
    let structural_ms = elapsed_ms(t);
    info!("{} frequent structures", structural.len());

    let t = Instant::now();
    let frontier: Vec<Specialized> = structural
        .par_iter()
        .flat_map_iter(|s| specialize(s, &targets, cfg.minsup, cfg.injective))
        .collect();
    let mut patterns = frontier
        .into_iter()
        .map(|s| {
            MinedPattern::new(
                s.graph,
                s.code,
                s.supporters,
                Provenance::Mined,
                &symbols,
                v,
            )
        })
        .collect::<Result<Vec<_>>>()?;
    let frontier_count = patterns.len();
    info!("{frontier_count} frontier patterns");
    let mut merged = 0;
    if opts.bricks {
        (patterns, merged) = merge_equivalent(patterns, v);
        info!("{merged} brick patterns merged into equivalent ones");
    }
    let specialize_ms = elapsed_ms(t);

    let t = Instant::now();
    let extension_rules: Vec<LambdaRule> = rules
        .iter()
        .filter(|r| r.kind(v).extension)
        .cloned()
        .collect();
    let mut rule_suppressed = 0;
    if !extension_rules.is_empty() {
        let ctx = extend::ExtendContext {
            db: &targets,
            vocab: v,
            symbols: &symbols,
            translate: opts,
            minsup: cfg.minsup,
            injective: cfg.injective,
        };
        let (kept, suppressed) = extend::apply_extension_rules(patterns, &extension_rules, &ctx);
        patterns = kept;
        rule_suppressed = suppressed;
    }
    let rules_ms = elapsed_ms(t);

    let t = Instant::now();
    let mut signature_pruned = 0;
    if cfg.modules.signatures {
        let (kept, pruned) = postprocess::prune(patterns, v, |p| &p.cg, |p| p.provenance.is_rule());
        patterns = kept;
        signature_pruned = pruned;
    }
    patterns.sort_by(output_order);
    let records: Vec<PatternRecord> = patterns
        .iter()
        .map(|p| PatternRecord {
            pattern: if cfg.modules.signatures {
                postprocess::compress(&p.cg, v)
            } else {
                CompressedPattern::verbatim(&p.cg)
            },
            support: p.support(),
            provenance: p.provenance.clone(),
            canonical_code: p.canonical.clone(),
        })
        .collect();
    let postprocess_ms = elapsed_ms(t);

    let stats = MineStats {
        graphs: db.len(),
        structural: structural.len(),
        frontier: frontier_count,
        merged,
        rule_extended: patterns.iter().filter(|p| p.provenance.is_rule()).count(),
        rule_suppressed,
        signature_pruned,
        returned: patterns.len(),
        pruned: rule_suppressed + signature_pruned,
        timings: Timings {
            translate_ms,
            structural_ms,
            specialize_ms,
            rules_ms,
            postprocess_ms,
            total_ms: elapsed_ms(start),
        },
    };
    Ok(MineOutput {
        patterns,
        records,
        stats,
        warnings,
    })
}

/// Keeps one pattern per isomorphism class of back-translated CGs, the first
/// in output order. Brick patterns differing only in which edges of a
/// shared-concept clique they contain translate back to the same CG.
fn merge_equivalent(mut patterns: Vec<MinedPattern>, v: &Vocabulary) -> (Vec<MinedPattern>, usize) {
    type Key = (Vec<(String, Option<String>)>, Vec<String>);
    let key = |g: &ConceptualGraph| -> Key {
        let mut concepts: Vec<_> = g
            .concepts
            .iter()
            .map(|c| (c.concept_type.clone(), c.marker.clone()))
            .collect();
        let mut relations: Vec<_> = g
            .relations
            .iter()
            .map(|r| r.relation_type.clone())
            .collect();
        concepts.sort_unstable();
        relations.sort_unstable();
        (concepts, relations)
    };
    let before = patterns.len();
    patterns.sort_by(output_order);
    let mut buckets: BTreeMap<Key, Vec<MinedPattern>> = BTreeMap::new();
    for p in patterns {
        buckets.entry(key(&p.cg)).or_default().push(p);
    }
    let kept: Vec<MinedPattern> = buckets
        .into_par_iter()
        .flat_map_iter(|(_, bucket)| {
            let mut kept: Vec<MinedPattern> = Vec::new();
            for p in bucket {
                let same = |q: &MinedPattern| {
                    projects_into(&p.cg, &q.cg, v, true) && projects_into(&q.cg, &p.cg, v, true)
                };
                if !kept.iter().any(same) {
                    kept.push(p);
                }
            }
            kept
        })
        .collect();
    let merged = before - kept.len();
    (kept, merged)
}

/// Serializes pattern records as the pattern output file.
pub fn serialize_patterns(records: &[PatternRecord]) -> String {
    serde_json::to_string_pretty(records).expect("records serialize")
}

pub fn parse_patterns(text: &str) -> Result<Vec<PatternRecord>> {
    Ok(serde_json::from_str(text)?)
}
