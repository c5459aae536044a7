//! Synthetic conceptual-graph databases with a known ground truth.
//!
//! Seed patterns are planted verbatim into a fixed share of the graphs. Each
//! graph is then grown to a sampled size by attaching random
//! signature-conforming bricks to existing concept nodes. Every graph draws
//! from its own random stream, so output does not depend on scheduling.

use std::collections::BTreeMap;

use rand::distributions::{Distribution, WeightedIndex};
use rand::seq::{index, SliceRandom};
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{projects_into, validate_graph, Concept, ConceptualGraph, Relation};
use crate::vocab::{ConceptTypeDecl, RelationTypeDecl, Vocabulary, VocabularyFile};

const WEIGHT_TOLERANCE: f64 = 1e-6;

/// Distribution of graph sizes, counted in concept plus relation nodes.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum SizeDistribution {
    Point {
        value: usize,
    },
    Uniform {
        min: usize,
        max: usize,
    },
    /// `(size, probability)` pairs; probabilities must sum to one.
    Weighted {
        weights: Vec<(usize, f64)>,
    },
}

impl Default for SizeDistribution {
    fn default() -> Self {
        SizeDistribution::Uniform { min: 28, max: 32 }
    }
}

/// Distribution over type names. Types missing from `weights` are never drawn.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum LabelDistribution {
    #[default]
    Uniform,
    Weighted {
        weights: BTreeMap<String, f64>,
    },
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LabelDistributions {
    #[serde(default)]
    pub concepts: LabelDistribution,
    #[serde(default)]
    pub relations: LabelDistribution,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NoiseConfig {
    /// Chance that a fresh argument is drawn below its signature type.
    pub specialize_probability: f64,
    /// Chance that a noise brick shares one argument with an existing concept.
    pub attach_probability: f64,
    /// Chance that a graph receives one concept attached to no relation.
    pub isolated_probability: f64,
}

impl Default for NoiseConfig {
    fn default() -> Self {
        NoiseConfig {
            specialize_probability: 0.5,
            attach_probability: 0.9,
            isolated_probability: 0.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SeedSpec {
    pub pattern: ConceptualGraph,
    /// Share of the graphs receiving a verbatim copy, in `(0, 1]`.
    pub frequency: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GenConfig {
    pub graph_count: usize,
    #[serde(default)]
    pub size_distribution: SizeDistribution,
    #[serde(default)]
    pub label_distribution: LabelDistributions,
    #[serde(default)]
    pub seeds: Vec<SeedSpec>,
    #[serde(default)]
    pub noise: NoiseConfig,
    #[serde(default)]
    pub rng_seed: u64,
}

impl Default for GenConfig {
    fn default() -> Self {
        GenConfig {
            graph_count: 100,
            size_distribution: SizeDistribution::default(),
            label_distribution: LabelDistributions::default(),
            seeds: Vec::new(),
            noise: NoiseConfig::default(),
            rng_seed: 0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SeedRecord {
    pub pattern: ConceptualGraph,
    pub target_frequency: f64,
    /// Graphs holding a verbatim copy, in database order.
    pub planted: Vec<String>,
    pub planted_frequency: f64,
    /// Share of graphs the seed projects into; never below `planted_frequency`.
    pub realized_frequency: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Manifest {
    pub graph_count: usize,
    pub rng_seed: u64,
    pub seeds: Vec<SeedRecord>,
    /// Node count to number of graphs.
    pub size_histogram: BTreeMap<usize, usize>,
    pub concept_histogram: BTreeMap<String, usize>,
    pub relation_histogram: BTreeMap<String, usize>,
    /// Graphs whose sampled size was raised to fit their seeds.
    #[serde(default)]
    pub raised_sizes: Vec<String>,
}

pub fn parse_config(text: &str) -> Result<GenConfig> {
    Ok(serde_json::from_str(text)?)
}

pub fn parse_manifest(text: &str) -> Result<Manifest> {
    Ok(serde_json::from_str(text)?)
}

pub fn serialize_manifest(m: &Manifest) -> String {
    serde_json::to_string_pretty(m).expect("manifest serializes")
}

fn check_probability(name: &str, p: f64) -> Result<()> {
    if (0.0..=1.0).contains(&p) {
        Ok(())
    } else {
        Err(Error::Config(format!("{name} must lie in [0, 1], got {p}")))
    }
}

fn check_weights<'a>(name: &str, weights: impl IntoIterator<Item = &'a f64>) -> Result<()> {
    let mut sum = 0.0;
    for &w in weights {
        if !w.is_finite() || w < 0.0 {
            return Err(Error::Config(format!(
                "{name}: weight {w} is not a non-negative number"
            )));
        }
        sum += w;
    }
    if (sum - 1.0).abs() > WEIGHT_TOLERANCE {
        return Err(Error::Config(format!(
            "{name}: weights sum to {sum}, not 1"
        )));
    }
    Ok(())
}

/// Weighted sampler over names.
#[derive(Debug, Clone)]
struct LabelSampler {
    names: Vec<String>,
    weights: Vec<f64>,
}

impl LabelSampler {
    fn new(dist: &LabelDistribution, universe: &[&str], what: &str) -> Result<Self> {
        let names: Vec<String> = universe.iter().map(|s| s.to_string()).collect();
        let weights = match dist {
            LabelDistribution::Uniform => vec![1.0; names.len()],
            LabelDistribution::Weighted { weights } => {
                check_weights(what, weights.values())?;
                if let Some(unknown) = weights.keys().find(|k| !universe.contains(&k.as_str())) {
                    return Err(Error::Config(format!("{what}: unknown type `{unknown}`")));
                }
                names
                    .iter()
                    .map(|n| weights.get(n).copied().unwrap_or(0.0))
                    .collect()
            }
        };
        Ok(LabelSampler { names, weights })
    }

    /// Draws among names accepted by `keep`; `None` when all have zero weight.
    fn draw_among(&self, rng: &mut impl Rng, keep: impl Fn(&str) -> bool) -> Option<&str> {
        let pool: Vec<(usize, f64)> = self
            .weights
            .iter()
            .enumerate()
            .filter(|&(i, &w)| w > 0.0 && keep(&self.names[i]))
            .map(|(i, &w)| (i, w))
            .collect();
        let dist = WeightedIndex::new(pool.iter().map(|&(_, w)| w)).ok()?;
        Some(&self.names[pool[dist.sample(rng)].0])
    }

    fn draw(&self, rng: &mut impl Rng) -> Option<&str> {
        self.draw_among(rng, |_| true)
    }
}

#[derive(Debug, Clone)]
enum SizeSampler {
    Point(usize),
    Uniform(usize, usize),
    Weighted(Vec<usize>, WeightedIndex<f64>),
}

impl SizeSampler {
    fn new(dist: &SizeDistribution) -> Result<Self> {
        match dist {
            SizeDistribution::Point { value } => Ok(SizeSampler::Point(*value)),
            SizeDistribution::Uniform { min, max } if min <= max => {
                Ok(SizeSampler::Uniform(*min, *max))
            }
            SizeDistribution::Uniform { min, max } => Err(Error::Config(format!(
                "size distribution: min {min} exceeds max {max}"
            ))),
            SizeDistribution::Weighted { weights } => {
                check_weights("size distribution", weights.iter().map(|(_, w)| w))?;
                let index = WeightedIndex::new(weights.iter().map(|(_, w)| *w))
                    .map_err(|e| Error::Config(format!("size distribution: {e}")))?;
                Ok(SizeSampler::Weighted(
                    weights.iter().map(|(s, _)| *s).collect(),
                    index,
                ))
            }
        }
    }

    fn draw(&self, rng: &mut impl Rng) -> usize {
        match self {
            SizeSampler::Point(v) => *v,
            SizeSampler::Uniform(a, b) => rng.gen_range(*a..=*b),
            SizeSampler::Weighted(values, index) => values[index.sample(rng)],
        }
    }
}

struct Samplers {
    size: SizeSampler,
    concepts: LabelSampler,
    relations: LabelSampler,
}

impl Samplers {
    fn new(cfg: &GenConfig, v: &Vocabulary) -> Result<Self> {
        let concept_names: Vec<&str> = v.concept_types().collect();
        let relation_names: Vec<&str> = v.relation_types().map(|r| r.name.as_str()).collect();
        Ok(Samplers {
            size: SizeSampler::new(&cfg.size_distribution)?,
            concepts: LabelSampler::new(
                &cfg.label_distribution.concepts,
                &concept_names,
                "concept distribution",
            )?,
            relations: LabelSampler::new(
                &cfg.label_distribution.relations,
                &relation_names,
                "relation distribution",
            )?,
        })
    }
}

/// Checks distributions, probabilities and seeds against `v`.
pub fn validate_config(cfg: &GenConfig, v: &Vocabulary) -> Result<()> {
    Samplers::new(cfg, v)?;
    check_probability("specialize_probability", cfg.noise.specialize_probability)?;
    check_probability("attach_probability", cfg.noise.attach_probability)?;
    check_probability("isolated_probability", cfg.noise.isolated_probability)?;
    for (k, seed) in cfg.seeds.iter().enumerate() {
        if !(seed.frequency > 0.0 && seed.frequency <= 1.0) {
            return Err(Error::Config(format!(
                "seed {k}: frequency {} outside (0, 1]",
                seed.frequency
            )));
        }
        if let Some(violation) = validate_graph(&seed.pattern, v).into_iter().next() {
            return Err(Error::Config(format!("seed {k}: {violation}")));
        }
    }
    Ok(())
}

/// One graph size and that many unconstrained concept-type draws.
pub fn sample_distributions(
    cfg: &GenConfig,
    v: &Vocabulary,
    rng: &mut impl Rng,
) -> Result<(usize, Vec<String>)> {
    let samplers = Samplers::new(cfg, v)?;
    let size = samplers.size.draw(rng);
    let mut labels = Vec::with_capacity(size);
    for _ in 0..size {
        match samplers.concepts.draw(rng) {
            Some(t) => labels.push(t.to_string()),
            None => {
                return Err(Error::Config(
                    "concept distribution has no positive weight".into(),
                ))
            }
        }
    }
    Ok((size, labels))
}

fn stream_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Concept type for a fresh argument below `signature`.
fn argument_type(
    signature: &str,
    specialize: f64,
    v: &Vocabulary,
    concepts: &LabelSampler,
    rng: &mut impl Rng,
) -> String {
    if rng.gen_bool(specialize) {
        if let Some(t) = concepts.draw_among(rng, |t| t != signature && v.generalizes(signature, t))
        {
            return t.to_string();
        }
    }
    signature.to_string()
}

/// Adds one relation of a drawn type, sharing at most one argument with an
/// existing concept. Returns `false` when no relation type can be drawn.
fn add_brick(
    g: &mut ConceptualGraph,
    v: &Vocabulary,
    samplers: &Samplers,
    noise: &NoiseConfig,
    counter: &mut usize,
    rng: &mut impl Rng,
) -> bool {
    let Some(rel) = samplers.relations.draw(rng).and_then(|r| v.relation(r)) else {
        return false;
    };
    let mut args: Vec<Option<String>> = vec![None; rel.arity];
    if !g.concepts.is_empty() && rng.gen_bool(noise.attach_probability) {
        let hooks: Vec<(usize, usize)> = (0..rel.arity)
            .flat_map(|pos| {
                g.concepts
                    .iter()
                    .enumerate()
                    .filter(move |(_, c)| v.generalizes(&rel.signature[pos], &c.concept_type))
                    .map(move |(i, _)| (pos, i))
            })
            .collect();
        if let Some(&(pos, c)) = hooks.choose(rng) {
            args[pos] = Some(g.concepts[c].id.clone());
        }
    }
    for (pos, slot) in args.iter_mut().enumerate() {
        if slot.is_some() {
            continue;
        }
        let t = argument_type(
            &rel.signature[pos],
            noise.specialize_probability,
            v,
            &samplers.concepts,
            rng,
        );
        let id = format!("c{counter}");
        *counter += 1;
        g.concepts.push(Concept::new(id.clone(), t));
        *slot = Some(id);
    }
    let id = format!("r{counter}");
    *counter += 1;
    g.relations.push(Relation {
        id,
        relation_type: rel.name.clone(),
        args,
    });
    true
}

fn plant(g: &mut ConceptualGraph, seed: &ConceptualGraph, k: usize) {
    let rename = |id: &str| format!("s{k}-{id}");
    for c in &seed.concepts {
        let mut c = c.clone();
        c.id = rename(&c.id);
        c.var = None;
        g.concepts.push(c);
    }
    for r in &seed.relations {
        g.relations.push(Relation {
            id: rename(&r.id),
            relation_type: r.relation_type.clone(),
            args: r.args.iter().map(|a| a.as_deref().map(rename)).collect(),
        });
    }
}

/// Builds graph `index` from its planted seeds and the noise process.
fn generate_graph(
    index: usize,
    cfg: &GenConfig,
    v: &Vocabulary,
    samplers: &Samplers,
    seeds: &[usize],
) -> (ConceptualGraph, bool) {
    let mut rng = stream_rng(cfg.rng_seed, index as u64);
    let mut g = ConceptualGraph::new(format!("g{index}"));
    g.source = Some("cggen".to_string());
    let mut size = samplers.size.draw(&mut rng);
    for &k in seeds {
        plant(&mut g, &cfg.seeds[k].pattern, k);
    }
    let raised = g.node_count() > size;
    if raised {
        log::info!(
            "graph g{index}: size raised from {size} to {} to fit its seeds",
            g.node_count()
        );
        size = g.node_count();
    }
    let mut counter = 0;
    if rng.gen_bool(cfg.noise.isolated_probability) {
        if let Some(t) = samplers.concepts.draw(&mut rng) {
            g.concepts.push(Concept::new(format!("c{counter}"), t));
            counter += 1;
        }
    }
    while g.node_count() < size {
        if !add_brick(&mut g, v, samplers, &cfg.noise, &mut counter, &mut rng) {
            break;
        }
    }
    (g, raised)
}

/// Generates `cfg.graph_count` graphs and their ground-truth manifest.
pub fn generate(v: &Vocabulary, cfg: &GenConfig) -> Result<(Vec<ConceptualGraph>, Manifest)> {
    validate_config(cfg, v)?;
    let samplers = Samplers::new(cfg, v)?;
    let n = cfg.graph_count;

    let mut per_graph: Vec<Vec<usize>> = vec![Vec::new(); n];
    let mut planted: Vec<Vec<usize>> = Vec::with_capacity(cfg.seeds.len());
    for (k, seed) in cfg.seeds.iter().enumerate() {
        let count = ((seed.frequency * n as f64).ceil() as usize).min(n);
        let mut rng = stream_rng(cfg.rng_seed, u64::MAX - k as u64);
        let mut chosen = index::sample(&mut rng, n, count).into_vec();
        chosen.sort_unstable();
        for &g in &chosen {
            per_graph[g].push(k);
        }
        planted.push(chosen);
    }

    let built: Vec<(ConceptualGraph, bool)> = (0..n)
        .into_par_iter()
        .map(|i| generate_graph(i, cfg, v, &samplers, &per_graph[i]))
        .collect();
    let raised_sizes = built
        .iter()
        .filter(|(_, r)| *r)
        .map(|(g, _)| g.id.clone())
        .collect();
    let db: Vec<ConceptualGraph> = built.into_iter().map(|(g, _)| g).collect();

    let seeds = cfg
        .seeds
        .iter()
        .zip(&planted)
        .map(|(seed, chosen)| {
            let hits = db
                .par_iter()
                .filter(|g| projects_into(&seed.pattern, g, v, false))
                .count();
            let share = |k: usize| if n == 0 { 0.0 } else { k as f64 / n as f64 };
            SeedRecord {
                pattern: seed.pattern.clone(),
                target_frequency: seed.frequency,
                planted: chosen.iter().map(|&g| db[g].id.clone()).collect(),
                planted_frequency: share(chosen.len()),
                realized_frequency: share(hits),
            }
        })
        .collect();

    let mut manifest = Manifest {
        graph_count: n,
        rng_seed: cfg.rng_seed,
        seeds,
        size_histogram: BTreeMap::new(),
        concept_histogram: BTreeMap::new(),
        relation_histogram: BTreeMap::new(),
        raised_sizes,
    };
    for g in &db {
        *manifest.size_histogram.entry(g.node_count()).or_default() += 1;
        for c in &g.concepts {
            *manifest
                .concept_histogram
                .entry(c.concept_type.clone())
                .or_default() += 1;
        }
        for r in &g.relations {
            *manifest
                .relation_histogram
                .entry(r.relation_type.clone())
                .or_default() += 1;
        }
    }
    Ok((db, manifest))
}

/// A random tree vocabulary: top `Thing`, concept types `C1..`, relation
/// types `R0..` with arities drawn from `arities` and signature types no
/// deeper than the grandchildren of the top.
pub fn synthetic_vocabulary(
    concepts: usize,
    relations: usize,
    arities: std::ops::RangeInclusive<usize>,
    seed: u64,
) -> Result<Vocabulary> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let name = |i: usize| {
        if i == 0 {
            "Thing".to_string()
        } else {
            format!("C{i}")
        }
    };
    let mut depth = vec![0usize];
    let mut concept_types = vec![ConceptTypeDecl {
        name: name(0),
        parent: None,
    }];
    for i in 1..concepts.max(1) {
        let parent = rng.gen_range(0..i);
        depth.push(depth[parent] + 1);
        concept_types.push(ConceptTypeDecl {
            name: name(i),
            parent: Some(name(parent)),
        });
    }
    let shallow: Vec<usize> = (0..depth.len()).filter(|&i| depth[i] <= 2).collect();
    let relation_types = (0..relations)
        .map(|k| {
            let arity = rng.gen_range(arities.clone());
            RelationTypeDecl {
                name: format!("R{k}"),
                arity,
                parent: None,
                signature: (0..arity)
                    .map(|_| name(*shallow.choose(&mut rng).expect("top")))
                    .collect(),
            }
        })
        .collect();
    Vocabulary::from_file(VocabularyFile {
        concept_types,
        relation_types,
        individuals: Vec::new(),
    })
}

/// A random connected pattern of `relations` relations whose arguments all
/// lie strictly below their signature types when the hierarchy allows it.
pub fn random_pattern(
    v: &Vocabulary,
    id: &str,
    relations: usize,
    rng: &mut impl Rng,
) -> Result<ConceptualGraph> {
    let samplers = LabelSampler::new(
        &LabelDistribution::Uniform,
        &v.concept_types().collect::<Vec<_>>(),
        "concept distribution",
    )?;
    let rels: Vec<&RelationTypeDecl> = v.relation_types().collect();
    if rels.is_empty() {
        return Err(Error::Config("vocabulary has no relation types".into()));
    }
    let mut g = ConceptualGraph::new(id);
    let mut counter = 0;
    let fresh = |g: &mut ConceptualGraph, sig: &str, counter: &mut usize, rng: &mut _| {
        let t = argument_type(sig, 1.0, v, &samplers, rng);
        let cid = format!("c{counter}");
        *counter += 1;
        g.concepts.push(Concept::new(cid.clone(), t));
        cid
    };
    for k in 0..relations {
        let mut args: Vec<Option<String>>;
        let rel;
        if k == 0 {
            rel = *rels.choose(rng).expect("non-empty");
            args = vec![None; rel.arity];
        } else {
            // Hook a new relation onto an existing concept it accepts.
            let mut hooks = Vec::new();
            for r in &rels {
                for pos in 0..r.arity {
                    for c in &g.concepts {
                        if v.generalizes(&r.signature[pos], &c.concept_type) {
                            hooks.push((*r, pos, c.id.clone()));
                        }
                    }
                }
            }
            let Some((r, pos, c)) = hooks.choose(rng).cloned() else {
                return Err(Error::Config(
                    "no relation type accepts the pattern's concepts".into(),
                ));
            };
            rel = r;
            args = vec![None; rel.arity];
            args[pos] = Some(c);
        }
        for (arg, sig) in args.iter_mut().zip(&rel.signature) {
            if arg.is_none() {
                *arg = Some(fresh(&mut g, sig, &mut counter, rng));
            }
        }
        g.relations.push(Relation {
            id: format!("r{k}"),
            relation_type: rel.name.clone(),
            args,
        });
    }
    Ok(g)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::vocab::parse_vocabulary;

    fn vocab() -> Vocabulary {
        parse_vocabulary(
            r#"{
            "concept_types": [
                {"name": "Thing"},
                {"name": "Vehicle", "parent": "Thing"},
                {"name": "Plane", "parent": "Vehicle"},
                {"name": "Car", "parent": "Vehicle"},
                {"name": "Human", "parent": "Thing"},
                {"name": "Location", "parent": "Thing"}
            ],
            "relation_types": [
                {"name": "fly-in", "arity": 3, "signature": ["Human", "Vehicle", "Location"]},
                {"name": "owns", "arity": 2, "signature": ["Human", "Thing"]}
            ]
        }"#,
        )
        .unwrap()
    }

    fn seed() -> ConceptualGraph {
        let mut g = ConceptualGraph::new("seed");
        g.concepts = vec![
            Concept::new("h", "Human"),
            Concept::new("p", "Plane"),
            Concept::new("l", "Location"),
        ];
        g.relations = vec![Relation::new("r", "fly-in", ["h", "p", "l"])];
        g
    }

    #[test]
    fn empty_database() {
        let cfg = GenConfig {
            graph_count: 0,
            ..Default::default()
        };
        let (db, m) = generate(&vocab(), &cfg).unwrap();
        assert!(db.is_empty());
        assert!(m.seeds.is_empty() && m.size_histogram.is_empty());
    }

    #[test]
    fn full_frequency_without_noise_copies_the_seed() {
        let cfg = GenConfig {
            graph_count: 5,
            size_distribution: SizeDistribution::Point { value: 0 },
            seeds: vec![SeedSpec {
                pattern: seed(),
                frequency: 1.0,
            }],
            ..Default::default()
        };
        let (db, m) = generate(&vocab(), &cfg).unwrap();
        assert_eq!(db.len(), 5);
        for g in &db {
            assert_eq!(g.concepts.len(), 3);
            assert_eq!(g.relations.len(), 1);
        }
        assert_eq!(m.seeds[0].planted.len(), 5);
        assert_eq!(m.raised_sizes.len(), 5);
    }

    #[test]
    fn planting_uses_the_ceiling() {
        let cfg = GenConfig {
            graph_count: 10,
            seeds: vec![SeedSpec {
                pattern: seed(),
                frequency: 0.25,
            }],
            ..Default::default()
        };
        let (db, m) = generate(&vocab(), &cfg).unwrap();
        assert_eq!(m.seeds[0].planted.len(), 3);
        assert!(m.seeds[0].realized_frequency >= m.seeds[0].planted_frequency);
        for g in &db {
            assert!(validate_graph(g, &vocab()).is_empty(), "{}", g.id);
        }
    }

    #[test]
    fn unnormalized_weights_are_a_config_error() {
        let cfg = GenConfig {
            size_distribution: SizeDistribution::Weighted {
                weights: vec![(3, 0.5), (4, 0.6)],
            },
            ..Default::default()
        };
        assert!(matches!(generate(&vocab(), &cfg), Err(Error::Config(_))));
    }

    #[test]
    fn bad_seed_frequency_is_rejected() {
        let cfg = GenConfig {
            seeds: vec![SeedSpec {
                pattern: seed(),
                frequency: 0.0,
            }],
            ..Default::default()
        };
        assert!(matches!(generate(&vocab(), &cfg), Err(Error::Config(_))));
    }

    #[test]
    fn point_mass_is_constant() {
        let cfg = GenConfig {
            size_distribution: SizeDistribution::Point { value: 7 },
            ..Default::default()
        };
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..20 {
            assert_eq!(sample_distributions(&cfg, &vocab(), &mut rng).unwrap().0, 7);
        }
    }

    #[test]
    fn random_pattern_is_valid() {
        let v = synthetic_vocabulary(30, 8, 2..=3, 5).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for k in 0..20 {
            let p = random_pattern(&v, &format!("p{k}"), 3, &mut rng).unwrap();
            assert!(validate_graph(&p, &v).is_empty());
            assert_eq!(p.relations.len(), 3);
        }
    }
}
