#![allow(dead_code)]

pub mod oracle;

use cgspan::{parse_vocabulary, Concept, ConceptualGraph, Relation, Vocabulary};

/// Planes, cars, humans and locations with a ternary `fly-in`, a binary
/// `owns` and a unary `idle`.
pub fn transport_vocab() -> Vocabulary {
    parse_vocabulary(
        r#"{
        "concept_types": [
            {"name": "Thing"},
            {"name": "Vehicle", "parent": "Thing"},
            {"name": "Plane", "parent": "Vehicle"},
            {"name": "Car", "parent": "Vehicle"},
            {"name": "Human", "parent": "Thing"},
            {"name": "Pilot", "parent": "Human"},
            {"name": "Location", "parent": "Thing"},
            {"name": "Licence", "parent": "Thing"}
        ],
        "relation_types": [
            {"name": "fly-in", "arity": 3, "signature": ["Human", "Vehicle", "Location"]},
            {"name": "owns", "arity": 2, "signature": ["Human", "Thing"]},
            {"name": "holds", "arity": 2, "signature": ["Human", "Licence"]},
            {"name": "is-in", "arity": 2, "signature": ["Thing", "Thing"]},
            {"name": "idle", "arity": 1, "signature": ["Thing"]}
        ],
        "individuals": [{"marker": "F-DZUX", "type": "Plane"}]
    }"#,
    )
    .unwrap()
}

/// `fly-in(Human h, <vehicle> p, Location l)` as graph `id`.
pub fn flight(id: &str, vehicle: &str) -> ConceptualGraph {
    let mut g = ConceptualGraph::new(id);
    g.concepts = vec![
        Concept::new("h", "Human"),
        Concept::new("p", vehicle),
        Concept::new("l", "Location"),
    ];
    g.relations = vec![Relation::new("r", "fly-in", ["h", "p", "l"])];
    g
}

pub fn graph(
    id: &str,
    concepts: &[(&str, &str)],
    relations: &[(&str, &str, &[&str])],
) -> ConceptualGraph {
    let mut g = ConceptualGraph::new(id);
    g.concepts = concepts.iter().map(|(i, t)| Concept::new(*i, *t)).collect();
    g.relations = relations
        .iter()
        .map(|(i, t, args)| Relation::new(*i, *t, args.iter().copied()))
        .collect();
    g
}

/// Six types: `Thing > A > B`, `Thing > C`, binary `r` over `(Thing, Thing)`
/// and unary `s` over `A`.
pub fn tiny_vocab() -> Vocabulary {
    parse_vocabulary(
        r#"{
        "concept_types": [
            {"name": "Thing"},
            {"name": "A", "parent": "Thing"},
            {"name": "B", "parent": "A"},
            {"name": "C", "parent": "Thing"}
        ],
        "relation_types": [
            {"name": "r", "arity": 2, "signature": ["Thing", "Thing"]},
            {"name": "s", "arity": 1, "signature": ["A"]}
        ]
    }"#,
    )
    .unwrap()
}

/// A random database over [`tiny_vocab`] with at most `max_relations`
/// relations per graph.
pub fn tiny_database(seed: u64, graphs: usize, max_relations: usize) -> Vec<ConceptualGraph> {
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let types = ["Thing", "A", "B", "C"];
    (0..graphs)
        .map(|gi| {
            let mut g = ConceptualGraph::new(format!("g{gi}"));
            let n = rng.gen_range(1..=4);
            for c in 0..n {
                g.concepts.push(Concept::new(
                    format!("c{c}"),
                    types[rng.gen_range(0..types.len())],
                ));
            }
            let below_a: Vec<String> = g
                .concepts
                .iter()
                .filter(|c| c.concept_type == "A" || c.concept_type == "B")
                .map(|c| c.id.clone())
                .collect();
            for k in 0..rng.gen_range(0..=max_relations) {
                if !below_a.is_empty() && rng.gen_bool(0.3) {
                    let a = &below_a[rng.gen_range(0..below_a.len())];
                    g.relations
                        .push(Relation::new(format!("r{k}"), "s", [a.as_str()]));
                } else {
                    let a = rng.gen_range(0..n);
                    let b = rng.gen_range(0..n);
                    g.relations.push(Relation::new(
                        format!("r{k}"),
                        "r",
                        [format!("c{a}"), format!("c{b}")],
                    ));
                }
            }
            g
        })
        .collect()
}

/// An extension rule whose hypothesis is the first relation of `seed` and
/// whose conclusion is the whole seed.
pub fn seed_rule(name: &str, seed: &ConceptualGraph) -> cgspan::LambdaRule {
    use cgspan::rule::Connection;
    let first = &seed.relations[0];
    let mut hyp = ConceptualGraph::new(format!("{name}-hyp"));
    let mut concl = seed.clone();
    concl.id = format!("{name}-concl");
    let mut connections = Vec::new();
    for a in first.args.iter().flatten() {
        if hyp.concept(a).is_some() {
            continue;
        }
        let var = format!("*{a}");
        let mut c = seed.concept(a).unwrap().clone();
        c.var = Some(var.clone());
        hyp.concepts.push(c);
        concl.concepts.iter_mut().find(|c| &c.id == a).unwrap().var = Some(var.clone());
        connections.push(Connection {
            var,
            hyp: a.clone(),
            concl: a.clone(),
        });
    }
    hyp.relations.push(first.clone());
    cgspan::LambdaRule {
        name: name.to_string(),
        hypothesis: hyp,
        conclusion: concl,
        connections,
    }
}

/// A generated benchmark: vocabulary, database, manifest and one extension
/// rule per seed.
pub struct Scenario {
    pub vocab: Vocabulary,
    pub db: Vec<ConceptualGraph>,
    pub manifest: cgspan::cggen::Manifest,
    pub rules: Vec<cgspan::LambdaRule>,
    pub minsup: usize,
    pub max_size: usize,
}

/// 200 graphs of about 30 nodes over 50 concept and 20 relation types, with
/// four seeds of two or three relations planted in 40% of the graphs and
/// mined at 20% support.
pub fn benchmark(seed: u64) -> Scenario {
    use cgspan::cggen::{
        generate, random_pattern, synthetic_vocabulary, GenConfig, NoiseConfig, SeedSpec,
        SizeDistribution,
    };
    use rand::SeedableRng;
    let vocab = synthetic_vocabulary(50, 20, 2..=3, seed).unwrap();
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed ^ 0x5eed);
    let seeds: Vec<SeedSpec> = (0..4)
        .map(|k| SeedSpec {
            pattern: random_pattern(&vocab, &format!("seed{k}"), 2 + k % 2, &mut rng).unwrap(),
            frequency: 0.4,
        })
        .collect();
    let cfg = GenConfig {
        graph_count: 200,
        size_distribution: SizeDistribution::Uniform { min: 28, max: 32 },
        seeds,
        noise: NoiseConfig {
            isolated_probability: 0.3,
            ..Default::default()
        },
        rng_seed: seed,
        ..Default::default()
    };
    let (db, manifest) = generate(&vocab, &cfg).unwrap();
    let rules = manifest
        .seeds
        .iter()
        .enumerate()
        .filter(|(_, s)| s.pattern.relations.len() > 1)
        .map(|(k, s)| seed_rule(&format!("seed{k}"), &s.pattern))
        .collect();
    Scenario {
        vocab,
        db,
        manifest,
        rules,
        minsup: 40,
        max_size: 3,
    }
}

/// A random database over [`tiny_vocab`] for exhaustive comparison: up to
/// `max_relations` relations per graph over roughly half as many concepts.
/// Binary relations join distinct concepts: under homomorphism a single
/// self-loop would absorb every structure and make the pattern space explode.
pub fn oracle_database(seed: u64, graphs: usize, max_relations: usize) -> Vec<ConceptualGraph> {
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let types = ["Thing", "A", "B", "C"];
    (0..graphs)
        .map(|gi| {
            let mut g = ConceptualGraph::new(format!("g{gi}"));
            let k = rng.gen_range(1..=max_relations);
            let n = rng.gen_range((k / 2).max(2)..=k / 2 + 2);
            for c in 0..n {
                g.concepts.push(Concept::new(
                    format!("c{c}"),
                    types[rng.gen_range(0..types.len())],
                ));
            }
            for r in 0..k {
                let a = rng.gen_range(0..n);
                let below_a = matches!(g.concepts[a].concept_type.as_str(), "A" | "B");
                if below_a && rng.gen_bool(0.3) {
                    g.relations
                        .push(Relation::new(format!("r{r}"), "s", [format!("c{a}")]));
                } else {
                    let b = (a + rng.gen_range(1..n)) % n;
                    g.relations.push(Relation::new(
                        format!("r{r}"),
                        "r",
                        [format!("c{a}"), format!("c{b}")],
                    ));
                }
            }
            g
        })
        .collect()
}
