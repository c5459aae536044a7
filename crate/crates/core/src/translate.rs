//! Pre-processing (specialization rules, taxonomy-path encoding, signature
//! truncation, brick construction) and back-translation of mined patterns.

use std::collections::HashMap;
use std::fmt;

use rayon::prelude::*;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::graph::{projections, Concept, ConceptualGraph, ProjectionOptions, Relation};
use crate::rule::LambdaRule;
use crate::tlg::{EdgeLabel, FullLabel, NodeKind, PatternGraph, SymbolKind, Symbols, TargetGraph};
use crate::vocab::Vocabulary;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TranslateOptions {
    /// Translate relations into elementary bricks; otherwise keep raw CG nodes.
    pub bricks: bool,
    /// Start argument paths at the signature type instead of the top type.
    pub signatures: bool,
    /// Keep individual markers as a final, matchable path segment.
    pub strict_markers: bool,
}

impl Default for TranslateOptions {
    fn default() -> Self {
        TranslateOptions {
            bricks: true,
            signatures: true,
            strict_markers: false,
        }
    }
}

/// A taxonomy path: type chain plus optional marker segment.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct TaxonomyPath {
    pub types: Vec<String>,
    pub marker: Option<String>,
}

impl TaxonomyPath {
    pub fn concept(v: &Vocabulary, t: &str, marker: Option<&str>) -> Result<Self> {
        Ok(TaxonomyPath {
            types: v.concept_chain(t)?.into_iter().map(String::from).collect(),
            marker: marker.map(String::from),
        })
    }

    pub fn relation(v: &Vocabulary, t: &str) -> Result<Self> {
        Ok(TaxonomyPath {
            types: v.relation_chain(t)?.into_iter().map(String::from).collect(),
            marker: None,
        })
    }

    pub fn leaf(&self) -> &str {
        self.types.last().map(String::as_str).unwrap_or("")
    }

    fn syms(&self, symbols: &Symbols, strict_markers: bool) -> Vec<u32> {
        let mut out: Vec<u32> = self
            .types
            .iter()
            .map(|t| symbols.get(t).expect("vocabulary symbol"))
            .collect();
        if strict_markers {
            if let Some(m) = &self.marker {
                out.push(symbols.get(m).expect("marker symbol"));
            }
        }
        out
    }
}

impl fmt::Display for TaxonomyPath {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.types.join("_"))?;
        if let Some(m) = &self.marker {
            write!(f, "_{m}")?;
        }
        Ok(())
    }
}

impl Serialize for TaxonomyPath {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

/// Cuts `path` so that it starts at the signature type of `relation` at
/// `position` (1-based). Identity when `enabled` is false.
pub fn truncate_by_signature(
    path: &TaxonomyPath,
    relation: &str,
    position: usize,
    v: &Vocabulary,
    enabled: bool,
) -> Result<TaxonomyPath> {
    if !enabled {
        return Ok(path.clone());
    }
    let decl = v.relation(relation).ok_or_else(|| Error::UnknownType {
        kind: "relation type",
        name: relation.to_string(),
    })?;
    let sig = decl
        .signature
        .get(position.wrapping_sub(1))
        .ok_or_else(|| Error::Formalism(format!("`{relation}` has no position {position}")))?;
    let at = path.types.iter().position(|t| t == sig).ok_or_else(|| {
        Error::Formalism(format!(
            "signature type `{sig}` of `{relation}` at position {position} is not on path `{path}`"
        ))
    })?;
    Ok(TaxonomyPath {
        types: path.types[at..].to_vec(),
        marker: path.marker.clone(),
    })
}

/// Outcome of specialization-rule pre-processing.
#[derive(Debug, Clone, Default)]
pub struct SpecializationReport {
    pub changed: usize,
    pub warnings: Vec<String>,
}

/// Specializes connection nodes of every embedding of a specialization
/// rule's hypothesis to the conclusion type. Rules run in order; each node is
/// specialized at most once per rule, and an earlier rule wins over a later
/// incomparable one.
pub fn apply_specialization_rules(
    g: &ConceptualGraph,
    rules: &[LambdaRule],
    v: &Vocabulary,
) -> (ConceptualGraph, SpecializationReport) {
    let mut out = g.clone();
    let mut report = SpecializationReport::default();
    let mut owner: HashMap<usize, &str> = HashMap::new();
    for rule in rules.iter().filter(|r| r.kind(v).specialization) {
        let hyp_index = rule.hypothesis.concept_index();
        let targets: Vec<(usize, String)> = rule
            .specialized_connections()
            .into_iter()
            .filter_map(|c| {
                let concl = rule.conclusion.concept(&c.concl)?;
                Some((*hyp_index.get(c.hyp.as_str())?, concl.concept_type.clone()))
            })
            .collect();
        let found = projections(&rule.hypothesis, &out, v, ProjectionOptions::default());
        let mut touched: HashMap<usize, String> = HashMap::new();
        for proj in &found {
            for (hyp_node, new_type) in &targets {
                let node = proj.concepts[*hyp_node];
                if let Some(prev) = touched.get(&node) {
                    if prev != new_type {
                        report.warnings.push(format!(
                            "rule `{}`: conflicting specializations of `{}` in `{}`",
                            rule.name, out.concepts[node].id, g.id
                        ));
                    }
                    continue;
                }
                touched.insert(node, new_type.clone());
            }
        }
        let mut touched: Vec<_> = touched.into_iter().collect();
        touched.sort();
        for (node, new_type) in touched {
            let concept = &out.concepts[node];
            let current = concept.concept_type.as_str();
            if v.generalizes(&new_type, current) {
                // Already at least as specific.
                continue;
            }
            if !v.generalizes(current, &new_type) {
                let msg = match owner.get(&node) {
                    Some(first) => format!(
                        "rule `{}`: `{}` in `{}` already specialized by `{first}`; keeping `{current}`",
                        rule.name, concept.id, g.id
                    ),
                    None => format!(
                        "rule `{}`: `{new_type}` does not specialize `{current}` for `{}` in `{}`",
                        rule.name, concept.id, g.id
                    ),
                };
                report.warnings.push(msg);
                continue;
            }
            if let Some(m) = &concept.marker {
                if let Some(mt) = v.marker_type(m) {
                    if !v.generalizes(&new_type, mt) {
                        report.warnings.push(format!(
                            "rule `{}`: marker `{m}` of `{}` in `{}` is not a `{new_type}`",
                            rule.name, concept.id, g.id
                        ));
                        continue;
                    }
                }
            }
            out.concepts[node].concept_type = new_type;
            owner.insert(node, &rule.name);
            report.changed += 1;
        }
    }
    (out, report)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Brick {
    pub relation_path: TaxonomyPath,
    pub argument_paths: Vec<TaxonomyPath>,
    /// (graph id, relation node id)
    pub origin: (String, String),
}

impl Brick {
    pub fn label(&self) -> String {
        let args: Vec<String> = self.argument_paths.iter().map(|p| p.to_string()).collect();
        format!("{}({})", self.relation_path, args.join(","))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BrickEdge {
    pub a: usize,
    /// 1-based argument position in brick `a`.
    pub pos_a: usize,
    pub b: usize,
    pub pos_b: usize,
    /// Untruncated taxonomy path of the shared concept.
    pub path: TaxonomyPath,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BrickGraph {
    pub id: String,
    pub nodes: Vec<Brick>,
    pub edges: Vec<BrickEdge>,
    pub isolated_concepts: Vec<TaxonomyPath>,
}

/// Builds the brick graph of a valid CG: one brick per relation, one edge
/// per (brick pair, shared concept incidence).
pub fn build_brick_graph(
    g: &ConceptualGraph,
    v: &Vocabulary,
    opts: TranslateOptions,
) -> Result<BrickGraph> {
    let index = g.concept_index();
    let mut paths = Vec::with_capacity(g.concepts.len());
    for c in &g.concepts {
        paths.push(TaxonomyPath::concept(
            v,
            &c.concept_type,
            c.marker.as_deref(),
        )?);
    }
    let mut nodes = Vec::with_capacity(g.relations.len());
    let mut args_of: Vec<Vec<usize>> = Vec::with_capacity(g.relations.len());
    for r in &g.relations {
        let mut argument_paths = Vec::with_capacity(r.args.len());
        let mut ids = Vec::with_capacity(r.args.len());
        for (i, a) in r.args.iter().enumerate() {
            let ci = a
                .as_ref()
                .and_then(|a| index.get(a.as_str()).copied())
                .ok_or_else(|| {
                    Error::InvalidDatabase(format!(
                        "`{}` in `{}` has a dangling argument",
                        r.id, g.id
                    ))
                })?;
            argument_paths.push(truncate_by_signature(
                &paths[ci],
                &r.relation_type,
                i + 1,
                v,
                opts.signatures,
            )?);
            ids.push(ci);
        }
        nodes.push(Brick {
            relation_path: TaxonomyPath::relation(v, &r.relation_type)?,
            argument_paths,
            origin: (g.id.clone(), r.id.clone()),
        });
        args_of.push(ids);
    }
    let mut edges = Vec::new();
    for a in 0..nodes.len() {
        for b in a + 1..nodes.len() {
            for (pa, ca) in args_of[a].iter().enumerate() {
                for (pb, cb) in args_of[b].iter().enumerate() {
                    if ca == cb {
                        edges.push(BrickEdge {
                            a,
                            pos_a: pa + 1,
                            b,
                            pos_b: pb + 1,
                            path: paths[*ca].clone(),
                        });
                    }
                }
            }
        }
    }
    let mut attached = vec![false; g.concepts.len()];
    for ids in &args_of {
        for &c in ids {
            attached[c] = true;
        }
    }
    let isolated_concepts = paths
        .iter()
        .zip(&attached)
        .filter(|(_, &a)| !a)
        .map(|(p, _)| p.clone())
        .collect();
    Ok(BrickGraph {
        id: g.id.clone(),
        nodes,
        edges,
        isolated_concepts,
    })
}

/// Mining view of a brick graph. Isolated concepts are dropped.
pub fn brick_target(bg: &BrickGraph, symbols: &Symbols, strict_markers: bool) -> TargetGraph {
    let labels = bg
        .nodes
        .iter()
        .map(|b| FullLabel {
            kind: NodeKind::Brick,
            parts: std::iter::once(b.relation_path.syms(symbols, false))
                .chain(
                    b.argument_paths
                        .iter()
                        .map(|p| p.syms(symbols, strict_markers)),
                )
                .collect(),
        })
        .collect();
    let mut t = TargetGraph::new(bg.id.clone(), labels);
    for e in &bg.edges {
        t.add_edge(e.a, e.b, EdgeLabel::new(e.pos_a as u16, e.pos_b as u16));
    }
    t
}

/// Mining view of a CG without bricks: concept nodes first, then relation
/// nodes, with one edge per argument.
pub fn raw_target(
    g: &ConceptualGraph,
    v: &Vocabulary,
    opts: TranslateOptions,
    symbols: &Symbols,
) -> Result<TargetGraph> {
    let index = g.concept_index();
    let mut cut: Vec<Option<(usize, String)>> = vec![None; g.concepts.len()];
    if opts.signatures {
        for r in &g.relations {
            let Some(decl) = v.relation(&r.relation_type) else {
                continue;
            };
            for (i, a) in r.args.iter().enumerate() {
                let Some(&ci) = a.as_ref().and_then(|a| index.get(a.as_str())) else {
                    continue;
                };
                let sig = &decl.signature[i];
                let depth = v.concept_depth(sig).unwrap_or(0);
                if cut[ci].as_ref().is_none_or(|(d, _)| depth > *d) {
                    cut[ci] = Some((depth, sig.clone()));
                }
            }
        }
    }
    let mut labels = Vec::with_capacity(g.node_count());
    for (c, cut) in g.concepts.iter().zip(&cut) {
        let mut path = TaxonomyPath::concept(v, &c.concept_type, c.marker.as_deref())?;
        if let Some((_, sig)) = cut {
            let at = path.types.iter().position(|t| t == sig).ok_or_else(|| {
                Error::Formalism(format!(
                    "`{}` in `{}` is not below signature type `{sig}`",
                    c.id, g.id
                ))
            })?;
            path.types.drain(..at);
        }
        labels.push(FullLabel {
            kind: NodeKind::Concept,
            parts: vec![path.syms(symbols, opts.strict_markers)],
        });
    }
    for r in &g.relations {
        labels.push(FullLabel {
            kind: NodeKind::Relation,
            parts: vec![TaxonomyPath::relation(v, &r.relation_type)?.syms(symbols, false)],
        });
    }
    let mut t = TargetGraph::new(g.id.clone(), labels);
    let base = g.concepts.len();
    for (ri, r) in g.relations.iter().enumerate() {
        for (i, a) in r.args.iter().enumerate() {
            if let Some(&ci) = a.as_ref().and_then(|a| index.get(a.as_str())) {
                t.add_edge(base + ri, ci, EdgeLabel::new(i as u16 + 1, 0));
            }
        }
    }
    Ok(t)
}

/// Translates a whole database, preserving graph order.
pub fn translate_database(
    db: &[ConceptualGraph],
    v: &Vocabulary,
    opts: TranslateOptions,
    symbols: &Symbols,
) -> Result<Vec<TargetGraph>> {
    db.par_iter()
        .map(|g| {
            if opts.bricks {
                Ok(brick_target(
                    &build_brick_graph(g, v, opts)?,
                    symbols,
                    opts.strict_markers,
                ))
            } else {
                raw_target(g, v, opts, symbols)
            }
        })
        .collect()
}

/// A back-translated pattern plus, for each concept, the pattern node slots
/// (node index, argument position) it came from.
#[derive(Debug, Clone)]
pub struct BackTranslation {
    pub graph: ConceptualGraph,
    pub concept_origins: Vec<Vec<(usize, u16)>>,
}

fn split_leaf(path: &[u32], symbols: &Symbols) -> Result<(String, Option<String>)> {
    match path {
        [] => Err(Error::Internal("empty label component".into())),
        [.., t, m] if symbols.kind(*m) == SymbolKind::Marker => Ok((
            symbols.name(*t).to_string(),
            Some(symbols.name(*m).to_string()),
        )),
        [.., t] => Ok((symbols.name(*t).to_string(), None)),
    }
}

/// Translates a mined pattern back into a conceptual graph. Brick argument
/// slots linked by edges merge into one concept typed by the deepest of
/// their labels.
pub fn back_translate(
    p: &PatternGraph,
    symbols: &Symbols,
    v: &Vocabulary,
) -> Result<BackTranslation> {
    let mut graph = ConceptualGraph::new("pattern");
    let mut relation_ids = HashMap::new();
    let mut next_rel = 0;
    for (i, n) in p.nodes.iter().enumerate() {
        if n.kind.is_relational() {
            relation_ids.insert(i, format!("r{next_rel}"));
            next_rel += 1;
        }
    }

    if p.nodes.iter().any(|n| n.kind == NodeKind::Brick) {
        // Union-find over (brick, position) slots.
        let mut slots: Vec<(usize, u16)> = Vec::new();
        let mut slot_index = HashMap::new();
        for (i, n) in p.nodes.iter().enumerate() {
            for pos in 1..n.parts.len() {
                slot_index.insert((i, pos as u16), slots.len());
                slots.push((i, pos as u16));
            }
        }
        let mut parent: Vec<usize> = (0..slots.len()).collect();
        fn find(parent: &mut [usize], x: usize) -> usize {
            let mut r = x;
            while parent[r] != r {
                r = parent[r];
            }
            let mut c = x;
            while parent[c] != r {
                let next = parent[c];
                parent[c] = r;
                c = next;
            }
            r
        }
        for e in &p.edges {
            let a = *slot_index
                .get(&(e.a, e.label.here))
                .ok_or_else(|| Error::Internal("edge position outside brick".into()))?;
            let b = *slot_index
                .get(&(e.b, e.label.there))
                .ok_or_else(|| Error::Internal("edge position outside brick".into()))?;
            let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
            if ra != rb {
                parent[ra.max(rb)] = ra.min(rb);
            }
        }
        let mut group_of_root: HashMap<usize, usize> = HashMap::new();
        let mut members: Vec<Vec<usize>> = Vec::new();
        for s in 0..slots.len() {
            let r = find(&mut parent, s);
            let g = *group_of_root.entry(r).or_insert_with(|| {
                members.push(Vec::new());
                members.len() - 1
            });
            members[g].push(s);
        }
        let mut concept_origins = Vec::with_capacity(members.len());
        for (gi, group) in members.iter().enumerate() {
            let mut best: Option<(String, Option<String>)> = None;
            for &s in group {
                let (node, pos) = slots[s];
                let (t, m) = split_leaf(&p.nodes[node].parts[pos as usize].path, symbols)?;
                best = Some(match best {
                    None => (t, m),
                    Some((bt, bm)) => {
                        let marker = match (bm, m) {
                            (Some(a), Some(b)) if a != b => {
                                return Err(Error::Internal(format!(
                                    "markers `{a}` and `{b}` merged"
                                )))
                            }
                            (a, b) => a.or(b),
                        };
                        if v.generalizes(&bt, &t) {
                            (t, marker)
                        } else if v.generalizes(&t, &bt) {
                            (bt, marker)
                        } else {
                            return Err(Error::Internal(format!(
                                "inconsistent shared-concept labels `{bt}` and `{t}`"
                            )));
                        }
                    }
                });
            }
            let (t, m) = best.expect("non-empty group");
            let mut c = Concept::new(format!("c{gi}"), t);
            c.marker = m;
            graph.concepts.push(c);
            concept_origins.push(group.iter().map(|&s| slots[s]).collect());
        }
        for (i, n) in p.nodes.iter().enumerate() {
            let (rtype, _) = split_leaf(&n.parts[0].path, symbols)?;
            let args = (1..n.parts.len())
                .map(|pos| {
                    let s = slot_index[&(i, pos as u16)];
                    let g = group_of_root[&find(&mut parent, s)];
                    Some(format!("c{g}"))
                })
                .collect();
            graph.relations.push(Relation {
                id: relation_ids[&i].clone(),
                relation_type: rtype,
                args,
            });
        }
        return Ok(BackTranslation {
            graph,
            concept_origins,
        });
    }

    // Raw nodes: number concepts by first appearance in relation arguments.
    let adj = p.adjacency();
    let mut order: Vec<usize> = Vec::new();
    let mut seen = vec![false; p.nodes.len()];
    let mut rel_args: Vec<(usize, Vec<Option<usize>>)> = Vec::new();
    for (i, n) in p.nodes.iter().enumerate() {
        if n.kind != NodeKind::Relation {
            continue;
        }
        let (rtype, _) = split_leaf(&n.parts[0].path, symbols)?;
        let arity = v
            .relation(&rtype)
            .map(|d| d.arity)
            .ok_or_else(|| Error::Internal(format!("unknown relation `{rtype}` in pattern")))?;
        let mut args = vec![None; arity];
        let mut incident: Vec<_> = adj[i].iter().collect();
        incident.sort_by_key(|(_, l, _)| l.here);
        for &&(w, l, _) in &incident {
            let slot = args
                .get_mut(l.here as usize - 1)
                .ok_or_else(|| Error::Internal("argument position beyond arity".into()))?;
            if slot.is_some() {
                return Err(Error::Internal("two arguments at one position".into()));
            }
            *slot = Some(w);
        }
        for w in args.iter().flatten() {
            if !seen[*w] {
                seen[*w] = true;
                order.push(*w);
            }
        }
        rel_args.push((i, args));
    }
    for (i, n) in p.nodes.iter().enumerate() {
        if n.kind == NodeKind::Concept && !seen[i] {
            seen[i] = true;
            order.push(i);
        }
    }
    let mut concept_id = HashMap::new();
    let mut concept_origins = Vec::new();
    for (k, &node) in order.iter().enumerate() {
        let (t, m) = split_leaf(&p.nodes[node].parts[0].path, symbols)?;
        let mut c = Concept::new(format!("c{k}"), t);
        c.marker = m;
        graph.concepts.push(c);
        concept_id.insert(node, format!("c{k}"));
        concept_origins.push(vec![(node, 0)]);
    }
    for (i, args) in rel_args {
        let (rtype, _) = split_leaf(&p.nodes[i].parts[0].path, symbols)?;
        graph.relations.push(Relation {
            id: relation_ids[&i].clone(),
            relation_type: rtype,
            args: args
                .into_iter()
                .map(|a| a.map(|w| concept_id[&w].clone()))
                .collect(),
        });
    }
    Ok(BackTranslation {
        graph,
        concept_origins,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::validate_graph;
    use crate::rule::tests::{pilot_rule, pilot_vocab};
    use crate::tlg::NodeLabel;
    use crate::vocab::parse_vocabulary;

    fn fly_vocab() -> Vocabulary {
        parse_vocabulary(
            r#"{
            "concept_types": [
                {"name": "Thing"},
                {"name": "Vehicle", "parent": "Thing"},
                {"name": "Plane", "parent": "Vehicle"},
                {"name": "Human", "parent": "Thing"},
                {"name": "Location", "parent": "Thing"}
            ],
            "relation_types": [
                {"name": "T3", "arity": 3, "signature": ["Thing", "Thing", "Thing"]},
                {"name": "fly-in", "arity": 3, "parent": "T3", "signature": ["Human", "Vehicle", "Location"]},
                {"name": "near", "arity": 2, "signature": ["Thing", "Thing"]}
            ]
        }"#,
        )
        .unwrap()
    }

    fn flight() -> ConceptualGraph {
        let mut g = ConceptualGraph::new("g1");
        g.concepts = vec![
            Concept::new("h", "Human"),
            Concept::new("p", "Plane"),
            Concept::new("l", "Location"),
        ];
        g.relations = vec![Relation::new("r", "fly-in", ["h", "p", "l"])];
        g
    }

    fn path(v: &Vocabulary, t: &str) -> TaxonomyPath {
        TaxonomyPath::concept(v, t, None).unwrap()
    }

    #[test]
    fn signature_truncation() {
        let v = fly_vocab();
        let cut = truncate_by_signature(&path(&v, "Plane"), "fly-in", 2, &v, true).unwrap();
        assert_eq!(cut.to_string(), "Vehicle_Plane");
        let cut = truncate_by_signature(&path(&v, "Human"), "fly-in", 1, &v, true).unwrap();
        assert_eq!(cut.to_string(), "Human");
        let top = truncate_by_signature(&path(&v, "Plane"), "T3", 2, &v, true).unwrap();
        assert_eq!(top.to_string(), "Thing_Vehicle_Plane");
        let off = truncate_by_signature(&path(&v, "Plane"), "fly-in", 2, &v, false).unwrap();
        assert_eq!(off.to_string(), "Thing_Vehicle_Plane");
        assert!(matches!(
            truncate_by_signature(&path(&v, "Location"), "fly-in", 2, &v, true),
            Err(Error::Formalism(_))
        ));
    }

    #[test]
    fn single_brick() {
        let v = fly_vocab();
        let bg = build_brick_graph(&flight(), &v, TranslateOptions::default()).unwrap();
        assert_eq!(bg.nodes.len(), 1);
        assert!(bg.edges.is_empty());
        assert_eq!(
            bg.nodes[0].label(),
            "T3_fly-in(Human,Vehicle_Plane,Location)"
        );
        let plain = build_brick_graph(
            &flight(),
            &v,
            TranslateOptions {
                signatures: false,
                ..Default::default()
            },
        )
        .unwrap();
        assert_eq!(
            plain.nodes[0].label(),
            "T3_fly-in(Thing_Human,Thing_Vehicle_Plane,Thing_Location)"
        );
    }

    #[test]
    fn shared_concept_gives_one_edge() {
        let v = fly_vocab();
        let mut g = flight();
        g.concepts.push(Concept::new("q", "Plane"));
        g.relations.push(Relation::new("n", "near", ["p", "q"]));
        let bg = build_brick_graph(&g, &v, TranslateOptions::default()).unwrap();
        assert_eq!(bg.nodes.len(), 2);
        assert_eq!(bg.edges.len(), 1);
        let e = &bg.edges[0];
        assert_eq!((e.a, e.pos_a, e.b, e.pos_b), (0, 2, 1, 1));
        assert_eq!(e.path.to_string(), "Thing_Vehicle_Plane");
        assert_eq!(
            bg.nodes[1].argument_paths[0].to_string(),
            "Thing_Vehicle_Plane"
        );
    }

    #[test]
    fn isolated_concept_has_no_brick() {
        let v = fly_vocab();
        let mut g = ConceptualGraph::new("lonely");
        g.concepts.push(Concept::new("x", "Human"));
        let bg = build_brick_graph(&g, &v, TranslateOptions::default()).unwrap();
        assert!(bg.nodes.is_empty());
        assert_eq!(bg.isolated_concepts.len(), 1);
    }

    #[test]
    fn specialization_rule_applies_once() {
        let v = pilot_vocab();
        let mut g = ConceptualGraph::new("g");
        g.concepts = vec![
            Concept::new("a", "Human"),
            Concept::new("b", "Plane"),
            Concept::new("c", "Human"),
        ];
        g.relations = vec![Relation::new("r", "is-in", ["a", "b"])];
        let (out, report) = apply_specialization_rules(&g, &[pilot_rule()], &v);
        assert_eq!(out.concepts[0].concept_type, "Pilot");
        assert_eq!(out.concepts[2].concept_type, "Human");
        assert_eq!(report.changed, 1);
        assert_eq!(
            TaxonomyPath::concept(&v, &out.concepts[0].concept_type, None)
                .unwrap()
                .to_string(),
            "Thing_Human_Pilot"
        );
        let (again, _) = apply_specialization_rules(&out, &[pilot_rule()], &v);
        assert_eq!(again, out);
        let (same, _) = apply_specialization_rules(&g, &[], &v);
        assert_eq!(same, g);
    }

    #[test]
    fn specialization_rule_without_match_is_identity() {
        let v = pilot_vocab();
        let mut g = ConceptualGraph::new("g");
        g.concepts = vec![Concept::new("a", "Human"), Concept::new("b", "Human")];
        g.relations = vec![Relation::new("r", "is-in", ["a", "b"])];
        let (out, _) = apply_specialization_rules(&g, &[pilot_rule()], &v);
        assert_eq!(out, g);
    }

    #[test]
    fn back_translation_of_bricks() {
        let v = fly_vocab();
        let symbols = Symbols::new(&v);
        let mut g = flight();
        g.concepts.push(Concept::new("q", "Plane"));
        g.relations.push(Relation::new("n", "near", ["p", "q"]));
        let t = brick_target(
            &build_brick_graph(&g, &v, TranslateOptions::default()).unwrap(),
            &symbols,
            false,
        );
        let mut p = PatternGraph {
            nodes: t.labels.iter().map(NodeLabel::open_prefix).collect(),
            edges: vec![crate::tlg::PatternEdge {
                a: 0,
                b: 1,
                label: EdgeLabel::new(2, 1),
            }],
        };
        let back = back_translate(&p, &symbols, &v).unwrap();
        assert_eq!(back.graph.relations.len(), 2);
        assert_eq!(back.graph.concepts.len(), 4);
        assert!(validate_graph(&back.graph, &v).is_empty());
        let types: Vec<_> = back
            .graph
            .concepts
            .iter()
            .map(|c| c.concept_type.as_str())
            .collect();
        assert_eq!(types, ["Human", "Plane", "Location", "Plane"]);

        p.edges.clear();
        p.nodes.truncate(1);
        let single = back_translate(&p, &symbols, &v).unwrap();
        assert_eq!(single.graph.to_string(), "fly-in(Human, Plane, Location)");

        let empty = back_translate(&PatternGraph::default(), &symbols, &v).unwrap();
        assert!(empty.graph.is_empty());
    }
}
