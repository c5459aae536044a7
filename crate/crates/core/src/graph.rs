//! Conceptual graphs: bipartite multigraphs of concept and relation nodes.
//!
//! Edges are implicit in each relation's ordered argument list, so the
//! bipartite constraint holds by construction. Pattern graphs produced by the
//! miner may leave an argument position empty (`null`) when a relation was
//! mined without its full neighborhood.

use std::collections::{HashMap, HashSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::vocab::Vocabulary;

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Concept {
    pub id: String,
    #[serde(rename = "type")]
    pub concept_type: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub marker: Option<String>,
    /// Connection variable; only meaningful inside λ-rules.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub var: Option<String>,
}

impl Concept {
    pub fn new(id: impl Into<String>, concept_type: impl Into<String>) -> Self {
        Concept {
            id: id.into(),
            concept_type: concept_type.into(),
            marker: None,
            var: None,
        }
    }

    pub fn with_marker(mut self, marker: impl Into<String>) -> Self {
        self.marker = Some(marker.into());
        self
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Relation {
    pub id: String,
    #[serde(rename = "type")]
    pub relation_type: String,
    pub args: Vec<Option<String>>,
}

impl Relation {
    pub fn new<I, S>(id: impl Into<String>, relation_type: impl Into<String>, args: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        Relation {
            id: id.into(),
            relation_type: relation_type.into(),
            args: args.into_iter().map(|a| Some(a.into())).collect(),
        }
    }

    pub fn is_complete(&self) -> bool {
        self.args.iter().all(Option::is_some)
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConceptualGraph {
    pub id: String,
    #[serde(default)]
    pub concepts: Vec<Concept>,
    #[serde(default)]
    pub relations: Vec<Relation>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub source: Option<String>,
}

impl ConceptualGraph {
    pub fn new(id: impl Into<String>) -> Self {
        ConceptualGraph {
            id: id.into(),
            ..Default::default()
        }
    }

    pub fn concept_index(&self) -> HashMap<&str, usize> {
        self.concepts
            .iter()
            .enumerate()
            .map(|(i, c)| (c.id.as_str(), i))
            .collect()
    }

    pub fn concept(&self, id: &str) -> Option<&Concept> {
        self.concepts.iter().find(|c| c.id == id)
    }

    pub fn node_count(&self) -> usize {
        self.concepts.len() + self.relations.len()
    }

    pub fn is_empty(&self) -> bool {
        self.concepts.is_empty() && self.relations.is_empty()
    }

    /// Reorders concepts by first appearance in relation arguments, with
    /// concepts attached to no relation kept last in their current order.
    pub fn normalize_order(&mut self) {
        let mut rank: HashMap<String, usize> = HashMap::new();
        for r in &self.relations {
            for a in r.args.iter().flatten() {
                let next = rank.len();
                rank.entry(a.clone()).or_insert(next);
            }
        }
        let base = rank.len();
        let mut keyed: Vec<(usize, Concept)> = self
            .concepts
            .drain(..)
            .enumerate()
            .map(|(i, c)| (rank.get(&c.id).copied().unwrap_or(base + i), c))
            .collect();
        keyed.sort_by_key(|(k, _)| *k);
        self.concepts = keyed.into_iter().map(|(_, c)| c).collect();
    }
}

impl fmt::Display for ConceptualGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let index = self.concept_index();
        let label = |id: &str| -> String {
            match index.get(id).map(|&i| &self.concepts[i]) {
                Some(c) => match &c.marker {
                    Some(m) => format!("{}:{}", c.concept_type, m),
                    None => c.concept_type.clone(),
                },
                None => id.to_string(),
            }
        };
        let mut parts = Vec::new();
        let mut used = HashSet::new();
        for r in &self.relations {
            let args: Vec<String> = r
                .args
                .iter()
                .map(|a| match a {
                    Some(a) => {
                        used.insert(a.as_str());
                        label(a)
                    }
                    None => "_".to_string(),
                })
                .collect();
            parts.push(format!("{}({})", r.relation_type, args.join(", ")));
        }
        for c in &self.concepts {
            if !used.contains(c.id.as_str()) {
                parts.push(format!("[{}]", label(&c.id)));
            }
        }
        write!(f, "{}", parts.join(" "))
    }
}

/// What made a graph ill-formed.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ViolationKind {
    DuplicateId,
    UnknownConceptType {
        name: String,
    },
    UnknownRelationType {
        name: String,
    },
    UnknownMarker {
        marker: String,
    },
    MarkerType {
        marker: String,
        marker_type: String,
    },
    Arity {
        expected: usize,
        found: usize,
    },
    MissingArgument {
        position: usize,
    },
    UnknownConcept {
        position: usize,
        concept: String,
    },
    Signature {
        position: usize,
        expected: String,
        found: String,
    },
    VariableOutsideRule {
        var: String,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub graph: String,
    pub node: String,
    #[serde(flatten)]
    pub kind: ViolationKind,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "graph `{}`, node `{}`: ", self.graph, self.node)?;
        match &self.kind {
            ViolationKind::DuplicateId => write!(f, "duplicate node id"),
            ViolationKind::UnknownConceptType { name } => write!(f, "unknown concept type `{name}`"),
            ViolationKind::UnknownRelationType { name } => {
                write!(f, "unknown relation type `{name}`")
            }
            ViolationKind::UnknownMarker { marker } => write!(f, "unknown marker `{marker}`"),
            ViolationKind::MarkerType {
                marker,
                marker_type,
            } => write!(
                f,
                "marker `{marker}` has type `{marker_type}`, not a specialization of the node type"
            ),
            ViolationKind::Arity { expected, found } => {
                write!(f, "arity {expected} expected, {found} arguments given")
            }
            ViolationKind::MissingArgument { position } => {
                write!(f, "argument at position {position} is missing")
            }
            ViolationKind::UnknownConcept { position, concept } => {
                write!(f, "argument at position {position} references unknown concept `{concept}`")
            }
            ViolationKind::Signature {
                position,
                expected,
                found,
            } => write!(
                f,
                "argument at position {position} has type `{found}`, not below signature type `{expected}`"
            ),
            ViolationKind::VariableOutsideRule { var } => {
                write!(f, "connection variable `{var}` outside a rule")
            }
        }
    }
}

/// Returns every well-formedness violation of `g` against `v`; empty iff valid.
pub fn validate_graph(g: &ConceptualGraph, v: &Vocabulary) -> Vec<Violation> {
    validate_inner(g, v, false)
}

pub(crate) fn validate_inner(
    g: &ConceptualGraph,
    v: &Vocabulary,
    allow_vars: bool,
) -> Vec<Violation> {
    let mut out = Vec::new();
    let mut push = |node: &str, kind| {
        out.push(Violation {
            graph: g.id.clone(),
            node: node.to_string(),
            kind,
        })
    };
    let mut seen = HashSet::new();
    let mut types: HashMap<&str, &str> = HashMap::new();
    for c in &g.concepts {
        if !seen.insert(c.id.as_str()) {
            push(&c.id, ViolationKind::DuplicateId);
        }
        if !v.has_concept(&c.concept_type) {
            push(
                &c.id,
                ViolationKind::UnknownConceptType {
                    name: c.concept_type.clone(),
                },
            );
        } else {
            types.insert(c.id.as_str(), c.concept_type.as_str());
        }
        if let Some(m) = &c.marker {
            match v.marker_type(m) {
                None => push(&c.id, ViolationKind::UnknownMarker { marker: m.clone() }),
                Some(mt) => {
                    if v.has_concept(&c.concept_type) && !v.generalizes(&c.concept_type, mt) {
                        push(
                            &c.id,
                            ViolationKind::MarkerType {
                                marker: m.clone(),
                                marker_type: mt.to_string(),
                            },
                        );
                    }
                }
            }
        }
        if let (Some(var), false) = (&c.var, allow_vars) {
            push(
                &c.id,
                ViolationKind::VariableOutsideRule { var: var.clone() },
            );
        }
    }
    let concept_ids: HashSet<&str> = g.concepts.iter().map(|c| c.id.as_str()).collect();
    for r in &g.relations {
        if !seen.insert(r.id.as_str()) {
            push(&r.id, ViolationKind::DuplicateId);
        }
        let Some(decl) = v.relation(&r.relation_type) else {
            push(
                &r.id,
                ViolationKind::UnknownRelationType {
                    name: r.relation_type.clone(),
                },
            );
            continue;
        };
        if decl.arity != r.args.len() {
            push(
                &r.id,
                ViolationKind::Arity {
                    expected: decl.arity,
                    found: r.args.len(),
                },
            );
            continue;
        }
        for (i, arg) in r.args.iter().enumerate() {
            let position = i + 1;
            let Some(arg) = arg else {
                push(&r.id, ViolationKind::MissingArgument { position });
                continue;
            };
            if !concept_ids.contains(arg.as_str()) {
                push(
                    &r.id,
                    ViolationKind::UnknownConcept {
                        position,
                        concept: arg.clone(),
                    },
                );
                continue;
            }
            if let Some(t) = types.get(arg.as_str()) {
                let expected = &decl.signature[i];
                if !v.generalizes(expected, t) {
                    push(
                        &r.id,
                        ViolationKind::Signature {
                            position,
                            expected: expected.clone(),
                            found: t.to_string(),
                        },
                    );
                }
            }
        }
    }
    out
}

pub fn parse_graph(text: &str) -> Result<ConceptualGraph> {
    Ok(serde_json::from_str(text)?)
}

pub fn parse_database(text: &str) -> Result<Vec<ConceptualGraph>> {
    Ok(serde_json::from_str(text)?)
}

pub fn serialize_database(db: &[ConceptualGraph]) -> String {
    serde_json::to_string_pretty(db).expect("graphs serialize")
}

/// A node mapping from one conceptual graph into another.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Projection {
    pub concepts: Vec<usize>,
    pub relations: Vec<usize>,
}

/// Options for [`projections`].
#[derive(Debug, Clone, Copy, Default)]
pub struct ProjectionOptions {
    /// Distinct source nodes must map to distinct target nodes.
    pub injective: bool,
    /// Stop after this many projections.
    pub limit: Option<usize>,
    /// Require exact type equality instead of generalization.
    pub exact_types: bool,
}

/// Enumerates projections of `from` into `to`: every concept maps to a
/// concept whose type it generalizes (markers must agree when `from`
/// carries one), every relation maps to a relation whose type it generalizes,
/// and arguments map position by position. A missing argument in `from` is
/// unconstrained; a missing argument in `to` cannot receive one.
pub fn projections(
    from: &ConceptualGraph,
    to: &ConceptualGraph,
    v: &Vocabulary,
    opts: ProjectionOptions,
) -> Vec<Projection> {
    let to_index = to.concept_index();
    let from_index = from.concept_index();
    let type_ok = |a: &str, b: &str| {
        if opts.exact_types {
            a == b
        } else {
            v.generalizes(a, b)
        }
    };
    let concept_ok = |a: &Concept, b: &Concept| {
        type_ok(&a.concept_type, &b.concept_type)
            && match &a.marker {
                Some(m) => b.marker.as_deref() == Some(m),
                None => true,
            }
    };

    let rel_args: Vec<Vec<Option<usize>>> = from
        .relations
        .iter()
        .map(|r| {
            r.args
                .iter()
                .map(|a| a.as_ref().and_then(|a| from_index.get(a.as_str()).copied()))
                .collect()
        })
        .collect();
    let to_args: Vec<Vec<Option<usize>>> = to
        .relations
        .iter()
        .map(|r| {
            r.args
                .iter()
                .map(|a| a.as_ref().and_then(|a| to_index.get(a.as_str()).copied()))
                .collect()
        })
        .collect();

    let rel_candidates: Vec<Vec<usize>> = from
        .relations
        .iter()
        .map(|r| {
            to.relations
                .iter()
                .enumerate()
                .filter(|(_, t)| {
                    t.args.len() == r.args.len() && type_ok(&r.relation_type, &t.relation_type)
                })
                .map(|(i, _)| i)
                .collect()
        })
        .collect();
    let concept_candidates: Vec<Vec<usize>> = from
        .concepts
        .iter()
        .map(|c| {
            to.concepts
                .iter()
                .enumerate()
                .filter(|(_, t)| concept_ok(c, t))
                .map(|(i, _)| i)
                .collect()
        })
        .collect();

    struct Search<'a> {
        rel_args: &'a [Vec<Option<usize>>],
        to_args: &'a [Vec<Option<usize>>],
        rel_candidates: &'a [Vec<usize>],
        concept_candidates: &'a [Vec<usize>],
        opts: ProjectionOptions,
        concept_map: Vec<Option<usize>>,
        rel_map: Vec<usize>,
        used_concepts: Vec<bool>,
        used_rels: Vec<bool>,
        out: Vec<Projection>,
    }

    impl Search<'_> {
        fn full(&self) -> bool {
            self.opts.limit.is_some_and(|l| self.out.len() >= l)
        }

        fn relations(&mut self, ri: usize) {
            if self.full() {
                return;
            }
            if ri == self.rel_args.len() {
                self.concepts(0);
                return;
            }
            for &t in &self.rel_candidates[ri] {
                if self.opts.injective && self.used_rels[t] {
                    continue;
                }
                let mut bound = Vec::new();
                let mut ok = true;
                for (pos, a) in self.rel_args[ri].iter().enumerate() {
                    let Some(a) = *a else { continue };
                    let Some(target) = self.to_args[t][pos] else {
                        ok = false;
                        break;
                    };
                    match self.concept_map[a] {
                        Some(m) if m != target => {
                            ok = false;
                            break;
                        }
                        Some(_) => {}
                        None => {
                            if !self.concept_candidates[a].contains(&target)
                                || (self.opts.injective && self.used_concepts[target])
                            {
                                ok = false;
                                break;
                            }
                            self.concept_map[a] = Some(target);
                            self.used_concepts[target] = true;
                            bound.push(a);
                        }
                    }
                }
                if ok {
                    self.rel_map.push(t);
                    self.used_rels[t] = true;
                    self.relations(ri + 1);
                    self.used_rels[t] = false;
                    self.rel_map.pop();
                }
                for a in bound {
                    let target = self.concept_map[a].take().expect("bound");
                    self.used_concepts[target] = false;
                }
                if self.full() {
                    return;
                }
            }
        }

        fn concepts(&mut self, ci: usize) {
            if self.full() {
                return;
            }
            if ci == self.concept_map.len() {
                self.out.push(Projection {
                    concepts: self
                        .concept_map
                        .iter()
                        .map(|c| c.expect("complete"))
                        .collect(),
                    relations: self.rel_map.clone(),
                });
                return;
            }
            if self.concept_map[ci].is_some() {
                self.concepts(ci + 1);
                return;
            }
            for i in 0..self.concept_candidates[ci].len() {
                let t = self.concept_candidates[ci][i];
                if self.opts.injective && self.used_concepts[t] {
                    continue;
                }
                self.concept_map[ci] = Some(t);
                self.used_concepts[t] = true;
                self.concepts(ci + 1);
                self.used_concepts[t] = false;
                self.concept_map[ci] = None;
                if self.full() {
                    return;
                }
            }
        }
    }

    let mut search = Search {
        rel_args: &rel_args,
        to_args: &to_args,
        rel_candidates: &rel_candidates,
        concept_candidates: &concept_candidates,
        opts,
        concept_map: vec![None; from.concepts.len()],
        rel_map: Vec::new(),
        used_concepts: vec![false; to.concepts.len()],
        used_rels: vec![false; to.relations.len()],
        out: Vec::new(),
    };
    // Unknown concept references in `from` make it unprojectable.
    let dangling = from.relations.iter().zip(&rel_args).any(|(r, a)| {
        r.args
            .iter()
            .zip(a)
            .any(|(s, m)| s.is_some() && m.is_none())
    });
    if !dangling {
        search.relations(0);
    }
    search.out
}

/// `true` iff `from` projects into `to`.
pub fn projects_into(
    from: &ConceptualGraph,
    to: &ConceptualGraph,
    v: &Vocabulary,
    injective: bool,
) -> bool {
    !projections(
        from,
        to,
        v,
        ProjectionOptions {
            injective,
            limit: Some(1),
            exact_types: false,
        },
    )
    .is_empty()
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
                {"name": "Human", "parent": "Thing"},
                {"name": "Location", "parent": "Thing"}
            ],
            "relation_types": [
                {"name": "fly-in", "arity": 3, "signature": ["Human", "Vehicle", "Location"]}
            ],
            "individuals": [{"marker": "F-DZUX", "type": "Plane"}]
        }"#,
        )
        .unwrap()
    }

    fn fly_in(types: [&str; 3]) -> ConceptualGraph {
        let mut g = ConceptualGraph::new("g");
        g.concepts = vec![
            Concept::new("h", types[0]),
            Concept::new("p", types[1]),
            Concept::new("l", types[2]),
        ];
        g.relations = vec![Relation::new("r", "fly-in", ["h", "p", "l"])];
        g
    }

    #[test]
    fn plane_conforms_to_vehicle_signature() {
        assert!(validate_graph(&fly_in(["Human", "Plane", "Location"]), &vocab()).is_empty());
    }

    #[test]
    fn signature_violation_reports_position() {
        let v = validate_graph(&fly_in(["Location", "Plane", "Location"]), &vocab());
        assert_eq!(v.len(), 1);
        assert_eq!(
            v[0].kind,
            ViolationKind::Signature {
                position: 1,
                expected: "Human".into(),
                found: "Location".into()
            }
        );
    }

    #[test]
    fn arity_and_reference_violations() {
        let mut g = fly_in(["Human", "Plane", "Location"]);
        g.relations[0].args.pop();
        let v = validate_graph(&g, &vocab());
        assert!(matches!(
            v[0].kind,
            ViolationKind::Arity {
                expected: 3,
                found: 2
            }
        ));

        let mut g = fly_in(["Human", "Plane", "Location"]);
        g.relations[0].args[2] = Some("nowhere".into());
        g.concepts[0].concept_type = "Ghost".into();
        let kinds: Vec<_> = validate_graph(&g, &vocab())
            .into_iter()
            .map(|v| v.kind)
            .collect();
        assert!(kinds.contains(&ViolationKind::UnknownConceptType {
            name: "Ghost".into()
        }));
        assert!(kinds
            .iter()
            .any(|k| matches!(k, ViolationKind::UnknownConcept { position: 3, .. })));
    }

    #[test]
    fn markers_follow_tau() {
        let mut g = fly_in(["Human", "Plane", "Location"]);
        g.concepts[1].marker = Some("F-DZUX".into());
        assert!(validate_graph(&g, &vocab()).is_empty());
        g.concepts[0].marker = Some("F-DZUX".into());
        assert!(matches!(
            validate_graph(&g, &vocab())[0].kind,
            ViolationKind::MarkerType { .. }
        ));
    }

    #[test]
    fn projection_respects_generalization() {
        let v = vocab();
        let general = fly_in(["Human", "Vehicle", "Location"]);
        let specific = fly_in(["Human", "Plane", "Location"]);
        assert!(projects_into(&general, &specific, &v, true));
        assert!(!projects_into(&specific, &general, &v, true));
    }

    #[test]
    fn normalize_order_follows_arguments() {
        let mut g = fly_in(["Human", "Plane", "Location"]);
        g.concepts.reverse();
        g.concepts.push(Concept::new("x", "Thing"));
        g.concepts.swap(0, 3);
        g.normalize_order();
        let ids: Vec<_> = g.concepts.iter().map(|c| c.id.as_str()).collect();
        assert_eq!(ids, ["h", "p", "l", "x"]);
    }

    #[test]
    fn database_round_trip() {
        let db = vec![fly_in(["Human", "Plane", "Location"])];
        assert_eq!(parse_database(&serialize_database(&db)).unwrap(), db);
    }
}
