//! Signature-aware pruning and compression of mined patterns.
//!
//! A relation is *signature-only* when it is complete and each argument is
//! a generic concept whose type is exactly the signature type at that
//! position. Such relations carry no information beyond the vocabulary, so
//! they are written as references to the signature.

use std::collections::HashSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::graph::{Concept, ConceptualGraph, Relation};
use crate::vocab::Vocabulary;

/// A relation reduced to its signature, written `S_<relation type>`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SignatureReference {
    pub id: String,
    pub sig_ref: String,
    pub args: Vec<String>,
}

impl fmt::Display for SignatureReference {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "S_{}", self.sig_ref)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum PatternRelation {
    Reference(SignatureReference),
    Relation(Relation),
}

/// A pattern whose signature-only relations are references. Concepts used
/// only by references are left out; their types follow from the signature.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CompressedPattern {
    pub id: String,
    pub concepts: Vec<Concept>,
    pub relations: Vec<PatternRelation>,
}

impl CompressedPattern {
    /// Wraps a pattern without compressing anything.
    pub fn verbatim(p: &ConceptualGraph) -> Self {
        CompressedPattern {
            id: p.id.clone(),
            concepts: p.concepts.clone(),
            relations: p
                .relations
                .iter()
                .cloned()
                .map(PatternRelation::Relation)
                .collect(),
        }
    }
}

fn relation_is_signature_only(r: &Relation, p: &ConceptualGraph, v: &Vocabulary) -> bool {
    let Some(decl) = v.relation(&r.relation_type) else {
        return false;
    };
    r.args.len() == decl.signature.len()
        && r.args.iter().zip(&decl.signature).all(|(a, sig)| {
            a.as_deref()
                .and_then(|id| p.concept(id))
                .is_some_and(|c| c.marker.is_none() && &c.concept_type == sig)
        })
}

/// `true` iff every relation of `p` is signature-only. The empty pattern is
/// signature-only; a pattern made of concepts alone is not.
pub fn is_signature_only(p: &ConceptualGraph, v: &Vocabulary) -> bool {
    if p.relations.is_empty() {
        return p.concepts.is_empty();
    }
    p.relations
        .iter()
        .all(|r| relation_is_signature_only(r, p, v))
}

/// Replaces signature-only relations by references. The result
/// decompresses to `p` with concepts in normal order.
pub fn compress(p: &ConceptualGraph, v: &Vocabulary) -> CompressedPattern {
    let mut relations = Vec::with_capacity(p.relations.len());
    let mut kept: HashSet<&str> = HashSet::new();
    for r in &p.relations {
        if relation_is_signature_only(r, p, v) {
            relations.push(PatternRelation::Reference(SignatureReference {
                id: r.id.clone(),
                sig_ref: r.relation_type.clone(),
                args: r.args.iter().flatten().cloned().collect(),
            }));
        } else {
            kept.extend(r.args.iter().flatten().map(String::as_str));
            relations.push(PatternRelation::Relation(r.clone()));
        }
    }
    let referenced: HashSet<&str> = p
        .relations
        .iter()
        .flat_map(|r| r.args.iter().flatten().map(String::as_str))
        .collect();
    let concepts = p
        .concepts
        .iter()
        .filter(|c| kept.contains(c.id.as_str()) || !referenced.contains(c.id.as_str()))
        .cloned()
        .collect();
    CompressedPattern {
        id: p.id.clone(),
        concepts,
        relations,
    }
}

/// Inverse of [`compress`]. Fails on references to unknown relation types.
pub fn decompress(c: &CompressedPattern, v: &Vocabulary) -> crate::Result<ConceptualGraph> {
    let mut g = ConceptualGraph::new(c.id.clone());
    g.concepts = c.concepts.clone();
    for r in &c.relations {
        match r {
            PatternRelation::Relation(r) => g.relations.push(r.clone()),
            PatternRelation::Reference(s) => {
                let decl = v
                    .relation(&s.sig_ref)
                    .ok_or_else(|| crate::Error::UnknownType {
                        kind: "relation type",
                        name: s.sig_ref.clone(),
                    })?;
                if decl.signature.len() != s.args.len() {
                    return Err(crate::Error::Formalism(format!(
                        "signature reference `{}` has {} arguments, expected {}",
                        s.id,
                        s.args.len(),
                        decl.signature.len()
                    )));
                }
                for (a, sig) in s.args.iter().zip(&decl.signature) {
                    if g.concept(a).is_none() {
                        g.concepts.push(Concept::new(a.clone(), sig.clone()));
                    }
                }
                g.relations.push(Relation {
                    id: s.id.clone(),
                    relation_type: s.sig_ref.clone(),
                    args: s.args.iter().cloned().map(Some).collect(),
                });
            }
        }
    }
    g.normalize_order();
    Ok(g)
}

/// Splits patterns into kept and pruned by [`is_signature_only`]. `exempt`
/// marks patterns that are never pruned.
pub fn prune<T>(
    patterns: Vec<T>,
    v: &Vocabulary,
    graph_of: impl Fn(&T) -> &ConceptualGraph,
    exempt: impl Fn(&T) -> bool,
) -> (Vec<T>, usize) {
    let before = patterns.len();
    let kept: Vec<T> = patterns
        .into_iter()
        .filter(|p| exempt(p) || !is_signature_only(graph_of(p), v))
        .collect();
    let pruned = before - kept.len();
    (kept, pruned)
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
                {"name": "fly-in", "arity": 3, "signature": ["Human", "Vehicle", "Location"]},
                {"name": "near", "arity": 2, "signature": ["Thing", "Thing"]}
            ],
            "individuals": [{"marker": "F-DZUX", "type": "Plane"}]
        }"#,
        )
        .unwrap()
    }

    fn flight(vehicle: &str) -> ConceptualGraph {
        let mut g = ConceptualGraph::new("p");
        g.concepts = vec![
            Concept::new("c0", "Human"),
            Concept::new("c1", vehicle),
            Concept::new("c2", "Location"),
        ];
        g.relations = vec![Relation::new("r0", "fly-in", ["c0", "c1", "c2"])];
        g
    }

    #[test]
    fn signature_only_detection() {
        let v = vocab();
        assert!(is_signature_only(&flight("Vehicle"), &v));
        assert!(!is_signature_only(&flight("Plane"), &v));
        assert!(is_signature_only(&ConceptualGraph::new("empty"), &v));
        let mut marked = flight("Vehicle");
        marked.concepts[1].marker = Some("F-DZUX".into());
        assert!(!is_signature_only(&marked, &v));
    }

    #[test]
    fn compress_replaces_reducible_relation() {
        let v = vocab();
        let mut g = flight("Vehicle");
        g.concepts.push(Concept::new("c3", "Plane"));
        g.relations.push(Relation::new("r1", "near", ["c2", "c3"]));
        let c = compress(&g, &v);
        assert!(
            matches!(&c.relations[0], PatternRelation::Reference(s) if s.to_string() == "S_fly-in")
        );
        assert!(matches!(&c.relations[1], PatternRelation::Relation(_)));
        let ids: Vec<_> = c.concepts.iter().map(|c| c.id.as_str()).collect();
        assert_eq!(ids, ["c2", "c3"]);
        assert_eq!(decompress(&c, &v).unwrap(), g);
        let json = serde_json::to_string(&c).unwrap();
        assert_eq!(serde_json::from_str::<CompressedPattern>(&json).unwrap(), c);
    }

    #[test]
    fn compress_without_reducible_relation_is_verbatim() {
        let v = vocab();
        let g = flight("Plane");
        assert_eq!(compress(&g, &v), CompressedPattern::verbatim(&g));
    }

    #[test]
    fn prune_counts() {
        let v = vocab();
        let mut patterns: Vec<ConceptualGraph> = (0..38).map(|_| flight("Vehicle")).collect();
        patterns.extend((0..62).map(|_| flight("Plane")));
        let (kept, pruned) = prune(patterns, &v, |g| g, |_| false);
        assert_eq!((kept.len(), pruned), (62, 38));
        let (kept, pruned) = prune(Vec::<ConceptualGraph>::new(), &v, |g| g, |_| false);
        assert_eq!((kept.len(), pruned), (0, 0));
        let all: Vec<_> = (0..5).map(|_| flight("Vehicle")).collect();
        let (kept, pruned) = prune(all, &v, |g| g, |_| true);
        assert_eq!((kept.len(), pruned), (5, 0));
    }
}
