//! The ontological part of a conceptual graph: concept and relation type
//! hierarchies, relation signatures and individual markers.
//!
//! Hierarchies are trees. Every concept type reaches the unique top type by
//! following parents; relation types may have a parent of the same arity,
//! with roots acting as the most general relation of their arity.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConceptTypeDecl {
    pub name: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub parent: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RelationTypeDecl {
    pub name: String,
    pub arity: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub parent: Option<String>,
    pub signature: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct IndividualDecl {
    pub marker: String,
    #[serde(rename = "type")]
    pub concept_type: String,
}

/// On-disk shape of a vocabulary document.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VocabularyFile {
    pub concept_types: Vec<ConceptTypeDecl>,
    #[serde(default)]
    pub relation_types: Vec<RelationTypeDecl>,
    #[serde(default)]
    pub individuals: Vec<IndividualDecl>,
}

/// Which hierarchy a type name belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum TypeKind {
    Concept,
    Relation,
}

#[derive(Debug, Clone)]
struct Hierarchy {
    names: Vec<String>,
    index: HashMap<String, usize>,
    parent: Vec<Option<usize>>,
    depth: Vec<usize>,
}

impl Hierarchy {
    fn build(kind: &'static str, entries: &[(String, Option<String>)]) -> Result<Self> {
        let mut index = HashMap::with_capacity(entries.len());
        for (i, (name, _)) in entries.iter().enumerate() {
            if index.insert(name.clone(), i).is_some() {
                return Err(Error::Duplicate(name.clone()));
            }
        }
        let mut parent = Vec::with_capacity(entries.len());
        for (_, p) in entries {
            match p {
                None => parent.push(None),
                Some(p) => match index.get(p) {
                    Some(&pi) => parent.push(Some(pi)),
                    None => {
                        return Err(Error::UnknownType {
                            kind,
                            name: p.clone(),
                        })
                    }
                },
            }
        }
        let n = entries.len();
        let mut depth = vec![usize::MAX; n];
        for start in 0..n {
            let mut chain = Vec::new();
            let mut cur = start;
            loop {
                if depth[cur] != usize::MAX {
                    break;
                }
                if chain.contains(&cur) {
                    return Err(Error::Cycle {
                        kind,
                        name: entries[cur].0.clone(),
                    });
                }
                chain.push(cur);
                match parent[cur] {
                    Some(p) => cur = p,
                    None => {
                        depth[cur] = 0;
                        chain.pop();
                        break;
                    }
                }
            }
            while let Some(node) = chain.pop() {
                depth[node] = depth[parent[node].expect("non-root has a parent")] + 1;
            }
        }
        Ok(Hierarchy {
            names: entries.iter().map(|(n, _)| n.clone()).collect(),
            index,
            parent,
            depth,
        })
    }

    fn chain(&self, mut node: usize) -> Vec<usize> {
        let mut out = vec![node];
        while let Some(p) = self.parent[node] {
            out.push(p);
            node = p;
        }
        out.reverse();
        out
    }

    fn is_ancestor_or_self(&self, a: usize, mut b: usize) -> bool {
        loop {
            if a == b {
                return true;
            }
            match self.parent[b] {
                Some(p) => b = p,
                None => return false,
            }
        }
    }
}

/// A validated vocabulary.
#[derive(Debug, Clone)]
pub struct Vocabulary {
    decl: VocabularyFile,
    concepts: Hierarchy,
    relations: Hierarchy,
    top: usize,
    individuals: HashMap<String, String>,
}

impl PartialEq for Vocabulary {
    fn eq(&self, other: &Self) -> bool {
        self.decl == other.decl
    }
}

impl Eq for Vocabulary {}

impl Vocabulary {
    pub fn from_file(decl: VocabularyFile) -> Result<Self> {
        let concept_entries: Vec<_> = decl
            .concept_types
            .iter()
            .map(|c| (c.name.clone(), c.parent.clone()))
            .collect();
        let concepts = Hierarchy::build("concept type", &concept_entries)?;

        let roots: Vec<usize> = (0..concepts.names.len())
            .filter(|&i| concepts.parent[i].is_none())
            .collect();
        let top = match roots.as_slice() {
            [] => return Err(Error::MissingTop),
            [t] => *t,
            many => {
                return Err(Error::MultipleTops(
                    many.iter().map(|&i| concepts.names[i].clone()).collect(),
                ))
            }
        };

        let relation_entries: Vec<_> = decl
            .relation_types
            .iter()
            .map(|r| (r.name.clone(), r.parent.clone()))
            .collect();
        let relations = Hierarchy::build("relation type", &relation_entries)?;

        for name in &relations.names {
            if concepts.index.contains_key(name) {
                return Err(Error::Duplicate(name.clone()));
            }
        }

        for r in &decl.relation_types {
            if r.arity == 0 {
                return Err(Error::ZeroArity(r.name.clone()));
            }
            if r.signature.len() != r.arity {
                return Err(Error::SignatureArity {
                    relation: r.name.clone(),
                    arity: r.arity,
                    found: r.signature.len(),
                });
            }
            for t in &r.signature {
                if !concepts.index.contains_key(t) {
                    return Err(Error::UnknownType {
                        kind: "concept type",
                        name: t.clone(),
                    });
                }
            }
        }
        for (i, r) in decl.relation_types.iter().enumerate() {
            if let Some(p) = relations.parent[i] {
                let parent = &decl.relation_types[p];
                if parent.arity != r.arity {
                    return Err(Error::ParentArity {
                        relation: r.name.clone(),
                        arity: r.arity,
                        parent: parent.name.clone(),
                        parent_arity: parent.arity,
                    });
                }
                for (pos, (c, pc)) in r.signature.iter().zip(&parent.signature).enumerate() {
                    if !concepts.is_ancestor_or_self(concepts.index[pc], concepts.index[c]) {
                        return Err(Error::SignatureNotBelowParent {
                            relation: r.name.clone(),
                            position: pos + 1,
                            child: c.clone(),
                            parent: pc.clone(),
                        });
                    }
                }
            }
        }

        let mut individuals = HashMap::new();
        for ind in &decl.individuals {
            if !concepts.index.contains_key(&ind.concept_type) {
                return Err(Error::UnknownType {
                    kind: "concept type",
                    name: ind.concept_type.clone(),
                });
            }
            if individuals
                .insert(ind.marker.clone(), ind.concept_type.clone())
                .is_some()
            {
                return Err(Error::Duplicate(ind.marker.clone()));
            }
        }

        Ok(Vocabulary {
            decl,
            concepts,
            relations,
            top,
            individuals,
        })
    }

    pub fn declaration(&self) -> &VocabularyFile {
        &self.decl
    }

    pub fn top(&self) -> &str {
        &self.concepts.names[self.top]
    }

    pub fn concept_types(&self) -> impl Iterator<Item = &str> {
        self.concepts.names.iter().map(String::as_str)
    }

    pub fn relation_types(&self) -> impl Iterator<Item = &RelationTypeDecl> {
        self.decl.relation_types.iter()
    }

    pub fn individuals(&self) -> impl Iterator<Item = &IndividualDecl> {
        self.decl.individuals.iter()
    }

    pub fn has_concept(&self, name: &str) -> bool {
        self.concepts.index.contains_key(name)
    }

    pub fn relation(&self, name: &str) -> Option<&RelationTypeDecl> {
        self.relations
            .index
            .get(name)
            .map(|&i| &self.decl.relation_types[i])
    }

    pub fn kind_of(&self, name: &str) -> Option<TypeKind> {
        if self.concepts.index.contains_key(name) {
            Some(TypeKind::Concept)
        } else if self.relations.index.contains_key(name) {
            Some(TypeKind::Relation)
        } else {
            None
        }
    }

    /// Concept type of an individual marker (τ).
    pub fn marker_type(&self, marker: &str) -> Option<&str> {
        self.individuals.get(marker).map(String::as_str)
    }

    pub fn concept_parent(&self, name: &str) -> Option<&str> {
        let i = *self.concepts.index.get(name)?;
        self.concepts.parent[i].map(|p| self.concepts.names[p].as_str())
    }

    pub fn concept_children(&self, name: &str) -> Vec<&str> {
        let Some(&i) = self.concepts.index.get(name) else {
            return Vec::new();
        };
        (0..self.concepts.names.len())
            .filter(|&c| self.concepts.parent[c] == Some(i))
            .map(|c| self.concepts.names[c].as_str())
            .collect()
    }

    /// Strict and non-strict descendants of a concept type, in declaration order.
    pub fn concept_descendants(&self, name: &str) -> Vec<&str> {
        let Some(&i) = self.concepts.index.get(name) else {
            return Vec::new();
        };
        (0..self.concepts.names.len())
            .filter(|&c| self.concepts.is_ancestor_or_self(i, c))
            .map(|c| self.concepts.names[c].as_str())
            .collect()
    }

    pub fn concept_depth(&self, name: &str) -> Option<usize> {
        self.concepts
            .index
            .get(name)
            .map(|&i| self.concepts.depth[i])
    }

    /// Chain of concept types from the top type down to `name`.
    pub fn concept_chain(&self, name: &str) -> Result<Vec<&str>> {
        let &i = self
            .concepts
            .index
            .get(name)
            .ok_or_else(|| unknown("concept type", name))?;
        Ok(self
            .concepts
            .chain(i)
            .into_iter()
            .map(|c| self.concepts.names[c].as_str())
            .collect())
    }

    /// Chain of relation types from the root of `name`'s hierarchy down to it.
    pub fn relation_chain(&self, name: &str) -> Result<Vec<&str>> {
        let &i = self
            .relations
            .index
            .get(name)
            .ok_or_else(|| unknown("relation type", name))?;
        Ok(self
            .relations
            .chain(i)
            .into_iter()
            .map(|c| self.relations.names[c].as_str())
            .collect())
    }

    /// `true` iff `a` equals `b` or is one of its ancestors.
    pub fn is_generalization(&self, a: &str, b: &str) -> Result<bool> {
        match (self.kind_of(a), self.kind_of(b)) {
            (Some(TypeKind::Concept), Some(TypeKind::Concept)) => Ok(self
                .concepts
                .is_ancestor_or_self(self.concepts.index[a], self.concepts.index[b])),
            (Some(TypeKind::Relation), Some(TypeKind::Relation)) => Ok(self
                .relations
                .is_ancestor_or_self(self.relations.index[a], self.relations.index[b])),
            (None, _) => Err(unknown("type", a)),
            (_, None) => Err(unknown("type", b)),
            (Some(_), Some(_)) => Err(Error::Formalism(format!(
                "`{a}` and `{b}` belong to different hierarchies"
            ))),
        }
    }

    /// Same as [`is_generalization`](Self::is_generalization) but treats unknown names as unrelated.
    pub fn generalizes(&self, a: &str, b: &str) -> bool {
        self.is_generalization(a, b).unwrap_or(false)
    }

    /// Taxonomy path label: the top-to-`t` chain joined by `_`, with the
    /// marker, if any, as final segment.
    pub fn taxonomy_path(&self, t: &str, marker: Option<&str>) -> Result<String> {
        let mut segments = match self.kind_of(t) {
            Some(TypeKind::Concept) => self.concept_chain(t)?,
            Some(TypeKind::Relation) => self.relation_chain(t)?,
            None => return Err(unknown("type", t)),
        };
        if let Some(m) = marker {
            segments.push(m);
        }
        Ok(segments.join("_"))
    }
}

fn unknown(kind: &'static str, name: &str) -> Error {
    Error::UnknownType {
        kind,
        name: name.to_string(),
    }
}

pub fn parse_vocabulary(text: &str) -> Result<Vocabulary> {
    let decl: VocabularyFile = serde_json::from_str(text)?;
    Vocabulary::from_file(decl)
}

pub fn serialize_vocabulary(v: &Vocabulary) -> String {
    serde_json::to_string_pretty(&v.decl).expect("vocabulary serializes")
}

#[cfg(test)]
mod tests {
    use super::*;

    pub(crate) const FLY_IN: &str = r#"{
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
    }"#;

    #[test]
    fn parses_fly_in_vocabulary() {
        let v = parse_vocabulary(FLY_IN).unwrap();
        assert_eq!(v.top(), "Thing");
        assert_eq!(v.relation("fly-in").unwrap().arity, 3);
        assert_eq!(v.marker_type("F-DZUX"), Some("Plane"));
    }

    #[test]
    fn top_only_is_valid() {
        let v = parse_vocabulary(r#"{"concept_types": [{"name": "Thing"}]}"#).unwrap();
        assert_eq!(v.top(), "Thing");
        assert_eq!(v.relation_types().count(), 0);
    }

    #[test]
    fn cycle_is_rejected() {
        let err = parse_vocabulary(
            r#"{"concept_types": [{"name": "Thing"}, {"name": "A", "parent": "B"}, {"name": "B", "parent": "A"}]}"#,
        )
        .unwrap_err();
        assert!(matches!(err, Error::Cycle { .. }), "{err}");
    }

    #[test]
    fn structural_errors() {
        let missing_top =
            parse_vocabulary(r#"{"concept_types": [{"name": "A", "parent": "A"}]}"#).unwrap_err();
        assert!(matches!(
            missing_top,
            Error::Cycle { .. } | Error::MissingTop
        ));
        let two_tops =
            parse_vocabulary(r#"{"concept_types": [{"name": "A"}, {"name": "B"}]}"#).unwrap_err();
        assert!(matches!(two_tops, Error::MultipleTops(_)));
        let arity = parse_vocabulary(
            r#"{"concept_types": [{"name": "T"}], "relation_types": [{"name": "r", "arity": 2, "signature": ["T"]}]}"#,
        )
        .unwrap_err();
        assert!(matches!(arity, Error::SignatureArity { .. }));
        let unknown = parse_vocabulary(
            r#"{"concept_types": [{"name": "T"}], "relation_types": [{"name": "r", "arity": 1, "signature": ["X"]}]}"#,
        )
        .unwrap_err();
        assert!(matches!(unknown, Error::UnknownType { .. }));
        let extra =
            parse_vocabulary(r#"{"concept_types": [{"name": "T", "colour": 1}]}"#).unwrap_err();
        assert!(matches!(extra, Error::Syntax { .. }));
    }

    #[test]
    fn syntax_error_reports_position() {
        match parse_vocabulary("{\n  \"concept_types\": [\n   oops").unwrap_err() {
            Error::Syntax { line, .. } => assert_eq!(line, 3),
            other => panic!("unexpected {other}"),
        }
    }

    #[test]
    fn relation_parent_must_share_arity() {
        let err = parse_vocabulary(
            r#"{"concept_types": [{"name": "T"}], "relation_types": [
                {"name": "T2", "arity": 2, "signature": ["T", "T"]},
                {"name": "r", "arity": 1, "parent": "T2", "signature": ["T"]}]}"#,
        )
        .unwrap_err();
        assert!(matches!(err, Error::ParentArity { .. }));
    }

    #[test]
    fn generalization_examples() {
        let v = parse_vocabulary(FLY_IN).unwrap();
        assert!(v.is_generalization("Thing", "Plane").unwrap());
        assert!(v.is_generalization("Plane", "Plane").unwrap());
        assert!(!v.is_generalization("Plane", "Vehicle").unwrap());
        assert!(v.is_generalization("Nope", "Plane").is_err());
    }

    #[test]
    fn taxonomy_paths() {
        let v = parse_vocabulary(FLY_IN).unwrap();
        assert_eq!(
            v.taxonomy_path("Plane", Some("F-DZUX")).unwrap(),
            "Thing_Vehicle_Plane_F-DZUX"
        );
        assert_eq!(v.taxonomy_path("Thing", None).unwrap(), "Thing");
        assert_eq!(v.taxonomy_path("Human", None).unwrap(), "Thing_Human");
        assert!(v.taxonomy_path("Ghost", None).is_err());
    }

    #[test]
    fn round_trip() {
        let v = parse_vocabulary(FLY_IN).unwrap();
        let again = parse_vocabulary(&serialize_vocabulary(&v)).unwrap();
        assert_eq!(v, again);
    }
}
