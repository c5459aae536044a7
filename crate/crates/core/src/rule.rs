//! λ-rules: ordered hypothesis/conclusion pairs of λ-CGs linked through
//! connection variables.

use std::collections::{HashMap, HashSet};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{projections, validate_inner, ConceptualGraph, Projection, ProjectionOptions};
use crate::vocab::Vocabulary;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Connection {
    pub var: String,
    pub hyp: String,
    pub concl: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LambdaRule {
    pub name: String,
    pub hypothesis: ConceptualGraph,
    pub conclusion: ConceptualGraph,
    pub connections: Vec<Connection>,
}

/// How a rule acts on a graph it applies to. A rule can be both.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct RuleKind {
    pub specialization: bool,
    pub extension: bool,
}

/// Conclusion-side elements that do not correspond to the hypothesis.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ConclusionExtra {
    /// Indices into `conclusion.concepts`.
    pub concepts: Vec<usize>,
    /// Indices into `conclusion.relations`.
    pub relations: Vec<usize>,
}

impl LambdaRule {
    /// Checks connection consistency and that both sides are well-formed.
    pub fn validate(&self, v: &Vocabulary) -> Result<()> {
        let err = |message: String| Error::Rule {
            rule: self.name.clone(),
            message,
        };
        for side in [&self.hypothesis, &self.conclusion] {
            if let Some(violation) = validate_inner(side, v, true).into_iter().next() {
                return Err(err(violation.to_string()));
            }
        }
        let mut vars = HashSet::new();
        for c in &self.connections {
            if !vars.insert(c.var.as_str()) {
                return Err(err(format!(
                    "variable `{}` connects more than one pair",
                    c.var
                )));
            }
            for (side, id) in [(&self.hypothesis, &c.hyp), (&self.conclusion, &c.concl)] {
                let node = side.concept(id).ok_or_else(|| {
                    err(format!(
                        "connection `{}` names unknown concept `{id}`",
                        c.var
                    ))
                })?;
                if let Some(var) = &node.var {
                    if var != &c.var {
                        return Err(err(format!(
                            "concept `{id}` carries variable `{var}` but connection says `{}`",
                            c.var
                        )));
                    }
                }
            }
        }
        for side in [&self.hypothesis, &self.conclusion] {
            let mut seen = HashSet::new();
            for node in &side.concepts {
                if let Some(var) = &node.var {
                    if !vars.contains(var.as_str()) {
                        return Err(err(format!("variable `{var}` has no connection")));
                    }
                    if !seen.insert(var.as_str()) {
                        return Err(err(format!("variable `{var}` occurs twice on one side")));
                    }
                }
            }
        }
        for c in &self.connections {
            let h = self.hypothesis.concept(&c.hyp).expect("checked");
            let k = self.conclusion.concept(&c.concl).expect("checked");
            if !v.generalizes(&h.concept_type, &k.concept_type) {
                return Err(err(format!(
                    "conclusion type `{}` of `{}` does not specialize hypothesis type `{}`",
                    k.concept_type, c.var, h.concept_type
                )));
            }
        }
        Ok(())
    }

    /// Maps hypothesis concept ids to conclusion concept ids.
    pub fn hyp_to_concl(&self) -> HashMap<&str, &str> {
        self.connections
            .iter()
            .map(|c| (c.hyp.as_str(), c.concl.as_str()))
            .collect()
    }

    /// Connection pairs whose conclusion type strictly specializes the hypothesis type.
    pub fn specialized_connections(&self) -> Vec<&Connection> {
        self.connections
            .iter()
            .filter(|c| {
                let h = self.hypothesis.concept(&c.hyp).map(|n| &n.concept_type);
                let k = self.conclusion.concept(&c.concl).map(|n| &n.concept_type);
                h.is_some() && h != k
            })
            .collect()
    }

    /// The hypothesis laid onto the conclusion: an injective projection that
    /// respects the connections.
    pub fn overlay(&self, v: &Vocabulary) -> Option<Projection> {
        let pinned = self.pinned();
        let opts = ProjectionOptions {
            injective: true,
            ..Default::default()
        };
        projections(&self.hypothesis, &self.conclusion, v, opts)
            .into_iter()
            .find(|p| pinned.iter().all(|&(h, c)| p.concepts[h] == c))
    }

    fn pinned(&self) -> Vec<(usize, usize)> {
        let hyp_index = self.hypothesis.concept_index();
        let concl_index = self.conclusion.concept_index();
        self.connections
            .iter()
            .filter_map(|c| {
                Some((
                    *hyp_index.get(c.hyp.as_str())?,
                    *concl_index.get(c.concl.as_str())?,
                ))
            })
            .collect()
    }

    /// Conclusion concepts and relations that carry over no hypothesis
    /// element under [`LambdaRule::overlay`].
    pub fn conclusion_extra(&self, v: &Vocabulary) -> ConclusionExtra {
        let (concepts_hit, relations_hit) = match self.overlay(v) {
            Some(p) => (p.concepts, p.relations),
            None => (
                self.pinned().into_iter().map(|(_, c)| c).collect(),
                Vec::new(),
            ),
        };
        ConclusionExtra {
            concepts: (0..self.conclusion.concepts.len())
                .filter(|i| !concepts_hit.contains(i))
                .collect(),
            relations: (0..self.conclusion.relations.len())
                .filter(|i| !relations_hit.contains(i))
                .collect(),
        }
    }

    pub fn kind(&self, v: &Vocabulary) -> RuleKind {
        let extra = self.conclusion_extra(v);
        RuleKind {
            specialization: !self.specialized_connections().is_empty(),
            extension: !extra.concepts.is_empty() || !extra.relations.is_empty(),
        }
    }
}

pub fn parse_rule(text: &str) -> Result<LambdaRule> {
    Ok(serde_json::from_str(text)?)
}

/// Parses either a single rule object or a list of rules.
pub fn parse_rules(text: &str) -> Result<Vec<LambdaRule>> {
    #[derive(Deserialize)]
    #[serde(untagged)]
    enum OneOrMany {
        Many(Vec<LambdaRule>),
        One(Box<LambdaRule>),
    }
    match serde_json::from_str::<OneOrMany>(text) {
        Ok(OneOrMany::Many(r)) => Ok(r),
        Ok(OneOrMany::One(r)) => Ok(vec![*r]),
        Err(_) => {
            // Re-parse strictly to surface a positioned error.
            let value: serde_json::Value = serde_json::from_str(text)?;
            if value.is_array() {
                Ok(serde_json::from_value::<Vec<LambdaRule>>(value)?)
            } else {
                Ok(vec![serde_json::from_str::<LambdaRule>(text)?])
            }
        }
    }
}

pub fn serialize_rules(rules: &[LambdaRule]) -> String {
    serde_json::to_string_pretty(rules).expect("rules serialize")
}
