//! Taxonomy-labelled graphs (TLGs) as seen by the miner.
//!
//! Database graphs carry [`FullLabel`]s: for every label component the
//! complete taxonomy path. Patterns carry [`NodeLabel`]s whose components are
//! path prefixes, each either *open* (matches any path extending the prefix)
//! or *closed* (matches that exact path).

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use crate::vocab::Vocabulary;

/// Interned type or marker name. Symbol order equals name order.
pub type Sym = u32;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum SymbolKind {
    Concept,
    Relation,
    Marker,
}

/// Name table shared by every graph translated against one vocabulary.
#[derive(Debug)]
pub struct Symbols {
    names: Vec<String>,
    kinds: Vec<SymbolKind>,
    index: HashMap<String, Sym>,
}

impl Symbols {
    pub fn new(v: &Vocabulary) -> Arc<Self> {
        let mut entries: Vec<(String, SymbolKind)> = v
            .concept_types()
            .map(|c| (c.to_string(), SymbolKind::Concept))
            .chain(
                v.relation_types()
                    .map(|r| (r.name.clone(), SymbolKind::Relation)),
            )
            .chain(
                v.individuals()
                    .map(|i| (i.marker.clone(), SymbolKind::Marker)),
            )
            .collect();
        entries.sort();
        entries.dedup_by(|a, b| a.0 == b.0);
        let index = entries
            .iter()
            .enumerate()
            .map(|(i, (n, _))| (n.clone(), i as Sym))
            .collect();
        let (names, kinds) = entries.into_iter().unzip();
        Arc::new(Symbols {
            names,
            kinds,
            index,
        })
    }

    pub fn get(&self, name: &str) -> Option<Sym> {
        self.index.get(name).copied()
    }

    pub fn name(&self, sym: Sym) -> &str {
        &self.names[sym as usize]
    }

    pub fn kind(&self, sym: Sym) -> SymbolKind {
        self.kinds[sym as usize]
    }

    pub fn path_string(&self, path: &[Sym]) -> String {
        path.iter()
            .map(|&s| self.name(s))
            .collect::<Vec<_>>()
            .join("_")
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum NodeKind {
    /// A relation bundled with its arguments; component 0 is the relation.
    Brick,
    Relation,
    Concept,
}

impl NodeKind {
    /// Relation-bearing nodes count towards pattern size.
    pub fn is_relational(self) -> bool {
        matches!(self, NodeKind::Brick | NodeKind::Relation)
    }

    fn tag(self) -> char {
        match self {
            NodeKind::Brick => 'B',
            NodeKind::Relation => 'R',
            NodeKind::Concept => 'C',
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FullLabel {
    pub kind: NodeKind,
    pub parts: Vec<Vec<Sym>>,
}

impl FullLabel {
    pub fn max_len(&self) -> usize {
        self.parts.iter().map(Vec::len).max().unwrap_or(0)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Part {
    pub path: Vec<Sym>,
    pub open: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct NodeLabel {
    pub kind: NodeKind,
    pub parts: Vec<Part>,
}

impl NodeLabel {
    /// Generalization of `full` that keeps `depth` segments of every
    /// component. Components no longer than `depth - 1` become closed.
    pub fn at_depth(full: &FullLabel, depth: usize) -> Self {
        NodeLabel {
            kind: full.kind,
            parts: full
                .parts
                .iter()
                .map(|p| Part {
                    path: p[..depth.min(p.len())].to_vec(),
                    open: p.len() >= depth,
                })
                .collect(),
        }
    }

    pub fn root(full: &FullLabel) -> Self {
        Self::at_depth(full, 1)
    }

    /// Every component an open prefix equal to the full path.
    pub fn open_prefix(full: &FullLabel) -> Self {
        NodeLabel {
            kind: full.kind,
            parts: full
                .parts
                .iter()
                .map(|p| Part {
                    path: p.clone(),
                    open: true,
                })
                .collect(),
        }
    }

    /// Current specialization depth, `None` when every component is closed.
    pub fn depth(&self) -> Option<usize> {
        self.parts
            .iter()
            .filter(|p| p.open)
            .map(|p| p.path.len())
            .max()
    }

    pub fn matches(&self, target: &FullLabel) -> bool {
        self.kind == target.kind
            && self.parts.len() == target.parts.len()
            && self.parts.iter().zip(&target.parts).all(|(p, t)| {
                if p.open {
                    t.starts_with(&p.path)
                } else {
                    *t == p.path
                }
            })
    }

    /// `true` iff everything matched by `other` is matched by `self`.
    pub fn subsumes(&self, other: &NodeLabel) -> bool {
        self.kind == other.kind
            && self.parts.len() == other.parts.len()
            && self.parts.iter().zip(&other.parts).all(|(a, b)| {
                if a.open {
                    b.path.starts_with(&a.path)
                } else {
                    !b.open && a.path == b.path
                }
            })
    }

    pub fn display<'a>(&'a self, symbols: &'a Symbols) -> impl fmt::Display + 'a {
        LabelDisplay {
            label: self,
            symbols,
        }
    }
}

struct LabelDisplay<'a> {
    label: &'a NodeLabel,
    symbols: &'a Symbols,
}

impl fmt::Display for LabelDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}[", self.label.kind.tag())?;
        for (i, p) in self.label.parts.iter().enumerate() {
            if i > 0 {
                write!(f, ";")?;
            }
            write!(f, "{}", self.symbols.path_string(&p.path))?;
            if !p.open {
                write!(f, "!")?;
            }
        }
        write!(f, "]")
    }
}

/// Edge label seen from one endpoint: argument position at this endpoint and
/// at the other. Concept endpoints in raw graphs use position 0.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct EdgeLabel {
    pub here: u16,
    pub there: u16,
}

impl EdgeLabel {
    pub fn new(here: u16, there: u16) -> Self {
        EdgeLabel { here, there }
    }

    pub fn reversed(self) -> Self {
        EdgeLabel {
            here: self.there,
            there: self.here,
        }
    }
}

impl fmt::Display for EdgeLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}-{}", self.here, self.there)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Adjacent {
    pub node: usize,
    pub label: EdgeLabel,
    pub edge: usize,
}

/// A translated database graph.
#[derive(Debug, Clone)]
pub struct TargetGraph {
    pub id: String,
    pub labels: Vec<FullLabel>,
    pub roots: Vec<NodeLabel>,
    pub adj: Vec<Vec<Adjacent>>,
    pub edge_count: usize,
}

impl TargetGraph {
    pub fn new(id: impl Into<String>, labels: Vec<FullLabel>) -> Self {
        let n = labels.len();
        TargetGraph {
            id: id.into(),
            roots: labels.iter().map(NodeLabel::root).collect(),
            labels,
            adj: vec![Vec::new(); n],
            edge_count: 0,
        }
    }

    /// Adds an undirected edge; `label` is read from `a`'s side.
    pub fn add_edge(&mut self, a: usize, b: usize, label: EdgeLabel) {
        let edge = self.edge_count;
        self.edge_count += 1;
        self.adj[a].push(Adjacent {
            node: b,
            label,
            edge,
        });
        self.adj[b].push(Adjacent {
            node: a,
            label: label.reversed(),
            edge,
        });
    }

    pub fn node_count(&self) -> usize {
        self.labels.len()
    }

    pub fn has_edge(&self, a: usize, b: usize, label: EdgeLabel) -> bool {
        self.adj[a].iter().any(|x| x.node == b && x.label == label)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PatternEdge {
    pub a: usize,
    pub b: usize,
    /// Read from `a`'s side.
    pub label: EdgeLabel,
}

/// A mined (or candidate) pattern over TLG labels.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct PatternGraph {
    pub nodes: Vec<NodeLabel>,
    pub edges: Vec<PatternEdge>,
}

impl PatternGraph {
    pub fn single(label: NodeLabel) -> Self {
        PatternGraph {
            nodes: vec![label],
            edges: Vec::new(),
        }
    }

    /// Number of relation-bearing nodes.
    pub fn size(&self) -> usize {
        self.nodes.iter().filter(|n| n.kind.is_relational()).count()
    }

    pub fn adjacency(&self) -> Vec<Vec<(usize, EdgeLabel, usize)>> {
        let mut adj = vec![Vec::new(); self.nodes.len()];
        for (i, e) in self.edges.iter().enumerate() {
            adj[e.a].push((e.b, e.label, i));
            adj[e.b].push((e.a, e.label.reversed(), i));
        }
        adj
    }

    pub fn is_connected(&self) -> bool {
        if self.nodes.is_empty() {
            return true;
        }
        let adj = self.adjacency();
        let mut seen = vec![false; self.nodes.len()];
        let mut stack = vec![0];
        seen[0] = true;
        while let Some(u) = stack.pop() {
            for &(w, _, _) in &adj[u] {
                if !seen[w] {
                    seen[w] = true;
                    stack.push(w);
                }
            }
        }
        seen.into_iter().all(|s| s)
    }

    /// Copy with nodes renumbered so that old node `i` becomes `perm[i]`.
    pub fn permuted(&self, perm: &[usize]) -> Self {
        let mut nodes = vec![None; self.nodes.len()];
        for (i, l) in self.nodes.iter().enumerate() {
            nodes[perm[i]] = Some(l.clone());
        }
        PatternGraph {
            nodes: nodes
                .into_iter()
                .map(|n| n.expect("perm is a bijection"))
                .collect(),
            edges: self
                .edges
                .iter()
                .map(|e| PatternEdge {
                    a: perm[e.a],
                    b: perm[e.b],
                    label: e.label,
                })
                .collect(),
        }
    }
}
