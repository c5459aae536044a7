//! Structural phase: gSpan over root-generalized labels.
//!
//! Candidates grow from injective embeddings by rightmost-path extension and
//! are kept only in minimum-code form. Support is counted with the configured
//! matching semantics, restricted to the graphs supporting the parent.

use std::collections::{BTreeMap, HashSet};

use rayon::prelude::*;

use super::dfs::{min_dfs_code, DfsCode, DfsTuple};
use super::matcher::Matcher;
use crate::tlg::{EdgeLabel, NodeLabel, PatternGraph, TargetGraph};

/// A frequent pattern of the structural phase.
#[derive(Debug, Clone)]
pub struct Structural {
    pub code: DfsCode,
    /// Vertices in discovery order, labelled with path roots.
    pub graph: PatternGraph,
    /// Indices of supporting database graphs, ascending.
    pub supporters: Vec<u32>,
}

#[derive(Debug, Clone)]
struct Embedding {
    graph: u32,
    nodes: Vec<u32>,
    edges: Vec<u32>,
}

#[derive(Debug, Clone, Copy)]
pub struct StructuralConfig {
    pub minsup: usize,
    /// Cap on relation-bearing vertices.
    pub max_size: Option<usize>,
    pub injective: bool,
}

/// Vertex label, sorted incident (neighbor, edge label) list, vertex.
type TwinKey<'a> = (&'a NodeLabel, Vec<(usize, EdgeLabel)>, usize);

/// Interchangeable vertices of a target graph: equal root labels and
/// identical incident edges. Embeddings that differ only by permuting such
/// vertices extend identically, so one per orbit is kept.
struct Twins {
    class: Vec<u32>,
    members: Vec<Vec<u32>>,
}

impl Twins {
    fn new(g: &TargetGraph) -> Self {
        let mut keys: Vec<TwinKey> = (0..g.node_count())
            .map(|v| {
                let mut incident: Vec<(usize, EdgeLabel)> =
                    g.adj[v].iter().map(|a| (a.node, a.label)).collect();
                incident.sort_unstable();
                (&g.roots[v], incident, v)
            })
            .collect();
        keys.sort();
        let mut class = vec![0; g.node_count()];
        let mut members: Vec<Vec<u32>> = Vec::new();
        for (k, (label, incident, v)) in keys.iter().enumerate() {
            if k == 0 || (label, incident) != (&keys[k - 1].0, &keys[k - 1].1) {
                members.push(Vec::new());
            }
            class[*v] = (members.len() - 1) as u32;
            members.last_mut().expect("pushed").push(*v as u32);
        }
        Twins { class, members }
    }

    fn is_trivial(&self) -> bool {
        self.members.len() == self.class.len()
    }

    /// Node images with each class filled in increasing vertex order.
    fn normal_form(&self, nodes: &[u32]) -> Vec<u32> {
        let mut taken: Vec<(u32, usize)> = Vec::new();
        nodes
            .iter()
            .map(|&v| {
                let c = self.class[v as usize];
                let members = &self.members[c as usize];
                if members.len() == 1 {
                    return v;
                }
                let k = match taken.iter_mut().find(|(x, _)| *x == c) {
                    Some((_, k)) => {
                        *k += 1;
                        *k
                    }
                    None => {
                        taken.push((c, 0));
                        0
                    }
                };
                members[k]
            })
            .collect()
    }
}

/// Drops embeddings equivalent to an earlier one under target twin swaps.
fn dedup_embeddings(embeddings: Vec<Embedding>, twins: &[Twins]) -> Vec<Embedding> {
    let mut seen = HashSet::new();
    embeddings
        .into_iter()
        .filter(|e| {
            let t = &twins[e.graph as usize];
            t.is_trivial() || seen.insert((e.graph, t.normal_form(&e.nodes)))
        })
        .collect()
}

pub fn mine_structural(db: &[TargetGraph], cfg: StructuralConfig) -> Vec<Structural> {
    let twins: Vec<Twins> = db.par_iter().map(Twins::new).collect();
    let mut by_label: BTreeMap<&NodeLabel, Vec<Embedding>> = BTreeMap::new();
    for (gi, g) in db.iter().enumerate() {
        for (v, root) in g.roots.iter().enumerate() {
            if cfg.max_size == Some(0) && root.kind.is_relational() {
                continue;
            }
            by_label.entry(root).or_default().push(Embedding {
                graph: gi as u32,
                nodes: vec![v as u32],
                edges: Vec::new(),
            });
        }
    }
    let roots: Vec<_> = by_label.into_iter().collect();
    roots
        .into_par_iter()
        .flat_map_iter(|(label, embeddings)| {
            let mut supporters: Vec<u32> = embeddings.iter().map(|e| e.graph).collect();
            supporters.dedup();
            let mut out = Vec::new();
            if supporters.len() >= cfg.minsup {
                let graph = PatternGraph::single(label.clone());
                out.push(Structural {
                    code: min_dfs_code(&graph).expect("single vertex"),
                    graph,
                    supporters: supporters.clone(),
                });
                let embeddings = dedup_embeddings(embeddings, &twins);
                out.extend(grow(
                    db,
                    &twins,
                    cfg,
                    &[],
                    std::slice::from_ref(label),
                    &embeddings,
                    &supporters,
                ));
            }
            out
        })
        .collect()
}

fn rightmost_path(code: &[DfsTuple]) -> Vec<usize> {
    if code.is_empty() {
        return vec![0];
    }
    DfsCode(code.to_vec())
        .rightmost_path()
        .into_iter()
        .map(usize::from)
        .collect()
}

fn grow(
    db: &[TargetGraph],
    twins: &[Twins],
    cfg: StructuralConfig,
    code: &[DfsTuple],
    labels: &[NodeLabel],
    embeddings: &[Embedding],
    supporters: &[u32],
) -> Vec<Structural> {
    let rmpath = rightmost_path(code);
    let rm = *rmpath.last().expect("non-empty");
    let size = labels.iter().filter(|l| l.kind.is_relational()).count();
    let full = cfg.max_size.is_some_and(|m| size >= m);
    let next = labels.len() as u16;

    // Keyed by (i, j, edge, target label) without cloning labels per embedding.
    let mut extensions: BTreeMap<(u16, u16, EdgeLabel, &NodeLabel), Vec<Embedding>> =
        BTreeMap::new();
    for emb in embeddings {
        let g = &db[emb.graph as usize];
        let image = emb.nodes[rm] as usize;
        for adj in &g.adj[image] {
            if emb.edges.contains(&(adj.edge as u32)) {
                continue;
            }
            let Some(j) = emb.nodes.iter().position(|&n| n as usize == adj.node) else {
                continue;
            };
            if j == rm || !rmpath.contains(&j) {
                continue;
            }
            let mut child = emb.clone();
            child.edges.push(adj.edge as u32);
            extensions
                .entry((rm as u16, j as u16, adj.label, &labels[j]))
                .or_default()
                .push(child);
        }
        for &i in &rmpath {
            let from = emb.nodes[i] as usize;
            for adj in &g.adj[from] {
                if emb.nodes.contains(&(adj.node as u32)) {
                    continue;
                }
                let to = &g.roots[adj.node];
                if full && to.kind.is_relational() {
                    continue;
                }
                let mut child = emb.clone();
                child.nodes.push(adj.node as u32);
                child.edges.push(adj.edge as u32);
                extensions
                    .entry((i as u16, next, adj.label, to))
                    .or_default()
                    .push(child);
            }
        }
    }

    let mut candidates: Vec<(DfsTuple, Vec<Embedding>)> = extensions
        .into_iter()
        .map(|((i, j, edge, to), embs)| {
            let tuple = DfsTuple {
                i,
                j,
                from_label: labels[i as usize].clone(),
                edge: Some(edge),
                to_label: Some(to.clone()),
            };
            (tuple, embs)
        })
        .collect();
    candidates.sort_by(|a, b| a.0.cmp(&b.0));
    candidates
        .into_par_iter()
        .flat_map_iter(|(tuple, child_embeddings)| {
            let mut child_code = code.to_vec();
            child_code.push(tuple.clone());
            let child_code = DfsCode(child_code);
            let graph = child_code.to_graph();
            if min_dfs_code(&graph).ok().as_ref() != Some(&child_code) {
                return Vec::new();
            }
            let mut occurring: Vec<u32> = child_embeddings.iter().map(|e| e.graph).collect();
            occurring.dedup();
            let supporters_child = if cfg.injective {
                occurring
            } else {
                let matcher = Matcher::new(&graph, false);
                supporters
                    .iter()
                    .copied()
                    .filter(|g| {
                        occurring.binary_search(g).is_ok() || matcher.exists(&db[*g as usize])
                    })
                    .collect()
            };
            if supporters_child.len() < cfg.minsup {
                return Vec::new();
            }
            let mut child_labels = labels.to_vec();
            if tuple.is_forward() {
                child_labels.push(tuple.to_label.clone().expect("edge tuple"));
            }
            let child_embeddings = dedup_embeddings(child_embeddings, twins);
            let mut out = grow(
                db,
                twins,
                cfg,
                &child_code.0,
                &child_labels,
                &child_embeddings,
                &supporters_child,
            );
            out.insert(
                0,
                Structural {
                    code: child_code,
                    graph,
                    supporters: supporters_child,
                },
            );
            out
        })
        .collect()
}
