//! Label phase: specialization of a structural pattern along taxonomy paths.
//!
//! A vertex label at depth `d` keeps `d` segments of every component; a step
//! advances one vertex to depth `d + 1` along a path observed in a
//! supporting graph. Only the frontier (frequent states without a frequent
//! one-step specialization) is returned.

use std::collections::{BTreeSet, HashMap, HashSet};

use super::dfs::{canonicalize, min_dfs_code, DfsCode};
use super::gspan::Structural;
use super::matcher::Matcher;
use crate::tlg::{FullLabel, NodeLabel, PatternGraph, TargetGraph};

/// A maximally specialized frequent pattern, in canonical vertex order.
#[derive(Debug, Clone)]
pub struct Specialized {
    pub code: DfsCode,
    pub graph: PatternGraph,
    pub supporters: Vec<u32>,
}

impl Specialized {
    pub fn support(&self) -> usize {
        self.supporters.len()
    }
}

/// Graphs among `candidates` admitting a mapping of `p`.
pub fn supporters_among(
    p: &PatternGraph,
    db: &[TargetGraph],
    candidates: &[u32],
    injective: bool,
) -> Vec<u32> {
    let matcher = Matcher::new(p, injective);
    candidates
        .iter()
        .copied()
        .filter(|&g| matcher.exists(&db[g as usize]))
        .collect()
}

/// Like [`supporters_among`], giving up as soon as `minsup` is out of reach.
fn frequent_supporters(
    p: &PatternGraph,
    db: &[TargetGraph],
    candidates: &[u32],
    minsup: usize,
    injective: bool,
) -> Option<Vec<u32>> {
    let matcher = Matcher::new(p, injective);
    let mut found = Vec::new();
    for (k, &g) in candidates.iter().enumerate() {
        if found.len() + (candidates.len() - k) < minsup {
            return None;
        }
        if matcher.exists(&db[g as usize]) {
            found.push(g);
        }
    }
    (found.len() >= minsup).then_some(found)
}

/// One-step specializations of `p` reachable in the given graphs.
pub fn one_step_children(
    p: &PatternGraph,
    db: &[TargetGraph],
    supporters: &[u32],
    injective: bool,
) -> Vec<PatternGraph> {
    let matcher = Matcher::new(p, injective);
    let mut labels: Vec<BTreeSet<NodeLabel>> = vec![BTreeSet::new(); p.nodes.len()];
    for &g in supporters {
        let target = &db[g as usize];
        let Some(values) = matcher.supported_values(target) else {
            continue;
        };
        for (u, vals) in values.iter().enumerate() {
            let Some(d) = p.nodes[u].depth() else {
                continue;
            };
            for &t in vals {
                labels[u].insert(NodeLabel::at_depth(&target.labels[t], d + 1));
            }
        }
    }
    let mut children = Vec::new();
    for (u, set) in labels.into_iter().enumerate() {
        for label in set {
            let mut child = p.clone();
            child.nodes[u] = label;
            children.push(child);
        }
    }
    children
}

/// Deepest relabeling of `p` with the same embeddings in `supporters`: every
/// vertex becomes the meet of the labels it reaches. Returns `p` unchanged
/// when some supporter has too many embeddings to enumerate.
pub(crate) fn close(
    p: &PatternGraph,
    db: &[TargetGraph],
    supporters: &[u32],
    injective: bool,
) -> PatternGraph {
    let matcher = Matcher::new(p, injective);
    let mut reached: Vec<HashSet<&FullLabel>> = vec![HashSet::new(); p.nodes.len()];
    for &g in supporters {
        let target = &db[g as usize];
        let Some(embeddings) = matcher.embeddings(target, EMBEDDING_LIMIT) else {
            return p.clone();
        };
        for emb in embeddings {
            for (u, t) in emb.into_iter().enumerate() {
                reached[u].insert(&target.labels[t]);
            }
        }
    }
    if reached.iter().any(HashSet::is_empty) {
        return p.clone();
    }
    let mut closed = p.clone();
    for (node, labels) in closed.nodes.iter_mut().zip(reached) {
        let mut fulls: Vec<&FullLabel> = labels.into_iter().collect();
        fulls.sort_unstable();
        *node = meet(&fulls);
    }
    closed
}

/// Most embeddings per graph for which the label phase works from explicit
/// embedding lists; denser structures fall back to repeated matching.
const EMBEDDING_LIMIT: usize = 4096;

/// Distinct label tuples under which a structure occurs in its supporters.
struct Occurrences {
    labels: Vec<FullLabel>,
    /// Per supporter: (graph, distinct tuples of indices into `labels`).
    graphs: Vec<(u32, Vec<Vec<u32>>)>,
}

impl Occurrences {
    fn collect(s: &Structural, db: &[TargetGraph], injective: bool) -> Option<Self> {
        let matcher = Matcher::new(&s.graph, injective);
        let mut index: HashMap<&FullLabel, u32> = HashMap::new();
        let mut labels = Vec::new();
        let mut graphs = Vec::with_capacity(s.supporters.len());
        for &g in &s.supporters {
            let target = &db[g as usize];
            let mut tuples: Vec<Vec<u32>> = matcher
                .embeddings(target, EMBEDDING_LIMIT)?
                .into_iter()
                .map(|emb| {
                    emb.into_iter()
                        .map(|t| {
                            let full = &target.labels[t];
                            *index.entry(full).or_insert_with(|| {
                                labels.push(full.clone());
                                labels.len() as u32 - 1
                            })
                        })
                        .collect()
                })
                .collect();
            tuples.sort_unstable();
            tuples.dedup();
            graphs.push((g, tuples));
        }
        Some(Occurrences { labels, graphs })
    }

    /// Frequent one-step children of `state` with their supporters, given the
    /// positions in `graphs` of the graphs supporting `state`.
    fn frequent_children(
        &self,
        state: &[NodeLabel],
        within: &[usize],
        minsup: usize,
    ) -> Vec<(Vec<NodeLabel>, Vec<usize>)> {
        let n = state.len();
        let matches: Vec<Vec<bool>> = state
            .iter()
            .map(|l| self.labels.iter().map(|f| l.matches(f)).collect())
            .collect();
        // Child label per (vertex, label index), interned per vertex.
        let mut child_of: Vec<Vec<Option<usize>>> = vec![vec![None; self.labels.len()]; n];
        let mut children: Vec<(usize, NodeLabel)> = Vec::new();
        for u in 0..n {
            let Some(d) = state[u].depth() else { continue };
            let mut seen: HashMap<NodeLabel, usize> = HashMap::new();
            for (i, full) in self.labels.iter().enumerate() {
                if !matches[u][i] {
                    continue;
                }
                let label = NodeLabel::at_depth(full, d + 1);
                let next = children.len();
                let k = *seen.entry(label.clone()).or_insert(next);
                if k == next {
                    children.push((u, label));
                }
                child_of[u][i] = Some(k);
            }
        }
        let mut support: Vec<Vec<usize>> = vec![Vec::new(); children.len()];
        for &gi in within {
            for t in &self.graphs[gi].1 {
                if !(0..n).all(|u| matches[u][t[u] as usize]) {
                    continue;
                }
                for u in 0..n {
                    if let Some(k) = child_of[u][t[u] as usize] {
                        if support[k].last() != Some(&gi) {
                            support[k].push(gi);
                        }
                    }
                }
            }
        }
        children
            .into_iter()
            .zip(support)
            .filter(|(_, sup)| sup.len() >= minsup)
            .map(|((u, label), sup)| {
                let mut child = state.to_vec();
                child[u] = label;
                (child, sup)
            })
            .collect()
    }
}

/// Frontier of the specialization lattice of `s`, canonicalized and sorted
/// by code.
pub fn specialize(
    s: &Structural,
    db: &[TargetGraph],
    minsup: usize,
    injective: bool,
) -> Vec<Specialized> {
    let mut frontier = match Occurrences::collect(s, db, injective) {
        Some(occ) => specialize_occurrences(s, &occ, minsup),
        None => specialize_matching(s, db, minsup, injective),
    };
    frontier.sort_by(|a, b| a.code.cmp(&b.code));
    frontier.dedup_by(|a, b| a.code == b.code);
    frontier
}

/// Deepest lattice label matching every label in `fulls`.
fn meet(fulls: &[&FullLabel]) -> NodeLabel {
    let first = fulls[0];
    let same = |d: usize| {
        fulls.iter().all(|f| {
            f.parts.iter().zip(&first.parts).all(|(a, b)| {
                let (la, lb) = (a.len().min(d), b.len().min(d));
                la == lb && a[..la] == b[..lb] && (a.len() >= d) == (b.len() >= d)
            })
        })
    };
    let mut d = 1;
    while d <= first.max_len() && same(d + 1) {
        d += 1;
    }
    NodeLabel::at_depth(first, d)
}

impl Occurrences {
    /// The deepest state supported by exactly the tuples that support
    /// `state`: their vertex-wise meet.
    fn closure(&self, state: &[NodeLabel], within: &[usize]) -> Vec<NodeLabel> {
        let n = state.len();
        let matches: Vec<Vec<bool>> = state
            .iter()
            .map(|l| self.labels.iter().map(|f| l.matches(f)).collect())
            .collect();
        let mut used = vec![vec![false; self.labels.len()]; n];
        for &gi in within {
            for t in &self.graphs[gi].1 {
                if (0..n).all(|u| matches[u][t[u] as usize]) {
                    for u in 0..n {
                        used[u][t[u] as usize] = true;
                    }
                }
            }
        }
        used.iter()
            .map(|ids| {
                let fulls: Vec<&FullLabel> = ids
                    .iter()
                    .enumerate()
                    .filter(|&(_, &b)| b)
                    .map(|(i, _)| &self.labels[i])
                    .collect();
                meet(&fulls)
            })
            .collect()
    }
}

/// Walks closed states only: every maximal frequent state is the meet of
/// the tuples supporting it, and closing a state keeps its support.
fn specialize_occurrences(s: &Structural, occ: &Occurrences, minsup: usize) -> Vec<Specialized> {
    // States share the structure's vertex order, so labels alone identify
    // them; codes are only needed to merge isomorphic states.
    let mut visited: HashSet<Vec<NodeLabel>> = HashSet::new();
    let mut explored: HashSet<DfsCode> = HashSet::new();
    let all: Vec<usize> = (0..occ.graphs.len()).collect();
    let root = occ.closure(&s.graph.nodes, &all);
    visited.insert(root.clone());
    let mut stack = vec![(root, all)];
    let mut frontier = Vec::new();
    while let Some((state, within)) = stack.pop() {
        let children = occ.frequent_children(&state, &within, minsup);
        if children.is_empty() {
            let p = PatternGraph {
                nodes: state,
                edges: s.graph.edges.clone(),
            };
            let (code, graph) = canonicalize(&p).expect("connected");
            frontier.push(Specialized {
                code,
                graph,
                supporters: within.iter().map(|&gi| occ.graphs[gi].0).collect(),
            });
            continue;
        }
        for (child, sup) in children {
            let closed = occ.closure(&child, &sup);
            if !visited.insert(closed.clone()) {
                continue;
            }
            let p = PatternGraph {
                nodes: closed,
                edges: s.graph.edges.clone(),
            };
            if explored.insert(min_dfs_code(&p).expect("connected")) {
                stack.push((p.nodes, sup));
            }
        }
    }
    frontier
}

fn specialize_matching(
    s: &Structural,
    db: &[TargetGraph],
    minsup: usize,
    injective: bool,
) -> Vec<Specialized> {
    let mut frequent: HashMap<Vec<NodeLabel>, bool> = HashMap::new();
    let mut explored: HashSet<DfsCode> = HashSet::new();
    frequent.insert(s.graph.nodes.clone(), true);
    explored.insert(s.code.clone());
    let mut stack = vec![(s.graph.clone(), s.supporters.clone())];
    let mut frontier = Vec::new();
    while let Some((p, supporters)) = stack.pop() {
        let mut has_frequent_child = false;
        for child in one_step_children(&p, db, &supporters, injective) {
            if let Some(&f) = frequent.get(&child.nodes) {
                has_frequent_child |= f;
                continue;
            }
            match frequent_supporters(&child, db, &supporters, minsup, injective) {
                Some(found) => {
                    frequent.insert(child.nodes.clone(), true);
                    has_frequent_child = true;
                    if explored.insert(min_dfs_code(&child).expect("connected")) {
                        stack.push((child, found));
                    }
                }
                None => {
                    frequent.insert(child.nodes, false);
                }
            }
        }
        if !has_frequent_child {
            let (code, graph) = canonicalize(&p).expect("connected");
            frontier.push(Specialized {
                code,
                graph,
                supporters,
            });
        }
    }
    frontier
}
