//! DFS codes and the canonical (minimum) code of a pattern graph.

use std::cmp::Ordering;
use std::collections::HashSet;
use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::tlg::{EdgeLabel, NodeLabel, PatternEdge, PatternGraph, Symbols};

/// One step of a DFS code. `edge` and `to_label` are `None` only for the
/// single-vertex code `(0, 0, label)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct DfsTuple {
    pub i: u16,
    pub j: u16,
    pub from_label: NodeLabel,
    /// Read from vertex `i`'s side.
    pub edge: Option<EdgeLabel>,
    pub to_label: Option<NodeLabel>,
}

impl DfsTuple {
    pub fn is_forward(&self) -> bool {
        self.i < self.j
    }

    fn ordering_key(&self) -> (&NodeLabel, Option<EdgeLabel>, Option<&NodeLabel>) {
        (&self.from_label, self.edge, self.to_label.as_ref())
    }
}

impl Ord for DfsTuple {
    fn cmp(&self, other: &Self) -> Ordering {
        structural_cmp(
            self.i as usize,
            self.j as usize,
            other.i as usize,
            other.j as usize,
        )
        .then_with(|| self.ordering_key().cmp(&other.ordering_key()))
    }
}

impl PartialOrd for DfsTuple {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DfsCode(pub Vec<DfsTuple>);

impl DfsCode {
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn vertex_count(&self) -> usize {
        self.0
            .iter()
            .map(|t| t.i.max(t.j) as usize + 1)
            .max()
            .unwrap_or(0)
    }

    /// Discovery indices of the rightmost path, rightmost vertex last.
    pub fn rightmost_path(&self) -> Vec<u16> {
        let mut path = Vec::new();
        let mut next: Option<u16> = None;
        for t in self.0.iter().rev() {
            if t.edge.is_none() {
                break;
            }
            if t.is_forward() && next.is_none_or(|n| n == t.j) {
                if path.is_empty() {
                    path.push(t.j);
                }
                path.push(t.i);
                next = Some(t.i);
            }
        }
        if path.is_empty() && !self.0.is_empty() {
            path.push(0);
        }
        path.reverse();
        path
    }

    /// The pattern graph described by the code, vertices in discovery order.
    pub fn to_graph(&self) -> PatternGraph {
        let mut g = PatternGraph::default();
        for t in &self.0 {
            if g.nodes.is_empty() {
                g.nodes.push(t.from_label.clone());
            }
            if let (Some(edge), Some(to)) = (t.edge, &t.to_label) {
                if t.is_forward() {
                    g.nodes.push(to.clone());
                }
                g.edges.push(PatternEdge {
                    a: t.i as usize,
                    b: t.j as usize,
                    label: edge,
                });
            }
        }
        g
    }

    pub fn render(&self, symbols: &Symbols) -> String {
        let mut out = String::new();
        for (k, t) in self.0.iter().enumerate() {
            if k > 0 {
                out.push(' ');
            }
            let _ = write!(out, "({},{},{}", t.i, t.j, t.from_label.display(symbols));
            if let (Some(e), Some(to)) = (t.edge, &t.to_label) {
                let _ = write!(out, ",{e},{}", to.display(symbols));
            }
            out.push(')');
        }
        out
    }
}

#[derive(Clone, PartialEq, Eq, Hash)]
struct Walk {
    /// Discovery index to pattern vertex.
    order: Vec<usize>,
    used: Vec<bool>,
    rightmost: Vec<usize>,
}

/// A possible next tuple of a walk, by vertex reference.
#[derive(Clone, Copy)]
struct Step {
    i: usize,
    j: usize,
    from: usize,
    edge: EdgeLabel,
    to: usize,
    edge_id: usize,
    forward: bool,
}

fn structural_cmp(i1: usize, j1: usize, i2: usize, j2: usize) -> Ordering {
    if (i1, j1) == (i2, j2) {
        return Ordering::Equal;
    }
    match (i1 < j1, i2 < j2) {
        (true, true) => j1.cmp(&j2).then(i2.cmp(&i1)),
        (false, false) => i1.cmp(&i2).then(j1.cmp(&j2)),
        (false, true) => {
            if i1 < j2 {
                Ordering::Less
            } else {
                Ordering::Greater
            }
        }
        (true, false) => {
            if j1 <= i2 {
                Ordering::Less
            } else {
                Ordering::Greater
            }
        }
    }
}

/// Interchangeable vertices: equal labels and identical incident edges.
/// Permuting vertices within a class, or parallel edges with equal labels,
/// is an automorphism, so walks that differ only by such swaps have the
/// same future code.
struct Twins {
    class: Vec<usize>,
    members: Vec<Vec<usize>>,
}

/// Vertex label, sorted incident (neighbor, edge label) list, vertex.
type TwinKey<'a> = (&'a NodeLabel, Vec<(usize, EdgeLabel)>, usize);

type WalkKey = (Vec<usize>, Vec<(usize, usize, EdgeLabel)>, Vec<usize>);

impl Twins {
    fn new(p: &PatternGraph, adj: &[Vec<(usize, EdgeLabel, usize)>]) -> Self {
        let mut keys: Vec<TwinKey> = adj
            .iter()
            .enumerate()
            .map(|(v, edges)| {
                let mut incident: Vec<(usize, EdgeLabel)> =
                    edges.iter().map(|&(w, l, _)| (w, l)).collect();
                incident.sort();
                (&p.nodes[v], incident, v)
            })
            .collect();
        keys.sort();
        let mut class = vec![0; p.nodes.len()];
        let mut members: Vec<Vec<usize>> = Vec::new();
        for (k, (label, incident, v)) in keys.iter().enumerate() {
            if k == 0 || (label, incident) != (&keys[k - 1].0, &keys[k - 1].1) {
                members.push(Vec::new());
            }
            class[*v] = members.len() - 1;
            members.last_mut().expect("pushed").push(*v);
        }
        for m in &mut members {
            m.sort_unstable();
        }
        Twins { class, members }
    }

    /// The walk mapped so that each class is discovered in increasing vertex
    /// order, with used edges as an endpoint multiset.
    fn key(&self, p: &PatternGraph, walk: &Walk) -> WalkKey {
        let mut taken = vec![0; self.members.len()];
        let mut image = vec![usize::MAX; p.nodes.len()];
        for &v in &walk.order {
            let c = self.class[v];
            image[v] = self.members[c][taken[c]];
            taken[c] += 1;
        }
        let mut used: Vec<(usize, usize, EdgeLabel)> = p
            .edges
            .iter()
            .zip(&walk.used)
            .filter(|(_, &u)| u)
            .map(|(e, _)| {
                let (a, b) = (image[e.a], image[e.b]);
                if a <= b {
                    (a, b, e.label)
                } else {
                    (b, a, e.label.reversed())
                }
            })
            .collect();
        used.sort_unstable();
        let order = walk.order.iter().map(|&v| image[v]).collect();
        (order, used, walk.rightmost.clone())
    }
}

fn step_cmp(p: &PatternGraph, a: &Step, b: &Step) -> Ordering {
    structural_cmp(a.i, a.j, b.i, b.j)
        .then_with(|| p.nodes[a.from].cmp(&p.nodes[b.from]))
        .then(a.edge.cmp(&b.edge))
        .then_with(|| p.nodes[a.to].cmp(&p.nodes[b.to]))
}

/// Minimum DFS code of a connected pattern, together with the discovery
/// order (code index to pattern vertex) of one walk producing it.
pub fn canonical_form(p: &PatternGraph) -> Result<(DfsCode, Vec<usize>)> {
    if p.nodes.is_empty() {
        return Ok((DfsCode::default(), Vec::new()));
    }
    if !p.is_connected() {
        return Err(Error::Disconnected);
    }
    let min_label = p.nodes.iter().min().expect("non-empty");
    if p.edges.is_empty() {
        let tuple = DfsTuple {
            i: 0,
            j: 0,
            from_label: min_label.clone(),
            edge: None,
            to_label: None,
        };
        return Ok((DfsCode(vec![tuple]), vec![0]));
    }
    let adj = p.adjacency();
    let twins = Twins::new(p, &adj);
    let mut walks: Vec<(Walk, Vec<Option<usize>>)> = (0..p.nodes.len())
        .filter(|&v| &p.nodes[v] == min_label)
        .map(|v| {
            let mut pos = vec![None; p.nodes.len()];
            pos[v] = Some(0);
            (
                Walk {
                    order: vec![v],
                    used: vec![false; p.edges.len()],
                    rightmost: vec![0],
                },
                pos,
            )
        })
        .collect();
    let mut code = Vec::with_capacity(p.edges.len());
    let mut moves: Vec<(usize, Step)> = Vec::new();
    for _ in 0..p.edges.len() {
        let mut best: Option<Step> = None;
        moves.clear();
        for (wi, (walk, pos)) in walks.iter().enumerate() {
            let rm = *walk.rightmost.last().expect("non-empty");
            let rm_vertex = walk.order[rm];
            let mut consider = |s: Step| match best.as_ref().map(|b| step_cmp(p, &s, b)) {
                Some(Ordering::Greater) => {}
                Some(Ordering::Equal) => moves.push((wi, s)),
                _ => {
                    best = Some(s);
                    moves.clear();
                    moves.push((wi, s));
                }
            };
            for &(w, label, e) in &adj[rm_vertex] {
                if walk.used[e] {
                    continue;
                }
                if let Some(j) = pos[w] {
                    if j != rm && walk.rightmost.contains(&j) {
                        consider(Step {
                            i: rm,
                            j,
                            from: rm_vertex,
                            edge: label,
                            to: w,
                            edge_id: e,
                            forward: false,
                        });
                    }
                }
            }
            let next = walk.order.len();
            for &i in walk.rightmost.iter().rev() {
                let v = walk.order[i];
                for &(w, label, e) in &adj[v] {
                    if walk.used[e] || pos[w].is_some() {
                        continue;
                    }
                    consider(Step {
                        i,
                        j: next,
                        from: v,
                        edge: label,
                        to: w,
                        edge_id: e,
                        forward: true,
                    });
                }
            }
        }
        let best = best.ok_or(Error::Disconnected)?;
        let mut next_walks = Vec::with_capacity(moves.len());
        let mut seen = HashSet::new();
        for &(wi, s) in &moves {
            let (mut walk, mut pos) = walks[wi].clone();
            walk.used[s.edge_id] = true;
            if s.forward {
                let at = walk
                    .rightmost
                    .iter()
                    .position(|&k| k == s.i)
                    .expect("on rightmost path");
                walk.rightmost.truncate(at + 1);
                walk.rightmost.push(walk.order.len());
                pos[s.to] = Some(walk.order.len());
                walk.order.push(s.to);
            }
            if moves.len() == 1 || seen.insert(twins.key(p, &walk)) {
                next_walks.push((walk, pos));
            }
        }
        walks = next_walks;
        code.push(DfsTuple {
            i: best.i as u16,
            j: best.j as u16,
            from_label: p.nodes[best.from].clone(),
            edge: Some(best.edge),
            to_label: Some(p.nodes[best.to].clone()),
        });
    }
    let order = walks.swap_remove(0).0.order;
    Ok((DfsCode(code), order))
}

pub fn min_dfs_code(p: &PatternGraph) -> Result<DfsCode> {
    canonical_form(p).map(|(code, _)| code)
}

/// Renumbers `p` into discovery order of its canonical code.
pub fn canonicalize(p: &PatternGraph) -> Result<(DfsCode, PatternGraph)> {
    let (code, order) = canonical_form(p)?;
    let mut perm = vec![0; order.len()];
    for (k, &v) in order.iter().enumerate() {
        perm[v] = k;
    }
    Ok((code, p.permuted(&perm)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tlg::{NodeKind, Part};

    fn label(s: u32) -> NodeLabel {
        NodeLabel {
            kind: NodeKind::Brick,
            parts: vec![Part {
                path: vec![s],
                open: true,
            }],
        }
    }

    fn graph(nodes: &[u32], edges: &[(usize, usize, u16, u16)]) -> PatternGraph {
        PatternGraph {
            nodes: nodes.iter().map(|&s| label(s)).collect(),
            edges: edges
                .iter()
                .map(|&(a, b, h, t)| PatternEdge {
                    a,
                    b,
                    label: EdgeLabel::new(h, t),
                })
                .collect(),
        }
    }

    #[test]
    fn single_vertex_convention() {
        let code = min_dfs_code(&graph(&[3], &[])).unwrap();
        assert_eq!(code.len(), 1);
        assert_eq!((code.0[0].i, code.0[0].j), (0, 0));
        assert!(code.0[0].edge.is_none());
    }

    #[test]
    fn disconnected_is_rejected() {
        assert!(matches!(
            min_dfs_code(&graph(&[1, 2], &[])),
            Err(Error::Disconnected)
        ));
    }

    #[test]
    fn path_and_reversed_path_agree() {
        let a = graph(&[1, 2], &[(0, 1, 1, 2)]);
        let b = graph(&[2, 1], &[(1, 0, 1, 2)]);
        assert_eq!(min_dfs_code(&a).unwrap(), min_dfs_code(&b).unwrap());
        let c = graph(&[1, 2], &[(0, 1, 2, 1)]);
        assert_ne!(min_dfs_code(&a).unwrap(), min_dfs_code(&c).unwrap());
    }

    #[test]
    fn triangle_orderings_agree() {
        let base = graph(&[1, 1, 1], &[(0, 1, 1, 1), (1, 2, 1, 1), (2, 0, 1, 1)]);
        let code = min_dfs_code(&base).unwrap();
        for perm in [
            [0, 1, 2],
            [0, 2, 1],
            [1, 0, 2],
            [1, 2, 0],
            [2, 0, 1],
            [2, 1, 0],
        ] {
            assert_eq!(min_dfs_code(&base.permuted(&perm)).unwrap(), code);
        }
        assert_eq!(code.len(), 3);
        assert!(!code.0[2].is_forward());
    }

    #[test]
    fn parallel_edges_become_backward_edges() {
        let g = graph(&[1, 2], &[(0, 1, 1, 1), (0, 1, 2, 2)]);
        let code = min_dfs_code(&g).unwrap();
        assert_eq!(code.len(), 2);
        assert_eq!((code.0[1].i, code.0[1].j), (1, 0));
        assert_eq!(code.to_graph().edges.len(), 2);
    }

    #[test]
    fn code_round_trips_through_graph() {
        let g = graph(
            &[2, 1, 3, 1],
            &[(0, 1, 1, 2), (1, 2, 1, 1), (2, 3, 2, 1), (3, 0, 1, 1)],
        );
        let (code, canon) = canonicalize(&g).unwrap();
        assert_eq!(min_dfs_code(&code.to_graph()).unwrap(), code);
        assert_eq!(min_dfs_code(&canon).unwrap(), code);
        assert_eq!(code.vertex_count(), 4);
    }
}
