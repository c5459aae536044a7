//! Exhaustive reference miner. Shares nothing with the library beyond the
//! label definitions: patterns come from enumerating every connected edge
//! subset, isomorphism and homomorphism are plain backtracking, and the
//! specialization frontier is walked with naive support counts.

use std::collections::{BTreeSet, HashMap, HashSet, VecDeque};

use cgspan::miner::dfs::DfsCode;
use cgspan::tlg::{EdgeLabel, FullLabel, NodeLabel, PatternEdge, PatternGraph, TargetGraph};

fn target_edges(t: &TargetGraph) -> Vec<(usize, usize, EdgeLabel)> {
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    for a in 0..t.node_count() {
        for adj in &t.adj[a] {
            if seen.insert(adj.edge) {
                out.push((a, adj.node, adj.label));
            }
        }
    }
    out
}

fn relational(p: &PatternGraph) -> usize {
    p.nodes.iter().filter(|n| n.kind.is_relational()).count()
}

/// Every connected edge-induced subgraph plus every single vertex, labelled
/// with path roots, up to `max_size` relation-bearing vertices.
pub fn connected_subgraphs(t: &TargetGraph, max_size: Option<usize>) -> Vec<PatternGraph> {
    let edges = target_edges(t);
    assert!(edges.len() <= 20, "oracle input too large");
    let mut out = Vec::new();
    for v in 0..t.node_count() {
        out.push(PatternGraph::single(t.roots[v].clone()));
    }
    for mask in 1u32..(1u32 << edges.len()) {
        let chosen: Vec<_> = (0..edges.len())
            .filter(|i| mask & (1 << i) != 0)
            .map(|i| edges[i])
            .collect();
        let mut nodes: Vec<usize> = chosen.iter().flat_map(|&(a, b, _)| [a, b]).collect();
        nodes.sort();
        nodes.dedup();
        let index: HashMap<usize, usize> = nodes.iter().enumerate().map(|(i, &n)| (n, i)).collect();
        let p = PatternGraph {
            nodes: nodes.iter().map(|&n| t.roots[n].clone()).collect(),
            edges: chosen
                .iter()
                .map(|&(a, b, label)| PatternEdge {
                    a: index[&a],
                    b: index[&b],
                    label,
                })
                .collect(),
        };
        if !p.is_connected() || max_size.is_some_and(|m| relational(&p) > m) {
            continue;
        }
        out.push(p);
    }
    out
}

fn edge_labels_between(p: &PatternGraph, x: usize, y: usize) -> Vec<EdgeLabel> {
    let mut out: Vec<EdgeLabel> = p
        .edges
        .iter()
        .filter_map(|e| {
            if e.a == x && e.b == y {
                Some(e.label)
            } else if e.a == y && e.b == x {
                Some(e.label.reversed())
            } else {
                None
            }
        })
        .collect();
    out.sort();
    out
}

/// Label- and edge-preserving bijection between two patterns.
pub fn isomorphic(a: &PatternGraph, b: &PatternGraph) -> bool {
    if a.nodes.len() != b.nodes.len() || a.edges.len() != b.edges.len() {
        return false;
    }
    let mut la = a.nodes.clone();
    let mut lb = b.nodes.clone();
    la.sort();
    lb.sort();
    if la != lb {
        return false;
    }
    fn go(a: &PatternGraph, b: &PatternGraph, map: &mut Vec<usize>, used: &mut Vec<bool>) -> bool {
        let i = map.len();
        if i == a.nodes.len() {
            return true;
        }
        for j in 0..b.nodes.len() {
            if used[j] || a.nodes[i] != b.nodes[j] {
                continue;
            }
            let ok =
                (0..i).all(|k| edge_labels_between(a, i, k) == edge_labels_between(b, j, map[k]));
            if !ok {
                continue;
            }
            map.push(j);
            used[j] = true;
            if go(a, b, map, used) {
                return true;
            }
            map.pop();
            used[j] = false;
        }
        false
    }
    go(a, b, &mut Vec::new(), &mut vec![false; b.nodes.len()])
}

/// Whether some mapping (not necessarily injective) of `p` into `t`
/// respects labels and edges. Vertices are assigned in breadth-first order
/// so every edge is checked as soon as both ends are placed.
pub fn naive_hom(p: &PatternGraph, t: &TargetGraph) -> bool {
    let n = p.nodes.len();
    let mut order = Vec::with_capacity(n);
    let mut placed = vec![false; n];
    for start in 0..n {
        if placed[start] {
            continue;
        }
        placed[start] = true;
        order.push(start);
        let mut k = order.len() - 1;
        while k < order.len() {
            let x = order[k];
            for e in &p.edges {
                for (a, b) in [(e.a, e.b), (e.b, e.a)] {
                    if a == x && !placed[b] {
                        placed[b] = true;
                        order.push(b);
                    }
                }
            }
            k += 1;
        }
    }
    let mut rank = vec![0; n];
    for (k, &v) in order.iter().enumerate() {
        rank[v] = k;
    }

    fn go(
        p: &PatternGraph,
        t: &TargetGraph,
        order: &[usize],
        rank: &[usize],
        assign: &mut Vec<usize>,
    ) -> bool {
        let k = assign.len();
        if k == order.len() {
            return true;
        }
        let u = order[k];
        for v in 0..t.node_count() {
            if !p.nodes[u].matches(&t.labels[v]) {
                continue;
            }
            assign.push(v);
            let ok = p.edges.iter().all(|e| {
                if rank[e.a].max(rank[e.b]) != k {
                    return true;
                }
                let (x, y) = (assign[rank[e.a]], assign[rank[e.b]]);
                t.adj[x]
                    .iter()
                    .any(|adj| adj.node == y && adj.label == e.label)
            });
            if ok && go(p, t, order, rank, assign) {
                return true;
            }
            assign.pop();
        }
        false
    }
    go(p, t, &order, &rank, &mut Vec::new())
}

pub fn naive_support(p: &PatternGraph, db: &[TargetGraph]) -> usize {
    db.iter().filter(|t| naive_hom(p, t)).count()
}

/// Isomorphism invariant: each vertex label with its sorted incident edges.
fn invariant(p: &PatternGraph) -> Vec<(NodeLabel, Vec<EdgeLabel>)> {
    let mut out: Vec<(NodeLabel, Vec<EdgeLabel>)> =
        p.nodes.iter().map(|l| (l.clone(), Vec::new())).collect();
    for e in &p.edges {
        out[e.a].1.push(e.label);
        out[e.b].1.push(e.label.reversed());
    }
    for (_, es) in &mut out {
        es.sort();
    }
    out.sort();
    out
}

fn dedup_isomorphic(patterns: Vec<PatternGraph>) -> Vec<PatternGraph> {
    let mut buckets: HashMap<Vec<(NodeLabel, Vec<EdgeLabel>)>, Vec<PatternGraph>> = HashMap::new();
    let mut order = Vec::new();
    for p in patterns {
        let key = invariant(&p);
        let bucket = buckets.entry(key.clone()).or_default();
        if bucket.iter().any(|q| isomorphic(q, &p)) {
            continue;
        }
        bucket.push(p);
        order.push((key, bucket.len() - 1));
    }
    order
        .into_iter()
        .map(|(k, i)| buckets[&k][i].clone())
        .collect()
}

/// Frequent, maximally specialized patterns with their supports.
pub fn brute_force_mine(
    db: &[TargetGraph],
    minsup: usize,
    max_size: Option<usize>,
) -> Vec<(PatternGraph, usize)> {
    let all: Vec<PatternGraph> = db
        .iter()
        .flat_map(|t| connected_subgraphs(t, max_size))
        .collect();
    let structures = dedup_isomorphic(all);
    let labels: BTreeSet<FullLabel> = db.iter().flat_map(|t| t.labels.iter().cloned()).collect();

    let mut result = Vec::new();
    for s in structures {
        let support = naive_support(&s, db);
        if support < minsup {
            continue;
        }
        let mut frequent: HashMap<Vec<NodeLabel>, Option<usize>> = HashMap::new();
        frequent.insert(s.nodes.clone(), Some(support));
        let mut queue = VecDeque::from([s.nodes.clone()]);
        let mut frontier = Vec::new();
        while let Some(state) = queue.pop_front() {
            let mut has_frequent_child = false;
            for u in 0..state.len() {
                let Some(d) = state[u].depth() else { continue };
                for f in &labels {
                    if NodeLabel::at_depth(f, d) != state[u] {
                        continue;
                    }
                    let mut child = state.clone();
                    child[u] = NodeLabel::at_depth(f, d + 1);
                    let sup = *frequent.entry(child.clone()).or_insert_with(|| {
                        let g = PatternGraph {
                            nodes: child.clone(),
                            edges: s.edges.clone(),
                        };
                        let n = naive_support(&g, db);
                        if n >= minsup {
                            queue.push_back(child.clone());
                            Some(n)
                        } else {
                            None
                        }
                    });
                    has_frequent_child |= sup.is_some();
                }
            }
            if !has_frequent_child {
                frontier.push(PatternGraph {
                    nodes: state.clone(),
                    edges: s.edges.clone(),
                });
            }
        }
        for p in dedup_isomorphic(frontier) {
            let sup = frequent[&p.nodes].expect("frequent");
            result.push((p, sup));
        }
    }
    result
}

/// Lexicographically smallest DFS code over every DFS traversal, found by
/// enumerating traversals exhaustively.
pub fn brute_min_code(p: &PatternGraph) -> DfsCode {
    use cgspan::miner::dfs::DfsTuple;
    if p.edges.is_empty() {
        return DfsCode(vec![DfsTuple {
            i: 0,
            j: 0,
            from_label: p.nodes.iter().min().unwrap().clone(),
            edge: None,
            to_label: None,
        }]);
    }
    let adj = p.adjacency();
    let mut best: Option<DfsCode> = None;

    fn walk(
        p: &PatternGraph,
        adj: &[Vec<(usize, EdgeLabel, usize)>],
        order: &mut Vec<usize>,
        rightmost: &mut Vec<usize>,
        used: &mut Vec<bool>,
        code: &mut Vec<DfsTuple>,
        best: &mut Option<DfsCode>,
    ) {
        if code.len() == p.edges.len() {
            let c = DfsCode(code.clone());
            if best.as_ref().is_none_or(|b| c < *b) {
                *best = Some(c);
            }
            return;
        }
        let pos = |v: usize, order: &Vec<usize>| order.iter().position(|&x| x == v);
        let rm = *rightmost.last().unwrap();
        // Back edges run from the rightmost vertex to the rightmost path;
        // any other order leaves edges that can never be added.
        for &(w, label, e) in &adj[order[rm]] {
            if used[e] {
                continue;
            }
            if let Some(j) = pos(w, order).filter(|j| *j != rm && rightmost.contains(j)) {
                used[e] = true;
                code.push(DfsTuple {
                    i: rm as u16,
                    j: j as u16,
                    from_label: p.nodes[order[rm]].clone(),
                    edge: Some(label),
                    to_label: Some(p.nodes[w].clone()),
                });
                walk(p, adj, order, rightmost, used, code, best);
                code.pop();
                used[e] = false;
            }
        }
        for k in (0..rightmost.len()).rev() {
            let i = rightmost[k];
            for &(w, label, e) in &adj[order[i]] {
                if used[e] || pos(w, order).is_some() {
                    continue;
                }
                let saved = rightmost.clone();
                used[e] = true;
                rightmost.truncate(k + 1);
                rightmost.push(order.len());
                code.push(DfsTuple {
                    i: i as u16,
                    j: order.len() as u16,
                    from_label: p.nodes[order[i]].clone(),
                    edge: Some(label),
                    to_label: Some(p.nodes[w].clone()),
                });
                order.push(w);
                walk(p, adj, order, rightmost, used, code, best);
                order.pop();
                code.pop();
                *rightmost = saved;
                used[e] = false;
            }
        }
    }

    for start in 0..p.nodes.len() {
        let mut order = vec![start];
        let mut rightmost = vec![0];
        let mut used = vec![false; p.edges.len()];
        walk(
            p,
            &adj,
            &mut order,
            &mut rightmost,
            &mut used,
            &mut Vec::new(),
            &mut best,
        );
    }
    best.unwrap()
}
