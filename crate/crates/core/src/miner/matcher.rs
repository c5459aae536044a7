//! Label-aware matching of patterns into database graphs and into other
//! patterns.
//!
//! Support is homomorphic by default: distinct pattern vertices may share an
//! image. The constraint network is pruned by arc consistency, which is exact
//! for tree-shaped patterns; cyclic patterns fall back to backtracking.

use std::collections::BTreeMap;

use crate::tlg::{EdgeLabel, PatternGraph, TargetGraph};

/// Pattern edges grouped by unordered vertex pair.
#[derive(Debug, Clone)]
struct Constraint {
    u: usize,
    w: usize,
    /// Labels read from `u`'s side.
    labels: Vec<EdgeLabel>,
}

/// Precomputed constraint network of one pattern.
#[derive(Debug, Clone)]
pub struct Matcher<'p> {
    pattern: &'p PatternGraph,
    constraints: Vec<Constraint>,
    /// Per vertex: (constraint index, vertex is the constraint's `u`).
    incident: Vec<Vec<(usize, bool)>>,
    order: Vec<usize>,
    acyclic: bool,
    injective: bool,
}

impl<'p> Matcher<'p> {
    pub fn new(pattern: &'p PatternGraph, injective: bool) -> Self {
        let mut grouped: BTreeMap<(usize, usize), Vec<EdgeLabel>> = BTreeMap::new();
        for e in &pattern.edges {
            let (key, label) = if e.a <= e.b {
                ((e.a, e.b), e.label)
            } else {
                ((e.b, e.a), e.label.reversed())
            };
            grouped.entry(key).or_default().push(label);
        }
        let n = pattern.nodes.len();
        let mut incident = vec![Vec::new(); n];
        let constraints: Vec<Constraint> = grouped
            .into_iter()
            .enumerate()
            .map(|(k, ((u, w), mut labels))| {
                labels.sort();
                labels.dedup();
                incident[u].push((k, true));
                incident[w].push((k, false));
                Constraint { u, w, labels }
            })
            .collect();
        let acyclic = n == 0 || constraints.len() + 1 == n;
        // Breadth-first order so each vertex after the first has an assigned neighbour.
        let mut order = Vec::with_capacity(n);
        let mut seen = vec![false; n];
        for start in 0..n {
            if seen[start] {
                continue;
            }
            seen[start] = true;
            order.push(start);
            let mut k = order.len() - 1;
            while k < order.len() {
                let v = order[k];
                for &(c, is_u) in &incident[v] {
                    let other = if is_u {
                        constraints[c].w
                    } else {
                        constraints[c].u
                    };
                    if !seen[other] {
                        seen[other] = true;
                        order.push(other);
                    }
                }
                k += 1;
            }
        }
        Matcher {
            pattern,
            constraints,
            incident,
            order,
            acyclic,
            injective,
        }
    }

    fn initial_domains(&self, g: &TargetGraph) -> Vec<Vec<bool>> {
        self.pattern
            .nodes
            .iter()
            .map(|l| g.labels.iter().map(|t| l.matches(t)).collect())
            .collect()
    }

    /// `a` (image of the vertex on side `is_u`) and `b` satisfy constraint `c`.
    fn compatible(&self, g: &TargetGraph, c: usize, is_u: bool, a: usize, b: usize) -> bool {
        let cons = &self.constraints[c];
        cons.labels.iter().all(|&l| {
            let l = if is_u { l } else { l.reversed() };
            g.adj[a].iter().any(|x| x.node == b && x.label == l)
        })
    }

    /// Removes unsupported values until a fixpoint. Returns `false` when a
    /// domain empties.
    fn arc_consistency(&self, g: &TargetGraph, dom: &mut [Vec<bool>]) -> bool {
        if dom.iter().any(|d| !d.iter().any(|&b| b)) {
            return false;
        }
        let mut changed = true;
        while changed {
            changed = false;
            for (c, cons) in self.constraints.iter().enumerate() {
                for (x, y, is_u) in [(cons.u, cons.w, true), (cons.w, cons.u, false)] {
                    for a in 0..g.node_count() {
                        if !dom[x][a] {
                            continue;
                        }
                        let supported = g.adj[a].iter().any(|adj| {
                            dom[y][adj.node] && self.compatible(g, c, is_u, a, adj.node)
                        });
                        if !supported {
                            dom[x][a] = false;
                            changed = true;
                        }
                    }
                    if !dom[x].iter().any(|&b| b) {
                        return false;
                    }
                }
            }
        }
        true
    }

    fn search(
        &self,
        g: &TargetGraph,
        dom: &[Vec<bool>],
        assign: &mut Vec<Option<usize>>,
        depth: usize,
    ) -> bool {
        if depth == self.order.len() {
            return true;
        }
        let v = self.order[depth];
        if let Some(fixed) = assign[v] {
            return self.consistent(g, assign, v, fixed) && self.search(g, dom, assign, depth + 1);
        }
        for a in 0..g.node_count() {
            if !dom[v][a] || (self.injective && assign.contains(&Some(a))) {
                continue;
            }
            if !self.consistent(g, assign, v, a) {
                continue;
            }
            assign[v] = Some(a);
            if self.search(g, dom, assign, depth + 1) {
                return true;
            }
            assign[v] = None;
        }
        false
    }

    fn consistent(&self, g: &TargetGraph, assign: &[Option<usize>], v: usize, a: usize) -> bool {
        self.incident[v].iter().all(|&(c, is_u)| {
            let cons = &self.constraints[c];
            let other = if is_u { cons.w } else { cons.u };
            match assign[other] {
                Some(b) if other != v => self.compatible(g, c, is_u, a, b),
                _ => true,
            }
        })
    }

    fn solve(
        &self,
        g: &TargetGraph,
        dom: &[Vec<bool>],
        fixed: Option<(usize, usize)>,
    ) -> Option<Vec<usize>> {
        let mut assign = vec![None; self.pattern.nodes.len()];
        if let Some((v, a)) = fixed {
            assign[v] = Some(a);
        }
        if self.search(g, dom, &mut assign, 0) {
            Some(assign.into_iter().map(|a| a.expect("complete")).collect())
        } else {
            None
        }
    }

    /// Whether some label-compatible mapping of the pattern into `g` exists.
    pub fn exists(&self, g: &TargetGraph) -> bool {
        if self.pattern.nodes.is_empty() {
            return true;
        }
        let mut dom = self.initial_domains(g);
        if !self.arc_consistency(g, &mut dom) {
            return false;
        }
        if self.acyclic && !self.injective {
            return true;
        }
        self.solve(g, &dom, None).is_some()
    }

    fn enumerate(
        &self,
        g: &TargetGraph,
        dom: &[Vec<bool>],
        assign: &mut Vec<Option<usize>>,
        depth: usize,
        out: &mut Vec<Vec<usize>>,
        limit: usize,
    ) -> bool {
        if depth == self.order.len() {
            out.push(assign.iter().map(|a| a.expect("complete")).collect());
            return out.len() <= limit;
        }
        let v = self.order[depth];
        for a in 0..g.node_count() {
            if !dom[v][a]
                || (self.injective && assign.contains(&Some(a)))
                || !self.consistent(g, assign, v, a)
            {
                continue;
            }
            assign[v] = Some(a);
            let within = self.enumerate(g, dom, assign, depth + 1, out, limit);
            assign[v] = None;
            if !within {
                return false;
            }
        }
        true
    }

    /// Every mapping of the pattern into `g`, as target vertex per pattern
    /// vertex. `None` when there are more than `limit`.
    pub fn embeddings(&self, g: &TargetGraph, limit: usize) -> Option<Vec<Vec<usize>>> {
        let mut out = Vec::new();
        if self.pattern.nodes.is_empty() {
            out.push(Vec::new());
            return Some(out);
        }
        let mut dom = self.initial_domains(g);
        if !self.arc_consistency(g, &mut dom) {
            return Some(out);
        }
        let mut assign = vec![None; self.pattern.nodes.len()];
        self.enumerate(g, &dom, &mut assign, 0, &mut out, limit)
            .then_some(out)
    }

    /// For every pattern vertex, the target vertices it maps to in at least
    /// one mapping, in ascending order. `None` when no mapping exists.
    pub fn supported_values(&self, g: &TargetGraph) -> Option<Vec<Vec<usize>>> {
        let n = self.pattern.nodes.len();
        let mut dom = self.initial_domains(g);
        if !self.arc_consistency(g, &mut dom) {
            return None;
        }
        if !(self.acyclic && !self.injective) {
            let mut marked = vec![vec![false; g.node_count()]; n];
            for v in 0..n {
                for a in 0..g.node_count() {
                    if !dom[v][a] || marked[v][a] {
                        continue;
                    }
                    match self.solve(g, &dom, Some((v, a))) {
                        Some(solution) => {
                            for (x, &b) in solution.iter().enumerate() {
                                marked[x][b] = true;
                            }
                        }
                        None => dom[v][a] = false,
                    }
                }
                if !dom[v].iter().any(|&b| b) {
                    return None;
                }
            }
        }
        Some(
            dom.into_iter()
                .map(|d| {
                    d.into_iter()
                        .enumerate()
                        .filter(|&(_, b)| b)
                        .map(|(a, _)| a)
                        .collect()
                })
                .collect(),
        )
    }
}

/// Whether `small` embeds injectively into `big` with every label of `small`
/// subsuming the label it maps to and every edge preserved.
pub fn pattern_embeds(small: &PatternGraph, big: &PatternGraph) -> bool {
    if small.nodes.len() > big.nodes.len() || small.edges.len() > big.edges.len() {
        return false;
    }
    let n = small.nodes.len();
    let small_adj = small.adjacency();
    let big_adj = big.adjacency();
    let dom: Vec<Vec<usize>> = small
        .nodes
        .iter()
        .map(|l| {
            (0..big.nodes.len())
                .filter(|&b| l.subsumes(&big.nodes[b]))
                .collect()
        })
        .collect();
    if dom.iter().any(Vec::is_empty) {
        return false;
    }
    let mut order: Vec<usize> = Vec::with_capacity(n);
    let mut seen = vec![false; n];
    for start in 0..n {
        if seen[start] {
            continue;
        }
        seen[start] = true;
        order.push(start);
        let mut k = order.len() - 1;
        while k < order.len() {
            for &(w, _, _) in &small_adj[order[k]] {
                if !seen[w] {
                    seen[w] = true;
                    order.push(w);
                }
            }
            k += 1;
        }
    }

    fn go(
        depth: usize,
        order: &[usize],
        dom: &[Vec<usize>],
        small_adj: &[Vec<(usize, EdgeLabel, usize)>],
        big_adj: &[Vec<(usize, EdgeLabel, usize)>],
        assign: &mut Vec<Option<usize>>,
        taken: &mut Vec<bool>,
    ) -> bool {
        if depth == order.len() {
            return true;
        }
        let v = order[depth];
        'candidates: for &b in &dom[v] {
            if taken[b] {
                continue;
            }
            // Edges to already mapped neighbours, matched one-to-one.
            let mut used: Vec<usize> = Vec::new();
            for &(w, label, _) in &small_adj[v] {
                let Some(bw) = assign[w] else { continue };
                let hit = big_adj[b]
                    .iter()
                    .find(|&&(x, l, be)| x == bw && l == label && !used.contains(&be));
                match hit {
                    Some(&(_, _, be)) => used.push(be),
                    None => continue 'candidates,
                }
            }
            assign[v] = Some(b);
            taken[b] = true;
            if go(depth + 1, order, dom, small_adj, big_adj, assign, taken) {
                return true;
            }
            assign[v] = None;
            taken[b] = false;
        }
        false
    }

    let mut assign = vec![None; n];
    let mut taken = vec![false; big.nodes.len()];
    go(
        0,
        &order,
        &dom,
        &small_adj,
        &big_adj,
        &mut assign,
        &mut taken,
    )
}
