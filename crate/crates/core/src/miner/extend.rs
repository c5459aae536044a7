//! One-shot extension rules over mined patterns.
//!
//! A pattern whose back-translation embeds a rule hypothesis is glued to the
//! extra part of the conclusion. When the glued pattern is frequent it
//! replaces the original, and every emitted pattern lying between the two is
//! withheld. When it is not frequent the original pattern stays.

use std::collections::{HashMap, HashSet};

use rayon::prelude::*;

use super::dfs::canonicalize;
use super::lattice::{close, supporters_among};
use super::matcher::pattern_embeds;
use super::{MinedPattern, Provenance};
use crate::graph::{projections, projects_into, Concept, ProjectionOptions, Relation};
use crate::rule::LambdaRule;
use crate::tlg::{NodeKind, NodeLabel, PatternEdge, Symbols, TargetGraph};
use crate::translate::{
    back_translate, brick_target, build_brick_graph, raw_target, TranslateOptions,
};
use crate::vocab::Vocabulary;

pub(crate) struct ExtendContext<'a> {
    pub db: &'a [TargetGraph],
    pub vocab: &'a Vocabulary,
    pub symbols: &'a Symbols,
    pub translate: TranslateOptions,
    pub minsup: usize,
    pub injective: bool,
}

/// Glues the conclusion extra of `rule` onto `p`, returning the result when
/// it is frequent.
pub(crate) fn extend_once(
    p: &MinedPattern,
    rule: &LambdaRule,
    ctx: &ExtendContext<'_>,
) -> Option<MinedPattern> {
    let v = ctx.vocab;
    let bt = back_translate(&p.graph, ctx.symbols, v).ok()?;
    let cg = &bt.graph;
    let hyp = projections(
        &rule.hypothesis,
        cg,
        v,
        ProjectionOptions {
            limit: Some(1),
            ..Default::default()
        },
    )
    .into_iter()
    .next()?;
    if projects_into(&rule.conclusion, cg, v, false) {
        return None;
    }
    let overlay = rule.overlay(v)?;
    let extra = rule.conclusion_extra(v);

    let mut glued = cg.clone();
    let mut concl_to_glued: HashMap<usize, usize> = HashMap::new();
    for (h, &c) in overlay.concepts.iter().enumerate() {
        let target = hyp.concepts[h];
        concl_to_glued.insert(c, target);
        let concl_type = &rule.conclusion.concepts[c].concept_type;
        if v.generalizes(&glued.concepts[target].concept_type, concl_type) {
            glued.concepts[target].concept_type = concl_type.clone();
        }
    }
    for (k, &c) in extra.concepts.iter().enumerate() {
        let src = &rule.conclusion.concepts[c];
        let mut concept = Concept::new(format!("x{k}"), src.concept_type.clone());
        concept.marker = src.marker.clone();
        concl_to_glued.insert(c, glued.concepts.len());
        glued.concepts.push(concept);
    }
    let concl_index = rule.conclusion.concept_index();
    for (k, &r) in extra.relations.iter().enumerate() {
        let src = &rule.conclusion.relations[r];
        let mut args = Vec::with_capacity(src.args.len());
        for a in &src.args {
            let c = *concl_index.get(a.as_deref()?)?;
            args.push(Some(glued.concepts[*concl_to_glued.get(&c)?].id.clone()));
        }
        glued.relations.push(Relation {
            id: format!("x-r{k}"),
            relation_type: src.relation_type.clone(),
            args,
        });
    }

    let target = if ctx.translate.bricks {
        brick_target(
            &build_brick_graph(&glued, v, ctx.translate).ok()?,
            ctx.symbols,
            ctx.translate.strict_markers,
        )
    } else {
        raw_target(&glued, v, ctx.translate, ctx.symbols).ok()?
    };

    // Glued target vertex to pattern vertex.
    let relation_nodes: Vec<usize> = (0..p.graph.nodes.len())
        .filter(|&i| p.graph.nodes[i].kind.is_relational())
        .collect();
    let mut map: Vec<Option<usize>> = vec![None; target.node_count()];
    if ctx.translate.bricks {
        for (r, &node) in relation_nodes.iter().enumerate() {
            map[r] = Some(node);
        }
    } else {
        for (c, origins) in bt.concept_origins.iter().enumerate() {
            map[c] = Some(origins[0].0);
        }
        let base = glued.concepts.len();
        for (r, &node) in relation_nodes.iter().enumerate() {
            map[base + r] = Some(node);
        }
    }
    let mut graph = p.graph.clone();
    let mut fresh = vec![false; target.node_count()];
    for (t, slot) in map.iter_mut().enumerate() {
        if slot.is_none() {
            *slot = Some(graph.nodes.len());
            fresh[t] = true;
            graph.nodes.push(NodeLabel::open_prefix(&target.labels[t]));
        }
    }
    for a in 0..target.node_count() {
        for adj in &target.adj[a] {
            if a < adj.node && (fresh[a] || fresh[adj.node]) {
                graph.edges.push(PatternEdge {
                    a: map[a].expect("mapped"),
                    b: map[adj.node].expect("mapped"),
                    label: adj.label,
                });
            }
        }
    }
    if !graph.is_connected() || graph.nodes.iter().all(|n| n.kind == NodeKind::Concept) {
        return None;
    }
    let supporters = supporters_among(&graph, ctx.db, &p.supporters, ctx.injective);
    if supporters.len() < ctx.minsup {
        return None;
    }
    let graph = close(&graph, ctx.db, &supporters, ctx.injective);
    let (code, graph) = canonicalize(&graph).ok()?;
    MinedPattern::new(
        graph,
        code,
        supporters,
        p.provenance.clone(),
        ctx.symbols,
        v,
    )
    .ok()
}

/// Applies every extension rule at most once to each pattern, in rule order.
/// Returns the surviving patterns and the number withheld.
pub(crate) fn apply_extension_rules(
    patterns: Vec<MinedPattern>,
    rules: &[LambdaRule],
    ctx: &ExtendContext<'_>,
) -> (Vec<MinedPattern>, usize) {
    if rules.is_empty() {
        return (patterns, 0);
    }
    let extended: Vec<Option<MinedPattern>> = patterns
        .par_iter()
        .map(|p| {
            let mut current = p.clone();
            let mut fired = Vec::new();
            for rule in rules {
                if let Some(next) = extend_once(&current, rule, ctx) {
                    current = next;
                    fired.push(rule.name.clone());
                }
            }
            (!fired.is_empty()).then(|| {
                current.provenance = Provenance::RuleExtended {
                    rule: fired.join("+"),
                };
                current
            })
        })
        .collect();

    let jumps: Vec<(usize, &MinedPattern)> = extended
        .iter()
        .enumerate()
        .filter_map(|(i, e)| e.as_ref().map(|e| (i, e)))
        .collect();
    let extended_codes: HashSet<&str> = jumps.iter().map(|(_, e)| e.canonical.as_str()).collect();
    let withheld: Vec<bool> = patterns
        .par_iter()
        .map(|q| {
            jumps.iter().any(|&(i, ext)| {
                let p = &patterns[i];
                pattern_embeds(&p.graph, &q.graph) && pattern_embeds(&q.graph, &ext.graph)
            })
        })
        .collect();

    let mut suppressed = 0;
    let mut out = Vec::new();
    for (q, hidden) in patterns.iter().zip(&withheld) {
        if !hidden {
            out.push(q.clone());
        } else if !extended_codes.contains(q.canonical.as_str()) {
            suppressed += 1;
        }
    }
    let mut seen: HashSet<String> = HashSet::new();
    out.retain(|q| !extended_codes.contains(q.canonical.as_str()));
    for (_, ext) in jumps {
        if seen.insert(ext.canonical.clone()) {
            out.push(ext.clone());
        }
    }
    (out, suppressed)
}
