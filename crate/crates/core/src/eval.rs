//! Evaluation of mining runs against a ground truth: recall, precision,
//! redundancy, time efficiency and the size histogram of maximal patterns.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::cggen::Manifest;
use crate::error::{Error, Result};
use crate::graph::{projections, projects_into, ConceptualGraph, ProjectionOptions};
use crate::miner::{mine, MineOutput, MiningConfig, PatternRecord, Timings};
use crate::postprocess::decompress;
use crate::rule::LambdaRule;
use crate::vocab::Vocabulary;

/// What a mining run reports besides its patterns.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunSummary {
    pub modules: String,
    pub graphs: usize,
    pub minsup: usize,
    pub structural: usize,
    pub frontier: usize,
    pub returned: usize,
    pub pruned: usize,
    pub rule_extended: usize,
    pub rule_suppressed: usize,
    pub signature_pruned: usize,
    /// Median total time over `timing_runs` runs.
    pub runtime_ms: f64,
    pub timing_runs: usize,
    pub timings: Timings,
    #[serde(default)]
    pub warnings: Vec<String>,
}

impl RunSummary {
    pub fn new(out: &MineOutput, cfg: &MiningConfig, runtime_ms: f64, timing_runs: usize) -> Self {
        let s = &out.stats;
        RunSummary {
            modules: cfg.modules.to_string(),
            graphs: s.graphs,
            minsup: cfg.minsup,
            structural: s.structural,
            frontier: s.frontier,
            returned: s.returned,
            pruned: s.pruned,
            rule_extended: s.rule_extended,
            rule_suppressed: s.rule_suppressed,
            signature_pruned: s.signature_pruned,
            runtime_ms,
            timing_runs,
            timings: s.timings.clone(),
            warnings: out.warnings.clone(),
        }
    }
}

pub fn parse_summary(text: &str) -> Result<RunSummary> {
    Ok(serde_json::from_str(text)?)
}

pub fn serialize_summary(s: &RunSummary) -> String {
    serde_json::to_string_pretty(s).expect("summary serializes")
}

pub fn median(samples: &mut [f64]) -> Option<f64> {
    if samples.is_empty() {
        return None;
    }
    samples.sort_by(f64::total_cmp);
    let n = samples.len();
    Some(if n % 2 == 1 {
        samples[n / 2]
    } else {
        (samples[n / 2 - 1] + samples[n / 2]) / 2.0
    })
}

/// Mines `runs` times in sequence, returning the last output and the median
/// wall time in milliseconds.
pub fn timed_mine(
    db: &[ConceptualGraph],
    v: &Vocabulary,
    rules: &[LambdaRule],
    cfg: &MiningConfig,
    runs: usize,
) -> Result<(MineOutput, f64)> {
    if runs == 0 {
        return Err(Error::Config("at least one timing run is required".into()));
    }
    let mut samples = Vec::with_capacity(runs);
    let mut last = None;
    for _ in 0..runs {
        let t = Instant::now();
        let out = mine(db, v, rules, cfg)?;
        samples.push(t.elapsed().as_secs_f64() * 1000.0);
        last = Some(out);
    }
    let ms = median(&mut samples).expect("runs > 0");
    Ok((last.expect("runs > 0"), ms))
}

fn embeds(small: &ConceptualGraph, big: &ConceptualGraph, v: &Vocabulary) -> bool {
    projects_into(small, big, v, true)
}

/// Share of `expected` patterns embedding into some returned pattern.
pub fn recall(
    returned: &[ConceptualGraph],
    expected: &[ConceptualGraph],
    v: &Vocabulary,
) -> Result<f64> {
    Ok(recalled(returned, expected, v)? as f64 / expected.len() as f64)
}

fn recalled(
    returned: &[ConceptualGraph],
    expected: &[ConceptualGraph],
    v: &Vocabulary,
) -> Result<usize> {
    if expected.is_empty() {
        return Err(Error::Config(
            "recall is undefined without expected patterns".into(),
        ));
    }
    Ok(expected
        .par_iter()
        .filter(|e| returned.iter().any(|r| embeds(e, r, v)))
        .count())
}

/// A returned pattern is correct when all its relations are complete and it
/// either embeds into an expected pattern or each of its relations lies in
/// the image of an expected pattern embedded into it.
pub fn is_correct(r: &ConceptualGraph, expected: &[ConceptualGraph], v: &Vocabulary) -> bool {
    if r.relations.is_empty() || !r.relations.iter().all(|rel| rel.is_complete()) {
        return false;
    }
    if expected.iter().any(|e| embeds(r, e, v)) {
        return true;
    }
    let mut covered = vec![false; r.relations.len()];
    for e in expected {
        let opts = ProjectionOptions {
            injective: true,
            ..Default::default()
        };
        for p in projections(e, r, v, opts) {
            for &t in &p.relations {
                covered[t] = true;
            }
        }
    }
    covered.iter().all(|&c| c)
}

pub fn precision(
    returned: &[ConceptualGraph],
    expected: &[ConceptualGraph],
    v: &Vocabulary,
) -> Result<f64> {
    if returned.is_empty() {
        return Err(Error::Config(
            "precision is undefined without returned patterns".into(),
        ));
    }
    Ok(correct_count(returned, expected, v) as f64 / returned.len() as f64)
}

fn correct_count(
    returned: &[ConceptualGraph],
    expected: &[ConceptualGraph],
    v: &Vocabulary,
) -> usize {
    returned
        .par_iter()
        .filter(|r| is_correct(r, expected, v))
        .count()
}

/// Pruned patterns over all patterns, returned or pruned.
pub fn redundancy(pruned: usize, returned: usize) -> Result<f64> {
    if pruned + returned == 0 {
        return Err(Error::Config(
            "redundancy is undefined without patterns".into(),
        ));
    }
    Ok(pruned as f64 / (pruned + returned) as f64)
}

/// Run time relative to the baseline run; 1.0 means equally fast.
pub fn time_efficiency(run_ms: f64, baseline_ms: f64) -> Result<f64> {
    if baseline_ms.is_nan() || baseline_ms <= 0.0 || run_ms.is_nan() || run_ms < 0.0 {
        return Err(Error::Config(format!(
            "time efficiency needs positive timings, got {run_ms} and {baseline_ms}"
        )));
    }
    Ok(run_ms / baseline_ms)
}

/// Returned patterns embedded in no other returned pattern.
pub fn maximal(patterns: &[ConceptualGraph], v: &Vocabulary) -> Vec<bool> {
    (0..patterns.len())
        .into_par_iter()
        .map(|i| {
            let p = &patterns[i];
            !patterns.iter().enumerate().any(|(j, q)| {
                j != i
                    && q.node_count() >= p.node_count()
                    && embeds(p, q, v)
                    && (q.node_count() > p.node_count() || !embeds(q, p, v) || j < i)
            })
        })
        .collect()
}

/// Number of maximal patterns per size in concept plus relation nodes.
pub fn size_frequency_histogram(
    patterns: &[ConceptualGraph],
    v: &Vocabulary,
) -> BTreeMap<usize, usize> {
    let mut hist = BTreeMap::new();
    for (p, keep) in patterns.iter().zip(maximal(patterns, v)) {
        if keep {
            *hist.entry(p.node_count()).or_default() += 1;
        }
    }
    hist
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EvalReport {
    pub modules: String,
    pub expected: usize,
    pub returned: usize,
    pub recalled: usize,
    pub correct: usize,
    pub pruned: usize,
    pub recall: f64,
    /// `None` when nothing was returned.
    pub precision: Option<f64>,
    /// `None` when nothing was returned or pruned.
    pub redundancy: Option<f64>,
    /// Run time over baseline time; `None` without a baseline.
    pub time_efficiency: Option<f64>,
    pub histogram: BTreeMap<usize, usize>,
}

/// Expands pattern records back into conceptual graphs.
pub fn record_graphs(records: &[PatternRecord], v: &Vocabulary) -> Result<Vec<ConceptualGraph>> {
    records.iter().map(|r| decompress(&r.pattern, v)).collect()
}

/// Scores one run. The summary supplies the pruned count and run time.
pub fn evaluate(
    records: &[PatternRecord],
    summary: &RunSummary,
    manifest: &Manifest,
    v: &Vocabulary,
    baseline: Option<&RunSummary>,
) -> Result<EvalReport> {
    let expected: Vec<ConceptualGraph> = manifest.seeds.iter().map(|s| s.pattern.clone()).collect();
    let returned = record_graphs(records, v)?;
    if summary.returned != returned.len() {
        return Err(Error::Config(format!(
            "summary lists {} returned patterns, the pattern file {}",
            summary.returned,
            returned.len()
        )));
    }
    let recalled = recalled(&returned, &expected, v)?;
    let correct = correct_count(&returned, &expected, v);
    let time_efficiency = match baseline {
        Some(b) => Some(time_efficiency(summary.runtime_ms, b.runtime_ms)?),
        None => None,
    };
    Ok(EvalReport {
        modules: summary.modules.clone(),
        expected: expected.len(),
        returned: returned.len(),
        recalled,
        correct,
        pruned: summary.pruned,
        recall: recalled as f64 / expected.len() as f64,
        precision: (!returned.is_empty()).then(|| correct as f64 / returned.len() as f64),
        redundancy: redundancy(summary.pruned, returned.len()).ok(),
        time_efficiency,
        histogram: size_frequency_histogram(&returned, v),
    })
}

pub fn serialize_report(r: &EvalReport) -> String {
    serde_json::to_string_pretty(r).expect("report serializes")
}

pub fn parse_report(text: &str) -> Result<EvalReport> {
    Ok(serde_json::from_str(text)?)
}

fn percent(x: Option<f64>) -> String {
    x.map_or_else(|| "-".to_string(), |x| format!("{:.0}", x * 100.0))
}

/// Plain-text table with one row per report, in percent.
pub fn render_table(reports: &[EvalReport]) -> String {
    let width = reports
        .iter()
        .map(|r| r.modules.len())
        .chain(["Modules".len()])
        .max()
        .unwrap_or(0);
    let mut out = String::new();
    let _ = writeln!(
        out,
        "{:<width$}  {:>9}  {:>10}  {:>9}  {:>11}",
        "Modules", "Rec. (%)", "Prec. (%)", "Red. (%)", "T-Eff. (%)"
    );
    for r in reports {
        let _ = writeln!(
            out,
            "{:<width$}  {:>9}  {:>10}  {:>9}  {:>11}",
            r.modules,
            percent(Some(r.recall)),
            percent(r.precision),
            percent(r.redundancy),
            percent(r.time_efficiency)
        );
    }
    out
}

/// `size,count` lines for external plotting.
pub fn histogram_csv(hist: &BTreeMap<usize, usize>) -> String {
    let mut out = String::from("size,count\n");
    for (size, count) in hist {
        let _ = writeln!(out, "{size},{count}");
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{Concept, Relation};
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
                {"name": "owns", "arity": 2, "signature": ["Human", "Thing"]}
            ]
        }"#,
        )
        .unwrap()
    }

    fn flight(id: &str) -> ConceptualGraph {
        let mut g = ConceptualGraph::new(id);
        g.concepts = vec![
            Concept::new("h", "Human"),
            Concept::new("p", "Plane"),
            Concept::new("l", "Location"),
        ];
        g.relations = vec![Relation::new("r", "fly-in", ["h", "p", "l"])];
        g
    }

    fn owner(id: &str) -> ConceptualGraph {
        let mut g = ConceptualGraph::new(id);
        g.concepts = vec![Concept::new("h", "Human"), Concept::new("p", "Plane")];
        g.relations = vec![Relation::new("o", "owns", ["h", "p"])];
        g
    }

    /// A pilot owning the plane it flies.
    fn both(id: &str) -> ConceptualGraph {
        let mut g = flight(id);
        g.relations.push(Relation::new("o", "owns", ["h", "p"]));
        g
    }

    #[test]
    fn recall_counts_embedded_seeds() {
        let v = vocab();
        let expected = vec![flight("e1"), owner("e2")];
        assert_eq!(recall(&[both("r")], &expected, &v).unwrap(), 1.0);
        assert_eq!(recall(&[flight("r")], &expected, &v).unwrap(), 0.5);
        assert_eq!(recall(&[], &expected, &v).unwrap(), 0.0);
        assert!(recall(&[flight("r")], &[], &v).is_err());
    }

    #[test]
    fn precision_accepts_compositions_and_rejects_partial_relations() {
        let v = vocab();
        let expected = vec![flight("e1"), owner("e2")];
        assert_eq!(precision(&expected, &expected, &v).unwrap(), 1.0);
        assert!(is_correct(&both("r"), &expected, &v));
        let mut partial = flight("p");
        partial.relations[0].args[2] = None;
        partial.concepts.pop();
        assert!(!is_correct(&partial, &expected, &v));
        let mut lone = ConceptualGraph::new("c");
        lone.concepts.push(Concept::new("h", "Human"));
        assert!(!is_correct(&lone, &expected, &v));
        assert!((precision(&[both("a"), partial], &expected, &v).unwrap() - 0.5).abs() < 1e-12);
        assert!(precision(&[], &expected, &v).is_err());
    }

    #[test]
    fn redundancy_and_time_efficiency() {
        assert!((redundancy(46, 54).unwrap() - 0.46).abs() < 1e-12);
        assert_eq!(redundancy(0, 7).unwrap(), 0.0);
        assert_eq!(redundancy(7, 0).unwrap(), 1.0);
        assert!(redundancy(0, 0).is_err());
        assert_eq!(time_efficiency(12.5, 12.5).unwrap(), 1.0);
        assert!(time_efficiency(1.0, 0.0).is_err());
    }

    #[test]
    fn histogram_counts_maximal_patterns() {
        let v = vocab();
        assert_eq!(
            size_frequency_histogram(&[both("q")], &v),
            BTreeMap::from([(5, 1)])
        );
        let hist = size_frequency_histogram(&[flight("p"), both("q")], &v);
        assert_eq!(hist, BTreeMap::from([(5, 1)]));
        let twins = size_frequency_histogram(&[flight("a"), flight("b")], &v);
        assert_eq!(twins, BTreeMap::from([(4, 1)]));
    }

    #[test]
    fn median_of_odd_and_even() {
        assert_eq!(median(&mut [3.0, 1.0, 2.0]), Some(2.0));
        assert_eq!(median(&mut [4.0, 1.0, 2.0, 3.0]), Some(2.5));
        assert_eq!(median(&mut []), None);
    }
}
