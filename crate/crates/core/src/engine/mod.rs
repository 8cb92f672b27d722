//! Partition-parallel evaluation.
//!
//! Each partition is scanned by one worker into private accumulators; the
//! accumulators are merged in partition order once every worker is done.

mod partition;

use std::collections::{BTreeMap, BTreeSet};
use std::time::{Duration, Instant};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::metrics::{MetricDefinition, ValueKind};
use crate::qap::eval::{combine, scan, scan_grouped, CountPlan, Partial};
use crate::qap::{check_plan, Action, EvalError, EvaluationContext, MetricExpr, PlanIssue, ScanStats, Transformation};
use crate::rdf::{Dataset, Triple};
pub use partition::{partition, partition_slice, PartitionedDataset};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum EngineMode {
    /// One scan per metric.
    #[default]
    PerMetric,
    /// One scan for all metrics.
    SharedScan,
}

#[derive(Debug, Clone)]
pub struct AssessmentConfig {
    pub metrics: Vec<MetricDefinition>,
    pub context: EvaluationContext,
    /// Worker threads; 0 means all available cores.
    pub workers: usize,
    /// Defaults to the worker count.
    pub partitions: Option<usize>,
    pub mode: EngineMode,
}

impl AssessmentConfig {
    pub fn new(metrics: Vec<MetricDefinition>, context: EvaluationContext) -> AssessmentConfig {
        AssessmentConfig {
            metrics,
            context,
            workers: 0,
            partitions: None,
            mode: EngineMode::PerMetric,
        }
    }

    pub fn effective_workers(&self) -> usize {
        if self.workers == 0 {
            available_workers()
        } else {
            self.workers
        }
    }

    pub fn partition_count(&self) -> usize {
        self.partitions.unwrap_or_else(|| self.effective_workers()).max(1)
    }
}

pub fn available_workers() -> usize {
    std::thread::available_parallelism().map_or(1, |n| n.get())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ResultFlag {
    ZeroDenominator,
    RatioAboveOne,
    UnknownDatatypesSkipped,
}

impl ResultFlag {
    pub fn as_str(self) -> &'static str {
        match self {
            ResultFlag::ZeroDenominator => "zero-denominator",
            ResultFlag::RatioAboveOne => "ratio-above-one",
            ResultFlag::UnknownDatatypesSkipped => "unknown-datatypes-skipped",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MetricResult {
    pub id: String,
    pub value_kind: ValueKind,
    pub value: f64,
    /// Counts in action source order.
    pub counts: Vec<u64>,
    /// Counts keyed by the action's canonical text.
    pub action_counts: BTreeMap<String, u64>,
    pub flags: BTreeSet<ResultFlag>,
    pub wall_time: Duration,
    pub origin: String,
    pub stats: ScanStats,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MetricFailure {
    pub id: String,
    pub issues: Vec<PlanIssue>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Assessment {
    pub results: Vec<MetricResult>,
    /// Metrics whose plan was rejected; the others were still evaluated.
    pub failures: Vec<MetricFailure>,
    pub workers: usize,
    pub partitions: usize,
    pub mode: EngineMode,
    /// Total evaluation time, parse excluded.
    pub wall_time: Duration,
}

#[derive(Debug, Error)]
pub enum AssessError {
    #[error("configuration error: no metrics requested")]
    NoMetrics,
    #[error("configuration error: duplicate metric id '{0}'")]
    DuplicateMetric(String),
    #[error("configuration error in metric {id}: {}", .issues.iter().map(|i| i.message.as_str()).collect::<Vec<_>>().join("; "))]
    Configuration { id: String, issues: Vec<PlanIssue> },
    #[error("could not start worker pool: {0}")]
    Pool(#[from] rayon::ThreadPoolBuildError),
}

impl AssessError {
    pub fn is_configuration(&self) -> bool {
        !matches!(self, AssessError::Pool(_))
    }
}

pub fn build_pool(workers: usize) -> Result<rayon::ThreadPool, rayon::ThreadPoolBuildError> {
    rayon::ThreadPoolBuilder::new().num_threads(workers).build()
}

fn scan_parallel<'a>(
    plans: &[CountPlan<'_>],
    pd: &PartitionedDataset<'a>,
    ctx: &EvaluationContext,
) -> (Vec<Partial<'a>>, ScanStats) {
    let per_partition: Vec<_> = pd.partitions().par_iter().map(|part| scan(plans, part, ctx)).collect();
    merge_partials(plans, per_partition)
}

fn merge_partials<'a>(
    plans: &[CountPlan<'_>],
    parts: Vec<(Vec<Partial<'a>>, ScanStats)>,
) -> (Vec<Partial<'a>>, ScanStats) {
    let mut stats = ScanStats::default();
    let mut merged: Vec<Partial<'a>> = plans.iter().map(|p| p.empty_partial()).collect();
    for (partials, s) in parts {
        stats.merge(s);
        merged = merged.into_iter().zip(partials).map(|(a, b)| a.merge(b)).collect();
    }
    (merged, stats)
}

/// Count of a transformation's output over the partitions, using the
/// current rayon pool.
pub fn evaluate_count_parallel(
    t: &Transformation,
    pd: &PartitionedDataset<'_>,
    ctx: &EvaluationContext,
) -> Result<u64, EvalError> {
    let action = Action::Count(t.clone());
    check_plan(&MetricExpr::Action(action.clone()), ctx).map_err(EvalError::from_issues)?;
    let plan = CountPlan::new(&action);
    let (mut merged, _) = scan_parallel(std::slice::from_ref(&plan), pd, ctx);
    Ok(plan.finish(merged.pop().expect("one plan")))
}

/// Evaluates one metric over partitions on the current rayon pool.
pub fn evaluate_metric_parallel(
    def: &MetricDefinition,
    pd: &PartitionedDataset<'_>,
    ctx: &EvaluationContext,
    origin: &str,
) -> Result<MetricResult, EvalError> {
    check_plan(&def.expr, ctx).map_err(EvalError::from_issues)?;
    let start = Instant::now();
    let actions = def.expr.actions();
    let plans: Vec<CountPlan<'_>> = actions.iter().map(|a| CountPlan::new(a)).collect();
    let (merged, stats) = scan_parallel(&plans, pd, ctx);
    let counts: Vec<u64> = plans.iter().zip(merged).map(|(p, m)| p.finish(m)).collect();
    Ok(finish_result(def, &actions, counts, stats, start.elapsed(), origin))
}

fn finish_result(
    def: &MetricDefinition,
    actions: &[&Action],
    counts: Vec<u64>,
    stats: ScanStats,
    wall_time: Duration,
    origin: &str,
) -> MetricResult {
    let (value, zero) = combine(&def.expr, &counts);
    let mut flags = BTreeSet::new();
    if zero {
        flags.insert(ResultFlag::ZeroDenominator);
    }
    if def.value_kind == ValueKind::Ratio && value > 1.0 {
        flags.insert(ResultFlag::RatioAboveOne);
    }
    if stats.unknown_datatype_literals > 0 {
        flags.insert(ResultFlag::UnknownDatatypesSkipped);
    }
    let action_counts = actions.iter().zip(&counts).map(|(a, c)| (a.to_string(), *c)).collect();
    MetricResult {
        id: def.id.clone(),
        value_kind: def.value_kind,
        value,
        counts,
        action_counts,
        flags,
        wall_time,
        origin: origin.to_string(),
        stats,
    }
}

/// Splits metrics into runnable ones and per-metric failures; configuration
/// problems abort before anything is evaluated.
fn triage(config: &AssessmentConfig) -> Result<(Vec<&MetricDefinition>, Vec<MetricFailure>), AssessError> {
    if config.metrics.is_empty() {
        return Err(AssessError::NoMetrics);
    }
    let mut seen = BTreeSet::new();
    let mut runnable = Vec::new();
    let mut failures = Vec::new();
    for def in &config.metrics {
        if !seen.insert(def.id.as_str()) {
            return Err(AssessError::DuplicateMetric(def.id.clone()));
        }
        match check_plan(&def.expr, &config.context) {
            Ok(()) => runnable.push(def),
            Err(issues) if issues.iter().any(|i| i.kind.is_configuration()) => {
                return Err(AssessError::Configuration {
                    id: def.id.clone(),
                    issues,
                });
            }
            Err(issues) => failures.push(MetricFailure {
                id: def.id.clone(),
                issues,
            }),
        }
    }
    Ok((runnable, failures))
}

/// Evaluates every requested metric against the same dataset, in the mode
/// the config asks for.
pub fn assess(config: &AssessmentConfig, d: &Dataset) -> Result<Assessment, AssessError> {
    match config.mode {
        EngineMode::PerMetric => assess_per_metric(config, d),
        EngineMode::SharedScan => assess_shared_scan(config, d),
    }
}

fn assess_per_metric(config: &AssessmentConfig, d: &Dataset) -> Result<Assessment, AssessError> {
    let (runnable, failures) = triage(config)?;
    let workers = config.effective_workers();
    let pool = build_pool(workers)?;
    let pd = partition(d, config.partition_count());
    let start = Instant::now();
    let results = pool.install(|| {
        runnable
            .iter()
            .map(|def| evaluate_metric_parallel(def, &pd, &config.context, &d.origin).expect("plan checked in triage"))
            .collect()
    });
    Ok(Assessment {
        results,
        failures,
        workers,
        partitions: pd.partition_count(),
        mode: EngineMode::PerMetric,
        wall_time: start.elapsed(),
    })
}

/// All metrics' counters in one pass per partition. Every result carries
/// the wall time of the shared pass.
pub fn assess_shared_scan(config: &AssessmentConfig, d: &Dataset) -> Result<Assessment, AssessError> {
    let (runnable, failures) = triage(config)?;
    let workers = config.effective_workers();
    let pool = build_pool(workers)?;
    let pd = partition(d, config.partition_count());
    let ctx = &config.context;
    let start = Instant::now();
    let actions: Vec<Vec<&Action>> = runnable.iter().map(|def| def.expr.actions()).collect();
    let groups: Vec<Vec<CountPlan<'_>>> = actions
        .iter()
        .map(|a| a.iter().map(|a| CountPlan::new(a)).collect())
        .collect();
    let per_partition: Vec<Vec<(Vec<Partial<'_>>, ScanStats)>> = pool.install(|| {
        pd.partitions()
            .par_iter()
            .map(|part: &&[Triple]| scan_grouped(&groups, part, ctx))
            .collect()
    });
    let mut by_group: Vec<Vec<(Vec<Partial<'_>>, ScanStats)>> = groups.iter().map(|_| Vec::new()).collect();
    for part in per_partition {
        for (slot, g) in by_group.iter_mut().zip(part) {
            slot.push(g);
        }
    }
    let elapsed = start.elapsed();
    let results = runnable
        .iter()
        .zip(&groups)
        .zip(by_group)
        .zip(&actions)
        .map(|(((def, plans), parts), acts)| {
            let (merged, stats) = merge_partials(plans, parts);
            let counts = plans.iter().zip(merged).map(|(p, m)| p.finish(m)).collect();
            finish_result(def, acts, counts, stats, elapsed, &d.origin)
        })
        .collect();
    Ok(Assessment {
        results,
        failures,
        workers,
        partitions: pd.partition_count(),
        mode: EngineMode::SharedScan,
        wall_time: start.elapsed(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::metrics::{builtin, builtins};
    use crate::qap::eval::tests::{d1, d1_ctx};
    use crate::qap::{Filter, RuleKind};

    fn config(ids: &[&str], p: usize) -> AssessmentConfig {
        let mut c = AssessmentConfig::new(ids.iter().map(|i| builtin(i).unwrap()).collect(), d1_ctx());
        c.workers = 2;
        c.partitions = Some(p);
        c
    }

    fn values(a: &Assessment) -> Vec<f64> {
        a.results.iter().map(|r| r.value).collect()
    }

    #[test]
    fn count_parallel_examples() {
        let d = d1();
        let ctx = d1_ctx();
        let lit = Transformation::rule(RuleKind::IsLiteral, Filter::Objects);
        let subjects = Transformation::Select(Filter::Subjects.distinct());
        for p in [1, 2, 5] {
            let pd = partition(&d, p);
            assert_eq!(evaluate_count_parallel(&lit, &pd, &ctx).unwrap(), 2);
            assert_eq!(evaluate_count_parallel(&subjects, &pd, &ctx).unwrap(), 2);
        }
        let empty = Dataset::from_triples("e", vec![]);
        assert_eq!(evaluate_count_parallel(&lit, &partition(&empty, 4), &ctx).unwrap(), 0);
    }

    #[test]
    fn assess_examples() {
        let d = d1();
        let a = assess(&config(&["L1", "I2", "CN2"], 3), &d).unwrap();
        assert_eq!(values(&a), vec![1.0, 0.4, 0.4]);
        assert!(matches!(assess(&config(&[], 1), &d), Err(AssessError::NoMetrics)));
        let one = assess(&config(&["SV3"], 1), &d).unwrap();
        let eight = assess(&config(&["SV3"], 8), &d).unwrap();
        assert_eq!(values(&one), vec![1.0]);
        assert_eq!(values(&one), values(&eight));
        assert_eq!(eight.partitions, 5);
    }

    #[test]
    fn shared_scan_matches_per_metric() {
        let d = d1();
        let mut c = config(&crate::metrics::BUILTIN_IDS, 4);
        let per = assess(&c, &d).unwrap();
        c.mode = EngineMode::SharedScan;
        let shared = assess(&c, &d).unwrap();
        for (a, b) in per.results.iter().zip(&shared.results) {
            assert_eq!(a.value.to_bits(), b.value.to_bits());
            assert_eq!(a.action_counts, b.action_counts);
            assert_eq!(a.stats, b.stats);
        }
    }

    #[test]
    fn flags_and_failures() {
        let empty = Dataset::from_triples("e", vec![]);
        let a = assess(&config(&["I2"], 2), &empty).unwrap();
        assert!(a.results[0].flags.contains(&ResultFlag::ZeroDenominator));

        let mut c = config(&["L1"], 2);
        let broken = crate::dsl::parse_metric_text("count(!isBroken(?o))").unwrap().expr;
        c.metrics.push(MetricDefinition::custom("B", "broken", broken));
        let a = assess(&c, &d1()).unwrap();
        assert_eq!(a.results.len(), 1);
        assert_eq!(a.failures[0].id, "B");

        let mut c = config(&["L1", "I2"], 2);
        c.context = EvaluationContext::default();
        assert!(matches!(assess(&c, &d1()), Err(AssessError::Configuration { .. })));
    }

    #[test]
    fn rule_evaluations_are_linear() {
        let d = d1();
        let mut c = config(&[], 3);
        c.metrics = builtins();
        let a = assess(&c, &d).unwrap();
        for (r, def) in a.results.iter().zip(builtins()) {
            assert_eq!(
                r.stats.rule_evaluations,
                d.len() as u64 * def.expr.rule_count() as u64,
                "{}",
                r.id
            );
        }
    }
}
