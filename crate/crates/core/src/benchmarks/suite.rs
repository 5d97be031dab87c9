use std::collections::BTreeMap;
use std::fmt::Write as _;

use rayon::prelude::*;

use super::generate::{generate, BenchmarkSpec};
use super::BenchError;
use crate::propagation::Consistency;
use crate::search::{solve, SearchConfig, SearchStatus};

/// One solved (instance, level) cell.
#[derive(Clone, Debug, PartialEq)]
pub struct SuiteRow {
    pub family: String,
    pub size: String,
    pub measure: String,
    pub level: Consistency,
    pub seed: u64,
    pub status: SearchStatus,
    pub optimum: Option<u64>,
    pub nodes: u64,
    pub ms: f64,
}

/// Aggregate over seeds for one (instance shape, level).
#[derive(Clone, Debug, PartialEq)]
pub struct SuiteSummary {
    pub family: String,
    pub size: String,
    pub measure: String,
    pub level: Consistency,
    pub runs: usize,
    pub solved: usize,
    pub median_nodes: f64,
    pub mean_nodes: f64,
    pub median_ms: f64,
    pub mean_ms: f64,
}

#[derive(Clone, Debug, Default)]
pub struct SuiteReport {
    pub rows: Vec<SuiteRow>,
}

pub fn median(xs: &[f64]) -> f64 {
    if xs.is_empty() {
        return f64::NAN;
    }
    let mut v = xs.to_vec();
    v.sort_by(|a, b| a.total_cmp(b));
    let m = v.len() / 2;
    if v.len() % 2 == 1 {
        v[m]
    } else {
        (v[m - 1] + v[m]) / 2.0
    }
}

fn mean(xs: &[f64]) -> f64 {
    xs.iter().sum::<f64>() / xs.len() as f64
}

impl SuiteReport {
    pub fn summaries(&self) -> Vec<SuiteSummary> {
        let mut groups: BTreeMap<(String, String, String, Consistency), Vec<&SuiteRow>> =
            BTreeMap::new();
        for r in &self.rows {
            groups
                .entry((r.family.clone(), r.size.clone(), r.measure.clone(), r.level))
                .or_default()
                .push(r);
        }
        groups
            .into_iter()
            .map(|((family, size, measure, level), rows)| {
                let nodes: Vec<f64> = rows.iter().map(|r| r.nodes as f64).collect();
                let ms: Vec<f64> = rows.iter().map(|r| r.ms).collect();
                SuiteSummary {
                    family,
                    size,
                    measure,
                    level,
                    runs: rows.len(),
                    solved: rows
                        .iter()
                        .filter(|r| r.status != SearchStatus::LimitReached)
                        .count(),
                    median_nodes: median(&nodes),
                    mean_nodes: mean(&nodes),
                    median_ms: median(&ms),
                    mean_ms: mean(&ms),
                }
            })
            .collect()
    }

    /// Rows as CSV with columns `family,n,level,seed,optimum,nodes,ms`.
    pub fn to_csv(&self) -> String {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(["family", "n", "level", "seed", "optimum", "nodes", "ms"])
            .expect("in-memory write");
        for r in &self.rows {
            let optimum = match (r.status, r.optimum) {
                (SearchStatus::Optimal, Some(c)) => c.to_string(),
                (SearchStatus::Infeasible, _) => "infeasible".into(),
                _ => "unknown".into(),
            };
            w.write_record([
                r.family.clone(),
                r.size.clone(),
                r.level.to_string(),
                r.seed.to_string(),
                optimum,
                r.nodes.to_string(),
                format!("{:.3}", r.ms),
            ])
            .expect("in-memory write");
        }
        String::from_utf8(w.into_inner().expect("flushed")).expect("utf-8")
    }

    /// Aligned text table of the per-level summaries.
    pub fn to_table(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(
            out,
            "{:<30} {:>8} {:>6} {:>7} {:>7} {:>12} {:>12} {:>10} {:>10}",
            "family",
            "n",
            "meas",
            "level",
            "solved",
            "med nodes",
            "mean nodes",
            "med ms",
            "mean ms"
        );
        for s in self.summaries() {
            let _ = writeln!(
                out,
                "{:<30} {:>8} {:>6} {:>7} {:>3}/{:<3} {:>12.1} {:>12.1} {:>10.2} {:>10.2}",
                s.family,
                s.size,
                s.measure,
                s.level.as_str(),
                s.solved,
                s.runs,
                s.median_nodes,
                s.mean_nodes,
                s.median_ms,
                s.mean_ms
            );
        }
        out
    }
}

/// Solves every spec at every level, in parallel, and checks that the
/// levels agree on each optimum.
pub fn run_suite(
    specs: &[BenchmarkSpec],
    levels: &[Consistency],
    limits: &SearchConfig,
) -> Result<SuiteReport, BenchError> {
    let instances = specs
        .iter()
        .map(|s| generate(s).map(|w| (s, w)))
        .collect::<Result<Vec<_>, _>>()?;
    let cells: Vec<(usize, Consistency)> = (0..instances.len())
        .flat_map(|i| levels.iter().map(move |&l| (i, l)))
        .collect();
    let rows: Vec<SuiteRow> = cells
        .par_iter()
        .map(|&(i, level)| {
            let (spec, w) = &instances[i];
            let mut cfg = limits.clone();
            cfg.consistency = level;
            cfg.seed = spec.seed;
            let r = solve(w, &cfg);
            SuiteRow {
                family: spec.family.to_string(),
                size: spec.size_label(),
                measure: spec.measure.to_string(),
                level,
                seed: spec.seed,
                status: r.status,
                optimum: r.cost.map(|c| c.get()),
                nodes: r.nodes,
                ms: r.elapsed.as_secs_f64() * 1e3,
            }
        })
        .collect();
    let report = SuiteReport { rows };
    check_agreement(&report)?;
    Ok(report)
}

fn check_agreement(report: &SuiteReport) -> Result<(), BenchError> {
    let mut seen: BTreeMap<
        (String, String, String, u64),
        (Consistency, SearchStatus, Option<u64>),
    > = BTreeMap::new();
    for r in &report.rows {
        if r.status == SearchStatus::LimitReached {
            continue;
        }
        let key = (r.family.clone(), r.size.clone(), r.measure.clone(), r.seed);
        let here = (r.level, r.status, r.optimum);
        match seen.get(&key) {
            Some(&(level, status, optimum)) if (status, optimum) != (r.status, r.optimum) => {
                return Err(BenchError::Disagreement {
                    instance: format!("{} {} seed {}", r.family, r.size, r.seed),
                    first: format!("{level}: {optimum:?}"),
                    second: format!("{}: {:?}", r.level, r.optimum),
                });
            }
            Some(_) => {}
            None => {
                seen.insert(key, here);
            }
        }
    }
    Ok(())
}
