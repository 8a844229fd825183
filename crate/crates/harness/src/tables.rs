//! Comparison tables: each algorithm with its true constraint violation
//! against the same algorithm with the crisp violation, per metric.
//!
//! A mark of `+` means the true-CV algorithm is significantly better than its
//! crisp variant, `-` significantly worse, `=` no significant difference.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{ensure, Result};

use cmoea::algorithms::AlgorithmKind;
use cmoea::benchmarks::{registry_lookup, Family};
use cmoea::cht::ChtMode;
use cmoea::metrics::MetricKind;
use cmoea::stats::{A12Category, ComparisonSummary, TestKind, Verdict};

use crate::config::ExperimentConfig;
use crate::format::{median_iqr_cell, store_value};
use crate::store::ResultStore;

pub const TABLES_DIR: &str = "tables";
pub const COMPARISONS_FILE: &str = "comparisons.csv";
pub const SUMMARY_FILE: &str = "summary.txt";

const BASELINE: ChtMode = ChtMode::TrueCv;
const VARIANT: ChtMode = ChtMode::Crisp;

/// Counts of better, worse and equal verdicts.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Totals {
    pub better: usize,
    pub worse: usize,
    pub equal: usize,
}

impl Totals {
    pub fn of<'a>(rows: impl IntoIterator<Item = &'a ComparisonSummary>) -> Self {
        let mut t = Totals::default();
        for r in rows {
            match r.verdict {
                Verdict::Better => t.better += 1,
                Verdict::Worse => t.worse += 1,
                Verdict::Equal => t.equal += 1,
            }
        }
        t
    }

    pub fn total(&self) -> usize {
        self.better + self.worse + self.equal
    }

    pub fn equal_fraction(&self) -> f64 {
        if self.total() == 0 {
            return 1.0;
        }
        self.equal as f64 / self.total() as f64
    }
}

impl std::fmt::Display for Totals {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}/{}/{}", self.better, self.worse, self.equal)
    }
}

/// Which group a problem belongs to in the summary.
fn suite(problem: &str) -> &'static str {
    if problem.parse::<Family>().is_ok() {
        "C-DTLZ/DC-DTLZ"
    } else if registry_lookup(problem).is_ok() {
        "RWCMOP"
    } else {
        "external"
    }
}

/// Table row order: by M, then synthetic problems in suite order, then the rest by name.
fn row_order(problem: &str, m: usize) -> (usize, usize, String) {
    let family_rank = Family::ALL
        .iter()
        .position(|f| f.name() == problem)
        .unwrap_or(Family::ALL.len());
    (m, family_rank, problem.to_string())
}

/// Builds every comparison the store supports for the configured algorithms and metrics.
pub fn comparisons(cfg: &ExperimentConfig, store: &ResultStore) -> Result<Vec<ComparisonSummary>> {
    ensure!(
        cfg.modes.contains(&BASELINE) && cfg.modes.contains(&VARIANT),
        "tables compare the `true` and `crisp` modes; the config must list both"
    );
    // (algorithm, metric, problem order) -> mode -> seed -> value
    type Samples = BTreeMap<String, BTreeMap<u64, f64>>;
    type Group = (String, String, (usize, usize, String));
    let mut grouped: BTreeMap<Group, Samples> = BTreeMap::new();
    for r in store.records() {
        grouped
            .entry((
                r.cell.algorithm.clone(),
                r.metric.clone(),
                row_order(&r.cell.problem, r.cell.m),
            ))
            .or_default()
            .entry(r.cell.cht_mode.clone())
            .or_default()
            .insert(r.cell.seed, r.value);
    }
    let mut out = Vec::new();
    for &algorithm in &cfg.algorithms {
        for &metric in &cfg.metrics {
            for ((alg, met, (m, _, problem)), samples) in &grouped {
                if alg != algorithm.name() || met != metric.as_str() {
                    continue;
                }
                let (Some(base), Some(var)) = (
                    samples.get(BASELINE.as_str()),
                    samples.get(VARIANT.as_str()),
                ) else {
                    continue;
                };
                let (x, y): (Vec<f64>, Vec<f64>) = match cfg.test {
                    TestKind::SignedRank => base
                        .iter()
                        .filter_map(|(seed, &b)| var.get(seed).map(|&v| (b, v)))
                        .unzip(),
                    TestKind::RankSum => (
                        base.values().copied().collect(),
                        var.values().copied().collect(),
                    ),
                };
                if x.is_empty() || y.is_empty() {
                    continue;
                }
                out.push(ComparisonSummary::new(
                    problem,
                    *m,
                    metric,
                    algorithm.name(),
                    algorithm.name(),
                    &x,
                    &y,
                    cfg.test,
                ));
            }
        }
    }
    Ok(out)
}

fn select(
    rows: &[ComparisonSummary],
    algorithm: AlgorithmKind,
    metric: MetricKind,
) -> Vec<&ComparisonSummary> {
    rows.iter()
        .filter(|r| r.baseline == algorithm.name() && r.metric == metric)
        .collect()
}

/// One per-(algorithm, metric) table in plain text.
pub fn render_table(
    algorithm: AlgorithmKind,
    metric: MetricKind,
    rows: &[&ComparisonSummary],
) -> String {
    let name = algorithm.name();
    let variant_header = format!("{name} (crisp)");
    let baseline_header = format!("{name} (true CV)");
    let cells: Vec<(String, String)> = rows
        .iter()
        .map(|r| {
            (
                format!(
                    "{} {}",
                    median_iqr_cell(r.variant_median, r.variant_iqr),
                    r.verdict.symbol()
                ),
                median_iqr_cell(r.baseline_median, r.baseline_iqr),
            )
        })
        .collect();
    let pw = rows
        .iter()
        .map(|r| r.problem.len())
        .chain([7])
        .max()
        .unwrap_or(7);
    let vw = cells
        .iter()
        .map(|c| c.0.len())
        .chain([variant_header.len()])
        .max()
        .unwrap_or(0);
    let mut s = String::new();
    let _ = writeln!(
        s,
        "{metric}: {name} against its crisp variant (median (IQR))"
    );
    let _ = writeln!(
        s,
        "{:pw$}  {:>2}  {:vw$}  {}",
        "Problem", "M", variant_header, baseline_header
    );
    for (r, (v, b)) in rows.iter().zip(&cells) {
        let _ = writeln!(s, "{:pw$}  {:>2}  {:vw$}  {}", r.problem, r.m, v, b);
    }
    let _ = writeln!(
        s,
        "{:pw$}  {:>2}  {}",
        "+/-/=",
        "",
        Totals::of(rows.iter().copied())
    );
    s.push_str("+, - and = mean the true-CV algorithm is significantly better than, worse than, or equivalent to its crisp variant.\n");
    s
}

/// The cross-algorithm summary: "+/-/=" totals per suite and metric, and A12 shares.
pub fn render_summary(cfg: &ExperimentConfig, rows: &[ComparisonSummary]) -> String {
    let mut s = String::new();
    let names: Vec<&str> = cfg.algorithms.iter().map(|a| a.name()).collect();
    let _ = writeln!(s, "Wilcoxon test summary (+/-/=), true CV against crisp");
    let _ = writeln!(
        s,
        "{:16}  {:7}  {}",
        "Problems",
        "Metric",
        names.iter().map(|n| format!("{n:>11}")).collect::<String>()
    );
    let mut suites: Vec<&str> = rows.iter().map(|r| suite(&r.problem)).collect();
    suites.sort();
    suites.dedup();
    for su in &suites {
        for &metric in &cfg.metrics {
            let mut line = format!("{su:16}  {:7}", metric.as_str());
            let mut any = false;
            for &alg in &cfg.algorithms {
                let sel: Vec<&ComparisonSummary> = select(rows, alg, metric)
                    .into_iter()
                    .filter(|r| suite(&r.problem) == *su)
                    .collect();
                any |= !sel.is_empty();
                let _ = write!(line, "{:>11}", Totals::of(sel).to_string());
            }
            if any {
                let _ = writeln!(s, "{line}");
            }
        }
    }
    let _ = writeln!(s);
    let _ = writeln!(
        s,
        "A12 effect sizes (share of comparisons: equal/small/medium/large)"
    );
    for &alg in &cfg.algorithms {
        for &metric in &cfg.metrics {
            let sel = select(rows, alg, metric);
            if sel.is_empty() {
                continue;
            }
            let share = |c: A12Category| {
                100.0 * sel.iter().filter(|r| r.a12_category == c).count() as f64 / sel.len() as f64
            };
            let _ = writeln!(
                s,
                "{:11}  {:5}  {:5.1}% {:5.1}% {:5.1}% {:5.1}%",
                alg.name(),
                metric.as_str(),
                share(A12Category::Equal),
                share(A12Category::Small),
                share(A12Category::Medium),
                share(A12Category::Large)
            );
        }
    }
    s
}

fn comparisons_csv(rows: &[ComparisonSummary]) -> Result<Vec<u8>> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record([
        "problem",
        "M",
        "algorithm",
        "metric",
        "true_median",
        "true_iqr",
        "crisp_median",
        "crisp_iqr",
        "verdict",
        "p_value",
        "a12",
        "a12_category",
    ])?;
    for r in rows {
        w.write_record([
            r.problem.clone(),
            r.m.to_string(),
            r.baseline.clone(),
            r.metric.as_str().to_string(),
            store_value(r.baseline_median),
            store_value(r.baseline_iqr),
            store_value(r.variant_median),
            store_value(r.variant_iqr),
            r.verdict.symbol().to_string(),
            store_value(r.p_value),
            store_value(r.a12),
            r.a12_category.as_str().to_string(),
        ])?;
    }
    Ok(w.into_inner().map_err(|e| e.into_error())?)
}

/// File name for one table; the slash in "C-MOEA/D" is dropped.
pub fn table_file_name(algorithm: AlgorithmKind, metric: MetricKind) -> String {
    let alg: String = algorithm
        .name()
        .chars()
        .filter(|c| c.is_ascii_alphanumeric() || *c == '-')
        .collect();
    let met = metric.as_str().replace('+', "plus");
    format!("{met}_{alg}.txt")
}

#[derive(Clone, Debug)]
pub struct TableSet {
    pub comparisons: Vec<ComparisonSummary>,
    pub files: Vec<PathBuf>,
}

/// Reads the store in `out` and writes all tables under `out/tables`.
pub fn emit_tables(cfg: &ExperimentConfig, out: &Path) -> Result<TableSet> {
    let store = ResultStore::load(out)?;
    ensure!(
        !store.is_empty(),
        "no results in {}; run the experiment first",
        out.display()
    );
    let rows = comparisons(cfg, &store)?;
    let dir = out.join(TABLES_DIR);
    fs::create_dir_all(&dir)?;
    let mut files = Vec::new();
    for &alg in &cfg.algorithms {
        for &metric in &cfg.metrics {
            let sel = select(&rows, alg, metric);
            if sel.is_empty() {
                continue;
            }
            let path = dir.join(table_file_name(alg, metric));
            fs::write(&path, render_table(alg, metric, &sel))?;
            files.push(path);
        }
    }
    let summary = dir.join(SUMMARY_FILE);
    fs::write(&summary, render_summary(cfg, &rows))?;
    files.push(summary);
    let csv_path = dir.join(COMPARISONS_FILE);
    fs::write(&csv_path, comparisons_csv(&rows)?)?;
    files.push(csv_path);
    Ok(TableSet {
        comparisons: rows,
        files,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::store::{CellKey, Record};

    fn store_with(base: &[f64], var: &[f64]) -> ResultStore {
        let mut s = ResultStore::default();
        for (mode, sample) in [("true", base), ("crisp", var)] {
            for (i, &v) in sample.iter().enumerate() {
                s.insert(Record {
                    cell: CellKey {
                        problem: "C1-DTLZ1".into(),
                        m: 2,
                        algorithm: "C-NSGA-II".into(),
                        cht_mode: mode.into(),
                        seed: i as u64 + 1,
                    },
                    metric: "IGD".into(),
                    value: v,
                    failed: false,
                    evals: 10,
                    wall_ms: 0,
                });
            }
        }
        s
    }

    fn cfg() -> ExperimentConfig {
        ExperimentConfig::parse("algorithms = [\"C-NSGA-II\"]\nmetrics = [\"IGD\"]").unwrap()
    }

    #[test]
    fn identical_samples_are_all_equal() {
        let x: Vec<f64> = (0..11).map(|i| 1.0 + i as f64).collect();
        let rows = comparisons(&cfg(), &store_with(&x, &x)).unwrap();
        assert_eq!(rows.len(), 1);
        assert_eq!(Totals::of(&rows).to_string(), "0/0/1");
    }

    #[test]
    fn shifted_samples_get_the_expected_mark() {
        let x: Vec<f64> = (0..11).map(|i| 1.0 + i as f64 * 0.1).collect();
        let worse: Vec<f64> = x.iter().map(|v| v + 5.0).collect();
        // lower IGD is better: true CV below crisp is '+'
        let rows = comparisons(&cfg(), &store_with(&x, &worse)).unwrap();
        assert_eq!(rows[0].verdict, Verdict::Better);
        let rows = comparisons(&cfg(), &store_with(&worse, &x)).unwrap();
        assert_eq!(rows[0].verdict, Verdict::Worse);
        let text = render_table(
            AlgorithmKind::CNsga2,
            MetricKind::Igd,
            &rows.iter().collect::<Vec<_>>(),
        );
        assert!(text.contains("1.5000e+0 (5.00e-1) -"), "{text}");
        assert!(text.contains("0/1/0"), "{text}");
    }

    #[test]
    fn file_names() {
        assert_eq!(
            table_file_name(AlgorithmKind::CMoead, MetricKind::IgdPlus),
            "IGDplus_C-MOEAD.txt"
        );
    }
}
