//! Plot-ready point clouds of single runs.
//!
//! Rows are `eval_index f1 .. fm cv class`, whitespace separated, with
//! `class` one of `feasible`, `infeasible` or `nondominated-final`. With the
//! trace on every evaluation appears once; the members of the final feasible
//! nondominated set are labelled `nondominated-final`. With the trace off only
//! the final population is written.

use std::collections::HashSet;
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};

use cmoea::algorithms::{AlgorithmKind, RunResult};
use cmoea::benchmarks::Family;
use cmoea::cht::ChtMode;
use cmoea::model::pareto_dominates;

use crate::config::ExperimentConfig;
use crate::format::store_value;
use crate::runner::{execute_run, Cell, ProblemRef};
use crate::store::{CellKey, ResultStore};

pub const SCATTER_DIR: &str = "scatter";

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PointClass {
    Feasible,
    Infeasible,
    NondominatedFinal,
}

impl PointClass {
    pub fn as_str(self) -> &'static str {
        match self {
            PointClass::Feasible => "feasible",
            PointClass::Infeasible => "infeasible",
            PointClass::NondominatedFinal => "nondominated-final",
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ScatterRow {
    pub eval_index: u64,
    pub f: Vec<f64>,
    pub cv: f64,
    pub class: PointClass,
}

fn feasibility(cv: f64) -> PointClass {
    if cv <= 0.0 {
        PointClass::Feasible
    } else {
        PointClass::Infeasible
    }
}

/// Classifies the points of a finished run.
pub fn scatter_rows(result: &RunResult<f64>) -> Vec<ScatterRow> {
    let members = &result.population.members;
    let feasible: Vec<_> = members.iter().filter(|s| s.is_feasible()).collect();
    let final_front: HashSet<u64> = feasible
        .iter()
        .filter(|s| !feasible.iter().any(|o| pareto_dominates(&o.f, &s.f)))
        .map(|s| s.eval_index)
        .collect();
    let class = |eval_index: u64, cv: f64| {
        if final_front.contains(&eval_index) {
            PointClass::NondominatedFinal
        } else {
            feasibility(cv)
        }
    };
    match &result.trace {
        Some(trace) => trace
            .iter()
            .map(|t| ScatterRow {
                eval_index: t.eval_index,
                f: t.f.clone(),
                cv: t.cv,
                class: class(t.eval_index, t.cv),
            })
            .collect(),
        None => members
            .iter()
            .map(|s| ScatterRow {
                eval_index: s.eval_index,
                f: s.f.clone(),
                cv: s.cv,
                class: if s.is_feasible() {
                    class(s.eval_index, s.cv)
                } else {
                    PointClass::Infeasible
                },
            })
            .collect(),
    }
}

pub fn render_rows(rows: &[ScatterRow], m: usize) -> String {
    let mut s = String::from("# eval_index");
    for j in 1..=m {
        let _ = write!(s, " f{j}");
    }
    s.push_str(" cv class\n");
    for r in rows {
        let _ = write!(s, "{}", r.eval_index);
        for v in &r.f {
            let _ = write!(s, " {}", store_value(*v));
        }
        let _ = writeln!(s, " {} {}", store_value(r.cv), r.class.as_str());
    }
    s
}

/// Which run to draw.
#[derive(Clone, Debug)]
pub struct ScatterRequest {
    pub problem: String,
    pub m: usize,
    pub algorithm: AlgorithmKind,
    pub mode: ChtMode,
    /// `None` picks the seed with the median IGD in the store.
    pub seed: Option<u64>,
    pub trace: bool,
}

/// Seed of the run with the median IGD (lower median on even counts).
pub fn median_seed(
    store: &ResultStore,
    problem: &str,
    m: usize,
    algorithm: &str,
    mode: &str,
) -> Option<u64> {
    let mut runs: Vec<(f64, u64)> = store
        .records()
        .filter(|r| {
            let c = &r.cell;
            r.metric == "IGD"
                && c.problem == problem
                && c.m == m
                && c.algorithm == algorithm
                && c.cht_mode == mode
        })
        .map(|r| (r.value, r.cell.seed))
        .collect();
    if runs.is_empty() {
        return None;
    }
    runs.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
    Some(runs[(runs.len() - 1) / 2].1)
}

fn file_name(key: &CellKey) -> String {
    let alg: String = key
        .algorithm
        .chars()
        .filter(|c| c.is_ascii_alphanumeric() || *c == '-')
        .collect();
    format!(
        "{}_M{}_{}_{}_seed{}.dat",
        key.problem, key.m, alg, key.cht_mode, key.seed
    )
}

/// Re-runs the requested cell and writes its scatter file under `out/scatter`.
pub fn emit_scatter(cfg: &ExperimentConfig, out: &Path, req: &ScatterRequest) -> Result<PathBuf> {
    let problem = if let Ok(family) = req.problem.parse::<Family>() {
        match cfg
            .synthetic
            .iter()
            .find(|e| e.id.family == family && e.id.m == req.m)
        {
            Some(e) => ProblemRef::Synthetic(e),
            None => bail!("{} with M={} is not in the config", req.problem, req.m),
        }
    } else {
        match cfg
            .plugins
            .iter()
            .find(|p| p.name.eq_ignore_ascii_case(&req.problem) && p.m == req.m)
        {
            Some(p) => ProblemRef::Plugin(p),
            None => bail!("{} with M={} is not in the config", req.problem, req.m),
        }
    };
    let seed = match req.seed {
        Some(s) => s,
        None => {
            let store = ResultStore::load(out)?;
            median_seed(
                &store,
                &problem.name(),
                req.m,
                req.algorithm.name(),
                req.mode.as_str(),
            )
            .with_context(|| "no IGD results for this run in the store; pass --seed")?
        }
    };
    let cell = Cell {
        problem,
        algorithm: req.algorithm,
        mode: req.mode,
        seed,
    };
    let result = execute_run(&cell, req.trace)?;
    let rows = scatter_rows(&result);
    let dir = out.join(SCATTER_DIR);
    fs::create_dir_all(&dir)?;
    let path = dir.join(file_name(&cell.key()));
    fs::write(&path, render_rows(&rows, req.m))?;
    Ok(path)
}

#[cfg(test)]
mod tests {
    use super::*;
    use cmoea::model::{Population, Solution, TraceEntry};

    fn sol(f: Vec<f64>, cv: f64, eval_index: u64) -> Solution<f64> {
        Solution {
            x: vec![],
            f,
            c: vec![cv],
            cv,
            effective_cv: cv,
            eval_index,
        }
    }

    #[test]
    fn classes_follow_cv_and_final_front() {
        let members = vec![
            sol(vec![1.0, 1.0], 0.0, 3),
            sol(vec![2.0, 2.0], 0.0, 4),
            sol(vec![0.0, 0.0], 0.5, 5),
        ];
        let trace: Vec<TraceEntry<f64>> = (1..=5)
            .map(|i| TraceEntry {
                eval_index: i,
                f: vec![i as f64, 0.0],
                cv: if i == 5 || i == 1 { 0.5 } else { 0.0 },
            })
            .collect();
        let mut result = RunResult {
            population: Population::new(members, 3),
            trace: Some(trace),
            evaluations: 5,
        };
        let rows = scatter_rows(&result);
        assert_eq!(rows.len(), 5);
        let classes: Vec<_> = rows.iter().map(|r| r.class).collect();
        assert_eq!(
            classes,
            vec![
                PointClass::Infeasible,
                PointClass::Feasible,
                PointClass::NondominatedFinal,
                PointClass::Feasible,
                PointClass::Infeasible
            ]
        );
        result.trace = None;
        let rows = scatter_rows(&result);
        assert_eq!(rows.len(), 3);
        assert_eq!(rows[2].class, PointClass::Infeasible);
        let text = render_rows(&rows, 2);
        assert!(text.starts_with(
            "# eval_index f1 f2 cv class\n3 1.00000e+0 1.00000e+0 0.00000e+0 nondominated-final\n"
        ));
    }
}
