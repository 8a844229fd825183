//! Experiment configuration: which problems, algorithms, modes and seeds to run.
//!
//! Configs are TOML. With no `--config`, the embedded default grid is used; the
//! desk preset narrows any config to M in {2, 3} and 11 repetitions.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use anyhow::{bail, ensure, Context, Result};
use serde::Deserialize;

use cmoea::algorithms::AlgorithmKind;
use cmoea::benchmarks::{
    registry_lookup, rwmop_population_size, BenchmarkId, Family, DEFAULT_FRONT_SIZE,
};
use cmoea::cht::ChtMode;
use cmoea::metrics::{MetricKind, MC_SAMPLES};
use cmoea::stats::TestKind;

/// The full synthetic grid: ten problems, M in {2, 3, 5, 10}, 31 repetitions.
pub const DEFAULT_CONFIG: &str = include_str!("default.toml");

pub const DESK_OBJECTIVES: [usize; 2] = [2, 3];
pub const DESK_REPEATS: u64 = 11;

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    #[serde(default = "default_seed_base")]
    seed_base: u64,
    #[serde(default = "default_repeats")]
    repeats: u64,
    #[serde(default = "default_algorithms")]
    algorithms: Vec<String>,
    #[serde(default = "default_modes")]
    modes: Vec<String>,
    #[serde(default = "default_metrics")]
    metrics: Vec<String>,
    #[serde(default = "default_front_size")]
    front_size: usize,
    #[serde(default = "default_hv_samples")]
    hv_samples: usize,
    #[serde(default)]
    test: Option<String>,
    #[serde(default)]
    problems: Vec<RawProblem>,
    #[serde(default)]
    plugins: Vec<RawPlugin>,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawProblem {
    name: String,
    m: Vec<usize>,
    /// Per-M budget overrides, keyed by M as a string.
    #[serde(default)]
    budget: BTreeMap<String, u64>,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawPlugin {
    name: String,
    command: String,
    #[serde(default)]
    args: Vec<String>,
    m: Option<usize>,
    n: Option<usize>,
    ng: Option<usize>,
    nh: Option<usize>,
    budget: Option<u64>,
    population: Option<usize>,
    lower: Vec<f64>,
    upper: Vec<f64>,
    ideal: Vec<f64>,
    nadir: Vec<f64>,
}

fn default_seed_base() -> u64 {
    1
}
fn default_repeats() -> u64 {
    31
}
fn default_algorithms() -> Vec<String> {
    AlgorithmKind::ALL
        .iter()
        .map(|a| a.name().to_string())
        .collect()
}
fn default_modes() -> Vec<String> {
    ChtMode::ALL
        .iter()
        .map(|m| m.as_str().to_string())
        .collect()
}
fn default_metrics() -> Vec<String> {
    MetricKind::ALL
        .iter()
        .map(|m| m.as_str().to_string())
        .collect()
}
fn default_front_size() -> usize {
    DEFAULT_FRONT_SIZE
}
fn default_hv_samples() -> usize {
    MC_SAMPLES
}

/// A synthetic benchmark cell axis: one problem at one objective count.
#[derive(Clone, Debug, PartialEq)]
pub struct SyntheticEntry {
    pub id: BenchmarkId,
    pub budget: u64,
}

/// An externally evaluated problem speaking the line protocol.
#[derive(Clone, Debug, PartialEq)]
pub struct PluginEntry {
    pub name: String,
    pub command: String,
    pub args: Vec<String>,
    pub m: usize,
    pub n: usize,
    pub ng: usize,
    pub nh: usize,
    pub budget: u64,
    pub population: usize,
    pub lower: Vec<f64>,
    pub upper: Vec<f64>,
    pub ideal: Vec<f64>,
    pub nadir: Vec<f64>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ExperimentConfig {
    pub seed_base: u64,
    pub repeats: u64,
    pub algorithms: Vec<AlgorithmKind>,
    pub modes: Vec<ChtMode>,
    pub metrics: Vec<MetricKind>,
    pub front_size: usize,
    pub hv_samples: usize,
    pub test: TestKind,
    pub synthetic: Vec<SyntheticEntry>,
    pub plugins: Vec<PluginEntry>,
}

impl ExperimentConfig {
    pub fn parse(text: &str) -> Result<Self> {
        let raw: RawConfig = toml::from_str(text).context("invalid experiment config")?;
        Self::from_raw(raw)
    }

    pub fn load(path: Option<&Path>) -> Result<Self> {
        match path {
            Some(p) => {
                let text = std::fs::read_to_string(p)
                    .with_context(|| format!("reading {}", p.display()))?;
                Self::parse(&text)
            }
            None => Self::parse(DEFAULT_CONFIG),
        }
    }

    fn from_raw(raw: RawConfig) -> Result<Self> {
        ensure!(raw.repeats >= 1, "repeats must be at least 1");
        ensure!(raw.front_size >= 2, "front_size must be at least 2");
        let algorithms = raw
            .algorithms
            .iter()
            .map(|a| a.parse::<AlgorithmKind>().map_err(anyhow::Error::msg))
            .collect::<Result<Vec<_>>>()?;
        let modes = raw
            .modes
            .iter()
            .map(|m| m.parse::<ChtMode>().map_err(anyhow::Error::msg))
            .collect::<Result<Vec<_>>>()?;
        let metrics = raw
            .metrics
            .iter()
            .map(|m| m.parse::<MetricKind>().map_err(anyhow::Error::msg))
            .collect::<Result<Vec<_>>>()?;
        let test = match raw.test.as_deref() {
            None | Some("signed-rank") => TestKind::SignedRank,
            Some("rank-sum") => TestKind::RankSum,
            Some(other) => bail!("unknown test `{other}` (expected signed-rank or rank-sum)"),
        };

        let mut synthetic = Vec::new();
        for p in &raw.problems {
            let family: Family = p.name.parse()?;
            for key in p.budget.keys() {
                let m: usize = key
                    .parse()
                    .with_context(|| format!("budget key `{key}` of {} is not an M", p.name))?;
                ensure!(
                    p.m.contains(&m),
                    "{} has a budget for M={m} which is not run",
                    p.name
                );
            }
            for &m in &p.m {
                let id = BenchmarkId::new(family, m)?;
                let budget = match p.budget.get(&m.to_string()) {
                    Some(&b) => b,
                    None => id.budget().with_context(|| {
                        format!("{id} has no scheduled budget; set one under [problems.budget]")
                    })?,
                };
                synthetic.push(SyntheticEntry { id, budget });
            }
        }
        let plugins = raw
            .plugins
            .into_iter()
            .map(plugin_entry)
            .collect::<Result<Vec<_>>>()?;
        Ok(Self {
            seed_base: raw.seed_base,
            repeats: raw.repeats,
            algorithms,
            modes,
            metrics,
            front_size: raw.front_size,
            hv_samples: raw.hv_samples,
            test,
            synthetic,
            plugins,
        })
    }

    /// Restricts to M in {2, 3} and 11 repetitions. Plugins are kept.
    pub fn desk(mut self) -> Self {
        self.synthetic.retain(|e| DESK_OBJECTIVES.contains(&e.id.m));
        self.repeats = DESK_REPEATS;
        self
    }

    pub fn with_seed_base(mut self, seed_base: u64) -> Self {
        self.seed_base = seed_base;
        self
    }
}

/// Fills plugin dimensions from the registry and checks them against it.
fn plugin_entry(p: RawPlugin) -> Result<PluginEntry> {
    let registered = registry_lookup(&p.name).ok();
    let pick = |given: Option<usize>, known: Option<usize>, field: &str| -> Result<usize> {
        match (given, known) {
            (Some(g), Some(k)) if g != k => {
                bail!("plugin {}: {field} = {g} but the registry says {k}", p.name)
            }
            (Some(g), _) => Ok(g),
            (None, Some(k)) => Ok(k),
            (None, None) => bail!(
                "plugin {}: `{field}` is required for problems outside the registry",
                p.name
            ),
        }
    };
    let m = pick(p.m, registered.map(|r| r.m), "m")?;
    let n = pick(p.n, registered.map(|r| r.d), "n")?;
    let ng = pick(p.ng, registered.map(|r| r.ng), "ng")?;
    let nh = pick(p.nh, registered.map(|r| r.nh), "nh")?;
    let budget = match (p.budget, registered) {
        (Some(b), _) => b,
        (None, Some(r)) => r.mfe,
        (None, None) => bail!(
            "plugin {}: `budget` is required for problems outside the registry",
            p.name
        ),
    };
    let population = match p.population.or_else(|| rwmop_population_size(m)) {
        Some(n) => n,
        None => bail!("plugin {}: `population` is required for m = {m}", p.name),
    };
    ensure!(
        p.lower.len() == n && p.upper.len() == n,
        "plugin {}: bounds must have {n} entries",
        p.name
    );
    ensure!(
        p.lower.iter().zip(&p.upper).all(|(l, u)| l < u),
        "plugin {}: every lower bound must be below its upper bound",
        p.name
    );
    ensure!(
        p.ideal.len() == m && p.nadir.len() == m,
        "plugin {}: ideal and nadir need {m} entries",
        p.name
    );
    Ok(PluginEntry {
        name: p.name,
        command: p.command,
        args: p.args,
        m,
        n,
        ng,
        nh,
        budget,
        population,
        lower: p.lower,
        upper: p.upper,
        ideal: p.ideal,
        nadir: p.nadir,
    })
}

/// Default output directory.
pub fn default_out_dir() -> PathBuf {
    PathBuf::from("results")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_grid() {
        let cfg = ExperimentConfig::load(None).unwrap();
        assert_eq!(cfg.synthetic.len(), 40);
        assert_eq!(cfg.repeats, 31);
        assert_eq!(cfg.algorithms.len(), 4);
        assert_eq!(cfg.modes, vec![ChtMode::TrueCv, ChtMode::Crisp]);
        let desk = cfg.desk();
        assert_eq!(desk.synthetic.len(), 20);
        assert_eq!(desk.repeats, 11);
    }

    #[test]
    fn budget_overrides_and_errors() {
        let cfg = ExperimentConfig::parse(
            r#"
            repeats = 2
            [[problems]]
            name = "C1-DTLZ1"
            m = [2, 4]
            budget = { "4" = 1000 }
            "#,
        )
        .unwrap();
        assert_eq!(cfg.synthetic[0].budget, 500 * 91);
        assert_eq!(cfg.synthetic[1].budget, 1000);
        assert!(ExperimentConfig::parse("[[problems]]\nname = \"C1-DTLZ1\"\nm = [4]").is_err());
        assert!(ExperimentConfig::parse("repeats = 0").is_err());
        assert!(ExperimentConfig::parse("algorithms = [\"SPEA2\"]").is_err());
        assert!(ExperimentConfig::parse("colour = 3").is_err());
    }

    #[test]
    fn plugin_dimensions_come_from_the_registry() {
        let cfg = ExperimentConfig::parse(
            r#"
            [[plugins]]
            name = "RWMOP7"
            command = "solver"
            lower = [0, 0, 0, 0]
            upper = [1, 1, 1, 1]
            ideal = [0, 0]
            nadir = [1, 1]
            "#,
        )
        .unwrap();
        let p = &cfg.plugins[0];
        assert_eq!(
            (p.m, p.n, p.ng, p.nh, p.budget, p.population),
            (2, 4, 1, 0, 20000, 80)
        );
        let wrong = ExperimentConfig::parse(
            r#"
            [[plugins]]
            name = "RWMOP7"
            command = "solver"
            n = 5
            lower = [0, 0, 0, 0, 0]
            upper = [1, 1, 1, 1, 1]
            ideal = [0, 0]
            nadir = [1, 1]
            "#,
        );
        assert!(wrong.is_err());
    }
}
