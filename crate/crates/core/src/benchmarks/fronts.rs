//! Reference fronts: generation, the on-disk `.pf` format, and caching.
//!
//! Points are laid on the unconstrained Pareto front (the simplex
//! `sum f = 0.5` or the unit sphere), mapped back to position variables with
//! every distance variable at 0.5, and kept only when the problem's own
//! constraints accept them. C3-DTLZ4 is the exception: its front lies on the
//! constraint boundary, so it is written down directly.

use std::fs;
use std::io::{self, BufRead, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::sync::atomic::{AtomicU64, Ordering};

use thiserror::Error;

use crate::model::pareto_dominates;
use crate::scalar::Scalar;
use crate::variation::das_dennis;

use super::{dtlz, BenchmarkId, Family};

/// Target number of points before constraint filtering.
pub const DEFAULT_FRONT_SIZE: usize = 5000;

/// Slack granted to boundary points when checking constraints.
const BOUNDARY_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Error)]
pub enum FrontError {
    #[error(transparent)]
    Io(#[from] io::Error),
    #[error("line {line}: cannot parse `{token}` as a number")]
    Parse { line: usize, token: String },
    #[error("line {line}: expected {expected} values, found {found}")]
    Ragged {
        line: usize,
        expected: usize,
        found: usize,
    },
}

/// `<problem>_M<m>.pf`
pub fn front_file_name(problem: &str, m: usize) -> String {
    format!("{problem}_M{m}.pf")
}

fn binomial(n: usize, k: usize) -> usize {
    (0..k).fold(1usize, |acc, i| acc.saturating_mul(n - i) / (i + 1))
}

/// Lattice divisions: exactly `size` points for two objectives, otherwise the
/// densest lattice that does not exceed `size`.
fn divisions(m: usize, size: usize) -> usize {
    if m == 2 {
        return size.saturating_sub(1).max(1);
    }
    let mut h = 1;
    while binomial(h + 1 + m - 1, m - 1) <= size {
        h += 1;
    }
    h
}

/// Position variables of a point on the linear front `sum f = 0.5`.
fn invert_linear(f: &[f64]) -> Vec<f64> {
    let m = f.len();
    let mut scale = 0.5;
    let mut x = Vec::with_capacity(m - 1);
    for i in 0..m - 1 {
        let xi = if scale > 0.0 {
            (1.0 - f[m - 1 - i] / scale).clamp(0.0, 1.0)
        } else {
            0.0
        };
        scale *= xi;
        x.push(xi);
    }
    x
}

/// Position variables of a point on the unit sphere.
fn invert_sphere(f: &[f64]) -> Vec<f64> {
    let m = f.len();
    (0..m - 1)
        .map(|i| {
            let j = m - 1 - i;
            let rest = f[..j].iter().map(|v| v * v).sum::<f64>().sqrt();
            (f[j].atan2(rest) / std::f64::consts::FRAC_PI_2).clamp(0.0, 1.0)
        })
        .collect()
}

fn nondominated(points: Vec<Vec<f64>>) -> Vec<Vec<f64>> {
    let keep: Vec<bool> = points
        .iter()
        .map(|p| !points.iter().any(|q| pareto_dominates(q, p)))
        .collect();
    points
        .into_iter()
        .zip(keep)
        .filter_map(|(p, k)| k.then_some(p))
        .collect()
}

fn generate(id: BenchmarkId, size: usize) -> Vec<Vec<f64>> {
    let m = id.m;
    let lattice = das_dennis::<f64>(m, divisions(m, size)).vectors;
    let points: Vec<Vec<f64>> = match id.family {
        Family::C3Dtlz4 => lattice
            .into_iter()
            .map(|w| {
                let total: f64 = w.iter().map(|v| v * v).sum();
                let peak = w.iter().fold(0.0f64, |a, v| a.max(v * v));
                let r = (total - 0.75 * peak).sqrt();
                w.iter().map(|v| v / r).collect()
            })
            .collect(),
        family => lattice
            .into_iter()
            .filter_map(|w| {
                let mut x = if family.is_linear() {
                    invert_linear(&w.iter().map(|v| 0.5 * v).collect::<Vec<_>>())
                } else {
                    let norm = w.iter().map(|v| v * v).sum::<f64>().sqrt();
                    invert_sphere(&w.iter().map(|v| v / norm).collect::<Vec<_>>())
                };
                x.resize(id.n(), 0.5);
                let (f, c) = dtlz::evaluate(family, m, &x);
                c.iter().all(|&v| v <= BOUNDARY_TOLERANCE).then_some(f)
            })
            .collect(),
    };
    nondominated(points)
}

/// Reference front of `id` with roughly `size` points before filtering.
pub fn reference_front<T: Scalar>(id: BenchmarkId, size: usize) -> Vec<Vec<T>> {
    generate(id, size)
        .into_iter()
        .map(|p| p.into_iter().map(T::lit).collect())
        .collect()
}

/// Writes one space-separated vector per line.
pub fn write_front<T: Scalar>(path: &Path, points: &[Vec<T>]) -> io::Result<()> {
    let mut out = BufWriter::new(fs::File::create(path)?);
    for p in points {
        let line: Vec<String> = p.iter().map(|v| v.to_string()).collect();
        writeln!(out, "{}", line.join(" "))?;
    }
    out.flush()
}

/// Reads a `.pf` file; blank lines are skipped and every row must have the same width.
pub fn read_front<T: Scalar>(path: &Path) -> Result<Vec<Vec<T>>, FrontError> {
    let reader = io::BufReader::new(fs::File::open(path)?);
    let mut points: Vec<Vec<T>> = Vec::new();
    for (i, line) in reader.lines().enumerate() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let row = line
            .split_whitespace()
            .map(|tok| {
                tok.parse::<f64>()
                    .map(T::lit)
                    .map_err(|_| FrontError::Parse {
                        line: i + 1,
                        token: tok.to_string(),
                    })
            })
            .collect::<Result<Vec<T>, _>>()?;
        if let Some(first) = points.first() {
            if first.len() != row.len() {
                return Err(FrontError::Ragged {
                    line: i + 1,
                    expected: first.len(),
                    found: row.len(),
                });
            }
        }
        points.push(row);
    }
    Ok(points)
}

static TEMP_COUNTER: AtomicU64 = AtomicU64::new(0);

/// Returns the cached front in `dir`, generating and storing it on a miss.
///
/// The file is written under a temporary name and renamed into place, so
/// concurrent callers never observe a partial file.
pub fn load_or_generate_front<T: Scalar>(
    dir: &Path,
    id: BenchmarkId,
    size: usize,
) -> Result<Vec<Vec<T>>, FrontError> {
    let path = dir.join(front_file_name(id.family.name(), id.m));
    if path.exists() {
        return read_front(&path);
    }
    fs::create_dir_all(dir)?;
    let points = generate(id, size);
    let tmp: PathBuf = dir.join(format!(
        ".{}.{}.{}.tmp",
        front_file_name(id.family.name(), id.m),
        std::process::id(),
        TEMP_COUNTER.fetch_add(1, Ordering::Relaxed)
    ));
    write_front(&tmp, &points)?;
    fs::rename(&tmp, &path)?;
    Ok(points
        .into_iter()
        .map(|p| p.into_iter().map(T::lit).collect())
        .collect())
}
