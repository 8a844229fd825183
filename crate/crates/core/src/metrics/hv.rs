//! Hypervolume: exact dimension sweep for few objectives, Monte Carlo otherwise.

use crate::model::RngStream;

/// Largest objective count handled by the exact algorithm.
pub const EXACT_MAX_OBJECTIVES: usize = 4;

/// Default number of Monte Carlo samples.
pub const MC_SAMPLES: usize = 1_000_000;

/// Exact hypervolume dominated by `points` and bounded by `reference`.
///
/// Points that do not strictly dominate the reference point contribute nothing.
/// Slices along the last objective and recurses; two objectives use a sweep.
pub fn hypervolume_exact(points: &[Vec<f64>], reference: &[f64]) -> f64 {
    let inside: Vec<&[f64]> = points
        .iter()
        .filter(|p| p.iter().zip(reference).all(|(a, r)| a < r))
        .map(Vec::as_slice)
        .collect();
    sweep(inside, reference)
}

fn sweep(mut points: Vec<&[f64]>, reference: &[f64]) -> f64 {
    let d = reference.len();
    if points.is_empty() {
        return 0.0;
    }
    match d {
        1 => reference[0] - points.iter().map(|p| p[0]).fold(f64::INFINITY, f64::min),
        2 => {
            points.sort_by(|a, b| a[0].total_cmp(&b[0]).then(a[1].total_cmp(&b[1])));
            let mut floor = reference[1];
            let mut area = 0.0;
            for p in points {
                if p[1] < floor {
                    area += (reference[0] - p[0]) * (floor - p[1]);
                    floor = p[1];
                }
            }
            area
        }
        _ => {
            let last = d - 1;
            points.sort_by(|a, b| a[last].total_cmp(&b[last]));
            let mut volume = 0.0;
            for i in 0..points.len() {
                let top = points.get(i + 1).map_or(reference[last], |p| p[last]);
                let height = top - points[i][last];
                if height > 0.0 {
                    let slice: Vec<&[f64]> = points[..=i].iter().map(|p| &p[..last]).collect();
                    volume += height * sweep(slice, &reference[..last]);
                }
            }
            volume
        }
    }
}

/// Monte Carlo estimate over the box spanned by the points' minima and `reference`.
pub fn hypervolume_monte_carlo(
    points: &[Vec<f64>],
    reference: &[f64],
    samples: usize,
    seed: u64,
) -> f64 {
    let inside: Vec<&[f64]> = points
        .iter()
        .filter(|p| p.iter().zip(reference).all(|(a, r)| a < r))
        .map(Vec::as_slice)
        .collect();
    if inside.is_empty() || samples == 0 {
        return 0.0;
    }
    let lower: Vec<f64> = (0..reference.len())
        .map(|j| inside.iter().map(|p| p[j]).fold(f64::INFINITY, f64::min))
        .collect();
    let box_volume: f64 = lower.iter().zip(reference).map(|(l, r)| r - l).product();
    let mut rng = RngStream::new(seed);
    let mut sample = vec![0.0; reference.len()];
    let mut hits = 0usize;
    for _ in 0..samples {
        for (j, s) in sample.iter_mut().enumerate() {
            *s = lower[j] + rng.uniform() * (reference[j] - lower[j]);
        }
        if inside
            .iter()
            .any(|p| p.iter().zip(&sample).all(|(a, s)| a <= s))
        {
            hits += 1;
        }
    }
    box_volume * hits as f64 / samples as f64
}
