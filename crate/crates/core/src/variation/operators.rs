use thiserror::Error;

use crate::model::RngStream;
use crate::scalar::Scalar;

const SAME_VALUE_EPS: f64 = 1e-14;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum VariationError {
    #[error("probability `{0}` = {1} is outside [0, 1]")]
    Probability(&'static str, f64),
    #[error("distribution index `{0}` = {1} must be positive")]
    DistributionIndex(&'static str, f64),
}

/// Parameters of simulated binary crossover and polynomial mutation.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct VariationConfig {
    /// Probability that a pair of parents is recombined at all.
    pub pc: f64,
    pub eta_c: f64,
    /// Per-variable mutation probability; `None` means `1 / n`.
    pub pm: Option<f64>,
    pub eta_m: f64,
}

impl Default for VariationConfig {
    fn default() -> Self {
        Self {
            pc: 1.0,
            eta_c: 30.0,
            pm: None,
            eta_m: 20.0,
        }
    }
}

impl VariationConfig {
    pub fn validate(&self) -> Result<(), VariationError> {
        if !(0.0..=1.0).contains(&self.pc) {
            return Err(VariationError::Probability("pc", self.pc));
        }
        if let Some(pm) = self.pm {
            if !(0.0..=1.0).contains(&pm) {
                return Err(VariationError::Probability("pm", pm));
            }
        }
        if !(self.eta_c > 0.0) {
            return Err(VariationError::DistributionIndex("eta_c", self.eta_c));
        }
        if !(self.eta_m > 0.0) {
            return Err(VariationError::DistributionIndex("eta_m", self.eta_m));
        }
        Ok(())
    }

    pub fn mutation_rate(&self, n: usize) -> f64 {
        self.pm.unwrap_or(1.0 / n as f64)
    }
}

/// Bounded simulated binary crossover. Each variable is recombined with probability 0.5.
pub fn sbx_crossover<T: Scalar>(
    p1: &[T],
    p2: &[T],
    cfg: &VariationConfig,
    lower: &[T],
    upper: &[T],
    rng: &mut RngStream,
) -> (Vec<T>, Vec<T>) {
    let mut c1 = p1.to_vec();
    let mut c2 = p2.to_vec();
    if !rng.coin(cfg.pc) {
        return (c1, c2);
    }
    let eta = cfg.eta_c;
    for i in 0..p1.len() {
        if !rng.coin(0.5) {
            continue;
        }
        let (a, b) = (p1[i].as_f64(), p2[i].as_f64());
        if (a - b).abs() <= SAME_VALUE_EPS {
            continue;
        }
        let (y1, y2) = if a < b { (a, b) } else { (b, a) };
        let (yl, yu) = (lower[i].as_f64(), upper[i].as_f64());
        let spread = |beta: f64, u: f64| {
            let alpha = 2.0 - beta.powf(-(eta + 1.0));
            if u <= 1.0 / alpha {
                (u * alpha).powf(1.0 / (eta + 1.0))
            } else {
                (1.0 / (2.0 - u * alpha)).powf(1.0 / (eta + 1.0))
            }
        };
        let u = rng.uniform();
        let betaq = spread(1.0 + 2.0 * (y1 - yl) / (y2 - y1), u);
        let low_child = (0.5 * ((y1 + y2) - betaq * (y2 - y1))).clamp(yl, yu);
        let betaq = spread(1.0 + 2.0 * (yu - y2) / (y2 - y1), u);
        let high_child = (0.5 * ((y1 + y2) + betaq * (y2 - y1))).clamp(yl, yu);
        if rng.coin(0.5) {
            c1[i] = T::lit(high_child);
            c2[i] = T::lit(low_child);
        } else {
            c1[i] = T::lit(low_child);
            c2[i] = T::lit(high_child);
        }
    }
    (c1, c2)
}

/// Bounded polynomial mutation.
pub fn polynomial_mutation<T: Scalar>(
    x: &[T],
    cfg: &VariationConfig,
    lower: &[T],
    upper: &[T],
    rng: &mut RngStream,
) -> Vec<T> {
    let pm = cfg.mutation_rate(x.len());
    let eta = cfg.eta_m;
    let mut y = x.to_vec();
    for i in 0..y.len() {
        if !rng.coin(pm) {
            continue;
        }
        let (yl, yu) = (lower[i].as_f64(), upper[i].as_f64());
        let v = y[i].as_f64();
        let range = yu - yl;
        let delta1 = (v - yl) / range;
        let delta2 = (yu - v) / range;
        let r = rng.uniform();
        let power = 1.0 / (eta + 1.0);
        let deltaq = if r < 0.5 {
            let val = 2.0 * r + (1.0 - 2.0 * r) * (1.0 - delta1).powf(eta + 1.0);
            val.powf(power) - 1.0
        } else {
            let val = 2.0 * (1.0 - r) + 2.0 * (r - 0.5) * (1.0 - delta2).powf(eta + 1.0);
            1.0 - val.powf(power)
        };
        y[i] = T::lit((v + deltaq * range).clamp(yl, yu));
    }
    y
}

#[cfg(test)]
mod tests {
    use super::*;

    fn random_point(rng: &mut RngStream, lo: &[f64], hi: &[f64]) -> Vec<f64> {
        lo.iter()
            .zip(hi)
            .map(|(l, h)| l + (h - l) * rng.uniform())
            .collect()
    }

    #[test]
    fn no_crossover_returns_parents() {
        let cfg = VariationConfig {
            pc: 0.0,
            ..Default::default()
        };
        let mut rng = RngStream::new(1);
        let (a, b) = sbx_crossover(
            &[0.1, 0.2],
            &[0.9, 0.8],
            &cfg,
            &[0.0; 2],
            &[1.0; 2],
            &mut rng,
        );
        assert_eq!(a, vec![0.1, 0.2]);
        assert_eq!(b, vec![0.9, 0.8]);
    }

    #[test]
    fn identical_parents_are_reproduced() {
        let cfg = VariationConfig::default();
        let mut rng = RngStream::new(2);
        for _ in 0..100 {
            let (a, b) = sbx_crossover(
                &[0.3, 0.7, 0.5],
                &[0.3, 0.7, 0.5],
                &cfg,
                &[0.0; 3],
                &[1.0; 3],
                &mut rng,
            );
            assert_eq!(a, vec![0.3, 0.7, 0.5]);
            assert_eq!(b, a);
        }
    }

    #[test]
    fn offspring_stay_in_bounds() {
        let lo = [-1.0, 0.0, 10.0, -5.0];
        let hi = [1.0, 0.001, 20.0, 5.0];
        let cfg = VariationConfig {
            pm: Some(1.0),
            eta_c: 2.0,
            eta_m: 1.0,
            ..Default::default()
        };
        let mut rng = RngStream::new(3);
        for _ in 0..10_000 {
            let p1 = random_point(&mut rng, &lo, &hi);
            let p2 = random_point(&mut rng, &lo, &hi);
            let (a, b) = sbx_crossover(&p1, &p2, &cfg, &lo, &hi, &mut rng);
            let c = polynomial_mutation(&a, &cfg, &lo, &hi, &mut rng);
            for v in [&a, &b, &c] {
                for (i, x) in v.iter().enumerate() {
                    assert!(
                        *x >= lo[i] && *x <= hi[i],
                        "{x} outside [{}, {}]",
                        lo[i],
                        hi[i]
                    );
                }
            }
        }
    }

    #[test]
    fn zero_mutation_rate_is_identity() {
        let cfg = VariationConfig {
            pm: Some(0.0),
            ..Default::default()
        };
        let mut rng = RngStream::new(4);
        assert_eq!(
            polynomial_mutation(&[0.25, 0.5], &cfg, &[0.0; 2], &[1.0; 2], &mut rng),
            vec![0.25, 0.5]
        );
    }

    #[test]
    fn mutation_at_lower_bound_stays_feasible() {
        let cfg = VariationConfig {
            pm: Some(1.0),
            ..Default::default()
        };
        let mut rng = RngStream::new(5);
        for _ in 0..1000 {
            let y = polynomial_mutation(&[0.0], &cfg, &[0.0], &[1.0], &mut rng);
            assert!(y[0] >= 0.0);
        }
    }

    #[test]
    fn mutation_strength_shrinks_with_distribution_index() {
        let mean_step = |eta_m: f64| {
            let cfg = VariationConfig {
                pm: Some(1.0),
                eta_m,
                ..Default::default()
            };
            let mut rng = RngStream::new(6);
            (0..10_000)
                .map(|_| {
                    (polynomial_mutation::<f64>(&[0.5], &cfg, &[0.0], &[1.0], &mut rng)[0] - 0.5)
                        .abs()
                })
                .sum::<f64>()
                / 10_000.0
        };
        let steps: Vec<f64> = [1.0, 5.0, 20.0, 100.0, 1000.0]
            .iter()
            .map(|&e| mean_step(e))
            .collect();
        assert!(steps.windows(2).all(|w| w[1] < w[0]), "{steps:?}");
        assert!(steps[4] < 1e-3);
    }

    #[test]
    fn same_seed_same_offspring() {
        let cfg = VariationConfig::default();
        let run = |seed| {
            let mut rng = RngStream::new(seed);
            let (a, b) = sbx_crossover(
                &[0.1, 0.9, 0.4],
                &[0.8, 0.2, 0.6],
                &cfg,
                &[0.0; 3],
                &[1.0; 3],
                &mut rng,
            );
            (
                polynomial_mutation(&a, &cfg, &[0.0; 3], &[1.0; 3], &mut rng),
                b,
            )
        };
        assert_eq!(run(9), run(9));
    }

    #[test]
    fn config_validation() {
        assert!(VariationConfig::default().validate().is_ok());
        assert!(VariationConfig {
            pc: 1.5,
            ..Default::default()
        }
        .validate()
        .is_err());
        assert!(VariationConfig {
            eta_m: 0.0,
            ..Default::default()
        }
        .validate()
        .is_err());
        assert!(VariationConfig {
            pm: Some(-0.1),
            ..Default::default()
        }
        .validate()
        .is_err());
    }
}
