use crate::scalar::Scalar;

use super::Family;

/// Multimodal distance function of DTLZ1 and DTLZ3.
pub fn g_rastrigin<T: Scalar>(xm: &[T]) -> T {
    let half = T::lit(0.5);
    let twenty_pi = T::lit(20.0) * T::PI();
    let s: T = xm
        .iter()
        .map(|&x| {
            let d = x - half;
            d * d - (twenty_pi * d).cos()
        })
        .sum();
    T::lit(100.0) * (T::lit(xm.len() as f64) + s)
}

/// Unimodal distance function of DTLZ2 and DTLZ4.
pub fn g_sphere<T: Scalar>(xm: &[T]) -> T {
    let half = T::lit(0.5);
    xm.iter().map(|&x| (x - half) * (x - half)).sum()
}

/// Linear-front objectives: `sum f = 0.5 (1 + g)`.
pub fn dtlz1_objectives<T: Scalar>(position: &[T], g: T, m: usize) -> Vec<T> {
    let scale = T::lit(0.5) * (T::one() + g);
    (0..m)
        .map(|j| {
            let head = m - 1 - j;
            let mut f = scale;
            for &x in &position[..head] {
                f = f * x;
            }
            if j > 0 {
                f = f * (T::one() - position[head]);
            }
            f
        })
        .collect()
}

/// Spherical-front objectives: `sum f^2 = (1 + g)^2`.
pub fn sphere_objectives<T: Scalar>(position: &[T], g: T, m: usize) -> Vec<T> {
    let half_pi = T::FRAC_PI_2();
    (0..m)
        .map(|j| {
            let head = m - 1 - j;
            let mut f = T::one() + g;
            for &x in &position[..head] {
                f = f * (x * half_pi).cos();
            }
            if j > 0 {
                f = f * (position[head] * half_pi).sin();
            }
            f
        })
        .collect()
}

/// Radius of the infeasible shell of C1-DTLZ3.
pub(super) fn c1_dtlz3_radius(m: usize) -> f64 {
    match m {
        2 => 6.0,
        3 => 9.0,
        4..=8 => 12.5,
        _ => 15.0,
    }
}

pub(super) fn c2_dtlz2_radius(m: usize) -> f64 {
    if m == 3 {
        0.4
    } else {
        0.5
    }
}

/// `(a, b)` of the DC constraints `cos(a * pi * v) >= b`.
pub(super) fn dc_parameters(family: Family) -> (f64, f64) {
    match family {
        Family::Dc1Dtlz1 | Family::Dc1Dtlz3 => (3.0, 0.5),
        Family::Dc2Dtlz1 | Family::Dc2Dtlz3 => (3.0, 0.9),
        Family::Dc3Dtlz1 => (5.0, 0.5),
        Family::Dc3Dtlz3 => (3.0, 0.5),
        _ => unreachable!("{family} has no DC parameters"),
    }
}

/// Canonical form of `cos(a pi v) >= b`.
fn dc_cos<T: Scalar>(v: T, a: f64, b: f64) -> T {
    T::lit(b) - (T::lit(a) * T::PI() * v).cos()
}

/// Canonical form of `exp(-g) >= b`.
fn dc_exp<T: Scalar>(g: T, b: f64) -> T {
    T::lit(b) - (-g).exp()
}

/// Objectives and canonical inequality values of `family` at `x`.
pub(super) fn evaluate<T: Scalar>(family: Family, m: usize, x: &[T]) -> (Vec<T>, Vec<T>) {
    let (position, distance) = x.split_at(m - 1);
    let (f, g) = match family {
        f if f.is_linear() => {
            let g = g_rastrigin(distance);
            (dtlz1_objectives(position, g, m), g)
        }
        Family::C2Dtlz2 => {
            let g = g_sphere(distance);
            (sphere_objectives(position, g, m), g)
        }
        Family::C3Dtlz4 => {
            let g = g_sphere(distance);
            let alpha = T::lit(100.0);
            let warped: Vec<T> = position.iter().map(|&v| v.powf(alpha)).collect();
            (sphere_objectives(&warped, g, m), g)
        }
        _ => {
            let g = g_rastrigin(distance);
            (sphere_objectives(position, g, m), g)
        }
    };
    let sq = |v: T| v * v;
    let constraints = match family {
        Family::C1Dtlz1 => {
            let head: T = f[..m - 1].iter().map(|&v| v / T::lit(0.5)).sum();
            vec![f[m - 1] / T::lit(0.6) + head - T::one()]
        }
        Family::C1Dtlz3 => {
            let s: T = f.iter().map(|&v| sq(v)).sum();
            let r2 = T::lit(c1_dtlz3_radius(m).powi(2));
            vec![-((s - T::lit(16.0)) * (s - r2))]
        }
        Family::C2Dtlz2 => {
            let r2 = T::lit(c2_dtlz2_radius(m).powi(2));
            let total: T = f.iter().map(|&v| sq(v)).sum();
            let corner = f
                .iter()
                .map(|&fi| sq(fi - T::one()) + total - sq(fi) - r2)
                .fold(T::infinity(), T::min);
            let centre_offset = T::one() / T::lit(m as f64).sqrt();
            let centre: T = f.iter().map(|&v| sq(v - centre_offset)).sum::<T>() - r2;
            vec![corner.min(centre)]
        }
        Family::C3Dtlz4 => {
            let total: T = f.iter().map(|&v| sq(v)).sum();
            f.iter()
                .map(|&fj| T::one() - (total - sq(fj)) - sq(fj) / T::lit(4.0))
                .collect()
        }
        Family::Dc1Dtlz1 | Family::Dc1Dtlz3 => {
            let (a, b) = dc_parameters(family);
            vec![dc_cos(x[0], a, b)]
        }
        Family::Dc2Dtlz1 | Family::Dc2Dtlz3 => {
            let (a, b) = dc_parameters(family);
            vec![dc_cos(g, a, b), dc_exp(g, b)]
        }
        Family::Dc3Dtlz1 | Family::Dc3Dtlz3 => {
            let (a, b) = dc_parameters(family);
            let mut c: Vec<T> = position.iter().map(|&v| dc_cos(v, a, b)).collect();
            c.push(dc_cos(g, a, b));
            c.push(dc_exp(g, b));
            c
        }
    };
    (f, constraints)
}
