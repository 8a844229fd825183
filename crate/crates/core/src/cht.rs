//! Constraint handling: violation degrees, aggregated violation, the crisp
//! replacement value, and constrained dominance.
//!
//! Constraint values arrive in canonical form: an inequality is satisfied when
//! its value is `<= 0`, an equality when its magnitude is `<= epsilon`.

use std::cmp::Ordering;

use thiserror::Error;

use crate::model::{pareto_dominates, Solution};
use crate::scalar::Scalar;

/// Which violation value the comparators see.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ChtMode {
    /// The aggregated constraint violation itself.
    TrueCv,
    /// `+1` for feasible solutions and `-1` for infeasible ones.
    Crisp,
}

impl ChtMode {
    pub const ALL: [ChtMode; 2] = [ChtMode::TrueCv, ChtMode::Crisp];

    pub fn as_str(self) -> &'static str {
        match self {
            ChtMode::TrueCv => "true",
            ChtMode::Crisp => "crisp",
        }
    }
}

impl std::str::FromStr for ChtMode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "true" | "truecv" | "true-cv" | "cv" => Ok(ChtMode::TrueCv),
            "crisp" => Ok(ChtMode::Crisp),
            other => Err(format!("unknown constraint-handling mode `{other}`")),
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ChtError {
    #[error("equality tolerance must be positive")]
    NonPositiveEpsilon,
    #[error("normalization factor {0} is zero")]
    ZeroFactor(usize),
}

#[derive(Clone, Debug, PartialEq)]
pub struct ConstraintConfig<T> {
    pub mode: ChtMode,
    /// Equality tolerance.
    pub epsilon: T,
    inequality_scale: Option<Vec<T>>,
    equality_scale: Option<Vec<T>>,
}

impl<T: Scalar> ConstraintConfig<T> {
    pub fn new(mode: ChtMode) -> Self {
        Self {
            mode,
            epsilon: T::lit(1e-6),
            inequality_scale: None,
            equality_scale: None,
        }
    }

    pub fn with_epsilon(mut self, epsilon: T) -> Result<Self, ChtError> {
        if !(epsilon > T::zero()) {
            return Err(ChtError::NonPositiveEpsilon);
        }
        self.epsilon = epsilon;
        Ok(self)
    }

    /// Per-constraint normalization factors; each value is divided by the factor's magnitude.
    pub fn with_scales(
        mut self,
        inequality: Option<Vec<T>>,
        equality: Option<Vec<T>>,
    ) -> Result<Self, ChtError> {
        let offset = inequality.as_ref().map_or(0, Vec::len);
        if let Some(i) = inequality.iter().flatten().position(|a| a.is_zero()) {
            return Err(ChtError::ZeroFactor(i));
        }
        if let Some(k) = equality.iter().flatten().position(|b| b.is_zero()) {
            return Err(ChtError::ZeroFactor(offset + k));
        }
        self.inequality_scale = inequality;
        self.equality_scale = equality;
        Ok(self)
    }
}

/// Per-constraint violation degrees, inequalities first.
pub fn violation_degrees<T: Scalar>(g: &[T], h: &[T], cfg: &ConstraintConfig<T>) -> Vec<T> {
    let scaled = |v: T, scale: &Option<Vec<T>>, i: usize| match scale {
        Some(s) => v / s[i].abs(),
        None => v,
    };
    let ineq = g
        .iter()
        .enumerate()
        .map(|(i, &gi)| scaled(gi, &cfg.inequality_scale, i).max(T::zero()));
    let eq = h
        .iter()
        .enumerate()
        .map(|(k, &hk)| (scaled(hk, &cfg.equality_scale, k).abs() - cfg.epsilon).max(T::zero()));
    ineq.chain(eq).collect()
}

/// Sum of violation degrees; zero exactly when every constraint holds.
pub fn aggregate_cv<T: Scalar>(c: &[T]) -> T {
    c.iter().copied().sum()
}

/// The violation value seen by constraint handling under `mode`.
pub fn effective_cv<T: Scalar>(cv: T, mode: ChtMode) -> T {
    match mode {
        ChtMode::TrueCv => cv,
        ChtMode::Crisp if cv == T::zero() => T::one(),
        ChtMode::Crisp => -T::one(),
    }
}

/// Outcome of a pairwise dominance test.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Dominance {
    FirstDominates,
    SecondDominates,
    Neither,
}

impl Dominance {
    pub fn flip(self) -> Self {
        match self {
            Dominance::FirstDominates => Dominance::SecondDominates,
            Dominance::SecondDominates => Dominance::FirstDominates,
            Dominance::Neither => Dominance::Neither,
        }
    }
}

/// Plain Pareto comparison of two objective vectors.
pub fn pareto_compare<T: Scalar>(a: &[T], b: &[T]) -> Dominance {
    if pareto_dominates(a, b) {
        Dominance::FirstDominates
    } else if pareto_dominates(b, a) {
        Dominance::SecondDominates
    } else {
        Dominance::Neither
    }
}

/// Constrained dominance.
///
/// A feasible solution beats an infeasible one, two feasible solutions compare
/// by Pareto dominance, and two infeasible solutions compare by `effective_cv`
/// alone. Equal violation values leave the pair incomparable; objectives are
/// never consulted between infeasible solutions. In crisp mode every infeasible
/// pair ties on `-1`, so an all-infeasible population forms a single front and
/// selection there is driven by diversity only.
pub fn constrained_compare<T: Scalar>(a: &Solution<T>, b: &Solution<T>) -> Dominance {
    match (a.is_feasible(), b.is_feasible()) {
        (true, false) => Dominance::FirstDominates,
        (false, true) => Dominance::SecondDominates,
        (true, true) => pareto_compare(&a.f, &b.f),
        (false, false) => match a.effective_cv.partial_cmp(&b.effective_cv) {
            Some(Ordering::Less) => Dominance::FirstDominates,
            Some(Ordering::Greater) => Dominance::SecondDominates,
            _ => Dominance::Neither,
        },
    }
}
