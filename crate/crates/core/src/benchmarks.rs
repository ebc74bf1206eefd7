//! Benchmark objectives: Sphere, Rosenbrock, Rastrigin and Ackley 1.
//!
//! All four are minimized and have global minimum 0. Default search boxes
//! follow common black-box benchmarking practice and can be overridden with
//! [`Objective::with_bounds`].

use std::f64::consts::{E, PI};
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum FunctionName {
    Sphere,
    Rosenbrock,
    Rastrigin,
    Ackley1,
}

impl FunctionName {
    pub const ALL: [FunctionName; 4] = [
        FunctionName::Sphere,
        FunctionName::Rosenbrock,
        FunctionName::Rastrigin,
        FunctionName::Ackley1,
    ];

    /// Identifier used in config files, CLI arguments and output file names.
    pub fn as_str(self) -> &'static str {
        match self {
            FunctionName::Sphere => "sphere",
            FunctionName::Rosenbrock => "rosenbrock",
            FunctionName::Rastrigin => "rastrigin",
            FunctionName::Ackley1 => "ackley1",
        }
    }

    pub fn default_bounds(self) -> (f64, f64) {
        match self {
            FunctionName::Sphere | FunctionName::Rastrigin => (-5.12, 5.12),
            FunctionName::Rosenbrock => (-2.048, 2.048),
            FunctionName::Ackley1 => (-32.768, 32.768),
        }
    }

    /// Location of the global minimum in `dim` dimensions.
    pub fn optimum(self, dim: usize) -> Vec<f64> {
        match self {
            FunctionName::Rosenbrock => vec![1.0; dim],
            _ => vec![0.0; dim],
        }
    }

    pub fn eval(self, x: &[f64]) -> f64 {
        match self {
            FunctionName::Sphere => sphere(x),
            FunctionName::Rosenbrock => rosenbrock(x),
            FunctionName::Rastrigin => rastrigin(x),
            FunctionName::Ackley1 => ackley1(x),
        }
    }
}

impl fmt::Display for FunctionName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for FunctionName {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "sphere" => Ok(FunctionName::Sphere),
            "rosenbrock" => Ok(FunctionName::Rosenbrock),
            "rastrigin" => Ok(FunctionName::Rastrigin),
            "ackley1" | "ackley" => Ok(FunctionName::Ackley1),
            _ => Err(Error::UnknownFunction { name: s.to_string() }),
        }
    }
}

/// Axis-aligned search box.
#[derive(Clone, Debug, PartialEq)]
pub struct Bounds {
    pub lower: Vec<f64>,
    pub upper: Vec<f64>,
}

impl Bounds {
    pub fn new(lower: Vec<f64>, upper: Vec<f64>) -> Result<Self> {
        if lower.len() != upper.len() {
            return Err(Error::DimensionMismatch {
                expected: lower.len(),
                actual: upper.len(),
            });
        }
        if lower.is_empty() {
            return Err(Error::config("bounds must have at least one dimension"));
        }
        if lower.iter().zip(&upper).any(|(l, u)| l.partial_cmp(u) != Some(std::cmp::Ordering::Less)) {
            return Err(Error::config("every lower bound must be strictly below its upper bound"));
        }
        Ok(Self { lower, upper })
    }

    pub fn uniform(dim: usize, lower: f64, upper: f64) -> Result<Self> {
        Self::new(vec![lower; dim], vec![upper; dim])
    }

    pub fn dim(&self) -> usize {
        self.lower.len()
    }

    pub fn contains(&self, x: &[f64]) -> bool {
        x.len() == self.dim()
            && x
                .iter()
                .zip(self.lower.iter().zip(&self.upper))
                .all(|(v, (l, u))| *l <= *v && *v <= *u)
    }

    pub fn clip(&self, x: &mut [f64]) {
        for (v, (l, u)) in x.iter_mut().zip(self.lower.iter().zip(&self.upper)) {
            *v = v.clamp(*l, *u);
        }
    }
}

/// A benchmark function bound to a dimension and search box.
#[derive(Clone, Debug, PartialEq)]
pub struct Objective {
    name: FunctionName,
    bounds: Bounds,
}

impl Objective {
    pub fn name(&self) -> FunctionName {
        self.name
    }

    pub fn dim(&self) -> usize {
        self.bounds.dim()
    }

    pub fn bounds(&self) -> &Bounds {
        &self.bounds
    }

    pub fn with_bounds(mut self, bounds: Bounds) -> Result<Self> {
        if bounds.dim() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                actual: bounds.dim(),
            });
        }
        self.bounds = bounds;
        Ok(self)
    }

    /// Raw objective value. Does not touch any evaluation counter; use
    /// [`crate::evaluate`] inside the GA.
    pub fn value(&self, x: &[f64]) -> Result<f64> {
        if x.len() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                actual: x.len(),
            });
        }
        Ok(self.name.eval(x))
    }
}

pub fn make_objective(name: &str, dim: usize) -> Result<Objective> {
    objective(name.parse()?, dim)
}

pub fn objective(name: FunctionName, dim: usize) -> Result<Objective> {
    if dim == 0 {
        return Err(Error::config("dimension must be positive"));
    }
    if name == FunctionName::Rosenbrock && dim < 2 {
        return Err(Error::config("rosenbrock requires dim >= 2"));
    }
    let (lo, hi) = name.default_bounds();
    Ok(Objective {
        name,
        bounds: Bounds::uniform(dim, lo, hi)?,
    })
}

pub fn sphere(x: &[f64]) -> f64 {
    x.iter().map(|v| v * v).sum()
}

pub fn rosenbrock(x: &[f64]) -> f64 {
    x.windows(2)
        .map(|w| 100.0 * (w[1] - w[0] * w[0]).powi(2) + (1.0 - w[0]).powi(2))
        .sum()
}

pub fn rastrigin(x: &[f64]) -> f64 {
    10.0 * x.len() as f64
        + x.iter()
            .map(|v| v * v - 10.0 * (2.0 * PI * v).cos())
            .sum::<f64>()
}

pub fn ackley1(x: &[f64]) -> f64 {
    let d = x.len() as f64;
    let sq = x.iter().map(|v| v * v).sum::<f64>() / d;
    let cs = x.iter().map(|v| (2.0 * PI * v).cos()).sum::<f64>() / d;
    // Cancellation at the optimum leaves ~1e-16 noise, possibly negative.
    (-20.0 * (-0.2 * sq.sqrt()).exp() - cs.exp() + 20.0 + E).max(0.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn sphere_examples() {
        assert_eq!(sphere(&[0.0; 10]), 0.0);
        assert_eq!(sphere(&[1.0; 10]), 10.0);
        let mut x = [0.0; 10];
        x[0] = 2.0;
        assert_eq!(sphere(&x), 4.0);
    }

    #[test]
    fn rosenbrock_examples() {
        assert_eq!(rosenbrock(&[1.0; 10]), 0.0);
        assert_eq!(rosenbrock(&[0.0; 10]), 9.0);
        let mut x = [1.0; 10];
        x[0] = -1.0;
        assert_eq!(rosenbrock(&x), 4.0);
    }

    #[test]
    fn rastrigin_examples() {
        assert_eq!(rastrigin(&[0.0; 10]), 0.0);
        let mut x = [0.0; 10];
        x[0] = 1.0;
        assert!((rastrigin(&x) - 1.0).abs() < 1e-12);
        x[0] = 0.5;
        // 0.25 + 10 - 10 cos(pi)
        assert!((rastrigin(&x) - 20.25).abs() < 1e-12);
    }

    #[test]
    fn ackley_examples() {
        assert!(ackley1(&[0.0; 10]).abs() < 1e-12);
        // closed form at the all-ones point: 20 - 20 e^{-0.2}
        assert!((ackley1(&[1.0; 10]) - 3.625_384_938_440_362_7).abs() < 1e-12);
    }

    #[test]
    fn make_objective_bounds() {
        let s = make_objective("Sphere", 10).unwrap();
        assert_eq!(s.bounds().lower, vec![-5.12; 10]);
        assert_eq!(s.bounds().upper, vec![5.12; 10]);
        let a = make_objective("Ackley1", 10).unwrap();
        assert_eq!(a.bounds().upper, vec![32.768; 10]);
        assert!(matches!(
            make_objective("Foo", 10),
            Err(Error::UnknownFunction { .. })
        ));
        assert!(make_objective("rosenbrock", 1).is_err());
    }

    #[test]
    fn value_checks_dimension() {
        let s = make_objective("sphere", 3).unwrap();
        assert!(matches!(
            s.value(&[0.0; 2]),
            Err(Error::DimensionMismatch { expected: 3, actual: 2 })
        ));
    }

    #[test]
    fn optimum_is_zero_for_all_dims() {
        for f in FunctionName::ALL {
            for d in 2..=30 {
                let v = f.eval(&f.optimum(d));
                assert!(v.abs() < 1e-12, "{f} d={d}: {v}");
            }
        }
    }

    #[test]
    fn perturbing_optimum_increases_value() {
        for f in FunctionName::ALL {
            let opt = f.optimum(10);
            let base = f.eval(&opt);
            for i in 0..10 {
                for delta in [1e-2, -1e-2] {
                    let mut x = opt.clone();
                    x[i] += delta;
                    assert!(f.eval(&x) > base, "{f} coord {i} delta {delta}");
                }
            }
        }
    }

    fn point_in_bounds(f: FunctionName) -> impl Strategy<Value = Vec<f64>> {
        let (lo, hi) = f.default_bounds();
        prop::collection::vec(lo..=hi, 2..12)
    }

    proptest! {
        #[test]
        fn nonnegative_in_bounds(
            (f, x) in prop::sample::select(FunctionName::ALL.to_vec())
                .prop_flat_map(|f| (Just(f), point_in_bounds(f)))
        ) {
            prop_assert!(f.eval(&x) >= 0.0);
        }

        #[test]
        fn ackley_is_even(x in prop::collection::vec(-32.768f64..32.768, 1..12)) {
            let neg: Vec<f64> = x.iter().map(|v| -v).collect();
            prop_assert!((ackley1(&x) - ackley1(&neg)).abs() < 1e-12);
        }
    }
}
