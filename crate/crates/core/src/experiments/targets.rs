use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::dataset::Dataset;
use crate::error::{Error, Result};

/// Benchmark functions used by the experiments.
#[derive(Debug, Clone, PartialEq)]
pub enum TargetFunction {
    /// `(1 - e^{-10x}) / (1 + e^{-10x})`, i.e. `tanh(5x)`.
    Sigmoid10,
    /// `10x² - 14x⁴ - 3x⁶ + 7x⁸ - cos x`.
    Poly8Fixed,
    /// `(x₁² + x₂ - 1.5π)² + (x₁ + x₂² - π)²`.
    HimmelblauLike,
    /// `Σ_{j=1..8} a_j x^j` with `a_j ~ U[-30, 30]` drawn from `seed`.
    Poly8Random { seed: u64, coeffs: [f64; 8] },
}

impl TargetFunction {
    pub fn poly8_random(seed: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut coeffs = [0.0; 8];
        for c in &mut coeffs {
            *c = rng.gen_range(-30.0..=30.0);
        }
        TargetFunction::Poly8Random { seed, coeffs }
    }

    pub fn arity(&self) -> usize {
        match self {
            TargetFunction::HimmelblauLike => 2,
            _ => 1,
        }
    }

    pub fn eval(&self, x: &[f64]) -> Result<f64> {
        if x.len() != self.arity() {
            return Err(Error::ArityMismatch {
                what: "target function input",
                expected: self.arity(),
                found: x.len(),
            });
        }
        Ok(match self {
            TargetFunction::Sigmoid10 => {
                let e = (-10.0 * x[0]).exp();
                (1.0 - e) / (1.0 + e)
            }
            TargetFunction::Poly8Fixed => {
                let x2 = x[0] * x[0];
                x2 * (10.0 + x2 * (-14.0 + x2 * (-3.0 + 7.0 * x2))) - x[0].cos()
            }
            TargetFunction::HimmelblauLike => {
                let (a, b) = (x[0], x[1]);
                (a * a + b - 1.5 * PI).powi(2) + (a + b * b - PI).powi(2)
            }
            TargetFunction::Poly8Random { coeffs, .. } => {
                // Horner without a constant term.
                coeffs.iter().rev().fold(0.0, |acc, &c| (acc + c) * x[0])
            }
        })
    }
}

impl fmt::Display for TargetFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TargetFunction::Sigmoid10 => f.write_str("sigmoid10"),
            TargetFunction::Poly8Fixed => f.write_str("poly8_fixed"),
            TargetFunction::HimmelblauLike => f.write_str("himmelblau_like"),
            TargetFunction::Poly8Random { seed, .. } => write!(f, "poly8_random({seed})"),
        }
    }
}

impl FromStr for TargetFunction {
    type Err = Error;

    /// Accepts `sigmoid10`, `poly8_fixed`, `himmelblau_like`,
    /// `poly8_random(<seed>)` and `poly8_random:<seed>`.
    fn from_str(s: &str) -> Result<Self> {
        let name = s.trim();
        let unknown = || Error::Unknown {
            kind: "target function",
            name: name.to_string(),
        };
        match name {
            "sigmoid10" => Ok(TargetFunction::Sigmoid10),
            "poly8_fixed" => Ok(TargetFunction::Poly8Fixed),
            "himmelblau_like" => Ok(TargetFunction::HimmelblauLike),
            _ => {
                let rest = name.strip_prefix("poly8_random").ok_or_else(unknown)?;
                let seed = rest
                    .strip_prefix(':')
                    .or_else(|| rest.strip_prefix('(').and_then(|r| r.strip_suffix(')')))
                    .ok_or_else(unknown)?;
                let seed = seed.trim().parse().map_err(|_| unknown())?;
                Ok(TargetFunction::poly8_random(seed))
            }
        }
    }
}

impl Serialize for TargetFunction {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for TargetFunction {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Evenly spaced grid on `[-R, R]^m` (endpoints included), stored rescaled to
/// `[-1, 1]^m`. Targets are evaluated at the unscaled points and left raw.
///
/// The first axis varies slowest.
pub fn sample_grid(function: &TargetFunction, counts: &[usize], radius: f64) -> Result<Dataset> {
    if counts.len() != function.arity() {
        return Err(Error::ArityMismatch {
            what: "grid axes",
            expected: function.arity(),
            found: counts.len(),
        });
    }
    if let Some(&c) = counts.iter().find(|&&c| c < 2) {
        return Err(Error::InvalidParameter(format!(
            "grid needs at least 2 points per axis, got {c}"
        )));
    }
    if !(radius > 0.0 && radius.is_finite()) {
        return Err(Error::InvalidParameter(format!(
            "domain radius {radius} must be positive"
        )));
    }
    let axis = |n: usize, i: usize| -1.0 + 2.0 * i as f64 / (n - 1) as f64;
    let total: usize = counts.iter().product();
    let mut inputs = Vec::with_capacity(total);
    let mut targets = Vec::with_capacity(total);
    let mut idx = vec![0usize; counts.len()];
    for _ in 0..total {
        let unit: Vec<f64> = idx.iter().zip(counts).map(|(&i, &n)| axis(n, i)).collect();
        let raw: Vec<f64> = unit.iter().map(|u| u * radius).collect();
        targets.push(function.eval(&raw)?);
        inputs.push(unit);
        for a in (0..counts.len()).rev() {
            idx[a] += 1;
            if idx[a] < counts[a] {
                break;
            }
            idx[a] = 0;
        }
    }
    Dataset::new(inputs, targets)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn function_values() {
        assert_eq!(TargetFunction::Sigmoid10.eval(&[0.0]).unwrap(), 0.0);
        assert!((TargetFunction::Sigmoid10.eval(&[0.3]).unwrap() - (1.5f64).tanh()).abs() < 1e-15);
        assert_eq!(TargetFunction::Poly8Fixed.eval(&[0.0]).unwrap(), -1.0);
        let x: f64 = 0.7;
        let direct =
            10.0 * x.powi(2) - 14.0 * x.powi(4) - 3.0 * x.powi(6) + 7.0 * x.powi(8) - x.cos();
        assert!((TargetFunction::Poly8Fixed.eval(&[x]).unwrap() - direct).abs() < 1e-13);
        let h = TargetFunction::HimmelblauLike.eval(&[0.0, 0.0]).unwrap();
        assert!((h - 32.078).abs() < 5e-3);
        assert!((h - 3.25 * PI * PI).abs() < 1e-12);
        assert!(TargetFunction::Sigmoid10.eval(&[0.0, 1.0]).is_err());
    }

    #[test]
    fn random_polynomial() {
        let p = TargetFunction::poly8_random(11);
        let TargetFunction::Poly8Random { coeffs, .. } = &p else {
            unreachable!()
        };
        assert!(coeffs.iter().all(|c| (-30.0..=30.0).contains(c)));
        let x: f64 = -0.4;
        let direct: f64 = coeffs
            .iter()
            .enumerate()
            .map(|(j, c)| c * x.powi(j as i32 + 1))
            .sum();
        assert!((p.eval(&[x]).unwrap() - direct).abs() < 1e-12);
        assert_eq!(p.eval(&[0.0]).unwrap(), 0.0);
        assert_eq!(p, TargetFunction::poly8_random(11));
        assert_ne!(p, TargetFunction::poly8_random(12));
    }

    #[test]
    fn parse_names() {
        for name in [
            "sigmoid10",
            "poly8_fixed",
            "himmelblau_like",
            "poly8_random(5)",
        ] {
            let f: TargetFunction = name.parse().unwrap();
            assert_eq!(f.to_string(), name);
        }
        assert_eq!(
            "poly8_random:5".parse::<TargetFunction>().unwrap(),
            TargetFunction::poly8_random(5)
        );
        assert!("cosine".parse::<TargetFunction>().is_err());
        assert!("poly8_random(x)".parse::<TargetFunction>().is_err());
        let json = serde_json::to_string(&TargetFunction::Sigmoid10).unwrap();
        assert_eq!(json, "\"sigmoid10\"");
    }

    #[test]
    fn grids() {
        let d = sample_grid(&TargetFunction::Sigmoid10, &[200], 1.0).unwrap();
        assert_eq!(d.len(), 200);
        assert_eq!(d.inputs[0], vec![-1.0]);
        assert_eq!(d.inputs[199], vec![1.0]);
        assert!((d.inputs[1][0] - d.inputs[0][0] - 2.0 / 199.0).abs() < 1e-15);

        let b = sample_grid(&TargetFunction::HimmelblauLike, &[50, 50], 1.0).unwrap();
        assert_eq!(b.len(), 2500);
        assert_eq!(b.inputs[1], vec![-1.0, -1.0 + 2.0 / 49.0]);

        let r = sample_grid(&TargetFunction::Sigmoid10, &[3], 2.0).unwrap();
        assert_eq!(r.inputs, vec![vec![-1.0], vec![0.0], vec![1.0]]);
        assert_eq!(
            r.raw_targets[2],
            TargetFunction::Sigmoid10.eval(&[2.0]).unwrap()
        );

        assert!(sample_grid(&TargetFunction::Sigmoid10, &[1], 1.0).is_err());
        assert!(sample_grid(&TargetFunction::HimmelblauLike, &[5], 1.0).is_err());
    }
}
