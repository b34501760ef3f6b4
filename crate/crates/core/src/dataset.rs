use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Affine map `normalized = a · raw + b`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NormMap {
    pub a: f64,
    pub b: f64,
}

impl NormMap {
    pub const IDENTITY: NormMap = NormMap { a: 1.0, b: 0.0 };

    pub fn apply(&self, raw: f64) -> f64 {
        self.a * raw + self.b
    }

    pub fn invert(&self, normalized: f64) -> f64 {
        (normalized - self.b) / self.a
    }
}

/// Training samples with raw and normalized targets.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Dataset {
    pub inputs: Vec<Vec<f64>>,
    pub raw_targets: Vec<f64>,
    pub normalized_targets: Vec<f64>,
    pub norm_map: NormMap,
}

impl Dataset {
    /// Dataset whose targets are used as given (identity normalization).
    pub fn new(inputs: Vec<Vec<f64>>, targets: Vec<f64>) -> Result<Self> {
        if inputs.len() != targets.len() {
            return Err(Error::DimensionMismatch {
                expected: inputs.len(),
                found: targets.len(),
            });
        }
        if inputs.is_empty() {
            return Err(Error::Empty("dataset"));
        }
        let m = inputs[0].len();
        if let Some(bad) = inputs.iter().find(|x| x.len() != m) {
            return Err(Error::ArityMismatch {
                what: "input",
                expected: m,
                found: bad.len(),
            });
        }
        Ok(Self {
            inputs,
            normalized_targets: targets.clone(),
            raw_targets: targets,
            norm_map: NormMap::IDENTITY,
        })
    }

    /// Univariate convenience constructor.
    pub fn from_scalar(xs: &[f64], ys: &[f64]) -> Result<Self> {
        Self::new(xs.iter().map(|&x| vec![x]).collect(), ys.to_vec())
    }

    pub fn len(&self) -> usize {
        self.inputs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.inputs.is_empty()
    }

    pub fn arity(&self) -> usize {
        self.inputs.first().map_or(0, Vec::len)
    }

    /// Training targets (the normalized ones).
    pub fn targets(&self) -> &[f64] {
        &self.normalized_targets
    }

    /// Error unless every training target lies in `[lo, hi]`.
    pub fn check_range(&self, lo: f64, hi: f64) -> Result<()> {
        let slack = 1e-12 * (1.0 + lo.abs().max(hi.abs()));
        match self
            .normalized_targets
            .iter()
            .find(|&&y| !(y >= lo - slack && y <= hi + slack))
        {
            Some(&value) => Err(Error::UnnormalizedTargets {
                value,
                min: lo,
                max: hi,
            }),
            None => Ok(()),
        }
    }
}

/// Map raw targets into `[lo, hi]`.
///
/// Targets already inside the range keep the identity map; otherwise the
/// min–max affine map onto `[lo, hi]` is used.
pub fn normalize_targets(dataset: &Dataset, lo: f64, hi: f64) -> Result<Dataset> {
    if !(hi > lo) {
        return Err(Error::InvalidParameter(format!("empty range [{lo}, {hi}]")));
    }
    let raw = &dataset.raw_targets;
    let (min, max) = raw
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), &y| {
            (a.min(y), b.max(y))
        });
    if !(max > min) {
        return Err(Error::InvalidParameter(
            "constant targets admit no normalization map".into(),
        ));
    }
    let map = if min >= lo && max <= hi {
        NormMap::IDENTITY
    } else {
        let a = (hi - lo) / (max - min);
        NormMap { a, b: lo - a * min }
    };
    let normalized_targets = raw.iter().map(|&y| map.apply(y).clamp(lo, hi)).collect();
    Ok(Dataset {
        inputs: dataset.inputs.clone(),
        raw_targets: raw.clone(),
        normalized_targets,
        norm_map: map,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn two_point_map() {
        let d = Dataset::from_scalar(&[0.0, 1.0], &[0.0, 2.0]).unwrap();
        let n = normalize_targets(&d, -1.0, 1.0).unwrap();
        assert_eq!(n.normalized_targets, vec![-1.0, 1.0]);
        assert_eq!(n.norm_map, NormMap { a: 1.0, b: -1.0 });
    }

    #[test]
    fn in_range_targets_keep_identity() {
        let d = Dataset::from_scalar(&[0.0, 1.0, 2.0], &[-0.5, 0.2, 0.9]).unwrap();
        let n = normalize_targets(&d, -1.0, 1.0).unwrap();
        assert_eq!(n.norm_map, NormMap::IDENTITY);
        assert_eq!(n.normalized_targets, d.raw_targets);
    }

    #[test]
    fn constant_targets_rejected() {
        let d = Dataset::from_scalar(&[0.0, 1.0], &[3.0, 3.0]).unwrap();
        assert!(normalize_targets(&d, -1.0, 1.0).is_err());
    }

    #[test]
    fn inverse_reproduces_raw() {
        let raw = [8.1, 12.5, 31.9, 20.0];
        let d = Dataset::from_scalar(&[0.0, 1.0, 2.0, 3.0], &raw).unwrap();
        let n = normalize_targets(&d, -1.0, 1.0).unwrap();
        for (y, r) in n.normalized_targets.iter().zip(raw) {
            assert!((n.norm_map.invert(*y) - r).abs() < 1e-12);
        }
        n.check_range(-1.0, 1.0).unwrap();
        assert!(d.check_range(-1.0, 1.0).is_err());
    }

    #[test]
    fn shape_errors() {
        assert!(Dataset::new(vec![], vec![]).is_err());
        assert!(Dataset::new(vec![vec![0.0]], vec![]).is_err());
        assert!(Dataset::new(vec![vec![0.0], vec![0.0, 1.0]], vec![1.0, 2.0]).is_err());
    }
}
