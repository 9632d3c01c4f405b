//! Detector-coordinate grids.

use serde::{Deserialize, Serialize};
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::geometry::{DetectorCoordinate, SlitGeometry};

/// Units of the sweep bounds.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SweepUnits {
    Meters,
    /// Bounds given as `d/D`.
    DOverScreen,
}

/// Evenly spaced detector coordinates, endpoints included.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SweepSpec {
    pub min: f64,
    pub max: f64,
    pub steps: usize,
    pub units: SweepUnits,
}

impl SweepSpec {
    pub const DEFAULT_STEPS: usize = 2001;

    pub fn new(min: f64, max: f64, steps: usize, units: SweepUnits) -> Result<Self> {
        if !(min.is_finite() && max.is_finite()) {
            return Err(Error::InvalidSweep(format!(
                "bounds {min}:{max} are not finite"
            )));
        }
        if steps == 0 {
            return Err(Error::InvalidSweep("at least one step is required".into()));
        }
        if min > max {
            return Err(Error::InvalidSweep(format!("min {min} exceeds max {max}")));
        }
        if steps == 1 && min != max {
            return Err(Error::InvalidSweep("a single step needs min == max".into()));
        }
        Ok(Self {
            min,
            max,
            steps,
            units,
        })
    }

    /// `d/D ∈ [−0.5, 0.5]` with 2001 points.
    pub fn default_d_over_screen() -> Self {
        Self {
            min: -0.5,
            max: 0.5,
            steps: Self::DEFAULT_STEPS,
            units: SweepUnits::DOverScreen,
        }
    }

    /// Grid values in the sweep's own units. `x_i = (min·(n−1−i) + max·i)/(n−1)`
    /// so that a symmetric range yields exactly negated mirror points.
    pub fn values(&self) -> Vec<f64> {
        if self.steps == 1 {
            return vec![self.min];
        }
        let last = (self.steps - 1) as f64;
        (0..self.steps)
            .map(|i| {
                let i = i as f64;
                (self.min * (last - i) + self.max * i) / last
            })
            .collect()
    }

    pub fn coordinates(&self, geom: &SlitGeometry) -> Vec<DetectorCoordinate> {
        let scale = match self.units {
            SweepUnits::Meters => 1.0,
            SweepUnits::DOverScreen => geom.screen_distance(),
        };
        self.values()
            .into_iter()
            .map(|x| DetectorCoordinate(x * scale))
            .collect()
    }
}

impl fmt::Display for SweepSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}:{:?}:{}", self.min, self.max, self.steps)
    }
}

impl FromStr for SweepSpec {
    type Err = Error;

    /// Parses `<min>:<max>:<steps>` in meters.
    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.split(':').collect();
        let bad = |why: String| Error::InvalidSweep(format!("{s:?}: {why}"));
        let [min, max, steps] = parts.as_slice() else {
            return Err(bad("expected <min>:<max>:<steps>".into()));
        };
        let min = min.trim().parse::<f64>().map_err(|e| bad(e.to_string()))?;
        let max = max.trim().parse::<f64>().map_err(|e| bad(e.to_string()))?;
        let steps = steps
            .trim()
            .parse::<usize>()
            .map_err(|e| bad(e.to_string()))?;
        Self::new(min, max, steps, SweepUnits::Meters)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn symmetric_grid_is_exactly_mirrored() {
        let s = SweepSpec::default_d_over_screen();
        let v = s.values();
        assert_eq!(v.len(), 2001);
        assert_eq!(v[0], -0.5);
        assert_eq!(v[2000], 0.5);
        assert_eq!(v[1000], 0.0);
        for (a, b) in v.iter().zip(v.iter().rev()) {
            assert_eq!(*a, -*b);
        }
        let coords = s.coordinates(&SlitGeometry::reference());
        assert_eq!(coords[0].value(), -0.625);
        for (a, b) in coords.iter().zip(coords.iter().rev()) {
            assert_eq!(a.value(), -b.value());
        }
    }

    #[test]
    fn parsing() {
        let s: SweepSpec = "-0.2:0.2:5".parse().unwrap();
        for (got, want) in s.values().iter().zip([-0.2, -0.1, 0.0, 0.1, 0.2]) {
            assert!((got - want).abs() < 1e-16);
        }
        assert_eq!(s.units, SweepUnits::Meters);
        assert!("1:0:3".parse::<SweepSpec>().is_err());
        assert!("0:1:0".parse::<SweepSpec>().is_err());
        assert!("0:1".parse::<SweepSpec>().is_err());
        assert!("0:1:1".parse::<SweepSpec>().is_err());
        assert_eq!(
            "0.3:0.3:1".parse::<SweepSpec>().unwrap().values(),
            vec![0.3]
        );
    }
}
