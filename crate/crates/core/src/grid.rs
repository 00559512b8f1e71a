//! Sample grids over C^2, described by per-axis ranges on
//! `(re1, im1, re2, im2)`.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::jet::Point;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct AxisRange {
    pub min: f64,
    pub max: f64,
    pub count: usize,
}

impl AxisRange {
    pub fn new(min: f64, max: f64, count: usize) -> Self {
        Self { min, max, count }
    }

    /// Evenly spaced values; a single-point axis sits at `min`.
    pub fn values(&self) -> Vec<f64> {
        if self.count == 1 {
            return vec![self.min];
        }
        let step = (self.max - self.min) / (self.count - 1) as f64;
        (0..self.count)
            .map(|k| self.min + step * k as f64)
            .collect()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct RandomSampling {
    pub count: usize,
    pub seed: u64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    /// Ranges for `re1, im1, re2, im2`.
    pub axes: [AxisRange; 4],
    /// When set, points are drawn uniformly from the axis box instead of
    /// taking the tensor grid.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub random: Option<RandomSampling>,
    /// Keeps only points with `min <= |z1|^2 + |z2|^2 <= max`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub norm_sq_range: Option<[f64; 2]>,
    /// Extra points appended after the generated ones, as `[re1, im1, re2, im2]`.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub extra_points: Vec<[f64; 4]>,
}

impl Default for GridSpec {
    /// 8 points per axis over `[-1, 1]^4`.
    fn default() -> Self {
        Self::uniform(-1.0, 1.0, 8)
    }
}

impl GridSpec {
    pub fn uniform(min: f64, max: f64, count: usize) -> Self {
        Self {
            axes: [AxisRange::new(min, max, count); 4],
            random: None,
            norm_sq_range: None,
            extra_points: Vec::new(),
        }
    }

    pub fn random(min: f64, max: f64, count: usize, seed: u64) -> Self {
        Self {
            random: Some(RandomSampling { count, seed }),
            ..Self::uniform(min, max, 1)
        }
    }

    pub fn explicit(points: Vec<[f64; 4]>) -> Self {
        Self {
            axes: [AxisRange::new(0.0, 0.0, 1); 4],
            random: Some(RandomSampling { count: 0, seed: 0 }),
            norm_sq_range: None,
            extra_points: points,
        }
    }

    pub fn with_norm_sq_range(mut self, min: f64, max: f64) -> Self {
        self.norm_sq_range = Some([min, max]);
        self
    }

    pub fn with_extra_points(mut self, pts: impl IntoIterator<Item = [f64; 4]>) -> Self {
        self.extra_points.extend(pts);
        self
    }

    pub fn validate(&self) -> Result<()> {
        for (k, a) in self.axes.iter().enumerate() {
            if !(a.min.is_finite() && a.max.is_finite()) || a.min > a.max {
                return Err(Error::InvalidGrid(format!(
                    "axis {k}: need finite min <= max"
                )));
            }
            if a.count == 0 {
                return Err(Error::InvalidGrid(format!(
                    "axis {k}: count must be at least 1"
                )));
            }
        }
        if let Some([lo, hi]) = self.norm_sq_range {
            if !(lo.is_finite() && hi.is_finite()) || lo > hi || lo < 0.0 {
                return Err(Error::InvalidGrid(
                    "norm_sq_range needs 0 <= min <= max".into(),
                ));
            }
        }
        Ok(())
    }

    /// Generated points in deterministic order, followed by the extra points.
    pub fn points(&self) -> Result<Vec<Point>> {
        self.validate()?;
        let keep = |p: &[f64; 4]| match self.norm_sq_range {
            Some([lo, hi]) => {
                let n = p.iter().map(|x| x * x).sum::<f64>();
                lo <= n && n <= hi
            }
            None => true,
        };
        let mut raw: Vec<[f64; 4]> = Vec::new();
        match self.random {
            Some(RandomSampling { count, seed }) => {
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                // rejection sampling against the annulus filter; bounded effort
                let max_draws = count.saturating_mul(1000).max(count);
                let mut draws = 0;
                while raw.len() < count && draws < max_draws {
                    draws += 1;
                    let p: [f64; 4] = std::array::from_fn(|k| {
                        let a = &self.axes[k];
                        if a.min == a.max {
                            a.min
                        } else {
                            rng.gen_range(a.min..=a.max)
                        }
                    });
                    if keep(&p) {
                        raw.push(p);
                    }
                }
            }
            None => {
                let vals: Vec<Vec<f64>> = self.axes.iter().map(AxisRange::values).collect();
                for &a in &vals[0] {
                    for &b in &vals[1] {
                        for &c in &vals[2] {
                            for &d in &vals[3] {
                                let p = [a, b, c, d];
                                if keep(&p) {
                                    raw.push(p);
                                }
                            }
                        }
                    }
                }
            }
        }
        raw.extend(self.extra_points.iter().copied());
        if raw.is_empty() {
            return Err(Error::EmptyGrid);
        }
        Ok(raw.into_iter().map(to_point).collect())
    }
}

pub fn to_point(r: [f64; 4]) -> Point {
    (Complex64::new(r[0], r[1]), Complex64::new(r[2], r[3]))
}

pub fn from_point(p: Point) -> [f64; 4] {
    [p.0.re, p.0.im, p.1.re, p.1.im]
}

/// Lexicographic order on `(re1, im1, re2, im2)`.
pub fn point_cmp(a: &Point, b: &Point) -> std::cmp::Ordering {
    let (x, y) = (from_point(*a), from_point(*b));
    x.iter()
        .zip(y.iter())
        .map(|(p, q)| p.total_cmp(q))
        .find(|o| o.is_ne())
        .unwrap_or(std::cmp::Ordering::Equal)
}
