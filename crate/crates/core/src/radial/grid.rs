use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum GridKind {
    LogUniform,
    Uniform,
}

/// Points of `(0, T]`, strictly increasing; the first point is the inner cut-off.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Grid {
    pub points: Vec<f64>,
    pub kind: GridKind,
}

/// Relative tolerance on log steps for a grid to count as log-uniform.
const LOG_STEP_TOL: f64 = 1e-9;

impl Grid {
    /// `n` points from `eps` to `t_max`, equally spaced in `ln t`.
    pub fn log_uniform(eps: f64, t_max: f64, n: usize) -> Result<Self> {
        check_ends(eps, t_max, n)?;
        let (a, b) = (eps.ln(), t_max.ln());
        let h = (b - a) / (n - 1) as f64;
        let mut points: Vec<f64> = (0..n).map(|i| (a + h * i as f64).exp()).collect();
        points[0] = eps;
        points[n - 1] = t_max;
        Ok(Self {
            points,
            kind: GridKind::LogUniform,
        })
    }

    pub fn uniform(eps: f64, t_max: f64, n: usize) -> Result<Self> {
        check_ends(eps, t_max, n)?;
        let h = (t_max - eps) / (n - 1) as f64;
        let mut points: Vec<f64> = (0..n).map(|i| eps + h * i as f64).collect();
        points[n - 1] = t_max;
        Ok(Self {
            points,
            kind: GridKind::Uniform,
        })
    }

    pub fn from_points(points: Vec<f64>, kind: GridKind) -> Result<Self> {
        let g = Self { points, kind };
        g.validate()?;
        Ok(g)
    }

    pub fn validate(&self) -> Result<()> {
        if self.points.len() < 2 {
            return Err(Error::Grid(format!("{} points is too few", self.points.len())));
        }
        if !(self.points[0] > 0.0) {
            return Err(Error::Grid(format!("inner cut-off {} must be positive", self.points[0])));
        }
        for (i, w) in self.points.windows(2).enumerate() {
            if !(w[1] > w[0]) || !w[1].is_finite() {
                return Err(Error::Grid(format!("points {i} and {} are not strictly increasing", i + 1)));
            }
        }
        Ok(())
    }

    pub fn inner_cutoff(&self) -> f64 {
        self.points[0]
    }

    pub fn outer(&self) -> f64 {
        self.points[self.points.len() - 1]
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// The common step in `ln t`, or an error if the grid is not log-uniform.
    pub fn log_step(&self) -> Result<f64> {
        self.validate()?;
        let n = self.points.len();
        let h = (self.outer().ln() - self.inner_cutoff().ln()) / (n - 1) as f64;
        for w in self.points.windows(2) {
            let hi = w[1].ln() - w[0].ln();
            if (hi - h).abs() > LOG_STEP_TOL * h.max(1.0) {
                return Err(Error::Grid("points are not equally spaced in ln t".into()));
            }
        }
        Ok(h)
    }

    /// Samples `f` at every point.
    pub fn sample(&self, f: impl Fn(f64) -> f64) -> Vec<f64> {
        self.points.iter().map(|&t| f(t)).collect()
    }

    /// Like [`Grid::sample`] for fallible functions.
    pub fn try_sample(&self, f: impl Fn(f64) -> Result<f64>) -> Result<Vec<f64>> {
        self.points.iter().map(|&t| f(t)).collect()
    }
}

fn check_ends(eps: f64, t_max: f64, n: usize) -> Result<()> {
    if n < 2 {
        return Err(Error::Grid(format!("{n} points is too few")));
    }
    if !(eps > 0.0 && t_max > eps && t_max.is_finite()) {
        return Err(Error::Grid(format!("need 0 < eps < T, got eps = {eps}, T = {t_max}")));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn log_grid_ends_and_step() {
        let g = Grid::log_uniform(1e-4, 1.0, 5).unwrap();
        assert_eq!(g.inner_cutoff(), 1e-4);
        assert_eq!(g.outer(), 1.0);
        assert!((g.log_step().unwrap() - 10f64.ln()).abs() < 1e-12);
        assert!(Grid::uniform(0.1, 1.0, 10).unwrap().log_step().is_err());
    }

    #[test]
    fn degenerate_grids() {
        assert!(Grid::log_uniform(0.0, 1.0, 10).is_err());
        assert!(Grid::log_uniform(1.0, 1.0, 10).is_err());
        assert!(Grid::uniform(0.1, 1.0, 1).is_err());
        assert!(Grid::from_points(vec![0.1, 0.1, 0.2], GridKind::Uniform).is_err());
    }
}
