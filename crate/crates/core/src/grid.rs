//! Sample times and sampled signals.

use serde::Serialize;

use crate::error::{Error, Result};

/// Strictly increasing, finite, nonnegative sample times.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TimeGrid {
    times: Vec<f64>,
}

impl TimeGrid {
    pub fn new(times: Vec<f64>) -> Result<Self> {
        if times.is_empty() {
            return Err(Error::invalid("time grid is empty"));
        }
        if let Some(t) = times.iter().find(|t| !t.is_finite() || **t < 0.0) {
            return Err(Error::invalid(format!("grid time {t} must be finite and >= 0")));
        }
        if let Some(i) = times.windows(2).position(|w| w[1] <= w[0]) {
            return Err(Error::invalid(format!(
                "grid times must be strictly increasing (index {})",
                i + 1
            )));
        }
        Ok(TimeGrid { times })
    }

    /// `points` equally spaced times from `t0` to `t1` inclusive.
    pub fn linear(t0: f64, t1: f64, points: usize) -> Result<Self> {
        Self::check_span(t0, t1, points)?;
        if points == 1 {
            return Self::new(vec![t0]);
        }
        let h = (t1 - t0) / (points - 1) as f64;
        let mut times: Vec<f64> = (0..points).map(|i| t0 + h * i as f64).collect();
        times[points - 1] = t1;
        Self::new(times)
    }

    /// `points` log-spaced times from `t0 > 0` to `t1` inclusive.
    pub fn geometric(t0: f64, t1: f64, points: usize) -> Result<Self> {
        Self::check_span(t0, t1, points)?;
        if t0 <= 0.0 {
            return Err(Error::invalid("geometric grid requires t-min > 0"));
        }
        if points == 1 {
            return Self::new(vec![t0]);
        }
        // base 10 keeps decade points exact
        let (l0, l1) = (t0.log10(), t1.log10());
        let h = (l1 - l0) / (points - 1) as f64;
        let mut times: Vec<f64> = (0..points).map(|i| 10f64.powf(l0 + h * i as f64)).collect();
        times[0] = t0;
        times[points - 1] = t1;
        Self::new(times)
    }

    fn check_span(t0: f64, t1: f64, points: usize) -> Result<()> {
        if points == 0 {
            return Err(Error::invalid("grid needs at least one point"));
        }
        if !(t0.is_finite() && t1.is_finite()) || t0 < 0.0 {
            return Err(Error::invalid(format!("invalid grid span [{t0}, {t1}]")));
        }
        if points > 1 && t1 <= t0 {
            return Err(Error::invalid(format!("grid needs t-max > t-min, got [{t0}, {t1}]")));
        }
        Ok(())
    }

    pub fn times(&self) -> &[f64] {
        &self.times
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn first(&self) -> f64 {
        self.times[0]
    }

    pub fn last(&self) -> f64 {
        self.times[self.times.len() - 1]
    }

    /// Largest spacing between consecutive samples, 0 for a single point.
    pub fn max_step(&self) -> f64 {
        self.times
            .windows(2)
            .map(|w| w[1] - w[0])
            .fold(0.0, f64::max)
    }
}

/// Values sampled on a [`TimeGrid`].
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SignalTrace {
    grid: TimeGrid,
    values: Vec<f64>,
}

impl SignalTrace {
    pub fn new(grid: TimeGrid, values: Vec<f64>) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(Error::invalid(format!(
                "trace has {} values for {} times",
                values.len(),
                grid.len()
            )));
        }
        if let Some(v) = values.iter().find(|v| !v.is_finite()) {
            return Err(Error::invalid(format!("trace value {v} is not finite")));
        }
        Ok(SignalTrace { grid, values })
    }

    /// Samples `f` on every grid time.
    pub fn sample(grid: TimeGrid, f: impl Fn(f64) -> f64) -> Result<Self> {
        let values = grid.times().iter().map(|&t| f(t)).collect();
        Self::new(grid, values)
    }

    pub fn grid(&self) -> &TimeGrid {
        &self.grid
    }

    pub fn times(&self) -> &[f64] {
        self.grid.times()
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}
