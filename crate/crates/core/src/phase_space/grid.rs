use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A closed, uniformly sampled interval `[min, max]` with `n` points.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Axis {
    pub min: f64,
    pub max: f64,
    pub n: usize,
}

impl Axis {
    pub fn new(min: f64, max: f64, n: usize) -> Result<Self> {
        if !(min.is_finite() && max.is_finite()) {
            return Err(Error::Config(format!("non-finite axis bounds [{min}, {max}]")));
        }
        if !(min < max) {
            return Err(Error::Config(format!("axis bounds not ordered: [{min}, {max}]")));
        }
        if n < 2 {
            return Err(Error::Config(format!("axis needs at least 2 points, got {n}")));
        }
        Ok(Self { min, max, n })
    }

    pub fn step(&self) -> f64 {
        (self.max - self.min) / (self.n - 1) as f64
    }

    /// Sample `i`; the last sample is exactly `max`.
    pub fn value(&self, i: usize) -> f64 {
        if i + 1 == self.n {
            self.max
        } else {
            self.min + i as f64 * self.step()
        }
    }

    pub fn values(&self) -> Vec<f64> {
        (0..self.n).map(|i| self.value(i)).collect()
    }

    /// Fractional index of `v`; may fall outside `[0, n-1]`.
    pub fn position(&self, v: f64) -> f64 {
        (v - self.min) / self.step()
    }

    /// Length of the periodic cell `n * step` used by discrete Fourier transforms.
    pub fn period(&self) -> f64 {
        self.n as f64 * self.step()
    }

    /// Indices `i` with `lo <= value(i) <= hi`.
    pub fn indices_within(&self, lo: f64, hi: f64) -> Vec<usize> {
        (0..self.n)
            .filter(|&i| {
                let v = self.value(i);
                v >= lo && v <= hi
            })
            .collect()
    }
}

/// Uniform lattice on phase space. Samples are stored row-major: x outer, p inner.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhaseSpaceGrid {
    pub x: Axis,
    pub p: Axis,
}

impl PhaseSpaceGrid {
    pub fn new(x: Axis, p: Axis) -> Self {
        Self { x, p }
    }

    pub fn len(&self) -> usize {
        self.x.n * self.p.n
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn index(&self, ix: usize, ip: usize) -> usize {
        ix * self.p.n + ip
    }

    pub fn point(&self, ix: usize, ip: usize) -> (f64, f64) {
        (self.x.value(ix), self.p.value(ip))
    }

    pub fn dx(&self) -> f64 {
        self.x.step()
    }

    pub fn dp(&self) -> f64 {
        self.p.step()
    }

    /// Default lattice for checks: x in [-6, 1], p in [-6, 6], 512 x 512.
    pub fn default_checks() -> Self {
        make_grid(-6.0, 1.0, 512, -6.0, 6.0, 512).expect("static grid is valid")
    }
}

pub fn make_grid(
    x_min: f64,
    x_max: f64,
    n_x: usize,
    p_min: f64,
    p_max: f64,
    n_p: usize,
) -> Result<PhaseSpaceGrid> {
    Ok(PhaseSpaceGrid {
        x: Axis::new(x_min, x_max, n_x)?,
        p: Axis::new(p_min, p_max, n_p)?,
    })
}

/// Rectangular region of phase space.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Window {
    pub x_min: f64,
    pub x_max: f64,
    pub p_min: f64,
    pub p_max: f64,
}

impl Window {
    pub fn new(x_min: f64, x_max: f64, p_min: f64, p_max: f64) -> Result<Self> {
        if !(x_min < x_max && p_min < p_max) {
            return Err(Error::Window(format!(
                "unordered window x [{x_min}, {x_max}], p [{p_min}, {p_max}]"
            )));
        }
        Ok(Self { x_min, x_max, p_min, p_max })
    }

    pub fn contains(&self, x: f64, p: f64) -> bool {
        x >= self.x_min && x <= self.x_max && p >= self.p_min && p <= self.p_max
    }

    pub fn grid(&self, n_x: usize, n_p: usize) -> Result<PhaseSpaceGrid> {
        make_grid(self.x_min, self.x_max, n_x, self.p_min, self.p_max, n_p)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn spacing_from_counts() {
        let g = make_grid(-5.0, 0.0, 6, -1.0, 1.0, 3).unwrap();
        assert_eq!(g.dx(), 1.0);
        assert_eq!(g.dp(), 1.0);
        assert_eq!(g.x.value(0), -5.0);
        assert_eq!(g.x.value(5), 0.0);
        assert_eq!(g.p.value(2), 1.0);
    }

    #[test]
    fn two_by_two_has_four_points() {
        let g = make_grid(0.0, 1.0, 2, 0.0, 1.0, 2).unwrap();
        assert_eq!(g.len(), 4);
    }

    #[test]
    fn degenerate_and_reversed_bounds_rejected() {
        assert!(matches!(make_grid(-5.0, -5.0, 4, 0.0, 1.0, 4), Err(Error::Config(_))));
        assert!(matches!(make_grid(1.0, 0.0, 4, 0.0, 1.0, 4), Err(Error::Config(_))));
        assert!(matches!(make_grid(0.0, 1.0, 1, 0.0, 1.0, 4), Err(Error::Config(_))));
        assert!(matches!(make_grid(0.0, 1.0, 4, 0.0, 1.0, 0), Err(Error::Config(_))));
    }

    #[test]
    fn endpoints_exact_for_awkward_spacing() {
        let a = Axis::new(-6.0, 1.0, 512).unwrap();
        assert_eq!(a.value(511), 1.0);
        assert_eq!(a.value(0), -6.0);
    }
}
