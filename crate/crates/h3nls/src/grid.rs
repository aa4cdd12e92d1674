//! Uniform radial grid with Dirichlet ends.
//!
//! The reduced profile `h` lives on the interior nodes `r_j = j·dr`,
//! `j = 1..=n`, with `dr = r_max/(n+1)` and the convention
//! `h(0) = h(r_max) = 0`.  The dual grid carries the sine-transform
//! frequencies `λ_m = mπ/r_max`, `m = 1..=n`.

use crate::error::Error;
use crate::Result;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RadialGrid {
    r_max: f64,
    n: usize,
}

impl RadialGrid {
    pub fn new(r_max: f64, n: usize) -> Result<Self> {
        if !(r_max > 0.0) {
            return Err(Error::InvalidConfig(format!("r_max must be positive, got {r_max}")));
        }
        if n < 16 {
            return Err(Error::InvalidConfig(format!("grid needs at least 16 interior nodes, got {n}")));
        }
        Ok(Self { r_max, n })
    }

    pub fn r_max(&self) -> f64 {
        self.r_max
    }

    /// Number of interior nodes.
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn dr(&self) -> f64 {
        self.r_max / (self.n + 1) as f64
    }

    /// Interior node `r_j = j·dr` for `j = 1..=n` (argument is zero-based).
    pub fn node(&self, idx: usize) -> f64 {
        debug_assert!(idx < self.n);
        (idx + 1) as f64 * self.dr()
    }

    pub fn nodes(&self) -> Vec<f64> {
        (0..self.n).map(|j| self.node(j)).collect()
    }

    /// Sine-transform frequency `λ_m = mπ/r_max` for `m = 1..=n` (zero-based argument).
    pub fn lambda(&self, idx: usize) -> f64 {
        debug_assert!(idx < self.n);
        (idx + 1) as f64 * std::f64::consts::PI / self.r_max
    }

    pub fn lambdas(&self) -> Vec<f64> {
        (0..self.n).map(|m| self.lambda(m)).collect()
    }

    pub fn ensure_matches(&self, other: &RadialGrid, what: &str) -> Result<()> {
        if self == other {
            Ok(())
        } else {
            Err(Error::GridMismatch(format!(
                "{what}: ({}, {}) vs ({}, {})",
                self.r_max, self.n, other.r_max, other.n
            )))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn spacing_and_duals() {
        let g = RadialGrid::new(30.0, 4096).unwrap();
        assert!((g.dr() - 30.0 / 4097.0).abs() < 1e-15);
        assert!((g.node(0) - g.dr()).abs() < 1e-15);
        assert!((g.node(4095) - (30.0 - g.dr())).abs() < 1e-12);
        assert!((g.lambda(0) - std::f64::consts::PI / 30.0).abs() < 1e-15);
    }

    #[test]
    fn rejects_degenerate_grids() {
        assert!(RadialGrid::new(0.0, 64).is_err());
        assert!(RadialGrid::new(10.0, 8).is_err());
    }
}
