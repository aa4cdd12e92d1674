//! Deterministic corpora of test fields.
//!
//! Every corpus is generated from an explicit seed through ChaCha8 so that
//! corpus-level verdicts (fitted constants, regression baselines, JSON
//! summaries) are reproducible bit-for-bit across runs and thread counts.

use num_complex::Complex64;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::field::{Geometry, RadialField};
use crate::grid::RadialGrid;

/// Gaussian annulus `A·exp(−(r−c)²/(2σ²))` (centered bump when `c = 0`).
pub fn gaussian_bump(grid: RadialGrid, geometry: Geometry, amplitude: f64, center: f64, sigma: f64) -> RadialField {
    RadialField::from_u_profile(grid, geometry, move |r| {
        let d = (r - center) / sigma;
        Complex64::new(amplitude * (-0.5 * d * d).exp(), 0.0)
    })
}

/// Compactly supported mollifier `A·exp(1 − 1/(1 − (r/σ)²))` on `r < σ`.
pub fn mollifier_bump(grid: RadialGrid, geometry: Geometry, amplitude: f64, sigma: f64) -> RadialField {
    RadialField::from_u_profile(grid, geometry, move |r| {
        let s = r / sigma;
        if s >= 1.0 {
            Complex64::ZERO
        } else {
            Complex64::new(amplitude * (1.0 - (1.0 - s * s).recip()).exp(), 0.0)
        }
    })
}

/// A single random smooth decayed field: a few Gaussian bumps with random
/// widths, centers, amplitudes and phases.
pub fn random_field(grid: RadialGrid, geometry: Geometry, seed: u64) -> RadialField {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let bumps = rng.random_range(1..=3usize);
    let params: Vec<(f64, f64, f64, f64)> = (0..bumps)
        .map(|_| {
            let amp = rng.random_range(0.2..1.5);
            let center = rng.random_range(0.0..grid.r_max() * 0.3);
            let sigma = rng.random_range(0.5..2.0);
            let phase = rng.random_range(0.0..std::f64::consts::TAU);
            (amp, center, sigma, phase)
        })
        .collect();
    RadialField::from_u_profile(grid, geometry, move |r| {
        let mut acc = Complex64::ZERO;
        for &(amp, center, sigma, phase) in &params {
            let d = (r - center) / sigma;
            acc += Complex64::from_polar(amp * (-0.5 * d * d).exp(), phase);
        }
        acc
    })
}

/// Seeded corpus of `count` smooth decayed fields mixing the bump families.
pub fn standard_corpus(grid: RadialGrid, geometry: Geometry, count: usize, seed: u64) -> Vec<RadialField> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|k| match k % 4 {
            0 => gaussian_bump(
                grid,
                geometry,
                rng.random_range(0.3..1.2),
                0.0,
                rng.random_range(0.6..2.5),
            ),
            1 => gaussian_bump(
                grid,
                geometry,
                rng.random_range(0.3..1.2),
                rng.random_range(1.0..4.0),
                rng.random_range(0.5..1.5),
            ),
            2 => mollifier_bump(grid, geometry, rng.random_range(0.4..1.5), rng.random_range(1.0..4.0)),
            _ => random_field(grid, geometry, rng.random()),
        })
        .collect()
}

/// High-frequency, small-amplitude noise field (a remainder-like datum for
/// profile-decomposition tests).
pub fn high_frequency_noise(grid: RadialGrid, geometry: Geometry, amplitude: f64, seed: u64) -> RadialField {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = grid.n();
    let coeffs: Vec<Complex64> = (0..n)
        .map(|m| {
            // spread spectral mass over the top octave only
            if m > n / 2 {
                Complex64::from_polar(
                    amplitude * rng.random_range(0.0..1.0) / (n as f64).sqrt(),
                    rng.random_range(0.0..std::f64::consts::TAU),
                )
            } else {
                Complex64::ZERO
            }
        })
        .collect();
    crate::transform::helgason_inverse(&crate::transform::SpectralField::new(grid, geometry, coeffs))
}

/// Rescales a field so that its quintic energy `E¹` equals `target` (useful
/// for "unit-energy data" runs).  Solves `½a²K + (a⁶/6)P = target` for the
/// amplitude factor `a` by bisection.
pub fn normalize_energy(f: &RadialField, target: f64) -> RadialField {
    let report = f.compute_energy();
    assert!(report.energy > 0.0, "cannot normalize the zero field");
    let k = 2.0 * report.kinetic;
    let p = 6.0 * report.potential;
    let value = |a: f64| 0.5 * a * a * k + a.powi(6) * p / 6.0;
    let (mut lo, mut hi) = (0.0f64, 1.0f64);
    while value(hi) < target {
        hi *= 2.0;
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if value(mid) < target {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    f.scale(Complex64::new(0.5 * (lo + hi), 0.0))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn corpus_is_deterministic() {
        let grid = RadialGrid::new(20.0, 256).unwrap();
        let a = standard_corpus(grid, Geometry::Hyperbolic, 6, 7);
        let b = standard_corpus(grid, Geometry::Hyperbolic, 6, 7);
        for (fa, fb) in a.iter().zip(&b) {
            assert_eq!(fa.h(), fb.h());
        }
    }

    #[test]
    fn normalization_hits_target_energy() {
        let grid = RadialGrid::new(20.0, 512).unwrap();
        let f = gaussian_bump(grid, Geometry::Hyperbolic, 0.3, 0.0, 1.0);
        let unit = normalize_energy(&f, 1.0);
        assert!((unit.compute_energy().energy - 1.0).abs() < 1e-10);
    }

    #[test]
    fn corpus_fields_are_decayed() {
        let grid = RadialGrid::new(25.0, 512).unwrap();
        for f in standard_corpus(grid, Geometry::Hyperbolic, 12, 3) {
            assert!(crate::transform::helgason_forward(&f).is_ok());
        }
    }
}
