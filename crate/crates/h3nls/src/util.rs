//! Small numerical helpers shared across modules.

/// `ln(sinh r)` without overflow for large `r`.
///
/// Uses `sinh r = e^r (1 − e^{−2r}) / 2`.
pub fn ln_sinh(r: f64) -> f64 {
    debug_assert!(r > 0.0);
    r + ((1.0 - (-2.0 * r).exp()) / 2.0).ln()
}

/// `r / sinh r` with the removable singularity at `r = 0` handled.
pub fn r_over_sinh(r: f64) -> f64 {
    if r.abs() < 1e-6 {
        1.0 - r * r / 6.0
    } else {
        r / r.sinh()
    }
}

/// Trapezoidal quadrature of samples `ys` against abscissae `xs`.
pub fn trapezoid(xs: &[f64], ys: &[f64]) -> f64 {
    assert_eq!(xs.len(), ys.len());
    let mut acc = 0.0;
    for i in 1..xs.len() {
        acc += 0.5 * (ys[i] + ys[i - 1]) * (xs[i] - xs[i - 1]);
    }
    acc
}

/// `count` points spaced uniformly on `[a, b]`, endpoints included.
pub fn linspace(a: f64, b: f64, count: usize) -> Vec<f64> {
    assert!(count >= 2);
    let step = (b - a) / (count - 1) as f64;
    (0..count).map(|i| a + step * i as f64).collect()
}

/// `count` points spaced geometrically on `[a, b]`, endpoints included.
pub fn logspace(a: f64, b: f64, count: usize) -> Vec<f64> {
    assert!(a > 0.0 && b > a && count >= 2);
    let step = (b / a).ln() / (count - 1) as f64;
    (0..count).map(|i| a * (step * i as f64).exp()).collect()
}

/// Least-squares slope and intercept of `y = slope·x + intercept`.
pub fn linear_fit(xs: &[f64], ys: &[f64]) -> (f64, f64) {
    assert_eq!(xs.len(), ys.len());
    let n = xs.len() as f64;
    let sx: f64 = xs.iter().sum();
    let sy: f64 = ys.iter().sum();
    let sxx: f64 = xs.iter().map(|x| x * x).sum();
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| x * y).sum();
    let slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    let intercept = (sy - slope * sx) / n;
    (slope, intercept)
}

/// Log–log power-law fit: returns the fitted exponent of `y ≈ C·x^e`.
pub fn power_law_exponent(xs: &[f64], ys: &[f64]) -> f64 {
    let lx: Vec<f64> = xs.iter().map(|x| x.ln()).collect();
    let ly: Vec<f64> = ys.iter().map(|y| y.ln()).collect();
    linear_fit(&lx, &ly).0
}

/// Composite Simpson quadrature of `f` on `[a, b]` with `2·half + 1` nodes.
pub fn simpson<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, half: usize) -> f64 {
    let n = 2 * half;
    let dx = (b - a) / n as f64;
    let mut acc = f(a) + f(b);
    for i in 1..n {
        let w = if i % 2 == 1 { 4.0 } else { 2.0 };
        acc += w * f(a + dx * i as f64);
    }
    acc * dx / 3.0
}

/// C^∞ transition: 1 for `x ≤ 0`, 0 for `x ≥ 1`, glued by the standard
/// `e^{−1/x}` partition of unity.
pub fn smooth_transition(x: f64) -> f64 {
    if x <= 0.0 {
        1.0
    } else if x >= 1.0 {
        0.0
    } else {
        let f = |t: f64| (-t.recip()).exp();
        f(1.0 - x) / (f(1.0 - x) + f(x))
    }
}

/// Relative difference `|a − b| / max(|a|, |b|)`, zero when both vanish.
pub fn rel_diff(a: f64, b: f64) -> f64 {
    let scale = a.abs().max(b.abs());
    if scale == 0.0 {
        0.0
    } else {
        (a - b).abs() / scale
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ln_sinh_matches_direct_eval() {
        for &r in &[1e-3, 0.5, 2.0, 20.0] {
            assert!((ln_sinh(r) - r.sinh().ln()).abs() < 1e-12);
        }
        // direct sinh overflows near r = 750; the stable form must not
        assert!((ln_sinh(800.0) - (800.0 - std::f64::consts::LN_2)).abs() < 1e-12);
    }

    #[test]
    fn r_over_sinh_limit() {
        assert!((r_over_sinh(1e-9) - 1.0).abs() < 1e-12);
        assert!((r_over_sinh(2.0) - 2.0 / 2.0f64.sinh()).abs() < 1e-15);
    }

    #[test]
    fn linear_fit_recovers_line() {
        let xs = linspace(0.0, 5.0, 11);
        let ys: Vec<f64> = xs.iter().map(|x| -1.25 * x + 0.5).collect();
        let (slope, intercept) = linear_fit(&xs, &ys);
        assert!((slope + 1.25).abs() < 1e-12);
        assert!((intercept - 0.5).abs() < 1e-12);
    }

    #[test]
    fn simpson_integrates_polynomial_exactly() {
        // Simpson is exact on cubics.
        let value = simpson(|x| x * x * x - 2.0 * x, 0.0, 2.0, 8);
        assert!((value - (4.0 - 4.0)).abs() < 1e-13);
    }
}
