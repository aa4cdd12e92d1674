//! Hyperboloid-model geometry of ℍ³.
//!
//! ℍ³ is realized as the upper sheet `{x ∈ ℝ⁴ : [x,x] = 1, x⁰ > 0}` of the
//! unit hyperboloid in Minkowski space, where
//!
//! ```text
//!     [x, y] = x⁰y⁰ − x¹y¹ − x²y² − x³y³.
//! ```
//!
//! Isometries are the matrices of the connected Lorentz group SO(3,1) acting
//! linearly; the rotation subgroup fixes the origin `(1,0,0,0)` and the boost
//! subgroup `a_s` moves the origin along a geodesic with `d(𝟎, a_s·𝟎) = |s|`.
//! Distances come from `cosh d(p,q) = [p,q]`.
//!
//! The chart `Ψ_h(v) = h·(√(1+|v|²), v)` identifies ℝ³ with ℍ³; under `Ψ_I`
//! the volume measure pulls back to `(1+|v|²)^{−1/2} dv`, so for radial
//! integrands `dμ = 4π sinh²r dr` (this fixes the Haar normalization used by
//! every quadrature in the crate).

use crate::error::Error;
use crate::Result;

/// `diag(−1, 1, 1, 1)`; `[x,y] = −ᵗx·J·y`.
const MINKOWSKI_J: [f64; 4] = [-1.0, 1.0, 1.0, 1.0];

/// Tolerance on the Lorentz-group invariants accepted by isometry application.
const GROUP_TOLERANCE: f64 = 1e-8;

/// The Minkowski bilinear form `x⁰y⁰ − x¹y¹ − x²y² − x³y³`.
pub fn minkowski_form(x: &[f64; 4], y: &[f64; 4]) -> f64 {
    x[0] * y[0] - x[1] * y[1] - x[2] * y[2] - x[3] * y[3]
}

/// A point on the upper hyperboloid sheet.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Point(pub [f64; 4]);

impl Point {
    /// The origin `𝟎 = (1,0,0,0)`.
    pub fn origin() -> Self {
        Point([1.0, 0.0, 0.0, 0.0])
    }

    /// Builds a point from a 4-vector, projecting back onto `[x,x] = 1`.
    pub fn try_new(x: [f64; 4]) -> Result<Self> {
        let q = minkowski_form(&x, &x);
        if !(q > 0.0) || x[0] <= 0.0 {
            return Err(Error::InvalidGroupElement(format!(
                "4-vector is not on the upper sheet ([x,x] = {q:.3e}, x0 = {:.3e})",
                x[0]
            )));
        }
        let scale = q.sqrt().recip();
        Ok(Point([x[0] * scale, x[1] * scale, x[2] * scale, x[3] * scale]))
    }

    pub fn coords(&self) -> &[f64; 4] {
        &self.0
    }

    /// Point at geodesic distance `r` from the origin along the first axis.
    pub fn axial(r: f64) -> Self {
        Point([r.cosh(), r.sinh(), 0.0, 0.0])
    }
}

/// An element of SO(3,1), stored as a row-major 4×4 matrix.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GroupElement(pub [[f64; 4]; 4]);

impl GroupElement {
    pub fn identity() -> Self {
        let mut m = [[0.0; 4]; 4];
        for (i, row) in m.iter_mut().enumerate() {
            row[i] = 1.0;
        }
        GroupElement(m)
    }

    /// The boost `a_s` of the commutative subgroup: a hyperbolic rotation in
    /// the (x⁰, x¹) plane.
    pub fn boost(s: f64) -> Self {
        let (ch, sh) = (s.cosh(), s.sinh());
        GroupElement([
            [ch, sh, 0.0, 0.0],
            [sh, ch, 0.0, 0.0],
            [0.0, 0.0, 1.0, 0.0],
            [0.0, 0.0, 0.0, 1.0],
        ])
    }

    /// Rotation by `angle` about the spatial `axis` (Rodrigues), embedded as
    /// an element of the subgroup fixing the origin.
    pub fn rotation(axis: [f64; 3], angle: f64) -> Self {
        let norm = (axis[0] * axis[0] + axis[1] * axis[1] + axis[2] * axis[2]).sqrt();
        assert!(norm > 0.0, "rotation axis must be nonzero");
        let (ux, uy, uz) = (axis[0] / norm, axis[1] / norm, axis[2] / norm);
        let (c, s) = (angle.cos(), angle.sin());
        let t = 1.0 - c;
        let r = [
            [c + ux * ux * t, ux * uy * t - uz * s, ux * uz * t + uy * s],
            [uy * ux * t + uz * s, c + uy * uy * t, uy * uz * t - ux * s],
            [uz * ux * t - uy * s, uz * uy * t + ux * s, c + uz * uz * t],
        ];
        let mut m = [[0.0; 4]; 4];
        m[0][0] = 1.0;
        for i in 0..3 {
            for j in 0..3 {
                m[i + 1][j + 1] = r[i][j];
            }
        }
        GroupElement(m)
    }

    pub fn compose(&self, other: &GroupElement) -> GroupElement {
        let mut out = [[0.0; 4]; 4];
        for i in 0..4 {
            for j in 0..4 {
                let mut acc = 0.0;
                for k in 0..4 {
                    acc += self.0[i][k] * other.0[k][j];
                }
                out[i][j] = acc;
            }
        }
        GroupElement(out)
    }

    /// Group inverse `m⁻¹ = J·ᵗm·J`, exact for Lorentz matrices.
    pub fn inverse(&self) -> GroupElement {
        let mut out = [[0.0; 4]; 4];
        for i in 0..4 {
            for j in 0..4 {
                out[i][j] = MINKOWSKI_J[i] * self.0[j][i] * MINKOWSKI_J[j];
            }
        }
        GroupElement(out)
    }

    pub fn apply_vec(&self, x: &[f64; 4]) -> [f64; 4] {
        let mut y = [0.0; 4];
        for (i, row) in self.0.iter().enumerate() {
            y[i] = row[0] * x[0] + row[1] * x[1] + row[2] * x[2] + row[3] * x[3];
        }
        y
    }

    /// Entrywise residual of `ᵗm·J·m = J`.
    pub fn lorentz_residual(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for i in 0..4 {
            for j in 0..4 {
                let mut acc = 0.0;
                for k in 0..4 {
                    acc += self.0[k][i] * MINKOWSKI_J[k] * self.0[k][j];
                }
                let target = if i == j { MINKOWSKI_J[i] } else { 0.0 };
                worst = worst.max((acc - target).abs());
            }
        }
        worst
    }

    pub fn det(&self) -> f64 {
        let m = &self.0;
        let minor = |r: [usize; 3], c: [usize; 3]| -> f64 {
            m[r[0]][c[0]] * (m[r[1]][c[1]] * m[r[2]][c[2]] - m[r[1]][c[2]] * m[r[2]][c[1]])
                - m[r[0]][c[1]] * (m[r[1]][c[0]] * m[r[2]][c[2]] - m[r[1]][c[2]] * m[r[2]][c[0]])
                + m[r[0]][c[2]] * (m[r[1]][c[0]] * m[r[2]][c[1]] - m[r[1]][c[1]] * m[r[2]][c[0]])
        };
        m[0][0] * minor([1, 2, 3], [1, 2, 3]) - m[0][1] * minor([1, 2, 3], [0, 2, 3])
            + m[0][2] * minor([1, 2, 3], [0, 1, 3])
            - m[0][3] * minor([1, 2, 3], [0, 1, 2])
    }

    pub fn is_valid(&self) -> bool {
        self.lorentz_residual() <= GROUP_TOLERANCE
            && (self.det() - 1.0).abs() <= GROUP_TOLERANCE
            && self.0[0][0] > 0.0
    }

    /// Minkowski Gram–Schmidt on the columns; restores the group invariants
    /// after long products without changing the element beyond its drift.
    pub fn renormalize(&mut self) {
        let mut cols: Vec<[f64; 4]> = (0..4).map(|j| [self.0[0][j], self.0[1][j], self.0[2][j], self.0[3][j]]).collect();
        // Column 0 is timelike ([c,c] = 1), columns 1..3 spacelike ([c,c] = −1).
        let norm0 = minkowski_form(&cols[0], &cols[0]).max(f64::MIN_POSITIVE).sqrt();
        for v in cols[0].iter_mut() {
            *v /= norm0;
        }
        for j in 1..4 {
            for k in 0..j {
                let sign = if k == 0 { 1.0 } else { -1.0 };
                let proj = sign * minkowski_form(&cols[j], &cols[k]);
                for i in 0..4 {
                    cols[j][i] -= proj * cols[k][i];
                }
            }
            let norm = (-minkowski_form(&cols[j], &cols[j])).max(f64::MIN_POSITIVE).sqrt();
            for v in cols[j].iter_mut() {
                *v /= norm;
            }
        }
        for i in 0..4 {
            for (j, col) in cols.iter().enumerate() {
                self.0[i][j] = col[i];
            }
        }
    }
}

/// Geodesic distance `arccosh([p,q])`, clamped below at coincidence.
pub fn distance(p: &Point, q: &Point) -> f64 {
    minkowski_form(&p.0, &q.0).max(1.0).acosh()
}

/// Applies the isometry `L_g(x) = g·x` and re-projects onto the hyperboloid.
pub fn apply_isometry(g: &GroupElement, p: &Point) -> Result<Point> {
    if !g.is_valid() {
        return Err(Error::InvalidGroupElement(format!(
            "invariants violated (lorentz residual {:.3e}, det {:.6}, m00 {:.3})",
            g.lorentz_residual(),
            g.det(),
            g.0[0][0]
        )));
    }
    Point::try_new(g.apply_vec(&p.0))
}

/// The 𝔸₊ scalar of the Cartan decomposition `g = k₁ a_s k₂`:
/// `s = arccosh(g₀₀) = d(𝟎, g·𝟎)`.
pub fn cartan_abs(g: &GroupElement) -> f64 {
    g.0[0][0].max(1.0).acosh()
}

/// The chart `Ψ_h(v) = h·(√(1+|v|²), v¹, v², v³)`.
pub fn chart_psi(h: &GroupElement, v: &[f64; 3]) -> Point {
    let v2 = v[0] * v[0] + v[1] * v[1] + v[2] * v[2];
    let x = [(1.0 + v2).sqrt(), v[0], v[1], v[2]];
    Point(h.apply_vec(&x))
}

/// Inverse of [`chart_psi`]: pulls `p` back through `h` and reads off the
/// spatial components.
pub fn chart_psi_inv(h: &GroupElement, p: &Point) -> [f64; 3] {
    let q = h.inverse().apply_vec(&p.0);
    [q[1], q[2], q[3]]
}

/// Density of the pulled-back volume measure under `Ψ_I`: `(1+|v|²)^{−1/2}`.
pub fn measure_weight(v: &[f64; 3]) -> f64 {
    (1.0 + v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt().recip()
}

/// Point of the Iwasawa coordinate chart,
/// `Φ(v¹,v²,s) = (ch s + e^{−s}|v|²/2, sh s + e^{−s}|v|²/2, e^{−s}v¹, e^{−s}v²)`.
///
/// Satisfies `cosh d(𝟎, Φ) = cosh s + e^{−s}|v|²/2`.
pub fn iwasawa_chart(v1: f64, v2: f64, s: f64) -> Point {
    let q = (-s).exp() * (v1 * v1 + v2 * v2) / 2.0;
    Point([s.cosh() + q, s.sinh() + q, (-s).exp() * v1, (-s).exp() * v2])
}
