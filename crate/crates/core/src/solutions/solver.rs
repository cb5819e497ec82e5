//! Crank–Nicolson solver for radial heat flow on a model manifold.
//!
//! Discretises `∂_t u = u'' + (n-1)(φ'/φ) u'` on `[r_lo, r_hi]` with Dirichlet
//! data at both ends, central differences in space and trapezoidal averaging
//! in time. Each step is one tridiagonal solve.

use crate::error::{Error, Result};
use crate::geometry::ModelManifold;

use super::grid::GridSolution;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GridSpec {
    pub r_lo: f64,
    pub r_hi: f64,
    /// Number of spatial cells (nodes = cells + 1).
    pub cells: usize,
    pub t_lo: f64,
    pub t_hi: f64,
    pub steps: usize,
}

impl GridSpec {
    pub fn h(&self) -> f64 {
        (self.r_hi - self.r_lo) / self.cells as f64
    }

    pub fn tau(&self) -> f64 {
        (self.t_hi - self.t_lo) / self.steps as f64
    }

    /// Same box with both steps halved.
    pub fn refined(&self) -> Self {
        GridSpec { cells: self.cells * 2, steps: self.steps * 2, ..*self }
    }

    fn validate(&self, m: &ModelManifold) -> Result<()> {
        if !(self.r_hi > self.r_lo) || !(self.t_hi > self.t_lo) {
            return Err(Error::param(format!("empty grid box {self:?}")));
        }
        if self.cells < 3 || self.steps < 2 {
            return Err(Error::param("grid needs at least 3 cells and 2 steps"));
        }
        if m.n() >= 2 && !(self.r_lo > 0.0) {
            return Err(Error::domain("radial grids in n >= 2 must stay off the pole"));
        }
        if self.r_hi > m.radius_limit() {
            return Err(Error::domain("grid extends beyond the profile domain"));
        }
        Ok(())
    }
}

/// Thomas algorithm; `sub[0]` and `sup[n-1]` are ignored.
pub fn solve_tridiagonal(sub: &[f64], diag: &[f64], sup: &[f64], rhs: &[f64]) -> Vec<f64> {
    let n = rhs.len();
    let mut c = vec![0.0; n];
    let mut d = vec![0.0; n];
    c[0] = sup[0] / diag[0];
    d[0] = rhs[0] / diag[0];
    for i in 1..n {
        let den = diag[i] - sub[i] * c[i - 1];
        c[i] = if i + 1 < n { sup[i] / den } else { 0.0 };
        d[i] = (rhs[i] - sub[i] * d[i - 1]) / den;
    }
    let mut x = vec![0.0; n];
    x[n - 1] = d[n - 1];
    for i in (0..n - 1).rev() {
        x[i] = d[i] - c[i] * x[i + 1];
    }
    x
}

/// Solve with initial profile `initial(r)` and boundary data `lo(t)`, `hi(t)`.
pub fn solve_radial_heat(
    m: &ModelManifold,
    initial: impl Fn(f64) -> f64,
    lo: impl Fn(f64) -> f64,
    hi: impl Fn(f64) -> f64,
    spec: GridSpec,
) -> Result<GridSolution> {
    spec.validate(m)?;
    let nr = spec.cells + 1;
    let nt = spec.steps + 1;
    let h = spec.h();
    let tau = spec.tau();
    let r_at = |i: usize| spec.r_lo + h * i as f64;
    let t_at = |j: usize| spec.t_lo + tau * j as f64;

    let mut u: Vec<f64> = (0..nr).map(|i| initial(r_at(i))).collect();
    for (i, &v) in u.iter().enumerate() {
        if !(v > 0.0) {
            return Err(Error::param(format!("initial data not positive at r = {}: {v}", r_at(i))));
        }
    }
    for j in 0..nt {
        let (a, b) = (lo(t_at(j)), hi(t_at(j)));
        if !(a > 0.0) || !(b > 0.0) {
            return Err(Error::param(format!("boundary data not positive at t = {}", t_at(j))));
        }
    }
    let corner_gap = |x: f64, y: f64| (x - y).abs() > 1e-6 * (1.0 + x.abs());
    if corner_gap(u[0], lo(spec.t_lo)) || corner_gap(u[nr - 1], hi(spec.t_lo)) {
        return Err(Error::param("initial and boundary data disagree at a corner"));
    }

    // L u_i = a_i u_{i-1} + b u_i + c_i u_{i+1}
    let interior = nr - 2;
    let mut a = vec![0.0; interior];
    let mut c = vec![0.0; interior];
    let b = -2.0 / (h * h);
    for k in 0..interior {
        let (q, _) = m.drift(r_at(k + 1))?;
        a[k] = 1.0 / (h * h) - q / (2.0 * h);
        c[k] = 1.0 / (h * h) + q / (2.0 * h);
    }
    let half = 0.5 * tau;
    let sub: Vec<f64> = a.iter().map(|x| -half * x).collect();
    let sup: Vec<f64> = c.iter().map(|x| -half * x).collect();
    let diag = vec![1.0 - half * b; interior];

    let mut values = Vec::with_capacity(nr * nt);
    values.extend_from_slice(&u);
    let mut rhs = vec![0.0; interior];
    for j in 1..nt {
        let (lo_new, hi_new) = (lo(t_at(j)), hi(t_at(j)));
        for k in 0..interior {
            let i = k + 1;
            let lu = a[k] * u[i - 1] + b * u[i] + c[k] * u[i + 1];
            rhs[k] = u[i] + half * lu;
        }
        rhs[0] += half * a[0] * lo_new;
        rhs[interior - 1] += half * c[interior - 1] * hi_new;
        let next = solve_tridiagonal(&sub, &diag, &sup, &rhs);
        u[0] = lo_new;
        u[nr - 1] = hi_new;
        u[1..nr - 1].copy_from_slice(&next);
        if let Some((i, &v)) = u.iter().enumerate().find(|(_, v)| !(**v > 0.0)) {
            return Err(Error::Positivity { r: r_at(i), t: t_at(j), value: v });
        }
        values.extend_from_slice(&u);
    }
    GridSolution::new(spec.r_lo, h, nr, spec.t_lo, tau, nt, values)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn thomas_solves_a_laplacian() {
        let n = 5;
        let sub = vec![-1.0; n];
        let sup = vec![-1.0; n];
        let diag = vec![2.0; n];
        let x_true = [1.0, 2.0, 3.0, 2.0, 1.0];
        let mut rhs = vec![0.0; n];
        for i in 0..n {
            rhs[i] = 2.0 * x_true[i];
            if i > 0 {
                rhs[i] -= x_true[i - 1];
            }
            if i + 1 < n {
                rhs[i] -= x_true[i + 1];
            }
        }
        let x = solve_tridiagonal(&sub, &diag, &sup, &rhs);
        for (a, b) in x.iter().zip(x_true) {
            assert!((a - b).abs() < 1e-12);
        }
    }

    #[test]
    fn constant_data_stays_constant() {
        let m = ModelManifold::hyperbolic(3, -1.0).unwrap();
        let spec = GridSpec { r_lo: 0.5, r_hi: 4.0, cells: 40, t_lo: 0.0, t_hi: 1.0, steps: 20 };
        let g = solve_radial_heat(&m, |_| 3.0, |_| 3.0, |_| 3.0, spec).unwrap();
        assert!(g.values().iter().all(|&v| (v - 3.0).abs() < 1e-13));
    }

    #[test]
    fn rejects_bad_data() {
        let m = ModelManifold::euclidean(1).unwrap();
        let spec = GridSpec { r_lo: 1.0, r_hi: 3.0, cells: 10, t_lo: 0.0, t_hi: 1.0, steps: 10 };
        assert!(solve_radial_heat(&m, |_| -1.0, |_| 1.0, |_| 1.0, spec).is_err());
        assert!(solve_radial_heat(&m, |_| 1.0, |_| 2.0, |_| 1.0, spec).is_err());
        let bad = GridSpec { cells: 1, ..spec };
        assert!(solve_radial_heat(&m, |_| 1.0, |_| 1.0, |_| 1.0, bad).is_err());
    }

    #[test]
    fn rough_data_trips_the_positivity_guard() {
        // a narrow spike with a large step makes CN overshoot below zero
        let m = ModelManifold::euclidean(1).unwrap();
        let spec = GridSpec { r_lo: -1.0, r_hi: 1.0, cells: 200, t_lo: 0.0, t_hi: 1.0, steps: 2 };
        let init = |r: f64| if r.abs() < 0.02 { 1.0 } else { 1e-6 };
        let out = solve_radial_heat(&m, init, |_| 1e-6, |_| 1e-6, spec);
        assert!(matches!(out, Err(Error::Positivity { .. })), "{out:?}");
    }
}
