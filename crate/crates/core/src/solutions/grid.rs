//! Lattice-valued solutions and their finite-difference derivative jets.

use std::io::Write;

use crate::error::{Error, Result};

/// Derivatives of `u` itself (not of `ln u`).
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct UJet {
    pub u: f64,
    pub ur: f64,
    pub urr: f64,
    pub urrr: f64,
    pub ut: f64,
    pub urt: f64,
}

impl UJet {
    fn lerp(self, o: UJet, w: f64) -> UJet {
        let m = |a: f64, b: f64| a + w * (b - a);
        UJet {
            u: m(self.u, o.u),
            ur: m(self.ur, o.ur),
            urr: m(self.urr, o.urr),
            urrr: m(self.urrr, o.urrr),
            ut: m(self.ut, o.ut),
            urt: m(self.urt, o.urt),
        }
    }
}

/// Values `u[j][i]` at `r_i = r_lo + i h`, `t_j = t_lo + j τ`.
#[derive(Clone, Debug)]
pub struct GridSolution {
    r_lo: f64,
    h: f64,
    nr: usize,
    t_lo: f64,
    tau: f64,
    nt: usize,
    values: Vec<f64>,
}

impl GridSolution {
    pub fn new(r_lo: f64, h: f64, nr: usize, t_lo: f64, tau: f64, nt: usize, values: Vec<f64>) -> Result<Self> {
        if nr < 4 || nt < 3 {
            return Err(Error::param(format!("grid needs at least 4x3 nodes, got {nr}x{nt}")));
        }
        if !(h > 0.0) || !(tau > 0.0) {
            return Err(Error::param("grid steps must be positive"));
        }
        if values.len() != nr * nt {
            return Err(Error::param(format!("expected {} values, got {}", nr * nt, values.len())));
        }
        Ok(GridSolution { r_lo, h, nr, t_lo, tau, nt, values })
    }

    pub fn h(&self) -> f64 {
        self.h
    }
    pub fn tau(&self) -> f64 {
        self.tau
    }
    pub fn shape(&self) -> (usize, usize) {
        (self.nr, self.nt)
    }
    pub fn r_range(&self) -> (f64, f64) {
        (self.r_lo, self.r(self.nr - 1))
    }
    pub fn t_range(&self) -> (f64, f64) {
        (self.t_lo, self.t(self.nt - 1))
    }
    pub fn r(&self, i: usize) -> f64 {
        self.r_lo + self.h * i as f64
    }
    pub fn t(&self, j: usize) -> f64 {
        self.t_lo + self.tau * j as f64
    }
    pub fn at(&self, i: usize, j: usize) -> f64 {
        self.values[j * self.nr + i]
    }
    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn min(&self) -> f64 {
        self.values.iter().copied().fold(f64::INFINITY, f64::min)
    }

    /// Minimum over the initial row and the two boundary columns.
    pub fn parabolic_boundary_min(&self) -> f64 {
        let first = (0..self.nr).map(|i| self.at(i, 0));
        let sides = (0..self.nt).flat_map(|j| [self.at(0, j), self.at(self.nr - 1, j)]);
        first.chain(sides).fold(f64::INFINITY, f64::min)
    }

    fn d_r(&self, j: usize, i: usize) -> (f64, f64, f64) {
        let h = self.h;
        let n = self.nr;
        let v = |k: usize| self.at(k, j);
        let (ur, urr) = if i == 0 {
            ((-3.0 * v(0) + 4.0 * v(1) - v(2)) / (2.0 * h), (2.0 * v(0) - 5.0 * v(1) + 4.0 * v(2) - v(3)) / (h * h))
        } else if i == n - 1 {
            let k = n - 1;
            (
                (3.0 * v(k) - 4.0 * v(k - 1) + v(k - 2)) / (2.0 * h),
                (2.0 * v(k) - 5.0 * v(k - 1) + 4.0 * v(k - 2) - v(k - 3)) / (h * h),
            )
        } else {
            ((v(i + 1) - v(i - 1)) / (2.0 * h), (v(i + 1) - 2.0 * v(i) + v(i - 1)) / (h * h))
        };
        let h3 = h * h * h;
        let urrr = if i >= 2 && i + 2 < n {
            (v(i + 2) - 2.0 * v(i + 1) + 2.0 * v(i - 1) - v(i - 2)) / (2.0 * h3)
        } else if i + 3 < n {
            (-v(i) + 3.0 * v(i + 1) - 3.0 * v(i + 2) + v(i + 3)) / h3
        } else {
            (v(i) - 3.0 * v(i - 1) + 3.0 * v(i - 2) - v(i - 3)) / h3
        };
        (ur, urr, urrr)
    }

    /// Second-order time derivative of a per-layer quantity.
    fn d_t(&self, j: usize, f: impl Fn(usize) -> f64) -> f64 {
        let tau = self.tau;
        if j == 0 {
            (-3.0 * f(0) + 4.0 * f(1) - f(2)) / (2.0 * tau)
        } else if j == self.nt - 1 {
            (3.0 * f(j) - 4.0 * f(j - 1) + f(j - 2)) / (2.0 * tau)
        } else {
            (f(j + 1) - f(j - 1)) / (2.0 * tau)
        }
    }

    pub fn node_jet(&self, i: usize, j: usize) -> UJet {
        let (ur, urr, urrr) = self.d_r(j, i);
        UJet {
            u: self.at(i, j),
            ur,
            urr,
            urrr,
            ut: self.d_t(j, |l| self.at(i, l)),
            urt: self.d_t(j, |l| self.d_r(l, i).0),
        }
    }

    fn locate(x: f64, lo: f64, step: f64, n: usize) -> Option<(usize, f64)> {
        let s = (x - lo) / step;
        let tol = 1e-9;
        if s < -tol || s > (n - 1) as f64 + tol {
            return None;
        }
        let s = s.clamp(0.0, (n - 1) as f64);
        let i = (s.floor() as usize).min(n - 2);
        let w = s - i as f64;
        // snap to a node when within rounding
        if w < tol {
            Some((i, 0.0))
        } else if w > 1.0 - tol {
            Some((i, 1.0))
        } else {
            Some((i, w))
        }
    }

    /// Bilinear interpolation of node jets; exact at nodes.
    pub fn jet(&self, r: f64, t: f64) -> Result<UJet> {
        let (i, wr) = Self::locate(r, self.r_lo, self.h, self.nr)
            .ok_or_else(|| Error::domain(format!("r = {r} outside the grid {:?}", self.r_range())))?;
        let (j, wt) = Self::locate(t, self.t_lo, self.tau, self.nt)
            .ok_or_else(|| Error::domain(format!("t = {t} outside the grid {:?}", self.t_range())))?;
        let row = |jj: usize| -> UJet {
            if wr == 0.0 {
                self.node_jet(i, jj)
            } else if wr == 1.0 {
                self.node_jet(i + 1, jj)
            } else {
                self.node_jet(i, jj).lerp(self.node_jet(i + 1, jj), wr)
            }
        };
        Ok(if wt == 0.0 {
            row(j)
        } else if wt == 1.0 {
            row(j + 1)
        } else {
            row(j).lerp(row(j + 1), wt)
        })
    }

    /// Whether `(r, t)` is at least one stencil away from every face.
    pub fn is_interior(&self, r: f64, t: f64) -> bool {
        let (rl, rh) = self.r_range();
        let (tl, th) = self.t_range();
        let eps = 1e-9;
        r >= rl + self.h * (1.0 - eps)
            && r <= rh - self.h * (1.0 - eps)
            && t >= tl + self.tau * (1.0 - eps)
            && t <= th - self.tau * (1.0 - eps)
    }

    /// CSV block with header `r,t,u`, one row per node, time-major.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["r", "t", "u"])?;
        for j in 0..self.nt {
            for i in 0..self.nr {
                w.write_record(&[self.r(i).to_string(), self.t(j).to_string(), self.at(i, j).to_string()])?;
            }
        }
        w.flush()?;
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn quadratic_grid() -> GridSolution {
        // u = 1 + r^2 + 2t: heat solution on a line
        let (nr, nt) = (11, 7);
        let mut v = Vec::new();
        for j in 0..nt {
            for i in 0..nr {
                let r = 0.1 * i as f64;
                let t = 0.05 * j as f64;
                v.push(1.0 + r * r + 2.0 * t);
            }
        }
        GridSolution::new(0.0, 0.1, nr, 0.0, 0.05, nt, v).unwrap()
    }

    #[test]
    fn stencils_exact_on_quadratics() {
        let g = quadratic_grid();
        for &(i, j) in &[(0, 0), (5, 3), (10, 6), (1, 6)] {
            let jet = g.node_jet(i, j);
            let r = g.r(i);
            assert!((jet.ur - 2.0 * r).abs() < 1e-11, "{i},{j}");
            assert!((jet.urr - 2.0).abs() < 1e-9);
            assert!(jet.urrr.abs() < 1e-6);
            assert!((jet.ut - 2.0).abs() < 1e-11);
            assert!(jet.urt.abs() < 1e-9);
        }
    }

    #[test]
    fn interpolation_and_bounds() {
        let g = quadratic_grid();
        let j = g.jet(0.55, 0.125).unwrap();
        assert!((j.u - (1.0 + 0.3025 + 0.25)).abs() < 0.01);
        assert!(g.jet(1.2, 0.1).is_err());
        assert!(g.is_interior(0.5, 0.1));
        assert!(!g.is_interior(0.05, 0.1));
    }

    #[test]
    fn csv_has_header_and_all_nodes() {
        let g = quadratic_grid();
        let mut buf = Vec::new();
        g.write_csv(&mut buf).unwrap();
        let s = String::from_utf8(buf).unwrap();
        assert!(s.starts_with("r,t,u\n"));
        assert_eq!(s.lines().count(), 1 + 11 * 7);
    }
}
