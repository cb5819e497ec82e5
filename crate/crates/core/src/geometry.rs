//! Rotationally symmetric model manifolds.
//!
//! Every model is a warped product `dr² + φ(r)² g_{S^{n-1}}` around a pole,
//! so radial functions see the one-dimensional operator
//! `Δu = u'' + (n-1)(φ'/φ) u'`. For `n = 1` the radial coordinate is a signed
//! line coordinate and the drift term vanishes.
//!
//! Warped models only carry the radial-radial Ricci component
//! `Ric_rr = -(n-1) φ''/φ`; that is all a radial solution can feel.

use std::f64::consts::PI;
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};

/// Smallest admissible radius in dimension `n >= 2`.
pub const R_MIN: f64 = 1e-8;

/// Default number of Simpson panels for ball volumes.
pub const DEFAULT_PANELS: usize = 1024;

type ProfileFn = dyn Fn(f64) -> [f64; 3] + Send + Sync;

/// Warping function `φ` with its first two derivatives.
#[derive(Clone)]
pub struct WarpProfile {
    name: String,
    eval: Arc<ProfileFn>,
    r_max: f64,
}

impl WarpProfile {
    /// `f(r)` must return `[φ(r), φ'(r), φ''(r)]`, defined on `[0, r_max]`.
    pub fn new(
        name: impl Into<String>,
        r_max: f64,
        f: impl Fn(f64) -> [f64; 3] + Send + Sync + 'static,
    ) -> Result<Self> {
        if !(r_max > 0.0) {
            return Err(Error::InvalidProfile(format!("r_max must be positive, got {r_max}")));
        }
        let p = WarpProfile { name: name.into(), eval: Arc::new(f), r_max };
        let [phi0, dphi0, _] = p.eval(0.0);
        if phi0.abs() > 1e-12 || (dphi0 - 1.0).abs() > 1e-9 {
            return Err(Error::InvalidProfile(format!(
                "{}: need φ(0) = 0 and φ'(0) = 1, got {phi0}, {dphi0}",
                p.name
            )));
        }
        Ok(p)
    }

    pub fn sinh(r_max: f64) -> Self {
        WarpProfile::new("sinh", r_max, |r| [r.sinh(), r.cosh(), r.sinh()])
            .expect("sinh is a valid profile")
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn r_max(&self) -> f64 {
        self.r_max
    }

    pub fn eval(&self, r: f64) -> [f64; 3] {
        (self.eval)(r)
    }
}

impl fmt::Debug for WarpProfile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("WarpProfile")
            .field("name", &self.name)
            .field("r_max", &self.r_max)
            .finish()
    }
}

#[derive(Clone, Debug)]
pub enum ModelKind {
    Euclidean,
    /// Constant sectional curvature `kappa < 0`.
    Hyperbolic { kappa: f64 },
    /// Constant sectional curvature `kappa > 0`.
    Sphere { kappa: f64 },
    Warped(WarpProfile),
}

/// A model manifold together with its Ricci lower bound `Ric >= -k`.
#[derive(Clone, Debug)]
pub struct ModelManifold {
    n: usize,
    kind: ModelKind,
    k: f64,
}

/// Radial profile value with its first two radial derivatives.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RadialJet {
    pub u: f64,
    pub ur: f64,
    pub urr: f64,
}

impl ModelManifold {
    pub fn euclidean(n: usize) -> Result<Self> {
        check_dim(n)?;
        Ok(ModelManifold { n, kind: ModelKind::Euclidean, k: 0.0 })
    }

    pub fn hyperbolic(n: usize, kappa: f64) -> Result<Self> {
        check_dim(n)?;
        if !(kappa < 0.0) {
            return Err(Error::param(format!("hyperbolic curvature must be negative, got {kappa}")));
        }
        let k = -((n - 1) as f64) * kappa;
        Ok(ModelManifold { n, kind: ModelKind::Hyperbolic { kappa }, k: k.max(0.0) })
    }

    pub fn sphere(n: usize, kappa: f64) -> Result<Self> {
        check_dim(n)?;
        if !(kappa > 0.0) {
            return Err(Error::param(format!("sphere curvature must be positive, got {kappa}")));
        }
        Ok(ModelManifold { n, kind: ModelKind::Sphere { kappa }, k: 0.0 })
    }

    /// Warped model; `k` is the grid infimum of `-Ric_rr` over `(0, r_max]`.
    pub fn warped(n: usize, profile: WarpProfile) -> Result<Self> {
        check_dim(n)?;
        let r_max = profile.r_max();
        let mut m = ModelManifold { n, kind: ModelKind::Warped(profile), k: 0.0 };
        m.k = m.ricci_lower_bound(r_max)?;
        Ok(m)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn kind(&self) -> &ModelKind {
        &self.kind
    }

    /// Ricci lower bound `k` (so that `Ric >= -k`).
    pub fn k(&self) -> f64 {
        self.k
    }

    /// Sectional curvature for the constant-curvature kinds.
    pub fn constant_curvature(&self) -> Option<f64> {
        match self.kind {
            ModelKind::Euclidean => Some(0.0),
            ModelKind::Hyperbolic { kappa } | ModelKind::Sphere { kappa } => Some(kappa),
            ModelKind::Warped(_) => None,
        }
    }

    /// Largest radius where the radial coordinate is valid.
    pub fn radius_limit(&self) -> f64 {
        match &self.kind {
            ModelKind::Sphere { kappa } if self.n >= 2 => PI / kappa.sqrt(),
            ModelKind::Warped(p) => p.r_max(),
            _ => f64::INFINITY,
        }
    }

    fn check_radius(&self, r: f64) -> Result<()> {
        if !r.is_finite() {
            return Err(Error::domain(format!("non-finite radius {r}")));
        }
        if self.n >= 2 && r < R_MIN {
            return Err(Error::domain(format!("radius {r} below the pole cutoff {R_MIN}")));
        }
        if r.abs() > self.radius_limit() {
            return Err(Error::domain(format!(
                "radius {r} beyond the profile domain {}",
                self.radius_limit()
            )));
        }
        Ok(())
    }

    /// `[φ, φ', φ'']` at `r`.
    pub fn warp(&self, r: f64) -> [f64; 3] {
        match &self.kind {
            ModelKind::Euclidean => [r, 1.0, 0.0],
            ModelKind::Hyperbolic { kappa } => {
                let s = (-kappa).sqrt();
                [(s * r).sinh() / s, (s * r).cosh(), s * (s * r).sinh()]
            }
            ModelKind::Sphere { kappa } => {
                let s = kappa.sqrt();
                [(s * r).sin() / s, (s * r).cos(), -s * (s * r).sin()]
            }
            ModelKind::Warped(p) => p.eval(r),
        }
    }

    /// Mean-curvature drift `(n-1) φ'/φ` and its radial derivative.
    pub fn drift(&self, r: f64) -> Result<(f64, f64)> {
        if self.n == 1 {
            return Ok((0.0, 0.0));
        }
        self.check_radius(r)?;
        let m = (self.n - 1) as f64;
        let [phi, dphi, ddphi] = self.warp(r);
        if phi <= 0.0 {
            return Err(Error::InvalidProfile(format!("φ({r}) = {phi} is not positive")));
        }
        let ratio = dphi / phi;
        Ok((m * ratio, m * (ddphi / phi - ratio * ratio)))
    }

    /// `φ'/φ` at `r` (the tangential Hessian factor of a radial function).
    pub fn shape_ratio(&self, r: f64) -> Result<f64> {
        if self.n == 1 {
            return Ok(0.0);
        }
        self.check_radius(r)?;
        let [phi, dphi, _] = self.warp(r);
        Ok(dphi / phi)
    }

    /// Laplace–Beltrami operator applied to a radial function.
    pub fn radial_laplacian(&self, u: RadialJet, r: f64) -> Result<f64> {
        let (q, _) = self.drift(r)?;
        Ok(u.urr + q * u.ur)
    }

    /// Conservative three-point approximation of `(φ^{n-1} u')' / φ^{n-1}`.
    pub fn flux_form_laplacian(&self, u: impl Fn(f64) -> f64, r: f64, h: f64) -> Result<f64> {
        if !(h > 0.0) {
            return Err(Error::param("step must be positive"));
        }
        self.check_radius(r)?;
        if self.n >= 2 {
            self.check_radius(r - h)?;
        }
        let rho = |s: f64| self.density(s);
        let (um, u0, up) = (u(r - h), u(r), u(r + h));
        let flux_hi = rho(r + 0.5 * h) * (up - u0) / h;
        let flux_lo = rho(r - 0.5 * h) * (u0 - um) / h;
        Ok((flux_hi - flux_lo) / (h * rho(r)))
    }

    /// Volume density `φ(r)^{n-1}` along a radial geodesic.
    pub fn density(&self, r: f64) -> f64 {
        if self.n == 1 {
            return 1.0;
        }
        self.warp(r)[0].powi(self.n as i32 - 1)
    }

    /// Radial-radial Ricci component `-(n-1) φ''/φ`.
    pub fn ricci_rr(&self, r: f64) -> Result<f64> {
        if self.n == 1 {
            return Ok(0.0);
        }
        self.check_radius(r)?;
        let [phi, _, ddphi] = self.warp(r);
        Ok(-((self.n - 1) as f64) * ddphi / phi)
    }

    /// Smallest `k >= 0` with `Ric_rr >= -k` on `(0, r_max]`.
    ///
    /// Exact for the constant-curvature kinds; a grid infimum for warped ones.
    pub fn ricci_lower_bound(&self, r_max: f64) -> Result<f64> {
        match &self.kind {
            ModelKind::Euclidean | ModelKind::Sphere { .. } => Ok(0.0),
            ModelKind::Hyperbolic { kappa } => Ok((-((self.n - 1) as f64) * kappa).max(0.0)),
            ModelKind::Warped(p) => {
                if !(r_max > 0.0) || r_max > p.r_max() {
                    return Err(Error::domain(format!(
                        "r_max {r_max} outside the profile domain (0, {}]",
                        p.r_max()
                    )));
                }
                if self.n == 1 {
                    return Ok(0.0);
                }
                let m = (self.n - 1) as f64;
                let samples = 4096;
                let mut worst = f64::NEG_INFINITY;
                for i in 1..=samples {
                    let r = r_max * i as f64 / samples as f64;
                    let [phi, _, ddphi] = p.eval(r);
                    if !(phi > 0.0) {
                        return Err(Error::InvalidProfile(format!(
                            "{} vanishes at r = {r}",
                            p.name()
                        )));
                    }
                    worst = worst.max(m * ddphi / phi);
                }
                Ok(worst.max(0.0))
            }
        }
    }

    /// Area of the unit sphere `S^{n-1}` (2 for `n = 1`).
    pub fn unit_sphere_area(&self) -> f64 {
        unit_sphere_area(self.n)
    }

    pub fn ball_volume(&self, r: f64) -> Result<f64> {
        self.ball_volume_with(r, DEFAULT_PANELS)
    }

    /// `∫_0^r ω_{n-1} φ(s)^{n-1} ds`; closed form for Euclidean, Simpson otherwise.
    pub fn ball_volume_with(&self, r: f64, panels: usize) -> Result<f64> {
        if !(r > 0.0) {
            return Err(Error::domain(format!("ball radius must be positive, got {r}")));
        }
        if r > self.radius_limit() {
            return Err(Error::domain(format!(
                "ball radius {r} beyond the profile domain {}",
                self.radius_limit()
            )));
        }
        let omega = self.unit_sphere_area();
        if let ModelKind::Euclidean = self.kind {
            return Ok(omega * r.powi(self.n as i32) / self.n as f64);
        }
        let panels = panels.max(2) + panels % 2;
        Ok(omega * simpson(|s| self.density(s), 0.0, r, panels))
    }

    /// `|B(2r)| / |B(r)|`.
    pub fn doubling_constant(&self, r: f64) -> Result<f64> {
        Ok(self.ball_volume(2.0 * r)? / self.ball_volume(r)?)
    }
}

fn check_dim(n: usize) -> Result<()> {
    if n == 0 {
        return Err(Error::param("dimension must be at least 1"));
    }
    Ok(())
}

/// `ω_{m-1} = 2 π^{m/2} / Γ(m/2)` through the two-step recursion.
pub fn unit_sphere_area(n: usize) -> f64 {
    match n {
        1 => 2.0,
        2 => 2.0 * PI,
        _ => 2.0 * PI / (n - 2) as f64 * unit_sphere_area(n - 2),
    }
}

pub(crate) fn simpson(f: impl Fn(f64) -> f64, a: f64, b: f64, panels: usize) -> f64 {
    let h = (b - a) / panels as f64;
    let mut acc = f(a) + f(b);
    for i in 1..panels {
        let w = if i % 2 == 1 { 4.0 } else { 2.0 };
        acc += w * f(a + h * i as f64);
    }
    acc * h / 3.0
}

/// Space–time region `B(x0, R) × [t0 - T, t0]`.
///
/// `center` is the line coordinate for `n = 1` and the distance of the ball
/// centre from the pole for `n >= 2`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ParabolicCube {
    pub center: f64,
    pub radius: f64,
    pub t0: f64,
    pub depth: f64,
}

impl ParabolicCube {
    pub fn new(center: f64, radius: f64, t0: f64, depth: f64) -> Result<Self> {
        if !(radius > 0.0) || !(depth > 0.0) || !center.is_finite() || !t0.is_finite() {
            return Err(Error::param(format!(
                "cube needs R > 0 and T > 0, got R = {radius}, T = {depth}"
            )));
        }
        Ok(ParabolicCube { center, radius, t0, depth })
    }

    /// `[x_lo, x_hi] × [t_lo, t_hi]` on a line.
    pub fn from_intervals(x_lo: f64, x_hi: f64, t_lo: f64, t_hi: f64) -> Result<Self> {
        ParabolicCube::new(0.5 * (x_lo + x_hi), 0.5 * (x_hi - x_lo), t_hi, t_hi - t_lo)
    }

    /// `Q_{R/2, T/2}`.
    pub fn half(&self) -> Self {
        self.shrink(0.5, 0.5)
    }

    /// Same centre and top time, radius and depth scaled.
    pub fn shrink(&self, radius_factor: f64, depth_factor: f64) -> Self {
        ParabolicCube {
            center: self.center,
            radius: self.radius * radius_factor,
            t0: self.t0,
            depth: self.depth * depth_factor,
        }
    }

    pub fn time_range(&self) -> (f64, f64) {
        (self.t0 - self.depth, self.t0)
    }

    /// Range of the radial coordinate swept by the ball.
    pub fn space_range(&self, m: &ModelManifold) -> (f64, f64) {
        if m.n() == 1 {
            return (self.center - self.radius, self.center + self.radius);
        }
        let lo = (self.center - self.radius).max(R_MIN);
        let hi = (self.center + self.radius).min(m.radius_limit());
        (lo, hi)
    }

    pub fn contains(&self, m: &ModelManifold, r: f64, t: f64) -> bool {
        let (lo, hi) = self.space_range(m);
        let (tl, th) = self.time_range();
        let eps = 1e-12 * (1.0 + r.abs() + t.abs());
        r >= lo - eps && r <= hi + eps && t >= tl - eps && t <= th + eps
    }

    /// Distance from the ball centre of a point at radial coordinate `r`.
    ///
    /// For `n >= 2` this is exact only for cubes centred at the pole.
    pub fn distance_from_center(&self, r: f64) -> f64 {
        (r - self.center).abs()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn euclidean_laplacian_of_r_squared() {
        let m = ModelManifold::euclidean(3).unwrap();
        let v = m.radial_laplacian(RadialJet { u: 1.0, ur: 2.0, urr: 2.0 }, 1.0).unwrap();
        assert_relative_eq!(v, 6.0, epsilon = 1e-15);
    }

    #[test]
    fn log_is_harmonic_in_the_plane() {
        let m = ModelManifold::euclidean(2).unwrap();
        let r: f64 = 2.0;
        let v = m
            .radial_laplacian(RadialJet { u: r.ln(), ur: 1.0 / r, urr: -1.0 / (r * r) }, r)
            .unwrap();
        assert!(v.abs() < 1e-15);
    }

    #[test]
    fn hyperbolic_laplacian_of_distance() {
        let m = ModelManifold::hyperbolic(3, -1.0).unwrap();
        let v = m.radial_laplacian(RadialJet { u: 1.0, ur: 1.0, urr: 0.0 }, 1.0).unwrap();
        assert_relative_eq!(v, 2.0 / 1f64.tanh(), epsilon = 1e-14);
        assert_relative_eq!(v, 2.626, epsilon = 1e-3);
        let fd = m.flux_form_laplacian(|r| r, 1.0, 1e-4).unwrap();
        assert_relative_eq!(fd, v, epsilon = 1e-6);
    }

    #[test]
    fn pole_and_profile_domain_are_rejected() {
        let m = ModelManifold::euclidean(3).unwrap();
        let jet = RadialJet { u: 0.0, ur: 0.0, urr: 0.0 };
        assert!(matches!(m.radial_laplacian(jet, 0.0), Err(Error::Domain(_))));
        let w = ModelManifold::warped(2, WarpProfile::sinh(5.0)).unwrap();
        assert!(matches!(w.radial_laplacian(jet, 6.0), Err(Error::Domain(_))));
        // n = 1 has no pole
        let line = ModelManifold::euclidean(1).unwrap();
        assert!(line.radial_laplacian(jet, -3.0).is_ok());
    }

    #[test]
    fn ricci_bounds() {
        for n in 1..5 {
            assert_eq!(ModelManifold::euclidean(n).unwrap().ricci_lower_bound(10.0).unwrap(), 0.0);
        }
        let h = ModelManifold::hyperbolic(3, -1.0).unwrap();
        assert_eq!(h.k(), 2.0);
        for r_max in [0.1, 1.0, 100.0] {
            assert_eq!(h.ricci_lower_bound(r_max).unwrap(), 2.0);
        }
        let w = ModelManifold::warped(2, WarpProfile::sinh(5.0)).unwrap();
        assert!((w.ricci_lower_bound(5.0).unwrap() - 1.0).abs() < 1e-10);
        assert!((w.k() - 1.0).abs() < 1e-10);
    }

    #[test]
    fn vanishing_or_bad_profiles_are_rejected() {
        let bad = WarpProfile::new("shifted", 3.0, |r| [r + 1.0, 1.0, 0.0]);
        assert!(matches!(bad, Err(Error::InvalidProfile(_))));
        let sin = WarpProfile::new("sin", 4.0, |r| [r.sin(), r.cos(), -r.sin()]).unwrap();
        let m = ModelManifold::warped(2, sin);
        assert!(matches!(m, Err(Error::InvalidProfile(_))));
    }

    #[test]
    fn ball_volumes() {
        let line = ModelManifold::euclidean(1).unwrap();
        assert_relative_eq!(line.ball_volume(2.0).unwrap(), 4.0, epsilon = 1e-15);
        let e3 = ModelManifold::euclidean(3).unwrap();
        assert_relative_eq!(e3.ball_volume(1.0).unwrap(), 4.0 * PI / 3.0, epsilon = 1e-14);
        let h3 = ModelManifold::hyperbolic(3, -1.0).unwrap();
        let closed = PI * ((2.0f64).sinh() - 2.0);
        assert_relative_eq!(h3.ball_volume(1.0).unwrap(), closed, max_relative = 1e-12);
        assert_relative_eq!(closed, 5.11093, epsilon = 1e-5);
    }

    #[test]
    fn unit_sphere_areas() {
        assert_relative_eq!(unit_sphere_area(3), 4.0 * PI, epsilon = 1e-14);
        assert_relative_eq!(unit_sphere_area(4), 2.0 * PI * PI, epsilon = 1e-13);
    }

    #[test]
    fn half_cube_is_nested() {
        let m = ModelManifold::euclidean(1).unwrap();
        let q = ParabolicCube::from_intervals(1.0, 3.0, 1.0, 2.0).unwrap();
        assert_eq!((q.center, q.radius, q.t0, q.depth), (2.0, 1.0, 2.0, 1.0));
        let h = q.half();
        let (lo, hi) = h.space_range(&m);
        let (tl, th) = h.time_range();
        assert!(q.contains(&m, lo, tl) && q.contains(&m, hi, th));
        assert!(ParabolicCube::new(0.0, -1.0, 0.0, 1.0).is_err());
    }
}
