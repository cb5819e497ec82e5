//! Forward-mode Taylor jets in (r, t).
//!
//! A [`Jet`] is `A(r) + B(r)·δ` where `A`, `B` are Taylor polynomials in the
//! radial offset truncated at degree 3 and `δ² = 0` carries one time
//! derivative. Evaluating a closed form on jets yields every derivative up to
//! `∂_r³` and `∂_r² ∂_t` exactly, independently of hand-written derivative
//! formulas.

use std::ops::{Add, Div, Mul, Neg, Sub};

const DEG: usize = 3;
const LEN: usize = DEG + 1;

/// Numbers that closed-form profiles can be evaluated on.
pub trait Scalar:
    Copy
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
    + Add<f64, Output = Self>
    + Sub<f64, Output = Self>
    + Mul<f64, Output = Self>
    + Div<f64, Output = Self>
{
    fn cst(x: f64) -> Self;
    /// Value part (constant coefficient).
    fn re(&self) -> f64;
    fn exp(self) -> Self;
    fn ln(self) -> Self;
    fn sin(self) -> Self;
    fn cos(self) -> Self;
    fn sinh(self) -> Self;
    fn cosh(self) -> Self;
    fn recip(self) -> Self;
}

impl Scalar for f64 {
    fn cst(x: f64) -> Self {
        x
    }
    fn re(&self) -> f64 {
        *self
    }
    fn exp(self) -> Self {
        f64::exp(self)
    }
    fn ln(self) -> Self {
        f64::ln(self)
    }
    fn sin(self) -> Self {
        f64::sin(self)
    }
    fn cos(self) -> Self {
        f64::cos(self)
    }
    fn sinh(self) -> Self {
        f64::sinh(self)
    }
    fn cosh(self) -> Self {
        f64::cosh(self)
    }
    fn recip(self) -> Self {
        1.0 / self
    }
}

/// Truncated Taylor polynomial; `c[k]` is the k-th derivative over k!.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Series {
    pub c: [f64; LEN],
}

impl Series {
    pub const ZERO: Series = Series { c: [0.0; LEN] };

    pub fn constant(x: f64) -> Self {
        let mut c = [0.0; LEN];
        c[0] = x;
        Series { c }
    }

    pub fn variable(x: f64) -> Self {
        Series { c: [x, 1.0, 0.0, 0.0] }
    }

    fn mul(&self, o: &Series) -> Series {
        let mut c = [0.0; LEN];
        for i in 0..LEN {
            for j in 0..LEN - i {
                c[i + j] += self.c[i] * o.c[j];
            }
        }
        Series { c }
    }

    fn scale(&self, s: f64) -> Series {
        Series { c: self.c.map(|x| x * s) }
    }

    fn add(&self, o: &Series) -> Series {
        let mut c = self.c;
        for (x, y) in c.iter_mut().zip(o.c) {
            *x += y;
        }
        Series { c }
    }

    /// `g(self)` given `derivs[k] = g^{(k)}(self.c[0])`.
    fn compose(&self, derivs: &[f64]) -> Series {
        let mut h = *self;
        h.c[0] = 0.0;
        let mut out = Series::constant(derivs[0]);
        let mut power = Series::constant(1.0);
        let mut fact = 1.0;
        for (k, d) in derivs.iter().enumerate().take(LEN).skip(1) {
            power = power.mul(&h);
            fact *= k as f64;
            out = out.add(&power.scale(d / fact));
        }
        out
    }

    /// Term-wise derivative; the top coefficient is lost.
    fn derivative(&self) -> Series {
        let mut c = [0.0; LEN];
        for k in 0..DEG {
            c[k] = (k + 1) as f64 * self.c[k + 1];
        }
        Series { c }
    }

    /// k-th derivative at the expansion point.
    pub fn deriv(&self, k: usize) -> f64 {
        let fact: f64 = (1..=k).map(|x| x as f64).product();
        self.c[k] * fact
    }
}

/// Jet in (r, t): `a + b·δ` with `δ² = 0`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Jet {
    pub a: Series,
    pub b: Series,
}

impl Jet {
    /// Seed the radial variable at `r` and time at `t`.
    pub fn seed(r: f64, t: f64) -> (Jet, Jet) {
        let rj = Jet { a: Series::variable(r), b: Series::ZERO };
        let tj = Jet { a: Series::constant(t), b: Series::constant(1.0) };
        (rj, tj)
    }

    /// `∂_r` of the jet. The result is exact through `r`-degree 2.
    pub fn d_r(&self) -> Jet {
        Jet { a: self.a.derivative(), b: self.b.derivative() }
    }

    pub fn value(&self) -> f64 {
        self.a.c[0]
    }
    pub fn d1(&self) -> f64 {
        self.a.deriv(1)
    }
    pub fn d2(&self) -> f64 {
        self.a.deriv(2)
    }
    pub fn d3(&self) -> f64 {
        self.a.deriv(3)
    }
    pub fn dt(&self) -> f64 {
        self.b.deriv(0)
    }
    pub fn drt(&self) -> f64 {
        self.b.deriv(1)
    }

    /// `g(self)` from the list `g, g', g'', g''', g''''` at the base value.
    fn apply(&self, derivs: [f64; LEN + 1]) -> Jet {
        let a = self.a.compose(&derivs[..LEN]);
        let gprime = self.a.compose(&derivs[1..]);
        Jet { a, b: gprime.mul(&self.b) }
    }
}

impl Add for Jet {
    type Output = Jet;
    fn add(self, o: Jet) -> Jet {
        Jet { a: self.a.add(&o.a), b: self.b.add(&o.b) }
    }
}

impl Sub for Jet {
    type Output = Jet;
    fn sub(self, o: Jet) -> Jet {
        self + (-o)
    }
}

impl Neg for Jet {
    type Output = Jet;
    fn neg(self) -> Jet {
        Jet { a: self.a.scale(-1.0), b: self.b.scale(-1.0) }
    }
}

impl Mul for Jet {
    type Output = Jet;
    fn mul(self, o: Jet) -> Jet {
        Jet { a: self.a.mul(&o.a), b: self.a.mul(&o.b).add(&self.b.mul(&o.a)) }
    }
}

impl Div for Jet {
    type Output = Jet;
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn div(self, o: Jet) -> Jet {
        self * o.recip()
    }
}

impl Add<f64> for Jet {
    type Output = Jet;
    fn add(mut self, x: f64) -> Jet {
        self.a.c[0] += x;
        self
    }
}

impl Sub<f64> for Jet {
    type Output = Jet;
    fn sub(mut self, x: f64) -> Jet {
        self.a.c[0] -= x;
        self
    }
}

impl Mul<f64> for Jet {
    type Output = Jet;
    fn mul(self, x: f64) -> Jet {
        Jet { a: self.a.scale(x), b: self.b.scale(x) }
    }
}

impl Div<f64> for Jet {
    type Output = Jet;
    fn div(self, x: f64) -> Jet {
        self * (1.0 / x)
    }
}

impl Scalar for Jet {
    fn cst(x: f64) -> Self {
        Jet { a: Series::constant(x), b: Series::ZERO }
    }
    fn re(&self) -> f64 {
        self.value()
    }
    fn exp(self) -> Self {
        let e = self.value().exp();
        self.apply([e; LEN + 1])
    }
    fn ln(self) -> Self {
        let x = self.value();
        self.apply([x.ln(), 1.0 / x, -1.0 / (x * x), 2.0 / x.powi(3), -6.0 / x.powi(4)])
    }
    fn sin(self) -> Self {
        let (s, c) = self.value().sin_cos();
        self.apply([s, c, -s, -c, s])
    }
    fn cos(self) -> Self {
        let (s, c) = self.value().sin_cos();
        self.apply([c, -s, -c, s, c])
    }
    fn sinh(self) -> Self {
        let (s, c) = (self.value().sinh(), self.value().cosh());
        self.apply([s, c, s, c, s])
    }
    fn cosh(self) -> Self {
        let (s, c) = (self.value().sinh(), self.value().cosh());
        self.apply([c, s, c, s, c])
    }
    fn recip(self) -> Self {
        let x = self.value();
        self.apply([
            1.0 / x,
            -1.0 / (x * x),
            2.0 / x.powi(3),
            -6.0 / x.powi(4),
            24.0 / x.powi(5),
        ])
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol * (1.0 + b.abs())
    }

    #[test]
    fn polynomial_derivatives_are_exact() {
        let (r, t) = Jet::seed(1.5, 0.7);
        // r^3 t + 2 r
        let f = r * r * r * t + r * 2.0;
        assert!(close(f.value(), 1.5f64.powi(3) * 0.7 + 3.0, 1e-15));
        assert!(close(f.d1(), 3.0 * 1.5 * 1.5 * 0.7 + 2.0, 1e-15));
        assert!(close(f.d2(), 6.0 * 1.5 * 0.7, 1e-15));
        assert!(close(f.d3(), 6.0 * 0.7, 1e-15));
        assert!(close(f.dt(), 1.5f64.powi(3), 1e-15));
        assert!(close(f.drt(), 3.0 * 1.5 * 1.5, 1e-15));
    }

    #[test]
    fn elementary_functions_match_known_derivatives() {
        let x = 0.8;
        let (r, _) = Jet::seed(x, 0.0);
        let s = r.sin();
        assert!(close(s.d3(), -x.cos(), 1e-14));
        let l = r.ln();
        assert!(close(l.d3(), 2.0 / x.powi(3), 1e-14));
        let q = r.recip();
        assert!(close(q.d2(), 2.0 / x.powi(3), 1e-14));
        let sh = r.sinh() / r.cosh();
        // tanh'' = -2 tanh sech^2
        let th = x.tanh();
        assert!(close(sh.d2(), -2.0 * th * (1.0 - th * th), 1e-13));
    }

    #[test]
    fn time_chain_rule_through_exp() {
        let (r, t) = Jet::seed(0.3, 2.0);
        // exp(r t): d_t = r e^{rt}, d_rt = (1 + r t) e^{rt}, d_rrt = (2t + r t^2) e^{rt}
        let f = (r * t).exp();
        let e = (0.6f64).exp();
        assert!(close(f.dt(), 0.3 * e, 1e-14));
        assert!(close(f.drt(), 1.6 * e, 1e-14));
        assert!(close(f.b.deriv(2), (4.0 + 0.3 * 4.0) * e, 1e-13));
    }

    #[test]
    fn radial_derivative_of_a_jet() {
        let (r, t) = Jet::seed(1.2, 0.5);
        let f = r * r * r * t;
        let fr = f.d_r();
        assert!(close(fr.value(), 3.0 * 1.44 * 0.5, 1e-15));
        assert!(close(fr.d1(), 6.0 * 1.2 * 0.5, 1e-15));
        assert!(close(fr.dt(), 3.0 * 1.44, 1e-15));
    }
}
