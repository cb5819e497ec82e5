//! Explicit positive solutions of the heat equation.
//!
//! Each profile carries hand-derived derivatives of `ln u` ([`LogJet`]) and a
//! generic evaluator of `ln u` that runs on [`Scalar`]s, so the same formula
//! can be pushed through Taylor jets as an independent derivative route.

use std::f64::consts::PI;

use crate::geometry::{ModelKind, ModelManifold};
use crate::taylor::Scalar;

use super::LogJet;

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum ClosedForm {
    /// `u = c`.
    Constant { c: f64 },
    /// `u = e^{a x + a² t}` on a line.
    TravelingWave { a: f64 },
    /// `u = x` on a line, positive for `x > 0`.
    Linear,
    /// Euclidean fundamental solution `(4πt)^{-n/2} e^{-r²/4t}`.
    GaussianKernel { n: usize },
    /// Heat kernel of `H³` (curvature −1):
    /// `(4πt)^{-3/2} (r / sinh r) e^{-t - r²/4t}`.
    Hyperbolic3Kernel,
    /// `offset + amp sin(freq x) e^{-freq² t}` on a line (or circle).
    SineMode { offset: f64, amp: f64, freq: f64 },
    /// Time-independent `offset + ln tan(r/2)` on the unit 2-sphere.
    SphereHarmonic { offset: f64 },
}

impl ClosedForm {
    pub fn name(&self) -> &'static str {
        match self {
            ClosedForm::Constant { .. } => "constant",
            ClosedForm::TravelingWave { .. } => "traveling_wave",
            ClosedForm::Linear => "linear",
            ClosedForm::GaussianKernel { .. } => "gaussian_kernel",
            ClosedForm::Hyperbolic3Kernel => "hyperbolic3_kernel",
            ClosedForm::SineMode { .. } => "sine_mode",
            ClosedForm::SphereHarmonic { .. } => "sphere_harmonic",
        }
    }

    /// Model this profile solves the heat equation on, if it is forced.
    pub(crate) fn model_mismatch(&self, m: &ModelManifold) -> Option<String> {
        let ok = match self {
            ClosedForm::Constant { .. } => true,
            ClosedForm::TravelingWave { .. } | ClosedForm::Linear | ClosedForm::SineMode { .. } => {
                m.n() == 1 && matches!(m.kind(), ModelKind::Euclidean)
            }
            ClosedForm::GaussianKernel { n } => *n == m.n() && matches!(m.kind(), ModelKind::Euclidean),
            ClosedForm::Hyperbolic3Kernel => {
                m.n() == 3 && matches!(m.kind(), ModelKind::Hyperbolic { kappa } if *kappa == -1.0)
            }
            ClosedForm::SphereHarmonic { .. } => {
                m.n() == 2 && matches!(m.kind(), ModelKind::Sphere { kappa } if *kappa == 1.0)
            }
        };
        (!ok).then(|| format!("{} does not solve the heat equation on {:?} (n = {})", self.name(), m.kind(), m.n()))
    }

    /// Whether `∂_t u ≡ 0`.
    pub fn is_static(&self) -> bool {
        matches!(
            self,
            ClosedForm::Constant { .. } | ClosedForm::Linear | ClosedForm::SphereHarmonic { .. }
        ) || matches!(self, ClosedForm::SineMode { amp, .. } if *amp == 0.0)
    }

    /// `ln u` on any scalar type.
    pub fn log_u<S: Scalar>(&self, r: S, t: S) -> S {
        match *self {
            ClosedForm::Constant { c } => S::cst(c.ln()),
            ClosedForm::TravelingWave { a } => r * a + t * (a * a),
            ClosedForm::Linear => r.ln(),
            ClosedForm::GaussianKernel { n } => {
                let half_n = 0.5 * n as f64;
                (t.ln() + (4.0 * PI).ln()) * (-half_n) - r * r / (t * 4.0)
            }
            ClosedForm::Hyperbolic3Kernel => {
                (t.ln() + (4.0 * PI).ln()) * (-1.5) + r.ln() - r.sinh().ln() - t - r * r / (t * 4.0)
            }
            ClosedForm::SineMode { offset, amp, freq } => {
                ((r * freq).sin() * (t * (-freq * freq)).exp() * amp + offset).ln()
            }
            ClosedForm::SphereHarmonic { offset } => {
                let half = r * 0.5;
                (half.sin().ln() - half.cos().ln() + offset).ln()
            }
        }
    }

    /// Signed value of `u`; profiles are also valid where they change sign.
    pub fn value(&self, r: f64, t: f64) -> f64 {
        match *self {
            ClosedForm::Constant { c } => c,
            ClosedForm::Linear => r,
            ClosedForm::SineMode { offset, amp, freq } => {
                offset + amp * (freq * r).sin() * (-freq * freq * t).exp()
            }
            ClosedForm::SphereHarmonic { offset } => offset + (0.5 * r).tan().ln(),
            _ => self.log_u(r, t).exp(),
        }
    }

    /// Signed `∂_r u`.
    pub fn gradient(&self, r: f64, t: f64) -> f64 {
        match *self {
            ClosedForm::Constant { .. } => 0.0,
            ClosedForm::Linear => 1.0,
            ClosedForm::SineMode { amp, freq, .. } => {
                amp * freq * (freq * r).cos() * (-freq * freq * t).exp()
            }
            ClosedForm::SphereHarmonic { .. } => 1.0 / r.sin(),
            _ => {
                let j = self.log_jet(r, t);
                j.fr * j.ln_u.exp()
            }
        }
    }

    /// Hand-derived derivatives of `ln u`.
    pub fn log_jet(&self, r: f64, t: f64) -> LogJet {
        match *self {
            ClosedForm::Constant { c } => LogJet { ln_u: c.ln(), ..LogJet::ZERO },
            ClosedForm::TravelingWave { a } => LogJet {
                ln_u: a * r + a * a * t,
                fr: a,
                ft: a * a,
                ..LogJet::ZERO
            },
            ClosedForm::Linear => LogJet {
                ln_u: r.ln(),
                fr: 1.0 / r,
                frr: -1.0 / (r * r),
                frrr: 2.0 / (r * r * r),
                ..LogJet::ZERO
            },
            ClosedForm::GaussianKernel { n } => {
                let half_n = 0.5 * n as f64;
                LogJet {
                    ln_u: -half_n * (4.0 * PI * t).ln() - r * r / (4.0 * t),
                    fr: -r / (2.0 * t),
                    frr: -1.0 / (2.0 * t),
                    frrr: 0.0,
                    ft: -half_n / t + r * r / (4.0 * t * t),
                    frt: r / (2.0 * t * t),
                }
            }
            ClosedForm::Hyperbolic3Kernel => {
                // g(r) = ln(r / sinh r) and its derivatives, by series near 0
                let (g, g1, g2, g3) = if r.abs() < 1e-2 {
                    let r2 = r * r;
                    (
                        -r2 / 6.0 + r2 * r2 / 180.0,
                        -r / 3.0 + r * r2 / 45.0 - 2.0 * r * r2 * r2 / 945.0,
                        -1.0 / 3.0 + r2 / 15.0 - 2.0 * r2 * r2 / 189.0,
                        2.0 * r / 15.0 - 8.0 * r * r2 / 189.0,
                    )
                } else {
                    let coth = 1.0 / r.tanh();
                    let csch2 = 1.0 / r.sinh().powi(2);
                    (
                        (r / r.sinh()).ln(),
                        1.0 / r - coth,
                        -1.0 / (r * r) + csch2,
                        2.0 / (r * r * r) - 2.0 * csch2 * coth,
                    )
                };
                LogJet {
                    ln_u: -1.5 * (4.0 * PI * t).ln() + g - t - r * r / (4.0 * t),
                    fr: g1 - r / (2.0 * t),
                    frr: g2 - 1.0 / (2.0 * t),
                    frrr: g3,
                    ft: -1.5 / t - 1.0 + r * r / (4.0 * t * t),
                    frt: r / (2.0 * t * t),
                }
            }
            ClosedForm::SineMode { offset, amp, freq } => {
                let e = amp * (-freq * freq * t).exp();
                let (s, c) = (freq * r).sin_cos();
                let w2 = freq * freq;
                u_to_log(
                    offset + e * s,
                    e * freq * c,
                    -e * w2 * s,
                    -e * w2 * freq * c,
                    -w2 * e * s,
                    -w2 * e * freq * c,
                )
            }
            ClosedForm::SphereHarmonic { offset } => {
                let (s, c) = r.sin_cos();
                u_to_log(
                    offset + (0.5 * r).tan().ln(),
                    1.0 / s,
                    -c / (s * s),
                    (1.0 + c * c) / (s * s * s),
                    0.0,
                    0.0,
                )
            }
        }
    }
}

/// Convert derivatives of `u` to derivatives of `ln u`.
pub(crate) fn u_to_log(u: f64, ur: f64, urr: f64, urrr: f64, ut: f64, urt: f64) -> LogJet {
    let p = ur / u;
    let pt = ut / u;
    LogJet {
        ln_u: u.ln(),
        fr: p,
        frr: urr / u - p * p,
        frrr: urrr / u - 3.0 * p * urr / u + 2.0 * p * p * p,
        ft: pt,
        frt: urt / u - p * pt,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::taylor::Jet;

    fn all_forms() -> Vec<(ClosedForm, f64, f64)> {
        vec![
            (ClosedForm::Constant { c: 5.0 }, 0.4, 1.0),
            (ClosedForm::TravelingWave { a: 1.7 }, 2.1, 1.3),
            (ClosedForm::Linear, 1.4, 0.0),
            (ClosedForm::GaussianKernel { n: 1 }, 0.7, 0.8),
            (ClosedForm::GaussianKernel { n: 3 }, 1.0, 1.0),
            (ClosedForm::Hyperbolic3Kernel, 1.3, 0.9),
            (ClosedForm::SineMode { offset: 2.0, amp: 1.0, freq: 1.0 }, 0.9, 0.4),
            (ClosedForm::SphereHarmonic { offset: 3.0 }, 1.1, 0.0),
        ]
    }

    #[test]
    fn hand_derivatives_match_taylor_jets() {
        for (form, r, t) in all_forms() {
            let (rj, tj) = Jet::seed(r, t);
            let ad = form.log_u(rj, tj);
            let hand = form.log_jet(r, t);
            let pairs = [
                (hand.ln_u, ad.value()),
                (hand.fr, ad.d1()),
                (hand.frr, ad.d2()),
                (hand.frrr, ad.d3()),
                (hand.ft, ad.dt()),
                (hand.frt, ad.drt()),
            ];
            for (k, (h, a)) in pairs.iter().enumerate() {
                assert!(
                    (h - a).abs() <= 1e-11 * (1.0 + a.abs()),
                    "{} derivative #{k}: hand {h} vs jet {a}",
                    form.name()
                );
            }
        }
    }

    #[test]
    fn hyperbolic_series_branch_is_continuous() {
        let f = ClosedForm::Hyperbolic3Kernel;
        let a = f.log_jet(0.00999999, 1.0);
        let b = f.log_jet(0.01000001, 1.0);
        assert!((a.fr - b.fr).abs() < 1e-7);
        assert!((a.frr - b.frr).abs() < 1e-7);
        assert!((a.frrr - b.frrr).abs() < 1e-6);
    }

    #[test]
    fn traveling_wave_point_values() {
        let f = ClosedForm::TravelingWave { a: 1.0 };
        let j = f.log_jet(2.0, 2.0);
        assert!((j.ln_u.exp() - 54.598).abs() < 1e-3);
        assert_eq!(j.fr, 1.0);
    }

    #[test]
    fn gaussian_one_dimensional_values() {
        let f = ClosedForm::GaussianKernel { n: 1 };
        let j = f.log_jet(1.0, 1.0);
        let expected = (-0.25f64).exp() / (4.0 * PI).sqrt();
        assert!((j.ln_u.exp() - expected).abs() < 1e-15);
        assert!((j.ln_u.exp() - 0.21970).abs() < 1e-5);
        assert!((j.fr.abs() - 0.5).abs() < 1e-15);
    }

    #[test]
    fn signed_values_and_gradients() {
        assert_eq!(ClosedForm::Linear.value(-3.0, 0.0), -3.0);
        let s = ClosedForm::SineMode { offset: 0.0, amp: 0.1, freq: 2.0 };
        assert!((s.gradient(0.0, 0.0) - 0.2).abs() < 1e-15);
        let g = ClosedForm::GaussianKernel { n: 2 };
        let j = g.log_jet(0.6, 0.5);
        assert!((g.gradient(0.6, 0.5) - j.fr * j.ln_u.exp()).abs() < 1e-15);
    }
}
