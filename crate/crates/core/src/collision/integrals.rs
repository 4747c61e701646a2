//! Closed-form two-center integrals over s-type Gaussians carrying plane-wave
//! factors, via analytic continuation to complex centers.
//!
//! A primitive exp(ik.r) g_b(r - B) equals, pointwise in r, the Gaussian
//! g_b(r - B') with the complex-shifted center B' = B + ik/(2b) times the
//! constant exp(ik.B - k^2/(4b)). Folding the bra and ket plane waves this
//! way turns every matrix element into a textbook two-center formula
//! evaluated at complex centers, with the Boys function continued to complex
//! arguments.

use num_complex::Complex64;
use std::f64::consts::PI;

use crate::error::{CoreError, Result};

type C3 = [Complex64; 3];

fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

fn dot_c(a: &C3, b: &C3) -> Complex64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

fn dot_r(a: &[f64; 3], b: &[f64; 3]) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

/// Boys function F0(z) = int_0^1 exp(-z t^2) dt, continued to complex z.
///
/// Small or left-half-plane arguments use the alternating series
/// 1 - z/3 + z^2/10 - z^3/42 + ...; elsewhere F0(z) = sqrt(pi/z) erf(sqrt z)/2
/// with erfc evaluated by its continued fraction.
pub fn boys_f0(z: Complex64) -> Result<Complex64> {
    if z.re < -50.0 {
        return Err(CoreError::BoysDomain { re: z.re });
    }
    let r = z.norm();
    if r <= 12.0 || z.re <= 0.0 {
        // Terms are monotone for Re z <= 0 and cancellation stays mild for
        // |z| <= 12, so plain f64 summation holds ~1e-12.
        let mut term = Complex64::new(1.0, 0.0); // (-z)^n / n!
        let mut sum = Complex64::new(1.0, 0.0);
        for n in 1..400 {
            term *= -z / c(n as f64);
            let contrib = term / c(2.0 * n as f64 + 1.0);
            sum += contrib;
            if contrib.norm() < 1e-18 * sum.norm().max(1e-300) {
                break;
            }
        }
        return Ok(sum);
    }
    let w = z.sqrt(); // principal branch, Re w >= 0
    let erf = c(1.0) - erfc_cf(w);
    Ok(0.5 * (c(PI) / z).sqrt() * erf)
}

/// erfc(w) for Re(w) > 0 by the standard continued fraction
/// erfc(w) = e^{-w^2}/sqrt(pi) * 1/(w + (1/2)/(w + 1/(w + (3/2)/(w + ...))))
/// evaluated with the modified Lentz algorithm.
fn erfc_cf(w: Complex64) -> Complex64 {
    let tiny = Complex64::new(1e-300, 0.0);
    let mut f = w;
    if f.norm() == 0.0 {
        f = tiny;
    }
    let mut cc = f;
    let mut d = Complex64::new(0.0, 0.0);
    for n in 1..300 {
        let a = c(n as f64 / 2.0);
        d = w + a * d;
        if d.norm() == 0.0 {
            d = tiny;
        }
        cc = w + a / cc;
        if cc.norm() == 0.0 {
            cc = tiny;
        }
        d = c(1.0) / d;
        let delta = cc * d;
        f *= delta;
        if (delta - c(1.0)).norm() < 1e-16 {
            break;
        }
    }
    (-w * w).exp() / c(PI.sqrt()) / f
}

/// A folded bra/ket pair of plane-wave s-Gaussians, ready to evaluate the
/// operators needed by the channel matrices. The bra enters conjugated,
/// i.e. it contributes the phase exp(-i k_a . r).
#[derive(Debug, Clone)]
pub struct GaussianPair {
    p: f64,
    mu: f64,
    /// product of the two plane-wave folding constants
    fold: Complex64,
    /// complex Gaussian-product center (a A' + b B')/p
    center: C3,
    /// bilinear square of the center difference Q = A' - B'
    q2: Complex64,
    /// (pi/p)^{3/2} exp(-mu Q.Q)
    s_cc: Complex64,
}

impl GaussianPair {
    pub fn new(
        alpha: f64,
        a_center: [f64; 3],
        k_a: [f64; 3],
        beta: f64,
        b_center: [f64; 3],
        k_b: [f64; 3],
    ) -> Self {
        Self::build(alpha, a_center, k_a, beta, b_center, k_b, f64::INFINITY)
            .expect("no cutoff requested")
    }

    /// As `new`, returning None when the Gaussian-product magnitude
    /// exp(-mu Re Q.Q) falls below exp(-neglect_exponent): such pairs
    /// contribute nothing at working precision.
    pub fn maybe_new(
        alpha: f64,
        a_center: [f64; 3],
        k_a: [f64; 3],
        beta: f64,
        b_center: [f64; 3],
        k_b: [f64; 3],
    ) -> Option<Self> {
        Self::build(alpha, a_center, k_a, beta, b_center, k_b, 60.0)
    }

    fn build(
        alpha: f64,
        a_center: [f64; 3],
        k_a: [f64; 3],
        beta: f64,
        b_center: [f64; 3],
        k_b: [f64; 3],
        neglect_exponent: f64,
    ) -> Option<Self> {
        let p = alpha + beta;
        let mu = alpha * beta / p;
        let i = Complex64::new(0.0, 1.0);
        let mut a_c: C3 = [c(0.0); 3];
        let mut b_c: C3 = [c(0.0); 3];
        for d in 0..3 {
            a_c[d] = c(a_center[d]) - i * c(k_a[d] / (2.0 * alpha));
            b_c[d] = c(b_center[d]) + i * c(k_b[d] / (2.0 * beta));
        }
        let mut q: C3 = [c(0.0); 3];
        for d in 0..3 {
            q[d] = a_c[d] - b_c[d];
        }
        let q2 = dot_c(&q, &q);
        if mu * q2.re > neglect_exponent {
            return None;
        }
        let fold_a = (-i * c(dot_r(&k_a, &a_center)) - c(dot_r(&k_a, &k_a) / (4.0 * alpha))).exp();
        let fold_b = (i * c(dot_r(&k_b, &b_center)) - c(dot_r(&k_b, &k_b) / (4.0 * beta))).exp();
        let mut center: C3 = [c(0.0); 3];
        for d in 0..3 {
            center[d] = (c(alpha) * a_c[d] + c(beta) * b_c[d]) / c(p);
        }
        let s_cc = c((PI / p).powf(1.5)) * (-c(mu) * q2).exp();
        Some(GaussianPair { p, mu, fold: fold_a * fold_b, center, q2, s_cc })
    }

    /// <bra | ket>
    pub fn overlap(&self) -> Complex64 {
        self.fold * self.s_cc
    }

    /// <bra| -grad^2/2 |ket>, the Laplacian acting on the full traveling ket.
    pub fn kinetic(&self) -> Complex64 {
        self.fold * c(self.mu) * (c(3.0) - c(2.0 * self.mu) * self.q2) * self.s_cc
    }

    /// <bra| -Z/|r - C| |ket>
    pub fn nuclear(&self, nucleus: [f64; 3], charge: f64) -> Result<Complex64> {
        let mut pc: C3 = [c(0.0); 3];
        for d in 0..3 {
            pc[d] = self.center[d] - c(nucleus[d]);
        }
        let arg = c(self.p) * dot_c(&pc, &pc);
        let f0 = boys_f0(arg)?;
        let v = -charge * 2.0 * PI / self.p;
        Ok(self.fold * c(v) * (-c(self.mu) * self.q2).exp() * f0)
    }

    /// <bra| (z - B_z) |ket> with B_z the real ket center z-coordinate, as
    /// needed for the time derivative of a Gaussian riding on the projectile.
    pub fn moment_z(&self, b_z: f64) -> Complex64 {
        self.fold * (self.center[2] - c(b_z)) * self.s_cc
    }
}
