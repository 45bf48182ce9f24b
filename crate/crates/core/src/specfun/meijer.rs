//! Meijer G-function `G^{m,0}_{p,m}(x)` by Mellin-Barnes contour quadrature.
//!
//! For `n = 0` and `m = q` the Mellin-Barnes representation is
//!
//! ```text
//! G(x) = 1/(2πi) ∫_{c-i∞}^{c+i∞} Π_j Γ(b_j + t) / Π_j Γ(a_j + t) · x^{-t} dt
//! ```
//!
//! with every pole of `Γ(b_j + t)` to the left of the line `Re t = c`. The line
//! is placed at the real saddle point of the integrand's modulus, so the
//! integrand is close to a non-oscillating bump, and the integral is done with
//! the trapezoid rule, which converges geometrically for integrands analytic in
//! a strip. The step is halved until two successive estimates agree.

use num_complex::Complex64;

use super::gamma::{ln_gamma_complex, ln_gamma_unchecked};
use crate::error::{Error, Result};

/// Integrand modulus cut-off relative to the value at the saddle.
const TAIL_CUTOFF: f64 = 1e-16;
/// Relative agreement required between successive step halvings.
const REFINE_TOL: f64 = 1e-11;
const MAX_HALVINGS: usize = 6;
const MAX_POINTS: usize = 2_000_000;

#[derive(Debug, Clone, PartialEq)]
pub struct MeijerGSpec {
    pub m: usize,
    pub n: usize,
    pub p: usize,
    pub q: usize,
    pub a: Vec<f64>,
    pub b: Vec<f64>,
}

impl MeijerGSpec {
    pub fn new(m: usize, n: usize, a: Vec<f64>, b: Vec<f64>) -> Result<Self> {
        let (p, q) = (a.len(), b.len());
        if m > q || n > p {
            return Err(Error::UnsupportedCase { m, n, p, q });
        }
        Ok(Self { m, n, p, q, a, b })
    }

    /// `G^{4,0}_{2,4}( · | 0, s+1/2 ; 0, 0, s+1/2, s+1/2 )`, the Barut-Girardello weight kernel.
    pub fn bg_weight(s: f64) -> Self {
        let h = s + 0.5;
        Self {
            m: 4,
            n: 0,
            p: 2,
            q: 4,
            a: vec![0.0, h],
            b: vec![0.0, 0.0, h, h],
        }
    }

    /// Closed-form Mellin moment `∫₀^∞ x^{k-1} G(x) dx` for this case.
    pub fn mellin_moment(&self, k: f64) -> Result<f64> {
        self.check_supported()?;
        let num: f64 = self.b.iter().map(|&b| ln_gamma_unchecked(b + k)).sum();
        let den: f64 = self.a.iter().map(|&a| ln_gamma_unchecked(a + k)).sum();
        Ok((num - den).exp())
    }

    fn check_supported(&self) -> Result<()> {
        let unsupported = Error::UnsupportedCase {
            m: self.m,
            n: self.n,
            p: self.p,
            q: self.q,
        };
        if self.n != 0 || self.m != self.q || self.p >= self.q {
            return Err(unsupported);
        }
        if self.a.len() != self.p || self.b.len() != self.q {
            return Err(unsupported);
        }
        if self.a.iter().chain(&self.b).any(|v| !v.is_finite()) {
            return Err(unsupported);
        }
        Ok(())
    }

    /// Drops `a_j = b_k` pairs; their gamma factors cancel identically.
    fn reduced(&self) -> (Vec<f64>, Vec<f64>) {
        let mut a = self.a.clone();
        let mut b = Vec::with_capacity(self.b.len());
        for &bv in &self.b {
            if let Some(pos) = a.iter().position(|&av| av == bv) {
                a.swap_remove(pos);
            } else {
                b.push(bv);
            }
        }
        (a, b)
    }
}

struct Integrand {
    a: Vec<f64>,
    b: Vec<f64>,
    ln_x: f64,
}

impl Integrand {
    fn log_real(&self, c: f64) -> f64 {
        let num: f64 = self.b.iter().map(|&b| ln_gamma_unchecked(b + c)).sum();
        let den: f64 = self.a.iter().map(|&a| ln_gamma_unchecked(a + c)).sum();
        num - den - c * self.ln_x
    }

    fn log_complex(&self, t: Complex64) -> Result<Complex64> {
        let mut acc = -t * self.ln_x;
        for &b in &self.b {
            acc += ln_gamma_complex(t + b)?;
        }
        for &a in &self.a {
            acc -= ln_gamma_complex(t + a)?;
        }
        Ok(acc)
    }
}

/// Evaluates the Meijer G-function at `x > 0`.
///
/// Only `n = 0`, `m = q`, `p < q` is supported, which covers the
/// `(4,0;2,4)` weight kernel.
pub fn meijer_g(spec: &MeijerGSpec, x: f64) -> Result<f64> {
    spec.check_supported()?;
    if !(x > 0.0) || !x.is_finite() {
        return Err(Error::Domain(format!("meijer_g requires x > 0, got {x}")));
    }
    let (a, b) = spec.reduced();
    if b.is_empty() {
        // G^{0,0}_{0,0} never arises from a supported spec with p < q.
        return Err(Error::UnsupportedCase {
            m: spec.m,
            n: spec.n,
            p: spec.p,
            q: spec.q,
        });
    }
    let integrand = Integrand { a, b, ln_x: x.ln() };

    // Poles of Γ(b + t) sit at t = -b - k; the complex log-gamma also needs
    // Re(a + t) > 0.
    let pole_edge = integrand.b.iter().map(|&b| -b).fold(f64::NEG_INFINITY, f64::max);
    let gamma_edge = integrand
        .a
        .iter()
        .map(|&a| -a)
        .fold(pole_edge, f64::max);
    let c_lo = gamma_edge + 0.5;
    let order = (integrand.b.len() - integrand.a.len()) as f64;
    let c_hi = c_lo + 8.0 + 2.0 * x.powf(1.0 / order);
    let c = golden_min(|c| integrand.log_real(c), c_lo, c_hi);
    let strip = c - pole_edge;

    let peak = integrand.log_real(c);
    let delta = 1e-3 * c.max(1.0);
    let curvature = (integrand.log_real(c + delta) - 2.0 * peak
        + integrand.log_real((c - delta).max(gamma_edge + 1e-3)))
        / (delta * delta);
    let width = if curvature > 0.0 { curvature.sqrt().recip() } else { 1.0 };
    let mut h = (0.15 * strip).min(width / 3.0).min(0.5);

    let eval = |y: f64| -> Result<(f64, f64)> {
        let v = (integrand.log_complex(Complex64::new(c, y))? - peak).exp();
        Ok((v.re, v.norm()))
    };

    // Trapezoid on [0, ∞) using the conjugate symmetry F(c - iy) = conj F(c + iy).
    let (f0, _) = eval(0.0)?;
    let mut sum = 0.5 * f0;
    let mut abs_sum = 0.5 * f0.abs();
    let mut k = 1usize;
    loop {
        let (re, modulus) = eval(k as f64 * h)?;
        sum += re;
        abs_sum += modulus;
        if modulus < TAIL_CUTOFF {
            break;
        }
        k += 1;
        if k > MAX_POINTS {
            return Err(Error::Convergence { residual: modulus });
        }
    }
    let mut extent = k as f64 * h;
    let mut estimate = h * sum;

    for _ in 0..MAX_HALVINGS {
        let half = 0.5 * h;
        let mut odd = 0.0;
        let mut j = 0usize;
        loop {
            let y = (2 * j + 1) as f64 * half;
            let (re, modulus) = eval(y)?;
            odd += re;
            abs_sum += modulus;
            if y > extent && modulus < TAIL_CUTOFF {
                extent = y;
                break;
            }
            j += 1;
            if j > MAX_POINTS {
                return Err(Error::Convergence { residual: modulus });
            }
        }
        sum += odd;
        let refined = half * sum;
        let residual = (refined - estimate).abs();
        let floor = 64.0 * f64::EPSILON * half * abs_sum;
        h = half;
        estimate = refined;
        if residual <= REFINE_TOL * refined.abs() || residual <= floor {
            return Ok(estimate * peak.exp() / std::f64::consts::PI);
        }
    }
    let scale = estimate.abs().max(f64::MIN_POSITIVE);
    Err(Error::Convergence {
        residual: (estimate - 2.0 * h * sum).abs() / scale,
    })
}

fn golden_min(f: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64) -> f64 {
    let ratio = 0.5 * (5.0_f64.sqrt() - 1.0);
    let mut x1 = hi - ratio * (hi - lo);
    let mut x2 = lo + ratio * (hi - lo);
    let mut f1 = f(x1);
    let mut f2 = f(x2);
    for _ in 0..200 {
        if (hi - lo) < 1e-6 * (1.0 + lo.abs()) {
            break;
        }
        if f1 < f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - ratio * (hi - lo);
            f1 = f(x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + ratio * (hi - lo);
            f2 = f(x2);
        }
    }
    0.5 * (lo + hi)
}
