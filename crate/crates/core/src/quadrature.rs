//! Gauss-Legendre rules with simple domain transforms.

use crate::error::{Error, Result};

/// Nodes and weights of the `n`-point Gauss-Legendre rule on `[-1, 1]`.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let nf = n as f64;
    for i in 0..n.div_ceil(2) {
        // Tricomi initial guess, then Newton on P_n.
        let theta = std::f64::consts::PI * (i as f64 + 0.75) / (nf + 0.5);
        let mut x = (1.0 - (nf - 1.0) / (8.0 * nf * nf * nf)) * theta.cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (p, d) = legendre_with_derivative(n, x);
            dp = d;
            let step = p / d;
            x -= step;
            if step.abs() <= 1e-16 * x.abs().max(1.0) {
                break;
            }
        }
        let (_, d) = legendre_with_derivative(n, x);
        if d != 0.0 {
            dp = d;
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    (nodes, weights)
}

fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum DomainTransform {
    /// Affine map of `[-1, 1]` onto `[a, b]`.
    Interval { a: f64, b: f64 },
    /// `x = scale · t / (1 - t)` with `t ∈ (0, 1)`; covers `(0, ∞)`.
    HalfLine { scale: f64 },
    /// `x = 1 - u²` with `u ∈ (0, 1)`; smooths `(1 - x)^{β}` endpoint behaviour on `(0, 1)`.
    UnitSquareRoot,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RuleKind {
    GaussLegendre,
}

/// A Gauss rule already mapped onto its target domain: `∫ f ≈ Σ wᵢ f(xᵢ)`.
#[derive(Debug, Clone)]
pub struct QuadratureScheme {
    pub kind: RuleKind,
    pub transform: DomainTransform,
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
    /// Difference to the previous rule in an adaptive sequence, if any.
    pub error_estimate: Option<f64>,
}

impl QuadratureScheme {
    pub fn new(n: usize, transform: DomainTransform) -> Self {
        let (t, w) = gauss_legendre(n);
        let mut nodes = Vec::with_capacity(n);
        let mut weights = Vec::with_capacity(n);
        for (&ti, &wi) in t.iter().zip(&w) {
            let (x, jac) = match transform {
                DomainTransform::Interval { a, b } => {
                    let half = 0.5 * (b - a);
                    (a + half * (ti + 1.0), half)
                }
                DomainTransform::HalfLine { scale } => {
                    let u = 0.5 * (ti + 1.0);
                    let one_minus = 0.5 * (1.0 - ti);
                    (scale * u / one_minus, 0.5 * scale / (one_minus * one_minus))
                }
                DomainTransform::UnitSquareRoot => {
                    let u = 0.5 * (ti + 1.0);
                    (1.0 - u * u, u)
                }
            };
            nodes.push(x);
            weights.push(wi * jac);
        }
        Self {
            kind: RuleKind::GaussLegendre,
            transform,
            nodes,
            weights,
            error_estimate: None,
        }
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn integrate(&self, f: impl Fn(f64) -> f64) -> f64 {
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(|(&x, &w)| w * f(x))
            .sum()
    }

    pub fn try_integrate(&self, f: impl Fn(f64) -> Result<f64>) -> Result<f64> {
        let mut acc = 0.0;
        for (&x, &w) in self.nodes.iter().zip(&self.weights) {
            acc += w * f(x)?;
        }
        Ok(acc)
    }
}

/// Doubling schedule for [`integrate_adaptive`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AdaptiveSpec {
    pub start: usize,
    pub max_nodes: usize,
    pub rel_tol: f64,
    /// Successive results agree when `|Δ| <= rel_tol · max(|value|, scale)`.
    /// A positive scale lets integrals that vanish converge.
    pub scale: f64,
}

/// Doubles the node count from `spec.start` until two successive results agree,
/// giving up after `spec.max_nodes`.
pub fn integrate_adaptive(
    transform: DomainTransform,
    spec: AdaptiveSpec,
    f: impl Fn(f64) -> Result<f64>,
) -> Result<(f64, QuadratureScheme)> {
    let AdaptiveSpec { start, max_nodes, rel_tol, scale } = spec;
    let mut n = start.max(2);
    let mut prev = QuadratureScheme::new(n, transform).try_integrate(&f)?;
    loop {
        n *= 2;
        let mut scheme = QuadratureScheme::new(n, transform);
        let value = scheme.try_integrate(&f)?;
        let diff = (value - prev).abs();
        scheme.error_estimate = Some(diff);
        if diff <= rel_tol * value.abs().max(scale) {
            return Ok((value, scheme));
        }
        if n >= max_nodes {
            return Err(Error::Convergence {
                residual: diff / value.abs().max(f64::MIN_POSITIVE),
            });
        }
        prev = value;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn legendre_weights_sum_to_two() {
        for n in [1, 2, 5, 16, 100, 513] {
            let (x, w) = gauss_legendre(n);
            assert!((w.iter().sum::<f64>() - 2.0).abs() < 1e-13, "n={n}");
            assert!(w.iter().all(|&v| v > 0.0));
            assert!(x.windows(2).all(|p| p[0] < p[1]));
        }
    }

    #[test]
    fn exact_for_polynomials() {
        let q = QuadratureScheme::new(6, DomainTransform::Interval { a: 0.0, b: 2.0 });
        // degree 11 is integrated exactly by 6 points
        let got = q.integrate(|x| x.powi(11));
        assert!((got - 2.0_f64.powi(12) / 12.0).abs() < 1e-11);
    }

    #[test]
    fn half_line_exponential() {
        let q = QuadratureScheme::new(200, DomainTransform::HalfLine { scale: 1.0 });
        let got = q.integrate(|x| x * x * (-x).exp());
        assert!((got - 2.0).abs() < 1e-10);
    }

    #[test]
    fn square_root_transform_beta_integral() {
        // ∫₀¹ (1-x)^{1/2} dx = 2/3
        let q = QuadratureScheme::new(8, DomainTransform::UnitSquareRoot);
        assert!((q.integrate(|x| (1.0 - x).sqrt()) - 2.0 / 3.0).abs() < 1e-14);
    }

    #[test]
    fn adaptive_reports_error_estimate() {
        let spec = AdaptiveSpec { start: 16, max_nodes: 1024, rel_tol: 1e-12, scale: 0.0 };
        let (v, scheme) = integrate_adaptive(DomainTransform::HalfLine { scale: 1.0 }, spec, |x| {
            Ok((-x).exp())
        })
        .unwrap();
        assert!((v - 1.0).abs() < 1e-12);
        assert!(scheme.error_estimate.unwrap() < 1e-12);
    }
}
