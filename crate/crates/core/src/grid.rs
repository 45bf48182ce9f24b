//! Sampled functions on the positive half-line and finite-difference calculus on them.
//!
//! Derivative stencils come from Fornberg's recursion, so the same code handles
//! the geometric section near the origin and the uniform section further out.
//! Interior rows use five-point stencils (fourth order on uniform spacing);
//! the two rows at each end fall back to one-sided second-order stencils.

use std::sync::Arc;

use crate::error::{domain, Result};

/// Rows at each end of a grid that use one-sided stencils.
pub const BOUNDARY_ROWS: usize = 2;

/// Relative step of the geometric section, `x_{k+1} = (1 + ratio) x_k`.
const GEOMETRIC_RATIO: f64 = 0.02;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SpacingLaw {
    Uniform,
    /// Geometric from `min` until the step matches the uniform spacing, uniform after.
    Hybrid,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridSpec {
    pub min: f64,
    pub max: f64,
    pub count: usize,
    pub law: SpacingLaw,
}

impl GridSpec {
    pub fn new(min: f64, max: f64, count: usize, law: SpacingLaw) -> Result<Self> {
        if !(min > 0.0) || !(max > min) || !max.is_finite() {
            return domain(format!("grid needs 0 < min < max, got ({min}, {max})"));
        }
        if count < 2 * BOUNDARY_ROWS + 1 {
            return domain(format!("grid needs at least {} nodes, got {count}", 2 * BOUNDARY_ROWS + 1));
        }
        Ok(Self { min, max, count, law })
    }

    /// Default grid for resolving a state of energy `energy`: `(1e-2, 6 + √(2E)]`, 2000 nodes, hybrid.
    pub fn for_energy(energy: f64) -> Self {
        Self {
            min: 1e-2,
            max: 6.0 + (2.0 * energy).sqrt(),
            count: 2000,
            law: SpacingLaw::Hybrid,
        }
    }

    pub fn nodes(&self) -> Vec<f64> {
        match self.law {
            SpacingLaw::Uniform => linspace(self.min, self.max, self.count),
            SpacingLaw::Hybrid => hybrid_nodes(self.min, self.max, self.count),
        }
    }
}

fn linspace(a: f64, b: f64, n: usize) -> Vec<f64> {
    let last = (n - 1) as f64;
    (0..n)
        .map(|i| {
            let i = i as f64;
            (a * (last - i) + b * i) / last
        })
        .collect()
}

fn geometric_prefix(min: f64, step: f64) -> Vec<f64> {
    let mut out = vec![min];
    let mut x = min;
    while GEOMETRIC_RATIO * x < step {
        x *= 1.0 + GEOMETRIC_RATIO;
        out.push(x);
    }
    out
}

fn hybrid_nodes(min: f64, max: f64, count: usize) -> Vec<f64> {
    // Pick the uniform step so that geometric + uniform sections use `count` nodes.
    let total_for = |h: f64| {
        let geo = geometric_prefix(min, h);
        let start = *geo.last().unwrap();
        if start >= max {
            return usize::MAX;
        }
        geo.len() - 1 + ((max - start) / h).ceil() as usize + 1
    };
    let (mut lo, mut hi) = (1e-9 * (max - min), max - min);
    for _ in 0..200 {
        let mid = (lo * hi).sqrt();
        if total_for(mid) > count {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let mut geo = geometric_prefix(min, hi);
    let start = *geo.last().unwrap();
    let remaining = count + 1 - geo.len();
    if start >= max || remaining < 2 {
        return linspace(min, max, count);
    }
    geo.pop();
    geo.extend(linspace(start, max, remaining));
    geo
}

/// Finite-difference weights for derivatives `0..=order` at `z` on `nodes`.
/// Row `k` of the result holds the weights of the `k`-th derivative.
fn fornberg(z: f64, nodes: &[f64], order: usize) -> Vec<Vec<f64>> {
    let n = nodes.len();
    let mut c = vec![vec![0.0; n]; order + 1];
    let mut c1 = 1.0;
    let mut c4 = nodes[0] - z;
    c[0][0] = 1.0;
    for i in 1..n {
        let mn = i.min(order);
        let mut c2 = 1.0;
        let c5 = c4;
        c4 = nodes[i] - z;
        for j in 0..i {
            let c3 = nodes[i] - nodes[j];
            c2 *= c3;
            if j == i - 1 {
                for k in (1..=mn).rev() {
                    c[k][i] = c1 * (k as f64 * c[k - 1][i - 1] - c5 * c[k][i - 1]) / c2;
                }
                c[0][i] = -c1 * c5 * c[0][i - 1] / c2;
            }
            for k in (1..=mn).rev() {
                c[k][j] = (c4 * c[k][j] - k as f64 * c[k - 1][j]) / c3;
            }
            c[0][j] *= c4 / c3;
        }
        c1 = c2;
    }
    c
}

/// A real function sampled on a positive grid.
#[derive(Debug, Clone)]
pub struct GridFunction {
    nodes: Arc<[f64]>,
    values: Vec<f64>,
    spec: GridSpec,
}

impl GridFunction {
    pub fn sample(spec: &GridSpec, f: impl Fn(f64) -> f64) -> Self {
        let nodes: Arc<[f64]> = spec.nodes().into();
        let values = nodes.iter().map(|&x| f(x)).collect();
        Self {
            nodes,
            values,
            spec: *spec,
        }
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn spec(&self) -> &GridSpec {
        &self.spec
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Same grid, new values.
    pub fn with_values(&self, values: Vec<f64>) -> Self {
        assert_eq!(values.len(), self.nodes.len());
        Self {
            nodes: Arc::clone(&self.nodes),
            values,
            spec: self.spec,
        }
    }

    /// Pointwise `f(x, value)`.
    pub fn map(&self, f: impl Fn(f64, f64) -> f64) -> Self {
        self.with_values(self.nodes.iter().zip(&self.values).map(|(&x, &v)| f(x, v)).collect())
    }

    /// Pointwise combination with another function on the same grid.
    pub fn zip_with(&self, other: &GridFunction, f: impl Fn(f64, f64, f64) -> f64) -> Self {
        assert!(Arc::ptr_eq(&self.nodes, &other.nodes) || self.nodes == other.nodes);
        self.with_values(
            self.nodes
                .iter()
                .zip(self.values.iter().zip(&other.values))
                .map(|(&x, (&a, &b))| f(x, a, b))
                .collect(),
        )
    }

    pub fn scale(&self, factor: f64) -> Self {
        self.map(|_, v| factor * v)
    }

    fn stencil_window(&self, i: usize, width: usize) -> std::ops::Range<usize> {
        let n = self.nodes.len();
        let half = width / 2;
        let start = i.saturating_sub(half).min(n - width);
        start..start + width
    }

    fn differentiate(&self, order: usize) -> Self {
        let n = self.nodes.len();
        let mut out = Vec::with_capacity(n);
        for i in 0..n {
            let boundary = i < BOUNDARY_ROWS || i + BOUNDARY_ROWS >= n;
            // One-sided second order needs order + 2 points at the edges.
            let width = if boundary { order + 2 } else { 5 };
            let window = if boundary {
                if i < BOUNDARY_ROWS {
                    0..width
                } else {
                    n - width..n
                }
            } else {
                self.stencil_window(i, width)
            };
            let w = fornberg(self.nodes[i], &self.nodes[window.clone()], order);
            let v: f64 = w[order]
                .iter()
                .zip(&self.values[window])
                .map(|(a, b)| a * b)
                .sum();
            out.push(v);
        }
        self.with_values(out)
    }

    pub fn derivative(&self) -> Self {
        self.differentiate(1)
    }

    pub fn second_derivative(&self) -> Self {
        self.differentiate(2)
    }

    /// Row range that excludes `margin` rows at each end.
    pub fn interior(&self, margin: usize) -> std::ops::Range<usize> {
        margin..self.len().saturating_sub(margin)
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    /// Largest `|v|` over the interior rows.
    pub fn sup_interior(&self, margin: usize) -> f64 {
        self.values[self.interior(margin)]
            .iter()
            .fold(0.0, |m, v| m.max(v.abs()))
    }

    /// Trapezoid-rule `∫ f g dx` over the rows in `range`.
    pub fn inner_on(&self, other: &GridFunction, range: std::ops::Range<usize>) -> f64 {
        let mut acc = 0.0;
        for i in range.start..range.end.saturating_sub(1) {
            let dx = self.nodes[i + 1] - self.nodes[i];
            acc += 0.5 * dx * (self.values[i] * other.values[i] + self.values[i + 1] * other.values[i + 1]);
        }
        acc
    }

    /// Trapezoid-rule `L²` norm over the rows in `range`.
    pub fn norm_on(&self, range: std::ops::Range<usize>) -> f64 {
        self.inner_on(self, range).sqrt()
    }

    pub fn norm(&self) -> f64 {
        self.norm_on(0..self.len())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hybrid_grid_shape() {
        let spec = GridSpec::new(1e-2, 10.0, 2000, SpacingLaw::Hybrid).unwrap();
        let x = spec.nodes();
        assert_eq!(x.len(), 2000);
        assert_eq!(x[0], 1e-2);
        assert!((x[1999] - 10.0).abs() < 1e-12);
        assert!(x.windows(2).all(|p| p[1] > p[0]));
        // geometric start, uniform finish
        let r0 = x[1] / x[0];
        assert!((r0 - 1.02).abs() < 1e-12);
        let h_end = x[1999] - x[1998];
        let h_mid = x[1500] - x[1499];
        assert!((h_end - h_mid).abs() < 1e-12);
    }

    #[test]
    fn fornberg_uniform_central() {
        let w = fornberg(0.0, &[-2.0, -1.0, 0.0, 1.0, 2.0], 2);
        let d1 = [1.0 / 12.0, -2.0 / 3.0, 0.0, 2.0 / 3.0, -1.0 / 12.0];
        let d2 = [-1.0 / 12.0, 4.0 / 3.0, -5.0 / 2.0, 4.0 / 3.0, -1.0 / 12.0];
        for k in 0..5 {
            assert!((w[1][k] - d1[k]).abs() < 1e-14);
            assert!((w[2][k] - d2[k]).abs() < 1e-14);
        }
    }

    #[test]
    fn derivatives_of_smooth_function() {
        let spec = GridSpec::new(0.05, 6.0, 1500, SpacingLaw::Hybrid).unwrap();
        let f = GridFunction::sample(&spec, |x| x.sin() * (-0.1 * x * x).exp());
        let d = f.derivative();
        let d2 = f.second_derivative();
        let exact_d = |x: f64| (x.cos() - 0.2 * x * x.sin()) * (-0.1 * x * x).exp();
        let exact_d2 = |x: f64| {
            let e = (-0.1 * x * x).exp();
            e * (-1.2 * x.sin() - 0.4 * x * x.cos() + 0.04 * x * x * x.sin())
        };
        for i in d.interior(BOUNDARY_ROWS) {
            let x = f.nodes()[i];
            assert!((d.values()[i] - exact_d(x)).abs() < 1e-8, "x={x}");
            assert!((d2.values()[i] - exact_d2(x)).abs() < 1e-6, "x={x}");
        }
    }

    #[test]
    fn rejects_bad_specs() {
        assert!(GridSpec::new(0.0, 1.0, 100, SpacingLaw::Uniform).is_err());
        assert!(GridSpec::new(1.0, 0.5, 100, SpacingLaw::Uniform).is_err());
        assert!(GridSpec::new(0.1, 1.0, 3, SpacingLaw::Uniform).is_err());
    }
}
