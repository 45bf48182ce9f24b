//! The hierarchy `H_{n+1} = a_{n+1}† a_{n+1} + E_{n+1} = a_n a_n† + E_n` with
//! `a_n = (p + i f_n(x)) / √2` and `f_n(x) = b_n x + c_n / x`.

use super::ModelParams;

/// One candidate solution for `(b_0, c_0, E_0)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GroundBranch {
    pub b0: f64,
    pub c0: f64,
    pub e0: f64,
}

/// Both sign choices `b_0 = ±1`, with `c_0 = s + 1` and
/// `E_0 = -b_0 (2 c_0 + 1) / 2` from matching `a_0† a_0 + E_0` to `H`.
pub fn ground_branches(params: &ModelParams) -> [GroundBranch; 2] {
    let c0 = larger_root(params.g());
    [-1.0, 1.0].map(|b0| GroundBranch {
        b0,
        c0,
        e0: -b0 * (2.0 * c0 + 1.0) / 2.0,
    })
}

/// Larger root of `c (c - 1) = k`.
fn larger_root(k: f64) -> f64 {
    0.5 * (1.0 + (1.0 + 4.0 * k).sqrt())
}

/// Coefficients of the factorization hierarchy, obtained by iterating the
/// matching conditions level by level rather than from their closed forms.
#[derive(Debug, Clone, PartialEq)]
pub struct FactorizationChain {
    pub b: Vec<f64>,
    pub c: Vec<f64>,
    pub energies: Vec<f64>,
}

impl FactorizationChain {
    /// Levels `0..=depth`.
    pub fn build(params: &ModelParams, depth: usize) -> Self {
        let ground = ground_branches(params)
            .into_iter()
            .max_by(|a, b| a.e0.total_cmp(&b.e0))
            .expect("two branches");
        let mut b = vec![ground.b0];
        let mut c = vec![ground.c0];
        let mut energies = vec![ground.e0];
        for n in 0..depth {
            let (bn, cn, en) = (b[n], c[n], energies[n]);
            // b_{n+1}² = b_n²; keep the sign that maximizes E.
            let b_next = bn;
            // c_{n+1}(c_{n+1} - 1) = c_n(c_n + 1); the larger root keeps ξ normalizable.
            let c_next = larger_root(cn * (cn + 1.0));
            // b_{n+1}(2c_{n+1} + 1) + 2E_{n+1} = b_n(2c_n - 1) + 2E_n
            let e_next = (bn * (2.0 * cn - 1.0) + 2.0 * en - b_next * (2.0 * c_next + 1.0)) / 2.0;
            b.push(b_next);
            c.push(c_next);
            energies.push(e_next);
        }
        Self { b, c, energies }
    }

    pub fn depth(&self) -> usize {
        self.energies.len() - 1
    }

    /// `f_n(x) = b_n x + c_n / x`.
    pub fn superpotential(&self, n: usize, x: f64) -> f64 {
        self.b[n] * x + self.c[n] / x
    }

    /// Largest absolute violation of the three level-to-level matching conditions.
    pub fn recurrence_residual(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for n in 0..self.depth() {
            let (b0, b1) = (self.b[n], self.b[n + 1]);
            let (c0, c1) = (self.c[n], self.c[n + 1]);
            let (e0, e1) = (self.energies[n], self.energies[n + 1]);
            worst = worst
                .max((b1 * b1 - b0 * b0).abs())
                .max((c1 * (c1 - 1.0) - c0 * (c0 + 1.0)).abs() / c1.abs().max(1.0).powi(2))
                .max((b1 * (2.0 * c1 + 1.0) + 2.0 * e1 - b0 * (2.0 * c0 - 1.0) - 2.0 * e0).abs() / e1.abs().max(1.0));
        }
        worst
    }

    /// `|c_n| = [(E_n - E_{n-1}) ... (E_n - E_0)]^{-1/2}`.
    pub fn normalization(&self, n: usize) -> f64 {
        let log_prod: f64 = (0..n).map(|k| (self.energies[n] - self.energies[k]).ln()).sum();
        (-0.5 * log_prod).exp()
    }
}
