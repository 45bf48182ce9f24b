//! Generalized hypergeometric series needed by the coherent-state normalizations.

use crate::error::{domain, Error, Result};

const MAX_TERMS: usize = 100_000;

fn is_non_positive_integer(v: f64) -> bool {
    v <= 0.0 && v.fract() == 0.0
}

/// Parameters of a `pFq` series with a real argument.
#[derive(Debug, Clone, PartialEq)]
pub struct HypergeomSpec {
    pub upper: Vec<f64>,
    pub lower: Vec<f64>,
    pub argument: f64,
}

impl HypergeomSpec {
    pub fn new(upper: Vec<f64>, lower: Vec<f64>, argument: f64) -> Result<Self> {
        if let Some(&c) = lower.iter().find(|&&c| is_non_positive_integer(c)) {
            return domain(format!("lower parameter {c} is a non-positive integer"));
        }
        if !argument.is_finite() {
            return domain("hypergeometric argument must be finite");
        }
        Ok(Self {
            upper,
            lower,
            argument,
        })
    }

    /// Number of terms after which the series stops on its own, if any.
    fn terminates_after(&self) -> Option<usize> {
        self.upper
            .iter()
            .filter(|&&a| is_non_positive_integer(a))
            .map(|&a| (-a) as usize)
            .min()
    }

    /// Sums the series term by term until the terms stop contributing.
    pub fn evaluate(&self) -> Result<f64> {
        let x = self.argument;
        let terminating = self.terminates_after();
        if terminating == Some(0) {
            return Ok(1.0);
        }
        let p = self.upper.len();
        let q = self.lower.len();
        if terminating.is_none() && p > q + 1 {
            return domain(format!("{p}F{q} series diverges for non-zero argument"));
        }
        if terminating.is_none() && p == q + 1 && x.abs() >= 1.0 {
            return domain(format!(
                "{p}F{q} series needs |argument| < 1 unless it terminates, got {x}"
            ));
        }

        let mut term = 1.0;
        let mut sum = 1.0;
        for k in 0..MAX_TERMS {
            let kf = k as f64;
            let num: f64 = self.upper.iter().map(|&a| a + kf).product();
            let den: f64 = self.lower.iter().map(|&b| b + kf).product();
            term *= num / den * x / (kf + 1.0);
            sum += term;
            if let Some(last) = terminating {
                if k + 1 >= last {
                    return Ok(sum);
                }
                continue;
            }
            // Terms of 0F1 can grow before they shrink; only stop once the
            // ratio is below one.
            if term.abs() <= f64::EPSILON * 0.1 * sum.abs() && (num / den * x / (kf + 1.0)).abs() < 1.0 {
                return Ok(sum);
            }
            if !sum.is_finite() {
                return Err(Error::Domain(format!("hypergeometric series overflowed at argument {x}")));
            }
        }
        Err(Error::Convergence {
            residual: term.abs() / sum.abs(),
        })
    }
}

/// `₀F₁(; c; x)` for `x >= 0`.
pub fn hyp0f1(c: f64, x: f64) -> Result<f64> {
    if !(x >= 0.0) {
        return domain(format!("hyp0f1 expects a non-negative argument, got {x}"));
    }
    HypergeomSpec::new(vec![], vec![c], x)?.evaluate()
}

/// `₂F₁(a, b; c; w)`.
///
/// A zero upper parameter makes the series exactly 1 for any `w`.
pub fn hyp2f1(a: f64, b: f64, c: f64, w: f64) -> Result<f64> {
    if is_non_positive_integer(c) {
        return domain(format!("hyp2f1 lower parameter {c} is a non-positive integer"));
    }
    if a == 0.0 || b == 0.0 {
        return Ok(1.0);
    }
    HypergeomSpec::new(vec![a, b], vec![c], w)?.evaluate()
}
