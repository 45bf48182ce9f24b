//! Ladder algebra in the eigenket basis `{|n⟩}` and its differential realization.
//!
//! `M₊|n⟩ = m₊(n)|n+1⟩`, `M₋|n⟩ = m₋(n)|n-1⟩`, `M₀|n⟩ = m₀(n)|n⟩` with
//! `m₊(n) = √((n+1)(n+s+3/2))`, `m₋(n) = √(n(n+s+1/2))`, `m₀(n) = n + s/2 + 3/4`.
//! Truncated matrices cannot satisfy the su(1,1) relations in their last rows,
//! so algebraic checks run on an interior block.

use nalgebra::DMatrix;

use crate::error::{domain, Result};
use crate::grid::{GridFunction, GridSpec, BOUNDARY_ROWS};
use crate::spectrum::{self, ModelParams};

pub fn m_plus(params: &ModelParams, n: usize) -> f64 {
    let nf = n as f64;
    ((nf + 1.0) * (nf + params.s() + 1.5)).sqrt()
}

pub fn m_minus(params: &ModelParams, n: usize) -> f64 {
    let nf = n as f64;
    (nf * (nf + params.s() + 0.5)).sqrt()
}

pub fn m_zero(params: &ModelParams, n: usize) -> f64 {
    n as f64 + 0.5 * params.s() + 0.75
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OperatorLabel {
    Lower,
    Raise,
    Weight,
    Number,
    Hamiltonian,
}

/// Tridiagonal `D × D` matrix. `lower[i]` is entry `(i+1, i)`, `upper[i]` is `(i, i+1)`.
#[derive(Debug, Clone, PartialEq)]
pub struct BandedOperator {
    pub label: OperatorLabel,
    pub lower: Vec<f64>,
    pub diag: Vec<f64>,
    pub upper: Vec<f64>,
}

impl BandedOperator {
    fn zeros(label: OperatorLabel, dim: usize) -> Self {
        Self {
            label,
            lower: vec![0.0; dim - 1],
            diag: vec![0.0; dim],
            upper: vec![0.0; dim - 1],
        }
    }

    pub fn dim(&self) -> usize {
        self.diag.len()
    }

    pub fn transpose(&self) -> Self {
        Self {
            label: self.label,
            lower: self.upper.clone(),
            diag: self.diag.clone(),
            upper: self.lower.clone(),
        }
    }

    pub fn to_dense(&self) -> DMatrix<f64> {
        let d = self.dim();
        let mut m = DMatrix::zeros(d, d);
        for i in 0..d {
            m[(i, i)] = self.diag[i];
            if i + 1 < d {
                m[(i + 1, i)] = self.lower[i];
                m[(i, i + 1)] = self.upper[i];
            }
        }
        m
    }

    pub fn apply(&self, v: &[f64]) -> Vec<f64> {
        let d = self.dim();
        assert_eq!(v.len(), d);
        (0..d)
            .map(|i| {
                let mut acc = self.diag[i] * v[i];
                if i > 0 {
                    acc += self.lower[i - 1] * v[i - 1];
                }
                if i + 1 < d {
                    acc += self.upper[i] * v[i + 1];
                }
                acc
            })
            .collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TruncationSpec {
    pub dim: usize,
    /// Trailing rows excluded from algebraic assertions.
    pub interior_margin: usize,
}

impl TruncationSpec {
    pub fn new(dim: usize, interior_margin: usize) -> Result<Self> {
        if dim < 4 {
            return domain(format!("truncation dimension must be >= 4, got {dim}"));
        }
        if interior_margin < 1 || interior_margin >= dim {
            return domain(format!("interior margin must be in 1..{dim}, got {interior_margin}"));
        }
        Ok(Self { dim, interior_margin })
    }

    pub fn with_dim(dim: usize) -> Result<Self> {
        Self::new(dim, 2)
    }

    pub fn interior(&self) -> usize {
        self.dim - self.interior_margin
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LadderMatrices {
    pub lower: BandedOperator,
    pub raise: BandedOperator,
    pub weight: BandedOperator,
}

pub fn ladder_matrices(params: &ModelParams, trunc: &TruncationSpec) -> LadderMatrices {
    let d = trunc.dim;
    let mut lower = BandedOperator::zeros(OperatorLabel::Lower, d);
    let mut raise = BandedOperator::zeros(OperatorLabel::Raise, d);
    let mut weight = BandedOperator::zeros(OperatorLabel::Weight, d);
    for n in 0..d {
        weight.diag[n] = m_zero(params, n);
        if n + 1 < d {
            raise.lower[n] = m_plus(params, n);
            lower.upper[n] = m_minus(params, n + 1);
        }
    }
    LadderMatrices { lower, raise, weight }
}

pub fn number_matrix(trunc: &TruncationSpec) -> BandedOperator {
    let mut op = BandedOperator::zeros(OperatorLabel::Number, trunc.dim);
    for (n, v) in op.diag.iter_mut().enumerate() {
        *v = n as f64;
    }
    op
}

/// `H|n⟩ = (2n + s + 3/2)|n⟩`.
pub fn hamiltonian_matrix(params: &ModelParams, trunc: &TruncationSpec) -> BandedOperator {
    let mut op = BandedOperator::zeros(OperatorLabel::Hamiltonian, trunc.dim);
    for (n, v) in op.diag.iter_mut().enumerate() {
        *v = spectrum::energy(params, n);
    }
    op
}

fn commutator(a: &DMatrix<f64>, b: &DMatrix<f64>) -> DMatrix<f64> {
    a * b - b * a
}

fn sup_block(m: &DMatrix<f64>, size: usize) -> f64 {
    m.view((0, 0), (size, size)).iter().fold(0.0, |acc, v| acc.max(v.abs()))
}

/// Sup-norm residuals of the su(1,1) relations, divided by `max(1, ‖2M₀‖)` on the
/// checked block. Entries of `M₋M₊` grow like `n²` and the matrix elements are square
/// roots, so an absolute bound would measure only representation error at large `D`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CommutatorReport {
    /// `[M₋, M₊] - 2M₀`
    pub lower_raise: f64,
    /// `[M₀, M₊] - M₊`
    pub weight_raise: f64,
    /// `[M₀, M₋] + M₋`
    pub weight_lower: f64,
    /// `[M₋, M₊] - H`
    pub hamiltonian: f64,
}

impl CommutatorReport {
    pub fn max(&self) -> f64 {
        self.lower_raise
            .max(self.weight_raise)
            .max(self.weight_lower)
            .max(self.hamiltonian)
    }
}

fn commutator_residuals(params: &ModelParams, trunc: &TruncationSpec, block: usize) -> CommutatorReport {
    let ops = ladder_matrices(params, trunc);
    let lower = ops.lower.to_dense();
    let raise = ops.raise.to_dense();
    let weight = ops.weight.to_dense();
    let ham = hamiltonian_matrix(params, trunc).to_dense();
    let lr = commutator(&lower, &raise);
    let scale = sup_block(&(&weight * 2.0), block).max(1.0);
    CommutatorReport {
        lower_raise: sup_block(&(&lr - &weight * 2.0), block) / scale,
        weight_raise: sup_block(&(commutator(&weight, &raise) - &raise), block) / scale,
        weight_lower: sup_block(&(commutator(&weight, &lower) + &lower), block) / scale,
        hamiltonian: sup_block(&(&lr - ham), block) / scale,
    }
}

/// Residuals on the interior block (rows and columns below `D - margin`).
pub fn commutator_check(params: &ModelParams, trunc: &TruncationSpec) -> CommutatorReport {
    commutator_residuals(params, trunc, trunc.interior())
}

/// Residuals on the full truncated matrices, edge rows included.
pub fn commutator_check_full(params: &ModelParams, trunc: &TruncationSpec) -> CommutatorReport {
    commutator_residuals(params, trunc, trunc.dim)
}

/// Relative `L²` residuals of the differential ladder realizations acting on `ψ_n`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LadderResiduals {
    /// `M₊ψ_n` vs `m₊(n) ψ_{n+1}`
    pub raise: f64,
    /// `M₋ψ_n` vs `m₋(n) ψ_{n-1}` (vs 0 for `n = 0`)
    pub lower: f64,
    /// `A_nψ_n` vs `-(n/x)ψ_n + (2/x)√(n(n+s+1/2)) ψ_{n-1}`
    pub a_op: f64,
    /// `A_n†ψ_n` vs `-((n+1)/x)ψ_n + (2/x)√((n+1)(n+s+3/2)) ψ_{n+1}`
    pub a_dagger: f64,
}

impl LadderResiduals {
    pub fn max(&self) -> f64 {
        self.raise.max(self.lower).max(self.a_op).max(self.a_dagger)
    }
}

/// Constant term `1/(3/2 ∓ 1/2)` of `M±`.
fn ladder_constant(raise: bool) -> f64 {
    let half = if raise { -0.5 } else { 0.5 };
    1.0 / (1.5 + half)
}

/// `M± = ±(x/2) d/dx + N + s/2 + 1/(3/2 ∓ 1/2) - x²/2` with `N → n` on `ψ_n`.
pub fn apply_ladder(params: &ModelParams, n: usize, psi: &GridFunction, raise: bool) -> GridFunction {
    let sign = if raise { 1.0 } else { -1.0 };
    let shift = n as f64 + 0.5 * params.s() + ladder_constant(raise);
    psi.derivative()
        .zip_with(psi, |x, d, v| sign * 0.5 * x * d + (shift - 0.5 * x * x) * v)
}

/// `A_n = -d/dx - x + (s+n+1)/x` (`dagger = false`) or `A_n† = d/dx - x + (s+n+1)/x`.
pub fn apply_a(params: &ModelParams, n: usize, psi: &GridFunction, dagger: bool) -> GridFunction {
    let sign = if dagger { 1.0 } else { -1.0 };
    let c = params.s() + n as f64 + 1.0;
    psi.derivative()
        .zip_with(psi, |x, d, v| sign * d + (c / x - x) * v)
}

/// Compares the differential realizations against their expected actions on
/// closed-form eigenfunctions. Residuals are `‖lhs - rhs‖₂ / ‖ψ_n‖₂` over the interior.
pub fn grid_ladder_check(params: &ModelParams, n: usize, grid: &GridSpec) -> Result<LadderResiduals> {
    let psi = spectrum::eigenfunction(params, n, grid);
    let up = spectrum::eigenfunction(params, n + 1, grid);
    for (f, level) in [(&psi, n), (&up, n + 1)] {
        let norm2 = f.norm().powi(2);
        if (norm2 - 1.0).abs() > 1e-3 {
            return Err(crate::Error::Accuracy {
                what: format!("grid does not resolve ψ_{level} (norm² = {norm2})"),
                residual: (norm2 - 1.0).abs(),
                tolerance: 1e-3,
            });
        }
    }
    let down = if n > 0 {
        spectrum::eigenfunction(params, n - 1, grid)
    } else {
        psi.scale(0.0)
    };
    let nf = n as f64;
    let s = params.s();
    let range = psi.interior(BOUNDARY_ROWS);
    let reference = psi.norm_on(range.clone());
    let resid = |lhs: &GridFunction, rhs: &GridFunction| {
        lhs.zip_with(rhs, |_, a, b| a - b).norm_on(range.clone()) / reference
    };

    let raise = resid(&apply_ladder(params, n, &psi, true), &up.scale(m_plus(params, n)));
    let lower = resid(&apply_ladder(params, n, &psi, false), &down.scale(m_minus(params, n)));

    let a_rhs = psi.zip_with(&down, |x, p, q| {
        -nf / x * p + 2.0 / x * (nf * (nf + s + 0.5)).sqrt() * q
    });
    let a_dag_rhs = psi.zip_with(&up, |x, p, q| {
        -(nf + 1.0) / x * p + 2.0 / x * ((nf + 1.0) * (nf + s + 1.5)).sqrt() * q
    });
    Ok(LadderResiduals {
        raise,
        lower,
        a_op: resid(&apply_a(params, n, &psi, false), &a_rhs),
        a_dagger: resid(&apply_a(params, n, &psi, true), &a_dag_rhs),
    })
}
