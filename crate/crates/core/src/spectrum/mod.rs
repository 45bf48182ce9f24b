//! Pseudoharmonic eigenproblem on the positive half-line.
//!
//! Closed forms (energies, normalized eigenfunctions, null states) sit next to
//! grid realizations of the first-order factorization operators, so every
//! differential identity of the construction can be checked numerically.
//!
//! On a grid the operators are represented without their constant phase:
//! `a_n = (-i/√2)(d/dx - f_n)` and `a_n† = (-i/√2)(d/dx + f_n)`, so the
//! products become `a_n† a_n = -(d/dx + f_n)(d/dx - f_n)/2` and
//! `a_n a_n† = -(d/dx - f_n)(d/dx + f_n)/2`.

mod chain;
mod params;

pub use chain::{ground_branches, FactorizationChain, GroundBranch};
pub use params::ModelParams;

use crate::error::{domain, Error, Result};
use crate::grid::{GridFunction, GridSpec, BOUNDARY_ROWS};
use crate::quadrature::{integrate_adaptive, AdaptiveSpec, DomainTransform};
use crate::specfun::{laguerre_assoc, ln_gamma_unchecked};

/// Rows dropped from each end when an operator composes two stencils.
pub const COMPOSED_MARGIN: usize = 2 * BOUNDARY_ROWS;

/// Allowed deviation of a grid norm from 1 before a grid is declared too coarse.
const GRID_NORM_TOL: f64 = 1e-3;

pub fn potential(params: &ModelParams, x: f64) -> Result<f64> {
    if !(x > 0.0) {
        return domain(format!("potential is defined for x > 0, got {x}"));
    }
    Ok(0.5 * x * x + 0.5 * params.g() / (x * x))
}

/// `E_n = 2n + s + 3/2`.
pub fn energy(params: &ModelParams, n: usize) -> f64 {
    2.0 * n as f64 + params.s() + 1.5
}

/// `N_n = √(2 Γ(n+1) / Γ(n+s+3/2))`, computed in log space.
pub fn normalization(params: &ModelParams, n: usize) -> f64 {
    let nf = n as f64;
    (0.5 * (std::f64::consts::LN_2 + ln_gamma_unchecked(nf + 1.0)
        - ln_gamma_unchecked(nf + params.lowest_weight2())))
    .exp()
}

/// `ψ_n(x) = N_n x^{s+1} e^{-x²/2} L_n^{s+1/2}(x²)`.
pub fn eigenfunction_at(params: &ModelParams, n: usize, x: f64) -> f64 {
    let envelope = ((params.s() + 1.0) * x.ln() - 0.5 * x * x).exp();
    normalization(params, n) * envelope * laguerre_assoc(n, params.alpha(), x * x)
}

pub fn eigenfunction(params: &ModelParams, n: usize, grid: &GridSpec) -> GridFunction {
    GridFunction::sample(grid, |x| eigenfunction_at(params, n, x))
}

/// Unnormalized `ξ_n(x) = x^{s+n+1} e^{-x²/2}`, the state annihilated by `a_n`.
pub fn null_state(params: &ModelParams, n: usize, grid: &GridSpec) -> GridFunction {
    let power = params.s() + n as f64 + 1.0;
    GridFunction::sample(grid, |x| (power * x.ln() - 0.5 * x * x).exp())
}

/// `∫₀^∞ ξ_n² dx = Γ(s+n+3/2) / 2`.
fn null_state_norm(params: &ModelParams, n: usize) -> f64 {
    (0.5 * (ln_gamma_unchecked(params.lowest_weight2() + n as f64) - std::f64::consts::LN_2)).exp()
}

/// `√2 i a_n φ = (d/dx - f_n) φ` on the grid.
pub fn apply_annihilator(chain: &FactorizationChain, n: usize, phi: &GridFunction) -> GridFunction {
    phi.derivative()
        .zip_with(phi, |x, d, v| d - chain.superpotential(n, x) * v)
}

/// `√2 i a_n† φ = (d/dx + f_n) φ` on the grid.
pub fn apply_creator(chain: &FactorizationChain, n: usize, phi: &GridFunction) -> GridFunction {
    phi.derivative()
        .zip_with(phi, |x, d, v| d + chain.superpotential(n, x) * v)
}

/// Sup-norm of `a_n ξ_n` over the interior, relative to `sup |ξ_n|`.
pub fn null_state_residual(params: &ModelParams, n: usize, grid: &GridSpec) -> f64 {
    let chain = FactorizationChain::build(params, n);
    let xi = null_state(params, n, grid);
    let r = apply_annihilator(&chain, n, &xi).scale(std::f64::consts::FRAC_1_SQRT_2);
    r.sup_interior(BOUNDARY_ROWS) / xi.max_abs()
}

fn check_grid_norm(f: &GridFunction, what: &str) -> Result<()> {
    let norm2 = f.norm().powi(2);
    let residual = (norm2 - 1.0).abs();
    if residual > GRID_NORM_TOL || !residual.is_finite() {
        return Err(Error::Accuracy {
            what: format!("{what}: grid norm² = {norm2}"),
            residual,
            tolerance: GRID_NORM_TOL,
        });
    }
    Ok(())
}

/// Builds `ψ_n = c_n a_0† a_1† ... a_{n-1}† ξ̂_n` on the grid from the normalized null state.
///
/// The constant phase `(-i)^n` is dropped, leaving a real function that is
/// positive near the origin, like the closed form.
pub fn factorization_build(params: &ModelParams, n: usize, grid: &GridSpec) -> Result<GridFunction> {
    let chain = FactorizationChain::build(params, n);
    let mut phi = null_state(params, n, grid).scale(null_state_norm(params, n).recip());
    for k in (0..n).rev() {
        phi = apply_creator(&chain, k, &phi).scale(std::f64::consts::FRAC_1_SQRT_2);
    }
    let psi = phi.scale(chain.normalization(n));
    check_grid_norm(&psi, &format!("factorization chain for n = {n}"))?;
    Ok(psi)
}

/// Relative `L²` distance between two grid functions over the interior rows.
pub fn relative_l2(a: &GridFunction, b: &GridFunction, margin: usize) -> f64 {
    let diff = a.zip_with(b, |_, u, v| u - v);
    let range = a.interior(margin);
    diff.norm_on(range.clone()) / b.norm_on(range)
}

/// `sup |-ψ''/2 + Vψ - E_n ψ| / sup |ψ|` over the interior.
pub fn schrodinger_residual(params: &ModelParams, n: usize, grid: &GridSpec) -> f64 {
    let psi = eigenfunction(params, n, grid);
    let e = energy(params, n);
    let g = params.g();
    let r = psi
        .second_derivative()
        .zip_with(&psi, |x, d2, v| -0.5 * d2 + (0.5 * x * x + 0.5 * g / (x * x) - e) * v);
    r.sup_interior(BOUNDARY_ROWS) / psi.max_abs()
}

/// Residuals of the second-order forms of `a_n† a_n` and `a_n a_n†`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProductResiduals {
    /// `a_n† a_n` composed on the grid vs `[p² + b²x² + b(2c+1) + c(c-1)/x²]/2`.
    pub dagger_first: f64,
    /// `a_n a_n†` composed on the grid vs `[p² + b²x² + b(2c-1) + c(c+1)/x²]/2`.
    pub dagger_last: f64,
    /// `[a_n, a_n†]` composed on the grid vs `-b + c/x²`.
    pub commutator: f64,
}

/// Applies the composed first-order operators to `probe` and compares them
/// with the closed-form second-order operators. Residuals are sup-norms over
/// the interior relative to `sup |probe|`.
pub fn operator_product_check(params: &ModelParams, n: usize, probe: &GridFunction) -> ProductResiduals {
    let chain = FactorizationChain::build(params, n);
    let (b, c) = (chain.b[n], chain.c[n]);
    let d2 = probe.second_derivative();

    let dag_first = apply_creator(&chain, n, &apply_annihilator(&chain, n, probe)).scale(-0.5);
    let dag_last = apply_annihilator(&chain, n, &apply_creator(&chain, n, probe)).scale(-0.5);

    let rhs_first = d2.zip_with(probe, |x, d2, v| {
        0.5 * (-d2 + (b * b * x * x + b * (2.0 * c + 1.0) + c * (c - 1.0) / (x * x)) * v)
    });
    let rhs_last = d2.zip_with(probe, |x, d2, v| {
        0.5 * (-d2 + (b * b * x * x + b * (2.0 * c - 1.0) + c * (c + 1.0) / (x * x)) * v)
    });
    let commutator = dag_last.zip_with(&dag_first, |_, l, f| l - f);
    let rhs_comm = probe.map(|x, v| (-b + c / (x * x)) * v);

    let scale = probe.max_abs();
    let sup_diff = |a: &GridFunction, b: &GridFunction| a.zip_with(b, |_, u, v| u - v).sup_interior(COMPOSED_MARGIN) / scale;
    ProductResiduals {
        dagger_first: sup_diff(&dag_first, &rhs_first),
        dagger_last: sup_diff(&dag_last, &rhs_last),
        commutator: sup_diff(&commutator, &rhs_comm),
    }
}

/// `⟨ψ_m, ψ_n⟩` by Gauss-Legendre quadrature over `[0, L]`, with `L` far past
/// both classical turning points.
pub fn overlap(params: &ModelParams, m: usize, n: usize) -> Result<f64> {
    let reach = (2.0 * energy(params, m.max(n))).sqrt() + 8.0;
    // Unit-norm factors: an absolute scale of 1 lets vanishing overlaps converge.
    let spec = AdaptiveSpec {
        start: 64,
        max_nodes: 2048,
        rel_tol: 1e-14,
        scale: 1.0,
    };
    let (value, _) = integrate_adaptive(DomainTransform::Interval { a: 0.0, b: reach }, spec, |x| {
        Ok(eigenfunction_at(params, m, x) * eigenfunction_at(params, n, x))
    })?;
    Ok(value)
}
