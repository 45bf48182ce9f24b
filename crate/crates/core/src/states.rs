//! Barut-Girardello and Gilmore-Perelomov coherent states as truncated Fock vectors.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::algebra::{self, TruncationSpec};
use crate::error::{domain, Error, Result};
use crate::specfun::{hyp0f1, ln_gamma};
use crate::spectrum::ModelParams;

/// Mass allowed beyond the last retained coefficient.
pub const TAIL_THRESHOLD: f64 = 1e-12;
/// Tail mass used when states feed fourth-order expectation values. Cross terms are
/// linear in the dropped amplitudes, so the mass bound has to be roughly squared.
pub const METRICS_TAIL_THRESHOLD: f64 = 1e-24;
/// Largest `|z|` accepted for Barut-Girardello states.
pub const BG_MODULUS_CAP: f64 = 40.0;
/// Edge mass allowed in the matrix-exponential oracle.
pub const LEAKAGE_THRESHOLD: f64 = 1e-8;
const MAX_DIM: usize = 1 << 16;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Family {
    BarutGirardello,
    GilmorePerelomov,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StateLabel {
    BarutGirardello,
    GilmorePerelomov,
    Number(usize),
    Custom,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StateConfig {
    pub tail_threshold: f64,
    pub bg_modulus_cap: f64,
}

impl StateConfig {
    pub fn for_metrics() -> Self {
        Self {
            tail_threshold: METRICS_TAIL_THRESHOLD,
            ..Self::default()
        }
    }
}

impl Default for StateConfig {
    fn default() -> Self {
        Self {
            tail_threshold: TAIL_THRESHOLD,
            bg_modulus_cap: BG_MODULUS_CAP,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FockVector {
    coefficients: Vec<Complex64>,
    params: ModelParams,
    label: StateLabel,
    z: Complex64,
    tail_bound: f64,
}

impl FockVector {
    /// Wraps explicit coefficients, normalized to unit length. The tail is taken as empty.
    pub fn from_coefficients(params: &ModelParams, coefficients: Vec<Complex64>) -> Result<Self> {
        let norm = coefficients.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
        if coefficients.is_empty() || !(norm > 0.0) || !norm.is_finite() {
            return domain("coefficient vector must be non-empty with finite, non-zero norm");
        }
        Ok(Self {
            coefficients: coefficients.into_iter().map(|c| c / norm).collect(),
            params: *params,
            label: StateLabel::Custom,
            z: Complex64::new(0.0, 0.0),
            tail_bound: 0.0,
        })
    }

    pub fn coefficients(&self) -> &[Complex64] {
        &self.coefficients
    }

    pub fn params(&self) -> &ModelParams {
        &self.params
    }

    pub fn label(&self) -> StateLabel {
        self.label
    }

    pub fn z(&self) -> Complex64 {
        self.z
    }

    pub fn tail_bound(&self) -> f64 {
        self.tail_bound
    }

    pub fn dim(&self) -> usize {
        self.coefficients.len()
    }

    pub fn norm_sqr(&self) -> f64 {
        self.coefficients.iter().map(|c| c.norm_sqr()).sum()
    }

    /// `max_n |a_n - b_n|`, padding the shorter vector with zeros.
    pub fn max_abs_diff(&self, other: &FockVector) -> f64 {
        let d = self.dim().max(other.dim());
        (0..d)
            .map(|n| {
                let a = self.coefficients.get(n).copied().unwrap_or_default();
                let b = other.coefficients.get(n).copied().unwrap_or_default();
                (a - b).norm()
            })
            .fold(0.0, f64::max)
    }
}

/// Displacement parameter `ξ` and the disk label `z = (ξ/|ξ|) tanh|ξ|`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GPParameter {
    pub xi: Complex64,
    pub z: Complex64,
}

impl GPParameter {
    pub fn from_xi(xi: Complex64) -> Self {
        let r = xi.norm();
        let z = if r == 0.0 { Complex64::new(0.0, 0.0) } else { xi * (r.tanh() / r) };
        Self { xi, z }
    }

    pub fn from_z(z: Complex64) -> Result<Self> {
        let r = z.norm();
        if r >= 1.0 {
            return domain(format!("GP label must satisfy |z| < 1, got |z| = {r}"));
        }
        let xi = if r == 0.0 { z } else { z * (r.atanh() / r) };
        Ok(Self { xi, z })
    }
}

/// `zⁿ` scaled to modulus `exp(ln_mod)`. Real `z` gives exactly real coefficients.
fn phased(z: Complex64, n: usize, ln_mod: f64) -> Complex64 {
    let m = ln_mod.exp();
    if z.im == 0.0 {
        if z.re < 0.0 && n % 2 == 1 {
            Complex64::new(-m, 0.0)
        } else {
            Complex64::new(m, 0.0)
        }
    } else {
        Complex64::from_polar(m, n as f64 * z.arg())
    }
}

struct Profile {
    /// `ln|c_n| = ln_norm + ln_weight(n) + n ln|z|`
    ln_norm: f64,
    ln_weight: Box<dyn Fn(usize) -> f64>,
    /// `|c_{n+1}/c_n|`, non-increasing in `n`.
    ratio: Box<dyn Fn(usize) -> f64>,
}

fn bg_profile(params: &ModelParams, z: Complex64, cfg: &StateConfig) -> Result<Profile> {
    let r = z.norm();
    if !r.is_finite() || r > cfg.bg_modulus_cap {
        return domain(format!("BG label |z| = {r} exceeds the cap {}", cfg.bg_modulus_cap));
    }
    let b = params.lowest_weight2();
    let ln_norm = -0.5 * hyp0f1(b, r * r)?.ln();
    let lg_b = ln_gamma(b)?;
    Ok(Profile {
        ln_norm,
        ln_weight: Box::new(move |n| {
            let nf = n as f64;
            0.5 * (lg_b - ln_gamma(nf + 1.0).unwrap() - ln_gamma(nf + b).unwrap())
        }),
        ratio: Box::new(move |n| {
            let nf = n as f64;
            r / ((nf + 1.0) * (nf + b)).sqrt()
        }),
    })
}

fn gp_profile(params: &ModelParams, z: Complex64) -> Result<Profile> {
    let r = z.norm();
    if !(r < 1.0) {
        return domain(format!("GP label must satisfy |z| < 1, got |z| = {r}"));
    }
    let b = params.lowest_weight2();
    let ln_norm = (0.5 * params.s() + 0.75) * (-r * r).ln_1p();
    let lg_b = ln_gamma(b)?;
    Ok(Profile {
        ln_norm,
        ln_weight: Box::new(move |n| {
            let nf = n as f64;
            0.5 * (ln_gamma(nf + b).unwrap() - ln_gamma(nf + 1.0).unwrap() - lg_b)
        }),
        ratio: Box::new(move |n| {
            let nf = n as f64;
            r * ((nf + b) / (nf + 1.0)).sqrt()
        }),
    })
}

impl Profile {
    fn ln_abs(&self, n: usize, ln_r: f64) -> f64 {
        if n == 0 {
            self.ln_norm
        } else {
            self.ln_norm + (self.ln_weight)(n) + n as f64 * ln_r
        }
    }

    /// Geometric bound on `Σ_{n≥D} |c_n|²`.
    fn tail(&self, dim: usize, ln_r: f64) -> f64 {
        if ln_r == f64::NEG_INFINITY {
            return 0.0;
        }
        let q = (self.ratio)(dim - 1).powi(2);
        if q >= 1.0 {
            return f64::INFINITY;
        }
        (2.0 * self.ln_abs(dim - 1, ln_r)).exp() * q / (1.0 - q)
    }

    fn required_dim(&self, ln_r: f64, threshold: f64) -> Result<usize> {
        let mut d = 4;
        while self.tail(d, ln_r) > threshold {
            d += 1;
            if d > MAX_DIM {
                return Err(Error::Truncation {
                    dim: MAX_DIM,
                    tail: self.tail(MAX_DIM, ln_r),
                    needed: MAX_DIM + 1,
                });
            }
        }
        Ok(d)
    }
}

fn profile(family: Family, params: &ModelParams, z: Complex64, cfg: &StateConfig) -> Result<Profile> {
    match family {
        Family::BarutGirardello => bg_profile(params, z, cfg),
        Family::GilmorePerelomov => gp_profile(params, z),
    }
}

/// Smallest dimension whose tail bound is below the configured threshold.
pub fn required_dim(family: Family, params: &ModelParams, z: Complex64, cfg: &StateConfig) -> Result<usize> {
    profile(family, params, z, cfg)?.required_dim(z.norm().ln(), cfg.tail_threshold)
}

/// Truncation sized by [`required_dim`] with the default interior margin.
pub fn auto_truncation(family: Family, params: &ModelParams, z: Complex64, cfg: &StateConfig) -> Result<TruncationSpec> {
    TruncationSpec::with_dim(required_dim(family, params, z, cfg)?)
}

fn build(
    family: Family,
    params: &ModelParams,
    z: Complex64,
    trunc: &TruncationSpec,
    cfg: &StateConfig,
) -> Result<FockVector> {
    let prof = profile(family, params, z, cfg)?;
    let ln_r = z.norm().ln();
    let tail = prof.tail(trunc.dim, ln_r);
    if tail > cfg.tail_threshold {
        return Err(Error::Truncation {
            dim: trunc.dim,
            tail,
            needed: prof.required_dim(ln_r, cfg.tail_threshold)?,
        });
    }
    let mut coefficients = vec![Complex64::new(0.0, 0.0); trunc.dim];
    coefficients[0] = Complex64::new(prof.ln_norm.exp(), 0.0);
    if ln_r > f64::NEG_INFINITY {
        for (n, c) in coefficients.iter_mut().enumerate().skip(1) {
            *c = phased(z, n, prof.ln_abs(n, ln_r));
        }
    }
    let label = match family {
        Family::BarutGirardello => StateLabel::BarutGirardello,
        Family::GilmorePerelomov => StateLabel::GilmorePerelomov,
    };
    Ok(FockVector {
        coefficients,
        params: *params,
        label,
        z,
        tail_bound: tail,
    })
}

/// Right eigenstate of `M₋` with eigenvalue `z`.
pub fn bg_state(params: &ModelParams, z: Complex64, trunc: &TruncationSpec) -> Result<FockVector> {
    build(Family::BarutGirardello, params, z, trunc, &StateConfig::default())
}

pub fn bg_state_with(params: &ModelParams, z: Complex64, trunc: &TruncationSpec, cfg: &StateConfig) -> Result<FockVector> {
    build(Family::BarutGirardello, params, z, trunc, cfg)
}

/// Displaced lowest-weight state, `|z| < 1`.
pub fn gp_state(params: &ModelParams, z: Complex64, trunc: &TruncationSpec) -> Result<FockVector> {
    build(Family::GilmorePerelomov, params, z, trunc, &StateConfig::default())
}

pub fn gp_state_with(params: &ModelParams, z: Complex64, trunc: &TruncationSpec, cfg: &StateConfig) -> Result<FockVector> {
    build(Family::GilmorePerelomov, params, z, trunc, cfg)
}

pub fn coherent_state(family: Family, params: &ModelParams, z: Complex64, trunc: &TruncationSpec) -> Result<FockVector> {
    build(family, params, z, trunc, &StateConfig::default())
}

pub fn coherent_state_with(
    family: Family,
    params: &ModelParams,
    z: Complex64,
    trunc: &TruncationSpec,
    cfg: &StateConfig,
) -> Result<FockVector> {
    build(family, params, z, trunc, cfg)
}

pub fn number_state(params: &ModelParams, n: usize, trunc: &TruncationSpec) -> Result<FockVector> {
    if n >= trunc.dim {
        return domain(format!("level {n} outside truncation dimension {}", trunc.dim));
    }
    let mut coefficients = vec![Complex64::new(0.0, 0.0); trunc.dim];
    coefficients[n] = Complex64::new(1.0, 0.0);
    Ok(FockVector {
        coefficients,
        params: *params,
        label: StateLabel::Number(n),
        z: Complex64::new(0.0, 0.0),
        tail_bound: 0.0,
    })
}

/// Solves `m₋(n+1) c_{n+1} = z c_n` from `c₀ = 1` and normalizes by the retained sum.
pub fn bg_recursion_solve(params: &ModelParams, z: Complex64, trunc: &TruncationSpec) -> Result<FockVector> {
    let cfg = StateConfig::default();
    let prof = bg_profile(params, z, &cfg)?;
    let ln_r = z.norm().ln();
    let tail = prof.tail(trunc.dim, ln_r);
    if tail > cfg.tail_threshold {
        return Err(Error::Truncation {
            dim: trunc.dim,
            tail,
            needed: prof.required_dim(ln_r, cfg.tail_threshold)?,
        });
    }
    // Unnormalized terms can overflow for large |z|, so rescale as they grow.
    let mut coefficients = Vec::with_capacity(trunc.dim);
    let mut c = Complex64::new(1.0, 0.0);
    coefficients.push(c);
    for n in 0..trunc.dim - 1 {
        c = c * z / algebra::m_minus(params, n + 1);
        coefficients.push(c);
        if c.norm() > 1e150 {
            let k = 1.0 / c.norm();
            coefficients.iter_mut().for_each(|v| *v *= k);
            c *= k;
        }
    }
    let norm = coefficients.iter().map(|v| v.norm_sqr()).sum::<f64>().sqrt();
    coefficients.iter_mut().for_each(|v| *v /= norm);
    Ok(FockVector {
        coefficients,
        params: *params,
        label: StateLabel::BarutGirardello,
        z,
        tail_bound: tail,
    })
}

/// `exp(ξM₊ - ξ*M₋)|0⟩` by dense matrix exponential of the truncated generator.
pub fn gp_displacement_oracle(params: &ModelParams, xi: Complex64, trunc: &TruncationSpec) -> Result<FockVector> {
    let d = trunc.dim;
    let ops = algebra::ladder_matrices(params, trunc);
    let mut gen = DMatrix::<Complex64>::zeros(d, d);
    for n in 0..d - 1 {
        gen[(n + 1, n)] = xi * ops.raise.lower[n];
        gen[(n, n + 1)] = -xi.conj() * ops.lower.upper[n];
    }
    let column = gen.exp().column(0).iter().copied().collect::<Vec<_>>();
    let leakage: f64 = column[trunc.interior()..].iter().map(|c| c.norm_sqr()).sum();
    if leakage > LEAKAGE_THRESHOLD {
        let needed = (2 * d).max(d + 16);
        return Err(Error::Truncation { dim: d, tail: leakage, needed });
    }
    Ok(FockVector {
        coefficients: column,
        params: *params,
        label: StateLabel::GilmorePerelomov,
        z: GPParameter::from_xi(xi).z,
        tail_bound: leakage,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn s1() -> ModelParams {
        ModelParams::from_s(1.0).unwrap()
    }

    #[test]
    fn vacuum_limits() {
        let t = TruncationSpec::with_dim(8).unwrap();
        for state in [bg_state(&s1(), c(0.0, 0.0), &t).unwrap(), gp_state(&s1(), c(0.0, 0.0), &t).unwrap()] {
            assert_eq!(state.coefficients()[0], c(1.0, 0.0));
            assert!(state.coefficients()[1..].iter().all(|v| *v == c(0.0, 0.0)));
        }
    }

    #[test]
    fn bg_normalization_constant() {
        let p = ModelParams::from_s(0.0).unwrap();
        let t = auto_truncation(Family::BarutGirardello, &p, c(1.0, 0.0), &StateConfig::default()).unwrap();
        let v = bg_state(&p, c(1.0, 0.0), &t).unwrap();
        let expected = (2.0_f64.sinh() / 2.0).powf(-0.5);
        assert!((v.coefficients()[0].re - expected).abs() < 1e-12);
        assert!((expected - 0.742_590_822_4).abs() < 1e-9);
    }

    #[test]
    fn gp_normalization_constant() {
        let t = auto_truncation(Family::GilmorePerelomov, &s1(), c(0.5, 0.0), &StateConfig::default()).unwrap();
        let v = gp_state(&s1(), c(0.5, 0.0), &t).unwrap();
        assert!((v.coefficients()[0].re - 0.75_f64.powf(1.25)).abs() < 1e-14);
        assert!((0.75_f64.powf(1.25) - 0.697_953_644_3).abs() < 1e-9);
        assert!((v.norm_sqr() - 1.0).abs() < 1e-10);
    }

    #[test]
    fn gp_rejects_boundary() {
        let t = TruncationSpec::with_dim(16).unwrap();
        for z in [c(1.0, 0.0), c(0.0, -1.0), c(0.8, 0.8)] {
            assert!(matches!(gp_state(&s1(), z, &t), Err(Error::Domain(_))));
        }
    }

    #[test]
    fn bg_cap() {
        let t = TruncationSpec::with_dim(16).unwrap();
        assert!(matches!(bg_state(&s1(), c(BG_MODULUS_CAP + 1.0, 0.0), &t), Err(Error::Domain(_))));
    }

    #[test]
    fn truncation_error_names_dimension() {
        let t = TruncationSpec::with_dim(8).unwrap();
        match bg_state(&s1(), c(3.0, 0.0), &t) {
            Err(Error::Truncation { dim, needed, .. }) => {
                assert_eq!(dim, 8);
                let cfg = StateConfig::default();
                assert_eq!(needed, required_dim(Family::BarutGirardello, &s1(), c(3.0, 0.0), &cfg).unwrap());
                let ok = TruncationSpec::with_dim(needed).unwrap();
                assert!(bg_state(&s1(), c(3.0, 0.0), &ok).is_ok());
            }
            other => panic!("expected truncation error, got {other:?}"),
        }
    }

    #[test]
    fn norms_within_tail() {
        let cfg = StateConfig::default();
        for (fam, zs) in [
            (Family::BarutGirardello, vec![0.3, 1.0, 3.0, 10.0]),
            (Family::GilmorePerelomov, vec![0.1, 0.5, 0.9]),
        ] {
            for r in zs {
                let z = Complex64::from_polar(r, 0.7);
                let t = auto_truncation(fam, &s1(), z, &cfg).unwrap();
                let v = coherent_state(fam, &s1(), z, &t).unwrap();
                assert!(v.tail_bound() <= TAIL_THRESHOLD);
                assert!((v.norm_sqr() - 1.0).abs() < 1e-10, "{fam:?} {r}");
            }
        }
    }

    #[test]
    fn bg_eigen_residual() {
        let p = s1();
        let t = TruncationSpec::with_dim(128).unwrap();
        let ops = algebra::ladder_matrices(&p, &t);
        for r in [0.5, 1.5, 3.0] {
            for k in 0..6 {
                let z = Complex64::from_polar(r, k as f64);
                let v = bg_state(&p, z, &t).unwrap();
                let re: Vec<f64> = v.coefficients().iter().map(|c| c.re).collect();
                let im: Vec<f64> = v.coefficients().iter().map(|c| c.im).collect();
                let (lr, li) = (ops.lower.apply(&re), ops.lower.apply(&im));
                let res: f64 = (0..128)
                    .map(|n| (c(lr[n], li[n]) - z * v.coefficients()[n]).norm_sqr())
                    .sum::<f64>()
                    .sqrt();
                assert!(res <= 1e-8, "z={z} res={res}");
            }
        }
    }

    #[test]
    fn recursion_ratio() {
        let t = TruncationSpec::with_dim(40).unwrap();
        let v = bg_recursion_solve(&s1(), c(1.0, 0.0), &t).unwrap();
        let ratio = v.coefficients()[1].re / v.coefficients()[0].re;
        assert!((ratio - 1.0 / 2.5_f64.sqrt()).abs() < 1e-14);
        assert!((ratio - 0.632_455_532_0).abs() < 1e-10);
        let w = bg_recursion_solve(&s1(), c(0.0, 0.0), &t).unwrap();
        assert!(w.coefficients()[1..].iter().all(|v| *v == c(0.0, 0.0)));
    }

    #[test]
    fn xi_to_z() {
        let g = GPParameter::from_xi(c(0.6, 0.0));
        assert!((g.z.re - 0.537_049_567_0).abs() < 1e-10);
        let g = GPParameter::from_xi(c(3.0, 4.0));
        assert!((g.z.norm() - 5.0_f64.tanh()).abs() < 1e-15);
        assert!((g.z.arg() - g.xi.arg()).abs() < 1e-15);
        let back = GPParameter::from_z(g.z).unwrap();
        assert!((back.xi - g.xi).norm() < 1e-9);
    }

    #[test]
    fn displacement_small() {
        let t = TruncationSpec::with_dim(48).unwrap();
        let xi = c(0.3, -0.2);
        let oracle = gp_displacement_oracle(&s1(), xi, &t).unwrap();
        let series = gp_state(&s1(), GPParameter::from_xi(xi).z, &t).unwrap();
        assert!(oracle.max_abs_diff(&series) < 1e-10);
        assert!((oracle.norm_sqr() - 1.0).abs() < 1e-10);
        let zero = gp_displacement_oracle(&s1(), c(0.0, 0.0), &t).unwrap();
        assert_eq!(zero.coefficients()[0], c(1.0, 0.0));
    }

    #[test]
    fn displacement_leakage_detected() {
        let t = TruncationSpec::with_dim(8).unwrap();
        assert!(matches!(
            gp_displacement_oracle(&s1(), c(1.2, 0.0), &t),
            Err(Error::Truncation { .. })
        ));
    }

    #[test]
    fn continuity_at_origin() {
        let t = TruncationSpec::with_dim(8).unwrap();
        let eps = 1e-6;
        for fam in [Family::BarutGirardello, Family::GilmorePerelomov] {
            let v = coherent_state(fam, &s1(), c(eps, 0.0), &t).unwrap();
            let vac = number_state(&s1(), 0, &t).unwrap();
            assert!(v.max_abs_diff(&vac) <= 2.0 * eps);
        }
    }
}
