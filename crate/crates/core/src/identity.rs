//! Weight functions of the coherent-state resolutions of identity, checked in moment form.
//!
//! With `x = |z|²` the radial problem reduces to
//! `∫ w̃(x) xⁿ dx = Γ(n+1) Γ(n+s+3/2)/Γ(s+3/2)` (BG, `x > 0`) and
//! `∫ w̃(x) xⁿ dx = Γ(n+1) Γ(s+3/2)/Γ(n+s+3/2)` (GP, `0 < x < 1`),
//! where `w̃ = π w N²` absorbs the state normalization.

use std::f64::consts::PI;

use rayon::prelude::*;

use crate::error::{domain, Error, Result};
use crate::quadrature::{integrate_adaptive, AdaptiveSpec, DomainTransform, QuadratureScheme};
use crate::specfun::{gamma, hyp0f1, hyp2f1, ln_gamma, meijer_g, MeijerGSpec};
use crate::spectrum::ModelParams;
use crate::states::Family;

pub const MAX_MOMENT: usize = 12;
pub const BG_TOLERANCE: f64 = 1e-4;
pub const GP_TOLERANCE: f64 = 1e-8;
const START_NODES: usize = 32;
const MAX_NODES: usize = 4096;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WeightFunction {
    pub family: Family,
    pub params: ModelParams,
}

impl WeightFunction {
    pub fn new(family: Family, params: ModelParams) -> Result<Self> {
        if family == Family::GilmorePerelomov && params.s() <= -0.5 {
            return domain("GP weight needs s > -1/2 (Γ(s+1/2) has a pole)");
        }
        Ok(Self { family, params })
    }

    pub fn weight(&self, x: f64) -> Result<f64> {
        match self.family {
            Family::BarutGirardello => weight_bg(&self.params, x),
            Family::GilmorePerelomov => weight_gp(&self.params, x),
        }
    }

    /// `w̃ = π w N²`.
    pub fn reduced(&self, x: f64) -> Result<f64> {
        match self.family {
            Family::BarutGirardello => reduced_weight_bg(&self.params, x),
            Family::GilmorePerelomov => reduced_weight_gp(&self.params, x),
        }
    }

    pub fn moment_closed_form(&self, n: usize) -> Result<f64> {
        let nf = n as f64;
        let b = self.params.lowest_weight2();
        let ln = match self.family {
            Family::BarutGirardello => ln_gamma(nf + 1.0)? + ln_gamma(nf + b)? - ln_gamma(b)?,
            Family::GilmorePerelomov => ln_gamma(nf + 1.0)? + ln_gamma(b)? - ln_gamma(nf + b)?,
        };
        Ok(ln.exp())
    }

    fn transform(&self, n: usize) -> DomainTransform {
        match self.family {
            // x^n G(x) peaks near x ≈ (n + s + 1)².
            Family::BarutGirardello => DomainTransform::HalfLine {
                scale: (n as f64 + self.params.s() + 1.5).powi(2),
            },
            Family::GilmorePerelomov => DomainTransform::UnitSquareRoot,
        }
    }
}

fn check_positive(x: f64) -> Result<()> {
    if !(x > 0.0 && x.is_finite()) {
        return domain(format!("BG weight needs x > 0, got {x}"));
    }
    Ok(())
}

fn check_unit(x: f64) -> Result<()> {
    if !(x > 0.0 && x < 1.0) {
        return domain(format!("GP weight needs 0 < x < 1, got {x}"));
    }
    Ok(())
}

/// `G^{4,0}_{2,4}(x | 0, s+1/2 ; 0, 0, s+1/2, s+1/2) / Γ(s+3/2)`.
pub fn reduced_weight_bg(params: &ModelParams, x: f64) -> Result<f64> {
    check_positive(x)?;
    Ok(meijer_g(&MeijerGSpec::bg_weight(params.s()), x)? / gamma(params.lowest_weight2())?)
}

/// `₀F₁(s+3/2; x) · G(x) / (π Γ(s+3/2))`.
pub fn weight_bg(params: &ModelParams, x: f64) -> Result<f64> {
    let g = reduced_weight_bg(params, x)?;
    Ok(hyp0f1(params.lowest_weight2(), x)? * g / PI)
}

/// `Γ(s+3/2)/(π Γ(s+1/2)) · (1-x)^{-2} · ₂F₁(0, 0; s+1/2; 1 - 1/x)`.
pub fn weight_gp(params: &ModelParams, x: f64) -> Result<f64> {
    check_unit(x)?;
    let s = params.s();
    if s <= -0.5 {
        return domain("GP weight needs s > -1/2");
    }
    let f = hyp2f1(0.0, 0.0, s + 0.5, 1.0 - 1.0 / x)?;
    Ok(gamma(s + 1.5)? / (PI * gamma(s + 0.5)?) * f / (1.0 - x).powi(2))
}

/// `π w_GP (1-x)^{s+3/2} = Γ(s+3/2)/Γ(s+1/2) · (1-x)^{s-1/2}`.
pub fn reduced_weight_gp(params: &ModelParams, x: f64) -> Result<f64> {
    let w = weight_gp(params, x)?;
    Ok(PI * w * (1.0 - x).powf(params.s() + 1.5))
}

#[derive(Debug, Clone, PartialEq)]
pub struct MomentRow {
    pub n: usize,
    pub quadrature: f64,
    pub closed_form: f64,
    pub rel_err: f64,
    pub nodes: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct MomentReport {
    pub family: Family,
    pub rows: Vec<MomentRow>,
    pub tolerance: f64,
}

impl MomentReport {
    pub fn max_rel_err(&self) -> f64 {
        self.rows.iter().map(|r| r.rel_err).fold(0.0, f64::max)
    }

    pub fn passed(&self) -> bool {
        self.max_rel_err() <= self.tolerance
    }
}

pub fn default_tolerance(family: Family) -> f64 {
    match family {
        Family::BarutGirardello => BG_TOLERANCE,
        Family::GilmorePerelomov => GP_TOLERANCE,
    }
}

fn moment(weight: &WeightFunction, n: usize, rel_tol: f64) -> Result<(f64, QuadratureScheme)> {
    let k = n as i32;
    let spec = AdaptiveSpec {
        start: START_NODES,
        max_nodes: MAX_NODES,
        rel_tol,
        scale: 0.0,
    };
    integrate_adaptive(weight.transform(n), spec, |x| {
        // Gauss nodes never hit the endpoints, but the half-line map can reach x = ∞ in f64.
        if !x.is_finite() || x <= 0.0 || (x >= 1.0 && weight.family == Family::GilmorePerelomov) {
            return Ok(0.0);
        }
        Ok(weight.reduced(x)? * x.powi(k))
    })
}

/// Compares quadrature of `w̃ xⁿ` with the closed-form moments for `n = 0..=n_max`.
/// Each moment is integrated independently.
pub fn verify_identity(family: Family, params: &ModelParams, n_max: usize, tolerance: f64) -> Result<MomentReport> {
    if n_max > MAX_MOMENT {
        return domain(format!("n_max = {n_max} exceeds {MAX_MOMENT}"));
    }
    let weight = WeightFunction::new(family, *params)?;
    let rel_tol = 0.1 * tolerance;
    let results: Vec<(usize, Result<(f64, QuadratureScheme)>)> = (0..=n_max)
        .into_par_iter()
        .map(|n| (n, moment(&weight, n, rel_tol)))
        .collect();

    let mut rows = Vec::with_capacity(results.len());
    let mut failures = Vec::new();
    for (n, res) in results {
        match res {
            Ok((quadrature, scheme)) => {
                let closed_form = weight.moment_closed_form(n)?;
                rows.push(MomentRow {
                    n,
                    quadrature,
                    closed_form,
                    rel_err: (quadrature - closed_form).abs() / closed_form,
                    nodes: scheme.len(),
                });
            }
            Err(Error::Convergence { residual }) => failures.push((n, residual)),
            Err(e) => return Err(e),
        }
    }
    if !failures.is_empty() {
        return Err(Error::MomentConvergence { residuals: failures });
    }
    Ok(MomentReport { family, rows, tolerance })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: f64) -> ModelParams {
        ModelParams::from_s(s).unwrap()
    }

    #[test]
    fn closed_form_examples() {
        let bg = WeightFunction::new(Family::BarutGirardello, p(1.0)).unwrap();
        assert!((bg.moment_closed_form(0).unwrap() - 1.0).abs() < 1e-13);
        assert!((bg.moment_closed_form(2).unwrap() - 17.5).abs() < 1e-11);
        let gp = WeightFunction::new(Family::GilmorePerelomov, p(1.0)).unwrap();
        assert!((gp.moment_closed_form(0).unwrap() - 1.0).abs() < 1e-13);
        assert!((gp.moment_closed_form(1).unwrap() - 0.4).abs() < 1e-13);
    }

    #[test]
    fn gp_reduced_is_beta_density() {
        for s in [0.5, 1.0, 2.0, 3.3] {
            for x in [1e-3, 0.2, 0.5, 0.9, 0.999] {
                let got = reduced_weight_gp(&p(s), x).unwrap();
                let beta = gamma(s + 1.5).unwrap() / gamma(s + 0.5).unwrap() * (1.0 - x).powf(s - 0.5);
                assert!((got - beta).abs() <= 1e-14 * beta.max(1.0), "s={s} x={x}");
            }
        }
    }

    #[test]
    fn domains() {
        for x in [0.0, 1.0, -0.2, 1.5] {
            assert!(matches!(weight_gp(&p(1.0), x), Err(Error::Domain(_))));
        }
        assert!(weight_bg(&p(1.0), 0.0).is_err());
        assert!(WeightFunction::new(Family::GilmorePerelomov, p(-0.5)).is_err());
        assert!(verify_identity(Family::GilmorePerelomov, &p(1.0), 13, 1e-8).is_err());
    }

    #[test]
    fn bg_positive() {
        for x in [0.1, 1.0, 5.0, 20.0] {
            assert!(weight_bg(&p(1.0), x).unwrap() > 0.0);
            assert!(reduced_weight_bg(&p(1.0), x).unwrap() > 0.0);
        }
    }

    #[test]
    fn gp_moments() {
        for s in [0.5, 1.0, 2.0] {
            let r = verify_identity(Family::GilmorePerelomov, &p(s), 10, GP_TOLERANCE).unwrap();
            assert!(r.passed(), "s={s} {r:?}");
        }
    }

    #[test]
    fn bg_moments() {
        let r = verify_identity(Family::BarutGirardello, &p(1.0), 8, BG_TOLERANCE).unwrap();
        assert!(r.passed(), "{r:?}");
        assert_eq!(r.rows.len(), 9);
    }

    #[test]
    fn degenerate_single_moment() {
        for fam in [Family::BarutGirardello, Family::GilmorePerelomov] {
            let r = verify_identity(fam, &p(1.0), 0, default_tolerance(fam)).unwrap();
            assert_eq!(r.rows.len(), 1);
            assert!((r.rows[0].quadrature - 1.0).abs() < default_tolerance(fam));
        }
    }
}
