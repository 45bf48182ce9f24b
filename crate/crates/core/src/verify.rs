//! Aggregate invariant suite behind the `verify-all` command.

use num_complex::Complex64;
use rayon::prelude::*;

use crate::algebra::{self, TruncationSpec};
use crate::error::Result;
use crate::grid::GridSpec;
use crate::identity;
use crate::nonclassical::{self, Generator};
use crate::specfun::{self, MeijerGSpec};
use crate::spectrum::{self, FactorizationChain, ModelParams};
use crate::states::{self, Family, GPParameter, StateConfig};

#[derive(Debug, Clone, PartialEq)]
pub struct CheckResult {
    pub name: String,
    pub residual: f64,
    pub tolerance: f64,
    pub passed: bool,
    pub detail: String,
}

impl CheckResult {
    fn bound(name: impl Into<String>, residual: f64, tolerance: f64) -> Self {
        Self {
            name: name.into(),
            residual,
            tolerance,
            passed: residual <= tolerance,
            detail: String::new(),
        }
    }

    fn flag(name: impl Into<String>, ok: bool, detail: impl Into<String>) -> Self {
        Self {
            name: name.into(),
            residual: if ok { 0.0 } else { 1.0 },
            tolerance: 0.0,
            passed: ok,
            detail: detail.into(),
        }
    }

    fn failed(name: impl Into<String>, err: crate::Error) -> Self {
        Self::flag(name, false, err.to_string())
    }
}

fn collect(name: &str, f: impl FnOnce() -> Result<CheckResult>) -> CheckResult {
    f().unwrap_or_else(|e| CheckResult::failed(name, e))
}

/// Parameter values every `s`-dependent check runs over.
pub const S_VALUES: [f64; 3] = [0.5, 1.0, 2.0];

fn worst(values: impl IntoIterator<Item = f64>) -> f64 {
    values.into_iter().fold(0.0, f64::max)
}

fn for_each_s(f: impl Fn(&ModelParams) -> Result<f64> + Sync) -> Result<f64> {
    let vals: Result<Vec<f64>> = S_VALUES
        .par_iter()
        .map(|&s| f(&ModelParams::from_s(s)?))
        .collect();
    Ok(worst(vals?))
}

pub fn specfun_checks() -> Vec<CheckResult> {
    let mut out = Vec::new();
    out.push(collect("specfun: 0F1(3/2; x) = sinh(2√x)/(2√x)", || {
        let r = worst([0.25, 1.0, 4.0, 9.0].map(|x: f64| {
            let exact = (2.0 * x.sqrt()).sinh() / (2.0 * x.sqrt());
            (specfun::hyp0f1(1.5, x).unwrap() - exact).abs() / exact
        }));
        Ok(CheckResult::bound("specfun: 0F1(3/2; x) = sinh(2√x)/(2√x)", r, 1e-12))
    }));
    out.push(collect("specfun: 2F1(1,1;2;w) = -ln(1-w)/w", || {
        let r = worst([0.1, -0.5, 0.7].map(|w: f64| {
            let exact = -(1.0 - w).ln() / w;
            (specfun::hyp2f1(1.0, 1.0, 2.0, w).unwrap() - exact).abs() / exact
        }));
        Ok(CheckResult::bound("specfun: 2F1(1,1;2;w) = -ln(1-w)/w", r, 1e-12))
    }));
    out.push(collect("specfun: 2F1(0,0;c;w) = 1", || {
        let ok = [0.5, 1.5, 3.0].iter().all(|&c| specfun::hyp2f1(0.0, 0.0, c, -7.0).unwrap() == 1.0);
        Ok(CheckResult::flag("specfun: 2F1(0,0;c;w) = 1", ok, ""))
    }));
    out.push(CheckResult::bound(
        "specfun: Laguerre derivative identities agree",
        worst((0..=30).flat_map(|n| {
            [0.5, 1.5, 2.7].into_iter().flat_map(move |a| {
                [0.3, 2.0, 9.0].into_iter().map(move |x| {
                    let (lo, hi) = specfun::laguerre_derivative_identities(n, a, x);
                    if n == 0 {
                        0.0
                    } else {
                        (lo - hi).abs() / lo.abs().max(hi.abs()).max(1.0)
                    }
                })
            })
        })),
        1e-10,
    ));
    out.push(collect("specfun: Meijer G non-negative", || {
        let mut ok = true;
        for s in S_VALUES {
            let spec = MeijerGSpec::bg_weight(s);
            for k in 1..=50 {
                ok &= specfun::meijer_g(&spec, k as f64)? >= 0.0;
            }
        }
        Ok(CheckResult::flag("specfun: Meijer G non-negative", ok, "x = 1..50"))
    }));
    out
}

pub fn spectrum_checks() -> Vec<CheckResult> {
    vec![
        collect("spectrum: chain energies = 2n+s+3/2", || {
            let r = for_each_s(|p| {
                let chain = FactorizationChain::build(p, 20);
                Ok(worst((0..=20).map(|n| (chain.energies[n] - spectrum::energy(p, n)).abs()))
                    .max(chain.recurrence_residual()))
            })?;
            Ok(CheckResult::bound("spectrum: chain energies = 2n+s+3/2", r, 1e-14))
        }),
        collect("spectrum: orthonormality n<=10", || {
            let r = for_each_s(|p| {
                let mut w: f64 = 0.0;
                for m in 0..=10 {
                    for n in m..=10 {
                        let target = if m == n { 1.0 } else { 0.0 };
                        w = w.max((spectrum::overlap(p, m, n)? - target).abs());
                    }
                }
                Ok(w)
            })?;
            Ok(CheckResult::bound("spectrum: orthonormality n<=10", r, 1e-8))
        }),
        collect("spectrum: Schrodinger residual n<=10", || {
            let r = for_each_s(|p| {
                Ok(worst((0..=10).map(|n| {
                    spectrum::schrodinger_residual(p, n, &GridSpec::for_energy(spectrum::energy(p, n)))
                })))
            })?;
            Ok(CheckResult::bound("spectrum: Schrodinger residual n<=10", r, 1e-4))
        }),
        collect("spectrum: factorization chain vs closed form n<=4", || {
            let r = for_each_s(|p| {
                let mut w: f64 = 0.0;
                for n in 0..=4 {
                    let grid = GridSpec::for_energy(spectrum::energy(p, n));
                    let built = spectrum::factorization_build(p, n, &grid)?;
                    let exact = spectrum::eigenfunction(p, n, &grid);
                    w = w.max(spectrum::relative_l2(&built, &exact, spectrum::COMPOSED_MARGIN));
                }
                Ok(w)
            })?;
            Ok(CheckResult::bound("spectrum: factorization chain vs closed form n<=4", r, 1e-4))
        }),
    ]
}

pub fn algebra_checks(dim: usize) -> Vec<CheckResult> {
    vec![
        collect("algebra: interior su(1,1) commutators", || {
            let trunc = TruncationSpec::with_dim(dim)?;
            let r = for_each_s(|p| Ok(algebra::commutator_check(p, &trunc).max()))?;
            Ok(CheckResult::bound(format!("algebra: interior su(1,1) commutators D={dim}"), r, 1e-12))
        }),
        collect("algebra: full block fails at edge", || {
            let trunc = TruncationSpec::with_dim(dim)?;
            let r = algebra::commutator_check_full(&ModelParams::default(), &trunc).max();
            Ok(CheckResult::flag("algebra: full block fails at edge", r > 1e-12, format!("{r:.3e}")))
        }),
        collect("algebra: grid ladder realization n<=6", || {
            let r = for_each_s(|p| {
                let mut w: f64 = 0.0;
                for n in 0..=6 {
                    let grid = GridSpec::for_energy(spectrum::energy(p, n + 1));
                    w = w.max(algebra::grid_ladder_check(p, n, &grid)?.max());
                }
                Ok(w)
            })?;
            Ok(CheckResult::bound("algebra: grid ladder realization n<=6", r, 1e-4))
        }),
    ]
}

/// Sample points of the closed disk `|z| <= radius`.
pub fn disk_grid(radius: f64, rings: usize, spokes: usize) -> Vec<Complex64> {
    let mut pts = vec![Complex64::new(0.0, 0.0)];
    for i in 1..=rings {
        let r = radius * i as f64 / rings as f64;
        for k in 0..spokes {
            pts.push(Complex64::from_polar(r, 2.0 * std::f64::consts::PI * k as f64 / spokes as f64));
        }
    }
    pts
}

pub fn bg_eigen_residual(params: &ModelParams, z: Complex64) -> Result<f64> {
    // The dropped amplitude enters linearly, so size by the squared mass bound.
    let cfg = StateConfig::for_metrics();
    let trunc = states::auto_truncation(Family::BarutGirardello, params, z, &cfg)?;
    let v = states::bg_state_with(params, z, &trunc, &cfg)?;
    let c = v.coefficients();
    Ok((0..c.len())
        .map(|n| {
            let lowered = if n + 1 < c.len() { c[n + 1] * algebra::m_minus(params, n + 1) } else { Complex64::new(0.0, 0.0) };
            (lowered - z * c[n]).norm_sqr()
        })
        .sum::<f64>()
        .sqrt())
}

pub fn states_checks(oracle_dim: usize) -> Vec<CheckResult> {
    vec![
        collect("states: BG eigen-residual |z|<=3", || {
            let pts = disk_grid(3.0, 6, 12);
            let r = for_each_s(|p| {
                let v: Result<Vec<f64>> = pts.par_iter().map(|&z| bg_eigen_residual(p, z)).collect();
                Ok(worst(v?))
            })?;
            Ok(CheckResult::bound("states: BG eigen-residual |z|<=3", r, 1e-8))
        }),
        collect("states: BG closed form vs recursion", || {
            let pts = disk_grid(3.0, 3, 5);
            let r = for_each_s(|p| {
                let mut w: f64 = 0.0;
                for &z in &pts {
                    let t = states::auto_truncation(Family::BarutGirardello, p, z, &StateConfig::default())?;
                    w = w.max(states::bg_state(p, z, &t)?.max_abs_diff(&states::bg_recursion_solve(p, z, &t)?));
                }
                Ok(w)
            })?;
            Ok(CheckResult::bound("states: BG closed form vs recursion", r, 1e-12))
        }),
        collect("states: GP series vs displacement exponential", || {
            let trunc = TruncationSpec::with_dim(oracle_dim)?;
            let p = ModelParams::default();
            let xis = [Complex64::new(0.6, 0.0), Complex64::new(1.2, 0.0), Complex64::from_polar(1.2, 2.0), Complex64::new(-0.5, 0.4)];
            let diffs: Result<Vec<f64>> = xis
                .par_iter()
                .map(|&xi| {
                    let oracle = states::gp_displacement_oracle(&p, xi, &trunc)?;
                    let series = states::gp_state(&p, GPParameter::from_xi(xi).z, &trunc)?;
                    Ok(oracle.max_abs_diff(&series).max((oracle.norm_sqr() - 1.0).abs()))
                })
                .collect();
            Ok(CheckResult::bound(format!("states: GP series vs displacement exponential D={oracle_dim}"), worst(diffs?), 1e-6))
        }),
        collect("states: unit norm within tail", || {
            let mut w: f64 = 0.0;
            let p = ModelParams::default();
            let cfg = StateConfig::default();
            for (fam, z) in [(Family::BarutGirardello, 3.0), (Family::GilmorePerelomov, 0.9)] {
                let z = Complex64::from_polar(z, 0.4);
                let v = states::coherent_state(fam, &p, z, &states::auto_truncation(fam, &p, z, &cfg)?)?;
                w = w.max((v.norm_sqr() - 1.0).abs());
            }
            Ok(CheckResult::bound("states: unit norm within tail", w, 1e-10))
        }),
    ]
}

pub fn nonclassical_checks() -> Vec<CheckResult> {
    let cfg = StateConfig::for_metrics();
    vec![
        collect("nonclassical: BG fixed points", || {
            let pts = disk_grid(3.0, 3, 6);
            let r = for_each_s(|p| {
                let vals: Result<Vec<f64>> = pts[1..]
                    .par_iter()
                    .map(|&z| {
                        let t = states::auto_truncation(Family::BarutGirardello, p, z, &cfg)?;
                        let v = states::coherent_state_with(Family::BarutGirardello, p, z, &t, &cfg)?;
                        let m = nonclassical::metrics(&v)?;
                        let q = m.q.map_or(f64::INFINITY, |q| (q + 1.0).abs());
                        Ok(worst([m.s_x1.abs(), m.s_p1.abs(), m.s_x2.abs(), m.s_p2.abs(), q]))
                    })
                    .collect();
                Ok(worst(vals?))
            })?;
            Ok(CheckResult::bound("nonclassical: BG fixed points", r, 1e-8))
        }),
        collect("nonclassical: GP sign structure", || {
            let recs = nonclassical::scan(Family::GilmorePerelomov, &ModelParams::default(), -0.95, 0.95, 191)?;
            let report = gp_sign_report(&recs);
            Ok(CheckResult::flag("nonclassical: GP sign structure", report.passed(), format!("{report:?}")))
        }),
        collect("nonclassical: scan even in z", || {
            let recs = nonclassical::scan(Family::GilmorePerelomov, &ModelParams::default(), -0.9, 0.9, 37)?;
            Ok(CheckResult::bound("nonclassical: scan even in z", scan_asymmetry(&recs), 1e-10))
        }),
        collect("nonclassical: expanded formula consistency", || {
            let p = ModelParams::default();
            let mut w: f64 = 0.0;
            for (fam, z) in [
                (Family::GilmorePerelomov, Complex64::new(0.5, -0.3)),
                (Family::BarutGirardello, Complex64::new(1.3, 2.0)),
            ] {
                let t = states::auto_truncation(fam, &p, z, &cfg)?;
                let v = states::coherent_state_with(fam, &p, z, &t, &cfg)?;
                let (a, b) = nonclassical::squeezing_first(&v)?;
                let (c, d) = nonclassical::squeezing_first_expanded(&v)?;
                w = w.max((a - c).abs()).max((b - d).abs());
            }
            Ok(CheckResult::bound("nonclassical: expanded formula consistency", w, 1e-12))
        }),
        collect("nonclassical: [X1,P1] = i M0", || {
            let p = ModelParams::default();
            let z = Complex64::new(0.3, 0.6);
            let t = states::auto_truncation(Family::GilmorePerelomov, &p, z, &cfg)?;
            let v = states::coherent_state_with(Family::GilmorePerelomov, &p, z, &t, &cfg)?;
            let (x, pp) = nonclassical::quadratures(&[Generator::Lower]);
            let lhs = x.commutator(&pp).expectation(&v)?;
            let m0 = nonclassical::expectation(&v, &[Generator::Weight])?;
            Ok(CheckResult::bound("nonclassical: [X1,P1] = i M0", (lhs - Complex64::i() * m0).norm(), 1e-12))
        }),
    ]
}

/// Sign pattern of a GP scan: squeezing in `P` off the origin and a sign change of `Q`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SignReport {
    pub p1_negative: bool,
    pub p2_negative: bool,
    pub x1_min: f64,
    pub x2_min: f64,
    pub q_has_negative: bool,
    pub q_has_positive: bool,
}

impl SignReport {
    pub fn passed(&self) -> bool {
        self.p1_negative
            && self.p2_negative
            && self.x1_min >= -1e-10
            && self.x2_min >= -1e-10
            && self.q_has_negative
            && self.q_has_positive
    }
}

pub fn gp_sign_report(records: &[nonclassical::MetricsRecord]) -> SignReport {
    let mut rep = SignReport {
        p1_negative: true,
        p2_negative: true,
        x1_min: f64::INFINITY,
        x2_min: f64::INFINITY,
        q_has_negative: false,
        q_has_positive: false,
    };
    for r in records {
        let Ok(m) = &r.metrics else {
            rep.p1_negative = false;
            continue;
        };
        if r.z.re != 0.0 {
            rep.p1_negative &= m.s_p1 < 0.0;
            rep.p2_negative &= m.s_p2 < 0.0;
        }
        rep.x1_min = rep.x1_min.min(m.s_x1);
        rep.x2_min = rep.x2_min.min(m.s_x2);
        if let Some(q) = m.q {
            rep.q_has_negative |= q < 0.0;
            rep.q_has_positive |= q > 0.0;
        }
    }
    rep
}

/// Largest `|f(z) - f(-z)|` over the five metrics of a scan on a symmetric grid.
pub fn scan_asymmetry(records: &[nonclassical::MetricsRecord]) -> f64 {
    let n = records.len();
    let mut w: f64 = 0.0;
    for i in 0..n / 2 {
        let (a, b) = (&records[i], &records[n - 1 - i]);
        match (&a.metrics, &b.metrics) {
            (Ok(x), Ok(y)) => {
                let qa = x.q.unwrap_or(0.0);
                let qb = y.q.unwrap_or(0.0);
                for d in [x.s_x1 - y.s_x1, x.s_p1 - y.s_p1, x.s_x2 - y.s_x2, x.s_p2 - y.s_p2, qa - qb] {
                    w = w.max(d.abs());
                }
            }
            _ => return f64::INFINITY,
        }
    }
    w
}

pub fn identity_checks() -> Vec<CheckResult> {
    let mut out = Vec::new();
    for (fam, n_max, name) in [
        (Family::GilmorePerelomov, 10, "identity: GP moments n<=10"),
        (Family::BarutGirardello, 8, "identity: BG moments n<=8"),
    ] {
        out.push(collect(name, || {
            let tol = identity::default_tolerance(fam);
            let r = for_each_s(|p| Ok(identity::verify_identity(fam, p, n_max, tol)?.max_rel_err()))?;
            Ok(CheckResult::bound(name, r, tol))
        }));
    }
    out.push(collect("identity: GP weight equals Beta density", || {
        let r = for_each_s(|p| {
            let s = p.s();
            let k = specfun::gamma(s + 1.5)? / specfun::gamma(s + 0.5)?;
            let mut w: f64 = 0.0;
            for i in 1..100 {
                let x = i as f64 / 100.0;
                let beta = k * (1.0 - x).powf(s - 0.5);
                w = w.max((identity::reduced_weight_gp(p, x)? - beta).abs() / beta.max(1.0));
            }
            Ok(w)
        })?;
        Ok(CheckResult::bound("identity: GP weight equals Beta density", r, 1e-14))
    }));
    out.push(collect("identity: BG weight positive", || {
        let p = ModelParams::default();
        let mut ok = true;
        for x in [0.1, 1.0, 5.0, 20.0] {
            ok &= identity::weight_bg(&p, x)? > 0.0;
        }
        Ok(CheckResult::flag("identity: BG weight positive", ok, "x in {0.1, 1, 5, 20}"))
    }));
    out
}

/// Every invariant check, in module order.
pub fn run_all(trunc_dim: usize) -> Vec<CheckResult> {
    let mut out = specfun_checks();
    out.extend(spectrum_checks());
    out.extend(algebra_checks(trunc_dim));
    out.extend(states_checks(trunc_dim));
    out.extend(nonclassical_checks());
    out.extend(identity_checks());
    out
}
