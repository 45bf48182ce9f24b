//! Expectation values, squeezing parameters and the Mandel statistic.
//!
//! Words act right to left on a copy of the state that is allowed to grow by one
//! level per `M₊`, so every expectation is the exact infinite-space value for the
//! retained coefficients.

use std::fmt::Write as _;

use num_complex::Complex64;
use rayon::prelude::*;

use crate::algebra::{m_minus, m_plus, m_zero};
use crate::error::{Error, Result};
use crate::states::{self, Family, FockVector, StateConfig};
use crate::spectrum::ModelParams;

/// Largest tail bound for which expectations are trusted.
pub const EXPECTATION_TAIL_LIMIT: f64 = 1e-10;
pub const MAX_WORD_LEN: usize = 4;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Generator {
    Lower,
    Raise,
    Weight,
}

use Generator::{Lower, Raise, Weight};

impl Generator {
    fn adjoint(self) -> Self {
        match self {
            Lower => Raise,
            Raise => Lower,
            Weight => Weight,
        }
    }
}

/// Applies one generator to a coefficient vector indexed from level 0.
fn act(params: &ModelParams, g: Generator, v: &[Complex64]) -> Vec<Complex64> {
    match g {
        Raise => {
            let mut out = vec![Complex64::new(0.0, 0.0); v.len() + 1];
            for (n, c) in v.iter().enumerate() {
                out[n + 1] = c * m_plus(params, n);
            }
            out
        }
        Lower => v
            .iter()
            .enumerate()
            .skip(1)
            .map(|(n, c)| c * m_minus(params, n))
            .collect(),
        Weight => v
            .iter()
            .enumerate()
            .map(|(n, c)| c * m_zero(params, n))
            .collect(),
    }
}

fn apply_word(params: &ModelParams, word: &[Generator], v: &[Complex64]) -> Vec<Complex64> {
    word.iter().rev().fold(v.to_vec(), |acc, &g| act(params, g, &acc))
}

fn check_state(state: &FockVector, word_len: usize) -> Result<()> {
    if word_len > MAX_WORD_LEN {
        return crate::error::domain(format!("word length {word_len} exceeds {MAX_WORD_LEN}"));
    }
    if state.tail_bound() > EXPECTATION_TAIL_LIMIT {
        return Err(Error::Accuracy {
            what: "state tail too heavy for expectation values".into(),
            residual: state.tail_bound(),
            tolerance: EXPECTATION_TAIL_LIMIT,
        });
    }
    Ok(())
}

fn inner(bra: &[Complex64], ket: &[Complex64]) -> Complex64 {
    bra.iter().zip(ket).map(|(a, b)| a.conj() * b).sum()
}

/// `⟨ψ| W |ψ⟩` for a word `W = g₁ g₂ … g_k` (rightmost factor acts first).
pub fn expectation(state: &FockVector, word: &[Generator]) -> Result<Complex64> {
    check_state(state, word.len())?;
    Ok(word_expectation(state, word))
}

fn word_expectation(state: &FockVector, word: &[Generator]) -> Complex64 {
    let psi = state.coefficients();
    // Split the word so both halves stay short: ⟨ψ|AB|ψ⟩ = ⟨A†ψ|Bψ⟩.
    let mid = word.len() / 2;
    let left: Vec<Generator> = word[..mid].iter().rev().map(|g| g.adjoint()).collect();
    let bra = apply_word(state.params(), &left, psi);
    let ket = apply_word(state.params(), &word[mid..], psi);
    inner(&bra, &ket)
}

/// Complex linear combination of generator words.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct OpPoly {
    terms: Vec<(Complex64, Vec<Generator>)>,
}

impl OpPoly {
    pub fn word(word: &[Generator]) -> Self {
        Self {
            terms: vec![(Complex64::new(1.0, 0.0), word.to_vec())],
        }
    }

    pub fn generator(g: Generator) -> Self {
        Self::word(&[g])
    }

    pub fn terms(&self) -> &[(Complex64, Vec<Generator>)] {
        &self.terms
    }

    pub fn scale(&self, k: Complex64) -> Self {
        Self {
            terms: self.terms.iter().map(|(c, w)| (c * k, w.clone())).collect(),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut terms = self.terms.clone();
        for (c, w) in &other.terms {
            match terms.iter_mut().find(|(_, v)| v == w) {
                Some((acc, _)) => *acc += c,
                None => terms.push((*c, w.clone())),
            }
        }
        terms.retain(|(c, _)| *c != Complex64::new(0.0, 0.0));
        Self { terms }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(Complex64::new(-1.0, 0.0)))
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Self::default();
        for (a, u) in &self.terms {
            for (b, v) in &other.terms {
                let w: Vec<Generator> = u.iter().chain(v).copied().collect();
                out = out.add(&Self { terms: vec![(a * b, w)] });
            }
        }
        out
    }

    pub fn commutator(&self, other: &Self) -> Self {
        self.mul(other).sub(&other.mul(self))
    }

    pub fn max_word_len(&self) -> usize {
        self.terms.iter().map(|(_, w)| w.len()).max().unwrap_or(0)
    }

    pub fn expectation(&self, state: &FockVector) -> Result<Complex64> {
        check_state(state, self.max_word_len())?;
        Ok(self
            .terms
            .iter()
            .map(|(c, w)| c * word_expectation(state, w))
            .sum())
    }
}

/// `X = (A + A†)/2`, `P = (A - A†)/(2i)` for a lowering-type word `A`.
pub fn quadratures(lower_word: &[Generator]) -> (OpPoly, OpPoly) {
    let a = OpPoly::word(lower_word);
    let raise: Vec<Generator> = lower_word.iter().rev().map(|g| g.adjoint()).collect();
    let ad = OpPoly::word(&raise);
    let x = a.add(&ad).scale(Complex64::new(0.5, 0.0));
    let p = a.sub(&ad).scale(Complex64::new(0.0, -0.5));
    (x, p)
}

fn variance(op: &OpPoly, state: &FockVector) -> Result<f64> {
    let mean = op.expectation(state)?.re;
    Ok(op.mul(op).expectation(state)?.re - mean * mean)
}

/// `S = (Δγ)² / (|⟨[X,P]⟩|/2) - 1` for both quadratures.
fn squeezing_pair(state: &FockVector, lower_word: &[Generator]) -> Result<(f64, f64)> {
    let (x, p) = quadratures(lower_word);
    let half_comm = 0.5 * x.commutator(&p).expectation(state)?.norm();
    Ok((
        variance(&x, state)? / half_comm - 1.0,
        variance(&p, state)? / half_comm - 1.0,
    ))
}

/// `(S_X1, S_P1)` for `X₁ = (M₋+M₊)/2`, `P₁ = (M₋-M₊)/(2i)`.
pub fn squeezing_first(state: &FockVector) -> Result<(f64, f64)> {
    squeezing_pair(state, &[Lower])
}

/// `(S_X2, S_P2)` for `X₂ = (M₋²+M₊²)/2`, `P₂ = (M₋²-M₊²)/(2i)`.
pub fn squeezing_amplitude_squared(state: &FockVector) -> Result<(f64, f64)> {
    squeezing_pair(state, &[Lower, Lower])
}

/// First-order parameters from the expanded moment formula, used as a consistency check.
pub fn squeezing_first_expanded(state: &FockVector) -> Result<(f64, f64)> {
    let e = |w: &[Generator]| expectation(state, w);
    let m0 = e(&[Weight])?.re;
    let (lm, lp) = (e(&[Lower])?, e(&[Raise])?);
    let (l2, p2) = (e(&[Lower, Lower])?, e(&[Raise, Raise])?);
    let (lr, rl) = (e(&[Lower, Raise])?, e(&[Raise, Lower])?);
    let sx = (l2 + lr + rl + p2 - lm * lm - lp * lp - lm * lp - lp * lm).re / (2.0 * m0) - 1.0;
    let sp = (-l2 + lr + rl - p2 + lm * lm + lp * lp - lm * lp - lp * lm).re / (2.0 * m0) - 1.0;
    Ok((sx, sp))
}

/// `Q = (⟨M₊²M₋²⟩ - ⟨M₊M₋⟩²)/⟨M₊M₋⟩ - 1`.
pub fn mandel_q(state: &FockVector) -> Result<f64> {
    let n1 = expectation(state, &[Raise, Lower])?.re;
    if n1 <= 0.0 {
        return Err(Error::Undefined("⟨M₊M₋⟩ = 0, Mandel Q is 0/0".into()));
    }
    let n2 = expectation(state, &[Raise, Raise, Lower, Lower])?.re;
    Ok((n2 - n1 * n1) / n1 - 1.0)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Metrics {
    pub s_x1: f64,
    pub s_p1: f64,
    pub s_x2: f64,
    pub s_p2: f64,
    /// `None` when the statistic is undefined.
    pub q: Option<f64>,
}

pub fn metrics(state: &FockVector) -> Result<Metrics> {
    let (s_x1, s_p1) = squeezing_first(state)?;
    let (s_x2, s_p2) = squeezing_amplitude_squared(state)?;
    let q = match mandel_q(state) {
        Ok(q) => Some(q),
        Err(Error::Undefined(_)) => None,
        Err(e) => return Err(e),
    };
    Ok(Metrics { s_x1, s_p1, s_x2, s_p2, q })
}

/// One row of a scan. `metrics` holds the row-level error when a point fails.
#[derive(Debug, Clone, PartialEq)]
pub struct MetricsRecord {
    pub z: Complex64,
    pub metrics: std::result::Result<Metrics, Error>,
    pub trunc_dim: usize,
    pub tail_bound: f64,
}

impl MetricsRecord {
    pub fn evaluate(family: Family, params: &ModelParams, z: Complex64, cfg: &StateConfig) -> Self {
        let state = states::auto_truncation(family, params, z, cfg)
            .and_then(|t| states::coherent_state_with(family, params, z, &t, cfg));
        match state {
            Ok(v) => Self {
                z,
                metrics: metrics(&v),
                trunc_dim: v.dim(),
                tail_bound: v.tail_bound(),
            },
            Err(e) => Self {
                z,
                metrics: Err(e),
                trunc_dim: 0,
                tail_bound: f64::NAN,
            },
        }
    }
}

/// Evenly spaced real grid with both endpoints; symmetric ranges are sampled symmetrically.
pub fn linear_grid(zmin: f64, zmax: f64, steps: usize) -> Vec<f64> {
    match steps {
        0 => Vec::new(),
        1 => vec![zmin],
        _ => {
            let last = (steps - 1) as f64;
            (0..steps)
                .map(|i| (zmin * (last - i as f64) + zmax * i as f64) / last)
                .collect()
        }
    }
}

/// Metrics on a real-`z` grid. Points are evaluated in parallel and returned in grid order.
pub fn scan(family: Family, params: &ModelParams, zmin: f64, zmax: f64, steps: usize) -> Result<Vec<MetricsRecord>> {
    if family == Family::GilmorePerelomov && (zmin <= -1.0 || zmax >= 1.0) {
        return crate::error::domain(format!("GP scan range [{zmin}, {zmax}] leaves the unit disk"));
    }
    let cfg = StateConfig::for_metrics();
    Ok(linear_grid(zmin, zmax, steps)
        .into_par_iter()
        .map(|z| MetricsRecord::evaluate(family, params, Complex64::new(z, 0.0), &cfg))
        .collect())
}

pub const CSV_HEADER: &str = "z,S_X1,S_P1,S_X2,S_P2,Q,trunc_dim,tail_bound";

/// Shortest round-trip decimal; `nan` for non-finite or missing values.
pub fn format_number(x: f64) -> String {
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    let a = x.abs();
    if a != 0.0 && !(1e-5..1e16).contains(&a) {
        format!("{x:e}")
    } else {
        format!("{x}")
    }
}

pub fn scan_csv(records: &[MetricsRecord]) -> String {
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    for r in records {
        let cols = match &r.metrics {
            Ok(m) => [m.s_x1, m.s_p1, m.s_x2, m.s_p2, m.q.unwrap_or(f64::NAN)],
            Err(_) => [f64::NAN; 5],
        };
        let _ = write!(out, "{}", format_number(r.z.re));
        for c in cols {
            let _ = write!(out, ",{}", format_number(c));
        }
        let _ = writeln!(out, ",{},{}", r.trunc_dim, format_number(r.tail_bound));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::TruncationSpec;

    fn s1() -> ModelParams {
        ModelParams::from_s(1.0).unwrap()
    }

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    fn state(fam: Family, p: &ModelParams, z: Complex64) -> FockVector {
        let cfg = StateConfig::for_metrics();
        let t = states::auto_truncation(fam, p, z, &cfg).unwrap();
        states::coherent_state_with(fam, p, z, &t, &cfg).unwrap()
    }

    #[test]
    fn vacuum_words() {
        let t = TruncationSpec::with_dim(6).unwrap();
        let vac = states::number_state(&s1(), 0, &t).unwrap();
        assert_eq!(expectation(&vac, &[Raise, Lower]).unwrap(), c(0.0));
        assert!((expectation(&vac, &[Lower, Raise]).unwrap().re - 2.5).abs() < 1e-14);
        let (sx, sp) = squeezing_first(&vac).unwrap();
        assert!(sx.abs() < 1e-14 && sp.abs() < 1e-14);
        let (sx2, sp2) = squeezing_amplitude_squared(&vac).unwrap();
        assert_eq!(sx2, sp2);
        assert!(matches!(mandel_q(&vac), Err(Error::Undefined(_))));
    }

    #[test]
    fn number_state_weight_and_q() {
        let t = TruncationSpec::with_dim(10).unwrap();
        for n in 0..6 {
            let v = states::number_state(&s1(), n, &t).unwrap();
            let m0 = expectation(&v, &[Weight]).unwrap().re;
            assert!((m0 - (n as f64 + 1.25)).abs() < 1e-14);
        }
        let one = states::number_state(&s1(), 1, &t).unwrap();
        assert!((mandel_q(&one).unwrap() + 3.5).abs() < 1e-13);
    }

    #[test]
    fn bg_number_moment() {
        for r in [0.4, 1.7, 3.0] {
            let z = Complex64::from_polar(r, 1.1);
            let v = state(Family::BarutGirardello, &s1(), z);
            let n1 = expectation(&v, &[Raise, Lower]).unwrap();
            assert!((n1 - c(r * r)).norm() < 1e-10);
        }
    }

    #[test]
    fn bg_fixed_points() {
        for s in [0.5, 1.0, 2.0] {
            let p = ModelParams::from_s(s).unwrap();
            for r in [0.2, 1.0, 3.0] {
                let v = state(Family::BarutGirardello, &p, Complex64::from_polar(r, 0.3));
                let m = metrics(&v).unwrap();
                for val in [m.s_x1, m.s_p1, m.s_x2, m.s_p2] {
                    assert!(val.abs() <= 1e-8, "s={s} r={r} {m:?}");
                }
                assert!((m.q.unwrap() + 1.0).abs() <= 1e-8);
            }
        }
    }

    #[test]
    fn gp_signs() {
        for z in [0.05, 0.3, 0.6, 0.9] {
            let m = metrics(&state(Family::GilmorePerelomov, &s1(), c(z))).unwrap();
            assert!(m.s_p1 < 0.0 && m.s_p2 < 0.0, "{z} {m:?}");
            assert!(m.s_x1 >= -1e-10 && m.s_x2 >= -1e-10, "{z} {m:?}");
        }
        let q_small = metrics(&state(Family::GilmorePerelomov, &s1(), c(0.2))).unwrap().q.unwrap();
        let q_large = metrics(&state(Family::GilmorePerelomov, &s1(), c(0.8))).unwrap().q.unwrap();
        assert!(q_small < 0.0 && q_large > 0.0);
    }

    #[test]
    fn expanded_formula_agrees() {
        for (fam, z) in [
            (Family::GilmorePerelomov, Complex64::new(0.4, 0.3)),
            (Family::BarutGirardello, Complex64::new(-1.2, 0.8)),
        ] {
            let v = state(fam, &s1(), z);
            let (a, b) = squeezing_first(&v).unwrap();
            let (c, d) = squeezing_first_expanded(&v).unwrap();
            assert!((a - c).abs() < 1e-12 && (b - d).abs() < 1e-12);
        }
    }

    #[test]
    fn commutator_polys() {
        let (x, p) = quadratures(&[Lower]);
        // [X₁, P₁] = i M₀
        let comm = x.commutator(&p);
        let v = state(Family::GilmorePerelomov, &s1(), Complex64::new(0.3, 0.1));
        let lhs = comm.expectation(&v).unwrap();
        let m0 = expectation(&v, &[Weight]).unwrap();
        assert!((lhs - Complex64::i() * m0).norm() < 1e-12);
    }

    #[test]
    fn heavy_tail_rejected() {
        let cfg = StateConfig { tail_threshold: 1e-3, ..StateConfig::default() };
        let t = TruncationSpec::with_dim(7).unwrap();
        let v = states::gp_state_with(&s1(), c(0.5), &t, &cfg).unwrap();
        assert!(matches!(expectation(&v, &[Lower]), Err(Error::Accuracy { .. })));
    }

    #[test]
    fn grid_symmetry_and_csv() {
        let g = linear_grid(-0.95, 0.95, 191);
        assert_eq!(g[95], 0.0);
        assert!((0..191).all(|i| g[i] == -g[190 - i]));
        assert_eq!(scan_csv(&[]), format!("{CSV_HEADER}\n"));
        assert_eq!(format_number(f64::NAN), "nan");
        assert_eq!(format_number(0.1), "0.1");
        assert_eq!(format_number(-2.5e-7), "-2.5e-7");
    }

    #[test]
    fn scan_records_nan_at_origin() {
        let recs = scan(Family::GilmorePerelomov, &s1(), -0.1, 0.1, 3).unwrap();
        assert_eq!(recs[1].metrics.as_ref().unwrap().q, None);
        let csv = scan_csv(&recs);
        assert!(csv.lines().nth(2).unwrap().contains(",nan,"));
        assert!(scan(Family::GilmorePerelomov, &s1(), -1.0, 0.5, 3).is_err());
    }
}
