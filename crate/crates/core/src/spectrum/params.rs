use crate::error::{domain, Result};

/// Coupling of the pseudoharmonic potential `V(x) = x²/2 + g/(2x²)` in units ħ = m = ω = 1.
///
/// The shape parameter `s = -1/2 + √(g + 1/4)` is the larger root of `s(s+1) = g`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModelParams {
    g: f64,
    s: f64,
}

impl ModelParams {
    pub fn from_s(s: f64) -> Result<Self> {
        if !(s >= -0.5) || !s.is_finite() {
            return domain(format!("shape parameter s must be >= -1/2, got {s}"));
        }
        Ok(Self { g: s * (s + 1.0), s })
    }

    pub fn from_g(g: f64) -> Result<Self> {
        if !(g >= -0.25) || !g.is_finite() {
            return domain(format!("coupling g must be >= -1/4, got {g}"));
        }
        Ok(Self {
            g,
            s: -0.5 + (g + 0.25).sqrt(),
        })
    }

    pub fn g(&self) -> f64 {
        self.g
    }

    pub fn s(&self) -> f64 {
        self.s
    }

    /// Laguerre index `s + 1/2` of the eigenfunctions.
    pub fn alpha(&self) -> f64 {
        self.s + 0.5
    }

    /// `s + 3/2`, the ground-state energy and twice the lowest weight.
    pub fn lowest_weight2(&self) -> f64 {
        self.s + 1.5
    }
}

impl Default for ModelParams {
    fn default() -> Self {
        Self { g: 2.0, s: 1.0 }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn s_and_g_round_trip() {
        for &g in &[0.0, 0.3, 2.0, 6.0, 117.25] {
            let p = ModelParams::from_g(g).unwrap();
            assert!((p.s() * (p.s() + 1.0) - g).abs() <= 4.0 * f64::EPSILON * g.max(1.0));
        }
        let p = ModelParams::from_s(1.0).unwrap();
        assert_eq!(p.g(), 2.0);
        assert_eq!(ModelParams::from_g(2.0).unwrap().s(), 1.0);
    }

    #[test]
    fn rejects_out_of_range() {
        assert!(ModelParams::from_s(-0.75).is_err());
        assert!(ModelParams::from_g(-1.0).is_err());
        assert!(ModelParams::from_s(f64::NAN).is_err());
    }
}
