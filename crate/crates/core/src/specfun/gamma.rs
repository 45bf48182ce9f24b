//! Log-gamma for positive reals and for complex arguments with positive real part.

use num_complex::Complex64;

use crate::error::{domain, Result};

const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;
const HALF_LN_TWO_PI: f64 = 0.918_938_533_204_672_8;

/// Shift threshold for the asymptotic series.
const STIRLING_MIN: f64 = 10.0;

/// `B_{2k} / (2k (2k - 1))` for k = 1..=8.
const STIRLING_COEFFS: [f64; 8] = [
    1.0 / 12.0,
    -1.0 / 360.0,
    1.0 / 1260.0,
    -1.0 / 1680.0,
    1.0 / 1188.0,
    -691.0 / 360_360.0,
    1.0 / 156.0,
    -3617.0 / 122_400.0,
];

/// `(-1)^k zeta(k) / k` for k = 2..=30; Taylor coefficients of `ln Γ(1 + e) + γ e`.
const LN_GAMMA_1P: [f64; 29] = [
    0.822_467_033_424_113_2,
    -0.400_685_634_386_531_4,
    0.270_580_808_427_784_5,
    -0.207_385_551_028_673_98,
    0.169_557_176_997_408_2,
    -0.144_049_896_768_846_12,
    0.125_509_669_524_743_04,
    -0.111_334_265_869_564_69,
    0.100_099_457_512_781_81,
    -0.090_954_017_145_829_04,
    0.083_353_840_546_109,
    -0.076_932_516_411_352_19,
    0.071_432_946_295_361_34,
    -0.066_668_705_882_420_47,
    0.062_500_955_141_213_04,
    -0.058_823_978_658_684_58,
    0.055_555_767_627_403_61,
    -0.052_631_679_379_616_66,
    0.050_000_047_698_101_69,
    -0.047_619_070_330_142_23,
    0.045_454_556_293_204_67,
    -0.043_478_266_053_040_26,
    0.041_666_669_150_341_21,
    -0.040_000_001_192_140_14,
    0.038_461_539_034_675_19,
    -0.037_037_037_312_989_33,
    0.035_714_285_847_333_36,
    -0.034_482_758_684_919_3,
    0.033_333_333_364_377_58,
];

/// `ln Γ(1 + e)` for `|e| <= 1/4`. Exactly zero at `e = 0`.
fn ln_gamma_1p_small(e: f64) -> f64 {
    let mut acc = 0.0;
    for &c in LN_GAMMA_1P.iter().rev() {
        acc = acc * e + c;
    }
    e * (acc * e - EULER_GAMMA)
}

fn stirling(x: f64) -> f64 {
    let inv = 1.0 / x;
    let inv2 = inv * inv;
    let mut series = 0.0;
    for &c in STIRLING_COEFFS.iter().rev() {
        series = series * inv2 + c;
    }
    (x - 0.5) * x.ln() - x + HALF_LN_TWO_PI + series * inv
}

/// Natural logarithm of the gamma function for `x > 0`.
///
/// Uses a Taylor series around the zeros at 1 and 2 so the relative error
/// stays small there, and the shifted Stirling series everywhere else.
pub fn ln_gamma(x: f64) -> Result<f64> {
    if !(x > 0.0) || !x.is_finite() {
        return domain(format!("ln_gamma requires a positive finite argument, got {x}"));
    }
    Ok(ln_gamma_unchecked(x))
}

pub(crate) fn ln_gamma_unchecked(x: f64) -> f64 {
    if (x - 1.0).abs() <= 0.25 {
        return ln_gamma_1p_small(x - 1.0);
    }
    if (x - 2.0).abs() <= 0.25 {
        let e = x - 2.0;
        return e.ln_1p() + ln_gamma_1p_small(e);
    }
    if x >= STIRLING_MIN {
        return stirling(x);
    }
    let mut shifted = x;
    let mut prod = 1.0;
    while shifted < STIRLING_MIN {
        prod *= shifted;
        shifted += 1.0;
    }
    stirling(shifted) - prod.ln()
}

/// `Γ(x)` for `x > 0`, through `ln_gamma`.
pub fn gamma(x: f64) -> Result<f64> {
    ln_gamma(x).map(f64::exp)
}

/// Principal-branch-free `ln Γ(z)` for `Re z > 0`.
///
/// The imaginary part is only meaningful modulo `2π`; callers exponentiate.
pub fn ln_gamma_complex(z: Complex64) -> Result<Complex64> {
    if !(z.re > 0.0) || !z.is_finite() {
        return domain(format!("ln_gamma_complex requires Re z > 0, got {z}"));
    }
    let mut shifted = z;
    let mut log_prod = Complex64::new(0.0, 0.0);
    while shifted.re < STIRLING_MIN {
        log_prod += shifted.ln();
        shifted += 1.0;
    }
    let inv = shifted.inv();
    let inv2 = inv * inv;
    let mut series = Complex64::new(0.0, 0.0);
    for &c in STIRLING_COEFFS.iter().rev() {
        series = series * inv2 + c;
    }
    Ok((shifted - 0.5) * shifted.ln() - shifted + HALF_LN_TWO_PI + series * inv - log_prod)
}
