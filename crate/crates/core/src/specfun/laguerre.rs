//! Associated Laguerre polynomials `L_n^α(x)`.

/// `L_n^α(x)` by the upward three-term recurrence
/// `(k+1) L_{k+1} = (2k+1+α-x) L_k - (k+α) L_{k-1}`.
pub fn laguerre_assoc(n: usize, alpha: f64, x: f64) -> f64 {
    let mut prev = 1.0;
    if n == 0 {
        return prev;
    }
    let mut cur = 1.0 + alpha - x;
    for k in 1..n {
        let kf = k as f64;
        let next = ((2.0 * kf + 1.0 + alpha - x) * cur - (kf + alpha) * prev) / (kf + 1.0);
        prev = cur;
        cur = next;
    }
    cur
}

/// `[L_0^α(x), ..., L_n^α(x)]` in one sweep.
pub fn laguerre_assoc_all(n: usize, alpha: f64, x: f64) -> Vec<f64> {
    let mut out = Vec::with_capacity(n + 1);
    out.push(1.0);
    if n == 0 {
        return out;
    }
    out.push(1.0 + alpha - x);
    for k in 1..n {
        let kf = k as f64;
        let next = ((2.0 * kf + 1.0 + alpha - x) * out[k] - (kf + alpha) * out[k - 1]) / (kf + 1.0);
        out.push(next);
    }
    out
}

/// `x d/dx L_n^α(x)` from the two recurrence identities.
///
/// Returns `(lowering, raising)` where
/// `lowering = n L_n - (n+α) L_{n-1}` (zero for `n = 0`) and
/// `raising = (n+1) L_{n+1} - (n+α+1-x) L_n`.
pub fn laguerre_derivative_identities(n: usize, alpha: f64, x: f64) -> (f64, f64) {
    let l = laguerre_assoc_all(n + 1, alpha, x);
    let nf = n as f64;
    let lowering = if n == 0 {
        0.0
    } else {
        nf * l[n] - (nf + alpha) * l[n - 1]
    };
    let raising = (nf + 1.0) * l[n + 1] - (nf + alpha + 1.0 - x) * l[n];
    (lowering, raising)
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Explicit sum `Σ_k (-1)^k C(n+α, n-k) x^k / k!`, with the generalized
    /// binomial built as a running product.
    fn explicit_sum(n: usize, alpha: f64, x: f64) -> f64 {
        let mut total = 0.0;
        for k in 0..=n {
            // C(n+α, n-k) = Π_{j=1}^{n-k} (k + α + j) / j
            let mut binom = 1.0;
            for j in 1..=(n - k) {
                binom *= (k as f64 + alpha + j as f64) / j as f64;
            }
            let mut term = binom;
            for j in 1..=k {
                term *= x / j as f64;
            }
            if k % 2 == 1 {
                term = -term;
            }
            total += term;
        }
        total
    }

    #[test]
    fn low_orders() {
        assert_eq!(laguerre_assoc(0, 1.5, 3.0), 1.0);
        assert_eq!(laguerre_assoc(1, 1.5, 3.0), -0.5);
    }

    #[test]
    fn matches_explicit_sum() {
        let want = explicit_sum(5, 1.5, 2.0);
        let got = laguerre_assoc(5, 1.5, 2.0);
        assert!(((got - want) / want).abs() < 1e-12, "{got} vs {want}");
    }

    #[test]
    fn recurrence_consistency_sweep() {
        for &alpha in &[0.5, 1.5, 2.7] {
            for n in 0..=30 {
                let mut x = 0.25;
                while x <= 20.0 {
                    let a = laguerre_assoc(n, alpha, x);
                    let b = explicit_sum(n, alpha, x);
                    // The explicit sum cancels heavily for large x; scale by
                    // the largest term magnitude rather than the result.
                    let scale = b.abs().max(1e-300);
                    let mag: f64 = (0..=n)
                        .map(|k| explicit_sum_term_abs(n, alpha, x, k))
                        .fold(0.0, f64::max);
                    assert!(
                        (a - b).abs() <= 1e-10 * scale.max(mag * 1e-4),
                        "n={n} alpha={alpha} x={x}: {a} vs {b}"
                    );
                    x += 0.25;
                }
            }
        }
    }

    fn explicit_sum_term_abs(n: usize, alpha: f64, x: f64, k: usize) -> f64 {
        let mut binom = 1.0;
        for j in 1..=(n - k) {
            binom *= (k as f64 + alpha + j as f64) / j as f64;
        }
        let mut term = binom;
        for j in 1..=k {
            term *= x / j as f64;
        }
        term.abs()
    }

    #[test]
    fn derivative_branches() {
        let (lo, hi) = laguerre_derivative_identities(1, 1.5, 2.0);
        assert!((lo + 2.0).abs() < 1e-14);
        assert!((hi + 2.0).abs() < 1e-14);

        let (lo, _) = laguerre_derivative_identities(0, 1.5, 2.0);
        assert_eq!(lo, 0.0);

        // finite-difference oracle for x L'(x)
        let (n, alpha, x) = (4, 0.5, 1.0);
        let h = 1e-4;
        let d = (-laguerre_assoc(n, alpha, x + 2.0 * h) + 8.0 * laguerre_assoc(n, alpha, x + h)
            - 8.0 * laguerre_assoc(n, alpha, x - h)
            + laguerre_assoc(n, alpha, x - 2.0 * h))
            / (12.0 * h);
        let (lo, hi) = laguerre_derivative_identities(n, alpha, x);
        assert!((lo - hi).abs() < 1e-12);
        assert!((lo - x * d).abs() < 1e-9);
    }

    #[test]
    fn derivative_branches_agree_up_to_twenty() {
        for &alpha in &[0.5, 1.5, 2.7] {
            for n in 1..=20 {
                for &x in &[0.1, 1.0, 3.3, 7.5, 15.0] {
                    let (lo, hi) = laguerre_derivative_identities(n, alpha, x);
                    let scale = lo.abs().max(hi.abs()).max(1.0);
                    assert!((lo - hi).abs() <= 1e-10 * scale, "n={n} alpha={alpha} x={x}");
                }
            }
        }
    }
}
