//! Special functions behind the NFA tails.
//!
//! Everything here is written against `f64` elementary functions only, so the
//! tail probabilities that drive the false-alarm guarantee can be audited
//! without trusting an external math library.
//!
//! Tails are computed in log space. [`ln_reg_upper_gamma_q`] stays finite for
//! arguments where `Q` itself underflows (below ~1e-308), which is what the
//! significance maps consume.

use std::f64::consts::{LN_2, PI};

use crate::error::{Error, Result};

/// Iteration cap for the series and continued fractions. Large shape
/// parameters get extra room, see [`iteration_cap`].
pub const MAX_ITER: usize = 500;

/// Relative convergence threshold for series and continued fractions.
pub const CONVERGENCE_EPS: f64 = 1e-15;

/// Lentz floor.
const TINY: f64 = 1e-300;

// Lanczos approximation, g = 607/128, 15 terms (Godfrey).
const LANCZOS_G: f64 = 607.0 / 128.0;
const LANCZOS_COEF: [f64; 15] = [
    0.999_999_999_999_997_1,
    57.156_235_665_862_92,
    -59.597_960_355_475_49,
    14.136_097_974_741_746,
    -0.491_913_816_097_620_2,
    3.399_464_998_481_189e-5,
    4.652_362_892_704_858e-5,
    -9.837_447_530_487_956e-5,
    1.580_887_032_249_125e-4,
    -2.102_644_417_241_049e-4,
    2.174_396_181_152_126_5e-4,
    -1.643_181_065_367_639e-4,
    8.441_822_398_385_275e-5,
    -2.619_083_840_158_141e-5,
    3.689_918_265_953_162e-6,
];

/// ln(2π)/2
const LN_SQRT_2PI: f64 = 0.918_938_533_204_672_8;

// Stirling series coefficients B_{2k} / (2k (2k-1)).
const STIRLING: [f64; 8] = [
    1.0 / 12.0,
    -1.0 / 360.0,
    1.0 / 1260.0,
    -1.0 / 1680.0,
    1.0 / 1188.0,
    -691.0 / 360_360.0,
    1.0 / 156.0,
    -3617.0 / 122_400.0,
];

fn iteration_cap(a: f64) -> usize {
    MAX_ITER + (10.0 * a.sqrt()) as usize
}

/// Natural log of the gamma function for `a > 0`.
pub fn ln_gamma(a: f64) -> Result<f64> {
    if !a.is_finite() || a <= 0.0 {
        return Err(Error::domain(
            "ln_gamma",
            format!("a = {a} must be finite and > 0"),
        ));
    }
    Ok(ln_gamma_positive(a))
}

fn ln_gamma_positive(a: f64) -> f64 {
    if a == 1.0 || a == 2.0 {
        return 0.0;
    }
    if a < 0.5 {
        // Reflection: Γ(a)Γ(1-a) = π / sin(πa).
        return (PI / (PI * a).sin()).ln() - ln_gamma_positive(1.0 - a);
    }
    if a >= 20.0 {
        return ln_gamma_stirling(a);
    }
    let x = a - 1.0;
    let mut sum = LANCZOS_COEF[0];
    for (i, c) in LANCZOS_COEF.iter().enumerate().skip(1) {
        sum += c / (x + i as f64);
    }
    let t = x + LANCZOS_G + 0.5;
    LN_SQRT_2PI + (x + 0.5) * t.ln() - t + sum.ln()
}

fn ln_gamma_stirling(a: f64) -> f64 {
    let inv = 1.0 / a;
    let inv2 = inv * inv;
    let mut corr = 0.0;
    let mut pow = inv;
    for c in STIRLING {
        corr += c * pow;
        pow *= inv2;
    }
    (a - 0.5) * a.ln() - a + LN_SQRT_2PI + corr
}

fn check_gamma_args(func: &'static str, a: f64, x: f64) -> Result<()> {
    if !a.is_finite() || a <= 0.0 {
        return Err(Error::domain(
            func,
            format!("shape a = {a} must be finite and > 0"),
        ));
    }
    if x.is_nan() || x < 0.0 {
        return Err(Error::domain(func, format!("x = {x} must be >= 0")));
    }
    Ok(())
}

/// `ln Q(a, x)` where `Q(a, x) = Γ(a, x) / Γ(a)`.
///
/// Power series for `P` when `x < a + 1`, modified Lentz continued fraction
/// for `Q` otherwise. Returns `-inf` only for `x = +inf`.
pub fn ln_reg_upper_gamma_q(a: f64, x: f64) -> Result<f64> {
    check_gamma_args("reg_upper_gamma_q", a, x)?;
    if x == 0.0 {
        return Ok(0.0);
    }
    if x.is_infinite() {
        return Ok(f64::NEG_INFINITY);
    }
    let ln_prefactor = a * x.ln() - x - ln_gamma_positive(a);
    if x < a + 1.0 {
        let p = (ln_prefactor + lower_series(a, x)?.ln()).exp();
        Ok((-p.min(1.0)).ln_1p())
    } else {
        Ok(ln_prefactor - upper_continued_fraction(a, x)?.ln())
    }
}

/// Regularized upper incomplete gamma `Q(a, x)`.
pub fn reg_upper_gamma_q(a: f64, x: f64) -> Result<f64> {
    Ok(ln_reg_upper_gamma_q(a, x)?.exp())
}

/// Regularized lower incomplete gamma `P(a, x) = 1 - Q(a, x)`.
pub fn reg_lower_gamma_p(a: f64, x: f64) -> Result<f64> {
    check_gamma_args("reg_lower_gamma_p", a, x)?;
    if x == 0.0 {
        return Ok(0.0);
    }
    if x.is_infinite() {
        return Ok(1.0);
    }
    let ln_prefactor = a * x.ln() - x - ln_gamma_positive(a);
    if x < a + 1.0 {
        Ok((ln_prefactor + lower_series(a, x)?.ln()).exp().min(1.0))
    } else {
        Ok(-(ln_prefactor - upper_continued_fraction(a, x)?.ln()).exp_m1())
    }
}

/// Σ_{n>=0} x^n / (a (a+1) ... (a+n)), so that P = x^a e^-x / Γ(a) * sum.
fn lower_series(a: f64, x: f64) -> Result<f64> {
    let mut ap = a;
    let mut term = 1.0 / a;
    let mut sum = term;
    for _ in 0..iteration_cap(a) {
        ap += 1.0;
        term *= x / ap;
        sum += term;
        if term.abs() < sum.abs() * CONVERGENCE_EPS {
            return Ok(sum);
        }
    }
    Err(Error::Convergence("incomplete gamma series"))
}

/// Denominator f of Q = x^a e^-x / Γ(a) / f, with
/// f = (x+1-a) - 1(1-a)/((x+3-a) - 2(2-a)/((x+5-a) - ...)).
fn upper_continued_fraction(a: f64, x: f64) -> Result<f64> {
    let mut b = x + 1.0 - a;
    let mut c = 1.0 / TINY;
    let mut d = 1.0 / b;
    let mut h = d;
    for i in 1..iteration_cap(a) {
        let an = -(i as f64) * (i as f64 - a);
        b += 2.0;
        d = an * d + b;
        if d.abs() < TINY {
            d = TINY;
        }
        c = b + an / c;
        if c.abs() < TINY {
            c = TINY;
        }
        d = 1.0 / d;
        let delta = d * c;
        h *= delta;
        if (delta - 1.0).abs() < CONVERGENCE_EPS {
            return Ok(1.0 / h);
        }
    }
    Err(Error::Convergence("incomplete gamma continued fraction"))
}

/// Complementary error function.
///
/// `|x| < 2`: erf from the all-positive series
/// `erf(x) = 2/√π e^{-x²} Σ 2^n x^{2n+1} / (2n+1)!!`.
/// `|x| >= 2`: even contraction of the Laplace continued fraction.
/// Negative arguments use `erfc(-x) = 2 - erfc(x)`.
pub fn erfc(x: f64) -> Result<f64> {
    if !x.is_finite() {
        return Err(Error::domain("erfc", format!("x = {x} must be finite")));
    }
    if x < 0.0 {
        return Ok(2.0 - erfc_nonneg(-x)?);
    }
    erfc_nonneg(x)
}

fn erfc_nonneg(x: f64) -> Result<f64> {
    const FRAC_2_SQRT_PI: f64 = std::f64::consts::FRAC_2_SQRT_PI;
    let x2 = x * x;
    if x < 2.0 {
        let mut term = x;
        let mut sum = x;
        let mut n = 0.0;
        loop {
            n += 1.0;
            term *= 2.0 * x2 / (2.0 * n + 1.0);
            sum += term;
            if term <= sum * CONVERGENCE_EPS * 0.1 {
                break;
            }
            if n > MAX_ITER as f64 {
                return Err(Error::Convergence("erf series"));
            }
        }
        let erf = FRAC_2_SQRT_PI * (-x2).exp() * sum;
        return Ok(1.0 - erf);
    }
    if x > 27.3 {
        // e^{-x²} underflows.
        return Ok(0.0);
    }
    // erfc(x) = 2x e^{-x²}/√π / (2x²+1 - 1·2/(2x²+5 - 3·4/(2x²+9 - ...)))
    let mut b = 2.0 * x2 + 1.0;
    let mut c = 1.0 / TINY;
    let mut d = 1.0 / b;
    let mut h = d;
    for n in 1..MAX_ITER {
        let nf = n as f64;
        let an = -(2.0 * nf - 1.0) * (2.0 * nf);
        b += 4.0;
        d = an * d + b;
        if d.abs() < TINY {
            d = TINY;
        }
        c = b + an / c;
        if c.abs() < TINY {
            c = TINY;
        }
        d = 1.0 / d;
        let delta = d * c;
        h *= delta;
        if (delta - 1.0).abs() < CONVERGENCE_EPS {
            return Ok(FRAC_2_SQRT_PI * x * (-x2).exp() * h);
        }
    }
    Err(Error::Convergence("erfc continued fraction"))
}

/// Chi-square survival function, `Q(dof/2, t/2)`.
pub fn chi2_sf(dof: f64, t: f64) -> Result<f64> {
    Ok(ln_chi2_sf(dof, t)?.exp())
}

pub fn ln_chi2_sf(dof: f64, t: f64) -> Result<f64> {
    if !dof.is_finite() || dof <= 0.0 {
        return Err(Error::domain("chi2_sf", format!("dof = {dof} must be > 0")));
    }
    if t.is_nan() || t < 0.0 {
        return Err(Error::domain("chi2_sf", format!("t = {t} must be >= 0")));
    }
    ln_reg_upper_gamma_q(0.5 * dof, 0.5 * t)
}

/// `ln C(n, k)`. Exact integer arithmetic while it fits in `u128`.
pub fn ln_choose(n: u64, k: u64) -> f64 {
    if k > n {
        return f64::NEG_INFINITY;
    }
    let k = k.min(n - k);
    let mut c: u128 = 1;
    for i in 0..k {
        // c * (n - i) / (i + 1) = C(n, i + 1), always an integer.
        match c.checked_mul(u128::from(n - i)) {
            Some(v) => c = v / u128::from(i + 1),
            None => {
                return ln_gamma_positive(n as f64 + 1.0)
                    - ln_gamma_positive(k as f64 + 1.0)
                    - ln_gamma_positive((n - k) as f64 + 1.0)
            }
        }
    }
    (c as f64).ln()
}

/// Continued fraction of the regularized incomplete beta (modified Lentz).
fn beta_continued_fraction(a: f64, b: f64, x: f64) -> Result<f64> {
    let qab = a + b;
    let qap = a + 1.0;
    let qam = a - 1.0;
    let mut c = 1.0;
    let mut d = 1.0 - qab * x / qap;
    if d.abs() < TINY {
        d = TINY;
    }
    d = 1.0 / d;
    let mut h = d;
    for m in 1..iteration_cap(a.max(b)) {
        let m = m as f64;
        let m2 = 2.0 * m;
        let aa = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1.0 + aa * d;
        if d.abs() < TINY {
            d = TINY;
        }
        c = 1.0 + aa / c;
        if c.abs() < TINY {
            c = TINY;
        }
        d = 1.0 / d;
        h *= d * c;
        let aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1.0 + aa * d;
        if d.abs() < TINY {
            d = TINY;
        }
        c = 1.0 + aa / c;
        if c.abs() < TINY {
            c = TINY;
        }
        d = 1.0 / d;
        let delta = d * c;
        h *= delta;
        if (delta - 1.0).abs() < CONVERGENCE_EPS {
            return Ok(h);
        }
    }
    Err(Error::Convergence("incomplete beta continued fraction"))
}

/// `ln P(Bin(n, p) >= k)`, through the identity
/// `P(Bin(n, p) >= k) = I_p(k, n - k + 1)`.
pub fn ln_binomial_tail(n: u64, k: u64, p: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::domain(
            "binomial_tail",
            format!("p = {p} not in [0, 1]"),
        ));
    }
    if k == 0 {
        return Ok(0.0);
    }
    if k > n || p == 0.0 {
        return Ok(f64::NEG_INFINITY);
    }
    if p == 1.0 {
        return Ok(0.0);
    }
    let a = k as f64;
    let b = (n - k + 1) as f64;
    let ln_p = p.ln();
    let ln_q = (-p).ln_1p();
    if p < (a + 1.0) / (a + b + 2.0) {
        // 1 / (a B(a, b)) = C(n, k)
        let ln_front = ln_choose(n, k) + a * ln_p + b * ln_q;
        Ok(ln_front + beta_continued_fraction(a, b, p)?.ln())
    } else {
        // I_p(a, b) = 1 - I_{1-p}(b, a); 1 / (b B(a, b)) = C(n, k - 1)
        let ln_front = ln_choose(n, k - 1) + a * ln_p + b * ln_q;
        let complement = (ln_front + beta_continued_fraction(b, a, 1.0 - p)?.ln()).exp();
        Ok((-complement.min(1.0)).ln_1p())
    }
}

pub fn binomial_tail(n: u64, k: u64, p: f64) -> Result<f64> {
    Ok(ln_binomial_tail(n, k, p)?.exp())
}

/// `ln(1/2)`, used by one-sided tails.
pub(crate) const LN_HALF: f64 = -LN_2;

#[cfg(test)]
mod tests {
    use super::*;

    fn rel(a: f64, b: f64) -> f64 {
        if a == b {
            0.0
        } else {
            (a - b).abs() / b.abs()
        }
    }

    #[test]
    fn ln_gamma_trivial_values() {
        assert_eq!(ln_gamma(1.0).unwrap(), 0.0);
        assert!(rel(ln_gamma(0.5).unwrap(), 0.572_364_942_924_700_1) < 1e-14);
        assert!(rel(ln_gamma(10.0).unwrap(), 362_880f64.ln()) < 1e-14);
    }

    #[test]
    fn ln_gamma_domain() {
        assert!(ln_gamma(0.0).is_err());
        assert!(ln_gamma(-1.5).is_err());
        assert!(ln_gamma(f64::NAN).is_err());
        assert!(ln_gamma(f64::INFINITY).is_err());
    }

    #[test]
    fn ln_gamma_regime_boundaries_are_continuous() {
        for a in [0.5, 20.0] {
            let lo = ln_gamma(a - 1e-9).unwrap();
            let hi = ln_gamma(a).unwrap();
            assert!((lo - hi).abs() < 1e-8, "{a}: {lo} vs {hi}");
        }
    }

    #[test]
    fn q_closed_forms() {
        assert!(rel(reg_upper_gamma_q(1.0, 2.0).unwrap(), (-2.0f64).exp()) < 1e-14);
        for a in [0.1, 0.5, 3.0, 40.0] {
            assert_eq!(reg_upper_gamma_q(a, 0.0).unwrap(), 1.0);
        }
        // Q(1/2, 4.5) = erfc(3/√2)
        assert!(
            rel(
                reg_upper_gamma_q(0.5, 4.5).unwrap(),
                0.002_699_796_063_260_19
            ) < 1e-10
        );
    }

    #[test]
    fn q_domain_errors() {
        assert!(reg_upper_gamma_q(0.0, 1.0).is_err());
        assert!(reg_upper_gamma_q(-1.0, 1.0).is_err());
        assert!(reg_upper_gamma_q(1.0, -1e-12).is_err());
        assert!(reg_upper_gamma_q(1.0, f64::NAN).is_err());
        assert_eq!(reg_upper_gamma_q(1.0, f64::INFINITY).unwrap(), 0.0);
    }

    #[test]
    fn log_tail_survives_underflow() {
        // Q(1/2, 2000) ~ e^-2000, far below f64 range.
        let ln_q = ln_reg_upper_gamma_q(0.5, 2000.0).unwrap();
        assert!(ln_q.is_finite());
        // Asymptotically Q(1/2, x) ~ e^-x / sqrt(pi x).
        let approx = -2000.0 - (PI * 2000.0).ln() / 2.0;
        assert!((ln_q - approx).abs() < 1e-3);
        assert_eq!(reg_upper_gamma_q(0.5, 2000.0).unwrap(), 0.0);
    }

    #[test]
    fn p_plus_q_is_one() {
        for &(a, x) in &[(0.5, 0.3), (2.0, 5.0), (10.0, 9.0), (10.0, 15.0)] {
            let s = reg_lower_gamma_p(a, x).unwrap() + reg_upper_gamma_q(a, x).unwrap();
            assert!((s - 1.0).abs() < 1e-14);
        }
    }

    #[test]
    fn erfc_trivial() {
        assert_eq!(erfc(0.0).unwrap(), 1.0);
        assert!((erfc(1.7).unwrap() + erfc(-1.7).unwrap() - 2.0).abs() < 1e-15);
        assert!(rel(erfc(3.0 / 2f64.sqrt()).unwrap(), 0.002_699_796_063_260_19) < 1e-12);
        assert!(erfc(f64::NAN).is_err());
        assert!(erfc(f64::NEG_INFINITY).is_err());
    }

    #[test]
    fn erfc_continuous_at_switch() {
        let lo = erfc(2.0 - 1e-12).unwrap();
        let hi = erfc(2.0).unwrap();
        assert!(rel(lo, hi) < 1e-10);
    }

    #[test]
    fn chi2_examples() {
        assert!(rel(chi2_sf(2.0, 4.0).unwrap(), (-2.0f64).exp()) < 1e-14);
        assert!(rel(chi2_sf(1.0, 9.0).unwrap(), 0.002_699_796_063_260_19) < 1e-10);
        assert_eq!(chi2_sf(7.0, 0.0).unwrap(), 1.0);
        assert!(chi2_sf(0.0, 1.0).is_err());
    }

    #[test]
    fn ln_choose_matches_small_table() {
        assert_eq!(ln_choose(10, 3), 120f64.ln());
        assert_eq!(ln_choose(5, 0), 0.0);
        assert_eq!(ln_choose(3, 4), f64::NEG_INFINITY);
        // beyond u128: falls back to ln_gamma
        let big = ln_choose(10_000, 5_000);
        assert!(big.is_finite() && big > 6900.0);
    }

    #[test]
    fn binomial_tail_edges() {
        assert_eq!(binomial_tail(10, 0, 0.3).unwrap(), 1.0);
        assert_eq!(binomial_tail(10, 11, 0.3).unwrap(), 0.0);
        assert_eq!(binomial_tail(10, 1, 0.0).unwrap(), 0.0);
        assert_eq!(binomial_tail(10, 10, 1.0).unwrap(), 1.0);
        assert!(binomial_tail(10, 1, 1.5).is_err());
        assert!(binomial_tail(10, 1, f64::NAN).is_err());
        // P(Bin(10, 0.1) >= 3), summed by hand from the pmf.
        assert!(rel(binomial_tail(10, 3, 0.1).unwrap(), 0.070_190_826_4) < 1e-9);
    }
}
