//! Classical complete elliptic integrals in the modulus convention,
//! their modulus derivatives, and the Jacobi dn function.
//!
//! ```text
//! K(k) = ∫₀^{π/2} dθ / √(1 − k² sin²θ)
//! E(k) = ∫₀^{π/2} √(1 − k² sin²θ) dθ
//! ```
//!
//! Both are computed from the arithmetic-geometric mean, which converges
//! quadratically and delivers full double precision in a handful of
//! iterations:
//!
//! ```text
//! a₀ = 1, b₀ = k′, c₀ = k
//! aₙ₊₁ = (aₙ+bₙ)/2,  bₙ₊₁ = √(aₙbₙ),  cₙ₊₁ = (aₙ−bₙ)/2
//! K = π / (2·lim aₙ),   E = K·(1 − Σₙ 2^{n−1} cₙ²)
//! ```

use crate::error::{Error, Result};
use crate::quad;

/// Elliptic modulus k with its cached complement k′ = √(1−k²).
///
/// Constructing through [`Modulus::new`] or [`Modulus::from_complement`]
/// keeps k² + k′² = 1 at working precision; near either end of [0,1] the
/// given component is stored exactly and only the other one is derived.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Modulus {
    k: f64,
    k_prime: f64,
}

impl Modulus {
    /// Builds from the modulus k, 0 ≤ k ≤ 1.
    pub fn new(k: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&k) {
            return Err(Error::Domain(format!(
                "modulus must satisfy 0 <= k <= 1 (got {k})"
            )));
        }
        // (1-k)(1+k) keeps the complement accurate as k -> 1.
        let k_prime = ((1.0 - k) * (1.0 + k)).sqrt();
        Ok(Self { k, k_prime })
    }

    /// Builds from the complementary modulus k′, storing it exactly.
    ///
    /// Prefer this when k′ is the quantity known accurately (e.g. from a
    /// cancellation-free formula) and k itself is close to 1.
    pub fn from_complement(k_prime: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&k_prime) {
            return Err(Error::Domain(format!(
                "complementary modulus must satisfy 0 <= k' <= 1 (got {k_prime})"
            )));
        }
        let k = ((1.0 - k_prime) * (1.0 + k_prime)).sqrt();
        Ok(Self { k, k_prime })
    }

    pub fn k(&self) -> f64 {
        self.k
    }

    pub fn k_prime(&self) -> f64 {
        self.k_prime
    }
}

/// Truncation limits and tolerances governing series evaluation.
///
/// A series terminates once two consecutive terms satisfy both
/// |term| < `abs_tol` and |term| < `rel_tol`·|partial sum|; exceeding
/// `max_terms` without that is reported as non-convergence.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeriesConfig {
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub max_terms: usize,
}

impl Default for SeriesConfig {
    fn default() -> Self {
        Self {
            rel_tol: 1e-13,
            abs_tol: 1e-15,
            max_terms: 600,
        }
    }
}

impl SeriesConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.rel_tol > 0.0) || !(self.abs_tol > 0.0) || self.max_terms == 0 {
            return Err(Error::Domain(
                "series tolerances must be positive and max_terms nonzero".into(),
            ));
        }
        Ok(())
    }
}

const AGM_MAX_ITER: usize = 40;

/// AGM of (1, b) for b in (0, 1]; converges to ~1 ulp.
fn agm(b0: f64) -> f64 {
    let (mut a, mut b) = (1.0f64, b0);
    for _ in 0..AGM_MAX_ITER {
        if a - b <= f64::EPSILON * a {
            break;
        }
        let an = 0.5 * (a + b);
        b = (a * b).sqrt();
        a = an;
    }
    0.5 * (a + b)
}

/// AGM chain carrying the cₙ sum needed by E; returns (K, σ) with
/// E = K(1 − σ). σ is a sum of positive terms, so K − E = K·σ keeps
/// machine-level *relative* accuracy even when it is tiny — callers
/// that would otherwise subtract two near-equal elliptic integrals
/// should be written in terms of the gap instead.
fn agm_k_sigma(k: f64, k_prime: f64) -> (f64, f64) {
    let (mut a, mut b) = (1.0f64, k_prime);
    let mut sum = 0.5 * k * k; // 2^{-1} c0²
    let mut pow2 = 1.0f64;
    for _ in 0..AGM_MAX_ITER {
        let c = 0.5 * (a - b);
        if c.abs() <= f64::EPSILON * a {
            break;
        }
        sum += pow2 * c * c;
        pow2 *= 2.0;
        let an = 0.5 * (a + b);
        b = (a * b).sqrt();
        a = an;
    }
    let kk = std::f64::consts::FRAC_PI_2 / (0.5 * (a + b));
    (kk, sum)
}

/// (K, K − E) for k < 1; see [`agm_k_sigma`] on why the gap is returned
/// rather than E itself.
pub(crate) fn complete_k_gap(m: Modulus) -> Result<(f64, f64)> {
    if m.k_prime == 0.0 {
        return Err(Error::Domain("K(k) diverges at k = 1".into()));
    }
    let (kk, sigma) = agm_k_sigma(m.k, m.k_prime);
    Ok((kk, kk * sigma))
}

/// Complete elliptic integral of the first kind K(k).
///
/// Diverges logarithmically as k → 1, so k = 1 is rejected.
pub fn complete_k(m: Modulus) -> Result<f64> {
    if m.k_prime == 0.0 {
        return Err(Error::Domain("K(k) diverges at k = 1".into()));
    }
    Ok(std::f64::consts::FRAC_PI_2 / agm(m.k_prime))
}

/// Complete elliptic integral of the second kind E(k).
///
/// Total on [0,1]: E(0) = π/2, E(1) = 1.
pub fn complete_e(m: Modulus) -> f64 {
    if m.k_prime == 0.0 {
        return 1.0;
    }
    let (kk, sigma) = agm_k_sigma(m.k, m.k_prime);
    kk * (1.0 - sigma)
}

/// dK/dk = E/(k·k′²) − K/k, for 0 < k < 1, evaluated as
/// K(k² − σ)/(k·k′²) so small k costs no precision.
pub fn complete_k_deriv(m: Modulus) -> Result<f64> {
    if m.k == 0.0 || m.k_prime == 0.0 {
        return Err(Error::Domain(
            "dK/dk requires 0 < k < 1 (the k → 0 limit is 0)".into(),
        ));
    }
    let (kk, sigma) = agm_k_sigma(m.k, m.k_prime);
    Ok(kk * (m.k * m.k - sigma) / (m.k * m.k_prime * m.k_prime))
}

/// dE/dk = (E − K)/k = −K·σ/k, for 0 < k < 1.
///
/// The removable k → 0 limit is 0; callers wanting it should special-case
/// k = 0 rather than rely on the small-k value underflowing gracefully.
pub fn complete_e_deriv(m: Modulus) -> Result<f64> {
    if m.k == 0.0 || m.k_prime == 0.0 {
        return Err(Error::Domain(
            "dE/dk requires 0 < k < 1 (the k → 0 limit is 0)".into(),
        ));
    }
    let (kk, sigma) = agm_k_sigma(m.k, m.k_prime);
    Ok(-(kk * sigma) / m.k)
}

/// Jacobi dn(u, k) by the descending Landen transformation.
///
/// The AGM chain runs forward, then the amplitude is recovered backward:
///
/// ```text
/// φ_N = 2^N a_N u,   φ_{n-1} = (φ_n + asin((c_n/a_n) sin φ_n)) / 2
/// dn  = √(k′² + k² cos²φ₀)
/// ```
///
/// u is reduced modulo the period 2K(k) first. Domain: 0 ≤ k < 1.
pub fn jacobi_dn(u: f64, m: Modulus) -> Result<f64> {
    if !u.is_finite() {
        return Err(Error::Domain(format!("dn argument must be finite (got {u})")));
    }
    if m.k == 0.0 {
        return Ok(1.0); // dn(u, 0) ≡ 1
    }
    if m.k_prime == 0.0 {
        return Err(Error::Domain(
            "dn via the Landen chain requires k < 1".into(),
        ));
    }
    let kk = complete_k(m)?;
    let u_red = u.rem_euclid(2.0 * kk);

    let mut a_seq = vec![1.0f64];
    let mut c_seq = vec![m.k];
    let mut b = m.k_prime;
    while *c_seq.last().unwrap() > f64::EPSILON * a_seq.last().unwrap() {
        let a = *a_seq.last().unwrap();
        let an = 0.5 * (a + b);
        let cn = 0.5 * (a - b);
        b = (a * b).sqrt();
        a_seq.push(an);
        c_seq.push(cn);
        if a_seq.len() > AGM_MAX_ITER {
            break;
        }
    }
    let n_last = a_seq.len() - 1;
    let mut phi = (2.0f64).powi(n_last as i32) * a_seq[n_last] * u_red;
    for n in (1..=n_last).rev() {
        let s = (c_seq[n] / a_seq[n] * phi.sin()).clamp(-1.0, 1.0);
        phi = 0.5 * (phi + s.asin());
    }
    // k′² + k²cos²φ is 1 − k²sin²φ rearranged as a sum of positives.
    let c = m.k * phi.cos();
    Ok((m.k_prime * m.k_prime + c * c).sqrt())
}

/// ∫₀^{K(k)} dn^{2·m_exp}(u, k) du by adaptive quadrature.
///
/// m_exp = 0 gives K, m_exp = 1 gives E; higher even moments feed the
/// Legendre-function identity checks. A validation path, not a
/// production one, hence quadrature rather than recurrences.
pub fn dn_even_moment(m_exp: u32, m: Modulus, cfg: &SeriesConfig) -> Result<f64> {
    cfg.validate()?;
    if m_exp > 1_000_000 {
        return Err(Error::Domain(format!("moment order too large ({m_exp})")));
    }
    let kk = complete_k(m)?;
    let tol = cfg.rel_tol.max(cfg.abs_tol).max(1e-14);
    let p = 2 * m_exp as i32;
    let r = quad::integrate_1d(
        |u| jacobi_dn(u, m).map_or(f64::NAN, |d| d.powi(p)),
        0.0,
        kk,
        tol,
    )?;
    if !r.converged {
        return Err(Error::QuadratureBudget {
            context: "dn_even_moment",
            estimate: r.error_estimate,
        });
    }
    Ok(r.value)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::FRAC_PI_2;

    fn rel(a: f64, b: f64) -> f64 {
        (a - b).abs() / b.abs().max(1.0)
    }

    /// Series oracle: K = (π/2)·Σ [(½)ₙ/n!]² k^{2n}, E likewise with a
    /// (−½)ₙ(½)ₙ numerator. Independent of the AGM path.
    fn series_k(k: f64) -> f64 {
        let z = k * k;
        let mut term = 1.0;
        let mut sum = 1.0;
        for n in 0..2000 {
            let nf = n as f64;
            let h = (0.5 + nf) / (1.0 + nf);
            term *= h * h * z;
            sum += term;
            if term < 1e-18 * sum {
                break;
            }
        }
        FRAC_PI_2 * sum
    }

    fn series_e(k: f64) -> f64 {
        let z = k * k;
        let mut term = 1.0;
        let mut sum = 1.0;
        for n in 0..2000 {
            let nf = n as f64;
            term *= (nf - 0.5) * (nf + 0.5) / ((1.0 + nf) * (1.0 + nf)) * z;
            sum += term;
            if term.abs() < 1e-18 * sum.abs() {
                break;
            }
        }
        FRAC_PI_2 * sum
    }

    #[test]
    fn modulus_construction() {
        let m = Modulus::new(0.6).unwrap();
        assert_eq!(m.k(), 0.6);
        assert!((m.k_prime() - 0.8).abs() < 1e-15);
        let mc = Modulus::from_complement(0.8).unwrap();
        assert_eq!(mc.k_prime(), 0.8);
        assert!((mc.k() - 0.6).abs() < 1e-15);
        assert!(Modulus::new(-0.1).is_err());
        assert!(Modulus::new(1.0001).is_err());
        assert!(Modulus::new(f64::NAN).is_err());
    }

    #[test]
    fn k_and_e_trivial_values() {
        let m0 = Modulus::new(0.0).unwrap();
        assert_eq!(complete_k(m0).unwrap(), FRAC_PI_2);
        assert_eq!(complete_e(m0), FRAC_PI_2);
        let m1 = Modulus::new(1.0).unwrap();
        assert!(complete_k(m1).is_err());
        assert_eq!(complete_e(m1), 1.0);
    }

    #[test]
    fn k_and_e_against_series_oracle() {
        // Frozen values computed with the series oracle above:
        //   K(0.5) = 1.6857503548125963   E(0.5) = 1.4674622093394272
        let m = Modulus::new(0.5).unwrap();
        let kk = complete_k(m).unwrap();
        let ee = complete_e(m);
        assert!(rel(kk, 1.685_750_354_812_596_3) < 1e-15, "K(0.5) = {kk}");
        assert!(rel(ee, 1.467_462_209_339_427_2) < 1e-15, "E(0.5) = {ee}");
        for &k in &[0.05, 0.2, 0.35, 0.5, 0.65, 0.8, 0.9, 0.97] {
            let m = Modulus::new(k).unwrap();
            assert!(rel(complete_k(m).unwrap(), series_k(k)) < 2e-15, "K({k})");
            assert!(rel(complete_e(m), series_e(k)) < 2e-15, "E({k})");
        }
    }

    #[test]
    fn legendre_relation() {
        // E·K' + E'·K − K·K' = π/2 ties K and E together at every modulus.
        for &k in &[0.1, 0.3, 0.5, 0.7, 0.9] {
            let m = Modulus::new(k).unwrap();
            let mc = Modulus::from_complement(k).unwrap();
            let lhs = complete_e(m) * complete_k(mc).unwrap()
                + complete_e(mc) * complete_k(m).unwrap()
                - complete_k(m).unwrap() * complete_k(mc).unwrap();
            assert!((lhs - FRAC_PI_2).abs() < 1e-14, "k={k}: {lhs}");
        }
    }

    #[test]
    fn k_e_monotonicity() {
        let mut prev_k = complete_k(Modulus::new(0.0).unwrap()).unwrap();
        let mut prev_e = complete_e(Modulus::new(0.0).unwrap());
        for i in 1..100 {
            let k = i as f64 / 100.0;
            let m = Modulus::new(k).unwrap();
            let kk = complete_k(m).unwrap();
            let ee = complete_e(m);
            assert!(kk > prev_k, "K not increasing at k={k}");
            assert!(ee < prev_e, "E not decreasing at k={k}");
            prev_k = kk;
            prev_e = ee;
        }
    }

    #[test]
    fn derivative_closed_forms_match_finite_differences() {
        let h = 1e-6;
        for &k in &[0.2, 0.5, 0.8] {
            let num_k = (complete_k(Modulus::new(k + h).unwrap()).unwrap()
                - complete_k(Modulus::new(k - h).unwrap()).unwrap())
                / (2.0 * h);
            let num_e = (complete_e(Modulus::new(k + h).unwrap())
                - complete_e(Modulus::new(k - h).unwrap()))
                / (2.0 * h);
            let m = Modulus::new(k).unwrap();
            assert!(rel(complete_k_deriv(m).unwrap(), num_k) < 1e-8, "dK/dk at {k}");
            assert!(rel(complete_e_deriv(m).unwrap(), num_e) < 1e-8, "dE/dk at {k}");
        }
    }

    #[test]
    fn derivative_domain_and_small_k_limit() {
        assert!(complete_e_deriv(Modulus::new(0.0).unwrap()).is_err());
        assert!(complete_k_deriv(Modulus::new(1.0).unwrap()).is_err());
        // dE/dk → 0 as k → 0: at k = 1e-8 the value is ~ -πk/4.
        let d = complete_e_deriv(Modulus::new(1e-8).unwrap()).unwrap();
        assert!(d.abs() < 1e-7, "dE/dk near 0 = {d}");
    }

    #[test]
    fn dn_basics() {
        let m = Modulus::new(0.0).unwrap();
        assert_eq!(jacobi_dn(3.7, m).unwrap(), 1.0);
        let m = Modulus::new(0.6).unwrap();
        assert!((jacobi_dn(0.0, m).unwrap() - 1.0).abs() < 1e-15);
        // dn(K, k) = k'
        let kk = complete_k(m).unwrap();
        assert!(rel(jacobi_dn(kk, m).unwrap(), 0.8) < 1e-12);
        assert!(jacobi_dn(f64::INFINITY, m).is_err());
        assert!(jacobi_dn(1.0, Modulus::new(1.0).unwrap()).is_err());
    }

    #[test]
    fn dn_satisfies_defining_inversion() {
        // Oracle: dn(u,k) = √(1 − k² sin²φ) where u = F(φ, k); invert the
        // incomplete integral numerically (bisection on φ) and compare.
        let k: f64 = 0.6;
        let m = Modulus::new(k).unwrap();
        let incomplete_f = |phi: f64| {
            // Simpson on [0, phi] with fine fixed grid; plenty for 1e-12.
            let n = 20_000;
            let h = phi / n as f64;
            let f = |t: f64| 1.0 / (1.0 - k * k * t.sin() * t.sin()).sqrt();
            let mut s = f(0.0) + f(phi);
            for i in 1..n {
                let w = if i % 2 == 1 { 4.0 } else { 2.0 };
                s += w * f(i as f64 * h);
            }
            s * h / 3.0
        };
        for &u in &[0.3, 0.9, 1.4] {
            let (mut lo, mut hi) = (0.0f64, FRAC_PI_2);
            for _ in 0..80 {
                let mid = 0.5 * (lo + hi);
                if incomplete_f(mid) < u {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            let phi = 0.5 * (lo + hi);
            let expected = (1.0 - k * k * phi.sin() * phi.sin()).sqrt();
            assert!(
                rel(jacobi_dn(u, m).unwrap(), expected) < 1e-11,
                "dn({u}, {k})"
            );
        }
    }

    #[test]
    fn dn_periodicity() {
        let m = Modulus::new(0.8).unwrap();
        let kk = complete_k(m).unwrap();
        for &u in &[0.2, 1.1, 2.9] {
            let base = jacobi_dn(u, m).unwrap();
            assert!((jacobi_dn(u + 2.0 * kk, m).unwrap() - base).abs() < 1e-12);
            assert!((jacobi_dn(u - 4.0 * kk, m).unwrap() - base).abs() < 1e-12);
        }
    }

    #[test]
    fn dn_moments_reduce_to_k_and_e() {
        let cfg = SeriesConfig::default();
        for &k in &[0.3, 0.6, 0.9] {
            let m = Modulus::new(k).unwrap();
            let m0 = dn_even_moment(0, m, &cfg).unwrap();
            let m1 = dn_even_moment(1, m, &cfg).unwrap();
            assert!(rel(m0, complete_k(m).unwrap()) < 1e-12, "moment 0 at {k}");
            assert!(rel(m1, complete_e(m)) < 1e-12, "moment 1 at {k}");
        }
    }

    #[test]
    fn agm_value_spot_check() {
        // AGM(1, √2/2) relates to the lemniscatic K: K(1/√2) = π/(2·agm).
        let kk = complete_k(Modulus::new(std::f64::consts::FRAC_1_SQRT_2).unwrap()).unwrap();
        // Frozen from the series oracle.
        assert!(rel(kk, 1.854_074_677_301_371_9) < 1e-15);
    }
}
