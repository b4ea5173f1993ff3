//! Gauss hypergeometric series and the closed forms used by the
//! dimension-reduction step.
//!
//! The general entry point sums
//!
//! ```text
//!                    ∞   (a)_n (b)_n   z^n
//!   F(a, b; c; z) =  Σ   ----------- · ---
//!                   n=0     (c)_n       n!
//! ```
//!
//! term by term. The workhorse special case is
//!
//! ```text
//!   f0(z) = F(-1/2, -1/2; 1; z) = (2/π) [ 2E(√z) − (1−z) K(√z) ],
//! ```
//!
//! whose first two z-derivatives also collapse to complete elliptic
//! integrals. Those closed forms stay accurate arbitrarily close to
//! z = 1 where the series is useless, which is why the series refuses
//! that neighbourhood instead of limping through it.

use crate::elliptic::{complete_k_gap, Modulus, SeriesConfig};
use crate::error::{Error, Result};
use std::f64::consts::PI;

/// Upper parameters a, b and lower parameter c of F(a, b; c; z).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HyperParams {
    pub a: f64,
    pub b: f64,
    pub c: f64,
}

/// A partial sum together with how many terms produced it.
#[derive(Debug, Clone, Copy)]
pub struct SeriesValue {
    pub value: f64,
    pub terms: usize,
}

fn is_nonpositive_integer(x: f64) -> bool {
    x <= 0.0 && x.fract() == 0.0
}

/// Sums the Gauss series directly.
///
/// Accepted arguments: |z| < 0.95, where the ratio test gives honest
/// geometric convergence, plus |z| = 1 when c − a − b > 0 (the series
/// converges there, slowly — expect to need a generous `max_terms`).
/// If a or b is a nonpositive integer the series is a polynomial and
/// any finite z is accepted. The band 0.95 < |z| < 1 is refused:
/// callers in this crate always have an elliptic closed form available
/// there, and silently returning a half-converged sum would be worse
/// than an error.
pub fn gauss_2f1(params: HyperParams, z: f64, cfg: &SeriesConfig) -> Result<SeriesValue> {
    cfg.validate()?;
    let HyperParams { a, b, c } = params;
    if !(a.is_finite() && b.is_finite() && c.is_finite() && z.is_finite()) {
        return Err(Error::Domain("hypergeometric arguments must be finite".into()));
    }
    if is_nonpositive_integer(c) {
        return Err(Error::Domain(format!(
            "lower parameter c = {c} is a nonpositive integer (series has a pole)"
        )));
    }
    let polynomial = is_nonpositive_integer(a) || is_nonpositive_integer(b);
    if !polynomial {
        if z.abs() > 1.0 {
            return Err(Error::Domain(format!(
                "series diverges for |z| > 1 (got z = {z})"
            )));
        }
        if z.abs() == 1.0 {
            if c - a - b <= 0.0 {
                return Err(Error::Domain(format!(
                    "series at |z| = 1 requires c − a − b > 0 (got {})",
                    c - a - b
                )));
            }
        } else if z.abs() > 0.95 {
            return Err(Error::Domain(format!(
                "|z| = {} is too close to 1 for direct summation; use a closed form",
                z.abs()
            )));
        }
    }
    let mut sum = 1.0f64;
    let mut term = 1.0f64;
    let mut prev_small = false;
    for n in 0..cfg.max_terms {
        let nf = n as f64;
        term *= (a + nf) * (b + nf) / ((c + nf) * (1.0 + nf)) * z;
        sum += term;
        if term == 0.0 && polynomial {
            return Ok(SeriesValue { value: sum, terms: n + 1 });
        }
        let small = term.abs() < cfg.abs_tol.max(cfg.rel_tol * sum.abs());
        if small && prev_small {
            return Ok(SeriesValue { value: sum, terms: n + 1 });
        }
        prev_small = small;
    }
    Err(Error::NoConvergence {
        context: "gauss_2f1",
        terms: cfg.max_terms,
    })
}

/// Limit of `f0_prime` as z → 0⁺.
pub const F0_PRIME_AT_ZERO: f64 = 0.25;
/// Limit of `f0_double_prime` as z → 0⁺.
pub const F0_DOUBLE_PRIME_AT_ZERO: f64 = 1.0 / 32.0;

// Below this a short Maclaurin polynomial for f0′ is exact to machine
// precision and skips an AGM pass.
const F0P_SERIES_CUT: f64 = 1e-6;
// The f0″ closed form amplifies rounding like 1/z (the numerator is a
// near-cancelling O(z²) combination of O(z) quantities), so it hands a
// generous neighbourhood of 0 to the Maclaurin sum.
const F0PP_SERIES_CUT: f64 = 0.25;

fn check_unit_interval(z: f64, what: &str) -> Result<()> {
    if !(0.0..=1.0).contains(&z) {
        return Err(Error::Domain(format!("{what} requires 0 ≤ z ≤ 1 (got {z})")));
    }
    Ok(())
}

/// f0(z) = F(−1/2, −1/2; 1; z) via its elliptic closed form; valid on
/// the full closed interval 0 ≤ z ≤ 1.
pub fn f0(z: f64) -> Result<f64> {
    check_unit_interval(z, "f0")?;
    if z == 0.0 {
        return Ok(1.0);
    }
    if z == 1.0 {
        // (1−z)K vanishes against the log divergence of K.
        return Ok(4.0 / PI);
    }
    // 2E − (1−z)K = (1+z)K − 2(K−E)
    let (k, gap) = complete_k_gap(Modulus::new(z.sqrt())?)?;
    Ok((2.0 / PI) * ((1.0 + z) * k - 2.0 * gap))
}

/// df0/dz = [E(√z) − (1−z)K(√z)] / (πz) for 0 < z ≤ 1, evaluated as
/// [zK − (K−E)]/(πz) — both terms O(z), so no precision is lost at
/// small z.
///
/// The z → 0 limit is finite (`F0_PRIME_AT_ZERO`) but z = 0 itself is
/// rejected so the caller decides whether a limit value is meaningful.
pub fn f0_prime(z: f64) -> Result<f64> {
    check_unit_interval(z, "f0_prime")?;
    if z == 0.0 {
        return Err(Error::Domain(
            "f0_prime(0) is a removable limit; use F0_PRIME_AT_ZERO".into(),
        ));
    }
    if z < F0P_SERIES_CUT {
        return Ok(0.25 + z * (1.0 / 32.0 + z * (3.0 / 256.0 + z * (25.0 / 4096.0))));
    }
    if z == 1.0 {
        return Ok(1.0 / PI);
    }
    let (k, gap) = complete_k_gap(Modulus::new(z.sqrt())?)?;
    Ok((z * k - gap) / (PI * z))
}

/// d²f0/dz² = [(2−z)K(√z) − 2E(√z)] / (2πz²) for 0 < z < 1, evaluated
/// as [2(K−E) − zK]/(2πz²) above `F0PP_SERIES_CUT` and by the Maclaurin
/// series Σ j(j−1)cⱼ z^{j−2} below it (cⱼ the coefficients of f0 — all
/// positive, geometric tail).
///
/// Diverges logarithmically as z → 1; the z → 0 limit is
/// `F0_DOUBLE_PRIME_AT_ZERO`.
pub fn f0_double_prime(z: f64) -> Result<f64> {
    check_unit_interval(z, "f0_double_prime")?;
    if z == 0.0 {
        return Err(Error::Domain(
            "f0_double_prime(0) is a removable limit; use F0_DOUBLE_PRIME_AT_ZERO".into(),
        ));
    }
    if z == 1.0 {
        return Err(Error::Domain("f0_double_prime diverges at z = 1".into()));
    }
    if z < F0PP_SERIES_CUT {
        // cⱼ = ((−1/2)ⱼ/j!)²; d tracks (−1/2)ⱼ/j!.
        let mut d = 1.0f64;
        let mut sum = 0.0f64;
        let mut zp = 1.0f64; // z^{j−2}
        for j in 1..200usize {
            let jf = j as f64;
            d *= (jf - 1.5) / jf;
            if j >= 2 {
                let term = (j * (j - 1)) as f64 * d * d * zp;
                sum += term;
                if term < f64::EPSILON * sum {
                    break;
                }
                zp *= z;
            }
        }
        return Ok(sum);
    }
    let (k, gap) = complete_k_gap(Modulus::new(z.sqrt())?)?;
    Ok((2.0 * gap - z * k) / (2.0 * PI * z * z))
}
