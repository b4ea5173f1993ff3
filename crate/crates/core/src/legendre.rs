//! Legendre functions of half-odd-integer degree on the cut x ≥ 1.
//!
//! The series route to the second-kind two-parameter integral needs
//! P_{n−3/2}(x) for n = 0, 1, 2, …. Degrees ±1/2 reduce to complete
//! elliptic integrals of the argument built from
//!
//! ```text
//!   w = x + √(x²−1),          k′ = 1/w,   k = √(1 − 1/w²),
//!
//!   P_{1/2}(x)  = (2/π) √w · E(k)
//!   P_{−1/2}(x) = (2/π) K(k) / √w
//! ```
//!
//! and every other degree follows from the three-term recurrence
//!
//! ```text
//!   (ν+1) P_{ν+1}(x) = (2ν+1) x P_ν(x) − ν P_{ν−1}(x),
//! ```
//!
//! which is applied upward — the stable direction for x > 1, where P
//! grows and the discarded solution Q decays.

use crate::elliptic::{complete_e, complete_k, Modulus};
use crate::error::{Error, Result};
use crate::quad::integrate_1d;
use std::f64::consts::PI;

/// Degree selector: `HalfIntDegree(n)` addresses P of degree n − 3/2,
/// matching the index of the series term it multiplies. So n = 0, 1, 2
/// give P_{−3/2}, P_{−1/2}, P_{1/2}.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct HalfIntDegree(pub u32);

/// Largest argument accepted; far beyond any reachable reduced x, and
/// well inside the range where x²−1 carries full precision.
const X_MAX: f64 = 1e12;

fn check_x(x: f64) -> Result<()> {
    if !(1.0..=X_MAX).contains(&x) {
        return Err(Error::Domain(format!(
            "Legendre argument must satisfy 1 ≤ x ≤ {X_MAX:e} (got {x})"
        )));
    }
    Ok(())
}

/// (P_{1/2}(x), P_{−1/2}(x)) for x ≥ 1, via complete elliptic integrals.
pub(crate) fn halfint_base(x: f64) -> Result<(f64, f64)> {
    let w = x + ((x - 1.0) * (x + 1.0)).sqrt();
    let m = Modulus::from_complement(1.0 / w)?;
    let sw = w.sqrt();
    let p_half = (2.0 / PI) * sw * complete_e(m);
    let p_mhalf = (2.0 / PI) * complete_k(m)? / sw;
    Ok((p_half, p_mhalf))
}

/// One upward step: given q_j = P_{j−3/2} and q_{j−1} = P_{j−5/2},
/// returns q_{j+1} = P_{j−1/2}.
pub(crate) fn halfint_step(j: u32, x: f64, q_j: f64, q_jm1: f64) -> f64 {
    let jf = j as f64;
    ((2.0 * jf - 2.0) * x * q_j - (jf - 1.5) * q_jm1) / (jf - 0.5)
}

/// P_{n−3/2}(x) for n = `deg.0`, 1 ≤ x ≤ 1e12.
///
/// n = 0 uses the reflection P_{−ν−1} = P_ν, so P_{−3/2} = P_{1/2}.
pub fn legendre_p_halfint(deg: HalfIntDegree, x: f64) -> Result<f64> {
    check_x(x)?;
    if x == 1.0 {
        return Ok(1.0);
    }
    let (p_half, p_mhalf) = halfint_base(x)?;
    match deg.0 {
        0 => Ok(p_half),
        1 => Ok(p_mhalf),
        n => {
            let mut q_jm1 = p_half; // q_0 = P_{−3/2} = P_{1/2}
            let mut q_j = p_mhalf; // q_1 = P_{−1/2}
            for j in 1..n {
                let q_next = halfint_step(j, x, q_j, q_jm1);
                q_jm1 = q_j;
                q_j = q_next;
            }
            Ok(q_j)
        }
    }
}

/// Independent check value: Laplace's integral representation
///
/// ```text
///   P_ν(x) = (1/π) ∫₀^π (x + √(x²−1) cos θ)^ν dθ,   x ≥ 1,
/// ```
///
/// evaluated by adaptive quadrature at a fixed internal tolerance. Valid
/// for any real degree; slower but formula-independent of the elliptic
/// route above.
pub fn legendre_laplace_oracle(nu: f64, x: f64) -> Result<f64> {
    check_x(x)?;
    if !nu.is_finite() {
        return Err(Error::Domain(format!("degree must be finite (got {nu})")));
    }
    let s = ((x - 1.0) * (x + 1.0)).sqrt();
    let r = integrate_1d(|th: f64| (x + s * th.cos()).powf(nu), 0.0, PI, 1e-12)?;
    if !r.converged {
        return Err(Error::QuadratureBudget {
            context: "legendre_laplace_oracle",
            estimate: r.error_estimate,
        });
    }
    Ok(r.value / PI)
}
