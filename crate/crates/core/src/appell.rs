//! The fourth Appell double hypergeometric series and its elliptic
//! factorization on the surface the reduction lands on.
//!
//! The general series is
//!
//! ```text
//!                       ∞   ∞   (a)_{m+n} (b)_{m+n}   X^m  Y^n
//!   F4(a,b; c,c′; X,Y) = Σ   Σ  ------------------- · --- ·---
//!                      m=0 n=0     (c)_m (c′)_n        m!   n!
//! ```
//!
//! convergent for √X + √Y < 1. When the arguments lie on the quadric
//! X = u(1−v), Y = v(1−u) a classical expansion factorizes F4 into
//! products of Gauss functions of u and v separately, weighted by
//! (1+a+b−c−c′)_r. For the parameters this crate needs,
//! a = b = −1/2 and c = c′ = 1, that Pochhammer is (−2)_r, so the
//! expansion truncates after three terms:
//!
//! ```text
//!   F4 = f0(u)·f0(v) − 8·g1(u)·g1(v) + 16·g2(u)·g2(v),
//!
//!   g1(z) = z·f0′(z),   g2(z) = z²·f0″(z),
//! ```
//!
//! with f0 from [`crate::hyper2f1`]. Everything here — the coefficients
//! 1, −8, 16 above all else — is cross-checked against the raw double
//! series and an independent bilinear form in K and E; see `FINDINGS.md`
//! for why those coefficients deserve that much suspicion.

use crate::elliptic::{complete_e, complete_k, complete_k_gap, Modulus, SeriesConfig};
use crate::error::{Error, Result};
use crate::hyper2f1::{f0, f0_double_prime, f0_prime, F0_PRIME_AT_ZERO};
use std::f64::consts::PI;

/// Argument pair of F4, checked against the convergence condition
/// √X + √Y < 1 at construction.
#[derive(Debug, Clone, Copy)]
pub struct F4Args {
    x: f64,
    y: f64,
}

impl F4Args {
    pub fn new(x: f64, y: f64) -> Result<Self> {
        if !(x >= 0.0 && y >= 0.0) || !x.is_finite() || !y.is_finite() {
            return Err(Error::Domain(format!(
                "F4 arguments must be finite and nonnegative (got X = {x}, Y = {y})"
            )));
        }
        if x.sqrt() + y.sqrt() >= 1.0 {
            return Err(Error::Divergence(format!(
                "F4 series diverges for √X + √Y ≥ 1 (got {})",
                x.sqrt() + y.sqrt()
            )));
        }
        Ok(Self { x, y })
    }

    pub fn x(&self) -> f64 {
        self.x
    }

    pub fn y(&self) -> f64 {
        self.y
    }
}

// Arguments below this are summed as a single Gauss row: the other
// variable's exponent never leaves n = 0 at f64 precision.
const AXIS_EPS: f64 = 1e-150;

/// A value held as val·2^exp so diagonal seeds like Y^s survive far
/// below the normal f64 range.
#[derive(Clone, Copy)]
struct Scaled {
    val: f64,
    exp: i32,
}

fn pow2(n: i32) -> f64 {
    2f64.powi(n)
}

impl Scaled {
    fn one() -> Self {
        Scaled { val: 1.0, exp: 0 }
    }

    fn renorm(&mut self) {
        if self.val == 0.0 {
            self.exp = 0;
            return;
        }
        while self.val.abs() > 1e100 {
            self.val *= pow2(-333);
            self.exp += 333;
        }
        while self.val.abs() < 1e-100 {
            self.val *= pow2(333);
            self.exp -= 333;
        }
    }

    fn mul(&mut self, f: f64) {
        self.val *= f;
        self.renorm();
    }

    fn to_f64(self) -> f64 {
        // Apply the negative part first so intermediate products cannot
        // overflow on the way to a representable result.
        let e1 = self.exp.clamp(-900, 900);
        let r = self.val * pow2(e1);
        let rest = self.exp - e1;
        if rest == 0 {
            r
        } else {
            r * pow2(rest.clamp(-1100, 1023))
        }
    }
}

fn is_nonpositive_integer(x: f64) -> bool {
    x <= 0.0 && x.fract() == 0.0
}

/// Single-row fallback: Σ (a)_n(b)_n/((c)_n n!) z^n with |z| < 1.
fn row_series(a: f64, b: f64, c: f64, z: f64, cfg: &SeriesConfig) -> Result<SeriesValueRaw> {
    let mut sum = 1.0f64;
    let mut term = 1.0f64;
    let mut prev_small = false;
    for n in 0..cfg.max_terms {
        let nf = n as f64;
        term *= (a + nf) * (b + nf) / ((c + nf) * (1.0 + nf)) * z;
        sum += term;
        let small = term.abs() < cfg.abs_tol.max(cfg.rel_tol * sum.abs());
        if small && prev_small {
            return Ok(SeriesValueRaw { value: sum, terms: n + 1 });
        }
        prev_small = small;
    }
    Err(Error::NoConvergence {
        context: "f4_series",
        terms: cfg.max_terms,
    })
}

struct SeriesValueRaw {
    value: f64,
    terms: usize,
}

/// Sums the F4 double series by anti-diagonals m + n = s.
///
/// Each diagonal is seeded at its (0, s) corner with the exactly-scaled
/// value (a)_s(b)_s/((c′)_s s!)·Y^s — held as a mantissa–exponent pair,
/// since Y^s underflows f64 long before the diagonal's interior terms
/// become negligible — and walked to the (s, 0) corner by term ratios.
/// `cfg.max_terms` bounds the number of diagonals; the returned term
/// count is the number of scalar terms actually accumulated.
pub fn f4_series(
    a: f64,
    b: f64,
    c: f64,
    c2: f64,
    args: F4Args,
    cfg: &SeriesConfig,
) -> Result<crate::hyper2f1::SeriesValue> {
    cfg.validate()?;
    if is_nonpositive_integer(c) || is_nonpositive_integer(c2) {
        return Err(Error::Domain(format!(
            "lower parameters must not be nonpositive integers (got c = {c}, c′ = {c2})"
        )));
    }
    let (x, y) = (args.x, args.y);
    if y < AXIS_EPS {
        let r = row_series(a, b, c, x, cfg)?;
        return Ok(crate::hyper2f1::SeriesValue { value: r.value, terms: r.terms });
    }
    if x < AXIS_EPS {
        let r = row_series(a, b, c2, y, cfg)?;
        return Ok(crate::hyper2f1::SeriesValue { value: r.value, terms: r.terms });
    }

    let mut total = 0.0f64;
    let mut terms: usize = 0;
    let mut prev_small = false;
    // r_s = (a)_s (b)_s / ((c′)_s s!) and Y^s, both scaled.
    let mut r = Scaled::one();
    let mut pow_y = Scaled::one();
    for s in 0..cfg.max_terms {
        let sf = s as f64;
        if s > 0 {
            r.mul((a + sf - 1.0) * (b + sf - 1.0) / ((c2 + sf - 1.0) * sf));
            pow_y.mul(y);
        }
        // Walk the diagonal from (m, n) = (0, s) to (s, 0) in the scaled
        // frame; acc and cur share one exponent.
        let mut cur = Scaled {
            val: r.val * pow_y.val,
            exp: r.exp + pow_y.exp,
        };
        cur.renorm();
        let mut acc = cur.val;
        let mut frame = cur.exp;
        let mut cur_val = cur.val;
        for m in 0..s {
            let (mf, nf) = (m as f64, (s - m) as f64);
            cur_val *= (c2 + nf - 1.0) * nf * x / ((c + mf) * (mf + 1.0) * y);
            // Rescale only downward: cur and acc shrink together safely,
            // while a vanishing cur is already negligible against acc.
            while cur_val.abs() > 1e100 {
                cur_val *= pow2(-333);
                acc *= pow2(-333);
                frame += 333;
            }
            acc += cur_val;
        }
        let diag = Scaled { val: acc, exp: frame }.to_f64();
        if !diag.is_finite() {
            return Err(Error::Divergence(
                "F4 diagonal sum overflowed; arguments too close to the convergence boundary"
                    .into(),
            ));
        }
        total += diag;
        terms += s + 1;
        let small = diag.abs() < cfg.abs_tol.max(cfg.rel_tol * total.abs());
        if small && prev_small {
            return Ok(crate::hyper2f1::SeriesValue { value: total, terms });
        }
        prev_small = small;
    }
    Err(Error::NoConvergence {
        context: "f4_series",
        terms: cfg.max_terms,
    })
}

/// The split point (u, v) with X = u(1−v), Y = v(1−u), plus the
/// derivatives of u and v along t at fixed x.
#[derive(Debug, Clone, Copy)]
pub struct SplitUV {
    pub u: f64,
    pub v: f64,
    pub du_dt: f64,
    pub dv_dt: f64,
}

/// Solves the quadric split for the argument pair
///
/// ```text
///   X = 2t/(1+x),   Y = (x−1)/(x+1),
/// ```
///
/// in the cancellation-free forms
///
/// ```text
///   R = √((1−t)² − 2t(x−1)),
///   u = 2t/(1+t+R),          v = (x−1)/(x−t+R),
///   du/dt = (R−t+x)/(R(x+1)),  dv/dt = (x−t−R)/(R(x+1)).
/// ```
///
/// Requires t ≥ 0, x ≥ 1 and a strictly positive discriminant — the
/// discriminant vanishes exactly on √X + √Y = 1, so failure here means
/// the arguments left the convergence region of the series.
pub fn solve_uv(t: f64, x: f64) -> Result<SplitUV> {
    if !(t >= 0.0) || !t.is_finite() {
        return Err(Error::Domain(format!("t must be finite and nonnegative (got {t})")));
    }
    if !(x >= 1.0) || !x.is_finite() {
        return Err(Error::Domain(format!("x must be finite with x ≥ 1 (got {x})")));
    }
    let d = (1.0 - t) * (1.0 - t) - 2.0 * t * (x - 1.0);
    if d < 0.0 {
        return Err(Error::Domain(format!(
            "no real split for t = {t}, x = {x}: the arguments are past the \
             convergence boundary √X + √Y = 1"
        )));
    }
    let r = d.sqrt();
    if r == 0.0 {
        return Err(Error::Domain(format!(
            "split is singular at t = {t}, x = {x} (boundary √X + √Y = 1)"
        )));
    }
    let u = 2.0 * t / (1.0 + t + r);
    let v = (x - 1.0) / (x - t + r);
    if !(u < 1.0 && v < 1.0) {
        return Err(Error::Domain(format!(
            "split roots leave the unit interval (u = {u}, v = {v})"
        )));
    }
    let du_dt = (r - t + x) / (r * (x + 1.0));
    let dv_dt = (x - t - r) / (r * (x + 1.0));
    Ok(SplitUV { u, v, du_dt, dv_dt })
}

// ---- scaled Gauss factors of the truncated expansion ----------------
//
// g1 = z·f0′ and g2 = z²·f0″ absorb the argument powers so each factor
// is regular at z = 0; their derivatives collapse further:
//   g1′(z) = K(√z)/(2π),   g2′(z) = [E(√z)/(1−z) − K(√z)]/(4π).

fn g1(z: f64) -> Result<f64> {
    if z == 0.0 {
        return Ok(0.0);
    }
    Ok(z * f0_prime(z)?)
}

fn g2(z: f64) -> Result<f64> {
    if z == 0.0 {
        return Ok(0.0);
    }
    Ok(z * z * f0_double_prime(z)?)
}

fn g1_prime(z: f64) -> Result<f64> {
    if !(0.0..1.0).contains(&z) {
        return Err(Error::Domain(format!("g1' requires 0 ≤ z < 1 (got {z})")));
    }
    Ok(complete_k(Modulus::new(z.sqrt())?)? / (2.0 * PI))
}

fn g2_prime(z: f64) -> Result<f64> {
    if !(0.0..1.0).contains(&z) {
        return Err(Error::Domain(format!("g2' requires 0 ≤ z < 1 (got {z})")));
    }
    // E/(1−z) − K = [zK − (K−E)]/(1−z): both terms O(z), no digits lost.
    let (k, gap) = complete_k_gap(Modulus::new(z.sqrt())?)?;
    Ok((z * k - gap) / (4.0 * PI * (1.0 - z)))
}

fn f0_prime_or_limit(z: f64) -> Result<f64> {
    if z == 0.0 {
        return Ok(F0_PRIME_AT_ZERO);
    }
    f0_prime(z)
}

fn check_unit_square(u: f64, v: f64, what: &str) -> Result<()> {
    if !(0.0..1.0).contains(&u) || !(0.0..1.0).contains(&v) {
        return Err(Error::Domain(format!(
            "{what} requires 0 ≤ u < 1 and 0 ≤ v < 1 (got u = {u}, v = {v})"
        )));
    }
    Ok(())
}

/// F4(−1/2, −1/2; 1, 1; u(1−v), v(1−u)) by the truncated product
/// expansion — three products of complete-elliptic closed forms.
pub fn f4_reduced(u: f64, v: f64) -> Result<f64> {
    check_unit_square(u, v, "f4_reduced")?;
    Ok(f0(u)? * f0(v)? - 8.0 * g1(u)? * g1(v)? + 16.0 * g2(u)? * g2(v)?)
}

/// The same quantity with every factor expanded into K and E outright:
///
/// ```text
///   (4/π²)·[ 6 E(√u)E(√v) − 2(2−v) E(√u)K(√v) − 2(2−u) E(√v)K(√u)
///            + (3−u−v) K(√u)K(√v) ]
/// ```
///
/// Algebraically identical to [`f4_reduced`] but shares no code with
/// it, which is the point: the two must agree to rounding error.
pub fn f4_bilinear_ke(u: f64, v: f64) -> Result<f64> {
    check_unit_square(u, v, "f4_bilinear_ke")?;
    let mu = Modulus::new(u.sqrt())?;
    let mv = Modulus::new(v.sqrt())?;
    let (eu, ku) = (complete_e(mu), complete_k(mu)?);
    let (ev, kv) = (complete_e(mv), complete_k(mv)?);
    Ok((4.0 / (PI * PI))
        * (6.0 * eu * ev - 2.0 * (2.0 - v) * eu * kv - 2.0 * (2.0 - u) * ev * ku
            + (3.0 - u - v) * ku * kv))
}

/// d/dt of F4 along the reduced-parameter path t ↦ (u(t), v(t)) at
/// fixed x, by the chain rule through [`solve_uv`]:
///
/// ```text
///   dF4/dt = Fu·du/dt + Fv·dv/dt,
///   Fu = f0′(u)f0(v) − 8 g1′(u)g1(v) + 16 g2′(u)g2(v),
/// ```
///
/// and symmetrically for Fv. Valid from t = 0 (where the u-factors hit
/// their finite limits) up to the convergence boundary.
pub fn f4_dt(t: f64, x: f64) -> Result<f64> {
    let s = solve_uv(t, x)?;
    let (u, v) = (s.u, s.v);
    let fu =
        f0_prime_or_limit(u)? * f0(v)? - 8.0 * g1_prime(u)? * g1(v)? + 16.0 * g2_prime(u)? * g2(v)?;
    let fv =
        f0(u)? * f0_prime_or_limit(v)? - 8.0 * g1(u)? * g1_prime(v)? + 16.0 * g2(u)? * g2_prime(v)?;
    Ok(fu * s.du_dt + fv * s.dv_dt)
}
