//! The two-parameter complete elliptic integrals and their evaluation
//! routes.
//!
//! ```text
//!   K(k1,k2) = ∫₀^{π/2} ∫₀^{π/2} (1 − k1²sin²θ − k2²sin²φ)^{−1/2} dθ dφ
//!   E(k1,k2) = ∫₀^{π/2} ∫₀^{π/2} (1 − k1²sin²θ − k2²sin²φ)^{+1/2} dθ dφ
//! ```
//!
//! K factorizes into a product of two one-parameter K's. E reduces,
//! after integrating one angle and substituting, to either
//!
//! * a series Σ cₙ tⁿ P_{n−3/2}(x) over half-integer Legendre functions
//!   (converges for every valid pair, ratio → k1²/k2′²), or
//! * a closed form in the Appell function F4 and its t-derivative,
//!   valid on √X + √Y < 1 — which works out to be *exactly* the pair
//!   admissibility condition k1² + k2² < 1, so both routes cover the
//!   whole domain and cross-check each other everywhere.
//!
//! The reduced parameters are
//!
//! ```text
//!   D = 1 − k1²/2 − k2²/2,    A = k1²/(2D),   B = k2²/(2D),
//!   t = k1²/k2′,              x = (1 + k2′²)/(2 k2′),
//! ```
//!
//! with k2′ = √(1−k2²); A and B drive the quadrature oracles, (t, x)
//! drive the series and closed form.

use crate::appell::{f4_dt, f4_reduced, solve_uv, SplitUV};
use crate::elliptic::{complete_k, Modulus, SeriesConfig};
use crate::error::{Error, Result};
use crate::legendre::{halfint_base, halfint_step};
use crate::quad::oracle_e2;
use std::f64::consts::FRAC_1_SQRT_2;
use std::fmt;

/// A validated pair of moduli with k1² + k2² < 1.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModulusPair {
    k1: f64,
    k2: f64,
}

impl ModulusPair {
    pub fn new(k1: f64, k2: f64) -> Result<Self> {
        if !(k1 >= 0.0 && k2 >= 0.0) || !k1.is_finite() || !k2.is_finite() {
            return Err(Error::Domain(format!(
                "moduli must be finite and nonnegative (got k1 = {k1}, k2 = {k2})"
            )));
        }
        let ss = k1 * k1 + k2 * k2;
        if ss >= 1.0 {
            let mut msg = format!(
                "moduli must satisfy k1² + k2² < 1 (got k1 = {k1}, k2 = {k2}, sum of squares = {ss})"
            );
            if k1 == k2 {
                msg.push_str("; for k1 = k2 this requires k < 1/sqrt(2) ≈ 0.7071067811865476");
            }
            return Err(Error::Domain(msg));
        }
        Ok(Self { k1, k2 })
    }

    pub fn k1(&self) -> f64 {
        self.k1
    }

    pub fn k2(&self) -> f64 {
        self.k2
    }

    /// √(1 − k1²)
    pub fn k1_prime(&self) -> f64 {
        ((1.0 - self.k1) * (1.0 + self.k1)).sqrt()
    }

    /// √(1 − k2²)
    pub fn k2_prime(&self) -> f64 {
        ((1.0 - self.k2) * (1.0 + self.k2)).sqrt()
    }

    /// √(1 − k1² − k2²)
    pub fn k_prime(&self) -> f64 {
        (1.0 - self.k1 * self.k1 - self.k2 * self.k2).sqrt()
    }
}

/// Reduced parameters of a pair; see the module docs. The split (u, v)
/// always exists because √X + √Y < 1 is equivalent to the pair's own
/// admissibility condition.
#[derive(Debug, Clone, Copy)]
pub struct ReducedParams {
    pub a: f64,
    pub b: f64,
    pub t: f64,
    pub x: f64,
    pub split: SplitUV,
}

impl ReducedParams {
    /// Lower turning point z0² = 2A/(1+A+B) of the substituted integral.
    pub fn z0_sq(&self) -> f64 {
        2.0 * self.a / (1.0 + self.a + self.b)
    }

    /// Upper turning point z_π² = 2A/(1+A−B).
    pub fn z_pi_sq(&self) -> f64 {
        2.0 * self.a / (1.0 + self.a - self.b)
    }
}

pub fn reduce_params(mp: &ModulusPair) -> Result<ReducedParams> {
    let (k1, k2) = (mp.k1, mp.k2);
    let d = 1.0 - 0.5 * k1 * k1 - 0.5 * k2 * k2;
    let a = 0.5 * k1 * k1 / d;
    let b = 0.5 * k2 * k2 / d;
    let k2p = mp.k2_prime();
    let t = k1 * k1 / k2p;
    let x = (1.0 + k2p * k2p) / (2.0 * k2p);
    let split = solve_uv(t, x)?;
    Ok(ReducedParams { a, b, t, x, split })
}

/// √X + √Y for the pair's closed-form arguments, in a form that never
/// subtracts: (2k1 + k2²/(1+k2′)) / (1+k2′). Strictly below 1 for every
/// valid pair — kept as an explicit predicate so the dispatch logic can
/// state its precondition instead of assuming it.
fn sqrt_sum(mp: &ModulusPair) -> f64 {
    let k2p = mp.k2_prime();
    (2.0 * mp.k1 + mp.k2 * mp.k2 / (1.0 + k2p)) / (1.0 + k2p)
}

/// How a value was produced.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    Quadrature,
    LegendreSeries,
    F4Closed,
    ProductFormula,
}

impl Method {
    pub fn as_str(&self) -> &'static str {
        match self {
            Method::Quadrature => "quadrature",
            Method::LegendreSeries => "legendre_series",
            Method::F4Closed => "f4_closed",
            Method::ProductFormula => "product_formula",
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// A computed value with provenance. `error_estimate` is a geometric
/// tail bound for series, an adaptive-rule estimate for quadrature, and
/// a rounding-level allowance for closed forms; `terms_or_evals` counts
/// series terms or integrand evaluations (1 for closed forms).
#[derive(Debug, Clone, Copy)]
pub struct EvalResult {
    pub value: f64,
    pub method: Method,
    pub error_estimate: f64,
    pub terms_or_evals: u64,
}

/// K(k1,k2) by the product formula
///
/// ```text
///   K(k1,k2) = 2/(1+k2′) · K(k3) · K(k4),
/// ```
///
/// where k3² = v and k4² = u are the same split the E closed form uses,
/// here computed directly from the moduli in subtraction-free forms:
///
/// ```text
///   k3 = k2² / ((k1′+k′)(1+k2′)),
///   k4² = k1² · [1/(1+k1′) + 1/(k2′+k′)] · (1+k2′+k1′+k′)/(1+k2′)².
/// ```
pub fn gen_k(mp: &ModulusPair) -> Result<EvalResult> {
    let k1p = mp.k1_prime();
    let k2p = mp.k2_prime();
    let kp = mp.k_prime();
    let k3 = mp.k2 * mp.k2 / ((k1p + kp) * (1.0 + k2p));
    let k4_sq = mp.k1 * mp.k1
        * (1.0 / (1.0 + k1p) + 1.0 / (k2p + kp))
        * (1.0 + k2p + k1p + kp)
        / ((1.0 + k2p) * (1.0 + k2p));
    let kk3 = complete_k(Modulus::new(k3)?)?;
    let kk4 = complete_k(Modulus::new(k4_sq.sqrt())?)?;
    let value = 2.0 / (1.0 + k2p) * kk3 * kk4;
    Ok(EvalResult {
        value,
        method: Method::ProductFormula,
        error_estimate: 4.0 * f64::EPSILON * value,
        terms_or_evals: 2,
    })
}

/// E(k1,k2) by the Legendre series
///
/// ```text
///   E = (π²/4) √k2′ · Σ cₙ tⁿ P_{n−3/2}(x),
///   c₀ = 1,  cₙ₊₁ = cₙ (n−1/2)(n+1/2)/(n+1)²,
/// ```
///
/// whose term ratio tends to t/k2′ = k1²/k2′² < 1. The error estimate
/// is the geometric tail bound from the last retained term.
pub fn gen_e_series(mp: &ModulusPair, cfg: &SeriesConfig) -> Result<EvalResult> {
    cfg.validate()?;
    let k2p = mp.k2_prime();
    let t = mp.k1 * mp.k1 / k2p;
    let x = (1.0 + k2p * k2p) / (2.0 * k2p);
    if t >= 1.0 {
        return Err(Error::Domain(format!(
            "series requires t = k1²/k2′ < 1 (got {t})"
        )));
    }
    let pref = std::f64::consts::PI * std::f64::consts::PI / 4.0 * k2p.sqrt();
    let (p_half, p_mhalf) = halfint_base(x)?;
    // q_j = P_{j−3/2}(x); q_0 = P_{−3/2} = P_{1/2} by reflection.
    let mut q_prev = p_half;
    let mut q_cur = p_mhalf;
    let mut c = 1.0f64;
    let mut pow_t = 1.0f64;
    let mut sum = 0.0f64;
    let mut prev_small = false;
    for n in 0..cfg.max_terms {
        let p = match n {
            0 => q_prev,
            1 => q_cur,
            _ => {
                let q_next = halfint_step(n as u32 - 1, x, q_cur, q_prev);
                q_prev = q_cur;
                q_cur = q_next;
                q_cur
            }
        };
        let term = c * pow_t * p;
        sum += term;
        let small = term.abs() < cfg.abs_tol.max(cfg.rel_tol * sum.abs());
        if small && prev_small {
            let rho = t / k2p;
            let tail = term.abs() * rho / (1.0 - rho);
            return Ok(EvalResult {
                value: pref * sum,
                method: Method::LegendreSeries,
                error_estimate: pref * tail,
                terms_or_evals: n as u64 + 1,
            });
        }
        prev_small = small;
        let nf = n as f64;
        c *= (nf - 0.5) * (nf + 0.5) / ((nf + 1.0) * (nf + 1.0));
        pow_t *= t;
    }
    Err(Error::NoConvergence {
        context: "gen_e_series",
        terms: cfg.max_terms,
    })
}

/// E(k1,k2) by the closed form
///
/// ```text
///   E = (π²/4) · (1+k2′)/2 · [ F4 − 2t·dF4/dt ],
/// ```
///
/// with F4 evaluated through its elliptic factorization at the split
/// point of (t, x). The unsimplified statement carries a k1·t^{-1/2}
/// prefactor that is 0/0 at k1 = 0; the form above has absorbed it
/// exactly, so t = 0 is an ordinary point (F4 collapses to f0 and the
/// value to (π/2)E(k2)).
pub fn gen_e_closed(mp: &ModulusPair) -> Result<EvalResult> {
    let rp = reduce_params(mp)?;
    let s = rp.split;
    let f4 = f4_reduced(s.u, s.v)?;
    let df = f4_dt(rp.t, rp.x)?;
    let k2p = mp.k2_prime();
    let pref = std::f64::consts::PI * std::f64::consts::PI / 4.0 * (1.0 + k2p) / 2.0;
    let value = pref * (f4 - 2.0 * rp.t * df);
    Ok(EvalResult {
        value,
        method: Method::F4Closed,
        error_estimate: 1e-14 * value.abs(),
        terms_or_evals: 1,
    })
}

/// E(k, k) through the dedicated equal-modulus parameterization
///
/// ```text
///   A = k²/(2(1−k²)),   ξ = A/(1 + A + √(1+2A)),
///   X = 4ξ,  Y = ξ²  ⇒  x = (1+ξ²)/(1−ξ²),  t = 4ξ/(1−ξ²),
/// ```
///
/// then the same closed form as [`gen_e_closed`] with the prefactor in
/// its unsimplified shape √k2′·√((x+1)/2). Requires k < 1/√2, which is
/// where k² + k² < 1 lands for equal moduli.
pub fn gen_e_symmetric(k: f64) -> Result<EvalResult> {
    if !(k >= 0.0) || !k.is_finite() {
        return Err(Error::Domain(format!(
            "modulus must be finite and nonnegative (got {k})"
        )));
    }
    if k >= FRAC_1_SQRT_2 {
        return Err(Error::Domain(format!(
            "equal moduli require k < 1/sqrt(2) ≈ {FRAC_1_SQRT_2} (got {k})"
        )));
    }
    let ksq = k * k;
    let a = 0.5 * ksq / (1.0 - ksq);
    let xi = a / (1.0 + a + (1.0 + 2.0 * a).sqrt());
    if 2.0 * xi.sqrt() + xi >= 1.0 {
        return Err(Error::Domain(format!(
            "equal-modulus arguments leave the convergence region (ξ = {xi})"
        )));
    }
    let x = (1.0 + xi * xi) / (1.0 - xi * xi);
    let t = 4.0 * xi / (1.0 - xi * xi);
    let s = solve_uv(t, x)?;
    let f4 = f4_reduced(s.u, s.v)?;
    let df = f4_dt(t, x)?;
    let k2p = ((1.0 - k) * (1.0 + k)).sqrt();
    let pref =
        std::f64::consts::PI * std::f64::consts::PI / 4.0 * k2p.sqrt() * ((x + 1.0) / 2.0).sqrt();
    let value = pref * (f4 - 2.0 * t * df);
    Ok(EvalResult {
        value,
        method: Method::F4Closed,
        error_estimate: 1e-14 * value.abs(),
        terms_or_evals: 1,
    })
}

/// E(k1,k2) by the preferred applicable route: the closed form wherever
/// the split exists, the series as the first fallback, and direct 2-D
/// quadrature as the backstop. The returned `method` records which one
/// actually produced the value.
pub fn gen_e(mp: &ModulusPair, cfg: &SeriesConfig) -> Result<EvalResult> {
    if sqrt_sum(mp) < 1.0 {
        if let Ok(r) = gen_e_closed(mp) {
            return Ok(r);
        }
    }
    if mp.k1 * mp.k1 / mp.k2_prime() < 1.0 {
        if let Ok(r) = gen_e_series(mp, cfg) {
            return Ok(r);
        }
    }
    let tol = cfg.rel_tol.max(cfg.abs_tol).max(1e-13);
    let q = oracle_e2(mp, tol)?;
    Ok(EvalResult {
        value: q.value,
        method: Method::Quadrature,
        error_estimate: q.error_estimate,
        terms_or_evals: q.evals,
    })
}
