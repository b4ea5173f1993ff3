//! Adaptive numerical integration and the brute-force oracles built on it.
//!
//! One-dimensional integrals use a Gauss–Kronrod 7/15 pair on a
//! worst-interval-first queue; two-dimensional integrals use tensor
//! Gauss rules (8×8 embedded in 16×16) with rectangle bisection. Both
//! rules are open — endpoints are never evaluated — and every merge sums
//! finished cells in coordinate order so results are deterministic.
//!
//! The oracles at the bottom evaluate the defining double integrals of
//! the two-parameter K and E, and the staged one-dimensional reductions
//! of E, directly from their integrands. They are the ground truth the
//! closed forms are tested against, so they share nothing with the
//! series or product-formula paths except `complete_e`.

use crate::elliptic::{complete_e, Modulus};
use crate::error::{Error, Result};
use crate::two_param::{reduce_params, ModulusPair};
use std::cmp::Ordering;
use std::collections::BinaryHeap;
use std::f64::consts::{FRAC_PI_2, PI};
use std::sync::OnceLock;

/// Outcome of one adaptive integration.
#[derive(Debug, Clone, Copy)]
pub struct QuadResult {
    pub value: f64,
    pub error_estimate: f64,
    pub evals: u64,
    pub converged: bool,
}

/// Function-evaluation budget per adaptive solve.
const EVAL_BUDGET: u64 = 1_000_000;

// Gauss–Kronrod 7/15 pair on [-1, 1] (QUADPACK dqk15 constants).
// Odd-indexed abscissae are shared with the embedded 7-point Gauss rule.
const XGK: [f64; 7] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_2,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_8,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

/// One Gauss–Kronrod 15-point pass: returns (integral, error estimate).
fn gk15<F: Fn(f64) -> f64>(f: &F, lo: f64, hi: f64) -> Result<(f64, f64)> {
    let center = 0.5 * (lo + hi);
    let half = 0.5 * (hi - lo);
    let fc = f(center);
    let mut f_lo = [0.0f64; 7];
    let mut f_hi = [0.0f64; 7];
    for j in 0..7 {
        let dx = half * XGK[j];
        f_lo[j] = f(center - dx);
        f_hi[j] = f(center + dx);
    }
    if !fc.is_finite() || f_lo.iter().chain(f_hi.iter()).any(|v| !v.is_finite()) {
        return Err(Error::Domain(
            "integrand returned a non-finite value inside the interval".into(),
        ));
    }
    let mut resk = WGK[7] * fc;
    let mut resg = WG[3] * fc;
    for j in 0..7 {
        let s = f_lo[j] + f_hi[j];
        resk += WGK[j] * s;
        if j % 2 == 1 {
            resg += WG[j / 2] * s;
        }
    }
    let reskh = 0.5 * resk;
    let mut resasc = WGK[7] * (fc - reskh).abs();
    for j in 0..7 {
        resasc += WGK[j] * ((f_lo[j] - reskh).abs() + (f_hi[j] - reskh).abs());
    }
    resasc *= half.abs();
    let mut err = ((resk - resg) * half).abs();
    // QUADPACK damping: scale the raw difference by the interval's
    // variation so smooth regions are not over-refined.
    if resasc != 0.0 && err != 0.0 {
        err = resasc * (200.0 * err / resasc).powf(1.5).min(1.0);
    }
    Ok((resk * half, err))
}

struct Seg {
    err: f64,
    lo: f64,
    hi: f64,
    val: f64,
}

impl PartialEq for Seg {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}
impl Eq for Seg {}
impl PartialOrd for Seg {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Seg {
    fn cmp(&self, other: &Self) -> Ordering {
        self.err
            .total_cmp(&other.err)
            .then(other.lo.total_cmp(&self.lo))
            .then(other.hi.total_cmp(&self.hi))
    }
}

/// Adaptive 1-D integration of `f` over (lo, hi) to mixed tolerance
/// max(tol, tol·|value|).
///
/// Endpoints are never evaluated, so integrable (z−a)^{−1/2} endpoint
/// singularities are tolerated (at reduced convergence rate — remove
/// them by substitution when spectral accuracy is needed). Budget
/// exhaustion is reported as `converged = false`, not an error.
pub fn integrate_1d<F: Fn(f64) -> f64>(f: F, lo: f64, hi: f64, tol: f64) -> Result<QuadResult> {
    if !lo.is_finite() || !hi.is_finite() || !(lo < hi) {
        return Err(Error::Domain(format!(
            "integration bounds must be finite with lo < hi (got [{lo}, {hi}])"
        )));
    }
    if !(tol > 0.0) {
        return Err(Error::Domain(format!("tolerance must be positive (got {tol})")));
    }
    let (v0, e0) = gk15(&f, lo, hi)?;
    let mut evals: u64 = 15;
    let mut heap = BinaryHeap::new();
    heap.push(Seg { err: e0, lo, hi, val: v0 });
    let mut frozen: Vec<Seg> = Vec::new();
    let mut total_val = v0;
    let mut total_err = e0;
    loop {
        if total_err <= tol.max(tol * total_val.abs()) {
            break;
        }
        if evals + 30 > EVAL_BUDGET {
            break;
        }
        let Some(worst) = heap.pop() else { break };
        let mid = 0.5 * (worst.lo + worst.hi);
        if !(worst.lo < mid && mid < worst.hi) {
            // Interval is at floating-point resolution; park it.
            frozen.push(worst);
            continue;
        }
        let (v1, e1) = gk15(&f, worst.lo, mid)?;
        let (v2, e2) = gk15(&f, mid, worst.hi)?;
        evals += 30;
        total_val += v1 + v2 - worst.val;
        total_err += e1 + e2 - worst.err;
        heap.push(Seg { err: e1, lo: worst.lo, hi: mid, val: v1 });
        heap.push(Seg { err: e2, lo: mid, hi: worst.hi, val: v2 });
    }
    // Deterministic merge: sum segments left to right.
    let mut segs: Vec<Seg> = heap.into_vec();
    segs.extend(frozen);
    segs.sort_by(|a, b| a.lo.total_cmp(&b.lo));
    let value: f64 = segs.iter().map(|s| s.val).sum();
    let error_estimate: f64 = segs.iter().map(|s| s.err).sum();
    Ok(QuadResult {
        value,
        error_estimate,
        evals,
        converged: error_estimate <= tol.max(tol * value.abs()),
    })
}

/// Legendre polynomial P_n and derivative at x, by the three-term
/// recurrence; used by the node generator.
fn legendre_pn(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0f64;
    let mut p1 = x;
    for j in 2..=n {
        let jf = j as f64;
        let p2 = ((2.0 * jf - 1.0) * x * p1 - (jf - 1.0) * p0) / jf;
        p0 = p1;
        p1 = p2;
    }
    if n == 0 {
        return (1.0, 0.0);
    }
    let dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, dp)
}

/// Nodes and weights of the n-point Gauss–Legendre rule on [-1, 1],
/// nodes ascending. Exact for polynomials of degree ≤ 2n−1.
pub fn gauss_legendre_rule(n: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(n >= 1, "rule order must be at least 1");
    let mut nodes = vec![0.0f64; n];
    let mut weights = vec![0.0f64; n];
    for i in 0..n.div_ceil(2) {
        // Tricomi-style initial guess, then Newton on P_n.
        let mut x = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        for _ in 0..100 {
            let (p, dp) = legendre_pn(n, x);
            let dx = p / dp;
            x -= dx;
            if dx.abs() <= 1e-15 {
                break;
            }
        }
        let (_, dp) = legendre_pn(n, x);
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        // Guesses descend from +1: index i is the (n-1-i)-th ascending node.
        nodes[n - 1 - i] = x;
        weights[n - 1 - i] = w;
        nodes[i] = -x;
        weights[i] = w;
    }
    if n % 2 == 1 {
        nodes[n / 2] = 0.0;
    }
    (nodes, weights)
}

fn rule_cached(cell: &'static OnceLock<(Vec<f64>, Vec<f64>)>, n: usize) -> &'static (Vec<f64>, Vec<f64>) {
    cell.get_or_init(|| gauss_legendre_rule(n))
}

static RULE8: OnceLock<(Vec<f64>, Vec<f64>)> = OnceLock::new();
static RULE16: OnceLock<(Vec<f64>, Vec<f64>)> = OnceLock::new();

/// Tensor Gauss estimate of ∬ f over a rectangle with rule order n.
fn tensor_pass<F: Fn(f64, f64) -> f64>(
    f: &F,
    rule: &(Vec<f64>, Vec<f64>),
    x0: f64,
    x1: f64,
    y0: f64,
    y1: f64,
) -> Result<f64> {
    let (nodes, weights) = rule;
    let (cx, hx) = (0.5 * (x0 + x1), 0.5 * (x1 - x0));
    let (cy, hy) = (0.5 * (y0 + y1), 0.5 * (y1 - y0));
    let mut acc = 0.0f64;
    for (xi, wxi) in nodes.iter().zip(weights) {
        let x = cx + hx * xi;
        let mut row = 0.0f64;
        for (yj, wyj) in nodes.iter().zip(weights) {
            let v = f(x, cy + hy * yj);
            if !v.is_finite() {
                return Err(Error::Domain(
                    "integrand returned a non-finite value inside the rectangle".into(),
                ));
            }
            row += wyj * v;
        }
        acc += wxi * row;
    }
    Ok(acc * hx * hy)
}

struct Cell {
    err: f64,
    val: f64,
    x0: f64,
    x1: f64,
    y0: f64,
    y1: f64,
}

impl PartialEq for Cell {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}
impl Eq for Cell {}
impl PartialOrd for Cell {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Cell {
    fn cmp(&self, other: &Self) -> Ordering {
        self.err
            .total_cmp(&other.err)
            .then(other.x0.total_cmp(&self.x0))
            .then(other.y0.total_cmp(&self.y0))
    }
}

const CELL_COST: u64 = (8 * 8 + 16 * 16) as u64;

fn eval_cell<F: Fn(f64, f64) -> f64>(f: &F, x0: f64, x1: f64, y0: f64, y1: f64) -> Result<Cell> {
    let low = tensor_pass(f, rule_cached(&RULE8, 8), x0, x1, y0, y1)?;
    let high = tensor_pass(f, rule_cached(&RULE16, 16), x0, x1, y0, y1)?;
    Ok(Cell {
        err: (high - low).abs(),
        val: high,
        x0,
        x1,
        y0,
        y1,
    })
}

/// Adaptive 2-D integration over [x0,x1]×[y0,y1] with embedded 8/16
/// tensor Gauss error estimation and bisection of the longer cell axis.
pub(crate) fn integrate_2d<F: Fn(f64, f64) -> f64>(
    f: F,
    x0: f64,
    x1: f64,
    y0: f64,
    y1: f64,
    tol: f64,
) -> Result<QuadResult> {
    if !(x0 < x1 && y0 < y1) || !(tol > 0.0) {
        return Err(Error::Domain("invalid rectangle or tolerance".into()));
    }
    let first = eval_cell(&f, x0, x1, y0, y1)?;
    let mut evals = CELL_COST;
    let mut total_val = first.val;
    let mut total_err = first.err;
    let mut heap = BinaryHeap::new();
    heap.push(first);
    let mut frozen: Vec<Cell> = Vec::new();
    loop {
        if total_err <= tol.max(tol * total_val.abs()) {
            break;
        }
        if evals + 2 * CELL_COST > EVAL_BUDGET {
            break;
        }
        let Some(worst) = heap.pop() else { break };
        let (a, b);
        if worst.x1 - worst.x0 >= worst.y1 - worst.y0 {
            let xm = 0.5 * (worst.x0 + worst.x1);
            if !(worst.x0 < xm && xm < worst.x1) {
                frozen.push(worst);
                continue;
            }
            a = eval_cell(&f, worst.x0, xm, worst.y0, worst.y1)?;
            b = eval_cell(&f, xm, worst.x1, worst.y0, worst.y1)?;
        } else {
            let ym = 0.5 * (worst.y0 + worst.y1);
            if !(worst.y0 < ym && ym < worst.y1) {
                frozen.push(worst);
                continue;
            }
            a = eval_cell(&f, worst.x0, worst.x1, worst.y0, ym)?;
            b = eval_cell(&f, worst.x0, worst.x1, ym, worst.y1)?;
        }
        evals += 2 * CELL_COST;
        total_val += a.val + b.val - worst.val;
        total_err += a.err + b.err - worst.err;
        heap.push(a);
        heap.push(b);
    }
    let mut cells: Vec<Cell> = heap.into_vec();
    cells.extend(frozen);
    cells.sort_by(|p, q| p.x0.total_cmp(&q.x0).then(p.y0.total_cmp(&q.y0)));
    let value: f64 = cells.iter().map(|c| c.val).sum();
    let error_estimate: f64 = cells.iter().map(|c| c.err).sum();
    Ok(QuadResult {
        value,
        error_estimate,
        evals,
        converged: error_estimate <= tol.max(tol * value.abs()),
    })
}

fn require_converged(r: QuadResult, context: &'static str) -> Result<QuadResult> {
    if !r.converged {
        return Err(Error::QuadratureBudget {
            context,
            estimate: r.error_estimate,
        });
    }
    Ok(r)
}

/// Direct 2-D quadrature of E(k1,k2) = ∬ √(1 − k1²sin²θ − k2²sin²φ).
pub fn oracle_e2(mp: &ModulusPair, tol: f64) -> Result<QuadResult> {
    let (a, b) = (mp.k1() * mp.k1(), mp.k2() * mp.k2());
    let r = integrate_2d(
        |th: f64, ph: f64| {
            let (st, sp) = (th.sin(), ph.sin());
            (1.0 - a * st * st - b * sp * sp).sqrt()
        },
        0.0,
        FRAC_PI_2,
        0.0,
        FRAC_PI_2,
        tol,
    )?;
    require_converged(r, "oracle_e2")
}

/// Direct 2-D quadrature of K(k1,k2) = ∬ (1 − k1²sin²θ − k2²sin²φ)^{−1/2}.
pub fn oracle_k2(mp: &ModulusPair, tol: f64) -> Result<QuadResult> {
    let (a, b) = (mp.k1() * mp.k1(), mp.k2() * mp.k2());
    let r = integrate_2d(
        |th: f64, ph: f64| {
            let (st, sp) = (th.sin(), ph.sin());
            1.0 / (1.0 - a * st * st - b * sp * sp).sqrt()
        },
        0.0,
        FRAC_PI_2,
        0.0,
        FRAC_PI_2,
        tol,
    )?;
    require_converged(r, "oracle_k2")
}

/// Intermediate forms of the reduced double integral
/// I = ∫₀^π ∫₀^π √(1 + A·cos x + B·cos y) dx dy, which equals
/// 4·E(k1,k2)/√(1 − k1²/2 − k2²/2).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReductionStage {
    /// One angular integration done in closed form: a single integral
    /// over the remaining angle with a complete-E factor inside.
    Angular,
    /// After the z-substitution that turns the angular integral into an
    /// algebraic one between the turning points z0 < z_pi.
    Substituted,
    /// The bare z-moment ∫ z^{2n−2} dz / √((z²−z0²)(z_π²−z²)), which has
    /// the closed form (π/2)·t^{n−3/2}·P_{n−3/2}(x).
    Moment(u32),
}

/// Shared kernel for the substituted stage: ∫ g(z)·w(z) dz between the
/// turning points, w(z) = ((z²−z0²)(z_pi²−z²))^{−1/2}. Both endpoint
/// singularities are removed analytically by z = z0 + s² from the left
/// and z = z_pi − s² from the right, splitting at the midpoint.
fn bracket_integral<G: Fn(f64) -> f64>(
    z0: f64,
    z_pi: f64,
    tol: f64,
    g: G,
) -> Result<QuadResult> {
    let zm = 0.5 * (z0 + z_pi);
    let left = integrate_1d(
        |s| {
            let z = z0 + s * s;
            2.0 * g(z) / ((z + z0).sqrt() * ((z_pi - z) * (z_pi + z)).sqrt())
        },
        0.0,
        (zm - z0).sqrt(),
        0.5 * tol,
    )?;
    let right = integrate_1d(
        |s| {
            let z = z_pi - s * s;
            2.0 * g(z) / ((z_pi + z).sqrt() * ((z - z0) * (z + z0)).sqrt())
        },
        0.0,
        (z_pi - zm).sqrt(),
        0.5 * tol,
    )?;
    Ok(QuadResult {
        value: left.value + right.value,
        error_estimate: left.error_estimate + right.error_estimate,
        evals: left.evals + right.evals,
        converged: left.converged && right.converged,
    })
}

/// Evaluates one intermediate stage of the reduction of E(k1,k2); see
/// [`ReductionStage`]. The angular and substituted stages must agree
/// with each other and with the rescaled 2-D oracle; the moment stage is
/// the quantity with the half-integer-Legendre closed form.
pub fn oracle_reduction_stage(
    mp: &ModulusPair,
    stage: ReductionStage,
    tol: f64,
) -> Result<QuadResult> {
    let rp = reduce_params(mp)?;
    let (a, b) = (rp.a, rp.b);
    match stage {
        ReductionStage::Angular => {
            let r = integrate_1d(
                |y: f64| {
                    let c = 1.0 + a + b * y.cos();
                    let m = (2.0 * a / c).sqrt();
                    let e = Modulus::new(m).map(complete_e).unwrap_or(f64::NAN);
                    2.0 * c.sqrt() * e
                },
                0.0,
                PI,
                tol,
            )?;
            require_converged(r, "oracle_reduction_stage(angular)")
        }
        ReductionStage::Substituted => {
            if a == 0.0 || b == 0.0 {
                return Err(Error::Domain(
                    "substituted stage degenerates when A = 0 or B = 0 (z0 = z_pi); \
                     use the angular stage"
                        .into(),
                ));
            }
            let z0 = rp.z0_sq().sqrt();
            let z_pi = rp.z_pi_sq().sqrt();
            let pref = 4.0 * (2.0 * a).sqrt() * z0 * z_pi;
            let r = bracket_integral(z0, z_pi, tol, |z| {
                Modulus::new(z).map(complete_e).unwrap_or(f64::NAN) / (z * z)
            })?;
            let r = QuadResult {
                value: pref * r.value,
                error_estimate: pref * r.error_estimate,
                ..r
            };
            require_converged(r, "oracle_reduction_stage(substituted)")
        }
        ReductionStage::Moment(n) => {
            if a == 0.0 || b == 0.0 {
                return Err(Error::Domain(
                    "moment stage degenerates when A = 0 or B = 0 (z0 = z_pi)".into(),
                ));
            }
            if n > 64 {
                return Err(Error::Domain(format!("moment order too large ({n})")));
            }
            let z0 = rp.z0_sq().sqrt();
            let z_pi = rp.z_pi_sq().sqrt();
            let p = 2 * n as i32 - 2;
            let r = bracket_integral(z0, z_pi, tol, |z| z.powi(p))?;
            require_converged(r, "oracle_reduction_stage(moment)")
        }
    }
}
