//! Two-parameter complete elliptic integrals.
//!
//! The classical complete elliptic integrals extend to two moduli:
//!
//! ```text
//! K(k1,k2) = ∬ dθ dφ / √(1 − k1²sin²θ − k2²sin²φ)
//! E(k1,k2) = ∬ √(1 − k1²sin²θ − k2²sin²φ) dθ dφ
//! ```
//!
//! with both angles over [0, π/2] and the moduli restricted to
//! k1² + k2² < 1 so the radicand stays positive. `K` has a product
//! formula in ordinary complete integrals; `E` does not, but it can be
//! evaluated three independent ways:
//!
//! 1. brute-force 2-D adaptive quadrature ([`oracle_e2`]),
//! 2. a series over Legendre functions of half-odd-integer degree
//!    ([`gen_e_series`]),
//! 3. a closed form built from the Appell F4 double hypergeometric
//!    function and its quadratic reduction to products of K and E
//!    ([`gen_e_closed`]).
//!
//! Route 3 depends on reduction coefficients that are misprinted in
//! some published statements; see `FINDINGS.md` at the repository root
//! for the validation protocol that fixes them here.
//!
//! The supporting modules are public: classical K/E via the AGM
//! ([`elliptic`]), the Gauss hypergeometric series ([`hyper2f1`]),
//! half-integer-degree Legendre functions ([`legendre`]), the Appell F4
//! machinery ([`appell`]), and the adaptive quadrature engine
//! ([`quad`]).

pub mod appell;
pub mod elliptic;
mod error;
pub mod hyper2f1;
pub mod legendre;
pub mod quad;
pub mod two_param;

pub use appell::{f4_bilinear_ke, f4_dt, f4_reduced, f4_series, solve_uv, F4Args, SplitUV};
pub use elliptic::{
    complete_e, complete_e_deriv, complete_k, complete_k_deriv, dn_even_moment, jacobi_dn,
    Modulus, SeriesConfig,
};
pub use error::{Error, Result};
pub use hyper2f1::{f0, f0_double_prime, f0_prime, gauss_2f1, HyperParams, SeriesValue};
pub use legendre::{legendre_laplace_oracle, legendre_p_halfint, HalfIntDegree};
pub use quad::{
    gauss_legendre_rule, integrate_1d, oracle_e2, oracle_k2, oracle_reduction_stage, QuadResult,
    ReductionStage,
};
pub use two_param::{
    gen_e, gen_e_closed, gen_e_series, gen_e_symmetric, gen_k, reduce_params, EvalResult, Method,
    ModulusPair, ReducedParams,
};
