//! Closed-form news-impact price models.
//!
//! * Euler-type system `u' = (c u − p/σ)/t`, `p'/σ = a u/t + b u'`, whose price
//!   component satisfies `t² p″ + (1 − c + b) t p′ + a p = 0`.
//! * Its logistic modification for `a = 0`.
//! * Profit-taking paths built on Bessel functions, and the `t^ν` variant.
//! * The two-event model solved with the Gauss hypergeometric function.
//! * The tree-growth recurrence generalising Fibonacci.

use crate::error::{domain, Result};
use crate::special::{bessel_j, hyp2f1};
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

/// Model coefficients shared by the evaluators below.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ImpactParams {
    /// Global-investing coefficient (≥ 0).
    pub a: f64,
    /// Momentum coefficient (≥ 0).
    pub b: f64,
    /// Reduction coefficient, nominally in `[0, 1]`.
    pub c: f64,
    /// Relative price-target scale (> 0).
    pub sigma: f64,
    /// Profit-taking coupling (> 0).
    pub e: f64,
    /// Exponent modifier in `(0, 1]`.
    pub nu: f64,
    /// Inter-event lag (> 0).
    pub tau: f64,
    /// Emigration/decay rate (≥ 0).
    pub lambda: f64,
}

impl ImpactParams {
    pub fn validate(&self) -> Result<()> {
        if !(self.sigma > 0.0) {
            return domain("sigma must be > 0");
        }
        if !(self.e > 0.0) {
            return domain("e must be > 0");
        }
        if !(self.nu > 0.0 && self.nu <= 1.0) {
            return domain("nu must lie in (0, 1]");
        }
        if !(self.tau > 0.0) {
            return domain("tau must be > 0");
        }
        if self.a < 0.0 || self.b < 0.0 || self.lambda < 0.0 {
            return domain("a, b and lambda must be >= 0");
        }
        Ok(())
    }
}

/// Classification of the characteristic equation `r² − 2d r + a = 0`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum RootKind {
    RealDistinct,
    Double,
    Oscillatory,
}

/// Roots of the characteristic equation of the price system.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CharacteristicRoots {
    /// Half-exponent `(c − b)/2`.
    pub d: f64,
    /// Discriminant `d² − a`.
    pub disc: f64,
    pub kind: RootKind,
    /// Larger real root (real-distinct only).
    pub r1: Option<f64>,
    /// Smaller real root (real-distinct only).
    pub r2: Option<f64>,
    /// `√(−D)` (oscillatory only).
    pub freq: Option<f64>,
}

/// Roots of `r² − (c − b) r + a = 0`.
pub fn char_roots(a: f64, b: f64, c: f64) -> CharacteristicRoots {
    let d = (c - b) / 2.0;
    let disc = d * d - a;
    if disc > 0.0 {
        let s = disc.sqrt();
        // Cancellation-free pair: the root of larger magnitude first, the
        // other one from the product r1·r2 = a.
        let big = if d >= 0.0 { d + s } else { d - s };
        let small = if big != 0.0 { a / big } else { d - s };
        let (r1, r2) = if big >= small { (big, small) } else { (small, big) };
        CharacteristicRoots { d, disc, kind: RootKind::RealDistinct, r1: Some(r1), r2: Some(r2), freq: None }
    } else if disc == 0.0 {
        CharacteristicRoots { d, disc, kind: RootKind::Double, r1: None, r2: None, freq: None }
    } else {
        CharacteristicRoots {
            d,
            disc,
            kind: RootKind::Oscillatory,
            r1: None,
            r2: None,
            freq: Some((-disc).sqrt()),
        }
    }
}

/// General solution of `t² p″ + (1 − c + b) t p′ + a p = 0` (natural log).
///
/// The double-root case uses the basis `{t^d, t^d ln t}`.
pub fn price_path(roots: &CharacteristicRoots, c1: f64, c2: f64, t: f64) -> Result<f64> {
    if !(t > 0.0) {
        return domain(format!("price_path requires t > 0, got {t}"));
    }
    let lt = t.ln();
    Ok(match roots.kind {
        RootKind::RealDistinct => {
            let (r1, r2) = (roots.r1.unwrap_or(0.0), roots.r2.unwrap_or(0.0));
            c1 * t.powf(r1) + c2 * t.powf(r2)
        }
        RootKind::Double => t.powf(roots.d) * (c1 + c2 * lt),
        RootKind::Oscillatory => {
            let w = roots.freq.unwrap_or(0.0);
            t.powf(roots.d) * (c1 * (w * lt).sin() + c2 * (w * lt).cos())
        }
    })
}

/// Logistic solution for `a = 0`:
/// `u = (β + B t^(r−β)) / (r + B t^(r−β))`, `p = σ (b u + β)`, `r = c − b`.
///
/// It satisfies `t u′ = (1 − u)(r u − β)` and `p′ = σ b u′`, i.e. the
/// saturated upgrade equation together with the unchanged price equation.
pub fn logistic_solution(c: f64, b: f64, beta: f64, big_b: f64, sigma: f64, t: f64) -> Result<(f64, f64)> {
    let r = c - b;
    if !(r > 0.0) {
        return domain(format!("logistic solution requires r = c - b > 0, got {r}"));
    }
    if !(beta >= 0.0 && beta < r) {
        return domain(format!("logistic solution requires 0 <= beta < r, got beta = {beta}, r = {r}"));
    }
    if big_b < 0.0 || t < 0.0 {
        return domain("logistic solution requires B >= 0 and t >= 0");
    }
    let w = if t == 0.0 { 0.0 } else { big_b * t.powf(r - beta) };
    let u = (beta + w) / (r + w);
    Ok((u, sigma * (b * u + beta)))
}

/// Order of the profit-taking Bessel pair, `(1 + c)/2`.
pub fn profit_order(c: f64) -> f64 {
    (1.0 + c) / 2.0
}

fn check_profit_args(e: f64, t: f64) -> Result<()> {
    if !(t > 0.0) {
        return domain(format!("requires t > 0, got {t}"));
    }
    if !(e > 0.0) {
        return domain(format!("requires e > 0, got {e}"));
    }
    Ok(())
}

/// Profit-taking path `A1 p₁ + A2 p₂`, `p_{1,2} = t^((1+c)/2) J_{±(1+c)/2}(√e t)`,
/// solving `t² p″ − c t p′ + e t² p = 0`.
pub fn profit_path(c: f64, e: f64, a1: f64, a2: f64, t: f64) -> Result<f64> {
    check_profit_args(e, t)?;
    let nu = profit_order(c);
    let x = e.sqrt() * t;
    let amp = t.powf(nu);
    let mut v = 0.0;
    if a1 != 0.0 {
        v += a1 * amp * bessel_j(nu, x)?;
    }
    if a2 != 0.0 {
        v += a2 * amp * bessel_j(-nu, x)?;
    }
    Ok(v)
}

/// Phases `φ_{1,2} = ±(1 + c)π/4 + π/4` of the large-`t` form of
/// [`profit_path`].
///
/// Derived from `J_ν(x) ≈ √(2/(πx)) cos(x − νπ/2 − π/4)` with
/// `ν = ±(1 + c)/2`.
pub fn profit_phases(c: f64) -> (f64, f64) {
    let h = (1.0 + c) * PI / 4.0;
    (h + PI / 4.0, -h + PI / 4.0)
}

/// Large-`t` form `t^(c/2) C (A1 cos(√e t − φ₁) + A2 cos(√e t − φ₂))`,
/// `C = √(2/(π√e))`; period `2π/√e`.
pub fn profit_path_asymptotic(c: f64, e: f64, a1: f64, a2: f64, t: f64) -> Result<f64> {
    check_profit_args(e, t)?;
    let (p1, p2) = profit_phases(c);
    let w = e.sqrt();
    let amp = t.powf(c / 2.0) * (2.0 / (PI * w)).sqrt();
    Ok(amp * (a1 * (w * t - p1).cos() + a2 * (w * t - p2).cos()))
}

/// Fundamental pair `t^(c/2) J_{±c/ν}(2√e t^(ν/2)/ν)` of
/// `t² p″ + (1 − c) t p′ + e t^ν p = 0`.
///
/// When `c/ν` is an integer `n` the two members are linearly dependent
/// (`J_{−n} = (−1)ⁿ J_n`); the pair is still returned and the second member is
/// then `(−1)ⁿ` times the first.
pub fn modified_profit_path(c: f64, e: f64, nu: f64, t: f64) -> Result<(f64, f64)> {
    check_profit_args(e, t)?;
    if !(nu > 0.0 && nu <= 1.0) {
        return domain(format!("requires 0 < nu <= 1, got {nu}"));
    }
    let order = c / nu;
    let x = modified_argument(e, nu, t);
    let amp = t.powf(c / 2.0);
    Ok((amp * bessel_j(order, x)?, amp * bessel_j(-order, x)?))
}

/// Bessel argument `2√e t^(ν/2)/ν` of [`modified_profit_path`].
pub fn modified_argument(e: f64, nu: f64, t: f64) -> f64 {
    2.0 * e.sqrt() * t.powf(nu / 2.0) / nu
}

/// Exponents `(α, β) = −c/2 ± √(c²/4 − a)` of the two-event model, with
/// `c = c₀ + c_τ`; `α` is the `+` root.
pub fn two_event_exponents(a: f64, c0: f64, c_tau: f64) -> Result<(f64, f64)> {
    let c = c0 + c_tau;
    let disc = c * c / 4.0 - a;
    if disc < 0.0 {
        return domain(format!("two-event exponents are complex (c^2/4 - a = {disc})"));
    }
    let s = disc.sqrt();
    Ok((-c / 2.0 + s, -c / 2.0 - s))
}

fn nonpositive_integer(v: f64) -> bool {
    v <= 0.0 && v == v.floor()
}

/// Two-event price model
/// `t(t+τ) p″ + ((1 − c) t + (1 − c₀) τ) p′ + a p = 0`, `c = c₀ + c_τ`.
///
/// Returns `(p, p1, p2)`:
/// * `p = F(α, β; 1 − c₀; −t/τ)` — regular at `t = 0`, needs `t < τ`;
/// * `p1 = t^(−β) F(β, −α − c_τ; 1 + β − α; −τ/t)`, `p2` likewise with
///   `α ↔ β` — the solutions growing like `t^(−β)`, `t^(−α)`, need `t > τ`.
///
/// Members whose series argument is outside the unit disc are `None`; if
/// none of the three is evaluable a domain error is returned.
pub fn two_event_price(a: f64, c0: f64, c_tau: f64, tau: f64, t: f64) -> Result<(Option<f64>, Option<f64>, Option<f64>)> {
    if !(tau > 0.0) {
        return domain(format!("two-event model requires tau > 0, got {tau}"));
    }
    if !(t >= 0.0) {
        return domain(format!("two-event model requires t >= 0, got {t}"));
    }
    let (alpha, beta) = two_event_exponents(a, c0, c_tau)?;
    let gamma_ = 1.0 - c0;
    let p = if t / tau < 1.0 {
        if nonpositive_integer(gamma_) {
            return domain(format!("gamma = 1 - c0 = {gamma_} is a non-positive integer"));
        }
        Some(hyp2f1(alpha, beta, gamma_, -t / tau)?)
    } else {
        None
    };
    let (p1, p2) = if t > tau {
        let z = -tau / t;
        let g1 = 1.0 + beta - alpha;
        let g2 = 1.0 + alpha - beta;
        let p1 = if nonpositive_integer(g1) { None } else { Some(t.powf(-beta) * hyp2f1(beta, -alpha - c_tau, g1, z)?) };
        let p2 = if nonpositive_integer(g2) { None } else { Some(t.powf(-alpha) * hyp2f1(alpha, -beta - c_tau, g2, z)?) };
        (p1, p2)
    } else {
        (None, None)
    };
    if p.is_none() && p1.is_none() && p2.is_none() {
        return domain(format!("no convergent series at t = {t}, tau = {tau}"));
    }
    Ok((p, p1, p2))
}

/// Tree-growth recurrence `f_k = f_{k−1} + c f_{k−2}/(k − 2) − λ f_{k−1}`.
///
/// Returns `f_1, …, f_n` (index `k` at position `k − 1`).
pub fn tree_growth(c: f64, lambda: f64, f1: f64, f2: f64, n: usize) -> Result<Vec<f64>> {
    if n <= 2 {
        return domain(format!("tree_growth requires n > 2, got {n}"));
    }
    let mut f = Vec::with_capacity(n);
    f.push(f1);
    f.push(f2);
    for k in 3..=n {
        let prev = f[k - 2];
        let prev2 = f[k - 3];
        f.push(prev + c * prev2 / (k - 2) as f64 - lambda * prev);
    }
    Ok(f)
}
