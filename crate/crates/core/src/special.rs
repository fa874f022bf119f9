//! Special functions: Gamma, Bessel functions of the first kind and the
//! Gauss hypergeometric series.
//!
//! The Bessel power series is summed in double-double arithmetic: for
//! `x ≈ 25` the individual terms reach ~1e9 while the sum is O(0.1), so plain
//! `f64` summation would lose about seven significant digits to cancellation.

use crate::error::{domain, Result};
use std::f64::consts::PI;

const LANCZOS_G: f64 = 7.0;
const LANCZOS: [f64; 9] = [
    0.999_999_999_999_809_9,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_1,
    -176.615_029_162_140_6,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_572e-6,
    1.505_632_735_149_311_6e-7,
];

/// Gamma function for real arguments (Lanczos approximation with reflection).
///
/// Returns `±inf` at the poles `0, −1, −2, …`.
pub fn gamma(x: f64) -> f64 {
    if x <= 0.0 && x == x.floor() {
        return f64::INFINITY;
    }
    if x < 0.5 {
        return PI / ((PI * x).sin() * gamma(1.0 - x));
    }
    if x == x.floor() && x <= 171.0 {
        // Exact factorials for small integers.
        let mut acc = 1.0;
        let mut k = 2.0;
        while k < x {
            acc *= k;
            k += 1.0;
        }
        return acc;
    }
    let x = x - 1.0;
    let mut a = LANCZOS[0];
    let t = x + LANCZOS_G + 0.5;
    for (i, &coef) in LANCZOS.iter().enumerate().skip(1) {
        a += coef / (x + i as f64);
    }
    (2.0 * PI).sqrt() * t.powf(x + 0.5) * (-t).exp() * a
}

/// Reciprocal Gamma function; zero at the poles of Γ.
pub fn rgamma(x: f64) -> f64 {
    if x <= 0.0 && x == x.floor() {
        return 0.0;
    }
    1.0 / gamma(x)
}

/// Minimal double-double number (`hi + lo`, |lo| ≤ ulp(hi)/2).
#[derive(Debug, Clone, Copy)]
struct Dd {
    hi: f64,
    lo: f64,
}

impl Dd {
    fn new(x: f64) -> Self {
        Dd { hi: x, lo: 0.0 }
    }

    fn two_sum(a: f64, b: f64) -> Dd {
        let s = a + b;
        let bb = s - a;
        let err = (a - (s - bb)) + (b - bb);
        Dd { hi: s, lo: err }
    }

    fn quick_two_sum(a: f64, b: f64) -> Dd {
        let s = a + b;
        Dd { hi: s, lo: b - (s - a) }
    }

    fn add(self, o: Dd) -> Dd {
        let s = Dd::two_sum(self.hi, o.hi);
        let t = Dd::two_sum(self.lo, o.lo);
        let s = Dd::quick_two_sum(s.hi, s.lo + t.hi);
        Dd::quick_two_sum(s.hi, s.lo + t.lo)
    }

    fn mul(self, o: Dd) -> Dd {
        let p = self.hi * o.hi;
        let e = self.hi.mul_add(o.hi, -p);
        Dd::quick_two_sum(p, e + (self.hi * o.lo + self.lo * o.hi))
    }

    fn div(self, o: Dd) -> Dd {
        let q1 = self.hi / o.hi;
        let r = self.add(o.mul(Dd::new(-q1)));
        let q2 = r.hi / o.hi;
        let r = r.add(o.mul(Dd::new(-q2)));
        let q3 = r.hi / o.hi;
        Dd::quick_two_sum(q1, q2).add(Dd::new(q3))
    }

    fn neg(self) -> Dd {
        Dd { hi: -self.hi, lo: -self.lo }
    }

    fn abs_hi(self) -> f64 {
        self.hi.abs()
    }

    fn to_f64(self) -> f64 {
        self.hi + self.lo
    }
}

/// Series crossover for the Bessel function: `max(25, 2α²)`.
pub fn bessel_crossover(alpha: f64) -> f64 {
    25.0_f64.max(2.0 * alpha * alpha)
}

fn negative_integer(alpha: f64) -> Option<i64> {
    if alpha < 0.0 && alpha == alpha.floor() {
        Some(-(alpha as i64))
    } else {
        None
    }
}

/// Bessel function of the first kind `J_α(x)` for real order and `x ≥ 0`.
///
/// Uses the power series below [`bessel_crossover`] and Hankel's asymptotic
/// expansion above it. Negative integer orders use `J_{−n} = (−1)ⁿ J_n`.
pub fn bessel_j(alpha: f64, x: f64) -> Result<f64> {
    check_bessel_args(alpha, x)?;
    if let Some(n) = negative_integer(alpha) {
        let v = bessel_j(n as f64, x)?;
        return Ok(if n % 2 == 0 { v } else { -v });
    }
    if x >= bessel_crossover(alpha) {
        Ok(bessel_j_hankel(alpha, x))
    } else {
        bessel_j_series(alpha, x)
    }
}

fn check_bessel_args(alpha: f64, x: f64) -> Result<()> {
    if !alpha.is_finite() || !x.is_finite() {
        return domain("bessel_j requires finite order and argument");
    }
    if x < 0.0 {
        return domain(format!("bessel_j requires x >= 0, got {x}"));
    }
    if x == 0.0 && alpha < 0.0 && negative_integer(alpha).is_none() {
        return domain(format!("J_{alpha}(0) is unbounded for negative non-integer order"));
    }
    Ok(())
}

/// Power series `Σ (−1)^m (x/2)^(2m+α) / (m! Γ(m+α+1))`, summed in
/// double-double precision. Valid for any `x ≥ 0` (cost grows with `x`).
///
/// Summation stops once the next term is below `1e−15` of the running sum for
/// three consecutive terms, which guards against stopping on a term that is
/// accidentally small.
pub fn bessel_j_series(alpha: f64, x: f64) -> Result<f64> {
    check_bessel_args(alpha, x)?;
    if let Some(n) = negative_integer(alpha) {
        let v = bessel_j_series(n as f64, x)?;
        return Ok(if n % 2 == 0 { v } else { -v });
    }
    if x == 0.0 {
        return Ok(if alpha == 0.0 { 1.0 } else { 0.0 });
    }
    let half = x / 2.0;
    let first = half.powf(alpha) * rgamma(alpha + 1.0);
    if first == 0.0 {
        return Ok(0.0);
    }
    let q = Dd::new(half).mul(Dd::new(half)).neg();
    let mut term = Dd::new(first);
    let mut sum = term;
    let mut small_run = 0;
    let mut m = 1.0_f64;
    while m < 10_000.0 {
        let denom = Dd::new(m).mul(Dd::two_sum(m, alpha));
        term = term.mul(q).div(denom);
        sum = sum.add(term);
        if term.abs_hi() < 1e-15 * sum.abs_hi() {
            small_run += 1;
            if small_run >= 3 {
                break;
            }
        } else {
            small_run = 0;
        }
        m += 1.0;
    }
    Ok(sum.to_f64())
}

/// Hankel asymptotic expansion
/// `J_α(x) ≈ √(2/(πx)) (P cos χ − Q sin χ)`, `χ = x − απ/2 − π/4`,
/// truncated at its smallest term.
pub fn bessel_j_hankel(alpha: f64, x: f64) -> f64 {
    let mu = 4.0 * alpha * alpha;
    let mut p = 1.0;
    let mut q = 0.0;
    let mut a = 1.0; // a_k(α)/x^k
    let mut prev = f64::INFINITY;
    for k in 1..200 {
        let kf = k as f64;
        let odd = 2.0 * kf - 1.0;
        a *= (mu - odd * odd) / (kf * 8.0 * x);
        let mag = a.abs();
        if mag == 0.0 {
            break;
        }
        if mag > prev {
            break;
        }
        prev = mag;
        let sign = if (k / 2) % 2 == 0 { 1.0 } else { -1.0 };
        if k % 2 == 0 {
            p += sign * a;
        } else {
            q += sign * a;
        }
        if mag < 1e-17 {
            break;
        }
    }
    let chi = x - (alpha / 2.0 + 0.25) * PI;
    (2.0 / (PI * x)).sqrt() * (p * chi.cos() - q * chi.sin())
}

/// Leading term only: `√(2/(πx))·cos(x − απ/2 − π/4)`.
pub fn bessel_j_leading(alpha: f64, x: f64) -> f64 {
    (2.0 / (PI * x)).sqrt() * (x - alpha * PI / 2.0 - PI / 4.0).cos()
}

fn nonpositive_integer(v: f64) -> bool {
    v <= 0.0 && v == v.floor()
}

/// Gauss hypergeometric series `₂F₁(α, β; γ; z)` for `|z| < 1`.
///
/// Terms are accumulated until three consecutive terms fall below `1e−16` of
/// the partial sum (or the series terminates for non-positive integer α/β).
pub fn hyp2f1(alpha: f64, beta: f64, gamma_: f64, z: f64) -> Result<f64> {
    if !(alpha.is_finite() && beta.is_finite() && gamma_.is_finite() && z.is_finite()) {
        return domain("hyp2f1 requires finite parameters");
    }
    if z.abs() >= 1.0 {
        return domain(format!("hyp2f1 series requires |z| < 1, got z = {z}"));
    }
    if nonpositive_integer(gamma_) {
        return domain(format!("hyp2f1 undefined for gamma = {gamma_}"));
    }
    let mut term = 1.0_f64;
    let mut sum = 1.0_f64;
    let mut small_run = 0;
    for m in 0..1_000_000u32 {
        let mf = m as f64;
        term *= (alpha + mf) * (beta + mf) / ((gamma_ + mf) * (mf + 1.0)) * z;
        sum += term;
        if term == 0.0 {
            break;
        }
        if term.abs() < 1e-16 * sum.abs().max(f64::MIN_POSITIVE) {
            small_run += 1;
            if small_run >= 3 {
                break;
            }
        } else {
            small_run = 0;
        }
    }
    Ok(sum)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gamma_matches_factorials_and_half_integers() {
        assert_eq!(gamma(5.0), 24.0);
        assert!((gamma(0.5) - PI.sqrt()).abs() < 1e-14);
        assert!((gamma(-0.5) + 2.0 * PI.sqrt()).abs() < 1e-13);
        assert!((gamma(4.5) - 11.631_728_396_567_448).abs() < 1e-12);
        assert_eq!(rgamma(-3.0), 0.0);
    }

    #[test]
    fn bessel_at_zero() {
        assert_eq!(bessel_j(0.0, 0.0).unwrap(), 1.0);
        assert_eq!(bessel_j(1.5, 0.0).unwrap(), 0.0);
        assert!(bessel_j(0.0, -1.0).is_err());
    }

    #[test]
    fn half_integer_closed_form() {
        let x = PI / 2.0;
        let v = bessel_j(0.5, x).unwrap();
        assert!((v - 2.0 / PI).abs() < 1e-14, "{v}");
        for &x in &[0.3, 2.0, 7.5, 19.0, 24.9, 30.0, 80.0] {
            let exact = (2.0 / (PI * x)).sqrt() * x.sin();
            assert!((bessel_j(0.5, x).unwrap() - exact).abs() < 1e-13, "x={x}");
            let exact_m = (2.0 / (PI * x)).sqrt() * x.cos();
            assert!((bessel_j(-0.5, x).unwrap() - exact_m).abs() < 1e-13, "x={x}");
        }
    }

    #[test]
    fn negative_integer_order_reflection() {
        let a = bessel_j(-3.0, 4.2).unwrap();
        let b = bessel_j(3.0, 4.2).unwrap();
        assert!((a + b).abs() < 1e-15);
    }

    #[test]
    fn hyp2f1_log_closed_form() {
        let v = hyp2f1(1.0, 1.0, 2.0, -0.5).unwrap();
        assert!((v - 1.5f64.ln() / 0.5).abs() < 1e-14);
        assert_eq!(hyp2f1(0.3, 0.7, 1.2, 0.0).unwrap(), 1.0);
        assert!(hyp2f1(1.0, 1.0, 2.0, 1.0).is_err());
        assert!(hyp2f1(1.0, 1.0, -2.0, 0.1).is_err());
    }

    #[test]
    fn hyp2f1_terminating_polynomial() {
        // F(−2, b; c; z) = 1 − 2bz/c + b(b+1)z²/(c(c+1))
        let (b, c, z) = (1.5, 2.5, 0.4);
        let exact = 1.0 - 2.0 * b * z / c + b * (b + 1.0) * z * z / (c * (c + 1.0));
        assert!((hyp2f1(-2.0, b, c, z).unwrap() - exact).abs() < 1e-15);
    }
}
