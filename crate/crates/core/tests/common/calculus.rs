//! Finite-difference and sampling helpers.

/// First and second derivatives by 5-point central stencils (O(h⁴)).
pub fn derivs(f: &dyn Fn(f64) -> f64, t: f64, h: f64) -> (f64, f64, f64) {
    let (fm2, fm1, f0, fp1, fp2) = (f(t - 2.0 * h), f(t - h), f(t), f(t + h), f(t + 2.0 * h));
    let d1 = (fm2 - 8.0 * fm1 + 8.0 * fp1 - fp2) / (12.0 * h);
    let d2 = (-fm2 + 16.0 * fm1 - 30.0 * f0 + 16.0 * fp1 - fp2) / (12.0 * h * h);
    (f0, d1, d2)
}

/// |Σ terms| / Σ |terms|: residual relative to the size of the equation.
pub fn rel(terms: &[f64]) -> f64 {
    let s: f64 = terms.iter().sum();
    let m: f64 = terms.iter().map(|x| x.abs()).sum();
    if m == 0.0 {
        0.0
    } else {
        s.abs() / m
    }
}

pub fn grid(a: f64, b: f64, n: usize) -> Vec<f64> {
    (0..n).map(|i| a + (b - a) * i as f64 / (n - 1) as f64).collect()
}

/// Local maxima of `f` on a uniform grid of `n` points.
pub fn peaks(f: &dyn Fn(f64) -> f64, a: f64, b: f64, n: usize) -> Vec<(f64, f64)> {
    let xs = grid(a, b, n);
    let ys: Vec<f64> = xs.iter().map(|&x| f(x)).collect();
    let mut out = Vec::new();
    for i in 1..n - 1 {
        if ys[i] > ys[i - 1] && ys[i] >= ys[i + 1] {
            out.push((xs[i], ys[i]));
        }
    }
    out
}
