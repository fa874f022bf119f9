//! Synthetic "algebraic volatility" charts and power-law exponent estimation.

use crate::bids::g;
use crate::error::{domain, Error, Result};
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;
use std::io::{BufRead, Write};

/// A sampled chart: strictly increasing times (hours) and finite values.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChartSeries {
    pub times: Vec<f64>,
    pub values: Vec<f64>,
    pub meta: String,
}

impl ChartSeries {
    pub fn new(times: Vec<f64>, values: Vec<f64>, meta: impl Into<String>) -> Result<Self> {
        if times.len() != values.len() {
            return Err(Error::InvalidData(format!(
                "times and values differ in length ({} vs {})",
                times.len(),
                values.len()
            )));
        }
        if times.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(Error::InvalidData("chart times must be strictly increasing".into()));
        }
        if times.iter().chain(values.iter()).any(|v| !v.is_finite()) {
            return Err(Error::InvalidData("chart samples must be finite".into()));
        }
        Ok(ChartSeries { times, values, meta: meta.into() })
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    /// Multiply every value by `k`.
    pub fn scaled(&self, k: f64) -> ChartSeries {
        ChartSeries {
            times: self.times.clone(),
            values: self.values.iter().map(|v| v * k).collect(),
            meta: self.meta.clone(),
        }
    }

    /// Write as CSV with header `t_hours,value`.
    pub fn write_csv<W: Write>(&self, mut w: W) -> Result<()> {
        writeln!(w, "t_hours,value")?;
        for (t, v) in self.times.iter().zip(&self.values) {
            writeln!(w, "{t},{v}")?;
        }
        Ok(())
    }

    /// Read the CSV produced by [`ChartSeries::write_csv`].
    pub fn read_csv<R: BufRead>(r: R, meta: impl Into<String>) -> Result<Self> {
        let mut times = Vec::new();
        let mut values = Vec::new();
        for (i, line) in r.lines().enumerate() {
            let line = line?;
            let lineno = i + 1;
            if i == 0 {
                if line.trim() != "t_hours,value" {
                    return Err(Error::Parse { line: 1, msg: "expected header 't_hours,value'".into() });
                }
                continue;
            }
            if line.trim().is_empty() {
                continue;
            }
            let mut parts = line.split(',');
            let (Some(t), Some(v), None) = (parts.next(), parts.next(), parts.next()) else {
                return Err(Error::Parse { line: lineno, msg: "expected two fields".into() });
            };
            let t: f64 = t.trim().parse().map_err(|_| Error::Parse { line: lineno, msg: format!("bad time '{t}'") })?;
            let v: f64 = v.trim().parse().map_err(|_| Error::Parse { line: lineno, msg: format!("bad value '{v}'") })?;
            times.push(t);
            values.push(v);
        }
        ChartSeries::new(times, values, meta)
    }
}

/// Uniform grid `start, start+step, …` up to and including `end` (within
/// half a step).
pub fn uniform_grid(start: f64, end: f64, step: f64) -> Vec<f64> {
    let n = ((end - start) / step + 1e-9).floor() as usize;
    (0..=n).map(|i| start + i as f64 * step).collect()
}

/// Which terms of the model chart to include.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum FakeComponent {
    Both,
    /// `0.4(1 − sin t/3) cos(2π ln t) g(t, 1)`
    Super,
    /// `0.5(1 − sin(t/5)/3) sin(2π ln t) g(t + 12, 3)`
    Ultra,
}

/// Model chart (percent):
/// `p(t) = 0.4(1 − sin t/3) cos(2π ln t) g(t,1)
///       + 0.5(1 − sin(t/5)/3) sin(2π ln t) g(t+12,3)`.
pub fn fake_chart(grid: &[f64]) -> Result<ChartSeries> {
    fake_chart_component(grid, FakeComponent::Both)
}

/// [`fake_chart`] restricted to one or both of its terms.
pub fn fake_chart_component(grid: &[f64], which: FakeComponent) -> Result<ChartSeries> {
    let mut values = Vec::with_capacity(grid.len());
    for &t in grid {
        if !(t >= 1.0) {
            return domain(format!("fake chart is defined for t >= 1h, got {t}"));
        }
        let phase = 2.0 * PI * t.ln();
        let first = 0.4 * (1.0 - t.sin() / 3.0) * phase.cos() * g(t, 1)?;
        let second = 0.5 * (1.0 - (t / 5.0).sin() / 3.0) * phase.sin() * g(t + 12.0, 3)?;
        values.push(match which {
            FakeComponent::Both => first + second,
            FakeComponent::Super => first,
            FakeComponent::Ultra => second,
        });
    }
    let meta = match which {
        FakeComponent::Both => "fake-chart",
        FakeComponent::Super => "fake-chart:super-term",
        FakeComponent::Ultra => "fake-chart:ultra-term",
    };
    ChartSeries::new(grid.to_vec(), values, meta)
}

/// Convert a percent chart to prices `100 (1 + p/100)`.
pub fn percent_to_prices(chart: &ChartSeries) -> Vec<f64> {
    chart.values.iter().map(|p| 100.0 * (1.0 + p / 100.0)).collect()
}

fn local_maxima(t: &[f64], a: &[f64]) -> Vec<usize> {
    let mut out = Vec::new();
    let n = a.len();
    let mut i = 1;
    while i + 1 < n {
        if a[i] > a[i - 1] {
            // Walk across a plateau.
            let mut j = i;
            while j + 1 < n && a[j + 1] == a[i] {
                j += 1;
            }
            if j + 1 < n && a[j + 1] < a[i] {
                out.push((i + j) / 2);
            }
            i = j + 1;
        } else {
            i += 1;
        }
    }
    let _ = t;
    out
}

/// Vertex of the parabola through three points, if it is a maximum lying in
/// the bracketing interval.
fn parabolic_peak(x: [f64; 3], y: [f64; 3]) -> Option<(f64, f64)> {
    let d1 = (y[1] - y[0]) / (x[1] - x[0]);
    let d2 = (y[2] - y[1]) / (x[2] - x[1]);
    let curv = (d2 - d1) / (x[2] - x[0]);
    if !(curv < 0.0) {
        return None;
    }
    // y = y1 + s (x − x1) + curv (x − x1)²  with slope s at x1
    let s = d1 + curv * (x[1] - x[0]);
    let xv = x[1] - s / (2.0 * curv);
    if xv < x[0] || xv > x[2] {
        return None;
    }
    let yv = y[1] + s * (xv - x[1]) + curv * (xv - x[1]) * (xv - x[1]);
    Some((xv, yv.max(y[1])))
}

fn slope_fit(points: &[(f64, f64)]) -> f64 {
    let n = points.len() as f64;
    let mx = points.iter().map(|p| p.0).sum::<f64>() / n;
    let my = points.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = points.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = points.iter().map(|p| (p.0 - mx) * (p.0 - mx)).sum();
    sxy / sxx
}

/// Upper envelope of `|value|` used by [`estimate_exponent`], as
/// `(t, amplitude)` pairs.
///
/// * If `|value|` is monotone the whole series is its own envelope.
/// * Otherwise the local maxima of `|value|`, each refined by a parabola
///   through its neighbours so that coarse grids do not bias the peak height.
/// * If those maxima themselves oscillate (a slow modulation on top of the
///   fast one) with at least three peaks, the maxima of the maxima are used.
pub fn envelope(chart: &ChartSeries) -> Result<Vec<(f64, f64)>> {
    let t = &chart.times;
    let a: Vec<f64> = chart.values.iter().map(|v| v.abs()).collect();
    let increasing = a.windows(2).all(|w| w[1] >= w[0]);
    let decreasing = a.windows(2).all(|w| w[1] <= w[0]);
    if increasing || decreasing {
        return Ok(t.iter().copied().zip(a.iter().copied()).filter(|p| p.1 > 0.0).collect());
    }
    let idx = local_maxima(t, &a);
    let peaks: Vec<(f64, f64)> = idx
        .iter()
        .map(|&i| {
            parabolic_peak([t[i - 1], t[i], t[i + 1]], [a[i - 1], a[i], a[i + 1]]).unwrap_or((t[i], a[i]))
        })
        .filter(|p| p.1 > 0.0)
        .collect();
    if peaks.len() >= 3 {
        let pt: Vec<f64> = peaks.iter().map(|p| p.0).collect();
        let pa: Vec<f64> = peaks.iter().map(|p| p.1).collect();
        let second = local_maxima(&pt, &pa);
        if second.len() >= 3 {
            return Ok(second.iter().map(|&i| peaks[i]).collect());
        }
    }
    Ok(peaks)
}

/// Power-law exponent `r` of a chart: least-squares slope of
/// `ln(envelope amplitude)` against `ln t`.
pub fn estimate_exponent(chart: &ChartSeries) -> Result<f64> {
    if chart.len() < 30 {
        return Err(Error::InsufficientData(format!("need at least 30 samples, got {}", chart.len())));
    }
    let span = chart.times[chart.len() - 1] - chart.times[0];
    if !(span > 0.0) || chart.times[0] <= 0.0 {
        return Err(Error::InsufficientData("need a positive time span with t > 0".into()));
    }
    let env = envelope(chart)?;
    if env.len() < 3 {
        return Err(Error::InsufficientData(format!("need at least 3 envelope extrema, found {}", env.len())));
    }
    let pts: Vec<(f64, f64)> = env.iter().map(|&(t, a)| (t.ln(), a.ln())).collect();
    let r = slope_fit(&pts);
    if !r.is_finite() {
        return Err(Error::InsufficientData("degenerate envelope".into()));
    }
    Ok(r)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fake_chart_at_one() {
        let c = fake_chart(&[1.0]).unwrap();
        let want = 0.4 * (1.0 - 1f64.sin() / 3.0);
        assert!((c.values[0] - want).abs() < 1e-15);
        assert!((c.values[0] - 0.28780).abs() < 1e-5);
        assert!(fake_chart(&[0.5]).is_err());
    }

    #[test]
    fn fake_chart_deterministic() {
        let grid = uniform_grid(1.0, 150.0, 1.0);
        assert_eq!(grid.len(), 150);
        let a = fake_chart(&grid).unwrap();
        let b = fake_chart(&grid).unwrap();
        assert!(a.values.iter().zip(&b.values).all(|(x, y)| x.to_bits() == y.to_bits()));
    }

    #[test]
    fn pure_power_law() {
        let grid = uniform_grid(1.0, 150.0, 1.0);
        let v: Vec<f64> = grid.iter().map(|t| 2.5 * t.powf(0.3)).collect();
        let c = ChartSeries::new(grid, v, "pw").unwrap();
        assert!((estimate_exponent(&c).unwrap() - 0.3).abs() < 1e-12);
    }

    #[test]
    fn too_few_samples() {
        let grid = uniform_grid(1.0, 20.0, 1.0);
        let v: Vec<f64> = grid.iter().map(|t| t.powf(0.3)).collect();
        let c = ChartSeries::new(grid, v, "pw").unwrap();
        assert!(matches!(estimate_exponent(&c), Err(Error::InsufficientData(_))));
    }

    #[test]
    fn csv_round_trip() {
        let grid = uniform_grid(1.0, 5.0, 0.5);
        let c = fake_chart(&grid).unwrap();
        let mut buf = Vec::new();
        c.write_csv(&mut buf).unwrap();
        let back = ChartSeries::read_csv(&buf[..], "fake-chart").unwrap();
        assert_eq!(back, c);
    }

    #[test]
    fn parabola_recovers_vertex() {
        let f = |x: f64| 3.0 - (x - 1.3) * (x - 1.3);
        let (xv, yv) = parabolic_peak([1.0, 2.0, 3.5], [f(1.0), f(2.0), f(3.5)]).unwrap();
        assert!((xv - 1.3).abs() < 1e-12 && (yv - 3.0).abs() < 1e-12);
    }
}
