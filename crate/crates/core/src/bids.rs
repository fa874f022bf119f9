//! Categories, g-functions, backward bids, 2-bid ranking and the bid tables.
//!
//! Time is business time in hours: `1d = 6.5h`, `1w = 5d`, `1m = 22d`.

use crate::error::{domain, Error, Result};
use serde::{Deserialize, Serialize};
use std::cmp::Ordering;
use std::fmt::Write as _;

/// Hours in one business day.
pub const DAY: f64 = 6.5;
/// Hours in one business week (5 days).
pub const WEEK: f64 = 5.0 * DAY;
/// Hours in one business month (22 days).
pub const MONTH: f64 = 22.0 * DAY;

/// Nudge applied before flooring/rounding so that values computed as
/// `k − ε` for an exact boundary `k` land on the intended side.
const FLOOR_NUDGE: f64 = 1e-9;

fn nfloor(x: f64) -> f64 {
    (x + FLOOR_NUDGE).floor()
}

/// Named business durations used by the tables.
pub fn duration_hours(label: &str) -> Option<f64> {
    let h = match label {
        "1h" => 1.0,
        "2h" => 2.0,
        "3h" => 3.0,
        "4h" => 4.0,
        "1d" => DAY,
        "2d" => 2.0 * DAY,
        "4d" => 4.0 * DAY,
        "5d" | "1w" => WEEK,
        "15d" | "3w" => 15.0 * DAY,
        "2w" => 10.0 * DAY,
        "45d" | "2m" => 45.0 * DAY,
        "1m" => MONTH,
        "3m" => 65.0 * DAY,
        "4m" => 86.0 * DAY,
        "6m" => 126.0 * DAY,
        "9m" => 191.0 * DAY,
        "12m" => 252.0 * DAY,
        _ => return None,
    };
    Some(h)
}

/// Investment-horizon category `1..=7`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Category(u8);

impl Category {
    pub const ALL: [Category; 7] = [
        Category(1),
        Category(2),
        Category(3),
        Category(4),
        Category(5),
        Category(6),
        Category(7),
    ];

    pub fn new(index: u8) -> Result<Self> {
        if (1..=7).contains(&index) {
            Ok(Category(index))
        } else {
            domain(format!("category must be in 1..=7, got {index}"))
        }
    }

    pub fn index(self) -> u8 {
        self.0
    }

    /// Prime time-interval `t•` in hours: 1h, 2h, 1d, 2d, 1w, 2w, 1m.
    pub fn prime_interval(self) -> f64 {
        match self.0 {
            1 => 1.0,
            3 => DAY,
            5 => WEEK,
            7 => MONTH,
            even => 2.0 * Category(even - 1).prime_interval(),
        }
    }

    /// Name of odd categories.
    pub fn name(self) -> Option<&'static str> {
        match self.0 {
            1 => Some("super"),
            3 => Some("ultra"),
            5 => Some("extra"),
            7 => Some("regular"),
            _ => None,
        }
    }
}

/// Odd-category g at or beyond the prime interval.
fn g_odd_raw(t: f64, c: u8) -> f64 {
    match c {
        // The printed 0.5 prefactor is dropped: without it every table entry
        // (1, 1.49, 3, 6.49, 10.99, 15.01) is reproduced; with it none is.
        1 => nfloor(1548.0 * (0.26 * t + 0.74).powf(0.137) - 1548.0) / 100.0 + 1.0,
        3 => 2.0 * nfloor(10.0 * (2.0 * t / DAY - 1.0).powf(0.418)) / 10.0,
        5 => 0.1 * nfloor(22.875 * (2.024 * t / WEEK - 1.024).powf(0.5678) + 12.125),
        7 => 3.5 * (nfloor(10.25 * t / MONTH) / 10.0 + 1.0),
        _ => unreachable!("odd category expected"),
    }
}

fn g_odd(t: f64, c: u8) -> f64 {
    let tp = Category(c).prime_interval();
    if t >= tp {
        g_odd_raw(t, c)
    } else {
        g_odd_raw(tp, c) * (2.0 * t + tp) / (3.0 * tp)
    }
}

/// Expected percent return `g(t, c)` of a unit bid after `t` hours.
///
/// Odd categories use floored power laws beyond their prime interval and the
/// linear extension `g(t•)(2t + t•)/(3t•)` below it; even categories average
/// their odd neighbours.
pub fn g(t: f64, c: u8) -> Result<f64> {
    if !(t > 0.0) || !t.is_finite() {
        return domain(format!("g requires t > 0, got {t}"));
    }
    if !(1..=7).contains(&c) {
        return domain(format!("category must be in 1..=7, got {c}"));
    }
    Ok(if c % 2 == 1 { g_odd(t, c) } else { (g_odd(t, c - 1) + g_odd(t, c + 1)) / 2.0 })
}

/// Backward bid `Floor[100 β |p_now − p_then| / (g(span, c) p_then)]`.
pub fn bid_backward(p_now: f64, p_then: f64, span: f64, c: u8, beta: f64) -> Result<u32> {
    if !(p_now > 0.0) || !(p_then > 0.0) {
        return domain(format!("prices must be positive, got {p_now} and {p_then}"));
    }
    if !(beta >= 1.0) {
        return domain(format!("rescaling coefficient must be >= 1, got {beta}"));
    }
    let gv = g(span, c)?;
    let raw = 100.0 * beta * (p_now - p_then).abs() / (gv * p_then);
    Ok(nfloor(raw).max(0.0) as u32)
}

/// Discretized forecast unit: bid `b`, category `c`, depth `m`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct TwoBid {
    pub b: u32,
    pub c: u8,
    pub m: u32,
}

impl TwoBid {
    pub fn admissible(&self) -> bool {
        self.b >= 1
    }

    /// Span `m·t•_c` in hours.
    pub fn span(&self) -> f64 {
        self.m as f64 * Category(self.c).prime_interval()
    }

    /// Ranking order: `Less` means `self` ranks higher (larger b, then
    /// smaller c, then smaller m).
    pub fn rank_cmp(&self, other: &TwoBid) -> Ordering {
        other.b.cmp(&self.b).then(self.c.cmp(&other.c)).then(self.m.cmp(&other.m))
    }

    /// True when `self` ranks strictly above `other`.
    pub fn beats(&self, other: &TwoBid) -> bool {
        self.rank_cmp(other) == Ordering::Less
    }
}

/// Stable sort of 2-bids, top first.
pub fn rank(bids: &[TwoBid]) -> Result<Vec<TwoBid>> {
    if bids.is_empty() {
        return Err(Error::Empty("rank requires at least one 2-bid".into()));
    }
    let mut out = bids.to_vec();
    out.sort_by(|a, b| a.rank_cmp(b));
    Ok(out)
}

/// The printed bid tables.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TableKind {
    Super,
    Ultra,
    Extra,
    Regular,
    Min4Cat,
    Min7Cat,
}

impl TableKind {
    pub const ALL: [TableKind; 6] =
        [TableKind::Super, TableKind::Ultra, TableKind::Extra, TableKind::Regular, TableKind::Min4Cat, TableKind::Min7Cat];

    pub fn parse(s: &str) -> Result<Self> {
        Ok(match s {
            "super" => TableKind::Super,
            "ultra" => TableKind::Ultra,
            "extra" => TableKind::Extra,
            "regular" => TableKind::Regular,
            "min-4cat" => TableKind::Min4Cat,
            "min-7cat" => TableKind::Min7Cat,
            other => return Err(Error::Config(format!("unknown table kind '{other}'"))),
        })
    }

    pub fn name(self) -> &'static str {
        match self {
            TableKind::Super => "super",
            TableKind::Ultra => "ultra",
            TableKind::Extra => "extra",
            TableKind::Regular => "regular",
            TableKind::Min4Cat => "min-4cat",
            TableKind::Min7Cat => "min-7cat",
        }
    }
}

/// A rendered table: labelled rows of optional cells (`None` = below the
/// category's prime interval, printed as `---`).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Table {
    pub kind: TableKind,
    pub corner: String,
    pub columns: Vec<String>,
    pub rows: Vec<(String, Vec<Option<f64>>)>,
    /// Decimal places used when rendering.
    pub decimals: usize,
}

/// Round half-up to `places` decimals with the floor nudge.
pub fn round_to(x: f64, places: i32) -> f64 {
    let s = 10f64.powi(places);
    nfloor(x * s + 0.5) / s
}

fn category_table(kind: TableKind, c: u8, corner: &str, cols: &[&str], bids: u32) -> Table {
    let g_rounded: Vec<f64> = cols
        .iter()
        .map(|l| round_to(g(duration_hours(l).expect("known duration"), c).expect("valid g"), 1))
        .collect();
    let rows = (1..=bids)
        .map(|b| (b.to_string(), g_rounded.iter().map(|gv| Some(round_to(b as f64 * gv, 2))).collect()))
        .collect();
    Table { kind, corner: corner.into(), columns: cols.iter().map(|s| s.to_string()).collect(), rows, decimals: 1 }
}

fn min_table(kind: TableKind, cats: &[u8], cols: &[(&str, f64)], decimals: usize) -> Table {
    let rows = cats
        .iter()
        .map(|&c| {
            let tp = Category(c).prime_interval();
            let cells = cols
                .iter()
                .map(|&(_, h)| if h + 1e-9 < tp { None } else { Some(g(h, c).expect("valid g")) })
                .collect();
            (c.to_string(), cells)
        })
        .collect();
    Table {
        kind,
        corner: "cat".into(),
        columns: cols.iter().map(|(l, _)| l.to_string()).collect(),
        rows,
        decimals,
    }
}

/// Build any of the bid tables.
///
/// Category tables hold `b × g(T, c)` with `g` taken at its one-decimal
/// display value (which is how every printed entry such as `6 × 1.5 = 9`
/// arises). Minimal-bid tables hold raw `g(T, c)`. The 7-category table's
/// column labelled "3h" is evaluated at 4h, the only reading consistent with
/// its printed values.
pub fn build_table(kind: TableKind) -> Table {
    match kind {
        TableKind::Super => category_table(kind, 1, "b\\h", &["1h", "2h", "1d", "5d", "1m", "3m"], 6),
        TableKind::Ultra => category_table(kind, 3, "b\\d", &["1d", "2d", "5d", "15d", "45d", "6m"], 6),
        TableKind::Extra => category_table(kind, 5, "b\\w", &["1w", "2w", "1m", "3m", "9m"], 5),
        TableKind::Regular => category_table(kind, 7, "b\\m", &["1m", "2m", "4m", "12m"], 4),
        TableKind::Min4Cat => {
            let labels = ["1h", "2h", "1d", "2d", "1w", "2w", "3w", "1m", "2m", "3m", "4m", "6m", "9m"];
            let cols: Vec<(&str, f64)> = labels.iter().map(|l| (*l, duration_hours(l).unwrap())).collect();
            min_table(kind, &[7, 5, 3, 1], &cols, 1)
        }
        TableKind::Min7Cat => {
            let labels = ["1h", "2h", "3h", "1d", "2d", "4d", "1w", "2w", "1m", "2m", "3m", "4m"];
            let cols: Vec<(&str, f64)> = labels
                .iter()
                .map(|l| (*l, if *l == "3h" { 4.0 } else { duration_hours(l).unwrap() }))
                .collect();
            min_table(kind, &[1, 2, 3, 4, 5, 6, 7], &cols, 2)
        }
    }
}

/// Output format of [`render_table`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TableFormat {
    Text,
    Csv,
}

fn fmt_cell(v: Option<f64>, decimals: usize) -> String {
    match v {
        None => "---".into(),
        Some(x) => format!("{:.*}", decimals, round_to(x, decimals as i32)),
    }
}

/// Render a table as aligned text or CSV.
pub fn render_table(kind: TableKind, format: TableFormat) -> String {
    let t = build_table(kind);
    let mut out = String::new();
    match format {
        TableFormat::Csv => {
            let _ = writeln!(out, "{},{}", t.corner.replace('\\', "/"), t.columns.join(","));
            for (label, cells) in &t.rows {
                let cells: Vec<String> = cells.iter().map(|c| fmt_cell(*c, t.decimals)).collect();
                let _ = writeln!(out, "{},{}", label, cells.join(","));
            }
        }
        TableFormat::Text => {
            let width = 8;
            let _ = write!(out, "{:>5} |", t.corner);
            for c in &t.columns {
                let _ = write!(out, "{:>width$}", c);
            }
            out.push('\n');
            for (label, cells) in &t.rows {
                let _ = write!(out, "{:>5} |", label);
                for c in cells {
                    let _ = write!(out, "{:>width$}", fmt_cell(*c, t.decimals));
                }
                out.push('\n');
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn g_examples() {
        assert_eq!(g(DAY, 3).unwrap(), 2.0);
        assert_eq!(g(5.0 * DAY, 3).unwrap(), 5.0);
        assert_eq!(g(126.0 * DAY, 3).unwrap(), 20.0);
        assert_eq!(g(WEEK, 5).unwrap(), 3.5);
        assert!((g(65.0 * DAY, 5).unwrap() - 15.5).abs() < 1e-12);
        assert!((g(2.0, 1).unwrap() - 1.49).abs() < 1e-12);
        assert!((g(13.0, 1).unwrap() - 4.31).abs() < 1e-12);
        let g23 = 2.0 * (2.0 * 2.0 + DAY) / (3.0 * DAY);
        assert!((g(2.0, 3).unwrap() - g23).abs() < 1e-12);
        assert!((g(2.0, 2).unwrap() - (1.49 + g23) / 2.0).abs() < 1e-12);
        assert!((g(MONTH, 6).unwrap() - 7.75).abs() < 1e-12);
        assert!(g(0.0, 1).is_err());
        assert!(g(1.0, 8).is_err());
    }

    #[test]
    fn prime_intervals() {
        let p: Vec<f64> = Category::ALL.iter().map(|c| c.prime_interval()).collect();
        assert_eq!(p, vec![1.0, 2.0, DAY, 2.0 * DAY, WEEK, 2.0 * WEEK, MONTH]);
    }

    #[test]
    fn thresholds_at_prime_intervals() {
        for (c, want) in [(1u8, 1.0), (3, 2.0), (5, 3.5), (7, 7.0)] {
            assert_eq!(g(Category(c).prime_interval(), c).unwrap(), want);
        }
    }

    #[test]
    fn doubling_ratio() {
        for c in [1u8, 3, 5, 7] {
            let tp = Category(c).prime_interval();
            let r = g(2.0 * tp, c).unwrap() / g(tp, c).unwrap();
            assert!((1.48..=1.58).contains(&r), "c={c} ratio={r}");
        }
    }

    #[test]
    fn backward_bid_examples() {
        assert_eq!(bid_backward(103.0, 100.0, DAY, 3, 1.0).unwrap(), 1);
        assert_eq!(bid_backward(100.0, 100.0, DAY, 3, 1.0).unwrap(), 0);
        assert_eq!(bid_backward(103.0, 100.0, DAY, 3, 2.0).unwrap(), 3);
        assert!(bid_backward(0.0, 100.0, DAY, 3, 1.0).is_err());
    }

    #[test]
    fn ranking_examples() {
        let top = rank(&[TwoBid { b: 2, c: 3, m: 1 }, TwoBid { b: 2, c: 1, m: 2 }]).unwrap()[0];
        assert_eq!(top, TwoBid { b: 2, c: 1, m: 2 });
        assert!(TwoBid { b: 3, c: 5, m: 9 }.beats(&TwoBid { b: 2, c: 1, m: 1 }));
        let top = rank(&[TwoBid { b: 2, c: 3, m: 4 }, TwoBid { b: 2, c: 3, m: 2 }]).unwrap()[0];
        assert_eq!(top.m, 2);
        assert!(rank(&[]).is_err());
    }

    #[test]
    fn csv_rendering_has_header_and_rows() {
        let s = render_table(TableKind::Regular, TableFormat::Csv);
        let lines: Vec<&str> = s.lines().collect();
        assert_eq!(lines[0], "b/m,1m,2m,4m,12m");
        assert_eq!(lines[3], "3,21.0,31.5,52.5,133.5");
    }
}
