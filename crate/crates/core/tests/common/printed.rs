//! Printed values the implementation must reproduce.

use mrt_core::backtest::PeriodStats;
use mrt_core::bids::{build_table, TableKind};

pub const SUPER: [[f64; 6]; 6] = [
    [1.0, 1.5, 3.0, 6.5, 11.0, 15.0],
    [2.0, 3.0, 6.0, 13.0, 22.0, 30.0],
    [3.0, 4.5, 9.0, 19.5, 33.0, 45.0],
    [4.0, 6.0, 12.0, 26.0, 44.0, 60.0],
    [5.0, 7.5, 15.0, 32.5, 55.0, 75.0],
    [6.0, 9.0, 18.0, 39.0, 66.0, 90.0],
];

pub const ULTRA: [[f64; 6]; 6] = [
    [2.0, 3.0, 5.0, 8.0, 13.0, 20.0],
    [4.0, 6.0, 10.0, 16.0, 26.0, 40.0],
    [6.0, 9.0, 15.0, 24.0, 39.0, 60.0],
    [8.0, 12.0, 20.0, 32.0, 52.0, 80.0],
    [10.0, 15.0, 25.0, 40.0, 65.0, 100.0],
    [12.0, 18.0, 30.0, 48.0, 78.0, 120.0],
];

pub const EXTRA: [[f64; 5]; 5] = [
    [3.5, 5.5, 8.5, 15.5, 28.0],
    [7.0, 11.0, 17.0, 31.0, 56.0],
    [10.5, 16.5, 25.5, 46.5, 84.0],
    [14.0, 22.0, 34.0, 62.0, 112.0],
    [17.5, 27.5, 42.5, 77.5, 140.0],
];

pub const REGULAR: [[f64; 4]; 4] = [
    [7.0, 10.5, 17.5, 44.5],
    [14.0, 21.0, 35.0, 89.0],
    [21.0, 31.5, 52.5, 133.5],
    [28.0, 42.0, 70.0, 178.0],
];

/// Printed 7-category minimal-bid table; NaN marks `---`.
pub const N: f64 = f64::NAN;
pub const MIN7: [[f64; 12]; 7] = [
    [1.0, 1.49, 2.27, 3.0, 4.31, 5.92, 6.49, 8.44, 10.99, 13.57, 15.01, 16.16],
    [N, 1.28, 1.87, 2.5, 3.65, 5.16, 5.74, 7.62, 10.29, 13.28, 15.1, 16.57],
    [N, N, N, 2.0, 3.0, 4.4, 5.0, 6.8, 9.6, 13.0, 15.2, 17.0],
    [N, N, N, N, 2.54, 3.71, 4.25, 6.15, 9.05, 12.85, 15.35, 17.5],
    [N, N, N, N, N, N, 3.5, 5.5, 8.5, 12.7, 15.5, 18.0],
    [N, N, N, N, N, N, N, 4.97, 7.75, 11.6, 14.75, 17.75],
    [N, N, N, N, N, N, N, N, 7.0, 10.5, 14.0, 17.5],
];

/// Printed 4-category comparison table (rows 7, 5, 3, 1).
pub const MIN4: [[f64; 13]; 4] = [
    [N, N, N, N, N, N, N, 7.0, 10.5, 14.0, 17.5, 23.8, 34.3],
    [N, N, N, N, 3.5, 5.5, 6.9, 8.5, 12.7, 15.5, 18.0, 22.2, 28.0],
    [N, N, 2.0, 3.0, 5.0, 6.8, 8.0, 9.6, 13.0, 15.2, 17.0, 20.0, 23.8],
    [1.0, 1.5, 3.0, 4.3, 6.5, 8.5, 9.7, 11.0, 13.6, 15.0, 16.1, 17.8, 19.7],
];

pub fn check_category<const C: usize>(kind: TableKind, printed: &[[f64; C]]) -> usize {
    let t = build_table(kind);
    assert_eq!(t.rows.len(), printed.len());
    let mut cells = 0;
    for (row, want) in t.rows.iter().zip(printed) {
        for (got, want) in row.1.iter().zip(want.iter()) {
            let got = got.expect("category tables have no blanks");
            assert!((got - want).abs() <= 0.05 + 1e-12, "{:?} b={} got {got} want {want}", kind, row.0);
            cells += 1;
        }
    }
    cells
}

/// Per-period (NUM, RET, LNGTH) of the long-only SPY report.
pub const SPY_LONG: [(usize, f64, f64); 5] = [(18, 0.72, 3.0), (13, 0.45, 5.2), (23, 0.56, 2.2), (12, 0.59, 2.2), (17, 0.10, 2.4)];
/// Per-period (NUM, RET, LNGTH) of the short-only SPY report.
pub const SPY_SHORT: [(usize, f64, f64); 5] = [(33, 0.02, 3.7), (46, 0.5, 2.7), (66, 0.04, 2.9), (42, 0.05, 4.4), (68, 0.0, 2.5)];

pub fn period_stats(rows: &[(usize, f64, f64)]) -> Vec<PeriodStats> {
    rows.iter().map(|&(num, ret, lngth)| PeriodStats { num, ret, lngth }).collect()
}

/// The printed bidding table: row bid, then "tricks/cards" minima for
/// 6, 7, 8 and 9 cards. The two "...." cells at six cards are filled in
/// from the basic-pont table (5/6) and the misère substitution list (6/6).
pub const BIDDING_TABLE: [(&str, [&str; 4]); 11] = [
    ("3/6", ["3/6", "4/7", "4/8", "5/9"]),
    ("4/7", ["4/6", "4/7", "5/8", "6/9"]),
    ("5/8", ["4/6", "5/7", "5/8", "6/9"]),
    ("4/6", ["4/6", "5/7", "6/8", "6/9"]),
    ("5/7", ["5/6", "5/7", "6/8", "7/9"]),
    ("6/8", ["5/6", "6/7", "6/8", "7/9"]),
    ("m", ["6/6", "6/7", "7/8", "8/9"]),
    ("5/6", ["5/6", "6/7", "7/8", "8/9"]),
    ("6/7", ["6/6", "6/7", "7/8", "8/9"]),
    ("7/8", ["6/6", "7/7", "7/8", "8/9"]),
    ("6/6", ["6/6", "7/7", "8/8", "9/9"]),
];
