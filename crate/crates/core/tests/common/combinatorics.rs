//! Exact integer oracles.

/// D_n = Σ_{k≤n} (−1)^k n!/k! in exact integers.
pub fn derangements(n: u32) -> i128 {
    let mut total = 0i128;
    for k in 0..=n {
        let mut term = 1i128;
        for j in (k + 1)..=n {
            term *= j as i128;
        }
        total += if k % 2 == 0 { term } else { -term };
    }
    total
}

pub fn factorial(n: u32) -> i128 {
    (1..=n as i128).product::<i128>().max(1)
}
