//! Small combinatorial helpers shared by the state builders and the closed forms.

use std::sync::OnceLock;

const LN_FACT_TABLE: usize = 1 << 14;

fn ln_fact_table() -> &'static [f64] {
    static TABLE: OnceLock<Vec<f64>> = OnceLock::new();
    TABLE.get_or_init(|| {
        let mut t = Vec::with_capacity(LN_FACT_TABLE);
        t.push(0.0);
        let mut acc = 0.0f64;
        for k in 1..LN_FACT_TABLE {
            acc += (k as f64).ln();
            t.push(acc);
        }
        t
    })
}

/// ln(n!)
pub fn ln_factorial(n: u64) -> f64 {
    if (n as usize) < LN_FACT_TABLE {
        return ln_fact_table()[n as usize];
    }
    // Stirling series, far past any cutoff used in practice.
    let x = n as f64 + 1.0;
    (x - 0.5) * x.ln() - x + 0.5 * (2.0 * std::f64::consts::PI).ln() + 1.0 / (12.0 * x) - 1.0 / (360.0 * x.powi(3))
}

/// sqrt(n!/(n-p)!) for creation/annihilation chains: the factor picked up by `a^p |n>`.
pub fn falling_sqrt(n: u64, p: u64) -> f64 {
    debug_assert!(p <= n);
    match p {
        0 => 1.0,
        1 => (n as f64).sqrt(),
        2 => ((n * (n - 1)) as f64).sqrt(),
        _ => (0.5 * (ln_factorial(n) - ln_factorial(n - p))).exp(),
    }
}

pub fn factorial(n: u32) -> u64 {
    assert!(n <= 20, "factorial overflows u64 past 20!");
    (1..=n as u64).product()
}

pub fn binomial(n: u32, k: u32) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k) as u64;
    let n = n as u64;
    let mut out: u64 = 1;
    for i in 0..k {
        out = out * (n - i) / (i + 1);
    }
    out
}

/// Multinomial coefficient `M! / (k_1! ... k_r! (M - sum k)!)`; zero when the parts exceed `m`.
pub fn multinomial(m: u32, parts: &[u32]) -> u64 {
    let used: u32 = parts.iter().sum();
    if used > m {
        return 0;
    }
    let mut remaining = m;
    let mut out: u64 = 1;
    for &k in parts {
        out *= binomial(remaining, k);
        remaining -= k;
    }
    out
}
