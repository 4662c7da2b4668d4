//! Convergence of the term-wise integrated gamma-ratio series
//! S_N = 8π^{3/2} Σ Γ(n+1/2)/Γ(n+3) toward 16π²/3.
//!
//! The first term alone is 4π², three quarters of the limit; the tail decays
//! like N^{-3/2}.
//!
//! Run with: cargo run --example series_partial_sums

use bellvol::analytic::{volume_series_partial, EXACT_VIOLATION_VOLUME};

fn main() {
    println!("{:>9}  {:>20}  {:>12}", "terms", "partial sum", "remaining");
    for &n in &[1usize, 2, 5, 10, 100, 1_000, 10_000, 100_000, 1_000_000] {
        let partial = volume_series_partial(n);
        println!(
            "{:>9}  {:>20.15}  {:>12.3e}",
            n,
            partial,
            EXACT_VIOLATION_VOLUME - partial
        );
    }
    println!("{:>9}  {:>20.15}", "limit", EXACT_VIOLATION_VOLUME);
}
