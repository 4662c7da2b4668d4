//! CHSH violating fraction of the singlet over uniformly random
//! measurement quadruples, in both sign-placement conventions.
//!
//! With four independent directions and one fixed functional the fraction
//! lands around 7%; maximizing over the four placements of the minus sign
//! counts every configuration that violates *some* CHSH variant and is
//! roughly four times larger.
//!
//! Run with: cargo run --example mc_chsh

use bellvol::inequalities::{BellFunctional, ChshMode};
use bellvol::montecarlo::{estimate_volume, SamplingPlan};
use bellvol::quantum::TwoQubitState;

fn main() {
    let singlet = TwoQubitState::singlet();
    let plan = SamplingPlan::new(5_000_000, 77);

    for mode in [ChshMode::Fixed, ChshMode::MaxOverSignPosition] {
        let functional = BellFunctional::chsh(mode);
        let estimate = estimate_volume(&singlet, &functional, &plan).unwrap();
        println!(
            "{mode:<24}: fraction {:.5} ± {:.1e}, 99% interval [{:.5}, {:.5}]",
            estimate.fraction, estimate.stderr, estimate.ci_low, estimate.ci_high
        );
    }

    println!();
    println!(
        "compare: aligning one direction (three-direction inequality) gives 1/3;"
    );
    println!("with no alignment at all the certification probability drops to ~7%.");
}
