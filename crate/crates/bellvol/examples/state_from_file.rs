//! Loading a custom two-qubit state from the JSON state-file format and
//! estimating its violation fractions.
//!
//! The format is an object with the two local Bloch vectors `r`, `s`, the
//! 3x3 correlation tensor `T`, and an optional `label`. Construction
//! validates positive semidefiniteness of the reconstructed density
//! operator, so unphysical tensors are rejected with a named field.
//!
//! Run with: cargo run --example state_from_file

use bellvol::inequalities::{BellFunctional, ChshMode};
use bellvol::montecarlo::{estimate_volume, SamplingPlan};
use bellvol::quantum::TwoQubitState;

fn main() {
    // A Bell-diagonal state off the Werner line: stronger correlations in
    // the x-y plane than along z. Positivity bounds the anisotropy: the
    // diagonal must stay inside the tetrahedron spanned by the Bell states.
    let text = r#"{
        "r": [0, 0, 0],
        "s": [0, 0, 0],
        "T": [[-0.85, 0, 0], [0, -0.85, 0], [0, 0, -0.8]],
        "label": "anisotropic"
    }"#;
    let state = TwoQubitState::from_state_file_json(text).expect("state is physical");
    println!("loaded `{}`", state.label());

    let plan = SamplingPlan::new(2_000_000, 5150);
    let bell = estimate_volume(&state, &BellFunctional::bell1964(), &plan).unwrap();
    let chsh =
        estimate_volume(&state, &BellFunctional::chsh(ChshMode::Fixed), &plan).unwrap();
    println!(
        "three-direction fraction: {:.5} ± {:.1e}",
        bell.fraction, bell.stderr
    );
    println!(
        "CHSH (fixed) fraction   : {:.5} ± {:.1e}",
        chsh.fraction, chsh.stderr
    );

    // Unphysical input: one reconstructed eigenvalue would be negative.
    let bad = r#"{"r": [0,0,0], "s": [0,0,0], "T": [[-1,0,0],[0,-1,0],[0,0,1]]}"#;
    match TwoQubitState::from_state_file_json(bad) {
        Err(error) => println!("\nrejected unphysical tensor: {error}"),
        Ok(_) => unreachable!("the tensor is outside the Bell-diagonal tetrahedron"),
    }
}
