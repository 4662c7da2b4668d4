//! Monte Carlo estimation of relative violation volumes.
//!
//! Each sample draws the functional's full direction tuple independently and
//! uniformly on the sphere and counts strict violations; the violating
//! fraction estimates the relative volume directly, because sampling whole
//! directions realizes the neutral solid-angle measure (the spectator
//! azimuth combination never needs to be drawn).
//!
//! # Reproducibility contract
//!
//! Streams come from the counter-based ChaCha generator with 8 rounds
//! (`rand_chacha::ChaCha8Rng`, crate version 0.9): the key is
//! `seed_from_u64(plan.seed)` and chunk `i` of `chunk_size` samples reads
//! the dedicated stream `i`. Per-direction draws use two standard uniforms,
//! `cos θ ∈ [-1, 1)` then `φ ∈ [0, 2π)`. Chunk counts are integers and
//! merge additively, so a given plan yields a bitwise-identical estimate for
//! any worker count. Changing the generator, the draw order, or the chunk
//! layout is a breaking change; pinned seeds in downstream tests depend on
//! them.

use crate::inequalities::{
    bell1_margin, chsh_margin, BellFunctional, ChshMode, FunctionalId,
};
use crate::quantum::{Direction, TwoQubitState};
use crate::stats;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use std::f64::consts::TAU;
use thiserror::Error;

/// Samples per RNG substream; part of the reproducibility contract.
pub const DEFAULT_CHUNK_SIZE: u64 = 1 << 16;

/// Default two-sided confidence level of the reported Wilson interval.
pub const DEFAULT_CONFIDENCE_LEVEL: f64 = 0.99;

/// Tolerance used when deciding whether a state is rotationally invariant.
const SYMMETRY_TOLERANCE: f64 = 1e-12;

#[derive(Error, Debug, Clone, PartialEq)]
pub enum MonteCarloError {
    #[error("sampling plan invalid: {0}")]
    InvalidPlan(String),
    #[error(
        "fix_first_direction requires a rotationally invariant state \
         (r = s = 0 and T proportional to the identity): `{label}` does not \
         qualify, so pinning the first direction would bias the estimate"
    )]
    FixFirstRequiresSymmetry { label: String },
    #[error("sweep entry {index} (`{label}`): {source}")]
    SweepEntry {
        index: usize,
        label: String,
        source: Box<MonteCarloError>,
    },
}

/// How many samples to draw, from which seed, and how to chunk them.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SamplingPlan {
    pub n_samples: u64,
    pub seed: u64,
    pub chunk_size: u64,
    pub fix_first_direction: bool,
    pub confidence_level: f64,
}

impl SamplingPlan {
    pub fn new(n_samples: u64, seed: u64) -> Self {
        SamplingPlan {
            n_samples,
            seed,
            chunk_size: DEFAULT_CHUNK_SIZE,
            fix_first_direction: false,
            confidence_level: DEFAULT_CONFIDENCE_LEVEL,
        }
    }

    pub fn with_chunk_size(mut self, chunk_size: u64) -> Self {
        self.chunk_size = chunk_size;
        self
    }

    /// Pin the first drawn direction to +z. Only valid for rotationally
    /// invariant states; [`estimate_volume`] enforces this.
    pub fn with_fix_first_direction(mut self, fix: bool) -> Self {
        self.fix_first_direction = fix;
        self
    }

    pub fn with_confidence_level(mut self, confidence_level: f64) -> Self {
        self.confidence_level = confidence_level;
        self
    }

    fn validate(&self) -> Result<(), MonteCarloError> {
        if self.n_samples == 0 {
            return Err(MonteCarloError::InvalidPlan(
                "n_samples must be at least 1".to_string(),
            ));
        }
        if self.chunk_size == 0 {
            return Err(MonteCarloError::InvalidPlan(
                "chunk_size must be at least 1".to_string(),
            ));
        }
        if !(self.confidence_level > 0.0 && self.confidence_level < 1.0) {
            return Err(MonteCarloError::InvalidPlan(format!(
                "confidence_level must lie strictly inside (0, 1), got {}",
                self.confidence_level
            )));
        }
        Ok(())
    }
}

/// Estimated violating fraction with binomial standard error, Wilson
/// interval, and run provenance.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ViolationEstimate {
    pub fraction: f64,
    pub n_violating: u64,
    pub n_samples: u64,
    pub stderr: f64,
    pub ci_low: f64,
    pub ci_high: f64,
    pub confidence_level: f64,
    pub inequality_id: FunctionalId,
    pub state_label: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mode: Option<ChshMode>,
    pub seed: u64,
}

/// Uniform draw on the unit sphere: `cos θ ~ U[-1, 1)`, `φ ~ U[0, 2π)`.
/// Inverse-CDF in the polar angle, so exactly two uniforms per direction.
pub fn sample_direction<R: Rng>(rng: &mut R) -> Direction {
    let cos_theta = 2.0 * rng.random::<f64>() - 1.0;
    let phi = TAU * rng.random::<f64>();
    let sin_theta = (1.0 - cos_theta * cos_theta).sqrt();
    let (sin_phi, cos_phi) = phi.sin_cos();
    Direction::from_unit_components(sin_theta * cos_phi, sin_theta * sin_phi, cos_theta)
}

/// Estimates the relative violation volume of `functional` for `state` by
/// uniform sampling of the measurement directions.
///
/// One sample draws the full tuple (a, b, c for the three-direction
/// functional; a, a', b, b' for CHSH) and counts a strict violation of the
/// margin. With `fix_first_direction` the first direction is pinned to +z,
/// which is admissible only when the state has no preferred axis.
pub fn estimate_volume(
    state: &TwoQubitState,
    functional: &BellFunctional,
    plan: &SamplingPlan,
) -> Result<ViolationEstimate, MonteCarloError> {
    plan.validate()?;
    if plan.fix_first_direction && !state.is_rotationally_invariant(SYMMETRY_TOLERANCE) {
        return Err(MonteCarloError::FixFirstRequiresSymmetry {
            label: state.label().to_string(),
        });
    }

    let n_chunks = plan.n_samples.div_ceil(plan.chunk_size);
    let n_violating: u64 = (0..n_chunks)
        .into_par_iter()
        .map(|chunk_index| {
            let offset = chunk_index * plan.chunk_size;
            let chunk_samples = plan.chunk_size.min(plan.n_samples - offset);
            count_chunk_violations(state, functional, plan, chunk_index, chunk_samples)
        })
        .sum();

    let fraction = n_violating as f64 / plan.n_samples as f64;
    let stderr = stats::binomial_stderr(n_violating, plan.n_samples);
    let (ci_low, ci_high) =
        stats::wilson_interval(n_violating, plan.n_samples, plan.confidence_level);
    Ok(ViolationEstimate {
        fraction,
        n_violating,
        n_samples: plan.n_samples,
        stderr,
        ci_low,
        ci_high,
        confidence_level: plan.confidence_level,
        inequality_id: functional.id(),
        state_label: state.label().to_string(),
        mode: functional.chsh_mode(),
        seed: plan.seed,
    })
}

fn count_chunk_violations(
    state: &TwoQubitState,
    functional: &BellFunctional,
    plan: &SamplingPlan,
    chunk_index: u64,
    chunk_samples: u64,
) -> u64 {
    let mut rng = ChaCha8Rng::seed_from_u64(plan.seed);
    rng.set_stream(chunk_index);
    let mut violations = 0u64;
    match functional.id() {
        FunctionalId::Bell1964 => {
            for _ in 0..chunk_samples {
                let a = if plan.fix_first_direction {
                    Direction::Z
                } else {
                    sample_direction(&mut rng)
                };
                let b = sample_direction(&mut rng);
                let c = sample_direction(&mut rng);
                if bell1_margin(state, &a, &b, &c).violated {
                    violations += 1;
                }
            }
        }
        FunctionalId::Chsh => {
            let mode = functional.chsh_mode().unwrap_or(ChshMode::Fixed);
            for _ in 0..chunk_samples {
                let a = if plan.fix_first_direction {
                    Direction::Z
                } else {
                    sample_direction(&mut rng)
                };
                let a2 = sample_direction(&mut rng);
                let b = sample_direction(&mut rng);
                let b2 = sample_direction(&mut rng);
                if chsh_margin(state, &a, &a2, &b, &b2, mode).violated {
                    violations += 1;
                }
            }
        }
    }
    violations
}

/// One estimate per state, in order, each with the derived seed
/// `plan.seed ^ index` so entries are statistically independent yet
/// individually reproducible.
pub fn sweep(
    states: &[TwoQubitState],
    functional: &BellFunctional,
    plan: &SamplingPlan,
) -> Result<Vec<ViolationEstimate>, MonteCarloError> {
    if states.is_empty() {
        return Err(MonteCarloError::InvalidPlan(
            "sweep needs at least one state".to_string(),
        ));
    }
    states
        .iter()
        .enumerate()
        .map(|(index, state)| {
            let mut derived = *plan;
            derived.seed = plan.seed ^ index as u64;
            estimate_volume(state, functional, &derived).map_err(|source| {
                MonteCarloError::SweepEntry {
                    index,
                    label: state.label().to_string(),
                    source: Box::new(source),
                }
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn sampled_directions_are_unit_and_unbiased() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let n = 1_000_000usize;
        let mut sum_z = 0.0;
        let mut sum_z2 = 0.0;
        for _ in 0..n {
            let d = sample_direction(&mut rng);
            let norm: f64 = d.components().iter().map(|c| c * c).sum();
            assert!((norm - 1.0).abs() < 1e-12);
            sum_z += d.uz();
            sum_z2 += d.uz() * d.uz();
        }
        let mean_z = sum_z / n as f64;
        let mean_z2 = sum_z2 / n as f64;
        // Var(u_z) = 1/3 and Var(u_z²) = 4/45.
        assert!(mean_z.abs() < 5.0 / (n as f64).sqrt());
        let stderr_z2 = (4.0f64 / 45.0 / n as f64).sqrt();
        assert!((mean_z2 - 1.0 / 3.0).abs() < 5.0 * stderr_z2);
    }

    #[test]
    fn singlet_bell1964_fraction_near_one_third() {
        let singlet = TwoQubitState::singlet();
        let plan = SamplingPlan::new(1_000_000, 42);
        let estimate =
            estimate_volume(&singlet, &BellFunctional::bell1964(), &plan).unwrap();
        assert!((estimate.fraction - 1.0 / 3.0).abs() < 5.0 * estimate.stderr);
        assert!(estimate.ci_low <= estimate.fraction && estimate.fraction <= estimate.ci_high);
        assert_eq!(estimate.n_samples, 1_000_000);
        assert_eq!(estimate.seed, 42);
        assert_eq!(estimate.inequality_id, FunctionalId::Bell1964);
        assert!(estimate.mode.is_none());
    }

    #[test]
    fn estimates_are_deterministic_across_worker_counts() {
        let singlet = TwoQubitState::singlet();
        let plan = SamplingPlan::new(300_000, 7).with_chunk_size(10_000);
        let functional = BellFunctional::bell1964();

        let baseline = estimate_volume(&singlet, &functional, &plan).unwrap();
        for workers in [1usize, 2, 5] {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(workers)
                .build()
                .unwrap();
            let run = pool.install(|| estimate_volume(&singlet, &functional, &plan).unwrap());
            assert_eq!(run, baseline, "worker count {workers} changed the result");
        }
    }

    #[test]
    fn partial_final_chunk_draws_exactly_n_samples() {
        let singlet = TwoQubitState::singlet();
        let plan = SamplingPlan::new(100_001, 3).with_chunk_size(1000);
        let estimate =
            estimate_volume(&singlet, &BellFunctional::bell1964(), &plan).unwrap();
        assert_eq!(estimate.n_samples, 100_001);
        assert_abs_diff_eq!(
            estimate.fraction,
            estimate.n_violating as f64 / 100_001.0,
            epsilon = 0.0
        );
    }

    #[test]
    fn fixed_direction_matches_free_sampling_for_the_singlet() {
        let singlet = TwoQubitState::singlet();
        let functional = BellFunctional::bell1964();
        let free = estimate_volume(
            &singlet,
            &functional,
            &SamplingPlan::new(500_000, 11),
        )
        .unwrap();
        let pinned = estimate_volume(
            &singlet,
            &functional,
            &SamplingPlan::new(500_000, 12).with_fix_first_direction(true),
        )
        .unwrap();
        let combined_stderr = (free.stderr.powi(2) + pinned.stderr.powi(2)).sqrt();
        assert!((free.fraction - pinned.fraction).abs() < 5.0 * combined_stderr);
    }

    #[test]
    fn fixed_direction_rejected_for_asymmetric_states() {
        let mut t = [[0.0; 3]; 3];
        t[2][2] = 0.5;
        let asymmetric = TwoQubitState::new([0.0; 3], [0.0; 3], t, "zz-aligned").unwrap();
        let plan = SamplingPlan::new(1000, 0).with_fix_first_direction(true);
        let result = estimate_volume(&asymmetric, &BellFunctional::bell1964(), &plan);
        assert!(matches!(
            result,
            Err(MonteCarloError::FixFirstRequiresSymmetry { .. })
        ));
    }

    #[test]
    fn plan_validation() {
        let singlet = TwoQubitState::singlet();
        let functional = BellFunctional::bell1964();
        assert!(matches!(
            estimate_volume(&singlet, &functional, &SamplingPlan::new(0, 1)),
            Err(MonteCarloError::InvalidPlan(_))
        ));
        assert!(matches!(
            estimate_volume(
                &singlet,
                &functional,
                &SamplingPlan::new(10, 1).with_chunk_size(0)
            ),
            Err(MonteCarloError::InvalidPlan(_))
        ));
        assert!(matches!(
            estimate_volume(
                &singlet,
                &functional,
                &SamplingPlan::new(10, 1).with_confidence_level(1.0)
            ),
            Err(MonteCarloError::InvalidPlan(_))
        ));
    }

    #[test]
    fn subthreshold_werner_states_never_violate() {
        // Violation needs p * f > 1 with max f = 3/2, so p <= 2/3 gives zero.
        let werner = TwoQubitState::werner(0.5).unwrap();
        let plan = SamplingPlan::new(200_000, 21);
        let estimate =
            estimate_volume(&werner, &BellFunctional::bell1964(), &plan).unwrap();
        assert_eq!(estimate.n_violating, 0);
        assert_eq!(estimate.fraction, 0.0);
        assert_eq!(estimate.ci_low, 0.0);
        assert!(estimate.ci_high > 0.0);
    }

    #[test]
    fn chsh_product_state_fraction_is_zero() {
        let r = [0.6, 0.0, 0.8];
        let s = [0.0, 0.6, 0.8];
        let mut t = [[0.0; 3]; 3];
        for i in 0..3 {
            for j in 0..3 {
                t[i][j] = r[i] * s[j];
            }
        }
        let product = TwoQubitState::new(r, s, t, "product").unwrap();
        let plan = SamplingPlan::new(1_000_000, 5);
        for mode in [ChshMode::Fixed, ChshMode::MaxOverSignPosition] {
            let estimate =
                estimate_volume(&product, &BellFunctional::chsh(mode), &plan).unwrap();
            assert_eq!(estimate.n_violating, 0, "mode {mode}");
        }
    }

    #[test]
    fn chsh_modes_order_and_provenance() {
        let singlet = TwoQubitState::singlet();
        let plan = SamplingPlan::new(200_000, 9);
        let fixed =
            estimate_volume(&singlet, &BellFunctional::chsh(ChshMode::Fixed), &plan).unwrap();
        let max = estimate_volume(
            &singlet,
            &BellFunctional::chsh(ChshMode::MaxOverSignPosition),
            &plan,
        )
        .unwrap();
        // Same draws, pointwise-larger margin: the max mode counts at least
        // every fixed-mode violation.
        assert!(max.n_violating >= fixed.n_violating);
        assert_eq!(fixed.mode, Some(ChshMode::Fixed));
        assert_eq!(max.mode, Some(ChshMode::MaxOverSignPosition));
    }

    #[test]
    fn sweep_preserves_order_and_derives_seeds() {
        let states = vec![
            TwoQubitState::werner(0.0).unwrap(),
            TwoQubitState::werner(1.0).unwrap(),
        ];
        let plan = SamplingPlan::new(100_000, 1000);
        let results = sweep(&states, &BellFunctional::bell1964(), &plan).unwrap();
        assert_eq!(results.len(), 2);
        assert_eq!(results[0].seed, 1000);
        assert_eq!(results[1].seed, 1000 ^ 1);
        assert_eq!(results[0].n_violating, 0);

        // Entry seeds are reproducible individually.
        let mut derived = plan;
        derived.seed = 1000 ^ 1;
        let direct = estimate_volume(&states[1], &BellFunctional::bell1964(), &derived).unwrap();
        assert_eq!(direct.fraction, results[1].fraction);
        assert_eq!(direct.n_violating, results[1].n_violating);

        // werner(1) carries the same tensor as the singlet, so the numbers
        // match under the same derived seed.
        let singlet = estimate_volume(
            &TwoQubitState::singlet(),
            &BellFunctional::bell1964(),
            &derived,
        )
        .unwrap();
        assert_eq!(singlet.n_violating, results[1].n_violating);

        let single = sweep(&states[1..], &BellFunctional::bell1964(), &plan).unwrap();
        let direct_first = estimate_volume(&states[1], &BellFunctional::bell1964(), &plan).unwrap();
        assert_eq!(single[0].n_violating, direct_first.n_violating);

        assert!(matches!(
            sweep(&[], &BellFunctional::bell1964(), &plan),
            Err(MonteCarloError::InvalidPlan(_))
        ));
    }

    #[test]
    fn sweep_annotates_entry_errors_with_index() {
        let states = vec![
            TwoQubitState::werner(0.3).unwrap(),
            TwoQubitState::new([0.0, 0.0, 0.5], [0.0; 3], [[0.0; 3]; 3], "biased").unwrap(),
        ];
        let plan = SamplingPlan::new(1000, 0).with_fix_first_direction(true);
        match sweep(&states, &BellFunctional::bell1964(), &plan) {
            Err(MonteCarloError::SweepEntry { index, label, .. }) => {
                assert_eq!(index, 1);
                assert_eq!(label, "biased");
            }
            other => panic!("expected annotated entry error, got {other:?}"),
        }
    }

    #[test]
    fn conditioning_on_nonpositive_cos_phi_kills_violations() {
        // Post-hoc filter on the sampled azimuths: where cos(φ_c - φ_b) <= 0
        // the inequality holds identically for the singlet.
        let singlet = TwoQubitState::singlet();
        let mut rng = ChaCha8Rng::seed_from_u64(33);
        let mut conditioned = 0usize;
        for _ in 0..200_000 {
            let b = sample_direction(&mut rng);
            let c = sample_direction(&mut rng);
            let phi = c.azimuthal_angle() - b.azimuthal_angle();
            if phi.cos() <= 0.0 {
                conditioned += 1;
                let margin = bell1_margin(&singlet, &Direction::Z, &b, &c);
                assert!(!margin.violated, "violation at cos φ = {}", phi.cos());
            }
        }
        assert!(conditioned > 90_000, "filter kept too few samples");
    }
}
