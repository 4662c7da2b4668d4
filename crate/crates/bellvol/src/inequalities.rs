//! Bell functionals and violation margins.
//!
//! Two functionals are covered: the original three-direction inequality
//! `|E(a,b) - E(a,c)| <= 1 + E(b,c)` and the four-direction CHSH constraint
//! `|E(a,b) + E(a,b') + E(a',b) - E(a',b')| <= 2`. Each margin is
//! sign-normalized so that a positive value means the classical bound is
//! exceeded.
//!
//! A caveat on the three-direction form: as a *functional* its violating
//! volume is well defined for any state, but it certifies nonlocality only
//! under the perfect-anticorrelation premise of its derivation. Product
//! states can push the margin positive (e.g. `r = s = z`, `b = z`, `c = -z`),
//! so a positive margin for a non-singlet-like state must not be read as a
//! nonlocality witness.

use crate::quantum::{Direction, TwoQubitState};
use serde::Serialize;
use std::f64::consts::SQRT_2;

/// Margins are strict by default: the boundary set has measure zero.
pub const DEFAULT_VIOLATION_TOLERANCE: f64 = 0.0;

/// Which functional a [`BellFunctional`] describes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum FunctionalId {
    Bell1964,
    Chsh,
}

impl std::fmt::Display for FunctionalId {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            FunctionalId::Bell1964 => write!(f, "bell1964"),
            FunctionalId::Chsh => write!(f, "chsh"),
        }
    }
}

/// Placement convention for the minus sign in the CHSH combination.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ChshMode {
    /// One fixed functional: `S = E(a,b) + E(a,b') + E(a',b) - E(a',b')`,
    /// margin `|S| - 2`. The default, and the literal reading of a scenario
    /// with four independently drawn directions.
    Fixed,
    /// Margin `max_k |S_k| - 2` over the four placements of the minus sign.
    MaxOverSignPosition,
}

impl std::fmt::Display for ChshMode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            ChshMode::Fixed => write!(f, "fixed"),
            ChshMode::MaxOverSignPosition => write!(f, "max_over_sign_position"),
        }
    }
}

/// Descriptor of a Bell functional: setting counts per party and the
/// classical / quantum bounds of the associated inequality.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BellFunctional {
    id: FunctionalId,
    n_settings_a: usize,
    n_settings_b: usize,
    classical_bound: f64,
    quantum_bound: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    chsh_mode: Option<ChshMode>,
}

impl BellFunctional {
    /// The three-direction functional. Parties share the middle direction
    /// `b`: A measures along `a` or `b`, B along `b` or `c`. The margin form
    /// `|E(a,b) - E(a,c)| - 1 - E(b,c)` encodes the classical bound 1; the
    /// quantum maximum of `|E(a,b) - E(a,c)| - E(b,c)` is 3/2.
    pub fn bell1964() -> Self {
        BellFunctional {
            id: FunctionalId::Bell1964,
            n_settings_a: 2,
            n_settings_b: 2,
            classical_bound: 1.0,
            quantum_bound: 1.5,
            chsh_mode: None,
        }
    }

    /// CHSH with the given sign-placement mode. Classical bound 2, quantum
    /// bound 2√2.
    pub fn chsh(mode: ChshMode) -> Self {
        BellFunctional {
            id: FunctionalId::Chsh,
            n_settings_a: 2,
            n_settings_b: 2,
            classical_bound: 2.0,
            quantum_bound: 2.0 * SQRT_2,
            chsh_mode: Some(mode),
        }
    }

    pub fn id(&self) -> FunctionalId {
        self.id
    }

    pub fn n_settings_a(&self) -> usize {
        self.n_settings_a
    }

    pub fn n_settings_b(&self) -> usize {
        self.n_settings_b
    }

    pub fn classical_bound(&self) -> f64 {
        self.classical_bound
    }

    pub fn quantum_bound(&self) -> f64 {
        self.quantum_bound
    }

    pub fn chsh_mode(&self) -> Option<ChshMode> {
        self.chsh_mode
    }

    /// Number of independent directions drawn per sampled configuration.
    pub fn n_directions(&self) -> usize {
        match self.id {
            FunctionalId::Bell1964 => 3,
            FunctionalId::Chsh => 4,
        }
    }
}

/// Sign-normalized violation indicator: positive `value` means the classical
/// bound is exceeded.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Margin {
    pub value: f64,
    pub violated: bool,
}

impl Margin {
    /// Strict margin: violated iff `value > 0`.
    pub fn from_value(value: f64) -> Self {
        Margin::with_tolerance(value, DEFAULT_VIOLATION_TOLERANCE)
    }

    /// Violated iff `value > tolerance`; exposed for sensitivity analysis.
    pub fn with_tolerance(value: f64, tolerance: f64) -> Self {
        Margin {
            value,
            violated: value > tolerance,
        }
    }
}

/// Margin of `|E(a,b) - E(a,c)| <= 1 + E(b,c)`:
/// `value = |E(a,b) - E(a,c)| - 1 - E(b,c)`.
pub fn bell1_margin(
    state: &TwoQubitState,
    a: &Direction,
    b: &Direction,
    c: &Direction,
) -> Margin {
    let e_ab = state.correlation(a, b);
    let e_ac = state.correlation(a, c);
    let e_bc = state.correlation(b, c);
    Margin::from_value((e_ab - e_ac).abs() - 1.0 - e_bc)
}

/// Singlet margin in the reduced angle chart with `a` pinned to +z:
/// `value = |cos θ_c - cos θ_b| - (1 - sin θ_c sin θ_b cos φ - cos θ_c cos θ_b)`
/// where `φ` is the azimuth difference of `c` and `b`. Agrees with
/// [`bell1_margin`] on the singlet for any azimuth pair with that difference.
pub fn bell1_margin_angles(theta_b: f64, theta_c: f64, phi: f64) -> Margin {
    let (sin_b, cos_b) = theta_b.sin_cos();
    let (sin_c, cos_c) = theta_c.sin_cos();
    let lhs = (cos_c - cos_b).abs();
    let rhs = 1.0 - sin_c * sin_b * phi.cos() - cos_c * cos_b;
    Margin::from_value(lhs - rhs)
}

/// CHSH combination `S = E(a,b) + E(a,b') + E(a',b) - E(a',b')`.
pub fn chsh_value(
    state: &TwoQubitState,
    a: &Direction,
    a2: &Direction,
    b: &Direction,
    b2: &Direction,
) -> f64 {
    state.correlation(a, b) + state.correlation(a, b2) + state.correlation(a2, b)
        - state.correlation(a2, b2)
}

/// CHSH margin against the classical bound 2, under the chosen
/// sign-placement mode.
pub fn chsh_margin(
    state: &TwoQubitState,
    a: &Direction,
    a2: &Direction,
    b: &Direction,
    b2: &Direction,
    mode: ChshMode,
) -> Margin {
    let value = match mode {
        ChshMode::Fixed => chsh_value(state, a, a2, b, b2).abs() - 2.0,
        ChshMode::MaxOverSignPosition => {
            let e = [
                state.correlation(a, b),
                state.correlation(a, b2),
                state.correlation(a2, b),
                state.correlation(a2, b2),
            ];
            let total: f64 = e.iter().sum();
            // S_k flips the sign of the k-th correlator: S_k = total - 2 e_k.
            let best = e
                .iter()
                .map(|&ek| (total - 2.0 * ek).abs())
                .fold(f64::NEG_INFINITY, f64::max);
            best - 2.0
        }
    };
    Margin::from_value(value)
}
