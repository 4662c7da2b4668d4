//! Measurement directions and two-qubit states in the Bloch picture.
//!
//! A two-qubit density operator is held as its Bloch decomposition: two local
//! Bloch vectors `r`, `s` and the 3×3 correlation tensor `T` with
//! `T_ij = ⟨σ_i ⊗ σ_j⟩`. Every correlation functional in this crate depends
//! only on `T`, so the hot paths never touch complex arithmetic; the 4×4
//! Hermitian operator is reconstructed once, at construction time, to verify
//! positive semidefiniteness.

use num_complex::Complex64;
use serde::Serialize;
use std::f64::consts::{PI, TAU};
use thiserror::Error;

/// Component-norm slack accepted by [`Direction::new`] before rejecting the
/// input instead of re-normalizing it.
pub const UNIT_NORM_TOLERANCE: f64 = 1e-6;

/// Lower bound accepted for the minimum eigenvalue of a reconstructed
/// density operator.
pub const PSD_TOLERANCE: f64 = 1e-9;

/// Errors produced by direction, angle, and state construction.
#[derive(Error, Debug, Clone, PartialEq)]
pub enum QuantumError {
    #[error("direction components must be finite, got ({0}, {1}, {2})")]
    NonFiniteDirection(f64, f64, f64),
    #[error(
        "direction norm {norm} deviates from 1 by more than {tolerance}; \
         refusing to re-normalize"
    )]
    NotUnitNorm { norm: f64, tolerance: f64 },
    #[error("angle arguments must be finite, got theta = {theta}, phi = {phi}")]
    NonFiniteAngle { theta: f64, phi: f64 },
    #[error("mixing weight p = {0} must lie in [0, 1]")]
    WernerWeightOutOfRange(f64),
    #[error(
        "state `{label}` is not positive semidefinite: minimum eigenvalue \
         {min_eigenvalue:.3e} is below -{tolerance:.0e}"
    )]
    NotPositiveSemidefinite {
        label: String,
        min_eigenvalue: f64,
        tolerance: f64,
    },
    #[error("state file field `{field}`: {message}")]
    InvalidStateField { field: String, message: String },
    #[error("state file is not a JSON object")]
    StateFileNotObject,
}

/// Unit vector on the sphere, used for measurement axes.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Direction {
    ux: f64,
    uy: f64,
    uz: f64,
}

impl Direction {
    pub const X: Direction = Direction { ux: 1.0, uy: 0.0, uz: 0.0 };
    pub const Y: Direction = Direction { ux: 0.0, uy: 1.0, uz: 0.0 };
    pub const Z: Direction = Direction { ux: 0.0, uy: 0.0, uz: 1.0 };

    /// Builds a direction from components, re-normalizing when the norm is
    /// within [`UNIT_NORM_TOLERANCE`] of one (file-input rounding) and
    /// rejecting anything further off.
    pub fn new(ux: f64, uy: f64, uz: f64) -> Result<Self, QuantumError> {
        if !(ux.is_finite() && uy.is_finite() && uz.is_finite()) {
            return Err(QuantumError::NonFiniteDirection(ux, uy, uz));
        }
        let norm = (ux * ux + uy * uy + uz * uz).sqrt();
        if (norm - 1.0).abs() > UNIT_NORM_TOLERANCE {
            return Err(QuantumError::NotUnitNorm {
                norm,
                tolerance: UNIT_NORM_TOLERANCE,
            });
        }
        Ok(Direction {
            ux: ux / norm,
            uy: uy / norm,
            uz: uz / norm,
        })
    }

    /// Spherical chart: `theta` is the polar angle measured from +z and is
    /// clamped into [0, π]; `phi` is the azimuth, wrapped modulo 2π.
    /// Non-finite input is rejected.
    pub fn from_spherical(theta: f64, phi: f64) -> Result<Self, QuantumError> {
        if !(theta.is_finite() && phi.is_finite()) {
            return Err(QuantumError::NonFiniteAngle { theta, phi });
        }
        let theta = theta.clamp(0.0, PI);
        let phi = phi.rem_euclid(TAU);
        let (st, ct) = (theta.sin(), theta.cos());
        let (sp, cp) = (phi.sin(), phi.cos());
        Ok(Direction {
            ux: st * cp,
            uy: st * sp,
            uz: ct,
        })
    }

    /// Constructor for components that are unit-norm by construction
    /// (sphere sampling, rotations of unit vectors).
    pub(crate) fn from_unit_components(ux: f64, uy: f64, uz: f64) -> Self {
        debug_assert!((ux * ux + uy * uy + uz * uz - 1.0).abs() < 1e-12);
        Direction { ux, uy, uz }
    }

    pub fn ux(&self) -> f64 {
        self.ux
    }

    pub fn uy(&self) -> f64 {
        self.uy
    }

    pub fn uz(&self) -> f64 {
        self.uz
    }

    pub fn components(&self) -> [f64; 3] {
        [self.ux, self.uy, self.uz]
    }

    pub fn dot(&self, other: &Direction) -> f64 {
        self.ux * other.ux + self.uy * other.uy + self.uz * other.uz
    }

    /// Polar angle in [0, π].
    pub fn polar_angle(&self) -> f64 {
        self.uz.clamp(-1.0, 1.0).acos()
    }

    /// Azimuth in [0, 2π).
    pub fn azimuthal_angle(&self) -> f64 {
        self.uy.atan2(self.ux).rem_euclid(TAU)
    }
}

/// Polar/azimuthal chart for the pair of directions `b`, `c` entering the
/// three-direction inequality once `a` is pinned to +z.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AngleSettings {
    theta_b: f64,
    theta_c: f64,
    phi_b: f64,
    phi_c: f64,
}

impl AngleSettings {
    /// Polar angles are clamped into [0, π], azimuths wrapped into [0, 2π).
    pub fn new(
        theta_b: f64,
        theta_c: f64,
        phi_b: f64,
        phi_c: f64,
    ) -> Result<Self, QuantumError> {
        for &(theta, phi) in &[(theta_b, phi_b), (theta_c, phi_c)] {
            if !(theta.is_finite() && phi.is_finite()) {
                return Err(QuantumError::NonFiniteAngle { theta, phi });
            }
        }
        Ok(AngleSettings {
            theta_b: theta_b.clamp(0.0, PI),
            theta_c: theta_c.clamp(0.0, PI),
            phi_b: phi_b.rem_euclid(TAU),
            phi_c: phi_c.rem_euclid(TAU),
        })
    }

    pub fn from_directions(b: &Direction, c: &Direction) -> Self {
        AngleSettings {
            theta_b: b.polar_angle(),
            theta_c: c.polar_angle(),
            phi_b: b.azimuthal_angle(),
            phi_c: c.azimuthal_angle(),
        }
    }

    pub fn theta_b(&self) -> f64 {
        self.theta_b
    }

    pub fn theta_c(&self) -> f64 {
        self.theta_c
    }

    pub fn phi_b(&self) -> f64 {
        self.phi_b
    }

    pub fn phi_c(&self) -> f64 {
        self.phi_c
    }

    /// Azimuth difference `phi_c - phi_b`, in (-2π, 2π). Only this combination
    /// enters the inequality.
    pub fn phi(&self) -> f64 {
        self.phi_c - self.phi_b
    }

    /// Azimuth sum `phi_c + phi_b`, in [0, 4π). A pure spectator variable.
    pub fn lambda(&self) -> f64 {
        self.phi_c + self.phi_b
    }

    /// The two directions (b, c) described by these angles.
    pub fn directions(&self) -> (Direction, Direction) {
        let b = Direction::from_spherical(self.theta_b, self.phi_b)
            .expect("angles validated at construction");
        let c = Direction::from_spherical(self.theta_c, self.phi_c)
            .expect("angles validated at construction");
        (b, c)
    }
}

/// Two-qubit state in the Bloch decomposition: local vectors `r`, `s` and the
/// correlation tensor `T`. Construction verifies that the reconstructed 4×4
/// density operator is positive semidefinite within [`PSD_TOLERANCE`].
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TwoQubitState {
    r: [f64; 3],
    s: [f64; 3],
    #[serde(rename = "T")]
    t: [[f64; 3]; 3],
    label: String,
}

impl TwoQubitState {
    pub fn new(
        r: [f64; 3],
        s: [f64; 3],
        t: [[f64; 3]; 3],
        label: impl Into<String>,
    ) -> Result<Self, QuantumError> {
        let label = label.into();
        let state = TwoQubitState { r, s, t, label };
        let min_eigenvalue = state.min_density_eigenvalue();
        if min_eigenvalue < -PSD_TOLERANCE {
            return Err(QuantumError::NotPositiveSemidefinite {
                label: state.label,
                min_eigenvalue,
                tolerance: PSD_TOLERANCE,
            });
        }
        Ok(state)
    }

    /// The spin singlet: `r = s = 0`, `T = -I`, so `E(a, b) = -a·b`.
    pub fn singlet() -> Self {
        let neg_identity = [
            [-1.0, 0.0, 0.0],
            [0.0, -1.0, 0.0],
            [0.0, 0.0, -1.0],
        ];
        TwoQubitState::new([0.0; 3], [0.0; 3], neg_identity, "singlet")
            .expect("singlet is a valid state")
    }

    /// Werner mixture of the singlet with white noise: `T = -p·I`.
    /// Rejects `p` outside [0, 1] (the operator stops being PSD past 1).
    pub fn werner(p: f64) -> Result<Self, QuantumError> {
        if !(0.0..=1.0).contains(&p) {
            return Err(QuantumError::WernerWeightOutOfRange(p));
        }
        let t = [[-p, 0.0, 0.0], [0.0, -p, 0.0], [0.0, 0.0, -p]];
        TwoQubitState::new([0.0; 3], [0.0; 3], t, format!("werner({p})"))
    }

    pub fn bloch_a(&self) -> [f64; 3] {
        self.r
    }

    pub fn bloch_b(&self) -> [f64; 3] {
        self.s
    }

    pub fn correlation_tensor(&self) -> &[[f64; 3]; 3] {
        &self.t
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    /// Correlation function `E(a, b) = aᵀ T b`: the expected product of the
    /// ±1 outcomes along `a` (party A) and `b` (party B).
    pub fn correlation(&self, a: &Direction, b: &Direction) -> f64 {
        let av = a.components();
        let bv = b.components();
        let mut value = 0.0;
        for i in 0..3 {
            let row = &self.t[i];
            value += av[i] * (row[0] * bv[0] + row[1] * bv[1] + row[2] * bv[2]);
        }
        value
    }

    /// True when `r = s = 0` and `T` is proportional to the identity within
    /// `tol`, i.e. the state looks the same along every axis. Pinning one
    /// measurement direction is only a valid shortcut for such states.
    pub fn is_rotationally_invariant(&self, tol: f64) -> bool {
        let vectors_vanish = self
            .r
            .iter()
            .chain(self.s.iter())
            .all(|component| component.abs() <= tol);
        if !vectors_vanish {
            return false;
        }
        let scale = self.t[0][0];
        for i in 0..3 {
            for j in 0..3 {
                let expected = if i == j { scale } else { 0.0 };
                if (self.t[i][j] - expected).abs() > tol {
                    return false;
                }
            }
        }
        true
    }

    /// Parses the state-file JSON object `{ "r": [..3], "s": [..3],
    /// "T": [[..3]; 3], "label": optional }`, naming the offending field on
    /// error, and validates the result as a state.
    pub fn from_state_file_json(text: &str) -> Result<Self, QuantumError> {
        let value: serde_json::Value =
            serde_json::from_str(text).map_err(|e| QuantumError::InvalidStateField {
                field: "<document>".to_string(),
                message: format!("invalid JSON: {e}"),
            })?;
        let object = value
            .as_object()
            .ok_or(QuantumError::StateFileNotObject)?;

        for key in object.keys() {
            if !matches!(key.as_str(), "r" | "s" | "T" | "label") {
                return Err(QuantumError::InvalidStateField {
                    field: key.clone(),
                    message: "unknown field (expected r, s, T, label)".to_string(),
                });
            }
        }

        let r = parse_vector3(object.get("r"), "r")?;
        let s = parse_vector3(object.get("s"), "s")?;
        let t = parse_matrix3(object.get("T"), "T")?;
        let label = match object.get("label") {
            None => "file".to_string(),
            Some(serde_json::Value::String(text)) => text.clone(),
            Some(_) => {
                return Err(QuantumError::InvalidStateField {
                    field: "label".to_string(),
                    message: "must be a string".to_string(),
                })
            }
        };
        TwoQubitState::new(r, s, t, label)
    }

    /// Minimum eigenvalue of the reconstructed density operator
    /// `(I⊗I + r·σ⊗I + I⊗s·σ + Σ T_ij σ_i⊗σ_j) / 4`.
    fn min_density_eigenvalue(&self) -> f64 {
        let rho = self.density_matrix();
        // A complex Hermitian H = A + iB has the same spectrum (doubled) as
        // the real symmetric embedding [[A, -B], [B, A]].
        let mut embedded = [[0.0f64; 8]; 8];
        for i in 0..4 {
            for j in 0..4 {
                embedded[i][j] = rho[i][j].re;
                embedded[i + 4][j + 4] = rho[i][j].re;
                embedded[i][j + 4] = -rho[i][j].im;
                embedded[i + 4][j] = rho[i][j].im;
            }
        }
        jacobi_eigenvalues(&mut embedded)
            .into_iter()
            .fold(f64::INFINITY, f64::min)
    }

    fn density_matrix(&self) -> [[Complex64; 4]; 4] {
        let identity = pauli_identity();
        let sigma = [pauli_x(), pauli_y(), pauli_z()];

        let mut rho = kron(&identity, &identity);
        for i in 0..3 {
            accumulate(&mut rho, &kron(&sigma[i], &identity), self.r[i]);
            accumulate(&mut rho, &kron(&identity, &sigma[i]), self.s[i]);
            for j in 0..3 {
                accumulate(&mut rho, &kron(&sigma[i], &sigma[j]), self.t[i][j]);
            }
        }
        for row in rho.iter_mut() {
            for entry in row.iter_mut() {
                *entry *= 0.25;
            }
        }
        rho
    }
}

fn parse_number(
    value: &serde_json::Value,
    field: &str,
) -> Result<f64, QuantumError> {
    let number = value
        .as_f64()
        .ok_or_else(|| QuantumError::InvalidStateField {
            field: field.to_string(),
            message: format!("expected a number, got {value}"),
        })?;
    if !number.is_finite() {
        return Err(QuantumError::InvalidStateField {
            field: field.to_string(),
            message: "must be finite".to_string(),
        });
    }
    Ok(number)
}

fn parse_vector3(
    value: Option<&serde_json::Value>,
    field: &str,
) -> Result<[f64; 3], QuantumError> {
    let value = value.ok_or_else(|| QuantumError::InvalidStateField {
        field: field.to_string(),
        message: "missing".to_string(),
    })?;
    let items = value
        .as_array()
        .ok_or_else(|| QuantumError::InvalidStateField {
            field: field.to_string(),
            message: "expected an array of 3 numbers".to_string(),
        })?;
    if items.len() != 3 {
        return Err(QuantumError::InvalidStateField {
            field: field.to_string(),
            message: format!("expected 3 components, got {}", items.len()),
        });
    }
    let mut out = [0.0; 3];
    for (i, item) in items.iter().enumerate() {
        out[i] = parse_number(item, field)?;
    }
    Ok(out)
}

fn parse_matrix3(
    value: Option<&serde_json::Value>,
    field: &str,
) -> Result<[[f64; 3]; 3], QuantumError> {
    let value = value.ok_or_else(|| QuantumError::InvalidStateField {
        field: field.to_string(),
        message: "missing".to_string(),
    })?;
    let rows = value
        .as_array()
        .ok_or_else(|| QuantumError::InvalidStateField {
            field: field.to_string(),
            message: "expected a 3×3 nested array".to_string(),
        })?;
    if rows.len() != 3 {
        return Err(QuantumError::InvalidStateField {
            field: field.to_string(),
            message: format!("expected 3 rows, got {}", rows.len()),
        });
    }
    let mut out = [[0.0; 3]; 3];
    for (i, row) in rows.iter().enumerate() {
        let row_field = format!("{field}[{i}]");
        let entries = row
            .as_array()
            .ok_or_else(|| QuantumError::InvalidStateField {
                field: row_field.clone(),
                message: "expected an array of 3 numbers".to_string(),
            })?;
        if entries.len() != 3 {
            return Err(QuantumError::InvalidStateField {
                field: row_field,
                message: format!("expected 3 columns, got {}", entries.len()),
            });
        }
        for (j, entry) in entries.iter().enumerate() {
            out[i][j] = parse_number(entry, &format!("{field}[{i}][{j}]"))?;
        }
    }
    Ok(out)
}

type Mat2 = [[Complex64; 2]; 2];

fn pauli_identity() -> Mat2 {
    let one = Complex64::new(1.0, 0.0);
    let zero = Complex64::new(0.0, 0.0);
    [[one, zero], [zero, one]]
}

fn pauli_x() -> Mat2 {
    let one = Complex64::new(1.0, 0.0);
    let zero = Complex64::new(0.0, 0.0);
    [[zero, one], [one, zero]]
}

fn pauli_y() -> Mat2 {
    let zero = Complex64::new(0.0, 0.0);
    [[zero, Complex64::new(0.0, -1.0)], [Complex64::new(0.0, 1.0), zero]]
}

fn pauli_z() -> Mat2 {
    let one = Complex64::new(1.0, 0.0);
    let zero = Complex64::new(0.0, 0.0);
    [[one, zero], [zero, -one]]
}

fn kron(a: &Mat2, b: &Mat2) -> [[Complex64; 4]; 4] {
    let mut out = [[Complex64::new(0.0, 0.0); 4]; 4];
    for i in 0..2 {
        for j in 0..2 {
            for k in 0..2 {
                for l in 0..2 {
                    out[2 * i + k][2 * j + l] = a[i][j] * b[k][l];
                }
            }
        }
    }
    out
}

fn accumulate(target: &mut [[Complex64; 4]; 4], term: &[[Complex64; 4]; 4], weight: f64) {
    for i in 0..4 {
        for j in 0..4 {
            target[i][j] += term[i][j] * weight;
        }
    }
}

/// Eigenvalues of a real symmetric matrix by cyclic Jacobi sweeps.
fn jacobi_eigenvalues<const N: usize>(a: &mut [[f64; N]; N]) -> [f64; N] {
    const MAX_SWEEPS: usize = 64;
    for _ in 0..MAX_SWEEPS {
        let mut off_diagonal = 0.0;
        for p in 0..N {
            for q in (p + 1)..N {
                off_diagonal += a[p][q] * a[p][q];
            }
        }
        if off_diagonal.sqrt() < 1e-15 {
            break;
        }
        for p in 0..N {
            for q in (p + 1)..N {
                if a[p][q].abs() < 1e-300 {
                    continue;
                }
                let tau = (a[q][q] - a[p][p]) / (2.0 * a[p][q]);
                let t = tau.signum() / (tau.abs() + (1.0 + tau * tau).sqrt());
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;
                let apq = a[p][q];
                a[p][p] -= t * apq;
                a[q][q] += t * apq;
                a[p][q] = 0.0;
                a[q][p] = 0.0;
                for k in 0..N {
                    if k == p || k == q {
                        continue;
                    }
                    let akp = a[k][p];
                    let akq = a[k][q];
                    a[k][p] = c * akp - s * akq;
                    a[p][k] = a[k][p];
                    a[k][q] = s * akp + c * akq;
                    a[q][k] = a[k][q];
                }
            }
        }
    }
    let mut eigenvalues = [0.0; N];
    for i in 0..N {
        eigenvalues[i] = a[i][i];
    }
    eigenvalues
}
