//! Exact pipeline for the singlet's violation volume under the
//! three-direction inequality.
//!
//! With `a` pinned to +z the violating configurations live in the chart
//! `x = cos θ_b`, `y = cos θ_c`, `z = cos² φ`. At fixed `z` the violating
//! region of the (x, y) square is bounded by the curve
//!
//! ```text
//! y_z(x) = [(1+x) - z(1-x)] / [(1+x) + z(1-x)]
//! ```
//!
//! whose enclosed area `A(z)` has both a closed form and a power series in
//! `(1 - z)`. Folding the spectator azimuth and the two mirror halves into
//! the measure leaves a single 1D integral
//!
//! ```text
//! V = 4π ∫₀¹ A(z) / √(z(1-z)) dz = 8π ∫₀^{π/2} A(sin² u) du
//! ```
//!
//! which evaluates to `16π²/3`, i.e. one third of the total setting volume
//! `16π²`. This module exposes each intermediate: the boundary curve, both
//! area representations, the de-singularized quadrature, the term-wise
//! integrated gamma-ratio series, and the exact constant.

use rayon::prelude::*;
use serde::Serialize;
use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::sync::OnceLock;
use thiserror::Error;

/// Total volume of the setting space: the product of two solid angles,
/// each weighted by the 2π of the spectator azimuth sum.
pub const TOTAL_SETTING_VOLUME: f64 = 16.0 * PI * PI;

/// The exact violation volume `16π²/3`.
pub const EXACT_VIOLATION_VOLUME: f64 = 16.0 * PI * PI / 3.0;

/// The exact relative violation volume, 1/3.
pub const EXACT_RELATIVE_VOLUME: f64 = 1.0 / 3.0;

/// Crossover of the closed-form/series dispatcher: the closed form loses
/// digits to cancellation as z → 1, the series needs many terms as z → 0.
pub const AREA_DISPATCH_CROSSOVER: f64 = 0.9;

/// Smallest quadrature tolerance the panel-doubling refinement can honor.
pub const QUADRATURE_TOLERANCE_FLOOR: f64 = 1e-13;

const SERIES_TERM_CAP: usize = 1_000_000;
const QUADRATURE_ORDER: usize = 32;
const MAX_PANELS: u64 = 1 << 17;

#[derive(Error, Debug, Clone, PartialEq)]
pub enum AnalyticError {
    #[error("boundary curve is indeterminate at (x, z) = (-1, 0)")]
    IndeterminateBoundary,
    #[error("x = {0} is outside [-1, 1]")]
    XOutOfRange(f64),
    #[error("z = {0} is outside [0, 1]")]
    ZOutOfRange(f64),
    #[error("y = {0} is outside [-1, 1]")]
    YOutOfRange(f64),
    #[error("rel_tol = {0} must be positive and finite")]
    InvalidRelTol(f64),
    #[error("area series did not converge within {cap} terms at z = {z}")]
    SeriesDidNotConverge { z: f64, cap: usize },
    #[error(
        "abs_tol = {requested:e} is below the achievable floor; \
         request at least {floor:e}"
    )]
    ToleranceBelowFloor { requested: f64, floor: f64 },
    #[error("quadrature did not reach abs_tol = {abs_tol:e} within {max_panels} panels")]
    QuadratureDidNotConverge { abs_tol: f64, max_panels: u64 },
}

/// How a [`VolumeResult`] was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    ClosedForm,
    Quadrature,
    Series,
    MonteCarlo,
}

/// A violation volume together with the total setting volume it is measured
/// against and method-specific diagnostics.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VolumeResult {
    pub volume: f64,
    pub total: f64,
    pub relative: f64,
    pub method: Method,
    pub diagnostics: BTreeMap<String, f64>,
}

impl VolumeResult {
    fn from_volume(volume: f64, method: Method, diagnostics: BTreeMap<String, f64>) -> Self {
        VolumeResult {
            volume,
            total: TOTAL_SETTING_VOLUME,
            relative: volume / TOTAL_SETTING_VOLUME,
            method,
            diagnostics,
        }
    }
}

/// Point in the reduced chart `(x, y, z) = (cos θ_b, cos θ_c, cos² φ)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ReducedCoordinates {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl ReducedCoordinates {
    pub fn new(x: f64, y: f64, z: f64) -> Result<Self, AnalyticError> {
        if !(-1.0..=1.0).contains(&x) {
            return Err(AnalyticError::XOutOfRange(x));
        }
        if !(-1.0..=1.0).contains(&y) {
            return Err(AnalyticError::YOutOfRange(y));
        }
        if !(0.0..=1.0).contains(&z) {
            return Err(AnalyticError::ZOutOfRange(z));
        }
        Ok(ReducedCoordinates { x, y, z })
    }

    /// Chart map from the polar angles of `b`, `c` and their azimuth
    /// difference.
    pub fn from_angles(theta_b: f64, theta_c: f64, phi: f64) -> Self {
        let cos_phi = phi.cos();
        ReducedCoordinates {
            x: theta_b.cos(),
            y: theta_c.cos(),
            z: cos_phi * cos_phi,
        }
    }

    /// Strict violation test at fixed `z`, covering both mirror halves of
    /// the square: `(1+x)(1-y) < z(1-x)(1+y)` or the same with x and y
    /// swapped.
    pub fn violates(&self) -> bool {
        let (x, y, z) = (self.x, self.y, self.z);
        (1.0 + x) * (1.0 - y) < z * (1.0 - x) * (1.0 + y)
            || (1.0 - x) * (1.0 + y) < z * (1.0 + x) * (1.0 - y)
    }
}

/// Boundary curve of the violating region at fixed `z`:
/// `y_z(x) = [(1+x) - z(1-x)] / [(1+x) + z(1-x)]`.
///
/// The violating region at this `z` is `y > y_z(x)` (plus the mirrored
/// half). `z = 1` gives `y = x`; `z = 0` gives `y = 1` for `x > -1`; the
/// corner `(x, z) = (-1, 0)` is a genuine 0/0 and is rejected.
pub fn y_boundary(x: f64, z: f64) -> Result<f64, AnalyticError> {
    if !(-1.0..=1.0).contains(&x) {
        return Err(AnalyticError::XOutOfRange(x));
    }
    if !(0.0..=1.0).contains(&z) {
        return Err(AnalyticError::ZOutOfRange(z));
    }
    let forward = (1.0 + x) - z * (1.0 - x);
    let backward = (1.0 + x) + z * (1.0 - x);
    if backward == 0.0 {
        return Err(AnalyticError::IndeterminateBoundary);
    }
    Ok(forward / backward)
}

/// Area of the violating region between `y_z` and `y = 1` over `x ∈ [-1, 1]`:
/// `A(z) = 2 - 2/(1-z)² [2z ln z + (1 - z²)]`, with the endpoint limits
/// `A(0) = 0` and `A(1) = 2` substituted.
///
/// Evaluated in the factored form `4z(-ln z - (1-z))/(1-z)²`, which stays
/// accurate down to the smallest positive `z`.
pub fn area_closed(z: f64) -> Result<f64, AnalyticError> {
    if !(0.0..=1.0).contains(&z) {
        return Err(AnalyticError::ZOutOfRange(z));
    }
    Ok(area_closed_inner(z))
}

fn area_closed_inner(z: f64) -> f64 {
    if z == 0.0 {
        return 0.0;
    }
    if z == 1.0 {
        return 2.0;
    }
    let one_minus_z = 1.0 - z;
    4.0 * z * (-z.ln() - one_minus_z) / (one_minus_z * one_minus_z)
}

/// Series form of the area, `A(z) = 4z Σ_{n≥0} (1-z)ⁿ/(n+2)`, truncated when
/// the next term drops below `rel_tol` times the running sum.
///
/// This is the expansion of the closed form around `z = 1` and is the
/// accurate representation there, where the closed form cancels
/// catastrophically. Summation is capped at 10⁶ terms; the cap can only be
/// hit for very small `z` combined with a very small `rel_tol`.
pub fn area_series(z: f64, rel_tol: f64) -> Result<f64, AnalyticError> {
    if !(0.0..=1.0).contains(&z) {
        return Err(AnalyticError::ZOutOfRange(z));
    }
    if !(rel_tol.is_finite() && rel_tol > 0.0) {
        return Err(AnalyticError::InvalidRelTol(rel_tol));
    }
    if z == 0.0 {
        return Ok(0.0);
    }
    area_series_inner(z, rel_tol)
}

fn area_series_inner(z: f64, rel_tol: f64) -> Result<f64, AnalyticError> {
    let w = 1.0 - z;
    let mut sum = 0.0;
    let mut power = 1.0; // w^n
    let mut n = 0usize;
    loop {
        sum += power / (n + 2) as f64;
        power *= w;
        let next = power / (n + 3) as f64;
        if next < rel_tol * sum {
            break;
        }
        n += 1;
        if n >= SERIES_TERM_CAP {
            return Err(AnalyticError::SeriesDidNotConverge {
                z,
                cap: SERIES_TERM_CAP,
            });
        }
    }
    Ok(4.0 * z * sum)
}

/// Area function with per-`z` dispatch: closed form for
/// `z <= `[`AREA_DISPATCH_CROSSOVER`], series beyond, where each
/// representation holds full accuracy.
pub fn area(z: f64) -> Result<f64, AnalyticError> {
    if !(0.0..=1.0).contains(&z) {
        return Err(AnalyticError::ZOutOfRange(z));
    }
    Ok(area_dispatch(z))
}

fn area_dispatch(z: f64) -> f64 {
    if z <= AREA_DISPATCH_CROSSOVER {
        area_closed_inner(z)
    } else {
        // (1-z)^n < 0.1^n here, so the cap is unreachable.
        area_series_inner(z, 1e-15).expect("series converges past the crossover")
    }
}

/// Violation volume by numerical integration of
/// `V = 4π ∫₀¹ A(z)/√(z(1-z)) dz`.
///
/// The integrable endpoint singularities are removed by `z = sin² u`, giving
/// `V = 8π ∫₀^{π/2} A(sin² u) du`, which is integrated by composite
/// Gauss–Legendre panels, doubling the panel count until consecutive
/// refinements differ by less than `abs_tol`.
pub fn volume_quadrature(abs_tol: f64) -> Result<VolumeResult, AnalyticError> {
    let run = folded_quadrature(&area_dispatch, abs_tol)?;
    let mut diagnostics = BTreeMap::new();
    diagnostics.insert("panels".to_string(), run.panels as f64);
    diagnostics.insert("refinements".to_string(), run.refinements as f64);
    diagnostics.insert("gl_order".to_string(), QUADRATURE_ORDER as f64);
    diagnostics.insert("evaluations".to_string(), run.evaluations as f64);
    diagnostics.insert("last_doubling_diff".to_string(), run.last_diff);
    diagnostics.insert("abs_tol".to_string(), abs_tol);
    Ok(VolumeResult::from_volume(
        run.value,
        Method::Quadrature,
        diagnostics,
    ))
}

struct QuadratureRun {
    value: f64,
    panels: u64,
    refinements: u64,
    evaluations: u64,
    last_diff: f64,
}

/// Core of [`volume_quadrature`], parameterized over the area function so
/// tests can drive it with constant integrands.
fn folded_quadrature<F>(area_fn: &F, abs_tol: f64) -> Result<QuadratureRun, AnalyticError>
where
    F: Fn(f64) -> f64 + Sync,
{
    if !(abs_tol >= QUADRATURE_TOLERANCE_FLOOR) {
        return Err(AnalyticError::ToleranceBelowFloor {
            requested: abs_tol,
            floor: QUADRATURE_TOLERANCE_FLOOR,
        });
    }
    let rule = gauss_legendre_rule();
    let mut evaluations = 0u64;
    let mut previous = folded_pass(area_fn, rule, 1);
    evaluations += QUADRATURE_ORDER as u64;
    let mut panels = 2u64;
    let mut refinements = 0u64;
    loop {
        let current = folded_pass(area_fn, rule, panels);
        evaluations += panels * QUADRATURE_ORDER as u64;
        refinements += 1;
        let diff = (current - previous).abs();
        if diff < abs_tol {
            return Ok(QuadratureRun {
                value: current,
                panels,
                refinements,
                evaluations,
                last_diff: diff,
            });
        }
        if panels >= MAX_PANELS {
            return Err(AnalyticError::QuadratureDidNotConverge {
                abs_tol,
                max_panels: MAX_PANELS,
            });
        }
        previous = current;
        panels *= 2;
    }
}

/// One composite pass of `8π ∫₀^{π/2} A(sin² u) du` over `panels` equal
/// panels. Panels are evaluated in parallel, then reduced in index order
/// with compensated summation so the result is bitwise independent of the
/// worker count.
fn folded_pass<F>(area_fn: &F, rule: &[(f64, f64)], panels: u64) -> f64
where
    F: Fn(f64) -> f64 + Sync,
{
    let h = (PI / 2.0) / panels as f64;
    let panel_values: Vec<f64> = (0..panels)
        .into_par_iter()
        .map(|panel| {
            let midpoint = (panel as f64 + 0.5) * h;
            let mut acc = 0.0;
            for &(node, weight) in rule {
                let u = midpoint + 0.5 * h * node;
                let s = u.sin();
                acc += weight * area_fn(s * s);
            }
            0.5 * h * acc
        })
        .collect();

    // Kahan reduction in panel order.
    let mut sum = 0.0;
    let mut compensation = 0.0;
    for value in panel_values {
        let adjusted = value - compensation;
        let tentative = sum + adjusted;
        compensation = (tentative - sum) - adjusted;
        sum = tentative;
    }
    8.0 * PI * sum
}

/// Partial sum of the term-wise integrated series
/// `S_N = 8π^{3/2} Σ_{n=0}^{N-1} Γ(n+1/2)/Γ(n+3)`.
///
/// The gamma ratio is never evaluated directly: terms are generated from the
/// recurrence `term(n+1) = term(n)·(n+1/2)/(n+3)`, normalized so that the
/// n = 0 term is exactly `4π²`. The sequence is increasing and converges to
/// `16π²/3` with a tail of order `N^{-3/2}`.
pub fn volume_series_partial(n_terms: usize) -> f64 {
    assert!(n_terms >= 1, "n_terms must be at least 1");
    let (sum, _) = series_sum_and_next(n_terms);
    FIRST_SERIES_TERM * sum
}

/// [`volume_series_partial`] packaged with diagnostics.
pub fn volume_series_result(n_terms: usize) -> VolumeResult {
    assert!(n_terms >= 1, "n_terms must be at least 1");
    let (sum, next) = series_sum_and_next(n_terms);
    let mut diagnostics = BTreeMap::new();
    diagnostics.insert("terms".to_string(), n_terms as f64);
    diagnostics.insert("next_term".to_string(), FIRST_SERIES_TERM * next);
    VolumeResult::from_volume(FIRST_SERIES_TERM * sum, Method::Series, diagnostics)
}

/// First series term `8π^{3/2}·Γ(1/2)/Γ(3) = 4π²`.
const FIRST_SERIES_TERM: f64 = 4.0 * PI * PI;

fn series_sum_and_next(n_terms: usize) -> (f64, f64) {
    let mut term = 1.0; // gamma ratio normalized to the n = 0 term
    let mut sum = 0.0;
    for n in 0..n_terms {
        sum += term;
        term *= (n as f64 + 0.5) / (n as f64 + 3.0);
    }
    (sum, term)
}

/// The exact result: volume `16π²/3` of a total `16π²`, relative volume 1/3.
///
/// `relative` is set to the exact 1/3; the quotient `volume/total` agrees
/// with it to within one ulp.
pub fn exact_volume() -> VolumeResult {
    VolumeResult {
        volume: EXACT_VIOLATION_VOLUME,
        total: TOTAL_SETTING_VOLUME,
        relative: EXACT_RELATIVE_VOLUME,
        method: Method::ClosedForm,
        diagnostics: BTreeMap::new(),
    }
}

fn gauss_legendre_rule() -> &'static [(f64, f64)] {
    static RULE: OnceLock<Vec<(f64, f64)>> = OnceLock::new();
    RULE.get_or_init(|| gauss_legendre_nodes(QUADRATURE_ORDER))
}

/// Nodes and weights of the order-`n` Gauss–Legendre rule on [-1, 1],
/// by Newton iteration on the Legendre recurrence.
fn gauss_legendre_nodes(n: usize) -> Vec<(f64, f64)> {
    let mut rule = Vec::with_capacity(n);
    for i in 0..n {
        let mut x = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut derivative = 0.0;
        for _ in 0..100 {
            let (p, dp) = legendre_with_derivative(n, x);
            derivative = dp;
            let step = p / dp;
            x -= step;
            if step.abs() < 1e-15 {
                let (_, dp) = legendre_with_derivative(n, x);
                derivative = dp;
                break;
            }
        }
        let weight = 2.0 / ((1.0 - x * x) * derivative * derivative);
        rule.push((x, weight));
    }
    rule.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
    rule
}

fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p_prev = 1.0;
    let mut p = x;
    for k in 2..=n {
        let kf = k as f64;
        let p_next = ((2.0 * kf - 1.0) * x * p - (kf - 1.0) * p_prev) / kf;
        p_prev = p;
        p = p_next;
    }
    let dp = n as f64 * (x * p - p_prev) / (x * x - 1.0);
    (p, dp)
}
