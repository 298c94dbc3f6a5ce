//! Kaiser's Varimax rotation.
//!
//! Pairs of factor columns are rotated in their plane by the angle that
//! maximizes the variance of squared loadings, sweeping over all pairs until
//! a full sweep no longer improves the criterion.

use nalgebra::DMatrix;

use crate::eigen::compose_rotation;
use crate::error::{Error, Result};
use crate::factor::LoadingMatrix;
use crate::sum::compensated_sum;

/// Below this in both numerator and denominator the optimal angle is undefined.
const ANGLE_TOL: f64 = 1e-14;
/// Rows with a smaller norm are left out of the rotation.
const ZERO_ROW: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VarimaxOptions {
    /// Scale rows to unit length before rotating and restore them afterwards.
    pub normalize: bool,
    pub max_sweeps: usize,
    /// Stop when a sweep improves the objective by less than this, relatively.
    pub tol: f64,
}

impl Default for VarimaxOptions {
    fn default() -> Self {
        VarimaxOptions {
            normalize: true,
            max_sweeps: 50,
            tol: 1e-9,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RotationResult {
    pub rotated: LoadingMatrix,
    /// Orthogonal `k×k` matrix with `rotated = original · rotation`.
    pub rotation: DMatrix<f64>,
    pub sweeps_used: usize,
    /// Objective of the (normalized, if requested) loadings before any sweep.
    pub initial_objective: f64,
    /// Objective after each sweep.
    pub objective_trace: Vec<f64>,
    /// False when `max_sweeps` ran out before the tolerance was met.
    pub converged: bool,
}

fn column_objective<'a>(col: impl Iterator<Item = &'a f64> + Clone, n: f64) -> f64 {
    let fourth = compensated_sum(col.clone().map(|v| v.powi(4)));
    let second = compensated_sum(col.map(|v| v * v));
    n * fourth - second * second
}

fn objective(m: &DMatrix<f64>) -> f64 {
    let n = m.nrows() as f64;
    compensated_sum(m.column_iter().map(|c| column_objective(c.iter(), n)))
}

/// `Σ_j [n·Σ_i L_ij⁴ − (Σ_i L_ij²)²]`.
pub fn varimax_objective(loadings: &LoadingMatrix) -> Result<f64> {
    if loadings.factors() < 2 {
        return Err(Error::Size(format!(
            "rotation needs at least 2 factors, got {}",
            loadings.factors()
        )));
    }
    Ok(objective(loadings.entries()))
}

/// Angle `φ ∈ (−π/4, π/4]` maximizing the objective of the pair
/// `X = x·cos φ + y·sin φ`, `Y = −x·sin φ + y·cos φ`.
///
/// Returns `Ok(None)` when the objective does not depend on the angle.
pub fn optimal_plane_angle(x: &[f64], y: &[f64]) -> Result<Option<f64>> {
    if x.len() != y.len() || x.len() < 2 {
        return Err(Error::Size(format!(
            "plane needs two equal columns of at least 2 rows, got {} and {}",
            x.len(),
            y.len()
        )));
    }
    let n = x.len() as f64;
    let u: Vec<f64> = x.iter().zip(y).map(|(a, b)| a * a - b * b).collect();
    let v: Vec<f64> = x.iter().zip(y).map(|(a, b)| 2.0 * a * b).collect();
    let su = compensated_sum(u.iter().copied());
    let sv = compensated_sum(v.iter().copied());
    let suv = compensated_sum(u.iter().zip(&v).map(|(a, b)| a * b));
    let su2v2 = compensated_sum(u.iter().zip(&v).map(|(a, b)| a * a - b * b));

    let num = 2.0 * (n * suv - su * sv);
    let den = n * su2v2 - (su * su - sv * sv);
    if num.abs() < ANGLE_TOL && den.abs() < ANGLE_TOL {
        return Ok(None);
    }
    // atan2 lands in (−π, π], which puts 4φ in the right quadrant
    Ok(Some(num.atan2(den) / 4.0))
}

fn pair_objective(x: &[f64], y: &[f64]) -> f64 {
    let n = x.len() as f64;
    column_objective(x.iter(), n) + column_objective(y.iter(), n)
}

pub fn varimax(loadings: &LoadingMatrix, options: &VarimaxOptions) -> Result<RotationResult> {
    let k = loadings.factors();
    if k < 2 {
        return Err(Error::Size(format!(
            "rotation needs at least 2 factors, got {k}"
        )));
    }
    let original = loadings.entries();

    let active: Vec<(usize, f64)> = original
        .row_iter()
        .enumerate()
        .map(|(i, r)| (i, r.norm()))
        .filter(|(_, norm)| *norm > ZERO_ROW)
        .collect();
    let mut work = DMatrix::from_fn(active.len(), k, |r, c| {
        let (i, norm) = active[r];
        let v = original[(i, c)];
        if options.normalize {
            v / norm
        } else {
            v
        }
    });

    let mut rotation = DMatrix::identity(k, k);
    let initial_objective = objective(&work);
    let mut current = initial_objective;
    let mut trace = Vec::new();
    let mut converged = work.nrows() < 2;
    let mut sweeps_used = 0;

    while !converged && sweeps_used < options.max_sweeps {
        sweeps_used += 1;
        for i in 0..k - 1 {
            for j in (i + 1)..k {
                let x: Vec<f64> = work.column(i).iter().copied().collect();
                let y: Vec<f64> = work.column(j).iter().copied().collect();
                let Some(phi) = optimal_plane_angle(&x, &y)? else {
                    continue;
                };
                let (s, c) = phi.sin_cos();
                let new_x: Vec<f64> = x.iter().zip(&y).map(|(a, b)| a * c + b * s).collect();
                let new_y: Vec<f64> = x.iter().zip(&y).map(|(a, b)| -a * s + b * c).collect();
                if pair_objective(&new_x, &new_y) < pair_objective(&x, &y) {
                    continue;
                }
                work.set_column(i, &nalgebra::DVector::from_vec(new_x));
                work.set_column(j, &nalgebra::DVector::from_vec(new_y));
                rotation = compose_rotation(&rotation, i, j, -phi)?;
            }
        }
        let next = objective(&work);
        trace.push(next);
        let gain = next - current;
        current = next;
        if gain <= options.tol * current.abs().max(f64::MIN_POSITIVE) {
            converged = true;
        }
    }

    let rotated = LoadingMatrix::new(original * &rotation, loadings.labels().to_vec())?;
    Ok(RotationResult {
        rotated,
        rotation,
        sweeps_used,
        initial_objective,
        objective_trace: trace,
        converged,
    })
}
