//! Symmetric eigendecomposition by cyclic Jacobi plane rotations.
//!
//! A plane rotation `r(i, j, φ)` is the identity with `r_ii = r_jj = cos φ`,
//! `r_ij = sin φ` and `r_ji = −sin φ`. The solver repeatedly applies
//! `A ← rᵀ·A·r` on every plane `(p, q)`, `p < q`, choosing `φ` so the
//! `(p, q)` element vanishes, and accumulates `U ← U·r`. Only rows and
//! columns `p` and `q` change, so each step is `O(n)`.

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::stats::CorrelationMatrix;

const MAX_SWEEPS: usize = 100;
/// Sweeps stop once every off-diagonal element is below this (times the matrix scale).
const OFF_DIAGONAL_TOL: f64 = 1e-12;
/// Planes whose element is already below this (times the matrix scale) are skipped.
const ROTATION_THRESHOLD: f64 = 1e-13;
const SYMMETRY_TOL: f64 = 1e-10;
const PSD_TOL: f64 = 1e-10;

/// Eigenvalues sorted non-increasing with matching eigenvector columns.
#[derive(Debug, Clone, PartialEq)]
pub struct EigenDecomposition {
    pub eigenvalues: Vec<f64>,
    /// Column `j` is the unit eigenvector of `eigenvalues[j]`. The entry of
    /// largest magnitude in every column is non-negative.
    pub eigenvectors: DMatrix<f64>,
    /// Number of Jacobi sweeps performed.
    pub sweeps: usize,
    /// Frobenius norm of the off-diagonal part, initially and after each sweep.
    pub off_diagonal_trace: Vec<f64>,
}

impl EigenDecomposition {
    pub fn dim(&self) -> usize {
        self.eigenvalues.len()
    }
}

fn check_plane(n: usize, i: usize, j: usize) -> Result<()> {
    if i >= j || j >= n {
        return Err(Error::Index(format!(
            "plane ({i}, {j}) requires 0 <= i < j < {n}"
        )));
    }
    Ok(())
}

/// Rotation by `angle` in the `(i, j)` plane of an `n`-dimensional space.
pub fn plane_rotation(n: usize, i: usize, j: usize, angle: f64) -> Result<DMatrix<f64>> {
    check_plane(n, i, j)?;
    let (s, c) = angle.sin_cos();
    let mut r = DMatrix::identity(n, n);
    r[(i, i)] = c;
    r[(i, j)] = s;
    r[(j, i)] = -s;
    r[(j, j)] = c;
    Ok(r)
}

/// `accumulated · plane_rotation(n, i, j, angle)`, touching only columns `i` and `j`.
pub fn compose_rotation(
    accumulated: &DMatrix<f64>,
    i: usize,
    j: usize,
    angle: f64,
) -> Result<DMatrix<f64>> {
    let (rows, n) = accumulated.shape();
    if rows != n {
        return Err(Error::Shape(format!(
            "rotation must be square, got {rows}x{n}"
        )));
    }
    check_plane(n, i, j)?;
    let (s, c) = angle.sin_cos();
    let mut out = accumulated.clone();
    rotate_columns(&mut out, i, j, c, s);
    Ok(out)
}

/// Right-multiplies `m` by the plane rotation with cosine `c` and sine `s`.
fn rotate_columns(m: &mut DMatrix<f64>, i: usize, j: usize, c: f64, s: f64) {
    for r in 0..m.nrows() {
        let a = m[(r, i)];
        let b = m[(r, j)];
        m[(r, i)] = c * a - s * b;
        m[(r, j)] = s * a + c * b;
    }
}

fn off_diagonal(a: &DMatrix<f64>) -> (f64, f64) {
    let n = a.nrows();
    let mut max = 0.0f64;
    let mut sq = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                let v = a[(i, j)];
                max = max.max(v.abs());
                sq += v * v;
            }
        }
    }
    (max, sq.sqrt())
}

/// One two-sided Jacobi step annihilating `a[(p, q)]`; returns `(cos, sin)` of the angle.
fn jacobi_step(a: &mut DMatrix<f64>, p: usize, q: usize) -> (f64, f64) {
    let n = a.nrows();
    let apq = a[(p, q)];
    let theta = (a[(q, q)] - a[(p, p)]) / (2.0 * apq);
    let t = if theta.abs() > 1e150 {
        0.5 / theta
    } else {
        theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt())
    };
    let c = 1.0 / (t * t + 1.0).sqrt();
    let s = t * c;

    for r in 0..n {
        if r == p || r == q {
            continue;
        }
        let arp = a[(r, p)];
        let arq = a[(r, q)];
        let new_rp = c * arp - s * arq;
        let new_rq = s * arp + c * arq;
        a[(r, p)] = new_rp;
        a[(p, r)] = new_rp;
        a[(r, q)] = new_rq;
        a[(q, r)] = new_rq;
    }
    a[(p, p)] -= t * apq;
    a[(q, q)] += t * apq;
    a[(p, q)] = 0.0;
    a[(q, p)] = 0.0;
    (c, s)
}

/// Eigendecomposition of a real symmetric matrix.
pub fn eigen_symmetric(a: &DMatrix<f64>) -> Result<EigenDecomposition> {
    let (rows, n) = a.shape();
    if rows != n || n == 0 {
        return Err(Error::Shape(format!(
            "matrix must be square, got {rows}x{n}"
        )));
    }
    if a.iter().any(|v| !v.is_finite()) {
        return Err(Error::Data("matrix has non-finite entries".into()));
    }
    let asym = (a - a.transpose()).amax();
    if asym >= SYMMETRY_TOL {
        return Err(Error::Shape(format!(
            "matrix is not symmetric (max |A - Aᵀ| = {asym:e})"
        )));
    }

    let mut work = (a + a.transpose()) * 0.5;
    let mut vectors = DMatrix::identity(n, n);
    let scale = work.amax().max(1.0);

    let (mut off_max, off_norm) = off_diagonal(&work);
    let mut trace = vec![off_norm];
    let mut sweeps = 0;
    while off_max >= OFF_DIAGONAL_TOL * scale {
        if sweeps == MAX_SWEEPS {
            return Err(Error::Convergence {
                sweeps,
                residual: off_max,
            });
        }
        for p in 0..n - 1 {
            for q in (p + 1)..n {
                if work[(p, q)].abs() > ROTATION_THRESHOLD * scale {
                    let (c, s) = jacobi_step(&mut work, p, q);
                    rotate_columns(&mut vectors, p, q, c, s);
                }
            }
        }
        sweeps += 1;
        let (max, norm) = off_diagonal(&work);
        off_max = max;
        trace.push(norm);
    }

    let diagonal: Vec<f64> = (0..n).map(|i| work[(i, i)]).collect();
    let mut order: Vec<usize> = (0..n).collect();
    // stable: equal eigenvalues keep their diagonal order
    order.sort_by(|&x, &y| diagonal[y].total_cmp(&diagonal[x]));

    let eigenvalues = order.iter().map(|&k| diagonal[k]).collect();
    let mut eigenvectors = DMatrix::from_fn(n, n, |r, c| vectors[(r, order[c])]);
    normalize_signs(&mut eigenvectors);

    Ok(EigenDecomposition {
        eigenvalues,
        eigenvectors,
        sweeps,
        off_diagonal_trace: trace,
    })
}

/// Flips columns so the entry of largest magnitude (lowest row on ties) is non-negative.
fn normalize_signs(u: &mut DMatrix<f64>) {
    for mut col in u.column_iter_mut() {
        let mut pivot = 0;
        for r in 1..col.len() {
            if col[r].abs() > col[pivot].abs() {
                pivot = r;
            }
        }
        if col[pivot] < 0.0 {
            col.neg_mut();
        }
    }
}

/// Eigendecomposition of a correlation matrix.
///
/// Round-off negatives above `-1e-10` are clamped to zero; anything lower
/// means the matrix is not positive semi-definite.
pub fn eigen_correlation(corr: &CorrelationMatrix) -> Result<EigenDecomposition> {
    let mut eig = eigen_symmetric(corr.entries())?;
    for l in &mut eig.eigenvalues {
        if *l < -PSD_TOL {
            return Err(Error::NotPsd { eigenvalue: *l });
        }
        if *l < 0.0 {
            *l = 0.0;
        }
    }
    Ok(eig)
}
