//! Published correlation matrix of the seven weather variables and the
//! tables derived from it, shared by the integration tests.
#![allow(dead_code, clippy::approx_constant)]

use facpca_core::stats::CorrelationMatrix;
use nalgebra::DMatrix;

pub const CORRELATIONS: [[f64; 7]; 7] = [
    [1.0, -0.197, -0.257, -0.110, -0.108, -0.032, -0.010],
    [-0.197, 1.0, 0.875, 0.025, -0.038, 0.568, 0.100],
    [-0.257, 0.875, 1.0, 0.031, -0.142, 0.313, 0.010],
    [-0.110, 0.025, 0.031, 1.0, 0.311, 0.050, 0.034],
    [-0.108, -0.038, -0.142, 0.311, 1.0, 0.146, 0.044],
    [-0.032, 0.568, 0.313, 0.050, 0.146, 1.0, 0.122],
    [-0.010, 0.100, 0.010, 0.034, 0.044, 0.122, 1.0],
];

pub const EIGENVALUES: [f64; 7] = [2.290, 1.390, 1.058, 0.919, 0.751, 0.518, 0.075];

pub const FULL_LOADINGS: [[f64; 7]; 7] = [
    [-0.349, -0.257, 0.595, 0.555, -0.318, -0.220, 0.008],
    [0.957, -0.114, 0.029, 0.081, -0.054, -0.139, -0.202],
    [0.882, -0.208, -0.193, -0.017, -0.190, -0.273, 0.174],
    [0.101, 0.737, -0.150, 0.085, -0.620, 0.181, -0.007],
    [0.008, 0.820, 0.058, 0.189, 0.375, -0.384, 0.011],
    [0.663, 0.144, 0.394, 0.335, 0.276, 0.438, 0.063],
    [0.150, 0.176, 0.696, -0.670, -0.100, -0.058, 0.012],
];

pub const CUMULATIVE_X1: [f64; 7] = [0.1221, 0.1881, 0.5424, 0.8506, 0.9515, 0.9999, 1.0];

pub const COMMUNALITIES_3: [f64; 7] = [0.5424, 0.9304, 0.8589, 0.5758, 0.6762, 0.6157, 0.5378];
pub const COMMUNALITIES_4: [f64; 7] = [0.8506, 0.9369, 0.8592, 0.5830, 0.7118, 0.7280, 0.9865];

pub const ROTATED_3: [[f64; 3]; 7] = [
    [-0.3314, -0.3410, 0.5624],
    [0.9634, -0.0250, 0.0403],
    [0.9009, -0.1056, -0.1901],
    [0.0320, 0.7536, -0.0831],
    [-0.0719, 0.8088, 0.1300],
    [0.6406, 0.1708, 0.4196],
    [0.1223, 0.1263, 0.7120],
];

pub const ROTATED_4: [[f64; 4]; 7] = [
    [-0.129, -0.143, -0.030, 0.902],
    [0.956, -0.032, 0.051, -0.136],
    [0.853, -0.149, -0.065, -0.324],
    [0.017, 0.742, -0.031, -0.177],
    [-0.040, 0.840, 0.052, 0.047],
    [0.733, 0.258, 0.151, 0.319],
    [0.038, 0.012, 0.992, -0.021],
];

pub const EIG_PCT: [f64; 7] = [32.71, 19.85, 15.11, 13.13, 10.72, 7.40, 1.08];
pub const MIN_VAR_PCT: [f64; 7] = [0.01, 5.33, 53.78, 58.30, 80.41, 95.92, 100.0];
pub const AVER_VAR_PCT: [f64; 7] = [32.71, 52.56, 67.67, 80.80, 91.52, 98.92, 100.0];
pub const NR_MIN_VAR: [usize; 7] = [5, 7, 7, 4, 6, 2, 6];

pub const ARTIFACT: [[f64; 7]; 7] = [
    [0.987, -0.076, -0.122, -0.050, -0.057, 0.004, -0.003],
    [-0.076, 0.803, 0.508, 0.005, -0.014, 0.297, 0.050],
    [-0.122, 0.508, 0.843, 0.018, -0.084, 0.095, -0.011],
    [-0.050, 0.005, 0.018, 0.986, 0.157, 0.018, 0.015],
    [-0.057, -0.014, -0.084, 0.157, 0.979, 0.080, 0.019],
    [0.004, 0.297, 0.095, 0.018, 0.080, 0.945, 0.055],
    [-0.003, 0.050, -0.011, 0.015, 0.019, 0.055, 0.997],
];

pub fn labels() -> Vec<String> {
    (1..=7).map(|i| format!("x{i}")).collect()
}

pub fn correlation_matrix() -> CorrelationMatrix {
    let entries = DMatrix::from_fn(7, 7, |i, j| CORRELATIONS[i][j]);
    CorrelationMatrix::new(entries, labels()).unwrap()
}

pub fn matrix<const K: usize>(rows: &[[f64; K]]) -> DMatrix<f64> {
    DMatrix::from_fn(rows.len(), K, |i, j| rows[i][j])
}
