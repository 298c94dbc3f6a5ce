//! Acceptance checks against the published weather dataset, run as a plain
//! binary: one PASS/FAIL line per criterion, non-zero exit on any failure.

#[path = "../../core/tests/common/mod.rs"]
mod reference;

use std::path::Path;
use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use facpca::ingest::read_correlation;
use facpca_core::compare::best_column_match;
use facpca_core::eigen::{eigen_correlation, eigen_symmetric, EigenDecomposition};
use facpca_core::factor::{communalities, full_loadings, truncate, LoadingMatrix};
use facpca_core::pca::{pc_variable_determination, project, verify_artifact};
use facpca_core::retention::{
    half_count, kaiser_count, minvar_count, percentage_count, variance_table,
};
use facpca_core::stats::{
    correlation, correlation_matrix, standardize, CorrelationMatrix, DataMatrix,
};
use facpca_core::varimax::{optimal_plane_angle, varimax, VarimaxOptions};
use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use reference::*;

type Outcome = Result<String, String>;

const FIXTURE: &str = concat!(env!("CARGO_MANIFEST_DIR"), "/fixtures/dataset1_corr.csv");

struct Fixture {
    corr: CorrelationMatrix,
    eig: EigenDecomposition,
    full: LoadingMatrix,
}

fn load() -> Fixture {
    let corr = read_correlation(Path::new(FIXTURE)).expect("fixture parses");
    let eig = eigen_correlation(&corr).expect("fixture decomposes");
    let full = full_loadings(&eig, corr.labels()).expect("fixture loadings");
    Fixture { corr, eig, full }
}

fn within(what: &str, diff: f64, tol: f64) -> Outcome {
    if diff <= tol {
        Ok(format!("{what}: max |diff| {diff:.2e} <= {tol:.0e}"))
    } else {
        Err(format!("{what}: max |diff| {diff:.2e} > {tol:.0e}"))
    }
}

fn join(parts: Vec<Outcome>) -> Outcome {
    let mut ok = Vec::new();
    let mut bad = Vec::new();
    for p in parts {
        match p {
            Ok(s) => ok.push(s),
            Err(s) => bad.push(s),
        }
    }
    if bad.is_empty() {
        Ok(ok.join("; "))
    } else {
        Err(bad.join("; "))
    }
}

fn max_diff(a: impl IntoIterator<Item = f64>, b: impl IntoIterator<Item = f64>) -> f64 {
    a.into_iter()
        .zip(b)
        .map(|(x, y)| (x - y).abs())
        .fold(0.0, f64::max)
}

fn eigenvalues(f: &Fixture) -> Outcome {
    within(
        "eigenvalues",
        max_diff(f.eig.eigenvalues.iter().copied(), EIGENVALUES),
        5e-3,
    )
}

fn loadings(f: &Fixture) -> Outcome {
    let l = f.full.entries();
    let mut worst = 0.0f64;
    for j in 0..7 {
        let col = l.column(j);
        let plus = max_diff(col.iter().copied(), FULL_LOADINGS.iter().map(|r| r[j]));
        let minus = max_diff(col.iter().map(|v| -v), FULL_LOADINGS.iter().map(|r| r[j]));
        worst = worst.max(plus.min(minus));
    }
    within("full loadings up to column sign", worst, 1e-2)
}

fn reduced_communalities(f: &Fixture) -> Outcome {
    let mut parts = Vec::new();
    for (k, want) in [(3, COMMUNALITIES_3), (4, COMMUNALITIES_4)] {
        let got = communalities(&truncate(&f.full, k).unwrap()).values;
        let d = max_diff(
            got.iter().map(|v| v * 100.0),
            want.iter().map(|v| v * 100.0),
        );
        parts.push(within(&format!("{k}-factor communalities (pp)"), d, 0.3));
    }
    join(parts)
}

fn retention(f: &Fixture) -> Outcome {
    let r = minvar_count(&f.eig, 0.51).map_err(|e| e.to_string())?;
    let min = max_diff(r.min_var.iter().map(|v| v * 100.0), MIN_VAR_PCT);
    let aver = max_diff(r.aver_var.iter().map(|v| v * 100.0), AVER_VAR_PCT);
    let nr: Vec<Option<usize>> = NR_MIN_VAR.iter().map(|v| Some(*v)).collect();
    let nr_part = if r.nr_min_var == nr {
        Ok(format!("NrMinVar {:?}", NR_MIN_VAR))
    } else {
        Err(format!("NrMinVar {:?} != {:?}", r.nr_min_var, NR_MIN_VAR))
    };
    let nof = if r.chosen == 3 {
        Ok("NoF 3".into())
    } else {
        Err(format!("NoF {} != 3", r.chosen))
    };
    join(vec![
        within("MinVar (pp)", min, 0.3),
        within("AverVar (pp)", aver, 0.3),
        nr_part,
        nof,
    ])
}

fn criteria(f: &Fixture) -> Outcome {
    let e = &f.eig.eigenvalues;
    let got = (
        kaiser_count(e),
        half_count(f.corr.dim()),
        percentage_count(e, 80.0),
    );
    if got == (3, 3, 4) {
        Ok("kaiser 3, half 3, percentage(80%) 4".into())
    } else {
        Err(format!(
            "kaiser/half/percentage = {got:?}, expected (3, 3, 4)"
        ))
    }
}

fn rotation(f: &Fixture) -> Outcome {
    let mut parts = Vec::new();
    for (k, table) in [(3, matrix(&ROTATED_3)), (4, matrix(&ROTATED_4))] {
        let l = truncate(&f.full, k).unwrap();
        let res = varimax(&l, &VarimaxOptions::default()).map_err(|e| e.to_string())?;
        let m = best_column_match(res.rotated.entries(), &table).map_err(|e| e.to_string())?;
        parts.push(within(&format!("{k}-factor varimax"), m.max_abs_diff, 2e-2));
        let before = communalities(&l).values;
        let after = communalities(&res.rotated).values;
        parts.push(within(
            &format!("{k}-factor communality drift"),
            max_diff(before, after),
            1e-10,
        ));
    }
    join(parts)
}

fn artifact(f: &Fixture) -> Outcome {
    let check = verify_artifact(&f.full, &f.eig.eigenvectors).map_err(|e| e.to_string())?;
    let published = (check.product - matrix(&ARTIFACT)).amax();

    let mut rng = ChaCha8Rng::seed_from_u64(48);
    let mut worst = 0.0f64;
    for _ in 0..100 {
        let n = rng.random_range(2..=10);
        let b = DMatrix::from_fn(n, n, |_, _| rng.random::<f64>() * 2.0 - 1.0);
        let a = &b * b.transpose();
        let mut eig = eigen_symmetric(&a).map_err(|e| e.to_string())?;
        for l in &mut eig.eigenvalues {
            *l = l.max(0.0);
        }
        let labels: Vec<String> = (0..n).map(|i| format!("v{i}")).collect();
        let l = full_loadings(&eig, &labels).map_err(|e| e.to_string())?;
        let m = l.entries() * eig.eigenvectors.transpose();
        worst = worst.max((&m - m.transpose()).amax());
    }
    join(vec![
        within("L·Uᵀ vs published", published, 5e-3),
        within("L·Uᵀ asymmetry over 100 random PSD matrices", worst, 1e-10),
    ])
}

fn explained_variance(f: &Fixture) -> Outcome {
    let rows = variance_table(&f.eig.eigenvalues).map_err(|e| e.to_string())?;
    within(
        "cumulative percentages (pp)",
        max_diff(
            rows.iter().map(|r| r.cumulative_share * 100.0),
            AVER_VAR_PCT,
        ),
        0.1,
    )
}

/// Eigenvalues of a symmetric 3×3 matrix from the trigonometric root formula.
fn cubic_roots(a: &DMatrix<f64>) -> [f64; 3] {
    let p1 = a[(0, 1)].powi(2) + a[(0, 2)].powi(2) + a[(1, 2)].powi(2);
    let q = a.trace() / 3.0;
    let p2 = (a[(0, 0)] - q).powi(2) + (a[(1, 1)] - q).powi(2) + (a[(2, 2)] - q).powi(2) + 2.0 * p1;
    let p = (p2 / 6.0).sqrt();
    let b = (a - DMatrix::identity(3, 3) * q) / p;
    let phi = (b.determinant() / 2.0).clamp(-1.0, 1.0).acos() / 3.0;
    let l1 = q + 2.0 * p * phi.cos();
    let l3 = q + 2.0 * p * (phi + 2.0 * std::f64::consts::PI / 3.0).cos();
    [l1, 3.0 * q - l1 - l3, l3]
}

fn random_symmetric(rng: &mut ChaCha8Rng, n: usize) -> DMatrix<f64> {
    let b = DMatrix::from_fn(n, n, |_, _| rng.random::<f64>() * 4.0 - 2.0);
    (&b + b.transpose()) * 0.5
}

fn small_eigenproblems(rng: &mut ChaCha8Rng) -> Outcome {
    let mut worst = 0.0f64;
    for _ in 0..200 {
        let a = random_symmetric(rng, 2);
        let eig = eigen_symmetric(&a).map_err(|e| e.to_string())?;
        let h = a.trace() / 2.0;
        let d = (((a[(0, 0)] - a[(1, 1)]) / 2.0).powi(2) + a[(0, 1)].powi(2)).sqrt();
        worst = worst.max(max_diff(eig.eigenvalues.iter().copied(), [h + d, h - d]));
        worst = worst.max(residual(&a, &eig));

        let a = random_symmetric(rng, 3);
        let eig = eigen_symmetric(&a).map_err(|e| e.to_string())?;
        worst = worst.max(max_diff(eig.eigenvalues.iter().copied(), cubic_roots(&a)));
        worst = worst.max(residual(&a, &eig));
    }
    within("2x2/3x3 eigenpairs vs closed form", worst, 1e-10)
}

fn residual(a: &DMatrix<f64>, eig: &EigenDecomposition) -> f64 {
    let u = &eig.eigenvectors;
    (0..a.ncols())
        .map(|j| (a * u.column(j) - u.column(j) * eig.eigenvalues[j]).amax())
        .fold(0.0, f64::max)
}

fn orthogonality_and_reconstruction(rng: &mut ChaCha8Rng) -> Outcome {
    let mut orth = 0.0f64;
    let mut recon = 0.0f64;
    for _ in 0..100 {
        let n = rng.random_range(2..=12);
        let a = random_symmetric(rng, n);
        let eig = eigen_symmetric(&a).map_err(|e| e.to_string())?;
        let u = &eig.eigenvectors;
        orth = orth.max((u.transpose() * u - DMatrix::identity(n, n)).amax());
        let lambda = DMatrix::from_diagonal(&nalgebra::DVector::from_vec(eig.eigenvalues.clone()));
        recon = recon.max((u * lambda * u.transpose() - &a).amax());
    }
    join(vec![
        within("UᵀU - I", orth, 1e-10),
        within("U·Λ·Uᵀ - A", recon, 1e-8),
    ])
}

fn synthetic_data(rng: &mut ChaCha8Rng, m: usize, n: usize) -> DataMatrix {
    let raw = DMatrix::from_fn(m, n, |_, _| rng.random::<f64>());
    let mix = DMatrix::from_fn(n, n, |_, _| rng.random::<f64>() * 2.0 - 1.0);
    let labels = (0..n).map(|i| format!("v{i}")).collect();
    DataMatrix::new(raw * mix, labels).expect("finite data")
}

fn scores_and_determination(rng: &mut ChaCha8Rng) -> Outcome {
    let mut var_err = 0.0f64;
    let mut cross = 0.0f64;
    let mut det_err = 0.0f64;
    for _ in 0..20 {
        let n = rng.random_range(2..=7);
        let data = synthetic_data(rng, 200, n);
        let z = standardize(&data).map_err(|e| e.to_string())?;
        let corr = correlation_matrix(&z).map_err(|e| e.to_string())?;
        let eig = eigen_correlation(&corr).map_err(|e| e.to_string())?;
        let scores = project(&z, &eig.eigenvectors, n).map_err(|e| e.to_string())?;
        let cols: Vec<Vec<f64>> = scores
            .column_iter()
            .map(|c| c.iter().copied().collect())
            .collect();
        for (j, c) in cols.iter().enumerate() {
            let mean = c.iter().sum::<f64>() / c.len() as f64;
            let var = c.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / c.len() as f64;
            var_err = var_err.max((var - eig.eigenvalues[j]).abs());
            for d in &cols[j + 1..] {
                cross = cross.max(correlation(c, d).map_err(|e| e.to_string())?.abs());
            }
        }
        let det = pc_variable_determination(&z, &scores).map_err(|e| e.to_string())?;
        let l = full_loadings(&eig, corr.labels()).map_err(|e| e.to_string())?;
        det_err = det_err.max((det.values - l.entries().map(|v| v * v)).amax());
    }
    join(vec![
        within("score variance - eigenvalue", var_err, 1e-8),
        within("score cross-correlation", cross, 1e-8),
        within(
            "squared score correlations - squared loadings",
            det_err,
            1e-6,
        ),
    ])
}

fn plane_objective(x: &[f64], y: &[f64], phi: f64) -> f64 {
    let n = x.len() as f64;
    let (s, c) = phi.sin_cos();
    let cols = [
        x.iter()
            .zip(y)
            .map(|(a, b)| a * c + b * s)
            .collect::<Vec<_>>(),
        x.iter()
            .zip(y)
            .map(|(a, b)| -a * s + b * c)
            .collect::<Vec<_>>(),
    ];
    cols.iter()
        .map(|col| {
            let sq: f64 = col.iter().map(|v| v * v).sum();
            n * col.iter().map(|v| v.powi(4)).sum::<f64>() - sq * sq
        })
        .sum()
}

fn varimax_angle_and_monotonicity(rng: &mut ChaCha8Rng) -> Outcome {
    let quarter = std::f64::consts::FRAC_PI_4;
    let mut worst_angle = 0.0f64;
    for _ in 0..50 {
        let x: Vec<f64> = (0..6).map(|_| rng.random::<f64>() * 2.0 - 1.0).collect();
        let y: Vec<f64> = (0..6).map(|_| rng.random::<f64>() * 2.0 - 1.0).collect();
        let phi = optimal_plane_angle(&x, &y)
            .map_err(|e| e.to_string())?
            .ok_or("undefined angle")?;
        let mut best = (f64::NEG_INFINITY, 0.0);
        let steps = (2.0 * quarter / 1e-5) as usize;
        for i in 0..=steps {
            let a = -quarter + i as f64 * 1e-5;
            let v = plane_objective(&x, &y, a);
            if v > best.0 {
                best = (v, a);
            }
        }
        let d = (best.1 - phi).abs();
        worst_angle = worst_angle.max(d.min(2.0 * quarter - d));
    }

    let mut drops = 0.0f64;
    for _ in 0..100 {
        let n = rng.random_range(3..=10);
        let k = rng.random_range(2..=4);
        let m = DMatrix::from_fn(n, k, |_, _| rng.random::<f64>() * 1.2 - 0.6);
        let labels = (0..n).map(|i| format!("v{i}")).collect();
        let l = LoadingMatrix::new(m, labels).map_err(|e| e.to_string())?;
        let res = varimax(&l, &VarimaxOptions::default()).map_err(|e| e.to_string())?;
        let mut prev = res.initial_objective;
        for v in &res.objective_trace {
            drops = drops.max(prev - v);
            prev = *v;
        }
    }
    join(vec![
        within("analytic vs grid-search angle (rad)", worst_angle, 1e-4),
        within("varimax objective decrease", drops, 1e-12),
    ])
}

fn minvar_monotone(rng: &mut ChaCha8Rng) -> Outcome {
    let thresholds = [0.51, 0.6, 0.7, 0.8, 0.9, 0.95, 1.0];
    for _ in 0..50 {
        let n = rng.random_range(2..=8);
        let data = synthetic_data(rng, 50, n);
        let corr = correlation_matrix(&standardize(&data).map_err(|e| e.to_string())?)
            .map_err(|e| e.to_string())?;
        let eig = eigen_correlation(&corr).map_err(|e| e.to_string())?;
        let counts: Vec<usize> = thresholds
            .iter()
            .map(|t| minvar_count(&eig, *t).map(|r| r.chosen))
            .collect::<Result<_, _>>()
            .map_err(|e| e.to_string())?;
        if counts.windows(2).any(|w| w[1] < w[0]) {
            return Err(format!(
                "factor count not monotone in threshold: {counts:?}"
            ));
        }
    }
    Ok("minvar count monotone in threshold".into())
}

fn properties() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(2022);
    join(vec![
        small_eigenproblems(&mut rng),
        orthogonality_and_reconstruction(&mut rng),
        scores_and_determination(&mut rng),
        varimax_angle_and_monotonicity(&mut rng),
        minvar_monotone(&mut rng),
    ])
}

fn read_dir_sorted(dir: &Path) -> Vec<(String, Vec<u8>)> {
    let mut files: Vec<(String, Vec<u8>)> = std::fs::read_dir(dir)
        .expect("output dir exists")
        .map(|e| {
            let e = e.unwrap();
            (
                e.file_name().to_string_lossy().into_owned(),
                std::fs::read(e.path()).unwrap(),
            )
        })
        .collect();
    files.sort();
    files
}

fn end_to_end() -> Outcome {
    let tmp = tempfile::tempdir().map_err(|e| e.to_string())?;
    let mut outputs = Vec::new();
    let mut slowest = Duration::ZERO;
    for run in ["first", "second"] {
        let dir = tmp.path().join(run);
        let start = Instant::now();
        let status = Command::new(env!("CARGO_BIN_EXE_facpca"))
            .args(["report", "--corr", FIXTURE, "--epsilon", "0.51", "--out"])
            .arg(&dir)
            .env_remove("FACPCA_OUT")
            .output()
            .map_err(|e| e.to_string())?;
        slowest = slowest.max(start.elapsed());
        if !status.status.success() {
            return Err(format!(
                "report exited with {}: {}",
                status.status,
                String::from_utf8_lossy(&status.stderr)
            ));
        }
        outputs.push(read_dir_sorted(&dir));
    }
    if outputs[0].is_empty() || outputs[0] != outputs[1] {
        return Err("outputs differ between runs".into());
    }
    if slowest >= Duration::from_secs(5) {
        return Err(format!("report took {slowest:?}"));
    }
    Ok(format!(
        "exit 0 in {:.1} ms, {} files byte-identical across runs",
        slowest.as_secs_f64() * 1e3,
        outputs[0].len()
    ))
}

fn main() -> ExitCode {
    let f = load();
    let criteria: Vec<(&str, Outcome)> = vec![
        ("eigenvalue reproduction", eigenvalues(&f)),
        ("loadings reproduction", loadings(&f)),
        ("communality reproduction", reduced_communalities(&f)),
        ("retention reproduction", retention(&f)),
        ("criteria comparison", criteria(&f)),
        ("varimax reproduction", rotation(&f)),
        ("loadings-eigenvector product", artifact(&f)),
        ("explained-variance table", explained_variance(&f)),
        ("property suite", properties()),
        ("end-to-end report", end_to_end()),
    ];
    let mut failed = 0;
    for (i, (name, outcome)) in criteria.iter().enumerate() {
        match outcome {
            Ok(detail) => println!("[PASS] AC{} {name}: {detail}", i + 1),
            Err(detail) => {
                failed += 1;
                println!("[FAIL] AC{} {name}: {detail}", i + 1);
            }
        }
    }
    println!(
        "{} of {} criteria passed",
        criteria.len() - failed,
        criteria.len()
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
