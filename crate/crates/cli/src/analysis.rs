//! Runs the core computations once and turns the results into tables.

use facpca_core::eigen::{eigen_correlation, EigenDecomposition};
use facpca_core::factor::{
    build_model, communalities, cumulative_communalities, full_loadings, simulate, truncate,
    LoadingMatrix,
};
use facpca_core::pca::{pc_variable_determination, pca_modified, project, verify_artifact};
use facpca_core::retention::{
    half_count, kaiser_count, minvar_count, percentage_count, variance_table, RetentionReport,
};
use facpca_core::stats::{
    correlation_matrix, determination_matrix, summarize, CorrelationMatrix, DataMatrix,
    VariableStats,
};
use facpca_core::varimax::{varimax, RotationResult, VarimaxOptions};
use nalgebra::DMatrix;

use crate::config::{Rotate, RunConfig, DEFAULT_SEED};
use crate::error::{CliError, Result, StageExt};
use crate::ingest::{Input, RawInput};
use crate::table::{Cell, Table};

#[derive(Debug, Clone)]
pub struct Analysis {
    pub raw: Option<RawInput>,
    pub corr: CorrelationMatrix,
    pub eig: EigenDecomposition,
    pub full: LoadingMatrix,
    pub retention: RetentionReport,
    /// Factors kept: the override if given, else the minimum-variance count.
    pub k: usize,
    pub loadings: LoadingMatrix,
    pub rotation: Option<RotationResult>,
    /// Scores and their squared correlations with the variables (raw input only).
    pub scores: Option<(DMatrix<f64>, DMatrix<f64>)>,
    pub notes: Vec<String>,
}

pub fn analyze(input: &Input, config: &RunConfig) -> Result<Analysis> {
    let mut notes = Vec::new();
    let (raw, corr, eig, retention, standardized) = match input {
        Input::Raw(raw) => {
            let pca = pca_modified(&raw.data, config.epsilon).stage("modified PCA")?;
            let corr = correlation_matrix(&pca.standardized).stage("correlation matrix")?;
            if raw.dropped > 0 {
                notes.push(format!(
                    "{} rows with missing values were dropped",
                    raw.dropped
                ));
            }
            (
                Some(raw.clone()),
                corr,
                pca.eig,
                pca.report,
                Some(pca.standardized),
            )
        }
        Input::Correlation(corr) => {
            let eig = eigen_correlation(corr).stage("eigenproblem")?;
            let report = minvar_count(&eig, config.epsilon).stage("number of factors")?;
            (None, corr.clone(), eig, report, None)
        }
    };
    let n = corr.dim();
    config.check_factor_count(n)?;
    let full = full_loadings(&eig, corr.labels()).stage("factor loadings")?;
    let k = config.factor_count_override.unwrap_or(retention.chosen);
    let loadings = truncate(&full, k).stage("reduced loadings")?;

    let rotation = match config.rotate {
        Rotate::Varimax if k >= 2 => {
            let opts = VarimaxOptions {
                normalize: config.kaiser_normalize,
                ..Default::default()
            };
            let res = varimax(&loadings, &opts).stage("varimax rotation")?;
            if !res.converged {
                notes.push(format!(
                    "varimax stopped after {} sweeps without meeting its tolerance",
                    res.sweeps_used
                ));
            }
            Some(res)
        }
        Rotate::Varimax => {
            notes.push("a single factor cannot be rotated; rotation skipped".into());
            None
        }
        Rotate::None => None,
    };

    let scores = match standardized {
        Some(z) => {
            let scores = project(&z, &eig.eigenvectors, k).stage("principal components")?;
            let det = pc_variable_determination(&z, &scores).stage("score correlations")?;
            for j in &det.degenerate {
                notes.push(format!(
                    "component {} has zero variance; its correlations are set to 0",
                    j + 1
                ));
            }
            Some((scores, det.values))
        }
        None => None,
    };

    Ok(Analysis {
        raw,
        corr,
        eig,
        full,
        retention,
        k,
        loadings,
        rotation,
        scores,
        notes,
    })
}

fn factor_names(prefix: &str, k: usize) -> Vec<String> {
    (1..=k).map(|j| format!("{prefix}{j}")).collect()
}

fn matrix_table(
    name: &'static str,
    title: &str,
    rows: &[String],
    columns: Vec<String>,
    m: &DMatrix<f64>,
    cell: fn(f64) -> Cell,
) -> Table {
    let mut t = Table::new(name, title, "variable", columns);
    for (i, label) in rows.iter().enumerate() {
        t.push(label.clone(), m.row(i).iter().map(|v| cell(*v)).collect());
    }
    t
}

pub fn input_table(input: &Input) -> Table {
    let mut t = Table::new("input", "Input", "item", vec!["value".into()]);
    match input {
        Input::Raw(raw) => {
            t.push("observations", vec![Cell::Count(Some(raw.data.rows()))]);
            t.push("variables", vec![Cell::Count(Some(raw.data.cols()))]);
            t.push("dropped rows", vec![Cell::Count(Some(raw.dropped))]);
        }
        Input::Correlation(corr) => {
            t.push("variables", vec![Cell::Count(Some(corr.dim()))]);
        }
    }
    t
}

pub fn summary_table(data: &DataMatrix) -> Result<Table> {
    let stats = (0..data.cols())
        .map(|j| summarize(data.column(j)))
        .collect::<facpca_core::Result<Vec<_>>>()
        .stage("summary statistics")?;
    let mut t = Table::new(
        "summary",
        "Descriptive statistics",
        "statistic",
        data.labels().to_vec(),
    );
    let row = |get: fn(&VariableStats) -> f64| stats.iter().map(|s| Cell::Num(get(s))).collect();
    t.push("mean", row(|s| s.mean));
    t.push("median", row(|s| s.median));
    t.push("mode", row(|s| s.mode));
    t.push("standard deviation", row(|s| s.std_dev));
    t.push("minimum", row(|s| s.minimum));
    t.push("maximum", row(|s| s.maximum));
    Ok(t)
}

pub fn correlation_tables(corr: &CorrelationMatrix) -> Vec<Table> {
    let labels = corr.labels().to_vec();
    vec![
        // full precision so the file reads back to the same matrix
        matrix_table(
            "correlation",
            "Correlation matrix",
            &labels,
            labels.clone(),
            corr.entries(),
            Cell::Exact,
        ),
        matrix_table(
            "determination",
            "Coefficients of determination",
            &labels,
            labels.clone(),
            &determination_matrix(corr),
            Cell::Num,
        ),
    ]
}

impl Analysis {
    pub fn labels(&self) -> &[String] {
        self.corr.labels()
    }

    pub fn n(&self) -> usize {
        self.corr.dim()
    }

    pub fn eigenvalue_table(&self) -> Table {
        let mut t = Table::new(
            "eigenvalues",
            "Eigenvalues of the correlation matrix",
            "component",
            vec!["eigenvalue".into()],
        );
        for (i, l) in self.eig.eigenvalues.iter().enumerate() {
            t.push((i + 1).to_string(), vec![Cell::Num(*l)]);
        }
        t
    }

    pub fn eigenvector_table(&self) -> Table {
        matrix_table(
            "eigenvectors",
            "Eigenvectors (columns)",
            self.labels(),
            factor_names("U", self.n()),
            &self.eig.eigenvectors,
            Cell::Num,
        )
    }

    pub fn variance_table(&self) -> Result<Table> {
        let rows = variance_table(&self.eig.eigenvalues).stage("explained variance")?;
        let mut t = Table::new(
            "explained_variance",
            "Variance explained by successive components",
            "component",
            vec![
                "eigenvalue".into(),
                "cumulative eigenvalue".into(),
                "variance %".into(),
                "cumulative %".into(),
            ],
        );
        for (i, r) in rows.iter().enumerate() {
            t.push(
                (i + 1).to_string(),
                vec![
                    Cell::Num(r.eigenvalue),
                    Cell::Num(r.cumulative),
                    Cell::Pct(r.share),
                    Cell::Pct(r.cumulative_share),
                ],
            );
        }
        Ok(t)
    }

    pub fn full_loadings_table(&self) -> Table {
        matrix_table(
            "loadings_full",
            "Full matrix of factor loadings",
            self.labels(),
            factor_names("F", self.n()),
            self.full.entries(),
            Cell::Num,
        )
    }

    pub fn cumulative_table(&self) -> Result<Table> {
        let cum = cumulative_communalities(&self.full).stage("cumulative communalities")?;
        let n = self.n();
        let mut t = matrix_table(
            "cumulative_communalities",
            "Cumulative variance reproduced by successive factors",
            self.labels(),
            factor_names("F", n),
            &cum,
            Cell::Pct,
        );
        let means = (0..n).map(|j| Cell::Pct(cum.column(j).mean())).collect();
        t.push("mean", means);
        Ok(t)
    }

    pub fn retention_table(&self) -> Table {
        let r = &self.retention;
        let mut t = Table::new(
            "retention",
            format!(
                "Minimum and mean variance reproduced (threshold {})",
                r.threshold
            ),
            "factors",
            (1..=self.n()).map(|i| i.to_string()).collect(),
        );
        t.push("EigVal", r.eig_pct.iter().map(|v| Cell::Pct(*v)).collect());
        t.push("MinVar", r.min_var.iter().map(|v| Cell::Pct(*v)).collect());
        t.push(
            "AverVar",
            r.aver_var.iter().map(|v| Cell::Pct(*v)).collect(),
        );
        t.push(
            "NrMinVar",
            r.nr_min_var.iter().map(|v| Cell::Count(*v)).collect(),
        );
        t
    }

    pub fn criteria_table(&self, config: &RunConfig) -> Table {
        let e = &self.eig.eigenvalues;
        let mut t = Table::new(
            "criteria",
            "Number of factors by criterion",
            "criterion",
            vec!["factors".into()],
        );
        t.push("kaiser", vec![Cell::Count(Some(kaiser_count(e)))]);
        t.push(
            format!("percentage {}%", config.percent_threshold),
            vec![Cell::Count(Some(percentage_count(
                e,
                config.percent_threshold,
            )))],
        );
        t.push("half", vec![Cell::Count(Some(half_count(self.n())))]);
        t.push(
            format!("minimum variance {}", config.epsilon),
            vec![Cell::Count(Some(self.retention.chosen))],
        );
        t
    }

    fn loadings_with_communality(name: &'static str, title: String, l: &LoadingMatrix) -> Table {
        let mut columns = factor_names("F", l.factors());
        columns.push("communality".into());
        let comm = communalities(l).values;
        let mut t = Table::new(name, title, "variable", columns);
        for (i, label) in l.labels().iter().enumerate() {
            let mut cells: Vec<Cell> = l.entries().row(i).iter().map(|v| Cell::Num(*v)).collect();
            cells.push(Cell::Pct(comm[i]));
            t.push(label.clone(), cells);
        }
        t
    }

    pub fn loadings_table(&self) -> Table {
        Self::loadings_with_communality(
            "loadings",
            format!("Factor loadings, {}-factor model", self.k),
            &self.loadings,
        )
    }

    pub fn rotated_table(&self) -> Option<Table> {
        self.rotation.as_ref().map(|r| {
            Self::loadings_with_communality(
                "rotated_loadings",
                format!(
                    "Factor loadings after Varimax rotation, {}-factor model",
                    self.k
                ),
                &r.rotated,
            )
        })
    }

    pub fn communality_table(&self) -> Table {
        let before = communalities(&self.loadings).values;
        let after = self
            .rotation
            .as_ref()
            .map(|r| communalities(&r.rotated).values);
        let mut columns = vec!["before rotation".to_string()];
        if after.is_some() {
            columns.push("after rotation".into());
        }
        let mut t = Table::new(
            "communalities",
            format!("Communalities, {}-factor model", self.k),
            "variable",
            columns,
        );
        for (i, label) in self.labels().iter().enumerate() {
            let mut cells = vec![Cell::Pct(before[i])];
            if let Some(a) = &after {
                cells.push(Cell::Pct(a[i]));
            }
            t.push(label.clone(), cells);
        }
        t
    }

    pub fn artifact_table(&self) -> Result<Table> {
        let check = verify_artifact(&self.full, &self.eig.eigenvectors)
            .stage("loadings times eigenvectors")?;
        Ok(matrix_table(
            "loadings_eigenvectors_product",
            "Product of the loadings and the transposed eigenvectors",
            self.labels(),
            self.labels().to_vec(),
            &check.product,
            Cell::Num,
        ))
    }

    pub fn score_tables(&self) -> Vec<Table> {
        let Some((scores, det)) = &self.scores else {
            return Vec::new();
        };
        let mut s = Table::new(
            "scores",
            "Principal component scores",
            "",
            factor_names("PC", self.k),
        );
        s.row_header = None;
        s.bulk = true;
        for (i, row) in scores.row_iter().enumerate() {
            s.push(
                (i + 1).to_string(),
                row.iter().map(|v| Cell::Num(*v)).collect(),
            );
        }
        let d = matrix_table(
            "score_determination",
            "Squared correlations between variables and components",
            self.labels(),
            factor_names("PC", self.k),
            det,
            Cell::Num,
        );
        vec![s, d]
    }

    pub fn notes_table(&self) -> Option<Table> {
        if self.notes.is_empty() {
            return None;
        }
        let mut t = Table::new("notes", "Notes", "note", vec!["message".into()]);
        for (i, n) in self.notes.iter().enumerate() {
            t.push((i + 1).to_string(), vec![Cell::Text(n.clone())]);
        }
        Some(t)
    }

    /// Observations drawn from the `k`-factor model.
    pub fn simulated_table(&self, draws: usize, config: &RunConfig) -> Result<Table> {
        let model = build_model(&self.loadings).stage("factor model")?;
        let data =
            simulate(&model, draws, config.seed.unwrap_or(DEFAULT_SEED)).stage("simulation")?;
        let mut t = Table::new(
            "simulated",
            "Simulated observations",
            "",
            self.labels().to_vec(),
        );
        t.row_header = None;
        t.bulk = true;
        for (i, row) in data.values().row_iter().enumerate() {
            t.push(
                (i + 1).to_string(),
                row.iter().map(|v| Cell::Num(*v)).collect(),
            );
        }
        Ok(t)
    }
}

pub(crate) fn require_raw(input: &Input, command: &str) -> Result<DataMatrix> {
    match input {
        Input::Raw(raw) => Ok(raw.data.clone()),
        Input::Correlation(_) => Err(CliError::Config(format!(
            "`{command}` needs raw observations (--input), not a correlation matrix"
        ))),
    }
}
