//! Command-line front end for `facpca-core`: reads observations or a
//! correlation matrix, runs the analyses and writes tables, a text report and
//! a scree plot.

pub mod analysis;
pub mod config;
pub mod error;
pub mod ingest;
pub mod scree;
pub mod table;

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use analysis::{analyze, correlation_tables, input_table, require_raw, summary_table, Analysis};
use config::{InputKind, OutputFormat, RunConfig, DEFAULT_REPORT_DIR};
use error::{io_error, CliError, Result};
use ingest::{ingest, Input};
use table::{tables_to_json, Table};

pub use config::{Rotate, DEFAULT_DRAWS};
pub use error::CliError as Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    Summary,
    Corr,
    Eigen,
    Pca,
    Fa,
    Select,
    Report,
    Scree,
    Simulate { draws: usize },
}

impl Command {
    fn name(self) -> &'static str {
        match self {
            Command::Summary => "summary",
            Command::Corr => "corr",
            Command::Eigen => "eigen",
            Command::Pca => "pca",
            Command::Fa => "fa",
            Command::Select => "select",
            Command::Report => "report",
            Command::Scree => "scree",
            Command::Simulate { .. } => "simulate",
        }
    }
}

fn correlation_of(input: &Input) -> Result<facpca_core::stats::CorrelationMatrix> {
    match input {
        Input::Raw(raw) => {
            let z =
                facpca_core::stats::standardize(&raw.data).map_err(|source| CliError::Stage {
                    stage: "standardization",
                    source,
                })?;
            facpca_core::stats::correlation_matrix(&z).map_err(|source| CliError::Stage {
                stage: "correlation matrix",
                source,
            })
        }
        Input::Correlation(c) => Ok(c.clone()),
    }
}

/// Every table of the full report, in reading order.
pub fn report_tables(input: &Input, a: &Analysis, config: &RunConfig) -> Result<Vec<Table>> {
    let mut tables = vec![input_table(input)];
    if let Input::Raw(raw) = input {
        tables.push(summary_table(&raw.data)?);
    }
    tables.extend(correlation_tables(&a.corr));
    tables.push(a.eigenvalue_table());
    tables.push(a.eigenvector_table());
    tables.push(a.variance_table()?);
    tables.push(a.full_loadings_table());
    tables.push(a.cumulative_table()?);
    tables.push(a.retention_table());
    tables.push(a.criteria_table(config));
    tables.push(a.loadings_table());
    tables.extend(a.rotated_table());
    tables.push(a.communality_table());
    tables.push(a.artifact_table()?);
    tables.extend(a.score_tables());
    tables.extend(a.notes_table());
    Ok(tables)
}

fn command_tables(
    command: Command,
    input: &Input,
    config: &RunConfig,
) -> Result<(Vec<Table>, Option<Analysis>)> {
    let analysis = || analyze(input, config);
    Ok(match command {
        Command::Summary => {
            let data = require_raw(input, "summary")?;
            (vec![input_table(input), summary_table(&data)?], None)
        }
        Command::Corr => (correlation_tables(&correlation_of(input)?), None),
        Command::Eigen => {
            let a = analysis()?;
            (
                vec![
                    a.eigenvalue_table(),
                    a.variance_table()?,
                    a.eigenvector_table(),
                ],
                Some(a),
            )
        }
        Command::Pca => {
            let a = analysis()?;
            let mut t = vec![a.variance_table()?, a.retention_table(), a.loadings_table()];
            t.extend(a.score_tables());
            t.extend(a.notes_table());
            (t, Some(a))
        }
        Command::Fa => {
            let a = analysis()?;
            let mut t = vec![a.loadings_table()];
            t.extend(a.rotated_table());
            t.push(a.communality_table());
            t.extend(a.notes_table());
            (t, Some(a))
        }
        Command::Select => {
            let a = analysis()?;
            (
                vec![
                    a.variance_table()?,
                    a.retention_table(),
                    a.criteria_table(config),
                ],
                Some(a),
            )
        }
        Command::Report => {
            let a = analysis()?;
            (report_tables(input, &a, config)?, Some(a))
        }
        Command::Scree => (Vec::new(), Some(analysis()?)),
        Command::Simulate { draws } => {
            let a = analysis()?;
            (vec![a.simulated_table(draws, config)?], Some(a))
        }
    })
}

fn write_file(path: &Path, contents: &str, written: &mut Vec<PathBuf>) -> Result<()> {
    fs::write(path, contents).map_err(io_error(path))?;
    written.push(path.to_owned());
    Ok(())
}

fn write_tables(
    dir: &Path,
    stem: &str,
    tables: &[Table],
    format: OutputFormat,
    written: &mut Vec<PathBuf>,
) -> Result<()> {
    match format {
        OutputFormat::Csv => {
            for t in tables {
                write_file(&dir.join(format!("{}.csv", t.name)), &t.to_csv(), written)?;
            }
        }
        OutputFormat::Json => {
            write_file(
                &dir.join(format!("{stem}.json")),
                &tables_to_json(tables),
                written,
            )?;
        }
    }
    Ok(())
}

fn print_tables(
    out: &mut dyn Write,
    tables: &[Table],
    format: OutputFormat,
) -> std::io::Result<()> {
    match format {
        OutputFormat::Json => out.write_all(tables_to_json(tables).as_bytes()),
        OutputFormat::Csv if tables.len() == 1 => out.write_all(tables[0].to_csv().as_bytes()),
        OutputFormat::Csv => {
            for (i, t) in tables.iter().enumerate() {
                if i > 0 {
                    writeln!(out)?;
                }
                writeln!(out, "# {}", t.name)?;
                out.write_all(t.to_csv().as_bytes())?;
            }
            Ok(())
        }
    }
}

fn report_text(config: &RunConfig, a: &Analysis, tables: &[Table]) -> String {
    let file = config.input_path.file_name().map_or_else(
        || config.input_path.display().to_string(),
        |f| f.to_string_lossy().into_owned(),
    );
    let kind = match config.input_kind {
        InputKind::RawCsv => "observations",
        InputKind::CorrelationCsv => "correlation matrix",
    };
    let rotation = match (&a.rotation, config.kaiser_normalize) {
        (Some(_), true) => "varimax (Kaiser-normalized)",
        (Some(_), false) => "varimax",
        (None, _) => "none",
    };
    let mut s = format!(
        "facpca report\n\ninput: {file} ({kind})\nvariables: {}\nthreshold: {}\nfactors chosen by minimum variance: {}\nfactors used: {}\nrotation: {rotation}\n",
        a.n(),
        config.epsilon,
        a.retention.chosen,
        a.k
    );
    for t in tables.iter().filter(|t| !t.bulk) {
        s.push('\n');
        s.push_str(&t.to_text());
    }
    s
}

/// Runs `command`. Tables go to `stdout` unless an output directory is set;
/// `report` and `scree` always write files. Returns the paths written.
pub fn run(command: Command, config: &RunConfig, stdout: &mut dyn Write) -> Result<Vec<PathBuf>> {
    config.validate()?;
    let input = ingest(&config.input_path, config.input_kind)?;
    let (tables, analysis) = command_tables(command, &input, config)?;

    let writes_files = matches!(command, Command::Report | Command::Scree);
    let dir = match (&config.output_dir, writes_files) {
        (Some(d), _) => d.clone(),
        (None, true) => PathBuf::from(DEFAULT_REPORT_DIR),
        (None, false) => {
            print_tables(stdout, &tables, config.output_format).map_err(io_error("<stdout>"))?;
            return Ok(Vec::new());
        }
    };
    fs::create_dir_all(&dir).map_err(io_error(&dir))?;

    let mut written = Vec::new();
    write_tables(
        &dir,
        command.name(),
        &tables,
        config.output_format,
        &mut written,
    )?;
    if let Some(a) = &analysis {
        if matches!(command, Command::Report | Command::Scree) {
            written.extend(scree::emit_scree(&a.eig.eigenvalues, &dir)?);
        }
        if command == Command::Report {
            write_file(
                &dir.join("report.txt"),
                &report_text(config, a, &tables),
                &mut written,
            )?;
        }
    }
    Ok(written)
}
