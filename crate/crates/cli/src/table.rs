//! Tabular results and their CSV, JSON and plain-text renderings.

use serde_json::{json, Map, Value};

/// Significant digits of numbers in CSV and JSON payloads.
const SIGNIFICANT: usize = 6;

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    /// Written with six significant digits.
    Num(f64),
    /// Written with enough digits to read back the identical `f64`.
    Exact(f64),
    /// A fraction shown as a percentage.
    Pct(f64),
    Count(Option<usize>),
    Text(String),
}

#[derive(Debug, Clone, PartialEq)]
pub struct Row {
    pub label: String,
    pub cells: Vec<Cell>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    /// File stem and JSON key.
    pub name: &'static str,
    pub title: String,
    /// Heading of the row-label column; `None` writes rows without labels.
    pub row_header: Option<String>,
    pub columns: Vec<String>,
    pub rows: Vec<Row>,
    /// Left out of the plain-text report (e.g. one row per observation).
    pub bulk: bool,
}

impl Table {
    pub fn new(
        name: &'static str,
        title: impl Into<String>,
        row_header: &str,
        columns: Vec<String>,
    ) -> Self {
        Table {
            name,
            title: title.into(),
            row_header: Some(row_header.to_owned()),
            columns,
            rows: Vec::new(),
            bulk: false,
        }
    }

    pub fn push(&mut self, label: impl Into<String>, cells: Vec<Cell>) {
        self.rows.push(Row {
            label: label.into(),
            cells,
        });
    }

    pub fn to_csv(&self) -> String {
        let mut w = csv::WriterBuilder::new().from_writer(Vec::new());
        let mut header: Vec<String> = self.row_header.iter().cloned().collect();
        header.extend(self.columns.iter().cloned());
        w.write_record(&header).expect("in-memory write");
        for row in &self.rows {
            let mut rec: Vec<String> = Vec::with_capacity(row.cells.len() + 1);
            if self.row_header.is_some() {
                rec.push(row.label.clone());
            }
            rec.extend(row.cells.iter().map(payload_text));
            w.write_record(&rec).expect("in-memory write");
        }
        String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8 input")
    }

    pub fn to_json(&self) -> Value {
        let rows: Vec<Value> = self
            .rows
            .iter()
            .map(|r| {
                let values: Vec<Value> = r.cells.iter().map(payload_json).collect();
                if self.row_header.is_some() {
                    json!({ "label": r.label, "values": values })
                } else {
                    json!({ "values": values })
                }
            })
            .collect();
        json!({
            "title": self.title,
            "row_header": self.row_header,
            "columns": self.columns,
            "rows": rows,
        })
    }

    /// Fixed-width rendering: four decimals, percentages with two.
    pub fn to_text(&self) -> String {
        let mut grid: Vec<Vec<String>> = Vec::with_capacity(self.rows.len() + 1);
        let mut header = vec![self.row_header.clone().unwrap_or_default()];
        header.extend(self.columns.iter().cloned());
        grid.push(header);
        for row in &self.rows {
            let mut line = vec![row.label.clone()];
            line.extend(row.cells.iter().map(human_text));
            grid.push(line);
        }
        let cols = grid.iter().map(Vec::len).max().unwrap_or(0);
        let widths: Vec<usize> = (0..cols)
            .map(|c| {
                grid.iter()
                    .filter_map(|r| r.get(c))
                    .map(|s| s.chars().count())
                    .max()
                    .unwrap_or(0)
            })
            .collect();

        let mut out = format!(
            "{}\n{}\n",
            self.title,
            "=".repeat(self.title.chars().count())
        );
        for (i, line) in grid.iter().enumerate() {
            let cells: Vec<String> = line
                .iter()
                .enumerate()
                .map(|(c, s)| {
                    if c == 0 {
                        format!("{s:<w$}", w = widths[c])
                    } else {
                        format!("{s:>w$}", w = widths[c])
                    }
                })
                .collect();
            out.push_str(cells.join("  ").trim_end());
            out.push('\n');
            if i == 0 {
                let total: usize =
                    widths.iter().sum::<usize>() + 2 * widths.len().saturating_sub(1);
                out.push_str(&"-".repeat(total));
                out.push('\n');
            }
        }
        out
    }
}

/// Rounds to six significant digits.
pub fn significant(v: f64) -> f64 {
    if v == 0.0 || !v.is_finite() {
        return v;
    }
    format!("{:.*e}", SIGNIFICANT - 1, v)
        .parse()
        .expect("formatted float parses")
}

fn number_text(v: f64) -> String {
    // avoid "-0"
    if v == 0.0 {
        "0".into()
    } else {
        format!("{v}")
    }
}

fn payload_text(cell: &Cell) -> String {
    match cell {
        Cell::Num(v) => number_text(significant(*v)),
        Cell::Exact(v) => number_text(*v),
        Cell::Pct(v) => number_text(significant(v * 100.0)),
        Cell::Count(Some(c)) => c.to_string(),
        Cell::Count(None) => String::new(),
        Cell::Text(s) => s.clone(),
    }
}

fn number_json(v: f64) -> Value {
    let v = if v == 0.0 { 0.0 } else { v };
    serde_json::Number::from_f64(v).map_or(Value::Null, Value::Number)
}

fn payload_json(cell: &Cell) -> Value {
    match cell {
        Cell::Num(v) => number_json(significant(*v)),
        Cell::Exact(v) => number_json(*v),
        Cell::Pct(v) => number_json(significant(v * 100.0)),
        Cell::Count(c) => c.map_or(Value::Null, |c| json!(c)),
        Cell::Text(s) => json!(s),
    }
}

fn human_text(cell: &Cell) -> String {
    match cell {
        Cell::Num(v) | Cell::Exact(v) => {
            let s = format!("{v:.4}");
            if s == "-0.0000" {
                "0.0000".into()
            } else {
                s
            }
        }
        Cell::Pct(v) => format!("{:.2}%", v * 100.0),
        Cell::Count(Some(c)) => c.to_string(),
        Cell::Count(None) => "-".into(),
        Cell::Text(s) => s.clone(),
    }
}

/// One JSON object keyed by table name.
pub fn tables_to_json(tables: &[Table]) -> String {
    let mut map = Map::new();
    for t in tables {
        map.insert(t.name.to_owned(), t.to_json());
    }
    let mut s = serde_json::to_string_pretty(&Value::Object(map)).expect("serializable");
    s.push('\n');
    s
}
