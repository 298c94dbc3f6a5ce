//! Scree plot as a two-column text series and a standalone SVG line chart.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use facpca_core::retention::scree_data;

use crate::error::{io_error, Result};

const WIDTH: f64 = 640.0;
const HEIGHT: f64 = 400.0;
const LEFT: f64 = 70.0;
const RIGHT: f64 = 30.0;
const TOP: f64 = 40.0;
const BOTTOM: f64 = 60.0;

pub fn scree_text(eigenvalues: &[f64]) -> String {
    let mut out = String::from("index\teigenvalue\n");
    for (i, l) in scree_data(eigenvalues) {
        writeln!(out, "{i}\t{:.6}", l).unwrap();
    }
    out
}

fn tick_step(max: f64) -> f64 {
    if max <= 3.0 {
        0.5
    } else if max <= 10.0 {
        1.0
    } else {
        (max / 10.0).ceil()
    }
}

pub fn scree_svg(eigenvalues: &[f64]) -> String {
    let points = scree_data(eigenvalues);
    let n = points.len();
    let plot_w = WIDTH - LEFT - RIGHT;
    let plot_h = HEIGHT - TOP - BOTTOM;
    let y_max = points.iter().map(|p| p.1).fold(1.0f64, f64::max).ceil();
    let step = tick_step(y_max);
    let x_of = |i: usize| {
        if n <= 1 {
            LEFT + plot_w / 2.0
        } else {
            LEFT + (i - 1) as f64 / (n - 1) as f64 * plot_w
        }
    };
    let y_of = |v: f64| TOP + plot_h * (1.0 - v.max(0.0) / y_max);
    let bottom = TOP + plot_h;

    let mut s = String::new();
    writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="12">"#
    )
    .unwrap();
    writeln!(
        s,
        r#"<rect width="{WIDTH}" height="{HEIGHT}" fill="white"/>"#
    )
    .unwrap();
    writeln!(
        s,
        r#"<text x="{:.2}" y="24" text-anchor="middle" font-size="14">Scree plot</text>"#,
        WIDTH / 2.0
    )
    .unwrap();

    // axes
    writeln!(
        s,
        r#"<path d="M {LEFT:.2} {TOP:.2} L {LEFT:.2} {bottom:.2} L {:.2} {bottom:.2}" fill="none" stroke="black"/>"#,
        LEFT + plot_w
    )
    .unwrap();
    let ticks = (y_max / step).round() as usize;
    for t in 0..=ticks {
        let v = t as f64 * step;
        let y = y_of(v);
        writeln!(
            s,
            r#"<line x1="{:.2}" y1="{y:.2}" x2="{LEFT:.2}" y2="{y:.2}" stroke="black"/><text x="{:.2}" y="{:.2}" text-anchor="end">{v:.1}</text>"#,
            LEFT - 5.0,
            LEFT - 8.0,
            y + 4.0
        )
        .unwrap();
    }
    for &(i, _) in &points {
        let x = x_of(i);
        writeln!(
            s,
            r#"<line x1="{x:.2}" y1="{bottom:.2}" x2="{x:.2}" y2="{:.2}" stroke="black"/><text x="{x:.2}" y="{:.2}" text-anchor="middle">{i}</text>"#,
            bottom + 5.0,
            bottom + 20.0
        )
        .unwrap();
    }
    writeln!(
        s,
        r#"<text x="{:.2}" y="{:.2}" text-anchor="middle">Component</text>"#,
        LEFT + plot_w / 2.0,
        HEIGHT - 15.0
    )
    .unwrap();
    writeln!(
        s,
        r#"<text x="20" y="{:.2}" text-anchor="middle" transform="rotate(-90 20 {:.2})">Eigenvalue</text>"#,
        TOP + plot_h / 2.0,
        TOP + plot_h / 2.0
    )
    .unwrap();

    let path: Vec<String> = points
        .iter()
        .map(|&(i, l)| format!("{:.2},{:.2}", x_of(i), y_of(l)))
        .collect();
    writeln!(
        s,
        r#"<polyline points="{}" fill="none" stroke="steelblue" stroke-width="2"/>"#,
        path.join(" ")
    )
    .unwrap();
    for &(i, l) in &points {
        writeln!(
            s,
            r#"<circle cx="{:.2}" cy="{:.2}" r="4" fill="steelblue"/>"#,
            x_of(i),
            y_of(l)
        )
        .unwrap();
    }
    s.push_str("</svg>\n");
    s
}

/// Writes `scree.txt` and `scree.svg` into `dir`, returning their paths.
pub fn emit_scree(eigenvalues: &[f64], dir: &Path) -> Result<[PathBuf; 2]> {
    fs::create_dir_all(dir).map_err(io_error(dir))?;
    let txt = dir.join("scree.txt");
    let svg = dir.join("scree.svg");
    fs::write(&txt, scree_text(eigenvalues)).map_err(io_error(&txt))?;
    fs::write(&svg, scree_svg(eigenvalues)).map_err(io_error(&svg))?;
    Ok([txt, svg])
}
