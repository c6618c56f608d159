//! Minimal SVG 1.1 emission: one or more polylines, or a heatmap over the
//! distinct (x, y) values of a grid.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::io::Read;

use crate::failure::Failure;

const WIDTH: f64 = 640.0;
const HEIGHT: f64 = 480.0;
const LEFT: f64 = 70.0;
const RIGHT: f64 = 110.0;
const TOP: f64 = 40.0;
const BOTTOM: f64 = 60.0;
const PALETTE: [&str; 6] = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#17becf"];
/// Dark blue → teal → yellow.
const RAMP: [(f64, [f64; 3]); 3] = [(0.0, [68.0, 1.0, 84.0]), (0.5, [33.0, 145.0, 140.0]), (1.0, [253.0, 231.0, 37.0])];
const MISSING: &str = "#dddddd";

/// Numeric columns of a CSV file; empty cells are `None`.
pub struct Table {
    headers: Vec<String>,
    rows: Vec<Vec<Option<f64>>>,
}

impl Table {
    pub fn read<R: Read>(input: R) -> Result<Self, Failure> {
        let mut rdr = csv::ReaderBuilder::new().comment(Some(b'#')).from_reader(input);
        let headers: Vec<String> = rdr
            .headers()
            .map_err(|e| Failure::usage(format!("CSV header: {e}")))?
            .iter()
            .map(|h| h.trim().to_string())
            .collect();
        let mut rows = Vec::new();
        for rec in rdr.records() {
            let rec = rec.map_err(|e| Failure::usage(format!("CSV: {e}")))?;
            rows.push(rec.iter().map(|f| f.trim().parse::<f64>().ok()).collect());
        }
        Ok(Self { headers, rows })
    }

    fn column(&self, name: &str) -> Result<usize, Failure> {
        self.headers.iter().position(|h| h == name).ok_or_else(|| {
            Failure::usage(format!("no column {name:?}; available: {}", self.headers.join(", ")))
        })
    }

    fn get(&self, row: usize, col: usize) -> Option<f64> {
        self.rows[row].get(col).copied().flatten()
    }
}

#[derive(Clone, Copy)]
struct Axis {
    lo: f64,
    hi: f64,
}

impl Axis {
    fn fit(values: impl Iterator<Item = f64>) -> Option<Self> {
        let (lo, hi) = values.fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), v| (a.min(v), b.max(v)));
        if !lo.is_finite() {
            return None;
        }
        let pad = if hi > lo { 0.0 } else { 0.5 * lo.abs().max(1.0) };
        Some(Self { lo: lo - pad, hi: hi + pad })
    }

    fn unit(&self, v: f64) -> f64 {
        (v - self.lo) / (self.hi - self.lo)
    }

    fn ticks(&self) -> Vec<f64> {
        (0..=4).map(|k| self.lo + (self.hi - self.lo) * k as f64 / 4.0).collect()
    }
}

fn sx(a: &Axis, v: f64) -> f64 {
    LEFT + a.unit(v) * (WIDTH - LEFT - RIGHT)
}

fn sy(a: &Axis, v: f64) -> f64 {
    HEIGHT - BOTTOM - a.unit(v) * (HEIGHT - TOP - BOTTOM)
}

fn label(v: f64) -> String {
    let s = format!("{v:.3}");
    let s = s.trim_end_matches('0').trim_end_matches('.');
    if s == "-0" { "0".into() } else { s.into() }
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;").replace('"', "&quot;")
}

fn header(svg: &mut String, title: &str) {
    let _ = writeln!(
        svg,
        r#"<?xml version="1.0" encoding="UTF-8"?>
<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="12">
<rect width="{WIDTH}" height="{HEIGHT}" fill="white"/>
<text x="{}" y="22" text-anchor="middle" font-size="14">{}</text>"#,
        WIDTH / 2.0,
        escape(title)
    );
}

fn axes(svg: &mut String, xa: &Axis, ya: &Axis, xname: &str, yname: &str) {
    let (x0, x1, y0, y1) = (LEFT, WIDTH - RIGHT, HEIGHT - BOTTOM, TOP);
    let _ = writeln!(svg, r#"<path d="M{x0} {y1} V{y0} H{x1}" fill="none" stroke="black"/>"#);
    for t in xa.ticks() {
        let x = sx(xa, t);
        let _ = writeln!(
            svg,
            r#"<line x1="{x:.2}" y1="{y0}" x2="{x:.2}" y2="{}" stroke="black"/><text x="{x:.2}" y="{}" text-anchor="middle">{}</text>"#,
            y0 + 5.0,
            y0 + 18.0,
            label(t)
        );
    }
    for t in ya.ticks() {
        let y = sy(ya, t);
        let _ = writeln!(
            svg,
            r#"<line x1="{}" y1="{y:.2}" x2="{x0}" y2="{y:.2}" stroke="black"/><text x="{}" y="{:.2}" text-anchor="end">{}</text>"#,
            x0 - 5.0,
            x0 - 8.0,
            y + 4.0,
            label(t)
        );
    }
    let _ = writeln!(
        svg,
        r#"<text x="{:.2}" y="{}" text-anchor="middle">{}</text>
<text x="18" y="{:.2}" text-anchor="middle" transform="rotate(-90 18 {:.2})">{}</text>"#,
        (x0 + x1) / 2.0,
        HEIGHT - 15.0,
        escape(xname),
        (y0 + y1) / 2.0,
        (y0 + y1) / 2.0,
        escape(yname)
    );
}

pub struct LineSpec<'a> {
    pub x: &'a str,
    pub y: &'a str,
    pub group: Option<&'a str>,
    pub title: &'a str,
}

/// Rows with both coordinates present, in file order, one series per
/// distinct `group` value.
pub fn line_chart(table: &Table, spec: &LineSpec) -> Result<String, Failure> {
    let (xc, yc) = (table.column(spec.x)?, table.column(spec.y)?);
    let gc = spec.group.map(|g| table.column(g)).transpose()?;
    let mut series: Vec<(Option<f64>, Vec<(f64, f64)>)> = Vec::new();
    for i in 0..table.rows.len() {
        let (Some(x), Some(y)) = (table.get(i, xc), table.get(i, yc)) else {
            continue;
        };
        let key = gc.and_then(|g| table.get(i, g));
        match series.iter_mut().find(|(k, _)| *k == key) {
            Some((_, pts)) => pts.push((x, y)),
            None => series.push((key, vec![(x, y)])),
        }
    }
    let all = || series.iter().flat_map(|(_, pts)| pts.iter());
    let (Some(xa), Some(ya)) = (Axis::fit(all().map(|p| p.0)), Axis::fit(all().map(|p| p.1))) else {
        return Err(Failure::usage(format!("no rows with both {} and {}", spec.x, spec.y)));
    };
    let mut svg = String::new();
    header(&mut svg, spec.title);
    axes(&mut svg, &xa, &ya, spec.x, spec.y);
    for (k, (key, pts)) in series.iter().enumerate() {
        let colour = PALETTE[k % PALETTE.len()];
        let coords: Vec<String> = pts.iter().map(|&(x, y)| format!("{:.2},{:.2}", sx(&xa, x), sy(&ya, y))).collect();
        let _ = writeln!(svg, r#"<polyline points="{}" fill="none" stroke="{colour}" stroke-width="1.5"/>"#, coords.join(" "));
        for &(x, y) in pts {
            let _ = writeln!(svg, r#"<circle cx="{:.2}" cy="{:.2}" r="2" fill="{colour}"/>"#, sx(&xa, x), sy(&ya, y));
        }
        if let (Some(g), Some(v)) = (spec.group, key) {
            let y = TOP + 16.0 * k as f64;
            let _ = writeln!(
                svg,
                r#"<text x="{:.2}" y="{y:.2}" fill="{colour}">{}={}</text>"#,
                WIDTH - RIGHT + 10.0,
                escape(g),
                label(*v)
            );
        }
    }
    svg.push_str("</svg>\n");
    Ok(svg)
}

fn colour(t: f64) -> String {
    let t = t.clamp(0.0, 1.0);
    let k = if t <= RAMP[1].0 { 0 } else { 1 };
    let (t0, c0) = RAMP[k];
    let (t1, c1) = RAMP[k + 1];
    let u = (t - t0) / (t1 - t0);
    let c: Vec<u8> = (0..3).map(|i| (c0[i] + u * (c1[i] - c0[i])).round() as u8).collect();
    format!("#{:02x}{:02x}{:02x}", c[0], c[1], c[2])
}

fn distinct(values: impl Iterator<Item = f64>) -> Vec<f64> {
    let mut v: Vec<f64> = values.collect();
    v.sort_by(f64::total_cmp);
    v.dedup_by(|a, b| (*a - *b).abs() <= 1e-12);
    v
}

fn index_of(grid: &[f64], v: f64) -> usize {
    grid.iter().position(|g| (g - v).abs() <= 1e-12).expect("value drawn from grid")
}

fn cell_edges(grid: &[f64]) -> Vec<f64> {
    // Midpoints between neighbours, extended by half a step at the ends.
    let n = grid.len();
    if n == 1 {
        return vec![grid[0] - 0.5, grid[0] + 0.5];
    }
    let mut e = Vec::with_capacity(n + 1);
    e.push(grid[0] - (grid[1] - grid[0]) / 2.0);
    e.extend(grid.windows(2).map(|w| (w[0] + w[1]) / 2.0));
    e.push(grid[n - 1] + (grid[n - 1] - grid[n - 2]) / 2.0);
    e
}

pub struct HeatmapSpec<'a> {
    pub x: &'a str,
    pub y: &'a str,
    pub z: &'a str,
    pub title: &'a str,
}

/// Cells without a `z` value (e.g. infeasible sweep rows) are drawn grey.
pub fn heatmap(table: &Table, spec: &HeatmapSpec) -> Result<String, Failure> {
    let (xc, yc, zc) = (table.column(spec.x)?, table.column(spec.y)?, table.column(spec.z)?);
    let mut cells: BTreeMap<(usize, usize), Option<f64>> = BTreeMap::new();
    let pts: Vec<(f64, f64, Option<f64>)> = (0..table.rows.len())
        .filter_map(|i| Some((table.get(i, xc)?, table.get(i, yc)?, table.get(i, zc))))
        .collect();
    if pts.is_empty() {
        return Err(Failure::usage(format!("no rows with both {} and {}", spec.x, spec.y)));
    }
    let xs = distinct(pts.iter().map(|p| p.0));
    let ys = distinct(pts.iter().map(|p| p.1));
    for &(x, y, z) in &pts {
        let slot = cells.entry((index_of(&xs, x), index_of(&ys, y))).or_insert(None);
        if z.is_some() {
            *slot = z;
        }
    }
    let (xe, ye) = (cell_edges(&xs), cell_edges(&ys));
    let xa = Axis { lo: xe[0], hi: xe[xe.len() - 1] };
    let ya = Axis { lo: ye[0], hi: ye[ye.len() - 1] };
    let za = Axis::fit(cells.values().flatten().copied());

    let mut svg = String::new();
    header(&mut svg, spec.title);
    for (&(i, j), z) in &cells {
        let (x0, x1) = (sx(&xa, xe[i]), sx(&xa, xe[i + 1]));
        let (y0, y1) = (sy(&ya, ye[j + 1]), sy(&ya, ye[j]));
        let fill = match (z, za) {
            (Some(z), Some(za)) => colour(za.unit(*z)),
            _ => MISSING.to_string(),
        };
        let _ = writeln!(
            svg,
            r#"<rect x="{x0:.2}" y="{y0:.2}" width="{:.2}" height="{:.2}" fill="{fill}"/>"#,
            x1 - x0,
            y1 - y0
        );
    }
    axes(&mut svg, &xa, &ya, spec.x, spec.y);
    if let Some(za) = za {
        // Colour bar.
        let (bx, steps) = (WIDTH - RIGHT + 20.0, 20);
        let h = (HEIGHT - TOP - BOTTOM) / steps as f64;
        for k in 0..steps {
            let t = 1.0 - (k as f64 + 0.5) / steps as f64;
            let _ = writeln!(
                svg,
                r#"<rect x="{bx}" y="{:.2}" width="16" height="{:.2}" fill="{}"/>"#,
                TOP + k as f64 * h,
                h + 0.5,
                colour(t)
            );
        }
        let _ = writeln!(
            svg,
            r#"<text x="{}" y="{}">{}</text>
<text x="{}" y="{}">{}</text>
<text x="{}" y="{}">{}</text>"#,
            bx + 20.0,
            TOP + 10.0,
            label(za.hi),
            bx + 20.0,
            HEIGHT - BOTTOM,
            label(za.lo),
            bx,
            TOP - 8.0,
            escape(spec.z)
        );
    }
    svg.push_str("</svg>\n");
    Ok(svg)
}
