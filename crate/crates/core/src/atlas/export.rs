//! CSV, JSON and SVG output of region grids.
//!
//! CSV files hold exactly the documented columns; the matching JSON file (and
//! the SVG `<metadata>` block) carries the provenance.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use serde::de::DeserializeOwned;
use serde::Serialize;

use crate::atlas::classify::Classification;
use crate::atlas::grid::RegionGrid;
use crate::error::{Error, Result};
use crate::format::fmt17;
use crate::quadratic_rate::RateCell;

pub const CLASSIFICATION_HEADER: &str = "gamma,beta,class,rho,min_k,source";
pub const RATE_HEADER: &str = "gamma,beta,rho,accelerated";

/// Side of one cell in SVG user units.
const CELL_PX: usize = 8;

fn io_err(path: &Path, source: std::io::Error) -> Error {
    Error::Io {
        path: path.to_path_buf(),
        source,
    }
}

pub fn write_text(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text).map_err(|e| io_err(path, e))
}

/// One row per cell in grid order; unknown cells flagged indeterminate carry
/// `indeterminate` in the source column.
pub fn classification_csv(grid: &RegionGrid<Classification>) -> String {
    let mut out = String::with_capacity(64 * (grid.cells.len() + 1));
    out.push_str(CLASSIFICATION_HEADER);
    out.push('\n');
    for (t, cell) in grid.iter() {
        let (rho, min_k, source) = match cell {
            Classification::Lyapunov { rho } => (fmt17(*rho), String::new(), ""),
            Classification::Cycle { min_k, source } => (String::new(), min_k.to_string(), source.as_str()),
            Classification::Unknown { indeterminate: true } => (String::new(), String::new(), "indeterminate"),
            Classification::Unknown { .. } | Classification::Conflict => (String::new(), String::new(), ""),
        };
        let _ = writeln!(
            out,
            "{},{},{},{rho},{min_k},{source}",
            fmt17(t.gamma),
            fmt17(t.beta),
            cell.label()
        );
    }
    out
}

pub fn rate_csv(grid: &RegionGrid<RateCell>) -> String {
    let mut out = String::with_capacity(80 * (grid.cells.len() + 1));
    out.push_str(RATE_HEADER);
    out.push('\n');
    for (t, cell) in grid.iter() {
        let _ = writeln!(
            out,
            "{},{},{},{}",
            fmt17(t.gamma),
            fmt17(t.beta),
            fmt17(cell.rate.rho),
            cell.accelerated
        );
    }
    out
}

pub fn export_csv(grid: &RegionGrid<Classification>, path: &Path) -> Result<()> {
    write_text(path, &classification_csv(grid))
}

pub fn export_rate_csv(grid: &RegionGrid<RateCell>, path: &Path) -> Result<()> {
    write_text(path, &rate_csv(grid))
}

pub fn export_json<C: Serialize>(grid: &RegionGrid<C>, path: &Path) -> Result<()> {
    let text = serde_json::to_string_pretty(grid).map_err(|source| Error::Json {
        path: path.to_path_buf(),
        source,
    })?;
    write_text(path, &(text + "\n"))
}

pub fn import_json<C: DeserializeOwned>(path: &Path) -> Result<RegionGrid<C>> {
    let text = fs::read_to_string(path).map_err(|e| io_err(path, e))?;
    serde_json::from_str(&text).map_err(|source| Error::Json {
        path: path.to_path_buf(),
        source,
    })
}

fn xml_escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

fn hex(rgb: [f64; 3]) -> String {
    let b = |v: f64| v.round().clamp(0.0, 255.0) as u8;
    format!("#{:02x}{:02x}{:02x}", b(rgb[0]), b(rgb[1]), b(rgb[2]))
}

fn lerp(a: [f64; 3], b: [f64; 3], s: f64) -> [f64; 3] {
    std::array::from_fn(|i| a[i] + (b[i] - a[i]) * s.clamp(0.0, 1.0))
}

pub const GREEN: &str = "#31a354";
pub const WHITE: &str = "#ffffff";
pub const GREY: &str = "#d9d9d9";
pub const RED: &str = "#e41a1c";

/// Purple, darker for shorter cycles.
pub fn purple(k: usize) -> String {
    let s = (k.saturating_sub(3)) as f64 / 22.0;
    hex(lerp([63.0, 0.0, 125.0], [188.0, 189.0, 220.0], s))
}

pub fn classification_color(c: &Classification) -> String {
    match c {
        Classification::Lyapunov { .. } => GREEN.into(),
        Classification::Cycle { min_k, .. } => purple(*min_k),
        Classification::Unknown { indeterminate: true } => GREY.into(),
        Classification::Unknown { .. } => WHITE.into(),
        Classification::Conflict => RED.into(),
    }
}

/// Dark blue at `rho = 0` to yellow near `rho = 1`; white where quadratics diverge.
pub fn rate_color(cell: &RateCell) -> String {
    if cell.rate.rho >= 1.0 {
        return WHITE.into();
    }
    hex(lerp([68.0, 1.0, 84.0], [253.0, 231.0, 37.0], cell.rate.rho))
}

/// One rectangle per cell, `gamma` to the right and `beta` upwards.
pub fn svg_string<C: Serialize>(grid: &RegionGrid<C>, palette: &dyn Fn(&C) -> String) -> String {
    let (nx, ny) = (grid.spec.nx, grid.spec.ny);
    let (w, h) = (nx * CELL_PX, ny * CELL_PX);
    let meta = serde_json::json!({
        "spec": grid.spec,
        "class": grid.class,
        "provenance": grid.provenance,
    });
    let mut out = String::with_capacity(64 * nx * ny + 1024);
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{w}" height="{h}" viewBox="0 0 {w} {h}" shape-rendering="crispEdges">"#
    );
    let _ = writeln!(out, "<metadata>{}</metadata>", xml_escape(&meta.to_string()));
    for (idx, cell) in grid.cells.iter().enumerate() {
        let (i, j) = grid.spec.coords(idx);
        let _ = writeln!(
            out,
            r#"<rect x="{}" y="{}" width="{CELL_PX}" height="{CELL_PX}" fill="{}"/>"#,
            i * CELL_PX,
            (ny - 1 - j) * CELL_PX,
            palette(cell)
        );
    }
    out.push_str("</svg>\n");
    out
}

pub fn render_svg<C: Serialize>(grid: &RegionGrid<C>, path: &Path, palette: &dyn Fn(&C) -> String) -> Result<()> {
    write_text(path, &svg_string(grid, palette))
}
