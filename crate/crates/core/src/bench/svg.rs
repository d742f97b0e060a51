//! Standalone SVG 1.1 rendering of a finished run.
//!
//! Coordinates are pixels with the grid origin at the top-left, matching the
//! point-mass configuration space. Arm configurations are drawn through
//! their joint chain; tree edges connect end-effector positions.

use std::fmt::Write as _;
use std::io::Write;
use std::sync::atomic::{AtomicU64, Ordering};

use base64::Engine;

use crate::cspace::Configuration;
use crate::env::{EnvKind, Environment, OccupancyGrid};
use crate::error::{Error, Result};
use crate::planners::SearchGraph;

/// Grids with more pixels than this are embedded as one PNG instead of rects.
pub const RASTER_THRESHOLD: usize = 65_536;

static RENDER_CALLS: AtomicU64 = AtomicU64::new(0);

/// Number of `render_svg` calls in this process.
pub fn render_calls() -> u64 {
    RENDER_CALLS.load(Ordering::SeqCst)
}

fn num(v: f64) -> String {
    let s = format!("{v:.3}");
    let s = s.trim_end_matches('0').trim_end_matches('.');
    if s == "-0" {
        "0".to_string()
    } else {
        s.to_string()
    }
}

fn points(pts: &[(f64, f64)]) -> String {
    pts.iter()
        .map(|&(x, y)| format!("{},{}", num(x), num(y)))
        .collect::<Vec<_>>()
        .join(" ")
}

/// Where a configuration is drawn as a single point.
fn anchor(env: &dyn Environment, q: &Configuration) -> Result<(f64, f64)> {
    let pts = env.workspace_points(q)?;
    Ok(*pts.last().expect("workspace_points is never empty"))
}

/// Horizontal runs of occupied cells, row-major.
fn obstacle_runs(grid: &OccupancyGrid) -> Vec<(usize, usize, usize)> {
    let w = grid.width();
    let mut runs = Vec::new();
    for (y, row) in grid.cells().chunks(w).enumerate() {
        let mut x = 0;
        while x < w {
            if row[x] {
                let x0 = x;
                while x < w && row[x] {
                    x += 1;
                }
                runs.push((x0, y, x - x0));
            } else {
                x += 1;
            }
        }
    }
    runs
}

fn grid_png(grid: &OccupancyGrid) -> Result<Vec<u8>> {
    let mut buf = Vec::new();
    {
        let mut enc = png::Encoder::new(&mut buf, grid.width() as u32, grid.height() as u32);
        enc.set_color(png::ColorType::Grayscale);
        enc.set_depth(png::BitDepth::Eight);
        let mut w = enc.write_header().map_err(png_error)?;
        let data: Vec<u8> = grid.cells().iter().map(|&occ| if occ { 0 } else { 255 }).collect();
        w.write_image_data(&data).map_err(png_error)?;
    }
    Ok(buf)
}

fn png_error(e: png::EncodingError) -> Error {
    match e {
        png::EncodingError::IoError(io) => Error::Io(io),
        other => Error::Io(std::io::Error::other(other.to_string())),
    }
}

/// Writes the map, search graph, path and endpoints as one SVG document.
pub fn render_svg(
    env: &dyn Environment,
    graph: &SearchGraph,
    path: &[Configuration],
    start: &Configuration,
    goal: &Configuration,
    out: &mut dyn Write,
) -> Result<()> {
    RENDER_CALLS.fetch_add(1, Ordering::SeqCst);
    let grid = env.grid();
    let (w, h) = (grid.width(), grid.height());
    let mut s = String::new();
    // fmt::Write into a String cannot fail
    let _ = writeln!(s, r#"<?xml version="1.0" encoding="UTF-8" standalone="no"?>"#);
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" xmlns:xlink="http://www.w3.org/1999/xlink" version="1.1" width="{w}" height="{h}" viewBox="0 0 {w} {h}">"#
    );

    if w * h > RASTER_THRESHOLD {
        let data = base64::engine::general_purpose::STANDARD.encode(grid_png(grid)?);
        let _ = writeln!(
            s,
            r#"<image id="map" x="0" y="0" width="{w}" height="{h}" style="image-rendering:pixelated" xlink:href="data:image/png;base64,{data}"/>"#
        );
    } else {
        let runs = obstacle_runs(grid);
        if !runs.is_empty() {
            let _ = writeln!(s, r#"<g id="obstacles" fill="black" shape-rendering="crispEdges">"#);
            for (x, y, len) in runs {
                let _ = writeln!(s, r#"<rect x="{x}" y="{y}" width="{len}" height="1"/>"#);
            }
            let _ = writeln!(s, "</g>");
        }
    }

    if !graph.edges.is_empty() {
        let anchors = graph.nodes.iter().map(|q| anchor(env, q)).collect::<Result<Vec<_>>>()?;
        let _ = writeln!(s, r##"<g id="tree" fill="none" stroke="#9e9e9e" stroke-width="1">"##);
        for &(a, b) in &graph.edges {
            let _ = writeln!(s, r#"<polyline points="{}"/>"#, points(&[anchors[a], anchors[b]]));
        }
        let _ = writeln!(s, "</g>");
    }

    if path.len() >= 2 {
        let trace = path.iter().map(|q| anchor(env, q)).collect::<Result<Vec<_>>>()?;
        let _ = writeln!(
            s,
            r##"<polyline id="path" fill="none" stroke="#d62728" stroke-width="3" points="{}"/>"##,
            points(&trace)
        );
    }

    if matches!(env.kind(), EnvKind::PlanarArm { .. }) && !path.is_empty() {
        let _ = writeln!(s, r##"<g id="arm" fill="none" stroke="#1f77b4" stroke-width="1.5">"##);
        for q in path {
            let _ = writeln!(s, r#"<polyline points="{}"/>"#, points(&env.workspace_points(q)?));
        }
        let _ = writeln!(s, "</g>");
    }

    for (id, q, colour) in [("start", start, "#2ca02c"), ("goal", goal, "#ff7f0e")] {
        let (x, y) = anchor(env, q)?;
        let _ = writeln!(
            s,
            r#"<circle id="{id}" cx="{}" cy="{}" r="3" fill="{colour}"/>"#,
            num(x),
            num(y)
        );
    }
    let _ = writeln!(s, "</svg>");
    out.write_all(s.as_bytes())?;
    Ok(())
}
