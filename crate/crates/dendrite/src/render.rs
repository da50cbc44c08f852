//! Deterministic SVG output of cell approximations.
//!
//! One path per cell in lexicographic index order, coordinates printed as
//! fixed 6-decimal approximations of the exact values, so a fixed input and
//! option set always produces identical bytes. A seeded chaos-game mode is
//! available as an alternative view; verdicts never depend on it.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::attractor::{approximate, format_index, CellSet};
use crate::error::{Error, Result};
use crate::symmetry::declared_group;
use crate::system::PolygonalSystem;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RenderMode {
    Cells,
    Chaos,
}

#[derive(Clone, Debug)]
pub struct RenderOptions {
    pub depth: u32,
    pub fill_by_orbit: bool,
    pub mode: RenderMode,
    /// Chaos mode only: number of plotted points.
    pub points: u32,
    pub seed: u64,
}

impl Default for RenderOptions {
    fn default() -> Self {
        RenderOptions {
            depth: 4,
            fill_by_orbit: false,
            mode: RenderMode::Cells,
            points: 20_000,
            seed: 7,
        }
    }
}

const PALETTE: [&str; 10] = [
    "#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd", "#8c564b", "#e377c2", "#7f7f7f",
    "#bcbd22", "#17becf",
];

fn fmt6(v: f64) -> String {
    // Avoid the negative-zero artifact so byte output is stable.
    let r = format!("{v:.6}");
    if r == "-0.000000" {
        "0.000000".into()
    } else {
        r
    }
}

struct ViewBox {
    min_x: f64,
    min_y: f64,
    width: f64,
    height: f64,
}

fn view_box(points: impl Iterator<Item = (f64, f64)>) -> ViewBox {
    let mut min_x = f64::INFINITY;
    let mut max_x = f64::NEG_INFINITY;
    let mut min_y = f64::INFINITY;
    let mut max_y = f64::NEG_INFINITY;
    for (x, y) in points {
        min_x = min_x.min(x);
        max_x = max_x.max(x);
        min_y = min_y.min(y);
        max_y = max_y.max(y);
    }
    if min_x > max_x {
        return ViewBox { min_x: 0.0, min_y: 0.0, width: 1.0, height: 1.0 };
    }
    let pad = 0.05 * (max_x - min_x).max(max_y - min_y).max(1e-9);
    ViewBox {
        min_x: min_x - pad,
        min_y: min_y - pad,
        width: max_x - min_x + 2.0 * pad,
        height: max_y - min_y + 2.0 * pad,
    }
}

/// Orbit color classes of the depth-k cells under the declared group.
fn orbit_classes(system: &PolygonalSystem, cells: &CellSet) -> Result<Vec<usize>> {
    let group = declared_group(system)?.ok_or_else(|| {
        Error::InvalidSelection("orbit coloring needs a declared symmetry group".into())
    })?;
    let mut class_of_key: BTreeMap<crate::geometry::PolygonKey, usize> = BTreeMap::new();
    let mut classes = Vec::with_capacity(cells.cells.len());
    let mut next = 0usize;
    for cell in &cells.cells {
        let orbit_key = group
            .elements()
            .iter()
            .map(|g| cell.image.apply(g).key())
            .min()
            .expect("group is nonempty");
        let class = *class_of_key.entry(orbit_key).or_insert_with(|| {
            let c = next;
            next += 1;
            c
        });
        classes.push(class);
    }
    Ok(classes)
}

/// Render the depth-k cell set (or a chaos-game sample) as an SVG document.
pub fn render_svg(system: &PolygonalSystem, opts: &RenderOptions) -> Result<String> {
    match opts.mode {
        RenderMode::Cells => render_cells(system, opts),
        RenderMode::Chaos => render_chaos(system, opts),
    }
}

fn render_cells(system: &PolygonalSystem, opts: &RenderOptions) -> Result<String> {
    let cells = approximate(system, opts.depth)?;
    let coords: Vec<Vec<(f64, f64)>> = cells
        .cells
        .iter()
        .map(|c| {
            c.image
                .vertices()
                .iter()
                .map(|v| {
                    let (x, y) = v.to_f64();
                    (x, -y)
                })
                .collect()
        })
        .collect();
    let vb = view_box(coords.iter().flatten().copied());
    let classes = if opts.fill_by_orbit {
        Some(orbit_classes(system, &cells)?)
    } else {
        None
    };

    let mut out = String::new();
    out.push_str("<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n");
    let _ = writeln!(
        out,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"{} {} {} {}\" width=\"640\" height=\"640\">",
        fmt6(vb.min_x),
        fmt6(vb.min_y),
        fmt6(vb.width),
        fmt6(vb.height)
    );
    let stroke_width = fmt6(vb.width.max(vb.height) / 640.0);
    for (k, poly) in coords.iter().enumerate() {
        let fill = match &classes {
            Some(cl) => PALETTE[cl[k] % PALETTE.len()],
            None => PALETTE[0],
        };
        let mut d = String::new();
        for (i, (x, y)) in poly.iter().enumerate() {
            let _ = write!(d, "{}{} {}", if i == 0 { "M" } else { " L" }, fmt6(*x), fmt6(*y));
        }
        d.push_str(" Z");
        let _ = writeln!(
            out,
            "<path d=\"{d}\" fill=\"{fill}\" stroke=\"#202020\" stroke-width=\"{stroke_width}\"><title>{}</title></path>",
            format_index(&cells.cells[k].index, system.map_count())
        );
    }
    out.push_str("</svg>\n");
    Ok(out)
}

fn render_chaos(system: &PolygonalSystem, opts: &RenderOptions) -> Result<String> {
    // f64 map data; rendering only.
    let maps: Vec<(f64, f64, f64, f64, bool)> = system
        .maps()
        .iter()
        .map(|m| {
            let (ar, ai) = m.a.to_f64();
            let (br, bi) = m.b.to_f64();
            (ar, ai, br, bi, m.mirror)
        })
        .collect();
    let start = system
        .map(0)
        .fixed_point()
        .map(|p| p.to_f64())
        .unwrap_or((0.0, 0.0));
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let mut z = start;
    let mut pts = Vec::with_capacity(opts.points as usize);
    for step in 0..(opts.points as usize + 20) {
        let (ar, ai, br, bi, mirror) = maps[rng.gen_range(0..maps.len())];
        let (x, y) = if mirror { (z.0, -z.1) } else { z };
        z = (ar * x - ai * y + br, ar * y + ai * x + bi);
        if step >= 20 {
            pts.push((z.0, -z.1));
        }
    }
    let vb = view_box(pts.iter().copied());
    let r = fmt6(vb.width.max(vb.height) / 500.0);
    let mut out = String::new();
    out.push_str("<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n");
    let _ = writeln!(
        out,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"{} {} {} {}\" width=\"640\" height=\"640\">",
        fmt6(vb.min_x),
        fmt6(vb.min_y),
        fmt6(vb.width),
        fmt6(vb.height)
    );
    for (x, y) in &pts {
        let _ = writeln!(
            out,
            "<circle cx=\"{}\" cy=\"{}\" r=\"{r}\" fill=\"#1f77b4\"/>",
            fmt6(*x),
            fmt6(*y)
        );
    }
    out.push_str("</svg>\n");
    Ok(out)
}
