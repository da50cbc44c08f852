//! Command-line front end.
//!
//! Exit codes: 0 when the tool ran and the checked property holds, 1 when
//! it ran and the property is false (a JSON report is still emitted), 2 for
//! input and usage errors.

use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};

use crate::attractor::approximate;
use crate::dimension::{dimension_report, DEFAULT_TOL};
use crate::error::Error;
use crate::render::{render_svg, RenderMode, RenderOptions};
use crate::report;
use crate::search::{search_grid_systems, GridTemplate};
use crate::specfile::parse_spec;
use crate::symmetry::{augment, check_symmetry, declared_group, SymmetryOutcome};
use crate::system::{intersection_matrix, validate, PolygonalSystem};
use crate::topology::{classify_points, general_order_bound, main_tree, ramification_bound};
use crate::zipper::{
    dendrite_criterion, extract_arc_zipper, jordan_check, segment_zipper, JordanOptions,
};

#[derive(Parser)]
#[command(
    name = "dendrite",
    about = "Validate, analyze and render polygonal systems of contraction similarities",
    version
)]
pub struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Cells,
    Chaos,
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Svg,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum GridArg {
    Square,
    Triangle,
}

#[derive(Clone, Copy, ValueEnum)]
enum GroupArg {
    Cyclic,
    Dihedral,
}

#[derive(Subcommand)]
enum Command {
    /// Check the four system conditions and the declared symmetry.
    Validate {
        spec: PathBuf,
        /// Replace the system by its augmented family first.
        #[arg(long)]
        augment: bool,
    },
    /// Main tree, point classification and order bounds.
    Analyze {
        spec: PathBuf,
        #[arg(long, default_value_t = 3)]
        depth: u32,
        #[arg(long)]
        augment: bool,
    },
    /// Render the cell approximation as SVG (or dump cells as JSON).
    Render {
        spec: PathBuf,
        #[arg(long, default_value_t = 4)]
        depth: u32,
        /// Output file; standard output when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Color cells by group orbit.
        #[arg(long)]
        fill_by_orbit: bool,
        #[arg(long, value_enum, default_value = "cells")]
        mode: ModeArg,
        /// Chaos mode sample size.
        #[arg(long, default_value_t = 20000)]
        points: u32,
        #[arg(long, default_value_t = 7)]
        seed: u64,
        #[arg(long, value_enum, default_value = "svg")]
        format: FormatArg,
    },
    /// Build and check zippers: an arc of the main tree, or a segment chain.
    Zipper {
        spec: PathBuf,
        /// Arc toward this polygon vertex (1-based).
        #[arg(long, conflicts_with_all = ["segment", "select"])]
        arc: Option<usize>,
        /// Two polygon vertex indices (1-based) to connect.
        #[arg(long, num_args = 2, value_names = ["A", "B"])]
        segment: Option<Vec<usize>>,
        /// Comma-separated selection m:g of map index (1-based) and group
        /// element index (0-based) from the augmented family.
        #[arg(long, requires = "segment")]
        select: Option<String>,
        #[arg(long, default_value_t = 8)]
        max_depth: u32,
    },
    /// Similarity dimensions of the attractor and its main tree.
    Dims {
        spec: PathBuf,
        #[arg(long, default_value_t = DEFAULT_TOL)]
        tolerance: f64,
    },
    /// Exhaustive orbit-subset search over a grid template.
    Search {
        #[arg(long, value_enum)]
        grid: GridArg,
        #[arg(long, default_value_t = 3)]
        k: u32,
        #[arg(long, value_enum)]
        group: GroupArg,
        #[arg(long)]
        order: u32,
    },
}

fn property_failure(e: &Error) -> bool {
    matches!(
        e,
        Error::ConditionViolated(_)
            | Error::PolylineBroken(_)
            | Error::NotSimple(_)
            | Error::ChainBroken { .. }
            | Error::ChainNotFound(_)
            | Error::NotATree { .. }
            | Error::GroupDoesNotFixPolygon { .. }
    )
}

fn load_system(path: &PathBuf) -> crate::Result<PolygonalSystem> {
    let text = std::fs::read_to_string(path)?;
    parse_spec(&text)
}

fn augmented(system: PolygonalSystem) -> crate::Result<PolygonalSystem> {
    let group = declared_group(&system)?.ok_or_else(|| {
        Error::InvalidSelection("--augment needs a declared symmetry group".into())
    })?;
    augment(&system, &group)
}

fn parse_selection(text: &str, map_count: usize) -> crate::Result<Vec<(usize, usize)>> {
    let mut out = Vec::new();
    for part in text.split(',') {
        let part = part.trim();
        if part.is_empty() {
            continue;
        }
        let (m, g) = part.split_once(':').ok_or_else(|| {
            Error::InvalidSelection(format!("selection entry `{part}` is not m:g"))
        })?;
        let m: usize = m
            .trim()
            .parse()
            .map_err(|_| Error::InvalidSelection(format!("bad map index `{m}`")))?;
        let g: usize = g
            .trim()
            .parse()
            .map_err(|_| Error::InvalidSelection(format!("bad group element index `{g}`")))?;
        if m == 0 || m > map_count {
            return Err(Error::InvalidSelection(format!(
                "map index {m} out of range 1..={map_count}"
            )));
        }
        out.push((m - 1, g));
    }
    Ok(out)
}

fn run_command<W: Write>(cmd: &Command, out: &mut W) -> crate::Result<i32> {
    match cmd {
        Command::Validate { spec, augment: do_augment } => {
            let mut system = load_system(spec)?;
            if *do_augment {
                system = augmented(system)?;
            }
            let vreport = validate(&system);
            let matrix = intersection_matrix(&system);
            let mut pass = vreport.all_pass();
            let symmetry = match declared_group(&system)? {
                None => None,
                Some(group) => {
                    let outcome = check_symmetry(&system, &group)?;
                    pass &= matches!(outcome, SymmetryOutcome::Symmetric(_));
                    Some(report::symmetry_json(&group, &outcome))
                }
            };
            let value = report::validate_json(&vreport, &matrix, symmetry, pass);
            out.write_all(report::to_stable_string(&value).as_bytes())?;
            Ok(if pass { 0 } else { 1 })
        }
        Command::Analyze { spec, depth, augment: do_augment } => {
            let mut system = load_system(spec)?;
            if *do_augment {
                system = augmented(system)?;
            }
            let tree = main_tree(&system, *depth)?;
            let points = classify_points(&system, *depth)?;
            let value = report::analyze_json(
                *depth,
                &tree,
                &points,
                system.map_count(),
                ramification_bound(system.base().len() as u32),
                general_order_bound(system.base()),
            );
            out.write_all(report::to_stable_string(&value).as_bytes())?;
            Ok(0)
        }
        Command::Render {
            spec,
            depth,
            out: out_path,
            fill_by_orbit,
            mode,
            points,
            seed,
            format,
        } => {
            let system = load_system(spec)?;
            let payload = match format {
                FormatArg::Svg => {
                    let opts = RenderOptions {
                        depth: *depth,
                        fill_by_orbit: *fill_by_orbit,
                        mode: match mode {
                            ModeArg::Cells => RenderMode::Cells,
                            ModeArg::Chaos => RenderMode::Chaos,
                        },
                        points: *points,
                        seed: *seed,
                    };
                    render_svg(&system, &opts)?
                }
                FormatArg::Json => {
                    let cells = approximate(&system, *depth)?;
                    report::to_stable_string(&report::cells_json(&system, &cells))
                }
            };
            match out_path {
                Some(path) => std::fs::write(path, payload)?,
                None => out.write_all(payload.as_bytes())?,
            }
            Ok(0)
        }
        Command::Zipper { spec, arc, segment, select, max_depth } => {
            let system = load_system(spec)?;
            let opts = JordanOptions { max_depth: *max_depth, ..Default::default() };
            match (arc, segment) {
                (Some(vertex), None) => {
                    if *vertex == 0 || *vertex > system.base().len() {
                        return Err(Error::InvalidSelection(format!(
                            "vertex index {vertex} out of range 1..={}",
                            system.base().len()
                        )));
                    }
                    let arc = extract_arc_zipper(&system, vertex - 1)?;
                    let jordan = jordan_check(&arc.zipper, &opts);
                    let value = serde_json::json!({
                        "command": "zipper",
                        "mode": "arc",
                        "target_vertex": vertex,
                        "chain_pieces": arc.chain_pieces.iter().map(|p| p + 1).collect::<Vec<_>>(),
                        "zipper": report::zipper_json(&arc.zipper),
                        "jordan": report::jordan_json(&jordan),
                    });
                    out.write_all(report::to_stable_string(&value).as_bytes())?;
                    Ok(0)
                }
                (None, Some(ends)) => {
                    let selection_text = select.as_deref().ok_or_else(|| {
                        Error::InvalidSelection("--segment needs --select".into())
                    })?;
                    let selection = parse_selection(selection_text, system.map_count())?;
                    let group = declared_group(&system)?.ok_or_else(|| {
                        Error::InvalidSelection("segment zippers need a declared group".into())
                    })?;
                    let (a, b) = (ends[0], ends[1]);
                    let nv = system.base().len();
                    if a == 0 || b == 0 || a > nv || b > nv {
                        return Err(Error::InvalidSelection(format!(
                            "segment endpoints must be vertex indices in 1..={nv}"
                        )));
                    }
                    let sz = segment_zipper(&system, &group, a - 1, b - 1, &selection)?;
                    let dendrite = dendrite_criterion(&sz.zipper, &system, &opts);
                    let jordan = jordan_check(&sz.zipper, &opts);
                    let value = serde_json::json!({
                        "command": "zipper",
                        "mode": "segment",
                        "endpoints": [a, b],
                        "order": sz.order.iter().map(|k| k + 1).collect::<Vec<_>>(),
                        "zipper": report::zipper_json(&sz.zipper),
                        "jordan": report::jordan_json(&jordan),
                        "dendrite": report::dendrite_json(&dendrite),
                    });
                    out.write_all(report::to_stable_string(&value).as_bytes())?;
                    Ok(0)
                }
                _ => Err(Error::InvalidSelection(
                    "zipper needs exactly one of --arc or --segment".into(),
                )),
            }
        }
        Command::Dims { spec, tolerance } => {
            if *tolerance <= 0.0 {
                return Err(Error::InvalidSelection("tolerance must be positive".into()));
            }
            let system = load_system(spec)?;
            let r = dimension_report(&system, *tolerance)?;
            out.write_all(report::to_stable_string(&report::dims_json(&r)).as_bytes())?;
            Ok(0)
        }
        Command::Search { grid, k, group, order } => {
            let template = match grid {
                GridArg::Square => GridTemplate::Square { k: *k },
                GridArg::Triangle => GridTemplate::Triangle { k: *k },
            };
            let dihedral = matches!(group, GroupArg::Dihedral);
            let outcome = search_grid_systems(&template, dihedral, *order)?;
            let grid_name = match grid {
                GridArg::Square => "square",
                GridArg::Triangle => "triangle",
            };
            let group_name = format!(
                "{} {order}",
                if dihedral { "dihedral" } else { "cyclic" }
            );
            let value = report::search_json(grid_name, *k, &group_name, &outcome);
            out.write_all(report::to_stable_string(&value).as_bytes())?;
            Ok(0)
        }
    }
}

fn command_name(cmd: &Command) -> &'static str {
    match cmd {
        Command::Validate { .. } => "validate",
        Command::Analyze { .. } => "analyze",
        Command::Render { .. } => "render",
        Command::Zipper { .. } => "zipper",
        Command::Dims { .. } => "dims",
        Command::Search { .. } => "search",
    }
}

/// Run with explicit arguments and output sink; returns the exit code.
pub fn run<I, T, W>(args: I, out: &mut W) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
    W: Write,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            // clap renders its own message; usage problems are input errors
            // except for the help/version pseudo-errors.
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match run_command(&cli.command, out) {
        Ok(code) => code,
        Err(e) if property_failure(&e) => {
            let value = report::failure_json(command_name(&cli.command), &e);
            let _ = out.write_all(report::to_stable_string(&value).as_bytes());
            1
        }
        Err(e) => {
            eprintln!("dendrite: {e}");
            2
        }
    }
}
