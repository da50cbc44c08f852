//! JSON report assembly.
//!
//! Reports are serde_json values with sorted keys (the default map is a
//! BTreeMap), exact quantities rendered as canonical scalar literals, and
//! floats confined to dimension values. Identical inputs produce identical
//! bytes.

use serde_json::{json, Value};

use crate::attractor::{format_index, CellSet};
use crate::dimension::DimensionReport;
use crate::scalar::Scalar;
use crate::search::SearchOutcome;
use crate::specfile::serialize_system;
use crate::symmetry::{SymmetryGroup, SymmetryOutcome};
use crate::system::{
    ContactPoint, CycleNode, IntersectionMatrix, PolygonalSystem, ValidationReport, Witness,
};
use crate::topology::{MainTree, PointClass, PointClassification};
use crate::zipper::{DendriteVerdict, JordanVerdict, Zipper};

fn scalar(s: &Scalar) -> Value {
    Value::String(s.to_string())
}

fn cycle_node(node: &CycleNode) -> Value {
    match node {
        CycleNode::Piece(i) => json!({ "piece": i }),
        CycleNode::Point(p) => json!({ "point": p.to_string() }),
    }
}

pub fn witness_json(w: &Witness) -> Value {
    match w {
        Witness::PieceNotContained { map } => {
            json!({ "kind": "piece_not_contained", "map": map })
        }
        Witness::PairOverlap { i, j } => json!({ "kind": "pair_overlap", "i": i, "j": j }),
        Witness::UncoveredVertex { vertex } => {
            json!({ "kind": "uncovered_vertex", "vertex": vertex })
        }
        Witness::Cycle { nodes } => json!({
            "kind": "cycle",
            "nodes": nodes.iter().map(cycle_node).collect::<Vec<_>>(),
        }),
        Witness::Disconnected { components } => json!({
            "kind": "disconnected",
            "components": components
                .iter()
                .map(|c| c.iter().map(cycle_node).collect::<Vec<_>>())
                .collect::<Vec<_>>(),
        }),
        Witness::NotEvaluated { reason } => {
            json!({ "kind": "not_evaluated", "reason": reason })
        }
    }
}

fn condition(v: &crate::system::ConditionVerdict) -> Value {
    json!({
        "pass": v.pass,
        "witnesses": v.witnesses.iter().map(witness_json).collect::<Vec<_>>(),
    })
}

pub fn symmetry_json(group: &SymmetryGroup, outcome: &SymmetryOutcome) -> Value {
    let name = format!(
        "{} {}",
        if group.spec().dihedral { "dihedral" } else { "cyclic" },
        group.spec().n
    );
    match outcome {
        SymmetryOutcome::Symmetric(_) => json!({
            "declared": name,
            "pass": true,
            "counterexample": Value::Null,
        }),
        SymmetryOutcome::Counterexample { generator, map } => json!({
            "declared": name,
            "pass": false,
            "counterexample": {
                "generator": group.element_name(*generator),
                "map": map + 1,
            },
        }),
    }
}

pub fn validate_json(
    report: &ValidationReport,
    matrix: &IntersectionMatrix,
    symmetry: Option<Value>,
    pass: bool,
) -> Value {
    json!({
        "command": "validate",
        "conditions": {
            "d1": condition(&report.d1),
            "d2": condition(&report.d2),
            "d3": condition(&report.d3),
            "d4": condition(&report.d4),
        },
        "intersection_matrix": {
            "single_common_vertex_pairs": matrix.count_single_common_vertex(),
            "disjoint_pairs": matrix.count_disjoint(),
        },
        "symmetry": symmetry.unwrap_or(Value::Null),
        "pass": pass,
    })
}

pub fn contacts_json(contacts: &[ContactPoint]) -> Value {
    Value::Array(
        contacts
            .iter()
            .map(|c| {
                json!({
                    "point": c.point.to_string(),
                    "pieces": c.pieces.iter().map(|p| p + 1).collect::<Vec<_>>(),
                })
            })
            .collect(),
    )
}

pub fn main_tree_json(tree: &MainTree) -> Value {
    json!({
        "center": scalar(&tree.center),
        "degree": tree.center_degree(),
        "edge_count": tree.edge_count(),
        "depth": tree.depth,
        "dihedral_declared": tree.dihedral_declared,
        "arcs": tree
            .arcs
            .iter()
            .map(|a| {
                json!({
                    "vertex": a.vertex + 1,
                    "leaf": scalar(&a.leaf),
                    "collinear": a.collinear,
                    "polyline": a.polyline.iter().map(scalar).collect::<Vec<_>>(),
                })
            })
            .collect::<Vec<_>>(),
    })
}

fn class_name(c: PointClass) -> &'static str {
    match c {
        PointClass::EndPoint => "end",
        PointClass::CutPoint => "cut",
        PointClass::RamificationPoint => "ramification",
    }
}

pub fn points_json(points: &[PointClassification], map_count: usize) -> Value {
    Value::Array(
        points
            .iter()
            .map(|p| {
                json!({
                    "point": p.point.to_string(),
                    "class": class_name(p.class),
                    "order": p.order,
                    "provenance": p.provenance_label(map_count),
                })
            })
            .collect(),
    )
}

pub fn analyze_json(
    depth: u32,
    tree: &MainTree,
    points: &[PointClassification],
    map_count: usize,
    vertex_bound: u32,
    general_bound: usize,
) -> Value {
    json!({
        "command": "analyze",
        "depth": depth,
        "main_tree": main_tree_json(tree),
        "points": points_json(points, map_count),
        "bounds": {
            "vertex_type": vertex_bound,
            "general": general_bound,
        },
    })
}

pub fn zipper_json(z: &Zipper) -> Value {
    json!({
        "maps": z.maps.iter().map(|m| m.to_string()).collect::<Vec<_>>(),
        "vertices": z.vertices.iter().map(scalar).collect::<Vec<_>>(),
        "signature": z.signature.iter().map(|&e| u8::from(e)).collect::<Vec<_>>(),
    })
}

pub fn jordan_json(v: &JordanVerdict) -> Value {
    match v {
        JordanVerdict::Jordan { depth } => json!({ "verdict": "jordan", "depth": depth }),
        JordanVerdict::NotJordan { i, j, detail } => json!({
            "verdict": "not_jordan",
            "i": i,
            "j": j,
            "detail": detail,
        }),
        JordanVerdict::Unknown { depth } => json!({ "verdict": "unknown", "depth": depth }),
    }
}

pub fn dendrite_json(v: &DendriteVerdict) -> Value {
    match v {
        DendriteVerdict::JordanArc => json!({ "verdict": "jordan_arc" }),
        DendriteVerdict::Dendrite { u, order_lower_bound } => json!({
            "verdict": "dendrite",
            "u": u,
            "order_lower_bound": order_lower_bound,
        }),
        DendriteVerdict::Unknown => json!({ "verdict": "unknown" }),
    }
}

pub fn dims_json(r: &DimensionReport) -> Value {
    json!({
        "command": "dims",
        "dim_attractor": r.dim_attractor,
        "dim_main_tree": r.dim_main_tree,
        "residual_attractor": r.residual_attractor,
        "residual_main_tree": r.residual_main_tree,
        "tolerance": r.tol,
        "strictly_smaller": r.strictly_smaller,
        "equal_within_tol": r.equal_within_tol,
        "arc_jordan": jordan_json(&r.arc_jordan),
    })
}

pub fn cells_json(system: &PolygonalSystem, cells: &CellSet) -> Value {
    json!({
        "command": "render",
        "depth": cells.depth,
        "cell_count": cells.len(),
        "cells": cells
            .cells
            .iter()
            .map(|c| {
                json!({
                    "index": format_index(&c.index, system.map_count()),
                    "map": c.map.to_string(),
                    "vertices": c.image.vertices().iter().map(scalar).collect::<Vec<_>>(),
                })
            })
            .collect::<Vec<_>>(),
    })
}

pub fn search_json(grid: &str, k: u32, group: &str, outcome: &SearchOutcome) -> Value {
    json!({
        "command": "search",
        "grid": grid,
        "k": k,
        "group": group,
        "orbits": outcome.orbit_count,
        "candidates": outcome.candidates,
        "found": outcome
            .systems
            .iter()
            .map(|s| {
                json!({
                    "maps": s.map_count(),
                    "system": serialize_system(s),
                })
            })
            .collect::<Vec<_>>(),
    })
}

/// Report for commands that fail a property (exit code 1).
pub fn failure_json(command: &str, error: &crate::error::Error) -> Value {
    json!({
        "command": command,
        "error": error.to_string(),
        "pass": false,
    })
}

/// Pretty, stable rendering used by the CLI.
pub fn to_stable_string(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("report serialization cannot fail");
    s.push('\n');
    s
}
