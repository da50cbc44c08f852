//! Main-tree extraction and point classification for validated symmetric
//! systems on regular polygons.
//!
//! With the rotation group acting, the main tree is an n-pod: the polygon
//! center O is its only ramification point and every polygon vertex is an
//! end point. Arcs are followed through the depth-k incidence tree and
//! reported as polylines of contact points; point orders come from the
//! combinatorial classification (center images have order n, images of a
//! contact point inherit its piece count).

use std::collections::BTreeMap;

use crate::attractor::{approximate, format_index, CellSet, MultiIndex};
use crate::error::{Error, Result};
use crate::geometry::{
    ceil_two_pi_over_angle, orient, ConvexPolygon, Location, RegularInfo, Similarity, Turn,
};
use crate::scalar::Scalar;
use crate::symmetry::{check_symmetry, declared_group, SymmetryGroup, SymmetryOutcome};
use crate::system::{validate, ContactPoint, IncidenceGraph, PolygonalSystem, TreeCheck};

/// Largest possible order of a vertex-type point on a regular n-gon:
/// 1 + ceil(4 / (n - 2)).
pub fn ramification_bound(n: u32) -> u32 {
    assert!(n >= 3, "polygon needs at least three vertices");
    1 + 4_u32.div_ceil(n - 2)
}

/// Order bound for arbitrary convex polygons:
/// (n_P - 1) * (ceil(2*pi / theta_min) - 1).
pub fn general_order_bound(p: &ConvexPolygon) -> usize {
    let w = p.min_angle_handle();
    (p.len() - 1) * (ceil_two_pi_over_angle(&w) - 1)
}

/// The piece holding the polygon center.
#[derive(Clone, Debug)]
pub enum CenterPiece {
    /// A unique map fixing O, with O interior to its piece.
    Map { index: usize },
    /// O is a common vertex of these pieces (possible for triangles only).
    VertexOnly { pieces: Vec<usize> },
}

/// Regularity and rotation-group gates shared by the topology operations.
pub struct SymmetricSetting {
    pub regular: RegularInfo,
    pub group: SymmetryGroup,
}

pub fn symmetric_setting(system: &PolygonalSystem) -> Result<SymmetricSetting> {
    let regular = system
        .base()
        .regular_structure()
        .ok_or(Error::RegularityRequired)?;
    let group = declared_group(system)?.ok_or(Error::SymmetryRequired)?;
    if group.spec().n != system.base().len() as u32 || group.center() != &regular.center {
        return Err(Error::SymmetryRequired);
    }
    match check_symmetry(system, &group)? {
        SymmetryOutcome::Symmetric(_) => Ok(SymmetricSetting { regular, group }),
        SymmetryOutcome::Counterexample { .. } => Err(Error::SymmetryRequired),
    }
}

/// Locate the piece containing the center O.
pub fn find_center_map(system: &PolygonalSystem) -> Result<CenterPiece> {
    let setting = symmetric_setting(system)?;
    let center = &setting.regular.center;
    let mut interior: Vec<usize> = Vec::new();
    let mut vertex_of: Vec<usize> = Vec::new();
    for i in 0..system.map_count() {
        match system.image(i).locate(center) {
            Location::Interior => interior.push(i),
            Location::Vertex(_) => vertex_of.push(i),
            Location::EdgeInterior(_) => {
                return Err(Error::Internal(format!(
                    "center lies on an edge interior of piece {}",
                    i + 1
                )))
            }
            Location::Exterior => {}
        }
    }
    match (interior.as_slice(), vertex_of.as_slice()) {
        ([i], []) => {
            let map = system.map(*i);
            let fixed = map
                .fixed_point()
                .ok_or_else(|| Error::Internal("center piece map has no fixed point".into()))?;
            if &fixed != center {
                return Err(Error::Internal(
                    "piece containing the center does not fix it".into(),
                ));
            }
            // Rotation invariance of the center piece.
            let rotated = system.image(*i).apply(&setting.regular.rotation);
            if rotated.key() != system.image(*i).key() {
                return Err(Error::Internal(
                    "center piece is not rotation invariant".into(),
                ));
            }
            Ok(CenterPiece::Map { index: *i })
        }
        ([], pieces) if !pieces.is_empty() => Ok(CenterPiece::VertexOnly {
            pieces: pieces.to_vec(),
        }),
        _ => Err(Error::Internal(
            "center is not covered the way a validated symmetric system requires".into(),
        )),
    }
}

/// Depth-k bipartite incidence graph, verified to be a tree.
pub fn incidence_tree(cells: &CellSet) -> Result<IncidenceGraph> {
    let polys = cells.polygons();
    let graph = IncidenceGraph::from_cell_polygons(&polys);
    match graph.check_tree() {
        TreeCheck::Tree => Ok(graph),
        TreeCheck::Cycle(c) => Err(Error::NotATree {
            depth: cells.depth as usize,
            detail: format!("cycle through {} nodes", c.len()),
        }),
        TreeCheck::Disconnected(comps) => Err(Error::NotATree {
            depth: cells.depth as usize,
            detail: format!("{} components", comps.len()),
        }),
    }
}

#[derive(Clone, Debug)]
pub struct MainArc {
    /// 0-based vertex index of the leaf.
    pub vertex: usize,
    pub leaf: Scalar,
    /// Contact points along the arc, from the center to the leaf inclusive.
    pub polyline: Vec<Scalar>,
    /// Exact collinearity of the polyline with the segment center-leaf.
    pub collinear: bool,
}

#[derive(Clone, Debug)]
pub struct MainTree {
    pub center: Scalar,
    pub arcs: Vec<MainArc>,
    pub depth: u32,
    /// Whether the declared group contains reflections (which force every
    /// arc to be a straight segment).
    pub dihedral_declared: bool,
}

impl MainTree {
    /// Edges of the abstract n-pod.
    pub fn edge_count(&self) -> usize {
        self.arcs.len()
    }

    pub fn center_degree(&self) -> usize {
        self.arcs.len()
    }

    /// Vertices of the abstract tree (leaves plus the center).
    pub fn vertex_count(&self) -> usize {
        self.arcs.len() + 1
    }
}

fn graph_node_of_center(
    graph: &IncidenceGraph,
    cells: &CellSet,
    center: &Scalar,
) -> Result<usize> {
    let mut interior: Option<usize> = None;
    for (i, cell) in cells.cells.iter().enumerate() {
        if cell.image.locate(center) == Location::Interior
            && interior.replace(i).is_some() {
                return Err(Error::Internal("center interior to two cells".into()));
            }
    }
    if let Some(i) = interior {
        return Ok(i);
    }
    // Vertex case: O must be a contact point node.
    let idx = graph
        .contacts
        .iter()
        .position(|c| &c.point == center)
        .ok_or_else(|| Error::Internal("center is neither interior nor a contact".into()))?;
    Ok(graph.piece_count + idx)
}

fn cell_holding_vertex(cells: &CellSet, v: &Scalar) -> Result<usize> {
    let mut holders = cells
        .cells
        .iter()
        .enumerate()
        .filter(|(_, c)| c.image.is_image_vertex(v).is_some())
        .map(|(i, _)| i);
    let first = holders
        .next()
        .ok_or_else(|| Error::Internal("polygon vertex not covered by any cell".into()))?;
    if holders.next().is_some() {
        return Err(Error::Internal(
            "polygon vertex covered by two cells in a regular symmetric system".into(),
        ));
    }
    Ok(first)
}

/// Extract the n-pod main tree with depth-refined arc polylines.
pub fn main_tree(system: &PolygonalSystem, depth: u32) -> Result<MainTree> {
    assert!(depth >= 1, "main tree needs at least depth 1");
    let setting = symmetric_setting(system)?;
    if !validate(system).all_pass() {
        return Err(Error::ConditionViolated("D1-D4"));
    }
    let center = setting.regular.center.clone();
    let cells = approximate(system, depth)?;
    let graph = incidence_tree(&cells)?;
    let start = graph_node_of_center(&graph, &cells, &center)?;

    let mut arcs = Vec::with_capacity(system.base().len());
    for (t, leaf) in system.base().vertices().iter().enumerate() {
        let target = cell_holding_vertex(&cells, leaf)?;
        let path = graph
            .tree_path(start, target)
            .ok_or_else(|| Error::Internal("incidence tree is not connected".into()))?;
        let mut polyline = vec![center.clone()];
        for node in path {
            if node >= graph.piece_count {
                let p = &graph.contacts[node - graph.piece_count].point;
                if p != &center {
                    polyline.push(p.clone());
                }
            }
        }
        polyline.push(leaf.clone());
        let collinear = polyline[1..polyline.len() - 1]
            .iter()
            .all(|p| orient(&center, leaf, p) == Turn::Collinear);
        arcs.push(MainArc { vertex: t, leaf: leaf.clone(), polyline, collinear });
    }
    Ok(MainTree {
        center,
        arcs,
        depth,
        dihedral_declared: setting.group.spec().dihedral,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PointClass {
    EndPoint,
    CutPoint,
    RamificationPoint,
}

#[derive(Clone, Debug)]
pub enum Provenance {
    PolygonVertex { vertex: usize },
    CenterImage { index: MultiIndex },
    ContactImage { index: MultiIndex, base: Scalar },
}

#[derive(Clone, Debug)]
pub struct PointClassification {
    pub point: Scalar,
    pub class: PointClass,
    pub order: u32,
    pub provenance: Provenance,
}

impl PointClassification {
    pub fn provenance_label(&self, map_count: usize) -> String {
        match &self.provenance {
            Provenance::PolygonVertex { vertex } => format!("vertex {}", vertex + 1),
            Provenance::CenterImage { index } => {
                format!("center image [{}]", format_index(index, map_count))
            }
            Provenance::ContactImage { index, base } => {
                format!("contact {} image [{}]", base, format_index(index, map_count))
            }
        }
    }
}

fn words_up_to(system: &PolygonalSystem, depth: u32) -> Vec<(MultiIndex, Similarity)> {
    let mut out = vec![(MultiIndex::new(), Similarity::identity(system.field_order()))];
    let mut frontier = out.clone();
    for _ in 0..depth {
        let mut next = Vec::with_capacity(frontier.len() * system.map_count());
        for (w, map) in &frontier {
            for (i, s) in system.maps().iter().enumerate() {
                let mut wi = w.clone();
                wi.push(i);
                next.push((wi, map.compose(s)));
            }
        }
        out.extend(next.iter().cloned());
        frontier = next;
    }
    out
}

/// Classify center images, contact-point images and polygon vertices visible
/// at cell depth <= depth.
pub fn classify_points(system: &PolygonalSystem, depth: u32) -> Result<Vec<PointClassification>> {
    let setting = symmetric_setting(system)?;
    let n = system.base().len() as u32;
    let bound = ramification_bound(n);
    let contacts: Vec<ContactPoint> = crate::system::contact_points(system)?;
    for c in &contacts {
        if c.pieces.len() as u32 > bound {
            return Err(Error::Internal(format!(
                "contact point {} has {} incident pieces, above the order bound {}",
                c.point,
                c.pieces.len(),
                bound
            )));
        }
        if n >= 6 && c.pieces.len() >= 3 {
            return Err(Error::Internal(format!(
                "ramification away from center images is impossible for n = {n}"
            )));
        }
    }

    let center = &setting.regular.center;
    let mut classified: BTreeMap<crate::scalar::ScalarKey, PointClassification> = BTreeMap::new();

    // Center images at words of length <= depth: order n ramification points.
    for (w, map) in words_up_to(system, depth) {
        let p = map.apply(center);
        classified
            .entry(p.key())
            .or_insert_with(|| PointClassification {
                point: p,
                class: PointClass::RamificationPoint,
                order: n,
                provenance: Provenance::CenterImage { index: w.clone() },
            });
    }

    // Contact-point images at words of length <= depth-1: order = piece count.
    if depth >= 1 {
        for (w, map) in words_up_to(system, depth - 1) {
            for c in &contacts {
                let p = map.apply(&c.point);
                let s = c.pieces.len() as u32;
                let entry = classified.entry(p.key());
                match entry {
                    std::collections::btree_map::Entry::Occupied(e) => {
                        // A center image can coincide with a contact image
                        // only in the vertex-center case, where orders agree.
                        if e.get().order != s && e.get().order != n {
                            return Err(Error::Internal(format!(
                                "conflicting orders at {}",
                                e.get().point
                            )));
                        }
                    }
                    std::collections::btree_map::Entry::Vacant(v) => {
                        v.insert(PointClassification {
                            point: p,
                            class: if s >= 3 {
                                PointClass::RamificationPoint
                            } else {
                                PointClass::CutPoint
                            },
                            order: s,
                            provenance: Provenance::ContactImage {
                                index: w.clone(),
                                base: c.point.clone(),
                            },
                        });
                    }
                }
            }
        }
    }

    // Polygon vertices are end points and never collide with the above.
    for (t, v) in system.base().vertices().iter().enumerate() {
        let prior = classified.insert(
            v.key(),
            PointClassification {
                point: v.clone(),
                class: PointClass::EndPoint,
                order: 1,
                provenance: Provenance::PolygonVertex { vertex: t },
            },
        );
        if prior.is_some() {
            return Err(Error::Internal(format!(
                "polygon vertex {v} classified as an interior point"
            )));
        }
    }

    Ok(classified.into_values().collect())
}
