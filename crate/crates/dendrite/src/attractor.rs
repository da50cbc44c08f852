//! Multiindexed cell approximations of the attractor.
//!
//! Iterating T(A) = union of the S_i(A) from the base polygon produces a
//! nested family of cell sets; the intersection over all depths is the
//! attractor. Cells carry their multiindex, composed map and exact image
//! polygon, which is all the downstream predicates need.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::geometry::{ConvexPolygon, Similarity};
use crate::scalar::Scalar;
use crate::system::PolygonalSystem;

/// Cell count cap; override with the DENDRITE_CELL_CAP environment variable.
pub fn cell_cap() -> u128 {
    std::env::var("DENDRITE_CELL_CAP")
        .ok()
        .and_then(|v| v.parse().ok())
        .unwrap_or(1_000_000)
}

/// Multiindex over the map alphabet, 0-based digits.
pub type MultiIndex = Vec<usize>;

/// Render a multiindex over the 1-based alphabet; single characters when the
/// alphabet fits in one digit, comma-separated otherwise.
pub fn format_index(index: &[usize], map_count: usize) -> String {
    if map_count <= 9 {
        index.iter().map(|d| (b'1' + *d as u8) as char).collect()
    } else {
        index
            .iter()
            .map(|d| (d + 1).to_string())
            .collect::<Vec<_>>()
            .join(",")
    }
}

#[derive(Clone, Debug)]
pub struct Cell {
    pub index: MultiIndex,
    pub map: Similarity,
    pub image: ConvexPolygon,
}

#[derive(Clone, Debug)]
pub struct CellSet {
    pub depth: u32,
    pub cells: Vec<Cell>,
}

impl CellSet {
    /// The depth-0 cell set: the base polygon under the identity.
    pub fn root(system: &PolygonalSystem) -> Self {
        CellSet {
            depth: 0,
            cells: vec![Cell {
                index: Vec::new(),
                map: Similarity::identity(system.field_order()),
                image: system.base().clone(),
            }],
        }
    }

    pub fn len(&self) -> usize {
        self.cells.len()
    }

    #[must_use]
    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    pub fn polygons(&self) -> Vec<ConvexPolygon> {
        self.cells.iter().map(|c| c.image.clone()).collect()
    }
}

/// One application of the Hutchinson operator at the cell level; children
/// appear in lexicographic multiindex order.
pub fn hutchinson_step(cells: &CellSet, system: &PolygonalSystem) -> Result<CellSet> {
    let m = system.map_count() as u128;
    let total = cells.cells.len() as u128 * m;
    if total > cell_cap() {
        return Err(Error::DepthCapExceeded { cells: total, cap: cell_cap() });
    }
    let mut out = Vec::with_capacity(total as usize);
    for cell in &cells.cells {
        for (i, s) in system.maps().iter().enumerate() {
            let map = cell.map.compose(s);
            let mut index = cell.index.clone();
            index.push(i);
            let image = system.base().apply(&map);
            out.push(Cell { index, map, image });
        }
    }
    Ok(CellSet { depth: cells.depth + 1, cells: out })
}

/// Depth-k cell approximation of the attractor.
pub fn approximate(system: &PolygonalSystem, depth: u32) -> Result<CellSet> {
    let mut cells = CellSet::root(system);
    for _ in 0..depth {
        cells = hutchinson_step(&cells, system)?;
    }
    Ok(cells)
}

/// Number of depth-1 pieces whose image vertex set contains x, with the
/// (map, vertex) witnesses (0-based).
pub fn preimage_count(
    system: &PolygonalSystem,
    x: &Scalar,
) -> Result<(usize, Vec<(usize, usize)>)> {
    let mut witnesses = Vec::new();
    for i in 0..system.map_count() {
        if let Some(v) = system.image(i).is_image_vertex(x) {
            witnesses.push((i, v));
        }
    }
    if witnesses.is_empty() {
        return Err(Error::NotACellVertex);
    }
    Ok((witnesses.len(), witnesses))
}

/// Canonical multiset of image polygons; equal iff the cell sets coincide.
pub fn cell_multiset(cells: &CellSet) -> BTreeMap<crate::geometry::PolygonKey, usize> {
    let mut out = BTreeMap::new();
    for c in &cells.cells {
        *out.entry(c.image.key()).or_insert(0) += 1;
    }
    out
}
