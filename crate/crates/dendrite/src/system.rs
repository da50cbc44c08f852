//! Polygonal systems of contraction similarities and the four defining
//! conditions: piece containment (D1), pairwise contacts that are single
//! common vertices (D2), vertex coverage (D3) and contractibility of the
//! union (D4).
//!
//! D4 is decided on the bipartite incidence graph of pieces and contact
//! points. Under D2 all pairwise intersections of the closed pieces are
//! single points, so the union deformation-retracts onto that graph and is
//! contractible exactly when the graph is a connected tree. D4 is only
//! evaluated once D2 holds.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use crate::error::{Error, Result};
use crate::geometry::{classify_intersection, ConvexPolygon, IntersectionClass, Similarity};
use crate::scalar::Scalar;
use crate::symmetry::GroupSpec;

/// A convex base polygon with an ordered family of contracting similarities.
#[derive(Clone, Debug)]
pub struct PolygonalSystem {
    base: ConvexPolygon,
    maps: Vec<Similarity>,
    images: Vec<ConvexPolygon>,
    group: Option<GroupSpec>,
    field_order: u32,
}

impl PolygonalSystem {
    pub fn new(
        base: ConvexPolygon,
        maps: Vec<Similarity>,
        group: Option<GroupSpec>,
        field_order: u32,
    ) -> Result<Self> {
        if maps.is_empty() {
            return Err(Error::FieldMismatch("system needs at least one map".into()));
        }
        for (k, m) in maps.iter().enumerate() {
            if !m.is_contraction() {
                return Err(Error::NotAContraction { index: k + 1 });
            }
        }
        let images = maps.iter().map(|m| base.apply(m)).collect();
        Ok(PolygonalSystem { base, maps, images, group, field_order })
    }

    pub fn base(&self) -> &ConvexPolygon {
        &self.base
    }

    pub fn maps(&self) -> &[Similarity] {
        &self.maps
    }

    pub fn map(&self, i: usize) -> &Similarity {
        &self.maps[i]
    }

    /// Image polygon of the base under map i (0-based).
    pub fn image(&self, i: usize) -> &ConvexPolygon {
        &self.images[i]
    }

    pub fn images(&self) -> &[ConvexPolygon] {
        &self.images
    }

    pub fn map_count(&self) -> usize {
        self.maps.len()
    }

    pub fn group(&self) -> Option<&GroupSpec> {
        self.group.as_ref()
    }

    pub fn field_order(&self) -> u32 {
        self.field_order
    }

    /// Same base and group declaration, different map family.
    pub fn with_maps(&self, maps: Vec<Similarity>) -> Result<Self> {
        PolygonalSystem::new(self.base.clone(), maps, self.group.clone(), self.field_order)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Witness {
    /// D1: image of the base under this map (1-based) leaves the base.
    PieceNotContained { map: usize },
    /// D2: pieces i and j (1-based) intersect in more than a common vertex.
    PairOverlap { i: usize, j: usize },
    /// D3: base vertex (1-based) is not the image of any vertex under any map.
    UncoveredVertex { vertex: usize },
    /// D4: cycle in the incidence graph, alternating pieces and contact points.
    Cycle { nodes: Vec<CycleNode> },
    /// D4: connected components of a disconnected incidence graph.
    Disconnected { components: Vec<Vec<CycleNode>> },
    /// Condition skipped because a prerequisite failed.
    NotEvaluated { reason: String },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CycleNode {
    Piece(usize),
    Point(Scalar),
}

#[derive(Clone, Debug)]
pub struct ConditionVerdict {
    pub pass: bool,
    pub witnesses: Vec<Witness>,
}

impl ConditionVerdict {
    fn pass() -> Self {
        ConditionVerdict { pass: true, witnesses: Vec::new() }
    }

    fn fail(witnesses: Vec<Witness>) -> Self {
        debug_assert!(!witnesses.is_empty(), "failing condition needs a witness");
        ConditionVerdict { pass: false, witnesses }
    }
}

/// Per-condition verdicts with witnesses.
#[derive(Clone, Debug)]
pub struct ValidationReport {
    pub d1: ConditionVerdict,
    pub d2: ConditionVerdict,
    pub d3: ConditionVerdict,
    pub d4: ConditionVerdict,
}

impl ValidationReport {
    pub fn all_pass(&self) -> bool {
        self.d1.pass && self.d2.pass && self.d3.pass && self.d4.pass
    }
}

/// Symmetric pairwise classification, diagonal excluded.
#[derive(Clone, Debug)]
pub struct IntersectionMatrix {
    m: usize,
    entries: Vec<IntersectionClass>, // row-major upper triangle, i < j
}

impl IntersectionMatrix {
    pub fn size(&self) -> usize {
        self.m
    }

    /// Entry for i != j (0-based).
    pub fn get(&self, i: usize, j: usize) -> &IntersectionClass {
        assert_ne!(i, j, "diagonal is excluded");
        let (i, j) = if i < j { (i, j) } else { (j, i) };
        &self.entries[i * self.m - i * (i + 1) / 2 + (j - i - 1)]
    }

    pub fn pairs(&self) -> impl Iterator<Item = (usize, usize, &IntersectionClass)> {
        let m = self.m;
        (0..m).flat_map(move |i| ((i + 1)..m).map(move |j| (i, j, self.get(i, j))))
    }

    pub fn count_single_common_vertex(&self) -> usize {
        self.pairs()
            .filter(|(_, _, c)| matches!(c, IntersectionClass::SingleCommonVertex(_)))
            .count()
    }

    pub fn count_disjoint(&self) -> usize {
        self.pairs()
            .filter(|(_, _, c)| matches!(c, IntersectionClass::Disjoint))
            .count()
    }
}

pub fn intersection_matrix(system: &PolygonalSystem) -> IntersectionMatrix {
    let m = system.map_count();
    let mut entries = Vec::with_capacity(m * (m - 1) / 2);
    for i in 0..m {
        for j in (i + 1)..m {
            entries.push(classify_intersection(system.image(i), system.image(j)));
        }
    }
    IntersectionMatrix { m, entries }
}

/// A point shared by at least two pieces, with its incident piece indices
/// (0-based, strictly increasing).
#[derive(Clone, Debug)]
pub struct ContactPoint {
    pub point: Scalar,
    pub pieces: Vec<usize>,
}

fn contacts_from_matrix(matrix: &IntersectionMatrix) -> Result<Vec<ContactPoint>> {
    let mut grouped: BTreeMap<_, (Scalar, BTreeSet<usize>)> = BTreeMap::new();
    for (i, j, class) in matrix.pairs() {
        match class {
            IntersectionClass::Disjoint => {}
            IntersectionClass::SingleCommonVertex(p) => {
                let entry = grouped
                    .entry(p.key())
                    .or_insert_with(|| (p.clone(), BTreeSet::new()));
                entry.1.insert(i);
                entry.1.insert(j);
            }
            IntersectionClass::Other => return Err(Error::ConditionViolated("D2")),
        }
    }
    Ok(grouped
        .into_values()
        .map(|(point, pieces)| ContactPoint { point, pieces: pieces.into_iter().collect() })
        .collect())
}

/// Contact points of the depth-1 pieces; requires D2.
pub fn contact_points(system: &PolygonalSystem) -> Result<Vec<ContactPoint>> {
    contacts_from_matrix(&intersection_matrix(system))
}

/// Bipartite graph of pieces and contact points.
#[derive(Clone, Debug)]
pub struct IncidenceGraph {
    pub piece_count: usize,
    pub contacts: Vec<ContactPoint>,
}

/// Node id: pieces are 0..piece_count, contacts follow.
pub type NodeId = usize;

#[derive(Clone, Debug)]
pub enum TreeCheck {
    Tree,
    Cycle(Vec<NodeId>),
    Disconnected(Vec<Vec<NodeId>>),
}

impl IncidenceGraph {
    pub fn from_contacts(piece_count: usize, contacts: Vec<ContactPoint>) -> Self {
        IncidenceGraph { piece_count, contacts }
    }

    /// Group the image vertex sets of cells: any point shared by two or more
    /// cells is a contact (every contact is a common image vertex once the
    /// single-common-vertex condition propagates).
    pub fn from_cell_polygons(cells: &[ConvexPolygon]) -> Self {
        let mut grouped: BTreeMap<_, (Scalar, BTreeSet<usize>)> = BTreeMap::new();
        for (i, poly) in cells.iter().enumerate() {
            for v in poly.vertices() {
                let entry = grouped
                    .entry(v.key())
                    .or_insert_with(|| (v.clone(), BTreeSet::new()));
                entry.1.insert(i);
            }
        }
        let contacts = grouped
            .into_values()
            .filter(|(_, pieces)| pieces.len() >= 2)
            .map(|(point, pieces)| ContactPoint { point, pieces: pieces.into_iter().collect() })
            .collect();
        IncidenceGraph { piece_count: cells.len(), contacts }
    }

    pub fn node_count(&self) -> usize {
        self.piece_count + self.contacts.len()
    }

    pub fn edge_count(&self) -> usize {
        self.contacts.iter().map(|c| c.pieces.len()).sum()
    }

    pub fn describe(&self, node: NodeId) -> CycleNode {
        if node < self.piece_count {
            CycleNode::Piece(node + 1)
        } else {
            CycleNode::Point(self.contacts[node - self.piece_count].point.clone())
        }
    }

    fn adjacency(&self) -> Vec<Vec<NodeId>> {
        let mut adj = vec![Vec::new(); self.node_count()];
        for (c, contact) in self.contacts.iter().enumerate() {
            let cn = self.piece_count + c;
            for &p in &contact.pieces {
                adj[p].push(cn);
                adj[cn].push(p);
            }
        }
        adj
    }

    /// Connectivity and acyclicity in one sweep, with explicit witnesses.
    pub fn check_tree(&self) -> TreeCheck {
        let n = self.node_count();
        if n == 0 {
            return TreeCheck::Tree;
        }
        let adj = self.adjacency();
        let mut parent: Vec<Option<NodeId>> = vec![None; n];
        let mut seen = vec![false; n];
        let mut components: Vec<Vec<NodeId>> = Vec::new();
        for root in 0..n {
            if seen[root] {
                continue;
            }
            let mut component = Vec::new();
            seen[root] = true;
            let mut queue = VecDeque::from([root]);
            while let Some(u) = queue.pop_front() {
                component.push(u);
                for &w in &adj[u] {
                    if !seen[w] {
                        seen[w] = true;
                        parent[w] = Some(u);
                        queue.push_back(w);
                    } else if parent[u] != Some(w) {
                        return TreeCheck::Cycle(extract_cycle(&parent, u, w));
                    }
                }
            }
            components.push(component);
        }
        if components.len() > 1 {
            TreeCheck::Disconnected(components)
        } else {
            TreeCheck::Tree
        }
    }

    /// Unique path between two nodes of a tree (BFS).
    pub fn tree_path(&self, from: NodeId, to: NodeId) -> Option<Vec<NodeId>> {
        let adj = self.adjacency();
        let mut parent: Vec<Option<NodeId>> = vec![None; self.node_count()];
        let mut seen = vec![false; self.node_count()];
        seen[from] = true;
        let mut queue = VecDeque::from([from]);
        while let Some(u) = queue.pop_front() {
            if u == to {
                let mut path = vec![to];
                let mut cur = to;
                while let Some(p) = parent[cur] {
                    path.push(p);
                    cur = p;
                }
                path.reverse();
                return Some(path);
            }
            for &w in &adj[u] {
                if !seen[w] {
                    seen[w] = true;
                    parent[w] = Some(u);
                    queue.push_back(w);
                }
            }
        }
        None
    }
}

/// Cycle through the tree edges to the lowest common ancestor plus the
/// closing edge u-w.
fn extract_cycle(parent: &[Option<NodeId>], u: NodeId, w: NodeId) -> Vec<NodeId> {
    let ancestors = |mut x: NodeId| {
        let mut chain = vec![x];
        while let Some(p) = parent[x] {
            chain.push(p);
            x = p;
        }
        chain
    };
    let au = ancestors(u);
    let aw = ancestors(w);
    let in_aw: BTreeSet<_> = aw.iter().copied().collect();
    let lca = *au.iter().find(|x| in_aw.contains(x)).expect("common root");
    let mut cycle: Vec<NodeId> = au.iter().copied().take_while(|&x| x != lca).collect();
    cycle.push(lca);
    let tail: Vec<NodeId> = aw.iter().copied().take_while(|&x| x != lca).collect();
    cycle.extend(tail.into_iter().rev());
    cycle
}

/// Decide the four conditions, with witnesses for every failure.
pub fn validate(system: &PolygonalSystem) -> ValidationReport {
    let m = system.map_count();

    let d1_failures: Vec<Witness> = (0..m)
        .filter(|&k| !system.base().contains_polygon(system.image(k)))
        .map(|k| Witness::PieceNotContained { map: k + 1 })
        .collect();
    let d1 = if d1_failures.is_empty() {
        ConditionVerdict::pass()
    } else {
        ConditionVerdict::fail(d1_failures)
    };

    let matrix = intersection_matrix(system);
    let d2_failures: Vec<Witness> = matrix
        .pairs()
        .filter(|(_, _, c)| matches!(c, IntersectionClass::Other))
        .map(|(i, j, _)| Witness::PairOverlap { i: i + 1, j: j + 1 })
        .collect();
    let d2_pass = d2_failures.is_empty();
    let d2 = if d2_pass {
        ConditionVerdict::pass()
    } else {
        ConditionVerdict::fail(d2_failures)
    };

    let d3_failures: Vec<Witness> = system
        .base()
        .vertices()
        .iter()
        .enumerate()
        .filter(|(_, a)| {
            !(0..m).any(|i| system.image(i).is_image_vertex(a).is_some())
        })
        .map(|(k, _)| Witness::UncoveredVertex { vertex: k + 1 })
        .collect();
    let d3 = if d3_failures.is_empty() {
        ConditionVerdict::pass()
    } else {
        ConditionVerdict::fail(d3_failures)
    };

    let d4 = if !d2_pass {
        ConditionVerdict::fail(vec![Witness::NotEvaluated {
            reason: "single-common-vertex condition failed".into(),
        }])
    } else {
        let contacts = contacts_from_matrix(&matrix).expect("D2 verified");
        let graph = IncidenceGraph::from_contacts(m, contacts);
        match graph.check_tree() {
            TreeCheck::Tree => ConditionVerdict::pass(),
            TreeCheck::Cycle(nodes) => ConditionVerdict::fail(vec![Witness::Cycle {
                nodes: nodes.into_iter().map(|n| graph.describe(n)).collect(),
            }]),
            TreeCheck::Disconnected(comps) => {
                ConditionVerdict::fail(vec![Witness::Disconnected {
                    components: comps
                        .into_iter()
                        .map(|comp| {
                            comp.into_iter()
                                .filter(|&n| n < graph.piece_count)
                                .map(|n| graph.describe(n))
                                .collect()
                        })
                        .collect(),
                }])
            }
        }
    };

    ValidationReport { d1, d2, d3, d4 }
}
