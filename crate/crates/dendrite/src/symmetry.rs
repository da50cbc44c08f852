//! Declared symmetry groups of the base polygon, the exact symmetry check
//! g * S_i = S_j * g', and the derived system constructions (augmented,
//! iterated and twisted families).

use std::collections::VecDeque;

use crate::attractor::cell_cap;
use crate::error::{Error, Result};
use crate::geometry::Similarity;
use crate::scalar::Scalar;
use crate::system::PolygonalSystem;

/// Parsed group declaration from a system file.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupSpec {
    pub dihedral: bool,
    pub n: u32,
    pub center: Scalar,
    /// Mirror axis index: axis through the center at angle axis*pi/n.
    pub axis: u32,
}

/// Materialized group: elements stored as unit-ratio similarities.
#[derive(Clone, Debug)]
pub struct SymmetryGroup {
    spec: GroupSpec,
    elements: Vec<Similarity>,
}

impl SymmetryGroup {
    /// Build the n rotations (and n reflections when dihedral) about the
    /// declared center. The field must contain the rotation coefficients.
    pub fn from_spec(spec: &GroupSpec, field_order: u32) -> Result<Self> {
        let n = spec.n;
        if n == 0 || (!spec.dihedral && n < 2) {
            return Err(Error::FieldMismatch(
                "symmetry group must be non-trivial".into(),
            ));
        }
        if !field_order.is_multiple_of(n) {
            return Err(Error::FieldMismatch(format!(
                "field order {field_order} is not a multiple of the group order {n}"
            )));
        }
        if spec.dihedral && !field_order.is_multiple_of(4) {
            return Err(Error::FieldMismatch(format!(
                "mirror maps require a field order divisible by 4, got {field_order}"
            )));
        }
        let step = (field_order / n) as i64;
        let mut elements = Vec::with_capacity(if spec.dihedral { 2 * n } else { n } as usize);
        for k in 0..n as i64 {
            elements.push(Similarity::rotation(
                &spec.center,
                Scalar::zeta_pow(field_order, step * k),
            ));
        }
        if spec.dihedral {
            for k in 0..n as i64 {
                elements.push(Similarity::reflection(
                    &spec.center,
                    Scalar::zeta_pow(field_order, step * k),
                ));
            }
        }
        Ok(SymmetryGroup { spec: spec.clone(), elements })
    }

    pub fn spec(&self) -> &GroupSpec {
        &self.spec
    }

    pub fn elements(&self) -> &[Similarity] {
        &self.elements
    }

    pub fn size(&self) -> usize {
        self.elements.len()
    }

    pub fn center(&self) -> &Scalar {
        &self.spec.center
    }

    pub fn identity_index(&self) -> usize {
        0
    }

    /// Rotation by one step (2*pi/n) about the center.
    pub fn one_step_rotation(&self) -> &Similarity {
        &self.elements[1 % self.elements.len()]
    }

    /// Indices of a generating set: the one-step rotation, plus the declared
    /// axis reflection for dihedral groups.
    pub fn generator_indices(&self) -> Vec<usize> {
        let n = self.spec.n as usize;
        let mut gens = Vec::new();
        if n >= 2 {
            gens.push(1);
        }
        if self.spec.dihedral {
            gens.push(n + (self.spec.axis as usize % n));
        }
        gens
    }

    pub fn element_name(&self, idx: usize) -> String {
        let n = self.spec.n as usize;
        if idx < n {
            format!("r{idx}")
        } else {
            format!("m{}", idx - n)
        }
    }

    pub fn find(&self, map: &Similarity) -> Option<usize> {
        self.elements.iter().position(|e| e == map)
    }

    /// Index of the product g * h.
    pub fn compose_index(&self, g: usize, h: usize) -> usize {
        self.find(&self.elements[g].compose(&self.elements[h]))
            .expect("group is closed under composition")
    }
}

/// For each (element, map): the pair (j, g') with g * S_i = S_j * g'.
#[derive(Clone, Debug)]
pub struct SymmetryAction {
    /// table[g][i] = (j, g_prime)
    pub table: Vec<Vec<(usize, usize)>>,
}

impl SymmetryAction {
    /// The permutation i -> j induced by element g.
    pub fn permutation(&self, g: usize) -> Vec<usize> {
        self.table[g].iter().map(|&(j, _)| j).collect()
    }

    /// Exhaustive re-check of the defining identity over every group element.
    pub fn verify(&self, system: &PolygonalSystem, group: &SymmetryGroup) -> bool {
        self.table.iter().enumerate().all(|(g, row)| {
            row.iter().enumerate().all(|(i, &(j, gp))| {
                group.elements()[g].compose(system.map(i))
                    == system.map(j).compose(&group.elements()[gp])
            })
        })
    }
}

#[derive(Clone, Debug)]
pub enum SymmetryOutcome {
    Symmetric(SymmetryAction),
    /// The failing (generator element index, map index, both 0-based).
    Counterexample { generator: usize, map: usize },
}

fn solve_pair(
    system: &PolygonalSystem,
    group: &SymmetryGroup,
    g: usize,
    i: usize,
) -> Option<(usize, usize)> {
    let lhs = group.elements()[g].compose(system.map(i));
    for j in 0..system.map_count() {
        for (gp, e) in group.elements().iter().enumerate() {
            if system.map(j).compose(e) == lhs {
                return Some((j, gp));
            }
        }
    }
    None
}

/// Decide the symmetry condition.
///
/// Every element must fix the base polygon setwise; the defining identity is
/// verified on generators and extended to the whole group by composing
/// action rows, which keeps the search linear in the generator count.
pub fn check_symmetry(
    system: &PolygonalSystem,
    group: &SymmetryGroup,
) -> Result<SymmetryOutcome> {
    let base_key = system.base().key();
    for (idx, g) in group.elements().iter().enumerate() {
        if system.base().apply(g).key() != base_key {
            return Err(Error::GroupDoesNotFixPolygon { element: idx });
        }
    }

    let m = system.map_count();
    let size = group.size();
    let mut table: Vec<Option<Vec<(usize, usize)>>> = vec![None; size];
    table[group.identity_index()] =
        Some((0..m).map(|i| (i, group.identity_index())).collect());

    let generators = group.generator_indices();
    let mut gen_rows: Vec<Vec<(usize, usize)>> = Vec::new();
    for &g in &generators {
        let mut row = Vec::with_capacity(m);
        for i in 0..m {
            match solve_pair(system, group, g, i) {
                Some(pair) => row.push(pair),
                None => return Ok(SymmetryOutcome::Counterexample { generator: g, map: i }),
            }
        }
        gen_rows.push(row);
    }

    // Extend over the group: the row of g*h composes the rows of g and h.
    let mut queue: VecDeque<usize> = VecDeque::from([group.identity_index()]);
    while let Some(h) = queue.pop_front() {
        for (gi, &g) in generators.iter().enumerate() {
            let f = group.compose_index(g, h);
            if table[f].is_some() {
                continue;
            }
            let row_h = table[h].clone().expect("visited");
            let row_g = &gen_rows[gi];
            let row_f = (0..m)
                .map(|i| {
                    let (j, e1) = row_h[i];
                    let (k, e2) = row_g[j];
                    (k, group.compose_index(e2, e1))
                })
                .collect();
            table[f] = Some(row_f);
            queue.push_back(f);
        }
        if table.iter().all(Option::is_some) {
            break;
        }
    }

    let table: Vec<Vec<(usize, usize)>> = table
        .into_iter()
        .collect::<Option<Vec<_>>>()
        .ok_or_else(|| Error::Internal("generators do not generate the group".into()))?;
    let action = SymmetryAction { table };
    debug_assert!(action.verify(system, group));
    Ok(SymmetryOutcome::Symmetric(action))
}

/// Materialize the declared group of a system.
pub fn declared_group(system: &PolygonalSystem) -> Result<Option<SymmetryGroup>> {
    match system.group() {
        None => Ok(None),
        Some(spec) => Ok(Some(SymmetryGroup::from_spec(spec, system.field_order())?)),
    }
}

fn require_symmetric(system: &PolygonalSystem, group: &SymmetryGroup) -> Result<()> {
    match check_symmetry(system, group)? {
        SymmetryOutcome::Symmetric(_) => Ok(()),
        SymmetryOutcome::Counterexample { .. } => Err(Error::SymmetryRequired),
    }
}

/// The family {S_i * g} over all maps and group elements; same attractor.
pub fn augment(system: &PolygonalSystem, group: &SymmetryGroup) -> Result<PolygonalSystem> {
    require_symmetric(system, group)?;
    let mut maps = Vec::with_capacity(system.map_count() * group.size());
    for i in 0..system.map_count() {
        for g in group.elements() {
            maps.push(system.map(i).compose(g));
        }
    }
    system.with_maps(maps)
}

/// All length-k compositions, in lexicographic multiindex order.
pub fn iterate(system: &PolygonalSystem, k: u32) -> Result<PolygonalSystem> {
    assert!(k >= 1, "iteration depth must be positive");
    let m = system.map_count() as u128;
    let total = m.checked_pow(k).ok_or(Error::DepthCapExceeded {
        cells: u128::MAX,
        cap: cell_cap(),
    })?;
    if total > cell_cap() {
        return Err(Error::DepthCapExceeded { cells: total, cap: cell_cap() });
    }
    let mut maps: Vec<Similarity> = vec![Similarity::identity(system.field_order())];
    for _ in 0..k {
        let mut next = Vec::with_capacity(maps.len() * system.map_count());
        for w in &maps {
            for s in system.maps() {
                next.push(w.compose(s));
            }
        }
        maps = next;
    }
    system.with_maps(maps)
}

/// The family {S_i * g_i} for one pick per map; same attractor.
pub fn twist(
    system: &PolygonalSystem,
    group: &SymmetryGroup,
    picks: &[usize],
) -> Result<PolygonalSystem> {
    assert_eq!(picks.len(), system.map_count(), "one pick per map");
    require_symmetric(system, group)?;
    let maps = picks
        .iter()
        .enumerate()
        .map(|(i, &g)| system.map(i).compose(&group.elements()[g]))
        .collect();
    system.with_maps(maps)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use std::collections::BTreeSet;

    fn cell_keys(system: &PolygonalSystem) -> BTreeSet<crate::geometry::PolygonKey> {
        system.images().iter().map(|p| p.key()).collect()
    }

    #[test]
    fn vicsek_cyclic_symmetry_action() {
        let system = fixtures::vicsek();
        let group = declared_group(&system).unwrap().unwrap();
        assert_eq!(group.size(), 4);
        let action = match check_symmetry(&system, &group).unwrap() {
            SymmetryOutcome::Symmetric(a) => a,
            other => panic!("expected symmetric, got {other:?}"),
        };
        // One rotation step cycles the corner maps 0 -> 1 -> 2 -> 3 and fixes
        // the center map; the correction element equals the generator.
        let perm = action.permutation(1);
        assert_eq!(perm, vec![1, 2, 3, 0, 4]);
        for i in 0..5 {
            assert_eq!(action.table[1][i].1, 1);
        }
        assert!(action.verify(&system, &group));
    }

    #[test]
    fn vicsek_dihedral_symmetry() {
        let system = fixtures::vicsek_dihedral();
        let group = declared_group(&system).unwrap().unwrap();
        assert_eq!(group.size(), 8);
        match check_symmetry(&system, &group).unwrap() {
            SymmetryOutcome::Symmetric(a) => assert!(a.verify(&system, &group)),
            other => panic!("expected symmetric, got {other:?}"),
        }
    }

    #[test]
    fn diagonal_chain_is_not_symmetric() {
        let system = fixtures::diagonal_chain();
        let group = declared_group(&system).unwrap().unwrap();
        match check_symmetry(&system, &group).unwrap() {
            SymmetryOutcome::Counterexample { generator, map } => {
                assert_eq!(generator, 1);
                // The rotated image of the corner cell is not in the system.
                assert!(map == 0 || map == 2);
            }
            other => panic!("expected counterexample, got {other:?}"),
        }
    }

    #[test]
    fn group_must_fix_polygon() {
        let system = fixtures::vicsek();
        // Cyclic group about the wrong center.
        let bad = SymmetryGroup::from_spec(
            &GroupSpec {
                dihedral: false,
                n: 4,
                center: fixtures::point4((1, 4), (1, 4)),
                axis: 0,
            },
            4,
        )
        .unwrap();
        assert!(matches!(
            check_symmetry(&system, &bad),
            Err(Error::GroupDoesNotFixPolygon { .. })
        ));
    }

    #[test]
    fn augmented_system_has_same_depth_one_cells() {
        let system = fixtures::vicsek();
        let group = declared_group(&system).unwrap().unwrap();
        let augmented = augment(&system, &group).unwrap();
        assert_eq!(augmented.map_count(), 20);
        assert_eq!(cell_keys(&augmented), cell_keys(&system));
    }

    #[test]
    fn gasket_augment_three_distinct_cells() {
        let system = fixtures::gasket();
        let group = declared_group(&system).unwrap().unwrap();
        let augmented = augment(&system, &group).unwrap();
        assert_eq!(augmented.map_count(), 9);
        assert_eq!(cell_keys(&augmented).len(), 3);
    }

    #[test]
    fn iteration_squares_the_family() {
        let system = fixtures::vicsek();
        let it2 = iterate(&system, 2).unwrap();
        assert_eq!(it2.map_count(), 25);
        let ninth = Scalar::from_rational(4, num_rational::BigRational::new(1.into(), 9.into()));
        for m in it2.maps() {
            assert_eq!(m.ratio_sq(), &ninth * &ninth);
        }
        // Symmetry survives iteration.
        let group = declared_group(&it2).unwrap().unwrap();
        assert!(matches!(
            check_symmetry(&it2, &group).unwrap(),
            SymmetryOutcome::Symmetric(_)
        ));
    }

    #[test]
    fn single_iteration_is_identity() {
        let system = fixtures::vicsek();
        let it1 = iterate(&system, 1).unwrap();
        assert_eq!(it1.maps(), system.maps());
    }

    #[test]
    fn twisted_gasket_keeps_depth_two_cells() {
        // The triangle system is symmetric even though its union is not
        // contractible; twisting still reproduces the cell sets.
        let system = fixtures::gasket();
        let group = declared_group(&system).unwrap().unwrap();
        let twisted = twist(&system, &group, &[1, 2, 0]).unwrap();
        let a = crate::attractor::approximate(&system, 2).unwrap();
        let b = crate::attractor::approximate(&twisted, 2).unwrap();
        assert_eq!(
            crate::attractor::cell_multiset(&a),
            crate::attractor::cell_multiset(&b)
        );
    }

    #[test]
    fn twist_preserves_depth_one_cells() {
        let system = fixtures::vicsek();
        let group = declared_group(&system).unwrap().unwrap();
        let identity = twist(&system, &group, &[0; 5]).unwrap();
        assert_eq!(identity.maps(), system.maps());
        let twisted = twist(&system, &group, &[1, 2, 3, 0, 1]).unwrap();
        assert_ne!(twisted.maps(), system.maps());
        assert_eq!(cell_keys(&twisted), cell_keys(&system));
    }

    #[test]
    fn cocycle_consistency_of_action_rows() {
        let system = fixtures::vicsek_dihedral();
        let group = declared_group(&system).unwrap().unwrap();
        let action = match check_symmetry(&system, &group).unwrap() {
            SymmetryOutcome::Symmetric(a) => a,
            _ => unreachable!(),
        };
        // For any two elements, the row of g*h composes the rows.
        for g in 0..group.size() {
            for h in 0..group.size() {
                let f = group.compose_index(g, h);
                for i in 0..system.map_count() {
                    let (j, e1) = action.table[h][i];
                    let (k, e2) = action.table[g][j];
                    assert_eq!(action.table[f][i], (k, group.compose_index(e2, e1)));
                }
            }
        }
    }
}
