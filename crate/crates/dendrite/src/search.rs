//! Exhaustive instance search over grid-subdivision candidate families.
//!
//! A template enumerates the cells of a k-by-k subdivision of a reference
//! polygon together with the natural homothety (or point reflection) onto
//! each cell. Candidate systems are the unions of whole group orbits of
//! cells; the validator and the symmetry check act as the oracle.

use num_rational::BigRational;

use crate::error::{Error, Result};
use crate::geometry::{ConvexPolygon, PolygonKey, Similarity};
use crate::scalar::Scalar;
use crate::symmetry::{check_symmetry, GroupSpec, SymmetryGroup, SymmetryOutcome};
use crate::system::{validate, PolygonalSystem};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GridTemplate {
    /// Unit square cut into k*k axis-aligned cells.
    Square { k: u32 },
    /// Equilateral triangle cut into k^2 triangles (upright and inverted).
    Triangle { k: u32 },
}

#[derive(Clone, Debug)]
pub struct SearchOutcome {
    pub orbit_count: usize,
    /// Number of orbit subsets examined (2^orbit_count, empty set included).
    pub candidates: usize,
    pub systems: Vec<PolygonalSystem>,
}

fn q(n: i64, d: i64) -> BigRational {
    BigRational::new(n.into(), d.into())
}

fn square_base(order: u32) -> ConvexPolygon {
    let i = Scalar::unit_imag(order).expect("order divisible by 4");
    let one = Scalar::one(order);
    ConvexPolygon::new(vec![
        Scalar::zero(order),
        one.clone(),
        &one + &i,
        i,
    ])
    .expect("unit square is strictly convex")
}

fn triangle_base(order: u32) -> ConvexPolygon {
    let step = (order / 3) as i64;
    ConvexPolygon::new(vec![
        Scalar::one(order),
        Scalar::zeta_pow(order, step),
        Scalar::zeta_pow(order, 2 * step),
    ])
    .expect("triangle is strictly convex")
}

/// The base polygon, candidate cell maps and group center of a template.
fn template_parts(
    template: &GridTemplate,
    dihedral: bool,
) -> Result<(u32, ConvexPolygon, Vec<Similarity>, Scalar)> {
    match *template {
        GridTemplate::Square { k } => {
            let order = 4;
            let base = square_base(order);
            let mut maps = Vec::new();
            if k > 0 {
                let kk = k as i64;
                let ratio = Scalar::from_rational(order, q(1, kk));
                for y in 0..kk {
                    for x in 0..kk {
                        let b = Scalar::from_poly(order, vec![q(x, kk), q(y, kk)]);
                        maps.push(Similarity::new(ratio.clone(), b, false));
                    }
                }
            }
            let center = Scalar::from_poly(order, vec![q(1, 2), q(1, 2)]);
            Ok((order, base, maps, center))
        }
        GridTemplate::Triangle { k } if k == 0 => {
            let order = if dihedral { 12 } else { 3 };
            let base = triangle_base(order);
            Ok((order, base, Vec::new(), Scalar::zero(order)))
        }
        GridTemplate::Triangle { k } => {
            let order = if dihedral { 12 } else { 3 };
            let base = triangle_base(order);
            let kk = k as i64;
            let a = base.vertices()[0].clone();
            let u = &base.vertices()[1] - &a;
            let v = &base.vertices()[2] - &a;
            let ratio = Scalar::from_rational(order, q(1, kk));
            let neg_ratio = -&ratio;
            let mut maps = Vec::new();
            for i in 0..kk {
                for j in 0..kk - i {
                    // Upright cell at barycentric position (i, j).
                    let b = &a.scale(&q(kk - 1, kk))
                        + &(&u.scale(&q(i, kk)) + &v.scale(&q(j, kk)));
                    maps.push(Similarity::new(ratio.clone(), b, false));
                }
            }
            for i in 0..kk {
                for j in 0..kk - 1 - i {
                    // Inverted cell: point reflection onto the hole at (i, j).
                    let b = &a.scale(&q(kk + 1, kk))
                        + &(&u.scale(&q(i + 1, kk)) + &v.scale(&q(j + 1, kk)));
                    maps.push(Similarity::new(neg_ratio.clone(), b, false));
                }
            }
            Ok((order, base, maps, Scalar::zero(order)))
        }
    }
}

/// Partition candidate cells into group orbits by exact image matching.
fn orbit_partition(
    base: &ConvexPolygon,
    maps: &[Similarity],
    group: &SymmetryGroup,
) -> Result<Vec<Vec<usize>>> {
    let keys: Vec<PolygonKey> = maps.iter().map(|m| base.apply(m).key()).collect();
    let index_of = |key: &PolygonKey| keys.iter().position(|k| k == key);
    let mut orbit_of: Vec<Option<usize>> = vec![None; maps.len()];
    let mut orbits: Vec<Vec<usize>> = Vec::new();
    for start in 0..maps.len() {
        if orbit_of[start].is_some() {
            continue;
        }
        let orbit_id = orbits.len();
        let mut members = vec![start];
        orbit_of[start] = Some(orbit_id);
        let mut frontier = vec![start];
        while let Some(cell) = frontier.pop() {
            for g in group.elements() {
                let image_key = base.apply(&maps[cell]).apply(g).key();
                let target = index_of(&image_key).ok_or_else(|| {
                    Error::InvalidSelection(
                        "the group does not map grid cells onto grid cells".into(),
                    )
                })?;
                if orbit_of[target].is_none() {
                    orbit_of[target] = Some(orbit_id);
                    members.push(target);
                    frontier.push(target);
                }
            }
        }
        members.sort_unstable();
        orbits.push(members);
    }
    Ok(orbits)
}

/// Validate every union of whole orbits; returns the systems that pass all
/// four conditions and the symmetry check.
pub fn search_grid_systems(
    template: &GridTemplate,
    dihedral: bool,
    group_order: u32,
) -> Result<SearchOutcome> {
    let (field_order, base, candidate_maps, center) = template_parts(template, dihedral)?;
    let spec = GroupSpec { dihedral, n: group_order, center, axis: 0 };
    let group = SymmetryGroup::from_spec(&spec, field_order)?;
    let orbits = orbit_partition(&base, &candidate_maps, &group)?;
    let orbit_count = orbits.len();
    if orbit_count > 20 {
        return Err(Error::InvalidSelection(format!(
            "{orbit_count} orbits make the subset search infeasible"
        )));
    }

    let mut systems = Vec::new();
    let candidates = 1usize << orbit_count;
    for mask in 0..candidates {
        let mut selected: Vec<usize> = Vec::new();
        for (o, members) in orbits.iter().enumerate() {
            if mask & (1 << o) != 0 {
                selected.extend(members.iter().copied());
            }
        }
        if selected.is_empty() {
            continue;
        }
        selected.sort_unstable();
        let maps: Vec<Similarity> = selected.iter().map(|&c| candidate_maps[c].clone()).collect();
        let Ok(system) = PolygonalSystem::new(base.clone(), maps, Some(spec.clone()), field_order)
        else {
            continue;
        };
        if !validate(&system).all_pass() {
            continue;
        }
        if let Ok(SymmetryOutcome::Symmetric(_)) = check_symmetry(&system, &group) { systems.push(system) }
    }
    Ok(SearchOutcome { orbit_count, candidates, systems })
}
