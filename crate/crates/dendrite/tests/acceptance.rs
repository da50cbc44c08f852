//! Acceptance suite: one test per criterion, each printing a PASS/FAIL line
//! (visible with --nocapture).

mod common;

use std::collections::BTreeMap;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use dendrite::attractor::approximate;
use dendrite::dimension::dimension_report;
use dendrite::scalar::Scalar;
use dendrite::symmetry::{check_symmetry, declared_group, iterate, twist, SymmetryOutcome};
use dendrite::system::{intersection_matrix, validate, CycleNode, Witness};
use dendrite::topology::{classify_points, main_tree, ramification_bound, PointClass};
use dendrite::zipper::{
    dendrite_criterion, extract_arc_zipper, jordan_check, segment_zipper, DendriteVerdict,
    JordanOptions, JordanVerdict,
};
use dendrite::Error;

fn criterion(n: u32, desc: &str, ok: bool, detail: &str) {
    let verdict = if ok { "PASS" } else { "FAIL" };
    if detail.is_empty() {
        println!("criterion {n:2}: {verdict} - {desc}");
    } else {
        println!("criterion {n:2}: {verdict} - {desc} ({detail})");
    }
    assert!(ok, "criterion {n} failed: {desc}: {detail}");
}

#[test]
fn criterion_01_vicsek_validates_quickly() {
    let system = common::load("vicsek.spec");
    let start = Instant::now();
    let report = validate(&system);
    let group = declared_group(&system).unwrap().unwrap();
    let symmetric = matches!(
        check_symmetry(&system, &group).unwrap(),
        SymmetryOutcome::Symmetric(_)
    );
    let elapsed = start.elapsed();
    let matrix = intersection_matrix(&system);
    let ok = report.all_pass()
        && symmetric
        && elapsed.as_secs_f64() < 1.0
        && matrix.count_single_common_vertex() == 4;
    criterion(
        1,
        "diagonal system passes D1-D4 and cyclic symmetry in under a second",
        ok,
        &format!(
            "elapsed {:?}, single-common-vertex pairs {}",
            elapsed,
            matrix.count_single_common_vertex()
        ),
    );
}

#[test]
fn criterion_02_gasket_fails_contractibility() {
    let system = common::load("gasket.spec");
    let report = validate(&system);
    let cycle_len = report.d4.witnesses.iter().find_map(|w| match w {
        Witness::Cycle { nodes } => Some(nodes.len()),
        _ => None,
    });
    let pieces_in_cycle = report.d4.witnesses.iter().find_map(|w| match w {
        Witness::Cycle { nodes } => Some(
            nodes
                .iter()
                .filter(|n| matches!(n, CycleNode::Piece(_)))
                .count(),
        ),
        _ => None,
    });
    let (code, _) = common::run_cli(&[
        "validate",
        common::spec_path("gasket.spec").to_str().unwrap(),
    ]);
    let ok = report.d1.pass
        && report.d2.pass
        && report.d3.pass
        && !report.d4.pass
        && cycle_len == Some(6)
        && pieces_in_cycle == Some(3)
        && code == 1;
    criterion(
        2,
        "triangle system fails D4 with a six-node incidence cycle and exit code 1",
        ok,
        &format!("cycle nodes {cycle_len:?}, exit code {code}"),
    );
}

#[test]
fn criterion_03_cell_sets_are_group_invariant_to_depth_six() {
    let system = common::load("vicsek.spec");
    let group = declared_group(&system).unwrap().unwrap();
    let mut ok = true;
    let mut detail = String::new();
    for depth in 1..=6u32 {
        let cells = approximate(&system, depth).unwrap();
        let reference: BTreeMap<_, usize> = dendrite::attractor::cell_multiset(&cells);
        for (gi, g) in group.elements().iter().enumerate() {
            let mut mapped: BTreeMap<_, usize> = BTreeMap::new();
            for cell in &cells.cells {
                *mapped.entry(cell.image.apply(g).key()).or_insert(0) += 1;
            }
            if mapped != reference {
                ok = false;
                detail = format!("depth {depth}, element {gi}");
            }
        }
    }
    criterion(
        3,
        "depth <= 6 cell multisets are setwise invariant under every group element",
        ok,
        &detail,
    );
}

#[test]
fn criterion_04_twists_produce_identical_cell_sets() {
    let system = common::load("vicsek.spec");
    let group = declared_group(&system).unwrap().unwrap();

    fn cell_bytes(system: &dendrite::system::PolygonalSystem) -> Vec<u8> {
        let mut out = Vec::new();
        for depth in 0..=5u32 {
            let cells = approximate(system, depth).unwrap();
            let mut keys: Vec<_> = cells.cells.iter().map(|c| c.image.key()).collect();
            keys.sort();
            out.extend_from_slice(format!("{keys:?}\n").as_bytes());
        }
        out
    }

    let reference = cell_bytes(&system);
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let mut ok = true;
    let mut detail = String::new();
    for variant in 0..20 {
        let picks: Vec<usize> = (0..system.map_count())
            .map(|_| rng.gen_range(0..group.size()))
            .collect();
        let twisted = twist(&system, &group, &picks).unwrap();
        if cell_bytes(&twisted) != reference {
            ok = false;
            detail = format!("variant {variant} with picks {picks:?} differs");
            break;
        }
    }
    criterion(
        4,
        "twenty random twists serialize to byte-identical depth <= 5 cell sets",
        ok,
        &detail,
    );
}

#[test]
fn criterion_05_main_tree_is_a_four_pod() {
    let system = common::load("vicsek.spec");
    let tree = main_tree(&system, 3).unwrap();
    let center_expected = Scalar::from_poly(
        4,
        vec![
            num_rational::BigRational::new(1.into(), 2.into()),
            num_rational::BigRational::new(1.into(), 2.into()),
        ],
    );
    let points = classify_points(&system, 3).unwrap();
    let endpoints: Vec<_> = points
        .iter()
        .filter(|p| p.class == PointClass::EndPoint)
        .collect();
    let vertex_endpoints = system
        .base()
        .vertices()
        .iter()
        .all(|v| endpoints.iter().any(|p| &p.point == v));
    let ok = tree.center == center_expected
        && tree.center_degree() == 4
        && tree.edge_count().is_multiple_of(4)
        && endpoints.len() == 4
        && vertex_endpoints;
    criterion(
        5,
        "main tree is a 4-pod about the square center with all vertices as end points",
        ok,
        &format!(
            "degree {}, edges {}, end points {}",
            tree.center_degree(),
            tree.edge_count(),
            endpoints.len()
        ),
    );
}

#[test]
fn criterion_06_ramification_bound_table() {
    let values: Vec<u32> = (3..=8).map(ramification_bound).collect();
    let ok = values == vec![5, 3, 3, 2, 2, 2];
    criterion(
        6,
        "vertex-type order bounds for n = 3..8 are 5, 3, 3, 2, 2, 2",
        ok,
        &format!("{values:?}"),
    );
}

#[test]
fn criterion_07_arc_zipper_is_a_straight_jordan_arc() {
    let system = common::load("vicsek.spec");
    let arc = extract_arc_zipper(&system, 2).unwrap();
    let center = Scalar::from_poly(
        4,
        vec![
            num_rational::BigRational::new(1.into(), 2.into()),
            num_rational::BigRational::new(1.into(), 2.into()),
        ],
    );
    let corner = Scalar::from_poly(
        4,
        vec![
            num_rational::BigRational::from_integer(1.into()),
            num_rational::BigRational::from_integer(1.into()),
        ],
    );
    let jordan = jordan_check(&arc.zipper, &JordanOptions::default());
    let dihedral = common::load("vicsek_dihedral.spec");
    let tree = main_tree(&dihedral, 6).unwrap();
    let all_collinear = tree.arcs.iter().all(|a| a.collinear);
    let ok = arc.zipper.map_count() == 3
        && arc.zipper.z0() == &center
        && arc.zipper.zm() == &corner
        && matches!(jordan, JordanVerdict::Jordan { .. })
        && tree.dihedral_declared
        && all_collinear;
    criterion(
        7,
        "arc zipper has three maps, verifies, is Jordan, and the depth-6 dihedral polylines are collinear",
        ok,
        &format!("maps {}, jordan {jordan:?}", arc.zipper.map_count()),
    );
}

#[test]
fn criterion_08_dimensions_match_closed_forms() {
    let system = common::load("vicsek.spec");
    let report = dimension_report(&system, 1e-12).unwrap();
    let expected = 5f64.ln() / 3f64.ln();
    let iterated = iterate(&system, 2).unwrap();
    let report2 = dimension_report(&iterated, 1e-12).unwrap();
    let ok = (report.dim_attractor - expected).abs() < 1e-9
        && (report.dim_main_tree - 1.0).abs() < 1e-9
        && report.strictly_smaller
        && !report.equal_within_tol
        && (report2.dim_attractor - expected).abs() < 2e-9
        && (report2.dim_main_tree - 1.0).abs() < 2e-9;
    criterion(
        8,
        "attractor dimension ln5/ln3 and main-tree dimension 1, strictly ordered, stable under iteration",
        ok,
        &format!(
            "dims {:.12} / {:.12}, iterated {:.12} / {:.12}",
            report.dim_attractor, report.dim_main_tree, report2.dim_attractor, report2.dim_main_tree
        ),
    );
}

/// All index subsets of size 1..=max of 0..n, in lexicographic order.
fn for_each_subset(n: usize, max: usize, f: &mut impl FnMut(&[usize])) {
    fn rec(n: usize, max: usize, start: usize, cur: &mut Vec<usize>, f: &mut impl FnMut(&[usize])) {
        if !cur.is_empty() {
            f(cur);
        }
        if cur.len() == max {
            return;
        }
        for next in start..n {
            cur.push(next);
            rec(n, max, next + 1, cur, f);
            cur.pop();
        }
    }
    let mut cur = Vec::new();
    rec(n, max, 0, &mut cur, f);
}

#[test]
fn criterion_09_segment_zipper_dichotomy() {
    let system = common::load("vicsek.spec");
    let group = declared_group(&system).unwrap().unwrap();

    // Diagonal selection: corner, center, far corner with identity elements.
    let diagonal = segment_zipper(&system, &group, 0, 2, &[(0, 0), (4, 0), (2, 0)]).unwrap();
    let graded = dendrite_criterion(&diagonal.zipper, &system, &JordanOptions::default());
    let part_a = graded == DendriteVerdict::JordanArc;

    // Exhaustive search over subsets of the augmented family (size <= 6) for
    // a chain connecting vertex 1 to vertex 2 (the bottom edge endpoints).
    let m = system.map_count();
    let gsize = group.size();
    let all_pairs: Vec<(usize, usize)> = (0..m)
        .flat_map(|i| (0..gsize).map(move |g| (i, g)))
        .collect();
    let mut successes: Vec<Vec<(usize, usize)>> = Vec::new();
    let mut non_polyline_failures = 0usize;
    for_each_subset(all_pairs.len(), 6, &mut |subset| {
        let selection: Vec<(usize, usize)> = subset.iter().map(|&k| all_pairs[k]).collect();
        match segment_zipper(&system, &group, 0, 1, &selection) {
            Ok(_) => successes.push(selection),
            Err(Error::PolylineBroken(_)) => {}
            Err(_) => non_polyline_failures += 1,
        }
    });

    let part_b = successes.is_empty() && non_polyline_failures == 0;
    let detail = if successes.is_empty() {
        format!("diagonal graded {graded:?}; no connecting selection found")
    } else {
        format!(
            "diagonal graded {graded:?}; {} connecting selections exist, e.g. {:?} \
             (map index, group element) chains (0,0) to (1,0) with cell-edge images",
            successes.len(),
            successes[0]
        )
    };
    criterion(
        9,
        "diagonal selection grades JordanArc and no selection chains (0,0) to (1,0)",
        part_a && part_b,
        &detail,
    );
}

#[test]
fn criterion_10_grid_search_recovers_the_system() {
    use dendrite::search::{search_grid_systems, GridTemplate};
    let start = Instant::now();
    let outcome = search_grid_systems(&GridTemplate::Square { k: 3 }, false, 4).unwrap();
    let elapsed = start.elapsed();
    let reference = common::load("vicsek.spec");
    let found_matches = outcome.systems.len() == 1 && {
        let a: std::collections::BTreeSet<String> =
            outcome.systems[0].maps().iter().map(|m| m.to_string()).collect();
        let b: std::collections::BTreeSet<String> =
            reference.maps().iter().map(|m| m.to_string()).collect();
        a == b
    };
    let ok = outcome.candidates == 8 && found_matches && elapsed.as_secs_f64() < 5.0;
    criterion(
        10,
        "3x3 orbit-subset search returns exactly the diagonal system in under five seconds",
        ok,
        &format!(
            "candidates {}, found {}, elapsed {:?}",
            outcome.candidates,
            outcome.systems.len(),
            elapsed
        ),
    );
}

#[test]
fn criterion_11_cli_output_is_byte_deterministic() {
    let vicsek = common::spec_path("vicsek.spec");
    let vicsek = vicsek.to_str().unwrap();
    let gasket = common::spec_path("gasket.spec");
    let gasket = gasket.to_str().unwrap();
    let commands: Vec<Vec<&str>> = vec![
        vec!["validate", vicsek],
        vec!["validate", gasket],
        vec!["analyze", vicsek, "--depth", "3"],
        vec!["render", vicsek, "--depth", "3"],
        vec!["render", vicsek, "--depth", "2", "--format", "json"],
        vec!["render", vicsek, "--depth", "2", "--fill-by-orbit"],
        vec!["render", vicsek, "--mode", "chaos", "--points", "1000"],
        vec!["zipper", vicsek, "--arc", "3"],
        vec!["zipper", vicsek, "--segment", "1", "3", "--select", "1:0,5:0,3:0"],
        vec!["dims", vicsek],
        vec!["search", "--grid", "square", "--k", "3", "--group", "cyclic", "--order", "4"],
    ];
    let mut ok = true;
    let mut detail = String::new();
    for cmd in &commands {
        let (code1, out1) = common::run_cli(cmd);
        let (code2, out2) = common::run_cli(cmd);
        if code1 != code2 || out1 != out2 {
            ok = false;
            detail = format!("command {cmd:?} is not deterministic");
            break;
        }
        if out1.is_empty() {
            ok = false;
            detail = format!("command {cmd:?} produced no output");
            break;
        }
    }
    criterion(
        11,
        "every command produces byte-identical output when run twice",
        ok,
        &detail,
    );
}
