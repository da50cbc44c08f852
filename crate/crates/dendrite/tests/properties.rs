//! Property-based invariants over random exact inputs.

mod common;

use num_rational::BigRational;
use proptest::prelude::*;

use dendrite::dimension::{moran_residual, similarity_dimension, MoranInstance};
use dendrite::geometry::{classify_intersection, ConvexPolygon, IntersectionClass, Similarity};
use dendrite::scalar::Scalar;
use dendrite::system::validate;
use dendrite::zipper::verify_zipper;

fn q(n: i64, d: i64) -> BigRational {
    BigRational::new(n.into(), d.into())
}

fn scalar((rn, rd, in_, id): (i64, i64, i64, i64)) -> Scalar {
    Scalar::from_poly(4, vec![q(rn, rd), q(in_, id)])
}

prop_compose! {
    fn small_rational()(n in -6i64..=6, d in 1i64..=4) -> (i64, i64) {
        (n, d)
    }
}

prop_compose! {
    fn point()(re in small_rational(), im in small_rational()) -> Scalar {
        scalar((re.0, re.1, im.0, im.1))
    }
}

prop_compose! {
    fn similarity()(
        an in 1i64..=3,
        ad in 2i64..=5,
        rot in 0i64..=3,
        b in point(),
        mirror in any::<bool>(),
    ) -> Similarity {
        // a = (an/ad) * i^rot, nonzero, |a| < 1 when an < ad.
        let a = Scalar::from_rational(4, q(an, ad + an));
        let a = &a * &Scalar::zeta_pow(4, rot);
        Similarity::new(a, b, mirror)
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn composition_is_associative_and_compatible(
        f in similarity(),
        g in similarity(),
        h in similarity(),
        p in point(),
    ) {
        prop_assert_eq!(f.compose(&g).compose(&h), f.compose(&g.compose(&h)));
        prop_assert_eq!(f.compose(&g).apply(&p), f.apply(&g.apply(&p)));
        // Ratios multiply.
        prop_assert_eq!(f.compose(&g).ratio_sq(), &f.ratio_sq() * &g.ratio_sq());
    }

    #[test]
    fn intersection_classification_is_symmetric_and_similarity_invariant(
        x1 in 0i64..3, y1 in 0i64..3, x2 in 0i64..3, y2 in 0i64..3,
        map in similarity(),
    ) {
        // Cells of the 3x3 unit-square subdivision.
        let cell = |x: i64, y: i64| {
            let v = |dx: i64, dy: i64| {
                Scalar::from_poly(4, vec![q(x + dx, 3), q(y + dy, 3)])
            };
            ConvexPolygon::new(vec![v(0, 0), v(1, 0), v(1, 1), v(0, 1)]).unwrap()
        };
        let a = cell(x1, y1);
        let b = cell(x2, y2);
        if (x1, y1) == (x2, y2) {
            prop_assert_eq!(classify_intersection(&a, &b), IntersectionClass::Other);
            return Ok(());
        }
        let ab = classify_intersection(&a, &b);
        let ba = classify_intersection(&b, &a);
        prop_assert_eq!(&ab, &ba);
        // Applying one similarity to both cells maps the verdict along.
        let fa = a.apply(&map);
        let fb = b.apply(&map);
        let fab = classify_intersection(&fa, &fb);
        match (&ab, &fab) {
            (IntersectionClass::Disjoint, IntersectionClass::Disjoint) => {}
            (IntersectionClass::Other, IntersectionClass::Other) => {}
            (
                IntersectionClass::SingleCommonVertex(p),
                IntersectionClass::SingleCommonVertex(fp),
            ) => prop_assert_eq!(&map.apply(p), fp),
            other => prop_assert!(false, "classification not invariant: {:?}", other),
        }
    }

    #[test]
    fn zippers_from_interval_subdivisions_round_trip(
        cuts in proptest::collection::btree_set(1i64..40, 1..5),
        flips in proptest::collection::vec(any::<bool>(), 6),
    ) {
        // Subdivide [0, 1] at the given cut points (over 40ths) and build one
        // affine map per piece, randomly orientation-flipped.
        let mut params: Vec<BigRational> = vec![q(0, 1)];
        params.extend(cuts.iter().map(|&c| q(c, 40)));
        params.push(q(1, 1));
        let zero = Scalar::zero(4);
        let one = Scalar::one(4);
        let mut maps = Vec::new();
        for (k, w) in params.windows(2).enumerate() {
            let lo = Scalar::from_rational(4, w[0].clone());
            let hi = Scalar::from_rational(4, w[1].clone());
            let span = &hi - &lo;
            let flip = flips[k % flips.len()];
            let map = if flip {
                Similarity::new(-&span, hi.clone(), false)
            } else {
                Similarity::new(span.clone(), lo.clone(), false)
            };
            maps.push(map);
        }
        let z = verify_zipper(&maps, &zero, &one).unwrap();
        // Vertices are exactly the subdivision points, endpoints reproduced.
        let expected: Vec<Scalar> = params
            .iter()
            .map(|t| Scalar::from_rational(4, t.clone()))
            .collect();
        prop_assert_eq!(&z.vertices, &expected);
        prop_assert_eq!(z.z0(), &zero);
        prop_assert_eq!(z.zm(), &one);
        for (k, &eps) in z.signature.iter().enumerate() {
            prop_assert_eq!(eps, flips[k % flips.len()]);
        }
    }

    #[test]
    fn moran_root_is_monotone_and_residual_small(
        mut ratios in proptest::collection::vec(5u32..90, 2..6),
        extra in 5u32..90,
    ) {
        let tol = 1e-12;
        let to_f = |r: &u32| f64::from(*r) / 100.0;
        let base = MoranInstance::from_ratios(&ratios.iter().map(to_f).collect::<Vec<_>>(), tol);
        let d = similarity_dimension(&base);
        prop_assert!(moran_residual(&base, d).abs() < tol);
        // Adding a map strictly increases the dimension.
        ratios.push(extra);
        let bigger = MoranInstance::from_ratios(&ratios.iter().map(to_f).collect::<Vec<_>>(), tol);
        prop_assert!(similarity_dimension(&bigger) > d + 1e-9);
        // Squaring the system (all pairwise products) preserves the root.
        let squared: Vec<f64> = ratios[..ratios.len() - 1]
            .iter()
            .flat_map(|a| ratios[..ratios.len() - 1].iter().map(move |b| to_f(a) * to_f(b)))
            .collect();
        let squared = MoranInstance::from_ratios(&squared, tol);
        prop_assert!((similarity_dimension(&squared) - d).abs() < 2.0 * tol);
    }

    #[test]
    fn validation_survives_map_permutations(perm in proptest::sample::subsequence(vec![0usize, 1, 2, 3, 4], 5)) {
        // subsequence of all five indices is the identity; use it to derive a
        // rotation of the map list instead.
        let system = common::load("vicsek.spec");
        let k = perm.len().max(1) % 5;
        let mut maps = system.maps().to_vec();
        maps.rotate_left(k);
        let rotated = system.with_maps(maps).unwrap();
        let a = validate(&system);
        let b = validate(&rotated);
        prop_assert_eq!(a.all_pass(), b.all_pass());
    }
}

#[test]
fn polygon_keys_ignore_cyclic_rotation() {
    let system = common::load("vicsek.spec");
    let p = system.base();
    let mut vs = p.vertices().to_vec();
    vs.rotate_left(2);
    let rotated = ConvexPolygon::new(vs).unwrap();
    assert_eq!(p.key(), rotated.key());
    assert_eq!(p, p);
    assert_ne!(p.vertices(), rotated.vertices());
}

#[test]
fn arc_zipper_cells_stay_inside_the_chain_hull() {
    use dendrite::geometry::{convex_hull, ConvexBody};
    let system = common::load("vicsek.spec");
    let arc = dendrite::zipper::extract_arc_zipper(&system, 2).unwrap();
    let hull = convex_hull(&arc.zipper.vertices);
    // Spot-check every word of length <= 3.
    let mut frontier: Vec<Similarity> = vec![Similarity::identity(4)];
    for _ in 0..3 {
        let mut next = Vec::new();
        for w in &frontier {
            for m in &arc.zipper.maps {
                let wm = w.compose(m);
                let cell: ConvexBody = hull.apply(&wm);
                assert!(hull.contains_body(&cell));
                next.push(wm);
            }
        }
        frontier = next;
    }
}

#[test]
fn augmentation_is_idempotent_on_cell_sets() {
    use dendrite::attractor::{approximate, cell_multiset};
    use dendrite::symmetry::{augment, declared_group};
    let system = common::load("vicsek.spec");
    let group = declared_group(&system).unwrap().unwrap();
    let augmented = augment(&system, &group).unwrap();
    for depth in 0..=2 {
        let a = approximate(&system, depth).unwrap();
        let b = approximate(&augmented, depth).unwrap();
        let keys_a: std::collections::BTreeSet<_> = cell_multiset(&a).into_keys().collect();
        let keys_b: std::collections::BTreeSet<_> = cell_multiset(&b).into_keys().collect();
        assert_eq!(keys_a, keys_b, "depth {depth}");
    }
}
