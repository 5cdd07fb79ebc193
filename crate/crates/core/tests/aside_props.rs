use f1_mirror::aside::{gradient_field, hom_basis, probe_agrees, Locus};
use f1_mirror::bside::cohomology;
use f1_mirror::geometry::polytope;
use f1_mirror::numerics::{integrate_flow, stable_manifold_probe, Direction, FlowOptions};
use f1_mirror::{
    enumerate_intersections, exceptional_collection, hom_cohomology, LatticeIndex, LineBundleLabel,
    Point, Polytope, Rational, SurfaceParams,
};
use num_traits::Zero;
use proptest::prelude::*;

fn label(a: i64, b: i64) -> LineBundleLabel {
    LineBundleLabel::new(a, b)
}

fn ordered_pairs(c: u32) -> Vec<(LineBundleLabel, LineBundleLabel)> {
    let e = exceptional_collection(c);
    let mut out = Vec::new();
    for i in 0..e.len() {
        for j in i..e.len() {
            out.push((e[i], e[j]));
        }
    }
    out
}

#[test]
fn dimensions_match_on_collections() {
    for c in 0..=2 {
        let e = exceptional_collection(c);
        for (i, &from) in e.iter().enumerate() {
            for (j, &to) in e.iter().enumerate() {
                let counts = hom_basis(from, to).counts();
                let expected = if j >= i {
                    hom_cohomology(from, to).as_array()[0]
                } else {
                    0
                };
                assert_eq!(counts, [expected, 0, 0], "c={c} {from} -> {to}");
            }
        }
    }
}

#[test]
fn degree_zero_counts_sections_for_effective_differences() {
    for a in 0..=5 {
        for b in 0..=4 {
            let d = label(a, b);
            let counts = hom_basis(label(0, 0), d).counts();
            assert_eq!(counts[0], cohomology(1, d).as_array()[0], "{d}");
        }
    }
}

#[test]
fn generators_on_collections_lie_on_the_boundary() {
    let poly: Polytope<Rational> = polytope(&SurfaceParams::f1());
    for c in 0..=3 {
        for (from, to) in ordered_pairs(c) {
            for g in hom_basis(from, to).generators() {
                if g.is_identity() {
                    continue;
                }
                assert!(
                    g.locus.in_boundary(&poly),
                    "c={c} {from} -> {to}: {}",
                    g.locus
                );
            }
        }
    }
}

fn sample_points(locus: &Locus) -> Vec<f1_mirror::ExactPoint> {
    let mut pts = locus.representatives();
    if let Locus::Segment { start, end, .. } = locus {
        pts.push(start.clone());
        pts.push(end.clone());
    }
    pts
}

#[test]
fn field_vanishes_exactly_on_components() {
    for a in -4..=4 {
        for b in -3..=3 {
            for comp in enumerate_intersections(label(a, b)) {
                if comp.is_identity() {
                    continue;
                }
                for p in sample_points(&comp.locus) {
                    let x = gradient_field(comp.diff, comp.index, &p);
                    assert!(
                        x[0].is_zero() && x[1].is_zero(),
                        "({a},{b}) {} at {p:?}",
                        comp.index
                    );
                }
            }
        }
    }
}

#[test]
fn degree_one_example() {
    let comps = enumerate_intersections(label(2, -2));
    assert_eq!(comps.len(), 6);
    let basis = hom_basis(label(0, 0), label(2, -2));
    assert_eq!(basis.counts(), [0, 2, 0]);
    let mut gens: Vec<LatticeIndex> = basis.degrees[1].iter().map(|c| c.index).collect();
    gens.sort();
    assert_eq!(
        gens,
        vec![LatticeIndex::new(0, -1), LatticeIndex::new(1, -1)]
    );
    assert_eq!(
        basis.degrees[1].len() as u64,
        hom_cohomology(label(0, 0), label(2, -2)).as_array()[1]
    );
}

#[test]
fn collection_generators_pass_the_numeric_probe() {
    for c in 0..=1 {
        for (from, to) in ordered_pairs(c) {
            for g in hom_basis(from, to).generators() {
                assert!(
                    probe_agrees(g),
                    "c={c} {from} -> {to}: {} {}",
                    g.index,
                    g.locus
                );
            }
        }
    }
    for g in hom_basis(label(0, 0), label(2, -2)).generators() {
        assert!(probe_agrees(g), "{}", g.index);
    }
}

/// Backward flow from just off the critical point along the probe direction
/// leaves along that direction.
#[test]
fn probe_directions_match_backward_flow() {
    let poly: Polytope<f64> = polytope(&SurfaceParams::f1());
    let basis = hom_basis(label(0, 0), label(2, -2));
    for g in basis.generators() {
        let Locus::Point(v) = &g.locus else {
            panic!("expected a point")
        };
        let v = v.to_f64();
        let field = g.field();
        let probe = stable_manifold_probe(&field, &v).unwrap();
        assert_eq!(probe.dimension, 1);
        let e = probe.directions[0];
        let sign = [1.0, -1.0]
            .into_iter()
            .find(|s| {
                let p = Point::new(v.x1 + s * 1e-3 * e[0], v.x2 + s * 1e-3 * e[1]);
                poly.slacks(&p).iter().all(|&t| t >= 0.0)
            })
            .unwrap();
        let dir = [sign * e[0], sign * e[1]];
        let start = Point::new(v.x1 + 1e-7 * dir[0], v.x2 + 1e-7 * dir[1]);
        let tr = integrate_flow(
            &field,
            &poly,
            &start,
            Direction::Backward,
            &FlowOptions::default(),
        );
        let p = tr
            .points
            .iter()
            .find(|p| (p.x1 - v.x1).hypot(p.x2 - v.x2) >= 1e-4)
            .expect("trajectory leaves the critical point");
        let chord = [p.x1 - v.x1, p.x2 - v.x2];
        let cos = (chord[0] * dir[0] + chord[1] * dir[1]) / chord[0].hypot(chord[1]);
        let angle = cos.clamp(-1.0, 1.0).acos();
        assert!(angle <= 1e-4, "{}: angle {angle:e}", g.index);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn opposite_difference_has_the_same_loci(a in -4i64..=4, b in -4i64..=4) {
        let mut forward: Vec<(LatticeIndex, Locus)> = enumerate_intersections(label(a, b))
            .into_iter()
            .map(|c| (c.index, c.locus))
            .collect();
        let mut backward: Vec<(LatticeIndex, Locus)> = enumerate_intersections(label(-a, -b))
            .into_iter()
            .map(|c| (-c.index, c.locus))
            .collect();
        forward.sort_by_key(|(i, _)| *i);
        backward.sort_by_key(|(i, _)| *i);
        prop_assert_eq!(forward.len(), backward.len());
        for ((i, l), (j, m)) in forward.iter().zip(&backward) {
            prop_assert_eq!(i, j);
            prop_assert!(l.same_set(m), "{} vs {}", l, m);
        }
    }

    #[test]
    fn loci_stay_in_the_polytope(a in -5i64..=5, b in -4i64..=4) {
        let poly: Polytope<Rational> = polytope(&SurfaceParams::f1());
        for comp in enumerate_intersections(label(a, b)) {
            for p in sample_points(&comp.locus) {
                prop_assert!(poly.contains(&p));
            }
        }
    }
}
