use proptest::prelude::*;

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use multiplihedra::export::{export_json, import_json, ExportBundle, Format};
use multiplihedra::lp::{maximize, LpOutcome};
use multiplihedra::metric_trees::{collapse_zero_edges, constraint_system, MetricPaintedTree};
use multiplihedra::painted_trees::{enumerate_binary, enumerate_faces, facet_trees, refines, refines_exhaustive, PaintedTree};
use multiplihedra::rational::Q;
use multiplihedra::realization::{coordinates_weighted, hyperplane, Sense, Weights};

fn open_q() -> impl Strategy<Value = Q> {
    (2i64..=12).prop_flat_map(|d| (1..d).prop_map(move |p| BigRational::new(p.into(), d.into())))
}

fn weights(n: usize) -> impl Strategy<Value = Vec<i64>> {
    prop::collection::vec(1i64..=5, n)
}

fn face_triple(max: usize) -> impl Strategy<Value = (usize, usize, usize, usize)> {
    (1..=max).prop_flat_map(|n| {
        let len = enumerate_faces(n).len();
        (Just(n), 0..len, 0..len, 0..len)
    })
}

/// A vertex of the metric polytope of `t` picked by a random objective.
fn metric_vertex(t: &PaintedTree, objective: &[i64]) -> Vec<Q> {
    let sys = constraint_system(t);
    let k = sys.edges.len();
    let mut a: Vec<Vec<Q>> = sys
        .matrix()
        .into_iter()
        .map(|mut r| {
            r.resize(2 * k, Q::zero());
            r
        })
        .collect();
    let mut b = vec![Q::zero(); a.len()];
    for e in 0..k {
        let mut r = vec![Q::zero(); 2 * k];
        r[e] = Q::one();
        r[k + e] = Q::one();
        a.push(r);
        b.push(Q::one());
    }
    let mut c: Vec<Q> = objective.iter().take(k).map(|&v| Q::from_integer(v.into())).collect();
    c.resize(2 * k, Q::zero());
    match maximize(&c, &a, &b) {
        LpOutcome::Optimal { mut x, .. } => {
            x.truncate(k);
            x
        }
        other => panic!("{other:?}"),
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn refinement_is_a_partial_order((n, i, j, k) in face_triple(4)) {
        let faces = enumerate_faces(n);
        let (a, b, c) = (&faces[i], &faces[j], &faces[k]);
        prop_assert!(refines(a, a).unwrap());
        if refines(a, b).unwrap() && refines(b, c).unwrap() {
            prop_assert!(refines(a, c).unwrap());
        }
        if refines(a, b).unwrap() && refines(b, a).unwrap() {
            prop_assert_eq!(a, b);
        }
        prop_assert_eq!(refines(a, b).unwrap(), refines_exhaustive(a, b).unwrap());
    }

    #[test]
    fn text_round_trip((n, i, _, _) in face_triple(5)) {
        let t = &enumerate_faces(n)[i];
        let back: PaintedTree = t.to_string().parse().unwrap();
        prop_assert_eq!(&back, t);
        prop_assert!(back.is_valid());
    }

    #[test]
    fn incidence_iff_refinement(
        (n, w) in (2usize..=6).prop_flat_map(|n| (Just(n), weights(n))),
        qv in open_q(),
        pick in any::<prop::sample::Index>(),
    ) {
        let weights = Weights::new(w).unwrap();
        let trees = enumerate_binary(n);
        let t = pick.get(&trees);
        let p = coordinates_weighted(t, &qv, &weights).unwrap();
        for f in facet_trees(n) {
            let h = hyperplane(&f, &qv, &weights).unwrap();
            let lhs = h.lhs(&p);
            if refines(t.tree(), &f.realize()).unwrap() {
                prop_assert_eq!(&lhs, &h.rhs);
            } else if h.sense == Sense::BoundsBelow {
                prop_assert!(lhs > h.rhs);
            } else {
                prop_assert!(lhs < h.rhs);
            }
        }
    }

    #[test]
    fn doubling_weights_quadruples_coordinates(
        (n, w) in (1usize..=6).prop_flat_map(|n| (Just(n), weights(n))),
        qv in open_q(),
    ) {
        let single = Weights::new(w.clone()).unwrap();
        let double = Weights::new(w.iter().map(|v| 2 * v).collect()).unwrap();
        let four = Q::from_integer(4.into());
        for t in enumerate_binary(n) {
            let a = coordinates_weighted(&t, &qv, &single).unwrap();
            let b = coordinates_weighted(&t, &qv, &double).unwrap();
            prop_assert!(a.coords().iter().zip(b.coords()).all(|(x, y)| x * &four == *y));
        }
    }

    #[test]
    fn collapse_is_idempotent(
        n in 2usize..=5,
        pick in any::<prop::sample::Index>(),
        objective in prop::collection::vec(-3i64..=3, 8),
    ) {
        let trees = enumerate_binary(n);
        let t = pick.get(&trees).tree().clone();
        let lengths = metric_vertex(&t, &objective);
        let m = MetricPaintedTree::new(t, lengths.clone()).unwrap();
        let once = collapse_zero_edges(&m);
        prop_assert!(once.tree().is_valid());
        prop_assert!(once.lengths().iter().all(|v| v.is_positive()));
        let kept: Vec<Q> = lengths.into_iter().filter(|v| !v.is_zero()).collect();
        prop_assert_eq!(once.lengths(), &kept[..]);
        prop_assert_eq!(collapse_zero_edges(&once), once);
    }

    #[test]
    fn json_bundles_round_trip(
        (n, w) in (1usize..=4).prop_flat_map(|n| (Just(n), weights(n))),
        qv in open_q(),
    ) {
        let b = ExportBundle::build(n, &qv, &Weights::new(w).unwrap(), Format::Json, true).unwrap();
        let text = export_json(&b).unwrap();
        let back = import_json(&text).unwrap();
        prop_assert_eq!(export_json(&back).unwrap(), text);
        prop_assert_eq!(back, b);
    }
}
