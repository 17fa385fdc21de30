use crosscount::disjointness::{build_graph, check_component_bound, check_weak_bound};
use crosscount::geom::{
    cone_of, is_avoiding, line_meet, on_segment, orientation, parallel, proper_cross, segments_intersect, stabs, Orientation, Point,
    Segment,
};
use crosscount::polygon::{crossing_count, line_polygon_crossings, segment_polygon_crossings};
use crosscount::search::random_instance;
use crosscount::structure::classify_walk;
use crosscount::{Point2, Polygon, Rational, Segment2};
use num_traits::{One, Signed, Zero};
use proptest::prelude::*;

fn rat() -> impl Strategy<Value = Rational> {
    (-20i64..=20, 1i64..=6).prop_map(|(a, b)| Rational::new(a.into(), b.into()))
}

fn pt() -> impl Strategy<Value = Point2> {
    (rat(), rat()).prop_map(|(x, y)| Point::new(x, y))
}

fn seg() -> impl Strategy<Value = Segment2> {
    (pt(), pt()).prop_filter_map("degenerate", |(a, b)| Segment::new(a, b).ok())
}

fn int(k: i64) -> Rational {
    Rational::from_integer(k.into())
}

/// `x ↦ (a x + b y + e, c x + d y + f)`.
#[derive(Clone, Debug)]
struct Affine([Rational; 6]);

impl Affine {
    fn apply(&self, p: &Point2) -> Point2 {
        let [a, b, c, d, e, f] = &self.0;
        Point::new(a * &p.x + b * &p.y + e, c * &p.x + d * &p.y + f)
    }
}

fn affine() -> impl Strategy<Value = Affine> {
    (rat(), rat(), rat(), rat(), rat(), rat())
        .prop_filter("orientation-preserving", |(a, b, c, d, _, _)| (a * d - b * c).is_positive())
        .prop_map(|(a, b, c, d, e, f)| Affine([a, b, c, d, e, f]))
}

fn instance(odd: bool) -> impl Strategy<Value = (Polygon, Polygon)> {
    let size = if odd { prop_oneof![Just(3usize), Just(5), Just(7), Just(9)].boxed() } else { (3usize..=9).boxed() };
    (size.clone(), size, any::<u64>()).prop_map(|(m, n, seed)| random_instance(m, n, 10, seed).unwrap())
}

/// Whether `u` meets the closed ray from `apex` through direction `d`.
fn meets_ray(u: &Segment2, apex: &Point2, d: &Point2) -> bool {
    let dd = &d.x * &d.x + &d.y * &d.y;
    let reach = [u.a(), u.b()]
        .iter()
        .map(|e| {
            let v = e.minus(apex);
            (&v.x * &d.x + &v.y * &d.y) / &dd
        })
        .max()
        .unwrap()
        .max(Rational::zero())
        + Rational::one();
    let far = apex.plus(&d.scaled(&reach));
    segments_intersect(u, &Segment::new(apex.clone(), far).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn orientation_is_antisymmetric(p in pt(), q in pt(), r in pt()) {
        prop_assert_eq!(orientation(&p, &q, &r), orientation(&p, &r, &q).reversed());
    }

    #[test]
    fn predicates_survive_integer_scaling(s in seg(), t in seg(), k in 1i64..1000) {
        let k = int(k);
        let scale = |s: &Segment2| Segment::new(s.a().scaled(&k), s.b().scaled(&k)).unwrap();
        let (ks, kt) = (scale(&s), scale(&t));
        prop_assert_eq!(proper_cross(&s, &t), proper_cross(&ks, &kt));
        prop_assert_eq!(segments_intersect(&s, &t), segments_intersect(&ks, &kt));
        prop_assert_eq!(is_avoiding(&s, &t), is_avoiding(&ks, &kt));
        prop_assert_eq!(stabs(&s, &t).ok(), stabs(&ks, &kt).ok());
        prop_assert_eq!(orientation(s.a(), s.b(), t.a()), orientation(ks.a(), ks.b(), kt.a()));
    }

    #[test]
    fn stabbing_is_exclusive(s in seg(), t in seg()) {
        prop_assume!(!segments_intersect(&s, &t) && !parallel(&s, &t) && !is_avoiding(&s, &t));
        let (st, ts) = (stabs(&s, &t).unwrap(), stabs(&t, &s).unwrap());
        prop_assert!(st ^ ts);
    }

    #[test]
    fn endpoint_in_cone_blocks_both_rays(s in seg(), t in seg(), u in seg()) {
        prop_assume!(is_avoiding(&s, &t));
        let cone = cone_of(&s, &t).unwrap();
        let apex = cone.apex();
        prop_assume!(!on_segment(apex, &u));
        prop_assume!(cone.contains(u.a(), true) || cone.contains(u.b(), true));
        prop_assert!(!(meets_ray(&u, apex, cone.ray1()) && meets_ray(&u, apex, cone.ray2())));
    }

    #[test]
    fn line_meet_lies_on_both_lines(s in seg(), t in seg()) {
        if let Some(i) = line_meet(&s, &t) {
            prop_assert_eq!(orientation(s.a(), s.b(), &i), Orientation::Collinear);
            prop_assert_eq!(orientation(t.a(), t.b(), &i), Orientation::Collinear);
        } else {
            prop_assert!(parallel(&s, &t));
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn crossing_count_is_symmetric((p, q) in instance(false)) {
        let pq = crossing_count(&p, &q).unwrap();
        let qp = crossing_count(&q, &p).unwrap();
        prop_assert_eq!(pq.total, qp.total);
        prop_assert_eq!(pq.per_pair, qp.per_pair.transposed());
    }

    #[test]
    fn affine_maps_preserve_the_crossing_pattern((p, q) in instance(false), f in affine()) {
        let fp = p.map_vertices(|v| f.apply(v)).unwrap();
        let fq = q.map_vertices(|v| f.apply(v)).unwrap();
        prop_assert_eq!(crossing_count(&p, &q).unwrap().per_pair, crossing_count(&fp, &fq).unwrap().per_pair);
    }

    #[test]
    fn crossings_and_disjoint_pairs_partition_all_pairs((p, q) in instance(false)) {
        let g = build_graph(&p, &q).unwrap();
        let total = crossing_count(&p, &q).unwrap().total;
        prop_assert_eq!(total + g.edge_count(), p.len() * q.len());
        prop_assert!(check_component_bound(&p, &q).unwrap().holds);
    }

    #[test]
    fn odd_polygons_are_crossed_at_most_n_minus_one_times((p, q) in instance(true)) {
        let n = q.len();
        for s in p.sides() {
            prop_assert!(segment_polygon_crossings(s, &q).unwrap() < n);
            prop_assert_eq!(line_polygon_crossings(s.a(), s.b(), &q).unwrap() % 2, 0);
        }
        prop_assert!(check_weak_bound(&p, &q).unwrap().holds);
    }

    #[test]
    fn component_count_ignores_side_labels((p, q) in instance(true), shift in 0usize..9) {
        let rot = |poly: &Polygon, k: usize| {
            let mut v = poly.vertices().to_vec();
            let len = v.len();
            v.rotate_left(k % len);
            Polygon::new(v).unwrap()
        };
        let a = build_graph(&p, &q).unwrap().component_count();
        let b = build_graph(&rot(&p, shift), &rot(&q, shift + 1)).unwrap().component_count();
        prop_assert_eq!(a, b);
    }

    #[test]
    fn quadrant_walks_survive_normalization((p, q) in instance(true), f in affine()) {
        // Any consecutive pair of P with lines meeting away from Q's vertices.
        let (s, t) = (&p.sides()[0], &p.sides()[1]);
        if let Ok(walk) = classify_walk(&q, s, t) {
            prop_assert_eq!(walk.len(), q.len());
            prop_assert!(walk.is_closed());
            let fp = p.map_vertices(|v| f.apply(v)).unwrap();
            let fq = q.map_vertices(|v| f.apply(v)).unwrap();
            let mapped = classify_walk(&fq, &fp.sides()[0], &fp.sides()[1]).unwrap();
            prop_assert_eq!(walk, mapped);
        }
    }
}
