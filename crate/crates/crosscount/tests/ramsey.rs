use crosscount::geom::{orientation, Orientation, Point};
use crosscount::ramsey::{
    es_number, find_cup_or_cap_lines, find_cup_or_cap_points, forms, is_transitive_order, lines_form, log_bound,
    longest_monotone, transitive_subtournament, CupCapKind, Line, Tournament,
};
use crosscount::{Point2, Rational};
use num_bigint::BigUint;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Brute-force binomial by Pascal's rule.
fn pascal(n: usize, k: usize) -> BigUint {
    let mut row = vec![BigUint::from(1u8)];
    for _ in 0..n {
        let mut next = vec![BigUint::from(1u8); row.len() + 1];
        for i in 1..row.len() {
            next[i] = &row[i - 1] + &row[i];
        }
        row = next;
    }
    row[k].clone()
}

/// Points with distinct x and no three collinear, by rejection.
fn gp_points(n: usize) -> impl Strategy<Value = Vec<Point2>> {
    prop::collection::btree_set(-200i64..200, n)
        .prop_flat_map(move |xs| (Just(xs), prop::collection::vec(-200i64..200, n)))
        .prop_map(|(xs, ys)| xs.into_iter().zip(ys).map(|(x, y)| Point::from_ints(x, y)).collect::<Vec<_>>())
        .prop_filter("collinear triple", |pts| {
            let n = pts.len();
            (0..n).all(|i| {
                (i + 1..n).all(|j| (j + 1..n).all(|k| orientation(&pts[i], &pts[j], &pts[k]) != Orientation::Collinear))
            })
        })
}

fn distinct_shuffled() -> impl Strategy<Value = Vec<i64>> {
    prop::collection::btree_set(-1000i64..1000, 1..40).prop_map(|s| s.into_iter().collect::<Vec<_>>()).prop_shuffle()
}

#[test]
fn es_matches_pascal() {
    for r in 2..12 {
        for s in 2..12 {
            assert_eq!(es_number(r, s).unwrap(), pascal(r + s - 4, r - 2), "({r}, {s})");
            assert_eq!(es_number(r, s), es_number(s, r));
        }
    }
}

#[test]
fn monotone_guarantee_on_all_permutations_of_five() {
    // 5 = 2² + 1: every permutation has a monotone run of length 3.
    let mut perm = [0, 1, 2, 3, 4];
    let mut count = 0;
    loop {
        assert!(longest_monotone(&perm).unwrap().longest() >= 3);
        count += 1;
        // Next lexicographic permutation.
        let Some(i) = (0..4).rev().find(|&i| perm[i] < perm[i + 1]) else { break };
        let j = (i + 1..5).rev().find(|&j| perm[j] > perm[i]).unwrap();
        perm.swap(i, j);
        perm[i + 1..].reverse();
    }
    assert_eq!(count, 120);
}

#[test]
fn random_tournaments_contain_large_transitive_parts() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for n in [1, 2, 5, 17, 32, 64] {
        for _ in 0..20 {
            let t = Tournament::random(n, &mut rng);
            let order = transitive_subtournament(&t);
            assert!(order.len() >= log_bound(n));
            assert!(is_transitive_order(&t, &order));
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn cup_or_cap_at_threshold(pts in gp_points(21)) {
        let r = find_cup_or_cap_points(&pts, 5, 5).unwrap();
        prop_assert_eq!(r.indices.len(), 5);
        prop_assert!(forms(r.kind, &pts, &r.indices));
    }

    /// Lines dual to the points (y = a·x − b for the point (a, b)) have the
    /// same cups and caps, reported with the same kind.
    #[test]
    fn duality_preserves_kind(pts in gp_points(11)) {
        let lines: Vec<Line<Rational>> = pts.iter().map(|p| Line::new(p.x.clone(), -p.y.clone())).collect();
        let from_points = find_cup_or_cap_points(&pts, 4, 5).unwrap();
        let from_lines = find_cup_or_cap_lines(&lines, 4, 5).unwrap();
        prop_assert_eq!(&from_points, &from_lines);
        prop_assert!(lines_form(from_lines.kind, &lines, &from_lines.indices));
        let other = match from_lines.kind { CupCapKind::Cup => CupCapKind::Cap, CupCapKind::Cap => CupCapKind::Cup };
        prop_assert!(!lines_form(other, &lines, &from_lines.indices[..3]));
    }

    #[test]
    fn monotone_runs_are_monotone(seq in distinct_shuffled()) {
        let m = longest_monotone(&seq).unwrap();
        prop_assert!(m.increasing.windows(2).all(|w| w[0] < w[1] && seq[w[0]] < seq[w[1]]));
        prop_assert!(m.decreasing.windows(2).all(|w| w[0] < w[1] && seq[w[0]] > seq[w[1]]));
        let r = (1..).find(|r: &usize| r * r + 1 > seq.len()).unwrap() - 1;
        prop_assert!(m.longest() > r);
    }
}
