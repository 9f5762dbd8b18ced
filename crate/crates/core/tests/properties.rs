use bicalc::cli::parse::parse_interval;
use bicalc::{contains, delta2, delta_n, nsim, parse, Interval2, Point2, ScalarField2, ScalarFieldN};
use proptest::prelude::*;

fn coord() -> impl Strategy<Value = f64> {
    -4.0f64..4.0
}

fn point() -> impl Strategy<Value = Point2> {
    (coord(), coord()).prop_map(|(a, b)| Point2::new(a, b))
}

fn poly() -> impl Strategy<Value = String> {
    prop::collection::vec((-3i32..=3, 0u32..=3, 0u32..=3), 1..5).prop_map(|terms| {
        terms
            .iter()
            .map(|(c, i, j)| format!("({c})*x1^{i}*x2^{j}"))
            .collect::<Vec<_>>()
            .join(" + ")
    })
}

fn scale(f: &ScalarField2, pts: &[Point2]) -> f64 {
    pts.iter().map(|p| f.value(*p).unwrap().abs()).fold(1.0, f64::max)
}

proptest! {
    #[test]
    fn subdivision_identities(src in poly(), a in point(), b in point(), c in point()) {
        let f = ScalarField2::parse(&src).unwrap();
        let d = |p: Point2, q: Point2| delta2(&f, p, q).unwrap();
        let pts = [a, b, c, Point2::new(a.x1, b.x2), Point2::new(b.x1, a.x2), Point2::new(c.x1, a.x2), Point2::new(c.x1, b.x2), Point2::new(a.x1, c.x2), Point2::new(b.x1, c.x2)];
        let tol = 1e-10 * scale(&f, &pts);
        prop_assert_eq!(d(a, a), 0.0);
        prop_assert!((d(a, b) - d(b, a)).abs() <= tol);
        prop_assert!((d(a, b) + d(Point2::new(a.x1, b.x2), Point2::new(b.x1, a.x2))).abs() <= tol);
        let split = d(a, Point2::new(c.x1, b.x2)) + d(Point2::new(c.x1, a.x2), b);
        prop_assert!((d(a, b) - split).abs() <= tol);
        let tiles = d(a, c) + d(c, b) + d(Point2::new(a.x1, c.x2), Point2::new(c.x1, b.x2)) + d(Point2::new(c.x1, a.x2), Point2::new(b.x1, c.x2));
        prop_assert!((d(a, b) - tiles).abs() <= tol);
    }

    #[test]
    fn delta_n_matches_delta2(src in poly(), a in point(), b in point()) {
        let f2 = ScalarField2::parse(&src).unwrap();
        let fnn = ScalarFieldN::parse(&src, 2).unwrap();
        let x = delta2(&f2, a, b).unwrap();
        let y = delta_n(&fnn, &[a.x1, a.x2], &[b.x1, b.x2]).unwrap();
        prop_assert_eq!(x.to_bits(), y.to_bits());
    }

    #[test]
    fn separable_delta_vanishes(g in poly(), h in poly(), a in point(), b in point()) {
        let src = format!("({}) + ({})", g.replace("x2", "x1"), h.replace("x1", "x2"));
        let f = ScalarField2::parse(&src).unwrap();
        let v = delta2(&f, a, b).unwrap();
        prop_assert!(v.abs() <= 1e-12 * scale(&f, &[a, b, Point2::new(a.x1, b.x2), Point2::new(b.x1, a.x2)]));
    }

    #[test]
    fn nsim_is_symmetric(a in point(), b in point()) {
        prop_assert_eq!(nsim(a, b), nsim(b, a));
        prop_assert!(!nsim(a, a));
    }

    #[test]
    fn containment_is_monotone(lo in point(), w in (0.1f64..3.0, 0.1f64..3.0), p in point(), shrink in 0.0f64..0.45) {
        let hi = Point2::new(lo.x1 + w.0, lo.x2 + w.1);
        let outer = Interval2::closed(lo, hi).unwrap();
        let inner = Interval2::closed(
            Point2::new(lo.x1 + shrink * w.0, lo.x2 + shrink * w.1),
            Point2::new(hi.x1 - shrink * w.0, hi.x2 - shrink * w.1),
        ).unwrap();
        prop_assert!(inner.is_subset_of(&outer));
        if contains(&inner, p) {
            prop_assert!(contains(&outer, p));
        }
    }

    #[test]
    fn parse_display_round_trip(src in poly(), p in point()) {
        let e = parse(&src, 2).unwrap();
        let again = parse(&e.to_string(), 2).unwrap();
        let x = [p.x1, p.x2];
        let v1 = bicalc::evaluate(&e, &x).unwrap();
        let v2 = bicalc::evaluate(&again, &x).unwrap();
        prop_assert_eq!(v1.to_bits(), v2.to_bits());
    }

    #[test]
    fn interval_syntax_round_trip(a in -5.0f64..5.0, w in 0.1f64..5.0, closed in any::<[bool; 4]>()) {
        let (o, c) = (|b: bool| if b { '[' } else { '(' }, |b: bool| if b { ']' } else { ')' });
        let s = format!("{}{},{}{}x{}{},{}{}", o(closed[0]), a, a + w, c(closed[1]), o(closed[2]), -a, -a + w, c(closed[3]));
        let i = parse_interval(&s).unwrap();
        let j = parse_interval(&i.to_string()).unwrap();
        prop_assert_eq!(i, j);
    }
}
