use pmtopo_core::balls::{contains, lemma1_witness, margin};
use pmtopo_core::budget::log_grid;
use pmtopo_core::convergence::{check_mu_convergence, SequenceKind, SequenceSpec};
use pmtopo_core::distfn::pointwise_min;
use pmtopo_core::{
    Ball, CheckReport, ClassicalModular, DistributionFunction, Family, PmSpace, SampleBudget,
    Vector, Verdict, Violation,
};
use proptest::prelude::*;

fn modular(dim: usize) -> impl Strategy<Value = ClassicalModular> {
    prop_oneof![
        (1.0f64..3.0).prop_map(|p| ClassicalModular::PPower { p }),
        proptest::collection::vec(0.1f64..5.0, dim)
            .prop_map(|weights| ClassicalModular::WeightedAbs { weights }),
    ]
}

fn family() -> impl Strategy<Value = Family> {
    prop_oneof![Just(Family::RationalFrom), Just(Family::StepFrom)]
}

fn space() -> impl Strategy<Value = PmSpace> {
    (1usize..=4)
        .prop_flat_map(|dim| (Just(dim), family(), modular(dim)))
        .prop_map(|(dim, f, m)| PmSpace::new(dim, f, m).unwrap())
}

fn vector(dim: usize) -> impl Strategy<Value = Vector> {
    proptest::collection::vec(-10.0f64..10.0, dim).prop_map(|c| Vector::new(c).unwrap())
}

fn space_and_points() -> impl Strategy<Value = (PmSpace, Vector, Vector)> {
    space().prop_flat_map(|s| {
        let d = s.dim;
        (Just(s), vector(d), vector(d))
    })
}

fn distribution() -> impl Strategy<Value = DistributionFunction> {
    prop_oneof![
        (0.0f64..100.0).prop_map(|r| DistributionFunction::rational(r).unwrap()),
        (0.0f64..100.0).prop_map(|t| DistributionFunction::step(t).unwrap()),
        proptest::collection::vec((0.0f64..10.0, 0.0f64..1.0), 1..6).prop_map(|mut pts| {
            pts.sort_by(|a, b| a.0.total_cmp(&b.0));
            pts.dedup_by(|a, b| a.0 == b.0);
            let mut ys: Vec<f64> = pts.iter().map(|p| p.1).collect();
            ys.sort_by(f64::total_cmp);
            let mut bp: Vec<(f64, f64)> = pts.iter().zip(ys).map(|(p, y)| (p.0, y)).collect();
            let last = bp.last().unwrap().0;
            bp.push((last + 1.0, 1.0));
            DistributionFunction::piecewise_linear(bp).unwrap()
        }),
    ]
}

proptest! {
    #[test]
    fn distribution_values_are_monotone_probabilities(f in distribution(), a in -5.0f64..20.0, b in -5.0f64..20.0) {
        let (lo, hi) = (a.min(b), a.max(b));
        let (u, v) = (f.eval(lo), f.eval(hi));
        prop_assert!((0.0..=1.0).contains(&u) && (0.0..=1.0).contains(&v));
        prop_assert!(u <= v);
    }

    #[test]
    fn pointwise_min_is_a_lower_bound(f in distribution(), g in distribution(), t in -1.0f64..20.0) {
        let m = pointwise_min(&f, &g, t);
        prop_assert!(m <= f.eval(t) && m <= g.eval(t));
        prop_assert!(m == f.eval(t) || m == g.eval(t));
    }

    #[test]
    fn distribution_serde_round_trips(f in distribution()) {
        let s = serde_json::to_string(&f).unwrap();
        let back: DistributionFunction = serde_json::from_str(&s).unwrap();
        prop_assert_eq!(&back, &f);
        prop_assert_eq!(serde_json::to_string(&back).unwrap(), s);
    }

    #[test]
    fn mu_is_symmetric_and_vanishes_at_zero((s, x, _) in space_and_points(), t in 1e-3f64..1e3) {
        let f = s.mu(&x).unwrap();
        let g = s.mu(&x.neg()).unwrap();
        prop_assert_eq!(f.eval(0.0), 0.0);
        prop_assert_eq!(f.eval(t), g.eval(t));
        prop_assert_eq!(s.mu(&Vector::zeros(s.dim)).unwrap().eval(t), 1.0);
    }

    #[test]
    fn convex_combination_inequality_holds(
        (s, x, y) in space_and_points(),
        a in 0.0f64..=1.0,
        u in 1e-3f64..1e3,
        w in 1e-3f64..1e3,
    ) {
        let combo = x.combine(a, &y, 1.0 - a);
        let lhs = s.mu(&combo).unwrap().eval(u + w);
        let rhs = s.mu(&x).unwrap().eval(u).min(s.mu(&y).unwrap().eval(w));
        prop_assert!(lhs >= rhs - 1e-9, "{} < {}", lhs, rhs);
    }

    #[test]
    fn ball_contains_its_center((s, x, _) in space_and_points(), level in 0.01f64..0.99, t in 1e-3f64..1e3) {
        let b = Ball::new(x.clone(), level, t).unwrap();
        prop_assert!(contains(&s, &b, &x).unwrap());
    }

    #[test]
    fn membership_is_translation_invariant((s, x, y) in space_and_points(), level in 0.01f64..0.99, t in 1e-3f64..1e3) {
        let here = margin(&s, &Ball::new(x.clone(), level, t).unwrap(), &y).unwrap();
        let origin = margin(&s, &Ball::at_origin(s.dim, level, t).unwrap(), &y.sub(&x)).unwrap();
        prop_assert_eq!(here, origin);
    }

    #[test]
    fn balls_grow_with_scale_and_level(
        (s, x, y) in space_and_points(),
        l1 in 0.01f64..0.99, l2 in 0.01f64..0.99,
        t1 in 1e-3f64..1e3, t2 in 1e-3f64..1e3,
    ) {
        let (la, lb) = (l1.min(l2), l1.max(l2));
        let (ta, tb) = (t1.min(t2), t1.max(t2));
        let small = Ball::new(x.clone(), la, ta).unwrap();
        let big = Ball::new(x.clone(), lb, tb).unwrap();
        if contains(&s, &small, &y).unwrap() {
            prop_assert!(contains(&s, &big, &y).unwrap());
        }
    }

    #[test]
    fn lemma1_witness_lies_inside((s, x, y) in space_and_points(), level in 0.05f64..0.95, t in 1e-2f64..1e2) {
        let b = Ball::new(x.clone(), level, t).unwrap();
        if margin(&s, &b, &y).unwrap() > 1e-9 {
            let ts = lemma1_witness(&s, &b, &y).unwrap();
            prop_assert!(ts > 0.0 && ts < t);
            prop_assert!(s.mu(&x.sub(&y)).unwrap().eval(ts) > 1.0 - level);
        }
    }

    #[test]
    fn log_grid_is_increasing_with_exact_ends(lo in -6.0f64..0.0, span in 0.5f64..8.0, n in 2usize..200) {
        let (a, b) = (10f64.powf(lo), 10f64.powf(lo + span));
        let g = log_grid(a, b, n);
        prop_assert_eq!(g.len(), n);
        prop_assert_eq!(g[0], a);
        prop_assert_eq!(g[n - 1], b);
        prop_assert!(g.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn worst_verdict_is_commutative_and_associative(a in 0u8..3, b in 0u8..3, c in 0u8..3) {
        let v = |k: u8| [Verdict::Pass, Verdict::Fail, Verdict::Infeasible][k as usize];
        let (a, b, c) = (v(a), v(b), v(c));
        prop_assert_eq!(a.worst(b), b.worst(a));
        prop_assert_eq!(a.worst(b).worst(c), a.worst(b.worst(c)));
    }

    #[test]
    fn report_merge_adds_counts(n1 in 0usize..40, n2 in 0usize..40, s1 in 0u64..100, s2 in 0u64..100) {
        let make = |n: usize, s: u64| {
            let mut r = CheckReport::new(0);
            r.samples_run = s;
            for i in 0..n {
                r.record(Violation::new("c", i as f64, 0.0));
            }
            r
        };
        let mut m = make(n1, s1);
        m.merge(make(n2, s2));
        prop_assert_eq!(m.violation_count, (n1 + n2) as u64);
        prop_assert_eq!(m.samples_run, s1 + s2);
        prop_assert_eq!(m.passed, n1 + n2 == 0);
        prop_assert!(m.violations.len() <= pmtopo_core::report::MAX_RECORDED_VIOLATIONS);
    }

    #[test]
    fn space_serde_round_trips(s in space()) {
        let text = serde_json::to_string(&s).unwrap();
        let back: PmSpace = serde_json::from_str(&text).unwrap();
        prop_assert_eq!(back, s);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn gaps_shrink_along_contracting_sequences(
        dir in proptest::collection::vec(-3.0f64..3.0, 1..=3),
        q in 0.2f64..0.8,
        p in prop_oneof![Just(1.0), Just(2.0)],
    ) {
        let dim = dir.len();
        let space = PmSpace::rational_from(dim, ClassicalModular::PPower { p }).unwrap();
        let zero = Vector::zeros(dim);
        let grid = SampleBudget::default().t_grid;
        for kind in [SequenceKind::Harmonic, SequenceKind::Geometric { q }] {
            let seq = SequenceSpec::new(kind, zero.clone(), Vector::new(dir.clone()).unwrap(), zero.clone()).unwrap();
            let mut last = vec![f64::INFINITY; grid.len()];
            for n in [1u64, 2, 4, 8, 16, 64, 1024] {
                let f = space.mu(&seq.term(n)).unwrap();
                for (i, &t) in grid.iter().enumerate() {
                    let gap = 1.0 - f.eval(t);
                    prop_assert!(gap <= last[i] + 1e-15);
                    last[i] = gap;
                }
            }
            prop_assert!(check_mu_convergence(&space, &seq, &grid, 1e-6, 1 << 40).unwrap().converges);
        }
    }
}
