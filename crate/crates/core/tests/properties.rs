use edgetype::enumerate::{count_class, enumerate_class, enumerate_delta_class};
use edgetype::maxent::{
    dual_objective, margins_residual, polytope_membership, solve_maxent, DualVars, ProductRandomGraph,
    SolverOptions,
};
use edgetype::probability::{family_d_graph, graph_prob, kl_product, point_prob_for, FamilyDParams};
use edgetype::rd::{exact_rn, exact_rn_prob, sign_variants};
use edgetype::types::{block_count, gale_ryser_feasible, normalize, structure_matrix, EdgeType};
use edgetype::{DiGraph, Distortion};
use proptest::prelude::*;

fn graph(max_n: usize) -> impl Strategy<Value = DiGraph> {
    (1..=max_n).prop_flat_map(|n| {
        let mask = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
        prop::collection::vec(any::<u64>().prop_map(move |x| x & mask), n)
            .prop_map(move |rows| DiGraph::from_rows(n, rows).unwrap())
    })
}

fn graph_pair(max_n: usize) -> impl Strategy<Value = (DiGraph, DiGraph)> {
    graph(max_n).prop_flat_map(|g| {
        let n = g.n();
        let mask = (1u64 << n) - 1;
        prop::collection::vec(any::<u64>().prop_map(move |x| x & mask), n)
            .prop_map(move |rows| (g.clone(), DiGraph::from_rows(n, rows).unwrap()))
    })
}

fn triple(max_n: usize) -> impl Strategy<Value = (DiGraph, DiGraph, DiGraph)> {
    graph_pair(max_n).prop_flat_map(|(g, h)| {
        let n = g.n();
        let mask = (1u64 << n) - 1;
        prop::collection::vec(any::<u64>().prop_map(move |x| x & mask), n)
            .prop_map(move |rows| (g.clone(), h.clone(), DiGraph::from_rows(n, rows).unwrap()))
    })
}

fn permutation(n: usize) -> impl Strategy<Value = Vec<usize>> {
    Just((0..n).collect::<Vec<_>>()).prop_shuffle()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn distortion_is_a_pseudometric((g, h, k) in triple(7)) {
        prop_assert_eq!(g.distortion(&g).unwrap(), Distortion::new(0, g.n()));
        prop_assert_eq!(g.distortion(&h).unwrap(), h.distortion(&g).unwrap());
        let gh = g.distortion(&h).unwrap();
        let hk = h.distortion(&k).unwrap();
        let gk = g.distortion(&k).unwrap();
        prop_assert!(gk.num <= gh.num + hk.num);
    }

    #[test]
    fn degree_sums_equal_edge_count(g in graph(10)) {
        let r: usize = g.out_degrees().iter().sum();
        let c: usize = g.in_degrees().iter().sum();
        prop_assert_eq!(r, g.edge_count());
        prop_assert_eq!(c, g.edge_count());
    }

    #[test]
    fn masking_respects_restriction((g, w) in graph_pair(8)) {
        prop_assert!(g.and(&w).unwrap().respects_restriction(&w));
        prop_assert_eq!(g.xor(&g).unwrap().edge_count(), 0);
    }

    #[test]
    fn count_is_relabeling_invariant(g in graph(4), seed in any::<u64>()) {
        let n = g.n();
        let t = EdgeType::unrestricted(g.out_degrees(), g.in_degrees()).unwrap();
        let mut rows: Vec<usize> = (0..n).collect();
        let mut cols: Vec<usize> = (0..n).collect();
        rows.rotate_left((seed % n as u64) as usize);
        cols.reverse();
        let p = g.permuted(&rows, &cols);
        let tp = EdgeType::unrestricted(p.out_degrees(), p.in_degrees()).unwrap();
        prop_assert_eq!(count_class(&t, 6).unwrap(), count_class(&tp, 6).unwrap());
    }

    #[test]
    fn feasibility_tests_agree(r in prop::collection::vec(0usize..=4, 4), c in permutation(4)) {
        let c: Vec<usize> = c.iter().map(|&x| r[x].min(3)).collect();
        let r: Vec<usize> = r.iter().map(|&x| x.min(3)).collect();
        if r.iter().sum::<usize>() == c.iter().sum::<usize>() {
            let t = EdgeType::unrestricted(r.clone(), c.clone()).unwrap();
            let gr = gale_ryser_feasible(&r, &c);
            prop_assert_eq!(gr, t.realize().is_some());
            prop_assert_eq!(gr, count_class(&t, 6).unwrap() > 0);
        }
    }

    #[test]
    fn structure_matrix_counts_blocks(g in graph(8)) {
        let t = EdgeType::unrestricted(g.out_degrees(), g.in_degrees()).unwrap();
        let nz = normalize(&t);
        let sorted = nz.to_sorted(&g);
        let s = structure_matrix(&nz.ty.r, &nz.ty.c).unwrap();
        prop_assert!(s.all_nonnegative());
        for e in 0..=g.n() {
            for f in 0..=g.n() {
                prop_assert_eq!(s.get(e, f), block_count(&sorted, e, f));
            }
        }
    }

    #[test]
    fn dual_objective_is_convex(g in graph(5), a in prop::collection::vec(-3.0f64..3.0, 10), b in prop::collection::vec(-3.0f64..3.0, 10), lam in 0.0f64..1.0) {
        let n = g.n();
        let t = EdgeType::unrestricted(g.out_degrees(), g.in_degrees()).unwrap();
        let x = DualVars { s: a[..n].to_vec(), t: a[5..5 + n].to_vec() };
        let y = DualVars { s: b[..n].to_vec(), t: b[5..5 + n].to_vec() };
        let mix = |u: &[f64], v: &[f64]| u.iter().zip(v).map(|(p, q)| lam * p + (1.0 - lam) * q).collect::<Vec<_>>();
        let z = DualVars { s: mix(&x.s, &y.s), t: mix(&x.t, &y.t) };
        let lhs = dual_objective(&t, &z);
        let rhs = lam * dual_objective(&t, &x) + (1.0 - lam) * dual_objective(&t, &y);
        prop_assert!(lhs <= rhs + 1e-9 * rhs.abs().max(1.0));
    }

    #[test]
    fn solver_lands_in_the_polytope(g in graph(6)) {
        let t = EdgeType::unrestricted(g.out_degrees(), g.in_degrees()).unwrap();
        let opts = SolverOptions::for_n(g.n());
        let sol = solve_maxent(&t, opts).unwrap();
        prop_assert!(margins_residual(&sol.graph, &t) <= opts.tol);
        prop_assert!(polytope_membership(&sol.graph, &t, opts.tol));
        prop_assert!(sol.report.entropy_nats >= (count_class(&t, 6).unwrap() as f64).ln() - 1e-9);
    }

    #[test]
    fn members_share_one_probability(g in graph(3), a in prop::collection::vec(-2.0f64..2.0, 6)) {
        let n = g.n();
        let t = EdgeType::unrestricted(g.out_degrees(), g.in_degrees()).unwrap();
        let params = FamilyDParams::new(a[..n].to_vec(), a[3..3 + n].to_vec(), DiGraph::complete(n)).unwrap();
        let f = family_d_graph(&params).unwrap();
        let pp = point_prob_for(&f, &t, SolverOptions::for_n(n)).unwrap();
        for h in enumerate_class(&t, 6).unwrap() {
            let p = graph_prob(&f, &h);
            prop_assert!((p - pp.prob).abs() <= 1e-8 * p);
        }
    }

    #[test]
    fn kl_is_nonnegative(p in prop::collection::vec(0.01f64..0.99, 4), q in prop::collection::vec(0.01f64..0.99, 4)) {
        let a = ProductRandomGraph::from_probs(2, p).unwrap();
        let b = ProductRandomGraph::from_probs(2, q).unwrap();
        prop_assert!(kl_product(&a, &b).unwrap() >= 0.0);
        prop_assert!(kl_product(&a, &a).unwrap().abs() < 1e-12);
    }

    #[test]
    fn delta_classes_grow_with_delta(g in graph(3), d1 in 0.0f64..1.5, d2 in 0.0f64..1.5) {
        let t = EdgeType::unrestricted(g.out_degrees(), g.in_degrees()).unwrap();
        let (lo, hi) = if d1 <= d2 { (d1, d2) } else { (d2, d1) };
        let dens = t.density();
        let small = enumerate_delta_class(&t, lo, dens, 6).unwrap();
        let big = enumerate_delta_class(&t, hi, dens, 6).unwrap();
        prop_assert!(small.len() <= big.len());
        let members = enumerate_class(&t, 6).unwrap();
        prop_assert!(members.iter().all(|m| small.contains(m)));
    }

    #[test]
    fn sign_variants_are_bounded(g in graph(4), d in prop::collection::vec(0usize..3, 8)) {
        let n = g.n();
        let t = EdgeType::unrestricted(g.out_degrees(), g.in_degrees()).unwrap();
        let vs = sign_variants(&t, &d[..n], &d[4..4 + n]);
        prop_assert!(vs.len() <= 1 << (2 * n));
        for v in vs {
            prop_assert_eq!(v.r.iter().sum::<usize>(), v.c.iter().sum::<usize>());
            prop_assert!(v.r.iter().chain(&v.c).all(|&x| x <= n));
        }
    }

    #[test]
    fn json_round_trips(g in graph(6), a in prop::collection::vec(-5.0f64..5.0, 12)) {
        prop_assert_eq!(DiGraph::from_json(&g.to_json()).unwrap(), g.clone());
        let t = EdgeType::new(g.out_degrees(), g.in_degrees(), g.clone()).unwrap();
        prop_assert_eq!(EdgeType::from_json(&t.to_json()).unwrap(), t);
        let n = g.n();
        let p = FamilyDParams::new(a[..n].to_vec(), a[6..6 + n].to_vec(), DiGraph::complete(n)).unwrap();
        prop_assert_eq!(FamilyDParams::from_json(&p.to_json()).unwrap(), p);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn exact_rates_are_monotone(g in graph(3)) {
        let n = g.n();
        let t = EdgeType::unrestricted(g.out_degrees(), g.in_degrees()).unwrap();
        let members = enumerate_class(&t, 6).unwrap();
        let mut prev = usize::MAX;
        for k in 0..=n {
            let e = exact_rn(&members, Distortion::new(k, n), 3).unwrap();
            prop_assert!(e.codewords <= prev);
            prev = e.codewords;
        }
    }

    #[test]
    fn probabilistic_rate_is_monotone(p in prop::collection::vec(0.05f64..0.95, 4), d in 0usize..=2) {
        let f = ProductRandomGraph::from_probs(2, p).unwrap();
        let mut prev = usize::MAX;
        for eps in [0.0, 0.05, 0.2, 0.5, 0.9, 1.0] {
            let r = exact_rn_prob(&f, Distortion::new(d, 2), eps, 3).unwrap();
            prop_assert!(r.codewords <= prev);
            prev = r.codewords;
        }
        let all: Vec<DiGraph> = (0..16).map(|c| DiGraph::from_code(2, c)).collect();
        let worst = exact_rn(&all, Distortion::new(d, 2), 3).unwrap();
        let zero = exact_rn_prob(&f, Distortion::new(d, 2), 0.0, 3).unwrap();
        prop_assert!(worst.rate_nats >= zero.rate_nats);
    }
}
