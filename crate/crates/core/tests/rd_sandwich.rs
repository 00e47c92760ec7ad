use edgetype::enumerate::enumerate_conditional;
use edgetype::maxent::SolverOptions;
use edgetype::rd::{
    build_cover_random, class_members, cover_pool, exact_rn, lemma_ln_m, omega_iter, rd_lower,
    rd_upper, verify_cover, TypeCache,
};
use edgetype::types::EdgeType;
use edgetype::verify::feasible_types;
use edgetype::{DiGraph, Distortion};

const DELTA: f64 = 0.5;
const DELTA_HAT: f64 = 0.25;

fn sandwich(n: usize) {
    let opts = SolverOptions::for_n(n);
    let mut cache = TypeCache::new(DiGraph::complete(n), opts);
    let (mut asserted, mut flagged, mut flagged_fail) = (0, 0, 0);
    for t in feasible_types(n) {
        let members = class_members(&t, 6).unwrap();
        let dens = t.density();
        for k in 0..=n {
            let xi = k as f64 / n as f64;
            let ex = exact_rn(&members, Distortion::from_budget(xi, DELTA, n), 3).unwrap();
            let up = rd_upper(&t, xi, DELTA, dens, &mut cache).unwrap();
            let lo = rd_lower(&t, xi, DELTA, DELTA_HAT, dens, &mut cache).unwrap();
            assert!(lo.bound_nats >= 0.0);
            let up_ok = ex.rate_nats <= up.bound_nats + 1e-12;
            let lo_ok = lo.bound_nats <= ex.rate_nats + 1e-12;
            if up.applicable {
                assert!(up_ok, "upper fails for {:?} {:?} xi={xi}", t.r, t.c);
                asserted += 1;
            } else {
                flagged += 1;
                flagged_fail += usize::from(!up_ok);
            }
            if lo.applicable {
                assert!(lo_ok, "lower fails for {:?} {:?} xi={xi}", t.r, t.c);
                asserted += 1;
            } else {
                flagged += 1;
                flagged_fail += usize::from(!lo_ok);
            }
        }
    }
    println!("n={n}: {asserted} asserted comparisons, {flagged} flagged ({flagged_fail} flagged comparisons fail)");
}

#[test]
fn sandwich_two_vertices() {
    sandwich(2);
}

#[test]
fn sandwich_three_vertices() {
    sandwich(3);
}

#[test]
fn conditional_neighbors_stay_within_budget() {
    let n = 3;
    for t in [
        EdgeType::unrestricted(vec![1, 1, 1], vec![1, 1, 1]).unwrap(),
        EdgeType::unrestricted(vec![2, 1, 0], vec![1, 1, 1]).unwrap(),
    ] {
        for k in 0..=n {
            let xi = k as f64 / n as f64;
            let limit = Distortion::from_budget(xi, DELTA, n);
            for g in class_members(&t, 6).unwrap() {
                for (dr, dc) in omega_iter(xi, n) {
                    let Ok(d) = EdgeType::unrestricted(dr, dc) else { continue };
                    let hs = enumerate_conditional(&d, &g, Some((DELTA, t.density())), 6).unwrap();
                    for h in hs {
                        assert!(g.distortion(&h).unwrap() <= limit);
                    }
                }
            }
        }
    }
}

#[test]
fn lemma_codebooks_cover_for_some_seed() {
    let n = 3;
    let opts = SolverOptions::for_n(n);
    let mut cache = TypeCache::new(DiGraph::complete(n), opts);
    for t in [
        EdgeType::unrestricted(vec![1, 1, 1], vec![1, 1, 1]).unwrap(),
        EdgeType::unrestricted(vec![2, 1, 1], vec![1, 2, 1]).unwrap(),
        EdgeType::unrestricted(vec![3, 0, 0], vec![1, 1, 1]).unwrap(),
    ] {
        let dens = t.density();
        let members = class_members(&t, 6).unwrap();
        for k in 0..=n {
            let xi = k as f64 / n as f64;
            let pool = cover_pool(&t, xi, DELTA, dens, 6).unwrap();
            let m = lemma_ln_m(&t, xi, DELTA, dens, &mut cache).unwrap().exp();
            let threshold = Distortion::from_budget(xi, DELTA, n);
            let ok = (0..16).any(|s| {
                let cb = build_cover_random(&pool, m, s).unwrap();
                verify_cover(&cb.graphs, &members, threshold).ok
            });
            assert!(ok, "{:?} {:?} xi={xi}", t.r, t.c);
        }
    }
}
