//! Random covering codebooks for a class against the exact minimum.

use edgetype::maxent::SolverOptions;
use edgetype::rd::{
    build_cover_random, class_members, cover_pool, exact_rn, lemma_ln_m, smallest_covering_m,
    verify_cover, TypeCache,
};
use edgetype::types::EdgeType;
use edgetype::Distortion;

fn main() -> edgetype::Result<()> {
    let n = 3;
    let (delta, dens) = (0.5, 1);
    let t = EdgeType::unrestricted(vec![1; n], vec![1; n])?;
    let opts = SolverOptions::for_n(n);
    let members = class_members(&t, opts.limit)?;
    let mut cache = TypeCache::new(t.w.clone(), opts);
    let seeds: Vec<u64> = (0..16).collect();
    for k in 0..n {
        let xi = k as f64 / n as f64;
        let threshold = Distortion::from_budget(xi, delta, n);
        let pool = cover_pool(&t, xi, delta, dens, opts.limit)?;
        let ln_m = lemma_ln_m(&t, xi, delta, dens, &mut cache)?;
        let hits = seeds
            .iter()
            .filter(|&&s| {
                let cb = build_cover_random(&pool, ln_m.exp(), s).expect("nonempty pool");
                verify_cover(&cb.graphs, &members, threshold).ok
            })
            .count();
        let m_min = smallest_covering_m(&pool, &members, threshold, &seeds)?;
        let exact = exact_rn(&members, threshold, 3)?;
        println!(
            "xi={k}/{n}: pool {}, ln M {ln_m:.2}, {hits}/16 seeds cover, smallest M {m_min}, optimum {} codewords",
            pool.len(),
            exact.codewords
        );
    }
    Ok(())
}
