//! Self-checks run by `verify-all` and the acceptance target.

use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::enumerate::{
    components_by_enumeration, count_class, enumerate_class, enumerate_delta_class,
    interchange_connected, invariants_by_enumeration,
};
use crate::error::Result;
use crate::graph::{DiGraph, Distortion};
use crate::maxent::{
    barvinok_bounds, dual_gradient, dual_objective, margins_residual, solve_maxent,
    solve_maxent_from, DualVars, ProductRandomGraph, SolverOptions,
};
use crate::probability::{
    class_bounds_for, decompose_single_edge, delta_class_prob_exact, delta_class_prob_lower,
    family_d_graph, graph_prob, log_graph_prob, mixture_lower_bound, point_prob_for,
    sanov_bounds, verify_mixture, FamilyDParams, MixtureDecomposition,
};
use crate::rd::{
    build_cover_random, class_members, cover_pool, exact_rn, lemma_ln_m, rd_lower, rd_upper,
    verify_cover, TypeCache,
};
use crate::types::{
    components_from_structure, gale_ryser_feasible, invariant_positions, structure_matrix,
    EdgeType,
};

/// Reference degree sequences of an 11-vertex normalized type.
pub const REFERENCE_R: [usize; 11] = [10, 10, 9, 7, 6, 6, 5, 5, 2, 2, 1];
pub const REFERENCE_C: [usize; 11] = [11, 9, 9, 8, 8, 5, 5, 3, 3, 1, 1];

/// Structure matrix of the reference type.
pub const REFERENCE_STRUCTURE: [[i64; 12]; 12] = [
    [63, 52, 43, 34, 26, 18, 13, 8, 5, 2, 1, 0],
    [53, 43, 35, 27, 20, 13, 9, 5, 3, 1, 1, 1],
    [43, 34, 27, 20, 14, 8, 5, 2, 1, 0, 1, 2],
    [34, 26, 20, 14, 9, 4, 2, 0, 0, 0, 2, 4],
    [27, 20, 15, 10, 6, 2, 1, 0, 1, 2, 5, 8],
    [21, 15, 11, 7, 4, 1, 1, 1, 3, 5, 9, 13],
    [15, 10, 7, 4, 2, 0, 1, 2, 5, 8, 13, 18],
    [10, 6, 4, 2, 1, 0, 2, 4, 8, 12, 18, 24],
    [5, 2, 1, 0, 0, 0, 3, 6, 11, 16, 23, 30],
    [3, 1, 1, 1, 2, 3, 7, 11, 17, 23, 31, 39],
    [1, 0, 1, 2, 4, 6, 11, 16, 23, 30, 39, 48],
    [0, 0, 2, 4, 7, 10, 16, 22, 30, 38, 48, 58],
];

/// Non-trivial components of the reference type, 1-based.
pub const REFERENCE_COMPONENTS: [([usize; 2], [usize; 2]); 3] =
    [([1, 2], [10, 11]), ([5, 6], [6, 7]), ([9, 10], [2, 3])];

#[derive(Debug, Clone, Serialize)]
pub struct CriterionResult {
    pub id: u8,
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
    pub seconds: f64,
}

#[derive(Debug, Clone, Copy)]
pub struct VerifyConfig {
    /// Base vertex count; criteria 2, 6 and 7 also run at `n + 1`.
    pub n: usize,
    pub seed: u64,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        VerifyConfig { n: 3, seed: 20240601 }
    }
}

pub const CRITERIA: [(u8, &str); 12] = [
    (1, "reference structure matrix and components"),
    (2, "type classes partition all graphs"),
    (3, "entropy bound on class size"),
    (4, "maximum-entropy graph is uniform on its class"),
    (5, "point probability under the logistic family"),
    (6, "invariants and components match enumeration"),
    (7, "interchange connectivity"),
    (8, "dual solver correctness"),
    (9, "delta class bounds"),
    (10, "covering and rate-distortion sandwich"),
    (11, "mixture lower bound"),
    (12, "two-sided bounds on unions of classes"),
];

/// Every `(r, c)` on `[n]` with equal totals, feasible or not.
pub fn all_degree_pairs(n: usize) -> Vec<(Vec<usize>, Vec<usize>)> {
    let vecs = crate::enumerate::product_ranges(&vec![(0, n); n]);
    let mut out = Vec::new();
    for r in &vecs {
        let sr: usize = r.iter().sum();
        for c in &vecs {
            if c.iter().sum::<usize>() == sr {
                out.push((r.clone(), c.clone()));
            }
        }
    }
    out
}

/// Every feasible unrestricted type on `[n]`.
pub fn feasible_types(n: usize) -> Vec<EdgeType> {
    all_degree_pairs(n)
        .into_iter()
        .filter(|(r, c)| gale_ryser_feasible(r, c))
        .map(|(r, c)| EdgeType::unrestricted(r, c).expect("valid lengths"))
        .collect()
}

fn rel_close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * a.abs().max(b.abs())
}

fn random_params(rng: &mut ChaCha8Rng, n: usize, spread: f64) -> FamilyDParams {
    let a = (0..n).map(|_| rng.random_range(-spread..spread)).collect();
    let b = (0..n).map(|_| rng.random_range(-spread..spread)).collect();
    FamilyDParams::new(a, b, DiGraph::complete(n)).expect("valid lengths")
}

/// Runs one criterion; internal errors count as failures.
pub fn run_criterion(id: u8, cfg: &VerifyConfig) -> CriterionResult {
    let name = CRITERIA
        .iter()
        .find(|c| c.0 == id)
        .map_or("unknown", |c| c.1);
    let start = Instant::now();
    let out = match id {
        1 => c1_reference(),
        2 => c2_partition(cfg),
        3 => c3_entropy_bound(cfg),
        4 => c4_uniformity(cfg),
        5 => c5_point_prob(cfg),
        6 => c6_oracles(cfg),
        7 => c7_interchange(cfg),
        8 => c8_dual(cfg),
        9 => c9_delta(cfg),
        10 => c10_rate_distortion(cfg),
        11 => c11_mixture(cfg),
        12 => c12_sanov(cfg),
        _ => Ok((false, "no such criterion".to_string())),
    };
    let (passed, detail) = out.unwrap_or_else(|e| (false, format!("error: {e}")));
    CriterionResult { id, name, passed, detail, seconds: start.elapsed().as_secs_f64() }
}

pub fn run_all(cfg: &VerifyConfig) -> Vec<CriterionResult> {
    CRITERIA.iter().map(|&(id, _)| run_criterion(id, cfg)).collect()
}

type Outcome = Result<(bool, String)>;

fn c1_reference() -> Outcome {
    let start = Instant::now();
    let t = EdgeType::unrestricted(REFERENCE_R.to_vec(), REFERENCE_C.to_vec())?;
    let s = structure_matrix(&t.r, &t.c)?;
    let mut mismatches = 0;
    for (e, row) in REFERENCE_STRUCTURE.iter().enumerate() {
        for (f, &v) in row.iter().enumerate() {
            if s.get(e, f) != v {
                mismatches += 1;
            }
        }
    }
    let parts = components_from_structure(&t)?;
    let mut got: Vec<(Vec<usize>, Vec<usize>)> = parts
        .nontrivial()
        .iter()
        .map(|b| {
            (
                b.rows.iter().map(|i| i + 1).collect(),
                b.cols.iter().map(|j| j + 1).collect(),
            )
        })
        .collect();
    got.sort();
    let mut want: Vec<(Vec<usize>, Vec<usize>)> = REFERENCE_COMPONENTS
        .iter()
        .map(|(r, c)| (r.to_vec(), c.to_vec()))
        .collect();
    want.sort();
    let secs = start.elapsed().as_secs_f64();
    let ok = mismatches == 0 && got == want && secs < 1.0;
    Ok((ok, format!("{mismatches} cell mismatches, components {got:?}, {secs:.3}s")))
}

fn c2_partition(cfg: &VerifyConfig) -> Outcome {
    let mut notes = Vec::new();
    let mut ok = true;
    for n in cfg.n..=cfg.n + 1 {
        let pairs = all_degree_pairs(n);
        let counts: Vec<(bool, u128)> = pairs
            .par_iter()
            .map(|(r, c)| {
                let t = EdgeType::unrestricted(r.clone(), c.clone())?;
                Ok((gale_ryser_feasible(r, c), count_class(&t, n.max(6))?))
            })
            .collect::<Result<_>>()?;
        let total: u128 = counts.iter().map(|x| x.1).sum();
        let disagree = counts.iter().filter(|(f, k)| *f != (*k > 0)).count();
        let expected = 1u128 << (n * n);
        ok &= total == expected && disagree == 0;
        notes.push(format!(
            "n={n}: sum {total} vs {expected}, {disagree} feasibility disagreements over {} pairs",
            pairs.len()
        ));
    }
    Ok((ok, notes.join("; ")))
}

fn c3_entropy_bound(cfg: &VerifyConfig) -> Outcome {
    let n = cfg.n;
    let opts = SolverOptions::for_n(n);
    let reports: Vec<_> = feasible_types(n)
        .par_iter()
        .map(|t| barvinok_bounds(t, opts))
        .collect::<Result<_>>()?;
    let mut bad = 0;
    let mut max_gap = f64::NEG_INFINITY;
    for r in &reports {
        let count = r.count.unwrap_or(0) as f64;
        if count > r.alpha * (1.0 + 1e-6) {
            bad += 1;
        }
        match r.gap {
            Some(g) if g.is_finite() => max_gap = max_gap.max(g),
            _ if n > 1 => bad += 1,
            _ => {}
        }
    }
    Ok((bad == 0, format!("{} types, {bad} violations, max gap {max_gap:.6}", reports.len())))
}

fn c4_uniformity(cfg: &VerifyConfig) -> Outcome {
    let n = cfg.n;
    let opts = SolverOptions::for_n(n);
    let types = feasible_types(n);
    let bad: usize = types
        .par_iter()
        .map(|t| -> Result<usize> {
            let sol = solve_maxent(t, opts)?;
            let target = (-sol.report.entropy_nats).exp();
            let members = enumerate_class(t, opts.limit)?;
            Ok(members
                .iter()
                .filter(|g| !rel_close(graph_prob(&sol.graph, g), target, 1e-8))
                .count())
        })
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .sum();
    Ok((bad == 0, format!("{} types, {bad} members off e^-H", types.len())))
}

fn c5_point_prob(cfg: &VerifyConfig) -> Outcome {
    let n = cfg.n;
    let opts = SolverOptions::for_n(n);
    let types = feasible_types(n);
    let classes: Vec<Vec<DiGraph>> = types
        .iter()
        .map(|t| enumerate_class(t, opts.limit))
        .collect::<Result<_>>()?;
    let results: Vec<(usize, usize)> = (0..100u64)
        .into_par_iter()
        .map(|k| -> Result<(usize, usize)> {
            let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed ^ (k * 0x9E37_79B9));
            let f = family_d_graph(&random_params(&mut rng, n, 2.0))?;
            let mut point_bad = 0;
            let mut bound_bad = 0;
            for (t, members) in types.iter().zip(&classes) {
                let pp = point_prob_for(&f, t, opts)?;
                for g in members {
                    let lp = log_graph_prob(&f, g);
                    if !rel_close(lp.exp(), pp.prob, 1e-8) {
                        point_bad += 1;
                    }
                }
                let b = class_bounds_for(&f, t, opts)?;
                let exact = b.exact.unwrap_or(f64::NAN);
                let lower = b.lower.unwrap_or(f64::INFINITY);
                if !(exact <= b.upper * (1.0 + 1e-9) && exact >= lower * (1.0 - 1e-9)) {
                    bound_bad += 1;
                }
            }
            Ok((point_bad, bound_bad))
        })
        .collect::<Result<_>>()?;
    let pb: usize = results.iter().map(|x| x.0).sum();
    let bb: usize = results.iter().map(|x| x.1).sum();
    Ok((
        pb == 0 && bb == 0,
        format!("100 parameter draws x {} types: {pb} point mismatches, {bb} bound violations", types.len()),
    ))
}

fn c6_oracles(cfg: &VerifyConfig) -> Outcome {
    let mut notes = Vec::new();
    let mut ok = true;
    for n in 1..=cfg.n + 1 {
        let types: Vec<EdgeType> = feasible_types(n).into_iter().filter(|t| t.is_normalized()).collect();
        let bad: usize = types
            .par_iter()
            .map(|t| -> Result<usize> {
                let limit = n.max(6);
                let mut bad = 0;
                if invariant_positions(t)? != invariants_by_enumeration(t, limit)? {
                    bad += 1;
                }
                let a = components_from_structure(t)?;
                let b = components_by_enumeration(t, limit)?;
                if a != b {
                    bad += 1;
                }
                Ok(bad)
            })
            .collect::<Result<Vec<_>>>()?
            .into_iter()
            .sum();
        ok &= bad == 0;
        notes.push(format!("n={n}: {} normalized types, {bad} mismatches", types.len()));
    }
    Ok((ok, notes.join("; ")))
}

fn c7_interchange(cfg: &VerifyConfig) -> Outcome {
    let mut notes = Vec::new();
    let mut ok = true;
    for n in 1..=cfg.n + 1 {
        let types = feasible_types(n);
        let bad = types
            .par_iter()
            .map(|t| interchange_connected(t, n.max(6)).map(|r| usize::from(!r.connected)))
            .collect::<Result<Vec<_>>>()?
            .into_iter()
            .sum::<usize>();
        ok &= bad == 0;
        notes.push(format!("n={n}: {} types, {bad} disconnected", types.len()));
    }
    Ok((ok, notes.join("; ")))
}

fn c8_dual(cfg: &VerifyConfig) -> Outcome {
    let n = cfg.n;
    let opts = SolverOptions::for_n(n);
    let types = feasible_types(n);
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut grad_bad = 0;
    let h = 1e-5;
    for _ in 0..50 {
        let t = &types[rng.random_range(0..types.len())];
        let v = DualVars {
            s: (0..n).map(|_| rng.random_range(-3.0..3.0)).collect(),
            t: (0..n).map(|_| rng.random_range(-3.0..3.0)).collect(),
        };
        let g = dual_gradient(t, &v);
        for k in 0..2 * n {
            let mut up = v.clone();
            let mut dn = v.clone();
            let analytic = if k < n {
                up.s[k] += h;
                dn.s[k] -= h;
                g.s[k]
            } else {
                up.t[k - n] += h;
                dn.t[k - n] -= h;
                g.t[k - n]
            };
            let fd = (dual_objective(t, &up) - dual_objective(t, &dn)) / (2.0 * h);
            if (fd - analytic).abs() > 1e-5 * analytic.abs().max(1.0) {
                grad_bad += 1;
            }
        }
    }
    let mut resid_bad = 0;
    let mut restart_bad = 0;
    let mut worst_spread: f64 = 0.0;
    for (k, t) in types.iter().enumerate() {
        let sol = solve_maxent(t, opts)?;
        if margins_residual(&sol.graph, t) > opts.tol {
            resid_bad += 1;
        }
        let mut trng = ChaCha8Rng::seed_from_u64(cfg.seed.wrapping_add(k as u64));
        for _ in 0..10 {
            let start = DualVars {
                s: (0..n).map(|_| trng.random_range(-4.0..4.0)).collect(),
                t: (0..n).map(|_| trng.random_range(-4.0..4.0)).collect(),
            };
            let again = solve_maxent_from(t, opts, Some(&start))?;
            let spread = (again.report.entropy_nats - sol.report.entropy_nats).abs();
            worst_spread = worst_spread.max(spread);
            if spread > 1e-8 {
                restart_bad += 1;
            }
        }
    }
    Ok((
        grad_bad == 0 && resid_bad == 0 && restart_bad == 0,
        format!(
            "{grad_bad} gradient mismatches, {resid_bad} residuals above tol over {} types, {restart_bad} restart disagreements (max spread {worst_spread:.2e})",
            types.len()
        ),
    ))
}

fn c9_delta(cfg: &VerifyConfig) -> Outcome {
    let n = cfg.n;
    let nn = n as f64;
    let opts = SolverOptions::for_n(n);
    let types = feasible_types(n);
    let infos: Vec<(f64, f64)> = types
        .par_iter()
        .map(|t| -> Result<(f64, f64)> {
            let sol = solve_maxent(t, opts)?;
            let count = count_class(t, opts.limit)? as f64;
            let h = sol.report.entropy_nats;
            let gap = if n > 1 { (h - count.ln()) / (nn * nn.ln()) } else { 0.0 };
            Ok((h, gap))
        })
        .collect::<Result<_>>()?;
    let mut card_checked = 0;
    let mut card_bad = 0;
    for &delta in &[0.1, 0.25, 0.4, 0.5] {
        for dens in 1..=3usize {
            for (t, &(h, gap)) in types.iter().zip(&infos) {
                if t.density() != dens {
                    continue;
                }
                let size = enumerate_delta_class(t, delta, dens, opts.limit)?.len() as f64;
                let normalized = (size.ln() - h) / (nn * nn);
                let upper = crate::maxent::binary_entropy(delta.min(0.5)) + (nn * dens as f64).ln() / (nn * nn);
                let lower = -gap.max(0.0) * nn.ln() / nn;
                card_checked += 1;
                if !(normalized < upper && normalized >= lower - 1e-12) {
                    card_bad += 1;
                }
            }
        }
    }
    let mut prob_checked = 0;
    let mut prob_bad = 0;
    for &delta in &[0.1, 0.25, 0.5, 1.0, 1.5] {
        for dens in 1..=3usize {
            let bound = delta_class_prob_lower(n, delta, dens);
            if bound <= 0.0 {
                continue;
            }
            for t in &types {
                let sol = solve_maxent(t, opts)?;
                let p = delta_class_prob_exact(&sol.graph, t, delta, dens, opts.limit)?;
                prob_checked += 1;
                if p < bound {
                    prob_bad += 1;
                }
            }
        }
    }
    Ok((
        card_bad == 0 && prob_bad == 0,
        format!("cardinality {card_bad}/{card_checked} violations, probability {prob_bad}/{prob_checked} violations"),
    ))
}

fn c10_rate_distortion(cfg: &VerifyConfig) -> Outcome {
    let n = 3;
    let opts = SolverOptions::for_n(n);
    let t = EdgeType::unrestricted(vec![1; n], vec![1; n])?;
    let (delta, delta_hat, dens) = (0.5, 0.25, 1);
    let members = class_members(&t, opts.limit)?;
    let mut cache = TypeCache::new(t.w.clone(), opts);
    let mut ok = true;
    let mut notes = Vec::new();
    for k in 0..=2usize {
        let xi = k as f64 / n as f64;
        let threshold = Distortion::from_budget(xi, delta, n);
        let pool = cover_pool(&t, xi, delta, dens, opts.limit)?;
        let m = lemma_ln_m(&t, xi, delta, dens, &mut cache)?.exp();
        let mut covered = 0;
        for s in 0..16u64 {
            let cb = build_cover_random(&pool, m, cfg.seed.wrapping_add(s))?;
            if verify_cover(&cb.graphs, &members, threshold).ok {
                covered += 1;
            }
        }
        let exact = exact_rn(&members, threshold, 3)?;
        let up = rd_upper(&t, xi, delta, dens, &mut cache)?;
        let lo = rd_lower(&t, xi, delta, delta_hat, dens, &mut cache)?;
        let up_ok = exact.rate_nats <= up.bound_nats + 1e-12;
        let lo_ok = lo.bound_nats <= exact.rate_nats + 1e-12;
        ok &= covered >= 1;
        if up.applicable {
            ok &= up_ok;
        }
        if lo.applicable {
            ok &= lo_ok;
        }
        notes.push(format!(
            "xi={k}/3: cover {covered}/16 (pool {}, ln M {:.2}), exact {:.4} in [{:.4}{}, {:.4}{}]",
            pool.len(),
            m.ln(),
            exact.rate_nats,
            lo.bound_nats,
            if lo.applicable { "" } else { " flagged" },
            up.bound_nats,
            if up.applicable { "" } else { " flagged" },
        ));
        if !up_ok || !lo_ok {
            notes.push(format!("xi={k}/3: sandwich fails (upper ok {up_ok}, lower ok {lo_ok})"));
        }
    }
    let mut prev = usize::MAX;
    let mut monotone = true;
    for k in 0..=n {
        let e = exact_rn(&members, Distortion::new(k, n), 3)?;
        monotone &= e.codewords <= prev;
        prev = e.codewords;
    }
    ok &= monotone;
    notes.push(format!("exact rate monotone in d: {monotone}"));
    Ok((ok, notes.join("; ")))
}

fn check_mixture(mix: &MixtureDecomposition, opts: SolverOptions, types: &[(EdgeType, Vec<DiGraph>)]) -> Result<usize> {
    let p = mix.mixed_graph()?;
    let mut bad = 0;
    for (t, members) in types {
        let bound = mixture_lower_bound(mix, t, opts)?;
        for g in members {
            if bound > graph_prob(&p, g) * (1.0 + 1e-8) {
                bad += 1;
            }
        }
    }
    Ok(bad)
}

fn c11_mixture(cfg: &VerifyConfig) -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed ^ 0x11);
    let mut bad = 0;
    let mut instances = 0;
    let mut round_trip_bad = 0;
    for (n, draws) in [(2usize, 40usize), (cfg.n, 20)] {
        let opts = SolverOptions::for_n(n);
        let classes: Vec<(EdgeType, Vec<DiGraph>)> = feasible_types(n)
            .into_iter()
            .map(|t| {
                let m = enumerate_class(&t, opts.limit)?;
                Ok((t, m))
            })
            .collect::<Result<_>>()?;
        for _ in 0..draws {
            let k = rng.random_range(1..=4usize);
            let raw: Vec<f64> = (0..k).map(|_| rng.random_range(0.05..1.0)).collect();
            let s: f64 = raw.iter().sum();
            let lambda: Vec<f64> = raw.iter().map(|x| x / s).collect();
            let atoms = (0..k).map(|_| random_params(&mut rng, n, 2.5)).collect();
            let mix = MixtureDecomposition { lambda, atoms };
            bad += check_mixture(&mix, opts, &classes)?;
            instances += 1;
            // Single-cell decompositions of a small-mass product graph.
            let scale = rng.random_range(0.1..0.95) / (n * n) as f64;
            let probs: Vec<f64> = (0..n * n).map(|_| scale * rng.random_range(0.0..1.0)).collect();
            let p = ProductRandomGraph::from_probs(n, probs)?;
            let dec = decompose_single_edge(&p)?;
            if !verify_mixture(&p, &dec, 1e-12) {
                round_trip_bad += 1;
            }
            bad += check_mixture(&dec, opts, &classes)?;
            instances += 1;
        }
    }
    Ok((
        bad == 0 && round_trip_bad == 0,
        format!("{instances} mixtures: {bad} bound violations, {round_trip_bad} round-trip failures"),
    ))
}

fn c12_sanov(cfg: &VerifyConfig) -> Outcome {
    let n = cfg.n;
    let opts = SolverOptions::for_n(n);
    let types = feasible_types(n);
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed ^ 0x12);
    let mut bad = 0;
    let mut tightest = f64::INFINITY;
    for _ in 0..50 {
        let params = random_params(&mut rng, n, 2.0);
        let k = rng.random_range(1..=6usize);
        let chosen: Vec<EdgeType> = (0..k).map(|_| types[rng.random_range(0..types.len())].clone()).collect();
        let rep = sanov_bounds(&params, &chosen, opts)?;
        let exact = rep.exact.unwrap_or(f64::NAN);
        let lower = rep.lower.unwrap_or(f64::INFINITY);
        if !(exact >= lower * (1.0 - 1e-9) && exact <= rep.upper * (1.0 + 1e-9)) {
            bad += 1;
        }
        tightest = tightest.min(exact / lower);
    }
    Ok((bad == 0, format!("50 instances, {bad} violations, min exact/lower {tightest:.3}")))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn degree_pair_counts() {
        assert_eq!(all_degree_pairs(1).len(), 2);
        assert_eq!(feasible_types(1).len(), 2);
        // Vectors per total 0..=4 are 1, 2, 3, 2, 1.
        assert_eq!(all_degree_pairs(2).len(), 1 + 4 + 9 + 4 + 1);
        let total: u128 = feasible_types(2).iter().map(|t| count_class(t, 6).unwrap()).sum();
        assert_eq!(total, 16);
    }

    #[test]
    fn reference_criterion() {
        let r = run_criterion(1, &VerifyConfig::default());
        assert!(r.passed, "{}", r.detail);
    }
}
