//! Distortion budgets, covering codebooks and rate-distortion bounds.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::enumerate::{count_class, enumerate_class, enumerate_delta_class};
use crate::error::{Error, Result};
use crate::graph::{all_graphs, DiGraph, Distortion};
use crate::maxent::{binary_entropy, solve_maxent, ProductRandomGraph, SolverOptions};
use crate::types::EdgeType;

/// Largest per-vertex distortion degree allowed by the budget `xi`.
pub fn omega_k(xi: f64, n: usize) -> usize {
    ((xi * n as f64 + 1e-9).floor().max(0.0) as usize).min(n)
}

/// `|Omega(xi)| = (k + 1)^{2n}`.
pub fn omega_size(xi: f64, n: usize) -> f64 {
    ((omega_k(xi, n) + 1) as f64).powi(2 * n as i32)
}

/// Lazy iteration over all pairs `(d_r, d_c)` with entries in `0..=k`.
pub fn omega_iter(xi: f64, n: usize) -> impl Iterator<Item = (Vec<usize>, Vec<usize>)> {
    let base = (omega_k(xi, n) + 1) as u128;
    let total = base.checked_pow(2 * n as u32).unwrap_or(u128::MAX);
    (0..total).map(move |mut code| {
        let mut v = Vec::with_capacity(2 * n);
        for _ in 0..2 * n {
            v.push((code % base) as usize);
            code /= base;
        }
        let dc = v.split_off(n);
        (v, dc)
    })
}

/// Materialized `Omega(xi)`, refused above `cap` elements.
pub fn omega(xi: f64, n: usize, cap: usize) -> Result<Vec<(Vec<usize>, Vec<usize>)>> {
    if !(xi >= 0.0) {
        return Err(Error::InvalidInput("xi must be nonnegative".into()));
    }
    let size = omega_size(xi, n);
    if size > cap as f64 {
        return Err(Error::LimitExceeded {
            what: "omega size".into(),
            size: size.min(usize::MAX as f64) as usize,
            limit: cap,
        });
    }
    Ok(omega_iter(xi, n).collect())
}

fn signed_vectors(base: &[usize], d: &[usize], n: usize) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::with_capacity(base.len())];
    for (&b, &di) in base.iter().zip(d) {
        let mut opts = vec![];
        if b + di <= n {
            opts.push(b + di);
        }
        if di > 0 && di <= b {
            opts.push(b - di);
        }
        out = out
            .into_iter()
            .flat_map(|p| {
                opts.iter().map(move |&v| {
                    let mut q = p.clone();
                    q.push(v);
                    q
                })
            })
            .collect();
    }
    out
}

/// All `(r +- d_r, c +- d_c)` in range with equal totals, deduplicated.
pub fn sign_variants(t: &EdgeType, d_r: &[usize], d_c: &[usize]) -> Vec<EdgeType> {
    let n = t.n();
    let rs = signed_vectors(&t.r, d_r, n);
    let cs = signed_vectors(&t.c, d_c, n);
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    for r in &rs {
        let sr: usize = r.iter().sum();
        for c in &cs {
            if c.iter().sum::<usize>() == sr && seen.insert((r.clone(), c.clone())) {
                out.push(EdgeType { r: r.clone(), c: c.clone(), w: t.w.clone() });
            }
        }
    }
    out
}

/// Entropy, measured gap and density of a feasible type.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct TypeInfo {
    pub entropy: f64,
    pub gap: Option<f64>,
    pub density: usize,
}

type Key = (Vec<usize>, Vec<usize>);

/// Maximum-entropy solutions of many types sharing one restriction graph.
pub struct TypeCache {
    w: DiGraph,
    opts: SolverOptions,
    map: HashMap<Key, Option<TypeInfo>>,
}

impl TypeCache {
    pub fn new(w: DiGraph, opts: SolverOptions) -> Self {
        TypeCache { w, opts, map: HashMap::new() }
    }

    fn compute(&self, key: &Key) -> Result<Option<TypeInfo>> {
        let t = EdgeType::new(key.0.clone(), key.1.clone(), self.w.clone())?;
        if !t.is_feasible() {
            return Ok(None);
        }
        let sol = solve_maxent(&t, self.opts)?;
        let n = t.n();
        let h = sol.report.entropy_nats;
        let gap = if n > 1 && n <= self.opts.limit {
            let count = count_class(&t, self.opts.limit)?;
            Some((h - (count as f64).ln()) / (n as f64 * (n as f64).ln()))
        } else {
            None
        };
        Ok(Some(TypeInfo { entropy: h, gap, density: t.density() }))
    }

    /// Solves every missing key in parallel.
    pub fn fill(&mut self, keys: impl IntoIterator<Item = Key>) -> Result<()> {
        let mut missing: Vec<Key> = keys.into_iter().filter(|k| !self.map.contains_key(k)).collect();
        missing.sort();
        missing.dedup();
        let solved: Vec<(Key, Result<Option<TypeInfo>>)> = missing
            .into_par_iter()
            .map(|k| {
                let v = self.compute(&k);
                (k, v)
            })
            .collect();
        for (k, v) in solved {
            self.map.insert(k, v?);
        }
        Ok(())
    }

    pub fn get(&mut self, r: &[usize], c: &[usize]) -> Result<Option<TypeInfo>> {
        let key = (r.to_vec(), c.to_vec());
        if let Some(v) = self.map.get(&key) {
            return Ok(*v);
        }
        let v = self.compute(&key)?;
        self.map.insert(key, v);
        Ok(v)
    }
}

/// Entropy of a distortion type; the all-zero pair is the empty graph.
fn distortion_info(cache: &mut TypeCache, d_r: &[usize], d_c: &[usize]) -> Result<Option<TypeInfo>> {
    if d_r.iter().chain(d_c).all(|&x| x == 0) {
        return Ok(Some(TypeInfo { entropy: 0.0, gap: Some(0.0), density: 1 }));
    }
    cache.get(d_r, d_c)
}

/// One scanned `(d_r, d_c)` with its chosen variant.
#[derive(Debug, Clone, Serialize)]
pub struct OmegaChoice {
    pub d_r: Vec<usize>,
    pub d_c: Vec<usize>,
    pub r: Vec<usize>,
    pub c: Vec<usize>,
    pub entropy_variant: f64,
    pub entropy_distortion: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct OmegaScan {
    /// Maximum over pairs and variants of `H(variant) - H(distortion type)`.
    pub max_diff: f64,
    pub argmax: OmegaChoice,
    /// Minimum over pairs of `H(T) - H(distortion type)`.
    pub min_diff: f64,
    pub argmin: OmegaChoice,
    pub density_preserved: bool,
    pub density_violations: usize,
    /// Largest measured gap among `t` and the feasible distortion types.
    pub gap: Option<f64>,
    pub pairs_scanned: usize,
}

/// Full scan of `Omega(xi)` for the entropy terms of both bounds.
pub fn scan_omega(t: &EdgeType, xi: f64, dens: usize, cache: &mut TypeCache) -> Result<OmegaScan> {
    let n = t.n();
    if !t.is_feasible() {
        return Err(Error::EmptyClass);
    }
    let pairs: Vec<Key> = omega_iter(xi, n).collect();
    let mut keys: Vec<Key> = vec![(t.r.clone(), t.c.clone())];
    for (dr, dc) in &pairs {
        keys.push((dr.clone(), dc.clone()));
        for v in sign_variants(t, dr, dc) {
            keys.push((v.r, v.c));
        }
    }
    cache.fill(keys)?;
    let base = cache.get(&t.r, &t.c)?.ok_or(Error::EmptyClass)?;
    let mut gap = base.gap;
    let mut best_max: Option<(f64, OmegaChoice)> = None;
    let mut best_min: Option<(f64, OmegaChoice)> = None;
    let mut violations = 0usize;
    for (dr, dc) in &pairs {
        let Some(dinfo) = distortion_info(cache, dr, dc)? else {
            continue;
        };
        gap = match (gap, dinfo.gap) {
            (Some(a), Some(b)) => Some(a.max(b)),
            _ => None,
        };
        let diff_min = base.entropy - dinfo.entropy;
        if best_min.as_ref().is_none_or(|(v, _)| diff_min < *v) {
            best_min = Some((
                diff_min,
                OmegaChoice {
                    d_r: dr.clone(),
                    d_c: dc.clone(),
                    r: t.r.clone(),
                    c: t.c.clone(),
                    entropy_variant: base.entropy,
                    entropy_distortion: dinfo.entropy,
                },
            ));
        }
        for v in sign_variants(t, dr, dc) {
            let Some(vinfo) = cache.get(&v.r, &v.c)? else {
                continue;
            };
            if vinfo.density != dens {
                violations += 1;
            }
            let diff = vinfo.entropy - dinfo.entropy;
            if best_max.as_ref().is_none_or(|(m, _)| diff > *m) {
                best_max = Some((
                    diff,
                    OmegaChoice {
                        d_r: dr.clone(),
                        d_c: dc.clone(),
                        r: v.r.clone(),
                        c: v.c.clone(),
                        entropy_variant: vinfo.entropy,
                        entropy_distortion: dinfo.entropy,
                    },
                ));
            }
        }
    }
    let (max_diff, argmax) = best_max.ok_or(Error::EmptyClass)?;
    let (min_diff, argmin) = best_min.ok_or(Error::EmptyClass)?;
    Ok(OmegaScan {
        max_diff,
        argmax,
        min_diff,
        argmin,
        density_preserved: violations == 0,
        density_violations: violations,
        gap,
        pairs_scanned: pairs.len(),
    })
}

fn hb_capped(delta: f64) -> f64 {
    binary_entropy(delta.clamp(0.0, 0.5))
}

#[derive(Debug, Clone, Serialize)]
pub struct CardinalityBounds {
    /// Lower bound on `(ln |T_delta| - H) / n^2`.
    pub lower: f64,
    /// Upper bound on `(ln |T_delta| - H) / n^2`.
    pub upper: f64,
    pub entropy: f64,
    pub gap: Option<f64>,
    pub exact_size: Option<u128>,
    /// `(ln |T_delta| - H) / n^2` when the delta class was enumerated.
    pub exact_normalized: Option<f64>,
}

/// `-g ln n / n <= (ln |T_delta| - H) / n^2 <= H_b(delta) + ln(n dens) / n^2`.
pub fn delta_class_cardinality_bounds(
    t: &EdgeType,
    delta: f64,
    dens: usize,
    opts: SolverOptions,
) -> Result<CardinalityBounds> {
    let n = t.n();
    let nn = n as f64;
    let sol = solve_maxent(t, opts)?;
    let h = sol.report.entropy_nats;
    let (gap, exact_size) = if n <= opts.limit {
        let count = count_class(t, opts.limit)?;
        let gap = (n > 1).then(|| (h - (count as f64).ln()) / (nn * nn.ln()));
        let size = enumerate_delta_class(t, delta, dens, opts.limit)?.len() as u128;
        (gap, Some(size))
    } else {
        (None, None)
    };
    let lower = match gap {
        Some(g) => -g * nn.ln() / nn,
        None => 0.0,
    };
    let upper = hb_capped(delta) + (nn * dens as f64).ln() / (nn * nn);
    Ok(CardinalityBounds {
        lower,
        upper,
        entropy: h,
        gap,
        exact_size,
        exact_normalized: exact_size.map(|s| ((s as f64).ln() - h) / (nn * nn)),
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct HighProbBound {
    /// Lower bound on `ln |A| / n^2` for any set `A` of probability at least `eta`.
    pub value: f64,
    pub vacuous: bool,
    pub gap: Option<f64>,
    pub precondition_lhs: f64,
}

/// Lower bound on the normalized log-size of any set with probability at least `eta`.
pub fn high_prob_set_lower(
    t: &EdgeType,
    delta_hat: f64,
    eta: f64,
    dens: usize,
    opts: SolverOptions,
) -> Result<HighProbBound> {
    let n = t.n();
    let nn = n as f64;
    let d = dens as f64;
    let sol = solve_maxent(t, opts)?;
    let h = sol.report.entropy_nats;
    let gap = if n > 1 && n <= opts.limit {
        let count = count_class(t, opts.limit)?;
        Some((h - (count as f64).ln()) / (nn * nn.ln()))
    } else {
        None
    };
    let g = gap.unwrap_or(0.0).max(0.0);
    let lhs = 4.0 * nn * (-2.0 * d * d * delta_hat * delta_hat / nn).exp();
    let vacuous = !(lhs <= eta / 2.0) || gap.is_none() && n > 1;
    let value = h / (nn * nn) - hb_capped(delta_hat) + (eta / 2.0).ln() / (nn * nn)
        - g * nn.ln() / nn
        - (2.0 / nn) * (d + 1.0).ln()
        - (nn * d).ln() / (nn * nn);
    Ok(HighProbBound { value, vacuous, gap, precondition_lhs: lhs })
}

/// A report with every additive term of a bound named.
#[derive(Debug, Clone, Serialize)]
pub struct RdReport {
    /// Rate per potential edge in nats (the lower bound is clamped at zero).
    pub bound_nats: f64,
    pub bound_bits: f64,
    /// Unclamped value in nats.
    pub raw_nats: f64,
    pub entropy_term: f64,
    pub slack: BTreeMap<String, f64>,
    pub flags: BTreeMap<String, bool>,
    /// True when every hypothesis of the bound holds.
    pub applicable: bool,
    pub choice: OmegaChoice,
    pub xi: f64,
    pub delta: f64,
    pub dens: usize,
    pub gap: Option<f64>,
}

const LN2: f64 = std::f64::consts::LN_2;

/// Upper bound on `R_n(xi + delta / n)` in nats per potential edge.
pub fn rd_upper(t: &EdgeType, xi: f64, delta: f64, dens: usize, cache: &mut TypeCache) -> Result<RdReport> {
    let n = t.n();
    let nn = n as f64;
    let scan = scan_omega(t, xi, dens, cache)?;
    let g = scan.gap.unwrap_or(0.0).max(0.0);
    let mut slack = BTreeMap::new();
    slack.insert("omega_count".to_string(), (2.0 * xi * nn + 2.0) * nn.ln() / (nn * nn));
    slack.insert("binary_entropy_delta".to_string(), hb_capped(delta));
    slack.insert("density".to_string(), (nn * dens as f64).ln() / (nn * nn));
    slack.insert("gap".to_string(), g * nn.ln() / nn);
    slack.insert("one_over_n".to_string(), 1.0 / nn);
    let entropy_term = scan.max_diff / (nn * nn);
    let raw = entropy_term + slack.values().sum::<f64>();
    let mut flags = BTreeMap::new();
    flags.insert("density_preserved".to_string(), scan.density_preserved);
    flags.insert("gap_measured".to_string(), scan.gap.is_some() || n == 1);
    let applicable = flags.values().all(|&b| b);
    Ok(RdReport {
        bound_nats: raw,
        bound_bits: raw / LN2,
        raw_nats: raw,
        entropy_term,
        slack,
        flags,
        applicable,
        choice: scan.argmax,
        xi,
        delta,
        dens,
        gap: scan.gap,
    })
}

/// Lower bound on `R_n(xi + delta / n)` in nats per potential edge, clamped at zero.
pub fn rd_lower(
    t: &EdgeType,
    xi: f64,
    delta: f64,
    delta_hat: f64,
    dens: usize,
    cache: &mut TypeCache,
) -> Result<RdReport> {
    let n = t.n();
    let nn = n as f64;
    let d = dens as f64;
    let scan = scan_omega(t, xi, dens, cache)?;
    let g = scan.gap.unwrap_or(0.0).max(0.0);
    let mut slack = BTreeMap::new();
    slack.insert("binary_entropies".to_string(), -(hb_capped(delta_hat) + hb_capped(delta)));
    slack.insert("half".to_string(), 0.5f64.ln() / (nn * nn));
    slack.insert("type_count".to_string(), -(2.0 + g) * (nn + 1.0).ln() / nn);
    slack.insert("density".to_string(), -2.0 * (nn * d).ln() / (nn * nn));
    slack.insert("omega_count".to_string(), -2.0 * (xi * nn + 1.0) * nn.ln() / (nn * nn));
    let entropy_term = scan.min_diff / (nn * nn);
    let raw = entropy_term + slack.values().sum::<f64>();
    let lhs = 4.0 * nn * (-2.0 * d * d * delta_hat * delta_hat / nn).exp();
    let mut flags = BTreeMap::new();
    flags.insert("density_preserved".to_string(), scan.density_preserved);
    flags.insert("concentration".to_string(), lhs < 0.5);
    flags.insert("delta_hat_range".to_string(), (0.0..0.5).contains(&delta_hat));
    flags.insert("gap_measured".to_string(), scan.gap.is_some() || n == 1);
    let applicable = flags.values().all(|&b| b);
    let bound = raw.max(0.0);
    Ok(RdReport {
        bound_nats: bound,
        bound_bits: bound / LN2,
        raw_nats: raw,
        entropy_term,
        slack,
        flags,
        applicable,
        choice: scan.argmin,
        xi,
        delta,
        dens,
        gap: scan.gap,
    })
}

/// `ln M` for the random covering construction.
pub fn lemma_ln_m(t: &EdgeType, xi: f64, delta: f64, dens: usize, cache: &mut TypeCache) -> Result<f64> {
    let n = t.n();
    let nn = n as f64;
    let scan = scan_omega(t, xi, dens, cache)?;
    let g = scan.gap.unwrap_or(0.0).max(0.0);
    Ok(scan.max_diff
        + (2.0 * xi * nn + 2.0) * nn.ln()
        + nn * nn * hb_capped(delta)
        + (nn * dens as f64).ln()
        + g * nn * nn.ln()
        + nn)
}

/// Union of the delta classes of every sign variant over `Omega(xi)`, sorted.
pub fn cover_pool(t: &EdgeType, xi: f64, delta: f64, dens: usize, limit: usize) -> Result<Vec<DiGraph>> {
    let n = t.n();
    let mut variants = BTreeSet::new();
    for (dr, dc) in omega_iter(xi, n) {
        for v in sign_variants(t, &dr, &dc) {
            variants.insert((v.r, v.c));
        }
    }
    let classes: Vec<Vec<DiGraph>> = variants
        .into_par_iter()
        .map(|(r, c)| {
            let v = EdgeType { r, c, w: t.w.clone() };
            enumerate_delta_class(&v, delta, dens, limit)
        })
        .collect::<Result<_>>()?;
    let pool: BTreeSet<DiGraph> = classes.into_iter().flatten().collect();
    if pool.is_empty() {
        return Err(Error::EmptyClass);
    }
    Ok(pool.into_iter().collect())
}

#[derive(Debug, Clone, Serialize)]
pub struct Codebook {
    pub graphs: Vec<DiGraph>,
    pub seed: u64,
    pub m_target: f64,
    pub draws: u64,
}

/// Draws `m` uniform pool elements with replacement; `m >= |pool|` takes the whole pool.
pub fn build_cover_random(pool: &[DiGraph], m: f64, seed: u64) -> Result<Codebook> {
    if pool.is_empty() {
        return Err(Error::EmptyClass);
    }
    if !(m >= 0.0) {
        return Err(Error::InvalidInput("M must be nonnegative".into()));
    }
    if m >= pool.len() as f64 {
        return Ok(Codebook { graphs: pool.to_vec(), seed, m_target: m, draws: 0 });
    }
    let draws = m.floor() as u64;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut picked = BTreeSet::new();
    for _ in 0..draws {
        picked.insert(rng.random_range(0..pool.len()));
    }
    Ok(Codebook {
        graphs: picked.into_iter().map(|k| pool[k].clone()).collect(),
        seed,
        m_target: m,
        draws,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct CoverCheck {
    pub ok: bool,
    pub worst: Option<DiGraph>,
    pub worst_distortion: Option<Distortion>,
}

/// Checks `min over codebook d(G, H) <= threshold` for every `G` in `members`.
pub fn verify_cover(codebook: &[DiGraph], members: &[DiGraph], threshold: Distortion) -> CoverCheck {
    let mut worst: Option<(usize, &DiGraph)> = None;
    for g in members {
        let best = codebook.iter().map(|h| g.distortion_num(h)).min().unwrap_or(usize::MAX);
        if worst.is_none_or(|(w, _)| best > w) {
            worst = Some((best, g));
        }
    }
    let n = threshold.den;
    match worst {
        None => CoverCheck { ok: true, worst: None, worst_distortion: None },
        Some((k, g)) => CoverCheck {
            ok: k != usize::MAX && Distortion::new(k, n) <= threshold,
            worst: Some(g.clone()),
            worst_distortion: (k != usize::MAX).then(|| Distortion::new(k, n)),
        },
    }
}

/// Smallest `M` for which some seed yields a valid cover, by bisection.
pub fn smallest_covering_m(pool: &[DiGraph], members: &[DiGraph], threshold: Distortion, seeds: &[u64]) -> Result<usize> {
    let works = |m: usize| -> Result<bool> {
        for &s in seeds {
            let cb = build_cover_random(pool, m as f64, s)?;
            if verify_cover(&cb.graphs, members, threshold).ok {
                return Ok(true);
            }
        }
        Ok(false)
    };
    let (mut lo, mut hi) = (0usize, pool.len());
    if !works(hi)? {
        return Err(Error::InvalidInput("the whole pool does not cover the class".into()));
    }
    while hi - lo > 1 {
        let mid = (lo + hi) / 2;
        if works(mid)? {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(if members.is_empty() { 0 } else { hi })
}

#[derive(Debug, Clone, Serialize)]
pub struct ExactRate {
    pub codewords: usize,
    pub rate_nats: f64,
    pub rate_bits: f64,
    pub codebook: Vec<DiGraph>,
}

impl ExactRate {
    fn new(n: usize, codebook: Vec<DiGraph>) -> Self {
        let k = codebook.len();
        let nn = (n * n) as f64;
        let rate = if k <= 1 { 0.0 } else { (k as f64).ln() / nn };
        ExactRate { codewords: k, rate_nats: rate, rate_bits: rate / LN2, codebook }
    }
}

type Bits = Vec<u64>;

fn bits_new(len: usize) -> Bits {
    vec![0; len.div_ceil(64)]
}

fn bits_set(b: &mut Bits, k: usize) {
    b[k / 64] |= 1 << (k % 64);
}

fn bits_has(b: &Bits, k: usize) -> bool {
    b[k / 64] >> (k % 64) & 1 == 1
}

fn bits_count_and_not(a: &Bits, covered: &Bits) -> u32 {
    a.iter().zip(covered).map(|(x, c)| (x & !c).count_ones()).sum()
}

fn bits_subset(a: &Bits, b: &Bits) -> bool {
    a.iter().zip(b).all(|(x, y)| x & !y == 0)
}

fn check_exact_size(n: usize, max_n: usize) -> Result<()> {
    if n > max_n {
        return Err(Error::LimitExceeded { what: "vertex count for exact rate".into(), size: n, limit: max_n });
    }
    Ok(())
}

/// Candidate codewords with coverage sets, dominated ones removed, in code order.
fn candidates(n: usize, elems: &[DiGraph], d: Distortion) -> Vec<(DiGraph, Bits)> {
    let k = d.num;
    let mut all: Vec<(DiGraph, Bits)> = all_graphs(n)
        .collect::<Vec<_>>()
        .into_par_iter()
        .map(|h| {
            let mut b = bits_new(elems.len());
            for (idx, g) in elems.iter().enumerate() {
                if g.distortion_num(&h) <= k {
                    bits_set(&mut b, idx);
                }
            }
            (h, b)
        })
        .filter(|(_, b)| b.iter().any(|&x| x != 0))
        .collect();
    // Drop candidates whose coverage is contained in an earlier or strictly larger one.
    let mut keep = vec![true; all.len()];
    let sizes: Vec<u32> = all.iter().map(|(_, b)| b.iter().map(|x| x.count_ones()).sum()).collect();
    for i in 0..all.len() {
        for j in 0..all.len() {
            if i != j && keep[j] && bits_subset(&all[i].1, &all[j].1) && (sizes[j] > sizes[i] || j < i) {
                keep[i] = false;
                break;
            }
        }
    }
    let mut idx = 0;
    all.retain(|_| {
        let k = keep[idx];
        idx += 1;
        k
    });
    all
}

/// Minimum codebook covering every graph of `s` within distortion `d`, over all graphs on `[n]`.
pub fn exact_rn(s: &[DiGraph], d: Distortion, max_n: usize) -> Result<ExactRate> {
    let Some(first) = s.first() else {
        return Ok(ExactRate::new(1, vec![]));
    };
    let n = first.n();
    check_exact_size(n, max_n)?;
    let elems: Vec<DiGraph> = s.iter().cloned().collect::<BTreeSet<_>>().into_iter().collect();
    let cands = candidates(n, &elems, d);
    let m = elems.len();
    // Greedy start.
    let mut covered = bits_new(m);
    let mut greedy = Vec::new();
    while (0..m).any(|e| !bits_has(&covered, e)) {
        let (best, _) = cands
            .iter()
            .enumerate()
            .max_by_key(|(i, (_, b))| (bits_count_and_not(b, &covered), std::cmp::Reverse(*i)))
            .expect("nonempty candidates");
        for (w, x) in covered.iter_mut().zip(&cands[best].1) {
            *w |= x;
        }
        greedy.push(best);
    }
    let mut best = greedy.clone();
    let covering: Vec<Vec<usize>> = (0..m)
        .map(|e| (0..cands.len()).filter(|&c| bits_has(&cands[c].1, e)).collect())
        .collect();
    let max_cover = cands.iter().map(|(_, b)| b.iter().map(|x| x.count_ones()).sum::<u32>()).max().unwrap_or(1);
    let mut chosen = Vec::new();
    cover_dfs(&cands, &covering, m, max_cover as usize, &mut bits_new(m), &mut chosen, &mut best);
    best.sort_unstable();
    Ok(ExactRate::new(n, best.into_iter().map(|i| cands[i].0.clone()).collect()))
}

fn cover_dfs(
    cands: &[(DiGraph, Bits)],
    covering: &[Vec<usize>],
    m: usize,
    max_cover: usize,
    covered: &mut Bits,
    chosen: &mut Vec<usize>,
    best: &mut Vec<usize>,
) {
    let uncovered: Vec<usize> = (0..m).filter(|&e| !bits_has(covered, e)).collect();
    if uncovered.is_empty() {
        if chosen.len() < best.len() {
            *best = chosen.clone();
        }
        return;
    }
    if chosen.len() + uncovered.len().div_ceil(max_cover) >= best.len() {
        return;
    }
    let &e = uncovered
        .iter()
        .min_by_key(|&&e| covering[e].len())
        .expect("nonempty");
    let mut opts: Vec<usize> = covering[e].clone();
    opts.sort_by_key(|&c| std::cmp::Reverse(bits_count_and_not(&cands[c].1, covered)));
    for c in opts {
        let saved = covered.clone();
        for (w, x) in covered.iter_mut().zip(&cands[c].1) {
            *w |= x;
        }
        chosen.push(c);
        cover_dfs(cands, covering, m, max_cover, covered, chosen, best);
        chosen.pop();
        *covered = saved;
    }
}

/// Minimum codebook leaving at most `eps` probability uncovered within distortion `d`.
pub fn exact_rn_prob(f: &ProductRandomGraph, d: Distortion, eps: f64, max_n: usize) -> Result<ExactRate> {
    let n = f.n();
    check_exact_size(n, max_n)?;
    let support: Vec<(DiGraph, f64)> = all_graphs(n)
        .map(|g| {
            let p = crate::probability::graph_prob(f, &g);
            (g, p)
        })
        .filter(|(_, p)| *p > 0.0)
        .collect();
    let total: f64 = support.iter().map(|x| x.1).sum();
    let target = total - eps;
    let slack = 1e-12;
    if target <= slack {
        return Ok(ExactRate::new(n, vec![]));
    }
    let elems: Vec<DiGraph> = support.iter().map(|x| x.0.clone()).collect();
    let weights: Vec<f64> = support.iter().map(|x| x.1).collect();
    let cands = candidates(n, &elems, d);
    let mass = |b: &Bits, covered: &Bits| -> f64 {
        let mut s = 0.0;
        for (wi, (x, c)) in b.iter().zip(covered).enumerate() {
            let mut bits = x & !c;
            while bits != 0 {
                let k = wi * 64 + bits.trailing_zeros() as usize;
                s += weights[k];
                bits &= bits - 1;
            }
        }
        s
    };
    // Greedy upper bound.
    let mut covered = bits_new(elems.len());
    let mut got = 0.0;
    let mut greedy = Vec::new();
    while got < target - slack {
        let (best, gain) = cands
            .iter()
            .enumerate()
            .map(|(i, (_, b))| (i, mass(b, &covered)))
            .fold((usize::MAX, -1.0), |acc, x| if x.1 > acc.1 { x } else { acc });
        if gain <= 0.0 {
            break;
        }
        for (w, x) in covered.iter_mut().zip(&cands[best].1) {
            *w |= x;
        }
        got += gain;
        greedy.push(best);
    }
    for k in 1..greedy.len() {
        let mut chosen = Vec::new();
        if partial_dfs(&cands, &mass, target - slack, k, 0, 0.0, &mut bits_new(elems.len()), &mut chosen) {
            return Ok(ExactRate::new(n, chosen.into_iter().map(|i| cands[i].0.clone()).collect()));
        }
    }
    Ok(ExactRate::new(n, greedy.into_iter().map(|i| cands[i].0.clone()).collect()))
}

#[allow(clippy::too_many_arguments)]
fn partial_dfs(
    cands: &[(DiGraph, Bits)],
    mass: &dyn Fn(&Bits, &Bits) -> f64,
    target: f64,
    k: usize,
    start: usize,
    got: f64,
    covered: &mut Bits,
    chosen: &mut Vec<usize>,
) -> bool {
    if got >= target {
        return true;
    }
    let left = k - chosen.len();
    if left == 0 {
        return false;
    }
    let mut gains: Vec<(usize, f64)> = (start..cands.len()).map(|i| (i, mass(&cands[i].1, covered))).collect();
    gains.sort_by(|a, b| b.1.total_cmp(&a.1).then(a.0.cmp(&b.0)));
    let bound: f64 = gains.iter().take(left).map(|x| x.1).sum();
    if got + bound < target {
        return false;
    }
    let mut order: Vec<usize> = gains.iter().filter(|x| x.1 > 0.0).map(|x| x.0).collect();
    order.sort_unstable();
    for i in order {
        let gain = mass(&cands[i].1, covered);
        let saved = covered.clone();
        for (w, x) in covered.iter_mut().zip(&cands[i].1) {
            *w |= x;
        }
        chosen.push(i);
        if partial_dfs(cands, mass, target, k, i + 1, got + gain, covered, chosen) {
            return true;
        }
        chosen.pop();
        *covered = saved;
    }
    false
}

/// Members of `t` for use as the source set of [`exact_rn`].
pub fn class_members(t: &EdgeType, limit: usize) -> Result<Vec<DiGraph>> {
    enumerate_class(t, limit)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::maxent::SolverOptions;

    fn ut(r: &[usize], c: &[usize]) -> EdgeType {
        EdgeType::unrestricted(r.to_vec(), c.to_vec()).unwrap()
    }

    #[test]
    fn omega_examples() {
        assert_eq!(omega(0.0, 3, 10).unwrap(), vec![(vec![0; 3], vec![0; 3])]);
        assert_eq!(omega(0.5, 2, 100).unwrap().len(), 16);
        assert!(omega(1.0, 3, 100).is_err());
        for n in 1..=3 {
            for k in 0..=n {
                let xi = k as f64 / n as f64;
                assert_eq!(omega_iter(xi, n).count() as f64, omega_size(xi, n));
                assert!(omega_iter(xi, n).all(|(a, b)| a.iter().chain(&b).all(|&x| x <= k)));
            }
        }
    }

    #[test]
    fn sign_variant_examples() {
        let t = ut(&[1, 1], &[1, 1]);
        assert_eq!(sign_variants(&t, &[0, 0], &[0, 0]), vec![t.clone()]);
        let v = sign_variants(&t, &[1, 0], &[1, 0]);
        let got: BTreeSet<_> = v.iter().map(|x| (x.r.clone(), x.c.clone())).collect();
        let expect: BTreeSet<_> = [
            (vec![2, 1], vec![2, 1]),
            (vec![0, 1], vec![0, 1]),
        ]
        .into_iter()
        .collect();
        assert_eq!(got, expect);
        let all = sign_variants(&ut(&[1, 1, 1], &[1, 1, 1]), &[1, 1, 1], &[1, 1, 1]);
        assert!(all.len() <= 1 << 6);
    }

    #[test]
    fn cardinality_examples() {
        let opts = SolverOptions::for_n(2);
        let t = ut(&[1, 1], &[1, 1]);
        let b = delta_class_cardinality_bounds(&t, 0.0, 1, opts).unwrap();
        assert_eq!(b.exact_size, Some(2));
        assert!(b.exact_normalized.unwrap() <= b.upper);
        assert!(b.exact_normalized.unwrap() >= b.lower - 1e-12);
        let s = ut(&[2, 1], &[2, 1]);
        let bs = delta_class_cardinality_bounds(&s, 0.0, 2, opts).unwrap();
        assert_eq!((bs.entropy, bs.exact_size, bs.gap), (0.0, Some(1), Some(0.0)));
    }

    #[test]
    fn high_prob_examples() {
        let opts = SolverOptions::for_n(3);
        let t = ut(&[1, 1, 1], &[1, 1, 1]);
        let b = high_prob_set_lower(&t, 0.3, 0.9, 1, opts).unwrap();
        assert!(b.vacuous);
        let h = solve_maxent(&t, opts).unwrap().report.entropy_nats;
        let eta = 6.0 * (-h).exp();
        let whole = high_prob_set_lower(&t, 0.3, eta, 1, opts).unwrap();
        assert!(whole.value <= 6f64.ln() / 9.0);
    }

    #[test]
    fn covering_and_rd_zero_budget() {
        let opts = SolverOptions::for_n(2);
        let t = ut(&[1, 1], &[1, 1]);
        let mut cache = TypeCache::new(DiGraph::complete(2), opts);
        let up = rd_upper(&t, 0.0, 0.0, 1, &mut cache).unwrap();
        assert!((up.entropy_term - 4.0 * 2f64.ln() / 4.0).abs() < 1e-10);
        let lo = rd_lower(&t, 0.0, 0.0, 0.0, 1, &mut cache).unwrap();
        assert!((lo.entropy_term - up.entropy_term).abs() < 1e-12);
        assert!(lo.bound_nats <= up.bound_nats);
    }

    #[test]
    fn cover_examples() {
        let g = DiGraph::from_matrix(&[[1u8, 1], [1, 0]]).unwrap();
        let h1 = DiGraph::from_matrix(&[[0u8, 1], [1, 1]]).unwrap();
        assert!(verify_cover(&[h1], std::slice::from_ref(&g), Distortion::new(1, 2)).ok);
        let t = ut(&[1, 1, 1], &[1, 1, 1]);
        let members = class_members(&t, 6).unwrap();
        assert!(verify_cover(&members, &members, Distortion::new(0, 3)).ok);
        assert!(!verify_cover(&members[..1], &members, Distortion::new(0, 3)).ok);
        let pool = cover_pool(&t, 1.0 / 3.0, 0.5, 1, 6).unwrap();
        let cb = build_cover_random(&pool, pool.len() as f64, 7).unwrap();
        assert_eq!(cb.graphs.len(), pool.len());
        assert!(verify_cover(&cb.graphs, &members, Distortion::from_budget(1.0 / 3.0, 0.5, 3)).ok);
        let a = build_cover_random(&pool, 5.0, 3).unwrap();
        let b = build_cover_random(&pool, 5.0, 3).unwrap();
        assert_eq!(a.graphs, b.graphs);
    }

    #[test]
    fn exact_rn_examples() {
        let t = ut(&[1, 1], &[1, 1]);
        let s = class_members(&t, 6).unwrap();
        assert_eq!(exact_rn(&s, Distortion::new(2, 2), 3).unwrap().codewords, 1);
        let z = exact_rn(&s, Distortion::new(0, 2), 3).unwrap();
        assert_eq!(z.codewords, 2);
        assert!((z.rate_nats - 2f64.ln() / 4.0).abs() < 1e-15);
        assert_eq!(exact_rn(&s, Distortion::new(1, 2), 3).unwrap().codewords, 1);
    }

    #[test]
    fn exact_rn_prob_examples() {
        let half = ProductRandomGraph::uniform(2, 0.5).unwrap();
        assert_eq!(exact_rn_prob(&half, Distortion::new(0, 2), 1.0, 3).unwrap().codewords, 0);
        assert_eq!(exact_rn_prob(&half, Distortion::new(0, 2), 0.4, 3).unwrap().codewords, 10);
        assert_eq!(exact_rn_prob(&half, Distortion::new(0, 2), 0.0, 3).unwrap().codewords, 16);
        let all: Vec<DiGraph> = all_graphs(2).collect();
        let full = exact_rn(&all, Distortion::new(1, 2), 3).unwrap().codewords;
        let prob = exact_rn_prob(&half, Distortion::new(1, 2), 0.0, 3).unwrap().codewords;
        assert_eq!(full, prob);
    }
}
