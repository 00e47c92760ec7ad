//! Logistic product families, type-class probabilities and their bounds.

use serde::Serialize;
use serde_json::Value;

use crate::enumerate::{count_class, enumerate_class, enumerate_delta_class, for_each_member};
use crate::error::{Error, Result};
use crate::graph::DiGraph;
use crate::maxent::{solve_maxent, MaxEntSolution, ProductRandomGraph, SolverOptions};
use crate::types::EdgeType;

/// Parameters `(a, b)` of the family `p_ij = sigmoid(-(a_i + b_j))` on the cells of `w`.
#[derive(Debug, Clone, PartialEq)]
pub struct FamilyDParams {
    pub a: Vec<f64>,
    pub b: Vec<f64>,
    pub w: DiGraph,
}

fn ext_to_json(x: f64) -> Value {
    if x == f64::INFINITY {
        Value::String("inf".into())
    } else if x == f64::NEG_INFINITY {
        Value::String("-inf".into())
    } else {
        serde_json::json!(x)
    }
}

fn ext_from_json(v: &Value) -> Result<f64> {
    match v {
        Value::Number(x) => x.as_f64().ok_or_else(|| Error::InvalidInput("bad number".into())),
        Value::String(s) => match s.as_str() {
            "inf" | "+inf" | "infinity" | "Infinity" => Ok(f64::INFINITY),
            "-inf" | "-infinity" | "-Infinity" => Ok(f64::NEG_INFINITY),
            other => Err(Error::InvalidInput(format!("not an extended real: {other}"))),
        },
        other => Err(Error::InvalidInput(format!("not an extended real: {other}"))),
    }
}

impl FamilyDParams {
    pub fn new(a: Vec<f64>, b: Vec<f64>, w: DiGraph) -> Result<Self> {
        let n = a.len();
        if b.len() != n || w.n() != n {
            return Err(Error::DimensionMismatch { expected: n, got: b.len().min(w.n()) });
        }
        if a.iter().chain(&b).any(|x| x.is_nan()) {
            return Err(Error::InvalidInput("NaN parameter".into()));
        }
        Ok(FamilyDParams { a, b, w })
    }

    pub fn n(&self) -> usize {
        self.a.len()
    }

    pub fn to_json(&self) -> Value {
        serde_json::json!({
            "a": self.a.iter().map(|&x| ext_to_json(x)).collect::<Vec<_>>(),
            "b": self.b.iter().map(|&x| ext_to_json(x)).collect::<Vec<_>>(),
            "w": if self.w == DiGraph::complete(self.n()) { Value::String("complete".into()) } else { self.w.to_json() },
        })
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        let list = |key: &str| -> Result<Vec<f64>> {
            v.get(key)
                .and_then(Value::as_array)
                .ok_or_else(|| Error::InvalidInput(format!("missing array `{key}`")))?
                .iter()
                .map(ext_from_json)
                .collect()
        };
        let a = list("a")?;
        let b = list("b")?;
        let w = DiGraph::restriction_from_json(v.get("w").unwrap_or(&Value::Null), a.len())?;
        FamilyDParams::new(a, b, w)
    }
}

impl Serialize for FamilyDParams {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_json().serialize(s)
    }
}

/// The product random graph of a parameter set; infinite parameters give 0/1 cells.
pub fn family_d_graph(params: &FamilyDParams) -> Result<ProductRandomGraph> {
    let n = params.n();
    let mut logit = vec![f64::NEG_INFINITY; n * n];
    for i in 0..n {
        for j in 0..n {
            if !params.w.has_edge(i, j) {
                continue;
            }
            let s = params.a[i] + params.b[j];
            if s.is_nan() {
                return Err(Error::InvalidInput(format!(
                    "opposite infinite parameters meet at cell ({i}, {j})"
                )));
            }
            logit[i * n + j] = -s;
        }
    }
    ProductRandomGraph::from_logits(n, logit)
}

/// `ln Pr(F = G)`, `-inf` when `G` uses a zero-probability cell.
pub fn log_graph_prob(f: &ProductRandomGraph, g: &DiGraph) -> f64 {
    let n = f.n();
    let mut acc = 0.0;
    for i in 0..n {
        for j in 0..n {
            acc += if g.has_edge(i, j) { f.ln_p(i, j) } else { f.ln_q(i, j) };
            if acc == f64::NEG_INFINITY {
                return acc;
            }
        }
    }
    acc
}

pub fn graph_prob(f: &ProductRandomGraph, g: &DiGraph) -> f64 {
    log_graph_prob(f, g).exp()
}

/// `D(p || q)` between Bernoulli laws, in nats.
pub fn kl_bernoulli(p: f64, q: f64) -> Result<f64> {
    if (p > 0.0 && q <= 0.0) || (p < 1.0 && q >= 1.0) {
        return Err(Error::ContinuityViolated { row: 0, col: 0 });
    }
    let term = |x: f64, y: f64| if x == 0.0 { 0.0 } else { x * (x / y).ln() };
    Ok(term(p, q) + term(1.0 - p, 1.0 - q))
}

/// Sum of cellwise `D(p_ij || q_ij)`, computed from logits.
pub fn kl_product(p: &ProductRandomGraph, q: &ProductRandomGraph) -> Result<f64> {
    let n = p.n();
    if q.n() != n {
        return Err(Error::DimensionMismatch { expected: n, got: q.n() });
    }
    let mut total = 0.0;
    for i in 0..n {
        for j in 0..n {
            let (pp, qq) = (p.p(i, j), q.p(i, j));
            if (pp > 0.0 && qq <= 0.0) || (pp < 1.0 && qq >= 1.0) {
                return Err(Error::ContinuityViolated { row: i, col: j });
            }
            if pp > 0.0 {
                total += pp * (p.ln_p(i, j) - q.ln_p(i, j));
            }
            if pp < 1.0 {
                total += (1.0 - pp) * (p.ln_q(i, j) - q.ln_q(i, j));
            }
        }
    }
    Ok(total)
}

#[derive(Debug, Clone, Serialize)]
pub struct PointProb {
    pub prob: f64,
    pub log_prob: f64,
    pub entropy: f64,
    pub kl: f64,
    /// Set when cells of zero or unit probability were folded into the type first.
    pub reduced: bool,
    pub subclass: EdgeType,
}

/// Folds cells where `f` is 0 or 1 out of `t`.
fn fold_forced(t: &EdgeType, f: &ProductRandomGraph) -> Result<EdgeType> {
    let n = t.n();
    let mut r = t.r.clone();
    let mut c = t.c.clone();
    let mut w = t.w.clone();
    for i in 0..n {
        for j in 0..n {
            if !t.w.has_edge(i, j) {
                continue;
            }
            let p = f.p(i, j);
            if p == 0.0 {
                w.set_edge(i, j, false);
            } else if p == 1.0 {
                w.set_edge(i, j, false);
                if r[i] == 0 || c[j] == 0 {
                    return Err(Error::EmptyClass);
                }
                r[i] -= 1;
                c[j] -= 1;
            }
        }
    }
    EdgeType::new(r, c, w)
}

struct Exponents {
    sol: MaxEntSolution,
    kl: f64,
    reduced: bool,
    subclass: EdgeType,
}

fn exponents(f: &ProductRandomGraph, t: &EdgeType, opts: SolverOptions) -> Result<Exponents> {
    let sol = solve_maxent(t, opts)?;
    match kl_product(&sol.graph, f) {
        Ok(kl) => Ok(Exponents { sol, kl, reduced: false, subclass: t.clone() }),
        Err(Error::ContinuityViolated { .. }) => {
            let sub = fold_forced(t, f)?;
            let sub_sol = solve_maxent(&sub, opts)?;
            // Folded cells carry probability exactly 0 or 1 and add nothing.
            let mut kl = 0.0;
            let n = t.n();
            for i in 0..n {
                for j in 0..n {
                    if sub.w.has_edge(i, j) {
                        let q = sub_sol.graph.p(i, j);
                        if q > 0.0 {
                            kl += q * (sub_sol.graph.ln_p(i, j) - f.ln_p(i, j));
                        }
                        if q < 1.0 {
                            kl += (1.0 - q) * (sub_sol.graph.ln_q(i, j) - f.ln_q(i, j));
                        }
                    } else if !t.w.has_edge(i, j) {
                        let q = f.p(i, j);
                        if q >= 1.0 {
                            return Err(Error::ContinuityViolated { row: i, col: j });
                        }
                        kl -= f.ln_q(i, j);
                    }
                }
            }
            Ok(Exponents { sol: sub_sol, kl, reduced: true, subclass: sub })
        }
        Err(e) => Err(e),
    }
}

/// Common probability of each member of the class under the family member `params`.
pub fn typeclass_point_prob(params: &FamilyDParams, t: &EdgeType, opts: SolverOptions) -> Result<PointProb> {
    let f = family_d_graph(params)?;
    point_prob_for(&f, t, opts)
}

pub fn point_prob_for(f: &ProductRandomGraph, t: &EdgeType, opts: SolverOptions) -> Result<PointProb> {
    let e = exponents(f, t, opts)?;
    let h = e.sol.report.entropy_nats;
    let log_prob = -h - e.kl;
    Ok(PointProb {
        prob: log_prob.exp(),
        log_prob,
        entropy: h,
        kl: e.kl,
        reduced: e.reduced,
        subclass: e.subclass,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct ClassProbBounds {
    pub lower: Option<f64>,
    pub upper: f64,
    pub kl: f64,
    pub gap: Option<f64>,
    pub count: Option<u128>,
    pub exact: Option<f64>,
    pub reduced: bool,
}

fn measured_gap(n: usize, ln_alpha: f64, count: u128) -> Option<f64> {
    (n > 1 && count > 0).then(|| (ln_alpha - (count as f64).ln()) / (n as f64 * (n as f64).ln()))
}

fn gap_factor_exponent(n: usize, gap: f64) -> f64 {
    4.0 * gap.max(0.0) * n as f64 * (n as f64).ln()
}

/// `e^{-4 g n ln n - KL} <= Pr(F in T) <= e^{-KL}` with the measured gap `g`.
pub fn typeclass_prob_bounds(params: &FamilyDParams, t: &EdgeType, opts: SolverOptions) -> Result<ClassProbBounds> {
    let f = family_d_graph(params)?;
    class_bounds_for(&f, t, opts)
}

pub fn class_bounds_for(f: &ProductRandomGraph, t: &EdgeType, opts: SolverOptions) -> Result<ClassProbBounds> {
    let n = t.n();
    let e = exponents(f, t, opts)?;
    let upper = (-e.kl).exp();
    let (count, gap, exact) = if n <= opts.limit {
        let count = count_class(&e.subclass, opts.limit)?;
        let gap = measured_gap(n, e.sol.report.entropy_nats, count);
        let mut exact = 0.0;
        for_each_member(t, opts.limit, |g| exact += graph_prob(f, g))?;
        (Some(count), gap, Some(exact))
    } else {
        (None, None, None)
    };
    let lower = match (n, gap) {
        (1, _) => Some(upper),
        (_, Some(g)) => Some((-gap_factor_exponent(n, g) - e.kl).exp()),
        _ => None,
    };
    Ok(ClassProbBounds { lower, upper, kl: e.kl, gap, count, exact, reduced: e.reduced })
}

#[derive(Debug, Clone, Serialize)]
pub struct SanovReport {
    pub min_kl: f64,
    pub lower: Option<f64>,
    pub upper: f64,
    pub gap: Option<f64>,
    pub exact: Option<f64>,
    pub types_used: usize,
}

/// Two-sided exponential bounds on `Pr(F in union of the listed classes)`.
pub fn sanov_bounds(params: &FamilyDParams, types: &[EdgeType], opts: SolverOptions) -> Result<SanovReport> {
    let f = family_d_graph(params)?;
    sanov_bounds_for(&f, types, opts)
}

pub fn sanov_bounds_for(f: &ProductRandomGraph, types: &[EdgeType], opts: SolverOptions) -> Result<SanovReport> {
    let mut uniq: Vec<EdgeType> = Vec::new();
    for t in types {
        if !uniq.contains(t) {
            uniq.push(t.clone());
        }
    }
    let n = f.n();
    if uniq.is_empty() {
        return Err(Error::InvalidInput("no types given".into()));
    }
    let mut min_kl = f64::INFINITY;
    let mut gap: Option<f64> = Some(0.0);
    let mut exact: Option<f64> = Some(0.0);
    for t in &uniq {
        let b = class_bounds_for(f, t, opts)?;
        min_kl = min_kl.min(b.kl);
        gap = match (gap, b.gap, n) {
            (_, _, 1) => Some(0.0),
            (Some(g), Some(h), _) => Some(g.max(h)),
            _ => None,
        };
        exact = match (exact, b.exact) {
            (Some(x), Some(y)) => Some(x + y),
            _ => None,
        };
    }
    let nn = n as f64;
    let lower = gap.map(|g| (-gap_factor_exponent(n, g) - min_kl).exp());
    let upper = (2.0 * nn * (nn + 1.0).ln() - min_kl).exp();
    Ok(SanovReport { min_kl, lower, upper, gap, exact, types_used: uniq.len() })
}

/// Hoeffding-type lower bound `max(0, 1 - 4n e^{-2 dens^2 delta^2 / n})`.
pub fn delta_class_prob_lower(n: usize, delta: f64, dens: usize) -> f64 {
    let nn = n as f64;
    let d = dens as f64;
    (1.0 - 4.0 * nn * (-2.0 * d * d * delta * delta / nn).exp()).max(0.0)
}

/// Exact `Pr(F in delta class of t)` by enumeration.
pub fn delta_class_prob_exact(
    f: &ProductRandomGraph,
    t: &EdgeType,
    delta: f64,
    dens: usize,
    limit: usize,
) -> Result<f64> {
    Ok(enumerate_delta_class(t, delta, dens, limit)?
        .iter()
        .map(|g| graph_prob(f, g))
        .sum())
}

/// Convex combination `sum_k lambda_k F_k` of family members.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MixtureDecomposition {
    pub lambda: Vec<f64>,
    pub atoms: Vec<FamilyDParams>,
}

impl MixtureDecomposition {
    pub fn mixed_graph(&self) -> Result<ProductRandomGraph> {
        let first = self.atoms.first().ok_or_else(|| Error::InvalidInput("no atoms".into()))?;
        let n = first.n();
        let mut p = vec![0.0; n * n];
        for (lam, atom) in self.lambda.iter().zip(&self.atoms) {
            let g = family_d_graph(atom)?;
            for (acc, &x) in p.iter_mut().zip(g.probs()) {
                *acc += lam * x;
            }
        }
        for x in &mut p {
            *x = x.clamp(0.0, 1.0);
        }
        ProductRandomGraph::from_probs(n, p)
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        let lambda: Vec<f64> = serde_json::from_value(
            v.get("lambda").cloned().ok_or_else(|| Error::InvalidInput("missing `lambda`".into()))?,
        )?;
        let atoms = v
            .get("atoms")
            .and_then(Value::as_array)
            .ok_or_else(|| Error::InvalidInput("missing `atoms`".into()))?
            .iter()
            .map(FamilyDParams::from_json)
            .collect::<Result<Vec<_>>>()?;
        Ok(MixtureDecomposition { lambda, atoms })
    }
}

/// Whether the mixture reproduces `p` cellwise within `tol` with valid weights.
pub fn verify_mixture(p: &ProductRandomGraph, mix: &MixtureDecomposition, tol: f64) -> bool {
    if mix.lambda.len() != mix.atoms.len() || mix.atoms.is_empty() {
        return false;
    }
    if mix.lambda.iter().any(|&l| !(l > 0.0 && l <= 1.0)) {
        return false;
    }
    if (mix.lambda.iter().sum::<f64>() - 1.0).abs() > 1e-12 {
        return false;
    }
    if mix.atoms.iter().any(|a| a.n() != p.n()) {
        return false;
    }
    let mut acc = vec![0.0; p.n() * p.n()];
    for (lam, atom) in mix.lambda.iter().zip(&mix.atoms) {
        let Ok(g) = family_d_graph(atom) else {
            return false;
        };
        for (a, &x) in acc.iter_mut().zip(g.probs()) {
            *a += lam * x;
        }
    }
    acc.iter().zip(p.probs()).all(|(a, b)| (a - b).abs() <= tol)
}

/// Mixture of single-cell family members reproducing `p`, which needs total mass below 1.
pub fn decompose_single_edge(p: &ProductRandomGraph) -> Result<MixtureDecomposition> {
    let n = p.n();
    let inf = f64::INFINITY;
    let mass: f64 = p.probs().iter().sum();
    if mass > 1.0 {
        return Err(Error::MassExceedsOne(mass));
    }
    if mass >= 1.0 {
        return Err(Error::InvalidInput(
            "total mass exactly 1 needs a unit-probability cell, which has no finite parameters".into(),
        ));
    }
    let w = DiGraph::complete(n);
    if mass == 0.0 {
        return Ok(MixtureDecomposition {
            lambda: vec![1.0],
            atoms: vec![FamilyDParams::new(vec![inf; n], vec![inf; n], w)?],
        });
    }
    // Atom value S at cell (m, l): a_m + b_l = -logit(S); every other parameter is +inf.
    let target = -(mass.ln() - (-mass).ln_1p());
    let mut lambda = Vec::new();
    let mut atoms = Vec::new();
    for m in 0..n {
        for l in 0..n {
            let q = p.p(m, l);
            if q > 0.0 {
                let mut a = vec![inf; n];
                let mut b = vec![inf; n];
                a[m] = target;
                b[l] = 0.0;
                lambda.push(q / mass);
                atoms.push(FamilyDParams::new(a, b, w.clone())?);
            }
        }
    }
    // Absorb rounding so the weights sum to one.
    let s: f64 = lambda.iter().sum();
    for l in &mut lambda {
        *l /= s;
    }
    Ok(MixtureDecomposition { lambda, atoms })
}

/// `exp(-H(F_T) - sum_k lambda_k KL(F_T || F_k))`, a lower bound on each member's probability.
/// An infinite divergence gives the trivial bound 0.
pub fn mixture_lower_bound(mix: &MixtureDecomposition, t: &EdgeType, opts: SolverOptions) -> Result<f64> {
    let sol = solve_maxent(t, opts)?;
    let mut expo = -sol.report.entropy_nats;
    for (lam, atom) in mix.lambda.iter().zip(&mix.atoms) {
        let g = family_d_graph(atom)?;
        match kl_product(&sol.graph, &g) {
            Ok(kl) => expo -= lam * kl,
            Err(Error::ContinuityViolated { .. }) => return Ok(0.0),
            Err(e) => return Err(e),
        }
    }
    Ok(expo.exp())
}

/// Probability of each member of the class under `f`, in enumeration order.
pub fn member_probs(f: &ProductRandomGraph, t: &EdgeType, limit: usize) -> Result<Vec<(DiGraph, f64)>> {
    Ok(enumerate_class(t, limit)?
        .into_iter()
        .map(|g| {
            let p = graph_prob(f, &g);
            (g, p)
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::all_graphs;

    fn ut(r: &[usize], c: &[usize]) -> EdgeType {
        EdgeType::unrestricted(r.to_vec(), c.to_vec()).unwrap()
    }

    fn params(a: &[f64], b: &[f64]) -> FamilyDParams {
        FamilyDParams::new(a.to_vec(), b.to_vec(), DiGraph::complete(a.len())).unwrap()
    }

    fn rel_close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol * a.abs().max(b.abs()).max(1e-300)
    }

    #[test]
    fn family_examples() {
        let f = family_d_graph(&params(&[0.0, 0.0], &[0.0, 0.0])).unwrap();
        assert!(f.probs().iter().all(|&p| p == 0.5));
        let inf = f64::INFINITY;
        let single = family_d_graph(&params(&[inf, 0.3, inf], &[inf, 0.0, inf])).unwrap();
        let support: Vec<usize> = (0..9).filter(|&k| single.probs()[k] > 0.0).collect();
        assert_eq!(support, vec![4]);
        let ones = family_d_graph(&params(&[-inf; 2], &[-inf; 2])).unwrap();
        assert!(ones.probs().iter().all(|&p| p == 1.0));
        assert!(family_d_graph(&params(&[inf, 0.0], &[-inf, 0.0])).is_err());
    }

    #[test]
    fn params_json_round_trip() {
        let inf = f64::INFINITY;
        let p = params(&[inf, -1.5], &[0.0, -inf]);
        assert_eq!(FamilyDParams::from_json(&p.to_json()).unwrap(), p);
    }

    #[test]
    fn graph_prob_examples() {
        let half = ProductRandomGraph::uniform(2, 0.5).unwrap();
        for g in all_graphs(2) {
            assert!((graph_prob(&half, &g) - 1.0 / 16.0).abs() < 1e-15);
        }
        let g = DiGraph::from_code(3, 0b100_011_001);
        assert_eq!(graph_prob(&ProductRandomGraph::deterministic(&g), &g), 1.0);
        let mut p = vec![0.5; 4];
        p[1] = 0.0;
        let f = ProductRandomGraph::from_probs(2, p).unwrap();
        let uses = DiGraph::from_matrix(&[[0u8, 1], [0, 0]]).unwrap();
        assert_eq!(graph_prob(&f, &uses), 0.0);
    }

    #[test]
    fn kl_examples() {
        assert_eq!(kl_bernoulli(0.3, 0.3).unwrap(), 0.0);
        assert!((kl_bernoulli(1.0, 0.5).unwrap() - 2f64.ln()).abs() < 1e-15);
        let expect = 0.5 * (1.5f64).ln() + 0.5 * (0.75f64).ln();
        assert!((kl_bernoulli(0.5, 1.0 / 3.0).unwrap() - expect).abs() < 1e-15);
        assert!(kl_bernoulli(0.5, 0.0).is_err());
        assert!(kl_bernoulli(0.5, 1.0).is_err());
    }

    #[test]
    fn point_prob_examples() {
        let opts = SolverOptions::for_n(2);
        let t = ut(&[1, 1], &[1, 1]);
        let pp = typeclass_point_prob(&params(&[0.0; 2], &[0.0; 2]), &t, opts).unwrap();
        assert!((pp.prob - 1.0 / 16.0).abs() < 1e-14);
        assert!(pp.kl.abs() < 1e-14);
        // a_i + b_j = ln 2 gives p = 1/3.
        let l2 = 2f64.ln();
        let prm = params(&[l2, l2], &[0.0, 0.0]);
        let f = family_d_graph(&prm).unwrap();
        assert!(f.probs().iter().all(|&p| (p - 1.0 / 3.0).abs() < 1e-15));
        let pp = typeclass_point_prob(&prm, &t, opts).unwrap();
        for g in enumerate_class(&t, 6).unwrap() {
            assert!(rel_close(graph_prob(&f, &g), pp.prob, 1e-12));
        }
    }

    #[test]
    fn point_prob_folds_zero_cells() {
        let opts = SolverOptions::for_n(3);
        // Row 0 never links to column 0: only members avoiding that cell keep mass.
        let mut w = DiGraph::complete(3);
        w.set_edge(0, 0, false);
        let prm = FamilyDParams::new(vec![0.2, -0.1, 0.4], vec![0.0, 0.3, -0.2], w).unwrap();
        let t = ut(&[1, 1, 1], &[1, 1, 1]);
        let f = family_d_graph(&prm).unwrap();
        let pp = typeclass_point_prob(&prm, &t, opts).unwrap();
        assert!(pp.reduced);
        for g in enumerate_class(&t, 6).unwrap() {
            let gp = graph_prob(&f, &g);
            if g.has_edge(0, 0) {
                assert_eq!(gp, 0.0);
            } else {
                assert!(rel_close(gp, pp.prob, 1e-10));
            }
        }
    }

    #[test]
    fn class_bounds_examples() {
        let opts = SolverOptions::for_n(2);
        let t = ut(&[1, 1], &[1, 1]);
        let b = typeclass_prob_bounds(&params(&[0.0; 2], &[0.0; 2]), &t, opts).unwrap();
        assert!((b.exact.unwrap() - 0.125).abs() < 1e-14);
        assert!(b.upper >= b.exact.unwrap());
        let s = ut(&[2, 2], &[2, 2]);
        let sol = solve_maxent(&s, opts).unwrap();
        let bs = class_bounds_for(&sol.graph, &s, opts).unwrap();
        assert_eq!((bs.exact, bs.upper), (Some(1.0), 1.0));
    }

    #[test]
    fn sanov_partition_is_certain() {
        let opts = SolverOptions::for_n(2);
        let mut types = Vec::new();
        for g in all_graphs(2) {
            types.push(EdgeType::of_graph(&g, &DiGraph::complete(2)).unwrap());
        }
        let prm = params(&[0.3, -0.7], &[1.1, 0.2]);
        let rep = sanov_bounds(&prm, &types, opts).unwrap();
        assert!((rep.exact.unwrap() - 1.0).abs() < 1e-12);
        assert!(rep.lower.unwrap() <= rep.exact.unwrap() && rep.exact.unwrap() <= rep.upper);
        assert!(rep.types_used < types.len());
    }

    #[test]
    fn delta_prob_examples() {
        assert_eq!(delta_class_prob_lower(3, 0.0, 1), 0.0);
        let b = delta_class_prob_lower(3, 1.0, 3);
        assert!((b - (1.0 - 12.0 * (-6.0f64).exp())).abs() < 1e-15);
        let opts = SolverOptions::for_n(3);
        let t = ut(&[3, 3, 3], &[3, 3, 3]);
        let sol = solve_maxent(&ut(&[2, 1, 1], &[1, 2, 1]), opts).unwrap();
        let exact = delta_class_prob_exact(&sol.graph, &t, 100.0, 1, 6).unwrap();
        assert!((exact - 1.0).abs() < 1e-12);
    }

    #[test]
    fn decomposition_examples() {
        let mut p = vec![0.0; 4];
        p[2] = 0.3;
        let f = ProductRandomGraph::from_probs(2, p).unwrap();
        let mix = decompose_single_edge(&f).unwrap();
        assert_eq!(mix.lambda, vec![1.0]);
        assert!(verify_mixture(&f, &mix, 1e-15));
        let zero = ProductRandomGraph::uniform(2, 0.0).unwrap();
        let mz = decompose_single_edge(&zero).unwrap();
        assert!(verify_mixture(&zero, &mz, 0.0));
        let half = ProductRandomGraph::uniform(2, 0.5).unwrap();
        assert!(matches!(decompose_single_edge(&half), Err(Error::MassExceedsOne(_))));
        let spread = ProductRandomGraph::from_probs(2, vec![0.1, 0.2, 0.05, 0.3]).unwrap();
        let ms = decompose_single_edge(&spread).unwrap();
        assert!(verify_mixture(&spread, &ms, 1e-15));
        let mut bad = ms.clone();
        bad.lambda[0] += 0.01;
        bad.lambda[1] -= 0.01;
        assert!(!verify_mixture(&spread, &bad, 1e-6));
    }

    #[test]
    fn mixture_bound_examples() {
        let opts = SolverOptions::for_n(2);
        let t = ut(&[1, 1], &[1, 1]);
        let ft = params(&[0.0; 2], &[0.0; 2]);
        let single = MixtureDecomposition { lambda: vec![1.0], atoms: vec![ft.clone()] };
        let lb = mixture_lower_bound(&single, &t, opts).unwrap();
        assert!((lb - 1.0 / 16.0).abs() < 1e-14);
        // Two atoms with p = 1/3 and p = 2/3 average to 1/2 cellwise.
        let l2 = 2f64.ln();
        let two = MixtureDecomposition {
            lambda: vec![0.5, 0.5],
            atoms: vec![params(&[l2, l2], &[0.0, 0.0]), params(&[-l2, -l2], &[0.0, 0.0])],
        };
        let half = ProductRandomGraph::uniform(2, 0.5).unwrap();
        assert!(verify_mixture(&half, &two, 1e-15));
        let lb2 = mixture_lower_bound(&two, &t, opts).unwrap();
        assert!(lb2 <= 1.0 / 16.0);
    }
}
