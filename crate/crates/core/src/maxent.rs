//! Maximum-entropy random graphs via damped Newton on the convex dual.

use nalgebra::{DMatrix, DVector};
use serde::Serialize;

use crate::enumerate::{count_class, invariant_masks, DEFAULT_LIMIT};
use crate::error::{Error, Result};
use crate::graph::DiGraph;
use crate::types::{reduce_by_invariants, EdgeType, InvariantMasks};

#[inline]
pub fn softplus(x: f64) -> f64 {
    if x == f64::INFINITY {
        f64::INFINITY
    } else if x > 0.0 {
        x + (-x).exp().ln_1p()
    } else {
        x.exp().ln_1p()
    }
}

#[inline]
pub fn sigmoid(x: f64) -> f64 {
    if x >= 0.0 {
        1.0 / (1.0 + (-x).exp())
    } else {
        let e = x.exp();
        e / (1.0 + e)
    }
}

/// Binary entropy in nats.
pub fn binary_entropy(p: f64) -> f64 {
    if p <= 0.0 || p >= 1.0 {
        return 0.0;
    }
    -p * p.ln() - (1.0 - p) * (1.0 - p).ln()
}

fn entropy_of_logit(x: f64) -> f64 {
    if x.is_infinite() {
        return 0.0;
    }
    let p = sigmoid(x);
    p * softplus(-x) + (1.0 - p) * softplus(x)
}

fn logit_of(p: f64) -> f64 {
    if p <= 0.0 {
        f64::NEG_INFINITY
    } else if p >= 1.0 {
        f64::INFINITY
    } else {
        p.ln() - (-p).ln_1p()
    }
}

/// Independent edges with probabilities `p[i][j]`, kept together with their logits.
#[derive(Debug, Clone, PartialEq)]
pub struct ProductRandomGraph {
    n: usize,
    p: Vec<f64>,
    logit: Vec<f64>,
}

impl ProductRandomGraph {
    pub fn from_probs(n: usize, p: Vec<f64>) -> Result<Self> {
        if p.len() != n * n {
            return Err(Error::DimensionMismatch { expected: n * n, got: p.len() });
        }
        if let Some(bad) = p.iter().find(|x| !(0.0..=1.0).contains(*x)) {
            return Err(Error::InvalidInput(format!("probability {bad} outside [0, 1]")));
        }
        let logit = p.iter().map(|&x| logit_of(x)).collect();
        Ok(ProductRandomGraph { n, p, logit })
    }

    pub fn from_matrix(p: &[Vec<f64>]) -> Result<Self> {
        let n = p.len();
        ProductRandomGraph::from_probs(n, p.iter().flatten().copied().collect())
    }

    pub fn from_logits(n: usize, logit: Vec<f64>) -> Result<Self> {
        if logit.len() != n * n {
            return Err(Error::DimensionMismatch { expected: n * n, got: logit.len() });
        }
        if logit.iter().any(|x| x.is_nan()) {
            return Err(Error::InvalidInput("NaN logit".into()));
        }
        let p = logit.iter().map(|&x| sigmoid(x)).collect();
        Ok(ProductRandomGraph { n, p, logit })
    }

    pub fn uniform(n: usize, q: f64) -> Result<Self> {
        ProductRandomGraph::from_probs(n, vec![q; n * n])
    }

    /// Point mass on `g`.
    pub fn deterministic(g: &DiGraph) -> Self {
        let n = g.n();
        let p = (0..n * n)
            .map(|k| g.has_edge(k / n, k % n) as u8 as f64)
            .collect();
        ProductRandomGraph::from_probs(n, p).expect("valid probabilities")
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn p(&self, i: usize, j: usize) -> f64 {
        self.p[i * self.n + j]
    }

    pub fn logit(&self, i: usize, j: usize) -> f64 {
        self.logit[i * self.n + j]
    }

    pub fn probs(&self) -> &[f64] {
        &self.p
    }

    /// `ln p` of a cell.
    pub fn ln_p(&self, i: usize, j: usize) -> f64 {
        -softplus(-self.logit(i, j))
    }

    /// `ln (1 - p)` of a cell.
    pub fn ln_q(&self, i: usize, j: usize) -> f64 {
        -softplus(self.logit(i, j))
    }

    pub fn to_matrix(&self) -> Vec<Vec<f64>> {
        self.p.chunks(self.n).map(|r| r.to_vec()).collect()
    }

    pub fn row_sums(&self) -> Vec<f64> {
        self.p.chunks(self.n).map(|r| r.iter().sum()).collect()
    }

    pub fn col_sums(&self) -> Vec<f64> {
        (0..self.n)
            .map(|j| (0..self.n).map(|i| self.p(i, j)).sum())
            .collect()
    }
}

impl Serialize for ProductRandomGraph {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Repr {
            n: usize,
            p: Vec<Vec<f64>>,
        }
        Repr { n: self.n, p: self.to_matrix() }.serialize(s)
    }
}

/// Entropy `sum H_b(p_ij)` in nats.
pub fn entropy(f: &ProductRandomGraph) -> f64 {
    f.logit.iter().map(|&x| entropy_of_logit(x)).sum()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DualVars {
    pub s: Vec<f64>,
    pub t: Vec<f64>,
}

impl DualVars {
    pub fn zeros(n: usize) -> Self {
        DualVars { s: vec![0.0; n], t: vec![0.0; n] }
    }
}

/// Dual objective `-<r,s> - <c,t> + sum over allowed cells of softplus(s_i + t_j)`.
pub fn dual_objective(t: &EdgeType, v: &DualVars) -> f64 {
    let n = t.n();
    let mut g = 0.0;
    for i in 0..n {
        g -= t.r[i] as f64 * v.s[i];
        g -= t.c[i] as f64 * v.t[i];
    }
    for i in 0..n {
        for j in 0..n {
            if t.w.has_edge(i, j) {
                g += softplus(v.s[i] + v.t[j]);
            }
        }
    }
    g
}

/// Gradient of [`dual_objective`]: margin residuals of the induced probabilities.
pub fn dual_gradient(t: &EdgeType, v: &DualVars) -> DualVars {
    let n = t.n();
    let mut gs: Vec<f64> = t.r.iter().map(|&x| -(x as f64)).collect();
    let mut gt: Vec<f64> = t.c.iter().map(|&x| -(x as f64)).collect();
    for i in 0..n {
        for j in 0..n {
            if t.w.has_edge(i, j) {
                let p = sigmoid(v.s[i] + v.t[j]);
                gs[i] += p;
                gt[j] += p;
            }
        }
    }
    DualVars { s: gs, t: gt }
}

#[derive(Debug, Clone, Copy)]
pub struct SolverOptions {
    pub tol: f64,
    pub max_iter: usize,
    pub limit: usize,
}

impl SolverOptions {
    pub fn for_n(n: usize) -> Self {
        SolverOptions {
            tol: 1e-10 * n.max(1) as f64,
            max_iter: 500,
            limit: DEFAULT_LIMIT,
        }
    }

    pub fn with_tol(mut self, tol: f64) -> Self {
        self.tol = tol;
        self
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct SolveReport {
    pub converged: bool,
    pub iterations: usize,
    pub grad_inf_norm: f64,
    pub objective: f64,
    pub entropy_nats: f64,
    pub entropy_bits: f64,
    pub alpha: f64,
    pub margins_residual: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct MaxEntSolution {
    pub graph: ProductRandomGraph,
    pub duals: DualVars,
    pub report: SolveReport,
    pub masks: InvariantMasks,
    pub reduced: EdgeType,
}

pub fn solve_maxent(t: &EdgeType, opts: SolverOptions) -> Result<MaxEntSolution> {
    solve_maxent_from(t, opts, None)
}

/// Solves from an optional starting point (`None` starts at zero).
pub fn solve_maxent_from(
    t: &EdgeType,
    opts: SolverOptions,
    init: Option<&DualVars>,
) -> Result<MaxEntSolution> {
    let n = t.n();
    if !t.is_feasible() {
        return Err(Error::EmptyClass);
    }
    let masks = invariant_masks(t, opts.limit)?;
    let reduced = reduce_by_invariants(t, &masks)?;
    let layout = Layout::new(&reduced);
    let mut v = match init {
        Some(x) if x.s.len() == n && x.t.len() == n => x.clone(),
        Some(_) => return Err(Error::DimensionMismatch { expected: n, got: 0 }),
        None => DualVars::zeros(n),
    };
    layout.apply_gauge(&mut v);

    let mut iterations = 0;
    let mut grad_norm = inf_norm(&dual_gradient(&reduced, &v));
    let mut obj = dual_objective(&reduced, &v);
    while grad_norm > opts.tol && iterations < opts.max_iter {
        iterations += 1;
        let grad = dual_gradient(&reduced, &v);
        let g = layout.pack(&grad);
        let dir = layout
            .newton_direction(&reduced, &v, &g)
            .unwrap_or_else(|| -g.clone());
        let slope = g.dot(&dir);
        let (dir, slope) = if slope < 0.0 { (dir, slope) } else { (-g.clone(), -g.dot(&g)) };
        let mut step = 1.0;
        let mut accepted = false;
        while step > 1e-14 {
            let cand = layout.moved(&v, &dir, step);
            let cand_obj = dual_objective(&reduced, &cand);
            if cand_obj <= obj + 1e-4 * step * slope || (cand_obj - obj).abs() <= 1e-15 * obj.abs().max(1.0) {
                v = cand;
                obj = cand_obj;
                accepted = true;
                break;
            }
            step *= 0.5;
        }
        grad_norm = inf_norm(&dual_gradient(&reduced, &v));
        if !accepted {
            break;
        }
    }

    let mut logit = vec![f64::NEG_INFINITY; n * n];
    for i in 0..n {
        for j in 0..n {
            logit[i * n + j] = if masks.inv1.has_edge(i, j) {
                f64::INFINITY
            } else if reduced.w.has_edge(i, j) {
                v.s[i] + v.t[j]
            } else {
                f64::NEG_INFINITY
            };
        }
    }
    let graph = ProductRandomGraph::from_logits(n, logit)?;
    let margins_residual = margins_residual(&graph, t);
    let converged = margins_residual <= opts.tol;
    if !converged {
        return Err(Error::NonConvergence { iterations, grad_norm: margins_residual });
    }
    let h = entropy(&graph);
    let report = SolveReport {
        converged,
        iterations,
        grad_inf_norm: grad_norm,
        objective: obj,
        entropy_nats: h,
        entropy_bits: h / std::f64::consts::LN_2,
        alpha: h.exp(),
        margins_residual,
    };
    Ok(MaxEntSolution { graph, duals: v, report, masks, reduced })
}

fn inf_norm(g: &DualVars) -> f64 {
    g.s.iter().chain(&g.t).fold(0.0, |m, x| m.max(x.abs()))
}

/// Largest deviation of the expected margins from `(r, c)`.
pub fn margins_residual(f: &ProductRandomGraph, t: &EdgeType) -> f64 {
    let rs = f.row_sums();
    let cs = f.col_sums();
    rs.iter()
        .zip(&t.r)
        .chain(cs.iter().zip(&t.c))
        .fold(0.0, |m, (a, &b)| m.max((a - b as f64).abs()))
}

/// Free dual coordinates after removing empty rows/columns and one column per component.
struct Layout {
    n: usize,
    rows: Vec<usize>,
    cols: Vec<usize>,
}

impl Layout {
    fn new(t: &EdgeType) -> Self {
        let n = t.n();
        let active_rows: Vec<usize> = (0..n).filter(|&i| t.w.row(i) != 0).collect();
        let active_cols: Vec<usize> = (0..n).filter(|&j| (0..n).any(|i| t.w.has_edge(i, j))).collect();
        // Union-find over rows 0..n and columns n..2n.
        let mut parent: Vec<usize> = (0..2 * n).collect();
        fn find(p: &mut [usize], x: usize) -> usize {
            let mut r = x;
            while p[r] != r {
                r = p[r];
            }
            let mut y = x;
            while p[y] != r {
                let nxt = p[y];
                p[y] = r;
                y = nxt;
            }
            r
        }
        for i in 0..n {
            for j in 0..n {
                if t.w.has_edge(i, j) {
                    let a = find(&mut parent, i);
                    let b = find(&mut parent, n + j);
                    parent[a] = b;
                }
            }
        }
        let mut fixed_cols = Vec::new();
        let mut seen_root = std::collections::HashSet::new();
        for &j in active_cols.iter().rev() {
            if seen_root.insert(find(&mut parent, n + j)) {
                fixed_cols.push(j);
            }
        }
        let cols = active_cols.into_iter().filter(|j| !fixed_cols.contains(j)).collect();
        Layout { n, rows: active_rows, cols }
    }

    fn dim(&self) -> usize {
        self.rows.len() + self.cols.len()
    }

    fn apply_gauge(&self, v: &mut DualVars) {
        let mut out = DualVars::zeros(self.n);
        for &i in &self.rows {
            out.s[i] = v.s[i];
        }
        for &j in &self.cols {
            out.t[j] = v.t[j];
        }
        *v = out;
    }

    fn pack(&self, g: &DualVars) -> DVector<f64> {
        DVector::from_iterator(
            self.dim(),
            self.rows.iter().map(|&i| g.s[i]).chain(self.cols.iter().map(|&j| g.t[j])),
        )
    }

    fn moved(&self, v: &DualVars, dir: &DVector<f64>, step: f64) -> DualVars {
        let mut out = v.clone();
        for (k, &i) in self.rows.iter().enumerate() {
            out.s[i] += step * dir[k];
        }
        let off = self.rows.len();
        for (k, &j) in self.cols.iter().enumerate() {
            out.t[j] += step * dir[off + k];
        }
        out
    }

    fn newton_direction(&self, t: &EdgeType, v: &DualVars, g: &DVector<f64>) -> Option<DVector<f64>> {
        let m = self.dim();
        if m == 0 {
            return None;
        }
        let n = self.n;
        let mut row_idx = vec![usize::MAX; n];
        let mut col_idx = vec![usize::MAX; n];
        for (k, &i) in self.rows.iter().enumerate() {
            row_idx[i] = k;
        }
        for (k, &j) in self.cols.iter().enumerate() {
            col_idx[j] = self.rows.len() + k;
        }
        let mut h = DMatrix::<f64>::zeros(m, m);
        for i in 0..n {
            for j in 0..n {
                if !t.w.has_edge(i, j) {
                    continue;
                }
                let p = sigmoid(v.s[i] + v.t[j]);
                let q = p * (1.0 - p);
                let (a, b) = (row_idx[i], col_idx[j]);
                if a != usize::MAX {
                    h[(a, a)] += q;
                }
                if b != usize::MAX {
                    h[(b, b)] += q;
                }
                if a != usize::MAX && b != usize::MAX {
                    h[(a, b)] += q;
                    h[(b, a)] += q;
                }
            }
        }
        let scale = (0..m).fold(0.0f64, |acc, k| acc.max(h[(k, k)]));
        let mut reg = 0.0;
        for _ in 0..8 {
            let mut hr = h.clone();
            if reg > 0.0 {
                for k in 0..m {
                    hr[(k, k)] += reg;
                }
            }
            if let Some(ch) = hr.cholesky() {
                let d = -ch.solve(g);
                if d.iter().all(|x| x.is_finite()) {
                    return Some(d);
                }
            }
            reg = if reg == 0.0 { 1e-12 * scale.max(1e-300) } else { reg * 100.0 };
        }
        None
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct BarvinokReport {
    pub alpha: f64,
    pub ln_alpha: f64,
    pub count: Option<u128>,
    /// `(ln alpha - ln count) / (n ln n)` when the class was counted and `n > 1`.
    pub gap: Option<f64>,
}

/// `alpha = e^{H}` and, within the enumeration limit, the measured gap to the true count.
pub fn barvinok_bounds(t: &EdgeType, opts: SolverOptions) -> Result<BarvinokReport> {
    let sol = solve_maxent(t, opts)?;
    let ln_alpha = sol.report.entropy_nats;
    let n = t.n();
    let count = if n <= opts.limit { Some(count_class(t, opts.limit)?) } else { None };
    let gap = match count {
        Some(k) if n > 1 => Some((ln_alpha - (k as f64).ln()) / (n as f64 * (n as f64).ln())),
        _ => None,
    };
    Ok(BarvinokReport { alpha: ln_alpha.exp(), ln_alpha, count, gap })
}

/// Whether `f` has margins `(r, c)` within `tol` and vanishes off `w`.
pub fn polytope_membership(f: &ProductRandomGraph, t: &EdgeType, tol: f64) -> bool {
    if f.n() != t.n() {
        return false;
    }
    let n = t.n();
    for i in 0..n {
        for j in 0..n {
            if !t.w.has_edge(i, j) && f.p(i, j) != 0.0 {
                return false;
            }
        }
    }
    margins_residual(f, t) <= tol
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::all_graphs;
    use std::f64::consts::LN_2;

    fn ut(r: &[usize], c: &[usize]) -> EdgeType {
        EdgeType::unrestricted(r.to_vec(), c.to_vec()).unwrap()
    }

    #[test]
    fn dual_objective_examples() {
        let t = ut(&[1, 1], &[1, 1]);
        let g = dual_objective(&t, &DualVars::zeros(2));
        assert!((g - 4.0 * LN_2).abs() < 1e-12);
        let z = EdgeType::new(vec![0, 0], vec![0, 0], DiGraph::empty(2)).unwrap();
        let v = DualVars { s: vec![3.0, -1.0], t: vec![0.5, 2.0] };
        assert_eq!(dual_objective(&z, &v), 0.0);
    }

    #[test]
    fn solve_examples() {
        let t = ut(&[1, 1], &[1, 1]);
        let sol = solve_maxent(&t, SolverOptions::for_n(2)).unwrap();
        for &p in sol.graph.probs() {
            assert!((p - 0.5).abs() < 1e-12);
        }
        assert!((sol.report.entropy_nats - 4.0 * LN_2).abs() < 1e-12);
        assert!((sol.report.alpha - 16.0).abs() < 1e-9);

        let k = ut(&[3; 3], &[3; 3]);
        let sk = solve_maxent(&k, SolverOptions::for_n(3)).unwrap();
        assert!(sk.graph.probs().iter().all(|&p| p == 1.0));
        assert_eq!(sk.report.entropy_nats, 0.0);
        assert_eq!(sk.report.alpha, 1.0);

        let r3 = ut(&[1, 1, 1], &[1, 1, 1]);
        let s3 = solve_maxent(&r3, SolverOptions::for_n(3)).unwrap();
        let hb = binary_entropy(1.0 / 3.0);
        assert!((s3.report.entropy_nats - 9.0 * hb).abs() < 1e-10);
        assert!((s3.report.alpha - 307.546875).abs() < 1e-6);
        assert!(s3.graph.probs().iter().all(|&p| (p - 1.0 / 3.0).abs() < 1e-10));
    }

    #[test]
    fn entropy_examples() {
        let h = entropy(&ProductRandomGraph::uniform(2, 0.5).unwrap());
        assert!((h - 4.0 * LN_2).abs() < 1e-12);
        let g = DiGraph::from_code(3, 0b101_010_011);
        assert_eq!(entropy(&ProductRandomGraph::deterministic(&g)), 0.0);
        let h3 = entropy(&ProductRandomGraph::uniform(3, 1.0 / 3.0).unwrap());
        let by_hand = 9.0 * ((1.0f64 / 3.0) * 3f64.ln() + (2.0 / 3.0) * 1.5f64.ln());
        assert!((h3 - by_hand).abs() < 1e-12);
    }

    #[test]
    fn objective_equals_entropy_at_optimum() {
        let t = ut(&[2, 1, 1], &[2, 2, 0]);
        let sol = solve_maxent(&t, SolverOptions::for_n(3)).unwrap();
        let g = dual_objective(&sol.reduced, &sol.duals);
        assert!((g - sol.report.entropy_nats).abs() < 1e-9);
    }

    #[test]
    fn convexity_probes() {
        let t = ut(&[2, 1, 1], &[1, 2, 1]);
        let mut seed = 12345u64;
        let mut next = || {
            seed = seed.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            ((seed >> 11) as f64 / (1u64 << 53) as f64) * 6.0 - 3.0
        };
        for _ in 0..50 {
            let a = DualVars { s: (0..3).map(|_| next()).collect(), t: (0..3).map(|_| next()).collect() };
            let b = DualVars { s: (0..3).map(|_| next()).collect(), t: (0..3).map(|_| next()).collect() };
            let mid = DualVars {
                s: a.s.iter().zip(&b.s).map(|(x, y)| 0.5 * (x + y)).collect(),
                t: a.t.iter().zip(&b.t).map(|(x, y)| 0.5 * (x + y)).collect(),
            };
            let lhs = dual_objective(&t, &mid);
            let rhs = 0.5 * (dual_objective(&t, &a) + dual_objective(&t, &b));
            assert!(lhs <= rhs + 1e-12);
        }
    }

    #[test]
    fn barvinok_examples() {
        let t = ut(&[1, 1], &[1, 1]);
        let rep = barvinok_bounds(&t, SolverOptions::for_n(2)).unwrap();
        assert_eq!(rep.count, Some(2));
        let expect = 8f64.ln() / (2.0 * 2f64.ln());
        assert!((rep.gap.unwrap() - expect).abs() < 1e-10);
        let single = ut(&[2, 1], &[2, 1]);
        let rs = barvinok_bounds(&single, SolverOptions::for_n(2)).unwrap();
        assert_eq!((rs.alpha, rs.count, rs.gap), (1.0, Some(1), Some(0.0)));
    }

    #[test]
    fn polytope_examples() {
        let t = ut(&[1, 1], &[1, 1]);
        let sol = solve_maxent(&t, SolverOptions::for_n(2)).unwrap();
        assert!(polytope_membership(&sol.graph, &t, 1e-9));
        let half = ProductRandomGraph::uniform(2, 0.5).unwrap();
        assert!(!polytope_membership(&half, &ut(&[2, 2], &[2, 2]), 1e-9));
        let w = DiGraph::from_matrix(&[[0u8, 1], [1, 1]]).unwrap();
        let tw = EdgeType::new(vec![1, 1], vec![1, 1], w).unwrap();
        assert!(!polytope_membership(&half, &tw, 10.0));
    }

    #[test]
    fn restricted_solve_uses_oracle_masks() {
        let w = DiGraph::from_matrix(&[[1u8, 1, 0], [0, 1, 1], [1, 0, 1]]).unwrap();
        let t = EdgeType::new(vec![1, 1, 1], vec![1, 1, 1], w.clone()).unwrap();
        let sol = solve_maxent(&t, SolverOptions::for_n(3)).unwrap();
        assert!(polytope_membership(&sol.graph, &t, 1e-9));
        let members = all_graphs(3)
            .filter(|g| g.respects_restriction(&w) && g.out_degrees() == t.r && g.in_degrees() == t.c)
            .count();
        assert_eq!(members, 2);
        assert!((sol.report.alpha - 64.0).abs() < 1e-6);
    }

    #[test]
    fn empty_class_is_an_error() {
        assert!(matches!(
            solve_maxent(&ut(&[2, 0], &[2, 0]), SolverOptions::for_n(2)),
            Err(Error::EmptyClass)
        ));
    }
}
